//! Instance generation, benchmark orchestration and report writing on top
//! of `edgp-core`.

pub mod generate;
pub mod report;
pub mod run;

pub use generate::generate_instance;
pub use report::{write_report, ReportFormat};
pub use run::{run_benchmark, BenchRecord, BenchStatus, ExperimentSpec};
