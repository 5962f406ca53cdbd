//! Local minimization over the affine feasible set and box bounds, wrapped
//! in a multistart loop.
//!
//! The local step is a limited-memory quasi-Newton method on projected
//! gradients: every gradient and search direction is projected onto the
//! null space of the constraint rows, candidate points are clipped into
//! the box, and a backtracking line search enforces sufficient decrease.
//! Clipping can nudge an iterate slightly off the affine set; the next
//! projection pulls it back, and a final polish alternates projection and
//! clipping until the rows hold tightly again.
//!
//! Multistart draws each start from a per-start random stream, so results
//! are reproducible for a fixed seed no matter how many starts run or in
//! which order they would be scheduled.

use crate::formulations::{FormulationInstance, PointAssignment};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Independent local solves; at least 1.
    pub starts: usize,
    /// Per-start step cap; `None` means 5 times the variable count.
    pub max_iterations: Option<usize>,
    /// Stop when the projected-gradient step displacement falls below
    /// this, in infinity norm.
    pub gradient_tolerance: f64,
    /// Stop as soon as the objective reaches this value.
    pub objective_target: f64,
    /// Seed for the start-sampling streams.
    pub seed: u64,
    /// Sufficient-decrease constant of the line search, in (0, 1).
    pub armijo_constant: f64,
    /// Step shrink factor of the line search, in (0, 1).
    pub backtracking_factor: f64,
    /// Curvature pairs kept by the quasi-Newton update.
    pub memory: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 10,
            max_iterations: None,
            gradient_tolerance: 1e-8,
            objective_target: 1e-16,
            seed: 0,
            armijo_constant: 1e-4,
            backtracking_factor: 0.5,
            memory: 10,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if self.starts == 0 {
            return Err(SolverError::InvalidConfig("starts must be at least 1"));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(SolverError::InvalidConfig("gradient tolerance must be positive"));
        }
        if !(self.objective_target >= 0.0) {
            return Err(SolverError::InvalidConfig("objective target must be nonnegative"));
        }
        if !(self.armijo_constant > 0.0 && self.armijo_constant < 1.0) {
            return Err(SolverError::InvalidConfig("armijo constant must be in (0, 1)"));
        }
        if !(self.backtracking_factor > 0.0 && self.backtracking_factor < 1.0) {
            return Err(SolverError::InvalidConfig("backtracking factor must be in (0, 1)"));
        }
        if self.memory == 0 {
            return Err(SolverError::InvalidConfig("memory must be at least 1"));
        }
        Ok(())
    }

    fn resolved_max_iterations(&self, nvars: usize) -> usize {
        self.max_iterations.unwrap_or(5 * nvars.max(1))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("all {starts} starts aborted")]
    AllStartsFailed { starts: usize },
}

/// Result of one local solve.
#[derive(Debug, Clone)]
pub struct LocalOutcome {
    pub point: PointAssignment,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the start aborted on non-finite values; the point then
    /// holds the last finite iterate and `objective` is infinite.
    pub diagnostic: Option<String>,
}

/// Per-start summary inside a [`SolveResult`].
#[derive(Debug, Clone, PartialEq)]
pub struct StartRecord {
    pub start_index: usize,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub best: PointAssignment,
    pub best_objective: f64,
    /// One record per executed start, in start order; early exit on
    /// reaching the objective target leaves later starts unrun.
    pub starts: Vec<StartRecord>,
    pub wall_seconds: f64,
}

/// Euclidean projection onto `{z : A z = 0}`. Identity when the
/// formulation has no rows; idempotent always.
pub fn project_affine(f: &FormulationInstance, p: &PointAssignment) -> PointAssignment {
    let mut out = p.clone();
    f.project_rows_in_place(out.values_mut());
    out
}

/// Uniform sample inside the box bounds, then projected onto the rows.
/// Degenerate bounds (lower equals upper) pin the coordinate.
pub fn sample_start<R: Rng + ?Sized>(f: &FormulationInstance, rng: &mut R) -> PointAssignment {
    let values: Vec<f64> = f
        .lower()
        .iter()
        .zip(f.upper())
        .map(|(&lo, &hi)| if lo == hi { lo } else { rng.random_range(lo..=hi) })
        .collect();
    let mut p = PointAssignment::new(f.layout(), values);
    f.project_rows_in_place(p.values_mut());
    p
}

const LINE_SEARCH_STEPS: usize = 60;
const CURVATURE_GUARD: f64 = 1e-10;
const POLISH_ROUNDS: usize = 50;
const POLISH_TOLERANCE: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two-loop recursion: returns `-H * pg` for the limited-memory inverse
/// Hessian accumulated in `memory`, which holds `(s, y, 1/(s·y))` triples.
fn quasi_newton_direction(memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>, pg: &[f64]) -> Vec<f64> {
    let mut q = pg.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let alpha = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= alpha * yi;
        }
        alphas.push(alpha);
    }
    if let Some((s, y, _)) = memory.back() {
        let sy = dot(s, y);
        let yy = dot(y, y);
        if sy > 0.0 && yy > 0.0 {
            let scale = sy / yy;
            for qi in q.iter_mut() {
                *qi *= scale;
            }
        }
    }
    for ((s, y, rho), alpha) in memory.iter().zip(alphas.iter().rev()) {
        let beta = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (alpha - beta) * si;
        }
    }
    for qi in q.iter_mut() {
        *qi = -*qi;
    }
    q
}

/// One local minimization from `start`. The returned point satisfies the
/// rows within 1e-9 and the box bounds exactly; see [`LocalOutcome`] for
/// the abort contract.
pub fn local_solve(
    f: &FormulationInstance,
    start: &PointAssignment,
    cfg: &SolverConfig,
) -> LocalOutcome {
    assert_eq!(start.layout(), f.layout(), "start must match the layout");
    let nvars = f.layout().len();
    let max_iterations = cfg.resolved_max_iterations(nvars);

    let mut z = start.values().to_vec();
    f.project_rows_in_place(&mut z);
    f.clip_in_place(&mut z);

    let abort = |z: Vec<f64>, iterations: usize, what: &str| LocalOutcome {
        point: PointAssignment::new(f.layout(), z),
        objective: f64::INFINITY,
        iterations,
        converged: false,
        diagnostic: Some(format!("non-finite {what} encountered; start aborted")),
    };

    let mut obj = f.objective_slice(&z);
    if !obj.is_finite() {
        return abort(z, 0, "objective");
    }
    let mut grad = vec![0.0; nvars];
    f.gradient_slice_into(&z, &mut grad);
    if !grad.iter().all(|g| g.is_finite()) {
        return abort(z, 0, "gradient");
    }

    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut steepest_retry = false;

    while iterations < max_iterations {
        if obj <= cfg.objective_target {
            converged = true;
            break;
        }

        let mut pg = grad.clone();
        f.project_rows_in_place(&mut pg);
        // Size of the feasible step the projected gradient can still take:
        // at an active bound pushing outward this is 0, as it should be.
        let criticality = z
            .iter()
            .zip(&pg)
            .zip(f.lower().iter().zip(f.upper()))
            .map(|((&zi, &gi), (&lo, &hi))| (zi - (zi - gi).clamp(lo, hi)).abs())
            .fold(0.0, f64::max);
        if criticality <= cfg.gradient_tolerance {
            converged = true;
            break;
        }

        let mut direction = quasi_newton_direction(&memory, &pg);
        f.project_rows_in_place(&mut direction);
        let slope = dot(&direction, &pg);
        if !slope.is_finite() || slope >= 0.0 {
            memory.clear();
            direction = pg.iter().map(|g| -g).collect();
        }

        let mut step = 1.0;
        let mut accepted = false;
        let mut candidate = vec![0.0; nvars];
        let mut candidate_obj = f64::INFINITY;
        for _ in 0..LINE_SEARCH_STEPS {
            for i in 0..nvars {
                candidate[i] = (z[i] + step * direction[i]).clamp(f.lower()[i], f.upper()[i]);
            }
            let displacement_slope: f64 = (0..nvars)
                .map(|i| grad[i] * (candidate[i] - z[i]))
                .sum();
            candidate_obj = f.objective_slice(&candidate);
            if candidate_obj.is_finite()
                && displacement_slope < 0.0
                && candidate_obj <= obj + cfg.armijo_constant * displacement_slope
            {
                accepted = true;
                break;
            }
            step *= cfg.backtracking_factor;
        }

        iterations += 1;
        if !accepted {
            if !memory.is_empty() && !steepest_retry {
                // The quasi-Newton model misled us; retry this iterate
                // with a plain projected-gradient direction.
                memory.clear();
                steepest_retry = true;
                continue;
            }
            // No direction yields decrease at representable step sizes.
            break;
        }
        steepest_retry = false;

        let mut new_grad = vec![0.0; nvars];
        f.gradient_slice_into(&candidate, &mut new_grad);
        if !new_grad.iter().all(|g| g.is_finite()) {
            return abort(z, iterations, "gradient");
        }

        let s: Vec<f64> = candidate.iter().zip(&z).map(|(c, zi)| c - zi).collect();
        let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(n, g)| n - g).collect();
        let sy = dot(&s, &y);
        if sy > CURVATURE_GUARD * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let rho = 1.0 / sy;
            memory.push_back((s, y, rho));
            if memory.len() > cfg.memory {
                memory.pop_front();
            }
        }

        // Clipping during the step may have left the affine rows slightly
        // violated; one projection pass per accepted step keeps the drift
        // at rounding level.
        let clipped = (0..nvars).any(|i| {
            let free = z[i] + step * direction[i];
            candidate[i] != free
        });
        z = candidate;
        if clipped {
            f.project_rows_in_place(&mut z);
            f.clip_in_place(&mut z);
            obj = f.objective_slice(&z);
            if !obj.is_finite() {
                return abort(z, iterations, "objective");
            }
            f.gradient_slice_into(&z, &mut grad);
            if !grad.iter().all(|g| g.is_finite()) {
                return abort(z, iterations, "gradient");
            }
        } else {
            obj = candidate_obj;
            grad = new_grad;
        }
    }

    // Alternate projection and clipping until the rows hold tightly; a
    // point that never hit its bounds is already exact and loops zero
    // times.
    for _ in 0..POLISH_ROUNDS {
        if f.max_row_residual(&z) <= POLISH_TOLERANCE {
            break;
        }
        f.project_rows_in_place(&mut z);
        f.clip_in_place(&mut z);
    }
    obj = f.objective_slice(&z);

    LocalOutcome {
        point: PointAssignment::new(f.layout(), z),
        objective: obj,
        iterations,
        converged,
        diagnostic: None,
    }
}

/// Runs `cfg.starts` independent local solves from sampled starts and
/// keeps the best finite outcome; ties go to the earlier start. Start `i`
/// draws from stream `i` of a counter-based generator seeded with
/// `cfg.seed`, so the sequence of starts is a pure function of the seed.
/// Stops early once the best objective reaches the target. Fails only if
/// every executed start aborted.
pub fn multistart(
    f: &FormulationInstance,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolverError> {
    cfg.validate()?;
    let began = Instant::now();
    let mut records = Vec::with_capacity(cfg.starts);
    let mut best: Option<(f64, PointAssignment)> = None;

    for start_index in 0..cfg.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(start_index as u64);
        let start = sample_start(f, &mut rng);
        let outcome = local_solve(f, &start, cfg);
        let aborted = outcome.diagnostic.is_some();
        records.push(StartRecord {
            start_index,
            objective: outcome.objective,
            iterations: outcome.iterations,
            converged: outcome.converged,
            diagnostic: outcome.diagnostic,
        });
        if !aborted {
            let improves = best
                .as_ref()
                .is_none_or(|(bo, _)| outcome.objective < *bo);
            if improves {
                best = Some((outcome.objective, outcome.point));
            }
            if best.as_ref().expect("just set").0 <= cfg.objective_target {
                break;
            }
        }
    }

    let wall_seconds = began.elapsed().as_secs_f64();
    match best {
        Some((best_objective, best)) => Ok(SolveResult {
            best,
            best_objective,
            starts: records,
            wall_seconds,
        }),
        None => Err(SolverError::AllStartsFailed {
            starts: records.len(),
        }),
    }
}
