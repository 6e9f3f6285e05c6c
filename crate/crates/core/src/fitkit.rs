//! Least-squares fitting of the oscillation model y = A x^alpha sin(B x^beta):
//! a coarse grid over (alpha, beta, B) with the amplitude solved in closed
//! form, then Nelder-Mead refinement of all four parameters.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("model is undefined for x <= 0 (got {0})")]
    DomainError(f64),
    #[error("no points to fit")]
    EmptyPoints,
    #[error("need at least {need} points with distinct x (got {got})")]
    TooFewPoints { need: usize, got: usize },
    #[error("input contains non-finite values")]
    NonFinite,
}

/// Fitted parameters of y = A x^alpha sin(B x^beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitParams {
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta: f64,
    pub mse: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitParams {
    pub fn new(a: f64, alpha: f64, b: f64, beta: f64) -> Self {
        Self { a, alpha, b, beta, mse: f64::NAN, iterations: 0, converged: false }
    }

    /// CSV row `rank,N1,N2,A,alpha,B,beta,mse,iterations,converged`.
    pub fn to_csv_row(&self, rank: u32, n1: u32, n2: u32) -> String {
        format!(
            "{rank},{n1},{n2},{},{},{},{},{},{},{}",
            self.a, self.alpha, self.b, self.beta, self.mse, self.iterations, self.converged
        )
    }
}

pub fn model_eval(params: &FitParams, x: f64) -> Result<f64, FitError> {
    if x <= 0.0 {
        return Err(FitError::DomainError(x));
    }
    Ok(params.a * x.powf(params.alpha) * (params.b * x.powf(params.beta)).sin())
}

/// Mean squared error of the model against the points.
pub fn mse(params: &FitParams, points: &[(f64, f64)]) -> Result<f64, FitError> {
    if points.is_empty() {
        return Err(FitError::EmptyPoints);
    }
    let mut sum = 0.0;
    for &(x, y) in points {
        let r = y - model_eval(params, x)?;
        sum += r * r;
    }
    Ok(sum / points.len() as f64)
}

/// Box constraints: outside these the model either outgrows the Hasse
/// bound or stops oscillating on the data range.
const ALPHA_RANGE: (f64, f64) = (0.0, 1.0);
const BETA_RANGE: (f64, f64) = (1e-6, 1.0 - 1e-6);
const B_RANGE: (f64, f64) = (1e-6, 2.0);

#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    /// Step for the alpha and beta grids.
    pub grid_step: f64,
    /// Number of logarithmic B steps over (0.01, 2].
    pub b_steps: usize,
    pub max_iterations: usize,
    /// Simplex diameter below which refinement stops.
    pub tolerance: f64,
    pub seed: u64,
    /// How many of the best grid cells seed a simplex refinement.
    pub refine_starts: usize,
    pub workers: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            grid_step: 0.05,
            b_steps: 60,
            max_iterations: 10_000,
            tolerance: 1e-8,
            seed: 0,
            refine_starts: 8,
            workers: 1,
        }
    }
}

fn clamp_params(p: &mut FitParams) {
    p.alpha = p.alpha.clamp(ALPHA_RANGE.0, ALPHA_RANGE.1);
    p.beta = p.beta.clamp(BETA_RANGE.0, BETA_RANGE.1);
    p.b = p.b.clamp(B_RANGE.0, B_RANGE.1);
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GridCell {
    alpha: f64,
    beta: f64,
    b: f64,
    a: f64,
    mse: f64,
}

/// Evaluate every grid cell, solving A per cell as the 1-D least squares
/// amplitude. Returns cells ordered by (alpha, beta, B).
fn grid_search(points: &[(f64, f64)], cfg: &FitConfig) -> Vec<GridCell> {
    let alphas: Vec<f64> = step_range(ALPHA_RANGE.0, ALPHA_RANGE.1, cfg.grid_step);
    let betas: Vec<f64> = step_range(cfg.grid_step, 1.0 - cfg.grid_step, cfg.grid_step);
    let bs: Vec<f64> = (0..cfg.b_steps)
        .map(|i| 0.01 * (2.0f64 / 0.01).powf((i + 1) as f64 / cfg.b_steps as f64))
        .collect();

    let xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    // x^alpha and x^beta tables shared across cells.
    let alpha_pows: Vec<Vec<f64>> =
        alphas.iter().map(|&a| xs.iter().map(|x| x.powf(a)).collect()).collect();
    let beta_pows: Vec<Vec<f64>> =
        betas.iter().map(|&be| xs.iter().map(|x| x.powf(be)).collect()).collect();

    let n = points.len() as f64;
    let mut cells: Vec<GridCell> = Vec::with_capacity(alphas.len() * betas.len() * bs.len());
    let per_alpha: Vec<Vec<GridCell>> = alpha_pows
        .par_iter()
        .enumerate()
        .map(|(ai, xa)| {
            let mut local = Vec::with_capacity(betas.len() * bs.len());
            for (bi, xb) in beta_pows.iter().enumerate() {
                for &b in &bs {
                    let mut sy = 0.0f64;
                    let mut ss = 0.0f64;
                    let mut yy = 0.0f64;
                    for j in 0..xs.len() {
                        let s = xa[j] * (b * xb[j]).sin();
                        sy += s * ys[j];
                        ss += s * s;
                        yy += ys[j] * ys[j];
                    }
                    let a = if ss > 0.0 { sy / ss } else { 0.0 };
                    // mse = (yy - 2 a sy + a^2 ss) / n
                    let mse = (yy - 2.0 * a * sy + a * a * ss) / n;
                    local.push(GridCell { alpha: alphas[ai], beta: betas[bi], b, a, mse });
                }
            }
            local
        })
        .collect();
    for local in per_alpha {
        cells.extend(local);
    }
    cells
}

fn step_range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let v = lo + step * i as f64;
        if v > hi + 1e-12 {
            break;
        }
        out.push(v);
        i += 1;
    }
    out
}

fn objective(points: &[(f64, f64)], v: &[f64; 4]) -> f64 {
    let mut p = FitParams::new(v[0], v[1], v[2], v[3]);
    clamp_params(&mut p);
    mse(&p, points).unwrap_or(f64::INFINITY)
}

/// Nelder-Mead with standard coefficients on (A, alpha, B, beta).
/// Returns (best point, best value, iterations, converged).
fn nelder_mead(
    points: &[(f64, f64)],
    start: [f64; 4],
    cfg: &FitConfig,
) -> ([f64; 4], f64, usize, bool) {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let steps = [
        0.1 * start[0].abs().max(0.1),
        0.05,
        0.1 * start[2].abs().max(0.01),
        0.05,
    ];
    let mut simplex: Vec<[f64; 4]> = vec![start];
    for dim in 0..4 {
        let mut v = start;
        v[dim] += steps[dim];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| objective(points, v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        iterations += 1;
        // Order the simplex, ties by original position for determinism.
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap().then(i.cmp(&j)));
        simplex = order.iter().map(|&i| simplex[i]).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if diameter < cfg.tolerance {
            converged = true;
            break;
        }

        let worst = simplex.len() - 1;
        let mut centroid = [0.0f64; 4];
        for v in &simplex[..worst] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= worst as f64;
        }

        let point_at = |t: f64| -> [f64; 4] {
            let mut out = [0.0; 4];
            for i in 0..4 {
                out[i] = centroid[i] + t * (centroid[i] - simplex[worst][i]);
            }
            out
        };

        let reflected = point_at(REFLECT);
        let f_reflected = objective(points, &reflected);
        if f_reflected < values[0] {
            let expanded = point_at(EXPAND);
            let f_expanded = objective(points, &expanded);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if f_reflected < values[worst - 1] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            let contracted = if f_reflected < values[worst] {
                point_at(CONTRACT)
            } else {
                point_at(-CONTRACT)
            };
            let f_contracted = objective(points, &contracted);
            if f_contracted < values[worst].min(f_reflected) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for i in 1..simplex.len() {
                    for dim in 0..4 {
                        simplex[i][dim] =
                            simplex[0][dim] + SHRINK * (simplex[i][dim] - simplex[0][dim]);
                    }
                    values[i] = objective(points, &simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..simplex.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best], values[best], iterations, converged)
}

/// Two-stage fit: exhaustive coarse grid with closed-form amplitude, then
/// simplex refinement seeded from the best grid cells. Deterministic for a
/// fixed config; ties between equal-MSE cells break toward the lowest
/// (alpha, beta, B).
pub fn fit(points: &[(f64, f64)], cfg: &FitConfig) -> Result<FitParams, FitError> {
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(FitError::NonFinite);
        }
        if x <= 0.0 {
            return Err(FitError::DomainError(x));
        }
    }
    let mut xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    if xs.len() < 8 {
        return Err(FitError::TooFewPoints { need: 8, got: xs.len() });
    }

    if points.iter().all(|&(_, y)| y == 0.0) {
        // Degenerate data: zero amplitude fits exactly; report the first
        // grid cell for the free parameters.
        let mut p = FitParams::new(0.0, 0.0, 0.01 * 200.0f64.powf(1.0 / cfg.b_steps as f64), cfg.grid_step);
        p.mse = 0.0;
        p.converged = true;
        return Ok(p);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .expect("building fit worker pool");
    let mut cells = pool.install(|| grid_search(points, cfg));
    // Stable sort keeps (alpha, beta, B) order among equal-MSE cells.
    cells.sort_by(|a, b| a.mse.partial_cmp(&b.mse).unwrap());

    let mut best: Option<FitParams> = None;
    let mut total_iterations = 0;
    let mut any_converged = false;
    for cell in cells.iter().take(cfg.refine_starts.max(1)) {
        let (v, value, iterations, converged) =
            nelder_mead(points, [cell.a, cell.alpha, cell.b, cell.beta], cfg);
        total_iterations += iterations;
        any_converged |= converged;
        let mut p = FitParams::new(v[0], v[1], v[2], v[3]);
        clamp_params(&mut p);
        p.mse = value;
        if best.as_ref().is_none_or(|b| p.mse < b.mse) {
            best = Some(p);
        }
    }
    let mut best = best.unwrap();

    // Refinement must never lose to the grid itself.
    let top = &cells[0];
    if top.mse < best.mse {
        best = FitParams::new(top.a, top.alpha, top.b, top.beta);
        best.mse = top.mse;
    }
    best.iterations = total_iterations;
    best.converged = any_converged;
    Ok(best)
}
