//! Fréchet mean `argminₓ Σⱼ wⱼ d²(xⱼ, x)` by descent in a Euclidean chart.

use rayon::prelude::*;

use super::domain::FrechetChart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Growth factor applied to the global step after an accepted step.
const STEP_GROWTH: f64 = 1.5;
/// Step halvings tried before an iteration is declared stalled.
const MAX_HALVINGS: usize = 40;
/// Sufficient-decrease constant of the acceptance test.
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GradientMode {
    /// Central differences with the given step.
    CentralDifference { step: f64 },
    /// The domain's closed-form gradient, falling back to central
    /// differences with step `1e-5` when the domain has none.
    Analytic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepPolicy {
    /// Per-coordinate scaling by a decaying average of squared gradients
    /// (the Adadelta/RMSprop accumulator, bias-corrected), times a global
    /// step that grows on success and halves when the objective would rise.
    Adaptive { rho: f64, initial_step: f64 },
    /// Plain gradient steps with the same grow/halve rule.
    Backtracking { initial_step: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrechetConfig {
    pub iterations: usize,
    pub step: StepPolicy,
    pub gradient: GradientMode,
    /// Iteration stops once the gradient norm falls to this value.
    pub tolerance: f64,
}

impl Default for FrechetConfig {
    fn default() -> Self {
        Self {
            iterations: 5,
            step: StepPolicy::Adaptive {
                rho: 0.9,
                initial_step: 0.1,
            },
            gradient: GradientMode::CentralDifference { step: 1e-5 },
            tolerance: 1e-8,
        }
    }
}

impl FrechetConfig {
    pub fn with_iterations(iterations: usize) -> Self {
        Self {
            iterations,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct FrechetReport<P, T> {
    pub mean: P,
    pub params: Vec<T>,
    /// Objective at the start and after every iteration; non-increasing.
    pub objective: Vec<T>,
    /// Gradient norm at the returned parameters.
    pub gradient_norm: T,
    pub iterations: usize,
    /// True when the gradient tolerance was met or no descent step remained.
    pub converged: bool,
}

/// Solver failure, carrying the last iterate that evaluated cleanly.
#[derive(Clone, Debug)]
pub struct FrechetFailure<P> {
    pub error: Error,
    pub iteration: usize,
    pub last: Option<P>,
}

impl<P> From<FrechetFailure<P>> for Error {
    fn from(f: FrechetFailure<P>) -> Self {
        Error::Frechet {
            iteration: f.iteration,
            cause: Box::new(f.error),
        }
    }
}

type Outcome<D, T> =
    std::result::Result<FrechetReport<<D as super::NormalizedDomain<T>>::Point, T>, FrechetFailure<<D as super::NormalizedDomain<T>>::Point>>;

/// Fréchet mean with uniform weights.
pub fn frechet_mean<T: Scalar, D: FrechetChart<T>>(
    dom: &D,
    points: &[D::Point],
    cfg: &FrechetConfig,
) -> Outcome<D, T> {
    let w = vec![T::one(); points.len()];
    frechet_mean_weighted(dom, points, &w, cfg)
}

fn fail<P>(error: Error, iteration: usize, last: Option<P>) -> FrechetFailure<P> {
    FrechetFailure {
        error,
        iteration,
        last,
    }
}

/// Weighted Fréchet mean; weights are normalized to sum to one.
pub fn frechet_mean_weighted<T: Scalar, D: FrechetChart<T>>(
    dom: &D,
    points: &[D::Point],
    weights: &[T],
    cfg: &FrechetConfig,
) -> Outcome<D, T> {
    let setup = |e| fail(e, 0, None);
    if points.is_empty() {
        return Err(setup(Error::InvalidArgument("empty batch".into())));
    }
    if cfg.iterations == 0 {
        return Err(setup(Error::InvalidArgument("iterations must be at least one".into())));
    }
    if weights.len() != points.len() {
        return Err(setup(Error::Shape(format!(
            "{} weights for {} points",
            weights.len(),
            points.len()
        ))));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
        return Err(setup(Error::InvalidArgument("weights must be finite and non-negative".into())));
    }
    let total: T = weights.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(setup(Error::InvalidArgument("weights sum to zero".into())));
    }
    let w: Vec<T> = weights.iter().map(|v| *v / total).collect();

    if points.iter().all(|p| *p == points[0]) {
        return Ok(FrechetReport {
            mean: points[0].clone(),
            params: Vec::new(),
            objective: vec![T::zero()],
            gradient_norm: T::zero(),
            iterations: 0,
            converged: true,
        });
    }

    let mut theta = dom.chart_init(points).map_err(setup)?;
    let mut x = dom.from_chart(&theta).map_err(setup)?;
    let mut f = objective(dom, &x, points, &w).map_err(setup)?;
    let mut history = vec![f];
    let mut lr = T::lit(match cfg.step {
        StepPolicy::Adaptive { initial_step, .. } | StepPolicy::Backtracking { initial_step } => {
            initial_step
        }
    });
    let mut acc = vec![T::zero(); theta.len()];
    let mut converged = false;
    let mut done = 0;
    let mut grad = None;

    for it in 1..=cfg.iterations {
        let g = gradient(dom, &theta, points, &w, cfg.gradient)
            .map_err(|e| fail(e, it, Some(x.clone())))?;
        if g.iter().any(|v| !v.is_finite()) {
            return Err(fail(
                Error::NonFinite("Fréchet objective gradient".into()),
                it,
                Some(x),
            ));
        }
        let gn = norm(&g);
        if gn <= T::lit(cfg.tolerance) {
            grad = Some(gn);
            converged = true;
            break;
        }
        let dir: Vec<T> = match cfg.step {
            StepPolicy::Adaptive { rho, .. } => {
                let rho = T::lit(rho);
                let correction = T::one() - rho.powi(it as i32);
                acc.iter_mut()
                    .zip(&g)
                    .map(|(a, gi)| {
                        *a = rho * *a + (T::one() - rho) * *gi * *gi;
                        *gi / ((*a / correction).sqrt() + T::epsilon())
                    })
                    .collect()
            }
            StepPolicy::Backtracking { .. } => g.clone(),
        };
        let slope: T = g.iter().zip(&dir).map(|(a, b)| *a * *b).sum();

        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<T> = theta.iter().zip(&dir).map(|(t, d)| *t - lr * *d).collect();
            let candidate = dom
                .from_chart(&trial)
                .and_then(|p| objective(dom, &p, points, &w).map(|v| (p, v)));
            if let Ok((p, v)) = candidate {
                if v.is_finite() && v <= f - T::lit(ARMIJO) * lr * slope {
                    theta = trial;
                    x = p;
                    f = v;
                    lr *= T::lit(STEP_GROWTH);
                    accepted = true;
                    break;
                }
            }
            lr *= T::lit(0.5);
        }
        done = it;
        history.push(f);
        if !accepted {
            // No descent step at working precision.
            grad = Some(gn);
            converged = true;
            break;
        }
    }

    let gradient_norm = match grad {
        Some(g) => g,
        None => {
            let g = gradient(dom, &theta, points, &w, cfg.gradient)
                .map_err(|e| fail(e, done, Some(x.clone())))?;
            let gn = norm(&g);
            converged = gn <= T::lit(cfg.tolerance);
            gn
        }
    };
    Ok(FrechetReport {
        mean: x,
        params: theta,
        objective: history,
        gradient_norm,
        iterations: done,
        converged,
    })
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|a| *a * *a).sum::<T>().sqrt()
}

/// `Σⱼ wⱼ d²(pⱼ, x)`, summed in a fixed order.
pub fn objective<T: Scalar, D: FrechetChart<T>>(
    dom: &D,
    x: &D::Point,
    points: &[D::Point],
    weights: &[T],
) -> Result<T> {
    let d2 = dom.sq_distances_to(x, points)?;
    Ok(d2.iter().zip(weights).map(|(d, w)| *d * *w).sum())
}

/// Gradient of the chart objective at `params`.
pub fn gradient<T: Scalar, D: FrechetChart<T>>(
    dom: &D,
    params: &[T],
    points: &[D::Point],
    weights: &[T],
    mode: GradientMode,
) -> Result<Vec<T>> {
    let step = match mode {
        GradientMode::Analytic => {
            if let Some(g) = dom.objective_gradient(params, points, weights) {
                return g;
            }
            1e-5
        }
        GradientMode::CentralDifference { step } => step,
    };
    let h = T::lit(step);
    let eval = |k: usize, delta: T| -> Result<T> {
        let mut p = params.to_vec();
        p[k] += delta;
        objective(dom, &dom.from_chart(&p)?, points, weights)
    };
    (0..params.len())
        .into_par_iter()
        .map(|k| Ok((eval(k, h)? - eval(k, -h)?) / (h + h)))
        .collect()
}
