//! Numerical verification suites and the run report shared by the CLI.

use std::f64::consts::LN_2;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{self, BallPoint};
use crate::bn::{
    alpha_curve, almost_geodesic, bn_fit_batch, frechet_mean, BnState, FrechetConfig,
    NormalizedDomain, RotationGroup, SiegelDisk, SpdManifold,
};
use crate::error::{Error, Result};
use crate::linalg::{herm_fun, hpd_inv_sqrt, hpd_sqrt, ComplexMatrix, RealMatrix};
use crate::radar::{
    burg_representation, generate_dataset, knn_distance, knn_run, represent_all, DatasetSpec,
    ProductFeature, Split, TimeSeries,
};
use crate::reference::{
    so3_log, so3_translate, so3_translate_inv, spd_translate,
    spd_translate_inv, SpdPoint,
};
use crate::sampling::{
    random_ball_point, random_disk_point, random_rotation, random_spd, random_upper_half,
};
use crate::siegel::disk::{
    almost_geodesic as disk_geodesic, distance_kahler, distance_kahler_alt, distance_kobayashi,
    distance_naive, identity_minus_image_gram, scalar_mul,
};
use crate::siegel::{cayley, cayley_inv, upper, DiskAutomorphism, SiegelDiskPoint, UpperHalfPoint};

/// Every suite accepted by [`run_suite`], in run order.
pub const SUITES: [&str; 14] = [
    "siegel-isometry",
    "ball-isometry",
    "siegel-distances",
    "inverse-automorphism",
    "almost-geodesic",
    "reference-manifolds",
    "cayley",
    "disk-identities",
    "frechet",
    "bn",
    "burg",
    "poincare-reduction",
    "knn-distance",
    "pipeline",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One measured quantity against its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Absent only when the evaluation itself failed; see `error`.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub error: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, measured: Result<f64>, tolerance: f64, comparison: Comparison) -> Self {
        let name = name.into();
        match measured {
            Ok(m) => {
                let ok = match comparison {
                    Comparison::AtMost => m <= tolerance,
                    Comparison::AtLeast => m >= tolerance,
                };
                Self {
                    name,
                    status: if ok { Status::Pass } else { Status::Fail },
                    measured: m.is_finite().then_some(m),
                    tolerance,
                    comparison,
                    error: (!m.is_finite()).then(|| format!("measured value {m}")),
                }
            }
            Err(e) => Self {
                name,
                status: Status::Fail,
                measured: None,
                tolerance,
                comparison,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn at_most(name: impl Into<String>, measured: Result<f64>, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Comparison::AtMost)
    }

    pub fn at_least(name: impl Into<String>, measured: Result<f64>, tolerance: f64) -> Self {
        Self::new(name, measured, tolerance, Comparison::AtLeast)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match (&self.measured, &self.error) {
            (Some(m), _) => format!("{status} {}: {m:.3e} {op} {:.3e}", self.name, self.tolerance),
            (None, Some(e)) => format!("{status} {}: {e}", self.name),
            (None, None) => format!("{status} {}", self.name),
        }
    }
}

/// What a command did, with every check it ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub wall_clock_ms: u64,
    pub seed: u64,
}

impl RunReport {
    pub fn new(command: &str, config: serde_json::Value, checks: Vec<Check>, wall_clock_ms: u64, seed: u64) -> Self {
        Self {
            command: command.into(),
            config,
            passed: checks.iter().all(Check::passed),
            checks,
            wall_clock_ms,
            seed,
        }
    }

    pub fn text(&self) -> String {
        let mut out: Vec<String> = self.checks.iter().map(Check::line).collect();
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push(format!(
            "{}: {} checks, {failed} failed, {} ms",
            self.command,
            self.checks.len(),
            self.wall_clock_ms
        ));
        out.join("\n")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides the number of random samples of every randomized check.
    pub trials: Option<usize>,
    /// Scales the Kähler distance by `1 + 1e-6` inside `siegel-distances`,
    /// which must then fail.
    pub perturb_distance: bool,
}


impl VerifyOptions {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default).max(1)
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stream = SUITES.iter().position(|s| *s == suite).unwrap_or(SUITES.len());
        rng.set_stream(stream as u64 + 1);
        rng
    }
}

/// Runs the named suites in order; `all` expands to every suite.
pub fn run_suites(names: &[String], opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut expanded: Vec<&str> = Vec::new();
    for name in names {
        if name == "all" {
            expanded.extend(SUITES);
        } else if SUITES.contains(&name.as_str()) {
            expanded.push(name);
        } else {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {name:?}; expected one of all, {}",
                SUITES.join(", ")
            )));
        }
    }
    let mut checks = Vec::new();
    for s in expanded {
        checks.extend(run_suite(s, opts)?);
    }
    Ok(checks)
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = opts.rng(name);
    let rng = &mut rng;
    Ok(match name {
        "siegel-isometry" => siegel_isometry(rng, opts),
        "ball-isometry" => ball_isometry(rng, opts),
        "siegel-distances" => siegel_distances(rng, opts),
        "inverse-automorphism" => inverse_automorphism(rng, opts),
        "almost-geodesic" => almost_geodesic_suite(rng, opts),
        "reference-manifolds" => reference_manifolds(rng, opts),
        "cayley" => cayley_suite(rng, opts),
        "disk-identities" => disk_identities(rng, opts),
        "frechet" => frechet_suite(rng),
        "bn" => bn_suite(rng),
        "burg" => burg_suite(),
        "poincare-reduction" => poincare_reduction(),
        "knn-distance" => knn_distance_suite(),
        "pipeline" => pipeline_suite(opts),
        other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
    })
}

/// Largest value produced, failing on the first error or non-finite value.
fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = 0.0f64;
    for v in values {
        let v = v?;
        if !v.is_finite() {
            return Err(Error::NonFinite("measured value".into()));
        }
        m = m.max(v);
    }
    Ok(m)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn disk_points(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<SiegelDiskPoint<f64>> {
    (0..count).map(|_| random_disk_point(rng, n, 0.8)).collect()
}

fn ball_points(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<BallPoint<f64>> {
    (0..count).map(|_| random_ball_point(rng, n, 0.8)).collect()
}

fn ball_diff(a: &BallPoint<f64>, b: &BallPoint<f64>) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn siegel_isometry(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(100);
    let mut out = Vec::new();
    for n in [1, 2, 3] {
        let pts = disk_points(rng, n, 3 * trials);
        for (label, dist) in [
            ("kahler", distance_kahler::<f64> as fn(&_, &_) -> Result<f64>),
            ("kobayashi", distance_kobayashi::<f64>),
        ] {
            let err = max_of(pts.chunks(3).map(|t| {
                let phi = DiskAutomorphism::new(&t[2])?;
                let d = dist(&t[0], &t[1])?;
                Ok(rel(dist(&phi.apply(&t[0])?, &phi.apply(&t[1])?)?, d))
            }));
            out.push(Check::at_most(format!("siegel-isometry {label} n={n}"), err, 1e-8));
        }
    }
    out
}

fn ball_isometry(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(100);
    [1, 2, 8]
        .into_iter()
        .map(|n| {
            let pts = ball_points(rng, n, 3 * trials);
            let err = max_of(pts.chunks(3).map(|t| {
                let d = ball::distance(&t[0], &t[1])?;
                let a = ball::automorphism(&t[2], &t[0])?;
                let b = ball::automorphism(&t[2], &t[1])?;
                Ok(rel(ball::distance(&a, &b)?, d))
            }));
            Check::at_most(format!("ball-isometry n={n}"), err, 1e-10)
        })
        .collect()
}

fn siegel_distances(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(100);
    let scale = if opts.perturb_distance { 1.0 + 1e-6 } else { 1.0 };
    let mut out = Vec::new();
    for n in [1, 2, 3] {
        let pts = disk_points(rng, n, 2 * trials);
        let mut alt = Vec::new();
        let mut naive = Vec::new();
        for p in pts.chunks(2) {
            let d = distance_kahler(&p[0], &p[1]).map(|d| d * scale);
            alt.push(d.clone().and_then(|d| Ok(rel(distance_kahler_alt(&p[0], &p[1])?, d))));
            naive.push(d.and_then(|d| Ok(rel(distance_naive(&p[0], &p[1])?, d))));
        }
        out.push(Check::at_most(format!("siegel-distances image-vs-factored n={n}"), max_of(alt), 1e-8));
        out.push(Check::at_most(format!("siegel-distances image-vs-cross-term n={n}"), max_of(naive), 1e-8));
    }
    out
}

fn inverse_automorphism(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(100);
    let mut out = Vec::new();
    for n in [1, 2, 3] {
        let pts = disk_points(rng, n, 2 * trials);
        let err = max_of(pts.chunks(2).map(|p| {
            let phi = DiskAutomorphism::new(&p[0])?;
            let back = phi.apply_inv(&phi.apply(&p[1])?)?;
            let fwd = phi.apply(&phi.apply_inv(&p[1])?)?;
            Ok((back.matrix() - p[1].matrix())
                .max_abs()
                .max((fwd.matrix() - p[1].matrix()).max_abs()))
        }));
        out.push(Check::at_most(format!("inverse-automorphism siegel-disk n={n}"), err, 1e-9));
    }
    for n in [1, 2, 8] {
        let pts = ball_points(rng, n, 2 * trials);
        let err = max_of(pts.chunks(2).map(|p| {
            let back = ball::automorphism_inv(&p[0], &ball::automorphism(&p[0], &p[1])?)?;
            let fwd = ball::automorphism(&p[0], &ball::automorphism_inv(&p[0], &p[1])?)?;
            Ok(ball_diff(&back, &p[1]).max(ball_diff(&fwd, &p[1])))
        }));
        out.push(Check::at_most(format!("inverse-automorphism ball n={n}"), err, 1e-9));
    }
    let err = max_of((0..trials).map(|_| {
        let x: SpdPoint<f64> = random_spd(rng, 3);
        let y = random_spd(rng, 3);
        let back = spd_translate_inv(&x, &spd_translate(&x, &y)?)?;
        Ok((back.matrix() - y.matrix()).max_abs())
    }));
    out.push(Check::at_most("inverse-automorphism spd n=3", err, 1e-9));
    let err = max_of((0..trials).map(|_| {
        let x = random_rotation::<f64, _>(rng, 3.0);
        let y = random_rotation(rng, 3.0);
        let back = so3_translate_inv(&x, &so3_translate(&x, &y));
        Ok((back.matrix() - y.matrix()).max_abs())
    }));
    out.push(Check::at_most("inverse-automorphism so3", err, 1e-9));
    out
}

const CURVE_TIMES: [f64; 3] = [0.25, 0.5, 0.75];

fn almost_geodesic_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(50);
    let mut out = Vec::new();
    for n in [1, 2, 3] {
        let pts = disk_points(rng, n, 2 * trials);
        let ends = max_of(pts.chunks(2).map(|p| {
            let a = disk_geodesic(&p[0], &p[1], 0.0)?;
            let b = disk_geodesic(&p[0], &p[1], 1.0)?;
            Ok((a.matrix() - p[0].matrix())
                .max_abs()
                .max((b.matrix() - p[1].matrix()).max_abs()))
        }));
        out.push(Check::at_most(format!("almost-geodesic siegel-disk endpoints n={n}"), ends, 1e-10));
        let law = max_of(pts.chunks(2).flat_map(|p| {
            CURVE_TIMES.map(|t| {
                let z = DiskAutomorphism::new(&p[0])?.apply(&p[1])?;
                let q = z.spectral_norm();
                let scaled = scalar_mul(alpha_curve(q, t)?, &z)?;
                let zero = SiegelDiskPoint::zero(n);
                let lhs = distance_kobayashi(&zero, &scaled)?;
                let rhs = t * distance_kobayashi(&zero, &z)?;
                let along = distance_kobayashi(&p[0], &disk_geodesic(&p[0], &p[1], t)?)?;
                Ok((lhs - rhs).abs().max((along - rhs).abs()))
            })
        }));
        out.push(Check::at_most(format!("almost-geodesic siegel-disk scaling n={n}"), law, 1e-8));
    }
    for n in [1, 2, 8] {
        let pts = ball_points(rng, n, 2 * trials);
        let ends = max_of(pts.chunks(2).map(|p| {
            let a = ball::almost_geodesic(&p[0], &p[1], 0.0)?;
            let b = ball::almost_geodesic(&p[0], &p[1], 1.0)?;
            Ok(ball_diff(&a, &p[0]).max(ball_diff(&b, &p[1])))
        }));
        out.push(Check::at_most(format!("almost-geodesic ball endpoints n={n}"), ends, 1e-10));
        let law = max_of(pts.chunks(2).flat_map(|p| {
            CURVE_TIMES.map(|t| {
                let z = ball::automorphism(&p[0], &p[1])?;
                let scaled = ball::scalar_mul(alpha_curve(z.norm(), t)?, &z)?;
                let zero = BallPoint::zero(n);
                let lhs = ball::distance(&zero, &scaled)?;
                let rhs = t * ball::distance(&zero, &z)?;
                let along = ball::distance(&p[0], &ball::almost_geodesic(&p[0], &p[1], t)?)?;
                Ok((lhs - rhs).abs().max((along - rhs).abs()))
            })
        }));
        out.push(Check::at_most(format!("almost-geodesic ball scaling n={n}"), law, 1e-8));
    }
    out
}

fn reference_manifolds(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(50);
    let spd = SpdManifold { n: 3 };
    let err = max_of((0..trials).flat_map(|_| {
        let x: SpdPoint<f64> = random_spd(rng, 3);
        let y = random_spd(rng, 3);
        CURVE_TIMES.map(|t| {
            let generic = almost_geodesic(&spd, &x, &y, t)?;
            Ok((generic.matrix() - &spd_closed_form(&x, &y, t)?).max_abs())
        })
    }));
    let mut out = vec![Check::at_most("reference-manifolds spd n=3", err, 1e-9)];
    let err = max_of((0..trials).flat_map(|_| {
        let x = random_rotation::<f64, _>(rng, 1.2);
        let y = random_rotation(rng, 1.2);
        CURVE_TIMES.map(|t| {
            let generic = almost_geodesic(&RotationGroup, &x, &y, t)?;
            let w = so3_log(&so3_translate(&x, &y))?;
            let closed = x.matrix() * &skew_exp_series(&w.map(|c| c * t));
            Ok((generic.matrix() - &closed).max_abs())
        })
    }));
    out.push(Check::at_most("reference-manifolds so3", err, 1e-9));
    out
}

/// `x^{1/2}(x^{-1/2} y x^{-1/2})ᵗ x^{1/2}` from separate eigendecompositions.
fn spd_closed_form(x: &SpdPoint<f64>, y: &SpdPoint<f64>, t: f64) -> Result<RealMatrix<f64>> {
    let s = hpd_sqrt(x.matrix())?;
    let si = hpd_inv_sqrt(x.matrix())?;
    let inner = (&(&si * y.matrix()) * &si).symmetric_part();
    let p = herm_fun(&inner, |l| l.powf(t))?;
    Ok(&(&s * &p) * &s)
}

/// `exp` of the skew matrix of `w` by its power series.
fn skew_exp_series(w: &[f64; 3]) -> RealMatrix<f64> {
    let a = RealMatrix::from_rows(&[
        vec![0.0, -w[2], w[1]],
        vec![w[2], 0.0, -w[0]],
        vec![-w[1], w[0], 0.0],
    ])
    .expect("3x3");
    let mut term = RealMatrix::identity(3);
    let mut sum = RealMatrix::identity(3);
    for k in 1..40 {
        term = (&term * &a).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

fn cayley_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(50);
    let mut out = Vec::new();
    for n in [1, 2] {
        let pts: Vec<UpperHalfPoint<f64>> = (0..2 * trials).map(|_| random_upper_half(rng, n)).collect();
        let iso = max_of(pts.chunks(2).map(|p| {
            let d = upper::distance(&p[0], &p[1])?;
            Ok(rel(distance_kahler(&cayley(&p[0])?, &cayley(&p[1])?)?, d))
        }));
        out.push(Check::at_most(format!("cayley isometry n={n}"), iso, 1e-8));
        let round = max_of(pts.iter().map(|x| {
            Ok((cayley_inv(&cayley(x)?)?.to_complex() - x.to_complex()).max_abs())
        }));
        out.push(Check::at_most(format!("cayley roundtrip n={n}"), round, 1e-9));
    }
    let scalar = |v: f64| UpperHalfPoint::new(RealMatrix::zeros(1, 1), RealMatrix::from_diag(&[v]));
    let d = (|| Ok((upper::distance(&scalar(1.0)?, &scalar(2.0)?)? - LN_2).abs()))();
    out.push(Check::at_most("cayley upper-half d(i, 2i) = log 2", d, 1e-10));
    let d = (|| {
        let half = SiegelDiskPoint::new(ComplexMatrix::from_diag(&[Complex::new(0.5, 0.0)]))?;
        let d = distance_kahler(&SiegelDiskPoint::zero(1), &half)?;
        Ok((d * d - 3f64.ln().powi(2)).abs())
    })();
    out.push(Check::at_most("cayley disk d²(0, 0.5) = log² 3", d, 1e-10));
    out
}

fn disk_identities(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Vec<Check> {
    let trials = opts.trials(100);
    [2, 3]
        .into_iter()
        .map(|n| {
            let pts = disk_points(rng, n, 2 * trials);
            let err = max_of(pts.chunks(2).map(|p| {
                let z = DiskAutomorphism::new(&p[0])?.apply_matrix(p[1].matrix())?;
                let direct = (&z * &z.adjoint()).identity_minus();
                Ok((identity_minus_image_gram(&p[0], &p[1])? - direct).frobenius_norm())
            }));
            Check::at_most(format!("disk-identities image gram n={n}"), err, 1e-9)
        })
        .collect()
}

fn monotone_violation(objective: &[f64]) -> f64 {
    objective
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max)
}

fn frechet_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let disk1 = SiegelDisk::new(1);
    let scalar = |v: f64| SiegelDiskPoint::new(ComplexMatrix::from_diag(&[Complex::new(v, 0.0)]));
    let pair = (|| {
        let pts = vec![scalar(0.5)?, scalar(-0.5)?];
        Ok(frechet_mean(&disk1, &pts, &FrechetConfig::with_iterations(500))?)
    })();
    let mut out = vec![Check::at_most(
        "frechet symmetric pair",
        pair.as_ref().map(|r| r.mean.spectral_norm()).map_err(Clone::clone),
        1e-3,
    )];

    let disk2 = SiegelDisk::new(2);
    let pts = disk_points(rng, 2, 10);
    let cfg = FrechetConfig::with_iterations(300);
    let centering = (|| {
        let first = frechet_mean(&disk2, &pts, &cfg)?;
        let centered = disk2.center_all(&first.mean, &pts)?;
        let second = frechet_mean(&disk2, &centered, &cfg)?;
        let d = disk2.distance(&disk2.identity(), &second.mean)?;
        Ok((d, [first.objective, second.objective]))
    })();
    out.push(Check::at_most(
        "frechet centering law",
        centering.as_ref().map(|c| c.0).map_err(Clone::clone),
        1e-3,
    ));
    let monotone = match (&pair, &centering) {
        (Ok(p), Ok((_, objs))) => Ok(monotone_violation(&p.objective)
            .max(monotone_violation(&objs[0]))
            .max(monotone_violation(&objs[1]))),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    out.push(Check::at_most("frechet objective non-increasing", monotone, 0.0));
    out
}

fn bn_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let dom = SiegelDisk::new(2);
    let batch = disk_points(rng, 2, 8);
    let start = random_disk_point::<f64, _>(rng, 2, 0.5);
    let cfg = FrechetConfig::default();
    let run = |eta: f64, batch: &[SiegelDiskPoint<f64>]| -> Result<(Vec<SiegelDiskPoint<f64>>, BnState<_, f64>)> {
        let mut st = BnState::new(&dom, eta)?;
        st.running_mean = start.clone();
        bn_fit_batch(&dom, &st, batch, &cfg)
    };
    let full = (|| {
        let (_, st) = run(1.0, &batch)?;
        let mean = frechet_mean(&dom, &batch, &cfg)?.mean;
        Ok((st.running_mean.matrix() - mean.matrix()).max_abs())
    })();
    let none = (|| {
        let (_, st) = run(0.0, &batch)?;
        Ok((st.running_mean.matrix() - start.matrix()).max_abs())
    })();
    let single = (|| {
        let (out, _) = run(0.1, &batch[..1])?;
        Ok(out[0].matrix().max_abs())
    })();
    vec![
        Check::at_most("bn momentum 1 adopts the batch mean", full, 0.0),
        Check::at_most("bn momentum 0 keeps the running mean", none, 0.0),
        Check::at_most("bn single point maps to the origin", single, 0.0),
    ]
}

fn burg_suite() -> Vec<Check> {
    let series = TimeSeries::new(
        1,
        [1.0, 0.5, 0.5].iter().map(|&v| vec![Complex::new(v, 0.0)]).collect(),
    );
    let out = series.and_then(|s| burg_representation::<f64>(&s, 2));
    let p0 = out.as_ref().map(|o| (o.p0[(0, 0)].re - 0.5).abs()).map_err(Clone::clone);
    let w = out
        .as_ref()
        .map(|o| (o.reflections[0][(0, 0)] - Complex::new(-0.948683, 0.0)).norm())
        .map_err(Clone::clone);
    vec![
        Check::at_most("burg scalar example p0", p0, 1e-12),
        Check::at_most("burg scalar example w1", w, 1e-6),
    ]
}

fn poincare_reduction() -> Vec<Check> {
    let grid: Vec<Complex<f64>> = (0..50)
        .map(|k| Complex::from_polar(0.95 * (k as f64 + 0.5) / 50.0, 2.399_963 * k as f64))
        .collect();
    let err = max_of(grid.iter().flat_map(|a| {
        grid.iter().map(move |b| {
            let d = ball::distance(&BallPoint::new(vec![*a])?, &BallPoint::new(vec![*b])?)?;
            Ok((d - ball::poincare_distance(*a, *b)?).abs())
        })
    }));
    vec![Check::at_most("poincare-reduction 50x50 grid", err, 1e-12)]
}

fn knn_distance_suite() -> Vec<Check> {
    let feat = |p: f64| -> Result<ProductFeature<f64>> {
        ProductFeature::new(
            SpdPoint::new(RealMatrix::from_diag(&[p]))?,
            vec![SiegelDiskPoint::zero(1)],
        )
    };
    let d = (|| knn_distance(&feat(1.0)?, &feat(4.0)?))();
    vec![
        Check::at_most(
            "knn-distance scalar closed form sqrt(2) log 4",
            d.clone().map(|d| (d - 2f64.sqrt() * 4f64.ln()).abs()),
            1e-9,
        ),
        Check::at_most(
            "knn-distance scalar rounded value 1.960517",
            d.map(|d| (d - 1.960517).abs()),
            1e-6,
        ),
    ]
}

/// Synthetic dataset used by the end-to-end check.
pub fn pipeline_spec(seed: u64) -> DatasetSpec {
    DatasetSpec {
        classes: 5,
        per_class: 40,
        test_per_class: 10,
        dim: 5,
        length: 50,
        order: 3,
        seed,
    }
}

type Split4 = (Vec<ProductFeature<f64>>, Vec<usize>, Vec<ProductFeature<f64>>, Vec<usize>);

/// Features and labels of the train and test records of a generated dataset.
pub fn pipeline_features(spec: &DatasetSpec) -> Result<Split4> {
    let ds = generate_dataset::<f64>(spec)?;
    let series: Vec<&TimeSeries<f64>> = ds.records.iter().map(|r| &r.series).collect();
    let feats = represent_all(&series, spec.order)?;
    let mut out: Split4 = Default::default();
    for (r, p) in ds.records.iter().zip(feats) {
        match r.split {
            Split::Train => {
                out.0.push(p.feature);
                out.1.push(r.label);
            }
            Split::Test => {
                out.2.push(p.feature);
                out.3.push(r.label);
            }
        }
    }
    Ok(out)
}

fn pipeline_suite(opts: &VerifyOptions) -> Vec<Check> {
    let spec = pipeline_spec(opts.seed);
    let chance = 1.0 / spec.classes as f64;
    let n_test = (spec.classes * spec.test_per_class) as f64;
    let sigma3 = 3.0 * (chance * (1.0 - chance) / n_test).sqrt();
    let run = (|| {
        let (tr, trl, te, tel) = pipeline_features(&spec)?;
        let acc = knn_run(&tr, &trl, &te, &tel, spec.classes, None, 10, opts.seed)?
            .evaluation
            .accuracy;
        let mut permuted = trl.clone();
        permuted.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed));
        let perm = knn_run(&tr, &permuted, &te, &tel, spec.classes, None, 10, opts.seed)?
            .evaluation
            .accuracy;
        let again = pipeline_features(&spec)?;
        let same = again.0 == tr && again.2 == te;
        Ok((acc, perm, same))
    })();
    let get = |f: &dyn Fn(&(f64, f64, bool)) -> f64| run.as_ref().map(f).map_err(Clone::clone);
    vec![
        Check::at_least("pipeline knn accuracy", get(&|r| r.0), 2.0 * chance),
        Check::at_most("pipeline permuted-label deviation from chance", get(&|r| (r.1 - chance).abs()), sigma3),
        Check::at_most("pipeline features deterministic", get(&|r| f64::from(u8::from(!r.2))), 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            seed: 3,
            trials: Some(5),
            perturb_distance: false,
        }
    }

    #[test]
    fn cheap_suites_pass() {
        for s in SUITES.iter().filter(|s| **s != "pipeline") {
            for c in run_suite(s, &quick()).unwrap() {
                assert!(c.passed(), "{}", c.line());
            }
        }
    }

    #[test]
    fn perturbation_fails_the_distance_suite() {
        let opts = VerifyOptions {
            perturb_distance: true,
            ..quick()
        };
        let checks = run_suite("siegel-distances", &opts).unwrap();
        assert!(checks.iter().any(|c| !c.passed()));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suites(&["nope".into()], &quick()).is_err());
        assert_eq!(
            run_suites(&["burg".into(), "knn-distance".into()], &quick()).unwrap().len(),
            4
        );
    }

    #[test]
    fn report_flags_failures() {
        let checks = vec![
            Check::at_most("a", Ok(1.0), 2.0),
            Check::at_least("b", Ok(0.1), 0.4),
            Check::at_most("c", Err(Error::Range("x".into())), 1.0),
        ];
        let r = RunReport::new("verify", serde_json::json!({}), checks, 1, 0);
        assert!(!r.passed);
        assert!(r.checks[0].passed() && !r.checks[1].passed() && !r.checks[2].passed());
        assert_eq!(r.checks[2].measured, None);
        assert!(r.text().contains("FAIL b"));
    }
}
