//! Total-degree homotopy continuation over complex doubles.
//!
//! Paths live on a random affine patch of projective space, so diverging
//! paths converge to points with a vanishing homogenizing coordinate
//! instead of overflowing.

mod eval;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use eval::{FlatPoly, FlatSystem};
use eval::{norm, solve};

use crate::ed::{build_critical_system, jacobian_minor_combination, minor_count, witness_coefficients, VarietySpec, WeightVector};
use crate::error::{Error, Result};
use crate::field::{ComplexDouble, PrimeField, DEFAULT_PRIME};
use crate::poly::{specialize, Monomial, MonomialOrder, Polynomial, Ring};
use crate::seed::{self, stream};

/// Step-size control and endpoint tolerances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub endpoint_residual_tol: f64,
    pub at_infinity_threshold: f64,
    /// Coordinate-wise relative distance below which endpoints coincide.
    pub dedup_tol: f64,
    pub singular_filter_tol: f64,
    /// Lagrange multipliers are tracked as `λ / multiplier_scale`.
    pub multiplier_scale: f64,
    /// Fraction of failed paths above which a run is rejected.
    pub max_failed_fraction: f64,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.01,
            min_step: 1e-14,
            max_step: 0.1,
            corrector_tol: 1e-10,
            max_corrector_iters: 3,
            endpoint_residual_tol: 1e-10,
            at_infinity_threshold: 1e8,
            dedup_tol: 1e-6,
            singular_filter_tol: 1e-8,
            multiplier_scale: 1e4,
            max_failed_fraction: 0.1,
            max_steps: 200_000,
            seed: 1,
        }
    }
}

impl TrackerConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let tols = [
            self.initial_step,
            self.min_step,
            self.max_step,
            self.corrector_tol,
            self.endpoint_residual_tol,
            self.at_infinity_threshold,
            self.dedup_tol,
            self.singular_filter_tol,
            self.multiplier_scale,
        ];
        if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidInput("tracker tolerances must be positive".into()));
        }
        if self.min_step >= self.initial_step || self.initial_step > self.max_step {
            return Err(Error::InvalidInput("need min step < initial step <= max step".into()));
        }
        if !(0.0..=1.0).contains(&self.max_failed_fraction) {
            return Err(Error::InvalidInput("max_failed_fraction must lie in [0, 1]".into()));
        }
        if self.max_corrector_iters == 0 {
            return Err(Error::InvalidInput("at least one corrector iteration".into()));
        }
        Ok(())
    }
}

/// Random complex number of unit modulus.
pub fn unit_complex<R: Rng>(rng: &mut R) -> C {
    C::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// Start system `x_i^{d_i} − r_i`; solutions are enumerated on demand.
#[derive(Clone, Debug)]
pub struct TotalDegreeStart {
    pub degrees: Vec<u32>,
    pub constants: Vec<C>,
}

impl TotalDegreeStart {
    pub fn random(degrees: &[u32], seed_value: u64) -> Self {
        let mut rng = seed::rng(seed::derive(seed_value, stream::START));
        let constants = degrees.iter().map(|_| unit_complex(&mut rng)).collect();
        Self { degrees: degrees.to_vec(), constants }
    }

    pub fn with_constants(degrees: &[u32], constants: &[C]) -> Self {
        Self { degrees: degrees.to_vec(), constants: constants.to_vec() }
    }

    /// Number of start solutions.
    pub fn len(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `index`-th start solution in mixed-radix order.
    pub fn solution(&self, mut index: u128) -> Vec<C> {
        self.degrees
            .iter()
            .zip(&self.constants)
            .map(|(&d, r)| {
                let k = (index % d as u128) as f64;
                index /= d as u128;
                C::from_polar(r.norm().powf(1.0 / d as f64), (r.arg() + 2.0 * PI * k) / d as f64)
            })
            .collect()
    }

    pub fn solutions(&self) -> impl Iterator<Item = Vec<C>> + '_ {
        (0..self.len()).map(move |i| self.solution(i))
    }

    /// The start polynomials in `ring`.
    pub fn system(&self, ring: &Arc<Ring<ComplexDouble>>) -> Vec<Polynomial<ComplexDouble>> {
        let n = ring.nvars();
        self.degrees
            .iter()
            .zip(&self.constants)
            .enumerate()
            .map(|(k, (&d, r))| {
                Polynomial::from_terms(
                    ring,
                    vec![(Monomial::var(n, k, d as u16), C::new(1.0, 0.0)), (Monomial::one(n), -*r)],
                )
            })
            .collect()
    }
}

/// A square polynomial system plus an optional singular-locus witness.
#[derive(Clone, Debug)]
pub struct SquareSystem {
    pub equations: Vec<Polynomial<ComplexDouble>>,
    pub witness: Option<Polynomial<ComplexDouble>>,
}

impl SquareSystem {
    pub fn new(equations: Vec<Polynomial<ComplexDouble>>) -> Self {
        Self { equations, witness: None }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(|e| e.degree().unwrap_or(0)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    FiniteRegular,
    AtInfinity,
    OnSingularLocus,
    FailedPath,
}

/// One path endpoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrackedSolution {
    pub index: u128,
    /// Affine coordinates; empty when the endpoint is at infinity.
    pub point: Vec<C>,
    /// Homogeneous coordinates, homogenizing coordinate first, unit norm.
    pub projective: Vec<C>,
    pub residual: f64,
    /// Affine norm (infinite when the homogenizing coordinate vanishes).
    pub norm: f64,
    /// Relative witness value at the endpoint, when a witness was given.
    pub witness: Option<f64>,
    pub cluster: Option<usize>,
    pub status: PathStatus,
    pub t_reached: f64,
    pub steps: usize,
    /// Jacobian condition number at the polished endpoint.
    pub condition: f64,
}

/// Per-run statistics.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PathStats {
    pub total: u128,
    pub finite_regular: usize,
    pub at_infinity: usize,
    pub on_singular_locus: usize,
    pub failed: usize,
    pub seconds: f64,
    pub seed: u64,
}

impl PathStats {
    pub fn accounted(&self) -> u128 {
        (self.finite_regular + self.at_infinity + self.on_singular_locus + self.failed) as u128
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

#[derive(Clone, Debug)]
pub struct TrackRun {
    pub solutions: Vec<TrackedSolution>,
    pub stats: PathStats,
}

struct Homotopy {
    target: FlatSystem,
    start: FlatSystem,
    gamma: C,
    patch: Vec<C>,
    dim: usize,
}

impl Homotopy {
    /// `H`, `∂H/∂z` and `∂H/∂t` at `(z, t)`.
    fn eval(&self, z: &[C], t: f64) -> (Vec<C>, DMatrix<C>, Vec<C>) {
        let n = self.dim;
        let mut h = vec![C::new(0.0, 0.0); n];
        let mut ht = vec![C::new(0.0, 0.0); n];
        let mut jac = vec![C::new(0.0, 0.0); n * n];
        let a = self.gamma * (1.0 - t);
        let b = C::new(t, 0.0);
        for i in 0..n - 1 {
            let row = &mut jac[i * n..(i + 1) * n];
            let s = self.start.polys[i].eval_grad(z, a, row);
            let f = self.target.polys[i].eval_grad(z, b, row);
            h[i] = a * s + b * f;
            ht[i] = f - self.gamma * s;
        }
        let mut p = C::new(-1.0, 0.0);
        for k in 0..n {
            p += self.patch[k] * z[k];
            jac[(n - 1) * n + k] = self.patch[k];
        }
        h[n - 1] = p;
        (h, DMatrix::from_row_slice(n, n, &jac), ht)
    }

    fn velocity(&self, z: &[C], t: f64) -> Option<Vec<C>> {
        let (_, j, ht) = self.eval(z, t);
        let rhs: Vec<C> = ht.iter().map(|v| -v).collect();
        solve(j, &rhs)
    }

    fn newton_step(&self, z: &[C], t: f64) -> Option<Vec<C>> {
        let (h, j, _) = self.eval(z, t);
        let rhs: Vec<C> = h.iter().map(|v| -v).collect();
        solve(j, &rhs)
    }

    /// Condition number of the Jacobian at `(z, t)`.
    fn condition(&self, z: &[C], t: f64) -> f64 {
        let (_, j, _) = self.eval(z, t);
        let sv = j.singular_values();
        let (max, min) = (sv.max(), sv.min());
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

fn axpy(z: &[C], a: f64, v: &[C]) -> Vec<C> {
    z.iter().zip(v).map(|(x, y)| x + y * a).collect()
}

fn rk4(h: &Homotopy, z: &[C], t: f64, dt: f64) -> Option<Vec<C>> {
    let k1 = h.velocity(z, t)?;
    let k2 = h.velocity(&axpy(z, dt / 2.0, &k1), t + dt / 2.0)?;
    let k3 = h.velocity(&axpy(z, dt / 2.0, &k2), t + dt / 2.0)?;
    let k4 = h.velocity(&axpy(z, dt, &k3), t + dt)?;
    Some(
        (0..z.len())
            .map(|i| z[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
            .collect(),
    )
}

fn correct(h: &Homotopy, mut z: Vec<C>, t: f64, cfg: &TrackerConfig) -> Option<Vec<C>> {
    let mut prev = f64::INFINITY;
    for _ in 0..cfg.max_corrector_iters {
        let d = h.newton_step(&z, t)?;
        for (a, b) in z.iter_mut().zip(&d) {
            *a += b;
        }
        let size = norm(&d) / (1.0 + norm(&z));
        if size > 0.5 * prev || size > MAX_FIRST_CORRECTION {
            return None;
        }
        if size < cfg.corrector_tol {
            return Some(z);
        }
        prev = size;
    }
    None
}

struct PathEnd {
    z: Vec<C>,
    t: f64,
    steps: usize,
    /// `(1 − t, h0)` with `h0` on the unit sphere, once `1 − t ≤ 1e-2`.
    h0_checkpoint: Option<(f64, f64)>,
}

const CHECKPOINT: f64 = 1e-2;
/// Paths stalling closer than this to `t = 1` go to the endgame.
const ENDGAME_WINDOW: f64 = 1e-3;
/// Step budget inside the endgame window; regular paths need a handful.
const ENDGAME_STEPS: usize = 400;
/// Largest relative Newton correction accepted; larger ones risk a jump
/// to a neighbouring path.
const MAX_FIRST_CORRECTION: f64 = 1e-3;
/// Largest relative affine Newton update at an accepted finite endpoint.
const NEWTON_FIXED_POINT: f64 = 1e-9;
/// Decay exponent of `h0` along a stalled path that marks divergence.
const MIN_DECAY: f64 = 0.15;
const H0_SMALL: f64 = 1e-2;

fn h0_on_sphere(z: &[C]) -> f64 {
    z[0].norm() / norm(z)
}

fn track_path(h: &Homotopy, z: Vec<C>, cfg: &TrackerConfig) -> PathEnd {
    let mut z = z;
    let mut t = 0.0f64;
    let mut dt = cfg.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let mut h0_checkpoint = None;
    let mut endgame_steps = 0;
    while t < 1.0 && steps < cfg.max_steps && endgame_steps < ENDGAME_STEPS {
        if 1.0 - t < ENDGAME_WINDOW {
            endgame_steps += 1;
        }
        if h0_checkpoint.is_none() && 1.0 - t <= CHECKPOINT {
            h0_checkpoint = Some((1.0 - t, h0_on_sphere(&z)));
        }
        steps += 1;
        let step = dt.min(1.0 - t);
        let t_next = if step == 1.0 - t { 1.0 } else { t + step };
        let accepted = rk4(h, &z, t, step).and_then(|p| correct(h, p, t_next, cfg));
        match accepted {
            Some(zc) => {
                z = zc;
                t = t_next;
                streak += 1;
                if streak >= 5 {
                    dt = (dt * 2.0).min(cfg.max_step);
                    streak = 0;
                }
            }
            None => {
                dt /= 2.0;
                streak = 0;
                if dt < cfg.min_step {
                    break;
                }
            }
        }
    }
    PathEnd { z, t, steps, h0_checkpoint }
}

/// Newton at `t = 1` until the update stalls.
fn polish(h: &Homotopy, mut z: Vec<C>) -> Vec<C> {
    let mut last = f64::INFINITY;
    for _ in 0..60 {
        let Some(d) = h.newton_step(&z, 1.0) else { break };
        let size = norm(&d) / (1.0 + norm(&z));
        if !size.is_finite() {
            break;
        }
        let trial: Vec<C> = z.iter().zip(&d).map(|(a, b)| a + b).collect();
        if size > 2.0 * last && size > 1e-12 {
            break;
        }
        z = trial;
        if size < 1e-15 {
            break;
        }
        last = size;
    }
    z
}

/// Affine Newton from `x`; `Some` once the update becomes negligible.
fn affine_polish(f: &FlatSystem, mut x: Vec<C>) -> Option<Vec<C>> {
    let mut last = f64::INFINITY;
    for _ in 0..30 {
        let d = f.newton_step(&x)?;
        let size = norm(&d) / (1.0 + norm(&x));
        if !size.is_finite() || (size > last && size > NEWTON_FIXED_POINT) {
            return None;
        }
        for (a, b) in x.iter_mut().zip(&d) {
            *a += b;
        }
        if size <= NEWTON_FIXED_POINT {
            return Some(x);
        }
        last = size;
    }
    None
}

/// Everything needed to run a system: homogenized target and the witness.
struct Prepared {
    target: FlatSystem,
    affine: FlatSystem,
    witness: Option<FlatPoly>,
    degrees: Vec<u32>,
    nvars: usize,
}

fn prepare(system: &SquareSystem) -> Result<Prepared> {
    let Some(first) = system.equations.first() else {
        return Err(Error::InvalidInput("empty system".into()));
    };
    let ring = first.ring().clone();
    let n = ring.nvars();
    if system.equations.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} equations in {n} unknowns",
            system.equations.len()
        )));
    }
    let degrees = system.degrees();
    if degrees.iter().any(|&d| d == 0) {
        return Err(Error::InvalidInput("constant equation in the system".into()));
    }
    let mut names = vec!["h_0".to_string()];
    names.extend(ring.vars().iter().map(|v| format!("{v}_h")));
    let hring = Ring::new(ComplexDouble, &names, MonomialOrder::GRevLex)?;
    let homog = system
        .equations
        .iter()
        .map(|e| e.homogenize(&hring, 0).map(|p| FlatPoly::new(&p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        target: FlatSystem::new(homog, n + 1),
        affine: FlatSystem::new(system.equations.iter().map(FlatPoly::new).collect(), n),
        witness: system.witness.as_ref().map(FlatPoly::new),
        degrees,
        nvars: n,
    })
}

fn homogenized_start(start: &TotalDegreeStart, nvars: usize) -> FlatSystem {
    let polys = start
        .degrees
        .iter()
        .zip(&start.constants)
        .enumerate()
        .map(|(k, (&d, r))| {
            FlatPoly::from_parts(vec![C::new(1.0, 0.0), -*r], vec![vec![(k + 1, d)], vec![(0, d)]])
        })
        .collect();
    FlatSystem::new(polys, nvars + 1)
}

fn relative_witness(w: &FlatPoly, x: &[C]) -> f64 {
    let scale = w
        .support_vars()
        .iter()
        .map(|&k| x[k].norm())
        .fold(1.0f64, f64::max)
        .powi(w.degree() as i32);
    w.eval(x).norm() / (w.weight().max(f64::MIN_POSITIVE) * scale)
}

fn classify(p: &Prepared, hom: &Homotopy, end: PathEnd, index: u128, cfg: &TrackerConfig) -> TrackedSolution {
    let failed = |z: Vec<C>| TrackedSolution {
        index,
        point: Vec::new(),
        projective: z,
        residual: f64::INFINITY,
        norm: f64::INFINITY,
        witness: None,
        cluster: None,
        status: PathStatus::FailedPath,
        t_reached: end.t,
        steps: end.steps,
        condition: f64::INFINITY,
    };
    // A stalled path whose homogenizing coordinate keeps shrinking is
    // converging to a singular point at infinity: `h0 ~ (1 − t)^e`.
    let shrinking = end.h0_checkpoint.is_some_and(|(s, h)| {
        let (s_end, h_end) = (1.0 - end.t, h0_on_sphere(&end.z));
        if s_end <= 0.0 || s_end >= 0.5 * s {
            return h_end < 0.5 * h;
        }
        h_end < H0_SMALL && (h_end / h).ln() / (s_end / s).ln() > MIN_DECAY
    });
    if end.t < 1.0 - ENDGAME_WINDOW {
        let mut s = failed(end.z.clone());
        if shrinking {
            s.status = PathStatus::AtInfinity;
        }
        return s;
    }
    let z = polish(hom, end.z.clone());
    let zn = norm(&z);
    if !zn.is_finite() || zn == 0.0 {
        if shrinking {
            let mut s = failed(end.z.clone());
            s.status = PathStatus::AtInfinity;
            return s;
        }
        return failed(z);
    }
    let unit: Vec<C> = z.iter().map(|c| c / zn).collect();
    let residual = p.target.eval(&unit).iter().map(|c| c.norm()).fold(0.0, f64::max);
    let h0 = unit[0].norm();
    let mut sol = TrackedSolution {
        index,
        point: Vec::new(),
        projective: unit.clone(),
        residual,
        norm: if h0 == 0.0 { f64::INFINITY } else { 1.0 / h0 },
        witness: None,
        cluster: None,
        status: PathStatus::AtInfinity,
        t_reached: end.t,
        steps: end.steps,
        condition: f64::INFINITY,
    };
    sol.condition = hom.condition(&z, 1.0);
    if sol.norm > cfg.at_infinity_threshold {
        return sol;
    }
    let x: Vec<C> = unit[1..].iter().map(|c| c / unit[0]).collect();
    let rough = x.clone();
    // A regular root is a fixed point of affine Newton even when it is badly
    // scaled; endpoints still drifting to infinity are not.
    let unconverged = |mut sol: TrackedSolution| {
        sol.status = if h0 < 1e-4 || shrinking { PathStatus::AtInfinity } else { PathStatus::FailedPath };
        sol.witness = p.witness.as_ref().map(|w| relative_witness(w, &rough));
        sol
    };
    let Some(x) = affine_polish(&p.affine, x) else {
        return unconverged(sol);
    };
    let affine_res = p.affine.eval(&x).iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = x.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let xn = (1.0 + norm(&x).powi(2)).sqrt();
    let mut hz = vec![C::new(1.0 / xn, 0.0)];
    hz.extend(x.iter().map(|c| c / xn));
    sol.residual = p.target.eval(&hz).iter().map(|c| c.norm()).fold(0.0, f64::max);
    sol.projective = hz;
    sol.norm = xn;
    if sol.residual > cfg.endpoint_residual_tol || affine_res > cfg.endpoint_residual_tol * scale.powi(2) {
        return unconverged(sol);
    }
    sol.witness = p.witness.as_ref().map(|w| relative_witness(w, &x));
    sol.status = match sol.witness {
        Some(v) if v < cfg.singular_filter_tol => PathStatus::OnSingularLocus,
        _ => PathStatus::FiniteRegular,
    };
    sol.point = x;
    sol
}

/// Tracks every total-degree path of `system`.
pub fn track_all(system: &SquareSystem, cfg: &TrackerConfig) -> Result<TrackRun> {
    cfg.validate()?;
    let started = Instant::now();
    let p = prepare(system)?;
    let start = TotalDegreeStart::random(&p.degrees, cfg.seed);
    let mut rng = seed::rng(seed::derive(cfg.seed, stream::GAMMA));
    let gamma = unit_complex(&mut rng);
    let mut prng = seed::rng(seed::derive(cfg.seed, stream::PATCH));
    let scale = 1.0 / ((p.nvars + 1) as f64).sqrt();
    let patch: Vec<C> = (0..=p.nvars).map(|_| unit_complex(&mut prng) * scale).collect();
    let hom = Homotopy {
        target: p.target.clone(),
        start: homogenized_start(&start, p.nvars),
        gamma,
        patch: patch.clone(),
        dim: p.nvars + 1,
    };
    let total = start.len();
    if total > 50_000_000 {
        return Err(Error::InvalidInput(format!("{total} paths is beyond desk scale")));
    }
    let solutions: Vec<TrackedSolution> = (0..total as u64)
        .into_par_iter()
        .map(|i| {
            let affine = start.solution(i as u128);
            let mut z = Vec::with_capacity(p.nvars + 1);
            z.push(C::new(1.0, 0.0));
            z.extend(affine);
            let s: C = z.iter().zip(&patch).map(|(a, b)| a * b).sum();
            let z: Vec<C> = z.iter().map(|c| c / s).collect();
            let end = track_path(&hom, z, cfg);
            classify(&p, &hom, end, i as u128, cfg)
        })
        .collect();
    let mut stats = PathStats { total, seed: cfg.seed, ..Default::default() };
    for s in &solutions {
        match s.status {
            PathStatus::FiniteRegular => stats.finite_regular += 1,
            PathStatus::AtInfinity => stats.at_infinity += 1,
            PathStatus::OnSingularLocus => stats.on_singular_locus += 1,
            PathStatus::FailedPath => stats.failed += 1,
        }
    }
    stats.seconds = started.elapsed().as_secs_f64();
    if stats.failed as f64 > cfg.max_failed_fraction * total as f64 {
        return Err(Error::TooManyFailedPaths { failed: stats.failed, total: total as usize });
    }
    Ok(TrackRun { solutions, stats })
}

/// Distinct finite regular solutions.
#[derive(Clone, Debug)]
pub struct SolutionCount {
    pub count: usize,
    pub representatives: Vec<Vec<C>>,
}

/// Filters and deduplicates endpoints; clusters are recorded on `solutions`.
pub fn count_solutions(solutions: &mut [TrackedSolution], cfg: &TrackerConfig) -> Result<SolutionCount> {
    let mut reps: Vec<Vec<C>> = Vec::new();
    for s in solutions.iter_mut() {
        s.cluster = None;
        let keep = s.status == PathStatus::FiniteRegular
            && s.norm <= cfg.at_infinity_threshold
            && s.witness.map_or(true, |w| w >= cfg.singular_filter_tol)
            && !s.point.is_empty();
        if !keep {
            continue;
        }
        let mut found = None;
        for (k, r) in reps.iter().enumerate() {
            // Coordinate-wise relative distance: multipliers can dwarf the
            // point coordinates near the singular locus.
            let d = s
                .point
                .iter()
                .zip(r)
                .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(1.0))
                .fold(0.0f64, f64::max);
            let tol = cfg.dedup_tol;
            if d < 0.1 * tol {
                found = Some(k);
                break;
            }
            if d <= 10.0 * tol {
                return Err(Error::AmbiguousClusters(format!(
                    "endpoints {d:.3e} apart against tolerance {tol:.3e}; rerun with a new gamma"
                )));
            }
        }
        match found {
            Some(k) => s.cluster = Some(k),
            None => {
                s.cluster = Some(reps.len());
                reps.push(s.point.clone());
            }
        }
    }
    Ok(SolutionCount { count: reps.len(), representatives: reps })
}

fn random_complex<R: Rng>(rng: &mut R) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Result of a numerical ED count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericReport {
    pub count: usize,
    pub stats: PathStats,
    pub data_seed: u64,
}

/// Critical system over complex doubles with multipliers divided by
/// `multiplier_scale`. Near the singular locus multipliers grow large, and
/// scaling them down keeps those roots away from the hyperplane at infinity.
pub fn complex_critical_system(
    x: &VarietySpec,
    w: &WeightVector,
    data_seed: u64,
    multiplier_scale: f64,
) -> Result<SquareSystem> {
    let gens = x
        .parsed()?
        .iter()
        .map(|g| specialize(g, ComplexDouble))
        .collect::<Result<Vec<_>>>()?;
    let m = x.n + 1;
    let mut rng = seed::rng(seed::derive(data_seed, stream::DATA));
    let data: Vec<C> = (0..m).map(|_| random_complex(&mut rng)).collect();
    let weights: Vec<C> = match w {
        WeightVector::Unit => vec![C::new(1.0, 0.0); m],
        WeightVector::Generic { seed: s } => {
            let mut wr = seed::rng(seed::derive(*s, stream::WEIGHTS));
            (0..m).map(|_| unit_complex(&mut wr) * wr.gen_range(0.5..2.0)).collect()
        }
        WeightVector::Explicit { .. } => {
            w.resolve_gaussian(m)?.expect("explicit").iter().map(|g| g.to_complex()).collect()
        }
    };
    let sys = build_critical_system(&gens, &weights, &data)?;
    let k = minor_count(m, gens.len());
    let coeffs: Vec<C> = witness_coefficients(k, seed::derive(data_seed, stream::WITNESS), DEFAULT_PRIME)
        .into_iter()
        .map(|v| C::new(v as f64 / DEFAULT_PRIME as f64, 0.0))
        .collect();
    let witness = sys.lift(&jacobian_minor_combination(&gens, &coeffs)?)?;
    let equations = sys
        .equations
        .iter()
        .map(|e| {
            let terms = e
                .terms()
                .iter()
                .map(|(mono, c)| {
                    let d: u32 = (m..mono.nvars()).map(|k| mono.exponent(k)).sum();
                    (mono.clone(), c * multiplier_scale.powi(d as i32))
                })
                .collect();
            Polynomial::from_terms(e.ring(), terms)
        })
        .collect();
    Ok(SquareSystem { equations, witness: Some(witness) })
}

/// Number of critical points on the regular locus, by path tracking.
pub fn numeric_ed_count(x: &VarietySpec, w: &WeightVector, data_seed: u64, cfg: &TrackerConfig) -> Result<NumericReport> {
    x.check_not_isotropic(&PrimeField::default_prime())?;
    let system = complex_critical_system(x, w, data_seed, cfg.multiplier_scale)?;
    let mut run = track_all(&system, cfg)?;
    let count = count_solutions(&mut run.solutions, cfg)?;
    Ok(NumericReport { count: count.count, stats: run.stats, data_seed })
}

/// Numerical count repeated with a second gamma; the two runs must agree.
pub fn numeric_ed_consensus(
    x: &VarietySpec,
    w: &WeightVector,
    data_seed: u64,
    cfg: &TrackerConfig,
) -> Result<Vec<NumericReport>> {
    let runs = [cfg.seed, seed::derive(cfg.seed, stream::GAMMA)]
        .iter()
        .map(|&s| numeric_ed_count(x, w, data_seed, &cfg.with_seed(s)))
        .collect::<Result<Vec<_>>>()?;
    if runs[0].count != runs[1].count {
        return Err(Error::EngineDisagreement(format!(
            "{}: gamma seeds {} and {} give {} and {} solutions",
            x.display_name(),
            runs[0].stats.seed,
            runs[1].stats.seed,
            runs[0].count,
            runs[1].count
        )));
    }
    Ok(runs)
}

/// Outcome of the numerical local multiplicity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalMultiplicity {
    pub count: usize,
    pub epsilon: f64,
    pub attempts: usize,
}

/// Counts the solutions of `∇g = ε·c` inside the ball of `radius`; for an
/// isolated critical point at the origin this is the Milnor number.
pub fn local_multiplicity_oracle(
    g: &Polynomial<ComplexDouble>,
    radius: f64,
    cfg: &TrackerConfig,
) -> Result<LocalMultiplicity> {
    if g.constant_coeff().norm() > 1e-12 {
        return Err(Error::InvalidInput("germ does not vanish at the origin".into()));
    }
    let ring = g.ring().clone();
    let n = ring.nvars();
    let mut eps = 1e-6;
    let mut rng = seed::rng(seed::derive(cfg.seed, stream::PERTURB));
    for attempt in 1..=4 {
        let equations: Vec<Polynomial<ComplexDouble>> = (0..n)
            .map(|k| {
                let c = random_complex(&mut rng) * eps;
                &g.derivative(k) - &Polynomial::constant(&ring, c)
            })
            .collect();
        let run_cfg = cfg.with_seed(seed::derive(cfg.seed, attempt as u64));
        let mut run = track_all(&SquareSystem::new(equations), &run_cfg)?;
        let reps = count_solutions(&mut run.solutions, &run_cfg)?.representatives;
        let norms: Vec<f64> = reps.iter().map(|r| norm(r)).collect();
        if norms.iter().any(|&r| (r - radius).abs() < 0.1 * radius) {
            eps /= 100.0;
            continue;
        }
        return Ok(LocalMultiplicity {
            count: norms.iter().filter(|&&r| r < radius).count(),
            epsilon: eps,
            attempts: attempt,
        });
    }
    Err(Error::Inconclusive("solutions keep straddling the ball boundary".into()))
}

#[cfg(test)]
mod tests;
