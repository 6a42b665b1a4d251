//! Lagrange critical systems on the affine cone and their exact counts.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, GaussianRationals, PrimeField, DEFAULT_PRIME, SECONDARY_PRIME};
use crate::groebner::{
    groebner_basis, reduce, saturate, saturated_count, staircase_count, Count,
};
use crate::poly::{parse_polynomial, specialize, Monomial, MonomialOrder, Polynomial, Ring};
use crate::seed::{self, stream};

/// A projective variety `X ⊂ Pⁿ` given by homogeneous generators in
/// `x0..xn`, one per unit of codimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub n: usize,
    pub codim: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub label: String,
}

impl VarietySpec {
    pub fn new<S: Into<String>>(n: usize, generators: Vec<S>, label: &str) -> Self {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        Self { n, codim: generators.len(), generators, label: label.to_string() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn ring(&self) -> Arc<Ring<GaussianRationals>> {
        Ring::indexed(GaussianRationals, "x", self.n + 1)
    }

    /// Parsed generators; checks homogeneity and the generator count.
    pub fn parsed(&self) -> Result<Vec<Polynomial<GaussianRationals>>> {
        if self.generators.len() != self.codim {
            return Err(Error::InvalidInput(format!(
                "{} generators given for codimension {}",
                self.generators.len(),
                self.codim
            )));
        }
        if self.codim == 0 || self.codim > self.n {
            return Err(Error::InvalidInput(format!("codimension {} in P^{}", self.codim, self.n)));
        }
        let ring = self.ring();
        let mut out = Vec::with_capacity(self.codim);
        for g in &self.generators {
            let p = parse_polynomial(g, &ring)?;
            if p.is_zero() || p.is_constant() || !p.is_homogeneous() {
                return Err(Error::InvalidInput(format!("generator `{g}` is not a homogeneous form")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Generators reduced to a prime field.
    pub fn over_prime(&self, field: &PrimeField) -> Result<Vec<Polynomial<PrimeField>>> {
        self.parsed()?.iter().map(|g| specialize(g, field.clone())).collect()
    }

    /// Rejects varieties inside the isotropic quadric: `x0²+⋯+xn²` must
    /// not lie in the ideal of the generators.
    pub fn check_not_isotropic(&self, field: &PrimeField) -> Result<()> {
        let gens = self.over_prime(field)?;
        let ring = gens[0].ring().clone();
        let q = isotropic_quadric(&ring, None);
        let gb = groebner_basis(&gens)?;
        if reduce(&q, &gb.generators)?.is_zero() {
            return Err(Error::InvalidInput(format!("{} lies in the isotropic quadric", self.display_name())));
        }
        Ok(())
    }

    /// Probabilistic check that the generators cut out codimension `codim`:
    /// `n + 1 − codim` random linear forms make the cone zero-dimensional.
    pub fn check_complete_intersection(&self, field: &PrimeField, seed: u64) -> Result<()> {
        let mut gens = self.over_prime(field)?;
        let ring = gens[0].ring().clone();
        let mut rng = seed::rng(seed::derive(seed, stream::PERTURB));
        for _ in 0..(self.n + 1 - self.codim) {
            let terms = (0..=self.n)
                .map(|k| (Monomial::var(self.n + 1, k, 1), random_nonzero(field, &mut rng)))
                .collect();
            gens.push(Polynomial::from_terms(&ring, terms));
        }
        let gb = groebner_basis(&gens)?;
        if !gb.is_zero_dimensional(self.n + 1) {
            return Err(Error::DegenerateData(format!(
                "{} is not a complete intersection of codimension {}",
                self.display_name(),
                self.codim
            )));
        }
        Ok(())
    }

    pub fn display_name(&self) -> String {
        if self.label.is_empty() {
            format!("V({})", self.generators.join(", "))
        } else {
            self.label.clone()
        }
    }
}

/// `w0·x0² + ⋯ + wn·xn²`, or the plain sum of squares.
pub fn isotropic_quadric<F: Field>(ring: &Arc<Ring<F>>, weights: Option<&[F::Elem]>) -> Polynomial<F> {
    let f = ring.field();
    let n = ring.nvars();
    let terms = (0..n)
        .map(|k| (Monomial::var(n, k, 2), weights.map_or_else(|| f.one(), |w| w[k].clone())))
        .collect();
    Polynomial::from_terms(ring, terms)
}

/// Appends the sphere quadric `x0² − x1² − ⋯ − xn²`.
pub fn sphere_restrict(x: &VarietySpec) -> Result<VarietySpec> {
    let mut quad = String::from("x0^2");
    for k in 1..=x.n {
        quad.push_str(&format!(" - x{k}^2"));
    }
    let ring = x.ring();
    let q = parse_polynomial(&quad, &ring)?;
    for g in x.parsed()? {
        if g == q || g == -&q {
            return Err(Error::InvalidInput("the sphere quadric is already a generator".into()));
        }
    }
    let mut generators = x.generators.clone();
    generators.push(quad);
    let label = if x.label.is_empty() { String::new() } else { format!("{} ∩ sphere", x.label) };
    let out = VarietySpec { n: x.n, codim: x.codim + 1, generators, label };
    out.check_complete_intersection(&PrimeField::default_prime(), 0x5eed)?;
    Ok(out)
}

fn random_nonzero<R: Rng>(field: &PrimeField, rng: &mut R) -> u64 {
    rng.gen_range(1..field.modulus())
}

/// How weights are chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum WeightVector {
    Unit,
    Generic { seed: u64 },
    /// Entries in the polynomial constant grammar, e.g. `"3"`, `"1/2"`, `"2 + i"`.
    Explicit { entries: Vec<String> },
}

impl WeightVector {
    pub fn is_unit(&self) -> bool {
        matches!(self, WeightVector::Unit)
    }

    pub fn resolve_gaussian(&self, len: usize) -> Result<Option<Vec<crate::field::Gaussian>>> {
        match self {
            WeightVector::Explicit { entries } => {
                if entries.len() != len {
                    return Err(Error::InvalidInput(format!(
                        "{} weights for {len} coordinates",
                        entries.len()
                    )));
                }
                let ring = Ring::indexed(GaussianRationals, "x", 1);
                let mut out = Vec::with_capacity(len);
                for e in entries {
                    let p = parse_polynomial(e, &ring)?;
                    if !p.is_constant() || p.is_zero() {
                        return Err(Error::InvalidInput(format!("weight `{e}` is not a nonzero constant")));
                    }
                    out.push(p.constant_coeff());
                }
                Ok(Some(out))
            }
            _ => Ok(None),
        }
    }

    /// Entries in a prime field; all nonzero.
    pub fn resolve(&self, field: &PrimeField, len: usize) -> Result<Vec<u64>> {
        match self {
            WeightVector::Unit => Ok(vec![1; len]),
            WeightVector::Generic { seed: s } => {
                let mut rng = seed::rng(seed::derive(*s, stream::WEIGHTS));
                Ok((0..len).map(|_| random_nonzero(field, &mut rng)).collect())
            }
            WeightVector::Explicit { .. } => {
                let g = self.resolve_gaussian(len)?.expect("explicit");
                let mut out = Vec::with_capacity(len);
                for e in &g {
                    let v = crate::field::gaussian_into(field, e)?;
                    if v == 0 {
                        return Err(Error::BadSpecialization("weight vanishes modulo the prime".into()));
                    }
                    out.push(v);
                }
                Ok(out)
            }
        }
    }
}

/// Data point `u`, regenerated from its seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub entries: Vec<u64>,
    pub seed: u64,
}

impl DataPoint {
    pub fn random(field: &PrimeField, len: usize, seed_value: u64) -> Self {
        let mut rng = seed::rng(seed::derive(seed_value, stream::DATA));
        let entries = (0..len).map(|_| random_nonzero(field, &mut rng)).collect();
        Self { entries, seed: seed_value }
    }
}

/// Square Lagrange system in `x0..xn, l1..lc`.
#[derive(Clone, Debug)]
pub struct CriticalSystem<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub equations: Vec<Polynomial<F>>,
    pub degrees: Vec<u32>,
    pub n: usize,
    pub codim: usize,
}

impl<F: Field> CriticalSystem<F> {
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Product of the equation degrees.
    pub fn bezout(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    /// Moves coordinate-ring polynomials into the system ring.
    pub fn lift(&self, p: &Polynomial<F>) -> Result<Polynomial<F>> {
        let placement: Vec<usize> = (0..=self.n).collect();
        p.embed(&self.ring, &placement)
    }
}

/// Generators plus the balance equations `w_i(x_i − u_i) − Σ_j l_j ∂f_j/∂x_i`.
pub fn build_critical_system<F: Field>(
    gens: &[Polynomial<F>],
    weights: &[F::Elem],
    data: &[F::Elem],
) -> Result<CriticalSystem<F>> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput("no generators".into()));
    };
    let coord = first.ring();
    let m = coord.nvars();
    if weights.len() != m || data.len() != m {
        return Err(Error::InvalidInput("weights and data must match the coordinates".into()));
    }
    let field = coord.field().clone();
    if weights.iter().any(|w| field.is_zero(w)) {
        return Err(Error::InvalidInput("weights must be nonzero".into()));
    }
    let c = gens.len();
    let mut names: Vec<String> = coord.vars().to_vec();
    for j in 1..=c {
        let mut name = format!("l{j}");
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
    }
    let ring = Ring::new(field.clone(), &names, MonomialOrder::GRevLex)?;
    let placement: Vec<usize> = (0..m).collect();
    let mut equations = Vec::with_capacity(m + c);
    let mut degrees = Vec::with_capacity(m + c);
    let lifted = gens.iter().map(|g| g.embed(&ring, &placement)).collect::<Result<Vec<_>>>()?;
    for g in &lifted {
        degrees.push(g.degree().unwrap_or(0));
        equations.push(g.clone());
    }
    for i in 0..m {
        let xi = Polynomial::var(&ring, i);
        let mut eq = (&xi - &Polynomial::constant(&ring, data[i].clone())).scale(&weights[i]);
        for (j, g) in lifted.iter().enumerate() {
            let dg = g.derivative(i);
            if dg.is_zero() {
                continue;
            }
            let lj = Polynomial::var(&ring, m + j);
            eq = &eq - &lj.try_mul(&dg)?;
        }
        degrees.push(eq.degree().unwrap_or(0));
        equations.push(eq);
    }
    Ok(CriticalSystem { ring, equations, degrees, n: m - 1, codim: c })
}

fn determinant<F: Field>(m: &[Vec<Polynomial<F>>]) -> Result<Polynomial<F>> {
    let k = m.len();
    if k == 1 {
        return Ok(m[0][0].clone());
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Polynomial::zero(&ring);
    for col in 0..k {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial<F>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][col].try_mul(&determinant(&minor)?)?;
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Number of maximal minors of the Jacobian of `c` generators in `m` variables.
pub fn minor_count(m: usize, c: usize) -> usize {
    combinations(m, c).len()
}

/// `Σ_k coeffs[k]·minor_k` over the maximal minors of the Jacobian, columns
/// taken in lexicographic order. It vanishes on the singular locus of the cone.
pub fn jacobian_minor_combination<F: Field>(
    gens: &[Polynomial<F>],
    coeffs: &[F::Elem],
) -> Result<Polynomial<F>> {
    let ring = gens[0].ring().clone();
    let m = ring.nvars();
    let c = gens.len();
    let jac: Vec<Vec<Polynomial<F>>> =
        gens.iter().map(|g| (0..m).map(|i| g.derivative(i)).collect()).collect();
    let cols_list = combinations(m, c);
    if coeffs.len() != cols_list.len() {
        return Err(Error::InvalidInput("one coefficient per maximal minor".into()));
    }
    let mut acc = Polynomial::zero(&ring);
    for (cols, k) in cols_list.iter().zip(coeffs) {
        let sub: Vec<Vec<Polynomial<F>>> =
            jac.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        acc = &acc + &determinant(&sub)?.scale(k);
    }
    Ok(acc)
}

/// Nonzero residues below `modulus` drawn from `seed_value`; the witness
/// coefficients shared by both engines.
pub fn witness_coefficients(count: usize, seed_value: u64, modulus: u64) -> Vec<u64> {
    let mut rng = seed::rng(seed_value);
    (0..count).map(|_| rng.gen_range(1..modulus)).collect()
}

/// A random combination of the maximal minors of the Jacobian.
pub fn singular_witness(gens: &[Polynomial<PrimeField>], seed_value: u64) -> Result<Polynomial<PrimeField>> {
    let field = gens[0].field().clone();
    let k = minor_count(gens[0].ring().nvars(), gens.len());
    jacobian_minor_combination(gens, &witness_coefficients(k, seed_value, field.modulus()))
}

/// Which saturation path produced a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationRoute {
    /// Stable rank of the witness on the zero-dimensional quotient.
    Quotient,
    /// Extra variable `t` with `1 − t·g`, then elimination.
    Elimination,
}

/// One exact count with its provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub count: u64,
    pub prime: u64,
    pub data_seed: u64,
    pub weights: WeightVector,
    pub route: SaturationRoute,
    /// Solutions of the critical ideal before discarding the singular locus.
    pub unsaturated: Option<u64>,
    pub witness: String,
    pub bezout: u128,
    pub seconds: f64,
}

/// Exact count of critical points on the regular locus of `X` for weights
/// `w` and random data, over `F_prime`.
pub fn symbolic_ed_count(x: &VarietySpec, w: &WeightVector, prime: u64, seed_value: u64) -> Result<CountReport> {
    let started = Instant::now();
    let field = PrimeField::new(prime)?;
    x.check_not_isotropic(&field)?;
    let gens = x.over_prime(&field)?;
    let m = x.n + 1;
    let weights = w.resolve(&field, m)?;
    let data = DataPoint::random(&field, m, seed_value);
    let sys = build_critical_system(&gens, &weights, &data.entries)?;
    let gb = groebner_basis(&sys.equations)?;
    let nv = sys.nvars();

    let mut last_err = None;
    for attempt in 0..3u64 {
        let ws = seed::derive(seed_value, stream::WITNESS + 16 * attempt);
        let cs = seed::derive(seed_value, stream::WITNESS_CHECK + 16 * attempt);
        let witness = singular_witness(&gens, ws)?;
        let check = singular_witness(&gens, cs)?;
        let (count, route, unsat) = if gb.is_zero_dimensional(nv) {
            let a = saturated_count(&gb, nv, &sys.lift(&witness)?)?;
            let b = saturated_count(&gb, nv, &sys.lift(&check)?)?;
            let total = staircase_count(&gb, nv).finite();
            if a != b {
                last_err = Some(Error::UnluckySpecialization(format!(
                    "witness combinations disagree: {a} vs {b}"
                )));
                continue;
            }
            (a, SaturationRoute::Quotient, total)
        } else {
            let sat = saturate(&sys.equations, &sys.lift(&witness)?)?;
            let sgb = groebner_basis(&sat)?;
            match staircase_count(&sgb, nv) {
                Count::Finite(k) => (k, SaturationRoute::Elimination, None),
                Count::Infinite => {
                    return Err(Error::DegenerateData(format!(
                        "critical ideal of {} stays positive-dimensional after saturation; resample the data",
                        x.display_name()
                    )))
                }
            }
        };
        if count == 0 && unsat.unwrap_or(0) > 0 {
            last_err = Some(Error::UnluckySpecialization(
                "singular-locus witness annihilates every solution".into(),
            ));
            continue;
        }
        return Ok(CountReport {
            count,
            prime,
            data_seed: seed_value,
            weights: w.clone(),
            route,
            unsaturated: unsat,
            witness: witness.to_string(),
            bezout: sys.bezout(),
            seconds: started.elapsed().as_secs_f64(),
        });
    }
    Err(last_err.unwrap_or_else(|| Error::UnluckySpecialization("witness resampling exhausted".into())))
}

/// Result record of an ED computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EDResult {
    pub label: String,
    pub method: String,
    pub ued: Option<u64>,
    pub ged: Option<u64>,
    pub weighted: Option<u64>,
    pub defect: Option<i64>,
    pub primes: Vec<u64>,
    pub seeds: Vec<u64>,
    pub witness: Option<String>,
    pub wall_seconds: f64,
}

impl EDResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Options of a defect run.
#[derive(Clone, Debug)]
pub struct DefectOptions {
    pub primes: [u64; 2],
    pub seed: u64,
}

impl Default for DefectOptions {
    fn default() -> Self {
        Self { primes: [DEFAULT_PRIME, SECONDARY_PRIME], seed: 1 }
    }
}

/// GED and UED over two primes with independent data seeds, concurrently.
pub fn defect(x: &VarietySpec, opts: &DefectOptions) -> Result<EDResult> {
    let started = Instant::now();
    x.parsed()?;
    let jobs: Vec<(usize, u64, WeightVector, u64)> = opts
        .primes
        .iter()
        .enumerate()
        .flat_map(|(k, &p)| {
            let s = seed::derive(opts.seed, 1000 + k as u64);
            [
                (k, p, WeightVector::Generic { seed: seed::derive(s, 7) }, seed::derive(s, 11)),
                (k, p, WeightVector::Unit, seed::derive(s, 13)),
            ]
        })
        .collect();
    use rayon::prelude::*;
    let reports: Vec<Result<CountReport>> =
        jobs.par_iter().map(|(_, p, w, s)| symbolic_ed_count(x, w, *p, *s)).collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let (g1, u1, g2, u2) = (reports[0].count, reports[1].count, reports[2].count, reports[3].count);
    if g1 != g2 || u1 != u2 {
        return Err(Error::UnluckySpecialization(format!(
            "{}: prime {} gives GED {g1}, UED {u1}; prime {} gives GED {g2}, UED {u2}",
            x.display_name(),
            opts.primes[0],
            opts.primes[1]
        )));
    }
    Ok(EDResult {
        label: x.display_name(),
        method: "symbolic".into(),
        ued: Some(u1),
        ged: Some(g1),
        weighted: None,
        defect: Some(g1 as i64 - u1 as i64),
        primes: opts.primes.to_vec(),
        seeds: reports.iter().map(|r| r.data_seed).collect(),
        witness: Some(reports[0].witness.clone()),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::groebner_basis;

    fn fp() -> PrimeField {
        PrimeField::default_prime()
    }

    #[test]
    fn hyperplane_system_shape() {
        let x = VarietySpec::new(1, vec!["x0 + x1"], "line");
        let f = fp();
        let gens = x.over_prime(&f).unwrap();
        let sys = build_critical_system(&gens, &[1, 1], &[3, 5]).unwrap();
        assert_eq!(sys.equations.len(), 3);
        assert_eq!(sys.nvars(), 3);
        let r = &sys.ring;
        assert_eq!(sys.equations[1], parse_polynomial("x0 - 3 - l1", r).unwrap());
        assert_eq!(sys.equations[2], parse_polynomial("x1 - 5 - l1", r).unwrap());
    }

    #[test]
    fn system_shapes_from_examples() {
        let q = VarietySpec::new(3, vec!["x1*x2 + i*x0*x2 - x3^2"], "");
        let sys = build_critical_system(&q.over_prime(&fp()).unwrap(), &[1; 4], &[1, 2, 3, 4]).unwrap();
        assert_eq!(sys.equations.len(), 5);
        assert_eq!(sys.degrees, vec![2, 2, 2, 2, 2]);
        let s = sphere_restrict(&VarietySpec::new(4, vec!["x0^2 - x3*x4"], "")).unwrap();
        assert_eq!(s.generators.len(), 2);
        let sys = build_critical_system(&s.over_prime(&fp()).unwrap(), &[1; 5], &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!((sys.equations.len(), sys.nvars()), (7, 7));
    }

    #[test]
    fn generator_count_must_match_codimension() {
        let mut x = VarietySpec::new(2, vec!["x0*x1 - x2^2"], "");
        x.codim = 2;
        assert!(x.parsed().is_err());
        let bad = VarietySpec::new(2, vec!["x0 + x1^2"], "");
        assert!(bad.parsed().is_err());
    }

    #[test]
    fn isotropic_varieties_rejected() {
        let f = fp();
        assert!(VarietySpec::new(1, vec!["x0^2 + x1^2"], "").check_not_isotropic(&f).is_err());
        assert!(VarietySpec::new(1, vec!["x0 - i*x1"], "").check_not_isotropic(&f).is_err());
        assert!(VarietySpec::new(2, vec!["x0*x1 - x2^2"], "").check_not_isotropic(&f).is_ok());
    }

    #[test]
    fn no_critical_point_at_the_cone_vertex() {
        let f = fp();
        for spec in [
            VarietySpec::new(3, vec!["x0*x3 - x1*x2"], ""),
            VarietySpec::new(3, vec!["x1*x2 + i*x0*x2 - x3^2"], ""),
        ] {
            let gens = spec.over_prime(&f).unwrap();
            let data = DataPoint::random(&f, 4, 9);
            let sys = build_critical_system(&gens, &[1; 4], &data.entries).unwrap();
            let mut eqs = sys.equations.clone();
            for k in 0..4 {
                eqs.push(Polynomial::var(&sys.ring, k));
            }
            assert!(groebner_basis(&eqs).unwrap().is_unit_ideal());
        }
    }

    #[test]
    fn hyperplane_has_one_critical_point() {
        let x = VarietySpec::new(2, vec!["x0 + x1 + x2"], "");
        for w in [WeightVector::Unit, WeightVector::Generic { seed: 4 }] {
            assert_eq!(symbolic_ed_count(&x, &w, DEFAULT_PRIME, 3).unwrap().count, 1);
        }
    }

    #[test]
    fn plane_conic_counts() {
        // Smooth conic: GED = 4 = UED for the circle-free parabola-like conic,
        // and the circle x1² + x2² = x0² has UED 2.
        let conic = VarietySpec::new(2, vec!["x0*x1 - x2^2"], "");
        let r = defect(&conic, &DefectOptions::default()).unwrap();
        assert_eq!((r.ged, r.ued), (Some(4), Some(4)));
        let circle = VarietySpec::new(2, vec!["x1^2 + x2^2 - x0^2"], "");
        let r = defect(&circle, &DefectOptions::default()).unwrap();
        assert_eq!((r.ged, r.ued, r.defect), (Some(4), Some(2), Some(2)));
    }

    #[test]
    fn cusp_is_discarded_by_saturation() {
        // Generic weights: degree plus class, 3 + (6 − 3) for a cuspidal cubic.
        let cusp = VarietySpec::new(2, vec!["x0*x2^2 - x1^3"], "");
        let r = symbolic_ed_count(&cusp, &WeightVector::Generic { seed: 2 }, DEFAULT_PRIME, 5).unwrap();
        assert_eq!(r.count, 6);
    }

    #[test]
    fn weights_resolve() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(WeightVector::Unit.resolve(&f, 3).unwrap(), vec![1, 1, 1]);
        let e = WeightVector::Explicit { entries: vec!["2".into(), "1/2".into(), "i".into()] };
        let r = e.resolve(&PrimeField::with_residue(13, 5).unwrap(), 3).unwrap();
        assert_eq!(r, vec![2, 7, 5]);
        let g = WeightVector::Generic { seed: 1 }.resolve(&f, 50).unwrap();
        assert!(g.iter().all(|&v| v > 0 && v < 13));
        assert_eq!(g, WeightVector::Generic { seed: 1 }.resolve(&f, 50).unwrap());
    }

    #[test]
    fn spec_json_round_trip() {
        let x = VarietySpec::new(4, vec!["x0^2 - x3*x4"], "binomial");
        let text = serde_json::to_string(&x).unwrap();
        assert!(text.contains("\"codim\":1"));
        assert_eq!(VarietySpec::from_json(&text).unwrap(), x);
    }
}
