//! Topological assembly of the ED degree defect from local data.
//!
//! Local topology enters only through integers: Euler characteristics of
//! Milnor fibers and complex links, Euler obstruction values, and the
//! compactly supported Euler characteristics of links between strata. For
//! surface germs given through a finite cover of the plane the Milnor fiber
//! characteristics are computed from Milnor numbers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::GaussianRationals;
use crate::groebner::{milnor_number, Count};
use crate::poly::{parse_polynomial, MonomialOrder, Polynomial, Ring};

/// `χ` of the Milnor fiber of a plane germ divided by the degree of the
/// cover it was pulled back through: `(1 − μ) / d`.
pub fn cover_chi(model: &Polynomial<GaussianRationals>, d: u32) -> Result<i64> {
    if model.ring().nvars() != 2 {
        return Err(Error::InvalidInput(format!(
            "cover models are plane germs; got {} variables",
            model.ring().nvars()
        )));
    }
    if d == 0 {
        return Err(Error::InvalidInput("cover degree must be positive".into()));
    }
    let mu = match milnor_number(model)? {
        Count::Finite(m) => m as i64,
        Count::Infinite => return Err(Error::NonIsolated("the model has a non-isolated critical point".into())),
    };
    let chi = 1 - mu;
    if chi % d as i64 != 0 {
        return Err(Error::InvalidInput(format!("cover degree {d} does not divide 1 − μ = {chi}")));
    }
    Ok(chi / d as i64)
}

/// Local data at an isolated point of the critical locus.
///
/// Either a cover description (`cover_degree`, `model`, `linear_model`) or
/// precomputed values (`chi_eu_mf`, `eu_at_point`), not both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSingularityDatum {
    pub label: String,
    pub dim_x: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_degree: Option<u32>,
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear_model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_eu_mf: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eu_at_point: Option<i64>,
}

fn default_vars() -> Vec<String> {
    vec!["u".into(), "v".into()]
}

/// A resolved point: `mu_p` is the vanishing-cycle value at the point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointTerm {
    pub label: String,
    pub chi_milnor_fiber: Option<i64>,
    pub chi_complex_link: Option<i64>,
    pub mu_p: i64,
    pub contribution: i64,
}

impl LocalSingularityDatum {
    pub fn cover(label: &str, dim_x: u32, d: u32, model: &str, linear_model: &str) -> Self {
        Self {
            label: label.into(),
            dim_x,
            cover_degree: Some(d),
            vars: default_vars(),
            model: Some(model.into()),
            linear_model: Some(linear_model.into()),
            chi_eu_mf: None,
            eu_at_point: None,
        }
    }

    pub fn euler(label: &str, dim_x: u32, chi_eu_mf: i64, eu_at_point: i64) -> Self {
        Self {
            label: label.into(),
            dim_x,
            cover_degree: None,
            vars: default_vars(),
            model: None,
            linear_model: None,
            chi_eu_mf: Some(chi_eu_mf),
            eu_at_point: Some(eu_at_point),
        }
    }

    fn is_cover(&self) -> bool {
        self.cover_degree.is_some() || self.model.is_some() || self.linear_model.is_some()
    }

    fn is_euler(&self) -> bool {
        self.chi_eu_mf.is_some() || self.eu_at_point.is_some()
    }

    /// Evaluates the datum's local Euler characteristics.
    pub fn resolve(&self) -> Result<PointTerm> {
        let sign = if self.dim_x % 2 == 1 { 1 } else { -1 };
        let unresolved = |why: &str| Error::InvalidInput(format!("point `{}`: {why}", self.label));
        match (self.is_cover(), self.is_euler()) {
            (true, true) => Err(unresolved("both cover data and Euler data given")),
            (false, false) => Err(unresolved("no local data")),
            (true, false) => {
                let (Some(d), Some(g), Some(l)) = (self.cover_degree, &self.model, &self.linear_model) else {
                    return Err(unresolved("cover data needs cover_degree, model and linear_model"));
                };
                let ring = Ring::new(GaussianRationals, &self.vars, MonomialOrder::GRevLex)?;
                let chi_mf = cover_chi(&parse_polynomial(g, &ring)?, d)?;
                let chi_cl = cover_chi(&parse_polynomial(l, &ring)?, d)?;
                let mu_p = chi_mf - chi_cl;
                Ok(PointTerm {
                    label: self.label.clone(),
                    chi_milnor_fiber: Some(chi_mf),
                    chi_complex_link: Some(chi_cl),
                    mu_p,
                    contribution: sign * mu_p,
                })
            }
            (false, true) => {
                let (Some(chi), Some(eu)) = (self.chi_eu_mf, self.eu_at_point) else {
                    return Err(unresolved("Euler data needs chi_eu_mf and eu_at_point"));
                };
                let mu_p = chi - eu;
                Ok(PointTerm {
                    label: self.label.clone(),
                    chi_milnor_fiber: None,
                    chi_complex_link: None,
                    mu_p,
                    contribution: sign * mu_p,
                })
            }
        }
    }
}

/// Defect of a `k`-dimensional variety whose critical locus is the given
/// isolated points: `Σ (−1)^{k−1} μ_P`.
pub fn isolated_defect(k: u32, points: &[LocalSingularityDatum]) -> Result<i64> {
    Ok(isolated_terms(k, points)?.iter().map(|t| t.contribution).sum())
}

pub fn isolated_terms(k: u32, points: &[LocalSingularityDatum]) -> Result<Vec<PointTerm>> {
    if k == 0 {
        return Err(Error::InvalidInput("variety dimension must be positive".into()));
    }
    points
        .iter()
        .map(|p| {
            if p.dim_x != k {
                return Err(Error::InvalidInput(format!(
                    "point `{}` is recorded on a variety of dimension {}, not {k}",
                    p.label, p.dim_x
                )));
            }
            p.resolve()
        })
        .collect()
}

/// Defect of a smooth variety with isolated critical points, from their
/// classical Milnor numbers.
pub fn smooth_isolated_defect(milnor_numbers: &[u64]) -> i64 {
    milnor_numbers.iter().map(|&m| m as i64).sum()
}

/// Vanishing-cycle value at an isolated critical point of a smooth
/// `k`-dimensional variety with classical Milnor number `mu`.
pub fn smooth_point_value(k: u32, mu: u64) -> i64 {
    if k % 2 == 1 {
        mu as i64
    } else {
        -(mu as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDatum {
    pub id: String,
    pub dim: u32,
    pub mu: i64,
    pub ged: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sliced_ged: Option<u64>,
}

/// `lower ⊂ closure(upper)` with the compactly supported Euler
/// characteristic of the complex link of the pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEdge {
    pub lower: String,
    pub upper: String,
    pub chi_c: i64,
}

/// Strata of the critical locus with their closure relations.
///
/// Edges are required for every comparable pair, not only covering ones.
/// `transition`, when present, is the matrix expressing Euler obstructions
/// of closures in indicator functions, indexed like `strata`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratPoset {
    pub dim_x0: u32,
    pub strata: Vec<StratumDatum>,
    #[serde(default)]
    pub edges: Vec<StratumEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedDefect {
    pub alphas: BTreeMap<String, i64>,
    pub ded: i64,
}

/// Closure relations with edge payloads, after validation.
struct Checked {
    /// `above[v]`: strata whose closure contains `v`, with `χ_c`.
    above: Vec<Vec<(usize, i64)>>,
}

impl StratPoset {
    pub fn from_json(text: &str) -> Result<Self> {
        let p: StratPoset = serde_json::from_str(text)?;
        p.check()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("poset serializes")
    }

    fn check(&self) -> Result<Checked> {
        let bad = |m: String| Err(Error::Stratification(m));
        let mut index = HashMap::new();
        for (k, s) in self.strata.iter().enumerate() {
            if s.dim > self.dim_x0 {
                return bad(format!("stratum `{}` has dimension {} > {}", s.id, s.dim, self.dim_x0));
            }
            if index.insert(s.id.as_str(), k).is_some() {
                return bad(format!("duplicate stratum `{}`", s.id));
            }
        }
        let mut above = vec![Vec::new(); self.strata.len()];
        let mut seen = HashSet::new();
        for e in &self.edges {
            let (Some(&lo), Some(&hi)) = (index.get(e.lower.as_str()), index.get(e.upper.as_str())) else {
                return bad(format!("edge {} ⊂ {} names an unknown stratum", e.lower, e.upper));
            };
            // Strict dimension order along edges also rules out cycles.
            if self.strata[lo].dim >= self.strata[hi].dim {
                return bad(format!("edge {} ⊂ {} does not raise dimension", e.lower, e.upper));
            }
            if !seen.insert((lo, hi)) {
                return bad(format!("duplicate edge {} ⊂ {}", e.lower, e.upper));
            }
            above[lo].push((hi, e.chi_c));
        }
        // Comparability must be transitively closed.
        for lo in 0..above.len() {
            for &(mid, _) in &above[lo] {
                for &(hi, _) in &above[mid] {
                    if !seen.contains(&(lo, hi)) {
                        return bad(format!(
                            "missing edge χ_c for {} ⊂ {} (implied through {})",
                            self.strata[lo].id, self.strata[hi].id, self.strata[mid].id
                        ));
                    }
                }
            }
        }
        Ok(Checked { above })
    }

    fn signed(&self, alphas: &[i64], geds: impl Fn(&StratumDatum) -> Result<u64>) -> Result<i64> {
        let mut ded = 0i64;
        for (s, a) in self.strata.iter().zip(alphas) {
            let sign = if (self.dim_x0 - s.dim) % 2 == 0 { 1 } else { -1 };
            ded += sign * a * geds(s)? as i64;
        }
        Ok(ded)
    }

    fn report(&self, alphas: Vec<i64>, ded: i64) -> StratifiedDefect {
        StratifiedDefect { alphas: self.strata.iter().map(|s| s.id.clone()).zip(alphas).collect(), ded }
    }

    /// `α_V = μ_V − Σ_{V ⊂ S̄} χ_c(L_{V,S}) μ_S`.
    pub fn alphas(&self) -> Result<Vec<i64>> {
        let c = self.check()?;
        Ok((0..self.strata.len())
            .map(|v| self.strata[v].mu - c.above[v].iter().map(|&(s, chi)| chi * self.strata[s].mu).sum::<i64>())
            .collect())
    }

    /// Transition matrix derived from the link data: the inverse of the
    /// matrix with unit diagonal and `−χ_c(L_{W,V})` on comparable pairs.
    pub fn transition_from_links(&self) -> Result<Vec<Vec<i64>>> {
        let c = self.check()?;
        let n = self.strata.len();
        let mut b = vec![vec![0i64; n]; n];
        for (w, row) in b.iter_mut().enumerate() {
            row[w] = 1;
            for &(v, chi) in &c.above[w] {
                row[v] = -chi;
            }
        }
        // Invert column by column: solve B x = e_j following dimension order.
        let order = self.descending();
        let mut a = vec![vec![0i64; n]; n];
        for j in 0..n {
            for &w in &order {
                let mut x = if w == j { 1 } else { 0 };
                for &(v, _) in &c.above[w] {
                    x -= b[w][v] * a[v][j];
                }
                a[w][j] = x;
            }
        }
        Ok(a)
    }

    /// Strata ordered so that every stratum follows those above it.
    fn descending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.strata.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.strata[k].dim));
        order
    }

    /// Solves `μ = A α` by back-substitution in dimension order.
    pub fn alphas_via_inversion(&self) -> Result<Vec<i64>> {
        let c = self.check()?;
        let Some(a) = &self.transition else {
            return Err(Error::Stratification("no transition matrix supplied".into()));
        };
        let n = self.strata.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Stratification(format!("transition matrix must be {n}×{n}")));
        }
        for (w, row) in a.iter().enumerate() {
            if row[w] != 1 {
                return Err(Error::Stratification(format!(
                    "transition diagonal entry for `{}` is {}, not 1",
                    self.strata[w].id, row[w]
                )));
            }
            for (v, &x) in row.iter().enumerate() {
                if v != w && x != 0 && !c.above[w].iter().any(|&(s, _)| s == v) {
                    return Err(Error::Stratification(format!(
                        "transition entry at ({}, {}) but `{}` is not in the closure of `{}`",
                        self.strata[w].id, self.strata[v].id, self.strata[w].id, self.strata[v].id
                    )));
                }
            }
        }
        let mut alpha = vec![0i64; n];
        for w in self.descending() {
            alpha[w] = self.strata[w].mu - c.above[w].iter().map(|&(v, _)| a[w][v] * alpha[v]).sum::<i64>();
        }
        Ok(alpha)
    }
}

/// `DED = Σ_V (−1)^{codim V} α_V GED(V̄)` with `α` from the link formula.
pub fn stratified_defect(poset: &StratPoset) -> Result<StratifiedDefect> {
    let alphas = poset.alphas()?;
    let ded = poset.signed(&alphas, |s| Ok(s.ged))?;
    Ok(poset.report(alphas, ded))
}

/// Same defect with `α` from the supplied transition matrix.
pub fn stratified_defect_via_inversion(poset: &StratPoset) -> Result<StratifiedDefect> {
    let alphas = poset.alphas_via_inversion()?;
    let ded = poset.signed(&alphas, |s| Ok(s.ged))?;
    Ok(poset.report(alphas, ded))
}

/// Defect of a generic linear section, from sliced closure GEDs.
pub fn slice_defect(poset: &StratPoset) -> Result<i64> {
    let alphas = poset.alphas()?;
    poset.signed(&alphas, |s| {
        s.sliced_ged
            .ok_or_else(|| Error::Stratification(format!("stratum `{}` has no sliced GED", s.id)))
    })
}
