//! Lattice polytopes, normalized volumes and mixed volumes.
//!
//! Hulls are computed exactly with a placing triangulation over the
//! integers. The normalized volume of a full-dimensional polytope in `Z^n`
//! is `n!` times its Euclidean volume, so the standard simplex has volume 1.

use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ed::{build_critical_system, CriticalSystem, DataPoint, VarietySpec, WeightVector};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, DEFAULT_PRIME};
use crate::poly::Polynomial;

/// Convex hull of finitely many points of `Z^dim`, kept as its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope", into = "RawPolytope")]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    points: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct RawPolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<i64>>>,
}

impl TryFrom<RawPolytope> for LatticePolytope {
    type Error = Error;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        let mut p = LatticePolytope::new(raw.dim, raw.vertices)?;
        if let Some(points) = raw.points {
            if points.iter().any(|q| !p.contains(q)) {
                return Err(Error::Polytope("listed lattice point outside the hull".into()));
            }
            p.points = Some(points);
        }
        Ok(p)
    }
}

impl From<LatticePolytope> for RawPolytope {
    fn from(p: LatticePolytope) -> Self {
        RawPolytope { dim: p.dim, vertices: p.vertices, points: p.points }
    }
}

impl LatticePolytope {
    /// Hull of `points`; non-extreme points are dropped.
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Polytope("empty point set".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Polytope(format!("point of length {} in dimension {dim}", p.len())));
        }
        let hull = Hull::of(&points);
        let vertices = hull.extreme.iter().map(|&i| hull.points[i].clone()).collect();
        Ok(Self { dim, vertices, points: None })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope serializes")
    }

    /// Dimension of the ambient lattice.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        affine_frame(&self.vertices).0
    }

    /// `dim!` times the volume; zero unless full-dimensional.
    pub fn normalized_volume(&self) -> u128 {
        Hull::of(&self.vertices).volume(self.dim)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Polytope(format!("Minkowski sum of dimensions {} and {}", self.dim, other.dim)));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::new(self.dim, sums)
    }

    /// Dilation by a nonnegative integer.
    pub fn dilate(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::Polytope("negative dilation".into()));
        }
        Self::new(self.dim, self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect())
    }

    /// Whether `p` lies in the polytope (boundary included).
    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        if self.vertices.iter().any(|v| v == p) {
            return true;
        }
        let mut pts = self.vertices.clone();
        pts.push(p.to_vec());
        let hull = Hull::of(&pts);
        !hull.extreme.iter().any(|&i| hull.points[i] == p)
    }

    /// All lattice points, by scanning the bounding box.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.dim).map(|k| self.vertices.iter().map(|v| v[k]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|k| self.vertices.iter().map(|v| v[k]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == self.dim {
                    return out;
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }

    /// Same polytope with its lattice points listed.
    pub fn with_lattice_points(mut self) -> Self {
        self.points = Some(self.lattice_points());
        self
    }

    pub fn points(&self) -> Option<&[Vec<i64>]> {
        self.points.as_deref()
    }
}

/// Convex hull of the exponent vectors of `p`.
pub fn newton_polytope<F: Field>(p: &Polynomial<F>) -> Result<LatticePolytope> {
    if p.is_zero() {
        return Err(Error::Polytope("Newton polytope of the zero polynomial".into()));
    }
    let n = p.ring().nvars();
    LatticePolytope::new(n, p.support().into_iter().map(to_i64).collect())
}

fn to_i64(e: Vec<u32>) -> Vec<i64> {
    e.into_iter().map(i64::from).collect()
}

/// Lattice-normalized mixed volume of `n` polytopes in `Z^n`.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<u128> {
    let n = polytopes.len();
    if n == 0 {
        return Err(Error::Polytope("mixed volume of no polytopes".into()));
    }
    if n > 20 {
        return Err(Error::Polytope(format!("{n} polytopes exceed the inclusion-exclusion limit")));
    }
    if let Some(p) = polytopes.iter().find(|p| p.dim != n) {
        return Err(Error::Polytope(format!("{n} polytopes but one lives in dimension {}", p.dim)));
    }
    // Minkowski sums by popcount level, each built from a sum one level down.
    let mut volumes = vec![0u128; 1 << n];
    let mut prev: HashMap<u32, LatticePolytope> = HashMap::new();
    for level in 1..=n as u32 {
        let masks: Vec<u32> = (1u32..1 << n).filter(|m| m.count_ones() == level).collect();
        let built: Vec<(u32, LatticePolytope, u128)> = masks
            .par_iter()
            .map(|&mask| {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                let sum = if rest == 0 {
                    polytopes[low].clone()
                } else {
                    prev[&rest].minkowski_sum(&polytopes[low])?
                };
                let v = sum.normalized_volume();
                Ok((mask, sum, v))
            })
            .collect::<Result<_>>()?;
        prev = HashMap::with_capacity(built.len());
        for (mask, sum, v) in built {
            volumes[mask as usize] = v;
            prev.insert(mask, sum);
        }
    }
    let mut total: i128 = 0;
    for (mask, &v) in volumes.iter().enumerate().skip(1) {
        let sign = if (n - (mask as u32).count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        total += sign * v as i128;
    }
    // The alternating sum counts each n-fold mixed term n! times.
    let fact: i128 = (1..=n as i128).product();
    if total < 0 || total % fact != 0 {
        return Err(Error::Polytope(format!("inconsistent inclusion-exclusion total {total}")));
    }
    Ok((total / fact) as u128)
}

/// Binomial hypersurface `x0^|α| − x1^α1 ⋯ xn^αn` in `P^n`.
pub fn binomial_hypersurface(alpha: &[u32]) -> Result<VarietySpec> {
    let total: u32 = alpha.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("exponent vector is zero".into()));
    }
    let g = alpha.iter().fold(total, |g, &a| g.gcd(&a));
    if g != 1 {
        return Err(Error::InvalidInput(format!("gcd(|α|, α) = {g}; the binomial is reducible")));
    }
    let monomial: Vec<String> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(k, &a)| if a == 1 { format!("x{}", k + 1) } else { format!("x{}^{a}", k + 1) })
        .collect();
    let label = format!(
        "binomial ({})",
        alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(VarietySpec::new(alpha.len(), vec![format!("x0^{total} - {}", monomial.join("*"))], &label))
}

/// Generic ED degree of the binomial hypersurface of `alpha`, as the mixed
/// volume of the Newton polytopes of its Lagrange system.
pub fn toric_ged(alpha: &[u32]) -> Result<u128> {
    let x = binomial_hypersurface(alpha)?;
    let field = PrimeField::new(DEFAULT_PRIME)?;
    let gens = x.over_prime(&field)?;
    let weights = WeightVector::Generic { seed: 1 }.resolve(&field, x.n + 1)?;
    let data = DataPoint::random(&field, x.n + 1, 1);
    let sys = build_critical_system(&gens, &weights, &data.entries)?;
    let polys = sys.equations.iter().map(newton_polytope).collect::<Result<Vec<_>>>()?;
    mixed_volume(&polys)
}

/// Mixed volume of the Newton polytopes with the origin adjoined; bounds
/// the number of isolated roots in affine space.
pub fn bkk_bound<F: Field>(system: &CriticalSystem<F>) -> Result<u128> {
    bkk_bound_of(&system.equations)
}

pub fn bkk_bound_of<F: Field>(equations: &[Polynomial<F>]) -> Result<u128> {
    let Some(first) = equations.first() else {
        return Err(Error::Polytope("empty system".into()));
    };
    let n = first.ring().nvars();
    if equations.len() != n {
        return Err(Error::Polytope(format!("{} equations in {n} unknowns", equations.len())));
    }
    let polys = equations
        .iter()
        .map(|p| {
            if p.is_zero() {
                return Err(Error::Polytope("zero equation".into()));
            }
            let mut pts: Vec<Vec<i64>> = p.support().into_iter().map(to_i64).collect();
            pts.push(vec![0; n]);
            LatticePolytope::new(n, pts)
        })
        .collect::<Result<Vec<_>>>()?;
    mixed_volume(&polys)
}

/// Rank of the point set's affine hull and coordinates on which the
/// projection is injective.
fn affine_frame(points: &[Vec<i64>]) -> (usize, Vec<usize>) {
    let Some(base) = points.first() else { return (0, Vec::new()) };
    let rows: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    let pivots = pivot_columns(rows, base.len());
    (pivots.len(), pivots)
}

/// Pivot columns of the row space, by fraction-free elimination.
fn pivot_columns(mut rows: Vec<Vec<i128>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let piv = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for k in c..ncols {
                row[k] = row[k] * piv[c] - f * piv[k];
            }
            reduce_row(row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn reduce_row(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Bareiss determinant of a square integer matrix.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Boundary facet of the triangulation: normal `a` with `a·x = b` on the
/// facet and `a·x < b` on the side of the simplex it bounds.
struct Facet {
    normal: Vec<i128>,
    offset: i128,
}

impl Facet {
    fn through(verts: &[&[i128]], inner: &[i128]) -> Facet {
        let k = inner.len();
        let rows: Vec<Vec<i128>> = verts[1..]
            .iter()
            .map(|v| v.iter().zip(verts[0]).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal: Vec<i128> = (0..k)
            .map(|j| {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if (k - 1 + j) % 2 == 0 { 1 } else { -1 };
                s * det(minor)
            })
            .collect();
        let g = normal.iter().fold(0i128, |g, &x| g.gcd(&x));
        if g > 1 {
            normal.iter_mut().for_each(|x| *x /= g);
        }
        let mut offset = dot(&normal, verts[0]);
        if dot(&normal, inner) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Facet { normal, offset }
    }

    fn sees(&self, p: &[i128]) -> bool {
        dot(&self.normal, p) > self.offset
    }
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Placing triangulation of a point set in its own affine hull.
struct Hull {
    points: Vec<Vec<i64>>,
    /// Points projected onto the frame coordinates.
    local: Vec<Vec<i128>>,
    rank: usize,
    simplices: Vec<Vec<usize>>,
    extreme: Vec<usize>,
}

impl Hull {
    fn of(raw: &[Vec<i64>]) -> Hull {
        let mut points = raw.to_vec();
        points.sort();
        points.dedup();
        let (rank, frame) = affine_frame(&points);
        let local: Vec<Vec<i128>> =
            points.iter().map(|p| frame.iter().map(|&c| p[c] as i128).collect()).collect();
        let mut hull = Hull { points, local, rank, simplices: Vec::new(), extreme: Vec::new() };
        if rank == 0 {
            hull.extreme = vec![0];
            return hull;
        }
        hull.triangulate();
        hull
    }

    fn triangulate(&mut self) {
        let k = self.rank;
        // Initial simplex: greedily extend an affinely independent set.
        let mut start = vec![0usize];
        let mut basis: Vec<Vec<i128>> = Vec::new();
        for i in 1..self.local.len() {
            if start.len() == k + 1 {
                break;
            }
            let diff: Vec<i128> = self.local[i].iter().zip(&self.local[0]).map(|(a, b)| a - b).collect();
            let mut trial = basis.clone();
            trial.push(diff);
            if pivot_columns(trial.clone(), k).len() == trial.len() {
                basis = trial;
                start.push(i);
            }
        }
        let mut boundary: HashMap<Vec<usize>, (usize, Facet)> = HashMap::new();
        let add_facet = |boundary: &mut HashMap<Vec<usize>, (usize, Facet)>, local: &[Vec<i128>], mut verts: Vec<usize>, inner: usize| {
            verts.sort_unstable();
            if boundary.remove(&verts).is_none() {
                let refs: Vec<&[i128]> = verts.iter().map(|&v| local[v].as_slice()).collect();
                let f = Facet::through(&refs, &local[inner]);
                boundary.insert(verts, (inner, f));
            }
        };
        for &omit in &start {
            let verts: Vec<usize> = start.iter().copied().filter(|&v| v != omit).collect();
            add_facet(&mut boundary, &self.local, verts, omit);
        }
        self.simplices.push(start.clone());
        for p in 0..self.local.len() {
            if start.contains(&p) {
                continue;
            }
            let visible: Vec<Vec<usize>> = boundary
                .iter()
                .filter(|(_, (_, f))| f.sees(&self.local[p]))
                .map(|(v, _)| v.clone())
                .collect();
            for verts in visible {
                boundary.remove(&verts);
                for (pos, &omit) in verts.iter().enumerate() {
                    let mut g = verts.clone();
                    g[pos] = p;
                    add_facet(&mut boundary, &self.local, g, omit);
                }
                let mut s = verts;
                s.push(p);
                self.simplices.push(s);
            }
        }
        // A point is a vertex when the facets through it pin it down.
        let mut normals: HashMap<usize, Vec<Vec<i128>>> = HashMap::new();
        for (verts, (_, f)) in &boundary {
            for &v in verts {
                normals.entry(v).or_default().push(f.normal.clone());
            }
        }
        let mut extreme: Vec<usize> = normals
            .into_iter()
            .filter(|(_, ns)| pivot_columns(ns.clone(), k).len() == k)
            .map(|(v, _)| v)
            .collect();
        extreme.sort_unstable();
        self.extreme = extreme;
    }

    /// Normalized volume in `Z^dim`, zero when not full-dimensional.
    fn volume(&self, dim: usize) -> u128 {
        if self.rank < dim || dim == 0 {
            return u128::from(dim == 0);
        }
        self.simplices
            .iter()
            .map(|s| {
                let rows: Vec<Vec<i128>> = s[1..]
                    .iter()
                    .map(|&v| self.local[v].iter().zip(&self.local[s[0]]).map(|(a, b)| a - b).collect())
                    .collect();
                det(rows).unsigned_abs()
            })
            .sum()
    }
}
