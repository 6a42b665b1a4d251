use std::fmt::Display;
use std::time::Instant;

use clap::ValueEnum;
use eddeg_core::defect::{cover_chi, isolated_defect, stratified_defect, LocalSingularityDatum, StratPoset};
use eddeg_core::ed::{self, sphere_restrict, EDResult, VarietySpec, WeightVector};
use eddeg_core::groebner::{milnor_number, Count};
use eddeg_core::homotopy::numeric_ed_consensus;
use eddeg_core::poly::parse_polynomial;
use eddeg_core::polytope::{binomial_hypersurface, toric_ged};
use eddeg_core::{Error, GaussianRationals, MonomialOrder, Polynomial, Ring};
use serde::Deserialize;

use crate::record::{RunRecord, Status};
use crate::{status_of, Ctx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Nodal,
    Umbrella,
    Toric,
    Matrices,
    EckartYoung,
}

macro_rules! fixture {
    ($rel:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/", $rel))
    };
}

const NODAL_PRODUCT: &str = fixture!("varieties/nodal_product.json");
const NODAL_CUBIC: &str = fixture!("varieties/nodal_cubic.json");
const NODAL_POINT: &str = fixture!("local/nodal_point.json");
const NODAL_PULLBACK: &str = fixture!("germs/nodal_pullback.json");
const NODAL_LINEAR: &str = fixture!("germs/nodal_linear.json");
const UMBRELLA_PRODUCT: &str = fixture!("varieties/umbrella_product.json");
const UMBRELLA_CUBIC: &str = fixture!("varieties/umbrella_cubic.json");
const UMBRELLA_POINT: &str = fixture!("local/umbrella_point.json");
const UMBRELLA_POSET: &str = fixture!("posets/umbrella_point.json");
const UMBRELLA_PULLBACK: &str = fixture!("germs/umbrella_pullback.json");
const TORIC_TABLE: &str = fixture!("toric_table.json");
const MATRIX_TRIPLES: &str = fixture!("matrix_triples.json");
const DET3_CORNER: &str = fixture!("varieties/det3_corner.json");
const DET3_TWO_CORNERS: &str = fixture!("varieties/det3_two_corners.json");
const RANK_ONE_2X2: &str = fixture!("varieties/rank_one_2x2.json");

struct Check {
    name: String,
    expected: String,
    got: String,
    record: RunRecord,
}

struct Runner<'a> {
    ctx: &'a Ctx,
    suite: String,
    checks: Vec<Check>,
}

impl<'a> Runner<'a> {
    /// Records `produce` against `expected`; errors become failing rows.
    fn check<T: Display + PartialEq>(
        &mut self,
        name: &str,
        input: &str,
        engine: &str,
        expected: T,
        produce: impl FnOnce() -> Result<T, Error>,
    ) -> Option<T> {
        let started = Instant::now();
        let mut record = RunRecord::new(&format!("reproduce {} / {name}", self.suite), input.as_bytes(), engine);
        record.prime = Some(self.ctx.prime);
        record.seeds.push(self.ctx.seed);
        if engine == "numeric" {
            record.tolerances = Some(self.ctx.tracker.clone());
        }
        let outcome = produce();
        record.wall_seconds = started.elapsed().as_secs_f64();
        let (got, value) = match outcome {
            Ok(v) => {
                record.status = if v == expected { Status::Pass } else { Status::Mismatch };
                (v.to_string(), Some(v))
            }
            Err(e) => {
                record.status = status_of(&e);
                record.message = Some(e.to_string());
                (format!("error: {e}"), None)
            }
        };
        record.detail = serde_json::json!({ "expected": expected.to_string(), "got": got });
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), got, record });
        value
    }

    fn finish(self) -> Vec<RunRecord> {
        let w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0).max(5);
        let e = self.checks.iter().map(|c| c.expected.chars().count()).max().unwrap_or(0).max(8);
        println!("{:<w$}  {:<e$}  {:<8}  got", "check", "expected", "status");
        for c in &self.checks {
            let status = match c.record.status {
                Status::Pass => "pass",
                Status::Mismatch => "MISMATCH",
                _ => "ERROR",
            };
            println!("{:<w$}  {:<e$}  {:<8}  {}", c.name, c.expected, status, c.got);
        }
        let passed = self.checks.iter().filter(|c| c.record.status == Status::Pass).count();
        println!("{passed}/{} checks passed", self.checks.len());
        self.checks.into_iter().map(|c| c.record).collect()
    }
}

/// GED, UED and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Triple {
    ged: u64,
    ued: u64,
}

impl Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GED {} UED {} DED {}", self.ged, self.ued, self.ged as i64 - self.ued as i64)
    }
}

impl From<EDResult> for Triple {
    fn from(r: EDResult) -> Self {
        Triple { ged: r.ged.expect("ged"), ued: r.ued.expect("ued") }
    }
}

#[derive(Deserialize)]
struct GermFile {
    vars: Vec<String>,
    germ: String,
}

fn germ(text: &str) -> Result<Polynomial<GaussianRationals>, Error> {
    let f: GermFile = serde_json::from_str(text)?;
    let ring = Ring::new(GaussianRationals, &f.vars, MonomialOrder::GRevLex)?;
    parse_polynomial(&f.germ, &ring)
}

fn milnor(text: &str) -> Result<u64, Error> {
    match milnor_number(&germ(text)?)? {
        Count::Finite(m) => Ok(m),
        Count::Infinite => Err(Error::NonIsolated("germ".into())),
    }
}

#[derive(Deserialize)]
struct LocalFile {
    dim_x: u32,
    points: Vec<LocalSingularityDatum>,
}

fn local_defect(text: &str) -> Result<i64, Error> {
    let f: LocalFile = serde_json::from_str(text)?;
    isolated_defect(f.dim_x, &f.points)
}

fn symbolic(ctx: &Ctx, text: &str) -> Result<Triple, Error> {
    Ok(ed::defect(&VarietySpec::from_json(text)?, &ctx.defect_options())?.into())
}

fn numeric(ctx: &Ctx, text: &str) -> Result<Triple, Error> {
    let x = VarietySpec::from_json(text)?;
    let g = numeric_ed_consensus(&x, &WeightVector::Generic { seed: ctx.seed }, ctx.seed, &ctx.tracker)?;
    let u = numeric_ed_consensus(&x, &WeightVector::Unit, ctx.seed, &ctx.tracker)?;
    Ok(Triple { ged: g[0].count as u64, ued: u[0].count as u64 })
}

pub fn reproduce(ctx: &Ctx, suite: Suite, with_numeric: bool, all_rows: bool) -> Vec<RunRecord> {
    let name = suite.to_possible_value().expect("named").get_name().to_string();
    let mut r = Runner { ctx, suite: name, checks: Vec::new() };
    match suite {
        Suite::Nodal => nodal(&mut r, with_numeric),
        Suite::Umbrella => umbrella(&mut r, with_numeric),
        Suite::Toric => toric(&mut r, with_numeric, all_rows),
        Suite::Matrices => matrices(&mut r),
        Suite::EckartYoung => {
            r.check("UED of 2x2 rank one", RANK_ONE_2X2, "symbolic", 2u64, || {
                let x = VarietySpec::from_json(RANK_ONE_2X2)?;
                Ok(ed::symbolic_ed_count(&x, &WeightVector::Unit, ctx.prime, ctx.seed)?.count)
            });
        }
    }
    r.finish()
}

fn nodal(r: &mut Runner, with_numeric: bool) {
    let ctx = r.ctx;
    let product = r.check("conjugate product", NODAL_PRODUCT, "symbolic", Triple { ged: 20, ued: 18 }, || {
        symbolic(ctx, NODAL_PRODUCT)
    });
    r.check("one component", NODAL_CUBIC, "symbolic", Triple { ged: 10, ued: 9 }, || symbolic(ctx, NODAL_CUBIC));
    if with_numeric {
        r.check("one component, numeric", NODAL_CUBIC, "numeric", Triple { ged: 10, ued: 9 }, || {
            numeric(ctx, NODAL_CUBIC)
        });
    }
    r.check("Milnor number, pencil", NODAL_PULLBACK, "mora", 3u64, || milnor(NODAL_PULLBACK));
    r.check("Milnor number, linear form", NODAL_LINEAR, "mora", 1u64, || milnor(NODAL_LINEAR));
    r.check("cover chi, Milnor fiber", NODAL_PULLBACK, "mora", -1i64, || cover_chi(&germ(NODAL_PULLBACK)?, 2));
    r.check("cover chi, complex link", NODAL_LINEAR, "mora", 0i64, || cover_chi(&germ(NODAL_LINEAR)?, 2));
    let local = r.check("isolated defect", NODAL_POINT, "defect-calculus", 1i64, || local_defect(NODAL_POINT));
    if let (Some(p), Some(l)) = (product, local) {
        r.check("defect per component", NODAL_PRODUCT, "cross-check", l, || Ok((p.ged as i64 - p.ued as i64) / 2));
    }
}

fn umbrella(r: &mut Runner, with_numeric: bool) {
    let ctx = r.ctx;
    let product = r.check("conjugate product", UMBRELLA_PRODUCT, "symbolic", Triple { ged: 20, ued: 18 }, || {
        symbolic(ctx, UMBRELLA_PRODUCT)
    });
    r.check("one component", UMBRELLA_CUBIC, "symbolic", Triple { ged: 10, ued: 9 }, || {
        symbolic(ctx, UMBRELLA_CUBIC)
    });
    if with_numeric {
        r.check("one component, numeric", UMBRELLA_CUBIC, "numeric", Triple { ged: 10, ued: 9 }, || {
            numeric(ctx, UMBRELLA_CUBIC)
        });
    }
    r.check("Milnor number, pencil", UMBRELLA_PULLBACK, "mora", 1u64, || milnor(UMBRELLA_PULLBACK));
    r.check("chi of Eu on Milnor fiber", UMBRELLA_PULLBACK, "mora", 0i64, || {
        cover_chi(&germ(UMBRELLA_PULLBACK)?, 1)
    });
    let local = r.check("isolated defect", UMBRELLA_POINT, "defect-calculus", 1i64, || local_defect(UMBRELLA_POINT));
    r.check("stratified defect", UMBRELLA_POSET, "defect-calculus", 1i64, || {
        Ok(stratified_defect(&StratPoset::from_json(UMBRELLA_POSET)?)?.ded)
    });
    if let (Some(p), Some(l)) = (product, local) {
        r.check("defect per component", UMBRELLA_PRODUCT, "cross-check", l, || {
            Ok((p.ged as i64 - p.ued as i64) / 2)
        });
    }
}

#[derive(Deserialize)]
struct ToricRow {
    alpha: Vec<u32>,
    binomial_ged: u64,
    sphere: SphereTriple,
    method: String,
}

#[derive(Deserialize)]
struct SphereTriple {
    ged: u64,
    ued: u64,
}

fn toric(r: &mut Runner, with_numeric: bool, all_rows: bool) {
    let ctx = r.ctx;
    let rows: Vec<ToricRow> = serde_json::from_str(TORIC_TABLE).expect("bundled table parses");
    for row in rows.iter().filter(|row| all_rows || row.method == "symbolic") {
        let a = &row.alpha;
        let label = format!("{:?}", a);
        let b = row.binomial_ged;
        r.check(&format!("{label} mixed volume"), &label, "mixed-volume", b as u128, || toric_ged(a));
        r.check(&format!("{label} binomial"), &label, "symbolic", Triple { ged: b, ued: b }, || {
            Ok(ed::defect(&binomial_hypersurface(a)?, &ctx.defect_options())?.into())
        });
        let expected = Triple { ged: row.sphere.ged, ued: row.sphere.ued };
        r.check(&format!("{label} sphere section"), &label, "symbolic", expected, || {
            Ok(ed::defect(&sphere_restrict(&binomial_hypersurface(a)?)?, &ctx.defect_options())?.into())
        });
        if with_numeric {
            r.check(&format!("{label} sphere section, numeric"), &label, "numeric", expected, || {
                let x = sphere_restrict(&binomial_hypersurface(a)?)?;
                numeric(ctx, &serde_json::to_string(&x)?)
            });
        }
    }
}

#[derive(Deserialize)]
struct MatrixTriple {
    variety: String,
    ued: u64,
    #[serde(default)]
    ged: Option<u64>,
}

fn matrices(r: &mut Runner) {
    let ctx = r.ctx;
    let rows: Vec<MatrixTriple> = serde_json::from_str(MATRIX_TRIPLES).expect("bundled triples parse");
    for row in rows {
        let text = match row.variety.as_str() {
            "det3_corner" => DET3_CORNER,
            "det3_two_corners" => DET3_TWO_CORNERS,
            _ => continue,
        };
        let Some(ged) = row.ged else { continue };
        r.check(&row.variety, text, "symbolic", Triple { ged, ued: row.ued }, || symbolic(ctx, text));
    }
}
