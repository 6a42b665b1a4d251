use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use eddeg_core::defect::{
    slice_defect, stratified_defect, stratified_defect_via_inversion, StratPoset,
};
use eddeg_core::ed::{self, sphere_restrict, DefectOptions, VarietySpec, WeightVector};
use eddeg_core::groebner::{milnor_number, Count};
use eddeg_core::homotopy::{local_multiplicity_oracle, numeric_ed_consensus, TrackerConfig};
use eddeg_core::poly::{parse_polynomial, specialize};
use eddeg_core::polytope::{mixed_volume, toric_ged, LatticePolytope};
use eddeg_core::{ComplexDouble, Error, GaussianRationals, MonomialOrder, Ring, DEFAULT_PRIME, SECONDARY_PRIME};
use serde::Deserialize;

mod record;
mod suites;

use record::{persist, RunRecord, Status};

#[derive(Parser)]
#[command(name = "eddeg", version, about = "Euclidean distance degrees and their defects")]
struct Cli {
    /// Prime for exact counts; defect runs add a second one.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Root seed for data points, weights and gammas.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Append run records to DIR/runs.jsonl.
    #[arg(long, global = true, value_name = "DIR")]
    json_out: Option<PathBuf>,
    /// Tracker settings as JSON; missing keys keep their defaults.
    #[arg(long, global = true, value_name = "FILE")]
    tolerances: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Symbolic,
    Numeric,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Number of critical points of the weighted distance function.
    Count {
        spec: PathBuf,
        /// `unit`, `generic`, or a JSON file with a weight vector.
        #[arg(long, default_value = "generic")]
        weights: String,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
        /// Intersect with the sphere quadric first.
        #[arg(long)]
        sphere: bool,
    },
    /// Generic and unit ED degrees and their difference.
    Defect {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
        #[arg(long)]
        sphere: bool,
    },
    /// Milnor number of a germ at the origin.
    Milnor {
        germ: PathBuf,
        /// Also count nearby critical points numerically.
        #[arg(long)]
        check: bool,
    },
    /// Mixed volume of polytopes, or the toric GED of an exponent vector.
    Mv {
        #[arg(long, value_delimiter = ',', required_unless_present = "polytopes", conflicts_with = "polytopes")]
        alpha: Option<Vec<u32>>,
        #[arg(long)]
        polytopes: Option<PathBuf>,
    },
    /// Defect from stratification data.
    Strat {
        poset: PathBuf,
        /// Use the sliced closure GEDs.
        #[arg(long)]
        slice: bool,
    },
    /// Recompute a reference suite and compare.
    Reproduce {
        suite: suites::Suite,
        /// Add numerical cross-checks.
        #[arg(long)]
        numeric: bool,
        /// Include the slow toric rows.
        #[arg(long)]
        all_rows: bool,
    },
}

pub struct Ctx {
    pub prime: u64,
    pub seed: u64,
    pub tracker: TrackerConfig,
}

impl Ctx {
    pub fn defect_options(&self) -> DefectOptions {
        let other = if self.prime == DEFAULT_PRIME { SECONDARY_PRIME } else { DEFAULT_PRIME };
        DefectOptions { primes: [self.prime, other], seed: self.seed }
    }

    fn stamp(&self, mut r: RunRecord, numeric: bool) -> RunRecord {
        r.prime = Some(self.prime);
        r.seeds.push(self.seed);
        if numeric {
            r.tolerances = Some(self.tracker.clone());
        }
        r
    }
}

pub fn status_of(e: &Error) -> Status {
    match e {
        Error::EngineDisagreement(_) => Status::Mismatch,
        Error::Parse(_)
        | Error::UnknownVariable(_)
        | Error::ImaginaryUnitUnavailable
        | Error::ExponentOverflow { .. }
        | Error::InvalidInput(_)
        | Error::BadSpecialization(_)
        | Error::DegenerateData(_)
        | Error::NonIsolated(_)
        | Error::Polytope(_)
        | Error::Stratification(_)
        | Error::Io(_)
        | Error::Json(_) => Status::Degenerate,
        _ => Status::Failure,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let started = Instant::now();
    let (records, status) = match run(&cli) {
        Ok(records) => {
            let status = records.iter().fold(Status::Pass, |s, r| s.worst(r.status));
            (records, status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut r = RunRecord::new(command_name(&cli.command), &[], "none");
            r.status = status_of(&e);
            r.message = Some(e.to_string());
            let status = r.status;
            (vec![r], status)
        }
    };
    if let Some(dir) = &cli.json_out {
        let mut records = records;
        if let [only] = records.as_mut_slice() {
            if only.wall_seconds == 0.0 {
                only.wall_seconds = started.elapsed().as_secs_f64();
            }
        }
        if let Err(e) = persist(dir, &records) {
            eprintln!("error: cannot write records: {e}");
            return ExitCode::from(3);
        }
    }
    ExitCode::from(status.exit_code() as u8)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Count { .. } => "count",
        Command::Defect { .. } => "defect",
        Command::Milnor { .. } => "milnor",
        Command::Mv { .. } => "mv",
        Command::Strat { .. } => "strat",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn run(cli: &Cli) -> Result<Vec<RunRecord>, Error> {
    let tracker = match &cli.tolerances {
        Some(p) => {
            let cfg: TrackerConfig = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            cfg.validate()?;
            cfg
        }
        None => TrackerConfig::default(),
    };
    let ctx = Ctx {
        prime: cli.prime,
        seed: cli.seed,
        tracker: tracker.with_seed(cli.seed),
    };
    match &cli.command {
        Command::Count { spec, weights, method, sphere } => cmd_count(&ctx, spec, weights, *method, *sphere),
        Command::Defect { spec, method, sphere } => cmd_defect(&ctx, spec, *method, *sphere),
        Command::Milnor { germ, check } => cmd_milnor(&ctx, germ, *check),
        Command::Mv { alpha, polytopes } => cmd_mv(alpha.as_deref(), polytopes.as_deref()),
        Command::Strat { poset, slice } => cmd_strat(poset, *slice),
        Command::Reproduce { suite, numeric, all_rows } => Ok(suites::reproduce(&ctx, *suite, *numeric, *all_rows)),
    }
}

/// The spec and the bytes identifying the input, options included.
fn load_spec(path: &Path, sphere: bool, options: &str) -> Result<(Vec<u8>, VarietySpec), Error> {
    let mut bytes = std::fs::read(path)?;
    let mut x = VarietySpec::from_json(std::str::from_utf8(&bytes).map_err(|e| Error::InvalidInput(e.to_string()))?)?;
    if sphere {
        x = sphere_restrict(&x)?;
    }
    bytes.extend(format!("\0sphere={sphere};{options}").bytes());
    Ok((bytes, x))
}

fn parse_weights(s: &str, seed: u64) -> Result<WeightVector, Error> {
    Ok(match s {
        "unit" => WeightVector::Unit,
        "generic" => WeightVector::Generic { seed },
        path => {
            let text = std::fs::read_to_string(path)?;
            match serde_json::from_str::<WeightVector>(&text) {
                Ok(w) => w,
                Err(_) => WeightVector::Explicit { entries: serde_json::from_str(&text)? },
            }
        }
    })
}

fn cmd_count(ctx: &Ctx, spec: &Path, weights: &str, method: Method, sphere: bool) -> Result<Vec<RunRecord>, Error> {
    let started = Instant::now();
    let (bytes, x) = load_spec(spec, sphere, &format!("weights={weights}"))?;
    let w = parse_weights(weights, ctx.seed)?;
    let engine = match method {
        Method::Symbolic => "symbolic",
        Method::Numeric => "numeric",
        Method::Both => "both",
    };
    let mut r = ctx.stamp(RunRecord::new("count", &bytes, engine), method != Method::Symbolic);
    let mut symbolic = None;
    let mut numeric = None;
    if method != Method::Numeric {
        let rep = ed::symbolic_ed_count(&x, &w, ctx.prime, ctx.seed)?;
        r = r.count("symbolic", rep.count);
        symbolic = Some(rep.count);
    }
    if method != Method::Symbolic {
        let runs = numeric_ed_consensus(&x, &w, ctx.seed, &ctx.tracker)?;
        r = r.count("numeric", runs[0].count as u64);
        r.seeds.extend(runs.iter().map(|n| n.stats.seed));
        r.detail = serde_json::to_value(runs.iter().map(|n| &n.stats).collect::<Vec<_>>())?;
        numeric = Some(runs[0].count as u64);
    }
    r.wall_seconds = started.elapsed().as_secs_f64();
    match (symbolic, numeric) {
        (Some(a), Some(b)) if a != b => {
            r.status = Status::Mismatch;
            r.message = Some(format!("symbolic count {a} but numeric count {b}"));
            eprintln!("error: {} disagree: symbolic {a}, numeric {b}", x.display_name());
        }
        _ => println!("{}", symbolic.or(numeric).expect("one engine ran")),
    }
    Ok(vec![r])
}

fn cmd_defect(ctx: &Ctx, spec: &Path, method: Method, sphere: bool) -> Result<Vec<RunRecord>, Error> {
    let started = Instant::now();
    let (bytes, x) = load_spec(spec, sphere, "")?;
    let engine = match method {
        Method::Symbolic => "symbolic",
        Method::Numeric => "numeric",
        Method::Both => "both",
    };
    let mut r = ctx.stamp(RunRecord::new("defect", &bytes, engine), method != Method::Symbolic);
    let mut pairs = Vec::new();
    if method != Method::Numeric {
        let res = ed::defect(&x, &ctx.defect_options())?;
        let (g, u) = (res.ged.expect("ged"), res.ued.expect("ued"));
        r = r.count("ged", g).count("ued", u);
        r.prime = Some(ctx.prime);
        r.seeds = res.seeds.clone();
        pairs.push(("symbolic", g, u));
    }
    if method != Method::Symbolic {
        let g = numeric_ed_consensus(&x, &WeightVector::Generic { seed: ctx.seed }, ctx.seed, &ctx.tracker)?;
        let u = numeric_ed_consensus(&x, &WeightVector::Unit, ctx.seed, &ctx.tracker)?;
        let (g, u) = (g[0].count as u64, u[0].count as u64);
        r = r.count("numeric_ged", g).count("numeric_ued", u);
        pairs.push(("numeric", g, u));
    }
    let (_, g, u) = pairs[0];
    r.defect = Some(g as i64 - u as i64);
    r.wall_seconds = started.elapsed().as_secs_f64();
    if let [(_, g1, u1), (_, g2, u2)] = pairs[..] {
        if (g1, u1) != (g2, u2) {
            r.status = Status::Mismatch;
            r.message = Some(format!("symbolic GED/UED {g1}/{u1} but numeric {g2}/{u2}"));
            eprintln!("error: engines disagree: symbolic GED/UED {g1}/{u1}, numeric {g2}/{u2}");
            return Ok(vec![r]);
        }
    }
    println!("GED {g}  UED {u}  DED {}", g as i64 - u as i64);
    Ok(vec![r])
}

#[derive(Deserialize)]
struct GermFile {
    #[serde(default = "plane_vars")]
    vars: Vec<String>,
    germ: String,
}

fn plane_vars() -> Vec<String> {
    vec!["u".into(), "v".into()]
}

fn cmd_milnor(ctx: &Ctx, path: &Path, check: bool) -> Result<Vec<RunRecord>, Error> {
    let started = Instant::now();
    let bytes = std::fs::read(path)?;
    let file: GermFile = serde_json::from_slice(&bytes)?;
    let ring = Ring::new(GaussianRationals, &file.vars, MonomialOrder::GRevLex)?;
    let g = parse_polynomial(&file.germ, &ring)?;
    let mut r = ctx.stamp(RunRecord::new("milnor", &bytes, if check { "both" } else { "symbolic" }), check);
    r.prime = None;
    let mu = match milnor_number(&g)? {
        Count::Finite(m) => m,
        Count::Infinite => {
            r.status = Status::Degenerate;
            r.message = Some("non-isolated critical point".into());
            println!("infinite");
            return Ok(vec![r]);
        }
    };
    r = r.count("milnor", mu);
    if check {
        let local = local_multiplicity_oracle(&specialize(&g, ComplexDouble)?, 0.1, &ctx.tracker)?;
        r = r.count("numeric", local.count as u64);
        if local.count as u64 != mu {
            r.status = Status::Mismatch;
            r.message = Some(format!("local standard basis gives {mu}, nearby critical points {}", local.count));
            eprintln!("error: Milnor number {mu} but {} nearby critical points", local.count);
        }
    }
    r.wall_seconds = started.elapsed().as_secs_f64();
    if r.status == Status::Pass {
        println!("{mu}");
    }
    Ok(vec![r])
}

fn cmd_mv(alpha: Option<&[u32]>, polytopes: Option<&Path>) -> Result<Vec<RunRecord>, Error> {
    let started = Instant::now();
    let (mut r, value) = match (alpha, polytopes) {
        (Some(a), _) => {
            let text = a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            (RunRecord::new("mv", text.as_bytes(), "mixed-volume"), toric_ged(a)?)
        }
        (None, Some(p)) => {
            let bytes = std::fs::read(p)?;
            let ps: Vec<LatticePolytope> = serde_json::from_slice(&bytes)?;
            (RunRecord::new("mv", &bytes, "mixed-volume"), mixed_volume(&ps)?)
        }
        (None, None) => return Err(Error::InvalidInput("give --alpha or --polytopes".into())),
    };
    r = r.count("mixed_volume", value as u64);
    r.wall_seconds = started.elapsed().as_secs_f64();
    println!("{value}");
    Ok(vec![r])
}

fn cmd_strat(path: &Path, slice: bool) -> Result<Vec<RunRecord>, Error> {
    let started = Instant::now();
    let bytes = std::fs::read(path)?;
    let poset = StratPoset::from_json(std::str::from_utf8(&bytes).map_err(|e| Error::InvalidInput(e.to_string()))?)?;
    let mut r = RunRecord::new("strat", &bytes, "defect-calculus");
    let direct = stratified_defect(&poset)?;
    let ded = if slice { slice_defect(&poset)? } else { direct.ded };
    r.defect = Some(ded);
    r.detail = serde_json::json!({ "alphas": direct.alphas, "sliced": slice });
    if poset.transition.is_some() {
        let inverted = stratified_defect_via_inversion(&poset)?;
        if inverted != direct {
            r.status = Status::Mismatch;
            r.message = Some(format!("link formula gives {:?}, transition matrix gives {:?}", direct, inverted));
            eprintln!("error: the transition matrix disagrees with the link data");
        }
    }
    r.wall_seconds = started.elapsed().as_secs_f64();
    for (id, a) in &direct.alphas {
        println!("alpha {id} {a}");
    }
    println!("DED {ded}");
    Ok(vec![r])
}
