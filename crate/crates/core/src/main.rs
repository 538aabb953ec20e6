use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use liftlab::chain::{homology, validate_complex, ChainComplex};
use liftlab::css::{build_code_b, build_code_c, from_complex, logical_count, CssCode, Family};
use liftlab::io::{self, Document};
use liftlab::lift::search::sparse_search;
use liftlab::lift::{
    agrees_mod2, ansatz_span_check, error_matrix, lift, verify_lift, LiftMode, SearchConfig,
    Strategy, DEFAULT_ANSATZ_CAP,
};
use liftlab::linalg::Ring;
use liftlab::local::{
    integer_lift_local, random_sited_instance, validate_sited, verify_local_lift,
};
use liftlab::topo::{
    build_interval, build_polygon, build_product, build_rp3, build_telescope, join_spheres,
    ResolutionProfile,
};
use liftlab::Error;

#[derive(Parser)]
#[command(
    name = "liftlab",
    version,
    about = "Lifts of sparse Z2 chain complexes and CSS codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex or code and write its JSON.
    Build(BuildArgs),
    /// Check the invariants of a complex, code or sited code.
    Verify { path: PathBuf },
    /// Homology over Z2 and (for integer complexes) over Z.
    Homology {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a code to Z4 and report its error matrix.
    Lift {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Cellular)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correct a lift: the explicit solution, or a search when a strategy is given.
    Solve(SolveArgs),
    /// Compare the homogeneous solution space with the span of the ansatz.
    Ansatz {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ANSATZ_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disentangle a sited code, lift it locally and verify the lift.
    LocalLift {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search code B or C over a range of fine-end k and tabulate the sparsity.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyArg {
    Interval,
    Polygon,
    S3Join,
    Rp3,
    Product,
    Telescope,
    CodeB,
    CodeC,
    RandomSited,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Naive,
    Cellular,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Greedy,
    Anneal,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::Anneal => Strategy::Anneal,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Polygon half-size of RP³(k); also the fine end when --k0 is given.
    #[arg(long)]
    k: Option<usize>,
    /// Coarse end of a telescope that steps by one up to --k.
    #[arg(long)]
    k0: Option<usize>,
    /// Interval length, or polygon size for `polygon`.
    #[arg(long)]
    n: Option<usize>,
    /// Comma list of k per slice.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    qubits_per_site: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Cellular)]
    mode: ModeArg,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest unknown count for which kernel directions are computed.
    #[arg(long, default_value_t = 16_384)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    /// Comma list of fine-end k values.
    #[arg(long, default_value = "2,3")]
    ks: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 2_000)]
    budget: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for per-run reports and the trend table.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit statuses: 0 success, 1 verification failed, 2 bad input.
enum Failure {
    Verification(Value),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn emit(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_json_atomic(p, v)?,
        None => print!("{}", io::to_canonical_string(v)),
    }
    Ok(())
}

fn need<T>(x: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    x.ok_or_else(|| Failure::Input(format!("{family} needs --{flag}")))
}

fn code_family(a: &BuildArgs) -> Result<Family, Failure> {
    let profile = match (&a.profile, a.k0) {
        (Some(p), k0) => {
            let p = ResolutionProfile::parse(p)?;
            if let Some(k0) = k0.filter(|&k0| k0 != p.k_per_slice[0]) {
                return Err(Failure::Input(format!(
                    "--k0 {k0} differs from the profile's coarse end"
                )));
            }
            Some(p)
        }
        (None, Some(k0)) => Some(ResolutionProfile::ramp(k0, need(a.k, "k", "a telescope")?)?),
        (None, None) => None,
    };
    Ok(match profile {
        Some(p) => Family::Telescope(p),
        None => Family::Product {
            k: need(a.k, "k", "a product code")?,
            n: a.n.unwrap_or(1),
        },
    })
}

fn with_provenance(mut c: ChainComplex, family: &str, params: Value) -> ChainComplex {
    c.provenance = Some(json!({"family": family, "params": params}));
    c
}

fn cmd_build(a: &BuildArgs) -> Outcome {
    let doc = match a.family {
        FamilyArg::Interval => Document::Complex(build_interval(need(a.n, "n", "interval")?)),
        FamilyArg::Polygon => {
            let n = need(a.n, "n", "polygon")?;
            Document::Complex(with_provenance(
                build_polygon(n)?.complex,
                "polygon",
                json!({"size": n}),
            ))
        }
        FamilyArg::S3Join => {
            let k = need(a.k, "k", "s3_join")?;
            let p = build_polygon(2 * k)?;
            Document::Complex(with_provenance(
                join_spheres(&p, &p)?.complex,
                "s3_join",
                json!({"k": k}),
            ))
        }
        FamilyArg::Rp3 => Document::Complex(build_rp3(need(a.k, "k", "rp3")?)?),
        FamilyArg::Product => {
            Document::Complex(build_product(need(a.k, "k", "product")?, a.n.unwrap_or(1))?)
        }
        FamilyArg::Telescope => {
            let p = match (&a.profile, a.k0, a.k) {
                (Some(p), _, _) => ResolutionProfile::parse(p)?,
                (None, Some(k0), Some(k)) => ResolutionProfile::ramp(k0, k)?,
                _ => {
                    return Err(Failure::Input(
                        "telescope needs --profile or --k0 and --k".into(),
                    ))
                }
            };
            Document::Complex(build_telescope(&p)?)
        }
        FamilyArg::CodeB => Document::Code(build_code_b(&code_family(a)?)?),
        FamilyArg::CodeC => Document::Code(build_code_c(&code_family(a)?)?),
        FamilyArg::RandomSited => Document::Sited(random_sited_instance(
            need(a.sites, "sites", "random_sited")?,
            need(a.qubits_per_site, "qubits-per-site", "random_sited")?,
            need(a.density, "density", "random_sited")?,
            need(a.seed, "seed", "random_sited")?,
        )?),
    };
    let v = doc.to_json();
    emit(&v, a.out.as_deref())?;
    Ok(Value::Null)
}

fn cmd_verify(path: &Path) -> Outcome {
    let raw = io::read_json(path)?;
    let doc = Document::from_json(&raw);
    let (kind, problems): (&str, Vec<String>) = match doc {
        Ok(Document::Complex(c)) => (
            "complex",
            validate_complex(&c)
                .iter()
                .map(ToString::to_string)
                .collect(),
        ),
        Ok(Document::Code(_)) => ("code", Vec::new()),
        Ok(Document::Sited(s)) => (
            "sited_code",
            validate_sited(&s)
                .iter()
                .map(|v| {
                    format!(
                        "{:?}-stabilizer {} touches sites {:?}",
                        v.kind, v.index, v.sites
                    )
                })
                .collect(),
        ),
        // structurally valid JSON whose only defect is dq·dz ≠ 0 is a failed verification
        Err(Error::InvalidCode(m)) => ("code", vec![m]),
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "kind": kind,
        "ok": problems.is_empty(),
        "violations": problems,
        "instance": raw.get("provenance").cloned().unwrap_or(Value::Null),
    });
    if problems.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Verification(report))
    }
}

fn code_complex(code: &CssCode) -> Result<ChainComplex, Failure> {
    Ok(ChainComplex::new(
        "css",
        Ring::Z2,
        0,
        vec![code.n_x(), code.n_q(), code.n_z()],
        vec![code.dq.clone(), code.dz.clone()],
    )?)
}

fn cmd_homology(path: &Path) -> Outcome {
    let doc = io::read_document(path)?;
    let c = match &doc {
        Document::Complex(c) => c.clone(),
        Document::Code(code) => code_complex(code)?,
        Document::Sited(s) => code_complex(&s.code)?,
    };
    let h = homology(&c)?;
    let mut v = serde_json::to_value(&h).map_err(Error::from)?;
    v["instance"] = doc.provenance();
    v["kind"] = json!(doc.kind());
    v["torsion_free"] = json!(h.is_torsion_free());
    if let Document::Code(code) = &doc {
        v["logical_count"] = json!(logical_count(code)?);
    }
    Ok(v)
}

fn read_code(path: &Path) -> Result<CssCode, Failure> {
    match io::read_document(path)? {
        Document::Code(c) => Ok(c),
        Document::Sited(s) => Ok(s.code),
        Document::Complex(c) => Ok(from_complex(&c, 2)?),
    }
}

fn lift_mode(m: ModeArg) -> LiftMode {
    match m {
        ModeArg::Naive => LiftMode::Naive,
        ModeArg::Cellular => LiftMode::Cellular,
    }
}

fn cmd_lift(path: &Path, mode: ModeArg) -> Outcome {
    let code = read_code(path)?;
    let l = lift(&code, lift_mode(mode))?;
    let e = error_matrix(&l)?;
    let mut cols: Vec<usize> = e.entries().map(|(_, c, _)| c).collect();
    cols.sort_unstable();
    cols.dedup();
    Ok(json!({
        "instance": code.provenance,
        "mode": l.mode.name(),
        "agrees_mod2": agrees_mod2(&l, &code),
        "verified": verify_lift(&l, &code),
        "error_matrix": io::matrix_to_json(&e),
        "error_columns": cols,
        "added_columns": code.added_columns,
    }))
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let code = read_code(&a.path)?;
    let l = lift(&code, lift_mode(a.mode))?;
    let v = match a.strategy {
        Some(s) => {
            let mut cfg = SearchConfig::new(s.into(), a.budget, a.seed);
            cfg.kernel_cap = a.cap;
            io::lift_report_to_json(&sparse_search(&code, &l, &cfg)?)
        }
        None => io::explicit_report_to_json(&code, &l)?,
    };
    if v["verified"] == json!(true) {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn cmd_ansatz(path: &Path, cap: usize) -> Outcome {
    let code = read_code(path)?;
    let r = ansatz_span_check(&code, cap)?;
    let mut v = serde_json::to_value(&r).map_err(Error::from)?;
    v["instance"] = code.provenance.clone().unwrap_or(Value::Null);
    v["cap"] = json!(cap);
    if r.equal {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn cmd_local_lift(path: &Path) -> Outcome {
    let s = match io::read_document(path)? {
        Document::Sited(s) => s,
        other => {
            return Err(Failure::Input(format!(
                "local-lift needs a sited code, got a {}",
                other.kind()
            )))
        }
    };
    let instance = s.code.provenance.clone().unwrap_or(Value::Null);
    match integer_lift_local(&s) {
        Ok(l) => {
            let report = verify_local_lift(&s, &l.dz, &l.dq);
            let v = json!({
                "instance": instance,
                "circuit": io::circuit_to_json(&l.circuit),
                "dz": io::matrix_to_json(&l.dz),
                "dq": io::matrix_to_json(&l.dq),
                "completed_z": l.completed_z,
                "completed_x": l.completed_x,
                "report": report,
                "passed": report.passed(),
            });
            if report.passed() {
                Ok(v)
            } else {
                Err(Failure::Verification(v))
            }
        }
        Err(e @ (Error::Disentangle { .. } | Error::LocalLift(_))) => {
            Err(Failure::Verification(json!({
                "instance": instance,
                "passed": false,
                "error": e.to_string(),
            })))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Outcome {
    let build = match a.family {
        FamilyArg::CodeB => build_code_b,
        FamilyArg::CodeC => build_code_c,
        _ => return Err(Failure::Input("sweep supports code_b and code_c".into())),
    };
    let ks =
        a.ks.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Input(format!("bad k {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
    let cfg = SearchConfig::new(a.strategy.into(), a.budget, a.seed);
    let runs = ks
        .par_iter()
        .map(|&k| -> Result<Value, Failure> {
            let profile = ResolutionProfile::ramp(a.k0, k)?;
            let family = Family::Telescope(profile.clone());
            let code = build(&family)?;
            let l = lift(&code, LiftMode::Cellular)?;
            let report = io::lift_report_to_json(&sparse_search(&code, &l, &cfg)?);
            if let Some(dir) = &a.out {
                io::write_json_atomic(&dir.join(format!("run_k0{}_k{k}.json", a.k0)), &report)?;
            }
            let dq = &report["delta_q_sparsity"];
            Ok(json!({
                "k": k,
                "profile": profile.k_per_slice,
                "delta_q_max_row_weight": dq["max_row_weight"],
                "delta_q_max_col_weight": dq["max_col_weight"],
                "objective_best": report["objective_best"],
                "verified": report["verified"],
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let weight = |r: &Value| {
        r["delta_q_max_row_weight"]
            .as_u64()
            .unwrap_or(0)
            .max(r["delta_q_max_col_weight"].as_u64().unwrap_or(0))
    };
    let non_decreasing = runs.windows(2).all(|w| weight(&w[0]) <= weight(&w[1]));
    let table = json!({
        "strategy": cfg.strategy.name(),
        "budget": cfg.budget,
        "seed": cfg.seed,
        "k0": a.k0,
        "rows": runs,
        "non_decreasing": non_decreasing,
    });
    if let Some(dir) = &a.out {
        io::write_json_atomic(&dir.join("trend.json"), &table)?;
    }
    Ok(table)
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(t) = std::env::var("LIFTLAB_THREADS") {
        let n: usize = t
            .parse()
            .map_err(|_| Failure::Input(format!("LIFTLAB_THREADS={t:?} is not a thread count")))?;
        // a second initialisation only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (v, out) = match &cli.command {
        Command::Build(a) => (cmd_build(a)?, None),
        Command::Verify { path } => (cmd_verify(path)?, None),
        Command::Homology { path, out } => (cmd_homology(path)?, out.as_deref()),
        Command::Lift { path, mode, out } => (cmd_lift(path, *mode)?, out.as_deref()),
        Command::Solve(a) => (cmd_solve(a)?, a.out.as_deref()),
        Command::Ansatz { path, cap, out } => (cmd_ansatz(path, *cap)?, out.as_deref()),
        Command::LocalLift { path, out } => (cmd_local_lift(path)?, out.as_deref()),
        Command::Sweep(a) => (cmd_sweep(a)?, None),
    };
    if !v.is_null() {
        emit(&v, out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Homology { out, .. }
        | Command::Lift { out, .. }
        | Command::Ansatz { out, .. }
        | Command::LocalLift { out, .. } => out.clone(),
        Command::Solve(a) => a.out.clone(),
        _ => None,
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(v)) => {
            // the failing report is still the output
            let _ = emit(&v, out.as_deref());
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
