mod cache;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use parikill_core::boolfn::parse_functions;
use parikill_core::paperlab::{self, ClaimStatus, RecordStore, ScanMode, VerifyOptions};
use parikill_core::solvers::{measure, Budget, Measure, MeasureOptions, MeasureReport, SOLVER_VERSION};
use parikill_core::{BooleanFunction, Error, F2Vector, Family, FourierSpectrum};
use rand::seq::SliceRandom;
use rand::SeedableRng;

use cache::{Cache, CacheEntry, Request};

#[derive(Parser)]
#[command(name = "parikill", version, about = "Exact parity complexity of Boolean functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads for the solvers (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on canonical systems visited per affine search.
    #[arg(long, global = true)]
    budget_systems: Option<u64>,
    /// Largest codimension searched by the affine solvers.
    #[arg(long, global = true)]
    max_codim: Option<usize>,
    /// Cap on search nodes for the parity decision tree solver.
    #[arg(long, global = true)]
    max_tree_nodes: Option<u64>,
    /// Skip the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

impl Global {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_codim: self.max_codim.unwrap_or(d.max_codim),
            max_systems: self.budget_systems.unwrap_or(d.max_systems),
            max_tree_nodes: self.max_tree_nodes.unwrap_or(d.max_tree_nodes),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a named function.
    Family(FamilyArgs),
    /// Compute complexity measures.
    Measure(MeasureArgs),
    /// Compose an outer function with inner functions, block by block.
    Compose {
        #[arg(long)]
        outer: PathBuf,
        /// One file per slot, or a single file used for every slot.
        #[arg(long, required = true)]
        inner: Vec<PathBuf>,
    },
    /// Compose a function with itself k times.
    Power {
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Print the Walsh–Hadamard spectrum.
    Spectrum {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Print sparsity, l1 norm and degree instead of the coefficients.
        #[arg(long)]
        summary: bool,
    },
    /// Recompute the checklist of claims.
    VerifyPaper {
        /// Write the results as JSON (to stdout when no path is given).
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
        /// Comma-separated claim ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Search for functions with extreme depth-to-spectrum ratios.
    Scan(ScanArgs),
    /// Inspect or clear the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// sort, hemi_icosahedron, parity, and2, or2, maj3, nae3, constant,
    /// appendix_h
    name: String,
    /// Parity coefficient vector as a bit string, x₁ first.
    #[arg(long)]
    alpha: Option<String>,
    /// Constant term of a parity, or the value of a constant.
    #[arg(long, default_value_t = 0)]
    b: u8,
    /// Arity of a constant.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Comma-separated measure names (default: all).
    #[arg(long, value_delimiter = ',')]
    which: Option<Vec<String>>,
    /// Include witnesses in JSON output.
    #[arg(long)]
    witnesses: bool,
    /// Write reports as a JSON array (to stdout when no path is given).
    #[arg(long, num_args = 0..=1)]
    json: Option<Option<PathBuf>>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// Number of random functions to draw.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory holding the per-arity record files.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Write every record as JSON lines (to stdout when no path is given).
    #[arg(long, num_args = 0..=1)]
    json: Option<Option<PathBuf>>,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the cache directory.
    Path,
    /// List cached entries.
    List,
    /// Remove every entry.
    Clear,
    /// Recompute a random sample of entries and compare.
    Verify {
        #[arg(long, default_value_t = 8)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Claims,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ArityTooLarge { .. } | Error::Budget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn read_input(path: Option<&Path>) -> Result<(String, String), Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), text))
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(("<stdin>".into(), text))
        }
    }
}

fn read_functions(path: Option<&Path>) -> Result<Vec<BooleanFunction>, Failure> {
    let (name, text) = read_input(path)?;
    let fs = parse_functions(&text).map_err(|e| Failure::Usage(format!("{name}: {e}")))?;
    if fs.is_empty() {
        return Err(Failure::Usage(format!("{name}: no functions")));
    }
    Ok(fs)
}

fn read_one(path: Option<&Path>) -> Result<BooleanFunction, Failure> {
    let mut fs = read_functions(path)?;
    if fs.len() > 1 {
        return Err(Failure::Usage("expected a single function".into()));
    }
    Ok(fs.remove(0))
}

/// Writes to `path`, or stdout when `path` is `None`.
fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn family(args: &FamilyArgs) -> Outcome {
    let b = match args.b {
        0 => false,
        1 => true,
        _ => return Err(Failure::Usage("--b must be 0 or 1".into())),
    };
    let fam = match args.name.as_str() {
        "sort" => Family::Sort,
        "hemi_icosahedron" | "hi" => Family::HemiIcosahedron,
        "parity" => {
            let alpha = args
                .alpha
                .as_deref()
                .ok_or_else(|| Failure::Usage("parity needs --alpha".into()))?;
            Family::Parity {
                alpha: F2Vector::from_bit_str(alpha)?,
                b,
            }
        }
        "and2" => Family::And2,
        "or2" => Family::Or2,
        "maj3" => Family::Maj3,
        "nae3" => Family::Nae3,
        "constant" => Family::Constant {
            value: b,
            arity: args.n.ok_or_else(|| Failure::Usage("constant needs --n".into()))?,
        },
        "appendix_h" => Family::AppendixH {
            k: args.k.ok_or_else(|| Failure::Usage("appendix_h needs --k".into()))?,
        },
        other => return Err(Failure::Usage(format!("unknown family `{other}`"))),
    };
    println!("{}", fam.build()?);
    Ok(())
}

fn measure_cmd(args: &MeasureArgs, global: &Global) -> Outcome {
    let which: Vec<Measure> = match &args.which {
        Some(names) => names.iter().map(|n| n.trim().parse()).collect::<Result<_, _>>()?,
        None => Measure::ALL.to_vec(),
    };
    let functions = read_functions(args.input.as_deref())?;
    let budget = global.budget();
    let cache = if global.no_cache || args.timing {
        None
    } else {
        Cache::open(Cache::default_dir()).ok()
    };
    let req = Request {
        which: &which,
        budget,
        witnesses: args.witnesses,
    };
    let opts = MeasureOptions {
        which: which.clone(),
        budget,
        witnesses: args.witnesses,
        timing: args.timing,
    };
    let mut reports = Vec::new();
    for f in &functions {
        let key = cache::key(f, &req);
        let hit = cache.as_ref().and_then(|c| c.get(&key, &budget));
        let report = match hit {
            Some(entry) => entry.report,
            None => {
                let report = measure(f, &opts)?;
                if let Some(c) = &cache {
                    // A failed cache write only costs a recomputation later.
                    let _ = c.put(&CacheEntry {
                        key,
                        solver_version: SOLVER_VERSION.into(),
                        budget,
                        created_at: now(),
                        report: report.clone(),
                    });
                }
                report
            }
        };
        reports.push(report);
    }

    match &args.json {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(&reports).map_err(|e| Failure::Usage(e.to_string()))?;
            text.push('\n');
            emit(path.as_deref(), &text)?;
        }
        None => print_reports(&reports, &which),
    }
    if let Some(limits) = reports.iter().find(|r| !r.limits_hit.is_empty()) {
        return Err(Failure::Budget(limits.limits_hit.join(", ")));
    }
    Ok(())
}

fn print_reports(reports: &[MeasureReport], which: &[Measure]) {
    let mut which = which.to_vec();
    which.sort();
    which.dedup();
    for (i, r) in reports.iter().enumerate() {
        if which.len() == 1 {
            println!("{}", r.get(which[0]).unwrap_or_default());
            continue;
        }
        if i > 0 {
            println!();
        }
        if reports.len() > 1 {
            println!("{}", r.function);
        }
        for m in &which {
            println!("{m}: {}", r.get(*m).unwrap_or_default());
        }
    }
}

fn compose(outer: &Path, inner: &[PathBuf]) -> Outcome {
    let f = read_one(Some(outer))?;
    let mut gs = Vec::new();
    for p in inner {
        gs.push(read_one(Some(p))?);
    }
    if gs.len() == 1 {
        gs = vec![gs.remove(0); f.arity()];
    }
    println!("{}", f.compose(&gs)?);
    Ok(())
}

fn spectrum(input: Option<&Path>, summary: bool) -> Outcome {
    for f in read_functions(input)? {
        let s = FourierSpectrum::of(&f);
        if summary {
            println!("sparsity {}", s.sparsity());
            println!("l1 {}", s.spectral_l1());
            println!("degree {}", s.degree());
        } else {
            print!("{s}");
        }
    }
    Ok(())
}

fn verify(
    global: &Global,
    json: &Option<Option<PathBuf>>,
    only: &Option<Vec<String>>,
    list: bool,
    timing: bool,
) -> Outcome {
    if list {
        for id in paperlab::claim_ids() {
            println!("{id}");
        }
        return Ok(());
    }
    if let Some(only) = only {
        let ids = paperlab::claim_ids();
        if let Some(bad) = only.iter().find(|o| !ids.contains(&o.as_str())) {
            return Err(Failure::Usage(format!("unknown claim `{bad}`")));
        }
    }
    let results = paperlab::verify_suite(&VerifyOptions {
        budget: global.budget(),
        sort_override: None,
        only: only.clone(),
        timing,
    })?;
    match json {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(&results).map_err(|e| Failure::Usage(e.to_string()))?;
            text.push('\n');
            emit(path.as_deref(), &text)?;
        }
        None => {
            for r in &results {
                let tag = match r.status {
                    ClaimStatus::Pass => "PASS",
                    ClaimStatus::Fail => "FAIL",
                    ClaimStatus::OutOfBudget => "BUDGET",
                    ClaimStatus::ReportOnly => "REPORT",
                };
                println!("{tag:<6} {}: {}", r.id, r.computed);
                if r.status == ClaimStatus::Fail {
                    println!("       expected: {}", r.expected);
                }
            }
        }
    }
    if results.iter().any(|r| r.status == ClaimStatus::Fail) {
        return Err(Failure::Claims);
    }
    Ok(())
}

fn scan_cmd(args: &ScanArgs, global: &Global) -> Outcome {
    let mode = match (args.exhaustive, args.random) {
        (true, None) => ScanMode::Exhaustive,
        (false, Some(count)) => ScanMode::Random {
            count,
            seed: args.seed,
        },
        _ => return Err(Failure::Usage("give exactly one of --exhaustive or --random".into())),
    };
    let records = paperlab::scan(args.n, mode, &global.budget(), now())?;
    if let Some(path) = &args.json {
        let mut text = String::new();
        for r in &records {
            text.push_str(&serde_json::to_string(r).map_err(|e| Failure::Usage(e.to_string()))?);
            text.push('\n');
        }
        emit(path.as_deref(), &text)?;
    }
    let best = records
        .iter()
        .filter_map(|r| r.ratio.map(|v| (v, r)))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    eprintln!("scanned {} non-parity functions of arity {}", records.len(), args.n);
    if let Some((ratio, r)) = best {
        eprintln!("best ratio {ratio:.4}: pdt {} sparsity {} ({})", r.pdt, r.sparsity, r.function);
    }
    if let Some(dir) = &args.store {
        let store = RecordStore::open(dir)?;
        let kept = store.offer(args.n, &records)?;
        eprintln!("{kept} new Pareto records in {}", dir.display());
    }
    Ok(())
}

fn cache_cmd(action: &CacheAction) -> Outcome {
    let cache = Cache::open(Cache::default_dir())?;
    match action {
        CacheAction::Path => println!("{}", cache.dir().display()),
        CacheAction::List => {
            for e in cache.entries()? {
                println!("{} {} {}", e.key, e.created_at, e.report.function);
            }
        }
        CacheAction::Clear => println!("removed {}", cache.clear()?),
        CacheAction::Verify { sample, seed } => {
            let mut entries = cache.entries()?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            entries.shuffle(&mut rng);
            let mut bad = 0;
            for e in entries.iter().take(*sample) {
                let opts = options_of(&e.report, e.budget);
                let fresh = measure(&e.report.function.parse()?, &opts)?;
                if fresh != e.report {
                    bad += 1;
                    println!("mismatch {}", e.key);
                }
            }
            println!("checked {}, mismatches {bad}", entries.len().min(*sample));
            if bad > 0 {
                return Err(Failure::Claims);
            }
        }
    }
    Ok(())
}

/// The options that produced a cached report.
fn options_of(r: &MeasureReport, budget: Budget) -> MeasureOptions {
    MeasureOptions {
        which: Measure::ALL.into_iter().filter(|m| r.get(*m).is_some()).collect(),
        budget,
        witnesses: r.witnesses.is_some(),
        timing: false,
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Family(args) => family(args),
        Command::Measure(args) => measure_cmd(args, g),
        Command::Compose { outer, inner } => compose(outer, inner),
        Command::Power { k, input } => {
            println!("{}", read_one(input.as_deref())?.power(*k)?);
            Ok(())
        }
        Command::Spectrum { input, summary } => spectrum(input.as_deref(), *summary),
        Command::VerifyPaper {
            json,
            only,
            list,
            timing,
        } => verify(g, json, only, *list, *timing),
        Command::Scan(args) => scan_cmd(args, g),
        Command::Cache { action } => cache_cmd(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget: {msg}");
            ExitCode::from(3)
        }
    }
}
