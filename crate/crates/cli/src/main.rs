use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclecancel::fw::{ctree_search, nnvs_search, nvs_search, CycleCandidate, PathTable};
use cyclecancel::oracle::{bellman_ford, brute_ap, brute_tsp, enumerate_cycles, hungarian_ap};
use cyclecancel::trace::{JsonLinesTrace, NullTrace, TraceSink};
use cyclecancel::{
    classic_apsp, fixtures, reduce, solve, Cost, CostMatrix, Error, Permutation, ReducedMatrix,
    SolveOptions, WeightedCycle, Weights,
};

const THREADS_ENV: &str = "CYCLECANCEL_THREADS";

#[derive(Parser)]
#[command(
    name = "cyclecancel",
    version,
    about = "Negative cycle cancelling for assignment and tour problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a matrix file.
    Solve(SolveArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Determining vertices of a cyclic weight list.
    Detvertex(DetvertexArgs),
    /// One shortest-path or cycle search on a matrix.
    Fw(FwArgs),
    /// Reference solvers.
    Oracle(OracleArgs),
    /// Write a bundled instance.
    Fixture(FixtureArgs),
    /// Time the pipeline on generated instances.
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random restarts when the first harvest finds no new tour.
    #[arg(long)]
    restarts: Option<usize>,
    /// Starting derangement in cycle notation.
    #[arg(long)]
    initial: Option<String>,
    /// JSON-lines trace file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    lo: i64,
    #[arg(long, default_value_t = 100, allow_negative_numbers = true)]
    hi: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DetvertexArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    bound: i64,
    /// Lay the prefix sums out as an aligned table.
    #[arg(long)]
    pretty: bool,
    #[arg(required = true, allow_negative_numbers = true)]
    weights: Vec<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Classic,
    Nvs,
    Nnvs,
    Ctree,
}

#[derive(clap::Args)]
struct FwArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = Variant::Classic)]
    variant: Variant,
    /// Cycle bound for nnvs and ctree.
    #[arg(long, allow_negative_numbers = true)]
    bound: Option<i64>,
    /// Reduce against this derangement first; otherwise the matrix is taken
    /// as already reduced, with a zero diagonal.
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print the distance table.
    #[arg(long)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    BruteTsp,
    BruteAp,
    Hungarian,
    BellmanFord,
    Cycles,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKind,
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 1)]
    source: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    bound: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureName {
    Ex32,
    Ex34,
    Ex35,
}

#[derive(clap::Args)]
struct FixtureArgs {
    #[arg(value_enum)]
    name: FixtureName,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 40])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    lo: i64,
    #[arg(long, default_value_t = 100, allow_negative_numbers = true)]
    hi: i64,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::Io(e.to_string()))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a, &mut out),
        Command::Gen(a) => cmd_gen(a, &mut out),
        Command::Detvertex(a) => cmd_detvertex(a, &mut out),
        Command::Fw(a) => cmd_fw(a, &mut out),
        Command::Oracle(a) => cmd_oracle(a, &mut out),
        Command::Fixture(a) => cmd_fixture(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<CostMatrix<i64>, Failure> {
    CostMatrix::load(path).map_err(|e| match e {
        Error::Io(msg) => Failure::Run(Error::Io(format!("{}: {msg}", path.display()))),
        other => Failure::Run(other),
    })
}

fn parse_perm(n: usize, text: &str) -> Result<Permutation, Failure> {
    Permutation::parse_cycles(n, text).map_err(|e| Failure::Usage(e.to_string()))
}

fn with_trace<T>(
    path: Option<&Path>,
    run: impl FnOnce(&mut dyn TraceSink) -> Result<T, Failure>,
) -> Result<T, Failure> {
    match path {
        Some(p) => {
            let mut sink = JsonLinesTrace::new(BufWriter::new(File::create(p)?));
            let value = run(&mut sink)?;
            sink.finish()?;
            Ok(value)
        }
        None => run(&mut NullTrace),
    }
}

fn cmd_solve(a: SolveArgs, out: &mut impl Write) -> Outcome {
    let m = load(&a.matrix)?;
    let initial = a
        .initial
        .as_deref()
        .map(|t| parse_perm(m.n(), t))
        .transpose()?;
    let opts = SolveOptions {
        seed: a.seed,
        initial,
        restarts: a.restarts,
        threads: threads_from_env()?,
        timings: a.timings,
        ..Default::default()
    };
    let report = with_trace(a.trace.as_deref(), |t| Ok(solve(&m, &opts, t)?))?;
    if a.json {
        serde_json::to_writer_pretty(&mut *out, &report).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out)?;
    } else {
        writeln!(out, "tour {}", report.tour)?;
        writeln!(out, "value {}", report.tour_value)?;
        writeln!(out, "ap_value {}", report.ap_value)?;
        match report.certificate {
            Some(c) => writeln!(
                out,
                "certified true ({})",
                serde_json::to_value(c).unwrap().as_str().unwrap()
            )?,
            None => writeln!(out, "certified false")?,
        }
    }
    Ok(())
}

fn cmd_gen(a: GenArgs, out: &mut impl Write) -> Outcome {
    if a.n < 2 {
        return Err(Failure::Usage(format!("n must be at least 2, got {}", a.n)));
    }
    let m = CostMatrix::<i64>::random(a.n, a.lo, a.hi, a.seed)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    match a.out {
        Some(p) => m.save(p)?,
        None => out.write_all(m.to_text().as_bytes())?,
    }
    Ok(())
}

fn cmd_detvertex(a: DetvertexArgs, out: &mut impl Write) -> Outcome {
    let c = WeightedCycle::new(a.weights).map_err(|e| Failure::Usage(e.to_string()))?;
    let starts = c.determining_vertices(a.bound)?;
    let join = |v: &[usize]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "total {}", c.total())?;
    writeln!(out, "starts {}", join(&starts))?;
    let canonical = c.canonical_start(a.bound)?;
    writeln!(out, "canonical {canonical}")?;
    if a.bound == 0 {
        let fold = c.fold_procedure()?;
        writeln!(
            out,
            "fold {}{}",
            fold.start,
            if fold.fell_back { " (fallback)" } else { "" }
        )?;
    }
    let sums = c.prefix_sums(canonical)?;
    if a.pretty {
        let k = c.len();
        let cells: Vec<(String, String)> = (0..k)
            .map(|j| {
                (
                    ((canonical - 1 + j) % k + 1).to_string(),
                    sums[j].to_string(),
                )
            })
            .collect();
        let width = cells
            .iter()
            .map(|(i, s)| i.len().max(s.len()))
            .max()
            .unwrap_or(1);
        let row = |f: &dyn Fn(&(String, String)) -> &String| {
            cells
                .iter()
                .map(|c| format!("{:>width$}", f(c)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "vertex {}", row(&|c| &c.0))?;
        writeln!(out, "sum    {}", row(&|c| &c.1))?;
    } else {
        let s: Vec<String> = sums.iter().map(|x| x.to_string()).collect();
        writeln!(out, "prefix {}", s.join(" "))?;
    }
    Ok(())
}

fn as_reduced(m: &CostMatrix<i64>, base: Option<&str>) -> Result<ReducedMatrix<i64>, Failure> {
    match base {
        Some(text) => Ok(reduce(m, &parse_perm(m.n(), text)?)?),
        None => {
            let n = m.n();
            let mut data = m.entries().to_vec();
            for i in 0..n {
                data[i * n + i] = Cost::zero();
            }
            Ok(ReducedMatrix::from_entries(n, data)?)
        }
    }
}

fn print_cycle(out: &mut impl Write, c: &CycleCandidate<i64>) -> io::Result<()> {
    writeln!(out, "cycle {} value {}", c.notation(), c.value)
}

fn print_table(out: &mut impl Write, t: &PathTable<i64>) -> io::Result<()> {
    let n = t.n();
    let cells: Vec<Vec<String>> = (1..=n)
        .map(|i| (1..=n).map(|k| t.dist(i, k).to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

fn need_bound(b: Option<i64>) -> Result<i64, Failure> {
    b.ok_or_else(|| Failure::Usage("this variant needs --bound".into()))
}

fn cmd_fw(a: FwArgs, out: &mut impl Write) -> Outcome {
    let m = load(&a.matrix)?;
    match a.variant {
        Variant::Classic => {
            let outcome = match &a.base {
                Some(_) => classic_apsp(&as_reduced(&m, a.base.as_deref())?),
                None => classic_apsp(&m),
            };
            if let Some(c) = outcome.negative_cycle() {
                print_cycle(out, c)?;
            } else if let Some(t) = outcome.paths() {
                writeln!(out, "no negative cycle")?;
                if a.pretty {
                    print_table(out, t)?;
                }
            }
        }
        Variant::Nvs => {
            let r = as_reduced(&m, a.base.as_deref())?;
            let o = with_trace(a.trace.as_deref(), |t| Ok(nvs_search(&r, t)))?;
            match &o.cycle {
                Some(c) => print_cycle(out, c)?,
                None => writeln!(out, "no negative cycle")?,
            }
            writeln!(out, "blocks {}", o.blocks)?;
            if a.pretty {
                print_table(out, &o.table)?;
            }
        }
        Variant::Nnvs => {
            let bound = need_bound(a.bound)?;
            let r = as_reduced(&m, a.base.as_deref())?;
            let o = with_trace(a.trace.as_deref(), |t| {
                Ok(nnvs_search(&r, bound, &mut |_| None, t)?)
            })?;
            for c in &o.cycles {
                print_cycle(out, c)?;
            }
            writeln!(out, "blocks {}", o.blocks)?;
            if a.pretty {
                print_table(out, &o.table)?;
            }
        }
        Variant::Ctree => {
            let bound = need_bound(a.bound)?;
            let r = as_reduced(&m, a.base.as_deref())?;
            let o = ctree_search(&r, bound, None)?;
            for c in &o.cycles {
                print_cycle(out, c)?;
            }
            writeln!(out, "nodes {}", o.nodes)?;
        }
    }
    Ok(())
}

fn cmd_oracle(a: OracleArgs, out: &mut impl Write) -> Outcome {
    let m = load(&a.matrix)?;
    match a.kind {
        OracleKind::BruteTsp => {
            let (p, v) = brute_tsp(&m)?;
            writeln!(out, "{p} value {v}")?;
        }
        OracleKind::BruteAp => {
            let (p, v) = brute_ap(&m)?;
            writeln!(out, "{p} value {v}")?;
        }
        OracleKind::Hungarian => {
            let (p, v) = hungarian_ap(&m)?;
            writeln!(out, "{p} value {v}")?;
        }
        OracleKind::BellmanFord => {
            if a.source == 0 || a.source > m.n() {
                return Err(Failure::Usage(format!("source must be in 1..={}", m.n())));
            }
            match bellman_ford(&m, a.source) {
                Some(d) => {
                    for (v, c) in d.iter().enumerate() {
                        writeln!(out, "{} {c}", v + 1)?;
                    }
                }
                None => writeln!(out, "negative cycle reachable from {}", a.source)?,
            }
        }
        OracleKind::Cycles => {
            for c in enumerate_cycles(&m, a.bound)? {
                debug_assert_eq!(m.cycle_value(&c.vertices), Cost::Finite(c.value));
                print_cycle(out, &c)?;
            }
        }
    }
    Ok(())
}

fn cmd_fixture(a: FixtureArgs, out: &mut impl Write) -> Outcome {
    let text = match a.name {
        FixtureName::Ex32 => fixtures::EX32_MAT,
        FixtureName::Ex34 => fixtures::EX34_MAT,
        FixtureName::Ex35 => fixtures::EX35_MAT,
    };
    match a.out {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs, out: &mut impl Write) -> Outcome {
    if a.sizes.iter().any(|&n| n < 2) {
        return Err(Failure::Usage("sizes must be at least 2".into()));
    }
    let threads = threads_from_env()?;
    writeln!(
        out,
        "n\tseed\tap\ttour\tcertified\tphase1_ms\tphase2_ms\tphase3_ms"
    )?;
    for &n in &a.sizes {
        for seed in 0..a.seeds {
            let m = CostMatrix::<i64>::random(n, a.lo, a.hi, seed)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = SolveOptions {
                seed,
                threads,
                timings: true,
                ..Default::default()
            };
            let r = solve(&m, &opts, &mut NullTrace)?;
            let t = r.timings.unwrap_or_default();
            writeln!(
                out,
                "{n}\t{seed}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}",
                r.ap_value, r.tour_value, r.certified, t.phase1_ms, t.phase2_ms, t.phase3_ms
            )?;
        }
    }
    Ok(())
}
