//! `hyperlab`: sample hypergraphs, inspect their `j`-components, evaluate the
//! enumeration bounds, and run Monte Carlo experiments.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a comparison check failed,
//! 3 a resource guard refused the work.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperlab::combinatorics::{rank_subset, TheoryParams};
use hyperlab::enumeration::{
    census_within, enum_report, expected_cs_lower_reference, expected_rs_upper, laplace_sum_check,
    unicycle_bound, wheel_bound, UNICYCLE_CONSTANT,
};
use hyperlab::experiments::{
    compare_to_theory, run_experiment, trials_csv, ExperimentConfig, MIN_COMPARE_TRIALS,
};
use hyperlab::hypergraph::{brute_force_wheel_census, j_components, Hypergraph};
use hyperlab::processes::search_component;
use hyperlab::{BigRational, Error};

#[derive(Parser)]
#[command(
    name = "hyperlab",
    version,
    about = "Subcritical random hypergraphs and their j-components"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample H^k(n, p) and write it in the text format
    Gen(GenArgs),
    /// Print the j-components of a hypergraph file
    Components(ComponentsArgs),
    /// Tabulate F_s, B_s and their exact bracket for s = 1..s_max
    Enumerate(EnumerateArgs),
    /// Evaluate one of the analytic bounds
    Bounds(BoundsArgs),
    /// Run a Monte Carlo experiment and compare it with the prediction
    Experiment(ExperimentArgs),
    /// Dump the breadth-first component search from a start j-set
    Trace(TraceArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("prob").required(true).args(["p", "epsilon"]))]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Edge probability
    #[arg(long)]
    p: Option<f64>,
    /// Use p = (1 - epsilon) p0 for the given j
    #[arg(long, requires = "j")]
    epsilon: Option<f64>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComponentsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    j: usize,
    /// Print a wheel witness after every component that is not a hypertree
    #[arg(long)]
    wheels: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    j: usize,
    #[arg(long)]
    n: usize,
    #[arg(long = "s-max")]
    s_max: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Wheel,
    Laplace,
    Rs,
    Cs,
    Unicycle,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    s: Option<u64>,
    /// Wheel length
    #[arg(long)]
    ell: Option<usize>,
    /// Exponent of the Laplace-type sum
    #[arg(long)]
    a: Option<u32>,
    /// Leading constant of the unicycle bound
    #[arg(long, default_value_t = UNICYCLE_CONSTANT)]
    constant: f64,
    /// Also run the exhaustive wheel census
    #[arg(long)]
    census: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` file; flags given alongside override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "base-seed")]
    base_seed: Option<u64>,
    /// Budget on the expected number of edges per trial
    #[arg(long)]
    cap: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Write per-trial records here as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads (falls back to HYPERLAB_WORKERS, then to 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Omit the timing footer
    #[arg(long = "no-footer")]
    no_footer: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    j: usize,
    /// Comma-separated start j-set, e.g. 1,2
    #[arg(long, value_delimiter = ',')]
    start: Vec<u32>,
}

enum Failure {
    Lib(Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Gen(a) => gen(a, &mut out),
        Command::Components(a) => components(a, &mut out),
        Command::Enumerate(a) => enumerate(a, &mut out),
        Command::Bounds(a) => bounds(a, &mut out),
        Command::Experiment(a) => experiment(a, &mut out),
        Command::Trace(a) => trace(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(2),
        Err(Failure::Lib(e)) => {
            eprintln!("hyperlab: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => 3,
                _ => 1,
            })
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::Validation(format!("--{flag} is required here")))
}

fn read_hypergraph(path: &PathBuf) -> Result<Hypergraph, Error> {
    let f = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Hypergraph::read_text(BufReader::new(f))
}

fn gen(a: GenArgs, out: &mut impl Write) -> Outcome {
    let p = match (a.p, a.epsilon, a.j) {
        (Some(p), _, _) => p,
        (None, Some(eps), Some(j)) => TheoryParams::new(a.n, a.k, j, eps)?.p,
        _ => unreachable!("clap enforces --p or --epsilon with --j"),
    };
    let h = Hypergraph::sample(a.n, a.k, p, a.seed)?;
    match a.out {
        Some(path) => fs::write(&path, h.to_text())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(h.to_text().as_bytes())?,
    }
    Ok(())
}

fn components(a: ComponentsArgs, out: &mut impl Write) -> Outcome {
    let h = read_hypergraph(&a.input)?;
    let d = j_components(&h, a.j)?;
    writeln!(out, "id,size,order,hypertree")?;
    for c in &d.components {
        writeln!(out, "{},{},{},{}", c.id, c.size, c.order, c.is_hypertree)?;
        if a.wheels {
            if let Some(w) = &c.wheel_witness {
                writeln!(out, "# wheel {} {}", c.id, w)?;
            }
        }
    }
    writeln!(out, "# isolated_jsets={}", d.isolated_jsets)?;
    Ok(())
}

fn fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn enumerate(a: EnumerateArgs, out: &mut impl Write) -> Outcome {
    if a.s_max < 1 {
        return Err(Error::Validation("--s-max must be at least 1".into()).into());
    }
    writeln!(out, "# s\tF_s\tB_s\tlower\tupper\tbounds_hold")?;
    let mut all = true;
    for s in 1..=a.s_max {
        let r = enum_report(a.n, a.k, a.j, s)?;
        all &= r.bounds_hold;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.s,
            fraction(&r.f_s),
            fraction(&r.b_s),
            fraction(&r.lower),
            fraction(&r.upper),
            r.bounds_hold
        )?;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn bounds(a: BoundsArgs, out: &mut impl Write) -> Outcome {
    let params = |a: &BoundsArgs| -> Result<TheoryParams, Error> {
        TheoryParams::new(
            need(a.n, "n")?,
            need(a.k, "k")?,
            need(a.j, "j")?,
            need(a.epsilon, "epsilon")?,
        )
    };
    match a.which {
        Which::Wheel => {
            let (n, k, j, ell) = (
                need(a.n, "n")?,
                need(a.k, "k")?,
                need(a.j, "j")?,
                need(a.ell, "ell")?,
            );
            let b = wheel_bound(n, k, j, ell)?;
            writeln!(out, "c_w={}", fraction(&b.c_w))?;
            writeln!(out, "bound={}", fraction(&b.bound_exact))?;
            writeln!(out, "bound_f64={}", b.bound)?;
            if a.census {
                let w = brute_force_wheel_census(n, k, j, ell)?;
                let holds = census_within(w, &b.bound_exact);
                writeln!(out, "census={w}")?;
                writeln!(out, "holds={holds}")?;
                if !holds {
                    return Err(Failure::Checks);
                }
            }
        }
        Which::Laplace => {
            let c = laplace_sum_check(need(a.a, "a")?, need(a.s, "s")?)?;
            writeln!(out, "lhs={}\nrhs={}\nholds={}", c.lhs, c.rhs, c.holds)?;
            if !c.holds {
                return Err(Failure::Checks);
            }
        }
        Which::Rs => {
            let p = params(&a)?;
            let s = need(a.s, "s")?;
            writeln!(out, "expected_rs_upper={}", expected_rs_upper(&p, s))?;
        }
        Which::Cs => {
            let p = params(&a)?;
            let s = need(a.s, "s")?;
            writeln!(
                out,
                "expected_cs_reference={}",
                expected_cs_lower_reference(&p, s)
            )?;
        }
        Which::Unicycle => {
            let p = params(&a)?;
            let v = unicycle_bound(&p, need(a.s, "s")?, a.constant)?;
            writeln!(out, "ln_bound={}\nbound={}", v.ln, v)?;
        }
    }
    Ok(())
}

fn experiment(a: ExperimentArgs, out: &mut impl Write) -> Outcome {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::parse(
            &fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        )?,
        None => ExperimentConfig::default(),
    };
    let overrides: [(&str, Option<String>); 10] = [
        ("n", a.n.map(|v| v.to_string())),
        ("k", a.k.map(|v| v.to_string())),
        ("j", a.j.map(|v| v.to_string())),
        ("epsilon", a.epsilon.map(|v| v.to_string())),
        ("trials", a.trials.map(|v| v.to_string())),
        ("m", a.m.map(|v| v.to_string())),
        ("base_seed", a.base_seed.map(|v| v.to_string())),
        ("cap", a.cap.map(|v| v.to_string())),
        ("width", a.width.map(|v| v.to_string())),
        ("threshold", a.threshold.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    let workers = match a.workers {
        Some(w) => w,
        None => match std::env::var("HYPERLAB_WORKERS") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("HYPERLAB_WORKERS={v:?} is not a count")))?,
            Err(_) => 1,
        },
    };
    if workers == 0 {
        return Err(Error::Validation("workers must be at least 1".into()).into());
    }

    let (records, summary) = run_experiment(&cfg, workers)?;
    if let Some(path) = &a.csv {
        fs::write(path, trials_csv(&records, cfg.m))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    out.write_all(summary.pretty().as_bytes())?;
    writeln!(out)?;
    out.write_all(summary.machine_block().as_bytes())?;
    writeln!(out)?;
    let mut failed = false;
    if cfg.trials < MIN_COMPARE_TRIALS {
        writeln!(
            out,
            "comparison skipped: needs at least {MIN_COMPARE_TRIALS} trials"
        )?;
    } else {
        let verdict = compare_to_theory(&summary)?;
        out.write_all(verdict.render().as_bytes())?;
        failed = !verdict.passed();
    }
    if !a.no_footer {
        writeln!(
            out,
            "# footer (not reproducible): runtime_secs={:.3}",
            summary.runtime_secs
        )?;
    }
    if failed {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn trace(a: TraceArgs, out: &mut impl Write) -> Outcome {
    let h = read_hypergraph(&a.input)?;
    let mut start = a.start.clone();
    start.sort_unstable();
    if start.len() == a.j {
        rank_subset(&start, h.n())?;
    }
    let t = search_component(&h, a.j, &start)?;
    out.write_all(t.dump().as_bytes())?;
    writeln!(out, "# size={} order={}", t.size, t.order)?;
    Ok(())
}
