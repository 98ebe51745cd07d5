use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scatter_smooth::harness::{
    read_dataset_csv, run_experiment, timing_benchmark, write_comparison_table, write_curves_csv, write_svg_plot,
    write_table_csv, DataSource, ExperimentConfig, ExperimentReport, MethodSpec, QueryMode,
};
use scatter_smooth::{Error, RbfTail};

/// Smooth noisy scattered data with LOWESS and RBF methods and score the results.
#[derive(Parser, Debug)]
#[command(name = "smooth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run methods on one dataset and write curves, error tables and plots.
    Run(RunArgs),
    /// Regenerate one of the two comparison tables on synthetic data.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// CSV with header `x[,y[,z]],value`.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    input: Option<PathBuf>,
    /// Noise-free reference for the distance error (defaults to the input).
    #[arg(long, requires = "input")]
    reference: Option<PathBuf>,
    /// Number of samples of the built-in test function.
    #[arg(long, value_name = "N")]
    synthetic: Option<usize>,
    #[arg(long, value_name = "LO,HI", default_value = "-1,1", value_parser = parse_interval)]
    interval: (f64, f64),
    /// Uniform noise amplitude.
    #[arg(long, value_name = "A", default_value_t = 0.1)]
    noise: f64,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// e.g. `lowess:d=1,k=100`, `rbf-local:poly=const,k=100`, `rbf-global:m=20,d=1,overlap=2`.
    #[arg(long = "method", required = true, value_name = "SPEC")]
    methods: Vec<String>,
    /// `at-samples` or `grid:R`.
    #[arg(long, default_value = "at-samples")]
    queries: String,
    #[arg(long, value_name = "PATH")]
    out_curves: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out_table: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out_plot: Option<PathBuf>,
    /// Also report median timings over several repeats.
    #[arg(long)]
    bench: bool,
    #[arg(long, value_name = "R", default_value_t = 5)]
    repeats: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    /// LOWESS d=1 against the local RBF for K = 100, 200, 500, 1000.
    Table1,
    /// Global RBF with 20 centers against LOWESS d=1, K=100.
    Table2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Poly {
    Const,
    None,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    table: Table,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tail of the local RBF in table1.
    #[arg(long, value_enum, default_value_t = Poly::Const)]
    rbf_poly: Poly,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    Ok((lo, hi))
}

enum Failure {
    Config(String),
    AllMethodsFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

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
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Reproduce(args) => reproduce(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::AllMethodsFailed) => {
            eprintln!("error: every method failed");
            ExitCode::from(2)
        }
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<MethodSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    let queries: QueryMode = args.queries.parse()?;
    let source = match (&args.input, args.synthetic) {
        (Some(path), _) => DataSource::Provided {
            data: read_dataset_csv(path)?,
            reference: args.reference.as_deref().map(read_dataset_csv).transpose()?,
        },
        (None, Some(n)) => DataSource::Synthetic {
            n,
            interval: args.interval,
            amplitude: args.noise,
            seed: args.seed,
        },
        (None, None) => unreachable!("clap requires one data source"),
    };
    let config = ExperimentConfig {
        source,
        methods,
        queries,
    };

    let report = run_experiment(&config)?;
    print_report(&report);
    if let Some(p) = &args.out_curves {
        write_curves_csv(&report, p)?;
    }
    if let Some(p) = &args.out_table {
        write_table_csv(&report, p)?;
    }
    if let Some(p) = &args.out_plot {
        write_svg_plot(&report, p)?;
    }
    if report.all_failed() {
        return Err(Failure::AllMethodsFailed);
    }

    if args.bench {
        println!();
        println!(
            "{:<40} {:>7} {:>6} {:>7} {:>12}",
            "method", "N", "K|M", "R", "median ms"
        );
        for row in timing_benchmark(&config, args.repeats)? {
            println!(
                "{:<40} {:>7} {:>6} {:>7} {:>12.3}",
                row.method, row.n, row.param, row.r, row.median_ms
            );
        }
    }
    Ok(())
}

fn print_report(report: &ExperimentReport) {
    println!("{:<40} {:>14} {:>14} {:>10}", "method", "E_c", "E_d", "ms");
    for o in &report.outcomes {
        let ms = o.elapsed.as_secs_f64() * 1e3;
        match &o.result {
            Ok(r) => {
                let ec = r.errors.curvature.map_or("-".to_string(), |c| format!("{c:.6}"));
                println!(
                    "{:<40} {:>14} {:>14.6} {:>10.1}",
                    o.method.to_string(),
                    ec,
                    r.errors.distance,
                    ms
                );
            }
            Err(msg) => println!("{:<40} failed: {msg}", o.method.to_string()),
        }
    }
}

fn reproduce(args: ReproduceArgs) -> Result<(), Failure> {
    let rows: Vec<Vec<MethodSpec>> = match args.table {
        Table::Table1 => {
            let tail = match args.rbf_poly {
                Poly::Const => RbfTail::Constant,
                Poly::None => RbfTail::None,
            };
            [100, 200, 500, 1000]
                .into_iter()
                .map(|k| vec![MethodSpec::Lowess { degree: 1, k }, MethodSpec::RbfLocal { tail, k }])
                .collect()
        }
        Table::Table2 => vec![vec![
            MethodSpec::RbfGlobal {
                m: 20,
                degree: 1,
                overlap: scatter_smooth::rbf::DEFAULT_OVERLAP,
            },
            MethodSpec::Lowess { degree: 1, k: 100 },
        ]],
    };
    let mut reports = Vec::with_capacity(rows.len());
    for methods in rows {
        let report = run_experiment(&ExperimentConfig::standard(2000, args.seed, methods))?;
        print_report(&report);
        println!();
        reports.push(report);
    }
    if let Some(p) = &args.out {
        write_comparison_table(&reports, p)?;
    }
    if reports.iter().all(ExperimentReport::all_failed) {
        return Err(Failure::AllMethodsFailed);
    }
    Ok(())
}
