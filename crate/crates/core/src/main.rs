use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use l1geo::convexity::{convexify, is_l1_convex};
use l1geo::harness::{
    expect_cellset, gen_random_convex, parse_set, print_set, verify, GenConfig, GenMode, Outcome, Record, Report,
    SetDocument, Suite, VerifyConfig,
};
use l1geo::integral::{crofton_integral, kinematic_higher_mc, kinematic_principal, kubota_sum, steiner_check};
use l1geo::lattice::{CellSet, RatBox};
use l1geo::pixellation::outer_pixellate;
use l1geo::rational::{format_rational, parse_rational, Rational};
use l1geo::valuations::{intrinsic_volumes_boxunion, intrinsic_volumes_cellset, IVVector};
use l1geo::{Error, Result};

#[derive(Parser)]
#[command(name = "l1geo", version, about = "Exact integral geometry of pixellated sets in the 1-norm")]
struct Cli {
    /// Seed for generators and Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Monte Carlo samples per group element.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Ambient dimension (generators and suites); checked against inputs otherwise.
    #[arg(long, global = true)]
    dimension: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Set document path, or `-` for stdin.
    #[arg(default_value = "-")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Decide ℓ1-convexity of a cell set; exits 1 when it is not convex.
    CheckConvex(Input),
    /// ℓ1-intrinsic volumes V′_0..V′_n of a cell set or box union.
    Volumes(Input),
    /// Outer pixellation of a shape document at resolution λ.
    Pixellate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Smallest ℓ1-convex cell set containing the input, inside its bounding box.
    Convexify(Input),
    /// Check the Steiner formula for every degree k and m = 1..=3.
    Steiner(Input),
    /// Check the Crofton formula for every 0 ≤ j ≤ k ≤ n.
    Crofton(Input),
    /// Check the Kubota formula for every 0 ≤ j ≤ k ≤ n.
    Kubota(Input),
    /// Principal kinematic formula (exact) and higher formulas (Monte Carlo).
    Kinematic {
        #[command(flatten)]
        input: Input,
        /// Interval I as `min:max` with comma-separated rationals, e.g. `0,0:3/2,1`.
        #[arg(long)]
        interval: String,
    },
    /// Product of two cell sets, with the product formula checked.
    Product { left: PathBuf, right: PathBuf },
    /// Generate a seeded random ℓ1-convex cell set.
    Gen {
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value = "convexify")]
        mode: GenMode,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Run a verification suite over seeded random instances.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 4)]
        bound: i64,
    },
}

enum Output {
    Text(String),
    Report(Report),
    Verdict { text: String, pass: bool },
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(text)
}

fn load(path: &PathBuf, dimension: Option<usize>) -> Result<SetDocument> {
    let doc = parse_set(&read_input(path)?)?;
    if let Some(n) = dimension {
        if n != doc.dimension() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: doc.dimension(),
            });
        }
    }
    Ok(doc)
}

fn load_cells(path: &PathBuf, dimension: Option<usize>) -> Result<CellSet> {
    expect_cellset(load(path, dimension)?)
}

fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn parse_interval(text: &str) -> Result<RatBox> {
    let (min, max) = text.split_once(':').ok_or_else(|| Error::Parse {
        location: "--interval".into(),
        message: "expected `min:max`".into(),
    })?;
    RatBox::new(parse_vector(min)?, parse_vector(max)?)
}

fn volumes_json(v: &IVVector) -> serde_json::Value {
    json!(v.values().iter().map(format_rational).collect::<Vec<_>>())
}

fn record(name: String, dimension: usize, outcome: Outcome) -> Record {
    Record {
        name,
        instance: 0,
        dimension,
        outcome,
    }
}

fn formula_report(cli: &Cli, name: &str, x: &CellSet, start: Instant) -> Result<Report> {
    let n = x.dimension();
    let mut records = Vec::new();
    for k in 0..=n {
        match name {
            "steiner" => {
                for m in 1..=3 {
                    records.push(record(format!("steiner k={k} m={m}"), n, Outcome::exact(&steiner_check(x, k, m)?)));
                }
            }
            _ => {
                for j in 0..=k {
                    let check = if name == "crofton" { crofton_integral(x, k, j)? } else { kubota_sum(x, k, j)? };
                    records.push(record(format!("{name} k={k} j={j}"), n, Outcome::exact(&check)));
                }
            }
        }
    }
    let inputs = json!({ "set": print_set(&SetDocument::Cells(x.clone())) });
    Ok(Report::new(name, &inputs, cli.seed, records, start.elapsed().as_millis()))
}

fn run(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    let out = match &cli.command {
        Command::CheckConvex(input) => {
            let x = load_cells(&input.input, cli.dimension)?;
            let verdict = is_l1_convex(&x);
            let text = if cli.json {
                json!({ "convex": verdict.is_convex, "witness": verdict.witness }).to_string()
            } else if let Some((a, b)) = &verdict.witness {
                format!("not convex: no cell between {a:?} and {b:?}")
            } else {
                "convex".to_string()
            };
            Output::Verdict {
                text,
                pass: verdict.is_convex,
            }
        }
        Command::Volumes(input) => {
            let v = match load(&input.input, cli.dimension)? {
                SetDocument::Cells(x) => intrinsic_volumes_cellset(&x),
                SetDocument::Boxes(u) => intrinsic_volumes_boxunion(&u),
                SetDocument::Shape(_) => {
                    return Err(Error::InvalidArgument("pixellate a shape before computing volumes".into()))
                }
            };
            Output::Text(if cli.json { json!({ "volumes": volumes_json(&v) }).to_string() } else { v.to_string() })
        }
        Command::Pixellate { input, lambda } => {
            let SetDocument::Shape(shape) = load(&input.input, cli.dimension)? else {
                return Err(Error::InvalidArgument("pixellate expects a shape document".into()));
            };
            let x = outer_pixellate(&shape, &parse_rational(lambda)?)?;
            Output::Text(print_set(&SetDocument::Cells(x)))
        }
        Command::Convexify(input) => {
            let x = load_cells(&input.input, cli.dimension)?;
            let bound = x.to_box_union().bounding_box().ok_or(Error::EmptyInput)?;
            Output::Text(print_set(&SetDocument::Cells(convexify(&x, &bound)?)))
        }
        Command::Steiner(input) => {
            Output::Report(formula_report(cli, "steiner", &load_cells(&input.input, cli.dimension)?, start)?)
        }
        Command::Crofton(input) => {
            Output::Report(formula_report(cli, "crofton", &load_cells(&input.input, cli.dimension)?, start)?)
        }
        Command::Kubota(input) => {
            Output::Report(formula_report(cli, "kubota", &load_cells(&input.input, cli.dimension)?, start)?)
        }
        Command::Kinematic { input, interval } => {
            let x = load_cells(&input.input, cli.dimension)?;
            let i = parse_interval(interval)?;
            let n = x.dimension();
            let samples = cli.samples.unwrap_or(2000);
            let mut records = vec![record("kinematic principal".into(), n, Outcome::exact(&kinematic_principal(&x, &i)?))];
            for k in 0..=n {
                let est = kinematic_higher_mc(&x, &i, k, samples, cli.seed)?;
                records.push(record(format!("kinematic mc k={k}"), n, Outcome::monte_carlo(&est)));
            }
            let inputs = json!({
                "set": print_set(&SetDocument::Cells(x)),
                "interval": interval,
                "samples": samples,
            });
            Output::Report(Report::new("kinematic", &inputs, cli.seed, records, start.elapsed().as_millis()))
        }
        Command::Product { left, right } => {
            let x = load_cells(left, None)?;
            let y = load_cells(right, None)?;
            let p = l1geo::valuations::product(&x, &y)?;
            let lhs = intrinsic_volumes_cellset(&p);
            let rhs = intrinsic_volumes_cellset(&x).convolve(&intrinsic_volumes_cellset(&y));
            let text = if cli.json {
                json!({
                    "product": serde_json::from_str::<serde_json::Value>(&print_set(&SetDocument::Cells(p)))
                        .expect("documents are JSON"),
                    "volumes": volumes_json(&lhs),
                    "convolution": volumes_json(&rhs),
                    "equal": lhs == rhs,
                })
                .to_string()
            } else {
                format!("{}\nV′(X×Y) = {lhs}\nV′(X)*V′(Y) = {rhs}", print_set(&SetDocument::Cells(p)))
            };
            Output::Verdict { text, pass: lhs == rhs }
        }
        Command::Gen {
            bound,
            density,
            mode,
            lambda,
        } => {
            let config = GenConfig::new(cli.dimension.unwrap_or(2), *bound, *density, *mode)?
                .with_resolution(parse_rational(lambda)?);
            Output::Text(print_set(&SetDocument::Cells(gen_random_convex(&config, cli.seed)?)))
        }
        Command::Verify {
            suite,
            instances,
            bound,
        } => {
            let mut config = VerifyConfig::new(*suite);
            config.instances = *instances;
            config.bound = *bound;
            config.seed = cli.seed;
            if let Some(n) = cli.dimension {
                config.dimensions = vec![n];
            }
            if let Some(s) = cli.samples {
                config.samples = s;
            }
            Output::Report(verify(&config)?)
        }
    };
    Ok(out)
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Text(text)) => {
            emit(&format!("{text}\n"));
            ExitCode::SUCCESS
        }
        Ok(Output::Verdict { text, pass }) => {
            emit(&format!("{text}\n"));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Output::Report(report)) => {
            if cli.json {
                emit(&format!("{}\n", report.to_json()));
            } else {
                emit(&report.render_text());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
