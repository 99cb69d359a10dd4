mod input;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use qperiod::analysis::{is_fuchsian, ramification_data, singular_points, to_diff_form};
use qperiod::fit::{fit_operator_search_modular, ModularConfig, DEFAULT_MIN_EXCESS};
use qperiod::laurent::constant_term_powers;
use qperiod::kvdb::{self, serialize_operator, serialize_period, Filter};
use qperiod::recurrence::{expand, product_period};
use qperiod::PeriodSequence;

/// Exit status for usage errors (BSD `EX_USAGE`).
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qperiod", version, about = "Quantum period sequences and their Picard-Fuchs operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every record of a database file
    Validate {
        /// A `smooth_fano_N.txt` file
        file: PathBuf,
        /// Dimension of the database; inferred from the file name when omitted
        dimension: Option<u8>,
        /// Also check that each operator is Fuchsian
        #[arg(long)]
        fuchsian: bool,
        /// Also compute ramification data and the ramification defect
        #[arg(long)]
        ramification: bool,
        /// Write a JSON report to this path
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Expand the period annihilated by an operator, or of a Laurent polynomial mirror
    Expand {
        /// Key-value input holding pf_coefficients and pf_exponents, or a bare
        /// Laurent polynomial; `-` for stdin
        input: Option<PathBuf>,
        /// Compute c_0 through c_N
        #[arg(long, value_name = "N", default_value_t = 20)]
        terms: usize,
    },
    /// Find a normalized operator annihilating a period sequence
    Fit {
        /// Key-value input with a period line, or a bare [c0,c1,...] list; `-` for stdin
        input: Option<PathBuf>,
        /// Use only c_0 through c_N
        #[arg(long, value_name = "N")]
        terms: Option<usize>,
        /// Seed for the random primes of the modular solver
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Required number of equations beyond the rank
        #[arg(long, value_name = "K", default_value_t = DEFAULT_MIN_EXCESS)]
        min_excess: usize,
        /// Largest order R in D to try
        #[arg(long, value_name = "R", default_value_t = 4)]
        max_order: u32,
        /// Largest degree S in t to try
        #[arg(long, value_name = "S", default_value_t = 10)]
        max_degree: u32,
    },
    /// Singular points, Fuchsian test and ramification data of an operator
    Analyze {
        /// Key-value input holding pf_coefficients and pf_exponents; `-` for stdin
        input: Option<PathBuf>,
    },
    /// Period of a product from the periods of its factors
    Product {
        left: PathBuf,
        right: PathBuf,
        /// Compute c_0 through c_N; defaults to the shorter input
        #[arg(long, value_name = "N")]
        terms: Option<usize>,
    },
    /// Print records matching filters such as id=32, name=CKP, c4=72
    Query {
        #[command(flatten)]
        data: DataArgs,
        /// Filters `id=N`, `name=TEXT`, `cD=N` for D in 2..6
        filters: Vec<String>,
    },
    /// Serve the XML search endpoint
    Serve {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Database files named smooth_fano_N.txt
    #[arg(long, value_name = "FILE", num_args = 1.., required = true)]
    data: Vec<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qperiod: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate {
            file,
            dimension,
            fuchsian,
            ramification,
            report,
        } => {
            let db = input::load_database(&file, dimension)?;
            let rep = validate::validate_database(
                &db,
                &file.display().to_string(),
                validate::Options {
                    fuchsian,
                    ramification,
                },
            );
            print!("{}", rep.render());
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&rep).expect("report serializes");
                std::fs::write(&path, json + "\n")
                    .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
            }
            Ok(if rep.ok() { 0 } else { EXIT_INVALID })
        }
        Command::Expand { input, terms } => {
            let seq = match input::read_generator(input.as_deref())? {
                input::Generator::Operator(op) => {
                    let seeds = PeriodSequence::from_integers([1, 0]);
                    if terms <= 1 {
                        seeds.truncated(terms + 1)
                    } else {
                        expand(&op, &seeds, terms).map_err(|e| Failure::domain(e.to_string()))?
                    }
                }
                input::Generator::Laurent(f) => {
                    constant_term_powers(&f, terms).map_err(|e| Failure::domain(e.to_string()))?
                }
            };
            print!("{}", serialize_period(&seq));
            Ok(0)
        }
        Command::Fit {
            input,
            terms,
            seed,
            min_excess,
            max_order,
            max_degree,
        } => {
            let mut seq = input::read_period(input.as_deref())?;
            if let Some(n) = terms {
                seq = seq.truncated(n + 1);
            }
            log::info!("fitting {} terms, ansatz up to ({max_order}, {max_degree})", seq.len());
            let config = ModularConfig::with_seed(seed);
            let fit = fit_operator_search_modular(&seq, max_order, max_degree, min_excess, &config)
                .map_err(|e| {
                    Failure::domain(format!(
                        "{e} on {} terms with --min-excess {min_excess}; supply more terms or widen --max-order/--max-degree",
                        seq.len()
                    ))
                })?;
            eprintln!(
                "ansatz (R, S) = ({}, {}), {} excess equations",
                fit.ansatz.0, fit.ansatz.1, fit.excess_equations
            );
            print!("{}", serialize_operator(&fit.operator));
            Ok(0)
        }
        Command::Analyze { input } => {
            let op = input::read_operator(input.as_deref())?;
            let df = to_diff_form(&op);
            println!("operator: {op}");
            println!("order: {}", df.order());
            let points: Vec<String> = singular_points(&df).iter().map(|p| p.to_string()).collect();
            println!("singular points: {}", points.join("; "));
            let cert = is_fuchsian(&df);
            println!("fuchsian: {}", cert.fuchsian);
            if cert.fuchsian {
                let rep = ramification_data(&op).map_err(|e| Failure::domain(e.to_string()))?;
                print!("{rep}");
            }
            Ok(0)
        }
        Command::Product { left, right, terms } => {
            let a = input::read_period(Some(&left))?;
            let b = input::read_period(Some(&right))?;
            let shortest = a.len().min(b.len()).saturating_sub(1);
            let n = terms.unwrap_or(shortest);
            let seq = product_period(&a, &b, n).map_err(|e| Failure::domain(e.to_string()))?;
            print!("{}", serialize_period(&seq));
            Ok(0)
        }
        Command::Query { data, filters } => {
            let filter = parse_filter(&filters)?;
            let mut out = Vec::new();
            for path in &data.data {
                let db = input::load_database(path, None)?;
                let hits = db.query(&filter).map_err(|e| Failure::usage(e.to_string()))?;
                out.extend(hits.into_iter().map(kvdb::serialize_record));
            }
            print!("{}", out.join("\n"));
            Ok(0)
        }
        Command::Serve { data, port } => {
            let overrides = std::env::var(qperiod_service::DATA_ENV).ok();
            let catalog = qperiod_service::Catalog::load(&data.data, overrides.as_deref())
                .map_err(|e| Failure::parse(e.to_string()))?;
            serve(catalog, port)
        }
    }
}

fn parse_filter(filters: &[String]) -> Result<Filter, Failure> {
    let mut filter = Filter::new();
    for f in filters {
        let (key, value) = f
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("filter '{f}' is not of the form key=value")))?;
        let bad = || Failure::usage(format!("filter '{f}' needs an integer value"));
        match key {
            "id" => filter.id = Some(value.parse().map_err(|_| bad())?),
            "name" => filter.name = Some(value.to_string()),
            _ => match key.strip_prefix('c').and_then(|d| d.parse::<usize>().ok()) {
                Some(d) if kvdb::QUERY_DEGREES.contains(&d) => {
                    filter.coefficients.push((d, value.parse().map_err(|_| bad())?));
                }
                _ => return Err(Failure::usage(format!("unknown filter '{key}'; use id, name or c2..c6"))),
            },
        }
    }
    Ok(filter)
}

fn serve(catalog: qperiod_service::Catalog, port: u16) -> Result<u8, Failure> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::domain(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", port))
            .await
            .map_err(|e| Failure::domain(format!("cannot bind port {port}: {e}")))?;
        eprintln!(
            "listening on http://{}{}",
            listener.local_addr().map(|a| a.to_string()).unwrap_or_default(),
            qperiod_service::SEARCH_PATH
        );
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        qperiod_service::serve(Arc::new(catalog), listener, shutdown)
            .await
            .map_err(|e| Failure::domain(e.to_string()))?;
        Ok(0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    #[test]
    fn filters() {
        let f = parse_filter(&["c4=72".into(), "c5=360".into(), "name=CKP".into()]).unwrap();
        assert_eq!(f, Filter::new().coefficient(4, 72).coefficient(5, 360).name("CKP"));
        assert_eq!(parse_filter(&["id=3".into()]).unwrap().id, Some(3));
        for bad in ["c7=1", "c4", "id=x", "colour=red"] {
            assert_eq!(parse_filter(&[bad.into()]).unwrap_err().code, EXIT_USAGE, "{bad}");
        }
    }

    #[test]
    fn dimension_from_name() {
        assert_eq!(input::dimension_of(Path::new("a/smooth_fano_2.txt")), Some(2));
        assert_eq!(input::dimension_of(Path::new("a/fano.txt")), None);
    }

    #[test]
    fn command_line_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["qperiod", "fit", "-", "--seed", "7", "--max-order", "2"]).unwrap();
        assert!(matches!(cli.command, Command::Fit { seed: 7, max_order: 2, .. }));
        assert!(Cli::try_parse_from(["qperiod", "serve", "--port", "1"]).is_err());
        assert!(Cli::try_parse_from(["qperiod", "frobnicate"]).is_err());
    }
}
