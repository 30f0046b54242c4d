//! `galois-lab`: exact q-combinatorics from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification suite reports a failed
//! check, 2 on invalid usage or arguments.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galois_lab::apps::{code_count_asymptotics, demazure_basic_specialization};
use galois_lab::exact::{format_rational, parse_rational};
use galois_lab::permstat::descent_inv_table_with_limits;
use galois_lab::qcombi::{galois_number, rogers_szego_with_cap};
use galois_lab::stats::{normality_sweep, NormalityReport, DEFAULT_CDF_PRECISION};
use galois_lab::verify::{run_suite, Suite};
use galois_lab::{Error, Limits};

#[derive(Parser, Debug)]
#[command(name = "galois-lab", version, about = "Exact generalized Galois numbers, q-multinomials and their statistics")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Identity,
    Oracle,
    Moments,
    Cumulants,
    Stanley,
    Demazure,
    Codes,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Identity => Suite::Identity,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Moments => Suite::Moments,
            SuiteArg::Cumulants => Suite::Cumulants,
            SuiteArg::Stanley => Suite::Stanley,
            SuiteArg::Demazure => Suite::Demazure,
            SuiteArg::Codes => Suite::Codes,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print G_N^(r)(q), or its value at a rational q.
    Galois {
        #[arg(value_name = "N")]
        n: usize,
        r: usize,
        /// Evaluate at this rational (e.g. 2 or -1/3).
        #[arg(long, value_name = "Q")]
        eval: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long = "N-max", value_name = "N")]
        n_max: Option<usize>,
        #[arg(long = "r-max", value_name = "R")]
        r_max: Option<usize>,
        /// Prime field size for the oracle suite, prime power for codes.
        #[arg(long)]
        q: Option<u64>,
        /// Cumulant order, or series order for the stanley suite.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Shape of the coefficient law of G_N^(r) along a list of N.
    Normality {
        #[arg(long)]
        r: u32,
        #[arg(long = "N", value_name = "N,..", value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Absolute accuracy of the normal CDF.
        #[arg(long, default_value_t = DEFAULT_CDF_PRECISION)]
        precision: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Full expansion of H_N^(r)(z, q) as JSON.
    RogersSzego {
        #[arg(value_name = "N")]
        n: u32,
        r: usize,
    },
    /// Joint descent/inversion counts of S_N as CSV.
    DescentTable {
        #[arg(value_name = "N")]
        n: usize,
    },
    /// Basic specialization of the affine sl_r Demazure character, as JSON.
    Demazure {
        #[arg(value_name = "N")]
        n: usize,
        r: usize,
    },
    /// Asymptotic counts of linear q-ary codes of length n, as JSON.
    Codes { n: usize, q: u64 },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    let mut out = String::new();
    let status = run(cli.command, &mut out);
    let mut stdout = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = stdout.write_all(out.as_bytes());
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut String) -> Result<(), Failure> {
    let limits = Limits::from_env();
    match command {
        Command::Galois { n, r, eval, format } => {
            let g = galois_number(n, r);
            let value = match eval {
                Some(s) => {
                    let q = parse_rational(&s).ok_or_else(|| Failure::Usage(format!("cannot parse {s:?} as a rational")))?;
                    Some(format_rational(&g.eval(&q)))
                }
                None => None,
            };
            match (format, value) {
                (Format::Json, Some(v)) => {
                    line(out, serde_json::json!({"N": n, "r": r, "value": v}).to_string())
                }
                (Format::Json, None) => {
                    line(out, serde_json::json!({"N": n, "r": r, "coefficients": g.to_json()}).to_string())
                }
                (Format::Csv, _) => return Err(Failure::Usage("galois supports text and json output".into())),
                (Format::Text, Some(v)) => line(out, v),
                (Format::Text, None) => line(out, g.to_string()),
            }
        }
        Command::Verify { suite, n_max, r_max, q, order, format } => {
            let suite = Suite::from(suite);
            let mut config = suite.default_config();
            config.n_max = n_max.unwrap_or(config.n_max);
            config.r_max = r_max.unwrap_or(config.r_max);
            config.q = q.unwrap_or(config.q);
            config.order = order.unwrap_or(config.order);
            let report = run_suite(suite, &config)?;
            match format {
                Format::Json => line(out, serde_json::to_string_pretty(&report).expect("report serializes")),
                Format::Csv => return Err(Failure::Usage("verify supports text and json output".into())),
                Format::Text => {
                    for check in report.failures() {
                        line(out, format!("FAIL {}: {}", check.name, check.detail.as_deref().unwrap_or("")));
                    }
                    let failed = report.failures().count();
                    line(
                        out,
                        format!(
                            "{} {}: {} checks, {} failed",
                            if report.passed { "PASS" } else { "FAIL" },
                            suite,
                            report.checks.len(),
                            failed
                        ),
                    );
                }
            }
            if !report.passed {
                return Err(Failure::Verification);
            }
        }
        Command::Normality { r, n, precision, format } => {
            if let Some(bad) = n.iter().find(|&&x| x < 2) {
                return Err(Failure::Usage(format!("N must be at least 2, got {bad}")));
            }
            if r < 1 {
                return Err(Failure::Usage("r must be positive".into()));
            }
            if !(precision > 0.0 && precision < 1.0) {
                return Err(Failure::Usage(format!("precision must lie in (0, 1), got {precision}")));
            }
            let rows = normality_sweep(r, &n, precision)?;
            match format {
                Format::Json => line(out, serde_json::to_string_pretty(&rows).expect("reports serialize")),
                Format::Csv => {
                    line(out, NormalityReport::CSV_HEADER.to_string());
                    for row in &rows {
                        line(out, row.csv_row());
                    }
                }
                Format::Text => {
                    line(out, format!("{:>4} {:>3} {:>14} {:>14}  {:<24} {:<24} {}", "N", "r", "mean", "variance", "skew_sq", "ex_kurtosis", "kolmogorov"));
                    for row in &rows {
                        line(
                            out,
                            format!(
                                "{:>4} {:>3} {:>14} {:>14}  {:<24} {:<24} {:.12}",
                                row.n,
                                row.r,
                                format_rational(&row.mean),
                                format_rational(&row.variance),
                                format_rational(&row.skewness_sq_signed),
                                format_rational(&row.excess_kurtosis),
                                row.kolmogorov_distance
                            ),
                        );
                    }
                }
            }
        }
        Command::RogersSzego { n, r } => {
            let h = rogers_szego_with_cap(n, r, limits.max_cells)?;
            line(out, h.to_json().to_string());
        }
        Command::DescentTable { n } => {
            out.push_str(&descent_inv_table_with_limits(n, &limits)?.to_csv());
        }
        Command::Demazure { n, r } => {
            line(out, demazure_basic_specialization(n, r)?.to_json().to_string());
        }
        Command::Codes { n, q } => {
            line(out, code_count_asymptotics(n, q)?.to_json().to_string());
        }
    }
    Ok(())
}

fn line(out: &mut String, s: String) {
    out.push_str(&s);
    out.push('\n');
}
