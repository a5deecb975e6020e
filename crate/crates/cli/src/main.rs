//! Command-line surface for exact digital-net dispersion analysis.
//!
//! Subcommands: gen, hammersley, fibonacci, disp, verify,
//! enumerate-theorem3, discrepancy, svg. Outputs are deterministic: repeated
//! runs with the same inputs are byte-identical. Exit codes: 0 success,
//! 1 verification failure, 2 usage or input error.

mod source;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dispnet::discrepancy::{
    extreme_discrepancy_capped, l2_star_discrepancy_squared, star_discrepancy, DiscrepancyReport,
};
use dispnet::empty_box::{
    column_gap_dispersion, dispersion_bruteforce_capped, largest_empty_box, DispersionResult,
};
use dispnet::net::fibonacci_lattice;
use dispnet::rational::{format_rational, rat_int, to_decimal_string};
use dispnet::Rational;

use source::{load_points, MRange};
use verify::{rows_to_csv, rows_to_json, run_suite, Suite};

/// Errors with their exit semantics.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs, domain violations: exit 2.
    Usage(String),
    /// At least one verification row failed: exit 1.
    Verification(usize),
}

impl CliError {
    fn usage(msg: String) -> Self {
        CliError::Usage(msg)
    }
}

impl From<dispnet::Error> for CliError {
    fn from(e: dispnet::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "dispnet", version, about = "Exact dispersion analysis of digital nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a digital net from generator matrices (J, C2) as JSON
    Gen {
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Net size parameter (the set has base^m points)
        #[arg(long)]
        m: String,
        /// Second generator: identity | U | L | file:PATH
        #[arg(long, default_value = "identity")]
        c2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the Hammersley point set (any base >= 2) as JSON
    Hammersley {
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long)]
        m: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the Fibonacci lattice with N points (N a Fibonacci number)
    Fibonacci {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the exact dispersion (largest empty box) of a point set
    Disp {
        /// Point-set JSON file; alternative to --base/--m/--c2
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        c2: Option<String>,
        /// sweep | brute | column
        #[arg(long, default_value = "sweep")]
        algo: String,
        /// json | csv
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exits 1 if any row fails
    Verify {
        /// hammersley | pu | pl | badic | nut-exhaustive | fibonacci | bounds-all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        base: Option<u32>,
        /// Single value or inclusive range a..b
        #[arg(long)]
        m: Option<String>,
        /// Fibonacci point-count range (fibonacci suite only)
        #[arg(long)]
        n: Option<String>,
        /// json | csv
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the 1024-case dyadic NUT coefficient check and emit the table
    #[command(name = "enumerate-theorem3")]
    EnumerateTheorem3 {
        /// json | csv
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact star / L2 / extreme discrepancy of a point set
    Discrepancy {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        c2: Option<String>,
        /// star | l2 | extreme | all
        #[arg(long, default_value = "all")]
        kind: String,
        /// Also report values divided by N (N^2 for the squared L2)
        #[arg(long)]
        normalized: bool,
        /// Point cap for the extreme-discrepancy search
        #[arg(long, default_value_t = dispnet::discrepancy::EXTREME_CAP)]
        cap: usize,
        /// json | csv
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a point set (optionally with its dispersion witness box) as SVG
    Svg {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        c2: Option<String>,
        /// Outline the largest empty box
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn check_format(format: &str) -> Result<bool, CliError> {
    match format {
        "json" => Ok(true),
        "csv" => Ok(false),
        _ => Err(CliError::usage(format!("--format must be json or csv (got {format:?})"))),
    }
}

fn dispersion_csv(result: &DispersionResult) -> String {
    let algo = match result.algorithm {
        dispnet::empty_box::Algorithm::Sweep => "sweep",
        dispnet::empty_box::Algorithm::Brute => "brute",
        dispnet::empty_box::Algorithm::ColumnGap => "column",
    };
    let w = &result.witness;
    format!(
        "algorithm,area,area_decimal,x_lo,x_hi,y_lo,y_hi\n{},{},{},{},{},{},{}\n",
        algo,
        format_rational(&result.area),
        to_decimal_string(&result.area, 12),
        format_rational(&w.x_lo),
        format_rational(&w.x_hi),
        format_rational(&w.y_lo),
        format_rational(&w.y_hi),
    )
}

fn normalizer(kind: &dispnet::discrepancy::DiscrepancyKind, n: u64) -> Rational {
    match kind {
        // The squared L2 value normalizes by N^2.
        dispnet::discrepancy::DiscrepancyKind::L2Squared => rat_int(n) * rat_int(n),
        _ => rat_int(n),
    }
}

fn discrepancy_output(
    reports: &[DiscrepancyReport],
    n: u64,
    normalized: bool,
    json: bool,
) -> String {
    if json {
        let mut items = Vec::new();
        for r in reports {
            let mut value = serde_json::to_value(r).expect("report serializes");
            if normalized {
                let norm = &r.value / normalizer(&r.kind, n);
                value["normalized"] = serde_json::Value::String(format_rational(&norm));
            }
            items.push(value);
        }
        serde_json::to_string_pretty(&serde_json::json!({ "n": n, "reports": items }))
            .expect("reports serialize")
    } else {
        let mut out = String::from(if normalized {
            "kind,value,value_decimal,normalized,normalized_decimal\n"
        } else {
            "kind,value,value_decimal\n"
        });
        for r in reports {
            let kind = match r.kind {
                dispnet::discrepancy::DiscrepancyKind::Star => "star",
                dispnet::discrepancy::DiscrepancyKind::L2Squared => "l2_squared",
                dispnet::discrepancy::DiscrepancyKind::Extreme => "extreme",
            };
            out.push_str(&format!(
                "{kind},{},{}",
                format_rational(&r.value),
                to_decimal_string(&r.value, 12)
            ));
            if normalized {
                let norm = &r.value / normalizer(&r.kind, n);
                out.push_str(&format!(
                    ",{},{}",
                    format_rational(&norm),
                    to_decimal_string(&norm, 12)
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { base, m, c2, out } => {
            let m = MRange::parse(&m)?.single("--m")?;
            let c2 = source::C2Spec::parse(&c2)?;
            let set = source::build_net(base, m, &c2)?;
            write_output(out.as_ref(), &(set.to_json_string() + "\n"))
        }
        Command::Hammersley { base, m, out } => {
            let m = MRange::parse(&m)?.single("--m")?;
            let set = dispnet::net::hammersley(base, m as u32)?;
            write_output(out.as_ref(), &(set.to_json_string() + "\n"))
        }
        Command::Fibonacci { n, out } => {
            let set = fibonacci_lattice(n)?;
            write_output(out.as_ref(), &(set.to_json_string() + "\n"))
        }
        Command::Disp { input, base, m, c2, algo, format, out } => {
            let json = check_format(&format)?;
            let set = load_points(input.as_ref(), base, m.as_deref(), c2.as_deref())?;
            let result = match algo.as_str() {
                "sweep" => largest_empty_box(&set)?,
                "brute" => dispersion_bruteforce_capped(&set, usize::MAX)?,
                "column" => column_gap_dispersion(&set)?,
                _ => {
                    return Err(CliError::usage(format!(
                        "--algo must be sweep, brute or column (got {algo:?})"
                    )))
                }
            };
            let content = if json {
                serde_json::to_string_pretty(&result).expect("result serializes") + "\n"
            } else {
                dispersion_csv(&result)
            };
            write_output(out.as_ref(), &content)
        }
        Command::Verify { suite, base, m, n, format, out } => {
            let json = check_format(&format)?;
            let suite = Suite::parse(&suite)?;
            let m = m.as_deref().map(MRange::parse).transpose()?;
            let n = n.as_deref().map(MRange::parse).transpose()?;
            let rows = run_suite(suite, base, m, n)?;
            let content = if json { rows_to_json(&rows) + "\n" } else { rows_to_csv(&rows) };
            write_output(out.as_ref(), &content)?;
            let failures = rows.iter().filter(|r| !r.verdict).count();
            if failures > 0 {
                Err(CliError::Verification(failures))
            } else {
                Ok(())
            }
        }
        Command::EnumerateTheorem3 { format, out } => {
            let json = check_format(&format)?;
            let summary = dispnet::theorem3::enumerate_theorem3()?;
            let content = if json {
                let items: Vec<serde_json::Value> = summary
                    .cases
                    .iter()
                    .map(|rec| {
                        serde_json::json!({
                            "case": rec.coeffs.index(),
                            "bits": rec.coeffs.bits().to_vec(),
                            "witness": rec.witness.as_ref().map(|wt| serde_json::json!({
                                "n_start": wt.n_start,
                                "w": wt.w,
                                "gap": format_rational(&wt.gap),
                                "implied_area_scaled": format_rational(&wt.implied_area_scaled),
                            })),
                            "net_dispersion": format_rational(&rec.net_dispersion),
                        })
                    })
                    .collect();
                serde_json::to_string_pretty(&items).expect("summary serializes") + "\n"
            } else {
                summary.to_csv_string()
            };
            write_output(out.as_ref(), &content)
        }
        Command::Discrepancy { input, base, m, c2, kind, normalized, cap, format, out } => {
            let json = check_format(&format)?;
            let set = load_points(input.as_ref(), base, m.as_deref(), c2.as_deref())?;
            let n = set.len() as u64;
            let mut reports = Vec::new();
            match kind.as_str() {
                "star" => reports.push(star_discrepancy(&set)?),
                "l2" => reports.push(l2_star_discrepancy_squared(&set)?),
                "extreme" => reports.push(extreme_discrepancy_capped(&set, cap)?),
                "all" => {
                    reports.push(star_discrepancy(&set)?);
                    reports.push(l2_star_discrepancy_squared(&set)?);
                    if set.len() <= cap {
                        reports.push(extreme_discrepancy_capped(&set, cap)?);
                    } else {
                        eprintln!(
                            "note: skipping extreme discrepancy ({} points exceed the cap {cap})",
                            set.len()
                        );
                    }
                }
                _ => {
                    return Err(CliError::usage(format!(
                        "--kind must be star, l2, extreme or all (got {kind:?})"
                    )))
                }
            }
            write_output(out.as_ref(), &discrepancy_output(&reports, n, normalized, json))
        }
        Command::Svg { input, base, m, c2, witness, out } => {
            let set = load_points(input.as_ref(), base, m.as_deref(), c2.as_deref())?;
            let bx = if witness {
                Some(largest_empty_box(&set)?.witness)
            } else {
                None
            };
            write_output(out.as_ref(), &svg::render_svg(&set, bx.as_ref()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(failures)) => {
            eprintln!("verification failed: {failures} failing row(s)");
            ExitCode::from(1)
        }
    }
}
