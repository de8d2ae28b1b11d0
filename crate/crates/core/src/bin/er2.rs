use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use er2_core::bss::{self, BssCaps, BssSpace};
use er2_core::fgl::{self, Convention};
use er2_core::obstruct::{self, ObstructCaps, ObstructError, ReportFormat};

/// Cap overrides, e.g. `alpha=40,max_power=128`. Explicit flags win.
const CAPS_ENV: &str = "ER2_CAPS";

#[derive(Parser)]
#[command(name = "er2", version, about = "E(2)/ER(2) computations for projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Non-immersion query for RP^{2n} in R^{2k+1}.
    Check {
        #[arg(long, conflicts_with_all = ["n", "k"])]
        m: Option<u64>,
        #[arg(long, requires = "k")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        k: Option<u64>,
        #[arg(long = "L")]
        l: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        alpha_cap: Option<u32>,
        #[arg(long, env = CAPS_ENV, default_value = "")]
        caps: String,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bockstein spectral sequence pages (CSV) or the erratum report (JSON).
    Bss {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long = "K", required_if_eq("space", "rp-odd"))]
        big_k: Option<u32>,
        #[arg(long)]
        page: Option<u32>,
        /// Emit the comparison against the printed tables instead of pages.
        #[arg(long)]
        erratum: bool,
        /// Use the repaired d^7 on the top class.
        #[arg(long)]
        repair: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of the 2-typical formal group law (CSV).
    Fgl {
        #[arg(long, value_enum, default_value_t = Conv::Araki)]
        convention: Conv,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Point,
    RpInfty,
    RpOdd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Araki,
    Hazewinkel,
}

enum Failure {
    Refused(String),
    Error(String),
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Error(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Error(e.to_string())),
    }
}

fn obstruct_failure(e: ObstructError) -> Failure {
    if e.is_refusal() {
        Failure::Refused(e.to_string())
    } else {
        Failure::Error(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check {
            m,
            n,
            k,
            l,
            format,
            alpha_cap,
            caps,
            timings,
            out,
        } => {
            let params = match (m, n, k) {
                (Some(m), _, _) => obstruct::derive_parameters(m).map_err(obstruct_failure)?,
                (None, Some(n), Some(k)) => obstruct::explicit_parameters(n, k),
                _ => return Err(Failure::Error("give --m or both --n and --k".into())),
            };
            let mut caps = ObstructCaps::default().with_overrides(&caps).map_err(obstruct_failure)?;
            if let Some(a) = alpha_cap {
                caps.alpha = a;
            }
            let mut report = obstruct::run_query(&params, l, &caps).map_err(obstruct_failure)?;
            if !timings {
                report = report.without_wallclock();
            }
            let format = match format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
                Format::Text => ReportFormat::Text,
            };
            emit(&out, &report.render(format))
        }
        Command::Bss {
            space,
            big_k,
            page,
            erratum,
            repair,
            out,
        } => {
            let space = match space {
                Space::Point => BssSpace::Point,
                Space::RpInfty => BssSpace::RPInfty,
                Space::RpOdd => BssSpace::RPOdd {
                    k: big_k.expect("clap enforces --K"),
                },
            };
            let caps = BssCaps::default();
            let err = |e: bss::BssError| Failure::Error(e.to_string());
            let text = if erratum {
                bss::erratum_report(space, caps).map_err(err)?.to_json()
            } else {
                let ss = bss::compute(space, caps, repair).map_err(err)?;
                if let Some(r) = page {
                    ss.page(r).map_err(err)?;
                }
                ss.pages_csv(page)
            };
            emit(&out, &text)
        }
        Command::Fgl { convention, depth, out } => {
            let conv = match convention {
                Conv::Araki => Convention::Araki,
                Conv::Hazewinkel => Convention::Hazewinkel,
            };
            let f = fgl::standard_fgl(conv, depth).map_err(|e| Failure::Error(e.to_string()))?;
            let text = fgl::coefficients_csv(&f).map_err(|e| Failure::Error(e.to_string()))?;
            emit(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
