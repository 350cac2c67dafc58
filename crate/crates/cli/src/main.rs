use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qaffine::fock::Half;
use qaffine::rmatrix::build_rmatrix;
use qaffine_cli::{run, Format, Mode, OperatorCache, QValue, RunConfig, Suite};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "qaffine", version, about = "Verify the level-two free-field realization of U_q(sl2-hat)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Run(RunArgs),
    /// Print the spin-1 R-matrix entries, symbolically or at numeric q and z.
    Rmatrix(RmatrixArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Suites to run; repeat or separate with commas.
    #[arg(value_enum, value_delimiter = ',', num_args = 0..)]
    positional: Vec<Suite>,
    #[arg(long = "suite", value_enum, value_delimiter = ',')]
    suite: Vec<Suite>,
    #[arg(long, default_value = "6")]
    max_degree: Half,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long, default_value = "1/5")]
    q: QValue,
    #[arg(long, default_value_t = 8)]
    series_order: i64,
    #[arg(long, default_value_t = 12)]
    exchange_order: i64,
    #[arg(long, default_value_t = 2)]
    panel_degree: i64,
    #[arg(long, env = "QAFFINE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RmatrixArgs {
    /// Evaluate at this z instead of printing canonical strings.
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, default_value = "1/5")]
    q: QValue,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => run_command(a),
        Command::Rmatrix(a) => rmatrix_command(a),
    }
}

fn run_command(a: RunArgs) -> ExitCode {
    let mut suites = a.positional;
    suites.extend(a.suite);
    if suites.is_empty() {
        suites.push(Suite::All);
    }
    let config = RunConfig {
        suites,
        max_degree: a.max_degree,
        mode: a.mode,
        q: a.q,
        series_order: a.series_order,
        exchange_order: a.exchange_order,
        panel_degree: a.panel_degree,
        cache_dir: a.cache_dir,
        format: a.format,
        seed: a.seed,
    };
    let mut cache = OperatorCache::new(config.cache_dir.as_deref());
    let doc = match run(&config, &mut cache) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    for w in &cache.warnings {
        eprintln!("warning: {w}");
    }
    if config.cache_dir.is_some() {
        eprintln!("operator cache: {} hits, {} misses", cache.hits, cache.misses);
    }
    let text = match config.format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    };
    if let Err(code) = emit(&text, a.out.as_deref()) {
        return code;
    }
    let c = doc.summary;
    eprintln!("{} pass, {} fail, {} skipped in {:.2} s", c.pass, c.fail, c.skipped, doc.total_wall_time_s);
    ExitCode::from(doc.exit_code() as u8)
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), ExitCode> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(EXIT_IO)
        }),
    }
}

fn rmatrix_command(a: RmatrixArgs) -> ExitCode {
    let r = build_rmatrix();
    let text = match a.z {
        None => {
            let entries: Vec<_> = r.dump();
            match a.format {
                Format::Json => {
                    let rows: Vec<_> = entries
                        .iter()
                        .map(|(i, j, sym, x)| serde_json::json!({ "row": i, "col": j, "symbol": sym, "value": x }))
                        .collect();
                    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
                }
                Format::Text => entries.iter().map(|(i, j, sym, x)| format!("({i}, {j}) {sym} = {x}\n")).collect(),
            }
        }
        Some(z) => match r.eval(Complex64::new(a.q.to_f64(), 0.0), Complex64::new(z, 0.0)) {
            Err(e) => {
                eprintln!("error: R(z) is singular at q = {}, z = {z}: {e}", a.q);
                return ExitCode::from(EXIT_USAGE);
            }
            Ok(m) => {
                let rows: Vec<Vec<f64>> = (0..9).map(|i| (0..9).map(|j| m.get(i, j).re).collect()).collect();
                match a.format {
                    Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
                    Format::Text => rows
                        .iter()
                        .map(|row| row.iter().map(|x| format!("{x:>12.6}")).collect::<Vec<_>>().join(" ") + "\n")
                        .collect(),
                }
            }
        },
    };
    print!("{text}");
    ExitCode::SUCCESS
}
