use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use glimm_core::config::{parse_config, Mode, RunConfig};
use glimm_core::output::write_run;
use glimm_core::probe::execute;
use glimm_core::run::run;
use glimm_core::{GlimmError, Result};

#[derive(Parser)]
#[command(
    name = "glimm",
    version,
    about = "Random choice solver for steady supersonic reacting flow"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(clap::Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// March a cauchy or wedge configuration and write its tables.
    Run {
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long, default_value = "out")]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Solve one Riemann problem and print the fan as JSON.
    ProbeRiemann {
        #[command(flatten)]
        common: Common,
    },
    /// Apply one reaction step and print the result as JSON.
    ProbeReact {
        #[command(flatten)]
        common: Common,
    },
    /// Measure interaction and reflection coefficients.
    Survey {
        #[command(flatten)]
        common: Common,
    },
}

fn emit(value: &impl serde::Serialize) {
    // A closed pipe downstream is not an error of the run.
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(value).expect("json")
    );
}

fn load(common: &Common, allowed: &[Mode]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| GlimmError::Io(format!("{}: {e}", common.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if !allowed.contains(&cfg.mode) {
        let names: Vec<String> = allowed
            .iter()
            .map(|m| serde_json::to_string(m).unwrap())
            .collect();
        return Err(GlimmError::config(
            "mode",
            format!("this subcommand accepts {}", names.join(" or ")),
        ));
    }
    Ok(cfg)
}

fn do_run(common: &Common, output: &Path) -> Result<()> {
    let mut cfg = load(common, &[Mode::Cauchy, Mode::WedgeSmall, Mode::WedgeStrong])?;
    let (scheme, opts) = cfg.build()?;
    let result = run(&scheme, &opts)?;
    let files = write_run(output, &cfg, &result)?;
    let s = &result.summary;
    let report = json!({
        "strips": s.strips,
        "f0": s.f0,
        "f_max": s.f_max,
        "worst_increase": s.worst_increase,
        "growth_constant": s.growth_constant,
        "wall_time_s": s.wall_time_s,
        "files": files,
    });
    emit(&report);
    Ok(())
}

fn do_probe(common: &Common, allowed: &[Mode]) -> Result<()> {
    let cfg = load(common, allowed)?;
    let out = execute(&cfg)?;
    emit(&out);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Run {
            common,
            output,
            format: Format::Csv,
        } => do_run(common, output),
        Cmd::ProbeRiemann { common } => do_probe(common, &[Mode::RiemannProbe]),
        Cmd::ProbeReact { common } => do_probe(common, &[Mode::ReactProbe]),
        Cmd::Survey { common } => do_probe(common, &[Mode::Survey]),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e.exit_code() {
                2 => "config",
                1 => "io",
                _ => "numerical",
            };
            eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
