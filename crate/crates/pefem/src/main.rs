use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pefem::config::ExperimentConfig;
use pefem::threads::Threaded;
use pefem::{meshio, output, run_experiment};
use pefem_core::analyze::{patch_test, Domain};
use pefem_core::mesh::validate;
use pefem_core::pefem::Method;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pefem", version, about = "Polynomial extension finite elements on curved 2D domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a refinement study and write CSV, markdown and log-log files.
    Run(RunArgs),
    /// Check that a random degree-k polynomial is reproduced.
    Patch {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        domain: Domain,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Write a generated mesh in the pefem-mesh v1 format.
    Mesh {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    domain: Option<Domain>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    deterministic: bool,
}

fn run(args: RunArgs, exec: &Threaded) -> anyhow::Result<bool> {
    let mut cfg = ExperimentConfig::load(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    if let Some(d) = args.domain {
        cfg.set("domain", d.tag())?;
    }
    if let Some(m) = args.method {
        cfg.method = m;
    }
    if let Some(k) = args.k {
        cfg.degree = k;
    }
    if let Some(n) = args.levels {
        cfg.levels = n;
    }
    if let Some(out) = args.out {
        cfg.out = out;
    }
    cfg.deterministic |= args.deterministic;

    let report = run_experiment(&cfg, exec)?;
    let files = output::emit(&report, &cfg.out, &cfg.stem())?;
    print!("{}", output::markdown(&report)?);
    log::info!("wrote {}, {}, {}", files.csv.display(), files.markdown.display(), files.loglog.display());
    Ok(report.gate().passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let exec = match Threaded::from_env() {
        Ok(e) => e.install(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::Run(args) => run(args, &exec),
        Command::Patch { k, method, domain, seed, level } => (|| {
            let mesh = domain.mesh(level)?;
            let out = patch_test(&mesh, &domain.geometry(), method, k, seed, &exec)?;
            let verdict = if out.passed { "PASS" } else { "FAIL" };
            println!("{verdict}: {domain} {method} k={k} seed={seed}: relative H1 error {:.3e}", out.relative());
            Ok(out.passed)
        })(),
        Command::Mesh { domain, level, out } => (|| {
            let mesh = domain.mesh(level)?;
            let report = validate(&mesh, Some(&domain.geometry()));
            anyhow::ensure!(report.is_valid(), "generated mesh is invalid: {:?}", report.violations);
            meshio::save_mesh(&mesh, &out)?;
            println!(
                "{}: {} vertices, {} triangles, h = {:.6}",
                out.display(),
                mesh.vertices().len(),
                mesh.triangles().len(),
                mesh.h()
            );
            Ok(true)
        })(),
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
