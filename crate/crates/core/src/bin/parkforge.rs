use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use parkforge::config::{default_config_toml, PipelineConfig, OUT_ENV};
use parkforge::pipeline;

#[derive(Parser)]
#[command(name = "parkforge", version, about = "Park plan to 3D scene and terrain analysis")]
struct Cli {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (falls back to $PARKFORGE_OUT, then io.out_dir, then ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides build.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess a plan image and write one mask per category.
    Segment { plan: PathBuf },
    /// Vectorize a directory of masks into scene.json.
    Vectorize { masks_dir: PathBuf },
    /// Generate scene.gltf/.bin/.obj/.mtl from scene.json.
    Build { scene_json: PathBuf },
    /// Render elevation, slope and drainage overlays for a built scene directory.
    Analyze { scene_dir: PathBuf },
    /// Run every stage and write manifest.json.
    Pipeline { plan: PathBuf },
    /// Print the default configuration, or write it to a file.
    ConfigInit { path: Option<PathBuf> },
}

fn run(cli: Cli) -> parkforge::Result<()> {
    if let Command::ConfigInit { path } = &cli.command {
        let text = default_config_toml();
        return match path {
            Some(p) => std::fs::write(p, text).map_err(|e| parkforge::Error::Io { path: p.clone(), source: e }),
            None => {
                print!("{text}");
                Ok(())
            }
        };
    }
    let mut cfg = PipelineConfig::load_or_default(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.build.seed = seed;
    }
    let out = cfg.resolve_out_dir(cli.out.as_deref());
    log::info!("writing to {} ({OUT_ENV} and --out override io.out_dir)", out.display());
    let report = |paths: &[PathBuf]| paths.iter().for_each(|p| println!("{}", p.display()));
    match &cli.command {
        Command::Segment { plan } => report(&pipeline::cmd_segment(plan, &cfg, &out)?),
        Command::Vectorize { masks_dir } => report(&[pipeline::cmd_vectorize(masks_dir, &cfg, &out)?]),
        Command::Build { scene_json } => report(&pipeline::cmd_build(scene_json, &cfg, &out)?),
        Command::Analyze { scene_dir } => report(&pipeline::cmd_analyze(scene_dir, &cfg, &out)?),
        Command::Pipeline { plan } => {
            let manifest = pipeline::cmd_pipeline(plan, &cfg, &out)?;
            for a in &manifest.artifacts {
                println!("{}  {}", a.sha256, Path::new(&out).join(&a.file).display());
            }
        }
        Command::ConfigInit { .. } => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
