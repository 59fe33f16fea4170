//! Runs every stage on the bundled sample park and prints the artifact manifest.
//!
//! cargo run --example full_pipeline -- [out_dir] [seed]

use std::path::PathBuf;
use std::time::Instant;

use parkforge::pipeline::cmd_pipeline;
use parkforge::synth::sample_park;
use parkforge::PipelineConfig;

fn main() -> parkforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("target/examples-out/full_pipeline"));
    let mut cfg = PipelineConfig::default();
    if let Some(seed) = args.next() {
        cfg.build.seed = seed.parse().expect("seed must be an integer");
    }
    std::fs::create_dir_all(&out).map_err(|e| parkforge::Error::Io { path: out.clone(), source: e })?;
    let plan_path = out.join("plan.png");
    sample_park().rasterize(cfg.scale)?.save_png(&plan_path)?;

    let start = Instant::now();
    let manifest = cmd_pipeline(&plan_path, &cfg, &out)?;
    println!(
        "pipeline finished in {:.2?}, {} artifacts in {}",
        start.elapsed(),
        manifest.artifacts.len(),
        out.display()
    );
    for a in &manifest.artifacts {
        println!("  {:<26} {:>9} B  {}", a.file, a.bytes, &a.sha256[..16]);
    }
    Ok(())
}
