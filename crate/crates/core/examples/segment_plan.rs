//! Preprocesses the sample park plan and splits it into category masks.
//!
//! cargo run --example segment_plan -- [out_dir]

use std::path::PathBuf;

use parkforge::raster::{enhance, smooth};
use parkforge::segment::{mask_file_name, segment};
use parkforge::synth::sample_park;
use parkforge::PipelineConfig;

fn main() -> parkforge::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "target/examples-out/segment_plan".into());
    std::fs::create_dir_all(&out).map_err(|e| parkforge::Error::Io { path: out.clone(), source: e })?;
    let cfg = PipelineConfig::default();

    let plan = sample_park().rasterize(cfg.scale)?;
    plan.save_png(&out.join("plan.png"))?;
    let p = cfg.preprocess;
    let pre = enhance(&smooth(&plan, p.lambda)?, p.sharpen_amount, p.contrast_gain)?;
    pre.save_png(&out.join("preprocessed.png"))?;

    let total = (plan.width() * plan.height()) as f64;
    for mask in segment(&pre, &cfg.palette()?)? {
        println!(
            "{:<12} {:>6} px  {:>5.1}%",
            mask.category.to_string(),
            mask.count(),
            100.0 * mask.count() as f64 / total
        );
        mask.save_png(&out.join(mask_file_name(mask.category)))?;
    }
    println!("masks written to {}", out.display());
    Ok(())
}
