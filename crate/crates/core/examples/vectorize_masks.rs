//! Vectorizes the sample park: building rectangles, smoothed region outlines, road
//! centerlines and planting points.
//!
//! cargo run --example vectorize_masks -- [scene.json]

use std::path::PathBuf;

use parkforge::geom::polygon_area;
use parkforge::segment::segment;
use parkforge::synth::sample_park;
use parkforge::vector::assemble_scene;
use parkforge::PipelineConfig;

fn main() -> parkforge::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "target/examples-out/scene.json".into());
    let cfg = PipelineConfig::default();
    let plan = sample_park().rasterize(cfg.scale)?;
    let masks = segment(&plan, &cfg.palette()?)?;
    let scene = assemble_scene(&masks, cfg.scale, &cfg.extract)?;

    for (i, b) in scene.buildings.iter().enumerate() {
        let c = b.corners;
        println!(
            "building {i}: {:.1} px^2, rotated={}, corners {:?}",
            polygon_area(&c),
            b.rotated,
            c.map(|p| (p.0.round(), p.1.round()))
        );
    }
    for r in &scene.regions {
        println!(
            "{:<12} {:>6} px  {:>3} vertices  {:>3} samples",
            r.category.to_string(),
            r.area_px,
            r.polygon.len(),
            r.smooth_samples.len()
        );
    }
    for cl in &scene.centerlines {
        let pts: usize = cl.paths.iter().map(Vec::len).sum();
        println!("{:<12} {} paths, {pts} points", cl.category.to_string(), cl.paths.len());
    }
    println!("plantings: {} single trees, {} clusters", scene.plantings.singles.len(), scene.plantings.clusters.len());

    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir).map_err(|e| parkforge::Error::Io { path: dir.into(), source: e })?;
    }
    scene.save(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}
