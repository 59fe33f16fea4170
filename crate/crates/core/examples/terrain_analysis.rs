//! Builds a mound with a pond and renders elevation, slope and drainage overlays.
//!
//! cargo run --example terrain_analysis -- [out_dir]

use std::path::PathBuf;

use parkforge::analysis::{drainage_overlay, elevation_overlay, render_overlay, slope_overlay, OverlayKind};
use parkforge::geom::Point;
use parkforge::model::{build_scene, BuildConfig};
use parkforge::segment::segment;
use parkforge::synth::{PlanBuilder, Shape};
use parkforge::vector::{assemble_scene, ExtractParams};
use parkforge::{Category, Palette};

fn main() -> parkforge::Result<()> {
    let out =
        std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "target/examples-out/terrain_analysis".into());
    std::fs::create_dir_all(&out).map_err(|e| parkforge::Error::Io { path: out.clone(), source: e })?;

    let scale = 0.5;
    let plan = PlanBuilder::new(160, 120)
        .with(Category::GreenSpace, Shape::blob(Point(80.0, 60.0), 52.0, 0.15, 3, 0.4))
        .with(Category::Water, Shape::ellipse(100.0, 55.0, 16.0, 11.0))
        .rasterize(scale)?;
    let scene = assemble_scene(&segment(&plan, &Palette::default())?, scale, &ExtractParams::default())?;
    let cfg = BuildConfig { terrain_amplitude: 4.0, seed: 3, ..Default::default() };
    let built = build_scene(&scene, &cfg)?;
    let meshes: Vec<_> = built.terrain.iter().map(|f| &f.mesh).collect();
    let extent = (Point(0.0, -60.0), Point(80.0, 0.0));

    for kind in OverlayKind::ALL {
        let overlay = match kind {
            OverlayKind::Elevation => elevation_overlay(&built.terrain),
            OverlayKind::Slope => slope_overlay(&meshes),
            OverlayKind::Drainage => drainage_overlay(&built.terrain),
        }
        .with_bounds(extent.0, extent.1);
        let png = out.join(format!("{}.png", kind.file_stem()));
        let legend = render_overlay(&overlay, &png, 8.0)?;
        println!("{:<10} faces {:>5}  range {:?}", kind.as_str(), overlay.len(), overlay.value_range());
        for (entry, count) in legend.legend.iter().zip(&legend.stats.bin_counts) {
            println!("    {:<24} {count}", entry.label);
        }
    }
    println!("overlays written to {}", out.display());
    Ok(())
}
