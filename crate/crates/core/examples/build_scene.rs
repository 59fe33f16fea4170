//! Builds the 3D park from a vector scene and exports glTF and OBJ.
//! Two seeds give different building heights and tree positions over the same layout.
//!
//! cargo run --example build_scene -- [out_dir] [seed]

use std::path::PathBuf;

use parkforge::model::{assemble_and_export, BuildConfig};
use parkforge::segment::segment;
use parkforge::synth::sample_park;
use parkforge::vector::assemble_scene;
use parkforge::{Category, PipelineConfig};

fn main() -> parkforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| "target/examples-out/build_scene".into());
    let seed = args.next().map(|s| s.parse().expect("seed must be an integer")).unwrap_or(7);
    std::fs::create_dir_all(&out).map_err(|e| parkforge::Error::Io { path: out.clone(), source: e })?;

    let cfg = PipelineConfig::default();
    let plan = sample_park().rasterize(cfg.scale)?;
    let scene = assemble_scene(&segment(&plan, &cfg.palette()?)?, cfg.scale, &cfg.extract)?;
    let build = BuildConfig { seed, ..cfg.build };
    let built = assemble_and_export(&scene, &build, &out)?;

    for e in &built.elements {
        let (lo, hi) = e.mesh.bounds().expect("exported meshes are non-empty");
        println!(
            "{:<16} {:>6} tris  area {:>8.1} m^2  z {:>6.2}..{:<6.2}",
            e.name,
            e.mesh.triangles.len(),
            e.mesh.surface_area(),
            lo[2],
            hi[2]
        );
    }
    let heights: Vec<String> =
        built.meshes_of(Category::Building).map(|m| format!("{:.2}", m.bounds().map_or(0.0, |b| b.1[2]))).collect();
    println!("seed {seed}: building heights [{}] m", heights.join(", "));
    println!("scene written to {}", out.display());
    Ok(())
}
