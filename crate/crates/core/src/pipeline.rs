//! Stage commands over on-disk artifacts. The full pipeline runs the same stage functions
//! in sequence, so stage-by-stage and one-shot runs write identical files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{drainage_overlay, elevation_overlay, render_overlay, slope_overlay, OverlayKind};
use crate::category::Category;
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::model::{build_scene, write_scene, Mesh3D, SCENE_FILES};
use crate::raster::{enhance, load_plan, smooth};
use crate::segment::{mask_file_name, segment, CategoryMask};
use crate::vector::{assemble_scene, VectorScene};

pub const PREPROCESSED_FILE: &str = "preprocessed.png";
pub const SCENE_JSON: &str = "scene.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifacts: Vec<ManifestEntry>,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Loads, smooths, enhances and segments a plan. Writes `preprocessed.png` and one
/// `mask_<category>.png` per category; returns the written paths.
pub fn cmd_segment(plan_path: &Path, cfg: &PipelineConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let palette = cfg.palette()?;
    ensure_dir(out_dir)?;
    let plan = load_plan(plan_path, cfg.scale)?;
    let p = cfg.preprocess;
    let pre = enhance(&smooth(&plan, p.lambda)?, p.sharpen_amount, p.contrast_gain)?;
    let mut written = vec![out_dir.join(PREPROCESSED_FILE)];
    pre.save_png(&written[0])?;
    for mask in segment(&pre, &palette)? {
        let path = out_dir.join(mask_file_name(mask.category));
        mask.save_png(&path)?;
        written.push(path);
    }
    Ok(written)
}

/// Reads the eight masks from `masks_dir`.
pub fn load_masks(masks_dir: &Path) -> Result<Vec<CategoryMask>> {
    let missing: Vec<String> =
        Category::ALL.iter().map(|&c| mask_file_name(c)).filter(|f| !masks_dir.join(f).is_file()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingArtifacts { dir: masks_dir.to_path_buf(), expected: missing });
    }
    Category::ALL.iter().map(|&c| CategoryMask::load_png(c, &masks_dir.join(mask_file_name(c)))).collect()
}

/// Vectorizes the masks into `scene.json`.
pub fn cmd_vectorize(masks_dir: &Path, cfg: &PipelineConfig, out_dir: &Path) -> Result<PathBuf> {
    let masks = load_masks(masks_dir)?;
    let scene = assemble_scene(&masks, cfg.scale, &cfg.extract)?;
    crate::vector::validate_scene_value(
        &serde_json::to_value(&scene).map_err(|e| Error::Invariant(format!("scene serialization: {e}")))?,
    )
    .map_err(|e| Error::Invariant(format!("produced scene fails its schema: {e}")))?;
    ensure_dir(out_dir)?;
    let path = out_dir.join(SCENE_JSON);
    scene.save(&path)?;
    Ok(path)
}

/// Builds the 3D scene from a schema-checked `scene.json` and writes glTF and OBJ files.
pub fn cmd_build(scene_json: &Path, cfg: &PipelineConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let scene = VectorScene::load(scene_json)?;
    let built = build_scene(&scene, &cfg.build)?;
    ensure_dir(out_dir)?;
    write_scene(&built, out_dir)?;
    Ok(SCENE_FILES.iter().map(|f| out_dir.join(f)).collect())
}

/// Files `cmd_analyze` expects in the scene directory.
pub const ANALYZE_INPUTS: [&str; 3] = [SCENE_JSON, "scene.gltf", "scene.bin"];

/// Rebuilds the terrain from the persisted scene (same seed) and writes the elevation,
/// slope and drainage overlays with their legends.
pub fn cmd_analyze(scene_dir: &Path, cfg: &PipelineConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let missing: Vec<String> =
        ANALYZE_INPUTS.iter().filter(|f| !scene_dir.join(f).is_file()).map(|f| f.to_string()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingArtifacts { dir: scene_dir.to_path_buf(), expected: missing });
    }
    let scene = VectorScene::load(&scene_dir.join(SCENE_JSON))?;
    let built = build_scene(&scene, &cfg.build)?;
    let extent = (Point(0.0, -(scene.height as f64) * scene.scale), Point(scene.width as f64 * scene.scale, 0.0));
    let meshes: Vec<&Mesh3D> = built.terrain.iter().map(|f| &f.mesh).collect();
    ensure_dir(out_dir)?;
    let mut written = Vec::new();
    for kind in OverlayKind::ALL {
        let overlay = match kind {
            OverlayKind::Elevation => elevation_overlay(&built.terrain),
            OverlayKind::Slope => slope_overlay(&meshes),
            OverlayKind::Drainage => drainage_overlay(&built.terrain),
        }
        .with_bounds(extent.0, extent.1);
        let png = out_dir.join(format!("{}.png", kind.file_stem()));
        render_overlay(&overlay, &png, cfg.analysis.px_per_meter)?;
        written.push(png.clone());
        written.push(png.with_extension("json"));
    }
    Ok(written)
}

pub fn sha256_file(path: &Path) -> Result<(String, u64)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok((hex::encode(Sha256::digest(&bytes)), bytes.len() as u64))
}

/// Hash entries for the given artifacts, sorted by file name.
pub fn build_manifest(paths: &[PathBuf]) -> Result<Manifest> {
    let mut artifacts = paths
        .iter()
        .map(|p| {
            let (sha256, bytes) = sha256_file(p)?;
            Ok(ManifestEntry { file: file_name(p), sha256, bytes })
        })
        .collect::<Result<Vec<_>>>()?;
    artifacts.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(Manifest { artifacts })
}

/// Runs segment, vectorize, build and analyze into `out_dir` and writes `manifest.json`.
/// A failure is reported with the name of the stage that raised it.
pub fn cmd_pipeline(plan_path: &Path, cfg: &PipelineConfig, out_dir: &Path) -> Result<Manifest> {
    let mut written = cmd_segment(plan_path, cfg, out_dir).map_err(|e| e.in_stage("segment"))?;
    let scene = cmd_vectorize(out_dir, cfg, out_dir).map_err(|e| e.in_stage("vectorize"))?;
    written.push(scene.clone());
    written.extend(cmd_build(&scene, cfg, out_dir).map_err(|e| e.in_stage("build"))?);
    written.extend(cmd_analyze(out_dir, cfg, out_dir).map_err(|e| e.in_stage("analyze"))?);
    let manifest = build_manifest(&written).map_err(|e| e.in_stage("manifest"))?;
    let path = out_dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Invariant(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e).in_stage("manifest"))?;
    Ok(manifest)
}
