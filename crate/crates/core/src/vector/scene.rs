//! The vector scene: per-category extraction and its JSON form.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::segment::CategoryMask;
use crate::vector::contour::trace_contours;
use crate::vector::planting::{extract_plantings, PlantingPlan};
use crate::vector::rect::{fit_building, BuildingFootprint};
use crate::vector::region::{extract_regions, RegionOutline, RegionParams};
use crate::vector::skeleton::{extract_centerlines, Centerline, CenterlineParams};

/// JSON schema every `scene.json` must satisfy.
pub const SCENE_SCHEMA: &str = include_str!("../../schema/scene.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorScene {
    pub width: u32,
    pub height: u32,
    pub scale: f64,
    pub buildings: Vec<BuildingFootprint>,
    pub regions: Vec<RegionOutline>,
    pub centerlines: Vec<Centerline>,
    pub plantings: PlantingPlan,
}

/// Extraction thresholds, all in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractParams {
    pub min_area: f64,
    pub epsilon: f64,
    pub sample_step: f64,
    pub blur_sigma: f64,
    pub prune_len: f64,
    pub stride: usize,
    pub planting_interval: f64,
    pub morph_kernel: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        ExtractParams {
            min_area: 50.0,
            epsilon: 2.0,
            sample_step: 4.0,
            blur_sigma: 1.0,
            prune_len: 10.0,
            stride: 3,
            planting_interval: 10.0,
            morph_kernel: 3,
        }
    }
}

impl ExtractParams {
    pub fn region(&self) -> RegionParams {
        RegionParams {
            min_area: self.min_area,
            epsilon: self.epsilon,
            sample_step: self.sample_step,
            kernel: self.morph_kernel,
        }
    }

    pub fn centerline(&self) -> CenterlineParams {
        CenterlineParams { blur_sigma: self.blur_sigma, prune_len: self.prune_len, stride: self.stride }
    }
}

impl VectorScene {
    pub fn empty(width: u32, height: u32, scale: f64) -> Self {
        VectorScene {
            width,
            height,
            scale,
            buildings: Vec::new(),
            regions: Vec::new(),
            centerlines: Vec::new(),
            plantings: PlantingPlan::default(),
        }
    }

    pub fn regions_of(&self, category: Category) -> impl Iterator<Item = &RegionOutline> {
        self.regions.iter().filter(move |r| r.category == category)
    }

    /// Every coordinate in the scene, for bounds checks.
    pub fn all_points(&self) -> Vec<crate::geom::Point> {
        let mut pts = Vec::new();
        for b in &self.buildings {
            pts.extend(b.corners);
        }
        for r in &self.regions {
            pts.extend(&r.polygon);
            pts.extend(&r.smooth_samples);
        }
        for c in &self.centerlines {
            for p in &c.paths {
                pts.extend(p);
            }
        }
        pts.extend(self.plantings.singles.iter().map(|s| s.center));
        for c in &self.plantings.clusters {
            pts.extend(&c.outline);
            pts.extend(&c.points);
        }
        pts
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("scene serialization: {e}")))
    }

    /// Parses and schema-checks a scene document.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Schema { pointer: String::new(), message: e.to_string() })?;
        validate_scene_value(&value)?;
        serde_json::from_value(value).map_err(|e| Error::Schema { pointer: String::new(), message: e.to_string() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        VectorScene::from_json(&text)
    }
}

fn scene_validator() -> &'static jsonschema::Validator {
    static VALIDATOR: OnceLock<jsonschema::Validator> = OnceLock::new();
    VALIDATOR.get_or_init(|| {
        let schema: serde_json::Value = serde_json::from_str(SCENE_SCHEMA).expect("bundled schema is JSON");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

/// Checks a JSON value against [`SCENE_SCHEMA`]; the first violation is reported with
/// its JSON pointer.
pub fn validate_scene_value(value: &serde_json::Value) -> Result<()> {
    match scene_validator().iter_errors(value).next() {
        None => Ok(()),
        Some(err) => Err(Error::Schema { pointer: err.instance_path.to_string(), message: err.to_string() }),
    }
}

fn check_dims(masks: &[CategoryMask]) -> Result<(u32, u32)> {
    let first = masks.first().ok_or_else(|| Error::Validation("no masks given".into()))?;
    let dims = (first.width(), first.height());
    for m in masks {
        if (m.width(), m.height()) != dims {
            return Err(Error::Validation(format!(
                "mask `{}` is {}x{}, expected {}x{}",
                m.category,
                m.width(),
                m.height(),
                dims.0,
                dims.1
            )));
        }
    }
    Ok(dims)
}

/// Dispatches each mask to its extractor and merges the results. Categories without a
/// mask are treated as empty.
pub fn assemble_scene(masks: &[CategoryMask], scale: f64, params: &ExtractParams) -> Result<VectorScene> {
    let (w, h) = check_dims(masks)?;
    let mut scene = VectorScene::empty(w, h, scale);
    let mask_of = |c: Category| masks.iter().find(|m| m.category == c);

    for category in Category::ALL {
        let Some(mask) = mask_of(category) else { continue };
        match category {
            Category::Building => {
                for contour in trace_contours(mask) {
                    match fit_building(&contour) {
                        Ok(fp) => scene.buildings.push(fp),
                        Err(e) => log::warn!("skipping building contour: {e}"),
                    }
                }
            }
            Category::GreenSpace | Category::Water | Category::Pavement => {
                scene.regions.extend(extract_regions(mask, category, params.region())?);
            }
            Category::RedLine => {
                // Thin boundary line: no open/close cleanup, it would erase the stroke.
                let p = RegionParams { kernel: 1, ..params.region() };
                scene.regions.extend(extract_regions(mask, category, p)?);
            }
            Category::Road | Category::CityRoad => {
                let cl = extract_centerlines(mask, category, params.centerline())?;
                if !cl.paths.is_empty() {
                    scene.centerlines.push(cl);
                }
            }
            Category::Plant => {
                scene.plantings = extract_plantings(mask, params.planting_interval)?;
            }
        }
    }
    clamp_to_bounds(&mut scene);
    Ok(scene)
}

fn clamp_to_bounds(scene: &mut VectorScene) {
    let (w, h) = (scene.width as f64, scene.height as f64);
    for b in &mut scene.buildings {
        for c in &mut b.corners {
            c.0 = c.0.clamp(0.0, w);
            c.1 = c.1.clamp(0.0, h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{PlanBuilder, Shape};

    fn empty_masks(w: u32, h: u32) -> Vec<CategoryMask> {
        Category::ALL.iter().map(|&c| CategoryMask::empty(c, w, h)).collect()
    }

    #[test]
    fn empty_masks_give_empty_scene() {
        let scene = assemble_scene(&empty_masks(32, 32), 1.0, &ExtractParams::default()).unwrap();
        assert_eq!(scene, VectorScene::empty(32, 32, 1.0));
        validate_scene_value(&serde_json::to_value(&scene).unwrap()).unwrap();
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut masks = empty_masks(32, 32);
        masks[3] = CategoryMask::empty(masks[3].category, 16, 32);
        assert!(matches!(assemble_scene(&masks, 1.0, &ExtractParams::default()), Err(Error::Validation(_))));
    }

    #[test]
    fn fixture_counts_match_construction() {
        let plan = PlanBuilder::new(128, 128)
            .with(Category::Building, Shape::rect(10.0, 10.0, 30.0, 22.0))
            .with(Category::Water, Shape::ellipse(85.0, 40.0, 25.0, 18.0))
            .with(Category::Road, Shape::polyline(vec![(5.0, 100.0), (120.0, 100.0)], 3.0))
            .with(Category::Plant, Shape::disc(30.0, 70.0, 2.5))
            .with(Category::Plant, Shape::disc(60.0, 75.0, 2.5))
            .rasterize(1.0)
            .unwrap();
        let masks = crate::segment::segment(&plan, &crate::segment::Palette::default()).unwrap();
        let scene = assemble_scene(&masks, 1.0, &ExtractParams::default()).unwrap();
        assert_eq!(scene.buildings.len(), 1);
        assert_eq!(scene.regions_of(Category::Water).count(), 1);
        assert_eq!(scene.centerlines.len(), 1);
        assert_eq!(scene.centerlines[0].paths.len(), 1);
        assert_eq!(scene.plantings.singles.len(), 2);
        for p in scene.all_points() {
            assert!(p.0 >= 0.0 && p.0 <= 128.0 && p.1 >= 0.0 && p.1 <= 128.0);
        }
    }

    #[test]
    fn schema_reports_json_pointer() {
        let mut v = serde_json::to_value(VectorScene::empty(8, 8, 1.0)).unwrap();
        v["buildings"] = serde_json::json!([{ "corners": [[0, 0], [1, 0], [1, 1]], "rotated": false }]);
        match validate_scene_value(&v) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/buildings/0/corners"),
            other => panic!("{other:?}"),
        }
    }
}
