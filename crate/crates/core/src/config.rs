//! Pipeline configuration file (TOML).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::model::BuildConfig;
use crate::segment::{Palette, PaletteEntry, DEFAULT_TOLERANCE};
use crate::vector::ExtractParams;

/// Environment variable naming the output directory when `--out` is absent.
pub const OUT_ENV: &str = "PARKFORGE_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorSpec {
    pub color: [u8; 3],
    #[serde(default = "default_tolerance")]
    pub tolerance: u8,
}

fn default_tolerance() -> u8 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    pub lambda: f64,
    pub sharpen_amount: f64,
    pub contrast_gain: f64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig { lambda: 0.02, sharpen_amount: 0.1, contrast_gain: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub px_per_meter: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { px_per_meter: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoConfig {
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Meters per plan pixel.
    pub scale: f64,
    /// Per-category overrides of the reference colors.
    pub palette: BTreeMap<Category, ColorSpec>,
    pub preprocess: PreprocessConfig,
    pub extract: ExtractParams,
    pub build: BuildConfig,
    pub analysis: AnalysisConfig,
    pub io: IoConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            scale: 0.5,
            palette: BTreeMap::new(),
            preprocess: PreprocessConfig::default(),
            extract: ExtractParams::default(),
            build: BuildConfig::default(),
            analysis: AnalysisConfig::default(),
            io: IoConfig::default(),
        }
    }
}

impl PipelineConfig {
    /// Parses and validates a TOML document. Parse errors carry line, column and key.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PipelineConfig::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Default config when `path` is `None`.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(PipelineConfig::default()), PipelineConfig::load)
    }

    /// Default palette with this config's overrides applied.
    pub fn palette(&self) -> Result<Palette> {
        let entries = Category::ALL
            .iter()
            .map(|&category| match self.palette.get(&category) {
                Some(spec) => PaletteEntry { category, color: spec.color, tolerance: spec.tolerance },
                None => *Palette::default().get(category),
            })
            .collect();
        Palette::new(entries)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Config(format!("scale must be positive, got {}", self.scale)));
        }
        let p = &self.preprocess;
        if !(p.lambda >= 0.0 && p.sharpen_amount >= 0.0 && p.contrast_gain > 0.0) {
            return Err(Error::Config(format!(
                "preprocess needs lambda >= 0, sharpen_amount >= 0, contrast_gain > 0: {p:?}"
            )));
        }
        let e = &self.extract;
        if !(e.min_area >= 0.0
            && e.epsilon > 0.0
            && e.sample_step >= 1.0
            && e.blur_sigma >= 0.0
            && e.prune_len >= 0.0
            && e.stride >= 1
            && e.planting_interval >= 1.0
            && e.morph_kernel % 2 == 1)
        {
            return Err(Error::Config(format!("invalid extract section: {e:?}")));
        }
        if !(self.analysis.px_per_meter > 0.0) {
            return Err(Error::Config("analysis.px_per_meter must be positive".into()));
        }
        self.build.validate()?;
        self.palette()?;
        Ok(())
    }

    /// Output directory: explicit argument, then `PARKFORGE_OUT`, then `io.out_dir`, then
    /// `./out`.
    pub fn resolve_out_dir(&self, cli: Option<&Path>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        if let Some(v) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(v);
        }
        self.io.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn float(v: f64) -> String {
    let s = v.to_string();
    if s.contains('.') || s.contains('e') {
        s
    } else {
        format!("{s}.0")
    }
}

/// The default configuration as a commented TOML document.
pub fn default_config_toml() -> String {
    let d = PipelineConfig::default();
    let (p, e, b, a) = (d.preprocess, d.extract, &d.build, d.analysis);
    let mut s = String::new();
    let _ = writeln!(s, "# parkforge pipeline configuration. Every value shown is the default.\n");
    let _ = writeln!(s, "# Meters per plan pixel.\nscale = {}\n", float(d.scale));

    let _ = writeln!(s, "# Reference color and per-channel tolerance of each category. Color boxes");
    let _ = writeln!(s, "# (color +- tolerance on every channel) must not intersect.");
    for c in Category::ALL {
        let [r, g, bl] = c.default_color();
        let _ = writeln!(s, "[palette.{c}]\ncolor = [{r}, {g}, {bl}]\ntolerance = {DEFAULT_TOLERANCE}\n");
    }

    let _ = writeln!(s, "[preprocess]");
    let _ =
        writeln!(s, "# L0 smoothing weight on [0, 1] intensities; 0 disables smoothing.\nlambda = {}", float(p.lambda));
    let _ = writeln!(s, "# Unsharp-mask strength (Gaussian sigma 1 px).\nsharpen_amount = {}", float(p.sharpen_amount));
    let _ = writeln!(s, "# Contrast stretch about mid-gray.\ncontrast_gain = {}\n", float(p.contrast_gain));

    let _ = writeln!(s, "# Vectorization thresholds, in pixels.\n[extract]");
    let _ = writeln!(s, "# Regions with fewer pixels are dropped.\nmin_area = {}", float(e.min_area));
    let _ = writeln!(s, "# Polyline simplification tolerance.\nepsilon = {}", float(e.epsilon));
    let _ = writeln!(s, "# Spacing of the resampled smooth outline.\nsample_step = {}", float(e.sample_step));
    let _ = writeln!(s, "# Blur applied to road masks before thinning.\nblur_sigma = {}", float(e.blur_sigma));
    let _ = writeln!(s, "# Centerline paths shorter than this are discarded.\nprune_len = {}", float(e.prune_len));
    let _ = writeln!(s, "# Keep every n-th centerline point.\nstride = {}", e.stride);
    let _ = writeln!(
        s,
        "# Spacing of planting points on cluster outlines.\nplanting_interval = {}",
        float(e.planting_interval)
    );
    let _ = writeln!(
        s,
        "# Square open/close kernel applied to region masks (odd, 1 = off).\nmorph_kernel = {}\n",
        e.morph_kernel
    );

    let _ = writeln!(s, "# 3D generation, lengths in meters.\n[build]");
    let _ =
        writeln!(s, "# Seed of every random draw (building heights, terrain jitter, tree scatter).\nseed = {}", b.seed);
    let [h0, h1] = b.building_height_range;
    let _ = writeln!(s, "building_height_range = [{}, {}]", float(h0), float(h1));
    let _ = writeln!(s, "road_width = {}\ncity_road_width = {}", float(b.road_width), float(b.city_road_width));
    let _ = writeln!(s, "# Peak height of lawns and peak depth of water.");
    let _ = writeln!(s, "terrain_amplitude = {}\nwater_depth = {}", float(b.terrain_amplitude), float(b.water_depth));
    let _ = writeln!(
        s,
        "# Height grows as (distance to shore / max distance) ^ exponent.\nterrain_exponent = {}",
        float(b.terrain_exponent)
    );
    let _ = writeln!(
        s,
        "# Relative random variation of each terrain vertex, in [0, 1).\nterrain_jitter = {}",
        float(b.terrain_jitter)
    );
    let _ = writeln!(s, "# Interior sample spacing of terrain meshes.\ngrid_spacing = {}", float(b.grid_spacing));
    let _ = writeln!(
        s,
        "# Interior trees per square meter of a planting cluster.\ntree_density = {}",
        float(b.tree_density)
    );
    let [c0, c1] = b.canopy_height_range;
    let _ = writeln!(s, "# Cluster tree canopy diameter range.\ncanopy_height_range = [{}, {}]", float(c0), float(c1));
    let _ = writeln!(s, "# Lay roads on the terrain surface instead of at ground level.\ndrape = {}\n", b.drape);

    let _ = writeln!(s, "[analysis]\n# Overlay image resolution.\npx_per_meter = {}\n", float(a.px_per_meter));
    let _ = writeln!(s, "[io]\n# Output directory; --out and {OUT_ENV} take precedence.\n# out_dir = \"out\"");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_document_round_trips() {
        let parsed = PipelineConfig::from_toml(&default_config_toml()).unwrap();
        let mut expected = PipelineConfig::default();
        for c in Category::ALL {
            expected.palette.insert(c, ColorSpec { color: c.default_color(), tolerance: DEFAULT_TOLERANCE });
        }
        assert_eq!(parsed, expected);
        assert_eq!(parsed.palette().unwrap(), Palette::default());
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn unknown_field_reports_location() {
        let err = PipelineConfig::from_toml("scale = 1.0\n[extract]\nepsilom = 2.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("epsilom") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn overlapping_palette_names_both() {
        let err = PipelineConfig::from_toml("[palette.water]\ncolor = [128, 128, 128]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("water") && msg.contains("road"), "{msg}");
    }

    #[test]
    fn out_dir_precedence() {
        let cfg = PipelineConfig { io: IoConfig { out_dir: Some("from_cfg".into()) }, ..Default::default() };
        assert_eq!(cfg.resolve_out_dir(Some(Path::new("cli"))), PathBuf::from("cli"));
    }
}
