use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the 3D builders. Lengths are meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    pub seed: u64,
    pub building_height_range: [f64; 2],
    pub road_width: f64,
    pub city_road_width: f64,
    /// Peak height of green terrain.
    pub terrain_amplitude: f64,
    /// Peak depth of water terrain.
    pub water_depth: f64,
    pub terrain_exponent: f64,
    pub terrain_jitter: f64,
    pub grid_spacing: f64,
    /// Cluster trees per square meter.
    pub tree_density: f64,
    pub canopy_height_range: [f64; 2],
    /// Lift roads onto the terrain surface.
    pub drape: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            seed: 0,
            building_height_range: [3.0, 15.0],
            road_width: 3.0,
            city_road_width: 12.0,
            terrain_amplitude: 3.0,
            water_depth: 2.5,
            terrain_exponent: 1.5,
            terrain_jitter: 0.2,
            grid_spacing: 2.0,
            tree_density: 0.02,
            canopy_height_range: [3.0, 6.0],
            drape: false,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("build: {msg}")));
        for (name, [lo, hi]) in
            [("building_height_range", self.building_height_range), ("canopy_height_range", self.canopy_height_range)]
        {
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi) {
                return bad(&format!("{name} must satisfy 0 <= min <= max, got [{lo}, {hi}]"));
            }
        }
        if !(self.road_width > 0.0 && self.city_road_width > 0.0) {
            return bad("road widths must be positive");
        }
        if !(self.terrain_amplitude >= 0.0 && self.water_depth >= 0.0) {
            return bad("terrain_amplitude and water_depth must be >= 0");
        }
        if !(self.terrain_exponent > 0.0) {
            return bad("terrain_exponent must be positive");
        }
        if !(0.0..1.0).contains(&self.terrain_jitter) {
            return bad("terrain_jitter must lie in [0, 1)");
        }
        if !(self.grid_spacing > 0.0) {
            return bad("grid_spacing must be positive");
        }
        if !(self.tree_density > 0.0) {
            return bad("tree_density must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        BuildConfig::default().validate().unwrap();
    }

    #[test]
    fn inverted_range_rejected() {
        let cfg = BuildConfig { building_height_range: [9.0, 2.0], ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = BuildConfig { terrain_jitter: 1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
