use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Landscape element categories found on a park layout plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    GreenSpace,
    Water,
    Road,
    Pavement,
    Building,
    RedLine,
    CityRoad,
    Plant,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::GreenSpace,
        Category::Water,
        Category::Road,
        Category::Pavement,
        Category::Building,
        Category::RedLine,
        Category::CityRoad,
        Category::Plant,
    ];

    /// Order in which 3D builders run. `red_line` is the site boundary and has no geometry.
    pub const BUILD_ORDER: [Category; 7] = [
        Category::Building,
        Category::Pavement,
        Category::GreenSpace,
        Category::Water,
        Category::Road,
        Category::CityRoad,
        Category::Plant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::GreenSpace => "green_space",
            Category::Water => "water",
            Category::Road => "road",
            Category::Pavement => "pavement",
            Category::Building => "building",
            Category::RedLine => "red_line",
            Category::CityRoad => "city_road",
            Category::Plant => "plant",
        }
    }

    /// Stable numeric id, used to key random substreams.
    pub fn id(self) -> u64 {
        Category::ALL.iter().position(|&c| c == self).unwrap() as u64
    }

    pub fn is_buildable(self) -> bool {
        self != Category::RedLine
    }

    /// Default reference color on the plan, also used to tint 3D meshes.
    pub fn default_color(self) -> [u8; 3] {
        match self {
            Category::GreenSpace => [34, 139, 34],
            Category::Water => [0, 102, 204],
            Category::Road => [128, 128, 128],
            Category::Pavement => [210, 180, 140],
            Category::Building => [178, 34, 34],
            Category::RedLine => [255, 0, 0],
            Category::CityRoad => [64, 64, 64],
            Category::Plant => [0, 200, 0],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown category `{s}`")))
    }
}
