//! glTF 2.0 and Wavefront OBJ/MTL writers.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::category::Category;
use crate::error::{Error, Result};
use crate::model::Scene3D;

const ARRAY_BUFFER: u32 = 34962;
const ELEMENT_ARRAY_BUFFER: u32 = 34963;
const FLOAT: u32 = 5126;
const UNSIGNED_INT: u32 = 5125;
/// Rotation taking the z-up world frame to glTF's y-up frame (-90 degrees about x).
const Z_UP_TO_Y_UP: [f64; 4] = [-std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0, std::f64::consts::FRAC_1_SQRT_2];

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Gltf {
    asset: Asset,
    scene: usize,
    scenes: Vec<SceneNode>,
    nodes: Vec<Node>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    meshes: Vec<Mesh>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    materials: Vec<Material>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    accessors: Vec<Accessor>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    buffer_views: Vec<BufferView>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    buffers: Vec<Buffer>,
}

#[derive(Serialize)]
struct Asset {
    version: &'static str,
    generator: &'static str,
}

#[derive(Serialize)]
struct SceneNode {
    nodes: Vec<usize>,
}

#[derive(Serialize)]
struct Node {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    mesh: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    children: Vec<usize>,
}

#[derive(Serialize)]
struct Mesh {
    name: String,
    primitives: Vec<Primitive>,
}

#[derive(Serialize)]
struct Primitive {
    attributes: Attributes,
    indices: usize,
    material: usize,
    mode: u32,
}

#[derive(Serialize)]
struct Attributes {
    #[serde(rename = "POSITION")]
    position: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Material {
    name: String,
    pbr_metallic_roughness: Pbr,
    double_sided: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Pbr {
    base_color_factor: [f64; 4],
    metallic_factor: f64,
    roughness_factor: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Accessor {
    buffer_view: usize,
    component_type: u32,
    count: usize,
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    min: Option<[f32; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max: Option<[f32; 3]>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BufferView {
    buffer: usize,
    byte_offset: usize,
    byte_length: usize,
    target: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Buffer {
    byte_length: usize,
    uri: String,
}

fn linear_color(c: [u8; 3]) -> [f64; 4] {
    // Rounded so the JSON text stays short and stable.
    let f = |v: u8| ((v as f64 / 255.0) * 1e4).round() / 1e4;
    [f(c[0]), f(c[1]), f(c[2]), 1.0]
}

/// Serializes the scene as glTF JSON plus its binary buffer. Each element becomes a node
/// named after it under a single root node that converts to glTF's y-up convention.
pub fn to_gltf(scene: &Scene3D, bin_uri: &str) -> Result<(String, Vec<u8>)> {
    let mut bin: Vec<u8> = Vec::new();
    let mut doc = Gltf {
        asset: Asset { version: "2.0", generator: concat!("parkforge ", env!("CARGO_PKG_VERSION")) },
        scene: 0,
        scenes: vec![SceneNode { nodes: vec![0] }],
        nodes: vec![Node { name: "park".into(), mesh: None, rotation: Some(Z_UP_TO_Y_UP), children: Vec::new() }],
        meshes: Vec::new(),
        materials: Vec::new(),
        accessors: Vec::new(),
        buffer_views: Vec::new(),
        buffers: Vec::new(),
    };
    let mut material_of: Vec<(Category, usize)> = Vec::new();

    for element in &scene.elements {
        let mesh = &element.mesh;
        let material = match material_of.iter().find(|(c, _)| *c == mesh.category) {
            Some(&(_, m)) => m,
            None => {
                doc.materials.push(Material {
                    name: mesh.category.to_string(),
                    pbr_metallic_roughness: Pbr {
                        base_color_factor: linear_color(mesh.color),
                        metallic_factor: 0.0,
                        roughness_factor: 1.0,
                    },
                    double_sided: true,
                });
                material_of.push((mesh.category, doc.materials.len() - 1));
                doc.materials.len() - 1
            }
        };

        let offset = bin.len();
        let mut lo = [f32::INFINITY; 3];
        let mut hi = [f32::NEG_INFINITY; 3];
        for v in &mesh.vertices {
            for k in 0..3 {
                let c = v[k] as f32;
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
                bin.extend_from_slice(&c.to_le_bytes());
            }
        }
        doc.buffer_views.push(BufferView {
            buffer: 0,
            byte_offset: offset,
            byte_length: bin.len() - offset,
            target: ARRAY_BUFFER,
        });
        doc.accessors.push(Accessor {
            buffer_view: doc.buffer_views.len() - 1,
            component_type: FLOAT,
            count: mesh.vertices.len(),
            kind: "VEC3",
            min: Some(lo),
            max: Some(hi),
        });
        let position = doc.accessors.len() - 1;

        let offset = bin.len();
        for t in &mesh.triangles {
            for i in t {
                bin.extend_from_slice(&i.to_le_bytes());
            }
        }
        doc.buffer_views.push(BufferView {
            buffer: 0,
            byte_offset: offset,
            byte_length: bin.len() - offset,
            target: ELEMENT_ARRAY_BUFFER,
        });
        doc.accessors.push(Accessor {
            buffer_view: doc.buffer_views.len() - 1,
            component_type: UNSIGNED_INT,
            count: mesh.triangles.len() * 3,
            kind: "SCALAR",
            min: None,
            max: None,
        });
        let indices = doc.accessors.len() - 1;

        doc.meshes.push(Mesh {
            name: element.name.clone(),
            primitives: vec![Primitive { attributes: Attributes { position }, indices, material, mode: 4 }],
        });
        doc.nodes.push(Node {
            name: element.name.clone(),
            mesh: Some(doc.meshes.len() - 1),
            rotation: None,
            children: Vec::new(),
        });
        let node = doc.nodes.len() - 1;
        doc.nodes[0].children.push(node);
    }
    if !bin.is_empty() {
        doc.buffers.push(Buffer { byte_length: bin.len(), uri: bin_uri.to_string() });
    }
    let json = serde_json::to_string_pretty(&doc).map_err(|e| Error::Invariant(format!("glTF serialization: {e}")))?;
    Ok((json, bin))
}

/// OBJ text (one object per element, 1-based indices) and the matching MTL library.
pub fn to_obj(scene: &Scene3D, mtl_name: &str) -> (String, String) {
    let mut obj = format!("mtllib {mtl_name}\n");
    let mut mtl = String::new();
    let mut seen: Vec<Category> = Vec::new();
    let mut base = 1usize;
    for element in &scene.elements {
        let m = &element.mesh;
        if !seen.contains(&m.category) {
            seen.push(m.category);
            let [r, g, b, _] = linear_color(m.color);
            let _ = writeln!(mtl, "newmtl {}\nKd {r} {g} {b}\n", m.category);
        }
        let _ = writeln!(obj, "o {}\nusemtl {}", element.name, m.category);
        for v in &m.vertices {
            let _ = writeln!(obj, "v {} {} {}", v[0], v[1], v[2]);
        }
        for t in &m.triangles {
            let _ = writeln!(obj, "f {} {} {}", t[0] as usize + base, t[1] as usize + base, t[2] as usize + base);
        }
        base += m.vertices.len();
    }
    (obj, mtl)
}

/// File names written by [`write_scene`].
pub const SCENE_FILES: [&str; 4] = ["scene.gltf", "scene.bin", "scene.obj", "scene.mtl"];

/// Writes `scene.gltf`, `scene.bin`, `scene.obj` and `scene.mtl` into `dir`.
pub fn write_scene(scene: &Scene3D, dir: &Path) -> Result<()> {
    let (gltf, bin) = to_gltf(scene, SCENE_FILES[1])?;
    let (obj, mtl) = to_obj(scene, SCENE_FILES[3]);
    let contents: [&[u8]; 4] = [gltf.as_bytes(), &bin, obj.as_bytes(), mtl.as_bytes()];
    for (name, data) in SCENE_FILES.iter().zip(contents) {
        let path = dir.join(name);
        std::fs::write(&path, data).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
