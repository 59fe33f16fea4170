//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and exits
//! non-zero when any fails.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use parkforge::analysis::{drainage_overlay, slope_overlay, SLOPE_EDGES};
use parkforge::geom::Point;
use parkforge::model::mesh::Mesh3D;
use parkforge::model::planting::{build_cluster, tree_mesh};
use parkforge::model::{build_terrain, substream, BuildConfig, TerrainField};
use parkforge::pipeline::{cmd_pipeline, MANIFEST_FILE, SCENE_JSON};
use parkforge::segment::segment;
use parkforge::synth::{blob_ring, PlanBuilder, Shape};
use parkforge::vector::rect::min_area_rect;
use parkforge::vector::simplify::rdp_indices;
use parkforge::vector::{assemble_scene, zhang_suen, ExtractParams, PlantCluster, RegionOutline, VectorScene};
use parkforge::{Category, Palette, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

// ---------------------------------------------------------------- oracles

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

fn ring_dist(p: Point, ring: &[Point]) -> f64 {
    (0..ring.len()).map(|i| seg_dist(p, ring[i], ring[(i + 1) % ring.len()])).fold(f64::INFINITY, f64::min)
}

fn polyline_dist(p: Point, line: &[Point]) -> f64 {
    line.windows(2).map(|s| seg_dist(p, s[0], s[1])).fold(f64::INFINITY, f64::min)
}

fn shoelace(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].0 * ring[(i + 1) % n].1 - ring[(i + 1) % n].0 * ring[i].1).sum::<f64>() / 2.0
}

/// Ring vertices plus points every `step` along each edge.
fn densify(ring: &[Point], step: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..ring.len() {
        let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
        let n = ((a.dist(b) / step).ceil() as usize).max(1);
        out.extend((0..n).map(|k| a.lerp(b, k as f64 / n as f64)));
    }
    out
}

fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let directed = |x: &[Point], y: &[Point]| densify(x, 0.25).into_iter().map(|p| ring_dist(p, y)).fold(0.0, f64::max);
    directed(a, b).max(directed(b, a))
}

/// Textbook Zhang-Suen: recompute the neighbourhood of every pixel on every pass.
fn naive_zhang_suen(bits: &[bool], w: usize, h: usize) -> Vec<bool> {
    let mut img = bits.to_vec();
    let at = |img: &[bool], x: i64, y: i64| {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && img[y as usize * w + x as usize]
    };
    loop {
        let mut changed = false;
        for step in 0..2 {
            let mut doomed = Vec::new();
            for y in 0..h as i64 {
                for x in 0..w as i64 {
                    if !at(&img, x, y) {
                        continue;
                    }
                    // P2..P9 clockwise from north.
                    let n = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)]
                        .map(|(dx, dy)| at(&img, x + dx, y + dy));
                    let b = n.iter().filter(|&&v| v).count();
                    let a = (0..8).filter(|&k| !n[k] && n[(k + 1) % 8]).count();
                    let (p2, p4, p6, p8) = (n[0], n[2], n[4], n[6]);
                    let cond = if step == 0 {
                        !(p2 && p4 && p6) && !(p4 && p6 && p8)
                    } else {
                        !(p2 && p4 && p8) && !(p2 && p6 && p8)
                    };
                    if (2..=6).contains(&b) && a == 1 && cond {
                        doomed.push(y as usize * w + x as usize);
                    }
                }
            }
            changed |= !doomed.is_empty();
            for i in doomed {
                img[i] = false;
            }
        }
        if !changed {
            return img;
        }
    }
}

fn components8(bits: &[bool], w: usize, h: usize) -> usize {
    let mut seen = vec![false; bits.len()];
    let mut count = 0;
    for start in 0..bits.len() {
        if !bits[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if bits[j] && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    count
}

fn recursive_rdp(line: &[Point], lo: usize, hi: usize, eps: f64, keep: &mut Vec<usize>) {
    let mut best = (lo, -1.0);
    for i in lo + 1..hi {
        let d = seg_dist(line[i], line[lo], line[hi]);
        if d > best.1 {
            best = (i, d);
        }
    }
    if best.1 > eps {
        recursive_rdp(line, lo, best.0, eps, keep);
        keep.push(best.0);
        recursive_rdp(line, best.0, hi, eps, keep);
    }
}

fn rdp_oracle(line: &[Point], eps: f64) -> Vec<usize> {
    if line.len() <= 2 {
        return (0..line.len()).collect();
    }
    let mut keep = vec![0];
    recursive_rdp(line, 0, line.len() - 1, eps, &mut keep);
    keep.push(line.len() - 1);
    keep
}

fn hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    let cross = |o: Point, a: Point, b: Point| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Bounding rectangles over every hull-edge orientation as (area, corners), smallest first.
fn brute_rects(points: &[Point]) -> Vec<(f64, [Point; 4])> {
    let h = hull(points);
    let mut out = Vec::new();
    for i in 0..h.len() {
        let (a, b) = (h[i], h[(i + 1) % h.len()]);
        let len = a.dist(b);
        let u = Point((b.0 - a.0) / len, (b.1 - a.1) / len);
        let v = Point(-u.1, u.0);
        let proj = |p: Point, d: Point| p.0 * d.0 + p.1 * d.1;
        let (mut u0, mut u1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &p in &h {
            u0 = u0.min(proj(p, u));
            u1 = u1.max(proj(p, u));
            v0 = v0.min(proj(p, v));
            v1 = v1.max(proj(p, v));
        }
        let at = |s: f64, t: f64| Point(u.0 * s + v.0 * t, u.1 * s + v.1 * t);
        out.push(((u1 - u0) * (v1 - v0), [at(u0, v0), at(u1, v0), at(u1, v1), at(u0, v1)]));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn random_star(rng: &mut ChaCha8Rng, center: Point, r_lo: f64, r_hi: f64, n: usize) -> Vec<Point> {
    let base = rng.random_range(r_lo..r_hi);
    (0..n)
        .map(|i| {
            let t = i as f64 / n as f64 * std::f64::consts::TAU;
            let r = base * rng.random_range(0.7..1.0);
            Point(center.0 + r * t.cos(), center.1 + r * t.sin())
        })
        .collect()
}

/// A region outline in pixel space, drawn clockwise on screen like traced contours.
fn region(category: Category, ring: &[Point]) -> RegionOutline {
    let mut samples = ring.to_vec();
    samples.push(ring[0]);
    RegionOutline { category, polygon: ring.to_vec(), smooth_samples: samples, area_px: shoelace(ring).abs() }
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temporary directory")
}

fn run_pipeline(plan: &PlanBuilder, cfg: &PipelineConfig, dir: &Path) -> Result<(Duration, PathBuf), String> {
    let plan_path = dir.join("plan.png");
    plan.rasterize(cfg.scale).and_then(|p| p.save_png(&plan_path)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    cmd_pipeline(&plan_path, cfg, dir).map_err(|e| e.to_string())?;
    Ok((start.elapsed(), dir.to_path_buf()))
}

// ---------------------------------------------------------------- fixtures

struct RoundTripTruth {
    plan: PlanBuilder,
    buildings: Vec<Vec<Point>>,
    lake: Vec<Point>,
    pavement: Vec<Point>,
    road: Vec<Point>,
    trees: Vec<Point>,
}

fn polygon_of(shape: &Shape) -> Vec<Point> {
    match shape {
        Shape::Polygon(ring) => ring.clone(),
        other => panic!("not a polygon: {other:?}"),
    }
}

fn round_trip_fixture() -> RoundTripTruth {
    let rect = Shape::rect(24.0, 24.0, 64.0, 52.0);
    let rotated = Shape::rotated_rect(Point(190.0, 185.0), 30.0, 18.0, 30.0);
    let lake = blob_ring(Point(170.0, 70.0), 32.0, 0.12, 3, 0.5, 360);
    let pavement = blob_ring(Point(70.0, 175.0), 24.0, 0.1, 2, 1.0, 360);
    let road = vec![Point(20.0, 120.0), Point(120.0, 110.0), Point(236.0, 140.0)];
    let trees =
        vec![Point(100.0, 40.0), Point(115.0, 52.0), Point(132.0, 40.0), Point(30.0, 228.0), Point(130.0, 215.0)];
    let mut plan = PlanBuilder::new(256, 256)
        .with(Category::GreenSpace, Shape::rect(8.0, 8.0, 248.0, 248.0))
        .with(Category::Water, Shape::Polygon(lake.clone()))
        .with(Category::Pavement, Shape::Polygon(pavement.clone()))
        .with(Category::Building, rect.clone())
        .with(Category::Building, rotated.clone())
        .with(Category::Road, Shape::polyline(road.iter().map(|p| (p.0, p.1)).collect(), 3.0));
    for t in &trees {
        plan = plan.with(Category::Plant, Shape::disc(t.0, t.1, 2.5));
    }
    RoundTripTruth { plan, buildings: vec![polygon_of(&rect), polygon_of(&rotated)], lake, pavement, road, trees }
}

// ---------------------------------------------------------------- criteria

fn round_trip_fidelity() -> Outcome {
    let truth = round_trip_fixture();
    let dir = tempdir();
    let (elapsed, out) = run_pipeline(&truth.plan, &PipelineConfig::default(), dir.path())?;
    let scene = VectorScene::load(&out.join(SCENE_JSON)).map_err(|e| e.to_string())?;

    if scene.buildings.len() != truth.buildings.len() {
        return Err(format!("{} buildings, expected {}", scene.buildings.len(), truth.buildings.len()));
    }
    let mut corner_err: f64 = 0.0;
    for t in &truth.buildings {
        let fp = scene
            .buildings
            .iter()
            .min_by(|a, b| {
                a.corners[0]
                    .dist(t[0])
                    .min(a.corners[2].dist(t[0]))
                    .total_cmp(&b.corners[0].dist(t[0]).min(b.corners[2].dist(t[0])))
            })
            .unwrap();
        for c in t {
            corner_err = corner_err.max(fp.corners.iter().map(|k| k.dist(*c)).fold(f64::INFINITY, f64::min));
        }
    }

    let mut region_err: f64 = 0.0;
    for (cat, ring) in [(Category::Water, &truth.lake), (Category::Pavement, &truth.pavement)] {
        let found: Vec<&RegionOutline> = scene.regions_of(cat).collect();
        if found.len() != 1 {
            return Err(format!("{} {cat} regions, expected 1", found.len()));
        }
        let samples = &found[0].smooth_samples[..found[0].smooth_samples.len() - 1];
        region_err = region_err.max(hausdorff(samples, ring));
    }

    let roads: Vec<&Vec<Point>> =
        scene.centerlines.iter().filter(|c| c.category == Category::Road).flat_map(|c| &c.paths).collect();
    let pts: Vec<Point> = roads.iter().flat_map(|p| p.iter().copied()).collect();
    if pts.is_empty() {
        return Err("no road centerline".into());
    }
    let road_dev = pts.iter().map(|&p| polyline_dist(p, &truth.road)).sum::<f64>() / pts.len() as f64;

    if scene.plantings.singles.len() != truth.trees.len() {
        return Err(format!("{} single trees, expected {}", scene.plantings.singles.len(), truth.trees.len()));
    }
    let tree_err = truth
        .trees
        .iter()
        .map(|t| scene.plantings.singles.iter().map(|s| s.center.dist(*t)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);

    let detail = format!(
        "corners {corner_err:.3} px, Hausdorff {region_err:.3} px, road mean {road_dev:.3} px, trees {tree_err:.3} px, {:.2} s",
        elapsed.as_secs_f64()
    );
    let ok =
        corner_err <= 1.0 && region_err <= 2.0 && road_dev <= 1.5 && tree_err <= 1.0 && elapsed.as_secs_f64() < 10.0;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn thinning_fixture(rng: &mut ChaCha8Rng, kind: usize) -> Vec<bool> {
    const W: usize = 64;
    let bar = |rng: &mut ChaCha8Rng| {
        let c = Point(rng.random_range(24.0..40.0), rng.random_range(24.0..40.0));
        let angle: f64 = rng.random_range(0.0..180.0);
        let len = rng.random_range(24.0..44.0);
        let width = rng.random_range(3.0..9.0);
        Shape::rotated_rect(c, len, width, angle)
    };
    let shapes: Vec<Shape> = match kind {
        0 => vec![Shape::Polygon(random_star(rng, Point(32.0, 32.0), 10.0, 24.0, 24))],
        1 => vec![bar(rng)],
        _ => {
            let a = bar(rng);
            let Shape::Polygon(ring) = &a else { unreachable!() };
            let c = Point(ring.iter().map(|p| p.0).sum::<f64>() / 4.0, ring.iter().map(|p| p.1).sum::<f64>() / 4.0);
            let angle: f64 = rng.random_range(0.0..180.0);
            vec![a, Shape::rotated_rect(c, rng.random_range(20.0..36.0), rng.random_range(3.0..7.0), angle)]
        }
    };
    (0..W * W)
        .map(|i| {
            let p = Point((i % W) as f64 + 0.5, (i / W) as f64 + 0.5);
            shapes.iter().any(|s| s.contains(p))
        })
        .collect()
}

fn thinning_suite() -> Outcome {
    const W: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for k in 0..20 {
        let fg = thinning_fixture(&mut rng, k % 3);
        let sk = zhang_suen(&fg, W, W);
        let subset = sk.iter().zip(&fg).all(|(&s, &f)| !s || f);
        let comps = components8(&fg, W, W) == components8(&sk, W, W);
        let thin = (0..W - 1).all(|y| {
            (0..W - 1).all(|x| !(sk[y * W + x] && sk[y * W + x + 1] && sk[(y + 1) * W + x] && sk[(y + 1) * W + x + 1]))
        });
        let exact = sk == naive_zhang_suen(&fg, W, W);
        if !(subset && comps && thin && exact) {
            failures.push(format!("#{k} subset={subset} components={comps} thin={thin} oracle={exact}"));
        }
    }
    if failures.is_empty() {
        Ok("20/20 fixtures".into())
    } else {
        Err(failures.join("; "))
    }
}

fn rdp_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let n = rng.random_range(2..200);
        let mut p = Point(0.0, 0.0);
        let line: Vec<Point> = (0..n)
            .map(|_| {
                p = Point(p.0 + rng.random_range(-3.0..6.0), p.1 + rng.random_range(-4.0..4.0));
                p
            })
            .collect();
        let eps = rng.random_range(0.2..5.0);
        let got = rdp_indices(&line, eps);
        if got != rdp_oracle(&line, eps) {
            return Err(format!("polyline #{k}: differs from the recursive oracle"));
        }
        if got.first() != Some(&0) || got.last() != Some(&(n - 1)) || got.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("polyline #{k}: not an endpoint-preserving subsequence"));
        }
        for w in got.windows(2) {
            if (w[0] + 1..w[1]).any(|i| seg_dist(line[i], line[w[0]], line[w[1]]) > eps) {
                return Err(format!("polyline #{k}: deviation above epsilon"));
            }
        }
    }
    Ok("100/100 polylines".into())
}

fn min_rect_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut ties = 0;
    for k in 0..100 {
        let n = rng.random_range(3..40);
        let (a, b) = (rng.random_range(3.0..40.0), rng.random_range(1.0..30.0));
        let (s, c) = rng.random_range(0.0f64..std::f64::consts::PI).sin_cos();
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let (x, y) = (rng.random_range(-a..a), rng.random_range(-b..b));
                Point(50.0 + x * c - y * s, 50.0 + x * s + y * c)
            })
            .collect();
        let Some(rect) = min_area_rect(&pts) else { return Err(format!("set #{k}: no rectangle")) };
        let cands = brute_rects(&pts);
        let area = cands[0].0;
        if (rect.area() - area).abs() > 1e-6 * area.max(1.0) {
            return Err(format!("set #{k}: area {} vs {area}", rect.area()));
        }
        // Several orientations can share the minimum (every acute triangle does); any of them is correct.
        let optimal: Vec<&[Point; 4]> =
            cands.iter().filter(|c| c.0 - area <= 1e-9 * area.max(1.0)).map(|c| &c.1).collect();
        ties += usize::from(optimal.len() > 1);
        let got = rect.corners();
        let vertex_gap = |corners: &[Point; 4]| {
            corners.iter().map(|c| got.iter().map(|g| g.dist(*c)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        worst = worst.max(optimal.into_iter().map(vertex_gap).fold(f64::INFINITY, f64::min));
    }
    if worst <= 0.5 {
        Ok(format!("100/100 sets ({ties} with tied optima), worst vertex {worst:.2e} px"))
    } else {
        Err(format!("worst vertex {worst:.3} px"))
    }
}

fn terrain_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let scale = 0.5;
    for k in 0..20 {
        let category = if k % 2 == 0 { Category::GreenSpace } else { Category::Water };
        let ring = random_star(&mut rng, Point(100.0, 100.0), 30.0, 80.0, 40);
        let r = region(category, &ring);
        let world: Vec<Point> = ring.iter().map(|p| Point(p.0 * scale, -p.1 * scale)).collect();
        let sign = if category == Category::Water { -1.0 } else { 1.0 };
        for jitter in [0.0, 0.2] {
            let cfg = BuildConfig { terrain_jitter: jitter, seed: k, ..Default::default() };
            let f = build_terrain(&r, scale, &cfg, &mut substream(cfg.seed, category, 0)).map_err(|e| e.to_string())?;
            if f.mesh.vertices.iter().any(|v| sign * v[2] < 0.0) {
                return Err(format!("polygon #{k}: vertex on the wrong side of z = 0"));
            }
            for v in &f.mesh.vertices {
                if ring_dist(Point(v[0], v[1]), &world) < 1e-9 && v[2] != 0.0 {
                    return Err(format!("polygon #{k}: boundary vertex at z = {}", v[2]));
                }
            }
            if jitter > 0.0 {
                continue;
            }
            // Mean |z| per distance bin must not decrease.
            let d: Vec<f64> = f.mesh.vertices.iter().map(|v| ring_dist(Point(v[0], v[1]), &world)).collect();
            let dmax = d.iter().copied().fold(0.0, f64::max);
            let mut sums = [(0.0, 0usize); 8];
            for (v, di) in f.mesh.vertices.iter().zip(&d) {
                let b = ((di / dmax * 8.0) as usize).min(7);
                sums[b].0 += v[2].abs();
                sums[b].1 += 1;
            }
            let means: Vec<f64> = sums.iter().filter(|s| s.1 > 0).map(|s| s.0 / s.1 as f64).collect();
            if means.windows(2).any(|w| w[1] < w[0] - 1e-9) {
                return Err(format!("polygon #{k}: bin means {means:?} not monotone"));
            }
        }
    }
    // R = 20 m disc centered on a grid node.
    let disc: Vec<Point> = (0..360)
        .map(|i| {
            let t = -(i as f64).to_radians();
            Point(40.0 + 40.0 * t.cos(), 40.0 + 40.0 * t.sin())
        })
        .collect();
    let cfg = BuildConfig { terrain_jitter: 0.0, ..Default::default() };
    let f = build_terrain(&region(Category::GreenSpace, &disc), 0.5, &cfg, &mut substream(0, Category::GreenSpace, 0))
        .map_err(|e| e.to_string())?;
    let center = f
        .mesh
        .vertices
        .iter()
        .min_by(|a, b| {
            Point(a[0], a[1]).dist(Point(20.0, -20.0)).total_cmp(&Point(b[0], b[1]).dist(Point(20.0, -20.0)))
        })
        .unwrap();
    let rel = (center[2] - cfg.terrain_amplitude).abs() / cfg.terrain_amplitude;
    let detail = format!("20/20 polygons, disc center z {:.3} m ({:.1}% off)", center[2], rel * 100.0);
    if rel <= 0.1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cone(slope_deg: f64, sides: usize) -> Mesh3D {
    let radius = 10.0;
    let height = radius * slope_deg.to_radians().tan();
    let mut m = Mesh3D::new(Category::GreenSpace);
    let apex = m.push_vertex([0.0, 0.0, height]);
    for k in 0..sides {
        let t = k as f64 / sides as f64 * std::f64::consts::TAU;
        m.push_vertex([radius * t.cos(), radius * t.sin(), 0.0]);
    }
    for k in 0..sides as u32 {
        m.triangles.push([apex, 1 + k, 1 + (k + 1) % sides as u32]);
    }
    m
}

fn slope_suite() -> Outcome {
    let mut report = Vec::new();
    let mut ok = true;
    for (expected, deg) in [3.0, 10.0, 30.0, 55.0, 80.0].into_iter().enumerate() {
        let mesh = cone(deg, 96);
        let overlay = slope_overlay(&[&mesh]);
        let hits = overlay.bins.iter().filter(|&&b| b == expected).count();
        let frac = hits as f64 / overlay.len() as f64;
        ok &= frac >= 0.99;
        let close = if expected == 4 { ']' } else { ')' };
        report.push(format!(
            "{deg} deg -> [{}, {}{close} {:.0}%",
            SLOPE_EDGES[expected],
            SLOPE_EDGES[expected + 1],
            frac * 100.0
        ));
    }
    if ok {
        Ok(report.join(", "))
    } else {
        Err(report.join(", "))
    }
}

fn drainage_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..20 {
        let category = if k % 3 == 2 { Category::Water } else { Category::GreenSpace };
        let ring = random_star(&mut rng, Point(80.0, 80.0), 20.0, 60.0, 30);
        let cfg = BuildConfig { seed: k, ..Default::default() };
        let field = build_terrain(&region(category, &ring), 0.5, &cfg, &mut substream(k, category, 0))
            .map_err(|e| e.to_string())?;
        let o = drainage_overlay(std::slice::from_ref(&field));
        let n = o.len();
        let at_minima: f64 = (0..n).filter(|&f| o.receiver[f].is_none()).map(|f| o.values[f]).sum();
        if at_minima != n as f64 {
            return Err(format!("terrain #{k}: {at_minima} at minima, {n} faces"));
        }
        // Independent recount from the receiver graph.
        let mut acc = vec![1.0; n];
        let z: Vec<f64> = o.faces.iter().map(|t| (t[0][2] + t[1][2] + t[2][2]) / 3.0).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| z[b].total_cmp(&z[a]));
        for &f in &order {
            if let Some(r) = o.receiver[f] {
                if z[r] >= z[f] {
                    return Err(format!("terrain #{k}: face {f} drains uphill"));
                }
                acc[r] += acc[f];
            }
        }
        if acc != o.values {
            return Err(format!("terrain #{k}: accumulation differs from the receiver graph"));
        }
    }

    // Planar ramp z = 0.3x + 0.1y.
    let mut mesh = Mesh3D::new(Category::GreenSpace);
    let n = 12;
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (i as f64 * 2.0, j as f64 * 2.0);
            mesh.push_vertex([x, y, 0.3 * x + 0.1 * y]);
        }
    }
    for j in 0..n {
        for i in 0..n {
            let v = (j * (n + 1) + i) as u32;
            let w = (n + 1) as u32;
            mesh.triangles.push([v, v + 1, v + w + 1]);
            mesh.triangles.push([v, v + w + 1, v + w]);
        }
    }
    let count = mesh.vertices.len();
    let ramp = TerrainField { mesh, boundary_vertices: Vec::new(), vertex_distance: vec![0.0; count], sign: 1.0 };
    let o = drainage_overlay(&[ramp]);
    let norm = (0.3f64 * 0.3 + 0.1 * 0.1).sqrt();
    let expect = [-0.3 / norm, -0.1 / norm];
    let dev = o.flow.iter().map(|f| (f[0] - expect[0]).abs().max((f[1] - expect[1]).abs())).fold(0.0, f64::max);
    if dev > 1e-6 {
        return Err(format!("ramp flow deviates by {dev:e}"));
    }
    Ok(format!("20/20 terrains conserve mass, ramp deviation {dev:.1e}"))
}

fn building_heights(dir: &Path) -> Result<Vec<f64>, String> {
    let (doc, _, _) = gltf::import(dir.join("scene.gltf")).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for node in doc.nodes() {
        if node.name().is_some_and(|n| n.starts_with("building_")) {
            let mesh = node.mesh().ok_or("building node without mesh")?;
            for prim in mesh.primitives() {
                out.push(prim.bounding_box().max[2] as f64);
            }
        }
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let plan = round_trip_fixture().plan;
    let cfg = PipelineConfig::default();
    let (a, b, c) = (tempdir(), tempdir(), tempdir());
    run_pipeline(&plan, &cfg, a.path())?;
    run_pipeline(&plan, &cfg, b.path())?;
    let mut reseeded = cfg.clone();
    reseeded.build.seed = cfg.build.seed + 1;
    run_pipeline(&plan, &reseeded, c.path())?;

    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).map_err(|e| e.to_string());
    if read(a.path(), MANIFEST_FILE)? != read(b.path(), MANIFEST_FILE)? {
        return Err("same seed, different manifests".into());
    }
    if read(a.path(), SCENE_JSON)? != read(c.path(), SCENE_JSON)? {
        return Err("seed changed the vector stage".into());
    }
    let (ha, hc) = (building_heights(a.path())?, building_heights(c.path())?);
    if ha.is_empty() || ha.len() != hc.len() {
        return Err(format!("building counts {} and {}", ha.len(), hc.len()));
    }
    let changed = ha.iter().zip(&hc).filter(|(x, y)| x != y).count();
    if changed == 0 {
        return Err("new seed left every building height unchanged".into());
    }
    Ok(format!("manifests identical, {changed}/{} heights change with the seed", ha.len()))
}

fn scene_schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/scene.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn random_plan(rng: &mut ChaCha8Rng) -> PlanBuilder {
    let mut plan = PlanBuilder::new(160, 160).with(Category::GreenSpace, Shape::rect(4.0, 4.0, 156.0, 156.0));
    for _ in 0..rng.random_range(1..4) {
        let c = Point(rng.random_range(30.0..130.0), rng.random_range(30.0..130.0));
        let cat = [Category::Water, Category::Pavement][rng.random_range(0..2)];
        plan = plan.with(cat, Shape::Polygon(random_star(rng, c, 8.0, 20.0, 16)));
    }
    for _ in 0..rng.random_range(0..3) {
        let c = Point(rng.random_range(20.0..140.0), rng.random_range(20.0..140.0));
        plan = plan.with(
            Category::Building,
            Shape::rotated_rect(
                c,
                rng.random_range(8.0..20.0),
                rng.random_range(6.0..14.0),
                rng.random_range(0.0..90.0),
            ),
        );
    }
    let y = rng.random_range(20.0..140.0);
    plan = plan
        .with(Category::Road, Shape::polyline(vec![(10.0, y), (80.0, rng.random_range(20.0..140.0)), (150.0, y)], 3.0));
    for _ in 0..rng.random_range(0..5) {
        plan =
            plan.with(Category::Plant, Shape::disc(rng.random_range(10.0..150.0), rng.random_range(10.0..150.0), 2.5));
    }
    plan
}

fn format_validity() -> Outcome {
    let validator = scene_schema();
    let mut gltf_files = 0;
    let mut scenes = 0;
    let check_scene = |v: &serde_json::Value, what: &str| -> Result<(), String> {
        match validator.iter_errors(v).next() {
            None => Ok(()),
            Some(e) => Err(format!("{what}: schema violation at {}: {e}", e.instance_path)),
        }
    };

    for (name, plan) in [("round trip", round_trip_fixture().plan), ("sample park", parkforge::synth::sample_park())] {
        let dir = tempdir();
        run_pipeline(&plan, &PipelineConfig::default(), dir.path())?;
        let bytes = std::fs::read(dir.path().join("scene.gltf")).map_err(|e| e.to_string())?;
        gltf::Gltf::from_slice(&bytes).map_err(|e| format!("{name}: glTF rejected: {e}"))?;
        let (doc, buffers, _) = gltf::import(dir.path().join("scene.gltf")).map_err(|e| format!("{name}: {e}"))?;
        for mesh in doc.meshes() {
            for prim in mesh.primitives() {
                let reader = prim.reader(|b| Some(&buffers[b.index()]));
                let n = reader.read_positions().ok_or("missing positions")?.count() as u32;
                if reader.read_indices().ok_or("missing indices")?.into_u32().any(|i| i >= n) {
                    return Err(format!("{name}: index out of range"));
                }
            }
        }
        gltf_files += 1;
        let text = std::fs::read_to_string(dir.path().join(SCENE_JSON)).map_err(|e| e.to_string())?;
        check_scene(&serde_json::from_str(&text).map_err(|e| e.to_string())?, name)?;
        scenes += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..10 {
        let plan = random_plan(&mut rng).rasterize(0.5).map_err(|e| e.to_string())?;
        let masks = segment(&plan, &Palette::default()).map_err(|e| e.to_string())?;
        let scene = assemble_scene(&masks, 0.5, &ExtractParams::default()).map_err(|e| e.to_string())?;
        check_scene(&serde_json::to_value(&scene).unwrap(), &format!("random plan #{k}"))?;
        scenes += 1;
    }
    Ok(format!("{gltf_files} glTF files valid, {scenes} scenes match the schema"))
}

fn planting_coupling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let per_tree = tree_mesh(Point(0.0, 0.0), 1.0).triangles.len();
    let scale = 0.5;
    let cfg = BuildConfig::default();
    for k in 0..50 {
        let sides = rng.random_range(5..30);
        let ring = random_star(&mut rng, Point(120.0, 120.0), 10.0, 100.0, sides);
        let points: Vec<Point> = ring.iter().step_by(3).copied().collect();
        let cluster = PlantCluster { outline: ring.clone(), points: points.clone() };
        let mesh = build_cluster(&cluster, scale, &cfg, &mut substream(0, Category::Plant, k));
        let trees = mesh.triangles.len() / per_tree;
        let area_m2 = shoelace(&ring).abs() * scale * scale;
        let expected = ((area_m2 * cfg.tree_density).round() as usize).max(1);
        if trees - points.len() != expected {
            return Err(format!(
                "polygon #{k}: {} interior trees for {area_m2:.1} m^2, expected {expected}",
                trees - points.len()
            ));
        }
    }
    Ok("50/50 polygons".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("round-trip fidelity", round_trip_fidelity),
        ("thinning suite", thinning_suite),
        ("RDP suite", rdp_suite),
        ("minimum-area rectangle", min_rect_suite),
        ("terrain invariants", terrain_suite),
        ("slope binning", slope_suite),
        ("drainage conservation", drainage_suite),
        ("determinism", determinism),
        ("format validity", format_validity),
        ("planting coupling", planting_coupling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
