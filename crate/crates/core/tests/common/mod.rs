// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use floorplan3d::hypergraph::{ComponentId, LayoutHypergraph};
use floorplan3d::squeeze::{GeometricPlacement, PlacedBox, RallyPoint};
use floorplan3d::yal::parse_yal;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const INSTANCES: [&str; 5] = ["apte", "xerox", "hp", "ami33", "ami49"];

/// (blocks, nets, min, max, avg) as published for the MCNC instances.
pub const TABLE1: [(usize, usize, usize, usize, usize); 5] = [
    (9, 97, 8, 8, 8),
    (10, 203, 9, 9, 9),
    (11, 83, 5, 10, 7),
    (33, 123, 32, 32, 32),
    (49, 408, 2, 35, 18),
];

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn synthetic(name: &str) -> PathBuf {
    fixtures().join("synthetic-mcnc").join(format!("{name}.yal"))
}

/// Directory with the real MCNC files, if provided.
pub fn mcnc_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("MCNC_DIR")?);
    INSTANCES
        .iter()
        .all(|n| dir.join(format!("{n}.yal")).is_file())
        .then_some(dir)
}

/// Neighbor statistics straight from the text, without the library parser:
/// blocks are instances of GENERAL or STANDARD modules, and a net counts
/// when it reaches two distinct blocks.
pub fn naive_stats(text: &str) -> (usize, usize, usize, usize, f64) {
    let mut no_comments = String::new();
    let mut rest = text;
    while let Some(start) = rest.find("/*") {
        no_comments.push_str(&rest[..start]);
        let end = rest[start..].find("*/").expect("closed comment");
        rest = &rest[start + end + 2..];
    }
    no_comments.push_str(rest);

    let statements: Vec<Vec<&str>> = no_comments
        .split(';')
        .map(|s| s.split_whitespace().collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect();
    let mut block_modules = BTreeSet::new();
    let mut current = "";
    let mut in_network = false;
    let mut instances: Vec<(String, Vec<String>)> = Vec::new();
    for st in &statements {
        match st[0] {
            "MODULE" => current = st[1],
            "TYPE" if st[1] == "GENERAL" || st[1] == "STANDARD" => {
                block_modules.insert(current.to_string());
            }
            "NETWORK" => in_network = true,
            "ENDNETWORK" => in_network = false,
            _ if in_network => {
                // `instance module signal...`
                instances.push((st[1].to_string(), st[2..].iter().map(|s| s.to_string()).collect()));
            }
            _ => {}
        }
    }
    let mut nets: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    let mut blocks = 0;
    for (module, signals) in &instances {
        if !block_modules.contains(module) {
            continue;
        }
        for s in signals {
            nets.entry(s.as_str()).or_default().insert(blocks);
        }
        blocks += 1;
    }
    let mut neighbors = vec![BTreeSet::new(); blocks];
    let mut count = 0;
    for members in nets.values() {
        if members.len() < 2 {
            continue;
        }
        count += 1;
        for &a in members {
            for &b in members {
                if a != b {
                    neighbors[a].insert(b);
                }
            }
        }
    }
    let sizes: Vec<usize> = neighbors.iter().map(BTreeSet::len).collect();
    (
        blocks,
        count,
        *sizes.iter().min().unwrap(),
        *sizes.iter().max().unwrap(),
        sizes.iter().sum::<usize>() as f64 / blocks as f64,
    )
}

/// Hypergraph over `blocks` unit squares `c0..`, with nets given one per
/// entry as lists of block indices.
pub fn unit_hypergraph(blocks: usize, nets: &[&[usize]]) -> LayoutHypergraph {
    let mut signals = vec![Vec::new(); blocks];
    for (k, members) in nets.iter().enumerate() {
        for &m in *members {
            signals[m].push(format!("n{k}"));
        }
    }
    let mut text = String::from("MODULE b; TYPE GENERAL; DIMENSIONS 0 0 0 1 1 1 1 0; ENDMODULE;\n");
    text.push_str("MODULE top; TYPE PARENT; NETWORK;\n");
    for (i, s) in signals.iter().enumerate() {
        text.push_str(&format!("c{i} b {};\n", s.join(" ")));
    }
    text.push_str("ENDNETWORK; ENDMODULE;\n");
    LayoutHypergraph::from_netlist(&parse_yal(&text).unwrap()).unwrap()
}

pub fn placed(i: usize, x: f64, y: f64, layer: usize, w: f64, h: f64) -> PlacedBox {
    PlacedBox {
        component: ComponentId(i),
        name: format!("b{i}"),
        x,
        y,
        layer,
        width: w,
        height: h,
    }
}

/// Up to `max_boxes` non-overlapping boxes with integer coordinates on up
/// to `max_layers` layers. When `rally_inside`, the rally point lies in the
/// bounding box; otherwise anywhere in a wider window.
pub fn random_layout(seed: u64, max_boxes: usize, max_layers: usize, rally_inside: bool) -> GeometricPlacement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layers = rng.gen_range(1..=max_layers);
    let target = rng.gen_range(1..=max_boxes);
    let mut boxes: Vec<PlacedBox> = Vec::new();
    let mut attempts = 0;
    while boxes.len() < target && attempts < 2000 {
        attempts += 1;
        let b = placed(
            boxes.len(),
            rng.gen_range(0..80) as f64,
            rng.gen_range(0..80) as f64,
            rng.gen_range(0..layers),
            rng.gen_range(1..=20) as f64,
            rng.gen_range(1..=20) as f64,
        );
        if boxes.iter().all(|o| !o.overlaps(&b)) {
            boxes.push(b);
        }
    }
    let (x0, y0, x1, y1) = boxes.iter().fold(
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), bx| (a.min(bx.x), b.min(bx.y), c.max(bx.x + bx.width), d.max(bx.y + bx.height)),
    );
    let rally = if rally_inside {
        RallyPoint {
            px: rng.gen_range(x0..=x1).round(),
            py: rng.gen_range(y0..=y1).round(),
        }
    } else {
        RallyPoint {
            px: rng.gen_range(-20.0..120.0f64).round(),
            py: rng.gen_range(-20.0..120.0f64).round(),
        }
    };
    GeometricPlacement { boxes, layers, rally }
}

/// Open-interval overlap of two projections.
pub fn proj_overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> bool {
    a0 < b1 && b0 < a1
}

pub fn rally_gap(lo: f64, size: f64, p: f64) -> f64 {
    (lo - p).max(p - (lo + size)).max(0.0)
}
