// SPDX-License-Identifier: Apache-2.0

mod common;

use floorplan3d::eo::{Cell, GridPlacement, GridShape};
use floorplan3d::hypergraph::ComponentId;
use floorplan3d::squeeze::{GeometricPlacement, RallyPoint};
use floorplan3d::wirelength::{grid_wirelength, net_hpwl, total_wirelength, NetEndpoint, WirelengthError};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{placed, unit_hypergraph};

/// Sum over axes of the largest pairwise distance.
fn pairwise(points: &[(f64, f64, f64)]) -> f64 {
    let mut m = [0.0f64; 3];
    for a in points {
        for b in points {
            m[0] = m[0].max((a.0 - b.0).abs());
            m[1] = m[1].max((a.1 - b.1).abs());
            m[2] = m[2].max((a.2 - b.2).abs());
        }
    }
    m.iter().sum()
}

fn endpoints(points: &[(f64, f64, f64)]) -> Vec<NetEndpoint> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| NetEndpoint { component: ComponentId(i), cx: p.0, cy: p.1, cz: p.2 })
        .collect()
}

fn point() -> impl Strategy<Value = (f64, f64, f64)> {
    (-1e4..1e4f64, -1e4..1e4f64, (0u8..8).prop_map(f64::from))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn equals_pairwise_form(points in prop::collection::vec(point(), 1..=50)) {
        let w = net_hpwl(&endpoints(&points)).unwrap();
        prop_assert!((w - pairwise(&points)).abs() <= 1e-9 * (1.0 + w.abs()));
        prop_assert!(w >= 0.0);
    }

    #[test]
    fn translation_invariant(points in prop::collection::vec(point(), 1..=30), d in point()) {
        let moved: Vec<_> = points.iter().map(|p| (p.0 + d.0, p.1 + d.1, p.2 + d.2)).collect();
        let a = net_hpwl(&endpoints(&points)).unwrap();
        let b = net_hpwl(&endpoints(&moved)).unwrap();
        prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a.abs()));
    }

    #[test]
    fn permutation_invariant(points in prop::collection::vec(point(), 1..=30), seed in any::<u64>()) {
        let mut shuffled = points.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(net_hpwl(&endpoints(&points)).unwrap(), net_hpwl(&endpoints(&shuffled)).unwrap());
    }

    #[test]
    fn shrinking_the_box_never_lengthens(points in prop::collection::vec(point(), 1..=30), f in 0.0..1.0f64) {
        let c = points[0];
        let shrunk: Vec<_> = points
            .iter()
            .map(|p| (c.0 + (p.0 - c.0) * f, c.1 + (p.1 - c.1) * f, c.2 + (p.2 - c.2) * f))
            .collect();
        prop_assert!(net_hpwl(&endpoints(&shrunk)).unwrap() <= net_hpwl(&endpoints(&points)).unwrap() + 1e-9);
    }
}

#[test]
fn empty_net_is_an_error() {
    assert_eq!(net_hpwl(&[]), Err(WirelengthError::EmptyNet));
}

#[test]
fn grid_wirelength_matches_pairwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        use rand::Rng;
        let m = rng.gen_range(2..12);
        let nets: Vec<Vec<usize>> = (0..rng.gen_range(1..10))
            .map(|_| {
                let mut members: Vec<usize> = (0..m).collect();
                members.shuffle(&mut rng);
                members.truncate(rng.gen_range(2..=m));
                members
            })
            .collect();
        let refs: Vec<&[usize]> = nets.iter().map(Vec::as_slice).collect();
        let h = unit_hypergraph(m, &refs);
        let shape = GridShape::new(3, 3, 2);
        let mut cells: Vec<Cell> = (0..shape.cells())
            .map(|i| Cell::new(i / 6, (i / 2) % 3, i % 2))
            .collect();
        cells.shuffle(&mut rng);
        cells.truncate(m);
        let p = GridPlacement::from_cells(shape, cells.clone()).unwrap();
        let expected: f64 = h
            .relations()
            .iter()
            .map(|r| {
                let pts: Vec<_> = r
                    .components
                    .iter()
                    .map(|c| {
                        let cell = cells[c.0];
                        (cell.x as f64, cell.y as f64, cell.z as f64)
                    })
                    .collect();
                pairwise(&pts)
            })
            .sum();
        assert_eq!(grid_wirelength(&h, &p).unwrap(), expected);
    }
}

#[test]
fn grid_examples() {
    let h = unit_hypergraph(2, &[&[0, 1]]);
    let adjacent = GridPlacement::from_cells(GridShape::new(2, 1, 1), vec![Cell::new(0, 0, 0), Cell::new(1, 0, 0)]).unwrap();
    assert_eq!(grid_wirelength(&h, &adjacent).unwrap(), 1.0);

    let h = unit_hypergraph(3, &[&[0, 1, 2]]);
    let column = GridPlacement::from_cells(
        GridShape::new(1, 3, 2),
        vec![Cell::new(0, 0, 0), Cell::new(0, 2, 1), Cell::new(0, 1, 0)],
    )
    .unwrap();
    assert_eq!(grid_wirelength(&h, &column).unwrap(), 2.0 + 1.0);
}

#[test]
fn total_uses_centers_and_die_height() {
    let h = unit_hypergraph(3, &[&[0, 1], &[0, 1, 2]]);
    let g = GeometricPlacement {
        boxes: vec![placed(0, 0.0, 0.0, 0, 2.0, 2.0), placed(1, 4.0, 0.0, 2, 2.0, 4.0), placed(2, 0.0, 6.0, 1, 4.0, 2.0)],
        layers: 3,
        rally: RallyPoint { px: 0.0, py: 0.0 },
    };
    let r = total_wirelength(&h, &g, 1.0).unwrap();
    // centers (1,1,0), (5,2,2), (2,7,1)
    assert_eq!(r.per_net["n0"], 4.0 + 1.0 + 2.0);
    assert_eq!(r.per_net["n1"], 4.0 + 6.0 + 2.0);
    assert_eq!(r.total, r.per_net.values().sum::<f64>());
    let tall = total_wirelength(&h, &g, 10.0).unwrap();
    assert_eq!(tall.total - r.total, 2.0 * 9.0 * 2.0);

    let missing = GeometricPlacement { boxes: g.boxes[..2].to_vec(), ..g.clone() };
    assert!(matches!(total_wirelength(&h, &missing, 1.0), Err(WirelengthError::UnplacedComponent(_))));
}

#[test]
fn identical_centers_give_zero() {
    let h = unit_hypergraph(2, &[&[0, 1]]);
    let g = GeometricPlacement {
        boxes: vec![placed(0, 1.0, 1.0, 0, 2.0, 2.0), placed(1, 0.0, 0.0, 0, 4.0, 4.0)],
        layers: 1,
        rally: RallyPoint { px: 0.0, py: 0.0 },
    };
    assert_eq!(total_wirelength(&h, &g, 1.0).unwrap().total, 0.0);
}
