mod common;

use std::collections::HashMap;

use defectlab::automaton::CaRule;
use defectlab::complexes::*;
use defectlab::fixtures::*;
use defectlab::groups::FgAbelianGroup;
use defectlab::lattice::Site;
use defectlab::symbolic::{SearchBudget, SftSpec, WangTileSet};

fn z() -> FgAbelianGroup {
    FgAbelianGroup::integers()
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn wang_of(spec: &SftSpec) -> WangTileSet {
    match &spec.constraint {
        defectlab::symbolic::Constraint::Wang { tiles } => tiles.clone(),
        _ => unreachable!(),
    }
}

fn check_complex(tc: &TileComplex) {
    assert!(tc.boundary_squares_vanish());
    let betti = tc.betti_numbers().unwrap();
    let alt: i64 = betti.iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    assert_eq!(alt, tc.euler_characteristic());
    assert_eq!(tc.cells[tc.dim].len(), tc.tiles.len());
    // Boundaries do not depend on the representative of a class.
    for d in 1..=tc.dim {
        for (j, cell) in tc.cells[d].iter().enumerate() {
            for f in &cell.members {
                let mut col = HashMap::new();
                for (i, &a) in cell.axes.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    for (side, s) in [(1u8, sign), (0u8, -sign)] {
                        let mut code = f.code.clone();
                        code[a] = side;
                        *col.entry(tc.class_of(f.tile, &code).unwrap()).or_insert(0) += s;
                    }
                }
                col.retain(|_, v| *v != 0);
                let want: HashMap<usize, i64> =
                    (0..tc.cells[d - 1].len()).filter(|&i| tc.boundary(d).get(i, j) != 0).map(|i| (i, tc.boundary(d).get(i, j))).collect();
                assert_eq!(col, want);
            }
        }
    }
}

#[test]
fn domino_complex() {
    let tc = build_tile_complex(&wang_of(&dominoes()));
    check_complex(&tc);
    assert_eq!(tc.cells[2].len(), 4);
    assert_eq!(tc.cells[0].len(), 1);
    for axis in 0..2 {
        assert_eq!(tc.cells[1].iter().filter(|c| c.axes == [axis]).count(), 2, "axis {axis}");
    }
    let cl = conway_lagarias_abelianized(&wang_of(&dominoes())).unwrap();
    assert!(cl.group.is_trivial(), "{}", cl.group);
}

#[test]
fn ice_complex_and_tile_homotopy() {
    let w = wang_of(&ice());
    let tc = build_tile_complex(&w);
    check_complex(&tc);
    assert_eq!(tc.cell_counts(), vec![1, 4, 6]);
    let h1 = tile_homology(&tc, 1, &z()).unwrap();
    assert_eq!(h1, FgAbelianGroup::free(3));
    assert_eq!(tile_homology(&tc, 0, &z()).unwrap(), z());
    let cl = conway_lagarias_abelianized(&w).unwrap();
    assert_eq!(cl.group, z());
    // Up minus down on horizontal edges generates.
    let up = ice_tiles().names().iter().position(|t| t.chars().nth(3) == Some('^')).unwrap();
    let down = ice_tiles().names().iter().position(|t| t.chars().nth(3) == Some('v')).unwrap();
    let south = |tile: usize| tc.class_of(tile, &[2, 0]).unwrap();
    assert_ne!(south(up), south(down));
    let mut word = vec![0; cl.colours.len()];
    word[cl.colour(0, south(up)).unwrap()] += 1;
    word[cl.colour(0, south(down)).unwrap()] -= 1;
    assert_eq!(cl.coords(&word).unwrap()[0].abs(), 1);
    // An unbalanced word has no coordinates.
    word[cl.colour(0, south(up)).unwrap()] += 1;
    assert!(cl.coords(&word).is_err());
}

#[test]
fn path_complex_is_consistent() {
    check_complex(&build_tile_complex(&wang_of(&paths())));
}

#[test]
fn ice_cube_complex_is_consistent() {
    let tc = build_tile_complex(&wang_of(&ice_cubes()));
    check_complex(&tc);
    assert_eq!(tc.cells[3].len(), 20);
}

#[test]
fn full_shift_has_constant_cohomology() {
    for n in [2u64, 3] {
        let g = FgAbelianGroup::cyclic(n);
        let spec = full_shift(2, 2);
        for r in [0, 1] {
            assert_eq!(invariant_cohomology(&spec, r, 0, &g, budget()).unwrap(), g);
        }
    }
}

#[test]
fn golden_mean_radius_one() {
    let rc = radius_complex(&golden_mean(), 1, budget()).unwrap();
    check_complex(&rc.complex);
    assert_eq!(rc.complex.cell_counts(), vec![3, 5]);
    let g = invariant_cohomology(&golden_mean(), 1, 1, &FgAbelianGroup::cyclic(2), budget()).unwrap();
    assert_eq!(g, FgAbelianGroup::new(0, &[2, 2, 2]));
}

#[test]
fn invariant_cohomology_matches_enumeration() {
    let spec = golden_mean();
    for n in [2u64, 4] {
        let g = FgAbelianGroup::cyclic(n);
        let want = common::brute_force_h1(&spec, n);
        let got = invariant_cohomology(&spec, 1, 1, &g, budget()).unwrap();
        assert_eq!(got, want, "Z/{n}");
    }
}

#[test]
fn connecting_maps_are_chain_maps() {
    for (spec, r) in [(golden_mean(), 1), (golden_mean(), 2), (dominoes(), 0), (ice(), 0), (full_shift(2, 2), 0)] {
        let cm = connecting_map(&spec, r, budget()).unwrap();
        assert!(cm.commutes_with_boundary());
        assert!(cm.target.boundary_squares_vanish() && cm.source.boundary_squares_vanish());
    }
}

#[test]
fn identity_restriction_is_identity() {
    let rc = radius_complex(&golden_mean(), 1, budget()).unwrap();
    let id = restriction_map(&rc, &rc).unwrap();
    let m = induced_map_on_cohomology(&id, 1, &FgAbelianGroup::cyclic(2)).unwrap();
    assert_eq!(m, defectlab::groups::modp::FpMatrix::identity(2, m.rows));
}

#[test]
fn automaton_maps_on_cohomology() {
    let g = FgAbelianGroup::cyclic(2);
    let spec = golden_mean();
    for ca in [CaRule::identity(1, 2), CaRule::shift(Site::from([1]), 2), CaRule::shift(Site::from([-1]), 2)] {
        for d in [0, 1] {
            let m = ca_induced_map(&spec, &ca, 1, d, &g, budget()).unwrap();
            assert!(m.equals_restriction, "{} in degree {d}", ca.name);
        }
        assert!(ladder_commutes(&spec, &ca, 1, budget()).unwrap());
    }
    let ice_shift = CaRule::shift(Site::from([0, 1]), 6);
    // A shifted ladder on ice needs radius-2 blocks, past the default budget.
    for (spec, n) in [(ice(), 6), (dominoes(), 4)] {
        assert!(ladder_commutes(&spec, &CaRule::identity(2, n), 0, budget()).unwrap());
    }
    let m = ca_induced_map(&ice(), &ice_shift, 0, 1, &g, budget()).unwrap();
    assert!(m.equals_restriction);
}

#[test]
fn stabilization_on_golden_mean() {
    let rep = stabilization_scan(&golden_mean(), 1, &FgAbelianGroup::cyclic(2), 1, 4, budget()).unwrap();
    assert_eq!(rep.rows.len(), 4);
    assert!(rep.truncated.is_none());
    for row in &rep.rows {
        assert!(row.group.order().unwrap() >= 2);
    }
}

#[test]
fn export_has_triplets() {
    let tc = build_tile_complex(&wang_of(&ice()));
    let json = serde_json::to_value(tc.export()).unwrap();
    assert_eq!(json["cell_counts"], serde_json::json!([1, 4, 6]));
    assert_eq!(json["boundaries"].as_array().unwrap().len(), 2);
}

#[test]
fn ice_scan_is_budget_limited() {
    let rep = stabilization_scan(&ice(), 1, &FgAbelianGroup::cyclic(2), 0, 2, SearchBudget { max_nodes: 5_000_000, max_results: 200_000 })
        .unwrap();
    assert_eq!(rep.rows.len(), 2);
    assert_eq!(rep.rows[1].tiles, 2604);
    for row in &rep.rows {
        assert_eq!(row.group, FgAbelianGroup::new(0, &[2, 2, 2]));
    }
    assert_eq!(rep.rows[0].isomorphism, Some(true));
    assert_eq!(rep.stable_from, Some(0));
    assert!(rep.truncated.is_some());
}
