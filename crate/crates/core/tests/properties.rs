mod common;

use defectlab::cocycles::evaluate_trail;
use defectlab::fixtures::*;
use defectlab::groups::{ext_group, hom_group, smith_normal_form, FgAbelianGroup, GroupElement, GroupSpec, IntegerMatrix};
use defectlab::lattice::{boundary, ring, winding_number, Chain, CubicCell, Rect, Site, Trail};
use defectlab::symbolic::{defect_field, Configuration, Sym};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn is_unit(x: &Option<BigInt>) -> bool {
    matches!(x, Some(d) if *d == BigInt::from(1) || *d == BigInt::from(-1))
}

/// A word over `v, h` or `a, b, A, B`.
fn word(letters: &'static str) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(letters.chars().collect::<Vec<_>>()), 0..8)
        .prop_map(|v| v.into_iter().collect())
}

/// An ice window cropped from a periodic sample, damaged at a few sites.
fn damaged_ice(seed: u64, hits: usize) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = random_periodic(&ice(), &[4, 6], seed % 16).unwrap();
    let rect = Rect::new(vec![-6, -6], vec![6, 6]);
    let mut cfg = cfg.crop(&rect).unwrap();
    for _ in 0..hits {
        let z = common::random_site(&mut rng, &rect);
        cfg.set(&z, rng.gen_range(0..6) as Sym).unwrap();
    }
    cfg
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(rows in matrix()) {
        let m = IntegerMatrix::from_rows(&rows);
        let f = smith_normal_form(&m);
        prop_assert_eq!(f.u.mul(&m).unwrap().mul(&f.v).unwrap(), f.s.clone());
        prop_assert!(is_unit(&f.u.determinant()) && is_unit(&f.v.determinant()));
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j {
                    prop_assert_eq!(f.s.get(i, j), &BigInt::from(0));
                }
            }
        }
        let inv = f.invariants();
        for w in inv.windows(2) {
            prop_assert!(w[0] > BigInt::from(0) && (&w[1] % &w[0]) == BigInt::from(0));
        }
    }

    #[test]
    fn ext_and_hom_of_cyclic_groups(n in 1u64..40, m in 1u64..40) {
        let g = common::gcd(n, m);
        let e = ext_group(&FgAbelianGroup::cyclic(n), &FgAbelianGroup::cyclic(m));
        prop_assert_eq!(e.order(), Some(g));
        prop_assert_eq!(&e, &hom_group(&FgAbelianGroup::cyclic(n), &FgAbelianGroup::cyclic(m)));
        prop_assert!(ext_group(&FgAbelianGroup::free(2), &FgAbelianGroup::cyclic(m)).is_trivial());
    }

    #[test]
    fn free_product_axioms(a in word("vh"), b in word("vh"), c in word("vh")) {
        let g = GroupSpec::FreeProductZ2Z2;
        let (a, b, c) = (g.canonical(&GroupElement::word(&a)).unwrap(), g.canonical(&GroupElement::word(&b)).unwrap(), g.canonical(&GroupElement::word(&c)).unwrap());
        let ab_c = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(g.is_identity(&g.mul(&a, &g.inv(&a).unwrap()).unwrap()));
    }

    #[test]
    fn free_group_axioms(a in word("abAB"), b in word("abAB"), c in word("abAB")) {
        let g = GroupSpec::FreeGroup { generators: 2 };
        let (a, b, c) = (g.canonical(&GroupElement::word(&a)).unwrap(), g.canonical(&GroupElement::word(&b)).unwrap(), g.canonical(&GroupElement::word(&c)).unwrap());
        prop_assert_eq!(g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap(), g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap());
        prop_assert!(g.is_identity(&g.mul(&g.inv(&a).unwrap(), &a).unwrap()));
    }

    #[test]
    fn boundary_squares_to_zero(
        dim in 1usize..4,
        cells in prop::collection::vec((prop::collection::vec(-3i64..3, 3), 0usize..8, -2i64..=2), 1..12),
    ) {
        for k in 1..=dim {
            let mut chain = Chain::zero(k);
            for (base, mask, coeff) in &cells {
                // Choose k distinct axes from the mask bits, padding in order.
                let mut axes: Vec<usize> = (0..dim).filter(|d| mask >> d & 1 == 1).take(k).collect();
                for d in 0..dim {
                    if axes.len() < k && !axes.contains(&d) {
                        axes.push(d);
                    }
                }
                chain.add_term(CubicCell::new(Site(base[..dim].to_vec()), axes), *coeff);
            }
            prop_assert!(boundary(&boundary(&chain)).is_zero());
        }
    }

    #[test]
    fn box_boundaries_are_closed(lo in prop::collection::vec(-4i64..0, 3), len in prop::collection::vec(1i64..4, 3)) {
        let rect = Rect::new(lo.clone(), lo.iter().zip(&len).map(|(a, l)| a + l).collect());
        prop_assert!(boundary(&boundary(&Chain::solid_box(&rect))).is_zero());
    }

    #[test]
    fn rect_indexing_round_trips(lo in prop::collection::vec(-5i64..5, 1..4), len in 1i64..5, pick in 0usize..1000) {
        let rect = Rect::new(lo.clone(), lo.iter().map(|a| a + len - 1).collect());
        let i = pick % rect.len();
        let z = rect.site_at(i);
        prop_assert!(rect.contains(&z));
        prop_assert_eq!(rect.index_of(&z), Some(i));
    }

    #[test]
    fn rings_wind_once(x in -3i64..3, y in -3i64..3, k in 1i64..4, px in -8i64..8, py in -8i64..8) {
        let rect = Rect::new(vec![x, y], vec![x + 1, y + 1]);
        let lp = ring(&rect, k);
        prop_assert!(lp.is_closed());
        let p = Site::from([px, py]);
        let inside = px > x - k && px < x + 1 + k && py > y - k && py < y + 1 + k;
        let on = !inside && (px >= x - k && px <= x + 1 + k && py >= y - k && py <= y + 1 + k);
        if !on {
            prop_assert_eq!(winding_number(&lp, &p), inside as i64);
        }
    }

    #[test]
    fn trail_inverse_cancels(seed in 0u64..1000, hits in 0usize..4) {
        let cfg = damaged_ice(seed, hits);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let rect = cfg.window().shrink(1);
        let y = common::random_site(&mut rng, &rect);
        let z = common::random_site(&mut rng, &rect);
        let t = common::random_trail(&mut rng, &y, &z, &rect);
        let rule = ice_height();
        let a = evaluate_trail(&rule, &cfg, &t).unwrap();
        let b = evaluate_trail(&rule, &cfg, &t.reverse()).unwrap();
        prop_assert!(rule.group.is_identity(&rule.group.mul(&a, &b).unwrap()));
        let tt = t.concat(&t.reverse()).unwrap();
        prop_assert!(rule.group.is_identity(&evaluate_trail(&rule, &cfg, &tt).unwrap()));
    }

    #[test]
    fn residues_add_over_concatenation(seed in 0u64..1000) {
        // Loops through the same base point: the value of a concatenation is
        // the sum of the values, on any window, damaged or not.
        let cfg = damaged_ice(seed, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rect = cfg.window().shrink(1);
        let y = common::random_site(&mut rng, &rect);
        let (l1, l2) = (common::random_loop(&mut rng, &y, &rect), common::random_loop(&mut rng, &y, &rect));
        let rule = ice_height();
        let v = |t: &Trail| evaluate_trail(&rule, &cfg, t).unwrap().as_int().unwrap();
        prop_assert_eq!(v(&l1.concat(&l2).unwrap()), v(&l1) + v(&l2));
    }

    #[test]
    fn defect_field_is_lipschitz(seed in 0u64..1000, hits in 0usize..6) {
        let cfg = damaged_ice(seed, hits);
        let field = defect_field(&cfg, &ice()).unwrap();
        for z in cfg.window().sites() {
            let a = field.get(&z).unwrap();
            for axis in 0..2 {
                if let Some(b) = field.get(&z.step(axis, 1)) {
                    if a.is_exact() && b.is_exact() {
                        prop_assert!((a.lower() as i64 - b.lower() as i64).abs() <= 1, "at {}", z);
                    }
                }
            }
        }
    }

    #[test]
    fn configurations_round_trip_through_json(seed in 0u64..200) {
        let cfg = damaged_ice(seed, 2);
        let back: Configuration = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
