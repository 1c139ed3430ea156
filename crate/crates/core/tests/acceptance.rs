//! End-to-end acceptance checks, one line of output per criterion.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use defectlab::automaton::{apply, energy_drop_check, evolve, CaRule, LocalRule};
use defectlab::cocycles::*;
use defectlab::complexes::*;
use defectlab::defects::*;
use defectlab::Error;
use defectlab::fixtures::*;
use defectlab::groups::{ext_group, vh_exponent, FgAbelianGroup, GroupElement, GroupSpec};
use defectlab::lattice::{boundary, ring, trails_homotopic, Chain, Rect, Site, Trail};
use defectlab::project::{fixture_project, FIXTURE_PROJECTS};
use defectlab::symbolic::{
    classify_defect, defect_field, defect_region, Configuration, Constraint, FieldValue, SearchBudget, SftSpec, Sym,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

/// Unwrap a library result into a criterion failure.
fn ok<T, E: std::fmt::Debug>(r: std::result::Result<T, E>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e:?}"))
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

// 1. Ice pole residue.

fn ice_pole_residue() -> Check {
    let cfg = ice_pole();
    let rule = ice_height();
    let rep = ok(residue_report(&cfg, &ice(), &rule, 1), "residue report")?;
    ensure!(rep.residues.len() == 1, "expected one hole, found {}", rep.residues.len());
    let h = &rep.residues[0];
    ensure!(h.residue == GroupElement::int(8), "residue {}", h.residue);
    for n in 1..=5 {
        let v = ok(residue(&rule, &cfg, &ok(h.loop_.repeat(n), "repeat")?), "n-fold loop")?;
        ensure!(v == GroupElement::int(8 * n as i64), "{n}-fold loop gives {v}");
    }
    // Concentric rings, conjugated to a common base point, are homotopic in G_1
    // and carry the same value.
    let region = ok(defect_region(&cfg, &ice(), 1), "defect region")?.0.to_hash_set();
    let inner = Rect::new(vec![-2, -2], vec![1, 1]);
    let first = ring(&inner, 1);
    let base = first.first().clone();
    let mut loops = vec![];
    for k in 1..=4 {
        let rk = ring(&inner, k);
        let to = Trail::axis_path(&base, rk.first());
        let conj = ok(to.concat(&rk).and_then(|t| t.concat(&to.reverse())), "conjugate")?;
        ensure!(ok(trails_homotopic(&first, &conj, &region), "homotopy")?, "ring {k} is not homotopic to ring 1");
        loops.push(conj);
    }
    for (k, lp) in loops.iter().enumerate() {
        let v = ok(evaluate_trail(&rule, &cfg, lp), "ring value")?;
        ensure!(v == GroupElement::int(8), "ring {} gives {v}", k + 1);
    }
    Ok(())
}

// 2. Path-tile residues.

fn path_residues() -> Check {
    let cfg = paths_poles();
    let rule = path_parity();
    let mut got: Vec<GroupElement> = vec![];
    for z in paths_pole_sites() {
        let lp = ring(&Rect::new(z.0.clone(), z.0.clone()), 1);
        got.push(ok(evaluate_trail(&rule, &cfg, &lp), "site ring")?);
    }
    got.sort();
    let mut want: Vec<GroupElement> = [[1, 1], [0, 1], [1, 0]].iter().map(|t| GroupElement::torsion(t.to_vec())).collect();
    want.sort();
    ensure!(got == want, "site residues {got:?}");
    let rep = ok(residue_report(&cfg, &paths(), &rule, 1), "residue report")?;
    let mut reported: Vec<GroupElement> = rep.residues.iter().map(|h| h.residue.clone()).collect();
    reported.sort();
    ensure!(reported == want, "reported residues {reported:?}");
    let all = ring(&Rect::new(vec![-1, -1], vec![9, 9]), 1);
    let v = ok(evaluate_trail(&rule, &cfg, &all), "enclosing ring")?;
    ensure!(v == GroupElement::torsion(vec![0, 0]), "enclosing loop gives {v}");
    Ok(())
}

// 3. Ice gap.

/// Projective components of `G_1`, each with the listed site it contains as
/// reference.
fn components_with(cfg: &Configuration, spec: &SftSpec, refs: &[Site]) -> std::result::Result<Vec<(Vec<Site>, Site)>, String> {
    let rep = ok(classify_defect(cfg, spec, 1), "classification")?;
    Ok(rep
        .components
        .iter()
        .filter(|c| c.projective)
        .filter_map(|c| refs.iter().find(|r| c.sites.contains(r)).map(|r| (c.sites.clone(), r.clone())))
        .collect())
}

fn ice_gap_values() -> Check {
    let cfg = ice_gap();
    ensure!(cfg.window().shape() == vec![41, 41], "window {:?}", cfg.window().shape());
    let (x0, y0) = ice_gap_points(0);
    let comps = components_with(&cfg, &ice(), &[x0, y0])?;
    ensure!(comps.len() == 2, "{} components", comps.len());
    for n in 1..=10 {
        let (x, y) = ice_gap_points(n);
        let v = ok(cgap(&cfg, &ice_height(), &x, &y, &comps), "cgap")?;
        ensure!(v == GroupElement::int(2 * n), "cgap at n = {n} is {v}");
    }
    let gap = ok(tilt_estimate(&cfg, &ice(), &ice_height(), 1, &TiltOptions::default()), "tilt")?;
    ensure!(gap.verdict == TiltVerdict::DivergingWindowLimited, "verdict {:?}", gap.verdict);
    Ok(())
}

// 4. Domino gap.

fn half(s: &Site) -> Site {
    Site(s.0.iter().map(|c| c.div_euclid(2)).collect())
}

fn domino_gap_values() -> Check {
    let (rule2, spec2) = ok(recode_block(&domino_rule(), &dominoes(), 2, RecodeExport::VhExponent, budget()), "recode")?;
    let cases: [(Configuration, fn(i64) -> (Site, Site), &str, i64); 2] =
        [(domino_gap(), domino_gap_points, "vhvh", 2), (domino_gap_opposite(), domino_gap_opposite_points, "hvhvhvhv", -4)];
    for (cfg, points, unit, per_step) in cases {
        // Free-product values on the original tiling.
        let (x0, y0) = points(0);
        let comps = components_with(&cfg, &dominoes(), &[x0.clone(), y0.clone()])?;
        ensure!(comps.len() == 2, "{} components", comps.len());
        for n in 1..=8 {
            let (x, y) = points(n);
            let v = ok(cgap(&cfg, &domino_rule(), &x, &y, &comps), "cgap")?;
            ensure!(v == GroupElement::word(&unit.repeat(n as usize)), "free-product cgap at n = {n} is {v}");
            let GroupElement::Word(w) = &v else { unreachable!() };
            ensure!(vh_exponent(w) == Some(per_step * n), "exponent of {w}");
        }
        // Integer values after recoding.
        let cfg2 = ok(spec2.encode_configuration(&cfg), "encode")?;
        let comps2 = components_with(&cfg2, &spec2, &[half(&x0), half(&y0)])?;
        ensure!(comps2.len() == 2, "{} recoded components", comps2.len());
        for n in 1..=8 {
            let (x, y) = points(n);
            let v = ok(cgap(&cfg2, &rule2, &half(&x), &half(&y), &comps2), "recoded cgap")?;
            ensure!(v == GroupElement::int(per_step * n), "recoded cgap at n = {n} is {v}");
        }
    }
    Ok(())
}

// 5. Ice-cube pole.

fn ice_cube_pole() -> Check {
    let cfg = ice_cubes_pole();
    let poles = ok(d_pole_search(&cfg, &ice_cubes(), &pin_cocycle(), 1), "pole search")?;
    ensure!(poles.len() == 1, "{} poles", poles.len());
    let shapes: Vec<Vec<usize>> = poles[0].shells.iter().map(|s| s.rect.shape()).collect();
    ensure!(shapes.starts_with(&[vec![3, 3, 3], vec![5, 5, 5]]), "shells {shapes:?}");
    for s in &poles[0].shells {
        ensure!(s.value == GroupElement::int(6), "shell {:?} gives {}", s.rect.shape(), s.value);
    }
    // The same value straight from the cochain on both boxes.
    for r in [1, 2] {
        let shell = boundary(&Chain::solid_box(&Rect::new(vec![-r; 3], vec![r; 3])));
        let v = ok(eval_equivariant(&pin_cocycle(), &cfg, &shell), "shell")?;
        ensure!(v == GroupElement::int(6), "direct shell of radius {r} gives {v}");
    }
    Ok(())
}

// 6. Conway-Lagarias.

fn conway_lagarias() -> Check {
    let Constraint::Wang { tiles } = &ice().constraint else { unreachable!() };
    let cl = ok(conway_lagarias_abelianized(tiles), "abelianized group")?;
    ensure!(cl.group == FgAbelianGroup::integers(), "group {}", cl.group);
    let tc = build_tile_complex(tiles);
    let arrow = |c: char| tiles.names().iter().position(|t| t.chars().nth(3) == Some(c));
    let (Some(up), Some(down)) = (arrow('^'), arrow('v')) else {
        return Err("no up/down tiles".into());
    };
    let south = |tile: usize| tc.class_of(tile, &[2, 0]).unwrap();
    let mut word = vec![0; cl.colours.len()];
    word[cl.colour(0, south(up)).unwrap()] += 1;
    word[cl.colour(0, south(down)).unwrap()] -= 1;
    let c = ok(cl.coords(&word), "coordinates")?;
    ensure!(c.len() == 1 && c[0].abs() == 1, "up minus down has coordinates {c:?}");
    Ok(())
}

// 7. Ext.

/// `G / nG` for `G = Z/o_1 + ... + Z/o_k`, by listing cosets.
fn quotient_by_multiples(orders: &[u64], n: u64) -> FgAbelianGroup {
    let mut elems: Vec<Vec<u64>> = vec![vec![]];
    for &o in orders {
        elems = elems.into_iter().flat_map(|v| (0..o).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    let times = |g: &[u64], k: u64| -> Vec<u64> { g.iter().zip(orders).map(|(&x, &o)| x * k % o).collect() };
    let add = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).zip(orders).map(|((x, y), o)| (x + y) % o).collect() };
    let multiples: BTreeSet<Vec<u64>> = elems.iter().map(|g| times(g, n)).collect();
    let mut cosets: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut profile: HashMap<u64, usize> = HashMap::new();
    for g in &elems {
        let rep = multiples.iter().map(|m| add(g, m)).min().unwrap();
        if !cosets.insert(rep) {
            continue;
        }
        let order = (1..).find(|&k| multiples.contains(&times(g, k))).unwrap();
        *profile.entry(order).or_default() += 1;
    }
    common::group_with_profile(&profile).expect("a group has this profile")
}

fn ext_groups() -> Check {
    let mut groups: Vec<Vec<u64>> = (1..=36).flat_map(common::abelian_groups_of_order).collect();
    groups.sort();
    for g in &groups {
        let gg = FgAbelianGroup::new(0, g);
        for r in 0..=3 {
            for free in [0, 2] {
                let target = FgAbelianGroup::new(free, g);
                ensure!(ext_group(&FgAbelianGroup::free(r), &target).is_trivial(), "Ext(Z^{r}, {target}) is not zero");
            }
        }
        for n in 1..=36 {
            let want = quotient_by_multiples(g, n);
            let got = ext_group(&FgAbelianGroup::cyclic(n), &gg);
            ensure!(got == want, "Ext(Z/{n}, {gg}) = {got}, expected {want}");
        }
    }
    // Mixed H: the torsion summands contribute independently and the free part not at all.
    for h in groups.iter().filter(|h| h.iter().product::<u64>() <= 12) {
        for g in groups.iter().filter(|g| g.iter().product::<u64>() <= 12) {
            let want = h.iter().fold(FgAbelianGroup::trivial(), |acc, &n| acc.direct_sum(&quotient_by_multiples(g, n)));
            let got = ext_group(&FgAbelianGroup::new(1, h), &FgAbelianGroup::new(0, g));
            ensure!(got == want, "Ext(Z + {h:?}, {g:?}) = {got}, expected {want}");
        }
    }
    // Free coefficients: Ext(Z/n, Z) = Z/n.
    for n in 1..=36 {
        ensure!(ext_group(&FgAbelianGroup::cyclic(n), &FgAbelianGroup::integers()) == FgAbelianGroup::cyclic(n), "Ext(Z/{n}, Z)");
    }
    Ok(())
}

// 8. Cocycle properties.

const CASES: usize = 1000;

fn admissible_pool(spec: &SftSpec, periods: &[i64], seeds: std::ops::Range<u64>) -> std::result::Result<Vec<Configuration>, String> {
    seeds.map(|s| ok(random_periodic(spec, periods, s), "periodic sample")).collect()
}

/// Periodic samples cropped to a window and damaged at a few random sites.
fn damaged_pool(spec: &SftSpec, side: i64, count: u64, rng: &mut ChaCha8Rng) -> std::result::Result<Vec<Configuration>, String> {
    let rect = Rect::new(vec![-side; spec.dim], vec![side; spec.dim]);
    let mut out = vec![];
    for s in 0..count {
        // Even periods suit every bundled shift, dominoes included.
        let periods = vec![2 * rng.gen_range(2..5); spec.dim];
        let mut cfg = ok(ok(random_periodic(spec, &periods, 1000 + s), "periodic sample")?.crop(&rect), "crop")?;
        for _ in 0..rng.gen_range(0..5) {
            let z = common::random_site(rng, &rect);
            ok(cfg.set(&z, rng.gen_range(0..spec.alphabet_size()) as Sym), "set")?;
        }
        out.push(cfg);
    }
    Ok(out)
}

fn cocycle_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let planar = [(ice_height(), ice()), (domino_rule(), dominoes()), (path_parity(), paths())];
    let pools: Vec<Vec<Configuration>> =
        planar.iter().map(|(_, spec)| admissible_pool(spec, &[4, 6], 0..8)).collect::<std::result::Result<_, _>>()?;

    // The cocycle equation C(y + z, a) = C(y, σ^z a) C(z, a).
    for case in 0..CASES {
        let k = case % planar.len();
        let (rule, _) = &planar[k];
        let cfg = &pools[k][rng.gen_range(0..pools[k].len())];
        let o = Site::origin(2);
        let y = Site::from([rng.gen_range(-6..=6), rng.gen_range(-6..=6)]);
        let z = Site::from([rng.gen_range(-6..=6), rng.gen_range(-6..=6)]);
        let lhs = ok(evaluate_trail(rule, cfg, &Trail::axis_path(&o, &y.add(&z))), "C(y+z)")?;
        let cy = ok(evaluate_trail(rule, &cfg.shift(&z), &Trail::axis_path(&o, &y)), "C(y, shifted)")?;
        let cz = ok(evaluate_trail(rule, cfg, &Trail::axis_path(&o, &z)), "C(z)")?;
        let rhs = ok(rule.group.mul(&cy, &cz), "product")?;
        ensure!(lhs == rhs, "{}: cocycle equation fails at y = {y}, z = {z}", rule.name);
    }

    // Trail-homotopy invariance on admissible configurations.
    let rect = Rect::new(vec![-8, -8], vec![8, 8]);
    for case in 0..CASES {
        let k = case % planar.len();
        let (rule, _) = &planar[k];
        let cfg = &pools[k][rng.gen_range(0..pools[k].len())];
        let y = common::random_site(&mut rng, &rect);
        let z = common::random_site(&mut rng, &rect);
        let a = ok(evaluate_trail(rule, cfg, &common::random_trail(&mut rng, &y, &z, &rect)), "trail")?;
        let b = ok(evaluate_trail(rule, cfg, &common::random_trail(&mut rng, &y, &z, &rect)), "trail")?;
        ensure!(a == b, "{}: two trails from {y} to {z} disagree: {a} vs {b}", rule.name);
    }

    // Coboundaries: b(end) - b(start) on any trail, zero on loops, on damaged windows.
    let damaged = damaged_pool(&ice(), 10, 20, &mut rng)?;
    for case in 0..CASES {
        let support = if case % 2 == 0 { vec![Site::origin(2)] } else { vec![Site::origin(2), Site::from([1, 0])] };
        let n = 6usize.pow(support.len() as u32);
        let table: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let b = ok(
            LocalMap::from_fn(support, 6, |p| GroupElement::int(table[p.iter().fold(0, |acc, &s| acc * 6 + s as usize)])),
            "transfer",
        )?;
        let cob = coboundary_rule(&b, GroupSpec::integers());
        let cfg = &damaged[rng.gen_range(0..damaged.len())];
        let rect = cfg.window().shrink(1);
        let y = common::random_site(&mut rng, &rect);
        let lp = common::random_loop(&mut rng, &y, &rect);
        let v = ok(evaluate_trail(&cob, cfg, &lp), "loop")?;
        ensure!(v == GroupElement::int(0), "coboundary loop value {v}");
        let z = common::random_site(&mut rng, &rect);
        let t = common::random_trail(&mut rng, &y, &z, &rect);
        let get = |s: &Site| cfg.get(s);
        let want = GroupElement::int(
            ok(b.eval(&z, &get), "b(z)")?.as_int().unwrap() - ok(b.eval(&y, &get), "b(y)")?.as_int().unwrap(),
        );
        ensure!(ok(evaluate_trail(&cob, cfg, &t), "trail")? == want, "coboundary trail value");
    }

    // Pullback: C on Φ(a) equals Φ_*C on a, for random table automata on ice.
    let sources: Vec<Configuration> = [ice_pole(), ice_gap()].into_iter().chain(damaged.iter().cloned()).collect();
    let neighbourhoods =
        [vec![Site::origin(2), Site::from([1, 0])], vec![Site::from([0, -1]), Site::origin(2)], vec![Site::from([-1, 1])]];
    for case in 0..CASES {
        let nb = neighbourhoods[case % neighbourhoods.len()].clone();
        let n = 6usize.pow(nb.len() as u32);
        let mut entries = vec![];
        for i in 0..n {
            let pattern: Vec<Sym> = (0..nb.len()).rev().map(|d| (i / 6usize.pow(d as u32) % 6) as Sym).collect();
            entries.push((pattern, rng.gen_range(0..6) as Sym));
        }
        let ca = ok(CaRule::new(format!("random-{case}"), 2, 6, nb, LocalRule::Table { entries, default: None }), "automaton")?;
        let a = &sources[rng.gen_range(0..sources.len())];
        let image = ok(apply(&ca, a), "apply")?;
        let pulled = ok(pullback(&ice_height(), &ca), "pullback")?;
        let rect = image.window().shrink(1);
        let y = common::random_site(&mut rng, &rect);
        let lp = common::random_loop(&mut rng, &y, &rect);
        let on_image = ok(evaluate_trail(&ice_height(), &image, &lp), "on image")?;
        let on_source = ok(evaluate_trail(&pulled, a, &lp), "pulled back")?;
        ensure!(on_image == on_source, "pullback identity fails for {}: {on_image} vs {on_source}", ca.name);
    }

    // Conversions between dynamical, equivariant and two-point forms.
    let abelian = [(ice_height(), ice(), 0usize), (path_parity(), paths(), 2)];
    let converted: Vec<(EquivariantCochainRule, CocycleRule)> = abelian
        .iter()
        .map(|(rule, spec, _)| {
            let eq = ok(to_equivariant(rule, spec, budget()), "to equivariant")?;
            let back = ok(from_equivariant(&eq), "from equivariant")?;
            Ok((eq, back))
        })
        .collect::<std::result::Result<_, String>>()?;
    for case in 0..CASES {
        let k = case % abelian.len();
        let (rule, _, pool) = &abelian[k];
        let (eq, back) = &converted[k];
        let cfg = &pools[*pool][rng.gen_range(0..pools[*pool].len())];
        let rect = Rect::new(vec![-8, -8], vec![8, 8]);
        let y = common::random_site(&mut rng, &rect);
        let z = common::random_site(&mut rng, &rect);
        let t = common::random_trail(&mut rng, &y, &z, &rect);
        let direct = ok(evaluate_trail(rule, cfg, &t), "trail")?;
        let round = ok(evaluate_trail(back, cfg, &t), "round trip")?;
        let chain = ok(eval_equivariant(eq, cfg, &Chain::from_trail(&t)), "chain")?;
        let two = ok(to_two_point(rule, cfg).value(&y, &z), "two-point")?;
        ensure!(direct == round && direct == chain && direct == two, "{}: {direct} {round} {chain} {two}", rule.name);
    }
    Ok(())
}

// 9. Defect field.

/// Whether the symbol pair `(a, b)` at `z`, `z + e_axis` violates the shift.
fn pair_bad(spec: &SftSpec, axis: usize, a: Sym, b: Sym) -> bool {
    match &spec.constraint {
        Constraint::Wang { tiles } => !tiles.matches(axis, a, b),
        // The golden mean: no two adjacent 1s.
        _ => a == 1 && b == 1,
    }
}

fn bad_pairs(spec: &SftSpec, cfg: &Configuration) -> Vec<(Site, Site)> {
    let w = cfg.window();
    let mut out = vec![];
    for z in w.sites() {
        for axis in 0..w.dim() {
            let n = z.step(axis, 1);
            if w.contains(&n) && pair_bad(spec, axis, cfg.get(&z).unwrap(), cfg.get(&n).unwrap()) {
                out.push((z.clone(), n));
            }
        }
    }
    out
}

/// The defect field from its definition: the largest `r` for which the ball
/// `B(z, r)` contains no violating pair.
fn field_by_definition(cfg: &Configuration, bad: &[(Site, Site)]) -> Vec<FieldValue> {
    let w = cfg.window();
    w.sites()
        .iter()
        .map(|z| {
            let fits = |r: i64| (0..w.dim()).all(|d| z.0[d] - r >= w.lo[d] && z.0[d] + r <= w.hi[d]);
            let clean = |r: i64| !bad.iter().any(|(u, v)| z.linf(u) <= r && z.linf(v) <= r);
            let mut r = 0;
            loop {
                // A known violation settles the value even past the window edge.
                if !clean(r + 1) {
                    return FieldValue::Exact(r as u32);
                }
                if !fits(r + 1) {
                    return FieldValue::AtLeast(r as u32);
                }
                r += 1;
            }
        })
        .collect()
}

/// `F(z) = R - 1 + d(z, X)` with `X` the centres of `R`-windows holding a
/// violating pair, whether or not the whole window is known.
fn field_by_distance(spec: &SftSpec, cfg: &Configuration, bad: &[(Site, Site)]) -> Vec<Option<u32>> {
    let w = cfg.window();
    let big_r = spec.radius as i64;
    let centres: Vec<Site> = w
        .sites()
        .into_iter()
        .filter(|x| bad.iter().any(|(u, v)| x.linf(u) <= big_r && x.linf(v) <= big_r))
        .collect();
    w.sites()
        .iter()
        .map(|z| centres.iter().map(|x| z.linf(x)).min().map(|d| (big_r - 1 + d) as u32))
        .collect()
}

fn field_matches_oracles(spec: &SftSpec, cfg: &Configuration) -> Check {
    let field = ok(defect_field(cfg, spec), "defect field")?;
    let bad = bad_pairs(spec, cfg);
    let by_def = field_by_definition(cfg, &bad);
    let by_dist = field_by_distance(spec, cfg, &bad);
    let sites = cfg.window().sites();
    for (i, z) in sites.iter().enumerate() {
        let got = field.values[i];
        ensure!(got == by_def[i], "at {z}: field {got:?}, definition {:?}", by_def[i]);
        if let (FieldValue::Exact(v), Some(d)) = (got, by_dist[i]) {
            ensure!(v == d, "at {z}: field {v}, distance formula {d}");
        }
        for axis in 0..spec.dim {
            if let Some(n) = field.get(&z.step(axis, 1)) {
                if got.is_exact() && n.is_exact() {
                    ensure!((got.lower() as i64 - n.lower() as i64).abs() <= 1, "Lipschitz bound fails at {z}");
                }
            }
        }
    }
    Ok(())
}

fn defect_field_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for spec in [ice(), paths(), dominoes()] {
        for cfg in damaged_pool(&spec, 7, 150, &mut rng)? {
            field_matches_oracles(&spec, &cfg)?;
        }
    }
    // Energy drop along every bundled trajectory.
    let mut trajectories = 0;
    for name in FIXTURE_PROJECTS {
        let p = ok(fixture_project(name), "fixture")?;
        for nc in &p.configurations {
            field_matches_oracles(&p.sft, &nc.configuration)?;
            for ca in &p.cas {
                let orbit = ok(evolve(ca, &nc.configuration, p.analysis.steps), "evolve")?;
                let q = ca.radius() as i64;
                for pair in orbit.windows(2) {
                    let rep = ok(energy_drop_check(ca, &p.sft, &pair[0]), "energy drop")?;
                    ensure!(rep.holds && rep.unflawed_inclusion, "{name}/{}/{}: {rep:?}", nc.name, ca.name);
                    // Independent recount of F(Φ(a)) >= F(a) - q.
                    let before = field_by_definition(&pair[0], &bad_pairs(&p.sft, &pair[0]));
                    let after = field_by_definition(&pair[1], &bad_pairs(&p.sft, &pair[1]));
                    for (j, z) in pair[1].window().sites().iter().enumerate() {
                        let i = pair[0].window().index_of(z).unwrap();
                        if let (FieldValue::Exact(b), FieldValue::Exact(a)) = (before[i], after[j]) {
                            ensure!(a as i64 >= b as i64 - q, "{name}/{}/{}: drop at {z}", nc.name, ca.name);
                        }
                    }
                    trajectories += 1;
                }
                if let Ok(rule) = p.pick_cocycle(None) {
                    let rep = ok(persistence_experiment(&nc.configuration, &p.sft, rule, ca, p.analysis.steps, 1), "persistence")?;
                    ensure!(rep.drop_bound_ok, "{name}/{}/{}: persistence drop bound", nc.name, ca.name);
                }
            }
        }
    }
    ensure!(trajectories > 0, "no trajectories checked");
    Ok(())
}

// 10. Invariant against dynamical cohomology.

fn invariant_vs_dynamical() -> Check {
    let spec = golden_mean();
    for n in [2u64, 3, 4] {
        let want = common::brute_force_h1(&spec, n);
        let got = ok(invariant_cohomology(&spec, 1, 1, &FgAbelianGroup::cyclic(n), budget()), "invariant cohomology")?;
        ensure!(got == want, "Z/{n}: invariant {got}, enumerated {want}");
    }
    Ok(())
}

// 11. Chain maps.

fn chain_maps() -> Check {
    for spec in [ice(), dominoes(), paths(), ice_cubes()] {
        let Constraint::Wang { tiles } = &spec.constraint else { unreachable!() };
        ensure!(build_tile_complex(tiles).boundary_squares_vanish(), "∂² ≠ 0 on a Wang complex");
    }
    for (spec, r) in [(golden_mean(), 1), (golden_mean(), 2), (golden_mean(), 3), (full_shift(1, 2), 1), (ice(), 0), (dominoes(), 0)] {
        let cm = ok(connecting_map(&spec, r, budget()), "connecting map")?;
        ensure!(cm.source.boundary_squares_vanish() && cm.target.boundary_squares_vanish(), "∂² ≠ 0 at radius {r}");
        ensure!(cm.commutes_with_boundary(), "connecting map at radius {r} is not a chain map");
    }
    // The ladder for every bundled automaton, from radius r + 1 + q down to r.
    let mut checked = vec![];
    let mut out_of_budget = vec![];
    for name in FIXTURE_PROJECTS {
        let p = ok(fixture_project(name), "fixture")?;
        let r = if p.sft.dim == 1 { 1 } else { 0 };
        for ca in &p.cas {
            let label = format!("{name}/{}", ca.name);
            let cm = match ca_chain_map(&p.sft, ca, r, budget()) {
                Err(Error::BudgetExceeded(_)) => {
                    out_of_budget.push(label);
                    continue;
                }
                other => ok(other, "automaton chain map")?,
            };
            ensure!(cm.commutes_with_boundary(), "{label} is not a chain map");
            match ladder_commutes(&p.sft, ca, r, budget()) {
                Err(Error::BudgetExceeded(_)) => out_of_budget.push(label),
                other => {
                    ensure!(ok(other, "ladder")?, "{label}: ladder fails");
                    checked.push(label);
                }
            }
        }
    }
    ensure!(out_of_budget.is_empty(), "{}: ladder out of budget for {}", BUDGET_LIMIT, out_of_budget.join(", "));
    ensure!(!checked.is_empty(), "no ladders checked");
    Ok(())
}

/// Marker for a criterion stopped by the search budget rather than refuted.
const BUDGET_LIMIT: &str = "budget-limited";

struct Criterion {
    title: &'static str,
    limit_secs: f64,
    run: fn() -> Check,
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { title: "ice pole residue", limit_secs: 1.0, run: ice_pole_residue },
        Criterion { title: "path-tile residues", limit_secs: 1.0, run: path_residues },
        Criterion { title: "ice gap", limit_secs: 5.0, run: ice_gap_values },
        Criterion { title: "domino gap after recoding", limit_secs: 5.0, run: domino_gap_values },
        Criterion { title: "ice-cube pole", limit_secs: 5.0, run: ice_cube_pole },
        Criterion { title: "Conway-Lagarias group", limit_secs: 1.0, run: conway_lagarias },
        Criterion { title: "Ext formula", limit_secs: 10.0, run: ext_groups },
        Criterion { title: "cocycle properties", limit_secs: 60.0, run: cocycle_properties },
        Criterion { title: "defect field", limit_secs: 30.0, run: defect_field_suite },
        Criterion { title: "invariant vs dynamical cohomology", limit_secs: 60.0, run: invariant_vs_dynamical },
        Criterion { title: "chain-map integrity", limit_secs: 30.0, run: chain_maps },
    ];
    let mut failed = vec![];
    let mut limited = vec![];
    writeln!(std::io::stdout().lock()).unwrap();
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = outcome.and_then(|()| {
            if secs <= c.limit_secs {
                Ok(())
            } else {
                Err(format!("over the {}s limit", c.limit_secs))
            }
        });
        let line = match &outcome {
            Ok(()) => format!("PASS {:>2} {} ({secs:.2}s)", i + 1, c.title),
            Err(e) => format!("FAIL {:>2} {} ({secs:.2}s): {e}", i + 1, c.title),
        };
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
        match outcome {
            Err(e) if e.starts_with(BUDGET_LIMIT) => limited.push(i + 1),
            Err(_) => failed.push(i + 1),
            Ok(()) => {}
        }
    }
    writeln!(std::io::stdout().lock(), "budget-limited criteria: {limited:?}").unwrap();
    // A budget-limited criterion is reported as failing but does not fail the
    // build; anything refuted does.
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
