//! Oracles and generators shared by integration tests.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use defectlab::groups::FgAbelianGroup;
use defectlab::lattice::{Rect, Site, Trail};
use defectlab::symbolic::{SearchBudget, SftSpec, Sym};
use rand::Rng;

/// Number of elements of each order in `Z/o_1 + ... + Z/o_k`.
pub fn element_orders(orders: &[u64]) -> HashMap<u64, usize> {
    let mut elems: Vec<Vec<u64>> = vec![vec![]];
    for &o in orders {
        elems = elems.into_iter().flat_map(|v| (0..o).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    let mut counts = HashMap::new();
    for e in elems {
        let ord = e.iter().zip(orders).map(|(&x, &o)| o / gcd(x, o)).fold(1, |a, b| a / gcd(a, b) * b);
        *counts.entry(ord).or_default() += 1;
    }
    counts
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every invariant-factor list `d_1 | d_2 | ...` with product `n`.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, prev: u64, acc: Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc);
            return;
        }
        for d in (2..=rest).filter(|d| rest % d == 0 && d % prev == 0) {
            go(rest / d, d, [acc.clone(), vec![d]].concat(), out);
        }
    }
    let mut out = vec![];
    go(n, 1, vec![], &mut out);
    out
}

/// Finite abelian group with the given profile of element orders, found by
/// trying every invariant-factor list of the right order.
pub fn group_with_profile(profile: &HashMap<u64, usize>) -> Option<FgAbelianGroup> {
    let total: usize = profile.values().sum();
    abelian_groups_of_order(total as u64)
        .into_iter()
        .find(|orders| &element_orders(orders) == profile)
        .map(|orders| FgAbelianGroup::new(0, &orders))
}

/// Dynamical cohomology `H^1` of a one-dimensional radius-1 shift with
/// coefficients `Z/n`, by enumeration: every function of the radius-1 window
/// is a cocycle, and two are cohomologous when they differ by
/// `b(x_0 x_1) - b(x_{-1} x_0)` for a function `b` of two-letter words.
pub fn brute_force_h1(spec: &SftSpec, n: u64) -> FgAbelianGroup {
    let blocks = spec.admissible_blocks(1, SearchBudget::default()).unwrap();
    let mut pairs: Vec<Vec<Sym>> = blocks
        .iter()
        .flat_map(|b| [b[0..2].to_vec(), b[1..3].to_vec()])
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    pairs.sort();
    let all = |len: usize| -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    };
    let coboundaries: HashSet<Vec<u64>> = all(pairs.len())
        .into_iter()
        .map(|b| {
            let val = |p: &[Sym]| b[pairs.iter().position(|q| q == p).unwrap()];
            blocks.iter().map(|x| (val(&x[1..3]) + n - val(&x[0..2])) % n).collect()
        })
        .collect();
    let add = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| (x + y) % n).collect::<Vec<_>>();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut profile: HashMap<u64, usize> = HashMap::new();
    for c in all(blocks.len()) {
        if seen.contains(&c) {
            continue;
        }
        for b in &coboundaries {
            seen.insert(add(&c, b));
        }
        let mut order = 1;
        let mut m = c.clone();
        while !coboundaries.contains(&m) {
            m = add(&m, &c);
            order += 1;
        }
        *profile.entry(order).or_default() += 1;
    }
    group_with_profile(&profile).expect("some group has this profile")
}

/// Random lattice trail from `y` to `z` staying inside `rect`: a biased walk
/// with detours, finished by an axis path.
pub fn random_trail(rng: &mut impl Rng, y: &Site, z: &Site, rect: &Rect) -> Trail {
    let dim = y.dim();
    let mut sites = vec![y.clone()];
    let mut cur = y.clone();
    for _ in 0..rng.gen_range(0..40) {
        let axis = rng.gen_range(0..dim);
        let toward = (z.0[axis] - cur.0[axis]).signum();
        let sign = if toward != 0 && rng.gen_bool(0.6) { toward } else if rng.gen_bool(0.5) { 1 } else { -1 };
        let next = cur.step(axis, sign);
        if rect.contains(&next) {
            sites.push(next.clone());
            cur = next;
        }
    }
    let tail = Trail::axis_path(&cur, z);
    sites.extend(tail.sites()[1..].iter().cloned());
    Trail::new(sites).unwrap()
}

/// Random closed trail through `y` inside `rect`.
pub fn random_loop(rng: &mut impl Rng, y: &Site, rect: &Rect) -> Trail {
    let z = random_site(rng, rect);
    random_trail(rng, y, &z, rect).concat(&random_trail(rng, &z, y, rect)).unwrap()
}

pub fn random_site(rng: &mut impl Rng, rect: &Rect) -> Site {
    Site((0..rect.dim()).map(|d| rng.gen_range(rect.lo[d]..=rect.hi[d])).collect())
}
