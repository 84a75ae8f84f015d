//! Independent ground truth: brute-force searches and coloring checkers.
//!
//! Everything here is deliberately simple and exhaustive so it can serve as
//! the oracle side of solver/oracle agreement tests. Searches use id-ordered
//! DFS with unit-propagation pruning and are capped at desk scale.

use std::collections::BTreeSet;

use crate::coloring::{Color, FourColoring, TwoColoring};
use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};

/// Size caps for the exhaustive searches. Caps are configuration, not
/// constants; exceeding one is a clean `TooLarge` error.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub two_coloring_cap: usize,
    pub tds_cap_k2: usize,
    pub tds_cap_k3plus: usize,
    pub min_d3_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            two_coloring_cap: 30,
            tds_cap_k2: 30,
            tds_cap_k3plus: 20,
            min_d3_cap: 18,
        }
    }
}

/// Result of checking the satisfaction condition on a set of targets.
#[derive(Debug, Clone)]
pub struct SatisfactionReport {
    pub satisfied: bool,
    /// (vertex, color it is missing) for each violated target.
    pub violations: Vec<(usize, Color)>,
}

/// Check that every target vertex sees both colors in its open neighborhood.
pub fn check_coupon(
    g: &EmbeddedGraph,
    targets: &BTreeSet<usize>,
    f: &TwoColoring,
) -> Result<SatisfactionReport> {
    for v in g.vertices() {
        if f.get(v).is_none() {
            return Err(Error::PartialColoring(v));
        }
    }
    let mut violations = Vec::new();
    for &v in targets {
        let mut seen_a = false;
        let mut seen_b = false;
        for &w in g.neighbors(v) {
            match f.get(w).unwrap() {
                Color::A => seen_a = true,
                Color::B => seen_b = true,
            }
        }
        if !seen_a {
            violations.push((v, Color::A));
        } else if !seen_b {
            violations.push((v, Color::B));
        }
    }
    Ok(SatisfactionReport {
        satisfied: violations.is_empty(),
        violations,
    })
}

/// The set of 3⁺-vertices together with the declared specials: the targets the
/// solver must satisfy.
pub fn theorem_targets(g: &EmbeddedGraph, specials: &[usize]) -> BTreeSet<usize> {
    let mut t: BTreeSet<usize> = g.vertices().filter(|&v| g.degree(v) >= 3).collect();
    t.extend(specials.iter().copied());
    t
}

/// Exhaustive search for a two-coloring satisfying every target, or `None`
/// when no such coloring exists. Deterministic: vertices are assigned in
/// ascending id order and color `a` is tried before `b`.
pub fn exhaustive_two_coloring(
    g: &EmbeddedGraph,
    targets: &BTreeSet<usize>,
    config: &OracleConfig,
) -> Result<Option<TwoColoring>> {
    let n = g.n();
    if n > config.two_coloring_cap {
        return Err(Error::TooLarge {
            n,
            cap: config.two_coloring_cap,
        });
    }
    let verts: Vec<usize> = g.vertices().collect();
    let bound = g.id_bound();
    let mut order_of = vec![usize::MAX; bound];
    for (i, &v) in verts.iter().enumerate() {
        order_of[v] = i;
    }
    let mut assigned: Vec<Option<Color>> = vec![None; bound];

    // Prune: a target whose neighbors are all assigned must already see both
    // colors. Only targets adjacent to the just-assigned vertex can change.
    fn target_viable(
        g: &EmbeddedGraph,
        targets: &BTreeSet<usize>,
        assigned: &[Option<Color>],
        v: usize,
    ) -> bool {
        if !targets.contains(&v) {
            return true;
        }
        let mut seen_a = false;
        let mut seen_b = false;
        let mut unassigned = 0usize;
        for &w in g.neighbors(v) {
            match assigned[w] {
                Some(Color::A) => seen_a = true,
                Some(Color::B) => seen_b = true,
                None => unassigned += 1,
            }
        }
        let missing = (!seen_a) as usize + (!seen_b) as usize;
        missing <= unassigned
    }

    fn dfs(
        g: &EmbeddedGraph,
        targets: &BTreeSet<usize>,
        verts: &[usize],
        assigned: &mut Vec<Option<Color>>,
        depth: usize,
    ) -> bool {
        if depth == verts.len() {
            return true;
        }
        let v = verts[depth];
        for c in [Color::A, Color::B] {
            assigned[v] = Some(c);
            let ok = target_viable(g, targets, assigned, v)
                && g.neighbors(v)
                    .iter()
                    .all(|&w| target_viable(g, targets, assigned, w));
            if ok && dfs(g, targets, verts, assigned, depth + 1) {
                return true;
            }
        }
        assigned[v] = None;
        false
    }

    if dfs(g, targets, &verts, &mut assigned, 0) {
        let mut f = TwoColoring::new();
        for &v in &verts {
            f.set(v, assigned[v].unwrap());
        }
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

/// Decide whether `g` has `k` pairwise disjoint total dominating sets.
/// Vertices may be left out of all `k` sets.
pub fn has_k_disjoint_tds(g: &EmbeddedGraph, k: usize, config: &OracleConfig) -> Result<bool> {
    let n = g.n();
    let cap = if k >= 3 {
        config.tds_cap_k3plus
    } else {
        config.tds_cap_k2
    };
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if k == 0 {
        return Ok(true);
    }
    let verts: Vec<usize> = g.vertices().collect();
    let bound = g.id_bound();
    // assignment: 0 = spare, 1..=k = set index
    let mut assigned: Vec<Option<u8>> = vec![None; bound];

    fn viable(g: &EmbeddedGraph, k: usize, assigned: &[Option<u8>], v: usize) -> bool {
        // every vertex must end with a neighbor in each of the k sets
        let mut seen = vec![false; k + 1];
        let mut unassigned = 0usize;
        for &w in g.neighbors(v) {
            match assigned[w] {
                Some(c) => seen[c as usize] = true,
                None => unassigned += 1,
            }
        }
        let missing = (1..=k).filter(|&c| !seen[c]).count();
        missing <= unassigned
    }

    fn dfs(
        g: &EmbeddedGraph,
        k: usize,
        verts: &[usize],
        assigned: &mut Vec<Option<u8>>,
        depth: usize,
    ) -> bool {
        if depth == verts.len() {
            return true;
        }
        let v = verts[depth];
        for c in 0..=k as u8 {
            assigned[v] = Some(c);
            let ok = viable(g, k, assigned, v)
                && g.neighbors(v).iter().all(|&w| viable(g, k, assigned, w));
            if ok && dfs(g, k, verts, assigned, depth + 1) {
                return true;
            }
        }
        assigned[v] = None;
        false
    }

    // every vertex needs k distinct set-neighbors, so degree >= k is necessary
    if verts.iter().any(|&v| g.degree(v) < k) {
        return Ok(false);
    }
    Ok(dfs(g, k, &verts, &mut assigned, 0))
}

/// Check a fair four-coloring: every protected edge bichromatic and every
/// vertex not spanned by `protected` sees at least three colors.
pub fn check_fair(
    g: &EmbeddedGraph,
    protected: &BTreeSet<(usize, usize)>,
    f: &FourColoring,
) -> bool {
    let mut spanned = BTreeSet::new();
    for &(u, v) in protected {
        spanned.insert(u);
        spanned.insert(v);
        match (f.get(u), f.get(v)) {
            (Some(cu), Some(cv)) if cu != cv => {}
            _ => return false,
        }
    }
    for v in g.vertices() {
        if spanned.contains(&v) {
            continue;
        }
        let mut seen = BTreeSet::new();
        for &w in g.neighbors(v) {
            match f.get(w) {
                Some(c) => {
                    seen.insert(c);
                }
                None => return false,
            }
        }
        if seen.len() < 3 {
            return false;
        }
    }
    true
}

/// Check the min{d(v),3}-colors condition: every vertex sees at least
/// min(deg, 3) distinct colors in its open neighborhood.
pub fn check_min_d3_coloring(g: &EmbeddedGraph, f: &FourColoring) -> bool {
    for v in g.vertices() {
        let mut seen = BTreeSet::new();
        for &w in g.neighbors(v) {
            match f.get(w) {
                Some(c) => {
                    seen.insert(c);
                }
                None => return false,
            }
        }
        if seen.len() < g.degree(v).min(3) {
            return false;
        }
    }
    true
}

/// Exhaustive search for a four-coloring satisfying [`check_min_d3_coloring`].
pub fn search_min_d3_coloring(
    g: &EmbeddedGraph,
    config: &OracleConfig,
) -> Result<Option<FourColoring>> {
    let n = g.n();
    if n > config.min_d3_cap {
        return Err(Error::TooLarge {
            n,
            cap: config.min_d3_cap,
        });
    }
    let verts: Vec<usize> = g.vertices().collect();
    let bound = g.id_bound();
    let mut assigned: Vec<Option<u8>> = vec![None; bound];

    fn viable(g: &EmbeddedGraph, assigned: &[Option<u8>], v: usize) -> bool {
        let mut seen = [false; 5];
        let mut unassigned = 0usize;
        for &w in g.neighbors(v) {
            match assigned[w] {
                Some(c) => seen[c as usize] = true,
                None => unassigned += 1,
            }
        }
        let distinct = (1..=4).filter(|&c| seen[c]).count();
        distinct + unassigned >= g.degree(v).min(3)
    }

    fn dfs(
        g: &EmbeddedGraph,
        verts: &[usize],
        assigned: &mut Vec<Option<u8>>,
        depth: usize,
    ) -> bool {
        if depth == verts.len() {
            return true;
        }
        let v = verts[depth];
        for c in 1..=4u8 {
            assigned[v] = Some(c);
            let ok = viable(g, assigned, v)
                && g.neighbors(v).iter().all(|&w| viable(g, assigned, w));
            if ok && dfs(g, verts, assigned, depth + 1) {
                return true;
            }
        }
        assigned[v] = None;
        false
    }

    if dfs(g, &verts, &mut assigned, 0) {
        let mut f = FourColoring::new();
        for &v in &verts {
            f.set(v, assigned[v].unwrap());
        }
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Family};
    use std::collections::BTreeMap;

    fn all_targets(g: &EmbeddedGraph) -> BTreeSet<usize> {
        g.vertices().collect()
    }

    fn coloring(pairs: &[(usize, Color)]) -> TwoColoring {
        TwoColoring::from_map(pairs.iter().copied().collect::<BTreeMap<_, _>>())
    }

    #[test]
    fn check_coupon_k4() {
        let g = named(Family::K4, 0).unwrap();
        let f = coloring(&[(0, Color::A), (1, Color::A), (2, Color::B), (3, Color::B)]);
        let rep = check_coupon(&g, &all_targets(&g), &f).unwrap();
        assert!(rep.satisfied);
    }

    #[test]
    fn check_coupon_k3_violation() {
        let g = named(Family::K3, 0).unwrap();
        let f = coloring(&[(0, Color::A), (1, Color::B), (2, Color::B)]);
        let rep = check_coupon(&g, &all_targets(&g), &f).unwrap();
        assert!(!rep.satisfied);
        assert_eq!(rep.violations, vec![(0, Color::A)]);
    }

    #[test]
    fn check_coupon_rejects_partial() {
        let g = named(Family::K3, 0).unwrap();
        let f = coloring(&[(0, Color::A), (1, Color::B)]);
        assert!(matches!(
            check_coupon(&g, &all_targets(&g), &f),
            Err(Error::PartialColoring(2))
        ));
    }

    #[test]
    fn three_sun_has_no_full_coupon_coloring() {
        let g = named(Family::ThreeSun, 0).unwrap();
        let cfg = OracleConfig::default();
        let res = exhaustive_two_coloring(&g, &all_targets(&g), &cfg).unwrap();
        assert!(res.is_none());
    }

    #[test]
    fn three_sun_theorem_targets_are_satisfiable() {
        let g = named(Family::ThreeSun, 0).unwrap();
        let cfg = OracleConfig::default();
        // 3⁺-vertices {0,2,4} plus two specials {1,3}
        let targets: BTreeSet<usize> = [0, 2, 4, 1, 3].into_iter().collect();
        let res = exhaustive_two_coloring(&g, &targets, &cfg).unwrap();
        let f = res.expect("targets must be satisfiable");
        let rep = check_coupon(&g, &targets, &f).unwrap();
        assert!(rep.satisfied);
    }

    #[test]
    fn k4_exhaustive_and_tds() {
        let g = named(Family::K4, 0).unwrap();
        let cfg = OracleConfig::default();
        assert!(exhaustive_two_coloring(&g, &all_targets(&g), &cfg)
            .unwrap()
            .is_some());
        assert!(has_k_disjoint_tds(&g, 2, &cfg).unwrap());
    }

    #[test]
    fn three_sun_has_no_two_disjoint_tds() {
        let g = named(Family::ThreeSun, 0).unwrap();
        let cfg = OracleConfig::default();
        assert!(!has_k_disjoint_tds(&g, 2, &cfg).unwrap());
    }

    #[test]
    fn c6_has_no_two_disjoint_tds() {
        // 6-cycle as rotations
        let rots: Vec<Vec<usize>> = (0..6).map(|i| vec![(i + 1) % 6, (i + 5) % 6]).collect();
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4, 5]).unwrap();
        let cfg = OracleConfig::default();
        assert!(!has_k_disjoint_tds(&g, 2, &cfg).unwrap());
    }

    #[test]
    fn size_caps_give_too_large() {
        let g = named(Family::Wheel, 40).unwrap();
        let cfg = OracleConfig::default();
        assert!(matches!(
            exhaustive_two_coloring(&g, &all_targets(&g), &cfg),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn check_fair_k4() {
        let g = named(Family::K4, 0).unwrap();
        let protected: BTreeSet<(usize, usize)> =
            g.edges().into_iter().collect();
        let mut f = FourColoring::new();
        for (i, v) in g.vertices().enumerate() {
            f.set(v, (i + 1) as u8);
        }
        assert!(check_fair(&g, &protected, &f));
        let mut bad = FourColoring::new();
        bad.set(0, 1);
        bad.set(1, 1);
        bad.set(2, 2);
        bad.set(3, 3);
        assert!(!check_fair(&g, &protected, &bad));
    }

    #[test]
    fn min_d3_examples() {
        let k4 = named(Family::K4, 0).unwrap();
        let mut f = FourColoring::new();
        for (i, v) in k4.vertices().enumerate() {
            f.set(v, (i + 1) as u8);
        }
        assert!(check_min_d3_coloring(&k4, &f));

        let k3 = named(Family::K3, 0).unwrap();
        let mut f = FourColoring::new();
        for (i, v) in k3.vertices().enumerate() {
            f.set(v, (i + 1) as u8);
        }
        assert!(check_min_d3_coloring(&k3, &f));

        // W5 with rim (2,3,2,3,2), hub 1: rim vertex 1 sees {1,2,2} = 2 < 3
        let w5 = named(Family::Wheel, 5).unwrap();
        let mut f = FourColoring::new();
        for (i, c) in [2u8, 3, 2, 3, 2].into_iter().enumerate() {
            f.set(i, c);
        }
        f.set(5, 1);
        assert!(!check_min_d3_coloring(&w5, &f));
    }

    #[test]
    fn search_min_d3_small_families() {
        let cfg = OracleConfig::default();
        for fam in [Family::K4, Family::Diamond, Family::ThreeSun] {
            let g = named(fam, 0).unwrap();
            let f = search_min_d3_coloring(&g, &cfg)
                .unwrap()
                .expect("conjectured coloring should exist on tiny instances");
            assert!(check_min_d3_coloring(&g, &f));
        }
    }
}
