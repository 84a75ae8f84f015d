//! Fair four-coloring: constrained local-search cut, per-side graph surgery,
//! exact planar four-coloring, and assembly.
//!
//! A fair four-coloring of (Γ, P) makes every edge of P bichromatic and shows
//! at least three colors to every vertex not spanned by P. It exists whenever
//! P spans all 4⁻-vertices of a planar Γ, and the construction below finds
//! one: split the vertices by a cut that no protected edge crosses and that
//! no single unprotected vertex can improve, then four-color each side after
//! planting a triangle on three cross-neighbors of every unprotected vertex
//! of the opposite side.

use std::collections::{BTreeMap, BTreeSet};

use crate::coloring::FourColoring;
use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};
use crate::oracle::check_fair;

/// Search configuration for the exact four-coloring backtracker.
#[derive(Debug, Clone)]
pub struct FourColorConfig {
    /// Maximum number of color assignments the exact search may try.
    pub node_budget: u64,
}

impl Default for FourColorConfig {
    fn default() -> Self {
        FourColorConfig {
            node_budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// A two-sided vertex partition with no protected edge crossing it.
#[derive(Debug, Clone)]
pub struct Cut {
    side: BTreeMap<usize, Side>,
    pub crossing_edges: usize,
    /// Improving moves the local search performed.
    pub moves: usize,
}

impl Cut {
    pub fn side_of(&self, v: usize) -> Side {
        self.side[&v]
    }

    pub fn vertices_on(&self, side: Side) -> Vec<usize> {
        self.side
            .iter()
            .filter(|&(_, &s)| s == side)
            .map(|(&v, _)| v)
            .collect()
    }
}

fn protected_vertices(protected: &BTreeSet<(usize, usize)>) -> BTreeSet<usize> {
    protected.iter().flat_map(|&(u, v)| [u, v]).collect()
}

/// Local-search cut: start with everything on side A and repeatedly move any
/// unprotected vertex with more same-side than opposite-side neighbors.
/// Protected vertices never move, so no protected edge ever crosses. Each
/// accepted move strictly increases the crossing count, so the number of
/// moves is at most |E|.
pub fn constrained_cut(gamma: &EmbeddedGraph, protected: &BTreeSet<(usize, usize)>) -> Cut {
    let spanned = protected_vertices(protected);
    let mut side: BTreeMap<usize, Side> = gamma.vertices().map(|v| (v, Side::A)).collect();
    let movable: Vec<usize> = gamma.vertices().filter(|v| !spanned.contains(v)).collect();
    let mut moves = 0usize;
    loop {
        let mut improved = false;
        for &v in &movable {
            let mut same = 0usize;
            let mut opposite = 0usize;
            for &w in gamma.neighbors(v) {
                if side[&w] == side[&v] {
                    same += 1;
                } else {
                    opposite += 1;
                }
            }
            if same > opposite {
                let flipped = match side[&v] {
                    Side::A => Side::B,
                    Side::B => Side::A,
                };
                side.insert(v, flipped);
                moves += 1;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let crossing_edges = gamma
        .edges()
        .iter()
        .filter(|&&(u, v)| side[&u] != side[&v])
        .count();
    Cut {
        side,
        crossing_edges,
        moves,
    }
}

/// Build the side graph H_side: the subgraph induced on `side` plus, for each
/// unprotected vertex of the opposite side, a triangle on its three retained
/// cross-neighbors (the three lowest-id ones). The opposite-side vertex is
/// removed by a Δ–Y expansion that keeps the embedding planar.
pub fn build_side_graph(
    gamma: &EmbeddedGraph,
    protected: &BTreeSet<(usize, usize)>,
    cut: &Cut,
    side: Side,
) -> Result<EmbeddedGraph> {
    let spanned = protected_vertices(protected);
    let mut h = gamma.clone();

    // (a) remove all edges inside the opposite side
    for (u, v) in gamma.edges() {
        if cut.side_of(u) != side && cut.side_of(v) != side {
            h = h.delete_edge(u, v)?;
        }
    }
    // (b) remove protected opposite-side vertices entirely
    let opposite: Vec<usize> = gamma
        .vertices()
        .filter(|&v| cut.side_of(v) != side)
        .collect();
    for &v in &opposite {
        if spanned.contains(&v) {
            h = h.delete_vertex(v)?;
        }
    }
    // (c) trim each unprotected opposite vertex to its 3 lowest-id neighbors
    for &v in &opposite {
        if spanned.contains(&v) {
            continue;
        }
        let mut nbrs: Vec<usize> = h.neighbors(v).to_vec();
        nbrs.sort_unstable();
        if nbrs.len() < 3 {
            return Err(Error::PlanarityViolation(format!(
                "unprotected vertex {v} has only {} cross-neighbors",
                nbrs.len()
            )));
        }
        for &w in &nbrs[3..] {
            h = h.delete_edge(v, w)?;
        }
    }
    // (d) replace each trimmed vertex by a triangle on its retained neighbors
    for &v in &opposite {
        if !spanned.contains(&v) {
            h = h.replace_degree3_by_triangle(v)?;
        }
    }
    let report = h.validate();
    if !report.is_planar_embedding {
        return Err(Error::PlanarityViolation(
            "side-graph surgery broke the embedding".into(),
        ));
    }
    Ok(h)
}

/// Exact proper four-coloring. Tries a greedy saturation-order pass with
/// Kempe-chain repairs first, then falls back to budgeted backtracking.
/// Returns the coloring and the number of backtracking nodes used (0 when
/// the greedy pass succeeded).
pub fn four_color(h: &EmbeddedGraph, config: &FourColorConfig) -> Result<(FourColoring, u64)> {
    let verts: Vec<usize> = h.vertices().collect();
    if verts.is_empty() {
        return Ok((FourColoring::new(), 0));
    }
    if let Some(f) = greedy_with_kempe(h, &verts) {
        debug_assert!(is_proper(h, &f));
        return Ok((f, 0));
    }
    let (f, nodes) = backtrack(h, &verts, config)?;
    debug_assert!(is_proper(h, &f));
    Ok((f, nodes))
}

fn is_proper(h: &EmbeddedGraph, f: &FourColoring) -> bool {
    h.edges()
        .iter()
        .all(|&(u, v)| f.get(u).is_some() && f.get(u) != f.get(v))
}

fn neighbor_mask(h: &EmbeddedGraph, colors: &[u8], v: usize) -> u8 {
    let mut mask = 0u8;
    for &w in h.neighbors(v) {
        if colors[w] != 0 {
            mask |= 1 << (colors[w] - 1);
        }
    }
    mask
}

/// Pick the uncolored vertex with the most distinctly-colored neighbors,
/// breaking ties by degree then by smallest id.
fn select_next(h: &EmbeddedGraph, verts: &[usize], colors: &[u8]) -> Option<usize> {
    verts
        .iter()
        .copied()
        .filter(|&v| colors[v] == 0)
        .max_by_key(|&v| {
            (
                neighbor_mask(h, colors, v).count_ones(),
                h.degree(v),
                std::cmp::Reverse(v),
            )
        })
}

fn greedy_with_kempe(h: &EmbeddedGraph, verts: &[usize]) -> Option<FourColoring> {
    let bound = h.id_bound();
    let mut colors = vec![0u8; bound];
    for _ in 0..verts.len() {
        let v = select_next(h, verts, &colors)?;
        let mask = neighbor_mask(h, &colors, v);
        let free = (1..=4u8).find(|&c| mask & (1 << (c - 1)) == 0);
        match free {
            Some(c) => colors[v] = c,
            None => {
                if !kempe_repair(h, &mut colors, v) {
                    return None;
                }
            }
        }
    }
    let mut f = FourColoring::new();
    for &v in verts {
        f.set(v, colors[v]);
    }
    Some(f)
}

/// All four colors appear around `v`: try swapping two-color chains rooted at
/// a neighbor to free a color at `v`.
fn kempe_repair(h: &EmbeddedGraph, colors: &mut [u8], v: usize) -> bool {
    for c1 in 1..=4u8 {
        for c2 in 1..=4u8 {
            if c1 == c2 {
                continue;
            }
            for &w in h.neighbors(v) {
                if colors[w] != c1 {
                    continue;
                }
                let chain = kempe_chain(h, colors, w, c1, c2);
                // the swap only helps if it removes color c1 from around v,
                // i.e. no c1-neighbor of v sits outside this chain
                // and no c2-neighbor of v sits inside it
                let frees = h.neighbors(v).iter().all(|&x| match colors[x] {
                    c if c == c1 => chain.contains(&x),
                    c if c == c2 => !chain.contains(&x),
                    _ => true,
                });
                if frees {
                    for &x in &chain {
                        colors[x] = if colors[x] == c1 { c2 } else { c1 };
                    }
                    colors[v] = c1;
                    return true;
                }
            }
        }
    }
    false
}

fn kempe_chain(h: &EmbeddedGraph, colors: &[u8], start: usize, c1: u8, c2: u8) -> BTreeSet<usize> {
    let mut chain = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        if !chain.insert(x) {
            continue;
        }
        for &y in h.neighbors(x) {
            if (colors[y] == c1 || colors[y] == c2) && !chain.contains(&y) {
                stack.push(y);
            }
        }
    }
    chain
}

fn backtrack(
    h: &EmbeddedGraph,
    verts: &[usize],
    config: &FourColorConfig,
) -> Result<(FourColoring, u64)> {
    struct Search<'a> {
        h: &'a EmbeddedGraph,
        verts: &'a [usize],
        colors: Vec<u8>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize, max_used: u8) -> Result<bool> {
            if depth == self.verts.len() {
                return Ok(true);
            }
            let v = select_next(self.h, self.verts, &self.colors).unwrap();
            let mask = neighbor_mask(self.h, &self.colors, v);
            let cap = (max_used + 1).min(4);
            for c in 1..=cap {
                if mask & (1 << (c - 1)) != 0 {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::Timeout { nodes: self.nodes });
                }
                self.colors[v] = c;
                if self.run(depth + 1, max_used.max(c))? {
                    return Ok(true);
                }
                self.colors[v] = 0;
            }
            Ok(false)
        }
    }

    let mut s = Search {
        h,
        verts,
        colors: vec![0u8; h.id_bound()],
        nodes: 0,
        budget: config.node_budget,
    };
    if !s.run(0, 0)? {
        // a planar graph always has a proper four-coloring
        return Err(Error::InternalInvariantViolation(
            "exhausted four-coloring search space on a planar graph".into(),
        ));
    }
    let mut f = FourColoring::new();
    for &v in verts {
        f.set(v, s.colors[v]);
    }
    Ok((f, s.nodes))
}

/// Per-call statistics of [`fair_four_coloring`].
#[derive(Debug, Clone, Default)]
pub struct FairStats {
    pub cut_moves: usize,
    pub crossing_edges: usize,
    pub search_nodes_a: u64,
    pub search_nodes_b: u64,
}

/// Compose cut, side surgery and four-coloring into a fair four-coloring of
/// (gamma, protected).
pub fn fair_four_coloring(
    gamma: &EmbeddedGraph,
    protected: &BTreeSet<(usize, usize)>,
    config: &FourColorConfig,
) -> Result<(FourColoring, FairStats)> {
    let spanned = protected_vertices(protected);
    for v in gamma.vertices() {
        if gamma.degree(v) <= 4 && !spanned.contains(&v) {
            return Err(Error::PreconditionViolated(format!(
                "vertex {v} has degree {} but is not spanned by a protected edge",
                gamma.degree(v)
            )));
        }
    }
    let cut = constrained_cut(gamma, protected);
    let ha = build_side_graph(gamma, protected, &cut, Side::A)?;
    let hb = build_side_graph(gamma, protected, &cut, Side::B)?;
    let (fa, nodes_a) = four_color(&ha, config)?;
    let (fb, nodes_b) = four_color(&hb, config)?;
    let mut f = fa;
    f.absorb(&fb);
    if !check_fair(gamma, protected, &f) {
        return Err(Error::InternalInvariantViolation(
            "composed coloring is not fair".into(),
        ));
    }
    Ok((
        f,
        FairStats {
            cut_moves: cut.moves,
            crossing_edges: cut.crossing_edges,
            search_nodes_a: nodes_a,
            search_nodes_b: nodes_b,
        },
    ))
}
