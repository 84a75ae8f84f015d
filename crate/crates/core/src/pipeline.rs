//! The irreducible-case engine: the three-round independent set, the
//! contraction to (G', P'), the pairing merge of a fair four-coloring into a
//! partial two-coloring, and the repair loop that extends it over the
//! independent set.
//!
//! Preconditions throughout: the graph is a 2-connected triangulated disk on
//! at least five vertices with no consecutive boundary 4⁺-vertices, no
//! 2-vertex with a 3⁻-neighbor, and no chord between boundary 3-vertices —
//! exactly what survives the reduction rules.

use std::collections::{BTreeMap, BTreeSet};

use crate::coloring::{Color, FourColoring, SpecialSet, TwoColoring};
use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};
use crate::fair::{constrained_cut, fair_four_coloring, FairStats, FourColorConfig, Side};

/// The independent set of Construction "three rounds": clockwise successors
/// of boundary 4⁺-vertices, then a maximal independent set of boundary
/// 3⁻-vertices, then a maximal independent set of 4⁻-vertices overall.
#[derive(Debug, Clone)]
pub struct IndependentSet {
    members: Vec<usize>,
    round: BTreeMap<usize, u8>,
}

impl IndependentSet {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn round_of(&self, v: usize) -> Option<u8> {
        self.round.get(&v).copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.round.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-deleted-vertex provenance kept by the contraction.
#[derive(Debug, Clone)]
pub struct DeletedVertex {
    pub vertex: usize,
    /// Open neighborhood in the original graph, ascending.
    pub neighbors: Vec<usize>,
    /// Protected witness: the edge (2-vertices) or triangle (3⁺-vertices)
    /// among the neighbors, ascending.
    pub witness: Vec<usize>,
}

/// The pair (G', P') plus provenance.
#[derive(Debug, Clone)]
pub struct ContractionResult {
    pub gprime: EmbeddedGraph,
    /// Protected edges: edges of G' joining two former neighbors of some
    /// deleted vertex, as sorted pairs.
    pub protected: BTreeSet<(usize, usize)>,
    pub deleted: Vec<DeletedVertex>,
}

impl ContractionResult {
    pub fn protected_vertices(&self) -> BTreeSet<usize> {
        self.protected.iter().flat_map(|&(u, v)| [u, v]).collect()
    }
}

fn irreducibility_violation(g: &EmbeddedGraph) -> Option<String> {
    let report = g.validate();
    if !report.is_triangulated_disk {
        return Some("not a triangulated disk".into());
    }
    if g.n() < 5 {
        return Some(format!("only {} vertices", g.n()));
    }
    let boundary = g.boundary().ok()?;
    let cyc = boundary.cycle();
    for i in 0..cyc.len() {
        let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
        if g.degree(u) >= 4 && g.degree(v) >= 4 {
            return Some(format!("consecutive boundary 4+-vertices {u}, {v}"));
        }
    }
    for v in g.vertices() {
        if g.degree(v) == 2 {
            for &w in g.neighbors(v) {
                if g.degree(w) <= 3 {
                    return Some(format!("2-vertex {v} has a 3--neighbor {w}"));
                }
            }
        }
    }
    // no chord between boundary 3-vertices
    for u in g.vertices() {
        if g.degree(u) != 3 || !boundary.contains(u) {
            continue;
        }
        for &w in g.neighbors(u) {
            if u < w
                && g.degree(w) == 3
                && boundary.contains(w)
                && boundary.clockwise_next(u) != Some(w)
                && boundary.clockwise_next(w) != Some(u)
            {
                return Some(format!("chord between boundary 3-vertices {u}, {w}"));
            }
        }
    }
    None
}

/// Build the independent set. Greedy rounds scan candidates in ascending id.
pub fn build_independent_set(g: &EmbeddedGraph) -> Result<IndependentSet> {
    if let Some(reason) = irreducibility_violation(g) {
        return Err(Error::PreconditionViolated(reason));
    }
    let boundary = g.boundary()?;
    let mut round: BTreeMap<usize, u8> = BTreeMap::new();

    // Round 1: the clockwise next boundary vertex of every boundary 4⁺-vertex.
    for &b in boundary.cycle() {
        if g.degree(b) >= 4 {
            let next = boundary.clockwise_next(b).expect("boundary vertex");
            round.entry(next).or_insert(1);
        }
    }
    let adjacent_to_set = |round: &BTreeMap<usize, u8>, v: usize| {
        g.neighbors(v).iter().any(|w| round.contains_key(w))
    };
    // Round 2: maximal independent set of boundary 3⁻-vertices.
    for v in g.vertices() {
        if boundary.contains(v)
            && g.degree(v) <= 3
            && !round.contains_key(&v)
            && !adjacent_to_set(&round, v)
        {
            round.insert(v, 2);
        }
    }
    // Round 3: maximal independent set of 4⁻-vertices from everywhere.
    for v in g.vertices() {
        if g.degree(v) <= 4 && !round.contains_key(&v) && !adjacent_to_set(&round, v) {
            round.insert(v, 3);
        }
    }

    let members: Vec<usize> = round.keys().copied().collect();
    let iset = IndependentSet { members, round };
    check_independent_set(g, &boundary, &iset)?;
    Ok(iset)
}

/// The membership properties: independent, all degrees ≤ 4, contains every
/// 2-vertex, contains no boundary 4⁺-vertex, maximal among 4⁻-vertices.
fn check_independent_set(
    g: &EmbeddedGraph,
    boundary: &crate::embedding::BoundaryCycle,
    iset: &IndependentSet,
) -> Result<()> {
    let fail = |msg: String| Err(Error::InternalInvariantViolation(msg));
    for &v in iset.members() {
        if g.degree(v) > 4 {
            return fail(format!("independent set member {v} has degree > 4"));
        }
        if boundary.contains(v) && g.degree(v) >= 4 {
            return fail(format!("independent set contains boundary 4+-vertex {v}"));
        }
        for &w in g.neighbors(v) {
            if iset.contains(w) {
                return fail(format!("independent set contains adjacent pair {v}, {w}"));
            }
        }
    }
    for v in g.vertices() {
        if g.degree(v) == 2 && !iset.contains(v) {
            return fail(format!("2-vertex {v} missing from the independent set"));
        }
        if g.degree(v) <= 4
            && !iset.contains(v)
            && !g.neighbors(v).iter().any(|&w| iset.contains(w))
        {
            return fail(format!("independent set not maximal: {v} could join"));
        }
    }
    Ok(())
}

/// Every pair of neighbors of an independent-set member has a second common
/// neighbor; the repair loop's correctness rests on this.
pub fn check_second_common_neighbors(g: &EmbeddedGraph, iset: &IndependentSet) -> Result<()> {
    for &v in iset.members() {
        let nbrs = g.neighbors(v);
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                let has_common = g
                    .neighbors(u)
                    .iter()
                    .any(|&x| x != v && g.has_edge(x, w));
                if !has_common {
                    return Err(Error::InternalInvariantViolation(format!(
                        "neighbors {u}, {w} of {v} have no second common neighbor"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Delete the independent set in ascending order, adding the edges that
/// complete each deleted vertex's neighborhood to a protected edge/triangle.
pub fn contract(g: &EmbeddedGraph, iset: &IndependentSet) -> Result<ContractionResult> {
    let boundary = g.boundary()?;
    let mut cur = g.clone();
    let mut deleted = Vec::with_capacity(iset.len());

    for &v in iset.members() {
        let mut neighbors: Vec<usize> = cur.neighbors(v).to_vec();
        let rotation = neighbors.clone();
        neighbors.sort_unstable();
        let degree = neighbors.len();
        let on_boundary = boundary.contains(v);
        let witness: Vec<usize>;
        match (degree, on_boundary) {
            (2, _) => {
                let (u, w) = (neighbors[0], neighbors[1]);
                if !cur.has_edge(u, w) {
                    return Err(Error::PlanarityViolation(format!(
                        "neighbors of 2-vertex {v} are not adjacent"
                    )));
                }
                witness = vec![u, w];
                cur = cur.delete_vertex(v)?;
            }
            (3, true) => {
                // boundary neighbors from the current outer walk
                let outer = cur.outer_face().expect("graph has edges");
                let walk = outer.walk();
                let pos = walk
                    .iter()
                    .position(|&x| x == v)
                    .ok_or_else(|| Error::InternalInvariantViolation(
                        format!("boundary vertex {v} missing from outer walk"),
                    ))?;
                let u = walk[(pos + walk.len() - 1) % walk.len()];
                let w = walk[(pos + 1) % walk.len()];
                let third = neighbors
                    .iter()
                    .copied()
                    .find(|&x| x != u && x != w)
                    .expect("degree-3 vertex has a third neighbor");
                witness = sorted3(u, w, third);
                cur = cur.delete_vertex(v)?;
                if !cur.has_edge(u, w) {
                    let outer = cur.outer_face().expect("graph has edges");
                    cur = cur.add_edge_in_face(u, w, &outer)?;
                }
            }
            (3, false) => {
                let (a, b, c) = (neighbors[0], neighbors[1], neighbors[2]);
                if !(cur.has_edge(a, b) && cur.has_edge(b, c) && cur.has_edge(a, c)) {
                    return Err(Error::PlanarityViolation(format!(
                        "neighborhood of internal 3-vertex {v} is not a triangle"
                    )));
                }
                witness = vec![a, b, c];
                cur = cur.delete_vertex(v)?;
            }
            (4, false) => {
                // rotation order gives the 4-cycle around v
                let (a, b, c, d) = (rotation[0], rotation[1], rotation[2], rotation[3]);
                for (x, y) in [(a, b), (b, c), (c, d), (d, a)] {
                    if !cur.has_edge(x, y) {
                        return Err(Error::PlanarityViolation(format!(
                            "faces around internal 4-vertex {v} are not triangles"
                        )));
                    }
                }
                let mut diagonals = Vec::new();
                if !cur.has_edge(a, c) {
                    diagonals.push(((a.min(c), a.max(c)), b.min(d)));
                }
                if !cur.has_edge(b, d) {
                    diagonals.push(((b.min(d), b.max(d)), a.min(c)));
                }
                diagonals.sort_unstable();
                let ((d1, d2), third) = *diagonals.first().ok_or_else(|| {
                    Error::PlanarityViolation(format!(
                        "both diagonals around 4-vertex {v} already present"
                    ))
                })?;
                cur = cur.delete_vertex(v)?;
                let quad = cur
                    .trace_faces()
                    .into_iter()
                    .find(|f| {
                        f.len() == 4
                            && !f.is_outer()
                            && [a, b, c, d].iter().all(|&x| f.contains(x))
                    })
                    .ok_or_else(|| {
                        Error::InternalInvariantViolation(format!(
                            "deleting internal 4-vertex {v} did not create a quadrilateral face"
                        ))
                    })?;
                cur = cur.add_edge_in_face(d1, d2, &quad)?;
                witness = sorted3(d1, d2, third);
            }
            (d, ob) => {
                return Err(Error::InternalInvariantViolation(format!(
                    "independent set member {v} has degree {d} (boundary: {ob})"
                )));
            }
        }
        deleted.push(DeletedVertex {
            vertex: v,
            neighbors,
            witness,
        });
    }

    // Protected edges: all edges of G' among each deleted vertex's neighbors.
    let mut protected = BTreeSet::new();
    for rec in &deleted {
        for (i, &x) in rec.neighbors.iter().enumerate() {
            for &y in &rec.neighbors[i + 1..] {
                if cur.has_edge(x, y) {
                    protected.insert((x, y));
                }
            }
        }
    }
    let result = ContractionResult {
        gprime: cur,
        protected,
        deleted,
    };
    check_contraction(g, iset, &result)?;
    Ok(result)
}

fn sorted3(a: usize, b: usize, c: usize) -> Vec<usize> {
    let mut v = vec![a, b, c];
    v.sort_unstable();
    v
}

/// G' invariants: planar supergraph of G \ I; unprotected vertices have
/// degree ≥ 5; every 3⁺ deleted vertex left a protected triangle and every
/// 2-vertex a protected edge.
fn check_contraction(
    g: &EmbeddedGraph,
    iset: &IndependentSet,
    res: &ContractionResult,
) -> Result<()> {
    let fail = |msg: String| Err(Error::InternalInvariantViolation(msg));
    let gp = &res.gprime;
    if !gp.validate().is_planar_embedding {
        return fail("contracted graph is not a planar embedding".into());
    }
    for u in g.vertices() {
        if iset.contains(u) {
            continue;
        }
        for &w in g.neighbors(u) {
            if !iset.contains(w) && !gp.has_edge(u, w) {
                return fail(format!("edge ({u}, {w}) of G \\ I missing from G'"));
            }
        }
    }
    let spanned = res.protected_vertices();
    for v in gp.vertices() {
        if !spanned.contains(&v) && gp.degree(v) < 5 {
            return fail(format!(
                "unprotected vertex {v} has degree {} in G'",
                gp.degree(v)
            ));
        }
    }
    for rec in &res.deleted {
        let w = &rec.witness;
        let pairs: Vec<(usize, usize)> = match w.len() {
            2 => vec![(w[0], w[1])],
            3 => vec![(w[0], w[1]), (w[0], w[2]), (w[1], w[2])],
            _ => return fail(format!("bad witness for deleted vertex {}", rec.vertex)),
        };
        for (x, y) in pairs {
            if !gp.has_edge(x, y) || !res.protected.contains(&(x, y)) {
                return fail(format!(
                    "witness edge ({x}, {y}) of deleted vertex {} not protected in G'",
                    rec.vertex
                ));
            }
        }
        if (rec.neighbors.len() >= 3) != (w.len() == 3) {
            return fail(format!("witness arity mismatch for {}", rec.vertex));
        }
    }
    for &(u, v) in &res.protected {
        let covered = res
            .deleted
            .iter()
            .any(|rec| rec.neighbors.contains(&u) && rec.neighbors.contains(&v));
        if !covered || !gp.has_edge(u, v) {
            return fail(format!("protected edge ({u}, {v}) has no provenance"));
        }
    }
    Ok(())
}

/// The three ways of grouping colors {1,2,3,4} into two pairs, in the fixed
/// preference order.
const PAIRINGS: [[u8; 2]; 3] = [[1, 2], [1, 3], [1, 4]];

/// Group the four colors into two pairs so that each special vertex's
/// protected edge straddles the pairs, then merge pairs into colors a and b.
/// Vertices of the independent set stay uncolored.
pub fn merge_to_two_coloring(
    f4: &FourColoring,
    contraction: &ContractionResult,
    specials: &SpecialSet,
) -> Result<TwoColoring> {
    let mut forbidden: BTreeSet<[u8; 2]> = BTreeSet::new();
    for &s in specials.members() {
        let rec = contraction
            .deleted
            .iter()
            .find(|r| r.vertex == s)
            .ok_or_else(|| {
                Error::InternalInvariantViolation(format!(
                    "special vertex {s} was not deleted by the contraction"
                ))
            })?;
        if rec.witness.len() != 2 {
            return Err(Error::InternalInvariantViolation(format!(
                "special vertex {s} is not a 2-vertex"
            )));
        }
        let cu = f4.get(rec.witness[0]).ok_or(Error::PartialColoring(rec.witness[0]))?;
        let cw = f4.get(rec.witness[1]).ok_or(Error::PartialColoring(rec.witness[1]))?;
        if cu == cw {
            return Err(Error::InternalInvariantViolation(format!(
                "protected edge of special vertex {s} is monochromatic"
            )));
        }
        // the pairing putting cu and cw together is the forbidden one
        let lo = cu.min(cw);
        let hi = cu.max(cw);
        let pair = if lo == 1 {
            [lo, hi]
        } else {
            // the pair containing 1 is the complement
            let mut rest: Vec<u8> = (1..=4).filter(|c| *c != lo && *c != hi).collect();
            rest.sort_unstable();
            [rest[0], rest[1]]
        };
        forbidden.insert(pair);
    }
    let chosen = PAIRINGS
        .iter()
        .find(|p| !forbidden.contains(*p))
        .ok_or(Error::NoValidPairing)?;
    let mut f2 = TwoColoring::new();
    for (v, c) in f4.iter() {
        let color = if chosen.contains(&c) { Color::A } else { Color::B };
        f2.set(v, color);
    }
    Ok(f2)
}

fn sees_both(g: &EmbeddedGraph, f: &TwoColoring, v: usize, ignore: Option<usize>) -> bool {
    let mut a = false;
    let mut b = false;
    for &w in g.neighbors(v) {
        if Some(w) == ignore {
            continue;
        }
        match f.get(w) {
            Some(Color::A) => a = true,
            Some(Color::B) => b = true,
            None => {}
        }
    }
    a && b
}

fn missing_color(g: &EmbeddedGraph, f: &TwoColoring, v: usize, ignore: usize) -> Result<Color> {
    let mut a = false;
    let mut b = false;
    for &w in g.neighbors(v) {
        if w == ignore {
            continue;
        }
        match f.get(w) {
            Some(Color::A) => a = true,
            Some(Color::B) => b = true,
            None => {}
        }
    }
    match (a, b) {
        (true, false) => Ok(Color::B),
        (false, true) => Ok(Color::A),
        _ => Err(Error::MixedMissingColors),
    }
}

/// Check that every vertex outside N(I) is satisfied once independent-set
/// vertices receive an arbitrary color — the guarantee the merge provides.
pub fn check_merge_guarantee(
    g: &EmbeddedGraph,
    iset: &IndependentSet,
    partial: &TwoColoring,
) -> Result<()> {
    let mut f = partial.clone();
    for &v in iset.members() {
        f.set(v, Color::A);
    }
    let dominated: BTreeSet<usize> = iset
        .members()
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .collect();
    for v in g.vertices() {
        if !dominated.contains(&v) && !sees_both(g, &f, v, None) {
            return Err(Error::InternalInvariantViolation(format!(
                "vertex {v} outside N(I) unsatisfied after the merge"
            )));
        }
    }
    Ok(())
}

/// Extend the partial coloring over the independent set and repair: pick the
/// lowest-id member with an unsatisfied neighbor, recolor it to the color its
/// unsatisfied neighbors jointly miss, repeat. The satisfied set grows every
/// iteration, so at most |V| iterations run.
pub fn repair(
    g: &EmbeddedGraph,
    iset: &IndependentSet,
    partial: &TwoColoring,
) -> Result<(TwoColoring, usize)> {
    let mut f = partial.clone();
    for &v in iset.members() {
        f.set(v, Color::A);
    }
    let satisfied_count = |f: &TwoColoring| -> usize {
        g.vertices().filter(|&v| sees_both(g, f, v, None)).count()
    };
    let mut iterations = 0usize;
    let mut last_count = satisfied_count(&f);
    loop {
        let dirty = iset.members().iter().copied().find(|&v| {
            g.neighbors(v).iter().any(|&y| !sees_both(g, &f, y, None))
        });
        let v = match dirty {
            Some(v) => v,
            None => break,
        };
        iterations += 1;
        if iterations > g.n() {
            return Err(Error::NoProgress);
        }
        // unsatisfied neighbors of v when v's own color is ignored
        let mut common: Option<Color> = None;
        for &y in g.neighbors(v) {
            if sees_both(g, &f, y, Some(v)) {
                continue;
            }
            let c = missing_color(g, &f, y, v)?;
            match common {
                None => common = Some(c),
                Some(prev) if prev == c => {}
                Some(_) => return Err(Error::MixedMissingColors),
            }
        }
        let c = common.ok_or(Error::NoProgress)?;
        f.set(v, c);
        let count = satisfied_count(&f);
        if count <= last_count {
            return Err(Error::NoProgress);
        }
        last_count = count;
    }
    for v in g.vertices() {
        if !sees_both(g, &f, v, None) {
            return Err(Error::InternalInvariantViolation(format!(
                "vertex {v} unsatisfied after repair"
            )));
        }
    }
    Ok((f, iterations))
}

/// Everything one irreducible solve produces, for inspection and dumps.
#[derive(Debug, Clone)]
pub struct PipelineArtifacts {
    pub graph: EmbeddedGraph,
    pub independent: IndependentSet,
    pub contraction: ContractionResult,
    pub four_coloring: FourColoring,
    pub side_b: Vec<usize>,
    pub fair_stats: FairStats,
    pub partial: TwoColoring,
    pub coloring: TwoColoring,
    pub repair_iterations: usize,
}

/// Durations of the pipeline phases, accumulated across one solve.
#[derive(Debug, Clone, Default)]
pub struct PipelineTimings {
    pub independent_set: std::time::Duration,
    pub contraction: std::time::Duration,
    pub cut: std::time::Duration,
    pub four_coloring: std::time::Duration,
    pub repair: std::time::Duration,
}

/// Run the whole irreducible-case pipeline on (g, specials).
pub fn run_pipeline(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    four_color_config: &FourColorConfig,
    check_invariants: bool,
    timings: &mut PipelineTimings,
) -> Result<(TwoColoring, PipelineArtifacts)> {
    use std::time::Instant;

    let t = Instant::now();
    let iset = build_independent_set(g)?;
    timings.independent_set += t.elapsed();
    if check_invariants {
        check_second_common_neighbors(g, &iset)?;
        for &s in specials.members() {
            if !iset.contains(s) {
                return Err(Error::InternalInvariantViolation(format!(
                    "special vertex {s} missing from the independent set"
                )));
            }
        }
    }

    let t = Instant::now();
    let contraction = contract(g, &iset)?;
    timings.contraction += t.elapsed();

    let t = Instant::now();
    let cut = constrained_cut(&contraction.gprime, &contraction.protected);
    timings.cut += t.elapsed();
    let side_b = cut.vertices_on(Side::B);

    let t = Instant::now();
    let (f4, fair_stats) =
        fair_four_coloring(&contraction.gprime, &contraction.protected, four_color_config)?;
    timings.four_coloring += t.elapsed();

    let partial = merge_to_two_coloring(&f4, &contraction, specials)?;
    if check_invariants {
        check_merge_guarantee(g, &iset, &partial)?;
    }

    let t = Instant::now();
    let (coloring, repair_iterations) = repair(g, &iset, &partial)?;
    timings.repair += t.elapsed();

    let artifacts = PipelineArtifacts {
        graph: g.clone(),
        independent: iset,
        contraction,
        four_coloring: f4,
        side_b,
        fair_stats,
        partial,
        coloring: coloring.clone(),
        repair_iterations,
    };
    Ok((coloring, artifacts))
}
