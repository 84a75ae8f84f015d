//! Planar graphs as rotation systems.
//!
//! A graph is stored as a per-vertex cyclic sequence of neighbors in
//! counterclockwise geometric order plus one directed edge anchoring the
//! outer (unbounded) face. Faces are never stored; they are traced on
//! demand by the rule: after directed edge (u, v) the walk continues with
//! (v, w) where w is the successor of u in the rotation of v. Under this
//! rule the outer face's walk runs with the graph interior on its left,
//! which is the orientation the rest of the crate relies on.
//!
//! All edits return new graphs; an `EmbeddedGraph` is immutable once built.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Planar embedded graph. Vertex ids are dense at construction time;
/// deletions leave holes (ids are never reused within a solve).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    rotations: Vec<Vec<usize>>,
    alive: Vec<bool>,
    n_alive: usize,
    /// Directed edge whose traced orbit is the outer face; `None` iff the
    /// graph has no edges.
    outer: Option<(usize, usize)>,
}

/// One traced face: the directed boundary walk as a vertex sequence
/// (edge i runs from `walk[i]` to `walk[(i+1) % len]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    walk: Vec<usize>,
    is_outer: bool,
}

impl Face {
    /// Build a face from a known directed walk (callers must pass a walk
    /// that matches a traced orbit; edit operations re-trace to verify).
    pub(crate) fn from_walk(walk: Vec<usize>, is_outer: bool) -> Self {
        let mut f = Face { walk, is_outer };
        f.canonicalize();
        f
    }

    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn is_outer(&self) -> bool {
        self.is_outer
    }

    pub fn is_triangle(&self) -> bool {
        self.walk.len() == 3
    }

    pub fn contains(&self, v: usize) -> bool {
        self.walk.contains(&v)
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.walk.len();
        (0..n).map(move |i| (self.walk[i], self.walk[(i + 1) % n]))
    }

    /// Rotate the walk so it starts at the lexicographically least directed
    /// edge; gives faces a canonical representation for comparisons.
    fn canonicalize(&mut self) {
        if self.walk.is_empty() {
            return;
        }
        let n = self.walk.len();
        let best = (0..n)
            .min_by_key(|&i| (self.walk[i], self.walk[(i + 1) % n]))
            .unwrap();
        self.walk.rotate_left(best);
    }
}

/// The outer face of a triangulated disk: a simple cycle oriented so the
/// graph interior lies to the left of traversal.
#[derive(Debug, Clone)]
pub struct BoundaryCycle {
    cycle: Vec<usize>,
    succ: BTreeMap<usize, usize>,
}

impl BoundaryCycle {
    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.succ.contains_key(&v)
    }

    /// Clockwise next boundary vertex: the successor in the interior-left walk.
    pub fn clockwise_next(&self, v: usize) -> Option<usize> {
        self.succ.get(&v).copied()
    }
}

/// Diagnostics produced by [`EmbeddedGraph::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub is_simple: bool,
    pub is_planar_embedding: bool,
    pub is_near_triangulation: bool,
    pub is_triangulated_disk: bool,
    pub is_triangulation: bool,
    pub offending_face: Option<Vec<usize>>,
    pub offending_vertex: Option<usize>,
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl EmbeddedGraph {
    /// Build a graph from per-vertex counterclockwise neighbor cycles and the
    /// walk of the designated outer face (matched against traced faces up to
    /// rotation).
    pub fn build(rotations: Vec<Vec<usize>>, outer_walk: &[usize]) -> Result<Self> {
        let n = rotations.len();
        for (v, rot) in rotations.iter().enumerate() {
            let mut seen = vec![false; n];
            for &w in rot {
                if w >= n {
                    return Err(Error::UnknownVertex(w));
                }
                if w == v {
                    return Err(Error::NotSimple(format!("loop at vertex {v}")));
                }
                if seen[w] {
                    return Err(Error::NotSimple(format!(
                        "vertex {w} appears twice in the rotation of {v}"
                    )));
                }
                seen[w] = true;
            }
        }
        for (v, rot) in rotations.iter().enumerate() {
            for &w in rot {
                if !rotations[w].contains(&v) {
                    return Err(Error::NonSymmetricAdjacency { u: v, v: w });
                }
            }
        }
        let mut g = EmbeddedGraph {
            alive: vec![true; n],
            n_alive: n,
            rotations,
            outer: None,
        };
        let orbits = g.all_orbits();
        let e = g.edge_count();
        let c = g.components().len();
        if !g.euler_check(orbits.len(), e, c) {
            return Err(Error::NotAnEmbedding {
                v: g.n_alive,
                e,
                f: orbits.len(),
                c,
            });
        }
        if outer_walk.is_empty() {
            if e > 0 {
                return Err(Error::OuterFaceNotFound);
            }
            return Ok(g);
        }
        let anchor = orbits
            .iter()
            .find_map(|orbit| walk_match_anchor(orbit, outer_walk))
            .ok_or(Error::OuterFaceNotFound)?;
        g.outer = Some(anchor);
        Ok(g)
    }

    fn from_parts(rotations: Vec<Vec<usize>>, alive: Vec<bool>, outer: Option<(usize, usize)>) -> Self {
        let n_alive = alive.iter().filter(|&&a| a).count();
        EmbeddedGraph {
            rotations,
            alive,
            n_alive,
            outer,
        }
    }

    // ----- basic accessors -----

    /// Number of live vertices.
    pub fn n(&self) -> usize {
        self.n_alive
    }

    /// One past the largest id ever allocated (live or deleted).
    pub fn id_bound(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    /// Live vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rotations.len()).filter(|&v| self.alive[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.is_alive(u) && self.rotations[u].contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.rotations[v].len()).sum::<usize>() / 2
    }

    /// Undirected edges (u < v) in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in self.vertices() {
            for &v in &self.rotations[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn outer_anchor(&self) -> Option<(usize, usize)> {
        self.outer
    }

    /// Per-component Euler test: components with edges must satisfy
    /// V - E + F = 2 each; isolated vertices carry no faces.
    fn euler_check(&self, orbits: usize, edges: usize, components: usize) -> bool {
        let isolated = self.vertices().filter(|&v| self.degree(v) == 0).count();
        let with_edges = components - isolated;
        (self.n_alive - isolated) + orbits == edges + 2 * with_edges
    }

    fn succ_in_rotation(&self, v: usize, x: usize) -> usize {
        let rot = &self.rotations[v];
        let i = rot.iter().position(|&y| y == x).expect("neighbor present");
        rot[(i + 1) % rot.len()]
    }

    // ----- face tracing -----

    fn next_edge(&self, (u, v): (usize, usize)) -> (usize, usize) {
        (v, self.succ_in_rotation(v, u))
    }

    fn trace_orbit(&self, start: (usize, usize)) -> Vec<(usize, usize)> {
        let mut orbit = vec![start];
        let mut e = self.next_edge(start);
        while e != start {
            orbit.push(e);
            e = self.next_edge(e);
        }
        orbit
    }

    fn all_orbits(&self) -> Vec<Vec<(usize, usize)>> {
        // seen[v][i] marks the directed edge (v, rotations[v][i])
        let mut seen: Vec<Vec<bool>> = self
            .rotations
            .iter()
            .map(|rot| vec![false; rot.len()])
            .collect();
        let mut orbits = Vec::new();
        for u in self.vertices() {
            for i in 0..self.rotations[u].len() {
                if seen[u][i] {
                    continue;
                }
                let start = (u, self.rotations[u][i]);
                let mut orbit = Vec::new();
                let mut e = start;
                loop {
                    let (a, b) = e;
                    let pos = self.rotations[a]
                        .iter()
                        .position(|&x| x == b)
                        .expect("edge endpoint in rotation");
                    seen[a][pos] = true;
                    orbit.push(e);
                    e = self.next_edge(e);
                    if e == start {
                        break;
                    }
                }
                orbits.push(orbit);
            }
        }
        orbits
    }

    /// All faces, ordered by their least directed edge. The face containing
    /// the outer anchor is flagged.
    pub fn trace_faces(&self) -> Vec<Face> {
        let outer = self.outer;
        self.all_orbits()
            .into_iter()
            .map(|orbit| {
                let is_outer = outer.map_or(false, |a| orbit.contains(&a));
                let mut f = Face {
                    walk: orbit.into_iter().map(|(u, _)| u).collect(),
                    is_outer,
                };
                f.canonicalize();
                f
            })
            .collect()
    }

    /// The outer face, traced from the anchor. `None` iff the graph has no edges.
    pub fn outer_face(&self) -> Option<Face> {
        let anchor = self.outer?;
        let orbit = self.trace_orbit(anchor);
        let mut f = Face {
            walk: orbit.into_iter().map(|(u, _)| u).collect(),
            is_outer: true,
        };
        f.canonicalize();
        Some(f)
    }

    // ----- connectivity -----

    /// Connected components as ascending vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let bound = self.rotations.len();
        let mut seen = vec![false; bound];
        let mut comps = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &self.rotations[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Bridges (as sorted pairs) and cut vertices via a lowpoint DFS.
    pub fn bridges_and_cut_vertices(&self) -> (Vec<(usize, usize)>, Vec<usize>) {
        let bound = self.rotations.len();
        let mut disc = vec![usize::MAX; bound];
        let mut low = vec![usize::MAX; bound];
        let mut parent = vec![usize::MAX; bound];
        let mut bridges = Vec::new();
        let mut cuts = vec![false; bound];
        let mut timer = 0usize;

        for root in self.vertices() {
            if disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, neighbor index)
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0usize;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.rotations[v].len() {
                    let w = self.rotations[v][*i];
                    *i += 1;
                    if disc[w] == usize::MAX {
                        parent[w] = v;
                        if v == root {
                            root_children += 1;
                        }
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, 0));
                    } else if w != parent[v] {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            bridges.push((p.min(v), p.max(v)));
                        }
                        if p != root && low[v] >= disc[p] {
                            cuts[p] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                cuts[root] = true;
            }
        }
        bridges.sort_unstable();
        let cut_vertices = (0..bound).filter(|&v| cuts[v]).collect();
        (bridges, cut_vertices)
    }

    /// Induced subgraph on `verts`, deriving the outer anchor from the parent
    /// outer orbit (first surviving directed edge, scanning from the parent
    /// anchor). Falls back to a non-triangle orbit of the child, then to the
    /// least directed edge.
    pub(crate) fn induce(&self, verts: &[usize]) -> EmbeddedGraph {
        let bound = self.rotations.len();
        let mut keep = vec![false; bound];
        for &v in verts {
            keep[v] = true;
        }
        let mut rotations = vec![Vec::new(); bound];
        let mut alive = vec![false; bound];
        for &v in verts {
            alive[v] = true;
            rotations[v] = self.rotations[v]
                .iter()
                .copied()
                .filter(|&w| keep[w])
                .collect();
        }
        let mut child = EmbeddedGraph::from_parts(rotations, alive, None);
        // anchor from the parent's outer orbit where possible
        if let Some(a) = self.outer {
            for e in self.trace_orbit(a) {
                if keep[e.0] && keep[e.1] && child.has_edge(e.0, e.1) {
                    child.outer = Some(e);
                    return child;
                }
            }
        }
        child.outer = child.fallback_anchor();
        child
    }

    fn fallback_anchor(&self) -> Option<(usize, usize)> {
        let orbits = self.all_orbits();
        orbits
            .iter()
            .find(|o| o.len() != 3)
            .or_else(|| orbits.first())
            .map(|o| *o.iter().min().unwrap())
    }

    // ----- validation -----

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            is_simple: true,
            is_planar_embedding: false,
            is_near_triangulation: false,
            is_triangulated_disk: false,
            is_triangulation: false,
            offending_face: None,
            offending_vertex: None,
            degree_histogram: BTreeMap::new(),
        };
        for v in self.vertices() {
            *report.degree_histogram.entry(self.degree(v)).or_insert(0) += 1;
            let rot = &self.rotations[v];
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != rot.len() || rot.contains(&v) {
                report.is_simple = false;
                report.offending_vertex = Some(v);
            }
            for &w in rot {
                if !self.is_alive(w) || !self.rotations[w].contains(&v) {
                    report.is_simple = false;
                    report.offending_vertex = Some(v);
                }
            }
        }
        if !report.is_simple {
            return report;
        }
        let comps = self.components();
        let orbits = self.all_orbits();
        let e = self.edge_count();
        report.is_planar_embedding = self.euler_check(orbits.len(), e, comps.len());
        if !report.is_planar_embedding {
            return report;
        }

        if let Some(walk) = self.near_triangulation_offender(&comps, &orbits) {
            report.is_near_triangulation = false;
            report.offending_face = Some(walk);
            return report;
        }
        report.is_near_triangulation = true;

        if comps.len() == 1 {
            if let Some(f) = self.outer_face() {
                let mut seen = f.walk().to_vec();
                seen.sort_unstable();
                let distinct = {
                    let mut s = seen.clone();
                    s.dedup();
                    s.len()
                };
                report.is_triangulated_disk = f.len() >= 3 && distinct == f.len();
                report.is_triangulation = report.is_triangulated_disk && f.len() == 3;
            }
        }
        report
    }

    /// Every component may have at most one non-triangle orbit, and in the
    /// anchor's component that orbit must be the anchored one. Returns the
    /// walk of a violating face.
    fn near_triangulation_offender(
        &self,
        comps: &[Vec<usize>],
        orbits: &[Vec<(usize, usize)>],
    ) -> Option<Vec<usize>> {
        let bound = self.rotations.len();
        let mut comp_of = vec![usize::MAX; bound];
        for (ci, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        let anchor_orbit_idx = self.outer.map(|a| {
            orbits
                .iter()
                .position(|o| o.contains(&a))
                .expect("anchor lies on some orbit")
        });
        let anchor_comp = anchor_orbit_idx.map(|i| comp_of[orbits[i][0].0]);
        let mut non_tri_per_comp = vec![0usize; comps.len()];
        for (i, orbit) in orbits.iter().enumerate() {
            if orbit.len() == 3 {
                continue;
            }
            let ci = comp_of[orbit[0].0];
            non_tri_per_comp[ci] += 1;
            let over = non_tri_per_comp[ci] > 1;
            let misplaced = Some(ci) == anchor_comp && anchor_orbit_idx != Some(i);
            if over || misplaced {
                return Some(orbit.iter().map(|&(u, _)| u).collect());
            }
        }
        None
    }

    /// Near-triangulation test without the full structural report; used on
    /// the solver's hot path where the graph is an edit of a valid one.
    pub(crate) fn is_near_triangulation_quick(&self) -> bool {
        let comps = self.components();
        let orbits = self.all_orbits();
        self.euler_check(orbits.len(), self.edge_count(), comps.len())
            && self.near_triangulation_offender(&comps, &orbits).is_none()
    }

    /// The oriented boundary cycle of a triangulated disk.
    pub fn boundary(&self) -> Result<BoundaryCycle> {
        let f = self.outer_face().ok_or(Error::NotADisk)?;
        let walk = f.walk().to_vec();
        let mut succ = BTreeMap::new();
        let n = walk.len();
        if n < 3 {
            return Err(Error::NotADisk);
        }
        for i in 0..n {
            if succ.insert(walk[i], walk[(i + 1) % n]).is_some() {
                return Err(Error::NotADisk);
            }
        }
        Ok(BoundaryCycle { cycle: walk, succ })
    }

    // ----- edits (all return new graphs) -----

    /// Delete an edge lying on the outer face; the inner face incident to it
    /// merges into the outer face.
    pub fn delete_boundary_edge(&self, u: usize, v: usize) -> Result<EmbeddedGraph> {
        if !self.has_edge(u, v) {
            return Err(Error::NotBoundaryEdge(u, v));
        }
        let anchor = self.outer.ok_or(Error::NotBoundaryEdge(u, v))?;
        let orbit = self.trace_orbit(anchor);
        if !orbit.contains(&(u, v)) && !orbit.contains(&(v, u)) {
            return Err(Error::NotBoundaryEdge(u, v));
        }
        Ok(self.delete_edge_with_orbit(u, v, &orbit))
    }

    /// Delete an arbitrary edge, re-anchoring the outer face if needed.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<EmbeddedGraph> {
        if !self.has_edge(u, v) {
            return Err(Error::UnknownEdge(u, v));
        }
        let orbit = self.outer.map(|a| self.trace_orbit(a)).unwrap_or_default();
        Ok(self.delete_edge_with_orbit(u, v, &orbit))
    }

    fn delete_edge_with_orbit(
        &self,
        u: usize,
        v: usize,
        outer_orbit: &[(usize, usize)],
    ) -> EmbeddedGraph {
        let mut rotations = self.rotations.clone();
        rotations[u].retain(|&x| x != v);
        rotations[v].retain(|&x| x != u);
        let dead = [(u, v), (v, u)];
        let outer = match self.outer {
            Some(a) if !dead.contains(&a) => Some(a),
            Some(_) => outer_orbit
                .iter()
                .copied()
                .find(|e| !dead.contains(e))
                .or_else(|| {
                    // deleted the only boundary edges; re-anchor anywhere
                    let g = EmbeddedGraph::from_parts(rotations.clone(), self.alive.clone(), None);
                    g.fallback_anchor()
                }),
            None => None,
        };
        EmbeddedGraph::from_parts(rotations, self.alive.clone(), outer)
    }

    /// Delete a vertex; all faces incident to it merge into one.
    pub fn delete_vertex(&self, v: usize) -> Result<EmbeddedGraph> {
        if !self.is_alive(v) {
            return Err(Error::UnknownVertex(v));
        }
        let outer_orbit = self.outer.map(|a| self.trace_orbit(a)).unwrap_or_default();
        let mut rotations = self.rotations.clone();
        for &w in &self.rotations[v] {
            rotations[w].retain(|&x| x != v);
        }
        rotations[v].clear();
        let mut alive = self.alive.clone();
        alive[v] = false;
        let outer = match self.outer {
            None => None,
            Some((a, b)) if a != v && b != v => Some((a, b)),
            Some(_) => {
                let surviving = outer_orbit
                    .iter()
                    .copied()
                    .find(|&(a, b)| a != v && b != v);
                surviving.or_else(|| {
                    let g = EmbeddedGraph::from_parts(rotations.clone(), alive.clone(), None);
                    g.fallback_anchor()
                })
            }
        };
        Ok(EmbeddedGraph::from_parts(rotations, alive, outer))
    }

    /// Insert edge u–w inside face `f`, splitting it in two. When `f` is the
    /// outer face, the side still containing the anchor remains outer.
    pub fn add_edge_in_face(&self, u: usize, w: usize, f: &Face) -> Result<EmbeddedGraph> {
        if self.has_edge(u, w) {
            return Err(Error::AlreadyAdjacent(u, w));
        }
        if u == w {
            return Err(Error::AlreadyAdjacent(u, w));
        }
        // Re-trace to confirm the face is current.
        let walk = f.walk();
        if walk.len() < 2 {
            return Err(Error::NotOnFace(u));
        }
        let start = (walk[0], walk[1]);
        if !self.has_edge(start.0, start.1) {
            return Err(Error::InternalInvariantViolation(
                "stale face passed to add_edge_in_face".into(),
            ));
        }
        let orbit = self.trace_orbit(start);
        if orbit.len() != walk.len()
            || orbit
                .iter()
                .zip(walk.iter())
                .any(|(&(a, _), &b)| a != b)
        {
            return Err(Error::InternalInvariantViolation(
                "stale face passed to add_edge_in_face".into(),
            ));
        }
        // Corner of the first occurrence of each endpoint: (arrive_from, x).
        let arrive = |x: usize| -> Result<usize> {
            orbit
                .iter()
                .find(|&&(_, b)| b == x)
                .map(|&(a, _)| a)
                .ok_or(Error::NotOnFace(x))
        };
        let a_u = arrive(u)?;
        let a_w = arrive(w)?;
        let mut rotations = self.rotations.clone();
        let iu = rotations[u].iter().position(|&x| x == a_u).unwrap();
        rotations[u].insert(iu + 1, w);
        let iw = rotations[w].iter().position(|&x| x == a_w).unwrap();
        rotations[w].insert(iw + 1, u);
        Ok(EmbeddedGraph::from_parts(
            rotations,
            self.alive.clone(),
            self.outer,
        ))
    }

    /// Insert a fresh vertex inside face `f`, joined to every corner of the
    /// walk (used by the triangulation generator on triangular faces).
    pub(crate) fn stack_vertex_in_face(&self, f: &Face) -> Result<(EmbeddedGraph, usize)> {
        let walk = f.walk();
        let w = self.rotations.len();
        let mut rotations = self.rotations.clone();
        rotations.push(walk.iter().rev().copied().collect());
        let n = walk.len();
        for i in 0..n {
            let a = walk[i];
            let b = walk[(i + 1) % n];
            let ia = rotations[b]
                .iter()
                .position(|&x| x == a)
                .ok_or(Error::NotOnFace(b))?;
            rotations[b].insert(ia + 1, w);
        }
        let mut alive = self.alive.clone();
        alive.push(true);
        Ok((
            EmbeddedGraph::from_parts(rotations, alive, self.outer),
            w,
        ))
    }

    /// Replace a degree-3 vertex by a triangle on its neighbors (Δ–Y
    /// expansion): delete `v` and insert every missing edge among its three
    /// neighbors through the vacated disk.
    pub(crate) fn replace_degree3_by_triangle(&self, v: usize) -> Result<EmbeddedGraph> {
        let cyc = self.rotations[v].clone();
        if cyc.len() != 3 {
            return Err(Error::InternalInvariantViolation(format!(
                "replace_degree3_by_triangle on vertex {v} of degree {}",
                cyc.len()
            )));
        }
        let mut rotations = self.rotations.clone();
        for (i, &x) in cyc.iter().enumerate() {
            let s = cyc[(i + 1) % 3];
            let p = cyc[(i + 2) % 3];
            let pos = rotations[x].iter().position(|&y| y == v).unwrap();
            let mut slot = Vec::new();
            if !self.rotations[x].contains(&s) {
                slot.push(s);
            }
            if !self.rotations[x].contains(&p) {
                slot.push(p);
            }
            rotations[x].splice(pos..=pos, slot);
        }
        rotations[v].clear();
        let mut alive = self.alive.clone();
        alive[v] = false;
        let outer = match self.outer {
            Some((a, b)) if a == v || b == v => None,
            o => o,
        };
        let mut g = EmbeddedGraph::from_parts(rotations, alive, outer);
        if g.outer.is_none() {
            g.outer = g.fallback_anchor();
        }
        Ok(g)
    }
}

/// If `orbit`'s vertex walk equals `target` up to rotation, return the
/// directed edge at which the match starts.
fn walk_match_anchor(orbit: &[(usize, usize)], target: &[usize]) -> Option<(usize, usize)> {
    let n = orbit.len();
    if n != target.len() || n == 0 {
        return None;
    }
    'offsets: for off in 0..n {
        for i in 0..n {
            if orbit[(off + i) % n].0 != target[i] {
                continue 'offsets;
            }
        }
        return Some(orbit[off]);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Family};

    fn k4() -> EmbeddedGraph {
        named(Family::K4, 0).unwrap()
    }

    fn diamond() -> EmbeddedGraph {
        named(Family::Diamond, 0).unwrap()
    }

    #[test]
    fn build_k4() {
        let g = k4();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 4);
        assert_eq!(faces.iter().filter(|f| f.is_outer()).count(), 1);
        assert!(faces.iter().all(|f| f.is_triangle()));
    }

    #[test]
    fn build_rejects_asymmetric_input() {
        // 0 lists 1, but 1 omits 0
        let rots = vec![vec![1], vec![2], vec![1]];
        match EmbeddedGraph::build(rots, &[0, 1]) {
            Err(Error::NonSymmetricAdjacency { .. }) => {}
            other => panic!("expected NonSymmetricAdjacency, got {other:?}"),
        }
    }

    #[test]
    fn build_rejects_bad_outer_walk() {
        // the diamond has no face walked 0, 1, 2, 3 in this rotation system
        let rots = vec![vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]];
        match EmbeddedGraph::build(rots, &[0, 1, 3, 2]) {
            Err(Error::OuterFaceNotFound) => {}
            other => panic!("expected OuterFaceNotFound, got {other:?}"),
        }
    }

    #[test]
    fn three_sun_faces() {
        let g = named(Family::ThreeSun, 0).unwrap();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 5);
        let mut lens: Vec<usize> = faces.iter().map(|f| f.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![3, 3, 3, 3, 6]);
        // inner triangles: center {0,2,4} plus the three corners
        let walks: Vec<Vec<usize>> = faces
            .iter()
            .filter(|f| f.is_triangle())
            .map(|f| {
                let mut w = f.walk().to_vec();
                w.sort_unstable();
                w
            })
            .collect();
        assert!(walks.contains(&vec![0, 2, 4]));
    }

    #[test]
    fn diamond_faces_and_validate() {
        let g = diamond();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 3);
        let report = g.validate();
        assert!(report.is_near_triangulation);
        assert!(report.is_triangulated_disk);
        assert!(!report.is_triangulation);
    }

    #[test]
    fn k4_is_triangulation() {
        let report = k4().validate();
        assert!(report.is_triangulation);
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        // triangles 0-1-2 and 2-3-4 glued at 2
        let rots = vec![
            vec![1, 2],
            vec![2, 0],
            vec![0, 1, 3, 4],
            vec![4, 2],
            vec![2, 3],
        ];
        // outer walk visits 2 twice
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4, 2]).unwrap();
        let report = g.validate();
        assert!(report.is_near_triangulation);
        assert!(!report.is_triangulated_disk);
        assert!(matches!(g.boundary(), Err(Error::NotADisk)));
    }

    #[test]
    fn boundary_of_wheel() {
        let g = named(Family::Wheel, 5).unwrap();
        let b = g.boundary().unwrap();
        assert_eq!(b.len(), 5);
        assert!(!b.contains(5)); // hub internal
        assert_eq!(b.clockwise_next(0), Some(1));
        assert_eq!(b.clockwise_next(4), Some(0));
    }

    #[test]
    fn delete_boundary_edge_k4() {
        let g = k4();
        let g2 = g.delete_boundary_edge(0, 1).unwrap();
        let report = g2.validate();
        assert!(report.is_near_triangulation);
        let outer = g2.outer_face().unwrap();
        assert_eq!(outer.len(), 4);
    }

    #[test]
    fn delete_boundary_edge_diamond() {
        // deleting (0,1) leaves triangle 0-2-3 with vertex 1 pendant on 2
        let g2 = diamond().delete_boundary_edge(0, 1).unwrap();
        let report = g2.validate();
        assert!(report.is_near_triangulation);
        assert!(!report.is_triangulated_disk);
        assert_eq!(g2.degree(1), 1);
        let faces = g2.trace_faces();
        assert_eq!(faces.len(), 2);
    }

    #[test]
    fn delete_internal_edge_is_not_boundary() {
        let g = diamond();
        match g.delete_boundary_edge(0, 2) {
            Err(Error::NotBoundaryEdge(0, 2)) => {}
            other => panic!("expected NotBoundaryEdge, got {other:?}"),
        }
    }

    #[test]
    fn delete_vertex_cases() {
        let w5 = named(Family::Wheel, 5).unwrap();
        let c5 = w5.delete_vertex(5).unwrap();
        assert_eq!(c5.n(), 5);
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.vertices().all(|v| c5.degree(v) == 2));

        let g = diamond().delete_vertex(1).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.validate().is_triangulation);

        let g = k4().delete_vertex(0).unwrap();
        assert!(g.validate().is_triangulation);
    }

    #[test]
    fn add_edge_in_inner_face_of_c4() {
        let rots = vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3]).unwrap();
        let inner = g
            .trace_faces()
            .into_iter()
            .find(|f| !f.is_outer())
            .unwrap();
        let g2 = g.add_edge_in_face(0, 2, &inner).unwrap();
        let report = g2.validate();
        assert!(report.is_triangulated_disk);
        assert_eq!(g2.edge_count(), 5);
    }

    #[test]
    fn add_edge_rejects_adjacent_pair() {
        let g = diamond();
        let outer = g.outer_face().unwrap();
        match g.add_edge_in_face(0, 1, &outer) {
            Err(Error::AlreadyAdjacent(0, 1)) => {}
            other => panic!("expected AlreadyAdjacent, got {other:?}"),
        }
    }

    #[test]
    fn add_chord_through_outer_face_splits_it() {
        // C5: add chord (0,2) through the outer face
        let rots = vec![
            vec![1, 4],
            vec![2, 0],
            vec![3, 1],
            vec![4, 2],
            vec![0, 3],
        ];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4]).unwrap();
        let outer = g.outer_face().unwrap();
        let g2 = g.add_edge_in_face(0, 2, &outer).unwrap();
        let faces = g2.trace_faces();
        let mut lens: Vec<usize> = faces.iter().map(|f| f.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![3, 4, 5]);
    }

    #[test]
    fn euler_preserved_by_edits() {
        let g = named(Family::Wheel, 7).unwrap();
        for v in 0..7 {
            let g2 = g.delete_vertex(v).unwrap();
            assert!(g2.validate().is_planar_embedding);
        }
        let b = g.boundary().unwrap();
        let cyc = b.cycle().to_vec();
        for i in 0..cyc.len() {
            let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
            let g2 = g.delete_boundary_edge(u, v).unwrap();
            assert!(g2.validate().is_near_triangulation);
        }
    }

    #[test]
    fn bridges_and_cuts() {
        // two triangles joined by a bridge 2-3
        let rots = vec![
            vec![1, 2],
            vec![2, 0],
            vec![0, 1, 3],
            vec![2, 4, 5],
            vec![5, 3],
            vec![3, 4],
        ];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4, 5, 3, 2]).unwrap();
        let (bridges, cuts) = g.bridges_and_cut_vertices();
        assert_eq!(bridges, vec![(2, 3)]);
        assert_eq!(cuts, vec![2, 3]);
    }
}
