//! The minimal-counterexample machinery as a terminating rewrite system:
//! detect an applicable reduction, recurse on strictly smaller instances,
//! and lift child colorings back (with flips) to the parent.
//!
//! Rule priority: Component > Bridge > CutVertex > base cases >
//! DropBoundaryEdge > DropTwoVertexPair > DropPlainTwoVertex. Ties within a
//! rule break toward the smallest vertex/edge id. An instance none of the
//! rules match is irreducible and goes to the pipeline.

use std::time::Instant;

use crate::coloring::{Color, SpecialSet, TwoColoring};
use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};
use crate::fair::FourColorConfig;
use crate::oracle::{check_coupon, theorem_targets};
use crate::pipeline::{run_pipeline, PipelineArtifacts, PipelineTimings};

/// Which rewrite rule a step applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Component,
    Bridge,
    CutVertex,
    BaseK3,
    BaseK4,
    BaseDiamond,
    DropBoundaryEdge,
    DropTwoVertexPair,
    DropPlainTwoVertex,
}

/// How a deleted bridge endpoint receives its color during the lift.
#[derive(Debug, Clone)]
enum Assign {
    /// Any color satisfies the parent; color a is used.
    Any(usize),
    /// The vertex must receive the color opposite to the named vertex's.
    OppositeOf(usize, usize),
}

/// A single relative-flip constraint between the two bridge children.
/// The second child's coloring is flipped when the constraint fails.
#[derive(Debug, Clone)]
enum FlipConstraint {
    /// The kept endpoint must see both colors in its full parent
    /// neighborhood (stored, since the child graph no longer has it all).
    SeesBoth { neighbors: Vec<usize> },
    /// The two named vertices must receive different colors.
    Differ { a: usize, b: usize },
}

#[derive(Debug, Clone)]
enum LiftPlan {
    /// Disjoint union of the child colorings.
    Union,
    /// Children are the two sides of a bridge; apply the optional flip, then
    /// color the deleted endpoints.
    Bridge {
        flip: Option<FlipConstraint>,
        assigns: Vec<Assign>,
    },
    /// Children share the cut vertex; flip the second child to match.
    CutVertex { v: usize },
    /// Leaf: color the stored base instance directly.
    Base {
        graph: EmbeddedGraph,
        specials: SpecialSet,
    },
    /// The child coloring is already good for the parent.
    Identity,
    /// Obs-5 style extension: v gets the color opposite to x, w opposite to u.
    TwoVertexPair { v: usize, w: usize, u: usize, x: usize },
    /// The dropped 2-vertex takes color a.
    PlainTwoVertex { v: usize },
}

/// One applied rewrite rule: the subproblem list plus the data needed to
/// lift child colorings back to the parent.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub kind: RuleKind,
    children: Vec<(EmbeddedGraph, SpecialSet)>,
    plan: LiftPlan,
}

impl ReductionStep {
    pub fn children(&self) -> &[(EmbeddedGraph, SpecialSet)] {
        &self.children
    }
}

fn child_specials(g: &EmbeddedGraph, members: Vec<usize>) -> Result<SpecialSet> {
    SpecialSet::new(members, g).map_err(|e| {
        Error::InternalInvariantViolation(format!("constructed invalid child special set: {e}"))
    })
}

/// First target vertex (3⁺ or special) not seeing both colors, if any.
/// Index-based fast path for the per-level self-checks.
fn goodness_violation(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    f: &TwoColoring,
) -> Result<Option<usize>> {
    let bound = g.id_bound();
    let mut colors: Vec<Option<Color>> = vec![None; bound];
    for (v, c) in f.iter() {
        if v < bound {
            colors[v] = Some(c);
        }
    }
    for v in g.vertices() {
        if colors[v].is_none() {
            return Err(Error::PartialColoring(v));
        }
    }
    for v in g.vertices() {
        if g.degree(v) < 3 && !specials.contains(v) {
            continue;
        }
        let mut a = false;
        let mut b = false;
        for &w in g.neighbors(v) {
            match colors[w] {
                Some(Color::A) => a = true,
                Some(Color::B) => b = true,
                None => {}
            }
        }
        if !(a && b) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Find the first applicable reduction in the fixed priority order, or
/// `None` when the instance is irreducible. An irreducible instance is
/// 2-connected, has at least 5 vertices, no consecutive boundary
/// 4⁺-vertices, and every 2-vertex lies in S with only 4⁺-neighbors.
pub fn find_reduction(g: &EmbeddedGraph, specials: &SpecialSet) -> Result<Option<ReductionStep>> {
    if g.n() <= 1 {
        return Ok(None);
    }

    let comps = g.components();
    if comps.len() >= 2 {
        let mut children = Vec::with_capacity(comps.len());
        for comp in &comps {
            let child = g.induce(comp);
            let members: Vec<usize> = specials
                .members()
                .iter()
                .copied()
                .filter(|v| comp.contains(v))
                .collect();
            let s = child_specials(&child, members)?;
            children.push((child, s));
        }
        return finish_step(
            g,
            ReductionStep {
                kind: RuleKind::Component,
                children,
                plan: LiftPlan::Union,
            },
        );
    }

    let (bridges, cuts) = g.bridges_and_cut_vertices();
    if let Some(&(u, v)) = bridges.first() {
        return finish_step(g, bridge_step(g, specials, u, v)?);
    }
    if let Some(&v) = cuts.first() {
        return finish_step(g, cut_vertex_step(g, specials, v)?);
    }

    if g.n() <= 4 {
        let kind = match (g.n(), g.edge_count()) {
            (3, 3) => RuleKind::BaseK3,
            (4, 6) => RuleKind::BaseK4,
            (4, 5) => RuleKind::BaseDiamond,
            (n, e) => {
                return Err(Error::InternalInvariantViolation(format!(
                    "2-connected near-triangulation with n={n}, e={e} matches no base case"
                )))
            }
        };
        return Ok(Some(ReductionStep {
            kind,
            children: Vec::new(),
            plan: LiftPlan::Base {
                graph: g.clone(),
                specials: specials.clone(),
            },
        }));
    }

    // 2-connected with >= 5 vertices: the boundary is a simple cycle.
    let boundary = g.boundary()?;
    let cyc = boundary.cycle();
    let mut drop_edge: Option<(usize, usize)> = None;
    for i in 0..cyc.len() {
        let (a, b) = (cyc[i], cyc[(i + 1) % cyc.len()]);
        if g.degree(a) >= 4 && g.degree(b) >= 4 {
            let e = (a.min(b), a.max(b));
            if drop_edge.map_or(true, |best| e < best) {
                drop_edge = Some(e);
            }
        }
    }
    if let Some((a, b)) = drop_edge {
        let child = g.delete_boundary_edge(a, b)?;
        let s = child_specials(&child, specials.members().to_vec())?;
        return finish_step(
            g,
            ReductionStep {
                kind: RuleKind::DropBoundaryEdge,
                children: vec![(child, s)],
                plan: LiftPlan::Identity,
            },
        );
    }

    // 2-vertex with a 3⁻-neighbor (necessarily degree exactly 3 here)
    for v in g.vertices() {
        if g.degree(v) != 2 {
            continue;
        }
        let low: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| g.degree(w) <= 3)
            .collect();
        let Some(&w) = low.iter().min() else { continue };
        if g.degree(w) != 3 {
            return Err(Error::InternalInvariantViolation(format!(
                "2-vertex {v} has a neighbor {w} of degree {}",
                g.degree(w)
            )));
        }
        let u = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&y| y != w)
            .expect("2-vertex has two neighbors");
        let x = g
            .neighbors(w)
            .iter()
            .copied()
            .find(|&y| y != v && y != u)
            .ok_or_else(|| {
                Error::InternalInvariantViolation(format!(
                    "3-vertex {w} lacks a third neighbor"
                ))
            })?;
        if !g.has_edge(u, w) || !g.has_edge(u, x) {
            return Err(Error::InternalInvariantViolation(format!(
                "vertices {u}, {v}, {w}, {x} do not induce a diamond"
            )));
        }
        let child = g.delete_vertex(v)?.delete_vertex(w)?;
        let members: Vec<usize> = specials
            .members()
            .iter()
            .copied()
            .filter(|&sv| sv != v && sv != x)
            .collect();
        let s = child_specials(&child, members)?;
        return finish_step(
            g,
            ReductionStep {
                kind: RuleKind::DropTwoVertexPair,
                children: vec![(child, s)],
                plan: LiftPlan::TwoVertexPair { v, w, u, x },
            },
        );
    }

    // plain 2-vertex outside S (its neighbors are 4⁺ by the rule above)
    for v in g.vertices() {
        if g.degree(v) == 2 && !specials.contains(v) {
            let child = g.delete_vertex(v)?;
            let s = child_specials(&child, specials.members().to_vec())?;
            return finish_step(
                g,
                ReductionStep {
                    kind: RuleKind::DropPlainTwoVertex,
                    children: vec![(child, s)],
                    plan: LiftPlan::PlainTwoVertex { v },
                },
            );
        }
    }

    // Irreducible. No chord may join two boundary 3-vertices; anything else
    // indicates an upstream bug.
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
                return Err(Error::InternalInvariantViolation(format!(
                    "irreducible instance has a chord between boundary 3-vertices {u} and {w}"
                )));
            }
        }
    }
    Ok(None)
}

/// Every child must be strictly smaller than the parent in |V| + |E|.
fn finish_step(g: &EmbeddedGraph, step: ReductionStep) -> Result<Option<ReductionStep>> {
    let parent = g.n() + g.edge_count();
    for (child, _) in &step.children {
        if child.n() + child.edge_count() >= parent {
            return Err(Error::InternalInvariantViolation(format!(
                "{:?} produced a child no smaller than its parent",
                step.kind
            )));
        }
    }
    Ok(Some(step))
}

/// How one bridge endpoint is handled.
enum EndpointClass {
    /// Satisfied structurally (degree ≥ 4 in the parent, degree 1, or an
    /// unconstrained 2-vertex): nothing to do.
    Fine,
    /// Parent 3-vertex, residual degree 2: promoted into the child's specials.
    Promote,
    /// Parent 3-vertex that cannot be promoted (child specials full):
    /// satisfied by flipping the other side.
    FlipSees,
    /// Special 2-vertex: deleted from its child and colored during the lift.
    DeleteSpecial {
        /// Its one same-side neighbor.
        r: usize,
        /// Whether r is itself special (then S = {endpoint, r}).
        r_special: bool,
        /// r's other neighbor, when r is special.
        z: Option<usize>,
    },
}

fn classify_endpoint(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    x: usize,
    partner: usize,
    side: &[usize],
) -> EndpointClass {
    let d = g.degree(x);
    if specials.contains(x) {
        debug_assert_eq!(d, 2);
        let r = g
            .neighbors(x)
            .iter()
            .copied()
            .find(|&y| y != partner)
            .expect("degree-2 endpoint has a same-side neighbor");
        let r_special = specials.contains(r);
        let z = if r_special {
            g.neighbors(r).iter().copied().find(|&y| y != x)
        } else {
            None
        };
        return EndpointClass::DeleteSpecial { r, r_special, z };
    }
    if d == 3 {
        let others = specials
            .members()
            .iter()
            .filter(|&&s| side.contains(&s))
            .count();
        if others <= 1 {
            EndpointClass::Promote
        } else {
            EndpointClass::FlipSees
        }
    } else {
        EndpointClass::Fine
    }
}

fn bridge_step(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    u: usize,
    v: usize,
) -> Result<ReductionStep> {
    let without = g.delete_edge(u, v)?;
    let comps = without.components();
    if comps.len() != 2 {
        return Err(Error::InternalInvariantViolation(format!(
            "bridge ({u}, {v}) did not split the graph in two"
        )));
    }
    let side_u = comps
        .iter()
        .find(|c| c.contains(&u))
        .expect("bridge endpoint in a component")
        .clone();
    let side_v = comps
        .iter()
        .find(|c| c.contains(&v))
        .expect("bridge endpoint in a component")
        .clone();

    let class_u = classify_endpoint(g, specials, u, v, &side_u);
    let class_v = classify_endpoint(g, specials, v, u, &side_v);

    let mut flip: Option<FlipConstraint> = None;
    let mut assigns: Vec<Assign> = Vec::new();
    let mut push_flip = |c: FlipConstraint| -> Result<()> {
        if flip.is_some() {
            return Err(Error::InternalInvariantViolation(
                "two flip constraints at one bridge".into(),
            ));
        }
        flip = Some(c);
        Ok(())
    };

    let both_deleted = matches!(class_u, EndpointClass::DeleteSpecial { .. })
        && matches!(class_v, EndpointClass::DeleteSpecial { .. });

    let mut children = Vec::with_capacity(2);
    for (x, partner, side, class, other_class) in [
        (u, v, &side_u, &class_u, &class_v),
        (v, u, &side_v, &class_v, &class_u),
    ] {
        let mut graph = without.induce(side);
        let mut members: Vec<usize> = specials
            .members()
            .iter()
            .copied()
            .filter(|s| side.contains(s))
            .collect();
        match class {
            EndpointClass::Fine => {}
            EndpointClass::Promote => members.push(x),
            EndpointClass::FlipSees => {
                push_flip(FlipConstraint::SeesBoth {
                    neighbors: g.neighbors(x).to_vec(),
                })?;
            }
            EndpointClass::DeleteSpecial { r, r_special, z } => {
                graph = graph.delete_vertex(x)?;
                members.retain(|&s| s != x);
                if *r_special {
                    // S = {x, r}: r leaves the child (degree 1 there); its
                    // requirement pins x's color away from z's.
                    members.retain(|&s| s != *r);
                    let z = z.ok_or_else(|| {
                        Error::InternalInvariantViolation(
                            "special residual neighbor lacks a second neighbor".into(),
                        )
                    })?;
                    assigns.push(Assign::OppositeOf(x, z));
                } else {
                    if g.degree(*r) == 3 {
                        // r lost x; promote it so the child keeps it satisfied
                        members.push(*r);
                    }
                    assigns.push(Assign::Any(x));
                }
                // x's own requirement: it sees {r, partner}
                if both_deleted {
                    // partner is colored by an assignment, handled below
                } else {
                    push_flip(FlipConstraint::Differ {
                        a: partner,
                        b: *r,
                    })?;
                }
                let _ = other_class;
            }
        }
        let s = child_specials(&graph, members)?;
        children.push((graph, s));
    }

    if both_deleted {
        // each deleted endpoint must differ from the other's residual neighbor
        let r_of = |class: &EndpointClass| match class {
            EndpointClass::DeleteSpecial { r, .. } => *r,
            _ => unreachable!(),
        };
        assigns = vec![
            Assign::OppositeOf(u, r_of(&class_v)),
            Assign::OppositeOf(v, r_of(&class_u)),
        ];
    }

    Ok(ReductionStep {
        kind: RuleKind::Bridge,
        children,
        plan: LiftPlan::Bridge { flip, assigns },
    })
}

fn cut_vertex_step(g: &EmbeddedGraph, specials: &SpecialSet, v: usize) -> Result<ReductionStep> {
    if specials.contains(v) {
        return Err(Error::InternalInvariantViolation(format!(
            "cut vertex {v} cannot be special"
        )));
    }
    let without = g.delete_vertex(v)?;
    let comps = without.components();
    if comps.len() < 2 {
        return Err(Error::InternalInvariantViolation(format!(
            "vertex {v} is not a cut vertex"
        )));
    }
    let mut side1: Vec<usize> = comps[0].clone();
    side1.push(v);
    side1.sort_unstable();
    let mut side2: Vec<usize> = comps[1..].iter().flatten().copied().collect();
    side2.push(v);
    side2.sort_unstable();

    let child1 = g.induce(&side1);
    let child2 = g.induce(&side2);
    let d1 = child1.degree(v);
    let d2 = child2.degree(v);
    if d1 < 2 || d2 < 2 {
        return Err(Error::InternalInvariantViolation(format!(
            "cut vertex {v} has residual degree < 2 (bridges go first)"
        )));
    }
    let mut members1: Vec<usize> = specials
        .members()
        .iter()
        .copied()
        .filter(|s| side1.contains(s) && *s != v)
        .collect();
    let mut members2: Vec<usize> = specials
        .members()
        .iter()
        .copied()
        .filter(|s| side2.contains(s) && *s != v)
        .collect();
    // v needs promoting only when no side keeps it a 3⁺-vertex
    if d1 == 2 && d2 == 2 {
        if members1.len() <= 1 {
            members1.push(v);
        } else {
            members2.push(v);
        }
    }
    let s1 = child_specials(&child1, members1)?;
    let s2 = child_specials(&child2, members2)?;
    Ok(ReductionStep {
        kind: RuleKind::CutVertex,
        children: vec![(child1, s1), (child2, s2)],
        plan: LiftPlan::CutVertex { v },
    })
}

/// Return the validated subproblem list of a step found on (g, specials).
pub fn apply_reduction(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    step: &ReductionStep,
) -> Result<Vec<(EmbeddedGraph, SpecialSet)>> {
    let _ = (g, specials);
    for (child, s) in &step.children {
        if !child.is_near_triangulation_quick() {
            return Err(Error::InternalInvariantViolation(format!(
                "{:?} produced a child that is not a near-triangulation",
                step.kind
            )));
        }
        if s.len() > 2 {
            return Err(Error::InternalInvariantViolation(
                "child special set larger than 2".into(),
            ));
        }
    }
    Ok(step.children.clone())
}

/// Direct good colorings of the three base instances.
pub fn base_case_coloring(g: &EmbeddedGraph, specials: &SpecialSet) -> Result<TwoColoring> {
    let verts: Vec<usize> = g.vertices().collect();
    let mut f = TwoColoring::new();
    match (g.n(), g.edge_count()) {
        (3, 3) => {
            match specials.len() {
                0 => {
                    for &v in &verts {
                        f.set(v, Color::A);
                    }
                }
                1 => {
                    let s = specials.members()[0];
                    let others: Vec<usize> =
                        verts.iter().copied().filter(|&v| v != s).collect();
                    f.set(s, Color::A);
                    f.set(others[0], Color::A);
                    f.set(others[1], Color::B);
                }
                _ => {
                    let z = verts
                        .iter()
                        .copied()
                        .find(|v| !specials.contains(*v))
                        .expect("K3 has a non-special vertex");
                    for &v in &verts {
                        f.set(v, if v == z { Color::A } else { Color::B });
                    }
                }
            }
        }
        (4, 6) => {
            // K4: two a's and two b's satisfy everyone
            for (i, &v) in verts.iter().enumerate() {
                f.set(v, if i < 2 { Color::A } else { Color::B });
            }
        }
        (4, 5) => {
            // diamond: chord endpoints (degree 3) and rim (degree 2) each
            // split across the colors
            let mut hubs: Vec<usize> = verts.iter().copied().filter(|&v| g.degree(v) == 3).collect();
            let mut rims: Vec<usize> = verts.iter().copied().filter(|&v| g.degree(v) == 2).collect();
            hubs.sort_unstable();
            rims.sort_unstable();
            if hubs.len() != 2 || rims.len() != 2 {
                return Err(Error::NotABaseCase);
            }
            f.set(hubs[0], Color::A);
            f.set(hubs[1], Color::B);
            f.set(rims[0], Color::A);
            f.set(rims[1], Color::B);
        }
        _ => return Err(Error::NotABaseCase),
    }
    let targets = theorem_targets(g, specials.members());
    let report = check_coupon(g, &targets, &f)?;
    if !report.satisfied {
        return Err(Error::InternalInvariantViolation(
            "base case coloring failed its own check".into(),
        ));
    }
    Ok(f)
}

/// Compose child colorings into a good coloring of the parent.
pub fn lift(step: &ReductionStep, child_colorings: &[TwoColoring]) -> Result<TwoColoring> {
    if child_colorings.len() != step.children.len() {
        return Err(Error::ChildNotGood(format!(
            "{} colorings for {} children",
            child_colorings.len(),
            step.children.len()
        )));
    }
    for ((child, s), f) in step.children.iter().zip(child_colorings) {
        if let Some(v) = goodness_violation(child, s, f)? {
            return Err(Error::ChildNotGood(format!("vertex {v} is unsatisfied")));
        }
    }
    match &step.plan {
        LiftPlan::Union => {
            let mut f = TwoColoring::new();
            for c in child_colorings {
                f.absorb(c);
            }
            Ok(f)
        }
        LiftPlan::Identity => Ok(child_colorings[0].clone()),
        LiftPlan::Base { graph, specials } => base_case_coloring(graph, specials),
        LiftPlan::PlainTwoVertex { v } => {
            let mut f = child_colorings[0].clone();
            f.set(*v, Color::A);
            Ok(f)
        }
        LiftPlan::TwoVertexPair { v, w, u, x } => {
            let mut f = child_colorings[0].clone();
            let cx = f.get(*x).ok_or(Error::PartialColoring(*x))?;
            let cu = f.get(*u).ok_or(Error::PartialColoring(*u))?;
            f.set(*v, cx.opposite());
            f.set(*w, cu.opposite());
            Ok(f)
        }
        LiftPlan::CutVertex { v } => {
            let mut f = child_colorings[0].clone();
            let mut second = child_colorings[1].clone();
            let c0 = f.get(*v).ok_or(Error::PartialColoring(*v))?;
            let c1 = second.get(*v).ok_or(Error::PartialColoring(*v))?;
            if c0 != c1 {
                second.flip();
            }
            f.absorb(&second);
            Ok(f)
        }
        LiftPlan::Bridge { flip, assigns } => {
            let mut f = child_colorings[0].clone();
            let mut second = child_colorings[1].clone();
            if let Some(constraint) = flip {
                let violated = {
                    let mut combined = f.clone();
                    combined.absorb(&second);
                    flip_constraint_violated(constraint, &combined)?
                };
                if violated {
                    second.flip();
                }
            }
            f.absorb(&second);
            for a in assigns {
                match a {
                    Assign::Any(x) => f.set(*x, Color::A),
                    Assign::OppositeOf(x, z) => {
                        let cz = f.get(*z).ok_or(Error::PartialColoring(*z))?;
                        f.set(*x, cz.opposite());
                    }
                }
            }
            if let Some(constraint) = flip {
                if flip_constraint_violated(constraint, &f)? {
                    return Err(Error::InternalInvariantViolation(
                        "bridge flip failed to satisfy its constraint".into(),
                    ));
                }
            }
            Ok(f)
        }
    }
}

fn flip_constraint_violated(c: &FlipConstraint, f: &TwoColoring) -> Result<bool> {
    match c {
        FlipConstraint::Differ { a, b } => {
            let ca = f.get(*a).ok_or(Error::PartialColoring(*a))?;
            let cb = f.get(*b).ok_or(Error::PartialColoring(*b))?;
            Ok(ca == cb)
        }
        FlipConstraint::SeesBoth { neighbors } => {
            let mut a = false;
            let mut b = false;
            for &w in neighbors {
                match f.get(w) {
                    Some(Color::A) => a = true,
                    Some(Color::B) => b = true,
                    None => return Err(Error::PartialColoring(w)),
                }
            }
            Ok(!(a && b))
        }
    }
}

/// Solver configuration.
#[derive(Debug, Clone, Default)]
pub struct SolveConfig {
    pub four_color: FourColorConfig,
    /// Run the pipeline's structural invariant checks (cheap; on by default).
    pub skip_invariant_checks: bool,
    /// Keep the per-irreducible-instance artifacts for dumps and tests.
    pub collect_artifacts: bool,
}

/// Phase timings and counters accumulated over one solve.
#[derive(Debug, Default)]
pub struct SolveStats {
    pub reduction: std::time::Duration,
    pub pipeline: PipelineTimings,
    pub irreducible_instances: usize,
    pub max_four_color_nodes: u64,
    pub artifacts: Vec<PipelineArtifacts>,
}

/// Produce a two-coloring in which every 3⁺-vertex and every special vertex
/// sees both colors.
pub fn solve(g: &EmbeddedGraph, specials: &SpecialSet) -> Result<TwoColoring> {
    Ok(solve_with_stats(g, specials, &SolveConfig::default())?.0)
}

/// [`solve`] with configuration, timings and artifacts.
pub fn solve_with_stats(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    config: &SolveConfig,
) -> Result<(TwoColoring, SolveStats)> {
    if !g.validate().is_near_triangulation {
        return Err(Error::NotNearTriangulation);
    }
    for &s in specials.members() {
        if !g.is_alive(s) || g.degree(s) != 2 {
            return Err(Error::SpecialSetInvalid(format!(
                "vertex {s} is not a 2-vertex of the graph"
            )));
        }
    }
    let mut stats = SolveStats::default();
    let f = solve_rec(g, specials, config, &mut stats)?;
    Ok((f, stats))
}

fn solve_rec(
    g: &EmbeddedGraph,
    specials: &SpecialSet,
    config: &SolveConfig,
    stats: &mut SolveStats,
) -> Result<TwoColoring> {
    if g.n() == 0 {
        return Ok(TwoColoring::new());
    }
    if g.n() == 1 {
        let mut f = TwoColoring::new();
        f.set(g.vertices().next().unwrap(), Color::A);
        return Ok(f);
    }

    let t = Instant::now();
    let step = find_reduction(g, specials)?;
    stats.reduction += t.elapsed();

    let f = match step {
        Some(step) => {
            let t = Instant::now();
            let subproblems = apply_reduction(g, specials, &step)?;
            stats.reduction += t.elapsed();
            let mut colorings = Vec::with_capacity(subproblems.len());
            for (child, s) in &subproblems {
                colorings.push(solve_rec(child, s, config, stats)?);
            }
            let t = Instant::now();
            let f = lift(&step, &colorings)?;
            stats.reduction += t.elapsed();
            f
        }
        None => {
            stats.irreducible_instances += 1;
            let (f, artifacts) = run_pipeline(
                g,
                specials,
                &config.four_color,
                !config.skip_invariant_checks,
                &mut stats.pipeline,
            )?;
            stats.max_four_color_nodes = stats
                .max_four_color_nodes
                .max(artifacts.fair_stats.search_nodes_a)
                .max(artifacts.fair_stats.search_nodes_b);
            if config.collect_artifacts {
                stats.artifacts.push(artifacts);
            }
            f
        }
    };

    if let Some(v) = goodness_violation(g, specials, &f)? {
        return Err(Error::InternalInvariantViolation(format!(
            "returned coloring leaves vertex {v} unsatisfied"
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, Family};

    fn solve_and_check(g: &EmbeddedGraph, members: Vec<usize>) -> TwoColoring {
        let s = SpecialSet::new(members, g).unwrap();
        let f = solve(g, &s).unwrap();
        let targets = theorem_targets(g, s.members());
        assert!(check_coupon(g, &targets, &f).unwrap().satisfied);
        f
    }

    #[test]
    fn base_cases_direct() {
        let k4 = named(Family::K4, 0).unwrap();
        let f = base_case_coloring(&k4, &SpecialSet::empty()).unwrap();
        let n_a = f.iter().filter(|&(_, c)| c == Color::A).count();
        assert_eq!(n_a, 2);

        let k3 = named(Family::K3, 0).unwrap();
        let s = SpecialSet::new(vec![0, 1], &k3).unwrap();
        base_case_coloring(&k3, &s).unwrap();

        let diamond = named(Family::Diamond, 0).unwrap();
        let s = SpecialSet::new(vec![1, 3], &diamond).unwrap();
        base_case_coloring(&diamond, &s).unwrap();

        let w5 = named(Family::Wheel, 5).unwrap();
        assert!(matches!(
            base_case_coloring(&w5, &SpecialSet::empty()),
            Err(Error::NotABaseCase)
        ));
    }

    #[test]
    fn find_reduction_on_k4_is_base() {
        let g = named(Family::K4, 0).unwrap();
        let step = find_reduction(&g, &SpecialSet::empty()).unwrap().unwrap();
        assert_eq!(step.kind, RuleKind::BaseK4);
        assert!(step.children().is_empty());
    }

    #[test]
    fn find_reduction_on_octahedron_drops_a_boundary_edge() {
        let g = named(Family::Octahedron, 0).unwrap();
        let step = find_reduction(&g, &SpecialSet::empty()).unwrap().unwrap();
        assert_eq!(step.kind, RuleKind::DropBoundaryEdge);
        assert_eq!(step.children().len(), 1);
    }

    #[test]
    fn find_reduction_prefers_cut_vertex_over_base() {
        // two K4s sharing vertex 3 (2 internal to the first, 6 to the second)
        let rots = vec![
            vec![1, 2, 3],
            vec![3, 2, 0],
            vec![0, 1, 3],
            vec![0, 2, 1, 4, 6, 5],
            vec![5, 6, 3],
            vec![3, 6, 4],
            vec![3, 4, 5],
        ];
        let g = EmbeddedGraph::build(rots, &[0, 1, 3, 4, 5, 3]).unwrap();
        assert!(g.validate().is_near_triangulation);
        let step = find_reduction(&g, &SpecialSet::empty()).unwrap().unwrap();
        assert_eq!(step.kind, RuleKind::CutVertex);
        assert_eq!(step.children().len(), 2);
        solve_and_check(&g, vec![]);
    }

    #[test]
    fn fan_reduces_by_two_vertex_pair() {
        // F4: p0 has degree 2, neighbor p1 has degree 3
        let g = named(Family::Fan, 4).unwrap();
        let step = find_reduction(&g, &SpecialSet::empty()).unwrap().unwrap();
        assert_eq!(step.kind, RuleKind::DropTwoVertexPair);
        let (child, _) = &step.children()[0];
        assert_eq!(child.n(), 3);
        solve_and_check(&g, vec![]);
        solve_and_check(&g, vec![0, 3]);
    }

    #[test]
    fn bridge_of_two_triangles() {
        let rots = vec![
            vec![1, 2],
            vec![2, 0],
            vec![0, 1, 3],
            vec![2, 4, 5],
            vec![5, 3],
            vec![3, 4],
        ];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4, 5, 3, 2]).unwrap();
        let step = find_reduction(&g, &SpecialSet::empty()).unwrap().unwrap();
        assert_eq!(step.kind, RuleKind::Bridge);
        // both endpoints have degree 3 and get promoted
        for (child, s) in step.children() {
            assert_eq!(child.n(), 3);
            assert_eq!(s.len(), 1);
        }
        solve_and_check(&g, vec![]);
    }

    #[test]
    fn path_with_adjacent_specials_across_a_bridge() {
        // path 0-1-2-3; S = {1, 2}: both endpoints of the bridge (1,2) are
        // special 2-vertices, exercising the double-deletion lift
        let rots = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 2, 1]).unwrap();
        assert!(g.validate().is_near_triangulation);
        solve_and_check(&g, vec![1, 2]);
    }

    #[test]
    fn chain_of_specials_near_a_bridge() {
        // triangle (3,4,5) - 3 - 2 - 1 - 0 - triangle... build:
        // z(0) - x(1) - u(2) - v(3) - w(4), with triangles at both ends
        // simpler: path 0-1-2-3-4 with S = {1, 2}
        let rots = vec![vec![1], vec![0, 2], vec![1, 3], vec![2, 4], vec![3]];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3, 4, 3, 2, 1]).unwrap();
        solve_and_check(&g, vec![1, 2]);
        solve_and_check(&g, vec![2, 3]);
        solve_and_check(&g, vec![1, 3]);
    }

    #[test]
    fn solve_wheels_fans_and_named_families() {
        for (fam, n) in [
            (Family::K3, 0),
            (Family::K4, 0),
            (Family::Diamond, 0),
            (Family::Wheel, 5),
            (Family::Wheel, 6),
            (Family::Wheel, 9),
            (Family::Fan, 2),
            (Family::Fan, 5),
            (Family::Fan, 9),
            (Family::Octahedron, 0),
            (Family::Icosahedron, 0),
        ] {
            let g = named(fam, n).unwrap();
            solve_and_check(&g, vec![]);
        }
    }

    #[test]
    fn solve_three_sun_with_specials() {
        let g = named(Family::ThreeSun, 0).unwrap();
        for members in [vec![], vec![1], vec![1, 3], vec![3, 5]] {
            solve_and_check(&g, members);
        }
    }

    #[test]
    fn solve_rejects_non_near_triangulation() {
        // C4 has an inner quadrilateral face
        let rots = vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]];
        let g = EmbeddedGraph::build(rots, &[0, 1, 2, 3]).unwrap();
        assert!(matches!(
            solve(&g, &SpecialSet::empty()),
            Err(Error::NotNearTriangulation)
        ));
    }

    #[test]
    fn solve_rejects_bad_special_set() {
        let g = named(Family::Wheel, 5).unwrap();
        let s = SpecialSet::from_sorted_unchecked(vec![0]);
        assert!(matches!(
            solve(&g, &s),
            Err(Error::SpecialSetInvalid(_))
        ));
    }

    #[test]
    fn solve_single_vertex_and_edge() {
        let k1 = EmbeddedGraph::build(vec![vec![]], &[]).unwrap();
        let f = solve(&k1, &SpecialSet::empty()).unwrap();
        assert_eq!(f.len(), 1);

        let k2 = EmbeddedGraph::build(vec![vec![1], vec![0]], &[0, 1]).unwrap();
        let f = solve(&k2, &SpecialSet::empty()).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn solve_is_deterministic() {
        let g = named(Family::Wheel, 9).unwrap();
        let a = solve(&g, &SpecialSet::empty()).unwrap();
        let b = solve(&g, &SpecialSet::empty()).unwrap();
        assert_eq!(a, b);
    }
}
