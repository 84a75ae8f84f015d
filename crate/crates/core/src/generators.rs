//! Seeded, deterministic constructors of embedded test instances.
//!
//! Canonical vertex numbering: wheels and fans put the hub last (rim/path
//! 0..n-1, hub n); the 3-sun is the hexagon 0..5 with the inner triangle on
//! the even ids.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    K3,
    K4,
    Diamond,
    ThreeSun,
    Wheel,
    Fan,
    Octahedron,
    Icosahedron,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k3" => Ok(Family::K3),
            "k4" => Ok(Family::K4),
            "diamond" => Ok(Family::Diamond),
            "3sun" | "three-sun" | "threesun" => Ok(Family::ThreeSun),
            "wheel" => Ok(Family::Wheel),
            "fan" => Ok(Family::Fan),
            "octahedron" => Ok(Family::Octahedron),
            "icosahedron" => Ok(Family::Icosahedron),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// Build a named family member. `n` is ignored by the fixed-size families.
pub fn named(family: Family, n: usize) -> Result<EmbeddedGraph> {
    match family {
        Family::K3 => EmbeddedGraph::build(
            vec![vec![1, 2], vec![2, 0], vec![0, 1]],
            &[0, 1, 2],
        ),
        Family::K4 => EmbeddedGraph::build(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            &[0, 1, 2],
        ),
        Family::Diamond => EmbeddedGraph::build(
            vec![vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]],
            &[0, 1, 2, 3],
        ),
        Family::ThreeSun => EmbeddedGraph::build(
            vec![
                vec![1, 2, 4, 5],
                vec![2, 0],
                vec![1, 3, 4, 0],
                vec![2, 4],
                vec![5, 0, 2, 3],
                vec![0, 4],
            ],
            &[0, 1, 2, 3, 4, 5],
        ),
        Family::Wheel => {
            if n < 3 {
                return Err(Error::BadParameter(format!("wheel needs n >= 3, got {n}")));
            }
            let mut rots: Vec<Vec<usize>> = (0..n)
                .map(|i| vec![(i + 1) % n, n, (i + n - 1) % n])
                .collect();
            rots.push((0..n).collect());
            let outer: Vec<usize> = (0..n).collect();
            EmbeddedGraph::build(rots, &outer)
        }
        Family::Fan => {
            if n < 2 {
                return Err(Error::BadParameter(format!("fan needs n >= 2, got {n}")));
            }
            let mut rots: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
            for i in 0..n {
                if i == 0 {
                    rots.push(vec![1, n]);
                } else if i == n - 1 {
                    rots.push(vec![n, n - 2]);
                } else {
                    rots.push(vec![i + 1, n, i - 1]);
                }
            }
            rots.push((0..n).collect());
            let outer: Vec<usize> = (0..=n).collect();
            EmbeddedGraph::build(rots, &outer)
        }
        Family::Octahedron => EmbeddedGraph::build(
            vec![
                vec![1, 2, 3, 4],
                vec![0, 4, 5, 2],
                vec![0, 1, 5, 3],
                vec![0, 2, 5, 4],
                vec![0, 3, 5, 1],
                vec![4, 3, 2, 1],
            ],
            // 0-1-2 is a traced triangle; designate it outer
            &[0, 2, 1],
        ),
        Family::Icosahedron => EmbeddedGraph::build(
            vec![
                vec![1, 2, 3, 4, 5],
                vec![0, 5, 10, 6, 2],
                vec![0, 1, 6, 7, 3],
                vec![0, 2, 7, 8, 4],
                vec![0, 3, 8, 9, 5],
                vec![0, 4, 9, 10, 1],
                vec![1, 10, 11, 7, 2],
                vec![2, 6, 11, 8, 3],
                vec![3, 7, 11, 9, 4],
                vec![4, 8, 11, 10, 5],
                vec![5, 9, 11, 6, 1],
                vec![10, 9, 8, 7, 6],
            ],
            &[0, 2, 1],
        ),
    }
}

/// Random planar triangulation: K4 plus stacked vertices in random inner
/// faces, followed by random diagonal flips of flippable inner edges.
/// Deterministic per (n, seed).
pub fn random_triangulation(n: usize, seed: u64) -> Result<EmbeddedGraph> {
    if n < 4 {
        return Err(Error::BadParameter(format!(
            "triangulation needs n >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = named(Family::K4, 0)?;
    while g.n() < n {
        let inner: Vec<_> = g.trace_faces().into_iter().filter(|f| !f.is_outer()).collect();
        let f = &inner[rng.gen_range(0..inner.len())];
        let (g2, _) = g.stack_vertex_in_face(f)?;
        g = g2;
    }
    let flips = 3 * n;
    for _ in 0..flips {
        g = random_flip(&g, &mut rng)?;
    }
    Ok(g)
}

/// One random diagonal flip, if any internal edge is flippable.
fn random_flip(g: &EmbeddedGraph, rng: &mut ChaCha8Rng) -> Result<EmbeddedGraph> {
    let outer: Vec<(usize, usize)> = g
        .outer_face()
        .map(|f| f.directed_edges().collect())
        .unwrap_or_default();
    let on_outer = |u: usize, v: usize| outer.contains(&(u, v)) || outer.contains(&(v, u));

    // flippable: internal edge whose two triangle corners are non-adjacent
    let mut candidates = Vec::new();
    for (u, v) in g.edges() {
        if on_outer(u, v) {
            continue;
        }
        let x = opposite_corner(g, u, v);
        let y = opposite_corner(g, v, u);
        if let (Some(x), Some(y)) = (x, y) {
            if x != y && !g.has_edge(x, y) {
                candidates.push((u, v, x, y));
            }
        }
    }
    if candidates.is_empty() {
        return Ok(g.clone());
    }
    let (u, v, x, y) = candidates[rng.gen_range(0..candidates.len())];
    let g2 = g.delete_edge(u, v)?;
    // deleting uv merges triangles (u,v,x) and (v,u,y) into the walk v,x,u,y
    let quad = crate::embedding::Face::from_walk(vec![v, x, u, y], false);
    g2.add_edge_in_face(x, y, &quad)
}

/// Third corner of the triangle to the left of directed edge (u, v):
/// the successor of u in the rotation of v, provided the face closes.
fn opposite_corner(g: &EmbeddedGraph, u: usize, v: usize) -> Option<usize> {
    let rot = g.neighbors(v);
    let i = rot.iter().position(|&w| w == u)?;
    let w = rot[(i + 1) % rot.len()];
    if g.has_edge(w, u) {
        Some(w)
    } else {
        None
    }
}

/// Random near-triangulation: a random triangulation followed by a seeded
/// sequence of boundary-edge deletions that keep the near-triangulation
/// property and the requested minimum degree. Deterministic per inputs.
pub fn random_near_triangulation(n: usize, seed: u64, dmin: usize) -> Result<EmbeddedGraph> {
    if n < 3 {
        return Err(Error::BadParameter(format!(
            "near-triangulation needs n >= 3, got {n}"
        )));
    }
    if !(2..=3).contains(&dmin) {
        return Err(Error::BadParameter(format!(
            "minimum degree must be 2 or 3, got {dmin}"
        )));
    }
    if n == 3 {
        return named(Family::K3, 0);
    }
    for attempt in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37)));
        let mut g = random_triangulation(n, rng.gen())?;
        let deletions = rng.gen_range(0..=n / 2);
        for _ in 0..deletions {
            let outer = match g.outer_face() {
                Some(f) => f,
                None => break,
            };
            let mut candidates: Vec<(usize, usize)> = outer
                .directed_edges()
                .map(|(u, v)| (u.min(v), u.max(v)))
                .filter(|&(u, v)| g.degree(u) > dmin && g.degree(v) > dmin)
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            if candidates.is_empty() {
                break;
            }
            let (u, v) = candidates[rng.gen_range(0..candidates.len())];
            g = g.delete_boundary_edge(u, v)?;
        }
        let report = g.validate();
        let deg_ok = g.vertices().all(|v| g.degree(v) >= dmin);
        if report.is_near_triangulation && deg_ok {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed)
}
