//! File formats: graph and coloring JSON, solver dumps, DOT export.
//!
//! Graph files: `{"n": <int>, "rotations": [[neighbor ids ccw], ...],
//! "outer_face": [vertex ids]}`. Two-colorings: `{"colors": {"0": "a", ...}}`;
//! four-colorings: `{"colors4": {"0": 1, ...}}`. Writers emit a canonical
//! pretty-printed form, so write(read(x)) is byte-identical for canonical
//! input.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, FourColoring, TwoColoring};
use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};
use crate::fair::FairStats;
use crate::pipeline::PipelineArtifacts;

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    rotations: Vec<Vec<usize>>,
    outer_face: Vec<usize>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::ParseError(e.to_string())
}

/// Serialize a graph with dense vertex ids 0..n-1.
pub fn graph_to_json(g: &EmbeddedGraph) -> Result<String> {
    if g.n() != g.id_bound() {
        return Err(Error::BadParameter(
            "graph has deleted vertex ids; only dense graphs have a JSON form".into(),
        ));
    }
    let doc = GraphJson {
        n: g.n(),
        rotations: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(),
        outer_face: g.outer_face().map(|f| f.walk().to_vec()).unwrap_or_default(),
    };
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).map_err(parse_err)?
    ))
}

pub fn graph_from_json(s: &str) -> Result<EmbeddedGraph> {
    let doc: GraphJson = serde_json::from_str(s).map_err(parse_err)?;
    if doc.rotations.len() != doc.n {
        return Err(Error::ParseError(format!(
            "n = {} but {} rotations given",
            doc.n,
            doc.rotations.len()
        )));
    }
    EmbeddedGraph::build(doc.rotations, &doc.outer_face)
}

pub fn read_graph(path: &Path) -> Result<EmbeddedGraph> {
    graph_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &EmbeddedGraph) -> Result<()> {
    Ok(std::fs::write(path, graph_to_json(g)?)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct TwoColoringJson {
    colors: BTreeMap<usize, Color>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FourColoringJson {
    colors4: BTreeMap<usize, u8>,
}

pub fn coloring_to_json(f: &TwoColoring) -> Result<String> {
    let doc = TwoColoringJson {
        colors: f.map().clone(),
    };
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).map_err(parse_err)?
    ))
}

pub fn four_coloring_to_json(f: &FourColoring) -> Result<String> {
    let doc = FourColoringJson {
        colors4: f.map().clone(),
    };
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).map_err(parse_err)?
    ))
}

/// Either kind of coloring file.
#[derive(Debug)]
pub enum AnyColoring {
    Two(TwoColoring),
    Four(FourColoring),
}

pub fn coloring_from_json(s: &str) -> Result<AnyColoring> {
    #[derive(Deserialize)]
    struct Either {
        colors: Option<BTreeMap<usize, Color>>,
        colors4: Option<BTreeMap<usize, u8>>,
    }
    let doc: Either = serde_json::from_str(s).map_err(parse_err)?;
    match (doc.colors, doc.colors4) {
        (Some(m), None) => Ok(AnyColoring::Two(TwoColoring::from_map(m))),
        (None, Some(m)) => {
            if let Some((&v, &c)) = m.iter().find(|&(_, &c)| !(1..=4).contains(&c)) {
                return Err(Error::ParseError(format!(
                    "vertex {v} has color {c}, expected 1..=4"
                )));
            }
            Ok(AnyColoring::Four(FourColoring::from_map(m)))
        }
        _ => Err(Error::ParseError(
            "expected exactly one of \"colors\" or \"colors4\"".into(),
        )),
    }
}

pub fn read_coloring(path: &Path) -> Result<AnyColoring> {
    coloring_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_coloring(path: &Path, f: &TwoColoring) -> Result<()> {
    Ok(std::fs::write(path, coloring_to_json(f)?)?)
}

// ----- solver dumps -----

#[derive(Debug, Serialize)]
struct SparseGraphJson {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

fn sparse(g: &EmbeddedGraph) -> SparseGraphJson {
    SparseGraphJson {
        vertices: g.vertices().collect(),
        edges: g.edges(),
    }
}

#[derive(Debug, Serialize)]
struct PipelineDumpJson {
    graph: SparseGraphJson,
    independent_set: Vec<IndependentEntry>,
    gprime: SparseGraphJson,
    protected: Vec<(usize, usize)>,
    deleted: Vec<DeletedEntry>,
}

#[derive(Debug, Serialize)]
struct IndependentEntry {
    vertex: usize,
    round: u8,
}

#[derive(Debug, Serialize)]
struct DeletedEntry {
    vertex: usize,
    neighbors: Vec<usize>,
    witness: Vec<usize>,
}

/// JSON for `--dump-pipeline`: (G', P', I, T_v) of every irreducible
/// instance the solve encountered.
pub fn pipeline_dump_json(artifacts: &[PipelineArtifacts]) -> Result<String> {
    let instances: Vec<PipelineDumpJson> = artifacts
        .iter()
        .map(|a| PipelineDumpJson {
            graph: sparse(&a.graph),
            independent_set: a
                .independent
                .members()
                .iter()
                .map(|&v| IndependentEntry {
                    vertex: v,
                    round: a.independent.round_of(v).unwrap_or(0),
                })
                .collect(),
            gprime: sparse(&a.contraction.gprime),
            protected: a.contraction.protected.iter().copied().collect(),
            deleted: a
                .contraction
                .deleted
                .iter()
                .map(|d| DeletedEntry {
                    vertex: d.vertex,
                    neighbors: d.neighbors.clone(),
                    witness: d.witness.clone(),
                })
                .collect(),
        })
        .collect();
    let doc = serde_json::json!({ "instances": instances });
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).map_err(parse_err)?
    ))
}

#[derive(Debug, Serialize)]
struct FairDumpJson {
    side_b: Vec<usize>,
    cut_moves: usize,
    crossing_edges: usize,
    side_graph_a: SparseGraphJson,
    side_graph_b: SparseGraphJson,
    colors4: BTreeMap<usize, u8>,
}

/// JSON for `--dump-fair`: the cut, both side graphs, and the fair coloring
/// of every irreducible instance. Side graphs are recomputed from (G', P');
/// the computation is deterministic, so they match the solve.
pub fn fair_dump_json(artifacts: &[PipelineArtifacts]) -> Result<String> {
    use crate::fair::{build_side_graph, constrained_cut, Side};
    let mut instances = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let gp = &a.contraction.gprime;
        let protected = &a.contraction.protected;
        let cut = constrained_cut(gp, protected);
        let ha = build_side_graph(gp, protected, &cut, Side::A)?;
        let hb = build_side_graph(gp, protected, &cut, Side::B)?;
        let FairStats { .. } = a.fair_stats;
        instances.push(FairDumpJson {
            side_b: a.side_b.clone(),
            cut_moves: a.fair_stats.cut_moves,
            crossing_edges: a.fair_stats.crossing_edges,
            side_graph_a: sparse(&ha),
            side_graph_b: sparse(&hb),
            colors4: a.four_coloring.map().clone(),
        });
    }
    let doc = serde_json::json!({ "instances": instances });
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&doc).map_err(parse_err)?
    ))
}

// ----- DOT export -----

const TWO_COLOR_FILLS: [(&str, Color); 2] = [("lightblue", Color::A), ("orange", Color::B)];
const FOUR_COLOR_FILLS: [&str; 4] = ["lightblue", "orange", "palegreen", "plum"];

/// Graphviz export: vertices labeled by id and filled by their color;
/// protected edges drawn bold.
pub fn export_dot(
    g: &EmbeddedGraph,
    coloring: Option<&AnyColoring>,
    protected: Option<&BTreeSet<(usize, usize)>>,
) -> String {
    let mut out = String::from("graph coupon {\n  node [shape=circle, style=filled, fillcolor=white];\n");
    for v in g.vertices() {
        let fill = match coloring {
            Some(AnyColoring::Two(f)) => f.get(v).map(|c| {
                TWO_COLOR_FILLS
                    .iter()
                    .find(|(_, fc)| *fc == c)
                    .map(|(name, _)| *name)
                    .unwrap()
            }),
            Some(AnyColoring::Four(f)) => {
                f.get(v).map(|c| FOUR_COLOR_FILLS[(c - 1) as usize])
            }
            None => None,
        };
        match fill {
            Some(fill) => out.push_str(&format!("  {v} [fillcolor=\"{fill}\"];\n")),
            None => out.push_str(&format!("  {v};\n")),
        }
    }
    for (u, v) in g.edges() {
        let bold = protected.map_or(false, |p| p.contains(&(u, v)));
        if bold {
            out.push_str(&format!("  {u} -- {v} [penwidth=2.5];\n"));
        } else {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named, random_triangulation, Family};

    #[test]
    fn graph_round_trip_is_byte_identical() {
        let g = named(Family::K4, 0).unwrap();
        let s1 = graph_to_json(&g).unwrap();
        let g2 = graph_from_json(&s1).unwrap();
        let s2 = graph_to_json(&g2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(g, g2);
    }

    #[test]
    fn generated_graph_round_trips() {
        let g = random_triangulation(25, 3).unwrap();
        let s1 = graph_to_json(&g).unwrap();
        let g2 = graph_from_json(&s1).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn coloring_round_trip() {
        let mut f = TwoColoring::new();
        f.set(0, Color::A);
        f.set(1, Color::B);
        f.set(10, Color::A);
        let s1 = coloring_to_json(&f).unwrap();
        match coloring_from_json(&s1).unwrap() {
            AnyColoring::Two(f2) => {
                assert_eq!(f, f2);
                assert_eq!(s1, coloring_to_json(&f2).unwrap());
            }
            _ => panic!("expected a two-coloring"),
        }
    }

    #[test]
    fn four_coloring_round_trip() {
        let mut f = FourColoring::new();
        f.set(0, 1);
        f.set(3, 4);
        let s = four_coloring_to_json(&f).unwrap();
        match coloring_from_json(&s).unwrap() {
            AnyColoring::Four(f2) => assert_eq!(f, f2),
            _ => panic!("expected a four-coloring"),
        }
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        assert!(matches!(
            graph_from_json("{\"n\": 3, \"rotatio"),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            coloring_from_json("{}"),
            Err(Error::ParseError(_))
        ));
    }

    #[test]
    fn mismatched_rotation_count_is_a_parse_error() {
        assert!(matches!(
            graph_from_json("{\"n\": 3, \"rotations\": [[1],[0]], \"outer_face\": []}"),
            Err(Error::ParseError(_))
        ));
    }

    #[test]
    fn dot_export_mentions_all_edges() {
        let g = named(Family::Diamond, 0).unwrap();
        let dot = export_dot(&g, None, None);
        for (u, v) in g.edges() {
            assert!(dot.contains(&format!("{u} -- {v}")));
        }
    }
}
