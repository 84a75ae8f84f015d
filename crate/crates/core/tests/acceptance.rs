//! Acceptance suite: sweep-style soundness, oracle agreement, tightness,
//! invariants, determinism, and search-budget checks. Each test prints one
//! PASS line; the corpus of solved instances is built once and shared.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use coupon_core::coloring::{SpecialSet, TwoColoring};
use coupon_core::embedding::EmbeddedGraph;
use coupon_core::fair::{build_side_graph, constrained_cut, fair_four_coloring, FourColorConfig, Side};
use coupon_core::generators::{named, random_near_triangulation, random_triangulation, Family};
use coupon_core::io::coloring_to_json;
use coupon_core::oracle::{
    check_coupon, check_fair, exhaustive_two_coloring, has_k_disjoint_tds, theorem_targets,
    OracleConfig,
};
use coupon_core::pipeline::PipelineArtifacts;
use coupon_core::reduction::{solve_with_stats, SolveConfig};

struct Instance {
    criterion: u8,
    n: usize,
    seed: u64,
    graph: EmbeddedGraph,
    specials: Vec<usize>,
    coloring: TwoColoring,
    coloring_json: String,
}

struct Corpus {
    instances: Vec<Instance>,
    artifacts: Vec<PipelineArtifacts>,
    irreducible_instances: usize,
    max_four_color_nodes: u64,
    sweep1_time: Duration,
}

const ARTIFACT_TARGET: usize = 50;

fn two_lowest_two_vertices(g: &EmbeddedGraph) -> Vec<usize> {
    g.vertices().filter(|&v| g.degree(v) == 2).take(2).collect()
}

fn sweep_sizes(total: usize, small: usize, lo: usize, hi: usize, small_lo: usize) -> Vec<usize> {
    // `small` instances cycling over [small_lo, 14], the rest spread [lo, hi]
    (0..total)
        .map(|i| {
            if i < small {
                small_lo + i % (15 - small_lo)
            } else {
                let j = i - small;
                let spread = total - small;
                lo + j * (hi - lo) / (spread - 1).max(1)
            }
        })
        .collect()
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut instances = Vec::new();
        let mut artifacts: Vec<PipelineArtifacts> = Vec::new();
        let mut irreducible = 0usize;
        let mut max_nodes = 0u64;

        let mut run = |criterion: u8,
                       n: usize,
                       seed: u64,
                       graph: EmbeddedGraph,
                       specials: Vec<usize>,
                       instances: &mut Vec<Instance>,
                       artifacts: &mut Vec<PipelineArtifacts>| {
            let config = SolveConfig {
                collect_artifacts: artifacts.len() < ARTIFACT_TARGET,
                ..SolveConfig::default()
            };
            let s = SpecialSet::new(specials.clone(), &graph)
                .unwrap_or_else(|e| panic!("c{criterion} n={n} seed={seed}: bad specials: {e}"));
            let (coloring, stats) = solve_with_stats(&graph, &s, &config)
                .unwrap_or_else(|e| panic!("c{criterion} n={n} seed={seed}: solve failed: {e}"));
            irreducible += stats.irreducible_instances;
            max_nodes = max_nodes.max(stats.max_four_color_nodes);
            artifacts.extend(stats.artifacts);
            let coloring_json = coloring_to_json(&coloring).unwrap();
            instances.push(Instance {
                criterion,
                n,
                seed,
                graph,
                specials,
                coloring,
                coloring_json,
            });
        };

        // criterion 1: near-triangulations with minimum degree 3
        let t1 = Instant::now();
        for (i, &n) in sweep_sizes(500, 150, 15, 300, 5).iter().enumerate() {
            let seed = 1000 + i as u64;
            let g = random_near_triangulation(n, seed, 3).expect("generation");
            run(1, n, seed, g, vec![], &mut instances, &mut artifacts);
        }
        let sweep1_time = t1.elapsed();

        // criterion 2: triangulations
        for (i, &n) in sweep_sizes(500, 100, 15, 300, 4).iter().enumerate() {
            let seed = 2000 + i as u64;
            let g = random_triangulation(n, seed).expect("generation");
            run(2, n, seed, g, vec![], &mut instances, &mut artifacts);
        }

        // criterion 3: minimum degree 2 with the two lowest-id 2-vertices special
        for (i, &n) in sweep_sizes(200, 100, 15, 60, 5).iter().enumerate() {
            let seed = 3000 + i as u64;
            let g = random_near_triangulation(n, seed, 2).expect("generation");
            let specials = two_lowest_two_vertices(&g);
            run(3, n, seed, g, specials, &mut instances, &mut artifacts);
        }

        Corpus {
            instances,
            artifacts,
            irreducible_instances: irreducible,
            max_four_color_nodes: max_nodes,
            sweep1_time,
        }
    })
}

fn all_vertices(g: &EmbeddedGraph) -> BTreeSet<usize> {
    g.vertices().collect()
}

#[test]
fn criterion_1_theorem_soundness_sweep() {
    let c = corpus();
    let mut checked = 0;
    for inst in c.instances.iter().filter(|i| i.criterion == 1) {
        let report = check_coupon(&inst.graph, &all_vertices(&inst.graph), &inst.coloring)
            .expect("total coloring");
        assert!(
            report.satisfied,
            "n={} seed={}: violations {:?}",
            inst.n, inst.seed, report.violations
        );
        checked += 1;
    }
    assert_eq!(checked, 500);
    assert!(
        c.sweep1_time <= Duration::from_secs(120),
        "sweep took {:?}",
        c.sweep1_time
    );
    println!(
        "criterion 1 (soundness on 500 min-degree-3 near-triangulations, {:?}): PASS",
        c.sweep1_time
    );
}

#[test]
fn criterion_2_triangulation_sweep() {
    let c = corpus();
    let mut checked = 0;
    for inst in c.instances.iter().filter(|i| i.criterion == 2) {
        let report = check_coupon(&inst.graph, &all_vertices(&inst.graph), &inst.coloring)
            .expect("total coloring");
        assert!(report.satisfied, "n={} seed={}", inst.n, inst.seed);
        checked += 1;
    }
    assert_eq!(checked, 500);
    println!("criterion 2 (two disjoint total dominating sets on 500 triangulations): PASS");
}

#[test]
fn criterion_3_special_vertex_sweep() {
    let c = corpus();
    let mut checked = 0;
    for inst in c.instances.iter().filter(|i| i.criterion == 3) {
        let targets = theorem_targets(&inst.graph, &inst.specials);
        let report =
            check_coupon(&inst.graph, &targets, &inst.coloring).expect("total coloring");
        assert!(report.satisfied, "n={} seed={}", inst.n, inst.seed);
        checked += 1;
    }
    assert_eq!(checked, 200);
    println!("criterion 3 (200 instances with designated 2-vertices): PASS");
}

#[test]
fn criterion_4_oracle_agreement() {
    let c = corpus();
    let oracle_cfg = OracleConfig::default();
    let mut checked = 0;
    for inst in c.instances.iter().filter(|i| i.graph.n() <= 14) {
        let targets = theorem_targets(&inst.graph, &inst.specials);
        let found = exhaustive_two_coloring(&inst.graph, &targets, &oracle_cfg)
            .expect("within cap")
            .is_some();
        assert!(
            found,
            "oracle found no coloring for n={} seed={}",
            inst.n, inst.seed
        );
        let report =
            check_coupon(&inst.graph, &targets, &inst.coloring).expect("total coloring");
        assert!(report.satisfied, "n={} seed={}", inst.n, inst.seed);
        checked += 1;
    }
    assert!(checked >= 200, "only {checked} small instances in the corpus");
    println!("criterion 4 (oracle agreement on {checked} instances with n <= 14): PASS");
}

#[test]
fn criterion_5_three_sun_tightness() {
    let t = Instant::now();
    let g = named(Family::ThreeSun, 0).unwrap();
    let cfg = OracleConfig::default();
    let res = exhaustive_two_coloring(&g, &all_vertices(&g), &cfg).unwrap();
    assert!(res.is_none(), "the 3-sun admits no full coupon coloring");
    assert!(!has_k_disjoint_tds(&g, 2, &cfg).unwrap());
    let elapsed = t.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 5 (3-sun tightness, {elapsed:?}): PASS");
}

#[test]
fn criterion_6_pipeline_invariants() {
    // The solver verifies the structural invariants of every irreducible
    // instance inline (independent-set membership, second common neighbors,
    // protected degrees and triangles, merge guarantee, repair monotonicity);
    // any violation fails the sweeps. Here we confirm the sweeps exercised
    // the pipeline and re-check the collected artifacts end to end.
    let c = corpus();
    assert!(c.irreducible_instances > 0, "no irreducible instance seen");
    for a in &c.artifacts {
        for &v in a.independent.members() {
            assert!(a.graph.degree(v) <= 4);
        }
        let spanned: BTreeSet<usize> = a
            .contraction
            .protected
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .collect();
        for v in a.contraction.gprime.vertices() {
            assert!(spanned.contains(&v) || a.contraction.gprime.degree(v) >= 5);
        }
        assert!(check_fair(
            &a.contraction.gprime,
            &a.contraction.protected,
            &a.four_coloring
        ));
        assert!(a.repair_iterations <= a.graph.n());
    }
    println!(
        "criterion 6 (pipeline invariants on {} irreducible instances, {} artifacts re-checked): PASS",
        c.irreducible_instances,
        c.artifacts.len()
    );
}

#[test]
fn criterion_7_fair_coloring_standalone() {
    let cfg = FourColorConfig::default();
    let ico = named(Family::Icosahedron, 0).unwrap();
    let empty = BTreeSet::new();
    let (f, stats) = fair_four_coloring(&ico, &empty, &cfg).unwrap();
    assert!(check_fair(&ico, &empty, &f));
    assert!(stats.cut_moves <= ico.edge_count());

    let c = corpus();
    assert!(
        c.artifacts.len() >= ARTIFACT_TARGET,
        "only {} contraction artifacts collected",
        c.artifacts.len()
    );
    for a in c.artifacts.iter().take(ARTIFACT_TARGET) {
        let gp = &a.contraction.gprime;
        let protected = &a.contraction.protected;
        let cut = constrained_cut(gp, protected);
        assert!(cut.moves <= gp.edge_count());
        for side in [Side::A, Side::B] {
            let h = build_side_graph(gp, protected, &cut, side).unwrap();
            assert!(h.validate().is_planar_embedding);
        }
        let (f, stats) = fair_four_coloring(gp, protected, &cfg).unwrap();
        assert!(check_fair(gp, protected, &f));
        assert!(stats.cut_moves <= gp.edge_count());
    }
    println!(
        "criterion 7 (fair coloring on the icosahedron and {ARTIFACT_TARGET} contracted instances): PASS"
    );
}

#[test]
fn criterion_8_determinism() {
    let c = corpus();
    for inst in &c.instances {
        // the generator reproduces the graph from (n, seed) alone
        let regenerated = match inst.criterion {
            1 => random_near_triangulation(inst.n, inst.seed, 3).unwrap(),
            2 => random_triangulation(inst.n, inst.seed).unwrap(),
            _ => random_near_triangulation(inst.n, inst.seed, 2).unwrap(),
        };
        assert_eq!(regenerated, inst.graph, "generator drift at seed {}", inst.seed);
        let s = SpecialSet::new(inst.specials.clone(), &regenerated).unwrap();
        let (coloring, _) =
            solve_with_stats(&regenerated, &s, &SolveConfig::default()).unwrap();
        let json = coloring_to_json(&coloring).unwrap();
        assert_eq!(
            json, inst.coloring_json,
            "solver drift at n={} seed={}",
            inst.n, inst.seed
        );
    }
    println!(
        "criterion 8 (byte-identical re-solve of {} instances): PASS",
        c.instances.len()
    );
}

#[test]
fn criterion_9_four_coloring_budget() {
    let c = corpus();
    let budget = FourColorConfig::default().node_budget;
    assert!(
        c.max_four_color_nodes <= budget,
        "a search used {} nodes",
        c.max_four_color_nodes
    );
    println!(
        "criterion 9 (max four-coloring search nodes {} within budget {budget}): PASS",
        c.max_four_color_nodes
    );
}
