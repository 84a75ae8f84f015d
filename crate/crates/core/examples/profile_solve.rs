use coupon_core::generators::random_near_triangulation;
use coupon_core::coloring::SpecialSet;
use coupon_core::reduction::{solve_with_stats, SolveConfig};
use std::time::Instant;

fn main() {
    for n in [100usize, 200, 300] {
        let g = random_near_triangulation(n, 42, 3).unwrap();
        let t = Instant::now();
        let (_, stats) = solve_with_stats(&g, &SpecialSet::empty(), &SolveConfig::default()).unwrap();
        let total = t.elapsed();
        println!(
            "n={n}: total={total:?} reduction={:?} iset={:?} contract={:?} cut={:?} fourcolor={:?} repair={:?} irreducible={}",
            stats.reduction, stats.pipeline.independent_set, stats.pipeline.contraction,
            stats.pipeline.cut, stats.pipeline.four_coloring, stats.pipeline.repair,
            stats.irreducible_instances
        );
    }
}
