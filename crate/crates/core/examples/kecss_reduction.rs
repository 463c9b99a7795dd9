//! Turns 2-ECSS on K4 into a single-demand relative SNDP instance and solves it.

use crsndp::rational::int;
use crsndp::solver::{crndp_alg, exact_opt, kecss_reduction, Model};
use crsndp::Multigraph;

fn main() -> crsndp::Result<()> {
    let k4 = Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
    let costs = [1, 2, 3, 4, 5, 6].map(int);
    let inst = kecss_reduction(&k4, &costs, 2)?;
    println!(
        "reduced: {} nodes, {} edges, requirement {:?}",
        inst.graph.node_count(),
        inst.graph.edge_count(),
        inst.sndp().map(|r| r.demands().to_vec())
    );
    let sol = crndp_alg(&inst)?;
    let (opt, _) = exact_opt(&inst, Model::CutRelative)?;
    let core: Vec<usize> = sol.edges.iter().filter(|&e| e < 6).collect();
    println!(
        "rounding cost {} (optimum {opt}), K4 edges kept {core:?}",
        sol.cost
    );
    Ok(())
}
