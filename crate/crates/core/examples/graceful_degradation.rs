//! Graceful degradation: after ℓ failures, components of size at most τ(ℓ)
//! must look the same in H as in G.

use crsndp::cutreq::GraceProfile;
use crsndp::rational::int;
use crsndp::solver::{check_cut_relative, crndp_alg, Instance, Requirement};
use crsndp::Multigraph;

fn main() -> crsndp::Result<()> {
    let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)])?;
    let costs = vec![int(3), int(1), int(4), int(1), int(5), int(2), int(6)];
    // no isolated node after one failure, no isolated pair after none
    let profile = GraceProfile::new(vec![2, 1])?;
    let inst = Instance::new(g, costs, Requirement::Grace(profile))?;
    let sol = crndp_alg(&inst)?;
    println!(
        "edges {:?}, cost {}, lp bound {}",
        sol.edges.to_vec(),
        sol.cost,
        sol.lp_bound
    );
    println!(
        "feasible: {}",
        check_cut_relative(&inst, &sol.edges)?.feasible
    );
    Ok(())
}
