//! Runs the 2-approximation on a seeded random instance and compares it with
//! the exact optimum.
//!
//! Usage: `cargo run --example iterative_rounding -- [seed]`

use crsndp::cli::{random_instance, RandomParams};
use crsndp::rational::fmt_exact;
use crsndp::solver::{crndp_alg, exact_opt, Model};

fn main() -> crsndp::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let inst = random_instance(&RandomParams {
        n: 6,
        m: 10,
        reqs: 3,
        rmax: 3,
        cmax: 9,
        seed,
    })?;
    let sol = crndp_alg(&inst)?;
    for (i, round) in sol.trace.iter().enumerate() {
        println!(
            "round {i}: {} free edges, lp {}, took {:?}",
            round.free_edges,
            fmt_exact(&round.objective),
            round.z1.to_vec()
        );
    }
    let (opt, _) = exact_opt(&inst, Model::CutRelative)?;
    println!(
        "cost {} (lp bound {}, optimum {})",
        fmt_exact(&sol.cost),
        fmt_exact(&sol.lp_bound),
        fmt_exact(&opt)
    );
    Ok(())
}
