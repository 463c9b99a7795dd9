//! Solves the relaxation on the five-node instance whose optimal vertex is
//! not defined by a laminar family of cuts.

use crsndp::cli::nolam_instance;
use crsndp::lp::{solve_crlp_with, CrlpOptions};
use crsndp::rational::fmt_exact;
use crsndp::EdgeSet;

fn main() -> crsndp::Result<()> {
    let inst = nolam_instance();
    let g = &inst.graph;
    let out = solve_crlp_with(
        &inst.oracle(),
        g,
        &inst.costs,
        &EdgeSet::new(),
        CrlpOptions::default(),
    )?;
    println!("lp = {}", fmt_exact(&out.solution.objective));
    for e in g.edges() {
        println!(
            "x[{}{}] = {}",
            inst.name(e.u),
            inst.name(e.v),
            fmt_exact(&out.solution.x[e.id])
        );
    }
    println!("working cuts:");
    print!("{}", out.dump(|v| inst.name(v).to_string()));
    Ok(())
}
