//! Queries the min-cut separation oracle on a few points of the five-node
//! instance.

use crsndp::cli::nolam_instance;
use crsndp::lp::separation_oracle_crsndp;
use crsndp::rational::{half, int, Rational};
use crsndp::EdgeSet;

fn main() -> crsndp::Result<()> {
    let inst = nolam_instance();
    let reqs = inst.sndp().expect("SNDP instance");
    let g = &inst.graph;
    let xhat = vec![half(), half(), half(), half(), int(1), int(1)];
    let mut lowered = xhat.clone();
    lowered[5] = Rational::new(9.into(), 10.into());
    let points = [
        ("x hat", xhat),
        ("zero", vec![int(0); 6]),
        ("wt lowered", lowered),
    ];
    for (label, x) in &points {
        match separation_oracle_crsndp(&reqs, g, &EdgeSet::new(), x)? {
            None => println!("{label}: feasible"),
            Some(cut) => {
                let names: Vec<&str> = cut.side.iter().map(|v| inst.name(v)).collect();
                println!(
                    "{label}: x(δ({{{}}})) = {} < {}",
                    names.join(","),
                    cut.lhs,
                    cut.rhs
                );
            }
        }
    }
    Ok(())
}
