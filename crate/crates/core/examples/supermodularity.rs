//! Checks weak supermodularity of the built-in families and shows that
//! min{f, |δ_G|} loses it.

use crsndp::cli::nolam_instance;
use crsndp::cutreq::{
    restrict, symmetrize, weak_supermodularity_violation, CutFunction, GraceProfile,
    DEFAULT_SUPERMODULARITY_CAP,
};
use crsndp::NodeSet;

fn main() -> crsndp::Result<()> {
    let inst = nolam_instance();
    let g = inst.graph.clone();
    let f = inst.cut_function();
    let cap = DEFAULT_SUPERMODULARITY_CAP;
    let families = [
        ("sndp", f.clone()),
        ("3-ecss", CutFunction::kecss(5, 3)),
        (
            "grace",
            symmetrize(&CutFunction::grace(5, GraceProfile::new(vec![3, 1])?)),
        ),
        (
            "restriction to {s,u,v,w}",
            restrict(&f, &g, &NodeSet::from_mask(0b01111))?,
        ),
    ];
    for (name, h) in &families {
        println!(
            "{name}: violation {:?}",
            weak_supermodularity_violation(h, cap)?
        );
    }
    let capped = CutFunction::custom(5, "g^CR", move |s| f.eval(s).min(g.cut_size(s) as i64));
    println!(
        "min(f, |δ_G|): violation {:?}",
        weak_supermodularity_violation(&capped, cap)?
    );
    Ok(())
}
