//! Prints the canonical decomposition tree and its leaf instances.

use crsndp::cli::nolam_instance;
use crsndp::decomp::{decompose_instance, leaf_instances};

fn main() -> crsndp::Result<()> {
    let inst = nolam_instance();
    let tree = decompose_instance(&inst)?;
    print!("{}", tree.dump(|v| inst.name(v).to_string()));
    let d = leaf_instances(&tree);
    for leaf in &d.leaves {
        let names: Vec<&str> = leaf.set.iter().map(|v| inst.name(v)).collect();
        println!(
            "leaf {{{}}} with {} edges",
            names.join(","),
            leaf.graph.edge_count()
        );
    }
    println!("forced edges: {:?}", d.forced_edges.to_vec());
    Ok(())
}
