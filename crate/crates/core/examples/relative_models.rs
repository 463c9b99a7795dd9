//! An edge set that survives every relevant fault pattern yet violates a
//! cut constraint, so the two relative models differ.

use crsndp::cli::nolam_instance;
use crsndp::solver::{check_cut_relative, check_path_relative, exact_opt, Model};
use crsndp::EdgeSet;

fn main() -> crsndp::Result<()> {
    let inst = nolam_instance();
    // su, uw, sw, wt
    let h: EdgeSet = [0, 2, 4, 5].into_iter().collect();
    let path = check_path_relative(&inst, &h)?;
    let cut = check_cut_relative(&inst, &h)?;
    println!("path-relative feasible: {}", path.feasible);
    println!(
        "cut-relative feasible:  {} ({:?})",
        cut.feasible, cut.witness
    );
    for model in [Model::PathRelative, Model::CutRelative] {
        let (cost, edges) = exact_opt(&inst, model)?;
        println!("{model:?} optimum {cost} with edges {:?}", edges.to_vec());
    }
    Ok(())
}
