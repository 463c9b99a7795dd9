//! Canonical decomposition along maximum-deficiency cuts.
//!
//! A node (h, S) splits along a cut A ⊆ S of maximum deficiency
//! h(A) - |δ_{G[S]}(A)| when that deficiency is positive; the children carry
//! the restrictions of h to A and to S - A. Node functions are lazy
//! restriction chains, but every max-deficiency query goes to the root pair
//! (f, G): a global maximizer intersected with S is a maximizer at the node.

use crate::cutreq::{restrict, unit_deficiency, CutFunction, SndpRequirements};
use crate::flow::{
    brute_force_max_deficiency_st_cut, max_deficiency_st_cut, MaxDeficiencyCut,
    DEFAULT_BRUTE_FORCE_CAP,
};
use crate::graph::{Multigraph, NodeId};
use crate::rational::{int, unit_weights, Rational};
use crate::sets::{EdgeSet, NodeSet};
use crate::solver::Instance;
use crate::{Error, Result};
use num_traits::ToPrimitive;
use std::fmt::Write as _;

/// Max-deficiency s-t cuts of the root pair (f, G) under unit weights.
pub trait DeficiencyOracle {
    fn max_st_cut(&self, s: NodeId, t: NodeId) -> Result<MaxDeficiencyCut>;
}

/// Pinned min cuts, one per demand and orientation.
pub struct FlowOracle<'a> {
    pub reqs: &'a SndpRequirements,
    pub graph: &'a Multigraph,
    weights: Vec<Rational>,
}

impl<'a> FlowOracle<'a> {
    pub fn new(reqs: &'a SndpRequirements, graph: &'a Multigraph) -> Self {
        Self {
            reqs,
            graph,
            weights: unit_weights(graph.id_bound()),
        }
    }
}

impl DeficiencyOracle for FlowOracle<'_> {
    fn max_st_cut(&self, s: NodeId, t: NodeId) -> Result<MaxDeficiencyCut> {
        max_deficiency_st_cut(self.reqs, self.graph, &self.weights, s, t)
    }
}

/// Enumeration of every s-t cut; for functions without a flow oracle.
pub struct BruteOracle<'a> {
    pub f: &'a CutFunction,
    pub graph: &'a Multigraph,
    pub cap: usize,
}

impl DeficiencyOracle for BruteOracle<'_> {
    fn max_st_cut(&self, s: NodeId, t: NodeId) -> Result<MaxDeficiencyCut> {
        brute_force_max_deficiency_st_cut(self.f, self.graph, None, s, t, self.cap)
    }
}

#[derive(Debug, Clone)]
pub struct Split {
    /// The side containing the smallest node of S, in root labels.
    pub side: NodeSet,
    pub deficiency: i64,
    pub children: Box<[DecompNode; 2]>,
}

#[derive(Debug, Clone)]
pub struct DecompNode {
    /// Function on the local labels of `graph`.
    pub f: CutFunction,
    /// G[S], with origins in root labels.
    pub graph: Multigraph,
    /// S in root labels.
    pub set: NodeSet,
    pub split: Option<Split>,
}

impl DecompNode {
    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    pub fn children(&self) -> Option<&[DecompNode; 2]> {
        self.split.as_ref().map(|s| &*s.children)
    }

    /// h(T) for T ⊆ S given in root labels.
    pub fn eval(&self, t: &NodeSet) -> i64 {
        self.f.eval(&self.graph.project(t))
    }

    /// h(T) - |δ_{G[S]}(T)| for T ⊆ S given in root labels.
    pub fn deficiency(&self, t: &NodeSet) -> i64 {
        unit_deficiency(&self.f, &self.graph, &self.graph.project(t))
    }

    pub fn depth(&self) -> usize {
        self.children()
            .map_or(0, |[a, b]| 1 + a.depth().max(b.depth()))
    }

    /// Nodes in pre-order with their depth.
    pub fn walk(&self) -> Vec<(usize, &DecompNode)> {
        let mut out = Vec::new();
        let mut stack = vec![(0, self)];
        while let Some((d, node)) = stack.pop() {
            out.push((d, node));
            if let Some([a, b]) = node.children() {
                stack.push((d + 1, b));
                stack.push((d + 1, a));
            }
        }
        out
    }

    /// One line per node: `node <depth> S={..} split=A={..} def=<d>` or
    /// `leaf <depth> S={..}`.
    pub fn dump(&self, name: impl Fn(NodeId) -> String) -> String {
        let fmt_set = |s: &NodeSet| {
            let names: Vec<String> = s.iter().map(&name).collect();
            format!("{{{}}}", names.join(","))
        };
        let mut out = String::new();
        for (d, node) in self.walk() {
            match &node.split {
                Some(split) => {
                    let _ = writeln!(
                        out,
                        "node {d} S={} split=A={} def={}",
                        fmt_set(&node.set),
                        fmt_set(&split.side),
                        split.deficiency
                    );
                }
                None => {
                    let _ = writeln!(out, "leaf {d} S={}", fmt_set(&node.set));
                }
            }
        }
        out
    }
}

/// Tree for a symmetric, normalized, weakly supermodular `f` on `g`, using
/// the flow oracle when `f` is an SNDP function and enumeration otherwise.
pub fn build_decomposition_tree(f: &CutFunction, g: &Multigraph) -> Result<DecompNode> {
    match f.as_sndp() {
        Some(reqs) => build_decomposition_tree_with(f, g, &FlowOracle::new(reqs, g)),
        None => build_decomposition_tree_with(
            f,
            g,
            &BruteOracle {
                f,
                graph: g,
                cap: DEFAULT_BRUTE_FORCE_CAP,
            },
        ),
    }
}

/// Tree for an instance; k-ECSS goes through its star demands so the flow
/// oracle applies.
pub fn decompose_instance(inst: &Instance) -> Result<DecompNode> {
    match inst.sndp() {
        Some(reqs) => {
            let f = CutFunction::sndp(inst.graph.node_count(), reqs);
            build_decomposition_tree(&f, &inst.graph)
        }
        None => build_decomposition_tree(&inst.cut_function(), &inst.graph),
    }
}

pub fn build_decomposition_tree_with(
    f: &CutFunction,
    g: &Multigraph,
    oracle: &dyn DeficiencyOracle,
) -> Result<DecompNode> {
    if g.node_count() == 0 {
        return Err(Error::EmptyNodeSet);
    }
    build_node(f.clone(), g.clone(), g.nodes(), oracle)
}

fn build_node(
    h: CutFunction,
    graph: Multigraph,
    set: NodeSet,
    oracle: &dyn DeficiencyOracle,
) -> Result<DecompNode> {
    let mut node = DecompNode {
        f: h,
        graph,
        set,
        split: None,
    };
    let Some(s) = node.set.first() else {
        return Err(Error::EmptyNodeSet);
    };
    let mut best: Option<(i64, NodeSet)> = None;
    for t in node.set.iter().filter(|&t| t != s) {
        let global = oracle.max_st_cut(s, t)?;
        let side = global.side.intersection(&node.set);
        let def = node.deficiency(&side);
        debug_assert_eq!(
            Some(def),
            global.value.to_integer().to_i64(),
            "node maximum differs from the root maximum"
        );
        let better = match &best {
            None => true,
            Some((d, b)) => def > *d || (def == *d && side < *b),
        };
        if better {
            best = Some((def, side));
        }
    }
    if let Some((def, side)) = best.filter(|(d, _)| *d > 0) {
        let rest = node.set.difference(&side);
        let mut children = Vec::with_capacity(2);
        for part in [&side, &rest] {
            let local = node.graph.project(part);
            let child_f = restrict(&node.f, &node.graph, &local)?;
            let child_g = node.graph.induced_subgraph(&local)?;
            children.push(build_node(child_f, child_g, part.clone(), oracle)?);
        }
        let b = children.pop().expect("two children");
        let a = children.pop().expect("two children");
        node.split = Some(Split {
            side,
            deficiency: def,
            children: Box::new([a, b]),
        });
    }
    Ok(node)
}

#[derive(Debug, Clone)]
pub struct Leaf {
    /// Function on the local labels of `graph`.
    pub f: CutFunction,
    pub graph: Multigraph,
    /// V_i in root labels.
    pub set: NodeSet,
}

impl Leaf {
    /// f_i(T) for T ⊆ V_i given in root labels.
    pub fn eval(&self, t: &NodeSet) -> i64 {
        self.f.eval(&self.graph.project(t))
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub leaves: Vec<Leaf>,
    /// Edges of G between different leaves.
    pub forced_edges: EdgeSet,
}

impl Decomposition {
    pub fn partition(&self) -> Vec<NodeSet> {
        self.leaves.iter().map(|l| l.set.clone()).collect()
    }
}

/// Leaves left to right and the union of their boundaries in the root graph.
pub fn leaf_instances(tree: &DecompNode) -> Decomposition {
    let leaves: Vec<Leaf> = tree
        .walk()
        .into_iter()
        .filter(|(_, n)| n.is_leaf())
        .map(|(_, n)| Leaf {
            f: n.f.clone(),
            graph: n.graph.clone(),
            set: n.set.clone(),
        })
        .collect();
    let forced_edges = boundary_edges(
        &tree.graph,
        &leaves.iter().map(|l| l.set.clone()).collect::<Vec<_>>(),
    );
    Decomposition {
        leaves,
        forced_edges,
    }
}

/// Edges of `g` whose endpoints lie in different parts.
pub fn boundary_edges(g: &Multigraph, parts: &[NodeSet]) -> EdgeSet {
    let mut label = vec![usize::MAX; g.node_count()];
    for (i, p) in parts.iter().enumerate() {
        for x in p.iter() {
            label[x] = i;
        }
    }
    g.edges()
        .iter()
        .filter(|e| label[e.u] != label[e.v])
        .map(|e| e.id)
        .collect()
}

/// Z = edges lying on some small cut, found by one max-deficiency query per
/// edge, and the components of G - Z.
pub fn small_cut_boundary_partition(
    reqs: &SndpRequirements,
    g: &Multigraph,
) -> Result<(EdgeSet, Vec<NodeSet>)> {
    small_cut_boundary_partition_with(g, &FlowOracle::new(reqs, g))
}

pub fn small_cut_boundary_partition_with(
    g: &Multigraph,
    oracle: &dyn DeficiencyOracle,
) -> Result<(EdgeSet, Vec<NodeSet>)> {
    let mut z = EdgeSet::new();
    for e in g.edges() {
        if oracle.max_st_cut(e.u, e.v)?.value > int(0) {
            z.insert(e.id);
        }
    }
    let parts = g.components(&z);
    Ok((z, parts))
}

pub const GAMMA_PART_CAP: usize = 16;

/// γ_i(S) = max { f(S ∪ X) - |δ_Z(S ∪ X)| : X a union of parts other than i },
/// with Z the edges between parts; 0 on ∅ and on the whole part.
pub fn gamma_eval(
    f: &CutFunction,
    g: &Multigraph,
    partition: &[NodeSet],
    i: usize,
    s: &NodeSet,
) -> Result<i64> {
    if partition.len() > GAMMA_PART_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "gamma enumeration",
            size: partition.len(),
            cap: GAMMA_PART_CAP,
        });
    }
    let own = partition.get(i).ok_or(Error::InvalidRestriction)?;
    if !s.is_subset(own) {
        return Err(Error::InvalidRestriction);
    }
    if s.is_empty() || s == own {
        return Ok(0);
    }
    let z = boundary_edges(g, partition);
    let others: Vec<&NodeSet> = partition
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| p)
        .collect();
    let mut best = i64::MIN;
    for bits in 0..1u32 << others.len() {
        let mut set = s.clone();
        for (j, p) in others.iter().enumerate() {
            if bits >> j & 1 == 1 {
                set = set.union(p);
            }
        }
        best = best.max(f.eval(&set) - g.cut_size_within(&set, &z) as i64);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutreq::restrict;
    use crate::sets::all_subsets;

    const S: usize = 0;
    const U: usize = 1;
    const V: usize = 2;
    const W: usize = 3;
    const T: usize = 4;

    fn nolam() -> Multigraph {
        Multigraph::from_edges(5, &[(S, U), (S, V), (U, W), (V, W), (S, W), (W, T)]).unwrap()
    }

    fn f() -> CutFunction {
        CutFunction::sndp(5, SndpRequirements::from_triples(&[(S, T, 2)]).unwrap())
    }

    #[test]
    fn fig1_tree() {
        let g = nolam();
        let tree = build_decomposition_tree(&f(), &g).unwrap();
        let split = tree.split.as_ref().unwrap();
        assert_eq!(split.side, NodeSet::from([S, U, V, W]));
        assert_eq!(split.deficiency, 1);
        let [a, b] = &*split.children;
        assert!(a.is_leaf() && b.is_leaf());
        assert_eq!(a.eval(&NodeSet::from([S])), 2);
        assert_eq!(a.eval(&NodeSet::from([S, W])), 1);
        assert_eq!(a.eval(&NodeSet::from([W])), 2);
        assert_eq!(b.eval(&NodeSet::from([T])), 0);

        let names = ["s", "u", "v", "w", "t"];
        assert_eq!(
            tree.dump(|x| names[x].to_string()),
            "node 0 S={s,u,v,w,t} split=A={s,u,v,w} def=1\nleaf 1 S={s,u,v,w}\nleaf 1 S={t}\n"
        );
    }

    #[test]
    fn fig1_leaves() {
        let g = nolam();
        let d = leaf_instances(&build_decomposition_tree(&f(), &g).unwrap());
        assert_eq!(
            d.partition(),
            vec![NodeSet::from([S, U, V, W]), NodeSet::from([T])]
        );
        assert_eq!(d.forced_edges, EdgeSet::from([5]));
        let reqs = f().as_sndp().unwrap().clone();
        let (z, parts) = small_cut_boundary_partition(&reqs, &g).unwrap();
        assert_eq!(z, EdgeSet::from([5]));
        assert_eq!(parts, d.partition());
    }

    #[test]
    fn no_small_cut_is_one_leaf() {
        let g = Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let f = CutFunction::sndp(3, SndpRequirements::from_triples(&[(0, 2, 1)]).unwrap());
        let tree = build_decomposition_tree(&f, &g).unwrap();
        assert!(tree.is_leaf());
        let d = leaf_instances(&tree);
        assert_eq!(d.partition(), vec![g.nodes()]);
        assert!(d.forced_edges.is_empty());
    }

    #[test]
    fn gamma_matches_leaf_function() {
        let g = nolam();
        let parts = vec![NodeSet::from([S, U, V, W]), NodeSet::from([T])];
        assert_eq!(
            gamma_eval(&f(), &g, &parts, 0, &NodeSet::from([S])).unwrap(),
            2
        );
        assert_eq!(
            gamma_eval(&f(), &g, &parts, 0, &NodeSet::from([S, W])).unwrap(),
            1
        );
        assert_eq!(gamma_eval(&f(), &g, &parts, 0, &parts[0]).unwrap(), 0);
        let leaf = restrict(&f(), &g, &parts[0]).unwrap();
        let sub = g.induced_subgraph(&parts[0]).unwrap();
        for t in all_subsets(4) {
            let root = sub.lift(&t);
            assert_eq!(
                gamma_eval(&f(), &g, &parts, 0, &root).unwrap(),
                leaf.eval(&t)
            );
        }
    }

    #[test]
    fn brute_and_flow_trees_agree() {
        let g =
            Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
                .unwrap();
        let reqs = SndpRequirements::from_triples(&[(0, 4, 2), (1, 5, 1)]).unwrap();
        let f = CutFunction::sndp(6, reqs);
        let flow = build_decomposition_tree(&f, &g).unwrap();
        let brute = build_decomposition_tree_with(
            &f,
            &g,
            &BruteOracle {
                f: &f,
                graph: &g,
                cap: 20,
            },
        )
        .unwrap();
        assert_eq!(flow.dump(|x| x.to_string()), brute.dump(|x| x.to_string()));
        assert!(!flow.is_leaf());
    }
}
