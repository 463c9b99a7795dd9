//! Undirected multigraphs with stable edge ids.
//!
//! Every graph remembers, for each of its nodes, the label that node carries in
//! the root graph it was extracted from. Induced subgraphs relabel their nodes
//! densely but keep the parent's edge ids, so per-edge weight vectors indexed by
//! root edge id can be shared between a graph and all of its subgraphs.

use crate::rational::Rational;
use crate::sets::{EdgeSet, NodeSet};
use crate::{Error, Result};
use num_traits::Zero;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub id: EdgeId,
}

impl Edge {
    /// Whether exactly one endpoint lies in `s`.
    #[inline]
    pub fn crosses(&self, s: &NodeSet) -> bool {
        s.contains(self.u) != s.contains(self.v)
    }

    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    /// Root label of each local node.
    origin: Vec<NodeId>,
    /// Exclusive upper bound on edge ids (the root graph's edge count).
    id_bound: usize,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            origin: (0..n).collect(),
            id_bound: 0,
        }
    }

    pub fn from_edges(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its id. Only valid on root graphs.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::NodeOutOfRange { node: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        debug_assert_eq!(self.id_bound, self.edges.len(), "add_edge on a subgraph");
        let id = self.id_bound;
        self.edges.push(Edge { u, v, id });
        self.id_bound += 1;
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Exclusive upper bound on the ids of this graph's edges; weight vectors
    /// must have at least this many entries.
    pub fn id_bound(&self) -> usize {
        self.id_bound
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        // edges are stored in increasing id order
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// Root label of local node `x`.
    pub fn origin(&self, x: NodeId) -> NodeId {
        self.origin[x]
    }

    pub fn origins(&self) -> &[NodeId] {
        &self.origin
    }

    /// Maps a set of local nodes to root labels.
    pub fn lift(&self, s: &NodeSet) -> NodeSet {
        s.iter().map(|x| self.origin[x]).collect()
    }

    /// Maps a set of root labels to the local nodes carrying them, dropping
    /// labels that are not part of this graph.
    pub fn project(&self, root: &NodeSet) -> NodeSet {
        (0..self.n)
            .filter(|&x| root.contains(self.origin[x]))
            .collect()
    }

    /// δ_G(S), sorted by edge id.
    pub fn cut_edges(&self, s: &NodeSet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.crosses(s))
            .map(|e| e.id)
            .collect()
    }

    /// |δ_G(S)|.
    pub fn cut_size(&self, s: &NodeSet) -> usize {
        self.edges.iter().filter(|e| e.crosses(s)).count()
    }

    /// |δ_Z(S)| for an edge subset Z of this graph.
    pub fn cut_size_within(&self, s: &NodeSet, z: &EdgeSet) -> usize {
        self.edges
            .iter()
            .filter(|e| z.contains(e.id) && e.crosses(s))
            .count()
    }

    /// w(δ_G(S)); `w` is indexed by edge id.
    pub fn cut_weight(&self, s: &NodeSet, w: &[Rational]) -> Rational {
        self.edges
            .iter()
            .filter(|e| e.crosses(s))
            .fold(Rational::zero(), |acc, e| acc + &w[e.id])
    }

    /// G[S]: nodes of S relabeled densely in increasing order, edges with both
    /// ends in S keeping their ids.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Result<Multigraph> {
        if s.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let mut local = vec![usize::MAX; self.n];
        let mut origin = Vec::with_capacity(s.len());
        for (i, x) in s.iter().enumerate() {
            if x >= self.n {
                return Err(Error::NodeOutOfRange { node: x, n: self.n });
            }
            local[x] = i;
            origin.push(self.origin[x]);
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| s.contains(e.u) && s.contains(e.v))
            .map(|e| Edge {
                u: local[e.u],
                v: local[e.v],
                id: e.id,
            })
            .collect();
        Ok(Multigraph {
            n: origin.len(),
            edges,
            origin,
            id_bound: self.id_bound,
        })
    }

    /// The spanning subgraph keeping only the edges in `keep`.
    pub fn spanning_subgraph(&self, keep: &EdgeSet) -> Multigraph {
        Multigraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(e.id))
                .copied()
                .collect(),
            origin: self.origin.clone(),
            id_bound: self.id_bound,
        }
    }

    /// Connected components of G minus `removed`, ordered by smallest node.
    pub fn components(&self, removed: &EdgeSet) -> Vec<NodeSet> {
        let labels = self.component_labels(removed);
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut parts = vec![NodeSet::new(); count];
        for (x, &c) in labels.iter().enumerate() {
            parts[c].insert(x);
        }
        parts
    }

    /// Component index of each node in G minus `removed`; components are
    /// numbered in order of their smallest node.
    pub fn component_labels(&self, removed: &EdgeSet) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            if !removed.contains(e.id) {
                uf.union(e.u, e.v);
            }
        }
        let mut index = vec![usize::MAX; self.n];
        let mut labels = Vec::with_capacity(self.n);
        let mut next = 0;
        for x in 0..self.n {
            let r = uf.find(x);
            if index[r] == usize::MAX {
                index[r] = next;
                next += 1;
            }
            labels.push(index[r]);
        }
        labels
    }

    /// Whether `a` and `b` are joined by a path avoiding `removed`.
    pub fn connected(&self, a: NodeId, b: NodeId, removed: &EdgeSet) -> bool {
        let labels = self.component_labels(removed);
        labels[a] == labels[b]
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{half, int, unit_weights};
    use crate::sets::all_subsets;
    use proptest::prelude::*;

    // s=0 u=1 v=2 w=3 t=4; su sv uw vw sw wt
    fn nolam() -> Multigraph {
        Multigraph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn cut_edges_examples() {
        let g = nolam();
        assert_eq!(g.cut_edges(&NodeSet::from([0, 1, 2, 3])), vec![5]);
        assert!(g.cut_edges(&NodeSet::new()).is_empty());
        assert!(g.cut_edges(&g.nodes()).is_empty());
        // S={s,u,w} -> {sv, vw, wt}
        assert_eq!(g.cut_edges(&NodeSet::from([0, 1, 3])), vec![1, 3, 5]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = nolam();
        let h = g.induced_subgraph(&NodeSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.edge_ids().to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(g.induced_subgraph(&g.nodes()).unwrap(), g);
        let st = g.induced_subgraph(&NodeSet::from([0, 4])).unwrap();
        assert_eq!((st.node_count(), st.edge_count()), (2, 0));
        assert_eq!(st.origins(), &[0, 4]);
        assert_eq!(
            g.induced_subgraph(&NodeSet::new()),
            Err(Error::EmptyNodeSet)
        );
    }

    #[test]
    fn nested_subgraphs_track_root_labels() {
        let g = nolam();
        let h = g.induced_subgraph(&NodeSet::from([1, 2, 3, 4])).unwrap();
        let k = h.induced_subgraph(&NodeSet::from([1, 3])).unwrap();
        assert_eq!(k.origins(), &[2, 4]);
        assert_eq!(k.lift(&NodeSet::from([0, 1])), NodeSet::from([2, 4]));
        assert_eq!(k.project(&NodeSet::from([0, 2, 3])), NodeSet::from([0]));
        assert_eq!(k.edge(3).map(|e| (e.u, e.v)), None);
    }

    #[test]
    fn components_examples() {
        let g = nolam();
        assert_eq!(
            g.components(&EdgeSet::from([5])),
            vec![NodeSet::from([0, 1, 2, 3]), NodeSet::from([4])]
        );
        assert_eq!(g.components(&EdgeSet::new()), vec![g.nodes()]);
        assert_eq!(g.components(&g.edge_ids()).len(), 5);
    }

    #[test]
    fn cut_weight_examples() {
        let g = nolam();
        let unit = unit_weights(6);
        assert_eq!(g.cut_weight(&NodeSet::from([0]), &unit), int(3));
        let xhat = vec![half(), half(), half(), half(), int(1), int(1)];
        assert_eq!(g.cut_weight(&NodeSet::from([0]), &xhat), int(2));
        assert_eq!(g.cut_weight(&NodeSet::new(), &xhat), int(0));
    }

    #[test]
    fn rejects_self_loops_and_bad_nodes() {
        let mut g = Multigraph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(Error::SelfLoop(1)));
        assert_eq!(
            g.add_edge(0, 3),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        );
        // parallel edges get distinct ids
        assert_eq!(g.add_edge(0, 1), Ok(0));
        assert_eq!(g.add_edge(1, 0), Ok(1));
    }

    fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
        (2..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 1..n), 0..=max_m).prop_map(move |raw| {
                let pairs: Vec<_> = raw.into_iter().map(|(u, d)| (u, (u + d) % n)).collect();
                Multigraph::from_edges(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn cuts_are_symmetric_submodular_posimodular(g in arb_graph(6, 10)) {
            let n = g.node_count();
            let d = |s: &NodeSet| g.cut_size(s) as i64;
            for a in all_subsets(n) {
                prop_assert_eq!(g.cut_edges(&a), g.cut_edges(&a.complement(n)));
                for b in all_subsets(n) {
                    let lhs = d(&a) + d(&b);
                    prop_assert!(lhs >= d(&a.intersection(&b)) + d(&a.union(&b)));
                    prop_assert!(lhs >= d(&a.difference(&b)) + d(&b.difference(&a)));
                }
            }
        }

        #[test]
        fn components_partition_nodes(g in arb_graph(8, 12), mask in any::<u64>()) {
            let removed = EdgeSet::from_mask(mask & ((1u64 << g.edge_count()) - 1));
            let parts = g.components(&removed);
            let mut seen = NodeSet::new();
            for p in &parts {
                prop_assert!(seen.is_disjoint(p));
                seen = seen.union(p);
                // no surviving edge leaves a component
                for e in g.edges() {
                    if !removed.contains(e.id) {
                        prop_assert!(!e.crosses(p));
                    }
                }
            }
            prop_assert_eq!(seen, g.nodes());
            let firsts: Vec<_> = parts.iter().map(|p| p.first().unwrap()).collect();
            prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
