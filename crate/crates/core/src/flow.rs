//! Exact minimum cuts with pinned terminal sets, and maximum-deficiency s-t cuts.
//!
//! Capacities are exact rationals. Before running max-flow they are brought to
//! a common denominator, so the augmenting-path loop works on integers: `i128`
//! when everything fits, arbitrary precision otherwise.

use crate::cutreq::{CutFunction, SndpRequirements};
use crate::graph::{Multigraph, NodeId};
use crate::rational::{int, Rational};
use crate::sets::NodeSet;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::VecDeque;
use std::ops::{Add, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutResult {
    pub value: Rational,
    /// Source side: the nodes reachable from the sources in the final residual graph.
    pub side: NodeSet,
}

trait Capacity: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Capacity for T {}

/// Residual network; arc `a ^ 1` is the reverse of arc `a`.
struct Network<T> {
    head: Vec<usize>,
    residual: Vec<T>,
    adj: Vec<Vec<usize>>,
}

impl<T: Capacity> Network<T> {
    fn new(nodes: usize) -> Self {
        Self {
            head: Vec::new(),
            residual: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_undirected(&mut self, a: usize, b: usize, cap: T) {
        let id = self.head.len();
        self.head.push(b);
        self.residual.push(cap.clone());
        self.adj[a].push(id);
        self.head.push(a);
        self.residual.push(cap);
        self.adj[b].push(id + 1);
    }

    fn bfs(&self, source: usize, parent_arc: &mut [usize]) {
        parent_arc.fill(usize::MAX);
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &arc in &self.adj[x] {
                let y = self.head[arc];
                if !seen[y] && self.residual[arc] > T::zero() {
                    seen[y] = true;
                    parent_arc[y] = arc;
                    queue.push_back(y);
                }
            }
        }
    }

    /// Edmonds-Karp from node 0 to node 1. Returns the flow value.
    fn max_flow(&mut self) -> T {
        let (source, sink) = (0, 1);
        let mut total = T::zero();
        let mut parent_arc = vec![usize::MAX; self.adj.len()];
        loop {
            self.bfs(source, &mut parent_arc);
            if parent_arc[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck: Option<T> = None;
            let mut y = sink;
            while y != source {
                let arc = parent_arc[y];
                let r = self.residual[arc].clone();
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= r => b,
                    _ => r,
                });
                y = self.head[arc ^ 1];
            }
            let delta = bottleneck.expect("path has at least one arc");
            let mut y = sink;
            while y != source {
                let arc = parent_arc[y];
                self.residual[arc] = self.residual[arc].clone() - delta.clone();
                self.residual[arc ^ 1] = self.residual[arc ^ 1].clone() + delta.clone();
                y = self.head[arc ^ 1];
            }
            total = total + delta;
        }
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(x) = stack.pop() {
            for &arc in &self.adj[x] {
                let y = self.head[arc];
                if !seen[y] && self.residual[arc] > T::zero() {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// Exact minimum cut separating `sources` from `sinks`.
///
/// Pinned terminals are merged into a super-source and super-sink. Among all
/// minimum cuts the one with the inclusion-minimal source side is returned.
pub fn min_cut(
    g: &Multigraph,
    w: &[Rational],
    sources: &NodeSet,
    sinks: &NodeSet,
) -> Result<MinCutResult> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    if !sources.is_disjoint(sinks) {
        return Err(Error::OverlappingTerminals);
    }
    let n = g.node_count();
    for x in sources.iter().chain(sinks.iter()) {
        if x >= n {
            return Err(Error::NodeOutOfRange { node: x, n });
        }
    }

    // 0 = merged sources, 1 = merged sinks, 2.. = the rest
    let mut map = vec![0usize; n];
    let mut next = 2;
    for (x, slot) in map.iter_mut().enumerate() {
        *slot = if sources.contains(x) {
            0
        } else if sinks.contains(x) {
            1
        } else {
            next += 1;
            next - 1
        };
    }

    let denom = g
        .edges()
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(w[e.id].denom()));
    let scaled: Vec<(usize, usize, BigInt)> = g
        .edges()
        .iter()
        .filter(|e| map[e.u] != map[e.v])
        .map(|e| {
            let c = w[e.id].numer() * (&denom / w[e.id].denom());
            (map[e.u], map[e.v], c)
        })
        .collect();
    for (_, _, c) in &scaled {
        assert!(*c >= BigInt::zero(), "negative capacity");
    }

    let total: BigInt = scaled.iter().map(|(_, _, c)| c).sum();
    let (flow, reach) = if total.to_i128().is_some_and(|t| t < i128::MAX / 4) {
        let mut net = Network::<i128>::new(next);
        for (a, b, c) in &scaled {
            net.add_undirected(*a, *b, c.to_i128().unwrap());
        }
        let f = net.max_flow();
        (BigInt::from(f), net.reachable(0))
    } else {
        let mut net = Network::<BigInt>::new(next);
        for (a, b, c) in scaled {
            net.add_undirected(a, b, c);
        }
        let f = net.max_flow();
        (f, net.reachable(0))
    };

    let side: NodeSet = (0..n).filter(|&x| reach[map[x]]).collect();
    let value = Rational::new(flow, denom);
    debug_assert_eq!(value, g.cut_weight(&side, w));
    Ok(MinCutResult { value, side })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxDeficiencyCut {
    pub value: Rational,
    /// The maximizing s-t cut, given as the side containing `s`.
    pub side: NodeSet,
}

fn better(candidate: &MaxDeficiencyCut, best: &Option<MaxDeficiencyCut>) -> bool {
    match best {
        None => true,
        Some(b) => {
            candidate.value > b.value || (candidate.value == b.value && candidate.side < b.side)
        }
    }
}

/// max { f^SNDP(T) - w(δ_G(T)) : T an s-t cut }, with a maximizer.
///
/// For every demand i and both ways of placing (s_i, t_i) relative to (s, t),
/// a pinned minimum cut gives the best cut separating pair i. Cuts separating no
/// demand pair have requirement 0, so the plain minimum s-t cut is a candidate
/// as well; with it the result is exact over all s-t cuts.
pub fn max_deficiency_st_cut(
    reqs: &SndpRequirements,
    g: &Multigraph,
    w: &[Rational],
    s: NodeId,
    t: NodeId,
) -> Result<MaxDeficiencyCut> {
    if s == t {
        return Err(Error::InvalidRequirement(format!(
            "s-t cut needs distinct endpoints, got {s} twice"
        )));
    }
    let n = g.node_count();
    let oriented = |side: NodeSet| {
        if side.contains(s) {
            side
        } else {
            side.complement(n)
        }
    };

    let plain = min_cut(g, w, &NodeSet::singleton(s), &NodeSet::singleton(t))?;
    let mut best = Some(MaxDeficiencyCut {
        value: -plain.value,
        side: plain.side,
    });
    for d in reqs.demands() {
        for (src, snk) in [([d.s, s], [d.t, t]), ([d.t, s], [d.s, t])] {
            let (src, snk) = (NodeSet::from(src), NodeSet::from(snk));
            let cut = match min_cut(g, w, &src, &snk) {
                Ok(c) => c,
                Err(Error::OverlappingTerminals) => continue,
                Err(e) => return Err(e),
            };
            let candidate = MaxDeficiencyCut {
                value: int(i64::from(d.r)) - cut.value,
                side: oriented(cut.side),
            };
            if better(&candidate, &best) {
                best = Some(candidate);
            }
        }
    }
    Ok(best.expect("plain s-t cut is always a candidate"))
}

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

/// Enumerates every s-t cut (as the side containing `s`) and maximizes
/// f(T) - w(δ_G(T)). Unit weights when `w` is `None`.
pub fn brute_force_max_deficiency_st_cut(
    f: &CutFunction,
    g: &Multigraph,
    w: Option<&[Rational]>,
    s: NodeId,
    t: NodeId,
    cap: usize,
) -> Result<MaxDeficiencyCut> {
    let n = g.node_count();
    if n > cap {
        return Err(Error::SizeLimitExceeded {
            what: "s-t cut enumeration",
            size: n,
            cap,
        });
    }
    if s == t {
        return Err(Error::InvalidRequirement(format!(
            "s-t cut needs distinct endpoints, got {s} twice"
        )));
    }
    let free: Vec<usize> = (0..n).filter(|&x| x != s && x != t).collect();
    let mut best: Option<MaxDeficiencyCut> = None;
    for bits in 0..1u64 << free.len() {
        let mut side = NodeSet::singleton(s);
        for (i, &x) in free.iter().enumerate() {
            if bits >> i & 1 == 1 {
                side.insert(x);
            }
        }
        let value = crate::cutreq::deficiency(f, g, w, &side);
        let candidate = MaxDeficiencyCut { value, side };
        if better(&candidate, &best) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one s-t cut"))
}
