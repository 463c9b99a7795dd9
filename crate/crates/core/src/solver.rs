//! Iterative rounding, feasibility checks for both relative models, exact
//! brute-force optima, and the k-ECSS reduction.

use crate::cutreq::{symmetrize, CutFunction, Demand, GraceProfile, SndpRequirements};
use crate::flow::min_cut;
use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::lp::{
    half_integral_edges, solve_crlp_with, CrlpOptions, EnumerationSeparator, Separator,
    SndpSeparator, ViolatedCut,
};
use crate::rational::{fmt_exact, indicator, int, unit_weights, Rational};
use crate::sets::{EdgeSet, NodeSet};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Node cap for checks that enumerate every cut.
pub const CUT_ENUMERATION_CAP: usize = 20;
/// Cap on the number of fault sets a path-relative check may visit.
pub const DEFAULT_FAULT_SET_CAP: u64 = 10_000_000;
/// Edge cap for [`exact_opt`].
pub const EXACT_EDGE_CAP: usize = 24;

#[derive(Debug, Clone)]
pub enum Requirement {
    Sndp(SndpRequirements),
    Kecss(u32),
    Grace(GraceProfile),
    General(CutFunction),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Multigraph,
    /// Indexed by edge id.
    pub costs: Vec<Rational>,
    pub requirement: Requirement,
    pub names: Vec<String>,
}

impl Instance {
    pub fn new(graph: Multigraph, costs: Vec<Rational>, requirement: Requirement) -> Result<Self> {
        if costs.len() != graph.id_bound() {
            return Err(Error::InvalidRequirement(format!(
                "{} costs for {} edge ids",
                costs.len(),
                graph.id_bound()
            )));
        }
        if let Some(id) = costs.iter().position(|c| c.is_negative()) {
            return Err(Error::InvalidRequirement(format!(
                "edge {id} has negative cost"
            )));
        }
        let n = graph.node_count();
        match &requirement {
            Requirement::Sndp(reqs) => reqs.validate_nodes(n)?,
            Requirement::Kecss(0) => {
                return Err(Error::InvalidRequirement("k must be positive".into()))
            }
            Requirement::General(f) if f.n() != n => {
                return Err(Error::InvalidRequirement(format!(
                    "cut function on {} nodes for a graph on {n}",
                    f.n()
                )))
            }
            _ => {}
        }
        let names = (0..n).map(|v| v.to_string()).collect();
        Ok(Self {
            graph,
            costs,
            requirement,
            names,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.graph.node_count());
        self.names = names;
        self
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    /// Demands whose f^SNDP equals the instance's requirement, when one exists.
    /// k-ECSS becomes the star (0, v, k).
    pub fn sndp(&self) -> Option<SndpRequirements> {
        match &self.requirement {
            Requirement::Sndp(r) => Some(r.clone()),
            Requirement::Kecss(k) => {
                let demands = (1..self.graph.node_count())
                    .map(|v| Demand { s: 0, t: v, r: *k })
                    .collect();
                Some(SndpRequirements::new(demands).expect("star demands are valid"))
            }
            _ => None,
        }
    }

    /// The symmetric, normalized requirement function.
    pub fn cut_function(&self) -> CutFunction {
        let n = self.graph.node_count();
        match &self.requirement {
            Requirement::Sndp(r) => CutFunction::sndp(n, r.clone()),
            Requirement::Kecss(k) => CutFunction::kecss(n, *k),
            Requirement::Grace(p) => symmetrize(&CutFunction::grace(n, p.clone())),
            Requirement::General(f) => symmetrize(f),
        }
    }

    /// Pairs whose connectivity the path-relative model protects.
    /// k-ECSS protects every pair, not just the star.
    pub fn path_demands(&self) -> Result<Vec<Demand>> {
        match &self.requirement {
            Requirement::Sndp(r) => Ok(r.demands().to_vec()),
            Requirement::Kecss(k) => {
                let n = self.graph.node_count();
                let mut out = Vec::new();
                for s in 0..n {
                    for t in s + 1..n {
                        out.push(Demand { s, t, r: *k });
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(
                "path-relative feasibility is defined for pair requirements only",
            )),
        }
    }

    pub fn cost_of(&self, edges: &EdgeSet) -> Rational {
        edges.iter().map(|e| &self.costs[e]).sum()
    }

    pub fn oracle(&self) -> Oracle {
        match self.sndp() {
            Some(reqs) => Oracle::Flow(reqs),
            None => Oracle::Enumerate(EnumerationSeparator {
                f: self.cut_function(),
                cap: CUT_ENUMERATION_CAP,
            }),
        }
    }
}

/// Separation for an instance: min cuts for pair requirements, enumeration otherwise.
#[derive(Debug, Clone)]
pub enum Oracle {
    Flow(SndpRequirements),
    Enumerate(EnumerationSeparator),
}

impl Separator for Oracle {
    fn requirement(&self, s: &NodeSet) -> i64 {
        match self {
            Oracle::Flow(reqs) => reqs.eval(s),
            Oracle::Enumerate(e) => e.requirement(s),
        }
    }

    fn separate(&self, g: &Multigraph, x: &[Rational]) -> Result<Option<ViolatedCut>> {
        match self {
            Oracle::Flow(reqs) => SndpSeparator { reqs }.separate(g, x),
            Oracle::Enumerate(e) => e.separate(g, x),
        }
    }

    fn seeds(&self, g: &Multigraph) -> Vec<NodeSet> {
        match self {
            Oracle::Flow(reqs) => SndpSeparator { reqs }.seeds(g),
            Oracle::Enumerate(e) => e.seeds(g),
        }
    }
}

/// One pass of the rounding loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    /// Edges still free when the LP was solved.
    pub free_edges: usize,
    pub objective: Rational,
    /// Edges at or above 1/2, added to the solution.
    pub z1: EdgeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub edges: EdgeSet,
    pub cost: Rational,
    /// Optimum of the relaxation on the original instance.
    pub lp_bound: Rational,
    pub trace: Vec<Round>,
}

/// Iterative rounding: solve for an extreme point of the residual LP, keep
/// every edge with value at least 1/2, repeat until feasible.
pub fn crndp_alg(inst: &Instance) -> Result<Solution> {
    let g = &inst.graph;
    let oracle = inst.oracle();
    let mut chosen = EdgeSet::new();
    let mut lp_bound: Option<Rational> = None;
    let mut trace = Vec::new();
    for _ in 0..=g.edge_count() {
        let x = indicator(g.id_bound(), &chosen);
        if oracle.separate(g, &x)?.is_none() {
            let cost = inst.cost_of(&chosen);
            let lp_bound = lp_bound.unwrap_or_else(Rational::zero);
            if cost > int(2) * &lp_bound {
                return Err(Error::ApproxBoundViolated {
                    cost: fmt_exact(&cost),
                    lp_bound: fmt_exact(&lp_bound),
                });
            }
            return Ok(Solution {
                edges: chosen,
                cost,
                lp_bound,
                trace,
            });
        }
        let out = solve_crlp_with(&oracle, g, &inst.costs, &chosen, CrlpOptions::default())?;
        let z1 = half_integral_edges(&out.solution, g, &chosen);
        if z1.is_empty() {
            return Err(Error::AssertionHalfEdge);
        }
        lp_bound.get_or_insert_with(|| out.solution.objective.clone());
        trace.push(Round {
            free_edges: out.free.len(),
            objective: out.solution.objective,
            z1: z1.clone(),
        });
        chosen = chosen.union(&z1);
    }
    Err(Error::IterationLimit(g.edge_count() + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// |δ_H(side)| = have < need = min{f(side), |δ_G(side)|}.
    Cut {
        side: NodeSet,
        have: usize,
        need: i64,
    },
    /// Removing `faults` (fewer than r_i edges) keeps s, t connected in G but not in H.
    Path {
        demand: usize,
        faults: EdgeSet,
        s: NodeId,
        t: NodeId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<Witness>,
}

impl FeasibilityReport {
    fn ok() -> Self {
        Self {
            feasible: true,
            witness: None,
        }
    }

    fn fail(w: Witness) -> Self {
        Self {
            feasible: false,
            witness: Some(w),
        }
    }
}

fn check_subset(g: &Multigraph, h: &EdgeSet) -> Result<()> {
    match h.iter().find(|&e| g.edge(e).is_none()) {
        Some(e) => Err(Error::UnknownEdge(e)),
        None => Ok(()),
    }
}

/// |δ_H(S)| ≥ min{f(S), |δ_G(S)|} for every S.
pub fn check_cut_relative(inst: &Instance, h: &EdgeSet) -> Result<FeasibilityReport> {
    let g = &inst.graph;
    check_subset(g, h)?;
    let x = indicator(g.id_bound(), h);
    Ok(match inst.oracle().separate(g, &x)? {
        None => FeasibilityReport::ok(),
        Some(cut) => {
            let have = g.cut_size_within(&cut.side, h);
            FeasibilityReport::fail(Witness::Cut {
                side: cut.side,
                have,
                need: cut.rhs,
            })
        }
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of fault sets a path-relative check visits.
pub fn fault_set_count(m: usize, demands: &[Demand]) -> u64 {
    demands
        .iter()
        .map(|d| {
            (0..u64::from(d.r).min(m as u64 + 1))
                .map(|j| binomial(m as u64, j))
                .fold(0u64, u64::saturating_add)
        })
        .fold(0u64, u64::saturating_add)
}

/// Connectivity of `a` and `b` using only edges flagged alive, with reused buffers.
struct Reach {
    parent: Vec<usize>,
}

impl Reach {
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

    fn connected(
        &mut self,
        g: &Multigraph,
        alive: impl Fn(EdgeId) -> bool,
        a: NodeId,
        b: NodeId,
    ) -> bool {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        for e in g.edges() {
            if alive(e.id) {
                let (ru, rv) = (self.find(e.u), self.find(e.v));
                if ru != rv {
                    self.parent[ru] = rv;
                }
            }
        }
        self.find(a) == self.find(b)
    }
}

/// Calls `visit` on every subset of `items` with fewer than `limit` elements,
/// smallest first; stops early when `visit` returns true.
fn for_small_subsets(
    items: &[usize],
    limit: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    fn rec(
        items: &[usize],
        start: usize,
        size: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return visit(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            if rec(items, i + 1, size, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    for size in 0..limit.min(items.len() + 1) {
        if rec(items, 0, size, &mut cur, &mut visit) {
            return true;
        }
    }
    false
}

/// For every demand i and every fault set F with |F| < r_i: if G - F connects
/// s_i and t_i, so does H - F.
pub fn check_path_relative(inst: &Instance, h: &EdgeSet) -> Result<FeasibilityReport> {
    check_path_relative_capped(inst, h, DEFAULT_FAULT_SET_CAP)
}

pub fn check_path_relative_capped(
    inst: &Instance,
    h: &EdgeSet,
    cap: u64,
) -> Result<FeasibilityReport> {
    let g = &inst.graph;
    check_subset(g, h)?;
    let demands = inst.path_demands()?;
    let count = fault_set_count(g.edge_count(), &demands);
    if count > cap {
        return Err(Error::SizeLimitExceeded {
            what: "fault-set enumeration",
            size: count.min(usize::MAX as u64) as usize,
            cap: cap.min(usize::MAX as u64) as usize,
        });
    }
    let ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
    let mut removed = vec![false; g.id_bound()];
    let mut reach = Reach::new(g.node_count());
    for (i, d) in demands.iter().enumerate() {
        let mut witness = None;
        for_small_subsets(&ids, d.r as usize, |faults| {
            for &e in faults {
                removed[e] = true;
            }
            let in_g = reach.connected(g, |e| !removed[e], d.s, d.t);
            let violated = in_g && !reach.connected(g, |e| !removed[e] && h.contains(e), d.s, d.t);
            for &e in faults {
                removed[e] = false;
            }
            if violated {
                witness = Some(faults.iter().copied().collect::<EdgeSet>());
            }
            violated
        });
        if let Some(faults) = witness {
            return Ok(FeasibilityReport::fail(Witness::Path {
                demand: i,
                faults,
                s: d.s,
                t: d.t,
            }));
        }
    }
    Ok(FeasibilityReport::ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    CutRelative,
    PathRelative,
}

/// Costs as integers over a common denominator.
fn scaled_costs(costs: &[Rational]) -> Result<Vec<i128>> {
    let denom = costs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    costs
        .iter()
        .map(|c| {
            (c.numer() * (&denom / c.denom()))
                .to_i128()
                .filter(|v| v.abs() < i128::MAX >> 32)
                .ok_or(Error::Unsupported("costs too large for exact enumeration"))
        })
        .collect()
}

/// Minimum-cost feasible edge set under `model` by enumerating all 2^m
/// subsets; ties go to the lexicographically smallest edge-id set.
pub fn exact_opt(inst: &Instance, model: Model) -> Result<(Rational, EdgeSet)> {
    let g = &inst.graph;
    let m = g.edge_count();
    if m > EXACT_EDGE_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "exact optimum enumeration",
            size: m,
            cap: EXACT_EDGE_CAP,
        });
    }
    let ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
    let local_costs: Vec<Rational> = ids.iter().map(|&e| inst.costs[e].clone()).collect();
    let scaled = scaled_costs(&local_costs)?;
    let feasible: Box<dyn Fn(u32) -> bool> = match model {
        Model::CutRelative => {
            let table = CutTable::new(inst)?;
            Box::new(move |h| table.is_feasible_mask(h))
        }
        Model::PathRelative => {
            let checks = fault_table(inst, &ids)?;
            let g = g.clone();
            let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            let n = g.node_count();
            Box::new(move |h| {
                checks
                    .iter()
                    .all(|&(faults, s, t)| mask_connected(n, &ends, h & !faults, s, t))
            })
        }
    };
    let to_set = |mask: u32| -> EdgeSet {
        (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ids[i])
            .collect()
    };
    let mut best: Option<(i128, EdgeSet)> = None;
    for h in 0..(1u64 << m) {
        let h = h as u32;
        let cost: i128 = (0..m).filter(|i| h >> i & 1 == 1).map(|i| scaled[i]).sum();
        if let Some((b, _)) = &best {
            if cost > *b {
                continue;
            }
        }
        if !feasible(h) {
            continue;
        }
        let set = to_set(h);
        let better = match &best {
            None => true,
            Some((b, bs)) => cost < *b || (cost == *b && set < *bs),
        };
        if better {
            best = Some((cost, set));
        }
    }
    let (_, set) = best.expect("the full edge set is always feasible");
    Ok((inst.cost_of(&set), set))
}

/// Every cut with positive requirement as (δ_G(S) mask, min{f(S), |δ_G(S)|}),
/// deduplicated by boundary. Bit i of a mask is the i-th edge of `g.edges()`.
#[derive(Debug, Clone)]
pub struct CutTable {
    ids: Vec<EdgeId>,
    rows: Vec<(u32, u32)>,
}

impl CutTable {
    pub fn new(inst: &Instance) -> Result<Self> {
        let g = &inst.graph;
        let n = g.node_count();
        if n > CUT_ENUMERATION_CAP {
            return Err(Error::SizeLimitExceeded {
                what: "cut enumeration",
                size: n,
                cap: CUT_ENUMERATION_CAP,
            });
        }
        if g.edge_count() > 32 {
            return Err(Error::SizeLimitExceeded {
                what: "cut table edges",
                size: g.edge_count(),
                cap: 32,
            });
        }
        let ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        let f = inst.cut_function();
        let mut best: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        for side in crate::sets::all_subsets(n.saturating_sub(1)).skip(1) {
            let mut mask = 0u32;
            for (i, e) in g.edges().iter().enumerate() {
                if e.crosses(&side) {
                    mask |= 1 << i;
                }
            }
            let need = f.eval(&side).min(i64::from(mask.count_ones()));
            if need > 0 {
                let slot = best.entry(mask).or_insert(0);
                *slot = (*slot).max(need as u32);
            }
        }
        let mut rows: Vec<(u32, u32)> = best.into_iter().collect();
        rows.sort_unstable();
        Ok(Self { ids, rows })
    }

    pub fn mask_of(&self, h: &EdgeSet) -> u32 {
        self.ids
            .iter()
            .enumerate()
            .filter(|(_, &id)| h.contains(id))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_feasible_mask(&self, h: u32) -> bool {
        self.rows
            .iter()
            .all(|&(mask, need)| (h & mask).count_ones() >= need)
    }

    pub fn is_feasible(&self, h: &EdgeSet) -> bool {
        self.is_feasible_mask(self.mask_of(h))
    }
}

/// (fault mask, s, t) for every fault set under which G still connects s, t.
fn fault_table(inst: &Instance, ids: &[usize]) -> Result<Vec<(u32, usize, usize)>> {
    let g = &inst.graph;
    let demands = inst.path_demands()?;
    let count = fault_set_count(g.edge_count(), &demands);
    if count > DEFAULT_FAULT_SET_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "fault-set enumeration",
            size: count as usize,
            cap: DEFAULT_FAULT_SET_CAP as usize,
        });
    }
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let full = if ids.len() == 32 {
        u32::MAX
    } else {
        (1u32 << ids.len()) - 1
    };
    let positions: Vec<usize> = (0..ids.len()).collect();
    let mut out = Vec::new();
    for d in &demands {
        for_small_subsets(&positions, d.r as usize, |faults| {
            let fmask = faults.iter().fold(0u32, |acc, &i| acc | 1 << i);
            if mask_connected(g.node_count(), &ends, full & !fmask, d.s, d.t) {
                out.push((fmask, d.s, d.t));
            }
            false
        });
    }
    Ok(out)
}

fn mask_connected(n: usize, ends: &[(usize, usize)], alive: u32, s: usize, t: usize) -> bool {
    debug_assert!(n <= 64);
    let mut reach = 1u64 << s;
    loop {
        let before = reach;
        for (i, &(u, v)) in ends.iter().enumerate() {
            if alive >> i & 1 == 1 {
                let (iu, iv) = (reach >> u & 1 == 1, reach >> v & 1 == 1);
                if iu != iv {
                    reach |= (1 << u) | (1 << v);
                }
            }
        }
        if reach >> t & 1 == 1 {
            return true;
        }
        if reach == before {
            return false;
        }
    }
}

/// Whether every pair of nodes has `k` edge-disjoint paths.
pub fn is_k_edge_connected(g: &Multigraph, k: u32) -> Result<bool> {
    let w = unit_weights(g.id_bound());
    for v in 1..g.node_count() {
        let cut = min_cut(g, &w, &NodeSet::singleton(0), &NodeSet::singleton(v))?;
        if cut.value < int(i64::from(k)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adds a source s and sink t joined to every node by zero-cost edges and
/// asks for k + n edge-disjoint s-t paths. Edge ids: the original ones, then
/// sv for each v, then vt for each v. s = n, t = n + 1.
pub fn kecss_reduction(g: &Multigraph, costs: &[Rational], k: u32) -> Result<Instance> {
    if k == 0 {
        return Err(Error::InvalidRequirement("k must be positive".into()));
    }
    if !is_k_edge_connected(g, k)? {
        return Err(Error::NotKConnected(k));
    }
    let n = g.node_count();
    let mut h = Multigraph::new(n + 2);
    let mut new_costs = Vec::new();
    for e in g.edges() {
        h.add_edge(e.u, e.v)?;
        new_costs.push(costs[e.id].clone());
    }
    let (s, t) = (n, n + 1);
    for v in 0..n {
        h.add_edge(s, v)?;
        new_costs.push(Rational::zero());
    }
    for v in 0..n {
        h.add_edge(v, t)?;
        new_costs.push(Rational::zero());
    }
    let r = k + u32::try_from(n).map_err(|_| Error::Unsupported("graph too large"))?;
    let reqs = SndpRequirements::new(vec![Demand { s, t, r }])?;
    let mut names: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    names.push("s".into());
    names.push("t".into());
    Ok(Instance::new(h, new_costs, Requirement::Sndp(reqs))?.with_names(names))
}
