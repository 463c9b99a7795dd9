//! Cut-requirement functions and the operations that build new ones from old.
//!
//! A [`CutFunction`] is an evaluator `S -> f(S)` over subsets of the nodes
//! `0..n` of some graph. Derived functions (symmetrization, residuals,
//! restrictions) wrap their base lazily; nothing is ever tabulated unless a
//! caller asks for it explicitly with [`CutFunction::table`].

use crate::graph::{Multigraph, NodeId};
use crate::rational::{int, Rational};
use crate::sets::{all_subsets, EdgeSet, NodeSet};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// One `(s, t, r)` connectivity requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Demand {
    pub s: NodeId,
    pub t: NodeId,
    pub r: u32,
}

/// The tuples defining f^SNDP(S) = max { r_i : S separates s_i and t_i }.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SndpRequirements {
    demands: Vec<Demand>,
}

impl SndpRequirements {
    pub fn new(demands: Vec<Demand>) -> Result<Self> {
        for d in &demands {
            if d.s == d.t {
                return Err(Error::InvalidRequirement(format!(
                    "terminals coincide at node {}",
                    d.s
                )));
            }
            if d.r == 0 {
                return Err(Error::InvalidRequirement(format!(
                    "zero requirement between {} and {}",
                    d.s, d.t
                )));
            }
        }
        Ok(Self { demands })
    }

    pub fn from_triples(triples: &[(NodeId, NodeId, u32)]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&(s, t, r)| Demand { s, t, r })
                .collect(),
        )
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn len(&self) -> usize {
        self.demands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demands.is_empty()
    }

    pub fn max_requirement(&self) -> u32 {
        self.demands.iter().map(|d| d.r).max().unwrap_or(0)
    }

    pub fn eval(&self, s: &NodeSet) -> i64 {
        self.demands
            .iter()
            .filter(|d| s.contains(d.s) != s.contains(d.t))
            .map(|d| i64::from(d.r))
            .max()
            .unwrap_or(0)
    }

    /// Checks that every terminal is a node of a graph on `n` nodes.
    pub fn validate_nodes(&self, n: usize) -> Result<()> {
        for d in &self.demands {
            for x in [d.s, d.t] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
        }
        Ok(())
    }
}

/// f^{k-ECSS}: `k` on every nonempty proper subset.
pub fn kecss_eval(k: u32, n: usize, s: &NodeSet) -> i64 {
    let size = s.len();
    if size == 0 || size == n {
        0
    } else {
        i64::from(k)
    }
}

pub type SetMeasure = Arc<dyn Fn(&NodeSet) -> Rational + Send + Sync>;

/// A non-increasing threshold sequence τ, optionally paired with a monotone
/// set measure π that replaces |S|.
#[derive(Clone)]
pub struct GraceProfile {
    tau: Vec<u32>,
    pi: Option<SetMeasure>,
}

impl GraceProfile {
    /// Requirement reported when no level qualifies (π(S) = 0).
    pub const SATURATED: i64 = 1 << 40;

    pub fn new(tau: Vec<u32>) -> Result<Self> {
        if let Some(i) = tau.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::InvalidRequirement(format!(
                "tau increases at level {}",
                i + 1
            )));
        }
        Ok(Self { tau, pi: None })
    }

    pub fn with_measure(mut self, pi: SetMeasure) -> Self {
        self.pi = Some(pi);
        self
    }

    pub fn tau(&self) -> &[u32] {
        &self.tau
    }

    pub fn has_measure(&self) -> bool {
        self.pi.is_some()
    }

    /// τ(ℓ), zero past the stored prefix.
    pub fn level(&self, l: usize) -> u32 {
        self.tau.get(l).copied().unwrap_or(0)
    }

    /// Size of S under the profile: π(S) if present, else |S|.
    pub fn measure(&self, s: &NodeSet) -> Rational {
        match &self.pi {
            Some(pi) => pi(s),
            None => int(s.len() as i64),
        }
    }

    /// min { ℓ : τ(ℓ) < measure(S) }, and 0 on the empty set.
    pub fn eval(&self, s: &NodeSet) -> i64 {
        if s.is_empty() {
            return 0;
        }
        let m = self.measure(s);
        (0..=self.tau.len())
            .find(|&l| int(i64::from(self.level(l))) < m)
            .map_or(Self::SATURATED, |l| l as i64)
    }
}

impl fmt::Debug for GraceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraceProfile")
            .field("tau", &self.tau)
            .field("pi", &self.pi.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

/// Which construction produced a [`CutFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Descriptor {
    Zero,
    Sndp,
    Kecss,
    Grace,
    GracePi,
    Sym,
    Residual,
    Restriction,
    Custom,
}

type Evaluator = Arc<dyn Fn(&NodeSet) -> i64 + Send + Sync>;

enum Kind {
    Zero,
    Sndp(SndpRequirements),
    Kecss(u32),
    Grace(GraceProfile),
    Sym(CutFunction),
    Residual {
        base: CutFunction,
        z_ids: EdgeSet,
        z: Vec<(NodeId, NodeId)>,
    },
    Restriction {
        base: CutFunction,
        /// Parent label of each local node.
        members: Vec<NodeId>,
        /// Parent nodes outside the restricted set.
        outside: NodeSet,
        /// Endpoints (parent labels) of the boundary edges of the restricted set.
        z: Vec<(NodeId, NodeId)>,
    },
    Custom {
        name: String,
        eval: Evaluator,
    },
}

/// A cut-requirement function over subsets of `0..n`.
#[derive(Clone)]
pub struct CutFunction {
    n: usize,
    kind: Arc<Kind>,
}

fn boundary_count(z: &[(NodeId, NodeId)], s: &NodeSet) -> i64 {
    z.iter()
        .filter(|&&(u, v)| s.contains(u) != s.contains(v))
        .count() as i64
}

impl CutFunction {
    fn wrap(n: usize, kind: Kind) -> Self {
        Self {
            n,
            kind: Arc::new(kind),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::wrap(n, Kind::Zero)
    }

    pub fn sndp(n: usize, reqs: SndpRequirements) -> Self {
        Self::wrap(n, Kind::Sndp(reqs))
    }

    pub fn kecss(n: usize, k: u32) -> Self {
        Self::wrap(n, Kind::Kecss(k))
    }

    /// The raw (unsymmetrized) graceful-degradation function.
    pub fn grace(n: usize, profile: GraceProfile) -> Self {
        Self::wrap(n, Kind::Grace(profile))
    }

    pub fn custom(
        n: usize,
        name: impl Into<String>,
        eval: impl Fn(&NodeSet) -> i64 + Send + Sync + 'static,
    ) -> Self {
        Self::wrap(
            n,
            Kind::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
        )
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn descriptor(&self) -> Descriptor {
        match &*self.kind {
            Kind::Zero => Descriptor::Zero,
            Kind::Sndp(_) => Descriptor::Sndp,
            Kind::Kecss(_) => Descriptor::Kecss,
            Kind::Grace(p) if p.has_measure() => Descriptor::GracePi,
            Kind::Grace(_) => Descriptor::Grace,
            Kind::Sym(_) => Descriptor::Sym,
            Kind::Residual { .. } => Descriptor::Residual,
            Kind::Restriction { .. } => Descriptor::Restriction,
            Kind::Custom { .. } => Descriptor::Custom,
        }
    }

    /// The requirements behind an f^SNDP function, if this is one.
    pub fn as_sndp(&self) -> Option<&SndpRequirements> {
        match &*self.kind {
            Kind::Sndp(r) => Some(r),
            _ => None,
        }
    }

    pub fn eval(&self, s: &NodeSet) -> i64 {
        match &*self.kind {
            Kind::Zero => 0,
            Kind::Sndp(reqs) => reqs.eval(s),
            Kind::Kecss(k) => kecss_eval(*k, self.n, s),
            Kind::Grace(p) => p.eval(s),
            Kind::Sym(base) => {
                let size = s.len();
                if size == 0 || size == self.n {
                    0
                } else {
                    base.eval(s).max(base.eval(&s.complement(self.n)))
                }
            }
            Kind::Residual { base, z, .. } => base.eval(s) - boundary_count(z, s),
            Kind::Restriction {
                base,
                members,
                outside,
                z,
            } => {
                let size = s.len();
                if size == 0 || size == self.n {
                    return 0;
                }
                let inner: NodeSet = s.iter().map(|x| members[x]).collect();
                let outer = inner.union(outside);
                let a = base.eval(&inner) - boundary_count(z, &inner);
                let b = base.eval(&outer) - boundary_count(z, &outer);
                a.max(b)
            }
            Kind::Custom { eval, .. } => eval(s),
        }
    }

    /// All 2^n values indexed by subset mask.
    pub fn table(&self, cap: usize) -> Result<Vec<i64>> {
        if self.n > cap {
            return Err(Error::SizeLimitExceeded {
                what: "subset enumeration",
                size: self.n,
                cap,
            });
        }
        Ok(all_subsets(self.n).map(|s| self.eval(&s)).collect())
    }
}

impl fmt::Debug for CutFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("CutFunction");
        d.field("n", &self.n).field("kind", &self.descriptor());
        if let Kind::Custom { name, .. } = &*self.kind {
            d.field("name", name);
        }
        d.finish()
    }
}

/// f^SNDP(S) evaluated directly from the tuples.
pub fn sndp_eval(reqs: &SndpRequirements, s: &NodeSet) -> i64 {
    reqs.eval(s)
}

pub fn grace_eval(profile: &GraceProfile, s: &NodeSet) -> i64 {
    profile.eval(s)
}

/// f^sym(S) = max{f(S), f(V-S)}, forced to 0 on ∅ and V.
///
/// Functions that are already symmetric and normalized (SNDP, k-ECSS,
/// restrictions, symmetrizations) are returned unchanged.
pub fn symmetrize(f: &CutFunction) -> CutFunction {
    match &*f.kind {
        Kind::Zero | Kind::Sndp(_) | Kind::Kecss(_) | Kind::Sym(_) | Kind::Restriction { .. } => {
            f.clone()
        }
        _ => CutFunction::wrap(f.n, Kind::Sym(f.clone())),
    }
}

/// S -> f(S) - |δ_Z(S)|, with Z a set of edges of `g`.
///
/// A residual of a residual over a disjoint edge set collapses into a single
/// residual over the union.
pub fn residual(f: &CutFunction, g: &Multigraph, z: &EdgeSet) -> Result<CutFunction> {
    for id in z.iter() {
        if g.edge(id).is_none() {
            return Err(Error::UnknownEdge(id));
        }
    }
    if z.is_empty() {
        return Ok(f.clone());
    }
    let mut endpoints: Vec<(NodeId, NodeId)> = g
        .edges()
        .iter()
        .filter(|e| z.contains(e.id))
        .map(|e| (e.u, e.v))
        .collect();
    if let Kind::Residual {
        base,
        z_ids,
        z: inner,
    } = &*f.kind
    {
        if z_ids.is_disjoint(z) {
            endpoints.extend_from_slice(inner);
            return Ok(CutFunction::wrap(
                f.n,
                Kind::Residual {
                    base: base.clone(),
                    z_ids: z_ids.union(z),
                    z: endpoints,
                },
            ));
        }
    }
    Ok(CutFunction::wrap(
        f.n,
        Kind::Residual {
            base: f.clone(),
            z_ids: z.clone(),
            z: endpoints,
        },
    ))
}

/// The restriction f_S of `f` to `s`, as a function on the nodes of G[S]
/// (local labels `0..|S|` in increasing parent order).
pub fn restrict(f: &CutFunction, g: &Multigraph, s: &NodeSet) -> Result<CutFunction> {
    let n = g.node_count();
    if s.is_empty() || s.len() >= n || !s.is_subset(&g.nodes()) {
        return Err(Error::InvalidRestriction);
    }
    let z = g
        .edges()
        .iter()
        .filter(|e| e.crosses(s))
        .map(|e| (e.u, e.v))
        .collect();
    Ok(CutFunction::wrap(
        s.len(),
        Kind::Restriction {
            base: f.clone(),
            members: s.to_vec(),
            outside: s.complement(n),
            z,
        },
    ))
}

/// f(S) - w(δ_G(S)); unit weights when `w` is `None`.
pub fn deficiency(
    f: &CutFunction,
    g: &Multigraph,
    w: Option<&[Rational]>,
    s: &NodeSet,
) -> Rational {
    match w {
        Some(w) => int(f.eval(s)) - g.cut_weight(s, w),
        None => int(unit_deficiency(f, g, s)),
    }
}

/// f(S) - |δ_G(S)|.
pub fn unit_deficiency(f: &CutFunction, g: &Multigraph, s: &NodeSet) -> i64 {
    f.eval(s) - g.cut_size(s) as i64
}

pub const DEFAULT_SUPERMODULARITY_CAP: usize = 12;

/// Searches all pairs (A, B) for a violation of
/// f(A) + f(B) <= max{f(A∩B) + f(A∪B), f(A-B) + f(B-A)}.
pub fn weak_supermodularity_violation(
    f: &CutFunction,
    cap: usize,
) -> Result<Option<(NodeSet, NodeSet)>> {
    let table = f.table(cap)?;
    let full = (1u64 << f.n) - 1;
    for a in 0..=full {
        for b in a..=full {
            let lhs = table[a as usize] + table[b as usize];
            let cross = table[(a & b) as usize] + table[(a | b) as usize];
            let diff = table[(a & !b) as usize] + table[(b & !a) as usize];
            if lhs > cross.max(diff) {
                return Ok(Some((NodeSet::from_mask(a), NodeSet::from_mask(b))));
            }
        }
    }
    Ok(None)
}

pub fn is_weakly_supermodular(f: &CutFunction, cap: usize) -> Result<bool> {
    Ok(weak_supermodularity_violation(f, cap)?.is_none())
}

/// f(S) = f(V-S) for every S.
pub fn is_symmetric(f: &CutFunction, cap: usize) -> Result<bool> {
    let table = f.table(cap)?;
    let full = (1usize << f.n) - 1;
    Ok((0..=full).all(|a| table[a] == table[full & !a]))
}

pub fn is_normalized(f: &CutFunction) -> bool {
    f.eval(&NodeSet::new()) == 0 && f.eval(&NodeSet::full(f.n)) == 0
}
