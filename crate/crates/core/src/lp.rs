//! Extreme-point solutions of the cut-relative LP relaxation.
//!
//! The relaxation has one covering constraint per node set, so it is solved by
//! cutting planes: a small working system is optimized to a vertex, a
//! separation oracle either certifies that vertex or hands back a violated cut,
//! and the cut joins the working system. A vertex of the working polytope that
//! satisfies every constraint of the full system is a vertex of the full
//! polytope, and the working optimum lower-bounds the full optimum, so the
//! loop ends at an optimal extreme point of the full LP.
//!
//! The vertex-finding core is a dense dual simplex over exact rationals. With
//! nonnegative costs the all-slack basis is dual feasible, and every added cut
//! keeps it so, which lets the loop warm-start after each new row.

use crate::cutreq::{CutFunction, SndpRequirements};
use crate::flow::min_cut;
use crate::graph::Multigraph;
use crate::rational::{half, int, Rational};
use crate::sets::{all_subsets, EdgeSet, NodeSet};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// A `≥` row over the LP variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// min c·x subject to the rows and 0 ≤ x ≤ 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub costs: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub objective: Rational,
}

const PIVOT_LIMIT: usize = 200_000;

/// Dense dual simplex tableau over structural variables `x_j` (columns
/// `0..n`), box slacks `u_j` with `x_j + u_j = 1` (columns `n..2n`), and one
/// surplus column per added row.
struct DualSimplex {
    n: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basic: Vec<usize>,
    /// Row index of each basic column.
    basis_row: Vec<Option<usize>>,
    reduced: Vec<Rational>,
    objective: Rational,
    /// Column of each added constraint's surplus variable.
    surplus_cols: Vec<usize>,
}

impl DualSimplex {
    fn new(costs: &[Rational]) -> Result<Self> {
        if costs.iter().any(|c| c.is_negative()) {
            return Err(Error::Unsupported("negative edge costs"));
        }
        let n = costs.len();
        let cols = 2 * n;
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = vec![Rational::zero(); cols];
            row[j] = Rational::one();
            row[n + j] = Rational::one();
            rows.push(row);
        }
        let mut reduced = costs.to_vec();
        reduced.resize(cols, Rational::zero());
        let mut basis_row = vec![None; cols];
        for j in 0..n {
            basis_row[n + j] = Some(j);
        }
        Ok(Self {
            n,
            rows,
            rhs: vec![Rational::one(); n],
            basic: (n..2 * n).collect(),
            basis_row,
            reduced,
            objective: Rational::zero(),
            surplus_cols: Vec::new(),
        })
    }

    fn cols(&self) -> usize {
        self.reduced.len()
    }

    /// Appends `a·x ≥ b` as the row `s - a·x = -b` with `s` basic, expressed in
    /// the current nonbasic columns.
    fn add_row(&mut self, c: &Constraint) {
        let col = self.cols();
        for row in &mut self.rows {
            row.push(Rational::zero());
        }
        self.reduced.push(Rational::zero());
        self.basis_row.push(None);

        let mut row = vec![Rational::zero(); col + 1];
        for (j, a) in &c.coeffs {
            row[*j] -= a;
        }
        row[col] = Rational::one();
        let mut rhs = -c.rhs.clone();
        for j in 0..self.n {
            if let Some(r) = self.basis_row[j] {
                if !row[j].is_zero() {
                    let factor = row[j].clone();
                    for (k, v) in self.rows[r].iter().enumerate() {
                        if !v.is_zero() {
                            row[k] -= &factor * v;
                        }
                    }
                    rhs -= &factor * &self.rhs[r];
                }
            }
        }
        debug_assert!(row[..self.n]
            .iter()
            .enumerate()
            .all(|(j, v)| v.is_zero() || self.basis_row[j].is_none()));
        let r = self.rows.len();
        self.rows.push(row);
        self.rhs.push(rhs);
        self.basic.push(col);
        self.basis_row[col] = Some(r);
        self.surplus_cols.push(col);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.cols())
            .filter(|&k| !self.rows[r][k].is_zero())
            .collect();
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let factor = self.rows[i][j].clone();
            for &k in &nz {
                let delta = &factor * &pivot_row[k];
                self.rows[i][k] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.reduced[j].is_zero() {
            let factor = self.reduced[j].clone();
            for &k in &nz {
                let delta = &factor * &pivot_row[k];
                self.reduced[k] -= delta;
            }
            self.objective += &factor * &pivot_rhs;
        }
        let leaving = self.basic[r];
        self.basis_row[leaving] = None;
        self.basic[r] = j;
        self.basis_row[j] = Some(r);
    }

    /// Runs dual simplex pivots until the basis is primal feasible.
    fn solve(&mut self) -> Result<()> {
        for _ in 0..PIVOT_LIMIT {
            // leaving: the infeasible row whose basic column is smallest
            let Some(r) = (0..self.rows.len())
                .filter(|&r| self.rhs[r].is_negative())
                .min_by_key(|&r| self.basic[r])
            else {
                return Ok(());
            };
            // entering: minimum ratio d_j / |a_rj| over a_rj < 0, ties to the smallest column
            let mut entering: Option<(usize, Rational)> = None;
            for j in 0..self.cols() {
                let a = &self.rows[r][j];
                if !a.is_negative() || self.basis_row[j].is_some() {
                    continue;
                }
                let ratio = &self.reduced[j] / (-a);
                if entering.as_ref().is_none_or(|(_, best)| ratio < *best) {
                    entering = Some((j, ratio));
                }
            }
            match entering {
                Some((j, _)) => self.pivot(r, j),
                None => {
                    let rows = self
                        .surplus_cols
                        .iter()
                        .enumerate()
                        .filter(|&(_, &col)| self.basic[r] == col || !self.rows[r][col].is_zero())
                        .map(|(i, _)| i)
                        .collect();
                    return Err(Error::Infeasible { rows });
                }
            }
        }
        Err(Error::IterationLimit(PIVOT_LIMIT))
    }

    fn solution(&self) -> LpSolution {
        let x = (0..self.n)
            .map(|j| match self.basis_row[j] {
                Some(r) => self.rhs[r].clone(),
                None => Rational::zero(),
            })
            .collect();
        LpSolution {
            x,
            objective: self.objective.clone(),
        }
    }
}

/// Optimal basic solution of `lp`: a vertex of `{rows} ∩ [0,1]^n`.
pub fn solve_vertex_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let mut core = DualSimplex::new(&lp.costs)?;
    for c in &lp.constraints {
        core.add_row(c);
    }
    core.solve()?;
    Ok(core.solution())
}

/// Rank of a set of rational row vectors.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let factor = &row[c] / &pivot_row[c];
                for (v, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *v -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `x` is feasible for `lp` and the unique solution of its tight rows
/// and tight bounds.
pub fn is_vertex(lp: &LinearProgram, x: &[Rational]) -> bool {
    let n = lp.costs.len();
    if x.len() != n || x.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return false;
    }
    let mut tight = Vec::new();
    for c in &lp.constraints {
        let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
        if lhs < c.rhs {
            return false;
        }
        if lhs == c.rhs {
            let mut row = vec![Rational::zero(); n];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            tight.push(row);
        }
    }
    for (j, v) in x.iter().enumerate() {
        if v.is_zero() || v.is_one() {
            let mut row = vec![Rational::zero(); n];
            row[j] = Rational::one();
            tight.push(row);
        }
    }
    rank(&tight) == n
}

/// A cut constraint x(δ_G(S)) ≥ rhs that the point violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatedCut {
    pub side: NodeSet,
    /// min{f(S), |δ_G(S)|}.
    pub rhs: i64,
    /// x(δ_G(S)).
    pub lhs: Rational,
}

/// Per-edge solution to the relaxation, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub x: Vec<Rational>,
    /// Cost of the free (unfixed) edges.
    pub objective: Rational,
}

/// Access to the constraint family x(δ_G(S)) ≥ min{f(S), |δ_G(S)|}.
pub trait Separator {
    /// f(S).
    fn requirement(&self, s: &NodeSet) -> i64;

    /// A violated cut for `x` (indexed by edge id), or `None` if `x` is feasible.
    fn separate(&self, g: &Multigraph, x: &[Rational]) -> Result<Option<ViolatedCut>>;

    /// Cuts to seed the working system with.
    fn seeds(&self, g: &Multigraph) -> Vec<NodeSet>;
}

/// The min-cut separation oracle for f^SNDP.
#[derive(Debug, Clone, Copy)]
pub struct SndpSeparator<'a> {
    pub reqs: &'a SndpRequirements,
}

impl Separator for SndpSeparator<'_> {
    fn requirement(&self, s: &NodeSet) -> i64 {
        self.reqs.eval(s)
    }

    fn separate(&self, g: &Multigraph, x: &[Rational]) -> Result<Option<ViolatedCut>> {
        for a in g.edges() {
            if x[a.id] >= Rational::one() {
                continue;
            }
            for d in self.reqs.demands() {
                for (src, snk) in [([d.s, a.u], [d.t, a.v]), ([d.s, a.v], [d.t, a.u])] {
                    let cut = match min_cut(g, x, &NodeSet::from(src), &NodeSet::from(snk)) {
                        Ok(c) => c,
                        Err(Error::OverlappingTerminals) => continue,
                        Err(e) => return Err(e),
                    };
                    if cut.value < int(i64::from(d.r)) {
                        let rhs = self.reqs.eval(&cut.side).min(g.cut_size(&cut.side) as i64);
                        debug_assert!(cut.value < int(rhs));
                        return Ok(Some(ViolatedCut {
                            side: cut.side,
                            rhs,
                            lhs: cut.value,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    fn seeds(&self, _g: &Multigraph) -> Vec<NodeSet> {
        let mut seen = Vec::new();
        for d in self.reqs.demands() {
            for x in [d.s, d.t] {
                let s = NodeSet::singleton(x);
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
        }
        seen
    }
}

/// Separation by scanning every node set; for families without a flow oracle.
#[derive(Debug, Clone)]
pub struct EnumerationSeparator {
    pub f: CutFunction,
    pub cap: usize,
}

impl Separator for EnumerationSeparator {
    fn requirement(&self, s: &NodeSet) -> i64 {
        self.f.eval(s)
    }

    fn separate(&self, g: &Multigraph, x: &[Rational]) -> Result<Option<ViolatedCut>> {
        let n = g.node_count();
        if n > self.cap {
            return Err(Error::SizeLimitExceeded {
                what: "cut enumeration",
                size: n,
                cap: self.cap,
            });
        }
        // sets avoiding the last node cover every cut once
        for side in all_subsets(n.saturating_sub(1)).skip(1) {
            let rhs = self.f.eval(&side).min(g.cut_size(&side) as i64);
            if rhs <= 0 {
                continue;
            }
            let lhs = g.cut_weight(&side, x);
            if lhs < int(rhs) {
                return Ok(Some(ViolatedCut { side, rhs, lhs }));
            }
        }
        Ok(None)
    }

    fn seeds(&self, g: &Multigraph) -> Vec<NodeSet> {
        (0..g.node_count()).map(NodeSet::singleton).collect()
    }
}

/// Oracle for the cut-relative LP with f = f^SNDP. `x` is indexed by edge id;
/// entries of `fixed` are read as 1.
pub fn separation_oracle_crsndp(
    reqs: &SndpRequirements,
    g: &Multigraph,
    fixed: &EdgeSet,
    x: &[Rational],
) -> Result<Option<ViolatedCut>> {
    let mut point = x.to_vec();
    for id in fixed.iter() {
        point[id] = Rational::one();
    }
    SndpSeparator { reqs }.separate(g, &point)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrlpOptions {
    /// Maximum number of cuts the loop may add; `None` means 10·m·n.
    pub max_cuts: Option<usize>,
}

/// Outcome of the cutting-plane loop.
#[derive(Debug, Clone)]
pub struct CrlpSolve {
    pub solution: FractionalSolution,
    /// Working constraints as (S, min{f(S), |δ_G(S)|}), in insertion order.
    pub cuts: Vec<(NodeSet, i64)>,
    /// Working LP restricted to the free edges, in the variable order of `free`.
    pub working: LinearProgram,
    pub free: Vec<usize>,
}

impl CrlpSolve {
    /// One `cut <node list> >= <rhs>` line per working constraint.
    pub fn dump(&self, name: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (side, rhs) in &self.cuts {
            let names: Vec<String> = side.iter().map(&name).collect();
            let _ = writeln!(out, "cut {} >= {}", names.join(" "), rhs);
        }
        out
    }
}

fn cut_row(
    g: &Multigraph,
    free_index: &[Option<usize>],
    fixed: &EdgeSet,
    side: &NodeSet,
    rhs: i64,
) -> Constraint {
    let mut coeffs = Vec::new();
    let mut fixed_count = 0i64;
    for e in g.edges() {
        if e.crosses(side) {
            match free_index[e.id] {
                Some(j) => coeffs.push((j, Rational::one())),
                None => {
                    debug_assert!(fixed.contains(e.id));
                    fixed_count += 1;
                }
            }
        }
    }
    Constraint {
        coeffs,
        rhs: int(rhs - fixed_count),
    }
}

/// Extreme-point optimum of the LP with the edges of `fixed` set to 1.
pub fn solve_crlp_with(
    sep: &dyn Separator,
    g: &Multigraph,
    costs: &[Rational],
    fixed: &EdgeSet,
    opts: CrlpOptions,
) -> Result<CrlpSolve> {
    let free: Vec<usize> = g
        .edges()
        .iter()
        .map(|e| e.id)
        .filter(|id| !fixed.contains(*id))
        .collect();
    let mut free_index = vec![None; g.id_bound()];
    for (j, &id) in free.iter().enumerate() {
        free_index[id] = Some(j);
    }
    let var_costs: Vec<Rational> = free.iter().map(|&id| costs[id].clone()).collect();
    let mut core = DualSimplex::new(&var_costs)?;
    let mut working = LinearProgram {
        costs: var_costs,
        constraints: Vec::new(),
    };
    let mut cuts: Vec<(NodeSet, i64)> = Vec::new();

    let add = |side: NodeSet,
               rhs: i64,
               core: &mut DualSimplex,
               working: &mut LinearProgram,
               cuts: &mut Vec<(NodeSet, i64)>| {
        let row = cut_row(g, &free_index, fixed, &side, rhs);
        core.add_row(&row);
        working.constraints.push(row);
        cuts.push((side, rhs));
    };

    for side in sep.seeds(g) {
        let rhs = sep.requirement(&side).min(g.cut_size(&side) as i64);
        let row = cut_row(g, &free_index, fixed, &side, rhs);
        if row.rhs.is_positive() && !row.coeffs.is_empty() {
            add(side, rhs, &mut core, &mut working, &mut cuts);
        }
    }

    let max_cuts = opts.max_cuts.unwrap_or_else(|| {
        let k = g.node_count().max(1);
        10 * g.edge_count().max(1) * k
    });
    let mut added = 0;
    let mut last_objective: Option<Rational> = None;
    loop {
        core.solve()?;
        let sol = core.solution();
        if let Some(prev) = &last_objective {
            assert!(
                sol.objective >= *prev,
                "working LP optimum decreased after adding a cut"
            );
        }
        last_objective = Some(sol.objective.clone());

        let mut x = vec![Rational::zero(); g.id_bound()];
        for id in fixed.iter() {
            x[id] = Rational::one();
        }
        for (j, &id) in free.iter().enumerate() {
            x[id] = sol.x[j].clone();
        }
        match sep.separate(g, &x)? {
            None => {
                assert!(
                    is_vertex(&working, &sol.x),
                    "cutting-plane result is not a vertex of its working system"
                );
                return Ok(CrlpSolve {
                    solution: FractionalSolution {
                        x,
                        objective: sol.objective,
                    },
                    cuts,
                    working,
                    free,
                });
            }
            Some(cut) => {
                assert!(
                    !cuts.iter().any(|(s, _)| *s == cut.side),
                    "oracle returned a cut already in the working system"
                );
                added += 1;
                if added > max_cuts {
                    return Err(Error::IterationLimit(max_cuts));
                }
                add(cut.side, cut.rhs, &mut core, &mut working, &mut cuts);
            }
        }
    }
}

/// [`solve_crlp_with`] using the SNDP min-cut oracle.
pub fn solve_crlp(
    reqs: &SndpRequirements,
    g: &Multigraph,
    costs: &[Rational],
    fixed: &EdgeSet,
) -> Result<FractionalSolution> {
    let opts = CrlpOptions {
        max_cuts: Some(10 * g.edge_count().max(1) * reqs.len().max(1)),
    };
    Ok(solve_crlp_with(&SndpSeparator { reqs }, g, costs, fixed, opts)?.solution)
}

/// Free edges with x_e ≥ 1/2.
pub fn half_integral_edges(x: &FractionalSolution, g: &Multigraph, fixed: &EdgeSet) -> EdgeSet {
    let h = half();
    g.edges()
        .iter()
        .filter(|e| !fixed.contains(e.id) && x.x[e.id] >= h)
        .map(|e| e.id)
        .collect()
}
