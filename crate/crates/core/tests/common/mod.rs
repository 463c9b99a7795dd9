//! Brute-force oracles shared by the integration suites. Everything here works
//! on bit masks over plain edge lists and never calls the library's
//! separation, flow, or LP code.
#![allow(dead_code)]

use crsndp::cli::{random_instance, RandomParams};
use crsndp::cutreq::Demand;
use crsndp::rational::Rational;
use crsndp::solver::Instance;
use crsndp::{EdgeSet, Multigraph, NodeSet};
use num_traits::{One, Zero};

/// Edge endpoints in `g.edges()` order; bit i of an edge mask is the i-th entry.
pub fn ends(g: &Multigraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}

pub fn edge_mask(g: &Multigraph, h: &EdgeSet) -> u64 {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| h.contains(e.id))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

pub fn mask_to_set(g: &Multigraph, mask: u64) -> EdgeSet {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.id)
        .collect()
}

pub fn node_mask(s: &NodeSet) -> u64 {
    s.iter().fold(0, |acc, x| acc | 1 << x)
}

pub fn crosses(side: u64, (u, v): (usize, usize)) -> bool {
    (side >> u & 1) != (side >> v & 1)
}

/// Number of edges of `alive` crossing `side`.
pub fn cut_count(ends: &[(usize, usize)], alive: u64, side: u64) -> i64 {
    ends.iter()
        .enumerate()
        .filter(|&(i, &e)| alive >> i & 1 == 1 && crosses(side, e))
        .count() as i64
}

/// max r_i over pairs separated by `side`.
pub fn sndp_value(demands: &[Demand], side: u64) -> i64 {
    demands
        .iter()
        .filter(|d| (side >> d.s & 1) != (side >> d.t & 1))
        .map(|d| i64::from(d.r))
        .max()
        .unwrap_or(0)
}

/// Node sets of the components of the graph on `alive` edges, as masks.
pub fn components(n: usize, ends: &[(usize, usize)], alive: u64) -> Vec<u64> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for start in 0..n {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << start;
        loop {
            let before = comp;
            for (i, &(u, v)) in ends.iter().enumerate() {
                if alive >> i & 1 == 1 && (comp >> u & 1 == 1 || comp >> v & 1 == 1) {
                    comp |= (1 << u) | (1 << v);
                }
            }
            if comp == before {
                break;
            }
        }
        seen |= comp;
        out.push(comp);
    }
    out
}

pub fn connected(n: usize, ends: &[(usize, usize)], alive: u64, a: usize, b: usize) -> bool {
    components(n, ends, alive)
        .iter()
        .any(|&c| c >> a & 1 == 1 && c >> b & 1 == 1)
}

/// A cut S with |δ_H(S)| < min{f(S), |δ_G(S)|}, if any.
pub fn cut_relative_violation(
    n: usize,
    ends: &[(usize, usize)],
    f: &dyn Fn(u64) -> i64,
    h: u64,
) -> Option<u64> {
    let all = (1u64 << ends.len()) - 1;
    (1..(1u64 << n) - 1).find(|&side| {
        let need = f(side).min(cut_count(ends, all, side));
        cut_count(ends, h, side) < need
    })
}

/// For every demand and every fault set smaller than r_i: G - F connects the
/// pair implies H - F does.
pub fn path_relative_ok(n: usize, ends: &[(usize, usize)], demands: &[Demand], h: u64) -> bool {
    let m = ends.len();
    let all = (1u64 << m) - 1;
    for faults in 0..1u64 << m {
        let size = faults.count_ones();
        for d in demands {
            if size < d.r
                && connected(n, ends, all & !faults, d.s, d.t)
                && !connected(n, ends, h & !faults, d.s, d.t)
            {
                return false;
            }
        }
    }
    true
}

/// Minimum cost over all edge subsets accepted by `feasible`; ties to the
/// lexicographically smallest id set.
pub fn brute_opt(
    g: &Multigraph,
    costs: &[Rational],
    feasible: &dyn Fn(u64) -> bool,
) -> (Rational, EdgeSet) {
    let m = g.edge_count();
    let mut best: Option<(Rational, EdgeSet)> = None;
    for h in 0..1u64 << m {
        if !feasible(h) {
            continue;
        }
        let set = mask_to_set(g, h);
        let cost: Rational = set.iter().map(|e| costs[e].clone()).sum();
        let better = match &best {
            None => true,
            Some((c, s)) => cost < *c || (cost == *c && set < *s),
        };
        if better {
            best = Some((cost, set));
        }
    }
    best.expect("the full edge set is feasible")
}

/// Unique solution of a square system by Gauss-Jordan elimination.
pub fn solve_unique(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        rhs.swap(c, p);
        let pivot = rows[c][c].clone();
        for v in rows[c].iter_mut() {
            *v /= &pivot;
        }
        rhs[c] /= &pivot;
        let pivot_row = rows[c].clone();
        let pivot_rhs = rhs[c].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
                rhs[r] -= &factor * &pivot_rhs;
            }
        }
    }
    Some(rhs)
}

/// Optimum of min c·x over {x ∈ [0,1]^m : a_j·x ≥ b_j} by enumerating every
/// choice of m tight rows (including bound rows) and keeping the best feasible
/// basic solution.
pub fn vertex_enumeration_lp(costs: &[Rational], rows: &[(Vec<Rational>, Rational)]) -> Rational {
    let m = costs.len();
    let mut all: Vec<(Vec<Rational>, Rational)> = rows.to_vec();
    for j in 0..m {
        let mut unit = vec![Rational::zero(); m];
        unit[j] = Rational::one();
        all.push((unit.clone(), Rational::zero()));
        let neg: Vec<Rational> = unit.iter().map(|v| -v).collect();
        all.push((neg, -Rational::one()));
    }
    let feasible = |x: &[Rational]| {
        all.iter().all(|(a, b)| {
            let lhs: Rational = a.iter().zip(x).map(|(p, q)| p * q).sum();
            lhs >= *b
        })
    };
    let mut best: Option<Rational> = None;
    let mut pick = Vec::with_capacity(m);
    fn rec(
        start: usize,
        m: usize,
        all: &[(Vec<Rational>, Rational)],
        pick: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if pick.len() == m {
            visit(pick);
            return;
        }
        for i in start..all.len() {
            pick.push(i);
            rec(i + 1, m, all, pick, visit);
            pick.pop();
        }
    }
    rec(0, m, &all, &mut pick, &mut |chosen| {
        let a = chosen.iter().map(|&i| all[i].0.clone()).collect();
        let b = chosen.iter().map(|&i| all[i].1.clone()).collect();
        if let Some(x) = solve_unique(a, b) {
            if feasible(&x) {
                let value: Rational = costs.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
        }
    });
    best.expect("bounded nonempty polytope has a vertex")
}

/// The fixed random SNDP corpus: n ≤ 6, m ≤ 10, k ≤ 3, r ≤ 3, costs ≤ 9.
pub fn corpus(count: usize) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 5;
            let m = 1 + (i * 7 + i / 5) % 10;
            random_instance(&RandomParams {
                n,
                m,
                reqs: 1 + (i / 2) % 3,
                rmax: 1 + (i as u32 / 6) % 3,
                cmax: 9,
                seed: 1000 + i as u64,
            })
            .expect("valid parameters")
        })
        .collect()
}

/// The five-node graph: s=0 u=1 v=2 w=3 t=4, edges su sv uw vw sw wt.
pub fn nolam_graph() -> Multigraph {
    Multigraph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (3, 4)]).unwrap()
}

/// Row rank over the rationals.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let factor = &row[c] / &pivot_row[c];
                for (v, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *v -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Random SNDP instances with n ≤ max_n, m ≤ max_m, up to three demands of
/// requirement ≤ 3.
pub fn arb_sndp(max_n: usize, max_m: usize) -> impl proptest::strategy::Strategy<Value = Instance> {
    use proptest::prelude::*;
    (2..=max_n, 1..=max_m, 1usize..=3, 1u32..=3, any::<u64>()).prop_map(
        |(n, m, reqs, rmax, seed)| {
            random_instance(&RandomParams {
                n,
                m,
                reqs,
                rmax,
                cmax: 9,
                seed,
            })
            .expect("valid parameters")
        },
    )
}

/// x(δ(side)) over the edges in `ends` order.
pub fn cut_load(ends: &[(usize, usize)], x: &[Rational], side: u64) -> Rational {
    ends.iter()
        .zip(x)
        .filter(|(&e, _)| crosses(side, e))
        .map(|(_, v)| v.clone())
        .sum()
}
