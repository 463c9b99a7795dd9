mod common;

use common::*;
use crsndp::cli::nolam_instance;
use crsndp::cutreq::{residual, unit_deficiency};
use crsndp::decomp::small_cut_boundary_partition;
use crsndp::lp::solve_crlp;
use crsndp::rational::{half, int, Rational};
use crsndp::solver::{
    check_cut_relative, check_path_relative, crndp_alg, exact_opt, kecss_reduction, Instance,
    Model, Requirement, Witness,
};
use crsndp::{EdgeSet, Multigraph, NodeSet};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn fv(inst: &Instance) -> impl Fn(u64) -> i64 + '_ {
    let reqs = inst.sndp().unwrap();
    move |side| sndp_value(reqs.demands(), side)
}

/// Every cut constraint with positive right-hand side, one side per
/// complementary pair.
fn cut_rows(inst: &Instance) -> Vec<(Vec<Rational>, Rational)> {
    let g = &inst.graph;
    let n = g.node_count();
    let e = ends(g);
    let all = (1u64 << e.len()) - 1;
    let f = fv(inst);
    (1..1u64 << (n - 1))
        .filter_map(|s| {
            let rhs = f(s).min(cut_count(&e, all, s));
            (rhs > 0).then(|| {
                let row = e
                    .iter()
                    .map(|&p| if crosses(s, p) { int(1) } else { int(0) })
                    .collect();
                (row, int(rhs))
            })
        })
        .collect()
}

fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 1..n), 1..=max_m).prop_map(move |pairs| {
            let pairs: Vec<(usize, usize)> =
                pairs.into_iter().map(|(u, d)| (u, (u + d) % n)).collect();
            Multigraph::from_edges(n, &pairs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn checkers_agree_with_enumeration(inst in arb_sndp(5, 8), hmask in any::<u64>()) {
        let g = &inst.graph;
        let n = g.node_count();
        let e = ends(g);
        let all = (1u64 << e.len()) - 1;
        let h = hmask & all;
        let set = mask_to_set(g, h);
        let demands = inst.path_demands().unwrap();

        let cut = check_cut_relative(&inst, &set).unwrap();
        let path = check_path_relative(&inst, &set).unwrap();
        prop_assert_eq!(cut.feasible, cut_relative_violation(n, &e, &fv(&inst), h).is_none());
        prop_assert_eq!(path.feasible, path_relative_ok(n, &e, &demands, h));
        prop_assert!(!cut.feasible || path.feasible, "cut-relative but not path-relative");

        match cut.witness {
            Some(Witness::Cut { side, have, need }) => {
                let s = node_mask(&side);
                prop_assert_eq!(have as i64, cut_count(&e, h, s));
                prop_assert_eq!(need, fv(&inst)(s).min(cut_count(&e, all, s)));
                prop_assert!((have as i64) < need);
            }
            Some(other) => prop_assert!(false, "unexpected witness {:?}", other),
            None => prop_assert!(cut.feasible),
        }
        match path.witness {
            Some(Witness::Path { demand, faults, s, t }) => {
                let d = demands[demand];
                let fm = edge_mask(g, &faults);
                prop_assert!((s, t) == (d.s, d.t) && fm.count_ones() < d.r);
                prop_assert!(connected(n, &e, all & !fm, s, t) && !connected(n, &e, h & !fm, s, t));
            }
            Some(other) => prop_assert!(false, "unexpected witness {:?}", other),
            None => prop_assert!(path.feasible),
        }
    }

    #[test]
    fn exact_optima_match_brute_force(inst in arb_sndp(5, 8)) {
        let g = &inst.graph;
        let n = g.node_count();
        let e = ends(g);
        let demands = inst.path_demands().unwrap();
        let f = fv(&inst);
        let cut = brute_opt(g, &inst.costs, &|h| cut_relative_violation(n, &e, &f, h).is_none());
        let path = brute_opt(g, &inst.costs, &|h| path_relative_ok(n, &e, &demands, h));
        prop_assert_eq!(exact_opt(&inst, Model::CutRelative).unwrap(), cut.clone());
        prop_assert_eq!(exact_opt(&inst, Model::PathRelative).unwrap(), path.clone());
        prop_assert!(path.0 <= cut.0);
    }

    #[test]
    fn rounding_keeps_small_cuts_fixed(inst in arb_sndp(6, 10)) {
        let g = &inst.graph;
        let n = g.node_count();
        let f = inst.cut_function();
        let sol = crndp_alg(&inst).unwrap();
        let e = ends(g);
        prop_assert!(cut_relative_violation(n, &e, &fv(&inst), edge_mask(g, &sol.edges)).is_none());
        prop_assert!(sol.cost <= int(2) * &sol.lp_bound);

        let small = |fixed: &EdgeSet| -> Vec<u64> {
            let fp = residual(&f, g, fixed).unwrap();
            let rest = g.spanning_subgraph(&g.edge_ids().difference(fixed));
            (1..(1u64 << n) - 1).filter(|&s| unit_deficiency(&fp, &rest, &NodeSet::from_mask(s)) > 0).collect()
        };
        let initial = small(&EdgeSet::new());
        let mut fixed = EdgeSet::new();
        for (i, round) in sol.trace.iter().enumerate() {
            prop_assert_eq!(&small(&fixed), &initial, "round {}", i);
            fixed = fixed.union(&round.z1);
        }
        prop_assert_eq!(&small(&fixed), &initial);

        // the first round already takes every edge on a small cut
        if let Some(first) = sol.trace.first() {
            let (z, _) = small_cut_boundary_partition(&inst.sndp().unwrap(), g).unwrap();
            prop_assert!(z.is_subset(&first.z1));
        }
    }

    #[test]
    fn lp_matches_vertex_enumeration(inst in arb_sndp(4, 5)) {
        let g = &inst.graph;
        let m = g.edge_count();
        let reqs = inst.sndp().unwrap();
        let x = solve_crlp(&reqs, g, &inst.costs, &EdgeSet::new()).unwrap();
        let rows = cut_rows(&inst);
        let best = vertex_enumeration_lp(&inst.costs, &rows);
        prop_assert_eq!(&x.objective, &best);

        // x is feasible and the unique solution of the constraints tight at it
        let mut tight = Vec::new();
        for (row, rhs) in &rows {
            let lhs: Rational = row.iter().zip(&x.x).map(|(a, v)| a * v).sum();
            prop_assert!(lhs >= *rhs);
            if lhs == *rhs {
                tight.push(row.clone());
            }
        }
        for (j, v) in x.x.iter().enumerate() {
            if v.is_zero() || v.is_one() {
                tight.push((0..m).map(|i| if i == j { int(1) } else { int(0) }).collect());
            }
        }
        prop_assert_eq!(rank(tight), m);
        if x.x.iter().any(|v| !v.is_zero()) {
            prop_assert!(x.x.iter().any(|v| *v >= half()));
        }
    }

    #[test]
    fn kecss_checkers_agree(g in arb_graph(5, 7), k in 1u32..4, hmask in any::<u64>()) {
        let m = g.edge_count();
        let inst = Instance::new(g.clone(), vec![int(1); m], Requirement::Kecss(k)).unwrap();
        let h = mask_to_set(&g, hmask & ((1u64 << m) - 1));
        prop_assert_eq!(
            check_cut_relative(&inst, &h).unwrap().feasible,
            check_path_relative(&inst, &h).unwrap().feasible
        );
    }
}

#[test]
fn unit_cost_nolaminar_lp_is_four() {
    let mut inst = nolam_instance();
    inst.costs = vec![int(1); 6];
    let rows = cut_rows(&inst);
    assert_eq!(vertex_enumeration_lp(&inst.costs, &rows), int(4));
    let x = solve_crlp(
        &inst.sndp().unwrap(),
        &inst.graph,
        &inst.costs,
        &EdgeSet::new(),
    )
    .unwrap();
    assert_eq!(x.objective, int(4));
}

#[test]
fn triangle_reduction_under_path_model() {
    let tri = Multigraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let inst = kecss_reduction(&tri, &[int(1), int(1), int(1)], 2).unwrap();
    let g = &inst.graph;
    let e = ends(g);
    let terminals: u64 = (0..e.len())
        .filter(|&i| e[i].0 >= 3 || e[i].1 >= 3)
        .fold(0, |a, i| a | 1 << i);
    let demands = inst.path_demands().unwrap();
    for h in 0..1u64 << e.len() {
        let core = h & !terminals;
        let two_ec = (0..3).all(|drop| components(3, &e[..3], core & !(1 << drop)).len() == 1);
        let expected = h & terminals == terminals && two_ec;
        assert_eq!(path_relative_ok(5, &e, &demands, h), expected, "H' = {h:b}");
        assert_eq!(
            check_path_relative(&inst, &mask_to_set(g, h))
                .unwrap()
                .feasible,
            expected
        );
    }
}
