mod common;

use common::*;
use crsndp::cli::{parse_instance, parse_solution, print_instance, run};
use proptest::prelude::*;
use std::path::PathBuf;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["crsndp"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crsndp-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(inst in arb_sndp(6, 10)) {
        let text = print_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(ends(&back.graph), ends(&inst.graph));
        prop_assert_eq!(&back.costs, &inst.costs);
        prop_assert_eq!(&back.names, &inst.names);
        let (a, b) = (back.sndp().unwrap(), inst.sndp().unwrap());
        prop_assert_eq!(a.demands(), b.demands());
        prop_assert_eq!(print_instance(&back).unwrap(), text);
    }

    #[test]
    fn gen_random_is_reproducible(n in 2usize..7, m in 1usize..11, reqs in 1usize..4, seed in any::<u32>()) {
        let args = ["gen", "random", "--n", &n.to_string(), "--m", &m.to_string(), "--reqs", &reqs.to_string(), "--rmax", "3", "--seed", &seed.to_string()];
        let first = cli(&args);
        let second = cli(&args);
        prop_assert_eq!(first.0, 0);
        prop_assert_eq!(&first, &second);
        parse_instance(&first.1).unwrap();
    }
}

#[test]
fn solve_output_verifies() {
    for (i, inst) in corpus(60).iter().enumerate() {
        let file = temp_file(&format!("inst{i}.txt"), &print_instance(inst).unwrap());
        let (code, out, err) = cli(&["solve", file.to_str().unwrap()]);
        assert_eq!(code, 0, "instance {i}: {err}");
        let sol = temp_file(&format!("sol{i}.txt"), &out);
        let h = parse_solution(inst, &out).unwrap();
        let e = ends(&inst.graph);
        let f = |side| sndp_value(inst.sndp().unwrap().demands(), side);
        assert!(cut_relative_violation(
            inst.graph.node_count(),
            &e,
            &f,
            edge_mask(&inst.graph, &h)
        )
        .is_none());
        for model in ["cut", "path"] {
            let (code, out, _) = cli(&[
                "verify",
                file.to_str().unwrap(),
                "--solution",
                sol.to_str().unwrap(),
                "--model",
                model,
            ]);
            assert_eq!((code, out.trim()), (0, "feasible"), "instance {i}, {model}");
        }
    }
}
