use std::io::BufReader;

use covsketch::distsim::{run_kcover_mapreduce, run_setcover_mapreduce, DistSolver};
use covsketch::instance::{
    feature_pairs_instance, generate_adversarial, generate_planted, khop_dominating_instance, load_edge_list,
    write_edge_list,
};
use covsketch::sketch::{build_sketch, theory_params};
use covsketch::solvers::{
    coverage, greedy_kcover, lazy_greedy, parse_solution, required_coverage, set_cover_outliers, Engine,
};
use covsketch::{HashSource, PracticalParams, SketchParams};

#[test]
fn instance_survives_edge_list_round_trip() {
    let inst = generate_planted(4, 200, 30, 0.2, 9).unwrap().instance;
    let mut buf = Vec::new();
    write_edge_list(&inst, &mut buf, &["note=test".to_string()]).unwrap();
    let back = load_edge_list(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back, inst);
}

#[test]
fn saved_sketch_solves_like_the_in_memory_one() {
    let inst = generate_planted(8, 2000, 100, 0.2, 2).unwrap().instance;
    let params = SketchParams::Practical(PracticalParams::new(0.3, 10).unwrap());
    let sketch = build_sketch(&inst, &params, &HashSource::new(5));
    let mut buf = Vec::new();
    sketch.write_to(&mut buf, &[]).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.contains("sketch mode=practical rho=0.3 sigma=10 seed=5"), "{text}");

    let reloaded = load_edge_list(BufReader::new(&buf[..])).unwrap();
    assert_eq!(greedy_kcover(&reloaded, 8).chosen, greedy_kcover(&sketch, 8).chosen);
}

#[test]
fn solution_text_round_trips() {
    let inst = generate_planted(5, 500, 40, 0.2, 1).unwrap().instance;
    let sol = lazy_greedy(&inst, 5);
    let parsed = parse_solution(BufReader::new(sol.to_text().as_bytes())).unwrap();
    assert_eq!(parsed.chosen, sol.chosen);
    assert_eq!(parsed.value, sol.value);
}

#[test]
fn simulated_set_cover_matches_sketch_engine() {
    let inst = generate_planted(6, 6000, 120, 0.2, 3).unwrap().instance;
    let (lambda, eps, dd, seed) = (0.05, 0.5, 0.05, 17);
    let dist = run_setcover_mapreduce(&inst, lambda, eps, dd, seed, 5).unwrap();
    assert!(!dist.report.divergence);
    assert_eq!(dist.report.rounds_executed, 4);
    let single = set_cover_outliers(&inst, lambda, eps, dd, seed, Engine::Sketch).unwrap();
    assert_eq!(dist.outcome.guess, single.guess);
    assert_eq!(dist.outcome.solution.chosen, single.solution.chosen);
    assert!(coverage(&inst, &single.solution.chosen).unwrap() as usize >= required_coverage(inst.m(), 0.1));
}

#[test]
fn machine_count_does_not_change_the_answer() {
    let inst = generate_adversarial(400, 8, 25.0, 6).unwrap().instance;
    let runs: Vec<_> = [2, 5, 16]
        .iter()
        .map(|&machines| run_kcover_mapreduce(&inst, 8, 0.9, 0.02, 4, machines, DistSolver::Greedy).unwrap())
        .collect();
    assert!(runs[0].report.threshold < 1.0);
    for r in &runs[1..] {
        assert_eq!(r.sketch, runs[0].sketch);
        assert_eq!(r.solution, runs[0].solution);
    }
}

#[test]
fn theory_sketch_finds_bonus_sets() {
    let adv = generate_adversarial(200, 20, 4.0, 3).unwrap();
    let inst = &adv.instance;
    let p = theory_params(inst.n(), inst.m(), inst.edge_count(), 20, 0.5, 0.5)
        .unwrap()
        .with_target_edges(400);
    let sketch = build_sketch(inst, &SketchParams::Theory(p), &HashSource::new(3));
    let sol = greedy_kcover(&sketch, 20);
    let value = coverage(inst, &sol.chosen).unwrap() as f64;
    assert!(value >= 0.9 * inst.m() as f64, "{value}");
}

#[test]
fn reductions_feed_the_solvers() {
    // path 0-1-2-3-4-5-6: two 1-hop neighborhoods cannot dominate 7 vertices
    let adjacency: Vec<Vec<u32>> = (0..7u32).map(|v| if v < 6 { vec![v + 1] } else { vec![] }).collect();
    let dom = khop_dominating_instance(&adjacency, 1).unwrap();
    assert_eq!(greedy_kcover(&dom, 2).value, 6);
    let dom2 = khop_dominating_instance(&adjacency, 2).unwrap();
    assert_eq!(covsketch::solvers::brute_force_kcover(&dom2, 2).unwrap().value, 7);

    let matrix = vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1], vec![0, 1, 1]];
    let pairs = feature_pairs_instance(&matrix).unwrap().instance;
    assert_eq!(pairs.n(), 3);
    let all: Vec<u32> = (0..3).collect();
    assert_eq!(coverage(&pairs, &all).unwrap() as usize, pairs.m());
}
