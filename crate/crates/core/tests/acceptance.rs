//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines are
//! always printed; exits nonzero if any criterion fails.

use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use covsketch::distsim::{run_kcover_mapreduce, DistSolver};
use covsketch::experiment::{run_experiment, ExperimentSpec, InstanceSource, SketchSolver};
use covsketch::instance::{
    feature_pairs_instance, generate_adversarial, generate_planted, khop_dominating_instance, CoverageInstance,
};
use covsketch::sketch::{
    build_sketch, probabilistic_copies, sketch_fractional, sketch_probabilistic, sketch_weighted, theory_params,
};
use covsketch::solvers::{
    brute_force_kcover, coverage, coverage_fractional_units, coverage_probabilistic, coverage_weighted, greedy_kcover,
    lazy_greedy, required_coverage, set_cover_outliers, stochastic_greedy, Engine,
};
use covsketch::{
    FractionalInstance, HashSource, PracticalParams, ProbabilisticInstance, SketchParams, WeightedInstance,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn full_practical() -> SketchParams {
    SketchParams::Practical(PracticalParams::new(1.0, usize::MAX).unwrap())
}

fn random_lists(rng: &mut ChaCha8Rng, n: usize, m: usize, max_degree: usize) -> Vec<Vec<u32>> {
    (0..m)
        .map(|_| {
            let d = rng.random_range(1..=max_degree.min(n));
            index::sample(rng, n, d).into_iter().map(|s| s as u32).collect()
        })
        .collect()
}

/// Greedy reaches `(1 - 1/e) OPT` on small random instances.
fn ac1() -> Outcome {
    let bound = 1.0 - (-1f64).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases = 600;
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..cases {
        let n = rng.random_range(1..=12);
        let m = rng.random_range(1..=30);
        let k = rng.random_range(1..=4usize.min(n));
        let inst = CoverageInstance::from_element_lists(n, random_lists(&mut rng, n, m, n)).unwrap();
        let opt = brute_force_kcover(&inst, k).unwrap().value as f64;
        let g = greedy_kcover(&inst, k).value as f64;
        worst = worst.min(g / opt);
        if g < bound * opt - 1e-9 {
            failures += 1;
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("{cases} instances, {failures} failures, worst ratio {worst:.4} (bound {bound:.4})"),
    }
}

/// Practical sketch at about 8% of the edges keeps 95% of baseline quality
/// on a planted instance with k = 100, m = 10000 and 10000 decoys.
fn ac2() -> Outcome {
    let (rho, sigma) = (0.082, 1_000_000);
    let mut ratios = Vec::new();
    let mut qualities = Vec::new();
    for seed in 1..=3u64 {
        let inst = generate_planted(100, 10_000, 10_000, 0.2, seed).unwrap().instance;
        let params = SketchParams::Practical(PracticalParams::new(rho, sigma).unwrap());
        let sketch = build_sketch(&inst, &params, &HashSource::new(seed));
        let sol = lazy_greedy(&sketch, 100);
        let value = coverage(&inst, &sol.chosen).unwrap() as f64;
        let baseline = stochastic_greedy(&inst, 100, 0.1, seed).value as f64;
        ratios.push(sketch.edge_count() as f64 / inst.edge_count() as f64);
        qualities.push(value / baseline);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ratio, quality) = (mean(&ratios), mean(&qualities));
    Outcome {
        pass: (0.07..=0.09).contains(&ratio) && quality >= 0.95,
        detail: format!(
            "rho={rho} sigma={sigma}: mean sketch_ratio {ratio:.4}, mean quality_ratio {quality:.4} (need >= 0.95)"
        ),
    }
}

/// Elements hashed below `2 target / m` number between `target` and
/// `3 target` in at least 99% of seeds.
fn ac3() -> Outcome {
    let m = 100_000usize;
    let n = 10usize;
    let lists: Vec<Vec<u32>> = (0..m).map(|v| vec![(v % n) as u32]).collect();
    let inst = CoverageInstance::from_element_lists(n, lists).unwrap();
    let p = theory_params(n, m, inst.edge_count(), 1, 0.9, 0.5).unwrap();
    let target = p.target_edges as f64;
    let threshold = 2.0 * target / m as f64;
    let trials = 1000;
    let mut inside = 0;
    for seed in 0..trials {
        let h = HashSource::new(seed);
        let count = (0..m as u32).filter(|&v| h.element_hash(v) < threshold).count() as f64;
        if (target..=3.0 * target).contains(&count) {
            inside += 1;
        }
    }
    let share = inside as f64 / trials as f64;
    Outcome {
        pass: share >= 0.99,
        detail: format!(
            "target={target} threshold={threshold:.5}: {inside}/{trials} seeds in [target, 3 target] ({:.1}%)",
            100.0 * share
        ),
    }
}

/// Uniform edge sampling misses the bonus sets; the sketch with the same
/// edge budget finds them.
fn ac4() -> Outcome {
    let (n, k, beta) = (200usize, 20usize, 4.0f64);
    let budget = (n * k) as f64 / (beta * beta);
    let budget = budget.round() as usize;
    let runs = 50u64;
    let mut uniform_total = 0.0;
    let mut sketch_total = 0.0;
    let mut sketch_min = f64::INFINITY;
    let mut sketch_mass = 0usize;
    for seed in 0..runs {
        let adv = generate_adversarial(n, k, beta, seed).unwrap();
        let inst = &adv.instance;
        let opt = inst.m() as f64;
        debug_assert_eq!(coverage(inst, &adv.bonus_sets).unwrap() as f64, opt);

        let edges: Vec<(u32, u32)> = inst.edges().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let sample = index::sample(&mut rng, edges.len(), budget)
            .into_iter()
            .map(|i| edges[i]);
        let sampled = CoverageInstance::from_edges(n, inst.m(), sample).unwrap();
        let uniform = greedy_kcover(&sampled, k);
        uniform_total += coverage(inst, &uniform.chosen).unwrap() as f64 / opt;

        let params = theory_params(n, inst.m(), inst.edge_count(), k, 0.5, 0.5)
            .unwrap()
            .with_target_edges(budget);
        let sketch = build_sketch(inst, &SketchParams::Theory(params), &HashSource::new(seed));
        sketch_mass = sketch_mass.max(sketch.edge_count());
        let sol = greedy_kcover(&sketch, k);
        let q = coverage(inst, &sol.chosen).unwrap() as f64 / opt;
        sketch_total += q;
        sketch_min = sketch_min.min(q);
    }
    let uniform_mean = uniform_total / runs as f64;
    let sketch_mean = sketch_total / runs as f64;
    Outcome {
        pass: uniform_mean <= 0.55 && sketch_mean >= 0.9,
        detail: format!(
            "{budget} edges: uniform mean {uniform_mean:.4} of OPT (need <= 0.55); sketch mean {sketch_mean:.4} (need >= 0.9, min {sketch_min:.4}, max edges {sketch_mass})"
        ),
    }
}

fn random_khop(rng: &mut ChaCha8Rng, vertices: usize, avg_degree: usize) -> CoverageInstance {
    let mut adjacency = vec![Vec::new(); vertices];
    for _ in 0..vertices * avg_degree / 2 {
        let u = rng.random_range(0..vertices);
        let v = rng.random_range(0..vertices);
        adjacency[u].push(v as u32);
    }
    khop_dominating_instance(&adjacency, 1).unwrap()
}

fn random_feature_pairs(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> CoverageInstance {
    let matrix: Vec<Vec<u8>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_bool(density) as u8).collect())
        .collect();
    feature_pairs_instance(&matrix).unwrap().instance
}

/// Simulated pipeline equals single-process sketch and solve.
fn ac5() -> Outcome {
    const ALPHA: f64 = 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let instances: Vec<(&str, CoverageInstance)> = vec![
        ("planted", generate_planted(20, 10_000, 200, 0.2, 1).unwrap().instance),
        ("adversarial", generate_adversarial(500, 10, 20.0, 2).unwrap().instance),
        ("khop", random_khop(&mut rng, 12_000, 4)),
        ("feature-pairs", random_feature_pairs(&mut rng, 160, 40, 0.35)),
    ];
    let runs = 100;
    let (mut flagged, mut mismatches, mut bad_rounds, mut over_load, mut pruned) = (0, 0, 0, 0, 0);
    let mut worst_alpha: f64 = 0.0;
    for run in 0..runs {
        let (_, inst) = &instances[run % instances.len()];
        assert!(inst.m() >= 10_000);
        let k = rng.random_range(1..=20usize.min(inst.n()));
        let machines = rng.random_range(2..=16);
        let eps = [0.7, 0.9][rng.random_range(0..2)];
        let dd = [0.01, 0.02, 0.05][rng.random_range(0..3)];
        let seed = rng.random::<u64>();
        let solver = if run % 2 == 0 {
            DistSolver::Greedy
        } else {
            DistSolver::Stochastic
        };

        let dist = run_kcover_mapreduce(inst, k, eps, dd, seed, machines, solver).unwrap();
        if dist.report.threshold < 1.0 {
            pruned += 1;
        }
        if dist.report.rounds_executed != 4 {
            bad_rounds += 1;
        }
        let p = theory_params(inst.n(), inst.m(), inst.edge_count(), k, eps, dd).unwrap();
        let load_ratio = dist.report.coordinator_load() as f64 / (p.target_edges + inst.n()) as f64;
        worst_alpha = worst_alpha.max(load_ratio);
        if load_ratio > ALPHA {
            over_load += 1;
        }
        if dist.report.divergence {
            flagged += 1;
            continue;
        }
        let sketch = build_sketch(inst, &SketchParams::Theory(p), &HashSource::new(seed));
        let single = match solver {
            DistSolver::Greedy => greedy_kcover(&sketch, k),
            DistSolver::Stochastic => stochastic_greedy(&sketch, k, eps, seed),
        };
        if sketch != dist.sketch || single != dist.solution {
            mismatches += 1;
        }
    }
    Outcome {
        pass: mismatches == 0 && flagged <= 1 && bad_rounds == 0 && over_load == 0,
        detail: format!(
            "{runs} runs ({pruned} with threshold < 1): {mismatches} mismatches, {flagged} divergence flags, {bad_rounds} runs not 4 rounds, coordinator load <= {worst_alpha:.2} (target + n), alpha = {ALPHA}"
        ),
    }
}

/// Set cover with outliers stays within `(1 + eps) ln(1/lambda) OPT`.
fn ac6() -> Outcome {
    let (lambda, eps) = (0.01f64, 0.2f64);
    let runs = 200u64;
    let mut good = 0;
    let mut sketch_good = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..runs {
        let k = 5 + (seed % 16) as usize;
        let m = k * rng.random_range(20..=60);
        let planted = generate_planted(k, m, 3 * k, 0.2, seed).unwrap();
        let inst = &planted.instance;
        let bound = (1.0 + eps) * (1.0 / lambda).ln() * k as f64;
        let need = required_coverage(inst.m(), lambda) as u64;
        let ok = |chosen: &[u32]| chosen.len() as f64 <= bound && coverage(inst, chosen).unwrap() >= need;
        if let Ok(r) = set_cover_outliers(inst, lambda, eps, 0.5, seed, Engine::Direct) {
            if ok(&r.solution.chosen) {
                good += 1;
            }
        }
        if let Ok(r) = set_cover_outliers(inst, lambda, eps, 0.5, seed, Engine::Sketch) {
            if ok(&r.solution.chosen) {
                sketch_good += 1;
            }
        }
    }
    let share = good as f64 / runs as f64;
    Outcome {
        pass: share >= 0.95,
        detail: format!(
            "{runs} planted instances: {good} feasible within bound ({:.1}%); sketch engine {sketch_good} ({:.1}%, measured on the full instance)",
            100.0 * share,
            100.0 * sketch_good as f64 / runs as f64
        ),
    }
}

fn random_subsets(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| (0..n as u32).filter(|_| rng.random_bool(0.5)).collect())
        .collect()
}

/// Expansion sketches at `rho = 1` reproduce weighted and fractional
/// coverage exactly.
fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut cases, mut failures) = (0, 0);
    for case in 0..100u64 {
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=30);
        let lists = random_lists(&mut rng, n, m, n);
        let base = CoverageInstance::from_element_lists(n, lists.clone()).unwrap();
        let k = rng.random_range(1..=n);

        let max_w = (10_000 / m as u64).min(300);
        let weights: Vec<u64> = (0..m).map(|_| rng.random_range(1..=max_w)).collect();
        let w = WeightedInstance::new(base.clone(), weights, max_w).unwrap();
        assert!(w.expanded_size() <= 10_000);
        let sk = sketch_weighted(&w, &full_practical(), &HashSource::new(case));
        let sol = greedy_kcover(&sk, k);
        cases += 1;
        let mut ok = sol.value == coverage_weighted(&w, &sol.chosen).unwrap();
        for s in random_subsets(&mut rng, n, 8) {
            ok &= coverage(&sk, &s).unwrap() == coverage_weighted(&w, &s).unwrap();
        }
        failures += !ok as usize;

        let u = rng.random_range(1..=(10_000 / m) as u32).min(64);
        let triples: Vec<(u32, u32, u32)> = lists
            .iter()
            .enumerate()
            .flat_map(|(e, sets)| sets.iter().map(move |&s| (s, e as u32)).collect::<Vec<_>>())
            .map(|(s, e)| (s, e, rng.random_range(0..=u)))
            .collect();
        let f = FractionalInstance::new(n, m, u, &triples).unwrap();
        let sk = sketch_fractional(&f, &full_practical(), &HashSource::new(case));
        let sol = greedy_kcover(&sk, k);
        cases += 1;
        let mut ok = sol.value == coverage_fractional_units(&f, &sol.chosen).unwrap();
        for s in random_subsets(&mut rng, n, 8) {
            ok &= coverage(&sk, &s).unwrap() == coverage_fractional_units(&f, &s).unwrap();
        }
        failures += !ok as usize;
    }
    Outcome {
        pass: failures == 0,
        detail: format!("{cases} weighted/fractional cases, {failures} mismatches"),
    }
}

/// Probabilistic expansion estimates every solution within relative
/// `eps / 2` in at least 95% of cases.
fn ac8() -> Outcome {
    let eps = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = 60;
    let mut good = 0;
    let mut worst_case_errors = Vec::new();
    for case in 0..cases {
        let n = rng.random_range(1..=8usize);
        let m = rng.random_range(1..=6usize);
        let u = rng.random_range(1..=4u32);
        let lists = random_lists(&mut rng, n, m, n);
        let triples: Vec<(u32, u32, u32)> = lists
            .iter()
            .enumerate()
            .flat_map(|(e, sets)| sets.iter().map(move |&s| (s, e as u32)).collect::<Vec<_>>())
            .map(|(s, e)| (s, e, rng.random_range(1..=u)))
            .collect();
        let p = ProbabilisticInstance::new(n, m, u, &triples).unwrap();
        let zeta = probabilistic_copies(n, u, eps).unwrap() as f64;
        let sk = sketch_probabilistic(&p, eps, &full_practical(), &HashSource::new(case)).unwrap();

        // histogram of each copy's adjacency mask, then every family at once
        let g = sk.graph();
        let mut hist = vec![0u64; 1 << n];
        for e in 0..g.m() as u32 {
            let mask = g.element_sets(e).iter().fold(0usize, |acc, &s| acc | 1 << s);
            hist[mask] += 1;
        }
        let mut worst: f64 = 0.0;
        for family in 0..1usize << n {
            let hits: u64 = hist
                .iter()
                .enumerate()
                .filter(|&(mask, _)| mask & family != 0)
                .map(|(_, &c)| c)
                .sum();
            let chosen: Vec<u32> = (0..n as u32).filter(|&s| family >> s & 1 == 1).collect();
            let exact = coverage_probabilistic(&p, &chosen).unwrap();
            let estimate = hits as f64 / zeta;
            if exact > 0.0 {
                worst = worst.max((estimate - exact).abs() / exact);
            } else if estimate != 0.0 {
                worst = f64::INFINITY;
            }
        }
        if worst <= eps / 2.0 {
            good += 1;
        }
        worst_case_errors.push(worst);
    }
    let max_err = worst_case_errors.iter().cloned().fold(0.0, f64::max);
    let share = good as f64 / cases as f64;
    Outcome {
        pass: share >= 0.95,
        detail: format!(
            "{cases} cases: {good} with all 2^n families within {:.2} ({:.1}%), largest relative error {max_err:.4}",
            eps / 2.0,
            100.0 * share
        ),
    }
}

/// Quality improves with rho at fixed sigma (3-seed means).
fn ac9() -> Outcome {
    let source = InstanceSource::Planted {
        k: 50,
        m: 5000,
        k_prime: 2000,
        eps: 0.2,
        seed: 9,
    };
    let rhos = vec![0.005, 0.02, 0.08, 0.32, 1.0];
    let mut spec = ExperimentSpec::new(source, rhos.clone(), vec![20], vec![50], vec![1, 2, 3]);
    spec.solver = SketchSolver::Lazy;
    let inst = spec.source.load().unwrap();
    let rows = run_experiment(&spec, &inst).unwrap();
    let means: Vec<f64> = rows
        .iter()
        .filter(|r| r.seed.is_none())
        .map(|r| r.quality_ratio)
        .collect();
    let monotone = means.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = rhos.iter().zip(&means).map(|(r, q)| format!("{r}:{q:.4}")).collect();
    Outcome {
        pass: monotone && means.len() == rhos.len(),
        detail: format!(
            "{} edges, sigma=20, k=50, mean quality by rho [{}]",
            inst.edge_count(),
            shown.join(", ")
        ),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("AC1 greedy guarantee", ac1),
        ("AC2 sketch fidelity", ac2),
        ("AC3 hash concentration", ac3),
        ("AC4 uniform sampling lower bound", ac4),
        ("AC5 distributed equivalence", ac5),
        ("AC6 set cover with outliers", ac6),
        ("AC7 weighted equivalence", ac7),
        ("AC8 probabilistic estimator", ac8),
        ("AC9 quality monotone in rho", ac9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {name}: {} [{:.1}s]",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !outcome.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
