//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use immunet::bench::{generate_graph, linear_fit, run_benchmark, sample_seeds, BenchConfig, GraphModel, CATERPILLAR_SOURCE};
use immunet::graph::{hop_distances, load_edge_list, EdgeListOptions};
use immunet::immunization::{
    build_dominator_tree, dava, highest_degree, netshield, shield_value, Algorithm, DavaVariant,
};
use immunet::report::{read_result, Report};
use immunet::spectral::{power_iteration, PowerIterationConfig};
use immunet::spread::{cascade_run, run_key, saved_nodes, simulate_ic, CascadeParams};
use immunet::{Graph, NodeId, SeedSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ac1_spectral_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for case in 0..50 {
        let n = rng.random_range(2..=50);
        let p = rng.random_range(0.0..0.3);
        let g = random_connected(&mut rng, n, p);
        let started = Instant::now();
        let e = power_iteration(&g, &PowerIterationConfig::default()).map_err(|e| format!("case {case}: {e}"))?;
        let took = started.elapsed();
        slowest = slowest.max(took);
        let oracle = dense_lambda(&g, &[]);
        let rel = (e.lambda - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        ensure(rel <= 1e-8, || format!("case {case} (n={n}): lambda {} vs oracle {oracle}", e.lambda))?;
        ensure(took < Duration::from_secs(1), || format!("case {case} took {took:?}"))?;
    }
    Ok(format!("50 graphs, max rel err {worst:.2e}, slowest {slowest:?}"))
}

fn ac2_shield_exactness() -> Outcome {
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let e = power_iteration(&k4, &PowerIterationConfig::default()).unwrap();
    let single = shield_value(&k4, &e, &[0]);
    let pair = shield_value(&k4, &e, &[0, 1]);
    ensure((single - 1.5).abs() <= 1e-12 && (pair - 2.5).abs() <= 1e-12, || format!("K4 values {single}, {pair}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let n = rng.random_range(1..=30);
        let g = { let x = rng.random_range(0.05..0.5); random_gnp(&mut rng, n, x) };
        let e = power_iteration(&g, &PowerIterationConfig::default()).map_err(|e| format!("case {case}: {e}"))?;
        let size = rng.random_range(0..=n);
        let set = distinct_nodes(&mut rng, n, size);
        let mut direct = 0.0;
        for &i in &set {
            direct += 2.0 * e.lambda * e.u[i] * e.u[i];
            for &j in &set {
                if g.has_edge(i, j) {
                    direct -= e.u[i] * e.u[j];
                }
            }
        }
        let diff = (shield_value(&g, &e, &set) - direct).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-12, || format!("case {case}: diff {diff:e}"))?;
    }
    Ok(format!("K4 = 1.5 / 2.5, 1000 random sets, max |diff| {worst:.1e}"))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<NodeId>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn ac3_netshield_quality() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut good = 0;
    let mut solver_failures = 0;
    for _ in 0..200 {
        let n = rng.random_range(4..=12);
        let k = rng.random_range(1..=3usize).min(n - 1);
        let g = { let x = rng.random_range(0.15..0.6); random_gnp(&mut rng, n, x) };
        let base = dense_lambda(&g, &[]);
        let greedy = match netshield(&g, k, &[], &PowerIterationConfig::default()) {
            Ok(r) => r.selected,
            Err(_) => {
                solver_failures += 1;
                continue;
            }
        };
        let greedy_drop = base - dense_lambda(&g, &greedy);
        let best_drop = combinations(n, k)
            .iter()
            .map(|s| base - dense_lambda(&g, s))
            .fold(f64::NEG_INFINITY, f64::max);
        if greedy_drop >= 0.9 * best_drop - 1e-9 {
            good += 1;
        }
    }
    let took = started.elapsed();
    ensure(good >= 180, || format!("only {good}/200 instances reach 90% of optimum ({solver_failures} solver failures)"))?;
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{good}/200 instances within 90% of brute-force eigen-drop, {took:.1?}"))
}

fn ac4_dominator_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut checked = 0;
    for case in 0..100 {
        let n = rng.random_range(2..=60);
        let g = { let x = rng.random_range(0.0..0.12); random_connected(&mut rng, n, x) };
        let count = rng.random_range(1..=3usize).min(n - 1);
        let seeds = distinct_nodes(&mut rng, n, count);
        let tree = build_dominator_tree(&g, &SeedSet::new(&g, seeds.iter().copied()).unwrap()).unwrap();
        let oracle = removal_idoms(&g, &seeds);
        for v in 0..n {
            let got = tree.idom(v).map(|d| if d == tree.root() { None } else { Some(d) });
            ensure(got == oracle[v], || format!("case {case} node {v}: idom {got:?} vs oracle {:?}", oracle[v]))?;
            checked += 1;
        }
        let reachable = bfs_reach(&g, &seeds, &[]).iter().filter(|&&r| r).count() - seeds.len();
        ensure(tree.subtree_size(tree.root()) == reachable + 1, || format!("case {case}: root subtree size"))?;
    }
    Ok(format!("100 graphs, {checked} nodes, 0 mismatches"))
}

fn ac5_dava_vs_baselines() -> Outcome {
    let params = CascadeParams { p: 1.0, runs: 4, master_seed: 5 };
    let mut strict_vs_ns = 0;
    let mut cases = 0;
    for instance in 0..20u64 {
        let g = generate_graph(GraphModel::CaterpillarLocalSpread, 300, 20.0, 500 + instance).unwrap();
        let seeds = SeedSet::new(&g, [CATERPILLAR_SOURCE]).unwrap();
        for k in 1..=3 {
            let saved = |blocked: &[NodeId]| saved_nodes(&g, &seeds, blocked, &params).unwrap().saved;
            let d = saved(&dava(&g, &seeds, k, DavaVariant::Iterative).unwrap().selected);
            let h = saved(&highest_degree(&g, k, seeds.members()).selected);
            let ns = saved(&netshield(&g, k, seeds.members(), &PowerIterationConfig::default()).unwrap().selected);
            ensure(d >= h && d >= ns, || format!("instance {instance} k={k}: DAVA {d} HD {h} NS {ns}"))?;
            if d > ns {
                strict_vs_ns += 1;
            }
            cases += 1;
        }
    }
    ensure(2 * strict_vs_ns >= cases, || format!("DAVA beats NetShield strictly on only {strict_vs_ns}/{cases}"))?;
    Ok(format!("{cases} cases, DAVA >= both everywhere, strictly above NetShield on {strict_vs_ns}"))
}

fn ac6_cascade_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for case in 0..100 {
        let n = rng.random_range(2..=40);
        let g = { let x = rng.random_range(0.02..0.3); random_gnp(&mut rng, n, x) };
        let picks = { let x = rng.random_range(2..=n.min(8)); distinct_nodes(&mut rng, n, x) };
        let split = rng.random_range(1..picks.len());
        let (seed_nodes, blocked) = picks.split_at(split);
        let reach = bfs_reach(&g, seed_nodes, blocked);
        let expected: Vec<NodeId> = (0..n).filter(|&v| reach[v]).collect();
        let mut mask = vec![false; n];
        blocked.iter().for_each(|&b| mask[b] = true);
        for run in 0..5 {
            let mut got = cascade_run(&g, seed_nodes, &mask, 1.0, run_key(9, run));
            got.sort_unstable();
            ensure(got == expected, || format!("case {case} run {run}: p=1 cascade differs from BFS"))?;
            let zero = cascade_run(&g, seed_nodes, &mask, 0.0, run_key(9, run));
            ensure(zero == seed_nodes, || format!("case {case}: p=0 infected more than seeds"))?;
        }
    }

    let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let s = SeedSet::new(&edge, [0]).unwrap();
    let params = CascadeParams { p: 0.5, runs: 10_000, master_seed: 42 };
    let mean = simulate_ic(&edge, &s, &[], &params).unwrap().mean_infected;
    ensure((mean - 1.5).abs() <= 0.05, || format!("single-edge mean {mean}"))?;

    let g = generate_graph(GraphModel::PreferentialAttachment, 400, 2.0, 7).unwrap();
    let seeds = SeedSet::new(&g, sample_seeds(&g, 5, 1)).unwrap();
    let params = CascadeParams { p: 0.2, runs: 300, master_seed: 77 };
    let a = simulate_ic(&g, &seeds, &[10, 20], &params).unwrap();
    let b = simulate_ic(&g, &seeds, &[10, 20], &params).unwrap();
    ensure(a == b, || "repeated simulation differs".into())?;
    Ok(format!("100 graphs x 5 runs match BFS at p=1 and seeds at p=0; single-edge mean {mean:.4}; reruns identical"))
}

fn ac7_runtime_shape() -> Outcome {
    let started = Instant::now();
    let g = generate_graph(GraphModel::PreferentialAttachment, 5000, 2.0, 2024).unwrap();
    let seeds = SeedSet::new(&g, sample_seeds(&g, 25, 7)).unwrap();
    let ks = [10, 15, 20, 25];
    let report = run_benchmark(&g, &seeds, &Algorithm::ALL, &ks, &CascadeParams::default(), &BenchConfig::default())
        .map_err(|e| e.to_string())?;
    let time = |a: Algorithm, k: usize| {
        report.rows.iter().find(|r| r.algorithm == a && r.k == k).map(|r| r.elapsed_seconds).unwrap()
    };
    let mut cells = Vec::new();
    for &k in &ks {
        let (h, ns, d) = (time(Algorithm::HighestDegree, k), time(Algorithm::NetShield, k), time(Algorithm::Dava, k));
        cells.push(format!("k={k}: {h:.2e}/{ns:.2e}/{d:.2e}"));
        ensure(h < ns && ns < d, || format!("ordering violated at k={k}: HD {h} NS {ns} DAVA {d}"))?;
    }
    let dava: Vec<f64> = ks.iter().map(|&k| time(Algorithm::Dava, k)).collect();
    ensure(dava.windows(2).all(|w| w[0] <= w[1]), || format!("DAVA times not nondecreasing: {dava:?}"))?;
    let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let (_, _, r2) = linear_fit(&xs, &dava);
    ensure(r2 >= 0.9, || format!("DAVA linear fit R^2 = {r2:.3}"))?;
    let took = started.elapsed();
    ensure(took < Duration::from_secs(600), || format!("sweep took {took:?}"))?;
    Ok(format!("HD/NS/DAVA seconds {}; DAVA R^2 {r2:.4}; sweep {took:.1?}", cells.join(", ")))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_immunet")
}

fn immunet(args: &[&str]) -> Result<(), String> {
    let out = Command::new(bin()).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("immunet {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))
}

/// Report JSON with every timing field blanked.
fn without_timing(path: &Path) -> serde_json::Value {
    fn scrub(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                for (key, value) in map.iter_mut() {
                    if key.ends_with("_seconds") {
                        *value = serde_json::Value::Null;
                    } else {
                        scrub(value);
                    }
                }
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(scrub),
            _ => {}
        }
    }
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    scrub(&mut v);
    v
}

fn pipeline(dir: &Path) -> Result<Vec<String>, String> {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (graph, seeds) = (p("graph.tsv"), p("seeds.csv"));
    immunet(&["generate", "--graph", &graph, "--model", "preferential-attachment", "--n", "600", "--param", "2", "--seed", "3", "--seeds-out", &seeds, "--seed-count", "8"])?;
    let mut outputs = Vec::new();
    for algo in ["highest-degree", "netshield", "dava"] {
        let out = p(&format!("{algo}.json"));
        immunet(&["immunize", "--graph", &graph, "--seeds", &seeds, "--algo", algo, "--k", "10", "--out", &out])?;
        outputs.push(out);
    }
    let eval = p("evaluate.json");
    let mut args = vec!["evaluate", "--graph", &graph, "--seeds", &seeds, "--runs", "200", "--master-seed", "11", "--out", &eval];
    for o in &outputs {
        args.extend(["--result", o.as_str()]);
    }
    immunet(&args)?;
    let (bench, csv) = (p("bench.json"), p("bench.csv"));
    immunet(&["bench", "--graph", &graph, "--seeds", &seeds, "--k-list", "10,15", "--runs", "100", "--out", &bench, "--csv", &csv])?;
    let dot = p("top10.dot");
    immunet(&["subgraph", "--graph", &graph, "--result", &outputs[1], "--radius", "1", "--out", &dot])?;
    outputs.extend([eval, bench, dot]);
    Ok(outputs)
}

fn ac8_cli_end_to_end() -> Outcome {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let a = pipeline(first.path())?;
    let b = pipeline(second.path())?;

    let g = load_edge_list(
        std::fs::read_to_string(first.path().join("graph.tsv")).unwrap().as_bytes(),
        &EdgeListOptions::default(),
    )
    .unwrap();
    for (i, algo) in [Algorithm::HighestDegree, Algorithm::NetShield, Algorithm::Dava].into_iter().enumerate() {
        let Report::Immunization(record) = read_result(&a[i]).map_err(|e| e.to_string())? else {
            return Err(format!("{} is not an immunization report", a[i]));
        };
        ensure(record.algorithm == algo && record.k == 10 && record.selected.len() == 10, || format!("bad record {record:?}"))?;
        let result = record.to_result(&g).map_err(|e| e.to_string())?;
        ensure(result.selected.len() == 10, || "round trip lost nodes".into())?;
    }
    match read_result(&a[3]).map_err(|e| e.to_string())? {
        Report::Evaluation { reports } => ensure(reports.len() == 3 && reports.iter().all(|r| r.saved >= 0.0), || format!("{reports:?}"))?,
        other => return Err(format!("evaluate wrote {other:?}")),
    }
    match read_result(&a[4]).map_err(|e| e.to_string())? {
        Report::Bench(report) => ensure(report.rows.len() == 6, || "bench rows".into())?,
        _ => return Err("bench report kind".into()),
    }
    let csv = std::fs::read_to_string(first.path().join("bench.csv")).unwrap();
    ensure(csv.starts_with("algorithm,k,elapsed_seconds,saved_nodes\n") && csv.lines().count() == 7, || csv.clone())?;

    // DOT holds exactly the edges induced on the top-10 NetShield nodes and
    // their direct neighbors.
    let Report::Immunization(ns) = read_result(&a[1]).unwrap() else { unreachable!() };
    let top: Vec<NodeId> = ns.selected.iter().map(|s| g.index_of(&s.id).unwrap()).collect();
    let near = hop_distances(&g, &top, 1).unwrap();
    let expected: BTreeSet<(String, String)> = g
        .edges()
        .filter(|&(x, y)| near[x].is_some() && near[y].is_some())
        .map(|(x, y)| (g.external_id(x).to_owned(), g.external_id(y).to_owned()))
        .collect();
    let dot = std::fs::read_to_string(&a[5]).unwrap();
    let found: BTreeSet<(String, String)> = dot
        .lines()
        .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -- "))
        .map(|(x, y)| (x.trim_matches('"').to_owned(), y.trim_matches('"').to_owned()))
        .collect();
    let edge_lines = dot.lines().filter(|l| l.contains(" -- ")).count();
    ensure(found == expected && edge_lines == expected.len(), || format!("DOT edges {} vs expected {}", found.len(), expected.len()))?;

    for (x, y) in a.iter().zip(&b) {
        if x.ends_with(".json") {
            ensure(without_timing(Path::new(x)) == without_timing(Path::new(y)), || format!("{x} differs between runs"))?;
        } else {
            ensure(std::fs::read(x).unwrap() == std::fs::read(y).unwrap(), || format!("{x} differs between runs"))?;
        }
    }
    Ok(format!("3 immunize + evaluate + bench + DOT ({} induced edges); reruns identical modulo timing", expected.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1 spectral oracle", ac1_spectral_oracle),
        ("AC2 shield-value exactness", ac2_shield_exactness),
        ("AC3 NetShield quality floor", ac3_netshield_quality),
        ("AC4 dominator oracle", ac4_dominator_oracle),
        ("AC5 DAVA vs baselines", ac5_dava_vs_baselines),
        ("AC6 cascade correctness", ac6_cascade_correctness),
        ("AC7 runtime shape", ac7_runtime_shape),
        ("AC8 CLI end-to-end", ac8_cli_end_to_end),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
