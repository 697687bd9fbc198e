//! Acceptance suite: one line per criterion, `PASS` or `FAIL`.
//!
//! Criteria 3 to 9 produce a text artifact (CSV-like) alongside the verdict;
//! criterion 10 reruns them on a different number of worker threads and
//! compares the artifacts byte for byte.
//!
//! The process exits non-zero if a criterion fails that is not listed in
//! `KNOWN_RED`. Known-red criteria still print `FAIL`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperlab::combinatorics::{is_subset, TheoryParams};
use hyperlab::enumeration::{
    census_within, centering, exp_inv_bounds, f_s, f_s_lower, laplace_sum_check, predicted_l1,
    tj_series_fixed_point, wheel_bound,
};
use hyperlab::experiments::{run_experiment, trials_csv, ExperimentConfig};
use hyperlab::hypergraph::{brute_force_wheel_census, j_components, sample_hypergraph};
use hyperlab::processes::coupled_run;
use hyperlab::rng::trial_seed;
use hyperlab::Hypergraph;
use num_bigint::BigUint;
use rayon::prelude::*;

/// Criteria that fail at the prescribed desk-scale parameters for reasons
/// documented in the README (finite-size effect, stable across seeds).
const KNOWN_RED: [&str; 1] = ["8b"];

const BASE_SEED: u64 = 20_240_601;

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn line(id: &'static str, passed: bool, detail: String) -> Line {
    Line { id, passed, detail }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

fn timed(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (
        t <= limit,
        format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()),
    )
}

// 1: F_s against the fixed point of T = exp(z (1 + T)^c0) - 1
fn criterion_1() -> Vec<Line> {
    let start = Instant::now();
    let mut mismatches = 0;
    for c0 in [1u32, 2, 3, 5] {
        let t = tj_series_fixed_point(c0, 30);
        for s in 1..=30 {
            if f_s(c0 as u64, s as u64) != t.coeff(s) {
                mismatches += 1;
            }
        }
    }
    let (fast, time) = timed(Duration::from_secs(10), start);
    vec![line(
        "1",
        mismatches == 0 && fast,
        format!("f_s vs series coefficients, c0 in {{1,2,3,5}}, s <= 30: {mismatches} mismatches; {time}"),
    )]
}

// 2: c0^(s-1) s^(s-1)/s! <= F_s <= same * e^(1/c0), exactly
fn criterion_2() -> Vec<Line> {
    let start = Instant::now();
    let mut broken = Vec::new();
    let mut strict = 0;
    for c0 in 1..=6u64 {
        let (e_lo, e_hi) = exp_inv_bounds(c0);
        for s in 1..=200u64 {
            let f = f_s(c0, s);
            let lower = f_s_lower(c0, s);
            if !(lower <= f && f <= &lower * &e_hi) {
                broken.push((c0, s));
            }
            if f < &lower * &e_lo {
                strict += 1;
            }
        }
    }
    let (fast, time) = timed(Duration::from_secs(30), start);
    vec![line(
        "2",
        broken.is_empty() && fast,
        format!(
            "bracket on F_s for c0 <= 6, s <= 200: {} violations, {strict}/1200 strictly inside; {time}",
            broken.len()
        ),
    )]
}

fn bfs_components(n: usize, h: &Hypergraph) -> BTreeSet<BTreeSet<u32>> {
    let mut adj = vec![Vec::new(); n + 1];
    for e in h.edges() {
        adj[e[0] as usize].push(e[1]);
        adj[e[1] as usize].push(e[0]);
    }
    let mut seen = vec![false; n + 1];
    let mut out = BTreeSet::new();
    for v in 1..=n {
        if seen[v] || adj[v].is_empty() {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = std::collections::VecDeque::from([v as u32]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            comp.insert(x);
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        out.insert(comp);
    }
    out
}

// 3: k = 2, j = 1 decomposition against plain breadth-first search
fn criterion_3(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let n = 50;
    let jobs: Vec<(f64, u64)> = [0.5, 0.9]
        .iter()
        .flat_map(|&c| (0..100).map(move |t| (c, t)))
        .collect();
    let rows: Vec<(bool, String)> = in_pool(workers, || {
        jobs.par_iter()
            .map(|&(c, t)| {
                let seed = trial_seed(BASE_SEED, t);
                let h = Hypergraph::sample(n, 2, c / n as f64, seed).unwrap();
                let d = j_components(&h, 1).unwrap();
                let mut by_id: HashMap<usize, BTreeSet<u32>> = HashMap::new();
                for (&rank, &id) in &d.jset_component {
                    by_id.entry(id).or_default().insert(rank as u32 + 1);
                }
                let orders_ok = d.components.iter().all(|c| {
                    by_id.get(&c.id).map(|v| v.len() as u64) == Some(c.order)
                        && c.edges.iter().all(|&e| d.component_of_edge(&h, e) == c.id)
                });
                let ours: BTreeSet<BTreeSet<u32>> = by_id.into_values().collect();
                let theirs = bfs_components(n, &h);
                let covered: u64 = theirs.iter().map(|s| s.len() as u64).sum();
                let isolated_ok = d.isolated_jsets == BigUint::from(n as u64 - covered);
                let ok = ours == theirs && orders_ok && isolated_ok;
                let sizes: Vec<String> = d.components.iter().map(|c| c.size.to_string()).collect();
                (ok, format!("{c},{t},{},{}\n", h.len(), sizes.join(";")))
            })
            .collect()
    });
    let bad = rows.iter().filter(|r| !r.0).count();
    let artifact: String = rows.into_iter().map(|r| r.1).collect();
    let (fast, time) = timed(Duration::from_secs(5), start);
    (
        vec![line(
            "3",
            bad == 0 && fast,
            format!("graph-case partition vs BFS on 200 graphs (n=50, p in {{0.5/n, 0.9/n}}): {bad} mismatches; {time}"),
        )],
        artifact,
    )
}

// 4: coupled branching size dominates the component size
fn criterion_4(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let pairs = [(2usize, 1usize), (3, 1), (3, 2), (4, 2)];
    let jobs: Vec<(usize, u64)> = (0..pairs.len())
        .flat_map(|p| (0..2500u64).map(move |t| (p, t)))
        .collect();
    let rows: Vec<(bool, bool, String)> = in_pool(workers, || {
        jobs.par_iter()
            .map(|&(pi, t)| {
                let (k, j) = pairs[pi];
                let params = TheoryParams::new(60, k, j, 0.3).unwrap();
                let h = sample_hypergraph(&params, trial_seed(BASE_SEED + pi as u64, t)).unwrap();
                // start inside an edge when there is one, so components are non-trivial
                let start: Vec<u32> = if h.is_empty() {
                    (1..=j as u32).collect()
                } else {
                    h.edge((t as usize) % h.len())[..j].to_vec()
                };
                let r = coupled_run(&h, &params, &start, trial_seed(!BASE_SEED, t)).unwrap();
                let ok = r.branching_size >= r.component_size;
                (
                    ok,
                    r.truncated,
                    format!("{k},{j},{t},{},{}\n", r.component_size, r.branching_size),
                )
            })
            .collect()
    });
    let violations = rows.iter().filter(|r| !r.0).count();
    let truncated = rows.iter().filter(|r| r.1).count();
    let artifact: String = rows.into_iter().map(|r| r.2).collect();
    let (fast, time) = timed(Duration::from_secs(60), start);
    (
        vec![line(
            "4",
            violations == 0 && truncated == 0 && fast,
            format!("10^4 coupled runs at n=60, eps=0.3: {violations} dominance violations, {truncated} truncated; {time}"),
        )],
        artifact,
    )
}

// 5: hypertree identity agrees with the wheel search on every component
fn criterion_5(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for (k, j) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2), (4, 3)] {
        for n in [20usize, 30] {
            for eps in [0.05, 0.3] {
                for t in 0..60u64 {
                    jobs.push((k, j, n, eps, t));
                }
            }
        }
    }
    let rows: Vec<(usize, usize, String)> = in_pool(workers, || {
        jobs.par_iter()
            .map(|&(k, j, n, eps, t)| {
                let params = TheoryParams::new(n, k, j, eps).unwrap();
                let h = sample_hypergraph(&params, trial_seed(BASE_SEED, t)).unwrap();
                let d = j_components(&h, j).unwrap();
                let mut bad = 0;
                let mut wheels = 0;
                for c in &d.components {
                    let identity = c.order == 1 + params.c0 * c.size;
                    let agree = match &c.wheel_witness {
                        None => identity,
                        Some(w) => {
                            wheels += 1;
                            let inside = w.edges.iter().all(|e| {
                                h.contains(e) && c.edges.iter().any(|&i| h.edge(i) == e.as_slice())
                            });
                            let incident = (0..w.len()).all(|i| {
                                let prev = &w.edges[(i + w.len() - 1) % w.len()];
                                is_subset(&w.jsets[i], prev) && is_subset(&w.jsets[i], &w.edges[i])
                            });
                            !identity && w.is_valid() && inside && incident
                        }
                    };
                    if !agree || c.is_hypertree != identity {
                        bad += 1;
                    }
                }
                let row = format!(
                    "{k},{j},{n},{eps},{t},{},{},{wheels}\n",
                    h.len(),
                    d.components.len()
                );
                (bad, wheels, row)
            })
            .collect()
    });
    let bad: usize = rows.iter().map(|r| r.0).sum();
    let wheels: usize = rows.iter().map(|r| r.1).sum();
    let artifact: String = rows.into_iter().map(|r| r.2).collect();
    let (fast, time) = timed(Duration::from_secs(60), start);
    (
        vec![line(
            "5",
            bad == 0 && wheels > 0 && fast,
            format!(
                "{} hypergraphs, {wheels} non-hypertree components: {bad} disagreements; {time}",
                jobs.len()
            ),
        )],
        artifact,
    )
}

// 6: exhaustive wheel census under the wheel-count bound
fn criterion_6(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let cases = [
        (3usize, 2usize, 6usize, 2usize),
        (3, 2, 6, 3),
        (3, 2, 8, 3),
        (2, 1, 6, 3),
        (2, 1, 8, 4),
    ];
    let rows: Vec<(bool, u64, String)> = in_pool(workers, || {
        cases
            .par_iter()
            .map(|&(k, j, n, ell)| {
                let w = brute_force_wheel_census(n, k, j, ell).unwrap();
                let b = wheel_bound(n, k, j, ell).unwrap();
                let ok = census_within(w, &b.bound_exact);
                (ok, w, format!("{k},{j},{n},{ell},{w},{}\n", b.bound_exact))
            })
            .collect()
    });
    let bad = rows.iter().filter(|r| !r.0).count();
    let w2_zero = rows[0].1 == 0;
    let artifact: String = rows.iter().map(|r| r.2.clone()).collect();
    let summary: Vec<String> = rows.iter().map(|r| r.1.to_string()).collect();
    let (fast, time) = timed(Duration::from_secs(120), start);
    (
        vec![line(
            "6",
            bad == 0 && w2_zero && fast,
            format!(
                "census {} within bound in all cases: {bad} violations, w_2(3,2) = {}; {time}",
                summary.join("/"),
                rows[0].1
            ),
        )],
        artifact,
    )
}

// 7: Laplace-type sum against 5 (2a)^(a/2) s^((a+1)/2)
fn criterion_7(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for a in 1..=3u32 {
        let lo = (16.0 * a as f64).powi(2);
        let points = 20;
        let mut last = 0;
        for i in 0..points {
            let s = (lo * (1e5 / lo).powf(i as f64 / (points - 1) as f64)).round() as u64;
            if s != last {
                jobs.push((a, s));
                last = s;
            }
        }
    }
    let rows: Vec<(bool, String)> = in_pool(workers, || {
        jobs.par_iter()
            .map(|&(a, s)| {
                let c = laplace_sum_check(a, s).unwrap();
                (c.holds, format!("{a},{s},{:e},{:e}\n", c.lhs, c.rhs))
            })
            .collect()
    });
    let bad = rows.iter().filter(|r| !r.0).count();
    let artifact: String = rows.into_iter().map(|r| r.1).collect();
    let (fast, time) = timed(Duration::from_secs(30), start);
    (
        vec![line(
            "7",
            bad == 0 && fast,
            format!(
                "{} grid points over a in {{1,2,3}}, s up to 1e5: {bad} violations; {time}",
                jobs.len()
            ),
        )],
        artifact,
    )
}

// 8: largest component at n=250, k=3, j=2, eps=0.3, 300 trials
fn criterion_8(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        n: 250,
        k: 3,
        j: 2,
        epsilon: 0.3,
        trials: 300,
        m: 3,
        base_seed: BASE_SEED,
        ..ExperimentConfig::default()
    };
    let (records, summary) = run_experiment(&cfg, workers).unwrap();
    let params = summary.params;
    let center = centering(&params).unwrap();
    let offset = params.delta * summary.median_l1() - center;
    let frac = summary.ranks[0].hypertree_fraction.unwrap_or(0.0);
    let top1_violations = records
        .iter()
        .filter_map(|r| r.top.first())
        .filter(|c| c.is_hypertree && c.order != 1 + params.c0 * c.size)
        .count();
    let (fast, time) = timed(Duration::from_secs(600), start);
    let lines = vec![
        line(
            "8a",
            offset.abs() <= 3.0 && fast,
            format!(
                "|delta * median(L1) - (ln lambda - 2.5 ln ln lambda)| = {:.4} <= 3 (median L1 = {}, predicted {:.3}); {time}",
                offset.abs(),
                summary.median_l1(),
                predicted_l1(&params).unwrap()
            ),
        ),
        line(
            "8b",
            frac >= 0.95,
            format!(
                "top-1 hypertree fraction = {frac:.4} (need >= 0.95); largest non-hypertree below largest hypertree in {:.4} of trials",
                summary.non_hypertree_rarity
            ),
        ),
        line(
            "8c",
            top1_violations == 0,
            format!("M1 = 1 + c0 L1 in every hypertree trial: {top1_violations} violations"),
        ),
    ];
    (lines, trials_csv(&records, cfg.m))
}

// 9: graph case, n=5000, eps=0.25, 200 trials
fn criterion_9(workers: usize) -> (Vec<Line>, String) {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        n: 5000,
        k: 2,
        j: 1,
        epsilon: 0.25,
        trials: 200,
        m: 3,
        base_seed: BASE_SEED,
        ..ExperimentConfig::default()
    };
    let (records, summary) = run_experiment(&cfg, workers).unwrap();
    let params = summary.params;
    let predicted = predicted_l1(&params).unwrap();
    let gap = (summary.median_l1() - predicted).abs();
    let (fast, time) = timed(Duration::from_secs(300), start);
    (
        vec![line(
            "9",
            gap <= 3.0 / params.delta && fast,
            format!(
                "|median(L1) - predicted| = |{} - {predicted:.3}| = {gap:.3} <= 3/delta = {:.3}; {time}",
                summary.median_l1(),
                3.0 / params.delta
            ),
        )],
        trials_csv(&records, cfg.m),
    )
}

type Statistical = fn(usize) -> (Vec<Line>, String);

fn main() -> ExitCode {
    let mut lines = Vec::new();
    lines.extend(criterion_1());
    lines.extend(criterion_2());

    let runs: [(&str, Statistical); 7] = [
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    let mut artifacts = Vec::new();
    for (name, run) in runs {
        let (ls, artifact) = run(4);
        lines.extend(ls);
        artifacts.push((name, artifact));
    }

    // 10: same seeds, a different worker count, byte-identical artifacts
    let start = Instant::now();
    let mut differing = Vec::new();
    for ((name, run), (_, first)) in runs.iter().zip(&artifacts) {
        let (_, again) = run(1);
        if &again != first || first.is_empty() {
            differing.push(*name);
        }
    }
    lines.push(line(
        "10",
        differing.is_empty(),
        format!(
            "criteria 3-9 rerun on 1 worker vs 4: {} differing artifacts {:?}; {:.2}s",
            differing.len(),
            differing,
            start.elapsed().as_secs_f64()
        ),
    ));

    let mut report = String::new();
    let mut unexpected = 0;
    for l in &lines {
        let known = KNOWN_RED.contains(&l.id);
        let tag = match (l.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known finite-size deviation)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        let _ = writeln!(report, "criterion {:<3} {tag}: {}", l.id, l.detail);
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    let _ = writeln!(
        report,
        "acceptance: {passed}/{} pass, {unexpected} unexpected failures",
        lines.len()
    );
    print!("{report}");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
