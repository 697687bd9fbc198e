//! Monte Carlo runs of the largest `j`-components at desk scale.
//!
//! Trial `t` samples with seed [`trial_seed`]`(base_seed, t)`, decomposes, ranks
//! components by size (ties by discovery order) and keeps the top `m`. Trials
//! run on a dedicated thread pool and are collected in trial order, so every
//! output is independent of the number of workers.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::combinatorics::TheoryParams;
use crate::enumeration::{centering, predicted_l1, predicted_order};
use crate::error::{Error, Result};
use crate::hypergraph::{j_components, sample_hypergraph};
use crate::rng::{trial_seed, RNG_ALGORITHM, SEED_MIXER};

/// Expected-edge budget per trial unless configured otherwise.
pub const DEFAULT_EDGE_BUDGET: f64 = 5e7;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub epsilon: f64,
    pub trials: u64,
    /// Number of largest components recorded per trial.
    pub m: usize,
    pub base_seed: u64,
    /// Upper limit on the expected edge count `C(n,k) p` of one trial.
    pub cap: f64,
    /// Largest admissible 5%-95% spread of the centered statistic.
    pub width: f64,
    /// Smallest admissible hypertree fraction among recorded components.
    pub threshold: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 250,
            k: 3,
            j: 2,
            epsilon: 0.3,
            trials: 300,
            m: 3,
            base_seed: 1,
            cap: DEFAULT_EDGE_BUDGET,
            width: 6.0,
            threshold: 0.95,
        }
    }
}

/// Keys accepted by [`ExperimentConfig::set`], in canonical order.
pub const CONFIG_KEYS: [&str; 10] = [
    "n",
    "k",
    "j",
    "epsilon",
    "trials",
    "m",
    "base_seed",
    "cap",
    "width",
    "threshold",
];

impl ExperimentConfig {
    // negated comparisons so that NaN is rejected
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<TheoryParams> {
        if self.trials < 1 {
            return Err(Error::validation("trials must be at least 1"));
        }
        if self.m < 1 {
            return Err(Error::validation("m must be at least 1"));
        }
        if !(self.cap > 0.0) || !(self.width > 0.0) || !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::validation(
                "cap and width must be positive, threshold in [0, 1]",
            ));
        }
        TheoryParams::new(self.n, self.k, self.j, self.epsilon)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::validation(format!("bad value {v:?} for {key}")))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "j" => self.j = num(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "base_seed" => self.base_seed = num(key, value)?,
            "cap" => self.cap = num(key, value)?,
            "width" => self.width = num(key, value)?,
            "threshold" => self.threshold = num(key, value)?,
            _ => return Err(Error::validation(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: i + 1,
                msg: "expected key = value".into(),
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
        }
        Ok(cfg)
    }

    /// The configuration as `key = value` lines that [`Self::parse`] reads back.
    pub fn to_text(&self) -> String {
        format!(
            "n = {}\nk = {}\nj = {}\nepsilon = {}\ntrials = {}\nm = {}\nbase_seed = {}\ncap = {}\nwidth = {}\nthreshold = {}\n",
            self.n, self.k, self.j, self.epsilon, self.trials, self.m, self.base_seed, self.cap,
            self.width, self.threshold
        )
    }
}

/// Dimensionless indicators of how well a finite instance mimics the
/// asymptotic hypotheses. Informational only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeProxies {
    /// `ε^4 n^j`, meant to be large.
    pub eps4_nj: f64,
    /// `ε^2 n^(k-j) / ln n`, meant to be large.
    pub eps2_nkj_over_log_n: f64,
    pub lambda: f64,
}

impl RegimeProxies {
    pub fn of(p: &TheoryParams) -> Self {
        let n = p.n as f64;
        RegimeProxies {
            eps4_nj: p.epsilon.powi(4) * n.powi(p.j as i32),
            eps2_nkj_over_log_n: p.epsilon.powi(2) * n.powi((p.k - p.j) as i32) / n.ln(),
            lambda: p.lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankedComponent {
    pub size: u64,
    pub order: u64,
    pub is_hypertree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub edges: u64,
    /// The largest components, at most `m`, by size then discovery order.
    pub top: Vec<RankedComponent>,
    pub non_hypertree_count: u64,
    /// Zero when every component is a hypertree.
    pub largest_non_hypertree: u64,
    /// Zero when no component is a hypertree.
    pub largest_hypertree: u64,
    /// Sum of sizes over all components.
    pub total_size: u64,
}

impl TrialRecord {
    /// `L_i` for `i` counted from 1; zero if the trial has fewer components.
    pub fn l(&self, i: usize) -> u64 {
        self.top.get(i - 1).map_or(0, |c| c.size)
    }
}

/// Quantiles at 5, 25, 50, 75 and 95 percent.
pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Linear-interpolation quantile (type 7) of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn quantiles(mut xs: Vec<f64>) -> [f64; 5] {
    xs.sort_by(|a, b| a.total_cmp(b));
    QUANTILE_LEVELS.map(|q| quantile(&xs, q))
}

/// Per-rank statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RankStats {
    pub i: usize,
    pub l_quantiles: [f64; 5],
    /// Quantiles of `δ L_i - (ln λ - 5/2 ln ln λ)`; absent if `λ <= e`.
    pub centered_quantiles: Option<[f64; 5]>,
    /// Among trials that have an `i`-th component; absent if none do.
    pub hypertree_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub params: TheoryParams,
    pub proxies: RegimeProxies,
    pub predicted_l1: Option<f64>,
    pub predicted_order: Option<f64>,
    pub centering: Option<f64>,
    pub ranks: Vec<RankStats>,
    /// Pooled hypertree fraction over all recorded components.
    pub hypertree_fraction_top: Option<f64>,
    /// Hypertree-flagged recorded components with `M != 1 + c0 L`.
    pub identity_violations: u64,
    /// Fraction of trials whose largest non-hypertree component (if any) is
    /// smaller than the largest hypertree component.
    pub non_hypertree_rarity: f64,
    pub mean_edges: f64,
    /// Wall-clock seconds; never part of the machine block.
    pub runtime_secs: f64,
}

fn run_trial(config: &ExperimentConfig, params: &TheoryParams, t: u64) -> Result<TrialRecord> {
    let seed = trial_seed(config.base_seed, t);
    let h = sample_hypergraph(params, seed)?;
    let d = j_components(&h, params.j)?;
    let mut comps: Vec<&crate::hypergraph::ComponentSummary> = d.components.iter().collect();
    // stable: equal sizes keep discovery order
    comps.sort_by_key(|c| std::cmp::Reverse(c.size));
    let largest = |hyper: bool| {
        comps
            .iter()
            .find(|c| c.is_hypertree == hyper)
            .map_or(0, |c| c.size)
    };
    Ok(TrialRecord {
        trial: t,
        seed,
        edges: h.len() as u64,
        top: comps
            .iter()
            .take(config.m)
            .map(|c| RankedComponent {
                size: c.size,
                order: c.order,
                is_hypertree: c.is_hypertree,
            })
            .collect(),
        non_hypertree_count: comps.iter().filter(|c| !c.is_hypertree).count() as u64,
        largest_non_hypertree: largest(false),
        largest_hypertree: largest(true),
        total_size: comps.iter().map(|c| c.size).sum(),
    })
}

/// Runs every trial on `workers` threads (at least one) and summarises.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<(Vec<TrialRecord>, ExperimentSummary)> {
    let params = config.validate()?;
    let expected_edges = params.kset_count().to_f64().unwrap_or(f64::INFINITY) * params.p;
    if expected_edges > config.cap {
        return Err(Error::resource(format!(
            "expected {expected_edges:.3e} edges per trial exceed the budget {:.3e}",
            config.cap
        )));
    }
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::resource(e.to_string()))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, &params, t))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = summarize(config, &params, &records);
    summary.runtime_secs = started.elapsed().as_secs_f64();
    Ok((records, summary))
}

/// Aggregates trial records; deterministic in its inputs.
pub fn summarize(
    config: &ExperimentConfig,
    params: &TheoryParams,
    records: &[TrialRecord],
) -> ExperimentSummary {
    let center = centering(params).ok();
    let ranks = (1..=config.m)
        .map(|i| {
            let ls: Vec<f64> = records.iter().map(|r| r.l(i) as f64).collect();
            let present: Vec<&RankedComponent> =
                records.iter().filter_map(|r| r.top.get(i - 1)).collect();
            RankStats {
                i,
                centered_quantiles: center
                    .map(|c| quantiles(ls.iter().map(|l| params.delta * l - c).collect())),
                l_quantiles: quantiles(ls),
                hypertree_fraction: (!present.is_empty()).then(|| {
                    present.iter().filter(|c| c.is_hypertree).count() as f64 / present.len() as f64
                }),
            }
        })
        .collect();
    let recorded: Vec<&RankedComponent> = records.iter().flat_map(|r| &r.top).collect();
    let identity_violations = recorded
        .iter()
        .filter(|c| c.is_hypertree && c.order != params.hypertree_order(c.size))
        .count() as u64;
    let rare = records
        .iter()
        .filter(|r| r.largest_non_hypertree < r.largest_hypertree || r.non_hypertree_count == 0)
        .count();
    let total = records.len().max(1) as f64;
    ExperimentSummary {
        config: config.clone(),
        params: *params,
        proxies: RegimeProxies::of(params),
        predicted_l1: predicted_l1(params).ok(),
        predicted_order: predicted_order(params).ok(),
        centering: center,
        ranks,
        hypertree_fraction_top: (!recorded.is_empty()).then(|| {
            recorded.iter().filter(|c| c.is_hypertree).count() as f64 / recorded.len() as f64
        }),
        identity_violations,
        non_hypertree_rarity: rare as f64 / total,
        mean_edges: records.iter().map(|r| r.edges as f64).sum::<f64>() / total,
        runtime_secs: 0.0,
    }
}

/// Writes one CSV row per (trial, i); absent components are `0,0,NA`.
pub fn write_trials_csv<W: Write>(records: &[TrialRecord], m: usize, mut w: W) -> Result<()> {
    w.write_all(trials_csv(records, m).as_bytes())?;
    Ok(())
}

pub fn trials_csv(records: &[TrialRecord], m: usize) -> String {
    let mut out = String::from("trial,seed,edges,i,L_i,M_i,hypertree\n");
    for r in records {
        for i in 1..=m {
            let (l, mm, h) = match r.top.get(i - 1) {
                Some(c) => (
                    c.size,
                    c.order,
                    if c.is_hypertree { "true" } else { "false" },
                ),
                None => (0, 0, "NA"),
            };
            let _ = writeln!(out, "{},{},{},{i},{l},{mm},{h}", r.trial, r.seed, r.edges);
        }
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), |v| v.to_string())
}

impl ExperimentSummary {
    pub fn median_l1(&self) -> f64 {
        self.ranks[0].l_quantiles[2]
    }

    /// `key=value` lines; byte-stable for a given configuration.
    pub fn machine_block(&self) -> String {
        let p = &self.params;
        let c = &self.config;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("n", c.n.to_string());
        kv("k", c.k.to_string());
        kv("j", c.j.to_string());
        kv("epsilon", c.epsilon.to_string());
        kv("trials", c.trials.to_string());
        kv("m", c.m.to_string());
        kv("base_seed", c.base_seed.to_string());
        kv("rng", RNG_ALGORITHM.to_string());
        kv("seed_mixer", SEED_MIXER.to_string());
        kv("c0", p.c0.to_string());
        kv("p0", p.p0.to_string());
        kv("p", p.p.to_string());
        kv("delta", p.delta.to_string());
        kv("lambda", p.lambda.to_string());
        kv("eps4_nj", self.proxies.eps4_nj.to_string());
        kv(
            "eps2_nkj_over_log_n",
            self.proxies.eps2_nkj_over_log_n.to_string(),
        );
        kv("predicted_L1", opt(self.predicted_l1));
        kv("predicted_M1", opt(self.predicted_order));
        kv("mean_edges", self.mean_edges.to_string());
        kv("median_L1", self.median_l1().to_string());
        let cq = self.ranks[0].centered_quantiles;
        kv("centered_p05", opt(cq.map(|q| q[0])));
        kv("centered_median", opt(cq.map(|q| q[2])));
        kv("centered_p95", opt(cq.map(|q| q[4])));
        for r in &self.ranks {
            kv(
                &format!("hypertree_frac_{}", r.i),
                opt(r.hypertree_fraction),
            );
        }
        kv("hypertree_frac_top", opt(self.hypertree_fraction_top));
        kv("identity_violations", self.identity_violations.to_string());
        kv(
            "non_hypertree_rarity",
            self.non_hypertree_rarity.to_string(),
        );
        s
    }

    /// Human-readable report.
    pub fn pretty(&self) -> String {
        let p = &self.params;
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "experiment n={} k={} j={} epsilon={} trials={} m={} base_seed={}",
            c.n, c.k, c.j, c.epsilon, c.trials, c.m, c.base_seed
        );
        let _ = writeln!(
            s,
            "theory: c0={} p0={:.6e} p={:.6e} delta={:.6} lambda={:.4}",
            p.c0, p.p0, p.p, p.delta, p.lambda
        );
        match self.predicted_l1 {
            Some(l) => {
                let _ = writeln!(
                    s,
                    "predicted L1 = {l:.3}, predicted M1 = {:.3}",
                    p.c0 as f64 * l
                );
            }
            None => {
                let _ = writeln!(s, "predicted L1 undefined (lambda <= e)");
            }
        }
        let _ = writeln!(
            s,
            "regime proxies: eps^4 n^j = {:.3}, eps^2 n^(k-j)/ln n = {:.3}, lambda = {:.3}",
            self.proxies.eps4_nj, self.proxies.eps2_nkj_over_log_n, self.proxies.lambda
        );
        let _ = writeln!(
            s,
            "rank  L_q05    L_q25    L_q50    L_q75    L_q95    centered_q05..q95    hypertree"
        );
        for r in &self.ranks {
            let l = r.l_quantiles;
            let cq = r
                .centered_quantiles
                .map_or("n/a".to_string(), |q| format!("{:+.3}..{:+.3}", q[0], q[4]));
            let hf = r
                .hypertree_fraction
                .map_or("null".to_string(), |f| format!("{f:.4}"));
            let _ = writeln!(
                s,
                "{:<5} {:<8.2} {:<8.2} {:<8.2} {:<8.2} {:<8.2} {:<20} {}",
                r.i, l[0], l[1], l[2], l[3], l[4], cq, hf
            );
        }
        let _ = writeln!(
            s,
            "identity violations: {}; largest non-hypertree below largest hypertree in {:.2}% of trials",
            self.identity_violations,
            100.0 * self.non_hypertree_rarity
        );
        s
    }
}

/// One pass/fail line of [`compare_to_theory`].
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}: {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
            })
            .collect()
    }
}

/// Minimum number of trials for a meaningful comparison.
pub const MIN_COMPARE_TRIALS: u64 = 30;

/// Checks the summary against the theory: bounded spread of the centered
/// statistic, hypertree dominance among recorded components, and the exact
/// order identity for hypertrees.
pub fn compare_to_theory(summary: &ExperimentSummary) -> Result<Verdict> {
    let c = &summary.config;
    if c.trials < MIN_COMPARE_TRIALS {
        return Err(Error::validation(format!(
            "comparison needs at least {MIN_COMPARE_TRIALS} trials, got {}",
            c.trials
        )));
    }
    let spread = summary.ranks[0].centered_quantiles.map(|q| q[4] - q[0]);
    let spread_check = Check {
        name: "centered_spread",
        passed: spread.is_some_and(|w| w <= c.width),
        detail: match spread {
            Some(w) => format!("p95 - p05 = {w:.4} (limit {})", c.width),
            None => "undefined because lambda <= e".into(),
        },
    };
    let frac = summary.hypertree_fraction_top;
    let frac_check = Check {
        name: "hypertree_fraction",
        passed: frac.is_none_or(|f| f >= c.threshold),
        detail: match frac {
            Some(f) => format!("{f:.4} of top-{} components (limit {})", c.m, c.threshold),
            None => "no components recorded".into(),
        },
    };
    let identity_check = Check {
        name: "order_identity",
        passed: summary.identity_violations == 0,
        detail: format!("{} violations of M = 1 + c0 L", summary.identity_violations),
    };
    Ok(Verdict {
        checks: vec![spread_check, frac_check, identity_check],
    })
}
