//! Chernoff-budgeted estimators for the two quantities that drive the
//! sampling-rate search, and the discretized grid search itself.
//!
//! The search evaluates the whole grid in one adaptive round. Within a
//! round, each sample shares its randomness across all grid points: the
//! sampled set at rate `δ_i` is the prefix of elements whose uniform draw
//! falls below `δ_i`. Both monitored quantities are then monotone in the
//! grid index per sample, so a sample contributes a single threshold index
//! found by binary search, and every grid point's estimate is read off one
//! cumulative histogram.

use crate::constraint::IndependenceOracle;
use crate::error::Result;
use crate::meter::Engine;
use crate::oracle::SubmodularOracle;
use crate::rng::{derive2, unit};
use crate::set::ElementSet;
use serde::{Deserialize, Serialize};

fn default_chernoff_c() -> f64 {
    2.0
}
fn default_chernoff_d() -> f64 {
    1.0 / 3.0
}
fn default_fail_poly_exp() -> i32 {
    3
}
fn default_c_grid() -> f64 {
    0.25
}
fn default_grid_scale() -> f64 {
    16.0
}
fn default_band_mult() -> f64 {
    0.125
}
fn default_band_add() -> f64 {
    0.1
}
fn default_margin_band_coeff() -> f64 {
    0.125
}

/// Tunables for the estimators and the rate search.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EstimatorConfig {
    /// Leading constant of the concentration bound.
    #[serde(default = "default_chernoff_c")]
    pub chernoff_c: f64,
    /// Exponent constant of the concentration bound.
    #[serde(default = "default_chernoff_d")]
    pub chernoff_d: f64,
    /// Target failure probability `1/n^fail_poly_exp` per search.
    #[serde(default = "default_fail_poly_exp")]
    pub fail_poly_exp: i32,
    /// Grid spacing constant: points sit at `i · c_grid · ε / (4n)`.
    #[serde(default = "default_c_grid")]
    pub c_grid: f64,
    /// Grid length constant: indices run to `grid_scale · k / (c_grid · ε)`.
    #[serde(default = "default_grid_scale")]
    pub grid_scale: f64,
    /// Relative half-band the estimates are trusted to.
    #[serde(default = "default_band_mult")]
    pub band_mult: f64,
    /// Additive half-band, in units of `ε n`.
    #[serde(default = "default_band_add")]
    pub band_add: f64,
    /// Margin comparison band for estimated oracles, in units of `ε λ`.
    #[serde(default = "default_margin_band_coeff")]
    pub margin_band_coeff: f64,
    /// Fixed per-search sample count, overriding the Chernoff budget.
    #[serde(default)]
    pub sample_override: Option<usize>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            chernoff_c: default_chernoff_c(),
            chernoff_d: default_chernoff_d(),
            fail_poly_exp: default_fail_poly_exp(),
            c_grid: default_c_grid(),
            grid_scale: default_grid_scale(),
            band_mult: default_band_mult(),
            band_add: default_band_add(),
            margin_band_coeff: default_margin_band_coeff(),
            sample_override: None,
        }
    }
}

impl EstimatorConfig {
    /// A light profile for statistical experiments: fixed small sample
    /// counts and a coarser grid. The per-search guarantee is weaker; the
    /// losses fold into reported means.
    pub fn fast() -> Self {
        Self {
            c_grid: 1.0,
            fail_poly_exp: 2,
            sample_override: Some(256),
            ..Self::default()
        }
    }

    /// The margin half-band `c·ε·λ` applied when `f` is estimated.
    pub fn margin_band(&self, f: &SubmodularOracle, eps: f64, threshold: f64) -> f64 {
        if f.is_estimated() {
            2.0 * self.margin_band_coeff * eps * threshold
        } else {
            0.0
        }
    }
}

/// Margins at or above this count as selectable at threshold `λ`.
pub fn keep_threshold(threshold: f64, eps: f64, band: f64) -> f64 {
    (1.0 - eps) * threshold - band
}

fn low_margin_cutoff(threshold: f64, eps: f64, band: f64) -> f64 {
    let tiny = 1e-12 * threshold.abs().max(1.0);
    keep_threshold(threshold, eps, band) - tiny
}

/// Smallest `m` with `c·exp(−d·eps·gamma·m/n) ≤ fail_prob`.
pub fn chernoff_samples(
    n: usize,
    eps: f64,
    gamma: f64,
    fail_prob: f64,
    cfg: &EstimatorConfig,
) -> usize {
    assert!(eps > 0.0 && gamma > 0.0 && fail_prob > 0.0 && fail_prob < 1.0 + 1e-12);
    let numer = (cfg.chernoff_c / fail_prob).ln();
    if numer <= 0.0 {
        return 1;
    }
    let m = (n as f64 * numer / (cfg.chernoff_d * eps * gamma)).ceil();
    (m as usize).max(1)
}

/// `(n/m)·Σ 1[e_i ∈ span(S_i)]` for `m` independent pairs `(S_i ∼ δN, e_i)`.
pub fn estimate_span_fraction(
    matroid: &dyn IndependenceOracle,
    delta: f64,
    m: usize,
    seed: u64,
) -> f64 {
    let ids = matroid.ground().ids();
    let n = ids.len();
    if n == 0 || delta <= 0.0 {
        return 0.0;
    }
    let universe = matroid.universe();
    let mut hits = 0u64;
    for j in 0..m {
        let sj = derive2(seed, 11, j as u64);
        let e = ids[(unit(sj, 0, 0) * n as f64) as usize % n];
        let mut s = ElementSet::empty(universe);
        for &el in &ids {
            if unit(sj, 1, el as u64) < delta {
                s.insert(el);
            }
        }
        if matroid.in_span(&s, e) {
            hits += 1;
        }
    }
    n as f64 * hits as f64 / m as f64
}

/// `(n/m)·Σ 1[f_{S_i − e_i}(e_i) below (1−ε)λ]` for pairs `(S_i ∼ δN, e_i)`.
pub fn estimate_low_margin_fraction(
    f: &SubmodularOracle,
    ground: &ElementSet,
    threshold: f64,
    eps: f64,
    delta: f64,
    m: usize,
    seed: u64,
) -> f64 {
    let ids = ground.ids();
    let n = ids.len();
    if n == 0 || delta < 0.0 {
        return 0.0;
    }
    let cutoff = low_margin_cutoff(threshold, eps, 0.0);
    let universe = ground.capacity();
    let mut hits = 0u64;
    for j in 0..m {
        let sj = derive2(seed, 13, j as u64);
        let e = ids[(unit(sj, 0, 0) * n as f64) as usize % n];
        let mut s = ElementSet::empty(universe);
        for &el in &ids {
            if el != e && unit(sj, 1, el as u64) < delta {
                s.insert(el);
            }
        }
        if f.margin(&s, e) < cutoff {
            hits += 1;
        }
    }
    n as f64 * hits as f64 / m as f64
}

/// A chosen sampling rate, with the estimates that admitted it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplingRate {
    pub delta: f64,
    pub grid_index: usize,
    pub span_estimate: f64,
    pub low_margin_estimate: f64,
}

/// One sample's contribution: the first grid index at which each monitored
/// event holds (`grid_len + 1` when it never does within the grid).
#[derive(Clone, Copy)]
pub(crate) struct ThresholdPair {
    span_idx: u32,
    low_idx: u32,
}

pub(crate) struct RateSearch<'a> {
    matroid: &'a dyn IndependenceOracle,
    f: &'a SubmodularOracle,
    ids: Vec<usize>,
    spacing: f64,
    grid_len: usize,
    cutoff: f64,
    samples: usize,
    seed: u64,
    eps: f64,
}

impl<'a> RateSearch<'a> {
    pub(crate) fn new(
        matroid: &'a dyn IndependenceOracle,
        f: &'a SubmodularOracle,
        threshold: f64,
        eps: f64,
        cfg: &EstimatorConfig,
        rank_bound: usize,
        seed: u64,
    ) -> Self {
        let ids = matroid.ground().ids();
        let n = ids.len().max(1);
        let spacing = cfg.c_grid * eps / (4.0 * n as f64);
        let by_rank = (cfg.grid_scale * rank_bound.max(1) as f64 / (cfg.c_grid * eps)).ceil();
        let by_cap = (1.0 / spacing).floor();
        let grid_len = (by_rank.min(by_cap) as usize).max(1);
        let samples = cfg.sample_override.unwrap_or_else(|| {
            let fail = (n as f64).powi(-cfg.fail_poly_exp).min(0.5);
            chernoff_samples(n, cfg.band_mult, cfg.band_add * eps * n as f64, fail, cfg)
        });
        let band = cfg.margin_band(f, eps, threshold);
        let cutoff = low_margin_cutoff(threshold, eps, band);
        Self {
            matroid,
            f,
            ids,
            spacing,
            grid_len,
            cutoff,
            samples,
            seed,
            eps,
        }
    }

    pub(crate) fn samples(&self) -> usize {
        self.samples
    }

    fn grid_index_for(&self, tau: f64) -> u32 {
        let i = (tau / self.spacing).ceil() as usize;
        i.clamp(1, self.grid_len) as u32
    }

    pub(crate) fn run_sample(&self, j: usize) -> ThresholdPair {
        let n = self.ids.len();
        let sj = derive2(self.seed, 17, j as u64);
        let e = self.ids[(unit(sj, 0, 0) * n as f64) as usize % n];
        let dmax = self.spacing * self.grid_len as f64;
        let mut changes: Vec<(f64, usize)> = self
            .ids
            .iter()
            .filter_map(|&el| {
                let u = unit(sj, 1, el as u64);
                (u < dmax).then_some((u, el))
            })
            .collect();
        changes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let beyond = (self.grid_len + 1) as u32;

        let prefix = |t: usize, skip_e: bool| {
            let mut s = ElementSet::empty(self.matroid.universe());
            for &(_, el) in &changes[..t] {
                if !(skip_e && el == e) {
                    s.insert(el);
                }
            }
            s
        };

        // first prefix length at which e is spanned
        let span_pred = |t: usize| self.matroid.in_span(&prefix(t, false), e);
        let span_idx = match first_true(changes.len(), &span_pred) {
            None => beyond,
            Some(0) => 1,
            Some(t) => self.grid_index_for(changes[t - 1].0),
        };

        // first prefix length at which the margin of e drops below the cutoff
        let low_pred = |t: usize| self.f.margin(&prefix(t, true), e) < self.cutoff;
        let low_idx = match first_true(changes.len(), &low_pred) {
            None => beyond,
            Some(0) => 1,
            Some(t) => self.grid_index_for(changes[t - 1].0),
        };

        ThresholdPair { span_idx, low_idx }
    }

    pub(crate) fn select(&self, outs: &[ThresholdPair]) -> SamplingRate {
        let m = outs.len() as f64;
        let n = self.ids.len() as f64;
        let mut span_cum = vec![0u32; self.grid_len + 2];
        let mut low_cum = vec![0u32; self.grid_len + 2];
        for o in outs {
            span_cum[o.span_idx as usize] += 1;
            low_cum[o.low_idx as usize] += 1;
        }
        for i in 1..span_cum.len() {
            span_cum[i] += span_cum[i - 1];
            low_cum[i] += low_cum[i - 1];
        }
        let cap = 0.75 * self.eps * m + 1e-9;
        let accepted = (1..=self.grid_len)
            .rev()
            .find(|&i| (span_cum[i] as f64) <= cap && (low_cum[i] as f64) <= cap);
        let grid_index = accepted.unwrap_or_else(|| {
            // rate ε/n always qualifies; fall back to its grid point
            let fb = (self.eps / (self.ids.len().max(1) as f64) / self.spacing).round() as usize;
            fb.clamp(1, self.grid_len)
        });
        SamplingRate {
            delta: grid_index as f64 * self.spacing,
            grid_index,
            span_estimate: n * span_cum[grid_index] as f64 / m,
            low_margin_estimate: n * low_cum[grid_index] as f64 / m,
        }
    }
}

/// Binary search for the smallest `t ∈ 0..=len` satisfying a monotone
/// predicate; `None` when even `len` does not.
fn first_true(len: usize, pred: &dyn Fn(usize) -> bool) -> Option<usize> {
    if !pred(len) {
        return None;
    }
    let (mut lo, mut hi) = (0usize, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Pick the largest grid rate whose span and low-margin estimates both stay
/// under `(3/4)·ε·n`, evaluating the whole grid in one adaptive round.
#[allow(clippy::too_many_arguments)]
pub fn find_delta(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    threshold: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    rank_bound: usize,
    seed: u64,
    engine: &Engine,
) -> Result<SamplingRate> {
    if matroid.ground().is_empty() {
        return Err(crate::error::Error::Precondition(
            "rate search needs a nonempty ground set".into(),
        ));
    }
    let search = RateSearch::new(matroid, f, threshold, eps, cfg, rank_bound, seed);
    let jobs: Vec<usize> = (0..search.samples()).collect();
    let outs = engine.record_batch("delta-search", &jobs, |_, &j| search.run_sample(j))?;
    Ok(search.select(&outs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::MatroidSpec;
    use crate::matroid::build_matroid;
    use crate::oracle::{build_function, FunctionSpec};
    use crate::reference::expectation_over_rate;

    #[test]
    fn chernoff_formula_pinned() {
        let cfg = EstimatorConfig::default();
        assert_eq!(chernoff_samples(100, 0.1, 10.0, 0.01, &cfg), 1590);
        let (m1, m2) = (
            chernoff_samples(100, 0.1, 10.0, 0.01, &cfg),
            chernoff_samples(200, 0.1, 10.0, 0.01, &cfg),
        );
        assert!((m2 as i64 - 2 * m1 as i64).abs() <= 1, "m1 {m1} m2 {m2}");
        // fail probability of 1 leaves only the constant term
        let m = chernoff_samples(100, 0.1, 10.0, 1.0, &cfg);
        assert!((1..1590).contains(&m));
    }

    #[test]
    fn span_fraction_zero_rate() {
        let m = build_matroid(&MatroidSpec::Uniform { n: 8, k: 3 }).unwrap();
        assert_eq!(estimate_span_fraction(&m, 0.0, 100, 1), 0.0);
    }

    #[test]
    fn span_fraction_free_matroid() {
        let m = build_matroid(&MatroidSpec::Uniform { n: 100, k: 100 }).unwrap();
        let est = estimate_span_fraction(&m, 0.1, 100_000, 2);
        assert!((est - 10.0).abs() <= 0.5, "est {est}");
    }

    #[test]
    fn span_fraction_parallel_edges() {
        // one leg of k parallel edges spans itself once any copy is sampled
        let k = 3;
        let legs = 4;
        let mut edges = Vec::new();
        for leg in 0..legs {
            for _ in 0..k {
                edges.push((leg, leg + 1));
            }
        }
        let m = build_matroid(&MatroidSpec::Graphic {
            vertices: legs + 1,
            edges,
        })
        .unwrap();
        let n = (legs * k) as f64;
        let eps = 0.3;
        let delta = eps / k as f64;
        let exact = n * (1.0 - (1.0 - delta).powi(k as i32));
        let est = estimate_span_fraction(&m, delta, 60_000, 3);
        assert!((est - exact).abs() <= 0.05 * n, "est {est} exact {exact}");
    }

    #[test]
    fn low_margin_modular_weights_above_threshold() {
        let f = build_function(&FunctionSpec::Modular {
            weights: vec![1.0; 6],
        })
        .unwrap();
        let ground = ElementSet::full(6);
        let est = estimate_low_margin_fraction(&f, &ground, 1.0, 0.2, 0.5, 5000, 4);
        assert_eq!(est, 0.0);
    }

    #[test]
    fn low_margin_duplicate_coverage() {
        // two elements covering the same unit item: the margin of one drops
        // to zero exactly when the other is sampled
        let f = build_function(&FunctionSpec::Coverage {
            item_weights: vec![1.0],
            covers: vec![vec![0], vec![0]],
        })
        .unwrap();
        let ground = ElementSet::full(2);
        let est = estimate_low_margin_fraction(&f, &ground, 1.0, 0.1, 0.5, 120_000, 5);
        assert!((est - 1.0).abs() <= 0.05, "est {est}");
    }

    fn run_search(
        matroid: &dyn IndependenceOracle,
        f: &SubmodularOracle,
        threshold: f64,
        eps: f64,
        cfg: &EstimatorConfig,
        seed: u64,
    ) -> SamplingRate {
        let engine = Engine::new();
        let k = matroid.max_rank_hint();
        find_delta(matroid, f, threshold, eps, cfg, k, seed, &engine).unwrap()
    }

    #[test]
    fn free_matroid_rate_near_three_quarters_eps() {
        let n = 12;
        let m = build_matroid(&MatroidSpec::Uniform { n, k: n }).unwrap();
        let f = build_function(&FunctionSpec::Modular {
            weights: vec![1.0; n],
        })
        .unwrap();
        let eps = 0.2;
        let rate = run_search(&m, &f, 1.0, eps, &EstimatorConfig::default(), 7);
        let spacing = 0.25 * eps / (4.0 * n as f64);
        assert!(
            (rate.delta - 0.75 * eps).abs() <= 8.0 * spacing,
            "delta {} target {}",
            rate.delta,
            0.75 * eps
        );
    }

    #[test]
    fn single_element_rate() {
        let m = build_matroid(&MatroidSpec::Uniform { n: 1, k: 1 }).unwrap();
        let f = build_function(&FunctionSpec::Modular { weights: vec![1.0] }).unwrap();
        let eps = 0.2;
        let rate = run_search(&m, &f, 1.0, eps, &EstimatorConfig::default(), 9);
        assert!(
            (rate.delta - 0.75 * eps).abs() <= 0.05,
            "delta {}",
            rate.delta
        );
    }

    #[test]
    fn fat_path_rate_scales_inverse_in_copies() {
        let copies = 4;
        let legs = 3;
        let mut edges = Vec::new();
        for leg in 0..legs {
            for _ in 0..copies {
                edges.push((leg, leg + 1));
            }
        }
        let m = build_matroid(&MatroidSpec::Graphic {
            vertices: legs + 1,
            edges,
        })
        .unwrap();
        let n = legs * copies;
        let f = build_function(&FunctionSpec::Modular {
            weights: vec![1.0; n],
        })
        .unwrap();
        let eps = 0.2;
        let rate = run_search(&m, &f, 1.0, eps, &EstimatorConfig::default(), 21);
        let target = 0.75 * eps / copies as f64;
        assert!(
            rate.delta >= 0.4 * target && rate.delta <= 2.0 * target,
            "delta {} target {target}",
            rate.delta
        );
    }

    #[test]
    fn one_round_contract() {
        let m = build_matroid(&MatroidSpec::Uniform { n: 6, k: 3 }).unwrap();
        let f = build_function(&FunctionSpec::Modular {
            weights: vec![1.0; 6],
        })
        .unwrap();
        let engine = Engine::new();
        find_delta(&m, &f, 1.0, 0.2, &EstimatorConfig::fast(), 3, 1, &engine).unwrap();
        assert_eq!(engine.rounds(), 1);
    }

    #[test]
    fn chosen_rate_satisfies_exact_conditions() {
        // exact enumeration of both expectations at the returned rate
        let cases: Vec<(MatroidOracleBox, SubmodularOracle, f64)> = vec![
            (
                Box::new(build_matroid(&MatroidSpec::Uniform { n: 6, k: 2 }).unwrap()),
                build_function(&FunctionSpec::Coverage {
                    item_weights: vec![1.0; 6],
                    covers: vec![
                        vec![0, 1],
                        vec![1, 2],
                        vec![2, 3],
                        vec![3, 4],
                        vec![4, 5],
                        vec![5, 0],
                    ],
                })
                .unwrap(),
                2.0,
            ),
            (
                Box::new(
                    build_matroid(&MatroidSpec::Graphic {
                        vertices: 4,
                        edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
                    })
                    .unwrap(),
                ),
                build_function(&FunctionSpec::Modular {
                    weights: vec![1.0; 6],
                })
                .unwrap(),
                1.0,
            ),
        ];
        for (eps, seed) in [(0.1, 5u64), (0.2, 6u64)] {
            for (m, f, lam) in &cases {
                let rate = run_search(m.as_ref(), f, *lam, eps, &EstimatorConfig::default(), seed);
                let n = m.ground().len();
                let cutoff = low_margin_cutoff(*lam, eps, 0.0);
                let span_exact = expectation_over_rate(n, rate.delta, |s| {
                    (0..n).filter(|&e| m.in_span(s, e)).count() as f64
                })
                .unwrap();
                let low_exact = expectation_over_rate(n, rate.delta, |s| {
                    (0..n)
                        .filter(|&e| f.margin(&s.without(e), e) < cutoff)
                        .count() as f64
                })
                .unwrap();
                let budget = eps * n as f64;
                assert!(span_exact <= budget + 1e-9, "span {span_exact} > {budget}");
                assert!(low_exact <= budget + 1e-9, "low {low_exact} > {budget}");
            }
        }
    }

    type MatroidOracleBox = Box<crate::matroid::MatroidOracle>;

    #[test]
    fn span_estimator_is_unbiased() {
        // mean over 200 seeds within 3 standard errors of the exact value
        let m = build_matroid(&MatroidSpec::Graphic {
            vertices: 5,
            edges: vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)],
        })
        .unwrap();
        let n = 7;
        let delta = 0.35;
        let exact = expectation_over_rate(n, delta, |s| {
            (0..n).filter(|&e| m.in_span(s, e)).count() as f64
        })
        .unwrap();
        let per_seed = 400;
        let seeds = 200;
        let vals: Vec<f64> = (0..seeds)
            .map(|seed| estimate_span_fraction(&m, delta, per_seed, seed))
            .collect();
        let mean = vals.iter().sum::<f64>() / seeds as f64;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / seeds as f64;
        let se = (var / seeds as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se + 1e-9,
            "mean {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn sensitivity_of_exact_expectations() {
        // E_δ' <= E_δ <= E_δ' + (δ−δ')·n² for both monitored quantities
        let m = build_matroid(&MatroidSpec::Graphic {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        })
        .unwrap();
        let n = 5;
        let span_count = |s: &ElementSet| (0..n).filter(|&e| m.in_span(s, e)).count() as f64;
        let mut prev = 0.0;
        let mut prev_d = 0.0;
        for i in 0..=10 {
            let d = i as f64 * 0.05;
            let cur = expectation_over_rate(n, d, span_count).unwrap();
            assert!(cur + 1e-12 >= prev, "not monotone in rate");
            assert!(cur <= prev + (d - prev_d) * (n * n) as f64 + 1e-12);
            prev = cur;
            prev_d = d;
        }
    }
}
