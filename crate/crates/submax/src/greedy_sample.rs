//! Randomized generation of greedy blocks.
//!
//! One call spends at most three adaptive rounds: the rate search (which
//! also validates the threshold precondition in the same batch), the prune
//! batch over the sampled set, and the residual batch over the ground set.
//! The returned residual report is what the outer loop feeds back in as the
//! next ground set, so repeated calls at one threshold need no extra scans.

use crate::constraint::IndependenceOracle;
use crate::error::{Error, Result};
use crate::estimator::{keep_threshold, EstimatorConfig, RateSearch, SamplingRate};
use crate::meter::Engine;
use crate::oracle::SubmodularOracle;
use crate::rng::{derive, unit};
use crate::set::ElementSet;
use serde::Serialize;

/// A random pair `(I, S)` with `I ⊆ S` independent, produced at a threshold.
#[derive(Clone, Debug, Serialize)]
pub struct GreedyBlock {
    /// The independent certificate `I`.
    pub selected: ElementSet,
    /// The full sample `S` (not necessarily independent).
    pub sampled: ElementSet,
    pub threshold: f64,
    pub eps: f64,
    pub rate: SamplingRate,
}

/// Survivors of a sample: unspanned elements whose margins stayed high.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub survivors: ElementSet,
    /// Ground elements spanned by the sample (they leave the residual).
    pub spanned: ElementSet,
    /// Margin of every unspanned ground element against the sample.
    pub margins: Vec<(usize, f64)>,
    pub before: usize,
    pub after: usize,
}

impl ResidualReport {
    fn empty(universe: usize) -> Self {
        Self {
            survivors: ElementSet::empty(universe),
            spanned: ElementSet::empty(universe),
            margins: Vec::new(),
            before: 0,
            after: 0,
        }
    }
}

/// Drop sampled elements that are spanned by, or carry little margin
/// against, the rest of the sample. The result is independent.
pub fn prune(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    sampled: &ElementSet,
    threshold: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    engine: &Engine,
) -> Result<ElementSet> {
    let keep = keep_threshold(threshold, eps, cfg.margin_band(f, eps, threshold));
    let ids = sampled.ids();
    let checks = engine.record_batch("prune", &ids, |_, &e| {
        let rest = sampled.without(e);
        (matroid.in_span(&rest, e), f.margin(&rest, e))
    })?;
    let mut kept = ElementSet::empty(sampled.capacity());
    for (&e, &(spanned, margin)) in ids.iter().zip(&checks) {
        if !spanned && margin >= keep {
            kept.insert(e);
        }
    }
    Ok(kept)
}

/// Measure the residual ground set after a sample: spans are exact, margins
/// are compared against the banded threshold.
pub fn residual(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    sampled: &ElementSet,
    threshold: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    engine: &Engine,
) -> Result<ResidualReport> {
    let keep = keep_threshold(threshold, eps, cfg.margin_band(f, eps, threshold));
    let ids = matroid.ground().ids();
    let universe = matroid.universe();
    let checks = engine.record_batch("residual", &ids, |_, &e| {
        let spanned = matroid.in_span(sampled, e);
        let margin = if spanned {
            f64::NEG_INFINITY
        } else {
            f.margin(sampled, e)
        };
        (spanned, margin)
    })?;
    let mut report = ResidualReport::empty(universe);
    report.before = ids.len();
    for (&e, &(spanned, margin)) in ids.iter().zip(&checks) {
        if spanned {
            report.spanned.insert(e);
        } else {
            report.margins.push((e, margin));
            if margin >= keep {
                report.survivors.insert(e);
            }
        }
    }
    report.after = report.survivors.len();
    Ok(report)
}

/// Produce one greedy block at threshold `λ`, along with the residual report
/// for the next iteration.
#[allow(clippy::too_many_arguments)]
pub fn greedy_sample(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    threshold: f64,
    eps: f64,
    cfg: &EstimatorConfig,
    rank_bound: usize,
    seed: u64,
    engine: &Engine,
) -> Result<(GreedyBlock, ResidualReport)> {
    if threshold < 0.0 {
        return Err(Error::Precondition("threshold must be nonnegative".into()));
    }
    let universe = matroid.universe();
    let ids = matroid.ground().ids();
    if ids.is_empty() {
        let block = GreedyBlock {
            selected: ElementSet::empty(universe),
            sampled: ElementSet::empty(universe),
            threshold,
            eps,
            rate: SamplingRate {
                delta: 0.0,
                grid_index: 0,
                span_estimate: 0.0,
                low_margin_estimate: 0.0,
            },
        };
        return Ok((block, ResidualReport::empty(universe)));
    }

    // rate search and singleton validation share one round
    let search = RateSearch::new(matroid, f, threshold, eps, cfg, rank_bound, seed);
    let jobs: Vec<usize> = (0..search.samples()).collect();
    let (outs, singles) = engine.record_batch_pair(
        "delta-search",
        &jobs,
        |_, &j| search.run_sample(j),
        &ids,
        |_, &e| f.eval(&ElementSet::singleton(universe, e)),
    )?;
    let slop = if f.is_estimated() { eps / 4.0 } else { 1e-9 };
    let cap = threshold * (1.0 + slop) + 1e-12;
    for (&e, &v) in ids.iter().zip(&singles) {
        if v > cap {
            return Err(Error::Precondition(format!(
                "element {e} has value {v}, above the threshold {threshold}"
            )));
        }
    }
    let rate = search.select(&outs);

    let mut sampled = ElementSet::empty(universe);
    let draw = derive(seed, 23);
    for &e in &ids {
        if unit(draw, 0, e as u64) < rate.delta {
            sampled.insert(e);
        }
    }

    if sampled.is_empty() {
        // nothing changed: the residual is the ground set as validated
        let keep = keep_threshold(threshold, eps, cfg.margin_band(f, eps, threshold));
        let mut report = ResidualReport::empty(universe);
        report.before = ids.len();
        for (&e, &v) in ids.iter().zip(&singles) {
            report.margins.push((e, v));
            if v >= keep {
                report.survivors.insert(e);
            }
        }
        report.after = report.survivors.len();
        let block = GreedyBlock {
            selected: ElementSet::empty(universe),
            sampled,
            threshold,
            eps,
            rate,
        };
        return Ok((block, report));
    }

    let selected = prune(matroid, f, &sampled, threshold, eps, cfg, engine)?;
    let report = residual(matroid, f, &sampled, threshold, eps, cfg, engine)?;
    let block = GreedyBlock {
        selected,
        sampled,
        threshold,
        eps,
        rate,
    };
    Ok((block, report))
}
