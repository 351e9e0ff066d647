//! The threshold-descending outer loop over greedy blocks.
//!
//! At each threshold the loop produces greedy blocks in the residual system
//! (the matroid contracted by everything sampled so far, with marginal
//! values against the same set) until no high-margin unspanned element
//! remains, then decays the threshold. Residual reports chain from one call
//! to the next, so within a threshold no extra scans are spent; a fresh scan
//! happens at a threshold boundary only when the sampled set changed.

use crate::constraint::IndependenceOracle;
use crate::error::{Error, Result};
use crate::estimator::{keep_threshold, EstimatorConfig};
use crate::greedy_sample::{greedy_sample, GreedyBlock};
use crate::meter::Engine;
use crate::oracle::{contract_function, SubmodularOracle};
use crate::rng::derive2;
use crate::set::ElementSet;
use serde::Serialize;

/// Coefficient of the amplified-run threshold floor `c·ε²·opt/k`.
pub const AMPLIFIED_FLOOR_COEFF: f64 = 0.125;

/// How far the threshold schedule descends.
#[derive(Clone, Copy, Debug)]
pub enum LambdaFloor {
    /// `ε · max_e f(e) / k`, always a valid floor.
    Auto,
    Fixed(f64),
    /// `c·ε²·opt_hint/k`, for runs on estimated auxiliary functions.
    Amplified {
        opt_hint: f64,
    },
}

/// Geometric threshold levels from `lambda_max` down to the first level at
/// or below `lambda_min`.
pub fn threshold_schedule(lambda_max: f64, lambda_min: f64, eps: f64) -> Vec<f64> {
    assert!(lambda_min > 0.0, "floor must be positive");
    assert!(eps > 0.0 && eps < 1.0);
    let mut levels = Vec::new();
    if lambda_max < lambda_min {
        return levels;
    }
    let mut lam = lambda_max;
    loop {
        levels.push(lam);
        if lam <= lambda_min {
            return levels;
        }
        lam *= 1.0 - eps;
    }
}

/// Per-call trace entry.
#[derive(Clone, Debug, Serialize)]
pub struct BlockTrace {
    pub threshold: f64,
    pub ground_size: usize,
    pub delta: f64,
    pub sampled: usize,
    pub kept: usize,
    pub survivors: usize,
    pub rounds: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunTrace {
    pub schedule_levels: usize,
    pub initial_scan_rounds: u64,
    pub boundary_scans: u64,
    pub calls: Vec<BlockTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockGreedyResult {
    /// The independent solution `I = ∪ I_i`.
    pub selected: ElementSet,
    /// Everything ever sampled, `∪ S_i`.
    pub sampled_union: ElementSet,
    /// The nonempty greedy blocks in selection order.
    pub blocks: Vec<GreedyBlock>,
    pub trace: RunTrace,
}

impl BlockGreedyResult {
    fn empty(universe: usize) -> Self {
        Self {
            selected: ElementSet::empty(universe),
            sampled_union: ElementSet::empty(universe),
            blocks: Vec::new(),
            trace: RunTrace::default(),
        }
    }
}

/// Run the full threshold-descending iteration.
pub fn block_greedy(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    eps: f64,
    floor: LambdaFloor,
    cfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
) -> Result<BlockGreedyResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("eps {eps} outside (0, 1)")));
    }
    let universe = matroid.universe();
    let ground0 = matroid.ground().clone();
    if ground0.is_empty() {
        return Ok(BlockGreedyResult::empty(universe));
    }

    let mut result = BlockGreedyResult::empty(universe);

    // structure probe: the rank bound used by every rate search
    let k0 = engine.record_batch("setup", &[()], |_, _| matroid.max_rank_hint())?[0].max(1);

    // initial scan doubles as the first residual report
    let ids0 = ground0.ids();
    let empty = ElementSet::empty(universe);
    let scan = engine.record_batch("residual", &ids0, |_, &e| {
        let spanned = matroid.in_span(&empty, e);
        let value = if spanned {
            f64::NEG_INFINITY
        } else {
            f.eval(&ElementSet::singleton(universe, e))
        };
        (spanned, value)
    })?;
    result.trace.initial_scan_rounds = 1;

    let mut margins = vec![f64::NEG_INFINITY; universe];
    let mut unspanned = ElementSet::empty(universe);
    let mut lambda_max = f64::NEG_INFINITY;
    for (&e, &(spanned, value)) in ids0.iter().zip(&scan) {
        if !spanned {
            unspanned.insert(e);
            margins[e] = value;
            lambda_max = lambda_max.max(value);
        }
    }
    if unspanned.is_empty() || lambda_max <= 0.0 {
        return Ok(result);
    }

    let lambda_min = match floor {
        LambdaFloor::Auto => eps * lambda_max / k0 as f64,
        LambdaFloor::Fixed(v) => v,
        LambdaFloor::Amplified { opt_hint } => {
            AMPLIFIED_FLOOR_COEFF * eps * eps * opt_hint / k0 as f64
        }
    };
    if lambda_min <= 0.0 {
        return Err(Error::Precondition(
            "threshold floor must be positive".into(),
        ));
    }
    let schedule = threshold_schedule(lambda_max, lambda_min.min(lambda_max), eps);
    result.trace.schedule_levels = schedule.len();

    let mut sampled_union = ElementSet::empty(universe);
    let mut selected = ElementSet::empty(universe);
    let mut margins_stale = false;
    let mut call_idx = 0u64;

    'levels: for &lam in &schedule {
        if unspanned.is_empty() {
            break;
        }
        if margins_stale {
            // refresh spans and margins against the current sampled set
            let ids = unspanned.ids();
            let scan = engine.record_batch("residual", &ids, |_, &e| {
                let spanned = matroid.in_span(&sampled_union, e);
                let margin = if spanned {
                    f64::NEG_INFINITY
                } else {
                    f.margin(&sampled_union, e)
                };
                (spanned, margin)
            })?;
            for (&e, &(spanned, margin)) in ids.iter().zip(&scan) {
                if spanned {
                    unspanned.remove(e);
                    margins[e] = f64::NEG_INFINITY;
                } else {
                    margins[e] = margin;
                }
            }
            result.trace.boundary_scans += 1;
            margins_stale = false;
        }

        let band = cfg.margin_band(f, eps, lam);
        let keep = keep_threshold(lam, eps, band);
        let mut candidates =
            ElementSet::from_ids(universe, unspanned.iter().filter(|&e| margins[e] >= keep));

        let mut idle_draws = 0u32;
        while !candidates.is_empty() {
            let view = matroid.contract_dyn(&sampled_union);
            let view = view.restrict_dyn(&candidates);
            let f_view = contract_function(f, &sampled_union);
            let rank_bound = if matroid.width() == 1 {
                (k0.saturating_sub(selected.len())).max(1)
            } else {
                k0
            };
            let rounds_before = engine.rounds();
            let (block, report) = greedy_sample(
                view.as_ref(),
                &f_view,
                lam,
                eps,
                cfg,
                rank_bound,
                derive2(seed, 31, call_idx),
                engine,
            )?;
            call_idx += 1;
            result.trace.calls.push(BlockTrace {
                threshold: lam,
                ground_size: candidates.len(),
                delta: block.rate.delta,
                sampled: block.sampled.len(),
                kept: block.selected.len(),
                survivors: report.after,
                rounds: engine.rounds() - rounds_before,
            });

            if block.sampled.is_empty() {
                idle_draws += 1;
                if idle_draws > 64 + (64.0 / eps) as u32 {
                    return Err(Error::Precondition(
                        "sampler repeatedly drew empty sets; rate search looks degenerate".into(),
                    ));
                }
                continue;
            }
            idle_draws = 0;

            sampled_union.union_with(&block.sampled);
            selected.union_with(&block.selected);
            for &(e, mg) in &report.margins {
                margins[e] = mg;
            }
            for e in block.sampled.iter() {
                unspanned.remove(e);
            }
            unspanned.subtract(&report.spanned);
            candidates = report.survivors.clone();
            result.blocks.push(block);
            margins_stale = true;

            if unspanned.is_empty() {
                result.selected = selected.clone();
                result.sampled_union = sampled_union.clone();
                break 'levels;
            }
        }
    }

    result.selected = selected;
    result.sampled_union = sampled_union;
    Ok(result)
}
