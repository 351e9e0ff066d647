//! Sequential baselines and desk-scale utilities: exact greedy, brute-force
//! optimum, swap rounding of fractional solutions, and scaled-set sampling.

use crate::amplify::FractionalSolution;
use crate::constraint::IndependenceOracle;
use crate::error::{Error, Result};
use crate::meter::Engine;
use crate::oracle::SubmodularOracle;
use crate::rng::unit;
use crate::set::ElementSet;
use serde::Serialize;

/// Exhaustive optimum over independent sets.
#[derive(Clone, Debug, Serialize)]
pub struct OptCertificate {
    pub best_set: ElementSet,
    pub opt_value: f64,
    pub enumerated_count: u64,
}

/// Classic greedy: repeatedly add the feasible element of maximum margin,
/// stopping when nothing feasible improves. Ties break to the smallest id.
pub fn sequential_greedy(matroid: &dyn IndependenceOracle, f: &SubmodularOracle) -> ElementSet {
    sequential_greedy_metered(matroid, f, &Engine::new()).expect("unmetered greedy")
}

/// Greedy with round accounting: two batches per step (feasibility, then
/// margins over the feasible candidates).
pub fn sequential_greedy_metered(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    engine: &Engine,
) -> Result<ElementSet> {
    let universe = matroid.universe();
    let mut current = ElementSet::empty(universe);
    let mut remaining = matroid.ground().clone();
    loop {
        let ids = remaining.ids();
        if ids.is_empty() {
            return Ok(current);
        }
        let feasible = engine.record_batch("greedy-feasible", &ids, |_, &e| {
            matroid.is_independent(&current.with(e))
        })?;
        let candidates: Vec<usize> = ids
            .iter()
            .zip(&feasible)
            .filter(|(_, ok)| **ok)
            .map(|(&e, _)| e)
            .collect();
        if candidates.is_empty() {
            return Ok(current);
        }
        let margins =
            engine.record_batch("greedy-margins", &candidates, |_, &e| f.margin(&current, e))?;
        let mut best: Option<(usize, f64)> = None;
        for (&e, &mg) in candidates.iter().zip(&margins) {
            let better = match best {
                None => true,
                Some((be, bm)) => mg > bm || (mg == bm && e < be),
            };
            if better {
                best = Some((e, mg));
            }
        }
        match best {
            Some((e, mg)) if mg > 0.0 => {
                current.insert(e);
                remaining.remove(e);
            }
            _ => return Ok(current), // nonpositive margins: stop even mid-rank
        }
    }
}

/// Enumerate all subsets of the ground set; grounds above 20 are rejected.
pub fn brute_force_opt(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
) -> Result<OptCertificate> {
    let ids = matroid.ground().ids();
    let n = ids.len();
    if n > 20 {
        return Err(Error::TooLarge(format!(
            "brute force over 2^{n} subsets refused"
        )));
    }
    let universe = matroid.universe();
    let mut best_set = ElementSet::empty(universe);
    let mut opt_value = f.eval(&best_set);
    let mut enumerated = 0u64;
    for mask in 0u64..1 << n {
        let s = ElementSet::from_ids(
            universe,
            ids.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        );
        enumerated += 1;
        if !matroid.is_independent(&s) {
            continue;
        }
        let v = f.eval(&s);
        if v > opt_value {
            opt_value = v;
            best_set = s;
        }
    }
    Ok(OptCertificate {
        best_set,
        opt_value,
        enumerated_count: enumerated,
    })
}

/// Round a convex combination of independent sets to one independent set by
/// repeated randomized pairwise exchanges. Single matroids only.
pub fn swap_round(
    matroid: &dyn IndependenceOracle,
    x: &FractionalSolution,
    seed: u64,
) -> Result<ElementSet> {
    if matroid.width() != 1 {
        return Err(Error::Incompatible(
            "swap rounding merges independent sets of a single matroid".into(),
        ));
    }
    let universe = matroid.universe();
    let mut parts: Vec<(ElementSet, f64)> = x
        .parts
        .iter()
        .filter(|(s, w)| *w > 0.0 && !s.is_empty())
        .cloned()
        .collect();
    if parts.is_empty() {
        return Ok(ElementSet::empty(universe));
    }
    let (mut acc, mut acc_w) = parts.remove(0);
    for (round, (mut other, w)) in parts.into_iter().enumerate() {
        let mut coin = 0u64;
        // grow the smaller set to the common size inside the union
        loop {
            let (small, large): (&mut ElementSet, &ElementSet) = if acc.len() < other.len() {
                (&mut acc, &other)
            } else if other.len() < acc.len() {
                (&mut other, &acc)
            } else {
                break;
            };
            let e = large
                .difference(small)
                .iter()
                .find(|&e| matroid.is_independent(&small.with(e)))
                .ok_or_else(|| {
                    Error::Precondition("augmentation failed; parts not independent?".into())
                })?;
            small.insert(e);
        }
        while acc != other {
            let e = acc.difference(&other).iter().next().expect("sets differ");
            let candidates: Vec<usize> = other
                .difference(&acc)
                .iter()
                .filter(|&d| {
                    matroid.is_independent(&acc.without(e).with(d))
                        && matroid.is_independent(&other.without(d).with(e))
                })
                .collect();
            if candidates.is_empty() {
                return Err(Error::Precondition(
                    "no valid exchange pair found; parts not independent?".into(),
                ));
            }
            let pick = candidates[(unit(seed, round as u64, coin) * candidates.len() as f64)
                as usize
                % candidates.len()];
            coin += 1;
            if unit(seed, round as u64, 1_000_000 + coin) * (acc_w + w) < acc_w {
                // keep the accumulator's element
                other.remove(pick);
                other.insert(e);
            } else {
                acc.remove(e);
                acc.insert(pick);
            }
            coin += 1;
        }
        acc_w += w;
    }
    Ok(acc)
}

/// Keep each element independently with probability `q`.
pub fn sample_scaled(set: &ElementSet, q: f64, seed: u64) -> ElementSet {
    let mut out = ElementSet::empty(set.capacity());
    for e in set.iter() {
        if unit(seed, 47, e as u64) < q {
            out.insert(e);
        }
    }
    out
}
