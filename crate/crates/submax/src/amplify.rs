//! Multilinear amplification: wrapping the block-greedy inner oracle in
//! `ℓ = O(1/ε)` rounds over auxiliary functions derived from the multilinear
//! extension, to boost the approximation ratio; plus the discrete β-scaling
//! scheme for nonnegative functions.

use crate::baseline::sequential_greedy_metered;
use crate::block_greedy::{block_greedy, BlockGreedyResult, LambdaFloor};
use crate::constraint::IndependenceOracle;
use crate::error::{Error, Result};
use crate::estimator::EstimatorConfig;
use crate::meter::Engine;
use crate::multilinear::{aux_beta, aux_monotone, aux_nonnegative, FractionalPoint, SampleBudget};
use crate::oracle::SubmodularOracle;
use crate::rng::{derive, derive2, unit};
use crate::set::ElementSet;
use serde::{Deserialize, Serialize};

/// A convex combination of independent sets with its induced point.
#[derive(Clone, Debug, Serialize)]
pub struct FractionalSolution {
    pub parts: Vec<(ElementSet, f64)>,
    universe: usize,
}

impl FractionalSolution {
    pub fn new(universe: usize, parts: Vec<(ElementSet, f64)>) -> Self {
        Self { parts, universe }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The induced point `Σ w_i · 1_{S_i}`, truncated into the cube.
    pub fn point(&self) -> FractionalPoint {
        let mut x = FractionalPoint::zeros(self.universe);
        for (s, w) in &self.parts {
            x.add_scaled(s, *w);
        }
        x
    }

    pub fn weight_total(&self) -> f64 {
        self.parts.iter().map(|(_, w)| w).sum()
    }

    /// Check every part against the constraint.
    pub fn all_parts_independent(&self, matroid: &dyn IndependenceOracle) -> bool {
        self.parts.iter().all(|(s, _)| matroid.is_independent(s))
    }
}

/// Knobs for the amplification wrappers.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct AmplifyConfig {
    /// Number of rounds; `None` means `⌈4/ε⌉`.
    #[serde(default)]
    pub ell: Option<usize>,
    /// Inner-oracle ratio `α`; `None` means `(1−ε)/p`.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Sampling budget for the Monte Carlo auxiliary oracles.
    #[serde(default)]
    pub budget: SampleBudget,
}

impl AmplifyConfig {
    pub fn rounds(&self, eps: f64) -> usize {
        self.ell.unwrap_or((4.0 / eps).ceil() as usize).max(1)
    }

    pub fn ratio(&self, eps: f64, width: usize) -> f64 {
        self.alpha
            .unwrap_or((1.0 - eps) / width as f64)
            .clamp(0.0, 1.0)
    }
}

/// Constants of the β-scaling scheme for width-`p` matchoids.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchoidConstants {
    pub p: usize,
    pub beta: f64,
    pub ratio: f64,
}

/// `β = √(p(p+1)) − p` and the resulting ratio `2p + 1 − 2√(p(p+1))`.
pub fn matchoid_constants(p: usize) -> Result<MatchoidConstants> {
    if p < 1 {
        return Err(Error::InvalidSpec(
            "matchoid width must be at least 1".into(),
        ));
    }
    let pf = p as f64;
    let root = (pf * (pf + 1.0)).sqrt();
    Ok(MatchoidConstants {
        p,
        beta: root - pf,
        ratio: 2.0 * pf + 1.0 - 2.0 * root,
    })
}

fn greedy_value_hint(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    engine: &Engine,
) -> Result<f64> {
    let greedy = sequential_greedy_metered(matroid, f, engine)?;
    Ok(f.eval(&greedy))
}

fn nonnegative_opt_hint(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    engine: &Engine,
) -> Result<f64> {
    let greedy = greedy_value_hint(matroid, f, engine)?;
    let ids = matroid.ground().ids();
    let universe = matroid.universe();
    let singles = engine.record_batch("opt-proxy", &ids, |_, &e| {
        f.eval(&ElementSet::singleton(universe, e))
    })?;
    Ok(singles.iter().copied().fold(greedy, f64::max))
}

/// Amplify the block-greedy inner oracle for a monotone function into a
/// fractional solution of `ℓ` independent sets with weight `1/ℓ` each.
pub fn amplify_monotone(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    eps: f64,
    acfg: &AmplifyConfig,
    ecfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
) -> Result<FractionalSolution> {
    let budget = acfg.budget;
    amplify_monotone_with(
        matroid,
        f,
        eps,
        acfg,
        ecfg,
        seed,
        engine,
        |x, ell, gseed| aux_monotone(f, x, ell, &budget, gseed),
    )
}

/// Like [`amplify_monotone`] with a caller-supplied auxiliary-oracle
/// factory (e.g. an exact-extension-backed one for validation).
#[allow(clippy::too_many_arguments)]
pub fn amplify_monotone_with<G>(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    eps: f64,
    acfg: &AmplifyConfig,
    ecfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
    make_g: G,
) -> Result<FractionalSolution>
where
    G: Fn(&FractionalPoint, usize, u64) -> Result<SubmodularOracle>,
{
    if !f.is_monotone() {
        return Err(Error::Incompatible(
            "monotone amplification needs a monotone function".into(),
        ));
    }
    let ell = acfg.rounds(eps);
    let universe = matroid.universe();
    let opt_hint = greedy_value_hint(matroid, f, engine)?.max(f64::MIN_POSITIVE);
    let floor = LambdaFloor::Amplified { opt_hint };
    let mut x = FractionalPoint::zeros(universe);
    let mut parts = Vec::with_capacity(ell);
    let weight = 1.0 / ell as f64;
    for i in 0..ell {
        let g = make_g(&x, ell, derive2(seed, 41, i as u64))?;
        let inner = block_greedy(
            matroid,
            &g,
            eps,
            floor,
            ecfg,
            derive2(seed, 43, i as u64),
            engine,
        )?;
        x.add_scaled(&inner.selected, weight);
        parts.push((inner.selected, weight));
    }
    Ok(FractionalSolution::new(universe, parts))
}

/// Amplification for nonnegative functions: `ℓ` independent sets whose
/// scaled-sample union carries the guarantee.
pub fn amplify_nonnegative(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    eps: f64,
    acfg: &AmplifyConfig,
    ecfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
) -> Result<Vec<ElementSet>> {
    let budget = acfg.budget;
    amplify_nonnegative_with(
        matroid,
        f,
        eps,
        acfg,
        ecfg,
        seed,
        engine,
        |blocks, alpha, ell, gseed| aux_nonnegative(f, blocks, alpha, ell, &budget, gseed),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn amplify_nonnegative_with<G>(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    eps: f64,
    acfg: &AmplifyConfig,
    ecfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
    make_g: G,
) -> Result<Vec<ElementSet>>
where
    G: Fn(&[ElementSet], f64, usize, u64) -> Result<SubmodularOracle>,
{
    if !f.is_nonnegative() {
        return Err(Error::Incompatible(
            "nonnegative amplification needs a nonnegative function".into(),
        ));
    }
    let ell = acfg.rounds(eps);
    let alpha = acfg.ratio(eps, matroid.width());
    let opt_hint = nonnegative_opt_hint(matroid, f, engine)?.max(f64::MIN_POSITIVE);
    let floor = LambdaFloor::Amplified { opt_hint };
    let mut blocks: Vec<ElementSet> = Vec::with_capacity(ell);
    for i in 0..ell {
        let g = make_g(&blocks, alpha, ell, derive2(seed, 61, i as u64))?;
        let inner = block_greedy(
            matroid,
            &g,
            eps,
            floor,
            ecfg,
            derive2(seed, 67, i as u64),
            engine,
        )?;
        blocks.push(inner.selected);
    }
    Ok(blocks)
}

/// `J = ∪_i J_i` where `J_i` keeps each element of `sets[i]` independently
/// with probability `alpha/ell`.
pub fn sample_union(sets: &[ElementSet], alpha: f64, ell: usize, seed: u64) -> ElementSet {
    assert!(!sets.is_empty(), "need at least one set");
    let q = alpha / ell as f64;
    let mut out = ElementSet::empty(sets[0].capacity());
    for (i, s) in sets.iter().enumerate() {
        for e in s.iter() {
            if unit(seed, i as u64, e as u64) < q {
                out.insert(e);
            }
        }
    }
    out
}

/// Output of the β-scaling scheme: the block-greedy selection and the
/// β-scaled sample of it that carries the value guarantee.
#[derive(Clone, Debug, Serialize)]
pub struct BetaScaledOutcome {
    pub selected: ElementSet,
    pub rounded: ElementSet,
    pub constants: MatchoidConstants,
    pub inner: BlockGreedyResult,
}

/// Run block-greedy on `g(S) = F(β·1_S)` and sample the result at rate β.
#[allow(clippy::too_many_arguments)]
pub fn beta_scaled_solve(
    matroid: &dyn IndependenceOracle,
    f: &SubmodularOracle,
    p: usize,
    eps: f64,
    acfg: &AmplifyConfig,
    ecfg: &EstimatorConfig,
    seed: u64,
    engine: &Engine,
) -> Result<BetaScaledOutcome> {
    if !f.is_nonnegative() {
        return Err(Error::Incompatible(
            "β-scaling needs a nonnegative function".into(),
        ));
    }
    let constants = matchoid_constants(p)?;
    let opt_hint = nonnegative_opt_hint(matroid, f, engine)?.max(f64::MIN_POSITIVE);
    let g = aux_beta(f, constants.beta, &acfg.budget, derive(seed, 53))?;
    let inner = block_greedy(
        matroid,
        &g,
        eps,
        LambdaFloor::Amplified { opt_hint },
        ecfg,
        derive(seed, 57),
        engine,
    )?;
    let rounded = crate::baseline::sample_scaled(&inner.selected, constants.beta, derive(seed, 59));
    Ok(BetaScaledOutcome {
        selected: inner.selected.clone(),
        rounded,
        constants,
        inner,
    })
}
