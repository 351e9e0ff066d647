//! Multilinear extension evaluation and the sampled auxiliary functions used
//! by amplification.
//!
//! The Monte Carlo auxiliary oracles draw their randomness from stateless
//! per-sheet streams keyed by `(seed, sheet, element)`. A fixed seed therefore
//! fixes `m` "sample sheets" once and for all, and every query is answered
//! against the same sheets. This keeps each auxiliary `g` a well-defined set
//! function (the same query always returns the same value), exactly
//! normalized at the empty set, and genuinely monotone/submodular per
//! realization, not just in expectation.

use crate::error::{Error, Result};
use crate::oracle::{SetKernel, SubmodularOracle};
use crate::rng::{derive, unit};
use crate::set::ElementSet;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A point of `[0, 1]^N`. Coordinates above 1 are truncated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPoint {
    x: Vec<f64>,
}

impl FractionalPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.iter().any(|v| *v < 0.0 || v.is_nan()) {
            return Err(Error::InvalidSpec(
                "fractional coordinates must be nonnegative".into(),
            ));
        }
        Ok(Self {
            x: x.into_iter().map(|v| v.min(1.0)).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self { x: vec![0.0; n] }
    }

    pub fn indicator(s: &ElementSet) -> Self {
        let mut x = vec![0.0; s.capacity()];
        for e in s.iter() {
            x[e] = 1.0;
        }
        Self { x }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, e: usize) -> f64 {
        self.x[e]
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    /// Add `weight · 1_S`, truncating at 1.
    pub fn add_scaled(&mut self, s: &ElementSet, weight: f64) {
        for e in s.iter() {
            self.x[e] = (self.x[e] + weight).min(1.0);
        }
    }

    /// Draw `S ∼ x` from the stateless stream `(seed, sheet)`.
    pub fn sample(&self, seed: u64, sheet: u64) -> ElementSet {
        let mut s = ElementSet::empty(self.x.len());
        for (e, &xe) in self.x.iter().enumerate() {
            if xe > 0.0 && unit(seed, sheet, e as u64) < xe {
                s.insert(e);
            }
        }
        s
    }
}

/// Monte Carlo accuracy targets: `m` samples aiming at relative error
/// `eps_rel` plus additive error `gamma_add` with failure probability
/// `fail_prob`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct SampleBudget {
    pub m: usize,
    pub eps_rel: f64,
    pub gamma_add: f64,
    pub fail_prob: f64,
}

impl SampleBudget {
    pub fn new(m: usize, eps_rel: f64, gamma_add: f64, fail_prob: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidSpec("sample count must be at least 1".into()));
        }
        if eps_rel <= 0.0 || gamma_add <= 0.0 {
            return Err(Error::InvalidSpec("error targets must be positive".into()));
        }
        if !(fail_prob > 0.0 && fail_prob < 1.0) {
            return Err(Error::InvalidSpec(
                "failure probability must lie in (0,1)".into(),
            ));
        }
        Ok(Self {
            m,
            eps_rel,
            gamma_add,
            fail_prob,
        })
    }

    /// A budget with the stated sample count and loose bookkeeping targets.
    pub fn samples(m: usize) -> Self {
        Self {
            m: m.max(1),
            eps_rel: 0.25,
            gamma_add: 0.25,
            fail_prob: 0.05,
        }
    }
}

impl Default for SampleBudget {
    fn default() -> Self {
        Self::samples(256)
    }
}

/// Exact multilinear extension by enumeration of all `2^n` subsets.
/// Validation-scale only; grounds above 20 elements are rejected.
pub fn multilinear_exact(f: &SubmodularOracle, x: &FractionalPoint) -> Result<f64> {
    let n = f.n();
    if n > 20 {
        return Err(Error::TooLarge(format!("2^{n} enumeration refused")));
    }
    assert_eq!(x.len(), n);
    let mut total = 0.0;
    for mask in 0u64..1 << n {
        let mut p = 1.0;
        for (e, &xe) in x.coords().iter().enumerate() {
            p *= if mask >> e & 1 == 1 { xe } else { 1.0 - xe };
            if p == 0.0 {
                break;
            }
        }
        if p > 0.0 {
            total += p * f.eval(&ElementSet::from_mask(n, mask));
        }
    }
    Ok(total)
}

/// Monte Carlo estimate of `F(x)`: the mean of `f` over `budget.m`
/// independent samples `S ∼ x`. Deterministic for fixed `(x, m, seed)`.
pub fn multilinear_estimate(
    f: &SubmodularOracle,
    x: &FractionalPoint,
    budget: &SampleBudget,
    seed: u64,
) -> f64 {
    let m = budget.m;
    let mut acc = 0.0;
    for t in 0..m {
        acc += f.eval(&x.sample(seed, t as u64));
    }
    acc / m as f64
}

enum SheetMode {
    /// `g(S) = F(x + 1_S/ℓ) − F(x)`
    ShiftScaled { x: FractionalPoint, inv_ell: f64 },
    /// `g(S) = E[f(∪_j J_j ∪ S') − f(∪_j J_j)]`, `J_j ∼ (α/ℓ)·I_j`, `S' ∼ S/ℓ`
    ResidualUnion {
        blocks: Vec<ElementSet>,
        alpha_over_ell: f64,
        inv_ell: f64,
    },
    /// `g(S) = F(β·1_S)`
    Scaled { beta: f64 },
}

struct SheetKernel {
    base: SubmodularOracle,
    mode: SheetMode,
    m: usize,
    seed: u64,
    /// Per-sheet baseline `f`-value subtracted from each sheet's draw.
    base_vals: Vec<f64>,
}

impl SheetKernel {
    fn new(base: SubmodularOracle, mode: SheetMode, m: usize, seed: u64) -> Self {
        let mut k = Self {
            base,
            mode,
            m,
            seed,
            base_vals: Vec::new(),
        };
        k.base_vals = (0..m)
            .map(|t| k.base.eval(&k.baseline_set(t as u64)))
            .collect();
        k
    }

    fn n(&self) -> usize {
        self.base.n()
    }

    /// The sheet's random set when queried on the empty set.
    fn baseline_set(&self, t: u64) -> ElementSet {
        match &self.mode {
            SheetMode::ShiftScaled { x, .. } => x.sample(self.seed, t),
            SheetMode::ResidualUnion {
                blocks,
                alpha_over_ell,
                ..
            } => {
                let mut u = ElementSet::empty(self.n());
                for (j, block) in blocks.iter().enumerate() {
                    let lane = derive(self.seed, 1000 + j as u64);
                    for e in block.iter() {
                        if unit(lane, t, e as u64) < *alpha_over_ell {
                            u.insert(e);
                        }
                    }
                }
                u
            }
            SheetMode::Scaled { .. } => ElementSet::empty(self.n()),
        }
    }

    /// The sheet's random set when queried on `s`.
    fn query_set(&self, t: u64, s: &ElementSet) -> ElementSet {
        let mut r = self.baseline_set(t);
        match &self.mode {
            SheetMode::ShiftScaled { x, inv_ell } => {
                for e in s.iter() {
                    let u = unit(self.seed, t, e as u64);
                    if u < (x.get(e) + inv_ell).min(1.0) {
                        r.insert(e);
                    }
                }
            }
            SheetMode::ResidualUnion { inv_ell, .. } => {
                let lane = derive(self.seed, 1);
                for e in s.iter() {
                    if unit(lane, t, e as u64) < *inv_ell {
                        r.insert(e);
                    }
                }
            }
            SheetMode::Scaled { beta } => {
                for e in s.iter() {
                    if unit(self.seed, t, e as u64) < *beta {
                        r.insert(e);
                    }
                }
            }
        }
        r
    }

    /// Whether sheet `t`'s draw can differ between queries `S` and `S + e`.
    fn element_flips(&self, t: u64, e: usize) -> bool {
        match &self.mode {
            SheetMode::ShiftScaled { x, inv_ell } => {
                let u = unit(self.seed, t, e as u64);
                let xe = x.get(e);
                u >= xe && u < (xe + inv_ell).min(1.0)
            }
            SheetMode::ResidualUnion { inv_ell, .. } => {
                let lane = derive(self.seed, 1);
                unit(lane, t, e as u64) < *inv_ell
            }
            SheetMode::Scaled { beta } => unit(self.seed, t, e as u64) < *beta,
        }
    }
}

impl SetKernel for SheetKernel {
    fn value(&self, s: &ElementSet) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        let mut acc = 0.0;
        for t in 0..self.m {
            acc += self.base.eval(&self.query_set(t as u64, s)) - self.base_vals[t];
        }
        acc / self.m as f64
    }

    fn margin(&self, s: &ElementSet, e: usize) -> f64 {
        if s.contains(e) {
            return 0.0;
        }
        let mut acc = 0.0;
        for t in 0..self.m {
            if !self.element_flips(t as u64, e) {
                continue;
            }
            let r = self.query_set(t as u64, s);
            if r.contains(e) {
                continue;
            }
            acc += self.base.eval(&r.with(e)) - self.base.eval(&r);
        }
        acc / self.m as f64
    }
}

/// Auxiliary oracle `g(S)` estimating `F(x + 1_S/ℓ) − F(x)` for monotone `f`.
pub fn aux_monotone(
    f: &SubmodularOracle,
    x: &FractionalPoint,
    ell: usize,
    budget: &SampleBudget,
    seed: u64,
) -> Result<SubmodularOracle> {
    if !f.is_monotone() {
        return Err(Error::Incompatible(
            "monotone auxiliary needs a monotone function".into(),
        ));
    }
    if ell < 1 {
        return Err(Error::InvalidSpec("ell must be at least 1".into()));
    }
    assert_eq!(x.len(), f.n());
    let kernel = SheetKernel::new(
        f.clone(),
        SheetMode::ShiftScaled {
            x: x.clone(),
            inv_ell: 1.0 / ell as f64,
        },
        budget.m,
        seed,
    );
    let calls = f.calls();
    let mut g = SubmodularOracle::from_kernel(Arc::new(kernel), f.n(), true, true, true, calls);
    g.set_estimated(true);
    Ok(g)
}

/// Auxiliary oracle for nonnegative amplification:
/// `g(S) = E[f(∪_j J_j ∪ S') − f(∪_j J_j)]` with `J_j ∼ (α/ℓ)·I_j`, `S' ∼ S/ℓ`.
pub fn aux_nonnegative(
    f: &SubmodularOracle,
    blocks: &[ElementSet],
    alpha: f64,
    ell: usize,
    budget: &SampleBudget,
    seed: u64,
) -> Result<SubmodularOracle> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidSpec("alpha must lie in (0, 1]".into()));
    }
    if ell < 1 {
        return Err(Error::InvalidSpec("ell must be at least 1".into()));
    }
    let ell_f = ell as f64;
    let kernel = SheetKernel::new(
        f.clone(),
        SheetMode::ResidualUnion {
            blocks: blocks.to_vec(),
            alpha_over_ell: alpha / ell_f,
            inv_ell: 1.0 / ell_f,
        },
        budget.m,
        seed,
    );
    let calls = f.calls();
    let mut g = SubmodularOracle::from_kernel(Arc::new(kernel), f.n(), false, false, true, calls);
    g.set_estimated(true);
    Ok(g)
}

/// Auxiliary oracle `g(S)` estimating `F(β·1_S)`.
pub fn aux_beta(
    f: &SubmodularOracle,
    beta: f64,
    budget: &SampleBudget,
    seed: u64,
) -> Result<SubmodularOracle> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidSpec("beta must lie in (0, 1)".into()));
    }
    let kernel = SheetKernel::new(f.clone(), SheetMode::Scaled { beta }, budget.m, seed);
    let calls = f.calls();
    let mut g = SubmodularOracle::from_kernel(
        Arc::new(kernel),
        f.n(),
        f.is_monotone(),
        f.is_nonnegative(),
        true,
        calls,
    );
    g.set_estimated(true);
    Ok(g)
}
