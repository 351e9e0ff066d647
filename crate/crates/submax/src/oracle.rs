//! Submodular set-function oracles.
//!
//! [`SubmodularOracle`] is a handle around an evaluation kernel plus the
//! flags algorithms need (`monotone`, `nonnegative`, `estimated`). Marginal
//! ("contracted") views share the base kernel: a contraction by `Q` stores
//! `Q` and the cached value `f(Q)`, so `f_Q(U) = f(Q ∪ U) − f(Q)` costs one
//! kernel evaluation per query and contractions of contractions flatten.
//!
//! Every kernel evaluation bumps the oracle's [`CallCounter`], which is what
//! the engine snapshots for per-round query accounting.

use crate::error::{Error, Result};
use crate::meter::CallCounter;
use crate::set::{ElementSet, GroundSet};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Buildable function families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Weighted coverage: element `e` covers the item ids in `covers[e]`.
    Coverage {
        item_weights: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    /// Weighted graph cut; elements are vertices.
    Cut {
        vertices: usize,
        edges: Vec<(usize, usize, f64)>,
    },
    /// Additive weights.
    Modular { weights: Vec<f64> },
    /// `(Σ_{e∈S} w_e)^q` for `q ∈ (0, 1]`.
    ConcaveOfModular { weights: Vec<f64>, exponent: f64 },
}

impl FunctionSpec {
    pub fn ground_size(&self) -> usize {
        match self {
            FunctionSpec::Coverage { covers, .. } => covers.len(),
            FunctionSpec::Cut { vertices, .. } => *vertices,
            FunctionSpec::Modular { weights } => weights.len(),
            FunctionSpec::ConcaveOfModular { weights, .. } => weights.len(),
        }
    }
}

pub(crate) trait SetKernel: Send + Sync {
    fn value(&self, s: &ElementSet) -> f64;

    fn margin(&self, s: &ElementSet, e: usize) -> f64 {
        if s.contains(e) {
            return 0.0;
        }
        self.value(&s.with(e)) - self.value(s)
    }
}

/// A normalized submodular set function with batched evaluation and call
/// metering.
#[derive(Clone)]
pub struct SubmodularOracle {
    kernel: Arc<dyn SetKernel>,
    ground: GroundSet,
    shift: ElementSet,
    offset: f64,
    monotone: bool,
    nonnegative: bool,
    estimated: bool,
    calls: CallCounter,
}

impl SubmodularOracle {
    pub(crate) fn from_kernel(
        kernel: Arc<dyn SetKernel>,
        n: usize,
        monotone: bool,
        nonnegative: bool,
        estimated: bool,
        calls: CallCounter,
    ) -> Self {
        Self {
            kernel,
            ground: GroundSet::new(n),
            shift: ElementSet::empty(n),
            offset: 0.0,
            monotone,
            nonnegative,
            estimated,
            calls,
        }
    }

    /// Wrap an arbitrary normalized set function (testing and custom
    /// estimators). The closure must return 0 on the empty set.
    pub fn from_fn<F>(n: usize, monotone: bool, nonnegative: bool, f: F) -> Self
    where
        F: Fn(&ElementSet) -> f64 + Send + Sync + 'static,
    {
        let calls = CallCounter::new();
        let kernel = FnKernel {
            f,
            calls: calls.clone(),
        };
        Self::from_kernel(Arc::new(kernel), n, monotone, nonnegative, false, calls)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    /// True when values come from Monte Carlo estimation rather than exact
    /// evaluation; thresholded comparisons then apply an error band.
    pub fn is_estimated(&self) -> bool {
        self.estimated
    }

    pub(crate) fn set_estimated(&mut self, v: bool) {
        self.estimated = v;
    }

    pub fn calls(&self) -> CallCounter {
        self.calls.clone()
    }

    pub fn eval(&self, s: &ElementSet) -> f64 {
        if self.shift.is_empty() {
            self.kernel.value(s)
        } else {
            self.kernel.value(&self.shift.union(s)) - self.offset
        }
    }

    /// `f(S + e) − f(S)`; kernels may answer this more cheaply than two
    /// full evaluations.
    pub fn margin(&self, s: &ElementSet, e: usize) -> f64 {
        if self.shift.is_empty() {
            self.kernel.margin(s, e)
        } else if self.shift.contains(e) {
            0.0
        } else {
            self.kernel.margin(&self.shift.union(s), e)
        }
    }

    /// Element-wise [`Self::eval`] over `queries`.
    pub fn batch_eval(&self, queries: &[ElementSet]) -> Vec<f64> {
        queries.iter().map(|q| self.eval(q)).collect()
    }
}

struct FnKernel<F> {
    f: F,
    calls: CallCounter,
}

impl<F> SetKernel for FnKernel<F>
where
    F: Fn(&ElementSet) -> f64 + Send + Sync,
{
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.bump(1);
        (self.f)(s)
    }
}

/// Marginal value of `U` to `Q`: `f(Q ∪ U) − f(Q)`. Two evaluations.
pub fn marginal(f: &SubmodularOracle, q: &ElementSet, u: &ElementSet) -> f64 {
    f.eval(&q.union(u)) - f.eval(q)
}

/// The contracted function `f_Q`. Monotonicity is inherited; the result is
/// only known nonnegative when `f` is monotone.
pub fn contract_function(f: &SubmodularOracle, q: &ElementSet) -> SubmodularOracle {
    let shift = f.shift.union(q);
    let offset = f.kernel.value(&shift);
    SubmodularOracle {
        kernel: f.kernel.clone(),
        ground: f.ground,
        shift,
        offset,
        monotone: f.monotone,
        nonnegative: f.monotone,
        estimated: f.estimated,
        calls: f.calls.clone(),
    }
}

/// Build one of the concrete function families.
pub fn build_function(spec: &FunctionSpec) -> Result<SubmodularOracle> {
    match spec {
        FunctionSpec::Coverage {
            item_weights,
            covers,
        } => {
            if item_weights.iter().any(|w| *w < 0.0) {
                return Err(Error::InvalidSpec(
                    "coverage item weights must be nonnegative".into(),
                ));
            }
            let items = item_weights.len();
            let mut masks = Vec::with_capacity(covers.len());
            for c in covers {
                if c.iter().any(|&i| i >= items) {
                    return Err(Error::InvalidSpec(format!(
                        "covered item out of range (universe {items})"
                    )));
                }
                masks.push(ElementSet::from_ids(items, c.iter().copied()));
            }
            let calls = CallCounter::new();
            let kernel = CoverageKernel {
                item_weights: item_weights.clone(),
                covers: masks,
                calls: calls.clone(),
            };
            Ok(SubmodularOracle::from_kernel(
                Arc::new(kernel),
                covers.len(),
                true,
                true,
                false,
                calls,
            ))
        }
        FunctionSpec::Cut { vertices, edges } => {
            for &(u, v, w) in edges {
                if u >= *vertices || v >= *vertices {
                    return Err(Error::InvalidSpec("cut edge endpoint out of range".into()));
                }
                if w < 0.0 {
                    return Err(Error::InvalidSpec(
                        "cut edge weights must be nonnegative".into(),
                    ));
                }
            }
            let calls = CallCounter::new();
            let kernel = CutKernel {
                edges: edges.clone(),
                calls: calls.clone(),
            };
            Ok(SubmodularOracle::from_kernel(
                Arc::new(kernel),
                *vertices,
                false,
                true,
                false,
                calls,
            ))
        }
        FunctionSpec::Modular { weights } => {
            if weights.iter().any(|w| *w < 0.0) {
                return Err(Error::InvalidSpec(
                    "modular weights must be nonnegative".into(),
                ));
            }
            let calls = CallCounter::new();
            let kernel = ModularKernel {
                weights: weights.clone(),
                calls: calls.clone(),
            };
            Ok(SubmodularOracle::from_kernel(
                Arc::new(kernel),
                weights.len(),
                true,
                true,
                false,
                calls,
            ))
        }
        FunctionSpec::ConcaveOfModular { weights, exponent } => {
            if weights.iter().any(|w| *w < 0.0) {
                return Err(Error::InvalidSpec(
                    "modular weights must be nonnegative".into(),
                ));
            }
            if !(*exponent > 0.0 && *exponent <= 1.0) {
                return Err(Error::InvalidSpec("exponent must lie in (0, 1]".into()));
            }
            let calls = CallCounter::new();
            let kernel = ConcaveKernel {
                weights: weights.clone(),
                exponent: *exponent,
                calls: calls.clone(),
            };
            Ok(SubmodularOracle::from_kernel(
                Arc::new(kernel),
                weights.len(),
                true,
                true,
                false,
                calls,
            ))
        }
    }
}

struct CoverageKernel {
    item_weights: Vec<f64>,
    covers: Vec<ElementSet>,
    calls: CallCounter,
}

impl SetKernel for CoverageKernel {
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.bump(1);
        let items = self.item_weights.len();
        let mut covered = ElementSet::empty(items);
        for e in s.iter() {
            covered.union_with(&self.covers[e]);
        }
        covered.iter().map(|i| self.item_weights[i]).sum()
    }
}

struct CutKernel {
    edges: Vec<(usize, usize, f64)>,
    calls: CallCounter,
}

impl SetKernel for CutKernel {
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.bump(1);
        self.edges
            .iter()
            .filter(|(u, v, _)| s.contains(*u) != s.contains(*v))
            .map(|(_, _, w)| w)
            .sum()
    }
}

struct ModularKernel {
    weights: Vec<f64>,
    calls: CallCounter,
}

impl SetKernel for ModularKernel {
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.bump(1);
        s.iter().map(|e| self.weights[e]).sum()
    }

    fn margin(&self, s: &ElementSet, e: usize) -> f64 {
        self.calls.bump(1);
        if s.contains(e) {
            0.0
        } else {
            self.weights[e]
        }
    }
}

struct ConcaveKernel {
    weights: Vec<f64>,
    exponent: f64,
    calls: CallCounter,
}

impl SetKernel for ConcaveKernel {
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.bump(1);
        let sum: f64 = s.iter().map(|e| self.weights[e]).sum();
        sum.powf(self.exponent)
    }
}

#[cfg(test)]
pub(crate) fn abc_coverage() -> SubmodularOracle {
    // A -> {u1, u2}, B -> {u2, u3}, C -> {u1}, unit weights
    build_function(&FunctionSpec::Coverage {
        item_weights: vec![1.0; 3],
        covers: vec![vec![0, 1], vec![1, 2], vec![0]],
    })
    .unwrap()
}
