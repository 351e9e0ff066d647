//! The common interface over matroids and matchoids, plus buildable specs.

use crate::error::{Error, Result};
use crate::matchoid::{build_matchoid, MatchoidOracle};
use crate::matroid::{build_matroid, MatroidOracle};
use crate::meter::CallCounter;
use crate::set::ElementSet;
use serde::{Deserialize, Serialize};

/// Span/independence oracle over a ground set, queryable through views.
///
/// Matroids expose the standard span function; matchoids expose the union of
/// their parts' spans, which is weaker but still satisfies the two
/// properties the sampling analysis needs: monotonicity, and that a set with
/// no self-spanned element is independent.
pub trait IndependenceOracle: Send + Sync {
    /// Size of the element id space (ids run `0..universe()`).
    fn universe(&self) -> usize;

    /// Elements the oracle currently ranges over (shrinks under views).
    fn ground(&self) -> &ElementSet;

    /// Matchoid width `p`; 1 for a single matroid.
    fn width(&self) -> usize;

    fn is_independent(&self, s: &ElementSet) -> bool;

    /// Whether `e` is spanned by `S`.
    fn in_span(&self, s: &ElementSet, e: usize) -> bool;

    /// All ground elements spanned by `S`.
    fn span(&self, s: &ElementSet) -> ElementSet;

    /// Upper bound on the cardinality of an independent set in the current
    /// ground: the exact rank for matroids, a greedy maximal-set size for
    /// matchoids.
    fn max_rank_hint(&self) -> usize;

    fn contract_dyn(&self, q: &ElementSet) -> Box<dyn IndependenceOracle>;

    fn restrict_dyn(&self, s: &ElementSet) -> Box<dyn IndependenceOracle>;

    /// Call counters to attach to a meter.
    fn counters(&self) -> Vec<CallCounter>;
}

/// Buildable constraint families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidSpec {
    Uniform {
        n: usize,
        k: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Matchoid {
        universe: usize,
        parts: Vec<MatchoidPartSpec>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatchoidPartSpec {
    pub matroid: MatroidSpec,
    pub scope: Vec<usize>,
}

impl MatroidSpec {
    pub fn ground_size(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, .. } => *n,
            MatroidSpec::Partition { blocks, .. } => blocks
                .iter()
                .flat_map(|b| b.iter())
                .max()
                .map_or(0, |m| m + 1),
            MatroidSpec::Graphic { edges, .. } => edges.len(),
            MatroidSpec::Matchoid { universe, .. } => *universe,
        }
    }
}

/// A built constraint: either a single matroid or a matchoid.
#[derive(Clone)]
pub enum ConstraintHandle {
    Matroid(MatroidOracle),
    Matchoid(MatchoidOracle),
}

impl ConstraintHandle {
    pub fn as_dyn(&self) -> &dyn IndependenceOracle {
        match self {
            ConstraintHandle::Matroid(m) => m,
            ConstraintHandle::Matchoid(m) => m,
        }
    }

    pub fn is_matchoid(&self) -> bool {
        matches!(self, ConstraintHandle::Matchoid(_))
    }
}

/// Build any constraint spec.
pub fn build_constraint(spec: &MatroidSpec) -> Result<ConstraintHandle> {
    match spec {
        MatroidSpec::Matchoid { universe, parts } => {
            let mut built = Vec::with_capacity(parts.len());
            for p in parts {
                if matches!(p.matroid, MatroidSpec::Matchoid { .. }) {
                    return Err(Error::InvalidSpec("matchoid parts must be matroids".into()));
                }
                let m = build_matroid(&p.matroid)?;
                if m.universe() != *universe {
                    return Err(Error::InvalidSpec(format!(
                        "part ground size {} does not match universe {universe}",
                        m.universe()
                    )));
                }
                if p.scope.iter().any(|&e| e >= *universe) {
                    return Err(Error::InvalidSpec("scope element out of range".into()));
                }
                let scope = ElementSet::from_ids(*universe, p.scope.iter().copied());
                built.push((m, scope));
            }
            Ok(ConstraintHandle::Matchoid(build_matchoid(
                *universe, built,
            )?))
        }
        other => Ok(ConstraintHandle::Matroid(build_matroid(other)?)),
    }
}
