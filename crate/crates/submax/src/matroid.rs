//! Matroid oracles: uniform, partition and graphic families, with
//! contraction and restriction views.
//!
//! A view keeps the base matroid, the accumulated contraction set `Q` with
//! its cached rank, and the active ground mask. Rank queries answer
//! `rank(Q ∪ S) − rank(Q)`, so views of views flatten and all sets stay in
//! the original id space. Each oracle query bumps the base call counter once.

use crate::constraint::{IndependenceOracle, MatroidSpec};
use crate::error::{Error, Result};
use crate::meter::CallCounter;
use crate::set::ElementSet;
use std::sync::Arc;

enum Family {
    Uniform {
        k: usize,
    },
    /// `block_of[e]` is the element's block, or `usize::MAX` for elements
    /// outside every block (never constrained).
    Partition {
        block_of: Vec<usize>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        ends: Vec<(usize, usize)>,
    },
}

struct MatroidBase {
    family: Family,
    n: usize,
    calls: CallCounter,
}

impl MatroidBase {
    fn rank_raw(&self, s: &ElementSet) -> usize {
        match &self.family {
            Family::Uniform { k } => s.len().min(*k),
            Family::Partition { block_of, caps } => {
                let mut counts = vec![0usize; caps.len()];
                let mut rank = 0;
                for e in s.iter() {
                    let b = block_of[e];
                    if b == usize::MAX {
                        rank += 1;
                    } else if counts[b] < caps[b] {
                        counts[b] += 1;
                        rank += 1;
                    }
                }
                rank
            }
            Family::Graphic { vertices, ends } => {
                let mut parent: Vec<usize> = (0..*vertices).collect();
                fn find(parent: &mut [usize], mut v: usize) -> usize {
                    while parent[v] != v {
                        parent[v] = parent[parent[v]];
                        v = parent[v];
                    }
                    v
                }
                let mut rank = 0;
                for e in s.iter() {
                    let (u, v) = ends[e];
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru != rv {
                        parent[ru] = rv;
                        rank += 1;
                    }
                }
                rank
            }
        }
    }
}

/// A matroid, possibly viewed through contractions and restrictions.
#[derive(Clone)]
pub struct MatroidOracle {
    base: Arc<MatroidBase>,
    contracted: ElementSet,
    contracted_rank: usize,
    ground: ElementSet,
}

impl MatroidOracle {
    /// Rank of `S` in the current view.
    pub fn rank(&self, s: &ElementSet) -> usize {
        self.base.calls.bump(1);
        self.rank_view_raw(s)
    }

    fn rank_view_raw(&self, s: &ElementSet) -> usize {
        self.base.rank_raw(&self.contracted.union(s)) - self.contracted_rank
    }

    /// Rank of the whole (viewed) ground set.
    pub fn rank_of_ground(&self) -> usize {
        self.rank(&self.ground.clone())
    }

    pub fn batch_rank(&self, queries: &[ElementSet]) -> Vec<usize> {
        queries.iter().map(|q| self.rank(q)).collect()
    }

    pub fn batch_is_independent(&self, queries: &[ElementSet]) -> Vec<bool> {
        queries.iter().map(|q| self.is_independent(q)).collect()
    }

    pub fn batch_span(&self, queries: &[ElementSet]) -> Vec<ElementSet> {
        queries.iter().map(|q| self.span(q)).collect()
    }

    /// The view `M / Q`, with ground `N ∖ span(Q)`.
    pub fn contract(&self, q: &ElementSet) -> MatroidOracle {
        self.base.calls.bump(2);
        let contracted = self.contracted.union(q);
        let contracted_rank = self.base.rank_raw(&contracted);
        let mut ground = ElementSet::empty(self.universe());
        for e in self.ground.iter() {
            if contracted.contains(e) {
                continue;
            }
            if self.base.rank_raw(&contracted.with(e)) > contracted_rank {
                ground.insert(e);
            }
        }
        MatroidOracle {
            base: self.base.clone(),
            contracted,
            contracted_rank,
            ground,
        }
    }

    /// The view `M ∧ S`, restricting the ground set to `S`.
    pub fn restrict(&self, s: &ElementSet) -> MatroidOracle {
        MatroidOracle {
            base: self.base.clone(),
            contracted: self.contracted.clone(),
            contracted_rank: self.contracted_rank,
            ground: self.ground.intersection(s),
        }
    }

    pub fn calls(&self) -> CallCounter {
        self.base.calls.clone()
    }
}

impl IndependenceOracle for MatroidOracle {
    fn universe(&self) -> usize {
        self.base.n
    }

    fn ground(&self) -> &ElementSet {
        &self.ground
    }

    fn width(&self) -> usize {
        1
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.base.calls.bump(1);
        self.rank_view_raw(s) == s.len()
    }

    fn in_span(&self, s: &ElementSet, e: usize) -> bool {
        self.base.calls.bump(1);
        if s.contains(e) {
            return true;
        }
        let with_s = self.contracted.union(s);
        self.base.rank_raw(&with_s.with(e)) == self.base.rank_raw(&with_s)
    }

    fn span(&self, s: &ElementSet) -> ElementSet {
        self.base.calls.bump(1);
        let with_s = self.contracted.union(s);
        let r0 = self.base.rank_raw(&with_s);
        let mut out = ElementSet::empty(self.universe());
        for e in self.ground.iter() {
            if s.contains(e) || self.base.rank_raw(&with_s.with(e)) == r0 {
                out.insert(e);
            }
        }
        out
    }

    fn max_rank_hint(&self) -> usize {
        self.rank_of_ground()
    }

    fn contract_dyn(&self, q: &ElementSet) -> Box<dyn IndependenceOracle> {
        Box::new(self.contract(q))
    }

    fn restrict_dyn(&self, s: &ElementSet) -> Box<dyn IndependenceOracle> {
        Box::new(self.restrict(s))
    }

    fn counters(&self) -> Vec<CallCounter> {
        vec![self.base.calls.clone()]
    }
}

/// Build a single matroid from its spec. Matchoid specs are rejected here;
/// use [`crate::constraint::build_constraint`] for those.
pub fn build_matroid(spec: &MatroidSpec) -> Result<MatroidOracle> {
    let (family, n) = match spec {
        MatroidSpec::Uniform { n, k } => {
            if k > n {
                return Err(Error::InvalidSpec(format!(
                    "uniform rank {k} exceeds ground {n}"
                )));
            }
            (Family::Uniform { k: *k }, *n)
        }
        MatroidSpec::Partition { blocks, caps } => {
            if blocks.len() != caps.len() {
                return Err(Error::InvalidSpec("one capacity per block required".into()));
            }
            let n = blocks
                .iter()
                .flat_map(|b| b.iter())
                .max()
                .map_or(0, |m| m + 1);
            let mut block_of = vec![usize::MAX; n];
            for (b, members) in blocks.iter().enumerate() {
                for &e in members {
                    if block_of[e] != usize::MAX {
                        return Err(Error::InvalidSpec(format!("element {e} in two blocks")));
                    }
                    block_of[e] = b;
                }
            }
            (
                Family::Partition {
                    block_of,
                    caps: caps.clone(),
                },
                n,
            )
        }
        MatroidSpec::Graphic { vertices, edges } => {
            for &(u, v) in edges {
                if u >= *vertices || v >= *vertices {
                    return Err(Error::InvalidSpec("edge endpoint out of range".into()));
                }
            }
            (
                Family::Graphic {
                    vertices: *vertices,
                    ends: edges.clone(),
                },
                edges.len(),
            )
        }
        MatroidSpec::Matchoid { .. } => {
            return Err(Error::InvalidSpec(
                "matchoid is not a single matroid".into(),
            ))
        }
    };
    let base = Arc::new(MatroidBase {
        family,
        n,
        calls: CallCounter::new(),
    });
    Ok(MatroidOracle {
        ground: ElementSet::full(n),
        base,
        contracted: ElementSet::empty(n),
        contracted_rank: 0,
    })
}

#[cfg(test)]
pub(crate) fn triangle() -> MatroidOracle {
    // e0 = (0,1), e1 = (1,2), e2 = (0,2)
    build_matroid(&MatroidSpec::Graphic {
        vertices: 3,
        edges: vec![(0, 1), (1, 2), (0, 2)],
    })
    .unwrap()
}
