//! Matchoids: independence systems assembled from matroids on sub-grounds.
//!
//! A set is independent when its intersection with every part's scope is
//! independent in that part. The span is the union of the parts' spans;
//! elements outside every scope are free and never spanned.

use crate::constraint::IndependenceOracle;
use crate::error::{Error, Result};
use crate::matroid::MatroidOracle;
use crate::meter::CallCounter;
use crate::set::ElementSet;

#[derive(Clone)]
pub struct MatchoidOracle {
    parts: Vec<(MatroidOracle, ElementSet)>,
    ground: ElementSet,
    universe: usize,
    width: usize,
}

impl MatchoidOracle {
    pub fn parts(&self) -> usize {
        self.parts.len()
    }
}

/// Compose matroids restricted to scopes into a matchoid oracle.
pub fn build_matchoid(
    universe: usize,
    parts: Vec<(MatroidOracle, ElementSet)>,
) -> Result<MatchoidOracle> {
    if parts.is_empty() {
        return Err(Error::InvalidSpec(
            "a matchoid needs at least one part".into(),
        ));
    }
    let mut membership = vec![0usize; universe];
    let parts: Vec<(MatroidOracle, ElementSet)> = parts
        .into_iter()
        .map(|(m, scope)| {
            for e in scope.iter() {
                membership[e] += 1;
            }
            let restricted = m.restrict(&scope);
            (restricted, scope)
        })
        .collect();
    let width = membership.iter().copied().max().unwrap_or(0).max(1);
    Ok(MatchoidOracle {
        parts,
        ground: ElementSet::full(universe),
        universe,
        width,
    })
}

impl IndependenceOracle for MatchoidOracle {
    fn universe(&self) -> usize {
        self.universe
    }

    fn ground(&self) -> &ElementSet {
        &self.ground
    }

    fn width(&self) -> usize {
        self.width
    }

    fn is_independent(&self, s: &ElementSet) -> bool {
        self.parts
            .iter()
            .all(|(m, scope)| m.is_independent(&s.intersection(scope)))
    }

    fn in_span(&self, s: &ElementSet, e: usize) -> bool {
        self.parts
            .iter()
            .any(|(m, scope)| scope.contains(e) && m.in_span(&s.intersection(scope), e))
    }

    fn span(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        for (m, scope) in &self.parts {
            out.union_with(&m.span(&s.intersection(scope)));
        }
        out.intersect_with(&self.ground);
        out
    }

    fn max_rank_hint(&self) -> usize {
        // greedy maximal independent set; a lower-bound proxy for the
        // maximum cardinality, within a factor `width` of it
        let mut cur = ElementSet::empty(self.universe);
        for e in self.ground.iter() {
            if self.is_independent(&cur.with(e)) {
                cur.insert(e);
            }
        }
        cur.len()
    }

    fn contract_dyn(&self, q: &ElementSet) -> Box<dyn IndependenceOracle> {
        let spanned = self.span(q);
        let parts = self
            .parts
            .iter()
            .map(|(m, scope)| (m.contract(&q.intersection(scope)), scope.clone()))
            .collect();
        let mut ground = self.ground.difference(&spanned);
        ground.subtract(q);
        Box::new(MatchoidOracle {
            parts,
            ground,
            universe: self.universe,
            width: self.width,
        })
    }

    fn restrict_dyn(&self, s: &ElementSet) -> Box<dyn IndependenceOracle> {
        let mut out = self.clone();
        out.ground.intersect_with(s);
        Box::new(out)
    }

    fn counters(&self) -> Vec<CallCounter> {
        self.parts.iter().map(|(m, _)| m.calls()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{build_constraint, ConstraintHandle, MatchoidPartSpec, MatroidSpec};

    fn s(n: usize, ids: &[usize]) -> ElementSet {
        ElementSet::from_ids(n, ids.iter().copied())
    }

    fn uniform_part(n: usize, k: usize, scope: &[usize]) -> MatchoidPartSpec {
        MatchoidPartSpec {
            matroid: MatroidSpec::Uniform { n, k },
            scope: scope.to_vec(),
        }
    }

    /// Edges of a bipartite graph as a 2-matchoid: one cap-1 part per vertex.
    fn bipartite_matchoid(a: usize, b: usize, edges: &[(usize, usize)]) -> MatchoidOracle {
        let n = edges.len();
        let mut parts = Vec::new();
        for u in 0..a {
            let scope: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, (x, _))| *x == u)
                .map(|(i, _)| i)
                .collect();
            if !scope.is_empty() {
                parts.push(uniform_part(n, 1, &scope));
            }
        }
        for v in 0..b {
            let scope: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, (_, y))| *y == v)
                .map(|(i, _)| i)
                .collect();
            if !scope.is_empty() {
                parts.push(uniform_part(n, 1, &scope));
            }
        }
        match build_constraint(&MatroidSpec::Matchoid { universe: n, parts }).unwrap() {
            ConstraintHandle::Matchoid(m) => m,
            _ => unreachable!(),
        }
    }

    fn brute_force_is_matching(edges: &[(usize, usize)], sel: &ElementSet) -> bool {
        let mut seen_l = std::collections::HashSet::new();
        let mut seen_r = std::collections::HashSet::new();
        for i in sel.iter() {
            let (u, v) = edges[i];
            if !seen_l.insert(u) || !seen_r.insert(v) {
                return false;
            }
        }
        true
    }

    #[test]
    fn single_part_behaves_as_matroid() {
        let parts = vec![uniform_part(4, 2, &[0, 1, 2, 3])];
        let h = build_constraint(&MatroidSpec::Matchoid { universe: 4, parts }).unwrap();
        let m = h.as_dyn();
        assert_eq!(m.width(), 1);
        assert!(m.is_independent(&s(4, &[0, 1])));
        assert!(!m.is_independent(&s(4, &[0, 1, 2])));
        assert_eq!(m.span(&s(4, &[0, 1])), s(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn bipartite_independence_is_matching() {
        let edges = [
            (0, 0),
            (0, 1),
            (1, 0),
            (1, 2),
            (2, 1),
            (2, 2),
            (0, 2),
            (2, 0),
        ];
        let m = bipartite_matchoid(3, 3, &edges);
        assert_eq!(m.width(), 2);
        for mask in 0u64..1 << edges.len() {
            let sel = ElementSet::from_mask(edges.len(), mask);
            assert_eq!(
                m.is_independent(&sel),
                brute_force_is_matching(&edges, &sel),
                "mask {mask:#b}"
            );
        }
    }

    #[test]
    fn path_span_covers_incident_edges() {
        // path a-b-c, e0=(a,b), e1=(b,c); parts are the per-vertex degree caps
        let parts = vec![
            uniform_part(2, 1, &[0]),
            uniform_part(2, 1, &[0, 1]),
            uniform_part(2, 1, &[1]),
        ];
        let h = build_constraint(&MatroidSpec::Matchoid { universe: 2, parts }).unwrap();
        let m = h.as_dyn();
        assert_eq!(m.width(), 2);
        assert_eq!(m.span(&s(2, &[0])), s(2, &[0, 1]));
    }

    #[test]
    fn weak_span_property_exhaustive() {
        let edges = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)];
        let m = bipartite_matchoid(3, 3, &edges);
        let n = edges.len();
        for mask in 0u64..1 << n {
            let sv = ElementSet::from_mask(n, mask);
            let self_spanned = sv.iter().any(|e| m.in_span(&sv.without(e), e));
            if !self_spanned {
                assert!(m.is_independent(&sv), "weak span property fails at {sv:?}");
            }
        }
        // span monotone
        for mask in 0u64..1 << n {
            let sv = ElementSet::from_mask(n, mask);
            let sp = m.span(&sv);
            for e in 0..n {
                if !sv.contains(e) {
                    assert!(sp.is_subset_of(&m.span(&sv.with(e))));
                }
            }
        }
    }

    #[test]
    fn free_elements_always_addable() {
        // universe has an element outside every scope
        let parts = vec![uniform_part(3, 1, &[0, 1])];
        let h = build_constraint(&MatroidSpec::Matchoid { universe: 3, parts }).unwrap();
        let m = h.as_dyn();
        assert!(m.is_independent(&s(3, &[0, 2])));
        assert!(!m.in_span(&s(3, &[0, 1]), 2));
        assert_eq!(m.max_rank_hint(), 2);
    }

    #[test]
    fn contraction_removes_spanned_scope() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let m = bipartite_matchoid(2, 2, &edges);
        let v = m.contract_dyn(&s(4, &[0])); // matched edge (0,0)
                                             // edges sharing either endpoint are gone from the ground
        assert!(!v.ground().contains(1) && !v.ground().contains(2));
        assert!(v.ground().contains(3));
        assert!(v.is_independent(&s(4, &[3])));
    }

    #[test]
    fn empty_parts_rejected() {
        assert!(build_constraint(&MatroidSpec::Matchoid {
            universe: 3,
            parts: vec![]
        })
        .is_err());
    }

    #[test]
    fn exchange_partition_exists_for_span_chains() {
        // For disjoint S_i with S_i outside span(S_1..S_{i-1}) and independent T,
        // a capacity-respecting assignment T_i with |T_i| <= p|S_i| exists.
        let edges = [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2)];
        let m = bipartite_matchoid(3, 3, &edges);
        let p = m.width();
        let n = edges.len();
        let mut rng = crate::rng::chacha(5);
        use rand::Rng;
        for _trial in 0..200 {
            // random chain of disjoint sets, each outside the span so far
            let mut chain: Vec<ElementSet> = Vec::new();
            let mut union = ElementSet::empty(n);
            for _ in 0..3 {
                let mut si = ElementSet::empty(n);
                let spanned = m.span(&union);
                for e in 0..n {
                    if !spanned.contains(e) && !union.contains(e) && rng.gen_bool(0.4) {
                        si.insert(e);
                    }
                }
                if si.is_empty() {
                    continue;
                }
                union.union_with(&si);
                chain.push(si);
            }
            if chain.is_empty() {
                continue;
            }
            // a maximal matching as T
            let mut t = ElementSet::empty(n);
            for e in 0..n {
                if m.is_independent(&t.with(e)) {
                    t.insert(e);
                }
            }
            let spanned_final = m.span(&union);
            let targets: Vec<usize> = t.intersection(&spanned_final).iter().collect();
            // bipartite feasibility: target e may go to slot i if e is outside
            // span(S_1..S_{i-1}); slot i holds p*|S_i| targets
            let k = chain.len();
            let mut prefix_spans = Vec::with_capacity(k);
            let mut u = ElementSet::empty(n);
            for si in &chain {
                prefix_spans.push(m.span(&u));
                u.union_with(si);
            }
            let caps: Vec<usize> = chain.iter().map(|si| p * si.len()).collect();
            let adj: Vec<Vec<usize>> = targets
                .iter()
                .map(|&e| (0..k).filter(|&i| !prefix_spans[i].contains(e)).collect())
                .collect();
            assert!(
                capacitated_matching_exists(&adj, &caps),
                "no exchange partition for chain {chain:?} T {t:?}"
            );
        }
    }

    fn capacitated_matching_exists(adj: &[Vec<usize>], caps: &[usize]) -> bool {
        let mut load = vec![0usize; caps.len()];
        let mut assignment: Vec<Option<usize>> = vec![None; adj.len()];
        fn try_place(
            t: usize,
            adj: &[Vec<usize>],
            caps: &[usize],
            load: &mut [usize],
            assignment: &mut [Option<usize>],
            seen: &mut [bool],
        ) -> bool {
            for &slot in &adj[t] {
                if seen[slot] {
                    continue;
                }
                seen[slot] = true;
                if load[slot] < caps[slot] {
                    load[slot] += 1;
                    assignment[t] = Some(slot);
                    return true;
                }
                for other in 0..adj.len() {
                    if assignment[other] == Some(slot)
                        && try_place(other, adj, caps, load, assignment, seen)
                    {
                        assignment[t] = Some(slot);
                        return true;
                    }
                }
            }
            false
        }
        for t in 0..adj.len() {
            let mut seen = vec![false; caps.len()];
            if !try_place(t, adj, caps, &mut load, &mut assignment, &mut seen) {
                return false;
            }
        }
        true
    }
}
