//! Benchmark instance generators and the JSON instance schema.

use crate::constraint::{build_constraint, ConstraintHandle, MatchoidPartSpec, MatroidSpec};
use crate::error::{Error, Result};
use crate::oracle::{build_function, FunctionSpec, SubmodularOracle};
use crate::rng::chacha;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A matroid (or matchoid) paired with a function over the same elements.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceSpec {
    pub matroid: MatroidSpec,
    pub function: FunctionSpec,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<(ConstraintHandle, SubmodularOracle)> {
        let constraint = build_constraint(&self.matroid)?;
        let function = build_function(&self.function)?;
        let (mu, fu) = (constraint.as_dyn().universe(), function.n());
        if mu != fu {
            return Err(Error::InvalidSpec(format!(
                "matroid is over {mu} elements but the function is over {fu}"
            )));
        }
        Ok((constraint, function))
    }
}

/// Named generator families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceKind {
    /// Graphic matroid on a path whose every leg has `copies` parallel
    /// edges; unit modular weights.
    FatPath { legs: usize, copies: usize },
    /// One leg of `copies` parallel edges followed by single-edge legs,
    /// `n` edges in total; unit modular weights.
    FatTail { n: usize, copies: usize },
    /// Random coverage function under a partition constraint with `rank`
    /// unit-capacity blocks (defaults to about √n).
    RandomCoverage {
        n: usize,
        universe: usize,
        density: f64,
        #[serde(default)]
        rank: Option<usize>,
    },
    /// Random block assignment with random small capacities and random
    /// modular weights.
    RandomPartition { n: usize, blocks: usize },
    /// Erdős–Rényi-style cut instance under a uniform constraint.
    RandomCut { n: usize, edge_prob: f64 },
    /// Random bipartite graph as a 2-matchoid; unit weights per edge.
    BipartiteMatchoid { a: usize, b: usize, edges: usize },
}

/// Deterministically expand a generator into a concrete instance.
pub fn generate_instance(kind: &InstanceKind, seed: u64) -> Result<InstanceSpec> {
    match kind {
        InstanceKind::FatPath { legs, copies } => {
            if *legs == 0 || *copies == 0 {
                return Err(Error::InvalidSpec(
                    "fat path needs legs >= 1 and copies >= 1".into(),
                ));
            }
            let mut edges = Vec::with_capacity(legs * copies);
            for leg in 0..*legs {
                for _ in 0..*copies {
                    edges.push((leg, leg + 1));
                }
            }
            let n = edges.len();
            Ok(InstanceSpec {
                matroid: MatroidSpec::Graphic {
                    vertices: legs + 1,
                    edges,
                },
                function: FunctionSpec::Modular {
                    weights: vec![1.0; n],
                },
            })
        }
        InstanceKind::FatTail { n, copies } => {
            if *copies == 0 || copies > n {
                return Err(Error::InvalidSpec("fat tail needs 1 <= copies <= n".into()));
            }
            let singles = n - copies;
            let mut edges = Vec::with_capacity(*n);
            for _ in 0..*copies {
                edges.push((0, 1));
            }
            for leg in 0..singles {
                edges.push((leg + 1, leg + 2));
            }
            Ok(InstanceSpec {
                matroid: MatroidSpec::Graphic {
                    vertices: singles + 2,
                    edges,
                },
                function: FunctionSpec::Modular {
                    weights: vec![1.0; *n],
                },
            })
        }
        InstanceKind::RandomCoverage {
            n,
            universe,
            density,
            rank,
        } => {
            if *n == 0 || *universe == 0 || !(0.0..=1.0).contains(density) {
                return Err(Error::InvalidSpec("bad coverage parameters".into()));
            }
            let mut rng = chacha(seed);
            let covers: Vec<Vec<usize>> = (0..*n)
                .map(|_| {
                    let mut c: Vec<usize> =
                        (0..*universe).filter(|_| rng.gen_bool(*density)).collect();
                    if c.is_empty() {
                        c.push(rng.gen_range(0..*universe));
                    }
                    c
                })
                .collect();
            let r = rank
                .unwrap_or_else(|| (*n as f64).sqrt().round() as usize)
                .clamp(1, *n);
            let mut blocks = vec![Vec::new(); r];
            for e in 0..*n {
                blocks[e % r].push(e);
            }
            Ok(InstanceSpec {
                matroid: MatroidSpec::Partition {
                    blocks,
                    caps: vec![1; r],
                },
                function: FunctionSpec::Coverage {
                    item_weights: vec![1.0; *universe],
                    covers,
                },
            })
        }
        InstanceKind::RandomPartition { n, blocks } => {
            if *n == 0 || *blocks == 0 || blocks > n {
                return Err(Error::InvalidSpec("bad partition parameters".into()));
            }
            let mut rng = chacha(seed);
            let mut members = vec![Vec::new(); *blocks];
            for e in 0..*n {
                members[rng.gen_range(0..*blocks)].push(e);
            }
            // keep every block nonempty so the ground size is n
            for b in 0..*blocks {
                if members[b].is_empty() {
                    'steal: for other in 0..*blocks {
                        if members[other].len() > 1 {
                            let e = members[other].pop().unwrap();
                            members[b].push(e);
                            break 'steal;
                        }
                    }
                }
            }
            let caps: Vec<usize> = (0..*blocks).map(|_| rng.gen_range(1..=2)).collect();
            let weights: Vec<f64> = (0..*n).map(|_| rng.gen_range(0.5..1.5)).collect();
            Ok(InstanceSpec {
                matroid: MatroidSpec::Partition {
                    blocks: members,
                    caps,
                },
                function: FunctionSpec::Modular { weights },
            })
        }
        InstanceKind::RandomCut { n, edge_prob } => {
            if *n < 2 || !(0.0..=1.0).contains(edge_prob) {
                return Err(Error::InvalidSpec("bad cut parameters".into()));
            }
            let mut rng = chacha(seed);
            let mut edges = Vec::new();
            for u in 0..*n {
                for v in (u + 1)..*n {
                    if rng.gen_bool(*edge_prob) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            if edges.is_empty() {
                edges.push((0, 1, 1.0));
            }
            Ok(InstanceSpec {
                matroid: MatroidSpec::Uniform {
                    n: *n,
                    k: (*n / 3).max(2).min(*n),
                },
                function: FunctionSpec::Cut {
                    vertices: *n,
                    edges,
                },
            })
        }
        InstanceKind::BipartiteMatchoid { a, b, edges } => {
            if *a == 0 || *b == 0 || *edges == 0 || *edges > a * b {
                return Err(Error::InvalidSpec("bad bipartite parameters".into()));
            }
            let mut rng = chacha(seed);
            let mut chosen = std::collections::BTreeSet::new();
            while chosen.len() < *edges {
                chosen.insert((rng.gen_range(0..*a), rng.gen_range(0..*b)));
            }
            let pairs: Vec<(usize, usize)> = chosen.into_iter().collect();
            let n = pairs.len();
            let mut parts = Vec::new();
            for u in 0..*a {
                let scope: Vec<usize> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, (x, _))| *x == u)
                    .map(|(i, _)| i)
                    .collect();
                if !scope.is_empty() {
                    parts.push(MatchoidPartSpec {
                        matroid: MatroidSpec::Uniform { n, k: 1 },
                        scope,
                    });
                }
            }
            for v in 0..*b {
                let scope: Vec<usize> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, y))| *y == v)
                    .map(|(i, _)| i)
                    .collect();
                if !scope.is_empty() {
                    parts.push(MatchoidPartSpec {
                        matroid: MatroidSpec::Uniform { n, k: 1 },
                        scope,
                    });
                }
            }
            Ok(InstanceSpec {
                matroid: MatroidSpec::Matchoid { universe: n, parts },
                function: FunctionSpec::Modular {
                    weights: vec![1.0; n],
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fat_path_shape() {
        let inst = generate_instance(&InstanceKind::FatPath { legs: 5, copies: 3 }, 1).unwrap();
        let (m, f) = inst.build().unwrap();
        assert_eq!(f.n(), 15);
        assert_eq!(m.as_dyn().max_rank_hint(), 5);
    }

    #[test]
    fn fat_tail_shape() {
        let inst = generate_instance(&InstanceKind::FatTail { n: 10, copies: 4 }, 1).unwrap();
        let (m, f) = inst.build().unwrap();
        assert_eq!(f.n(), 10);
        assert_eq!(m.as_dyn().max_rank_hint(), 7);
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in [
            InstanceKind::RandomCoverage {
                n: 8,
                universe: 12,
                density: 0.3,
                rank: None,
            },
            InstanceKind::RandomPartition { n: 9, blocks: 3 },
            InstanceKind::RandomCut {
                n: 7,
                edge_prob: 0.4,
            },
            InstanceKind::BipartiteMatchoid {
                a: 3,
                b: 3,
                edges: 6,
            },
        ] {
            let a = generate_instance(&kind, 1).unwrap();
            let b = generate_instance(&kind, 1).unwrap();
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
            let c = generate_instance(&kind, 2).unwrap();
            assert_ne!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&c).unwrap()
            );
            a.build().unwrap();
        }
    }

    #[test]
    fn instance_spec_round_trips_through_json() {
        let inst = generate_instance(
            &InstanceKind::RandomCut {
                n: 6,
                edge_prob: 0.5,
            },
            3,
        )
        .unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        let back: InstanceSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let bad = InstanceSpec {
            matroid: MatroidSpec::Uniform { n: 4, k: 2 },
            function: FunctionSpec::Modular {
                weights: vec![1.0; 5],
            },
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(generate_instance(&InstanceKind::FatPath { legs: 0, copies: 2 }, 1).is_err());
        assert!(generate_instance(&InstanceKind::FatTail { n: 3, copies: 4 }, 1).is_err());
        assert!(generate_instance(
            &InstanceKind::BipartiteMatchoid {
                a: 2,
                b: 2,
                edges: 9
            },
            1
        )
        .is_err());
    }
}
