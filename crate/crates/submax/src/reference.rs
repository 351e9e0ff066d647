//! Reference evaluators for validation at small scale: exact expectations by
//! enumeration and closed-form multilinear extensions for the built-in
//! families. These are test oracles, not production fast paths.

use crate::error::{Error, Result};
use crate::multilinear::FractionalPoint;
use crate::oracle::{FunctionSpec, SubmodularOracle};
use crate::set::ElementSet;

/// Exact `E[g(S)]` for `S` sampling each of `0..n` with probability `rate`,
/// by enumerating all `2^n` outcomes.
pub fn expectation_over_rate<F>(n: usize, rate: f64, g: F) -> Result<f64>
where
    F: Fn(&ElementSet) -> f64,
{
    let x = FractionalPoint::new(vec![rate; n])?;
    expectation_over_point(&x, g)
}

/// Exact `E[g(S)]` for `S ∼ x`, by enumerating all outcomes.
pub fn expectation_over_point<F>(x: &FractionalPoint, g: F) -> Result<f64>
where
    F: Fn(&ElementSet) -> f64,
{
    let n = x.len();
    if n > 20 {
        return Err(Error::TooLarge(format!("2^{n} enumeration refused")));
    }
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
            total += p * g(&ElementSet::from_mask(n, mask));
        }
    }
    Ok(total)
}

/// Closed-form multilinear extension for families where independence
/// factorizes per item or edge. `None` for families without one.
pub fn closed_form_multilinear(spec: &FunctionSpec, x: &[f64]) -> Option<f64> {
    match spec {
        FunctionSpec::Coverage {
            item_weights,
            covers,
        } => {
            let mut total = 0.0;
            for (i, w) in item_weights.iter().enumerate() {
                let mut miss = 1.0;
                for (e, c) in covers.iter().enumerate() {
                    if c.contains(&i) {
                        miss *= 1.0 - x[e];
                    }
                }
                total += w * (1.0 - miss);
            }
            Some(total)
        }
        FunctionSpec::Cut { edges, .. } => Some(
            edges
                .iter()
                .map(|&(u, v, w)| w * (x[u] * (1.0 - x[v]) + x[v] * (1.0 - x[u])))
                .sum(),
        ),
        FunctionSpec::Modular { weights } => {
            Some(weights.iter().zip(x).map(|(w, xe)| w * xe).sum())
        }
        FunctionSpec::ConcaveOfModular { .. } => None,
    }
}

/// Exact-extension-backed auxiliary oracle `g(S) = F(x + 1_S/ℓ) − F(x)`,
/// available for families with a closed-form extension.
pub fn exact_shift_oracle(
    spec: &FunctionSpec,
    x: &FractionalPoint,
    ell: usize,
) -> Option<SubmodularOracle> {
    let n = spec.ground_size();
    let base_x: Vec<f64> = x.coords().to_vec();
    let f0 = closed_form_multilinear(spec, &base_x)?;
    let spec = spec.clone();
    let inv_ell = 1.0 / ell as f64;
    Some(SubmodularOracle::from_fn(n, true, true, move |s| {
        let mut y = base_x.clone();
        for e in s.iter() {
            y[e] = (y[e] + inv_ell).min(1.0);
        }
        closed_form_multilinear(&spec, &y).unwrap() - f0
    }))
}

/// Exact `g(S) = F(β·1_S)` via the closed-form extension.
pub fn exact_scaled_oracle(spec: &FunctionSpec, beta: f64) -> Option<SubmodularOracle> {
    let n = spec.ground_size();
    closed_form_multilinear(spec, &vec![0.0; n])?;
    let spec = spec.clone();
    Some(SubmodularOracle::from_fn(n, false, true, move |s| {
        let mut y = vec![0.0; n];
        for e in s.iter() {
            y[e] = beta;
        }
        closed_form_multilinear(&spec, &y).unwrap()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::multilinear_exact;
    use crate::oracle::build_function;
    use rand::Rng;

    fn specs() -> Vec<FunctionSpec> {
        vec![
            FunctionSpec::Coverage {
                item_weights: vec![1.0, 0.5, 2.0, 1.5],
                covers: vec![vec![0, 1], vec![1, 2], vec![0, 3], vec![2]],
            },
            FunctionSpec::Cut {
                vertices: 4,
                edges: vec![(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (3, 0, 1.0)],
            },
            FunctionSpec::Modular {
                weights: vec![0.3, 1.2, 0.7, 2.0],
            },
        ]
    }

    #[test]
    fn closed_forms_match_enumeration() {
        let mut rng = crate::rng::chacha(71);
        for spec in specs() {
            let f = build_function(&spec).unwrap();
            for _ in 0..25 {
                let x: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
                let cf = closed_form_multilinear(&spec, &x).unwrap();
                let fx = FractionalPoint::new(x).unwrap();
                let exact = multilinear_exact(&f, &fx).unwrap();
                assert!((cf - exact).abs() < 1e-10, "{spec:?}: {cf} vs {exact}");
            }
        }
    }

    #[test]
    fn expectation_over_rate_matches_point() {
        let f = build_function(&FunctionSpec::Modular {
            weights: vec![1.0, 2.0, 4.0],
        })
        .unwrap();
        let by_rate = expectation_over_rate(3, 0.25, |s| f.eval(s)).unwrap();
        assert!((by_rate - 0.25 * 7.0).abs() < 1e-12);
    }

    #[test]
    fn shift_oracle_matches_sampled_definition() {
        let spec = &specs()[0];
        let f = build_function(spec).unwrap();
        let x = FractionalPoint::new(vec![0.25, 0.0, 0.5, 0.1]).unwrap();
        let g = exact_shift_oracle(spec, &x, 4).unwrap();
        for mask in 0u64..16 {
            let sv = ElementSet::from_mask(4, mask);
            let mut y = x.clone();
            y.add_scaled(&sv, 0.25);
            let want = multilinear_exact(&f, &y).unwrap() - multilinear_exact(&f, &x).unwrap();
            assert!((g.eval(&sv) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn lovasz_floor_holds_for_nonnegative_functions() {
        // E[f(S ∪ T)] >= (1 - max_e P(e in S)) f(T) for nonnegative submodular f
        let mut rng = crate::rng::chacha(13);
        let cut = build_function(&FunctionSpec::Cut {
            vertices: 6,
            edges: vec![
                (0, 1, 1.0),
                (1, 2, 2.0),
                (2, 3, 1.0),
                (3, 4, 0.5),
                (4, 5, 1.5),
                (5, 0, 1.0),
                (0, 3, 1.0),
            ],
        })
        .unwrap();
        let cov = build_function(&FunctionSpec::Coverage {
            item_weights: vec![1.0; 5],
            covers: vec![
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![4, 0],
                vec![0, 2],
            ],
        })
        .unwrap();
        for f in [cut, cov] {
            let n = f.n();
            for _ in 0..30 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.9)).collect();
                let delta = x.iter().cloned().fold(0.0, f64::max);
                let t = ElementSet::from_mask(n, rng.gen_range(0..1u64 << n));
                let fp = FractionalPoint::new(x).unwrap();
                let lhs = expectation_over_point(&fp, |s| f.eval(&s.union(&t))).unwrap();
                assert!(lhs >= (1.0 - delta) * f.eval(&t) - 1e-9);
            }
        }
    }
}
