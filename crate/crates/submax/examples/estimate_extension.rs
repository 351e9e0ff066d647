//! Multilinear-extension evaluation three ways: exact enumeration, the
//! closed form for coverage, and seeded Monte Carlo at a Chernoff budget.
//!
//!     cargo run --release --example estimate_extension

use submax::reference::closed_form_multilinear;
use submax::{
    build_function, chernoff_samples, multilinear_estimate, multilinear_exact, EstimatorConfig,
    FractionalPoint, FunctionSpec, SampleBudget,
};

fn main() -> submax::Result<()> {
    let spec = FunctionSpec::Coverage {
        item_weights: vec![1.0; 3],
        covers: vec![vec![0, 1], vec![1, 2], vec![0]],
    };
    let f = build_function(&spec)?;
    let x = FractionalPoint::new(vec![0.5, 0.5, 0.0])?;

    let exact = multilinear_exact(&f, &x)?;
    let closed = closed_form_multilinear(&spec, x.coords()).unwrap();
    println!("F(x) exact by enumeration: {exact}");
    println!("F(x) closed form:          {closed}");

    let cfg = EstimatorConfig::default();
    for (eps_rel, gamma) in [(0.2, 0.1), (0.05, 0.02), (0.02, 0.005)] {
        // normalized values live in [0, f(N)]; invert the tail bound for m
        let bound = f.eval(&submax::ElementSet::full(3));
        let m = chernoff_samples(1, eps_rel, gamma / bound, 0.01, &cfg);
        let budget = SampleBudget::new(m, eps_rel, gamma, 0.01)?;
        let est = multilinear_estimate(&f, &x, &budget, 7);
        println!(
            "m = {m:>7} samples for (eps {eps_rel}, gamma {gamma}): estimate {est:.4}, error {:+.4}",
            est - exact
        );
    }

    // the estimate is a deterministic function of (x, m, seed)
    let budget = SampleBudget::samples(10_000);
    let a = multilinear_estimate(&f, &x, &budget, 123);
    let b = multilinear_estimate(&f, &x, &budget, 123);
    assert_eq!(a, b);
    println!("replay with the same seed is bit-identical: {a}");
    Ok(())
}
