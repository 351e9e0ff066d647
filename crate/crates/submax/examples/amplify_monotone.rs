//! Amplify the half-approximate inner oracle into a near-(1-1/e) fractional
//! solution, then swap-round it to an integral independent set.
//!
//!     cargo run --release --example amplify_monotone

use submax::reference::closed_form_multilinear;
use submax::{
    amplify_monotone, brute_force_opt, build_constraint, build_function, swap_round, AmplifyConfig,
    Engine, EstimatorConfig, FunctionSpec, MatroidSpec, SampleBudget,
};

fn main() -> submax::Result<()> {
    let mspec = MatroidSpec::Uniform { n: 12, k: 4 };
    let fspec = FunctionSpec::Coverage {
        item_weights: vec![1.0; 18],
        covers: (0..12)
            .map(|e| vec![e % 18, (e * 5 + 2) % 18, (e * 7 + 4) % 18])
            .collect(),
    };
    let constraint = build_constraint(&mspec)?;
    let matroid = constraint.as_dyn();
    let f = build_function(&fspec)?;
    let opt = brute_force_opt(matroid, &f)?.opt_value;
    println!("brute-force optimum: {opt:.3}");

    let eps = 0.2;
    let acfg = AmplifyConfig {
        budget: SampleBudget::samples(128),
        ..Default::default()
    };
    let ecfg = EstimatorConfig::fast();
    let engine = Engine::new();
    let frac = amplify_monotone(matroid, &f, eps, &acfg, &ecfg, 11, &engine)?;
    println!(
        "amplified into {} independent sets, each weight {:.4}",
        frac.parts.len(),
        frac.parts[0].1
    );

    let fx = closed_form_multilinear(&fspec, frac.point().coords()).unwrap();
    println!(
        "F(x) = {:.3} ({:.1}% of OPT); the 1/2-barrier sits at {:.3}",
        fx,
        100.0 * fx / opt,
        opt / 2.0
    );

    let mut rounded_values = Vec::new();
    for seed in 0..200 {
        let set = swap_round(matroid, &frac, seed)?;
        assert!(matroid.is_independent(&set));
        rounded_values.push(f.eval(&set));
    }
    let mean = rounded_values.iter().sum::<f64>() / rounded_values.len() as f64;
    println!(
        "swap rounding: mean value {mean:.3} over {} draws",
        rounded_values.len()
    );
    Ok(())
}
