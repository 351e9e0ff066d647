//! Non-monotone maximization on a graph cut: the β-scaling scheme and the
//! nonnegative amplification wrapper, both on top of block-greedy.
//!
//!     cargo run --release --example nonnegative_cut

use submax::{
    amplify_nonnegative, beta_scaled_solve, brute_force_opt, build_constraint, build_function,
    matchoid_constants, sample_union, AmplifyConfig, Engine, EstimatorConfig, FunctionSpec,
    MatroidSpec, SampleBudget,
};

fn main() -> submax::Result<()> {
    let n = 10;
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .map(|i| (i, (i + 1) % n, 1.0))
        .chain((0..n / 2).map(|i| (i, i + n / 2, 0.5)))
        .collect();
    let mspec = MatroidSpec::Uniform { n, k: 4 };
    let fspec = FunctionSpec::Cut { vertices: n, edges };
    let constraint = build_constraint(&mspec)?;
    let matroid = constraint.as_dyn();
    let f = build_function(&fspec)?;
    let opt = brute_force_opt(matroid, &f)?.opt_value;
    println!("cut instance: n={n}, OPT {opt:.3} (cut is nonnegative but not monotone)");

    let eps = 0.1;
    let consts = matchoid_constants(1)?;
    println!(
        "beta-scaling constants: beta {:.6}, guaranteed ratio {:.6}",
        consts.beta, consts.ratio
    );

    let acfg = AmplifyConfig {
        budget: SampleBudget::samples(64),
        ..Default::default()
    };
    let ecfg = EstimatorConfig::fast();
    let seeds = 200;

    let mut beta_values = Vec::new();
    for seed in 0..seeds {
        let engine = Engine::new();
        let out = beta_scaled_solve(matroid, &f, 1, eps, &acfg, &ecfg, seed, &engine)?;
        beta_values.push(f.eval(&out.rounded));
    }
    let mean = beta_values.iter().sum::<f64>() / seeds as f64;
    println!(
        "beta-scaled:    mean f(J) {:.3} over {seeds} seeds ({:.1}% of OPT, bound {:.1}%)",
        mean,
        100.0 * mean / opt,
        100.0 * consts.ratio
    );

    let acfg_amp = AmplifyConfig {
        ell: Some(10),
        budget: SampleBudget::samples(48),
        ..Default::default()
    };
    let mut amp_values = Vec::new();
    for seed in 0..seeds {
        let engine = Engine::new();
        let blocks = amplify_nonnegative(matroid, &f, eps, &acfg_amp, &ecfg, seed, &engine)?;
        let alpha = acfg_amp.ratio(eps, matroid.width());
        let union = sample_union(&blocks, alpha, blocks.len(), seed ^ 0xABCD);
        amp_values.push(f.eval(&union));
    }
    let mean = amp_values.iter().sum::<f64>() / seeds as f64;
    println!(
        "nn-amplified:   mean f(union J_i) {:.3} over {seeds} seeds ({:.1}% of OPT)",
        mean,
        100.0 * mean / opt
    );
    Ok(())
}
