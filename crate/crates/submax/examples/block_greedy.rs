//! Run the low-adaptivity block-greedy loop on a coverage instance and
//! compare it against sequential greedy and the brute-force optimum.
//!
//!     cargo run --release --example block_greedy

use submax::{
    block_greedy, brute_force_opt, generate_instance, sequential_greedy, Engine, EstimatorConfig,
    InstanceKind, LambdaFloor,
};

fn main() -> submax::Result<()> {
    let inst = generate_instance(
        &InstanceKind::RandomCoverage {
            n: 60,
            universe: 90,
            density: 0.08,
            rank: Some(12),
        },
        7,
    )?;
    let (constraint, f) = inst.build()?;
    let matroid = constraint.as_dyn();
    let eps = 0.15;

    let greedy = sequential_greedy(matroid, &f);
    println!(
        "sequential greedy: value {:.3}, {} elements",
        f.eval(&greedy),
        greedy.len()
    );

    let mut values = Vec::new();
    let mut rounds = Vec::new();
    for seed in 0..20 {
        let engine = Engine::with_workers(2);
        engine.attach_function_counter(f.calls());
        let out = block_greedy(
            matroid,
            &f,
            eps,
            LambdaFloor::Auto,
            &EstimatorConfig::fast(),
            seed,
            &engine,
        )?;
        assert!(matroid.is_independent(&out.selected));
        values.push(f.eval(&out.selected));
        rounds.push(engine.rounds());
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mean_rounds = rounds.iter().sum::<u64>() as f64 / rounds.len() as f64;
    println!(
        "block greedy (eps {eps}): mean value {:.3} over {} seeds, mean adaptive rounds {:.1}",
        mean,
        values.len(),
        mean_rounds
    );
    println!(
        "  (sequential greedy needs ~2 rounds per pick: {} picks -> {} rounds)",
        greedy.len(),
        2 * greedy.len() + 1
    );

    // exact optimum is out of reach at n=60; compare against greedy instead
    let small = generate_instance(
        &InstanceKind::RandomCoverage {
            n: 14,
            universe: 20,
            density: 0.2,
            rank: Some(4),
        },
        3,
    )?;
    let (small_constraint, small_f) = small.build()?;
    let sm = small_constraint.as_dyn();
    let opt = brute_force_opt(sm, &small_f)?;
    let mut small_values = Vec::new();
    for seed in 0..50 {
        let engine = Engine::new();
        let out = block_greedy(
            sm,
            &small_f,
            eps,
            LambdaFloor::Auto,
            &EstimatorConfig::fast(),
            seed,
            &engine,
        )?;
        small_values.push(small_f.eval(&out.selected));
    }
    let small_mean = small_values.iter().sum::<f64>() / small_values.len() as f64;
    println!(
        "small instance (n=14): OPT {:.3}, block-greedy mean {:.3}, ratio {:.3}",
        opt.opt_value,
        small_mean,
        small_mean / opt.opt_value
    );
    Ok(())
}
