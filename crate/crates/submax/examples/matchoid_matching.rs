//! Bipartite weighted matching as a 2-matchoid: one cap-1 part per vertex.
//! Block-greedy runs unchanged on the matchoid span oracle.
//!
//!     cargo run --release --example matchoid_matching

use submax::{
    block_greedy, brute_force_opt, build_function, generate_instance, Engine, EstimatorConfig,
    FunctionSpec, InstanceKind, LambdaFloor,
};

fn main() -> submax::Result<()> {
    let inst = generate_instance(
        &InstanceKind::BipartiteMatchoid {
            a: 6,
            b: 6,
            edges: 18,
        },
        4,
    )?;
    let n = match &inst.function {
        FunctionSpec::Modular { weights } => weights.len(),
        _ => unreachable!(),
    };
    // replace the unit weights with something less symmetric
    let weights: Vec<f64> = (0..n).map(|i| 1.0 + (i % 5) as f64 * 0.5).collect();
    let fspec = FunctionSpec::Modular { weights };
    let (constraint, _) = inst.build()?;
    let matroid = constraint.as_dyn();
    let f = build_function(&fspec)?;
    println!(
        "bipartite 2-matchoid: {} edges, width p = {}, greedy max-cardinality proxy {}",
        n,
        matroid.width(),
        matroid.max_rank_hint()
    );

    let opt = brute_force_opt(matroid, &f)?;
    println!(
        "maximum-weight matching (brute force): {:.2}",
        opt.opt_value
    );

    let eps = 0.15;
    let mut values = Vec::new();
    for seed in 0..100 {
        let engine = Engine::new();
        let out = block_greedy(
            matroid,
            &f,
            eps,
            LambdaFloor::Auto,
            &EstimatorConfig::fast(),
            seed,
            &engine,
        )?;
        assert!(
            matroid.is_independent(&out.selected),
            "selection must stay a matching"
        );
        values.push(f.eval(&out.selected));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    println!(
        "block greedy: mean matching weight {:.2} ({:.1}% of OPT; the p-matchoid bound is (1-eps)/(p+1) = {:.1}%)",
        mean,
        100.0 * mean / opt.opt_value,
        100.0 * (1.0 - eps) / 3.0
    );
    Ok(())
}
