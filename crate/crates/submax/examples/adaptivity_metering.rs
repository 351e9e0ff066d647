//! Watch the meter: adaptive rounds and per-phase oracle calls for one
//! block-greedy run, and how rounds grow with the ground set.
//!
//!     cargo run --release --example adaptivity_metering

use submax::{block_greedy, generate_instance, Engine, EstimatorConfig, InstanceKind, LambdaFloor};

fn main() -> submax::Result<()> {
    let inst = generate_instance(
        &InstanceKind::RandomCoverage {
            n: 96,
            universe: 192,
            density: 0.12,
            rank: None,
        },
        21,
    )?;
    let (constraint, f) = inst.build()?;
    let matroid = constraint.as_dyn();

    let engine = Engine::new();
    engine.attach_function_counter(f.calls());
    for c in matroid.counters() {
        engine.attach_matroid_counter(c);
    }
    let out = block_greedy(
        matroid,
        &f,
        0.2,
        LambdaFloor::Auto,
        &EstimatorConfig::fast(),
        1,
        &engine,
    )?;
    engine.absorb_offline();
    let snap = engine.snapshot();
    println!(
        "one run at n=96: value {:.2}, {} greedy-sample calls, {} adaptive rounds",
        f.eval(&out.selected),
        out.trace.calls.len(),
        snap.rounds
    );
    println!(
        "  f calls {}, matroid calls {}",
        snap.f_calls, snap.matroid_calls
    );
    println!("  per phase:");
    for (phase, c) in &snap.phases {
        println!(
            "    {phase:<14} rounds {:>5}  f {:>9}  matroid {:>9}",
            c.rounds, c.f_calls, c.matroid_calls
        );
    }

    println!("\nrounds versus ground size (5 seeds each):");
    for n in [32usize, 128, 512] {
        let inst = generate_instance(
            &InstanceKind::RandomCoverage {
                n,
                universe: 2 * n,
                density: (12.0 / n as f64).min(0.5),
                rank: None,
            },
            42,
        )?;
        let (constraint, f) = inst.build()?;
        let m = constraint.as_dyn();
        let mut rounds = Vec::new();
        for seed in 0..5 {
            let engine = Engine::new();
            block_greedy(
                m,
                &f,
                0.2,
                LambdaFloor::Auto,
                &EstimatorConfig::fast(),
                seed,
                &engine,
            )?;
            rounds.push(engine.rounds() as f64);
        }
        let mean = rounds.iter().sum::<f64>() / rounds.len() as f64;
        let log2 = (n as f64).ln().powi(2);
        println!("  n {n:>4}: mean rounds {mean:>6.1}   (ln^2 n = {log2:.1})");
    }
    Ok(())
}
