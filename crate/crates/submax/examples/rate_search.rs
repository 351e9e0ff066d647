//! How the sampling-rate search adapts to matroid structure: on a fat path
//! (every leg duplicated k times) the span condition forces the rate down to
//! about (3/4)·eps/k, while a fat tail mostly oversamples its one thick leg
//! and prunes the duplicates.
//!
//!     cargo run --release --example rate_search

use submax::{find_delta, generate_instance, greedy_sample, Engine, EstimatorConfig, InstanceKind};

fn main() -> submax::Result<()> {
    let eps = 0.2;
    let cfg = EstimatorConfig::default();

    println!("fat path, 6 legs x k copies (unit weights, threshold 1):");
    for copies in [1usize, 2, 4, 8] {
        let inst = generate_instance(&InstanceKind::FatPath { legs: 6, copies }, 1)?;
        let (constraint, f) = inst.build()?;
        let m = constraint.as_dyn();
        let engine = Engine::new();
        let rate = find_delta(m, &f, 1.0, eps, &cfg, m.max_rank_hint(), 5, &engine)?;
        println!(
            "  k={copies}: delta {:.4}   (3eps/4k = {:.4}; span estimate {:.2}, n={})",
            rate.delta,
            0.75 * eps / copies as f64,
            rate.span_estimate,
            f.n()
        );
    }

    println!("\nfat tail, n=24 edges with one leg of k parallel copies:");
    for copies in [2usize, 6, 12] {
        let inst = generate_instance(&InstanceKind::FatTail { n: 24, copies }, 1)?;
        let (constraint, f) = inst.build()?;
        let m = constraint.as_dyn();
        let mut sampled_tail = 0usize;
        let mut kept_tail = 0usize;
        let trials = 200;
        for seed in 0..trials {
            let engine = Engine::new();
            let (block, _) =
                greedy_sample(m, &f, 1.0, eps, &cfg, m.max_rank_hint(), seed, &engine)?;
            // tail edges carry the first `copies` ids
            sampled_tail += block.sampled.iter().filter(|&e| e < copies).count();
            kept_tail += block.selected.iter().filter(|&e| e < copies).count();
        }
        println!(
            "  k={copies}: tail edges sampled {:.2} per draw, kept {:.2} (duplicates pruned)",
            sampled_tail as f64 / trials as f64,
            kept_tail as f64 / trials as f64
        );
    }
    Ok(())
}
