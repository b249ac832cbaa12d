//! Block strategy when only signals are seen. Each block plays the surrogate
//! step against a flag estimated from the previous block, mixed with a
//! shrinking amount of uniform exploration.

use approachkit::strategies::{run_block_signals, BlockSchedule, NaturePolicy, SimOptions};
use approachkit::{GameSpec, Point, SimplexVector};

fn main() -> approachkit::Result<()> {
    let game = GameSpec::from_json_str(include_str!("../data/rows.json"))?;
    let schedule = BlockSchedule::default();
    let nature = NaturePolicy::fixed(SimplexVector::new(vec![0.4, 0.6])?);
    let trace = run_block_signals(&game, &Point::zeros(2), &schedule, &nature, 100_000, 3, &SimOptions::default())?;

    println!("blocks played: {}", trace.block_ends.len());
    for b in [1usize, 4, 16, 64] {
        if let Some(err) = trace.block_flag_errors.get(b - 1) {
            println!(
                "block {b:>3}: length {:>4}, exploration {:.3}, flag error {err:.4}",
                schedule.length(b),
                schedule.exploration(b)
            );
        }
    }
    for n in [1_000, 10_000, 100_000] {
        println!("n={n:<7} dist={:.5}", trace.dist[n - 1]);
    }
    Ok(())
}
