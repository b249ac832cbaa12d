//! Seeded replications run in parallel and summarized as per-round
//! quantiles. Set `APPROACHKIT_THREADS` to cap the worker count.
//!
//! The block strategy only sees signals, so its trajectories differ from
//! seed to seed and the quantiles spread out.

use approachkit::report::report;
use approachkit::strategies::{monte_carlo, run_block_signals, BlockSchedule, NaturePolicy, SimOptions};
use approachkit::{GameSpec, Point, SimplexVector};

fn main() -> approachkit::Result<()> {
    let game = GameSpec::from_json_str(include_str!("../data/ce1.json"))?;
    let nature = NaturePolicy::fixed(SimplexVector::new(vec![0.3, 0.7])?);
    let a = Point::new(vec![0.05, 0.05]);
    let traces = monte_carlo(32, 1_000, |seed| {
        run_block_signals(&game, &a, &BlockSchedule::default(), &nature, 20_000, seed, &SimOptions::default())
    })?;
    let summary = report(&traces)?;
    println!("{} replications, seeds {}..={}", summary.replications, summary.seeds[0], summary.seeds[summary.seeds.len() - 1]);
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "n", "q10", "median", "q90", "max");
    for n in [100, 1_000, 10_000, 20_000] {
        if let Some(row) = summary.row(n) {
            println!("{:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", row.n, row.q10, row.median, row.q90, row.max);
        }
    }
    Ok(())
}
