//! The 2×2 game where full monitoring makes `{ω ⪯ 0}` approachable and
//! playing in the dark does not.
//!
//! ```text
//! cargo run --example counter_example
//! ```

use approachkit::conditions::{default_y_grid, dual_condition};
use approachkit::game::catalog::counter_example;
use approachkit::game::Monitoring;
use approachkit::TargetSet;

fn main() -> approachkit::Result<()> {
    let target = TargetSet::orthant(vec![0.0, 0.0]);
    for monitoring in [Monitoring::Full, Monitoring::Dark] {
        let game = counter_example(monitoring);
        let report = dual_condition(&game, &target, &default_y_grid(&game))?;
        println!("{monitoring:?}: {:?} (margin {:+.4})", report.verdict, report.margin);
        if let Some(y) = &report.counter_y {
            println!("  Nature defeats every x with y = {:?}", y.weights());
        }
        if let Some(x) = &report.witness_x {
            println!("  witness x = {:?}", x.weights());
        }
        println!("  {}", report.method);
    }
    Ok(())
}
