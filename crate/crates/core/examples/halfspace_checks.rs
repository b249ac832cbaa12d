//! One-shot half-space checks: the plain game value against the surrogate
//! payoff version, for the same direction and threshold.

use approachkit::conditions::{one_shot_halfspace, one_shot_halfspace_modified, NatureSearch};
use approachkit::game::catalog::counter_example;
use approachkit::game::Monitoring;
use approachkit::Point;

fn main() -> approachkit::Result<()> {
    let q = Point::new(vec![0.5, 0.5]);
    for monitoring in [Monitoring::Full, Monitoring::Dark] {
        let game = counter_example(monitoring);
        let plain = one_shot_halfspace(&game, &q, 0.0)?;
        let surrogate = one_shot_halfspace_modified(&game, &q, 0.0, &NatureSearch::Exact, 1e-9)?;
        println!("{monitoring:?}");
        println!("  r(x, y):   {:?}, margin {:+.4}", plain.verdict, plain.margin);
        println!("  r̃(x, y):   {:?}, margin {:+.4}", surrogate.verdict, surrogate.margin);
    }
    Ok(())
}
