//! The surrogate-payoff strategy when flags are observed, on a product of
//! two scalar games played in the dark.
//!
//! Nature best-responds to the player's current mixed action. The average
//! of `r(x_t, y_t)` approaches the orthant at rate `1/√n`.

use approachkit::game::catalog::dark_product;
use approachkit::monitoring::has_urc_property_default;
use approachkit::strategies::{run_observed_flags, NaturePolicy, SimOptions};
use approachkit::Point;

fn main() -> approachkit::Result<()> {
    let game = dark_product(&[vec![vec![0.5, -1.0], vec![-1.0, 0.5]], vec![vec![-1.0, 0.3], vec![0.3, -1.0]]])?;
    let urc = has_urc_property_default(&game, 1e-9)?;
    println!("upper-right-corner property: {} (max gap {:.2e} over {} pairs)", urc.holds, urc.max_gap, urc.pairs_tested);

    let a = Point::new(vec![-0.25, -0.35]);
    let trace = run_observed_flags(&game, &a, &NaturePolicy::BestResponse, 20_000, 11, &SimOptions::default())?;
    for n in [100, 1_000, 10_000, 20_000] {
        println!(
            "n={n:<6} dist(avg r(x,y))={:.4}  dist(avg R)={:.4}  dist(avg r(i,j))={:.4}",
            trace.dist_expected[n - 1],
            trace.dist_r[n - 1],
            trace.dist_pure[n - 1]
        );
    }
    println!("step failures: {}", trace.step_failures);
    Ok(())
}
