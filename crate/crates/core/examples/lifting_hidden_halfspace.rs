//! A polytope target lifted to an orthant can hide a half-space that the
//! surrogate game refuses even though the base game accepts it.

use approachkit::game::catalog::hidden_halfspace_game;
use approachkit::game::Monitoring;
use approachkit::lifting::{hidden_halfspace_demo, lift_polytope, lifted_corner_payoff};
use approachkit::{Point, SimplexVector, TargetSet};

fn main() -> approachkit::Result<()> {
    let base = hidden_halfspace_game(Monitoring::Dark);
    let interval = TargetSet::polytope(vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0])?;
    let lifted = lift_polytope(&base, &interval)?;

    for p in [0.0, 0.25, 0.5, 1.0] {
        let x = SimplexVector::new(vec![p, 1.0 - p])?;
        let s = lifted_corner_payoff(&lifted, &x, &SimplexVector::uniform(2))?;
        println!("x = ({p:.2}, {:.2}) -> surrogate {:?}", 1.0 - p, s.coords);
    }

    let report = hidden_halfspace_demo(&lifted, &Point::new(vec![0.5, 0.5]))?;
    println!("q = (1/2, 1/2)");
    println!("  base: <q, T(w)> = {:?} for every w, verdict {:?}", report.base_constant, report.base_verdict);
    println!("  lifted: min max value {:.4}, verdict {:?}", report.lifted_value, report.lifted_verdict);
    println!("  consistent: {}", report.consistent);
    Ok(())
}
