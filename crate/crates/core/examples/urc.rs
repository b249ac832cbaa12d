//! Upper-right corners of compatible payoff sets and the test for whether
//! the corner is itself attainable.

use approachkit::game::catalog::{counter_example, dark_product};
use approachkit::game::Monitoring;
use approachkit::monitoring::{has_urc_property_default, upper_right_corner};
use approachkit::SimplexVector;

fn main() -> approachkit::Result<()> {
    let dark = counter_example(Monitoring::Dark);
    let x = SimplexVector::uniform(2);
    let flag = dark.maximal_information(&SimplexVector::uniform(2))?;
    let corner = upper_right_corner(&dark, &x, &flag)?;
    println!("dark counter-example, x uniform: corner {:?}", corner.corner.coords);
    for (k, y) in corner.argmax_y.iter().enumerate() {
        println!("  coordinate {k} is maximized by y = {:?}", y.weights());
    }

    let product = dark_product(&[vec![vec![0.5, -1.0], vec![-1.0, 0.5]], vec![vec![-1.0, 0.3], vec![0.3, -1.0]]])?;
    for (name, game) in [("dark counter-example", &dark), ("dark product", &product)] {
        let report = has_urc_property_default(game, 1e-9)?;
        println!("{name}: property holds = {}, max gap {:.4}", report.holds, report.max_gap);
        if let Some(w) = &report.witness {
            println!("  first violation at x = {:?}", w.x.weights());
        }
    }
    Ok(())
}
