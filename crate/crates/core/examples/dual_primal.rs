//! Dual (flag by flag) and primal (direction by direction) checks of
//! orthant approachability on a game read from disk.

use approachkit::conditions::{default_q_grid, default_y_grid, dual_condition, primal_condition_orthant, NatureSearch};
use approachkit::{GameSpec, Point, TargetSet};

fn main() -> approachkit::Result<()> {
    let game = GameSpec::from_json_str(include_str!("../data/ce1.json"))?;
    let y_grid = default_y_grid(&game);
    let q_grid = default_q_grid(game.dim);

    for a in [[0.0, 0.0], [-0.2, -0.2], [0.3, -0.5]] {
        let a = Point::new(a.to_vec());
        let dual = dual_condition(&game, &TargetSet::orthant(a.coords.clone()), &y_grid)?;
        let primal = primal_condition_orthant(&game, &a, &q_grid, &NatureSearch::Exact, 1e-9)?;
        println!(
            "a = {:?}: dual {:?} ({:+.4}), primal {:?} ({:+.4})",
            a.coords, dual.verdict, dual.margin, primal.verdict, primal.margin
        );
        if let Some(q) = &primal.separating_direction {
            println!("  separating direction q = {:?}", q.coords);
        }
    }
    Ok(())
}
