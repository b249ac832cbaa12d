//! Blackwell's projection strategy under full monitoring against three kinds
//! of Nature, with the distance of the average payoff printed at a few
//! checkpoints.
//!
//! The game is rock-paper-scissors with a second coordinate that charges
//! 0.3 for rock and pays 0.6 for scissors. The orthant below `(0, −0.1)` is
//! approachable; lowering the first corner to `−0.05` is not, and the
//! distance then stalls.

use approachkit::strategies::{run_blackwell, NaturePolicy, SimOptions};
use approachkit::{GameSpec, SimplexVector, TargetSet};

fn main() -> approachkit::Result<()> {
    let game = GameSpec::from_json_str(include_str!("../data/rps.json"))?;
    let horizon = 10_000;
    let bound = 2.0 * game.payoff_bound();

    let natures = [
        NaturePolicy::fixed(SimplexVector::new(vec![0.2, 0.3, 0.5])?),
        NaturePolicy::script((0..horizon).map(|t| SimplexVector::pure(3, (t / 7) % 3)).collect())?,
        NaturePolicy::BestResponse,
    ];
    for (target, nature) in [[0.0, -0.1], [-0.05, -0.1]].iter().flat_map(|a| natures.iter().map(move |nt| (a, nt))) {
        let trace = run_blackwell(&game, &TargetSet::orthant(target.to_vec()), nature, horizon, 7, &SimOptions::default())?;
        println!("target {target:?}, {}", nature.name());
        for n in [10, 100, 1_000, 10_000] {
            println!(
                "  n={n:<6} dist avg r(x,j)={:.2e}  dist avg r(i,j)={:.4}  2M/√n={:.4}",
                trace.dist[n - 1],
                trace.dist_pure[n - 1],
                bound / (n as f64).sqrt()
            );
        }
    }
    Ok(())
}
