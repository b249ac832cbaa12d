//! Two zero-sum games played simultaneously with shared signals. The
//! auxiliary game over non-revealing profiles yields `u(p)`, whose concave
//! envelope gives an approachable orthant for every prior `p`.

use approachkit::conditions::{default_q_grid, primal_condition_orthant, NatureSearch};
use approachkit::kohlberg::{auxiliary_game, auxiliary_urc, concavify, nr_vertices, supporting_vector, u_grid, SimultaneousGames};

fn main() -> approachkit::Result<()> {
    let games: SimultaneousGames = serde_json::from_str(include_str!("../data/kohlberg.json"))
        .map_err(|e| approachkit::Error::Invalid(e.to_string()))?;
    let nr = nr_vertices(&games)?;
    println!("non-revealing vertices: {}", nr.vertices.len());

    let aux = auxiliary_game(&games, &nr)?;
    println!("auxiliary game has the corner property: {}", auxiliary_urc(&aux, 1e-7)?.holds);

    let samples = u_grid(&aux, 33)?;
    let cav = concavify(&samples)?;
    println!("cav u hull: {:?}", cav.hull);
    for (p, u) in samples.iter().step_by(8) {
        println!("  u({p:.2}) = {u:+.4}, cav u = {:+.4}", cav.eval(*p)?);
    }

    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let a = supporting_vector(&cav, p)?;
        let check = primal_condition_orthant(&aux, &a, &default_q_grid(2), &NatureSearch::Exact, 1e-7)?;
        println!(
            "p = {p:.2}: cav u = {:+.4}, orthant a = ({:+.4}, {:+.4}) -> {:?}",
            cav.eval(p)?,
            a.coords[0],
            a.coords[1],
            check.verdict
        );
    }
    Ok(())
}
