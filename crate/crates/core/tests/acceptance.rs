//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Pass criterion numbers as arguments to
//! run a subset: `cargo test --test acceptance -- 3 5`.

mod common;

use std::time::Instant;

use approachkit::conditions::{
    default_q_grid, default_y_grid, dual_condition, one_shot_halfspace, primal_condition_orthant, NatureSearch, Verdict,
};
use approachkit::game::catalog::{counter_example, dark_product, hidden_halfspace_game};
use approachkit::game::Monitoring;
use approachkit::geometry::{convex_hull_2d, dist_to_polygon, minkowski_combination, simplex_grid, support_value, DirectionGrid};
use approachkit::kohlberg::{auxiliary_game, auxiliary_urc, concavify, nr_vertices, supporting_vector, u_grid, SimultaneousGames};
use approachkit::lifting::{hidden_halfspace_demo, lift_polytope, lifted_corner_payoff};
use approachkit::monitoring::CornerOracle;
use approachkit::report::quantile;
use approachkit::strategies::{
    monte_carlo, run_block_signals, run_blackwell, run_observed_flags, BlockSchedule, NaturePolicy, SimOptions,
};
use approachkit::{GameSpec, Point, Result, SimplexVector, TargetSet};
use common::{pt, random_direction, random_game, random_law, random_payoffs, random_polytope, random_simplex, sv};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn orth(a: &[f64]) -> TargetSet {
    TargetSet::orthant(a.to_vec())
}

fn c1_blackwell_bound() -> Result<Outcome> {
    let start = Instant::now();
    let g = counter_example(Monitoring::Full);
    let m = g.payoff_bound();
    let policies = [
        NaturePolicy::fixed(sv(&[0.3, 0.7])),
        NaturePolicy::script(vec![sv(&[1.0, 0.0]), sv(&[0.0, 1.0]), sv(&[0.5, 0.5])])?,
        NaturePolicy::BestResponse,
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for nature in &policies {
        let t = run_blackwell(&g, &orth(&[0.0, 0.0]), nature, 10_000, 7, &SimOptions::default())?;
        for (k, d) in t.dist.iter().enumerate() {
            worst = worst.max(d - 2.0 * m / ((k + 1) as f64).sqrt());
        }
        violations += t.violations;
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 10.0 && violations == 0,
        format!("max(dist - 2M/sqrt n) = {worst:.3e} over 3 policies x 1e4 rounds, step violations {violations}, {secs:.2}s"),
    )
}

fn c2_counter_example() -> Result<Outcome> {
    let g = counter_example(Monitoring::Dark);
    let dual = dual_condition(&g, &orth(&[0.0, 0.0]), &default_y_grid(&g))?;
    let mut min_dist = f64::INFINITY;
    for nature in [NaturePolicy::BestResponse, NaturePolicy::fixed(sv(&[0.5, 0.5])), NaturePolicy::fixed(sv(&[1.0, 0.0]))] {
        let t = run_observed_flags(&g, &pt(&[0.0, 0.0]), &nature, 1000, 3, &SimOptions::default())?;
        min_dist = t.dist_r[9..].iter().copied().fold(min_dist, f64::min);
    }
    outcome(
        dual.verdict == Verdict::NotApproachable && min_dist >= 0.70,
        format!("dual verdict {:?} (margin {:.3}), min dist(avg R) over n >= 10 is {min_dist:.4}", dual.verdict, dual.margin),
    )
}

fn c3_halfspace_invariance() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut monitoring_mismatch = 0;
    let mut dual_mismatch = 0;
    let mut worst_gap: f64 = 0.0;
    let mut approachable = 0;
    let mut checks = 0;
    for _ in 0..200 {
        let g = random_game(&mut rng, 3);
        let variants = [g.with_monitoring(Monitoring::Full), g.with_monitoring(Monitoring::Dark), g.clone()];
        let grid = simplex_grid(g.num_nature_actions(), 32);
        for _ in 0..20 {
            let a = random_direction(&mut rng, g.dim);
            let b = rng.random_range(-1.0..1.0) * g.payoff_bound();
            let reports: Vec<_> = variants.iter().map(|v| one_shot_halfspace(v, &a, b)).collect::<Result<_>>()?;
            for r in &reports[1..] {
                let gap = (r.margin - reports[0].margin).abs();
                worst_gap = worst_gap.max(gap);
                if r.verdict.passes() != reports[0].verdict.passes() && reports[0].margin.abs() > 1e-6 || gap > 1e-6 {
                    monitoring_mismatch += 1;
                }
            }
            let target = TargetSet::halfspace(a.coords.clone(), b)?;
            for v in &variants[1..] {
                let d = dual_condition(v, &target, &grid)?;
                let gap = (d.margin - reports[0].margin).abs();
                worst_gap = worst_gap.max(gap);
                if d.verdict.passes() != reports[0].verdict.passes() && reports[0].margin.abs() > 1e-6 {
                    dual_mismatch += 1;
                }
            }
            approachable += reports[0].verdict.passes() as usize;
            checks += 1;
        }
    }
    outcome(
        monitoring_mismatch == 0 && dual_mismatch == 0,
        format!(
            "{checks} half-spaces ({approachable} approachable): monitoring disagreements {monitoring_mismatch}, dual disagreements {dual_mismatch}, max margin gap {worst_gap:.2e}"
        ),
    )
}

fn c4_convexity_concavity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_convex = f64::NEG_INFINITY;
    let mut worst_concave = f64::NEG_INFINITY;
    for _ in 0..20 {
        let g = random_game(&mut rng, 3);
        let oracle = CornerOracle::new(&g);
        let (ni, nj) = (g.num_player_actions(), g.num_nature_actions());
        for _ in 0..1000 {
            let (x1, x2, y) = (random_simplex(&mut rng, ni), random_simplex(&mut rng, ni), random_simplex(&mut rng, nj));
            let lam = rng.random::<f64>();
            let mid = oracle.modified_payoff(&SimplexVector::mix(lam, &x1, &x2), &y)?;
            let chord = oracle.modified_payoff(&x1, &y)?.scale(lam).add(&oracle.modified_payoff(&x2, &y)?.scale(1.0 - lam));
            worst_convex = mid.sub(&chord).coords.iter().copied().fold(worst_convex, f64::max);
        }
        for _ in 0..1000 {
            let (x, y1, y2) = (random_simplex(&mut rng, ni), random_simplex(&mut rng, nj), random_simplex(&mut rng, nj));
            let lam = rng.random::<f64>();
            let mid = oracle.modified_payoff(&x, &SimplexVector::mix(lam, &y1, &y2))?;
            let chord = oracle.modified_payoff(&x, &y1)?.scale(lam).add(&oracle.modified_payoff(&x, &y2)?.scale(1.0 - lam));
            worst_concave = chord.sub(&mid).coords.iter().copied().fold(worst_concave, f64::max);
        }
    }
    outcome(
        worst_convex <= 1e-7 && worst_concave <= 1e-7,
        format!("20 games x 1000 triples each: worst convexity violation {worst_convex:.2e}, worst concavity violation {worst_concave:.2e}"),
    )
}

fn c5_primal_dual() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = Vec::new();
    let mut tolerance_level = 0;
    let mut worst_gap: f64 = 0.0;
    let mut approachable = 0;
    for game in 0..50 {
        let g = random_game(&mut rng, 3);
        let grid = default_y_grid(&g);
        let q_grid = default_q_grid(g.dim);
        let search = NatureSearch::Grid(grid.clone());
        for _ in 0..5 {
            let a: Vec<f64> = (0..g.dim).map(|_| rng.random_range(-0.6..0.8)).collect();
            let dual = dual_condition(&g, &orth(&a), &grid)?;
            let primal = primal_condition_orthant(&g, &pt(&a), &q_grid, &search, 1e-7)?;
            worst_gap = worst_gap.max((dual.margin - primal.margin).abs());
            approachable += dual.verdict.passes() as usize;
            if dual.verdict.passes() != primal.verdict.passes() {
                if dual.margin.abs().min(primal.margin.abs()) > 1e-5 {
                    disagreements.push(format!("game {game} a={a:?}: dual {:.2e} primal {:.2e}", dual.margin, primal.margin));
                } else {
                    tolerance_level += 1;
                }
            }
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "250 orthants ({approachable} pass dual): {} disagreements beyond 1e-5, {tolerance_level} within tolerance, max margin gap {worst_gap:.2e}{}",
            disagreements.len(),
            disagreements.first().map(|d| format!("; first: {d}")).unwrap_or_default()
        ),
    )
}

fn c6_observed_flags() -> Result<Outcome> {
    let product = dark_product(&[vec![vec![0.5, -1.0], vec![-1.0, 0.5]], vec![vec![-1.0, 0.3], vec![0.3, -1.0]]])?;
    let urc = approachkit::monitoring::has_urc_property_default(&product, 1e-7)?.holds;
    let m = product.payoff_bound();
    let a = pt(&[-0.25, -0.35]);
    let policies = [NaturePolicy::BestResponse, NaturePolicy::script(vec![sv(&[1.0, 0.0, 0.0, 0.0]), sv(&[0.0, 0.0, 0.0, 1.0])])?];
    let mut worst_urc = f64::NEG_INFINITY;
    for nature in &policies {
        let t = run_observed_flags(&product, &a, nature, 10_000, 6, &SimOptions::default())?;
        for (k, d) in t.dist_expected.iter().enumerate() {
            worst_urc = worst_urc.max(d - 2.0 * m / ((k + 1) as f64).sqrt());
        }
    }
    let dark = counter_example(Monitoring::Dark);
    let non_urc = !approachkit::monitoring::has_urc_property_default(&dark, 1e-7)?.holds;
    let (md, d) = (dark.payoff_bound(), 2.0f64);
    let b = pt(&[0.5, 0.5]);
    let mut worst_exact = f64::NEG_INFINITY;
    let mut worst_grid = f64::NEG_INFINITY;
    let grid_opts = SimOptions { search: NatureSearch::Grid(default_y_grid(&dark)), ..Default::default() };
    for nature in [NaturePolicy::BestResponse, NaturePolicy::fixed(sv(&[0.2, 0.8]))] {
        let exact = run_observed_flags(&dark, &b, &nature, 10_000, 6, &SimOptions::default())?;
        let grid = run_observed_flags(&dark, &b, &nature, 10_000, 6, &grid_opts)?;
        for k in 0..exact.len() {
            let bound = 2.0 * md * d.sqrt() / ((k + 1) as f64).sqrt();
            worst_exact = worst_exact.max(exact.dist_expected[k] - bound);
            worst_grid = worst_grid.max(grid.dist_expected[k] - bound);
        }
    }
    outcome(
        urc && worst_urc <= 1e-3 && non_urc && worst_exact <= 0.0 && worst_grid <= 0.01,
        format!(
            "product game (URC {urc}): max(dist - 2M/sqrt n) = {worst_urc:.2e}; dark counter-example (URC {}): max(dist - 2M sqrt(d)/sqrt n) = {worst_exact:.2e} exact, {worst_grid:.2e} with 1/32 Nature grid",
            !non_urc
        ),
    )
}

fn c7_hidden_halfspace() -> Result<Outcome> {
    let base = hidden_halfspace_game(Monitoring::Dark);
    let interval = TargetSet::polytope(vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0])?;
    let lifted = lift_polytope(&base, &interval)?;
    let mut diag_gap: f64 = 0.0;
    for k in 0..=100 {
        let p = k as f64 / 100.0;
        for y in [sv(&[1.0, 0.0]), sv(&[0.0, 1.0]), sv(&[0.5, 0.5])] {
            let s = lifted_corner_payoff(&lifted, &sv(&[p, 1.0 - p]), &y)?;
            diag_gap = diag_gap.max(s.distance(&pt(&[p, 1.0 - p])));
        }
    }
    let half = hidden_halfspace_demo(&lifted, &pt(&[0.5, 0.5]))?;
    let pure: Vec<_> = [[1.0, 0.0], [0.0, 1.0]].iter().map(|q| hidden_halfspace_demo(&lifted, &pt(q))).collect::<Result<_>>()?;
    let pure_ok = pure.iter().all(|r| {
        r.lifted_verdict == Verdict::Approachable && r.witness_x.weights().iter().any(|w| (w - 1.0).abs() < 1e-9)
    });
    outcome(
        diag_gap <= 1e-9
            && (half.lifted_value - 0.5).abs() <= 1e-7
            && half.lifted_verdict == Verdict::NotApproachable
            && half.base_constant == Some(-1.0)
            && pure_ok,
        format!(
            "surrogate vs (x, 1-x) gap {diag_gap:.1e} on 101 points; q=(1/2,1/2): lifted value {:.6}, base constant {:?}; pure directions approachable by pure actions: {pure_ok}",
            half.lifted_value, half.base_constant
        ),
    )
}

fn c8_polytope_lifting() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut membership_mismatch = 0;
    let mut inside = 0;
    for _ in 0..20 {
        let d = rng.random_range(1..=3);
        let rows = rng.random_range(1..=4);
        let poly = random_polytope(&mut rng, d, rows);
        let g = GameSpec::dark(random_payoffs(&mut rng, 2, 2, d))?;
        let lifted = lift_polytope(&g, &poly)?;
        for _ in 0..1000 {
            let w = Point::new((0..d).map(|_| rng.random_range(-2.0..2.0)).collect());
            let a = poly.contains(&w, 0.0);
            inside += a as usize;
            if a != lifted.target().contains(&lifted.transform(&w)?, 0.0) {
                membership_mismatch += 1;
            }
        }
    }
    let mut verdict_mismatch = 0;
    let mut worst_gap: f64 = 0.0;
    let mut approachable = 0;
    for _ in 0..30 {
        let g = random_game(&mut rng, 3);
        let rows = rng.random_range(1..=3);
        let poly = random_polytope(&mut rng, g.dim, rows);
        let shift = Point::new((0..g.dim).map(|_| rng.random_range(-0.5..0.5)).collect());
        let (rows, offsets) = poly.constraint_rows();
        let shifted = TargetSet::polytope(
            rows.iter().map(|r| r.coords.clone()).collect(),
            rows.iter().zip(&offsets).map(|(r, b)| b + r.dot(&shift) - 0.6).collect(),
        )?;
        let lifted = lift_polytope(&g, &shifted)?;
        let before = dual_condition(&g, &shifted, &default_y_grid(&g))?;
        let after = dual_condition(&lifted.lifted, &lifted.target(), &default_y_grid(&lifted.lifted))?;
        worst_gap = worst_gap.max((before.margin - after.margin).abs());
        approachable += before.verdict.passes() as usize;
        if before.verdict.passes() != after.verdict.passes() {
            verdict_mismatch += 1;
        }
    }
    outcome(
        membership_mismatch == 0 && verdict_mismatch == 0,
        format!(
            "membership mismatches {membership_mismatch}/20000 ({inside} inside); dual verdict mismatches {verdict_mismatch}/30 ({approachable} approachable), max margin gap {worst_gap:.1e}"
        ),
    )
}

fn c9_block_strategy() -> Result<Outcome> {
    let start = Instant::now();
    let law = vec![vec![vec![0.8, 0.2], vec![0.3, 0.7]], vec![vec![0.6, 0.4], vec![0.1, 0.9]]];
    let payoffs = vec![vec![vec![-0.2, -0.2]; 2], vec![vec![0.5, 0.3]; 2]];
    let g = GameSpec::new(payoffs, law)?;
    let (m, d) = (g.payoff_bound(), g.dim as f64);
    let schedule = BlockSchedule::default();
    let nature = NaturePolicy::fixed(sv(&[0.4, 0.6]));
    let traces = monte_carlo(20, 900, |seed| {
        run_block_signals(&g, &pt(&[0.0, 0.0]), &schedule, &nature, 100_000, seed, &SimOptions::default())
    })?;
    let checkpoints = [1_000usize, 10_000, 100_000];
    let medians: Vec<f64> = checkpoints
        .iter()
        .map(|&n| {
            let mut v: Vec<f64> = traces.iter().map(|t| t.dist[n - 1]).collect();
            v.sort_by(f64::total_cmp);
            quantile(&v, 0.5)
        })
        .collect();
    let bound_ok = checkpoints.iter().zip(&medians).all(|(&n, md)| *md <= 10.0 * m * d.sqrt() * (n as f64).powf(-0.2));
    let monotone = medians.windows(2).all(|w| w[1] < w[0]);
    let blocks = traces.iter().map(|t| t.block_flag_errors.len()).min().unwrap_or(0);
    let dyadic: Vec<usize> = (0..).map(|k| 1usize << k).take_while(|b| *b <= blocks).collect();
    let median_at = |f: &dyn Fn(&approachkit::strategies::Trace) -> f64| {
        let mut v: Vec<f64> = traces.iter().map(f).collect();
        v.sort_by(f64::total_cmp);
        quantile(&v, 0.5)
    };
    let flag_medians: Vec<f64> = dyadic.iter().map(|&b| median_at(&|t| t.block_flag_errors[b - 1])).collect();
    let window_medians: Vec<f64> = dyadic
        .iter()
        .map(|&b| {
            let end = (2 * b).min(blocks + 1);
            median_at(&|t| t.block_flag_errors[b - 1..end - 1].iter().sum::<f64>() / (end - b) as f64)
        })
        .collect();
    let flag_decreasing = window_medians.windows(2).all(|w| w[1] < w[0]);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bound_ok && monotone && flag_decreasing && secs < 300.0,
        format!(
            "median dist at 1e3/1e4/1e5: {:.4}/{:.4}/{:.4} (bounds {:.3}/{:.3}/{:.3}); median flag error at blocks {:?}: {:?}; window medians {:?}; {secs:.1}s",
            medians[0],
            medians[1],
            medians[2],
            10.0 * m * d.sqrt() * 1e3f64.powf(-0.2),
            10.0 * m * d.sqrt() * 1e4f64.powf(-0.2),
            10.0 * m * d.sqrt() * 1e5f64.powf(-0.2),
            dyadic,
            flag_medians.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            window_medians.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    )
}

fn c10_support_function() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = DirectionGrid::circle(64);
    let mut failures = [0usize; 5];
    let mut converse_cases = 0;
    for _ in 0..100 {
        let cloud = |rng: &mut ChaCha8Rng| -> Vec<Point> {
            let n = rng.random_range(3..25);
            (0..n).map(|_| pt(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])).collect()
        };
        let p = cloud(&mut rng);
        let c = p.iter().map(Point::norm).fold(0.0, f64::max);
        let phi: Vec<f64> = grid.directions.iter().map(|s| support_value(&p, s)).collect::<Result<_>>()?;
        if phi.iter().any(|v| v.abs() > c + 1e-12) {
            failures[0] += 1;
        }
        for (s, fs) in grid.directions.iter().zip(&phi) {
            for (t, ft) in grid.directions.iter().zip(&phi) {
                if (fs - ft).abs() > c * s.distance(t) + 1e-12 {
                    failures[1] += 1;
                }
            }
        }
        let mut sub = p.clone();
        sub.truncate(rng.random_range(1..=p.len()));
        for (s, fs) in grid.directions.iter().zip(&phi) {
            if support_value(&sub, s)? > fs + 1e-15 {
                failures[2] += 1;
            }
        }
        let other = cloud(&mut rng);
        let gamma = rng.random_range(0.0..3.0);
        let sum = minkowski_combination(gamma, &p, &other);
        for s in &grid.directions {
            let lhs = support_value(&sum, s)?;
            let rhs = gamma * support_value(&p, s)? + support_value(&other, s)?;
            if (lhs - rhs).abs() > 1e-12 * (1.0 + rhs.abs()) {
                failures[3] += 1;
            }
        }
        let hull = convex_hull_2d(&p);
        let inner: Vec<Point> = (0..10)
            .map(|_| {
                let w = random_simplex(&mut rng, p.len());
                p.iter().zip(w.weights()).fold(Point::zeros(2), |acc, (q, wq)| acc.add(&q.scale(*wq)))
            })
            .collect();
        let k = rng.random_range(0..grid.count());
        let s = &grid.directions[k];
        let top = p.iter().max_by(|a, b| a.dot(s).total_cmp(&b.dot(s))).expect("nonempty cloud");
        let mut outer = inner.clone();
        outer.push(top.add(&s.scale(0.05)));
        for (cand, included) in [(inner, true), (outer, false)] {
            let dominated = grid
                .directions
                .iter()
                .zip(&phi)
                .all(|(s, fs)| support_value(&cand, s).map(|v| v <= fs + 1e-6).unwrap_or(false));
            let inside = cand.iter().all(|q| dist_to_polygon(q, &hull) <= 1e-9);
            if dominated != inside || inside != included {
                failures[4] += 1;
            }
            converse_cases += 1;
        }
    }
    outcome(
        failures.iter().all(|f| *f == 0),
        format!(
            "100 clouds, 64 directions: failures bound/Lipschitz/monotone/Minkowski = {:?}, converse inclusion failures {} of {converse_cases}",
            &failures[..4],
            failures[4]
        ),
    )
}

fn kohlberg_instances() -> Vec<SimultaneousGames> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    while out.len() < 10 {
        let (ni, nj) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let payoffs = [random_payoffs(&mut rng, ni, nj, 1), random_payoffs(&mut rng, ni, nj, 1)];
        let scalar: Vec<Vec<Vec<f64>>> =
            payoffs.iter().map(|g| g.iter().map(|r| r.iter().map(|v| v[0]).collect()).collect()).collect();
        let games = if out.len() < 5 {
            SimultaneousGames::dark(scalar)
        } else {
            let ns = rng.random_range(2..=3);
            let stochastic = rng.random_bool(0.5);
            SimultaneousGames::shared_signals(scalar, random_law(&mut rng, ni, nj, ns, stochastic))
        };
        out.push(games.expect("valid instance"));
    }
    out
}

fn c11_kohlberg() -> Result<Outcome> {
    let mut urc_fail = 0;
    let mut domination: f64 = f64::NEG_INFINITY;
    let mut concavity: f64 = f64::NEG_INFINITY;
    let mut equality: f64 = 0.0;
    let mut primal_fail = Vec::new();
    for (idx, games) in kohlberg_instances().iter().enumerate() {
        let aux = auxiliary_game(games, &nr_vertices(games)?)?;
        if !auxiliary_urc(&aux, 1e-7)?.holds {
            urc_fail += 1;
        }
        let samples = u_grid(&aux, 33)?;
        let cav = concavify(&samples)?;
        let vals: Vec<f64> = samples.iter().map(|(p, _)| cav.eval(*p)).collect::<Result<_>>()?;
        for ((_, u), c) in samples.iter().zip(&vals) {
            domination = domination.max(u - c);
        }
        for w in vals.windows(3) {
            concavity = concavity.max(w[0] - 2.0 * w[1] + w[2]);
        }
        for (p, _) in &samples {
            let a = supporting_vector(&cav, *p)?;
            equality = equality.max((a.coords[0] * p + a.coords[1] * (1.0 - p) - cav.eval(*p)?).abs());
            for ((q, u), c) in samples.iter().zip(&vals) {
                let line = a.coords[0] * q + a.coords[1] * (1.0 - q);
                domination = domination.max(c - line).max(u - line);
            }
        }
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let a = supporting_vector(&cav, p)?;
            let r = primal_condition_orthant(&aux, &a, &default_q_grid(2), &NatureSearch::Exact, 1e-7)?;
            if !r.passes() {
                primal_fail.push(format!("instance {idx} p={p}: margin {:.2e}", r.margin));
            }
        }
    }
    outcome(
        urc_fail == 0 && domination <= 1e-9 && concavity <= 1e-9 && equality <= 1e-9 && primal_fail.is_empty(),
        format!(
            "10 instances: URC failures {urc_fail}, worst domination {domination:.1e}, worst second difference {concavity:.1e}, worst equality gap {equality:.1e}, primal failures {}{}",
            primal_fail.len(),
            primal_fail.first().map(|f| format!(" ({f})")).unwrap_or_default()
        ),
    )
}

type Criterion = (usize, &'static str, fn() -> Result<Outcome>);

const CRITERIA: [Criterion; 11] = [
    (1, "Blackwell full-monitoring rate", c1_blackwell_bound),
    (2, "counter-example separation", c2_counter_example),
    (3, "half-space signal invariance", c3_halfspace_invariance),
    (4, "surrogate payoff convexity and concavity", c4_convexity_concavity),
    (5, "orthant primal and dual agree", c5_primal_dual),
    (6, "observed-flag strategy rate", c6_observed_flags),
    (7, "hidden half-space example", c7_hidden_halfspace),
    (8, "polytope lifting exactness", c8_polytope_lifting),
    (9, "block strategy from signals", c9_block_strategy),
    (10, "support function properties", c10_support_function),
    (11, "incomplete-information pipeline", c11_kohlberg),
];

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += (!pass) as usize;
        println!(
            "acceptance {id:>2} {}: {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
