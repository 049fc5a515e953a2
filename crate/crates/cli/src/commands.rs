//! One function per subcommand. Each returns the full table before anything
//! touches the filesystem, so failures leave no partial files behind.

use crate::config::{ExperimentConfig, FieldSpec};
use crate::error::{CliError, Result};
use cflab_core::cayley::{build_ball_capped, growth_histogram, growth_series};
use cflab_core::dirichlet::{decompose, dirichlet_energy, solve_dirichlet};
use cflab_core::floyd::{
    chain_distance_matrix, floyd_distances_from, sphere_floyd_diameter, summability_trace,
    witness_energy_report, witness_field, Sampling,
};
use cflab_core::gromov::{
    choose_scale_parameter, delta_profile, looks_non_hyperbolic, scale_condition_holds,
    DeltaEstimate, DeltaMode, GromovTable,
};
use cflab_core::{AdmissibleFunction, Ball, GrowthHistogram, ScalarField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

/// Relative slack when checking the chain-metric sandwich in floating point.
pub const INEQUALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Subcommand {
    Ball,
    Growth,
    GromovDelta,
    ChooseA,
    FloydDiameter,
    VerifyInequality,
    Witness,
    Summability,
    SolveDirichlet,
    Decompose,
}

impl Subcommand {
    pub const ALL: [Subcommand; 10] = [
        Subcommand::Ball,
        Subcommand::Growth,
        Subcommand::GromovDelta,
        Subcommand::ChooseA,
        Subcommand::FloydDiameter,
        Subcommand::VerifyInequality,
        Subcommand::Witness,
        Subcommand::Summability,
        Subcommand::SolveDirichlet,
        Subcommand::Decompose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Ball => "ball",
            Subcommand::Growth => "growth",
            Subcommand::GromovDelta => "gromov-delta",
            Subcommand::ChooseA => "choose-a",
            Subcommand::FloydDiameter => "floyd-diameter",
            Subcommand::VerifyInequality => "verify-inequality",
            Subcommand::Witness => "witness",
            Subcommand::Summability => "summability",
            Subcommand::SolveDirichlet => "solve-dirichlet",
            Subcommand::Decompose => "decompose",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Outcome {
            table,
            converged: true,
            warnings: Vec::new(),
        }
    }
}

// `{}` on f64 is the shortest representation that round-trips.
fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn execute(sub: Subcommand, config: &ExperimentConfig) -> Result<Outcome> {
    match sub {
        Subcommand::Ball => ball(config),
        Subcommand::Growth => growth(config),
        Subcommand::GromovDelta => gromov_delta(config),
        Subcommand::ChooseA => choose_a(config),
        Subcommand::FloydDiameter => floyd_diameter(config),
        Subcommand::VerifyInequality => verify_inequality(config),
        Subcommand::Witness => witness(config),
        Subcommand::Summability => summability(config),
        Subcommand::SolveDirichlet => solve(config),
        Subcommand::Decompose => decomposition(config),
    }
}

fn make_ball(config: &ExperimentConfig, radius: u32) -> Result<Ball> {
    Ok(build_ball_capped(
        &config.build_group()?,
        radius,
        config.max_vertices,
    )?)
}

fn require_p_above_one(config: &ExperimentConfig) -> Result<()> {
    if config.p > 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "this subcommand needs p > 1, got {}",
            config.p
        )))
    }
}

fn ball(config: &ExperimentConfig) -> Result<Outcome> {
    let ball = make_ball(config, config.radius)?;
    let group = ball.group();
    let mut t = Table::new(&["index", "element", "length", "inside_degree"]);
    for i in 0..ball.len() {
        let inside = ball.neighbors(i).iter().filter(|n| n.is_some()).count();
        t.push(vec![
            i.to_string(),
            group.format(ball.element(i)),
            ball.length(i).to_string(),
            inside.to_string(),
        ]);
    }
    Ok(Outcome::ok(t))
}

fn growth(config: &ExperimentConfig) -> Result<Outcome> {
    let h = growth_histogram(&make_ball(config, config.radius)?);
    let mut t = Table::new(&["n", "sphere", "ball"]);
    for (n, (s, b)) in h.spheres.iter().zip(&h.balls).enumerate() {
        t.push(vec![n.to_string(), s.to_string(), b.to_string()]);
    }
    Ok(Outcome::ok(t))
}

fn delta_mode(config: &ExperimentConfig) -> DeltaMode {
    match config.sampling.delta_samples {
        Some(count) => DeltaMode::Sampled {
            count,
            seed: config.sampling.seed,
        },
        None => DeltaMode::Exhaustive,
    }
}

fn profile(config: &ExperimentConfig) -> Result<(Ball, Vec<DeltaEstimate>)> {
    let ball = make_ball(config, config.delta_radius())?;
    let profile = delta_profile(&ball, delta_mode(config))?;
    Ok((ball, profile))
}

const NON_HYPERBOLIC: &str =
    "delta_hat grows linearly with the radius; the group does not look hyperbolic";

fn gromov_delta(config: &ExperimentConfig) -> Result<Outcome> {
    let (ball, profile) = profile(config)?;
    let group = ball.group();
    let mut t = Table::new(&[
        "R",
        "delta_hat",
        "triples_examined",
        "witness_x",
        "witness_y",
        "witness_z",
    ]);
    for e in &profile {
        let [x, y, z] = match e.witness {
            Some((x, y, z)) => [x, y, z].map(|i| group.format(ball.element(i))),
            None => Default::default(),
        };
        t.push(vec![
            e.radius.to_string(),
            num(e.value()),
            e.triples_examined.to_string(),
            x,
            y,
            z,
        ]);
    }
    let mut out = Outcome::ok(t);
    if looks_non_hyperbolic(&profile) {
        out.warnings.push(NON_HYPERBOLIC.into());
    }
    Ok(out)
}

fn scale_for(config: &ExperimentConfig, delta: f64) -> Result<f64> {
    match config.a {
        Some(a) => Ok(a),
        None => Ok(choose_scale_parameter(delta, config.safety)?),
    }
}

fn choose_a(config: &ExperimentConfig) -> Result<Outcome> {
    let (_, profile) = profile(config)?;
    let delta = profile.last().map_or(0.0, |e| e.value());
    let a = scale_for(config, delta)?;
    let mut t = Table::new(&["delta_hat", "safety", "a", "lhs", "rhs", "valid"]);
    t.push(vec![
        num(delta),
        num(config.safety),
        num(a),
        num((3.0 * delta * a).exp_m1()),
        num(SQRT_2 - 1.0),
        scale_condition_holds(delta, a).to_string(),
    ]);
    let mut out = Outcome::ok(t);
    if looks_non_hyperbolic(&profile) {
        out.warnings.push(NON_HYPERBOLIC.into());
    }
    Ok(out)
}

fn floyd_diameter(config: &ExperimentConfig) -> Result<Outcome> {
    let outer = make_ball(config, config.floyd_ball_radius())?;
    let sampling = Sampling {
        pair_cap: config.sampling.pair_cap,
        seed: config.sampling.seed,
    };
    let mut t = Table::new(&["R", "max", "min_antipodal", "mean", "pairs"]);
    let mut out_warnings = Vec::new();
    for r in 1..=config.radius {
        let d = sphere_floyd_diameter(&outer, r, &config.floyd, &sampling)?;
        if !d.exhaustive {
            out_warnings.push(format!("sphere {r}: {} sampled pairs", d.pairs));
        }
        t.push(vec![
            r.to_string(),
            num(d.max),
            num(d.min_antipodal),
            num(d.mean),
            d.pairs.to_string(),
        ]);
    }
    let mut out = Outcome::ok(t);
    out.warnings = out_warnings;
    Ok(out)
}

/// Checks `(3 - 2e^{3δa})ρ <= θ_a <= ρ` on every pair of the ball, with
/// `ρ = e^{-a(x|y)}`, and records the range of the edge-path Floyd distance
/// (with `F(n) = e^{-an}`) relative to `θ_a`.
fn verify_inequality(config: &ExperimentConfig) -> Result<Outcome> {
    let (_, profile) = profile(config)?;
    if looks_non_hyperbolic(&profile) {
        return Err(CliError::Config(format!(
            "{NON_HYPERBOLIC}; refusing the inequality check"
        )));
    }
    let delta = profile.last().map_or(0.0, |e| e.value());
    let a = scale_for(config, delta)?;
    if !scale_condition_holds(delta, a) {
        return Err(CliError::Config(format!(
            "a = {a} violates e^(3*delta*a) - 1 < sqrt(2) - 1 for delta = {delta}"
        )));
    }

    let ball = make_ball(config, config.radius)?;
    let table = GromovTable::new(&ball)?;
    let theta = chain_distance_matrix(&table, a);
    let lower_factor = 3.0 - 2.0 * (3.0 * delta * a).exp();
    let floyd = AdmissibleFunction::Exponential { a };
    let n = ball.len();
    let (mut pairs, mut violations) = (0u64, 0u64);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let df = floyd_distances_from(&ball, i, &floyd);
        for j in i + 1..n {
            let rho = (-a * table.product(i, j).value()).exp();
            let th = theta[i * n + j];
            pairs += 1;
            if th > rho * (1.0 + INEQUALITY_SLACK)
                || th < lower_factor * rho * (1.0 - INEQUALITY_SLACK)
            {
                violations += 1;
            }
            let ratio = df[j] / th;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    let mut t = Table::new(&[
        "R",
        "delta_hat",
        "a",
        "pairs",
        "violations",
        "lower_factor",
        "min_df_over_theta",
        "max_df_over_theta",
    ]);
    let range = |x: f64| if pairs == 0 { String::new() } else { num(x) };
    t.push(vec![
        config.radius.to_string(),
        num(delta),
        num(a),
        pairs.to_string(),
        violations.to_string(),
        num(lower_factor),
        range(lo),
        range(hi),
    ]);
    let mut out = Outcome::ok(t);
    if violations > 0 {
        out.warnings.push(format!(
            "{violations} pairs violate the chain-metric bounds"
        ));
    }
    Ok(out)
}

fn witness(config: &ExperimentConfig) -> Result<Outcome> {
    require_p_above_one(config)?;
    let ball = make_ball(config, config.radius)?;
    let mut t = Table::new(&["R", "p", "energy", "bound", "ratio"]);
    for r in 1..=config.radius {
        let sub = ball.truncate(r);
        let field = witness_field(&sub, config.generator, &config.floyd)?;
        let rep = witness_energy_report(&sub, &field.field, &config.floyd, config.p)?;
        t.push(vec![
            r.to_string(),
            num(config.p),
            num(rep.energy),
            num(rep.bound),
            num(rep.ratio),
        ]);
    }
    Ok(Outcome::ok(t))
}

fn summability(config: &ExperimentConfig) -> Result<Outcome> {
    let group = config.build_group()?;
    let growth = GrowthHistogram::from_spheres(growth_series(&group, config.radius)?);
    let trace = summability_trace(&growth, &config.floyd, config.p)?;
    let mut t = Table::new(&["R", "partial_sum", "shell_term", "shell_ratio", "verdict"]);
    for rep in &trace {
        t.push(vec![
            rep.radius.to_string(),
            num(rep.partial_sum),
            num(rep.last_shell_term),
            opt(rep.shell_ratio),
            rep.verdict.as_str().to_string(),
        ]);
    }
    Ok(Outcome::ok(t))
}

fn build_field(config: &ExperimentConfig, ball: &Ball) -> Result<ScalarField> {
    let group = ball.group();
    Ok(match config.field {
        FieldSpec::Branch { generator } => {
            let s_inv = group.generator(group.inverse_generator(generator))?.clone();
            ScalarField::from_fn(ball, |i| {
                let x = ball.element(i);
                let shorter = group.word_length_unchecked(&group.multiply_unchecked(&s_inv, x))
                    < u64::from(ball.length(i));
                if shorter {
                    1.0
                } else {
                    0.0
                }
            })
        }
        FieldSpec::WordLength => ScalarField::from_fn(ball, |i| f64::from(ball.length(i))),
        FieldSpec::Witness => witness_field(ball, config.generator, &config.floyd)?.field,
        FieldSpec::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.sampling.seed);
            ScalarField::from_fn(ball, |_| rng.gen::<f64>())
        }
    })
}

fn solve(config: &ExperimentConfig) -> Result<Outcome> {
    require_p_above_one(config)?;
    let ball = make_ball(config, config.radius)?;
    let f = build_field(config, &ball)?;
    let (_, report) = solve_dirichlet(&ball, &f.trace(&ball), &config.solver_config())?;
    let mut t = Table::new(&["sweep", "energy", "residual"]);
    for (k, (e, r)) in report
        .energy_trace
        .iter()
        .zip(&report.residual_trace)
        .enumerate()
    {
        t.push(vec![k.to_string(), num(*e), num(*r)]);
    }
    Ok(flag_convergence(
        t,
        report.converged,
        report.sweeps,
        report.residual,
    ))
}

fn decomposition(config: &ExperimentConfig) -> Result<Outcome> {
    require_p_above_one(config)?;
    let ball = make_ball(config, config.radius)?;
    let f = build_field(config, &ball)?;
    let d = decompose(&ball, &f, &config.solver_config())?;
    let p = config.p;
    let mut t = Table::new(&[
        "R",
        "p",
        "energy_f",
        "energy_h",
        "energy_u",
        "h_at_identity",
        "converged",
    ]);
    t.push(vec![
        config.radius.to_string(),
        num(p),
        num(dirichlet_energy(&ball, &f, p)?),
        num(dirichlet_energy(&ball, &d.h, p)?),
        num(dirichlet_energy(&ball, &d.u, p)?),
        num(d.h.get(0)),
        d.report.converged.to_string(),
    ]);
    Ok(flag_convergence(
        t,
        d.report.converged,
        d.report.sweeps,
        d.report.residual,
    ))
}

fn flag_convergence(table: Table, converged: bool, sweeps: usize, residual: f64) -> Outcome {
    let mut out = Outcome::ok(table);
    out.converged = converged;
    if !converged {
        out.warnings.push(format!(
            "solver stopped after {sweeps} sweeps with residual {residual}"
        ));
    }
    out
}
