//! The acceptance checks, grouped into suites, with measured values.

use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::sample_unit_quaternion;
use crate::error::{Error, Result};
use crate::ewl::{eval_mixed_quantum, eval_pure_quantum, ewl_frame, MixedQuantumStrategy};
use crate::game::{rat, rational_to_f64, Rational};
use crate::json::Number;
use crate::mc::chunk_rng;
use crate::poker::{
    deals, enumerate_action_sequences, enumerate_pure_strategies, named_strategies, reduce_poker,
    Action, Card, PokerSpec, Variant,
};
use crate::quantized::{
    comparison_report, no_pure_equilibrium_witness, quaternion_assignment, quaternion_payoff,
    uniform_equilibrium_payoff, verify_security, Discrepancy, SecurityConfig,
};
use crate::strategic::{
    expected_payoff, is_correlated_equilibrium, is_product_realizable, security_level,
    snap_off_monte_carlo, snap_off_probability, solve_nash_shapley, solve_zero_sum_2x2,
    BuiltinGame, MixedProfile, OutcomeDistribution,
};

/// Groups of criteria runnable on their own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Golden tables and counts (1, 2).
    Tables,
    /// Classical equilibria and correlated equilibria (3, 4, 5, 11).
    Classical,
    /// Quantized checks (6 to 10).
    Quantum,
    /// Reported discrepancies (12).
    Report,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Tables => &[1, 2],
            Suite::Classical => &[3, 4, 5, 11],
            Suite::Quantum => &[6, 7, 8, 9, 10],
            Suite::Report => &[12],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "tables" => Suite::Tables,
            "classical" => Suite::Classical,
            "quantum" => Suite::Quantum,
            "report" => Suite::Report,
            "all" => Suite::All,
            _ => {
                return Err(Error::UnknownName(format!(
                    "suite {s:?} (expected tables, classical, quantum, report or all)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Haar draws per Monte Carlo estimate.
    pub samples: u64,
    /// Simulated deals for the snap-off estimate.
    pub deals: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            samples: 100_000,
            deals: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: Number,
}

fn exact(name: &str, r: &Rational) -> Measurement {
    Measurement {
        name: name.into(),
        value: Number::rational(r),
    }
}

fn float(name: &str, form: impl Into<String>, v: f64) -> Measurement {
    Measurement {
        name: name.into(),
        value: Number::closed_form(form, v),
    }
}

fn computed(name: &str, v: f64) -> Measurement {
    Measurement {
        name: name.into(),
        value: Number::computed(v),
    }
}

fn estimate(name: &str, e: &crate::mc::MonteCarloEstimate) -> Measurement {
    Measurement {
        name: name.into(),
        value: Number::estimate(e),
    }
}

fn count(name: &str, n: usize) -> Measurement {
    exact(name, &Rational::from(n as i64))
}

/// Outcome of one criterion. Wall time is kept out of the JSON so that
/// reports are reproducible.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub criteria: Vec<CriterionResult>,
    pub discrepancies: Vec<Discrepancy>,
    pub pass: bool,
}

pub const TITLES: [&str; 12] = [
    "golden tables",
    "strategy and sequence counts",
    "classical Simplified Poker equilibrium",
    "classical Nash-Shapley equilibrium",
    "snap-off probability",
    "unentangled quantization equals the mixed extension",
    "quaternion shortcut equals the state-vector oracle",
    "quantized Simplified Poker value",
    "quantized Nash-Shapley payoffs and security",
    "no pure quantum equilibrium",
    "correlated equilibria",
    "discrepancies surfaced",
];

struct Check {
    pass: bool,
    measurements: Vec<Measurement>,
    notes: Vec<String>,
    discrepancies: Vec<Discrepancy>,
}

impl Check {
    fn new() -> Self {
        Self {
            pass: true,
            measurements: Vec::new(),
            notes: Vec::new(),
            discrepancies: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn budget(&mut self, start: Instant, limit: Duration) {
        if start.elapsed() > limit {
            self.pass = false;
            self.notes
                .push(format!("failed: runtime over {} s", limit.as_secs()));
        }
    }
}

pub fn run_suite(suite: Suite, config: VerifyConfig) -> VerifyReport {
    let mut criteria = Vec::new();
    let mut discrepancies = Vec::new();
    for &id in suite.criteria() {
        let (result, found) = run_criterion(id, config);
        discrepancies.extend(found);
        criteria.push(result);
    }
    let pass = criteria.iter().all(|c| c.pass);
    VerifyReport {
        suite,
        config,
        criteria,
        discrepancies,
        pass,
    }
}

/// Runs criterion `id` (1 to 12). Errors count as failures.
pub fn run_criterion(id: u8, config: VerifyConfig) -> (CriterionResult, Vec<Discrepancy>) {
    let start = Instant::now();
    let outcome = match id {
        1 => golden_tables(),
        2 => counts(),
        3 => simplified_equilibrium(),
        4 => nash_shapley_equilibrium(),
        5 => snap_off(config),
        6 => unentangled_equivalence(config),
        7 => oracle_equivalence(config),
        8 => quantized_simplified(config),
        9 => quantized_nash_shapley(config),
        10 => no_pure_equilibrium(config),
        11 => correlated(),
        12 => discrepancies(config),
        _ => Err(Error::Domain(format!("no criterion {id}"))),
    };
    let check = outcome.unwrap_or_else(|e| {
        let mut c = Check::new();
        c.require(false, e.to_string());
        c
    });
    let title = TITLES
        .get(usize::from(id).wrapping_sub(1))
        .copied()
        .unwrap_or("unknown")
        .to_string();
    let result = CriterionResult {
        id,
        title,
        pass: check.pass,
        measurements: check.measurements,
        notes: check.notes,
        elapsed: start.elapsed(),
    };
    (result, check.discrepancies)
}

fn golden_tables() -> Result<Check> {
    let start = Instant::now();
    let mut c = Check::new();
    for (spec, table) in [
        (PokerSpec::simplified(), BuiltinGame::SimplifiedPokerReduced),
        (PokerSpec::nash_shapley(), BuiltinGame::NashShapleyReduced),
    ] {
        let red = reduce_poker(&spec)?;
        c.require(
            red.reduced == table.game(),
            format!("{table} reduced table"),
        );
        c.require(
            red.matches_named(),
            format!("{table} survivors are the named strategies"),
        );
        for (k, s) in red.survivors().iter().enumerate() {
            c.measurements.push(count(
                &format!("{table} player {} survivors", k + 1),
                s.len(),
            ));
        }
        c.notes
            .push(format!("{table}: {} eliminations", red.trace().len()));
    }
    let pd = BuiltinGame::PrisonersDilemma.game();
    c.require(
        pd.payoff(&[1, 1]) == [rat(1, 1), rat(1, 1)],
        "prisoner's dilemma table",
    );
    let ch = BuiltinGame::Chicken.game();
    c.require(
        ch.payoff(&[1, 1]) == [rat(-1, 1), rat(-1, 1)],
        "chicken table",
    );
    c.budget(start, Duration::from_secs(10));
    Ok(c)
}

fn counts() -> Result<Check> {
    let mut c = Check::new();
    let ns = PokerSpec::nash_shapley();
    let seqs = enumerate_action_sequences(&ns).len();
    c.measurements
        .push(count("NashShapley action sequences", seqs));
    c.require(seqs == 13, "13 action sequences");
    for (spec, want) in [(PokerSpec::simplified(), 4), (ns, 256)] {
        for k in 0..spec.players() {
            let n = enumerate_pure_strategies(&spec, k)?.len();
            c.measurements.push(count(
                &format!("{:?} player {} pure strategies", spec.variant, k + 1),
                n,
            ));
            c.require(
                n == want,
                format!("{want} pure strategies for player {}", k + 1),
            );
        }
    }
    Ok(c)
}

/// Probability that player 1 is dealt `L` and bets, under a mixture of the
/// named Simplified Poker plans.
pub fn simplified_bluff_frequency(weights: &[Rational]) -> Rational {
    let plans = &named_strategies(Variant::SimplifiedPoker)[0];
    let mut total = Rational::zero();
    for deal in deals(2) {
        if deal.cards[0] != Card::L {
            continue;
        }
        for ((_, plan), w) in plans.iter().zip(weights) {
            if plan.action(Card::L, 0) == Action::Bet {
                total += deal.probability * w;
            }
        }
    }
    total
}

fn simplified_equilibrium() -> Result<Check> {
    let mut c = Check::new();
    let game = BuiltinGame::SimplifiedPokerReduced.game();
    let sol = solve_zero_sum_2x2(&game)?;
    let third = Rational::new(1, 3);
    let bluff = simplified_bluff_frequency(sol.profile.player(0));
    c.measurements.push(exact("value", &sol.value));
    c.measurements
        .push(exact("bluff frequency (dealt L and bet)", &bluff));
    c.measurements
        .push(exact("weight on s2", &sol.deceptive_frequency));
    c.measurements
        .push(exact("call frequency (weight on t2)", &sol.call_frequency));
    c.require(sol.value == Rational::new(5, 6), "value 5/6");
    c.require(bluff == third, "bluff frequency 1/3");
    c.require(sol.call_frequency == third, "call frequency 1/3");
    let floor = security_level(&game, sol.profile.player(0))?;
    c.measurements.push(exact("security level", &floor));
    c.require(floor == Rational::new(5, 6), "security level 5/6");
    Ok(c)
}

fn nash_shapley_equilibrium() -> Result<Check> {
    let mut c = Check::new();
    let sol = solve_nash_shapley()?;
    let closed = (1.4f64).sqrt() - 1.0;
    c.measurements.push(float("p", sol.p_exact.clone(), sol.p));
    c.require((sol.p - closed).abs() < 1e-12, "p = sqrt(7/5) - 1");
    let worst = sol
        .indifference_residuals
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    c.measurements
        .push(computed("largest indifference residual", worst));
    c.require(worst < 1e-9, "indifference residuals below 1e-9");
    let u1_weight = 1.0 - sol.bluff_weight;
    c.measurements
        .push(float("player 3 weight on u1", "(4p+8)/(5p+12)", u1_weight));
    c.measurements.push(float(
        "player 3 weight on u2",
        "(p+4)/(5p+12)",
        sol.bluff_weight,
    ));
    c.require(
        (u1_weight - sol.quoted_closed_form).abs() < 1e-3,
        "(4p+8)/(5p+12) is an equilibrium weight",
    );
    c.require(
        (sol.quoted_closed_form - 0.676).abs() < 1e-3,
        "(4p+8)/(5p+12) ≈ 0.676",
    );
    c.notes
        .push("(4p+8)/(5p+12) is the weight of u1 (play directly); u2 carries the rest".into());
    for (k, (v, s)) in sol.payoffs.iter().zip(&sol.payoffs_exact).enumerate() {
        c.measurements
            .push(float(&format!("player {} payoff", k + 1), s.clone(), *v));
    }
    let target = [-0.3998, -0.3998, 0.7996];
    c.require(
        sol.payoffs
            .iter()
            .zip(target)
            .all(|(v, t)| (v - t).abs() <= 0.01),
        "payoffs near (-0.40, -0.40, 0.80)",
    );
    c.require(sol.regret < 1e-9, "no profitable deviation");
    Ok(c)
}

fn snap_off(config: VerifyConfig) -> Result<Check> {
    let mut c = Check::new();
    let p = solve_nash_shapley()?.p;
    let prob = snap_off_probability(p)?;
    c.measurements
        .push(float("snap-off probability", "2/7", prob));
    c.require((prob - 0.2857).abs() <= 1e-4, "0.2857 ± 0.0001");
    let mc = snap_off_monte_carlo(p, config.deals, config.seed)?;
    c.measurements
        .push(estimate("simulated snap-off probability", &mc));
    c.require(mc.within(prob, 4.0), "simulation within 4 standard errors");
    Ok(c)
}

fn random_mixture<R: Rng>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

fn unentangled_equivalence(config: VerifyConfig) -> Result<Check> {
    let start = Instant::now();
    let mut c = Check::new();
    let flip = ewl_frame(2)?.matrix(crate::algebra::Quaternion::I);
    let identity = crate::algebra::Mat2::IDENTITY;
    let mut rng = chunk_rng(config.seed, 1 << 40);
    let mut worst = 0.0f64;
    for game in [
        BuiltinGame::SimplifiedPokerReduced,
        BuiltinGame::PrisonersDilemma,
        BuiltinGame::Chicken,
    ] {
        let g = game.game();
        for _ in 0..200 {
            let (a, b) = (random_mixture(&mut rng), random_mixture(&mut rng));
            let classical = expected_payoff(
                &g,
                &MixedProfile::new(vec![vec![a, 1.0 - a], vec![b, 1.0 - b]])?,
            )?;
            let profile = [
                MixedQuantumStrategy::atoms(vec![(identity, a), (flip, 1.0 - a)])?,
                MixedQuantumStrategy::atoms(vec![(identity, b), (flip, 1.0 - b)])?,
            ];
            let quantum = eval_mixed_quantum(&g, false, &profile, 0, config.seed)?.means();
            worst = classical
                .iter()
                .zip(&quantum)
                .fold(worst, |m, (x, y)| m.max((x - y).abs()));
        }
    }
    c.measurements
        .push(computed("largest payoff difference", worst));
    c.notes
        .push("200 random mixture pairs per game on SP, PD and Chicken".into());
    c.require(worst <= 1e-12, "agreement within 1e-12");
    c.budget(start, Duration::from_secs(5));
    Ok(c)
}

fn oracle_equivalence(config: VerifyConfig) -> Result<Check> {
    let start = Instant::now();
    let mut c = Check::new();
    let assignment = quaternion_assignment()?;
    c.notes.push(format!(
        "calibrated product {} with components 1, i, j, k on {:?}",
        assignment.expression, assignment.labels
    ));
    let frame = ewl_frame(2)?;
    let game = BuiltinGame::SimplifiedPokerReduced.game();
    let mut rng = chunk_rng(config.seed, 1 << 41);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (p, q) = (
            sample_unit_quaternion(&mut rng),
            sample_unit_quaternion(&mut rng),
        );
        let fast = quaternion_payoff(&game, p, q, assignment)?;
        let (dist, _) =
            eval_pure_quantum(&game, true, &[frame.quat_to_su2(p), frame.quat_to_su2(q)])?;
        worst = fast
            .distribution
            .iter()
            .zip(&dist)
            .fold(worst, |m, (x, y)| m.max((x - y).abs()));
    }
    c.measurements
        .push(computed("largest probability difference", worst));
    c.require(
        worst <= 1e-12,
        "agreement within 1e-12 on 1000 random pairs",
    );
    c.budget(start, Duration::from_secs(5));
    Ok(c)
}

fn quantized_simplified(config: VerifyConfig) -> Result<Check> {
    let mut c = Check::new();
    let game = BuiltinGame::SimplifiedPokerReduced.game();
    let target = uniform_equilibrium_payoff(&game)?;
    c.measurements
        .push(exact("uniform equilibrium payoff", &target[0]));
    c.require(
        target == [rat(15, 16), rat(-15, 16)],
        "average payoff (15/16, -15/16)",
    );
    let report = verify_security(
        &game,
        &[0],
        SecurityConfig {
            samples: 0,
            opponents: 50,
            seed: config.seed,
        },
    )?;
    c.measurements.push(computed(
        "q8 largest deviation over 50 opponents",
        report.discrete_max_deviation,
    ));
    c.require(
        report.discrete_max_deviation <= 1e-12,
        "q8 gives exactly (15/16, -15/16)",
    );
    let mut rng = chunk_rng(config.seed, 1 << 42);
    let opponent = ewl_frame(2)?.quat_to_su2(sample_unit_quaternion(&mut rng));
    let profile = [
        MixedQuantumStrategy::HaarUniform,
        MixedQuantumStrategy::pure(opponent)?,
    ];
    let est = eval_mixed_quantum(&game, true, &profile, config.samples, config.seed)?;
    c.measurements
        .push(estimate("Haar player 1 payoff", &est.payoffs[0]));
    c.require(
        est.payoffs[0].within(15.0 / 16.0, 4.0),
        "Haar estimate within 4 SE of 15/16",
    );
    Ok(c)
}

fn quantized_nash_shapley(config: VerifyConfig) -> Result<Check> {
    let start = Instant::now();
    let mut c = Check::new();
    let game = BuiltinGame::NashShapleyReduced.game();
    let target: Vec<f64> = uniform_equilibrium_payoff(&game)?
        .iter()
        .map(rational_to_f64)
        .collect();
    let all = eval_mixed_quantum(
        &game,
        true,
        &vec![MixedQuantumStrategy::HaarUniform; 3],
        config.samples,
        config.seed,
    )?;
    for (k, e) in all.payoffs.iter().enumerate() {
        c.measurements
            .push(estimate(&format!("all Haar, player {} payoff", k + 1), e));
        c.require(
            e.within(target[k], 4.0),
            format!("player {} within 4 SE", k + 1),
        );
    }
    let sec = verify_security(
        &game,
        &[0, 1],
        SecurityConfig {
            samples: config.samples,
            opponents: 20,
            seed: config.seed,
        },
    )?;
    let mut third_ok = true;
    for (t, trial) in sec.trials.iter().enumerate() {
        if let Number::Estimate {
            value, std_error, ..
        } = trial.haar[2]
        {
            third_ok &= (value - target[2]).abs() <= 4.0 * std_error + 1e-12;
        } else {
            third_ok = false;
        }
        if t == 0 {
            c.measurements.push(Measurement {
                name: "players 1-2 Haar, player 3 payoff (first opponent)".into(),
                value: trial.haar[2].clone(),
            });
        }
    }
    c.require(
        third_ok,
        "player 3 within 4 SE of -1.75 against 20 strategies",
    );
    c.measurements.push(computed(
        "players 1-2 discrete, largest payoff deviation",
        sec.discrete_max_deviation,
    ));
    let alone = verify_security(
        &game,
        &[0],
        SecurityConfig {
            samples: 0,
            opponents: 20,
            seed: config.seed,
        },
    )?;
    c.measurements.push(computed(
        "player 1 alone discrete, largest deviation from uniform outcomes",
        alone.uniform_max_deviation,
    ));
    c.notes.push(format!(
        "one early player mixing alone {} the outcome distribution to uniform",
        if alone.uniform_max_deviation <= 1e-12 {
            "pins"
        } else {
            "does not pin"
        }
    ));
    c.budget(start, Duration::from_secs(60));
    Ok(c)
}

fn no_pure_equilibrium(config: VerifyConfig) -> Result<Check> {
    let mut c = Check::new();
    let game = BuiltinGame::SimplifiedPokerReduced.game();
    let assignment = quaternion_assignment()?;
    let mut rng = chunk_rng(config.seed, 1 << 43);
    let mut improved = 0usize;
    for _ in 0..100 {
        let (p, q) = (
            sample_unit_quaternion(&mut rng),
            sample_unit_quaternion(&mut rng),
        );
        let w = no_pure_equilibrium_witness(&game, p, q, assignment)?;
        if w.improved && (w.oracle_after - w.best).abs() <= 1e-9 {
            improved += 1;
        }
    }
    c.measurements.push(count(
        "profiles with a strictly improving deviation",
        improved,
    ));
    c.require(
        improved == 100,
        "every profile has an improving deviation to the best outcome",
    );
    Ok(c)
}

fn dist(probs: [Rational; 4]) -> Result<OutcomeDistribution<Rational>> {
    OutcomeDistribution::new(vec![2, 2], probs.to_vec())
}

fn correlated() -> Result<Check> {
    let mut c = Check::new();
    let (zero, third, half) = (Rational::zero(), Rational::new(1, 3), Rational::new(1, 2));
    let chicken = BuiltinGame::Chicken.game();
    let three = is_correlated_equilibrium(&chicken, &dist([third, third, third, zero])?)?;
    c.measurements
        .push(exact("Chicken three-outcome payoff", &three.payoff[0]));
    c.require(
        three.is_correlated_equilibrium && three.payoff == [rat(5, 3), rat(5, 3)],
        "Chicken uniform over three outcomes",
    );
    let coin = is_correlated_equilibrium(&chicken, &dist([zero, half, half, zero])?)?;
    c.measurements
        .push(exact("Chicken coin-flip payoff", &coin.payoff[0]));
    c.require(
        coin.is_correlated_equilibrium && coin.payoff == [rat(3, 2), rat(3, 2)],
        "Chicken coin flip",
    );

    let pd = BuiltinGame::PrisonersDilemma.game();
    let (mut rejected, mut wrongly_accepted) = (0usize, 0usize);
    for a in 0..=20i64 {
        for b in 0..=(20 - a) {
            for cc in 0..=(20 - a - b) {
                let d = 20 - a - b - cc;
                let rho = dist([
                    Rational::new(a, 20),
                    Rational::new(b, 20),
                    Rational::new(cc, 20),
                    Rational::new(d, 20),
                ])?;
                let ok = is_correlated_equilibrium(&pd, &rho)?.is_correlated_equilibrium;
                if d < 20 {
                    if ok {
                        wrongly_accepted += 1;
                    } else {
                        rejected += 1;
                    }
                } else {
                    c.require(ok, "point mass on (s2, t2) is a correlated equilibrium");
                }
            }
        }
    }
    c.measurements
        .push(count("PD grid points rejected", rejected));
    c.require(
        wrongly_accepted == 0,
        "PD rejects every grid point with mass off (s2, t2)",
    );

    c.require(
        !is_product_realizable(&dist([half, zero, zero, half])?)?,
        "diagonal distribution is not a product",
    );
    let mut products_ok = true;
    for i in 0..=20i64 {
        for j in 0..=20i64 {
            let (p, q) = (Rational::new(i, 20), Rational::new(j, 20));
            let one = Rational::one();
            let prod = dist([p * q, p * (one - q), (one - p) * q, (one - p) * (one - q)])?;
            products_ok &= is_product_realizable(&prod)?;
        }
    }
    c.require(products_ok, "every product distribution is realizable");
    Ok(c)
}

fn discrepancies(config: VerifyConfig) -> Result<Check> {
    let mut c = Check::new();
    let report = comparison_report(config.samples, config.seed)?;
    let pd = report.discrepancies.iter().find(|d| d.quoted == "2.5");
    match pd {
        Some(d) => {
            c.measurements.push(Measurement {
                name: "PD quantized payoff".into(),
                value: d.computed.clone(),
            });
            c.require(
                !d.agrees && d.computed.value() == 2.25,
                "PD average 2.25 flagged against 2.5",
            );
        }
        None => c.require(false, "PD discrepancy missing"),
    }
    match report
        .discrepancies
        .iter()
        .find(|d| d.quantity.contains("first strategy"))
    {
        Some(d) => c.measurements.push(Measurement {
            name: "SP weight on s1".into(),
            value: d.computed.clone(),
        }),
        None => c.require(false, "SP first-strategy flag missing"),
    }
    c.require(
        report.rows.iter().all(|r| r.certified),
        "quantized Haar estimates certified",
    );
    c.discrepancies = report.discrepancies;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("Tables".parse::<Suite>().unwrap(), Suite::Tables);
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::All.criteria().len(), 12);
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [2, 3, 4, 11] {
            let (r, _) = run_criterion(id, VerifyConfig::default());
            assert!(r.pass, "criterion {id}: {:?}", r.notes);
        }
    }

    #[test]
    fn bluff_frequency_counts_low_hands() {
        assert_eq!(
            simplified_bluff_frequency(&[Rational::one(), Rational::zero()]),
            Rational::zero()
        );
        assert_eq!(
            simplified_bluff_frequency(&[Rational::zero(), Rational::one()]),
            Rational::new(1, 2)
        );
    }
}
