//! Classical analysis: mixed extensions, Nash checks, the two poker
//! equilibria, product distributions and correlated equilibria.

use std::fmt;
use std::str::FromStr;

use num_traits::{Num, One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{rat, rational_to_f64, Profiles, Rational, StrategicGame};
use crate::mc::{chunk_rng, MonteCarloEstimate, CHUNK};

/// Probability scalar: exact rationals or doubles.
pub trait Scalar: Num + Copy + PartialOrd + Send + Sync + fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Whether a probability total is acceptably close to one.
    fn is_unit_total(&self) -> bool {
        (*self - Self::one()).is_negligible()
    }
    /// Exactly zero for rationals, within `1e-12` for doubles.
    fn is_negligible(&self) -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        *r
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-12
    }
}

/// One probability vector per player over that player's strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile<T = Rational> {
    probs: Vec<Vec<T>>,
}

impl<T: Scalar> MixedProfile<T> {
    pub fn new(probs: Vec<Vec<T>>) -> Result<Self> {
        for (p, v) in probs.iter().enumerate() {
            if v.iter().any(|x| *x < T::zero()) {
                return Err(Error::Domain(format!(
                    "player {} has a negative probability",
                    p + 1
                )));
            }
            let total = v.iter().fold(T::zero(), |a, &b| a + b);
            if !total.is_unit_total() {
                return Err(Error::Domain(format!(
                    "player {} probabilities sum to {:?}",
                    p + 1,
                    total
                )));
            }
        }
        Ok(Self { probs })
    }

    /// Point mass on a pure profile.
    pub fn pure(shape: &[usize], profile: &[usize]) -> Result<Self> {
        if shape.len() != profile.len() || profile.iter().zip(shape).any(|(s, n)| s >= n) {
            return Err(Error::Shape(format!(
                "profile {profile:?} does not fit shape {shape:?}"
            )));
        }
        Ok(Self {
            probs: shape
                .iter()
                .zip(profile)
                .map(|(&n, &s)| {
                    (0..n)
                        .map(|i| if i == s { T::one() } else { T::zero() })
                        .collect()
                })
                .collect(),
        })
    }

    pub fn probs(&self) -> &[Vec<T>] {
        &self.probs
    }

    pub fn player(&self, p: usize) -> &[T] {
        &self.probs[p]
    }

    fn check_shape(&self, game: &StrategicGame) -> Result<()> {
        let shape = game.shape();
        let mine: Vec<usize> = self.probs.iter().map(Vec::len).collect();
        if mine != shape {
            return Err(Error::Shape(format!(
                "profile shape {mine:?} does not match game {shape:?}"
            )));
        }
        Ok(())
    }
}

/// A distribution over the pure profiles of a game, in [`Profiles`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<T = Rational> {
    shape: Vec<usize>,
    probs: Vec<T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    pub fn new(shape: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        if shape.iter().product::<usize>() != probs.len() {
            return Err(Error::Shape(format!(
                "{} probabilities for shape {shape:?}",
                probs.len()
            )));
        }
        if probs.iter().any(|x| *x < T::zero()) {
            return Err(Error::Domain("negative outcome probability".into()));
        }
        let total = probs.iter().fold(T::zero(), |a, &b| a + b);
        if !total.is_unit_total() {
            return Err(Error::Domain(format!(
                "outcome probabilities sum to {total:?}"
            )));
        }
        Ok(Self { shape, probs })
    }

    /// Point mass on one profile.
    pub fn point(shape: Vec<usize>, profile: &[usize]) -> Result<Self> {
        let idx = Profiles::new(&shape)
            .position(|p| p == profile)
            .ok_or_else(|| {
                Error::Shape(format!("profile {profile:?} does not fit shape {shape:?}"))
            })?;
        let mut probs = vec![T::zero(); shape.iter().product()];
        probs[idx] = T::one();
        Ok(Self { shape, probs })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Expected payoff vector of `game` under this distribution.
    pub fn expectation(&self, game: &StrategicGame) -> Result<Vec<T>> {
        if game.shape() != self.shape {
            return Err(Error::Shape("distribution does not match the game".into()));
        }
        let mut out = vec![T::zero(); game.num_players()];
        for (prof, &w) in game.profiles().zip(&self.probs) {
            for (o, v) in out.iter_mut().zip(game.payoff(&prof)) {
                *o = *o + w * T::from_rational(v);
            }
        }
        Ok(out)
    }
}

/// The example games with their tables as printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuiltinGame {
    PrisonersDilemma,
    Chicken,
    SimplifiedPokerReduced,
    NashShapleyReduced,
}

impl BuiltinGame {
    pub const ALL: [BuiltinGame; 4] = [
        BuiltinGame::PrisonersDilemma,
        BuiltinGame::Chicken,
        BuiltinGame::SimplifiedPokerReduced,
        BuiltinGame::NashShapleyReduced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinGame::PrisonersDilemma => "PrisonersDilemma",
            BuiltinGame::Chicken => "Chicken",
            BuiltinGame::SimplifiedPokerReduced => "SimplifiedPokerReduced",
            BuiltinGame::NashShapleyReduced => "NashShapleyReduced",
        }
    }

    pub fn game(self) -> StrategicGame {
        let st = (&["s1", "s2"][..], &["t1", "t2"][..]);
        match self {
            BuiltinGame::PrisonersDilemma => {
                StrategicGame::bimatrix(st.0, st.1, &[&[(3, 3), (0, 5)], &[(5, 0), (1, 1)]])
            }
            BuiltinGame::Chicken => {
                StrategicGame::bimatrix(st.0, st.1, &[&[(2, 2), (0, 3)], &[(3, 0), (-1, -1)]])
            }
            BuiltinGame::SimplifiedPokerReduced => {
                let labels = vec![
                    vec!["s1".into(), "s2".into()],
                    vec!["t1".into(), "t2".into()],
                ];
                StrategicGame::new(
                    labels,
                    vec![
                        vec![rat(0, 1), rat(0, 1)],
                        vec![rat(5, 2), rat(-5, 2)],
                        vec![rat(5, 4), rat(-5, 4)],
                        vec![rat(0, 1), rat(0, 1)],
                    ],
                )
            }
            BuiltinGame::NashShapleyReduced => {
                let labels = ["s", "t", "u"]
                    .iter()
                    .map(|c| vec![format!("{c}1"), format!("{c}2")])
                    .collect();
                // (s, t, u) with u varying fastest
                let table: [[i64; 3]; 8] = [
                    [0, 0, 0],
                    [-2, -2, 4],
                    [2, -4, 2],
                    [-2, 6, -4],
                    [-4, 2, 2],
                    [6, -2, -4],
                    [-3, -3, 6],
                    [10, 10, -20],
                ];
                StrategicGame::new(
                    labels,
                    table
                        .iter()
                        .map(|v| v.iter().map(|&x| x.into()).collect())
                        .collect(),
                )
            }
        }
        .expect("builtin tables are well formed")
    }
}

impl FromStr for BuiltinGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "prisonersdilemma" | "pd" => BuiltinGame::PrisonersDilemma,
            "chicken" => BuiltinGame::Chicken,
            "simplifiedpokerreduced" | "simplifiedpoker" | "sp" => {
                BuiltinGame::SimplifiedPokerReduced
            }
            "nashshapleyreduced" | "nashshapley" | "ns" => BuiltinGame::NashShapleyReduced,
            _ => return Err(Error::UnknownName(s.to_string())),
        })
    }
}

impl fmt::Display for BuiltinGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn builtin_game(name: &str) -> Result<StrategicGame> {
    Ok(name.parse::<BuiltinGame>()?.game())
}

/// Expected payoff vector of a mixed profile.
pub fn expected_payoff<T: Scalar>(
    game: &StrategicGame,
    profile: &MixedProfile<T>,
) -> Result<Vec<T>> {
    product_distribution(profile, game)?.expectation(game)
}

/// Outer product of the players' mixtures, laid out over pure profiles.
pub fn product_distribution<T: Scalar>(
    profile: &MixedProfile<T>,
    game: &StrategicGame,
) -> Result<OutcomeDistribution<T>> {
    profile.check_shape(game)?;
    let probs = game
        .profiles()
        .map(|prof| {
            prof.iter()
                .enumerate()
                .fold(T::one(), |acc, (p, &s)| acc * profile.probs[p][s])
        })
        .collect();
    Ok(OutcomeDistribution {
        shape: game.shape(),
        probs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NashCheck<T> {
    pub is_nash: bool,
    /// Largest gain any player gets from a pure unilateral deviation.
    pub regret: T,
    pub per_player: Vec<T>,
}

pub fn is_nash<T: Scalar>(
    game: &StrategicGame,
    profile: &MixedProfile<T>,
    tol: T,
) -> Result<NashCheck<T>> {
    let current = expected_payoff(game, profile)?;
    let shape = game.shape();
    let mut per_player = Vec::with_capacity(shape.len());
    for (p, &n) in shape.iter().enumerate() {
        let mut best = T::zero();
        for s in 0..n {
            let mut dev = profile.clone();
            dev.probs[p] = (0..n)
                .map(|i| if i == s { T::one() } else { T::zero() })
                .collect();
            let gain = expected_payoff(game, &dev)?[p] - current[p];
            if gain > best {
                best = gain;
            }
        }
        per_player.push(best);
    }
    let regret = per_player
        .iter()
        .copied()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    Ok(NashCheck {
        is_nash: regret <= tol,
        regret,
        per_player,
    })
}

/// Equilibrium of a two-player zero-sum 2×2 game.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSumSolution {
    pub profile: MixedProfile<Rational>,
    /// Value to player 1.
    pub value: Rational,
    /// Whether a saddle point settles the game.
    pub pure: bool,
    /// Weight on player 1's second strategy.
    pub deceptive_frequency: Rational,
    /// Weight on player 2's second strategy.
    pub call_frequency: Rational,
}

pub fn solve_zero_sum_2x2(game: &StrategicGame) -> Result<ZeroSumSolution> {
    if game.shape() != [2, 2] {
        return Err(Error::Shape(format!(
            "expected a 2×2 game, got {:?}",
            game.shape()
        )));
    }
    if !game.is_zero_sum() {
        return Err(Error::NotZeroSum);
    }
    let a = |i: usize, j: usize| game.payoff(&[i, j])[0];
    let finish =
        |p: Rational, q: Rational, value: Rational, pure: bool| -> Result<ZeroSumSolution> {
            let one = Rational::one();
            Ok(ZeroSumSolution {
                profile: MixedProfile::new(vec![vec![p, one - p], vec![q, one - q]])?,
                value,
                pure,
                deceptive_frequency: one - p,
                call_frequency: one - q,
            })
        };
    for i in 0..2 {
        for j in 0..2 {
            let v = a(i, j);
            if v <= a(i, 1 - j) && v >= a(1 - i, j) {
                let unit = |k: usize| {
                    if k == 0 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                };
                return finish(unit(i), unit(j), v, true);
            }
        }
    }
    // no saddle point, so the indifference denominator is nonzero
    let den = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
    let p = (a(1, 1) - a(1, 0)) / den;
    let q = (a(1, 1) - a(0, 1)) / den;
    let value = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / den;
    finish(p, q, value, false)
}

/// Isolated equilibria of a 2×2 game: the pure ones in profile order, then
/// the completely mixed one when both indifference points lie strictly
/// inside `(0, 1)`.
pub fn equilibria_2x2(game: &StrategicGame) -> Result<Vec<MixedProfile<Rational>>> {
    if game.shape() != [2, 2] {
        return Err(Error::Shape(format!(
            "expected a 2×2 game, got {:?}",
            game.shape()
        )));
    }
    let mut found = Vec::new();
    for profile in game.profiles() {
        let mix = MixedProfile::pure(&[2, 2], &profile)?;
        if is_nash(game, &mix, Rational::zero())?.is_nash {
            found.push(mix);
        }
    }
    let u = |k: usize, i: usize, j: usize| game.payoff(&[i, j])[k];
    // p = weight on row 0 making player 2 indifferent, q likewise for player 1
    let den_p = u(1, 0, 0) - u(1, 1, 0) - u(1, 0, 1) + u(1, 1, 1);
    let den_q = u(0, 0, 0) - u(0, 0, 1) - u(0, 1, 0) + u(0, 1, 1);
    if !den_p.is_zero() && !den_q.is_zero() {
        let p = (u(1, 1, 1) - u(1, 1, 0)) / den_p;
        let q = (u(0, 1, 1) - u(0, 0, 1)) / den_q;
        let inside = |x: Rational| x > Rational::zero() && x < Rational::one();
        if inside(p) && inside(q) {
            let one = Rational::one();
            let mix = MixedProfile::new(vec![vec![p, one - p], vec![q, one - q]])?;
            if is_nash(game, &mix, Rational::zero())?.is_nash {
                found.push(mix);
            }
        }
    }
    Ok(found)
}

/// Worst payoff player 1's mixture guarantees against pure replies.
pub fn security_level(game: &StrategicGame, player1_mix: &[Rational]) -> Result<Rational> {
    let mut worst: Option<Rational> = None;
    for j in 0..game.shape()[1] {
        let mut col = vec![Rational::zero(); game.shape()[1]];
        col[j] = Rational::one();
        let v = expected_payoff(game, &MixedProfile::new(vec![player1_mix.to_vec(), col])?)?[0];
        worst = Some(worst.map_or(v, |w: Rational| w.min(v)));
    }
    worst.ok_or_else(|| Error::Shape("player 2 has no strategies".into()))
}

/// Equilibrium of the reduced three-player game.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NashShapleySolution {
    /// Deceptive-play probability shared by players 1 and 2.
    pub p: f64,
    /// `p` as `c + sqrt(r)` with rational `c` and `r`.
    pub p_exact: String,
    /// Player 3's equilibrium weight on `u2` (running a possible bluff).
    pub bluff_weight: f64,
    /// `(p+4)/(5p+12)`, the closed form of the bluff weight.
    pub bluff_closed_form: f64,
    /// `(4p+8)/(5p+12)`, the closed form quoted for player 3's bluff.
    pub quoted_closed_form: f64,
    /// The quoted form equals the equilibrium weight of `u1`, not `u2`.
    pub quoted_form_is_u1_weight: bool,
    pub payoffs: Vec<f64>,
    pub payoffs_exact: Vec<String>,
    /// Payoff difference between each player's two strategies at equilibrium.
    pub indifference_residuals: Vec<f64>,
    pub regret: f64,
}

impl NashShapleySolution {
    pub fn profile(&self) -> MixedProfile<f64> {
        let (p, z) = (self.p, self.bluff_weight);
        MixedProfile {
            probs: vec![vec![1.0 - p, p], vec![1.0 - p, p], vec![1.0 - z, z]],
        }
    }
}

/// Solves the reduced game by indifference.
///
/// Player 3 is indifferent iff a quadratic in the early players' common
/// deception probability vanishes; its coefficients are read off the table
/// exactly. Player 1's indifference is then linear in player 3's mixture.
pub fn solve_nash_shapley() -> Result<NashShapleySolution> {
    let game = BuiltinGame::NashShapleyReduced.game();
    let exact = |p: Rational, z: Rational| -> Result<Vec<Rational>> {
        let one = Rational::one();
        expected_payoff(
            &game,
            &MixedProfile::new(vec![vec![one - p, p], vec![one - p, p], vec![one - z, z]])?,
        )
    };
    // gap(p) = u3(u1) - u3(u2) with players 1 and 2 both mixing p
    let gap = |p: Rational| -> Result<Rational> {
        Ok(exact(p, Rational::zero())?[2] - exact(p, Rational::one())?[2])
    };
    let (g0, g_half, g1) = (gap(rat(0, 1))?, gap(rat(1, 2))?, gap(rat(1, 1))?);
    // interpolate a p² + b p + c through 0, 1/2, 1
    let c = g0;
    let a = Rational::from(2) * (g1 + g0) - Rational::from(4) * g_half;
    let b = g1 - g0 - a;
    if a.is_zero() {
        return Err(Error::Domain(
            "indifference condition is not quadratic".into(),
        ));
    }
    let centre = -b / (Rational::from(2) * a);
    let radicand = (b * b - Rational::from(4) * a * c) / (Rational::from(4) * a * a);
    if radicand < Rational::zero() {
        return Err(Error::Domain("no real indifference point".into()));
    }
    let root = rational_to_f64(&radicand).sqrt();
    let c_f = rational_to_f64(&centre);
    let p = [c_f + root, c_f - root]
        .into_iter()
        .find(|x| (0.0..=1.0).contains(x))
        .ok_or_else(|| Error::Domain("no indifference point in [0, 1]".into()))?;
    let sign = if p >= c_f { "+" } else { "-" };
    let p_exact = format!(
        "{} {sign} sqrt({})",
        crate::game::format_rational(&centre),
        crate::game::format_rational(&radicand)
    );

    // player 1's indifference: d(z) = u1(s1) - u1(s2), linear in z
    let mixed = |z: f64| -> Result<Vec<f64>> {
        deviation_gaps(
            &game,
            &MixedProfile::new(vec![vec![1.0 - p, p], vec![1.0 - p, p], vec![1.0 - z, z]])?,
        )
    };
    let (d0, d1) = (mixed(0.0)?[0], mixed(1.0)?[0]);
    let z = d0 / (d0 - d1);
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain("player 3 has no equilibrium mixture".into()));
    }
    let profile = MixedProfile::new(vec![vec![1.0 - p, p], vec![1.0 - p, p], vec![1.0 - z, z]])?;
    let payoffs = expected_payoff(&game, &profile)?;
    let indifference_residuals = deviation_gaps(&game, &profile)?;
    let regret = is_nash(&game, &profile, 1e-9)?.regret;
    let quoted = (4.0 * p + 8.0) / (5.0 * p + 12.0);
    let payoffs_exact = exact_payoffs_at_root(&game, &centre, &radicand)?;
    Ok(NashShapleySolution {
        p,
        p_exact,
        bluff_weight: z,
        bluff_closed_form: (p + 4.0) / (5.0 * p + 12.0),
        quoted_closed_form: quoted,
        quoted_form_is_u1_weight: (quoted - (1.0 - z)).abs() < 1e-9,
        payoffs,
        payoffs_exact,
        indifference_residuals,
        regret,
    })
}

/// Per player, payoff of the first strategy minus the second against the rest.
fn deviation_gaps(game: &StrategicGame, profile: &MixedProfile<f64>) -> Result<Vec<f64>> {
    (0..game.num_players())
        .map(|pl| {
            let mut first = profile.clone();
            first.probs[pl] = vec![1.0, 0.0];
            let mut second = profile.clone();
            second.probs[pl] = vec![0.0, 1.0];
            Ok(expected_payoff(game, &first)?[pl] - expected_payoff(game, &second)?[pl])
        })
        .collect()
}

/// Equilibrium payoffs in exact form when they do not depend on the radical.
///
/// Each payoff is a polynomial in `p = c + √r` (and linear in player 3's
/// weight, which is rational in `p`); it is evaluated in `Q(√r)` and the
/// rational part is reported whenever the `√r` coefficient vanishes.
fn exact_payoffs_at_root(game: &StrategicGame, c: &Rational, r: &Rational) -> Result<Vec<String>> {
    // elements x + y√r of Q(√r)
    #[derive(Clone, Copy)]
    struct Surd(Rational, Rational);
    let r = *r;
    let add = |a: Surd, b: Surd| Surd(a.0 + b.0, a.1 + b.1);
    let mul = |a: Surd, b: Surd| Surd(a.0 * b.0 + a.1 * b.1 * r, a.0 * b.1 + a.1 * b.0);
    let inv = |a: Surd| {
        let n = a.0 * a.0 - a.1 * a.1 * r;
        Surd(a.0 / n, -a.1 / n)
    };
    let k = |x: i64| Surd(Rational::from(x), Rational::zero());
    let p = Surd(*c, Rational::one());
    let q = add(k(1), mul(k(-1), p));
    // z = (p + 4) / (5p + 12) solves player 1's indifference; verify it exactly
    let z = mul(add(p, k(4)), inv(add(mul(k(5), p), k(12))));
    let zc = add(k(1), mul(k(-1), z));
    let weights = [[q, p], [q, p], [zc, z]];
    let mut out = [k(0); 3];
    let mut gap1 = k(0);
    for prof in game.profiles() {
        let w = mul(
            mul(weights[0][prof[0]], weights[1][prof[1]]),
            weights[2][prof[2]],
        );
        for (pl, o) in out.iter_mut().enumerate() {
            *o = add(*o, mul(w, Surd(game.payoff(&prof)[pl], Rational::zero())));
        }
        // u1(s1) - u1(s2) against (p, z)
        let w_others = mul(weights[1][prof[1]], weights[2][prof[2]]);
        let sign = if prof[0] == 0 { 1 } else { -1 };
        gap1 = add(
            gap1,
            mul(
                mul(k(sign), w_others),
                Surd(game.payoff(&prof)[0], Rational::zero()),
            ),
        );
    }
    if !(gap1.0.is_zero() && gap1.1.is_zero()) {
        return Err(Error::Domain(
            "closed-form bluff weight fails exact indifference".into(),
        ));
    }
    Ok(out
        .iter()
        .map(|s| {
            if s.1.is_zero() {
                crate::game::format_rational(&s.0)
            } else {
                format!(
                    "{} + {}*sqrt({})",
                    crate::game::format_rational(&s.0),
                    crate::game::format_rational(&s.1),
                    crate::game::format_rational(&r)
                )
            }
        })
        .collect())
}

/// Probability that at least one early player slow-played, given both passed.
pub fn snap_off_probability(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} is not a probability")));
    }
    let posterior = p / (1.0 + p);
    Ok(1.0 - (1.0 - posterior).powi(2))
}

/// Simulates equilibrium deals: each early player slow-plays with
/// probability `p` when holding `H` (and always passes holding `L`).
/// Returns the fraction of deals, among those where both early players
/// passed, in which at least one was slow-playing.
pub fn snap_off_monte_carlo(p: f64, deals: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} is not a probability")));
    }
    let chunks = deals.div_ceil(CHUNK);
    let counts: Vec<(u64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let n = CHUNK.min(deals - c * CHUNK);
            let (mut passed, mut slow) = (0u64, 0u64);
            for _ in 0..n {
                let mut all_pass = true;
                let mut any_slow = false;
                for _ in 0..2 {
                    let high = rng.random::<bool>();
                    let slow_play = high && rng.random::<f64>() < p;
                    all_pass &= !high || slow_play;
                    any_slow |= slow_play;
                }
                if all_pass {
                    passed += 1;
                    slow += u64::from(any_slow);
                }
            }
            (passed, slow)
        })
        .collect();
    let (passed, slow) = counts.iter().fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
    if passed == 0 {
        return Err(Error::Domain(
            "no deal had both early players passing".into(),
        ));
    }
    let mean = slow as f64 / passed as f64;
    Ok(MonteCarloEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / passed as f64).sqrt(),
        samples: passed,
    })
}

/// A 2×2 outcome distribution is a product of mixtures iff its determinant vanishes.
pub fn is_product_realizable<T: Scalar>(dist: &OutcomeDistribution<T>) -> Result<bool> {
    if dist.shape != [2, 2] {
        return Err(Error::Shape(
            "product realizability is defined for 2×2 games".into(),
        ));
    }
    let d = dist.probs[0] * dist.probs[3] - dist.probs[1] * dist.probs[2];
    Ok(d.is_negligible())
}

/// Mediated extension of a 2×2 game.
#[derive(Clone, Debug, PartialEq)]
pub struct MediatedGame {
    pub base: StrategicGame,
    pub rho: OutcomeDistribution<Rational>,
    /// Strategies `A'` (always first), `B'` (always second), `C'` (obey), `D'` (flip).
    pub game: StrategicGame,
}

pub const MEDIATED_LABELS: [&str; 4] = ["A'", "B'", "C'", "D'"];

fn mediated_action(strategy: usize, recommendation: usize) -> usize {
    match strategy {
        0 => 0,
        1 => 1,
        2 => recommendation,
        _ => 1 - recommendation,
    }
}

pub fn build_mediated_game(
    base: &StrategicGame,
    rho: &OutcomeDistribution<Rational>,
) -> Result<MediatedGame> {
    if base.shape() != [2, 2] || rho.shape != [2, 2] {
        return Err(Error::Shape(
            "mediated games are built over 2×2 games".into(),
        ));
    }
    let labels = vec![
        MEDIATED_LABELS
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>();
        2
    ];
    let game = StrategicGame::from_fn(labels, |prof| {
        let mut out = vec![Rational::zero(); 2];
        for (rec, w) in base.profiles().zip(&rho.probs) {
            let played = [
                mediated_action(prof[0], rec[0]),
                mediated_action(prof[1], rec[1]),
            ];
            for (o, v) in out.iter_mut().zip(base.payoff(&played)) {
                *o += w * v;
            }
        }
        out
    })?;
    Ok(MediatedGame {
        base: base.clone(),
        rho: rho.clone(),
        game,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatedCheck {
    pub is_correlated_equilibrium: bool,
    /// Largest gain from disobeying, zero when obedience is optimal.
    pub worst_violation: Rational,
    /// Payoff of obeying the mediator.
    pub payoff: Vec<Rational>,
}

/// `ρ` is a correlated equilibrium iff `(C', C')` is a Nash equilibrium of
/// the mediated game. Signals with zero probability carry zero weight in the
/// ex-ante payoffs and so impose no constraint.
pub fn is_correlated_equilibrium(
    base: &StrategicGame,
    rho: &OutcomeDistribution<Rational>,
) -> Result<CorrelatedCheck> {
    let med = build_mediated_game(base, rho)?;
    let obey = MixedProfile::pure(&[4, 4], &[2, 2])?;
    let check = is_nash(&med.game, &obey, Rational::zero())?;
    Ok(CorrelatedCheck {
        is_correlated_equilibrium: check.is_nash,
        worst_violation: check.regret,
        payoff: med.game.payoff(&[2, 2]).to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    fn mix2(a: Rational, b: Rational) -> MixedProfile {
        MixedProfile::new(vec![vec![a, r(1, 1) - a], vec![b, r(1, 1) - b]]).unwrap()
    }

    #[test]
    fn builtin_tables() {
        let pd = BuiltinGame::PrisonersDilemma.game();
        assert_eq!(pd.payoff(&[0, 1]), &[r(0, 1), r(5, 1)]);
        let chicken = builtin_game("Chicken").unwrap();
        assert_eq!(chicken.payoff(&[1, 1]), &[r(-1, 1), r(-1, 1)]);
        let ns = builtin_game("ns").unwrap();
        assert_eq!(ns.payoff(&[1, 1, 1]), &[r(10, 1), r(10, 1), r(-20, 1)]);
        assert_eq!(ns.payoff(&[1, 0, 0]), &[r(-4, 1), r(2, 1), r(2, 1)]);
        assert!(ns.is_zero_sum());
        assert!(matches!(builtin_game("Poker"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn expected_payoffs() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        assert_eq!(
            expected_payoff(&sp, &mix2(r(2, 3), r(2, 3))).unwrap(),
            vec![r(5, 6), r(-5, 6)]
        );
        let pd = BuiltinGame::PrisonersDilemma.game();
        let pure: MixedProfile = MixedProfile::pure(&[2, 2], &[1, 0]).unwrap();
        assert_eq!(expected_payoff(&pd, &pure).unwrap(), vec![r(5, 1), r(0, 1)]);
        assert!(expected_payoff(&pd, &MixedProfile::new(vec![vec![r(1, 1)]]).unwrap()).is_err());
    }

    #[test]
    fn nash_checks() {
        let pd = BuiltinGame::PrisonersDilemma.game();
        let eq = is_nash(
            &pd,
            &MixedProfile::<Rational>::pure(&[2, 2], &[1, 1]).unwrap(),
            r(0, 1),
        )
        .unwrap();
        assert!(eq.is_nash && eq.regret.is_zero());
        let coop = is_nash(
            &pd,
            &MixedProfile::<Rational>::pure(&[2, 2], &[0, 0]).unwrap(),
            r(0, 1),
        )
        .unwrap();
        assert!(!coop.is_nash);
        assert_eq!(coop.regret, r(2, 1));
        let chicken = BuiltinGame::Chicken.game();
        let half = mix2(r(1, 2), r(1, 2));
        assert!(is_nash(&chicken, &half, r(0, 1)).unwrap().is_nash);
        assert_eq!(
            expected_payoff(&chicken, &half).unwrap(),
            vec![r(1, 1), r(1, 1)]
        );
    }

    #[test]
    fn simplified_poker_equilibrium() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        let sol = solve_zero_sum_2x2(&sp).unwrap();
        assert!(!sol.pure);
        assert_eq!(sol.profile.player(0), &[r(1, 3), r(2, 3)]);
        assert_eq!(sol.call_frequency, r(1, 3));
        assert_eq!(sol.value, r(5, 6));
        assert!(is_nash(&sp, &sol.profile, r(0, 1))
            .unwrap()
            .regret
            .is_zero());
        assert_eq!(security_level(&sp, sol.profile.player(0)).unwrap(), r(5, 6));
    }

    #[test]
    fn zero_sum_solver_cases() {
        let pennies = StrategicGame::bimatrix(
            &["a", "b"],
            &["x", "y"],
            &[&[(1, -1), (-1, 1)], &[(-1, 1), (1, -1)]],
        )
        .unwrap();
        let sol = solve_zero_sum_2x2(&pennies).unwrap();
        assert_eq!(sol.profile, mix2(r(1, 2), r(1, 2)));
        assert!(sol.value.is_zero());
        let saddle = StrategicGame::bimatrix(
            &["a", "b"],
            &["x", "y"],
            &[&[(3, -3), (1, -1)], &[(0, 0), (-2, 2)]],
        )
        .unwrap();
        let sol = solve_zero_sum_2x2(&saddle).unwrap();
        assert!(sol.pure);
        assert_eq!(sol.value, r(1, 1));
        assert!(matches!(
            solve_zero_sum_2x2(&BuiltinGame::Chicken.game()),
            Err(Error::NotZeroSum)
        ));
    }

    #[test]
    fn nash_shapley_equilibrium() {
        let sol = solve_nash_shapley().unwrap();
        assert!((sol.p - (1.4f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(sol.p_exact, "-1 + sqrt(7/5)");
        assert!((sol.bluff_weight - sol.bluff_closed_form).abs() < 1e-12);
        assert!(sol.quoted_form_is_u1_weight);
        assert!(sol.indifference_residuals.iter().all(|x| x.abs() < 1e-9));
        assert!(sol.regret < 1e-9);
        assert_eq!(sol.payoffs_exact, vec!["-2/5", "-2/5", "4/5"]);
    }

    #[test]
    fn snap_off() {
        let p = 1.4f64.sqrt() - 1.0;
        assert!((snap_off_probability(p).unwrap() - 2.0 / 7.0).abs() < 1e-12);
        assert_eq!(snap_off_probability(0.0).unwrap(), 0.0);
        assert_eq!(snap_off_probability(1.0).unwrap(), 0.75);
        assert!(snap_off_probability(1.5).is_err());
        let mc = snap_off_monte_carlo(p, 200_000, 3).unwrap();
        assert!(mc.within(2.0 / 7.0, 4.0), "{mc:?}");
        assert_eq!(mc, snap_off_monte_carlo(p, 200_000, 3).unwrap());
    }

    #[test]
    fn product_distributions() {
        let pd = BuiltinGame::PrisonersDilemma.game();
        let d = product_distribution(&mix2(r(1, 1), r(1, 1)), &pd).unwrap();
        assert_eq!(d.probs(), &[r(1, 1), r(0, 1), r(0, 1), r(0, 1)]);
        let half = product_distribution(&mix2(r(1, 2), r(1, 2)), &pd).unwrap();
        assert!(half.probs().iter().all(|&x| x == r(1, 4)));
        assert!(is_product_realizable(&half).unwrap());
        let diag =
            OutcomeDistribution::new(vec![2, 2], vec![r(1, 2), r(0, 1), r(0, 1), r(1, 2)]).unwrap();
        assert!(!is_product_realizable(&diag).unwrap());
    }

    #[test]
    fn mediated_chicken() {
        let chicken = BuiltinGame::Chicken.game();
        let third =
            OutcomeDistribution::new(vec![2, 2], vec![r(1, 3), r(1, 3), r(1, 3), r(0, 1)]).unwrap();
        let check = is_correlated_equilibrium(&chicken, &third).unwrap();
        assert!(check.is_correlated_equilibrium);
        assert_eq!(check.payoff, vec![r(5, 3), r(5, 3)]);
        let coin =
            OutcomeDistribution::new(vec![2, 2], vec![r(0, 1), r(1, 2), r(1, 2), r(0, 1)]).unwrap();
        assert_eq!(
            build_mediated_game(&chicken, &coin)
                .unwrap()
                .game
                .payoff(&[2, 2]),
            &[r(3, 2), r(3, 2)]
        );
        let point = OutcomeDistribution::point(vec![2, 2], &[0, 0]).unwrap();
        let med = build_mediated_game(&chicken, &point).unwrap();
        assert_eq!(med.game.payoff(&[3, 3]), chicken.payoff(&[1, 1]));
    }

    #[test]
    fn prisoners_dilemma_mediation() {
        let pd = BuiltinGame::PrisonersDilemma.game();
        let nash = OutcomeDistribution::point(vec![2, 2], &[1, 1]).unwrap();
        assert!(
            is_correlated_equilibrium(&pd, &nash)
                .unwrap()
                .is_correlated_equilibrium
        );
        let leak = OutcomeDistribution::new(vec![2, 2], vec![r(1, 10), r(0, 1), r(0, 1), r(9, 10)])
            .unwrap();
        assert!(
            !is_correlated_equilibrium(&pd, &leak)
                .unwrap()
                .is_correlated_equilibrium
        );
    }

    #[test]
    fn bimatrix_equilibria() {
        let pd = equilibria_2x2(&BuiltinGame::PrisonersDilemma.game()).unwrap();
        assert_eq!(pd.len(), 1);
        assert_eq!(pd[0].player(0), [rat(0, 1), rat(1, 1)]);
        let chicken = BuiltinGame::Chicken.game();
        let eqs = equilibria_2x2(&chicken).unwrap();
        assert_eq!(eqs.len(), 3);
        assert_eq!(eqs[2].player(0), [rat(1, 2), rat(1, 2)]);
        assert_eq!(
            expected_payoff(&chicken, &eqs[2]).unwrap(),
            vec![rat(1, 1), rat(1, 1)]
        );
        let sp = equilibria_2x2(&BuiltinGame::SimplifiedPokerReduced.game()).unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].player(0), [rat(1, 3), rat(2, 3)]);
    }
}
