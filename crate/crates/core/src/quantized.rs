//! Quaternion and octonion shortcuts for entangled EWL payoffs, uniform
//! mixed equilibria, security checks and classical/quantized comparisons.
//!
//! The state-vector oracle in [`crate::ewl`] is authoritative. A shortcut
//! is only used after [`calibrate_assignment`] has matched it to the oracle.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{
    fano_table, sample_unit_quaternion, Mat2, Octonion, Quaternion, Su2Frame, UnitOctonion,
    UnitQuaternion,
};
use crate::error::{Error, Result};
use crate::ewl::{
    eval_mixed_quantum, ewl_frame, mixed_distribution, MixedQuantumStrategy, Protocol,
};
use crate::game::{rational_to_f64, Rational, StrategicGame};
use crate::json::Number;
use crate::mc::chunk_rng;
use crate::strategic::{
    is_nash, solve_nash_shapley, solve_zero_sum_2x2, BuiltinGame, MixedProfile,
};

const TOL: f64 = 1e-12;

/// Real-linear map on quaternion coordinates, row-major.
type Linear4 = [[f64; 4]; 4];

fn apply(m: &Linear4, q: Quaternion) -> Quaternion {
    let v = q.to_array();
    Quaternion::from_array(std::array::from_fn(|r| {
        (0..4).map(|c| m[r][c] * v[c]).sum()
    }))
}

/// Inverse of [`apply`] for the signed permutations used here.
fn apply_inverse(m: &Linear4, q: Quaternion) -> Quaternion {
    let v = q.to_array();
    Quaternion::from_array(std::array::from_fn(|r| {
        (0..4).map(|c| m[c][r] * v[c]).sum()
    }))
}

fn compose(a: &Linear4, b: &Linear4) -> Linear4 {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..4).map(|k| a[r][k] * b[k][c]).sum()))
}

/// How a player's quaternion enters the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identification {
    Direct,
    Conjugate,
    /// Matrix transpose, read back in the EWL frame.
    Transpose,
    ConjugateTranspose,
}

impl Identification {
    pub const ALL: [Identification; 4] = [
        Identification::Direct,
        Identification::Conjugate,
        Identification::Transpose,
        Identification::ConjugateTranspose,
    ];

    fn linear(self, frame: &Su2Frame) -> Linear4 {
        let mut transpose = [[0.0; 4]; 4];
        for (c, unit) in Quaternion::BASIS.iter().enumerate() {
            let img = frame
                .coefficients(&frame.matrix(*unit).transpose())
                .to_array();
            for r in 0..4 {
                transpose[r][c] = img[r].round();
            }
        }
        let conj = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        let ident =
            std::array::from_fn(|r| std::array::from_fn(|c| if r == c { 1.0 } else { 0.0 }));
        match self {
            Identification::Direct => ident,
            Identification::Conjugate => conj,
            Identification::Transpose => transpose,
            Identification::ConjugateTranspose => compose(&conj, &transpose),
        }
    }

    fn wrap(self, var: &str) -> String {
        match self {
            Identification::Direct => var.to_string(),
            Identification::Conjugate => format!("conj({var})"),
            Identification::Transpose => format!("t({var})"),
            Identification::ConjugateTranspose => format!("conj(t({var}))"),
        }
    }
}

/// Two-player product `ι₁(p)·ι₂(q)` or `ι₂(q)·ι₁(p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuaternionConvention {
    pub identification: [Identification; 2],
    pub first_player_left: bool,
    #[serde(skip)]
    maps: [Linear4; 2],
}

impl QuaternionConvention {
    fn new(identification: [Identification; 2], first_player_left: bool, frame: &Su2Frame) -> Self {
        let maps = identification.map(|i| i.linear(frame));
        Self {
            identification,
            first_player_left,
            maps,
        }
    }

    pub fn product(&self, p: Quaternion, q: Quaternion) -> Quaternion {
        let (a, b) = (apply(&self.maps[0], p), apply(&self.maps[1], q));
        if self.first_player_left {
            a * b
        } else {
            b * a
        }
    }

    fn expression(&self) -> String {
        let (a, b) = (
            self.identification[0].wrap("p"),
            self.identification[1].wrap("q"),
        );
        if self.first_player_left {
            format!("{a}·{b}")
        } else {
            format!("{b}·{a}")
        }
    }
}

/// A player's quaternion copy inside the octonions: `i, j, k ↦ i_a, i_b, i_c`
/// along an oriented Fano line, so `i_a·i_b = i_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PlayerCopy {
    pub units: [usize; 3],
}

impl PlayerCopy {
    /// The 21 copies: seven lines, three cyclic rotations each.
    pub fn all() -> Vec<PlayerCopy> {
        fano_table()
            .into_iter()
            .flat_map(|t| {
                let l = [t.0, t.1, t.2];
                (0..3).map(move |r| PlayerCopy {
                    units: [l[r], l[(r + 1) % 3], l[(r + 2) % 3]],
                })
            })
            .collect()
    }

    pub fn embed(&self, q: Quaternion) -> Octonion {
        let mut e = [0.0; 8];
        e[0] = q.a;
        e[self.units[0]] = q.b;
        e[self.units[1]] = q.c;
        e[self.units[2]] = q.d;
        Octonion::new(e)
    }

    /// Inverse of [`PlayerCopy::embed`]; fails off the copy.
    pub fn extract(&self, o: Octonion) -> Result<Quaternion> {
        let inside = [0, self.units[0], self.units[1], self.units[2]];
        if (0..8).any(|m| !inside.contains(&m) && o.e[m].abs() > TOL) {
            return Err(Error::Domain(format!(
                "octonion lies outside the copy spanned by 1, i{:?}",
                self.units
            )));
        }
        Ok(Quaternion::new(
            o.e[0],
            o.e[inside[1]],
            o.e[inside[2]],
            o.e[inside[3]],
        ))
    }
}

fn default_copies() -> [PlayerCopy; 3] {
    let lines = fano_table();
    std::array::from_fn(|k| PlayerCopy {
        units: [lines[k].0, lines[k].1, lines[k].2],
    })
}

/// Three-player product of the embedded, identified strategies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctonionConvention {
    pub copies: [PlayerCopy; 3],
    pub identification: [Identification; 3],
    /// Players (0-based) in product order.
    pub order: [usize; 3],
    /// `(x·y)·z` when true, `x·(y·z)` otherwise.
    pub left_nested: bool,
    #[serde(skip)]
    maps: [Linear4; 3],
}

impl OctonionConvention {
    pub fn product(&self, qs: [Quaternion; 3]) -> Octonion {
        let x: [Octonion; 3] =
            std::array::from_fn(|k| self.copies[k].embed(apply(&self.maps[k], qs[k])));
        let [a, b, c] = self.order.map(|k| x[k]);
        if self.left_nested {
            (a * b) * c
        } else {
            a * (b * c)
        }
    }

    fn expression(&self) -> String {
        let names = ["p", "q", "r"];
        let [a, b, c] = self.order.map(|k| self.identification[k].wrap(names[k]));
        if self.left_nested {
            format!("({a}·{b})·{c}")
        } else {
            format!("{a}·({b}·{c})")
        }
    }
}

// Built once per process and cached, so the variant size gap is irrelevant.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Quaternion(QuaternionConvention),
    Octonion(OctonionConvention),
}

/// Pairing of product components with N/F outcomes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeAssignment {
    pub players: usize,
    /// Profile index (last player fastest) receiving component `c`.
    pub component_to_outcome: Vec<usize>,
    /// N/F label of each component.
    pub labels: Vec<String>,
    pub expression: String,
    pub convention: Convention,
    /// Number of search candidates that also reproduce the oracle.
    pub equivalent_conventions: usize,
}

impl OutcomeAssignment {
    fn new(
        players: usize,
        component_to_outcome: Vec<usize>,
        convention: Convention,
        equivalent: usize,
    ) -> Self {
        let expression = match &convention {
            Convention::Quaternion(c) => c.expression(),
            Convention::Octonion(c) => c.expression(),
        };
        let labels = component_to_outcome
            .iter()
            .map(|&o| outcome_label(players, o))
            .collect();
        Self {
            players,
            component_to_outcome,
            labels,
            expression,
            convention,
            equivalent_conventions: equivalent,
        }
    }

    fn route(&self, squares: &[f64]) -> Vec<f64> {
        let mut dist = vec![0.0; squares.len()];
        for (c, s) in squares.iter().enumerate() {
            dist[self.component_to_outcome[c]] = *s;
        }
        dist
    }

    /// Outcome distribution from the squared components of the product.
    pub fn quaternion_distribution(&self, p: Quaternion, q: Quaternion) -> Result<Vec<f64>> {
        match &self.convention {
            Convention::Quaternion(c) => Ok(self.route(&c.product(p, q).squared_components())),
            Convention::Octonion(_) => Err(Error::Shape(
                "three-player assignment used for two players".into(),
            )),
        }
    }

    pub fn octonion_distribution(&self, qs: [Quaternion; 3]) -> Result<Vec<f64>> {
        match &self.convention {
            Convention::Octonion(c) => Ok(self.route(&c.product(qs).squared_components())),
            Convention::Quaternion(_) => Err(Error::Shape(
                "two-player assignment used for three players".into(),
            )),
        }
    }
}

/// `NN`, `NF`, … for profile index `o`, player 1 leftmost.
pub fn outcome_label(players: usize, o: usize) -> String {
    (0..players)
        .map(|k| {
            if (o >> (players - 1 - k)) & 1 == 0 {
                'N'
            } else {
                'F'
            }
        })
        .collect()
}

/// `1, i, j, k, (1+i)/√2, (1+j)/√2, (1+k)/√2, (1+i+j+k)/2`.
pub fn generator_quaternions() -> [Quaternion; 8] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        Quaternion::ONE,
        Quaternion::I,
        Quaternion::J,
        Quaternion::K,
        Quaternion::new(h, h, 0.0, 0.0),
        Quaternion::new(h, 0.0, h, 0.0),
        Quaternion::new(h, 0.0, 0.0, h),
        Quaternion::new(0.5, 0.5, 0.5, 0.5),
    ]
}

fn point_mass(dist: &[f64]) -> Option<usize> {
    let (o, w) = dist.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    (*w >= 1.0 - 1e-9).then_some(o)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Builds a component→outcome bijection from unit profiles, if consistent.
fn infer_bijection(size: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Option<Vec<usize>> {
    let mut assign = vec![usize::MAX; size];
    let mut used = vec![false; size];
    for (component, outcome) in pairs {
        if assign[component] == usize::MAX {
            if used[outcome] {
                return None;
            }
            assign[component] = outcome;
            used[outcome] = true;
        } else if assign[component] != outcome {
            return None;
        }
    }
    assign.iter().all(|&o| o != usize::MAX).then_some(assign)
}

fn unit_component(v: &[f64]) -> Option<usize> {
    let nonzero: Vec<usize> = (0..v.len()).filter(|&m| v[m].abs() > TOL).collect();
    match nonzero.as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

fn calibrate_two() -> Result<OutcomeAssignment> {
    let frame = ewl_frame(2)?;
    let oracle = Protocol::distribution_only(2, true)?;
    let gens = generator_quaternions();
    let mut dists = Vec::with_capacity(64);
    for p in gens {
        for q in gens {
            dists.push(oracle.distribution(&[frame.matrix(p), frame.matrix(q)])?);
        }
    }
    let mut deltas = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let o = point_mass(&dists[a * 8 + b]).ok_or_else(|| {
                Error::Convention(format!("unit profile ({a}, {b}) is not a pure outcome"))
            })?;
            deltas.push(o);
        }
    }
    let mut found: Vec<OutcomeAssignment> = Vec::new();
    let mut best = f64::INFINITY;
    for id1 in Identification::ALL {
        for id2 in Identification::ALL {
            for left in [true, false] {
                let conv = QuaternionConvention::new([id1, id2], left, &frame);
                let pairs = (0..16).map(|n| {
                    let r = conv.product(Quaternion::BASIS[n / 4], Quaternion::BASIS[n % 4]);
                    (
                        unit_component(&r.to_array()).expect("unit products are signed units"),
                        deltas[n],
                    )
                });
                let Some(assign) = infer_bijection(4, pairs) else {
                    continue;
                };
                let candidate = OutcomeAssignment::new(2, assign, Convention::Quaternion(conv), 0);
                let mut dev: f64 = 0.0;
                for (n, d) in dists.iter().enumerate() {
                    dev = dev.max(max_diff(
                        &candidate.quaternion_distribution(gens[n / 8], gens[n % 8])?,
                        d,
                    ));
                }
                best = best.min(dev);
                if dev <= TOL {
                    found.push(candidate);
                }
            }
        }
    }
    let count = found.len();
    let mut first = found.into_iter().next().ok_or_else(|| {
        Error::Convention(format!(
            "32 product conventions tried; smallest deviation {best:e}"
        ))
    })?;
    first.equivalent_conventions = count;
    Ok(first)
}

/// Outcome of the three-player search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctonionCalibration {
    pub searched: usize,
    /// Candidates that send every unit profile to the right pure outcome.
    pub unit_consistent: usize,
    /// Candidates that also match the oracle on all generator profiles.
    pub valid: usize,
    /// Smallest generator deviation among unit-consistent candidates.
    pub best_deviation: Option<f64>,
    pub assignment: Option<OutcomeAssignment>,
    /// Copies used to read octonion strategies.
    pub copies: [PlayerCopy; 3],
}

fn calibrate_three() -> Result<OctonionCalibration> {
    let frame = ewl_frame(3)?;
    let oracle = Protocol::distribution_only(3, true)?;
    let gens = generator_quaternions();
    let mut dists = Vec::with_capacity(512);
    for p in gens {
        for q in gens {
            for r in gens {
                dists.push(oracle.distribution(&[
                    frame.matrix(p),
                    frame.matrix(q),
                    frame.matrix(r),
                ])?);
            }
        }
    }
    let mut deltas = [0usize; 64];
    for (n, d) in deltas.iter_mut().enumerate() {
        let (a, b, c) = (n / 16, (n / 4) % 4, n % 4);
        *d = point_mass(&dists[a * 64 + b * 8 + c]).ok_or_else(|| {
            Error::Convention(format!(
                "unit profile ({a}, {b}, {c}) is not a pure outcome"
            ))
        })?;
    }
    // basis index products, ignoring signs
    let mut table = [[0usize; 8]; 8];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let e = (Octonion::unit_basis(a) * Octonion::unit_basis(b)).e;
            *cell = unit_component(&e).expect("basis products are signed units");
        }
    }
    struct Option_ {
        copy: PlayerCopy,
        id: Identification,
        map: Linear4,
        unit_index: [usize; 4],
    }
    let mut options = Vec::new();
    for copy in PlayerCopy::all() {
        for id in Identification::ALL {
            let map = id.linear(&frame);
            let unit_index = std::array::from_fn(|u| {
                let img = apply(&map, Quaternion::BASIS[u]);
                unit_component(&copy.embed(img).e).expect("signed permutation")
            });
            options.push(Option_ {
                copy,
                id,
                map,
                unit_index,
            });
        }
    }
    let orders = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let (mut searched, mut consistent, mut valid) = (0, 0, 0);
    let mut best: Option<f64> = None;
    let mut first: Option<OutcomeAssignment> = None;
    for order in orders {
        for left_nested in [true, false] {
            for o1 in &options {
                for o2 in &options {
                    for o3 in &options {
                        searched += 1;
                        let opts = [o1, o2, o3];
                        let pairs = (0..64).map(|n| {
                            let u = [n / 16, (n / 4) % 4, n % 4];
                            let x = order.map(|k| opts[k].unit_index[u[k]]);
                            let c = if left_nested {
                                table[table[x[0]][x[1]]][x[2]]
                            } else {
                                table[x[0]][table[x[1]][x[2]]]
                            };
                            (c, deltas[n])
                        });
                        let Some(assign) = infer_bijection(8, pairs) else {
                            continue;
                        };
                        consistent += 1;
                        let conv = OctonionConvention {
                            copies: opts.map(|o| o.copy),
                            identification: opts.map(|o| o.id),
                            order,
                            left_nested,
                            maps: opts.map(|o| o.map),
                        };
                        let candidate =
                            OutcomeAssignment::new(3, assign, Convention::Octonion(conv), 0);
                        let mut dev: f64 = 0.0;
                        for (n, d) in dists.iter().enumerate() {
                            let qs = [gens[n / 64], gens[(n / 8) % 8], gens[n % 8]];
                            dev = dev.max(max_diff(&candidate.octonion_distribution(qs)?, d));
                        }
                        best = Some(best.map_or(dev, |b| b.min(dev)));
                        if dev <= TOL {
                            valid += 1;
                            first.get_or_insert(candidate);
                        }
                    }
                }
            }
        }
    }
    if let Some(a) = first.as_mut() {
        a.equivalent_conventions = valid;
    }
    let copies = match first.as_ref().map(|a| &a.convention) {
        Some(Convention::Octonion(c)) => c.copies,
        _ => default_copies(),
    };
    Ok(OctonionCalibration {
        searched,
        unit_consistent: consistent,
        valid,
        best_deviation: best,
        assignment: first,
        copies,
    })
}

/// Searches product conventions until the squared-component rule matches
/// the oracle on all generator profiles.
///
/// Two players: fails with [`Error::Convention`] if no convention works.
/// Three players: the same error is returned when the search comes up
/// empty; [`octonion_calibration`] keeps the search statistics.
pub fn calibrate_assignment(players: usize) -> Result<OutcomeAssignment> {
    match players {
        2 => calibrate_two(),
        3 => {
            let cal = octonion_calibration()?;
            cal.assignment.clone().ok_or_else(|| {
                Error::Convention(format!(
                    "{} octonion conventions tried, {} consistent on unit profiles, none match the oracle (smallest deviation {:?})",
                    cal.searched, cal.unit_consistent, cal.best_deviation
                ))
            })
        }
        n => Err(Error::Domain(format!("no product rule for {n} players"))),
    }
}

/// Cached two-player calibration.
pub fn quaternion_assignment() -> Result<&'static OutcomeAssignment> {
    static CACHE: OnceLock<std::result::Result<OutcomeAssignment, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| calibrate_two().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Convention(e.clone()))
}

/// Cached three-player search.
pub fn octonion_calibration() -> Result<&'static OctonionCalibration> {
    static CACHE: OnceLock<std::result::Result<OctonionCalibration, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| calibrate_three().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Convention(e.clone()))
}

/// Distribution and expected payoffs of one quantized play.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantizedOutcome {
    pub distribution: Vec<f64>,
    pub payoffs: Vec<f64>,
    /// Shortcut value when one is calibrated (three players only).
    pub closed_form: Option<Vec<f64>>,
}

fn expected(game: &StrategicGame, dist: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; game.num_players()];
    for (w, profile) in dist.iter().zip(game.profiles()) {
        for (o, v) in out.iter_mut().zip(game.payoff_f64(&profile)) {
            *o += w * v;
        }
    }
    out
}

fn check_binary(game: &StrategicGame, players: usize) -> Result<()> {
    if game.num_players() != players || !game.is_binary() {
        return Err(Error::Shape(format!(
            "expected a {players}-player game with two strategies each"
        )));
    }
    Ok(())
}

/// Entangled EWL payoff from the squared components of the calibrated product.
pub fn quaternion_payoff(
    game: &StrategicGame,
    p: UnitQuaternion,
    q: UnitQuaternion,
    assignment: &OutcomeAssignment,
) -> Result<QuantizedOutcome> {
    check_binary(game, 2)?;
    let distribution = assignment.quaternion_distribution(p.get(), q.get())?;
    let payoffs = expected(game, &distribution);
    Ok(QuantizedOutcome {
        distribution,
        payoffs,
        closed_form: None,
    })
}

/// Entangled three-player payoff of octonion strategies, each inside its
/// player's quaternion copy. The oracle decides; a calibrated closed form,
/// if any, is reported alongside and must agree.
pub fn octonion_payoff(
    game: &StrategicGame,
    strategies: [UnitOctonion; 3],
    calibration: &OctonionCalibration,
) -> Result<QuantizedOutcome> {
    check_binary(game, 3)?;
    let frame = ewl_frame(3)?;
    let mut qs = [Quaternion::ONE; 3];
    for k in 0..3 {
        qs[k] = calibration.copies[k].extract(strategies[k].get())?;
    }
    let ops: Vec<Mat2> = qs.iter().map(|q| frame.matrix(*q)).collect();
    let distribution = Protocol::distribution_only(3, true)?.distribution(&ops)?;
    let payoffs = expected(game, &distribution);
    let closed_form = match &calibration.assignment {
        Some(a) => {
            let fast = a.octonion_distribution(qs)?;
            let dev = max_diff(&fast, &distribution);
            if dev > TOL {
                return Err(Error::Convention(format!(
                    "closed form deviates from the oracle by {dev:e}"
                )));
            }
            Some(expected(game, &fast))
        }
        None => None,
    };
    Ok(QuantizedOutcome {
        distribution,
        payoffs,
        closed_form,
    })
}

/// Mean of all pure-profile payoff vectors.
pub fn uniform_equilibrium_payoff(game: &StrategicGame) -> Result<Vec<Rational>> {
    let n = game.num_players();
    if !(n == 2 || n == 3) || !game.is_binary() {
        return Err(Error::Shape(
            "uniform equilibrium needs 2 or 3 players with two strategies each".into(),
        ));
    }
    let mut sum = vec![Rational::zero(); n];
    let mut count = 0i64;
    for profile in game.profiles() {
        for (s, v) in sum.iter_mut().zip(game.payoff(&profile)) {
            *s += v;
        }
        count += 1;
    }
    Ok(sum.into_iter().map(|s| s / Rational::from(count)).collect())
}

/// Finite mixtures reproducing the Haar-uniform outcome distribution.
///
/// Two players: uniform over the images of `1, i, j, k`. Three players:
/// uniform over `±1, ±i, ±j, ±k`, the eight signed units of each player's
/// quaternion copy.
pub fn discrete_equivalent(players: usize) -> Result<Vec<MixedQuantumStrategy>> {
    let frame = ewl_frame(players)?;
    let units: Vec<Quaternion> = match players {
        2 => Quaternion::BASIS.to_vec(),
        _ => Quaternion::BASIS.iter().flat_map(|&u| [u, -u]).collect(),
    };
    let s = MixedQuantumStrategy::uniform_quaternions(&frame, &units)?;
    Ok(vec![s; players])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SecurityConfig {
    /// Haar draws per opponent profile; zero skips the Haar check.
    pub samples: u64,
    pub opponents: usize,
    pub seed: u64,
}

/// One random opponent profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecurityTrial {
    /// Unit quaternions of the non-holders, by player.
    pub opponents: Vec<[f64; 4]>,
    pub discrete: Vec<f64>,
    pub discrete_distribution: Vec<f64>,
    pub haar: Vec<Number>,
}

/// Payoffs of a uniform mixture held by some players against random pure
/// opponents. Player numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecurityReport {
    pub holders: Vec<usize>,
    pub target: Vec<Number>,
    pub config: SecurityConfig,
    pub trials: Vec<SecurityTrial>,
    /// Largest payoff gap to the target under the discrete mixture.
    pub discrete_max_deviation: f64,
    /// Largest gap between the discrete outcome distribution and uniform.
    pub uniform_max_deviation: f64,
    pub haar_within_4se: bool,
    pub pass: bool,
}

/// Evaluates the discrete-equivalent and Haar mixtures of `holders`
/// (0-based) against random pure strategies of everyone else.
pub fn verify_security(
    game: &StrategicGame,
    holders: &[usize],
    config: SecurityConfig,
) -> Result<SecurityReport> {
    let n = game.num_players();
    if holders.is_empty() || holders.iter().any(|&h| h >= n) {
        return Err(Error::Domain(format!(
            "holders {holders:?} out of range for {n} players"
        )));
    }
    let target = uniform_equilibrium_payoff(game)?;
    let target_f: Vec<f64> = target.iter().map(rational_to_f64).collect();
    let frame = ewl_frame(n)?;
    let proto = Protocol::new(game, true)?;
    let discrete = discrete_equivalent(n)?;
    let mut opp_rng = chunk_rng(config.seed, u64::MAX);
    let mut trials = Vec::with_capacity(config.opponents);
    let (mut disc_dev, mut unif_dev, mut haar_ok) = (0.0f64, 0.0f64, true);
    for t in 0..config.opponents {
        let mut fixed = vec![None; n];
        let mut opponents = Vec::new();
        for (k, slot) in fixed.iter_mut().enumerate() {
            if !holders.contains(&k) {
                let q = sample_unit_quaternion(&mut opp_rng);
                opponents.push(q.get().to_array());
                *slot = Some(frame.quat_to_su2(q));
            }
        }
        let mixed: Vec<MixedQuantumStrategy> = fixed
            .iter()
            .zip(&discrete)
            .map(|(f, d)| match f {
                Some(m) => MixedQuantumStrategy::pure(*m),
                None => Ok(d.clone()),
            })
            .collect::<Result<_>>()?;
        let dist = mixed_distribution(n, true, &mixed)?;
        let pay = proto.payoff_of(&dist);
        disc_dev = disc_dev.max(max_diff(&pay, &target_f));
        unif_dev = unif_dev.max(
            dist.iter()
                .map(|w| (w - 1.0 / dist.len() as f64).abs())
                .fold(0.0, f64::max),
        );
        let mut haar = Vec::new();
        if config.samples > 0 {
            let profile: Vec<MixedQuantumStrategy> = fixed
                .iter()
                .map(|f| match f {
                    Some(m) => MixedQuantumStrategy::pure(*m),
                    None => Ok(MixedQuantumStrategy::HaarUniform),
                })
                .collect::<Result<_>>()?;
            let trial_seed = config.seed.wrapping_add(t as u64 + 1);
            let est = eval_mixed_quantum(game, true, &profile, config.samples, trial_seed)?;
            haar_ok &= est
                .payoffs
                .iter()
                .zip(&target_f)
                .all(|(e, &x)| e.within(x, 4.0));
            haar = est.payoffs.iter().map(Number::estimate).collect();
        }
        trials.push(SecurityTrial {
            opponents,
            discrete: pay,
            discrete_distribution: dist,
            haar,
        });
    }
    Ok(SecurityReport {
        holders: holders.iter().map(|h| h + 1).collect(),
        target: target.iter().map(Number::rational).collect(),
        config,
        trials,
        discrete_max_deviation: disc_dev,
        uniform_max_deviation: unif_dev,
        haar_within_4se: haar_ok,
        pass: disc_dev <= TOL && haar_ok,
    })
}

/// A unilateral deviation reaching the deviator's best pure outcome.
/// `deviator` is 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationWitness {
    pub deviator: usize,
    pub profile: [[f64; 4]; 2],
    pub deviation: [f64; 4],
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// Deviator's payoff after deviating, recomputed by the oracle.
    pub oracle_after: f64,
    pub best: f64,
    /// The deviator already had its best outcome.
    pub already_optimal: bool,
    pub improved: bool,
}

/// Shows that `(p, q)` is not an equilibrium: the player with more to gain
/// swaps its quaternion for one that makes the product the unit of its
/// best outcome.
pub fn no_pure_equilibrium_witness(
    game: &StrategicGame,
    p: UnitQuaternion,
    q: UnitQuaternion,
    assignment: &OutcomeAssignment,
) -> Result<DeviationWitness> {
    check_binary(game, 2)?;
    if game.is_constant() {
        return Err(Error::Domain(
            "constant game: no deviation can improve anyone".into(),
        ));
    }
    let Convention::Quaternion(conv) = &assignment.convention else {
        return Err(Error::Shape("two-player assignment required".into()));
    };
    let before = quaternion_payoff(game, p, q, assignment)?.payoffs;
    let table: Vec<Vec<f64>> = game.profiles().map(|pr| game.payoff_f64(&pr)).collect();
    let best_of = |k: usize| table.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
    let gaps = [best_of(0) - before[0], best_of(1) - before[1]];
    let dev = if gaps[1] > gaps[0] { 1 } else { 0 };
    let best = best_of(dev);
    let (pq, qq) = (p.get(), q.get());
    if gaps[dev] <= TOL {
        return Ok(DeviationWitness {
            deviator: dev + 1,
            profile: [pq.to_array(), qq.to_array()],
            deviation: if dev == 0 {
                pq.to_array()
            } else {
                qq.to_array()
            },
            before: before.clone(),
            after: before.clone(),
            oracle_after: before[dev],
            best,
            already_optimal: true,
            improved: false,
        });
    }
    let outcome = (0..table.len())
        .find(|&o| table[o][dev] == best)
        .expect("maximum is attained");
    let component = assignment
        .component_to_outcome
        .iter()
        .position(|&o| o == outcome)
        .expect("bijection");
    let u = Quaternion::BASIS[component];
    let (a, b) = (apply(&conv.maps[0], pq), apply(&conv.maps[1], qq));
    let inv = |x: Quaternion| x.inverse().expect("unit quaternions are invertible");
    // solve for the deviator's image so that the product equals u
    let image = match (dev, conv.first_player_left) {
        (0, true) => u * inv(b),
        (1, true) => inv(a) * u,
        (0, false) => inv(b) * u,
        _ => u * inv(a),
    };
    let deviation = UnitQuaternion::from_quaternion(apply_inverse(&conv.maps[dev], image))?;
    let (np, nq) = if dev == 0 {
        (deviation, q)
    } else {
        (p, deviation)
    };
    let after = quaternion_payoff(game, np, nq, assignment)?.payoffs;
    let frame = ewl_frame(2)?;
    let (_, oracle) =
        Protocol::new(game, true)?.evaluate(&[frame.quat_to_su2(np), frame.quat_to_su2(nq)])?;
    Ok(DeviationWitness {
        deviator: dev + 1,
        profile: [pq.to_array(), qq.to_array()],
        deviation: deviation.get().to_array(),
        improved: after[dev] > before[dev] + TOL && (oracle[dev] - best).abs() <= 1e-9,
        before,
        oracle_after: oracle[dev],
        after,
        best,
        already_optimal: false,
    })
}

/// Classical equilibrium payoffs next to quantized ones for one game.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub game: String,
    pub classical_solution: String,
    pub classical: Vec<Number>,
    pub quantized: Vec<Number>,
    pub quantized_haar: Vec<Number>,
    /// Every Haar estimate is within 4 standard errors of the exact value.
    pub certified: bool,
    pub observations: Vec<String>,
}

/// A computed value that disagrees with (or refines) a quoted one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub computed: Number,
    pub quoted: String,
    pub agrees: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<ComparisonRow>,
    pub discrepancies: Vec<Discrepancy>,
}

fn haar_all(
    game: &StrategicGame,
    samples: u64,
    seed: u64,
) -> Result<Vec<crate::mc::MonteCarloEstimate>> {
    let profile = vec![MixedQuantumStrategy::HaarUniform; game.num_players()];
    Ok(eval_mixed_quantum(game, true, &profile, samples, seed)?.payoffs)
}

fn first_pure_equilibrium(game: &StrategicGame) -> Result<Option<Vec<usize>>> {
    for profile in game.profiles() {
        let mix = MixedProfile::<Rational>::pure(&game.shape(), &profile)?;
        if is_nash(game, &mix, Rational::zero())?.is_nash {
            return Ok(Some(profile));
        }
    }
    Ok(None)
}

/// Classical versus quantized equilibrium payoffs for the reduced poker
/// games and the prisoner's dilemma, plus known disagreements with quoted
/// figures.
pub fn comparison_report(samples: u64, seed: u64) -> Result<ComparisonReport> {
    let mut rows = Vec::new();
    let row = |b: BuiltinGame,
               solution: String,
               classical: Vec<Number>,
               observations: Vec<String>|
     -> Result<ComparisonRow> {
        let game = b.game();
        let exact = uniform_equilibrium_payoff(&game)?;
        let haar = haar_all(&game, samples, seed)?;
        let certified = haar
            .iter()
            .zip(&exact)
            .all(|(e, x)| e.within(rational_to_f64(x), 4.0));
        Ok(ComparisonRow {
            game: b.name().to_string(),
            classical_solution: solution,
            classical,
            quantized: exact.iter().map(Number::rational).collect(),
            quantized_haar: haar.iter().map(Number::estimate).collect(),
            certified,
            observations,
        })
    };

    let sp = BuiltinGame::SimplifiedPokerReduced.game();
    let sp_sol = solve_zero_sum_2x2(&sp)?;
    let sp_q = uniform_equilibrium_payoff(&sp)?;
    let sp_obs = vec![format!(
        "player 1 value {} classically, {} quantized ({})",
        crate::game::format_rational(&sp_sol.value),
        crate::game::format_rational(&sp_q[0]),
        if sp_q[0] > sp_sol.value {
            "advantage enhanced"
        } else {
            "advantage not enhanced"
        }
    )];
    rows.push(row(
        BuiltinGame::SimplifiedPokerReduced,
        "mixed equilibrium".into(),
        vec![
            Number::rational(&sp_sol.value),
            Number::rational(&-sp_sol.value),
        ],
        sp_obs,
    )?);

    let ns = solve_nash_shapley()?;
    let ns_q = uniform_equilibrium_payoff(&BuiltinGame::NashShapleyReduced.game())?;
    let mut ns_obs = Vec::new();
    for (k, (&c, q)) in ns.payoffs.iter().zip(&ns_q).enumerate() {
        let q = rational_to_f64(q);
        if c.signum() != q.signum() {
            ns_obs.push(format!(
                "player {} payoff changes sign: {c:.4} classically, {q} quantized",
                k + 1
            ));
        }
    }
    rows.push(row(
        BuiltinGame::NashShapleyReduced,
        format!("mixed equilibrium, p = {}", ns.p_exact),
        ns.payoffs_exact
            .iter()
            .zip(&ns.payoffs)
            .map(|(s, v)| Number::closed_form(s.clone(), *v))
            .collect(),
        ns_obs,
    )?);

    let pd = BuiltinGame::PrisonersDilemma.game();
    let pd_eq =
        first_pure_equilibrium(&pd)?.ok_or_else(|| Error::Domain("no pure equilibrium".into()))?;
    let pd_q = uniform_equilibrium_payoff(&pd)?;
    rows.push(row(
        BuiltinGame::PrisonersDilemma,
        format!("pure equilibrium {:?}", pd.profile_labels(&pd_eq)),
        pd.payoff(&pd_eq).iter().map(Number::rational).collect(),
        vec![format!(
            "quantized payoff {} exceeds the classical {}",
            pd_q[0],
            pd.payoff(&pd_eq)[0]
        )],
    )?);

    let third = Rational::new(1, 3);
    let first_weight = sp_sol.profile.player(0)[0];
    let discrepancies = vec![
        Discrepancy {
            quantity: "PrisonersDilemma quantized payoff per player".into(),
            computed: Number::rational(&pd_q[0]),
            quoted: "2.5".into(),
            agrees: rational_to_f64(&pd_q[0]) == 2.5,
            note: "the quoted figure is not the mean of the four outcome payoffs".into(),
        },
        Discrepancy {
            quantity: "SimplifiedPoker player 1 weight on first strategy s1".into(),
            computed: Number::rational(&first_weight),
            quoted: "first strategy 1/3 of the time".into(),
            agrees: first_weight == third,
            note: format!(
                "indifference puts {} on s1 and {} on the bluffing plan s2; a bluff (bet holding L) happens on {} of hands",
                crate::game::format_rational(&first_weight),
                crate::game::format_rational(&(Rational::one() - first_weight)),
                crate::game::format_rational(&((Rational::one() - first_weight) / Rational::from(2)))
            ),
        },
        Discrepancy {
            quantity: "NashShapley player 3 weight on u2 (run a possible bluff)".into(),
            computed: Number::closed_form("(p+4)/(5p+12)", ns.bluff_weight),
            quoted: format!("(4p+8)/(5p+12) = {:.4}", ns.quoted_closed_form),
            agrees: (ns.bluff_weight - ns.quoted_closed_form).abs() < 1e-9,
            note: if ns.quoted_form_is_u1_weight {
                "the quoted closed form equals the equilibrium weight of u1".into()
            } else {
                "the quoted closed form matches neither of player 3's weights".into()
            },
        },
    ];
    Ok(ComparisonReport {
        samples,
        seed,
        rows,
        discrepancies,
    })
}
