//! State-vector simulation of the EWL quantization for two and three players.
//!
//! This is the reference for every quantized payoff; the quaternion fast
//! path in [`crate::quantized`] is calibrated against it.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{sample_unit_quaternion, Mat2, Quaternion, Su2Frame, UnitQuaternion};
use crate::error::{Error, Result};
use crate::game::{rational_to_f64, StrategicGame};
use crate::mc::{estimate, MonteCarloEstimate};

const ORTHO_TOL: f64 = 1e-12;

/// Amplitudes over the computational basis; player 1 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    players: usize,
    amps: Vec<Complex64>,
}

impl JointState {
    pub fn new(players: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_players(players)?;
        if amps.len() != 1 << players {
            return Err(Error::Shape(format!(
                "{} amplitudes for {players} qubits",
                amps.len()
            )));
        }
        Ok(Self { players, amps })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &JointState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &JointState, b: Complex64) -> Result<JointState> {
        if self.players != other.players {
            return Err(Error::Shape("states of different sizes".into()));
        }
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(JointState {
            players: self.players,
            amps,
        })
    }
}

fn check_players(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "EWL is implemented for 2 or 3 players, not {n}"
        )))
    }
}

/// `|0…0⟩`, or `(|0…0⟩ + |1…1⟩)/√2` when entangled.
pub fn initial_state(players: usize, entangled: bool) -> Result<JointState> {
    check_players(players)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << players];
    if entangled {
        amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[(1 << players) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    } else {
        amps[0] = Complex64::new(1.0, 0.0);
    }
    JointState::new(players, amps)
}

/// The flip `F`: swaps `|0⟩` and `|1⟩` up to phase, has determinant 1, and
/// makes the N/F images of the entangled state mutually orthogonal.
///
/// No single matrix works for both sizes. With two qubits `(F⊗I)Φ = (I⊗F)Φ`
/// for every real antidiagonal `F` (such as `iX` or `iY`), so the phases
/// `F = [[0, e^{iπ/4}], [−e^{−iπ/4}, 0]]` are needed. With three qubits that
/// choice makes `NNN` and `FFF` coincide, while `iY` separates all eight.
pub fn flip_operator(players: usize) -> Result<Mat2> {
    check_players(players)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(if players == 2 {
        let beta = Complex64::from_polar(1.0, FRAC_PI_4);
        let gamma = -Complex64::from_polar(1.0, -FRAC_PI_4);
        Mat2::new(zero, beta, gamma, zero)
    } else {
        Mat2::new(
            zero,
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            zero,
        )
    })
}

/// Identification of unit quaternions with `SU(2)` in which `i` is the flip.
///
/// Two players: `i ↦ F`, `j ↦ Fᵀ`, `k ↦ F·Fᵀ`. Three players: `i ↦ iY`,
/// `j ↦ iX`, `k ↦ iZ`.
pub fn ewl_frame(players: usize) -> Result<Su2Frame> {
    let f = flip_operator(players)?;
    let j = if players == 2 {
        f.transpose()
    } else {
        let (z, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
        Mat2::new(z, i, i, z)
    };
    Su2Frame::from_generators(f, j)
}

/// Unitary of a unit quaternion strategy in the EWL frame.
pub fn strategy_matrix(players: usize, q: UnitQuaternion) -> Result<Mat2> {
    Ok(ewl_frame(players)?.quat_to_su2(q))
}

/// Images of the initial state under all N/F profiles.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    labels: Vec<String>,
    states: Vec<JointState>,
}

impl MeasurementBasis {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn states(&self) -> &[JointState] {
        &self.states
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, x) in self.states.iter().enumerate() {
            for (b, y) in self.states.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((x.inner(y) - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// N/F basis, labelled lexicographically with `N < F` and player 1 leftmost.
pub fn measurement_basis(players: usize, entangled: bool) -> Result<MeasurementBasis> {
    let init = initial_state(players, entangled)?;
    let flip = flip_operator(players)?;
    let mut labels = Vec::with_capacity(1 << players);
    let mut states = Vec::with_capacity(1 << players);
    for idx in 0..1usize << players {
        let ops: Vec<Mat2> = (0..players)
            .map(|p| {
                if idx >> (players - 1 - p) & 1 == 1 {
                    flip
                } else {
                    Mat2::IDENTITY
                }
            })
            .collect();
        labels.push(
            (0..players)
                .map(|p| {
                    if idx >> (players - 1 - p) & 1 == 1 {
                        'F'
                    } else {
                        'N'
                    }
                })
                .collect(),
        );
        states.push(apply_profile(&init, &ops)?);
    }
    let basis = MeasurementBasis { labels, states };
    if basis.orthonormality_error() > ORTHO_TOL {
        return Err(Error::Domain("N/F images are not orthonormal".into()));
    }
    Ok(basis)
}

/// Applies `U₁ ⊗ … ⊗ Uₙ`.
pub fn apply_profile(state: &JointState, unitaries: &[Mat2]) -> Result<JointState> {
    let n = state.players;
    if unitaries.len() != n {
        return Err(Error::Shape(format!(
            "{} unitaries for {n} players",
            unitaries.len()
        )));
    }
    let mut amps = state.amps.clone();
    for (p, u) in unitaries.iter().enumerate() {
        let bit = 1 << (n - 1 - p);
        for idx in 0..amps.len() {
            if idx & bit == 0 {
                let (a0, a1) = (amps[idx], amps[idx | bit]);
                amps[idx] = u.get(0, 0) * a0 + u.get(0, 1) * a1;
                amps[idx | bit] = u.get(1, 0) * a0 + u.get(1, 1) * a1;
            }
        }
    }
    Ok(JointState { players: n, amps })
}

/// `|⟨b|ψ⟩|² / Σ_b |⟨b|ψ⟩|²`; the ratio makes unnormalized input acceptable.
pub fn outcome_distribution(state: &JointState, basis: &MeasurementBasis) -> Result<Vec<f64>> {
    if state.players != basis.states[0].players {
        return Err(Error::Shape("state and basis sizes differ".into()));
    }
    let weights: Vec<f64> = basis
        .states
        .iter()
        .map(|b| b.inner(state).norm_sqr())
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::Domain(
            "zero state has no outcome distribution".into(),
        ));
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Precomputed basis for repeated evaluations of one game.
#[derive(Clone, Debug)]
pub struct Protocol {
    players: usize,
    init: JointState,
    basis: MeasurementBasis,
    payoffs: Vec<Vec<f64>>,
}

impl Protocol {
    pub fn new(game: &StrategicGame, entangled: bool) -> Result<Self> {
        let n = game.num_players();
        check_players(n)?;
        if !game.is_binary() {
            return Err(Error::Shape("EWL needs two strategies per player".into()));
        }
        let payoffs = game
            .profiles()
            .map(|p| game.payoff(&p).iter().map(rational_to_f64).collect())
            .collect();
        Ok(Self {
            players: n,
            init: initial_state(n, entangled)?,
            basis: measurement_basis(n, entangled)?,
            payoffs,
        })
    }

    /// Oracle without a game attached; [`Protocol::payoff_of`] returns zeros.
    pub fn distribution_only(players: usize, entangled: bool) -> Result<Self> {
        Ok(Self {
            players,
            init: initial_state(players, entangled)?,
            basis: measurement_basis(players, entangled)?,
            payoffs: Vec::new(),
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    /// Outcome distribution over profiles (N = first strategy, F = second).
    pub fn distribution(&self, unitaries: &[Mat2]) -> Result<Vec<f64>> {
        outcome_distribution(&apply_profile(&self.init, unitaries)?, &self.basis)
    }

    pub fn payoff_of(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.players];
        for (w, v) in dist.iter().zip(&self.payoffs) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += w * x;
            }
        }
        out
    }

    pub fn evaluate(&self, unitaries: &[Mat2]) -> Result<(Vec<f64>, Vec<f64>)> {
        let dist = self.distribution(unitaries)?;
        let pay = self.payoff_of(&dist);
        Ok((dist, pay))
    }
}

/// Outcome distribution and expected payoffs of a pure quantum profile.
pub fn eval_pure_quantum(
    game: &StrategicGame,
    entangled: bool,
    unitaries: &[Mat2],
) -> Result<(Vec<f64>, Vec<f64>)> {
    Protocol::new(game, entangled)?.evaluate(unitaries)
}

/// A player's randomization over `SU(2)`.
#[derive(Clone, Debug, PartialEq)]
pub enum MixedQuantumStrategy {
    /// Finitely many unitaries with weights summing to one.
    Atoms(Vec<(Mat2, f64)>),
    /// Haar measure on `SU(2)`.
    HaarUniform,
}

impl MixedQuantumStrategy {
    pub fn atoms(atoms: Vec<(Mat2, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("a mixture needs at least one atom".into()));
        }
        if atoms
            .iter()
            .any(|(m, w)| *w < 0.0 || !m.is_special_unitary(1e-10))
        {
            return Err(Error::Domain(
                "atoms must be SU(2) elements with nonnegative weights".into(),
            ));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("atom weights sum to {total}")));
        }
        Ok(Self::Atoms(atoms))
    }

    pub fn pure(m: Mat2) -> Result<Self> {
        Self::atoms(vec![(m, 1.0)])
    }

    /// Uniform mixture over unit quaternions read in `frame`.
    pub fn uniform_quaternions(frame: &Su2Frame, units: &[Quaternion]) -> Result<Self> {
        let w = 1.0 / units.len() as f64;
        Self::atoms(
            units
                .iter()
                .map(|&q| Ok((frame.quat_to_su2(UnitQuaternion::new(q)?), w)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn is_haar(&self) -> bool {
        matches!(self, Self::HaarUniform)
    }
}

/// Expected payoffs of a mixed quantum profile.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumEstimate {
    /// Per player; the standard error is zero when evaluation was exact.
    pub payoffs: Vec<MonteCarloEstimate>,
    pub exact: bool,
}

impl QuantumEstimate {
    pub fn means(&self) -> Vec<f64> {
        self.payoffs.iter().map(|e| e.mean).collect()
    }
}

/// Atom parts are summed exactly; Haar parts are sampled (`samples` draws,
/// seeded by `seed`) with the atom parts averaged exactly inside each draw.
pub fn eval_mixed_quantum(
    game: &StrategicGame,
    entangled: bool,
    profile: &[MixedQuantumStrategy],
    samples: u64,
    seed: u64,
) -> Result<QuantumEstimate> {
    let proto = Protocol::new(game, entangled)?;
    let n = proto.players;
    if profile.len() != n {
        return Err(Error::Shape(format!(
            "{} strategies for {n} players",
            profile.len()
        )));
    }
    let exact_average = |fixed: &[Option<Mat2>]| -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        let mut ops = vec![Mat2::IDENTITY; n];
        let mut walk = |ops: &mut Vec<Mat2>, w: f64| -> Result<()> {
            let (_, pay) = proto.evaluate(ops)?;
            for (o, v) in out.iter_mut().zip(pay) {
                *o += w * v;
            }
            Ok(())
        };
        enumerate_atoms(profile, fixed, 0, 1.0, &mut ops, &mut walk)?;
        Ok(out)
    };
    if !profile.iter().any(MixedQuantumStrategy::is_haar) {
        let mean = exact_average(&vec![None; n])?;
        return Ok(QuantumEstimate {
            payoffs: mean
                .into_iter()
                .map(|m| MonteCarloEstimate {
                    mean: m,
                    std_error: 0.0,
                    samples: 0,
                })
                .collect(),
            exact: true,
        });
    }
    if samples == 0 {
        return Err(Error::Domain(
            "Haar strategies need at least one sample".into(),
        ));
    }
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let fixed: Vec<Option<Mat2>> = profile
            .iter()
            .map(|s| {
                s.is_haar()
                    .then(|| crate::algebra::quat_to_su2(sample_unit_quaternion(rng)))
            })
            .collect();
        exact_average(&fixed).expect("validated profile")
    };
    Ok(QuantumEstimate {
        payoffs: estimate(samples, seed, n, draw),
        exact: false,
    })
}

/// Exact outcome distribution of a profile made only of finite mixtures.
pub fn mixed_distribution(
    players: usize,
    entangled: bool,
    profile: &[MixedQuantumStrategy],
) -> Result<Vec<f64>> {
    let proto = Protocol::distribution_only(players, entangled)?;
    if profile.len() != players {
        return Err(Error::Shape(format!(
            "{} strategies for {players} players",
            profile.len()
        )));
    }
    let mut acc = vec![0.0; 1 << players];
    let mut ops = vec![Mat2::IDENTITY; players];
    let mut visit = |ops: &mut Vec<Mat2>, w: f64| -> Result<()> {
        for (a, d) in acc.iter_mut().zip(proto.distribution(ops)?) {
            *a += w * d;
        }
        Ok(())
    };
    enumerate_atoms(profile, &vec![None; players], 0, 1.0, &mut ops, &mut visit)?;
    Ok(acc)
}

fn enumerate_atoms<F>(
    profile: &[MixedQuantumStrategy],
    fixed: &[Option<Mat2>],
    player: usize,
    weight: f64,
    ops: &mut Vec<Mat2>,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&mut Vec<Mat2>, f64) -> Result<()>,
{
    if player == profile.len() {
        return visit(ops, weight);
    }
    if let Some(m) = fixed[player] {
        ops[player] = m;
        return enumerate_atoms(profile, fixed, player + 1, weight, ops, visit);
    }
    match &profile[player] {
        MixedQuantumStrategy::Atoms(atoms) => {
            for (m, w) in atoms {
                if *w == 0.0 {
                    continue;
                }
                ops[player] = *m;
                enumerate_atoms(profile, fixed, player + 1, weight * w, ops, visit)?;
            }
            Ok(())
        }
        MixedQuantumStrategy::HaarUniform => Err(Error::Domain("unsampled Haar strategy".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategic::BuiltinGame;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn initial_states() {
        let e = initial_state(2, true).unwrap();
        assert_eq!(
            e.amplitudes(),
            &[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]
        );
        assert_eq!(
            initial_state(2, false).unwrap().amplitudes(),
            &[c(1.0), c(0.0), c(0.0), c(0.0)]
        );
        let t = initial_state(3, true).unwrap();
        assert_eq!(t.amplitudes()[0], c(FRAC_1_SQRT_2));
        assert_eq!(t.amplitudes()[7], c(FRAC_1_SQRT_2));
        assert!(initial_state(4, true).is_err());
    }

    #[test]
    fn flip_properties() {
        for n in [2, 3] {
            let f = flip_operator(n).unwrap();
            assert!(f.is_special_unitary(1e-12));
            assert_eq!(f.get(0, 0).norm(), 0.0);
            let sq = f * f;
            assert!(sq.max_abs_diff(&Mat2::IDENTITY.scale(c(-1.0))) < 1e-12);
            for entangled in [true, false] {
                assert!(
                    measurement_basis(n, entangled)
                        .unwrap()
                        .orthonormality_error()
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn real_antidiagonal_flip_is_degenerate_for_two_players() {
        let (z, i) = (c(0.0), Complex64::new(0.0, 1.0));
        let ix = Mat2::new(z, i, i, z);
        let init = initial_state(2, true).unwrap();
        let fn_ = apply_profile(&init, &[ix, Mat2::IDENTITY]).unwrap();
        let nf = apply_profile(&init, &[Mat2::IDENTITY, ix]).unwrap();
        assert!((fn_.inner(&nf).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_labels_and_images() {
        let b = measurement_basis(3, true).unwrap();
        assert_eq!(b.labels()[0], "NNN");
        assert_eq!(b.labels()[4], "FNN");
        assert_eq!(b.labels()[7], "FFF");
        let b2 = measurement_basis(2, true).unwrap();
        assert_eq!(b2.states()[0], initial_state(2, true).unwrap());
        let f = flip_operator(2).unwrap();
        let ff = apply_profile(&initial_state(2, true).unwrap(), &[f, f]).unwrap();
        assert!((b2.states()[3].inner(&ff).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distributions() {
        let b = measurement_basis(2, true).unwrap();
        assert_eq!(
            outcome_distribution(&b.states()[1], &b)
                .unwrap()
                .iter()
                .map(|x| x.round())
                .collect::<Vec<_>>(),
            vec![0.0, 1.0, 0.0, 0.0]
        );
        let s = FRAC_1_SQRT_2;
        let mix = b.states()[0].combine(c(s), &b.states()[3], c(s)).unwrap();
        let d = outcome_distribution(&mix, &b).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-12 && (d[3] - 0.5).abs() < 1e-12);
        // unnormalized combinations use the ratio rule
        let raw = b.states()[0]
            .combine(c(3.0), &b.states()[2], c(4.0))
            .unwrap();
        let d = outcome_distribution(&raw, &b).unwrap();
        assert!((d[0] - 9.0 / 25.0).abs() < 1e-12 && (d[2] - 16.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn proper_quantization_of_simplified_poker() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        let f = flip_operator(2).unwrap();
        for entangled in [true, false] {
            let (d, pay) =
                eval_pure_quantum(&sp, entangled, &[Mat2::IDENTITY, Mat2::IDENTITY]).unwrap();
            assert!((d[0] - 1.0).abs() < 1e-12 && pay.iter().all(|x| x.abs() < 1e-12));
            let (_, pay) = eval_pure_quantum(&sp, entangled, &[f, Mat2::IDENTITY]).unwrap();
            assert!((pay[0] - 1.25).abs() < 1e-12 && (pay[1] + 1.25).abs() < 1e-12);
        }
    }

    #[test]
    fn half_flip_mixes_two_outcomes() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        let s = FRAC_1_SQRT_2;
        let half = strategy_matrix(
            2,
            UnitQuaternion::new(Quaternion::new(s, s, 0.0, 0.0)).unwrap(),
        )
        .unwrap();
        let (d, pay) = eval_pure_quantum(&sp, true, &[half, Mat2::IDENTITY]).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-12 && (d[2] - 0.5).abs() < 1e-12);
        assert!((pay[0] - 0.625).abs() < 1e-12);
    }

    #[test]
    fn frames_make_i_the_flip() {
        for n in [2, 3] {
            let frame = ewl_frame(n).unwrap();
            assert!(
                frame
                    .quat_to_su2(UnitQuaternion::I)
                    .max_abs_diff(&flip_operator(n).unwrap())
                    < 1e-12
            );
        }
    }

    #[test]
    fn mixed_classical_atoms() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        let f = flip_operator(2).unwrap();
        let mix =
            MixedQuantumStrategy::atoms(vec![(Mat2::IDENTITY, 2.0 / 3.0), (f, 1.0 / 3.0)]).unwrap();
        let est = eval_mixed_quantum(&sp, false, &[mix.clone(), mix], 0, 0).unwrap();
        assert!(est.exact);
        assert!((est.payoffs[0].mean - 5.0 / 6.0).abs() < 1e-12);
        let id = MixedQuantumStrategy::pure(Mat2::IDENTITY).unwrap();
        let est = eval_mixed_quantum(&sp, true, &[id.clone(), id], 0, 0).unwrap();
        assert_eq!(est.means(), vec![0.0, 0.0]);
    }

    #[test]
    fn haar_needs_samples_and_is_seeded() {
        let sp = BuiltinGame::SimplifiedPokerReduced.game();
        let id = MixedQuantumStrategy::pure(Mat2::IDENTITY).unwrap();
        let prof = [MixedQuantumStrategy::HaarUniform, id];
        assert!(eval_mixed_quantum(&sp, true, &prof, 0, 1).is_err());
        let a = eval_mixed_quantum(&sp, true, &prof, 20_000, 5).unwrap();
        assert_eq!(a, eval_mixed_quantum(&sp, true, &prof, 20_000, 5).unwrap());
        assert!(a.payoffs[0].within(15.0 / 16.0, 4.0), "{a:?}");
        assert!(MixedQuantumStrategy::atoms(vec![(Mat2::IDENTITY, 0.5)]).is_err());
    }
}
