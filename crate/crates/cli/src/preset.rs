//! Parsing of per-player quantum strategies given on the command line.

use qpoker_core::algebra::{Quaternion, UnitQuaternion};
use qpoker_core::ewl::{ewl_frame, MixedQuantumStrategy};
use qpoker_core::game::{parse_rational, rational_to_f64};
use qpoker_core::quantized::discrete_equivalent;
use qpoker_core::Rational;

use crate::CliError;

/// A parsed strategy and what is known about it exactly.
#[derive(Clone, Debug)]
pub struct PlayerStrategy {
    pub spec: String,
    pub mixed: MixedQuantumStrategy,
    /// Exact N/F weights when the strategy mixes only N and F.
    pub classical: Option<[Rational; 2]>,
    /// Haar-uniform or one of its discrete equivalents.
    pub uniform: bool,
}

fn unit_by_name(name: &str) -> Option<Quaternion> {
    match name {
        "N" | "1" => Some(Quaternion::ONE),
        "F" | "i" => Some(Quaternion::I),
        "j" => Some(Quaternion::J),
        "k" => Some(Quaternion::K),
        _ => None,
    }
}

/// Accepted forms: `identity`, `flip`, `haar`, `q8`, `oct8`,
/// `quat a,b,c,d`, and `mix X:w,Y:w,…` over `N`, `F`, `1`, `i`, `j`, `k`.
pub fn parse_strategy(spec: &str, players: usize) -> Result<PlayerStrategy, CliError> {
    let frame = ewl_frame(players)?;
    let trimmed = spec.trim();
    let one = Rational::from(1);
    let zero = Rational::from(0);
    let pure =
        |q: Quaternion, classical: Option<[Rational; 2]>| -> Result<PlayerStrategy, CliError> {
            Ok(PlayerStrategy {
                spec: trimmed.to_string(),
                mixed: MixedQuantumStrategy::pure(frame.quat_to_su2(UnitQuaternion::new(q)?))?,
                classical,
                uniform: false,
            })
        };
    match trimmed {
        "identity" | "N" => return pure(Quaternion::ONE, Some([one, zero])),
        "flip" | "F" => return pure(Quaternion::I, Some([zero, one])),
        "haar" => {
            return Ok(PlayerStrategy {
                spec: trimmed.into(),
                mixed: MixedQuantumStrategy::HaarUniform,
                classical: None,
                uniform: true,
            })
        }
        "q8" => {
            return Ok(PlayerStrategy {
                spec: trimmed.into(),
                mixed: MixedQuantumStrategy::uniform_quaternions(&frame, &Quaternion::BASIS)?,
                classical: None,
                uniform: true,
            })
        }
        "oct8" => {
            if players != 3 {
                return Err(CliError::Usage(
                    "oct8 is the three-player discrete equivalent".into(),
                ));
            }
            return Ok(PlayerStrategy {
                spec: trimmed.into(),
                mixed: discrete_equivalent(3)?.swap_remove(0),
                classical: None,
                uniform: true,
            });
        }
        _ => {}
    }
    if let Some(rest) = trimmed.strip_prefix("quat") {
        let coords: Vec<f64> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad quaternion coordinate {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        let [a, b, c, d] = coords[..] else {
            return Err(CliError::Usage("quat needs four coordinates".into()));
        };
        return pure(Quaternion::new(a, b, c, d), None);
    }
    if let Some(rest) = trimmed.strip_prefix("mix") {
        let mut atoms = Vec::new();
        let mut classical = Some([zero, zero]);
        let mut total = zero;
        for part in rest.split(',') {
            let (name, weight) = part.trim().split_once(':').ok_or_else(|| {
                CliError::Usage(format!("mixture entry {part:?} must look like N:2/3"))
            })?;
            let q = unit_by_name(name.trim())
                .ok_or_else(|| CliError::Usage(format!("unknown unit {name:?}")))?;
            let w = parse_rational(weight.trim())?;
            if w < zero {
                return Err(CliError::Usage(format!("negative weight {weight}")));
            }
            total += w;
            classical = match (classical, name.trim()) {
                (Some([n, f]), "N" | "1") => Some([n + w, f]),
                (Some([n, f]), "F" | "i") => Some([n, f + w]),
                _ => None,
            };
            atoms.push((
                frame.quat_to_su2(UnitQuaternion::new(q)?),
                rational_to_f64(&w),
            ));
        }
        if total != one {
            return Err(CliError::Usage(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        return Ok(PlayerStrategy {
            spec: trimmed.into(),
            mixed: MixedQuantumStrategy::atoms(atoms)?,
            classical,
            uniform: false,
        });
    }
    Err(CliError::Usage(format!(
        "unknown strategy {spec:?}: expected identity, flip, haar, q8, oct8, \"quat a,b,c,d\" or \"mix N:2/3,F:1/3\""
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert!(parse_strategy("haar", 2).unwrap().uniform);
        assert!(parse_strategy("q8", 3).unwrap().uniform);
        assert!(parse_strategy("oct8", 2).is_err());
        let m = parse_strategy("mix N:2/3,F:1/3", 2).unwrap();
        assert_eq!(
            m.classical,
            Some([Rational::new(2, 3), Rational::new(1, 3)])
        );
        assert!(parse_strategy("mix N:1/2,j:1/2", 2)
            .unwrap()
            .classical
            .is_none());
        assert!(parse_strategy("mix N:1/2", 2).is_err());
        assert!(parse_strategy("quat 0.6,0.8,0,0", 2).is_ok());
        assert!(parse_strategy("quat 1,1,0,0", 2).is_err());
        assert!(parse_strategy("bogus", 2).is_err());
    }
}
