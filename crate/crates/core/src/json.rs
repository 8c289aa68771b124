//! JSON schema for games and tagged numbers in reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{format_rational, parse_rational, rational_to_f64, Rational, StrategicGame};
use crate::mc::MonteCarloEstimate;

/// A reported number, tagged with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Number {
    /// Exact value (a rational such as `"5/6"` or a closed form) with its decimal value.
    Exact { exact: String, value: f64 },
    /// Monte Carlo estimate.
    Estimate {
        value: f64,
        std_error: f64,
        samples: u64,
    },
    /// Deterministic floating-point result such as a residual or a deviation.
    Computed { value: f64 },
}

impl Number {
    pub fn rational(r: &Rational) -> Self {
        Number::Exact {
            exact: format_rational(r),
            value: rational_to_f64(r),
        }
    }

    pub fn closed_form(form: impl Into<String>, value: f64) -> Self {
        Number::Exact {
            exact: form.into(),
            value,
        }
    }

    pub fn estimate(e: &MonteCarloEstimate) -> Self {
        Number::Estimate {
            value: e.mean,
            std_error: e.std_error,
            samples: e.samples,
        }
    }

    pub fn computed(value: f64) -> Self {
        Number::Computed { value }
    }

    pub fn value(&self) -> f64 {
        match self {
            Number::Exact { value, .. }
            | Number::Estimate { value, .. }
            | Number::Computed { value } => *value,
        }
    }
}

/// Serialized form of a [`StrategicGame`]; payoffs are rational strings listed
/// in profile order with the last player varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameJson {
    pub players: usize,
    pub strategies: Vec<Vec<String>>,
    pub payoffs: Vec<ProfilePayoff>,
    pub zero_sum: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePayoff {
    pub profile: Vec<String>,
    pub payoff: Vec<String>,
}

impl From<&StrategicGame> for GameJson {
    fn from(game: &StrategicGame) -> Self {
        GameJson {
            players: game.num_players(),
            strategies: game.all_labels().to_vec(),
            payoffs: game
                .profiles()
                .map(|p| ProfilePayoff {
                    profile: game.profile_labels(&p),
                    payoff: game.payoff(&p).iter().map(format_rational).collect(),
                })
                .collect(),
            zero_sum: game.is_zero_sum(),
        }
    }
}

impl GameJson {
    pub fn to_game(&self) -> Result<StrategicGame> {
        if self.strategies.len() != self.players {
            return Err(Error::Shape(format!(
                "{} strategy lists for {} players",
                self.strategies.len(),
                self.players
            )));
        }
        let expected: Vec<Vec<String>> =
            crate::game::Profiles::new(&self.strategies.iter().map(Vec::len).collect::<Vec<_>>())
                .map(|p| {
                    p.iter()
                        .enumerate()
                        .map(|(i, &s)| self.strategies[i][s].clone())
                        .collect()
                })
                .collect();
        if expected.len() != self.payoffs.len() {
            return Err(Error::Shape(format!(
                "expected {} payoff entries, got {}",
                expected.len(),
                self.payoffs.len()
            )));
        }
        let mut payoffs = Vec::with_capacity(expected.len());
        for (want, entry) in expected.iter().zip(&self.payoffs) {
            if &entry.profile != want {
                return Err(Error::Parse(format!(
                    "payoff entry {:?} out of order, expected {:?}",
                    entry.profile, want
                )));
            }
            payoffs.push(
                entry
                    .payoff
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let game = StrategicGame::new(self.strategies.clone(), payoffs)?;
        if self.zero_sum != game.is_zero_sum() {
            return Err(Error::Parse(
                "zero_sum flag does not match the payoffs".into(),
            ));
        }
        Ok(game)
    }
}

pub fn game_to_json(game: &StrategicGame) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GameJson::from(game))?)
}

pub fn game_from_json(text: &str) -> Result<StrategicGame> {
    serde_json::from_str::<GameJson>(text)?.to_game()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategic::BuiltinGame;

    #[test]
    fn round_trip() {
        for b in BuiltinGame::ALL {
            let g = b.game();
            let text = game_to_json(&g).unwrap();
            assert_eq!(game_from_json(&text).unwrap(), g);
        }
        let text = game_to_json(&BuiltinGame::SimplifiedPokerReduced.game()).unwrap();
        assert!(text.contains("\"5/2\""));
        assert!(text.contains("\"zero_sum\": true"));
    }

    #[test]
    fn rejects_bad_input() {
        let mut j = GameJson::from(&BuiltinGame::Chicken.game());
        j.zero_sum = true;
        assert!(j.to_game().is_err());
        let mut j = GameJson::from(&BuiltinGame::Chicken.game());
        j.payoffs.swap(0, 1);
        assert!(j.to_game().is_err());
        assert!(game_from_json("{").is_err());
    }

    #[test]
    fn number_tags() {
        let n = Number::rational(&crate::game::rat(5, 6));
        let v = serde_json::to_value(&n).unwrap();
        assert_eq!(v["kind"], "exact");
        assert_eq!(v["exact"], "5/6");
        let e = Number::estimate(&MonteCarloEstimate {
            mean: 0.9,
            std_error: 0.01,
            samples: 10,
        });
        assert_eq!(serde_json::to_value(&e).unwrap()["kind"], "estimate");
    }
}
