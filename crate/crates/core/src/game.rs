//! Finite strategic-form games with exact rational payoffs.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Rational64;

/// Read access to a finite n-player game whose payoffs share one denominator.
///
/// Dominance and equivalence scans only compare payoffs, so working on the
/// integer numerators avoids rational normalization in the hot loops.
pub trait NormalForm: Sync {
    fn num_players(&self) -> usize;
    fn num_strategies(&self, player: usize) -> usize;
    fn strategy_label(&self, player: usize, strategy: usize) -> String;
    /// Common denominator `D`: every payoff equals `numerator / D`.
    fn denominator(&self) -> i64;
    /// Writes the numerators of every player's payoff at `profile` into `out`.
    fn payoff_numerators(&self, profile: &[usize], out: &mut [i64]);

    fn shape(&self) -> Vec<usize> {
        (0..self.num_players())
            .map(|p| self.num_strategies(p))
            .collect()
    }

    /// Replaces `out` with the payoff numerators of every player, for
    /// `player` fixed to `strategy` and the others ranging over `allowed`
    /// (mixed radix, last player fastest; `allowed[player]` is ignored).
    fn fill_row(&self, player: usize, strategy: usize, allowed: &[Vec<usize>], out: &mut Vec<i64>) {
        let n = self.num_players();
        out.clear();
        if allowed
            .iter()
            .enumerate()
            .any(|(p, a)| p != player && a.is_empty())
        {
            return;
        }
        let mut digits = vec![0usize; n];
        let mut profile: Vec<usize> = (0..n)
            .map(|p| if p == player { strategy } else { allowed[p][0] })
            .collect();
        let mut buf = vec![0i64; n];
        loop {
            self.payoff_numerators(&profile, &mut buf);
            out.extend_from_slice(&buf);
            let mut pos = n;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                if pos == player {
                    continue;
                }
                digits[pos] += 1;
                if digits[pos] < allowed[pos].len() {
                    profile[pos] = allowed[pos][digits[pos]];
                    break;
                }
                digits[pos] = 0;
                profile[pos] = allowed[pos][0];
            }
        }
    }
}

/// Mixed-radix enumeration of pure profiles; the last player varies fastest.
#[derive(Clone, Debug)]
pub struct Profiles {
    shape: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Profiles {
    pub fn new(shape: &[usize]) -> Self {
        let current = if shape.iter().all(|&n| n > 0) {
            Some(vec![0; shape.len()])
        } else {
            None
        };
        Self {
            shape: shape.to_vec(),
            current,
        }
    }
}

impl Iterator for Profiles {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < self.shape[pos] {
                break;
            }
            cur[pos] = 0;
        }
        Some(out)
    }
}

/// Dense strategic-form game.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategicGame {
    labels: Vec<Vec<String>>,
    /// `payoffs[profile_index * n + player]`
    payoffs: Vec<Rational>,
    denom: i64,
    scaled: Vec<i64>,
}

impl StrategicGame {
    /// Builds a game from strategy labels and one payoff vector per profile,
    /// profiles listed in [`Profiles`] order.
    pub fn new(labels: Vec<Vec<String>>, payoffs: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Shape("a game needs at least one player".into()));
        }
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::Shape(
                "every player needs at least one strategy".into(),
            ));
        }
        let count: usize = labels.iter().map(Vec::len).product();
        if payoffs.len() != count {
            return Err(Error::Shape(format!(
                "expected {count} payoff vectors, got {}",
                payoffs.len()
            )));
        }
        if let Some(bad) = payoffs.iter().position(|v| v.len() != n) {
            return Err(Error::Shape(format!(
                "payoff vector {bad} does not have {n} entries"
            )));
        }
        let flat: Vec<Rational> = payoffs.into_iter().flatten().collect();
        let mut denom: i64 = 1;
        for r in &flat {
            denom = checked_lcm(denom, *r.denom())?;
        }
        let scaled = flat
            .iter()
            .map(|r| {
                r.numer()
                    .checked_mul(denom / r.denom())
                    .ok_or_else(|| Error::Overflow("payoff numerator".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            labels,
            payoffs: flat,
            denom,
            scaled,
        })
    }

    /// Builds a game by evaluating `f` at every profile.
    pub fn from_fn<F>(labels: Vec<Vec<String>>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let shape: Vec<usize> = labels.iter().map(Vec::len).collect();
        let payoffs = Profiles::new(&shape).map(|p| f(&p)).collect();
        Self::new(labels, payoffs)
    }

    /// Convenience for 2-player integer bimatrix tables.
    pub fn bimatrix(rows: &[&str], cols: &[&str], table: &[&[(i64, i64)]]) -> Result<Self> {
        let labels = vec![
            rows.iter().map(|s| s.to_string()).collect(),
            cols.iter().map(|s| s.to_string()).collect(),
        ];
        let payoffs = table
            .iter()
            .flat_map(|row| {
                row.iter()
                    .map(|&(a, b)| vec![Rational::from(a), Rational::from(b)])
            })
            .collect();
        Self::new(labels, payoffs)
    }

    /// Materializes the sub-game of `game` on the given strategy subsets.
    pub fn restrict_from<G: NormalForm + ?Sized>(game: &G, subsets: &[Vec<usize>]) -> Result<Self> {
        let n = game.num_players();
        if subsets.len() != n {
            return Err(Error::Shape(format!("expected {n} strategy subsets")));
        }
        let labels = subsets
            .iter()
            .enumerate()
            .map(|(p, s)| s.iter().map(|&x| game.strategy_label(p, x)).collect())
            .collect();
        let denom = game.denominator();
        let mut buf = vec![0i64; n];
        let mut full = vec![0usize; n];
        Self::from_fn(labels, |profile| {
            for (p, &idx) in profile.iter().enumerate() {
                full[p] = subsets[p][idx];
            }
            game.payoff_numerators(&full, &mut buf);
            buf.iter().map(|&x| Rational::new(x, denom)).collect()
        })
    }

    pub fn restrict(&self, subsets: &[Vec<usize>]) -> Result<Self> {
        Self::restrict_from(self, subsets)
    }

    pub fn labels(&self, player: usize) -> &[String] {
        &self.labels[player]
    }

    pub fn all_labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn strategy_index(&self, player: usize, label: &str) -> Option<usize> {
        self.labels.get(player)?.iter().position(|l| l == label)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn num_players(&self) -> usize {
        self.labels.len()
    }

    pub fn profiles(&self) -> Profiles {
        Profiles::new(&self.shape())
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.labels.len());
        profile
            .iter()
            .zip(&self.labels)
            .fold(0, |acc, (&s, l)| acc * l.len() + s)
    }

    pub fn payoff(&self, profile: &[usize]) -> &[Rational] {
        let n = self.num_players();
        let idx = self.profile_index(profile);
        &self.payoffs[idx * n..(idx + 1) * n]
    }

    pub fn payoff_f64(&self, profile: &[usize]) -> Vec<f64> {
        self.payoff(profile).iter().map(rational_to_f64).collect()
    }

    pub fn is_zero_sum(&self) -> bool {
        self.payoffs
            .chunks(self.num_players())
            .all(|v| v.iter().copied().sum::<Rational>().is_zero())
    }

    pub fn is_constant(&self) -> bool {
        let n = self.num_players();
        self.payoffs.chunks(n).all(|v| v == &self.payoffs[..n])
    }

    /// Two strategies per player.
    pub fn is_binary(&self) -> bool {
        self.labels.iter().all(|l| l.len() == 2)
    }

    /// Profile in label form.
    pub fn profile_labels(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(p, &s)| self.labels[p][s].clone())
            .collect()
    }
}

impl NormalForm for StrategicGame {
    fn num_players(&self) -> usize {
        self.labels.len()
    }

    fn num_strategies(&self, player: usize) -> usize {
        self.labels[player].len()
    }

    fn strategy_label(&self, player: usize, strategy: usize) -> String {
        self.labels[player][strategy].clone()
    }

    fn denominator(&self) -> i64 {
        self.denom
    }

    fn payoff_numerators(&self, profile: &[usize], out: &mut [i64]) {
        let n = self.labels.len();
        let idx = self.profile_index(profile);
        out.copy_from_slice(&self.scaled[idx * n..(idx + 1) * n]);
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn checked_lcm(a: i64, b: i64) -> Result<i64> {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .map(i64::abs)
        .ok_or_else(|| Error::Overflow("common denominator".into()))
}

/// Parses `"5/2"`, `"-3"` or `"0.75"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole
            .abs()
            .checked_mul(scale)
            .and_then(|x| x.checked_add(f))
            .ok_or_else(bad)?;
        return Ok(Rational::new(if neg { -mag } else { mag }, scale));
    }
    s.parse::<i64>().map(Rational::from).map_err(|_| bad())
}

/// Formats as `"n/d"`, or `"n"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_order_last_player_fastest() {
        let all: Vec<_> = Profiles::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(Profiles::new(&[2, 0]).count(), 0);
    }

    #[test]
    fn shape_errors() {
        let labels = vec![vec!["a".to_string()], vec!["b".to_string()]];
        assert!(StrategicGame::new(labels.clone(), vec![]).is_err());
        assert!(StrategicGame::new(labels, vec![vec![rat(1, 1)]]).is_err());
    }

    #[test]
    fn common_denominator() {
        let g = StrategicGame::bimatrix(&["a"], &["x", "y"], &[&[(1, -1), (0, 0)]]).unwrap();
        assert_eq!(g.denominator(), 1);
        let h = StrategicGame::new(
            vec![vec!["a".into()], vec!["x".into(), "y".into()]],
            vec![vec![rat(5, 2), rat(-5, 2)], vec![rat(1, 3), rat(-1, 3)]],
        )
        .unwrap();
        assert_eq!(h.denominator(), 6);
        let mut out = [0; 2];
        h.payoff_numerators(&[0, 1], &mut out);
        assert_eq!(out, [2, -2]);
        assert!(h.is_zero_sum());
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(-5, 4)), "-5/4");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }
}
