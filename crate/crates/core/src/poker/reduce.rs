use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{named_strategies, strategic_form, Card, PokerGame, PokerSpec};
use crate::error::{Error, Result};
use crate::game::{NormalForm, StrategicGame};

/// A game restricted to subsets of each player's strategies.
///
/// Indices of the view are positions within the subsets.
pub struct SubGame<'a, G: ?Sized> {
    game: &'a G,
    subsets: Vec<Vec<usize>>,
}

impl<'a, G: NormalForm + ?Sized> SubGame<'a, G> {
    pub fn new(game: &'a G, subsets: Vec<Vec<usize>>) -> Self {
        Self { game, subsets }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

impl<G: NormalForm + ?Sized> NormalForm for SubGame<'_, G> {
    fn num_players(&self) -> usize {
        self.game.num_players()
    }

    fn num_strategies(&self, player: usize) -> usize {
        self.subsets[player].len()
    }

    fn strategy_label(&self, player: usize, strategy: usize) -> String {
        self.game
            .strategy_label(player, self.subsets[player][strategy])
    }

    fn denominator(&self) -> i64 {
        self.game.denominator()
    }

    fn payoff_numerators(&self, profile: &[usize], out: &mut [i64]) {
        let full: Vec<usize> = profile
            .iter()
            .enumerate()
            .map(|(p, &s)| self.subsets[p][s])
            .collect();
        self.game.payoff_numerators(&full, out);
    }

    fn fill_row(&self, player: usize, strategy: usize, allowed: &[Vec<usize>], out: &mut Vec<i64>) {
        let mapped: Vec<Vec<usize>> = allowed
            .iter()
            .enumerate()
            .map(|(p, a)| {
                if p == player {
                    Vec::new()
                } else {
                    a.iter().map(|&i| self.subsets[p][i]).collect()
                }
            })
            .collect();
        self.game
            .fill_row(player, self.subsets[player][strategy], &mapped, out);
    }
}

/// Own payoff numerators of `player` playing `strategy` against `allowed`.
fn own_row<G: NormalForm + ?Sized>(
    game: &G,
    allowed: &[Vec<usize>],
    player: usize,
    strategy: usize,
) -> Vec<i64> {
    let n = game.num_players();
    let mut full = Vec::new();
    game.fill_row(player, strategy, allowed, &mut full);
    full.into_iter().skip(player).step_by(n).collect()
}

fn fingerprint(row: &[i64]) -> u64 {
    let mut h = DefaultHasher::new();
    row.hash(&mut h);
    h.finish()
}

/// Classes of payoff-equivalent strategies, per player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// `classes[player][c]` lists original strategy indices; the first is the
    /// class representative.
    pub classes: Vec<Vec<Vec<usize>>>,
}

impl Quotient {
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        self.classes
            .iter()
            .map(|cs| cs.iter().map(|c| c[0]).collect())
            .collect()
    }

    /// Index of the class containing `strategy`.
    pub fn class_of(&self, player: usize, strategy: usize) -> Option<usize> {
        self.classes[player]
            .iter()
            .position(|c| c.contains(&strategy))
    }

    /// Representative of the class containing `strategy`.
    pub fn representative(&self, player: usize, strategy: usize) -> Option<usize> {
        self.class_of(player, strategy)
            .map(|c| self.classes[player][c][0])
    }

    pub fn class_counts(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Merges strategies whose full payoff vectors agree at every opponent profile.
///
/// Rows are bucketed by hash and every merge is confirmed by exact comparison.
pub fn quotient_payoff_equivalent<G: NormalForm + ?Sized>(game: &G) -> Quotient {
    let n = game.num_players();
    let all: Vec<Vec<usize>> = (0..n)
        .map(|p| (0..game.num_strategies(p)).collect())
        .collect();
    let row = |player: usize, s: usize| {
        let mut out = Vec::new();
        game.fill_row(player, s, &all, &mut out);
        out
    };
    let classes = (0..n)
        .map(|player| {
            let fingerprints: Vec<u64> = (0..game.num_strategies(player))
                .into_par_iter()
                .map(|s| fingerprint(&row(player, s)))
                .collect();
            let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for (s, fp) in fingerprints.iter().enumerate() {
                let candidates = by_hash.entry(*fp).or_default();
                let home = if candidates.is_empty() {
                    None
                } else {
                    let mine = row(player, s);
                    candidates
                        .iter()
                        .copied()
                        .find(|&c| row(player, classes[c][0]) == mine)
                };
                match home {
                    Some(c) => classes[c].push(s),
                    None => {
                        candidates.push(classes.len());
                        classes.push(vec![s]);
                    }
                }
            }
            classes
        })
        .collect();
    Quotient { classes }
}

/// [`quotient_payoff_equivalent`] specialized to poker strategic forms.
///
/// A plan's row is the sum of an `H` half and an `L` half, each depending on
/// one card's code, so only `2·2^k` half-rows are evaluated per player. A
/// linear fingerprint lets plan hashes be summed from the halves.
pub fn quotient_poker(game: &PokerGame) -> Quotient {
    let n = game.num_players();
    let k = game.spec().variant.info_set_count();
    let t = 1usize << k;
    let all: Vec<Vec<usize>> = (0..n)
        .map(|p| (0..game.num_strategies(p)).collect())
        .collect();
    let classes = (0..n)
        .map(|player| {
            let halves = |card: Card| -> Vec<Vec<i64>> {
                (0..t)
                    .into_par_iter()
                    .map(|code| {
                        let mut out = Vec::new();
                        game.fill_half_row(player, card, code, &all, &mut out);
                        out
                    })
                    .collect()
            };
            let (high, low) = (halves(Card::H), halves(Card::L));
            let (fh, fl): (Vec<u64>, Vec<u64>) = (
                high.iter().map(|r| linear_fingerprint(r)).collect(),
                low.iter().map(|r| linear_fingerprint(r)).collect(),
            );
            let same = |a: usize, b: usize| {
                let (ha, la, hb, lb) = (
                    &high[a >> k],
                    &low[a & (t - 1)],
                    &high[b >> k],
                    &low[b & (t - 1)],
                );
                (0..ha.len()).all(|i| ha[i] + la[i] == hb[i] + lb[i])
            };
            let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for s in 0..t * t {
                let fp = fh[s >> k].wrapping_add(fl[s & (t - 1)]);
                let candidates = by_hash.entry(fp).or_default();
                match candidates.iter().copied().find(|&c| same(classes[c][0], s)) {
                    Some(c) => classes[c].push(s),
                    None => {
                        candidates.push(classes.len());
                        classes.push(vec![s]);
                    }
                }
            }
            classes
        })
        .collect();
    Quotient { classes }
}

/// `Σ w_i·row_i` in wrapping arithmetic with fixed pseudo-random weights.
fn linear_fingerprint(row: &[i64]) -> u64 {
    let mut w = 0x9e37_79b9_7f4a_7c15u64;
    row.iter().fold(0u64, |acc, &x| {
        w ^= w << 13;
        w ^= w >> 7;
        w ^= w << 17;
        acc.wrapping_add(w.wrapping_mul(x as u64))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominanceMode {
    /// Strictly better at every opponent profile.
    Strong,
    /// At least as good everywhere and strictly better somewhere.
    Weak,
}

impl fmt::Display for DominanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceMode::Strong => "strong",
            DominanceMode::Weak => "weak",
        })
    }
}

/// One removal: `removed` was dominated by the surviving `dominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub round: usize,
    /// Zero-based player index.
    pub player: usize,
    pub removed: usize,
    pub dominator: usize,
    pub removed_label: String,
    pub dominator_label: String,
    /// Strongest relation the dominator witnesses over the removed strategy.
    pub mode: DominanceMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Surviving strategy indices of the input game, per player.
    pub survivors: Vec<Vec<usize>>,
    pub trace: Vec<Elimination>,
    /// Number of completed rounds, including the final idle one.
    pub rounds: usize,
}

impl Reduction {
    /// Materializes the reduced game.
    pub fn game<G: NormalForm + ?Sized>(&self, game: &G) -> Result<StrategicGame> {
        StrategicGame::restrict_from(game, &self.survivors)
    }
}

/// `Some(Strong)` if row `better` strictly beats `worse` everywhere,
/// `Some(Weak)` if it weakly dominates, otherwise `None`. With
/// `required == Strong` the scan stops at the first tie.
fn relation(better: &[i64], worse: &[i64], required: DominanceMode) -> Option<DominanceMode> {
    let mut strict_everywhere = true;
    let mut strict_somewhere = false;
    for (b, w) in better.iter().zip(worse) {
        if b < w {
            return None;
        }
        if b > w {
            strict_somewhere = true;
        } else {
            strict_everywhere = false;
            if required == DominanceMode::Strong {
                return None;
            }
        }
    }
    match (strict_everywhere, strict_somewhere) {
        (true, true) => Some(DominanceMode::Strong),
        (_, true) => Some(DominanceMode::Weak),
        _ => None,
    }
}

/// Iterated elimination from the full strategy sets.
pub fn reduce_by_dominance<G: NormalForm + ?Sized>(
    game: &G,
    mode: DominanceMode,
    order: &[usize],
) -> Result<Reduction> {
    let all: Vec<Vec<usize>> = (0..game.num_players())
        .map(|p| (0..game.num_strategies(p)).collect())
        .collect();
    reduce_from(game, all, mode, order, 1)
}

/// Iterated elimination starting from `start`, scanning players in `order`.
///
/// On each player's turn every currently dominated strategy is removed.
/// Dominance is transitive and irreflexive, so this removes exactly what
/// one-at-a-time removal within the turn would, and every removed strategy
/// has an undominated dominator that survives the turn.
pub fn reduce_from<G: NormalForm + ?Sized>(
    game: &G,
    start: Vec<Vec<usize>>,
    mode: DominanceMode,
    order: &[usize],
    first_round: usize,
) -> Result<Reduction> {
    let n = game.num_players();
    if start.len() != n {
        return Err(Error::Shape(format!("expected {n} strategy subsets")));
    }
    if order.is_empty() || order.iter().any(|&p| p >= n) {
        return Err(Error::Domain(format!("invalid player order {order:?}")));
    }
    let mut allowed = start;
    let mut trace = Vec::new();
    let mut round = first_round;
    loop {
        let mut removed_any = false;
        for &player in order {
            let current = allowed[player].clone();
            let rows: Vec<Vec<i64>> = current
                .par_iter()
                .map(|&x| own_row(game, &allowed, player, x))
                .collect();
            let dominated_by: Vec<Option<usize>> = (0..current.len())
                .into_par_iter()
                .map(|a| {
                    (0..current.len())
                        .find(|&b| b != a && relation(&rows[b], &rows[a], mode).is_some())
                        .map(|b| current[b])
                })
                .collect();
            let dom: HashMap<usize, usize> = current
                .iter()
                .zip(&dominated_by)
                .filter_map(|(&x, d)| d.map(|y| (x, y)))
                .collect();
            if dom.is_empty() {
                continue;
            }
            removed_any = true;
            for &x in &current {
                let Some(mut y) = dom.get(&x).copied() else {
                    continue;
                };
                while let Some(&next) = dom.get(&y) {
                    y = next;
                }
                let pos = |s: usize| {
                    current
                        .iter()
                        .position(|&c| c == s)
                        .expect("current strategy")
                };
                let witnessed = relation(&rows[pos(y)], &rows[pos(x)], DominanceMode::Weak)
                    .expect("transitive dominator");
                trace.push(Elimination {
                    round,
                    player,
                    removed: x,
                    dominator: y,
                    removed_label: game.strategy_label(player, x),
                    dominator_label: game.strategy_label(player, y),
                    mode: witnessed,
                });
            }
            allowed[player].retain(|s| !dom.contains_key(s));
        }
        round += 1;
        if !removed_any {
            break;
        }
    }
    Ok(Reduction {
        survivors: allowed,
        trace,
        rounds: round - first_round,
    })
}

/// Re-checks every trace entry: the dominator was present and dominated the
/// removed strategy in the game as it stood at that point.
pub fn verify_trace<G: NormalForm + ?Sized>(
    game: &G,
    start: &[Vec<usize>],
    trace: &[Elimination],
    order: &[usize],
) -> bool {
    let mut allowed = start.to_vec();
    let mut i = 0;
    while i < trace.len() {
        let (round, player) = (trace[i].round, trace[i].player);
        let turn: Vec<&Elimination> = trace[i..]
            .iter()
            .take_while(|e| e.round == round && e.player == player)
            .collect();
        if !order.contains(&player) {
            return false;
        }
        for e in &turn {
            let present =
                allowed[player].contains(&e.removed) && allowed[player].contains(&e.dominator);
            let witnessed = relation(
                &own_row(game, &allowed, player, e.dominator),
                &own_row(game, &allowed, player, e.removed),
                DominanceMode::Weak,
            );
            let mode_ok = match e.mode {
                DominanceMode::Strong => witnessed == Some(DominanceMode::Strong),
                DominanceMode::Weak => witnessed.is_some(),
            };
            if !present || !mode_ok || turn.iter().any(|o| o.removed == e.dominator) {
                return false;
            }
        }
        allowed[player].retain(|s| !turn.iter().any(|e| e.removed == *s));
        i += turn.len();
    }
    true
}

/// CSV with columns `round,player,removed,dominator,mode`; players are 1-based.
pub fn trace_to_csv(trace: &[Elimination]) -> String {
    let mut out = String::from("round,player,removed,dominator,mode\n");
    for e in trace {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.round,
            e.player + 1,
            e.removed_label,
            e.dominator_label,
            e.mode
        ));
    }
    out
}

/// Full pipeline for one poker model: quotient by payoff equivalence, strong
/// dominance to a fixed point, then weak dominance, round-robin 1, 2, (3).
pub struct PokerReduction {
    pub game: PokerGame,
    pub quotient: Quotient,
    pub strong: Reduction,
    pub weak: Reduction,
    /// Reduced game; survivors whose class holds a named strategy carry its name.
    pub reduced: StrategicGame,
    /// Per player, whether every named strategy's class survived.
    pub named_survive: Vec<bool>,
}

impl PokerReduction {
    pub fn survivors(&self) -> &[Vec<usize>] {
        &self.weak.survivors
    }

    pub fn trace(&self) -> Vec<Elimination> {
        self.strong
            .trace
            .iter()
            .chain(&self.weak.trace)
            .cloned()
            .collect()
    }

    /// Exactly two survivors per player, each holding a named strategy.
    pub fn matches_named(&self) -> bool {
        self.named_survive.iter().all(|&b| b) && self.survivors().iter().all(|s| s.len() == 2)
    }
}

pub fn reduce_poker(spec: &PokerSpec) -> Result<PokerReduction> {
    let game = strategic_form(spec)?;
    let quotient = quotient_poker(&game);
    let order: Vec<usize> = (0..spec.players()).collect();
    let strong = reduce_from(
        &game,
        quotient.representatives(),
        DominanceMode::Strong,
        &order,
        1,
    )?;
    let next_round = strong.trace.last().map_or(1, |e| e.round + 1);
    let weak = reduce_from(
        &game,
        strong.survivors.clone(),
        DominanceMode::Weak,
        &order,
        next_round,
    )?;

    let named = named_strategies(spec.variant);
    let mut labels = Vec::new();
    let mut ordered = Vec::new();
    let mut named_survive = Vec::new();
    for (player, survivors) in weak.survivors.iter().enumerate() {
        let reps: Vec<(usize, &str)> = named[player]
            .iter()
            .map(|(name, plan)| {
                (
                    quotient
                        .representative(player, plan.index())
                        .expect("plan in range"),
                    *name,
                )
            })
            .collect();
        named_survive.push(reps.iter().all(|(r, _)| survivors.contains(r)));
        // named survivors first, in naming order
        let mut order = survivors.clone();
        order.sort_by_key(|s| {
            (
                reps.iter().position(|(r, _)| r == s).unwrap_or(usize::MAX),
                *s,
            )
        });
        labels.push(
            order
                .iter()
                .map(|s| {
                    reps.iter()
                        .find(|(r, _)| r == s)
                        .map_or_else(|| game.strategy_label(player, *s), |(_, n)| n.to_string())
                })
                .collect::<Vec<_>>(),
        );
        ordered.push(order);
    }
    let dense = StrategicGame::restrict_from(&game, &ordered)?;
    let reduced = StrategicGame::from_fn(labels, |p| dense.payoff(p).to_vec())?;
    Ok(PokerReduction {
        game,
        quotient,
        strong,
        weak,
        reduced,
        named_survive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::StrategicGame;

    fn prisoners_dilemma() -> StrategicGame {
        StrategicGame::bimatrix(
            &["s1", "s2"],
            &["t1", "t2"],
            &[&[(3, 3), (0, 5)], &[(5, 0), (1, 1)]],
        )
        .unwrap()
    }

    #[test]
    fn prisoners_dilemma_strong() {
        let g = prisoners_dilemma();
        let r = reduce_by_dominance(&g, DominanceMode::Strong, &[0, 1]).unwrap();
        assert_eq!(r.survivors, vec![vec![1], vec![1]]);
        assert_eq!(r.trace.len(), 2);
        assert!(r.trace.iter().all(|e| e.mode == DominanceMode::Strong));
        assert!(verify_trace(
            &g,
            &[vec![0, 1], vec![0, 1]],
            &r.trace,
            &[0, 1]
        ));
        let csv = trace_to_csv(&r.trace);
        assert_eq!(
            csv.lines().next().unwrap(),
            "round,player,removed,dominator,mode"
        );
        assert!(csv.contains("1,1,s1,s2,strong"));
    }

    #[test]
    fn weak_needs_weak_mode() {
        // t1 ties t2 against s1 and loses against s2
        let g = StrategicGame::bimatrix(
            &["s1", "s2"],
            &["t1", "t2"],
            &[&[(0, 1), (0, 1)], &[(0, 0), (0, 2)]],
        )
        .unwrap();
        let strong = reduce_by_dominance(&g, DominanceMode::Strong, &[0, 1]).unwrap();
        assert!(strong.trace.is_empty());
        let weak = reduce_by_dominance(&g, DominanceMode::Weak, &[1, 0]).unwrap();
        assert_eq!(weak.survivors[1], vec![1]);
        assert_eq!(weak.trace[0].mode, DominanceMode::Weak);
    }

    #[test]
    fn quotient_merges_duplicates_and_is_idempotent() {
        let g = StrategicGame::bimatrix(
            &["a", "b", "a2"],
            &["x", "y"],
            &[&[(1, -1), (2, -2)], &[(0, 0), (3, -3)], &[(1, -1), (2, -2)]],
        )
        .unwrap();
        let q = quotient_payoff_equivalent(&g);
        assert_eq!(q.classes[0], vec![vec![0, 2], vec![1]]);
        assert_eq!(q.class_counts(), vec![2, 2]);
        let reduced = g.restrict(&q.representatives()).unwrap();
        let again = quotient_payoff_equivalent(&reduced);
        assert!(again
            .classes
            .iter()
            .all(|cs| cs.iter().all(|c| c.len() == 1)));
        assert_eq!(again.class_counts(), q.class_counts());
    }

    #[test]
    fn simplified_poker_reduces_to_named_game() {
        let spec = PokerSpec::simplified();
        let r = reduce_poker(&spec).unwrap();
        // every plan is reachable, so nothing merges
        assert_eq!(r.quotient.class_counts(), vec![4, 4]);
        assert_eq!(r.quotient, quotient_payoff_equivalent(&r.game));
        assert!(r.matches_named(), "survivors {:?}", r.reduced.all_labels());
        assert_eq!(r.reduced, crate::poker::named_game(&spec).unwrap());
        let start = r.quotient.representatives();
        assert!(verify_trace(&r.game, &start, &r.strong.trace, &[0, 1]));
        assert!(verify_trace(
            &r.game,
            &r.strong.survivors,
            &r.weak.trace,
            &[0, 1]
        ));
    }
}
