//! The two poker endgame models: Simplified Poker (two players) and the
//! Nash–Shapley model (three players).
//!
//! Each player antes, receives `H` or `L` with probability ½ each, and may
//! make a single bet. Payoffs are computed exactly over all `2ⁿ` deals.

mod reduce;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{checked_lcm, NormalForm, Rational, StrategicGame};

pub use reduce::{
    quotient_payoff_equivalent, quotient_poker, reduce_by_dominance, reduce_from, reduce_poker,
    trace_to_csv, verify_trace, DominanceMode, Elimination, PokerReduction, Quotient, Reduction,
    SubGame,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    SimplifiedPoker,
    NashShapley,
}

impl Variant {
    pub fn players(self) -> usize {
        match self {
            Variant::SimplifiedPoker => 2,
            Variant::NashShapley => 3,
        }
    }

    /// Information-set contexts per player, in table-header order.
    pub fn info_sets(self, player: usize) -> &'static [&'static str] {
        const SP: [&[&str]; 2] = [&["--"], &["B"]];
        const NS: [&[&str]; 3] = [
            &["--", "PBB", "PBP", "PPB"],
            &["B", "P", "PPBB", "PPBP"],
            &["BB", "BP", "PB", "PP"],
        ];
        match self {
            Variant::SimplifiedPoker => SP[player],
            Variant::NashShapley => NS[player],
        }
    }

    fn info_set_count(self) -> usize {
        self.info_sets(0).len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Card {
    H,
    L,
}

impl Card {
    pub const ALL: [Card; 2] = [Card::H, Card::L];

    fn index(self) -> usize {
        match self {
            Card::H => 0,
            Card::L => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Pass,
    Bet,
}

impl Action {
    pub fn letter(self) -> char {
        match self {
            Action::Pass => 'P',
            Action::Bet => 'B',
        }
    }

    fn from_bit(bit: usize) -> Self {
        if bit == 1 {
            Action::Bet
        } else {
            Action::Pass
        }
    }

    fn bit(self) -> usize {
        match self {
            Action::Pass => 0,
            Action::Bet => 1,
        }
    }
}

/// Game parameters. Ante and bet are non-negative exact amounts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PokerSpec {
    pub variant: Variant,
    pub ante: Rational,
    pub bet: Rational,
}

impl PokerSpec {
    pub fn new(variant: Variant, ante: Rational, bet: Rational) -> Result<Self> {
        if ante < Rational::zero() || bet < Rational::zero() {
            return Err(Error::Domain("ante and bet must be non-negative".into()));
        }
        Ok(Self { variant, ante, bet })
    }

    /// Simplified Poker with ante 15 and bet 10.
    pub fn simplified() -> Self {
        Self::new(Variant::SimplifiedPoker, 15.into(), 10.into()).unwrap()
    }

    /// Nash–Shapley with ante 16 and bet 64.
    pub fn nash_shapley() -> Self {
        Self::new(Variant::NashShapley, 16.into(), 64.into()).unwrap()
    }

    pub fn players(&self) -> usize {
        self.variant.players()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deal {
    pub cards: Vec<Card>,
    pub probability: Rational,
}

/// All `2ⁿ` deals, player 1's card most significant, `H` before `L`.
pub fn deals(players: usize) -> Vec<Deal> {
    let count = 1usize << players;
    (0..count)
        .map(|code| Deal {
            cards: (0..players)
                .map(|p| {
                    if code >> (players - 1 - p) & 1 == 0 {
                        Card::H
                    } else {
                        Card::L
                    }
                })
                .collect(),
            probability: Rational::new(1, count as i64),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionSequence(pub Vec<Action>);

impl fmt::Display for ActionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|a| write!(f, "{}", a.letter()))
    }
}

impl ActionSequence {
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'P' => Ok(Action::Pass),
                'B' => Ok(Action::Bet),
                _ => Err(Error::Parse(format!("invalid action letter {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Actions per (card, information set).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PureStrategyPlan {
    /// `actions[card][info_set]`, cards ordered `H`, `L`.
    pub actions: [Vec<Action>; 2],
}

impl PureStrategyPlan {
    /// Parses `"BBBB/PPPP"` (actions for `H`, then for `L`).
    pub fn parse(s: &str) -> Result<Self> {
        let (h, l) = s.split_once('/').ok_or_else(|| {
            Error::Parse(format!("plan {s:?} must look like H-actions/L-actions"))
        })?;
        Ok(Self {
            actions: [ActionSequence::parse(h)?.0, ActionSequence::parse(l)?.0],
        })
    }

    pub fn action(&self, card: Card, info_set: usize) -> Action {
        self.actions[card.index()][info_set]
    }

    fn code(&self, card: Card) -> usize {
        self.actions[card.index()]
            .iter()
            .fold(0, |acc, a| acc << 1 | a.bit())
    }

    fn from_code(k: usize, h: usize, l: usize) -> Self {
        let decode = |code: usize| {
            (0..k)
                .map(|m| Action::from_bit(code >> (k - 1 - m) & 1))
                .collect()
        };
        Self {
            actions: [decode(h), decode(l)],
        }
    }

    /// Index of this plan in [`enumerate_pure_strategies`] order.
    pub fn index(&self) -> usize {
        let k = self.actions[0].len();
        self.code(Card::H) << k | self.code(Card::L)
    }

    fn check(&self, variant: Variant) -> Result<()> {
        let k = variant.info_set_count();
        if self.actions.iter().any(|a| a.len() != k) {
            return Err(Error::Domain(format!(
                "plan {self} must assign {k} actions per card"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PureStrategyPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |v: &Vec<Action>| v.iter().map(|a| a.letter()).collect::<String>();
        write!(f, "{}/{}", word(&self.actions[0]), word(&self.actions[1]))
    }
}

pub fn enumerate_pure_strategies(spec: &PokerSpec, player: usize) -> Result<Vec<PureStrategyPlan>> {
    if player >= spec.players() {
        return Err(Error::Domain(format!("player {player} out of range")));
    }
    let k = spec.variant.info_set_count();
    let t = 1usize << k;
    Ok((0..t * t)
        .map(|s| PureStrategyPlan::from_code(k, s >> k, s & (t - 1)))
        .collect())
}

/// Terminal action sequences reachable under the variant's turn rules.
pub fn enumerate_action_sequences(spec: &PokerSpec) -> Vec<ActionSequence> {
    let n = spec.players();
    let k = spec.variant.info_set_count();
    let t = 1usize << k;
    let cards = vec![Card::H; n];
    let mut seen = std::collections::HashSet::new();
    // every assignment of per-card tuples reaches every sequence for some deal
    let combos = t.pow(n as u32);
    for combo in 0..combos {
        let codes: Vec<usize> = (0..n)
            .map(|p| combo / t.pow((n - 1 - p) as u32) % t)
            .collect();
        let (seq, _) = simulate(spec, &cards, |p, ctx| {
            let m = info_set_index(spec.variant, p, ctx)?;
            Ok(Action::from_bit(codes[p] >> (k - 1 - m) & 1))
        })
        .expect("enumerated tuples cover every information set");
        seen.insert(seq);
    }
    // lexicographic with B before P
    let mut out: Vec<ActionSequence> = seen.into_iter().collect();
    out.sort_by_key(|s| s.0.iter().map(|a| 1 - a.bit()).collect::<Vec<_>>());
    out
}

fn info_set_index(variant: Variant, player: usize, context: &str) -> Result<usize> {
    variant
        .info_sets(player)
        .iter()
        .position(|c| *c == context)
        .ok_or_else(|| {
            Error::Domain(format!(
                "player {} has no information set {context:?}",
                player + 1
            ))
        })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Waiting,
    Checked,
    In,
    Folded,
}

/// Plays one hand. `decide(player, context)` supplies each action.
fn simulate<F>(
    spec: &PokerSpec,
    cards: &[Card],
    mut decide: F,
) -> Result<(ActionSequence, Vec<Rational>)>
where
    F: FnMut(usize, &str) -> Result<Action>,
{
    let n = spec.players();
    let mut contrib = vec![spec.ante; n];
    let mut status = vec![Status::Waiting; n];
    let mut history = String::new();
    let mut seq = Vec::new();

    let mut act = |p: usize, history: &mut String, seq: &mut Vec<Action>| -> Result<Action> {
        let ctx = if history.is_empty() {
            "--".to_string()
        } else {
            history.clone()
        };
        let a = decide(p, &ctx)?;
        history.push(a.letter());
        seq.push(a);
        Ok(a)
    };

    match spec.variant {
        Variant::SimplifiedPoker => {
            if act(0, &mut history, &mut seq)? == Action::Pass {
                // a pass by player 1 goes straight to showdown
                return Ok((ActionSequence(seq), settle(cards, &contrib, &[true, true])));
            }
            contrib[0] += spec.bet;
            let call = act(1, &mut history, &mut seq)? == Action::Bet;
            if call {
                contrib[1] += spec.bet;
            }
            Ok((ActionSequence(seq), settle(cards, &contrib, &[true, call])))
        }
        Variant::NashShapley => {
            let mut bet_made = false;
            for p in 0..n {
                let a = act(p, &mut history, &mut seq)?;
                status[p] = match (bet_made, a) {
                    (false, Action::Pass) => Status::Checked,
                    (_, Action::Bet) => {
                        bet_made = true;
                        contrib[p] += spec.bet;
                        Status::In
                    }
                    (true, Action::Pass) => Status::Folded,
                };
            }
            if !bet_made {
                return Ok((ActionSequence(seq), vec![Rational::zero(); n]));
            }
            for p in 0..n {
                if status[p] == Status::Checked {
                    status[p] = if act(p, &mut history, &mut seq)? == Action::Bet {
                        contrib[p] += spec.bet;
                        Status::In
                    } else {
                        Status::Folded
                    };
                }
            }
            let contenders: Vec<bool> = status.iter().map(|s| *s == Status::In).collect();
            Ok((ActionSequence(seq), settle(cards, &contrib, &contenders)))
        }
    }
}

/// Net payoffs: contenders holding the best card split the pot.
fn settle(cards: &[Card], contrib: &[Rational], contenders: &[bool]) -> Vec<Rational> {
    let pot: Rational = contrib.iter().copied().sum();
    let best = cards
        .iter()
        .zip(contenders)
        .filter(|(_, &c)| c)
        .map(|(card, _)| *card)
        .min()
        .expect("at least one contender");
    let winners: Vec<bool> = cards
        .iter()
        .zip(contenders)
        .map(|(card, &c)| c && *card == best)
        .collect();
    let share = pot / Rational::from(winners.iter().filter(|&&w| w).count() as i64);
    contrib
        .iter()
        .zip(&winners)
        .map(|(c, &w)| if w { share - c } else { -c })
        .collect()
}

/// Plays out one deal under fixed plans.
pub fn play_out(
    spec: &PokerSpec,
    deal: &Deal,
    plans: &[PureStrategyPlan],
) -> Result<(ActionSequence, Vec<Rational>)> {
    if plans.len() != spec.players() || deal.cards.len() != spec.players() {
        return Err(Error::Shape(format!(
            "need {} plans and cards",
            spec.players()
        )));
    }
    for plan in plans {
        plan.check(spec.variant)?;
    }
    simulate(spec, &deal.cards, |p, ctx| {
        let m = info_set_index(spec.variant, p, ctx)?;
        Ok(plans[p].action(deal.cards[p], m))
    })
}

/// Lazily evaluated strategic form of a poker model.
///
/// Each player's payoff at a deal depends on a plan only through the action
/// tuple for the card that player holds, so per-deal payoffs are tabulated
/// once over action tuples and profiles are evaluated by summation.
#[derive(Clone, Debug)]
pub struct PokerGame {
    spec: PokerSpec,
    k: usize,
    deals: Vec<Deal>,
    /// `table[((deal·T + x₁)·T + x₂)… · n + player]`, scaled by `deal_denom`
    table: Vec<i64>,
    denom: i64,
}

/// Tabulates the exact strategic form of `spec`.
pub fn strategic_form(spec: &PokerSpec) -> Result<PokerGame> {
    let n = spec.players();
    let k = spec.variant.info_set_count();
    let t = 1usize << k;
    let deals = deals(n);
    let combos = t.pow(n as u32);
    let mut exact = Vec::with_capacity(deals.len() * combos * n);
    for deal in &deals {
        for combo in 0..combos {
            let codes: Vec<usize> = (0..n)
                .map(|p| combo / t.pow((n - 1 - p) as u32) % t)
                .collect();
            let (_, pay) = simulate(spec, &deal.cards, |p, ctx| {
                let m = info_set_index(spec.variant, p, ctx)?;
                Ok(Action::from_bit(codes[p] >> (k - 1 - m) & 1))
            })?;
            exact.extend(pay);
        }
    }
    let mut deal_denom = 1i64;
    for r in &exact {
        deal_denom = checked_lcm(deal_denom, *r.denom())?;
    }
    let table = exact
        .iter()
        .map(|r| {
            r.numer()
                .checked_mul(deal_denom / r.denom())
                .ok_or_else(|| Error::Overflow("per-deal payoff".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let denom = deal_denom
        .checked_mul(deals.len() as i64)
        .ok_or_else(|| Error::Overflow("payoff denominator".into()))?;
    Ok(PokerGame {
        spec: spec.clone(),
        k,
        deals,
        table,
        denom,
    })
}

impl PokerGame {
    pub fn spec(&self) -> &PokerSpec {
        &self.spec
    }

    pub fn plan(&self, strategy: usize) -> PureStrategyPlan {
        let t = 1usize << self.k;
        PureStrategyPlan::from_code(self.k, strategy >> self.k, strategy & (t - 1))
    }

    pub fn payoff(&self, profile: &[usize]) -> Vec<Rational> {
        let mut buf = vec![0i64; self.spec.players()];
        self.payoff_numerators(profile, &mut buf);
        buf.into_iter()
            .map(|x| Rational::new(x, self.denom))
            .collect()
    }

    /// Dense strategic form over the given plans per player.
    pub fn restrict(&self, subsets: &[Vec<usize>]) -> Result<StrategicGame> {
        StrategicGame::restrict_from(self, subsets)
    }

    /// Row of [`NormalForm::fill_row`] restricted to deals where `player`
    /// holds `card`, which depends on the plan only through that card's code.
    pub fn fill_half_row(
        &self,
        player: usize,
        card: Card,
        code: usize,
        allowed: &[Vec<usize>],
        out: &mut Vec<i64>,
    ) {
        let mut codes = [0, 0];
        let mut keep = [false, false];
        codes[card.index()] = code;
        keep[card.index()] = true;
        self.accumulate_row(player, &codes, &keep, allowed, out);
    }

    fn accumulate_row(
        &self,
        player: usize,
        own: &[usize; 2],
        keep: &[bool; 2],
        allowed: &[Vec<usize>],
        out: &mut Vec<i64>,
    ) {
        let n = self.spec.players();
        let t = 1usize << self.k;
        let code = |s: usize, card: Card| {
            if card == Card::H {
                s >> self.k
            } else {
                s & (t - 1)
            }
        };
        let place = |p: usize| t.pow((n - 1 - p) as u32);
        // table offset per kept deal from the deal itself and the fixed player
        let kept: Vec<(usize, &Deal)> = self
            .deals
            .iter()
            .enumerate()
            .filter(|(_, deal)| keep[deal.cards[player].index()])
            .map(|(d, deal)| {
                (
                    d * t.pow(n as u32) + own[deal.cards[player].index()] * place(player),
                    deal,
                )
            })
            .collect();
        // offset contributed by each opponent strategy, per card
        let opponents: Vec<usize> = (0..n).filter(|&p| p != player).collect();
        let contrib: Vec<Vec<[usize; 2]>> = opponents
            .iter()
            .map(|&p| {
                allowed[p]
                    .iter()
                    .map(|&s| [code(s, Card::H) * place(p), code(s, Card::L) * place(p)])
                    .collect()
            })
            .collect();
        out.clear();
        if contrib.iter().any(Vec::is_empty) {
            return;
        }
        let mut digits = vec![0usize; opponents.len()];
        let mut acc = vec![0i64; n];
        loop {
            acc.iter_mut().for_each(|x| *x = 0);
            for (base, deal) in &kept {
                let mut idx = *base;
                for (o, &p) in opponents.iter().enumerate() {
                    idx += contrib[o][digits[o]][deal.cards[p].index()];
                }
                let row = &self.table[idx * n..idx * n + n];
                for (a, v) in acc.iter_mut().zip(row) {
                    *a += v;
                }
            }
            out.extend_from_slice(&acc);
            let mut pos = opponents.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < contrib[pos].len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Dense strategic form over all plans; only sensible for Simplified Poker.
    pub fn to_dense(&self) -> Result<StrategicGame> {
        let all: Vec<Vec<usize>> = (0..self.spec.players())
            .map(|p| (0..self.num_strategies(p)).collect())
            .collect();
        self.restrict(&all)
    }
}

impl NormalForm for PokerGame {
    fn num_players(&self) -> usize {
        self.spec.players()
    }

    fn num_strategies(&self, _player: usize) -> usize {
        1 << (2 * self.k)
    }

    fn strategy_label(&self, _player: usize, strategy: usize) -> String {
        self.plan(strategy).to_string()
    }

    fn denominator(&self) -> i64 {
        self.denom
    }

    fn payoff_numerators(&self, profile: &[usize], out: &mut [i64]) {
        let n = self.spec.players();
        let t = 1usize << self.k;
        let mask = t - 1;
        out.iter_mut().for_each(|x| *x = 0);
        for (d, deal) in self.deals.iter().enumerate() {
            let mut idx = d;
            for (p, &s) in profile.iter().enumerate() {
                let code = if deal.cards[p] == Card::H {
                    s >> self.k
                } else {
                    s & mask
                };
                idx = idx * t + code;
            }
            let base = idx * n;
            for (o, v) in out.iter_mut().zip(&self.table[base..base + n]) {
                *o += v;
            }
        }
    }

    fn fill_row(&self, player: usize, strategy: usize, allowed: &[Vec<usize>], out: &mut Vec<i64>) {
        let t = 1usize << self.k;
        self.accumulate_row(
            player,
            &[strategy >> self.k, strategy & (t - 1)],
            &[true, true],
            allowed,
            out,
        );
    }
}

/// The strategies that survive elimination, with their conventional names.
///
/// Simplified Poker: `s1` plays directly, `s2` bets with both cards; `t1`
/// calls only with `H`, `t2` calls with both. Nash–Shapley: the direct and
/// deceptive plans of each player.
pub fn named_strategies(variant: Variant) -> Vec<Vec<(&'static str, PureStrategyPlan)>> {
    let plan = |s: &str| PureStrategyPlan::parse(s).expect("static plan");
    match variant {
        Variant::SimplifiedPoker => vec![
            vec![("s1", plan("B/P")), ("s2", plan("B/B"))],
            vec![("t1", plan("B/P")), ("t2", plan("B/B"))],
        ],
        Variant::NashShapley => vec![
            vec![("s1", plan("BBBB/PPPP")), ("s2", plan("PBBB/PPPP"))],
            vec![("t1", plan("BBBB/PPPP")), ("t2", plan("BPBB/PPPP"))],
            vec![("u1", plan("BBBB/PPPP")), ("u2", plan("BBBB/PPPB"))],
        ],
    }
}

/// Strategic form restricted to [`named_strategies`], labelled by name.
pub fn named_game(spec: &PokerSpec) -> Result<StrategicGame> {
    let game = strategic_form(spec)?;
    let named = named_strategies(spec.variant);
    let subsets: Vec<Vec<usize>> = named
        .iter()
        .map(|v| v.iter().map(|(_, p)| p.index()).collect())
        .collect();
    let labels: Vec<Vec<String>> = named
        .iter()
        .map(|v| v.iter().map(|(n, _)| n.to_string()).collect())
        .collect();
    let dense = game.restrict(&subsets)?;
    StrategicGame::from_fn(labels, |p| dense.payoff(p).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rat;

    fn plans(spec: &PokerSpec, ps: &[&str]) -> Vec<PureStrategyPlan> {
        let v: Vec<_> = ps
            .iter()
            .map(|s| PureStrategyPlan::parse(s).unwrap())
            .collect();
        assert_eq!(v.len(), spec.players());
        v
    }

    fn deal(cards: &[Card]) -> Deal {
        Deal {
            cards: cards.to_vec(),
            probability: rat(1, 1 << cards.len()),
        }
    }

    #[test]
    fn action_sequences() {
        let ns: Vec<String> = enumerate_action_sequences(&PokerSpec::nash_shapley())
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut expected = vec![
            "BBB", "BBP", "BPB", "BPP", "PBBB", "PBBP", "PBPB", "PBPP", "PPBBB", "PPBBP", "PPBPB",
            "PPBPP", "PPP",
        ];
        let mut got = ns.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        assert!(ns.iter().all(|s| (3..=5).contains(&s.len())));

        let mut sp: Vec<String> = enumerate_action_sequences(&PokerSpec::simplified())
            .iter()
            .map(|s| s.to_string())
            .collect();
        sp.sort();
        assert_eq!(sp, vec!["BB", "BP", "P"]);
    }

    #[test]
    fn strategy_counts() {
        let ns = PokerSpec::nash_shapley();
        for p in 0..3 {
            let all = enumerate_pure_strategies(&ns, p).unwrap();
            assert_eq!(all.len(), 256);
            assert!(all.iter().all(|pl| pl.actions.iter().all(|a| a.len() == 4)));
            assert!(all.iter().enumerate().all(|(i, pl)| pl.index() == i));
        }
        assert_eq!(
            enumerate_pure_strategies(&PokerSpec::simplified(), 0)
                .unwrap()
                .len(),
            4
        );
        assert!(enumerate_pure_strategies(&ns, 3).is_err());
    }

    #[test]
    fn all_pass_returns_antes() {
        let spec = PokerSpec::nash_shapley();
        let ps = plans(&spec, &["PPPP/PPPP"; 3]);
        for d in deals(3) {
            let (seq, pay) = play_out(&spec, &d, &ps).unwrap();
            assert_eq!(seq.to_string(), "PPP");
            assert!(pay.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn simplified_play_outs() {
        let spec = PokerSpec::simplified();
        let (seq, pay) = play_out(
            &spec,
            &deal(&[Card::H, Card::L]),
            &plans(&spec, &["B/P", "B/P"]),
        )
        .unwrap();
        assert_eq!(seq.to_string(), "BP");
        assert_eq!(pay, vec![rat(15, 1), rat(-15, 1)]);

        let (seq, pay) = play_out(
            &spec,
            &deal(&[Card::L, Card::H]),
            &plans(&spec, &["B/B", "B/B"]),
        )
        .unwrap();
        assert_eq!(seq.to_string(), "BB");
        assert_eq!(pay, vec![rat(-25, 1), rat(25, 1)]);

        let (seq, pay) = play_out(
            &spec,
            &deal(&[Card::L, Card::H]),
            &plans(&spec, &["B/P", "B/B"]),
        )
        .unwrap();
        assert_eq!(seq.to_string(), "P");
        assert_eq!(pay, vec![rat(-15, 1), rat(15, 1)]);
    }

    #[test]
    fn three_way_split_is_exact() {
        let spec = PokerSpec::new(Variant::NashShapley, rat(1, 1), rat(1, 1)).unwrap();
        let ps = plans(&spec, &["BBBB/BBBB"; 3]);
        let (seq, pay) = play_out(&spec, &deal(&[Card::L, Card::L, Card::L]), &ps).unwrap();
        assert_eq!(seq.to_string(), "BBB");
        assert!(pay.iter().all(|x| x.is_zero()));
        let (_, pay) = play_out(&spec, &deal(&[Card::H, Card::H, Card::L]), &ps).unwrap();
        assert_eq!(pay, vec![rat(1, 1), rat(1, 1), rat(-2, 1)]);
        let spec = PokerSpec::new(Variant::NashShapley, rat(1, 1), rat(0, 1)).unwrap();
        let (_, pay) = play_out(&spec, &deal(&[Card::H, Card::H, Card::L]), &ps).unwrap();
        assert_eq!(pay, vec![rat(1, 2), rat(1, 2), rat(-1, 1)]);
    }

    #[test]
    fn malformed_plan_rejected() {
        let spec = PokerSpec::nash_shapley();
        let ps = plans(&spec, &["BB/PP", "BBBB/PPPP", "BBBB/PPPP"]);
        assert!(matches!(
            play_out(&spec, &deal(&[Card::H; 3]), &ps),
            Err(Error::Domain(_))
        ));
        assert!(PureStrategyPlan::parse("BXBB/PPPP").is_err());
    }

    #[test]
    fn conservation_at_every_deal() {
        let spec = PokerSpec::nash_shapley();
        let all = enumerate_pure_strategies(&spec, 0).unwrap();
        for d in deals(3) {
            for (a, b, c) in [(3usize, 77usize, 200usize), (255, 0, 128), (17, 34, 51)] {
                let ps = vec![all[a].clone(), all[b].clone(), all[c].clone()];
                let (_, pay) = play_out(&spec, &d, &ps).unwrap();
                assert!(pay.iter().copied().sum::<Rational>().is_zero());
            }
        }
        assert_eq!(
            deals(3).iter().map(|d| d.probability).sum::<Rational>(),
            rat(1, 1)
        );
    }

    #[test]
    fn lazy_form_matches_play_out() {
        let spec = PokerSpec::nash_shapley();
        let game = strategic_form(&spec).unwrap();
        let all = enumerate_pure_strategies(&spec, 0).unwrap();
        for profile in [
            [0usize, 0, 0],
            [200, 13, 99],
            [255, 254, 1],
            [136, 183, 241],
        ] {
            let ps: Vec<_> = profile.iter().map(|&s| all[s].clone()).collect();
            let mut expected = vec![Rational::zero(); 3];
            for d in deals(3) {
                let (_, pay) = play_out(&spec, &d, &ps).unwrap();
                for (e, x) in expected.iter_mut().zip(pay) {
                    *e += x * d.probability;
                }
            }
            assert_eq!(game.payoff(&profile), expected);
        }
    }

    #[test]
    fn table_two() {
        let g = named_game(&PokerSpec::simplified()).unwrap();
        let want = [
            ([0, 0], (0, 1, 0, 1)),
            ([0, 1], (5, 2, -5, 2)),
            ([1, 0], (5, 4, -5, 4)),
            ([1, 1], (0, 1, 0, 1)),
        ];
        for (p, (a, b, c, d)) in want {
            assert_eq!(g.payoff(&p), &[rat(a, b), rat(c, d)]);
        }
    }

    #[test]
    fn zero_stakes_zero_tensor() {
        for variant in [Variant::SimplifiedPoker, Variant::NashShapley] {
            let spec = PokerSpec::new(variant, rat(0, 1), rat(0, 1)).unwrap();
            let game = strategic_form(&spec).unwrap();
            let n = spec.players();
            let mut buf = vec![0; n];
            for s in [0usize, 5, 15] {
                let s = s % game.num_strategies(0);
                game.payoff_numerators(&vec![s; n], &mut buf);
                assert!(buf.iter().all(|&x| x == 0));
            }
        }
        assert!(PokerSpec::new(Variant::NashShapley, rat(-1, 1), rat(1, 1)).is_err());
    }
}
