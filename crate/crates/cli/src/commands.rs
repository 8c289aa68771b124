use std::path::Path;

use qpoker_core::ewl::{eval_mixed_quantum, mixed_distribution, MixedQuantumStrategy};
use qpoker_core::game::{format_rational, parse_rational};
use qpoker_core::json::{GameJson, Number};
use qpoker_core::poker::{
    enumerate_action_sequences, enumerate_pure_strategies, named_strategies, reduce_poker,
    trace_to_csv, PokerSpec, Variant,
};
use qpoker_core::quantized::{comparison_report, outcome_label, uniform_equilibrium_payoff};
use qpoker_core::strategic::{
    equilibria_2x2, expected_payoff, is_nash, security_level, solve_nash_shapley,
    solve_zero_sum_2x2, BuiltinGame, MixedProfile,
};
use qpoker_core::verify::{run_suite, simplified_bluff_frequency, Suite, VerifyConfig};
use qpoker_core::{Rational, StrategicGame};
use serde_json::{json, Value};

use crate::preset::{parse_strategy, PlayerStrategy};
use crate::{
    BuildArgs, CliError, Format, GameArgs, Outcome, QuantizeArgs, SamplingArgs, VerifyArgs,
};

/// Full strategic forms above this many profiles are summarized, not listed.
const FULL_TABLE_LIMIT: usize = 4096;

fn pretty(v: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn only(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{command} does not support {format:?} output"
        )))
    }
}

fn need_seed(s: &SamplingArgs) -> Result<u64, CliError> {
    s.seed
        .ok_or_else(|| CliError::Usage("a seed is required: pass --seed or set QPOKER_SEED".into()))
}

fn load_game(reference: &str) -> Result<(String, StrategicGame), CliError> {
    if let Ok(b) = reference.parse::<BuiltinGame>() {
        return Ok((b.name().to_string(), b.game()));
    }
    let path = Path::new(reference);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return Ok((
            reference.to_string(),
            qpoker_core::json::game_from_json(&text)?,
        ));
    }
    Err(CliError::Usage(format!(
        "unknown game {reference:?}: expected pd, chicken, sp, ns or a JSON file"
    )))
}

fn rationals(v: &[Rational]) -> Vec<Number> {
    v.iter().map(Number::rational).collect()
}

fn render_table(game: &StrategicGame) -> String {
    let mut out = String::new();
    for profile in game.profiles() {
        let payoff: Vec<String> = game.payoff(&profile).iter().map(format_rational).collect();
        out.push_str(&format!(
            "{}  ({})\n",
            game.profile_labels(&profile).join(" "),
            payoff.join(", ")
        ));
    }
    out
}

pub fn build(a: &BuildArgs, format: Format) -> Result<Outcome, CliError> {
    let defaults = match a.variant.to_ascii_lowercase().as_str() {
        "sp" | "simplified" => PokerSpec::simplified(),
        "ns" | "nash-shapley" | "nashshapley" => PokerSpec::nash_shapley(),
        v => {
            return Err(CliError::Usage(format!(
                "unknown variant {v:?}: expected sp or ns"
            )))
        }
    };
    let amount = |s: &Option<String>, d: Rational| s.as_deref().map_or(Ok(d), parse_rational);
    let spec = PokerSpec::new(
        defaults.variant,
        amount(&a.ante, defaults.ante)?,
        amount(&a.bet, defaults.bet)?,
    )?;
    let red = reduce_poker(&spec)?;
    let trace = red.trace();
    let text = match format {
        Format::Csv => trace_to_csv(&trace),
        Format::Table => {
            let mut t = render_table(&red.reduced);
            t.push_str(&format!("{} eliminations\n", trace.len()));
            t
        }
        Format::Json => {
            let counts: Vec<usize> = (0..spec.players())
                .map(|k| enumerate_pure_strategies(&spec, k).map(|v| v.len()))
                .collect::<Result<_, _>>()?;
            let profiles: usize = counts.iter().product();
            let full = if profiles <= FULL_TABLE_LIMIT {
                serde_json::to_value(GameJson::from(&red.game.to_dense()?))?
            } else {
                Value::Null
            };
            let named: Vec<Value> = named_strategies(spec.variant)
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(n, p)| json!({ "label": n, "plan": p.to_string() }))
                        .collect()
                })
                .collect();
            let steps: Vec<Value> = trace
                .iter()
                .map(|e| {
                    json!({
                        "round": e.round,
                        "player": e.player + 1,
                        "removed": e.removed_label,
                        "dominator": e.dominator_label,
                        "mode": e.mode,
                    })
                })
                .collect();
            pretty(&json!({
                "variant": match spec.variant { Variant::SimplifiedPoker => "sp", Variant::NashShapley => "ns" },
                "ante": Number::rational(&spec.ante),
                "bet": Number::rational(&spec.bet),
                "action_sequences": enumerate_action_sequences(&spec).len(),
                "pure_strategies": counts,
                "equivalence_classes": red.quotient.class_counts(),
                "full": full,
                "reduced": GameJson::from(&red.reduced),
                "named_strategies": named,
                "named_survive": red.named_survive,
                "trace": steps,
            }))?
        }
    };
    Ok(Outcome { text, pass: true })
}

fn profile_json(game: &StrategicGame, profile: &MixedProfile<Rational>) -> Result<Value, CliError> {
    let check = is_nash(game, profile, Rational::from(0))?;
    Ok(json!({
        "profile": profile.probs().iter().map(|v| rationals(v)).collect::<Vec<_>>(),
        "payoffs": rationals(&expected_payoff(game, profile)?),
        "regret": Number::rational(&check.regret),
        "certified": check.is_nash,
    }))
}

pub fn solve(a: &GameArgs, format: Format) -> Result<Outcome, CliError> {
    only(format, &[Format::Json], "solve")?;
    let (name, game) = load_game(&a.game)?;
    let strategies = game.all_labels().to_vec();
    if game == BuiltinGame::NashShapleyReduced.game() {
        let s = solve_nash_shapley()?;
        let certified = s.regret < 1e-9;
        let value = json!({
            "game": name,
            "strategies": strategies,
            "kind": "mixed equilibrium by indifference",
            "p": Number::closed_form(s.p_exact.clone(), s.p),
            "player3_u1_weight": Number::closed_form("(4p+8)/(5p+12)", 1.0 - s.bluff_weight),
            "player3_bluff_weight": Number::closed_form("(p+4)/(5p+12)", s.bluff_weight),
            "payoffs": s.payoffs_exact.iter().zip(&s.payoffs).map(|(e, v)| Number::closed_form(e.clone(), *v)).collect::<Vec<_>>(),
            "indifference_residuals": s.indifference_residuals.iter().map(|r| Number::computed(*r)).collect::<Vec<_>>(),
            "regret": Number::computed(s.regret),
            "certified": certified,
        });
        return Ok(Outcome {
            text: pretty(&value)?,
            pass: certified,
        });
    }
    if game.shape() != [2, 2] {
        return Err(CliError::Usage(format!(
            "solve supports 2×2 games and the reduced Nash-Shapley game, not shape {:?}",
            game.shape()
        )));
    }
    let eqs = equilibria_2x2(&game)?;
    let listed: Vec<Value> = eqs
        .iter()
        .map(|e| profile_json(&game, e))
        .collect::<Result<_, _>>()?;
    let mut value = json!({ "game": name, "strategies": strategies, "equilibria": listed });
    if game.is_zero_sum() {
        let zs = solve_zero_sum_2x2(&game)?;
        let mut zero_sum = json!({
            "value": Number::rational(&zs.value),
            "pure": zs.pure,
            "player1_second_strategy": Number::rational(&zs.deceptive_frequency),
            "call_frequency": Number::rational(&zs.call_frequency),
            "security_level": Number::rational(&security_level(&game, zs.profile.player(0))?),
        });
        if game == BuiltinGame::SimplifiedPokerReduced.game() {
            zero_sum["bluff_frequency"] = serde_json::to_value(Number::rational(
                &simplified_bluff_frequency(zs.profile.player(0)),
            ))?;
        }
        value["zero_sum"] = zero_sum;
    }
    let pass = !eqs.is_empty() && listed.iter().all(|e| e["certified"] == true);
    Ok(Outcome {
        text: pretty(&value)?,
        pass,
    })
}

pub fn quantize(a: &QuantizeArgs, format: Format) -> Result<Outcome, CliError> {
    only(format, &[Format::Json], "quantize")?;
    let (name, game) = load_game(&a.game.game)?;
    let n = game.num_players();
    if !(n == 2 || n == 3) {
        return Err(CliError::Usage(format!(
            "quantize needs 2 or 3 players, the game has {n}"
        )));
    }
    let entangled = !a.no_entangled;
    let strategies: Vec<PlayerStrategy> = match a.preset.as_deref() {
        Some(p) if a.p1.is_some() || a.p2.is_some() || a.p3.is_some() => {
            return Err(CliError::Usage(format!(
                "--preset {p} cannot be combined with per-player strategies"
            )))
        }
        Some("uniform-all") => (0..n)
            .map(|_| parse_strategy("haar", n))
            .collect::<Result<_, _>>()?,
        Some("discrete-all") => {
            let s = if n == 2 { "q8" } else { "oct8" };
            (0..n)
                .map(|_| parse_strategy(s, n))
                .collect::<Result<_, _>>()?
        }
        Some(p) => {
            return Err(CliError::Usage(format!(
                "unknown preset {p:?}: expected uniform-all or discrete-all"
            )))
        }
        None => {
            if n == 2 && a.p3.is_some() {
                return Err(CliError::Usage("--p3 given for a two-player game".into()));
            }
            [&a.p1, &a.p2, &a.p3][..n]
                .iter()
                .map(|s| parse_strategy(s.as_deref().unwrap_or("identity"), n))
                .collect::<Result<_, _>>()?
        }
    };
    let profile: Vec<MixedQuantumStrategy> = strategies.iter().map(|s| s.mixed.clone()).collect();
    let sampling = profile.iter().any(MixedQuantumStrategy::is_haar);
    let mut value = json!({
        "game": name,
        "entangled": entangled,
        "strategies": strategies.iter().map(|s| s.spec.clone()).collect::<Vec<_>>(),
    });
    if sampling {
        let seed = need_seed(&a.sampling)?;
        let est = eval_mixed_quantum(&game, entangled, &profile, a.sampling.samples, seed)?;
        value["seed"] = json!(seed);
        value["samples"] = json!(a.sampling.samples);
        value["payoffs"] =
            serde_json::to_value(est.payoffs.iter().map(Number::estimate).collect::<Vec<_>>())?;
    } else {
        let est = eval_mixed_quantum(&game, entangled, &profile, 0, 0)?;
        let dist = mixed_distribution(n, entangled, &profile)?;
        let outcomes: Vec<Value> = game
            .profiles()
            .zip(&dist)
            .enumerate()
            .map(|(o, (p, w))| {
                json!({
                    "outcome": outcome_label(n, o),
                    "profile": game.profile_labels(&p),
                    "probability": Number::computed(*w),
                })
            })
            .collect();
        value["payoffs"] = serde_json::to_value(
            est.means()
                .into_iter()
                .map(Number::computed)
                .collect::<Vec<_>>(),
        )?;
        value["distribution"] = Value::Array(outcomes);
    }
    let holders: Vec<usize> = strategies
        .iter()
        .enumerate()
        .filter(|(_, s)| s.uniform)
        .map(|(k, _)| k + 1)
        .collect();
    if !entangled && strategies.iter().all(|s| s.classical.is_some()) {
        let mix = MixedProfile::new(
            strategies
                .iter()
                .map(|s| s.classical.unwrap().to_vec())
                .collect(),
        )?;
        value["exact_payoffs"] = json!({
            "reason": "unentangled N/F mixtures reproduce the classical mixed extension",
            "values": rationals(&expected_payoff(&game, &mix)?),
        });
    } else if entangled && holders.len() + 1 >= n {
        value["exact_payoffs"] = json!({
            "reason": format!("players {holders:?} play uniform strategies, so every outcome is equally likely"),
            "values": rationals(&uniform_equilibrium_payoff(&game)?),
        });
    }
    Ok(Outcome {
        text: pretty(&value)?,
        pass: true,
    })
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    only(format, &[Format::Json, Format::Table], "verify")?;
    let suite: Suite = a.suite.parse()?;
    let seed = need_seed(&a.sampling)?;
    let report = run_suite(
        suite,
        VerifyConfig {
            seed,
            samples: a.sampling.samples,
            deals: a.deals,
        },
    );
    let text = match format {
        Format::Table => {
            let mut t = String::new();
            for c in &report.criteria {
                t.push_str(&format!(
                    "criterion {:>2} {}: {}\n",
                    c.id,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.title
                ));
                for note in &c.notes {
                    t.push_str(&format!("    {note}\n"));
                }
            }
            for d in &report.discrepancies {
                t.push_str(&format!(
                    "flag: {}: computed {} vs quoted {}\n",
                    d.quantity,
                    d.computed.value(),
                    d.quoted
                ));
            }
            t
        }
        _ => pretty(&serde_json::to_value(&report)?)?,
    };
    Ok(Outcome {
        text,
        pass: report.pass,
    })
}

pub fn report(a: &SamplingArgs, format: Format) -> Result<Outcome, CliError> {
    only(format, &[Format::Json], "report")?;
    let seed = need_seed(a)?;
    let r = comparison_report(a.samples, seed)?;
    let pass = r.rows.iter().all(|row| row.certified);
    Ok(Outcome {
        text: pretty(&serde_json::to_value(&r)?)?,
        pass,
    })
}
