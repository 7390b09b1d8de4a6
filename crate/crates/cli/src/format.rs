//! Versioned JSON documents: instances, profiles and traces.
//!
//! Parsing runs in two typed passes over the same text. The first reads
//! only the `format` and `class` headers; the second deserializes the whole
//! document with the couple type of that class, so every error, including a
//! float inside a repeated-game matrix, carries a line and column.

use crate::CliError;
use matchgame::engine::{EngineTrace, Event};
use matchgame::gen::GENERATOR_VERSION;
use matchgame::model::{
    rational_matrix, CoupleGame, GameClass, MatchingGame, MatchingProfile, Matrix, StrategyAssignment,
};
use matchgame::rational::Rational;
use matchgame::verify::StabilityReport;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const INSTANCE_FORMAT: &str = "matchgame-instance/1";
pub const PROFILE_FORMAT: &str = "matchgame-profile/1";
pub const TRACE_FORMAT: &str = "matchgame-trace/1";

fn malformed(what: &str, e: serde_json::Error) -> CliError {
    CliError::Malformed(format!("{what}: {e}"))
}

fn parse_typed<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| malformed(what, e))
}

#[derive(Deserialize)]
struct Header {
    format: String,
    #[serde(default)]
    class: Option<String>,
}

fn header(text: &str, what: &str, expected: &str) -> Result<Header, CliError> {
    let h: Header = parse_typed(text, what)?;
    if h.format != expected {
        return Err(CliError::Malformed(format!(
            "{what}: format is {:?}, expected {expected:?}",
            h.format
        )));
    }
    Ok(h)
}

/// Optional fields an instance file may carry besides the market.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InstanceMeta {
    pub order: Option<Vec<usize>>,
    pub seed: Option<u64>,
    pub generator: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc<C> {
    format: String,
    class: String,
    men: usize,
    women: usize,
    epsilon: f64,
    irp_men: Vec<f64>,
    irp_women: Vec<f64>,
    /// `couples[i][j]` is the game of man `i` with woman `j`.
    couples: Vec<Vec<C>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroSumCouple {
    a: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompetitiveCouple {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepeatedCouple {
    #[serde(with = "rational_matrix")]
    a: Matrix<Rational>,
    #[serde(with = "rational_matrix")]
    b: Matrix<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransferCouple {
    a: f64,
    b: f64,
}

trait CoupleDoc: Sized {
    fn into_game(self) -> Result<CoupleGame, CliError>;
    fn from_game(g: &CoupleGame) -> Self;
}

fn matrix(rows: Vec<Vec<f64>>) -> Result<Matrix, CliError> {
    Matrix::from_rows(rows).map_err(|e| CliError::Contract(e.to_string()))
}

impl CoupleDoc for ZeroSumCouple {
    fn into_game(self) -> Result<CoupleGame, CliError> {
        Ok(CoupleGame::ZeroSum { a: matrix(self.a)? })
    }
    fn from_game(g: &CoupleGame) -> Self {
        ZeroSumCouple {
            a: g.man_matrix().expect("bi-matrix couple").to_rows(),
        }
    }
}

impl CoupleDoc for CompetitiveCouple {
    fn into_game(self) -> Result<CoupleGame, CliError> {
        Ok(CoupleGame::StrictlyCompetitive {
            a: matrix(self.a)?,
            b: matrix(self.b)?,
        })
    }
    fn from_game(g: &CoupleGame) -> Self {
        CompetitiveCouple {
            a: g.man_matrix().expect("bi-matrix couple").to_rows(),
            b: g.woman_matrix().expect("bi-matrix couple").to_rows(),
        }
    }
}

impl CoupleDoc for RepeatedCouple {
    fn into_game(self) -> Result<CoupleGame, CliError> {
        Ok(CoupleGame::Repeated { a: self.a, b: self.b })
    }
    fn from_game(g: &CoupleGame) -> Self {
        match g {
            CoupleGame::Repeated { a, b } => RepeatedCouple {
                a: a.clone(),
                b: b.clone(),
            },
            _ => unreachable!("class checked by caller"),
        }
    }
}

impl CoupleDoc for TransferCouple {
    fn into_game(self) -> Result<CoupleGame, CliError> {
        Ok(CoupleGame::LinearTransfer { a: self.a, b: self.b })
    }
    fn from_game(g: &CoupleGame) -> Self {
        match g {
            CoupleGame::LinearTransfer { a, b } => TransferCouple { a: *a, b: *b },
            _ => unreachable!("class checked by caller"),
        }
    }
}

fn build<C: CoupleDoc + DeserializeOwned>(text: &str) -> Result<(MatchingGame, InstanceMeta), CliError> {
    let doc: InstanceDoc<C> = parse_typed(text, "instance")?;
    if doc.couples.len() != doc.men || doc.couples.iter().any(|r| r.len() != doc.women) {
        return Err(CliError::Malformed(format!(
            "instance: couples must be a {} by {} table",
            doc.men, doc.women
        )));
    }
    let games = doc
        .couples
        .into_iter()
        .flatten()
        .map(C::into_game)
        .collect::<Result<Vec<_>, _>>()?;
    let g = MatchingGame::new(doc.men, doc.women, games, doc.irp_men, doc.irp_women, doc.epsilon)?;
    let meta = InstanceMeta {
        order: doc.order,
        seed: doc.seed,
        generator: doc.generator,
    };
    Ok((g, meta))
}

/// Reads an instance document.
pub fn parse_instance(text: &str) -> Result<(MatchingGame, InstanceMeta), CliError> {
    let h = header(text, "instance", INSTANCE_FORMAT)?;
    let name = h
        .class
        .ok_or_else(|| CliError::Malformed("instance: missing field `class`".into()))?;
    match GameClass::parse(&name) {
        Some(GameClass::ZeroSum) => build::<ZeroSumCouple>(text),
        Some(GameClass::StrictlyCompetitive) => build::<CompetitiveCouple>(text),
        Some(GameClass::Repeated) => build::<RepeatedCouple>(text),
        Some(GameClass::LinearTransfer) => build::<TransferCouple>(text),
        None => Err(CliError::Malformed(format!("instance: unknown class {name:?}"))),
    }
}

fn emit<C: CoupleDoc + Serialize>(g: &MatchingGame, class: GameClass, meta: &InstanceMeta) -> String {
    let couples = (0..g.men())
        .map(|i| (0..g.women()).map(|j| C::from_game(g.game(i, j))).collect())
        .collect();
    let doc = InstanceDoc {
        format: INSTANCE_FORMAT.to_string(),
        class: class.name().to_string(),
        men: g.men(),
        women: g.women(),
        epsilon: g.epsilon(),
        irp_men: g.irp_men().to_vec(),
        irp_women: g.irp_women().to_vec(),
        couples,
        order: meta.order.clone(),
        seed: meta.seed,
        generator: meta.generator.clone(),
    };
    to_text(&doc)
}

/// Writes an instance document. A market with no couples is written as
/// zero-sum.
pub fn emit_instance(g: &MatchingGame, meta: &InstanceMeta) -> String {
    let class = g.class().unwrap_or(GameClass::ZeroSum);
    match class {
        GameClass::ZeroSum => emit::<ZeroSumCouple>(g, class, meta),
        GameClass::StrictlyCompetitive => emit::<CompetitiveCouple>(g, class, meta),
        GameClass::Repeated => emit::<RepeatedCouple>(g, class, meta),
        GameClass::LinearTransfer => emit::<TransferCouple>(g, class, meta),
    }
}

/// Metadata for a generated instance.
pub fn generated_meta(seed: u64) -> InstanceMeta {
    InstanceMeta {
        order: None,
        seed: Some(seed),
        generator: Some(GENERATOR_VERSION.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoupleEntry {
    man: usize,
    woman: usize,
    assignment: StrategyAssignment,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    format: String,
    couples: Vec<CoupleEntry>,
    /// Payoffs implied by the couples; checked on input when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<Vec<f64>>,
    /// Informational; recomputed by `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    report: Option<StabilityReport>,
}

/// Writes a profile document, with its stability report when given.
pub fn emit_profile(p: &MatchingProfile, report: Option<&StabilityReport>) -> String {
    let doc = ProfileDoc {
        format: PROFILE_FORMAT.to_string(),
        couples: p
            .couples()
            .map(|(man, woman, a)| CoupleEntry {
                man,
                woman,
                assignment: a.clone(),
            })
            .collect(),
        u: Some(p.u().to_vec()),
        v: Some(p.v().to_vec()),
        report: report.cloned(),
    };
    to_text(&doc)
}

/// Reads a profile document against its market.
pub fn parse_profile(text: &str, g: &MatchingGame) -> Result<MatchingProfile, CliError> {
    header(text, "profile", PROFILE_FORMAT)?;
    let doc: ProfileDoc = parse_typed(text, "profile")?;
    let p = MatchingProfile::from_couples(g, doc.couples.into_iter().map(|c| (c.man, c.woman, c.assignment)))?;
    for (stored, actual, side) in [(&doc.u, p.u(), "u"), (&doc.v, p.v(), "v")] {
        if let Some(stored) = stored {
            let agree = stored.len() == actual.len()
                && stored.iter().zip(actual).all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
            if !agree {
                return Err(CliError::Contract(format!(
                    "profile: stored payoffs {side} disagree with the couples' strategies"
                )));
            }
        }
    }
    Ok(p)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    format: String,
    epsilon: f64,
    order: Vec<usize>,
    iterations: usize,
    sweeps: usize,
    events: Vec<Event>,
}

pub fn emit_trace(trace: &EngineTrace, eps: f64, order: &[usize]) -> String {
    to_text(&TraceDoc {
        format: TRACE_FORMAT.to_string(),
        epsilon: eps,
        order: order.to_vec(),
        iterations: trace.iterations,
        sweeps: trace.sweeps,
        events: trace.events.clone(),
    })
}

/// Reads a trace document; returns the trace, ε and proposer order.
pub fn parse_trace(text: &str) -> Result<(EngineTrace, f64, Vec<usize>), CliError> {
    header(text, "trace", TRACE_FORMAT)?;
    let doc: TraceDoc = parse_typed(text, "trace")?;
    let trace = EngineTrace {
        events: doc.events,
        iterations: doc.iterations,
        sweeps: doc.sweeps,
    };
    Ok((trace, doc.epsilon, doc.order))
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use matchgame::gen::{generate, GenSpec};

    #[test]
    fn instances_round_trip() {
        for class in GameClass::ALL {
            let g = generate(&GenSpec::new(class, 2, 3, 2, 4)).unwrap();
            let text = emit_instance(&g, &generated_meta(4));
            let (back, meta) = parse_instance(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(meta.seed, Some(4));
            assert_eq!(emit_instance(&back, &meta), text);
        }
    }

    #[test]
    fn float_in_repeated_matrix_is_located() {
        let text = r#"{
  "format": "matchgame-instance/1",
  "class": "repeated",
  "men": 1, "women": 1, "epsilon": 1,
  "irp_men": [0], "irp_women": [0],
  "couples": [[{"a": [[1, 2.5]], "b": [[0, 0]]}]]
}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 6"), "{err}");
    }

    #[test]
    fn wrong_header_is_malformed() {
        let err = parse_instance(r#"{"format": "matchgame-instance/9", "class": "zero_sum"}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
