//! File formats: JSON teams and structures, and comma-separated multiteams.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_identifier, TAUT};
use crate::kripke::{KripkeError, KripkeStructure, MultiTeam, RawKripke};
use crate::trace::{LassoTrace, Letter, TeamEncoding, TraceError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("trace {index}: {source}")]
    Trace { index: usize, source: TraceError },
    #[error("trace {index}: `{prop}` is not a valid proposition")]
    BadProposition { index: usize, prop: String },
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceJson {
    #[serde(default)]
    prefix: Vec<Vec<String>>,
    #[serde(rename = "loop")]
    lp: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TeamJson {
    traces: Vec<TraceJson>,
}

/// Reads `{ "traces": [ { "prefix": [[..], ..], "loop": [[..], ..] }, .. ] }`.
pub fn parse_team_json(text: &str) -> Result<TeamEncoding, FormatError> {
    let doc: TeamJson = serde_json::from_str(text)?;
    let mut team = TeamEncoding::new();
    for (index, t) in doc.traces.into_iter().enumerate() {
        let word = |ls: Vec<Vec<String>>| -> Result<Vec<Letter>, FormatError> {
            ls.into_iter()
                .map(|l| {
                    for p in &l {
                        if !is_identifier(p) || p == TAUT {
                            return Err(FormatError::BadProposition {
                                index,
                                prop: p.clone(),
                            });
                        }
                    }
                    Ok(l.into_iter().collect())
                })
                .collect()
        };
        let trace = LassoTrace::new(word(t.prefix)?, word(t.lp)?)
            .map_err(|source| FormatError::Trace { index, source })?;
        team.insert(&trace);
    }
    Ok(team)
}

pub fn team_to_json(team: &TeamEncoding) -> String {
    let word = |ls: &[Letter]| ls.iter().map(|l| l.iter().cloned().collect()).collect();
    let doc = TeamJson {
        traces: team
            .iter()
            .map(|t| TraceJson {
                prefix: word(t.prefix()),
                lp: word(t.lp()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("team serialises") + "\n"
}

/// Reads `{ "worlds": [..], "edges": [[a, b], ..], "labels": {..}, "initial": .. }`.
pub fn parse_kripke_json(text: &str) -> Result<KripkeStructure, FormatError> {
    let raw: RawKripke = serde_json::from_str(text)?;
    Ok(KripkeStructure::from_raw(&raw)?)
}

pub fn kripke_to_json(k: &KripkeStructure) -> String {
    serde_json::to_string_pretty(&k.to_raw()).expect("structure serialises") + "\n"
}

/// Reads `r,a,a`: world names, repetition giving multiplicity.
pub fn parse_multiteam(k: &KripkeStructure, text: &str) -> Result<MultiTeam, FormatError> {
    let mut worlds = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        worlds.push(k.world(name)?);
    }
    Ok(MultiTeam::from_worlds(&worlds))
}

pub fn multiteam_to_string(k: &KripkeStructure, team: &MultiTeam) -> String {
    team.worlds()
        .iter()
        .map(|&w| k.name(w))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::letter;

    #[test]
    fn team_round_trip() {
        let text =
            r#"{ "traces": [ { "prefix": [["p","q"],[]], "loop": [["p"]] }, { "loop": [[]] } ] }"#;
        let team = parse_team_json(text).unwrap();
        assert_eq!(team.len(), 2);
        let t =
            LassoTrace::new(vec![letter(["p", "q"]), Letter::new()], vec![letter(["p"])]).unwrap();
        assert!(team.contains(&t));
        assert_eq!(parse_team_json(&team_to_json(&team)).unwrap(), team);
    }

    #[test]
    fn team_errors() {
        assert!(matches!(parse_team_json("{"), Err(FormatError::Json(_))));
        assert!(matches!(
            parse_team_json(r#"{"traces":[{"loop":[]}]}"#),
            Err(FormatError::Trace { index: 0, .. })
        ));
        assert!(matches!(
            parse_team_json(r#"{"traces":[{"loop":[["1x"]]}]}"#),
            Err(FormatError::BadProposition { .. })
        ));
        assert!(matches!(
            parse_team_json(r#"{"traces":[{"loop":[[]], "extra": 1}]}"#),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn kripke_and_multiteam() {
        let text = r#"{ "worlds": ["r","a"], "edges": [["r","a"],["a","a"]], "labels": {"a": ["p"]}, "initial": "r" }"#;
        let k = parse_kripke_json(text).unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(parse_kripke_json(&kripke_to_json(&k)).unwrap(), k);
        let t = parse_multiteam(&k, "r,a,a").unwrap();
        assert_eq!(t.multiset(), vec![0, 1, 1]);
        assert_eq!(multiteam_to_string(&k, &t), "r,a,a");
        assert!(parse_multiteam(&k, "r,z").is_err());
        assert!(parse_multiteam(&k, "").unwrap().is_empty());
        assert!(matches!(
            parse_kripke_json(r#"{ "worlds": ["r"], "edges": [] }"#),
            Err(FormatError::Kripke(KripkeError::Invalid(_)))
        ));
    }
}
