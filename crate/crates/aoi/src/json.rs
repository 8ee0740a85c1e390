//! JSON documents: score requests, score reports, rules, and the full
//! mining report.

use aoi_core::engine::{AscendStep, LevelProfile};
use aoi_core::{
    AttributeScore, GeneralizedRelation, LearningTask, MiningResult, Notation, Role, Rule, ScoreReport,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelCounts {
    cr: Vec<u64>,
    ct: Vec<u64>,
}

/// Parses `{attribute: {cr: [...], ct: [...]}, ...}`. Document order sets
/// the column positions used by the leftmost tie-break; the depth of each
/// attribute is the length of its `ct`.
pub fn parse_score_request(text: &str) -> Result<Vec<AttributeScore>, String> {
    let doc: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| e.to_string())?;
    doc.into_iter()
        .enumerate()
        .map(|(position, (attribute, value))| {
            let counts: LevelCounts =
                serde_json::from_value(value).map_err(|e| format!("`{attribute}`: {e}"))?;
            AttributeScore::new(attribute.clone(), counts.cr, counts.ct, position)
                .map_err(|e| format!("`{attribute}`: {e}"))
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ScoreJson {
    pub numer: u128,
    pub denom: u128,
    pub display: String,
}

#[derive(Debug, Serialize)]
pub struct RankedJson {
    pub rank: usize,
    pub attribute: String,
    pub role: Role,
    pub score: ScoreJson,
    pub depth: usize,
    pub product: u128,
    pub product_degenerate: bool,
    pub position: usize,
    pub cr: Vec<u64>,
    pub ct: Vec<u64>,
}

#[derive(Debug, Serialize)]
pub struct RolesJson {
    #[serde(rename = "FurtherGeneralization")]
    pub further_generalization: String,
    #[serde(rename = "Union")]
    pub union: Vec<String>,
    #[serde(rename = "Anchor")]
    pub anchor: String,
}

#[derive(Debug, Serialize)]
pub struct ScoreReportJson {
    pub ranking: Vec<RankedJson>,
    pub roles: RolesJson,
}

impl From<&ScoreReport> for ScoreReportJson {
    fn from(report: &ScoreReport) -> Self {
        let ranking = report
            .ranked()
            .enumerate()
            .map(|(i, (s, role))| RankedJson {
                rank: i + 1,
                attribute: s.attribute.clone(),
                role,
                score: ScoreJson {
                    numer: s.score.numer(),
                    denom: s.score.denom(),
                    display: s.score.display3(),
                },
                depth: s.depth,
                product: s.product.value,
                product_degenerate: s.product.degenerate,
                position: s.position,
                cr: s.cr.clone(),
                ct: s.ct.clone(),
            })
            .collect();
        ScoreReportJson {
            ranking,
            roles: RolesJson {
                further_generalization: report.further_generalization().to_owned(),
                union: report.unions().map(str::to_owned).collect(),
                anchor: report.anchor().to_owned(),
            },
        }
    }
}

pub fn score_report_to_json(report: &ScoreReport) -> String {
    serde_json::to_string_pretty(&ScoreReportJson::from(report)).expect("serializable")
}

pub fn rule_to_json(rule: &Rule) -> String {
    serde_json::to_string(rule).expect("serializable")
}

pub fn rule_from_json(text: &str) -> Result<Rule, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Serialize)]
pub struct TaskJson<'a> {
    pub class_attribute: &'a str,
    pub target_concept: &'a str,
    pub attribute_threshold: usize,
    pub relation_threshold: usize,
}

#[derive(Debug, Serialize)]
pub struct TraceJson<'a> {
    pub removed: &'a [String],
    pub steps: &'a [AscendStep],
    pub profiles: &'a [LevelProfile],
}

#[derive(Debug, Serialize)]
pub struct MineReportJson<'a> {
    pub task: TaskJson<'a>,
    pub characterized: &'a GeneralizedRelation,
    pub relation: &'a GeneralizedRelation,
    pub scores: ScoreReportJson,
    pub rule: &'a Rule,
    pub rule_text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceJson<'a>>,
    pub warnings: Vec<String>,
}

pub fn mine_report_to_json(
    task: &LearningTask,
    result: &MiningResult,
    notation: Notation,
    with_trace: bool,
) -> String {
    let doc = MineReportJson {
        task: TaskJson {
            class_attribute: &task.class_attribute,
            target_concept: &task.target_concept,
            attribute_threshold: task.attribute_threshold,
            relation_threshold: task.relation_threshold,
        },
        characterized: &result.characterized,
        relation: &result.relation,
        scores: ScoreReportJson::from(&result.report),
        rule: &result.rule,
        rule_text: result.rule.render(notation),
        trace: with_trace.then(|| TraceJson {
            removed: &result.trace.removed,
            steps: &result.trace.steps,
            profiles: &result.trace.profiles,
        }),
        warnings: result.warnings.iter().map(|w| w.to_string()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use aoi_core::rank_attributes;

    #[test]
    fn request_order_sets_positions() {
        let scores = parse_score_request(
            r#"{"GPA": {"cr": [2, 11, 1], "ct": [2, 11, 1]}, "major": {"cr": [11, 2, 1], "ct": [11, 2, 1]}}"#,
        )
        .unwrap();
        assert_eq!(scores[0].attribute, "GPA");
        assert_eq!(scores[0].position, 0);
        assert_eq!(scores[1].position, 1);
        let report = rank_attributes(scores).unwrap();
        assert_eq!(report.further_generalization(), "GPA");
    }

    #[test]
    fn malformed_requests() {
        assert!(parse_score_request("[]").is_err());
        assert!(parse_score_request(r#"{"a": {"cr": [1, 1, 1], "ct": [1, 1]}}"#).is_err());
        assert!(parse_score_request(r#"{"a": {"cr": [1], "ct": [1], "x": 1}}"#).is_err());
        assert!(parse_score_request(r#"{"a": {"cr": [3, 1], "ct": [2, 1]}}"#).is_err());
    }

    #[test]
    fn vacuous_rule_json() {
        let rule = Rule {
            disjuncts: vec![aoi_core::rules::Disjunct {
                conjuncts: vec![],
                vote: 5,
                weight_permyriad: 10000,
            }],
            total_vote: 5,
        };
        assert_eq!(
            rule_to_json(&rule),
            r#"{"disjuncts":[{"conjuncts":[],"vote":5,"weight_permyriad":10000}],"total_vote":5}"#
        );
        assert_eq!(rule_from_json(&rule_to_json(&rule)).unwrap(), rule);
    }
}
