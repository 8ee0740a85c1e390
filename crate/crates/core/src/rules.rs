//! Characteristic rules read off a final generalized relation: one weighted
//! disjunct per tuple, one conjunct per informative attribute.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchies, ANY};
use crate::relation::{GeneralizedRelation, ValueSet};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Conjunct {
    pub attribute: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Disjunct {
    pub conjuncts: Vec<Conjunct>,
    pub vote: u64,
    /// Share of the total vote in hundredths of a percent, truncated.
    pub weight_permyriad: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rule {
    pub disjuncts: Vec<Disjunct>,
    pub total_vote: u64,
}

/// `floor(vote * 10000 / total)`.
pub fn weight_permyriad(vote: u64, total: u64) -> u32 {
    (u128::from(vote) * 10_000 / u128::from(total)) as u32
}

/// True when a value set says nothing: it is `{ANY}`, or it names every
/// concept on its level of the attribute's tree.
fn is_vacuous(values: &ValueSet, attribute: &str, trees: &Hierarchies) -> bool {
    if values.is_any() {
        return true;
    }
    let Some(tree) = trees.get(attribute) else {
        return false;
    };
    let mut level = None;
    for m in values.members() {
        match (tree.level_of(m), level) {
            (Err(_), _) => return false,
            (Ok(l), None) => level = Some(l),
            (Ok(l), Some(prev)) if l != prev => return false,
            _ => {}
        }
    }
    level.is_some_and(|l| tree.level_width(l).ok() == Some(values.len()))
}

/// One disjunct per tuple, in tuple order. Conjuncts skip attributes whose
/// value set covers the whole attribute.
pub fn build_rule(rel: &GeneralizedRelation, trees: &Hierarchies) -> Result<Rule> {
    let total_vote = rel.total_vote();
    if rel.is_empty() || total_vote == 0 {
        return Err(Error::EmptyRelation);
    }
    let disjuncts = rel
        .tuples()
        .iter()
        .map(|t| Disjunct {
            conjuncts: rel
                .schema()
                .iter()
                .zip(t.values())
                .filter(|(a, v)| !is_vacuous(v, a, trees))
                .map(|(a, v)| Conjunct {
                    attribute: a.clone(),
                    values: v.members().to_vec(),
                })
                .collect(),
            vote: t.vote(),
            weight_permyriad: weight_permyriad(t.vote(), total_vote),
        })
        .collect();
    Ok(Rule {
        disjuncts,
        total_vote,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    /// `∈`, `∧`, `∨`.
    #[default]
    Unicode,
    /// `in`, `^`, `V`.
    Ascii,
}

impl Notation {
    fn member(self) -> &'static str {
        match self {
            Notation::Unicode => "∈",
            Notation::Ascii => "in",
        }
    }

    fn and(self) -> &'static str {
        match self {
            Notation::Unicode => "∧",
            Notation::Ascii => "^",
        }
    }

    fn or(self) -> &'static str {
        match self {
            Notation::Unicode => "∨",
            Notation::Ascii => "V",
        }
    }
}

/// `[NN.NN%]`, truncated.
pub fn format_weight(permyriad: u32) -> String {
    format!("[{}.{:02}%]", permyriad / 100, permyriad % 100)
}

pub fn render_rule(rule: &Rule, notation: Notation) -> String {
    let mut out = String::new();
    for (i, d) in rule.disjuncts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
            out.push_str(notation.or());
            out.push(' ');
        }
        if d.conjuncts.is_empty() {
            out.push_str("true");
        }
        for (j, c) in d.conjuncts.iter().enumerate() {
            if j > 0 {
                out.push(' ');
                out.push_str(notation.and());
                out.push(' ');
            }
            out.push_str(&c.attribute);
            out.push_str("(x) ");
            out.push_str(notation.member());
            out.push(' ');
            match c.values.as_slice() {
                [single] => out.push_str(single),
                many => {
                    out.push('{');
                    out.push_str(&many.join(", "));
                    out.push('}');
                }
            }
        }
        out.push(' ');
        out.push_str(&format_weight(d.weight_permyriad));
    }
    out
}

impl Rule {
    pub fn render(&self, notation: Notation) -> String {
        render_rule(self, notation)
    }

    /// True if any conjunct names the ANY concept.
    pub fn mentions_any(&self) -> bool {
        self.disjuncts
            .iter()
            .flat_map(|d| &d.conjuncts)
            .any(|c| c.values.iter().any(|v| v == ANY))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::ConceptTree;
    use crate::relation::GeneralizedTuple;
    use alloc::string::ToString;
    use alloc::vec;

    fn trees() -> Hierarchies {
        [
            ConceptTree::parse("attribute: major\nANY: Art, Science\nArt: History\nScience: Physics\n").unwrap(),
            ConceptTree::parse("attribute: birthplace\nANY: Canada, Foreign\nCanada: BC\nForeign: China\nBC: Vancouver\nChina: Beijing\n")
                .unwrap(),
            ConceptTree::parse("attribute: GPA\nANY: Poor, Average, Good, Excellent\nPoor: 1.0\nAverage: 2.0\nGood: 3.0\nExcellent: 4.0\n")
                .unwrap(),
        ]
        .into_iter()
        .collect()
    }

    fn rel(rows: &[(&[&[&str]], u64)]) -> GeneralizedRelation {
        let schema = ["major", "birthplace", "GPA"].iter().map(|s| s.to_string()).collect();
        let tuples = rows
            .iter()
            .map(|(vals, vote)| {
                GeneralizedTuple::new(
                    vals.iter().map(|v| ValueSet::from_members(v.iter().copied()).unwrap()).collect(),
                    *vote,
                )
                .unwrap()
            })
            .collect();
        GeneralizedRelation::new(schema, tuples).unwrap()
    }

    #[test]
    fn full_level_unions_are_dropped() {
        let r = rel(&[
            (&[&["Art", "Science"], &["ANY"], &["Excellent"]], 17999),
            (&[&["Science"], &["ANY"], &["Good"]], 14400),
        ]);
        let rule = build_rule(&r, &trees()).unwrap();
        assert_eq!(rule.disjuncts[0].conjuncts.len(), 1);
        assert_eq!(rule.disjuncts[0].weight_permyriad, 5555);
        assert_eq!(rule.disjuncts[1].weight_permyriad, 4444);
        assert_eq!(
            rule.render(Notation::Unicode),
            "GPA(x) ∈ Excellent [55.55%] ∨ major(x) ∈ Science ∧ GPA(x) ∈ Good [44.44%]"
        );
        assert_eq!(
            rule.render(Notation::Ascii),
            "GPA(x) in Excellent [55.55%] V major(x) in Science ^ GPA(x) in Good [44.44%]"
        );
        assert!(!rule.mentions_any());
    }

    #[test]
    fn partial_unions_are_kept_with_braces() {
        let r = rel(&[
            (&[&["ANY"], &["Canada"], &["Excellent", "Good"]], 21599),
            (&[&["ANY"], &["Foreign"], &["Good"]], 10800),
        ]);
        let rule = build_rule(&r, &trees()).unwrap();
        assert_eq!(
            rule.render(Notation::Unicode),
            "birthplace(x) ∈ Canada ∧ GPA(x) ∈ {Excellent, Good} [66.66%] ∨ birthplace(x) ∈ Foreign ∧ GPA(x) ∈ Good [33.33%]"
        );
    }

    #[test]
    fn vacuous_rule() {
        let r = rel(&[(&[&["ANY"], &["ANY"], &["ANY"]], 12)]);
        let rule = build_rule(&r, &trees()).unwrap();
        assert!(rule.disjuncts[0].conjuncts.is_empty());
        assert_eq!(rule.render(Notation::Unicode), "true [100.00%]");
    }

    #[test]
    fn empty_relation_is_an_error() {
        let r = GeneralizedRelation::new(vec!["major".to_string()], vec![]).unwrap();
        assert_eq!(build_rule(&r, &trees()).unwrap_err(), Error::EmptyRelation);
    }

    #[test]
    fn weights_truncate() {
        assert_eq!(weight_permyriad(21599, 32399), 6666);
        assert_eq!(weight_permyriad(7200, 32399), 2222);
        assert_eq!(weight_permyriad(25199, 32399), 7777);
        assert_eq!(format_weight(10000), "[100.00%]");
        assert_eq!(format_weight(5), "[0.05%]");
    }
}
