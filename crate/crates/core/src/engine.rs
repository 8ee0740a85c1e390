//! The induction pipeline: attribute removal, concept-tree ascension with
//! per-attribute thresholds, relation-threshold control driven by the
//! interestingness ranking, and unioning.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hierarchy::{ConceptTree, Hierarchies};
use crate::interest::{rank_attributes, AttributeScore, ScoreReport};
use crate::relation::{
    merge_identical, merge_tuples, remove_attribute, select_task_relevant, GeneralizedRelation,
    GeneralizedTuple, LearningTask, Relation, ValueSet,
};
use crate::rules::{build_rule, Rule};

/// Distinct-concept counts `CR_1..CR_n` observed for one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LevelProfile {
    pub attribute: String,
    pub cr: Vec<u64>,
    pub current_level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AscendStep {
    pub attribute: String,
    pub from: usize,
    pub to: usize,
    /// Tuple count after the post-ascension merge.
    pub tuples: usize,
}

impl fmt::Display for AscendStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ASCEND {} L{}->{} tuples={}",
            self.attribute, self.from, self.to, self.tuples
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GeneralizationTrace {
    pub profiles: Vec<LevelProfile>,
    pub removed: Vec<String>,
    pub steps: Vec<AscendStep>,
}

impl GeneralizationTrace {
    pub fn profile_table(&self) -> ProfileTable<'_> {
        ProfileTable(&self.profiles)
    }

    pub fn profile(&self, attribute: &str) -> Option<&LevelProfile> {
        self.profiles.iter().find(|p| p.attribute == attribute)
    }

    /// Re-applies the logged ascensions to `initial`.
    pub fn replay(
        &self,
        initial: &GeneralizedRelation,
        trees: &Hierarchies,
    ) -> Result<GeneralizedRelation> {
        let mut rel = initial.clone();
        for step in &self.steps {
            let tree = trees.require(&step.attribute)?;
            debug_assert_eq!(column_level(&rel, &step.attribute, tree)?, step.from);
            rel = ascend_column(&rel, &step.attribute, tree)?;
        }
        Ok(rel)
    }
}

/// CR counts laid out with one row per level and one column per attribute.
pub struct ProfileTable<'a>(pub &'a [LevelProfile]);

impl fmt::Display for ProfileTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header = vec![String::from("Depth/Level")];
        header.extend(self.0.iter().map(|p| p.attribute.clone()));
        let depth = self.0.iter().map(|p| p.cr.len()).max().unwrap_or(0);
        let rows: Vec<Vec<String>> = (0..depth)
            .map(|i| {
                let mut row = vec![alloc::format!("{}", i + 1)];
                row.extend(
                    self.0
                        .iter()
                        .map(|p| p.cr.get(i).map(|c| alloc::format!("{c}")).unwrap_or_default()),
                );
                row
            })
            .collect();
        crate::hierarchy::write_aligned(f, &header, &rows)
    }
}

/// The level a column uniformly occupies. Empty relations sit at level 1.
pub fn column_level(rel: &GeneralizedRelation, attribute: &str, tree: &ConceptTree) -> Result<usize> {
    let col = rel.position(attribute)?;
    let mut level = None;
    for t in rel.tuples() {
        let v = t.values()[col]
            .as_single()
            .ok_or_else(|| Error::UnionedColumn(attribute.to_owned()))?;
        let l = tree.level_of(v)?;
        match level {
            None => level = Some(l),
            Some(prev) if prev != l => return Err(Error::MixedLevels(attribute.to_owned())),
            Some(_) => {}
        }
    }
    Ok(level.unwrap_or(1))
}

/// Replaces every value of `attribute` by its parent concept and re-merges.
pub fn ascend_column(
    rel: &GeneralizedRelation,
    attribute: &str,
    tree: &ConceptTree,
) -> Result<GeneralizedRelation> {
    let col = rel.position(attribute)?;
    let level = column_level(rel, attribute, tree)?;
    if level >= tree.depth() {
        return Err(Error::AlreadyAtRoot(attribute.to_owned()));
    }
    let mut parents: BTreeMap<&str, &str> = BTreeMap::new();
    let mut tuples = Vec::with_capacity(rel.len());
    for t in rel.tuples() {
        let v = t.values()[col].as_single().expect("checked by column_level");
        let parent = match parents.get(v) {
            Some(p) => *p,
            None => {
                let p = tree.ancestor_at_level(v, level + 1)?;
                parents.insert(v, p);
                p
            }
        };
        let mut values = t.values().to_vec();
        values[col] = ValueSet::single(parent);
        tuples.push(GeneralizedTuple::new(values, t.vote()).expect("vote carried over"));
    }
    Ok(merge_tuples(rel.schema().to_vec(), tuples))
}

/// Drops every attribute that has no concept tree and more distinct values
/// than the attribute threshold.
pub fn apply_attribute_removal(
    rel: &GeneralizedRelation,
    trees: &Hierarchies,
    task: &LearningTask,
) -> Result<(GeneralizedRelation, Vec<String>)> {
    let mut out = rel.clone();
    let mut removed = Vec::new();
    for attribute in rel.schema() {
        if trees.get(attribute).is_some() {
            continue;
        }
        if out.distinct_count(attribute)? > task.attribute_threshold {
            out = remove_attribute(&out, attribute)?;
            removed.push(attribute.clone());
        }
    }
    Ok((out, removed))
}

/// Ascends each hierarchy-bearing attribute, one level at a time, until its
/// distinct count is within the attribute threshold. `CR_i` is recorded for
/// every level the column occupies, starting with the level it enters at.
pub fn enforce_attribute_thresholds(
    rel: &GeneralizedRelation,
    trees: &Hierarchies,
    task: &LearningTask,
) -> Result<(GeneralizedRelation, GeneralizationTrace)> {
    let mut rel = merge_identical(rel);
    let mut trace = GeneralizationTrace::default();
    let schema = rel.schema().to_vec();
    for attribute in &schema {
        let Some(tree) = trees.get(attribute) else {
            continue;
        };
        let mut level = column_level(&rel, attribute, tree)?;
        let mut cr = vec![0u64; tree.depth()];
        let mut distinct = rel.distinct_count(attribute)?;
        cr[level - 1] = distinct as u64;
        while distinct > task.attribute_threshold && level < tree.depth() {
            rel = ascend_column(&rel, attribute, tree)?;
            trace.steps.push(AscendStep {
                attribute: attribute.clone(),
                from: level,
                to: level + 1,
                tuples: rel.len(),
            });
            level += 1;
            distinct = rel.distinct_count(attribute)?;
            cr[level - 1] = distinct as u64;
        }
        trace.profiles.push(LevelProfile {
            attribute: attribute.clone(),
            cr,
            current_level: level,
        });
    }
    Ok((rel, trace))
}

/// Scores each profiled attribute and ranks them into roles. `schema`
/// supplies the column positions used by the leftmost tie-break.
pub fn assign_roles(
    profiles: &[LevelProfile],
    trees: &Hierarchies,
    schema: &[String],
) -> Result<ScoreReport> {
    let scores = profiles
        .iter()
        .map(|p| {
            let tree = trees.require(&p.attribute)?;
            let position = schema
                .iter()
                .position(|a| *a == p.attribute)
                .ok_or_else(|| Error::UnknownAttribute(p.attribute.clone()))?;
            let ct = tree.widths().iter().map(|&w| w as u64).collect();
            AttributeScore::new(p.attribute.clone(), p.cr.clone(), ct, position)
        })
        .collect::<Result<Vec<_>>>()?;
    rank_attributes(scores)
}

/// Ascends the further-generalization attribute while the relation holds
/// more tuples than the relation threshold and the attribute is below ANY.
/// Each ascension is appended to `steps`.
pub fn reduce_relation(
    rel: &GeneralizedRelation,
    report: &ScoreReport,
    trees: &Hierarchies,
    task: &LearningTask,
    steps: &mut Vec<AscendStep>,
) -> Result<GeneralizedRelation> {
    let attribute = report.further_generalization();
    let tree = trees.require(attribute)?;
    let mut rel = rel.clone();
    let mut level = column_level(&rel, attribute, tree)?;
    while rel.len() > task.relation_threshold && level < tree.depth() {
        rel = ascend_column(&rel, attribute, tree)?;
        steps.push(AscendStep {
            attribute: attribute.to_owned(),
            from: level,
            to: level + 1,
            tuples: rel.len(),
        });
        level += 1;
    }
    Ok(rel)
}

/// Groups tuples on every column except `attribute` and collects that
/// column's values into one set per group, in first-appearance order.
pub fn union_attribute(rel: &GeneralizedRelation, attribute: &str) -> Result<GeneralizedRelation> {
    let col = rel.position(attribute)?;
    let mut slot: BTreeMap<Vec<&ValueSet>, usize> = BTreeMap::new();
    let mut groups: Vec<(Vec<ValueSet>, u64)> = Vec::new();
    for t in rel.tuples() {
        let key: Vec<&ValueSet> = t
            .values()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != col)
            .map(|(_, v)| v)
            .collect();
        match slot.get(&key) {
            Some(&g) => {
                let (values, vote) = &mut groups[g];
                values[col].absorb(&t.values()[col]);
                *vote += t.vote();
            }
            None => {
                slot.insert(key, groups.len());
                groups.push((t.values().to_vec(), t.vote()));
            }
        }
    }
    let tuples = groups
        .into_iter()
        .map(|(values, vote)| GeneralizedTuple::new(values, vote).expect("votes are positive"))
        .collect();
    GeneralizedRelation::new(rel.schema().to_vec(), tuples)
}

/// Unions every Union-role attribute in rank order.
pub fn union_simplify(rel: &GeneralizedRelation, report: &ScoreReport) -> Result<GeneralizedRelation> {
    let mut rel = rel.clone();
    for attribute in report.unions() {
        rel = union_attribute(&rel, attribute)?;
    }
    Ok(rel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Unioning finished with more tuples than the relation threshold.
    AboveThreshold { tuples: usize, threshold: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::AboveThreshold { tuples, threshold } => write!(
                f,
                "final relation has {tuples} tuples, above the relation threshold {threshold}"
            ),
        }
    }
}

/// Everything a mining run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningResult {
    /// Task-relevant relation after attribute removal and the first merge.
    pub initial: GeneralizedRelation,
    /// Relation after per-attribute threshold control.
    pub characterized: GeneralizedRelation,
    /// Relation after further generalization, before unioning.
    pub reduced: GeneralizedRelation,
    /// Final relation the rule is read from.
    pub relation: GeneralizedRelation,
    pub trace: GeneralizationTrace,
    pub report: ScoreReport,
    pub rule: Rule,
    pub warnings: Vec<Warning>,
}

/// Runs the full pipeline: select, remove, threshold each attribute, rank,
/// generalize further, union, and read off the rule.
pub fn mine(rel: &Relation, task: &LearningTask, trees: &Hierarchies) -> Result<MiningResult> {
    mine_with_ranking(rel, task, trees, None)
}

/// [`mine`] with an optional forced ranking (rank 1 first) in place of the
/// computed one. Scores are still computed and reported.
pub fn mine_with_ranking(
    rel: &Relation,
    task: &LearningTask,
    trees: &Hierarchies,
    ranking: Option<&[&str]>,
) -> Result<MiningResult> {
    let selected = select_task_relevant(rel, task, trees)?;
    if selected.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let (kept, removed) = apply_attribute_removal(&selected, trees, task)?;
    let initial = merge_identical(&kept);

    let (characterized, mut trace) = enforce_attribute_thresholds(&initial, trees, task)?;
    trace.removed = removed;

    let mut report = assign_roles(&trace.profiles, trees, characterized.schema())?;
    if let Some(order) = ranking {
        report = report.with_ranking(order)?;
    }

    let mut reduced = characterized.clone();
    let mut relation = characterized.clone();
    let mut warnings = Vec::new();
    if characterized.len() > task.relation_threshold {
        reduced = reduce_relation(&characterized, &report, trees, task, &mut trace.steps)?;
        relation = reduced.clone();
        for attribute in report.unions() {
            if relation.len() <= task.relation_threshold {
                break;
            }
            relation = union_attribute(&relation, attribute)?;
        }
        if relation.len() > task.relation_threshold {
            warnings.push(Warning::AboveThreshold {
                tuples: relation.len(),
                threshold: task.relation_threshold,
            });
        }
    }

    let rule = build_rule(&relation, trees)?;
    Ok(MiningResult {
        initial,
        characterized,
        reduced,
        relation,
        trace,
        report,
        rule,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interest::Role;
    use alloc::string::ToString;

    fn trees() -> Hierarchies {
        [
            ConceptTree::parse("attribute: major\nANY: Art, Science\nArt: History, Music\nScience: Physics, Biology\n")
                .unwrap(),
            ConceptTree::parse(
                "attribute: birthplace\nANY: Canada, Foreign\nCanada: BC, Ontario\nForeign: China\nBC: Vancouver, Victoria\nOntario: Toronto\nChina: Beijing\n",
            )
            .unwrap(),
            ConceptTree::parse("attribute: GPA\nANY: Good, Excellent\nGood: 2.8, 3.0\nExcellent: 3.6, 4.0\n").unwrap(),
        ]
        .into_iter()
        .collect()
    }

    fn rel(rows: &[(&[&str], u64)]) -> GeneralizedRelation {
        let schema = ["major", "birthplace", "GPA"].iter().map(|s| s.to_string()).collect();
        let tuples = rows
            .iter()
            .map(|(vals, vote)| {
                GeneralizedTuple::new(vals.iter().map(|v| ValueSet::single(*v)).collect(), *vote).unwrap()
            })
            .collect();
        GeneralizedRelation::new(schema, tuples).unwrap()
    }

    fn graduate_step_e() -> GeneralizedRelation {
        rel(&[
            (&["Art", "Canada", "Excellent"], 7200),
            (&["Science", "Canada", "Excellent"], 10799),
            (&["Science", "Foreign", "Good"], 10800),
            (&["Science", "Canada", "Good"], 3600),
        ])
    }

    #[test]
    fn ascend_to_any_and_merge() {
        let t = trees();
        let out = ascend_column(&graduate_step_e(), "birthplace", t.get("birthplace").unwrap()).unwrap();
        assert_eq!(
            out,
            rel(&[
                (&["Art", "ANY", "Excellent"], 7200),
                (&["Science", "ANY", "Excellent"], 10799),
                (&["Science", "ANY", "Good"], 14400),
            ])
        );
        assert_eq!(
            ascend_column(&out, "birthplace", t.get("birthplace").unwrap()).unwrap_err(),
            Error::AlreadyAtRoot("birthplace".into())
        );
    }

    #[test]
    fn ascend_major_merges_rows_one_and_two() {
        let t = trees();
        let out = ascend_column(&graduate_step_e(), "major", t.get("major").unwrap()).unwrap();
        assert_eq!(
            out,
            rel(&[
                (&["ANY", "Canada", "Excellent"], 17999),
                (&["ANY", "Foreign", "Good"], 10800),
                (&["ANY", "Canada", "Good"], 3600),
            ])
        );
    }

    #[test]
    fn ascend_rejects_mixed_and_unioned_columns() {
        let t = trees();
        let mixed = rel(&[(&["Art", "Canada", "Good"], 1), (&["Physics", "Canada", "Good"], 1)]);
        assert_eq!(
            ascend_column(&mixed, "major", t.get("major").unwrap()).unwrap_err(),
            Error::MixedLevels("major".into())
        );
        let unioned = union_attribute(&graduate_step_e(), "major").unwrap();
        assert_eq!(
            ascend_column(&unioned, "major", t.get("major").unwrap()).unwrap_err(),
            Error::UnionedColumn("major".into())
        );
    }

    #[test]
    fn single_value_ascends_to_single_parent() {
        let t = trees();
        let r = rel(&[(&["Physics", "Toronto", "3.0"], 2), (&["Physics", "Toronto", "4.0"], 1)]);
        let out = ascend_column(&r, "major", t.get("major").unwrap()).unwrap();
        assert_eq!(out.distinct_values("major").unwrap(), [&ValueSet::single("Science")]);
    }

    #[test]
    fn attribute_threshold_records_profiles() {
        let t = trees();
        let r = rel(&[
            (&["History", "Vancouver", "3.6"], 1),
            (&["Music", "Victoria", "4.0"], 1),
            (&["Physics", "Toronto", "3.6"], 1),
            (&["Physics", "Beijing", "3.0"], 1),
        ]);
        let task = LearningTask::new("category", "Graduate", 2, 2).unwrap();
        let (out, trace) = enforce_attribute_thresholds(&r, &t, &task).unwrap();
        assert_eq!(trace.profile("major").unwrap().cr, vec![3, 2, 0]);
        assert_eq!(trace.profile("birthplace").unwrap().cr, vec![4, 3, 2, 0]);
        assert_eq!(trace.profile("GPA").unwrap().cr, vec![3, 2, 0]);
        assert_eq!(trace.profile("birthplace").unwrap().current_level, 3);
        assert_eq!(out.total_vote(), 4);
        assert_eq!(trace.steps.len(), 4);
        assert_eq!(trace.steps[0].to_string(), "ASCEND major L1->2 tuples=4");
        assert_eq!(trace.replay(&r, &t).unwrap(), out);
        assert_eq!(
            trace.profile_table().to_string(),
            "Depth/Level  major  birthplace  GPA\n1            3      4           3\n2            2      3           2\n3            0      2           0\n4                   0\n"
        );
    }

    #[test]
    fn attribute_with_one_value_never_ascends() {
        let t = trees();
        let r = rel(&[(&["Physics", "Toronto", "3.0"], 2), (&["Physics", "Toronto", "4.0"], 1)]);
        let task = LearningTask::new("category", "Graduate", 1, 1).unwrap();
        let (_, trace) = enforce_attribute_thresholds(&r, &t, &task).unwrap();
        assert_eq!(trace.profile("major").unwrap().cr, vec![1, 0, 0]);
        assert!(trace.steps.iter().all(|s| s.attribute != "major"));
    }

    #[test]
    fn removal_rule_boundaries() {
        let mut t = trees();
        let schema: Vec<String> = ["Name", "Dorm", "major"].iter().map(|s| s.to_string()).collect();
        let tuples = [("a", "D1", "Physics"), ("b", "D1", "Music"), ("c", "D2", "Physics")]
            .iter()
            .map(|(n, d, m)| {
                GeneralizedTuple::new(
                    alloc::vec![ValueSet::single(*n), ValueSet::single(*d), ValueSet::single(*m)],
                    1,
                )
                .unwrap()
            })
            .collect();
        let r = GeneralizedRelation::new(schema, tuples).unwrap();
        let task = LearningTask::new("category", "Graduate", 2, 2).unwrap();
        let (out, removed) = apply_attribute_removal(&r, &t, &task).unwrap();
        assert_eq!(removed, alloc::vec!["Name".to_string()]);
        assert_eq!(out.schema(), &["Dorm".to_string(), "major".to_string()]);

        t.insert(ConceptTree::parse("attribute: Name\nANY: a, b, c\n").unwrap());
        t.insert(ConceptTree::parse("attribute: Dorm\nANY: D1, D2\n").unwrap());
        let (out, removed) = apply_attribute_removal(&r, &t, &task).unwrap();
        assert!(removed.is_empty());
        assert_eq!(out, r);
    }

    #[test]
    fn roles_and_reduction() {
        let t = trees();
        let profiles = alloc::vec![
            LevelProfile { attribute: "major".into(), cr: alloc::vec![4, 2, 0], current_level: 2 },
            LevelProfile { attribute: "birthplace".into(), cr: alloc::vec![4, 3, 2, 0], current_level: 3 },
            LevelProfile { attribute: "GPA".into(), cr: alloc::vec![1, 1, 0], current_level: 2 },
        ];
        let schema: Vec<String> = ["major", "birthplace", "GPA"].iter().map(|s| s.to_string()).collect();
        let report = assign_roles(&profiles, &t, &schema).unwrap();
        assert_eq!(report.role_of("birthplace"), Some(Role::FurtherGeneralization));
        assert_eq!(report.role_of("major"), Some(Role::Union));
        assert_eq!(report.role_of("GPA"), Some(Role::Anchor));
        assert_eq!(
            assign_roles(&profiles[..1], &t, &schema).unwrap_err(),
            Error::TooFewAttributes(1)
        );

        let task = LearningTask::new("category", "Graduate", 2, 2).unwrap();
        let mut steps = Vec::new();
        let reduced = reduce_relation(&graduate_step_e(), &report, &t, &task, &mut steps).unwrap();
        assert_eq!(reduced.len(), 3);
        assert_eq!(steps.len(), 1);
        let simplified = union_simplify(&reduced, &report).unwrap();
        assert_eq!(simplified.to_string(), "major\tbirthplace\tGPA\tVote\n{Art, Science}\tANY\tExcellent\t17999\nScience\tANY\tGood\t14400\n");

        let loose = LearningTask::new("category", "Graduate", 2, 4).unwrap();
        let mut steps = Vec::new();
        assert_eq!(reduce_relation(&graduate_step_e(), &report, &t, &loose, &mut steps).unwrap(), graduate_step_e());
        assert!(steps.is_empty());
    }

    #[test]
    fn union_with_distinct_anchor_is_identity_on_votes() {
        let r = rel(&[(&["ANY", "Canada", "Excellent"], 5), (&["ANY", "Foreign", "Good"], 3)]);
        let out = union_attribute(&r, "birthplace").unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn union_keeps_first_appearance_order() {
        let t = trees();
        let major_any = ascend_column(&graduate_step_e(), "major", t.get("major").unwrap()).unwrap();
        let out = union_attribute(&major_any, "birthplace").unwrap();
        assert_eq!(
            out.to_string(),
            "major\tbirthplace\tGPA\tVote\nANY\tCanada\tExcellent\t17999\nANY\t{Foreign, Canada}\tGood\t14400\n"
        );
    }
}
