//! Base relations, generalized relations with vote counts, and the
//! selection / projection / merge operations over them.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchies, ANY};

/// Raw tabular data: every row holds one leaf concept per attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    schema: Vec<String>,
    rows: Vec<Vec<String>>,
    source: String,
}

impl Relation {
    pub fn new(schema: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        check_schema(&schema)?;
        if rows.is_empty() {
            return Err(Error::EmptyRelation);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    found: row.len(),
                    expected: schema.len(),
                });
            }
            if let Some(col) = row.iter().position(|v| v.is_empty()) {
                return Err(Error::EmptyValue {
                    row: i + 1,
                    attribute: schema[col].clone(),
                });
            }
        }
        Ok(Self {
            schema,
            rows,
            source: String::new(),
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn position(&self, attribute: &str) -> Option<usize> {
        self.schema.iter().position(|a| a == attribute)
    }
}

fn check_schema(schema: &[String]) -> Result<()> {
    if schema.is_empty() {
        return Err(Error::EmptySchema);
    }
    let mut seen = BTreeSet::new();
    for a in schema {
        if !seen.insert(a.as_str()) {
            return Err(Error::DuplicateAttribute(a.clone()));
        }
    }
    Ok(())
}

/// Nonempty set of concepts held by one cell of a generalized tuple.
/// Members keep first-appearance order; a singleton unless unioned.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ValueSet(Vec<String>);

impl ValueSet {
    pub fn single(concept: impl Into<String>) -> Self {
        ValueSet(alloc::vec![concept.into()])
    }

    /// Builds a set from `members`, dropping repeats. `None` when empty.
    pub fn from_members<I, S>(members: I) -> Option<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = Vec::new();
        for m in members {
            let m = m.into();
            if !set.contains(&m) {
                set.push(m);
            }
        }
        (!set.is_empty()).then_some(ValueSet(set))
    }

    pub fn members(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_single(&self) -> Option<&str> {
        match self.0.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn is_any(&self) -> bool {
        self.as_single() == Some(ANY)
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.0.iter().any(|m| m == concept)
    }

    /// Appends the members of `other` not already present.
    pub fn absorb(&mut self, other: &ValueSet) {
        for m in &other.0 {
            if !self.contains(m) {
                self.0.push(m.clone());
            }
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_single() {
            Some(v) => f.write_str(v),
            None => {
                f.write_str("{")?;
                for (i, m) in self.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(m)?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GeneralizedTuple {
    values: Vec<ValueSet>,
    vote: u64,
}

impl GeneralizedTuple {
    /// `None` when `vote` is zero.
    pub fn new(values: Vec<ValueSet>, vote: u64) -> Option<Self> {
        (vote >= 1).then_some(Self { values, vote })
    }

    pub fn values(&self) -> &[ValueSet] {
        &self.values
    }

    pub fn vote(&self) -> u64 {
        self.vote
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GeneralizedRelation {
    schema: Vec<String>,
    tuples: Vec<GeneralizedTuple>,
    total_vote: u64,
}

impl GeneralizedRelation {
    pub fn new(schema: Vec<String>, tuples: Vec<GeneralizedTuple>) -> Result<Self> {
        check_schema(&schema)?;
        if let Some(pos) = tuples.iter().position(|t| t.values.len() != schema.len()) {
            return Err(Error::RaggedRow {
                row: pos + 1,
                found: tuples[pos].values.len(),
                expected: schema.len(),
            });
        }
        Ok(Self::from_parts(schema, tuples))
    }

    pub(crate) fn from_parts(schema: Vec<String>, tuples: Vec<GeneralizedTuple>) -> Self {
        let total_vote = tuples.iter().map(|t| t.vote).sum();
        Self {
            schema,
            tuples,
            total_vote,
        }
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn tuples(&self) -> &[GeneralizedTuple] {
        &self.tuples
    }

    pub fn total_vote(&self) -> u64 {
        self.total_vote
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, attribute: &str) -> Result<usize> {
        self.schema
            .iter()
            .position(|a| a == attribute)
            .ok_or_else(|| Error::UnknownAttribute(attribute.to_owned()))
    }

    /// Distinct value sets of a column in first-appearance order.
    pub fn distinct_values(&self, attribute: &str) -> Result<Vec<&ValueSet>> {
        let col = self.position(attribute)?;
        let mut seen = BTreeSet::new();
        Ok(self
            .tuples
            .iter()
            .map(|t| &t.values[col])
            .filter(|v| seen.insert(*v))
            .collect())
    }

    pub fn distinct_count(&self, attribute: &str) -> Result<usize> {
        self.distinct_values(attribute).map(|v| v.len())
    }
}

/// Tab-separated table with a trailing `Vote` column.
impl fmt::Display for GeneralizedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.schema {
            write!(f, "{a}\t")?;
        }
        writeln!(f, "Vote")?;
        for t in &self.tuples {
            for v in &t.values {
                write!(f, "{v}\t")?;
            }
            writeln!(f, "{}", t.vote)?;
        }
        Ok(())
    }
}

/// What to learn: the class to characterize and the two thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningTask {
    pub class_attribute: String,
    pub target_concept: String,
    pub attribute_threshold: usize,
    pub relation_threshold: usize,
}

impl LearningTask {
    pub fn new(
        class_attribute: impl Into<String>,
        target_concept: impl Into<String>,
        attribute_threshold: usize,
        relation_threshold: usize,
    ) -> Result<Self> {
        if attribute_threshold == 0 || relation_threshold == 0 {
            return Err(Error::InvalidThreshold);
        }
        Ok(Self {
            class_attribute: class_attribute.into(),
            target_concept: target_concept.into(),
            attribute_threshold,
            relation_threshold,
        })
    }

    /// Checks that the target concept exists in the class attribute's tree.
    pub fn validate(&self, trees: &Hierarchies) -> Result<()> {
        if self.attribute_threshold == 0 || self.relation_threshold == 0 {
            return Err(Error::InvalidThreshold);
        }
        trees
            .require(&self.class_attribute)?
            .node(&self.target_concept)
            .map(|_| ())
    }
}

/// Keeps the rows whose class value falls under the target concept, drops
/// the class column, and lifts each row into a singleton tuple of vote 1.
pub fn select_task_relevant(
    rel: &Relation,
    task: &LearningTask,
    trees: &Hierarchies,
) -> Result<GeneralizedRelation> {
    task.validate(trees)?;
    let class_col = rel
        .position(&task.class_attribute)
        .ok_or_else(|| Error::UnknownAttribute(task.class_attribute.clone()))?;
    let class_tree = trees.require(&task.class_attribute)?;

    let mut unknown: Vec<&str> = Vec::new();
    for row in &rel.rows {
        let v = row[class_col].as_str();
        if !class_tree.contains(v) && !unknown.contains(&v) {
            unknown.push(v);
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownClassValues {
            attribute: task.class_attribute.clone(),
            values: unknown.into_iter().map(ToOwned::to_owned).collect(),
        });
    }

    let column_trees: Vec<_> = rel.schema.iter().map(|a| trees.get(a)).collect();
    let schema: Vec<String> = rel
        .schema
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != class_col)
        .map(|(_, a)| a.clone())
        .collect();
    if schema.is_empty() {
        return Err(Error::EmptySchema);
    }

    let mut tuples = Vec::new();
    for row in &rel.rows {
        if !class_tree.covers(&task.target_concept, &row[class_col])? {
            continue;
        }
        let mut values = Vec::with_capacity(schema.len());
        for (i, v) in row.iter().enumerate() {
            if let Some(tree) = column_trees[i] {
                if !tree.is_leaf(v) {
                    if !tree.contains(v) {
                        return Err(Error::UnknownConcept {
                            attribute: rel.schema[i].clone(),
                            concept: v.clone(),
                        });
                    }
                    return Err(Error::NonLeafValue {
                        attribute: rel.schema[i].clone(),
                        value: v.clone(),
                    });
                }
            }
            if i != class_col {
                values.push(ValueSet::single(v.clone()));
            }
        }
        tuples.push(GeneralizedTuple { values, vote: 1 });
    }
    Ok(GeneralizedRelation::from_parts(schema, tuples))
}

/// Projects away one column. Tuples are not merged.
pub fn remove_attribute(rel: &GeneralizedRelation, attribute: &str) -> Result<GeneralizedRelation> {
    let col = rel.position(attribute)?;
    if rel.schema.len() == 1 {
        return Err(Error::EmptySchema);
    }
    let mut schema = rel.schema.clone();
    schema.remove(col);
    let tuples = rel
        .tuples
        .iter()
        .map(|t| {
            let mut values = t.values.clone();
            values.remove(col);
            GeneralizedTuple {
                values,
                vote: t.vote,
            }
        })
        .collect();
    Ok(GeneralizedRelation::from_parts(schema, tuples))
}

/// Coalesces tuples with identical value sets, summing votes. Output keeps
/// the first-appearance order of each distinct tuple.
pub fn merge_identical(rel: &GeneralizedRelation) -> GeneralizedRelation {
    merge_tuples(rel.schema.clone(), rel.tuples.iter().cloned())
}

pub(crate) fn merge_tuples<I>(schema: Vec<String>, tuples: I) -> GeneralizedRelation
where
    I: IntoIterator<Item = GeneralizedTuple>,
{
    let mut slot: BTreeMap<Vec<ValueSet>, usize> = BTreeMap::new();
    let mut out: Vec<GeneralizedTuple> = Vec::new();
    for t in tuples {
        match slot.get(&t.values) {
            Some(&i) => out[i].vote += t.vote,
            None => {
                slot.insert(t.values.clone(), out.len());
                out.push(t);
            }
        }
    }
    GeneralizedRelation::from_parts(schema, out)
}
