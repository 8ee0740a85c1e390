//! Deterministic fixture relations built from cell profiles.
//!
//! A profile lists cells: a row count plus, per attribute, the leaf values
//! its rows cycle through. Row `j` of a cell takes option `j mod len` of
//! every attribute, so each option appears once `count >= len`. The first
//! row of every cell is emitted up front in cell order and the rest are
//! shuffled with a seeded ChaCha stream, which fixes the first-appearance
//! order of generalized tuples independently of the seed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hierarchy::Hierarchies;
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdColumn {
    pub attribute: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub prefix: String,
    /// Zero-padded digit count.
    #[cfg_attr(feature = "serde", serde(default))]
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellSpec {
    #[cfg_attr(feature = "serde", serde(default))]
    pub group: String,
    pub count: usize,
    pub values: BTreeMap<String, Vec<String>>,
}

/// Demands exactly `distinct` different leaves of `attribute` across the
/// cells of `group`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiversityConstraint {
    pub group: String,
    pub attribute: String,
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixtureProfile {
    pub name: String,
    pub seed: u64,
    pub schema: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub id_column: Option<IdColumn>,
    pub cells: Vec<CellSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub diversity: Vec<DiversityConstraint>,
}

impl FixtureProfile {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn total_rows(&self) -> usize {
        self.cells.iter().map(|c| c.count).sum()
    }

    pub fn group_rows(&self, group: &str) -> usize {
        self.cells
            .iter()
            .filter(|c| c.group == group)
            .map(|c| c.count)
            .sum()
    }

    fn is_id(&self, attribute: &str) -> bool {
        self.id_column
            .as_ref()
            .is_some_and(|c| c.attribute == attribute)
    }

    pub fn validate(&self, trees: &Hierarchies) -> Result<()> {
        if self.schema.is_empty() {
            return Err(Error::EmptySchema);
        }
        let mut seen = BTreeSet::new();
        for a in &self.schema {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateAttribute(a.clone()));
            }
        }
        if let Some(id) = &self.id_column {
            if !seen.contains(id.attribute.as_str()) {
                return Err(Error::InvalidProfile(format!(
                    "id column `{}` is not in the schema",
                    id.attribute
                )));
            }
        }
        if self.cells.is_empty() {
            return Err(Error::InvalidProfile("no cells".into()));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.count == 0 {
                return Err(Error::InvalidProfile(format!("cell {} has count 0", i + 1)));
            }
            for key in cell.values.keys() {
                if !seen.contains(key.as_str()) || self.is_id(key) {
                    return Err(Error::InvalidProfile(format!(
                        "cell {} sets `{key}`, which is not a data column",
                        i + 1
                    )));
                }
            }
            for a in self.schema.iter().filter(|a| !self.is_id(a)) {
                let options = match cell.values.get(a) {
                    Some(o) if !o.is_empty() => o,
                    _ => {
                        return Err(Error::InvalidProfile(format!(
                            "cell {} has no values for `{a}`",
                            i + 1
                        )))
                    }
                };
                if let Some(tree) = trees.get(a) {
                    for v in options {
                        if !tree.is_leaf(v) {
                            return Err(Error::NonLeafValue {
                                attribute: a.clone(),
                                value: v.clone(),
                            });
                        }
                    }
                } else if let Some(v) = options.iter().find(|v| v.is_empty()) {
                    return Err(Error::InvalidProfile(format!(
                        "cell {} has an empty value `{v}` for `{a}`",
                        i + 1
                    )));
                }
            }
        }
        for c in &self.diversity {
            if !seen.contains(c.attribute.as_str()) || self.is_id(&c.attribute) {
                return Err(Error::UnknownAttribute(c.attribute.clone()));
            }
            if !self.cells.iter().any(|cell| cell.group == c.group) {
                return Err(Error::InvalidProfile(format!("no cells in group `{}`", c.group)));
            }
            let achievable = self.achievable_distinct(&c.group, &c.attribute);
            if achievable != c.distinct {
                return Err(Error::UnsatisfiableDiversity {
                    group: c.group.clone(),
                    attribute: c.attribute.clone(),
                    required: c.distinct,
                    achievable,
                });
            }
        }
        Ok(())
    }

    /// Distinct values of `attribute` the group's rows will actually carry.
    fn achievable_distinct(&self, group: &str, attribute: &str) -> usize {
        self.cells
            .iter()
            .filter(|c| c.group == group)
            .filter_map(|c| {
                c.values
                    .get(attribute)
                    .map(|o| o.iter().take(c.count))
            })
            .flatten()
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Builds the relation described by `profile`. Same profile and seed, same rows.
pub fn generate(profile: &FixtureProfile, trees: &Hierarchies) -> Result<Relation> {
    profile.validate(trees)?;

    let row_for = |cell: &CellSpec, j: usize| -> Vec<String> {
        profile
            .schema
            .iter()
            .map(|a| match cell.values.get(a) {
                Some(options) => options[j % options.len()].clone(),
                None => String::new(),
            })
            .collect()
    };

    let mut rows: Vec<Vec<String>> = profile.cells.iter().map(|c| row_for(c, 0)).collect();
    let mut rest: Vec<Vec<String>> = Vec::with_capacity(profile.total_rows() - rows.len());
    for cell in &profile.cells {
        for j in 1..cell.count {
            rest.push(row_for(cell, j));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    rest.shuffle(&mut rng);
    rows.append(&mut rest);

    if let Some(id) = &profile.id_column {
        let col = profile
            .schema
            .iter()
            .position(|a| *a == id.attribute)
            .expect("validated");
        for (i, row) in rows.iter_mut().enumerate() {
            row[col] = format!("{}{:0width$}", id.prefix, i + 1, width = id.width);
        }
    }

    Ok(Relation::new(profile.schema.clone(), rows)?
        .with_source(format!("profile {} seed {}", profile.name, profile.seed)))
}
