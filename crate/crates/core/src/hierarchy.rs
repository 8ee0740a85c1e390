//! Concept hierarchies: balanced per-attribute taxonomies whose leaves sit
//! at level 1 and whose single root `ANY` sits at level `n`.
//!
//! Hierarchies are written one parent per line:
//!
//! ```text
//! attribute: category
//! # comments and blank lines are ignored
//! ANY: Undergraduate, Graduate
//! Undergraduate: Freshman, Sophomore, Junior, Senior
//! Graduate: MA, MS, PhD
//! ```

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Name of the universal concept at the top of every hierarchy.
pub const ANY: &str = "ANY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptNode {
    pub name: String,
    pub level: usize,
    parent: Option<usize>,
}

impl ConceptNode {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }
}

/// An immutable, validated concept tree for one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptTree {
    attribute: String,
    nodes: Vec<ConceptNode>,
    index: BTreeMap<String, usize>,
    widths: Vec<usize>,
}

impl ConceptTree {
    /// Parses a hierarchy file. The attribute name comes from the
    /// `attribute: <name>` header line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut attribute: Option<String> = None;
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut has_line: Vec<bool> = Vec::new();

        let mut intern = |name: &str,
                          names: &mut Vec<String>,
                          parent: &mut Vec<Option<usize>>,
                          has_line: &mut Vec<bool>| {
            if let Some(&i) = index.get(name) {
                return i;
            }
            let i = names.len();
            names.push(name.to_owned());
            parent.push(None);
            has_line.push(false);
            index.insert(name.to_owned(), i);
            i
        };

        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let Some((head, tail)) = line.split_once(':') else {
                return Err(syntax(line_no, "expected `parent: child, ...`"));
            };
            let head = head.trim();
            let tail = tail.trim();
            if attribute.is_none() {
                if head != "attribute" {
                    return Err(Error::MissingAttributeHeader);
                }
                if tail.is_empty() {
                    return Err(syntax(line_no, "empty attribute name"));
                }
                attribute = Some(tail.to_owned());
                continue;
            }
            if head.is_empty() {
                return Err(syntax(line_no, "empty parent concept"));
            }
            if tail.is_empty() {
                return Err(syntax(line_no, "parent with no children"));
            }
            let p = intern(head, &mut names, &mut parent, &mut has_line);
            if has_line[p] {
                return Err(Error::DuplicateConcept(head.to_owned()));
            }
            has_line[p] = true;
            for child in tail.split(',').map(str::trim) {
                if child.is_empty() {
                    return Err(syntax(line_no, "empty child concept"));
                }
                if child == ANY {
                    return Err(Error::RootHasParent(head.to_owned()));
                }
                if child == head {
                    return Err(Error::Cycle(child.to_owned()));
                }
                let c = intern(child, &mut names, &mut parent, &mut has_line);
                match parent[c] {
                    Some(existing) if existing == p => {
                        return Err(Error::DuplicateConcept(child.to_owned()))
                    }
                    Some(existing) => {
                        return Err(Error::MultipleParents {
                            concept: child.to_owned(),
                            first: names[existing].clone(),
                            second: head.to_owned(),
                        })
                    }
                    None => parent[c] = Some(p),
                }
            }
        }

        let attribute = attribute.ok_or(Error::MissingAttributeHeader)?;
        Self::assemble(attribute, names, parent)
    }

    fn assemble(attribute: String, names: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self> {
        let roots: Vec<usize> = (0..names.len()).filter(|&i| parent[i].is_none()).collect();
        let any_root = names.iter().position(|n| n == ANY);
        if roots.len() > 1 {
            return Err(Error::MultipleRoots(
                roots.iter().map(|&i| names[i].clone()).collect(),
            ));
        }
        let Some(root) = any_root else {
            return Err(Error::MissingRoot);
        };
        if roots.is_empty() {
            return Err(Error::Cycle(names[root].clone()));
        }

        // Distance from the root; a walk longer than the node count is a cycle.
        let mut distance = vec![0usize; names.len()];
        for (i, d) in distance.iter_mut().enumerate() {
            let mut cur = i;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > names.len() {
                    return Err(Error::Cycle(names[i].clone()));
                }
            }
            if cur != root {
                return Err(Error::Cycle(names[i].clone()));
            }
            *d = steps;
        }

        let mut has_child = vec![false; names.len()];
        for p in parent.iter().flatten() {
            has_child[*p] = true;
        }
        let mut leaf_depth: Option<usize> = None;
        for i in (0..names.len()).filter(|&i| !has_child[i]) {
            match leaf_depth {
                None => leaf_depth = Some(distance[i]),
                Some(expected) if expected != distance[i] => {
                    return Err(Error::Unbalanced {
                        leaf: names[i].clone(),
                        depth: distance[i],
                        expected,
                    })
                }
                Some(_) => {}
            }
        }
        let leaf_depth = leaf_depth.unwrap_or(0);
        if leaf_depth == 0 {
            return Err(Error::EmptyHierarchy);
        }
        let depth = leaf_depth + 1;

        let mut widths = vec![0usize; depth];
        let mut index = BTreeMap::new();
        let nodes: Vec<ConceptNode> = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| {
                let level = depth - distance[i];
                widths[level - 1] += 1;
                index.insert(name.clone(), i);
                ConceptNode {
                    name,
                    level,
                    parent: parent[i],
                }
            })
            .collect();

        Ok(Self {
            attribute,
            nodes,
            index,
            widths,
        })
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    /// Number of levels `n`, counting the leaves as level 1 and ANY as level n.
    pub fn depth(&self) -> usize {
        self.widths.len()
    }

    /// `CT_1..CT_n`: node counts per level.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn level_width(&self, level: usize) -> Result<usize> {
        self.check_level(level)?;
        Ok(self.widths[level - 1])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ConceptNode] {
        &self.nodes
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.index.contains_key(concept)
    }

    pub fn node(&self, concept: &str) -> Result<&ConceptNode> {
        self.index
            .get(concept)
            .map(|&i| &self.nodes[i])
            .ok_or_else(|| self.unknown(concept))
    }

    pub fn level_of(&self, concept: &str) -> Result<usize> {
        self.node(concept).map(|n| n.level)
    }

    pub fn is_leaf(&self, concept: &str) -> bool {
        self.node(concept).is_ok_and(|n| n.level == 1)
    }

    pub fn parent_of(&self, concept: &str) -> Result<Option<&str>> {
        let node = self.node(concept)?;
        Ok(node.parent.map(|p| self.nodes[p].name.as_str()))
    }

    /// Concepts at `level`, in the order they first appear in the file.
    pub fn concepts_at_level(&self, level: usize) -> impl Iterator<Item = &str> {
        self.nodes
            .iter()
            .filter(move |n| n.level == level)
            .map(|n| n.name.as_str())
    }

    /// The unique ancestor of `concept` at `level`; the concept itself when
    /// the levels are equal.
    pub fn ancestor_at_level(&self, concept: &str, level: usize) -> Result<&str> {
        self.check_level(level)?;
        let mut idx = *self
            .index
            .get(concept)
            .ok_or_else(|| self.unknown(concept))?;
        let own = self.nodes[idx].level;
        if level < own {
            return Err(Error::LevelBelowConcept {
                concept: concept.to_owned(),
                requested: level,
                actual: own,
            });
        }
        while self.nodes[idx].level < level {
            // Balanced trees guarantee a parent exists below level n.
            idx = self.nodes[idx].parent.expect("non-root node has a parent");
        }
        Ok(&self.nodes[idx].name)
    }

    /// True iff `general` is `specific` or one of its ancestors.
    pub fn covers(&self, general: &str, specific: &str) -> Result<bool> {
        let g = self.node(general)?;
        let s = self.node(specific)?;
        if g.level < s.level {
            return Ok(false);
        }
        Ok(self.ancestor_at_level(specific, g.level)? == general)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                depth: self.depth(),
            });
        }
        Ok(())
    }

    fn unknown(&self, concept: &str) -> Error {
        Error::UnknownConcept {
            attribute: self.attribute.clone(),
            concept: concept.to_owned(),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn syntax(line: usize, message: &str) -> Error {
    Error::HierarchySyntax {
        line,
        message: message.to_owned(),
    }
}

/// Per-attribute trees keyed by attribute name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hierarchies {
    trees: BTreeMap<String, ConceptTree>,
}

impl Hierarchies {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a tree, replacing any tree already registered for its attribute.
    pub fn insert(&mut self, tree: ConceptTree) -> Option<ConceptTree> {
        self.trees.insert(tree.attribute.clone(), tree)
    }

    pub fn get(&self, attribute: &str) -> Option<&ConceptTree> {
        self.trees.get(attribute)
    }

    pub fn require(&self, attribute: &str) -> Result<&ConceptTree> {
        self.get(attribute)
            .ok_or_else(|| Error::MissingHierarchy(attribute.to_owned()))
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConceptTree> {
        self.trees.values()
    }
}

impl FromIterator<ConceptTree> for Hierarchies {
    fn from_iter<I: IntoIterator<Item = ConceptTree>>(iter: I) -> Self {
        let mut h = Hierarchies::new();
        for t in iter {
            h.insert(t);
        }
        h
    }
}

/// Depth × width matrix over a set of trees, with row and column totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub attributes: Vec<String>,
    pub widths: Vec<Vec<usize>>,
}

impl TreeStats {
    pub fn max_depth(&self) -> usize {
        self.widths.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn width(&self, tree: usize, level: usize) -> Option<usize> {
        self.widths.get(tree)?.get(level.checked_sub(1)?).copied()
    }

    pub fn level_total(&self, level: usize) -> usize {
        (0..self.widths.len())
            .filter_map(|t| self.width(t, level))
            .sum()
    }

    pub fn tree_total(&self, tree: usize) -> usize {
        self.widths[tree].iter().sum()
    }

    pub fn tree_totals(&self) -> Vec<usize> {
        (0..self.widths.len()).map(|t| self.tree_total(t)).collect()
    }

    pub fn grand_total(&self) -> usize {
        self.widths.iter().flatten().sum()
    }
}

pub fn tree_stats<'a, I>(trees: I) -> TreeStats
where
    I: IntoIterator<Item = &'a ConceptTree>,
{
    let (attributes, widths) = trees
        .into_iter()
        .map(|t| (t.attribute.clone(), t.widths.clone()))
        .unzip();
    TreeStats { attributes, widths }
}

impl fmt::Display for TreeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header: Vec<String> = vec!["Depth/Level".into()];
        header.extend(self.attributes.iter().cloned());
        header.push("Total".into());

        let mut rows: Vec<Vec<String>> = Vec::new();
        for level in 1..=self.max_depth() {
            let mut row = vec![alloc::format!("{level}")];
            for t in 0..self.widths.len() {
                row.push(
                    self.width(t, level)
                        .map(|w| alloc::format!("{w}"))
                        .unwrap_or_default(),
                );
            }
            row.push(alloc::format!("{}", self.level_total(level)));
            rows.push(row);
        }
        let mut totals = vec![String::from("Total")];
        totals.extend(self.tree_totals().iter().map(|t| alloc::format!("{t}")));
        totals.push(alloc::format!("{}", self.grand_total()));
        rows.push(totals);

        write_aligned(f, &header, &rows)
    }
}

pub(crate) fn write_aligned(
    f: &mut fmt::Formatter<'_>,
    header: &[String],
    rows: &[Vec<String>],
) -> fmt::Result {
    let mut col_width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            col_width[i] = col_width[i].max(cell.chars().count());
        }
    }
    let line = |f: &mut fmt::Formatter<'_>, cells: &[String]| -> fmt::Result {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < cells.len() {
                for _ in cell.chars().count()..col_width[i] {
                    out.push(' ');
                }
            }
        }
        writeln!(f, "{}", out.trim_end())
    };
    line(f, header)?;
    for row in rows {
        line(f, row)?;
    }
    Ok(())
}
