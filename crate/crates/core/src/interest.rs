//! Attribute interestingness: the normalized level-coverage score
//! `(CR_1/CT_1 + ... + CR_n/CT_n) / n` and the tie-breaking cascade that
//! turns scores into generalize / union / anchor roles.
//!
//! `CR_i` counts the distinct concepts an attribute's column held while it
//! sat at level `i`; `CT_i` counts the concepts at level `i` of its tree.
//! The highest-ranked attribute is generalized further, the lowest is the
//! anchor that stays in the rule, and everything between is unioned.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, Zero};

use crate::error::{Error, Result};

/// An exact, non-negative rational score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(Ratio<u128>);

impl Score {
    pub fn new(numer: u128, denom: u128) -> Self {
        Score(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> u128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u128 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// The value in thousandths as printed in reports. The value is first
    /// fixed at four decimals, then that figure is rounded half-up to three,
    /// so 0.54545... prints as 0.546.
    pub fn display_thousandths(&self) -> u128 {
        let (n, d) = (self.numer(), self.denom());
        let ten_thousandths = (n.saturating_mul(20_000).saturating_add(d)) / d.saturating_mul(2);
        (ten_thousandths + 5) / 10
    }

    /// Three-decimal rendering, e.g. `0.546`.
    pub fn display3(&self) -> String {
        let t = self.display_thousandths();
        format!("{}.{:03}", t / 1000, t % 1000)
    }

    /// Like [`Score::display3`] but with trailing zeros dropped: `1`, `0.5`, `0.636`.
    pub fn display_compact(&self) -> String {
        let t = self.display_thousandths();
        let mut s = format!("{}.{:03}", t / 1000, t % 1000);
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
        s
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display3())
    }
}

fn check_dimensions(cr: &[u64], ct: &[u64], depth: usize) -> Result<()> {
    if cr.len() != depth || ct.len() != depth || depth == 0 {
        return Err(Error::DimensionMismatch {
            cr: cr.len(),
            ct: ct.len(),
            depth,
        });
    }
    for (i, (&r, &t)) in cr.iter().zip(ct).enumerate() {
        if t == 0 {
            return Err(Error::ZeroWidth(i + 1));
        }
        if r > t {
            return Err(Error::CountExceedsWidth {
                level: i + 1,
                cr: r,
                ct: t,
            });
        }
    }
    Ok(())
}

/// Mean of `CR_i / CT_i` over the `depth` levels, as an exact rational.
pub fn eq1_score(cr: &[u64], ct: &[u64], depth: usize) -> Result<Score> {
    check_dimensions(cr, ct, depth)?;
    let mut sum = Ratio::<u128>::zero();
    for (&r, &t) in cr.iter().zip(ct) {
        sum = sum
            .checked_add(&Ratio::new(u128::from(r), u128::from(t)))
            .ok_or(Error::Overflow)?;
    }
    sum.checked_div(&Ratio::from_integer(depth as u128))
        .map(Score)
        .ok_or(Error::Overflow)
}

/// `Σ CR_i / CT_i` before dividing by the depth.
pub fn level_ratio_sum(cr: &[u64], ct: &[u64]) -> Result<Score> {
    eq1_score(cr, ct, cr.len()).map(|s| Score(s.0 * Ratio::from_integer(cr.len() as u128)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonZeroProduct {
    pub value: u128,
    /// Set when every `CR_i` was zero and `value` is the empty product.
    pub degenerate: bool,
}

/// Product of the non-zero entries of `cr`.
pub fn nonzero_product(cr: &[u64]) -> NonZeroProduct {
    let mut degenerate = true;
    let mut value: u128 = 1;
    for &c in cr.iter().filter(|&&c| c > 0) {
        degenerate = false;
        value = value.saturating_mul(u128::from(c));
    }
    NonZeroProduct { value, degenerate }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Role {
    FurtherGeneralization,
    Union,
    Anchor,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::FurtherGeneralization => "FurtherGeneralization",
            Role::Union => "Union",
            Role::Anchor => "Anchor",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeScore {
    pub attribute: String,
    pub cr: Vec<u64>,
    pub ct: Vec<u64>,
    pub score: Score,
    pub depth: usize,
    pub product: NonZeroProduct,
    /// Zero-based column index in schema order.
    pub position: usize,
}

impl AttributeScore {
    pub fn new(attribute: impl Into<String>, cr: Vec<u64>, ct: Vec<u64>, position: usize) -> Result<Self> {
        let depth = ct.len();
        let score = eq1_score(&cr, &ct, depth)?;
        let product = nonzero_product(&cr);
        Ok(Self {
            attribute: attribute.into(),
            cr,
            ct,
            score,
            depth,
            product,
            position,
        })
    }

    /// Cascade order: higher score, then deeper tree, then larger non-zero
    /// CR product, then the column further left ranks first.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .cmp(&self.score)
            .then_with(|| other.depth.cmp(&self.depth))
            .then_with(|| other.product.value.cmp(&self.product.value))
            .then_with(|| self.position.cmp(&other.position))
    }
}

/// Scores in rank order (rank 1 first) with the role each rank receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreReport {
    scores: Vec<AttributeScore>,
    roles: Vec<Role>,
}

fn roles_for(count: usize) -> Vec<Role> {
    (0..count)
        .map(|i| match i {
            0 => Role::FurtherGeneralization,
            i if i + 1 == count => Role::Anchor,
            _ => Role::Union,
        })
        .collect()
}

/// Sorts attributes by the cascade and assigns roles by rank.
pub fn rank_attributes(mut scores: Vec<AttributeScore>) -> Result<ScoreReport> {
    if scores.len() < 2 {
        return Err(Error::TooFewAttributes(scores.len()));
    }
    scores.sort_by(AttributeScore::rank_cmp);
    let roles = roles_for(scores.len());
    Ok(ScoreReport { scores, roles })
}

impl ScoreReport {
    /// Reorders the report to a caller-chosen ranking, keeping the computed
    /// scores. `order` must name every scored attribute exactly once.
    pub fn with_ranking(mut self, order: &[&str]) -> Result<Self> {
        if order.len() != self.scores.len() {
            return Err(Error::RankingMismatch);
        }
        let mut ranked = Vec::with_capacity(order.len());
        for name in order {
            let i = self
                .scores
                .iter()
                .position(|s| s.attribute == *name)
                .ok_or(Error::RankingMismatch)?;
            ranked.push(self.scores.swap_remove(i));
        }
        Ok(ScoreReport {
            roles: roles_for(ranked.len()),
            scores: ranked,
        })
    }

    pub fn scores(&self) -> &[AttributeScore] {
        &self.scores
    }

    pub fn ranked(&self) -> impl Iterator<Item = (&AttributeScore, Role)> {
        self.scores.iter().zip(self.roles.iter().copied())
    }

    pub fn role_of(&self, attribute: &str) -> Option<Role> {
        self.ranked()
            .find(|(s, _)| s.attribute == attribute)
            .map(|(_, r)| r)
    }

    pub fn further_generalization(&self) -> &str {
        &self.scores[0].attribute
    }

    pub fn anchor(&self) -> &str {
        &self.scores[self.scores.len() - 1].attribute
    }

    /// Union attributes in rank order.
    pub fn unions(&self) -> impl Iterator<Item = &str> {
        self.ranked()
            .filter(|(_, r)| *r == Role::Union)
            .map(|(s, _)| s.attribute.as_str())
    }

    pub fn score_of(&self, attribute: &str) -> Option<&AttributeScore> {
        self.scores.iter().find(|s| s.attribute == attribute)
    }
}

/// Level grid: one block of columns per attribute (in schema order), one
/// column per level, with whole-attribute rows spanning the block.
impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_position: Vec<(usize, &AttributeScore, Role)> = self
            .ranked()
            .enumerate()
            .map(|(rank, (s, r))| (rank + 1, s, r))
            .collect();
        by_position.sort_by_key(|(_, s, _)| s.position);

        const LABELS: [&str; 9] = [
            "Attribute",
            "Depth/Level",
            "CR",
            "CT",
            "CR/CT",
            "Σ(CR/CT)/n",
            "Product",
            "Rank",
            "Role",
        ];
        let label_width = LABELS.iter().map(|l| l.chars().count()).max().unwrap_or(0);

        struct Block {
            per_level: [Vec<String>; 4],
            spans: [String; 5],
            widths: Vec<usize>,
        }
        let blocks: Vec<Block> = by_position
            .iter()
            .map(|&(rank, s, role)| {
                let levels: Vec<String> = (1..=s.depth).map(|l| format!("{l}")).collect();
                let cr: Vec<String> = s.cr.iter().map(|c| format!("{c}")).collect();
                let ct: Vec<String> = s.ct.iter().map(|c| format!("{c}")).collect();
                let ratio: Vec<String> = s
                    .cr
                    .iter()
                    .zip(&s.ct)
                    .map(|(&r, &t)| Score::new(r.into(), t.into()).display_compact())
                    .collect();
                let sum = level_ratio_sum(&s.cr, &s.ct)
                    .map(|x| x.display_compact())
                    .unwrap_or_default();
                let spans = [
                    s.attribute.clone(),
                    format!("{sum}/{}={}", s.depth, s.score.display3()),
                    format!("{}", s.product.value),
                    format!("{rank}"),
                    role.as_str().to_owned(),
                ];
                let per_level = [levels, cr, ct, ratio];
                let mut widths: Vec<usize> = (0..s.depth)
                    .map(|i| per_level.iter().map(|row| row[i].chars().count()).max().unwrap_or(0))
                    .collect();
                let span_need = spans.iter().map(|x| x.chars().count()).max().unwrap_or(0);
                let have = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
                if span_need > have {
                    if let Some(last) = widths.last_mut() {
                        *last += span_need - have;
                    }
                }
                Block {
                    per_level,
                    spans,
                    widths,
                }
            })
            .collect();

        let pad = |out: &mut String, text: &str, width: usize| {
            out.push_str(text);
            for _ in text.chars().count()..width {
                out.push(' ');
            }
        };
        for (row, label) in LABELS.iter().enumerate() {
            let mut line = String::new();
            pad(&mut line, label, label_width);
            for b in &blocks {
                line.push_str("    ");
                match row {
                    1..=4 => {
                        for (i, cell) in b.per_level[row - 1].iter().enumerate() {
                            if i > 0 {
                                line.push_str("  ");
                            }
                            pad(&mut line, cell, b.widths[i]);
                        }
                    }
                    _ => {
                        let span_row = match row {
                            0 => 0,
                            r => r - 4,
                        };
                        let total = b.widths.iter().sum::<usize>() + 2 * b.widths.len().saturating_sub(1);
                        pad(&mut line, &b.spans[span_row], total);
                    }
                }
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn eq1_exact_values() {
        let s = eq1_score(&[7, 2, 0], &[11, 2, 1], 3).unwrap();
        assert_eq!(s, Score::new(18, 33));
        assert_eq!(s.display3(), "0.546");
        let s = eq1_score(&[8, 5, 2, 0], &[11, 5, 2, 1], 4).unwrap();
        assert_eq!(s, Score::new(30, 44));
        assert_eq!(s.display3(), "0.682");
        let s = eq1_score(&[40, 4, 1], &[40, 4, 1], 3).unwrap();
        assert_eq!(s, Score::new(1, 1));
        assert_eq!(s.display3(), "1.000");
    }

    #[test]
    fn eq1_errors() {
        assert!(matches!(
            eq1_score(&[1, 1, 1, 1], &[11, 2, 1], 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            eq1_score(&[12, 1, 1], &[11, 2, 1], 3),
            Err(Error::CountExceedsWidth { level: 1, .. })
        ));
        assert_eq!(eq1_score(&[0, 1], &[0, 1], 2), Err(Error::ZeroWidth(1)));
        assert!(eq1_score(&[], &[], 0).is_err());
    }

    #[test]
    fn display_rounding() {
        assert_eq!(Score::new(13, 60).display3(), "0.217");
        assert_eq!(Score::new(2, 3).display3(), "0.667");
        // 3.43636.../4 from the same-level tie example.
        assert_eq!(eq1_score(&[7, 4, 2, 1], &[11, 5, 2, 1], 4).unwrap().display3(), "0.859");
        assert_eq!(Score::new(7, 11).display_compact(), "0.636");
        assert_eq!(Score::new(1, 2).display_compact(), "0.5");
        assert_eq!(Score::new(0, 1).display_compact(), "0");
        assert_eq!(Score::new(1, 1).display_compact(), "1");
        assert_eq!(level_ratio_sum(&[7, 2, 0], &[11, 2, 1]).unwrap().display_compact(), "1.636");
    }

    #[test]
    fn products() {
        assert_eq!(nonzero_product(&[40, 4, 1]).value, 160);
        assert_eq!(nonzero_product(&[11, 2, 1]).value, 22);
        assert_eq!(nonzero_product(&[11, 2, 0]).value, 22);
        let p = nonzero_product(&[0, 0, 0]);
        assert_eq!(p, NonZeroProduct { value: 1, degenerate: true });
        assert!(!nonzero_product(&[1]).degenerate);
    }

    fn score(name: &str, cr: &[u64], ct: &[u64], pos: usize) -> AttributeScore {
        AttributeScore::new(name, cr.to_vec(), ct.to_vec(), pos).unwrap()
    }

    #[test]
    fn two_attributes_have_no_union() {
        let r = rank_attributes(vec![
            score("a", &[1, 1], &[2, 1], 0),
            score("b", &[2, 1], &[2, 1], 1),
        ])
        .unwrap();
        assert_eq!(r.further_generalization(), "b");
        assert_eq!(r.anchor(), "a");
        assert_eq!(r.unions().count(), 0);
    }

    #[test]
    fn too_few_attributes() {
        assert_eq!(
            rank_attributes(vec![score("a", &[1, 1], &[2, 1], 0)]).unwrap_err(),
            Error::TooFewAttributes(1)
        );
    }

    #[test]
    fn forced_ranking() {
        let r = rank_attributes(vec![
            score("a", &[1, 1], &[2, 1], 0),
            score("b", &[2, 1], &[2, 1], 1),
            score("c", &[2, 0], &[2, 1], 2),
        ])
        .unwrap();
        let forced = r.clone().with_ranking(&["c", "a", "b"]).unwrap();
        assert_eq!(forced.role_of("c"), Some(Role::FurtherGeneralization));
        assert_eq!(forced.role_of("a"), Some(Role::Union));
        assert_eq!(forced.role_of("b"), Some(Role::Anchor));
        assert_eq!(r.clone().with_ranking(&["a", "b"]).unwrap_err(), Error::RankingMismatch);
        assert_eq!(r.with_ranking(&["a", "b", "z"]).unwrap_err(), Error::RankingMismatch);
    }

    #[test]
    fn report_grid() {
        let r = rank_attributes(vec![
            score("major", &[7, 2, 0], &[11, 2, 1], 0),
            score("birthplace", &[8, 5, 2, 0], &[11, 5, 2, 1], 1),
            score("GPA", &[6, 2, 0], &[40, 4, 1], 2),
        ])
        .unwrap();
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines[0].starts_with("Attribute"));
        assert!(lines[4].contains("0.636"));
        assert!(lines[5].contains("1.636/3=0.546"));
        assert!(lines[5].contains("2.727/4=0.682"));
        assert!(lines[5].contains("0.65/3=0.217"));
        assert!(lines[8].contains("Union") && lines[8].contains("FurtherGeneralization"));
        let major_at = lines[0].find("major").unwrap();
        assert_eq!(lines[2].find('7').unwrap(), major_at);
        assert_eq!(r.score_of("GPA").unwrap().score.to_string(), "0.217");
    }
}
