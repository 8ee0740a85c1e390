//! The shipped student fixtures: four hierarchies and the profile that
//! generates the 50000-row table.

use aoi_core::datagen::{generate, FixtureProfile};
use aoi_core::{ConceptTree, Hierarchies, Relation};

pub const CATEGORY: &str = include_str!("../../../fixtures/hierarchies/category.txt");
pub const MAJOR: &str = include_str!("../../../fixtures/hierarchies/major.txt");
pub const BIRTHPLACE: &str = include_str!("../../../fixtures/hierarchies/birthplace.txt");
pub const GPA: &str = include_str!("../../../fixtures/hierarchies/gpa.txt");
pub const STUDENTS: &str = include_str!("../../../fixtures/profiles/students.json");

/// Trees in stats column order: category, major, birthplace, GPA.
pub fn trees() -> Vec<ConceptTree> {
    [CATEGORY, MAJOR, BIRTHPLACE, GPA]
        .into_iter()
        .map(|t| ConceptTree::parse(t).expect("shipped hierarchy parses"))
        .collect()
}

pub fn hierarchies() -> Hierarchies {
    trees().into_iter().collect()
}

pub fn graduate_profile() -> FixtureProfile {
    serde_json::from_str(STUDENTS).expect("shipped profile parses")
}

pub fn graduate_relation() -> Relation {
    generate(&graduate_profile(), &hierarchies()).expect("shipped profile is valid")
}
