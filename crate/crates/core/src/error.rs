use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised while parsing hierarchies, shaping relations, or running
/// the induction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("hierarchy line {line}: {message}")]
    HierarchySyntax { line: usize, message: String },
    #[error("hierarchy is missing the `attribute: <name>` header")]
    MissingAttributeHeader,
    #[error("duplicate concept `{0}`")]
    DuplicateConcept(String),
    #[error("concept `{concept}` has multiple parents (`{first}` and `{second}`)")]
    MultipleParents {
        concept: String,
        first: String,
        second: String,
    },
    #[error("missing ANY root")]
    MissingRoot,
    #[error("multiple roots: {0:?}")]
    MultipleRoots(Vec<String>),
    #[error("ANY cannot have a parent (listed under `{0}`)")]
    RootHasParent(String),
    #[error("cycle through concept `{0}`")]
    Cycle(String),
    #[error("unbalanced hierarchy: leaf `{leaf}` sits at depth {depth}, expected {expected}")]
    Unbalanced {
        leaf: String,
        depth: usize,
        expected: usize,
    },
    #[error("hierarchy must contain at least one concept below ANY")]
    EmptyHierarchy,
    #[error("unknown concept `{concept}` in hierarchy `{attribute}`")]
    UnknownConcept { attribute: String, concept: String },
    #[error("level {level} out of range 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("level {requested} is below the level {actual} of concept `{concept}`")]
    LevelBelowConcept {
        concept: String,
        requested: usize,
        actual: usize,
    },

    #[error("empty relation")]
    EmptyRelation,
    #[error("empty schema")]
    EmptySchema,
    #[error("duplicate attribute `{0}` in schema")]
    DuplicateAttribute(String),
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("row {row}, attribute `{attribute}`: empty value")]
    EmptyValue { row: usize, attribute: String },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("no concept hierarchy for attribute `{0}`")]
    MissingHierarchy(String),
    #[error("unknown values for class attribute `{attribute}`: {values:?}")]
    UnknownClassValues {
        attribute: String,
        values: Vec<String>,
    },
    #[error("attribute `{attribute}`: value `{value}` is not a leaf concept")]
    NonLeafValue { attribute: String, value: String },
    #[error("threshold must be at least 1")]
    InvalidThreshold,

    #[error("attribute `{0}` is already generalized to ANY")]
    AlreadyAtRoot(String),
    #[error("attribute `{0}` holds concepts from more than one level")]
    MixedLevels(String),
    #[error("attribute `{0}` holds unioned value sets and cannot be ascended")]
    UnionedColumn(String),
    #[error("ranking needs at least 2 attributes, got {0}")]
    TooFewAttributes(usize),
    #[error("forced ranking does not match the scored attributes")]
    RankingMismatch,

    #[error("CR has {cr} levels, CT has {ct}, depth is {depth}")]
    DimensionMismatch { cr: usize, ct: usize, depth: usize },
    #[error("CR_{level} = {cr} exceeds CT_{level} = {ct}")]
    CountExceedsWidth { level: usize, cr: u64, ct: u64 },
    #[error("CT_{0} must be at least 1")]
    ZeroWidth(usize),
    #[error("arithmetic overflow while scoring")]
    Overflow,

    #[error("profile: {0}")]
    InvalidProfile(String),
    #[error("profile group `{group}` needs {required} distinct `{attribute}` leaves but can produce {achievable}")]
    UnsatisfiableDiversity {
        group: String,
        attribute: String,
        required: usize,
        achievable: usize,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
