//! Error types shared across the engine.

use thiserror::Error;

use crate::axioms::AxiomReport;
use crate::set::ElementSet;

#[derive(Debug, Error)]
pub enum MatroidError {
    #[error("ground set must have at least one element")]
    EmptyGround,

    #[error("element index {index} out of range for ground of size {ground}")]
    OutOfRange { index: usize, ground: usize },

    #[error("{what}: size {actual} exceeds the capacity bound of {bound}")]
    Capacity {
        what: &'static str,
        bound: usize,
        actual: usize,
    },

    #[error("closure operator violates the pregeometry axioms")]
    NotAPregeometry(Box<AxiomReport>),

    #[error("matroid has rank 0: every element is a loop")]
    AllLoops,

    #[error("field modulus {0} is not prime")]
    NotPrime(u64),

    #[error("field ground size {actual} exceeds the bound of {bound}")]
    FieldTooLarge { actual: u64, bound: u64 },
}

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("geometry has rank {rank}, expected rank 3")]
    WrongRank { rank: usize },

    #[error("not a projective plane: lines {l1} and {l2} do not meet")]
    NotProjective { l1: ElementSet, l2: ElementSet },

    #[error("lines {l1} and {l2} do not intersect")]
    NoIntersection { l1: ElementSet, l2: ElementSet },

    #[error("line query requires two distinct points, got {point} twice")]
    SamePoint { point: usize },

    #[error("duplicate line {line} in concurrency query")]
    DuplicateLines { line: ElementSet },

    #[error("no point labelled {point} in this plane")]
    NoSuchPoint { point: usize },

    #[error("no line {line} in this plane")]
    NoSuchLine { line: ElementSet },

    #[error("points {p} and {q} lie on no common line")]
    NoCommonLine { p: usize, q: usize },

    #[error("ground map is not an automorphism of the closure: flat {flat} maps to a non-flat")]
    NotAnAutomorphism { flat: ElementSet },

    #[error("ground map is not a bijection of the ground set")]
    NotABijection,

    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group table is malformed: {0}")]
    Malformed(String),

    #[error("row 0 is not the identity row: index 0 must be the identity element")]
    IdentityNotZero,

    #[error("group operation is not associative at triple ({i},{j},{k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("element {0} has no inverse")]
    NoInverse(usize),

    #[error("{what}: size {actual} exceeds the capacity bound of {bound}")]
    Capacity {
        what: &'static str,
        bound: usize,
        actual: usize,
    },

    #[error("group order {group} does not match matroid ground size {matroid}")]
    GroundMismatch { group: usize, matroid: usize },

    #[error("pregeometry is not compatible with the group: automorphism {auto:?} maps flat {flat} to a non-flat")]
    Incompatible { auto: Vec<usize>, flat: ElementSet },

    #[error("kmax {0} exceeds the supported bound of 3")]
    KmaxTooLarge(usize),

    #[error("configuration harness requires at least one non-loop element")]
    NoNonLoopElement,

    #[error(transparent)]
    Matroid(#[from] MatroidError),

    #[error(transparent)]
    Plane(#[from] PlaneError),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Group(#[from] GroupError),

    #[error(transparent)]
    Matroid(#[from] MatroidError),
}
