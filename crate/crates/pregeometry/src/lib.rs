//! A finite pregeometry (matroid) engine with a verification harness.
//!
//! The crate provides, bottom up:
//!
//! - closure operators on finite ground sets ([`closure`]), with
//!   constructors for linear span, affine hull, trivial closure,
//!   generated-subgroup closure and explicit flat lists
//!   ([`constructors`]);
//! - a verifier for the four pregeometry axioms (reflexivity,
//!   transitivity, finite character, exchange) with least-witness
//!   reporting ([`axioms`]);
//! - validated matroids with rank, bases, restriction, localization and
//!   flat enumeration ([`matroid`]);
//! - the canonical associated geometry and the
//!   trivial/modular/locally-modular/projective taxonomy ([`classify`]);
//! - rank-3 geometries as incidence planes with meets, concurrency and
//!   collineations ([`plane`]);
//! - finite groups paired with compatible pregeometries, and mechanical
//!   checks of genericity, invariance, generic products, invariant
//!   subgroups and the three-line proof configuration ([`harness`]);
//! - plain-text file formats and report grammars ([`format`], [`report`]).

pub mod axioms;
pub mod catalog;
pub mod classify;
pub mod closure;
pub mod constructors;
pub mod error;
pub mod format;
pub mod group;
pub mod harness;
pub mod matroid;
pub mod plane;
pub mod report;
pub mod set;

pub use axioms::{verify_axioms, AxiomReport, VerificationMode, Verdict};
pub use classify::{classify, geometrize, ClassificationReport, Geometrized, Geometry};
pub use closure::ClosureTable;
pub use error::{GroupError, MatroidError, PlaneError};
pub use group::{Automorphism, FiniteGroup};
pub use harness::GroupPregeometry;
pub use matroid::Matroid;
pub use plane::{Collineation, ConcurrencyResult, Plane, PlaneMode};
pub use set::{ElementSet, GroundSet};
