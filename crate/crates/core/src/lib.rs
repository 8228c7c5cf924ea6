//! Finite topological spaces with finite group actions, classifying spaces
//! for families of subgroups, and enumeration of principal bundles over
//! finite spaces.

pub mod error;
pub mod finspace;
pub mod group;
pub mod classifying;
pub mod gspace;
pub mod pullback;
pub mod enumeration;
pub mod analytic;
pub mod json;
pub mod corpus;
pub mod suite;

pub use error::{Error, Result};
pub use finspace::{canonical_form, BitSet, CanonicalForm, FinSpace, SpaceMap};
pub use group::{CosetSpace, ElemSet, FinGroup, Subgroup};
pub use classifying::ClassifyingSpace;
pub use gspace::{FilteredSpace, GSpace, InducedSpace, OrbitSpace};
pub use enumeration::{face_space, BundleClass, CellComplex};
