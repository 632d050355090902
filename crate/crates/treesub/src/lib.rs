//! Tree substitutions and Rauzy fractals for primitive Pisot substitutions.
//!
//! Starting from a substitution on a finite alphabet the crate computes, in
//! order:
//!
//! * the prefix-suffix automaton, desubstitution expansions and the
//!   singular (asymptotic) word data of the attracting shift;
//! * an abstract self-similar tree substitution whose renormalized iterates
//!   approximate the compact heart of the repelling tree, with pruning and
//!   covering refinements;
//! * exact embeddings of the iterated trees inside the contracting plane of
//!   the incidence matrix (the Rauzy fractal picture), with exact rational
//!   coincidence detection;
//! * the contour substitution of the tree, its dual, and the induced
//!   interval exchange (piecewise rotation) on the circle.
//!
//! All decision-making arithmetic is exact (big rationals and the number
//! field of the dominant eigenvalue); floats appear only in renderings.

pub mod automaton;
pub mod biword;
pub mod contour;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod freegroup;
pub mod iet;
pub mod linalg;
pub mod numberfield;
pub mod pipeline;
pub mod pisot;
pub mod poly;
pub mod recognize;
pub mod render;
pub mod singular;
pub mod substitution;
pub mod tree;

pub use error::{Error, Result};
