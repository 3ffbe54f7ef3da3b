//! Exact-arithmetic toolkit for finitely generated subgroups of irreducible
//! arithmetic groups acting on products of hyperbolic planes.
//!
//! The library builds groups from matrix or quaternion generators over a
//! totally real number field, classifies the Galois-conjugate tuples of
//! isometries they define, and samples the two pieces of the regular limit
//! set: the projective limit set (translation directions) and the
//! Furstenberg limit set (tuples of attractive fixed points). On top of the
//! samplers sit trace-field invariants, discreteness certificates and the
//! block-structure predictions that tie the two limit sets together.
//!
//! Everything that feeds a classification is exact: field elements are
//! power-basis vectors of rationals, real embeddings are certified interval
//! enclosures, and trace comparisons against the parabolic threshold are
//! decided by sign, never by floating tolerance. Floating point appears only
//! where it is harmless: boundary points, isometric circles and rendered
//! output.
//!
//! Modules:
//! - [`numfield`]: totally real number fields, exact elements, embeddings.
//! - [`quatalg`]: quaternion algebras, ramification, orders, embeddings.
//! - [`isometry`]: Möbius transformations, classification, Schottky tools.
//! - [`limitsets`]: word enumeration, samplers, discreteness, predictions.
//! - [`cli`]: config parsing, command dispatch, CSV/SVG/cache formats.

pub mod cli;
pub mod fixed;
pub mod isometry;
pub mod limitsets;
pub mod numfield;
pub mod quatalg;
