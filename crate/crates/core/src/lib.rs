//! Invariant Hermitian geometry on a class of compact homogeneous complex
//! manifolds: T²-bundles over products of two irreducible compact Hermitian
//! symmetric spaces (Calabi-Eckmann manifolds included).
//!
//! The crate computes, for every invariant complex structure `J(a, b)` and
//! every adapted invariant metric `(g1, g2, h0)`:
//!
//! * the Chern connection through its connection map, its curvature, and the
//!   first and second Chern-Ricci tensors — both in closed form and through
//!   an independent Lie-theoretic oracle built from structure constants;
//! * the Chern-Einstein equation `S(h) = h`, solved exactly via a cubic with
//!   rational root isolation, together with the discriminant-based
//!   uniqueness analysis;
//! * the normalized and unnormalized Hermitian curvature flow on the
//!   three-parameter invariant family, with equilibrium, blowup, and
//!   linearization diagnostics;
//! * non-existence obstructions: the SKT `dd^c` evaluation and the
//!   `del delbar`-lemma witness form;
//! * the balanced-metric criterion `sqrt(-1) delta_h ∈ center(l)` on
//!   homogeneous spaces over flag manifolds, with the constructive
//!   balanced-metric pipeline for flags with `b2 >= 3`.
//!
//! Exact rational arithmetic backs every algebraic identity; binary64 is
//! used only where a metric coefficient is itself an arbitrary real.

pub mod balanced;
pub mod classc;
pub mod einstein;
pub mod exact;
pub mod flow;
pub mod rootsys;
pub mod verify;
