//! Reduction calculus for graph products of finitely presented groups.
//!
//! A graph product is built from a finite graph with one group per vertex:
//! generators of groups at adjacent vertices commute, and no other relation
//! is imposed between distinct vertex groups. Free products (no edges) and
//! direct products (complete graphs) are the extreme cases.
//!
//! The crate provides:
//!
//! * [`presentations`] — graphs, vertex presentations with a bar involution,
//!   and the combined presentation of the product;
//! * [`words`] — the syllable-word calculus over the derived alphabet, with
//!   the embeddings `alpha`/`beta` and the norm;
//! * [`oracles`] — per-vertex word-problem backends (finite table, free
//!   group, free abelian) and breadth-first area certificates;
//! * [`engine`] — the three reduction moves, leading-block search, the
//!   canonical reduction strategy, and weight accounting; this decides the
//!   word problem for the product;
//! * [`certificates`] — conversion of reduction sequences into explicit
//!   conjugated-relator certificates, verified by free-group arithmetic;
//! * [`thue`] — the two-tier rewriting system on syllable words, bounded
//!   equivalence, almost-confluence and critical-pair checks;
//! * [`isofunctions`] — evaluable isoperimetric function classes and the
//!   composition maximum `g`, giving the `g(n) + n^2` area bound.

pub mod certificates;
pub mod engine;
pub mod fixtures;
pub mod freegroup;
pub mod isofunctions;
pub mod oracles;
pub mod presentations;
pub mod thue;
pub mod words;
