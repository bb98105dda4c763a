//! Canonical test presentations used across the crate and its test suites.
//!
//! * `f1` — two vertices joined by an edge, both groups of order two; the
//!   product is the Klein four-group.
//! * `f2` — the same groups with no edge; the product is the infinite
//!   dihedral group, a free product of two order-two groups.
//! * `f3` — three order-two groups along a path; the outer two vertex groups
//!   do not commute with each other.
//!
//! All three declare the quadratic class and a 2-element multiplication
//! table backend. Two auxiliary single-vertex fixtures exercise the free and
//! free-abelian backends.

use std::collections::BTreeMap;

use crate::isofunctions::FunctionClass;
use crate::oracles::{BackendSpec, ProductOracles, SearchCaps, TableSpec};
use crate::presentations::{
    validate_presentation, GraphProductPresentation, RawGroup, RawPresentation, VertexId,
};

fn z2_group(vertex: u32, letter: &str) -> RawGroup {
    RawGroup {
        vertex,
        gens: vec![letter.to_string()],
        bar_pairs: vec![(letter.to_string(), letter.to_string())],
        relators: vec![format!("{letter}{letter}")],
        iso: FunctionClass::Polynomial(2),
    }
}

fn z2_backend(letter: &str) -> BackendSpec {
    BackendSpec::Table(TableSpec {
        order: 2,
        entries: vec![0, 1, 1, 0],
        gen_map: vec![(letter.to_string(), 1)],
    })
}

pub fn raw_f1() -> RawPresentation {
    RawPresentation {
        vertices: vec![1, 2],
        edges: vec![(1, 2)],
        groups: vec![z2_group(1, "a"), z2_group(2, "b")],
    }
}

pub fn raw_f2() -> RawPresentation {
    RawPresentation {
        vertices: vec![1, 2],
        edges: vec![],
        groups: vec![z2_group(1, "a"), z2_group(2, "b")],
    }
}

pub fn raw_f3() -> RawPresentation {
    RawPresentation {
        vertices: vec![1, 2, 3],
        edges: vec![(1, 2), (2, 3)],
        groups: vec![z2_group(1, "a"), z2_group(2, "b"), z2_group(3, "c")],
    }
}

fn build(
    raw: &RawPresentation,
    specs: BTreeMap<VertexId, BackendSpec>,
) -> (GraphProductPresentation, ProductOracles) {
    let p = validate_presentation(raw).expect("fixture must validate");
    let oracles =
        ProductOracles::new(&p, &specs, SearchCaps::default()).expect("fixture oracles");
    (p, oracles)
}

pub fn f1_specs() -> (GraphProductPresentation, BTreeMap<VertexId, BackendSpec>) {
    let p = validate_presentation(&raw_f1()).expect("fixture must validate");
    let specs = [
        (VertexId(1), z2_backend("a")),
        (VertexId(2), z2_backend("b")),
    ]
    .into_iter()
    .collect();
    (p, specs)
}

pub fn f1() -> (GraphProductPresentation, ProductOracles) {
    build(
        &raw_f1(),
        [
            (VertexId(1), z2_backend("a")),
            (VertexId(2), z2_backend("b")),
        ]
        .into_iter()
        .collect(),
    )
}

pub fn f2() -> (GraphProductPresentation, ProductOracles) {
    build(
        &raw_f2(),
        [
            (VertexId(1), z2_backend("a")),
            (VertexId(2), z2_backend("b")),
        ]
        .into_iter()
        .collect(),
    )
}

pub fn f3() -> (GraphProductPresentation, ProductOracles) {
    build(
        &raw_f3(),
        [
            (VertexId(1), z2_backend("a")),
            (VertexId(2), z2_backend("b")),
            (VertexId(3), z2_backend("c")),
        ]
        .into_iter()
        .collect(),
    )
}

/// The integers on letters `x`, `X` with `bar(x) = X`, free-group backend.
pub fn free_z() -> (GraphProductPresentation, ProductOracles) {
    let raw = RawPresentation {
        vertices: vec![1],
        edges: vec![],
        groups: vec![RawGroup {
            vertex: 1,
            gens: vec!["x".into(), "X".into()],
            bar_pairs: vec![("x".into(), "X".into())],
            relators: vec![],
            iso: FunctionClass::Polynomial(2),
        }],
    };
    build(&raw, [(VertexId(1), BackendSpec::Free)].into_iter().collect())
}

/// Free abelian group of rank two on `x`, `y` and their bar partners.
pub fn free_abelian_rank2() -> (GraphProductPresentation, ProductOracles) {
    let raw = RawPresentation {
        vertices: vec![1],
        edges: vec![],
        groups: vec![RawGroup {
            vertex: 1,
            gens: vec!["x".into(), "X".into(), "y".into(), "Y".into()],
            bar_pairs: vec![("x".into(), "X".into()), ("y".into(), "Y".into())],
            relators: vec![],
            iso: FunctionClass::Polynomial(2),
        }],
    };
    build(&raw, [(VertexId(1), BackendSpec::Abelian)].into_iter().collect())
}
