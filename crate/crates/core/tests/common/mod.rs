//! The fixture battery shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use geoshare::access::threshold_basis;
use geoshare::field::FieldSpec;
use geoshare::geometry::{
    construct_harc, construct_parc, harc_bound_check, parc_bound_check, plane_pencil, scheme_from_harc,
    scheme_from_parc, HierarchicalArc, PencilArc,
};
use geoshare::projective::normalize_coords;
use geoshare::scheme::{threshold_generator, Scheme};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub const THRESHOLDS: [(u32, usize, usize); 5] = [(2, 2, 2), (3, 2, 3), (4, 3, 4), (5, 2, 3), (5, 3, 5)];
pub const PARCS: [(u32, u32); 5] = [(3, 28), (3, 27), (3, 26), (2, 31), (2, 32)];
pub const HARCS: [u32; 3] = [2, 3, 4];
/// Parcs whose extracted scheme is in the battery; the rest leave a single
/// participant group.
pub const SCHEME_PARCS: [(u32, u32); 2] = [(3, 28), (2, 31)];
pub const SCHEME_HARCS: [u32; 2] = [2, 3];

pub fn threshold(q: u32, t: usize, n: usize) -> Scheme {
    let f = FieldSpec::of_order(q).unwrap();
    Scheme::new(threshold_generator(&f, t, n).unwrap(), threshold_basis(t, n).unwrap()).unwrap()
}

pub fn parc(q: u32, v: u32) -> PencilArc {
    construct_parc(q, v).unwrap()
}

pub fn harc(q: u32) -> HierarchicalArc {
    construct_harc(q).unwrap()
}

/// Every scheme in the battery, named as its fixture file.
pub fn schemes() -> Vec<(String, Scheme)> {
    let mut out = Vec::new();
    for (q, t, n) in THRESHOLDS {
        out.push((format!("scheme_threshold_q{q}_t{t}_n{n}"), threshold(q, t, n)));
    }
    for (q, v) in SCHEME_PARCS {
        out.push((format!("scheme_parc_q{q}_v{v}"), scheme_from_parc(&parc(q, v)).unwrap()));
    }
    for q in SCHEME_HARCS {
        out.push((format!("scheme_harc_q{q}"), scheme_from_harc(&harc(q)).unwrap()));
    }
    out
}

/// Geometric objects in the battery, as (file name, JSON).
pub fn geometry_fixtures() -> Vec<(String, serde_json::Value)> {
    let mut out = Vec::new();
    for (q, v) in PARCS {
        out.push((format!("parc_q{q}_v{v}"), serde_json::to_value(parc(q, v)).unwrap()));
    }
    for q in HARCS {
        out.push((format!("harc_q{q}"), serde_json::to_value(harc(q)).unwrap()));
    }
    for q in [2, 3] {
        out.push((format!("bound_parc_q{q}"), serde_json::to_value(parc_bound_witness(q)).unwrap()));
        out.push((format!("bound_harc_q{q}"), serde_json::to_value(harc_bound_witness(q)).unwrap()));
    }
    out
}

pub fn parc_bound_witness(q: u32) -> PencilArc {
    let r = parc_bound_check(q).unwrap();
    let center = normalize_coords(&r.field, &[0, 1, 0]).unwrap();
    PencilArc::new(&r.field, 2, r.witness.clone(), plane_pencil(&r.field, &center)).unwrap()
}

pub fn harc_bound_witness(q: u32) -> HierarchicalArc {
    let r = harc_bound_check(q).unwrap();
    let psi = geoshare::projective::Hyperplane::from_normal(&r.field, &[0, 0, 1]).unwrap();
    let (k2, k1) = r.witness.iter().cloned().partition(|p| psi.contains(&r.field, p));
    HierarchicalArc::new(&r.field, 2, k1, k2, psi).unwrap()
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(format!("{name}.json")))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}; run with GEOSHARE_BLESS=1 to create it"))
}
