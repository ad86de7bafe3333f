//! Stored witnesses must equal what the constructions produce today, and
//! must survive a read/verify/write round trip.
//! `GEOSHARE_BLESS=1 cargo test --test fixtures_match` rewrites them.

mod common;

use geoshare::geometry::{HierarchicalArc, PencilArc};
use geoshare::scheme::Scheme;

fn bless() -> bool {
    std::env::var_os("GEOSHARE_BLESS").is_some()
}

fn check(name: &str, value: &serde_json::Value) {
    let path = common::fixture_dir().join(format!("{name}.json"));
    if bless() {
        std::fs::create_dir_all(common::fixture_dir()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(value).unwrap() + "\n").unwrap();
        return;
    }
    let stored: serde_json::Value = serde_json::from_str(&common::read_fixture(name)).unwrap();
    assert_eq!(&stored, value, "{name} drifted from its fixture");
}

#[test]
fn geometry_fixtures_match() {
    for (name, value) in common::geometry_fixtures() {
        check(&name, &value);
        let text = common::read_fixture(&name);
        let again = if name.contains("parc") {
            serde_json::to_value(serde_json::from_str::<PencilArc>(&text).unwrap()).unwrap()
        } else {
            serde_json::to_value(serde_json::from_str::<HierarchicalArc>(&text).unwrap()).unwrap()
        };
        assert_eq!(again, value);
    }
}

#[test]
fn scheme_fixtures_match() {
    for (name, scheme) in common::schemes() {
        let value = serde_json::to_value(&scheme).unwrap();
        check(&name, &value);
        let back: Scheme = serde_json::from_str(&common::read_fixture(&name)).unwrap();
        assert!(back.is_verified(), "{name}");
        assert_eq!(back, scheme);
    }
}

#[test]
fn tampered_fixture_rejected() {
    let text = common::read_fixture("parc_q3_v28");
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["points"][0] = v["pencil"]["center"][0].clone();
    assert!(serde_json::from_value::<PencilArc>(v).is_err());
}
