use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use eqbundle::format::{self, Fields};
use eqbundle::gen::Gen;
use eqbundle_core::bundle::TransitionCocycle;
use eqbundle_core::cyclotomic::CycField;
use eqbundle_core::equivariant::{
    build_from_canonical, CanonicalEntry, CanonicalForm, GroupContext, Parity,
};
use eqbundle_core::matgroup::{catalog, Representation};
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eqbundle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn eqbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqbundle"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn bd12_form() -> (CanonicalForm, GroupContext) {
    let g = Arc::new(catalog::binary_dihedral(3).unwrap());
    let ctx = GroupContext::new(g.clone()).unwrap();
    let cf = CanonicalForm {
        entries: vec![
            CanonicalEntry {
                degree: 2,
                parity: Parity::Plain,
                module: Representation::standard(&g).unwrap(),
            },
            CanonicalEntry {
                degree: -1,
                parity: Parity::Plain,
                module: Representation::trivial(&g, 1),
            },
        ],
    }
    .normalize()
    .unwrap();
    (cf, ctx)
}

#[test]
fn split_prints_the_splitting_type() {
    let f = CycField::new(1).unwrap();
    let e = TransitionCocycle::split(&f, &[-1, 3]);
    let path = scratch("diag.json");
    std::fs::write(&path, format::to_string(&format::cocycle_to_json(&e))).unwrap();
    let out = eqbundle(&["split", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["display"], "(3, -1)");
    assert_eq!(v["verified"], true);
}

#[test]
fn catalog_then_ext_split() {
    let path = scratch("d3.json");
    let out = eqbundle(&["catalog", "PGL:D2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = eqbundle(&["ext-split", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "does not split");
    assert_eq!(v["search_agrees"], true);
    assert_eq!(v["order"], 4);

    let out = eqbundle(&["catalog", "PGL:C3"]);
    let path = scratch("c3.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let v = stdout_json(&eqbundle(&["ext-split", "--input", path.to_str().unwrap()]));
    assert_eq!(v["verdict"], "splits");
}

#[test]
fn classify_twisted_bundle_and_compare() {
    let (cf, ctx) = bd12_form();
    let b = build_from_canonical(&cf, &ctx).unwrap();
    let twisted = Gen::new(7).twist(&b, 2).unwrap();
    let p1 = scratch("plain.json");
    let p2 = scratch("twisted.json");
    std::fs::write(&p1, format::to_string(&format::bundle_to_json(&b))).unwrap();
    std::fs::write(&p2, format::to_string(&format::bundle_to_json(&twisted))).unwrap();

    let out = eqbundle(&["classify", "--input", p2.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["degrees_display"], "(2, 2, -1)");
    assert_eq!(
        v["report"]["validation"]["violations"]
            .as_array()
            .unwrap()
            .len(),
        0
    );

    let out = eqbundle(&[
        "iso",
        "--input",
        p1.to_str().unwrap(),
        "--input",
        p2.to_str().unwrap(),
    ]);
    assert_eq!(stdout_json(&out)["isomorphic"], true);
}

#[test]
fn broken_action_is_a_mathematical_rejection() {
    let (cf, ctx) = bd12_form();
    let b = build_from_canonical(&cf, &ctx).unwrap();
    let mut file = format::bundle_to_json(&b);
    // swap the two generator actions
    let a0 = file.action["0"].clone();
    let a1 = file.action["1"].clone();
    file.action.insert("0".into(), a1);
    file.action.insert("1".into(), a0);
    let path = scratch("broken.json");
    std::fs::write(&path, format::to_string(&file)).unwrap();
    let out = eqbundle(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["class"], "mathematical_rejection");
}

#[test]
fn malformed_input_exits_with_two() {
    let path = scratch("garbage.json");
    std::fs::write(&path, "{\"rank\": 1}").unwrap();
    let out = eqbundle(&["split", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = eqbundle(&[
        "split",
        "--input",
        scratch("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sections_of_a_canonical_form() {
    let (cf, ctx) = bd12_form();
    let path = scratch("cf.json");
    std::fs::write(
        &path,
        format::to_string(&format::canonical_to_json(&cf, ctx.group())),
    )
    .unwrap();
    let v = stdout_json(&eqbundle(&["sections", "--input", path.to_str().unwrap()]));
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["transport_agrees"], true);
}

#[test]
fn modulus_override_lifts_inputs() {
    let g = catalog::cyclic(3).unwrap();
    let path = scratch("c3-group.json");
    std::fs::write(&path, format::to_string(&format::group_to_json(&g, None))).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut fields = Fields::new(Some(12));
    let lifted =
        format::group_from_json(&mut fields, &format::from_str(&text).unwrap(), 240).unwrap();
    assert_eq!(lifted.field().modulus(), 12);
    assert_eq!(lifted.order(), 3);
    let mut fields = Fields::new(Some(10));
    assert!(format::group_from_json(&mut fields, &format::from_str(&text).unwrap(), 240).is_err());
}

#[test]
fn verify_is_deterministic() {
    let a = eqbundle(&["verify", "--suite", "birkhoff", "--seed", "5", "--smoke"]);
    let b = eqbundle(&["verify", "--suite", "birkhoff", "--seed", "5", "--smoke"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
