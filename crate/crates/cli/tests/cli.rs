use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hkl_with_env(args: &[&str], bound: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hkl"));
    cmd.args(args).env_remove("HK_BOUND");
    if let Some(b) = bound {
        cmd.env("HK_BOUND", b);
    }
    cmd.output().expect("hkl runs")
}

fn hkl(args: &[&str]) -> Output {
    hkl_with_env(args, None)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Keys appear in the documented order and every required key is present.
fn assert_matches_schema(value: &Value, schema: &Value) {
    let obj = value.as_object().expect("object output");
    let props: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    let mut last = 0;
    for key in obj.keys() {
        let pos = props
            .iter()
            .position(|p| *p == key)
            .unwrap_or_else(|| panic!("undocumented key {key}"));
        assert!(pos >= last, "key {key} out of documented order");
        last = pos;
    }
    for req in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(req.as_str().unwrap()), "missing {req}");
    }
}

#[test]
fn cones_reports_the_three_rays() {
    let out = hkl(&["cones", "--d", "1", "--v0", "0,1,-2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rays: Vec<String> = v["rays"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["label"].to_string())
        .collect();
    assert_eq!(rays, ["\"l\"", "\"h0\"", "\"h\""]);
    assert_eq!(v["completeness"], "proven_finite");
    assert_eq!(v["enumeration_bound"], 16);
    assert_matches_schema(&v, &schema("cones.schema.json"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["cones", "--v0", "0,1,-2"][..],
        &["moduli", "--v0", "0,1,-2"],
        &["fujiki-table", "--preset", "og10-L-theta"],
        &["reproduce-paper"],
    ] {
        assert_eq!(hkl(args).stdout, hkl(args).stdout, "{args:?}");
    }
}

#[test]
fn fujiki_solve_preset() {
    let out = hkl(&["fujiki-solve", "--preset", "og10-L-theta"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "q_L_Theta": 1 }));
}

#[test]
fn fujiki_solve_general_template() {
    let out = hkl(&[
        "fujiki-solve",
        "--template",
        "0,p;p,u",
        "--constraint",
        "4,6=-720",
        "--constraint",
        "3,7=2520",
    ]);
    let v = json(&out);
    assert_eq!(v["solutions"], serde_json::json!([{ "p": 1, "u": -2 }]));
    assert_matches_schema(&v, &schema("fujiki-solve.schema.json")["oneOf"][1]);
    let out = hkl(&[
        "fujiki-solve",
        "--template",
        "0,p;p,u",
        "--constraint",
        "4,6=-720",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p, u"));
}

#[test]
fn mw_rank_outputs() {
    let out = hkl(&["mw-rank", "--h22", "21"]);
    let v = json(&out);
    assert_eq!(
        v,
        serde_json::json!({ "mw_rank": 20, "rho_J": 22, "torsion_free": true })
    );
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["mw_rank", "rho_J", "torsion_free"]);
    assert_matches_schema(&v, &schema("mw-rank.schema.json"));
    assert_eq!(hkl(&["mw-rank", "--h22", "22"]).status.code(), Some(2));
    assert_eq!(
        hkl(&["mw-rank", "--ns-rank", "3", "--boundary", "2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        hkl(&["mw-rank", "--ns-rank", "3", "--no-section"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(json(&hkl(&["mw-rank", "--ns-rank", "22"]))["mw_rank"], 20);
}

#[test]
fn malformed_vector_is_a_usage_error() {
    let out = hkl(&["moduli", "--m", "2", "--v0", "0,1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 comma-separated integers"));
    assert_eq!(hkl(&["moduli", "--v0", "0,x,1"]).status.code(), Some(2));
    assert_eq!(hkl(&["moduli", "--v0", "0,2,-4"]).status.code(), Some(2));
    assert_eq!(hkl(&["cones"]).status.code(), Some(2));
}

#[test]
fn unsupported_inputs_exit_three() {
    // v0² = 0
    assert_eq!(hkl(&["moduli", "--v0", "0,0,1"]).status.code(), Some(3));
    // v0² = 4 has no wall computation
    assert_eq!(hkl(&["cones", "--v0", "1,1,-1"]).status.code(), Some(3));
    let big = [
        "fujiki-table",
        "--gram",
        "1,0,0,0,0;0,1,0,0,0;0,0,1,0,0;0,0,0,1,0;0,0,0,0,1",
    ];
    assert_eq!(hkl(&big).status.code(), Some(3));
}

#[test]
fn non_integral_table_exits_four() {
    let out = hkl(&["fujiki-table", "--gram", "0,1;1,-2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["integral"], false);
    assert_eq!(v["table"]["5,5"], "8/63");
    assert_matches_schema(&v, &schema("fujiki-table.schema.json"));
}

#[test]
fn bound_comes_from_flag_then_environment() {
    let from_env = json(&hkl_with_env(&["cones", "--v0", "0,1,-2"], Some("3")));
    assert_eq!(from_env["enumeration_bound"], 3);
    assert_eq!(from_env["completeness"], "bounded_search_only");
    let flag_wins = json(&hkl_with_env(
        &["cones", "--v0", "0,1,-2", "--bound", "7"],
        Some("3"),
    ));
    assert_eq!(flag_wins["enumeration_bound"], 7);
    assert_eq!(
        hkl(&["cones", "--v0", "0,1,-2", "--bound", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn moduli_and_mukai_match_schemas() {
    let v = json(&hkl(&["moduli", "--m", "2", "--v0", "0,1,-2", "--d", "1"]));
    assert_eq!(v["dimension"], 10);
    assert_eq!(v["ns_gram"], serde_json::json!([[0, 1], [1, 2]]));
    assert_matches_schema(&v, &schema("moduli.schema.json"));
    let v = json(&hkl(&[
        "mukai", "--v0", "0,1,-2", "--with", "1,-1,2", "--tensor", "1",
    ]));
    assert_eq!(v["pairing"], 0);
    assert_eq!(
        v["tensored"],
        serde_json::json!({ "r": 0, "a": 1, "b": 0, "d": 1 })
    );
    assert_matches_schema(&v, &schema("mukai.schema.json"));
}

#[test]
fn reproduce_subcommand_passes_and_detects_mutation() {
    let out = hkl(&["reproduce-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_matches_schema(&v, &schema("reproduce-paper.schema.json"));
    let out = hkl(&["reproduce-paper", "--mukai-gram", "0,0,-1;0,4,0;-1,0,0"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(json(&out)["failed"].as_u64().unwrap() > 0);
}

#[test]
fn text_format_is_readable() {
    let out = hkl(&["cones", "--v0", "0,1,-2", "--relabel", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("<L, H0>  Nef(J)"), "{text}");
    assert!(text.contains("Theta = (-1,1,-2)"), "{text}");
    let out = hkl(&["reproduce-paper", "--format", "text"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .ends_with("25 passed, 0 failed\n"));
}
