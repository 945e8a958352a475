use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use eqloc::flowmodel::{FlowSystem, EXAMPLE_NAMES};
use eqloc::io::{from_json, to_json, CurveDoc, DatumDoc};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn eqloc(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eqloc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut si = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            si.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str], stdin: Option<&str>) -> Run {
    let r = eqloc(args, stdin);
    assert_eq!(r.code, 0, "{args:?} failed: {}", r.stderr);
    r
}

fn pipeline(example: &str) -> Run {
    let flow = ok(&["examples", "emit", example], None);
    let datum = ok(&["flow-derive", "-"], Some(&flow.stdout));
    ok(&["localize", "-"], Some(&datum.stdout))
}

#[test]
fn real_line_pipeline() {
    let r = pipeline("real_line").json();
    assert_eq!(r["m"], 1);
    assert_eq!(r["r_free"], 1);
    assert_eq!(r["r_tor"], 0);
    assert_eq!(r["coker_poly_text"], "0");
}

#[test]
fn plane_pipeline_normalizes_at_two() {
    assert_eq!(pipeline("plane_antipodal").json()["m"], 2);
}

#[test]
fn free_swap_datum_is_torsion() {
    let r = ok(&["localize", &data("free_swap_datum.json")], None).json();
    assert_eq!((r["r_free"].as_u64(), r["r_tor"].as_u64()), (Some(0), Some(1)));
}

#[test]
fn mumford_check_text() {
    let r = ok(&["mumford", "check", &data("m1_triple.json")], None);
    assert!(r.stderr.contains("det identity: pass; fixed locus: pass"), "{}", r.stderr);
    assert_eq!(r.json()["det_identity"], true);
}

#[test]
fn mumford_round_trip_over_f101() {
    let path = data("divisor_f101.json");
    let m = ok(&["mumford", "to-matrix", &path], None);
    let d = ok(&["mumford", "to-divisor", "-"], Some(&m.stdout));
    let original: CurveDoc = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let back: CurveDoc = from_json(&d.stdout).unwrap();
    assert_eq!(back.divisor, original.divisor);
    let c = ok(&["--self-check", "mumford", "check", "-"], Some(&m.stdout));
    assert!(c.json()["self_check"].as_array().unwrap().iter().all(|x| x["passed"] == true));
}

#[test]
fn reruns_are_byte_identical() {
    for name in EXAMPLE_NAMES {
        assert_eq!(pipeline(name).stdout, pipeline(name).stdout);
    }
    let a = ok(&["ss-pages", &data("swap_complex.json")], None);
    let b = ok(&["ss-pages", &data("swap_complex.json")], None);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn examples_round_trip() {
    for name in EXAMPLE_NAMES {
        let emitted = ok(&["examples", "emit", name], None).stdout;
        let parsed: FlowSystem = from_json(&emitted).unwrap();
        assert_eq!(to_json(&parsed), emitted, "{name}");
        let datum = ok(&["flow-derive", "-"], Some(&emitted)).stdout;
        let d: DatumDoc = from_json(&datum).unwrap();
        assert_eq!(to_json(&d), datum, "{name}");
    }
}

#[test]
fn examples_list_names_every_example() {
    let r = ok(&["examples", "list"], None).json();
    let names: Vec<&str> = r["examples"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    for n in EXAMPLE_NAMES {
        assert!(names.contains(&n));
    }
}

#[test]
fn borel_on_swap_complex() {
    let r = ok(&["borel", &data("swap_complex.json")], None).json();
    assert_eq!((r["r_free"].as_u64(), r["r_tor"].as_u64()), (Some(0), Some(1)));
    assert_eq!(r["uct"]["passed"], true);
}

#[test]
fn twisted_weight_kills_cohomology() {
    assert_eq!(ok(&["twisted", &data("twisted_one_plus_q.json")], None).json()["total_dim"], 0);
}

#[test]
fn self_check_passes_on_examples() {
    for name in EXAMPLE_NAMES {
        let flow = ok(&["examples", "emit", name], None).stdout;
        let r = ok(&["--self-check", "validate", "-"], Some(&flow)).json();
        let checks = r["self_check"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["passed"] == true), "{name}: {checks:?}");
    }
}

#[test]
fn precision_override_agrees() {
    let datum = ok(&["flow-derive", "-"], Some(&ok(&["examples", "emit", "circle_reflection"], None).stdout)).stdout;
    let a = ok(&["equiv", "-"], Some(&datum)).json();
    let b = ok(&["--precision", "20", "equiv", "-"], Some(&datum)).json();
    assert_eq!(a["invariants"], b["invariants"]);
    assert_eq!(b["precision"], 20);
}

#[test]
fn exit_codes() {
    let parse = eqloc(&["validate", "-"], Some("{not json"));
    assert_eq!(parse.code, 2);
    assert_eq!(parse.json()["error"]["kind"], "ParseError");

    let bad_square = r#"{"generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}, {"name": "c", "degree": 2}],
        "differential": [["a", "b"], ["b", "c"]]}"#;
    let r = eqloc(&["validate", "-"], Some(bad_square));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["error"]["kind"], "DifferentialNotSquareZero");

    let r = eqloc(&["examples", "emit", "torus"], None);
    assert_eq!((r.code, r.json()["error"]["kind"].as_str()), (1, Some("UnknownExample")));

    let r = eqloc(&["examples", "emit", "product(real_line, real_line)"], None);
    assert_eq!(r.code, 0);
    let r = eqloc(&["flow-derive", "-"], Some(&r.stdout));
    assert_eq!((r.code, r.json()["error"]["kind"].as_str()), (1, Some("UnsupportedProduct")));
}

#[test]
fn parse_errors_name_the_path() {
    let doc = r#"{"i_anti": 0, "inv_generators": [{"name": "p", "degree": 0}],
        "non_generators": [{"name": "x", "degree": 0}], "U": [["x", "nowhere"]]}"#;
    let r = eqloc(&["validate", "-"], Some(doc));
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("U[0]"), "{}", r.stdout);
}

#[test]
fn cohomology_and_smith_report() {
    let datum = ok(&["flow-derive", "-"], Some(&ok(&["examples", "emit", "circle_reflection"], None).stdout)).stdout;
    let c = ok(&["cohomology", "-"], Some(&datum)).json();
    assert_eq!(c["total"], 2);
    let s = ok(&["smith-report", "-"], Some(&datum)).json();
    assert_eq!(s["equality"], true);
    assert_eq!(s["e1_degenerate"], true);
}
