use std::process::{Command, Output};

use arrowperm::{AlgebraElement, GeneratorWord, SignedPermutation};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrowperm"))
        .args(args)
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["perm", "parity", "[2,-1,3]"], 0),
        (&["perm", "parity", "[1,1]"], 2),
        (&["factorize", "[[1,2],[3,4]]"], 0),
        (&["factorize", "[[1,2],[2,4]]"], 3),
        (&["factorize", "not json"], 2),
        (&["so-factorize", "[[2,0],[0,0.5]]"], 3),
        (&["sl2-rbt", "[[1,2],[3,4]]"], 3),
        (&["closure", "--cap", "3", "[2,1]", "[-1,2]"], 1),
        (&["closure", "[2,1]", "[-1,2,3]"], 2),
        (&["span", "--degree", "0"], 2),
        (&["verify", "{\"n\":2,\"letters\":[]}", "[[2,0],[0,2]]"], 1),
        (&["no-such-command"], 2),
    ];
    for (args, code) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {o:?}");
    }
}

#[test]
fn factorize_output_verifies() {
    let m = "[[1,2,0],[0,-1,3],[4,0,1]]";
    let o = run(&["factorize", m]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let w = GeneratorWord::parse_json(&text).unwrap();
    assert_eq!(w.degree(), 3);
    let v = json(&run(&["verify", &text, m]));
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn perm_outputs_parse_back() {
    let o = run(&["perm", "compose", "[2,-3,1]", "[-1,3,2]"]);
    let p: SignedPermutation = String::from_utf8(o.stdout).unwrap().trim().parse().unwrap();
    let want = "[2,-3,1]"
        .parse::<SignedPermutation>()
        .unwrap()
        .compose(&"[-1,3,2]".parse().unwrap())
        .unwrap();
    assert_eq!(p, want);

    let v = json(&run(&["--seed", "9", "perm", "random", "--degree", "5"]));
    let images: Vec<i32> = serde_json::from_value(v["perm"].clone()).unwrap();
    assert_eq!(
        SignedPermutation::new(images).unwrap(),
        arrowperm::random_element(5, 9).unwrap()
    );
}

#[test]
fn algebra_outputs_parse_back() {
    let x = r#"{"n":2,"terms":[{"perm":[2,1],"coeff":"1/2"},{"perm":[-1,2],"coeff":"3"}]}"#;
    let o = run(&["algebra", "mul", x, x]);
    assert!(o.status.success());
    let got = AlgebraElement::parse_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let xe = AlgebraElement::parse_json(x).unwrap();
    assert_eq!(got, xe.mul(&xe).unwrap());
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("arrowperm-cli-{}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let o = run(&["--out", &p, "perm", "inverse", "[2,-3,1]"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.trim(), "[3,1,-2]");
}
