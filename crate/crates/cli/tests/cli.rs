use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relmetric"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn scene(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const SLIT_SQUARE: &str = r#"{"domain":{"outer":[[0,0],[1,0],[1,1],[0,1]],"slits":[[[0.5,0],[0.5,0.5]]]},
 "points":{"a":[0,0],"c":[1,1],"s":[0.5,0.25],"l":[0.2,0.1],"r":[0.8,0.1]}}"#;

#[test]
fn gen_counts() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("comb.json");
    let (code, text) = run(&["gen", "comb", "--depth", "8", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "teeth-segments"), "31");
    assert_eq!(field(&text, "boundary-segments"), "35");

    let (code, text) = run(&["gen", "family", "--levels", "2", "-o", d.path().join("f.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "obstacle-segments"), "45");

    let (code, text) = run(&["gen", "spiral", "--coils", "40", "--pitch", "1e-3", "-o", d.path().join("s.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "obstacle-segments"), "2560");
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let (_, a) = run(&["gen", "random", "--seed", "4"]);
    let (_, b) = run(&["gen", "random", "--seed", "4"]);
    assert_eq!(a, b);
    let d = tempfile::tempdir().unwrap();
    let p = scene(d.path(), "r.json", &a);
    let (code, m1) = run(&["matrix", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, m2) = run(&["matrix", p.to_str().unwrap()]);
    assert_eq!(m1, m2);
    assert!(m1.starts_with(",p00,p01"));
}

#[test]
fn dist_values_and_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = scene(d.path(), "sq.json", SLIT_SQUARE);
    let p = p.to_str().unwrap();
    let (code, text) = run(&["dist", p, "a", "c"]);
    assert_eq!(code, 0);
    assert!(field(&text, "value").starts_with("1.4142135"));
    // slit point without a side
    let (code, _) = run(&["dist", p, "a", "s"]);
    assert_eq!(code, 1);
    let (code, text) = run(&["dist", p, "l", "r"]);
    assert_eq!(code, 0);
    // around the slit tip (0.5, 0.5): twice a 0.3-0.4-0.5 triangle
    assert_eq!(field(&text, "value"), "1");

    let wall = scene(
        d.path(),
        "wall.json",
        r#"{"obstacles":{"boundary":[[0,0],[1,0],[1,1],[0,1]],"segments":[[[0.5,0],[0.5,1]]]},
            "points":{"a":[0.25,0.5],"b":[0.75,0.5]}}"#,
    );
    let (code, text) = run(&["dist", wall.to_str().unwrap(), "a", "b"]);
    assert_eq!(code, 2);
    assert_eq!(field(&text, "value"), "inf");

    let bad = scene(d.path(), "bad.json", r#"{"domain":{"outer":[[0,0],[1,0],[0,1]]},"colour":"red"}"#);
    assert_eq!(run(&["dist", bad.to_str().unwrap(), "a", "b"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn comb_distance_grows() {
    let d = tempfile::tempdir().unwrap();
    let mut vals = Vec::new();
    for n in ["8", "16"] {
        let p = d.path().join(format!("c{n}.json"));
        run(&["gen", "comb", "--depth", n, "-o", p.to_str().unwrap()]);
        let (code, text) = run(&["dist", p.to_str().unwrap(), "E", "cap"]);
        assert_eq!(code, 0);
        vals.push(field(&text, "value").parse::<f64>().unwrap());
    }
    assert!(vals[1] > vals[0]);
}

#[test]
fn checks() {
    let d = tempfile::tempdir().unwrap();
    let (_, r) = run(&["gen", "random", "--seed", "11", "--boundary-slits", "2"]);
    let rp = scene(d.path(), "r.json", &r);
    let (code, text) = run(&["check", rp.to_str().unwrap(), "metric"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "triangle-violations"), "0");

    let sq = scene(d.path(), "sq.json", SLIT_SQUARE);
    let (code, text) = run(&["check", sq.to_str().unwrap(), "geodesic", "--p", "l", "--q", "r"]);
    assert_eq!(code, 0);
    assert!(field(&text, "max-deviation").parse::<f64>().unwrap() <= 1e-6);

    let l = scene(d.path(), "l.json", r#"{"domain":{"outer":[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}}"#);
    let svg = d.path().join("l.svg");
    let (code, text) = run(&["check", l.to_str().unwrap(), "circ", "--m", "16", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(field(&text, "witness").contains("touch the boundary"));
    assert!(std::fs::read_to_string(svg).unwrap().contains("<svg"));
}

#[test]
fn construction_targets() {
    let (code, text) = run(&["paper", "bound6", "--levels", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "threshold"), "5.94");
    assert!(field(&text, "length").parse::<f64>().unwrap() >= 5.94);

    let (code, text) = run(&["paper", "thm22", "--levels", "2"]);
    assert_eq!(code, 0);
    assert!(field(&text, "chain").contains(">= 2.4 > 2 ="));
    assert_eq!(field(&text, "escape-constant"), "4.92820323028");

    let d = tempfile::tempdir().unwrap();
    let csv = d.path().join("comb.csv");
    let (code, text) = run(&["paper", "comb", "--depths", "4,8,16", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "strictly-increasing"), "true");
    let table = std::fs::read_to_string(csv).unwrap();
    assert_eq!(table.lines().count(), 4);

    let (code, text) = run(&["paper", "star1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "coils"), "3");
}

#[test]
fn compare_domains() {
    let d = tempfile::tempdir().unwrap();
    let sq = scene(d.path(), "a.json", r#"{"domain":{"outer":[[0,0],[1,0],[1,1],[0,1]]}}"#);
    // square turned by atan(4/3) and moved
    let rot = scene(d.path(), "b.json", r#"{"domain":{"outer":[[3,1],[3.6,1.8],[2.8,2.4],[2.2,1.6]]}}"#);
    let rect = scene(d.path(), "c.json", r#"{"domain":{"outer":[[0,0],[2,0],[2,1],[0,1]]}}"#);
    let (code, text) = run(&["compare", sq.to_str().unwrap(), rot.to_str().unwrap(), "--m", "8"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "isometric"), "true");
    assert_eq!(field(&text, "congruent"), "true");
    let (_, text) = run(&["compare", sq.to_str().unwrap(), rect.to_str().unwrap(), "--m", "8"]);
    assert_eq!(field(&text, "isometric"), "false");

    let ngon = |phase: f64| {
        let v: Vec<String> = (0..128)
            .map(|k| {
                let t = phase + std::f64::consts::TAU * k as f64 / 128.0;
                format!("[{},{}]", t.cos(), t.sin())
            })
            .collect();
        format!(r#"{{"domain":{{"outer":[{}]}}}}"#, v.join(","))
    };
    let d1 = scene(d.path(), "d1.json", &ngon(0.0));
    let d2 = scene(d.path(), "d2.json", &ngon(0.3));
    let (code, text) = run(&["compare", d1.to_str().unwrap(), d2.to_str().unwrap(), "--m", "32", "--transfer"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "transfer"), "confirmed");
}
