use gkmkalc::cli::run;
use gkmkalc::fan::{Fan, Surface};
use gkmkalc::gkm::PiecewiseClass;
use gkmkalc::{toric, IntPoly};

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gkmkalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn p1_graph() -> String {
    let g = toric::gkm_from_fan(&Fan::surface_catalog(Surface::P1)).unwrap();
    scratch("p1.json", &g.to_json().to_string())
}

#[test]
fn member_and_violation_exit_codes() {
    let g = p1_graph();
    let good = PiecewiseClass::new(vec![IntPoly::character(&[1]), IntPoly::character(&[0])]);
    // 2 chi and 1 differ by 1 at chi = 1, so 1 - chi cannot divide them
    let two_chi = &IntPoly::character(&[1]) + &IntPoly::character(&[1]);
    let bad = PiecewiseClass::new(vec![two_chi, IntPoly::character(&[0])]);
    let good = scratch("good.json", &good.to_json().to_string());
    let bad = scratch("bad.json", &bad.to_json().to_string());
    assert_eq!(run(["gkmkalc", "member", g.as_str(), good.as_str()]).code, 0);
    let out = run(["gkmkalc", "member", g.as_str(), bad.as_str()]);
    assert_eq!(out.code, 1, "{}", out.stdout);
}

#[test]
fn malformed_input_exits_two() {
    let g = scratch("broken.json", "{ not json");
    assert_eq!(run(["gkmkalc", "member", g.as_str(), g.as_str()]).code, 2);
    assert_eq!(run(["gkmkalc", "no-such-command"]).code, 2);
}

#[test]
fn json_envelope() {
    let out = run(["gkmkalc", "--json", "-", "toric", "gkm", "P2"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["graph"]["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn catalog_ring_check_passes() {
    let out = run(["gkmkalc", "catalog", "Fn", "--n", "2", "--check-ring", "20"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
}
