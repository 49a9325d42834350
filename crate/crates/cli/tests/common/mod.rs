use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub env: &'static [(&'static str, &'static str)],
    pub status: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], status: i32) -> Case {
    Case { name, args, env: &[], status }
}

pub const CASES: &[Case] = &[
    case("toric_m3", &["toric-poincare", "--cyclic", "5", "2", "--weight", "1,3", "--order", "30"], 0),
    case("toric_smoke", &["toric-poincare", "--cyclic", "2", "1", "--weight", "1,0", "--order", "5"], 0),
    case("toric_cone_file", &["toric-poincare", "--cone", "tests/data/cone52.json", "--m", "2", "--order", "12"], 0),
    case("toric_two_weights", &["toric-poincare", "--cyclic", "5", "2", "--weight", "1,0", "--weight", "1,1", "--order", "4"], 0),
    case("toric_bad_weight", &["toric-poincare", "--cyclic", "5", "2", "--weight", "0,1", "--order", "10"], 2),
    case("zo_x52", &["zo", "tests/data/x52.json"], 0),
    case("zo_x52_reduce", &["zo", "tests/data/x52.json", "--reduce", "t", "--order", "10"], 0),
    case("zo_blowups_2", &["zo", "--cyclic", "5", "2", "--blowups", "2", "--reduce", "t", "--order", "15"], 0),
    case("zo_minus_one", &["zo", "tests/data/minus_one.json", "--order", "4"], 0),
    case("blowup_quadric", &["blowup-val", "--quadric", "4", "--poly", "x*y-z^2"], 0),
    case("blowup_quadric_x", &["blowup-val", "--quadric", "0", "--poly", "x"], 0),
    case("blowup_script", &["blowup-val", "--script", "tests/data/quadric_m2.json", "--poly", "x*y-z^2"], 0),
    case("blowup_branch", &["blowup-val", "--branch", "tests/data/cusp.json", "--m", "3", "--poly", "y-x"], 0),
    case("blowup_uncertified", &["blowup-val", "--branch", "tests/data/cusp.json", "--m", "1", "--poly", "y^2-x^3"], 3),
    case("blowup_parse_error", &["blowup-val", "--quadric", "1", "--poly", "x +* y"], 2),
    case("hyp_m1", &["hyp-poincare", "--m", "1", "--order", "12"], 0),
    case("converge_toric", &["converge", "--toric", "5", "2", "--order", "10", "--mmax", "12"], 0),
    case("converge_quadric", &["converge", "--quadric", "--order", "10", "--mmax", "12"], 0),
    case("converge_quadric_trivial", &["converge", "--quadric", "--order", "0", "--mmax", "0"], 0),
    case("converge_branch", &["converge", "--branch", "tests/data/e6.json", "--order", "8", "--mmax", "9"], 0),
    case("converge_short_mmax", &["converge", "--quadric", "--order", "5", "--mmax", "3"], 2),
    case("expand", &["expand", "(1 + t)/(1 - t)^2", "--order", "6"], 0),
    case("expand_two_vars", &["expand", "1/((1 - t^(1/2)*s)(1 - s^2))", "--vars", "t,s", "--order", "3"], 0),
    case("expand_bad_denominator", &["expand", "1/(1 + t)", "--order", "3"], 2),
    Case {
        name: "expand_env_order",
        args: &["expand", "1/(1 - t)"],
        env: &[("DIVSERIES_ORDER", "3")],
        status: 0,
    },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.txt"))
}

/// Runs the binary from the crate directory so fixture paths stay relative.
pub fn run(args: &[&str], env: &[(&str, &str)]) -> (Vec<u8>, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_divseries"));
    cmd.current_dir(crate_dir()).args(args).env_remove("DIVSERIES_ORDER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (out.stdout, out.status.code().expect("exited"))
}

#[allow(dead_code)]
pub fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
