mod common;

use common::{golden_path, read, run, CASES};

fn bless() -> bool {
    std::env::var_os("DIVSERIES_BLESS").is_some()
}

#[test]
fn golden_outputs() {
    let mut failed = Vec::new();
    for c in CASES {
        let (out, status) = run(c.args, c.env);
        assert_eq!(status, c.status, "{}: {}", c.name, String::from_utf8_lossy(&out));
        let path = golden_path(c.name);
        if bless() {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        if read(&path) != out {
            failed.push(c.name);
        }
    }
    assert!(failed.is_empty(), "golden mismatch: {failed:?} (rerun with DIVSERIES_BLESS=1 to update)");
}

#[test]
fn failures_prefix_every_line() {
    for c in CASES.iter().filter(|c| c.status != 0) {
        let (out, _) = run(c.args, c.env);
        let text = String::from_utf8(out).unwrap();
        assert!(!text.is_empty(), "{}", c.name);
        assert!(text.lines().all(|l| l.starts_with("ERROR: ")), "{}:\n{text}", c.name);
    }
}

#[test]
fn output_files_use_the_golden_series_format() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Vec<&str>); 4] = [
        ("toric_m3", vec!["toric-poincare", "--cyclic", "5", "2", "--m", "3", "--order", "30"]),
        ("zo_x52_reduce", vec!["zo", "tests/data/x52.json", "--reduce", "t", "--order", "10"]),
        ("hyp_m1", vec!["hyp-poincare", "--m", "1", "--order", "12"]),
        ("expand_two_vars", vec!["expand", "1/((1 - t^(1/2)*s)(1 - s^2))", "--vars", "t,s", "--order", "3"]),
    ];
    for (name, mut args) in runs {
        let file = dir.path().join(format!("{name}.series"));
        let file_arg = file.to_str().unwrap().to_string();
        args.extend(["--output", &file_arg]);
        let (_, status) = run(&args, &[]);
        assert_eq!(status, 0, "{name}");
        let golden = common::crate_dir().join("tests/golden").join(format!("{name}.series"));
        if bless() {
            std::fs::copy(&file, &golden).unwrap();
            continue;
        }
        assert_eq!(read(&file), read(&golden), "{name}");
    }
}

#[test]
fn weight_spellings_agree() {
    let a = run(&["toric-poincare", "--cyclic", "5", "2", "--m", "3", "--order", "30"], &[]);
    let b = run(&["toric-poincare", "--cyclic", "5", "2", "--weight", "1,3", "--order", "30"], &[]);
    assert_eq!(a, b);
}

#[test]
fn reduce_matches_toric_poincare() {
    // the P line of zo --reduce equals the enumerated toric series
    let series = |out: Vec<u8>, key: &str| {
        let text = String::from_utf8(out).unwrap();
        text.lines().find_map(|l| l.strip_prefix(key)).unwrap().to_string()
    };
    for m in 0..3u32 {
        let m_arg = m.to_string();
        let (zo, _) = run(&["zo", "--cyclic", "5", "2", "--blowups", &m_arg, "--reduce", "t", "--order", "20"], &[]);
        let (toric, _) = run(&["toric-poincare", "--cyclic", "5", "2", "--m", &m_arg, "--order", "20"], &[]);
        assert_eq!(series(zo, "P: "), series(toric, "enumerated: "), "m={m}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["converge"], &[]).1, 2);
    assert_eq!(run(&["no-such-command"], &[]).1, 2);
    assert_eq!(run(&["zo", "tests/data/missing.json"], &[]).1, 2);
    assert_eq!(run(&["--help"], &[]).1, 0);
}
