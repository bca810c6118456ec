use std::path::Path;
use std::process::{Command, Output};

fn qflag(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflag"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn podles_spectrum_csv_matches_the_classical_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "podles.cfg", "lie_type = A\nrank = 1\nr = 0\nn = 1\nq = 1.001\ncutoff = 6\n");
    let out = qflag(&["spectrum", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,lambda_coords,eigenvalue,multiplicity"));
    let rows: Vec<(f64, usize)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 6);
    for (e, m) in rows {
        let k = e.abs().round();
        assert!((e.abs() - k).abs() / k < 0.01);
        assert_eq!(m, 2 * k as usize);
    }
}

#[test]
fn certified_invariants_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = qflag(&["invariants", "--q", "1.05,1.2,2.0", "--cutoff", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(2) == Some("true")));
}

#[test]
fn q_below_one_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "q = 0.5\n");
    let out = qflag(&["spectrum", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1, ∞)"));
    let cfg = write(dir.path(), "typo.cfg", "rank = 1\ncutof = 3\n");
    let out = qflag(&["spectrum", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = qflag(&["spectrum", "--r", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for (path, threads) in [(&a, "1"), (&b, "4")] {
            let out = Command::new(env!("CARGO_BIN_EXE_qflag"))
                .args(["spectrum", "--q", "1.1,1.5", "--cutoff", "7", "--format", format, "--out"])
                .arg(path)
                .env("QFLAG_THREADS", threads)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(json["metadata"]["cutoff"], 7);
    assert_eq!(json["metadata"]["gauge"]["dplus"], "auto");
    assert!(json["metadata"]["version"].is_string());
    assert_eq!(json["rows"][0]["q"], 1.1);
}

#[test]
fn strict_mirror_policy_fails_on_a2() {
    let dir = tempfile::tempdir().unwrap();
    let out = qflag(&["spectrum", "--rank", "2", "--cutoff", "2", "--dplus", "mirror"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = qflag(&["spectrum", "--rank", "2", "--cutoff", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn info_lists_hom_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = qflag(&["info", "--cutoff", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("m,,1\n"));
    assert!(text.contains("dim_sigma,,2\n"));
    assert!(text.contains("hom_dim,1,2\n") && text.contains("hom_dim,3,2\n"));
}
