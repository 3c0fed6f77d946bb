use std::path::Path;
use std::process::{Command, Output};

fn fracnoise(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracnoise"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> String {
    let o = fracnoise(args, out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn artifacts_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["carpet", "--n", "120", "--init", "gaussian:1", "--tmax", "300", "--dt", "0.5"];
    ok(&[&base[..], &["--name", "one", "--threads", "1"]].concat(), dir.path());
    ok(&[&base[..], &["--name", "many", "--threads", "4"]].concat(), dir.path());
    let read = |n: &str| std::fs::read(dir.path().join(format!("{n}-carpet.pgm"))).unwrap();
    let (one, many) = (read("one"), read("many"));
    // the name comment is the only line allowed to differ
    let strip = |b: &[u8], name: &str| {
        let line = format!("# name={name}\n");
        let at = b.windows(line.len()).position(|w| w == line.as_bytes()).unwrap();
        [&b[..at], &b[at + line.len()..]].concat()
    };
    assert_eq!(strip(&one, "one"), strip(&many, "many"));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# time slice\nn = 60\naxis = time:30\ninit = local:1\n").unwrap();
    ok(&["fracdim", "--config", cfg.to_str().unwrap(), "--name", "x"], dir.path());
    ok(&["fracdim", "--n", "60", "--axis", "time:30", "--init", "local:1", "--name", "x2"], dir.path());
    let report = |n: &str| {
        std::fs::read_to_string(dir.path().join(format!("{n}-dimension.txt")))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# name="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(report("x"), report("x2"));
    assert!(report("x").contains("# axis=time:30"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "n = 60\n").unwrap();
    let stdout = ok(&["spectrum", "--config", cfg.to_str().unwrap(), "--n", "31"], dir.path());
    assert!(stdout.contains("31"), "{stdout}");
}

#[test]
fn slice_tsv_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["slice", "--n", "40", "--axis", "space:7.5", "--name", "s"], dir.path());
    let curve = fracnoise_core::io::read_curve_tsv(&dir.path().join("s-slice.tsv")).unwrap();
    assert_eq!(curve.len(), 40);
    let total: f64 = curve.ordinate().iter().sum();
    assert!((total - 1.0).abs() < 1e-10, "{total}");
}

#[test]
fn bad_values_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracnoise(&["carpet", "--n", "x"], dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("'n'"), "{err}");

    let o = fracnoise(&["preset", "fig99"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fig2a"));
}

#[test]
fn preset_list_names_every_preset() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracnoise")).args(["preset", "--list"]).output().unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    for (name, _) in fracnoise_cli::PRESETS {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
