use paradiff::harness::output::{emit_table, Table};
use paradiff::harness::SUITES;
use std::path::Path;
use std::process::Command;

fn paradiff() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paradiff"))
}

fn run_config(dir: &Path, toml: &str, out: &Path) -> std::process::Output {
    let cfg = dir.join("cfg.toml");
    std::fs::write(&cfg, toml).unwrap();
    paradiff().args(["run", "--config"]).arg(&cfg).arg("--out").arg(out).output().unwrap()
}

const LP: &str = "experiment = \"lp-suite\"\nseed = 3\ntrials = 5\n[grid]\nn = 256\n";

#[test]
fn list_prints_every_suite() {
    let out = paradiff().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), SUITES.to_vec());
}

#[test]
fn lp_suite_passes_and_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run_config(dir.path(), LP, &out_dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(out_dir.join("lp_residuals.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        for v in r.iter().skip(1) {
            assert!(v.parse::<f64>().unwrap() <= 1e-12);
        }
    }
    assert!(out_dir.join("report.txt").exists());
}

#[test]
fn bad_configs_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        "experiment = \"lp-suite\"\n[grid]\nn = 100\n",
        "experiment = \"nope\"\n",
        "experiment = \"lp-suite\"\nunknown_key = 1\n",
        "this is not toml",
    ] {
        let out = run_config(dir.path(), bad, &dir.path().join("out"));
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
    let out = paradiff().args(["run", "--config", "/nonexistent/cfg.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run_config(dir.path(), LP, &a).status.success());
    assert!(run_config(dir.path(), LP, &b).status.success());
    for name in ["lp_residuals.csv", "bernstein.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
    }
}

#[test]
fn empty_table_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    emit_table(dir.path(), &Table::new("empty", &["a", "b"])).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("empty.csv")).unwrap(), "a,b\n");
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for s in SUITES {
        let c = paradiff::harness::ExperimentConfig::from_path(&root.join(format!("{s}.toml"))).unwrap();
        assert_eq!(c, {
            let mut d = paradiff::harness::ExperimentConfig::default_for(s).unwrap();
            d.tolerances.clear();
            d
        });
    }
}
