use hyperloc_cli::output::Table;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn hyperloc(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperloc"))
        .args(args)
        .arg("--out")
        .arg(out)
        .current_dir(root())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn col(t: &Table, name: &str) -> Vec<String> {
    let j = t.column(name).unwrap();
    t.rows.iter().map(|r| r[j].clone()).collect()
}

#[test]
fn plane_wave_expansion_keeps_even_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["expand", "--config", "configs/expand_plane_wave.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("expand_fit.csv")).unwrap();
    let ls = col(&t, "l");
    let kept = col(&t, "kept");
    assert_eq!(ls.len(), 81);
    for (l, k) in ls.iter().zip(&kept) {
        if l.parse::<usize>().unwrap() % 2 == 1 {
            assert_eq!(k, "false");
        }
    }
    let e = std::fs::read_to_string(dir.path().join("expansion.json")).unwrap();
    assert!(e.contains("\"parity\": \"even\""), "{e}");
}

#[test]
fn single_mode_expansion_has_one_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["expand", "--config", "configs/expand_single_mode.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("expand_fit.csv")).unwrap();
    let kept: Vec<_> = t.rows.iter().filter(|r| r[6] == "true").collect();
    assert_eq!(kept.len(), 1);
    assert_eq!((kept[0][0].as_str(), kept[0][1].as_str()), ("3", "4"));
    assert!((kept[0][2].parse::<f64>().unwrap() - 2.5).abs() <= 1e-8);
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(root().join("configs/localize_harmonic_d3.toml"))
        .unwrap()
        .replace("n_radial = 64", "n_radial = \"many\"");
    std::fs::write(&cfg, text).unwrap();
    let o = hyperloc(&["localize", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.n_radial"), "{}", stderr(&o));

    std::fs::write(&cfg, "schema_version = 1\nd = [").unwrap();
    let o = hyperloc(&["expand", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn harmonic_end_to_end_from_checked_in_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["localize", "--config", "configs/localize_harmonic_d3.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("localize.csv")).unwrap();
    assert_eq!(t.header, ["nhat", "kappa", "lambda", "c0_error", "c1_error", "slope"]);
    assert_eq!(t.rows.len(), 1);
    let c0: f64 = t.rows[0][3].parse().unwrap();
    let c1: f64 = t.rows[0][4].parse().unwrap();
    assert!(c0 <= 0.05 && c1 <= 0.2, "{c0} {c1}");
    assert!(dir.path().join("localize.json").exists());
}

#[test]
fn coulomb_annulus_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["localize", "--config", "configs/localize_coulomb_annulus.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("localize.csv")).unwrap();
    assert!(t.rows[0][3].parse::<f64>().unwrap() <= 0.05);
    assert_eq!(t.rows[0][4], "");
}

#[test]
fn odd_target_with_even_parity_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["localize", "--config", "configs/localize_parity_mismatch.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parity"), "{}", stderr(&o));
    assert!(!dir.path().join("localize.csv").exists());
}

#[test]
fn verify_eigen_residuals_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["verify", "eigen-residuals"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("closest to tolerance"), "{s}");
    let t = Table::read_csv(&dir.path().join("verify_eigen-residuals.csv")).unwrap();
    let worst = col(&t, "value").iter().map(|v| v.parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-6);
}

#[test]
fn verify_heat_recurrence_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["verify", "heat-recurrence"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn failing_suite_exits_one_with_worst_defect() {
    // the Coulomb flat-limit ratio misses its band
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["verify", "limits"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("worst defect: coulomb flat-limit"), "{}", stdout(&o));
}

#[test]
fn unknown_suite_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["verify", "no-such-suite"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn heat_commands_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["heat", "kernel", "--d", "2", "--kappa", "0.5", "--times", "1", "--radii", "0,1"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("heat_kernel.csv")).unwrap();
    assert_eq!(t.rows.len(), 2);
    // d = 2 has both neighbours; the recurrence stencil needs rho > 0
    assert_eq!(t.rows[0][4], "");
    assert!(t.rows[1][4].parse::<f64>().unwrap() <= 1e-4);

    let o = hyperloc(&["heat", "solve", "--d", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("`d`"));

    let o = hyperloc(&["heat", "solve", "--times", "0.5", "--radii", "0,0.5"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&dir.path().join("heat_solve.csv")).unwrap();
    assert_eq!(t.rows.len(), 4);
}

#[test]
fn config_file_takes_precedence_over_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["heat", "kernel", "--config", "configs/heat_kernel_d3.toml", "--d", "5"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("d=3"));
}

#[test]
fn csv_starts_with_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperloc(&["verify", "degeneracy"], dir.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("verify_degeneracy.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tool: hyperloc "));
    assert_eq!(lines[1], "# command: verify degeneracy");
    assert!(lines[2].starts_with("# config_sha256: ") && lines[2].len() == 17 + 64);
    assert_eq!(lines[3], "suite,check,value,tolerance,pass");
}
