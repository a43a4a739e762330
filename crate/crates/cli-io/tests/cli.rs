use std::path::{Path, PathBuf};
use std::process::Command;

use cli_io::{
    compare_rows, execute, read_series, sweep, Formulation, InitialStateSpec, ModelSpec,
    RunConfig, SweepAxis, WavefreeScheme,
};

fn spin_config(formulation: Formulation) -> RunConfig {
    RunConfig {
        model: ModelSpec::SpinHalf { mu: 1.0, b: 1.0 },
        formulation,
        initial: InitialStateSpec::Explicit {
            modulus: vec![0.3_f64.sin(), 0.3_f64.cos()],
            phase: vec![-std::f64::consts::FRAC_PI_2, 0.0],
        },
        dt: 1e-3,
        horizon: 1.0,
        ensemble_size: None,
        seed: 7,
        record_every: Some(10),
        scheme: None,
        bandwidth: None,
        tolerances: None,
    }
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qtraj-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn qtraj(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qtraj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, config: &RunConfig) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

#[test]
fn fixed_seed_reruns_are_byte_identical() {
    let dir = temp_dir("determinism");
    let mut config = spin_config(Formulation::Wavefree);
    config.seed = 7;
    let cfg = write_config(&dir, &config);
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out in [&out_a, &out_b] {
        let status = qtraj(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--quiet",
        ]);
        assert!(status.status.success(), "{status:?}");
    }
    for file in ["series.csv", "diagnostics.json"] {
        let a = std::fs::read(out_a.join(file)).unwrap();
        let b = std::fs::read(out_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between reruns");
    }
}

#[test]
fn series_files_carry_the_config_hash() {
    let dir = temp_dir("hash");
    let config = spin_config(Formulation::Reference);
    let cfg = write_config(&dir, &config);
    let out = qtraj(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(out.status.success());
    let hash = cli_io::config_hash(&config);
    let series = std::fs::read_to_string(dir.join("series.csv")).unwrap();
    assert!(series.starts_with(&format!("# config-hash {hash}")));
    let manifest: cli_io::Manifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.hash, hash);
    assert_eq!(manifest.seed, 7);
    assert_eq!(manifest.config, config);
}

#[test]
fn negative_dt_is_rejected_naming_the_field() {
    let dir = temp_dir("baddt");
    let mut config = spin_config(Formulation::Reference);
    config.dt = -1.0;
    let cfg = write_config(&dir, &config);
    let out = qtraj(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("dt"), "stderr: {stderr}");
}

#[test]
fn wavefree_spin_run_tracks_the_reference() {
    let mut config = spin_config(Formulation::Wavefree);
    config.dt = 1e-4;
    config.record_every = Some(100);
    let wavefree = execute(&config).unwrap();
    config.formulation = Formulation::Reference;
    let reference = execute(&config).unwrap();
    let report = compare_rows(&wavefree.rows, &reference.rows, "P").unwrap();
    assert!(report.sup < 1e-6, "sup {}", report.sup);
}

#[test]
fn compare_of_a_run_with_itself_is_zero_and_respects_tolerance_exit() {
    let dir = temp_dir("selfcompare");
    let cfg = write_config(&dir, &spin_config(Formulation::Reference));
    let run = qtraj(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(run.status.success());
    let series = dir.join("series.csv");
    let series = series.to_str().unwrap();

    let same = qtraj(&["compare", series, series, "--quantity", "P", "--tolerance", "0"]);
    assert!(same.status.success(), "{same:?}");
    let stdout = String::from_utf8_lossy(&same.stdout);
    assert!(stdout.contains("\"sup\":0"), "stdout: {stdout}");

    // An impossible negative tolerance forces the failure path.
    let fail = qtraj(&["compare", series, series, "--tolerance=-1"]);
    assert_eq!(fail.status.code(), Some(3));
}

#[test]
fn csv_round_trip_preserves_every_bit() {
    let dir = temp_dir("roundtrip");
    let config = spin_config(Formulation::Wavefree);
    let artifacts = execute(&config).unwrap();
    let path = dir.join("series.csv");
    cli_io::write_series(&path, "deadbeef", &artifacts.rows).unwrap();
    let back = read_series(&path).unwrap();
    assert_eq!(back.len(), artifacts.rows.len());
    for (a, b) in artifacts.rows.iter().zip(&back) {
        assert_eq!(a.t.to_bits(), b.t.to_bits());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.quantity, b.quantity);
        assert_eq!(a.index, b.index);
    }
}

fn packet_config() -> RunConfig {
    RunConfig {
        model: ModelSpec::Circle {
            cells: 256,
            spacing: 1.0,
            mass: 1.0,
            potential: None,
        },
        formulation: Formulation::F3Hydro,
        initial: InitialStateSpec::GaussianPacket {
            center: 128.0,
            width: 40.0,
            momentum_quanta: 8,
        },
        dt: 0.4,
        horizon: 40.0,
        ensemble_size: None,
        seed: 0,
        record_every: Some(10),
        scheme: None,
        bandwidth: None,
        tolerances: None,
    }
}

#[test]
fn hydrodynamic_packet_stays_close_to_the_reference() {
    let mut reference = packet_config();
    reference.formulation = Formulation::Reference;
    let hydro = execute(&packet_config()).unwrap();
    let exact = execute(&reference).unwrap();
    let report = compare_rows(&hydro.rows, &exact.rows, "P").unwrap();
    assert!(report.rel_l2 < 1e-2, "rel l2 {}", report.rel_l2);
}

#[test]
fn dt_sweep_on_the_explicit_scheme_fits_first_order() {
    let mut config = spin_config(Formulation::Wavefree);
    config.scheme = Some(WavefreeScheme::Explicit);
    config.record_every = Some(100);
    let report = sweep(&config, SweepAxis::Dt, &[2e-3, 1e-3, 5e-4]).unwrap();
    assert!(
        (0.8..=1.2).contains(&report.fitted_order),
        "order {}, points {:?}",
        report.fitted_order,
        report.points
    );
}

#[test]
fn spacing_sweep_fits_first_order() {
    let mut config = packet_config();
    config.model = ModelSpec::Circle {
        cells: 64,
        spacing: 0.25,
        mass: 1.0,
        potential: None,
    };
    config.initial = InitialStateSpec::GaussianPacket {
        center: 8.0,
        width: 1.6,
        momentum_quanta: 4,
    };
    let report = sweep(&config, SweepAxis::Spacing, &[0.25, 0.125, 0.0625]).unwrap();
    assert!(
        (0.75..=1.3).contains(&report.fitted_order),
        "order {}, points {:?}",
        report.fitted_order,
        report.points
    );
}

#[test]
fn ensemble_sweep_scales_as_inverse_root_m() {
    let config = RunConfig {
        model: ModelSpec::Circle {
            cells: 64,
            spacing: 1.0,
            mass: 1.0,
            potential: None,
        },
        formulation: Formulation::F2Ensemble,
        initial: InitialStateSpec::PlaneWave { q: 0 },
        dt: 1e-3,
        horizon: 1e-2,
        ensemble_size: Some(1000),
        seed: 11,
        record_every: Some(10),
        scheme: None,
        bandwidth: None,
        tolerances: None,
    };
    let report = sweep(&config, SweepAxis::EnsembleSize, &[1e3, 1e4, 1e5]).unwrap();
    assert!(
        (-0.8..=-0.25).contains(&report.fitted_order),
        "order {}, points {:?}",
        report.fitted_order,
        report.points
    );
}
