//! The command-line front end: subcommands, config handling and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use parkforge::synth::sample_park;
use parkforge::PipelineConfig;

fn parkforge(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parkforge"))
        .args(args)
        .current_dir(cwd)
        .env_remove("PARKFORGE_OUT")
        .output()
        .expect("binary runs")
}

fn plan_in(dir: &Path) -> String {
    let path = dir.join("plan.png");
    sample_park().rasterize(0.5).unwrap().save_png(&path).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn config_init_prints_loadable_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let out = parkforge(&["config-init"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut parsed = PipelineConfig::from_toml(&text).unwrap();
    let defaults = PipelineConfig::default();
    assert_eq!(parsed.palette().unwrap(), defaults.palette().unwrap());
    parsed.palette.clear();
    assert_eq!(parsed, defaults);

    let out = parkforge(&["config-init", "park.toml"], tmp.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(tmp.path().join("park.toml")).unwrap(), text);
}

#[test]
fn overlapping_palette_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "[palette.water]\ncolor = [40, 140, 40]\ntolerance = 20\n";
    std::fs::write(tmp.path().join("bad.toml"), cfg).unwrap();
    let plan = plan_in(tmp.path());
    let out = parkforge(&["--config", "bad.toml", "segment", &plan], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("water") && err.contains("green_space"), "{err}");
}

#[test]
fn unknown_config_key_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("typo.toml"), "[build]\nsed = 4\n").unwrap();
    let out = parkforge(&["--config", "typo.toml", "pipeline", "plan.png"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sed"));
}

#[test]
fn missing_input_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = parkforge(&["vectorize", "nowhere"], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("mask_green_space.png"));
}

#[test]
fn pipeline_honours_out_and_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let plan = plan_in(tmp.path());
    let run = |dir: &str, seed: &str| {
        let out = parkforge(&["--out", dir, "--seed", seed, "pipeline", &plan], tmp.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(tmp.path().join(dir).join("manifest.json")).unwrap()
    };
    let (a, b, c) = (run("a", "5"), run("b", "5"), run("c", "6"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let plan = plan_in(tmp.path());
    let out = Command::new(env!("CARGO_BIN_EXE_parkforge"))
        .args(["segment", &plan])
        .current_dir(tmp.path())
        .env("PARKFORGE_OUT", "from_env")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(tmp.path().join("from_env/mask_water.png").is_file());
}
