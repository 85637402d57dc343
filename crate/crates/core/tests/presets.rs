use std::fs;

use arm_core::cli::{run_cli, EXIT_OK};
use arm_core::presets::{plan, FIGURE_IDS};
use arm_core::RunManifest;

#[test]
fn every_preset_runs_scaled_down() {
    let dir = tempfile::tempdir().unwrap();
    for id in FIGURE_IDS {
        let out = dir.path().join(id);
        let code = run_cli([
            "arm",
            "preset",
            id,
            "-o",
            out.to_str().unwrap(),
            "--iterations",
            "2",
            "--scale-steps",
            "0.002",
        ]);
        assert_eq!(code, EXIT_OK, "{id}");
        let manifest = RunManifest::load(&out.join("manifest.json")).unwrap();
        assert!(manifest.missing_artifacts().is_empty(), "{id}");
        let p = plan(id, 0).unwrap();
        let expected = p.runs.len() + p.sweeps.iter().map(|s| 2 + s.fit as usize).sum::<usize>();
        assert!(manifest.artifacts.len() >= expected, "{id}");
    }
}

#[test]
fn fig8_snapshots_bracket_the_shock() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig8");
    let code = run_cli(["arm", "preset", "fig8", "-o", out.to_str().unwrap(), "--scale-steps", "0.01"]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(out.join("fig8_delta0.4_snapshots.csv")).unwrap();
    let steps: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert!(steps.contains(&"5000") && steps.contains(&"5010") && steps.contains(&"25000"));
}
