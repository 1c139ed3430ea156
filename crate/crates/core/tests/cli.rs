use std::process::Command;

use defectlab::project::{fixture_names, ProjectFile};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_defectlab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn documented_examples() {
    assert_eq!(run(&["ext", "Z/4", "Z/6"]).1, "Z/2\n");
    assert_eq!(run(&["residue", "--fixture", "ice-pole"]).1, "8\n");
    assert_eq!(run(&["check-cocycle", "--fixture", "paths"]).1, "ok\n");
    assert_eq!(run(&["homology", "--fixture", "ice", "--kind", "conway-lagarias"]).1, "Z\n");
}

#[test]
fn emitted_fixtures_reload() {
    let dir = std::env::temp_dir().join(format!("defectlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, tiles) in [("ice", 6), ("paths", 21), ("ice-cubes-3d", 20), ("dominoes", 4)] {
        let (code, stdout, _) = run(&["fixtures", "emit", name]);
        assert_eq!(code, 0);
        let p = ProjectFile::from_json(&stdout).unwrap();
        assert_eq!(p.sft.alphabet.len(), tiles, "{name}");
        let path = dir.join(format!("{name}.json"));
        run(&["fixtures", "emit", name, "-o", path.to_str().unwrap()]);
        assert_eq!(ProjectFile::load(&path).unwrap(), p);
    }
    // A file project works like the fixture.
    let path = dir.join("ice.json");
    assert_eq!(run(&["residue", path.to_str().unwrap(), "--config", "ice-pole"]).1, "8\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn listing_covers_every_fixture() {
    let (_, stdout, _) = run(&["fixtures", "list"]);
    assert_eq!(stdout.lines().map(String::from).collect::<Vec<_>>(), fixture_names());
}

#[test]
fn analysis_errors_exit_two_with_json() {
    let (code, _, stderr) = run(&["tilt", "--fixture", "domino-gap"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(v["error"], "no-nontrivial-pseudonorm");
    let (code, _, stderr) = run(&["residue", "--fixture", "ice-pole", "--config", "missing"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown-name"));
}

#[test]
fn analyze_prints_report_and_map() {
    let (code, stdout, _) = run(&["analyze", "--fixture", "ice-pole", "--map"]);
    assert_eq!(code, 0);
    let json_end = stdout.find("\n}\n").unwrap() + 2;
    let v: serde_json::Value = serde_json::from_str(&stdout[..json_end]).unwrap();
    assert_eq!(v["residues"][0]["residue"]["z"][0], 8);
    assert!(stdout[json_end..].contains('#'));
}

#[test]
fn commands_are_deterministic() {
    let args = ["tilt", "--fixture", "ice-gap"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn evolve_and_homology() {
    let (code, stdout, _) = run(&["evolve", "--fixture", "ice-pole", "--ca", "shift(1,0)", "--steps", "1"]);
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["residues_constant"], true);
    assert_eq!(run(&["homology", "--fixture", "golden-mean", "--kind", "invariant", "--radius", "1", "--coeff", "Z/2"]).1, "Z/2+Z/2+Z/2\n");
}

#[test]
fn every_subcommand_has_help() {
    for cmd in ["fixtures", "residue", "analyze", "tilt", "poles", "evolve", "homology", "check-cocycle", "cohomologous", "ext"] {
        let (code, stdout, stderr) = run(&[cmd, "--help"]);
        assert_eq!(code, 0, "{cmd}: {stderr}");
        assert!(stdout.contains("Usage"), "{cmd}");
    }
}

#[test]
fn cohomologous_finds_the_trivial_transfer() {
    let (code, stdout, stderr) =
        run(&["cohomologous", "--fixture", "ice", "--first", "ice-height", "--second", "ice-height", "--int-range", "1"]);
    assert_eq!(code, 0, "{stderr}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["outcome"], "found");
}
