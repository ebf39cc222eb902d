use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/knottorsion.h")).unwrap();
    let source = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in [
        "KtStatus",
        "KtComplex",
        "KtTolerance",
        "KtKnot",
        "KtPoint",
        "KtVanishing",
        "KtLevelSet",
        "KtConnectedSum",
    ] {
        assert!(
            header.contains(&format!("}} {ty};")) || header.contains(&format!("struct {ty} {ty};")),
            "{ty}"
        );
    }
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

/// Builds the static library in a private target directory, then compiles
/// and runs the C example against it.
#[test]
fn c_example_links_and_runs() {
    if !have_cc() {
        eprintln!("cc not found; skipping");
        return;
    }
    let workspace = crate_dir().join("../..");
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c-example");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "-p", "knottorsion-ffi", "--target-dir"])
        .arg(&target)
        .current_dir(&workspace)
        .status()
        .unwrap();
    assert!(status.success());
    let exe = target.join("level_set");
    let out = Command::new("cc")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("examples/level_set.c"))
        .arg(target.join("debug/libknottorsion_ffi.a"))
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("components = 11"), "{stdout}");
}
