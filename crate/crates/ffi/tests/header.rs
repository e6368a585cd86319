use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mislab.h")
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "MISLAB_STATUS_OK = 0",
        "MISLAB_STATUS_CAP_EXCEEDED = 3",
        "typedef struct MislabGraph MislabGraph",
        "typedef struct MislabScheme MislabScheme",
        "typedef struct MislabTranscript MislabTranscript",
        "mislab_graph_parse(",
        "mislab_run_scheme(",
        "mislab_decode(",
        "mislab_experiment_json(",
        "mislab_last_error_message(void)",
        "mislab_string_free(",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
    assert!(h.contains("#ifndef MISLAB_H"));
    assert!(h.contains("extern \"C\""));
}

// Compiles and runs a C program against the static library when a C
// compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
    else {
        eprintln!("skipped: no C compiler");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libmislab_ffi.a");
    if !lib.exists() {
        eprintln!("skipped: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("16 vertices"));
}
