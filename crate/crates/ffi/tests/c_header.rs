//! Compiles a small C program against the generated header and, when the
//! static library is present, links and runs it. Skips without a C compiler.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "qso.h"

int main(void) {
    QsoOpSpec spec = { 1, 0.3, 0.6, 0.9 };
    QsoTensor *t = NULL;
    if (qso_op_family(spec, &t) != QSO_STATUS_OK) return 1;
    if (qso_tensor_dim(t) != 3) return 2;

    size_t perm[3] = { 2, 3, 1 };
    QsoTensor *w = NULL;
    if (qso_conjugate(t, perm, 3, &w) != QSO_STATUS_OK) return 3;
    QsoOpSpec out;
    if (qso_classify_op(w, &out) != QSO_STATUS_OK || out.family != 5) return 4;

    bool flag = true;
    if (qso_is_volterra(t, &flag) != QSO_STATUS_OK || flag) return 5;

    double x0[3] = { 0.7, 0.1, 0.2 };
    QsoTrajectory *tr = NULL;
    if (qso_iterate(t, x0, 3, 100, 1e-10, &tr) != QSO_STATUS_OK) return 6;
    char *csv = NULL;
    if (qso_trajectory_to_csv(tr, &csv) != QSO_STATUS_OK) return 7;
    if (strncmp(csv, "iter,x1,x2,x3,status", 20) != 0) return 8;
    qso_string_free(csv);
    qso_trajectory_free(tr);

    double bad[8] = { 0 };
    QsoTensor *b = NULL;
    if (qso_tensor_new(2, bad, 8, false, &b) != QSO_STATUS_INVALID_TENSOR) return 9;
    if (qso_last_error_message() == NULL) return 10;

    qso_tensor_free(w);
    qso_tensor_free(t);
    printf("ok %s\n", qso_version());
    return 0;
}
"#;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// `target/<profile>` of the running test binary.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    exe.parent()
        .and_then(Path::parent)
        .expect("target/<profile>/deps")
        .to_path_buf()
}

#[test]
fn header_compiles_as_c99() {
    let Some(cc) = compiler() else {
        eprintln!("skipped: no C compiler");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(include_dir())
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success(), "header does not compile as C99");
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("skipped: no C compiler");
        return;
    };
    let lib = profile_dir().join("libqso_ffi.a");
    if !lib.exists() {
        eprintln!("skipped: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "linking against the static library failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
