//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "padelab.h"

int main(void) {
    PadelabCase *c = NULL;
    PadelabSeries *s = NULL;
    PadelabRoots *r = NULL;
    if (padelab_case_two_bus(-1.0 / 3.0, 1.0, &c) != PADELAB_STATUS_OK) return 10;
    if (padelab_series_hem(c, 2, 24, &s) != PADELAB_STATUS_OK) return 11;
    if (padelab_roots_diagonal(s, 10, &r) != PADELAB_STATUS_OK) return 12;
    size_t n = 0;
    if (padelab_roots_copy(r, PADELAB_ROOT_KIND_POLES, PADELAB_PLANE_INVERSE, NULL, NULL, 0, &n)
        != PADELAB_STATUS_BUFFER_TOO_SMALL) return 13;
    double re[64], im[64];
    if (padelab_roots_copy(r, PADELAB_ROOT_KIND_POLES, PADELAB_PLANE_INVERSE, re, im, 64, &n) != PADELAB_STATUS_OK) return 14;
    printf("%zu", n);
    for (size_t k = 0; k < n; k++) printf(" %.17g", re[k]);
    printf("\n");
    if (padelab_series_hem(c, 99, 4, &s) != PADELAB_STATUS_INVALID_CASE) return 15;
    if (strstr(padelab_last_error(), "99") == NULL) return 16;
    padelab_roots_free(r);
    padelab_series_free(s);
    padelab_case_free(c);
    return 0;
}
"#;

fn staticlib() -> Option<PathBuf> {
    // the test binary lives in target/<profile>/deps, next to the archive
    // built for this run; the copy one level up is only refreshed by `cargo build`
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    [deps.join("libpadelab_ffi.a"), deps.parent()?.join("libpadelab_ffi.a")].into_iter().find(|p| p.exists())
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let Some(lib) = staticlib() else {
        eprintln!("static library not built, skipping");
        return;
    };
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed:\n{}", String::from_utf8_lossy(&out.stderr));

    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    let text = String::from_utf8(run.stdout).unwrap();
    let mut it = text.split_whitespace();
    let n: usize = it.next().unwrap().parse().unwrap();
    let re: Vec<f64> = it.map(|t| t.parse().unwrap()).collect();
    assert_eq!(re.len(), n);

    let case = padelab::hem::calibrate_two_bus(-1.0 / 3.0, 1.0).unwrap();
    let s = padelab::hem::hem_series(&case, 24).unwrap().voltage(2).unwrap().clone();
    let (_, rs) = padelab::pade::diagonal_roots(&s, 10).unwrap();
    assert_eq!(re, rs.poles_inv.iter().map(|z| z.re).collect::<Vec<_>>());
}

#[test]
fn header_is_current() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/padelab.h")).unwrap();
    for sym in [
        "padelab_case_from_matpower",
        "padelab_case_from_native",
        "padelab_case_two_bus",
        "padelab_series_hem",
        "padelab_roots_copy",
        "padelab_cf_hat",
        "padelab_segment_capacity",
        "padelab_last_error",
        "typedef struct PadelabCase PadelabCase;",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}
