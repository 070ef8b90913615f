use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "cheeger.h"

int main(void) {
    CheegerDomain *d = NULL;
    if (cheeger_domain_build_porous(0.2, 1.0, 5, &d) != CHEEGER_STATUS_OK) return 1;
    CheegerMeasures m;
    if (cheeger_domain_measure(d, &m) != CHEEGER_STATUS_OK) return 2;
    if (!m.has_delta || !(m.delta_hi < 1.0 / 128.0)) return 3;
    cheeger_domain_free(d);
    if (cheeger_domain_build_porous(0.3, 1.0, 5, &d) != CHEEGER_STATUS_INVALID_PARAMETERS) return 4;
    printf("%s\n", cheeger_last_error_message());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let target = target_dir();
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "--lib", "-p", "cheeger-ffi", "--target-dir"])
        .arg(target.parent().unwrap())
        .status()
        .expect("cargo");
    assert!(built.success());
    let lib = target.join("libcheeger_ffi.a");
    assert!(lib.is_file(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).contains("(ii)"));
}
