use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("epsdens.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).expect("header generated by build.rs");
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15, "{exports:?}");
    for f in exports {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    for t in [
        "typedef struct EpsdensIdeal EpsdensIdeal;",
        "typedef struct EpsdensDensity EpsdensDensity;",
        "EPSDENS_STATUS_OK = 0",
    ] {
        assert!(text.contains(t), "{t}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("use.c");
    std::fs::write(
        &c,
        r#"#include "epsdens.h"
int main(void) {
    EpsdensOptions o;
    EpsdensIdeal *i = 0;
    EpsdensDensity *d = 0;
    char *s = 0;
    double v;
    if (epsdens_options_default(&o) != EPSDENS_STATUS_OK) return 1;
    if (epsdens_ideal_parse_json("{}", &i) == EPSDENS_STATUS_OK) return 1;
    epsdens_ordinary_density(i, &o, &d);
    epsdens_density_eval(d, 1, 2, &s, &v);
    epsdens_string_free(s);
    epsdens_density_free(d);
    epsdens_ideal_free(i);
    return epsdens_last_error_message() == 0;
}
"#,
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header().parent().unwrap())
        .arg(&c)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
