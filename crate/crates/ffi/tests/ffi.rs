use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use glimm_ffi::*;

const GAS: GlimmGas = GlimmGas {
    gamma: 1.4,
    r_gas: 1.0,
    q_heat: 0.0,
};

fn state(u: f64, v: f64, p: f64, rho: f64, z: f64) -> GlimmState {
    GlimmState { u, v, p, rho, z }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(glimm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

const RUN: &str = r#"
mode = "cauchy"
seed = 3
[mesh]
l = 0.0625
cells = 16
strips = 12
[initial.far_field]
mach = 2.0
angle_deg = 0.0
[[initial.table]]
at = 0.0
state = { u = 2.2, v = 0.05, p = 1.2, rho = 1.5, z = 0.0 }
"#;

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(glimm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn interior_fan_links_both_states() {
    let below = state(2.4, 0.0, 1.0, 1.4, 0.0);
    let above = state(2.3, 0.05, 1.1, 1.45, 0.0);
    let mut fan = GlimmFan::default();
    let st = unsafe { glimm_solve_interior(&GAS, &below, &above, &mut fan) };
    assert_eq!(st, GlimmStatus::Ok, "{}", last_error());
    let (b, a) = (fan.states[0], fan.states[5]);
    assert_eq!((b.u, b.p), (below.u, below.p));
    assert!((a.u - above.u).abs() < 1e-10 && (a.rho - above.rho).abs() < 1e-10);
    assert_eq!(fan.has_strong, 0);
}

#[test]
fn lateral_turn_aligns_with_wall() {
    let s = state(2.366, 0.0, 1.0, 1.4, 0.0);
    let mut fan = GlimmFan::default();
    let wall = 4f64.to_radians();
    let st = unsafe { glimm_solve_lateral(&GAS, &s, wall, 1, &mut fan) };
    assert_eq!(st, GlimmStatus::Ok, "{}", last_error());
    let top = fan.states[5];
    assert!((top.v.atan2(top.u) - wall).abs() < 1e-10);
}

#[test]
fn errors_map_to_status_codes() {
    let s = state(2.366, 0.0, 1.0, 1.4, 0.0);
    let mut fan = GlimmFan::default();
    let bad = GlimmGas { gamma: 0.9, ..GAS };
    assert_eq!(
        unsafe { glimm_solve_interior(&bad, &s, &s, &mut fan) },
        GlimmStatus::Config
    );
    assert!(last_error().contains("gamma"));
    assert_eq!(
        unsafe { glimm_solve_interior(&GAS, ptr::null(), &s, &mut fan) },
        GlimmStatus::NullPointer
    );
    let subsonic = state(0.5, 0.0, 1.0, 1.4, 0.0);
    let st = unsafe { glimm_solve_interior(&GAS, &subsonic, &s, &mut fan) };
    assert!(
        matches!(st, GlimmStatus::Config | GlimmStatus::Numerical),
        "{st:?}"
    );
}

#[test]
fn react_conserves_and_burns() {
    let gas = GlimmGas { q_heat: 2.0, ..GAS };
    let rate = GlimmRate {
        kind: GlimmRateKind::Constant,
        a: 1.0,
        b: 0.0,
    };
    let s = state(2.366, 0.0, 1.0, 1.4, 0.5);
    let mut out = GlimmState::default();
    let st = unsafe { glimm_react(&gas, &rate, &s, 0.1, &mut out) };
    assert_eq!(st, GlimmStatus::Ok, "{}", last_error());
    assert!(out.z < 0.5 && out.z > 0.0);
    // mass flux is unchanged by the reaction
    assert!((out.rho * out.u - s.rho * s.u).abs() < 1e-12);

    let st = unsafe { glimm_react(&gas, &rate, &s, -1.0, &mut out) };
    assert_eq!(st, GlimmStatus::InvalidArgument);
}

#[test]
fn run_handle_exposes_tables() {
    let cfg = CString::new(RUN).unwrap();
    let mut run: *mut GlimmRun = ptr::null_mut();
    let st = unsafe { glimm_run_new(cfg.as_ptr(), &mut run) };
    assert_eq!(st, GlimmStatus::Ok, "{}", last_error());
    assert!(!run.is_null());
    unsafe {
        assert_eq!(glimm_run_strips(run), 12);
        let summary = CStr::from_ptr(glimm_run_summary_json(run))
            .to_str()
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(summary).unwrap();
        assert_eq!(v["strips"], 12);
        let diag = CStr::from_ptr(glimm_run_diagnostics_csv(run))
            .to_str()
            .unwrap();
        assert!(diag.starts_with("k,"));
        // header, the initial strip and one row per marched strip
        assert_eq!(diag.lines().count(), 14);
        let field = CStr::from_ptr(glimm_run_field_csv(run)).to_str().unwrap();
        assert!(field.lines().count() > 16);

        let mut len = 0usize;
        let st = glimm_run_last_states(run, ptr::null_mut(), 0, &mut len);
        assert_eq!(st, GlimmStatus::InvalidArgument);
        assert_eq!(len, 16);
        let mut buf = vec![GlimmState::default(); len];
        let st = glimm_run_last_states(run, buf.as_mut_ptr(), buf.len(), &mut len);
        assert_eq!(st, GlimmStatus::Ok);
        assert!(buf.iter().all(|s| s.p > 0.0 && s.rho > 0.0 && s.u > 0.0));
        glimm_run_free(run);
        glimm_run_free(ptr::null_mut());
    }
}

#[test]
fn run_rejects_bad_config() {
    let cfg = CString::new("mode = \"cauchy\"\n[gas]\ngamma = 1.0\n").unwrap();
    let mut run: *mut GlimmRun = ptr::null_mut();
    let st = unsafe { glimm_run_new(cfg.as_ptr(), &mut run) };
    assert_eq!(st, GlimmStatus::Config);
    assert!(run.is_null());
    assert!(last_error().starts_with("gas.gamma"), "{}", last_error());
    assert_eq!(
        unsafe { glimm_run_new(ptr::null(), &mut run) },
        GlimmStatus::NullPointer
    );
}

#[test]
fn header_declares_every_entry_point() {
    let h =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/glimm.h")).unwrap();
    for name in [
        "glimm_version",
        "glimm_last_error",
        "glimm_solve_interior",
        "glimm_solve_lateral",
        "glimm_react",
        "glimm_run_new",
        "glimm_run_free",
        "glimm_run_strips",
        "glimm_run_summary_json",
        "glimm_run_diagnostics_csv",
        "glimm_run_field_csv",
        "glimm_run_last_states",
        "typedef struct GlimmRun GlimmRun",
        "GLIMM_STATUS_NULL_POINTER = 4",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libglimm_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let root = env!("CARGO_MANIFEST_DIR");
    let out = Command::new("cc")
        .arg(format!("{root}/tests/c/smoke.c"))
        .arg(format!("-I{root}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("ok\n"));
}
