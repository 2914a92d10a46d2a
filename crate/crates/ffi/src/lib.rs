//! C interface to the solver.
//!
//! Every fallible function returns a [`GlimmStatus`]; on failure the
//! message is available from [`glimm_last_error`] on the same thread.
//! Runs are held behind the opaque [`GlimmRun`] handle.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use glimm_core::config::parse_config;
use glimm_core::output::csv_string;
use glimm_core::reaction::react_state;
use glimm_core::riemann::{solve_interior, solve_lateral, WallSide, WaveFan};
use glimm_core::run::{run, RunResult};
use glimm_core::{GasConstants, GasState, GlimmError, ReactionRate};

/// Result codes. The numeric values of `Io`, `Config` and `Numerical`
/// match the exit codes of the command line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlimmStatus {
    Ok = 0,
    Io = 1,
    Config = 2,
    Numerical = 3,
    NullPointer = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GlimmGas {
    pub gamma: f64,
    pub r_gas: f64,
    pub q_heat: f64,
}

/// Primitive state `(u, v, p, rho, z)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GlimmState {
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub rho: f64,
    pub z: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlimmRateKind {
    Constant = 0,
    Arrhenius = 1,
    AffineFloor = 2,
}

/// Reaction rate. `Constant` uses `a` as the value; `Arrhenius` uses `a`
/// as the temperature exponent and `b` as the activation energy;
/// `AffineFloor` uses `a` as the slope and `b` as the floor.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GlimmRate {
    pub kind: GlimmRateKind,
    pub a: f64,
    pub b: f64,
}

/// Riemann fan: five strengths and the six states between the waves,
/// bottom first. `has_strong` is 1 when a tracked strong 1-shock of slope
/// `strong_slope` replaces the first wave.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GlimmFan {
    pub strengths: [f64; 5],
    pub states: [GlimmState; 6],
    pub has_strong: i32,
    pub strong_slope: f64,
}

/// Completed run.
pub struct GlimmRun {
    result: RunResult,
    summary_json: CString,
    diagnostics_csv: CString,
    field_csv: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &GlimmError) -> GlimmStatus {
    match e.exit_code() {
        1 => GlimmStatus::Io,
        2 => GlimmStatus::Config,
        _ => GlimmStatus::Numerical,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (GlimmStatus, String)>>(f: F) -> GlimmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GlimmStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GlimmStatus::Panic
        }
    }
}

fn core_err(e: GlimmError) -> (GlimmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GlimmStatus, String) {
    (GlimmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GlimmStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

impl From<GlimmState> for GasState {
    fn from(s: GlimmState) -> Self {
        GasState {
            u: s.u,
            v: s.v,
            p: s.p,
            rho: s.rho,
            z: s.z,
        }
    }
}

impl From<GasState> for GlimmState {
    fn from(s: GasState) -> Self {
        GlimmState {
            u: s.u,
            v: s.v,
            p: s.p,
            rho: s.rho,
            z: s.z,
        }
    }
}

fn gas_of(g: &GlimmGas) -> Result<GasConstants, (GlimmStatus, String)> {
    GasConstants::new(g.gamma, g.r_gas, g.q_heat).map_err(core_err)
}

fn fan_out(f: &WaveFan) -> GlimmFan {
    GlimmFan {
        strengths: f.strengths,
        states: f.states.map(GlimmState::from),
        has_strong: f.strong.is_some() as i32,
        strong_slope: f.strong.unwrap_or(0.0),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn glimm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or an empty string. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn glimm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Solves the interior Riemann problem between `below` and `above`.
///
/// # Safety
/// All pointers must be valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn glimm_solve_interior(
    gas: *const GlimmGas,
    below: *const GlimmState,
    above: *const GlimmState,
    out: *mut GlimmFan,
) -> GlimmStatus {
    guard(|| {
        let g = gas_of(read(gas, "gas")?)?;
        let (b, a) = (*read(below, "below")?, *read(above, "above")?);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let f = solve_interior(&b.into(), &a.into(), &g).map_err(core_err)?;
        *out = fan_out(&f);
        Ok(())
    })
}

/// Turns `state` along a wall of direction `wall_angle` (radians). With
/// `wall_above` non-zero the fluid lies below the wall.
///
/// # Safety
/// All pointers must be valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn glimm_solve_lateral(
    gas: *const GlimmGas,
    state: *const GlimmState,
    wall_angle: f64,
    wall_above: i32,
    out: *mut GlimmFan,
) -> GlimmStatus {
    guard(|| {
        let g = gas_of(read(gas, "gas")?)?;
        let s = *read(state, "state")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let side = if wall_above != 0 {
            WallSide::Above
        } else {
            WallSide::Below
        };
        let f = solve_lateral(&s.into(), wall_angle, side, &g).map_err(core_err)?;
        *out = fan_out(&f);
        Ok(())
    })
}

/// Applies one reaction step of length `tau`.
///
/// # Safety
/// All pointers must be valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn glimm_react(
    gas: *const GlimmGas,
    rate: *const GlimmRate,
    state: *const GlimmState,
    tau: f64,
    out: *mut GlimmState,
) -> GlimmStatus {
    guard(|| {
        let g = gas_of(read(gas, "gas")?)?;
        let r = read(rate, "rate")?;
        let rate = match r.kind {
            GlimmRateKind::Constant => ReactionRate::Constant { value: r.a },
            GlimmRateKind::Arrhenius => ReactionRate::Arrhenius {
                alpha: r.a,
                activation: r.b,
            },
            GlimmRateKind::AffineFloor => ReactionRate::AffineFloor {
                slope: r.a,
                floor: r.b,
            },
        };
        if let Err(k) = rate.validate() {
            return Err((
                GlimmStatus::InvalidArgument,
                format!("rate parameter {k} is invalid"),
            ));
        }
        if !(tau >= 0.0) {
            return Err((
                GlimmStatus::InvalidArgument,
                "tau must be nonnegative".into(),
            ));
        }
        let s = *read(state, "state")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = react_state(&s.into(), tau, &g, &rate)
            .map_err(core_err)?
            .into();
        Ok(())
    })
}

/// Parses the TOML configuration `config` (a cauchy or wedge mode) and
/// runs it to completion. On success `*out` owns a handle to release with
/// [`glimm_run_free`].
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_new(
    config: *const c_char,
    out: *mut *mut GlimmRun,
) -> GlimmStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(config).to_str().map_err(|_| {
            (
                GlimmStatus::InvalidArgument,
                "config is not UTF-8".to_string(),
            )
        })?;
        let mut cfg = parse_config(text).map_err(core_err)?;
        let (scheme, opts) = cfg.build().map_err(core_err)?;
        let result = run(&scheme, &opts).map_err(core_err)?;
        let text = |s: String| CString::new(s).map_err(|e| (GlimmStatus::Io, e.to_string()));
        let summary_json = text(
            serde_json::to_string(&result.summary).map_err(|e| (GlimmStatus::Io, e.to_string()))?,
        )?;
        let diagnostics_csv = text(csv_string(&result.rows).map_err(core_err)?)?;
        let field_csv = text(csv_string(&result.field).map_err(core_err)?)?;
        *out = Box::into_raw(Box::new(GlimmRun {
            result,
            summary_json,
            diagnostics_csv,
            field_csv,
        }));
        Ok(())
    })
}

/// Releases a run. Null is ignored.
///
/// # Safety
/// `run` must come from [`glimm_run_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_free(run: *mut GlimmRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of strips marched, or 0 for a null handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_strips(run: *const GlimmRun) -> usize {
    run.as_ref().map_or(0, |r| r.result.summary.strips)
}

/// Run summary as JSON, owned by the handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_summary_json(run: *const GlimmRun) -> *const c_char {
    run.as_ref()
        .map_or(ptr::null(), |r| r.summary_json.as_ptr())
}

/// Per-strip diagnostics table as CSV, owned by the handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_diagnostics_csv(run: *const GlimmRun) -> *const c_char {
    run.as_ref()
        .map_or(ptr::null(), |r| r.diagnostics_csv.as_ptr())
}

/// Field table as CSV (strips selected by `output.field_stride`), owned by
/// the handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_field_csv(run: *const GlimmRun) -> *const c_char {
    run.as_ref().map_or(ptr::null(), |r| r.field_csv.as_ptr())
}

/// Copies the cell states of the last strip, bottom first, into `buf`.
/// `*len` receives the cell count; `GLIMM_STATUS_INVALID_ARGUMENT` is
/// returned when `cap` is smaller.
///
/// # Safety
/// `buf` must hold `cap` states; `run` and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn glimm_run_last_states(
    run: *const GlimmRun,
    buf: *mut GlimmState,
    cap: usize,
    len: *mut usize,
) -> GlimmStatus {
    guard(|| {
        let r = read(run, "run")?;
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        let states = &r.result.last.states;
        *len = states.len();
        if cap < states.len() {
            return Err((
                GlimmStatus::InvalidArgument,
                format!("buffer holds {cap} states, need {}", states.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, s) in states.iter().enumerate() {
            *buf.add(i) = (*s).into();
        }
        Ok(())
    })
}
