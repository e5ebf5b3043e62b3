//! C ABI over `torsal`.
//!
//! Every entry point returns a [`TorsalStatus`]. On a non-zero status the
//! message is available from [`torsal_last_error`] on the same thread until the
//! next call. Strings handed out by the library are released with
//! [`torsal_string_free`]; models with [`torsal_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use torsal::cohomology::Space;
use torsal::generators::{verify, ChoiceSet, Choices, Generators, Suite};
use torsal::input::ArrangementSpec;
use torsal::toric::ToricModel;
use torsal::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsalStatus {
    Ok = 0,
    /// A verification ran and at least one check failed.
    CheckFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    /// A caller buffer is too small; the required length is still reported.
    BufferTooSmall = 4,
    Overflow = 5,
    Internal = 6,
}

/// An arrangement together with its Salvetti model and chamber choices.
pub struct TorsalModel {
    model: ToricModel,
    choices: ChoiceSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TorsalStatus {
    match e {
        Error::Input(_) | Error::Dimension(_) | Error::Json(_) => TorsalStatus::InvalidInput,
        Error::Check(_) => TorsalStatus::CheckFailed,
        Error::Overflow => TorsalStatus::Overflow,
        Error::Io(_) => TorsalStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<TorsalStatus, (TorsalStatus, String)>) -> TorsalStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside torsal");
            TorsalStatus::Internal
        }
    }
}

fn lift<T>(r: torsal::Result<T>) -> Result<T, (TorsalStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TorsalStatus, String) {
    (TorsalStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TorsalStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TorsalStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn model_ref<'a>(p: *const TorsalModel) -> Result<&'a TorsalModel, (TorsalStatus, String)> {
    p.as_ref().ok_or_else(|| null("model"))
}

unsafe fn hand_out(s: String, out: *mut *mut c_char) -> Result<(), (TorsalStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (TorsalStatus::Internal, "output contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Builds a model from an arrangement document (JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_from_json(json: *const c_char, out: *mut *mut TorsalModel) -> TorsalStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let spec = lift(ArrangementSpec::parse(text(json, "json")?))?;
        let model = lift(spec.arrangement().and_then(ToricModel::new))?;
        let choices = spec.choices.unwrap_or_default();
        *out = Box::into_raw(Box::new(TorsalModel { model, choices }));
        Ok(TorsalStatus::Ok)
    })
}

/// Replaces the model's chamber choices with a JSON choice set.
///
/// # Safety
/// `model` must come from [`torsal_model_from_json`]; `json` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_set_choices(model: *mut TorsalModel, json: *const c_char) -> TorsalStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let set: ChoiceSet = lift(serde_json::from_str(text(json, "json")?).map_err(Error::from))?;
        lift(Choices::resolve(&m.model, &set))?;
        m.choices = set;
        Ok(TorsalStatus::Ok)
    })
}

/// # Safety
/// `model` must come from [`torsal_model_from_json`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_free(model: *mut TorsalModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Dimension of the ambient torus, or 0 for a null model.
///
/// # Safety
/// `model` must be null or come from [`torsal_model_from_json`].
#[no_mangle]
pub unsafe extern "C" fn torsal_model_dimension(model: *const TorsalModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.arrangement.dim)
}

/// Writes the Betti numbers `b_0..=b_d` of the complement into `out`.
///
/// `len` always receives `d + 1`; when `capacity` is smaller nothing is
/// written and [`TorsalStatus::BufferTooSmall`] is returned.
///
/// # Safety
/// `out` must hold `capacity` elements (or be null with `capacity == 0`); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_betti(
    model: *const TorsalModel,
    out: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> TorsalStatus {
    guard(|| {
        let m = model_ref(model)?;
        if len.is_null() {
            return Err(null("length pointer"));
        }
        let d = m.model.arrangement.dim;
        *len = d + 1;
        if capacity < d + 1 {
            return Err((TorsalStatus::BufferTooSmall, format!("need {} entries", d + 1)));
        }
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let space = lift(Space::new(m.model.salvetti.category.clone(), d))?;
        for (i, b) in space.bettis(d).into_iter().enumerate() {
            *out.add(i) = b;
        }
        Ok(TorsalStatus::Ok)
    })
}

/// The restriction table of the generators as TSV.
///
/// # Safety
/// `model` must come from [`torsal_model_from_json`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_table_tsv(model: *const TorsalModel, out: *mut *mut c_char) -> TorsalStatus {
    guard(|| {
        let m = model_ref(model)?;
        let choices = lift(Choices::resolve(&m.model, &m.choices))?;
        let g = lift(Generators::new(&m.model, choices))?;
        let omegas = lift(g.all_omega_sl())?;
        hand_out(g.table(&omegas).to_tsv(), out)?;
        Ok(TorsalStatus::Ok)
    })
}

/// Runs every verification suite and hands out the report as TSV.
///
/// Returns [`TorsalStatus::CheckFailed`] with the report still written when a check fails.
///
/// # Safety
/// `model` must come from [`torsal_model_from_json`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsal_model_verify(model: *const TorsalModel, out: *mut *mut c_char) -> TorsalStatus {
    guard(|| {
        let m = model_ref(model)?;
        let report = lift(verify(&m.model, &m.choices, &Suite::ALL))?;
        hand_out(report.to_tsv(), out)?;
        if report.passed() {
            Ok(TorsalStatus::Ok)
        } else {
            set_error("verification failed");
            Ok(TorsalStatus::CheckFailed)
        }
    })
}

/// # Safety
/// `s` must be null or a string handed out by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn torsal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last non-zero status on this thread, or null.
///
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn torsal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
