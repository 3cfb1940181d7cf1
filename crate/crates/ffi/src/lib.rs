//! C interface to the horco checker.
//!
//! Systems and reports are opaque handles owned by the caller and released
//! with their `_free` functions. Fallible calls return a [`HorcoStatus`];
//! the message of the most recent failure on the calling thread is available
//! from [`horco_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use horco::check::{compare, run_check, CheckConfig, CheckReport, Criterion, Format};
use horco::report::emit_report;
use horco::syntax::{parse_term, parse_trs};
use horco::{Budget, CheckError, Trs};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorcoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidBudget = 4,
    Check = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorcoCriterion {
    Rpo = 0,
    Rco = 1,
    Horpo = 2,
    Horco = 3,
}

impl From<HorcoCriterion> for Criterion {
    fn from(c: HorcoCriterion) -> Self {
        match c {
            HorcoCriterion::Rpo => Criterion::Rpo,
            HorcoCriterion::Rco => Criterion::Rco,
            HorcoCriterion::Horpo => Criterion::Horpo,
            HorcoCriterion::Horco => Criterion::Horco,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorcoFormat {
    Text = 0,
    Json = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HorcoBudget {
    pub max_search_depth: u32,
    pub max_red_steps: u32,
    pub max_term_size_slack: u32,
}

impl HorcoBudget {
    fn to_budget(self) -> Result<Budget, CheckError> {
        Budget::new(self.max_search_depth as usize, self.max_red_steps as usize, self.max_term_size_slack as usize)
    }
}

/// A parsed rewrite system.
pub struct HorcoSystem {
    trs: Trs,
}

/// The outcome of checking a system, with both renderings.
pub struct HorcoReport {
    report: CheckReport,
    text: CString,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(HorcoStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HorcoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HorcoStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HorcoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(HorcoStatus::NullArgument, format!("`{what}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(HorcoStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn budget_of(b: *const HorcoBudget) -> Result<Budget, Fail> {
    let b = if b.is_null() { horco_default_budget() } else { *b };
    b.to_budget().map_err(|e| Fail(HorcoStatus::InvalidBudget, e.to_string()))
}

fn null(what: &str) -> Fail {
    Fail(HorcoStatus::NullArgument, format!("`{what}` is null"))
}

fn check_failed(e: CheckError) -> Fail {
    match e {
        CheckError::Budget => Fail(HorcoStatus::InvalidBudget, e.to_string()),
        e => Fail(HorcoStatus::Check, e.to_string()),
    }
}

/// The budgets used when a null budget pointer is passed.
#[no_mangle]
pub extern "C" fn horco_default_budget() -> HorcoBudget {
    let b = Budget::default();
    HorcoBudget {
        max_search_depth: b.max_search_depth as u32,
        max_red_steps: b.max_red_steps as u32,
        max_term_size_slack: b.max_term_size_slack as u32,
    }
}

/// Message of the last failed call on this thread, or null. The string stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn horco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a system in the text format.
///
/// # Safety
/// `source` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn horco_system_parse(source: *const c_char, out: *mut *mut HorcoSystem) -> HorcoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let trs = parse_trs(text(source, "source")?).map_err(|e| Fail(HorcoStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(HorcoSystem { trs }));
        Ok(())
    })
}

/// # Safety
/// `system` must come from [`horco_system_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn horco_system_free(system: *mut HorcoSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Number of rules in `system`, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horco_system_rule_count(system: *const HorcoSystem) -> usize {
    system.as_ref().map_or(0, |s| s.trs.rules().len())
}

/// Orients every rule of `system`. A null `budget` means the defaults.
///
/// # Safety
/// `system` must be a live handle, `budget` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn horco_check(
    system: *const HorcoSystem,
    criterion: HorcoCriterion,
    budget: *const HorcoBudget,
    search_precedence: bool,
    out: *mut *mut HorcoReport,
) -> HorcoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let sys = system.as_ref().ok_or_else(|| null("system"))?;
        let config = CheckConfig { budget: budget_of(budget)?, search_precedence, ..CheckConfig::new(criterion.into()) };
        let report = run_check(&sys.trs, &config).map_err(check_failed)?;
        let render = |f| CString::new(emit_report(&report, f, sys.trs.vars())).expect("reports contain no nul bytes");
        let (text, json) = (render(Format::Text), render(Format::Json));
        *out = Box::into_raw(Box::new(HorcoReport { report, text, json }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`horco_check`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn horco_report_free(report: *mut HorcoReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horco_report_oriented(report: *const HorcoReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.oriented())
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horco_report_total(report: *const HorcoReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.total())
}

/// 0 when every rule is oriented, 1 otherwise, 2 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horco_report_exit_code(report: *const HorcoReport) -> i32 {
    report.as_ref().map_or(2, |r| r.report.exit_code())
}

/// Whether rule `index` (0-based) was oriented.
///
/// # Safety
/// `report` must be a live handle and `oriented` valid.
#[no_mangle]
pub unsafe extern "C" fn horco_report_rule_oriented(
    report: *const HorcoReport,
    index: usize,
    oriented: *mut bool,
) -> HorcoStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if oriented.is_null() {
            return Err(null("oriented"));
        }
        let rule = r
            .report
            .rules
            .get(index)
            .ok_or_else(|| Fail(HorcoStatus::OutOfRange, format!("no rule {index}, report has {}", r.report.total())))?;
        *oriented = rule.oriented;
        Ok(())
    })
}

/// The rendered report. Owned by `report`; valid until it is freed.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horco_report_render(report: *const HorcoReport, format: HorcoFormat) -> *const c_char {
    match (report.as_ref(), format) {
        (None, _) => ptr::null(),
        (Some(r), HorcoFormat::Text) => r.text.as_ptr(),
        (Some(r), HorcoFormat::Json) => r.json.as_ptr(),
    }
}

/// Decides `left > right` under `criterion`; `chain` bounds the number of
/// horco steps and is ignored by the other criteria.
///
/// # Safety
/// `system` must be a live handle, `left` and `right` nul-terminated,
/// `budget` null or valid, `greater` valid.
#[no_mangle]
pub unsafe extern "C" fn horco_compare(
    system: *const HorcoSystem,
    criterion: HorcoCriterion,
    left: *const c_char,
    right: *const c_char,
    budget: *const HorcoBudget,
    chain: u32,
    greater: *mut bool,
) -> HorcoStatus {
    guard(|| {
        if greater.is_null() {
            return Err(null("greater"));
        }
        let sys = system.as_ref().ok_or_else(|| null("system"))?;
        let parse = |s: &str| parse_term(s, sys.trs.sig(), sys.trs.vars()).map_err(|e| Fail(HorcoStatus::Parse, e.to_string()));
        let t = parse(text(left, "left")?)?;
        let u = parse(text(right, "right")?)?;
        let found = compare(&sys.trs, criterion.into(), &t, &u, budget_of(budget)?, chain as usize).map_err(check_failed)?;
        *greater = found.is_some();
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_error_is_cleared_by_success() {
        let mut sys = ptr::null_mut();
        let src = CString::new("sort B\nsymbol a : B\n").unwrap();
        unsafe {
            assert_eq!(horco_system_parse(ptr::null(), &mut sys), HorcoStatus::NullArgument);
            assert!(!horco_last_error().is_null());
            assert_eq!(horco_system_parse(src.as_ptr(), &mut sys), HorcoStatus::Ok);
            assert!(horco_last_error().is_null());
            assert_eq!(horco_system_rule_count(sys), 0);
            horco_system_free(sys);
        }
    }

    #[test]
    fn default_budget_matches_core() {
        assert_eq!(horco_default_budget().to_budget().unwrap(), Budget::default());
    }
}
