//! C ABI over `setwise_kemeny`.
//!
//! Handles (`SkProfile`, `SkReport`, `SkMedianResult`) are opaque and owned
//! by the caller once returned; release each with its `*_free` function.
//! Every fallible call returns an [`SkStatus`]; on failure a description is
//! available from [`sk_last_error_message`] on the same thread until the
//! next failing call. Alternatives are 0-based indices everywhere.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use setwise_kemeny::reduction::{
    reduction_rate_bound, run_method_with, GuaranteeTag, Method, ReductionReport,
};
use setwise_kemeny::solver::{
    brute_force_medians, constrained_medians, MedianResult, SearchOptions, DEFAULT_BRUTE_FORCE_CAP,
    DEFAULT_CONSTRAINED_CAP,
};
use setwise_kemeny::{
    preflib, profile_distance, ranking_distance, ConstraintSet, Error, OrderStatistics, Profile,
    Ranking, Rule,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnsupportedFormat = 4,
    Validation = 5,
    Cycle = 6,
    CapExceeded = 7,
    Io = 8,
    InvalidUtf8 = 9,
    OutOfRange = 10,
    Panic = 11,
}

/// Reduction methods, in the order of the library's `Method::ALL`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkMethod {
    At3 = 0,
    Mot3 = 1,
    Mot3e = 2,
    Iterated3Mot = 3,
    Mot = 4,
    IteratedMot = 5,
    ImprovedIteratedMot = 6,
}

impl From<SkMethod> for Method {
    fn from(m: SkMethod) -> Self {
        match m {
            SkMethod::At3 => Method::At3,
            SkMethod::Mot3 => Method::Mot3,
            SkMethod::Mot3e => Method::Mot3e,
            SkMethod::Iterated3Mot => Method::Iterated3Mot,
            SkMethod::Mot => Method::Mot,
            SkMethod::IteratedMot => Method::IteratedMot,
            SkMethod::ImprovedIteratedMot => Method::ImprovedIteratedMot,
        }
    }
}

pub struct SkProfile {
    profile: Profile,
    stats: OrderStatistics,
    labels: Vec<CString>,
}

pub struct SkReport {
    report: ReductionReport,
    certified: Vec<(usize, usize)>,
    constraints: Vec<(usize, usize)>,
}

pub struct SkMedianResult {
    result: MedianResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Input(_) => SkStatus::InvalidArgument,
            Error::Cycle(_) => SkStatus::Cycle,
            Error::Parse { .. } => SkStatus::Parse,
            Error::UnsupportedFormat(_) => SkStatus::UnsupportedFormat,
            Error::Validation(_) => SkStatus::Validation,
            Error::Io(_) => SkStatus::Io,
            Error::CapExceeded { .. } => SkStatus::CapExceeded,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: SkStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, converting both errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SkStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {message}"));
            SkStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(SkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(SkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(SkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ranking_arg(order: *const usize, n: usize) -> Result<Ranking, Failure> {
    if order.is_null() {
        return Err(fail(SkStatus::NullPointer, "ranking is null"));
    }
    Ok(Ranking::new(std::slice::from_raw_parts(order, n).to_vec())?)
}

fn rule_arg(k: u32) -> Result<Rule, Failure> {
    Rule::try_from(k as usize).map_err(Failure::from)
}

fn wrap_profile(profile: Profile) -> Result<*mut SkProfile, Failure> {
    let labels = profile
        .registry()
        .labels()
        .iter()
        .map(|l| {
            CString::new(l.as_str())
                .map_err(|_| fail(SkStatus::Validation, "label contains a NUL byte"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let stats = OrderStatistics::compute(&profile);
    Ok(Box::into_raw(Box::new(SkProfile {
        profile,
        stats,
        labels,
    })))
}

/// Description of the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses PREFLIB `.soc`/`.soi` text.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_parse(
    text: *const c_char,
    out: *mut *mut SkProfile,
) -> SkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = wrap_profile(preflib::parse(c_str(text, "text")?)?)?;
        Ok(())
    })
}

/// Reads and parses a PREFLIB file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_load(
    path: *const c_char,
    out: *mut *mut SkProfile,
) -> SkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = wrap_profile(preflib::load(c_str(path, "path")?)?)?;
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or a handle from `sk_profile_parse`/`sk_profile_load`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_free(profile: *mut SkProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// # Safety
/// `profile` must be a live handle; `n` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_num_alternatives(
    profile: *const SkProfile,
    n: *mut usize,
) -> SkStatus {
    guard(|| {
        *out_ptr(n, "n")? = borrow(profile, "profile")?.profile.num_alternatives();
        Ok(())
    })
}

/// # Safety
/// `profile` must be a live handle; `m` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_num_voters(profile: *const SkProfile, m: *mut u64) -> SkStatus {
    guard(|| {
        *out_ptr(m, "m")? = borrow(profile, "profile")?.profile.num_voters();
        Ok(())
    })
}

/// Label of alternative `index`; the string is owned by the profile.
///
/// # Safety
/// `profile` must be a live handle; `label` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_label(
    profile: *const SkProfile,
    index: usize,
    label: *mut *const c_char,
) -> SkStatus {
    guard(|| {
        let p = borrow(profile, "profile")?;
        let c = p.labels.get(index).ok_or_else(|| {
            fail(
                SkStatus::OutOfRange,
                format!("alternative {index} out of range"),
            )
        })?;
        *out_ptr(label, "label")? = c.as_ptr();
        Ok(())
    })
}

/// `n_xy - n_yx` over the profile.
///
/// # Safety
/// `profile` must be a live handle; `delta` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_delta(
    profile: *const SkProfile,
    x: usize,
    y: usize,
    delta: *mut i64,
) -> SkStatus {
    guard(|| {
        let p = borrow(profile, "profile")?;
        let n = p.profile.num_alternatives();
        if x >= n || y >= n {
            return Err(fail(
                SkStatus::OutOfRange,
                format!("pair ({x}, {y}) out of range for {n} alternatives"),
            ));
        }
        *out_ptr(delta, "delta")? = p.stats.delta(x, y);
        Ok(())
    })
}

/// k-wise distance (`k` is 2 or 3) between two rankings of `0..n`.
///
/// # Safety
/// `a` and `b` must point to `n` readable indices; `distance` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_ranking_distance(
    a: *const usize,
    b: *const usize,
    n: usize,
    k: u32,
    distance: *mut u64,
) -> SkStatus {
    guard(|| {
        let d = ranking_distance(&ranking_arg(a, n)?, &ranking_arg(b, n)?, rule_arg(k)?)?;
        *out_ptr(distance, "distance")? = d;
        Ok(())
    })
}

/// Total k-wise distance from a ranking to every vote of the profile.
///
/// # Safety
/// `profile` must be a live handle, `order` must point to `n` readable
/// indices and `distance` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_profile_distance(
    profile: *const SkProfile,
    order: *const usize,
    n: usize,
    k: u32,
    distance: *mut u64,
) -> SkStatus {
    guard(|| {
        let p = borrow(profile, "profile")?;
        let d = profile_distance(&ranking_arg(order, n)?, &p.profile, rule_arg(k)?)?;
        *out_ptr(distance, "distance")? = d;
        Ok(())
    })
}

/// Runs one reduction method. `max_iterations` of 0 means no limit.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_reduce(
    profile: *const SkProfile,
    method: SkMethod,
    max_iterations: usize,
    out: *mut *mut SkReport,
) -> SkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let p = borrow(profile, "profile")?;
        let seed = ConstraintSet::new(p.profile.num_alternatives());
        let limit = (max_iterations > 0).then_some(max_iterations);
        let report = run_method_with(&p.stats, method.into(), &seed, limit)?;
        let certified = report.certified_pairs();
        let constraints = report.constraints.edges().collect();
        *out = Box::into_raw(Box::new(SkReport {
            report,
            certified,
            constraints,
        }));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle from `sk_reduce`.
#[no_mangle]
pub unsafe extern "C" fn sk_report_free(report: *mut SkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 1 when the orders hold in every median, 0 when only in some median.
///
/// # Safety
/// `report` must be a live handle; `every_median` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_report_every_median(
    report: *const SkReport,
    every_median: *mut u8,
) -> SkStatus {
    guard(|| {
        let r = borrow(report, "report")?;
        *out_ptr(every_median, "every_median")? =
            u8::from(r.report.guarantee() == GuaranteeTag::EveryMedian);
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle; `iterations` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_report_iterations(
    report: *const SkReport,
    iterations: *mut usize,
) -> SkStatus {
    guard(|| {
        *out_ptr(iterations, "iterations")? = borrow(report, "report")?.report.iterations_used;
        Ok(())
    })
}

/// Solved fraction as `numer / denom` in lowest terms.
///
/// # Safety
/// `report` must be a live handle; `numer` and `denom` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sk_report_solved_fraction(
    report: *const SkReport,
    numer: *mut u64,
    denom: *mut u64,
) -> SkStatus {
    guard(|| {
        let f = borrow(report, "report")?.report.solved_fraction();
        *out_ptr(numer, "numer")? = *f.numer();
        *out_ptr(denom, "denom")? = *f.denom();
        Ok(())
    })
}

/// Number of ordered pairs the method certified directly.
///
/// # Safety
/// `report` must be a live handle; `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_report_certified_count(
    report: *const SkReport,
    count: *mut usize,
) -> SkStatus {
    guard(|| {
        *out_ptr(count, "count")? = borrow(report, "report")?.certified.len();
        Ok(())
    })
}

/// The `index`-th certified pair: `first` precedes `second`.
///
/// # Safety
/// `report` must be a live handle; `first` and `second` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sk_report_certified_pair(
    report: *const SkReport,
    index: usize,
    first: *mut usize,
    second: *mut usize,
) -> SkStatus {
    guard(|| pair_at(&borrow(report, "report")?.certified, index, first, second))
}

/// Number of ordered pairs in the transitive closure (`EVERY_MEDIAN` methods;
/// always 0 otherwise).
///
/// # Safety
/// `report` must be a live handle; `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_report_constraint_count(
    report: *const SkReport,
    count: *mut usize,
) -> SkStatus {
    guard(|| {
        *out_ptr(count, "count")? = borrow(report, "report")?.constraints.len();
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle; `first` and `second` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sk_report_constraint_pair(
    report: *const SkReport,
    index: usize,
    first: *mut usize,
    second: *mut usize,
) -> SkStatus {
    guard(|| pair_at(&borrow(report, "report")?.constraints, index, first, second))
}

unsafe fn pair_at(
    pairs: &[(usize, usize)],
    index: usize,
    first: *mut usize,
    second: *mut usize,
) -> Result<(), Failure> {
    let &(x, y) = pairs.get(index).ok_or_else(|| {
        fail(
            SkStatus::OutOfRange,
            format!("pair {index} out of range ({} pairs)", pairs.len()),
        )
    })?;
    *out_ptr(first, "first")? = x;
    *out_ptr(second, "second")? = y;
    Ok(())
}

/// Every k-wise median. With `use_reduction` non-zero the search is limited
/// to rankings respecting the iterated test of the rule. `cap` of 0 keeps the
/// default size limit.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_solve(
    profile: *const SkProfile,
    k: u32,
    use_reduction: u8,
    cap: usize,
    out: *mut *mut SkMedianResult,
) -> SkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let p = borrow(profile, "profile")?;
        let rule = rule_arg(k)?;
        let result = if use_reduction != 0 {
            let method = if rule == Rule::ThreeWise {
                Method::Iterated3Mot
            } else {
                Method::ImprovedIteratedMot
            };
            let seed = ConstraintSet::new(p.profile.num_alternatives());
            let report = run_method_with(&p.stats, method, &seed, None)?;
            let options = SearchOptions {
                cap: if cap == 0 {
                    DEFAULT_CONSTRAINED_CAP
                } else {
                    cap
                },
                prune: true,
            };
            constrained_medians(&p.profile, rule, &report.constraints, options)?
        } else {
            brute_force_medians(
                &p.profile,
                rule,
                if cap == 0 {
                    DEFAULT_BRUTE_FORCE_CAP
                } else {
                    cap
                },
            )?
        };
        *out = Box::into_raw(Box::new(SkMedianResult { result }));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a live handle from `sk_solve`.
#[no_mangle]
pub unsafe extern "C" fn sk_median_free(result: *mut SkMedianResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_median_summary(
    result: *const SkMedianResult,
    optimal_value: *mut u64,
    median_count: *mut usize,
    nodes_explored: *mut u64,
) -> SkStatus {
    guard(|| {
        let r = &borrow(result, "result")?.result;
        *out_ptr(optimal_value, "optimal_value")? = r.optimal_value;
        *out_ptr(median_count, "median_count")? = r.medians.len();
        *out_ptr(nodes_explored, "nodes_explored")? = r.nodes_explored;
        Ok(())
    })
}

/// Copies median `index` (best first) into `order`, which holds `n` slots.
///
/// # Safety
/// `result` must be a live handle and `order` must point to `n` writable slots.
#[no_mangle]
pub unsafe extern "C" fn sk_median_ranking(
    result: *const SkMedianResult,
    index: usize,
    order: *mut usize,
    n: usize,
) -> SkStatus {
    guard(|| {
        let r = &borrow(result, "result")?.result;
        let median = r
            .medians
            .get(index)
            .ok_or_else(|| fail(SkStatus::OutOfRange, format!("median {index} out of range")))?;
        if n != median.len() {
            return Err(fail(
                SkStatus::InvalidArgument,
                format!("buffer holds {n}, ranking has {}", median.len()),
            ));
        }
        if order.is_null() {
            return Err(fail(SkStatus::NullPointer, "order is null"));
        }
        std::slice::from_raw_parts_mut(order, n).copy_from_slice(median.order());
        Ok(())
    })
}

/// Lower bound on the search-space reduction when a fraction `p` in `[0, 1)`
/// of the pair orders is fixed among `n` alternatives.
///
/// # Safety
/// `bound` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_reduction_rate_bound(n: usize, p: f64, bound: *mut f64) -> SkStatus {
    guard(|| {
        *out_ptr(bound, "bound")? = reduction_rate_bound(n, p)?;
        Ok(())
    })
}
