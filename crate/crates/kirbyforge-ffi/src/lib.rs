//! C ABI over the kirbyforge library: opaque diagram handles, integer status
//! codes matching the CLI's exit-code contract, and caller-freed strings.
//!
//! Every function is null-safe; the last error message per thread is
//! retrievable with `kf_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use kirbyforge::diagram::{ComponentId, Diagram};
use kirbyforge::error::Error;
use kirbyforge::homology;
use kirbyforge::unlink::{self, CheckLevel, UnlinkCertificate};

/// Status codes: 0 ok, 1 failed verification, 2 parse, 3 invariant,
/// 4 precondition, 5 integrity, 6 null or invalid argument.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    VerifyFailed = 1,
    ParseError = 2,
    InvariantError = 3,
    PreconditionError = 4,
    IntegrityError = 5,
    BadArgument = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KfStatus {
    match e.exit_code() {
        2 => KfStatus::ParseError,
        3 => KfStatus::InvariantError,
        4 => KfStatus::PreconditionError,
        5 => KfStatus::IntegrityError,
        _ => KfStatus::BadArgument,
    }
}

/// Opaque diagram handle.
pub struct KfDiagram {
    inner: Diagram,
}

unsafe fn read_str<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    unsafe { CStr::from_ptr(p) }.to_str().ok()
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Last error message on this thread, or null.  Free with `kf_string_free`.
#[no_mangle]
pub extern "C" fn kf_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a kirbyforge function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            let _ = CString::from_raw(s);
        }
    }
}

/// Parse a diagram from text.  On success writes a handle to `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_diagram_parse(
    text: *const c_char,
    out: *mut *mut KfDiagram,
) -> KfStatus {
    if out.is_null() {
        return KfStatus::BadArgument;
    }
    let Some(s) = (unsafe { read_str(text) }) else {
        set_error("text pointer is null or not UTF-8");
        return KfStatus::BadArgument;
    };
    match Diagram::parse(s) {
        Ok(d) => {
            unsafe { *out = Box::into_raw(Box::new(KfDiagram { inner: d })) };
            KfStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Free a diagram handle.
///
/// # Safety
/// `d` must be a handle from `kf_diagram_parse` (or null), not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_diagram_free(d: *mut KfDiagram) {
    if !d.is_null() {
        unsafe {
            let _ = Box::from_raw(d);
        }
    }
}

/// Canonical serialization.  Free the result with `kf_string_free`.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_diagram_serialize(d: *const KfDiagram) -> *mut c_char {
    if d.is_null() {
        return ptr::null_mut();
    }
    give_string(unsafe { &(*d).inner }.serialize())
}

/// 64-bit FNV-1a hash of the canonical serialization.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_diagram_hash(d: *const KfDiagram) -> u64 {
    if d.is_null() {
        return 0;
    }
    unsafe { &(*d).inner }.hash()
}

/// Genus of the rotation system (0 means planar-realizable).
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_diagram_genus(d: *const KfDiagram) -> u32 {
    if d.is_null() {
        return u32::MAX;
    }
    unsafe { &(*d).inner }.genus()
}

/// Linking number of two components by id.
///
/// # Safety
/// `d` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_linking_number(
    d: *const KfDiagram,
    comp_a: u32,
    comp_b: u32,
    out: *mut i64,
) -> KfStatus {
    if d.is_null() || out.is_null() {
        return KfStatus::BadArgument;
    }
    match homology::linking_number(unsafe { &(*d).inner }, ComponentId(comp_a), ComponentId(comp_b))
    {
        Ok(v) => {
            unsafe { *out = v };
            KfStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Whether surgery on the framed components yields a homology sphere.
///
/// # Safety
/// `d` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_is_homology_sphere(
    d: *const KfDiagram,
    out: *mut bool,
) -> KfStatus {
    if d.is_null() || out.is_null() {
        return KfStatus::BadArgument;
    }
    match homology::is_homology_sphere(unsafe { &(*d).inner }) {
        Ok(v) => {
            unsafe { *out = v };
            KfStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// First homology of the surgered manifold, e.g. "0", "Z", "Z/5 + Z".
/// Free with `kf_string_free`.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_h1_describe(d: *const KfDiagram) -> *mut c_char {
    if d.is_null() {
        return ptr::null_mut();
    }
    match homology::h1_of_surgery(unsafe { &(*d).inner }) {
        Ok(h) => give_string(h.to_string()),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Run the unlinking pipeline.  `check_level` is "linking-only", "level1",
/// or "level2"; on success writes the certificate text to `out_cert`.
///
/// # Safety
/// Pointers must be valid; free the certificate with `kf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kf_unlink(
    d: *const KfDiagram,
    check_level: *const c_char,
    out_cert: *mut *mut c_char,
) -> KfStatus {
    if d.is_null() || out_cert.is_null() {
        return KfStatus::BadArgument;
    }
    let level = match unsafe { read_str(check_level) } {
        None => CheckLevel::Level1,
        Some(s) => match CheckLevel::parse(s) {
            Ok(l) => l,
            Err(e) => {
                set_error(&e.to_string());
                return KfStatus::BadArgument;
            }
        },
    };
    match unlink::unlink(unsafe { &(*d).inner }, level) {
        Ok(cert) => {
            unsafe { *out_cert = give_string(cert.to_text()) };
            KfStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Re-verify a certificate against its origin diagram: Ok when every report
/// entry recomputes true, VerifyFailed when the recomputation disagrees.
///
/// # Safety
/// `cert_text` must be a valid string, `origin` a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_verify(
    cert_text: *const c_char,
    origin: *const KfDiagram,
) -> KfStatus {
    if origin.is_null() {
        return KfStatus::BadArgument;
    }
    let Some(text) = (unsafe { read_str(cert_text) }) else {
        set_error("certificate pointer is null or not UTF-8");
        return KfStatus::BadArgument;
    };
    let cert = match UnlinkCertificate::parse(text) {
        Ok(c) => c,
        Err(e) => {
            set_error(&e.to_string());
            return status_of(&e);
        }
    };
    match unlink::verify_certificate(&cert, unsafe { &(*origin).inner }) {
        Ok(outcome) if outcome.ok => KfStatus::Ok,
        Ok(outcome) => {
            set_error(&outcome.mismatches.join("; "));
            KfStatus::VerifyFailed
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn parse_query_roundtrip() {
        let text = c("component 1 role=surgery framing=1 arcs=1\n");
        let mut d: *mut KfDiagram = ptr::null_mut();
        let st = unsafe { kf_diagram_parse(text.as_ptr(), &mut d) };
        assert_eq!(st, KfStatus::Ok);
        assert_eq!(unsafe { kf_diagram_genus(d) }, 0);
        let mut sphere = false;
        assert_eq!(unsafe { kf_is_homology_sphere(d, &mut sphere) }, KfStatus::Ok);
        assert!(sphere);
        let s = unsafe { kf_diagram_serialize(d) };
        let got = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        assert!(got.contains("framing=1"));
        unsafe {
            kf_string_free(s);
            kf_diagram_free(d);
        }
    }

    #[test]
    fn parse_error_reported() {
        let text = c("component 1 role=pattern framing=7 arcs=1\n");
        let mut d: *mut KfDiagram = ptr::null_mut();
        let st = unsafe { kf_diagram_parse(text.as_ptr(), &mut d) };
        assert_eq!(st, KfStatus::ParseError);
        let msg = kf_last_error();
        assert!(!msg.is_null());
        let s = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
        assert!(s.contains("framing"), "{s}");
        unsafe { kf_string_free(msg) };
    }

    #[test]
    fn unlink_verify_through_ffi() {
        let (d0, _) = kirbyforge::moves::gadget::fig3_tangle();
        let text = c(&d0.serialize());
        let mut d: *mut KfDiagram = ptr::null_mut();
        assert_eq!(unsafe { kf_diagram_parse(text.as_ptr(), &mut d) }, KfStatus::Ok);
        let mut cert: *mut c_char = ptr::null_mut();
        let level = c("level1");
        assert_eq!(unsafe { kf_unlink(d, level.as_ptr(), &mut cert) }, KfStatus::Ok);
        assert_eq!(unsafe { kf_verify(cert, d) }, KfStatus::Ok);

        // corrupt the certificate text: flip the stored lk entry
        let cert_str = unsafe { CStr::from_ptr(cert) }.to_str().unwrap().to_string();
        let bad = cert_str.replace("lk-alpha-beta-1 1", "lk-alpha-beta-1 0");
        let bad_c = c(&bad);
        assert_eq!(unsafe { kf_verify(bad_c.as_ptr(), d) }, KfStatus::VerifyFailed);

        unsafe {
            kf_string_free(cert);
            kf_diagram_free(d);
        }
    }

    #[test]
    fn linking_number_through_ffi() {
        let hopf = kirbyforge::diagram::catalog::hopf_positive();
        let text = c(&hopf.serialize());
        let mut d: *mut KfDiagram = ptr::null_mut();
        assert_eq!(unsafe { kf_diagram_parse(text.as_ptr(), &mut d) }, KfStatus::Ok);
        let mut lk = 0i64;
        assert_eq!(unsafe { kf_linking_number(d, 1, 2, &mut lk) }, KfStatus::Ok);
        assert_eq!(lk, 1);
        // self-linking is a precondition error
        assert_eq!(
            unsafe { kf_linking_number(d, 1, 1, &mut lk) },
            KfStatus::PreconditionError
        );
        unsafe { kf_diagram_free(d) };
    }
}
