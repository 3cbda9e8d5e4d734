//! C ABI over `sst_stego`.
//!
//! # Conventions
//!
//! - Every fallible function returns an [`SstStatus`]; `SST_STATUS_OK` is 0.
//! - On failure a message is stored per thread and can be read with
//!   [`sst_last_error_message`] until the next failing call on that thread.
//! - [`SstImage`] is an opaque handle. Handles returned through an out
//!   pointer are owned by the caller and released with [`sst_image_free`].
//! - Byte buffers returned through `(out_ptr, out_len)` are released with
//!   [`sst_bytes_free`], passing back the same length.
//! - Bit arrays cross the boundary as one byte per bit, each 0 or 1.
//! - Panics never unwind into the caller; they surface as `SST_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sst_stego::harness::{
    emit_csv, run_campaign, run_stc_campaign, CampaignConfig, StcCampaignConfig,
};
use sst_stego::imaging::{generate_cover, histogram, read_pgm, write_pgm, CoverModel};
use sst_stego::lsb::{extract_lsb, PositionList};
use sst_stego::metrics::{kl_div, smooth_normalize};
use sst_stego::rng::{keyed_path, RngState};
use sst_stego::shaping::{decode_payload, shape_select_kl, ShapingConfig};
use sst_stego::stc::{stc_shape_select, StcConfig};
use sst_stego::{BitVec, Error, Image};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SstStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Io = 4,
    Format = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SstCoverModel {
    Uniform = 0,
    Smooth = 1,
    Gradient = 2,
    Bimodal = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SstPathMode {
    /// Row-major pixels `0..len`.
    Sequential = 0,
    /// Partial Fisher-Yates shuffle keyed by `SstPath::key`.
    Keyed = 1,
}

/// Embedding path selector.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SstPath {
    pub mode: SstPathMode,
    pub key: u64,
}

/// Opaque grayscale image handle.
pub struct SstImage {
    inner: Image,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SstStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Config(_) => SstStatus::Config,
            Error::Io(_) => SstStatus::Io,
            Error::Pgm(_) | Error::BitFile(_) | Error::Csv(_) => SstStatus::Format,
            _ => SstStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SstStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SstStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SstStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside sst_stego".into());
            SstStatus::Panic
        }
    }
}

unsafe fn image_ref<'a>(img: *const SstImage) -> Result<&'a Image, Failure> {
    img.as_ref().map(|h| &h.inner).ok_or_else(|| null("image"))
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn bits_in(p: *const u8, len: usize) -> Result<BitVec, Failure> {
    let raw = slice_in(p, len, "message")?;
    if let Some(i) = raw.iter().position(|&b| b > 1) {
        return Err(Failure(
            SstStatus::InvalidArgument,
            format!("message byte {i} is not 0 or 1"),
        ));
    }
    Ok(raw.iter().map(|&b| b == 1).collect())
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn path_for(spec: SstPath, len: usize, pixels: usize) -> Result<PositionList, Failure> {
    Ok(match spec.mode {
        SstPathMode::Sequential => PositionList::sequential(len, pixels)?,
        SstPathMode::Keyed => keyed_path(spec.key, pixels, len)?,
    })
}

unsafe fn hand_out_bytes(
    bytes: Vec<u8>,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> Result<(), Failure> {
    if out.is_null() || out_len.is_null() {
        return Err(null("output buffer"));
    }
    let boxed = bytes.into_boxed_slice();
    out_len.write(boxed.len());
    out.write(Box::into_raw(boxed) as *mut u8);
    Ok(())
}

unsafe fn hand_out_image(img: Image, out: *mut *mut SstImage) -> Result<(), Failure> {
    put(
        out,
        Box::into_raw(Box::new(SstImage { inner: img })),
        "output image",
    )
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sst_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sst_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Advances a splitmix64 state in place and returns the next output.
///
/// # Safety
/// `state` must point to a writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn sst_splitmix64_next(state: *mut u64) -> u64 {
    match state.as_mut() {
        Some(s) => {
            let mut st = RngState::new(*s);
            let v = st.next_u64();
            *s = st.state;
            v
        }
        None => 0,
    }
}

/// Copies `len == width * height` row-major pixels into a new image.
///
/// # Safety
/// `pixels` must be readable for `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sst_image_new(
    width: usize,
    height: usize,
    pixels: *const u8,
    len: usize,
    out: *mut *mut SstImage,
) -> SstStatus {
    guard(|| {
        let px = slice_in(pixels, len, "pixels")?.to_vec();
        hand_out_image(Image::new(width, height, px)?, out)
    })
}

/// Synthetic cover image from one of the built-in models.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sst_image_generate(
    model: SstCoverModel,
    width: usize,
    height: usize,
    seed: u64,
    out: *mut *mut SstImage,
) -> SstStatus {
    guard(|| {
        let model = match model {
            SstCoverModel::Uniform => CoverModel::Uniform,
            SstCoverModel::Smooth => CoverModel::Smooth,
            SstCoverModel::Gradient => CoverModel::Gradient,
            SstCoverModel::Bimodal => CoverModel::Bimodal,
        };
        hand_out_image(
            generate_cover(model, width, height, &mut RngState::new(seed))?,
            out,
        )
    })
}

/// Parses a binary PGM (P5, maxval 255).
///
/// # Safety
/// `bytes` must be readable for `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sst_image_read_pgm(
    bytes: *const u8,
    len: usize,
    out: *mut *mut SstImage,
) -> SstStatus {
    guard(|| hand_out_image(read_pgm(slice_in(bytes, len, "bytes")?)?, out))
}

/// Encodes an image as binary PGM. Free the buffer with [`sst_bytes_free`].
///
/// # Safety
/// `img` must be a live handle; `out` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sst_image_write_pgm(
    img: *const SstImage,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> SstStatus {
    guard(|| hand_out_bytes(write_pgm(image_ref(img)?), out, out_len))
}

/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sst_image_width(img: *const SstImage) -> usize {
    img.as_ref().map_or(0, |h| h.inner.width())
}

/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sst_image_height(img: *const SstImage) -> usize {
    img.as_ref().map_or(0, |h| h.inner.height())
}

/// Copies the pixels into `dst`, which must hold exactly `width * height`
/// bytes.
///
/// # Safety
/// `img` must be a live handle; `dst` must be writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sst_image_copy_pixels(
    img: *const SstImage,
    dst: *mut u8,
    len: usize,
) -> SstStatus {
    guard(|| {
        let img = image_ref(img)?;
        if len != img.len() {
            return Err(Failure(
                SstStatus::InvalidArgument,
                format!("buffer holds {len} bytes, image has {}", img.len()),
            ));
        }
        if dst.is_null() {
            return Err(null("dst"));
        }
        ptr::copy_nonoverlapping(img.pixels().as_ptr(), dst, len);
        Ok(())
    })
}

/// # Safety
/// `img` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sst_image_free(img: *mut SstImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// # Safety
/// `ptr`/`len` must come from a single buffer handed out by this library.
#[no_mangle]
pub unsafe extern "C" fn sst_bytes_free(ptr: *mut u8, len: usize) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(ptr, len)));
    }
}

/// Shapes an `n`-bit message with overhead `k` and embeds the winning
/// payload by LSB substitution along `path`.
///
/// # Safety
/// `cover` must be a live handle; `message` readable for `n` bytes; all out
/// pointers writable (`out_h` and `out_kl` may be null).
#[no_mangle]
pub unsafe extern "C" fn sst_embed(
    cover: *const SstImage,
    message: *const u8,
    n: usize,
    k: u32,
    session_seed: u64,
    path: SstPath,
    out_stego: *mut *mut SstImage,
    out_h: *mut u64,
    out_kl: *mut f64,
) -> SstStatus {
    guard(|| {
        let cover = image_ref(cover)?;
        let s = bits_in(message, n)?;
        let positions = path_for(path, n + k as usize, cover.len())?;
        let shaped = shape_select_kl(cover, &s, &ShapingConfig::new(k, session_seed), &positions)?;
        if !out_h.is_null() {
            out_h.write(shaped.chosen_h);
        }
        if !out_kl.is_null() {
            out_kl.write(shaped.objective_value);
        }
        hand_out_image(shaped.stego, out_stego)
    })
}

/// Recovers an `n`-bit message written by [`sst_embed`] into `out_message`
/// (one byte per bit).
///
/// # Safety
/// `stego` must be a live handle; `out_message` writable for `n` bytes;
/// `out_h` may be null.
#[no_mangle]
pub unsafe extern "C" fn sst_extract(
    stego: *const SstImage,
    n: usize,
    k: u32,
    session_seed: u64,
    path: SstPath,
    out_message: *mut u8,
    out_h: *mut u64,
) -> SstStatus {
    guard(|| {
        let stego = image_ref(stego)?;
        let len = n + k as usize;
        let positions = path_for(path, len, stego.len())?;
        let z = extract_lsb(stego, len, &positions)?;
        let (h, s) = decode_payload(&z, k, session_seed)?;
        if n > 0 && out_message.is_null() {
            return Err(null("out_message"));
        }
        for (i, b) in s.iter().enumerate() {
            out_message.add(i).write(b as u8);
        }
        if !out_h.is_null() {
            out_h.write(h);
        }
        Ok(())
    })
}

/// Smoothed histogram KL divergence `D(cover || stego)` in bits.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sst_kl_divergence(
    cover: *const SstImage,
    stego: *const SstImage,
    out: *mut f64,
) -> SstStatus {
    guard(|| {
        let p = smooth_normalize(&histogram(image_ref(cover)?))?;
        let q = smooth_normalize(&histogram(image_ref(stego)?))?;
        put(out, kl_div(&p, &q), "out")
    })
}

/// Minimum syndrome-embedding cost over the `2^k` shaped candidates, using
/// the standard 4x8 check matrix and a path keyed by `stc_key`.
///
/// # Safety
/// `img` must be a live handle; `message` readable for `n` bytes;
/// `out_cost` writable; `out_h` may be null.
#[no_mangle]
pub unsafe extern "C" fn sst_stc_shape_select(
    img: *const SstImage,
    message: *const u8,
    n: usize,
    k: u32,
    session_seed: u64,
    stc_key: u64,
    out_cost: *mut f64,
    out_h: *mut u64,
) -> SstStatus {
    guard(|| {
        let img = image_ref(img)?;
        let s = bits_in(message, n)?;
        let outcome = stc_shape_select(
            img,
            &s,
            &ShapingConfig::new(k, session_seed),
            &StcConfig::standard(stc_key),
        )?;
        if !out_h.is_null() {
            out_h.write(outcome.chosen_h);
        }
        put(out_cost, outcome.total_cost, "out_cost")
    })
}

unsafe fn config_text<'a>(text: *const c_char) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null("config"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| Failure(SstStatus::Config, "config is not UTF-8".into()))
}

/// Runs an LSB campaign described by key=value text and returns the run
/// records as CSV. Free the buffer with [`sst_bytes_free`].
///
/// # Safety
/// `config` must be a NUL-terminated string; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sst_simulate(
    config: *const c_char,
    out_csv: *mut *mut u8,
    out_len: *mut usize,
) -> SstStatus {
    guard(|| {
        let cfg = CampaignConfig::from_kv_text(config_text(config)?)?;
        hand_out_bytes(emit_csv(&run_campaign(&cfg)?)?, out_csv, out_len)
    })
}

/// Syndrome-cost counterpart of [`sst_simulate`].
///
/// # Safety
/// As for [`sst_simulate`].
#[no_mangle]
pub unsafe extern "C" fn sst_stc_simulate(
    config: *const c_char,
    out_csv: *mut *mut u8,
    out_len: *mut usize,
) -> SstStatus {
    guard(|| {
        let cfg = StcCampaignConfig::from_kv_text(config_text(config)?)?;
        hand_out_bytes(emit_csv(&run_stc_campaign(&cfg)?)?, out_csv, out_len)
    })
}
