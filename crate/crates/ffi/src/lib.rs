//! C interface. Every function returns an [`LwePrngStatus`] (or a plain value
//! that cannot fail), never unwinds across the boundary, and treats null
//! pointers as errors rather than undefined behaviour.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use lwe_prng::qkd_sim::{run_session, Adversary};
use lwe_prng::{default_params, hide, EntropyInput, Error, PrngState, Ring};

/// Opaque generator handle.
pub struct LwePrng {
    inner: PrngState,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LwePrngStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSeedLength = 2,
    DegenerateState = 3,
    InvalidArgument = 4,
    IdenticalSeeds = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Result of one simulated BB84 session.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LwePrngQkdSummary {
    pub n_photons: u64,
    pub sifted: u64,
    pub errors: u64,
    pub sift_fraction: f64,
    pub qber: f64,
}

/// Bytes of seed material accepted by the constructors.
pub const LWE_PRNG_SEED_LEN: usize = 32;
/// Size of one serialized hidden polynomial (256 coefficients, 4 bytes LE).
pub const LWE_PRNG_HIDDEN_SEED_LEN: usize = 1024;

fn status_of(e: &Error) -> LwePrngStatus {
    match e {
        Error::DegenerateState => LwePrngStatus::DegenerateState,
        Error::IdenticalSeeds => LwePrngStatus::IdenticalSeeds,
        Error::InvalidEntropy(_) => LwePrngStatus::InvalidSeedLength,
        _ => LwePrngStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> LwePrngStatus) -> LwePrngStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(LwePrngStatus::Panic)
}

unsafe fn read_seed(seed: *const u8, len: usize) -> Result<EntropyInput, LwePrngStatus> {
    if seed.is_null() {
        return Err(LwePrngStatus::NullPointer);
    }
    if len != LWE_PRNG_SEED_LEN {
        return Err(LwePrngStatus::InvalidSeedLength);
    }
    EntropyInput::from_slice(slice::from_raw_parts(seed, len)).map_err(|e| status_of(&e))
}

/// Creates a generator from `seed_len` (= 32) bytes. `reseed_interval` is in
/// output bits; 0 disables reseeding. On success `*out` owns a handle that
/// must be released with `lwe_prng_free`.
///
/// # Safety
/// `seed` must point to `seed_len` readable bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_new(
    seed: *const u8,
    seed_len: usize,
    reseed_interval: u64,
    out: *mut *mut LwePrng,
) -> LwePrngStatus {
    guard(|| {
        if out.is_null() {
            return LwePrngStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let ent = match read_seed(seed, seed_len) {
            Ok(e) => e,
            Err(s) => return s,
        };
        match PrngState::new(&ent, &default_params(), reseed_interval) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(LwePrng { inner }));
                LwePrngStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Fills `buf[0..len]` with output bytes.
///
/// # Safety
/// `handle` must come from `lwe_prng_new`/`lwe_prng_fork`; `buf` must point
/// to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_next_bytes(handle: *mut LwePrng, buf: *mut u8, len: usize) -> LwePrngStatus {
    guard(|| {
        let Some(h) = handle.as_mut() else { return LwePrngStatus::NullPointer };
        if len == 0 {
            return LwePrngStatus::Ok;
        }
        if buf.is_null() {
            return LwePrngStatus::NullPointer;
        }
        match h.inner.fill(slice::from_raw_parts_mut(buf, len)) {
            Ok(()) => LwePrngStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// New independent generator with the same parameters and reseed interval.
///
/// # Safety
/// As for `lwe_prng_new`, with `handle` a live handle.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_fork(
    handle: *const LwePrng,
    seed: *const u8,
    seed_len: usize,
    out: *mut *mut LwePrng,
) -> LwePrngStatus {
    guard(|| {
        if out.is_null() {
            return LwePrngStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Some(h) = handle.as_ref() else { return LwePrngStatus::NullPointer };
        let ent = match read_seed(seed, seed_len) {
            Ok(e) => e,
            Err(s) => return s,
        };
        match h.inner.fork(&ent) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(LwePrng { inner }));
                LwePrngStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_free(handle: *mut LwePrng) {
    if !handle.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(handle))));
    }
}

/// Number of reseeds so far.
///
/// # Safety
/// `handle` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_generation(handle: *const LwePrng, out: *mut u64) -> LwePrngStatus {
    guard(|| match (handle.as_ref(), out.is_null()) {
        (Some(h), false) => {
            *out = h.inner.generation();
            LwePrngStatus::Ok
        }
        _ => LwePrngStatus::NullPointer,
    })
}

/// Total output bits produced by the handle.
///
/// # Safety
/// `handle` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_bits_emitted(handle: *const LwePrng, out: *mut u64) -> LwePrngStatus {
    guard(|| match (handle.as_ref(), out.is_null()) {
        (Some(h), false) => {
            *out = h.inner.bits_emitted();
            LwePrngStatus::Ok
        }
        _ => LwePrngStatus::NullPointer,
    })
}

/// Writes the designated hidden polynomial for `seed` (1024 bytes, 4 bytes
/// little-endian per coefficient) into `buf`, which must hold at least
/// `LWE_PRNG_HIDDEN_SEED_LEN` bytes.
///
/// # Safety
/// `seed` must point to `seed_len` bytes and `buf` to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_hidden_seed_bytes(
    seed: *const u8,
    seed_len: usize,
    buf: *mut u8,
    buf_len: usize,
) -> LwePrngStatus {
    guard(|| {
        let ent = match read_seed(seed, seed_len) {
            Ok(e) => e,
            Err(s) => return s,
        };
        if buf.is_null() {
            return LwePrngStatus::NullPointer;
        }
        if buf_len < LWE_PRNG_HIDDEN_SEED_LEN {
            return LwePrngStatus::BufferTooSmall;
        }
        let p = default_params();
        let result = hide(&ent, &p).and_then(|hs| Ok(Ring::new(p)?.serialize(hs.designated())));
        match result {
            Ok(bytes) => {
                slice::from_raw_parts_mut(buf, bytes.len()).copy_from_slice(&bytes);
                LwePrngStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Simulates a BB84 session. `eve_seed` may be null for an undisturbed
/// channel; otherwise an intercept-resend eavesdropper uses it. All seeds
/// are `LWE_PRNG_SEED_LEN` bytes.
///
/// # Safety
/// Non-null pointers must be valid for the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn lwe_prng_qkd_session(
    alice_seed: *const u8,
    bob_seed: *const u8,
    eve_seed: *const u8,
    n_photons: u64,
    out: *mut LwePrngQkdSummary,
) -> LwePrngStatus {
    guard(|| {
        if out.is_null() {
            return LwePrngStatus::NullPointer;
        }
        let alice = match read_seed(alice_seed, LWE_PRNG_SEED_LEN) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let bob = match read_seed(bob_seed, LWE_PRNG_SEED_LEN) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let adversary = if eve_seed.is_null() {
            Adversary::None
        } else {
            match read_seed(eve_seed, LWE_PRNG_SEED_LEN) {
                Ok(e) => Adversary::InterceptResend(e),
                Err(s) => return s,
            }
        };
        let Ok(n) = usize::try_from(n_photons) else { return LwePrngStatus::InvalidArgument };
        match run_session(&alice, &bob, n, &adversary) {
            Ok(session) => {
                let s = session.summary();
                *out = LwePrngQkdSummary {
                    n_photons: s.n_photons as u64,
                    sifted: s.sifted as u64,
                    errors: s.errors as u64,
                    sift_fraction: s.sift_fraction,
                    qber: s.qber,
                };
                LwePrngStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn lwe_prng_status_message(status: LwePrngStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LwePrngStatus::Ok => b"ok\0",
        LwePrngStatus::NullPointer => b"null pointer argument\0",
        LwePrngStatus::InvalidSeedLength => b"seed must be exactly 32 bytes\0",
        LwePrngStatus::DegenerateState => b"degenerate generator state\0",
        LwePrngStatus::InvalidArgument => b"invalid argument\0",
        LwePrngStatus::IdenticalSeeds => b"sender and receiver seeds are identical\0",
        LwePrngStatus::BufferTooSmall => b"output buffer too small\0",
        LwePrngStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn lwe_prng_version() -> *const c_char {
    const V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}
