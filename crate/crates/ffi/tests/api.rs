use std::ffi::CStr;
use std::ptr;

use lwe_prng_ffi::*;

const SEED: [u8; 32] = [7u8; 32];

fn new(seed: &[u8], interval: u64) -> (LwePrngStatus, *mut LwePrng) {
    let mut h = ptr::null_mut();
    let s = unsafe { lwe_prng_new(seed.as_ptr(), seed.len(), interval, &mut h) };
    (s, h)
}

#[test]
fn bytes_match_the_library() {
    let (s, h) = new(&SEED, 1024);
    assert_eq!(s, LwePrngStatus::Ok);
    let mut buf = [0u8; 4096];
    assert_eq!(unsafe { lwe_prng_next_bytes(h, buf.as_mut_ptr(), buf.len()) }, LwePrngStatus::Ok);
    let ent = lwe_prng::EntropyInput::new(SEED);
    let mut g = lwe_prng::PrngState::new(&ent, &lwe_prng::default_params(), 1024).unwrap();
    assert_eq!(buf.to_vec(), g.next_bytes(4096).unwrap());
    let (mut gen, mut bits) = (0u64, 0u64);
    unsafe {
        assert_eq!(lwe_prng_generation(h, &mut gen), LwePrngStatus::Ok);
        assert_eq!(lwe_prng_bits_emitted(h, &mut bits), LwePrngStatus::Ok);
        lwe_prng_free(h);
    }
    assert_eq!(gen, 32);
    assert_eq!(bits, 32768);
}

#[test]
fn argument_errors() {
    assert_eq!(new(&SEED[..31], 0).0, LwePrngStatus::InvalidSeedLength);
    let s = unsafe { lwe_prng_new(ptr::null(), 32, 0, &mut ptr::null_mut()) };
    assert_eq!(s, LwePrngStatus::NullPointer);
    let s = unsafe { lwe_prng_new(SEED.as_ptr(), 32, 0, ptr::null_mut()) };
    assert_eq!(s, LwePrngStatus::NullPointer);
    let mut buf = [0u8; 4];
    assert_eq!(unsafe { lwe_prng_next_bytes(ptr::null_mut(), buf.as_mut_ptr(), 4) }, LwePrngStatus::NullPointer);
    unsafe { lwe_prng_free(ptr::null_mut()) };
}

#[test]
fn fork_is_independent() {
    let (_, h) = new(&SEED, 0);
    let mut f = ptr::null_mut();
    let other = [9u8; 32];
    assert_eq!(unsafe { lwe_prng_fork(h, other.as_ptr(), 32, &mut f) }, LwePrngStatus::Ok);
    let (mut a, mut b) = ([0u8; 64], [0u8; 64]);
    unsafe {
        lwe_prng_next_bytes(h, a.as_mut_ptr(), 64);
        lwe_prng_next_bytes(f, b.as_mut_ptr(), 64);
        lwe_prng_free(h);
        lwe_prng_free(f);
    }
    assert_ne!(a, b);
    let (_, g) = new(&other, 0);
    let mut c = [0u8; 64];
    unsafe {
        lwe_prng_next_bytes(g, c.as_mut_ptr(), 64);
        lwe_prng_free(g);
    }
    assert_eq!(b, c);
}

#[test]
fn hidden_seed_serialization() {
    let mut buf = vec![0u8; LWE_PRNG_HIDDEN_SEED_LEN];
    let s = unsafe { lwe_prng_hidden_seed_bytes(SEED.as_ptr(), 32, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(s, LwePrngStatus::Ok);
    let hs = lwe_prng::hide(&lwe_prng::EntropyInput::new(SEED), &lwe_prng::default_params()).unwrap();
    let want: Vec<u8> = hs.designated().coeffs().iter().flat_map(|c| c.to_le_bytes()).collect();
    assert_eq!(buf, want);
    let s = unsafe { lwe_prng_hidden_seed_bytes(SEED.as_ptr(), 32, buf.as_mut_ptr(), 100) };
    assert_eq!(s, LwePrngStatus::BufferTooSmall);
}

#[test]
fn qkd_session() {
    let (a, b, e) = ([1u8; 32], [2u8; 32], [3u8; 32]);
    let mut out = LwePrngQkdSummary::default();
    let s = unsafe { lwe_prng_qkd_session(a.as_ptr(), b.as_ptr(), ptr::null(), 100_000, &mut out) };
    assert_eq!(s, LwePrngStatus::Ok);
    assert_eq!(out.errors, 0);
    assert!((out.sift_fraction - 0.5).abs() < 0.01);
    let s = unsafe { lwe_prng_qkd_session(a.as_ptr(), b.as_ptr(), e.as_ptr(), 100_000, &mut out) };
    assert_eq!(s, LwePrngStatus::Ok);
    assert!((out.qber - 0.25).abs() < 0.015);
    let s = unsafe { lwe_prng_qkd_session(a.as_ptr(), a.as_ptr(), ptr::null(), 10, &mut out) };
    assert_eq!(s, LwePrngStatus::IdenticalSeeds);
    let s = unsafe { lwe_prng_qkd_session(a.as_ptr(), b.as_ptr(), ptr::null(), 0, &mut out) };
    assert_eq!(s, LwePrngStatus::InvalidArgument);
}

#[test]
fn messages_and_version() {
    let msg = unsafe { CStr::from_ptr(lwe_prng_status_message(LwePrngStatus::InvalidSeedLength)) };
    assert!(msg.to_str().unwrap().contains("32"));
    let v = unsafe { CStr::from_ptr(lwe_prng_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lwe_prng.h")).unwrap();
    for name in [
        "typedef struct LwePrng LwePrng;",
        "LWE_PRNG_STATUS_OK = 0",
        "LWE_PRNG_STATUS_PANIC",
        "lwe_prng_new(",
        "lwe_prng_next_bytes(",
        "lwe_prng_fork(",
        "void lwe_prng_free(",
        "lwe_prng_generation(",
        "lwe_prng_hidden_seed_bytes(",
        "lwe_prng_qkd_session(",
        "lwe_prng_status_message(",
        "lwe_prng_version(void)",
        "#define LWE_PRNG_SEED_LEN 32",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
