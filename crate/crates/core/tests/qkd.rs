mod common;

use common::seed;
use lwe_prng::qkd_sim::{derive_party_seeds, run_session, run_session_with, Adversary};
use lwe_prng::Error;

#[test]
fn honest_channel_sifts_half_without_errors() {
    let (bob, _) = derive_party_seeds(&seed(1));
    let s = run_session(&seed(1), &bob, 1_000_000, &Adversary::None).unwrap().summary();
    assert!((s.sift_fraction - 0.5).abs() <= 0.003, "{}", s.sift_fraction);
    assert_eq!(s.errors, 0);
    assert_eq!(s.qber, 0.0);
}

#[test]
fn intercept_resend_gives_quarter_qber() {
    let (bob, eve) = derive_party_seeds(&seed(2));
    let s = run_session(&seed(2), &bob, 1_000_000, &Adversary::InterceptResend(eve))
        .unwrap()
        .summary();
    assert!((s.qber - 0.25).abs() <= 0.005, "{}", s.qber);
    assert!((s.sift_fraction - 0.5).abs() <= 0.003);
}

#[test]
fn sift_fraction_concentrates() {
    // std of the sift fraction at n photons is 0.5/sqrt(n); 4 sigma bound
    for (i, n) in [10_000usize, 100_000].into_iter().enumerate() {
        let (bob, _) = derive_party_seeds(&seed(10 + i as u8));
        let s = run_session(&seed(10 + i as u8), &bob, n, &Adversary::None).unwrap().summary();
        assert!((s.sift_fraction - 0.5).abs() <= 4.0 * 0.5 / (n as f64).sqrt());
    }
}

#[test]
fn identical_seeds_are_rejected() {
    let e = run_session(&seed(3), &seed(3), 100, &Adversary::None).unwrap_err();
    assert!(matches!(e, Error::IdenticalSeeds));
}

#[test]
fn scripted_sources_follow_the_protocol() {
    // photon 1: alice (1, Z), bob Z            -> sifted, agrees
    // photon 2: alice (0, Z), bob X, result 1  -> discarded
    // photon 3: alice (1, X), bob X            -> sifted, agrees
    let alice = [true, false, false, false, true, true];
    let bob = [false, true, true, true];
    let s = run_session_with(alice.into_iter(), bob.into_iter(), None::<std::vec::IntoIter<bool>>, 3)
        .unwrap()
        .summary();
    assert_eq!(s.sifted, 2);
    assert_eq!(s.errors, 0);
}

#[test]
fn scripted_eavesdropper_flips_bob() {
    // alice (0, Z); eve measures in X and gets 1, resends (1, X);
    // bob measures in Z, mismatched with the resent basis, draws 1 -> error
    let alice = [false, false];
    let eve = [true, true];
    let bob = [false, true];
    let s = run_session_with(alice.into_iter(), bob.into_iter(), Some(eve.into_iter()), 1)
        .unwrap()
        .summary();
    assert_eq!(s.sifted, 1);
    assert_eq!(s.errors, 1);
    assert_eq!(s.qber, 1.0);
}
