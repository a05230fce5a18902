//! BB84 with generator-driven basis and bit choices.
//!
//! The channel is noiseless; a mismatched measurement basis yields a fresh
//! bit from the measuring party's own generator, so a whole session is a
//! deterministic function of the parties' entropy inputs.

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prng_stream::{Bits, PrngState};
use crate::sampling::{derive_entropy, EntropyInput, LABEL_EAVESDROPPER, LABEL_RECEIVER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adversary {
    None,
    /// Measures every photon in a basis drawn from its own generator and
    /// re-sends the result in that basis.
    InterceptResend(EntropyInput),
}

impl Adversary {
    pub fn name(&self) -> &'static str {
        match self {
            Adversary::None => "none",
            Adversary::InterceptResend(_) => "intercept_resend",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QkdSession {
    pub n_photons: usize,
    pub alice_bits: BitString,
    /// 0 = rectilinear, 1 = diagonal.
    pub alice_bases: BitString,
    pub bob_bases: BitString,
    pub bob_results: BitString,
    pub adversary: &'static str,
    pub sifted_key_alice: BitString,
    pub sifted_key_bob: BitString,
    pub qber: f64,
}

impl QkdSession {
    pub fn sifted_len(&self) -> usize {
        self.sifted_key_alice.len()
    }

    pub fn sift_fraction(&self) -> f64 {
        self.sifted_len() as f64 / self.n_photons as f64
    }

    pub fn errors(&self) -> usize {
        self.sifted_key_alice.hamming_distance(&self.sifted_key_bob)
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            n_photons: self.n_photons,
            adversary: self.adversary,
            sifted: self.sifted_len(),
            errors: self.errors(),
            sift_fraction: self.sift_fraction(),
            qber: self.qber,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionSummary {
    pub n_photons: usize,
    pub adversary: &'static str,
    pub sifted: usize,
    pub errors: usize,
    pub sift_fraction: f64,
    pub qber: f64,
}

impl SessionSummary {
    pub const CSV_HEADER: &'static str = "n_photons,adversary,sifted,errors,sift_fraction,qber";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6}",
            self.n_photons, self.adversary, self.sifted, self.errors, self.sift_fraction, self.qber
        )
    }
}

impl fmt::Display for SessionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "photons        {}", self.n_photons)?;
        writeln!(f, "adversary      {}", self.adversary)?;
        writeln!(f, "sifted bits    {}", self.sifted)?;
        writeln!(f, "sift fraction  {:.6}", self.sift_fraction)?;
        writeln!(f, "errors         {}", self.errors)?;
        write!(f, "qber           {:.6}", self.qber)
    }
}

/// Receiver and eavesdropper inputs derived from one master input, for
/// demos that take a single seed.
pub fn derive_party_seeds(master: &EntropyInput) -> (EntropyInput, EntropyInput) {
    (derive_entropy(master, LABEL_RECEIVER, &[]), derive_entropy(master, LABEL_EAVESDROPPER, &[]))
}

pub fn run_session(
    ent_alice: &EntropyInput,
    ent_bob: &EntropyInput,
    n_photons: usize,
    adversary: &Adversary,
) -> Result<QkdSession> {
    if ent_alice == ent_bob {
        return Err(Error::IdenticalSeeds);
    }
    let alice = Bits::new(PrngState::from_entropy(ent_alice)?);
    let bob = Bits::new(PrngState::from_entropy(ent_bob)?);
    let eve = match adversary {
        Adversary::None => None,
        Adversary::InterceptResend(ent) => Some(Bits::new(PrngState::from_entropy(ent)?)),
    };
    run_session_with(alice, bob, eve, n_photons)
}

/// Session over arbitrary bit sources. Alice consumes (bit, basis) per
/// photon; Bob consumes a basis, plus a result bit on a basis mismatch;
/// Eve consumes a basis, plus a result bit on her own mismatch.
pub fn run_session_with<A, B, E>(
    mut alice: A,
    mut bob: B,
    mut eve: Option<E>,
    n_photons: usize,
) -> Result<QkdSession>
where
    A: Iterator<Item = bool>,
    B: Iterator<Item = bool>,
    E: Iterator<Item = bool>,
{
    if n_photons == 0 {
        return Err(Error::InsufficientTrials { required: 1, got: 0 });
    }
    let exhausted = || Error::InsufficientBits { required: n_photons, got: 0 };
    let adversary = if eve.is_some() { "intercept_resend" } else { "none" };
    let mut s = QkdSession {
        n_photons,
        alice_bits: BitString::with_capacity(n_photons),
        alice_bases: BitString::with_capacity(n_photons),
        bob_bases: BitString::with_capacity(n_photons),
        bob_results: BitString::with_capacity(n_photons),
        adversary,
        sifted_key_alice: BitString::with_capacity(n_photons / 2 + 64),
        sifted_key_bob: BitString::with_capacity(n_photons / 2 + 64),
        qber: 0.0,
    };
    for _ in 0..n_photons {
        let bit = alice.next().ok_or_else(exhausted)?;
        let basis = alice.next().ok_or_else(exhausted)?;
        let (sent_bit, sent_basis) = match eve.as_mut() {
            None => (bit, basis),
            Some(e) => {
                let eb = e.next().ok_or_else(exhausted)?;
                let seen = if eb == basis { bit } else { e.next().ok_or_else(exhausted)? };
                (seen, eb)
            }
        };
        let bob_basis = bob.next().ok_or_else(exhausted)?;
        let result =
            if bob_basis == sent_basis { sent_bit } else { bob.next().ok_or_else(exhausted)? };
        s.alice_bits.push(bit);
        s.alice_bases.push(basis);
        s.bob_bases.push(bob_basis);
        s.bob_results.push(result);
        if bob_basis == basis {
            s.sifted_key_alice.push(bit);
            s.sifted_key_bob.push(result);
        }
    }
    let sifted = s.sifted_len();
    s.qber = if sifted == 0 { 0.0 } else { s.errors() as f64 / sifted as f64 };
    Ok(s)
}
