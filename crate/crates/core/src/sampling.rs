//! Randomness intake.
//!
//! All samplers read SHAKE-256 streams keyed by `ent ∥ label ∥ extra`:
//!
//! | label  | extra              | use                              |
//! |--------|--------------------|----------------------------------|
//! | `0x00` | `i ∥ j` (1 byte each) | entry `A[i][j]` of the public matrix |
//! | `0x01` | –                  | secret `s`                       |
//! | `0x02` | nonce, `u16` BE    | error `e`                        |
//! | `0x03` | –                  | binary payload `r`               |
//! | `0x04` | generation, `u64` BE | reseed derivation              |
//! | `0x05` | –                  | receiver seed for the QKD demo   |
//! | `0x06` | –                  | eavesdropper seed for the QKD demo |

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::polyring::{Poly, PolyMatrix, PolyVec};

pub const LABEL_MATRIX: u8 = 0x00;
pub const LABEL_SECRET: u8 = 0x01;
pub const LABEL_ERROR: u8 = 0x02;
pub const LABEL_PAYLOAD: u8 = 0x03;
pub const LABEL_RESEED: u8 = 0x04;
pub const LABEL_RECEIVER: u8 = 0x05;
pub const LABEL_EAVESDROPPER: u8 = 0x06;

/// 32 bytes of caller-supplied seed material.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntropyInput([u8; 32]);

impl EntropyInput {
    pub const LEN: usize = 32;

    pub fn new(bytes: [u8; 32]) -> Self {
        EntropyInput(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let arr: [u8; 32] = bytes.try_into().map_err(|_| {
            Error::InvalidEntropy(format!("expected 32 bytes, got {}", bytes.len()))
        })?;
        Ok(EntropyInput(arr))
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::InvalidEntropy(e.to_string()))?;
        Self::from_slice(&bytes)
    }

    /// Draws from the operating system's entropy source.
    pub fn from_os() -> Self {
        use rand::RngCore;
        let mut bytes = [0u8; 32];
        rand::rngs::OsRng.fill_bytes(&mut bytes);
        EntropyInput(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// A copy with bit `i` (LSB-first across the 256 bits) flipped.
    pub fn with_bit_flipped(&self, i: usize) -> Self {
        let mut b = self.0;
        b[(i / 8) % 32] ^= 1 << (i % 8);
        EntropyInput(b)
    }
}

impl std::fmt::Debug for EntropyInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("EntropyInput(<redacted>)")
    }
}

/// A SHAKE-256 stream bound to one `(entropy, label, extra)` triple.
pub struct DomainSeparatedXof {
    reader: <Shake256 as ExtendableOutput>::Reader,
    buf: [u8; 136],
    pos: usize,
    bit_byte: u8,
    bits_left: u32,
}

impl DomainSeparatedXof {
    pub fn new(ent: &EntropyInput, label: u8, extra: &[u8]) -> Self {
        let mut h = Shake256::default();
        h.update(ent.as_bytes());
        h.update(&[label]);
        h.update(extra);
        DomainSeparatedXof {
            reader: h.finalize_xof(),
            buf: [0; 136],
            pos: 136,
            bit_byte: 0,
            bits_left: 0,
        }
    }

    pub fn next_byte(&mut self) -> u8 {
        if self.pos == self.buf.len() {
            self.reader.read(&mut self.buf);
            self.pos = 0;
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        b
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out {
            *b = self.next_byte();
        }
    }

    /// Reads `width ≤ 8` bits, LSB-first within each byte.
    pub fn next_bits(&mut self, width: u32) -> u32 {
        let mut v = 0u32;
        for i in 0..width {
            if self.bits_left == 0 {
                self.bit_byte = self.next_byte();
                self.bits_left = 8;
            }
            v |= ((self.bit_byte & 1) as u32) << i;
            self.bit_byte >>= 1;
            self.bits_left -= 1;
        }
        v
    }

    /// Uniform residue in `[0, q)` by masked rejection on little-endian reads.
    pub fn uniform_mod(&mut self, p: &Params) -> u32 {
        let bits = p.coeff_bits();
        let nbytes = bits.div_ceil(8) as usize;
        let mask = ((1u64 << bits) - 1) as u32;
        loop {
            let mut v = 0u32;
            for i in 0..nbytes {
                v |= (self.next_byte() as u32) << (8 * i);
            }
            v &= mask;
            if v < p.q {
                return v;
            }
        }
    }
}

fn reduce_signed(v: i64, q: u32) -> u32 {
    v.rem_euclid(q as i64) as u32
}

/// Uniform public matrix `A ∈ R_q^{m×n}`, one XOF stream per entry.
pub fn expand_matrix(ent: &EntropyInput, p: &Params) -> PolyMatrix {
    let mut entries = Vec::with_capacity(p.m * p.n);
    for i in 0..p.m {
        for j in 0..p.n {
            let mut xof = DomainSeparatedXof::new(ent, LABEL_MATRIX, &[i as u8, j as u8]);
            let coeffs = (0..p.degree).map(|_| xof.uniform_mod(p)).collect();
            entries.push(Poly::from_reduced(coeffs));
        }
    }
    PolyMatrix::new(p.m, p.n, entries).expect("entry count matches m·n")
}

/// Short secret: coefficients uniform over `{-eta, …, eta}`.
pub fn sample_secret(ent: &EntropyInput, p: &Params) -> PolyVec {
    let mut xof = DomainSeparatedXof::new(ent, LABEL_SECRET, &[]);
    let span = 2 * p.eta + 1;
    let width = 32 - (span - 1).leading_zeros();
    let polys = (0..p.n)
        .map(|_| {
            let coeffs = (0..p.degree)
                .map(|_| loop {
                    let v = xof.next_bits(width);
                    if v < span {
                        break reduce_signed(v as i64 - p.eta as i64, p.q);
                    }
                })
                .collect();
            Poly::from_reduced(coeffs)
        })
        .collect();
    PolyVec(polys)
}

/// Error vector from the centered binomial distribution with parameter
/// `eta` (for `eta = 1`: `P(0) = 1/2`, `P(±1) = 1/4`).
pub fn sample_error(ent: &EntropyInput, p: &Params, nonce: u16) -> PolyVec {
    let mut xof = DomainSeparatedXof::new(ent, LABEL_ERROR, &nonce.to_be_bytes());
    let polys = (0..p.m)
        .map(|_| {
            let coeffs = (0..p.degree)
                .map(|_| {
                    let a = xof.next_bits(p.eta.min(8)).count_ones() as i64;
                    let b = xof.next_bits(p.eta.min(8)).count_ones() as i64;
                    reduce_signed(a - b, p.q)
                })
                .collect();
            Poly::from_reduced(coeffs)
        })
        .collect();
    PolyVec(polys)
}

/// Binary payload `r ∈ {0,1}^{m·N}`.
pub fn seed_payload(ent: &EntropyInput, p: &Params) -> PolyVec {
    let mut xof = DomainSeparatedXof::new(ent, LABEL_PAYLOAD, &[]);
    let polys = (0..p.m)
        .map(|_| Poly::from_reduced((0..p.degree).map(|_| xof.next_bits(1)).collect()))
        .collect();
    PolyVec(polys)
}

/// Derives a fresh 32-byte input from `ent` under `label`.
pub fn derive_entropy(ent: &EntropyInput, label: u8, extra: &[u8]) -> EntropyInput {
    let mut out = [0u8; 32];
    DomainSeparatedXof::new(ent, label, extra).fill(&mut out);
    EntropyInput(out)
}
