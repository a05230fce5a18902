//! Ring, lattice and bit-layout constants.
//!
//! Every derived quantity (the cofactor `k` with `q = k·N + 1` and the
//! primitive `2N`-th root of unity `psi`) is computed here and nowhere else.

use crate::error::{Error, Result};

/// The default modulus, `q = 32736 · 256 + 1`.
pub const DEFAULT_Q: u32 = 8_380_417;
/// Default polynomial degree `N`.
pub const DEFAULT_DEGREE: usize = 256;
/// Width of one serialized coefficient.
pub const WORD_BITS: u32 = 32;
pub const LFSR_COUNT: usize = 4;
pub const LFSR_BITS: usize = 256;
/// Bits of the hidden seed loaded into the register bank.
pub const STATE_BITS: usize = LFSR_COUNT * LFSR_BITS;
/// Bits of the hidden seed used as the whitening mask.
pub const MASK_BITS: usize = DEFAULT_DEGREE * WORD_BITS as usize - STATE_BITS;

/// Ring/lattice parameter set.
///
/// Fields are public so that callers can build custom sets; any such set
/// must pass [`Params::validate`] (or at least [`Params::validate_ring`] for
/// pure ring arithmetic) before use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub q: u32,
    /// Secret dimension.
    pub n: usize,
    /// Sample dimension.
    pub m: usize,
    /// Polynomial degree `N` of `X^N + 1`.
    pub degree: usize,
    pub word_bits: u32,
    /// Error/secret bound; centered coefficients lie in `[-eta, eta]`.
    pub eta: u32,
    /// Cofactor with `q = k·N + 1`.
    pub k: u32,
    /// Smallest primitive `2N`-th root of unity mod `q`.
    pub psi: u32,
    pub lfsr_count: usize,
    pub lfsr_bits: usize,
    pub state_bits: usize,
    pub mask_bits: usize,
}

impl Default for Params {
    fn default() -> Self {
        default_params()
    }
}

/// The reference parameter set: `q = 8380417`, `m = n = 4`, `N = 256`.
pub fn default_params() -> Params {
    Params::with_ring(DEFAULT_Q, DEFAULT_DEGREE, 4, 4).expect("default parameters are valid")
}

impl Params {
    /// Builds a parameter set for `Z_q[X]/(X^degree + 1)` with an `m×n`
    /// module, deriving `k` and `psi`. Only the ring conditions are checked;
    /// toy rings used in tests do not satisfy the 8192-bit layout.
    pub fn with_ring(q: u32, degree: usize, n: usize, m: usize) -> Result<Params> {
        check_modulus(q, degree, WORD_BITS)?;
        let two_n = 2 * degree as u64;
        let k = ((q as u64 - 1) / degree as u64) as u32;
        let psi = smallest_primitive_root(q, two_n)?;
        let state_bits = LFSR_COUNT * LFSR_BITS;
        Ok(Params {
            q,
            n,
            m,
            degree,
            word_bits: WORD_BITS,
            eta: 1,
            k,
            psi,
            lfsr_count: LFSR_COUNT,
            lfsr_bits: LFSR_BITS,
            state_bits,
            mask_bits: (degree * WORD_BITS as usize).saturating_sub(state_bits),
        })
    }

    /// Checks the conditions needed for negacyclic NTT arithmetic.
    pub fn validate_ring(&self) -> Result<()> {
        check_modulus(self.q, self.degree, self.word_bits)?;
        if self.k as u64 * self.degree as u64 + 1 != self.q as u64 {
            return Err(Error::InvalidModulus(format!(
                "k·N + 1 = {} does not equal q = {}",
                self.k as u64 * self.degree as u64 + 1,
                self.q
            )));
        }
        let q = self.q as u64;
        if self.psi < 2
            || self.psi as u64 >= q
            || pow_mod(self.psi as u64, self.degree as u64, q) != q - 1
        {
            return Err(Error::InvalidModulus(format!(
                "psi = {} is not a primitive {}-th root of unity",
                self.psi,
                2 * self.degree
            )));
        }
        if self.n == 0 || self.m == 0 {
            return Err(Error::InconsistentLayout("module dimensions must be non-zero".into()));
        }
        if self.eta == 0 || self.eta > 8 || 2 * self.eta as u64 + 1 >= q {
            return Err(Error::InconsistentLayout(format!("eta = {} out of range", self.eta)));
        }
        Ok(())
    }

    /// Checks every invariant, including the 1024 + 7168 = 8192 bit budget
    /// that the register bank relies on.
    pub fn validate(&self) -> Result<()> {
        self.validate_ring()?;
        if self.lfsr_count * self.lfsr_bits != self.state_bits {
            return Err(Error::InconsistentLayout(format!(
                "{} registers × {} bits != {} state bits",
                self.lfsr_count, self.lfsr_bits, self.state_bits
            )));
        }
        let poly_bits = self.degree * self.word_bits as usize;
        if self.state_bits + self.mask_bits != poly_bits || poly_bits != 8192 {
            return Err(Error::InconsistentLayout(format!(
                "state {} + mask {} must equal N·word_bits = {} = 8192",
                self.state_bits, self.mask_bits, poly_bits
            )));
        }
        if self.lfsr_count != LFSR_COUNT || self.lfsr_bits != LFSR_BITS {
            return Err(Error::InconsistentLayout(
                "the register bank is fixed at four 256-bit registers".into(),
            ));
        }
        Ok(())
    }

    /// `⌊q/2⌋`, the payload scaling factor.
    pub fn half_q(&self) -> u32 {
        self.q / 2
    }

    /// Bits needed to hold a coefficient, `⌈log2 q⌉`.
    pub fn coeff_bits(&self) -> u32 {
        32 - (self.q - 1).leading_zeros()
    }
}

fn check_modulus(q: u32, degree: usize, word_bits: u32) -> Result<()> {
    if degree < 2 || !degree.is_power_of_two() {
        return Err(Error::InconsistentLayout(format!(
            "degree {degree} must be a power of two ≥ 2"
        )));
    }
    if word_bits != WORD_BITS {
        return Err(Error::InconsistentLayout(format!(
            "coefficients serialize as {WORD_BITS}-bit words, got {word_bits}"
        )));
    }
    if q < 3 || q % 2 == 0 {
        return Err(Error::InvalidModulus(format!("q = {q} must be odd and at least 3")));
    }
    let two_n = 2 * degree as u64;
    if (q as u64 - 1) % two_n != 0 {
        return Err(Error::InvalidModulus(format!(
            "q = {q} is not congruent to 1 mod 2N = {two_n}"
        )));
    }
    if word_bits < 32 && q as u64 >= 1u64 << word_bits {
        return Err(Error::InvalidModulus(format!("q = {q} does not fit in {word_bits} bits")));
    }
    if !is_prime(q) {
        return Err(Error::InvalidModulus(format!("q = {q} must be prime")));
    }
    Ok(())
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Finds one primitive `order`-th root by powering small candidates up, then
/// returns the least element among all of its odd powers (the full set of
/// primitive roots of that order, `order` being a power of two).
fn smallest_primitive_root(q: u32, order: u64) -> Result<u32> {
    let q64 = q as u64;
    let cofactor = (q64 - 1) / order;
    let half = order / 2;
    let root = (2..q64)
        .map(|c| pow_mod(c, cofactor, q64))
        .find(|&w| pow_mod(w, half, q64) == q64 - 1)
        .ok_or_else(|| Error::InvalidModulus(format!("no primitive {order}-th root mod {q}")))?;
    let step = root * root % q64;
    let mut cur = root;
    let mut best = cur;
    for _ in 1..half {
        cur = cur * step % q64;
        best = best.min(cur);
    }
    Ok(best as u32)
}
