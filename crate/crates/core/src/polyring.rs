//! Arithmetic in `R_q = Z_q[X]/(X^N + 1)`.
//!
//! Multiplication goes through a full-split negacyclic NTT (Cooley-Tukey
//! forward, Gentleman-Sande inverse) with twiddles `psi^brv(k)`. The
//! schoolbook product is kept alongside as the reference route.

use crate::error::{Error, Result};
use crate::params::{pow_mod, Params};

/// A ring element; coefficients are always fully reduced into `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(degree: usize) -> Self {
        Poly { coeffs: vec![0; degree] }
    }

    /// Wraps coefficients that are already reduced. Panics in debug builds
    /// if any coefficient is not; use [`Ring::poly`] for checked input.
    pub(crate) fn from_reduced(coeffs: Vec<u32>) -> Self {
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A vector of ring elements (`s`, `e`, `r` or `b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyVec(pub Vec<Poly>);

impl PolyVec {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyVec(vec![Poly::zero(degree); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poly> {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for PolyVec {
    type Output = Poly;
    fn index(&self, i: usize) -> &Poly {
        &self.0[i]
    }
}

/// Row-major `rows × cols` matrix of ring elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize, degree: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(degree); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }
}

/// Parameters plus precomputed NTT tables.
#[derive(Debug, Clone)]
pub struct Ring {
    params: Params,
    zetas: Vec<u32>,
    zetas_inv: Vec<u32>,
    degree_inv: u32,
    barrett: u64,
}

fn bit_reverse(x: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - bits)
    }
}

impl Ring {
    pub fn new(params: Params) -> Result<Self> {
        params.validate_ring()?;
        let q = params.q as u64;
        let n = params.degree;
        let log_n = n.trailing_zeros();
        let zetas: Vec<u32> = (0..n)
            .map(|k| pow_mod(params.psi as u64, bit_reverse(k, log_n) as u64, q) as u32)
            .collect();
        let zetas_inv = zetas.iter().map(|&z| pow_mod(z as u64, q - 2, q) as u32).collect();
        let degree_inv = pow_mod(n as u64, q - 2, q) as u32;
        let barrett = u64::MAX / q;
        Ok(Ring { params, zetas, zetas_inv, degree_inv, barrett })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn degree(&self) -> usize {
        self.params.degree
    }

    /// Barrett reduction of a product of two residues.
    #[inline]
    fn mulq(&self, a: u32, b: u32) -> u32 {
        let x = a as u64 * b as u64;
        let t = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - t * self.params.q as u64;
        while r >= self.params.q as u64 {
            r -= self.params.q as u64;
        }
        r as u32
    }

    #[inline]
    fn addq(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.params.q {
            s - self.params.q
        } else {
            s
        }
    }

    #[inline]
    fn subq(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.params.q - b
        }
    }

    /// Checked constructor.
    pub fn poly(&self, coeffs: Vec<u32>) -> Result<Poly> {
        if coeffs.len() != self.degree() {
            return Err(Error::DimensionMismatch { expected: self.degree(), found: coeffs.len() });
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, &c)| c >= self.q()) {
            return Err(Error::CoefficientOutOfRange { index, value, modulus: self.q() });
        }
        Ok(Poly { coeffs })
    }

    /// Builds a polynomial from signed coefficients, reducing each mod `q`.
    pub fn poly_from_signed(&self, coeffs: &[i64]) -> Poly {
        let q = self.q() as i64;
        let mut out: Vec<u32> = coeffs.iter().map(|&c| c.rem_euclid(q) as u32).collect();
        out.resize(self.degree(), 0);
        Poly { coeffs: out }
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.degree())
    }

    pub fn one(&self) -> Poly {
        self.monomial(0)
    }

    /// `X^i` for `i < N`.
    pub fn monomial(&self, i: usize) -> Poly {
        let mut p = self.zero();
        p.coeffs[i] = 1;
        p
    }

    /// Centered representative of a residue, in `(-q/2, q/2]`.
    pub fn centered(&self, c: u32) -> i64 {
        let q = self.q() as i64;
        let c = c as i64;
        if c > q / 2 {
            c - q
        } else {
            c
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.addq(x, y)).collect() }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.subq(x, y)).collect() }
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|&x| self.subq(0, x)).collect() }
    }

    pub fn scale(&self, a: &Poly, k: u32) -> Poly {
        let k = k % self.q();
        Poly { coeffs: a.coeffs.iter().map(|&x| self.mulq(x, k)).collect() }
    }

    /// Forward negacyclic NTT; output is in bit-reversed order.
    pub fn ntt(&self, a: &Poly) -> Poly {
        let mut c = a.coeffs.clone();
        self.ntt_in_place(&mut c);
        Poly { coeffs: c }
    }

    pub fn inv_ntt(&self, a: &Poly) -> Poly {
        let mut c = a.coeffs.clone();
        self.inv_ntt_in_place(&mut c);
        Poly { coeffs: c }
    }

    fn ntt_in_place(&self, a: &mut [u32]) {
        let n = a.len();
        let mut len = n / 2;
        while len >= 1 {
            let blocks = n / (2 * len);
            for b in 0..blocks {
                let z = self.zetas[blocks + b];
                let start = b * 2 * len;
                for j in start..start + len {
                    let t = self.mulq(z, a[j + len]);
                    a[j + len] = self.subq(a[j], t);
                    a[j] = self.addq(a[j], t);
                }
            }
            len /= 2;
        }
    }

    fn inv_ntt_in_place(&self, a: &mut [u32]) {
        let n = a.len();
        let mut len = 1;
        while len < n {
            let blocks = n / (2 * len);
            for b in 0..blocks {
                let z = self.zetas_inv[blocks + b];
                let start = b * 2 * len;
                for j in start..start + len {
                    let u = a[j];
                    let v = a[j + len];
                    a[j] = self.addq(u, v);
                    a[j + len] = self.mulq(self.subq(u, v), z);
                }
            }
            len *= 2;
        }
        for x in a.iter_mut() {
            *x = self.mulq(*x, self.degree_inv);
        }
    }

    /// Coefficient-wise product of two NTT-domain polynomials.
    pub fn pointwise(&self, a: &Poly, b: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.mulq(x, y)).collect() }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.inv_ntt(&self.pointwise(&self.ntt(a), &self.ntt(b)))
    }

    /// `O(N²)` negacyclic product, wrapping with `X^N = -1`.
    pub fn mul_schoolbook(&self, a: &Poly, b: &Poly) -> Poly {
        let n = self.degree();
        let q = self.q() as u64;
        let mut acc = vec![0u64; n];
        let mut neg = vec![0u64; n];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                let prod = x as u64 * y as u64 % q;
                if i + j < n {
                    acc[i + j] = (acc[i + j] + prod) % q;
                } else {
                    neg[i + j - n] = (neg[i + j - n] + prod) % q;
                }
            }
        }
        Poly {
            coeffs: acc.iter().zip(&neg).map(|(&p, &m)| ((p + q - m) % q) as u32).collect(),
        }
    }

    pub fn vec_add(&self, a: &PolyVec, b: &PolyVec) -> Result<PolyVec> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        Ok(PolyVec(a.iter().zip(b.iter()).map(|(x, y)| self.add(x, y)).collect()))
    }

    pub fn vec_sub(&self, a: &PolyVec, b: &PolyVec) -> Result<PolyVec> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        Ok(PolyVec(a.iter().zip(b.iter()).map(|(x, y)| self.sub(x, y)).collect()))
    }

    pub fn vec_scale(&self, a: &PolyVec, k: u32) -> PolyVec {
        PolyVec(a.iter().map(|x| self.scale(x, k)).collect())
    }

    /// `A·s`, transforming each entry once and accumulating in the NTT domain.
    pub fn mat_vec_mul(&self, a: &PolyMatrix, s: &PolyVec) -> Result<PolyVec> {
        if a.cols() != s.dim() {
            return Err(Error::DimensionMismatch { expected: a.cols(), found: s.dim() });
        }
        let s_hat: Vec<Poly> = s.iter().map(|p| self.ntt(p)).collect();
        let rows = (0..a.rows())
            .map(|i| {
                let mut acc = self.zero();
                for (j, sj) in s_hat.iter().enumerate() {
                    let prod = self.pointwise(&self.ntt(a.get(i, j)), sj);
                    acc = self.add(&acc, &prod);
                }
                self.inv_ntt(&acc)
            })
            .collect();
        Ok(PolyVec(rows))
    }

    /// Canonical encoding: word `i` holds `coeffs[i]` as a little-endian
    /// `u32`, giving `N·32` bits (8192 for the default ring).
    pub fn serialize(&self, p: &Poly) -> Vec<u8> {
        p.coeffs.iter().flat_map(|c| c.to_le_bytes()).collect()
    }

    pub fn deserialize(&self, bytes: &[u8]) -> Result<Poly> {
        let expected = self.degree() * 4;
        if bytes.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: bytes.len() });
        }
        let coeffs = bytes
            .chunks_exact(4)
            .map(|w| u32::from_le_bytes([w[0], w[1], w[2], w[3]]))
            .collect();
        self.poly(coeffs)
    }
}
