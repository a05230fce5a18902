//! Desk-scale randomness battery, raw dumps for external Dieharder runs, and
//! the 3-bit scatter export.

use std::fmt;
use std::io::{self, Write};

use rand_core::RngCore;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::bits::BitString;
use crate::error::{Error, Result};

pub const MIN_BATTERY_BITS: usize = 1_000_000;
pub const FAIL_BELOW: f64 = 1e-6;
pub const WEAK_BELOW: f64 = 0.005;
pub const BLOCK_LEN: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Weak,
    Fail,
}

impl Verdict {
    pub fn from_p(p: f64) -> Self {
        if p < FAIL_BELOW {
            Verdict::Fail
        } else if p < WEAK_BELOW {
            Verdict::Weak
        } else {
            Verdict::Pass
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASSED",
            Verdict::Weak => "WEAK",
            Verdict::Fail => "FAILED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub test_name: &'static str,
    pub statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
}

impl TestReport {
    fn new(test_name: &'static str, statistic: f64, p_value: f64) -> Self {
        let p_value = if p_value.is_nan() { 0.0 } else { p_value.clamp(0.0, 1.0) };
        TestReport { test_name, statistic, p_value, verdict: Verdict::from_p(p_value) }
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>20} | statistic {:>14.6} | p-value {:.8} | {}",
            self.test_name, self.statistic, self.p_value, self.verdict
        )
    }
}

fn igamc(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(a, x)
    }
}

pub fn monobit(bits: &BitString) -> TestReport {
    let n = bits.len() as f64;
    let ones = bits.count_ones() as f64;
    let s_obs = (2.0 * ones - n).abs() / n.sqrt();
    TestReport::new("monobit", s_obs, erfc(s_obs / std::f64::consts::SQRT_2))
}

pub fn block_frequency(bits: &BitString, block: usize) -> TestReport {
    let blocks = bits.len() / block;
    let mut chi2 = 0.0;
    for i in 0..blocks {
        let ones: u32 = (0..block)
            .step_by(64)
            .map(|off| {
                let w = (block - off).min(64) as u32;
                bits.read_bits(i * block + off, w).count_ones()
            })
            .sum();
        let pi = ones as f64 / block as f64;
        chi2 += (pi - 0.5).powi(2);
    }
    chi2 *= 4.0 * block as f64;
    TestReport::new("block_frequency", chi2, igamc(blocks as f64 / 2.0, chi2 / 2.0))
}

pub fn runs(bits: &BitString) -> TestReport {
    let n = bits.len() as f64;
    let pi = bits.count_ones() as f64 / n;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return TestReport::new("runs", f64::NAN, 0.0);
    }
    // transitions between adjacent bits, word-parallel
    let words = bits.words();
    let len = bits.len();
    let mut transitions = 0u64;
    for (i, &w) in words.iter().enumerate() {
        let next_bit = if i + 1 < words.len() { words[i + 1] & 1 } else { 0 };
        let shifted = (w >> 1) | (next_bit << 63);
        let valid = (len - 64 * i).min(64);
        // pairs (j, j+1) with j+1 < len
        let pairs = if 64 * i + valid == len { valid - 1 } else { valid };
        let mask = if pairs >= 64 { u64::MAX } else { (1u64 << pairs) - 1 };
        transitions += ((w ^ shifted) & mask).count_ones() as u64;
    }
    let v = transitions as f64 + 1.0;
    let num = (v - 2.0 * n * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi);
    TestReport::new("runs", v, erfc(num / den))
}

/// Overlapping serial test with 2-bit patterns; reports `∇ψ²`.
pub fn serial2(bits: &BitString) -> TestReport {
    let n = bits.len();
    let mut pairs = [0u64; 4];
    let mut prev = bits.get(0) as usize;
    for i in 1..=n {
        let cur = bits.get(i % n) as usize;
        pairs[(prev << 1) | cur] += 1;
        prev = cur;
    }
    let ones = bits.count_ones() as f64;
    let nf = n as f64;
    let singles = [nf - ones, ones];
    let psi2 = 4.0 / nf * pairs.iter().map(|&c| (c as f64).powi(2)).sum::<f64>() - nf;
    let psi1 = 2.0 / nf * singles.iter().map(|c| c * c).sum::<f64>() - nf;
    let del = psi2 - psi1;
    TestReport::new("serial_2bit", del, igamc(1.0, del / 2.0))
}

pub fn byte_chi_square(bits: &BitString) -> TestReport {
    let mut counts = [0u64; 256];
    let bytes = bits.to_bytes();
    let full = bits.len() / 8;
    for &b in &bytes[..full] {
        counts[b as usize] += 1;
    }
    let expect = full as f64 / 256.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    TestReport::new("byte_chi_square", chi2, igamc(255.0 / 2.0, chi2 / 2.0))
}

/// Lag-1 circular correlation of consecutive 64-bit words.
pub fn serial_correlation64(bits: &BitString) -> TestReport {
    let count = bits.len() / 64;
    let xs: Vec<f64> = bits.words()[..count].iter().map(|&w| w as f64 / 2f64.powi(64)).collect();
    let n = count as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    if var == 0.0 {
        return TestReport::new("serial_correlation64", f64::NAN, 0.0);
    }
    let cov: f64 = (0..count).map(|i| (xs[i] - mean) * (xs[(i + 1) % count] - mean)).sum();
    let r = cov / var;
    let z = r.abs() * n.sqrt();
    TestReport::new("serial_correlation64", r, erfc(z / std::f64::consts::SQRT_2))
}

/// Runs all six tests over a captured bit string.
pub fn run_battery_bits(bits: &BitString) -> Result<Vec<TestReport>> {
    if bits.len() < MIN_BATTERY_BITS {
        return Err(Error::InsufficientBits { required: MIN_BATTERY_BITS, got: bits.len() });
    }
    Ok(vec![
        monobit(bits),
        block_frequency(bits, BLOCK_LEN),
        runs(bits),
        serial2(bits),
        byte_chi_square(bits),
        serial_correlation64(bits),
    ])
}

/// Draws `nbits` (rounded up to whole bytes) from `source` and runs the battery.
pub fn run_battery(source: &mut impl RngCore, nbits: usize) -> Result<Vec<TestReport>> {
    if nbits < MIN_BATTERY_BITS {
        return Err(Error::InsufficientBits { required: MIN_BATTERY_BITS, got: nbits });
    }
    let mut buf = vec![0u8; nbits.div_ceil(8)];
    source.fill_bytes(&mut buf);
    let mut bits = BitString::from_bytes(&buf);
    if bits.len() != nbits {
        bits = bits.slice(0, nbits);
    }
    run_battery_bits(&bits)
}

/// Writes exactly `nbytes` of generator output to `sink`.
pub fn dump_raw(source: &mut impl RngCore, nbytes: u64, sink: &mut impl Write) -> io::Result<()> {
    let mut buf = vec![0u8; 1 << 20];
    let mut left = nbytes;
    while left > 0 {
        let n = left.min(buf.len() as u64) as usize;
        source
            .try_fill_bytes(&mut buf[..n])
            .map_err(|e| io::Error::other(e.to_string()))?;
        sink.write_all(&buf[..n])?;
        left -= n as u64;
    }
    sink.flush()
}

/// Splits a bit string into 3-bit indexes, LSB-first.
pub fn scatter_from_bits(bits: &BitString) -> Vec<u8> {
    (0..bits.len() / 3).map(|i| bits.read_bits(3 * i, 3) as u8).collect()
}

pub fn scatter_indexes(source: &mut impl RngCore, count: usize) -> Vec<u8> {
    let mut buf = vec![0u8; (3 * count).div_ceil(8)];
    source.fill_bytes(&mut buf);
    let mut idx = scatter_from_bits(&BitString::from_bytes(&buf));
    idx.truncate(count);
    idx
}

/// `position,index` rows under a header line.
pub fn write_scatter_csv(indexes: &[u8], sink: &mut impl Write) -> io::Result<()> {
    writeln!(sink, "position,index")?;
    for (i, v) in indexes.iter().enumerate() {
        writeln!(sink, "{i},{v}")?;
    }
    sink.flush()
}

/// SHAKE-256 keystream used as the known-good control generator.
pub struct ReferenceXof {
    reader: <Shake256 as ExtendableOutput>::Reader,
}

impl ReferenceXof {
    pub fn new(seed: &[u8]) -> Self {
        let mut h = Shake256::default();
        h.update(b"reference-control");
        h.update(seed);
        ReferenceXof { reader: h.finalize_xof() }
    }
}

impl RngCore for ReferenceXof {
    fn next_u32(&mut self) -> u32 {
        rand_core::impls::next_u32_via_fill(self)
    }

    fn next_u64(&mut self) -> u64 {
        rand_core::impls::next_u64_via_fill(self)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.reader.read(dest);
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Shell command for the external Dieharder run over a dump file.
pub fn dieharder_command(path: &str) -> String {
    format!("dieharder -a -g 201 -f {path}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(n: usize) -> BitString {
        (0..n).map(|i| i % 2 == 1).collect()
    }

    #[test]
    fn all_zero_fails_monobit() {
        let zeros = BitString::zeros(1_000_000);
        let r = run_battery_bits(&zeros).unwrap();
        assert!(r[0].p_value < 1e-6);
        assert_eq!(r[0].verdict, Verdict::Fail);
        assert!(r.iter().all(|t| (0.0..=1.0).contains(&t.p_value)));
    }

    #[test]
    fn alternating_fails_runs() {
        let r = runs(&alternating(1_000_000));
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.statistic, 1_000_000.0);
    }

    #[test]
    fn runs_counts_match_naive() {
        let mut x = ReferenceXof::new(b"runs");
        let mut buf = vec![0u8; 1000];
        x.fill_bytes(&mut buf);
        let bits = BitString::from_bytes(&buf).slice(0, 7999);
        let naive = 1 + (1..bits.len()).filter(|&i| bits.get(i) != bits.get(i - 1)).count();
        assert_eq!(runs(&bits).statistic, naive as f64);
    }

    #[test]
    fn insufficient_bits() {
        assert_eq!(
            run_battery_bits(&BitString::zeros(999_999)),
            Err(Error::InsufficientBits { required: 1_000_000, got: 999_999 })
        );
    }

    #[test]
    fn reference_control_passes() {
        let mut x = ReferenceXof::new(b"control");
        let r = run_battery(&mut x, 10_000_000).unwrap();
        assert_eq!(r.len(), 6);
        for t in &r {
            assert_eq!(t.verdict, Verdict::Pass, "{t}");
        }
    }

    #[test]
    fn reference_control_rarely_fails() {
        let mut fails = [0u32; 6];
        for rep in 0..100u32 {
            let mut x = ReferenceXof::new(&rep.to_le_bytes());
            for (k, t) in run_battery(&mut x, 1_000_000).unwrap().iter().enumerate() {
                fails[k] += (t.verdict == Verdict::Fail) as u32;
            }
        }
        assert!(fails.iter().all(|&f| f <= 1), "{fails:?}");
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(Verdict::from_p(5e-7), Verdict::Fail);
        assert_eq!(Verdict::from_p(0.004), Verdict::Weak);
        assert_eq!(Verdict::from_p(0.005), Verdict::Pass);
    }

    #[test]
    fn scatter_encoding() {
        let bits = BitString::from_bit_str("000 111 010").unwrap();
        assert_eq!(scatter_from_bits(&bits), vec![0, 7, 2]);
        assert!(scatter_from_bits(&BitString::zeros(300)).iter().all(|&i| i == 0));
        let mut csv = Vec::new();
        write_scatter_csv(&[0, 7, 2], &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "position,index\n0,0\n1,7\n2,2\n");
    }
}
