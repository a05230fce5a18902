//! Seed hiding `b = A·s + e + r·⌊q/2⌋`, the hiding/plain oracle pair, and an
//! empirical distinguishing experiment over the resulting samples.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::polyring::{Poly, PolyMatrix, PolyVec, Ring};
use crate::sampling::{expand_matrix, sample_error, sample_secret, seed_payload, EntropyInput};

/// Everything that went into one hidden seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub a: PolyMatrix,
    pub s: PolyVec,
    pub e: PolyVec,
    pub r: PolyVec,
}

/// Output of the hiding function. Only `b` is kept unless the crate is
/// built with the `transcript` feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenSeed {
    b: PolyVec,
    #[cfg(any(test, feature = "transcript"))]
    transcript: Option<Transcript>,
}

impl HiddenSeed {
    /// Wraps an externally computed `b`.
    pub fn from_b(b: PolyVec) -> Self {
        HiddenSeed {
            b,
            #[cfg(any(test, feature = "transcript"))]
            transcript: None,
        }
    }

    pub fn b(&self) -> &PolyVec {
        &self.b
    }

    /// The polynomial that feeds the register bank (index 0).
    pub fn designated(&self) -> &Poly {
        &self.b[0]
    }

    #[cfg(any(test, feature = "transcript"))]
    pub fn transcript(&self) -> Option<&Transcript> {
        self.transcript.as_ref()
    }
}

/// `A·s + e + r·⌊q/2⌋`.
pub fn conceal(
    ring: &Ring,
    a: &PolyMatrix,
    s: &PolyVec,
    e: &PolyVec,
    r: &PolyVec,
) -> Result<PolyVec> {
    let as_ = ring.mat_vec_mul(a, s)?;
    let noisy = ring.vec_add(&as_, e)?;
    ring.vec_add(&noisy, &ring.vec_scale(r, ring.params().half_q()))
}

/// Hides the payload derived from `ent` under the given parameters.
pub fn hide(ent: &EntropyInput, p: &Params) -> Result<HiddenSeed> {
    hide_in(ent, &Ring::new(*p)?)
}

pub fn hide_in(ent: &EntropyInput, ring: &Ring) -> Result<HiddenSeed> {
    let p = ring.params();
    let a = expand_matrix(ent, p);
    let s = sample_secret(ent, p);
    let e = sample_error(ent, p, 0);
    let r = seed_payload(ent, p);
    let b = conceal(ring, &a, &s, &e, &r)?;
    #[cfg(any(test, feature = "transcript"))]
    return Ok(HiddenSeed { b, transcript: Some(Transcript { a, s, e, r }) });
    #[cfg(not(any(test, feature = "transcript")))]
    return Ok(HiddenSeed { b });
}

/// How an oracle chooses the payload `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadMode {
    Fresh,
    /// Every coefficient set to the given bit.
    Fixed(bool),
}

/// Knobs for deliberately weakened oracles (positive controls).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub zero_error: bool,
    pub payload: PayloadMode,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { zero_error: false, payload: PayloadMode::Fresh }
    }
}

/// One oracle answer `(A, s, b)` plus the noise that produced it.
#[derive(Debug, Clone)]
pub struct LweSample {
    pub a: PolyMatrix,
    pub s: PolyVec,
    pub b: PolyVec,
    pub e: PolyVec,
    /// `None` for the plain oracle.
    pub r: Option<PolyVec>,
}

fn rng_error(ring: &Ring, rng: &mut impl RngCore, dim: usize) -> PolyVec {
    let p = ring.params();
    let eta = p.eta;
    let polys = (0..dim)
        .map(|_| {
            let signed: Vec<i64> = (0..p.degree)
                .map(|_| {
                    let bits = rng.next_u32();
                    let a = (bits & ((1 << eta) - 1)).count_ones() as i64;
                    let b = ((bits >> 8) & ((1 << eta) - 1)).count_ones() as i64;
                    a - b
                })
                .collect();
            ring.poly_from_signed(&signed)
        })
        .collect();
    PolyVec(polys)
}

fn rng_payload(ring: &Ring, rng: &mut impl RngCore, dim: usize, mode: PayloadMode) -> PolyVec {
    let n = ring.degree();
    let polys = (0..dim)
        .map(|_| {
            let signed: Vec<i64> = (0..n)
                .map(|_| match mode {
                    PayloadMode::Fresh => (rng.next_u32() & 1) as i64,
                    PayloadMode::Fixed(bit) => bit as i64,
                })
                .collect();
            ring.poly_from_signed(&signed)
        })
        .collect();
    PolyVec(polys)
}

pub fn uniform_poly(ring: &Ring, rng: &mut impl RngCore) -> Poly {
    let q = ring.q();
    ring.poly_from_signed(&(0..ring.degree()).map(|_| rng.gen_range(0..q) as i64).collect::<Vec<_>>())
}

pub fn uniform_matrix(ring: &Ring, rng: &mut impl RngCore) -> PolyMatrix {
    let p = ring.params();
    let entries = (0..p.m * p.n).map(|_| uniform_poly(ring, rng)).collect();
    PolyMatrix::new(p.m, p.n, entries).expect("m·n entries")
}

/// Short secret with coefficients uniform over `{-eta, …, eta}`.
pub fn short_secret(ring: &Ring, rng: &mut impl RngCore) -> PolyVec {
    let p = ring.params();
    let span = 2 * p.eta + 1;
    let polys = (0..p.n)
        .map(|_| {
            let signed: Vec<i64> =
                (0..p.degree).map(|_| rng.gen_range(0..span) as i64 - p.eta as i64).collect();
            ring.poly_from_signed(&signed)
        })
        .collect();
    PolyVec(polys)
}

fn oracle(
    ring: &Ring,
    a: &PolyMatrix,
    s: &PolyVec,
    rng: &mut impl RngCore,
    config: OracleConfig,
    hiding: bool,
) -> Result<LweSample> {
    if a.cols() != s.dim() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: s.dim() });
    }
    let m = a.rows();
    let e = if config.zero_error {
        PolyVec::zero(m, ring.degree())
    } else {
        rng_error(ring, rng, m)
    };
    let mut b = ring.vec_add(&ring.mat_vec_mul(a, s)?, &e)?;
    let r = if hiding {
        let r = rng_payload(ring, rng, m, config.payload);
        b = ring.vec_add(&b, &ring.vec_scale(&r, ring.params().half_q()))?;
        Some(r)
    } else {
        None
    };
    Ok(LweSample { a: a.clone(), s: s.clone(), b, e, r })
}

/// Hiding oracle: fresh `e` and fresh binary `r` on every call.
pub fn oracle_hiding(
    ring: &Ring,
    a: &PolyMatrix,
    s: &PolyVec,
    rng: &mut impl RngCore,
) -> Result<LweSample> {
    oracle(ring, a, s, rng, OracleConfig::default(), true)
}

/// Plain LWE oracle: `b = A·s + e`.
pub fn oracle_plain(
    ring: &Ring,
    a: &PolyMatrix,
    s: &PolyVec,
    rng: &mut impl RngCore,
) -> Result<LweSample> {
    oracle(ring, a, s, rng, OracleConfig::default(), false)
}

pub fn oracle_with_config(
    ring: &Ring,
    a: &PolyMatrix,
    s: &PolyVec,
    rng: &mut impl RngCore,
    config: OracleConfig,
    hiding: bool,
) -> Result<LweSample> {
    oracle(ring, a, s, rng, config, hiding)
}

/// How the secret is chosen per experiment sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretMode {
    FreshShort,
    Zero,
}

/// A distribution over `b ∈ R_q^m` for the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    Hiding { config: OracleConfig, secret: SecretMode },
    Plain { config: OracleConfig, secret: SecretMode },
    Uniform,
}

impl SampleSource {
    pub fn hiding() -> Self {
        SampleSource::Hiding { config: OracleConfig::default(), secret: SecretMode::FreshShort }
    }

    pub fn label(&self) -> String {
        match self {
            SampleSource::Hiding { config, secret } => {
                format!("hiding{}", suffix(config, secret, true))
            }
            SampleSource::Plain { config, secret } => {
                format!("plain{}", suffix(config, secret, false))
            }
            SampleSource::Uniform => "uniform".into(),
        }
    }

    /// Draws the flattened coefficients of one `b`. `A` is drawn uniformly
    /// in the NTT domain, which is the same distribution as drawing it in the
    /// coefficient domain since the transform is a bijection of `R_q`.
    fn draw(&self, ring: &Ring, rng: &mut impl RngCore, out: &mut Vec<u32>) {
        out.clear();
        let p = ring.params();
        let q = p.q;
        let (config, secret, hiding) = match *self {
            SampleSource::Uniform => {
                out.extend((0..p.m * p.degree).map(|_| rng.gen_range(0..q)));
                return;
            }
            SampleSource::Hiding { config, secret } => (config, secret, true),
            SampleSource::Plain { config, secret } => (config, secret, false),
        };
        let s_hat: Vec<Poly> = match secret {
            SecretMode::FreshShort => short_secret(ring, rng).iter().map(|x| ring.ntt(x)).collect(),
            SecretMode::Zero => vec![ring.zero(); p.n],
        };
        for _ in 0..p.m {
            let mut acc = ring.zero();
            for sj in &s_hat {
                let a_hat = uniform_poly(ring, rng);
                acc = ring.add(&acc, &ring.pointwise(&a_hat, sj));
            }
            let mut row = ring.inv_ntt(&acc);
            if !config.zero_error {
                row = ring.add(&row, &rng_error(ring, rng, 1)[0]);
            }
            if hiding {
                let r = &rng_payload(ring, rng, 1, config.payload)[0];
                row = ring.add(&row, &ring.scale(r, p.half_q()));
            }
            out.extend_from_slice(row.coeffs());
        }
    }
}

fn suffix(config: &OracleConfig, secret: &SecretMode, hiding: bool) -> String {
    let mut s = String::new();
    if config.zero_error {
        s.push_str("[e=0]");
    }
    if let (true, PayloadMode::Fixed(bit)) = (hiding, config.payload) {
        s.push_str(&format!("[r={}]", bit as u8));
    }
    if *secret == SecretMode::Zero {
        s.push_str("[s=0]");
    }
    s
}

/// Binary tests applied to the flattened coefficients of a sample `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distinguisher {
    /// 64-bin chi-square against uniform `[0, q)`, rejecting at 5%.
    ChiSquare,
    /// Lag-1 serial correlation beyond `1.96/√len`.
    SerialCorrelation,
    /// Count of coefficients in `(q/4, 3q/4)`, one-sided at `+2σ`.
    HighBitWeight,
}

pub const BATTERY: [Distinguisher; 3] =
    [Distinguisher::ChiSquare, Distinguisher::SerialCorrelation, Distinguisher::HighBitWeight];

impl Distinguisher {
    pub fn name(&self) -> &'static str {
        match self {
            Distinguisher::ChiSquare => "chi_square",
            Distinguisher::SerialCorrelation => "serial_correlation",
            Distinguisher::HighBitWeight => "high_bit_weight",
        }
    }

    fn decide(&self, coeffs: &[u32], q: u32, chi_crit: f64) -> bool {
        let len = coeffs.len() as f64;
        match self {
            Distinguisher::ChiSquare => {
                let mut bins = [0u32; 64];
                for &c in coeffs {
                    bins[(c as u64 * 64 / q as u64) as usize] += 1;
                }
                let expect = len / 64.0;
                let chi2: f64 =
                    bins.iter().map(|&o| (o as f64 - expect).powi(2) / expect).sum();
                chi2 > chi_crit
            }
            Distinguisher::SerialCorrelation => {
                if coeffs.windows(2).all(|w| w[0] == w[1]) {
                    return false;
                }
                let xs: Vec<f64> = coeffs.iter().map(|&c| c as f64 / q as f64).collect();
                let mean = xs.iter().sum::<f64>() / len;
                let var: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
                let cov: f64 = xs.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
                (cov / var).abs() > 1.96 / len.sqrt()
            }
            Distinguisher::HighBitWeight => {
                let lo = q / 4;
                let hi = q - q / 4;
                let weight = coeffs.iter().filter(|&&c| c > lo && c < hi).count() as f64;
                weight > len / 2.0 + 2.0 * (len / 4.0).sqrt()
            }
        }
    }
}

/// Empirical advantage of one distinguisher.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageRow {
    pub name: &'static str,
    pub p_left: f64,
    pub p_right: f64,
    pub advantage: f64,
    pub sigma: f64,
}

impl AdvantageRow {
    pub fn ci95(&self) -> (f64, f64) {
        (self.advantage - 1.96 * self.sigma, self.advantage + 1.96 * self.sigma)
    }

    /// Whether the advantage is within `k` standard errors of zero.
    pub fn within_sigmas(&self, k: f64) -> bool {
        self.advantage <= k * self.sigma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageReport {
    pub left: String,
    pub right: String,
    pub trials: usize,
    pub rows: Vec<AdvantageRow>,
}

impl AdvantageReport {
    pub fn row(&self, d: Distinguisher) -> Option<&AdvantageRow> {
        self.rows.iter().find(|r| r.name == d.name())
    }
}

impl fmt::Display for AdvantageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} vs {}, trials={}", self.left, self.right, self.trials)?;
        writeln!(f, "# distinguisher advantage sigma ci95_low ci95_high")?;
        for r in &self.rows {
            let (lo, hi) = r.ci95();
            writeln!(f, "{} {:.6} {:.6} {:.6} {:.6}", r.name, r.advantage, r.sigma, lo, hi)?;
        }
        Ok(())
    }
}

pub const MIN_TRIALS: usize = 1000;
const CHUNKS: usize = 16;

/// Runs the battery against `trials` samples from each of two sources.
/// Work is split into a fixed number of independently seeded chunks so the
/// result does not depend on the host's thread count.
pub fn run_experiment(
    left: SampleSource,
    right: SampleSource,
    trials: usize,
    p: &Params,
    seed: u64,
) -> Result<AdvantageReport> {
    if trials < MIN_TRIALS {
        return Err(Error::InsufficientTrials { required: MIN_TRIALS, got: trials });
    }
    let ring = Ring::new(*p)?;
    let chi_crit = ChiSquared::new(63.0).expect("dof > 0").inverse_cdf(0.95);
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(CHUNKS);

    let run_chunk = |chunk: usize| -> [[u64; 3]; 2] {
        let count = trials / CHUNKS + usize::from(chunk < trials % CHUNKS);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let mut hits = [[0u64; 3]; 2];
        let mut buf = Vec::new();
        for _ in 0..count {
            for (side, src) in [left, right].iter().enumerate() {
                src.draw(&ring, &mut rng, &mut buf);
                for (k, d) in BATTERY.iter().enumerate() {
                    hits[side][k] += d.decide(&buf, p.q, chi_crit) as u64;
                }
            }
        }
        hits
    };

    let mut totals = [[0u64; 3]; 2];
    let mut next = 0;
    while next < CHUNKS {
        let batch: Vec<usize> = (next..(next + threads).min(CHUNKS)).collect();
        next += batch.len();
        let results: Vec<[[u64; 3]; 2]> = std::thread::scope(|scope| {
            let handles: Vec<_> =
                batch.iter().map(|&c| scope.spawn(move || run_chunk(c))).collect();
            handles.into_iter().map(|h| h.join().expect("experiment worker panicked")).collect()
        });
        for h in results {
            for side in 0..2 {
                for k in 0..3 {
                    totals[side][k] += h[side][k];
                }
            }
        }
    }

    let t = trials as f64;
    let rows = BATTERY
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let p1 = totals[0][k] as f64 / t;
            let p2 = totals[1][k] as f64 / t;
            AdvantageRow {
                name: d.name(),
                p_left: p1,
                p_right: p2,
                advantage: (p1 - p2).abs(),
                sigma: (p1 * (1.0 - p1) / t + p2 * (1.0 - p2) / t).sqrt(),
            }
        })
        .collect();
    Ok(AdvantageReport { left: left.label(), right: right.label(), trials, rows })
}

/// Hiding samples (fresh uniform `A`, fresh short `s`) against uniform.
pub fn distinguishing_experiment(trials: usize, p: &Params) -> Result<AdvantageReport> {
    run_experiment(SampleSource::hiding(), SampleSource::Uniform, trials, p, 0x5eed)
}

/// Deliberately broken control: `s = 0`, `e = 0`, `r = 1…1` for the hiding
/// side against `s = 0`, `e = 0` plain samples.
pub fn positive_control(trials: usize, p: &Params) -> Result<AdvantageReport> {
    let config = OracleConfig { zero_error: true, payload: PayloadMode::Fixed(true) };
    run_experiment(
        SampleSource::Hiding { config, secret: SecretMode::Zero },
        SampleSource::Plain { config, secret: SecretMode::Zero },
        trials,
        p,
        0xc0de,
    )
}
