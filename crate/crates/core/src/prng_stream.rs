//! The public generator: entropy → hidden seed → register bank → bytes.

use rand_core::{impls, RngCore};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::lfsr_engine::LfsrBank;
use crate::lwe_hiding::hide_in;
use crate::params::Params;
use crate::polyring::Ring;
use crate::sampling::{derive_entropy, EntropyInput, LABEL_RESEED};

/// Default number of output bits between automatic re-hides.
pub const DEFAULT_RESEED_INTERVAL: u64 = 1 << 20;

/// Generator state. With `reseed_interval = 0` the stream comes from a
/// single hidden seed forever and the entropy input is not retained.
#[derive(Debug, Clone)]
pub struct PrngState {
    ring: Ring,
    bank: LfsrBank,
    ent: Option<EntropyInput>,
    reseed_interval: u64,
    bits_since_reseed: u64,
    bits_total: u64,
    generation: u64,
    out: BitString,
}

/// Builds a generator from `ent`.
pub fn new_generator(ent: &EntropyInput, p: &Params, reseed_interval: u64) -> Result<PrngState> {
    PrngState::new(ent, p, reseed_interval)
}

impl PrngState {
    pub fn new(ent: &EntropyInput, p: &Params, reseed_interval: u64) -> Result<Self> {
        p.validate()?;
        let ring = Ring::new(*p)?;
        let bank = LfsrBank::initialize(&hide_in(ent, &ring)?)?;
        Ok(PrngState {
            ring,
            bank,
            ent: (reseed_interval > 0).then_some(*ent),
            reseed_interval,
            bits_since_reseed: 0,
            bits_total: 0,
            generation: 0,
            out: BitString::new(),
        })
    }

    /// Default parameters and reseed interval.
    pub fn from_entropy(ent: &EntropyInput) -> Result<Self> {
        Self::new(ent, &Params::default(), DEFAULT_RESEED_INTERVAL)
    }

    /// A new generator with the same configuration and fresh entropy.
    pub fn fork(&self, ent: &EntropyInput) -> Result<Self> {
        Self::new(ent, self.ring.params(), self.reseed_interval)
    }

    pub fn params(&self) -> &Params {
        self.ring.params()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn bits_emitted(&self) -> u64 {
        self.bits_total
    }

    pub fn bits_since_reseed(&self) -> u64 {
        self.bits_since_reseed
    }

    pub fn reseed_interval(&self) -> u64 {
        self.reseed_interval
    }

    pub fn bank(&self) -> &LfsrBank {
        &self.bank
    }

    fn reseed(&mut self) -> Result<()> {
        let ent = self.ent.as_ref().expect("entropy is retained whenever reseeding is enabled");
        let next = derive_entropy(ent, LABEL_RESEED, &self.generation.to_be_bytes());
        self.bank = LfsrBank::initialize(&hide_in(&next, &self.ring)?)?;
        self.ent = Some(next);
        self.generation += 1;
        self.bits_since_reseed = 0;
        Ok(())
    }

    /// Appends `nbits` output bits to `out`, reseeding at interval boundaries.
    pub fn next_bits_into(&mut self, nbits: usize, out: &mut BitString) -> Result<()> {
        let mut need = nbits as u64;
        while need > 0 {
            let chunk = if self.reseed_interval > 0 {
                need.min(self.reseed_interval - self.bits_since_reseed)
            } else {
                need
            };
            self.bank.emit_into(chunk as usize, out)?;
            need -= chunk;
            self.bits_total += chunk;
            self.bits_since_reseed += chunk;
            if self.reseed_interval > 0 && self.bits_since_reseed == self.reseed_interval {
                self.reseed()?;
            }
        }
        Ok(())
    }

    pub fn next_bits(&mut self, nbits: usize) -> Result<BitString> {
        let mut out = BitString::with_capacity(nbits);
        self.next_bits_into(nbits, &mut out)?;
        Ok(out)
    }

    /// `8·nbytes` bits packed LSB-first.
    pub fn next_bytes(&mut self, nbytes: usize) -> Result<Vec<u8>> {
        let mut buf = vec![0u8; nbytes];
        self.fill(&mut buf)?;
        Ok(buf)
    }

    pub fn fill(&mut self, dest: &mut [u8]) -> Result<()> {
        let mut out = std::mem::take(&mut self.out);
        // bounded chunks keep the staging buffer small for large requests
        for chunk in dest.chunks_mut(1 << 16) {
            out.clear();
            self.next_bits_into(chunk.len() * 8, &mut out)?;
            let words = out.words();
            for (i, dst) in chunk.chunks_mut(8).enumerate() {
                dst.copy_from_slice(&words[i].to_le_bytes()[..dst.len()]);
            }
        }
        self.out = out;
        Ok(())
    }
}

impl RngCore for PrngState {
    fn next_u32(&mut self) -> u32 {
        impls::next_u32_via_fill(self)
    }

    fn next_u64(&mut self) -> u64 {
        impls::next_u64_via_fill(self)
    }

    /// Panics on a degenerate state; use [`RngCore::try_fill_bytes`] to
    /// observe the error instead.
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.fill(dest).expect("generator reached a degenerate state")
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
        self.fill(dest).map_err(|e: Error| rand_core::Error::new(e))
    }
}

/// Iterates over single output bits, buffering a block at a time.
pub struct Bits {
    state: PrngState,
    buf: BitString,
    pos: usize,
}

impl Bits {
    const BLOCK: usize = 1 << 15;

    pub fn new(state: PrngState) -> Self {
        Bits { state, buf: BitString::new(), pos: 0 }
    }

    pub fn into_inner(self) -> PrngState {
        self.state
    }
}

impl Iterator for Bits {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        if self.pos == self.buf.len() {
            self.buf.clear();
            self.state.next_bits_into(Self::BLOCK, &mut self.buf).ok()?;
            self.pos = 0;
        }
        let b = self.buf.get(self.pos);
        self.pos += 1;
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ent() -> EntropyInput {
        EntropyInput::new(std::array::from_fn(|i| i as u8))
    }

    #[test]
    fn determinism_and_chunking() {
        let p = Params::default();
        let mut a = PrngState::new(&ent(), &p, 4096).unwrap();
        let mut b = PrngState::new(&ent(), &p, 4096).unwrap();
        let whole = a.next_bytes(3000).unwrap();
        let mut parts = Vec::new();
        for n in [0usize, 1, 7, 500, 13, 2479] {
            parts.extend(b.next_bytes(n).unwrap());
        }
        assert_eq!(whole, parts);
        assert!(a.next_bytes(0).unwrap().is_empty());
    }

    #[test]
    fn lsb_first_bytes() {
        let p = Params::default();
        let mut a = PrngState::new(&ent(), &p, 0).unwrap();
        let mut b = a.clone();
        let bits = a.next_bits(64).unwrap();
        let bytes = b.next_bytes(8).unwrap();
        assert_eq!(bits.to_bytes(), bytes);
    }

    #[test]
    fn reseed_counters() {
        let p = Params::default();
        let mut g = PrngState::new(&ent(), &p, 1024).unwrap();
        g.next_bytes(127).unwrap();
        assert_eq!(g.generation(), 0);
        g.next_bytes(1).unwrap();
        assert_eq!(g.generation(), 1);
        assert_eq!(g.bits_since_reseed(), 0);
        g.next_bytes(128 * 3 + 5).unwrap();
        assert_eq!(g.generation(), 4);
        assert_eq!(g.bits_since_reseed(), 40);
        assert!(g.bits_since_reseed() < g.reseed_interval());

        let mut never = PrngState::new(&ent(), &p, 0).unwrap();
        never.next_bytes(100_000).unwrap();
        assert_eq!(never.generation(), 0);
    }

    #[test]
    fn reseed_changes_only_later_output() {
        let p = Params::default();
        let mut with = PrngState::new(&ent(), &p, 1024).unwrap();
        let mut without = PrngState::new(&ent(), &p, 0).unwrap();
        let a = with.next_bytes(256).unwrap();
        let b = without.next_bytes(256).unwrap();
        assert_eq!(a[..128], b[..128]);
        assert_ne!(a[128..], b[128..]);
    }

    #[test]
    fn rng_core_and_bit_iterator_agree() {
        let p = Params::default();
        let mut g = PrngState::new(&ent(), &p, 0).unwrap();
        let bits: BitString = Bits::new(g.clone()).take(256).collect();
        let mut buf = [0u8; 32];
        g.fill_bytes(&mut buf);
        assert_eq!(bits.to_bytes(), buf);
    }

    #[test]
    fn rejects_toy_params() {
        let toy = Params::with_ring(257, 4, 2, 2).unwrap();
        assert!(matches!(PrngState::new(&ent(), &toy, 0), Err(Error::InconsistentLayout(_))));
    }
}
