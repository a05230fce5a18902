//! Four-register master/slave LFSR bank.
//!
//! Each register is 256 bits viewed as eight 32-bit words; word 0 holds bits
//! 0..32 (the LSB side). Registers shift toward the LSB and take feedback in
//! at the MSB end, so bits leave in the order they entered.
//!
//! L4 is the master. Each step reads L4's word at `cursor`; every set bit at
//! 1-based position `p` shifts L1..L3 by `p` bits, and afterwards L4 itself
//! shifts by the word's popcount. Ejected bits form the raw output, which is
//! XORed with the 7168-bit mask (cycled) before it leaves the bank.

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::lwe_hiding::HiddenSeed;
use crate::params::{LFSR_BITS, LFSR_COUNT, MASK_BITS, STATE_BITS};

pub const WORDS_PER_REGISTER: usize = LFSR_BITS / 32;
/// Coefficients of the designated polynomial consumed by the bank.
pub const SEED_WORDS: usize = 256;
const STATE_WORDS: usize = STATE_BITS / 32;

const _: () = assert!(LFSR_COUNT * WORDS_PER_REGISTER == STATE_WORDS);
const _: () = assert!(STATE_BITS + MASK_BITS == SEED_WORDS * 32);

#[inline]
fn low(width: u32) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// One 256-bit register.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Register([u64; 4]);

impl Register {
    pub fn from_words(words: [u32; WORDS_PER_REGISTER]) -> Self {
        let mut r = Register::default();
        for (k, w) in words.iter().enumerate() {
            r.set_word(k, *w);
        }
        r
    }

    pub fn word(&self, k: usize) -> u32 {
        (self.0[k / 2] >> (32 * (k % 2))) as u32
    }

    pub fn words(&self) -> [u32; WORDS_PER_REGISTER] {
        std::array::from_fn(|k| self.word(k))
    }

    fn set_word(&mut self, k: usize, v: u32) {
        let shift = 32 * (k % 2);
        let limb = &mut self.0[k / 2];
        *limb = (*limb & !(0xffff_ffffu64 << shift)) | ((v as u64) << shift);
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }

    #[inline]
    fn peek(&self, width: u32) -> u32 {
        self.0[0] as u32 & low(width)
    }

    /// Shifts by `p ∈ 1..=32` toward the LSB, inserting the low `p` bits of
    /// `fb` at the top. Returns the ejected bits.
    #[inline]
    fn shift_in(&mut self, p: u32, fb: u32) -> u32 {
        debug_assert!((1..=32).contains(&p));
        let out = self.peek(p);
        let l = &mut self.0;
        l[0] = (l[0] >> p) | (l[1] << (64 - p));
        l[1] = (l[1] >> p) | (l[2] << (64 - p));
        l[2] = (l[2] >> p) | (l[3] << (64 - p));
        l[3] = (l[3] >> p) | (((fb & low(p)) as u64) << (64 - p));
        out
    }
}

/// One slave shift within a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftRecord {
    pub position: u32,
    pub ejected: [u32; 3],
    pub feedback: [u32; 3],
}

/// Debug record of one step, rendered as a single line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepTrace {
    pub cursor: usize,
    pub word: u32,
    pub shifts: Vec<ShiftRecord>,
    pub master_shift: u32,
    pub master_ejected: u32,
    pub master_feedback: u32,
    pub raw_bits: usize,
}

impl fmt::Display for StepTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cursor={} word={:#010x} shifts=[", self.cursor, self.word)?;
        for (i, s) in self.shifts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(
                f,
                "p{}:out={:x},{:x},{:x}:fb={:x},{:x},{:x}",
                s.position,
                s.ejected[0],
                s.ejected[1],
                s.ejected[2],
                s.feedback[0],
                s.feedback[1],
                s.feedback[2]
            )?;
        }
        write!(
            f,
            "] l4=c{}:out={:x}:fb={:x} bits={}",
            self.master_shift, self.master_ejected, self.master_feedback, self.raw_bits
        )
    }
}

/// Raw bits one step over governing word `w` produces: three slave outputs
/// of `p` bits per set bit plus the master's `popcount(w)` bits.
pub fn raw_bits_for_word(w: u32) -> usize {
    let sum: u32 = (0..32).filter(|i| w >> i & 1 == 1).map(|i| i + 1).sum();
    3 * sum as usize + w.count_ones() as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrBank {
    regs: [Register; LFSR_COUNT],
    cursor: usize,
    mask: BitString,
    mask_cursor: usize,
    pending: BitString,
    pending_pos: usize,
    scratch: BitString,
}

impl LfsrBank {
    /// Loads the bank from the 256 coefficients of the designated polynomial.
    ///
    /// Round 0 puts coefficients 0..4 in word 0 of L1..L4. Each later round
    /// `k` compares `x12 = L1[k-1] ^ L2[k-1]` with `x34 = L3[k-1] ^ L4[k-1]`:
    /// the larger pair is filled first (ties fill in index order), taking
    /// the next four coefficients in ascending order. Coefficients 32..256
    /// become the whitening mask. No degeneracy check is made here.
    pub fn load(coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != SEED_WORDS {
            return Err(Error::InconsistentLayout(format!(
                "register bank needs {SEED_WORDS} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut regs = [Register::default(); LFSR_COUNT];
        for (j, reg) in regs.iter_mut().enumerate() {
            reg.set_word(0, coeffs[j]);
        }
        for k in 1..WORDS_PER_REGISTER {
            let x12 = regs[0].word(k - 1) ^ regs[1].word(k - 1);
            let x34 = regs[2].word(k - 1) ^ regs[3].word(k - 1);
            let order = if x34 > x12 { [2, 3, 0, 1] } else { [0, 1, 2, 3] };
            for (t, &j) in order.iter().enumerate() {
                regs[j].set_word(k, coeffs[4 * k + t]);
            }
        }
        let mut mask = BitString::with_capacity(MASK_BITS);
        for &c in &coeffs[STATE_WORDS..] {
            mask.push_bits(c as u64, 32);
        }
        Ok(LfsrBank {
            regs,
            cursor: 0,
            mask,
            mask_cursor: 0,
            pending: BitString::new(),
            pending_pos: 0,
            scratch: BitString::with_capacity(2048),
        })
    }

    /// Loads the bank from a hidden seed, refusing a zero master register
    /// (the generator would never advance).
    pub fn initialize(hs: &HiddenSeed) -> Result<Self> {
        let bank = Self::load(hs.designated().coeffs())?;
        if bank.regs[3].is_zero() {
            return Err(Error::DegenerateState);
        }
        Ok(bank)
    }

    pub fn registers(&self) -> &[Register; LFSR_COUNT] {
        &self.regs
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn mask(&self) -> &BitString {
        &self.mask
    }

    pub fn mask_cursor(&self) -> usize {
        self.mask_cursor
    }

    /// Already-whitened bits held back from the previous `emit`.
    pub fn buffered_bits(&self) -> usize {
        self.pending.len() - self.pending_pos
    }

    /// The master word that governs the next step.
    pub fn governing_word(&self) -> u32 {
        self.regs[3].word(self.cursor)
    }

    #[inline]
    fn step_into(&mut self, out: &mut BitString, mut trace: Option<&mut StepTrace>) {
        let k = self.cursor;
        let w = self.regs[3].word(k);
        let start_len = out.len();
        if let Some(t) = trace.as_deref_mut() {
            *t = StepTrace { cursor: k, word: w, ..StepTrace::default() };
        }
        let mut rest = w;
        while rest != 0 {
            let p = rest.trailing_zeros() + 1;
            rest &= rest - 1;
            let o1 = self.regs[0].peek(p);
            let o2 = self.regs[1].peek(p);
            let o3 = self.regs[2].peek(p);
            let fb = [o1 ^ o2, o2 ^ o3, o3 ^ (w & low(p))];
            self.regs[0].shift_in(p, fb[0]);
            self.regs[1].shift_in(p, fb[1]);
            self.regs[2].shift_in(p, fb[2]);
            out.push_bits(o1 as u64, p);
            out.push_bits(o2 as u64, p);
            out.push_bits(o3 as u64, p);
            if let Some(t) = trace.as_deref_mut() {
                t.shifts.push(ShiftRecord { position: p, ejected: [o1, o2, o3], feedback: fb });
            }
        }
        let c = w.count_ones();
        if c > 0 {
            let top = self.regs.iter().map(|r| r.word(k)).max().unwrap_or(0);
            let o4 = self.regs[3].peek(c);
            let fb4 = (top & low(c)) ^ o4;
            self.regs[3].shift_in(c, fb4);
            out.push_bits(o4 as u64, c);
            if let Some(t) = trace.as_deref_mut() {
                t.master_shift = c;
                t.master_ejected = o4;
                t.master_feedback = fb4 & low(c);
            }
        }
        if let Some(t) = trace {
            t.raw_bits = out.len() - start_len;
        }
        self.cursor = (k + 1) % WORDS_PER_REGISTER;
    }

    /// Runs one step and returns its raw (unwhitened) output. Bypasses the
    /// mask and the `emit` buffer.
    pub fn step(&mut self) -> BitString {
        let mut out = BitString::with_capacity(2048);
        self.step_into(&mut out, None);
        out
    }

    pub fn step_traced(&mut self) -> (BitString, StepTrace) {
        let mut out = BitString::with_capacity(2048);
        let mut trace = StepTrace::default();
        self.step_into(&mut out, Some(&mut trace));
        (out, trace)
    }

    fn whiten(&mut self, bits: &mut BitString) {
        let len = bits.len();
        let mask_len = self.mask.len();
        for (i, word) in bits.words_mut().iter_mut().enumerate() {
            let width = (len - 64 * i).min(64) as u32;
            let first = width.min((mask_len - self.mask_cursor) as u32);
            let mut m = self.mask.read_bits(self.mask_cursor, first);
            if first < width {
                m |= self.mask.read_bits(0, width - first) << first;
            }
            *word ^= m;
            self.mask_cursor = (self.mask_cursor + width as usize) % mask_len;
        }
    }

    /// Appends exactly `nbits` whitened output bits to `out`.
    pub fn emit_into(&mut self, nbits: usize, out: &mut BitString) -> Result<()> {
        let mut need = nbits;
        let avail = self.buffered_bits();
        if avail > 0 {
            let take = avail.min(need);
            out.extend_from(&self.pending, self.pending_pos, take);
            self.pending_pos += take;
            need -= take;
            if self.pending_pos == self.pending.len() {
                self.pending.clear();
                self.pending_pos = 0;
            }
        }
        let mut scratch = std::mem::take(&mut self.scratch);
        let mut idle = 0;
        while need > 0 {
            scratch.clear();
            self.step_into(&mut scratch, None);
            if scratch.is_empty() {
                idle += 1;
                if idle >= WORDS_PER_REGISTER && self.regs[3].is_zero() {
                    self.scratch = scratch;
                    return Err(Error::DegenerateState);
                }
                continue;
            }
            idle = 0;
            self.whiten(&mut scratch);
            let take = need.min(scratch.len());
            out.extend_from(&scratch, 0, take);
            need -= take;
            if take < scratch.len() {
                self.pending = scratch.slice(take, scratch.len() - take);
                self.pending_pos = 0;
            }
        }
        self.scratch = scratch;
        Ok(())
    }

    pub fn emit(&mut self, nbits: usize) -> Result<BitString> {
        let mut out = BitString::with_capacity(nbits);
        self.emit_into(nbits, &mut out)?;
        Ok(out)
    }
}
