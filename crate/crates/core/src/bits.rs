//! Packed bit strings.
//!
//! Bit `i` lives in bit `i % 64` of word `i / 64`; converting to bytes gives
//! the LSB-first packing used by every external format in this crate.

#[derive(Clone, Default, PartialEq, Eq)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString { words: Vec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    pub fn zeros(len: usize) -> Self {
        BitString { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut words = Vec::with_capacity(bytes.len().div_ceil(8));
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words.push(u64::from_le_bytes(buf));
        }
        BitString { words, len: bytes.len() * 8 }
    }

    /// Parses a string of `'0'`/`'1'` characters, ignoring whitespace.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut out = BitString::new();
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn clear(&mut self) {
        self.words.clear();
        self.len = 0;
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends the low `width` bits of `value`, least significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        if width == 0 {
            return;
        }
        let value = value & low_mask(width);
        let off = (self.len % 64) as u32;
        if off == 0 {
            self.words.push(value);
        } else {
            *self.words.last_mut().unwrap() |= value << off;
            if off + width > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += width as usize;
    }

    /// Reads `width ≤ 64` bits starting at `start`.
    pub fn read_bits(&self, start: usize, width: u32) -> u64 {
        debug_assert!(width <= 64);
        if width == 0 {
            return 0;
        }
        assert!(start + width as usize <= self.len, "read past end of bit string");
        let idx = start / 64;
        let off = (start % 64) as u32;
        let mut v = self.words[idx] >> off;
        if off != 0 && off + width > 64 {
            v |= self.words[idx + 1] << (64 - off);
        }
        v & low_mask(width)
    }

    /// Appends `len` bits of `other` starting at `start`.
    pub fn extend_from(&mut self, other: &BitString, start: usize, len: usize) {
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let w = (end - pos).min(64) as u32;
            self.push_bits(other.read_bits(pos, w), w);
            pos += w as usize;
        }
    }

    pub fn append(&mut self, other: &BitString) {
        self.extend_from(other, 0, other.len);
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        let mut out = BitString::with_capacity(len);
        out.extend_from(self, start, len);
        out
    }

    /// LSB-first bytes; a trailing partial byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes + 8);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of differing positions over the common prefix.
    pub fn hamming_distance(&self, other: &BitString) -> usize {
        let n = self.len.min(other.len);
        let full = n / 64;
        let mut d: usize = self.words[..full]
            .iter()
            .zip(&other.words[..full])
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum();
        let rem = (n % 64) as u32;
        if rem > 0 {
            d += ((self.words[full] ^ other.words[full]) & low_mask(rem)).count_ones() as usize;
        }
        d
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / 64] >> (i % 64)) & 1 == 1)
    }
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitString({} bits: ", self.len)?;
        for b in self.iter().take(64) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len > 64 {
            f.write_str("…")?;
        }
        f.write_str(")")
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut out = BitString::new();
        for b in iter {
            out.push(b);
        }
        out
    }
}
