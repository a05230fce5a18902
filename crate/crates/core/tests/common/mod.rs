//! Straight-line reference model of the register bank, on plain `Vec<bool>`
//! registers (index 0 = LSB). Deliberately shares no code with the engine.

#![allow(dead_code)]

pub struct RefBank {
    pub regs: Vec<Vec<bool>>,
    pub cursor: usize,
    pub mask: Vec<bool>,
    pub mask_cursor: usize,
}

fn to_bits(v: u32, width: usize) -> Vec<bool> {
    (0..width).map(|i| (v >> i) & 1 == 1).collect()
}

fn from_bits(bits: &[bool]) -> u32 {
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u32) << i))
}

impl RefBank {
    pub fn load(coeffs: &[u32]) -> RefBank {
        assert_eq!(coeffs.len(), 256);
        let mut words = [[0u32; 8]; 4];
        let mut next = 0;
        for slot in 0..8 {
            let order: [usize; 4] = if slot == 0 {
                [0, 1, 2, 3]
            } else {
                let x12 = words[0][slot - 1] ^ words[1][slot - 1];
                let x34 = words[2][slot - 1] ^ words[3][slot - 1];
                if x12 > x34 {
                    [0, 1, 2, 3]
                } else if x34 > x12 {
                    [2, 3, 0, 1]
                } else {
                    [0, 1, 2, 3]
                }
            };
            for reg in order {
                words[reg][slot] = coeffs[next];
                next += 1;
            }
        }
        let regs = words
            .iter()
            .map(|ws| ws.iter().flat_map(|&w| to_bits(w, 32)).collect())
            .collect();
        let mask = coeffs[32..].iter().flat_map(|&w| to_bits(w, 32)).collect();
        RefBank { regs, cursor: 0, mask, mask_cursor: 0 }
    }

    pub fn word(&self, reg: usize, k: usize) -> u32 {
        from_bits(&self.regs[reg][32 * k..32 * k + 32])
    }

    /// Removes the lowest `p` bits and appends `fb` (its low `p` bits) on top.
    fn shift(reg: &mut Vec<bool>, p: usize, fb: &[bool]) -> Vec<bool> {
        let out: Vec<bool> = reg.drain(0..p).collect();
        reg.extend_from_slice(&fb[..p]);
        assert_eq!(reg.len(), 256);
        out
    }

    pub fn step(&mut self) -> Vec<bool> {
        let k = self.cursor;
        let w = self.word(3, k);
        let wbits = to_bits(w, 32);
        let mut raw = Vec::new();
        for p in 1..=32usize {
            if !wbits[p - 1] {
                continue;
            }
            let o1: Vec<bool> = self.regs[0][..p].to_vec();
            let o2: Vec<bool> = self.regs[1][..p].to_vec();
            let o3: Vec<bool> = self.regs[2][..p].to_vec();
            let f1: Vec<bool> = (0..p).map(|i| o1[i] ^ o2[i]).collect();
            let f2: Vec<bool> = (0..p).map(|i| o2[i] ^ o3[i]).collect();
            let f3: Vec<bool> = (0..p).map(|i| o3[i] ^ wbits[i]).collect();
            Self::shift(&mut self.regs[0], p, &f1);
            Self::shift(&mut self.regs[1], p, &f2);
            Self::shift(&mut self.regs[2], p, &f3);
            raw.extend(o1);
            raw.extend(o2);
            raw.extend(o3);
        }
        let c = wbits.iter().filter(|&&b| b).count();
        if c > 0 {
            let top = (0..4).map(|r| self.word(r, k)).max().unwrap();
            let topbits = to_bits(top, 32);
            let o4: Vec<bool> = self.regs[3][..c].to_vec();
            let f4: Vec<bool> = (0..c).map(|i| topbits[i] ^ o4[i]).collect();
            Self::shift(&mut self.regs[3], c, &f4);
            raw.extend(o4);
        }
        self.cursor = (k + 1) % 8;
        raw
    }

    /// Whitened output stream.
    pub fn stream(&mut self, nbits: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(nbits);
        while out.len() < nbits {
            for b in self.step() {
                let m = self.mask[self.mask_cursor];
                self.mask_cursor = (self.mask_cursor + 1) % self.mask.len();
                out.push(b ^ m);
            }
        }
        out.truncate(nbits);
        out
    }
}

pub fn pack_lsb_first(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i)))
        .collect()
}

pub fn seed(tag: u8) -> lwe_prng::EntropyInput {
    lwe_prng::EntropyInput::new(std::array::from_fn(|i| (i as u8) ^ tag))
}
