//! A pseudorandom bit generator whose seed is concealed as an LWE sample
//! `b = A·s + e + r·⌊q/2⌋` over `Z_q[X]/(X^256 + 1)` and then expanded by a
//! bank of four 256-bit LFSRs (one master, three slaves) with whitening
//! against the rest of `b`.
//!
//! ```
//! use lwe_prng::{EntropyInput, PrngState};
//!
//! let ent = EntropyInput::new([42; 32]);
//! let mut rng = PrngState::from_entropy(&ent).unwrap();
//! let bytes = rng.next_bytes(32).unwrap();
//! assert_eq!(bytes.len(), 32);
//! ```
//!
//! Nothing here is constant-time.

pub mod bits;
pub mod cli;
pub mod error;
pub mod lfsr_engine;
pub mod lwe_hiding;
pub mod params;
pub mod polyring;
pub mod prng_stream;
pub mod qkd_sim;
pub mod sampling;
pub mod stats_harness;

pub use bits::BitString;
pub use error::{Error, Result};
pub use lfsr_engine::LfsrBank;
pub use lwe_hiding::{hide, HiddenSeed};
pub use params::{default_params, Params};
pub use polyring::{Poly, PolyMatrix, PolyVec, Ring};
pub use prng_stream::{new_generator, PrngState};
pub use sampling::EntropyInput;
