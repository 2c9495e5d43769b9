//! Test support for proofdesk: random generators, brute-force oracles,
//! corpora and fixtures.

pub mod advisor;
pub mod corpus;
pub mod fixtures;
pub mod prop;
pub mod random;
pub mod scanner;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use proofdesk_core;

/// Deterministic RNG for tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
