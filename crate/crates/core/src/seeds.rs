//! Seed derivation for reproducible parallel simulation.
//!
//! Every stochastic component takes a single `u64` seed. Child seeds are
//! derived with the splitmix64 finalizer over `master + (index+1) * phi`,
//! which gives an O(1), order-independent mapping so bit periods and
//! campaign trials can run in parallel and still reproduce bit-for-bit.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derive the `index`-th child seed of `master`.
pub fn derive(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
