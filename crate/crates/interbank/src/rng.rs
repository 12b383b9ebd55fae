//! Counter-based Gaussian noise generation.
//!
//! Every draw is a pure function of `(seed, stream id, step index)`, so noise
//! can be regenerated bit-identically in any order, on any thread count, and
//! common-random-number experiments (same increments under different
//! policies) are exact by construction. Stream ids are assigned as:
//!
//! * `0` — the common-noise Brownian motion W⁰,
//! * `1 ..= N` — the idiosyncratic Brownian motions Wⁱ,
//! * `N+1 ..= 2N` — auxiliary innovations for the exact-variance
//!   Ornstein-Uhlenbeck sampler (see `simulate`).
//!
//! Uniform words come from a double application of the splitmix64 finalizer
//! to a structured counter; standard normals are produced in pairs by the
//! polar (Marsaglia) transform. Rejected polar proposals advance a *slot*
//! sub-counter inside the same `(stream, step-pair)` key, so the draw stays a
//! deterministic function of its key; after 15 rejected proposals (probability
//! ≈ 1e−10) a trigonometric Box-Muller fallback guarantees termination.

/// splitmix64 finalizer: full-avalanche 64-bit mixing bijection.
#[inline]
fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Domain-separation constants so seeds, path indices and counters never
/// collide structurally.
const SEED_DOMAIN: u64 = 0x9e37_79b9_7f4a_7c15;
const PATH_DOMAIN: u64 = 0xd1b5_4a32_d192_ed03;

/// Pre-mixed seed, computed once per noise source.
#[inline]
fn seed_hash(seed: u64) -> u64 {
    mix64(seed ^ SEED_DOMAIN)
}

/// One uniform word for `(seed, stream, pair, slot)`.
///
/// Counter layout: `stream` in bits 44.., `pair` in bits 8..44, `slot` in
/// bits 0..8 — disjoint fields, so distinct keys give distinct counters.
#[inline]
fn word(seed_mixed: u64, stream: u64, pair: u64, slot: u64) -> u64 {
    debug_assert!(stream < 1 << 20, "stream id out of counter range");
    debug_assert!(pair < 1 << 36, "step index out of counter range");
    debug_assert!(slot < 1 << 8);
    let counter = (stream << 44) | (pair << 8) | slot;
    mix64(mix64(seed_mixed ^ counter))
}

/// Maps a word to the open interval (0, 1), using the top 53 bits.
#[inline]
fn uniform(w: u64) -> f64 {
    ((w >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0) // 2^-53
}

/// Number of polar proposals tried before the trigonometric fallback.
const POLAR_ATTEMPTS: u64 = 15;

/// Two independent standard normals for `(seed, stream, pair)`.
///
/// Deterministic: the value never depends on evaluation order or on any
/// state outside the arguments.
#[inline]
pub fn standard_normal_pair(seed_mixed: u64, stream: u64, pair: u64) -> (f64, f64) {
    for attempt in 0..POLAR_ATTEMPTS {
        let v1 = 2.0 * uniform(word(seed_mixed, stream, pair, 2 * attempt)) - 1.0;
        let v2 = 2.0 * uniform(word(seed_mixed, stream, pair, 2 * attempt + 1)) - 1.0;
        let s = v1 * v1 + v2 * v2;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (v1 * f, v2 * f);
        }
    }
    // Reached with probability (1 − π/4)^15 ≈ 1e-10 per pair: fall back to
    // the always-accepting trigonometric Box-Muller form.
    let u1 = uniform(word(seed_mixed, stream, pair, 2 * POLAR_ATTEMPTS));
    let u2 = uniform(word(seed_mixed, stream, pair, 2 * POLAR_ATTEMPTS + 1));
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// A single standard normal for `(seed, stream, step)`.
///
/// Steps are served in pairs: step `2m` and `2m+1` are the two halves of
/// [`standard_normal_pair`] at pair index `m`.
#[inline]
pub fn standard_normal(seed: u64, stream: u64, step: u64) -> f64 {
    let (z0, z1) = standard_normal_pair(seed_hash(seed), stream, step >> 1);
    if step & 1 == 0 {
        z0
    } else {
        z1
    }
}

/// Fills `out[k]` with the standard normal for `(seed, stream, step = k)`.
pub fn fill_standard_normals(seed: u64, stream: u64, out: &mut [f64]) {
    let sm = seed_hash(seed);
    let mut k = 0;
    while k + 1 < out.len() {
        let (z0, z1) = standard_normal_pair(sm, stream, (k as u64) >> 1);
        out[k] = z0;
        out[k + 1] = z1;
        k += 2;
    }
    if k < out.len() {
        out[k] = standard_normal_pair(sm, stream, (k as u64) >> 1).0;
    }
}

/// Pre-mixed per-stream sampler for hot loops: avoids re-hashing the seed.
#[derive(Debug, Clone, Copy)]
pub struct StreamSampler {
    seed_mixed: u64,
}

impl StreamSampler {
    pub fn new(seed: u64) -> Self {
        StreamSampler {
            seed_mixed: seed_hash(seed),
        }
    }

    /// The standard-normal pair for steps `(2·pair, 2·pair + 1)` of `stream`.
    #[inline]
    pub fn pair(&self, stream: u64, pair: u64) -> (f64, f64) {
        standard_normal_pair(self.seed_mixed, stream, pair)
    }
}

/// Derives the noise seed for one Monte Carlo path from the master seed.
///
/// Pure function of `(master_seed, path_index)`: paths may be generated in
/// any order or concurrently and still see identical noise.
pub fn derive_path_seed(master_seed: u64, path_index: u64) -> u64 {
    mix64(master_seed ^ mix64(path_index ^ PATH_DOMAIN))
}

// ───────────────────────────── tests ─────────────────────────────
