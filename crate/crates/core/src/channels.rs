//! Error sampling: depolarizing data noise, binary symmetric readout noise,
//! and repeated syndrome readout resolved by majority vote.
//!
//! Draw order is fixed so that runs with the same seed are reproducible and
//! comparable across decoders: the data error first (one uniform per qubit,
//! plus one Pauli choice per hit), then readout rounds, each round drawing
//! one uniform per syndrome bit in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{syndrome, CheckMatrix, Pauli, PauliString};

/// Generator for trial `index` of a campaign seeded with `seed`: one ChaCha
/// stream per trial, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub eps_d: f64,
    pub eps_s: f64,
    /// Number of readout rounds; odd.
    pub repeats: usize,
}

impl ChannelParams {
    pub fn new(eps_d: f64, eps_s: f64, repeats: usize) -> Result<Self> {
        let p = Self {
            eps_d,
            eps_s,
            repeats,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_d", self.eps_d), ("eps_s", self.eps_s)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability { name, value: v });
            }
        }
        if self.repeats == 0 || self.repeats.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "repeats must be odd, got {}",
                self.repeats
            )));
        }
        Ok(())
    }
}

/// Each qubit independently: identity with probability `1 − ε`, otherwise
/// X, Y or Z uniformly.
pub fn sample_depolarizing<R: Rng + ?Sized>(n: usize, eps_d: f64, rng: &mut R) -> PauliString {
    let mut e = PauliString::identity(n);
    for q in 0..n {
        if rng.gen::<f64>() < eps_d {
            e.set(q, Pauli::NON_IDENTITY[rng.gen_range(0..3)]);
        }
    }
    e
}

/// Independent Bernoulli(ε) bits.
pub fn sample_bsc<R: Rng + ?Sized>(m: usize, eps_s: f64, rng: &mut R) -> BitVec {
    let mut v = BitVec::zeros(m);
    for j in 0..m {
        if rng.gen::<f64>() < eps_s {
            v.set(j, true);
        }
    }
    v
}

/// Measures the syndrome of `e` in `rounds` independent noisy rounds and
/// returns the per-bit majority. `rounds` must be odd.
pub fn measure_with_votes<R: Rng + ?Sized>(
    e: &PauliString,
    s: &CheckMatrix,
    eps_s: f64,
    rounds: usize,
    rng: &mut R,
) -> Result<BitVec> {
    if rounds == 0 || rounds.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "majority vote needs an odd number of rounds, got {rounds}"
        )));
    }
    let clean = syndrome(e, s)?;
    if rounds == 1 {
        return Ok(clean.xor(&sample_bsc(s.m(), eps_s, rng)));
    }
    let mut ones = vec![0usize; s.m()];
    for _ in 0..rounds {
        let flips = sample_bsc(s.m(), eps_s, rng);
        for (j, count) in ones.iter_mut().enumerate() {
            if clean.get(j) ^ flips.get(j) {
                *count += 1;
            }
        }
    }
    Ok(BitVec::from_bools(
        &ones.iter().map(|&c| 2 * c > rounds).collect::<Vec<_>>(),
    ))
}

/// Probability that a majority of `rounds` independent readouts is flipped.
pub fn majority_flip_probability(eps: f64, rounds: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=rounds {
        if 2 * j > rounds {
            total += binom * eps.powi(j as i32) * (1.0 - eps).powi((rounds - j) as i32);
        }
        binom = binom * (rounds - j) as f64 / (j + 1) as f64;
    }
    total
}
