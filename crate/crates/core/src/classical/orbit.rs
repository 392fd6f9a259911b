//! Exact symbolic iteration of the baker map.
//!
//! The baker map is conjugate to the full shift on two symbols: writing
//! `q = 0.b0 b1 b2 …` and `p = 0.b-1 b-2 …` in binary, one step moves the
//! leading q-bit onto the front of p. Iterating bits instead of floats
//! sidesteps the exponential error growth of the chaotic map — doubling a
//! double collapses onto a dyadic orbit after ~53 steps.

use std::collections::VecDeque;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

use super::TorusPoint;

/// Bits consumed from the future are kept for the momentum coordinate up to
/// this depth; contributions beyond it are below 2^-64.
const PAST_CAP: usize = 64;

const POINT_BITS: usize = 53;

enum BitSource {
    /// Finite deterministic tail (orbit started from an explicit point).
    Finite,
    /// Infinite stream from a seeded generator, served MSB first.
    Seeded { rng: ChaCha12Rng, buffer: u64, bits_left: u8 },
}

impl BitSource {
    fn next_bit(&mut self) -> Option<bool> {
        match self {
            BitSource::Finite => None,
            BitSource::Seeded { rng, buffer, bits_left } => {
                if *bits_left == 0 {
                    *buffer = rng.next_u64();
                    *bits_left = 64;
                }
                let bit = (*buffer >> 63) & 1 == 1;
                *buffer <<= 1;
                *bits_left -= 1;
                Some(bit)
            }
        }
    }
}

/// A baker-map orbit in the two-sided symbolic representation.
pub struct BitOrbit {
    past: VecDeque<bool>,
    future: VecDeque<bool>,
    source: BitSource,
    steps_taken: u64,
}

impl BitOrbit {
    /// Orbit starting from an explicit point; the future holds the 53
    /// mantissa bits of `q`, so it is exhausted after 53 steps.
    pub fn from_torus_point(pt: &TorusPoint) -> Self {
        let future = float_bits(pt.q());
        let past = float_bits(pt.p());
        BitOrbit {
            past: past.into(),
            future: future.into(),
            source: BitSource::Finite,
            steps_taken: 0,
        }
    }

    /// Orbit with a uniformly random starting point drawn bit by bit from a
    /// seeded stream. The momentum past starts empty (p = 0).
    pub fn seeded(seed: u64) -> Self {
        BitOrbit {
            past: VecDeque::new(),
            future: VecDeque::new(),
            source: BitSource::Seeded {
                rng: ChaCha12Rng::seed_from_u64(seed),
                buffer: 0,
                bits_left: 0,
            },
            steps_taken: 0,
        }
    }

    /// Seeded orbit whose first future bits are pinned, placing the start
    /// inside a prescribed dyadic cylinder.
    pub fn seeded_with_prefix(prefix: &[bool], seed: u64) -> Self {
        let mut orbit = BitOrbit::seeded(seed);
        orbit.future.extend(prefix.iter().copied());
        orbit
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    fn ensure_future(&mut self, want: usize) -> Result<()> {
        while self.future.len() < want {
            match self.source.next_bit() {
                Some(bit) => self.future.push_back(bit),
                None => {
                    return Err(Error::StreamExhausted { needed: want - self.future.len() })
                }
            }
        }
        Ok(())
    }

    fn fill_up_to(&mut self, want: usize) -> usize {
        while self.future.len() < want {
            match self.source.next_bit() {
                Some(bit) => self.future.push_back(bit),
                None => break,
            }
        }
        self.future.len().min(want)
    }

    /// One baker step: the leading future bit becomes the leading past bit.
    pub fn step(&mut self) -> Result<()> {
        self.ensure_future(1)?;
        let bit = self.future.pop_front().expect("ensured above");
        self.past.push_front(bit);
        self.past.truncate(PAST_CAP);
        self.steps_taken += 1;
        Ok(())
    }

    /// True when the orbit currently lies in the given dyadic q-cylinder.
    pub fn in_cylinder(&mut self, cell: &DyadicCell) -> Result<bool> {
        self.ensure_future(cell.prefix.len())?;
        Ok(cell.prefix.iter().zip(self.future.iter()).all(|(a, b)| a == b))
    }

    /// Most recently consumed bit, i.e. the leading bit of `p`.
    pub fn leading_past_bit(&self) -> Option<bool> {
        self.past.front().copied()
    }

    /// Reconstructs the floating-point phase-space point from the bits.
    pub fn point(&mut self) -> TorusPoint {
        let have = self.fill_up_to(POINT_BITS);
        let mut q = 0.0f64;
        for i in (0..have).rev() {
            if self.future[i] {
                q += 1.0;
            }
            q *= 0.5;
        }
        let mut p = 0.0f64;
        let depth = self.past.len().min(POINT_BITS);
        for i in (0..depth).rev() {
            if self.past[i] {
                p += 1.0;
            }
            p *= 0.5;
        }
        TorusPoint::new(q, p).expect("bit reconstruction stays in [0,1)")
    }
}

fn float_bits(x: f64) -> Vec<bool> {
    let mut bits = Vec::with_capacity(POINT_BITS);
    let mut v = x;
    for _ in 0..POINT_BITS {
        v *= 2.0;
        if v >= 1.0 {
            bits.push(true);
            v -= 1.0;
        } else {
            bits.push(false);
        }
    }
    bits
}

/// Dyadic q-cylinder: the set of points whose leading q-bits match a fixed
/// word. Its measure is exactly `2^-len`, and membership is exact bit
/// comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicCell {
    prefix: Vec<bool>,
}

impl DyadicCell {
    /// The cylinder `q ∈ [0, 2^-bits)`: the all-zeros word. Contains the
    /// fixed point of the map; fine for return times (Kac's lemma is exact
    /// for any cell), not for hitting-law experiments.
    pub fn zeros(bits: u32) -> Self {
        DyadicCell { prefix: vec![false; bits as usize] }
    }

    /// The cylinder `q ∈ [1/2, 1/2 + 2^-bits)`: the word `1 0…0`, which has
    /// no self-overlap, so rescaled hitting times follow the exponential
    /// law without a periodic-orbit correction.
    pub fn one_zeros(bits: u32) -> Result<Self> {
        if bits == 0 {
            return Err(Error::invalid("one_zeros cell needs at least one bit"));
        }
        let mut prefix = vec![false; bits as usize];
        prefix[0] = true;
        Ok(DyadicCell { prefix })
    }

    /// The whole torus (measure 1).
    pub fn whole() -> Self {
        DyadicCell { prefix: Vec::new() }
    }

    pub fn from_word(prefix: Vec<bool>) -> Self {
        DyadicCell { prefix }
    }

    pub fn word(&self) -> &[bool] {
        &self.prefix
    }

    pub fn measure(&self) -> f64 {
        0.5f64.powi(self.prefix.len() as i32)
    }

    /// Left endpoint of the cylinder as an interval in q.
    pub fn left_endpoint(&self) -> f64 {
        let mut lo = 0.0f64;
        for i in (0..self.prefix.len()).rev() {
            if self.prefix[i] {
                lo += 1.0;
            }
            lo *= 0.5;
        }
        lo
    }

    /// Membership test for floating-point points.
    pub fn contains_point(&self, pt: &TorusPoint) -> bool {
        let lo = self.left_endpoint();
        pt.q() >= lo && pt.q() < lo + self.measure()
    }
}
