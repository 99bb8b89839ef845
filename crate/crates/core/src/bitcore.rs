//! Bitstrings, seeded randomness and the two variation operators shared by
//! every driver: mutation by flipping exactly `ℓ` uniformly chosen bits, and
//! biased crossover between a parent and a mutation winner.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Fixed-length bitstring packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-wise equality and
/// popcounts need no masking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    /// All-zero bitstring of length `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("bitstring length must be at least 1"));
        }
        Ok(Self {
            words: vec![0; n.div_ceil(WORD_BITS)],
            len: n,
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        let mut x = Self::zeros(n)?;
        for w in x.words.iter_mut() {
            *w = u64::MAX;
        }
        x.clear_tail();
        Ok(x)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut x = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            x.set(i, b);
        }
        Ok(x)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: zero-length bitstrings cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Positions where `self` and `other` differ, in increasing order.
    pub fn diff_positions(&self, other: &BitString) -> Result<Vec<usize>> {
        self.check_len(other)?;
        let mut out = Vec::new();
        for (wi, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut diff = a ^ b;
            while diff != 0 {
                let tz = diff.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + tz);
                diff &= diff - 1;
            }
        }
        Ok(out)
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}

/// Seeded random stream. One per run, never shared between threads.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream named `name`, derived from this source's seed only
    /// (not from its current position).
    pub fn derive(&self, name: &str) -> RandomSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stable_hash(name.as_bytes()));
        RandomSource {
            seed: self.seed,
            rng,
        }
    }

    /// Uniform index in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// FNV-1a followed by a SplitMix64 finalizer. Stable across platforms and
/// releases, unlike `std::hash`.
pub fn stable_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(h)
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniformly random bitstring of length `n`.
pub fn random_bitstring(n: usize, rng: &mut RandomSource) -> Result<BitString> {
    let mut x = BitString::zeros(n)?;
    for w in x.words.iter_mut() {
        *w = rng.next_u64();
    }
    x.clear_tail();
    Ok(x)
}

/// Draw from `Bin(trials, p)`.
pub fn sample_binomial(trials: usize, p: f64, rng: &mut RandomSource) -> Result<usize> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 || trials == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(trials);
    }
    let dist = Binomial::new(trials as u64, p).map_err(|_| Error::InvalidProbability(p))?;
    Ok(dist.sample(rng) as usize)
}

/// Copy of `x` with a uniformly random set of exactly `ell` positions flipped.
pub fn flip_exact(x: &BitString, ell: usize, rng: &mut RandomSource) -> Result<BitString> {
    let n = x.len();
    if ell > n {
        return Err(Error::config(format!(
            "cannot flip {ell} bits of a length-{n} bitstring"
        )));
    }
    let mut y = x.clone();
    if ell == n {
        for w in y.words.iter_mut() {
            *w = !*w;
        }
        y.clear_tail();
        return Ok(y);
    }
    for i in index::sample(rng, n, ell) {
        y.flip(i);
    }
    Ok(y)
}

/// Single crossover offspring: each position in `diff` (where parent and
/// winner differ) is taken from the winner with probability `c`.
///
/// Positions where the two agree are the same either way, so skipping them
/// gives the same distribution as an independent coin per position.
pub(crate) fn crossover_one(
    parent: &BitString,
    diff: &[usize],
    c: f64,
    rng: &mut RandomSource,
) -> BitString {
    let mut y = parent.clone();
    if c >= 1.0 {
        for &i in diff {
            y.flip(i);
        }
    } else if c > 0.0 {
        for &i in diff {
            if rng.unit() < c {
                y.flip(i);
            }
        }
    }
    y
}

/// `count` independent offspring, each bit taken from `winner` with
/// probability `c` and from `parent` otherwise.
pub fn biased_crossover(
    parent: &BitString,
    winner: &BitString,
    c: f64,
    count: usize,
    rng: &mut RandomSource,
) -> Result<Vec<BitString>> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidProbability(c));
    }
    let diff = parent.diff_positions(winner)?;
    Ok((0..count)
        .map(|_| crossover_one(parent, &diff, c, rng))
        .collect())
}

pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize> {
    x.check_len(y)?;
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}
