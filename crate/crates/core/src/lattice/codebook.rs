use std::ops::Sub;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::SeededRng;

/// Default bound on the number of codewords any exhaustive routine may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A Gaussian integer `re + i im`, held exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn norm_sq(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// Exact `||a - b||^2` over equal-length slices.
    pub fn distance_sq(a: &[GaussInt], b: &[GaussInt]) -> i64 {
        a.iter().zip(b).map(|(x, y)| (*x - *y).norm_sq()).sum()
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

/// The rectangular codebook `{x : Re x_i, Im x_i in {tau, ..., tau + L - 1}}^m`.
///
/// Symbols are ordered by `(Re, Im)` digit, real part most significant, and
/// codewords lexicographically with `x_1` most significant; a codeword's index
/// is its position in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codebook {
    tau: i64,
    l: u32,
    m: usize,
    enumeration_cap: u64,
}

impl Codebook {
    pub fn new(tau: i64, l: u32, m: usize) -> Result<Self> {
        if l == 0 {
            return Err(invalid("codebook range width L must be at least 1"));
        }
        if m == 0 {
            return Err(invalid("codebook dimension m must be at least 1"));
        }
        Ok(Codebook { tau, l, m, enumeration_cap: DEFAULT_ENUMERATION_CAP })
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.enumeration_cap = cap;
        self
    }

    /// Same symbol alphabet in a different dimension.
    pub fn with_dim(&self, m: usize) -> Result<Self> {
        Ok(Codebook::new(self.tau, self.l, m)?.with_enumeration_cap(self.enumeration_cap))
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.enumeration_cap
    }

    /// Number of complex symbols per coordinate, `L^2`.
    pub fn symbol_count(&self) -> u64 {
        (self.l as u64) * (self.l as u64)
    }

    /// `(L^2)^m`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        let base = self.symbol_count() as u128;
        u32::try_from(self.m).ok().and_then(|m| base.checked_pow(m)).unwrap_or(u128::MAX)
    }

    /// Errors unless `count` items fit under the enumeration cap.
    pub fn check_cap(&self, count: u128) -> Result<()> {
        if count > self.enumeration_cap as u128 {
            return Err(Error::TooLarge { size: count, cap: self.enumeration_cap });
        }
        Ok(())
    }

    /// The `L^2` symbols in `(Re, Im)` digit order.
    pub fn symbols(&self) -> Vec<GaussInt> {
        let range = self.tau..self.tau + self.l as i64;
        range.clone().flat_map(|re| range.clone().map(move |im| GaussInt::new(re, im))).collect()
    }

    /// Average per-entry power `E_x = E|x_i|^2` under the uniform codeword
    /// distribution, computed from exact integer sums.
    pub fn power_ex(&self) -> f64 {
        let sum_sq: i128 = (self.tau..self.tau + self.l as i64).map(|r| (r as i128) * (r as i128)).sum();
        2.0 * sum_sq as f64 / self.l as f64
    }

    /// `max |a - b|^2` over symbol pairs, `2 (L - 1)^2`.
    pub fn dmax_sq(&self) -> i64 {
        let d = self.l as i64 - 1;
        2 * d * d
    }

    /// Minimal squared distance between distinct codewords; `None` when the
    /// codebook has a single codeword.
    pub fn dmin_sq(&self) -> Option<i64> {
        (self.l >= 2).then_some(1)
    }

    pub fn codeword_at(&self, mut index: u128) -> Vec<GaussInt> {
        let q = self.symbol_count() as u128;
        let mut out = vec![GaussInt::new(0, 0); self.m];
        for slot in out.iter_mut().rev() {
            *slot = self.symbol_at((index % q) as u64);
            index /= q;
        }
        out
    }

    pub fn index_of(&self, x: &[GaussInt]) -> Option<u128> {
        if x.len() != self.m {
            return None;
        }
        let q = self.symbol_count() as u128;
        x.iter().try_fold(0u128, |acc, s| Some(acc * q + self.symbol_index(*s)? as u128))
    }

    pub fn symbol_at(&self, digit: u64) -> GaussInt {
        let l = self.l as u64;
        GaussInt::new(self.tau + (digit / l) as i64, self.tau + (digit % l) as i64)
    }

    pub fn symbol_index(&self, s: GaussInt) -> Option<u64> {
        let l = self.l as i64;
        let (a, b) = (s.re - self.tau, s.im - self.tau);
        ((0..l).contains(&a) && (0..l).contains(&b)).then(|| (a * l + b) as u64)
    }

    pub fn sample_codeword(&self, rng: &mut SeededRng) -> Vec<GaussInt> {
        let q = self.symbol_count();
        (0..self.m).map(|_| self.symbol_at(rng.below(q))).collect()
    }

    /// Iterates all codewords in index order, failing if the codebook exceeds
    /// the enumeration cap.
    pub fn enumerate(&self) -> Result<CodewordIter> {
        self.check_cap(self.size())?;
        Ok(CodewordIter { symbols: self.symbols(), digits: vec![0; self.m], done: false })
    }
}

/// Odometer over codeword digits, last coordinate fastest.
#[derive(Debug, Clone)]
pub struct CodewordIter {
    symbols: Vec<GaussInt>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for CodewordIter {
    type Item = Vec<GaussInt>;

    fn next(&mut self) -> Option<Vec<GaussInt>> {
        if self.done {
            return None;
        }
        let item = self.digits.iter().map(|&d| self.symbols[d]).collect();
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.symbols.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(item)
    }
}
