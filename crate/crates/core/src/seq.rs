//! Finite-support bi-infinite complex sequences and their operator algebra:
//! the derivative multiplier `B`, the Cauchy product, and l1/l2 norms.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{round, ComplexInterval, Interval};
use crate::scalar::Scalar;

/// Sequence `(a_k)` stored densely on `offset ..= offset + len - 1`; every
/// other index is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct CoeffSeq<T> {
    offset: i64,
    coeffs: Vec<ComplexInterval<T>>,
}

impl<T: Scalar> CoeffSeq<T> {
    pub fn new(offset: i64, coeffs: Vec<ComplexInterval<T>>) -> Self {
        Self { offset, coeffs }
    }

    /// The zero sequence stored on `[-k, k]`.
    pub fn zeros(k: usize) -> Self {
        Self::new(-(k as i64), vec![ComplexInterval::zero(); 2 * k + 1])
    }

    /// Symmetric storage on `[-k, k]` filled by `f`.
    pub fn from_fn(k: usize, mut f: impl FnMut(i64) -> ComplexInterval<T>) -> Self {
        let k = k as i64;
        Self::new(-k, (-k..=k).map(&mut f).collect())
    }

    /// Builds a sequence from `(index, value)` pairs; storage spans the
    /// smallest symmetric window containing them.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, ComplexInterval<T>)>) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let k = pairs
            .iter()
            .map(|(i, _)| i.unsigned_abs())
            .max()
            .unwrap_or(0) as usize;
        let mut s = Self::zeros(k);
        for (i, v) in pairs {
            let slot = s.slot_mut(i).expect("index inside window");
            *slot = *slot + v;
        }
        s
    }

    pub fn from_points(offset: i64, values: &[Complex<T>]) -> Self {
        Self::new(
            offset,
            values.iter().map(|&z| ComplexInterval::point(z)).collect(),
        )
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> i64 {
        self.offset
    }

    pub fn max_index(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[ComplexInterval<T>] {
        &self.coeffs
    }

    /// `a_k`, zero outside storage.
    #[inline]
    pub fn get(&self, k: i64) -> ComplexInterval<T> {
        let j = k - self.offset;
        if j < 0 || j >= self.coeffs.len() as i64 {
            ComplexInterval::zero()
        } else {
            self.coeffs[j as usize]
        }
    }

    fn slot_mut(&mut self, k: i64) -> Option<&mut ComplexInterval<T>> {
        let j = k - self.offset;
        if j < 0 {
            return None;
        }
        self.coeffs.get_mut(j as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ComplexInterval<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, c)| (self.offset + j as i64, c))
    }

    /// Indices whose stored value is not exactly zero.
    pub fn support(&self) -> Vec<i64> {
        self.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    /// Restriction to `[-n, n]`, stored on exactly that window.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_fn(n, |k| self.get(k))
    }

    /// Midpoints as point complex numbers on `[-n, n]`.
    pub fn midpoints(&self, n: usize) -> Vec<Complex<T>> {
        let n = n as i64;
        (-n..=n).map(|k| self.get(k).mid()).collect()
    }

    /// Checks `c_{-m} = conj(c_m)` up to interval overlap, i.e. that the
    /// sequence can be the Fourier series of a real function.
    pub fn validate_hermitian(&self) -> Result<()> {
        let k = self
            .min_index()
            .unsigned_abs()
            .max(self.max_index().unsigned_abs()) as i64;
        for m in 0..=k {
            if !self.get(-m).intersects(&self.get(m).conj()) {
                return Err(Error::CoefficientNotReal { index: m });
            }
        }
        Ok(())
    }

    pub fn is_hermitian(&self) -> bool {
        self.validate_hermitian().is_ok()
    }

    /// Overlap test used for identity checks between interval sequences.
    pub fn overlaps(&self, other: &Self) -> bool {
        let lo = self.min_index().min(other.min_index());
        let hi = self.max_index().max(other.max_index());
        (lo..=hi).all(|k| self.get(k).intersects(&other.get(k)))
    }
}

/// `(Ba)_k = i k a_k`.
pub fn op_b<T: Scalar>(a: &CoeffSeq<T>) -> CoeffSeq<T> {
    let coeffs = a
        .iter()
        .map(|(k, c)| c.mul_i().scale(Interval::from_int(k)))
        .collect();
    CoeffSeq::new(a.offset(), coeffs)
}

/// Cauchy product `(a*b)_k = sum_m a_{k-m} b_m`.
pub fn conv<T: Scalar>(a: &CoeffSeq<T>, b: &CoeffSeq<T>) -> CoeffSeq<T> {
    if a.is_empty() || b.is_empty() {
        return CoeffSeq::new(a.offset() + b.offset(), Vec::new());
    }
    let mut out = vec![ComplexInterval::zero(); a.len() + b.len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] = out[i + j] + *x * *y;
        }
    }
    CoeffSeq::new(a.offset() + b.offset(), out)
}

/// Upward-rounded `sum_k |a_k|`.
pub fn l1_norm_upper<T: Scalar>(a: &CoeffSeq<T>) -> T {
    a.coeffs()
        .iter()
        .fold(T::zero(), |acc, c| round::add_up(acc, c.abs_upper()))
}

/// Enclosure of `sum_k |a_k|`.
pub fn l1_norm_enclosure<T: Scalar>(a: &CoeffSeq<T>) -> Interval<T> {
    a.coeffs().iter().map(|c| c.abs()).sum()
}

/// Enclosure of `(sum_k |a_k|^2)^(1/2)`.
pub fn l2_norm_enclosure<T: Scalar>(a: &CoeffSeq<T>) -> Interval<T> {
    let s: Interval<T> = a.coeffs().iter().map(|c| c.norm_sqr()).sum();
    Interval::new(round::sqrt_down(s.lo.max(T::zero())), round::sqrt_up(s.hi))
}

/// `c = c^(N) + c^(inf)`: the head on `[-N, N]` and an upper bound for the
/// l1 norm of everything else.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqSplit<T> {
    pub head: CoeffSeq<T>,
    pub tail_l1_upper: T,
}

/// Splits `c` at `n`. `analytic_tail` bounds the l1 mass of indices beyond
/// the stored window (zero for finitely supported sequences).
pub fn split<T: Scalar>(c: &CoeffSeq<T>, n: usize, analytic_tail: T) -> SeqSplit<T> {
    let ni = n as i64;
    let stored_tail = c
        .iter()
        .filter(|(k, _)| k.abs() > ni)
        .fold(T::zero(), |acc, (_, v)| round::add_up(acc, v.abs_upper()));
    SeqSplit {
        head: c.truncate(n),
        tail_l1_upper: round::add_up(stored_tail, analytic_tail.max(T::zero())),
    }
}
