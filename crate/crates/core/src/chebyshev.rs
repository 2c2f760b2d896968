//! Chebyshev series in time on `[0, t_max]`.
//!
//! A series `sum_l a_l T_l(tau)` is expressed in the mapped variable
//! `tau = 2 t / t_max - 1 in [-1, 1]`; [`ChebSeries::derivative`] applies the
//! chain-rule factor `2 / t_max`.

use std::ops::{Add, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{round, ComplexInterval, Interval};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct ChebSeries<T> {
    t_max: T,
    coeffs: Vec<Complex<T>>,
}

/// Coefficient types the differentiation recurrence can run on.
pub trait ChebCoeff: Clone + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    /// `self * k` for a small non-negative integer `k`.
    fn times_int(&self, k: usize) -> Self;
    fn half(&self) -> Self;
}

impl<T: Scalar> ChebCoeff for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }

    fn times_int(&self, k: usize) -> Self {
        *self * T::from_usize(k).expect("small integer")
    }

    fn half(&self) -> Self {
        *self / (T::one() + T::one())
    }
}

impl<T: Scalar> ChebCoeff for ComplexInterval<T> {
    fn zero() -> Self {
        ComplexInterval::zero()
    }

    fn times_int(&self, k: usize) -> Self {
        self.scale(Interval::from_int(k as i64))
    }

    fn half(&self) -> Self {
        self.scale_point(T::one() / (T::one() + T::one()))
    }
}

/// Unscaled derivative coefficients in the `[-1, 1]` variable:
/// `b_{l-1} = b_{l+1} + 2 l a_l` downward from `b_n = b_{n+1} = 0`, with the
/// `l = 0` entry halved. A degree-`n` input gives a degree-`n-1` output; a
/// constant gives `[0]`.
pub fn derivative_coeffs<C: ChebCoeff>(a: &[C]) -> Vec<C> {
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return vec![C::zero()];
    }
    let mut b = vec![C::zero(); n + 1];
    for l in (1..=n).rev() {
        let next = if l < n { b[l + 1].clone() } else { C::zero() };
        b[l - 1] = next + a[l].times_int(2 * l);
    }
    b[0] = b[0].half();
    b.truncate(n);
    b
}

/// Chebyshev-Lobatto points mapped to `[0, t_max]`, ascending, with exact
/// endpoints `0` and `t_max`. `n = 0` gives the single midpoint.
pub fn cheb_points<T: Scalar>(n: usize, t_max: T) -> Vec<T> {
    let two = T::one() + T::one();
    if n == 0 {
        return vec![t_max / two];
    }
    lobatto_nodes::<T>(n)
        .into_iter()
        .enumerate()
        .map(|(j, tau)| {
            if j == 0 {
                T::zero()
            } else if j == n {
                t_max
            } else {
                (T::one() + tau) * t_max / two
            }
        })
        .collect()
}

/// `tau_j = -cos(j pi / n)`, computed as `-sin(pi (n - 2j) / (2n))` so that
/// the node set is exactly symmetric.
fn lobatto_nodes<T: Scalar>(n: usize) -> Vec<T> {
    let nn = T::from_usize(n).unwrap();
    let two = T::one() + T::one();
    (0..=n)
        .map(|j| {
            let m = T::from_i64_exact(n as i64 - 2 * j as i64);
            -(T::PI() * m / (two * nn)).sin()
        })
        .collect()
}

/// `cos(m pi / n)` for `m in 0..2n`.
fn cos_table<T: Scalar>(n: usize) -> Vec<T> {
    let nn = T::from_usize(n).unwrap();
    let two = T::one() + T::one();
    (0..2 * n)
        .map(|m| {
            let mm = if m <= n { m } else { 2 * n - m };
            let arg = T::from_i64_exact(n as i64 - 2 * mm as i64);
            (T::PI() * arg / (two * nn)).sin()
        })
        .collect()
}

impl<T: Scalar> ChebSeries<T> {
    pub fn new(t_max: T, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if !(t_max > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "t_max must be positive, got {t_max}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty Chebyshev series".into()));
        }
        Ok(Self { t_max, coeffs })
    }

    /// Interpolant through samples taken at `cheb_points(n, t_max)`.
    pub fn fit(samples: &[Complex<T>], t_max: T) -> Result<Self> {
        let n = samples
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("no samples".into()))?;
        if n == 0 {
            return Self::new(t_max, samples.to_vec());
        }
        let table = cos_table::<T>(n);
        let nn = T::from_usize(n).unwrap();
        let two = T::one() + T::one();
        let coeffs = (0..=n)
            .map(|l| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (j, &f) in samples.iter().enumerate() {
                    // sample j sits at tau = cos((n - j) pi / n)
                    let w = table[(l * (n - j)) % (2 * n)];
                    let term = f * w;
                    acc = acc + if j == 0 || j == n { term / two } else { term };
                }
                let scale = if l == 0 || l == n {
                    T::one() / nn
                } else {
                    two / nn
                };
                acc * scale
            })
            .collect();
        Self::new(t_max, coeffs)
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Time derivative, including the `2 / t_max` factor of the domain map.
    pub fn derivative(&self) -> Self {
        let factor = (T::one() + T::one()) / self.t_max;
        let coeffs = derivative_coeffs(&self.coeffs)
            .into_iter()
            .map(|b| b * factor)
            .collect();
        Self {
            t_max: self.t_max,
            coeffs,
        }
    }

    /// Upward-rounded `sum_l |a_l|`, which dominates `sup_t |s(t)|` because
    /// `|T_l| <= 1` on `[-1, 1]`.
    pub fn abs_coeff_sum_upper(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| {
            round::add_up(acc, ComplexInterval::point(*c).abs_upper())
        })
    }

    pub fn map_to_unit(&self, t: T) -> T {
        (t + t - self.t_max) / self.t_max
    }

    /// Value at time `t` by Clenshaw's recurrence.
    pub fn evaluate(&self, t: T) -> Result<Complex<T>> {
        if !(t >= T::zero() && t <= self.t_max) {
            return Err(Error::DomainError(format!(
                "t = {t} outside [0, {}]",
                self.t_max
            )));
        }
        Ok(clenshaw(&self.coeffs, self.map_to_unit(t)))
    }
}

/// `sum_l a_l T_l(tau)`.
pub fn clenshaw<T: Scalar>(a: &[Complex<T>], tau: T) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let two_tau = tau + tau;
    let (mut b1, mut b2) = (zero, zero);
    for c in a.iter().skip(1).rev() {
        let b0 = *c + b1 * two_tau - b2;
        b2 = b1;
        b1 = b0;
    }
    match a.first() {
        Some(&a0) => a0 + b1 * tau - b2,
        None => zero,
    }
}

/// Interval Clenshaw recurrence: encloses `sum_l a_l T_l(tau)` for every
/// `tau` in the interval and every choice of coefficients in theirs.
pub fn clenshaw_interval<T: Scalar>(
    a: &[ComplexInterval<T>],
    tau: Interval<T>,
) -> ComplexInterval<T> {
    let two_tau = tau + tau;
    let (mut b1, mut b2) = (ComplexInterval::zero(), ComplexInterval::zero());
    for c in a.iter().skip(1).rev() {
        let b0 = *c + b1.scale(two_tau) - b2;
        b2 = b1;
        b1 = b0;
    }
    match a.first() {
        Some(&a0) => a0 + b1.scale(tau) - b2,
        None => ComplexInterval::zero(),
    }
}

/// Enclosure of the series value at `t = 0` (`tau = -1`), where
/// `T_l(-1) = (-1)^l`.
pub fn value_at_start<T: Scalar>(a: &[ComplexInterval<T>]) -> ComplexInterval<T> {
    a.iter()
        .enumerate()
        .fold(ComplexInterval::zero(), |acc, (l, c)| {
            if l % 2 == 0 {
                acc + *c
            } else {
                acc - *c
            }
        })
}
