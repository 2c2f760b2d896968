//! Outward-rounded interval arithmetic.
//!
//! The kernel never touches the process rounding mode. Each elementary
//! operation is evaluated in round-to-nearest and the exact rounding error is
//! recovered with an error-free transformation (`two_sum`, Veltkamp/Dekker
//! `two_prod`). The sign of that error tells which neighbour of the rounded
//! result is the correct directed bound, so exact results stay exact and
//! inexact ones cost one ulp. When an error-free transformation is not valid
//! (overflow, underflow range) the result is pushed one ulp outward instead.
//!
//! Transcendental functions take the libm value and widen it by
//! [`LIBM_ULPS`] ulps on each side.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Widening applied to libm results of `exp`, `expm1`, `sin` and `cos`.
pub const LIBM_ULPS: u32 = 4;

/// Directed-rounding primitives on bare scalars.
pub mod round {
    use crate::scalar::Scalar;

    #[inline]
    pub fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s, err)
    }

    /// `(p, Some(e))` with `a*b = p + e` exactly, or `(p, None)` when the
    /// splitting is not exact for these magnitudes.
    #[inline]
    pub fn two_prod<T: Scalar>(a: T, b: T) -> (T, Option<T>) {
        let p = a * b;
        if a.is_zero() || b.is_zero() {
            return (p, Some(T::zero()));
        }
        let (aa, ba, pa) = (a.abs(), b.abs(), p.abs());
        if !(aa >= T::TWO_PROD_MIN
            && aa <= T::TWO_PROD_MAX
            && ba >= T::TWO_PROD_MIN
            && ba <= T::TWO_PROD_MAX
            && pa >= T::TWO_PROD_MIN
            && pa <= T::TWO_PROD_MAX)
        {
            return (p, None);
        }
        let (ah, al) = split(a);
        let (bh, bl) = split(b);
        let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
        (p, Some(err))
    }

    #[inline]
    fn split<T: Scalar>(a: T) -> (T, T) {
        let c = T::SPLITTER * a;
        let hi = c - (c - a);
        (hi, a - hi)
    }

    #[inline]
    fn directed_up<T: Scalar>(r: T, err: Option<T>) -> T {
        match err {
            Some(e) if e.is_nan() => r.next_up(),
            Some(e) if e > T::zero() => r.next_up(),
            Some(_) => r,
            None => r.next_up(),
        }
    }

    #[inline]
    fn directed_down<T: Scalar>(r: T, err: Option<T>) -> T {
        match err {
            Some(e) if e.is_nan() => r.next_down(),
            Some(e) if e < T::zero() => r.next_down(),
            Some(_) => r,
            None => r.next_down(),
        }
    }

    #[inline]
    pub fn add_up<T: Scalar>(a: T, b: T) -> T {
        let (s, e) = two_sum(a, b);
        directed_up(s, Some(e))
    }

    #[inline]
    pub fn add_down<T: Scalar>(a: T, b: T) -> T {
        let (s, e) = two_sum(a, b);
        directed_down(s, Some(e))
    }

    #[inline]
    pub fn sub_up<T: Scalar>(a: T, b: T) -> T {
        add_up(a, -b)
    }

    #[inline]
    pub fn sub_down<T: Scalar>(a: T, b: T) -> T {
        add_down(a, -b)
    }

    #[inline]
    pub fn mul_up<T: Scalar>(a: T, b: T) -> T {
        let (p, e) = two_prod(a, b);
        directed_up(p, e)
    }

    #[inline]
    pub fn mul_down<T: Scalar>(a: T, b: T) -> T {
        let (p, e) = two_prod(a, b);
        directed_down(p, e)
    }

    /// Sign of the remainder `a - q*b`, when it can be computed exactly.
    #[inline]
    fn div_remainder<T: Scalar>(a: T, b: T, q: T) -> Option<T> {
        if !q.is_finite() {
            return None;
        }
        match two_prod(q, b) {
            (p, Some(e)) if p.is_finite() => Some((a - p) - e),
            _ => None,
        }
    }

    #[inline]
    pub fn div_up<T: Scalar>(a: T, b: T) -> T {
        let q = a / b;
        if a.is_zero() {
            return q;
        }
        // true quotient = q + r/b
        let err = div_remainder(a, b, q).map(|r| if b > T::zero() { r } else { -r });
        directed_up(q, err)
    }

    #[inline]
    pub fn div_down<T: Scalar>(a: T, b: T) -> T {
        let q = a / b;
        if a.is_zero() {
            return q;
        }
        let err = div_remainder(a, b, q).map(|r| if b > T::zero() { r } else { -r });
        directed_down(q, err)
    }

    #[inline]
    fn sqrt_err<T: Scalar>(x: T, s: T) -> Option<T> {
        if x.is_zero() {
            return Some(T::zero());
        }
        match two_prod(s, s) {
            (p, Some(e)) => Some((x - p) - e),
            _ => None,
        }
    }

    #[inline]
    pub fn sqrt_up<T: Scalar>(x: T) -> T {
        let s = x.sqrt();
        directed_up(s, sqrt_err(x, s))
    }

    #[inline]
    pub fn sqrt_down<T: Scalar>(x: T) -> T {
        let s = x.sqrt();
        directed_down(s, sqrt_err(x, s)).max(T::zero())
    }
}

/// Cheaper directed rounding: the round-to-nearest result moved one ulp
/// outward. Always a valid bound (the rounding error is at most half an ulp,
/// also in the subnormal range and at overflow), but never tight.
pub mod loose {
    use crate::scalar::Scalar;

    // A sum that rounds to zero is exact, and so is a product with a zero
    // factor; those are returned unmoved.

    #[inline]
    pub fn add_up<T: Scalar>(a: T, b: T) -> T {
        let s = a + b;
        if s.is_zero() {
            s
        } else {
            s.next_up()
        }
    }

    #[inline]
    pub fn add_down<T: Scalar>(a: T, b: T) -> T {
        let s = a + b;
        if s.is_zero() {
            s
        } else {
            s.next_down()
        }
    }

    #[inline]
    pub fn mul_up<T: Scalar>(a: T, b: T) -> T {
        if a.is_zero() || b.is_zero() {
            T::zero()
        } else {
            (a * b).next_up()
        }
    }

    #[inline]
    pub fn mul_down<T: Scalar>(a: T, b: T) -> T {
        if a.is_zero() || b.is_zero() {
            T::zero()
        } else {
            (a * b).next_down()
        }
    }

    #[inline]
    pub fn sqrt_up<T: Scalar>(x: T) -> T {
        if x.is_zero() {
            x
        } else {
            x.sqrt().next_up()
        }
    }
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    /// Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn try_new(lo: T, hi: T) -> Result<Self> {
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInput(format!(
                "[{lo}, {hi}] is not an interval"
            )))
        }
    }

    #[inline]
    pub fn point(x: T) -> Self {
        Self { lo: x, hi: x }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::point(T::one())
    }

    pub fn from_int(k: i64) -> Self {
        let x = T::from_i64_exact(k);
        if x.to_i64() == Some(k) {
            Self::point(x)
        } else {
            Self::new(x.next_down(), x.next_up())
        }
    }

    /// Tightest enclosure of a decimal literal such as `"0.49"` or `"-1.5e-3"`.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let exact = parse_decimal_rational(s)?;
        let x: T = s
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("not a number: {s:?}")))?;
        if !x.is_finite() {
            return Err(Error::ParseError(format!("{s:?} overflows")));
        }
        let xr = scalar_to_rational(x);
        Ok(match xr.cmp(&exact) {
            std::cmp::Ordering::Equal => Self::point(x),
            std::cmp::Ordering::Less => Self::new(x, x.next_up()),
            std::cmp::Ordering::Greater => Self::new(x.next_down(), x),
        })
    }

    #[inline]
    pub fn width(&self) -> T {
        round::sub_up(self.hi, self.lo)
    }

    #[inline]
    pub fn mid(&self) -> T {
        if self.lo == self.hi {
            return self.lo;
        }
        let two = T::one() + T::one();
        let m = self.lo / two + self.hi / two;
        m.max(self.lo).min(self.hi)
    }

    /// Largest absolute value.
    #[inline]
    pub fn mag(&self) -> T {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    #[inline]
    pub fn mig(&self) -> T {
        if self.contains_zero() {
            T::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.contains(T::zero())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `[x*x]` for `x` in the interval; never negative.
    pub fn sqr(&self) -> Self {
        if self.lo >= T::zero() {
            Self::new(
                round::mul_down(self.lo, self.lo),
                round::mul_up(self.hi, self.hi),
            )
        } else if self.hi <= T::zero() {
            Self::new(
                round::mul_down(self.hi, self.hi),
                round::mul_up(self.lo, self.lo),
            )
        } else {
            let m = self.mag();
            Self::new(T::zero(), round::mul_up(m, m))
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.mig(), self.mag())
    }

    /// Interval times a single scalar.
    #[inline]
    pub fn scale(&self, x: T) -> Self {
        if x >= T::zero() {
            Self::new(round::mul_down(self.lo, x), round::mul_up(self.hi, x))
        } else {
            Self::new(round::mul_down(self.hi, x), round::mul_up(self.lo, x))
        }
    }

    /// [`Interval::scale`] with [`loose`] rounding.
    #[inline]
    pub fn scale_loose(&self, x: T) -> Self {
        if x >= T::zero() {
            Self {
                lo: loose::mul_down(self.lo, x),
                hi: loose::mul_up(self.hi, x),
            }
        } else {
            Self {
                lo: loose::mul_down(self.hi, x),
                hi: loose::mul_up(self.lo, x),
            }
        }
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::DivByZeroInterval);
        }
        let (a, b) = (self, rhs);
        let lo = round::div_down(a.lo, b.lo)
            .min(round::div_down(a.lo, b.hi))
            .min(round::div_down(a.hi, b.lo))
            .min(round::div_down(a.hi, b.hi));
        let hi = round::div_up(a.lo, b.lo)
            .max(round::div_up(a.lo, b.hi))
            .max(round::div_up(a.hi, b.lo))
            .max(round::div_up(a.hi, b.hi));
        Ok(Self::new(lo, hi))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().try_div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        sqrt_enclosure(*self)
    }

    pub fn exp(&self) -> Result<Self> {
        exp_enclosure(*self)
    }

    pub fn max_with(&self, other: &Self) -> Self {
        Self::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Converts to `f64` without losing the enclosure.
    pub fn to_f64(&self) -> Interval<f64> {
        let lo = self.lo.to_f64_lossy();
        let hi = self.hi.to_f64_lossy();
        Interval { lo, hi }
    }
}

impl<T: fmt::Debug> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl<T: fmt::LowerExp> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl<T: Scalar> Add for Interval<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl<T: Scalar> Sub for Interval<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl<T: Scalar> Neg for Interval<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<T: Scalar> Mul for Interval<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self, rhs);
        if a.lo == a.hi {
            return b.scale(a.lo);
        }
        if b.lo == b.hi {
            return a.scale(b.lo);
        }
        let lo = round::mul_down(a.lo, b.lo)
            .min(round::mul_down(a.lo, b.hi))
            .min(round::mul_down(a.hi, b.lo))
            .min(round::mul_down(a.hi, b.hi));
        let hi = round::mul_up(a.lo, b.lo)
            .max(round::mul_up(a.lo, b.hi))
            .max(round::mul_up(a.hi, b.lo))
            .max(round::mul_up(a.hi, b.hi));
        Self { lo, hi }
    }
}

impl<T: Scalar> std::iter::Sum for Interval<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

/// Rectangular complex interval.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct ComplexInterval<T> {
    pub re: Interval<T>,
    pub im: Interval<T>,
}

impl<T: Scalar> ComplexInterval<T> {
    #[inline]
    pub fn new(re: Interval<T>, im: Interval<T>) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(Interval::zero(), Interval::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::new(Interval::one(), Interval::zero())
    }

    #[inline]
    pub fn point(z: Complex<T>) -> Self {
        Self::new(Interval::point(z.re), Interval::point(z.im))
    }

    pub fn real(re: Interval<T>) -> Self {
        Self::new(re, Interval::zero())
    }

    pub fn mid(&self) -> Complex<T> {
        Complex::new(self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.re.is_subset_of(&other.re) && self.im.is_subset_of(&other.im)
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::new(self.re.hull(&other.re), self.im.hull(&other.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re == Interval::zero() && self.im == Interval::zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiplication by the imaginary unit (exact).
    #[inline]
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im, self.re)
    }

    #[inline]
    pub fn scale(&self, s: Interval<T>) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    #[inline]
    pub fn scale_point(&self, s: T) -> Self {
        Self::new(self.re.scale(s), self.im.scale(s))
    }

    /// Product with a point complex number.
    #[inline]
    pub fn mul_point(&self, z: Complex<T>) -> Self {
        let re = self.re.scale(z.re) - self.im.scale(z.im);
        let im = self.re.scale(z.im) + self.im.scale(z.re);
        Self::new(re, im)
    }

    /// Enclosure of `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Interval<T> {
        self.re.sqr() + self.im.sqr()
    }

    /// Enclosure of the modulus.
    pub fn abs(&self) -> Interval<T> {
        let n = self.norm_sqr();
        Interval::new(round::sqrt_down(n.lo.max(T::zero())), round::sqrt_up(n.hi))
    }

    /// `self + c * z` using [`loose`] rounding.
    #[inline]
    pub fn add_mul_point_loose(&self, c: &Self, z: Complex<T>) -> Self {
        let a = c.re.scale_loose(z.re);
        let b = c.im.scale_loose(z.im);
        let e = c.re.scale_loose(z.im);
        let f = c.im.scale_loose(z.re);
        Self {
            re: Interval {
                lo: loose::add_down(self.re.lo, loose::add_down(a.lo, -b.hi)),
                hi: loose::add_up(self.re.hi, loose::add_up(a.hi, -b.lo)),
            },
            im: Interval {
                lo: loose::add_down(self.im.lo, loose::add_down(e.lo, f.lo)),
                hi: loose::add_up(self.im.hi, loose::add_up(e.hi, f.hi)),
            },
        }
    }

    /// `|self|` bounded above with [`loose`] rounding.
    #[inline]
    pub fn abs_upper_loose(&self) -> T {
        let x = self.re.mag();
        let y = self.im.mag();
        loose::sqrt_up(loose::add_up(loose::mul_up(x, x), loose::mul_up(y, y)))
    }

    /// Upper bound of `|z|` over the rectangle (worst corner, rounded up).
    #[inline]
    pub fn abs_upper(&self) -> T {
        let x = self.re.mag();
        let y = self.im.mag();
        if y.is_zero() {
            return x;
        }
        if x.is_zero() {
            return y;
        }
        round::sqrt_up(round::add_up(round::mul_up(x, x), round::mul_up(y, y)))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        let den = rhs.norm_sqr();
        if den.lo <= T::zero() {
            return Err(Error::DivByZeroInterval);
        }
        let num = *self * rhs.conj();
        Ok(Self::new(num.re.try_div(&den)?, num.im.try_div(&den)?))
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

impl<T: Scalar> Add for ComplexInterval<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Scalar> Sub for ComplexInterval<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Scalar> Neg for ComplexInterval<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: Scalar> Mul for ComplexInterval<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let re = self.re * rhs.re - self.im * rhs.im;
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl<T: Scalar> std::iter::Sum for ComplexInterval<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

/// Enclosure of pi.
pub fn pi_enclosure<T: Scalar>() -> Interval<T> {
    let p = T::PI();
    Interval::new(p.next_down(), p.next_up())
}

pub fn sqrt_enclosure<T: Scalar>(a: Interval<T>) -> Result<Interval<T>> {
    if a.lo < T::zero() {
        return Err(Error::DomainError(format!("sqrt of {a:?}")));
    }
    Ok(Interval::new(round::sqrt_down(a.lo), round::sqrt_up(a.hi)))
}

/// Enclosure of `exp(x)` for every `x` in `a`.
pub fn exp_enclosure<T: Scalar>(a: Interval<T>) -> Result<Interval<T>> {
    let hi = if a.hi.is_zero() {
        T::one()
    } else {
        a.hi.exp().up_by(LIBM_ULPS)
    };
    if !hi.is_finite() {
        return Err(Error::ExpOverflow);
    }
    let lo = if a.lo.is_zero() {
        T::one()
    } else {
        a.lo.exp().down_by(LIBM_ULPS).max(T::zero())
    };
    Ok(Interval::new(lo, hi))
}

/// Enclosure of `exp(x) - 1`.
pub fn expm1_enclosure<T: Scalar>(a: Interval<T>) -> Result<Interval<T>> {
    let hi = if a.hi.is_zero() {
        T::zero()
    } else {
        a.hi.exp_m1().up_by(LIBM_ULPS)
    };
    if !hi.is_finite() {
        return Err(Error::ExpOverflow);
    }
    let lo = if a.lo.is_zero() {
        T::zero()
    } else {
        a.lo.exp_m1().down_by(LIBM_ULPS).max(-T::one())
    };
    Ok(Interval::new(lo, hi))
}

/// Enclosure of `(exp(omega*t) - 1) / omega`, continuous at `omega = 0`
/// where it equals `t`.
///
/// The map `omega -> (exp(omega*t) - 1)/omega` is increasing for `t >= 0`, so
/// the endpoints of `omega` give the endpoints of the result.
pub fn expm1_over<T: Scalar>(omega: Interval<T>, t: T) -> Result<Interval<T>> {
    if omega.lo < T::zero() {
        return Err(Error::DomainError(format!(
            "expm1_over needs omega >= 0, got {omega:?}"
        )));
    }
    if t < T::zero() {
        return Err(Error::DomainError(format!(
            "expm1_over needs t >= 0, got {t}"
        )));
    }
    if t.is_zero() {
        return Ok(Interval::zero());
    }
    let upper = |w: T| -> Result<T> {
        if w.is_zero() {
            return Ok(t);
        }
        let wt = round::mul_up(w, t);
        let num = expm1_enclosure(Interval::point(wt))?.hi;
        Ok(round::div_up(num, w))
    };
    let lower = |w: T| -> Result<T> {
        if w.is_zero() {
            return Ok(t);
        }
        let wt = round::mul_down(w, t);
        let num = expm1_enclosure(Interval::point(wt))?.lo;
        Ok(round::div_down(num, w).max(t))
    };
    Ok(Interval::new(lower(omega.lo)?, upper(omega.hi)?))
}

/// Upper bound of `erfc(x)` for `x >= 0`.
///
/// Uses `erfc(x) <= exp(-x^2) / (x sqrt(pi))`, valid for all `x > 0`, when
/// `x >= 1`, and the trivial bound 1 otherwise.
pub fn erfc_upper<T: Scalar>(x: T) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(Error::DomainError(format!(
            "erfc_upper needs x >= 0, got {x}"
        )));
    }
    if x < T::one() {
        return Ok(T::one());
    }
    let x2_lo = round::mul_down(x, x);
    let e = exp_enclosure(Interval::point(-x2_lo))?.hi;
    let sqrt_pi_lo = round::sqrt_down(pi_enclosure::<T>().lo);
    let den = round::mul_down(x, sqrt_pi_lo);
    Ok(round::div_up(e, den).min(T::one()))
}

/// Enclosure of `cos` over `theta`.
pub fn cos_enclosure<T: Scalar>(theta: Interval<T>) -> Interval<T> {
    trig_enclosure(theta, T::cos, Interval::zero())
}

/// Enclosure of `sin` over `theta`.
pub fn sin_enclosure<T: Scalar>(theta: Interval<T>) -> Interval<T> {
    let two = T::one() + T::one();
    let half_pi = pi_enclosure::<T>().scale(T::one() / two);
    trig_enclosure(theta, T::sin, half_pi)
}

/// `f` is cos or sin; its extrema sit at `phase + j*pi` (maximum for even
/// `j`, minimum for odd `j`).
fn trig_enclosure<T: Scalar>(theta: Interval<T>, f: fn(T) -> T, phase: Interval<T>) -> Interval<T> {
    let full = Interval::new(-T::one(), T::one());
    let pi = pi_enclosure::<T>();
    if !theta.is_finite() || theta.width() >= round::mul_down(pi.lo, T::one() + T::one()) {
        return full;
    }
    let widen = |y: T| Interval::new(y.down_by(LIBM_ULPS), y.up_by(LIBM_ULPS));
    let mut out = widen(f(theta.lo)).hull(&widen(f(theta.hi)));
    let j_lo = ((theta.lo - phase.hi) / pi.lo)
        .floor()
        .to_i64()
        .unwrap_or(0)
        - 1;
    let j_hi = ((theta.hi - phase.lo) / pi.lo).ceil().to_i64().unwrap_or(0) + 1;
    for j in j_lo.min(j_hi)..=j_hi.max(j_lo) {
        let x = phase + pi * Interval::from_int(j);
        if x.intersects(&theta) {
            if j.rem_euclid(2) == 0 {
                out.hi = T::one();
            } else {
                out.lo = -T::one();
            }
        }
    }
    Interval::new(out.lo.max(-T::one()), out.hi.min(T::one()))
}

/// Enclosure of `exp(i*theta)`.
pub fn unit_complex_enclosure<T: Scalar>(theta: Interval<T>) -> ComplexInterval<T> {
    ComplexInterval::new(cos_enclosure(theta), sin_enclosure(theta))
}

/// Exact rational value of a finite scalar.
pub fn scalar_to_rational<T: Scalar>(x: T) -> BigRational {
    let (mantissa, exponent, sign) = x.integer_decode();
    let mut num = BigInt::from(mantissa);
    if sign < 0 {
        num = -num;
    }
    if exponent >= 0 {
        BigRational::from_integer(num << (exponent as usize))
    } else {
        BigRational::new(num, BigInt::one() << ((-exponent) as usize))
    }
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::ParseError(format!("malformed decimal {s:?}"));
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    debug_assert!(r.numer().sign() != Sign::NoSign || r.is_zero());
    Ok(r)
}
