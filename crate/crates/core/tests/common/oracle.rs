//! Fixed-point reference arithmetic, 100+ correct decimal digits except
//! where noted.
//!
//! Values are `BigInt / 2^PREC`. Every routine is accurate to far below
//! [`slack`], which is what containment checks add on both sides.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const PREC: usize = 448;
/// Bits of the allowance in [`slack`].
const SLACK_BITS: usize = 380;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(pub BigInt);

fn one_raw() -> BigInt {
    BigInt::one() << PREC
}

impl Fx {
    pub fn from_int(k: i64) -> Self {
        Fx(BigInt::from(k) << PREC)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_rational(&exact(x))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Fx((q.numer() << PREC) / q.denom())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), one_raw())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap()
    }

    pub fn add(&self, o: &Self) -> Self {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fx(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Self {
        Fx(-&self.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fx((&self.0 * &o.0) >> PREC)
    }

    pub fn div(&self, o: &Self) -> Self {
        Fx((&self.0 << PREC) / &o.0)
    }

    pub fn div_int(&self, k: i64) -> Self {
        Fx(&self.0 / BigInt::from(k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Fx(self.0.abs())
    }
}

/// Exact rational value of a finite double, via the standard conversion.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn sqrt(x: &Fx) -> Fx {
    assert!(!x.0.is_negative());
    Fx((&x.0 << PREC).sqrt())
}

/// Taylor series of exp on a small argument.
fn exp_small(x: &Fx) -> Fx {
    let mut sum = Fx::from_int(1);
    let mut term = Fx::from_int(1);
    for k in 1.. {
        term = term.mul(x).div_int(k);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

pub fn exp(x: &Fx) -> Fx {
    // Halve until |x| < 2^-10, then square back.
    let mut k = 0;
    let mut r = x.clone();
    let limit = Fx(one_raw() >> 10);
    while r.abs() > limit {
        r = Fx(&r.0 >> 1usize);
        k += 1;
    }
    // The shifts above truncate; redo the reduction exactly as a rational.
    let r = Fx::from_rational(&(x.to_rational() / BigRational::from_integer(BigInt::one() << k)));
    let mut y = exp_small(&r);
    for _ in 0..k {
        y = y.mul(&y);
    }
    y
}

pub fn expm1(x: &Fx) -> Fx {
    if x.abs() < Fx::from_int(1) {
        exp_small(x).sub(&Fx::from_int(1))
    } else {
        exp(x).sub(&Fx::from_int(1))
    }
}

fn atan_inv(n: i64) -> Fx {
    // atan(1/n) = sum (-1)^k / ((2k+1) n^(2k+1))
    let n2 = BigInt::from(n * n);
    let mut power = Fx(one_raw() / BigInt::from(n));
    let mut sum = power.clone();
    let mut k = 1i64;
    loop {
        power = Fx(&power.0 / &n2);
        let term = power.div_int(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum = if k % 2 == 1 {
            sum.sub(&term)
        } else {
            sum.add(&term)
        };
        k += 1;
    }
    sum
}

/// Machin's formula, computed once.
pub fn pi() -> Fx {
    static PI: std::sync::OnceLock<Fx> = std::sync::OnceLock::new();
    PI.get_or_init(|| Fx(atan_inv(5).0 * 16 - atan_inv(239).0 * 4))
        .clone()
}

/// `(sin x, cos x)`.
pub fn sin_cos(x: &Fx) -> (Fx, Fx) {
    let two_pi = Fx(pi().0 * 2);
    let q = x.div(&two_pi);
    let n = (&q.0 + (one_raw() >> 1usize)) >> PREC;
    let r = x.sub(&Fx(&two_pi.0 * n));
    let mut s = Fx::from_int(0);
    let mut c = Fx::from_int(0);
    let mut term = Fx::from_int(1);
    for k in 0i64.. {
        if term.is_zero() && k > 2 {
            break;
        }
        match k % 4 {
            0 => c = c.add(&term),
            1 => s = s.add(&term),
            2 => c = c.sub(&term),
            _ => s = s.sub(&term),
        }
        term = term.mul(&r).div_int(k + 1);
    }
    (s, c)
}

/// `exp(x^2) erfc(x)` for `0 <= x <= 12`, from
/// `erf x = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1))`.
///
/// The subtraction cancels up to `exp(144)`, about 208 bits, so roughly
/// 65 digits survive; use [`erfc_slack`] with it.
pub fn erfc_scaled(x: &Fx) -> Fx {
    assert!(!x.0.is_negative() && *x <= Fx::from_int(12));
    let x2 = x.mul(x);
    let mut term = x.clone();
    let mut sum = term.clone();
    for n in 1i64.. {
        term = Fx(term.mul(&x2).0 * 2).div_int(2 * n + 1);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    static C: std::sync::OnceLock<Fx> = std::sync::OnceLock::new();
    let two_over_sqrt_pi = C.get_or_init(|| Fx::from_int(2).div(&sqrt(&pi())));
    exp(&x2).sub(&two_over_sqrt_pi.mul(&sum))
}

pub fn erfc(x: &Fx) -> Fx {
    erfc_scaled(x).mul(&exp(&x.mul(x).neg()))
}

/// Allowance for [`erfc_scaled`]: `|v| 2^-170`, still above 50 digits.
pub fn erfc_slack(v: &Fx) -> BigInt {
    (v.0.abs() >> 170usize) + BigInt::one()
}

/// `v * y` rounded down, exact in `y`.
pub fn mul_f64_down(v: &Fx, y: f64) -> Fx {
    let (m, e, sign) = num_traits::Float::integer_decode(y);
    let p = &v.0 * BigInt::from(m) * BigInt::from(sign);
    Fx(if e >= 0 {
        p << (e as usize)
    } else {
        p >> ((-e) as usize)
    })
}

/// Allowance for the oracle's own error, `(|v| + 1) 2^-250`, in raw units.
pub fn slack(v: &Fx) -> BigInt {
    (v.0.abs() >> SLACK_BITS) + (BigInt::one() << (PREC - SLACK_BITS))
}

/// `x 2^PREC` rounded down (`up = false`) or up.
fn scaled(x: f64, up: bool) -> BigInt {
    let (m, e, sign) = num_traits::Float::integer_decode(x);
    let m = BigInt::from(m) * BigInt::from(sign);
    let shift = e as i64 + PREC as i64;
    if shift >= 0 {
        m << (shift as usize)
    } else {
        // Arithmetic shift rounds toward minus infinity.
        let k = (-shift) as usize;
        let q = &m >> k;
        if up && (&q << k) != m {
            q + 1
        } else {
            q
        }
    }
}

/// True unless `v` is certainly outside `[lo, hi]`.
pub fn inside(v: &Fx, lo: f64, hi: f64) -> bool {
    let s = slack(v);
    let lo_ok = lo == f64::NEG_INFINITY || scaled(lo, true) <= &v.0 + &s;
    let hi_ok = hi == f64::INFINITY || &v.0 - &s <= scaled(hi, false);
    lo_ok && hi_ok
}

/// Exact containment of a rational value.
pub fn inside_exact(q: &BigRational, lo: f64, hi: f64) -> bool {
    exact(lo) <= *q && *q <= exact(hi)
}
