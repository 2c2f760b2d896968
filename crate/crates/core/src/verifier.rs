//! Rigorous bounds on `z = a - a~`, the coefficient error of an approximate
//! solution.
//!
//! With `r = a~' - A a~` the residual of the approximation,
//!
//! ```text
//! sup_{0 < t < t_max} ||z(t)|| <= exp(omega t_max) ||z(0)||
//!                                + (exp(omega t_max) - 1)/omega * sup_t ||r(t)||.
//! ```
//!
//! `||z(0)||` splits into a computed part over `|k| <= N` and a tail bound of
//! the initial datum; `sup_t ||r(t)||` is bounded from the Chebyshev
//! coefficients of `a~` in interval arithmetic.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{derivative_coeffs, value_at_start};
use crate::error::{Error, Result};
use crate::galerkin::{build_solution, build_solution_auto, ApproxSolution};
use crate::interval::{erfc_upper, expm1_over, loose, round, ComplexInterval, Interval};
use crate::problems::ProblemSpec;
use crate::scalar::Scalar;
use crate::semigroup::{certify, growth_factor, periodic_integral_factor, SemigroupCert};
use crate::seq::{split, CoeffSeq};

/// Upper bound for `(sum_{|k| > N} |a_k(0)|^2)^(1/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub enum TailBound<T> {
    /// `prefactor * erfc(N / scale)^(1/2)`.
    GaussianErfc {
        prefactor: Interval<T>,
        scale: Interval<T>,
    },
    /// `prefactor * ratio^N`, `0 <= ratio <= 1`.
    Geometric {
        prefactor: Interval<T>,
        ratio: Interval<T>,
    },
    /// The datum is exactly the listed sequence.
    ExplicitList { coeffs: CoeffSeq<T> },
    /// A value the caller vouches for, independent of `N`.
    CustomUpper { value: T },
}

impl<T: Scalar> TailBound<T> {
    pub fn eval(&self, n: usize) -> Result<T> {
        let nn =
            T::from_usize(n).ok_or_else(|| Error::InvalidInput(format!("N = {n} too large")))?;
        match self {
            TailBound::GaussianErfc { prefactor, scale } => {
                if !(scale.lo > T::zero()) || prefactor.lo < T::zero() {
                    return Err(Error::InvalidInput(
                        "gaussian tail needs scale > 0, prefactor >= 0".into(),
                    ));
                }
                // erfc is decreasing: a lower bound of N/scale gives an upper bound
                let x = round::div_down(nn, scale.hi);
                let e = erfc_upper(x)?;
                Ok(round::mul_up(prefactor.hi, round::sqrt_up(e)))
            }
            TailBound::Geometric { prefactor, ratio } => {
                if ratio.lo < T::zero() || ratio.hi > T::one() || prefactor.lo < T::zero() {
                    return Err(Error::InvalidInput(
                        "geometric tail needs 0 <= ratio <= 1, prefactor >= 0".into(),
                    ));
                }
                let mut p = prefactor.hi;
                for _ in 0..n {
                    if p.is_zero() {
                        break;
                    }
                    p = round::mul_up(p, ratio.hi);
                }
                Ok(p)
            }
            TailBound::ExplicitList { coeffs } => {
                let ni = n as i64;
                let s = coeffs
                    .iter()
                    .filter(|(k, _)| k.abs() > ni)
                    .fold(T::zero(), |acc, (_, c)| round::add_up(acc, c.norm_sqr().hi));
                Ok(round::sqrt_up(s))
            }
            TailBound::CustomUpper { value } => {
                if !(*value >= T::zero()) || !value.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "custom tail must be finite and >= 0, got {value}"
                    )));
                }
                Ok(*value)
            }
        }
    }
}

/// Wall-clock seconds of the stages of one verification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    /// Integration and Chebyshev fitting.
    pub approx_seconds: f64,
    /// Everything after the approximate solution exists.
    pub verify_seconds: f64,
    /// The whole run.
    pub exec_seconds: f64,
}

impl Timings {
    pub fn ratio(&self) -> f64 {
        self.exec_seconds / self.approx_seconds
    }
}

/// Three contributions to the residual bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualBreakdown<T> {
    /// Modes `|k| <= N`.
    pub head: T,
    /// Modes `N < |k| <= N + M` produced by the head of `c`.
    pub spill: T,
    /// `||c^(inf)||_1 sup_t ||B a~(t)||`.
    pub tail: T,
    pub total: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct VerificationReport<T> {
    pub problem: String,
    pub truncation: usize,
    pub degree: usize,
    pub t_max: T,
    pub tol: T,
    pub omega: Interval<T>,
    pub margin: Interval<T>,
    /// Computed part of `||z(0)||`, over `|k| <= N`.
    pub initial_rounding: T,
    /// Tail part of `||z(0)||`, over `|k| > N`.
    pub initial_tail: T,
    pub initial_error: T,
    pub residual: ResidualBreakdown<T>,
    pub total_error: T,
    pub period: Option<T>,
    pub periodic_total_error: Option<T>,
    pub timings: Timings,
}

/// Stage of [`verify`] that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Certify,
    InitialData,
    Approximate,
    InitialError,
    Residual,
    Combine,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Certify => "certify",
            Stage::InitialData => "initial data",
            Stage::Approximate => "approximate solution",
            Stage::InitialError => "initial error",
            Stage::Residual => "residual",
            Stage::Combine => "total error",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{stage} failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    pub source: Error,
}

fn at<X>(stage: Stage, r: Result<X>) -> std::result::Result<X, StageError> {
    r.map_err(|source| StageError { stage, source })
}

/// Upper bound of `||a(0) - a~(0)||`. `a0_exact` holds enclosures of `a_k(0)`
/// for `|k| <= N`.
pub fn initial_error_bound<T: Scalar>(
    a0_exact: &[ComplexInterval<T>],
    approx: &ApproxSolution<T>,
    tail: &TailBound<T>,
) -> Result<T> {
    let (head, tail) = initial_error_parts(a0_exact, approx, tail)?;
    Ok(round::add_up(head, tail))
}

fn initial_error_parts<T: Scalar>(
    a0_exact: &[ComplexInterval<T>],
    approx: &ApproxSolution<T>,
    tail: &TailBound<T>,
) -> Result<(T, T)> {
    if a0_exact.len() != approx.modes.len() {
        return Err(Error::InvalidInput(format!(
            "{} initial coefficients for {} modes",
            a0_exact.len(),
            approx.modes.len()
        )));
    }
    let mut s = T::zero();
    for (exact, mode) in a0_exact.iter().zip(&approx.modes) {
        let lifted: Vec<_> = mode
            .coeffs()
            .iter()
            .map(|&z| ComplexInterval::point(z))
            .collect();
        let d = *exact - value_at_start(&lifted);
        s = round::add_up(s, d.norm_sqr().hi);
    }
    Ok((round::sqrt_up(s), tail.eval(approx.truncation)?))
}

/// Initial error of the floating-point representation of the datum alone:
/// `a~_k(0)` taken as the midpoint of each enclosure of `a_k(0)`.
pub fn projection_initial_error<T: Scalar>(
    a0_exact: &[ComplexInterval<T>],
    tail: &TailBound<T>,
) -> Result<T> {
    let n = a0_exact.len() / 2;
    let mut s = T::zero();
    for exact in a0_exact {
        let d = *exact - ComplexInterval::point(exact.mid());
        s = round::add_up(s, d.norm_sqr().hi);
    }
    Ok(round::add_up(round::sqrt_up(s), tail.eval(n)?))
}

/// Running `(sum_k (row_k)^2)` of per-mode `sum_l |x_{k,l}|`, rounded up.
#[derive(Default)]
struct L2OfL1<T> {
    acc: T,
}

impl<T: Scalar> L2OfL1<T> {
    fn push_row(&mut self, row: impl Iterator<Item = ComplexInterval<T>>) {
        let l1 = row.fold(T::zero(), |a, x| loose::add_up(a, x.abs_upper_loose()));
        self.acc = round::add_up(self.acc, round::mul_up(l1, l1));
    }

    fn finish(&self) -> T {
        round::sqrt_up(self.acc)
    }
}

/// `x * s` for `s > 0`, [`loose`] rounding.
#[inline]
fn scale_pos<T: Scalar>(x: Interval<T>, s: Interval<T>) -> Interval<T> {
    let lo = if x.lo >= T::zero() {
        loose::mul_down(x.lo, s.lo)
    } else {
        loose::mul_down(x.lo, s.hi)
    };
    let hi = if x.hi >= T::zero() {
        loose::mul_up(x.hi, s.hi)
    } else {
        loose::mul_up(x.hi, s.lo)
    };
    Interval { lo, hi }
}

/// Upper bound of `sup_t ||a~'(t) - A a~(t)||`, with `c` split into the head
/// `|m| <= split_m` and the rest.
pub fn residual_bound<T: Scalar>(
    approx: &ApproxSolution<T>,
    c: &CoeffSeq<T>,
    split_m: usize,
) -> Result<ResidualBreakdown<T>> {
    if !c.overlaps(&approx.c_used) {
        return Err(Error::CoefficientMismatch);
    }
    let n = approx.truncation as i64;
    let deg = approx.degree;
    let scale = Interval::from_int(2).try_div(&Interval::point(approx.t_max))?;

    // (j, i m c_j) for m = -N..=N, so each product below is interval times point
    let terms: Vec<(i64, Vec<ComplexInterval<T>>)> = c
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| {
            (
                j,
                (-n..=n)
                    .map(|m| v.mul_i().scale(Interval::from_int(m)))
                    .collect(),
            )
        })
        .collect();
    let coeff = |m: i64, l: usize| approx.modes[(m + n) as usize].coeffs()[l];
    let conv_onto =
        |start: ComplexInterval<T>, k: i64, l: usize, max_j: usize| -> ComplexInterval<T> {
            let mut s = start;
            for (j, icm) in &terms {
                let m = k - j;
                if m.abs() <= n && j.unsigned_abs() as usize <= max_j {
                    s = s.add_mul_point_loose(&icm[(m + n) as usize], coeff(m, l));
                }
            }
            s
        };

    // |k| <= N: derivative plus the full stored convolution
    let mut head = L2OfL1::default();
    for (idx, mode) in approx.modes.iter().enumerate() {
        let k = idx as i64 - n;
        let lifted: Vec<_> = mode
            .coeffs()
            .iter()
            .map(|&z| ComplexInterval::point(z))
            .collect();
        let deriv = derivative_coeffs(&lifted);
        head.push_row((0..=deg).map(|l| {
            let start = match deriv.get(l) {
                Some(d) if l < deg => {
                    ComplexInterval::new(scale_pos(d.re, scale), scale_pos(d.im, scale))
                }
                _ => ComplexInterval::zero(),
            };
            conv_onto(start, k, l, usize::MAX)
        }));
    }

    // N < |k| <= N + M: only c^(M) reaches here through the truncated product
    let parts = split(c, split_m, T::zero());
    let widest = terms
        .iter()
        .map(|(j, _)| j.unsigned_abs() as usize)
        .filter(|&j| j <= split_m)
        .max()
        .unwrap_or(0);
    let reach = n + widest as i64;
    let mut spill = L2OfL1::default();
    for k in (-reach..=reach).filter(|k| k.abs() > n) {
        spill.push_row((0..=deg).map(|l| conv_onto(ComplexInterval::zero(), k, l, split_m)));
    }

    let tail = if parts.tail_l1_upper.is_zero() {
        T::zero()
    } else {
        // sup_t ||B a~(t)|| <= (sum_k (|k| sum_l |a~_{k,l}|)^2)^(1/2)
        let mut acc = T::zero();
        for (idx, mode) in approx.modes.iter().enumerate() {
            let k = T::from_i64_exact((idx as i64 - n).abs());
            let row = round::mul_up(k, mode.abs_coeff_sum_upper());
            acc = round::add_up(acc, round::mul_up(row, row));
        }
        round::mul_up(parts.tail_l1_upper, round::sqrt_up(acc))
    };

    let (head, spill) = (head.finish(), spill.finish());
    let total = round::add_up(round::add_up(head, spill), tail);
    Ok(ResidualBreakdown {
        head,
        spill,
        tail,
        total,
    })
}

/// Upper bound of `exp(omega t_max) z0 + (exp(omega t_max) - 1)/omega r`.
pub fn total_error_bound<T: Scalar>(cert: &SemigroupCert<T>, z0: T, r: T, t_max: T) -> Result<T> {
    check_nonneg(z0, r)?;
    let g = growth_factor(cert, t_max)?;
    let e = expm1_over(cert.omega, t_max)?;
    Ok((g * Interval::point(z0) + e * Interval::point(r)).hi)
}

/// Upper bound of `||z(t)||` at a single time `t = nT + tau` of a
/// `T`-periodic flow:
/// `exp(omega tau) z0 + (n (exp(omega T) - 1) + exp(omega tau) - 1)/omega r`.
pub fn total_error_bound_periodic<T: Scalar>(
    cert: &SemigroupCert<T>,
    z0: T,
    r: T,
    t: T,
) -> Result<T> {
    check_nonneg(z0, r)?;
    let g = crate::semigroup::growth_factor_periodic(cert, t)?;
    let f = periodic_integral_factor(cert, t)?;
    Ok((g * Interval::point(z0) + f * Interval::point(r)).hi)
}

/// Sup over `[0, t_max]` of [`total_error_bound_periodic`]: the growth factor
/// never exceeds `exp(omega min(T, t_max))` and the integral factor is
/// increasing in `t`.
pub fn sup_error_bound_periodic<T: Scalar>(
    cert: &SemigroupCert<T>,
    z0: T,
    r: T,
    t_max: T,
) -> Result<T> {
    check_nonneg(z0, r)?;
    let period = cert.period()?;
    let g = growth_factor(cert, period.min(t_max))?;
    let f = periodic_integral_factor(cert, t_max)?;
    Ok((g * Interval::point(z0) + f * Interval::point(r)).hi)
}

fn check_nonneg<T: Scalar>(z0: T, r: T) -> Result<()> {
    if z0 >= T::zero() && r >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "z0 = {z0} and r = {r} must be >= 0"
        )))
    }
}

/// Parameters of one verification run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyParams<T> {
    pub truncation: usize,
    /// Chebyshev degree; `None` picks it by doubling.
    pub degree: Option<usize>,
    pub t_max: T,
    pub tol: T,
    /// Overrides the problem's asserted period.
    pub period: Option<T>,
}

impl<T: Scalar> VerifyParams<T> {
    pub fn new(truncation: usize, degree: usize, t_max: T) -> Self {
        Self {
            truncation,
            degree: Some(degree),
            t_max,
            tol: default_tol(),
            period: None,
        }
    }
}

pub fn default_tol<T: Scalar>() -> T {
    T::from_f64(1e-15)
        .unwrap()
        .max(T::epsilon() * T::from_f64(4.5).unwrap())
}

/// Full pipeline: certify `c`, build the approximate solution, bound the
/// initial error and residual, and combine.
pub fn verify<T: Scalar>(
    problem: &ProblemSpec<T>,
    params: &VerifyParams<T>,
) -> std::result::Result<VerificationReport<T>, StageError> {
    let start = Instant::now();
    let period = params.period.or(problem.asserted_period);
    let cert = at(Stage::Certify, certify(&problem.c))?.with_period(period);
    let n = params.truncation;
    let a0 = at(Stage::InitialData, problem.a0.coefficients(n))?;
    let a0_mid: Vec<_> = a0.iter().map(|z| z.mid()).collect();

    let approx_start = Instant::now();
    let approx = at(
        Stage::Approximate,
        match params.degree {
            Some(d) => build_solution(&problem.c, &a0_mid, n, d, params.t_max, params.tol),
            None => build_solution_auto(&problem.c, &a0_mid, n, params.t_max, params.tol),
        },
    )?;
    let approx_seconds = approx_start.elapsed().as_secs_f64();

    let verify_start = Instant::now();
    let (initial_rounding, initial_tail) = at(
        Stage::InitialError,
        initial_error_parts(&a0, &approx, &problem.tail),
    )?;
    let initial_error = round::add_up(initial_rounding, initial_tail);
    let residual = at(Stage::Residual, residual_bound(&approx, &problem.c, n))?;
    let total_error = at(
        Stage::Combine,
        total_error_bound(&cert, initial_error, residual.total, params.t_max),
    )?;
    let periodic_total_error = match cert.period {
        Some(_) => Some(at(
            Stage::Combine,
            sup_error_bound_periodic(&cert, initial_error, residual.total, params.t_max),
        )?),
        None => None,
    };
    let verify_seconds = verify_start.elapsed().as_secs_f64();

    Ok(VerificationReport {
        problem: problem.name.clone(),
        truncation: n,
        degree: approx.degree,
        t_max: params.t_max,
        tol: params.tol,
        omega: cert.omega,
        margin: cert.margin,
        initial_rounding,
        initial_tail,
        initial_error,
        residual,
        total_error,
        period,
        periodic_total_error,
        timings: Timings {
            approx_seconds,
            verify_seconds,
            exec_seconds: start.elapsed().as_secs_f64(),
        },
    })
}
