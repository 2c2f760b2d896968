//! Growth bounds for the semigroup generated by `A a = -c * (B a)`.
//!
//! If `|c_0| - 2 sum_{m != 0} |c_m| > 0` then `A` generates a semigroup with
//! `||S(t)|| <= exp(omega t)`, `omega = ||Bc||_1 / 2`. When the flow is known
//! to be `T`-periodic the factor restarts every period.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{exp_enclosure, expm1_over, Interval};
use crate::scalar::Scalar;
use crate::seq::CoeffSeq;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct SemigroupCert<T> {
    /// `||Bc||_1 / 2`.
    pub omega: Interval<T>,
    /// `|c_0| - 2 sum_{m != 0} |c_m|`, positive on a valid certificate.
    pub margin: Interval<T>,
    /// `sum_{m != 0} |c_m| / |c_0|`.
    pub kappa: Interval<T>,
    /// `||Bc||_1 / (1 - 2 kappa)`; resolvent parameters above it are admissible.
    pub lambda0_threshold: Interval<T>,
    /// User-asserted period of the flow.
    pub period: Option<T>,
}

/// Checks the dissipativity hypothesis and computes the growth constants.
pub fn certify<T: Scalar>(c: &CoeffSeq<T>) -> Result<SemigroupCert<T>> {
    c.validate_hermitian()?;
    let abs_c0 = c.get(0).abs();
    let mut off = Interval::zero();
    let mut weighted = Interval::zero();
    for (m, cm) in c.iter() {
        if m == 0 || cm.is_zero() {
            continue;
        }
        let a = cm.abs();
        off = off + a;
        weighted = weighted + a * Interval::from_int(m.abs());
    }
    let two = Interval::from_int(2);
    let margin = abs_c0 - two * off;
    if !(margin.lo > T::zero()) {
        return Err(Error::DissipativityUnverified {
            margin_lo: margin.lo.to_f64_lossy(),
        });
    }
    let omega = weighted.scale(T::one() / (T::one() + T::one()));
    if !omega.hi.is_finite() {
        return Err(Error::InvalidInput("omega is not finite".into()));
    }
    let kappa = off.try_div(&abs_c0)?;
    let lambda0_threshold = weighted.try_div(&(Interval::one() - two * kappa))?;
    Ok(SemigroupCert {
        omega,
        margin,
        kappa,
        lambda0_threshold,
        period: None,
    })
}

impl<T: Scalar> SemigroupCert<T> {
    pub fn with_period(mut self, period: Option<T>) -> Self {
        self.period = period;
        self
    }

    pub fn period(&self) -> Result<T> {
        match self.period {
            Some(p) if p > T::zero() && p.is_finite() => Ok(p),
            Some(p) => Err(Error::InvalidInput(format!(
                "period must be positive, got {p}"
            ))),
            None => Err(Error::PeriodRequired),
        }
    }
}

fn check_time<T: Scalar>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// Enclosure of `exp(omega t)`.
pub fn growth_factor<T: Scalar>(cert: &SemigroupCert<T>, t: T) -> Result<Interval<T>> {
    check_time(t)?;
    exp_enclosure(cert.omega * Interval::point(t))
}

/// Enclosure of `t - nT` with `n = floor(t / T)`, clamped to `[0, T]`.
///
/// When the rounded quotient straddles an integer every admissible `n` is
/// kept and the enclosure is their hull.
pub(crate) fn phase_in_period<T: Scalar>(t: T, period: T) -> Result<(Interval<T>, i64, i64)> {
    let q = Interval::point(t).try_div(&Interval::point(period))?;
    let n_lo =
        q.lo.floor()
            .to_i64()
            .ok_or_else(|| Error::InvalidInput("t / T too large".into()))?;
    let n_hi =
        q.hi.floor()
            .to_i64()
            .ok_or_else(|| Error::InvalidInput("t / T too large".into()))?;
    let bounds = Interval::new(T::zero(), period);
    let mut tau: Option<Interval<T>> = None;
    let (mut first, mut last) = (n_hi, n_lo);
    for n in n_lo..=n_hi {
        let cand = Interval::point(t) - Interval::point(period) * Interval::from_int(n);
        if !cand.intersects(&bounds) {
            continue;
        }
        let cand = Interval::new(cand.lo.max(T::zero()), cand.hi.min(period));
        tau = Some(tau.map_or(cand, |x| x.hull(&cand)));
        first = first.min(n);
        last = last.max(n);
    }
    let tau = tau.ok_or_else(|| Error::InvalidInput(format!("no admissible phase for t = {t}")))?;
    Ok((tau, first, last))
}

/// Enclosure of `exp(omega (t - nT))`, `nT <= t < (n+1)T`.
pub fn growth_factor_periodic<T: Scalar>(cert: &SemigroupCert<T>, t: T) -> Result<Interval<T>> {
    check_time(t)?;
    let period = cert.period()?;
    let (tau, _, _) = phase_in_period(t, period)?;
    exp_enclosure(cert.omega * tau)
}

/// Enclosure of `int_0^t ||S(s)|| ds` using the periodic growth bound:
/// `n (exp(omega T) - 1)/omega + (exp(omega tau) - 1)/omega`.
pub fn periodic_integral_factor<T: Scalar>(cert: &SemigroupCert<T>, t: T) -> Result<Interval<T>> {
    check_time(t)?;
    let period = cert.period()?;
    let (tau, n_first, n_last) = phase_in_period(t, period)?;
    let full = expm1_over(cert.omega, period)?;
    let part_lo = expm1_over(cert.omega, tau.lo)?;
    let part_hi = expm1_over(cert.omega, tau.hi)?;
    let lo = full * Interval::from_int(n_first) + part_lo;
    let hi = full * Interval::from_int(n_last) + part_hi;
    Ok(Interval::new(lo.lo.min(hi.lo), lo.hi.max(hi.hi)))
}

/// Enclosure of `(1/|c_0|) / (1 - kappa)`, the bound on `||C^{-1}||` for the
/// multiplication operator by `c`.
pub fn c_inverse_bound<T: Scalar>(cert: &SemigroupCert<T>, c: &CoeffSeq<T>) -> Result<Interval<T>> {
    if !(cert.kappa.hi < T::one()) {
        return Err(Error::LemmaHypothesisFails);
    }
    let inv_c0 = Interval::one().try_div(&c.get(0).abs())?;
    inv_c0.try_div(&(Interval::one() - cert.kappa))
}
