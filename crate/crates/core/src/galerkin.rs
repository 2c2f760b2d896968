//! The truncated Fourier-Galerkin system
//!
//! ```text
//! a_k'(t) + sum_{|m| <= N} c_{k-m} i m a_m(t) = 0,   |k| <= N,
//! ```
//!
//! integrated with Dormand-Prince 5(4) and resampled as one Chebyshev series
//! per mode. Everything here is point arithmetic on the midpoints of `c`;
//! rigor is recovered by the verifier.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_points, ChebSeries};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::CoeffSeq;

/// Right-hand side `-(c * (B a))_k` restricted to `|k| <= N`, with `c`
/// replaced by its midpoints.
#[derive(Clone, Debug)]
pub struct GalerkinSystem<T> {
    n: usize,
    /// Nonzero `(j, c_j)` pairs.
    terms: Vec<(i64, Complex<T>)>,
}

impl<T: Scalar> GalerkinSystem<T> {
    pub fn new(c: &CoeffSeq<T>, n: usize) -> Self {
        let terms = c
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.mid()))
            .filter(|(j, _)| j.unsigned_abs() as usize <= 2 * n)
            .collect();
        Self { n, terms }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn eval_into(
        &self,
        a: &[Complex<T>],
        out: &mut [Complex<T>],
        scratch: &mut Vec<Complex<T>>,
    ) {
        let n = self.n as i64;
        scratch.clear();
        // scratch[m + N] = -i m a_m
        scratch.extend(a.iter().enumerate().map(|(idx, &am)| {
            let m = T::from_i64_exact(idx as i64 - n);
            Complex::new(am.im * m, -am.re * m)
        }));
        out.iter_mut()
            .for_each(|o| *o = Complex::new(T::zero(), T::zero()));
        for &(j, cj) in &self.terms {
            // k = m + j with |k|, |m| <= N
            let k_lo = (-n).max(j - n);
            let k_hi = n.min(j + n);
            for k in k_lo..=k_hi {
                let m = k - j;
                let o = &mut out[(k + n) as usize];
                *o = *o + cj * scratch[(m + n) as usize];
            }
        }
    }

    pub fn eval(&self, a: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); a.len()];
        let mut scratch = Vec::with_capacity(a.len());
        self.eval_into(a, &mut out, &mut scratch);
        out
    }
}

/// `-(c * (B a))_k` for `|k| <= N`; `a` is indexed `k + N`.
pub fn rhs<T: Scalar>(a: &[Complex<T>], c: &CoeffSeq<T>, n: usize) -> Vec<Complex<T>> {
    GalerkinSystem::new(c, n).eval(a)
}

// Dormand-Prince 5(4) tableau with Shampine's dense output.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size controller settings.
#[derive(Clone, Copy, Debug)]
pub struct Dopri5Options<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// Clip steps so that every requested output time is hit exactly by a
    /// step endpoint instead of being interpolated.
    pub land_on_outputs: bool,
    /// First trial step; `None` uses the usual starting-step heuristic.
    pub initial_step: Option<T>,
}

impl<T: Scalar> Dopri5Options<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 50_000_000,
            land_on_outputs: false,
            initial_step: None,
        }
    }
}

/// One accepted step together with its continuous extension.
#[derive(Clone, Debug)]
pub struct DenseStep<T> {
    pub t_old: T,
    pub h: T,
    rcont: [Vec<Complex<T>>; 5],
}

impl<T: Scalar> DenseStep<T> {
    pub fn t_new(&self) -> T {
        self.t_old + self.h
    }

    pub fn eval_into(&self, t: T, out: &mut [Complex<T>]) {
        let theta = (t - self.t_old) / self.h;
        let theta1 = T::one() - theta;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        for i in 0..out.len() {
            out[i] = r1[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * theta1) * theta) * theta1) * theta;
        }
    }

    pub fn eval(&self, t: T) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.rcont[0].len()];
        self.eval_into(t, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

fn cst<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

fn axpy<T: Scalar>(out: &mut [Complex<T>], y: &[Complex<T>], h: T, terms: &[(T, &[Complex<T>])]) {
    for i in 0..out.len() {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (w, k) in terms {
            acc = acc + k[i] * *w;
        }
        out[i] = y[i] + acc * h;
    }
}

/// Adaptive Dormand-Prince 5(4) for `y' = f(t, y)` on `[0, t_end]`.
///
/// `observer` sees every accepted step. `stops` are times (ascending) that a
/// step must land on when `opts.land_on_outputs` is set.
pub fn dopri5<T, F, O>(
    f: F,
    y0: &[Complex<T>],
    t_end: T,
    stops: &[T],
    opts: &Dopri5Options<T>,
    mut observer: O,
) -> Result<IntegrationStats>
where
    T: Scalar,
    F: Fn(T, &[Complex<T>], &mut [Complex<T>]),
    O: FnMut(&DenseStep<T>),
{
    let dim = y0.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut stats = IntegrationStats::default();
    if dim == 0 || t_end <= T::zero() {
        return Ok(stats);
    }
    let (safe, beta, fac1, fac2) = (cst::<T>(0.9), cst::<T>(0.04), cst::<T>(0.2), cst::<T>(10.0));
    let expo1 = cst::<T>(0.2) - beta * cst::<T>(0.75);
    let facc1 = T::one() / fac1;
    let facc2 = T::one() / fac2;

    let mut y = y0.to_vec();
    let mut ynew = vec![zero; dim];
    let mut ytmp = vec![zero; dim];
    let mut k = vec![vec![zero; dim]; 7];
    f(T::zero(), &y, &mut k[0]);
    stats.rhs_evals += 1;

    let norm = |err: &[Complex<T>], ya: &[Complex<T>], yb: &[Complex<T>]| -> T {
        let mut s = T::zero();
        for i in 0..dim {
            let sk = opts.atol + opts.rtol * ya[i].norm().max(yb[i].norm());
            let e = err[i].norm() / sk;
            s = s + e * e;
        }
        (s / T::from_usize(dim).unwrap()).sqrt()
    };

    // initial step guess (Hairer & Wanner, HINIT)
    let mut h = if let Some(h0) = opts.initial_step {
        if !(h0 > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "initial step must be positive, got {h0}"
            )));
        }
        h0.min(t_end)
    } else {
        let d0 = norm(&y, &y, &y);
        let d1 = norm(&k[0], &y, &y);
        let h0 = if d0 < cst(1e-10) || d1 < cst(1e-10) {
            cst(1e-6)
        } else {
            cst::<T>(0.01) * d0 / d1
        };
        let h0 = h0.min(t_end);
        axpy(&mut ytmp, &y, h0, &[(T::one(), &k[0])]);
        f(h0, &ytmp, &mut k[1]);
        stats.rhs_evals += 1;
        let diff: Vec<_> = k[1].iter().zip(&k[0]).map(|(a, b)| *a - *b).collect();
        let d2 = norm(&diff, &y, &y) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= cst(1e-15) {
            cst::<T>(1e-6).max(h0 * cst(1e-3))
        } else {
            (cst::<T>(0.01) / dm).powf(cst(0.2))
        };
        h0.min(h1 * cst(100.0)).min(t_end)
    };

    let mut t = T::zero();
    let mut facold = cst::<T>(1e-4);
    let mut reject = false;
    let mut stop_idx = stops
        .iter()
        .position(|&s| s > T::zero())
        .unwrap_or(stops.len());
    let (c2, c3, c4, c5) = (cst::<T>(C2), cst::<T>(C3), cst::<T>(C4), cst::<T>(C5));

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StiffnessError {
                t: t.to_f64_lossy(),
                h: h.to_f64_lossy(),
            });
        }
        let mut target = t_end;
        if opts.land_on_outputs {
            while stop_idx < stops.len() && stops[stop_idx] <= t {
                stop_idx += 1;
            }
            if stop_idx < stops.len() {
                target = stops[stop_idx].min(t_end);
            }
        }
        let mut last = false;
        if t + h * cst(1.01) >= target {
            h = target - t;
            last = true;
        }
        if h.abs() <= t.abs() * T::epsilon() * cst(10.0) || h <= T::zero() {
            return Err(Error::StiffnessError {
                t: t.to_f64_lossy(),
                h: h.to_f64_lossy(),
            });
        }

        let (k0, rest) = k.split_at_mut(1);
        let k1 = &k0[0];
        let [k2, k3, k4, k5, k6, k7] = rest else {
            unreachable!()
        };
        axpy(&mut ytmp, &y, h, &[(cst(A21), k1)]);
        f(t + c2 * h, &ytmp, k2);
        axpy(&mut ytmp, &y, h, &[(cst(A31), k1), (cst(A32), k2)]);
        f(t + c3 * h, &ytmp, k3);
        axpy(
            &mut ytmp,
            &y,
            h,
            &[(cst(A41), k1), (cst(A42), k2), (cst(A43), k3)],
        );
        f(t + c4 * h, &ytmp, k4);
        axpy(
            &mut ytmp,
            &y,
            h,
            &[
                (cst(A51), k1),
                (cst(A52), k2),
                (cst(A53), k3),
                (cst(A54), k4),
            ],
        );
        f(t + c5 * h, &ytmp, k5);
        axpy(
            &mut ytmp,
            &y,
            h,
            &[
                (cst(A61), k1),
                (cst(A62), k2),
                (cst(A63), k3),
                (cst(A64), k4),
                (cst(A65), k5),
            ],
        );
        let tph = t + h;
        f(tph, &ytmp, k6);
        axpy(
            &mut ynew,
            &y,
            h,
            &[
                (cst(A71), k1),
                (cst(A73), k3),
                (cst(A74), k4),
                (cst(A75), k5),
                (cst(A76), k6),
            ],
        );
        f(tph, &ynew, k7);
        stats.rhs_evals += 6;

        let err_vec: Vec<Complex<T>> = (0..dim)
            .map(|i| {
                (k1[i] * cst::<T>(E1)
                    + k3[i] * cst::<T>(E3)
                    + k4[i] * cst::<T>(E4)
                    + k5[i] * cst::<T>(E5)
                    + k6[i] * cst::<T>(E6)
                    + k7[i] * cst::<T>(E7))
                    * h
            })
            .collect();
        let err = norm(&err_vec, &y, &ynew);
        if !err.is_finite() {
            stats.rejected += 1;
            h = h * cst(0.1);
            reject = true;
            continue;
        }

        let fac11 = err.powf(expo1);
        let fac = (fac11 / facold.powf(beta)) / safe;
        let fac = facc2.max(facc1.min(fac));
        let mut hnew = h / fac;

        if err <= T::one() {
            facold = err.max(cst(1e-4));
            stats.accepted += 1;

            let rcont5: Vec<_> = (0..dim)
                .map(|i| {
                    (k1[i] * cst::<T>(D1)
                        + k3[i] * cst::<T>(D3)
                        + k4[i] * cst::<T>(D4)
                        + k5[i] * cst::<T>(D5)
                        + k6[i] * cst::<T>(D6)
                        + k7[i] * cst::<T>(D7))
                        * h
                })
                .collect();
            let ydiff: Vec<_> = (0..dim).map(|i| ynew[i] - y[i]).collect();
            let bspl: Vec<_> = (0..dim).map(|i| k1[i] * h - ydiff[i]).collect();
            let r4: Vec<_> = (0..dim).map(|i| ydiff[i] - k7[i] * h - bspl[i]).collect();
            let step = DenseStep {
                t_old: t,
                h,
                rcont: [y.clone(), ydiff, bspl, r4, rcont5],
            };

            t = if last { target } else { tph };
            std::mem::swap(&mut y, &mut ynew);
            observer(&DenseStep {
                rcont: step.rcont,
                ..step
            });
            k.swap(0, 6);

            if last && target >= t_end {
                return Ok(stats);
            }
            if hnew.abs() > t_end {
                hnew = t_end;
            }
            if reject {
                hnew = hnew.min(h);
            }
            reject = false;
        } else {
            hnew = h / facc1.min(fac11 / safe);
            reject = true;
            stats.rejected += 1;
        }
        h = hnew;
    }
}

/// Trajectory of the Galerkin system with every accepted step retained.
#[derive(Clone, Debug)]
pub struct DenseTrajectory<T> {
    pub y0: Vec<Complex<T>>,
    pub steps: Vec<DenseStep<T>>,
    pub stats: IntegrationStats,
}

impl<T: Scalar> DenseTrajectory<T> {
    pub fn t_end(&self) -> T {
        self.steps.last().map_or(T::zero(), |s| s.t_new())
    }

    /// State at `t` via the continuous extension of the covering step.
    pub fn eval(&self, t: T) -> Result<Vec<Complex<T>>> {
        if t < T::zero() || t > self.t_end() {
            return Err(Error::DomainError(format!(
                "t = {t} outside the integrated range"
            )));
        }
        if t.is_zero() || self.steps.is_empty() {
            return Ok(self.y0.clone());
        }
        let idx = self
            .steps
            .partition_point(|s| s.t_new() < t)
            .min(self.steps.len() - 1);
        Ok(self.steps[idx].eval(t))
    }
}

fn check_inputs<T: Scalar>(a0: &[Complex<T>], n: usize, t_max: T, tol: T) -> Result<()> {
    if a0.len() != 2 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "a0 has {} entries, expected {}",
            a0.len(),
            2 * n + 1
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if !(t_max > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    Ok(())
}

/// Integrates the Galerkin system on `[0, t_max]`, keeping dense output.
pub fn integrate<T: Scalar>(
    c: &CoeffSeq<T>,
    a0: &[Complex<T>],
    n: usize,
    t_max: T,
    tol: T,
) -> Result<DenseTrajectory<T>> {
    check_inputs(a0, n, t_max, tol)?;
    let sys = GalerkinSystem::new(c, n);
    let mut steps = Vec::new();
    let stats = dopri5(
        galerkin_rhs(&sys),
        a0,
        t_max,
        &[],
        &Dopri5Options::with_tol(tol),
        |s| steps.push(s.clone()),
    )?;
    Ok(DenseTrajectory {
        y0: a0.to_vec(),
        steps,
        stats,
    })
}

fn galerkin_rhs<T: Scalar>(
    sys: &GalerkinSystem<T>,
) -> impl Fn(T, &[Complex<T>], &mut [Complex<T>]) + '_ {
    move |_t, y, dy| {
        let mut scratch = Vec::with_capacity(y.len());
        sys.eval_into(y, dy, &mut scratch);
    }
}

/// States at the ascending times `times` (all in `[0, t_max]`), one vector per
/// time. Steps are not retained.
pub fn sample_trajectory<T: Scalar>(
    c: &CoeffSeq<T>,
    a0: &[Complex<T>],
    n: usize,
    times: &[T],
    tol: T,
    land_on_outputs: bool,
) -> Result<(Vec<Vec<Complex<T>>>, IntegrationStats)> {
    let t_end = times.iter().copied().fold(T::zero(), T::max);
    if t_end.is_zero() {
        return Ok((
            times.iter().map(|_| a0.to_vec()).collect(),
            IntegrationStats::default(),
        ));
    }
    check_inputs(a0, n, t_end, tol)?;
    let sys = GalerkinSystem::new(c, n);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![vec![zero; a0.len()]; times.len()];
    let mut next = 0;
    while next < times.len() && times[next] <= T::zero() {
        out[next].copy_from_slice(a0);
        next += 1;
    }
    let opts = Dopri5Options {
        land_on_outputs,
        ..Dopri5Options::with_tol(tol)
    };
    let stats = dopri5(galerkin_rhs(&sys), a0, t_end, times, &opts, |s| {
        let t_new = s.t_new();
        while next < times.len() && times[next] <= t_new {
            if times[next] == t_new {
                // endpoint of the step: the continuous extension reproduces y_new
                s.eval_into(t_new, &mut out[next]);
                let [r1, r2, ..] = &s.rcont;
                for (o, (a, b)) in out[next].iter_mut().zip(r1.iter().zip(r2)) {
                    *o = *a + *b;
                }
            } else {
                s.eval_into(times[next], &mut out[next]);
            }
            next += 1;
        }
    })?;
    Ok((out, stats))
}

/// Fourier-Chebyshev approximate solution `a~_k(t) = sum_l a~_{k,l} T_l`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct ApproxSolution<T> {
    /// Fourier truncation `N`; modes are `k = -N ..= N`.
    pub truncation: usize,
    /// Chebyshev degree `n`.
    pub degree: usize,
    pub t_max: T,
    pub modes: Vec<ChebSeries<T>>,
    pub c_used: CoeffSeq<T>,
    pub tol: T,
    pub stats: IntegrationStats,
}

impl<T: Scalar> ApproxSolution<T> {
    pub fn mode(&self, k: i64) -> Option<&ChebSeries<T>> {
        let idx = k + self.truncation as i64;
        if idx < 0 {
            return None;
        }
        self.modes.get(idx as usize)
    }

    /// All mode values at time `t`, indexed `k + N`.
    pub fn evaluate(&self, t: T) -> Result<Vec<Complex<T>>> {
        self.modes.iter().map(|m| m.evaluate(t)).collect()
    }

    /// Largest `|a~_k(t) - conj(a~_{-k}(t))|` over the fit nodes.
    pub fn conjugate_symmetry_defect(&self) -> T {
        let n = self.truncation;
        let mut worst = T::zero();
        for t in cheb_points(self.degree, self.t_max) {
            let v = self.evaluate(t).expect("node inside domain");
            for k in 0..=n {
                let d = (v[n + k] - v[n - k].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Integrates, samples at the Chebyshev nodes of degree `degree` and fits
/// every mode.
pub fn build_solution<T: Scalar>(
    c: &CoeffSeq<T>,
    a0: &[Complex<T>],
    n: usize,
    degree: usize,
    t_max: T,
    tol: T,
) -> Result<ApproxSolution<T>> {
    check_inputs(a0, n, t_max, tol)?;
    let nodes = cheb_points(degree.max(1), t_max);
    let (samples, stats) = sample_trajectory(c, a0, n, &nodes, tol, true)?;
    let modes = (0..a0.len())
        .map(|idx| {
            let column: Vec<_> = samples.iter().map(|row| row[idx]).collect();
            ChebSeries::fit(&column, t_max)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproxSolution {
        truncation: n,
        degree: degree.max(1),
        t_max,
        modes,
        c_used: c.clone(),
        tol,
        stats,
    })
}

/// Doubles the Chebyshev degree from 16 until the trailing coefficients of
/// every mode are below `1e-12` relative to the largest coefficient.
pub fn build_solution_auto<T: Scalar>(
    c: &CoeffSeq<T>,
    a0: &[Complex<T>],
    n: usize,
    t_max: T,
    tol: T,
) -> Result<ApproxSolution<T>> {
    const MAX_DEGREE: usize = 4096;
    let threshold = T::from_f64(1e-12).unwrap();
    let mut degree = 16;
    loop {
        let approx = build_solution(c, a0, n, degree, t_max, tol)?;
        let scale = approx
            .modes
            .iter()
            .flat_map(|m| m.coeffs().iter().map(|z| z.norm()))
            .fold(T::zero(), T::max);
        let tail = approx
            .modes
            .iter()
            .map(|m| {
                let a = m.coeffs();
                a[a.len() - 1].norm() + a[a.len() - 2].norm()
            })
            .fold(T::zero(), T::max);
        if tail <= threshold * scale || degree >= MAX_DEGREE {
            return Ok(approx);
        }
        degree *= 2;
    }
}
