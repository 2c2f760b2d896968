//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

mod common;

use std::time::{Duration, Instant};

use advection_verify::galerkin::build_solution;
use advection_verify::problems::{builtin, InitialData};
use advection_verify::semigroup::certify;
use advection_verify::verifier::{
    default_tol, projection_initial_error, residual_bound, total_error_bound, verify, VerifyParams,
};
use advection_verify::{
    ApproxSolution, CoeffSeq, Complex64, ComplexInterval, Error, Interval, ProblemSpec,
    SemigroupCert, TailBound,
};
use common::kernel;
use common::oracle::{self, Fx};

type Outcome = Result<String, String>;

fn min_time<R>(reps: usize, mut f: impl FnMut() -> R) -> (Duration, R) {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let r = f();
        best = best.min(start.elapsed());
        last = Some(r);
    }
    (best, last.expect("reps > 0"))
}

fn real(x: f64) -> ComplexInterval {
    ComplexInterval::real(Interval::point(x))
}

fn omega_constants() -> Outcome {
    let mut notes = Vec::new();
    for (name, want) in [("example1", 0.5), ("example2", 0.49), ("example3", 0.64)] {
        let p = builtin::<f64>(name).unwrap();
        let (time, cert) = min_time(20, || certify(&p.c));
        let cert = cert.map_err(|e| format!("{name}: {e}"))?;
        let w = cert.omega.width();
        if !cert.omega.contains(want) || w > 1e-12 || time >= Duration::from_millis(1) {
            return Err(format!(
                "{name}: omega {:?} (width {w:e}) in {time:?}",
                cert.omega
            ));
        }
        notes.push(format!("{name} {} width {w:.1e} {time:?}", cert.omega));
    }
    Ok(notes.join("; "))
}

fn dissipativity_gate() -> Outcome {
    let cert = certify(&builtin::<f64>("example3").unwrap().c).map_err(|e| e.to_string())?;
    if !(cert.margin.contains(0.02) && cert.margin.lo > 0.0) {
        return Err(format!("example3 margin {:?}", cert.margin));
    }
    let family = |s: f64| CoeffSeq::from_pairs([(-1, real(s)), (0, real(1.0)), (1, real(s))]);
    let below = certify(&family(0.25 - 1e-9));
    let at = certify(&family(0.25));
    let above = certify(&family(0.25 + 1e-9));
    let rejected =
        |r: &Result<SemigroupCert, Error>| matches!(r, Err(Error::DissipativityUnverified { .. }));
    if below.is_ok() && rejected(&at) && rejected(&above) {
        Ok(format!(
            "example3 margin {}; family flips between s = 0.25 - 1e-9 and 0.25",
            cert.margin
        ))
    } else {
        Err(format!("gate: below {below:?}, at {at:?}, above {above:?}"))
    }
}

fn bound_arithmetic() -> Outcome {
    let rows = [
        ("example1", 1.888e-16, 6.6975e-14, 0.1, 7.0663e-15),
        ("example2", 2.2662e-17, 3.1829e-13, 0.1, 3.2645e-14),
    ];
    let mut notes = Vec::new();
    for (name, z0, r, t, want) in rows {
        let cert = certify(&builtin::<f64>(name).unwrap().c).unwrap();
        let got = total_error_bound(&cert, z0, r, t).map_err(|e| e.to_string())?;
        let rel = (got - want).abs() / want;
        if rel > 1e-3 {
            return Err(format!("{name}: {got:.5e} vs {want:.5e}"));
        }
        notes.push(format!("{name} {got:.5e} (rel. diff {rel:.1e})"));
    }
    Ok(notes.join("; "))
}

struct RowTiming {
    approx: f64,
    exec: f64,
}

fn reference_rows(timings: &mut Vec<RowTiming>) -> Outcome {
    let p = builtin::<f64>("example1").unwrap();
    let mut notes = Vec::new();
    let mut failed = false;
    for (t_max, n, reference) in [
        (0.1, 15, 7.0663e-15),
        (0.5, 28, 7.5849e-14),
        (1.0, 39, 2.6433e-13),
    ] {
        let params = VerifyParams::new(120, n, t_max);
        let mut best = RowTiming {
            approx: f64::MAX,
            exec: f64::MAX,
        };
        let mut report = None;
        for _ in 0..3 {
            let r = verify(&p, &params).map_err(|e| e.to_string())?;
            best.approx = best.approx.min(r.timings.approx_seconds);
            best.exec = best.exec.min(r.timings.exec_seconds);
            report = Some(r);
        }
        let r = report.unwrap();
        let ok = r.total_error >= 0.0
            && r.total_error <= 100.0 * reference
            && r.timings.exec_seconds < 60.0;
        failed |= !ok;
        notes.push(format!(
            "t_max {t_max}: {:.4e} ({:.2}x reference) in {:.3}s",
            r.total_error,
            r.total_error / reference,
            r.timings.exec_seconds
        ));
        timings.push(best);
    }
    if failed {
        Err(notes.join("; "))
    } else {
        Ok(notes.join("; "))
    }
}

fn ratio(timings: &[RowTiming]) -> Outcome {
    let ratios: Vec<f64> = timings.iter().map(|t| t.exec / t.approx).collect();
    let text = ratios
        .iter()
        .map(|r| format!("{r:.3}"))
        .collect::<Vec<_>>()
        .join(", ");
    if !ratios.is_empty() && ratios.iter().all(|r| *r <= 2.0) {
        Ok(format!("exec/app = {text}"))
    } else {
        Err(format!("exec/app = {text}"))
    }
}

/// `T_l(tau)` and `T_l'(tau) = l U_{l-1}(tau)` for `l <= n`.
fn chebyshev_tables(n: usize, tau: Interval) -> (Vec<Interval>, Vec<Interval>) {
    let two_tau = tau + tau;
    let mut t = vec![Interval::one(), tau];
    let mut u = vec![Interval::one(), two_tau];
    while t.len() <= n {
        let j = t.len();
        t.push(two_tau * t[j - 1] - t[j - 2]);
        u.push(two_tau * u[j - 1] - u[j - 2]);
    }
    t.truncate(n + 1);
    let dt = (0..=n)
        .map(|l| {
            if l == 0 {
                Interval::zero()
            } else {
                Interval::from_int(l as i64) * u[l - 1]
            }
        })
        .collect();
    (t, dt)
}

/// Enclosures of `a~(s)` and `d/ds a~(s)` where `tau` is the mapped time.
fn series_at(
    approx: &ApproxSolution,
    tau: Interval,
) -> (Vec<ComplexInterval>, Vec<ComplexInterval>) {
    let (t, dt) = chebyshev_tables(approx.degree, tau);
    let scale = Interval::from_int(2)
        .try_div(&Interval::point(approx.t_max))
        .unwrap();
    approx
        .modes
        .iter()
        .map(|m| {
            let (mut v, mut d) = (ComplexInterval::zero(), ComplexInterval::zero());
            for (l, a) in m.coeffs().iter().enumerate() {
                let a = ComplexInterval::point(*a);
                v = v + a.scale(t[l]);
                d = d + a.scale(dt[l]);
            }
            (v, d.scale(scale))
        })
        .unzip()
}

fn residual_dominance() -> Outcome {
    let (n, deg, t_max) = (40usize, 40usize, 0.5);
    let mut notes = Vec::new();
    for name in ["example1", "example2", "example3"] {
        let p = builtin::<f64>(name).unwrap();
        let a0: Vec<Complex64> =
            p.a0.coefficients(n)
                .unwrap()
                .iter()
                .map(|z| z.mid())
                .collect();
        let approx =
            build_solution(&p.c, &a0, n, deg, t_max, default_tol()).map_err(|e| e.to_string())?;
        let bound = residual_bound(&approx, &p.c, n)
            .map_err(|e| e.to_string())?
            .total;
        let ni = n as i64;
        let mut worst: f64 = 0.0;
        for j in 0..1000 {
            let tau = Interval::point(-1.0 + 2.0 * j as f64 / 999.0);
            let (v, d) = series_at(&approx, tau);
            let mut sq = Interval::zero();
            for k in -2 * ni..=2 * ni {
                let mut r = if k.abs() <= ni {
                    d[(k + ni) as usize]
                } else {
                    ComplexInterval::zero()
                };
                for m in -ni..=ni {
                    let c = p.c.get(k - m);
                    if c.is_zero() {
                        continue;
                    }
                    // (A a)_k = -sum_m c_{k-m} i m a_m, so r_k = a'_k + sum_m c_{k-m} i m a_m
                    r = r + c * v[(m + ni) as usize].mul_i().scale(Interval::from_int(m));
                }
                sq = sq + r.norm_sqr();
            }
            worst = worst.max(sq.sqrt().unwrap().hi);
        }
        if bound < worst {
            return Err(format!("{name}: bound {bound:e} < sampled {worst:e}"));
        }
        notes.push(format!(
            "{name} bound {bound:.3e} >= max sampled {worst:.3e}"
        ));
    }
    Ok(notes.join("; "))
}

/// Encloses an oracle value in a double interval.
fn enclose(v: &Fx) -> Interval {
    let x = v.to_f64();
    let w = x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
    Interval::new(x - w, x + w)
}

fn soundness_oracle() -> Outcome {
    let (n, deg, t_max) = (40usize, 40usize, 1.0);
    let ni = n as i64;
    let p = ProblemSpec {
        name: "constant".into(),
        description: "c = 1".into(),
        c: CoeffSeq::from_pairs([(0, real(1.0))]),
        a0: InitialData::Geometric {
            ratio: Interval::point(-0.5),
        },
        tail: TailBound::Geometric {
            prefactor: Interval::new(0.816_496_580_927_726, 0.816_496_580_927_727),
            ratio: Interval::point(0.5),
        },
        asserted_period: None,
    };
    let report = verify(&p, &VerifyParams::new(n, deg, t_max)).map_err(|e| e.to_string())?;
    let a0: Vec<Complex64> =
        p.a0.coefficients(n)
            .unwrap()
            .iter()
            .map(|z| z.mid())
            .collect();
    let approx = build_solution(&p.c, &a0, n, deg, t_max, report.tol).map_err(|e| e.to_string())?;
    // sum_{|k| > N} 4^-|k| = (2/3) 4^-N, exact in binary up to the 2/3
    let tail_sq = Interval::from_int(2)
        .try_div(&Interval::from_int(3))
        .unwrap()
        .scale(0.25f64.powi(n as i32));
    let mut worst: f64 = 0.0;
    for j in 0..1000 {
        let t = t_max * j as f64 / 999.0;
        let tau = (Interval::point(t) + Interval::point(t) - Interval::point(t_max))
            .try_div(&Interval::point(t_max))
            .unwrap();
        let tau = Interval::new(tau.lo.max(-1.0), tau.hi.min(1.0));
        let (v, _) = series_at(&approx, tau);
        let mut sq = tail_sq;
        for k in -ni..=ni {
            let (s, c) = oracle::sin_cos(&Fx::from_rational(
                &(oracle::exact(t) * oracle::exact(-(k as f64))),
            ));
            let mag = 0.5f64.powi(k.abs() as i32) * if k.abs() % 2 == 1 { -1.0 } else { 1.0 };
            let exact = ComplexInterval::new(enclose(&c), enclose(&s)).scale(Interval::point(mag));
            sq = sq + (exact - v[(k + ni) as usize]).norm_sqr();
        }
        worst = worst.max(sq.sqrt().unwrap().hi);
    }
    let total = report.total_error;
    if worst <= total && total <= 1e-8 {
        Ok(format!(
            "max true error {worst:.3e} <= total_error {total:.3e} <= 1e-8"
        ))
    } else {
        Err(format!(
            "max true error {worst:.3e}, total_error {total:.3e}"
        ))
    }
}

fn kernel_containment() -> Outcome {
    let mut total = 0;
    for (i, op) in kernel::OPS.iter().enumerate() {
        let (bad, sample) = kernel::check(op, 100_000, 0x00ac_ce97 + i as u64);
        if bad > 0 {
            return Err(format!(
                "{op}: {bad} violations, e.g. {}",
                sample.unwrap_or_default()
            ));
        }
        total += 100_000;
    }
    Ok(format!(
        "{total} checks over {} operations, 0 violations",
        kernel::OPS.len()
    ))
}

fn initial_error_knee() -> Outcome {
    let p = builtin::<f64>("example1").unwrap();
    let ns: Vec<usize> = (10..=250).step_by(10).collect();
    let bounds: Vec<f64> = ns
        .iter()
        .map(|&n| projection_initial_error(&p.a0.coefficients(n).unwrap(), &p.tail).unwrap())
        .collect();
    // knee: first N after which the bound no longer halves
    let knee = (0..bounds.len() - 1)
        .find(|&i| bounds[i + 1] > 0.5 * bounds[i])
        .unwrap_or(bounds.len() - 1);
    let decreasing = bounds[..=knee].windows(2).all(|w| w[1] < w[0]);
    let floor = &bounds[knee..];
    let flat = floor.iter().all(|&b| b <= 1e-14)
        && floor.iter().cloned().fold(0.0, f64::max)
            <= 2.0 * floor.iter().cloned().fold(f64::MAX, f64::min);
    let knee_n = ns[knee];
    let text = format!(
        "knee at N = {knee_n}, bound there {:.3e}, floor max {:.3e}",
        bounds[knee],
        floor.iter().cloned().fold(0.0, f64::max)
    );
    if decreasing && flat && (100..=140).contains(&knee_n) {
        Ok(text)
    } else {
        Err(format!("{text}; {bounds:?}"))
    }
}

fn residual_decay() -> Outcome {
    let p = builtin::<f64>("example1").unwrap();
    let a0: Vec<Complex64> =
        p.a0.coefficients(120)
            .unwrap()
            .iter()
            .map(|z| z.mid())
            .collect();
    let at = |deg: usize| -> Result<f64, String> {
        let approx =
            build_solution(&p.c, &a0, 120, deg, 1.0, default_tol()).map_err(|e| e.to_string())?;
        Ok(residual_bound(&approx, &p.c, 120)
            .map_err(|e| e.to_string())?
            .total)
    };
    let (r10, r60) = (at(10)?, at(60)?);
    let text = format!("n = 10: {r10:.3e}, n = 60: {r60:.3e}");
    if r60 <= 1e-10 && r10 >= 10.0 * r60 {
        Ok(text)
    } else {
        Err(text)
    }
}

fn main() {
    let mut timings = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("semigroup constants", omega_constants()),
        ("dissipativity gate", dissipativity_gate()),
        ("bound arithmetic", bound_arithmetic()),
        ("example 1 end-to-end", reference_rows(&mut timings)),
        ("soundness oracle", soundness_oracle()),
        ("residual dominance", residual_dominance()),
        ("interval containment", kernel_containment()),
        ("initial-error decay", initial_error_knee()),
        ("residual decay", residual_decay()),
        ("performance ratio", ratio(&timings)),
    ];
    let mut failures = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failures,
        results.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
