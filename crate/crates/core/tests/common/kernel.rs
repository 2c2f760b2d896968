//! Randomized containment checks of the interval kernel against the
//! rational / fixed-point oracle.

#![allow(dead_code)]

use advection_verify::interval::{
    cos_enclosure, erfc_upper, exp_enclosure, expm1_enclosure, expm1_over, loose, sin_enclosure,
    sqrt_enclosure,
};
use advection_verify::{Complex64, ComplexInterval, Interval};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, exact, inside, inside_exact, Fx};

pub const OPS: [&str; 17] = [
    "add",
    "sub",
    "mul",
    "div",
    "sqr",
    "sqrt",
    "exp",
    "expm1",
    "expm1_over",
    "cos",
    "sin",
    "erfc_upper",
    "loose_add",
    "loose_mul",
    "loose_sqrt",
    "complex_mul",
    "complex_add_mul_loose",
];

/// Double with a random sign, mantissa, and binary exponent in `[-e, e]`.
pub fn wide(rng: &mut ChaCha8Rng, e: i32) -> f64 {
    match rng.gen_range(0..40) {
        0 => 0.0,
        1 => 1.0,
        2 => -1.0,
        _ => {
            let m: f64 = rng.gen_range(1.0..2.0);
            let s = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
            s * m * 2f64.powi(rng.gen_range(-e..=e))
        }
    }
}

/// An interval around a random center; points a quarter of the time.
pub fn interval(rng: &mut ChaCha8Rng, e: i32) -> Interval {
    let a = wide(rng, e);
    if rng.gen_bool(0.25) {
        return Interval::point(a);
    }
    let b = if rng.gen_bool(0.5) {
        a + wide(rng, e).abs() * 1e-3
    } else {
        wide(rng, e)
    };
    Interval::new(a.min(b), a.max(b))
}

/// A double inside `x`.
pub fn member(rng: &mut ChaCha8Rng, x: &Interval) -> f64 {
    match rng.gen_range(0..4) {
        0 => x.lo,
        1 => x.hi,
        _ => {
            let t: f64 = rng.gen_range(0.0..1.0);
            (x.lo + t * (x.hi - x.lo)).clamp(x.lo, x.hi)
        }
    }
}

fn qi(q: BigRational, out: &Interval) -> bool {
    inside_exact(&q, out.lo, out.hi)
}

fn complex_interval(rng: &mut ChaCha8Rng, e: i32) -> ComplexInterval {
    ComplexInterval::new(interval(rng, e), interval(rng, e))
}

fn complex_member(rng: &mut ChaCha8Rng, z: &ComplexInterval) -> (BigRational, BigRational) {
    (exact(member(rng, &z.re)), exact(member(rng, &z.im)))
}

/// Runs `n` checks of `op`; returns the number of violations and a sample.
pub fn check(op: &str, n: usize, seed: u64) -> (usize, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut first = None;
    let mut note = |ok: bool, msg: &dyn Fn() -> String| {
        if !ok {
            bad += 1;
            if first.is_none() {
                first = Some(msg());
            }
        }
    };
    for _ in 0..n {
        match op {
            "add" | "sub" | "mul" | "div" => {
                let (a, b) = (interval(&mut rng, 60), interval(&mut rng, 60));
                let (x, y) = (member(&mut rng, &a), member(&mut rng, &b));
                let (qx, qy) = (exact(x), exact(y));
                let (out, q) = match op {
                    "add" => (a + b, qx + qy),
                    "sub" => (a - b, qx - qy),
                    "mul" => (a * b, qx * qy),
                    _ => match a.try_div(&b) {
                        Ok(o) => {
                            if qy.is_zero() {
                                continue;
                            }
                            (o, qx / qy)
                        }
                        Err(_) => {
                            note(b.contains_zero(), &|| format!("div refused {a:?}/{b:?}"));
                            continue;
                        }
                    },
                };
                note(qi(q, &out), &|| {
                    format!("{op} {a:?} {b:?} at {x:e},{y:e} gave {out:?}")
                });
            }
            "sqr" => {
                let a = interval(&mut rng, 60);
                let x = member(&mut rng, &a);
                let out = a.sqr();
                note(qi(exact(x) * exact(x), &out), &|| {
                    format!("sqr {a:?} at {x:e} gave {out:?}")
                });
            }
            "sqrt" => {
                let a = interval(&mut rng, 200).abs();
                let x = member(&mut rng, &a);
                let out = sqrt_enclosure(a).unwrap();
                // lo^2 <= x <= hi^2 and both endpoints nonnegative.
                let q = exact(x);
                let ok = out.lo >= 0.0
                    && exact(out.lo) * exact(out.lo) <= q
                    && q <= exact(out.hi) * exact(out.hi);
                note(ok, &|| format!("sqrt {a:?} at {x:e} gave {out:?}"));
            }
            "exp" | "expm1" => {
                let a = interval(&mut rng, 5).scale(20.0);
                let x = member(&mut rng, &a);
                let fx = Fx::from_f64(x);
                let (out, v) = if op == "exp" {
                    (exp_enclosure(a), oracle::exp(&fx))
                } else {
                    (expm1_enclosure(a), oracle::expm1(&fx))
                };
                match out {
                    Ok(out) => note(inside(&v, out.lo, out.hi), &|| {
                        format!("{op} {a:?} at {x:e} gave {out:?}")
                    }),
                    Err(_) => note(a.hi > 700.0, &|| format!("{op} refused {a:?}")),
                }
            }
            "expm1_over" => {
                let w = Interval::new(0.0, rng.gen_range(0.0..4.0));
                let w = if rng.gen_bool(0.2) {
                    Interval::zero()
                } else {
                    Interval::new(w.hi * 0.9, w.hi)
                };
                let t: f64 = rng.gen_range(0.0..10.0);
                let out = expm1_over(w, t).unwrap();
                let om = member(&mut rng, &w);
                let v = if om == 0.0 {
                    Fx::from_f64(t)
                } else {
                    let p = Fx::from_rational(&(exact(om) * exact(t)));
                    oracle::expm1(&p).div(&Fx::from_f64(om))
                };
                note(inside(&v, out.lo, out.hi), &|| {
                    format!("expm1_over {w:?} {t} at {om:e} gave {out:?}")
                });
            }
            "cos" | "sin" => {
                let c = rng.gen_range(-2000.0..2000.0);
                let a = if rng.gen_bool(0.3) {
                    Interval::point(c)
                } else {
                    Interval::new(c, c + rng.gen_range(0.0..4.0f64).powi(3))
                };
                let x = member(&mut rng, &a);
                let (s, co) = oracle::sin_cos(&Fx::from_f64(x));
                let (out, v) = if op == "cos" {
                    (cos_enclosure(a), co)
                } else {
                    (sin_enclosure(a), s)
                };
                note(inside(&v, out.lo, out.hi), &|| {
                    format!("{op} {a:?} at {x:e} gave {out:?}")
                });
            }
            "erfc_upper" => {
                let x: f64 = rng.gen_range(0.0..12.0);
                let up = erfc_upper(x).unwrap();
                // erfc(x) <= up  <=>  exp(x^2) erfc(x) <= up exp(x^2)
                let fx = Fx::from_f64(x);
                let g = oracle::erfc_scaled(&fx);
                let rhs = oracle::mul_f64_down(
                    &oracle::exp(&Fx::from_rational(&(exact(x) * exact(x)))),
                    up,
                );
                let ok = &g.0 - oracle::erfc_slack(&g) <= rhs.0;
                note(ok, &|| format!("erfc_upper({x:e}) = {up:e}"));
            }
            "loose_add" | "loose_mul" => {
                let (x, y) = (wide(&mut rng, 60), wide(&mut rng, 60));
                let (up, down, q) = if op == "loose_add" {
                    (
                        loose::add_up(x, y),
                        loose::add_down(x, y),
                        exact(x) + exact(y),
                    )
                } else {
                    (
                        loose::mul_up(x, y),
                        loose::mul_down(x, y),
                        exact(x) * exact(y),
                    )
                };
                note(inside_exact(&q, down, up), &|| {
                    format!("{op}({x:e}, {y:e}) gave [{down:e}, {up:e}]")
                });
            }
            "loose_sqrt" => {
                let x = wide(&mut rng, 200).abs();
                let up = loose::sqrt_up(x);
                note(exact(up) * exact(up) >= exact(x), &|| {
                    format!("loose sqrt_up({x:e}) = {up:e}")
                });
            }
            "complex_mul" | "complex_add_mul_loose" => {
                let (a, b) = (
                    complex_interval(&mut rng, 30),
                    complex_interval(&mut rng, 30),
                );
                let (ar, ai) = complex_member(&mut rng, &a);
                let (br, bi) = complex_member(&mut rng, &b);
                if op == "complex_mul" {
                    let out = a * b;
                    let re = &ar * &br - &ai * &bi;
                    let im = &ar * &bi + &ai * &br;
                    note(qi(re, &out.re) && qi(im, &out.im), &|| {
                        format!("cmul {a:?} {b:?} gave {out:?}")
                    });
                } else {
                    let z = Complex64::new(wide(&mut rng, 30), wide(&mut rng, 30));
                    let (zr, zi) = (exact(z.re), exact(z.im));
                    let out = a.add_mul_point_loose(&b, z);
                    let re = &ar + &br * &zr - &bi * &zi;
                    let im = &ai + &br * &zi + &bi * &zr;
                    note(qi(re, &out.re) && qi(im, &out.im), &|| {
                        format!("add_mul {a:?} {b:?} {z} gave {out:?}")
                    });
                }
            }
            other => panic!("unknown op {other}"),
        }
    }
    (bad, first)
}
