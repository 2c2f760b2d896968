//! Built-in test problems and user-defined ones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{
    exp_enclosure, pi_enclosure, sqrt_enclosure, unit_complex_enclosure, ComplexInterval, Interval,
};
use crate::scalar::Scalar;
use crate::seq::CoeffSeq;
use crate::verifier::TailBound;

/// Fourier coefficients of the initial datum, available for any truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub enum InitialData<T> {
    /// `a_k = amplitude * exp(-k^2 / width) * exp(-i k shift)`.
    GaussianPacket {
        amplitude: Interval<T>,
        width: Interval<T>,
        shift: Interval<T>,
    },
    /// `a_k = ratio^|k|`.
    Geometric { ratio: Interval<T> },
    /// Finitely many listed coefficients, zero elsewhere.
    Explicit { coeffs: CoeffSeq<T> },
}

impl<T: Scalar> InitialData<T> {
    pub fn coefficient(&self, k: i64) -> Result<ComplexInterval<T>> {
        match self {
            InitialData::GaussianPacket {
                amplitude,
                width,
                shift,
            } => {
                let k2 = Interval::from_int(k) * Interval::from_int(k);
                let decay = exp_enclosure(-k2.try_div(width)?)?;
                let phase = unit_complex_enclosure(-(*shift * Interval::from_int(k)));
                Ok(phase.scale(*amplitude * decay))
            }
            InitialData::Geometric { ratio } => {
                let mut p = Interval::one();
                for _ in 0..k.unsigned_abs() {
                    p = p * *ratio;
                }
                Ok(ComplexInterval::real(p))
            }
            InitialData::Explicit { coeffs } => Ok(coeffs.get(k)),
        }
    }

    /// Enclosures of `a_k(0)` for `|k| <= n`, indexed `k + n`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<ComplexInterval<T>>> {
        let n = n as i64;
        (-n..=n).map(|k| self.coefficient(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct ProblemSpec<T> {
    pub name: String,
    pub description: String,
    /// Fourier coefficients of the velocity `c(x)`.
    pub c: CoeffSeq<T>,
    pub a0: InitialData<T>,
    pub tail: TailBound<T>,
    pub asserted_period: Option<T>,
}

fn dec<T: Scalar>(s: &str) -> Interval<T> {
    Interval::from_decimal(s).expect("valid literal")
}

fn real<T: Scalar>(x: Interval<T>) -> ComplexInterval<T> {
    ComplexInterval::real(x)
}

/// `c(x) = 0.51 + sin^2(x - 1)`, `a_k(0) = exp(-k^2/400 - ik) / (20 sqrt(pi))`.
pub fn example1<T: Scalar>() -> ProblemSpec<T> {
    // sin^2(x - 1) = 1/2 - (e^{2i(x-1)} + e^{-2i(x-1)})/4
    let quarter = Interval::one().scale(T::from_f64(0.25).unwrap());
    let two = Interval::from_int(2);
    let c2 = -unit_complex_enclosure(-two).scale(quarter);
    let c_m2 = -unit_complex_enclosure(two).scale(quarter);
    let c = CoeffSeq::from_pairs([(-2, c_m2), (0, real(dec("1.01"))), (2, c2)]);

    let sqrt_pi = sqrt_enclosure(pi_enclosure()).expect("pi > 0");
    let amplitude = Interval::one()
        .try_div(&(Interval::from_int(20) * sqrt_pi))
        .expect("nonzero");
    let sqrt2 = sqrt_enclosure(two).expect("2 > 0");
    ProblemSpec {
        name: "example1".into(),
        description: "c(x) = 0.51 + sin^2(x-1), Gaussian packet centred at x = 1".into(),
        c,
        a0: InitialData::GaussianPacket {
            amplitude,
            width: Interval::from_int(400),
            shift: Interval::one(),
        },
        tail: TailBound::GaussianErfc {
            prefactor: Interval::one().scale(T::from_f64(0.5).unwrap()),
            scale: sqrt2 * Interval::from_int(10),
        },
        asserted_period: None,
    }
}

fn example23_data<T: Scalar>() -> (InitialData<T>, TailBound<T>) {
    let two_thirds = Interval::from_int(2)
        .try_div(&Interval::from_int(3))
        .expect("nonzero");
    (
        InitialData::Geometric {
            ratio: Interval::point(T::from_f64(-0.5).unwrap()),
        },
        TailBound::Geometric {
            prefactor: sqrt_enclosure(two_thirds).expect("positive"),
            ratio: Interval::point(T::from_f64(0.5).unwrap()),
        },
    )
}

/// `c(x) = 1 + 0.49 cos 2x`, `u_0(x) = 3 / (5 + 4 cos x)`.
pub fn example2<T: Scalar>() -> ProblemSpec<T> {
    let half = T::from_f64(0.5).unwrap();
    let c2 = real(dec::<T>("0.49").scale(half));
    let c = CoeffSeq::from_pairs([(-2, c2), (0, real(Interval::one())), (2, c2)]);
    let (a0, tail) = example23_data();
    ProblemSpec {
        name: "example2".into(),
        description: "c(x) = 1 + 0.49 cos 2x, u0(x) = 3/(5 + 4 cos x)".into(),
        c,
        a0,
        tail,
        asserted_period: None,
    }
}

/// `c(x) = -1 + 0.3 sin 3x - 0.19 cos 2x`, same `u_0` as [`example2`].
pub fn example3<T: Scalar>() -> ProblemSpec<T> {
    let half = T::from_f64(0.5).unwrap();
    let c2 = real(-dec::<T>("0.19").scale(half));
    let s = dec::<T>("0.3").scale(half);
    // 0.3 sin 3x = 0.15 (e^{3ix} - e^{-3ix}) / i
    let c3 = ComplexInterval::new(Interval::zero(), -s);
    let c = CoeffSeq::from_pairs([
        (-3, c3.conj()),
        (-2, c2),
        (0, real(-Interval::one())),
        (2, c2),
        (3, c3),
    ]);
    let (a0, tail) = example23_data();
    ProblemSpec {
        name: "example3".into(),
        description: "c(x) = -1 + 0.3 sin 3x - 0.19 cos 2x, u0(x) = 3/(5 + 4 cos x)".into(),
        c,
        a0,
        tail,
        asserted_period: None,
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["example1", "example2", "example3"];

pub fn builtin<T: Scalar>(name: &str) -> Option<ProblemSpec<T>> {
    match name {
        "example1" | "1" => Some(example1()),
        "example2" | "2" => Some(example2()),
        "example3" | "3" => Some(example3()),
        _ => None,
    }
}

/// One coefficient `value_k = re + i im`, both decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub k: i64,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailConfig {
    /// The listed initial coefficients are the whole datum.
    Explicit,
    Geometric {
        prefactor: String,
        ratio: String,
    },
    GaussianErfc {
        prefactor: String,
        scale: String,
    },
    Custom {
        value: String,
    },
}

/// User-defined problem, as read from a configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub c: Vec<CoeffEntry>,
    pub a0: Vec<CoeffEntry>,
    #[serde(default)]
    pub tail: Option<TailConfig>,
    #[serde(default)]
    pub period: Option<f64>,
}

fn parse_entries<T: Scalar>(entries: &[CoeffEntry]) -> Result<CoeffSeq<T>> {
    let mut pairs = Vec::with_capacity(entries.len());
    for e in entries {
        let v = ComplexInterval::new(
            Interval::from_decimal(&e.re)?,
            Interval::from_decimal(&e.im)?,
        );
        pairs.push((e.k, v));
    }
    Ok(CoeffSeq::from_pairs(pairs))
}

pub fn custom<T: Scalar>(config: &ProblemConfig) -> Result<ProblemSpec<T>> {
    let c = parse_entries::<T>(&config.c)?;
    c.validate_hermitian()?;
    let a0 = parse_entries::<T>(&config.a0)?;
    let tail = match config.tail.as_ref().unwrap_or(&TailConfig::Explicit) {
        TailConfig::Explicit => TailBound::ExplicitList { coeffs: a0.clone() },
        TailConfig::Geometric { prefactor, ratio } => TailBound::Geometric {
            prefactor: Interval::from_decimal(prefactor)?,
            ratio: Interval::from_decimal(ratio)?,
        },
        TailConfig::GaussianErfc { prefactor, scale } => TailBound::GaussianErfc {
            prefactor: Interval::from_decimal(prefactor)?,
            scale: Interval::from_decimal(scale)?,
        },
        TailConfig::Custom { value } => TailBound::CustomUpper {
            value: Interval::<T>::from_decimal(value)?.hi,
        },
    };
    // reject malformed tails up front
    tail.eval(0)?;
    let period = match config.period {
        Some(p) if !(p > 0.0 && p.is_finite()) => {
            return Err(Error::InvalidInput(format!(
                "period must be positive, got {p}"
            )))
        }
        Some(p) => Some(T::from_f64(p).ok_or_else(|| Error::InvalidInput("period".into()))?),
        None => None,
    };
    Ok(ProblemSpec {
        name: config.name.clone(),
        description: config.description.clone(),
        c,
        a0: InitialData::Explicit { coeffs: a0 },
        tail,
        asserted_period: period,
    })
}
