//! Parsing of sweep lists given on the command line or in a run file.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("empty list")]
    Empty,
    #[error("cannot parse {0:?}")]
    Bad(String),
    #[error("range {0:?} needs a positive step")]
    BadStep(String),
    #[error("value {0} must be positive")]
    NotPositive(String),
    #[error("grid {0:?} must look like NXxNT with NX, NT >= 2")]
    BadGrid(String),
}

/// A real number: a decimal, `pi`, or a multiple like `2pi` / `0.5*pi`.
pub fn parse_real(s: &str) -> Result<f64, ParamError> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || ParamError::Bad(s.to_string());
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim_end_matches('*').trim();
        let factor = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|_| bad())?
        };
        return Ok(factor * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|_| bad())
}

/// Comma-separated items, each a value or an inclusive `start:stop:step`
/// range. Values must be positive.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, ParamError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_real(v)?),
            [a, b, step] => {
                let (a, b, step) = (parse_real(a)?, parse_real(b)?, parse_real(step)?);
                if !(step > 0.0) {
                    return Err(ParamError::BadStep(item.to_string()));
                }
                let count = ((b - a) / step + 1e-9).floor();
                if count < 0.0 || !count.is_finite() {
                    return Err(ParamError::Bad(item.to_string()));
                }
                for i in 0..=count as usize {
                    out.push(a + step * i as f64);
                }
            }
            _ => return Err(ParamError::Bad(item.to_string())),
        }
    }
    if out.is_empty() {
        return Err(ParamError::Empty);
    }
    if let Some(v) = out.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(ParamError::NotPositive(v.to_string()));
    }
    Ok(out)
}

/// Like [`parse_real_list`] for non-negative integers (`10:250:10`).
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, ParamError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| ParamError::Bad(item.to_string()))
        };
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse(v)?),
            [a, b] => out.extend(parse(a)?..=parse(b)?),
            [a, b, step] => {
                let step = parse(step)?;
                if step == 0 {
                    return Err(ParamError::BadStep(item.to_string()));
                }
                out.extend((parse(a)?..=parse(b)?).step_by(step));
            }
            _ => return Err(ParamError::Bad(item.to_string())),
        }
    }
    if out.is_empty() {
        return Err(ParamError::Empty);
    }
    Ok(out)
}

/// Chebyshev degree list, or `auto`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum Degrees {
    List(Vec<usize>),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Degrees {
    pub fn parse(s: &str) -> Result<Self, ParamError> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Degrees::Auto(AutoTag::Auto));
        }
        if s.to_ascii_lowercase().contains("auto") {
            return Err(ParamError::Bad(format!(
                "{s} (auto cannot be mixed with explicit degrees)"
            )));
        }
        let list = parse_usize_list(s)?;
        if list.contains(&0) {
            return Err(ParamError::NotPositive("0".into()));
        }
        Ok(Degrees::List(list))
    }

    /// `None` stands for automatic choice.
    pub fn values(&self) -> Vec<Option<usize>> {
        match self {
            Degrees::List(v) => v.iter().map(|&d| Some(d)).collect(),
            Degrees::Auto(_) => vec![None],
        }
    }
}

/// `NXxNT`, e.g. `256x101`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), ParamError> {
    let bad = || ParamError::BadGrid(s.to_string());
    let (a, b) = s
        .trim()
        .to_ascii_lowercase()
        .split_once('x')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .ok_or_else(bad)?;
    let nx = a.trim().parse::<usize>().map_err(|_| bad())?;
    let nt = b.trim().parse::<usize>().map_err(|_| bad())?;
    if nx < 2 || nt < 2 {
        return Err(bad());
    }
    Ok((nx, nt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(parse_real("pi").unwrap(), std::f64::consts::PI);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * std::f64::consts::PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * std::f64::consts::PI);
        assert_eq!(parse_real_list("0.1, 0.5,1").unwrap(), vec![0.1, 0.5, 1.0]);
        assert_eq!(parse_real_list("0.5:1.5:0.5").unwrap(), vec![0.5, 1.0, 1.5]);
        assert!(parse_real_list("-1").is_err());
        assert!(parse_real_list("").is_err());
        assert!(parse_real_list("1:2:0").is_err());
    }

    #[test]
    fn integers() {
        let v = parse_usize_list("10:250:10").unwrap();
        assert_eq!(v.len(), 25);
        assert_eq!((v[0], v[24]), (10, 250));
        assert_eq!(parse_usize_list("3,5:7").unwrap(), vec![3, 5, 6, 7]);
        assert!(parse_usize_list("a").is_err());
    }

    #[test]
    fn degrees_and_grid() {
        assert_eq!(Degrees::parse("auto").unwrap().values(), vec![None]);
        assert_eq!(
            Degrees::parse("15,28").unwrap().values(),
            vec![Some(15), Some(28)]
        );
        assert!(Degrees::parse("0").is_err());
        assert_eq!(parse_grid("64x11").unwrap(), (64, 11));
        assert!(parse_grid("1x5").is_err());
        assert!(parse_grid("64").is_err());
    }
}
