use std::f64::consts::PI;
use std::path::PathBuf;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::grid::JumpIC;
use crate::schemes::SchemeKind;

/// Parameters of a refinement sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<SchemeKind>,
    pub base_n_points: usize,
    pub ratios: Vec<Rational64>,
    pub lambda: f64,
    pub a: f64,
    pub t_final: f64,
    pub x_left: f64,
    pub x_right: f64,
    pub ic: JumpIC,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schemes: SchemeKind::ALL.to_vec(),
            base_n_points: 51201,
            ratios: [(1, 2), (2, 5), (1, 3), (2, 7), (1, 4)]
                .map(|(p, q)| Rational64::new(p, q))
                .to_vec(),
            lambda: 0.6,
            a: 1.0,
            t_final: 2.0,
            x_left: -PI,
            x_right: PI,
            ic: JumpIC::default(),
            out_dir: None,
        }
    }
}

/// Parses `p/q` or a plain decimal such as `0.5`.
pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::InvalidRefinementRatio(s.to_string());
    let r = if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Rational64::new(p, q)
    } else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        Rational64::approximate_float(x).ok_or_else(bad)?
    };
    if r <= Rational64::from_integer(0) || r >= Rational64::from_integer(1) {
        return Err(bad());
    }
    Ok(r)
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?} as a number")))
}

fn parse_list<T>(v: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| f(s.trim())).collect()
}

impl ExperimentConfig {
    /// Sets one key. Lists are comma separated; `pi` and `-pi` are accepted for the
    /// domain ends.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let domain_end = |v: &str| match v {
            "pi" => Ok(PI),
            "-pi" => Ok(-PI),
            _ => parse_f64(key, v),
        };
        match key {
            "scheme" => {
                self.schemes = if value == "all" {
                    SchemeKind::ALL.to_vec()
                } else {
                    parse_list(value, |s| s.parse::<SchemeKind>())?
                }
            }
            "base_n" => {
                self.base_n_points = value
                    .parse()
                    .map_err(|_| Error::Config(format!("base_n: cannot parse {value:?}")))?
            }
            "ratios" => self.ratios = parse_list(value, parse_ratio)?,
            "lambda" => self.lambda = parse_f64(key, value)?,
            "a" => self.a = parse_f64(key, value)?,
            "t_final" => self.t_final = parse_f64(key, value)?,
            "x_left" => self.x_left = domain_end(value)?,
            "x_right" => self.x_right = domain_end(value)?,
            "u_left" => self.ic = JumpIC::at(parse_f64(key, value)?, self.ic.u_right(), self.ic.jump_location())?,
            "u_right" => self.ic = JumpIC::at(self.ic.u_left(), parse_f64(key, value)?, self.ic.jump_location())?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Checks the sweep can run: every ratio in (0, 1) and every refined level an
    /// integer number of intervals.
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        if self.ratios.is_empty() {
            return Err(Error::Config("no ratios selected".into()));
        }
        if self.base_n_points < 2 {
            return Err(Error::TooFewPoints(self.base_n_points));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidCfl(self.lambda));
        }
        if !(self.a > 0.0) {
            return Err(Error::InvalidSpeed(self.a));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::InvalidFinalTime(self.t_final));
        }
        if !(self.x_left < self.x_right) {
            return Err(Error::InvalidDomain {
                left: self.x_left,
                right: self.x_right,
            });
        }
        let base = (self.base_n_points - 1) as u64;
        for &r in &self.ratios {
            if r <= Rational64::from_integer(0) || r >= Rational64::from_integer(1) {
                return Err(Error::InvalidRefinementRatio(r.to_string()));
            }
            super::refined_intervals(base, r, 2)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.ratios.len(), 5);
        ExperimentConfig {
            base_n_points: 12801,
            ..c
        }
        .validate()
        .unwrap();
    }

    #[test]
    fn parse_file() {
        let c = ExperimentConfig::from_text(
            "# desk run\nscheme = upwind1, minmod  # two of them\nbase_n = 12801\nratios = 1/2, 0.25\nlambda=0.5\nx_left = -pi\nu_right = 3\n",
        )
        .unwrap();
        assert_eq!(c.schemes, vec![SchemeKind::Upwind1, SchemeKind::MinModTvd]);
        assert_eq!(c.base_n_points, 12801);
        assert_eq!(c.ratios, vec![Rational64::new(1, 2), Rational64::new(1, 4)]);
        assert_eq!(c.lambda, 0.5);
        assert_eq!(c.ic.u_right(), 3.0);
        assert!(ExperimentConfig::from_text("bogus = 1").is_err());
        assert!(ExperimentConfig::from_text("lambda 0.5").is_err());
    }

    #[test]
    fn divisibility_names_the_ratio() {
        let c = ExperimentConfig {
            base_n_points: 12803,
            ..ExperimentConfig::default()
        };
        match c.validate() {
            Err(Error::Divisibility { intervals, ratio }) => {
                assert_eq!(intervals, 12802);
                assert_eq!(ratio, "2/5");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ratio_bounds() {
        assert!(parse_ratio("1").is_err());
        assert!(parse_ratio("3/2").is_err());
        assert!(parse_ratio("0").is_err());
        assert!(parse_ratio("x").is_err());
        assert_eq!(parse_ratio("2/7").unwrap(), Rational64::new(2, 7));
    }
}
