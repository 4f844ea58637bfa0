use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// An offset distance, absolute or relative to the input bounding-box diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Distance {
    Absolute(f64),
    /// Fraction of the diagonal (`0.04` for `4%`).
    Relative(f64),
}

impl Distance {
    pub fn resolve(self, diagonal: f64) -> f64 {
        match self {
            Distance::Absolute(d) => d,
            Distance::Relative(f) => f * diagonal,
        }
    }
}

impl FromStr for Distance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("bad distance '{s}'"));
        let d = if let Some(p) = s.strip_suffix('%') {
            Distance::Relative(p.trim().parse::<f64>().map_err(|_| bad())? / 100.0)
        } else {
            Distance::Absolute(s.parse::<f64>().map_err(|_| bad())?)
        };
        match d {
            Distance::Absolute(x) | Distance::Relative(x) if x.is_finite() && x > 0.0 => Ok(d),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Absolute(d) => write!(f, "{d}"),
            Distance::Relative(x) => write!(f, "{}%", x * 100.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Outside,
    Inside,
    Both,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "outside" => Ok(Side::Outside),
            "inside" => Ok(Side::Inside),
            "both" => Ok(Side::Both),
            _ => Err(Error::InvalidParameter(format!("bad side '{s}'"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Outside => "outside",
            Side::Inside => "inside",
            Side::Both => "both",
        })
    }
}

/// When the sizing update lengthens an edge target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoarsenRule {
    /// Poor shape and normal deviation above the planarity threshold.
    PaperLiteral,
    /// Good shape and normal deviation below the planarity threshold.
    FlatRegions,
}

impl FromStr for CoarsenRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper_literal" => Ok(CoarsenRule::PaperLiteral),
            "flat_regions" => Ok(CoarsenRule::FlatRegions),
            _ => Err(Error::InvalidParameter(format!("bad coarsen rule '{s}'"))),
        }
    }
}

impl fmt::Display for CoarsenRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoarsenRule::PaperLiteral => "paper_literal",
            CoarsenRule::FlatRegions => "flat_regions",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffsetParams {
    pub delta: Distance,
    /// Degrees.
    pub sigma_max: f64,
    /// Degrees.
    pub sigma_min: f64,
    /// Defaults to `2 δ sin(σ_max)`.
    pub lmin: Option<f64>,
    pub lmax: f64,
    pub side: Side,
    pub max_iterations: usize,
    pub coarsen_rule: CoarsenRule,
}

impl Default for OffsetParams {
    fn default() -> Self {
        OffsetParams {
            delta: Distance::Relative(0.04),
            sigma_max: 15.0,
            sigma_min: 2.0,
            lmin: None,
            lmax: f64::INFINITY,
            side: Side::Both,
            max_iterations: 10,
            coarsen_rule: CoarsenRule::FlatRegions,
        }
    }
}

/// Parameters with the distance resolved to model units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub delta: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub lmin: f64,
    pub lmax: f64,
    pub max_iterations: usize,
    pub coarsen_rule: CoarsenRule,
}

impl OffsetParams {
    pub fn resolve(&self, diagonal: f64) -> Result<Resolved> {
        let delta = self.delta.resolve(diagonal);
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "offset distance {delta} must be positive"
            )));
        }
        if !(0.0 < self.sigma_min && self.sigma_min < self.sigma_max && self.sigma_max < 90.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < sigma_min ({}) < sigma_max ({}) < 90",
                self.sigma_min, self.sigma_max
            )));
        }
        let lmin = self
            .lmin
            .unwrap_or(2.0 * delta * self.sigma_max.to_radians().sin());
        if !(lmin > 0.0 && lmin <= self.lmax) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < lmin ({lmin}) <= lmax ({})",
                self.lmax
            )));
        }
        Ok(Resolved {
            delta,
            sigma_max: self.sigma_max,
            sigma_min: self.sigma_min,
            lmin,
            lmax: self.lmax,
            max_iterations: self.max_iterations,
            coarsen_rule: self.coarsen_rule,
        })
    }
}
