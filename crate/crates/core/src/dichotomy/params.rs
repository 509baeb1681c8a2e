use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::multipartite::{SizeProfile, DEFAULT_SEARCH_BUDGET};
use crate::precision::{self, powi, real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Parameter ranges of the stability theorem enforced exactly.
    Paper,
    /// Desk-scale mode: ranges relaxed, every override stamped into the output.
    Relaxed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Relaxed => "relaxed",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "paper" => Ok(Mode::Paper),
            "relaxed" => Ok(Mode::Relaxed),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

/// Relaxed-mode replacements for the quantities the theorem fixes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    /// Joint-size threshold of the reduction loop.
    pub threshold: Option<BigRational>,
    /// Target `K_{r+1}(s, .., s, t)`.
    pub profile: Option<SizeProfile>,
    /// Factor applied to `(ε^(1/3) + c^(1/(3r+3))) n²`.
    pub bound_multiplier: Option<f64>,
    /// Class size after trimming the core.
    pub trim_target: Option<usize>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub r: usize,
    pub eps: f64,
    pub c: f64,
    pub mode: Mode,
    pub overrides: Overrides,
    /// Node budget of the exact multipartite search.
    pub search_budget: u64,
}

/// A violated parameter condition, named by its inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamViolation {
    pub inequality: &'static str,
    pub detail: String,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.inequality, self.detail)
    }
}

impl std::error::Error for ParamViolation {}

pub const INEQ_R: &str = "r >= 2";
pub const INEQ_EPS: &str = "0 < eps < r^-24";
pub const INEQ_C_UPPER: &str = "c < r^-3(r+14)(r+1)";
pub const INEQ_C_LOWER: &str = "1/ln n < c";
pub const INEQ_RELAXED: &str = "eps >= 0, c >= 0 (finite)";
pub const INEQ_OVERRIDES: &str = "no overrides in paper mode";
pub const INEQ_PROFILE: &str = "profile has r + 1 classes";
pub const INEQ_MULTIPLIER: &str = "bound multiplier > 0";

impl Params {
    pub fn new(r: usize, eps: f64, c: f64, mode: Mode) -> Params {
        Params {
            r,
            eps,
            c,
            mode,
            overrides: Overrides::default(),
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn relaxed(r: usize, eps: f64, c: f64) -> Params {
        Params::new(r, eps, c, Mode::Relaxed)
    }

    pub fn with_overrides(mut self, overrides: Overrides) -> Params {
        self.overrides = overrides;
        self
    }

    pub fn bound_multiplier(&self) -> f64 {
        self.overrides.bound_multiplier.unwrap_or(1.0)
    }

    /// Checks the parameter ranges for a graph of order `n`. In paper mode
    /// these are exactly `r >= 2`, `0 < ε < r^-24` and
    /// `1/ln n < c < r^-3(r+14)(r+1)`, compared in high precision.
    pub fn validate(&self, n: usize) -> std::result::Result<(), ParamViolation> {
        let fail = |inequality, detail: String| Err(ParamViolation { inequality, detail });
        if self.r < 2 {
            return fail(INEQ_R, format!("r = {}", self.r));
        }
        if !self.eps.is_finite() || !self.c.is_finite() || self.eps < 0.0 || self.c < 0.0 {
            return fail(INEQ_RELAXED, format!("eps = {}, c = {}", self.eps, self.c));
        }
        if let Some(p) = &self.overrides.profile {
            if p.class_count() != self.r + 1 {
                return fail(INEQ_PROFILE, format!("profile {p} for r = {}", self.r));
            }
        }
        if let Some(m) = self.overrides.bound_multiplier {
            if !(m.is_finite() && m > 0.0) {
                return fail(INEQ_MULTIPLIER, format!("multiplier = {m}"));
            }
        }
        if self.mode == Mode::Relaxed {
            return Ok(());
        }
        if !self.overrides.is_empty() {
            return fail(
                INEQ_OVERRIDES,
                "relaxed overrides given in paper mode".into(),
            );
        }
        let r = self.r as u64;
        let ri = self.r as i64;
        let eps = precision::real_f64(self.eps).expect("finite");
        let c = precision::real_f64(self.c).expect("finite");
        if !(eps > real(0) && eps < powi(r, -24)) {
            return fail(INEQ_EPS, format!("eps = {:e}, r = {}", self.eps, self.r));
        }
        if c >= powi(r, -3 * (ri + 14) * (ri + 1)) {
            return fail(INEQ_C_UPPER, format!("c = {:e}, r = {}", self.c, self.r));
        }
        // 1/ln n < c  <=>  c ln n > 1 (false for n <= 1)
        if n < 2 || c * precision::ln(&real(n as u64)) <= real(1) {
            return fail(INEQ_C_LOWER, format!("c = {:e}, n = {n}", self.c));
        }
        Ok(())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.25` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10u8), frac.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Outcome of the edge-count hypothesis `e(G) >= ⌈(1 - 1/r - ε) n² / 2⌉`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub edges: u64,
    pub required: i64,
    /// `edges - required`
    pub margin: i64,
}

/// Evaluated exactly: `ε` is converted from its binary value without rounding.
pub fn check_hypothesis(g: &Graph, r: usize, eps: f64) -> Result<HypothesisReport> {
    let (edges, n) = (g.edge_count(), g.order());
    if r == 0 {
        return Err(Error::InvalidParameter("part count must be >= 1".into()));
    }
    let eps_q = BigRational::from_float(eps)
        .ok_or_else(|| Error::InvalidParameter(format!("eps is not finite: {eps}")))?;
    let nn = BigInt::from(n);
    let density = BigRational::one() - BigRational::new(1.into(), BigInt::from(r)) - eps_q;
    let bound = density * BigRational::new(&nn * &nn, 2.into());
    let ceil = bound.ceil().to_integer();
    let required: i64 = ceil
        .try_into()
        .map_err(|_| Error::InvalidParameter("edge requirement out of range".into()))?;
    let edges = edges as u64;
    let margin = edges as i64 - required;
    Ok(HypothesisReport {
        holds: !margin.is_negative(),
        edges,
        required,
        margin,
    })
}
