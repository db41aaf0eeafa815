//! Three-solution convergence-rate estimation.
//!
//! Given snapshots at spacings `h_a, h_b, h_c`, the estimated rate `sigma` solves
//!
//! ```text
//! ||u_a - u_b|| / ||u_b - u_c||  =  |h_a^sigma - h_b^sigma| / |h_b^sigma - h_c^sigma|
//! ```
//!
//! With uniform refinement `h, r h, r^2 h` there are three essentially different ways
//! of feeding the snapshots in, see [`Ordering`]. Each has a closed-form inverse; any
//! other triple goes through a bracketing scan.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{l1_distance, GridFunction1D};

/// How the three uniformly refined snapshots `u(h), u(r h), u(r^2 h)` enter the
/// estimator, as `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ordering {
    /// `(h, r h, r^2 h)`: differences of successive refinements.
    Successive,
    /// `(h, r^2 h, r h)`.
    WideMiddle,
    /// `(r h, h, r^2 h)`.
    CoarseMiddle,
}

impl Ordering {
    pub const ALL: [Ordering; 3] = [
        Ordering::Successive,
        Ordering::WideMiddle,
        Ordering::CoarseMiddle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ordering::Successive => "successive",
            Ordering::WideMiddle => "wide_middle",
            Ordering::CoarseMiddle => "coarse_middle",
        }
    }

    /// Exponents `(e_a, e_b, e_c)` such that the spacings are `h r^e`.
    pub fn exponents(self) -> (i32, i32, i32) {
        match self {
            Ordering::Successive => (0, 1, 2),
            Ordering::WideMiddle => (0, 2, 1),
            Ordering::CoarseMiddle => (1, 0, 2),
        }
    }

    /// Positions of the `(a, b, c)` snapshots in the refinement sequence
    /// `[u(h), u(r h), u(r^2 h)]`.
    pub fn indices(self) -> (usize, usize, usize) {
        let (a, b, c) = self.exponents();
        (a as usize, b as usize, c as usize)
    }

    /// Closed-form rate for uniform refinement with ratio `r`, or `None` when `ratio`
    /// lies outside the range this ordering can produce.
    pub fn closed_form(self, ratio: f64, r: f64) -> Option<f64> {
        match self {
            Ordering::Successive if ratio > 0.0 => Some(ratio.ln() / (1.0 / r).ln()),
            Ordering::WideMiddle if ratio > 1.0 => Some((ratio - 1.0).ln() / (1.0 / r).ln()),
            Ordering::CoarseMiddle if ratio > 0.0 && ratio < 1.0 => {
                Some((1.0 / ratio - 1.0).ln() / r.ln())
            }
            _ => None,
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "successive" => Ok(Ordering::Successive),
            "wide_middle" => Ok(Ordering::WideMiddle),
            "coarse_middle" => Ok(Ordering::CoarseMiddle),
            other => Err(Error::Parse(format!("unknown ordering `{other}`"))),
        }
    }
}

/// Spacings in the order they enter the estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementTriple {
    pub h_a: f64,
    pub h_b: f64,
    pub h_c: f64,
    pub ordering: Option<Ordering>,
    pub uniform_ratio: Option<f64>,
}

impl RefinementTriple {
    pub fn new(h_a: f64, h_b: f64, h_c: f64) -> Result<Self> {
        let ok = [h_a, h_b, h_c].iter().all(|h| *h > 0.0 && h.is_finite())
            && h_a != h_b
            && h_b != h_c
            && h_a != h_c;
        if !ok {
            return Err(Error::InvalidTriple(h_a, h_b, h_c));
        }
        Ok(Self {
            h_a,
            h_b,
            h_c,
            ordering: None,
            uniform_ratio: None,
        })
    }

    /// Uniform refinement `h1, r h1, r^2 h1` arranged per `ordering`.
    pub fn uniform(h1: f64, r: f64, ordering: Ordering) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidRefinementRatio(r.to_string()));
        }
        let (ea, eb, ec) = ordering.exponents();
        let mut t = Self::new(h1 * r.powi(ea), h1 * r.powi(eb), h1 * r.powi(ec))?;
        t.ordering = Some(ordering);
        t.uniform_ratio = Some(r);
        Ok(t)
    }

    /// `|h_a^s - h_b^s| / |h_b^s - h_c^s|`, evaluated relative to `h_b` so that neither
    /// tiny spacings nor large `|s|` overflow. At `s = 0` the removable singularity is
    /// replaced by its limit `|ln(h_a/h_b)| / |ln(h_b/h_c)|`.
    pub fn spacing_ratio(&self, sigma: f64) -> f64 {
        let la = (self.h_a / self.h_b).ln();
        let lc = (self.h_c / self.h_b).ln();
        if sigma == 0.0 {
            return (la / lc).abs();
        }
        ((sigma * la).exp_m1() / (sigma * lc).exp_m1()).abs()
    }

    /// `f(sigma) = R - spacing_ratio(sigma)`.
    pub fn residual(&self, ratio: f64, sigma: f64) -> f64 {
        ratio - self.spacing_ratio(sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    Bracketing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub ratio_r: f64,
    /// Nominal root; absent if the scan found none.
    pub sigma: Option<f64>,
    /// `f(sigma)`, NaN without a root.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub multiple_roots: bool,
    pub roots: Vec<f64>,
    pub method: SolveMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub bracket: (f64, f64),
    pub mesh: f64,
    /// Among several roots, the one nearest this value is reported as `sigma`.
    pub nominal_hint: Option<f64>,
    /// Scan even when a closed form exists.
    pub force_bracketing: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            bracket: (-20.0, 20.0),
            mesh: 0.01,
            nominal_hint: None,
            force_bracketing: false,
        }
    }
}

/// Solves for the estimated rate with default options.
pub fn solve_rate(ratio: f64, triple: &RefinementTriple) -> Result<RateEstimate> {
    solve_rate_with(ratio, triple, &SolveOptions::default())
}

pub fn solve_rate_with(
    ratio: f64,
    triple: &RefinementTriple,
    opts: &SolveOptions,
) -> Result<RateEstimate> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidRatio(ratio));
    }
    if let (Some(ordering), Some(r), false) =
        (triple.ordering, triple.uniform_ratio, opts.force_bracketing)
    {
        let sigma = ordering
            .closed_form(ratio, r)
            .ok_or(Error::NoValidRate { ordering, ratio })?;
        return Ok(RateEstimate {
            ratio_r: ratio,
            sigma: Some(sigma),
            residual: triple.residual(ratio, sigma),
            bracket: (sigma, sigma),
            multiple_roots: false,
            roots: vec![sigma],
            method: SolveMethod::ClosedForm,
        });
    }
    Ok(bracket_roots(ratio, triple, opts))
}

fn bracket_roots(ratio: f64, triple: &RefinementTriple, opts: &SolveOptions) -> RateEstimate {
    let f = |s: f64| triple.residual(ratio, s);
    let roots = scan_roots(&f, opts.bracket, opts.mesh);
    let sigma = pick_nominal(&roots, opts.nominal_hint);
    RateEstimate {
        ratio_r: ratio,
        sigma,
        residual: sigma.map_or(f64::NAN, f),
        bracket: opts.bracket,
        multiple_roots: roots.len() > 1,
        roots,
        method: SolveMethod::Bracketing,
    }
}

fn pick_nominal(roots: &[f64], hint: Option<f64>) -> Option<f64> {
    match hint {
        Some(target) => roots
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs())),
        None => roots.first().copied(),
    }
}

/// Every sign change of `f` on a uniform mesh over `bracket`, refined by bisection.
fn scan_roots(f: &impl Fn(f64) -> f64, bracket: (f64, f64), mesh: f64) -> Vec<f64> {
    let (lo, hi) = bracket;
    let steps = (((hi - lo) / mesh).round() as usize).max(1);
    let at = |k: usize| lo + (hi - lo) * k as f64 / steps as f64;

    let mut roots = Vec::new();
    let mut s_prev = at(0);
    let mut f_prev = f(s_prev);
    if f_prev == 0.0 {
        roots.push(s_prev);
    }
    for k in 1..=steps {
        let s = at(k);
        let fs = f(s);
        if fs == 0.0 {
            roots.push(s);
        } else if f_prev != 0.0 && (f_prev < 0.0) != (fs < 0.0) {
            roots.push(bisect(f, s_prev, s, f_prev));
        }
        s_prev = s;
        f_prev = fs;
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `||u_a - u_b||_1 / ||u_b - u_c||_1`, each norm taken on the nodes the two grids
/// share.
pub fn norm_ratio(u_a: &GridFunction1D, u_b: &GridFunction1D, u_c: &GridFunction1D) -> Result<f64> {
    for u in [u_b, u_c] {
        if (u.time() - u_a.time()).abs() > 1e-12 * u_a.time().abs().max(1.0) {
            return Err(Error::TimeMismatch(u_a.time(), u.time()));
        }
    }
    let num = l1_distance(u_a, u_b)?;
    let den = l1_distance(u_b, u_c)?;
    if den == 0.0 {
        return Err(Error::IndeterminateRate);
    }
    Ok(num / den)
}

/// Estimates for the three orderings of one refinement sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingEstimates {
    pub h1: f64,
    pub r: f64,
    /// Indexed like [`Ordering::ALL`].
    pub estimates: [Result<RateEstimate>; 3],
}

impl OrderingEstimates {
    pub fn get(&self, ordering: Ordering) -> &Result<RateEstimate> {
        &self.estimates[ordering as usize]
    }

    pub fn sigma(&self, ordering: Ordering) -> Option<f64> {
        self.get(ordering).as_ref().ok().and_then(|e| e.sigma)
    }
}

/// Runs all three orderings on snapshots at `h1`, `r h1`, `r^2 h1`.
pub fn estimate_all_orderings(
    u_h1: &GridFunction1D,
    u_h2: &GridFunction1D,
    u_h3: &GridFunction1D,
    r: f64,
) -> Result<OrderingEstimates> {
    estimate_all_orderings_with(u_h1, u_h2, u_h3, r, &SolveOptions::default())
}

pub fn estimate_all_orderings_with(
    u_h1: &GridFunction1D,
    u_h2: &GridFunction1D,
    u_h3: &GridFunction1D,
    r: f64,
    opts: &SolveOptions,
) -> Result<OrderingEstimates> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidRefinementRatio(r.to_string()));
    }
    let h1 = u_h1.grid().h();
    let close = |h: f64, want: f64| (h - want).abs() <= 1e-9 * want;
    if !close(u_h2.grid().h(), r * h1) || !close(u_h3.grid().h(), r * r * h1) {
        return Err(Error::InvalidTriple(h1, u_h2.grid().h(), u_h3.grid().h()));
    }
    let snaps = [u_h1, u_h2, u_h3];
    let estimates = Ordering::ALL.map(|ordering| {
        let (a, b, c) = ordering.indices();
        let ratio = norm_ratio(snaps[a], snaps[b], snaps[c])?;
        let triple = RefinementTriple::uniform(h1, r, ordering)?;
        solve_rate_with(ratio, &triple, opts)
    });
    Ok(OrderingEstimates { h1, r, estimates })
}

/// Rounds half-to-even at two decimals, the way the rate tables are printed.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round_ties_even() / 100.0
}
