//! Explicit single-step discretizations of `u_t + a u_x = 0` and their time
//! integration at fixed CFL number.
//!
//! Every update is evaluated in difference form, `u_i + sum_s c_s (u_{i+s} - u_i)`,
//! which is algebraically the published stencil (the coefficient rows sum to zero)
//! and makes a node whose stencil is constant come out bit-for-bit unchanged. The
//! integrator relies on that to advance only the window of nodes that can change.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, GridFunction1D};

/// Ghost layer width; covers the widest stencil (Upwind6 reaches 4 nodes upwind).
const GHOST: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Upwind1,
    Godunov2,
    Upwind4,
    Upwind6,
    MinModTvd,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Upwind1,
        SchemeKind::Godunov2,
        SchemeKind::Upwind4,
        SchemeKind::Upwind6,
        SchemeKind::MinModTvd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Upwind1 => "upwind1",
            SchemeKind::Godunov2 => "godunov2",
            SchemeKind::Upwind4 => "upwind4",
            SchemeKind::Upwind6 => "upwind6",
            SchemeKind::MinModTvd => "minmod",
        }
    }

    /// Nominal order of accuracy on smooth solutions.
    pub fn formal_order(self) -> u32 {
        match self {
            SchemeKind::Upwind1 => 1,
            SchemeKind::Godunov2 | SchemeKind::MinModTvd => 2,
            SchemeKind::Upwind4 => 4,
            SchemeKind::Upwind6 => 6,
        }
    }

    /// Expected L1 rate `p / (p + 1)` across a linear jump.
    pub fn jump_rate(self) -> f64 {
        let p = self.formal_order() as f64;
        p / (p + 1.0)
    }

    pub fn is_linear(self) -> bool {
        !matches!(self, SchemeKind::MinModTvd)
    }

    pub fn footprint(self) -> StencilFootprint {
        let (left_width, right_width) = match self {
            SchemeKind::Upwind1 => (1, 0),
            SchemeKind::Godunov2 | SchemeKind::MinModTvd => (2, 1),
            SchemeKind::Upwind4 => (3, 2),
            SchemeKind::Upwind6 => (4, 3),
        };
        StencilFootprint {
            left_width,
            right_width,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upwind1" | "first" => Ok(SchemeKind::Upwind1),
            "godunov2" | "second" => Ok(SchemeKind::Godunov2),
            "upwind4" | "fourth" => Ok(SchemeKind::Upwind4),
            "upwind6" | "sixth" => Ok(SchemeKind::Upwind6),
            "minmod" | "minmodtvd" | "minmod-tvd" | "tvd" => Ok(SchemeKind::MinModTvd),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Number of nodes a scheme reads upwind (left) and downwind (right) of the
/// updated node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilFootprint {
    pub left_width: usize,
    pub right_width: usize,
}

impl StencilFootprint {
    pub fn width(&self) -> usize {
        self.left_width + self.right_width + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    kind: SchemeKind,
    lambda: f64,
    advection_speed: f64,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, lambda: f64, advection_speed: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidCfl(lambda));
        }
        if !(advection_speed > 0.0 && advection_speed.is_finite()) {
            return Err(Error::InvalidSpeed(advection_speed));
        }
        Ok(Self {
            kind,
            lambda,
            advection_speed,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn advection_speed(&self) -> f64 {
        self.advection_speed
    }

    pub fn dt(&self, h: f64) -> f64 {
        self.lambda * h / self.advection_speed
    }
}

/// Fourth-order stencil: `C = lambda/144 * [rows]`, row `k` holds the integer
/// coefficients of `lambda^0 .. lambda^3`, rows ordered `s = -3 ..= 2`.
pub const UPWIND4_POLY: [[i64; 4]; 6] = [
    [5, 0, -8, 3],
    [-37, -6, 52, -9],
    [146, 96, -104, 6],
    [-50, -180, 80, 6],
    [-71, 96, -16, -9],
    [7, -6, -4, 3],
];
pub const UPWIND4_DENOM: i64 = 144;

/// Sixth-order stencil: `C = lambda/4320 * [rows]`, powers `lambda^0 .. lambda^5`,
/// rows ordered `s = -4 ..= 3`.
pub const UPWIND6_POLY: [[i64; 6]; 8] = [
    [-31, 0, 43, 0, -15, 3],
    [289, 24, -391, -30, 123, -15],
    [-1299, -324, 1623, 360, -387, 27],
    [4325, 3240, -2675, -1170, 615, -15],
    [-1085, -5880, 1505, 1680, -525, -15],
    [-2589, 3240, 267, -1170, 225, 27],
    [431, -324, -419, 360, -33, -15],
    [-41, 24, 47, -30, -3, 3],
];
pub const UPWIND6_DENOM: i64 = 4320;

fn eval_rows<const P: usize>(rows: &[[i64; P]], denom: i64, lambda: f64) -> Vec<f64> {
    rows.iter()
        .map(|row| {
            let poly = row
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * lambda + c as f64);
            lambda * poly / denom as f64
        })
        .collect()
}

/// Stencil coefficients `C_s` for `s = -left_width ..= right_width`, for the two
/// schemes written as explicit coefficient vectors.
pub fn stencil_coefficients(kind: SchemeKind, lambda: f64) -> Option<Vec<f64>> {
    match kind {
        SchemeKind::Upwind4 => Some(eval_rows(&UPWIND4_POLY, UPWIND4_DENOM, lambda)),
        SchemeKind::Upwind6 => Some(eval_rows(&UPWIND6_POLY, UPWIND6_DENOM, lambda)),
        _ => None,
    }
}

/// `b` if `|b| < |c|`, `c` if `|b| >= |c|`, both only when `bc > 0`; zero otherwise.
pub fn minmod(b: f64, c: f64) -> f64 {
    if b * c <= 0.0 {
        0.0
    } else if b.abs() < c.abs() {
        b
    } else {
        c
    }
}

/// One scheme evaluated at a fixed (possibly reduced) CFL number.
struct Kernel {
    kind: SchemeKind,
    lambda: f64,
    coeffs: Vec<f64>,
}

impl Kernel {
    fn new(kind: SchemeKind, lambda: f64) -> Self {
        Self {
            kind,
            lambda,
            coeffs: stencil_coefficients(kind, lambda).unwrap_or_default(),
        }
    }

    /// Writes updated values for interior nodes `lo..=hi` into `dst`. Both slices are
    /// ghost-padded: node `i` lives at `i + GHOST`.
    fn apply(&self, src: &[f64], dst: &mut [f64], lo: usize, hi: usize) {
        let l = self.lambda;
        let range = lo + GHOST..=hi + GHOST;
        match self.kind {
            SchemeKind::Upwind1 => {
                for j in range {
                    let u = src[j];
                    dst[j] = u - l * (u - src[j - 1]);
                }
            }
            SchemeKind::Godunov2 => {
                let q = 0.25 * (1.0 - l);
                for j in range {
                    let u = src[j];
                    let flux = (u - src[j - 1]) + q * ((src[j + 1] - src[j - 1]) - (u - src[j - 2]));
                    dst[j] = u - l * flux;
                }
            }
            SchemeKind::MinModTvd => {
                let q = 0.5 * (1.0 - l);
                for j in range {
                    let u = src[j];
                    let d_right = src[j + 1] - u;
                    let d_mid = u - src[j - 1];
                    let d_left = src[j - 1] - src[j - 2];
                    let alpha = minmod(d_right, d_mid);
                    let beta = minmod(d_mid, d_left);
                    dst[j] = u - l * (d_mid + q * (alpha - beta));
                }
            }
            SchemeKind::Upwind4 => {
                let c = &self.coeffs;
                for j in range {
                    let u = src[j];
                    let du = c[0] * (src[j - 3] - u)
                        + c[1] * (src[j - 2] - u)
                        + c[2] * (src[j - 1] - u)
                        + c[4] * (src[j + 1] - u)
                        + c[5] * (src[j + 2] - u);
                    dst[j] = u + du;
                }
            }
            SchemeKind::Upwind6 => {
                let c = &self.coeffs;
                for j in range {
                    let u = src[j];
                    let du = c[0] * (src[j - 4] - u)
                        + c[1] * (src[j - 3] - u)
                        + c[2] * (src[j - 2] - u)
                        + c[3] * (src[j - 1] - u)
                        + c[5] * (src[j + 1] - u)
                        + c[6] * (src[j + 2] - u)
                        + c[7] * (src[j + 3] - u);
                    dst[j] = u + du;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    ZeroGradient,
    /// The last grid node duplicates the first; `n` unique nodes wrap around.
    Periodic,
}

fn fill_ghosts(buf: &mut [f64], n: usize, boundary: Boundary) {
    match boundary {
        Boundary::ZeroGradient => {
            let (first, last) = (buf[GHOST], buf[GHOST + n - 1]);
            buf[..GHOST].fill(first);
            buf[GHOST + n..].fill(last);
        }
        Boundary::Periodic => {
            for k in 0..GHOST {
                buf[GHOST + n + k] = buf[GHOST + (k % n)];
                buf[GHOST - 1 - k] = buf[GHOST + n - 1 - (k % n)];
            }
        }
    }
}

fn padded(values: &[f64], boundary: Boundary) -> Vec<f64> {
    let n = values.len();
    let mut buf = vec![0.0; n + 2 * GHOST];
    buf[GHOST..GHOST + n].copy_from_slice(values);
    fill_ghosts(&mut buf, n, boundary);
    buf
}

fn check_width(kind: SchemeKind, n: usize) -> Result<()> {
    let needed = kind.footprint().width();
    if n < needed {
        return Err(Error::StencilTooWide {
            scheme: kind.name(),
            needed,
            got: n,
        });
    }
    Ok(())
}

/// Advances `u` by one full time step `dt = lambda h / a` with zero-gradient
/// boundaries.
pub fn step(u: &GridFunction1D, spec: &SchemeSpec) -> Result<GridFunction1D> {
    step_with_lambda(u, spec, spec.lambda)
}

fn step_with_lambda(u: &GridFunction1D, spec: &SchemeSpec, lambda: f64) -> Result<GridFunction1D> {
    let n = u.grid().n_points();
    check_width(spec.kind, n)?;
    let src = padded(u.values(), Boundary::ZeroGradient);
    let mut dst = src.clone();
    Kernel::new(spec.kind, lambda).apply(&src, &mut dst, 0, n - 1);
    let dt = lambda * u.grid().h() / spec.advection_speed;
    let values = dst[GHOST..GHOST + n].to_vec();
    if let Some(node) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Unstable {
            step: 1,
            time: u.time() + dt,
            node,
        });
    }
    GridFunction1D::new(*u.grid(), values, u.time() + dt)
}

/// Step schedule for reaching `t_final`: `full_steps` steps at the nominal CFL
/// number followed by one step at `last_fraction * lambda` (`0 < last_fraction <= 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub dt: f64,
    pub full_steps: usize,
    pub last_fraction: f64,
}

impl StepPlan {
    pub fn new(h: f64, spec: &SchemeSpec, t_final: f64) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidFinalTime(t_final));
        }
        let dt = spec.dt(h);
        let k = t_final / dt;
        // Round-off in t_final/dt must not create a sliver step.
        let n = ((k - 1e-9).ceil() as usize).max(1);
        let mut last_fraction = k - (n - 1) as f64;
        if last_fraction > 1.0 - 1e-9 {
            last_fraction = 1.0;
        }
        Ok(Self {
            dt,
            full_steps: n - 1,
            last_fraction,
        })
    }

    pub fn total_steps(&self) -> usize {
        self.full_steps + 1
    }
}

/// Advances `u0` to exactly `t_final` with zero-gradient boundaries; the last step is
/// taken at a reduced CFL number so the final time is hit exactly.
pub fn integrate_to(u0: &GridFunction1D, spec: &SchemeSpec, t_final: f64) -> Result<GridFunction1D> {
    let duration = t_final - u0.time();
    let values = integrate_values(u0, spec, duration, Boundary::ZeroGradient)?;
    GridFunction1D::new(*u0.grid(), values, t_final)
}

/// Same as [`integrate_to`] with periodic wraparound; the last node of the grid is
/// treated as a copy of the first.
pub fn integrate_periodic(
    u0: &GridFunction1D,
    spec: &SchemeSpec,
    t_final: f64,
) -> Result<GridFunction1D> {
    let duration = t_final - u0.time();
    let values = integrate_values(u0, spec, duration, Boundary::Periodic)?;
    GridFunction1D::new(*u0.grid(), values, t_final)
}

fn integrate_values(
    u0: &GridFunction1D,
    spec: &SchemeSpec,
    duration: f64,
    boundary: Boundary,
) -> Result<Vec<f64>> {
    let grid = u0.grid();
    let plan = StepPlan::new(grid.h(), spec, duration)?;
    let n = match boundary {
        Boundary::ZeroGradient => grid.n_points(),
        Boundary::Periodic => grid.n_points() - 1,
    };
    check_width(spec.kind, n)?;

    let mut src = padded(&u0.values()[..n], boundary);
    let mut dst = src.clone();
    let mut window = match boundary {
        Boundary::ZeroGradient => ActiveWindow::scan(&src, n, spec.kind.footprint()),
        Boundary::Periodic => Some((0, n - 1)),
    };
    let mut prev_window: Option<(usize, usize)> = None;

    let full = Kernel::new(spec.kind, spec.lambda);
    let last = Kernel::new(spec.kind, spec.lambda * plan.last_fraction);

    for step_idx in 0..plan.total_steps() {
        let Some((lo, hi)) = window else {
            // Uniform field: nothing left to advance.
            break;
        };
        // dst holds the state from two steps ago; bring back what changed last step.
        if let Some((plo, phi)) = prev_window {
            dst[plo + GHOST..=phi + GHOST].copy_from_slice(&src[plo + GHOST..=phi + GHOST]);
        }
        let kernel = if step_idx < plan.full_steps { &full } else { &last };
        kernel.apply(&src, &mut dst, lo, hi);
        if let Some(k) = dst[lo + GHOST..=hi + GHOST].iter().position(|v| !v.is_finite()) {
            return Err(Error::Unstable {
                step: step_idx + 1,
                time: (step_idx + 1) as f64 * plan.dt,
                node: lo + k,
            });
        }
        fill_ghosts(&mut dst, n, boundary);
        std::mem::swap(&mut src, &mut dst);
        prev_window = Some((lo, hi));
        window = match boundary {
            Boundary::ZeroGradient => {
                ActiveWindow::rescan(&src, n, spec.kind.footprint(), lo, hi)
            }
            Boundary::Periodic => Some((0, n - 1)),
        };
    }

    let mut values = src[GHOST..GHOST + n].to_vec();
    if boundary == Boundary::Periodic {
        values.push(values[0]);
    }
    Ok(values)
}

/// Tracks the nodes whose stencil is not constant; all others are fixed points of
/// every scheme.
struct ActiveWindow;

impl ActiveWindow {
    /// Nodes that can change, given the first and last index `j` with `u_j != u_{j+1}`.
    fn from_pairs(first: usize, last: usize, n: usize, fp: StencilFootprint) -> (usize, usize) {
        let lo = (first + 1).saturating_sub(fp.right_width);
        let hi = (last + fp.left_width).min(n - 1);
        (lo, hi)
    }

    fn scan(buf: &[f64], n: usize, fp: StencilFootprint) -> Option<(usize, usize)> {
        Self::rescan_range(buf, n, fp, 0, n.saturating_sub(2))
    }

    /// After nodes `lo..=hi` were updated, only pairs `lo-1 ..= hi` can be nonuniform.
    fn rescan(buf: &[f64], n: usize, fp: StencilFootprint, lo: usize, hi: usize) -> Option<(usize, usize)> {
        Self::rescan_range(buf, n, fp, lo.saturating_sub(1), hi.min(n - 2))
    }

    fn rescan_range(
        buf: &[f64],
        n: usize,
        fp: StencilFootprint,
        from: usize,
        to: usize,
    ) -> Option<(usize, usize)> {
        if n < 2 {
            return None;
        }
        let differs = |j: usize| buf[j + GHOST] != buf[j + 1 + GHOST];
        let first = (from..=to).find(|&j| differs(j))?;
        let last = (first..=to).rev().find(|&j| differs(j))?;
        Some(Self::from_pairs(first, last, n, fp))
    }
}

/// Observed orders of accuracy from a smooth periodic refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothOrders {
    pub scheme: SchemeKind,
    pub resolutions: Vec<usize>,
    pub errors: Vec<f64>,
    /// `orders[k]` compares `resolutions[k]` with `resolutions[k + 1]`.
    pub orders: Vec<f64>,
}

/// Advects `sin(x)` on `[-pi, pi]` with periodic wraparound and measures the L1 error
/// against `sin(x - a t_final)` at each resolution.
pub fn smooth_convergence_order(
    spec: &SchemeSpec,
    resolutions: &[usize],
    t_final: f64,
) -> Result<SmoothOrders> {
    use std::f64::consts::PI;
    if resolutions.len() < 2 {
        return Err(Error::TooFewResolutions {
            needed: 2,
            got: resolutions.len(),
        });
    }
    let mut errors = Vec::with_capacity(resolutions.len());
    let mut spacings = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let grid = Grid1D::new(-PI, PI, n)?;
        let u0 = GridFunction1D::from_fn(grid, 0.0, f64::sin)?;
        let u = integrate_periodic(&u0, spec, t_final)?;
        let shift = spec.advection_speed * t_final;
        let err: f64 = u.values()[..n - 1]
            .iter()
            .zip(grid.nodes())
            .map(|(v, x)| (v - (x - shift).sin()).abs())
            .sum::<f64>()
            * grid.h();
        errors.push(err);
        spacings.push(grid.h());
    }
    let orders = errors
        .windows(2)
        .zip(spacings.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    Ok(SmoothOrders {
        scheme: spec.kind,
        resolutions: resolutions.to_vec(),
        errors,
        orders,
    })
}
