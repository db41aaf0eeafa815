//! Uniform 1D grids, nodal grid functions and cross-resolution differencing.
//!
//! Grids are described by their endpoints and node count; node `i` sits at
//! `x_left + i * h`. Two grids over the same domain are compared only at the
//! nodes they share, and which nodes those are is decided from the interval
//! counts alone (`gcd` arithmetic), never from coordinates.

use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Uniform grid on `[x_left, x_right]` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_left: f64,
    x_right: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::TooFewPoints(n_points));
        }
        if !(x_left.is_finite() && x_right.is_finite()) || x_right <= x_left {
            return Err(Error::InvalidDomain {
                left: x_left,
                right: x_right,
            });
        }
        Ok(Self {
            x_left,
            x_right,
            n_points,
        })
    }

    /// Grid with a given number of intervals (`n_points - 1`).
    pub fn with_intervals(x_left: f64, x_right: f64, intervals: usize) -> Result<Self> {
        Self::new(x_left, x_right, intervals + 1)
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn intervals(&self) -> usize {
        self.n_points - 1
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn h(&self) -> f64 {
        self.length() / self.intervals() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.h();
        (0..self.n_points).map(move |i| self.x_left + i as f64 * h)
    }

    fn same_domain(&self, other: &Grid1D) -> bool {
        let tol = 1e-12 * self.length().abs().max(1.0);
        (self.x_left - other.x_left).abs() <= tol && (self.x_right - other.x_right).abs() <= tol
    }

    /// Largest grid whose nodes belong to both `self` and `other`, together with the
    /// index strides that map its nodes into each parent grid.
    pub fn common_subgrid(&self, other: &Grid1D) -> Result<CommonSubgrid> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch(
                self.x_left,
                self.x_right,
                other.x_left,
                other.x_right,
            ));
        }
        let g = self.intervals().gcd(&other.intervals());
        // Both endpoints always coincide, so g >= 1 and the subgrid has >= 2 nodes.
        if g == 0 {
            return Err(Error::NoCommonNodes);
        }
        Ok(CommonSubgrid {
            grid: Grid1D::with_intervals(self.x_left, self.x_right, g)?,
            stride_a: self.intervals() / g,
            stride_b: other.intervals() / g,
        })
    }
}

/// Result of [`Grid1D::common_subgrid`]: node `k` of `grid` is node `k * stride_a`
/// of the first grid and node `k * stride_b` of the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonSubgrid {
    pub grid: Grid1D,
    pub stride_a: usize,
    pub stride_b: usize,
}

/// Nodal snapshot of a solution at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    grid: Grid1D,
    values: Vec<f64>,
    time: f64,
}

impl GridFunction1D {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                expected: grid.n_points(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values, time })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid1D, time: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values, time)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.grid,
            self.values.iter().map(|v| c * v).collect(),
            self.time,
        )
    }

    /// Discrete total variation `sum |u[i+1] - u[i]|`.
    pub fn total_variation(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }

    /// CSV with header `x,u`, one row per node, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.values.len() + 4);
        out.push_str("x,u\n");
        for (x, u) in self.grid.nodes().zip(&self.values) {
            let _ = writeln!(out, "{x:.16e},{u:.16e}");
        }
        out
    }

    /// Parses the output of [`to_csv`](Self::to_csv). The grid is rebuilt from the first
    /// and last abscissae and the row count.
    pub fn from_csv(text: &str, time: f64) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "x,u" => {}
            other => return Err(Error::Parse(format!("expected header `x,u`, got {other:?}"))),
        }
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for line in lines {
            let (x, u) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed row `{line}`")))?;
            xs.push(parse_f64(x)?);
            us.push(parse_f64(u)?);
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints(xs.len()));
        }
        let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len())?;
        Self::new(grid, us, time)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: `{s}`")))
}

/// Jump initial data: `u_left` on `x <= jump_location`, `u_right` beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpIC {
    u_left: f64,
    u_right: f64,
    jump_location: f64,
}

impl JumpIC {
    pub fn new(u_left: f64, u_right: f64) -> Result<Self> {
        Self::at(u_left, u_right, 0.0)
    }

    pub fn at(u_left: f64, u_right: f64, jump_location: f64) -> Result<Self> {
        if u_left == u_right {
            return Err(Error::DegenerateJump(u_left));
        }
        if !(u_left.is_finite() && u_right.is_finite() && jump_location.is_finite()) {
            return Err(Error::Config("jump states must be finite".into()));
        }
        Ok(Self {
            u_left,
            u_right,
            jump_location,
        })
    }

    pub fn u_left(&self) -> f64 {
        self.u_left
    }

    pub fn u_right(&self) -> f64 {
        self.u_right
    }

    pub fn jump_location(&self) -> f64 {
        self.jump_location
    }

    pub fn jump_size(&self) -> f64 {
        (self.u_right - self.u_left).abs()
    }
}

impl Default for JumpIC {
    fn default() -> Self {
        Self {
            u_left: -1.0,
            u_right: 1.0,
            jump_location: 0.0,
        }
    }
}

/// Samples the jump on `grid` at `t = 0`. The node nearest the jump location takes
/// `u_left`, so that every resolution places the discontinuity consistently.
pub fn make_jump_function(grid: Grid1D, ic: JumpIC) -> GridFunction1D {
    let k = ((ic.jump_location - grid.x_left()) / grid.h()).round();
    let values = (0..grid.n_points())
        .map(|i| {
            if (i as f64) <= k {
                ic.u_left
            } else {
                ic.u_right
            }
        })
        .collect();
    GridFunction1D {
        grid,
        values,
        time: 0.0,
    }
}

/// Rectangle-rule L1 norm, `h * sum |u_i|`.
pub fn l1_norm(f: &GridFunction1D) -> f64 {
    f.grid.h() * f.values.iter().map(|v| v.abs()).sum::<f64>()
}

/// Pointwise `f_a - f_b` on the nodes common to both grids (injection, no
/// interpolation).
pub fn coincident_difference(f_a: &GridFunction1D, f_b: &GridFunction1D) -> Result<GridFunction1D> {
    let common = f_a.grid.common_subgrid(&f_b.grid)?;
    let values = (0..common.grid.n_points())
        .map(|k| f_a.values[k * common.stride_a] - f_b.values[k * common.stride_b])
        .collect();
    Ok(GridFunction1D {
        grid: common.grid,
        values,
        time: f_a.time,
    })
}

/// `||f_a - f_b||_1` on the common subgrid, without materialising the difference.
pub fn l1_distance(f_a: &GridFunction1D, f_b: &GridFunction1D) -> Result<f64> {
    let common = f_a.grid.common_subgrid(&f_b.grid)?;
    let sum: f64 = (0..common.grid.n_points())
        .map(|k| (f_a.values[k * common.stride_a] - f_b.values[k * common.stride_b]).abs())
        .sum();
    Ok(common.grid.h() * sum)
}
