//! Experiment orchestration: refinement sweeps over schemes and ratios, rate tables,
//! and the smooth-solution order check.

pub mod cli;
mod config;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{make_jump_function, Grid1D, GridFunction1D};
use crate::richardson::{estimate_all_orderings, round2, Ordering, RateEstimate};
use crate::schemes::{integrate_to, smooth_convergence_order, SchemeKind, SchemeSpec, SmoothOrders};

pub use config::{parse_ratio, ExperimentConfig};

/// Resolutions of the smooth-solution order check.
pub const SMOOTH_RESOLUTIONS: [usize; 3] = [201, 401, 801];

/// One estimate as it appears in the CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEntry {
    pub ratio_r: Option<f64>,
    pub sigma: Option<f64>,
    pub residual: Option<f64>,
    pub multiple_roots: bool,
}

impl RateEntry {
    pub const MISSING: RateEntry = RateEntry {
        ratio_r: None,
        sigma: None,
        residual: None,
        multiple_roots: false,
    };

    fn from_result(res: &Result<RateEstimate>) -> Self {
        match res {
            Ok(e) => RateEntry {
                ratio_r: Some(e.ratio_r),
                sigma: e.sigma,
                residual: e.sigma.map(|_| e.residual),
                multiple_roots: e.multiple_roots,
            },
            Err(Error::NoValidRate { ratio, .. }) => RateEntry {
                ratio_r: Some(*ratio),
                ..Self::MISSING
            },
            Err(_) => Self::MISSING,
        }
    }
}

/// Rates of one scheme at one refinement ratio, in the three orderings.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub scheme: SchemeKind,
    pub r: Rational64,
    /// Indexed like [`Ordering::ALL`].
    pub entries: [RateEntry; 3],
}

impl TableRow {
    pub fn sigma(&self, ordering: Ordering) -> Option<f64> {
        self.entries[ordering as usize].sigma
    }

    pub fn sigma_successive(&self) -> Option<f64> {
        self.sigma(Ordering::Successive)
    }

    pub fn sigma_wide_middle(&self) -> Option<f64> {
        self.sigma(Ordering::WideMiddle)
    }

    pub fn sigma_coarse_middle(&self) -> Option<f64> {
        self.sigma(Ordering::CoarseMiddle)
    }
}

/// Result of a jump-table sweep. Rows whose runs failed carry the error instead.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpTable {
    pub base_n_points: usize,
    pub rows: Vec<std::result::Result<TableRow, (SchemeKind, Rational64, Error)>>,
}

impl JumpTable {
    pub fn ok_rows(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn row(&self, scheme: SchemeKind, r: Rational64) -> Option<&TableRow> {
        self.ok_rows().find(|row| row.scheme == scheme && row.r == r)
    }

    pub fn first_error(&self) -> Option<&Error> {
        self.rows.iter().find_map(|r| r.as_ref().err().map(|(_, _, e)| e))
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(self.ok_rows())
    }

    /// Human-readable table, one block per scheme, rates rounded half-even to two
    /// decimals.
    pub fn to_aligned(&self) -> String {
        let mut out = String::new();
        let mut schemes: Vec<SchemeKind> = Vec::new();
        for row in &self.rows {
            let s = match row {
                Ok(r) => r.scheme,
                Err((s, _, _)) => *s,
            };
            if !schemes.contains(&s) {
                schemes.push(s);
            }
        }
        for scheme in schemes {
            let _ = writeln!(out, "{scheme} (N = {})", self.base_n_points);
            let _ = writeln!(
                out,
                "{:>6}  {:>12}  {:>12}  {:>13}",
                "r", "successive", "wide_middle", "coarse_middle"
            );
            for row in &self.rows {
                match row {
                    Ok(row) if row.scheme == scheme => {
                        let cell = |o: Ordering| match row.sigma(o) {
                            Some(s) => format!("{:.2}", round2(s)),
                            None => "--".to_string(),
                        };
                        let _ = writeln!(
                            out,
                            "{:>6}  {:>12}  {:>12}  {:>13}",
                            row.r.to_string(),
                            cell(Ordering::Successive),
                            cell(Ordering::WideMiddle),
                            cell(Ordering::CoarseMiddle)
                        );
                    }
                    Err((s, r, e)) if *s == scheme => {
                        let _ = writeln!(out, "{:>6}  failed: {e}", r.to_string());
                    }
                    _ => {}
                }
            }
            out.push('\n');
        }
        out
    }
}

pub const TABLE_CSV_HEADER: &str = "scheme,r,ordering,R,sigma,residual,multiple_roots";

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// Long-format CSV, one line per (scheme, r, ordering).
pub fn rows_to_csv<'a>(rows: impl IntoIterator<Item = &'a TableRow>) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        for o in Ordering::ALL {
            let e = &row.entries[o as usize];
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.scheme,
                row.r,
                o,
                fmt_opt(e.ratio_r),
                fmt_opt(e.sigma),
                fmt_opt(e.residual),
                e.multiple_roots
            );
        }
    }
    out
}

/// Inverse of [`rows_to_csv`].
pub fn rows_from_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == TABLE_CSV_HEADER => {}
        other => return Err(Error::Parse(format!("bad header {other:?}"))),
    }
    let parse_opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        }
    };
    let mut rows: Vec<TableRow> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::Parse(format!("line {}: expected 7 fields", lineno + 2)));
        }
        let scheme: SchemeKind = f[0].parse()?;
        let r = parse_ratio(f[1])?;
        let ordering: Ordering = f[2].parse()?;
        let entry = RateEntry {
            ratio_r: parse_opt(f[3])?,
            sigma: parse_opt(f[4])?,
            residual: parse_opt(f[5])?,
            multiple_roots: f[6]
                .parse()
                .map_err(|_| Error::Parse(format!("bad flag {:?}", f[6])))?,
        };
        let idx = match rows.iter().position(|row| row.scheme == scheme && row.r == r) {
            Some(i) => i,
            None => {
                rows.push(TableRow {
                    scheme,
                    r,
                    entries: [RateEntry::MISSING; 3],
                });
                rows.len() - 1
            }
        };
        rows[idx].entries[ordering as usize] = entry;
    }
    Ok(rows)
}

/// Interval count after `level` refinements by `r` (`level` in 0..=2).
pub fn refined_intervals(base_intervals: u64, r: Rational64, level: u32) -> Result<u64> {
    let (p, q) = (*r.numer() as u64, *r.denom() as u64);
    let num = base_intervals * q.pow(level);
    let den = p.pow(level);
    if num % den != 0 {
        return Err(Error::Divisibility {
            intervals: base_intervals,
            ratio: r.to_string(),
        });
    }
    Ok(num / den)
}

/// Integrates the jump problem of `config` for `scheme` on a grid of `intervals`
/// intervals.
pub fn run_jump(config: &ExperimentConfig, scheme: SchemeKind, intervals: usize) -> Result<GridFunction1D> {
    let spec = SchemeSpec::new(scheme, config.lambda, config.a)?;
    let grid = Grid1D::with_intervals(config.x_left, config.x_right, intervals)?;
    let u0 = make_jump_function(grid, config.ic);
    integrate_to(&u0, &spec, config.t_final)
}

/// Every (scheme, ratio) row of the sweep. Each distinct grid is integrated once, in
/// parallel; the rows come back in config order.
pub fn run_jump_table(config: &ExperimentConfig) -> Result<JumpTable> {
    config.validate()?;
    let base = (config.base_n_points - 1) as u64;
    let mut needed = BTreeSet::new();
    for &scheme in &config.schemes {
        for &r in &config.ratios {
            for level in 0..3 {
                needed.insert((scheme, refined_intervals(base, r, level)?));
            }
        }
    }
    let runs: HashMap<(SchemeKind, u64), Result<GridFunction1D>> = needed
        .into_par_iter()
        .map(|key| (key, run_jump(config, key.0, key.1 as usize)))
        .collect();

    let mut rows = Vec::new();
    for &scheme in &config.schemes {
        for &r in &config.ratios {
            let row = (|| -> Result<TableRow> {
                let snap = |level| -> Result<&GridFunction1D> {
                    let n = refined_intervals(base, r, level)?;
                    runs[&(scheme, n)].as_ref().map_err(Clone::clone)
                };
                let (u1, u2, u3) = (snap(0)?, snap(1)?, snap(2)?);
                let est = estimate_all_orderings(u1, u2, u3, ratio_f64(r))?;
                Ok(TableRow {
                    scheme,
                    r,
                    entries: est.estimates.each_ref().map(RateEntry::from_result),
                })
            })();
            rows.push(row.map_err(|e| (scheme, r, e)));
        }
    }
    Ok(JumpTable {
        base_n_points: config.base_n_points,
        rows,
    })
}

pub fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smooth periodic order check for each configured scheme.
pub fn run_smooth_table(config: &ExperimentConfig) -> Result<Vec<SmoothOrders>> {
    config.validate()?;
    config
        .schemes
        .par_iter()
        .map(|&kind| {
            let spec = SchemeSpec::new(kind, config.lambda, config.a)?;
            smooth_convergence_order(&spec, &SMOOTH_RESOLUTIONS, config.t_final)
        })
        .collect()
}

pub const SMOOTH_CSV_HEADER: &str = "scheme,n,error,order";

/// One line per resolution; `order` compares with the previous line and is empty on
/// the coarsest.
pub fn smooth_to_csv(results: &[SmoothOrders]) -> String {
    let mut out = String::from(SMOOTH_CSV_HEADER);
    out.push('\n');
    for s in results {
        for (k, (&n, &err)) in s.resolutions.iter().zip(&s.errors).enumerate() {
            let order = if k == 0 { None } else { Some(s.orders[k - 1]) };
            let _ = writeln!(out, "{},{n},{err:.16e},{}", s.scheme, fmt_opt(order));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refined_interval_counts() {
        let r = Rational64::new(2, 5);
        assert_eq!(refined_intervals(12800, r, 0).unwrap(), 12800);
        assert_eq!(refined_intervals(12800, r, 1).unwrap(), 32000);
        assert_eq!(refined_intervals(12800, r, 2).unwrap(), 80000);
        assert!(matches!(
            refined_intervals(12802, r, 2),
            Err(Error::Divisibility { intervals: 12802, .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let row = TableRow {
            scheme: SchemeKind::Godunov2,
            r: Rational64::new(2, 7),
            entries: [
                RateEntry {
                    ratio_r: Some(std::f64::consts::PI),
                    sigma: Some(2.0 / 3.0),
                    residual: Some(-1.1e-17),
                    multiple_roots: false,
                },
                RateEntry {
                    ratio_r: Some(0.3),
                    ..RateEntry::MISSING
                },
                RateEntry {
                    ratio_r: Some(1e-300),
                    sigma: Some(-0.1),
                    residual: Some(0.0),
                    multiple_roots: true,
                },
            ],
        };
        let csv = rows_to_csv([&row]);
        assert_eq!(rows_from_csv(&csv).unwrap(), vec![row]);
    }

    #[test]
    fn small_table_runs() {
        let config = ExperimentConfig {
            schemes: vec![SchemeKind::Upwind1],
            base_n_points: 401,
            ratios: vec![Rational64::new(1, 2)],
            ..ExperimentConfig::default()
        };
        let table = run_jump_table(&config).unwrap();
        let row = table.row(SchemeKind::Upwind1, Rational64::new(1, 2)).unwrap();
        for o in Ordering::ALL {
            assert!((row.sigma(o).unwrap() - 0.5).abs() < 0.05);
        }
        assert!(table.to_aligned().contains("0.50"));
    }
}
