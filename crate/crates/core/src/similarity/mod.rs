//! Modified-equation similarity solutions for the advected jump.
//!
//! Truncating the modified equation of a `p`-th order scheme after its leading error
//! term leaves `U_t = kappa U_{(p+1)x}` in the frame moving with the wave, whose
//! jump solution depends on `xi = z / (kappa t)^(1/(p+1))` only. Writing it as
//! `(u_L + u_R)/2 + (u_R - u_L)/2 * S(xi)` isolates a profile `S` running from -1 to 1.
//! Because spacing enters only through `kappa ~ h^p`, comparing two resolutions
//! amounts to comparing `S(chi)` with `S(chi * (h_a/h_b)^(1/(p+1)))`.

pub mod hypergeometric;
pub mod quadrature;

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::grid::JumpIC;
use crate::schemes::{SchemeKind, SchemeSpec};

pub use hypergeometric::{hyp1f2, hyp1f2_unchecked, SeriesValue};
use quadrature::{integrate, QuadOptions};

/// Largest absolute error accepted from a closed-form profile evaluation.
pub const PROFILE_ABS_TOL: f64 = 1e-8;

/// Quadrature tails must stay below this fraction of the integral.
pub const TAIL_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// `S(xi) = erf(xi / 2)`: first-order upwind, diffusive modified equation.
    Erf,
    /// Closed form for the unlimited second-order scheme (dispersive, Airy-type).
    Godunov2,
}

/// A normalized jump profile `S(xi)` with the region where it can be trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityProfile {
    pub kind: ProfileKind,
    pub order_p: u32,
    pub xi_domain: (f64, f64),
    /// Signed coefficient of the leading modified-equation term, when known.
    pub kappa_scale: Option<f64>,
    pub t_final: Option<f64>,
    pub ic: JumpIC,
}

impl SimilarityProfile {
    /// The second-order profile in the normalized variable, for `u_L = -1, u_R = 1`.
    pub fn godunov2() -> Self {
        Self {
            kind: ProfileKind::Godunov2,
            order_p: 2,
            xi_domain: godunov2_trust_region(),
            kappa_scale: None,
            t_final: None,
            ic: JumpIC::default(),
        }
    }

    /// Normalized profile, -1 on the far left and +1 on the far right.
    pub fn s(&self, xi: f64) -> Result<f64> {
        match self.kind {
            ProfileKind::Erf => Ok(libm::erf(0.5 * xi)),
            ProfileKind::Godunov2 => godunov2_profile(xi),
        }
    }

    /// Physical state `(u_L + u_R)/2 + (u_R - u_L)/2 * S(xi)`.
    pub fn value(&self, xi: f64) -> Result<f64> {
        let (ul, ur) = (self.ic.u_left(), self.ic.u_right());
        Ok(0.5 * (ul + ur) + 0.5 * (ur - ul) * self.s(xi)?)
    }

    /// Similarity variable of the moving-frame coordinate `z = x - a t`; needs a
    /// known `kappa` and final time.
    pub fn xi_of_z(&self, z: f64) -> Result<f64> {
        match (self.kappa_scale, self.t_final) {
            (Some(k), Some(t)) => Ok(z / (k * t).powf(1.0 / (self.order_p as f64 + 1.0))),
            _ => Err(Error::DegenerateProfile("kappa and t_final are not known for this profile")),
        }
    }

    /// Solution of the truncated modified equation at `z = x - a t_final`.
    pub fn value_at_z(&self, z: f64) -> Result<f64> {
        self.value(self.xi_of_z(z)?)
    }

    pub fn trusts(&self, xi: f64) -> bool {
        xi >= self.xi_domain.0 && xi <= self.xi_domain.1
    }

    /// Upper bound on `int_X^inf |S(chi) - 1| dchi` (right) or the mirror image on the
    /// left, for `X` at the edge of the trusted domain. Infinite when the tail is not
    /// integrable.
    fn tail_integral_bound(&self, x: f64, right: bool) -> f64 {
        match self.kind {
            // int_X^inf erfc(xi/2) dxi = 2 ierfc(X/2)
            ProfileKind::Erf => {
                let y = 0.5 * x.abs();
                2.0 * ((-y * y).exp() / PI.sqrt() - y * libm::erfc(y))
            }
            ProfileKind::Godunov2 if right => {
                // 1 - S = 2 int_{xi/c}^inf Ai, c = 3^(1/3); bounded via the Airy
                // asymptote e^{-zeta} / (2 sqrt(pi) t^(3/4)), zeta = 2/3 t^(3/2).
                let c = 3f64.cbrt();
                let t = x / c;
                if t <= 1.0 {
                    return f64::INFINITY;
                }
                let zeta = 2.0 / 3.0 * t.powf(1.5);
                c * (-zeta).exp() / (PI.sqrt() * t.powf(1.25))
            }
            // Oscillatory side decays like |xi|^(-3/4): not integrable.
            ProfileKind::Godunov2 => f64::INFINITY,
        }
    }
}

/// Solution of the advection-diffusion modified equation of first-order upwind,
/// with viscosity `nu`, at time `t_final`.
pub fn erf_profile(nu: f64, t_final: f64, ic: JumpIC) -> Result<SimilarityProfile> {
    if nu == 0.0 {
        return Err(Error::DegenerateProfile(
            "zero viscosity: the solution is the exact jump",
        ));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::DegenerateProfile("viscosity must be positive"));
    }
    if !(t_final > 0.0) {
        return Err(Error::InvalidFinalTime(t_final));
    }
    Ok(SimilarityProfile {
        kind: ProfileKind::Erf,
        order_p: 1,
        xi_domain: (-40.0, 40.0),
        kappa_scale: Some(nu),
        t_final: Some(t_final),
        ic,
    })
}

/// Numerical viscosity `a h (1 - lambda) / 2` of first-order upwind.
pub fn upwind1_viscosity(spec: &SchemeSpec, h: f64) -> f64 {
    0.5 * spec.advection_speed() * h * (1.0 - spec.lambda())
}

/// [`erf_profile`] for an upwind run at spacing `h`.
pub fn erf_profile_for(spec: &SchemeSpec, h: f64, t_final: f64, ic: JumpIC) -> Result<SimilarityProfile> {
    erf_profile(upwind1_viscosity(spec, h), t_final, ic)
}

/// Predicted `||u_{h1} - u_{h2}||_1` between two first-order upwind solutions, the
/// L1 distance of their erf profiles:
/// `|u_R - u_L| (delta_1 - delta_2) / sqrt(pi)` with `delta = sqrt(4 nu t_f)`, i.e.
/// `sqrt(2 a t_f (1 - lambda) / pi) |u_R - u_L| (sqrt(h1) - sqrt(h2))`.
pub fn first_order_norm_gap(h_1: f64, h_2: f64, spec: &SchemeSpec, ic: JumpIC, t_final: f64) -> Result<f64> {
    if spec.kind() != SchemeKind::Upwind1 {
        return Err(Error::Config(format!(
            "closed-form gap holds for upwind1 only, got {}",
            spec.kind()
        )));
    }
    if !(h_1 >= h_2 && h_2 > 0.0) {
        return Err(Error::InvalidTriple(h_1, h_2, h_2));
    }
    let a = spec.advection_speed();
    let prefactor = (2.0 * a * t_final * (1.0 - spec.lambda()) / PI).sqrt();
    Ok(prefactor * ic.jump_size() * (h_1.sqrt() - h_2.sqrt()))
}

/// Mesh on which the trust region of [`godunov2_profile`] is located.
const TRUST_STEP: f64 = 0.125;

/// Widest interval around 0, on a [`TRUST_STEP`] mesh, on which [`godunov2_profile`]
/// evaluates without a precision-loss error.
pub fn godunov2_trust_region() -> (f64, f64) {
    static REGION: OnceLock<(f64, f64)> = OnceLock::new();
    *REGION.get_or_init(|| {
        let edge = |dir: f64| {
            let mut k = 1;
            while godunov2_profile(dir * k as f64 * TRUST_STEP).is_ok() {
                k += 1;
            }
            dir * (k - 1) as f64 * TRUST_STEP
        };
        (edge(-1.0), edge(1.0))
    })
}

/// Closed-form similarity jump of the unlimited second-order scheme (`u_L = -1`,
/// `u_R = 1`):
///
/// ```text
/// 1/3 - xi (xi sqrt(3) G^2 1F2(2/3; 4/3, 5/3; xi^3/27) - 4 pi 1F2(1/3; 2/3, 4/3; xi^3/27)) / (6 G pi)
/// ```
///
/// with `G = Gamma(2/3)`. The two series grow like `e^{|xi|}` and cancel; evaluation
/// fails with [`Error::PrecisionLoss`] once the estimated error of the result exceeds
/// [`PROFILE_ABS_TOL`].
pub fn godunov2_profile(xi: f64) -> Result<f64> {
    let g = libm::tgamma(2.0 / 3.0);
    let z = xi * xi * xi / 27.0;
    let fa = hyp1f2(2.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0, z)?;
    let fb = hyp1f2(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, z)?;
    let denom = 6.0 * g * PI;
    let term_a = xi * xi * 3f64.sqrt() * g * g * fa.value / denom;
    let term_b = xi * 4.0 * PI * fb.value / denom;
    let value = 1.0 / 3.0 - term_a + term_b;

    let err = term_a.abs() * (fa.condition + 4.0) * 4.0 * f64::EPSILON
        + term_b.abs() * (fb.condition + 4.0) * 4.0 * f64::EPSILON
        + f64::EPSILON;
    if err > PROFILE_ABS_TOL {
        return Err(Error::PrecisionLoss {
            z,
            condition: err / f64::EPSILON,
        });
    }
    Ok(value)
}

/// Stretch factor `(h_a / h_b)^(1/(p+1))` relating two resolutions in the common
/// scaled frame.
pub fn stretch(h_a: f64, h_b: f64, order_p: u32) -> f64 {
    (h_a / h_b).powf(1.0 / (order_p as f64 + 1.0))
}

/// Scaled-frame comparison of two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledFrame {
    pub stretch: f64,
}

impl ScaledFrame {
    pub fn new(h_a: f64, h_b: f64, order_p: u32) -> Self {
        Self {
            stretch: stretch(h_a, h_b, order_p),
        }
    }

    /// `S(chi) - S(chi * stretch)`.
    pub fn difference(&self, profile: &SimilarityProfile, chi: f64) -> Result<f64> {
        Ok(profile.s(chi)? - profile.s(chi * self.stretch)?)
    }
}

/// Ratio of the two scaled-frame L1 integrals with their error bars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioQuadrature {
    pub ratio: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Quadrature error plus tail-truncation bound, propagated to the ratio.
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy)]
struct ScaledIntegral {
    value: f64,
    quad_error: f64,
    tail_bound: f64,
}

fn scaled_l1_integral(profile: &SimilarityProfile, c: f64) -> Result<ScaledIntegral> {
    // Both S(chi) and S(c chi) must be trusted; c > 1 makes c chi the binding one.
    let (lo, hi) = (profile.xi_domain.0 / c, profile.xi_domain.1 / c);
    let frame = ScaledFrame { stretch: c };
    // Profile values carry errors up to PROFILE_ABS_TOL, so ask for less than the
    // default relative accuracy.
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_intervals: 20_000,
    };
    let q = integrate(|chi| Ok(frame.difference(profile, chi)?.abs()), lo, hi, &[0.0], &opts)?;
    // |S(chi) - S(c chi)| <= |S(chi) -+ 1| + |S(c chi) -+ 1|, and the tail of S(c chi)
    // beyond X integrates to (1/c) times the tail of S beyond c X.
    let tail = profile.tail_integral_bound(lo, false)
        + profile.tail_integral_bound(lo * c, false) / c
        + profile.tail_integral_bound(hi, true)
        + profile.tail_integral_bound(hi * c, true) / c;
    Ok(ScaledIntegral {
        value: q.value,
        quad_error: q.abs_error,
        tail_bound: tail,
    })
}

/// `int |S(chi) - S(chi c_num)| dchi / int |S(chi) - S(chi c_den)| dchi`.
///
/// With equal stretches the two integrands are the same function, so truncation
/// errors cancel and the ratio is exact even for profiles with non-integrable tails.
/// Otherwise the tails must be bounded below [`TAIL_REL_TOL`] of each integral.
pub fn scaled_ratio_quadrature(
    profile: &SimilarityProfile,
    stretch_num: f64,
    stretch_den: f64,
) -> Result<RatioQuadrature> {
    for c in [stretch_num, stretch_den] {
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::InvalidStretch(c));
        }
    }
    let num = scaled_l1_integral(profile, stretch_num)?;
    let den = scaled_l1_integral(profile, stretch_den)?;
    let ratio = num.value / den.value;
    let quad_rel = num.quad_error / num.value + den.quad_error / den.value;
    if stretch_num == stretch_den {
        return Ok(RatioQuadrature {
            ratio,
            numerator: num.value,
            denominator: den.value,
            error_bound: quad_rel * ratio,
        });
    }
    let tail_rel = num.tail_bound / num.value + den.tail_bound / den.value;
    if !(tail_rel <= TAIL_REL_TOL) {
        return Err(Error::TruncationError {
            bound: tail_rel,
            tolerance: TAIL_REL_TOL,
        });
    }
    Ok(RatioQuadrature {
        ratio,
        numerator: num.value,
        denominator: den.value,
        error_bound: (quad_rel + tail_rel) * ratio,
    })
}

/// Samples `(chi, S(chi) - S(chi (h_a/h_b)^(1/(p+1))))` at `samples` evenly spaced
/// points of `[chi_min, chi_max]`.
pub fn scaled_frame_difference(
    profile: &SimilarityProfile,
    h_a: f64,
    h_b: f64,
    chi_range: (f64, f64),
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    let frame = ScaledFrame::new(h_a, h_b, profile.order_p);
    sample(chi_range, samples, |chi| frame.difference(profile, chi))
}

/// Samples `(z, S(z / h_a^q) - S(z / h_b^q))`, `q = p/(p+1)`: the two solutions in the
/// unscaled moving frame with the spacing normalised so that `h = 1` gives `xi = z`.
pub fn frame_difference(
    profile: &SimilarityProfile,
    h_a: f64,
    h_b: f64,
    z_range: (f64, f64),
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    let q = profile.order_p as f64 / (profile.order_p as f64 + 1.0);
    let (sa, sb) = (h_a.powf(q), h_b.powf(q));
    sample(z_range, samples, |z| Ok(profile.s(z / sa)? - profile.s(z / sb)?))
}

/// Samples `(xi, S(xi))`.
pub fn tabulate_profile(profile: &SimilarityProfile, xi_range: (f64, f64), samples: usize) -> Result<Vec<(f64, f64)>> {
    sample(xi_range, samples, |xi| profile.s(xi))
}

fn sample(range: (f64, f64), samples: usize, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = range;
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            Ok((x, f(x)?))
        })
        .collect()
}

/// `header` followed by `x,value` rows at 17 significant digits.
pub fn samples_to_csv(header: &str, rows: &[(f64, f64)]) -> String {
    use std::fmt::Write as _;
    let mut out = String::with_capacity(48 * rows.len() + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for (x, v) in rows {
        let _ = writeln!(out, "{x:.16e},{v:.16e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_profile_basics() {
        let ic = JumpIC::new(-1.0, 3.0).unwrap();
        let p = erf_profile(0.01, 2.0, ic).unwrap();
        assert_eq!(p.value(0.0).unwrap(), 1.0);
        assert!((p.value(1e3).unwrap() - 3.0).abs() < 1e-15);
        assert!((p.value(-1e3).unwrap() + 1.0).abs() < 1e-15);
        // Physical frame: erf(z / sqrt(4 nu t)).
        let z = 0.05;
        let want = 1.0 + 2.0 * libm::erf(z / (4.0f64 * 0.01 * 2.0).sqrt());
        assert!((p.value_at_z(z).unwrap() - want).abs() < 1e-15);
        assert!(matches!(erf_profile(0.0, 2.0, ic), Err(Error::DegenerateProfile(_))));
    }

    #[test]
    fn unit_cfl_has_no_viscosity() {
        let s = SchemeSpec::new(SchemeKind::Upwind1, 1.0, 1.0).unwrap();
        assert!(erf_profile_for(&s, 0.01, 2.0, JumpIC::default()).is_err());
    }

    #[test]
    fn gap_examples() {
        let s = SchemeSpec::new(SchemeKind::Upwind1, 0.6, 1.0).unwrap();
        let ic = JumpIC::default();
        assert_eq!(first_order_norm_gap(0.1, 0.1, &s, ic, 2.0).unwrap(), 0.0);
        let h = 2.0 * PI / 12800.0;
        let g1 = first_order_norm_gap(h, h / 2.0, &s, ic, 2.0).unwrap();
        let g2 = first_order_norm_gap(h / 2.0, h / 4.0, &s, ic, 2.0).unwrap();
        assert!((g1 / g2 - 2f64.sqrt()).abs() < 1e-12);
        let want = (2.0f64 * 2.0 * 0.4 / PI).sqrt() * 2.0 * (h.sqrt() - (h / 2.0).sqrt());
        assert!((g1 - want).abs() < 1e-16);
        let s2 = SchemeSpec::new(SchemeKind::Godunov2, 0.6, 1.0).unwrap();
        assert!(first_order_norm_gap(h, h / 2.0, &s2, ic, 2.0).is_err());
    }

    #[test]
    fn godunov2_center_value() {
        assert!((godunov2_profile(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn godunov2_precision_loss_outside_trust() {
        let (lo, hi) = godunov2_trust_region();
        assert!(lo < -10.0 && hi > 10.0, "{lo} {hi}");
        assert!(godunov2_profile(lo).is_ok() && godunov2_profile(hi).is_ok());
        assert!(godunov2_profile(lo - TRUST_STEP).is_err());
        assert!(godunov2_profile(hi + TRUST_STEP).is_err());
        assert!(matches!(godunov2_profile(30.0), Err(Error::PrecisionLoss { .. })));
        assert!(matches!(godunov2_profile(-30.0), Err(Error::PrecisionLoss { .. })));
    }

    #[test]
    fn stretch_rejects_compression() {
        let p = SimilarityProfile::godunov2();
        assert!(matches!(scaled_ratio_quadrature(&p, 0.9, 1.2), Err(Error::InvalidStretch(_))));
        assert!(matches!(scaled_ratio_quadrature(&p, 1.0, 1.2), Err(Error::InvalidStretch(_))));
    }

    #[test]
    fn dispersive_tail_cannot_be_truncated() {
        let p = SimilarityProfile::godunov2();
        assert!(matches!(
            scaled_ratio_quadrature(&p, 2f64.cbrt(), 4f64.cbrt()),
            Err(Error::TruncationError { .. })
        ));
    }

    #[test]
    fn csv_header() {
        let csv = samples_to_csv("xi,value", &[(0.0, 0.5)]);
        assert_eq!(csv, "xi,value\n0.0000000000000000e0,5.0000000000000000e-1\n");
    }
}
