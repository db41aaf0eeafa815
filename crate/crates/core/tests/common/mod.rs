//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `1F2(a; b1, b2; z)` summed exactly over `terms` terms in rational arithmetic.
pub fn hyp1f2_exact(a: &BigRational, b1: &BigRational, b2: &BigRational, z: &BigRational, terms: usize) -> f64 {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..terms {
        sum += &term;
        let kq = BigRational::from_integer(BigInt::from(k));
        term = term * (a + &kq) * z / ((b1 + &kq) * (b2 + &kq) * (&kq + BigRational::one()));
    }
    sum.to_f64().unwrap()
}

/// `int_0^t f` and `int_0^t g` for the two Maclaurin solutions of `y'' = x y`,
/// `f(0) = 1, f'(0) = 0` and `g(0) = 0, g'(0) = 1`, summed exactly.
fn airy_primitive_parts(t: &BigRational, terms: usize) -> (f64, f64) {
    let t3 = t * t * t;
    let mut f_int = BigRational::zero();
    let mut g_int = BigRational::zero();
    // Running t^{3k+1} / (3k+1)! and t^{3k+2} / (3k+2)!, with the integer products
    // prod_{j<k} (3j+1) and prod_{j<k} (3j+2).
    let mut pf = t.clone();
    let mut pg = t * t / BigRational::from_integer(BigInt::from(2));
    let mut c1 = BigInt::one();
    let mut c2 = BigInt::one();
    for k in 0..terms {
        f_int += &pf * BigRational::from_integer(c1.clone());
        g_int += &pg * BigRational::from_integer(c2.clone());
        let n = 3 * k as i64;
        pf = pf * &t3 / BigRational::from_integer(BigInt::from((n + 2) * (n + 3) * (n + 4)));
        pg = pg * &t3 / BigRational::from_integer(BigInt::from((n + 3) * (n + 4) * (n + 5)));
        c1 *= BigInt::from(n + 1);
        c2 *= BigInt::from(n + 2);
    }
    (f_int.to_f64().unwrap(), g_int.to_f64().unwrap())
}

/// `int_{-inf}^t Ai(s) ds` from the Maclaurin series of the Airy function.
pub fn airy_integral(t: &BigRational) -> f64 {
    let gamma_13 = libm::tgamma(1.0 / 3.0);
    let gamma_23 = libm::tgamma(2.0 / 3.0);
    let ai0 = 1.0 / (3f64.powf(2.0 / 3.0) * gamma_23);
    let dai0 = -1.0 / (3f64.cbrt() * gamma_13);
    let (fi, gi) = airy_primitive_parts(t, 120);
    2.0 / 3.0 + ai0 * fi + dai0 * gi
}

/// Second-order jump profile written through the Airy integral,
/// `-1 + 2 int_{-inf}^{xi / 3^(1/3)} Ai`, at `xi = 3^(1/3) t`.
pub fn airy_jump(t: &BigRational) -> f64 {
    -1.0 + 2.0 * airy_integral(t)
}

/// `int |erf(chi) - erf(c chi)| dchi` over the real line, `c > 1`.
pub fn erf_gap_integral(c: f64) -> f64 {
    2.0 / std::f64::consts::PI.sqrt() * (1.0 - 1.0 / c)
}
