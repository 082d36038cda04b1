//! Euler–Maclaurin evaluation of the Hurwitz zeta function on jets.

use num_complex::Complex64;

use crate::jet::Jet;
use crate::sum::JetSum;

/// `B_2, B_4, ..., B_24`.
pub const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Jet of `ζ(s, a)` at `s` using `n` direct terms and `k` Bernoulli
/// corrections (`k ≤ 12`).
///
/// With `drop_pole` the `1/(s-1)` part of `x^{1-s}/(s-1)` is omitted; the
/// remainder `-ln x · exprel((1-s) ln x)` is regular at `s = 1`. Callers use
/// this when the pole parts of several Hurwitz values cancel.
pub fn hurwitz_jet(s: Complex64, a: f64, n: usize, k: usize, drop_pole: bool) -> Jet {
    let mut acc = JetSum::new();
    for j in 0..n {
        let base = j as f64 + a;
        acc.add(&Jet::scaled_power(Complex64::new(1.0, 0.0), base.ln(), s));
    }
    let x = n as f64 + a;
    let ln_x = x.ln();
    let var = Jet::variable(s);
    let one = Complex64::new(1.0, 0.0);
    let x_pow = Jet::scaled_power(one, ln_x, s);

    let u = (Jet::real(1.0) - var) * ln_x;
    let regular = u.exprel() * (-ln_x);
    if drop_pole {
        acc.add(&regular);
    } else {
        acc.add(&(regular + (var - one).recip()));
    }
    acc.add(&(x_pow * 0.5));

    // (s)_{2m-1} x^{-s-2m+1}
    let mut poch = var;
    let mut x_inv = 1.0 / x;
    let mut fact = 2.0;
    for m in 1..=k.min(BERNOULLI_EVEN.len()) {
        let coeff = BERNOULLI_EVEN[m - 1] / fact * x_inv;
        acc.add(&(poch * x_pow * coeff));
        // (s)_{2m+1} = (s)_{2m-1} (s + 2m - 1)(s + 2m)
        poch = poch * (var + Complex64::new((2 * m - 1) as f64, 0.0)) * (var + Complex64::new((2 * m) as f64, 0.0));
        x_inv /= x * x;
        fact *= ((2 * m + 1) * (2 * m + 2)) as f64;
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_table_matches_generating_identity() {
        // Σ_{k} B_{2k} / (2k)! (2π)^{2k} (-1)^{k+1} / 2 = ζ(2k) recovers ζ(2) = π²/6
        let pi = std::f64::consts::PI;
        let z2 = BERNOULLI_EVEN[0] * (2.0 * pi).powi(2) / (2.0 * 2.0);
        assert!((z2 - pi * pi / 6.0).abs() < 1e-15);
        // ζ(12) from B_12
        let mut fact = 1.0;
        for j in 1..=12 {
            fact *= j as f64;
        }
        let z12 = -BERNOULLI_EVEN[5] * (2.0 * pi).powi(12) / (2.0 * fact);
        // mpmath: zeta(12) = 1.000246086553308
        assert!((z12 - 1.000_246_086_553_308).abs() < 1e-14);
    }

    #[test]
    fn hurwitz_at_half_relates_to_zeta() {
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        let s = Complex64::new(3.0, 1.0);
        let half = hurwitz_jet(s, 0.5, 50, 12, false).value();
        let one = hurwitz_jet(s, 1.0, 50, 12, false).value();
        let expected = (Complex64::new(2.0, 0.0).powc(s) - 1.0) * one;
        assert!((half - expected).norm() < 1e-13);
    }

    #[test]
    fn pole_split_is_consistent() {
        let s = Complex64::new(0.7, 2.0);
        let full = hurwitz_jet(s, 0.3, 40, 12, false);
        let dropped = hurwitz_jet(s, 0.3, 40, 12, true);
        let pole = (Jet::variable(s) - Complex64::new(1.0, 0.0)).recip();
        for k in 0..4 {
            assert!((full.coeffs[k] - dropped.coeffs[k] - pole.coeffs[k]).norm() < 1e-12);
        }
    }
}
