//! Truncated Taylor jets over `Complex64`.
//!
//! A [`Jet`] carries the Taylor coefficients `c_0 .. c_4` of an analytic
//! function at a point, so evaluating a formula on `Jet::variable(s)` yields
//! the value and the first four derivatives at `s` in one pass. All targets
//! in [`crate::models`] are written against this type, which is how
//! `f'`, `f''` and `f'''` stay analytic instead of finite-differenced.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub const JET_LEN: usize = 5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub coeffs: [Complex64; JET_LEN],
}

impl Jet {
    pub fn constant(c: Complex64) -> Self {
        let mut coeffs = [ZERO; JET_LEN];
        coeffs[0] = c;
        Jet { coeffs }
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    /// The identity function `s ↦ s` expanded at `s`.
    pub fn variable(s: Complex64) -> Self {
        let mut coeffs = [ZERO; JET_LEN];
        coeffs[0] = s;
        coeffs[1] = ONE;
        Jet { coeffs }
    }

    /// Jet of `x^{-s}` (`x > 0`) multiplied by `scale`, expanded at `s`.
    /// This is the hot path for every Dirichlet-type sum.
    #[inline]
    pub fn scaled_power(scale: Complex64, ln_x: f64, s: Complex64) -> Self {
        let e = scale * (-s * ln_x).exp();
        let mut coeffs = [ZERO; JET_LEN];
        let mut fac = 1.0;
        let mut pow = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                fac *= k as f64;
                pow *= -ln_x;
            }
            *c = e * (pow / fac);
        }
        Jet { coeffs }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    #[inline]
    pub fn d1(&self) -> Complex64 {
        self.coeffs[1]
    }

    #[inline]
    pub fn d2(&self) -> Complex64 {
        self.coeffs[2] * 2.0
    }

    #[inline]
    pub fn d3(&self) -> Complex64 {
        self.coeffs[3] * 6.0
    }

    /// Jet of the derivative. The top coefficient is unknown and set to NaN.
    pub fn derivative(&self) -> Self {
        let mut coeffs = [Complex64::new(f64::NAN, f64::NAN); JET_LEN];
        for k in 0..JET_LEN - 1 {
            coeffs[k] = self.coeffs[k + 1] * (k + 1) as f64;
        }
        Jet { coeffs }
    }

    /// Given the jet of `g` at `1 - s`, returns the jet of `s ↦ g(1 - s)` at `s`.
    pub fn reflected(&self) -> Self {
        let mut out = *self;
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= k;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs[..JET_LEN - 1].iter().all(|c| c.is_finite())
    }

    /// Applies an analytic scalar function given its derivatives at `c_0`.
    pub(crate) fn compose(&self, derivs: [Complex64; JET_LEN]) -> Self {
        let mut delta = *self;
        delta.coeffs[0] = ZERO;
        let mut out = Jet::constant(derivs[0]);
        let mut power = Jet::constant(ONE);
        let mut fac = 1.0;
        for (k, d) in derivs.iter().enumerate().skip(1) {
            fac *= k as f64;
            power = power * delta;
            out += power.scale(*d / fac);
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.coeffs[0].exp();
        self.compose([e; JET_LEN])
    }

    pub fn ln(&self) -> Self {
        let u = self.coeffs[0];
        let r = u.inv();
        let r2 = r * r;
        self.compose([u.ln(), r, -r2, r2 * r * 2.0, -r2 * r2 * 6.0])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.coeffs[0].sin(), self.coeffs[0].cos());
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.coeffs[0].sin(), self.coeffs[0].cos());
        self.compose([c, -s, -c, s, c])
    }

    pub fn recip(&self) -> Self {
        let r = self.coeffs[0].inv();
        let mut out = [ZERO; JET_LEN];
        out[0] = r;
        for k in 1..JET_LEN {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * r;
        }
        Jet { coeffs: out }
    }

    /// `(e^u - 1) / u`, stable for small `u`.
    pub fn exprel(&self) -> Self {
        let u0 = self.coeffs[0];
        if u0.norm() < 1e-2 {
            // sum of u^k / (k+1)!
            let mut out = Jet::constant(ONE);
            let mut term = Jet::constant(ONE);
            let mut fac = 1.0;
            for k in 1..=9 {
                fac *= (k + 1) as f64;
                term = term * *self;
                out += term.scale(Complex64::new(1.0 / fac, 0.0));
            }
            out
        } else {
            (self.exp() - Jet::constant(ONE)) / *self
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += *b;
        }
        self
    }
}

impl AddAssign for Jet {
    #[inline]
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= *b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-ONE)
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [ZERO; JET_LEN];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate().take(JET_LEN - i) {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Add<Complex64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Complex64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<Complex64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Complex64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn exp_of_variable_has_all_derivatives_equal() {
        let s = c(0.3, -1.2);
        let j = Jet::variable(s).exp();
        let e = s.exp();
        assert!(close(j.value(), e, 1e-15));
        assert!(close(j.d1(), e, 1e-15));
        assert!(close(j.d2(), e, 1e-15));
        assert!(close(j.d3(), e, 1e-15));
    }

    #[test]
    fn ln_inverts_exp() {
        let s = c(0.7, 0.4);
        let j = Jet::variable(s).exp().ln();
        assert!(close(j.value(), s, 1e-15));
        assert!(close(j.d1(), c(1.0, 0.0), 1e-15));
        assert!(j.d2().norm() < 1e-14);
        assert!(j.d3().norm() < 1e-13);
    }

    #[test]
    fn recip_matches_closed_form() {
        // 1/s: derivatives -1/s^2, 2/s^3, -6/s^4
        let s = c(1.5, 2.0);
        let j = Jet::variable(s).recip();
        assert!(close(j.d1(), -(s * s).inv(), 1e-14));
        assert!(close(j.d2(), (s * s * s).inv() * 2.0, 1e-14));
        assert!(close(j.d3(), -(s * s * s * s).inv() * 6.0, 1e-14));
    }

    #[test]
    fn scaled_power_matches_exp_route() {
        let s = c(0.5, 14.0);
        let ln3 = 3f64.ln();
        let a = Jet::scaled_power(c(2.0, 1.0), ln3, s);
        let b = (Jet::variable(s) * (-ln3)).exp().scale(c(2.0, 1.0));
        for k in 0..JET_LEN {
            assert!(close(a.coeffs[k], b.coeffs[k], 1e-14));
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let s = Jet::variable(c(0.2, 0.9));
        let one = s.sin() * s.sin() + s.cos() * s.cos();
        assert!(close(one.value(), c(1.0, 0.0), 1e-15));
        for k in 1..JET_LEN {
            assert!(one.coeffs[k].norm() < 1e-14);
        }
    }

    #[test]
    fn exprel_is_continuous_across_branch() {
        for &u in &[c(0.0099, 0.0), c(0.0101, 0.0), c(0.0, 0.0), c(-3e-3, 4e-3)] {
            let j = Jet::variable(u).exprel();
            let exact = if u.norm() == 0.0 { c(1.0, 0.0) } else { (u.exp() - 1.0) / u };
            assert!(close(j.value(), exact, 1e-13), "{u}");
            // d/du exprel(u) at 0 is 1/2
            if u.norm() == 0.0 {
                assert!(close(j.d1(), c(0.5, 0.0), 1e-15));
            }
        }
    }

    #[test]
    fn reflection_flips_odd_coefficients() {
        // g(w) = w^2 at w = 1 - s; d/ds g(1-s) = -2(1-s)
        let s = c(0.25, 3.0);
        let w = Jet::variable(c(1.0, 0.0) - s);
        let g = (w * w).reflected();
        assert!(close(g.d1(), -(c(1.0, 0.0) - s) * 2.0, 1e-15));
        assert!(close(g.d2(), c(2.0, 0.0), 1e-15));
    }
}
