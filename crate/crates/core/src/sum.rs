//! Compensated (Kahan–Babuška–Neumaier) summation.

use num_complex::Complex64;

use crate::jet::{Jet, JET_LEN};

/// Neumaier's variant of Kahan summation for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values; real and imaginary parts
/// are compensated independently.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Compensated accumulator for [`Jet`] values (one complex accumulator per
/// Taylor coefficient).
#[derive(Debug, Clone, Copy, Default)]
pub struct JetSum {
    parts: [ComplexSum; JET_LEN],
}

impl JetSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, j: &Jet) {
        for (acc, c) in self.parts.iter_mut().zip(j.coeffs.iter()) {
            acc.add(*c);
        }
    }

    /// Adds `scale * e^{-lambda s}`-style terms given directly by their
    /// coefficient list.
    #[inline]
    pub fn add_coeffs(&mut self, coeffs: &[Complex64; JET_LEN]) {
        for (acc, c) in self.parts.iter_mut().zip(coeffs.iter()) {
            acc.add(*c);
        }
    }

    pub fn total(&self) -> Jet {
        let mut coeffs = [Complex64::new(0.0, 0.0); JET_LEN];
        for (c, acc) in coeffs.iter_mut().zip(self.parts.iter()) {
            *c = acc.total();
        }
        Jet { coeffs }
    }
}

/// Compensated sum of a sequence of complex numbers.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let mut acc = ComplexSum::new();
    for z in iter {
        acc.add(z);
    }
    acc.total()
}

/// Compensated sum of a sequence of reals.
pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in iter {
        acc.add(x);
    }
    acc.total()
}
