//! Log-gamma for complex arguments (Lanczos, g = 7, n = 9) in jet form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::jet::Jet;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(z: Jet) -> Jet {
    let zm1 = z - Complex64::new(1.0, 0.0);
    let mut x = Jet::real(LANCZOS_COEFFS[0]);
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += (zm1 + Complex64::new(i as f64, 0.0)).recip() * p;
    }
    let t = zm1 + Complex64::new(LANCZOS_G + 0.5, 0.0);
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    Jet::real(half_ln_2pi) + (zm1 + Complex64::new(0.5, 0.0)) * t.ln() - t + x.ln()
}

/// `ln Γ(z)` on a jet. Uses the reflection formula for `Re z < 1/2`.
///
/// The branch of the logarithm is not the principal one; only `exp` of the
/// result (and its derivatives) is meaningful.
pub fn ln_gamma(z: Jet) -> Jet {
    if z.value().re < 0.5 {
        let one_minus = Jet::real(1.0) - z;
        let sin_pi_z = (z * PI).sin();
        Jet::real(PI.ln()) - sin_pi_z.ln() - ln_gamma_lanczos(one_minus)
    } else {
        ln_gamma_lanczos(z)
    }
}

/// `Γ(z)` for a plain complex argument.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(Jet::constant(z)).value().exp()
}
