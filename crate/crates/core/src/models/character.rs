//! Dirichlet characters from the structure of `(Z/qZ)^*`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModelError;

/// Cyclic factor of `(Z/qZ)^*`: its order and the discrete log of each
/// residue mod `q` (`None` when not coprime).
struct CyclicFactor {
    order: u64,
    log: Vec<Option<u64>>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Generator of the cyclic group `(Z/p^e)^*`, `p` odd.
fn primitive_root(p: u64, e: u32) -> u64 {
    let phi = p - 1;
    let factors: Vec<u64> = factorize(phi).into_iter().map(|f| f.0).collect();
    let g = (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, p) != 1)).unwrap_or(1);
    if e > 1 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// Discrete-log tables of a cyclic subgroup generated by `g` in `Z/m`, pulled
/// back to residues mod `q` through `r ↦ r mod m`.
fn cyclic_logs(g: u64, order: u64, m: u64, q: u64, sign_split: bool) -> Vec<Option<u64>> {
    let mut table = vec![None; m as usize];
    let mut x = 1 % m;
    for k in 0..order {
        table[x as usize] = Some(k);
        if sign_split {
            // 2^e with e ≥ 3: −g^k carries the same exponent
            table[((m - x) % m) as usize] = Some(k);
        }
        x = x * g % m;
    }
    (0..q).map(|r| if gcd(r, q) == 1 { table[(r % m) as usize] } else { None }).collect()
}

fn factors_of(q: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, e) in factorize(q) {
        let m = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(CyclicFactor { order: 2, log: cyclic_logs(3, 2, 4, q, false) }),
                _ => {
                    // −1 component
                    let log = (0..q).map(|r| (gcd(r, q) == 1).then_some(if r % 4 == 1 { 0 } else { 1 })).collect();
                    out.push(CyclicFactor { order: 2, log });
                    let order = m / 4;
                    out.push(CyclicFactor { order, log: cyclic_logs(5, order, m, q, true) });
                }
            }
        } else {
            let order = m / p * (p - 1);
            let g = primitive_root(p, e);
            out.push(CyclicFactor { order, log: cyclic_logs(g, order, m, q, false) });
        }
    }
    out
}

/// A Dirichlet character modulo `q` with its value table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub index: u64,
    pub values: Vec<Complex64>,
}

impl DirichletCharacter {
    /// Character number `index` in mixed-radix order over the cyclic factors
    /// of `(Z/qZ)^*`; index 0 is the principal character.
    pub fn new(modulus: u64, index: u64) -> Result<Self, ModelError> {
        if modulus == 0 || modulus > 100_000 {
            return Err(ModelError::InvalidCharacter(format!("modulus {modulus} out of range 1..=100000")));
        }
        let factors = factors_of(modulus);
        let count: u64 = factors.iter().map(|f| f.order).product();
        if index >= count {
            return Err(ModelError::InvalidCharacter(format!(
                "index {index} not below the number of characters {count}"
            )));
        }
        let mut digits = Vec::with_capacity(factors.len());
        let mut rest = index;
        for f in &factors {
            digits.push(rest % f.order);
            rest /= f.order;
        }
        let values = (0..modulus)
            .map(|r| {
                if gcd(r, modulus) != 1 {
                    return Complex64::new(0.0, 0.0);
                }
                // combined phase as an exact rational turn to avoid drift
                let mut turn = 0.0;
                for (f, d) in factors.iter().zip(&digits) {
                    let l = f.log[r as usize].expect("coprime residue has a log");
                    turn += ((d * l) % f.order) as f64 / f.order as f64;
                }
                unit(turn)
            })
            .collect();
        Ok(Self { modulus, index, values })
    }

    pub fn principal(modulus: u64) -> Self {
        Self::new(modulus, 0).expect("principal character exists")
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }
}

/// `e^{2πi·turn}` with exact values at quarter turns.
fn unit(turn: f64) -> Complex64 {
    let t = turn.fract();
    let q = t * 4.0;
    if q.fract() == 0.0 {
        return match q as u32 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(q: u64) -> u64 {
        (1..=q).filter(|&r| gcd(r, q) == 1).count() as u64
    }

    #[test]
    fn chi4_values() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        assert_eq!(chi.value(1), Complex64::new(1.0, 0.0));
        assert_eq!(chi.value(3), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.value(2), Complex64::new(0.0, 0.0));
        assert!(chi.is_real());
    }

    #[test]
    fn character_count_is_phi() {
        for q in 1..=40 {
            assert!(DirichletCharacter::new(q, phi(q) - 1).is_ok());
            assert!(DirichletCharacter::new(q, phi(q)).is_err());
        }
    }

    #[test]
    fn multiplicative_periodic_roots_of_unity() {
        for q in [5u64, 8, 9, 12, 15, 16, 21, 32] {
            let n = phi(q);
            for idx in 0..n {
                let chi = DirichletCharacter::new(q, idx).unwrap();
                for a in 0..q {
                    assert_eq!(chi.value(a), chi.value(a + q));
                    for b in 0..q {
                        let lhs = chi.value(a * b);
                        assert!((lhs - chi.value(a) * chi.value(b)).norm() < 1e-12, "q={q} idx={idx}");
                    }
                    if gcd(a, q) == 1 {
                        assert!((chi.value(a).powu(n as u32) - 1.0).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn characters_are_distinct_and_orthogonal() {
        let q = 24;
        let chars: Vec<_> = (0..phi(q)).map(|i| DirichletCharacter::new(q, i).unwrap()).collect();
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let ip: Complex64 = (0..q).map(|r| a.value(r) * b.value(r).conj()).sum();
                let expected = if i == j { phi(q) as f64 } else { 0.0 };
                assert!((ip - expected).norm() < 1e-10);
            }
        }
    }
}
