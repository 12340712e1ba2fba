use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactmath::lattice::frac;

/// Phase `c + Σ q_k t_k` in turns: a rational constant taken mod 1 plus a
/// rational combination of independent generic symbols `t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymPhase {
    constant: BigRational,
    coeffs: BTreeMap<usize, BigRational>,
}

impl SymPhase {
    pub fn zero() -> Self {
        SymPhase::default()
    }

    pub fn constant(c: BigRational) -> Self {
        SymPhase {
            constant: frac(&c),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn symbol(k: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, BigRational::one());
        SymPhase {
            constant: BigRational::zero(),
            coeffs,
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// Multiplies by a rational. Exact on the symbolic part; the constant is
    /// scaled from its representative in `[0,1)`, which is what solvers want
    /// when picking one particular solution.
    pub fn scale(&self, q: &BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let v = c * q;
            if !v.is_zero() {
                coeffs.insert(*k, v);
            }
        }
        SymPhase {
            constant: frac(&(&self.constant * q)),
            coeffs,
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Replaces symbol `k` by a phase.
    pub fn substitute(&self, k: usize, value: &SymPhase) -> Self {
        match self.coeffs.get(&k) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(&k);
                &rest + &value.scale(c)
            }
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, c) in &self.coeffs {
            let name = names.get(*k).cloned().unwrap_or_else(|| format!("t{k}"));
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(&name);
            } else if mag.numer().is_one() {
                out.push_str(&format!("{name}/{}", mag.denom()));
            } else {
                out.push_str(&format!("({mag})·{name}"));
            }
        }
        if !self.constant.is_zero() || out.is_empty() {
            if out.is_empty() {
                out = self.constant.to_string();
            } else {
                out.push_str(&format!(" + {}", self.constant));
            }
        }
        out
    }
}

impl Add for &SymPhase {
    type Output = SymPhase;

    fn add(self, rhs: &SymPhase) -> SymPhase {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &rhs.coeffs {
            let v = coeffs.remove(k).unwrap_or_else(BigRational::zero) + c;
            if !v.is_zero() {
                coeffs.insert(*k, v);
            }
        }
        SymPhase {
            constant: frac(&(&self.constant + &rhs.constant)),
            coeffs,
        }
    }
}

impl Neg for &SymPhase {
    type Output = SymPhase;

    fn neg(self) -> SymPhase {
        SymPhase {
            constant: frac(&-&self.constant),
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &SymPhase {
    type Output = SymPhase;

    fn sub(self, rhs: &SymPhase) -> SymPhase {
        self + &(-rhs)
    }
}

impl serde::Serialize for SymPhase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for SymPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::rational;

    #[test]
    fn arithmetic_mod_one() {
        let a = &SymPhase::constant(rational(3, 4)) + &SymPhase::symbol(0);
        let b = &a + &a;
        assert_eq!(b.constant_part(), &rational(1, 2));
        assert_eq!(b.coefficient(0), rational(2, 1));
        assert!((&a - &a).is_zero());
        let names = vec!["x".to_string()];
        assert_eq!(a.render(&names), "x + 3/4");
        assert_eq!((-&a).render(&names), "-x + 1/4");
        assert_eq!(a.scale(&rational(1, 3)).render(&names), "x/3 + 1/4");
    }

    #[test]
    fn substitution() {
        let a = &SymPhase::symbol(0).scale_int(2) + &SymPhase::symbol(1);
        let v = SymPhase::constant(rational(1, 4));
        let s = a.substitute(0, &v);
        assert_eq!(s.constant_part(), &rational(1, 2));
        assert!(s.coefficient(0).is_zero());
    }
}
