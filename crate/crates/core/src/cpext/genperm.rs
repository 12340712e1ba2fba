use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::phase::SymPhase;
use crate::monomials::Term;
use crate::torus::PhaseVector;

/// `(x φ)_a = e^{2πi θ_a} φ_{perm[a]}`: one unit-modulus entry per row, at
/// column `perm[a]`. Phases may carry generic symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenPermMatrix {
    perm: Vec<usize>,
    phases: Vec<SymPhase>,
}

impl GenPermMatrix {
    pub fn new(perm: Vec<usize>, phases: Vec<SymPhase>) -> Self {
        assert_eq!(perm.len(), phases.len(), "one phase per row");
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            assert!(p < perm.len() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        GenPermMatrix { perm, phases }
    }

    pub fn diagonal(x: &PhaseVector) -> Self {
        let n = x.len();
        Self::new(
            (0..n).collect(),
            x.phases()
                .iter()
                .map(|p| SymPhase::constant(p.clone()))
                .collect(),
        )
    }

    pub fn permutation(perm: Vec<usize>) -> Self {
        let n = perm.len();
        Self::new(perm, vec![SymPhase::zero(); n])
    }

    pub fn identity(n: usize) -> Self {
        Self::permutation((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[SymPhase] {
        &self.phases
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Phases as a plain vector when no symbols are involved.
    pub fn constant_phases(&self) -> Option<PhaseVector> {
        if self.phases.iter().all(SymPhase::is_constant) {
            Some(PhaseVector::new(
                self.phases
                    .iter()
                    .map(|p| p.constant_part().clone())
                    .collect(),
            ))
        } else {
            None
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GenPermMatrix) -> GenPermMatrix {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let phases = self
            .phases
            .iter()
            .zip(&self.perm)
            .map(|(t, &p)| t + &other.phases[p])
            .collect();
        GenPermMatrix { perm, phases }
    }

    pub fn inverse(&self) -> GenPermMatrix {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut phases = vec![SymPhase::zero(); n];
        for (a, &p) in self.perm.iter().enumerate() {
            perm[p] = a;
            phases[p] = -&self.phases[a];
        }
        GenPermMatrix { perm, phases }
    }

    /// Entry-wise complex conjugate.
    pub fn conjugate(&self) -> GenPermMatrix {
        GenPermMatrix {
            perm: self.perm.clone(),
            phases: self.phases.iter().map(|p| -p).collect(),
        }
    }

    /// Diagonal with all phases equal.
    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.phases.windows(2).all(|w| w[0] == w[1])
    }

    /// Commutator `x y x⁻¹ y⁻¹` is scalar.
    pub fn commutes_mod_center(&self, other: &GenPermMatrix) -> bool {
        self.compose(other)
            .compose(&self.inverse())
            .compose(&other.inverse())
            .is_scalar()
    }

    /// Smallest `k ≥ 1` with `x^k` scalar, for constant phases.
    pub fn order_mod_center(&self) -> Option<BigInt> {
        let mut power = self.clone();
        let mut k = BigInt::one();
        // The permutation part returns to the identity within n! steps; from
        // there the diagonal order is a finite lcm.
        for _ in 0..720 {
            if power.is_diagonal() {
                let d = power.constant_phases()?.order_mod_center();
                return Some(k * d);
            }
            power = power.compose(self);
            k += 1;
        }
        None
    }

    /// Image of a term under `φ ↦ xφ` and the phase it picks up.
    pub fn act_unitary(&self, t: &Term) -> (Term, SymPhase) {
        let factors = t
            .factors()
            .iter()
            .map(|&(a, b)| (self.perm[a], self.perm[b]))
            .collect();
        (Term::new(factors).expect("same shape"), self.term_phase(t))
    }

    /// Image of a term under `φ ↦ x φ*` and the phase it picks up.
    pub fn act_antiunitary(&self, t: &Term) -> (Term, SymPhase) {
        let factors = t
            .factors()
            .iter()
            .map(|&(a, b)| (self.perm[b], self.perm[a]))
            .collect();
        (Term::new(factors).expect("same shape"), self.term_phase(t))
    }

    fn term_phase(&self, t: &Term) -> SymPhase {
        let mut p = SymPhase::zero();
        for &(a, b) in t.factors() {
            p = &(&p + &self.phases[b]) - &self.phases[a];
        }
        p
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = (0..self.n())
            .map(|a| {
                format!(
                    "{}→{}: {}",
                    a + 1,
                    self.perm[a] + 1,
                    self.phases[a].render(names)
                )
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Display for GenPermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// JSON form: 1-based permutation plus phase strings in turns.
#[derive(Serialize)]
struct GenPermView {
    permutation: Vec<usize>,
    phases: Vec<String>,
}

impl GenPermMatrix {
    pub fn serialize_with_names<S: Serializer>(
        &self,
        names: &[String],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        GenPermView {
            permutation: self.perm.iter().map(|p| p + 1).collect(),
            phases: self.phases.iter().map(|p| p.render(names)).collect(),
        }
        .serialize(s)
    }
}

impl Serialize for GenPermMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.serialize_with_names(&[], s)
    }
}

/// An antiunitary map `φ ↦ x φ*` (the unitary part composed with
/// conjugation).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntiunitaryCandidate {
    pub unitary_part: GenPermMatrix,
}

impl AntiunitaryCandidate {
    /// `(x J)² = x x*`.
    pub fn square(&self) -> GenPermMatrix {
        self.unitary_part.compose(&self.unitary_part.conjugate())
    }

    /// Order of `x J` modulo scalars, when its square is a constant diagonal.
    pub fn order_mod_center(&self) -> Option<BigInt> {
        self.square().order_mod_center().map(|k| k * 2)
    }
}
