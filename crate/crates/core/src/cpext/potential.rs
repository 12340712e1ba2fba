use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::extension::CpCandidate;
use super::genperm::GenPermMatrix;
use super::phase::SymPhase;
use crate::classifier::TorusSubgroup;
use crate::exactmath::lattice::{
    frac, left_kernel, solve_exact, solve_left_integer, solve_mod_one,
};
use crate::exactmath::{hnf, snf, IntMatrix};
use crate::monomials::{RenderStyle, Term};
use crate::torus::TorusBasis;

/// Every gauge-invariant term up to quartic order, both orientations.
pub fn all_terms(n_doublets: usize) -> Vec<Term> {
    let factors: Vec<(usize, usize)> = (0..n_doublets).cartesian_product(0..n_doublets).collect();
    let mut out: Vec<Term> = factors
        .iter()
        .map(|&(a, b)| Term::quadratic(a, b))
        .collect();
    for (i, &f) in factors.iter().enumerate() {
        for &g in &factors[i..] {
            out.push(Term::quartic(f, g));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Terms left invariant by every element of `a`.
pub fn invariant_terms(a: &TorusSubgroup) -> Vec<Term> {
    let n = a.n_doublets();
    all_terms(n)
        .into_iter()
        .filter(|t| a.fixes_exponents(&t.exponents(n)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialTerm {
    pub term: Term,
    /// Index of the magnitude parameter shared along the term's orbit.
    pub magnitude: usize,
    /// Phase of the coefficient, in turns; symbols are free phases.
    pub phase: SymPhase,
}

/// The most general hermitian potential, within a term universe, invariant
/// under a given antiunitary map. Magnitudes of distinct orbits and the
/// remaining free phases are independent generic parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericPotential {
    pub n_doublets: usize,
    pub terms: Vec<PotentialTerm>,
    /// Canonical members of each magnitude orbit.
    pub orbits: Vec<Vec<Term>>,
    pub symbol_names: Vec<String>,
    /// Canonical terms forced to vanish.
    pub killed: Vec<Term>,
}

enum OrbitOutcome {
    Killed,
    Kept(BTreeMap<Term, SymPhase>, bool),
}

fn walk_orbit(start: &Term, seed: SymPhase, j: &GenPermMatrix, symbol: usize) -> OrbitOutcome {
    let mut seed = seed;
    let mut free = true;
    'restart: loop {
        let mut values: BTreeMap<Term, SymPhase> = BTreeMap::new();
        values.insert(start.clone(), seed.clone());
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(t) = queue.pop_front() {
            let v = values[&t].clone();
            let (image, shift) = j.act_antiunitary(&t);
            for (next, value) in [(t.conjugate(), -&v), (image, &v + &shift)] {
                match values.get(&next) {
                    None => {
                        values.insert(next.clone(), value);
                        queue.push_back(next);
                    }
                    Some(old) => {
                        let diff = &value - old;
                        if diff.is_zero() {
                            continue;
                        }
                        let c = diff.coefficient(symbol);
                        if c.is_zero() {
                            return OrbitOutcome::Killed;
                        }
                        // c·s + const ≡ 0 fixes the phase; the other root
                        // is absorbed by the sign of a real magnitude.
                        let s0 = frac(&(-diff.constant_part() / &c));
                        seed = SymPhase::constant(s0);
                        free = false;
                        continue 'restart;
                    }
                }
            }
        }
        return OrbitOutcome::Kept(values, free);
    }
}

impl GenericPotential {
    /// Invariant potential of `universe` under the antiunitary `j`
    /// (acting as `φ ↦ j φ*`).
    pub fn build(n_doublets: usize, universe: &[Term], j: &GenPermMatrix) -> Self {
        let in_universe: BTreeSet<&Term> = universe.iter().collect();
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        let mut terms = Vec::new();
        let mut orbits = Vec::new();
        let mut symbol_names = Vec::new();
        let mut killed = Vec::new();
        let canon: BTreeSet<Term> = universe.iter().map(Term::canonical).collect();
        for t0 in &canon {
            if seen.contains(t0) {
                continue;
            }
            let symbol = symbol_names.len();
            match walk_orbit(t0, SymPhase::symbol(symbol), j, symbol) {
                OrbitOutcome::Killed => {
                    let members = orbit_members(t0, j);
                    for m in members {
                        if m.is_canonical() {
                            killed.push(m.clone());
                        }
                        seen.insert(m);
                    }
                }
                OrbitOutcome::Kept(values, free) => {
                    debug_assert!(values.keys().all(|t| in_universe.contains(t)));
                    if free {
                        symbol_names.push(format!("arg({})", t0.coefficient_name()));
                    }
                    let magnitude = orbits.len();
                    let mut members = Vec::new();
                    for (t, phase) in values {
                        if t.is_canonical() {
                            members.push(t.clone());
                        }
                        seen.insert(t.clone());
                        terms.push(PotentialTerm {
                            term: t,
                            magnitude,
                            phase,
                        });
                    }
                    orbits.push(members);
                }
            }
        }
        terms.sort_by(|a, b| a.term.cmp(&b.term));
        killed.sort();
        GenericPotential {
            n_doublets,
            terms,
            orbits,
            symbol_names,
            killed,
        }
    }

    pub fn support(&self) -> Vec<Term> {
        self.terms.iter().map(|t| t.term.clone()).collect()
    }

    pub fn get(&self, t: &Term) -> Option<&PotentialTerm> {
        self.terms
            .binary_search_by(|p| p.term.cmp(t))
            .ok()
            .map(|i| &self.terms[i])
    }

    pub fn magnitude_name(&self, k: usize) -> String {
        self.orbits[k][0].coefficient_name()
    }

    /// Equalities between coefficients forced by the antiunitary map, e.g.
    /// `m11^2 = m22^2` or `|λ1313| = |λ2323|`.
    pub fn restrictions(&self) -> Vec<String> {
        self.orbits
            .iter()
            .filter(|o| o.len() > 1)
            .map(|o| {
                let names = o.iter().map(Term::coefficient_name);
                if o[0].is_self_conjugate() {
                    let base = self.get(&o[0]).expect("member").phase.clone();
                    o.iter()
                        .map(|t| {
                            let flip = !(&self.get(t).expect("member").phase - &base).is_zero();
                            let name = t.coefficient_name();
                            if flip {
                                format!("-{name}")
                            } else {
                                name
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" = ")
                } else {
                    names
                        .map(|s| format!("|{s}|"))
                        .collect::<Vec<_>>()
                        .join(" = ")
                }
            })
            .collect()
    }

    /// Whether `x` (unitary, or antiunitary as `φ ↦ x φ*`) maps the
    /// potential to itself for generic parameters.
    pub fn is_invariant_under(&self, x: &GenPermMatrix, antiunitary: bool) -> bool {
        self.terms.iter().all(|p| {
            let (image, shift) = if antiunitary {
                x.act_antiunitary(&p.term)
            } else {
                x.act_unitary(&p.term)
            };
            match self.get(&image) {
                Some(q) => {
                    q.magnitude == p.magnitude && (&(&p.phase + &shift) - &q.phase).is_zero()
                }
                None => false,
            }
        })
    }

    /// A non-diagonal generalized permutation leaving the potential
    /// invariant for generic parameters, with phases solved exactly (they
    /// may depend on the free coefficient phases).
    pub fn unitary_symmetry(&self) -> Option<GenPermMatrix> {
        let n = self.n_doublets;
        let rows: Vec<Vec<BigInt>> = self
            .terms
            .iter()
            .map(|p| p.term.exponents(n).into_iter().map(BigInt::from).collect())
            .collect();
        let r = IntMatrix::from_rows_with_cols(n, rows).ok()?;
        (0..n).permutations(n).skip(1).find_map(|pi| {
            let mut rhs = Vec::with_capacity(self.terms.len());
            for p in &self.terms {
                let q = self.get(&p.term.permuted(&pi))?;
                if q.magnitude != p.magnitude {
                    return None;
                }
                rhs.push(&q.phase - &p.phase);
            }
            let constant: Vec<BigRational> =
                rhs.iter().map(|s| s.constant_part().clone()).collect();
            let mut phases: Vec<SymPhase> = solve_mod_one(&r, &constant)?
                .into_iter()
                .map(SymPhase::constant)
                .collect();
            for k in 0..self.symbol_names.len() {
                let coeffs: Vec<BigRational> = rhs.iter().map(|s| s.coefficient(k)).collect();
                if coeffs.iter().all(Zero::is_zero) {
                    continue;
                }
                let sol = solve_exact(&r, &coeffs)?;
                for (ph, c) in phases.iter_mut().zip(sol) {
                    *ph = &*ph + &SymPhase::symbol(k).scale(&c);
                }
            }
            let h = GenPermMatrix::new(pi, phases);
            debug_assert!(self.is_invariant_under(&h, false));
            Some(h)
        })
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let mut lines = Vec::new();
        for (k, orbit) in self.orbits.iter().enumerate() {
            let members: Vec<String> = self
                .terms
                .iter()
                .filter(|p| p.magnitude == k && p.term.is_canonical())
                .map(|p| {
                    let ph = p.phase.render(&self.symbol_names);
                    let conj = if p.term.is_self_conjugate() {
                        ""
                    } else {
                        " + h.c."
                    };
                    format!("[{ph}] {}{conj}", p.term.render(style))
                })
                .collect();
            lines.push(format!(
                "{}: {}",
                orbit[0].coefficient_name(),
                members.join(", ")
            ));
        }
        lines.join("\n")
    }
}

fn orbit_members(t0: &Term, j: &GenPermMatrix) -> Vec<Term> {
    let mut seen = BTreeSet::from([t0.clone()]);
    let mut queue = VecDeque::from([t0.clone()]);
    while let Some(t) = queue.pop_front() {
        for next in [t.conjugate(), j.act_antiunitary(&t).0] {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Torus subgroup fixing every term of a list.
pub fn torus_group_of(basis: &TorusBasis, terms: &[Term]) -> TorusSubgroup {
    let n = basis.n_doublets();
    let mut rows: Vec<Vec<BigInt>> = terms
        .iter()
        .map(|t| basis.charge_of_exponents(&t.exponents(n)))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    if rows.is_empty() {
        rows.push(vec![BigInt::zero(); basis.dim()]);
    }
    let x = IntMatrix::from_rows_with_cols(basis.dim(), rows).expect("uniform rows");
    TorusSubgroup::from_charges(basis, &x).expect("charges fit the torus")
}

/// Linear conditions, modulo 1, on the coefficient phases (one unknown per
/// complex coefficient that survives) and the structural phases of the
/// antiunitary generator, for the potential to be invariant. Real
/// coefficients only ever pair with each other and show up as
/// [`GenericPotential::restrictions`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseConstraintSystem {
    pub unknowns: Vec<String>,
    /// Terms behind the first unknowns, in order.
    pub terms: Vec<Term>,
    #[serde(with = "crate::serde_util::bigint_rows")]
    pub structural: Vec<Vec<BigInt>>,
    #[serde(skip)]
    matrix: IntMatrix,
    #[serde(skip)]
    rhs: Vec<BigRational>,
}

/// Phase directions that conjugation by diagonal matrices moves `θ` along,
/// modulo scalars.
fn structural_directions(sigma: &[usize]) -> Vec<Vec<BigInt>> {
    let n = sigma.len();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for (i, &j) in sigma.iter().enumerate() {
        if i < j {
            let mut g = vec![0; n];
            g[i] = 1;
            g[j] = 1;
            gens.push(g);
        }
    }
    for (i, &j) in sigma.iter().enumerate() {
        if i == j {
            let mut g = vec![0; n];
            g[i] = 1;
            gens.push(g);
        }
    }
    let last = gens.pop().expect("at least one doublet");
    let wl: i64 = last.iter().sum();
    gens.into_iter()
        .map(|g| {
            let wg: i64 = g.iter().sum();
            let w: Vec<i64> = g.iter().zip(&last).map(|(a, b)| wl * a - wg * b).collect();
            let d = w.iter().fold(0i64, |acc, x| acc.gcd(x));
            w.into_iter().map(|x| BigInt::from(x / d)).collect()
        })
        .collect()
}

impl PhaseConstraintSystem {
    pub fn build(candidate: &CpCandidate, potential: &GenericPotential) -> Self {
        let n = candidate.n_doublets();
        let j = &candidate.generator.unitary_part;
        let terms: Vec<Term> = potential
            .terms
            .iter()
            .filter(|p| p.term.is_canonical() && !p.term.is_self_conjugate())
            .map(|p| p.term.clone())
            .collect();
        let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let structural = structural_directions(&candidate.involution);
        let nu = terms.len() + structural.len();
        let mut unknowns: Vec<String> = terms
            .iter()
            .map(|t| format!("arg({})", t.coefficient_name()))
            .collect();
        match structural.len() {
            1 => unknowns.push("ξ".into()),
            k => unknowns.extend((1..=k).map(|i| format!("ξ{i}"))),
        }
        let slot = |t: &Term| -> (usize, i64) {
            if t.is_canonical() {
                (index[t], 1)
            } else {
                (index[&t.conjugate()], -1)
            }
        };
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs = Vec::new();
        for (i, t) in terms.iter().enumerate() {
            // ψ(J t) − ψ(t) − Φ_t(θ) ≡ 0 with θ = θ₀ + Σ ξ_k w_k.
            let (image, shift) = j.act_antiunitary(t);
            let mut row = vec![BigInt::zero(); nu];
            let (k, sign) = slot(&image);
            row[k] += sign;
            row[i] -= 1;
            let m = t.exponents(n);
            for (s, w) in structural.iter().enumerate() {
                let dot: BigInt = m.iter().zip(w).map(|(a, b)| BigInt::from(*a) * b).sum();
                row[terms.len() + s] -= dot;
            }
            rows.push(row);
            rhs.push(shift.constant_part().clone());
        }
        let matrix = IntMatrix::from_rows_with_cols(nu, rows).expect("uniform rows");
        PhaseConstraintSystem {
            unknowns,
            terms,
            structural,
            matrix,
            rhs,
        }
    }

    pub fn equations(&self) -> Vec<(Vec<BigInt>, BigRational)> {
        (0..self.matrix.rows())
            .map(|i| (self.matrix.row(i).to_vec(), self.rhs[i].clone()))
            .collect()
    }

    pub fn is_solvable(&self) -> bool {
        self.matrix.rows() == 0 || solve_mod_one(&self.matrix, &self.rhs).is_some()
    }

    /// Unknown slot and sign of a term's coefficient phase.
    pub fn slot_of(&self, t: &Term) -> Option<(usize, i64)> {
        let (c, sign) = if t.is_canonical() {
            (t.clone(), 1)
        } else {
            (t.conjugate(), -1)
        };
        self.terms.iter().position(|x| *x == c).map(|i| (i, sign))
    }

    pub fn xi_slot(&self, k: usize) -> usize {
        self.terms.len() + k
    }

    /// Full-row-rank equivalent of the system with its right-hand side.
    fn reduced(&self) -> (IntMatrix, Vec<BigRational>) {
        let s = snf(&self.matrix);
        let rank = s.rank();
        let ub: Vec<BigRational> = (0..self.matrix.rows())
            .map(|i| {
                s.u.row(i)
                    .iter()
                    .zip(&self.rhs)
                    .map(|(c, q)| q * BigRational::from_integer(c.clone()))
                    .sum()
            })
            .collect();
        let rows = (0..rank).map(|i| {
            let ui = s.u.row(i);
            (0..self.matrix.cols())
                .map(|c| {
                    (0..self.matrix.rows())
                        .map(|r| &ui[r] * self.matrix.get(r, c))
                        .sum::<BigInt>()
                })
                .collect::<Vec<_>>()
        });
        let m = IntMatrix::from_rows_with_cols(self.matrix.cols(), rows.collect::<Vec<_>>())
            .expect("uniform rows");
        (m, ub.into_iter().take(rank).collect())
    }

    /// Whether every solution satisfies `coeffs · u ≡ value`.
    pub fn implies(&self, coeffs: &[i64], value: &BigRational) -> bool {
        if !self.is_solvable() {
            return true;
        }
        let target: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        if target.iter().all(Zero::is_zero) {
            return frac(value).is_zero();
        }
        let (m, b) = self.reduced();
        if m.rows() == 0 {
            return false;
        }
        match solve_left_integer(&m, &target) {
            None => false,
            Some(k) => {
                let v: BigRational = k
                    .iter()
                    .zip(&b)
                    .map(|(c, q)| q * BigRational::from_integer(c.clone()))
                    .sum();
                frac(&(v - value)).is_zero()
            }
        }
    }

    /// Whether some solution also satisfies `coeffs · u ≡ value`.
    pub fn admits(&self, coeffs: &[i64], value: &BigRational) -> bool {
        let mut rows: Vec<Vec<BigInt>> = (0..self.matrix.rows())
            .map(|i| self.matrix.row(i).to_vec())
            .collect();
        rows.push(coeffs.iter().map(|&c| BigInt::from(c)).collect());
        let mut rhs = self.rhs.clone();
        rhs.push(value.clone());
        let m = IntMatrix::from_rows_with_cols(self.matrix.cols(), rows).expect("uniform rows");
        solve_mod_one(&m, &rhs).is_some()
    }

    /// Relations among the coefficient phases alone, with the structural
    /// phases eliminated, in Hermite form.
    pub fn phase_relations(&self) -> Vec<(Vec<BigInt>, BigRational)> {
        let np = self.terms.len();
        let ns = self.structural.len();
        let cols = self.matrix.cols();
        let rows = self.matrix.rows();
        if rows == 0 {
            return Vec::new();
        }
        let xi = IntMatrix::from_rows_with_cols(
            ns,
            (0..rows)
                .map(|r| self.matrix.row(r)[np..cols].to_vec())
                .collect::<Vec<_>>(),
        )
        .expect("uniform rows");
        let kernel = if ns == 0 {
            IntMatrix::identity(rows)
        } else {
            left_kernel(&xi)
        };
        let kr = kernel.rows();
        if kr == 0 {
            return Vec::new();
        }
        // [K M_ψ | I] in Hermite form tracks which combination made each row.
        let mut aug = IntMatrix::zeros(kr, np + kr);
        let mut rhs = Vec::with_capacity(kr);
        for i in 0..kr {
            let k = kernel.row(i);
            for c in 0..np {
                let v: BigInt = (0..rows).map(|r| &k[r] * self.matrix.get(r, c)).sum();
                aug.set(i, c, v);
            }
            aug.set(i, np + i, BigInt::from(1));
            let b: BigRational = k
                .iter()
                .zip(&self.rhs)
                .map(|(c, q)| q * BigRational::from_integer(c.clone()))
                .sum();
            rhs.push(b);
        }
        let h = hnf(&aug);
        (0..h.rows())
            .filter_map(|i| {
                let row = h.row(i);
                if row[..np].iter().all(Zero::is_zero) {
                    return None;
                }
                let b: BigRational = row[np..]
                    .iter()
                    .zip(&rhs)
                    .map(|(c, q)| q * BigRational::from_integer(c.clone()))
                    .sum();
                Some((row[..np].to_vec(), frac(&b)))
            })
            .collect()
    }

    pub fn render_relation(&self, coeffs: &[BigInt], value: &BigRational) -> String {
        let mut out = String::new();
        for (c, name) in coeffs.iter().zip(&self.unknowns) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if mag != BigInt::from(1) {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(name);
        }
        format!("{out} ≡ {value}")
    }

    pub fn render(&self) -> Vec<String> {
        self.phase_relations()
            .iter()
            .map(|(c, v)| self.render_relation(c, v))
            .collect()
    }
}
