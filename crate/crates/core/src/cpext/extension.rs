use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::genperm::{AntiunitaryCandidate, GenPermMatrix};
use crate::classifier::TorusSubgroup;
use crate::error::{Error, Result};
use crate::exactmath::lattice::{frac, unimodular_inverse};
use crate::exactmath::{snf, IntMatrix};
use crate::groups::GroupSignature;
use crate::torus::{rational, PhaseVector};

/// Cap on how many square classes are enumerated for one involution.
const CLASS_LIMIT: u64 = 1 << 16;

fn is_constant<T: PartialEq>(xs: impl IntoIterator<Item = T>) -> bool {
    xs.into_iter().all_equal()
}

/// `ψ_i + ψ_σ(i)` is the same for every doublet, for all of `a`.
fn reflects(a: &TorusSubgroup, sigma: &[usize]) -> bool {
    a.generators().iter().all(|g| {
        let p = g.phases();
        is_constant(
            sigma
                .iter()
                .enumerate()
                .map(|(i, &s)| frac(&(&p[i] + &p[s]))),
        )
    }) && a
        .directions()
        .iter()
        .all(|d| is_constant(sigma.iter().enumerate().map(|(i, &s)| &d[i] + &d[s])))
}

/// `ψ_τ(i) − ψ_i` is the same for every doublet, for all of `a`.
fn preserves(a: &TorusSubgroup, tau: &[usize]) -> bool {
    a.generators().iter().all(|g| {
        let p = g.phases();
        is_constant(tau.iter().enumerate().map(|(i, &t)| frac(&(&p[t] - &p[i]))))
    }) && a
        .directions()
        .iter()
        .all(|d| is_constant(tau.iter().enumerate().map(|(i, &t)| &d[t] - &d[i])))
}

fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).permutations(n)
}

fn is_involution(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| p[j] == i)
}

/// Permutation parts of the antiunitary maps `b J` commuting with `a`
/// modulo scalars whose square is diagonal.
pub fn valid_involutions(a: &TorusSubgroup) -> Vec<Vec<usize>> {
    permutations(a.n_doublets())
        .filter(|p| is_involution(p) && reflects(a, p))
        .collect()
}

/// Entries `(i, j)` that some generalized-permutation `b` with `b = a b a`
/// (for all `a`) may occupy.
pub fn commutant_support(a: &TorusSubgroup) -> Vec<Vec<bool>> {
    let n = a.n_doublets();
    let mut out = vec![vec![false; n]; n];
    for sigma in valid_involutions(a) {
        for (i, &j) in sigma.iter().enumerate() {
            out[i][j] = true;
        }
    }
    out
}

/// Generalized-permutation part of the centralizer of `a` modulo scalars:
/// the allowed permutations. Every diagonal phase is allowed on top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Centralizer {
    pub permutations: Vec<Vec<usize>>,
}

impl Centralizer {
    pub fn contains(&self, x: &GenPermMatrix) -> bool {
        self.permutations.iter().any(|p| p == x.perm())
    }

    pub fn is_diagonal_only(&self) -> bool {
        self.permutations.len() == 1
    }
}

pub fn centralizer_genperm(a: &TorusSubgroup) -> Centralizer {
    Centralizer {
        permutations: permutations(a.n_doublets())
            .filter(|p| preserves(a, p))
            .collect(),
    }
}

fn conjugate_perm(tau: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; tau.len()];
    for (i, &t) in tau.iter().enumerate() {
        inv[t] = i;
    }
    // τ σ τ⁻¹
    (0..tau.len()).map(|i| tau[sigma[inv[i]]]).collect()
}

/// One abelian extension `A ∪ A·J''` of a torus subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpCandidate {
    pub base: TorusSubgroup,
    pub involution: Vec<usize>,
    pub generator: AntiunitaryCandidate,
    pub square: PhaseVector,
    pub signature: GroupSignature,
}

impl CpCandidate {
    pub fn n_doublets(&self) -> usize {
        self.base.n_doublets()
    }

    pub fn base_signature(&self) -> &GroupSignature {
        self.base.signature()
    }

    /// Order of the antiunitary generator modulo scalars.
    pub fn generator_order(&self) -> BigInt {
        self.generator
            .order_mod_center()
            .expect("square lies in a finite torus coset")
    }
}

fn transpositions(sigma: &[usize]) -> Vec<(usize, usize)> {
    sigma
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < j)
        .map(|(i, &j)| (i, j))
        .collect()
}

/// Square of `θ J` with `θ_i = 0`, `θ_j = −x` on each swapped pair.
fn square_of(n: usize, pairs: &[(usize, usize)], x: &[BigRational]) -> PhaseVector {
    let mut s = vec![BigRational::zero(); n];
    for (&(i, j), xk) in pairs.iter().zip(x) {
        s[i] = xk.clone();
        s[j] = -xk.clone();
    }
    PhaseVector::new(s)
}

fn normal_phases(n: usize, pairs: &[(usize, usize)], x: &[BigRational]) -> PhaseVector {
    let mut t = vec![BigRational::zero(); n];
    for (&(_, j), xk) in pairs.iter().zip(x) {
        t[j] = -xk.clone();
    }
    PhaseVector::new(t)
}

/// `t ∈ 2A` modulo scalars.
fn is_double(a: &TorusSubgroup, t: &PhaseVector) -> bool {
    let n = t.len();
    let half = rational(1, 2);
    (0..1u32 << n).any(|w| {
        let beta: Vec<BigRational> = t
            .phases()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p * &half
                    + if w >> i & 1 == 1 {
                        half.clone()
                    } else {
                        BigRational::zero()
                    }
            })
            .collect();
        a.contains(&PhaseVector::new(beta))
    })
}

/// Values of the swap parameters `x` for which the square lies in `a`, one
/// per class modulo `2A`.
fn square_classes(a: &TorusSubgroup, pairs: &[(usize, usize)]) -> Result<Vec<Vec<BigRational>>> {
    let n = a.n_doublets();
    let k = pairs.len();
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    let basis = a.basis();
    let lattice = a.lattice();
    let rows = lattice.rows().max(1);
    let mut m = IntMatrix::zeros(rows, k);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let mut s = vec![BigRational::zero(); n];
        s[i] = rational(1, 1);
        s[j] = rational(-1, 1);
        let angles = basis.angles_of_direction(&s)?;
        for r in 0..lattice.rows() {
            let v: BigRational = lattice
                .row(r)
                .iter()
                .zip(&angles)
                .map(|(l, q)| q * BigRational::from_integer(l.clone()))
                .sum();
            m.set(r, c, v.to_integer());
        }
    }
    let s = snf(&m);
    let steps: Vec<u64> = (0..k)
        .map(|i| {
            s.d.get(i)
                .and_then(|d| d.to_u64())
                .filter(|&d| d > 0)
                .unwrap_or(1)
        })
        .collect();
    let total: u64 = steps.iter().product();
    if total > CLASS_LIMIT {
        return Err(Error::Unsupported(format!(
            "{total} square classes exceed the search cap"
        )));
    }
    let mut reps: Vec<(Vec<BigRational>, PhaseVector)> = Vec::new();
    for ks in steps.iter().map(|&d| 0..d).multi_cartesian_product() {
        let y: Vec<BigRational> = ks
            .iter()
            .zip(&steps)
            .map(|(&kk, &d)| rational(kk as i64, d as i64))
            .collect();
        let x: Vec<BigRational> = (0..k)
            .map(|r| {
                let v: BigRational =
                    s.v.row(r)
                        .iter()
                        .zip(&y)
                        .map(|(c, q)| q * BigRational::from_integer(c.clone()))
                        .sum();
                frac(&v)
            })
            .collect();
        let sq = square_of(n, pairs, &x);
        debug_assert!(a.contains(&sq));
        if !reps.iter().any(|(_, other)| is_double(a, &(&sq - other))) {
            reps.push((x, sq));
        }
    }
    Ok(reps.into_iter().map(|(x, _)| x).collect())
}

/// Signature of `A ∪ A·J` given `J² = s ∈ A`.
fn extended_signature(a: &TorusSubgroup, s: &PhaseVector) -> Result<GroupSignature> {
    let basis = a.basis();
    let lat = a.lattice();
    let rank = a.signature().torus_rank;
    if lat.rows() == 0 {
        return GroupSignature::with_antiunitary(&[2], rank, 1);
    }
    let f = snf(lat);
    let vinv = unimodular_inverse(&f.v).expect("unimodular");
    let angles = basis.angles_of(s)?;
    let mut factors: Vec<(BigInt, BigInt)> = Vec::new();
    for (i, d) in f.d.iter().enumerate() {
        if d.is_zero() || *d <= BigInt::from(1) {
            continue;
        }
        let y: BigRational = vinv
            .row(i)
            .iter()
            .zip(&angles)
            .map(|(c, q)| q * BigRational::from_integer(c.clone()))
            .sum();
        let k = y * BigRational::from_integer(d.clone());
        assert!(k.is_integer(), "square must lie in the subgroup");
        factors.push((d.clone(), k.to_integer().mod_floor(d)));
    }
    let r = factors.len();
    let mut rel = IntMatrix::zeros(r + 1, r + 1);
    for (i, (d, k)) in factors.iter().enumerate() {
        rel.set(i, i, d.clone());
        rel.set(r, i, -k.clone());
    }
    rel.set(r, r, BigInt::from(2));
    let inv: Vec<u64> = snf(&rel)
        .d
        .iter()
        .filter(|d| **d > BigInt::from(1))
        .map(|d| d.to_u64().expect("small group"))
        .collect();
    let e = 1 + factors
        .iter()
        .filter(|(d, k)| k.is_odd() && d.is_even())
        .map(|(d, _)| d.trailing_zeros().unwrap_or(0) as u32)
        .max()
        .unwrap_or(0);
    GroupSignature::with_antiunitary(&inv, rank, e)
}

/// Among `b·J` for `b` in the component group, the one of largest order,
/// preferring a square equal to the first generator of `a`.
fn pick_generator(a: &TorusSubgroup, j: &GenPermMatrix) -> (AntiunitaryCandidate, PhaseVector) {
    let target = a.generators().first();
    let mut best: Option<(BigInt, bool, AntiunitaryCandidate, PhaseVector)> = None;
    for b in a.finite_elements().into_iter().take(10_000) {
        let cand = AntiunitaryCandidate {
            unitary_part: GenPermMatrix::diagonal(&b).compose(j),
        };
        let sq = cand.square().constant_phases().expect("constant phases");
        let order = cand.order_mod_center().expect("finite order");
        let hits = target.is_some_and(|t| sq.equal_mod_center(t).unwrap_or(false));
        let better = match &best {
            None => true,
            Some((o, h, _, _)) => order > *o || (order == *o && hits && !h),
        };
        if better {
            best = Some((order, hits, cand, sq));
        }
    }
    let (_, _, cand, sq) = best.expect("identity is always an element");
    (cand, sq)
}

/// All abelian extensions of `a` by an antiunitary generalized permutation,
/// up to conjugation by the centralizer's permutations and diagonal phases.
/// Of conjugate involutions the one swapping the lowest indices is kept.
pub fn cp_extensions(a: &TorusSubgroup) -> Result<Vec<CpCandidate>> {
    let n = a.n_doublets();
    let cent = centralizer_genperm(a);
    let mut out = Vec::new();
    for sigma in valid_involutions(a) {
        let canonical = cent
            .permutations
            .iter()
            .map(|t| conjugate_perm(t, &sigma))
            .min_by_key(|p| transpositions(p))
            .expect("identity centralizes");
        if canonical != sigma {
            continue;
        }
        let pairs = transpositions(&sigma);
        for x in square_classes(a, &pairs)? {
            let j = GenPermMatrix::new(
                sigma.clone(),
                normal_phases(n, &pairs, &x)
                    .phases()
                    .iter()
                    .map(|p| super::SymPhase::constant(p.clone()))
                    .collect(),
            );
            let (generator, square) = pick_generator(a, &j);
            let signature = extended_signature(a, &square)?;
            out.push(CpCandidate {
                base: a.clone(),
                involution: sigma.clone(),
                generator,
                square,
                signature,
            });
        }
    }
    Ok(out)
}
