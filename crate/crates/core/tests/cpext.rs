use std::collections::BTreeSet;

use itertools::Itertools;
use nhdm_core::classifier::TorusSubgroup;
use nhdm_core::cpext::*;
use nhdm_core::monomials::{RenderStyle, Term};
use nhdm_core::torus::{rational, PhaseVector, TorusBasis};

fn basis3() -> TorusBasis {
    TorusBasis::new(3).unwrap()
}

fn finite(basis: &TorusBasis, gens: &[&[(i64, i64)]]) -> TorusSubgroup {
    let gens: Vec<PhaseVector> = gens.iter().map(|g| PhaseVector::from_ratios(g)).collect();
    TorusSubgroup::generated_by(basis, &gens, &[]).unwrap()
}

fn u1(basis: &TorusBasis, d: &[i64]) -> TorusSubgroup {
    let d = d.iter().map(|&x| rational(x, 1)).collect();
    TorusSubgroup::generated_by(basis, &[], &[d]).unwrap()
}

fn full_torus(n: usize) -> TorusSubgroup {
    let basis = TorusBasis::new(n).unwrap();
    let dirs: Vec<Vec<_>> = (0..n - 1)
        .map(|k| {
            let mut d = vec![rational(0, 1); n];
            d[k] = rational(-1, 1);
            d[k + 1] = rational(1, 1);
            d
        })
        .collect();
    TorusSubgroup::generated_by(&basis, &[], &dirs).unwrap()
}

fn trivial(n: usize) -> TorusSubgroup {
    let basis = TorusBasis::new(n).unwrap();
    TorusSubgroup::generated_by(&basis, &[PhaseVector::identity(n)], &[]).unwrap()
}

fn names(cands: &[CpCandidate]) -> BTreeSet<String> {
    cands.iter().map(|c| c.signature.name()).collect()
}

fn relation(sys: &PhaseConstraintSystem, terms: &[(Term, i64)], xi: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; sys.unknowns.len()];
    for (t, c) in terms {
        let (i, sign) = sys
            .slot_of(t)
            .unwrap_or_else(|| panic!("{t} has no phase unknown"));
        v[i] += sign * c;
    }
    for &(k, c) in xi {
        v[sys.xi_slot(k)] += c;
    }
    v
}

fn doubled(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| 2 * x).collect()
}

#[test]
fn commutant_of_u1_type_one() {
    let a = u1(&basis3(), &[-1, 1, 0]);
    let s = commutant_support(&a);
    let on: Vec<(usize, usize)> = (0..3)
        .cartesian_product(0..3)
        .filter(|&(i, j)| s[i][j])
        .collect();
    assert_eq!(on, vec![(0, 1), (1, 0), (2, 2)]);
}

#[test]
fn commutant_of_full_torus_is_empty() {
    for n in 3..=5 {
        let s = commutant_support(&full_torus(n));
        assert!(s.iter().flatten().all(|&x| !x), "N={n}");
    }
    // In PSU(2) the antidiagonal survives: doublet space is pseudo-real.
    let s = commutant_support(&full_torus(2));
    assert!(s[0][1] && s[1][0]);
}

#[test]
fn commutant_of_trivial_group_is_everything() {
    for n in 2..=4 {
        let s = commutant_support(&trivial(n));
        assert!(s.iter().flatten().all(|&x| x));
    }
}

#[test]
fn u1_type_two_has_no_commutant() {
    let a = u1(&basis3(), &[-2, 1, 1]);
    assert!(cp_extensions(&a).unwrap().is_empty());
    assert!(valid_involutions(&a).is_empty());
}

/// Permutations `p` for which some phase choice commutes with every sample
/// element modulo scalars.
fn brute_centralizer(samples: &[PhaseVector], denominator: i64) -> Vec<Vec<usize>> {
    let n = samples[0].len();
    let elems: Vec<GenPermMatrix> = samples.iter().map(GenPermMatrix::diagonal).collect();
    (0..n)
        .permutations(n)
        .filter(|p| {
            (0..n)
                .map(|_| 0..denominator)
                .multi_cartesian_product()
                .any(|ks| {
                    let phases = ks
                        .iter()
                        .map(|&k| SymPhase::constant(rational(k, denominator)))
                        .collect();
                    let x = GenPermMatrix::new(p.clone(), phases);
                    elems.iter().all(|a| x.commutes_mod_center(a))
                })
        })
        .collect()
}

#[test]
fn centralizer_matches_brute_force() {
    let b = basis3();
    let cases: Vec<(TorusSubgroup, Vec<PhaseVector>)> = vec![
        (trivial(3), vec![PhaseVector::identity(3)]),
        (
            finite(&b, &[&[(1, 2), (1, 2), (0, 1)]]),
            vec![PhaseVector::from_ratios(&[(1, 2), (1, 2), (0, 1)])],
        ),
        (
            finite(&b, &[&[(-1, 3), (1, 3), (0, 1)]]),
            vec![PhaseVector::from_ratios(&[(-1, 3), (1, 3), (0, 1)])],
        ),
        (
            u1(&b, &[-1, 1, 0]),
            vec![
                PhaseVector::from_ratios(&[(-1, 5), (1, 5), (0, 1)]),
                PhaseVector::from_ratios(&[(-1, 7), (1, 7), (0, 1)]),
            ],
        ),
    ];
    for (a, samples) in cases {
        let c = centralizer_genperm(&a);
        assert_eq!(
            c.permutations,
            brute_centralizer(&samples, 4),
            "{}",
            a.signature()
        );
    }
    let sign_flip = finite(&b, &[&[(1, 2), (1, 2), (0, 1)]]);
    assert_eq!(
        centralizer_genperm(&sign_flip).permutations,
        vec![vec![0, 1, 2], vec![1, 0, 2]]
    );
    assert!(centralizer_genperm(&u1(&b, &[-1, 1, 0])).is_diagonal_only());
}

#[test]
fn z4_extends_two_ways() {
    let a = finite(&basis3(), &[&[(-1, 4), (1, 4), (0, 1)]]);
    let cands = cp_extensions(&a).unwrap();
    assert_eq!(cands.len(), 2);
    assert_eq!(
        names(&cands),
        BTreeSet::from(["Z4xZ2*".to_string(), "Z8*".to_string()])
    );
    let z8 = cands.iter().find(|c| c.signature.name() == "Z8*").unwrap();
    assert_eq!(z8.generator_order(), 8.into());
    assert!(z8.square.equal_mod_center(&a.generators()[0]).unwrap());
}

#[test]
fn z3_extends_to_z6_star_with_square_a() {
    let a = finite(&basis3(), &[&[(-1, 3), (1, 3), (0, 1)]]);
    let cands = cp_extensions(&a).unwrap();
    assert_eq!(names(&cands), BTreeSet::from(["Z6*".to_string()]));
    let c = &cands[0];
    assert_eq!(c.involution, vec![1, 0, 2]);
    assert!(c.square.equal_mod_center(&a.generators()[0]).unwrap());
    assert_eq!(c.generator_order(), 6.into());
}

#[test]
fn z2_extends_to_z2xz2_star_and_z4_star() {
    let r12 = PhaseVector::from_ratios(&[(1, 2), (1, 2), (0, 1)]);
    let a = finite(&basis3(), &[&[(1, 2), (1, 2), (0, 1)]]);
    let cands = cp_extensions(&a).unwrap();
    assert_eq!(
        names(&cands),
        BTreeSet::from(["Z2xZ2*".to_string(), "Z4*".to_string()])
    );
    let z4 = cands.iter().find(|c| c.signature.name() == "Z4*").unwrap();
    assert!(z4.square.equal_mod_center(&r12).unwrap());
}

#[test]
fn squares_lie_in_the_base_group() {
    for n in [3, 4] {
        for a in torus_embeddings(n).unwrap() {
            for c in cp_extensions(&a).unwrap() {
                let sq = c.generator.square();
                assert!(sq.is_diagonal());
                let sq = sq.constant_phases().unwrap();
                assert!(sq.equal_mod_center(&c.square).unwrap());
                assert!(a.contains(&sq), "N={n} {}", c.signature);
                for g in a.generators() {
                    let x = GenPermMatrix::diagonal(g);
                    let j = &c.generator.unitary_part;
                    // J x J⁻¹ = j x* j⁻¹ must equal x modulo scalars.
                    let conj = j.compose(&x.conjugate()).compose(&j.inverse());
                    assert!(conj.compose(&x.inverse()).is_scalar());
                }
            }
        }
    }
}

#[test]
fn u1_restrictions_and_swap_witness() {
    let a = u1(&basis3(), &[-1, 1, 0]);
    let cands = cp_extensions(&a).unwrap();
    assert_eq!(cands.len(), 1);
    assert_eq!(cands[0].signature.name(), "U(1)xZ2*");
    let an = cp_realizable(&cands[0]).unwrap();
    assert_eq!(
        an.potential.restrictions(),
        vec!["m11^2 = m22^2", "λ11 = λ22", "λ13 = λ23", "λ'13 = λ'23"]
    );
    match &an.verdict {
        CpVerdict::EnlargedUnitary {
            witness,
            commutes_with_base,
            ..
        } => {
            assert_eq!(witness.perm(), &[1, 0, 2]);
            assert!(!commutes_with_base);
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn z6_star_conditions_and_witness() {
    let a = finite(&basis3(), &[&[(-1, 3), (1, 3), (0, 1)]]);
    let c = &cp_extensions(&a).unwrap()[0];
    let an = cp_realizable(c).unwrap();
    let l1 = Term::quartic((0, 1), (0, 2));
    let l2 = Term::quartic((1, 2), (1, 0));
    let l3 = Term::quartic((2, 0), (2, 1));
    // |λ1| = |λ2|
    let m1 = an.potential.get(&l1).unwrap().magnitude;
    assert_eq!(an.potential.get(&l2).unwrap().magnitude, m1);
    assert_ne!(an.potential.get(&l3).unwrap().magnitude, m1);
    // ψ1 + ψ2 + ψ3 = π is an admissible branch; its double is forced.
    let sys = &an.constraints;
    let sum = relation(sys, &[(l1, 1), (l2, 1), (l3, 1)], &[]);
    assert!(sys.admits(&sum, &rational(1, 2)));
    assert!(sys.implies(&doubled(&sum), &rational(0, 1)));
    assert!(!sys.implies(&sum, &rational(1, 2)));
    match &an.verdict {
        CpVerdict::EnlargedUnitary {
            witness,
            witness_text,
            commutes_with_base,
        } => {
            assert_eq!(witness.perm(), &[1, 0, 2]);
            assert!(!witness.phases()[0].is_constant(), "{witness_text}");
            assert!(!commutes_with_base);
            assert!(an.potential.is_invariant_under(witness, false));
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn z2_cubed_star_needs_real_product() {
    let a = finite(
        &basis3(),
        &[&[(1, 2), (1, 2), (0, 1)], &[(1, 2), (0, 1), (1, 2)]],
    );
    let cands = cp_extensions(&a).unwrap();
    assert_eq!(names(&cands), BTreeSet::from(["Z2xZ2xZ2*".to_string()]));
    let an = cp_realizable(&cands[0]).unwrap();
    let sys = &an.constraints;
    let r = relation(
        sys,
        &[
            (Term::quartic((0, 1), (0, 1)), 1),
            (Term::quartic((1, 2), (1, 2)), 1),
            (Term::quartic((2, 0), (2, 0)), 1),
        ],
        &[],
    );
    assert!(sys.admits(&r, &rational(0, 1)));
    assert!(sys.implies(&doubled(&r), &rational(0, 1)));
    assert!(an.potential.restrictions().is_empty());
    assert_eq!(an.verdict, CpVerdict::Realizable);
}

#[test]
fn z4_star_conditions() {
    let a = finite(&basis3(), &[&[(1, 2), (1, 2), (0, 1)]]);
    let c = cp_extensions(&a)
        .unwrap()
        .into_iter()
        .find(|c| c.signature.name() == "Z4*")
        .unwrap();
    let an = cp_realizable(&c).unwrap();
    let l7 = Term::quartic((0, 2), (1, 2));
    let l8 = Term::quartic((0, 2), (0, 2));
    let l9 = Term::quartic((1, 2), (1, 2));
    assert!(an
        .potential
        .restrictions()
        .contains(&"|λ1313| = |λ2323|".to_string()));
    let sys = &an.constraints;
    assert_eq!(sys.unknowns.last().unwrap(), "ξ");
    // ψ8 + ψ9 = 2ψ7 + π
    let r = relation(sys, &[(l8.clone(), 1), (l9.clone(), 1), (l7, -2)], &[]);
    assert!(sys.implies(&r, &rational(1, 2)));
    // 6ξ = ψ8 + ψ9
    let r = relation(sys, &[(l8, 1), (l9, 1)], &[(0, -6)]);
    assert!(sys.implies(&r, &rational(0, 1)));
    assert_eq!(an.verdict, CpVerdict::Realizable);
}

#[test]
fn z8_star_degenerates() {
    let a = finite(&basis3(), &[&[(-1, 4), (1, 4), (0, 1)]]);
    let c = cp_extensions(&a)
        .unwrap()
        .into_iter()
        .find(|c| c.signature.name() == "Z8*")
        .unwrap();
    let an = cp_realizable(&c).unwrap();
    match &an.verdict {
        CpVerdict::ContinuousDegeneration { killed, residual } => {
            assert_eq!(killed, &vec![Term::quartic((0, 1), (0, 1))]);
            assert_eq!(residual.torus_rank, 1);
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn z4xz2_star_has_dz2_witness() {
    let a = finite(&basis3(), &[&[(-1, 4), (1, 4), (0, 1)]]);
    let c = cp_extensions(&a)
        .unwrap()
        .into_iter()
        .find(|c| c.signature.name() == "Z4xZ2*")
        .unwrap();
    let an = cp_realizable(&c).unwrap();
    match &an.verdict {
        CpVerdict::EnlargedUnitary { witness, .. } => {
            assert_eq!(witness.perm(), &[1, 0, 2]);
            // δ and −δ on the swapped pair, half the phase of the
            // (φ1†φ2)² coefficient.
            let p = witness.phases();
            assert!((&p[0] + &p[1]).is_zero());
            assert_eq!(p[0].coefficients().values().next(), Some(&rational(1, 2)));
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn three_doublet_antiunitary_list() {
    let c = classify_cp(3).unwrap();
    let realizable: BTreeSet<String> = c.realizable.iter().map(|g| g.name()).collect();
    let expected: BTreeSet<String> = ["Z2*", "Z2xZ2*", "Z2xZ2xZ2*", "Z4*"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(realizable, expected);
    let rejected: Vec<(String, Vec<&str>)> = c
        .rejected
        .iter()
        .map(|(g, k)| (g.name(), k.clone()))
        .collect();
    for (name, kind) in [
        ("Z6*", "enlarged_unitary"),
        ("Z8*", "continuous_degeneration"),
        ("Z4xZ2*", "enlarged_unitary"),
        ("U(1)xZ2*", "enlarged_unitary"),
    ] {
        assert!(
            rejected.iter().any(|(n, k)| n == name && k == &vec![kind]),
            "{name}: {rejected:?}"
        );
    }
    assert_eq!(rejected.len(), 4);
    assert!(classify_cp(4).is_err());
}

#[test]
fn z3xz3_is_not_realizable() {
    let r = check_z3z3();
    assert!(r.invariant_under_a && r.invariant_under_b && r.invariant_under_swap);
    assert!(r.generators_commute);
    assert!(!r.commutator_central);
    assert_eq!(
        r.commutator,
        PhaseVector::from_ratios(&[(1, 3), (-1, 3), (0, 1)])
    );
    assert_eq!(r.diagonal_symmetry.name(), "Z3");
    assert!(!r.realizable);
}

#[test]
fn potentials_render() {
    let a = finite(&basis3(), &[&[(-1, 3), (1, 3), (0, 1)]]);
    let an = cp_realizable(&cp_extensions(&a).unwrap()[0]).unwrap();
    let text = an.potential.render(RenderStyle::Unicode);
    assert!(text.contains("arg(λ1213)"), "{text}");
    assert!(!an.constraints.render().is_empty());
}
