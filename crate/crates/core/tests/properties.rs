use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use nhdm_core::exactmath::{det, hnf, hnf_contains, snf, IntMatrix};
use nhdm_core::monomials::{charge_vector, enumerate_monomials};
use nhdm_core::torus::{equal_mod_center, PhaseVector, TorusBasis};

fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_rows_with_cols(c, v.chunks(c).map(|row| row.to_vec())).unwrap()
        })
    })
}

fn angles(dim: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-30i64..30, 1i64..13), dim).prop_map(|v| {
        v.into_iter()
            .map(|(n, d)| BigRational::new(n.into(), d.into()))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn smith_form_identities(m in small_matrix(4, 6)) {
        let s = snf(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.diagonal_matrix());
        prop_assert!(det(&s.u).unwrap().abs().is_one());
        prop_assert!(det(&s.v).unwrap().abs().is_one());
        for w in s.d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[1].is_zero() { continue; }
            prop_assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn hermite_form_is_idempotent(m in small_matrix(4, 5)) {
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h.clone());
        for i in 0..m.rows() {
            prop_assert!(hnf_contains(&h, m.row(i)));
        }
    }

    #[test]
    fn angles_to_phases_is_a_homomorphism(
        (n, a, b) in (2usize..6).prop_flat_map(|n| (Just(n), angles(n - 1), angles(n - 1)))
    ) {
        let basis = TorusBasis::new(n).unwrap();
        let sum: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let ga = basis.element_from_angles(&a).unwrap();
        let gb = basis.element_from_angles(&b).unwrap();
        let gs = basis.element_from_angles(&sum).unwrap();
        prop_assert_eq!(&ga + &gb, gs);
        // Round trip through the reduced angle coordinates.
        let back = basis.element_from_angles(&basis.angles_of(&ga).unwrap()).unwrap();
        prop_assert!(equal_mod_center(&back, &ga).unwrap());
    }

    #[test]
    fn center_shifts_are_invisible(n in 2usize..6, k in 0i64..12, p in angles(5)) {
        let x = PhaseVector::new(p[..n].to_vec());
        let shift = BigRational::new(k.into(), (n as i64).into());
        let y = PhaseVector::new(x.phases().iter().map(|q| q + &shift).collect());
        prop_assert!(equal_mod_center(&x, &y).unwrap());
        let z = PhaseVector::new(
            x.phases().iter().enumerate()
                .map(|(i, q)| if i == 0 { q + BigRational::new(1.into(), 7.into()) } else { q.clone() })
                .collect(),
        );
        prop_assert!(!equal_mod_center(&x, &z).unwrap());
    }
}

#[test]
fn bilinear_charges_are_distinct() {
    for n in 2..=6 {
        let basis = TorusBasis::new(n).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let m = nhdm_core::monomials::Monomial::new(vec![(a, b)]).unwrap();
                    assert!(seen.insert(charge_vector(&m, &basis)), "N={n} ({a},{b})");
                }
            }
        }
    }
}

#[test]
fn phase_of_a_term_is_the_charge_pairing() {
    // Sum rule: phase picked up by a term under the torus element with
    // given angles equals charge · angles.
    for n in 2..=5 {
        let basis = TorusBasis::new(n).unwrap();
        let theta: Vec<BigRational> = (0..n - 1)
            .map(|k| BigRational::new(BigInt::from(2 * k as i64 + 1), BigInt::from(11)))
            .collect();
        let g = basis.element_from_angles(&theta).unwrap();
        for m in enumerate_monomials(n) {
            let q = charge_vector(&m, &basis);
            let pairing: BigRational = q
                .entries()
                .iter()
                .zip(&theta)
                .map(|(c, t)| t * BigRational::from_integer(c.clone()))
                .sum();
            let diff = g.character(&m.exponents(n)) - pairing;
            assert!(diff.is_integer(), "N={n} {m}");
        }
    }
}
