use nhdm_core::constructions::{
    check_construction, cyclic_c_matrix, order_of, product_c_matrix, BlockBound,
};
use nhdm_core::groups::GroupSignature;
use nhdm_core::monomials::enumerate_monomials;

#[test]
fn every_cyclic_order_up_to_eight_blocks() {
    for n in 1..=8usize {
        for p in 1..=(1u64 << n) {
            let c = cyclic_c_matrix(p, n).unwrap();
            assert_eq!(
                c.group().unwrap(),
                GroupSignature::finite(&[p]),
                "p={p} n={n}"
            );
            assert_eq!(order_of(&c), Some(p));
        }
    }
}

#[test]
fn witnesses_reproduce_the_group() {
    for n in 1..=4usize {
        for p in 1..=(1u64 << n) {
            let c = cyclic_c_matrix(p, n).unwrap();
            let check = check_construction(&c, 4).unwrap();
            assert!(check.consistent(), "p={p} n={n}: {check:?}");
        }
    }
    let check = check_construction(&cyclic_c_matrix(9, 5).unwrap(), 5).unwrap();
    assert!(check.consistent());
    assert_eq!(check.potential_group.unwrap().name(), "Z9");
}

#[test]
fn witnesses_are_enumerated_monomials() {
    for n in 2..=4usize {
        let all = enumerate_monomials(n + 1);
        for p in 1..=(1u64 << n) {
            for m in cyclic_c_matrix(p, n).unwrap().realize() {
                assert!(all.contains(&m.canonical()), "{m}");
            }
        }
    }
}

#[test]
fn products() {
    let pc = product_c_matrix(&[1, 2], &[2, 3]).unwrap();
    assert_eq!(pc.c.group().unwrap().name(), "Z6");
    assert_eq!(pc.blocks[0].bound, BlockBound::Boundary);
    assert_eq!(pc.blocks[1].bound, BlockBound::Strict);

    let pc = product_c_matrix(&[1, 1], &[2, 2]).unwrap();
    assert_eq!(pc.c.group().unwrap().name(), "Z2xZ2");

    let pc = product_c_matrix(&[3], &[1]).unwrap();
    assert!(pc.c.group().unwrap().is_trivial());

    let pc = product_c_matrix(&[2, 2, 1], &[4, 3, 2]).unwrap();
    assert_eq!(pc.c.group().unwrap(), GroupSignature::finite(&[4, 3, 2]));
    assert!(check_construction(&pc.c, 5).unwrap().consistent());
}

#[test]
fn all_products_up_to_six() {
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        (1..=n)
            .flat_map(|k| {
                compositions(n - k).into_iter().map(move |mut r| {
                    r.insert(0, k);
                    r
                })
            })
            .collect()
    }
    for n in 1..=6 {
        for parts in compositions(n) {
            let mut orders = vec![vec![]];
            for &k in &parts {
                orders = orders
                    .into_iter()
                    .flat_map(|o: Vec<u64>| {
                        (1..=(1u64 << k)).map(move |p| {
                            let mut o = o.clone();
                            o.push(p);
                            o
                        })
                    })
                    .collect();
            }
            for o in orders {
                let pc = product_c_matrix(&parts, &o).unwrap();
                assert_eq!(
                    pc.c.group().unwrap(),
                    GroupSignature::finite(&o),
                    "{parts:?} {o:?}"
                );
            }
        }
    }
}
