use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use bredon_core::closed_form::{closed_form_homology, even_homology, kunneth_product, right_angled_homology};
use bredon_core::coxeter::{enumerate_spherical, parse_matrix, CoxeterMatrix};
use bredon_core::homology::{homology_at, smith_normal_form, FgAbGroup, IntegerMatrix};
use bredon_core::repr::DEFAULT_ORDER_CAP;
use bredon_core::{chain_homology, Error, HomologyProfile};

fn symmetric(n: usize, labels: Vec<i64>) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1i64; n]; n];
    let mut it = labels.into_iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = it.next().unwrap();
            rows[i][j] = m;
            rows[j][i] = m;
        }
    }
    rows
}

fn coxeter(labels: impl Strategy<Value = i64> + Clone, max_rank: usize) -> impl Strategy<Value = CoxeterMatrix> {
    (1..=max_rank).prop_flat_map(move |n| {
        proptest::collection::vec(labels.clone(), n * (n - 1) / 2)
            .prop_map(move |ls| parse_matrix(&symmetric(n, ls)).unwrap())
    })
}

fn any_label() -> impl Strategy<Value = i64> + Clone {
    prop::sample::select(vec![2i64, 3, 4, 5, 6, 0])
}

fn chain(w: &CoxeterMatrix) -> HomologyProfile {
    chain_homology(w, DEFAULT_ORDER_CAP, None).unwrap()
}

fn block_diagonal(a: &CoxeterMatrix, b: &CoxeterMatrix) -> CoxeterMatrix {
    let (ra, rb) = (a.to_raw(), b.to_raw());
    let n = ra.len() + rb.len();
    let mut rows = vec![vec![2i64; n]; n];
    for (i, row) in ra.iter().enumerate() {
        rows[i][..ra.len()].copy_from_slice(row);
    }
    for (i, row) in rb.iter().enumerate() {
        rows[ra.len() + i][ra.len()..].copy_from_slice(row);
    }
    parse_matrix(&rows).unwrap()
}

fn group() -> impl Strategy<Value = FgAbGroup> {
    (0usize..4, proptest::collection::vec(0u32..13, 0..4))
        .prop_map(|(f, ts)| FgAbGroup::from_cyclic(f, ts.into_iter().map(BigUint::from)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_agrees_with_chain(w in coxeter(any_label(), 4)) {
        match closed_form_homology(&w, DEFAULT_ORDER_CAP) {
            Ok(closed) => prop_assert!(closed.same_groups(&chain(&w)), "{w}: closed {closed}, chain {}", chain(&w)),
            Err(Error::Precondition(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn even_matches_chain(w in coxeter(prop::sample::select(vec![2i64, 4, 6, 8, 0]), 4)) {
        let even = even_homology(&w).unwrap();
        prop_assert!(even.same_groups(&chain(&w)));
    }

    #[test]
    fn right_angled_three_ways(w in coxeter(prop::sample::select(vec![2i64, 0]), 5)) {
        let s = enumerate_spherical(&w).total();
        let ra = right_angled_homology(&w).unwrap();
        let even = even_homology(&w).unwrap();
        prop_assert_eq!(ra.get(0), FgAbGroup::free(s));
        prop_assert!(ra.same_groups(&even));
        prop_assert!(ra.same_groups(&chain(&w)));
    }

    #[test]
    fn kunneth_matches_products(a in coxeter(any_label(), 2), b in coxeter(any_label(), 2)) {
        let product = block_diagonal(&a, &b);
        let k = kunneth_product(&chain(&a), &chain(&b));
        prop_assert!(k.same_groups(&chain(&product)), "{product}: kunneth {k}");
    }

    #[test]
    fn tensor_and_tor_are_symmetric(a in group(), b in group()) {
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        prop_assert_eq!(a.tor(&b), b.tor(&a));
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
    }

    #[test]
    fn tensor_distributes_over_sums(a in group(), b in group(), c in group()) {
        prop_assert_eq!(a.tensor(&b.direct_sum(&c)), a.tensor(&b).direct_sum(&a.tensor(&c)));
        prop_assert_eq!(a.tor(&b.direct_sum(&c)), a.tor(&b).direct_sum(&a.tor(&c)));
    }

    #[test]
    fn group_json_roundtrip(a in group()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<FgAbGroup>(&text).unwrap(), a);
    }

    /// `H_0` of `Z^r <- Z^c` is the cokernel, read off the Smith form.
    #[test]
    fn cokernel_homology_matches_smith(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..=6, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
        let a = IntegerMatrix::from_rows(&m);
        let h = homology_at(&IntegerMatrix::zeros(0, rows), &a).unwrap();
        let snf = smith_normal_form(&a);
        let orders = snf.diagonal.iter().map(|d| d.magnitude().clone());
        prop_assert_eq!(h, FgAbGroup::from_cyclic(rows - snf.rank(), orders));
    }

    /// Unimodular changes of basis leave the Smith form alone.
    #[test]
    fn smith_form_is_invariant(seed in proptest::collection::vec(-5i64..=5, 9), k in -4i64..=4) {
        let m: Vec<Vec<i64>> = (0..3).map(|i| seed[i * 3..i * 3 + 3].to_vec()).collect();
        let a = IntegerMatrix::from_rows(&m);
        let u = IntegerMatrix::from_rows(&[vec![1, k, 0], vec![0, 1, 0], vec![0, -k, 1]]);
        let v = IntegerMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![k, 0, 1]]);
        let abs = |f: bredon_core::homology::SmithForm| f.diagonal.into_iter().map(|d| d.magnitude().clone()).collect::<Vec<_>>();
        prop_assert_eq!(abs(smith_normal_form(&u.mul(&a).mul(&v))), abs(smith_normal_form(&a)));
    }
}

#[test]
fn torsion_in_a_hand_built_complex() {
    // Z --2--> Z: H_0 = Z/2, H_1 = 0.
    let d1 = IntegerMatrix::from_rows(&[vec![BigInt::from(2)]]);
    let h0 = homology_at(&IntegerMatrix::zeros(0, 1), &d1).unwrap();
    assert_eq!(h0, FgAbGroup::from_cyclic(0, [BigUint::from(2u8)]));
    let h1 = homology_at(&d1, &IntegerMatrix::zeros(1, 0)).unwrap();
    assert!(h1.is_zero());
}

#[test]
fn kunneth_tor_shifts_up() {
    let z2 = FgAbGroup::from_cyclic(0, [BigUint::from(2u8)]);
    let p = HomologyProfile::new(bredon_core::Method::Chain, "t").with(0, z2.clone());
    let k = kunneth_product(&p, &p);
    assert_eq!(k.get(0), z2);
    assert_eq!(k.get(1), z2);
}
