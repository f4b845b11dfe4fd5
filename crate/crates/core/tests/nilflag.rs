use matsys::construct::{construct_nilpotent, NilpotentFamily, SolutionTriple};
use matsys::exactnum::{int, Rat};
use matsys::matrix::Mat;
use matsys::nilflag::*;
use proptest::prelude::*;

fn n9() -> SolutionTriple<Rat> {
    construct_nilpotent(&NilpotentFamily::N9).unwrap()
}

fn n2() -> SolutionTriple<Rat> {
    construct_nilpotent(&NilpotentFamily::N2(int(1), int(1))).unwrap()
}

fn n3() -> SolutionTriple<Rat> {
    construct_nilpotent(&NilpotentFamily::N3(int(1), int(0))).unwrap()
}

// 1-based coordinate lists, as printed by hand
fn coords(ks: &[usize]) -> Option<Vec<usize>> {
    Some(ks.iter().map(|k| k - 1).collect())
}

#[test]
fn nine_by_nine_flag() {
    let f = semigroup_flag(&n9()).unwrap();
    assert_eq!(f.len(), 5);
    let idx = f.standard_indices();
    assert_eq!(idx[0], Some(vec![]));
    assert_eq!(idx[1], coords(&[1]));
    assert_eq!(idx[2], coords(&[1, 2, 6]));
    assert_eq!(idx[3], coords(&[1, 2, 3, 6, 7, 9]));
    assert_eq!(idx[4], coords(&[1, 2, 3, 4, 6, 7, 8, 9]));
    assert_eq!(signature(&f), vec![1, 2, 3, 2, 1]);
}

#[test]
fn small_flags() {
    let f = semigroup_flag(&n2()).unwrap();
    assert_eq!(f.len(), 2);
    assert_eq!(f.standard_indices()[1], coords(&[1]));
    assert_eq!(f.signature(), vec![1, 1]);

    let f = semigroup_flag(&n3()).unwrap();
    assert_eq!(f.len(), 3);
    assert_eq!(f.signature(), vec![1, 1, 1]);
    assert_eq!(f.standard_indices()[2], coords(&[1, 2]));

    // a = b = c = 0 gives the trivial flag
    let z = construct_nilpotent(&NilpotentFamily::N2(int(0), int(0))).unwrap();
    let f = semigroup_flag(&z).unwrap();
    assert_eq!(f.signature(), vec![2]);
}

#[test]
fn non_solutions_are_rejected() {
    let mut t = n9();
    t.b.set(0, 0, int(1));
    assert_eq!(semigroup_flag(&t), Err(FlagError::NotASolution));
    let mut t = n2();
    t.params.beta = int(1);
    assert_eq!(semigroup_flag(&t), Err(FlagError::NotASolution));
}

#[test]
fn nine_by_nine_algebra_and_center() {
    let t = n9();
    let ab = algebra_basis(&t).unwrap();
    assert_eq!(ab.dimension(), 8);
    assert_eq!(ab.labels(), vec!["a", "b", "ab", "ba", "a^2", "aba", "ab^2", "a^4"]);
    let z = center_basis(&t, &ab).unwrap();
    assert_eq!(z.dimension(), 5);
    assert_eq!(z.labels(), vec!["a^2", "b^2", "aba", "ab^2", "a^4"]);
}

#[test]
fn small_algebras() {
    let t = n2();
    let ab = algebra_basis(&t).unwrap();
    assert_eq!(ab.labels(), vec!["a"]);
    assert_eq!(center_basis(&t, &ab).unwrap().dimension(), 1);

    let t = n3();
    let ab = algebra_basis(&t).unwrap();
    let labels = ab.labels();
    assert!(labels.starts_with(&["a", "b"]));
    assert_eq!(t.a.pow(2).unwrap(), Mat::unit(3, 3, 0, 2));
    // a^2 = E13 lies in the span and is central
    let z = center_basis(&t, &ab).unwrap();
    let e13: Vec<Rat> = Mat::unit(3, 3, 0, 2).entries().to_vec();
    let mut rows: Vec<Vec<Rat>> = z.elements.iter().map(|e| e.matrix.entries().to_vec()).collect();
    let r = Mat::from_rows(rows.clone()).unwrap().rank();
    rows.push(e13);
    assert_eq!(Mat::from_rows(rows).unwrap().rank(), r);
}

#[test]
fn nine_by_nine_invariant() {
    let t = n9();
    assert_eq!(varpi(&t).unwrap(), int(0));
    // bab + aba + 4ab^2 - w a^4 with w = 0
    let e = |s: &str| eval_word(s, &t.a, &t.b).unwrap();
    let sum = e("bab").try_add(&e("aba")).unwrap().try_add(&e("ab^2").scale(&int(4))).unwrap();
    assert!(sum.is_zero());
}

#[test]
fn invariant_rejects_other_forms() {
    let mut t = n9();
    let v = t.b.get(5, 7).clone();
    t.b.set(5, 7, v + int(1));
    // the bumped matrix no longer solves the system
    assert_eq!(varpi(&t), Err(FlagError::NotASolution));
    assert_eq!(varpi(&n3()), Err(FlagError::NotCanonical));
}

#[test]
fn triangularizing_orders() {
    let p = triangularizing_basis(&n9()).unwrap();
    let cols: Vec<Vec<Rat>> = (0..9).map(|j| p.column(j)).collect();
    assert_eq!(standard_indices(&cols), coords(&[1, 2, 6, 3, 7, 9, 4, 8, 5]));
    assert_eq!(triangularizing_basis(&n2()).unwrap(), Mat::identity(2));
    let t = n3();
    assert_eq!(triangularizing_basis(&t).unwrap(), Mat::identity(3));
    assert!(t.a.is_strictly_upper() && t.b.is_strictly_upper());
}

fn check_flag_properties(t: &SolutionTriple<Rat>) {
    let f = semigroup_flag(t).unwrap();
    let n = t.n();
    let dims = f.dims();
    assert_eq!(dims[0], 0);
    assert_eq!(*dims.last().unwrap(), n);
    assert!(dims.windows(2).all(|w| w[0] < w[1]));
    assert!(f.len() <= MAX_CLASS);
    let a4 = t.a.pow(4).unwrap();
    if !a4.is_zero() {
        let cols: Vec<Vec<Rat>> = (0..n).map(|j| a4.column(j)).collect();
        assert_eq!(span_of(n, &cols), f.subspaces[1]);
    }
    for i in 1..f.len() {
        let next = &f.subspaces[i + 1];
        let mut vs = Vec::new();
        for m in [&t.a, &t.b] {
            let img = m.try_mul(next).unwrap();
            vs.extend((0..img.ncols()).map(|j| img.column(j)));
        }
        assert_eq!(span_of(n, &vs), f.subspaces[i]);
    }
    // each subspace is invariant
    for s in &f.subspaces {
        for m in t.matrices() {
            let img = m.try_mul(s).unwrap();
            let mut vs: Vec<Vec<Rat>> = (0..s.ncols()).map(|j| s.column(j)).collect();
            let k = vs.len();
            vs.extend((0..img.ncols()).map(|j| img.column(j)));
            assert_eq!(span_of(n, &vs).ncols(), k);
        }
    }
    let p = triangularizing_basis(t).unwrap();
    let pinv = p.inverse().unwrap();
    for m in t.matrices() {
        assert!(pinv.try_mul(m).unwrap().try_mul(&p).unwrap().is_strictly_upper());
    }
}

fn invertible(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| int(v[i * n + j]) + if i == j { int(5) } else { int(0) }))
}

#[test]
fn flag_properties_on_examples() {
    for t in [n9(), n2(), n3()] {
        check_flag_properties(&t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flag_properties_survive_conjugation(p in invertible(3), x in -4i64..=4, y in -4i64..=4) {
        prop_assume!(p.rank() == 3 && x != 0);
        let t = construct_nilpotent(&NilpotentFamily::N3(int(x), int(y))).unwrap().conjugated(&p).unwrap();
        check_flag_properties(&t);
        prop_assert_eq!(semigroup_flag(&t).unwrap().signature(), vec![1, 1, 1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn nine_by_nine_invariants_survive_conjugation(p in invertible(9)) {
        prop_assume!(p.rank() == 9);
        let t = n9().conjugated(&p).unwrap();
        check_flag_properties(&t);
        prop_assert_eq!(semigroup_flag(&t).unwrap().signature(), vec![1, 2, 3, 2, 1]);
        let ab = algebra_basis(&t).unwrap();
        prop_assert_eq!(ab.dimension(), 8);
        prop_assert_eq!(center_basis(&t, &ab).unwrap().dimension(), 5);
    }
}
