use std::collections::BTreeMap;

use super::*;
use crate::cartan::{build_cartan, LieType};

fn uq(rank: usize) -> Uq {
    Uq::new(build_cartan(LieType::A, rank).unwrap()).unwrap()
}

fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

/// Weight multiplicities of the sl3 module `(a, b)` by counting Gelfand–Tsetlin patterns.
fn gt_multiplicities(a: i64, b: i64) -> BTreeMap<Weight, usize> {
    let top = [a + b, b, 0];
    let mut out = BTreeMap::new();
    for m12 in top[1]..=top[0] {
        for m22 in top[2]..=top[1] {
            for m11 in m22..=m12 {
                let s1 = m11;
                let s2 = m12 + m22;
                let s3 = top.iter().sum::<i64>();
                let gl = [s1, s2 - s1, s3 - s2];
                *out.entry(w(&[gl[0] - gl[1], gl[1] - gl[2]])).or_insert(0) += 1;
            }
        }
    }
    out
}

fn multiplicities(rep: &Rep) -> BTreeMap<Weight, usize> {
    let mut out = BTreeMap::new();
    for wt in rep.weights() {
        *out.entry(wt.clone()).or_insert(0) += 1;
    }
    out
}

#[test]
fn small_irreps() {
    let u = uq(1);
    let v = irrep(&u, &w(&[1])).unwrap();
    assert_eq!(v.weights(), &[w(&[1]), w(&[-1])]);
    let triv = irrep(&u, &w(&[0])).unwrap();
    assert_eq!(triv.dim(), 1);
    assert!(triv.e_matrix(0).unwrap().is_zero());
    let u2 = uq(2);
    let v = irrep(&u2, &w(&[1, 0])).unwrap();
    assert_eq!(v.weights(), &[w(&[1, 0]), w(&[-1, 1]), w(&[0, -1])]);
}

#[test]
fn rank_one_dimensions_and_relations() {
    let u = uq(1);
    for n in 0..8 {
        let v = irrep(&u, &w(&[n])).unwrap();
        assert_eq!(v.dim(), (n + 1) as usize);
        assert!(v.verify(&u).is_ok(), "{:?}", v.verify(&u).failures);
    }
}

#[test]
fn rank_two_multiplicities_match_gelfand_tsetlin() {
    let u = uq(2);
    for lam in u.cartan().dominant_weights_up_to(4) {
        let v = irrep(&u, &lam).unwrap();
        let (a, b) = (lam.coords()[0], lam.coords()[1]);
        assert_eq!(multiplicities(&v), gt_multiplicities(a, b), "λ = {lam}");
        assert_eq!(v.dim() as u64, u.cartan().weyl_dimension(&lam));
        let report = v.verify(&u);
        assert!(report.is_ok(), "λ = {lam}: {:?}", report.failures);
    }
}

#[test]
fn perturbation_is_detected_and_named() {
    let u = uq(1);
    let v = irrep(&u, &w(&[1])).unwrap();
    let bad = v.perturbed(0, 0, 1, &Scalar::one());
    let report = bad.verify(&u);
    assert!(!report.is_ok());
    assert!(report.first_failure().unwrap().contains("E_1"), "{:?}", report.failures);
}

#[test]
fn tensor_and_dual_modules_verify() {
    let u = uq(2);
    let a = irrep(&u, &w(&[1, 0])).unwrap();
    let b = irrep(&u, &w(&[0, 1])).unwrap();
    let t = a.tensor(&u, &b);
    assert!(t.verify(&u).is_ok(), "{:?}", t.verify(&u).failures);
    for d in [a.dual(&u).unwrap(), a.dual_right(&u).unwrap(), b.dual(&u).unwrap()] {
        let r = d.verify(&u);
        assert!(r.is_ok(), "{:?}", r.failures);
    }
}

#[test]
fn clebsch_gordan_decompositions() {
    let cache = RepCache::new();
    let u = uq(1);
    let v = irrep(&u, &w(&[1])).unwrap();
    let t = v.tensor(&u, &v);
    let comps = decompose(&u, &t, &[0], &cache).unwrap();
    let hw: Vec<Weight> = comps.iter().map(|c| c.highest.clone()).collect();
    assert_eq!(hw, vec![w(&[2]), w(&[0])]);
    for c in &comps {
        let pi_iota = &c.pi * &c.iota;
        assert_eq!(pi_iota, crate::linalg::Mat::identity(c.irrep.dim()));
        // ι is a module map
        for x in [u.e(0), u.f(0)] {
            assert_eq!(&t.act(&u, &x).unwrap() * &c.iota, &c.iota * &c.irrep.act(&u, &x).unwrap());
        }
    }
    let u2 = uq(2);
    let a = irrep(&u2, &w(&[1, 0])).unwrap();
    let b = irrep(&u2, &w(&[0, 1])).unwrap();
    let comps = decompose(&u2, &a.tensor(&u2, &b), &[0, 1], &cache).unwrap();
    assert_eq!(comps.iter().filter(|c| c.highest.is_zero()).count(), 1);
    assert_eq!(comps.len(), 2);
}

#[test]
fn schur_lemma() {
    let u = uq(2);
    let a = irrep(&u, &w(&[1, 0])).unwrap();
    let b = irrep(&u, &w(&[0, 1])).unwrap();
    let c = irrep(&u, &w(&[1, 1])).unwrap();
    assert_eq!(intertwiners(&u, &a, &a, &Subalgebra::Full).unwrap().len(), 1);
    assert_eq!(intertwiners(&u, &c, &c, &Subalgebra::Full).unwrap().len(), 1);
    assert!(intertwiners(&u, &a, &b, &Subalgebra::Full).unwrap().is_empty());
    // the trivial summand of a ⊗ b
    let triv = irrep(&u, &w(&[0, 0])).unwrap();
    assert_eq!(intertwiners(&u, &triv, &a.tensor(&u, &b), &Subalgebra::Full).unwrap().len(), 1);
}

#[test]
fn levi_hom_space_on_the_projective_line() {
    let u = uq(1);
    let v = irrep(&u, &w(&[1])).unwrap();
    let sigma = Rep::from_parts(
        vec![w(&[-1]), w(&[1])],
        vec![None],
        vec![None],
        crate::linalg::Mat::identity(2),
    );
    let homs = intertwiners(&u, &v, &sigma, &Subalgebra::Levi(vec![])).unwrap();
    assert_eq!(homs.len(), 2);
}

#[test]
fn coefficient_pairing_and_actions() {
    let u = uq(2);
    let cache = RepCache::new();
    let lam = w(&[1, 1]);
    let mu = w(&[1, -1]);
    let rep = cache.get(&u, &lam, &[0, 1]).unwrap();
    for j in 0..rep.dim() {
        let t = MatrixCoefficient { lambda: lam.clone(), i: j, j };
        let expected = u.cartan().q_pairing(&mu, &rep.weights()[j]);
        assert_eq!(coefficient_pairing(&u, &cache, &u.k(&mu), &t).unwrap(), expected);
        assert_eq!(coefficient_pairing(&u, &cache, &u.one(), &t).unwrap(), Scalar::one());
        assert!(haar(&t).is_zero());
    }
    let t0 = MatrixCoefficient { lambda: w(&[0, 0]), i: 0, j: 0 };
    assert!(haar(&t0).is_one());
    let mut f = crate::linalg::Mat::zeros(rep.dim(), rep.dim());
    f.set(2, 3, Scalar::one());
    f.set(0, 1, Scalar::from_int(2));
    let (x, y) = (u.e(0), u.mul(&u.f(1), &u.k_simple(0)));
    let xy = u.mul(&x, &y);
    let left = left_action(&u, &rep, &x, &left_action(&u, &rep, &y, &f).unwrap()).unwrap();
    assert_eq!(left, left_action(&u, &rep, &xy, &f).unwrap());
    let right = right_action(&u, &rep, &y, &right_action(&u, &rep, &x, &f).unwrap()).unwrap();
    assert_eq!(right, right_action(&u, &rep, &xy, &f).unwrap());
}
