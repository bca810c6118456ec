use super::*;
use crate::cartan::{build_cartan, LieType};
use crate::clifford::gamma_embedding;
use crate::flag::FlagData;

fn setup(rank: usize) -> (FlagData, SpinSpace) {
    let fd = FlagData::new(build_cartan(LieType::A, rank).unwrap(), 0, 1).unwrap();
    let tb = fd.tangent().unwrap();
    let spin = SpinSpace::new(&fd, &tb).unwrap();
    let (spin, _) = gamma_embedding(&fd, &tb, &spin).unwrap();
    (fd, spin)
}

fn podles(fd: &FlagData) -> Vec<Function> {
    invariant_functions(fd, &Weight(vec![2])).unwrap()
}

/// `Mᵀ P_dst = P_src N` for an operator `M: src → dst` and `N: dst → src`.
fn adjoint_pair(m: &Mat, n: &Mat, src: &SectionSpace, dst: &SectionSpace) -> bool {
    let lhs = &m.transpose() * &dst.blocks.iter().fold(Mat::zeros(dst.dim(), dst.dim()), |mut acc, b| {
        place(&mut acc, b.offset, b.offset, &b.gram());
        acc
    });
    let p_src = src.blocks.iter().fold(Mat::zeros(src.dim(), src.dim()), |mut acc, b| {
        place(&mut acc, b.offset, b.offset, &b.gram());
        acc
    });
    lhs == &p_src * n
}

fn restrict_rows(m: &Mat, rows: usize) -> Mat {
    let r: Vec<usize> = (0..rows).collect();
    let c: Vec<usize> = (0..m.cols()).collect();
    m.submatrix(&r, &c)
}

#[test]
fn hom_dimensions_follow_weight_matching() {
    let (fd, spin) = setup(1);
    assert_eq!(hom_space(&fd, &spin, &Weight(vec![1])).unwrap().len(), 2);
    assert_eq!(hom_space(&fd, &spin, &Weight(vec![0])).unwrap().len(), 0);
    assert_eq!(hom_space(&fd, &spin, &Weight(vec![2])).unwrap().len(), 0);
    assert_eq!(SectionSpace::new(&fd, &spin, 1).unwrap().dim(), 4);
    assert!(SectionSpace::new(&fd, &spin, 0).unwrap().is_empty());
    let (fd, spin) = setup(2);
    let alpha2 = fd.cartan().alpha(1);
    for lambda in fd.cartan().dominant_weights_up_to(3) {
        let rep = fd.cache().get(fd.uq(), &lambda, &[0, 1]).unwrap();
        let mult = |w: &Weight| rep.weights().iter().filter(|v| *v == w).count() as i64;
        // multiplicity of the Levi module with highest weight w is mult(w) - mult(w + α₂)
        let expected: i64 = spin.summands.iter().map(|s| mult(&s.highest) - mult(&(&s.highest + &alpha2))).sum();
        let h = hom_space(&fd, &spin, &lambda).unwrap().len() as i64;
        assert_eq!(h, expected, "{lambda}");
    }
}

#[test]
fn grams_are_positive_and_symmetric() {
    for rank in [1, 2] {
        let (fd, spin) = setup(rank);
        let space = SectionSpace::new(&fd, &spin, if rank == 1 { 5 } else { 3 }).unwrap();
        assert!(!space.is_empty());
        for b in &space.blocks {
            assert_eq!(b.hom_gram, b.hom_gram.transpose());
            assert_eq!(b.leg_gram, b.leg_gram.transpose());
        }
        for q in [1.05, 1.2, 2.0] {
            let g = space.gram_numeric(&fd, q);
            assert!(numeric::symmetric_eigenvalues(&g).iter().all(|&e| e > 0.0), "rank {rank} q {q}");
        }
    }
}

#[test]
fn right_action_is_adjointable_and_diagonal_on_the_torus() {
    let (fd, spin) = setup(1);
    let u = fd.uq();
    let space = SectionSpace::new(&fd, &spin, 4).unwrap();
    for x in [u.e(0), u.f(0), u.mul(&u.e(0), &u.f(0)), u.k_simple(0)] {
        let m = space.right_action(u, &x).unwrap();
        let n = space.right_action(u, &u.star(&x)).unwrap();
        assert!(adjoint_pair(&m, &n, &space, &space));
    }
    assert_eq!(space.right_action(u, &u.one()).unwrap(), Mat::identity(space.dim()));
    let k = space.right_action(u, &u.k_simple(0)).unwrap();
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            assert_eq!(k.get(i, j).is_zero(), i != j);
        }
    }
}

#[test]
fn constant_function_acts_as_identity() {
    let (fd, spin) = setup(1);
    let products = ProductCache::new();
    let space = SectionSpace::new(&fd, &spin, 3).unwrap();
    let (m, dropped) = coordinate_action(&fd, &products, &space, &space, &Function::one(1), Truncation::Forbid).unwrap();
    assert!(!dropped);
    assert_eq!(m, Mat::identity(space.dim()));
}

#[test]
fn cutoff_too_small_is_reported() {
    let (fd, spin) = setup(1);
    let products = ProductCache::new();
    let space = SectionSpace::new(&fd, &spin, 3).unwrap();
    let f = &podles(&fd)[1];
    let err = coordinate_action(&fd, &products, &space, &space, f, Truncation::Forbid).unwrap_err();
    assert!(matches!(err, Error::CutoffTooSmall { requested: 3, needed: 5 }));
    let (_, dropped) = coordinate_action(&fd, &products, &space, &space, f, Truncation::Allow).unwrap();
    assert!(dropped);
}

#[test]
fn podles_generators_shift_lambda_by_at_most_two() {
    let (fd, spin) = setup(1);
    let products = ProductCache::new();
    let src = SectionSpace::new(&fd, &spin, 5).unwrap();
    let dst = SectionSpace::new(&fd, &spin, 7).unwrap();
    for f in podles(&fd) {
        let (m, _) = coordinate_action(&fd, &products, &src, &dst, &f, Truncation::Forbid).unwrap();
        assert!(!m.is_zero());
        for bs in &src.blocks {
            for bd in &dst.blocks {
                let diff = (bs.lambda.coords()[0] - bd.lambda.coords()[0]).abs();
                let rows: Vec<usize> = (bd.offset..bd.offset + bd.dim()).collect();
                let cols: Vec<usize> = (bs.offset..bs.offset + bs.dim()).collect();
                if diff > 2 {
                    assert!(m.submatrix(&rows, &cols).is_zero());
                }
            }
        }
    }
}

#[test]
fn star_of_a_function_gives_the_adjoint_operator() {
    let (fd, spin) = setup(1);
    let products = ProductCache::new();
    let src = SectionSpace::new(&fd, &spin, 3).unwrap();
    let dst = SectionSpace::new(&fd, &spin, 5).unwrap();
    let far = SectionSpace::new(&fd, &spin, 7).unwrap();
    for f in podles(&fd) {
        let fs = star_function(&fd, &f).unwrap();
        let (m, _) = coordinate_action(&fd, &products, &src, &dst, &f, Truncation::Forbid).unwrap();
        let (n, _) = coordinate_action(&fd, &products, &dst, &far, &fs, Truncation::Forbid).unwrap();
        assert!(adjoint_pair(&m, &restrict_rows(&n, src.dim()), &src, &dst));
    }
}

#[test]
fn multiplication_is_an_algebra_action_covariant_under_the_right_action() {
    let (fd, spin) = setup(1);
    let u = fd.uq();
    let products = ProductCache::new();
    let s1 = SectionSpace::new(&fd, &spin, 3).unwrap();
    let s2 = SectionSpace::new(&fd, &spin, 5).unwrap();
    let s3 = SectionSpace::new(&fd, &spin, 7).unwrap();
    let fs = podles(&fd);
    for f in &fs {
        for g in &fs {
            let fg = multiply(&fd, &products, f, g).unwrap();
            let (rfg, _) = coordinate_action(&fd, &products, &s1, &s3, &fg, Truncation::Forbid).unwrap();
            let (rf, _) = coordinate_action(&fd, &products, &s1, &s2, f, Truncation::Forbid).unwrap();
            let (rg, _) = coordinate_action(&fd, &products, &s2, &s3, g, Truncation::Forbid).unwrap();
            assert_eq!(rfg, &rg * &rf);
        }
        // (s f) ◁ X = (s ◁ X_(1)) (f ◁ X_(2)), with (f ◁ Z) obtained from β ↦ ρ_μ(S Z) β
        let rep = fd.cache().get(u, &f.terms[0].mu, &[0]).unwrap();
        for x in [u.e(0), u.f(0), u.k_simple(0), u.mul(&u.e(0), &u.f(0))] {
            let (rf, _) = coordinate_action(&fd, &products, &s1, &s2, f, Truncation::Forbid).unwrap();
            let lhs = &s2.right_action(u, &x).unwrap() * &rf;
            let mut rhs = Mat::zeros(s2.dim(), s1.dim());
            for (key, c) in u.coproduct(&x).terms() {
                let x1 = AlgebraElement::from_monomial(key[0].clone(), Scalar::one());
                let x2 = AlgebraElement::from_monomial(key[1].clone(), Scalar::one());
                let mut moved = f.clone();
                moved.terms[0].beta = rep.act(u, &u.antipode(&x2)).unwrap().mul_vec(&f.terms[0].beta);
                let (r2, _) = coordinate_action(&fd, &products, &s1, &s2, &moved, Truncation::Forbid).unwrap();
                rhs = &rhs + &(&r2 * &s1.right_action(u, &x1).unwrap()).scale(c);
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn a2_sections_accept_products() {
    let (fd, spin) = setup(2);
    let products = ProductCache::new();
    let src = SectionSpace::new(&fd, &spin, 2).unwrap();
    let dst = SectionSpace::new(&fd, &spin, 4).unwrap();
    let fs = invariant_functions(&fd, &Weight(vec![1, 1])).unwrap();
    assert_eq!(fs.len(), 8);
    let (m, dropped) = coordinate_action(&fd, &products, &src, &dst, &fs[0], Truncation::Forbid).unwrap();
    assert!(!dropped && !m.is_zero());
}

#[test]
fn a2_star_of_a_function_gives_the_adjoint_operator() {
    let (fd, spin) = setup(2);
    let products = ProductCache::new();
    let src = SectionSpace::new(&fd, &spin, 1).unwrap();
    let dst = SectionSpace::new(&fd, &spin, 3).unwrap();
    let far = SectionSpace::new(&fd, &spin, 5).unwrap();
    let fs = invariant_functions(&fd, &Weight(vec![1, 1])).unwrap();
    for f in [&fs[0], &fs[3], &fs[7]] {
        let fstar = star_function(&fd, f).unwrap();
        let (m, _) = coordinate_action(&fd, &products, &src, &dst, f, Truncation::Forbid).unwrap();
        let (n, _) = coordinate_action(&fd, &products, &dst, &far, &fstar, Truncation::Forbid).unwrap();
        assert!(adjoint_pair(&m, &restrict_rows(&n, src.dim()), &src, &dst));
    }
}
