use super::*;
use crate::cartan::{build_cartan, LieType};
use crate::linalg::numeric::orthonormal_form;

fn setup(rank: usize, n: i64) -> (FlagData, TangentBasis, SpinSpace, GammaMap) {
    let fd = FlagData::new(build_cartan(LieType::A, rank).unwrap(), 0, n).unwrap();
    let tb = fd.tangent().unwrap();
    let spin = SpinSpace::new(&fd, &tb).unwrap();
    let (spin, gamma) = gamma_embedding(&fd, &tb, &spin).unwrap();
    (fd, tb, spin, gamma)
}

/// Normalized `γ(X_i)` in an orthonormal basis of `Σ`.
fn normalized(fd: &FlagData, tb: &TangentBasis, spin: &SpinSpace, gamma: &GammaMap, i: usize, q: f64) -> DMatrix<f64> {
    let c = fd.cartan();
    let t = c.t_of_q(q);
    let g = spin.sigma.gram().eval(t);
    let factor = (c.eval(&tb.norms[i], q) / c.eval(&gamma.clifford_scale, q)).sqrt();
    orthonormal_form(&gamma.minus[i].eval(t), &g, &g).unwrap() * factor
}

#[test]
fn spin_weights_carry_the_charge() {
    let (_, _, spin, _) = setup(1, 1);
    assert_eq!(spin.charge, Weight(vec![-1]));
    assert_eq!(spin.sigma.weights(), &[Weight(vec![1]), Weight(vec![-1])]);
    let (_, _, spin, _) = setup(2, 1);
    assert_eq!(spin.dim(), 4);
    let mut w: Vec<Weight> = spin.sigma.weights().to_vec();
    w.sort();
    let mut expected = vec![Weight(vec![-1, 0]), Weight(vec![1, -1]), Weight(vec![0, 1]), Weight(vec![2, 0])];
    expected.sort();
    assert_eq!(w, expected);
    assert_eq!(spin.summands.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![1, 2, 1]);
    assert!(spin.sigma.verify(&FlagData::new(build_cartan(LieType::A, 2).unwrap(), 0, 1).unwrap().uq()).is_ok());
}

#[test]
fn gamma_is_equivariant_on_both_halves() {
    for (rank, n) in [(1, 1), (1, 2), (2, 1)] {
        let (fd, tb, spin, gamma) = setup(rank, n);
        assert_eq!(gamma.hom_dim, rank);
        let failures = gamma.equivariance_failures(&fd, &tb, &spin).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
    }
}

#[test]
fn a1_gamma_is_strictly_lower_triangular() {
    let (_, _, _, gamma) = setup(1, 1);
    let g = &gamma.minus[0];
    assert!(g.get(0, 0).is_zero() && g.get(0, 1).is_zero() && g.get(1, 1).is_zero());
    assert!(!g.get(1, 0).is_zero());
}

#[test]
fn gamma_is_injective() {
    for (rank, n) in [(1, 1), (2, 1), (2, 2)] {
        let (fd, _, spin, gamma) = setup(rank, n);
        let rows: Vec<Vec<Scalar>> = gamma.minus.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(Mat::from_rows(rows).rank(), gamma.minus.len());
        // a torus prefactor does not destroy injectivity
        let k = spin.sigma.k_matrix(fd.uq(), fd.lambda());
        let rows: Vec<Vec<Scalar>> = gamma.minus.iter().map(|m| (&k * m).entries().to_vec()).collect();
        assert_eq!(Mat::from_rows(rows).rank(), gamma.minus.len());
    }
}

#[test]
fn classical_gammas_satisfy_the_clifford_relations() {
    for m in 1..=3 {
        let gs = SpinSpace::classical_gammas(m);
        let n = 1 << m;
        for (a, ga) in gs.iter().enumerate() {
            for (b, gb) in gs.iter().enumerate() {
                let ac = ga * gb + gb * ga;
                let expected = if a == b { -2.0 } else { 0.0 };
                let diff = ac - DMatrix::<Complex<f64>>::identity(n, n) * Complex::new(expected, 0.0);
                assert!(diff.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn gamma_matches_contraction_in_the_classical_limit() {
    for (rank, n) in [(1, 1), (2, 1)] {
        let (fd, tb, spin, gamma) = setup(rank, n);
        let m = tb.dim();
        let betas: Vec<Weight> = tb.weights.iter().map(|w| -w).collect();
        let mask_of = |w: &Weight| {
            (0u32..(1 << m))
                .find(|mask| {
                    let mut v = spin.charge.clone();
                    for (i, b) in betas.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            v = &v + b;
                        }
                    }
                    &v == w
                })
                .unwrap() as usize
        };
        let masks: Vec<usize> = spin.sigma.weights().iter().map(mask_of).collect();
        let cl = SpinSpace::classical_gammas(m);
        for q in [1.0 + 1e-6, 1.0 + 1e-5] {
            for i in 0..m {
                let iota = (&cl[2 * i + 1] * Complex::new(0.0, -1.0) - &cl[2 * i]) * Complex::new(0.5, 0.0);
                let ours = normalized(&fd, &tb, &spin, &gamma, i, q);
                for a in 0..spin.dim() {
                    for b in 0..spin.dim() {
                        let r = iota[(masks[a], masks[b])].norm();
                        assert!((ours[(a, b)].abs() - r).abs() < 1e-4, "q={q} i={i} ({a},{b})");
                    }
                }
            }
        }
    }
}

#[test]
fn adjoint_residual_is_rounding_level() {
    for rank in [1, 2] {
        let fd = FlagData::new(build_cartan(LieType::A, rank).unwrap(), 0, 1).unwrap();
        let tb = fd.tangent().unwrap();
        let spin = SpinSpace::new(&fd, &tb).unwrap();
        let (spin, gamma) = gamma_embedding(&fd, &tb, &spin).unwrap();
        for q in [1.05, 1.2, 2.0] {
            assert!(gamma.adjoint_residual(&fd, &spin, q).unwrap() < 1e-12);
        }
    }
}
