//! Irreducible flag manifolds: the Levi subalgebra of a crossed node, the
//! quantum tangent spaces and the invariant vectors that cut out the
//! coordinate ring of the flag manifold.
//!
//! Node indices are zero-based here; `r = 0` is the first node.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::cartan::{CartanData, LieType, Weight};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::reps::{highest_weight_vectors, RepCache};
use crate::scalar::Scalar;
use crate::uqg::{AlgebraElement, Monomial, RossoForm, Uq};

pub struct FlagData {
    uq: Arc<Uq>,
    r: usize,
    n: i64,
    lambda: Weight,
    levi: Vec<usize>,
    cache: Arc<RepCache>,
    rosso: RossoForm,
}

impl std::fmt::Debug for FlagData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FlagData({:?}, r = {}, n = {})", self.uq, self.r, self.n)
    }
}

/// Basis of the tangent spaces. `minus[i]` is the unnormalized weight vector
/// `Y_i`, `plus[i] = Y_i*`, and the normalized vectors are
/// `X_i = √norms[i] · Y_i`, `Xⁱ = √norms[i] · Y_i*`, so that `⟨X_i, Xʲ⟩ = δ_ij`.
#[derive(Clone, Debug)]
pub struct TangentBasis {
    pub minus: Vec<AlgebraElement>,
    pub plus: Vec<AlgebraElement>,
    pub weights: Vec<Weight>,
    pub norms: Vec<Scalar>,
}

impl TangentBasis {
    pub fn dim(&self) -> usize {
        self.minus.len()
    }
}

impl FlagData {
    /// Flag manifold `G/P` with crossed node `r` and `λ = -2n ω_r`.
    pub fn new(cartan: CartanData, r: usize, n: i64) -> Result<Self> {
        if r >= cartan.rank {
            return Err(Error::OutOfSupportedDomain(format!("node {r} out of range")));
        }
        if n <= 0 {
            return Err(Error::OutOfSupportedDomain(format!("n must be positive, got {n}")));
        }
        if cartan.lie_type != LieType::A {
            return Err(Error::UnsupportedType(format!(
                "{}{} with crossed node {}: only type A flag manifolds are supported",
                cartan.lie_type,
                cartan.rank,
                r + 1
            )));
        }
        let lambda = cartan.omega(r).scale(-2 * n);
        let levi = (0..cartan.rank).filter(|&i| i != r).collect();
        let uq = Arc::new(Uq::new(cartan)?);
        let rosso = RossoForm::new(&uq)?;
        Ok(FlagData {
            uq,
            r,
            n,
            lambda,
            levi,
            cache: Arc::new(RepCache::new()),
            rosso,
        })
    }

    pub fn uq(&self) -> &Arc<Uq> {
        &self.uq
    }

    pub fn cartan(&self) -> &CartanData {
        self.uq.cartan()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    /// Simple roots of the Levi subalgebra.
    pub fn levi(&self) -> &[usize] {
        &self.levi
    }

    pub fn cache(&self) -> &Arc<RepCache> {
        &self.cache
    }

    pub fn rosso(&self) -> &RossoForm {
        &self.rosso
    }

    /// `K_{ω_i}` for every `i` and `E_i`, `F_i` for `i ≠ r`.
    pub fn levi_generators(&self) -> Vec<AlgebraElement> {
        let c = self.cartan();
        let mut out: Vec<AlgebraElement> = (0..c.rank).map(|i| self.uq.k(&c.omega(i))).collect();
        for &i in &self.levi {
            out.push(self.uq.e(i));
            out.push(self.uq.f(i));
        }
        out
    }

    /// Complex dimension of the flag manifold: positive roots involving `α_r`.
    pub fn classical_dim(&self) -> usize {
        self.cartan().positive_roots().iter().filter(|c| c[self.r] != 0).count()
    }

    /// `X_0 = K_λ - 1`.
    pub fn x0(&self) -> AlgebraElement {
        self.uq.k(&self.lambda).sub(&self.uq.one())
    }

    /// `X_1 = F_r ▷ X_0 = (1 - q^{2n d_r}) F_r K_r K_λ`.
    pub fn x1(&self) -> AlgebraElement {
        let c = self.cartan();
        let coeff = Scalar::one() - c.q_pow(2 * self.n * c.d[self.r]);
        let mut m = self.uq.unit_monomial();
        m.f[self.uq.simple_index(self.r)] = 1;
        m.k = &c.alpha(self.r) + &self.lambda;
        AlgebraElement::from_monomial(m, coeff)
    }

    /// Basis of `𝔲₋ = ad(U_q(𝔩)) X_1`, one weight vector per weight, in
    /// order of discovery.
    pub fn tangent_minus(&self) -> Result<Vec<(AlgebraElement, Weight)>> {
        let budget = 4 * self.classical_dim();
        let mut basis: Vec<(AlgebraElement, Weight)> = Vec::new();
        let mut coords: Vec<Monomial> = Vec::new();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut frontier = vec![self.x1()];
        let gens: Vec<AlgebraElement> = self.levi.iter().flat_map(|&i| [self.uq.e(i), self.uq.f(i)]).collect();
        let mut first = true;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            let candidates: Vec<AlgebraElement> = if first {
                first = false;
                frontier.clone()
            } else {
                frontier
                    .iter()
                    .flat_map(|x| gens.iter().map(move |g| (g, x)))
                    .map(|(g, x)| self.uq.ad(g, x))
                    .collect()
            };
            for y in candidates {
                if y.is_zero() {
                    continue;
                }
                for (m, _) in y.terms() {
                    if !coords.contains(m) {
                        coords.push(m.clone());
                    }
                }
                let v: Vec<Scalar> = coords.iter().map(|m| y.coefficient(m)).collect();
                let mut trial: Vec<Vec<Scalar>> = rows
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.resize(coords.len(), Scalar::zero());
                        r
                    })
                    .collect();
                trial.push(v.clone());
                if Mat::from_rows(trial.clone()).rank() == trial.len() {
                    let w = self.uq.weight_of(&y).ok_or_else(|| {
                        Error::WellDefinednessViolated("tangent vector is not a weight vector".into())
                    })?;
                    rows = trial;
                    basis.push((y.clone(), w));
                    next.push(y);
                    if basis.len() > budget {
                        return Err(Error::ClosureBudgetExceeded(budget));
                    }
                }
            }
            frontier = next;
        }
        Ok(basis)
    }

    /// Tangent bases with `Xⁱ = X_i*` and the Rosso normalization.
    pub fn tangent(&self) -> Result<TangentBasis> {
        let minus_w = self.tangent_minus()?;
        let mut seen = BTreeMap::new();
        for (k, (_, w)) in minus_w.iter().enumerate() {
            if seen.insert(w.clone(), k).is_some() {
                return Err(Error::WellDefinednessViolated(format!("repeated tangent weight {w}")));
            }
        }
        let minus: Vec<AlgebraElement> = minus_w.iter().map(|(x, _)| x.clone()).collect();
        let weights = minus_w.into_iter().map(|(_, w)| w).collect();
        let plus: Vec<AlgebraElement> = minus.iter().map(|x| self.uq.star(x)).collect();
        let mut basis = TangentBasis {
            minus,
            plus,
            weights,
            norms: Vec::new(),
        };
        self.normalize_dual(&mut basis)?;
        Ok(basis)
    }

    /// Sets `norms[i] = 1 / ⟨Y_i, Y_i*⟩`.
    pub fn normalize_dual(&self, basis: &mut TangentBasis) -> Result<()> {
        let mut norms = Vec::with_capacity(basis.dim());
        for (i, (y, ys)) in basis.minus.iter().zip(&basis.plus).enumerate() {
            let p = self.rosso.pairing(&self.uq, y, ys)?;
            if p.is_zero() {
                return Err(Error::DegeneratePairing(i));
            }
            norms.push(p.inv());
        }
        basis.norms = norms;
        Ok(())
    }

    /// `⟨X_i, Xʲ⟩` after normalization, exactly.
    pub fn normalized_pairing_matrix(&self, basis: &TangentBasis) -> Result<Mat> {
        let m = basis.dim();
        let mut out = Mat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let p = self.rosso.pairing(&self.uq, &basis.minus[i], &basis.plus[j])?;
                if !p.is_zero() {
                    if i != j {
                        return Err(Error::WellDefinednessViolated(format!(
                            "off-diagonal Rosso pairing ({i}, {j})"
                        )));
                    }
                    out.set(i, i, &p * &basis.norms[i]);
                }
            }
        }
        Ok(out)
    }

    /// Real dimension of the star-fixed part of `𝔲 = 𝔲₋ ⊕ 𝔲₊` at numeric `q`.
    pub fn u0_real_dimension(&self, basis: &TangentBasis, q: f64) -> usize {
        let c = self.cartan();
        let elems: Vec<&AlgebraElement> = basis.minus.iter().chain(&basis.plus).collect();
        let mut monos: Vec<Monomial> = Vec::new();
        for x in &elems {
            for (m, _) in x.terms() {
                if !monos.contains(m) {
                    monos.push(m.clone());
                }
            }
        }
        let coord = |x: &AlgebraElement| -> Vec<f64> { monos.iter().map(|m| c.eval(&x.coefficient(m), q)).collect() };
        let n = elems.len();
        let b = DMatrix::from_fn(monos.len(), n, |i, j| coord(elems[j])[i]);
        let stars: Vec<AlgebraElement> = elems.iter().map(|x| self.uq.star(x)).collect();
        let sb = DMatrix::from_fn(monos.len(), n, |i, j| coord(&stars[j])[i]);
        // star in the basis: B R = star(B); coefficients are real so the
        // antilinear map acts as R on real parts and as R on imaginary parts.
        let r = b.clone().svd(true, true).solve(&sb, 1e-12).expect("least squares");
        let id = DMatrix::<f64>::identity(n, n);
        let fixed_re = n - (&r - &id).rank(1e-9);
        let fixed_im = n - (&r + &id).rank(1e-9);
        fixed_re + fixed_im
    }

    /// Basis of the vectors of `V_μ` on which the Levi subalgebra acts by the counit.
    pub fn invariant_subspace_basis(&self, mu: &Weight) -> Result<Vec<Vec<Scalar>>> {
        let all: Vec<usize> = (0..self.cartan().rank).collect();
        let rep = self.cache.get(&self.uq, mu, &all)?;
        let zero = Weight::zero(self.cartan().rank);
        let mut out = Vec::new();
        for v in highest_weight_vectors(&rep, &zero, &self.levi) {
            let killed = self.levi.iter().all(|&i| {
                rep.f_matrix(i)
                    .expect("levi root")
                    .mul_vec(&v)
                    .iter()
                    .all(Scalar::is_zero)
            });
            if killed {
                out.push(v);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_cartan;

    fn flag(rank: usize, n: i64) -> FlagData {
        FlagData::new(build_cartan(LieType::A, rank).unwrap(), 0, n).unwrap()
    }

    #[test]
    fn x1_is_the_lowered_torus_element() {
        for fd in [flag(1, 1), flag(1, 2), flag(2, 1)] {
            let u = fd.uq();
            assert_eq!(fd.x1(), u.ad(&u.f(fd.r()), &fd.x0()));
            assert_eq!(u.ad(&u.f(fd.r()), &fd.x0()), u.ad(&u.f(fd.r()), &u.k(fd.lambda())));
            let mu = Weight(vec![1; fd.cartan().rank]);
            let expected = fd.x1().scale(&fd.cartan().q_pairing(&mu, &fd.cartan().alpha(fd.r())).inv());
            assert_eq!(u.ad(&u.k(&mu), &fd.x1()), expected);
            for &i in fd.levi() {
                assert!(u.ad(&u.e(i), &fd.x1()).is_zero());
                assert!(u.ad(&u.e(i), &u.k(fd.lambda())).is_zero());
            }
        }
    }

    #[test]
    fn tangent_spaces() {
        let fd = flag(1, 1);
        let t = fd.tangent().unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.weights, vec![Weight(vec![-2])]);
        let fd2 = flag(2, 1);
        let t2 = fd2.tangent().unwrap();
        assert_eq!(t2.dim(), 2);
        assert_eq!(t2.weights, vec![Weight(vec![-2, 1]), Weight(vec![-1, -1])]);
        for (fd, t) in [(&fd, &t), (&fd2, &t2)] {
            let m = fd.normalized_pairing_matrix(t).unwrap();
            assert_eq!(m, Mat::identity(t.dim()));
            let u = fd.uq();
            for g in fd.levi_generators() {
                for x in &t.minus {
                    let y = u.ad(&g, x);
                    if let Some(w) = u.weight_of(&y) {
                        let k = t.weights.iter().position(|v| v == &w).unwrap();
                        let ratio = y.terms().next().map(|(mm, c)| c / &t.minus[k].coefficient(mm)).unwrap();
                        assert_eq!(y, t.minus[k].scale(&ratio));
                    }
                }
            }
            assert_eq!(fd.u0_real_dimension(t, 1.2), 2 * t.dim());
            let mut again = t.clone();
            fd.normalize_dual(&mut again).unwrap();
            assert_eq!(again.norms, t.norms);
        }
    }

    #[test]
    fn invariant_vectors() {
        let fd = flag(1, 1);
        assert_eq!(fd.invariant_subspace_basis(&Weight(vec![0])).unwrap().len(), 1);
        assert_eq!(fd.invariant_subspace_basis(&Weight(vec![1])).unwrap().len(), 0);
        assert_eq!(fd.invariant_subspace_basis(&Weight(vec![2])).unwrap().len(), 1);
        let fd2 = flag(2, 1);
        for lam in fd2.cartan().dominant_weights_up_to(4) {
            let (a, b) = (lam.coords()[0], lam.coords()[1]);
            let expected = usize::from(a == b);
            assert_eq!(fd2.invariant_subspace_basis(&lam).unwrap().len(), expected, "λ = {lam}");
        }
    }
}
