//! Matrix coefficients `t^λ_{ij}` and their pairing with `U_q(g)`.
//!
//! Functions on the quantum group are only represented through coefficient
//! matrices: `f = Σ c_{ij} t^λ_{ij}` is stored as the matrix `C` over the
//! weight basis of `V_λ`. With `Δ(t_{ij}) = Σ_k t_{ik} ⊗ t_{kj}`,
//!
//! ```text
//! X ▷ f = X(f_(2)) f_(1)   ⇒   C ↦ C ρ(X)ᵀ
//! f ◁ X = X(f_(1)) f_(2)   ⇒   C ↦ ρ(X)ᵀ C
//! ```

use std::sync::Arc;

use super::{Rep, RepCache};
use crate::cartan::Weight;
use crate::error::Result;
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::uqg::{AlgebraElement, Uq};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixCoefficient {
    pub lambda: Weight,
    pub i: usize,
    pub j: usize,
}

/// `X(t^λ_{ij}) = ρ_λ(X)_{ij}`.
pub fn coefficient_pairing(u: &Uq, cache: &RepCache, x: &AlgebraElement, t: &MatrixCoefficient) -> Result<Scalar> {
    let all: Vec<usize> = (0..u.rank()).collect();
    let rep = cache.get(u, &t.lambda, &all)?;
    Ok(rep.act(u, x)?.get(t.i, t.j).clone())
}

/// Haar state on a matrix coefficient: `h(t^λ_{ij}) = δ_{λ0}`.
pub fn haar(t: &MatrixCoefficient) -> Scalar {
    if t.lambda.is_zero() {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// `X ▷ f` on the coefficient matrix of `f`.
pub fn left_action(u: &Uq, rep: &Rep, x: &AlgebraElement, coeffs: &Mat) -> Result<Mat> {
    Ok(coeffs * &rep.act(u, x)?.transpose())
}

/// `f ◁ X` on the coefficient matrix of `f`.
pub fn right_action(u: &Uq, rep: &Rep, x: &AlgebraElement, coeffs: &Mat) -> Result<Mat> {
    Ok(&rep.act(u, x)?.transpose() * coeffs)
}

/// A function on the quantum group written over an arbitrary module:
/// `f(X) = Σ_{kl} C_{kl} ρ_R(X)_{kl}`.
#[derive(Clone, Debug)]
pub struct CoefficientElement {
    pub rep: Arc<Rep>,
    pub coeffs: Mat,
}

impl CoefficientElement {
    pub fn new(rep: Arc<Rep>, coeffs: Mat) -> Self {
        assert_eq!((coeffs.rows(), coeffs.cols()), (rep.dim(), rep.dim()));
        CoefficientElement { rep, coeffs }
    }

    pub fn evaluate(&self, u: &Uq, x: &AlgebraElement) -> Result<Scalar> {
        let m = self.rep.act(u, x)?;
        Ok(dot(&self.coeffs, &m))
    }

    /// `X ▷ f`, that is `Y ↦ f(Y X)`.
    pub fn left(&self, u: &Uq, x: &AlgebraElement) -> Result<Self> {
        Ok(CoefficientElement::new(self.rep.clone(), left_action(u, &self.rep, x, &self.coeffs)?))
    }

    /// `(f g)(X) = f(X_(1)) g(X_(2))`.
    pub fn mul(&self, u: &Uq, other: &Self) -> Self {
        CoefficientElement::new(Arc::new(self.rep.tensor(u, &other.rep)), self.coeffs.kron(&other.coeffs))
    }

    /// `f*(X) = conj f(S(X)*)`, written over the right dual module.
    pub fn star(&self, u: &Uq) -> Result<Self> {
        let g = self.rep.gram();
        let ginv = g
            .inverse()
            .ok_or_else(|| crate::error::Error::NumericalFailure("singular Gram".into()))?;
        let dual = self.rep.dual_right(u)?;
        Ok(CoefficientElement::new(Arc::new(dual), &(&ginv * &self.coeffs) * g))
    }

    /// Haar state: the coefficient pairing with the projection onto the
    /// trivial isotypic component of the module.
    pub fn haar(&self, u: &Uq) -> Result<Scalar> {
        let p = trivial_projection(u, &self.rep)?;
        Ok(dot(&self.coeffs, &p))
    }
}

fn dot(a: &Mat, b: &Mat) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Projection onto the invariant vectors along the nontrivial isotypic components.
pub fn trivial_projection(u: &Uq, rep: &Rep) -> Result<Mat> {
    let n = rep.dim();
    let zero: Vec<usize> = (0..n).filter(|&k| rep.weights()[k].is_zero()).collect();
    if zero.is_empty() {
        return Ok(Mat::zeros(n, n));
    }
    let kernel = |transpose: bool| -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..u.rank() {
            for m in [rep.e_matrix(i), rep.f_matrix(i)].into_iter().flatten() {
                let m = if transpose { m.transpose() } else { m.clone() };
                for r in 0..n {
                    let row: Vec<Scalar> = zero.iter().map(|&c| m.get(r, c).clone()).collect();
                    if row.iter().any(|s| !s.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis = if rows.is_empty() {
            Mat::identity(zero.len()).entries().chunks(zero.len()).map(|c| c.to_vec()).collect()
        } else {
            Mat::from_rows(rows).nullspace()
        };
        basis
            .into_iter()
            .map(|v| {
                let mut full = vec![Scalar::zero(); n];
                for (&k, s) in zero.iter().zip(v) {
                    full[k] = s;
                }
                full
            })
            .collect()
    };
    let vecs = kernel(false);
    let covecs = kernel(true);
    if vecs.is_empty() {
        return Ok(Mat::zeros(n, n));
    }
    let iota = Mat::from_rows(vecs).transpose();
    let phi = Mat::from_rows(covecs);
    let pairing = &phi * &iota;
    let inv = pairing
        .inverse()
        .ok_or_else(|| crate::error::Error::NumericalFailure("degenerate invariant pairing".into()))?;
    Ok(&(&iota * &inv) * &phi)
}
