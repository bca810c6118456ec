//! Finite-dimensional *-representations of `U_q(g)` and of Levi subalgebras.
//!
//! A [`Rep`] is stored in a weight basis that is not orthonormal: the torus
//! acts diagonally, the root vectors `E_i`, `F_i` of the active simple roots
//! are exact matrices, and an exact Gram matrix `G` encodes the invariant
//! inner product through `M(X)ᵀ G = G M(X*)`. Orthonormal coordinates are only
//! produced at numeric evaluation time.

mod coeff;
mod hom;
mod irrep;

use std::fmt;

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::uqg::{AlgebraElement, Uq};

pub use coeff::{coefficient_pairing, haar, left_action, right_action, trivial_projection, CoefficientElement, MatrixCoefficient};
pub use hom::{decompose, embedding, highest_weight_vectors, intertwiners, Component, Intertwiner, Subalgebra};
pub use irrep::{irrep, levi_irrep, RepCache};

#[derive(Clone)]
pub struct Rep {
    weights: Vec<Weight>,
    e: Vec<Option<Mat>>,
    f: Vec<Option<Mat>>,
    gram: Mat,
    /// For irreducible modules built by lowering: basis vector `b` equals
    /// `F_{w[0]} F_{w[1]} ⋯ v_0` with `w = words[b]` (simple-root indices).
    words: Option<Vec<Vec<usize>>>,
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep(dim {}, active {:?})", self.dim(), self.active())
    }
}

impl Rep {
    /// Assembles a representation from raw data; nothing is checked (see [`Rep::verify`]).
    pub fn from_parts(weights: Vec<Weight>, e: Vec<Option<Mat>>, f: Vec<Option<Mat>>, gram: Mat) -> Self {
        Rep {
            weights,
            e,
            f,
            gram,
            words: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn words(&self) -> Option<&[Vec<usize>]> {
        self.words.as_deref()
    }

    /// Simple roots whose root vectors act.
    pub fn active(&self) -> Vec<usize> {
        (0..self.e.len()).filter(|&i| self.e[i].is_some()).collect()
    }

    pub fn e_matrix(&self, i: usize) -> Option<&Mat> {
        self.e[i].as_ref()
    }

    pub fn f_matrix(&self, i: usize) -> Option<&Mat> {
        self.f[i].as_ref()
    }

    /// Indices of basis vectors of weight `w`.
    pub fn weight_space(&self, w: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&b| &self.weights[b] == w).collect()
    }

    /// `ρ(K_μ)`.
    pub fn k_matrix(&self, u: &Uq, mu: &Weight) -> Mat {
        let c = u.cartan();
        Mat::diag(&self.weights.iter().map(|w| c.q_pairing(mu, w)).collect::<Vec<_>>())
    }

    fn root_matrix(&self, u: &Uq, idx: usize, raising: bool) -> Result<Mat> {
        match u.root_split(idx) {
            None => {
                let i = (0..u.rank()).find(|&i| u.simple_index(i) == idx).expect("simple root");
                let m = if raising { &self.e[i] } else { &self.f[i] };
                m.clone().ok_or_else(|| {
                    Error::OutOfSupportedDomain(format!("root vector {} does not act on this module", i + 1))
                })
            }
            Some((a, b, c)) => {
                let ma = self.root_matrix(u, a, raising)?;
                let mb = self.root_matrix(u, b, raising)?;
                Ok(&(&ma * &mb) + &(&mb * &ma).scale(c))
            }
        }
    }

    /// `ρ(X)` for an algebra element whose root vectors all act.
    pub fn act(&self, u: &Uq, x: &AlgebraElement) -> Result<Mat> {
        let n = self.dim();
        let mut e_mats: Vec<Option<Mat>> = vec![None; u.num_roots()];
        let mut f_mats: Vec<Option<Mat>> = vec![None; u.num_roots()];
        let mut out = Mat::zeros(n, n);
        for (m, c) in x.terms() {
            let mut acc = Mat::identity(n);
            for (idx, &p) in m.f.iter().enumerate() {
                if p > 0 {
                    if f_mats[idx].is_none() {
                        f_mats[idx] = Some(self.root_matrix(u, idx, false)?);
                    }
                    for _ in 0..p {
                        acc = &acc * f_mats[idx].as_ref().unwrap();
                    }
                }
            }
            if !m.k.is_zero() {
                acc = &acc * &self.k_matrix(u, &m.k);
            }
            for (idx, &p) in m.e.iter().enumerate() {
                if p > 0 {
                    if e_mats[idx].is_none() {
                        e_mats[idx] = Some(self.root_matrix(u, idx, true)?);
                    }
                    for _ in 0..p {
                        acc = &acc * e_mats[idx].as_ref().unwrap();
                    }
                }
            }
            out = &out + &acc.scale(c);
        }
        Ok(out)
    }

    /// Exact check of the defining relations and of *-compatibility.
    pub fn verify(&self, u: &Uq) -> VerifyReport {
        let mut failures = Vec::new();
        let c = u.cartan();
        let active = self.active();
        let n = self.dim();
        for &i in &active {
            let ai = c.alpha(i);
            for (name, m, shift) in [("E", &self.e[i], ai.clone()), ("F", &self.f[i], -&ai)] {
                let m = m.as_ref().unwrap();
                let bad = (0..n).any(|r| {
                    (0..n).any(|col| !m.get(r, col).is_zero() && self.weights[r] != &self.weights[col] + &shift)
                });
                if bad {
                    failures.push(format!("K E_{0} K^-1 / K F_{0} K^-1 weight relation ({name}_{0})", i + 1));
                }
            }
        }
        for &i in &active {
            for &j in &active {
                let ei = self.e[i].as_ref().unwrap();
                let fj = self.f[j].as_ref().unwrap();
                let comm = &(ei * fj) - &(fj * ei);
                let expected = if i == j {
                    let kk = &self.k_matrix(u, &c.alpha(i)) - &self.k_matrix(u, &-&c.alpha(i));
                    kk.scale(&c.qi_diff(i).inv())
                } else {
                    Mat::zeros(n, n)
                };
                if comm != expected {
                    failures.push(format!("[E_{}, F_{}] commutator", i + 1, j + 1));
                }
            }
        }
        for &i in &active {
            for &j in &active {
                let aij = c.cartan_matrix[i][j];
                if i == j || aij == 0 {
                    if i != j {
                        for (name, mats) in [("E", &self.e), ("F", &self.f)] {
                            let (x, y) = (mats[i].as_ref().unwrap(), mats[j].as_ref().unwrap());
                            if &(x * y) - &(y * x) != Mat::zeros(n, n) {
                                failures.push(format!("commuting {name}_{} {name}_{}", i + 1, j + 1));
                            }
                        }
                    }
                    continue;
                }
                if aij != -1 {
                    failures.push(format!("Serre relation for a_{}{} = {aij} not checked", i + 1, j + 1));
                    continue;
                }
                let two = c.q_int(2, i);
                for (name, mats) in [("E", &self.e), ("F", &self.f)] {
                    let (x, y) = (mats[i].as_ref().unwrap(), mats[j].as_ref().unwrap());
                    let s = &(&(&(x * x) * y) - &(&(x * y) * x).scale(&two)) + &(&(y * x) * x);
                    if !s.is_zero() {
                        failures.push(format!("Serre relation {name}_{} {name}_{}", i + 1, j + 1));
                    }
                }
            }
        }
        if self.gram != self.gram.transpose() {
            failures.push("Gram matrix symmetry".into());
        }
        for &i in &active {
            let ai = c.alpha(i);
            let (ei, fi) = (self.e[i].as_ref().unwrap(), self.f[i].as_ref().unwrap());
            let e_star = &self.k_matrix(u, &ai) * fi;
            let f_star = ei * &self.k_matrix(u, &-&ai);
            if &ei.transpose() * &self.gram != &self.gram * &e_star {
                failures.push(format!("*-compatibility of E_{}", i + 1));
            }
            if &fi.transpose() * &self.gram != &self.gram * &f_star {
                failures.push(format!("*-compatibility of F_{}", i + 1));
            }
        }
        VerifyReport { failures }
    }

    /// Replaces one matrix entry; only meant for negative controls.
    pub fn perturbed(&self, i: usize, row: usize, col: usize, delta: &Scalar) -> Rep {
        let mut out = self.clone();
        if let Some(m) = out.e[i].as_mut() {
            m.add_to(row, col, delta);
        }
        out
    }

    /// Tensor product through `Δ(E) = E⊗1 + K⊗E`, `Δ(F) = F⊗K^{-1} + 1⊗F`.
    /// Basis index `(a, b)` maps to `a * dim(B) + b`.
    pub fn tensor(&self, u: &Uq, other: &Rep) -> Rep {
        let c = u.cartan();
        let (ia, ib) = (Mat::identity(self.dim()), Mat::identity(other.dim()));
        let mut e = vec![None; self.e.len()];
        let mut f = vec![None; self.e.len()];
        for i in 0..self.e.len() {
            if let (Some(ea), Some(eb), Some(fa), Some(fb)) = (&self.e[i], &other.e[i], &self.f[i], &other.f[i]) {
                let ka = self.k_matrix(u, &c.alpha(i));
                let kb_inv = other.k_matrix(u, &-&c.alpha(i));
                e[i] = Some(&ea.kron(&ib) + &ka.kron(eb));
                f[i] = Some(&fa.kron(&kb_inv) + &ia.kron(fb));
            }
        }
        let mut weights = Vec::with_capacity(self.dim() * other.dim());
        for wa in &self.weights {
            for wb in &other.weights {
                weights.push(wa + wb);
            }
        }
        Rep {
            weights,
            e,
            f,
            gram: self.gram.kron(&other.gram),
            words: None,
        }
    }

    /// Contragredient module `X ↦ ρ(S^{-1}X)ᵀ` with Gram `ρ(K_{2ρ}) G^{-1}`.
    pub fn dual(&self, u: &Uq) -> Result<Rep> {
        self.dual_impl(u, true)
    }

    /// Right-dual module `X ↦ ρ(S X)ᵀ` with Gram `ρ(K_{2ρ})^{-1} G^{-1}`.
    pub fn dual_right(&self, u: &Uq) -> Result<Rep> {
        self.dual_impl(u, false)
    }

    fn dual_impl(&self, u: &Uq, inverse: bool) -> Result<Rep> {
        let c = u.cartan();
        let mut e = vec![None; self.e.len()];
        let mut f = vec![None; self.e.len()];
        let map = |x: &AlgebraElement| if inverse { u.antipode_inv(x) } else { u.antipode(x) };
        for i in self.active() {
            e[i] = Some(self.act(u, &map(&u.e(i)))?.transpose());
            f[i] = Some(self.act(u, &map(&u.f(i)))?.transpose());
        }
        let ginv = self
            .gram
            .inverse()
            .ok_or_else(|| Error::NumericalFailure("singular Gram matrix".into()))?;
        let two_rho = c.rho().scale(if inverse { 2 } else { -2 });
        let k = self.k_matrix(u, &two_rho);
        Ok(Rep {
            weights: self.weights.iter().map(|w| -w).collect(),
            e,
            f,
            gram: &k * &ginv,
            words: None,
        })
    }

    /// Hermitian adjoint of a map `A: V → W` for the Gram forms: `A^† = G_V^{-1} Aᵀ G_W`.
    pub fn adjoint_of(a: &Mat, source: &Rep, target: &Rep) -> Result<Mat> {
        let gv_inv = source
            .gram
            .inverse()
            .ok_or_else(|| Error::NumericalFailure("singular Gram matrix".into()))?;
        Ok(&(&gv_inv * &a.transpose()) * &target.gram)
    }
}

/// Outcome of [`Rep::verify`]; empty means every relation holds exactly.
#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

#[cfg(test)]
mod tests;
