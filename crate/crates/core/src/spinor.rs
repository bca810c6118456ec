//! Sections of the spinor bundle and their Hilbert space structure.
//!
//! A section in the `λ`-block is the `Σ`-valued function
//! `X ↦ A ρ_λ(S X) w` with `A ∈ Hom_{U_q(𝔩)}(V_λ, Σ)` and `w ∈ V_λ`; the basis
//! element `ψ^λ_{ij}` takes `A = A^λ_i` and `w = v_j`. The Haar state gives
//! `⟨ψ_{A,w}, ψ_{A',w'}⟩ = H_λ(A, A') · J_λ(w, w')`, so each block Gram is a
//! Kronecker product `H_λ ⊗ J_λ` (basis index `i · dim V_λ + j`).
//!
//! Functions on the flag manifold are written the same way,
//! `f(X) = α ρ_μ(S X) β` with `α` a `U_q(𝔩)`-invariant covector, and act on
//! sections by right multiplication. A product of two such expressions is
//! again of this form over `V_μ ⊗ V_λ`, which is split with Clebsch–Gordan
//! intertwiners.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use parking_lot::Mutex;

use crate::cartan::Weight;
use crate::clifford::SpinSpace;
use crate::error::{Error, Result};
use crate::flag::FlagData;
use crate::linalg::{numeric, Mat};
use crate::reps::{decompose, intertwiners, Component, Rep, Subalgebra};
use crate::scalar::Scalar;
use crate::uqg::{AlgebraElement, Uq};

/// Basis `A^λ_i` of `Hom_{U_q(𝔩)}(V_λ, Σ)`, each a `dim Σ × dim V_λ` matrix.
pub fn hom_space(fd: &FlagData, spin: &SpinSpace, lambda: &Weight) -> Result<Vec<Mat>> {
    let u = fd.uq();
    let rep = fd.cache().get(u, lambda, &all_nodes(fd))?;
    let sols = intertwiners(u, &rep, &spin.sigma, &Subalgebra::Levi(fd.levi().to_vec()))?;
    Ok(sols.into_iter().map(|s| s.matrix).collect())
}

fn all_nodes(fd: &FlagData) -> Vec<usize> {
    (0..fd.cartan().rank).collect()
}

/// Kernel of a family of linear maps on `a × b` matrices, with unknowns
/// restricted to the given positions. Returns a basis of matrices.
fn matrix_kernel(rows: usize, cols: usize, positions: &[(usize, usize)], ops: &[&dyn Fn(&Mat) -> Mat]) -> Vec<Mat> {
    let images: Vec<Vec<Mat>> = positions
        .iter()
        .map(|&(a, b)| {
            let mut unit = Mat::zeros(rows, cols);
            unit.set(a, b, Scalar::one());
            ops.iter().map(|op| op(&unit)).collect()
        })
        .collect();
    let mut eqs: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..ops.len() {
        for r in 0..rows {
            for c in 0..cols {
                let row: Vec<Scalar> = images.iter().map(|img| img[k].get(r, c).clone()).collect();
                if row.iter().any(|s| !s.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let null = if eqs.is_empty() {
        (0..positions.len())
            .map(|k| (0..positions.len()).map(|l| if k == l { Scalar::one() } else { Scalar::zero() }).collect())
            .collect()
    } else {
        Mat::from_rows(eqs).nullspace()
    };
    null.into_iter()
        .map(|v| {
            let mut m = Mat::zeros(rows, cols);
            for (&(a, b), s) in positions.iter().zip(v) {
                if !s.is_zero() {
                    m.set(a, b, s);
                }
            }
            m
        })
        .collect()
}

/// Invariant vector `ι ∈ A ⊗ B` and invariant covector `φ` (as matrices,
/// `φ(X) = Σ φ_kl X_kl`), normalized by `φ(ι) = 1`.
pub fn invariant_pair(u: &Uq, a: &Rep, b: &Rep) -> Result<(Mat, Mat)> {
    let (da, db) = (a.dim(), b.dim());
    let c = u.cartan();
    let positions: Vec<(usize, usize)> = (0..da)
        .flat_map(|k| (0..db).map(move |l| (k, l)))
        .filter(|&(k, l)| (&a.weights()[k] + &b.weights()[l]).is_zero())
        .collect();
    let mut gens = Vec::new();
    for i in 0..c.rank {
        let ka = a.k_matrix(u, &c.alpha(i));
        let kb_inv = b.k_matrix(u, &-&c.alpha(i));
        let (ea, fa) = (a.e_matrix(i).unwrap().clone(), a.f_matrix(i).unwrap().clone());
        let (eb, fb) = (b.e_matrix(i).unwrap().clone(), b.f_matrix(i).unwrap().clone());
        gens.push((ka, kb_inv, ea, fa, eb, fb));
    }
    let mut vec_ops: Vec<Box<dyn Fn(&Mat) -> Mat>> = Vec::new();
    let mut cov_ops: Vec<Box<dyn Fn(&Mat) -> Mat>> = Vec::new();
    for (ka, kb_inv, ea, fa, eb, fb) in gens {
        let (ka2, kb2, ea2, fa2, eb2, fb2) = (ka.clone(), kb_inv.clone(), ea.clone(), fa.clone(), eb.clone(), fb.clone());
        vec_ops.push(Box::new(move |x: &Mat| &(&ea * x) + &(&(&ka * x) * &eb.transpose())));
        vec_ops.push(Box::new(move |x: &Mat| &(&(&fa * x) * &kb_inv.transpose()) + &(x * &fb.transpose())));
        cov_ops.push(Box::new(move |p: &Mat| &(&ea2.transpose() * p) + &(&(&ka2.transpose() * p) * &eb2)));
        cov_ops.push(Box::new(move |p: &Mat| &(&(&fa2.transpose() * p) * &kb2) + &(p * &fb2)));
    }
    let vref: Vec<&dyn Fn(&Mat) -> Mat> = vec_ops.iter().map(|b| b.as_ref()).collect();
    let cref: Vec<&dyn Fn(&Mat) -> Mat> = cov_ops.iter().map(|b| b.as_ref()).collect();
    let iotas = matrix_kernel(da, db, &positions, &vref);
    let phis = matrix_kernel(da, db, &positions, &cref);
    if iotas.len() != 1 || phis.len() != 1 {
        return Err(Error::NumericalFailure(format!(
            "expected a single invariant, found {} vectors and {} covectors",
            iotas.len(),
            phis.len()
        )));
    }
    let (iota, phi) = (iotas.into_iter().next().unwrap(), phis.into_iter().next().unwrap());
    let norm = pair(&phi, &iota);
    Ok((iota, phi.scale(&norm.inv())))
}

fn pair(phi: &Mat, x: &Mat) -> Scalar {
    let mut acc = Scalar::zero();
    for (p, v) in phi.entries().iter().zip(x.entries()) {
        if !p.is_zero() && !v.is_zero() {
            acc += &(p * v);
        }
    }
    acc
}

/// One `λ`-block of the section space.
#[derive(Clone, Debug)]
pub struct SectionBlock {
    pub lambda: Weight,
    pub rep: Arc<Rep>,
    pub hom: Vec<Mat>,
    /// `H_λ(A_i, A_i')`.
    pub hom_gram: Mat,
    /// `J_λ(v_j, v_j')`.
    pub leg_gram: Mat,
    pub offset: usize,
}

impl SectionBlock {
    pub fn hom_dim(&self) -> usize {
        self.hom.len()
    }

    pub fn leg_dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn dim(&self) -> usize {
        self.hom_dim() * self.leg_dim()
    }

    pub fn gram(&self) -> Mat {
        self.hom_gram.kron(&self.leg_gram)
    }

    /// Coordinates of an intertwiner in the basis `A^λ_i`; fails if the
    /// matrix leaves the Hom space.
    pub fn expand(&self, a: &Mat) -> Result<Vec<Scalar>> {
        if self.hom.is_empty() {
            return if a.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::WellDefinednessViolated(self.lambda.to_string()))
            };
        }
        let cols: Vec<Vec<Scalar>> = self.hom.iter().map(|h| h.entries().to_vec()).collect();
        let basis = Mat::from_rows(cols).transpose();
        let rhs = Mat::column(a.entries());
        let x = basis
            .solve(&rhs)
            .ok_or_else(|| Error::WellDefinednessViolated(self.lambda.to_string()))?;
        Ok(x.col(0))
    }
}

/// Hom-leg and `V`-leg Gram matrices of the `λ`-block.
pub fn block_grams(fd: &FlagData, spin: &SpinSpace, rep: &Rep, hom: &[Mat]) -> Result<(Mat, Mat)> {
    let u = fd.uq();
    let dual = rep.dual_right(u)?;
    let (iota, phi) = invariant_pair(u, &dual, rep)?;
    let g = rep.gram();
    let ginv = g.inverse().ok_or_else(|| Error::NumericalFailure("singular Gram".into()))?;
    let gs = spin.sigma.gram();
    let mut leg = &iota * g;
    let mut h = Mat::zeros(hom.len(), hom.len());
    for (i, a) in hom.iter().enumerate() {
        let left = &a.transpose() * gs;
        for (k, b) in hom.iter().enumerate() {
            h.set(i, k, pair(&phi, &(&(&left * b) * &ginv)));
        }
    }
    if leg.get(0, 0).eval(1.5) < 0.0 {
        let minus = Scalar::from_int(-1);
        leg = leg.scale(&minus);
        h = h.scale(&minus);
    }
    Ok((h, leg))
}

/// The spinor sections with `λ` dominant of level at most `cutoff`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub cutoff: usize,
    pub blocks: Vec<SectionBlock>,
}

fn weights_up_to(fd: &FlagData, level: usize) -> Vec<Weight> {
    let mut ws = fd.cartan().dominant_weights_up_to(level);
    ws.sort_by(|a, b| (a.level(), b).cmp(&(b.level(), a)));
    ws
}

impl SectionSpace {
    pub fn new(fd: &FlagData, spin: &SpinSpace, cutoff: usize) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for lambda in weights_up_to(fd, cutoff) {
            let hom = hom_space(fd, spin, &lambda)?;
            if hom.is_empty() {
                continue;
            }
            let rep = fd.cache().get(fd.uq(), &lambda, &all_nodes(fd))?;
            let (hom_gram, leg_gram) = block_grams(fd, spin, &rep, &hom)?;
            let block = SectionBlock {
                lambda,
                rep,
                hom,
                hom_gram,
                leg_gram,
                offset,
            };
            offset += block.dim();
            blocks.push(block);
        }
        Ok(SectionSpace { cutoff, blocks })
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(SectionBlock::dim).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, lambda: &Weight) -> Option<&SectionBlock> {
        self.blocks.iter().find(|b| &b.lambda == lambda)
    }

    /// Block-diagonal Gram matrix evaluated at `q`.
    pub fn gram_numeric(&self, fd: &FlagData, q: f64) -> DMatrix<f64> {
        let t = fd.cartan().t_of_q(q);
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for b in &self.blocks {
            let g = b.gram().eval(t);
            out.view_mut((b.offset, b.offset), (b.dim(), b.dim())).copy_from(&g);
        }
        out
    }

    /// Right action `s ↦ s ◁ X`, acting as `1 ⊗ ρ_λ(S X)` on each block.
    pub fn right_action(&self, u: &Uq, x: &AlgebraElement) -> Result<Mat> {
        let sx = u.antipode(x);
        let mut out = Mat::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            let m = Mat::identity(b.hom_dim()).kron(&b.rep.act(u, &sx)?);
            place(&mut out, b.offset, b.offset, &m);
        }
        Ok(out)
    }
}

pub(crate) fn place(out: &mut Mat, r0: usize, c0: usize, m: &Mat) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let s = m.get(r, c);
            if !s.is_zero() {
                out.add_to(r0 + r, c0 + c, s);
            }
        }
    }
}

/// `f(X) = α ρ_μ(S X) β` with `α` a covector and `β` a vector of `V_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coordinate {
    pub mu: Weight,
    pub alpha: Vec<Scalar>,
    pub beta: Vec<Scalar>,
}

/// A finite sum of [`Coordinate`] terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Function {
    pub terms: Vec<Coordinate>,
}

impl Function {
    pub fn one(rank: usize) -> Self {
        Function {
            terms: vec![Coordinate {
                mu: Weight::zero(rank),
                alpha: vec![Scalar::one()],
                beta: vec![Scalar::one()],
            }],
        }
    }

    pub fn level(&self) -> usize {
        self.terms.iter().map(|t| t.mu.level() as usize).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Function {
            terms: self
                .terms
                .iter()
                .map(|t| Coordinate {
                    beta: t.beta.iter().map(|b| b * s).collect(),
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Function) -> Self {
        Function {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }
}

/// Invariant covectors of `V_μ`, the `α` that make `α ρ_μ(S ·) β` a function on the flag manifold.
pub fn invariant_covectors(fd: &FlagData, mu: &Weight) -> Result<Vec<Vec<Scalar>>> {
    let rep = fd.cache().get(fd.uq(), mu, &all_nodes(fd))?;
    let g = rep.gram();
    Ok(fd
        .invariant_subspace_basis(mu)?
        .into_iter()
        .map(|v| g.mul_vec(&v))
        .collect())
}

/// The functions `α ρ_μ(S ·) v_j` for every invariant covector `α` and weight basis vector `v_j`.
pub fn invariant_functions(fd: &FlagData, mu: &Weight) -> Result<Vec<Function>> {
    let dim = fd.cache().get(fd.uq(), mu, &all_nodes(fd))?.dim();
    let mut out = Vec::new();
    for alpha in invariant_covectors(fd, mu)? {
        for j in 0..dim {
            let mut beta = vec![Scalar::zero(); dim];
            beta[j] = Scalar::one();
            out.push(Function {
                terms: vec![Coordinate {
                    mu: mu.clone(),
                    alpha: alpha.clone(),
                    beta,
                }],
            });
        }
    }
    Ok(out)
}

/// How to treat product components beyond the output cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Forbid,
    Allow,
}

/// Memoized Clebsch–Gordan splittings of `V_μ ⊗ V_λ` and of single modules.
#[derive(Default)]
pub struct ProductCache {
    splits: Mutex<HashMap<(Weight, Weight), Arc<Vec<Component>>>>,
}

impl ProductCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn split(&self, fd: &FlagData, mu: &Weight, lambda: &Weight) -> Result<Arc<Vec<Component>>> {
        let key = (mu.clone(), lambda.clone());
        if let Some(v) = self.splits.lock().get(&key) {
            return Ok(v.clone());
        }
        let u = fd.uq();
        let all = all_nodes(fd);
        let a = fd.cache().get(u, mu, &all)?;
        let b = fd.cache().get(u, lambda, &all)?;
        let comps = Arc::new(decompose(u, &a.tensor(u, &b), &all, fd.cache())?);
        self.splits.lock().insert(key, comps.clone());
        Ok(comps)
    }
}

/// Matrix of `ψ_{A,w} ↦ (B(A) ⊗ 1) ρ_{μ⊗λ}(S ·)(β ⊗ w)` re-expanded in `dst`,
/// where `B(A): V_μ ⊗ V_λ → Σ` must be an intertwiner after summation.
/// Returns the matrix and whether components were dropped.
pub fn transport<F>(
    fd: &FlagData,
    products: &ProductCache,
    src: &SectionSpace,
    dst: &SectionSpace,
    mu: &Weight,
    beta: &[Scalar],
    truncation: Truncation,
    hom_map: F,
) -> Result<(Mat, bool)>
where
    F: Fn(&SectionBlock, &Mat) -> Mat,
{
    let needed = src.cutoff + mu.level() as usize;
    if truncation == Truncation::Forbid && dst.cutoff < needed {
        return Err(Error::CutoffTooSmall {
            requested: dst.cutoff,
            needed,
        });
    }
    let mut out = Mat::zeros(dst.dim(), src.dim());
    let mut dropped = false;
    for b in &src.blocks {
        let comps = products.split(fd, mu, &b.lambda)?;
        let images: Vec<Mat> = b.hom.iter().map(|a| hom_map(b, a)).collect();
        for comp in comps.iter() {
            let maps: Vec<Mat> = images.iter().map(|img| img * &comp.iota).collect();
            let target = match dst.block(&comp.highest) {
                Some(t) => t,
                None => {
                    if maps.iter().any(|m| !m.is_zero()) && dst.cutoff < comp.highest.level() as usize {
                        dropped = true;
                    } else if maps.iter().any(|m| !m.is_zero()) {
                        return Err(Error::WellDefinednessViolated(comp.highest.to_string()));
                    }
                    continue;
                }
            };
            let coeffs: Vec<Vec<Scalar>> = maps.iter().map(|m| target.expand(m)).collect::<Result<_>>()?;
            // W: V_λ → V_ν, w ↦ π(β ⊗ w)
            let mut w = Mat::zeros(target.leg_dim(), b.leg_dim());
            for j in 0..b.leg_dim() {
                for (a, bv) in beta.iter().enumerate() {
                    if bv.is_zero() {
                        continue;
                    }
                    let col = a * b.leg_dim() + j;
                    for r in 0..target.leg_dim() {
                        let p = comp.pi.get(r, col);
                        if !p.is_zero() {
                            w.add_to(r, j, &(p * bv));
                        }
                    }
                }
            }
            let mut r = Mat::zeros(target.hom_dim(), b.hom_dim());
            for (i, c) in coeffs.iter().enumerate() {
                for (k, s) in c.iter().enumerate() {
                    if !s.is_zero() {
                        r.set(k, i, s.clone());
                    }
                }
            }
            place(&mut out, target.offset, b.offset, &r.kron(&w));
        }
    }
    Ok((out, dropped))
}

/// `(α ⊗ A)`: `V_μ ⊗ V_λ → Σ`.
pub fn tensor_hom(alpha: &[Scalar], a: &Mat) -> Mat {
    let dl = a.cols();
    let mut out = Mat::zeros(a.rows(), alpha.len() * dl);
    for (k, al) in alpha.iter().enumerate() {
        if al.is_zero() {
            continue;
        }
        for r in 0..a.rows() {
            for c in 0..dl {
                let s = a.get(r, c);
                if !s.is_zero() {
                    out.set(r, k * dl + c, al * s);
                }
            }
        }
    }
    out
}

/// Right multiplication by `f` from `src` into `dst`.
pub fn coordinate_action(
    fd: &FlagData,
    products: &ProductCache,
    src: &SectionSpace,
    dst: &SectionSpace,
    f: &Function,
    truncation: Truncation,
) -> Result<(Mat, bool)> {
    let mut out = Mat::zeros(dst.dim(), src.dim());
    let mut dropped = false;
    for t in &f.terms {
        let (m, d) = transport(fd, products, src, dst, &t.mu, &t.beta, truncation, |_, a| tensor_hom(&t.alpha, a))?;
        out = &out + &m;
        dropped |= d;
    }
    Ok((out, dropped))
}

/// The star `f*(X) = conj f(S(X)*)`, re-expressed through irreducible modules.
pub fn star_function(fd: &FlagData, f: &Function) -> Result<Function> {
    let u = fd.uq();
    let all = all_nodes(fd);
    let mut terms = Vec::new();
    for t in &f.terms {
        let rep = fd.cache().get(u, &t.mu, &all)?;
        let g = rep.gram();
        let ginv = g.inverse().ok_or_else(|| Error::NumericalFailure("singular Gram".into()))?;
        // f*(X) = (α G^{-1}) D(S X) (G β) with D the left dual
        let alpha = ginv.transpose().mul_vec(&t.alpha);
        let beta = g.mul_vec(&t.beta);
        let dual = rep.dual(u)?;
        for comp in decompose(u, &dual, &all, fd.cache())? {
            let a2 = comp.iota.transpose().mul_vec(&alpha);
            let b2 = comp.pi.mul_vec(&beta);
            terms.push(Coordinate {
                mu: comp.highest.clone(),
                alpha: a2,
                beta: b2,
            });
        }
    }
    Ok(Function { terms })
}

/// Product `f g` with `(f g)(X) = f(X_(1)) g(X_(2))`.
pub fn multiply(fd: &FlagData, products: &ProductCache, f: &Function, g: &Function) -> Result<Function> {
    let mut terms = Vec::new();
    for a in &f.terms {
        for b in &g.terms {
            // (f g)(X) = (α_g ⊗ α_f) ρ_{ν⊗μ}(S X) (β_g ⊗ β_f)
            let alpha = kron_vec(&b.alpha, &a.alpha);
            let beta = kron_vec(&b.beta, &a.beta);
            for comp in products.split(fd, &b.mu, &a.mu)?.iter() {
                let a2 = comp.iota.transpose().mul_vec(&alpha);
                let b2 = comp.pi.mul_vec(&beta);
                if a2.iter().all(Scalar::is_zero) || b2.iter().all(Scalar::is_zero) {
                    continue;
                }
                terms.push(Coordinate {
                    mu: comp.highest.clone(),
                    alpha: a2,
                    beta: b2,
                });
            }
        }
    }
    Ok(Function { terms })
}

fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Orthonormal-basis form of an operator between two truncations at `q`.
pub fn orthonormal_operator(fd: &FlagData, m: &Mat, src: &SectionSpace, dst: &SectionSpace, q: f64) -> Result<DMatrix<f64>> {
    let t = fd.cartan().t_of_q(q);
    numeric::orthonormal_form(&m.eval(t), &src.gram_numeric(fd, q), &dst.gram_numeric(fd, q))
        .ok_or_else(|| Error::NumericalFailure(format!("section Gram is not positive definite at q = {q}")))
}

#[cfg(test)]
mod tests;
