//! The Dirac operator `D = D₊ + D₋` on the spinor sections.
//!
//! On the `λ`-block, `D` only touches the Hom leg:
//!
//! ```text
//! D₋(A) = -Σ_i γ(X^i) A ρ_λ(X_i)      D₊(A) = -Σ_i γ(X_i) A ρ_λ(X^i)
//! ```
//!
//! With `X_i = √w_i Y_i`, `X^i = √w_i Y_i*` and `γ(X) = c^{-1/2} γ(Y)`, every term
//! carries the factor `w_i / √c`. The blocks below store the exact part
//! `-Σ_i w_i γ(·) A ρ_λ(·)`; the real factor `c(q)^{-1/2}` is applied when
//! evaluating at a numeric `q`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::cartan::{CartanData, Weight};
use crate::clifford::{gamma_embedding, GammaMap, SpinSpace};
use crate::error::{Error, Result};
use crate::flag::{FlagData, TangentBasis};
use crate::linalg::{numeric, Mat};
use crate::reps::{CoefficientElement, Rep};
use crate::scalar::Scalar;
use crate::spinor::{place, SectionBlock, SectionSpace};
use crate::uqg::AlgebraElement;

/// Everything needed to build spinors and Dirac operators on one flag manifold.
pub struct Geometry {
    pub flag: FlagData,
    pub tangent: TangentBasis,
    pub spin: SpinSpace,
    pub gamma: GammaMap,
    pub plus_policy: PlusPolicy,
}

/// Which construction of `D₊` a [`Geometry`] uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PlusPolicy {
    /// The mirror formula where it is well-defined, the adjoint of `D₋` elsewhere.
    #[default]
    Auto,
    /// Always the mirror formula; blocks where it leaves the Hom space are errors.
    Mirror,
    /// Always the Hilbert space adjoint of `D₋`.
    Adjoint,
}

impl PlusPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "auto" => Some(PlusPolicy::Auto),
            "mirror" => Some(PlusPolicy::Mirror),
            "adjoint" => Some(PlusPolicy::Adjoint),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlusPolicy::Auto => "auto",
            PlusPolicy::Mirror => "mirror",
            PlusPolicy::Adjoint => "adjoint",
        }
    }
}

impl Geometry {
    pub fn new(cartan: CartanData, r: usize, n: i64) -> Result<Self> {
        let flag = FlagData::new(cartan, r, n)?;
        let tangent = flag.tangent()?;
        let spin = SpinSpace::new(&flag, &tangent)?;
        let (spin, gamma) = gamma_embedding(&flag, &tangent, &spin)?;
        Ok(Geometry {
            flag,
            tangent,
            spin,
            gamma,
            plus_policy: PlusPolicy::Auto,
        })
    }

    pub fn with_plus_policy(mut self, policy: PlusPolicy) -> Self {
        self.plus_policy = policy;
        self
    }

    pub fn sections(&self, cutoff: usize) -> Result<SectionSpace> {
        SectionSpace::new(&self.flag, &self.spin, cutoff)
    }

    /// `c(q)^{-1/2}`, the numeric factor in front of the exact blocks.
    pub fn scale(&self, q: f64) -> f64 {
        1.0 / self.flag.cartan().eval(&self.gamma.clifford_scale, q).sqrt()
    }

    /// `-Σ_i w_i γ_i A ρ_λ(Y_i)` where `γ_i` and `Y_i` come from the chosen half.
    fn hom_image(&self, rep: &Rep, a: &Mat, half: Half) -> Result<Mat> {
        let u = self.flag.uq();
        let n = a.rows();
        let mut acc = Mat::zeros(n, a.cols());
        for i in 0..self.tangent.dim() {
            let (g, y) = match half {
                Half::Minus => (&self.gamma.plus[i], &self.tangent.minus[i]),
                Half::Plus => (&self.gamma.minus[i], &self.tangent.plus[i]),
            };
            let term = &(g * a) * &rep.act(u, y)?;
            acc = &acc - &term.scale(&self.tangent.norms[i]);
        }
        Ok(acc)
    }

    /// Matrix of one half of `D` on the Hom leg of a block, in the basis `A^λ_k`.
    pub fn half_block(&self, block: &SectionBlock, half: Half) -> Result<Mat> {
        let h = block.hom_dim();
        let mut out = Mat::zeros(h, h);
        for (k, a) in block.hom.iter().enumerate() {
            let img = self.hom_image(&block.rep, a, half)?;
            for (l, s) in block.expand(&img)?.into_iter().enumerate() {
                if !s.is_zero() {
                    out.set(l, k, s);
                }
            }
        }
        Ok(out)
    }

    pub fn block(&self, block: &SectionBlock) -> Result<DiracBlock> {
        let dminus = self.half_block(block, Half::Minus)?;
        let adjoint = || -> Result<(Mat, PlusSource)> {
            let h = &block.hom_gram;
            let hinv = h
                .inverse()
                .ok_or_else(|| Error::NumericalFailure(format!("singular Hom Gram at {}", block.lambda)))?;
            Ok((&(&hinv * &dminus.transpose()) * h, PlusSource::Adjoint))
        };
        let (dplus, plus_source) = match self.plus_policy {
            PlusPolicy::Adjoint => adjoint()?,
            PlusPolicy::Mirror => (self.half_block(block, Half::Plus)?, PlusSource::Mirror),
            PlusPolicy::Auto => match self.half_block(block, Half::Plus) {
                Ok(m) => (m, PlusSource::Mirror),
                Err(Error::WellDefinednessViolated(_)) => adjoint()?,
                Err(e) => return Err(e),
            },
        };
        Ok(DiracBlock {
            plus_source,
            lambda: block.lambda.clone(),
            hom_dim: block.hom_dim(),
            multiplicity: block.leg_dim(),
            dirac: &dminus + &dplus,
            dminus,
            dplus,
            gram: block.hom_gram.clone(),
        })
    }

    pub fn blocks(&self, space: &SectionSpace) -> Result<Vec<DiracBlock>> {
        space.blocks.par_iter().map(|b| self.block(b)).collect()
    }

    /// Exact operator (without the factor `c^{-1/2}`) on the whole truncation.
    pub fn operator(&self, space: &SectionSpace, blocks: &[DiracBlock], part: Part) -> Mat {
        let mut out = Mat::zeros(space.dim(), space.dim());
        for (sb, db) in space.blocks.iter().zip(blocks) {
            let m = match part {
                Part::Minus => &db.dminus,
                Part::Plus => &db.dplus,
                Part::Full => &db.dirac,
            };
            place(&mut out, sb.offset, sb.offset, &m.kron(&Mat::identity(sb.leg_dim())));
        }
        out
    }

    /// Eigenvalues of `D` on all blocks of level at most `cutoff`.
    pub fn spectrum(&self, q: f64, cutoff: usize) -> Result<SpectrumReport> {
        Ok(self.spectra(&[q], cutoff)?.remove(0))
    }

    /// [`Geometry::spectrum`] at several values of `q`, sharing the exact blocks.
    pub fn spectra(&self, qs: &[f64], cutoff: usize) -> Result<Vec<SpectrumReport>> {
        if let Some(q) = qs.iter().find(|&&q| q.is_nan() || q <= 1.0) {
            return Err(Error::OutOfSupportedDomain(format!("q = {q} is outside (1, ∞)")));
        }
        let space = self.sections(cutoff)?;
        let blocks = self.blocks(&space)?;
        qs.iter()
            .map(|&q| {
                let per_block: Vec<Vec<f64>> = blocks
                    .par_iter()
                    .map(|b| Ok(numeric::symmetric_eigenvalues(&b.orthonormal(self, q, Part::Full)?)))
                    .collect::<Result<_>>()?;
                let mut entries: Vec<SpectrumEntry> = Vec::new();
                for (b, eigs) in blocks.iter().zip(per_block) {
                    for e in eigs {
                        match entries
                            .iter_mut()
                            .find(|x| x.lambda == b.lambda && (x.eigenvalue - e).abs() <= 1e-9 * e.abs().max(1.0))
                        {
                            Some(x) => x.multiplicity += b.multiplicity,
                            None => entries.push(SpectrumEntry {
                                eigenvalue: e,
                                multiplicity: b.multiplicity,
                                lambda: b.lambda.clone(),
                            }),
                        }
                    }
                }
                entries.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue).then_with(|| a.lambda.cmp(&b.lambda)));
                Ok(SpectrumReport {
                    q_value: q,
                    cutoff,
                    entries,
                })
            })
            .collect()
    }

    /// Compares the Hom-leg formula for `D₋` with the ambient formula
    /// `f ⊗ v ↦ -Σ_i (S^{-1}(X_i) ▷ f) ⊗ γ(X^i) v` on the element
    /// `Σ_k S(t^λ_{kj}) ⊗ A v_k`, evaluated through matrix coefficients of the
    /// right dual of `V_λ`.
    pub fn tensor_form_check(&self, block: &SectionBlock, a: &Mat, j: usize) -> Result<TensorFormReport> {
        let u = self.flag.uq();
        let rep = &block.rep;
        let dual = Arc::new(rep.dual_right(u)?);
        let d = rep.dim();
        let ns = self.spin.dim();
        // component a of the ambient element: f_a = Σ_{l,k} w_l A_{ak} D'_{lk}
        let component = |m: &Mat, row: usize| {
            let mut c = Mat::zeros(d, d);
            for k in 0..d {
                let s = m.get(row, k);
                if !s.is_zero() {
                    c.set(j, k, s.clone());
                }
            }
            CoefficientElement::new(dual.clone(), c)
        };
        let mut ambient = vec![Mat::zeros(d, d); ns];
        for i in 0..self.tangent.dim() {
            let x = u.antipode_inv(&self.tangent.minus[i]);
            let g = &self.gamma.plus[i];
            for src in 0..ns {
                let moved = component(a, src).left(u, &x)?.coeffs;
                for (dst, slot) in ambient.iter_mut().enumerate() {
                    let c = g.get(dst, src);
                    if !c.is_zero() {
                        *slot = &*slot - &moved.scale(&(c * &self.tangent.norms[i]));
                    }
                }
            }
        }
        let image = self.hom_image(rep, a, Half::Minus)?;
        let hom_side: Vec<Mat> = (0..ns).map(|row| component(&image, row).coeffs).collect();
        Ok(TensorFormReport {
            agrees: ambient == hom_side,
            in_section_space: block.expand(&image).is_ok() && block.expand(a).is_ok(),
        })
    }

    /// `h((X ▷ f) g*)` and `h(f (S²(X)* ▷ g)*)`.
    pub fn haar_adjointness_check(
        &self,
        x: &AlgebraElement,
        f: &CoefficientElement,
        g: &CoefficientElement,
    ) -> Result<(Scalar, Scalar)> {
        let u = self.flag.uq();
        let lhs = f.left(u, x)?.mul(u, &g.star(u)?).haar(u)?;
        let s2 = u.star(&u.antipode(&u.antipode(x)));
        let rhs = f.mul(u, &g.left(u, &s2)?.star(u)?).haar(u)?;
        Ok((lhs, rhs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Minus,
    Plus,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorFormReport {
    pub agrees: bool,
    pub in_section_space: bool,
}

/// How `D₊` was obtained on a block: from the mirror formula
/// `A ↦ -Σ_i γ(X_i) A ρ_λ(X^i)`, or, where that formula leaves the Hom space,
/// as the Hilbert space adjoint of `D₋` (the orthogonal projection of the
/// mirror formula back onto the sections).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlusSource {
    Mirror,
    Adjoint,
}

impl PlusSource {
    pub fn name(self) -> &'static str {
        match self {
            PlusSource::Mirror => "mirror",
            PlusSource::Adjoint => "adjoint",
        }
    }
}

/// `D` restricted to `V_λ ⊗ Hom_{U_q(𝔩)}(V_λ, Σ)`, on the Hom leg.
#[derive(Clone, Debug)]
pub struct DiracBlock {
    pub plus_source: PlusSource,
    pub lambda: Weight,
    pub hom_dim: usize,
    pub multiplicity: usize,
    pub dminus: Mat,
    pub dplus: Mat,
    pub dirac: Mat,
    pub gram: Mat,
}

impl DiracBlock {
    /// The chosen part in an orthonormal basis at `q`, including the factor `c^{-1/2}`.
    pub fn orthonormal(&self, geo: &Geometry, q: f64, part: Part) -> Result<DMatrix<f64>> {
        let t = geo.flag.cartan().t_of_q(q);
        let m = match part {
            Part::Minus => &self.dminus,
            Part::Plus => &self.dplus,
            Part::Full => &self.dirac,
        };
        let g = self.gram.eval(t);
        let o = numeric::orthonormal_form(&m.eval(t), &g, &g)
            .ok_or_else(|| Error::NumericalFailure(format!("block {} Gram is not positive definite at q = {q}", self.lambda)))?;
        Ok(o * geo.scale(q))
    }

    /// `max |M - Mᵀ|` of the orthonormalized full block.
    pub fn hermiticity_residual(&self, geo: &Geometry, q: f64) -> Result<f64> {
        let m = self.orthonormal(geo, q, Part::Full)?;
        Ok(numeric::max_abs(&(&m - m.transpose())))
    }

    /// `max |D₊ - D₋ᵀ|` in an orthonormal basis.
    pub fn adjoint_pair_residual(&self, geo: &Geometry, q: f64) -> Result<f64> {
        let a = self.orthonormal(geo, q, Part::Plus)?;
        let b = self.orthonormal(geo, q, Part::Minus)?;
        Ok(numeric::max_abs(&(a - b.transpose())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub lambda: Weight,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub q_value: f64,
    pub cutoff: usize,
    pub entries: Vec<SpectrumEntry>,
}
