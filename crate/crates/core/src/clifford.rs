//! Spin module `Σ` of the tangent space and the equivariant embedding
//! `γ: 𝔲₊ ⊕ 𝔲₋ → End(Σ)`.
//!
//! Classically `Σ = Λ^•(𝔲₊)`, twisted by a torus charge `c = -⌊k/2⌋ ω_r`
//! where `Σ_β β = k ω_r` runs over the weights of `𝔲₊`. Each exterior power
//! is a single Levi irreducible for the supported flag manifolds, and is
//! deformed to the corresponding `U_q(𝔩)`-module. The Gram form on `Λ^d` is the
//! deformed one times a positive rational `N_d`; the `N_d` and the overall
//! scale are fitted so that every `w_i {γ(Y_i), γ(Y_i)^†}` is a multiple of the
//! identity at `q = 1`.

use nalgebra::{Complex, DMatrix};

use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::flag::{FlagData, TangentBasis};
use crate::linalg::{numeric, Mat};
use crate::poly::Poly;
use crate::reps::{intertwiners, levi_irrep, Rep, Subalgebra};
use crate::scalar::Scalar;
use crate::uqg::{AlgebraElement, Uq};

/// One exterior power `Λ^d ⊗ ℂ_c` inside `Σ`.
#[derive(Clone, Debug)]
pub struct SpinSummand {
    pub degree: usize,
    pub highest: Weight,
    pub offset: usize,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct SpinSpace {
    pub m: usize,
    pub charge: Weight,
    pub sigma: Rep,
    pub summands: Vec<SpinSummand>,
    /// Gram scale `N_d` of each summand.
    pub scales: Vec<Scalar>,
}

/// `γ(Y_i)` and `γ(Y_i*) := γ(Y_i)^†` in the weight basis of `Σ`. The
/// normalized operators are `γ(X_i) = √(w_i / c) γ(Y_i)` with `w_i` the
/// tangent norms and `c = clifford_scale`.
#[derive(Clone, Debug)]
pub struct GammaMap {
    pub minus: Vec<Mat>,
    pub plus: Vec<Mat>,
    pub clifford_scale: Scalar,
    /// Dimension of the space of equivariant maps `𝔲₋ → End(Σ)`.
    pub hom_dim: usize,
}

fn constant(n: &num_bigint::BigInt, d: &num_bigint::BigInt) -> Scalar {
    Scalar::from_polys(Poly::constant(n.clone()), Poly::constant(d.clone()))
}

fn at_one(s: &Scalar) -> Result<Scalar> {
    let (n, d) = s
        .at_one()
        .ok_or_else(|| Error::NumericalFailure(format!("{s} has a pole at q = 1")))?;
    Ok(constant(&n, &d))
}

/// The Levi module spanned by the tangent vectors, in the basis `Y_i` (or `Y_i*`).
pub fn tangent_module(fd: &FlagData, basis: &[AlgebraElement]) -> Result<Rep> {
    let u = fd.uq();
    let rank = fd.cartan().rank;
    let m = basis.len();
    let weights: Vec<Weight> = basis
        .iter()
        .map(|x| u.weight_of(x).expect("weight vector"))
        .collect();
    let mut e = vec![None; rank];
    let mut f = vec![None; rank];
    for &i in fd.levi() {
        for (slot, g) in [(&mut e, u.e(i)), (&mut f, u.f(i))] {
            let mut mat = Mat::zeros(m, m);
            for (j, y) in basis.iter().enumerate() {
                let img = u.ad(&g, y);
                if img.is_zero() {
                    continue;
                }
                let (k, c) = expand_in(u, &img, basis)?;
                mat.set(k, j, c);
            }
            slot[i] = Some(mat);
        }
    }
    Ok(Rep::from_parts(weights, e, f, Mat::identity(m)))
}

/// Writes a weight vector as `c · basis[k]`.
pub fn expand_in(u: &Uq, x: &AlgebraElement, basis: &[AlgebraElement]) -> Result<(usize, Scalar)> {
    let w = u.weight_of(x);
    for (k, b) in basis.iter().enumerate() {
        if u.weight_of(b) == w {
            let (mono, c) = x.terms().next().expect("nonzero");
            let ratio = c / &b.coefficient(mono);
            if b.scale(&ratio) == *x {
                return Ok((k, ratio));
            }
        }
    }
    Err(Error::WellDefinednessViolated("element is not a multiple of a tangent vector".into()))
}

/// `End(Σ)` with `g · T = σ(g_(1)) T σ(S(g_(2)))`; index `(a, b)` of `T` is `a·dim + b`.
pub fn end_module(u: &Uq, sigma: &Rep) -> Result<Rep> {
    let n = sigma.dim();
    let c = u.cartan();
    let id = Mat::identity(n);
    let mut e = vec![None; c.rank];
    let mut f = vec![None; c.rank];
    for i in sigma.active() {
        let se = sigma.act(u, &u.e(i))?;
        let sf = sigma.act(u, &u.f(i))?;
        let k = sigma.k_matrix(u, &c.alpha(i));
        let kinv = sigma.k_matrix(u, &-&c.alpha(i));
        // E·T = σ(E) T - σ(K) T σ(K^{-1} E);  F·T = σ(F) T σ(K) - T σ(F) σ(K)
        e[i] = Some(&se.kron(&id) - &k.kron(&(&kinv * &se).transpose()));
        f[i] = Some(&sf.kron(&k.transpose()) - &id.kron(&(&sf * &k).transpose()));
    }
    let mut weights = Vec::with_capacity(n * n);
    for a in sigma.weights() {
        for b in sigma.weights() {
            weights.push(a - b);
        }
    }
    Ok(Rep::from_parts(weights, e, f, Mat::identity(n * n)))
}

fn exterior_weights(betas: &[Weight], degree: usize, charge: &Weight) -> Vec<Weight> {
    let m = betas.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize == degree {
            let mut w = charge.clone();
            for (i, b) in betas.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    w = &w + b;
                }
            }
            out.push(w);
        }
    }
    out
}

impl SpinSpace {
    pub fn new(fd: &FlagData, tb: &TangentBasis) -> Result<Self> {
        let c = fd.cartan();
        let r = fd.r();
        let m = tb.dim();
        let betas: Vec<Weight> = tb.weights.iter().map(|w| -w).collect();
        let total = betas.iter().fold(Weight::zero(c.rank), |a, b| &a + b);
        if (0..c.rank).any(|i| i != r && total.coords()[i] != 0) {
            return Err(Error::BranchingTableMissing(format!(
                "sum of tangent weights {total} is not a multiple of ω_{}",
                r + 1
            )));
        }
        let k = total.coords()[r];
        let charge = c.omega(r).scale(-k.div_euclid(2));
        let mut summands = Vec::new();
        let mut blocks: Vec<Rep> = Vec::new();
        let mut offset = 0;
        for degree in (0..=m).rev() {
            let mut remaining = exterior_weights(&betas, degree, &charge);
            let top = remaining
                .iter()
                .find(|w| {
                    fd.levi()
                        .iter()
                        .all(|&i| !remaining.contains(&(*w + &c.alpha(i))))
                })
                .cloned()
                .expect("nonempty exterior power");
            let rep = levi_irrep(fd.uq(), &top, fd.levi()).map_err(|_| {
                Error::BranchingTableMissing(format!("Λ^{degree} has non-dominant top weight {top}"))
            })?;
            for w in rep.weights() {
                let pos = remaining.iter().position(|v| v == w).ok_or_else(|| {
                    Error::BranchingTableMissing(format!("Λ^{degree} does not contain the weights of {top}"))
                })?;
                remaining.remove(pos);
            }
            if !remaining.is_empty() {
                return Err(Error::BranchingTableMissing(format!(
                    "Λ^{degree} is reducible under the Levi subalgebra"
                )));
            }
            summands.push(SpinSummand {
                degree,
                highest: top,
                offset,
                dim: rep.dim(),
            });
            offset += rep.dim();
            blocks.push(rep);
        }
        let scales = vec![Scalar::one(); summands.len()];
        let sigma = direct_sum(fd, &blocks, &scales);
        Ok(SpinSpace {
            m,
            charge,
            sigma,
            summands,
            scales,
        })
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    fn with_scales(&self, fd: &FlagData, scales: Vec<Scalar>) -> Result<Self> {
        let blocks: Vec<Rep> = self
            .summands
            .iter()
            .map(|s| levi_irrep(fd.uq(), &s.highest, fd.levi()))
            .collect::<Result<_>>()?;
        Ok(SpinSpace {
            sigma: direct_sum(fd, &blocks, &scales),
            scales,
            ..self.clone()
        })
    }

    /// Summand index holding basis vector `b`.
    pub fn summand_of(&self, b: usize) -> usize {
        self.summands
            .iter()
            .position(|s| b >= s.offset && b < s.offset + s.dim)
            .expect("basis index in range")
    }

    /// Anticommuting classical gamma matrices on `Λ^•ℂ^m` (basis ordered by
    /// subsets, bit `i` meaning `e_i` is present): `c(e_j) = ε_j - ι_j` and
    /// `c(J e_j) = i(ε_j + ι_j)`, so `c(v)^2 = -|v|^2` for real `v ∈ ℝ^{2m}`.
    pub fn classical_gammas(m: usize) -> Vec<DMatrix<Complex<f64>>> {
        let n = 1usize << m;
        let wedge = |j: usize| {
            DMatrix::from_fn(n, n, |row, col| {
                if col & (1 << j) == 0 && row == col | (1 << j) {
                    let sign = if (col & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    Complex::new(sign, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
        };
        let mut out = Vec::new();
        for j in 0..m {
            let eps = wedge(j);
            let iota = eps.adjoint();
            out.push(&eps - &iota);
            out.push((&eps + &iota) * Complex::new(0.0, 1.0));
        }
        out
    }
}

fn direct_sum(fd: &FlagData, blocks: &[Rep], scales: &[Scalar]) -> Rep {
    let rank = fd.cartan().rank;
    let n: usize = blocks.iter().map(Rep::dim).sum();
    let mut weights = Vec::with_capacity(n);
    let mut e = vec![None; rank];
    let mut f = vec![None; rank];
    for &i in fd.levi() {
        e[i] = Some(Mat::zeros(n, n));
        f[i] = Some(Mat::zeros(n, n));
    }
    let mut gram = Mat::zeros(n, n);
    let mut off = 0;
    for (b, s) in blocks.iter().zip(scales) {
        weights.extend(b.weights().iter().cloned());
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                let g = b.gram().get(x, y);
                if !g.is_zero() {
                    gram.set(off + x, off + y, g * s);
                }
                for &i in fd.levi() {
                    let ve = b.e_matrix(i).unwrap().get(x, y);
                    if !ve.is_zero() {
                        e[i].as_mut().unwrap().set(off + x, off + y, ve.clone());
                    }
                    let vf = b.f_matrix(i).unwrap().get(x, y);
                    if !vf.is_zero() {
                        f[i].as_mut().unwrap().set(off + x, off + y, vf.clone());
                    }
                }
            }
        }
        off += b.dim();
    }
    Rep::from_parts(weights, e, f, gram)
}

fn unvec(col: &[Scalar], n: usize) -> Mat {
    let mut t = Mat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let s = &col[a * n + b];
            if !s.is_zero() {
                t.set(a, b, s.clone());
            }
        }
    }
    t
}

/// Restriction of `t` to the block mapping summand `from` into summand `to`.
fn block_part(t: &Mat, spin: &SpinSpace, from: usize, to: usize) -> Mat {
    let mut out = Mat::zeros(t.rows(), t.cols());
    let (sf, st) = (&spin.summands[from], &spin.summands[to]);
    for a in st.offset..st.offset + st.dim {
        for b in sf.offset..sf.offset + sf.dim {
            let s = t.get(a, b);
            if !s.is_zero() {
                out.set(a, b, s.clone());
            }
        }
    }
    out
}

/// Builds `γ` and fits the Gram scales of `Σ`; returns the rescaled spin space.
pub fn gamma_embedding(fd: &FlagData, tb: &TangentBasis, spin: &SpinSpace) -> Result<(SpinSpace, GammaMap)> {
    let u = fd.uq();
    let n = spin.dim();
    let m = tb.dim();
    let source = tangent_module(fd, &tb.minus)?;
    let target = end_module(u, &spin.sigma)?;
    let sols = intertwiners(u, &source, &target, &Subalgebra::Levi(fd.levi().to_vec()))?;
    if sols.is_empty() {
        return Err(Error::NoEquivariantEmbedding);
    }
    let hom_dim = sols.len();
    // summands are ordered by decreasing degree: block (k, k+1) lowers the degree by one
    let transitions: Vec<(usize, usize)> = (0..spin.summands.len() - 1).map(|k| (k, k + 1)).collect();
    let mut chosen: Vec<Vec<Mat>> = Vec::new();
    for &(from, to) in &transitions {
        let mut found: Option<Vec<Mat>> = None;
        for s in &sols {
            let parts: Vec<Mat> = (0..m)
                .map(|j| block_part(&unvec(&s.matrix.col(j), n), spin, from, to))
                .collect();
            if parts.iter().any(|p| !p.is_zero()) {
                if found.is_some() {
                    return Err(Error::AmbiguousEmbedding(hom_dim));
                }
                found = Some(parts);
            }
        }
        chosen.push(found.ok_or(Error::NoEquivariantEmbedding)?);
    }
    let gammas: Vec<Mat> = (0..m)
        .map(|j| chosen.iter().fold(Mat::zeros(n, n), |acc, parts| &acc + &parts[j]))
        .collect();

    let unit = spin.with_scales(fd, vec![Scalar::one(); spin.summands.len()])?;
    let g = unit.sigma.gram();
    let ginv = g.inverse().ok_or_else(|| Error::NumericalFailure("singular spin Gram".into()))?;
    let adj = |a: &Mat| &(&ginv * &a.transpose()) * g;
    let nt = transitions.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..m {
        let w = &tb.norms[j] / &tb.norms[0];
        let mut terms: Vec<Mat> = Vec::new();
        for parts in &chosen {
            let p = &parts[j];
            let pa = adj(p);
            terms.push((&(p * &pa) + &(&pa * p)).scale(&w));
        }
        for a in 0..n {
            for b in 0..n {
                let mut row = Vec::with_capacity(nt + 1);
                for t in &terms {
                    row.push(at_one(t.get(a, b))?);
                }
                row.push(if a == b { Scalar::from_int(-1) } else { Scalar::zero() });
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let null = Mat::from_rows(rows).nullspace();
    let sol = match null.as_slice() {
        [v] => v.clone(),
        _ => {
            return Err(Error::NumericalFailure(format!(
                "classical Clifford fit has a {}-dimensional solution space",
                null.len()
            )))
        }
    };
    let c = sol[nt].clone();
    if c.is_zero() {
        return Err(Error::NumericalFailure("degenerate Clifford scale".into()));
    }
    let mut scales = vec![Scalar::one()];
    for (k, _) in transitions.iter().enumerate() {
        let s = &sol[k] / &c;
        let positive = s.at_one().map(|(a, b)| (a > 0.into()) == (b > 0.into()));
        if positive != Some(true) {
            return Err(Error::NumericalFailure("Clifford fit produced a non-positive Gram scale".into()));
        }
        let prev = scales[k].clone();
        scales.push(&prev / &s);
    }
    let fitted = spin.with_scales(fd, scales)?;
    let g = fitted.sigma.gram();
    let ginv = g.inverse().ok_or_else(|| Error::NumericalFailure("singular spin Gram".into()))?;
    let plus: Vec<Mat> = gammas.iter().map(|a| &(&ginv * &a.transpose()) * g).collect();
    Ok((
        fitted,
        GammaMap {
            minus: gammas,
            plus,
            clifford_scale: &tb.norms[0] / &c,
            hom_dim,
        },
    ))
}

impl GammaMap {
    /// `max_i ‖γ(X^i) - γ(X_i)^†‖` at `q`, computed in a basis of `Σ` that is
    /// orthonormal for the spin Gram.
    pub fn adjoint_residual(&self, fd: &FlagData, spin: &SpinSpace, q: f64) -> Result<f64> {
        let t = fd.cartan().t_of_q(q);
        let g = spin.sigma.gram().eval(t);
        let mut worst: f64 = 0.0;
        for (m, p) in self.minus.iter().zip(&self.plus) {
            let on = |a: &Mat| {
                numeric::orthonormal_form(&a.eval(t), &g, &g)
                    .ok_or_else(|| Error::NumericalFailure(format!("spin Gram is not positive definite at q = {q}")))
            };
            let diff = on(p)? - on(m)?.transpose();
            worst = worst.max(numeric::max_abs(&diff));
        }
        Ok(worst)
    }

    /// Exact equivariance residuals `σ(g_(1)) γ(X) σ(S g_(2)) - γ(g ▷ X)` for
    /// every Levi generator `g` and every `X` in `𝔲₋ ∪ 𝔲₊`; empty when all vanish.
    pub fn equivariance_failures(&self, fd: &FlagData, tb: &TangentBasis, spin: &SpinSpace) -> Result<Vec<String>> {
        let u = fd.uq();
        let mut out = Vec::new();
        for (name, basis, mats) in [("minus", &tb.minus, &self.minus), ("plus", &tb.plus, &self.plus)] {
            for (gi, g) in fd.levi_generators().iter().enumerate() {
                for (j, x) in basis.iter().enumerate() {
                    let mut lhs = Mat::zeros(spin.dim(), spin.dim());
                    for (key, c) in u.coproduct(g).terms() {
                        let g1 = AlgebraElement::from_monomial(key[0].clone(), Scalar::one());
                        let g2 = u.antipode(&AlgebraElement::from_monomial(key[1].clone(), Scalar::one()));
                        let term = &(&spin.sigma.act(u, &g1)? * &mats[j]) * &spin.sigma.act(u, &g2)?;
                        lhs = &lhs + &term.scale(c);
                    }
                    let img = u.ad(g, x);
                    let rhs = if img.is_zero() {
                        Mat::zeros(spin.dim(), spin.dim())
                    } else {
                        let (k, c) = expand_in(u, &img, basis)?;
                        mats[k].scale(&c)
                    };
                    if lhs != rhs {
                        out.push(format!("{name}: generator {gi}, vector {j}"));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
