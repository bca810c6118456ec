//! Intertwiners, highest-weight vectors and decomposition into irreducibles.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{Rep, RepCache};
use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::uqg::Uq;

/// Which subalgebra an intertwiner commutes with: the torus together with
/// the listed simple root vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subalgebra {
    Full,
    Levi(Vec<usize>),
}

impl Subalgebra {
    pub fn active(&self, rank: usize) -> Vec<usize> {
        match self {
            Subalgebra::Full => (0..rank).collect(),
            Subalgebra::Levi(a) => a.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub matrix: Mat,
    pub subalgebra: Subalgebra,
}

/// Basis of `{T : T M_A(g) = M_B(g) T}` for the torus and the active root
/// vectors, as reduced-echelon null vectors of the linear system.
pub fn intertwiners(u: &Uq, a: &Rep, b: &Rep, sub: &Subalgebra) -> Result<Vec<Intertwiner>> {
    let active = sub.active(u.rank());
    let mut unknowns = Vec::new();
    let mut index = BTreeMap::new();
    for r in 0..b.dim() {
        for c in 0..a.dim() {
            if b.weights[r] == a.weights[c] {
                index.insert((r, c), unknowns.len());
                unknowns.push((r, c));
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    for &i in &active {
        for raising in [true, false] {
            let (ma, mb) = if raising {
                (a.e[i].as_ref(), b.e[i].as_ref())
            } else {
                (a.f[i].as_ref(), b.f[i].as_ref())
            };
            let (Some(ma), Some(mb)) = (ma, mb) else {
                return Err(Error::OutOfSupportedDomain(format!(
                    "root vector {} does not act on both modules",
                    i + 1
                )));
            };
            // (T M_A)_{r,c'} - (M_B T)_{r,c'}
            let mut eqs: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
            for &(r, c) in &unknowns {
                let v = index[&(r, c)];
                for cp in 0..a.dim() {
                    let s = ma.get(c, cp);
                    if !s.is_zero() {
                        *eqs.entry((r, cp)).or_default().entry(v).or_default() += s;
                    }
                }
                for rp in 0..b.dim() {
                    let s = mb.get(rp, r);
                    if !s.is_zero() {
                        *eqs.entry((rp, c)).or_default().entry(v).or_default() -= s;
                    }
                }
            }
            rows.extend(eqs.into_values());
        }
    }
    let mut sys = Mat::zeros(rows.len(), unknowns.len());
    for (k, row) in rows.iter().enumerate() {
        for (v, s) in row {
            if !s.is_zero() {
                sys.set(k, *v, s.clone());
            }
        }
    }
    let null = if rows.is_empty() {
        (0..unknowns.len())
            .map(|k| {
                let mut v = vec![Scalar::zero(); unknowns.len()];
                v[k] = Scalar::one();
                v
            })
            .collect()
    } else {
        sys.nullspace()
    };
    Ok(null
        .into_iter()
        .map(|v| {
            let mut t = Mat::zeros(b.dim(), a.dim());
            for (k, &(r, c)) in unknowns.iter().enumerate() {
                t.set(r, c, v[k].clone());
            }
            Intertwiner {
                matrix: t,
                subalgebra: sub.clone(),
            }
        })
        .collect())
}

/// Vectors of weight `w` killed by every active `E_i`, as full coordinate vectors.
pub fn highest_weight_vectors(rep: &Rep, w: &Weight, active: &[usize]) -> Vec<Vec<Scalar>> {
    let cols = rep.weight_space(w);
    if cols.is_empty() {
        return Vec::new();
    }
    let all_rows: Vec<usize> = (0..rep.dim()).collect();
    let blocks: Vec<Mat> = active
        .iter()
        .map(|&i| rep.e[i].as_ref().expect("active root").submatrix(&all_rows, &cols))
        .collect();
    let kernel = if blocks.is_empty() {
        (0..cols.len())
            .map(|k| {
                let mut v = vec![Scalar::zero(); cols.len()];
                v[k] = Scalar::one();
                v
            })
            .collect()
    } else {
        Mat::vstack(&blocks).nullspace()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut full = vec![Scalar::zero(); rep.dim()];
            for (k, &c) in cols.iter().enumerate() {
                full[c] = v[k].clone();
            }
            full
        })
        .collect()
}

/// The module map `ι: V → rep` sending the lowered basis vector
/// `F_{w_1} ⋯ F_{w_k} v_0` of `irrep` to `F_{w_1} ⋯ F_{w_k} v` (columns of the result).
pub fn embedding(rep: &Rep, v: &[Scalar], irrep: &Rep) -> Result<Mat> {
    let words = irrep
        .words()
        .ok_or_else(|| Error::OutOfSupportedDomain("target has no lowering words".into()))?;
    let mut out = Mat::zeros(rep.dim(), irrep.dim());
    for (b, word) in words.iter().enumerate() {
        let mut x = v.to_vec();
        for &j in word.iter().rev() {
            let f = rep.f[j]
                .as_ref()
                .ok_or_else(|| Error::OutOfSupportedDomain(format!("F_{} does not act", j + 1)))?;
            x = f.mul_vec(&x);
        }
        for (r, s) in x.into_iter().enumerate() {
            if !s.is_zero() {
                out.set(r, b, s);
            }
        }
    }
    Ok(out)
}

/// One isotypic copy inside a decomposition: `ι: V_ν → rep` and the
/// projection `π: rep → V_ν` with `π ι = 1` and `Σ ι π = 1`.
#[derive(Clone, Debug)]
pub struct Component {
    pub highest: Weight,
    pub irrep: Arc<Rep>,
    pub iota: Mat,
    pub pi: Mat,
}

/// Decomposes a module into irreducibles over the active subalgebra. Weights
/// are visited in decreasing order and highest-weight vectors in echelon order.
pub fn decompose(u: &Uq, rep: &Rep, active: &[usize], cache: &RepCache) -> Result<Vec<Component>> {
    let weights: BTreeSet<Weight> = rep.weights.iter().cloned().collect();
    let mut pieces = Vec::new();
    for w in weights.iter().rev() {
        if active.iter().any(|&i| w.coords()[i] < 0) {
            continue;
        }
        for v in highest_weight_vectors(rep, w, active) {
            let irr = cache.get(u, w, active)?;
            let iota = embedding(rep, &v, &irr)?;
            pieces.push((w.clone(), irr, iota));
        }
    }
    let total: usize = pieces.iter().map(|(_, r, _)| r.dim()).sum();
    if total != rep.dim() {
        return Err(Error::NumericalFailure(format!(
            "decomposition covers {total} of {} dimensions",
            rep.dim()
        )));
    }
    let mut u_mat = Mat::zeros(rep.dim(), rep.dim());
    let mut col = 0;
    for (_, irr, iota) in &pieces {
        for b in 0..irr.dim() {
            for r in 0..rep.dim() {
                let s = iota.get(r, b);
                if !s.is_zero() {
                    u_mat.set(r, col + b, s.clone());
                }
            }
        }
        col += irr.dim();
    }
    let inv = u_mat
        .inverse()
        .ok_or_else(|| Error::NumericalFailure("components are not independent".into()))?;
    let mut out = Vec::new();
    let mut start = 0;
    let all: Vec<usize> = (0..rep.dim()).collect();
    for (w, irr, iota) in pieces {
        let rows: Vec<usize> = (start..start + irr.dim()).collect();
        start += irr.dim();
        out.push(Component {
            highest: w,
            pi: inv.submatrix(&rows, &all),
            irrep: irr,
            iota,
        });
    }
    Ok(out)
}
