//! Highest-weight modules by lowering.
//!
//! Starting from `v_0` of weight `λ`, each level is spanned by the vectors
//! `F_j b` for `b` on the previous level. The invariant (Shapovalov) form is
//! computed recursively from
//!
//! ```text
//! E_i F_j b = F_j E_i b + δ_ij [⟨λ_b, α_i^∨⟩]_{q_i} b
//! ⟨F_j b, c⟩ = q^{-⟨α_j, wt c⟩} ⟨b, E_j c⟩
//! ```
//!
//! and a maximal family with nonsingular Gram matrix is kept on every weight
//! space. This realizes the irreducible quotient without ever forming the
//! Verma module.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;

use super::Rep;
use crate::cartan::Weight;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::uqg::Uq;

type Sparse = Vec<(usize, Scalar)>;

const DIMENSION_BUDGET: usize = 4096;

/// Irreducible `U_q(g)`-module of highest weight `λ`.
pub fn irrep(u: &Uq, lambda: &Weight) -> Result<Rep> {
    let all: Vec<usize> = (0..u.rank()).collect();
    levi_irrep(u, lambda, &all)
}

/// Irreducible module of highest weight `λ` over the subalgebra generated by
/// the torus and `E_i`, `F_i` for `i` in `active`.
pub fn levi_irrep(u: &Uq, lambda: &Weight, active: &[usize]) -> Result<Rep> {
    let c = u.cartan();
    c.check(lambda)?;
    if active.iter().any(|&i| lambda.coords()[i] < 0) {
        return Err(Error::UnsupportedWeight(
            lambda.to_string(),
            "not dominant for the active simple roots".into(),
        ));
    }
    let rank = u.rank();
    let mut weights = vec![lambda.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut e_cols: Vec<Vec<Sparse>> = vec![vec![Vec::new()]; rank];
    let mut f_cols: Vec<Vec<Sparse>> = vec![vec![Vec::new()]; rank];
    let mut gram_blocks: HashMap<Weight, (Vec<usize>, Mat)> = HashMap::new();
    gram_blocks.insert(lambda.clone(), (vec![0], Mat::identity(1)));
    let mut current = vec![0usize];

    while !current.is_empty() {
        // candidates F_j b grouped by weight, in discovery order
        let mut groups: BTreeMap<Weight, Vec<(usize, usize, Vec<Sparse>)>> = BTreeMap::new();
        let mut order: Vec<Weight> = Vec::new();
        for &b in &current {
            for &j in active {
                let w = &weights[b] - &c.alpha(j);
                let mut ec: Vec<Sparse> = vec![Vec::new(); rank];
                for &i in active {
                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (bp, s) in &e_cols[i][b] {
                        for (t, s2) in &f_cols[j][*bp] {
                            *acc.entry(*t).or_default() += &(s * s2);
                        }
                    }
                    if i == j {
                        let h = c.q_int(weights[b].coords()[i], i);
                        *acc.entry(b).or_default() += &h;
                    }
                    ec[i] = acc.into_iter().filter(|(_, s)| !s.is_zero()).collect();
                }
                if !groups.contains_key(&w) {
                    order.push(w.clone());
                }
                groups.entry(w).or_default().push((j, b, ec));
            }
        }
        let mut next = Vec::new();
        let mut pending_f: Vec<(usize, usize, Sparse)> = Vec::new();
        for w in order {
            let cands = &groups[&w];
            let n = cands.len();
            let mut g = Mat::zeros(n, n);
            for (x, (j, b, _)) in cands.iter().enumerate() {
                let (idx, block) = &gram_blocks[&weights[*b]];
                let pos_b = idx.iter().position(|v| v == b).unwrap();
                for (y, (_, _, ecy)) in cands.iter().enumerate() {
                    let mut acc = Scalar::zero();
                    for (t, s) in &ecy[*j] {
                        let pos_t = idx.iter().position(|v| v == t).expect("weight block");
                        acc += &(s * block.get(pos_b, pos_t));
                    }
                    if !acc.is_zero() {
                        let factor = c.q_pairing(&c.alpha(*j), &w).inv();
                        g.set(x, y, &acc * &factor);
                    }
                }
            }
            let pivots = g.clone().rref_in_place();
            if pivots.is_empty() {
                continue;
            }
            let g_sel = g.submatrix(&pivots, &pivots);
            let all: Vec<usize> = (0..n).collect();
            let coords = g_sel
                .solve(&g.submatrix(&pivots, &all))
                .ok_or_else(|| Error::NumericalFailure("singular Gram block while lowering".into()))?;
            let base = weights.len();
            let new_idx: Vec<usize> = (0..pivots.len()).map(|k| base + k).collect();
            for &p in &pivots {
                let (j, b, ec) = &cands[p];
                weights.push(w.clone());
                let mut word = vec![*j];
                word.extend_from_slice(&words[*b]);
                words.push(word);
                for i in 0..rank {
                    e_cols[i].push(ec[i].clone());
                    f_cols[i].push(Vec::new());
                }
            }
            if weights.len() > DIMENSION_BUDGET {
                return Err(Error::UnsupportedWeight(
                    lambda.to_string(),
                    format!("dimension exceeds the budget of {DIMENSION_BUDGET}"),
                ));
            }
            for (x, (j, b, _)) in cands.iter().enumerate() {
                let col: Sparse = (0..pivots.len())
                    .filter_map(|k| {
                        let s = coords.get(k, x);
                        (!s.is_zero()).then(|| (new_idx[k], s.clone()))
                    })
                    .collect();
                pending_f.push((*j, *b, col));
            }
            gram_blocks.insert(w, (new_idx.clone(), g_sel));
            next.extend(new_idx);
        }
        for (j, b, col) in pending_f {
            f_cols[j][b] = col;
        }
        current = next;
    }

    let dim = weights.len();
    let mut e = vec![None; rank];
    let mut f = vec![None; rank];
    for &i in active {
        let mut me = Mat::zeros(dim, dim);
        let mut mf = Mat::zeros(dim, dim);
        for b in 0..dim {
            for (t, s) in &e_cols[i][b] {
                me.set(*t, b, s.clone());
            }
            for (t, s) in &f_cols[i][b] {
                mf.set(*t, b, s.clone());
            }
        }
        e[i] = Some(me);
        f[i] = Some(mf);
    }
    let mut gram = Mat::zeros(dim, dim);
    for (idx, block) in gram_blocks.values() {
        for (x, &a) in idx.iter().enumerate() {
            for (y, &b) in idx.iter().enumerate() {
                gram.set(a, b, block.get(x, y).clone());
            }
        }
    }
    let mut rep = Rep::from_parts(weights, e, f, gram);
    rep.words = Some(words);
    Ok(rep)
}

/// Memo cache of built modules, keyed by highest weight and active roots.
/// Concurrent readers share a read lock; construction takes the write lock
/// only to insert.
#[derive(Default)]
pub struct RepCache {
    map: RwLock<HashMap<(Weight, Vec<usize>), Arc<Rep>>>,
}

impl RepCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, u: &Uq, lambda: &Weight, active: &[usize]) -> Result<Arc<Rep>> {
        let key = (lambda.clone(), active.to_vec());
        if let Some(r) = self.map.read().get(&key) {
            return Ok(r.clone());
        }
        let rep = Arc::new(levi_irrep(u, lambda, active)?);
        Ok(self.map.write().entry(key).or_insert(rep).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.read().is_empty()
    }
}
