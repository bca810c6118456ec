//! Hopf structure, star and adjoint action.

use std::collections::{BTreeMap, HashMap};

use parking_lot::Mutex;

use super::{AlgebraElement, Letter, Monomial, Uq};
use crate::cartan::Weight;
use crate::error::Result;
use crate::scalar::Scalar;

/// An element of `U^{⊗n}`; keys are tuples of PBW monomials.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TensorElement {
    terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    /// Pure tensor `x_1 ⊗ … ⊗ x_n`.
    pub fn pure(factors: &[&AlgebraElement]) -> Self {
        let mut cur: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for x in factors {
            let mut next = Vec::new();
            for (k, c) in &cur {
                for (m, cm) in x.terms() {
                    let mut k2 = k.clone();
                    k2.push(m.clone());
                    next.push((k2, c * cm));
                }
            }
            cur = next;
        }
        let mut out = Self::zero();
        for (k, c) in cur {
            out.add_term(k, &c);
        }
        out
    }
}

#[derive(Default)]
pub(super) struct HopfCache {
    coproduct: Mutex<HashMap<Letter, TensorElement>>,
    antipode: Mutex<HashMap<(bool, Letter), AlgebraElement>>,
    star: Mutex<HashMap<Letter, AlgebraElement>>,
}

impl Uq {
    /// Componentwise product in `U^{⊗n}`.
    pub fn tensor_mul(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                let mut partial = TensorElement::pure(&[]);
                for (ma, mb) in ka.iter().zip(kb) {
                    let p = self.mul(
                        &AlgebraElement::from_monomial(ma.clone(), Scalar::one()),
                        &AlgebraElement::from_monomial(mb.clone(), Scalar::one()),
                    );
                    partial = extend(&partial, &p);
                }
                out.add_scaled(&partial, &(ca * cb));
            }
        }
        out
    }

    fn letter_coproduct(&self, l: &Letter) -> TensorElement {
        if let Some(v) = self.hopf_cache.coproduct.lock().get(l) {
            return v.clone();
        }
        let one = self.one();
        let out = match l {
            Letter::K(mu) => {
                let k = self.k(mu);
                TensorElement::pure(&[&k, &k])
            }
            Letter::E(idx) | Letter::F(idx) => {
                let is_e = matches!(l, Letter::E(_));
                match self.roots[*idx].split.clone() {
                    None => {
                        let i = self.simple.iter().position(|s| s == idx).expect("simple letter");
                        let ai = self.cartan.alpha(i);
                        if is_e {
                            let e = self.e_root(*idx);
                            let mut t = TensorElement::pure(&[&e, &one]);
                            t.add_scaled(&TensorElement::pure(&[&self.k(&ai), &e]), &Scalar::one());
                            t
                        } else {
                            let f = self.f_root(*idx);
                            let mut t = TensorElement::pure(&[&f, &self.k(&-&ai)]);
                            t.add_scaled(&TensorElement::pure(&[&one, &f]), &Scalar::one());
                            t
                        }
                    }
                    Some((a, b, c)) => {
                        let (la, lb) = if is_e {
                            (Letter::E(a), Letter::E(b))
                        } else {
                            (Letter::F(a), Letter::F(b))
                        };
                        let da = self.letter_coproduct(&la);
                        let db = self.letter_coproduct(&lb);
                        let mut t = self.tensor_mul(&da, &db);
                        t.add_scaled(&self.tensor_mul(&db, &da), &c);
                        t
                    }
                }
            }
        };
        self.hopf_cache.coproduct.lock().insert(l.clone(), out.clone());
        out
    }

    /// `Δ(E_i) = E_i⊗1 + K_i⊗E_i`, `Δ(F_i) = F_i⊗K_i^{-1} + 1⊗F_i`, `Δ(K_μ) = K_μ⊗K_μ`.
    pub fn coproduct(&self, x: &AlgebraElement) -> TensorElement {
        let mut out = TensorElement::zero();
        let one = self.one();
        for (m, c) in x.terms() {
            let mut acc = TensorElement::pure(&[&one, &one]);
            for l in self.word_of(m) {
                acc = self.tensor_mul(&acc, &self.letter_coproduct(&l));
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// Applies `Δ` to the tensor factor at `slot`.
    pub fn coproduct_at(&self, t: &TensorElement, slot: usize) -> TensorElement {
        let mut out = TensorElement::zero();
        for (k, c) in t.terms() {
            let d = self.coproduct(&AlgebraElement::from_monomial(k[slot].clone(), Scalar::one()));
            for (dk, dc) in d.terms() {
                let mut key = k[..slot].to_vec();
                key.extend(dk.iter().cloned());
                key.extend(k[slot + 1..].iter().cloned());
                out.add_term(key, &(c * dc));
            }
        }
        out
    }

    /// `ε(E) = ε(F) = 0`, `ε(K_μ) = 1`.
    pub fn counit(&self, x: &AlgebraElement) -> Scalar {
        let mut s = Scalar::zero();
        for (m, c) in x.terms() {
            if m.is_torus() {
                s += c;
            }
        }
        s
    }

    fn letter_antipode(&self, l: &Letter, inverse: bool) -> AlgebraElement {
        let key = (inverse, l.clone());
        if let Some(v) = self.hopf_cache.antipode.lock().get(&key) {
            return v.clone();
        }
        let out = match l {
            Letter::K(mu) => self.k(&-mu),
            Letter::E(idx) | Letter::F(idx) => {
                let is_e = matches!(l, Letter::E(_));
                match self.roots[*idx].split.clone() {
                    None => {
                        let i = self.simple.iter().position(|s| s == idx).expect("simple letter");
                        let ai = self.cartan.alpha(i);
                        let minus = Scalar::from_int(-1);
                        let (x, kk) = if is_e {
                            (self.e_root(*idx), self.k(&-&ai))
                        } else {
                            (self.f_root(*idx), self.k(&ai))
                        };
                        // S(E) = -K^{-1}E, S(F) = -FK, S^{-1}(E) = -EK^{-1}, S^{-1}(F) = -KF
                        let prod = match (is_e, inverse) {
                            (true, false) | (false, true) => self.mul(&kk, &x),
                            (true, true) | (false, false) => self.mul(&x, &kk),
                        };
                        prod.scale(&minus)
                    }
                    Some((a, b, c)) => {
                        let (la, lb) = if is_e {
                            (Letter::E(a), Letter::E(b))
                        } else {
                            (Letter::F(a), Letter::F(b))
                        };
                        let sa = self.letter_antipode(&la, inverse);
                        let sb = self.letter_antipode(&lb, inverse);
                        let mut t = self.mul(&sb, &sa);
                        t.add_scaled(&self.mul(&sa, &sb), &c);
                        t
                    }
                }
            }
        };
        self.hopf_cache.antipode.lock().insert(key, out.clone());
        out
    }

    fn anti_map(&self, x: &AlgebraElement, f: impl Fn(&Letter) -> AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            let mut acc = self.one();
            for l in self.word_of(m).iter().rev() {
                acc = self.mul(&acc, &f(l));
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// Antipode: `S(E_i) = -K_i^{-1}E_i`, `S(F_i) = -F_iK_i`, `S(K_μ) = K_μ^{-1}`.
    pub fn antipode(&self, x: &AlgebraElement) -> AlgebraElement {
        self.anti_map(x, |l| self.letter_antipode(l, false))
    }

    pub fn antipode_inv(&self, x: &AlgebraElement) -> AlgebraElement {
        self.anti_map(x, |l| self.letter_antipode(l, true))
    }

    fn letter_star(&self, l: &Letter) -> AlgebraElement {
        if let Some(v) = self.hopf_cache.star.lock().get(l) {
            return v.clone();
        }
        let out = match l {
            Letter::K(mu) => self.k(mu),
            Letter::E(idx) | Letter::F(idx) => {
                let is_e = matches!(l, Letter::E(_));
                match self.roots[*idx].split.clone() {
                    None => {
                        let i = self.simple.iter().position(|s| s == idx).expect("simple letter");
                        let ai = self.cartan.alpha(i);
                        if is_e {
                            self.mul(&self.k(&ai), &self.f_root(*idx))
                        } else {
                            self.mul(&self.e_root(*idx), &self.k(&-&ai))
                        }
                    }
                    Some((a, b, c)) => {
                        let (la, lb) = if is_e {
                            (Letter::E(a), Letter::E(b))
                        } else {
                            (Letter::F(a), Letter::F(b))
                        };
                        let sa = self.letter_star(&la);
                        let sb = self.letter_star(&lb);
                        let mut t = self.mul(&sb, &sa);
                        t.add_scaled(&self.mul(&sa, &sb), &c);
                        t
                    }
                }
            }
        };
        self.hopf_cache.star.lock().insert(l.clone(), out.clone());
        out
    }

    /// The compact real form: `E_i^* = K_iF_i`, `F_i^* = E_iK_i^{-1}`, `K_μ^* = K_μ`.
    /// Coefficients are fixed since `q` is real.
    pub fn star(&self, x: &AlgebraElement) -> AlgebraElement {
        self.anti_map(x, |l| self.letter_star(l))
    }

    /// `θ = * ∘ S`.
    pub fn theta(&self, x: &AlgebraElement) -> AlgebraElement {
        self.star(&self.antipode(x))
    }

    /// Left adjoint action `X ▷ Y = X_(1) Y S(X_(2))`.
    pub fn ad(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in self.coproduct(x).terms() {
            let x1 = AlgebraElement::from_monomial(k[0].clone(), Scalar::one());
            let x2 = AlgebraElement::from_monomial(k[1].clone(), Scalar::one());
            let p = self.mul_all(&[&x1, y, &self.antipode(&x2)]);
            out.add_scaled(&p, c);
        }
        out
    }

    /// Multiplies out the factors of every term.
    pub fn multiply_out(&self, t: &TensorElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in t.terms() {
            let mut acc = self.one();
            for m in k {
                acc = self.mul(&acc, &AlgebraElement::from_monomial(m.clone(), Scalar::one()));
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// Applies a linear map to one tensor factor.
    pub fn map_factor(
        &self,
        t: &TensorElement,
        slot: usize,
        f: impl Fn(&AlgebraElement) -> AlgebraElement,
    ) -> TensorElement {
        let mut out = TensorElement::zero();
        for (k, c) in t.terms() {
            let img = f(&AlgebraElement::from_monomial(k[slot].clone(), Scalar::one()));
            for (m, cm) in img.terms() {
                let mut key = k.clone();
                key[slot] = m.clone();
                out.add_term(key, &(c * cm));
            }
        }
        out
    }

    /// `K_{2ρ}`, implementing `S^2 = Ad(K_{2ρ}^{-1})`.
    pub fn k_two_rho(&self) -> AlgebraElement {
        self.k(&self.cartan.rho().scale(2))
    }

    /// The element `K_μ` for a weight, checked against the Cartan data.
    pub fn try_k(&self, mu: &Weight) -> Result<AlgebraElement> {
        self.cartan.check(mu)?;
        Ok(self.k(mu))
    }
}

fn extend(t: &TensorElement, x: &AlgebraElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (k, c) in t.terms() {
        for (m, cm) in x.terms() {
            let mut k2 = k.clone();
            k2.push(m.clone());
            out.add_term(k2, &(c * cm));
        }
    }
    out
}
