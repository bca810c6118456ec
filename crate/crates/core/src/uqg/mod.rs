//! Exact arithmetic in the quantized enveloping algebra `U_q(g)`.
//!
//! Elements are kept in PBW normal form `F · K · E`: an ordered monomial in
//! the negative root vectors, one torus element `K_μ` (`μ` in the weight
//! lattice), and an ordered monomial in the positive root vectors.
//!
//! Relations (`q_i = q^{d_i}`, `⟨·,·⟩` the weight-lattice pairing):
//!
//! ```text
//! K_μ E_j K_μ^{-1} = q^{⟨μ, α_j⟩} E_j      K_μ F_j K_μ^{-1} = q^{-⟨μ, α_j⟩} F_j
//! E_i F_j - F_j E_i = δ_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1})
//! ```
//!
//! plus the quantum Serre relations. In rank two the PBW order on positive
//! roots is `α_1 < α_1+α_2 < α_2` with the root vectors
//! `E_12 = E_1 E_2 - q^{-1} E_2 E_1` and `F_12 = F_1 F_2 - q^{-1} F_2 F_1`;
//! the straightening rules
//!
//! ```text
//! E_12 E_1 = q^{-1} E_1 E_12     E_2 E_12 = q^{-1} E_12 E_2     E_2 E_1 = q E_1 E_2 - q E_12
//! ```
//!
//! (and the same with `F`) are equivalent to the Serre relations. Only type A
//! of rank at most two is certified; other Cartan data are rejected.

pub mod axioms;
mod hopf;
mod rosso;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use parking_lot::Mutex;

use crate::cartan::{CartanData, LieType, Weight};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use hopf::TensorElement;
pub use rosso::RossoForm;

/// A PBW monomial `F^f K_k E^e`; exponent vectors are indexed by the PBW
/// order of positive roots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    pub f: Vec<u32>,
    pub k: Weight,
    pub e: Vec<u32>,
}

impl Monomial {
    pub fn is_unit(&self) -> bool {
        self.f.iter().all(|&x| x == 0) && self.k.is_zero() && self.e.iter().all(|&x| x == 0)
    }

    pub fn is_torus(&self) -> bool {
        self.f.iter().all(|&x| x == 0) && self.e.iter().all(|&x| x == 0)
    }
}

/// A generator letter: root vector (by PBW index) or torus element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    F(usize),
    K(Weight),
    E(usize),
}

/// A finite linear combination of PBW monomials with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(m, &c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }
}

#[derive(Clone, Debug)]
struct RootVector {
    weight: Weight,
    /// `X = X_a X_b + c X_b X_a` for composite root vectors.
    split: Option<(usize, usize, Scalar)>,
}

type OrderedTerms = Vec<(Vec<u32>, Scalar)>;

/// The algebra `U_q(g)` for certified Cartan data, with memoized
/// straightening.
pub struct Uq {
    cartan: CartanData,
    roots: Vec<RootVector>,
    simple: Vec<usize>,
    /// `(x, y) -> ordered words` for `x > y` in PBW order.
    rules: HashMap<(usize, usize), Vec<(Vec<usize>, Scalar)>>,
    plus_cache: Mutex<HashMap<(Vec<u32>, usize), OrderedTerms>>,
    minus_cache: Mutex<HashMap<(Vec<u32>, usize), OrderedTerms>>,
    ef_cache: Mutex<HashMap<(Vec<u32>, usize), AlgebraElement>>,
    mm_cache: Mutex<HashMap<(Monomial, Monomial), AlgebraElement>>,
    hopf_cache: hopf::HopfCache,
    steps: AtomicUsize,
    budget: usize,
}

impl fmt::Debug for Uq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Uq({}{})", self.cartan.lie_type, self.cartan.rank)
    }
}

const DEFAULT_BUDGET: usize = 50_000_000;

impl Uq {
    pub fn new(cartan: CartanData) -> Result<Self> {
        if cartan.lie_type != LieType::A || cartan.rank > 2 {
            return Err(Error::UnsupportedType(format!(
                "{}{}: PBW straightening is certified for type A rank <= 2 only",
                cartan.lie_type, cartan.rank
            )));
        }
        let (roots, simple, rules) = if cartan.rank == 1 {
            (
                vec![RootVector {
                    weight: cartan.alpha(0),
                    split: None,
                }],
                vec![0],
                HashMap::new(),
            )
        } else {
            let qinv = cartan.q_pow(-1);
            let q = cartan.q_pow(1);
            let roots = vec![
                RootVector {
                    weight: cartan.alpha(0),
                    split: None,
                },
                RootVector {
                    weight: &cartan.alpha(0) + &cartan.alpha(1),
                    split: Some((0, 2, -qinv.clone())),
                },
                RootVector {
                    weight: cartan.alpha(1),
                    split: None,
                },
            ];
            let mut rules = HashMap::new();
            rules.insert((1, 0), vec![(vec![0, 1], qinv.clone())]);
            rules.insert((2, 0), vec![(vec![0, 2], q.clone()), (vec![1], -q)]);
            rules.insert((2, 1), vec![(vec![1, 2], qinv)]);
            (roots, vec![0, 2], rules)
        };
        Ok(Uq {
            cartan,
            roots,
            simple,
            rules,
            plus_cache: Mutex::default(),
            minus_cache: Mutex::default(),
            ef_cache: Mutex::default(),
            mm_cache: Mutex::default(),
            hopf_cache: hopf::HopfCache::default(),
            steps: AtomicUsize::new(0),
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// PBW index of the simple root `α_i`.
    pub fn simple_index(&self, i: usize) -> usize {
        self.simple[i]
    }

    /// Positive root of the PBW letter `idx`.
    pub fn root_weight(&self, idx: usize) -> &Weight {
        &self.roots[idx].weight
    }

    pub fn root_split(&self, idx: usize) -> Option<(usize, usize, &Scalar)> {
        self.roots[idx].split.as_ref().map(|(a, b, c)| (*a, *b, c))
    }

    fn tick(&self) -> Result<()> {
        let s = self.steps.fetch_add(1, Ordering::Relaxed);
        if s > self.budget {
            return Err(Error::NonTerminating(self.budget));
        }
        Ok(())
    }

    fn zero_exps(&self) -> Vec<u32> {
        vec![0; self.roots.len()]
    }

    // ---- constructors -------------------------------------------------

    pub fn one(&self) -> AlgebraElement {
        self.k(&Weight::zero(self.rank()))
    }

    pub fn scalar(&self, c: Scalar) -> AlgebraElement {
        AlgebraElement::from_monomial(self.unit_monomial(), c)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial {
            f: self.zero_exps(),
            k: Weight::zero(self.rank()),
            e: self.zero_exps(),
        }
    }

    /// `K_μ`.
    pub fn k(&self, mu: &Weight) -> AlgebraElement {
        let mut m = self.unit_monomial();
        m.k = mu.clone();
        AlgebraElement::from_monomial(m, Scalar::one())
    }

    /// `K_i = K_{α_i}`.
    pub fn k_simple(&self, i: usize) -> AlgebraElement {
        self.k(&self.cartan.alpha(i))
    }

    pub fn e(&self, i: usize) -> AlgebraElement {
        self.e_root(self.simple[i])
    }

    pub fn f(&self, i: usize) -> AlgebraElement {
        self.f_root(self.simple[i])
    }

    /// Positive root vector with PBW index `idx`.
    pub fn e_root(&self, idx: usize) -> AlgebraElement {
        let mut m = self.unit_monomial();
        m.e[idx] = 1;
        AlgebraElement::from_monomial(m, Scalar::one())
    }

    pub fn f_root(&self, idx: usize) -> AlgebraElement {
        let mut m = self.unit_monomial();
        m.f[idx] = 1;
        AlgebraElement::from_monomial(m, Scalar::one())
    }

    pub fn letter(&self, l: &Letter) -> AlgebraElement {
        match l {
            Letter::F(i) => self.f_root(*i),
            Letter::K(w) => self.k(w),
            Letter::E(i) => self.e_root(*i),
        }
    }

    // ---- weights ------------------------------------------------------

    fn exps_weight(&self, exps: &[u32]) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (idx, &n) in exps.iter().enumerate() {
            if n > 0 {
                w = &w + &self.roots[idx].weight.scale(n as i64);
            }
        }
        w
    }

    /// Root-lattice weight of a monomial (`K_μ X K_μ^{-1} = q^{⟨μ, wt⟩} X`).
    pub fn monomial_weight(&self, m: &Monomial) -> Weight {
        &self.exps_weight(&m.e) - &self.exps_weight(&m.f)
    }

    /// Weight of a homogeneous element; `None` for zero or inhomogeneous input.
    pub fn weight_of(&self, x: &AlgebraElement) -> Option<Weight> {
        let mut it = x.terms().map(|(m, _)| self.monomial_weight(m));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Splits into weight-homogeneous components.
    pub fn weight_components(&self, x: &AlgebraElement) -> BTreeMap<Weight, AlgebraElement> {
        let mut out: BTreeMap<Weight, AlgebraElement> = BTreeMap::new();
        for (m, c) in x.terms() {
            out.entry(self.monomial_weight(m)).or_default().add_term(m.clone(), c);
        }
        out
    }

    /// The letters of a monomial in order.
    pub fn word_of(&self, m: &Monomial) -> Vec<Letter> {
        let mut w = Vec::new();
        for (idx, &n) in m.f.iter().enumerate() {
            for _ in 0..n {
                w.push(Letter::F(idx));
            }
        }
        if !m.k.is_zero() {
            w.push(Letter::K(m.k.clone()));
        }
        for (idx, &n) in m.e.iter().enumerate() {
            for _ in 0..n {
                w.push(Letter::E(idx));
            }
        }
        w
    }

    // ---- straightening ------------------------------------------------

    fn ordered_times_letter(&self, plus: bool, mono: &[u32], y: usize) -> Result<OrderedTerms> {
        let cache = if plus { &self.plus_cache } else { &self.minus_cache };
        let key = (mono.to_vec(), y);
        if let Some(v) = cache.lock().get(&key) {
            return Ok(v.clone());
        }
        self.tick()?;
        let last = mono.iter().rposition(|&n| n > 0);
        let out = match last {
            Some(x) if x > y => {
                let mut rest = mono.to_vec();
                rest[x] -= 1;
                let mut acc: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
                for (word, c) in &self.rules[&(x, y)] {
                    let mut cur: OrderedTerms = vec![(rest.clone(), c.clone())];
                    for &l in word {
                        let mut next = Vec::new();
                        for (m, cm) in &cur {
                            for (m2, c2) in self.ordered_times_letter(plus, m, l)? {
                                next.push((m2, cm * &c2));
                            }
                        }
                        cur = next;
                    }
                    for (m, cm) in cur {
                        let e = acc.entry(m).or_default();
                        *e += &cm;
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
            _ => {
                let mut m = mono.to_vec();
                m[y] += 1;
                vec![(m, Scalar::one())]
            }
        };
        cache.lock().insert(key, out.clone());
        Ok(out)
    }

    fn ordered_product(&self, plus: bool, a: &[u32], b: &[u32]) -> Result<OrderedTerms> {
        let mut cur: OrderedTerms = vec![(a.to_vec(), Scalar::one())];
        for (idx, &n) in b.iter().enumerate() {
            for _ in 0..n {
                let mut acc: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
                for (m, c) in &cur {
                    for (m2, c2) in self.ordered_times_letter(plus, m, idx)? {
                        *acc.entry(m2).or_default() += &(c * &c2);
                    }
                }
                cur = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        Ok(cur)
    }

    /// Expansion of an ordered monomial into words of simple-root letters.
    fn simple_words(&self, exps: &[u32]) -> Vec<(Vec<usize>, Scalar)> {
        let mut words: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for (idx, &n) in exps.iter().enumerate() {
            for _ in 0..n {
                let pieces: Vec<(Vec<usize>, Scalar)> = match &self.roots[idx].split {
                    None => vec![(vec![idx], Scalar::one())],
                    Some((a, b, c)) => vec![(vec![*a, *b], Scalar::one()), (vec![*b, *a], c.clone())],
                };
                words = words
                    .iter()
                    .flat_map(|(w, cw)| {
                        pieces.iter().map(move |(p, cp)| {
                            let mut nw = w.clone();
                            nw.extend_from_slice(p);
                            (nw, cw * cp)
                        })
                    })
                    .collect();
            }
        }
        words
    }

    /// `E^e · F_a` in normal form, for any PBW letter `a`.
    fn e_times_f(&self, e: &[u32], a: usize) -> Result<AlgebraElement> {
        let key = (e.to_vec(), a);
        if let Some(v) = self.ef_cache.lock().get(&key) {
            return Ok(v.clone());
        }
        self.tick()?;
        let rank = self.rank();
        let mut out = AlgebraElement::zero();
        match self.roots[a].split.clone() {
            None => {
                // F_a E^e
                let mut lead = self.unit_monomial();
                lead.f[a] = 1;
                lead.e = e.to_vec();
                out.add_term(lead, &Scalar::one());
                let i = self.simple.iter().position(|&s| s == a).expect("simple letter");
                let ai = self.cartan.alpha(i);
                let denom = self.cartan.qi_diff(i).inv();
                for (word, cw) in self.simple_words(e) {
                    let mut w = Weight::zero(rank);
                    for (j, &l) in word.iter().enumerate() {
                        if l == a {
                            let mut rest = word.clone();
                            rest.remove(j);
                            let mut terms: OrderedTerms = vec![(self.zero_exps(), Scalar::one())];
                            for &r in &rest {
                                let mut next = Vec::new();
                                for (m, c) in &terms {
                                    for (m2, c2) in self.ordered_times_letter(true, m, r)? {
                                        next.push((m2, c * &c2));
                                    }
                                }
                                terms = next;
                            }
                            let c_plus = &(&cw * &denom) * &self.cartan.q_pairing(&(-&ai), &w);
                            let c_minus = -&(&(&cw * &denom) * &self.cartan.q_pairing(&ai, &w));
                            for (m, c) in terms {
                                let mut mp = self.unit_monomial();
                                mp.k = ai.clone();
                                mp.e = m.clone();
                                out.add_term(mp, &(&c * &c_plus));
                                let mut mm = self.unit_monomial();
                                mm.k = -&ai;
                                mm.e = m;
                                out.add_term(mm, &(&c * &c_minus));
                            }
                        }
                        w = &w + &self.roots[l].weight;
                    }
                }
            }
            Some((b, c, coef)) => {
                // F_a = F_b F_c + coef F_c F_b
                let mut base = self.unit_monomial();
                base.e = e.to_vec();
                let x = AlgebraElement::from_monomial(base, Scalar::one());
                let xb = self.mul_letter(&x, &Letter::F(b))?;
                let xbc = self.mul_letter(&xb, &Letter::F(c))?;
                let xc = self.mul_letter(&x, &Letter::F(c))?;
                let xcb = self.mul_letter(&xc, &Letter::F(b))?;
                out = xbc;
                out.add_scaled(&xcb, &coef);
            }
        }
        self.ef_cache.lock().insert(key, out.clone());
        Ok(out)
    }

    fn monomial_times_letter(&self, m: &Monomial, l: &Letter) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        match l {
            Letter::K(nu) => {
                let c = self.cartan.q_pairing(nu, &self.exps_weight(&m.e)).inv();
                let mut m2 = m.clone();
                m2.k = &m.k + nu;
                out.add_term(m2, &c);
            }
            Letter::E(y) => {
                for (e2, c) in self.ordered_times_letter(true, &m.e, *y)? {
                    let mut m2 = m.clone();
                    m2.e = e2;
                    out.add_term(m2, &c);
                }
            }
            Letter::F(y) => {
                let p = self.e_times_f(&m.e, *y)?;
                for (t, c) in p.terms() {
                    let wf = -&self.exps_weight(&t.f);
                    let c1 = c * &self.cartan.q_pairing(&m.k, &wf);
                    for (f2, c2) in self.ordered_product(false, &m.f, &t.f)? {
                        let m2 = Monomial {
                            f: f2,
                            k: &m.k + &t.k,
                            e: t.e.clone(),
                        };
                        out.add_term(m2, &(&c1 * &c2));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `x · l` for a single letter `l`.
    pub fn mul_letter(&self, x: &AlgebraElement, l: &Letter) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            out.add_scaled(&self.monomial_times_letter(m, l)?, c);
        }
        Ok(out)
    }

    fn monomial_product(&self, a: &Monomial, b: &Monomial) -> Result<AlgebraElement> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.mm_cache.lock().get(&key) {
            return Ok(v.clone());
        }
        let mut cur = AlgebraElement::from_monomial(a.clone(), Scalar::one());
        for l in self.word_of(b) {
            cur = self.mul_letter(&cur, &l)?;
        }
        self.mm_cache.lock().insert(key, cur.clone());
        Ok(cur)
    }

    /// Product in normal form.
    pub fn try_mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out.add_scaled(&self.monomial_product(a, b)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Product in normal form; panics only if the step budget is exhausted,
    /// which cannot happen for certified Cartan data.
    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.try_mul(x, y).expect("straightening budget exhausted")
    }

    pub fn mul_all(&self, xs: &[&AlgebraElement]) -> AlgebraElement {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, x: &AlgebraElement, n: u32) -> AlgebraElement {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// Normal form of a word of letters.
    pub fn normal_form(&self, word: &[Letter]) -> Result<AlgebraElement> {
        let mut cur = self.one();
        for l in word {
            cur = self.mul_letter(&cur, l)?;
        }
        Ok(cur)
    }

    /// Re-normalizes an element given by possibly non-normal data (idempotent on normal input).
    pub fn renormalize(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            out.add_scaled(&self.normal_form(&self.word_of(m))?, c);
        }
        Ok(out)
    }

    pub fn commutator(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.mul(x, y).sub(&self.mul(y, x))
    }

    pub fn display(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in x.terms() {
            parts.push(format!("({c})·{}", self.display_monomial(m)));
        }
        parts.join(" + ")
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        let name = |idx: usize| -> String {
            if self.roots.len() == 1 {
                "1".into()
            } else {
                ["1", "12", "2"][idx].into()
            }
        };
        let mut s = Vec::new();
        for (idx, &n) in m.f.iter().enumerate() {
            if n > 0 {
                s.push(if n == 1 { format!("F{}", name(idx)) } else { format!("F{}^{n}", name(idx)) });
            }
        }
        if !m.k.is_zero() {
            s.push(format!("K{}", m.k));
        }
        for (idx, &n) in m.e.iter().enumerate() {
            if n > 0 {
                s.push(if n == 1 { format!("E{}", name(idx)) } else { format!("E{}^{n}", name(idx)) });
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s.join(" ")
        }
    }
}
