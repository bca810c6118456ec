//! Exact verification of the Hopf *-algebra axioms on chosen elements.

use super::{AlgebraElement, Uq};
use crate::cartan::Weight;

/// The PBW letters: negative root vectors, `K_i^{±1}`, positive root vectors.
pub fn pbw_letters(u: &Uq) -> Vec<AlgebraElement> {
    let n = u.num_roots();
    let mut out: Vec<AlgebraElement> = (0..n).map(|b| u.f_root(b)).collect();
    for i in 0..u.rank() {
        let a = u.cartan().alpha(i);
        out.push(u.k(&a));
        out.push(u.k(&-&a));
    }
    out.extend((0..n).map(|b| u.e_root(b)));
    out
}

/// All products of at most `degree` PBW letters taken in PBW order, skipping
/// products that contain both `K_i` and `K_i^{-1}`.
pub fn pbw_products(u: &Uq, degree: usize) -> Vec<AlgebraElement> {
    let letters = pbw_letters(u);
    let n = u.num_roots();
    let inverse_pair = |a: usize, b: usize| a >= n && b >= n && a < n + 2 * u.rank() && b < n + 2 * u.rank() && (a - n) / 2 == (b - n) / 2 && a != b;
    let mut out = vec![u.one()];
    let mut frontier: Vec<(Vec<usize>, AlgebraElement)> = vec![(Vec::new(), u.one())];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (word, x) in &frontier {
            let start = word.last().copied().unwrap_or(0);
            for (l, letter) in letters.iter().enumerate().skip(start) {
                if word.iter().any(|&w| inverse_pair(w, l)) {
                    continue;
                }
                let y = u.mul(x, letter);
                let mut w = word.clone();
                w.push(l);
                out.push(y.clone());
                next.push((w, y));
            }
        }
        frontier = next;
    }
    out
}

/// Outcome of [`hopf_axioms`]: the number of elements checked and a
/// description of every failed identity.
#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks on each `x`: coassociativity, both counit and antipode axioms,
/// `S S^{-1} = id`, `x** = x`, `Δ(x*) = (* ⊗ *) Δ(x)`, and, against every
/// algebra generator `g`, multiplicativity of `Δ` and `(xg)* = g* x*`.
pub fn hopf_axioms(u: &Uq, xs: &[AlgebraElement]) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut generators: Vec<AlgebraElement> = Vec::new();
    for i in 0..u.rank() {
        generators.push(u.e(i));
        generators.push(u.f(i));
        let mut w = vec![0; u.rank()];
        w[i] = 1;
        generators.push(u.k(&Weight(w)));
    }
    for x in xs {
        report.checked += 1;
        let mut fail = |what: &str| report.failures.push(format!("{what} fails on {}", u.display(x)));
        let d = u.coproduct(x);
        if u.coproduct_at(&d, 0) != u.coproduct_at(&d, 1) {
            fail("coassociativity");
        }
        let eps = u.scalar(u.counit(x));
        let counit = |slot| u.multiply_out(&u.map_factor(&d, slot, |a| u.scalar(u.counit(a))));
        if counit(0) != *x || counit(1) != *x {
            fail("counit");
        }
        if u.multiply_out(&u.map_factor(&d, 0, |a| u.antipode(a))) != eps
            || u.multiply_out(&u.map_factor(&d, 1, |a| u.antipode(a))) != eps
        {
            fail("antipode");
        }
        if u.antipode(&u.antipode_inv(x)) != *x || u.antipode_inv(&u.antipode(x)) != *x {
            fail("antipode inverse");
        }
        let xs_ = u.star(x);
        if u.star(&xs_) != *x {
            fail("star involution");
        }
        let starred = u.map_factor(&u.map_factor(&d, 0, |a| u.star(a)), 1, |a| u.star(a));
        if u.coproduct(&xs_) != starred {
            fail("star coproduct compatibility");
        }
        for g in &generators {
            let xg = u.mul(x, g);
            if u.coproduct(&xg) != u.tensor_mul(&d, &u.coproduct(g)) {
                fail("multiplicativity of the coproduct");
            }
            if u.star(&xg) != u.mul(&u.star(g), &xs_) {
                fail("star anti-multiplicativity");
            }
        }
    }
    report
}
