//! Cartan data, root and weight lattices, and the invariant pairing on the
//! weight lattice.
//!
//! Weights are stored in the basis of fundamental weights `ω_i`; simple roots
//! are `α_j = Σ_k a_kj ω_k` (column `j` of the Cartan matrix). The pairing is
//! normalized by `⟨ω_i, α_j⟩ = δ_ij d_i`, with `d_i` the symmetrizers, so in
//! type A `⟨α_i, α_i⟩ = 2`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    A,
    B,
    C,
    D,
    G,
}

impl LieType {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            "G" | "g" => Ok(LieType::G),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Sum of coordinates; the enumeration level of a dominant weight.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanData {
    pub lie_type: LieType,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    /// `(ω_i, ω_j)`.
    form: Vec<Vec<Rational64>>,
    /// Least `D` with `⟨P, P⟩ ⊂ (1/D)Z`; scalars live in `Z(t)` with `q = t^D`.
    root_den: i64,
    pub experimental: bool,
}

fn cartan_matrix(lie_type: LieType, n: usize) -> Result<Vec<Vec<i64>>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match lie_type {
        LieType::A => {}
        LieType::B if n >= 2 => a[n - 2][n - 1] = -2,
        LieType::C if n >= 2 => a[n - 1][n - 2] = -2,
        LieType::D if n >= 4 => {
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        LieType::G if n == 2 => a[0][1] = -3,
        _ => return Err(Error::UnsupportedType(format!("{lie_type}{n}"))),
    }
    Ok(a)
}

/// Symmetrizers `d_i` with `d_i a_ij = d_j a_ji`, normalized so `min d_i = 1`.
fn symmetrizers(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let mut d = vec![Rational64::zero(); n];
    d[0] = Rational64::one();
    // Dynkin diagrams are trees: propagate along edges.
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if a[i][j] != 0 && i != j && d[j].is_zero() {
                d[j] = d[i] * Rational64::new(a[i][j], a[j][i]);
                stack.push(j);
            }
        }
    }
    let lcm = d.iter().fold(1i64, |l, x| l.lcm(x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, x| g.gcd(x));
    ints.iter().map(|x| x / g).collect()
}

fn invert_rational(m: &[Vec<Rational64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m.to_vec();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| (0..n).map(|j| Rational64::from(i64::from(i == j))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular Cartan matrix");
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c];
        for j in 0..n {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c];
                for j in 0..n {
                    let (ac, ic) = (a[c][j], inv[c][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    inv
}

/// Builds certified (type A) Cartan data.
pub fn build_cartan(lie_type: LieType, rank: usize) -> Result<CartanData> {
    if lie_type != LieType::A {
        return Err(Error::UnsupportedType(format!(
            "{lie_type}{rank} (only type A is certified; use build_cartan_experimental)"
        )));
    }
    build_cartan_experimental(lie_type, rank)
}

/// Builds Cartan data for any simple type. Only type A is certified downstream.
pub fn build_cartan_experimental(lie_type: LieType, rank: usize) -> Result<CartanData> {
    if rank == 0 {
        return Err(Error::UnsupportedType(format!("{lie_type}0")));
    }
    let a = cartan_matrix(lie_type, rank)?;
    let d = symmetrizers(&a);
    // (ω_i, ω_j) = d_i (A^{-1})_{ij}
    let ar: Vec<Vec<Rational64>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Rational64::from(x)).collect())
        .collect();
    let inv = invert_rational(&ar);
    let form: Vec<Vec<Rational64>> = (0..rank)
        .map(|i| (0..rank).map(|j| inv[i][j] * d[i]).collect())
        .collect();
    let root_den = form.iter().flatten().fold(1i64, |l, x| l.lcm(x.denom()));
    Ok(CartanData {
        lie_type,
        rank,
        cartan_matrix: a,
        d,
        form,
        root_den,
        experimental: lie_type != LieType::A,
    })
}

impl CartanData {
    /// `q = t^D`.
    pub fn root_denominator(&self) -> i64 {
        self.root_den
    }

    pub fn t_of_q(&self, q: f64) -> f64 {
        q.powf(1.0 / self.root_den as f64)
    }

    /// Evaluates an exact scalar at numeric `q`.
    pub fn eval(&self, s: &Scalar, q: f64) -> f64 {
        s.eval(self.t_of_q(q))
    }

    pub fn omega(&self, i: usize) -> Weight {
        let mut w = Weight::zero(self.rank);
        w.0[i] = 1;
        w
    }

    pub fn alpha(&self, j: usize) -> Weight {
        Weight((0..self.rank).map(|k| self.cartan_matrix[k][j]).collect())
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Weight with simple-root coefficients `c`.
    pub fn from_root_coords(&self, c: &[i64]) -> Weight {
        let mut w = Weight::zero(self.rank);
        for (j, &cj) in c.iter().enumerate() {
            for k in 0..self.rank {
                w.0[k] += self.cartan_matrix[k][j] * cj;
            }
        }
        w
    }

    /// Simple-root coefficients, if the weight lies in the root lattice.
    pub fn root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        let ar: Vec<Vec<Rational64>> = self
            .cartan_matrix
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from(x)).collect())
            .collect();
        let inv = invert_rational(&ar);
        let mut out = Vec::with_capacity(self.rank);
        for row in inv.iter() {
            let v: Rational64 = row
                .iter()
                .zip(&w.0)
                .map(|(a, &b)| *a * b)
                .fold(Rational64::zero(), |x, y| x + y);
            if !v.is_integer() {
                return None;
            }
            out.push(v.to_integer());
        }
        Some(out)
    }

    pub fn check(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::MismatchedCartan(self.rank, w.rank()));
        }
        Ok(())
    }

    /// The invariant pairing `⟨λ, μ⟩`.
    pub fn pairing(&self, l: &Weight, m: &Weight) -> Result<Rational64> {
        self.check(l)?;
        self.check(m)?;
        Ok(self.pairing_unchecked(l, m))
    }

    pub(crate) fn pairing_unchecked(&self, l: &Weight, m: &Weight) -> Rational64 {
        let mut acc = Rational64::zero();
        for (i, &li) in l.0.iter().enumerate() {
            if li == 0 {
                continue;
            }
            for (j, &mj) in m.0.iter().enumerate() {
                if mj != 0 {
                    acc += self.form[i][j] * (li * mj);
                }
            }
        }
        acc
    }

    /// `D·⟨λ, μ⟩`, the exponent of `t` in `q^{⟨λ, μ⟩}`.
    pub fn t_exponent(&self, l: &Weight, m: &Weight) -> i64 {
        let p = self.pairing_unchecked(l, m) * self.root_den;
        debug_assert!(p.is_integer());
        p.to_integer()
    }

    /// `q^{⟨λ, μ⟩}`.
    pub fn q_pairing(&self, l: &Weight, m: &Weight) -> Scalar {
        Scalar::var_pow(self.t_exponent(l, m))
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> Scalar {
        Scalar::var_pow(k * self.root_den)
    }

    /// `q_i = q^{d_i}`.
    pub fn qi(&self, i: usize) -> Scalar {
        self.q_pow(self.d[i])
    }

    /// Quantum integer `[n]_{q_i}`.
    pub fn q_int(&self, n: i64, i: usize) -> Scalar {
        Scalar::q_int(n, self.d[i] * self.root_den)
    }

    /// `q_i - q_i^{-1}`.
    pub fn qi_diff(&self, i: usize) -> Scalar {
        self.qi(i) - self.qi(i).inv()
    }

    /// All dominant weights with coordinate sum at most `level`, in lexicographic order.
    pub fn dominant_weights_up_to(&self, level: usize) -> Vec<Weight> {
        fn rec(rank: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
            if cur.len() == rank {
                out.push(Weight(cur.clone()));
                return;
            }
            for c in 0..=left {
                cur.push(c);
                rec(rank, left - c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.rank, level as i64, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Positive roots as simple-root coefficient vectors, sorted by height then lexicographically.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in &frontier {
                let w = self.from_root_coords(r);
                for i in 0..n {
                    // r + α_i is a root iff p - ⟨r, α_i^∨⟩ > 0 where p is the
                    // length of the α_i-string below r.
                    let mut p = 0;
                    let mut s = r.clone();
                    loop {
                        s[i] -= 1;
                        if roots.contains(&s) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - w.0[i] > 0 {
                        let mut up = r.clone();
                        up[i] += 1;
                        if !roots.contains(&up) && !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        roots
    }

    /// Classical dimension of the irreducible module of highest weight `λ` (Weyl formula).
    pub fn weyl_dimension(&self, l: &Weight) -> u64 {
        let rho = self.rho();
        let lr = l + &rho;
        let mut num = Rational64::one();
        for r in self.positive_roots() {
            let a = self.from_root_coords(&r);
            num *= self.pairing_unchecked(&lr, &a) / self.pairing_unchecked(&rho, &a);
        }
        debug_assert!(num.is_integer());
        num.to_integer() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_matrices() {
        let a1 = build_cartan(LieType::A, 1).unwrap();
        assert_eq!(a1.cartan_matrix, vec![vec![2]]);
        assert_eq!(a1.d, vec![1]);
        let a2 = build_cartan(LieType::A, 2).unwrap();
        assert_eq!(a2.cartan_matrix, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.d, vec![1, 1]);
        assert!(matches!(build_cartan(LieType::A, 0), Err(Error::UnsupportedType(_))));
        assert!(build_cartan(LieType::B, 2).is_err());
    }

    #[test]
    fn symmetrizability_of_all_types() {
        for (t, n) in [(LieType::A, 4), (LieType::B, 3), (LieType::C, 3), (LieType::D, 4), (LieType::G, 2)] {
            let c = build_cartan_experimental(t, n).unwrap();
            for i in 0..n {
                assert_eq!(c.cartan_matrix[i][i], 2);
                for j in 0..n {
                    assert_eq!(c.d[i] * c.cartan_matrix[i][j], c.d[j] * c.cartan_matrix[j][i]);
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let a1 = build_cartan(LieType::A, 1).unwrap();
        let (w, a) = (a1.omega(0), a1.alpha(0));
        assert_eq!(a1.pairing(&w, &a).unwrap(), Rational64::from(1));
        assert_eq!(a1.pairing(&a, &a).unwrap(), Rational64::from(2));
        assert_eq!(a1.pairing(&w, &Weight::zero(1)).unwrap(), Rational64::zero());
        let a2 = build_cartan(LieType::A, 2).unwrap();
        assert!(matches!(a2.pairing(&w, &a2.omega(0)), Err(Error::MismatchedCartan(2, 1))));
        assert_eq!(a2.root_denominator(), 3);
        assert_eq!(a1.root_denominator(), 2);
    }

    #[test]
    fn omega_alpha_duality() {
        for n in 1..=4 {
            let c = build_cartan(LieType::A, n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { c.d[i] } else { 0 };
                    assert_eq!(c.pairing(&c.omega(i), &c.alpha(j)).unwrap(), Rational64::from(expect));
                    assert_eq!(
                        c.pairing(&c.omega(i), &c.omega(j)).unwrap(),
                        c.pairing(&c.omega(j), &c.omega(i)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn dominant_enumeration() {
        let a1 = build_cartan(LieType::A, 1).unwrap();
        assert_eq!(a1.dominant_weights_up_to(2), vec![Weight(vec![0]), Weight(vec![1]), Weight(vec![2])]);
        let a2 = build_cartan(LieType::A, 2).unwrap();
        assert_eq!(
            a2.dominant_weights_up_to(1),
            vec![Weight(vec![0, 0]), Weight(vec![0, 1]), Weight(vec![1, 0])]
        );
        assert_eq!(a2.dominant_weights_up_to(0), vec![Weight(vec![0, 0])]);
        for l in 0..4 {
            let small = a2.dominant_weights_up_to(l);
            let big = a2.dominant_weights_up_to(l + 1);
            assert!(small.iter().all(|w| big.contains(w)));
        }
    }

    #[test]
    fn roots_and_dimensions() {
        let a2 = build_cartan(LieType::A, 2).unwrap();
        assert_eq!(a2.positive_roots(), vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(a2.weyl_dimension(&Weight(vec![1, 1])), 8);
        assert_eq!(a2.weyl_dimension(&Weight(vec![2, 2])), 27);
        let g2 = build_cartan_experimental(LieType::G, 2).unwrap();
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.weyl_dimension(&g2.omega(0)), 7);
        assert_eq!(a2.root_coords(&a2.alpha(1)), Some(vec![0, 1]));
        assert_eq!(a2.root_coords(&a2.omega(0)), None);
    }
}
