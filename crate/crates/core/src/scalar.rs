//! Exact scalars: rational functions with integer coefficients in a single
//! indeterminate `t`, kept as reduced fractions.
//!
//! The indeterminate is a root of the deformation parameter, `q = t^D`, where
//! `D` is fixed by the Cartan data (pairings on the weight lattice take values
//! in `(1/D)Z`). Use [`crate::cartan::CartanData::q_pow`] to build powers of `q`.
//!
//! Canonical form: `gcd(num, den) = 1` over `Z[t]` and the leading
//! coefficient of `den` is positive. Zero is `0/1`. Since the canonical form
//! is unique, structural equality is mathematical equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_polys(Poly::constant(n), Poly::constant(d))
    }

    /// The indeterminate `t` (see the crate docs for `q = t^D`).
    pub fn var() -> Self {
        Self::var_pow(1)
    }

    /// `t^k` for any integer `k`.
    pub fn var_pow(k: i64) -> Self {
        if k >= 0 {
            Scalar {
                num: Poly::monomial(1, k as usize),
                den: Poly::one(),
            }
        } else {
            Scalar {
                num: Poly::one(),
                den: Poly::monomial(1, (-k) as usize),
            }
        }
    }

    /// Balanced quantum integer `(x^n - x^-n)/(x - x^-1)` with `x = t^step`.
    pub fn q_int(n: i64, step: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let sign = n.signum();
        let n = n.abs();
        let mut acc = Self::zero();
        for j in 0..n {
            acc += &Self::var_pow(step * (n - 1 - 2 * j));
        }
        if sign < 0 {
            -acc
        } else {
            acc
        }
    }

    pub fn from_polys(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        if den.leading().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        Scalar { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let mut s = Scalar {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        if s.den.leading().unwrap().is_negative() {
            s.num = -s.num;
            s.den = -s.den;
        }
        s
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Numeric value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.num.eval(t) / self.den.eval(t)
    }

    /// Exact value at `t = 1` as a rational `(n, d)`, if the denominator does not vanish there.
    pub fn at_one(&self) -> Option<(BigInt, BigInt)> {
        let one = BigInt::one();
        let d = self.den.eval_int(&one);
        if d.is_zero() {
            return None;
        }
        Some((self.num.eval_int(&one), d))
    }

    /// Rational constant (no `t` dependence).
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    fn add_impl(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar::from_polys(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g);
        let b = rhs.den.div_exact(&g);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        Scalar::from_polys(num, &a * &rhs.den)
    }

    fn mul_impl(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = rhs.den.div_exact(&g1);
        let n2 = rhs.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        let mut num = &n1 * &n2;
        let mut den = &d1 * &d2;
        if den.leading().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        Scalar { num, den }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$imp(&rhs)
            }
        }
    };
}

impl Scalar {
    fn sub_impl(&self, rhs: &Scalar) -> Scalar {
        self.add_impl(&-rhs.clone())
    }
    fn div_impl(&self, rhs: &Scalar) -> Scalar {
        self.mul_impl(&rhs.inv())
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_impl(rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.sub_impl(rhs);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_impl(rhs);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quantum_integers() {
        let two = Scalar::q_int(2, 1);
        assert_eq!(two, Scalar::var() + Scalar::var_pow(-1));
        // [2][2] = [3] + [1]
        assert_eq!(&two * &two, Scalar::q_int(3, 1) + Scalar::one());
        assert_eq!(two.eval(1.0), 2.0);
    }

    #[test]
    fn canonical_form() {
        let a = Scalar::from_polys(Poly::from_i64(&[-1, 0, 1]), Poly::from_i64(&[1, -1]));
        // (q^2-1)/(1-q) = -(q+1)
        assert_eq!(a, -(Scalar::var() + Scalar::one()));
        assert_eq!(Scalar::from_ratio(4, -6), Scalar::from_ratio(-2, 3));
    }

    #[test]
    fn divided_difference() {
        // (q^2 - q^-2)/(q - q^-1) = q + q^-1
        let k = Scalar::var_pow(2) - Scalar::var_pow(-2);
        let d = Scalar::var() - Scalar::var_pow(-1);
        assert_eq!(k / d, Scalar::q_int(2, 1));
    }

    fn small() -> impl Strategy<Value = Scalar> {
        (
            prop::collection::vec(-3i64..4, 1..4),
            prop::collection::vec(-3i64..4, 1..3),
            -2i64..3,
        )
            .prop_filter_map("nonzero den", |(n, d, k)| {
                let den = Poly::from_i64(&d);
                if den.is_zero() {
                    return None;
                }
                Some(Scalar::from_polys(Poly::from_i64(&n), den) * Scalar::var_pow(k))
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a);
            }
        }
    }
}
