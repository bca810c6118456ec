//! An ad-invariant pairing playing the role of the quantum Killing form.
//!
//! `⟨X, Y⟩ = Σ_ω Tr(ρ_ω(X) ρ_ω(Y) ρ_ω(K_{2ρ})^{-1})`, summed over the
//! fundamental modules. Because `S^2 = Ad(K_{2ρ}^{-1})`, it satisfies
//! `⟨Z ▷ X, Y⟩ = ⟨X, S(Z) ▷ Y⟩`; it vanishes unless the weights of `X` and `Y`
//! are opposite, and `⟨X*, X⟩ > 0` whenever some `ρ_ω(X) ≠ 0`.

use super::{AlgebraElement, Uq};
use crate::error::Result;
use crate::linalg::Mat;
use crate::reps::{irrep, Rep};
use crate::scalar::Scalar;

pub struct RossoForm {
    modules: Vec<(Rep, Mat)>,
}

impl RossoForm {
    pub fn new(u: &Uq) -> Result<Self> {
        let c = u.cartan();
        let two_rho_inv = -&c.rho().scale(2);
        let mut modules = Vec::new();
        for i in 0..u.rank() {
            let rep = irrep(u, &c.omega(i))?;
            let k = rep.k_matrix(u, &two_rho_inv);
            modules.push((rep, k));
        }
        Ok(RossoForm { modules })
    }

    pub fn pairing(&self, u: &Uq, x: &AlgebraElement, y: &AlgebraElement) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        if let (Some(wx), Some(wy)) = (u.weight_of(x), u.weight_of(y)) {
            if &wx + &wy != crate::cartan::Weight::zero(u.rank()) {
                return Ok(acc);
            }
        }
        for (rep, k) in &self.modules {
            let m = &(&rep.act(u, x)? * &rep.act(u, y)?) * k;
            acc += &m.trace();
        }
        Ok(acc)
    }
}
