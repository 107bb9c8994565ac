//! Coefficient-level statements about zero-weight derivations, checked on a
//! basis of `Der_{(0)}` in both parities.

use std::fmt;

use serde::Serialize;

use super::{GradedLayout, GradedSystem};
use crate::algebra::{Generator, Parity, Weight};
use crate::enveloping::{basis_monomial, Theta, VermaModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaKind {
    HImages,
    FCoupling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub kind: LemmaKind,
    pub parity: Parity,
    /// Position of the offending vector in the canonical kernel basis.
    pub basis_index: usize,
    pub detail: String,
}

impl fmt::Display for LemmaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ({} basis vector {}): {}", self.kind, self.parity, self.basis_index, self.detail)
    }
}

/// `φ(h_i) = 0`, except that at `λ ≡ (2,-2,-2)` with `χ = 0` it may be any
/// multiple of `w_0^{(1,1,1,1)}`.
pub fn check_lemma_h_images(module: &VermaModule) -> Vec<LemmaViolation> {
    let f = module.field();
    let special = module.lambda().0 == [2, f.reduce(-2), f.reduce(-2)] && module.chi().is_zero();
    let top = Theta::new([1, 1, 1, 1]);
    let mut out = Vec::new();
    for parity in Parity::BOTH {
        let sys = GradedSystem::new(module, parity);
        for (i, v) in sys.kernel().basis().iter().enumerate() {
            for h in Generator::H {
                for u in GradedLayout::unknowns_of(h) {
                    let c = v.get(u as u32);
                    let allowed = special && sys.layout().theta_of(u) == top;
                    if c != 0 && !allowed {
                        out.push(LemmaViolation {
                            kind: LemmaKind::HImages,
                            parity,
                            basis_index: i,
                            detail: format!("{h} has coefficient {c} on θ = {}", sys.layout().theta_of(u)),
                        });
                    }
                }
            }
        }
    }
    out
}

/// `χ(f_l)^p_{(-2ε_k;θ;l),p-1} a_{-2ε_k}^θ = χ(f_k)^p_{(-2ε_l;θ;k),p-1} a_{-2ε_l}^θ`
/// for `k ≠ l`, where `a_{-2ε_i}^θ` is the coefficient of `w_{-2ε_i}^θ` in
/// `φ(f_i)` and the factor is `χ(f)^p` exactly when the exponent is `p - 1`.
pub fn check_f_coupling(module: &VermaModule) -> Vec<LemmaViolation> {
    let f = module.field();
    let lambda = module.lambda();
    let alg = module.algebra();
    let weights: Vec<Weight> = Generator::F.iter().map(|&g| alg.weight_of(g)).collect();
    let factor = |beta: &Weight, t: Theta, k: usize| {
        if basis_monomial(beta, t, &lambda, f).f[k] == f.modulus() - 1 {
            module.chi().f_power(k, f)
        } else {
            1
        }
    };
    let mut out = Vec::new();
    for parity in Parity::BOTH {
        let sys = GradedSystem::new(module, parity);
        for (i, v) in sys.kernel().basis().iter().enumerate() {
            // φ(f_i) has parity |φ|, so only θ of that parity carry coefficients
            for t in Theta::of_parity(parity) {
                let a: Vec<u32> =
                    Generator::F.iter().map(|&g| v.get(GradedLayout::unknown(g, t) as u32)).collect();
                for k in 0..3 {
                    for l in k + 1..3 {
                        let lhs = f.mul(factor(&weights[k], t, l), a[k]);
                        let rhs = f.mul(factor(&weights[l], t, k), a[l]);
                        if lhs != rhs {
                            out.push(LemmaViolation {
                                kind: LemmaKind::FCoupling,
                                parity,
                                basis_index: i,
                                detail: format!("k={}, l={}, θ = {t}: {lhs} != {rhs}", k + 1, l + 1),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}
