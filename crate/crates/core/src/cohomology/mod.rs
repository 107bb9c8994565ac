//! Zero-weight superderivations `g → Z_χ(λ)`, inner derivations, and `H¹`.
//!
//! A derivation of parity `|φ|` satisfies, for all homogeneous `x, y`,
//!
//! ```text
//! φ([x,y]) = (-1)^{|φ||x|} x·φ(y) - (-1)^{|y|(|φ|+|x|)} y·φ(x)
//! ```
//!
//! Every class in `H¹` has a representative that maps each `g_β` into the
//! weight space `Z_χ(λ)_β`, so the main computation works in the 136
//! coordinates `(b, θ)` of [`GradedLayout`]. The brute-force path in
//! [`full_derivation_dims`] drops that restriction and is used as an oracle.

mod graded;
mod h1;
mod lemmas;
mod oracle;
mod psi;

pub use graded::{zero_weight_derivations, zero_weight_inner_space, Equation, GradedLayout, GradedSystem};
pub use h1::{h1, H1Result, ParityDims};
pub use lemmas::{check_f_coupling, check_lemma_h_images, LemmaKind, LemmaViolation};
pub use oracle::{full_derivation_dims, full_inner_contains, FullDims, ORACLE_MAX_P};
pub use psi::{
    is_outer, psi, psi1_report, psi_regime, verify_psi, Psi1Report, PsiOutcome, PsiPath, PsiVerification,
};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{Generator, Parity, DIM};
use crate::enveloping::{ModuleVector, VermaModule};
use crate::linalg::{LinalgError, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("module vector is not parity-homogeneous")]
    NotHomogeneous,
    #[error("image of {0} has the wrong parity")]
    ParityMismatch(Generator),
    #[error("derivation identity fails at ({a}, {b})")]
    NotDerivation { a: Generator, b: Generator },
    #[error("inner derivations of parity {0} are not contained in the derivation kernel")]
    InnerNotInKernel(Parity),
    #[error("wrong parameter regime: {0}")]
    WrongRegime(String),
    #[error("completion system is inconsistent at ({a}, {b})")]
    InconsistentCompletion { a: Generator, b: Generator },
    #[error("brute-force path refuses p = {0} (limit {ORACLE_MAX_P})")]
    SizeGuard(u32),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("graded and full computations disagree: {0}")]
    OracleMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl CohomologyError {
    /// Whether the error reflects bad input rather than a broken invariant.
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, Self::WrongRegime(_) | Self::SizeGuard(_) | Self::BadParams(_))
    }
}

/// Pairs `(a, b)` with `a < b`, plus `(a, a)` for odd `a`: the equations that
/// determine a derivation. Even diagonals hold trivially.
pub fn equation_pairs() -> Vec<(Generator, Generator)> {
    let mut out = Vec::new();
    for (i, &a) in Generator::ALL.iter().enumerate() {
        for &b in &Generator::ALL[i..] {
            if a != b || a.is_odd() {
                out.push((a, b));
            }
        }
    }
    out
}

/// Signs `(s1, s2) = ((-1)^{|φ||a|}, (-1)^{|b|(|φ|+|a|)})` of the identity.
fn identity_signs(parity: Parity, a: Generator, b: Generator) -> (bool, bool) {
    let phi = parity.is_odd();
    (phi && a.is_odd(), b.is_odd() && (phi ^ a.is_odd()))
}

/// A parity-homogeneous linear map `g → Z_χ(λ)`, stored by its 17 images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationMap {
    parity: Parity,
    images: Vec<ModuleVector>,
}

impl DerivationMap {
    pub fn zero(parity: Parity) -> Self {
        Self { parity, images: vec![ModuleVector::new(); DIM] }
    }

    pub fn from_images(parity: Parity, images: Vec<ModuleVector>) -> Self {
        assert_eq!(images.len(), DIM);
        Self { parity, images }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn image(&self, g: Generator) -> &ModuleVector {
        &self.images[g.index()]
    }

    pub fn set_image(&mut self, g: Generator, v: ModuleVector) {
        self.images[g.index()] = v;
    }

    pub fn images(&self) -> &[ModuleVector] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.is_empty())
    }

    /// `φ([a,b]) - s1·a·φ(b) + s2·b·φ(a)`; zero iff the identity holds at `(a, b)`.
    pub fn residual(&self, a: Generator, b: Generator, m: &VermaModule) -> ModuleVector {
        let f = m.field();
        let (s1, s2) = identity_signs(self.parity, a, b);
        let mut r = ModuleVector::new();
        for (g, c) in m.algebra().bracket_gen(a, b).terms() {
            r = r.axpy(c, self.image(g), f);
        }
        r = r.axpy(f.neg(f.sign(s1)), &m.act(a, self.image(b)), f);
        r.axpy(f.sign(s2), &m.act(b, self.image(a)), f)
    }

    /// First pair violating the identity, over all `a ≤ b`.
    pub fn first_violation(&self, m: &VermaModule) -> Option<(Generator, Generator)> {
        for (i, &a) in Generator::ALL.iter().enumerate() {
            for &b in &Generator::ALL[i..] {
                if !self.residual(a, b, m).is_empty() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn check_parities(&self, m: &VermaModule) -> Result<(), CohomologyError> {
        for g in Generator::ALL {
            let v = self.image(g);
            if v.entries().iter().any(|&(i, _)| m.parity_of_basis(i) != g.parity().plus(self.parity)) {
                return Err(CohomologyError::ParityMismatch(g));
            }
        }
        Ok(())
    }

    /// Parity consistency plus the identity on every pair.
    pub fn verify(&self, m: &VermaModule) -> Result<(), CohomologyError> {
        self.check_parities(m)?;
        match self.first_violation(m) {
            Some((a, b)) => Err(CohomologyError::NotDerivation { a, b }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut images = Map::new();
        for g in Generator::ALL {
            let entries: Vec<[u32; 2]> = self.image(g).entries().iter().map(|&(i, c)| [i, c]).collect();
            images.insert(g.name().to_string(), json!(entries));
        }
        json!({"parity": self.parity, "images": images})
    }
}

/// `D_m(x) = (-1)^{|x||m|} x·m`.
pub fn inner_derivation(m: &ModuleVector, module: &VermaModule) -> Result<DerivationMap, CohomologyError> {
    let parity = module.parity_of(m).ok_or(CohomologyError::NotHomogeneous)?;
    let f = module.field();
    let images = Generator::ALL
        .iter()
        .map(|&g| module.act(g, m).scale(f.sign(g.is_odd() && parity.is_odd()), f))
        .collect();
    Ok(DerivationMap { parity, images })
}

/// Shorthand for a single basis vector of the module.
pub(crate) fn basis_vector(idx: u32) -> ModuleVector {
    SparseVec::unit(idx)
}
