//! Derivations with no weight restriction: every image ranges over the whole
//! parity block of the module, `17 · 8p³` unknowns per parity.

use serde::Serialize;

use super::{equation_pairs, identity_signs, CohomologyError, DerivationMap};
use crate::algebra::{Generator, Parity, DIM};
use crate::enveloping::{Theta, VermaModule};
use crate::linalg::{Echelon, SparseVec};

/// Largest `p` the brute-force path accepts.
pub const ORACLE_MAX_P: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FullDims {
    pub der: usize,
    pub ider: usize,
}

impl FullDims {
    pub fn h1(&self) -> usize {
        self.der - self.ider
    }
}

/// Unknown numbering: generator-major, then module basis vectors of parity
/// `|b| + |φ|` in index order.
struct FullLayout {
    parity: Parity,
    half: usize,
}

impl FullLayout {
    fn new(module: &VermaModule, parity: Parity) -> Self {
        Self { parity, half: module.dim() / 2 }
    }

    fn ncols(&self) -> usize {
        DIM * self.half
    }

    /// Position of basis vector `m` among basis vectors of its parity.
    fn slot(m: u32) -> usize {
        (m / 16) as usize * 8 + Theta::from_bits((m % 16) as u8).rank_in_parity()
    }

    fn basis_of_slot(&self, g: Generator, slot: usize) -> u32 {
        let want = g.parity().plus(self.parity);
        let t = Theta::of_parity(want).nth(slot % 8).unwrap();
        (slot / 8) as u32 * 16 + t.bits() as u32
    }

    fn unknown(&self, g: Generator, m: u32) -> u32 {
        (g.index() * self.half + Self::slot(m)) as u32
    }

    fn encode(&self, phi: &DerivationMap, module: &VermaModule) -> Option<SparseVec> {
        let mut pairs = Vec::new();
        for g in Generator::ALL {
            for &(m, c) in phi.image(g).entries() {
                if module.parity_of_basis(m) != g.parity().plus(self.parity) {
                    return None;
                }
                pairs.push((self.unknown(g, m), c));
            }
        }
        Some(SparseVec::from_pairs(pairs, module.field()))
    }
}

fn guard(module: &VermaModule) -> Result<(), CohomologyError> {
    if module.p() > ORACLE_MAX_P {
        return Err(CohomologyError::SizeGuard(module.p()));
    }
    Ok(())
}

/// Echelon form of `{D_m}` over basis vectors `m` of parity `|φ|`.
fn inner_echelon(module: &VermaModule, layout: &FullLayout) -> Echelon {
    let f = module.field();
    let mut ech = Echelon::new(f, layout.ncols());
    for m in 0..module.dim() as u32 {
        if module.parity_of_basis(m) != layout.parity {
            continue;
        }
        let mut pairs = Vec::new();
        for g in Generator::ALL {
            let s = f.sign(g.is_odd() && layout.parity.is_odd());
            for &(t, c) in module.act_basis(g, m) {
                pairs.push((layout.unknown(g, t), f.mul(s, c)));
            }
        }
        ech.insert(&SparseVec::from_pairs(pairs, f));
    }
    ech
}

/// `(dim Der, dim Ider)` of the given parity, by brute force.
pub fn full_derivation_dims(module: &VermaModule, parity: Parity) -> Result<FullDims, CohomologyError> {
    guard(module)?;
    let f = module.field();
    let layout = FullLayout::new(module, parity);
    let n = module.dim();
    let mut ech = Echelon::new(f, layout.ncols());
    let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (a, b) in equation_pairs() {
        let (s1, s2) = identity_signs(parity, a, b);
        let (s1, s2) = (f.neg(f.sign(s1)), f.sign(s2));
        for (g, c) in module.algebra().bracket_gen(a, b).terms() {
            for slot in 0..layout.half {
                let m = layout.basis_of_slot(g, slot);
                rows[m as usize].push((layout.unknown(g, m), c));
            }
        }
        for slot in 0..layout.half {
            let m = layout.basis_of_slot(b, slot);
            let u = layout.unknown(b, m);
            for &(t, c) in module.act_basis(a, m) {
                rows[t as usize].push((u, f.mul(s1, c)));
            }
        }
        for slot in 0..layout.half {
            let m = layout.basis_of_slot(a, slot);
            let u = layout.unknown(a, m);
            for &(t, c) in module.act_basis(b, m) {
                rows[t as usize].push((u, f.mul(s2, c)));
            }
        }
        for row in rows.iter_mut() {
            if !row.is_empty() {
                ech.insert(&SparseVec::from_pairs(std::mem::take(row), f));
            }
        }
    }
    let der = layout.ncols() - ech.rank();
    let ider = inner_echelon(module, &layout).rank();
    Ok(FullDims { der, ider })
}

/// Whether `φ` is inner, tested against all `D_m` with no weight restriction.
pub fn full_inner_contains(phi: &DerivationMap, module: &VermaModule) -> Result<bool, CohomologyError> {
    guard(module)?;
    let layout = FullLayout::new(module, phi.parity());
    let v = layout.encode(phi, module).ok_or(CohomologyError::NotHomogeneous)?;
    Ok(inner_echelon(module, &layout).contains(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SuperAlgebra;
    use crate::cohomology::{h1, inner_derivation, basis_vector};

    fn module(lambda: [i64; 3], chi: [i64; 3]) -> VermaModule {
        VermaModule::from_params(&SuperAlgebra::new(5, 2).unwrap(), lambda, chi)
    }

    #[test]
    fn layout_slots_round_trip() {
        let m = module([0, 0, 0], [0, 0, 0]);
        for parity in Parity::BOTH {
            let layout = FullLayout::new(&m, parity);
            for g in [Generator::H1, Generator::X2] {
                for slot in 0..layout.half {
                    let b = layout.basis_of_slot(g, slot);
                    assert_eq!(FullLayout::slot(b), slot);
                    assert_eq!(m.parity_of_basis(b), g.parity().plus(parity));
                }
            }
        }
    }

    #[test]
    fn oracle_matches_graded_at_special_weight() {
        let m = module([2, 3, 3], [0, 0, 0]);
        let r = h1(&m).unwrap();
        for parity in Parity::BOTH {
            let full = full_derivation_dims(&m, parity).unwrap();
            let d0 = r.dims(parity);
            assert_eq!(full.h1(), d0.h1());
            assert_eq!(full.der, d0.der0 + full.ider - d0.ider0);
        }
    }

    #[test]
    fn inner_membership() {
        let m = module([1, 2, 3], [0, 0, 0]);
        let d = inner_derivation(&basis_vector(16 * 9 + 6), &m).unwrap();
        assert!(full_inner_contains(&d, &m).unwrap());
    }

    #[test]
    fn size_guard() {
        let m = VermaModule::from_params(&SuperAlgebra::new(11, 2).unwrap(), [0, 0, 0], [0, 0, 0]);
        assert_eq!(full_derivation_dims(&m, Parity::Even), Err(CohomologyError::SizeGuard(11)));
    }
}
