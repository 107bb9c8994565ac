use std::collections::BTreeMap;

use super::{basis_vector, equation_pairs, identity_signs, inner_derivation, DerivationMap};
use crate::algebra::{Generator, Parity, Weight, DIM};
use crate::enveloping::{basis_monomial, Theta, VermaModule};
use crate::field::PrimeField;
use crate::linalg::{Echelon, SparseVec, Subspace};

/// Coordinates of zero-weight maps of one parity: unknown `b·8 + r` is the
/// coefficient of `w_{β_b}^θ` in `φ(b)`, where `θ` is the `r`-th index of
/// parity `|b| + |φ|`.
#[derive(Debug, Clone)]
pub struct GradedLayout {
    field: PrimeField,
    parity: Parity,
    /// Module basis index of each unknown's monomial.
    monomials: Vec<u32>,
}

impl GradedLayout {
    pub const UNKNOWNS: usize = DIM * 8;

    pub fn new(module: &VermaModule, parity: Parity) -> Self {
        let f = module.field();
        let lambda = module.lambda();
        let mut monomials = Vec::with_capacity(Self::UNKNOWNS);
        for g in Generator::ALL {
            let beta = module.algebra().weight_of(g);
            for t in Theta::of_parity(g.parity().plus(parity)) {
                monomials.push(module.index_of(&basis_monomial(&beta, t, &lambda, f)));
            }
        }
        Self { field: f, parity, monomials }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn unknown(g: Generator, theta: Theta) -> usize {
        g.index() * 8 + theta.rank_in_parity()
    }

    pub fn generator_of(u: usize) -> Generator {
        Generator::from_index(u / 8)
    }

    pub fn theta_of(&self, u: usize) -> Theta {
        Theta::from_bits((self.monomials[u] % 16) as u8)
    }

    /// Module basis index of `w_{β_b}^θ` for unknown `u`.
    pub fn monomial(&self, u: usize) -> u32 {
        self.monomials[u]
    }

    pub fn unknowns_of(g: Generator) -> std::ops::Range<usize> {
        g.index() * 8..g.index() * 8 + 8
    }

    /// Coordinates of `φ`, or `None` if some image leaves its weight space
    /// or has the wrong parity.
    pub fn encode(&self, phi: &DerivationMap) -> Option<SparseVec> {
        if phi.parity() != self.parity {
            return None;
        }
        let mut pairs = Vec::new();
        for g in Generator::ALL {
            for &(m, c) in phi.image(g).entries() {
                let t = Theta::from_bits((m % 16) as u8);
                if t.parity() != g.parity().plus(self.parity) {
                    return None;
                }
                let u = Self::unknown(g, t);
                if self.monomials[u] != m {
                    return None;
                }
                pairs.push((u as u32, c));
            }
        }
        Some(SparseVec::from_pairs(pairs, self.field))
    }

    pub fn decode(&self, v: &SparseVec) -> DerivationMap {
        let mut images: Vec<Vec<(u32, u32)>> = vec![Vec::new(); DIM];
        for &(u, c) in v.entries() {
            images[u as usize / 8].push((self.monomials[u as usize], c));
        }
        let images = images.into_iter().map(|pairs| SparseVec::from_pairs(pairs, self.field)).collect();
        DerivationMap::from_images(self.parity, images)
    }
}

/// One identity `(a, b)` projected onto one module basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub pair: (Generator, Generator),
    pub monomial: u32,
    pub row: SparseVec,
}

/// The linear system whose kernel is `Der(g, Z_χ(λ))_{(0)}` of one parity.
#[derive(Debug, Clone)]
pub struct GradedSystem {
    layout: GradedLayout,
    equations: Vec<Equation>,
}

impl GradedSystem {
    pub fn new(module: &VermaModule, parity: Parity) -> Self {
        let layout = GradedLayout::new(module, parity);
        let f = module.field();
        let alg = module.algebra();
        let mut equations = Vec::new();
        for (a, b) in equation_pairs() {
            let (s1, s2) = identity_signs(parity, a, b);
            let (s1, s2) = (f.neg(f.sign(s1)), f.sign(s2));
            let mut rows: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
            let mut add = |target: u32, u: usize, c: u32| rows.entry(target).or_default().push((u as u32, c));
            for (g, c) in alg.bracket_gen(a, b).terms() {
                for u in GradedLayout::unknowns_of(g) {
                    add(layout.monomial(u), u, c);
                }
            }
            for u in GradedLayout::unknowns_of(b) {
                for &(t, c) in module.act_basis(a, layout.monomial(u)) {
                    add(t, u, f.mul(s1, c));
                }
            }
            for u in GradedLayout::unknowns_of(a) {
                for &(t, c) in module.act_basis(b, layout.monomial(u)) {
                    add(t, u, f.mul(s2, c));
                }
            }
            for (monomial, pairs) in rows {
                let row = SparseVec::from_pairs(pairs, f);
                if !row.is_empty() {
                    equations.push(Equation { pair: (a, b), monomial, row });
                }
            }
        }
        Self { layout, equations }
    }

    pub fn layout(&self) -> &GradedLayout {
        &self.layout
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.layout.field, GradedLayout::UNKNOWNS);
        for e in &self.equations {
            ech.insert(&e.row);
        }
        ech
    }

    /// Canonical basis of the solution space.
    pub fn kernel(&self) -> Subspace {
        self.echelon().kernel()
    }
}

/// `Der(g, Z_χ(λ))_{(0)}` of the given parity, in [`GradedLayout`] coordinates.
pub fn zero_weight_derivations(module: &VermaModule, parity: Parity) -> Subspace {
    GradedSystem::new(module, parity).kernel()
}

/// Span of `D_{w_0^θ}` over `θ` of parity `|φ|`, in [`GradedLayout`] coordinates.
pub fn zero_weight_inner_space(module: &VermaModule, parity: Parity) -> Subspace {
    let layout = GradedLayout::new(module, parity);
    let f = module.field();
    let lambda = module.lambda();
    let vectors: Vec<SparseVec> = Theta::of_parity(parity)
        .map(|t| {
            let w = module.index_of(&basis_monomial(&Weight::ZERO, t, &lambda, f));
            let d = inner_derivation(&basis_vector(w), module).expect("basis vectors are homogeneous");
            layout.encode(&d).expect("inner derivations of weight-zero vectors have weight zero")
        })
        .collect();
    Subspace::span(f, GradedLayout::UNKNOWNS, &vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SuperAlgebra;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn module(alpha: i64, lambda: [i64; 3], chi: [i64; 3]) -> VermaModule {
        VermaModule::from_params(&SuperAlgebra::new(5, alpha).unwrap(), lambda, chi)
    }

    #[test]
    fn layout_round_trip() {
        let m = module(2, [2, 3, 3], [0, 0, 0]);
        for parity in Parity::BOTH {
            let layout = GradedLayout::new(&m, parity);
            for u in 0..GradedLayout::UNKNOWNS {
                let v = SparseVec::unit(u as u32);
                let phi = layout.decode(&v);
                assert_eq!(layout.encode(&phi), Some(v));
                assert_eq!(layout.theta_of(u).parity(), GradedLayout::generator_of(u).parity().plus(parity));
            }
        }
    }

    #[test]
    fn kernel_vectors_are_derivations() {
        for (lambda, chi) in [([2, 3, 3], [0, 0, 0]), ([3, 2, 2], [0, 0, 0]), ([1, 1, 1], [1, 0, 0])] {
            let m = module(2, lambda, chi);
            for parity in Parity::BOTH {
                let sys = GradedSystem::new(&m, parity);
                let ker = sys.kernel();
                for v in ker.basis() {
                    assert_eq!(sys.layout().decode(v).verify(&m), Ok(()));
                }
            }
        }
    }

    #[test]
    fn inner_space_dimensions() {
        let generic = module(2, [1, 1, 1], [0, 0, 0]);
        assert_eq!(zero_weight_inner_space(&generic, Parity::Even).dim(), 8);
        assert_eq!(zero_weight_inner_space(&generic, Parity::Odd).dim(), 8);
        let special = module(2, [2, 3, 3], [0, 0, 0]);
        assert_eq!(zero_weight_inner_space(&special, Parity::Even).dim(), 7);
    }

    #[test]
    fn nonzero_character_kernel_is_inner() {
        for lambda in [[2, 3, 3], [0, 0, 0], [4, 1, 2]] {
            let m = module(2, lambda, [1, 0, 0]);
            for parity in Parity::BOTH {
                assert_eq!(zero_weight_derivations(&m, parity), zero_weight_inner_space(&m, parity));
            }
        }
    }

    #[test]
    fn invariant_under_permuted_equations_and_unknowns() {
        let m = module(3, [2, 3, 3], [0, 0, 0]);
        let f = m.field();
        let sys = GradedSystem::new(&m, Parity::Even);
        let canonical = sys.kernel();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let mut eqs: Vec<&Equation> = sys.equations().iter().collect();
            eqs.shuffle(&mut rng);
            let mut perm: Vec<u32> = (0..GradedLayout::UNKNOWNS as u32).collect();
            perm.shuffle(&mut rng);
            let mut inverse = vec![0u32; perm.len()];
            for (i, &j) in perm.iter().enumerate() {
                inverse[j as usize] = i as u32;
            }
            let mut ech = Echelon::new(f, GradedLayout::UNKNOWNS);
            for e in eqs {
                ech.insert(&e.row.permuted(&perm, f));
            }
            let back: Vec<SparseVec> = ech.kernel().basis().iter().map(|v| v.permuted(&inverse, f)).collect();
            assert_eq!(Subspace::span(f, GradedLayout::UNKNOWNS, &back), canonical);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn inner_space_lies_in_kernel(
            alpha in 1i64..4,
            l in proptest::array::uniform3(0i64..5),
            chi in proptest::array::uniform3(0i64..2),
        ) {
            let m = module(alpha, l, chi);
            for parity in Parity::BOTH {
                let der = zero_weight_derivations(&m, parity);
                let inner = zero_weight_inner_space(&m, parity);
                prop_assert!(inner.is_subspace_of(&der).unwrap());
            }
        }
    }
}
