//! PBW monomials, baby Verma modules `Z_χ(λ)` and their weight spaces.
//!
//! A basis vector of `Z_χ(λ)` is `f1^i1 f2^i2 f3^i3 y1^j1 y2^j2 y3^j3 y4^j4 ⊗ v`
//! with `0 ≤ i_k < p` and `j_l ∈ {0,1}`; the highest weight vector `v` is
//! taken to be even. `χ` vanishes on `h` and on `e1, e2, e3`, so only its
//! values on `f1, f2, f3` are stored.

mod rewrite;
mod verma;

pub use rewrite::{RewriteError, RewriteStrategy, WordRewriter};
pub use verma::{ModuleAxiomViolation, VermaModule};

use std::fmt;

use serde::Serialize;

use crate::algebra::{Generator, Parity, Weight};
use crate::field::PrimeField;
use crate::linalg::SparseVec;

/// Elements of `Z_χ(λ)`: sparse over PBW monomial indices.
pub type ModuleVector = SparseVec;

/// `χ(f1), χ(f2), χ(f3)` as residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub chi_f: [u32; 3],
}

impl Character {
    pub const ZERO: Character = Character { chi_f: [0, 0, 0] };

    pub fn new(chi_f: [i64; 3], field: PrimeField) -> Self {
        Self { chi_f: chi_f.map(|x| field.reduce(x)) }
    }

    /// Scalar by which `f_k^p` acts: `χ(f_k)^p`.
    pub fn f_power(&self, k: usize, field: PrimeField) -> u32 {
        field.pow(self.chi_f[k], field.modulus() as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.chi_f == [0, 0, 0]
    }
}

/// `λ = λ1 ε1 + λ2 ε2 + λ3 ε3` with residue coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HighestWeight(pub [u32; 3]);

impl HighestWeight {
    pub fn new(lambda: [i64; 3], field: PrimeField) -> Self {
        let hw = Self(lambda.map(|x| field.reduce(x)));
        // Λ_χ with χ(h) = 0: λ_i^p - λ_i = 0.
        for &l in &hw.0 {
            assert_eq!(field.pow(l, field.modulus() as u64), l, "λ outside Λ_χ");
        }
        hw
    }

    pub fn as_weight(&self) -> Weight {
        Weight(self.0)
    }
}

/// `θ = (j1, j2, j3, j4)`, packed as `j1·8 + j2·4 + j3·2 + j4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Theta(u8);

impl Theta {
    pub fn new(j: [u8; 4]) -> Self {
        assert!(j.iter().all(|&b| b <= 1));
        Theta(j[0] << 3 | j[1] << 2 | j[2] << 1 | j[3])
    }

    pub fn from_bits(bits: u8) -> Self {
        assert!(bits < 16);
        Theta(bits)
    }

    /// All sixteen θ in lexicographic order of `(j1, j2, j3, j4)`.
    pub fn all() -> impl Iterator<Item = Theta> {
        (0..16u8).map(Theta)
    }

    /// The eight θ of the given parity, lexicographic.
    pub fn of_parity(parity: Parity) -> impl Iterator<Item = Theta> {
        Self::all().filter(move |t| t.parity() == parity)
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn j(self) -> [u8; 4] {
        [(self.0 >> 3) & 1, (self.0 >> 2) & 1, (self.0 >> 1) & 1, self.0 & 1]
    }

    #[inline]
    pub fn sum(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn parity(self) -> Parity {
        Parity::from_bit((self.sum() % 2) as u8)
    }

    /// Position among the eight θ of the same parity.
    pub fn rank_in_parity(self) -> usize {
        Theta::of_parity(self.parity()).position(|t| t == self).unwrap()
    }

    pub fn in_j1(self) -> bool {
        self.sum().is_multiple_of(2)
    }

    pub fn in_j2(self) -> bool {
        self.sum() == 2
    }

    pub fn in_j3(self) -> bool {
        self.sum() % 2 == 1
    }

    pub fn in_j4(self) -> bool {
        self.sum() == 3
    }

    /// Weight offsets `(±j-sums)` contributed by `y1^j1 … y4^j4`.
    fn y_weight(self) -> [i64; 3] {
        let [j1, j2, j3, j4] = self.j().map(|b| b as i64);
        [-(j1 + j2 + j3 + j4), j1 + j2 - j3 - j4, j1 - j2 + j3 - j4]
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.j();
        write!(f, "({a},{b},{c},{d})")
    }
}

/// PBW basis vector `f1^i1 f2^i2 f3^i3 y^θ ⊗ v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial {
    pub f: [u32; 3],
    pub y: Theta,
}

impl PbwMonomial {
    pub const HIGHEST: PbwMonomial = PbwMonomial { f: [0, 0, 0], y: Theta(0) };

    #[inline]
    pub fn index(&self, p: u32) -> u32 {
        ((self.f[0] * p + self.f[1]) * p + self.f[2]) * 16 + self.y.0 as u32
    }

    #[inline]
    pub fn from_index(idx: u32, p: u32) -> Self {
        let y = Theta((idx % 16) as u8);
        let mut rest = idx / 16;
        let i3 = rest % p;
        rest /= p;
        let i2 = rest % p;
        let i1 = rest / p;
        PbwMonomial { f: [i1, i2, i3], y }
    }

    pub fn parity(&self) -> Parity {
        self.y.parity()
    }

    /// Exponent tuple `(i1, i2, i3, j1, j2, j3, j4)`.
    pub fn exponents(&self) -> [u32; 7] {
        let [j1, j2, j3, j4] = self.y.j().map(u32::from);
        [self.f[0], self.f[1], self.f[2], j1, j2, j3, j4]
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &e) in self.f.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("f{}", k + 1)),
                _ => parts.push(format!("f{}^{}", k + 1, e)),
            }
        }
        for (l, &b) in self.y.j().iter().enumerate() {
            if b == 1 {
                parts.push(format!("y{}", l + 1));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(fm, "{}⊗v", parts.join(""))
    }
}

/// Number of PBW basis vectors, `16 p³`.
pub fn module_dim(p: u32) -> usize {
    16 * (p as usize).pow(3)
}

/// Weight of a PBW monomial: `λ - Σ i_k (2ε_k) + weight(y^θ)`.
pub fn weight_of_monomial(m: &PbwMonomial, lambda: &HighestWeight, field: PrimeField) -> Weight {
    let y = m.y.y_weight();
    Weight(std::array::from_fn(|k| {
        field.reduce(lambda.0[k] as i64 - 2 * m.f[k] as i64 + y[k])
    }))
}

/// The fifteen weights carried by generators, plus zero.
pub fn target_weights(field: PrimeField) -> Vec<Weight> {
    let mut out: Vec<Weight> = Generator::ALL
        .iter()
        .map(|g| Weight::from_ints(g.int_weight(), field))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetWeightBasis {
    pub beta: Weight,
    /// Whether `β` is one of the target weights `0, ±2ε_i, ±ε1±ε2±ε3`.
    pub is_target: bool,
    pub entries: Vec<(Theta, PbwMonomial)>,
}

/// f-exponents of `w_β^θ`: the residues of `(λ_k - β_k + weight(y^θ)_k) / 2`.
pub fn basis_monomial(
    beta: &Weight,
    theta: Theta,
    lambda: &HighestWeight,
    field: PrimeField,
) -> PbwMonomial {
    let y = theta.y_weight();
    let f = std::array::from_fn(|k| {
        field.half(field.reduce(lambda.0[k] as i64 - beta.0[k] as i64 + y[k]))
    });
    PbwMonomial { f, y: theta }
}

/// The sixteen monomials `w_β^θ`, θ ∈ J, spanning the weight space `Z_χ(λ)_β`.
pub fn target_weight_basis(beta: &Weight, lambda: &HighestWeight, field: PrimeField) -> TargetWeightBasis {
    let entries = Theta::all().map(|t| (t, basis_monomial(beta, t, lambda, field))).collect();
    TargetWeightBasis { beta: *beta, is_target: target_weights(field).contains(beta), entries }
}
