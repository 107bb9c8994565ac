//! The restricted Lie superalgebra `D(2,1;α)` over `F_p`.
//!
//! Basis: `h_i, e_i, f_i` (three commuting copies of `sl(2)`, even) and the
//! odd vectors `x_1..x_4 = ω_1 ⊗ ω_{±2} ⊗ ω_{±3}`, `y_1..y_4 = ω_{-1} ⊗ ...`.
//! The bracket is stored as a dense `17 × 17` table of [`AlgebraElement`]s.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldError, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("alpha must avoid 0 and -1 (got residue {alpha} mod {p})")]
    InvalidAlpha { alpha: u32, p: u32 },
    #[error("the p-map is only defined on even generators, got {0}")]
    OddPMap(Generator),
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    #[inline]
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    #[inline]
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    #[inline]
    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ other.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Fixed enumeration of the 17 basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    H1,
    H2,
    H3,
    E1,
    E2,
    E3,
    F1,
    F2,
    F3,
    X1,
    X2,
    X3,
    X4,
    Y1,
    Y2,
    Y3,
    Y4,
}

use Generator::*;

pub const DIM: usize = 17;

impl Generator {
    pub const ALL: [Generator; DIM] =
        [H1, H2, H3, E1, E2, E3, F1, F2, F3, X1, X2, X3, X4, Y1, Y2, Y3, Y4];
    pub const H: [Generator; 3] = [H1, H2, H3];
    pub const E: [Generator; 3] = [E1, E2, E3];
    pub const F: [Generator; 3] = [F1, F2, F3];
    pub const X: [Generator; 4] = [X1, X2, X3, X4];
    pub const Y: [Generator; 4] = [Y1, Y2, Y3, Y4];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Generator {
        Self::ALL[i]
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; DIM] = [
            "h1", "h2", "h3", "e1", "e2", "e3", "f1", "f2", "f3", "x1", "x2", "x3", "x4", "y1",
            "y2", "y3", "y4",
        ];
        NAMES[self.index()]
    }

    pub fn parse(name: &str) -> Result<Generator, AlgebraError> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    #[inline]
    pub fn parity(self) -> Parity {
        if self.index() >= X1.index() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.parity().is_odd()
    }

    /// Integer weight `(β1, β2, β3)` before reduction mod p.
    pub fn int_weight(self) -> [i64; 3] {
        match self {
            H1 | H2 | H3 => [0, 0, 0],
            E1 => [2, 0, 0],
            E2 => [0, 2, 0],
            E3 => [0, 0, 2],
            F1 => [-2, 0, 0],
            F2 => [0, -2, 0],
            F3 => [0, 0, -2],
            // x_k = ω_1 ⊗ ω_{±2} ⊗ ω_{±3}; y_k flips the first factor.
            X1 => [1, 1, 1],
            X2 => [1, 1, -1],
            X3 => [1, -1, 1],
            X4 => [1, -1, -1],
            Y1 => [-1, 1, 1],
            Y2 => [-1, 1, -1],
            Y3 => [-1, -1, 1],
            Y4 => [-1, -1, -1],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `β = β1 ε1 + β2 ε2 + β3 ε3` with residue coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Weight(pub [u32; 3]);

impl Weight {
    pub const ZERO: Weight = Weight([0, 0, 0]);

    pub fn from_ints(v: [i64; 3], field: PrimeField) -> Weight {
        Weight(v.map(|x| field.reduce(x)))
    }

    pub fn add(self, other: Weight, field: PrimeField) -> Weight {
        Weight([0, 1, 2].map(|i| field.add(self.0[i], other.0[i])))
    }

    pub fn neg(self, field: PrimeField) -> Weight {
        Weight(self.0.map(|x| field.neg(x)))
    }
}

/// Dense coefficient vector over the 17 generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    coeffs: [u32; DIM],
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(g: Generator) -> Self {
        let mut e = Self::zero();
        e.coeffs[g.index()] = 1;
        e
    }

    pub fn from_terms(terms: &[(Generator, i64)], field: PrimeField) -> Self {
        let mut e = Self::zero();
        for &(g, c) in terms {
            let i = g.index();
            e.coeffs[i] = field.add(e.coeffs[i], field.reduce(c));
        }
        e
    }

    #[inline]
    pub fn coeff(&self, g: Generator) -> u32 {
        self.coeffs[g.index()]
    }

    pub fn coeffs(&self) -> &[u32; DIM] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero `(generator, coefficient)` pairs in enumeration order.
    pub fn terms(&self) -> impl Iterator<Item = (Generator, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (Generator::from_index(i), c))
    }

    pub fn add(&self, other: &Self, field: PrimeField) -> Self {
        let mut out = *self;
        for i in 0..DIM {
            out.coeffs[i] = field.add(out.coeffs[i], other.coeffs[i]);
        }
        out
    }

    pub fn sub(&self, other: &Self, field: PrimeField) -> Self {
        let mut out = *self;
        for i in 0..DIM {
            out.coeffs[i] = field.sub(out.coeffs[i], other.coeffs[i]);
        }
        out
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> Self {
        let mut out = *self;
        for x in out.coeffs.iter_mut() {
            *x = field.mul(*x, c);
        }
        out
    }

    /// `Some(parity)` when the support is parity-homogeneous (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (g, _) in self.terms() {
            match seen {
                None => seen = Some(g.parity()),
                Some(p) if p != g.parity() => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }
}

/// One entry of an [`AxiomReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Antisymmetry(Generator, Generator),
    Jacobi(Generator, Generator, Generator),
    WeightCompatibility(Generator, Generator),
    Restrictedness(Generator),
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Antisymmetry(a, b) => write!(f, "super-antisymmetry fails for ({a}, {b})"),
            AxiomViolation::Jacobi(a, b, c) => write!(f, "super-Jacobi fails for ({a}, {b}, {c})"),
            AxiomViolation::WeightCompatibility(a, b) => {
                write!(f, "[{a}, {b}] leaves the weight space of wt({a}) + wt({b})")
            }
            AxiomViolation::Restrictedness(a) => write!(f, "ad({a}^[p]) != ad({a})^p"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

type AdMatrix = [[u32; DIM]; DIM];

/// `D(2,1;α)` with its bracket table, p-map and weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperAlgebra {
    field: PrimeField,
    alpha: u32,
    table: Vec<AlgebraElement>,
    weights: [Weight; DIM],
}

impl SuperAlgebra {
    /// Builds the bracket table from the sl(2)³ relations, the even-on-odd
    /// action and the odd-odd products. Every pair not generated from those
    /// lists (after closing under super-antisymmetry) brackets to zero.
    pub fn new(p: u64, alpha: i64) -> Result<Self, AlgebraError> {
        let field = PrimeField::new(p)?;
        let alpha = field.reduce(alpha);
        if alpha == 0 || alpha == field.modulus() - 1 {
            return Err(AlgebraError::InvalidAlpha { alpha, p: field.modulus() });
        }
        let mut alg = SuperAlgebra {
            field,
            alpha,
            table: vec![AlgebraElement::zero(); DIM * DIM],
            weights: Generator::ALL.map(|g| Weight::from_ints(g.int_weight(), field)),
        };
        let a = alpha as i64;

        for i in 0..3 {
            let (h, e, f) = (Generator::H[i], Generator::E[i], Generator::F[i]);
            alg.set(e, f, &[(h, 1)]);
            alg.set(h, e, &[(e, 2)]);
            alg.set(h, f, &[(f, -2)]);
        }

        // Even-on-odd. k ranges over both x and y families; indices are
        // 1-based in the usual notation, 0-based here.
        for fam in [Generator::X, Generator::Y] {
            let h1_sign = if fam[0] == X1 { 1 } else { -1 };
            for i in 0..4 {
                alg.set(H1, fam[i], &[(fam[i], h1_sign)]);
                alg.set(H2, fam[i], &[(fam[i], if i < 2 { 1 } else { -1 })]);
                alg.set(H3, fam[i], &[(fam[i], if i % 2 == 0 { 1 } else { -1 })]);
            }
            // [e2, k_l] = k_{l-2} (l = 3,4); [f2, k_j] = k_{j+2} (j = 1,2)
            for j in 0..2 {
                alg.set(E2, fam[j + 2], &[(fam[j], 1)]);
                alg.set(F2, fam[j], &[(fam[j + 2], 1)]);
            }
            // [e3, k_s] = k_{s-1} (s = 2,4); [f3, k_t] = k_{t+1} (t = 1,3)
            for t in [0, 2] {
                alg.set(E3, fam[t + 1], &[(fam[t], 1)]);
                alg.set(F3, fam[t], &[(fam[t + 1], 1)]);
            }
        }
        for i in 0..4 {
            alg.set(E1, Generator::Y[i], &[(Generator::X[i], 1)]);
            alg.set(F1, Generator::X[i], &[(Generator::Y[i], 1)]);
        }

        // Odd-odd.
        alg.set(X1, Y2, &[(E2, -2)]);
        alg.set(X1, Y3, &[(E3, -2 * a)]);
        alg.set(X1, Y4, &[(H1, -(1 + a)), (H2, 1), (H3, a)]);
        alg.set(X2, Y1, &[(E2, 2)]);
        alg.set(X2, Y4, &[(F3, 2 * a)]);
        alg.set(X2, Y3, &[(H1, 1 + a), (H2, -1), (H3, a)]);
        alg.set(X3, Y1, &[(E3, 2 * a)]);
        alg.set(X3, Y4, &[(F2, 2)]);
        alg.set(X3, Y2, &[(H1, 1 + a), (H2, 1), (H3, -a)]);
        alg.set(X4, Y2, &[(F3, -2 * a)]);
        alg.set(X4, Y3, &[(F2, -2)]);
        alg.set(X4, Y1, &[(H1, -(1 + a)), (H2, -1), (H3, -a)]);
        alg.set(Y2, Y3, &[(F1, 2 * (1 + a))]);
        alg.set(Y1, Y4, &[(F1, -2 * (1 + a))]);
        alg.set(X2, X3, &[(E1, -2 * (1 + a))]);
        alg.set(X1, X4, &[(E1, 2 * (1 + a))]);

        Ok(alg)
    }

    /// Writes `[a,b]` and the mirrored `[b,a] = -(-1)^{|a||b|}[a,b]`.
    fn set(&mut self, a: Generator, b: Generator, terms: &[(Generator, i64)]) {
        let v = AlgebraElement::from_terms(terms, self.field);
        self.table[a.index() * DIM + b.index()] = v;
        let mirrored = if a.is_odd() && b.is_odd() { v } else { v.scale(self.field.neg(1), self.field) };
        self.table[b.index() * DIM + a.index()] = mirrored;
    }

    /// Copy of the algebra with `delta` added to the `target` coefficient of
    /// `[a,b]` (and consistently to `[b,a]`). Used to show that the axiom
    /// checker notices transcription errors.
    pub fn perturbed(&self, a: Generator, b: Generator, target: Generator, delta: i64) -> Self {
        let mut out = self.clone();
        let f = self.field;
        let mut v = *out.bracket_gen(a, b);
        v.coeffs[target.index()] = f.add(v.coeffs[target.index()], f.reduce(delta));
        let terms: Vec<(Generator, i64)> = v.terms().map(|(g, c)| (g, c as i64)).collect();
        out.set(a, b, &terms);
        out
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    #[inline]
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    #[inline]
    pub fn bracket_gen(&self, a: Generator, b: Generator) -> &AlgebraElement {
        &self.table[a.index() * DIM + b.index()]
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let f = self.field;
        let mut out = AlgebraElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let c = f.mul(ca, cb);
                out = out.add(&self.bracket_gen(a, b).scale(c, f), f);
            }
        }
        out
    }

    /// `h^[p] = h`, `e^[p] = f^[p] = 0`.
    pub fn pmap(&self, g: Generator) -> Result<AlgebraElement, AlgebraError> {
        match g {
            H1 | H2 | H3 => Ok(AlgebraElement::basis(g)),
            E1 | E2 | E3 | F1 | F2 | F3 => Ok(AlgebraElement::zero()),
            _ => Err(AlgebraError::OddPMap(g)),
        }
    }

    #[inline]
    pub fn weight_of(&self, g: Generator) -> Weight {
        self.weights[g.index()]
    }

    fn ad(&self, x: &AlgebraElement) -> AdMatrix {
        let mut m = [[0u32; DIM]; DIM];
        for b in Generator::ALL {
            let col = self.bracket(x, &AlgebraElement::basis(b));
            for r in 0..DIM {
                m[r][b.index()] = col.coeffs[r];
            }
        }
        m
    }

    fn mat_mul(&self, a: &AdMatrix, b: &AdMatrix) -> AdMatrix {
        let f = self.field;
        let mut out = [[0u32; DIM]; DIM];
        for i in 0..DIM {
            for k in 0..DIM {
                if a[i][k] == 0 {
                    continue;
                }
                for j in 0..DIM {
                    out[i][j] = f.mul_add(out[i][j], a[i][k], b[k][j]);
                }
            }
        }
        out
    }

    /// Super-antisymmetry, super-Jacobi on all 17³ triples, weight
    /// compatibility, and `ad(a^[p]) = ad(a)^p` for every even basis vector.
    pub fn check_axioms(&self) -> AxiomReport {
        let f = self.field;
        let mut violations = Vec::new();
        for a in Generator::ALL {
            for b in Generator::ALL {
                let ab = self.bracket_gen(a, b);
                let ba = self.bracket_gen(b, a);
                let sign = f.sign(!(a.is_odd() && b.is_odd()));
                if *ab != ba.scale(sign, f) {
                    violations.push(AxiomViolation::Antisymmetry(a, b));
                }
                let target = self.weight_of(a).add(self.weight_of(b), f);
                if ab.terms().any(|(g, _)| self.weight_of(g) != target) {
                    violations.push(AxiomViolation::WeightCompatibility(a, b));
                }
            }
        }
        let sgn = |x: Generator, y: Generator| f.sign(x.is_odd() && y.is_odd());
        for a in Generator::ALL {
            let ea = AlgebraElement::basis(a);
            for b in Generator::ALL {
                let eb = AlgebraElement::basis(b);
                for c in Generator::ALL {
                    let ec = AlgebraElement::basis(c);
                    let t1 = self.bracket(&ea, self.bracket_gen(b, c)).scale(sgn(a, c), f);
                    let t2 = self.bracket(&eb, self.bracket_gen(c, a)).scale(sgn(b, a), f);
                    let t3 = self.bracket(&ec, self.bracket_gen(a, b)).scale(sgn(c, b), f);
                    if !t1.add(&t2, f).add(&t3, f).is_zero() {
                        violations.push(AxiomViolation::Jacobi(a, b, c));
                    }
                }
            }
        }
        for a in Generator::ALL.into_iter().filter(|g| !g.is_odd()) {
            let ad_a = self.ad(&AlgebraElement::basis(a));
            let mut power = ad_a;
            for _ in 1..self.p() {
                power = self.mat_mul(&power, &ad_a);
            }
            let lhs = self.ad(&self.pmap(a).expect("even generator"));
            if lhs != power {
                violations.push(AxiomViolation::Restrictedness(a));
            }
        }
        AxiomReport { violations }
    }

    /// Debug dump of the nonzero part of the bracket table.
    pub fn bracket_table_json(&self) -> Value {
        let mut pairs = Vec::new();
        for a in Generator::ALL {
            for b in Generator::ALL {
                let v = self.bracket_gen(a, b);
                if v.is_zero() {
                    continue;
                }
                let value: serde_json::Map<String, Value> =
                    v.terms().map(|(g, c)| (g.name().to_string(), json!(c))).collect();
                pairs.push(json!({"a": a.name(), "b": b.name(), "value": value}));
            }
        }
        json!({"p": self.p(), "alpha": self.alpha, "pairs": pairs})
    }
}
