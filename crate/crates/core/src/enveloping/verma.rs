use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::{
    module_dim, weight_of_monomial, Character, HighestWeight, ModuleVector, PbwMonomial, Theta,
};
use crate::algebra::{AlgebraElement, Generator, Parity, SuperAlgebra, Weight};
use crate::field::PrimeField;
use crate::linalg::SparseVec;

/// Position of a PBW letter in the order `f1 < f2 < f3 < y1 < y2 < y3 < y4`;
/// `None` for `h`, `e`, `x`, which sort after all of them.
fn pbw_slot(g: Generator) -> Option<usize> {
    use Generator::*;
    match g {
        F1 => Some(0),
        F2 => Some(1),
        F3 => Some(2),
        Y1 => Some(3),
        Y2 => Some(4),
        Y3 => Some(5),
        Y4 => Some(6),
        _ => None,
    }
}

fn slot_generator(slot: usize) -> Generator {
    [
        Generator::F1,
        Generator::F2,
        Generator::F3,
        Generator::Y1,
        Generator::Y2,
        Generator::Y3,
        Generator::Y4,
    ][slot]
}

fn first_slot(m: &PbwMonomial) -> Option<usize> {
    if let Some(k) = m.f.iter().position(|&e| e > 0) {
        return Some(k);
    }
    let j = m.y.j();
    j.iter().position(|&b| b == 1).map(|l| 3 + l)
}

/// `m` with one copy of the letter in `slot` removed.
fn strip(m: &PbwMonomial, slot: usize) -> PbwMonomial {
    let mut out = *m;
    if slot < 3 {
        out.f[slot] -= 1;
    } else {
        out.y = Theta::from_bits(m.y.bits() & !(1 << (6 - slot)));
    }
    out
}

const MAX_DEPTH: usize = 100_000;

/// Memoized straightening of `g · m` into PBW normal form. One rewrite
/// `g·u = (-1)^{|g||u|} u·g + [g,u]` at the left end of `m = u·rest`, then
/// recursion; `f_k^p → χ(f_k)^p`, odd squares `a·a → ½[a,a]`, and at the
/// highest weight vector `h_i v = λ_i v`, `e_i v = x_j v = 0`.
struct Straightener<'a> {
    alg: &'a SuperAlgebra,
    lambda: HighestWeight,
    chi: Character,
    p: u32,
    n: usize,
    memo: Vec<Option<Vec<(u32, u32)>>>,
    depth: usize,
}

impl<'a> Straightener<'a> {
    fn new(alg: &'a SuperAlgebra, lambda: HighestWeight, chi: Character) -> Self {
        let p = alg.p();
        let n = module_dim(p);
        Self { alg, lambda, chi, p, n, memo: vec![None; crate::algebra::DIM * n], depth: 0 }
    }

    fn field(&self) -> PrimeField {
        self.alg.field()
    }

    fn apply_element(&mut self, x: &AlgebraElement, m: &PbwMonomial, scale: u32, acc: &mut Vec<(u32, u32)>) {
        let f = self.field();
        for (g, c) in x.terms() {
            let c = f.mul(c, scale);
            for (t, v) in self.apply(g, m) {
                acc.push((t, f.mul(c, v)));
            }
        }
    }

    fn apply(&mut self, g: Generator, m: &PbwMonomial) -> Vec<(u32, u32)> {
        let key = g.index() * self.n + m.index(self.p) as usize;
        if let Some(v) = &self.memo[key] {
            return v.clone();
        }
        self.depth += 1;
        assert!(self.depth < MAX_DEPTH, "straightening recursion did not terminate");
        let out = self.compute(g, m);
        self.depth -= 1;
        self.memo[key] = Some(out.clone());
        out
    }

    fn compute(&mut self, g: Generator, m: &PbwMonomial) -> Vec<(u32, u32)> {
        let f = self.field();
        let p = self.p;
        let first = first_slot(m);
        let mut acc = Vec::new();

        if let Some(s) = pbw_slot(g) {
            if first.is_none_or(|fs| s < fs) {
                let mut out = *m;
                if s < 3 {
                    out.f[s] += 1;
                } else {
                    out.y = Theta::from_bits(m.y.bits() | 1 << (6 - s));
                }
                return vec![(out.index(p), 1)];
            }
            if first == Some(s) {
                if s < 3 {
                    let mut out = *m;
                    out.f[s] += 1;
                    if out.f[s] == p {
                        out.f[s] = 0;
                        let c = self.chi.f_power(s, f);
                        return if c == 0 { vec![] } else { vec![(out.index(p), c)] };
                    }
                    return vec![(out.index(p), 1)];
                }
                // y·y·rest = ½[y,y]·rest
                let rest = strip(m, s);
                let half = f.half(1);
                let sq = *self.alg.bracket_gen(g, g);
                self.apply_element(&sq, &rest, half, &mut acc);
                return SparseVec::from_pairs(acc, f).entries().to_vec();
            }
        }

        let Some(fs) = first else {
            // g·v with g not a PBW letter
            return match g {
                Generator::H1 | Generator::H2 | Generator::H3 => {
                    let l = self.lambda.0[g.index()];
                    if l == 0 {
                        vec![]
                    } else {
                        vec![(m.index(p), l)]
                    }
                }
                _ => vec![],
            };
        };

        let u = slot_generator(fs);
        let rest = strip(m, fs);
        let sign = f.sign(g.is_odd() && u.is_odd());
        for (t, c) in self.apply(g, &rest) {
            let tm = PbwMonomial::from_index(t, p);
            let c = f.mul(c, sign);
            for (t2, v) in self.apply(u, &tm) {
                acc.push((t2, f.mul(c, v)));
            }
        }
        let gu = *self.alg.bracket_gen(g, u);
        self.apply_element(&gu, &rest, 1, &mut acc);
        SparseVec::from_pairs(acc, f).entries().to_vec()
    }
}

/// Column-compressed action matrix of one generator.
#[derive(Debug, Clone)]
struct ActionMatrix {
    col_ptr: Vec<u32>,
    entries: Vec<(u32, u32)>,
}

impl ActionMatrix {
    #[inline]
    fn column(&self, m: u32) -> &[(u32, u32)] {
        &self.entries[self.col_ptr[m as usize] as usize..self.col_ptr[m as usize + 1] as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleAxiomViolation {
    SuperCommutator(Generator, Generator, u32),
    Restrictedness(Generator, u32),
    OddSquare(Generator, u32),
    WeightGrading(Generator, u32),
}

impl fmt::Display for ModuleAxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SuperCommutator(a, b, m) => {
                write!(f, "action([{a},{b}]) differs from the super-commutator on basis vector {m}")
            }
            Self::Restrictedness(a, m) => write!(f, "p-th power of action({a}) wrong on basis vector {m}"),
            Self::OddSquare(a, m) => write!(f, "action({a})^2 != ½ action([{a},{a}]) on basis vector {m}"),
            Self::WeightGrading(a, m) => write!(f, "action({a}) leaves the expected weight space at {m}"),
        }
    }
}

/// The baby Verma module `Z_χ(λ)` with precomputed sparse action matrices.
#[derive(Debug, Clone)]
pub struct VermaModule {
    alg: SuperAlgebra,
    lambda: HighestWeight,
    chi: Character,
    actions: Vec<ActionMatrix>,
    weights: Vec<Weight>,
}

impl VermaModule {
    pub fn new(alg: &SuperAlgebra, lambda: HighestWeight, chi: Character) -> Self {
        let p = alg.p();
        let n = module_dim(p);
        let mut st = Straightener::new(alg, lambda, chi);
        let mut actions = Vec::with_capacity(crate::algebra::DIM);
        for g in Generator::ALL {
            let mut col_ptr = Vec::with_capacity(n + 1);
            let mut entries = Vec::new();
            col_ptr.push(0);
            for idx in 0..n as u32 {
                let m = PbwMonomial::from_index(idx, p);
                entries.extend(st.apply(g, &m));
                col_ptr.push(entries.len() as u32);
            }
            actions.push(ActionMatrix { col_ptr, entries });
        }
        let weights = (0..n as u32)
            .map(|i| weight_of_monomial(&PbwMonomial::from_index(i, p), &lambda, alg.field()))
            .collect();
        VermaModule { alg: alg.clone(), lambda, chi, actions, weights }
    }

    /// Convenience constructor from integer parameters.
    pub fn from_params(
        alg: &SuperAlgebra,
        lambda: [i64; 3],
        chi_f: [i64; 3],
    ) -> Self {
        let f = alg.field();
        Self::new(alg, HighestWeight::new(lambda, f), Character::new(chi_f, f))
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.alg
    }

    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }

    pub fn p(&self) -> u32 {
        self.alg.p()
    }

    pub fn lambda(&self) -> HighestWeight {
        self.lambda
    }

    pub fn chi(&self) -> Character {
        self.chi
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn monomial(&self, idx: u32) -> PbwMonomial {
        PbwMonomial::from_index(idx, self.p())
    }

    pub fn index_of(&self, m: &PbwMonomial) -> u32 {
        m.index(self.p())
    }

    pub fn weight_of_basis(&self, idx: u32) -> Weight {
        self.weights[idx as usize]
    }

    pub fn parity_of_basis(&self, idx: u32) -> Parity {
        Theta::from_bits((idx % 16) as u8).parity()
    }

    /// Parity of a homogeneous vector; `None` if mixed. Zero counts as even.
    pub fn parity_of(&self, v: &ModuleVector) -> Option<Parity> {
        let mut seen = None;
        for &(i, _) in v.entries() {
            let q = self.parity_of_basis(i);
            match seen {
                None => seen = Some(q),
                Some(s) if s != q => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    #[inline]
    pub fn act_basis(&self, g: Generator, m: u32) -> &[(u32, u32)] {
        self.actions[g.index()].column(m)
    }

    pub fn act(&self, g: Generator, v: &ModuleVector) -> ModuleVector {
        let f = self.field();
        let mut acc = Vec::new();
        for &(m, c) in v.entries() {
            for &(t, x) in self.act_basis(g, m) {
                acc.push((t, f.mul(c, x)));
            }
        }
        SparseVec::from_pairs(acc, f)
    }

    pub fn act_element(&self, x: &AlgebraElement, v: &ModuleVector) -> ModuleVector {
        let f = self.field();
        let mut out = ModuleVector::new();
        for (g, c) in x.terms() {
            out = out.axpy(c, &self.act(g, v), f);
        }
        out
    }

    /// PBW normal form of `scalar · word · v`.
    pub fn normal_form(&self, word: &[Generator], scalar: u32) -> ModuleVector {
        let f = self.field();
        let mut v = SparseVec::unit(0).scale(scalar, f);
        for &g in word.iter().rev() {
            v = self.act(g, &v);
        }
        v
    }

    /// Basis indices grouped by weight.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<u32>> {
        let mut out: BTreeMap<Weight, Vec<u32>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            out.entry(*w).or_default().push(i as u32);
        }
        out
    }

    pub fn weight_decomposition_json(&self) -> Value {
        let weights: Vec<Value> = self
            .weight_spaces()
            .into_iter()
            .map(|(w, idxs)| {
                let basis: Vec<[u32; 7]> = idxs.iter().map(|&i| self.monomial(i).exponents()).collect();
                json!({"beta": w.0, "dim": idxs.len(), "basis": basis})
            })
            .collect();
        json!({
            "p": self.p(),
            "alpha": self.alg.alpha(),
            "lambda": self.lambda.0,
            "chi_f": self.chi.chi_f,
            "dim": self.dim(),
            "weights": weights,
        })
    }

    /// Exhaustive check of the module structure: super-commutator identity
    /// for all ordered generator pairs, restrictedness of `h, e, f`, odd
    /// squares, and compatibility with the weight grading.
    pub fn check_axioms(&self) -> Vec<ModuleAxiomViolation> {
        let f = self.field();
        let n = self.dim() as u32;
        let mut out = Vec::new();
        for a in Generator::ALL {
            for b in Generator::ALL {
                let ab = *self.alg.bracket_gen(a, b);
                let sign = f.sign(a.is_odd() && b.is_odd());
                for m in 0..n {
                    let e = SparseVec::unit(m);
                    let lhs = self.act_element(&ab, &e);
                    let rhs = self
                        .act(a, &self.act(b, &e))
                        .axpy(f.neg(sign), &self.act(b, &self.act(a, &e)), f);
                    if lhs != rhs {
                        out.push(ModuleAxiomViolation::SuperCommutator(a, b, m));
                        break;
                    }
                }
            }
        }
        let p = self.p();
        for g in Generator::ALL {
            for m in 0..n {
                let e = SparseVec::unit(m);
                if g.is_odd() {
                    let sq = self.act(g, &self.act(g, &e));
                    let half = self.act_element(&self.alg.bracket_gen(g, g).scale(f.half(1), f), &e);
                    if sq != half {
                        out.push(ModuleAxiomViolation::OddSquare(g, m));
                        break;
                    }
                } else {
                    let mut v = e.clone();
                    for _ in 0..p {
                        v = self.act(g, &v);
                    }
                    let expected = match g {
                        Generator::F1 | Generator::F2 | Generator::F3 => {
                            e.scale(self.chi.f_power(g.index() - Generator::F1.index(), f), f)
                        }
                        Generator::H1 | Generator::H2 | Generator::H3 => self.act(g, &e),
                        _ => SparseVec::new(),
                    };
                    if v != expected {
                        out.push(ModuleAxiomViolation::Restrictedness(g, m));
                        break;
                    }
                }
            }
            let gw = self.alg.weight_of(g);
            for m in 0..n {
                let target = self.weight_of_basis(m).add(gw, f);
                if self.act_basis(g, m).iter().any(|&(t, _)| self.weight_of_basis(t) != target) {
                    out.push(ModuleAxiomViolation::WeightGrading(g, m));
                    break;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::enveloping::module_dim;
    use Generator::*;

    fn module(lambda: [i64; 3], chi: [i64; 3]) -> VermaModule {
        let alg = SuperAlgebra::new(5, 2).unwrap();
        VermaModule::from_params(&alg, lambda, chi)
    }

    #[test]
    fn dimension() {
        let m = module([2, 3, 3], [0, 0, 0]);
        assert_eq!(m.dim(), 2000);
        assert_eq!(module_dim(7), 16 * 343);
    }

    #[test]
    fn normal_form_examples() {
        let m = module([2, 3, 3], [1, 0, 0]);
        let f1v = PbwMonomial { f: [1, 0, 0], y: Theta::from_bits(0) };
        assert_eq!(m.normal_form(&[F1], 1).entries(), &[(m.index_of(&f1v), 1)]);
        // e1 f1 v = h1 v = λ1 v
        assert_eq!(m.normal_form(&[E1, F1], 1).entries(), &[(0, 2)]);
        // f1^p v = χ(f1)^p v
        assert_eq!(m.normal_form(&[F1; 5], 1).entries(), &[(0, 1)]);
        assert!(m.normal_form(&[Y1, Y1], 1).is_empty());
        assert!(m.normal_form(&[E2], 1).is_empty());
        assert_eq!(m.normal_form(&[F1; 5], 3).entries(), &[(0, 3)]);
    }

    #[test]
    fn h_action_is_diagonal() {
        let m = module([1, 4, 2], [0, 1, 0]);
        let f = m.field();
        for idx in 0..m.dim() as u32 {
            let mono = m.monomial(idx);
            let [j1, j2, j3, j4] = mono.y.j().map(|b| b as i64);
            let expected = f.reduce(1 - 2 * mono.f[0] as i64 - j1 - j2 - j3 - j4);
            let col = m.act_basis(H1, idx);
            if expected == 0 {
                assert!(col.is_empty());
            } else {
                assert_eq!(col, &[(idx, expected)]);
            }
        }
    }

    #[test]
    fn act_examples() {
        let m = module([2, 3, 3], [0, 0, 0]);
        let f = m.field();
        let y1 = SparseVec::unit(m.index_of(&PbwMonomial { f: [0, 0, 0], y: Theta::new([1, 0, 0, 0]) }));
        assert_eq!(m.act(H2, &y1), y1.scale(4, f));
        let y4 = SparseVec::unit(m.index_of(&PbwMonomial { f: [0, 0, 0], y: Theta::new([0, 0, 0, 1]) }));
        // -(1+α)λ1 + λ2 + αλ3 = -6 + 3 + 6 = 3
        assert_eq!(m.act(X1, &y4).entries(), &[(0, 3)]);
        assert!(m.act(E2, &SparseVec::unit(0)).is_empty());
        // f1 · f1^{p-1} v = χ(f1)^p v
        let m2 = module([2, 3, 3], [3, 0, 0]);
        let top = m2.index_of(&PbwMonomial { f: [4, 0, 0], y: Theta::from_bits(0) });
        assert_eq!(m2.act_basis(F1, top), &[(0, 3)]);
    }

    #[test]
    fn module_axioms_small_grid() {
        for (lambda, chi) in [([2, 3, 3], [0, 0, 0]), ([1, 4, 0], [1, 1, 1])] {
            let m = module(lambda, chi);
            assert_eq!(m.check_axioms(), vec![]);
        }
    }

    #[test]
    fn weight_spaces_have_dimension_16() {
        let m = module([4, 0, 1], [0, 0, 1]);
        let spaces = m.weight_spaces();
        assert_eq!(spaces.len(), 125);
        assert!(spaces.values().all(|v| v.len() == 16));
        let json = m.weight_decomposition_json();
        assert_eq!(json["weights"].as_array().unwrap().len(), 125);
        assert_eq!(json["weights"][0]["dim"], 16);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn action_shifts_weight_and_parity(
            l in proptest::array::uniform3(0i64..5),
            chi in proptest::array::uniform3(0i64..5),
            g in 0usize..17,
            m in 0u32..2000,
        ) {
            let module = module(l, chi);
            let f = module.field();
            let g = Generator::from_index(g);
            let w = module.weight_of_basis(m).add(module.algebra().weight_of(g), f);
            let parity = module.parity_of_basis(m).plus(g.parity());
            for &(t, _) in module.act_basis(g, m) {
                prop_assert_eq!(module.weight_of_basis(t), w);
                prop_assert_eq!(module.parity_of_basis(t), parity);
            }
        }
    }
}
