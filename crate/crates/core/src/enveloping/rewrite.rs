//! Term rewriting of words `g1 g2 … gk ⊗ v` into PBW normal form, one redex
//! at a time. Independent of the memoized straightening behind
//! [`VermaModule`]; the two are compared in tests.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{ModuleVector, PbwMonomial, Theta, VermaModule};
use crate::algebra::Generator;
use crate::linalg::SparseVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rewriting did not reach a normal form within {0} steps")]
    StepLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Always the leftmost redex of the first term.
    Leftmost,
    /// A uniformly random redex of a uniformly random term.
    Random(u64),
}

/// Total order on letters: `f1 < f2 < f3 < y1 < … < y4 < h < e < x`.
fn key(g: Generator) -> usize {
    use Generator::*;
    match g {
        F1 => 0,
        F2 => 1,
        F3 => 2,
        Y1 => 3,
        Y2 => 4,
        Y3 => 5,
        Y4 => 6,
        H1 => 7,
        H2 => 8,
        H3 => 9,
        E1 => 10,
        E2 => 11,
        E3 => 12,
        X1 => 13,
        X2 => 14,
        X3 => 15,
        X4 => 16,
    }
}

fn is_pbw_letter(g: Generator) -> bool {
    key(g) < 7
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Redex {
    /// Non-PBW letter adjacent to `v`.
    Absorb,
    Swap(usize),
    OddSquare(usize),
    FPower(usize),
}

type Word = Vec<Generator>;

pub struct WordRewriter<'a> {
    module: &'a VermaModule,
    max_steps: usize,
}

impl<'a> WordRewriter<'a> {
    pub fn new(module: &'a VermaModule) -> Self {
        Self { module, max_steps: 1_000_000 }
    }

    pub fn with_step_limit(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn redexes(&self, w: &[Generator]) -> Vec<Redex> {
        let p = self.module.p() as usize;
        let mut out = Vec::new();
        if let Some(&last) = w.last() {
            if !is_pbw_letter(last) {
                out.push(Redex::Absorb);
            }
        }
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if key(a) > key(b) {
                out.push(Redex::Swap(i));
            } else if a == b && a.is_odd() {
                out.push(Redex::OddSquare(i));
            }
        }
        for i in 0..(w.len() + 1).saturating_sub(p) {
            if Generator::F.contains(&w[i]) && w[i..i + p].iter().all(|&g| g == w[i]) {
                out.push(Redex::FPower(i));
            }
        }
        out
    }

    /// Contract one redex of the word `w` with coefficient `c` into `terms`.
    fn fire(&self, w: &[Generator], c: u32, r: Redex, terms: &mut BTreeMap<Word, u32>) {
        let f = self.module.field();
        let alg = self.module.algebra();
        let mut push = |w: Word, c: u32| {
            if c == 0 {
                return;
            }
            let e = terms.entry(w).or_insert(0);
            *e = f.add(*e, c);
        };
        match r {
            Redex::Absorb => {
                let g = *w.last().unwrap();
                let head = w[..w.len() - 1].to_vec();
                if let Some(k) = Generator::H.iter().position(|&h| h == g) {
                    push(head, f.mul(c, self.module.lambda().0[k]));
                }
            }
            Redex::Swap(i) => {
                let (a, b) = (w[i], w[i + 1]);
                let mut swapped = w.to_vec();
                swapped.swap(i, i + 1);
                push(swapped, f.mul(c, f.sign(a.is_odd() && b.is_odd())));
                for (g, x) in alg.bracket_gen(a, b).terms() {
                    let mut nw = w[..i].to_vec();
                    nw.push(g);
                    nw.extend_from_slice(&w[i + 2..]);
                    push(nw, f.mul(c, x));
                }
            }
            Redex::OddSquare(i) => {
                let a = w[i];
                let half = f.half(c);
                for (g, x) in alg.bracket_gen(a, a).terms() {
                    let mut nw = w[..i].to_vec();
                    nw.push(g);
                    nw.extend_from_slice(&w[i + 2..]);
                    push(nw, f.mul(half, x));
                }
            }
            Redex::FPower(i) => {
                let p = self.module.p() as usize;
                let k = Generator::F.iter().position(|&g| g == w[i]).unwrap();
                let mut nw = w[..i].to_vec();
                nw.extend_from_slice(&w[i + p..]);
                push(nw, f.mul(c, self.module.chi().f_power(k, f)));
            }
        }
    }

    /// Normal form of `scalar · word ⊗ v` in the PBW basis.
    pub fn normal_form(
        &self,
        word: &[Generator],
        scalar: u32,
        strategy: RewriteStrategy,
    ) -> Result<ModuleVector, RewriteError> {
        let f = self.module.field();
        let mut rng = match strategy {
            RewriteStrategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            RewriteStrategy::Leftmost => None,
        };
        let mut pending: BTreeMap<Word, u32> = BTreeMap::new();
        let mut done: BTreeMap<Word, u32> = BTreeMap::new();
        let s = f.reduce(scalar as i64);
        if s != 0 {
            pending.insert(word.to_vec(), s);
        }
        let mut steps = 0;
        while !pending.is_empty() {
            let pick = match rng.as_mut() {
                Some(r) => r.gen_range(0..pending.len()),
                None => 0,
            };
            let w = pending.keys().nth(pick).unwrap().clone();
            let c = pending.remove(&w).unwrap();
            if c == 0 {
                continue;
            }
            let rs = self.redexes(&w);
            if rs.is_empty() {
                let e = done.entry(w).or_insert(0);
                *e = f.add(*e, c);
                continue;
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(RewriteError::StepLimit(self.max_steps));
            }
            let r = match rng.as_mut() {
                Some(g) => rs[g.gen_range(0..rs.len())],
                None => rs[0],
            };
            self.fire(&w, c, r, &mut pending);
        }
        let pairs = done
            .into_iter()
            .map(|(w, c)| (self.module.index_of(&Self::monomial_of(&w)), c))
            .collect();
        Ok(SparseVec::from_pairs(pairs, f))
    }

    /// The PBW monomial spelled by an irreducible word.
    fn monomial_of(w: &[Generator]) -> PbwMonomial {
        let mut f = [0u32; 3];
        let mut j = [0u8; 4];
        for &g in w {
            let k = key(g);
            if k < 3 {
                f[k] += 1;
            } else {
                j[k - 3] = 1;
            }
        }
        PbwMonomial { f, y: Theta::new(j) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SuperAlgebra;
    use Generator::*;

    fn module() -> VermaModule {
        let alg = SuperAlgebra::new(5, 2).unwrap();
        VermaModule::from_params(&alg, [2, 3, 1], [1, 0, 2])
    }

    #[test]
    fn small_words() {
        let m = module();
        let rw = WordRewriter::new(&m);
        for word in [vec![E1, F1], vec![X1, Y4], vec![F1; 5], vec![Y2, Y1, F3], vec![H2, Y1]] {
            assert_eq!(
                rw.normal_form(&word, 1, RewriteStrategy::Leftmost).unwrap(),
                m.normal_form(&word, 1),
                "{word:?}"
            );
        }
    }

    #[test]
    fn step_limit_is_reported() {
        let m = module();
        let rw = WordRewriter::new(&m).with_step_limit(3);
        assert_eq!(
            rw.normal_form(&[X1, X2, E1, F1, F2, F3, Y1], 1, RewriteStrategy::Leftmost),
            Err(RewriteError::StepLimit(3))
        );
    }

    #[test]
    fn confluence_against_module_action() {
        let m = module();
        let rw = WordRewriter::new(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..1000u64 {
            let len = rng.gen_range(0..=8);
            let word: Vec<Generator> =
                (0..len).map(|_| Generator::ALL[rng.gen_range(0..17)]).collect();
            let expected = m.normal_form(&word, 1);
            assert_eq!(rw.normal_form(&word, 1, RewriteStrategy::Leftmost).unwrap(), expected, "{word:?}");
            assert_eq!(
                rw.normal_form(&word, 1, RewriteStrategy::Random(n)).unwrap(),
                expected,
                "{word:?}"
            );
        }
    }
}
