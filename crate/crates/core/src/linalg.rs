//! Exact sparse linear algebra over `F_p`.
//!
//! Everything reduces to one engine, [`Echelon`]: an incrementally built,
//! fully reduced row-echelon form with sparse rows. Because the form is kept
//! fully reduced, a pivot row only has entries at its pivot and at non-pivot
//! columns, so reducing a vector is a single pass over its own support, and
//! block-diagonal systems never mix blocks. The canonical reduced echelon
//! basis is unique, which makes subspace equality literal equality of bases.

use thiserror::Error;

use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("explicit zero at ({0}, {1})")]
    ExplicitZero(usize, usize),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subspace is not contained in the ambient subspace (basis vector {0} escapes)")]
    NotSubspace(usize),
}

/// Sparse vector: strictly increasing column indices, no zero values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, u32)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts, merges duplicate columns and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(u32, u32)>, field: PrimeField) -> Self {
        pairs.sort_unstable_by_key(|&(c, _)| c);
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (c, v) in pairs {
            let v = v % field.modulus();
            match entries.last_mut() {
                Some(last) if last.0 == c => last.1 = field.add(last.1, v),
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0);
        Self { entries }
    }

    pub fn from_dense(values: &[u32], field: PrimeField) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32, v % field.modulus()))
            .filter(|&(_, v)| v != 0)
            .collect();
        Self { entries }
    }

    pub fn unit(col: u32) -> Self {
        Self { entries: vec![(col, 1)] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(c, v) in &self.entries {
            out[c as usize] = v;
        }
        out
    }

    #[inline]
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, col: u32) -> u32 {
        match self.entries.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn leading(&self) -> Option<(u32, u32)> {
        self.entries.first().copied()
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> Self {
        if c.is_multiple_of(field.modulus()) {
            return Self::new();
        }
        Self { entries: self.entries.iter().map(|&(i, v)| (i, field.mul(v, c))).collect() }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: u32, other: &SparseVec, field: PrimeField) -> Self {
        if c == 0 || other.is_empty() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, field.mul(c, b[j].1)));
                j += 1;
            } else {
                let v = field.mul_add(a[i].1, c, b[j].1);
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    /// Applies a column relabelling.
    pub fn permuted(&self, perm: &[u32], field: PrimeField) -> Self {
        Self::from_pairs(self.entries.iter().map(|&(c, v)| (perm[c as usize], v)).collect(), field)
    }
}

const NONE: u32 = u32::MAX;

/// Incremental fully reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
    row_of_pivot: Vec<u32>,
    // For each non-pivot column, rows that may hold an entry there (superset).
    occurrences: Vec<Vec<u32>>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: vec![NONE; ncols],
            occurrences: vec![Vec::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.row_of_pivot[col as usize] != NONE
    }

    /// Residual of `v` after subtracting its components along pivot rows.
    /// Zero iff `v` lies in the row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let f = self.field;
        let mut out = v.clone();
        // Pivot rows carry no other pivot columns, so the coefficient of each
        // pivot column in `v` is final when it is read.
        for &(c, val) in v.entries() {
            let r = self.row_of_pivot[c as usize];
            if r != NONE {
                out = out.axpy(f.neg(val), &self.rows[r as usize], f);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let f = self.field;
        let r = self.reduce(v);
        let Some((pc, lead)) = r.leading() else {
            return false;
        };
        let r = r.scale(f.inv(lead).expect("nonzero leading entry"), f);
        let new_id = self.rows.len() as u32;

        let holders = std::mem::take(&mut self.occurrences[pc as usize]);
        for id in holders {
            let row = &self.rows[id as usize];
            let k = row.get(pc);
            if k == 0 {
                continue;
            }
            let updated = row.axpy(f.neg(k), &r, f);
            for &(c, _) in r.entries() {
                if c != pc && row.get(c) == 0 && updated.get(c) != 0 {
                    self.occurrences[c as usize].push(id);
                }
            }
            self.rows[id as usize] = updated;
        }
        for &(c, _) in &r.entries()[1..] {
            self.occurrences[c as usize].push(new_id);
        }
        self.row_of_pivot[pc as usize] = new_id;
        self.pivots.push(pc);
        self.rows.push(r);
        true
    }

    /// Canonical basis sorted by pivot column.
    pub fn into_subspace(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Option<SparseVec>> = self.rows.into_iter().map(Some).collect();
        let basis = order.iter().map(|&i| rows[i].take().unwrap()).collect();
        Subspace { field: self.field, ambient: self.ncols, basis }
    }

    /// Null space of the row space viewed as a linear system `Ax = 0`.
    pub fn kernel(&self) -> Subspace {
        let f = self.field;
        let mut vectors: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.ncols];
        for (id, row) in self.rows.iter().enumerate() {
            let pc = self.pivots[id];
            for &(c, v) in &row.entries()[1..] {
                vectors[c as usize].push((pc, f.neg(v)));
            }
        }
        let mut ech = Echelon::new(f, self.ncols);
        for (c, mut pairs) in vectors.into_iter().enumerate() {
            if self.row_of_pivot[c] != NONE {
                continue;
            }
            pairs.push((c as u32, 1));
            ech.insert(&SparseVec::from_pairs(pairs, f));
        }
        ech.into_subspace()
    }
}

/// Subspace given by its canonical reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn span<'a>(
        field: PrimeField,
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Subspace {
        let mut ech = Echelon::new(field, ambient);
        for v in vectors {
            ech.insert(v);
        }
        ech.into_subspace()
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Subspace {
        let basis = (0..ambient as u32).map(SparseVec::unit).collect();
        Subspace { field, ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<u32> {
        self.basis.iter().map(|v| v.leading().unwrap().0).collect()
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.field, self.ambient);
        for v in &self.basis {
            ech.insert(v);
        }
        ech
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon().contains(v)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.echelon().reduce(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let ech = other.echelon();
        Ok(self.basis.iter().all(|v| ech.contains(v)))
    }

    /// Canonical basis of a complement of `sub` inside `self`: the reduced
    /// echelon basis of the residues of `self`'s basis modulo `sub`.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Vec<SparseVec>, LinalgError> {
        quotient_dim(self, sub)?;
        let sub_ech = sub.echelon();
        let mut ech = Echelon::new(self.field, self.ambient);
        for v in &self.basis {
            ech.insert(&sub_ech.reduce(v));
        }
        // Residues modulo `sub` vanish on `sub`'s pivots, so re-reducing the
        // canonical rows keeps them canonical.
        Ok(ech.into_subspace().basis)
    }
}

/// Coordinate-list sparse matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, u32)>,
}

impl SparseMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, u32)>,
    ) -> Result<Self, LinalgError> {
        let mut seen = std::collections::HashSet::with_capacity(entries.len());
        for &(r, c, v) in &entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfBounds { row: r, col: c, rows, cols });
            }
            if v == 0 {
                return Err(LinalgError::ExplicitZero(r, c));
            }
            if !seen.insert((r, c)) {
                return Err(LinalgError::DuplicateEntry(r, c));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_dense(data: &[Vec<u32>], field: PrimeField) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (i, row) in data.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v % field.modulus() != 0 {
                    entries.push((i, j, v % field.modulus()));
                }
            }
        }
        Self { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, entries: (0..n).map(|i| (i, i, 1)).collect() }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, u32)] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        }
    }

    pub fn row_vectors(&self, field: PrimeField) -> Vec<SparseVec> {
        let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            rows[r].push((c as u32, v));
        }
        rows.into_iter().map(|r| SparseVec::from_pairs(r, field)).collect()
    }

    pub fn echelon(&self, field: PrimeField) -> Echelon {
        let mut ech = Echelon::new(field, self.cols);
        for row in self.row_vectors(field) {
            ech.insert(&row);
        }
        ech
    }
}

pub fn rank(m: &SparseMatrix, field: PrimeField) -> usize {
    m.echelon(field).rank()
}

pub fn kernel_basis(m: &SparseMatrix, field: PrimeField) -> Subspace {
    m.echelon(field).kernel()
}

/// `dim U - dim W`, after checking `W ⊆ U`.
pub fn quotient_dim(u: &Subspace, w: &Subspace) -> Result<usize, LinalgError> {
    if u.ambient != w.ambient {
        return Err(LinalgError::AmbientMismatch(u.ambient, w.ambient));
    }
    let ech = u.echelon();
    if let Some(i) = w.basis.iter().position(|v| !ech.contains(v)) {
        return Err(LinalgError::NotSubspace(i));
    }
    Ok(u.dim() - w.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn spec_examples() {
        let f = f5();
        assert_eq!(kernel_basis(&SparseMatrix::zero(3, 3), f).dim(), 3);
        assert_eq!(kernel_basis(&SparseMatrix::identity(3), f).dim(), 0);
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]], f);
        let k = kernel_basis(&m, f);
        assert_eq!(k.dim(), 1);
        // x + 2y = 0 -> (3, 1) scaled to leading 1: (1, 2)
        assert_eq!(k.basis()[0].to_dense(2), vec![1, 2]);
        assert!(k.contains(&SparseVec::from_dense(&[3, 1], f)));
        assert_eq!(rank(&SparseMatrix::identity(7), f), 7);
        assert_eq!(rank(&SparseMatrix::zero(4, 6), f), 0);
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(SparseMatrix::new(2, 2, vec![(2, 0, 1)]), Err(LinalgError::OutOfBounds { .. })));
        assert_eq!(SparseMatrix::new(2, 2, vec![(0, 0, 0)]), Err(LinalgError::ExplicitZero(0, 0)));
        assert_eq!(
            SparseMatrix::new(2, 2, vec![(0, 1, 1), (0, 1, 2)]),
            Err(LinalgError::DuplicateEntry(0, 1))
        );
    }

    #[test]
    fn quotients() {
        let f = f5();
        let full = Subspace::full(f, 3);
        let line = Subspace::span(f, 3, &[SparseVec::from_dense(&[1, 1, 0], f)]);
        assert_eq!(quotient_dim(&full, &line), Ok(2));
        assert_eq!(quotient_dim(&full, &full), Ok(0));
        assert_eq!(quotient_dim(&line, &full), Err(LinalgError::NotSubspace(0)));
        let other = Subspace::full(f, 4);
        assert_eq!(quotient_dim(&full, &other), Err(LinalgError::AmbientMismatch(3, 4)));
    }

    #[test]
    fn complement_is_reduced() {
        let f = f5();
        let u = Subspace::full(f, 3);
        let w = Subspace::span(f, 3, &[SparseVec::from_dense(&[1, 2, 0], f)]);
        let comp = u.complement_of(&w).unwrap();
        assert_eq!(comp.len(), 2);
        for v in &comp {
            assert_eq!(v.get(0), 0);
        }
    }

    #[test]
    fn axpy_cancels() {
        let f = f5();
        let a = SparseVec::from_pairs(vec![(0, 1), (3, 2)], f);
        let b = SparseVec::from_pairs(vec![(3, 1), (4, 4)], f);
        let c = a.axpy(3, &b, f);
        assert_eq!(c.entries(), &[(0, 1), (4, 2)]);
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        // about one entry in three nonzero, so ranks vary
        proptest::collection::vec(
            proptest::collection::vec(prop_oneof![2 => Just(0u32), 1 => 1u32..5], cols),
            rows,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn rank_equals_transpose_rank(data in matrix(50, 80)) {
            let f = f5();
            let m = SparseMatrix::from_dense(&data, f);
            prop_assert_eq!(rank(&m, f), rank(&m.transpose(), f));
        }

        #[test]
        fn kernel_is_invariant_under_row_order(data in matrix(30, 40), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let f = f5();
            let m = SparseMatrix::from_dense(&data, f);
            let mut shuffled = data.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let k = kernel_basis(&m, f);
            prop_assert_eq!(&k, &kernel_basis(&SparseMatrix::from_dense(&shuffled, f), f));
            prop_assert_eq!(rank(&m, f) + k.dim(), 40);
            for v in k.basis() {
                let x = v.to_dense(40);
                for row in &data {
                    let dot = row.iter().zip(&x).fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b));
                    prop_assert_eq!(dot, 0);
                }
            }
        }
    }
}
