//! Exact linear algebra over the two-element field.
//!
//! Dense matrices are bit-packed row-major into `u64` words and reduced with
//! word-level XOR. A column-sparse representation ([`SparseMap`]) carries the
//! differentials and chain maps; it is converted to dense form for small
//! blocks and reduced sparsely otherwise.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[inline]
fn words_for(bits: usize) -> usize {
    (bits + WORD - 1) / WORD
}

/// A packed vector over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(wi * WORD + t);
                w &= w - 1;
            }
        }
        out
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVector({s})")
    }
}

/// Dense bit-packed matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                if b {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in col.support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range {}x{}", self.rows, self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range {}x{}", self.rows, self.cols);
        let idx = r * self.stride + c / WORD;
        let mask = 1u64 << (c % WORD);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    pub fn row(&self, r: usize) -> BitVector {
        let words = self.bits[r * self.stride..(r + 1) * self.stride].to_vec();
        BitVector { len: self.cols, words }
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).support() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let row = &self.bits[r * self.stride..(r + 1) * self.stride];
            let ones: u32 = row.iter().zip(&x.words).map(|(a, b)| (a & b).count_ones()).sum();
            if ones % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, LinalgError> {
        if other.rows != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).support() {
                let (dst, src) = (r * out.stride, k * other.stride);
                for w in 0..out.stride {
                    out.bits[dst + w] ^= other.bits[src + w];
                }
            }
        }
        Ok(out)
    }

    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        if dst == src {
            return;
        }
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for w in from_word..s {
            a[w] ^= b[w];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.bits.swap(a * s + w, b * s + w);
        }
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    /// Pivot choice is the first row at or below the current one with a set bit.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let word = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.bits[i * self.stride + word] & mask != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.bits[i * self.stride + word] & mask != 0 {
                    self.xor_rows(i, r, word);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Forward elimination only; enough for the rank.
    fn echelon_rank(&mut self) -> usize {
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let word = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.bits[i * self.stride + word] & mask != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in r + 1..self.rows {
                if self.bits[i * self.stride + word] & mask != 0 {
                    self.xor_rows(i, r, word);
                }
            }
            r += 1;
        }
        r
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().echelon_rank()
        } else {
            self.clone().echelon_rank()
        }
    }

    /// Returns some `x` with `M x = b`, or `None` if `b` is not in the image.
    /// Free variables are set to zero. The solution is re-checked before return.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).support() {
                aug.set(r, c, true);
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                x.set(c, true);
            }
        }
        let check = self.mul_vec(&x)?;
        assert!(check == *b, "solve produced a vector failing re-multiplication");
        Ok(Some(x))
    }

    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, drawn from the columns of `self`.
    pub fn image_basis(&self) -> Vec<BitVector> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        pivots.into_iter().map(|c| self.column(c)).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn solve(m: &BitMatrix, b: &BitVector) -> Result<Option<BitVector>, LinalgError> {
    m.solve(b)
}

pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.kernel_basis()
}

pub fn image_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.image_basis()
}

/// Column-sparse F2 matrix: `cols[j]` holds the sorted row indices of the
/// nonzero entries of column `j`. Coefficients are implicitly 1.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMap {
    rows: usize,
    cols: Vec<Vec<u32>>,
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorts and cancels repeated indices in pairs.
pub(crate) fn normalize_mod2(v: &mut Vec<u32>) {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    *v = out;
}

impl SparseMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMap { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMap { rows: n, cols: (0..n as u32).map(|i| vec![i]).collect() }
    }

    /// Entries given as `(row, col)`; repeated pairs cancel mod 2.
    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in pairs {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range {rows}x{cols}");
            m.cols[c].push(r as u32);
        }
        for col in &mut m.cols {
            normalize_mod2(col);
        }
        m
    }

    /// Columns are normalized (sorted, mod-2 cancelled) on the way in.
    pub fn from_columns(rows: usize, mut cols: Vec<Vec<u32>>) -> Self {
        for col in &mut cols {
            normalize_mod2(col);
            if let Some(&last) = col.last() {
                assert!((last as usize) < rows, "row {last} out of range {rows}");
            }
        }
        SparseMap { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[u32] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].binary_search(&(r as u32)).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// All `(row, col)` entries, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, rows)| rows.iter().map(move |&r| (r as usize, c)))
    }

    pub fn add(&self, other: &SparseMap) -> SparseMap {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()), "shape mismatch in add");
        SparseMap { rows: self.rows, cols: self.cols.iter().zip(&other.cols).map(|(a, b)| sym_diff(a, b)).collect() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SparseMap) -> SparseMap {
        assert_eq!(self.cols(), other.rows, "shape mismatch in compose");
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: Vec<u32> = Vec::new();
                for &k in col {
                    acc.extend_from_slice(&self.cols[k as usize]);
                }
                normalize_mod2(&mut acc);
                acc
            })
            .collect();
        SparseMap { rows: self.rows, cols }
    }

    pub fn transpose(&self) -> SparseMap {
        let mut t = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for &r in col {
                t[r as usize].push(c as u32);
            }
        }
        SparseMap { rows: self.cols(), cols: t }
    }

    pub fn apply(&self, support: &[u32]) -> Vec<u32> {
        let mut acc = Vec::new();
        for &k in support {
            acc.extend_from_slice(&self.cols[k as usize]);
        }
        normalize_mod2(&mut acc);
        acc
    }

    /// Restriction to the given row and column index lists (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMap {
        let mut row_pos = HashMap::with_capacity(rows.len());
        for (i, &r) in rows.iter().enumerate() {
            row_pos.insert(r as u32, i as u32);
        }
        let cols = cols
            .iter()
            .map(|&c| {
                let mut v: Vec<u32> = self.cols[c].iter().filter_map(|r| row_pos.get(r).copied()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        SparseMap { rows: rows.len(), cols }
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols());
        for (r, c) in self.entries() {
            m.set(r, c, true);
        }
        m
    }

    pub fn from_dense(m: &BitMatrix) -> SparseMap {
        let t = m.transpose();
        SparseMap {
            rows: m.rows(),
            cols: (0..m.cols()).map(|c| t.row(c).support().into_iter().map(|r| r as u32).collect()).collect(),
        }
    }

    /// Rank over F2. Dense packed elimination for moderate sizes, sparse
    /// column reduction otherwise.
    pub fn rank(&self) -> usize {
        let (r, c) = (self.rows, self.cols());
        if r == 0 || c == 0 || self.is_zero() {
            return 0;
        }
        if (r as u64) * (c as u64) <= 64 * 1024 * 1024 {
            self.to_dense().rank()
        } else {
            sparse_rank(&self.cols)
        }
    }
}

impl fmt::Debug for SparseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMap {}x{} {:?}", self.rows, self.cols(), self.entries().collect::<Vec<_>>())
    }
}

/// Column reduction keyed on the lowest set row (persistence style).
pub fn sparse_rank(cols: &[Vec<u32>]) -> usize {
    let mut pivot_of: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for col in cols {
        let mut cur = col.clone();
        while let Some(&low) = cur.last() {
            match pivot_of.get(&low) {
                Some(p) => cur = sym_diff(&cur, p),
                None => break,
            }
        }
        if let Some(&low) = cur.last() {
            pivot_of.insert(low, cur);
            rank += 1;
        }
    }
    rank
}

/// Sparse linear system `A x = b` over F2, rows added one at a time.
/// Each stored row is keyed by its smallest variable; back-substitution
/// sets free variables to zero.
#[derive(Default)]
pub struct SparseSystem {
    vars: usize,
    pivots: HashMap<u32, (Vec<u32>, bool)>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(vars: usize) -> Self {
        SparseSystem { vars, pivots: HashMap::new(), inconsistent: false }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Adds the equation `sum(vars) = rhs`. Repeated variables cancel.
    pub fn add_equation(&mut self, mut vars: Vec<u32>, mut rhs: bool) {
        normalize_mod2(&mut vars);
        while let Some(&lead) = vars.first() {
            match self.pivots.get(&lead) {
                Some((row, r)) => {
                    vars = sym_diff(&vars, row);
                    rhs ^= r;
                }
                None => {
                    self.pivots.insert(lead, (vars, rhs));
                    return;
                }
            }
        }
        if rhs {
            self.inconsistent = true;
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn solve(&self) -> Option<Vec<bool>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![false; self.vars];
        let mut keys: Vec<u32> = self.pivots.keys().copied().collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        for k in keys {
            let (row, rhs) = &self.pivots[&k];
            let mut val = *rhs;
            for &v in &row[1..] {
                val ^= x[v as usize];
            }
            x[k as usize] = val;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(0.5) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(BitMatrix::zeros(7, 5).rank(), 0);
        assert_eq!(BitMatrix::identity(9).rank(), 9);
        assert_eq!(BitMatrix::identity(130).rank(), 130);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = BitVector::from_bools(&[true, false, true, true]);
        assert_eq!(BitMatrix::identity(4).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(BitMatrix::zeros(4, 3).solve(&b).unwrap(), None);
        assert!(BitMatrix::zeros(3, 3).solve(&b).is_err());
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(BitMatrix::identity(6).kernel_basis().is_empty());
        assert_eq!(BitMatrix::zeros(4, 6).kernel_basis().len(), 6);
    }

    #[test]
    fn consistent_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 64, 80);
            let x0 = BitVector::from_bools(&(0..80).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn rank_nullity_and_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (r, c) in [(10, 30), (65, 64), (1, 200), (129, 70)] {
            let m = random_matrix(&mut rng, r, c);
            let ker = m.kernel_basis();
            assert_eq!(ker.len() + m.rank(), c);
            for v in &ker {
                assert!(m.mul_vec(v).unwrap().is_zero());
            }
            assert_eq!(m.rank(), m.transpose().rank());
            assert_eq!(m.image_basis().len(), m.rank());
        }
    }

    #[test]
    fn sparse_and_dense_ranks_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (r, c) = (rng.gen_range(1..60), rng.gen_range(1..60));
            let m = random_matrix(&mut rng, r, c);
            let s = SparseMap::from_dense(&m);
            assert_eq!(sparse_rank(s.columns()), m.rank());
            assert_eq!(s.to_dense(), m);
        }
    }

    #[test]
    fn sparse_compose_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 13, 9);
        let b = random_matrix(&mut rng, 9, 17);
        let prod = SparseMap::from_dense(&a).compose(&SparseMap::from_dense(&b));
        assert_eq!(prod.to_dense(), a.mul(&b).unwrap());
    }

    #[test]
    fn sparse_system_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 40, 50);
        let x0: Vec<bool> = (0..50).map(|_| rng.gen_bool(0.5)).collect();
        let b = m.mul_vec(&BitVector::from_bools(&x0)).unwrap();
        let mut sys = SparseSystem::new(50);
        for r in 0..40 {
            sys.add_equation(m.row(r).support().into_iter().map(|v| v as u32).collect(), b.get(r));
        }
        let x = sys.solve().unwrap();
        assert_eq!(m.mul_vec(&BitVector::from_bools(&x)).unwrap(), b);

        let mut bad = SparseSystem::new(2);
        bad.add_equation(vec![0, 1], true);
        bad.add_equation(vec![1, 0], false);
        assert!(bad.solve().is_none());
    }

    #[test]
    fn from_pairs_cancels_duplicates() {
        let m = SparseMap::from_pairs(3, 3, [(0, 0), (1, 0), (0, 0), (2, 2)]);
        assert_eq!(m.entries().collect::<Vec<_>>(), vec![(1, 0), (2, 2)]);
    }
}
