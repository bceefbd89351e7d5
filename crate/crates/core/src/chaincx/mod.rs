//! Finite filtered chain complexes over F2.
//!
//! Generators carry a homological degree `h` and a quantum filtration level
//! `q`. Differentials raise `h` by one and never lower `q`.

mod homology;
mod homotopy;
mod pages;
mod reduce;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::SparseMap;

pub use homology::{BigradedDims, FilteredHomology, HomologyEntry, HomologyReport, LevelDim};
pub use homotopy::{homotopic, HomotopyOptions};
pub use pages::{spectral_pages, Page, PageEntry, SpectralPages};
pub use reduce::{reduce, Eliminator, Reduction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("cannot eliminate pair ({0}, {1}): {2}")]
    InvalidPair(usize, usize, String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub h: i32,
    pub q: i32,
    pub tag: String,
}

impl Generator {
    pub fn new(h: i32, q: i32, tag: impl Into<String>) -> Self {
        Generator { h, q, tag: tag.into() }
    }
}

/// How much the differential raises `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HStep {
    Exact,
    /// Differential components may raise `h` by any positive amount, as for
    /// decorated cubes with higher face maps.
    AtLeastOne,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredComplex {
    gens: Vec<Generator>,
    d: SparseMap,
    h_step: HStep,
}

/// One violated invariant with the generators that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub source: usize,
    pub target: usize,
}

impl FilteredComplex {
    /// Builds a complex without checking it; see [`FilteredComplex::verify`].
    pub fn new(gens: Vec<Generator>, d: SparseMap, h_step: HStep) -> Result<Self, ChainError> {
        if d.rows() != gens.len() || d.cols() != gens.len() {
            return Err(ChainError::DimensionMismatch { expected: gens.len(), got: d.cols().max(d.rows()) });
        }
        Ok(FilteredComplex { gens, d, h_step })
    }

    pub fn zero(gens: Vec<Generator>) -> Self {
        let n = gens.len();
        FilteredComplex { gens, d: SparseMap::zeros(n, n), h_step: HStep::Exact }
    }

    /// The one-generator complex in degree (0, 0).
    pub fn unit() -> Self {
        Self::zero(vec![Generator::new(0, 0, "")])
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn d(&self) -> &SparseMap {
        &self.d
    }

    pub fn h_step(&self) -> HStep {
        self.h_step
    }

    /// True when every differential entry preserves `q`.
    pub fn is_graded(&self) -> bool {
        self.d.entries().all(|(y, x)| self.gens[y].q == self.gens[x].q)
    }

    /// Lists every violated invariant: `d² = 0`, the `h` step and the filtration.
    pub fn verify(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (y, x) in self.d.entries() {
            let (gx, gy) = (&self.gens[x], &self.gens[y]);
            let h_ok = match self.h_step {
                HStep::Exact => gy.h == gx.h + 1,
                HStep::AtLeastOne => gy.h > gx.h,
            };
            if !h_ok {
                out.push(Violation { kind: "h_step".into(), source: x, target: y });
            }
            if gy.q < gx.q {
                out.push(Violation { kind: "filtration".into(), source: x, target: y });
            }
        }
        let dd = self.d.compose(&self.d);
        out.extend(dd.entries().map(|(y, x)| Violation { kind: "d_squared".into(), source: x, target: y }));
        out
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_empty()
    }

    pub fn shift(&self, dh: i32, dq: i32) -> FilteredComplex {
        let gens = self.gens.iter().map(|g| Generator { h: g.h + dh, q: g.q + dq, tag: g.tag.clone() }).collect();
        FilteredComplex { gens, d: self.d.clone(), h_step: self.h_step }
    }

    pub fn retag(&self, f: impl Fn(&str) -> String) -> FilteredComplex {
        let gens = self.gens.iter().map(|g| Generator { h: g.h, q: g.q, tag: f(&g.tag) }).collect();
        FilteredComplex { gens, d: self.d.clone(), h_step: self.h_step }
    }

    fn combined_step(a: HStep, b: HStep) -> HStep {
        if a == HStep::Exact && b == HStep::Exact {
            HStep::Exact
        } else {
            HStep::AtLeastOne
        }
    }

    /// `self ⊕ other`, generators of `self` first.
    pub fn direct_sum(&self, other: &FilteredComplex) -> FilteredComplex {
        let n = self.dim();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut cols: Vec<Vec<u32>> = self.d.columns().to_vec();
        cols.extend(other.d.columns().iter().map(|c| c.iter().map(|&r| r + n as u32).collect()));
        FilteredComplex { gens, d: SparseMap::from_columns(n + other.dim(), cols), h_step: Self::combined_step(self.h_step, other.h_step) }
    }

    /// Tensor product. Generator `(i, j)` sits at index `i * other.dim() + j`
    /// with tag `"a⊗b"` (or just one tag when the other is empty).
    pub fn tensor(&self, other: &FilteredComplex) -> FilteredComplex {
        let m = other.dim();
        let mut gens = Vec::with_capacity(self.dim() * m);
        for a in &self.gens {
            for b in &other.gens {
                let tag = match (a.tag.is_empty(), b.tag.is_empty()) {
                    (true, _) => b.tag.clone(),
                    (_, true) => a.tag.clone(),
                    _ => format!("{}⊗{}", a.tag, b.tag),
                };
                gens.push(Generator { h: a.h + b.h, q: a.q + b.q, tag });
            }
        }
        let mut cols = Vec::with_capacity(gens.len());
        for i in 0..self.dim() {
            for j in 0..m {
                let mut col: Vec<u32> = self.d.column(i).iter().map(|&r| r * m as u32 + j as u32).collect();
                col.extend(other.d.column(j).iter().map(|&r| (i * m) as u32 + r));
                cols.push(col);
            }
        }
        FilteredComplex { d: SparseMap::from_columns(gens.len(), cols), gens, h_step: Self::combined_step(self.h_step, other.h_step) }
    }

    /// Mapping cone of `f: C → D`. Source generators come first, shifted by
    /// `h_degree - 1` in `h` and `q_degree` in `q` so that `f` becomes part
    /// of a differential raising `h` by one and preserving the filtration.
    pub fn cone(f: &FilteredChainMap, source: &FilteredComplex, target: &FilteredComplex) -> Result<FilteredComplex, ChainError> {
        f.check_shape(source, target)?;
        if !f.is_chain_map(source, target) {
            return Err(ChainError::NotAChainMap("f∘d ≠ d'∘f".into()));
        }
        let n = source.dim();
        let shifted = source.shift(f.h_degree - 1, f.q_degree);
        let mut gens = shifted.gens;
        gens.extend(target.gens.iter().cloned());
        let mut cols = Vec::with_capacity(gens.len());
        for x in 0..n {
            let mut col: Vec<u32> = source.d.column(x).to_vec();
            col.extend(f.matrix.column(x).iter().map(|&r| r + n as u32));
            cols.push(col);
        }
        cols.extend(target.d.columns().iter().map(|c| c.iter().map(|&r| r + n as u32).collect()));
        let h_step = Self::combined_step(source.h_step, target.h_step);
        Ok(FilteredComplex { d: SparseMap::from_columns(gens.len(), cols), gens, h_step })
    }

    /// Permutation carrying `self` onto `other` by matching tags, if the two
    /// complexes agree generator for generator.
    pub fn match_by_tags(&self, other: &FilteredComplex) -> Option<Vec<usize>> {
        if self.dim() != other.dim() {
            return None;
        }
        let index: HashMap<&str, usize> = other.gens.iter().enumerate().map(|(i, g)| (g.tag.as_str(), i)).collect();
        if index.len() != other.dim() {
            return None;
        }
        let perm: Vec<usize> = self.gens.iter().map(|g| index.get(g.tag.as_str()).copied()).collect::<Option<_>>()?;
        for (i, &j) in perm.iter().enumerate() {
            if self.gens[i] != other.gens[j] {
                return None;
            }
        }
        for x in 0..self.dim() {
            let mut mapped: Vec<u32> = self.d.column(x).iter().map(|&r| perm[r as usize] as u32).collect();
            mapped.sort_unstable();
            if mapped != other.d.column(perm[x]) {
                return None;
            }
        }
        Some(perm)
    }

    /// Generator-for-generator equality up to reordering.
    pub fn same_as(&self, other: &FilteredComplex) -> bool {
        self.match_by_tags(other).is_some()
    }

    /// The part of the differential preserving `q`.
    pub fn associated_graded(&self) -> FilteredComplex {
        let cols = (0..self.dim())
            .map(|x| self.d.column(x).iter().copied().filter(|&y| self.gens[y as usize].q == self.gens[x].q).collect())
            .collect();
        FilteredComplex { gens: self.gens.clone(), d: SparseMap::from_columns(self.dim(), cols), h_step: self.h_step }
    }

    pub fn homology(&self) -> HomologyReport {
        homology::homology(self)
    }
}

impl fmt::Debug for FilteredComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FilteredComplex(dim {}, nnz {})", self.dim(), self.d.nnz())
    }
}

/// An F2-linear map between complexes with fixed bidegree shift. The map is
/// filtered when every entry `x → y` has `q(y) ≥ q(x) + q_degree`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredChainMap {
    pub matrix: SparseMap,
    pub h_degree: i32,
    pub q_degree: i32,
}

impl FilteredChainMap {
    pub fn new(matrix: SparseMap, h_degree: i32, q_degree: i32) -> Self {
        FilteredChainMap { matrix, h_degree, q_degree }
    }

    pub fn identity(c: &FilteredComplex) -> Self {
        FilteredChainMap::new(SparseMap::identity(c.dim()), 0, 0)
    }

    pub fn zero(source: &FilteredComplex, target: &FilteredComplex) -> Self {
        FilteredChainMap::new(SparseMap::zeros(target.dim(), source.dim()), 0, 0)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn check_shape(&self, source: &FilteredComplex, target: &FilteredComplex) -> Result<(), ChainError> {
        if self.matrix.cols() != source.dim() || self.matrix.rows() != target.dim() {
            return Err(ChainError::ShapeMismatch(format!(
                "map is {}x{}, complexes have dims {} -> {}",
                self.matrix.rows(),
                self.matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FilteredChainMap) -> FilteredChainMap {
        FilteredChainMap::new(self.matrix.compose(&other.matrix), self.h_degree + other.h_degree, self.q_degree + other.q_degree)
    }

    /// Sum of two maps; the q-degree is the smaller of the two.
    pub fn add(&self, other: &FilteredChainMap) -> FilteredChainMap {
        FilteredChainMap::new(self.matrix.add(&other.matrix), self.h_degree, self.q_degree.min(other.q_degree))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_chain_map(&self, source: &FilteredComplex, target: &FilteredComplex) -> bool {
        self.check_shape(source, target).is_ok() && target.d.compose(&self.matrix) == self.matrix.compose(&source.d)
    }

    /// Entries violating the bidegree contract.
    pub fn degree_violations(&self, source: &FilteredComplex, target: &FilteredComplex) -> Vec<(usize, usize)> {
        self.matrix
            .entries()
            .filter(|&(y, x)| {
                let (gx, gy) = (&source.gens[x], &target.gens[y]);
                let h_ok = match (source.h_step, target.h_step) {
                    (HStep::Exact, HStep::Exact) => gy.h == gx.h + self.h_degree,
                    _ => true,
                };
                !h_ok || gy.q < gx.q + self.q_degree
            })
            .map(|(y, x)| (x, y))
            .collect()
    }

    pub fn is_filtered(&self, source: &FilteredComplex, target: &FilteredComplex) -> bool {
        self.degree_violations(source, target).is_empty()
    }

    /// Rank of the map induced on homology.
    pub fn homology_rank(&self, source: &FilteredComplex, target: &FilteredComplex) -> usize {
        // rank f_* = dim(f(Z) + B') - dim B'
        let z = cycle_basis(source);
        let cols: Vec<Vec<u32>> = z.iter().map(|c| self.matrix.apply(c)).collect();
        let mut with_b: Vec<Vec<u32>> = target.d.columns().to_vec();
        let rb = crate::f2linalg::sparse_rank(&with_b);
        with_b.extend(cols);
        crate::f2linalg::sparse_rank(&with_b) - rb
    }
}

impl fmt::Debug for FilteredChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FilteredChainMap({}x{}, h {}, q {}, nnz {})", self.matrix.rows(), self.matrix.cols(), self.h_degree, self.q_degree, self.matrix.nnz())
    }
}

/// Basis of the cycles of `c`, as sorted supports.
pub(crate) fn cycle_basis(c: &FilteredComplex) -> Vec<Vec<u32>> {
    // Reduce columns of d while tracking combinations; zero columns give cycles.
    let n = c.dim();
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut combo: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut cycles = Vec::new();
    for x in 0..n {
        let mut cur = c.d.column(x).to_vec();
        let mut comb = vec![x as u32];
        while let Some(&low) = cur.last() {
            match pivot_of.get(&low) {
                Some(&p) => {
                    cur = sym_diff(&cur, &reduced[p]);
                    comb = sym_diff(&comb, &combo[p]);
                }
                None => break,
            }
        }
        if let Some(&low) = cur.last() {
            pivot_of.insert(low, reduced.len());
        } else {
            cycles.push(comb.clone());
        }
        reduced.push(cur);
        combo.push(comb);
    }
    cycles
}

pub(crate) fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
    crate::f2linalg::normalize_mod2(&mut v);
    v
}
