use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FilteredComplex, HStep};
use crate::diagram::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub h: i32,
    pub q: i32,
    pub dim: usize,
}

/// Dimensions indexed by `(h, q)`; only nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedDims {
    pub entries: Vec<HomologyEntry>,
}

impl BigradedDims {
    pub fn from_map(map: BTreeMap<(i32, i32), usize>) -> Self {
        BigradedDims { entries: map.into_iter().filter(|&(_, d)| d > 0).map(|((h, q), dim)| HomologyEntry { h, q, dim }).collect() }
    }

    pub fn dim(&self, h: i32, q: i32) -> usize {
        self.entries.iter().find(|e| e.h == h && e.q == q).map_or(0, |e| e.dim)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.dim).sum()
    }

    pub fn total_in_degree(&self, h: i32) -> usize {
        self.entries.iter().filter(|e| e.h == h).map(|e| e.dim).sum()
    }

    /// `Σ (-1)^h dim q^q`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for e in &self.entries {
            let sign = if e.h.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(sign * e.dim as i64, e.q);
        }
        p
    }

    /// Poincaré polynomial as text, terms `t^h q^q` in `(h, q)` order.
    pub fn poincare_string(&self) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        self.entries
            .iter()
            .map(|e| {
                let c = if e.dim == 1 { String::new() } else { e.dim.to_string() };
                format!("{c}t^{}q^{}", e.h, e.q)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `dim F_q H^h`: classes representable by cycles in filtration level `≥ q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDim {
    pub h: i32,
    pub q: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredHomology {
    /// Total dimension per homological degree.
    pub totals: Vec<(i32, usize)>,
    /// Filtration profile, listed for every level present in the chain group.
    pub levels: Vec<LevelDim>,
    /// Associated graded dimensions of the induced filtration.
    pub graded_pieces: BigradedDims,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub total: usize,
    /// Present when the differential preserves `q`.
    pub bigraded: Option<BigradedDims>,
    /// Present when `h` is an honest grading.
    pub filtered: Option<FilteredHomology>,
}

impl HomologyReport {
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn total_in_degree(&self, h: i32) -> usize {
        self.filtered.as_ref().and_then(|f| f.totals.iter().find(|t| t.0 == h)).map_or(0, |t| t.1)
    }
}

fn block_rank(c: &FilteredComplex, rows: &[usize], cols: &[usize]) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    c.d().submatrix(rows, cols).rank()
}

pub(super) fn homology(c: &FilteredComplex) -> HomologyReport {
    if c.h_step() == HStep::AtLeastOne {
        let r = c.d().rank();
        return HomologyReport { total: c.dim() - 2 * r, bigraded: None, filtered: None };
    }
    let mut by_h: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, g) in c.gens().iter().enumerate() {
        by_h.entry(g.h).or_default().push(i);
    }
    if c.is_graded() {
        let bi = bigraded(c);
        let filtered = filtered_from_graded(&bi, &by_h, c);
        return HomologyReport { total: bi.total(), bigraded: Some(bi), filtered: Some(filtered) };
    }
    let filtered = filtered_profile(c, &by_h);
    HomologyReport { total: filtered.totals.iter().map(|t| t.1).sum(), bigraded: None, filtered: Some(filtered) }
}

fn bigraded(c: &FilteredComplex) -> BigradedDims {
    let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, g) in c.gens().iter().enumerate() {
        blocks.entry((g.h, g.q)).or_default().push(i);
    }
    let keys: Vec<(i32, i32)> = blocks.keys().copied().collect();
    let empty = Vec::new();
    let ranks: BTreeMap<(i32, i32), usize> = keys
        .par_iter()
        .map(|&(h, q)| {
            let cols = &blocks[&(h, q)];
            let rows = blocks.get(&(h + 1, q)).unwrap_or(&empty);
            ((h, q), block_rank(c, rows, cols))
        })
        .collect();
    let mut dims = BTreeMap::new();
    for (&(h, q), gens) in &blocks {
        let out = ranks[&(h, q)];
        let inc = ranks.get(&(h - 1, q)).copied().unwrap_or(0);
        dims.insert((h, q), gens.len() - out - inc);
    }
    BigradedDims::from_map(dims)
}

fn levels_of(c: &FilteredComplex, gens: &[usize]) -> Vec<i32> {
    let mut qs: Vec<i32> = gens.iter().map(|&i| c.gens()[i].q).collect();
    qs.sort_unstable();
    qs.dedup();
    qs
}

fn filtered_from_graded(bi: &BigradedDims, by_h: &BTreeMap<i32, Vec<usize>>, c: &FilteredComplex) -> FilteredHomology {
    let mut totals = Vec::new();
    let mut levels = Vec::new();
    for (&h, gens) in by_h {
        totals.push((h, bi.total_in_degree(h)));
        for q in levels_of(c, gens) {
            let dim = bi.entries.iter().filter(|e| e.h == h && e.q >= q).map(|e| e.dim).sum();
            levels.push(LevelDim { h, q, dim });
        }
    }
    FilteredHomology { totals, levels, graded_pieces: bi.clone() }
}

fn filtered_profile(c: &FilteredComplex, by_h: &BTreeMap<i32, Vec<usize>>) -> FilteredHomology {
    let empty = Vec::new();
    let per_h: Vec<(i32, usize, Vec<LevelDim>)> = by_h
        .par_iter()
        .map(|(&h, gens)| {
            let next = by_h.get(&(h + 1)).unwrap_or(&empty);
            let prev = by_h.get(&(h - 1)).unwrap_or(&empty);
            let rank_out = block_rank(c, next, gens);
            let rank_in = block_rank(c, gens, prev);
            let total = gens.len() - rank_out - rank_in;
            let mut levels = Vec::new();
            for s in levels_of(c, gens) {
                let upper: Vec<usize> = gens.iter().copied().filter(|&i| c.gens()[i].q >= s).collect();
                let lower: Vec<usize> = gens.iter().copied().filter(|&i| c.gens()[i].q < s).collect();
                let cycles = upper.len() - block_rank(c, next, &upper);
                let bounded = rank_in - block_rank(c, &lower, prev);
                levels.push(LevelDim { h, q: s, dim: cycles - bounded });
            }
            (h, total, levels)
        })
        .collect();
    let mut totals = Vec::new();
    let mut levels = Vec::new();
    let mut pieces = BTreeMap::new();
    for (h, total, lv) in per_h {
        totals.push((h, total));
        for (i, l) in lv.iter().enumerate() {
            let above = lv.get(i + 1).map_or(0, |n| n.dim);
            pieces.insert((h, l.q), l.dim - above);
        }
        levels.extend(lv);
    }
    FilteredHomology { totals, levels, graded_pieces: BigradedDims::from_map(pieces) }
}

#[cfg(test)]
mod tests {
    use super::super::{FilteredComplex, Generator, HStep};
    use crate::f2linalg::SparseMap;

    #[test]
    fn zero_differential_counts_generators() {
        let c = FilteredComplex::zero(vec![Generator::new(0, -1, "a"), Generator::new(0, 1, "b")]);
        let h = c.homology();
        let bi = h.bigraded.unwrap();
        assert_eq!(bi.dim(0, -1), 1);
        assert_eq!(bi.dim(0, 1), 1);
        assert_eq!(h.total, 2);
    }

    #[test]
    fn filtered_profile_of_raising_differential() {
        // a(0,0) -> b(1,2), plus a lone cycle c(0,0): homology is c at level 0.
        let gens = vec![Generator::new(0, 0, "a"), Generator::new(1, 2, "b"), Generator::new(0, 0, "c")];
        let c = FilteredComplex::new(gens, SparseMap::from_pairs(3, 3, [(1, 0)]), HStep::Exact).unwrap();
        let h = c.homology();
        assert!(h.bigraded.is_none());
        assert_eq!(h.total, 1);
        let f = h.filtered.unwrap();
        assert_eq!(f.graded_pieces.dim(0, 0), 1);
    }

    #[test]
    fn boundary_in_high_level_lowers_profile() {
        // x(0,0) -> y(1,0) + z(1,2); z alone at level 2 is homologous to y
        let gens = vec![Generator::new(0, 0, "x"), Generator::new(1, 0, "y"), Generator::new(1, 2, "z")];
        let c = FilteredComplex::new(gens, SparseMap::from_pairs(3, 3, [(1, 0), (2, 0)]), HStep::Exact).unwrap();
        let f = c.homology().filtered.unwrap();
        assert_eq!(f.totals, vec![(0, 0), (1, 1)]);
        assert_eq!(f.graded_pieces.dim(1, 2), 1);
        assert_eq!(f.graded_pieces.dim(1, 0), 0);
    }
}
