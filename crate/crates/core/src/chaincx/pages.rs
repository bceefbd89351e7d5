use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ChainError, FilteredComplex, HStep};
use crate::f2linalg::{BitMatrix, BitVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub h: i32,
    pub q: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    /// Filtration jump of this page's differential.
    pub r: usize,
    pub name: Option<String>,
    pub entries: Vec<PageEntry>,
    pub total: usize,
    /// Rank of `d_r`, known once the next page is computed.
    pub differential_rank: Option<usize>,
}

impl Page {
    pub fn dim(&self, h: i32, q: i32) -> usize {
        self.entries.iter().find(|e| e.h == h && e.q == q).map_or(0, |e| e.dim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPages {
    /// Quantum degrees per filtration step.
    pub step: i32,
    pub pages: Vec<Page>,
    /// Index of the page that equals homology of the associated graded.
    pub khovanov_page: usize,
    /// First page equal to every later one.
    pub stable_page: usize,
}

impl SpectralPages {
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn khovanov(&self) -> &Page {
        self.page(self.khovanov_page).expect("khovanov page computed")
    }

    pub fn stable(&self) -> &Page {
        self.page(self.stable_page).expect("stable page computed")
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

struct Degree {
    /// Indices of generators in this `h`, and their filtration levels.
    gens: Vec<usize>,
    levels: Vec<i64>,
}

/// Pages `E_r` for `r = 0..=r_max` of the spectral sequence of the
/// `q`-filtration, with `Z_r^p = F_p ∩ d⁻¹ F_{p+r}` and
/// `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`.
/// Page 0 is the associated graded complex and page 1 its homology (the
/// Khovanov page). Pages are computed at least until they stabilize.
///
/// Pages from 1 on are computed on the complex reduced by `q`-preserving
/// cancellation, which leaves them unchanged.
pub fn spectral_pages(c: &FilteredComplex, r_max: usize) -> Result<SpectralPages, ChainError> {
    if c.h_step() != HStep::Exact {
        return Err(ChainError::InvalidComplex("spectral pages need an honest h-grading".into()));
    }
    let small = super::reduce(c).small;
    pages_on(c, &small, r_max)
}

/// Page 0 from `c`, later pages from `work`, which must be filtered
/// homotopy equivalent to `c` through maps of filtration degree 0.
fn pages_on(orig: &FilteredComplex, c: &FilteredComplex, r_max: usize) -> Result<SpectralPages, ChainError> {
    let qs: Vec<i32> = orig.gens().iter().map(|g| g.q).collect();
    let qmin = qs.iter().copied().min().unwrap_or(0);
    let step = qs.iter().fold(0, |acc, &q| gcd(acc, q - qmin)).max(1);
    let level = |q: i32| ((q - qmin) / step) as i64;
    let top = qs.iter().map(|&q| level(q)).max().unwrap_or(0) as usize;
    // beyond this every d_r vanishes
    let stable_at = top + 1;
    let last = r_max.max(stable_at);

    let mut by_h: BTreeMap<i32, Degree> = BTreeMap::new();
    for (i, g) in c.gens().iter().enumerate() {
        let e = by_h.entry(g.h).or_insert_with(|| Degree { gens: Vec::new(), levels: Vec::new() });
        e.gens.push(i);
        e.levels.push(level(g.q));
    }
    let hs: Vec<i32> = by_h.keys().copied().collect();
    let mut pos = vec![0usize; c.dim()];
    for d in by_h.values() {
        for (k, &g) in d.gens.iter().enumerate() {
            pos[g] = k;
        }
    }
    let empty = Degree { gens: Vec::new(), levels: Vec::new() };

    // Z_r^p inside C_h as vectors over C_h's local indices.
    let cycles = |h: i32, p: i64, r: i64| -> Vec<BitVector> {
        let here = &by_h[&h];
        let next = by_h.get(&(h + 1)).unwrap_or(&empty);
        let cols: Vec<usize> = (0..here.gens.len()).filter(|&k| here.levels[k] >= p).collect();
        let rows: Vec<usize> = (0..next.gens.len()).filter(|&k| next.levels[k] < p + r).collect();
        let mut m = BitMatrix::zeros(rows.len(), cols.len());
        let mut row_of = vec![usize::MAX; next.gens.len()];
        for (i, &k) in rows.iter().enumerate() {
            row_of[k] = i;
        }
        for (j, &k) in cols.iter().enumerate() {
            for &y in c.d().column(here.gens[k]) {
                let ri = row_of[pos[y as usize]];
                if ri != usize::MAX {
                    m.set(ri, j, true);
                }
            }
        }
        m.kernel_basis()
            .into_iter()
            .map(|v| BitVector::from_support(here.gens.len(), v.support().into_iter().map(|j| cols[j])))
            .collect()
    };
    let boundary = |h: i32, v: &BitVector| -> BitVector {
        let prev = &by_h[&(h - 1)];
        let here = &by_h[&h];
        let mut out = BitVector::zeros(here.gens.len());
        for j in v.support() {
            for &y in c.d().column(prev.gens[j]) {
                out.flip(pos[y as usize]);
            }
        }
        out
    };
    let span_rank = |len: usize, vs: &[BitVector]| -> usize {
        if vs.is_empty() {
            return 0;
        }
        BitMatrix::from_columns(len, vs).rank()
    };

    let page_entries = |r: usize| -> Vec<PageEntry> {
        let r = r as i64;
        hs.par_iter()
            .flat_map_iter(|&h| {
                let here = &by_h[&h];
                let mut ps: Vec<i64> = here.levels.clone();
                ps.sort_unstable();
                ps.dedup();
                let has_prev = by_h.contains_key(&(h - 1));
                ps.into_iter()
                    .filter_map(|p| {
                        let z = cycles(h, p, r);
                        if z.is_empty() {
                            return None;
                        }
                        let mut denom = cycles(h, p + 1, r - 1);
                        if has_prev {
                            for v in cycles(h - 1, p - r + 1, r - 1) {
                                denom.push(boundary(h, &v));
                            }
                        }
                        let dim = z.len() - span_rank(here.gens.len(), &denom);
                        (dim > 0).then_some(PageEntry { h, q: qmin + (p as i32) * step, dim })
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    };

    let graded_counts = || -> Vec<PageEntry> {
        let mut counts: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        for g in orig.gens() {
            *counts.entry((g.h, g.q)).or_insert(0) += 1;
        }
        counts.into_iter().map(|((h, q), dim)| PageEntry { h, q, dim }).collect()
    };
    let mut pages: Vec<Page> = (0..=last)
        .map(|r| {
            let entries = if r == 0 { graded_counts() } else { page_entries(r) };
            let total = entries.iter().map(|e| e.dim).sum();
            Page { r, name: None, entries, total, differential_rank: None }
        })
        .collect();
    for i in 0..pages.len().saturating_sub(1) {
        pages[i].differential_rank = Some((pages[i].total - pages[i + 1].total) / 2);
    }
    if let Some(l) = pages.last_mut() {
        l.differential_rank = Some(0);
    }
    let stable_page = (0..pages.len()).find(|&i| pages[i..].iter().all(|p| p.entries == pages[i].entries)).unwrap_or(last);
    pages[1.min(last)].name = Some("khovanov".into());
    if stable_page != 1 {
        pages[stable_page].name = Some("stable".into());
    } else {
        pages[1].name = Some("khovanov (stable)".into());
    }
    pages.truncate(r_max.max(stable_page) + 1);
    Ok(SpectralPages { step, pages, khovanov_page: 1, stable_page })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincx::Generator;
    use crate::f2linalg::SparseMap;

    #[test]
    fn graded_complex_is_stable_from_page_one() {
        let gens = vec![Generator::new(0, 0, "a"), Generator::new(1, 0, "b"), Generator::new(0, 2, "c")];
        let c = FilteredComplex::new(gens, SparseMap::from_pairs(3, 3, [(1, 0)]), HStep::Exact).unwrap();
        let s = spectral_pages(&c, 3).unwrap();
        assert_eq!(s.page(0).unwrap().total, 3);
        assert_eq!(s.khovanov().total, 1);
        assert!(s.stable_page <= 1);
    }

    #[test]
    fn raising_differential_dies_on_page_one() {
        // x(0,0) -> y(1,2): page 1 keeps both, d_1 kills them
        let gens = vec![Generator::new(0, 0, "x"), Generator::new(1, 2, "y")];
        let c = FilteredComplex::new(gens, SparseMap::from_pairs(2, 2, [(1, 0)]), HStep::Exact).unwrap();
        let s = spectral_pages(&c, 2).unwrap();
        assert_eq!(s.step, 2);
        assert_eq!(s.khovanov().total, 2);
        assert_eq!(s.khovanov().differential_rank, Some(1));
        assert_eq!(s.page(2).unwrap().total, 0);
        assert_eq!(s.stable_page, 2);
    }

    #[test]
    fn reduction_leaves_pages_alone() {
        use crate::diagram::LinkDiagram;
        use crate::tqft::{cube_complex, FrobeniusRule};
        for pd in ["X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", "X(1,2,5,4) X(3,7,6,5) X(4,6,8,1) X(7,3,2,8)"] {
            let c = cube_complex(&LinkDiagram::parse(pd).unwrap(), &FrobeniusRule::bar_natan()).unwrap();
            assert_eq!(spectral_pages(&c, 4).unwrap(), pages_on(&c, &c, 4).unwrap());
        }
    }
}
