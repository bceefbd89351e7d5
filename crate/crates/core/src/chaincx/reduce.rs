use std::collections::BTreeSet;

use super::{sym_diff, ChainError, FilteredChainMap, FilteredComplex};
use crate::f2linalg::SparseMap;

/// Gaussian elimination of a complex, one cancelled pair at a time, keeping
/// track of the projection `π`, the inclusion `ι` and the homotopy `H` with
/// `π ι = id` and `ι π = id + dH + Hd`.
pub struct Eliminator {
    big: FilteredComplex,
    alive: Vec<bool>,
    cols: Vec<BTreeSet<u32>>,
    rows: Vec<BTreeSet<u32>>,
    /// `ι(z)` for live `z`, as a set of big generators.
    iota: Vec<Vec<u32>>,
    /// Row `w` of `π` for live `w`.
    pi_rows: Vec<Vec<u32>>,
    /// `H = Σ ι(x) ⊗ π_row(y)` over cancelled pairs.
    homotopy_terms: Vec<(Vec<u32>, Vec<u32>)>,
}

/// Output of an elimination: the small complex and the tracked maps.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub small: FilteredComplex,
    /// Indices in the big complex of the surviving generators.
    pub survivors: Vec<usize>,
    pub pi: FilteredChainMap,
    pub iota: FilteredChainMap,
    homotopy_terms: Vec<(Vec<u32>, Vec<u32>)>,
    big_dim: usize,
}

impl Eliminator {
    pub fn new(c: &FilteredComplex) -> Self {
        let n = c.dim();
        let mut cols = vec![BTreeSet::new(); n];
        let mut rows = vec![BTreeSet::new(); n];
        for (y, x) in c.d().entries() {
            cols[x].insert(y as u32);
            rows[y].insert(x as u32);
        }
        Eliminator {
            big: c.clone(),
            alive: vec![true; n],
            cols,
            rows,
            iota: (0..n as u32).map(|i| vec![i]).collect(),
            pi_rows: (0..n as u32).map(|i| vec![i]).collect(),
            homotopy_terms: Vec::new(),
        }
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.alive[i]
    }

    /// Current differential entry `x → y`.
    pub fn entry(&self, x: usize, y: usize) -> bool {
        self.cols[x].contains(&(y as u32))
    }

    pub fn column(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.cols[x].iter().map(|&y| y as usize)
    }

    /// Cancels the entry `x → y`, which must be present and preserve `q`.
    pub fn eliminate(&mut self, x: usize, y: usize) -> Result<(), ChainError> {
        if !self.alive[x] || !self.alive[y] {
            return Err(ChainError::InvalidPair(x, y, "generator already cancelled".into()));
        }
        if !self.entry(x, y) {
            return Err(ChainError::InvalidPair(x, y, "no differential entry".into()));
        }
        if self.big.gens()[x].q != self.big.gens()[y].q {
            return Err(ChainError::InvalidPair(x, y, "entry changes q".into()));
        }
        let targets: Vec<u32> = self.cols[x].iter().copied().filter(|&w| w as usize != y).collect();
        let sources: Vec<u32> = self.rows[y].iter().copied().filter(|&z| z as usize != x).collect();

        self.homotopy_terms.push((self.iota[x].clone(), self.pi_rows[y].clone()));
        for &w in &targets {
            self.pi_rows[w as usize] = sym_diff(&self.pi_rows[w as usize], &self.pi_rows[y]);
        }
        for &z in &sources {
            self.iota[z as usize] = sym_diff(&self.iota[z as usize], &self.iota[x]);
        }
        // d'(z) = d(z) + d(x) for every z hitting y
        for &z in &sources {
            for &w in &targets {
                let (zc, wr) = (z as usize, w as usize);
                if !self.cols[zc].remove(&w) {
                    self.cols[zc].insert(w);
                    self.rows[wr].insert(z);
                } else {
                    self.rows[wr].remove(&z);
                }
            }
        }
        for v in [x, y] {
            for w in std::mem::take(&mut self.cols[v]) {
                self.rows[w as usize].remove(&(v as u32));
            }
            for z in std::mem::take(&mut self.rows[v]) {
                self.cols[z as usize].remove(&(v as u32));
            }
            self.alive[v] = false;
            self.iota[v].clear();
            self.pi_rows[v].clear();
        }
        Ok(())
    }

    /// Cancels every `q`-preserving entry, scanning generators in order and
    /// preferring the target with the fewest incoming entries.
    pub fn eliminate_all(&mut self) {
        let n = self.alive.len();
        loop {
            let mut progress = false;
            for x in 0..n {
                if !self.alive[x] {
                    continue;
                }
                let q = self.big.gens()[x].q;
                let best = self.cols[x]
                    .iter()
                    .map(|&y| y as usize)
                    .filter(|&y| self.big.gens()[y].q == q)
                    .min_by_key(|&y| (self.rows[y].len(), y));
                if let Some(y) = best {
                    self.eliminate(x, y).expect("selected entry is valid");
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }

    /// Cancels `q`-preserving entries `x → y` between generators with
    /// `allowed` set, until none is left. `rank(x, y)` is `None` for pairs
    /// that must not be cancelled; lower ranks are preferred. Returns whether
    /// every allowed generator is gone.
    pub fn eliminate_within(&mut self, allowed: &[bool], rank: impl Fn(usize, usize) -> Option<u32>) -> bool {
        let n = self.alive.len();
        loop {
            let mut progress = false;
            for x in 0..n {
                if !self.alive[x] || !allowed[x] {
                    continue;
                }
                let q = self.big.gens()[x].q;
                let best = self.cols[x]
                    .iter()
                    .map(|&y| y as usize)
                    .filter(|&y| allowed[y] && self.big.gens()[y].q == q)
                    .filter_map(|y| rank(x, y).map(|r| (r, self.rows[y].len(), y)))
                    .min()
                    .map(|t| t.2);
                if let Some(y) = best {
                    self.eliminate(x, y).expect("selected entry is valid");
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        (0..n).all(|i| !allowed[i] || !self.alive[i])
    }

    pub fn finish(self) -> Reduction {
        let n = self.alive.len();
        let survivors: Vec<usize> = (0..n).filter(|&i| self.alive[i]).collect();
        let mut pos = vec![u32::MAX; n];
        for (i, &s) in survivors.iter().enumerate() {
            pos[s] = i as u32;
        }
        let gens = survivors.iter().map(|&s| self.big.gens()[s].clone()).collect();
        let d_cols = survivors.iter().map(|&s| self.cols[s].iter().map(|&w| pos[w as usize]).collect()).collect();
        let m = survivors.len();
        let small = FilteredComplex::new(gens, SparseMap::from_columns(m, d_cols), self.big.h_step()).expect("square");
        let iota_cols: Vec<Vec<u32>> = survivors.iter().map(|&s| self.iota[s].clone()).collect();
        let mut pi_cols: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &s) in survivors.iter().enumerate() {
            for &v in &self.pi_rows[s] {
                pi_cols[v as usize].push(i as u32);
            }
        }
        Reduction {
            small,
            survivors,
            pi: FilteredChainMap::new(SparseMap::from_columns(m, pi_cols), 0, 0),
            iota: FilteredChainMap::new(SparseMap::from_columns(n, iota_cols), 0, 0),
            homotopy_terms: self.homotopy_terms,
            big_dim: n,
        }
    }
}

impl Reduction {
    /// The homotopy `H` on the big complex, `h`-degree −1.
    pub fn homotopy(&self) -> FilteredChainMap {
        let mut cols: Vec<Vec<u32>> = vec![Vec::new(); self.big_dim];
        for (target, row) in &self.homotopy_terms {
            for &v in row {
                cols[v as usize].extend_from_slice(target);
            }
        }
        FilteredChainMap::new(SparseMap::from_columns(self.big_dim, cols), -1, 0)
    }

    /// Checks `πι = id`, `ιπ = id + dH + Hd`, and that `π`, `ι` are filtered chain maps.
    pub fn verify(&self, big: &FilteredComplex) -> Result<(), ChainError> {
        let small = &self.small;
        if !small.is_valid() {
            return Err(ChainError::InvalidComplex("reduced complex fails verification".into()));
        }
        if !self.pi.is_chain_map(big, small) || !self.iota.is_chain_map(small, big) {
            return Err(ChainError::NotAChainMap("π or ι".into()));
        }
        if !self.pi.is_filtered(big, small) || !self.iota.is_filtered(small, big) {
            return Err(ChainError::NotAChainMap("π or ι is not filtered".into()));
        }
        if self.pi.compose(&self.iota).matrix != SparseMap::identity(small.dim()) {
            return Err(ChainError::NotAChainMap("πι ≠ id".into()));
        }
        let h = self.homotopy().matrix;
        let lhs = self.iota.compose(&self.pi).matrix.add(&SparseMap::identity(big.dim()));
        let rhs = big.d().compose(&h).add(&h.compose(big.d()));
        if lhs != rhs {
            return Err(ChainError::NotAChainMap("ιπ ≠ id + dH + Hd".into()));
        }
        Ok(())
    }
}

/// Cancels all `q`-preserving differential entries. In debug and test builds
/// the tracked identities are verified before returning.
pub fn reduce(c: &FilteredComplex) -> Reduction {
    let mut e = Eliminator::new(c);
    e.eliminate_all();
    let r = e.finish();
    #[cfg(debug_assertions)]
    if c.dim() <= 4096 {
        r.verify(c).expect("reduction identities");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincx::{FilteredChainMap, Generator, HStep};

    #[test]
    fn zero_differential_is_unchanged() {
        let c = FilteredComplex::zero(vec![Generator::new(0, 1, "a"), Generator::new(0, -1, "b")]);
        let r = reduce(&c);
        assert_eq!(r.small, c);
        assert!(r.homotopy().is_zero());
        assert_eq!(r.pi.matrix, SparseMap::identity(2));
    }

    #[test]
    fn cone_of_identity_reduces_to_nothing() {
        let c = FilteredComplex::zero(vec![Generator::new(0, 1, "a"), Generator::new(1, 3, "b")]);
        let cone = FilteredComplex::cone(&FilteredChainMap::identity(&c), &c, &c).unwrap();
        let r = reduce(&cone);
        assert_eq!(r.small.dim(), 0);
        r.verify(&cone).unwrap();
    }

    #[test]
    fn square_with_zigzag() {
        // a → b, a → c, d ← b, d ← c : the boundary of a square
        let gens = vec![Generator::new(0, 0, "a"), Generator::new(1, 0, "b"), Generator::new(1, 0, "c"), Generator::new(2, 0, "d")];
        let d = SparseMap::from_pairs(4, 4, [(1, 0), (2, 0), (3, 1), (3, 2)]);
        let c = FilteredComplex::new(gens, d, HStep::Exact).unwrap();
        let r = reduce(&c);
        assert_eq!(r.small.dim(), 0);
        r.verify(&c).unwrap();
    }

    #[test]
    fn raising_entries_survive() {
        let gens = vec![Generator::new(0, 0, "a"), Generator::new(1, 2, "b"), Generator::new(1, 0, "c")];
        let d = SparseMap::from_pairs(3, 3, [(1, 0), (2, 0)]);
        let c = FilteredComplex::new(gens, d, HStep::Exact).unwrap();
        let r = reduce(&c);
        assert_eq!(r.small.dim(), 1);
        r.verify(&c).unwrap();
    }
}
