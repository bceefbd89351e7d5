use std::collections::BTreeMap;

use super::{ChainError, FilteredChainMap, FilteredComplex, HStep};
use crate::f2linalg::{SparseMap, SparseSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyOptions {
    /// Require `q(H x) ≥ q(x) + q_degree`. Turning this off is for diagnostics only.
    pub filtered: bool,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        HomotopyOptions { filtered: true }
    }
}

/// Searches for `H` with `f + g = d' H + H d`. Unknowns are the entries of
/// `H` allowed by the degree constraints, ordered by (source, target).
/// Returns `None` when the linear system is inconsistent.
pub fn homotopic(
    f: &FilteredChainMap,
    g: &FilteredChainMap,
    source: &FilteredComplex,
    target: &FilteredComplex,
    opts: HomotopyOptions,
) -> Result<Option<FilteredChainMap>, ChainError> {
    f.check_shape(source, target)?;
    g.check_shape(source, target)?;
    if f.h_degree != g.h_degree {
        return Err(ChainError::ShapeMismatch(format!("h-degrees {} and {}", f.h_degree, g.h_degree)));
    }
    let sum = f.matrix.add(&g.matrix);
    let h_deg = f.h_degree - 1;
    let q_deg = f.q_degree.min(g.q_degree);
    if sum.is_zero() {
        return Ok(Some(FilteredChainMap::new(SparseMap::zeros(target.dim(), source.dim()), h_deg, q_deg)));
    }
    let exact = source.h_step() == HStep::Exact && target.h_step() == HStep::Exact;
    // When everything preserves q, the q-preserving part of any solution is
    // again a solution, so H may be restricted to q-preserving entries.
    let graded = opts.filtered
        && source.is_graded()
        && target.is_graded()
        && sum.entries().all(|(y, x)| target.gens()[y].q == source.gens()[x].q + q_deg);

    let mut by_h: BTreeMap<i32, Vec<u32>> = BTreeMap::new();
    for (i, gen) in target.gens().iter().enumerate() {
        by_h.entry(gen.h).or_default().push(i as u32);
    }
    let all: Vec<u32> = (0..target.dim() as u32).collect();
    let allowed: Vec<Vec<u32>> = source
        .gens()
        .iter()
        .map(|gx| {
            let pool = if exact { by_h.get(&(gx.h + h_deg)).map(Vec::as_slice).unwrap_or(&[]) } else { &all[..] };
            pool.iter()
                .copied()
                .filter(|&y| {
                    let qy = target.gens()[y as usize].q;
                    if graded {
                        qy == gx.q + q_deg
                    } else {
                        !opts.filtered || qy >= gx.q + q_deg
                    }
                })
                .collect()
        })
        .collect();
    let mut offset = Vec::with_capacity(source.dim() + 1);
    let mut acc = 0usize;
    for a in &allowed {
        offset.push(acc);
        acc += a.len();
    }
    let var = |y: u32, x: usize| -> Option<u32> { allowed[x].binary_search(&y).ok().map(|p| (offset[x] + p) as u32) };

    let mut system = SparseSystem::new(acc);
    for x in 0..source.dim() {
        let mut eqs: BTreeMap<u32, (Vec<u32>, bool)> = BTreeMap::new();
        for &y in &allowed[x] {
            let v = var(y, x).expect("allowed");
            for &w in target.d().column(y as usize) {
                eqs.entry(w).or_default().0.push(v);
            }
        }
        for &z in source.d().column(x) {
            for &w in &allowed[z as usize] {
                eqs.entry(w).or_default().0.push(var(w, z as usize).expect("allowed"));
            }
        }
        for &w in sum.column(x) {
            eqs.entry(w).or_default().1 ^= true;
        }
        for (_, (vars, rhs)) in eqs {
            system.add_equation(vars, rhs);
            if !system.is_consistent() {
                return Ok(None);
            }
        }
    }
    let Some(sol) = system.solve() else { return Ok(None) };
    let cols: Vec<Vec<u32>> = (0..source.dim()).map(|x| allowed[x].iter().enumerate().filter(|&(p, _)| sol[offset[x] + p]).map(|(_, &y)| y).collect()).collect();
    let h = SparseMap::from_columns(target.dim(), cols);
    let check = target.d().compose(&h).add(&h.compose(source.d()));
    assert_eq!(check, sum, "homotopy solution fails re-verification");
    Ok(Some(FilteredChainMap::new(h, h_deg, q_deg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincx::Generator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> FilteredComplex {
        let gens = vec![Generator::new(0, 0, "a"), Generator::new(1, 0, "b"), Generator::new(1, 2, "c"), Generator::new(2, 2, "d")];
        let d = SparseMap::from_pairs(4, 4, [(1, 0), (2, 0), (3, 1), (3, 2)]);
        FilteredComplex::new(gens, d, HStep::Exact).unwrap()
    }

    #[test]
    fn equal_maps_need_zero_homotopy() {
        let c = square();
        let id = FilteredChainMap::identity(&c);
        let h = homotopic(&id, &id, &c, &c, HomotopyOptions::default()).unwrap().unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn planted_homotopies_are_recovered() {
        let c = square();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            // random filtered K of h-degree -1
            let mut pairs = Vec::new();
            for x in 0..4 {
                for y in 0..4 {
                    let (gx, gy) = (&c.gens()[x], &c.gens()[y]);
                    if gy.h == gx.h - 1 && gy.q >= gx.q && rng.gen_bool(0.5) {
                        pairs.push((y, x));
                    }
                }
            }
            let k = SparseMap::from_pairs(4, 4, pairs);
            let g = SparseMap::identity(4).add(&c.d().compose(&k)).add(&k.compose(c.d()));
            let g = FilteredChainMap::new(g, 0, 0);
            let id = FilteredChainMap::identity(&c);
            assert!(homotopic(&id, &g, &c, &c, HomotopyOptions::default()).unwrap().is_some());
        }
    }

    #[test]
    fn contraction_must_respect_filtration() {
        let gens = vec![Generator::new(0, 0, "x"), Generator::new(1, 2, "y")];
        let c = FilteredComplex::new(gens, SparseMap::from_pairs(2, 2, [(1, 0)]), HStep::Exact).unwrap();
        let id = FilteredChainMap::identity(&c);
        let zero = FilteredChainMap::zero(&c, &c);
        // acyclic, but the contraction y ↦ x lowers q
        assert!(homotopic(&id, &zero, &c, &c, HomotopyOptions::default()).unwrap().is_none());
        assert!(homotopic(&id, &zero, &c, &c, HomotopyOptions { filtered: false }).unwrap().is_some());
        let s = square();
        let sid = FilteredChainMap::identity(&s);
        assert!(homotopic(&sid, &FilteredChainMap::zero(&s, &s), &s, &s, HomotopyOptions::default()).unwrap().is_some());
    }
}
