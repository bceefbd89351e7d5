use serde::{Deserialize, Serialize};

use super::{ArcId, DiagramError, LinkDiagram, Uf};

/// A complete resolution: bit `i` set means crossing `i` takes its 1-smoothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Resolution {
    bits: u64,
    len: usize,
}

impl Resolution {
    pub const MAX_CROSSINGS: usize = 63;

    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= Self::MAX_CROSSINGS);
        debug_assert!(len == 64 || bits >> len == 0);
        Resolution { bits, len }
    }

    pub fn zero(len: usize) -> Self {
        Resolution::new(0, len)
    }

    pub fn from_bools(v: &[bool]) -> Self {
        let bits = v.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Resolution::new(bits, v.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(&self, i: usize, v: bool) -> Self {
        let bits = if v { self.bits | 1 << i } else { self.bits & !(1 << i) };
        Resolution { bits, len: self.len }
    }

    /// Number of 1-smoothings.
    pub fn height(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Bit string with crossing 0 first, e.g. `"101"`.
    pub fn label(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

/// The circles of a resolution, sorted by their smallest arc id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedDiagram {
    circles: Vec<Vec<ArcId>>,
    circle_of: Vec<u32>,
}

impl ResolvedDiagram {
    pub fn circles(&self) -> &[Vec<ArcId>] {
        &self.circles
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn circle_of(&self, arc: ArcId) -> usize {
        self.circle_of[arc as usize - 1] as usize
    }
}

/// The saddle along a cube edge, in circle indices of both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeAction {
    Merge { a: usize, b: usize, into: usize },
    Split { from: usize, into: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub action: EdgeAction,
    /// `passive[i]` is the target index of source circle `i` when it is not
    /// touched by the saddle.
    pub passive: Vec<Option<usize>>,
}

impl LinkDiagram {
    pub fn resolve(&self, r: Resolution) -> Result<ResolvedDiagram, DiagramError> {
        if r.len() != self.crossing_count() {
            return Err(DiagramError::LengthMismatch { expected: self.crossing_count(), got: r.len() });
        }
        Ok(self.resolve_partial(|i| r.get(i)))
    }

    pub(crate) fn resolve_partial(&self, smoothing: impl Fn(usize) -> bool) -> ResolvedDiagram {
        let n = self.arc_count() as usize;
        let mut uf = Uf::new(n);
        for (i, c) in self.crossings().iter().enumerate() {
            let [a, b, cc, d] = c.arcs.map(|x| x as usize - 1);
            if smoothing(i) {
                uf.union(a, b);
                uf.union(cc, d);
            } else {
                uf.union(a, d);
                uf.union(b, cc);
            }
        }
        // roots are minimal arcs, so ordering roots orders circles by min arc
        let mut index = vec![u32::MAX; n];
        let mut circles: Vec<Vec<ArcId>> = Vec::new();
        let mut circle_of = vec![0u32; n];
        for a in 0..n {
            let r = uf.find(a);
            if index[r] == u32::MAX {
                index[r] = circles.len() as u32;
                circles.push(Vec::new());
            }
            circle_of[a] = index[r];
            circles[index[r] as usize].push(a as u32 + 1);
        }
        ResolvedDiagram { circles, circle_of }
    }

    /// Describes the saddle from `r` (crossing `crossing` at 0) to the
    /// resolution with that crossing at 1.
    pub fn edge(&self, r: Resolution, crossing: usize) -> Result<EdgeData, DiagramError> {
        if crossing >= self.crossing_count() || r.get(crossing) {
            return Err(DiagramError::NotAnEdge(format!("crossing {crossing} from {}", r.label())));
        }
        let src = self.resolve(r)?;
        let dst = self.resolve(r.with(crossing, true))?;
        self.edge_between(&src, &dst, crossing)
    }

    pub(crate) fn edge_between(&self, src: &ResolvedDiagram, dst: &ResolvedDiagram, crossing: usize) -> Result<EdgeData, DiagramError> {
        let [a0, a1, a2, _] = self.crossings()[crossing].arcs;
        let (ca, cb) = (src.circle_of(a0), src.circle_of(a1));
        let action = if ca != cb {
            EdgeAction::Merge { a: ca.min(cb), b: ca.max(cb), into: dst.circle_of(a0) }
        } else {
            let (x, y) = (dst.circle_of(a0), dst.circle_of(a2));
            if x == y {
                return Err(DiagramError::NonPlanarEdge { crossing });
            }
            EdgeAction::Split { from: ca, into: (x.min(y), x.max(y)) }
        };
        let touched = |i: usize| match action {
            EdgeAction::Merge { a, b, .. } => i == a || i == b,
            EdgeAction::Split { from, .. } => i == from,
        };
        let passive = src
            .circles()
            .iter()
            .enumerate()
            .map(|(i, arcs)| if touched(i) { None } else { Some(dst.circle_of(arcs[0])) })
            .collect();
        Ok(EdgeData { action, passive })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn trefoil_extreme_resolutions() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let r0 = d.resolve(Resolution::zero(3)).unwrap();
        assert_eq!(r0.circles(), &[vec![1, 3, 5], vec![2, 4, 6]]);
        let r1 = d.resolve(Resolution::new(0b111, 3)).unwrap();
        assert_eq!(r1.circle_count(), 3);
    }

    #[test]
    fn edges_alternate() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let e = d.edge(Resolution::zero(3), 0).unwrap();
        assert!(matches!(e.action, EdgeAction::Merge { .. }));
        let e = d.edge(Resolution::new(0b001, 3), 1).unwrap();
        assert!(matches!(e.action, EdgeAction::Split { .. }));
        assert!(d.edge(Resolution::new(0b001, 3), 0).is_err());
    }

    #[test]
    fn length_mismatch() {
        let d = parse_pd("U(1)").unwrap();
        assert!(matches!(d.resolve(Resolution::zero(2)), Err(DiagramError::LengthMismatch { .. })));
    }
}
