use super::{ArcEnds, ArcId, LinkDiagram, Slot, Uf};

/// A relabeling carrying one diagram onto another exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// `arc_map[a - 1]` is the image of arc `a`.
    pub arc_map: Vec<ArcId>,
    pub crossing_map: Vec<usize>,
}

impl LinkDiagram {
    fn other_end(&self, arc: ArcId, at: Slot) -> Slot {
        match self.ends(arc) {
            ArcEnds::Open { tail, head } => {
                if tail == at {
                    head
                } else {
                    tail
                }
            }
            ArcEnds::Loop => unreachable!(),
        }
    }

    /// Finds arc and crossing bijections under which the two PD codes agree
    /// slot for slot.
    pub fn find_isomorphism(&self, other: &LinkDiagram) -> Option<Isomorphism> {
        self.find_isomorphism_seeded(other, &[])
    }

    /// Like [`find_isomorphism`](Self::find_isomorphism), but arc `a` must
    /// go to `b` for every seed `(a, b)`.
    pub fn find_isomorphism_seeded(&self, other: &LinkDiagram, seeds: &[(ArcId, ArcId)]) -> Option<Isomorphism> {
        if self.crossing_count() != other.crossing_count() || self.arc_count() != other.arc_count() || self.loops().len() != other.loops().len() {
            return None;
        }
        let k = self.crossing_count();
        let n = self.arc_count();
        let mut arc_map = vec![0u32; n as usize];
        let mut arc_used = vec![false; n as usize];
        let mut cmap = vec![usize::MAX; k];
        let mut cused = vec![false; k];
        let mut forced = vec![None; k];
        for &(a, b) in seeds {
            if a == 0 || b == 0 || a > n || b > n || self.is_loop(a) != other.is_loop(b) {
                return None;
            }
            if arc_map[a as usize - 1] != 0 && arc_map[a as usize - 1] != b || arc_used[b as usize - 1] && arc_map[a as usize - 1] != b {
                return None;
            }
            arc_map[a as usize - 1] = b;
            arc_used[b as usize - 1] = true;
            if let (ArcEnds::Open { tail: ta, .. }, ArcEnds::Open { tail: tb, .. }) = (self.ends(a), other.ends(b)) {
                if ta.slot != tb.slot {
                    return None;
                }
                forced[ta.crossing] = Some(tb.crossing);
            }
        }
        let free_other: Vec<ArcId> = other.loops().iter().copied().filter(|&b| !arc_used[b as usize - 1]).collect();
        let free_self: Vec<ArcId> = self.loops().iter().copied().filter(|&a| arc_map[a as usize - 1] == 0).collect();
        for (&a, &b) in free_self.iter().zip(&free_other) {
            arc_map[a as usize - 1] = b;
            arc_used[b as usize - 1] = true;
        }

        let mut uf = Uf::new(k.max(1));
        for a in 1..=self.arc_count() {
            if let ArcEnds::Open { tail, head } = self.ends(a) {
                uf.union(tail.crossing, head.crossing);
            }
        }
        for x in 0..k {
            if uf.find(x) != x {
                continue;
            }
            // a seeded crossing in this component pins the start
            let pinned = (0..k).find(|&z| uf.find(z) == x && forced[z].is_some());
            let (x, candidates): (usize, Vec<usize>) = match pinned {
                Some(z) => (z, vec![forced[z].expect("pinned")]),
                None => (x, (0..k).collect()),
            };
            let mut found = false;
            for y in candidates {
                if cused[y] {
                    continue;
                }
                let mut trial = (arc_map.clone(), arc_used.clone(), cmap.clone(), cused.clone());
                if self.propagate(other, x, y, &mut trial) {
                    (arc_map, arc_used, cmap, cused) = trial;
                    found = true;
                    break;
                }
            }
            if !found {
                return None;
            }
        }
        Some(Isomorphism { arc_map, crossing_map: cmap })
    }

    fn propagate(&self, other: &LinkDiagram, x0: usize, y0: usize, st: &mut (Vec<ArcId>, Vec<bool>, Vec<usize>, Vec<bool>)) -> bool {
        let (arc_map, arc_used, cmap, cused) = st;
        let mut stack = vec![(x0, y0)];
        while let Some((x, y)) = stack.pop() {
            if cmap[x] != usize::MAX {
                if cmap[x] != y {
                    return false;
                }
                continue;
            }
            if cused[y] {
                return false;
            }
            cmap[x] = y;
            cused[y] = true;
            for s in 0..4 {
                let a = self.crossings()[x].arcs[s];
                let b = other.crossings()[y].arcs[s];
                let m = arc_map[a as usize - 1];
                if m == 0 {
                    if arc_used[b as usize - 1] {
                        return false;
                    }
                    arc_map[a as usize - 1] = b;
                    arc_used[b as usize - 1] = true;
                } else if m != b {
                    return false;
                }
                let oa = self.other_end(a, Slot { crossing: x, slot: s });
                let ob = other.other_end(b, Slot { crossing: y, slot: s });
                if oa.slot != ob.slot {
                    return false;
                }
                stack.push((oa.crossing, ob.crossing));
            }
        }
        true
    }

    pub fn is_isomorphic(&self, other: &LinkDiagram) -> bool {
        self.find_isomorphism(other).is_some()
    }
}
