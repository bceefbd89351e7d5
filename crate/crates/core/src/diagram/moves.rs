use serde::{Deserialize, Serialize};

use super::{compact, ArcEnds, ArcId, Crossing, Dart, DiagramError, LinkDiagram, Sign, Uf};

/// Two arcs joined by an oriented saddle. Equal arcs split off a new circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryArc {
    pub first: ArcId,
    pub second: ArcId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum ElementaryMove {
    /// `arcs[a - 1]` is the new id of arc `a`; `crossings[i]` the new index of crossing `i`.
    Relabel { arcs: Vec<ArcId>, crossings: Option<Vec<usize>> },
    /// Birth of a crossingless circle.
    Handle0,
    Handle1(SurgeryArc),
    /// Death of the crossingless circle `arc`.
    Handle2 { arc: ArcId },
    /// Adds a kink on `arc`. With `under_first` the strand passes under first.
    R1Insert { arc: ArcId, sign: Sign, under_first: bool },
    /// Removes the kink whose small loop is `arc`.
    R1Delete { arc: ArcId },
    /// Pushes `over` across `under`; `choice` picks among the admissible dart pairs.
    R2Insert { over: ArcId, under: ArcId, choice: usize },
    /// Removes the bigon bounded by `over` and `under`.
    R2Delete { over: ArcId, under: ArcId },
    /// Slides a strand across the triangle bounded by these arcs.
    R3 { arcs: [ArcId; 3] },
}

impl ElementaryMove {
    pub fn name(&self) -> &'static str {
        match self {
            ElementaryMove::Relabel { .. } => "relabel",
            ElementaryMove::Handle0 => "h0",
            ElementaryMove::Handle1(_) => "h1",
            ElementaryMove::Handle2 { .. } => "h2",
            ElementaryMove::R1Insert { .. } => "r1+",
            ElementaryMove::R1Delete { .. } => "r1-",
            ElementaryMove::R2Insert { .. } => "r2+",
            ElementaryMove::R2Delete { .. } => "r2-",
            ElementaryMove::R3 { .. } => "r3",
        }
    }

    /// Change in Euler characteristic of the cobordism.
    pub fn euler_characteristic(&self) -> i32 {
        match self {
            ElementaryMove::Handle0 | ElementaryMove::Handle2 { .. } => 1,
            ElementaryMove::Handle1(_) => -1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub diagram: LinkDiagram,
    /// `arc_map[a - 1]`: image of old arc `a`, `None` if it disappeared.
    pub arc_map: Vec<Option<ArcId>>,
    /// `crossing_map[i]`: image of old crossing `i`.
    pub crossing_map: Vec<Option<usize>>,
    /// Indices of crossings created by the move, in the new diagram.
    pub new_crossings: Vec<usize>,
    /// Arcs of the new diagram singled out by the move: the kink loop for
    /// R1 insertion, `[over_mid, under_mid]` for R2 insertion, the new
    /// circle for splitting saddles and births.
    pub marked_arcs: Vec<ArcId>,
}

struct Draft {
    crossings: Vec<Crossing>,
    loops: Vec<ArcId>,
    /// old arc id -> draft arc id
    arc_image: Vec<Option<ArcId>>,
    crossing_map: Vec<Option<usize>>,
    new_crossings: Vec<usize>,
    marked: Vec<ArcId>,
}

impl Draft {
    fn from(d: &LinkDiagram) -> Self {
        Draft {
            crossings: d.crossings().to_vec(),
            loops: d.loops().to_vec(),
            arc_image: (1..=d.arc_count()).map(Some).collect(),
            crossing_map: (0..d.crossing_count()).map(Some).collect(),
            new_crossings: Vec::new(),
            marked: Vec::new(),
        }
    }

    fn finish(self) -> Result<MoveOutcome, DiagramError> {
        let (diagram, map) = compact(self.crossings, self.loops)?;
        let lookup = |a: ArcId| map.get(a as usize).copied().filter(|&x| x != 0);
        Ok(MoveOutcome {
            diagram,
            arc_map: self.arc_image.iter().map(|a| a.and_then(lookup)).collect(),
            crossing_map: self.crossing_map,
            new_crossings: self.new_crossings,
            marked_arcs: self.marked.into_iter().map(|a| lookup(a).expect("marked arcs survive")).collect(),
        })
    }

    fn set_slot(&mut self, x: usize, s: usize, a: ArcId) {
        self.crossings[x].arcs[s] = a;
    }

    /// Deletes crossings, identifies arcs in `pairs`, and drops `gone`.
    /// Classes without remaining occurrences become loops.
    fn remove_crossings(&mut self, remove: &[usize], pairs: &[(ArcId, ArcId)], gone: &[ArcId], arc_count: u32) {
        let n = arc_count as usize;
        let mut uf = Uf::new(n + 1);
        for &(a, b) in pairs {
            uf.union(a as usize, b as usize);
        }
        let mut keep = Vec::new();
        let mut next = 0;
        for (i, m) in self.crossing_map.iter_mut().enumerate() {
            if remove.contains(&i) {
                *m = None;
            } else {
                *m = Some(next);
                next += 1;
                keep.push(i);
            }
        }
        let crossings: Vec<Crossing> =
            keep.iter().map(|&i| Crossing { arcs: self.crossings[i].arcs.map(|a| uf.find(a as usize) as ArcId) }).collect();
        let mut present = vec![false; n + 1];
        for c in &crossings {
            for a in c.arcs {
                present[a as usize] = true;
            }
        }
        let mut loops: Vec<ArcId> = self.loops.iter().map(|&l| uf.find(l as usize) as ArcId).collect();
        for &(a, _) in pairs {
            let r = uf.find(a as usize);
            if !present[r] && !loops.contains(&(r as ArcId)) && !gone.contains(&(r as ArcId)) {
                loops.push(r as ArcId);
            }
        }
        loops.sort_unstable();
        for (a, img) in self.arc_image.iter_mut().enumerate() {
            let id = a as ArcId + 1;
            *img = if gone.contains(&id) { None } else { Some(uf.find(id as usize) as ArcId) };
        }
        self.crossings = crossings;
        self.loops = loops;
    }
}

impl LinkDiagram {
    pub fn apply_move(&self, m: &ElementaryMove) -> Result<MoveOutcome, DiagramError> {
        match m {
            ElementaryMove::Relabel { arcs, crossings } => self.relabel(arcs, crossings.as_deref()),
            ElementaryMove::Handle0 => {
                let mut d = Draft::from(self);
                let new = self.arc_count() + 1;
                d.loops.push(new);
                d.marked.push(new);
                d.finish()
            }
            ElementaryMove::Handle2 { arc } => {
                self.check_arc(*arc)?;
                if !self.is_loop(*arc) {
                    return Err(DiagramError::NotCrossingless(*arc));
                }
                let mut d = Draft::from(self);
                d.loops.retain(|l| l != arc);
                d.arc_image[*arc as usize - 1] = None;
                d.finish()
            }
            ElementaryMove::Handle1(s) => self.saddle(*s),
            ElementaryMove::R1Insert { arc, sign, under_first } => self.r1_insert(*arc, *sign, *under_first),
            ElementaryMove::R1Delete { arc } => self.r1_delete(*arc),
            ElementaryMove::R2Insert { over, under, choice } => self.r2_insert(*over, *under, *choice),
            ElementaryMove::R2Delete { over, under } => self.r2_delete(*over, *under),
            ElementaryMove::R3 { arcs } => self.r3(*arcs),
        }
    }

    fn check_arc(&self, a: ArcId) -> Result<(), DiagramError> {
        if a == 0 || a > self.arc_count() {
            Err(DiagramError::InvalidSite(format!("no arc {a}")))
        } else {
            Ok(())
        }
    }

    fn relabel(&self, arcs: &[ArcId], crossings: Option<&[usize]>) -> Result<MoveOutcome, DiagramError> {
        let n = self.arc_count() as usize;
        let is_perm = |v: &[usize], n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        let arc_idx: Vec<usize> = arcs.iter().map(|&a| (a as usize).wrapping_sub(1)).collect();
        if !is_perm(&arc_idx, n) {
            return Err(DiagramError::InvalidSite("arc relabeling is not a permutation".into()));
        }
        let k = self.crossing_count();
        let cperm: Vec<usize> = crossings.map(<[usize]>::to_vec).unwrap_or_else(|| (0..k).collect());
        if !is_perm(&cperm, k) {
            return Err(DiagramError::InvalidSite("crossing relabeling is not a permutation".into()));
        }
        let mut new_crossings = vec![Crossing::new(0, 0, 0, 0); k];
        for (i, c) in self.crossings().iter().enumerate() {
            new_crossings[cperm[i]] = Crossing { arcs: c.arcs.map(|a| arcs[a as usize - 1]) };
        }
        let mut loops: Vec<ArcId> = self.loops().iter().map(|&l| arcs[l as usize - 1]).collect();
        loops.sort_unstable();
        Ok(MoveOutcome {
            diagram: LinkDiagram::new(new_crossings, loops)?,
            arc_map: arcs.iter().map(|&a| Some(a)).collect(),
            crossing_map: cperm.into_iter().map(Some).collect(),
            new_crossings: Vec::new(),
            marked_arcs: Vec::new(),
        })
    }

    fn saddle(&self, s: SurgeryArc) -> Result<MoveOutcome, DiagramError> {
        let (e1, e2) = (s.first, s.second);
        self.check_arc(e1)?;
        self.check_arc(e2)?;
        let mut d = Draft::from(self);
        let n = self.arc_count();
        match (self.ends(e1), self.ends(e2)) {
            (_, _) if e1 == e2 => {
                // split off a new circle next to the arc
                d.loops.push(n + 1);
                d.marked.push(n + 1);
            }
            (ArcEnds::Loop, ArcEnds::Loop) => {
                let (keep, drop) = (e1.min(e2), e1.max(e2));
                d.loops.retain(|&l| l != drop);
                d.arc_image[drop as usize - 1] = Some(keep);
            }
            (ArcEnds::Loop, ArcEnds::Open { .. }) | (ArcEnds::Open { .. }, ArcEnds::Loop) => {
                let (lp, other) = if self.is_loop(e1) { (e1, e2) } else { (e2, e1) };
                d.loops.retain(|&l| l != lp);
                d.arc_image[lp as usize - 1] = Some(other);
            }
            (ArcEnds::Open { head: h1, .. }, ArcEnds::Open { head: h2, .. }) => {
                let f1 = Dart { arc: e1, forward: true };
                let f2 = Dart { arc: e2, forward: true };
                if !self.face_of(f1).contains(f2) {
                    return Err(DiagramError::InvalidSite(format!("arcs {e1} and {e2} do not run oppositely along a common face")));
                }
                d.set_slot(h1.crossing, h1.slot, e2);
                d.set_slot(h2.crossing, h2.slot, e1);
            }
        }
        d.finish()
    }

    fn r1_insert(&self, e: ArcId, sign: Sign, under_first: bool) -> Result<MoveOutcome, DiagramError> {
        self.check_arc(e)?;
        let n = self.arc_count();
        let mut d = Draft::from(self);
        let l = n + 1;
        let e2 = match self.ends(e) {
            ArcEnds::Loop => {
                d.loops.retain(|&x| x != e);
                e
            }
            ArcEnds::Open { head, .. } => {
                d.set_slot(head.crossing, head.slot, n + 2);
                n + 2
            }
        };
        let c = match (under_first, sign) {
            (true, Sign::Positive) => Crossing::new(e, l, l, e2),
            (true, Sign::Negative) => Crossing::new(e, e2, l, l),
            (false, Sign::Positive) => Crossing::new(l, e, e2, l),
            (false, Sign::Negative) => Crossing::new(l, l, e2, e),
        };
        d.crossings.push(c);
        d.new_crossings.push(self.crossing_count());
        d.marked.push(l);
        d.finish()
    }

    fn r1_delete(&self, l: ArcId) -> Result<MoveOutcome, DiagramError> {
        self.check_arc(l)?;
        let ArcEnds::Open { tail, head } = self.ends(l) else {
            return Err(DiagramError::InvalidSite(format!("arc {l} is not a kink")));
        };
        let gap = (tail.slot + 4 - head.slot) % 4;
        if tail.crossing != head.crossing || gap % 2 == 0 {
            return Err(DiagramError::InvalidSite(format!("arc {l} is not a kink")));
        }
        let x = tail.crossing;
        let arcs = self.crossings()[x].arcs;
        let rest: Vec<ArcId> = (0..4).filter(|&s| s != tail.slot && s != head.slot).map(|s| arcs[s]).collect();
        let mut d = Draft::from(self);
        d.remove_crossings(&[x], &[(rest[0], rest[1])], &[l], self.arc_count());
        d.finish()
    }

    /// Admissible dart pairs for pushing `over` across `under`, in a fixed order.
    pub fn r2_candidates(&self, over: ArcId, under: ArcId) -> Vec<(Dart, Dart)> {
        let mut out = Vec::new();
        if over == under || over == 0 || under == 0 || over > self.arc_count() || under > self.arc_count() {
            return out;
        }
        let faces = self.faces();
        let face_idx = |d: Dart| faces.iter().position(|f| f.contains(d)).expect("dart lies on a face");
        let split = !self.same_piece(over, under);
        for fa in [false, true] {
            for fb in [false, true] {
                let (da, db) = (Dart { arc: over, forward: fa }, Dart { arc: under, forward: fb });
                if split || face_idx(da) == face_idx(db) {
                    out.push((da, db));
                }
            }
        }
        out
    }

    fn same_piece(&self, a: ArcId, b: ArcId) -> bool {
        let n = self.arc_count() as usize;
        let mut uf = Uf::new(n);
        for c in self.crossings() {
            for s in 1..4 {
                uf.union(c.arcs[0] as usize - 1, c.arcs[s] as usize - 1);
            }
        }
        uf.find(a as usize - 1) == uf.find(b as usize - 1)
    }

    fn r2_insert(&self, a: ArcId, b: ArcId, choice: usize) -> Result<MoveOutcome, DiagramError> {
        self.check_arc(a)?;
        self.check_arc(b)?;
        let cands = self.r2_candidates(a, b);
        let Some(&(da, db)) = cands.get(choice) else {
            return Err(DiagramError::InvalidSite(format!("no R2 placement {choice} for arcs {a} over {b} ({} available)", cands.len())));
        };
        let n = self.arc_count();
        let mut d = Draft::from(self);
        let (a_mid, b_mid) = (n + 1, n + 3);
        let split_arc = |arc: ArcId, fresh: ArcId, d: &mut Draft| match self.ends(arc) {
            ArcEnds::Loop => {
                d.loops.retain(|&x| x != arc);
                arc
            }
            ArcEnds::Open { head, .. } => {
                d.set_slot(head.crossing, head.slot, fresh);
                fresh
            }
        };
        let a2 = split_arc(a, n + 2, &mut d);
        let b2 = split_arc(b, n + 4, &mut d);
        let (a1, b1) = (a, b);
        let (c1, c2) = match (da.forward, db.forward) {
            (true, true) => (Crossing::new(b_mid, a_mid, b2, a1), Crossing::new(b1, a_mid, b_mid, a2)),
            (true, false) => (Crossing::new(b1, a1, b_mid, a_mid), Crossing::new(b_mid, a2, b2, a_mid)),
            (false, false) => (Crossing::new(b_mid, a1, b2, a_mid), Crossing::new(b1, a2, b_mid, a_mid)),
            (false, true) => (Crossing::new(b1, a_mid, b_mid, a1), Crossing::new(b_mid, a_mid, b2, a2)),
        };
        let k = self.crossing_count();
        d.crossings.push(c1);
        d.crossings.push(c2);
        d.new_crossings = vec![k, k + 1];
        d.marked = vec![a_mid, b_mid];
        d.finish()
    }

    /// The two crossings of an R2 bigon with `over` on top, if it is one.
    pub fn r2_bigon(&self, over: ArcId, under: ArcId) -> Result<(usize, usize), DiagramError> {
        self.check_arc(over)?;
        self.check_arc(under)?;
        let bad = || DiagramError::InvalidSite(format!("arcs {over} and {under} do not bound an R2 bigon"));
        let (ArcEnds::Open { tail: ta, head: ha }, ArcEnds::Open { tail: tb, head: hb }) = (self.ends(over), self.ends(under)) else {
            return Err(bad());
        };
        if ta.crossing == ha.crossing || ta.slot % 2 == 0 || ha.slot % 2 == 0 || tb.slot % 2 == 1 || hb.slot % 2 == 1 {
            return Err(bad());
        }
        let pa = [ta.crossing.min(ha.crossing), ta.crossing.max(ha.crossing)];
        let pb = [tb.crossing.min(hb.crossing), tb.crossing.max(hb.crossing)];
        if pa != pb {
            return Err(bad());
        }
        let bigon = self.faces().into_iter().any(|f| f.darts.len() == 2 && f.arcs().any(|x| x == over) && f.arcs().any(|x| x == under));
        if !bigon {
            return Err(bad());
        }
        Ok((ta.crossing, ha.crossing))
    }

    fn r2_delete(&self, over: ArcId, under: ArcId) -> Result<MoveOutcome, DiagramError> {
        let (x, y) = self.r2_bigon(over, under)?;
        let opposite = |c: usize, arc: ArcId| {
            let arcs = self.crossings()[c].arcs;
            let s = arcs.iter().position(|&v| v == arc).expect("arc at crossing");
            arcs[(s + 2) % 4]
        };
        let pairs = [(opposite(x, over), opposite(y, over)), (opposite(x, under), opposite(y, under))];
        let mut d = Draft::from(self);
        d.remove_crossings(&[x, y], &pairs, &[over, under], self.arc_count());
        d.finish()
    }

    /// Validates an R3 triangle and returns, for each strand through it, the
    /// tail and head slots of its middle arc, ordered top, middle, bottom.
    pub fn r3_strands(&self, arcs: [ArcId; 3]) -> Result<[(ArcId, super::Slot, super::Slot); 3], DiagramError> {
        for &a in &arcs {
            self.check_arc(a)?;
        }
        let bad = |why: &str| DiagramError::InvalidSite(format!("arcs {arcs:?} do not bound an R3 triangle: {why}"));
        if arcs[0] == arcs[1] || arcs[1] == arcs[2] || arcs[0] == arcs[2] {
            return Err(bad("arcs repeat"));
        }
        let triangle = self.faces().into_iter().any(|f| {
            let mut got: Vec<ArcId> = f.arcs().collect();
            got.sort_unstable();
            let mut want = arcs.to_vec();
            want.sort_unstable();
            got == want
        });
        if !triangle {
            return Err(bad("no such triangular face"));
        }
        let mut info = Vec::new();
        let mut xs = Vec::new();
        for &a in &arcs {
            let ArcEnds::Open { tail, head } = self.ends(a) else { return Err(bad("loop")) };
            if tail.crossing == head.crossing {
                return Err(bad("kink"));
            }
            xs.push(tail.crossing);
            xs.push(head.crossing);
            // over at a crossing means sitting in an odd slot
            let overs = (tail.slot % 2) + (head.slot % 2);
            info.push((a, tail, head, overs));
        }
        xs.sort_unstable();
        xs.dedup();
        if xs.len() != 3 {
            return Err(bad("needs three distinct crossings"));
        }
        info.sort_by_key(|&(_, _, _, o)| std::cmp::Reverse(o));
        if info.iter().map(|i| i.3).collect::<Vec<_>>() != vec![2, 1, 0] {
            return Err(bad("strand heights are cyclic"));
        }
        Ok([0, 1, 2].map(|i| (info[i].0, info[i].1, info[i].2)))
    }

    fn r3(&self, arcs: [ArcId; 3]) -> Result<MoveOutcome, DiagramError> {
        let strands = self.r3_strands(arcs)?;
        let mut d = Draft::from(self);
        for &(mid, tail, head) in &strands {
            let at = |s: super::Slot, off: usize| self.crossings()[s.crossing].arcs[(s.slot + off) % 4];
            let s_in = at(tail, 2);
            let s_out = at(head, 2);
            d.set_slot(tail.crossing, (tail.slot + 2) % 4, mid);
            d.set_slot(tail.crossing, tail.slot, s_out);
            d.set_slot(head.crossing, head.slot, s_in);
            d.set_slot(head.crossing, (head.slot + 2) % 4, mid);
        }
        d.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn trefoil() -> LinkDiagram {
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    #[test]
    fn r1_insert_signs_and_inverse() {
        let t = trefoil();
        for sign in [Sign::Positive, Sign::Negative] {
            for under_first in [true, false] {
                let out = t.apply_move(&ElementaryMove::R1Insert { arc: 2, sign, under_first }).unwrap();
                let d = &out.diagram;
                assert_eq!(d.crossing_count(), 4);
                assert_eq!(d.sign(3), sign);
                assert_eq!(d.kauffman_bracket_jones(), t.kauffman_bracket_jones());
                let back = d.apply_move(&ElementaryMove::R1Delete { arc: out.marked_arcs[0] }).unwrap();
                assert_eq!(back.diagram, t);
            }
        }
    }

    #[test]
    fn r1_on_loop() {
        let u = LinkDiagram::unknot();
        let out = u.apply_move(&ElementaryMove::R1Insert { arc: 1, sign: Sign::Negative, under_first: true }).unwrap();
        assert_eq!(out.diagram.crossing_count(), 1);
        let back = out.diagram.apply_move(&ElementaryMove::R1Delete { arc: out.marked_arcs[0] }).unwrap();
        assert_eq!(back.diagram, u);
    }

    #[test]
    fn r2_insert_every_placement() {
        let t = trefoil();
        for (a, b) in [(1, 4), (2, 5), (3, 3)] {
            for choice in 0..t.r2_candidates(a, b).len() {
                let out = t.apply_move(&ElementaryMove::R2Insert { over: a, under: b, choice }).unwrap();
                let d = &out.diagram;
                assert_eq!(d.crossing_count(), 5);
                assert_ne!(d.sign(3), d.sign(4));
                assert_eq!(d.kauffman_bracket_jones(), t.kauffman_bracket_jones());
                let [am, bm] = [out.marked_arcs[0], out.marked_arcs[1]];
                let back = d.apply_move(&ElementaryMove::R2Delete { over: am, under: bm }).unwrap();
                assert_eq!(back.diagram, t);
            }
        }
    }

    #[test]
    fn r2_on_unlink() {
        let u = LinkDiagram::unlink(2);
        assert_eq!(u.r2_candidates(1, 2).len(), 4);
        for choice in 0..4 {
            let out = u.apply_move(&ElementaryMove::R2Insert { over: 1, under: 2, choice }).unwrap();
            assert_eq!(out.diagram.kauffman_bracket_jones(), u.kauffman_bracket_jones());
            let back = out.diagram.apply_move(&ElementaryMove::R2Delete { over: out.marked_arcs[0], under: out.marked_arcs[1] }).unwrap();
            assert_eq!(back.diagram, u);
        }
    }

    #[test]
    fn r3_on_braid_closure() {
        let d = LinkDiagram::braid_closure(3, &[1, 2, 1]).unwrap();
        let tri: Vec<_> = d.faces().into_iter().filter(|f| f.darts.len() == 3).collect();
        let mut applied = 0;
        for f in tri {
            let arcs: Vec<ArcId> = f.arcs().collect();
            let arcs = [arcs[0], arcs[1], arcs[2]];
            if let Ok(out) = d.apply_move(&ElementaryMove::R3 { arcs }) {
                applied += 1;
                assert_eq!(out.diagram.kauffman_bracket_jones(), d.kauffman_bracket_jones());
                let again = out.diagram.apply_move(&ElementaryMove::R3 { arcs }).unwrap();
                assert_eq!(again.diagram, d);
            }
        }
        assert!(applied > 0);
    }

    #[test]
    fn alternating_triangle_rejected() {
        let t = trefoil();
        let tri = t.faces().into_iter().find(|f| f.darts.len() == 3).unwrap();
        let arcs: Vec<ArcId> = tri.arcs().collect();
        assert!(t.apply_move(&ElementaryMove::R3 { arcs: [arcs[0], arcs[1], arcs[2]] }).is_err());
    }

    #[test]
    fn saddles() {
        let u = LinkDiagram::unlink(2);
        let m = u.apply_move(&ElementaryMove::Handle1(SurgeryArc { first: 1, second: 2 })).unwrap();
        assert_eq!(m.diagram, LinkDiagram::unknot());
        let s = m.diagram.apply_move(&ElementaryMove::Handle1(SurgeryArc { first: 1, second: 1 })).unwrap();
        assert_eq!(s.diagram, u);
        let t = trefoil();
        let out = t.apply_move(&ElementaryMove::Handle1(SurgeryArc { first: 2, second: 2 })).unwrap();
        assert_eq!(out.diagram.components(), 2);
        assert!(t.apply_move(&ElementaryMove::Handle2 { arc: 1 }).is_err());
    }

    #[test]
    fn relabel_round_trip() {
        let t = trefoil();
        let out = t.apply_move(&ElementaryMove::Relabel { arcs: vec![3, 4, 5, 6, 1, 2], crossings: Some(vec![1, 2, 0]) }).unwrap();
        assert!(out.diagram.is_isomorphic(&t));
    }
}
