use super::{ArcEnds, ArcId, LinkDiagram, Uf};

/// An arc traversed in a direction; `forward` follows the orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub arc: ArcId,
    pub forward: bool,
}

/// A face of the diagram, listed as the darts that have it on their left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
}

impl Face {
    pub fn contains(&self, d: Dart) -> bool {
        self.darts.contains(&d)
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.darts.iter().map(|d| d.arc)
    }
}

impl LinkDiagram {
    /// Dart following `d` around the face on its left.
    pub fn next_dart(&self, d: Dart) -> Dart {
        match self.ends(d.arc) {
            ArcEnds::Loop => d,
            ArcEnds::Open { tail, head } => {
                let at = if d.forward { head } else { tail };
                let s = (at.slot + 3) % 4;
                let arc = self.crossings()[at.crossing].arcs[s];
                let forward = match self.ends(arc) {
                    ArcEnds::Open { tail, .. } => tail.crossing == at.crossing && tail.slot == s,
                    ArcEnds::Loop => unreachable!("loops do not touch crossings"),
                };
                Dart { arc, forward }
            }
        }
    }

    /// All faces, each starting at its smallest dart, sorted.
    pub fn faces(&self) -> Vec<Face> {
        let n = self.arc_count() as usize;
        let idx = |d: Dart| (d.arc as usize - 1) * 2 + d.forward as usize;
        let mut seen = vec![false; 2 * n];
        let mut faces = Vec::new();
        for a in 1..=n as u32 {
            for forward in [false, true] {
                let start = Dart { arc: a, forward };
                if seen[idx(start)] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = start;
                loop {
                    seen[idx(d)] = true;
                    darts.push(d);
                    d = self.next_dart(d);
                    if d == start {
                        break;
                    }
                }
                faces.push(Face { darts });
            }
        }
        faces
    }

    pub fn face_of(&self, d: Dart) -> Face {
        self.faces().into_iter().find(|f| f.contains(d)).expect("every dart bounds a face")
    }

    /// Euler characteristic check `V - E + F = 2` on every connected piece
    /// of the underlying 4-valent graph.
    pub fn is_planar(&self) -> bool {
        let n = self.arc_count() as usize;
        let mut uf = Uf::new(n);
        for c in self.crossings() {
            for s in 1..4 {
                uf.union(c.arcs[0] as usize - 1, c.arcs[s] as usize - 1);
            }
        }
        let mut v = vec![0i64; n];
        let mut e = vec![0i64; n];
        let mut f = vec![0i64; n];
        for c in self.crossings() {
            v[uf.find(c.arcs[0] as usize - 1)] += 1;
        }
        for a in 0..n {
            e[uf.find(a)] += 1;
        }
        for face in self.faces() {
            f[uf.find(face.darts[0].arc as usize - 1)] += 1;
        }
        (0..n).filter(|&a| uf.find(a) == a).all(|r| {
            // a loop is one vertex-free edge bounding two faces: treat as V=1, E=1
            if v[r] == 0 {
                f[r] == 2
            } else {
                v[r] - e[r] + f[r] == 2
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::diagram::parse_pd;

    #[test]
    fn trefoil_has_five_faces() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let faces = d.faces();
        assert_eq!(faces.len(), 5);
        let mut sizes: Vec<usize> = faces.iter().map(|f| f.darts.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
        assert!(d.is_planar());
    }

    #[test]
    fn loops_have_two_faces() {
        let d = parse_pd("U(1) U(2)").unwrap();
        assert_eq!(d.faces().len(), 4);
        assert!(d.is_planar());
    }

    #[test]
    fn kink_faces() {
        // one-crossing unknot
        let d = parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(d.faces().len(), 3);
        assert!(d.is_planar());
    }
}
