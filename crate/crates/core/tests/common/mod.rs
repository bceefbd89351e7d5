//! Oracles written against raw PD text, sharing no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub struct RawPd {
    pub crossings: Vec<[usize; 4]>,
    pub loops: usize,
    pub arcs: usize,
}

pub fn parse(text: &str) -> RawPd {
    let mut crossings = Vec::new();
    let mut loops = 0;
    let mut max = 0;
    for tok in text.split(')').map(str::trim).filter(|t| !t.is_empty()) {
        let (head, body) = tok.split_once('(').expect("X(..) or U(..)");
        let nums: Vec<usize> = body.split(',').map(|n| n.trim().parse().unwrap()).collect();
        max = max.max(*nums.iter().max().unwrap());
        match head.trim() {
            "X" => crossings.push([nums[0], nums[1], nums[2], nums[3]]),
            "U" => loops += 1,
            h => panic!("unknown token {h}"),
        }
    }
    RawPd { crossings, loops, arcs: max }
}

impl RawPd {
    /// `true` where the crossing is positive: the over strand enters at slot 1.
    pub fn signs(&self) -> Vec<bool> {
        let occurrences = |a: usize| -> Vec<(usize, usize)> {
            self.crossings.iter().enumerate().flat_map(|(x, c)| (0..4).filter(move |&s| c[s] == a).map(move |s| (x, s))).collect()
        };
        let mut over_in: Vec<Option<bool>> = vec![None; self.crossings.len()];
        loop {
            let mut changed = false;
            for (x, c) in self.crossings.iter().enumerate() {
                for (s, &a) in c.iter().enumerate() {
                    let incoming = match s {
                        0 => Some(true),
                        2 => Some(false),
                        1 => over_in[x],
                        _ => over_in[x].map(|b| !b),
                    };
                    let Some(inc) = incoming else { continue };
                    // the other end of the arc points the other way
                    let other = occurrences(a).into_iter().find(|&o| o != (x, s)).unwrap();
                    let (ox, os) = other;
                    if os % 2 == 1 && over_in[ox].is_none() {
                        over_in[ox] = Some((os == 1) != inc);
                        changed = true;
                    }
                }
            }
            if !changed {
                match over_in.iter().position(Option::is_none) {
                    Some(x) => over_in[x] = Some(true),
                    None => break,
                }
            }
        }
        over_in.into_iter().map(Option::unwrap).collect()
    }

    pub fn n_plus_minus(&self) -> (i32, i32) {
        let s = self.signs();
        let p = s.iter().filter(|&&b| b).count() as i32;
        (p, s.len() as i32 - p)
    }

    /// Circles of a state, each a sorted list of arcs, plus crossingless loops.
    pub fn circles(&self, state: u64) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..=self.arcs).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (i, c) in self.crossings.iter().enumerate() {
            let pairs = if state >> i & 1 == 0 { [(c[0], c[3]), (c[1], c[2])] } else { [(c[0], c[1]), (c[2], c[3])] };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for a in 1..=self.arcs {
            let r = find(&mut parent, a);
            groups.entry(r).or_default().push(a);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// Kauffman bracket in `A` with `<X> = A<0> + A^-1<1>` and `<O^n> = d^(n-1)`,
/// `d = -A^2 - A^-2`, times `(-A^3)^-w`. Keys are powers of `A`.
pub fn jones_in_a(pd: &RawPd) -> BTreeMap<i32, i64> {
    let k = pd.crossings.len();
    let mut total: BTreeMap<i32, i64> = BTreeMap::new();
    for state in 0..1u64 << k {
        let ones = state.count_ones() as i32;
        let n = pd.circles(state).len() as u32;
        // d^(n-1) by repeated multiplication
        let mut poly: BTreeMap<i32, i64> = BTreeMap::from([(k as i32 - 2 * ones, 1)]);
        for _ in 1..n {
            let mut next = BTreeMap::new();
            for (&e, &c) in &poly {
                *next.entry(e + 2).or_insert(0) -= c;
                *next.entry(e - 2).or_insert(0) -= c;
            }
            poly = next;
        }
        for (e, c) in poly {
            *total.entry(e).or_insert(0) += c;
        }
    }
    let (p, m) = pd.n_plus_minus();
    let w = p - m;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    total.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e - 3 * w, sign * c)).collect()
}

/// Unnormalized Jones in `q`: substitute `A^-2 = -q` and multiply by `q + q^-1`.
pub fn unnormalized_jones(pd: &RawPd) -> BTreeMap<i32, i64> {
    let mut out: BTreeMap<i32, i64> = BTreeMap::new();
    for (e, c) in jones_in_a(pd) {
        assert!(e % 2 == 0, "odd power of A");
        let qe = -e / 2;
        let c = if qe % 2 == 0 { c } else { -c };
        *out.entry(qe + 1).or_insert(0) += c;
        *out.entry(qe - 1).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Rank over GF(2) by schoolbook elimination on rows of bools.
pub fn naive_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                for j in 0..cols {
                    let v = rows[rank][j];
                    rows[r][j] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Khovanov homology over GF(2) by building every chain group densely.
pub fn khovanov_dims(pd: &RawPd) -> BTreeMap<(i32, i32), usize> {
    let k = pd.crossings.len();
    let (np, nm) = pd.n_plus_minus();
    let states: Vec<Vec<Vec<usize>>> = (0..1u64 << k).map(|s| pd.circles(s)).collect();
    // generators: (state, labelling); label bit set = v-
    let mut gens: Vec<(u64, u64, i32, i32)> = Vec::new();
    for (s, circ) in states.iter().enumerate() {
        let n = circ.len();
        for m in 0..1u64 << n {
            let h = s.count_ones() as i32;
            let minus = m.count_ones() as i32;
            gens.push((s as u64, m, h - nm, n as i32 - 2 * minus + h + np - 2 * nm));
        }
    }
    let index: BTreeMap<(u64, u64), usize> = gens.iter().enumerate().map(|(i, g)| ((g.0, g.1), i)).collect();
    let circle_of = |s: u64, arc: usize| states[s as usize].iter().position(|c| c.contains(&arc)).unwrap();

    let mut d: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    for (gi, &(s, m, _, _)) in gens.iter().enumerate() {
        for c in 0..k {
            if s >> c & 1 == 1 {
                continue;
            }
            let t = s | 1 << c;
            let (cs, ct) = (&states[s as usize], &states[t as usize]);
            let label = |i: usize| m >> i & 1;
            let images: Vec<u64> = if ct.len() < cs.len() {
                // merge: circles through the crossing's arcs 0 and 1 join
                let a = circle_of(s, pd.crossings[c][0]);
                let b = circle_of(s, pd.crossings[c][1]);
                let j = circle_of(t, pd.crossings[c][0]);
                let (la, lb) = (label(a), label(b));
                if la == 1 && lb == 1 {
                    vec![]
                } else {
                    let mut out = 0u64;
                    for (i, circ) in cs.iter().enumerate() {
                        if i != a && i != b {
                            out |= label(i) << circle_of(t, circ[0]);
                        }
                    }
                    out |= (la | lb) << j;
                    vec![out]
                }
            } else {
                let a = circle_of(s, pd.crossings[c][0]);
                let j1 = circle_of(t, pd.crossings[c][0]);
                let j2 = circle_of(t, pd.crossings[c][2]);
                let mut base = 0u64;
                for (i, circ) in cs.iter().enumerate() {
                    if i != a {
                        base |= label(i) << circle_of(t, circ[0]);
                    }
                }
                if label(a) == 1 {
                    vec![base | 1 << j1 | 1 << j2]
                } else {
                    vec![base | 1 << j1, base | 1 << j2]
                }
            };
            for im in images {
                d[gi].push(index[&(t, im)]);
            }
        }
    }

    // dims per bidegree: dim C - rank out - rank in
    let mut by_deg: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        by_deg.entry((g.2, g.3)).or_default().push(i);
    }
    let rank_out = |h: i32, q: i32| -> usize {
        let (Some(src), Some(dst)) = (by_deg.get(&(h, q)), by_deg.get(&(h + 1, q))) else { return 0 };
        let pos: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let rows: Vec<Vec<bool>> = src
            .iter()
            .map(|&g| {
                let mut row = vec![false; dst.len()];
                for y in &d[g] {
                    row[pos[y]] ^= true;
                }
                row
            })
            .collect();
        naive_rank(rows)
    };
    let mut out = BTreeMap::new();
    for (&(h, q), v) in &by_deg {
        let dim = v.len() - rank_out(h, q) - rank_out(h - 1, q);
        if dim > 0 {
            out.insert((h, q), dim);
        }
    }
    out
}
