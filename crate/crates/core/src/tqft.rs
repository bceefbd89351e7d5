//! Rank-2 Frobenius rules, the cube of resolutions, handle maps, and the
//! linearized sphere, torus and four-tube checks.
//!
//! Labels are encoded as bits: 0 is `v+` (q-degree +1), 1 is `v-` (q-degree −1).

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chaincx::{FilteredChainMap, FilteredComplex, Generator, HStep};
use crate::diagram::{ArcId, DiagramError, EdgeAction, EdgeData, ElementaryMove, LinkDiagram, MoveOutcome, ResolvedDiagram};
use crate::f2linalg::SparseMap;

pub const DEFAULT_MAX_GENERATORS: usize = 1 << 26;
pub const MAX_GENERATORS_ENV: &str = "LINKHOM_MAX_GENERATORS";

#[derive(Debug, Error)]
pub enum TqftError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("cube would have {needed} generators, above the cap of {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("invalid rule table: {0}")]
    InvalidRule(String),
    #[error("invalid handle site: {0}")]
    InvalidSite(String),
    #[error("subcube mismatch in {0}")]
    Mismatch(String),
    #[error(transparent)]
    Chain(#[from] crate::chaincx::ChainError),
}

/// Generator cap, overridable through `LINKHOM_MAX_GENERATORS`.
pub fn generator_cap() -> usize {
    std::env::var(MAX_GENERATORS_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_GENERATORS)
}

/// A rank-2 Frobenius algebra on `{v+, v-}` with unit `v+` and counit
/// `ε(v-) = 1`, `ε(v+) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusRule {
    pub name: String,
    /// `merge[a][b]`: output labels as a bitmask (bit 0 = `v+`, bit 1 = `v-`).
    pub merge: [[u8; 2]; 2],
    /// `split[a]`: output pairs as a bitmask over `2 * first + second`.
    pub split: [u8; 2],
}

const PLUS: u8 = 0b01;
const MINUS: u8 = 0b10;

fn pair_bit(a: usize, b: usize) -> u8 {
    1 << (2 * a + b)
}

impl FrobeniusRule {
    /// `x² = 0`.
    pub fn khovanov() -> Self {
        FrobeniusRule {
            name: "khovanov".into(),
            merge: [[PLUS, MINUS], [MINUS, 0]],
            split: [pair_bit(0, 1) | pair_bit(1, 0), pair_bit(1, 1)],
        }
    }

    /// `x² = x`, the filtered deformation.
    pub fn bar_natan() -> Self {
        FrobeniusRule {
            name: "bar-natan".into(),
            merge: [[PLUS, MINUS], [MINUS, MINUS]],
            split: [pair_bit(0, 1) | pair_bit(1, 0) | pair_bit(0, 0), pair_bit(1, 1)],
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "kh" | "khovanov" => Some(Self::khovanov()),
            "bn" | "bar-natan" | "lee" => Some(Self::bar_natan()),
            _ => None,
        }
    }

    pub fn merge_outputs(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let m = self.merge[a][b];
        (0..2).filter(move |l| m >> l & 1 == 1)
    }

    pub fn split_outputs(&self, a: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.split[a];
        (0..4).filter(move |i| m >> i & 1 == 1).map(|i| (i >> 1, i & 1))
    }

    pub fn to_table(&self) -> RuleTable {
        let sym = |l: usize| if l == 0 { "+" } else { "-" };
        let mut merge = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                merge.insert(format!("{}{}", sym(a), sym(b)), self.merge_outputs(a, b).map(|l| sym(l).to_string()).collect());
            }
        }
        let mut split = BTreeMap::new();
        for a in 0..2 {
            split.insert(sym(a).to_string(), self.split_outputs(a).map(|(x, y)| format!("{}{}", sym(x), sym(y))).collect());
        }
        RuleTable { name: self.name.clone(), merge, split }
    }

    pub fn from_table(t: &RuleTable) -> Result<Self, TqftError> {
        let lab = |c: char| match c {
            '+' => Ok(0usize),
            '-' => Ok(1usize),
            _ => Err(TqftError::InvalidRule(format!("unknown label '{c}'"))),
        };
        let pair = |s: &str| -> Result<(usize, usize), TqftError> {
            let cs: Vec<char> = s.chars().collect();
            if cs.len() != 2 {
                return Err(TqftError::InvalidRule(format!("expected two labels, got '{s}'")));
            }
            Ok((lab(cs[0])?, lab(cs[1])?))
        };
        let mut merge = [[0u8; 2]; 2];
        for (k, outs) in &t.merge {
            let (a, b) = pair(k)?;
            for o in outs {
                let cs: Vec<char> = o.chars().collect();
                if cs.len() != 1 {
                    return Err(TqftError::InvalidRule(format!("merge output '{o}' is not one label")));
                }
                merge[a][b] ^= 1 << lab(cs[0])?;
            }
        }
        let mut split = [0u8; 2];
        for (k, outs) in &t.split {
            let cs: Vec<char> = k.chars().collect();
            if cs.len() != 1 {
                return Err(TqftError::InvalidRule(format!("split input '{k}' is not one label")));
            }
            let a = lab(cs[0])?;
            for o in outs {
                let (x, y) = pair(o)?;
                split[a] ^= pair_bit(x, y);
            }
        }
        Ok(FrobeniusRule { name: t.name.clone(), merge, split })
    }
}

/// JSON form of a rule: `merge` keys are input label pairs like `"+-"`,
/// `split` keys single labels; values list output terms (mod 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTable {
    pub name: String,
    pub merge: BTreeMap<String, Vec<String>>,
    pub split: BTreeMap<String, Vec<String>>,
}

impl Serialize for FrobeniusRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_table().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrobeniusRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = RuleTable::deserialize(d)?;
        FrobeniusRule::from_table(&t).map_err(serde::de::Error::custom)
    }
}

fn label_q(l: usize) -> i32 {
    if l == 0 {
        1
    } else {
        -1
    }
}

/// Outcome of checking one algebraic identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub holds: bool,
}

// Vectors in V^{⊗n} for n ≤ 3 are bitmasks over basis index Σ label_i << i.
fn merge_vec(rule: &FrobeniusRule, a: usize, b: usize) -> u32 {
    rule.merge[a][b] as u32
}

fn split_vec(rule: &FrobeniusRule, a: usize) -> u32 {
    // reorder to index = first | second << 1
    rule.split_outputs(a).fold(0, |acc, (x, y)| acc ^ (1 << (x | y << 1)))
}

fn basis(v: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| v >> i & 1 == 1)
}

/// Checks associativity, coassociativity, commutativity, the Frobenius
/// identities, unit and counit, and that every structure map lowers `q` by at most one.
pub fn check_frobenius_axioms(rule: &FrobeniusRule) -> Vec<AxiomCheck> {
    let mut out = Vec::new();
    let mut push = |name: &str, holds: bool| out.push(AxiomCheck { name: name.into(), holds });
    let all3 = || (0..8usize).map(|i| (i & 1, i >> 1 & 1, i >> 2 & 1));

    push(
        "associativity",
        all3().all(|(a, b, c)| {
            let left = basis(merge_vec(rule, a, b)).fold(0, |acc, ab| acc ^ merge_vec(rule, ab, c));
            let right = basis(merge_vec(rule, b, c)).fold(0, |acc, bc| acc ^ merge_vec(rule, a, bc));
            left == right
        }),
    );
    push("commutativity", (0..2).all(|a| (0..2).all(|b| rule.merge[a][b] == rule.merge[b][a])));
    push("cocommutativity", (0..2).all(|a| rule.split_outputs(a).all(|(x, y)| rule.split[a] >> (2 * y + x) & 1 == 1)));
    push(
        "coassociativity",
        (0..2).all(|a| {
            let mut left = 0u32;
            let mut right = 0u32;
            for (x, y) in rule.split_outputs(a) {
                for (x1, x2) in rule.split_outputs(x) {
                    left ^= 1 << (x1 | x2 << 1 | y << 2);
                }
                for (y1, y2) in rule.split_outputs(y) {
                    right ^= 1 << (x | y1 << 1 | y2 << 2);
                }
            }
            left == right
        }),
    );
    push(
        "frobenius",
        (0..2).all(|a| {
            (0..2).all(|b| {
                let dm = basis(merge_vec(rule, a, b)).fold(0, |acc, l| acc ^ split_vec(rule, l));
                let mut left = 0u32;
                for (c, d) in rule.split_outputs(b) {
                    for l in rule.merge_outputs(a, c) {
                        left ^= 1 << (l | d << 1);
                    }
                }
                let mut right = 0u32;
                for (c, d) in rule.split_outputs(a) {
                    for l in rule.merge_outputs(d, b) {
                        right ^= 1 << (c | l << 1);
                    }
                }
                dm == left && dm == right
            })
        }),
    );
    push("unit", (0..2).all(|x| rule.merge[0][x] == 1 << x && rule.merge[x][0] == 1 << x));
    push(
        "counit",
        (0..2).all(|x| {
            let mut l = 0u8;
            let mut r = 0u8;
            for (c, d) in rule.split_outputs(x) {
                if c == 1 {
                    l ^= 1 << d;
                }
                if d == 1 {
                    r ^= 1 << c;
                }
            }
            l == 1 << x && r == 1 << x
        }),
    );
    push(
        "filtered",
        (0..2).all(|a| {
            (0..2).all(|b| rule.merge_outputs(a, b).all(|l| label_q(l) >= label_q(a) + label_q(b) - 1))
                && rule.split_outputs(a).all(|(x, y)| label_q(x) + label_q(y) >= label_q(a) - 1)
        }),
    );
    out
}

/// Closed connected surface of genus `g`: `ε ∘ (m Δ)^g ∘ unit`.
pub fn evaluate_closed(rule: &FrobeniusRule, genus: usize) -> bool {
    let mut v: u8 = PLUS;
    for _ in 0..genus {
        let mut next = 0u8;
        for l in 0..2 {
            if v >> l & 1 == 1 {
                for (a, b) in rule.split_outputs(l) {
                    next ^= rule.merge[a][b];
                }
            }
        }
        v = next;
    }
    v & MINUS != 0
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            rec(i + 1, max.max(b), cur, out);
        }
    }
    if n > 0 {
        cur[0] = 0;
        rec(1, 0, &mut cur, &mut out);
    }
    out
}

/// Linear map on `V^{⊗s}` (as rows of output bitmasks per basis element)
/// given by a tube joining disks `i` and `j`.
fn tube_map(rule: &FrobeniusRule, sheets: usize, si: usize, sj: usize) -> Vec<u32> {
    (0..1usize << sheets)
        .map(|x| {
            let mut out = 0u32;
            if si == sj {
                let l = x >> si & 1;
                for (a, b) in rule.split_outputs(l) {
                    for r in rule.merge_outputs(a, b) {
                        out ^= 1 << ((x & !(1 << si)) | r << si);
                    }
                }
            } else {
                let (a, b) = (x >> si & 1, x >> sj & 1);
                for l in rule.merge_outputs(a, b) {
                    for (c, d) in rule.split_outputs(l) {
                        out ^= 1 << ((x & !(1 << si) & !(1 << sj)) | c << si | d << sj);
                    }
                }
            }
            out
        })
        .collect()
}

/// The four-tube relation `Σ12 + Σ34 = Σ13 + Σ24` for four disks spread over
/// identity sheets in every possible way.
pub fn check_4tu(rule: &FrobeniusRule) -> bool {
    set_partitions(4).into_iter().all(|p| {
        let sheets = p.iter().max().unwrap() + 1;
        let t = |i: usize, j: usize| tube_map(rule, sheets, p[i], p[j]);
        let (t12, t34, t13, t24) = (t(0, 1), t(2, 3), t(0, 2), t(1, 3));
        (0..t12.len()).all(|x| t12[x] ^ t34[x] == t13[x] ^ t24[x])
    })
}

/// Sphere and torus both evaluate to zero.
pub fn check_sphere_torus(rule: &FrobeniusRule) -> bool {
    !evaluate_closed(rule, 0) && !evaluate_closed(rule, 1)
}

/// Images of a labelling across a saddle.
pub(crate) fn edge_images(rule: &FrobeniusRule, edge: &EdgeData, mask: u64) -> Vec<u64> {
    let mut base = 0u64;
    for (i, p) in edge.passive.iter().enumerate() {
        if let Some(j) = p {
            base |= (mask >> i & 1) << j;
        }
    }
    match edge.action {
        EdgeAction::Merge { a, b, into } => {
            let (la, lb) = ((mask >> a & 1) as usize, (mask >> b & 1) as usize);
            rule.merge_outputs(la, lb).map(|l| base | (l as u64) << into).collect()
        }
        EdgeAction::Split { from, into: (c1, c2) } => {
            let l = (mask >> from & 1) as usize;
            rule.split_outputs(l).map(|(x, y)| base | (x as u64) << c1 | (y as u64) << c2).collect()
        }
    }
}

/// The (sub)cube of resolutions of a diagram with its generators laid out
/// as `offset[vertex] + labelling`.
#[derive(Clone, Debug)]
pub struct Cube {
    diagram: LinkDiagram,
    rule: FrobeniusRule,
    /// Resolution bit patterns of the vertices, ascending.
    vertices: Vec<u64>,
    resolved: Vec<ResolvedDiagram>,
    offsets: Vec<usize>,
    complex: FilteredComplex,
}

impl Cube {
    pub fn new(d: &LinkDiagram, rule: &FrobeniusRule) -> Result<Self, TqftError> {
        Self::partial(d, rule, &vec![None; d.crossing_count()])
    }

    /// Only the vertices agreeing with `fixed` where it is set.
    pub fn partial(d: &LinkDiagram, rule: &FrobeniusRule, fixed: &[Option<bool>]) -> Result<Self, TqftError> {
        let k = d.crossing_count();
        if fixed.len() != k {
            return Err(DiagramError::LengthMismatch { expected: k, got: fixed.len() }.into());
        }
        if k > crate::diagram::Resolution::MAX_CROSSINGS {
            return Err(TqftError::CapExceeded { needed: usize::MAX, cap: generator_cap() });
        }
        let free: Vec<usize> = (0..k).filter(|&i| fixed[i].is_none()).collect();
        let base: u64 = (0..k).filter(|&i| fixed[i] == Some(true)).fold(0, |acc, i| acc | 1 << i);
        let cap = generator_cap();
        if free.len() >= 40 {
            return Err(TqftError::CapExceeded { needed: usize::MAX, cap });
        }
        let vertices: Vec<u64> = (0..1u64 << free.len())
            .map(|m| free.iter().enumerate().fold(base, |acc, (j, &c)| acc | (m >> j & 1) << c))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let resolved: Vec<ResolvedDiagram> = vertices.par_iter().map(|&v| d.resolve_partial(|i| v >> i & 1 == 1)).collect();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut total = 0usize;
        for r in &resolved {
            offsets.push(total);
            total = total.saturating_add(1usize << r.circle_count());
            if total > cap {
                return Err(TqftError::CapExceeded { needed: total, cap });
            }
        }
        offsets.push(total);

        let n_plus = d.n_plus() as i32;
        let n_minus = d.n_minus() as i32;
        let gens: Vec<Generator> = vertices
            .par_iter()
            .zip(resolved.par_iter())
            .flat_map_iter(|(&v, r)| {
                let height = v.count_ones() as i32;
                let c = r.circle_count();
                let bits: String = (0..k).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect();
                (0..1u64 << c).map(move |m| {
                    let minus = m.count_ones() as i32;
                    let labels: String = (0..c).map(|i| if m >> i & 1 == 1 { '-' } else { '+' }).collect();
                    Generator::new(height - n_minus, c as i32 - 2 * minus + height + n_plus - 2 * n_minus, format!("{bits}|{labels}"))
                })
            })
            .collect();

        let index: HashMap<u64, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let cols: Vec<Vec<u32>> = (0..vertices.len())
            .into_par_iter()
            .flat_map_iter(|vi| {
                let v = vertices[vi];
                let edges: Vec<(usize, EdgeData)> = free
                    .iter()
                    .filter(|&&c| v >> c & 1 == 0)
                    .map(|&c| {
                        let wi = index[&(v | 1 << c)];
                        let e = d.edge_between(&resolved[vi], &resolved[wi], c).expect("planar diagrams have no 1-1 edges");
                        (wi, e)
                    })
                    .collect();
                let offsets = &offsets;
                (0..1u64 << resolved[vi].circle_count()).map(move |m| {
                    let mut col = Vec::new();
                    for (wi, e) in &edges {
                        for t in edge_images(rule, e, m) {
                            col.push((offsets[*wi] as u64 + t) as u32);
                        }
                    }
                    col
                })
            })
            .collect();
        let complex = FilteredComplex::new(gens, SparseMap::from_columns(total, cols), HStep::Exact).expect("square differential");
        Ok(Cube { diagram: d.clone(), rule: rule.clone(), vertices, resolved, offsets, complex })
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    pub fn into_complex(self) -> FilteredComplex {
        self.complex
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn rule(&self) -> &FrobeniusRule {
        &self.rule
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn vertex_index(&self, bits: u64) -> Option<usize> {
        self.vertices.binary_search(&bits).ok()
    }

    pub fn resolved(&self, vi: usize) -> &ResolvedDiagram {
        &self.resolved[vi]
    }

    pub fn offset(&self, vi: usize) -> usize {
        self.offsets[vi]
    }

    pub fn generator(&self, vi: usize, mask: u64) -> usize {
        self.offsets[vi] + mask as usize
    }

    /// Vertex index and labelling of a generator.
    pub fn locate(&self, g: usize) -> (usize, u64) {
        let vi = self.offsets.partition_point(|&o| o <= g) - 1;
        (vi, (g - self.offsets[vi]) as u64)
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }
}

pub fn cube_complex(d: &LinkDiagram, rule: &FrobeniusRule) -> Result<FilteredComplex, TqftError> {
    Ok(Cube::new(d, rule)?.into_complex())
}

/// The complex built by coning off one crossing at a time, crossing 0
/// outermost. Each level is `cone(C(D with c at 0) -> C(D with c at 1))`,
/// with the edge map carried into the bases produced by the recursion.
pub fn iterated_cone(d: &LinkDiagram, rule: &FrobeniusRule) -> Result<FilteredComplex, TqftError> {
    let mut fixed = vec![None; d.crossing_count()];
    cone_level(d, rule, &mut fixed, 0)
}

fn cone_level(d: &LinkDiagram, rule: &FrobeniusRule, fixed: &mut Vec<Option<bool>>, c: usize) -> Result<FilteredComplex, TqftError> {
    if c == fixed.len() {
        return Ok(Cube::partial(d, rule, fixed)?.into_complex());
    }
    fixed[c] = Some(false);
    let lo_cx = cone_level(d, rule, fixed, c + 1)?;
    let lo = Cube::partial(d, rule, fixed)?;
    fixed[c] = Some(true);
    let hi_cx = cone_level(d, rule, fixed, c + 1)?;
    let hi = Cube::partial(d, rule, fixed)?;
    fixed[c] = None;

    let f = crossing_edge_map(&lo, &hi, c);
    let into_lo = lo_cx.match_by_tags(lo.complex()).ok_or_else(|| TqftError::Mismatch("lower half".into()))?;
    let into_hi = hi_cx.match_by_tags(hi.complex()).ok_or_else(|| TqftError::Mismatch("upper half".into()))?;
    let mut back = vec![0u32; into_hi.len()];
    for (i, &j) in into_hi.iter().enumerate() {
        back[j] = i as u32;
    }
    let cols = into_lo
        .iter()
        .map(|&j| f.matrix.column(j).iter().map(|&r| back[r as usize]).sorted_unstable().collect())
        .collect();
    let g = FilteredChainMap::new(SparseMap::from_columns(hi_cx.dim(), cols), f.h_degree, f.q_degree);
    Ok(FilteredComplex::cone(&g, &lo_cx, &hi_cx)?)
}

/// The map between the two halves of a subcube along crossing `c`, from the
/// subcube with `c` at 0 to the one with `c` at 1.
pub fn crossing_edge_map(lo: &Cube, hi: &Cube, c: usize) -> FilteredChainMap {
    let d = &lo.diagram;
    let cols: Vec<Vec<u32>> = (0..lo.vertices.len())
        .into_par_iter()
        .flat_map_iter(|vi| {
            let v = lo.vertices[vi];
            let wi = hi.vertex_index(v | 1 << c).expect("matching vertex");
            let e = d.edge_between(&lo.resolved[vi], &hi.resolved[wi], c).expect("planar edge");
            let off = hi.offsets[wi];
            (0..1u64 << lo.resolved[vi].circle_count()).map(move |m| edge_images(&lo.rule, &e, m).into_iter().map(|t| (off as u64 + t) as u32).collect())
        })
        .collect();
    FilteredChainMap::new(SparseMap::from_columns(hi.dim(), cols), 1, 0)
}

/// Builds a map between cubes with the same crossings vertex by vertex.
/// `vertex_map` sends source resolution bits to target bits; `f` gives the
/// target labellings of a source labelling.
pub(crate) fn vertexwise_map(
    src: &Cube,
    dst: &Cube,
    vertex_map: impl Fn(u64) -> u64 + Sync,
    f: impl Fn(&ResolvedDiagram, &ResolvedDiagram, u64) -> Result<Vec<u64>, TqftError> + Sync,
) -> Result<SparseMap, TqftError> {
    let cols: Result<Vec<Vec<Vec<u32>>>, TqftError> = (0..src.vertices.len())
        .into_par_iter()
        .map(|vi| {
            let wi = dst.vertex_index(vertex_map(src.vertices[vi])).expect("vertex correspondence");
            let (rs, rt) = (&src.resolved[vi], &dst.resolved[wi]);
            (0..1u64 << rs.circle_count())
                .map(|m| Ok(f(rs, rt, m)?.into_iter().map(|t| (dst.offsets[wi] as u64 + t) as u32).collect()))
                .collect()
        })
        .collect();
    Ok(SparseMap::from_columns(dst.dim(), cols?.into_iter().flatten().collect()))
}

/// Sends the circles of `rs` to circles of `rt` through an arc map; circles
/// whose arcs all vanish map to `None`.
pub(crate) fn circle_images(rs: &ResolvedDiagram, rt: &ResolvedDiagram, arc_map: &[Option<ArcId>]) -> Vec<Option<usize>> {
    rs.circles().iter().map(|arcs| arcs.iter().find_map(|&a| arc_map[a as usize - 1]).map(|b| rt.circle_of(b))).collect()
}

/// The chain map of a relabeling, a handle attachment, or (as an
/// isomorphism) anything else that keeps crossings and only renames arcs.
pub fn handle_map(d: &LinkDiagram, m: &ElementaryMove, rule: &FrobeniusRule) -> Result<(MoveOutcome, Cube, Cube, FilteredChainMap), TqftError> {
    let out = d.apply_move(m)?;
    let src = Cube::new(d, rule)?;
    let dst = Cube::new(&out.diagram, rule)?;
    let map = handle_map_between(&src, &dst, m, &out)?;
    Ok((out, src, dst, map))
}

pub(crate) fn handle_map_between(src: &Cube, dst: &Cube, m: &ElementaryMove, out: &MoveOutcome) -> Result<FilteredChainMap, TqftError> {
    let arc_map = &out.arc_map;
    let crossing_map: Vec<usize> = out.crossing_map.iter().map(|c| c.expect("handles keep crossings")).collect();
    let vmap = |v: u64| (0..crossing_map.len()).fold(0u64, |acc, i| acc | (v >> i & 1) << crossing_map[i]);
    let passive = |rs: &ResolvedDiagram, rt: &ResolvedDiagram, mask: u64, skip: &[usize]| -> u64 {
        circle_images(rs, rt, arc_map)
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .fold(0u64, |acc, (i, img)| acc | (mask >> i & 1) << img.expect("passive circle survives"))
    };
    let (matrix, q_degree) = match m {
        ElementaryMove::Relabel { .. } => (vertexwise_map(src, dst, vmap, |rs, rt, mask| Ok(vec![passive(rs, rt, mask, &[])]))?, 0),
        ElementaryMove::Handle0 => {
            // the new circle carries v+, i.e. label bit 0
            (vertexwise_map(src, dst, vmap, |rs, rt, mask| Ok(vec![passive(rs, rt, mask, &[])]))?, 1)
        }
        ElementaryMove::Handle2 { arc } => {
            let arc = *arc;
            (vertexwise_map(src, dst, vmap, |rs, rt, mask| {
                let c = rs.circle_of(arc);
                Ok(if mask >> c & 1 == 1 { vec![passive(rs, rt, mask, &[c])] } else { vec![] })
            })?, 1)
        }
        ElementaryMove::Handle1(s) => {
            let rule = &src.rule;
            let (e1, e2) = (s.first, s.second);
            let new_loop = out.marked_arcs.first().copied();
            (vertexwise_map(src, dst, vmap, |rs, rt, mask| {
                let (c1, c2) = (rs.circle_of(e1), rs.circle_of(e2));
                let t1 = rt.circle_of(arc_map[e1 as usize - 1].expect("saddle arc survives"));
                if c1 != c2 {
                    let base = passive(rs, rt, mask, &[c1, c2]);
                    let (l1, l2) = ((mask >> c1 & 1) as usize, (mask >> c2 & 1) as usize);
                    Ok(rule.merge_outputs(l1, l2).map(|l| base | (l as u64) << t1).collect())
                } else {
                    let t2 = match new_loop {
                        Some(nl) => rt.circle_of(nl),
                        None => rt.circle_of(arc_map[e2 as usize - 1].expect("saddle arc survives")),
                    };
                    if t1 == t2 {
                        return Err(TqftError::InvalidSite(format!("saddle on arcs {e1}, {e2} is non-orientable in some resolution")));
                    }
                    let base = passive(rs, rt, mask, &[c1]);
                    let l = (mask >> c1 & 1) as usize;
                    Ok(rule.split_outputs(l).map(|(x, y)| base | (x as u64) << t1 | (y as u64) << t2).collect())
                }
            })?, -1)
        }
        other => return Err(TqftError::InvalidSite(format!("{} is not a handle or relabeling", other.name()))),
    };
    Ok(FilteredChainMap::new(matrix, 0, q_degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_pd, SurgeryArc};

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn axioms_hold_for_both_rules() {
        for rule in [FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()] {
            for c in check_frobenius_axioms(&rule) {
                assert!(c.holds, "{} fails {}", rule.name, c.name);
            }
            assert!(check_4tu(&rule));
            assert!(check_sphere_torus(&rule));
            assert!(!evaluate_closed(&rule, 2));
        }
    }

    #[test]
    fn iterated_cone_is_the_cube() {
        let d = parse_pd("X(1,2,5,4) X(3,7,6,5) X(4,6,8,1) X(7,3,2,8)").unwrap();
        for rule in [FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()] {
            let cone = iterated_cone(&d, &rule).unwrap();
            assert!(cone.same_as(&cube_complex(&d, &rule).unwrap()));
        }
        let u = crate::diagram::LinkDiagram::unknot();
        assert!(iterated_cone(&u, &FrobeniusRule::khovanov()).unwrap().same_as(&cube_complex(&u, &FrobeniusRule::khovanov()).unwrap()));
    }

    #[test]
    fn union_is_tensor() {
        let a = parse_pd(TREFOIL).unwrap();
        let b = parse_pd("X(1,2,4,3) X(3,4,2,1)").unwrap();
        let rule = FrobeniusRule::bar_natan();
        let joined = cube_complex(&a.disjoint_union(&b), &rule).unwrap();
        let tensor = cube_complex(&a, &rule).unwrap().tensor(&cube_complex(&b, &rule).unwrap()).retag(|t| {
            let (l, r) = t.split_once('⊗').unwrap();
            let (lb, ll) = l.split_once('|').unwrap();
            let (rb, rl) = r.split_once('|').unwrap();
            format!("{lb}{rb}|{ll}{rl}")
        });
        assert!(joined.same_as(&tensor));
    }

    #[test]
    fn corrupted_rule_fails_4tu() {
        let mut bad = FrobeniusRule::khovanov();
        bad.merge[1][1] = PLUS;
        assert!(!check_4tu(&bad));
    }

    #[test]
    fn table_round_trip() {
        for rule in [FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()] {
            let json = serde_json::to_string(&rule).unwrap();
            let back: FrobeniusRule = serde_json::from_str(&json).unwrap();
            assert_eq!(back, rule);
        }
    }

    #[test]
    fn unknot_cube() {
        let c = cube_complex(&LinkDiagram::unknot(), &FrobeniusRule::khovanov()).unwrap();
        assert_eq!(c.dim(), 2);
        let bi = c.homology().bigraded.unwrap();
        assert_eq!((bi.dim(0, 1), bi.dim(0, -1)), (1, 1));
    }

    #[test]
    fn trefoil_cube_matches_jones() {
        let d = parse_pd(TREFOIL).unwrap();
        let c = cube_complex(&d, &FrobeniusRule::khovanov()).unwrap();
        assert!(c.is_valid());
        assert!(c.is_graded());
        let bi = c.homology().bigraded.unwrap();
        assert_eq!(bi.euler_characteristic(), d.kauffman_bracket_jones());
        assert_eq!(bi.total(), 6);
        let bn = cube_complex(&d, &FrobeniusRule::bar_natan()).unwrap();
        assert!(bn.is_valid());
        assert!(!bn.is_graded());
        assert_eq!(bn.homology().total, 2);
    }

    #[test]
    fn movie_move_fifteen_on_the_nose() {
        let d = parse_pd(TREFOIL).unwrap();
        let rule = FrobeniusRule::khovanov();
        let (out0, c0, c1, birth) = handle_map(&d, &ElementaryMove::Handle0, &rule).unwrap();
        let new = out0.marked_arcs[0];
        let (out1, _, c2, saddle) = handle_map(&out0.diagram, &ElementaryMove::Handle1(SurgeryArc { first: new, second: 2 }), &rule).unwrap();
        assert!(birth.is_chain_map(&c0.complex, &c1.complex));
        assert!(saddle.is_chain_map(&c1.complex, &c2.complex));
        assert_eq!(out1.diagram, d);
        assert_eq!(saddle.compose(&birth).matrix, SparseMap::identity(c0.dim()));
    }

    #[test]
    fn birth_then_death_is_zero() {
        let rule = FrobeniusRule::bar_natan();
        let u = LinkDiagram::unknot();
        let (o, _, _, birth) = handle_map(&u, &ElementaryMove::Handle0, &rule).unwrap();
        let (_, _, _, death) = handle_map(&o.diagram, &ElementaryMove::Handle2 { arc: o.marked_arcs[0] }, &rule).unwrap();
        assert!(death.compose(&birth).is_zero());
    }

    #[test]
    fn partitions_of_four() {
        assert_eq!(set_partitions(4).len(), 15);
    }
}
