//! Decorated cubes: configurations, higher-differential rules, the `H_c`
//! maps and change of decoration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chaincx::{FilteredComplex, HStep};
use crate::diagram::{ArcId, ElementaryMove, LinkDiagram, ResolvedDiagram, Sign, Slot};
use crate::f2linalg::SparseMap;
use crate::tqft::{Cube, FrobeniusRule, TqftError};

#[derive(Debug, Error)]
pub enum SzaboError {
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error("resolutions {0} and {1} are not comparable")]
    NotComparable(String, String),
    #[error("rule {rule} gives d² ≠ 0: {witness}")]
    RuleInconsistent { rule: String, witness: String },
    #[error("invalid rule table: {0}")]
    InvalidTable(String),
    #[error("decoration has {got} bits, diagram has {expected} crossings")]
    LengthMismatch { expected: usize, got: usize },
}

/// Orientation of the surgery arc at each crossing, read on the all-zeros
/// resolution: `false` runs from the strand through slots 0,3 to the strand
/// through slots 1,2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decoration {
    pub bits: Vec<bool>,
}

impl Decoration {
    pub fn standard(crossings: usize) -> Self {
        Decoration { bits: vec![false; crossings] }
    }

    pub fn flipped(&self, c: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[c] = !bits[c];
        Decoration { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// One endpoint of an oriented arc on a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub arc: usize,
    pub head: bool,
}

/// Circles of `D(I)` touched by the arcs of the crossings in `J − I`, with
/// the arc endpoints in the order met walking along each circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    /// Crossings where `I` and `J` differ, ascending; arc `j` sits at `crossings[j]`.
    pub crossings: Vec<usize>,
    /// Active circles, as indices into the circles of `D(I)`.
    pub circles: Vec<usize>,
    /// Endpoint sequence along each active circle.
    pub sequences: Vec<Vec<Endpoint>>,
    /// `segments[i][p]`: output circle (index into `outputs`) containing the
    /// stretch of circle `i` after endpoint `p`.
    pub segments: Vec<Vec<usize>>,
    /// Circles of `D(J)` made from active circles.
    pub outputs: Vec<usize>,
    /// Untouched circles: (index in `D(I)`, index in `D(J)`).
    pub passive: Vec<(usize, usize)>,
}

/// Canonical form of a configuration up to relabeling arcs and circles,
/// rotating and reversing each circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: String,
    /// Canonical circle `i` is active circle `circle_perm[i]`.
    pub circle_perm: Vec<usize>,
    /// Canonical output `i` is output `output_perm[i]`.
    pub output_perm: Vec<usize>,
}

const MAX_CANONICAL_ARCS: usize = 7;

fn endpoint_str(e: &Endpoint) -> String {
    format!("{}{}", e.arc, if e.head { 'h' } else { 't' })
}

/// Best rotation/reflection of one circle: (events, variant (r, reflected)).
fn min_variant(seq: &[Endpoint]) -> (Vec<Endpoint>, (usize, bool)) {
    let m = seq.len();
    let mut best: Option<(Vec<Endpoint>, (usize, bool))> = None;
    for refl in [false, true] {
        for r in 0..m {
            let v: Vec<Endpoint> = (0..m).map(|p| if refl { seq[(r + m - p) % m] } else { seq[(r + p) % m] }).collect();
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, (r, refl)));
            }
        }
    }
    best.unwrap_or_default()
}

fn segment_source(m: usize, (r, refl): (usize, bool), p: usize) -> usize {
    if refl {
        (r + 2 * m - p - 1) % m
    } else {
        (r + p) % m
    }
}

fn canonical_key_of(sequences: &[Vec<Endpoint>], arcs: usize) -> Option<(String, Vec<usize>, Vec<(usize, bool)>)> {
    if arcs > MAX_CANONICAL_ARCS {
        return None;
    }
    let mut best: Option<(Vec<Vec<Endpoint>>, Vec<usize>, Vec<(usize, bool)>)> = None;
    for perm in (0..arcs).permutations(arcs) {
        let mut reps: Vec<(Vec<Endpoint>, usize, (usize, bool))> = sequences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let relabeled: Vec<Endpoint> = s.iter().map(|e| Endpoint { arc: perm[e.arc], head: e.head }).collect();
                let (v, var) = min_variant(&relabeled);
                (v, i, var)
            })
            .collect();
        reps.sort();
        let key: Vec<Vec<Endpoint>> = reps.iter().map(|r| r.0.clone()).collect();
        if best.as_ref().map_or(true, |(b, _, _)| key < *b) {
            best = Some((key, reps.iter().map(|r| r.1).collect(), reps.iter().map(|r| r.2).collect()));
        }
    }
    let (key, order, variants) = best?;
    let s = key.iter().map(|c| c.iter().map(endpoint_str).collect::<String>()).join("|");
    Some((s, order, variants))
}

fn parse_key(key: &str) -> Result<Vec<Vec<Endpoint>>, SzaboError> {
    key.split('|')
        .map(|circle| {
            let mut out = Vec::new();
            let mut num = String::new();
            for ch in circle.chars() {
                match ch {
                    '0'..='9' => num.push(ch),
                    't' | 'h' => {
                        let arc = num.parse().map_err(|_| SzaboError::InvalidTable(format!("bad key '{key}'")))?;
                        out.push(Endpoint { arc, head: ch == 'h' });
                        num.clear();
                    }
                    _ => return Err(SzaboError::InvalidTable(format!("bad key '{key}'"))),
                }
            }
            if !num.is_empty() || out.is_empty() {
                return Err(SzaboError::InvalidTable(format!("bad key '{key}'")));
            }
            Ok(out)
        })
        .collect()
}

impl Configuration {
    pub fn dimension(&self) -> usize {
        self.crossings.len()
    }

    /// Whether the active circles and arcs form one connected piece.
    pub fn is_connected(&self) -> bool {
        let n = self.circles.len();
        let mut arc_circles: Vec<Vec<usize>> = vec![Vec::new(); self.dimension()];
        for (i, s) in self.sequences.iter().enumerate() {
            for e in s {
                arc_circles[e.arc].push(i);
            }
        }
        let mut uf = crate::diagram::Uf::new(n);
        for cs in &arc_circles {
            for w in cs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        (0..n).map(|i| uf.find(i)).collect::<BTreeSet<_>>().len() <= 1
    }

    pub fn canonical(&self) -> Option<Canonical> {
        let (key, order, variants) = canonical_key_of(&self.sequences, self.dimension())?;
        // outputs ordered by the first canonical segment they contain
        let mut first: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); self.outputs.len()];
        for (ci, (&i, &var)) in order.iter().zip(&variants).enumerate() {
            let m = self.sequences[i].len();
            for p in 0..m {
                let o = self.segments[i][segment_source(m, var, p)];
                first[o] = first[o].min((ci, p));
            }
        }
        let mut output_perm: Vec<usize> = (0..self.outputs.len()).collect();
        output_perm.sort_by_key(|&o| first[o]);
        Some(Canonical { key, circle_perm: order, output_perm })
    }

    /// Same configuration with arc `j` reversed.
    pub fn flip_arc(&self, j: usize) -> Configuration {
        let mut c = self.clone();
        for s in &mut c.sequences {
            for e in s {
                if e.arc == j {
                    e.head = !e.head;
                }
            }
        }
        c
    }
}

fn partner(slot: usize, one: bool) -> usize {
    match (one, slot) {
        (false, 0) => 3,
        (false, 3) => 0,
        (false, 1) => 2,
        (false, 2) => 1,
        (true, 0) => 1,
        (true, 1) => 0,
        (true, 2) => 3,
        (true, 3) => 2,
        _ => unreachable!("slots are 0..4"),
    }
}

pub(crate) fn configuration_between(
    d: &LinkDiagram,
    i_bits: u64,
    j_bits: u64,
    t: &Decoration,
    ri: &ResolvedDiagram,
    rj: &ResolvedDiagram,
) -> Configuration {
    let diff = j_bits & !i_bits;
    let crossings: Vec<usize> = (0..d.crossing_count()).filter(|&c| diff >> c & 1 == 1).collect();
    let arc_of = |c: usize| crossings.binary_search(&c).ok();
    let mut sequences = Vec::new();
    let mut seg_arcs: Vec<Vec<ArcId>> = Vec::new();
    let mut circles = Vec::new();
    let mut passive = Vec::new();
    for (ci, arcs) in ri.circles().iter().enumerate() {
        let start = arcs[0];
        let mut events = Vec::new();
        let mut segs = Vec::new();
        if !d.is_loop(start) {
            let (mut arc, mut forward) = (start, true);
            loop {
                let end = if forward { d.head(arc) } else { d.tail(arc) }.expect("open arc");
                let (x, s) = (end.crossing, end.slot);
                let s2 = partner(s, i_bits >> x & 1 == 1);
                let next = d.crossings()[x].arcs[s2];
                let next_forward = d.tail(next) == Some(Slot { crossing: x, slot: s2 });
                if let Some(j) = arc_of(x) {
                    let on_b = s == 1 || s == 2;
                    events.push(Endpoint { arc: j, head: on_b != t.bits[x] });
                    segs.push(next);
                }
                arc = next;
                forward = next_forward;
                if arc == start && forward {
                    break;
                }
            }
        }
        if events.is_empty() {
            passive.push((ci, rj.circle_of(start)));
        } else {
            circles.push(ci);
            sequences.push(events);
            seg_arcs.push(segs);
        }
    }
    let outputs: Vec<usize> = seg_arcs.iter().flatten().map(|&a| rj.circle_of(a)).collect::<BTreeSet<_>>().into_iter().collect();
    let segments = seg_arcs.iter().map(|s| s.iter().map(|&a| outputs.binary_search(&rj.circle_of(a)).expect("output")).collect()).collect();
    Configuration { crossings, circles, sequences, segments, outputs, passive }
}

fn bits_string(bits: u64, k: usize) -> String {
    (0..k).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// The configuration of the face from `I` to `J`.
pub fn face_configuration(d: &LinkDiagram, i: u64, j: u64, t: &Decoration) -> Result<Configuration, SzaboError> {
    let k = d.crossing_count();
    if t.len() != k {
        return Err(SzaboError::LengthMismatch { expected: k, got: t.len() });
    }
    if i & !j != 0 || i == j || j >> k != 0 {
        return Err(SzaboError::NotComparable(bits_string(i, k), bits_string(j, k)));
    }
    let ri = d.resolve_partial(|c| i >> c & 1 == 1);
    let rj = d.resolve_partial(|c| j >> c & 1 == 1);
    Ok(configuration_between(d, i, j, t, &ri, &rj))
}

/// Maps for configurations, on labellings of the active circles (bit `i`
/// is circle `i`, set for `v-`) to labellings of the outputs.
pub trait HigherRule: Sync {
    fn name(&self) -> &str;
    /// Largest dimension with possibly nonzero maps.
    fn max_dimension(&self) -> usize;
    fn apply(&self, config: &Configuration, input: u64) -> Vec<u64>;
    /// Whether the rule assigns maps to both orientations of some arc, so
    /// the change-of-decoration identity can be tested.
    fn orientation_sensitive(&self) -> bool {
        false
    }
}

fn khovanov_edge(config: &Configuration, input: u64) -> Vec<u64> {
    let kh = FrobeniusRule::khovanov();
    match (config.circles.len(), config.outputs.len()) {
        (2, 1) => kh.merge_outputs((input & 1) as usize, (input >> 1 & 1) as usize).map(|l| l as u64).collect(),
        (1, 2) => kh.split_outputs((input & 1) as usize).map(|(a, b)| a as u64 | (b as u64) << 1).collect(),
        _ => Vec::new(),
    }
}

/// Khovanov edge maps and nothing in dimension two or more.
#[derive(Clone, Copy, Debug, Default)]
pub struct KhovanovOnly;

impl HigherRule for KhovanovOnly {
    fn name(&self) -> &str {
        "khovanov-only"
    }

    fn max_dimension(&self) -> usize {
        1
    }

    fn apply(&self, config: &Configuration, input: u64) -> Vec<u64> {
        if config.dimension() == 1 {
            khovanov_edge(config, input)
        } else {
            Vec::new()
        }
    }
}

/// JSON form: canonical key → list of `[input, output]` labelling strings
/// over canonical circles and canonical outputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTableJson {
    pub name: String,
    pub entries: BTreeMap<String, Vec<(String, String)>>,
}

/// A rule given by a table. Missing one-dimensional keys fall back to the
/// Khovanov edge maps; other missing keys map to zero.
#[derive(Clone, Debug)]
pub struct TableRule {
    name: String,
    entries: HashMap<String, Vec<(u64, u64)>>,
    max_dim: usize,
    orientation_sensitive: bool,
}

fn parse_labels(s: &str) -> Result<u64, SzaboError> {
    s.chars().enumerate().try_fold(0u64, |acc, (i, ch)| match ch {
        '+' => Ok(acc),
        '-' => Ok(acc | 1 << i),
        _ => Err(SzaboError::InvalidTable(format!("bad labelling '{s}'"))),
    })
}

fn label_string(bits: u64, n: usize) -> String {
    (0..n).map(|i| if bits >> i & 1 == 1 { '-' } else { '+' }).collect()
}

impl TableRule {
    pub fn from_json(t: &RuleTableJson) -> Result<Self, SzaboError> {
        let mut entries = HashMap::new();
        let mut max_dim = 1;
        let mut seqs = Vec::new();
        for (key, pairs) in &t.entries {
            let seq = parse_key(key)?;
            let arcs = seq.iter().flatten().map(|e| e.arc).max().map_or(0, |a| a + 1);
            match canonical_key_of(&seq, arcs) {
                Some((k, _, _)) if &k == key => {}
                _ => return Err(SzaboError::InvalidTable(format!("key '{key}' is not in canonical form"))),
            }
            max_dim = max_dim.max(arcs);
            let mut v = Vec::new();
            for (i, o) in pairs {
                if i.len() != seq.len() {
                    return Err(SzaboError::InvalidTable(format!("input '{i}' has wrong length for '{key}'")));
                }
                v.push((parse_labels(i)?, parse_labels(o)?));
            }
            entries.insert(key.clone(), v);
            seqs.push((seq, arcs));
        }
        let orientation_sensitive = seqs.iter().any(|(seq, arcs)| {
            *arcs >= 2
                && (0..*arcs).any(|j| {
                    let flipped: Vec<Vec<Endpoint>> =
                        seq.iter().map(|c| c.iter().map(|e| if e.arc == j { Endpoint { arc: j, head: !e.head } } else { *e }).collect()).collect();
                    canonical_key_of(&flipped, *arcs).is_some_and(|(k, _, _)| entries.contains_key(&k))
                })
        });
        Ok(TableRule { name: t.name.clone(), entries, max_dim, orientation_sensitive })
    }

    pub fn from_json_str(s: &str) -> Result<Self, SzaboError> {
        let t: RuleTableJson = serde_json::from_str(s).map_err(|e| SzaboError::InvalidTable(e.to_string()))?;
        Self::from_json(&t)
    }

    pub fn to_json(&self) -> RuleTableJson {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let seq = parse_key(k).expect("stored keys parse");
                let n_in = seq.len();
                let n_out = v.iter().map(|&(_, o)| 64 - o.leading_zeros() as usize).max().unwrap_or(0);
                let pairs = v.iter().map(|&(i, o)| (label_string(i, n_in), label_string(o, n_out.max(1)))).collect();
                (k.clone(), pairs)
            })
            .collect();
        RuleTableJson { name: self.name.clone(), entries }
    }
}

impl HigherRule for TableRule {
    fn name(&self) -> &str {
        &self.name
    }

    fn max_dimension(&self) -> usize {
        self.max_dim
    }

    fn orientation_sensitive(&self) -> bool {
        self.orientation_sensitive
    }

    fn apply(&self, config: &Configuration, input: u64) -> Vec<u64> {
        let Some(canon) = config.canonical() else { return Vec::new() };
        let Some(pairs) = self.entries.get(&canon.key) else {
            return if config.dimension() == 1 { khovanov_edge(config, input) } else { Vec::new() };
        };
        let cin = canon.circle_perm.iter().enumerate().fold(0u64, |acc, (ci, &i)| acc | (input >> i & 1) << ci);
        pairs
            .iter()
            .filter(|&&(i, _)| i == cin)
            .map(|&(_, o)| canon.output_perm.iter().enumerate().fold(0u64, |acc, (co, &oi)| acc | (o >> co & 1) << oi))
            .collect()
    }
}

/// Images of a generator labelling of `D(I)` under a face map.
fn face_images(rule: &dyn HigherRule, config: &Configuration, mask: u64) -> Vec<u64> {
    let input = config.circles.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (mask >> c & 1) << i);
    let base = config.passive.iter().fold(0u64, |acc, &(a, b)| acc | (mask >> a & 1) << b);
    let mut out: Vec<u64> = rule
        .apply(config, input)
        .into_iter()
        .map(|o| config.outputs.iter().enumerate().fold(base, |acc, (i, &c)| acc | (o >> i & 1) << c))
        .collect();
    out.sort_unstable();
    // mod 2
    out.into_iter().dedup_with_count().filter(|(n, _)| n % 2 == 1).map(|(_, v)| v).collect()
}

fn submasks_up_to(free: u64, max: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = free;
    while s != 0 {
        if (s.count_ones() as usize) <= max {
            out.push(s);
        }
        s = (s - 1) & free;
    }
    out.sort_unstable();
    out
}

fn decorated_from_cube(cube: &Cube, t: &Decoration, rule: &dyn HigherRule) -> Result<FilteredComplex, SzaboError> {
    let d = cube.diagram();
    let k = d.crossing_count();
    if t.len() != k {
        return Err(SzaboError::LengthMismatch { expected: k, got: t.len() });
    }
    let all = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    let n = cube.dim();
    let results: Vec<(Vec<Vec<u32>>, bool)> = (0..cube.vertices().len())
        .into_par_iter()
        .map(|vi| {
            let i_bits = cube.vertices()[vi];
            let faces = submasks_up_to(all & !i_bits, rule.max_dimension());
            let configs: Vec<(usize, Configuration)> = faces
                .iter()
                .map(|&s| {
                    let wi = cube.vertex_index(i_bits | s).expect("full cube");
                    (wi, configuration_between(d, i_bits, i_bits | s, t, cube.resolved(vi), cube.resolved(wi)))
                })
                .collect();
            let mut higher = false;
            let cols = (0..1u64 << cube.resolved(vi).circle_count())
                .map(|m| {
                    let mut col = Vec::new();
                    for (wi, c) in &configs {
                        if c.dimension() >= 2 && !c.is_connected() {
                            continue;
                        }
                        for y in face_images(rule, c, m) {
                            col.push(cube.generator(*wi, y) as u32);
                            higher |= c.dimension() >= 2;
                        }
                    }
                    col
                })
                .collect();
            (cols, higher)
        })
        .collect();
    let higher = results.iter().any(|r| r.1);
    let cols: Vec<Vec<u32>> = results.into_iter().flat_map(|r| r.0).collect();
    let step = if higher { HStep::AtLeastOne } else { HStep::Exact };
    let c = FilteredComplex::new(cube.complex().gens().to_vec(), SparseMap::from_columns(n, cols), step).expect("square");
    let dd = c.d().compose(c.d());
    if let Some((y, x)) = dd.entries().next() {
        let (vx, _) = cube.locate(x);
        let (vy, _) = cube.locate(y);
        return Err(SzaboError::RuleInconsistent {
            rule: rule.name().to_string(),
            witness: format!(
                "faces through {} to {}: {} -> {}",
                bits_string(cube.vertices()[vx], k),
                bits_string(cube.vertices()[vy], k),
                c.gens()[x].tag,
                c.gens()[y].tag
            ),
        });
    }
    Ok(c)
}

/// The decorated complex. The disconnected rule is imposed: faces whose
/// active part is disconnected contribute nothing.
pub fn decorated_complex(d: &LinkDiagram, t: &Decoration, rule: &dyn HigherRule) -> Result<FilteredComplex, SzaboError> {
    let cube = Cube::new(d, &FrobeniusRule::khovanov())?;
    decorated_from_cube(&cube, t, rule)
}

/// `H_c`: `v-⊗v- ↦ v-` on merges, `v+ ↦ v+⊗v+` on splits, along edges at `c`.
fn h_rule() -> FrobeniusRule {
    FrobeniusRule { name: "h".into(), merge: [[0, 0], [0, 0b10]], split: [0b0001, 0] }
}

/// `(H_c, G_c = Id + H_c)` on the cube generators.
pub fn h_map(cube: &Cube, c: usize) -> (SparseMap, SparseMap) {
    let d = cube.diagram();
    let hr = h_rule();
    let cols: Vec<Vec<u32>> = (0..cube.vertices().len())
        .into_par_iter()
        .flat_map_iter(|vi| {
            let v = cube.vertices()[vi];
            let edge = (v >> c & 1 == 0).then(|| {
                let wi = cube.vertex_index(v | 1 << c).expect("full cube");
                (wi, d.edge_between(cube.resolved(vi), cube.resolved(wi), c).expect("planar edge"))
            });
            let hr = &hr;
            (0..1u64 << cube.resolved(vi).circle_count()).map(move |m| match &edge {
                Some((wi, e)) => crate::tqft::edge_images(hr, e, m).into_iter().map(|y| cube.generator(*wi, y) as u32).collect(),
                None => Vec::new(),
            })
        })
        .collect();
    let h = SparseMap::from_columns(cube.dim(), cols);
    let g = h.add(&SparseMap::identity(cube.dim()));
    (h, g)
}

/// Composite of `G_c` over the crossings where `t` and `t2` differ, applied
/// in crossing order.
pub fn change_decoration(cube: &Cube, t: &Decoration, t2: &Decoration) -> Result<SparseMap, SzaboError> {
    let k = cube.diagram().crossing_count();
    for x in [t, t2] {
        if x.len() != k {
            return Err(SzaboError::LengthMismatch { expected: k, got: x.len() });
        }
    }
    let mut g = SparseMap::identity(cube.dim());
    for c in (0..k).filter(|&c| t.bits[c] != t2.bits[c]) {
        g = h_map(cube, c).1.compose(&g);
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Untestable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub name: String,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: String,
    pub checks: Vec<RuleCheck>,
}

impl RuleReport {
    /// No check failed (untestable ones do not count against the rule).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, CheckStatus::Fail(_)))
    }
}

fn first_failure<T: Send>(items: Vec<T>, f: impl Fn(T) -> Option<String> + Sync + Send) -> CheckStatus {
    match items.into_par_iter().filter_map(f).collect::<Vec<_>>().into_iter().next() {
        Some(w) => CheckStatus::Fail(w),
        None => CheckStatus::Pass,
    }
}

/// Faces of dimension `1..=max` of a diagram.
fn faces(d: &LinkDiagram, max: usize) -> Vec<(u64, u64)> {
    let k = d.crossing_count();
    let all = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    (0..1u64 << k).flat_map(|i| submasks_up_to(all & !i, max).into_iter().map(move |s| (i, i | s))).collect()
}

/// Runs the rule checks over a corpus: edge agreement with Khovanov maps,
/// the disconnected rule, `d² = 0`, the birth-then-saddle identity, and the
/// change-of-decoration identity when the rule makes it testable.
pub fn verify_rule(rule: &dyn HigherRule, corpus: &[LinkDiagram]) -> RuleReport {
    let mut checks = Vec::new();
    let kh_rule = FrobeniusRule::khovanov();

    // (a) edges
    let edge_items: Vec<(usize, u64, u64, bool)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(di, d)| faces(d, 1).into_iter().flat_map(move |(i, j)| [(di, i, j, false), (di, i, j, true)]))
        .collect();
    let status = first_failure(edge_items, |(di, i, j, flip)| {
        let d = &corpus[di];
        let mut t = Decoration::standard(d.crossing_count());
        let c = (j ^ i).trailing_zeros() as usize;
        if flip {
            t = t.flipped(c);
        }
        let conf = face_configuration(d, i, j, &t).ok()?;
        let ri = d.resolve_partial(|x| i >> x & 1 == 1);
        let rj = d.resolve_partial(|x| j >> x & 1 == 1);
        let e = d.edge_between(&ri, &rj, c).ok()?;
        (0..1u64 << ri.circle_count()).find_map(|m| {
            let mut want = crate::tqft::edge_images(&kh_rule, &e, m);
            want.sort_unstable();
            let got = face_images(rule, &conf, m);
            (got != want).then(|| format!("{}: edge {} -> {} at labelling {m:b}", d.to_pd_string(), bits_string(i, d.crossing_count()), bits_string(j, d.crossing_count())))
        })
    });
    checks.push(RuleCheck { name: "edge_maps_match_khovanov".into(), status });

    // (b) disconnected faces vanish
    let face_items: Vec<(usize, u64, u64)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(di, d)| faces(d, rule.max_dimension()).into_iter().filter(|(i, j)| (j ^ i).count_ones() >= 2).map(move |(i, j)| (di, i, j)))
        .collect();
    let status = first_failure(face_items, |(di, i, j)| {
        let d = &corpus[di];
        let conf = face_configuration(d, i, j, &Decoration::standard(d.crossing_count())).ok()?;
        if conf.is_connected() {
            return None;
        }
        let n = conf.circles.len();
        (0..1u64 << n).find_map(|input| {
            (!rule.apply(&conf, input).is_empty()).then(|| format!("{}: disconnected face {} -> {}", d.to_pd_string(), bits_string(i, d.crossing_count()), bits_string(j, d.crossing_count())))
        })
    });
    checks.push(RuleCheck { name: "disconnected_rule".into(), status });

    // (c) d² = 0
    let status = first_failure((0..corpus.len()).collect(), |di| {
        let d = &corpus[di];
        match decorated_complex(d, &Decoration::standard(d.crossing_count()), rule) {
            Ok(_) => None,
            Err(e) => Some(format!("{}: {e}", d.to_pd_string())),
        }
    });
    checks.push(RuleCheck { name: "d_squared".into(), status });

    // (d) birth then merging saddle
    let status = first_failure((0..corpus.len()).collect(), |di| birth_saddle_identity(&corpus[di], rule).err().map(|w| format!("{}: {w}", corpus[di].to_pd_string())));
    checks.push(RuleCheck { name: "birth_then_saddle_identity".into(), status });

    // (e) change of decoration
    let status = if !rule.orientation_sensitive() {
        CheckStatus::Untestable(format!("rule {} never assigns maps to both orientations of an arc", rule.name()))
    } else {
        let items: Vec<(usize, usize)> = corpus.iter().enumerate().flat_map(|(di, d)| (0..d.crossing_count()).map(move |c| (di, c))).collect();
        first_failure(items, |(di, c)| {
            let d = &corpus[di];
            let cube = Cube::new(d, &FrobeniusRule::khovanov()).ok()?;
            let t = Decoration::standard(d.crossing_count());
            let t2 = t.flipped(c);
            let (a, b) = (decorated_from_cube(&cube, &t, rule).ok()?, decorated_from_cube(&cube, &t2, rule).ok()?);
            let g = h_map(&cube, c).1;
            (b.d().compose(&g) != g.compose(a.d())).then(|| format!("{}: G_{c} does not intertwine the decorated differentials", d.to_pd_string()))
        })
    };
    checks.push(RuleCheck { name: "decoration_change".into(), status });

    RuleReport { rule: rule.name().to_string(), checks }
}

/// Realizes the saddle joining a newborn circle to arc 1 of `d` as the
/// crossing of a kink, and checks that the faces through that crossing,
/// applied to labellings with `v+` on the newborn circle, give the identity.
pub fn birth_saddle_identity(d: &LinkDiagram, rule: &dyn HigherRule) -> Result<(), String> {
    if d.arc_count() == 0 {
        return Ok(());
    }
    let k = d.crossing_count();
    // pick the kink whose 0-smoothing splits off the small circle
    let out = [Sign::Positive, Sign::Negative]
        .into_iter()
        .filter_map(|sign| d.apply_move(&ElementaryMove::R1Insert { arc: 1, sign, under_first: true }).ok())
        .find(|o| {
            let kd = &o.diagram;
            let x = o.new_crossings[0];
            let r0 = kd.resolve_partial(|_| false);
            let r1 = kd.resolve_partial(|c| c == x);
            r0.circle_count() == r1.circle_count() + 1
        })
        .ok_or("no kink splits off a circle")?;
    let kd = &out.diagram;
    let x = out.new_crossings[0];
    let small = out.marked_arcs[0];
    let kcube = Cube::new(kd, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
    let dcube = Cube::new(d, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
    let cmap: Vec<usize> = out.crossing_map.iter().map(|c| c.expect("kink keeps crossings")).collect();
    let lift = |v: u64| (0..k).fold(0u64, |acc, i| acc | (v >> i & 1) << cmap[i]);
    let t = Decoration::standard(kd.crossing_count());
    let all = (1u64 << kd.crossing_count()) - 1;
    for v in 0..1u64 << k {
        let iv = lift(v);
        let vi = kcube.vertex_index(iv).expect("vertex");
        let ri = kcube.resolved(vi);
        let dv = dcube.vertex_index(v).expect("vertex");
        let rd = dcube.resolved(dv);
        let small_c = ri.circle_of(small);
        for s in submasks_up_to(all & !iv & !(1 << x), rule.max_dimension().saturating_sub(1)).into_iter().chain([0]) {
            let j = iv | s | 1 << x;
            let wi = kcube.vertex_index(j).expect("vertex");
            let rj = kcube.resolved(wi);
            let conf = configuration_between(kd, iv, j, &t, ri, rj);
            if conf.dimension() >= 2 && !conf.is_connected() {
                continue;
            }
            for m in 0..1u64 << rd.circle_count() {
                // labelling of d's circles transported to the kinked diagram, v+ on the small circle
                let mut km = 0u64;
                for (c, arcs) in rd.circles().iter().enumerate() {
                    let a = out.arc_map[arcs[0] as usize - 1].expect("arc survives");
                    km |= (m >> c & 1) << ri.circle_of(a);
                }
                debug_assert_eq!(km >> small_c & 1, 0);
                let images = face_images(rule, &conf, km);
                let expected: Vec<u64> = if s == 0 {
                    let mut e = 0u64;
                    for (c, arcs) in rd.circles().iter().enumerate() {
                        let a = out.arc_map[arcs[0] as usize - 1].expect("arc survives");
                        e |= (m >> c & 1) << rj.circle_of(a);
                    }
                    vec![e]
                } else {
                    Vec::new()
                };
                if images != expected {
                    return Err(format!("face {} -> {} at labelling {m:b}", bits_string(iv, kd.crossing_count()), bits_string(j, kd.crossing_count())));
                }
            }
        }
    }
    Ok(())
}
