//! Movies of diagrams and the chain maps they induce.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chaincx::{homotopic, ChainError, Eliminator, FilteredChainMap, FilteredComplex, HomotopyOptions, Reduction};
use crate::diagram::{ArcId, DiagramError, ElementaryMove, LinkDiagram, MoveOutcome, Sign, SurgeryArc};
use crate::f2linalg::SparseMap;
use crate::tqft::{handle_map_between, Cube, FrobeniusRule, TqftError};

#[derive(Debug, Error)]
pub enum MovieError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("frames differ: {0}")]
    FrameMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A diagram and a sequence of moves, with every frame materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    frames: Vec<LinkDiagram>,
    moves: Vec<ElementaryMove>,
    outcomes: Vec<MoveOutcome>,
}

impl Movie {
    pub fn new(initial: LinkDiagram, moves: Vec<ElementaryMove>) -> Result<Self, MovieError> {
        let mut m = Movie::identity(initial);
        for mv in moves {
            m.push(mv)?;
        }
        Ok(m)
    }

    pub fn identity(initial: LinkDiagram) -> Self {
        Movie { frames: vec![initial], moves: Vec::new(), outcomes: Vec::new() }
    }

    /// Appends a move and returns its outcome.
    pub fn push(&mut self, mv: ElementaryMove) -> Result<&MoveOutcome, MovieError> {
        let out = self.last_frame().apply_move(&mv)?;
        self.frames.push(out.diagram.clone());
        self.moves.push(mv);
        self.outcomes.push(out);
        Ok(self.outcomes.last().expect("just pushed"))
    }

    pub fn initial(&self) -> &LinkDiagram {
        &self.frames[0]
    }

    pub fn last_frame(&self) -> &LinkDiagram {
        self.frames.last().expect("at least one frame")
    }

    pub fn frames(&self) -> &[LinkDiagram] {
        &self.frames
    }

    pub fn moves(&self) -> &[ElementaryMove] {
        &self.moves
    }

    pub fn outcomes(&self) -> &[MoveOutcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn concat(&self, other: &Movie) -> Result<Movie, MovieError> {
        if other.initial() != self.last_frame() {
            return Err(MovieError::FrameMismatch(format!("{} then {}", self.last_frame(), other.initial())));
        }
        let mut m = self.clone();
        m.frames.extend(other.frames[1..].iter().cloned());
        m.moves.extend(other.moves.iter().cloned());
        m.outcomes.extend(other.outcomes.iter().cloned());
        Ok(m)
    }

    /// Where each arc of the initial frame ends up.
    pub fn track_arcs(&self) -> Vec<Option<ArcId>> {
        let mut cur: Vec<Option<ArcId>> = (1..=self.initial().arc_count()).map(Some).collect();
        for o in &self.outcomes {
            cur = cur.iter().map(|a| a.and_then(|a| o.arc_map[a as usize - 1])).collect();
        }
        cur
    }

    /// Appends a relabeling onto `target`, fixing the given arc pairs.
    pub fn align_to(&mut self, target: &LinkDiagram, seeds: &[(ArcId, ArcId)]) -> Result<(), MovieError> {
        if self.last_frame() == target {
            return Ok(());
        }
        let iso = self
            .last_frame()
            .find_isomorphism_seeded(target, seeds)
            .ok_or_else(|| MovieError::FrameMismatch(format!("{} is not a relabeling of {}", self.last_frame(), target)))?;
        self.push(ElementaryMove::Relabel { arcs: iso.arc_map, crossings: Some(iso.crossing_map) })?;
        Ok(())
    }

    /// Parses the movie format: a PD code line, then one move per line.
    pub fn parse(text: &str) -> Result<Movie, MovieError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty());
        let (n0, first) = lines.next().ok_or(MovieError::Parse { line: 1, msg: "empty movie".into() })?;
        let pd = first.strip_prefix("pd").ok_or(MovieError::Parse { line: n0, msg: "first line must start with 'pd'".into() })?;
        let initial = LinkDiagram::parse(pd.trim()).map_err(|e| MovieError::Parse { line: n0, msg: e.to_string() })?;
        let mut m = Movie::identity(initial);
        for (n, line) in lines {
            let mv = parse_move(line).map_err(|msg| MovieError::Parse { line: n, msg })?;
            m.push(mv).map_err(|e| MovieError::Parse { line: n, msg: e.to_string() })?;
        }
        Ok(m)
    }
}

fn parse_move(line: &str) -> Result<ElementaryMove, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let num = |i: usize| -> Result<u32, String> {
        toks.get(i).ok_or(format!("missing argument {i} in '{line}'"))?.parse::<u32>().map_err(|e| format!("'{}': {e}", toks[i]))
    };
    let arity = |n: usize| if toks.len() == n { Ok(()) } else { Err(format!("'{}' takes {} arguments", toks[0], n - 1)) };
    match toks[0] {
        "relabel" => {
            let rest = &line["relabel".len()..];
            let (a, c) = match rest.split_once(';') {
                Some((a, c)) => (a, Some(c)),
                None => (rest, None),
            };
            let arcs = a.split_whitespace().map(|t| t.parse::<u32>().map_err(|e| format!("'{t}': {e}"))).collect::<Result<Vec<_>, _>>()?;
            let crossings = c
                .map(|c| c.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| format!("'{t}': {e}"))).collect::<Result<Vec<_>, _>>())
                .transpose()?;
            Ok(ElementaryMove::Relabel { arcs, crossings })
        }
        "h0" => arity(1).map(|_| ElementaryMove::Handle0),
        "h1" => {
            arity(3)?;
            Ok(ElementaryMove::Handle1(SurgeryArc { first: num(1)?, second: num(2)? }))
        }
        "h2" => {
            arity(2)?;
            Ok(ElementaryMove::Handle2 { arc: num(1)? })
        }
        "r1" => match toks.get(2).copied() {
            Some("del") => {
                arity(3)?;
                Ok(ElementaryMove::R1Delete { arc: num(1)? })
            }
            Some(s @ ("+" | "-")) => {
                if toks.len() < 4 || toks[3] != "ins" || toks.len() > 5 {
                    return Err("expected 'r1 <arc> +|- ins [over]'".into());
                }
                let under_first = match toks.get(4).copied() {
                    None | Some("under") => true,
                    Some("over") => false,
                    Some(t) => return Err(format!("unknown r1 option '{t}'")),
                };
                let sign = if s == "+" { Sign::Positive } else { Sign::Negative };
                Ok(ElementaryMove::R1Insert { arc: num(1)?, sign, under_first })
            }
            _ => Err("expected 'r1 <arc> +|- ins' or 'r1 <arc> del'".into()),
        },
        "r2" => match toks.get(3).copied() {
            Some("ins") => {
                let choice = if toks.len() == 5 { num(4)? as usize } else { arity(4).map(|_| 0)? };
                Ok(ElementaryMove::R2Insert { over: num(1)?, under: num(2)?, choice })
            }
            Some("del") => {
                arity(4)?;
                Ok(ElementaryMove::R2Delete { over: num(1)?, under: num(2)? })
            }
            _ => Err("expected 'r2 <over> <under> ins [choice]' or 'r2 <over> <under> del'".into()),
        },
        "r3" => {
            arity(4)?;
            Ok(ElementaryMove::R3 { arcs: [num(1)?, num(2)?, num(3)?] })
        }
        other => Err(format!("unknown move '{other}'")),
    }
}

/// The movie-format line for a move.
pub fn format_move(m: &ElementaryMove) -> String {
    match m {
        ElementaryMove::Relabel { arcs, crossings } => {
            let mut s = format!("relabel {}", arcs.iter().join(" "));
            if let Some(c) = crossings {
                s.push_str(&format!(" ; {}", c.iter().join(" ")));
            }
            s
        }
        ElementaryMove::Handle0 => "h0".into(),
        ElementaryMove::Handle1(s) => format!("h1 {} {}", s.first, s.second),
        ElementaryMove::Handle2 { arc } => format!("h2 {arc}"),
        ElementaryMove::R1Insert { arc, sign, under_first } => {
            format!("r1 {arc} {} ins{}", if *sign == Sign::Positive { "+" } else { "-" }, if *under_first { "" } else { " over" })
        }
        ElementaryMove::R1Delete { arc } => format!("r1 {arc} del"),
        ElementaryMove::R2Insert { over, under, choice } => format!("r2 {over} {under} ins {choice}"),
        ElementaryMove::R2Delete { over, under } => format!("r2 {over} {under} del"),
        ElementaryMove::R3 { arcs } => format!("r3 {} {} {}", arcs[0], arcs[1], arcs[2]),
    }
}

impl fmt::Display for Movie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pd {}", self.initial().to_pd_string())?;
        for m in &self.moves {
            writeln!(f, "{}", format_move(m))?;
        }
        Ok(())
    }
}

/// Chain maps for a Reidemeister move and its inverse, with homotopies
/// `id + ρ'ρ = dH + Hd` on the source and `id + ρρ' = dH' + H'd` on the target.
#[derive(Clone, Debug)]
pub struct ReidemeisterMaps {
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub rho: FilteredChainMap,
    pub rho_prime: FilteredChainMap,
    pub homotopy: FilteredChainMap,
    pub homotopy_target: FilteredChainMap,
}

impl ReidemeisterMaps {
    /// Re-checks chain-map, filtration and homotopy identities.
    pub fn verify(&self) -> Result<(), String> {
        let (s, t) = (&self.source, &self.target);
        if !self.rho.is_chain_map(s, t) || !self.rho_prime.is_chain_map(t, s) {
            return Err("ρ or ρ' is not a chain map".into());
        }
        if !self.rho.is_filtered(s, t) || !self.rho_prime.is_filtered(t, s) {
            return Err("ρ or ρ' is not filtered".into());
        }
        let check = |c: &FilteredComplex, comp: &FilteredChainMap, h: &FilteredChainMap| {
            let lhs = comp.matrix.add(&SparseMap::identity(c.dim()));
            let rhs = c.d().compose(&h.matrix).add(&h.matrix.compose(c.d()));
            lhs == rhs && h.is_filtered(c, c)
        };
        if !check(s, &self.rho_prime.compose(&self.rho), &self.homotopy) {
            return Err("ρ'ρ is not homotopic to the identity by the recorded homotopy".into());
        }
        if !check(t, &self.rho.compose(&self.rho_prime), &self.homotopy_target) {
            return Err("ρρ' is not homotopic to the identity by the recorded homotopy".into());
        }
        Ok(())
    }
}

struct Side<'a> {
    cube: &'a Cube,
    red: Reduction,
    /// big generator → survivor position
    pos: HashMap<usize, usize>,
}

impl<'a> Side<'a> {
    fn trivial(cube: &'a Cube) -> Self {
        Self::from_reduction(cube, Eliminator::new(cube.complex()).finish())
    }

    fn from_reduction(cube: &'a Cube, red: Reduction) -> Self {
        let pos = red.survivors.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Side { cube, red, pos }
    }

    /// Eliminates everything outside `keep`, cancelling only along the
    /// crossings in `local` and preferring targets whose `internal` circles
    /// are labelled `v-`, if the greedy cancellation manages.
    fn reduce_to(cube: &'a Cube, keep: &[bool], local: &[usize], internal: &dyn Fn(ArcId) -> bool) -> Option<Self> {
        let allowed: Vec<bool> = keep.iter().map(|k| !k).collect();
        let mask = local.iter().fold(0u64, |m, &c| m | 1 << c);
        let mut bits = Vec::with_capacity(cube.dim());
        let mut plus = Vec::with_capacity(cube.dim());
        for (vi, &v) in cube.vertices().iter().enumerate() {
            let r = cube.resolved(vi);
            let inner: Vec<usize> = (0..r.circle_count()).filter(|&c| r.circles()[c].iter().all(|&a| internal(a))).collect();
            for m in 0..1u64 << r.circle_count() {
                bits.push(v);
                plus.push(inner.iter().filter(|&&c| m >> c & 1 == 0).count() as u32);
            }
        }
        let mut e = Eliminator::new(cube.complex());
        let ok = e.eliminate_within(&allowed, |x, y| ((bits[x] ^ bits[y]) & !mask == 0).then_some(plus[y]));
        ok.then(|| Self::from_reduction(cube, e.finish()))
    }
}

/// Matches survivors of `a` with survivors of `b`: vertices through `vmap`,
/// circles through `arc_ab` (arcs of `a` to arcs of `b`). Circles of `a`
/// without image are dropped; a single unmatched circle on each side is
/// paired up. Returns `φ` on the small complexes if it is a graded
/// isomorphism of complexes.
fn match_sides(a: &Side, b: &Side, vmap: &dyn Fn(u64) -> u64, arc_ab: &[Option<ArcId>]) -> Option<SparseMap> {
    let n = a.red.survivors.len();
    if n != b.red.survivors.len() {
        return None;
    }
    let mut image = vec![0u32; n];
    let mut hit = vec![false; n];
    let mut circle_cache: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
    for (i, &g) in a.red.survivors.iter().enumerate() {
        let (va, mask) = a.cube.locate(g);
        let vb_bits = vmap(a.cube.vertices()[va]);
        let vb = b.cube.vertex_index(vb_bits)?;
        let (ra, rb) = (a.cube.resolved(va), b.cube.resolved(vb));
        let key = va * 1_000_003 + vb;
        let cmap = match circle_cache.get(&key) {
            Some(c) => c.clone(),
            None => {
                let mut cm: Vec<Option<usize>> = vec![None; ra.circle_count()];
                let mut preimage: Vec<Option<usize>> = vec![None; rb.circle_count()];
                for (ca, arcs) in ra.circles().iter().enumerate() {
                    let imgs: Vec<usize> = arcs.iter().filter_map(|&x| arc_ab[x as usize - 1]).map(|y| rb.circle_of(y)).sorted().dedup().collect();
                    match imgs.len() {
                        0 => {}
                        1 => {
                            if preimage[imgs[0]].is_some() {
                                return None;
                            }
                            preimage[imgs[0]] = Some(ca);
                            cm[ca] = Some(imgs[0]);
                        }
                        _ => return None,
                    }
                }
                let free_a: Vec<usize> = (0..ra.circle_count()).filter(|&c| cm[c].is_none()).collect();
                let free_b: Vec<usize> = (0..rb.circle_count()).filter(|&c| preimage[c].is_none()).collect();
                match (free_a.len(), free_b.len()) {
                    (_, 0) => {}
                    (1, 1) => cm[free_a[0]] = Some(free_b[0]),
                    _ => return None,
                }
                circle_cache.insert(key, cm.clone());
                cm
            }
        };
        let mb = cmap.iter().enumerate().fold(0u64, |acc, (ca, img)| match img {
            Some(cb) => acc | (mask >> ca & 1) << cb,
            None => acc,
        });
        let gb = b.cube.generator(vb, mb);
        let j = *b.pos.get(&gb)?;
        if hit[j] {
            return None;
        }
        let (ga, gbb) = (&a.red.small.gens()[i], &b.red.small.gens()[j]);
        if ga.h != gbb.h || ga.q != gbb.q {
            return None;
        }
        hit[j] = true;
        image[i] = j as u32;
    }
    let phi = SparseMap::from_columns(n, image.iter().map(|&j| vec![j]).collect());
    (b.red.small.d().compose(&phi) == phi.compose(a.red.small.d())).then_some(phi)
}

fn inverse_permutation(phi: &SparseMap) -> SparseMap {
    phi.transpose()
}

/// Maps through the reductions: `ι_b φ π_a` and `ι_a φ⁻¹ π_b`.
fn assemble(a: &Side, b: &Side, phi: &SparseMap) -> (FilteredChainMap, FilteredChainMap) {
    let ab = b.red.iota.matrix.compose(phi).compose(&a.red.pi.matrix);
    let ba = a.red.iota.matrix.compose(&inverse_permutation(phi)).compose(&b.red.pi.matrix);
    (FilteredChainMap::new(ab, 0, 0), FilteredChainMap::new(ba, 0, 0))
}

/// Generators at local pattern `p` whose circles without image under
/// `arc_map` all carry `label`.
fn local_survivors(cube: &Cube, local: &[usize], p: u64, label: Option<u64>, has_image: &dyn Fn(ArcId) -> bool) -> Vec<bool> {
    let mut keep = vec![false; cube.dim()];
    for (vi, &v) in cube.vertices().iter().enumerate() {
        let pat = local.iter().enumerate().fold(0u64, |acc, (j, &c)| acc | (v >> c & 1) << j);
        if pat != p {
            continue;
        }
        let r = cube.resolved(vi);
        let internal: Vec<usize> = (0..r.circle_count()).filter(|&c| !r.circles()[c].iter().any(|&x| has_image(x))).collect();
        for m in 0..1u64 << r.circle_count() {
            let ok = match label {
                None => true,
                Some(l) => internal.iter().all(|&c| m >> c & 1 == l),
            };
            if ok {
                keep[cube.generator(vi, m)] = true;
            }
        }
    }
    keep
}

fn failed(m: &ElementaryMove, d: &LinkDiagram, why: &str) -> MovieError {
    MovieError::ConstructionFailed(format!("{} on {}: {why}", m.name(), d.to_pd_string()))
}

/// R1/R2: the side with the new crossings (`big`) is reduced onto a copy of
/// the other cube.
fn maps_for_insertion(
    big: &Cube,
    small: &Cube,
    local: &[usize],
    big_of_small: &[usize],
    arc_big_small: &[Option<ArcId>],
) -> Option<(FilteredChainMap, FilteredChainMap, FilteredChainMap)> {
    let has_image = |x: ArcId| arc_big_small[x as usize - 1].is_some();
    let project = |v: u64| big_of_small.iter().enumerate().fold(0u64, |acc, (j, &c)| acc | (v >> c & 1) << j);
    let small_side = Side::trivial(small);
    for p in 0..1u64 << local.len() {
        for label in [None, Some(0), Some(1)] {
            let keep = local_survivors(big, local, p, label, &has_image);
            if keep.iter().filter(|&&k| k).count() != small.dim() {
                continue;
            }
            let Some(big_side) = Side::reduce_to(big, &keep, local, &|x| !has_image(x)) else { continue };
            let Some(phi) = match_sides(&big_side, &small_side, &project, arc_big_small) else { continue };
            let (big_to_small, small_to_big) = assemble(&big_side, &small_side, &phi);
            return Some((big_to_small, small_to_big, big_side.red.homotopy()));
        }
    }
    None
}

fn invert_arc_map(map: &[Option<ArcId>], target_arcs: u32) -> Vec<Option<ArcId>> {
    let mut inv = vec![None; target_arcs as usize];
    for (a, img) in map.iter().enumerate() {
        if let Some(b) = img {
            inv[*b as usize - 1] = Some(a as ArcId + 1);
        }
    }
    inv
}

fn zero_homotopy(c: &FilteredComplex) -> FilteredChainMap {
    FilteredChainMap::new(SparseMap::zeros(c.dim(), c.dim()), -1, 0)
}

/// Builds `(ρ, ρ', H, H')` between cubes of a move's source and target.
pub fn reidemeister_between(src: &Cube, dst: &Cube, mv: &ElementaryMove, out: &MoveOutcome) -> Result<ReidemeisterMaps, MovieError> {
    let d = src.diagram();
    let (rho, rho_prime, homotopy, homotopy_target) = match mv {
        ElementaryMove::R1Insert { .. } | ElementaryMove::R2Insert { .. } => {
            let arc_big_small = invert_arc_map(&out.arc_map, dst.diagram().arc_count());
            let big_of_small: Vec<usize> = out.crossing_map.iter().map(|c| c.expect("insertions keep crossings")).collect();
            let (to_small, to_big, h) =
                maps_for_insertion(dst, src, &out.new_crossings, &big_of_small, &arc_big_small).ok_or_else(|| failed(mv, d, "no cancellation onto the old cube"))?;
            (to_big, to_small, zero_homotopy(src.complex()), h)
        }
        ElementaryMove::R1Delete { .. } | ElementaryMove::R2Delete { .. } => {
            let local: Vec<usize> = (0..d.crossing_count()).filter(|&c| out.crossing_map[c].is_none()).collect();
            let mut big_of_small = vec![0usize; dst.diagram().crossing_count()];
            for (c, img) in out.crossing_map.iter().enumerate() {
                if let Some(j) = img {
                    big_of_small[*j] = c;
                }
            }
            let (to_small, to_big, h) =
                maps_for_insertion(src, dst, &local, &big_of_small, &out.arc_map).ok_or_else(|| failed(mv, d, "no cancellation onto the new cube"))?;
            (to_small, to_big, h, zero_homotopy(dst.complex()))
        }
        ElementaryMove::R3 { arcs } => r3_maps(src, dst, *arcs, out).ok_or_else(|| failed(mv, d, "cone comparison did not close up"))?,
        other => return Err(MovieError::InvalidSite(format!("{} is not a Reidemeister move", other.name()))),
    };
    let maps = ReidemeisterMaps { source: src.complex().clone(), target: dst.complex().clone(), rho, rho_prime, homotopy, homotopy_target };
    maps.verify().map_err(|why| failed(mv, d, &why))?;
    Ok(maps)
}

/// Candidate survivor sets for one side of R3: everything with the
/// distinguished crossing at `1 - s`, plus the generators with it at `s`
/// and the two other triangle crossings at pattern `v`.
fn r3_side<'a>(cube: &'a Cube, c: usize, pair: [usize; 2], triangle: &[ArcId]) -> Vec<(Side<'a>, Vec<u64>)> {
    let mut out = Vec::new();
    for s in 0..2u64 {
        for v in 0..4u64 {
            let keep: Vec<bool> = (0..cube.dim())
                .map(|g| {
                    let bits = cube.vertices()[cube.locate(g).0];
                    let at_c = bits >> c & 1;
                    at_c != s || (bits >> pair[0] & 1 | (bits >> pair[1] & 1) << 1) == v
                })
                .collect();
            if let Some(side) = Side::reduce_to(cube, &keep, &pair, &|a| triangle.contains(&a)) {
                // local patterns over (c, pair0, pair1)
                let mut pats: Vec<u64> = (0..4).map(|w| (1 - s) | w << 1).collect();
                pats.push(s | v << 1);
                out.push((side, pats));
            }
        }
    }
    out
}

fn r3_maps(src: &Cube, dst: &Cube, arcs: [ArcId; 3], out: &MoveOutcome) -> Option<(FilteredChainMap, FilteredChainMap, FilteredChainMap, FilteredChainMap)> {
    let d = src.diagram();
    let strands = d.r3_strands(arcs).ok()?;
    let top = strands[0];
    let tri: Vec<usize> = strands.iter().flat_map(|s| [s.1.crossing, s.2.crossing]).sorted().dedup().collect();
    let c = *tri.iter().find(|&&x| x != top.1.crossing && x != top.2.crossing)?;
    let pair = [top.1.crossing.min(top.2.crossing), top.1.crossing.max(top.2.crossing)];
    let cmap: Vec<usize> = out.crossing_map.iter().map(|x| x.expect("R3 keeps crossings")).collect();
    let (c2, pair2) = (cmap[c], [cmap[pair[0]], cmap[pair[1]]]);
    // triangle arcs have no counterpart across the move
    let mut arc_ab = out.arc_map.clone();
    for &a in &arcs {
        arc_ab[a as usize - 1] = None;
    }
    let local_a = [c, pair[0], pair[1]];
    let local_b = [c2, pair2[0], pair2[1]];
    let pattern = |v: u64, loc: &[usize; 3]| loc.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | (v >> x & 1) << j);
    let a_sides = r3_side(src, c, pair, &arcs);
    let tri2: Vec<ArcId> = arcs.iter().filter_map(|&a| out.arc_map[a as usize - 1]).collect();
    let b_sides = r3_side(dst, c2, pair2, &tri2);
    for (a, pa) in &a_sides {
        for (b, pb) in &b_sides {
            for perm in pb.iter().permutations(pb.len()) {
                let sigma: HashMap<u64, u64> = pa.iter().copied().zip(perm.into_iter().copied()).collect();
                let vmap = |v: u64| {
                    let rest = (0..d.crossing_count()).filter(|x| !local_a.contains(x)).fold(0u64, |acc, x| acc | (v >> x & 1) << cmap[x]);
                    let p = sigma.get(&pattern(v, &local_a)).copied().unwrap_or(u64::MAX);
                    if p == u64::MAX {
                        return u64::MAX;
                    }
                    local_b.iter().enumerate().fold(rest, |acc, (j, &x)| acc | (p >> j & 1) << x)
                };
                if let Some(phi) = match_sides(a, b, &vmap, &arc_ab) {
                    let (ab, ba) = assemble(a, b, &phi);
                    return Some((ab, ba, a.red.homotopy(), b.red.homotopy()));
                }
            }
        }
    }
    None
}

/// `(ρ, ρ', H)` for an R-move on `d`, verified before return.
pub fn reidemeister_map(d: &LinkDiagram, mv: &ElementaryMove, rule: &FrobeniusRule) -> Result<ReidemeisterMaps, MovieError> {
    let out = d.apply_move(mv)?;
    let src = Cube::new(d, rule)?;
    let dst = Cube::new(&out.diagram, rule)?;
    reidemeister_between(&src, &dst, mv, &out)
}

/// Map of one move between precomputed cubes.
pub fn move_map(src: &Cube, dst: &Cube, mv: &ElementaryMove, out: &MoveOutcome) -> Result<FilteredChainMap, MovieError> {
    match mv {
        ElementaryMove::Relabel { .. } | ElementaryMove::Handle0 | ElementaryMove::Handle1(_) | ElementaryMove::Handle2 { .. } => {
            Ok(handle_map_between(src, dst, mv, out)?)
        }
        _ => Ok(reidemeister_between(src, dst, mv, out)?.rho),
    }
}

/// Source and target complexes with the composite map of a movie.
#[derive(Clone, Debug)]
pub struct Induced {
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub map: FilteredChainMap,
    /// Euler characteristic of the cobordism.
    pub euler_characteristic: i32,
}

pub fn induced(m: &Movie, rule: &FrobeniusRule) -> Result<Induced, MovieError> {
    let cubes: Vec<Cube> = m.frames().iter().map(|f| Cube::new(f, rule)).collect::<Result<_, _>>()?;
    let mut map = FilteredChainMap::identity(cubes[0].complex());
    let mut chi = 0;
    for (i, mv) in m.moves().iter().enumerate() {
        let step = move_map(&cubes[i], &cubes[i + 1], mv, &m.outcomes()[i])?;
        chi += mv.euler_characteristic();
        map = step.compose(&map);
    }
    map.q_degree = chi;
    let last = cubes.len() - 1;
    Ok(Induced { source: cubes[0].complex().clone(), target: cubes[last].complex().clone(), map, euler_characteristic: chi })
}

/// The composite chain map `K(M)` from the initial cube to the final cube.
pub fn induced_map(m: &Movie, rule: &FrobeniusRule) -> Result<FilteredChainMap, MovieError> {
    Ok(induced(m, rule)?.map)
}

/// A homotopy between the maps of two movies with the same ends, if one exists.
pub fn verify_movie_move(m1: &Movie, m2: &Movie, rule: &FrobeniusRule, opts: HomotopyOptions) -> Result<Option<FilteredChainMap>, MovieError> {
    if m1.initial() != m2.initial() {
        return Err(MovieError::FrameMismatch(format!("initial frames {} and {}", m1.initial(), m2.initial())));
    }
    if m1.last_frame() != m2.last_frame() {
        return Err(MovieError::FrameMismatch(format!("final frames {} and {}", m1.last_frame(), m2.last_frame())));
    }
    let a = induced(m1, rule)?;
    let b = induced(m2, rule)?;
    Ok(homotopic(&a.map, &b.map, &a.source, &a.target, opts)?)
}

/// A named pair of movies expected to induce homotopic maps.
#[derive(Clone, Debug)]
pub struct MoviePair {
    pub name: String,
    pub left: Movie,
    pub right: Movie,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairVerdict {
    pub name: String,
    pub rule: String,
    pub homotopic: bool,
    pub homology_rank_left: usize,
    pub homology_rank_right: usize,
}

fn trefoil() -> LinkDiagram {
    LinkDiagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").expect("trefoil")
}

fn hopf() -> LinkDiagram {
    LinkDiagram::parse("X(4,1,3,2) X(2,3,1,4)").expect("hopf")
}

/// Two movies doing `first` and `second` in both orders. Arc ids in the
/// moves refer to the initial diagram and are tracked through the first move;
/// the second movie is realigned onto the first one's final frame.
fn swap_pair(name: &str, d: &LinkDiagram, first: ElementaryMove, second: ElementaryMove) -> Result<MoviePair, MovieError> {
    let remap = |m: &ElementaryMove, out: &MoveOutcome| -> ElementaryMove {
        let t = |a: ArcId| out.arc_map[a as usize - 1].expect("distant support survives");
        match m {
            ElementaryMove::Handle1(s) => ElementaryMove::Handle1(SurgeryArc { first: t(s.first), second: t(s.second) }),
            ElementaryMove::Handle2 { arc } => ElementaryMove::Handle2 { arc: t(*arc) },
            other => other.clone(),
        }
    };
    let mut left = Movie::identity(d.clone());
    let o1 = left.push(first.clone())?.clone();
    left.push(remap(&second, &o1))?;
    let mut right = Movie::identity(d.clone());
    let o2 = right.push(second.clone())?.clone();
    right.push(remap(&first, &o2))?;
    let tl = left.track_arcs();
    let tr = right.track_arcs();
    let mut seeds: Vec<(ArcId, ArcId)> = tr.iter().zip(&tl).filter_map(|(r, l)| Some(((*r)?, (*l)?))).sorted().dedup().collect();
    // births: the newest arcs of each movie correspond in order of creation
    let births = |m: &Movie| -> Vec<ArcId> {
        let mut born: Vec<ArcId> = Vec::new();
        for (mv, o) in m.moves().iter().zip(m.outcomes()) {
            born = born.iter().filter_map(|&a| o.arc_map[a as usize - 1]).collect();
            if matches!(mv, ElementaryMove::Handle0) {
                born.push(o.marked_arcs[0]);
            }
        }
        born
    };
    let (bl, br) = (births(&left), births(&right));
    let swapped = matches!((&first, &second), (ElementaryMove::Handle0, ElementaryMove::Handle0));
    for (i, &b) in br.iter().enumerate() {
        let j = if swapped { br.len() - 1 - i } else { i };
        if let Some(&a) = bl.get(j) {
            seeds.push((b, a));
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    let target = left.last_frame().clone();
    right.align_to(&target, &seeds)?;
    Ok(MoviePair { name: name.into(), left, right })
}

fn round_trip(name: &str, d: &LinkDiagram, mv: ElementaryMove, undo: impl Fn(&MoveOutcome) -> ElementaryMove) -> Result<MoviePair, MovieError> {
    let mut left = Movie::identity(d.clone());
    let out = left.push(mv)?.clone();
    left.push(undo(&out))?;
    let seeds: Vec<(ArcId, ArcId)> = left.track_arcs().iter().enumerate().filter_map(|(a, b)| Some(((*b)?, a as ArcId + 1))).collect();
    left.align_to(d, &seeds)?;
    Ok(MoviePair { name: name.into(), left, right: Movie::identity(d.clone()) })
}

/// Some triangular face on which an R3 move applies.
pub fn r3_triangle(d: &LinkDiagram) -> Option<[ArcId; 3]> {
    d.faces().into_iter().filter(|f| f.darts.len() == 3).find_map(|f| {
        let a: Vec<ArcId> = f.arcs().collect();
        let arcs = [a[0], a[1], a[2]];
        d.r3_strands(arcs).is_ok().then_some(arcs)
    })
}

/// Minimal instances of the movie moves the verification suite runs.
pub fn canned_corpus() -> Result<Vec<MoviePair>, MovieError> {
    let mut out = Vec::new();
    let t = trefoil();

    // birth then merge, split then death
    let mut m = Movie::identity(t.clone());
    let born = m.push(ElementaryMove::Handle0)?.marked_arcs[0];
    m.push(ElementaryMove::Handle1(SurgeryArc { first: born, second: 1 }))?;
    out.push(MoviePair { name: "mm15-birth-merge".into(), left: m, right: Movie::identity(t.clone()) });
    let mut m = Movie::identity(t.clone());
    let new = m.push(ElementaryMove::Handle1(SurgeryArc { first: 2, second: 2 }))?.marked_arcs[0];
    m.push(ElementaryMove::Handle2 { arc: new })?;
    out.push(MoviePair { name: "mm15-split-death".into(), left: m, right: Movie::identity(t.clone()) });

    // distant handle swaps on a Hopf link beside three circles
    let base = hopf().disjoint_union(&LinkDiagram::unlink(3));
    let (u1, u2, u3) = (5, 6, 7);
    let h0 = ElementaryMove::Handle0;
    let merge = ElementaryMove::Handle1(SurgeryArc { first: u1, second: u2 });
    let split = ElementaryMove::Handle1(SurgeryArc { first: 1, second: 1 });
    let death = |a| ElementaryMove::Handle2 { arc: a };
    out.push(swap_pair("handleswap-00", &base, h0.clone(), h0.clone())?);
    out.push(swap_pair("handleswap-01", &base, h0.clone(), merge.clone())?);
    out.push(swap_pair("handleswap-02", &base, h0.clone(), death(u3))?);
    out.push(swap_pair("handleswap-11", &base, merge.clone(), split.clone())?);
    out.push(swap_pair("handleswap-12", &base, merge.clone(), death(u3))?);
    out.push(swap_pair("handleswap-22", &base, death(u2), death(u3))?);

    // type I round trips
    for sign in [Sign::Positive, Sign::Negative] {
        let name = format!("type1-r1{}", if sign == Sign::Positive { "+" } else { "-" });
        out.push(round_trip(&name, &t, ElementaryMove::R1Insert { arc: 2, sign, under_first: true }, |o| ElementaryMove::R1Delete {
            arc: o.marked_arcs[0],
        })?);
    }
    out.push(round_trip("type1-r2", &t, ElementaryMove::R2Insert { over: 1, under: 4, choice: 0 }, |o| ElementaryMove::R2Delete {
        over: o.marked_arcs[0],
        under: o.marked_arcs[1],
    })?);
    let b = LinkDiagram::braid_closure(3, &[1, 2, 1])?;
    let tri = r3_triangle(&b).ok_or_else(|| MovieError::InvalidSite("no R3 triangle in σ1σ2σ1".into()))?;
    out.push(round_trip("type1-r3", &b, ElementaryMove::R3 { arcs: tri }, |_| ElementaryMove::R3 { arcs: tri })?);

    // type II: build a braid word and its inverse by R2 moves, apply the
    // braid relation and undo everything
    out.push(type_two()?);
    Ok(out)
}

/// Component index of every arc.
fn arc_components(d: &LinkDiagram) -> Vec<usize> {
    let n = d.arc_count() as usize;
    let mut uf = crate::diagram::Uf::new(n);
    for c in d.crossings() {
        uf.union(c.arcs[0] as usize - 1, c.arcs[2] as usize - 1);
        uf.union(c.arcs[1] as usize - 1, c.arcs[3] as usize - 1);
    }
    (0..n).map(|a| uf.find(a)).collect()
}

/// Pushes `over` across `under` for some arcs of the two components so that
/// the result has an R3 triangle or at least stays valid.
fn r2_between(m: &mut Movie, comp_over: ArcId, comp_under: ArcId) -> Option<MoveOutcome> {
    let d = m.last_frame().clone();
    let comp = arc_components(&d);
    let of = |a: ArcId| comp[a as usize - 1];
    for over in (1..=d.arc_count()).filter(|&a| of(a) == of(comp_over)) {
        for under in (1..=d.arc_count()).filter(|&a| of(a) == of(comp_under)) {
            for choice in 0..d.r2_candidates(over, under).len() {
                let mut trial = m.clone();
                if let Ok(o) = trial.push(ElementaryMove::R2Insert { over, under, choice }).cloned() {
                    *m = trial;
                    return Some(o);
                }
            }
        }
    }
    None
}

fn type_two() -> Result<MoviePair, MovieError> {
    // three circles, pushed pairwise across each other so that a triangle appears
    let u = LinkDiagram::unlink(3);
    let none = || MovieError::InvalidSite("no triangle after weaving three circles".into());
    let mut m = Movie::identity(u.clone());
    let mut bigons: Vec<(usize, [ArcId; 2])> = Vec::new();
    for (a, b) in [(1, 2), (2, 3), (1, 3)] {
        let track = m.track_arcs();
        let (ta, tb) = (track[a as usize - 1].ok_or_else(none)?, track[b as usize - 1].ok_or_else(none)?);
        let o = r2_between(&mut m, ta, tb).ok_or_else(none)?;
        bigons.push((m.len(), [o.marked_arcs[0], o.marked_arcs[1]]));
    }
    let tri = r3_triangle(m.last_frame()).ok_or_else(none)?;
    m.push(ElementaryMove::R3 { arcs: tri })?;
    m.push(ElementaryMove::R3 { arcs: tri })?;
    for (after, arcs) in bigons.into_iter().rev() {
        let follow = |x: ArcId| -> Option<ArcId> {
            let mut cur = Some(x);
            for o in &m.outcomes()[after..] {
                cur = cur.and_then(|y| o.arc_map[y as usize - 1]);
            }
            cur
        };
        let (over, under) = (follow(arcs[0]).ok_or_else(none)?, follow(arcs[1]).ok_or_else(none)?);
        m.push(ElementaryMove::R2Delete { over, under })?;
    }
    let seeds: Vec<(ArcId, ArcId)> = m.track_arcs().iter().enumerate().filter_map(|(a, b)| Some(((*b)?, a as ArcId + 1))).collect();
    m.align_to(&u, &seeds)?;
    Ok(MoviePair { name: "type2-braid-relation".into(), left: m, right: Movie::identity(u) })
}
