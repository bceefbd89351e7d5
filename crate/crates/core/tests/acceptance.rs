//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use linkhom::chaincx::{homotopic, spectral_pages, FilteredChainMap, FilteredComplex, HomotopyOptions};
use linkhom::corpus::{default_corpus, large_diagrams, NamedDiagram};
use linkhom::diagram::{ElementaryMove, LinkDiagram, Sign};
use linkhom::f2linalg::BitMatrix;
use linkhom::movie::{induced_map, reidemeister_map, verify_movie_move};
use linkhom::szabo::{change_decoration, decorated_complex, h_map, verify_rule, Decoration, KhovanovOnly};
use linkhom::tqft::{check_4tu, check_frobenius_axioms, check_sphere_torus, cube_complex, iterated_cone, Cube, FrobeniusRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rules() -> [FrobeniusRule; 2] {
    [FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()]
}

fn corpus() -> Vec<NamedDiagram> {
    default_corpus().diagrams
}

fn kh_dims(d: &LinkDiagram) -> BTreeMap<(i32, i32), usize> {
    let c = cube_complex(d, &FrobeniusRule::khovanov()).expect("cube");
    c.homology().bigraded.expect("graded").entries.iter().map(|e| ((e.h, e.q), e.dim)).collect()
}

fn axioms() -> Outcome {
    let corpus = default_corpus();
    for rule in rules().iter().chain(&corpus.frobenius_rules) {
        for a in check_frobenius_axioms(rule) {
            ensure(a.holds, || format!("{} fails {}", rule.name, a.name))?;
        }
        ensure(check_sphere_torus(rule), || format!("{}: sphere or torus nonzero", rule.name))?;
        ensure(check_4tu(rule), || format!("{}: 4Tu fails", rule.name))?;
    }
    for nd in &corpus.diagrams {
        for rule in rules() {
            let c = cube_complex(&nd.diagram, &rule).map_err(|e| e.to_string())?;
            ensure(c.d().compose(c.d()).is_zero() && c.is_valid(), || format!("{} {}: d² ≠ 0", nd.name, rule.name))?;
        }
        let t = Decoration::standard(nd.diagram.crossing_count());
        let c = decorated_complex(&nd.diagram, &t, &KhovanovOnly).map_err(|e| e.to_string())?;
        ensure(c.d().compose(c.d()).is_zero(), || format!("{} decorated: d² ≠ 0", nd.name))?;
    }
    Ok(format!("{} diagrams, {} rules", corpus.diagrams.len(), 2 + corpus.frobenius_rules.len()))
}

fn jones() -> Outcome {
    // unnormalized Jones of X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)
    let pinned = common::unnormalized_jones(&common::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"));
    ensure(pinned == BTreeMap::from([(1, 1), (3, 1), (5, 1), (9, -1)]), || format!("pinned trefoil {pinned:?}"))?;
    for nd in corpus() {
        let chi: BTreeMap<i32, i64> = cube_complex(&nd.diagram, &FrobeniusRule::khovanov())
            .map_err(|e| e.to_string())?
            .homology()
            .bigraded
            .ok_or("Khovanov complex is graded")?
            .euler_characteristic()
            .terms()
            .collect();
        let oracle = common::unnormalized_jones(&common::parse(&nd.diagram.to_pd_string()));
        let lib: BTreeMap<i32, i64> = nd.diagram.kauffman_bracket_jones().terms().collect();
        ensure(chi == oracle, || format!("{}: χ = {chi:?}, bracket oracle {oracle:?}", nd.name))?;
        ensure(lib == oracle, || format!("{}: library bracket {lib:?}, oracle {oracle:?}", nd.name))?;
    }
    Ok(format!("{} diagrams", corpus().len()))
}

fn khovanov_dims() -> Outcome {
    let unknot = kh_dims(&LinkDiagram::unknot());
    ensure(unknot == BTreeMap::from([((0, -1), 1), ((0, 1), 1)]), || format!("unknot {unknot:?}"))?;
    // registered before running the library: GF(2) Khovanov homology
    let registered: [(&str, &str, Vec<((i32, i32), usize)>); 2] = [
        (
            "trefoil",
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
            vec![((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((2, 7), 1), ((3, 7), 1), ((3, 9), 1)],
        ),
        (
            "figure-eight",
            "X(1,2,5,4) X(3,7,6,5) X(4,6,8,1) X(7,3,2,8)",
            vec![
                ((-2, -5), 1),
                ((-2, -3), 1),
                ((-1, -3), 1),
                ((-1, -1), 1),
                ((0, -1), 1),
                ((0, 1), 1),
                ((1, 1), 1),
                ((1, 3), 1),
                ((2, 3), 1),
                ((2, 5), 1),
            ],
        ),
    ];
    for (name, pd, want) in registered {
        let want: BTreeMap<_, _> = want.into_iter().collect();
        let oracle = common::khovanov_dims(&common::parse(pd));
        ensure(oracle == want, || format!("{name}: brute force {oracle:?} disagrees with registered {want:?}"))?;
        let got = kh_dims(&LinkDiagram::parse(pd).map_err(|e| e.to_string())?);
        ensure(got == want, || format!("{name}: library {got:?}, expected {want:?}"))?;
    }
    for nd in corpus().iter().filter(|nd| nd.diagram.crossing_count() <= 6) {
        let oracle = common::khovanov_dims(&common::parse(&nd.diagram.to_pd_string()));
        let got = kh_dims(&nd.diagram);
        ensure(got == oracle, || format!("{}: library {got:?}, brute force {oracle:?}", nd.name))?;
    }
    Ok("unknot, trefoil, figure-eight and corpus ≤ 6 crossings".into())
}

fn bn_collapse() -> Outcome {
    let bn = FrobeniusRule::bar_natan();
    for nd in corpus() {
        let c = cube_complex(&nd.diagram, &bn).map_err(|e| e.to_string())?;
        let total = c.homology().total();
        let want = 1usize << nd.diagram.components();
        ensure(total == want, || format!("{}: dim H_BN = {total}, expected {want}", nd.name))?;
        if nd.diagram.crossing_count() == 0 {
            let pages = spectral_pages(&c, 4).map_err(|e| e.to_string())?;
            ensure(pages.khovanov().entries == pages.stable().entries, || format!("{}: pages move", nd.name))?;
        }
    }
    let t = LinkDiagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").map_err(|e| e.to_string())?;
    let pages = spectral_pages(&cube_complex(&t, &bn).map_err(|e| e.to_string())?, 8).map_err(|e| e.to_string())?;
    let (k, s) = (pages.khovanov().total, pages.stable().total);
    ensure((k, s) == (6, 2), || format!("trefoil pages {k} -> {s}"))?;
    Ok(format!("{} diagrams; trefoil pages {k} -> {s}", corpus().len()))
}

fn r_instances() -> Result<Vec<(String, LinkDiagram, ElementaryMove)>, String> {
    let err = |e: linkhom::diagram::DiagramError| e.to_string();
    let t = LinkDiagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").map_err(err)?;
    let mut out = Vec::new();
    for sign in [Sign::Positive, Sign::Negative] {
        for under_first in [true, false] {
            let mv = ElementaryMove::R1Insert { arc: 3, sign, under_first };
            let o = t.apply_move(&mv).map_err(err)?;
            out.push((format!("trefoil r1 {sign:?} {under_first}"), t.clone(), mv));
            out.push((format!("trefoil r1 {sign:?} {under_first} back"), o.diagram.clone(), ElementaryMove::R1Delete { arc: o.marked_arcs[0] }));
        }
    }
    out.push(("unknot r1".into(), LinkDiagram::unknot(), ElementaryMove::R1Insert { arc: 1, sign: Sign::Positive, under_first: true }));
    for choice in 0..t.r2_candidates(1, 4).len() {
        let mv = ElementaryMove::R2Insert { over: 1, under: 4, choice };
        let o = t.apply_move(&mv).map_err(err)?;
        out.push((format!("trefoil r2 {choice}"), t.clone(), mv));
        out.push((format!("trefoil r2 {choice} back"), o.diagram.clone(), ElementaryMove::R2Delete { over: o.marked_arcs[0], under: o.marked_arcs[1] }));
    }
    let u2 = LinkDiagram::unlink(2);
    if !u2.r2_candidates(1, 2).is_empty() {
        out.push(("unlink r2".into(), u2, ElementaryMove::R2Insert { over: 1, under: 2, choice: 0 }));
    }
    let b = LinkDiagram::braid_closure(3, &[1, 2, 1, 2]).map_err(err)?;
    out.push(("braid r3".into(), b, ElementaryMove::R3 { arcs: [4, 5, 6] }));
    Ok(out)
}

fn homotopic_to_identity(f: &FilteredChainMap, c: &FilteredComplex) -> Result<bool, String> {
    let id = FilteredChainMap::identity(c);
    Ok(homotopic(f, &id, c, c, HomotopyOptions { filtered: true }).map_err(|e| e.to_string())?.is_some())
}

fn reidemeister() -> Outcome {
    let instances = r_instances()?;
    ensure(instances.len() >= 10, || format!("only {} instances", instances.len()))?;
    for (name, d, mv) in &instances {
        for rule in rules() {
            let m = reidemeister_map(d, mv, &rule).map_err(|e| format!("{name} {}: {e}", rule.name))?;
            let (hs, ht) = (m.source.homology(), m.target.homology());
            let same = hs.total() == ht.total() && hs.filtered.as_ref().map(|f| &f.graded_pieces) == ht.filtered.as_ref().map(|f| &f.graded_pieces);
            let graded_same = rule != FrobeniusRule::khovanov() || hs.bigraded == ht.bigraded;
            ensure(same && graded_same, || format!("{name} {}: homology differs", rule.name))?;
            for (f, c) in [(m.rho_prime.compose(&m.rho), &m.source), (m.rho.compose(&m.rho_prime), &m.target)] {
                ensure(f.is_chain_map(c, c) && f.is_filtered(c, c), || format!("{name} {}: composite is not a filtered chain map", rule.name))?;
                ensure(homotopic_to_identity(&f, c)?, || format!("{name} {}: no filtered homotopy to the identity", rule.name))?;
            }
        }
    }
    Ok(format!("{} moves × 2 rules", instances.len()))
}

fn movies() -> Outcome {
    let pairs = default_corpus().movie_pairs;
    let names: Vec<&str> = pairs.iter().map(|p| p.name.as_str()).collect();
    ensure(pairs.len() >= 12, || format!("{} pairs", pairs.len()))?;
    for want in ["mm15", "handleswap-00", "handleswap-01", "handleswap-02", "handleswap-11", "handleswap-12", "handleswap-22", "type1-r1", "type1-r2", "type1-r3", "type2"] {
        ensure(names.iter().any(|n| n.starts_with(want)), || format!("no {want} pair"))?;
    }
    for p in &pairs {
        for rule in rules() {
            let h = verify_movie_move(&p.left, &p.right, &rule, HomotopyOptions { filtered: true }).map_err(|e| format!("{} {}: {e}", p.name, rule.name))?;
            ensure(h.is_some(), || format!("{} {}: not homotopic", p.name, rule.name))?;
        }
    }
    for p in pairs.iter().filter(|p| p.name.starts_with("mm15")) {
        let f = induced_map(&p.left, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
        let g = induced_map(&p.right, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
        ensure(f.matrix == g.matrix, || format!("{}: composite is not the identity on the nose", p.name))?;
    }
    Ok(format!("{} pairs × 2 rules", pairs.len()))
}

fn szabo() -> Outcome {
    let corpus = default_corpus();
    let small: Vec<LinkDiagram> = corpus.diagrams.iter().map(|nd| nd.diagram.clone()).filter(|d| d.crossing_count() <= 6).collect();
    for d in &small {
        let k = d.crossing_count();
        let cube = Cube::new(d, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
        let hs: Vec<_> = (0..k).map(|c| h_map(&cube, c).0).collect();
        for a in 0..k {
            ensure(hs[a].compose(&hs[a]).is_zero(), || format!("{d}: H_{a}² ≠ 0"))?;
            for b in a + 1..k {
                ensure(hs[a].compose(&hs[b]) == hs[b].compose(&hs[a]), || format!("{d}: H_{a} H_{b} ≠ H_{b} H_{a}"))?;
            }
        }
        let t = Decoration::standard(k);
        let dec = decorated_complex(d, &t, &KhovanovOnly).map_err(|e| e.to_string())?;
        ensure(&dec == cube.complex(), || format!("{d}: decorated complex differs from the cube"))?;
        for table in &corpus.szabo_rules {
            let dt = decorated_complex(d, &t, table).map_err(|e| e.to_string())?;
            ensure(&dt == cube.complex(), || format!("{d}: table rule differs from the cube"))?;
        }
        let id = linkhom::f2linalg::SparseMap::identity(cube.dim());
        for c in 0..k {
            let t2 = t.flipped(c);
            let there = change_decoration(&cube, &t, &t2).map_err(|e| e.to_string())?;
            let back = change_decoration(&cube, &t2, &t).map_err(|e| e.to_string())?;
            ensure(back.compose(&there) == id, || format!("{d}: flipping crossing {c} twice is not the identity"))?;
        }
    }
    let report = verify_rule(&KhovanovOnly, &small);
    ensure(report.passed(), || format!("rule checks: {:?}", report.checks))?;
    for table in &corpus.szabo_rules {
        let report = verify_rule(table, &small);
        ensure(report.passed(), || format!("{}: {:?}", report.rule, report.checks))?;
    }
    Ok(format!("{} diagrams", small.len()))
}

fn structural() -> Outcome {
    let ds = corpus();
    for nd in &ds {
        for rule in rules() {
            let cone = iterated_cone(&nd.diagram, &rule).map_err(|e| e.to_string())?;
            let cube = cube_complex(&nd.diagram, &rule).map_err(|e| e.to_string())?;
            ensure(cone.same_as(&cube), || format!("{} {}: iterated cone differs", nd.name, rule.name))?;
        }
    }
    let mut unions = 0;
    for a in &ds {
        for b in ds.iter().filter(|b| a.diagram.crossing_count() + b.diagram.crossing_count() <= 6) {
            for rule in rules() {
                let joined = cube_complex(&a.diagram.disjoint_union(&b.diagram), &rule).map_err(|e| e.to_string())?;
                let tensor = cube_complex(&a.diagram, &rule)
                    .map_err(|e| e.to_string())?
                    .tensor(&cube_complex(&b.diagram, &rule).map_err(|e| e.to_string())?)
                    .retag(|t| {
                        let (l, r) = t.split_once('⊗').expect("two factors");
                        let (lb, ll) = l.split_once('|').expect("bits|labels");
                        let (rb, rl) = r.split_once('|').expect("bits|labels");
                        format!("{lb}{rb}|{ll}{rl}")
                    });
                ensure(joined.same_as(&tensor), || format!("{} ⊔ {} {}: cube differs from tensor", a.name, b.name, rule.name))?;
                unions += 1;
            }
        }
    }
    Ok(format!("{} cones, {unions} unions", 2 * ds.len()))
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status.lines().find_map(|l| l.strip_prefix("VmHWM:")).and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c696e6b);
    for i in 0..1000 {
        let (r, c) = (rng.gen_range(1..=200), rng.gen_range(1..=200));
        let density = rng.gen_range(0.01..0.6);
        let rows: Vec<Vec<bool>> = (0..r).map(|_| (0..c).map(|_| rng.gen_bool(density)).collect()).collect();
        let packed = BitMatrix::from_rows(&rows);
        let (a, b) = (packed.rank(), common::naive_rank(rows));
        ensure(a == b, || format!("instance {i} ({r}×{c}): packed rank {a}, naive {b}"))?;
        ensure(packed.kernel_basis().len() == c - a, || format!("instance {i}: kernel dimension"))?;
    }

    let start = Instant::now();
    let twelve = &large_diagrams()[0];
    let d = &twelve.diagram;
    let kh = cube_complex(d, &FrobeniusRule::khovanov()).map_err(|e| e.to_string())?;
    let chi: BTreeMap<i32, i64> = kh.homology().bigraded.ok_or("graded")?.euler_characteristic().terms().collect();
    let jones: BTreeMap<i32, i64> = d.kauffman_bracket_jones().terms().collect();
    ensure(chi == jones, || "12 crossings: χ ≠ Jones".into())?;
    let bn = cube_complex(d, &FrobeniusRule::bar_natan()).map_err(|e| e.to_string())?;
    let total = bn.homology().total();
    ensure(total == 1 << d.components(), || format!("12 crossings: dim H_BN = {total}"))?;
    let pages = spectral_pages(&bn, 16).map_err(|e| e.to_string())?;
    ensure(pages.stable().total == total, || format!("12 crossings: stable page has {} classes", pages.stable().total))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("12-crossing pipeline took {elapsed:?}"))?;
    let rss = peak_rss_kib();
    if let Some(kib) = rss {
        ensure(kib < 4 * 1024 * 1024, || format!("peak RSS {kib} KiB"))?;
    }
    Ok(format!(
        "1000 eliminations agree; {} ({} generators) in {:.1}s, peak RSS {}",
        twelve.name,
        kh.dim(),
        elapsed.as_secs_f64(),
        rss.map_or("unknown".into(), |k| format!("{} MiB", k / 1024))
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("1 axioms", axioms, 60),
        ("2 jones", jones, 30),
        ("3 khovanov dims", khovanov_dims, 600),
        ("4 bar-natan collapse", bn_collapse, 60),
        ("5 reidemeister", reidemeister, 600),
        ("6 movie corpus", movies, 300),
        ("7 decorated cube", szabo, 600),
        ("8 structural", structural, 600),
        ("9 performance", performance, 600),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let result = result.and_then(|m| if secs < limit as f64 { Ok(m) } else { Err(format!("{m}; over the {limit}s limit")) });
        match result {
            Ok(m) => println!("PASS  {name:<22} {secs:>7.2}s  {m}"),
            Err(m) => {
                failed += 1;
                println!("FAIL  {name:<22} {secs:>7.2}s  {m}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
