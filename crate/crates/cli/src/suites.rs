use clap::ValueEnum;
use linkhom::chaincx::HomotopyOptions;
use linkhom::corpus::{Corpus, NamedDiagram};
use linkhom::diagram::{ElementaryMove, LinkDiagram, Sign};
use linkhom::movie::{r3_triangle, reidemeister_map, verify_movie_move};
use linkhom::szabo::{decorated_complex, verify_rule, CheckStatus, Decoration, HigherRule, KhovanovOnly};
use linkhom::tqft::{check_4tu, check_frobenius_axioms, check_sphere_torus, cube_complex, FrobeniusRule};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Reidemeister,
    Moviemoves,
    Szabo,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Reidemeister => "reidemeister",
            Suite::Moviemoves => "moviemoves",
            Suite::Szabo => "szabo",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, result: Result<(), String>) -> Self {
        let (passed, detail) = match result {
            Ok(()) => (true, None),
            Err(e) => (false, Some(e)),
        };
        Check { name: name.into(), passed, detail }
    }
}

fn rules_of(c: &Corpus) -> Vec<FrobeniusRule> {
    if c.frobenius_rules.is_empty() {
        vec![FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()]
    } else {
        c.frobenius_rules.clone()
    }
}

pub fn run(suite: Suite, c: &Corpus) -> Vec<Check> {
    match suite {
        Suite::Axioms => axioms(c),
        Suite::Reidemeister => reidemeister(c),
        Suite::Moviemoves => movie_moves(c),
        Suite::Szabo => szabo(c),
    }
}

fn axioms(c: &Corpus) -> Vec<Check> {
    let rules = rules_of(c);
    let mut out = Vec::new();
    for r in &rules {
        for a in check_frobenius_axioms(r) {
            out.push(Check::new(format!("{}: {}", r.name, a.name), if a.holds { Ok(()) } else { Err("fails".into()) }));
        }
        out.push(Check::new(format!("{}: sphere and torus vanish", r.name), check_sphere_torus(r).then_some(()).ok_or_else(|| "nonzero".into())));
        out.push(Check::new(format!("{}: 4Tu", r.name), check_4tu(r).then_some(()).ok_or_else(|| "fails".into())));
    }
    let items: Vec<(&NamedDiagram, Option<&FrobeniusRule>)> =
        c.diagrams.iter().flat_map(|nd| rules.iter().map(move |r| (nd, Some(r))).chain([(nd, None)])).collect();
    out.extend(items.par_iter().map(|&(nd, rule)| {
        let (label, cx) = match rule {
            Some(r) => (r.name.clone(), cube_complex(&nd.diagram, r).map_err(|e| e.to_string())),
            None => {
                let t = Decoration::standard(nd.diagram.crossing_count());
                ("khovanov-only decorated".to_string(), decorated_complex(&nd.diagram, &t, &KhovanovOnly).map_err(|e| e.to_string()))
            }
        };
        let result = cx.and_then(|cx| if cx.is_valid() { Ok(()) } else { Err(format!("{} violations", cx.verify().len())) });
        Check::new(format!("{} {label}: d² = 0", nd.name), result)
    }).collect::<Vec<_>>());
    out
}

/// A few moves of each kind on a diagram, chosen deterministically.
fn sample_moves(d: &LinkDiagram) -> Vec<(String, LinkDiagram, ElementaryMove)> {
    let mut out = Vec::new();
    if d.arc_count() == 0 {
        return out;
    }
    for sign in [Sign::Positive, Sign::Negative] {
        let mv = ElementaryMove::R1Insert { arc: 1, sign, under_first: true };
        if let Ok(o) = d.apply_move(&mv) {
            out.push((linkhom::movie::format_move(&mv), d.clone(), mv));
            let back = ElementaryMove::R1Delete { arc: o.marked_arcs[0] };
            out.push((format!("{} after kink", linkhom::movie::format_move(&back)), o.diagram, back));
        }
    }
    let n = d.arc_count();
    if let Some((over, under)) = (1..=n).flat_map(|a| (1..=n).map(move |b| (a, b))).find(|&(a, b)| !d.r2_candidates(a, b).is_empty()) {
        let mv = ElementaryMove::R2Insert { over, under, choice: 0 };
        if let Ok(o) = d.apply_move(&mv) {
            out.push((linkhom::movie::format_move(&mv), d.clone(), mv));
            let back = ElementaryMove::R2Delete { over: o.marked_arcs[0], under: o.marked_arcs[1] };
            out.push((format!("{} after push", linkhom::movie::format_move(&back)), o.diagram, back));
        }
    }
    if let Some(arcs) = r3_triangle(d) {
        let mv = ElementaryMove::R3 { arcs };
        out.push((linkhom::movie::format_move(&mv), d.clone(), mv));
    }
    out
}

fn reidemeister(c: &Corpus) -> Vec<Check> {
    let rules = rules_of(c);
    let items: Vec<(String, LinkDiagram, ElementaryMove, FrobeniusRule)> = c
        .diagrams
        .iter()
        .flat_map(|nd| sample_moves(&nd.diagram).into_iter().map(move |(label, d, mv)| (format!("{} {label}", nd.name), d, mv)))
        .flat_map(|(label, d, mv)| rules.iter().map(move |r| (format!("{label} [{}]", r.name), d.clone(), mv.clone(), r.clone())))
        .collect();
    items
        .par_iter()
        .map(|(label, d, mv, rule)| {
            let result = reidemeister_map(d, mv, rule).map_err(|e| e.to_string()).and_then(|m| m.verify());
            Check::new(label.clone(), result)
        })
        .collect()
}

fn movie_moves(c: &Corpus) -> Vec<Check> {
    let rules = rules_of(c);
    let items: Vec<_> = c.movie_pairs.iter().flat_map(|p| rules.iter().map(move |r| (p, r))).collect();
    items
        .par_iter()
        .map(|(p, r)| {
            let result = match verify_movie_move(&p.left, &p.right, r, HomotopyOptions::default()) {
                Ok(Some(_)) => Ok(()),
                Ok(None) => Err("not homotopic".into()),
                Err(e) => Err(e.to_string()),
            };
            Check::new(format!("{} [{}]", p.name, r.name), result)
        })
        .collect()
}

fn szabo(c: &Corpus) -> Vec<Check> {
    let diagrams: Vec<LinkDiagram> = c.diagrams.iter().map(|nd| nd.diagram.clone()).collect();
    let mut rules: Vec<&dyn HigherRule> = vec![&KhovanovOnly];
    rules.extend(c.szabo_rules.iter().map(|r| r as &dyn HigherRule));
    let mut out = Vec::new();
    for rule in rules {
        let report = verify_rule(rule, &diagrams);
        for check in report.checks {
            let result = match check.status {
                CheckStatus::Pass => Ok(()),
                CheckStatus::Untestable(why) => {
                    out.push(Check { name: format!("{}: {}", report.rule, check.name), passed: true, detail: Some(format!("untestable: {why}")) });
                    continue;
                }
                CheckStatus::Fail(w) => Err(w),
            };
            out.push(Check::new(format!("{}: {}", report.rule, check.name), result));
        }
    }
    out
}
