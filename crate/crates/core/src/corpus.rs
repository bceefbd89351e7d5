//! The shipped corpus and loading of corpus directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagram::LinkDiagram;
use crate::movie::{Movie, MovieError, MoviePair};
use crate::szabo::{SzaboError, TableRule};
use crate::tqft::FrobeniusRule;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{name}: {msg}")]
    Invalid { name: String, msg: String },
    #[error("{name}: {source}")]
    Movie { name: String, source: MovieError },
    #[error("{name}: {source}")]
    Rule { name: String, source: SzaboError },
    #[error("movie pair {0} is missing one side")]
    Unpaired(String),
}

#[derive(Clone, Debug)]
pub struct NamedDiagram {
    pub name: String,
    pub diagram: LinkDiagram,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub diagrams: Vec<NamedDiagram>,
    pub movie_pairs: Vec<MoviePair>,
    pub frobenius_rules: Vec<FrobeniusRule>,
    pub szabo_rules: Vec<TableRule>,
}

macro_rules! embedded {
    ($dir:literal; $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../corpus/", $dir, "/", $name)))),*]
    };
}

const DIAGRAMS: &[(&str, &str)] = embedded!("diagrams";
    "unknot.pd", "unlink-2.pd", "unlink-3.pd", "hopf-pos.pd", "hopf-neg.pd", "trefoil-pos.pd", "trefoil-neg.pd",
    "figure-eight.pd", "torus-2-5.pd", "twist-three.pd", "twist-four.pd", "torus-2-7.pd", "torus-3-4.pd");

const LARGE: &[(&str, &str)] = embedded!("large"; "twelve.pd");

const RULES: &[(&str, &str)] = embedded!("rules"; "khovanov.json", "bar-natan.json", "szabo-khovanov-only.json");

const MOVIES: &[(&str, &str)] = embedded!("movies";
    "mm15-birth-merge.left.movie", "mm15-birth-merge.right.movie",
    "mm15-split-death.left.movie", "mm15-split-death.right.movie",
    "handleswap-00.left.movie", "handleswap-00.right.movie",
    "handleswap-01.left.movie", "handleswap-01.right.movie",
    "handleswap-02.left.movie", "handleswap-02.right.movie",
    "handleswap-11.left.movie", "handleswap-11.right.movie",
    "handleswap-12.left.movie", "handleswap-12.right.movie",
    "handleswap-22.left.movie", "handleswap-22.right.movie",
    "type1-r1+.left.movie", "type1-r1+.right.movie",
    "type1-r1-.left.movie", "type1-r1-.right.movie",
    "type1-r2.left.movie", "type1-r2.right.movie",
    "type1-r3.left.movie", "type1-r3.right.movie",
    "type2-braid-relation.left.movie", "type2-braid-relation.right.movie");

/// PD text with `#` comments and blank lines removed.
fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ")
}

fn stem<'a>(name: &'a str, ext: &str) -> &'a str {
    name.strip_suffix(ext).unwrap_or(name)
}

fn parse_diagram(name: &str, text: &str) -> Result<NamedDiagram, CorpusError> {
    let diagram = LinkDiagram::parse(&strip_comments(text)).map_err(|e| CorpusError::Invalid { name: name.into(), msg: e.to_string() })?;
    Ok(NamedDiagram { name: stem(name, ".pd").into(), diagram })
}

enum Rule {
    Frobenius(FrobeniusRule),
    Szabo(TableRule),
}

fn parse_rule(name: &str, text: &str) -> Result<Rule, CorpusError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CorpusError::Invalid { name: name.into(), msg: e.to_string() })?;
    if value.get("entries").is_some() {
        TableRule::from_json_str(text).map(Rule::Szabo).map_err(|source| CorpusError::Rule { name: name.into(), source })
    } else {
        serde_json::from_value(value).map(Rule::Frobenius).map_err(|e| CorpusError::Invalid { name: name.into(), msg: e.to_string() })
    }
}

fn pair_movies<'a>(files: impl IntoIterator<Item = (String, &'a str)>) -> Result<Vec<MoviePair>, CorpusError> {
    let mut sides: BTreeMap<String, (Option<Movie>, Option<Movie>)> = BTreeMap::new();
    for (name, text) in files {
        let movie = Movie::parse(text).map_err(|source| CorpusError::Movie { name: name.clone(), source })?;
        let base = stem(&name, ".movie");
        let (pair, left) = match (base.strip_suffix(".left"), base.strip_suffix(".right")) {
            (Some(p), _) => (p, true),
            (_, Some(p)) => (p, false),
            _ => return Err(CorpusError::Invalid { name, msg: "movie files are named <pair>.left.movie or <pair>.right.movie".into() }),
        };
        let slot = sides.entry(pair.to_string()).or_default();
        if left {
            slot.0 = Some(movie);
        } else {
            slot.1 = Some(movie);
        }
    }
    sides
        .into_iter()
        .map(|(name, sides)| match sides {
            (Some(left), Some(right)) => Ok(MoviePair { name, left, right }),
            _ => Err(CorpusError::Unpaired(name)),
        })
        .collect()
}

fn assemble<'a>(diagrams: Vec<NamedDiagram>, rules: impl IntoIterator<Item = (String, &'a str)>, movies: Vec<MoviePair>) -> Result<Corpus, CorpusError> {
    let mut c = Corpus { diagrams, movie_pairs: movies, ..Corpus::default() };
    for (name, text) in rules {
        match parse_rule(&name, text)? {
            Rule::Frobenius(r) => c.frobenius_rules.push(r),
            Rule::Szabo(r) => c.szabo_rules.push(r),
        }
    }
    Ok(c)
}

/// The corpus compiled into the library.
pub fn default_corpus() -> Corpus {
    let diagrams = DIAGRAMS.iter().map(|(n, t)| parse_diagram(n, t)).collect::<Result<_, _>>().expect("shipped diagrams parse");
    let movies = pair_movies(MOVIES.iter().map(|(n, t)| (n.to_string(), *t))).expect("shipped movies parse");
    assemble(diagrams, RULES.iter().map(|(n, t)| (n.to_string(), *t)), movies).expect("shipped rules parse")
}

/// Diagrams too large for the fast suites.
pub fn large_diagrams() -> Vec<NamedDiagram> {
    LARGE.iter().map(|(n, t)| parse_diagram(n, t)).collect::<Result<_, _>>().expect("shipped diagrams parse")
}

pub fn diagram(name: &str) -> Option<LinkDiagram> {
    default_corpus().diagrams.into_iter().chain(large_diagrams()).find(|d| d.name == name).map(|d| d.diagram)
}

fn read_dir_sorted(dir: &Path, ext: &str) -> Result<Vec<(String, String)>, CorpusError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let io = |source| CorpusError::Io { path: dir.to_path_buf(), source };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        if name.ends_with(ext) {
            let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io { path: path.clone(), source })?;
            out.push((name, text));
        }
    }
    out.sort();
    Ok(out)
}

/// Reads `diagrams/*.pd`, `movies/*.{left,right}.movie` and `rules/*.json`
/// under `root`. Missing subdirectories are empty.
pub fn load_dir(root: &Path) -> Result<Corpus, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::Io { path: root.to_path_buf(), source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory") });
    }
    let diagrams = read_dir_sorted(&root.join("diagrams"), ".pd")?.iter().map(|(n, t)| parse_diagram(n, t)).collect::<Result<_, _>>()?;
    let movies = read_dir_sorted(&root.join("movies"), ".movie")?;
    let movies = pair_movies(movies.iter().map(|(n, t)| (n.clone(), t.as_str())))?;
    let rules = read_dir_sorted(&root.join("rules"), ".json")?;
    assemble(diagrams, rules.iter().map(|(n, t)| (n.clone(), t.as_str())), movies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movie::canned_corpus;
    use itertools::Itertools;

    fn repo_corpus() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
    }

    #[test]
    fn default_corpus_contents() {
        let c = default_corpus();
        assert_eq!(c.diagrams.len(), 13);
        assert!(c.diagrams.iter().all(|d| d.diagram.crossing_count() <= 8));
        assert_eq!(c.frobenius_rules, vec![FrobeniusRule::khovanov(), FrobeniusRule::bar_natan()]);
        assert_eq!(c.szabo_rules.len(), 1);
        assert_eq!(large_diagrams()[0].diagram.crossing_count(), 12);
    }

    /// The shipped movie files are the canned corpus written out. Set
    /// `LINKHOM_BLESS=1` to rewrite them.
    #[test]
    fn shipped_movies_match_canned_corpus() {
        let canned = canned_corpus().unwrap();
        if std::env::var_os("LINKHOM_BLESS").is_some() {
            let dir = repo_corpus().join("movies");
            fs::create_dir_all(&dir).unwrap();
            for p in &canned {
                fs::write(dir.join(format!("{}.left.movie", p.name)), p.left.to_string()).unwrap();
                fs::write(dir.join(format!("{}.right.movie", p.name)), p.right.to_string()).unwrap();
            }
        }
        let shipped = default_corpus().movie_pairs;
        assert_eq!(shipped.len(), canned.len());
        for p in &canned {
            let s = shipped.iter().find(|s| s.name == p.name).unwrap_or_else(|| panic!("{} not shipped", p.name));
            assert_eq!(s.left, p.left, "{}", p.name);
            assert_eq!(s.right, p.right, "{}", p.name);
        }
    }

    #[test]
    fn load_dir_matches_embedded() {
        let c = load_dir(&repo_corpus()).unwrap();
        let d = default_corpus();
        let names = |c: &Corpus| c.diagrams.iter().map(|d| d.name.clone()).sorted().collect::<Vec<_>>();
        assert_eq!(names(&c), names(&d));
        assert_eq!(c.movie_pairs.len(), d.movie_pairs.len());
        assert!(load_dir(Path::new("/nonexistent/corpus")).is_err());
    }

}
