use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

/// Arrow `name: source -> target`, endpoints as vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A path given by its starting vertex and arrows in traversal order.
/// The empty path at a vertex is the stationary path there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

/// `sum_i coeff_i * path_i`, all paths with common source and target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(BigRational, Path)>,
}

/// A quiver with relations presenting a finite-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverPresentation {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("path `{0}` is not composable")]
    NonComposable(String),
    #[error("relation path `{0}` has length < 2")]
    RelationTooShort(String),
    #[error("relation paths do not share source and target")]
    MixedEndpoints,
    #[error("path `{0}` appears twice in one relation")]
    RepeatedTerm(String),
    #[error("coefficient of `{0}` is zero")]
    ZeroCoefficient(String),
    #[error("no vertices declared")]
    NoVertices,
}

impl QuiverPresentation {
    /// Builds a presentation from already-resolved parts, validating the
    /// same invariants the text parser enforces.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation>) -> Result<Self, ParseErrorKind> {
        if vertices.is_empty() {
            return Err(ParseErrorKind::NoVertices);
        }
        let q = QuiverPresentation { vertices, arrows, relations: Vec::new() };
        for a in &q.arrows {
            if a.source >= q.vertices.len() {
                return Err(ParseErrorKind::UnknownVertex(a.source.to_string()));
            }
            if a.target >= q.vertices.len() {
                return Err(ParseErrorKind::UnknownVertex(a.target.to_string()));
            }
        }
        for r in &relations {
            q.validate_relation(r)?;
        }
        Ok(QuiverPresentation { relations, ..q })
    }

    fn validate_relation(&self, r: &Relation) -> Result<(), ParseErrorKind> {
        let mut ends = None;
        let mut seen = BTreeSet::new();
        for (c, path) in &r.terms {
            let shown = self.path_string(path);
            if c.is_zero() {
                return Err(ParseErrorKind::ZeroCoefficient(shown));
            }
            if path.arrows.len() < 2 {
                return Err(ParseErrorKind::RelationTooShort(shown));
            }
            let Some(end) = self.path_end(path) else {
                return Err(ParseErrorKind::NonComposable(shown));
            };
            if !seen.insert(path.arrows.clone()) {
                return Err(ParseErrorKind::RepeatedTerm(shown));
            }
            match ends {
                None => ends = Some((path.start, end)),
                Some(e) if e != (path.start, end) => return Err(ParseErrorKind::MixedEndpoints),
                _ => {}
            }
        }
        if r.terms.is_empty() {
            return Err(ParseErrorKind::Syntax("empty relation".into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn is_hereditary(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Terminal vertex of a path, or `None` if consecutive arrows do not meet.
    pub fn path_end(&self, path: &Path) -> Option<usize> {
        let mut at = path.start;
        for &a in &path.arrows {
            let arrow = self.arrows.get(a)?;
            if arrow.source != at {
                return None;
            }
            at = arrow.target;
        }
        Some(at)
    }

    pub fn path_string(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            return format!("e_{}", self.vertices[path.start]);
        }
        path.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// Whether every relation coefficient survives reduction mod `p`.
    pub fn admits_prime(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.relations
            .iter()
            .flat_map(|r| r.terms.iter())
            .all(|(c, _)| !(c.denom() % &p).is_zero())
    }

    /// Parses the line-oriented quiver format:
    ///
    /// ```text
    /// # comment
    /// vertex 1
    /// vertex 2
    /// arrow a: 1 -> 2
    /// relation a*b              # coefficient defaults to 1
    /// relation 1 a*b + -1/2 c*d
    /// ```
    ///
    /// Vertex names are `[A-Za-z0-9_]+`; arrow names additionally must start
    /// with a letter or underscore so they can never be read as coefficients.
    /// Terms are separated by a standalone `+`; negative coefficients carry
    /// their own sign.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vertices: Vec<String> = Vec::new();
        let mut vertex_ix: HashMap<String, usize> = HashMap::new();
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut arrow_ix: HashMap<String, usize> = HashMap::new();
        let mut pending: Vec<(usize, String)> = Vec::new();

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |kind| ParseError { line: line_no, kind };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match keyword {
                "vertex" => {
                    if !valid_vertex_name(rest) {
                        return Err(err(ParseErrorKind::InvalidName(rest.into())));
                    }
                    if vertex_ix.insert(rest.to_string(), vertices.len()).is_some() {
                        return Err(err(ParseErrorKind::Duplicate(rest.into())));
                    }
                    vertices.push(rest.to_string());
                }
                "arrow" => {
                    let (name, ends) = rest
                        .split_once(':')
                        .ok_or_else(|| err(ParseErrorKind::Syntax("expected `arrow <name>: <src> -> <tgt>`".into())))?;
                    let name = name.trim();
                    if !valid_arrow_name(name) {
                        return Err(err(ParseErrorKind::InvalidName(name.into())));
                    }
                    let (src, tgt) = ends
                        .split_once("->")
                        .ok_or_else(|| err(ParseErrorKind::Syntax("expected `<src> -> <tgt>`".into())))?;
                    let (src, tgt) = (src.trim(), tgt.trim());
                    let source = *vertex_ix.get(src).ok_or_else(|| err(ParseErrorKind::UnknownVertex(src.into())))?;
                    let target = *vertex_ix.get(tgt).ok_or_else(|| err(ParseErrorKind::UnknownVertex(tgt.into())))?;
                    if arrow_ix.insert(name.to_string(), arrows.len()).is_some() {
                        return Err(err(ParseErrorKind::Duplicate(name.into())));
                    }
                    arrows.push(Arrow { name: name.to_string(), source, target });
                }
                "relation" => pending.push((line_no, rest.to_string())),
                other => return Err(err(ParseErrorKind::Syntax(format!("unknown directive `{other}`")))),
            }
        }
        if vertices.is_empty() {
            return Err(ParseError { line: 0, kind: ParseErrorKind::NoVertices });
        }
        let base = QuiverPresentation { vertices, arrows, relations: Vec::new() };
        let mut relations = Vec::new();
        for (line, body) in pending {
            let rel = base.parse_relation(&body, &arrow_ix).map_err(|kind| ParseError { line, kind })?;
            base.validate_relation(&rel).map_err(|kind| ParseError { line, kind })?;
            relations.push(rel);
        }
        Ok(QuiverPresentation { relations, ..base })
    }

    fn parse_relation(&self, body: &str, arrow_ix: &HashMap<String, usize>) -> Result<Relation, ParseErrorKind> {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(ParseErrorKind::Syntax("empty relation".into()));
        }
        let mut terms = Vec::new();
        for chunk in tokens.split(|t| *t == "+") {
            let (coeff, path_tok) = match chunk {
                [path] => (BigRational::from_integer(1.into()), *path),
                [c, path] => (parse_rational(c)?, *path),
                [] => return Err(ParseErrorKind::Syntax("dangling `+`".into())),
                _ => return Err(ParseErrorKind::Syntax(format!("cannot read term `{}`", chunk.join(" ")))),
            };
            let mut arrows = Vec::new();
            for name in path_tok.split('*') {
                let ix = *arrow_ix.get(name).ok_or_else(|| ParseErrorKind::UnknownArrow(name.into()))?;
                arrows.push(ix);
            }
            let start = self.arrows[arrows[0]].source;
            terms.push((coeff, Path { start, arrows }));
        }
        Ok(Relation { terms })
    }
}

fn valid_vertex_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn valid_arrow_name(s: &str) -> bool {
    valid_vertex_name(s) && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

fn parse_rational(s: &str) -> Result<BigRational, ParseErrorKind> {
    let bad = || ParseErrorKind::Syntax(format!("bad coefficient `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl fmt::Display for QuiverPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for a in &self.arrows {
            writeln!(f, "arrow {}: {} -> {}", a.name, self.vertices[a.source], self.vertices[a.target])?;
        }
        for r in &self.relations {
            let terms: Vec<String> = r.terms.iter().map(|(c, p)| format!("{c} {}", self.path_string(p))).collect();
            writeln!(f, "relation {}", terms.join(" + "))?;
        }
        Ok(())
    }
}
