use serde::{Deserialize, Serialize};

use super::Matroid;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// On-disk description of a matroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
pub enum MatroidSpec {
    Bases { n: usize, bases: Vec<Subset> },
    Flats { n: usize, flats: Vec<Subset> },
    Graph { n: usize, vertices: usize, edges: Vec<(usize, usize)> },
    Uniform { n: usize, rank: usize },
    Boolean { n: usize },
}

impl MatroidSpec {
    pub fn from_json(text: &str) -> Result<MatroidSpec> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidSpec::Bases { n, bases } => Matroid::from_bases(*n, bases),
            MatroidSpec::Flats { n, flats } => Matroid::from_flats(*n, flats),
            MatroidSpec::Graph { n, vertices, edges } => {
                if *n != edges.len() {
                    return Err(Error::Malformed(format!(
                        "graph declares n = {n} but lists {} edges",
                        edges.len()
                    )));
                }
                Matroid::graphic(*vertices, edges)
            }
            MatroidSpec::Uniform { n, rank } => Matroid::uniform(*rank, *n),
            MatroidSpec::Boolean { n } => Matroid::boolean(*n),
        }
    }
}

impl Matroid {
    /// Canonical description by bases, sorted.
    pub fn to_spec(&self) -> MatroidSpec {
        let r = self.rank();
        let mut bases: Vec<Subset> = self
            .ground()
            .subsets()
            .filter(|&s| s.len() == r && self.rank_of(s) == r)
            .collect();
        bases.sort_by(|a, b| a.lex_cmp(*b));
        MatroidSpec::Bases { n: self.size(), bases }
    }
}

/// A multigraph read from edge-list text: one `u v` pair per line, `#`
/// comments, and an optional `vertices N` line for isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn parse(text: &str) -> Result<EdgeList> {
        let mut declared = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Malformed(format!("line {}: expected `u v`, got `{raw}`", lineno + 1));
            match parts.as_slice() {
                ["vertices", k] => declared = Some(k.parse::<usize>().map_err(|_| bad())?),
                [u, v] => edges.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)),
                _ => return Err(bad()),
            }
        }
        let needed = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let vertices = match declared {
            Some(k) if k < needed => {
                return Err(Error::Malformed(format!(
                    "declared {k} vertices but an edge uses vertex {}",
                    needed - 1
                )))
            }
            Some(k) => k,
            None => needed,
        };
        Ok(EdgeList { vertices, edges })
    }
}
