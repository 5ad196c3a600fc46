use std::path::Path;

use matroid_hodge::fan::pl::{default_submodular, submodular_to_class, PlFunction};
use matroid_hodge::fan::{OrderFilter, RayLabel};
use matroid_hodge::flips::{chain_filters, ChainOrder};
use matroid_hodge::linalg::Q;
use matroid_hodge::matroid::{catalog, EdgeList};
use matroid_hodge::subset::MAX_GROUND;
use matroid_hodge::{Matroid, MatroidSpec, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::CliError;
use crate::Source;

pub struct Caps {
    max_ground: usize,
}

impl Caps {
    pub fn new(max_ground: usize) -> Result<Caps, CliError> {
        if max_ground == 0 || max_ground > MAX_GROUND {
            return Err(CliError::usage(format!(
                "--max-ground is {max_ground}, must be between 1 and the hard limit {MAX_GROUND}"
            )));
        }
        Ok(Caps { max_ground })
    }

    fn check(&self, n: usize) -> Result<(), CliError> {
        if n > self.max_ground {
            return Err(CliError {
                kind: "size_cap_exceeded",
                message: format!(
                    "ground set size is {n}, above the limit {} (raise --max-ground, hard limit {MAX_GROUND})",
                    self.max_ground
                ),
                exit: 2,
            });
        }
        Ok(())
    }
}

pub struct Loaded {
    pub name: String,
    pub matroid: Matroid,
    /// Present when the input was a graph.
    pub graph: Option<EdgeList>,
}

pub fn load(source: &Source, caps: &Caps) -> Result<Loaded, CliError> {
    if let Some(name) = &source.catalog {
        let matroid = catalog::get(name).ok_or_else(|| {
            CliError::usage(format!("unknown catalog matroid `{name}`; known: {}", catalog::NAMES.join(", ")))
        })?;
        caps.check(matroid.size())?;
        let graph = (name == "k4").then(|| EdgeList { vertices: 4, edges: catalog::K4_EDGES.to_vec() });
        return Ok(Loaded { name: name.clone(), matroid, graph });
    }
    let path = source.input.as_deref().expect("clap enforces one source");
    let text = read(path)?;
    let name = path.display().to_string();
    if text.trim_start().starts_with('{') {
        let spec = MatroidSpec::from_json(&text).map_err(|e| CliError::malformed(e.to_string()))?;
        let n = match &spec {
            MatroidSpec::Bases { n, .. }
            | MatroidSpec::Flats { n, .. }
            | MatroidSpec::Graph { n, .. }
            | MatroidSpec::Uniform { n, .. }
            | MatroidSpec::Boolean { n } => *n,
        };
        caps.check(n)?;
        let graph = match &spec {
            MatroidSpec::Graph { vertices, edges, .. } => {
                Some(EdgeList { vertices: *vertices, edges: edges.clone() })
            }
            _ => None,
        };
        let matroid = spec.build()?;
        Ok(Loaded { name, matroid, graph })
    } else {
        let graph = EdgeList::parse(&text).map_err(|e| CliError::malformed(e.to_string()))?;
        caps.check(graph.edges.len())?;
        let matroid = Matroid::graphic(graph.vertices, &graph.edges)?;
        Ok(Loaded { name, matroid, graph: Some(graph) })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::file_not_found(format!("{}: no such file", path.display()))
        } else {
            CliError::malformed(format!("{}: {e}", path.display()))
        }
    })
}

/// Filters named by a descriptor, each with a stable label.
pub fn filters(m: &Matroid, descriptor: &str) -> Result<Vec<(String, OrderFilter)>, CliError> {
    let bad = || {
        CliError::usage(format!("bad filter `{descriptor}`; expected full, empty, chain, chain:J or rank:K"))
    };
    let chain = || chain_filters(m, ChainOrder::HighRankFirst);
    Ok(match descriptor.split_once(':') {
        None => match descriptor {
            "full" => vec![("full".into(), OrderFilter::full(m))],
            "empty" => vec![("empty".into(), OrderFilter::empty())],
            "chain" => chain().into_iter().enumerate().map(|(j, p)| (format!("chain:{j}"), p)).collect(),
            _ => return Err(bad()),
        },
        Some(("chain", j)) => {
            let j: usize = j.parse().map_err(|_| bad())?;
            let all = chain();
            let len = all.len();
            let p = all.into_iter().nth(j).ok_or_else(|| {
                CliError::usage(format!("chain:{j} is out of range; the flip chain has {len} filters (0..{len})"))
            })?;
            vec![(descriptor.into(), p)]
        }
        Some(("rank", k)) => {
            let k: usize = k.parse().map_err(|_| bad())?;
            vec![(descriptor.into(), OrderFilter::rank_at_least(m, k))]
        }
        _ => return Err(bad()),
    })
}

/// The class `ℓ` and a description of where it came from.
pub fn ell(m: &Matroid, spec: &str, seed: u64) -> Result<(PlFunction, String), CliError> {
    let n = m.size();
    match spec {
        "default" => Ok((submodular_to_class(m, default_submodular(n))?, "c_S = |S|(n-|S|)".into())),
        "random" => {
            // |S|(n-|S|) plus budget-additive terms, which are submodular
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let terms: Vec<(Vec<i64>, i64)> = (0..3)
                .map(|_| ((0..n).map(|_| rng.gen_range(0..=3)).collect(), rng.gen_range(1..=6)))
                .collect();
            let base = default_submodular(n);
            let c = move |s: Subset| {
                let extra: i64 = terms.iter().map(|(w, cap)| s.iter().map(|i| w[i]).sum::<i64>().min(*cap)).sum();
                base(s) + Q::from_integer(extra.into())
            };
            Ok((submodular_to_class(m, c)?, format!("random strictly submodular (seed {seed})")))
        }
        path => {
            let text = read(Path::new(path))?;
            Ok((parse_ell(m, &text)?, format!("file {path}")))
        }
    }
}

/// Lines `label value`: `e3` for an element, `e{0,1,2}` for a flat; rays
/// not listed get 0.
pub fn parse_ell(m: &Matroid, text: &str) -> Result<PlFunction, CliError> {
    let mut f = PlFunction::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |why: &str| CliError::malformed(format!("ell line {}: {why}: `{raw}`", lineno + 1));
        let (label, value) = line.rsplit_once(char::is_whitespace).ok_or_else(|| bad("expected `label value`"))?;
        let value: Q = value.trim().parse().map_err(|_| bad("bad rational"))?;
        let label = label.trim().strip_prefix('e').ok_or_else(|| bad("labels start with e"))?;
        let label = if let Some(inner) = label.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let elements: Vec<usize> = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad element")))
                .collect::<Result<_, _>>()?;
            if elements.iter().any(|&i| i >= m.size()) {
                return Err(bad("element out of range"));
            }
            let s = Subset::from_elements(elements);
            if s.is_empty() || s == m.ground() || !m.is_flat(s) {
                return Err(bad("not a nonempty proper flat"));
            }
            RayLabel::Flat(s)
        } else {
            let i: usize = label.parse().map_err(|_| bad("bad element"))?;
            if i >= m.size() {
                return Err(bad("element out of range"));
            }
            RayLabel::Element(i)
        };
        f.set(label, value);
    }
    Ok(f)
}
