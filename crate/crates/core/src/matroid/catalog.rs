//! Small named matroids used by the CLI and the test suites.

use super::Matroid;
use crate::subset::Subset;

pub const NAMES: [&str; 10] = [
    "u12", "u23", "u24", "u34", "boolean3", "boolean4", "k4", "fano", "nonfano", "vamos",
];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "u12" => "uniform matroid U(1,2)",
        "u23" => "uniform matroid U(2,3)",
        "u24" => "uniform matroid U(2,4)",
        "u34" => "uniform matroid U(3,4)",
        "boolean3" => "Boolean matroid on 3 elements",
        "boolean4" => "Boolean matroid on 4 elements",
        "k4" => "cycle matroid of the complete graph K4",
        "fano" => "Fano plane",
        "nonfano" => "non-Fano plane (Fano with one line relaxed)",
        "vamos" => "Vamos matroid (not representable over any field)",
        _ => return None,
    })
}

pub fn get(name: &str) -> Option<Matroid> {
    Some(match name {
        "u12" => uniform(1, 2),
        "u23" => uniform(2, 3),
        "u24" => uniform(2, 4),
        "u34" => uniform(3, 4),
        "boolean3" => Matroid::boolean(3).expect("valid"),
        "boolean4" => Matroid::boolean(4).expect("valid"),
        "k4" => k4(),
        "fano" => fano(),
        "nonfano" => nonfano(),
        "vamos" => vamos(),
        _ => return None,
    })
}

fn uniform(r: usize, n: usize) -> Matroid {
    Matroid::uniform(r, n).expect("valid")
}

pub const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn k4() -> Matroid {
    Matroid::graphic(4, &K4_EDGES).expect("valid")
}

pub const FANO_LINES: [[usize; 3]; 7] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [1, 3, 5],
    [1, 4, 6],
    [2, 3, 6],
    [2, 4, 5],
];

/// Simple rank-3 matroid whose only dependent triples are subsets of `lines`.
pub fn rank3_from_lines(n: usize, lines: &[Subset]) -> Matroid {
    Matroid::from_rank_fn(n, |s| match s.len() {
        0..=2 => s.len(),
        _ if lines.iter().any(|l| s.is_subset_of(*l)) => 2,
        _ => 3,
    })
    .expect("valid")
}

fn lines(ls: &[[usize; 3]]) -> Vec<Subset> {
    ls.iter().map(|l| Subset::from_elements(l.iter().copied())).collect()
}

pub fn fano() -> Matroid {
    rank3_from_lines(7, &lines(&FANO_LINES))
}

pub fn nonfano() -> Matroid {
    rank3_from_lines(7, &lines(&FANO_LINES[..6]))
}

/// Rank 4 on pairs {0,1}, {2,3}, {4,5}, {6,7}: every union of two pairs
/// except {4,5,6,7} is a circuit-hyperplane.
pub fn vamos() -> Matroid {
    let pairs = [[0, 1], [2, 3], [4, 5], [6, 7]];
    let mut dependent = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if (i, j) != (2, 3) {
                dependent.push(Subset::from_elements(pairs[i].into_iter().chain(pairs[j])));
            }
        }
    }
    Matroid::from_rank_fn(8, |s| {
        if s.len() == 4 && dependent.contains(&s) {
            3
        } else {
            s.len().min(4)
        }
    })
    .expect("valid")
}
