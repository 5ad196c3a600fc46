use proptest::prelude::*;

use super::*;
use crate::matroid::catalog;

/// Proper colorings counted directly.
fn count_colorings(g: &EdgeList, colors: u64) -> u64 {
    let n = g.vertices;
    let mut assignment = vec![0u64; n];
    let mut count = 0;
    loop {
        if g.edges.iter().all(|&(u, v)| assignment[u] != assignment[v]) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            assignment[i] += 1;
            if assignment[i] < colors {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// `χ_G = χ_{G-e} - χ_{G/e}`, merging parallel edges after contraction.
fn deletion_contraction(vertices: usize, edges: &[(usize, usize)]) -> IntPolynomial {
    let Some((&(u, v), rest)) = edges.split_first() else {
        return IntPolynomial::monomial(vertices);
    };
    let deleted = deletion_contraction(vertices, rest);
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x > v { x - 1 } else { x }
    };
    let mut contracted: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in rest {
        let (a, b) = (relabel(a), relabel(b));
        let e = (a.min(b), a.max(b));
        if a != b && !contracted.contains(&e) {
            contracted.push(e);
        }
    }
    &deleted - &deletion_contraction(vertices - 1, &contracted)
}

fn graph(vertices: usize, edges: &[(usize, usize)]) -> EdgeList {
    EdgeList { vertices, edges: edges.to_vec() }
}

#[test]
fn sequence_predicates() {
    assert!(is_log_concave(&[1, 3, 3, 1]));
    assert!(!is_log_concave(&[1, 1, 3]));
    assert_eq!(log_concavity_violations(&[1, 1, 3, 1]), vec![1]);
    assert!(is_unimodal(&[1, 4, 4, 2]));
    assert!(!is_unimodal(&[2, 1, 2]));
    assert!(is_unimodal(&[5]));
    // log-concave with an internal zero is not unimodal
    assert!(is_log_concave(&[1, 0, 0, 1]) && !is_unimodal(&[1, 0, 0, 1]));
    assert_eq!(convolve(&[1, 2], &[1, 1]), vec![1, 3, 2]);
}

#[test]
fn catalog_sequences_agree_and_are_log_concave() {
    for name in catalog::NAMES {
        let m = catalog::get(name).unwrap();
        let report = certify_matroid(name, &m).unwrap();
        assert!(report.holds(), "{name} {report:?}");
        let mu = &report.sequence("mu").unwrap().values;
        assert_eq!(mu[0], 1);
    }
    let fano = certify_matroid("fano", &catalog::fano()).unwrap();
    assert_eq!(fano.sequence("mu").unwrap().values, vec![1, 6, 8]);
    assert_eq!(fano.sequence("w").unwrap().values, vec![1, 7, 14, 8]);
}

#[test]
fn independent_set_counts() {
    let fano = certify_independent_sets("fano", &catalog::fano()).unwrap();
    assert_eq!(fano.sequence("f").unwrap().values, vec![1, 7, 21, 28]);
    let u23 = certify_independent_sets("u23", &catalog::get("u23").unwrap()).unwrap();
    assert_eq!(u23.sequence("f").unwrap().values, vec![1, 3, 3]);
    for name in catalog::NAMES {
        let m = catalog::get(name).unwrap();
        if m.size() < 10 {
            assert!(certify_independent_sets(name, &m).unwrap().holds(), "{name}");
        }
    }
}

#[test]
fn chromatic_closed_forms() {
    let (k4, report) = chromatic("k4", &graph(4, &catalog::K4_EDGES)).unwrap();
    assert_eq!(k4, IntPolynomial::new(vec![0, -6, 11, -6, 1]));
    assert_eq!(report.sequence("chromatic").unwrap().values, vec![1, 6, 11, 6]);
    let (tree, _) = chromatic("path", &graph(4, &[(0, 1), (1, 2), (2, 3)])).unwrap();
    assert_eq!(tree, IntPolynomial::new(vec![0, -1, 3, -3, 1]));
    let (point, _) = chromatic("point", &graph(1, &[])).unwrap();
    assert_eq!(point, IntPolynomial::monomial(1));
    assert!(matches!(chromatic("loop", &graph(2, &[(0, 1), (1, 1)])), Err(Error::LoopEdge(1))));
    // two components: an edge and an isolated vertex
    let (split, _) = chromatic("split", &graph(3, &[(0, 1)])).unwrap();
    assert_eq!(split, IntPolynomial::new(vec![0, 0, -1, 1]));
}

#[test]
fn edge_list_input() {
    let g = EdgeList::parse("# triangle\nvertices 3\n0 1\n1 2\n0 2\n").unwrap();
    let (p, report) = chromatic("triangle", &g).unwrap();
    assert_eq!(p, IntPolynomial::new(vec![0, 2, -3, 1]));
    assert!(report.holds());
}

fn arb_graph() -> impl Strategy<Value = EdgeList> {
    (1usize..=6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| EdgeList {
            vertices: n,
            edges: pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e).collect(),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chromatic_matches_oracles(g in arb_graph()) {
        let (p, report) = chromatic("g", &g).unwrap();
        prop_assert_eq!(&p, &deletion_contraction(g.vertices, &g.edges));
        for colors in 1..=4u64 {
            prop_assert_eq!(p.eval(colors as i64), count_colorings(&g, colors) as i64);
        }
        prop_assert!(report.holds());
    }
}
