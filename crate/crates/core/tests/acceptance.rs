//! Acceptance checks, one test per criterion. Each prints a single line
//! with its verdict, elapsed time and limit; all comparisons are exact.

use std::io::Write;
use std::time::{Duration, Instant};

use matroid_hodge::chow::ChowRing;
use matroid_hodge::concavity::{certify_independent_sets, certify_matroid, chromatic, is_log_concave};
use matroid_hodge::fan::minkowski::{is_balanced, minkowski_weights};
use matroid_hodge::fan::pl::{default_submodular, submodular_to_class};
use matroid_hodge::fan::{build_fan, OrderFilter, RayLabel};
use matroid_hodge::flips::{alpha_relation, chain_filters, ring_with_degree, ChainOrder, FlipChain};
use matroid_hodge::hodge::{certify, product_hr_oracle, product_matrix};
use matroid_hodge::linalg::{determinant, Q};
use matroid_hodge::matroid::{catalog, EdgeList};
use matroid_hodge::{IntPolynomial, Matroid};
use num_traits::{One, Signed, Zero};

fn criterion(id: u32, title: &str, limit_secs: u64, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let (verdict, detail) = match &result {
        Ok(d) if elapsed <= limit => ("PASS", d.clone()),
        Ok(d) => ("FAIL", format!("{d}; over the time limit")),
        Err(e) => ("FAIL", e.clone()),
    };
    // written to the raw handle so the line survives output capture
    writeln!(
        std::io::stderr(),
        "criterion {id:>2} {verdict} [{title}] exact, {:.2}s of {limit_secs}s: {detail}",
        elapsed.as_secs_f64()
    )
    .unwrap();
    assert_eq!(verdict, "PASS", "criterion {id}: {detail}");
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog_all() -> Vec<(&'static str, Matroid)> {
    catalog::NAMES.iter().map(|&n| (n, catalog::get(n).unwrap())).collect()
}

/// `Σ_S (-1)^{|S|} λ^{r - rk S}`, straight from the definition.
fn brute_char_poly(m: &Matroid) -> IntPolynomial {
    let r = m.rank();
    let mut c = vec![0i64; r + 1];
    for s in m.ground().subsets() {
        let sign = if s.len() % 2 == 0 { 1 } else { -1 };
        c[r - m.rank_of(s)] += sign;
    }
    IntPolynomial::new(c)
}

/// `|coefficients|` of `p / (λ - 1)` by synthetic division, leading first.
fn brute_mu(p: &IntPolynomial) -> Vec<u64> {
    let c = p.coefficients();
    let mut q = vec![0i64; c.len() - 1];
    let mut carry = 0;
    for k in (1..c.len()).rev() {
        carry = c[k] + carry;
        q[k - 1] = carry;
    }
    assert_eq!(c[0] + carry, 0, "nonzero remainder");
    q.iter().rev().map(|x| x.unsigned_abs()).collect()
}

fn brute_independent(m: &Matroid) -> Vec<u64> {
    let mut f = vec![0u64; m.rank() + 1];
    for s in m.ground().subsets() {
        if m.rank_of(s) == s.len() {
            f[s.len()] += 1;
        }
    }
    f
}

/// Eulerian numbers `A(n, k)` by `A(n,k) = (k+1)A(n-1,k) + (n-k)A(n-1,k-1)`.
fn eulerian(n: usize) -> Vec<usize> {
    let mut row = vec![1usize];
    for m in 2..=n {
        row = (0..m)
            .map(|k| {
                let a = if k < row.len() { (k + 1) * row[k] } else { 0 };
                let b = if k >= 1 { (m - k) * row[k - 1] } else { 0 };
                a + b
            })
            .collect();
    }
    row
}

/// Determinant sign of an integer matrix by Bareiss elimination in `i128`.
fn bareiss_sign(mut a: Vec<Vec<i128>>) -> i32 {
    let n = a.len();
    let mut prev = 1i128;
    let mut sign = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1].signum() as i32
}

fn count_colorings(vertices: usize, edges: &[(usize, usize)], colors: u64) -> i64 {
    (0..colors.pow(vertices as u32))
        .filter(|&code| {
            let color = |v: usize| (code / colors.pow(v as u32)) % colors;
            edges.iter().all(|&(u, v)| color(u) != color(v))
        })
        .count() as i64
}

fn middle_filter(m: &Matroid) -> OrderFilter {
    let chain = chain_filters(m, ChainOrder::HighRankFirst);
    chain[chain.len() / 2].clone()
}

#[test]
fn c01_characteristic_polynomials() {
    criterion(1, "characteristic polynomials", 5, || {
        for (name, m) in catalog_all() {
            let oracle = brute_char_poly(&m);
            check(m.char_poly_subset_sum() == oracle, || format!("{name}: subset sum disagrees"))?;
            check(m.char_poly_mobius() == oracle, || format!("{name}: Möbius disagrees"))?;
        }
        let pinned = [
            ("fano", vec![-8, 14, -7, 1]),
            ("k4", vec![-6, 11, -6, 1]),
            ("u34", vec![-3, 6, -4, 1]),
        ];
        for (name, coeffs) in pinned {
            let m = catalog::get(name).unwrap();
            check(brute_char_poly(&m).coefficients() == coeffs.as_slice(), || format!("{name}: oracle"))?;
            check(m.char_poly().coefficients() == coeffs.as_slice(), || format!("{name}: {}", m.char_poly()))?;
        }
        Ok(format!("{} matroids, two routes and a brute-force oracle", catalog::NAMES.len()))
    });
}

#[test]
fn c02_three_route_mu() {
    criterion(2, "three-route mu agreement", 60, || {
        let mut total = 0;
        for (name, m) in catalog_all() {
            let report = certify_matroid(name, &m).map_err(|e| format!("{name}: {e}"))?;
            let mu = &report.sequence("mu").unwrap().values;
            check(*mu == brute_mu(&brute_char_poly(&m)), || format!("{name}: mu {mu:?} vs oracle"))?;
            total += mu.len();
        }
        Ok(format!("{total} values, each equal by reduced char poly, |D_k| and deg(α^(r-k)β^k)"))
    });
}

#[test]
fn c03_poincare_duality() {
    criterion(3, "Poincaré duality over Q and Z", 300, || {
        let mut rings = 0;
        for (name, m) in catalog_all() {
            for p in [OrderFilter::full(&m), middle_filter(&m), OrderFilter::empty()] {
                let label = p.descriptor(&m);
                build_fan(&m, &p, true).map_err(|e| format!("{name} {label}: {e}"))?;
                let ring = ring_with_degree(&m, &p).map_err(|e| format!("{name}: {e}"))?;
                let r = ring.top();
                for q in 0..=r {
                    check(ring.dim(q) == ring.dim(r - q), || format!("{name} {label} q={q}: dims"))?;
                    let g = ring.pairing_matrix(q).map_err(|e| e.to_string())?;
                    check(!determinant(&g).is_zero(), || format!("{name} {label} q={q}: degenerate"))?;
                    let z = ring.integral_pairing_determinant(q).map_err(|e| e.to_string())?;
                    check(z.abs().is_one(), || format!("{name} {label} q={q}: integral det {z}"))?;
                    check(ring.is_torsion_free(q), || format!("{name} {label} q={q}: torsion"))?;
                }
                rings += 1;
            }
        }
        Ok(format!("{rings} rings (full, a middle chain filter and empty per matroid)"))
    });
}

#[test]
fn c04_boolean_hilbert_functions() {
    criterion(4, "Boolean Hilbert functions", 10, || {
        for (n, expected) in [(3, vec![1, 4, 1]), (4, vec![1, 11, 11, 1])] {
            check(eulerian(n) == expected, || format!("Eulerian oracle for n={n}"))?;
            let ring = ChowRing::of_matroid(&Matroid::boolean(n).unwrap()).map_err(|e| e.to_string())?;
            let h = ring.hilbert_function();
            check(h == expected, || format!("B{n}: {h:?}"))?;
        }
        Ok("B3 (1,4,1), B4 (1,11,11,1), both equal to Eulerian numbers".into())
    });
}

#[test]
fn c05_hodge_riemann_flagship() {
    criterion(5, "hard Lefschetz and Hodge-Riemann", 600, || {
        let mut levels = 0;
        for name in ["u24", "u34", "boolean4", "k4", "fano", "nonfano", "vamos"] {
            let m = catalog::get(name).unwrap();
            let ring = ChowRing::of_matroid(&m).map_err(|e| e.to_string())?;
            let ell = submodular_to_class(&m, default_submodular(m.size())).map_err(|e| e.to_string())?;
            let report = certify(&ring, &ell, name, "default", false).map_err(|e| format!("{name}: {e}"))?;
            check(report.ample, || format!("{name}: class not ample"))?;
            for l in &report.levels {
                check(l.hl && l.hr, || format!("{name} q={}: hl {} hr {}", l.q, l.hl, l.hr))?;
                check(l.signature == l.expected_signature, || format!("{name} q={}: signature", l.q))?;
                check(l.primitive_positive, || format!("{name} q={}: primitive part not definite", l.q))?;
            }
            levels += report.levels.len();
        }
        Ok(format!("7 matroids, {levels} levels, signatures and primitive definiteness agree"))
    });
}

#[test]
fn c06_minkowski_weights() {
    criterion(6, "Minkowski weights", 60, || {
        for (name, m) in catalog_all() {
            let ring = ChowRing::of_matroid(&m).map_err(|e| e.to_string())?;
            let r = ring.top();
            for k in 0..=r {
                let mw = minkowski_weights(ring.fan(), k);
                check(mw.len() == ring.dim(k), || format!("{name} k={k}: {} vs {}", mw.len(), ring.dim(k)))?;
                for w in &mw {
                    check(is_balanced(ring.fan(), k, w), || format!("{name} k={k}: unbalanced"))?;
                }
            }
            let top = minkowski_weights(ring.fan(), r);
            check(top.len() == 1, || format!("{name}: dim MW_r = {}", top.len()))?;
            check(top[0].iter().all(|x| *x == top[0][0] && !x.is_zero()), || format!("{name}: not constant"))?;
        }
        Ok("dim MW_k = dim A^k for every k, MW_r spanned by a constant weight".into())
    });
}

#[test]
fn c07_decomposition_theorem() {
    criterion(7, "decomposition along flip chains", 300, || {
        let mut steps = 0;
        for name in ["u24", "fano"] {
            let m = catalog::get(name).unwrap();
            let a = FlipChain::new(&m, ChainOrder::HighRankFirst).map_err(|e| e.to_string())?;
            let b = FlipChain::new(&m, ChainOrder::HighRankLast).map_err(|e| e.to_string())?;
            check(a.centers() != b.centers(), || format!("{name}: chains coincide"))?;
            for chain in [&a, &b] {
                for s in chain.report() {
                    check(s.holds, || format!("{name}: step at {} fails: {:?}", s.center, s.degrees))?;
                    check(s.degrees.len() == m.rank(), || format!("{name}: missing degrees"))?;
                    steps += 1;
                }
            }
            let r = m.rank() - 1;
            let top = matroid_hodge::chow::ChowElement::basis(r, 0);
            let mut shared = 0;
            for ra in a.rings() {
                for rb in b.rings() {
                    if ra.fan().filter() == rb.fan().filter() {
                        let (da, db) = (ra.degree(&top).unwrap(), rb.degree(&top).unwrap());
                        check(da == db, || format!("{name}: degree {da} vs {db}"))?;
                        shared += 1;
                    }
                }
            }
            check(shared >= 2, || format!("{name}: only {shared} shared filters"))?;
            // x_I for an independent r-set has degree 1 in A(M, ∅)
            let empty = &a.rings()[0];
            let labels: Vec<RayLabel> = (0..r).map(RayLabel::Element).collect();
            check(empty.degree(&empty.monomial(&labels)).unwrap() == Q::one(), || format!("{name}: deg x_I"))?;
        }
        Ok(format!("{steps} flips in four chains, degree maps agree across chains"))
    });
}

/// `(Π_{i∈I} x_i) x_F = 0` for `|I| ≥ rk F` and `Π_{i∈I} x_i = 0` for
/// `|I| = r + 1`; returns how many instances had all rays forming a cone.
fn open_inclusion(ring: &ChowRing) -> Result<usize, String> {
    let m = ring.matroid();
    let fan = ring.fan();
    let r = m.rank() - 1;
    let mut nontrivial = 0;
    let mut test = |labels: Vec<RayLabel>| -> Result<(), String> {
        let rays: Option<Vec<usize>> = labels.iter().map(|&l| fan.ray(l)).collect();
        if let Some(rays) = rays {
            if fan.cone_id(&rays).is_some() {
                nontrivial += 1;
            }
        }
        check(ring.monomial(&labels).is_zero(), || format!("{labels:?} is not zero"))
    };
    for &f in ring.fan().filter().flats() {
        for i in f.subsets().filter(|s| s.len() == m.rank_of(f)) {
            let mut labels: Vec<RayLabel> = i.iter().map(RayLabel::Element).collect();
            labels.push(RayLabel::Flat(f));
            test(labels)?;
        }
    }
    for i in m.ground().subsets().filter(|s| s.len() == r + 1) {
        test(i.iter().map(RayLabel::Element).collect())?;
    }
    Ok(nontrivial)
}

#[test]
fn c08_ring_identities() {
    criterion(8, "ring identities", 120, || {
        let mut flags = 0;
        let mut vanishing = 0;
        for (name, m) in catalog_all() {
            let full = ChowRing::of_matroid(&m).map_err(|e| e.to_string())?;
            let r = full.top();
            let report = full.fundamental_class_checks(r).map_err(|e| format!("{name}: {e}"))?;
            check(report.initial_flags > 0 || r == 0, || format!("{name}: no initial flags"))?;
            check(report.other_flags > 0 || r <= 1, || format!("{name}: second branch untested"))?;
            flags += report.initial_flags + report.other_flags;
            for k in 1..=r {
                check(full.beta_power_identity(k), || format!("{name}: β^{k}"))?;
            }
            for z in m.lattice().proper_flats() {
                for &c in m.lattice().covers(z) {
                    let cover = (c != m.ground()).then_some(c);
                    let ok = alpha_relation(&full, z, cover).map_err(|e| e.to_string())?;
                    check(ok, || format!("{name}: α relation at {z} < {c}"))?;
                }
            }
            let chain = FlipChain::new(&m, ChainOrder::HighRankFirst).map_err(|e| e.to_string())?;
            for step in chain.steps() {
                for i in step.center().iter() {
                    check(step.minimal_flat_relation(i), || format!("{name}: minimal flat {}", step.center()))?;
                }
            }
            for p in [OrderFilter::empty(), middle_filter(&m), OrderFilter::full(&m)] {
                for reduced in [true, false] {
                    let ring = ChowRing::new(build_fan(&m, &p, reduced).map_err(|e| e.to_string())?);
                    vanishing += open_inclusion(&ring).map_err(|e| format!("{name}: {e}"))?;
                }
            }
        }
        check(vanishing > 0, || "open inclusion checks were all vacuous".into())?;
        Ok(format!("{flags} flag products, {vanishing} vanishing monomials supported on cones"))
    });
}

#[test]
fn c09_log_concavity() {
    criterion(9, "log-concavity end to end", 60, || {
        for (name, m) in catalog_all() {
            let report = certify_matroid(name, &m).map_err(|e| format!("{name}: {e}"))?;
            check(report.holds(), || format!("{name}: {report:?}"))?;
            let f = certify_independent_sets(name, &m).map_err(|e| format!("{name}: {e}"))?;
            check(f.holds(), || format!("{name}: f not log-concave"))?;
            check(f.sequence("f").unwrap().values == brute_independent(&m), || format!("{name}: f oracle"))?;
        }
        let fano = certify_independent_sets("fano", &catalog::fano()).map_err(|e| e.to_string())?;
        let f = &fano.sequence("f").unwrap().values;
        check(*f == vec![1, 7, 21, 28], || format!("Fano f = {f:?}"))?;
        check(7 * 28 <= 21 * 21, || "7·28 ≤ 21²".into())?;
        let k4 = EdgeList { vertices: 4, edges: catalog::K4_EDGES.to_vec() };
        let (poly, report) = chromatic("k4", &k4).map_err(|e| e.to_string())?;
        for colors in 0..=5u64 {
            let brute = count_colorings(4, &k4.edges, colors);
            check(poly.eval(colors as i64) == brute, || format!("χ_K4({colors})"))?;
        }
        let coeffs = &report.sequence("chromatic").unwrap().values;
        check(is_log_concave(coeffs) && report.holds(), || format!("K4 {coeffs:?}"))?;
        Ok("mu, w, f on the catalog; Fano f = (1,7,21,28); χ_K4 = λ⁴-6λ³+11λ²-6λ".into())
    });
}

#[test]
fn c10_product_oracle() {
    criterion(10, "product Hodge-Riemann oracle", 5, || {
        let mut cases = 0;
        for r2 in 0..=6usize {
            for r1 in 0..=r2 {
                for q in 0..=r1 {
                    check(product_hr_oracle(r1, r2, q), || format!("r1={r1} r2={r2} q={q}"))?;
                    // independent sign check on the same binomial matrix
                    let ints: Vec<Vec<i128>> = product_matrix(r1, r2, q)
                        .iter()
                        .map(|row| row.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
                        .collect();
                    let expected = if (q * (q + 1) / 2) % 2 == 0 { 1 } else { -1 };
                    check(bareiss_sign(ints) == expected, || format!("Bareiss r1={r1} r2={r2} q={q}"))?;
                    check(determinant(&product_matrix(r1, r2, q)).is_positive() == (expected == 1), || {
                        format!("det sign r1={r1} r2={r2} q={q}")
                    })?;
                    cases += 1;
                }
            }
        }
        Ok(format!("{cases} cases with r1 ≤ r2 ≤ 6, q ≤ r1"))
    });
}
