use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Fraction-free determinant (Bareiss).
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank of a small integer matrix by fraction-free elimination in `i128`,
/// dividing each row by its content to keep entries small.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c] == 0 {
                continue;
            }
            let f = row[c];
            let mut g = 0i128;
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = *x * pivot[c] - f * y;
                g = g.gcd(x);
            }
            if g > 1 {
                for x in row.iter_mut() {
                    *x /= g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn sub_scaled(target: &mut [BigInt], source: &[BigInt], factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= factor * s;
        }
    }
}

/// A ℤ-basis of the lattice spanned by the rows, in row echelon form
/// (Euclidean row reduction column by column).
pub fn lattice_basis(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..cols {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(p) = pivot else {
                break;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let mut clean = true;
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let f = row[c].div_floor(&pivot_row[c]);
                sub_scaled(row, pivot_row, &f);
                if !row[c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Nonzero invariant factors of an integer matrix, as positive integers in
/// divisibility order.
pub fn smith_invariants(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        loop {
            let smallest = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
            let Some((pi, pj)) = smallest else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                let pivot_row = a[t].clone();
                sub_scaled(&mut a[i], &pivot_row, &f);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let v = &row[t] * &f;
                    row[j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&row) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
