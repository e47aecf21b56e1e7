//! Small dense integer linear algebra: matrix products, unimodular
//! completion of primitive vectors, determinants and Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// For a primitive vector `c`, returns `(u, u_inv)` unimodular with
/// `u * c = e_1`. Returns `None` if `c` is zero or not primitive.
pub fn unimodular_completion(c: &[i64]) -> Option<(IntMatrix, IntMatrix)> {
    let n = c.len();
    if gcd_slice(c) != 1 {
        return None;
    }
    let mut v = c.to_vec();
    let mut u = identity(n);
    let mut u_inv = identity(n);
    // row op: row_j -= q * row_i on u; the inverse gets col_i += q * col_j
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&i| v[i].abs()).unwrap();
        for &j in &nonzero {
            if j == piv {
                continue;
            }
            let q = Integer::div_floor(&v[j], &v[piv]);
            if q == 0 {
                continue;
            }
            v[j] -= q * v[piv];
            for col in 0..n {
                u[j][col] -= q * u[piv][col];
            }
            for row in u_inv.iter_mut() {
                row[piv] += q * row[j];
            }
        }
    }
    let piv = (0..n).find(|&i| v[i] != 0)?;
    if piv != 0 {
        u.swap(0, piv);
        v.swap(0, piv);
        for row in u_inv.iter_mut() {
            row.swap(0, piv);
        }
    }
    if v[0] == -1 {
        for x in u[0].iter_mut() {
            *x = -*x;
        }
        for row in u_inv.iter_mut() {
            row[0] = -row[0];
        }
    }
    debug_assert_eq!(mat_vec(&u, c), {
        let mut e = vec![0; n];
        e[0] = 1;
        e
    });
    Some((u, u_inv))
}

/// Determinant by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    determinant_big(big)
}

pub fn determinant_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Elementary divisors of an integer matrix (the nonzero diagonal of its
/// Smith normal form), in divisibility order.
pub fn elementary_divisors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility condition on the remaining block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(m[t][t].abs());
        t += 1;
    }
    divisors
}

/// Rank over the rationals.
pub fn rank_big(m: &[Vec<BigInt>]) -> usize {
    elementary_divisors(m.to_vec()).len()
}
