//! Small dense integer and rational linear algebra for root-datum lattices.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Nonzero diagonal entries of the Smith normal form, in divisibility order.
pub fn elementary_divisors(m: &IntMatrix, cols: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                    if a[t][j].abs() < a[t][t].abs() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if clean {
                // divisibility condition on the remaining block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                    }
                    None => break,
                }
            }
        }
        divisors.push(a[t][t].abs() as i64);
        t += 1;
    }
    divisors
}

pub fn determinant(m: &IntMatrix) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .map(|row| row.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
        .collect();
    let mut det = Ratio::from_integer(1i128);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    *det.numer() as i64
}

/// Inverse of an integer matrix with determinant ±1.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.len();
    let det = determinant(m);
    if det.abs() != 1 {
        return None;
    }
    let mut inv = vec![vec![0i64; n]; n];
    for (i, inv_row) in inv.iter_mut().enumerate() {
        for (j, entry) in inv_row.iter_mut().enumerate() {
            // adjugate: inv[i][j] = cofactor(j, i) / det
            let minor: IntMatrix = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let cof = if n == 1 { 1 } else { determinant(&minor) };
            *entry = sign * cof * det;
        }
    }
    Some(inv)
}

/// Solves `Σ_k x_k basis[k] = target` over the rationals, for linearly
/// independent basis vectors. Returns `None` if `target` is not in their span.
pub fn solve_in_basis(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<Ratio<i64>>> {
    let dim = target.len();
    let k = basis.len();
    // augmented dim × (k + 1) system
    let mut a: Vec<Vec<Ratio<i64>>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Ratio<i64>> =
                basis.iter().map(|b| Ratio::from_integer(b[r])).collect();
            row.push(Ratio::from_integer(target[r]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..dim).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let lead = a[row][col];
        for v in a[row].iter_mut() {
            *v /= lead;
        }
        for r in 0..dim {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..=k {
                    let v = a[row][c];
                    a[r][c] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) || pivots.len() < k {
        return None;
    }
    let mut x = vec![Ratio::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][k];
    }
    Some(x)
}

pub fn is_integral(x: &[Ratio<i64>]) -> bool {
    x.iter().all(|v| v.is_integer())
}

pub fn rank(m: &IntMatrix, cols: usize) -> usize {
    elementary_divisors(m, cols).len()
}

pub fn is_nonneg_integral(x: &[Ratio<i64>]) -> bool {
    x.iter().all(|v| v.is_integer() && !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_form_examples() {
        assert_eq!(elementary_divisors(&vec![vec![2]], 1), vec![2]);
        assert_eq!(elementary_divisors(&vec![vec![1, -1]], 2), vec![1]);
        assert_eq!(
            elementary_divisors(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3),
            vec![2, 6, 12]
        );
        // Cartan matrix of A2 has determinant 3
        assert_eq!(elementary_divisors(&vec![vec![2, -1], vec![-1, 2]], 2), vec![1, 3]);
        assert_eq!(elementary_divisors(&vec![vec![0, 0], vec![0, 0]], 2), Vec::<i64>::new());
    }

    #[test]
    fn divisor_product_is_determinant() {
        let m = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        let prod: i64 = elementary_divisors(&m, 3).iter().product();
        assert_eq!(prod, determinant(&m).abs());
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![1, 0], vec![1, -1]];
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![1, 0], vec![1, -1]]);
        let m = vec![vec![2, 1, 0], vec![1, 1, 0], vec![0, 3, 1]];
        let inv = unimodular_inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: i64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(v, i64::from(i == j));
            }
        }
        assert!(unimodular_inverse(&vec![vec![2]]).is_none());
    }

    #[test]
    fn solve_examples() {
        let basis = vec![vec![2, -1], vec![-1, 2]];
        let x = solve_in_basis(&basis, &[1, 1]).unwrap();
        assert_eq!(x, vec![Ratio::from_integer(1), Ratio::from_integer(1)]);
        let x = solve_in_basis(&[vec![2]], &[1]).unwrap();
        assert_eq!(x, vec![Ratio::new(1, 2)]);
        assert!(solve_in_basis(&[vec![1, 0]], &[0, 1]).is_none());
    }
}
