//! Small exact linear algebra over rationals, row-major `Vec<Vec<Rational>>`.
//!
//! Dimensions here are tiny (the ambient dimension of the polytopes), so
//! plain fraction arithmetic beats anything clever.

use num::{BigInt, Integer, One, Zero};

use crate::arith::Rational;

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Rational::one() / m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let sub = &f * &m[col][j];
                    m[r][j] = &m[r][j] - sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[row.len() - 1].clone()).collect())
}

/// Row-reduces in place; returns pivot column indices.
fn row_reduce(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the row span.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of `{x : row · x = 0 for every row}` in dimension `dim`.
pub fn null_space(rows: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..dim {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rational::zero(); dim];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `h x = b` for a full-column-rank (possibly tall) matrix given by
/// columns; `None` when the system is inconsistent.
pub fn solve_columns(columns: &[Vec<BigInt>], b: &[Rational]) -> Option<Vec<Rational>> {
    let d = b.len();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == d));
    if k == 0 {
        return b.iter().all(Zero::is_zero).then(Vec::new);
    }
    // Row-reduce the augmented [columns | b] system.
    let mut m: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational> = columns
                .iter()
                .map(|c| Rational::from_integer(c[i].clone()))
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.contains(&k) {
        return None; // pivot in the augmented column: inconsistent
    }
    if pivots.len() != k {
        return None; // columns not independent; callers guarantee this
    }
    let mut x = vec![Rational::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][k].clone();
    }
    Some(x)
}

/// Exact determinant of a square integer matrix given by columns.
pub fn det_int(columns: &[Vec<BigInt>]) -> BigInt {
    let n = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    if n == 0 {
        return BigInt::one();
    }
    // Bareiss fraction-free elimination.
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Adjugate of a square integer matrix (columns in, columns out), so that
/// `m * adj(m) = det(m) * I`.
pub fn adjugate_int(columns: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = columns.len();
    let det = det_int(columns);
    assert!(!det.is_zero(), "adjugate of a singular matrix");
    // adj = det * m^-1, computed by solving m x = det * e_j exactly.
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::from_integer(columns[j][i].clone()))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut rhs = vec![Rational::zero(); n];
        rhs[j] = Rational::from_integer(det.clone());
        let x = solve_square(&rows, &rhs).expect("matrix is invertible");
        out.push(
            x.into_iter()
                .map(|v| {
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect(),
        );
    }
    out
}

/// Clears denominators and divides by the content, keeping direction.
/// Returns the zero vector unchanged.
pub fn primitive_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    primitive_int_vector(&ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive_int_vector(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Dot product of a rational row with a rational vector.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product of two integer vectors.
pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solve_2x2() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(3), rat(1)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn solve_singular_is_none() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(solve_square(&a, &[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn null_space_of_plane_normal() {
        let basis = null_space(&[vec![rat(1), rat(1), rat(1)]], 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(dot(&[rat(1), rat(1), rat(1)], v).is_zero());
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_int(&[bi(&[1, 0]), bi(&[1, 2])]), BigInt::from(2));
        assert_eq!(det_int(&[bi(&[1, 0]), bi(&[2, 0])]), BigInt::zero());
        assert_eq!(
            det_int(&[bi(&[2, 3, 1]), bi(&[0, 1, 4]), bi(&[5, 0, 2])]),
            BigInt::from(59)
        );
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let cols = [bi(&[2, 3, 1]), bi(&[0, 1, 4]), bi(&[5, 0, 2])];
        let adj = adjugate_int(&cols);
        let det = det_int(&cols);
        // (m * adj)_{ij} = det * delta_{ij}
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = BigInt::zero();
                for k in 0..3 {
                    acc += &cols[k][i] * &adj[j][k];
                }
                let expect = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(
            primitive_vector(&[rat_frac(1, 2), rat_frac(-3, 4)]),
            bi(&[2, -3])
        );
        assert_eq!(primitive_int_vector(&bi(&[4, -6])), bi(&[2, -3]));
        assert_eq!(primitive_int_vector(&bi(&[0, 0])), bi(&[0, 0]));
    }
}
