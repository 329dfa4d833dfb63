//! Integer lattice utilities: column echelon form with transform (for
//! kernels and integer linear solves) and LLL basis reduction.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::arith::Rational;

/// Column echelon form over the integers.
///
/// Returns `(h, u, pivots)` where `u` is unimodular, `m * u = h`, `h` is in
/// column echelon form, and `pivots[i] = (row, col)` locates the pivot of
/// echelon column `i`.  Matrices are given and returned as columns.
fn column_echelon(
    m: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<(usize, usize)>) {
    let cols = m.len();
    let rows = if cols == 0 { 0 } else { m[0].len() };
    let mut h: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut e = vec![BigInt::zero(); cols];
            e[j] = BigInt::one();
            e
        })
        .collect();

    let mut pivots = Vec::new();
    let mut next = 0usize;
    for row in 0..rows {
        if next >= cols {
            break;
        }
        loop {
            // Column with the smallest nonzero magnitude in this row.
            let mut best: Option<usize> = None;
            for j in next..cols {
                if h[j][row].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if h[j][row].abs() < h[b][row].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap(next, b);
            u.swap(next, b);
            let mut done = true;
            for j in next + 1..cols {
                if h[j][row].is_zero() {
                    continue;
                }
                let q = h[j][row].div_floor(&h[next][row]);
                if !q.is_zero() {
                    for r in 0..rows {
                        let s = &q * &h[next][r];
                        h[j][r] -= s;
                    }
                    for r in 0..cols {
                        let s = &q * &u[next][r];
                        u[j][r] -= s;
                    }
                }
                if !h[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if next < cols && !h[next][row].is_zero() {
            if h[next][row].is_negative() {
                for r in 0..rows {
                    h[next][r] = -h[next][r].clone();
                }
                for r in 0..cols {
                    u[next][r] = -u[next][r].clone();
                }
            }
            pivots.push((row, next));
            next += 1;
        }
    }
    (h, u, pivots)
}

/// Basis of the integer kernel `{x in Z^c : m x = 0}`, as columns.
///
/// The kernel of an integer matrix is automatically saturated, which is
/// what makes this usable for building lattice bases of rational subspaces.
pub fn integer_kernel(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (h, u, pivots) = column_echelon(m);
    let rank = pivots.len();
    (rank..h.len()).map(|j| u[j].clone()).collect()
}

/// A particular integer solution of `m x = t`, or `None` if none exists.
pub fn solve_integer(m: &[Vec<BigInt>], t: &[BigInt]) -> Option<Vec<BigInt>> {
    let cols = m.len();
    let rows = t.len();
    let (h, u, pivots) = column_echelon(m);
    let mut residual = t.to_vec();
    let mut y = vec![BigInt::zero(); cols];
    for (i, &(row, _)) in pivots.iter().enumerate() {
        let p = &h[i][row];
        let (q, r) = residual[row].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for rr in 0..rows {
                let s = &q * &h[i][rr];
                residual[rr] -= s;
            }
            y[i] = q;
        }
    }
    if residual.iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for r in 0..cols {
            x[r] += yi * &u[i][r];
        }
    }
    Some(x)
}

fn round_to_integer(x: &Rational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL reduction (delta = 3/4) of a linearly independent integer basis,
/// given and returned as columns.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis.to_vec();
    }
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();

    // Gram-Schmidt data over exact rationals, recomputed after each swap.
    // Bases here have at most six vectors, so this is cheap.
    let gso = |b: &[Vec<BigInt>]| -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut norm = vec![Rational::zero(); n];
        for i in 0..n {
            let mut v: Vec<Rational> = b[i]
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect();
            for j in 0..i {
                let num: Rational = b[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| Rational::from_integer(x.clone()) * y)
                    .sum();
                mu[i][j] = num / norm[j].clone();
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &mu[i][j] * sk;
                }
            }
            norm[i] = v.iter().map(|x| x * x).sum();
            assert!(!norm[i].is_zero(), "LLL input basis must be independent");
            star.push(v);
        }
        (mu, norm)
    };

    let (mut mu, mut norm) = gso(&b);
    let threshold = |norm_prev: &Rational, mu_k: &Rational| -> Rational {
        (Rational::new(BigInt::from(3), BigInt::from(4)) - mu_k * mu_k) * norm_prev
    };

    let mut k = 1usize;
    while k < n {
        for j in (0..k).rev() {
            let q = round_to_integer(&mu[k][j]);
            if !q.is_zero() {
                for r in 0..b[k].len() {
                    let s = &q * &b[j][r];
                    b[k][r] -= s;
                }
                let qr = Rational::from_integer(q);
                for l in 0..=j {
                    let s = &qr * &mu[j][l];
                    mu[k][l] = &mu[k][l] - s;
                }
            }
        }
        if norm[k] >= threshold(&norm[k - 1], &mu[k][k - 1]) {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, n2) = gso(&b);
            mu = m2;
            norm = n2;
            k = k.max(2) - 1;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot_int;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_projection() {
        // kernel of [1 0 0; 0 1 0] is spanned by e3
        let m = vec![bi(&[1, 0]), bi(&[0, 1]), bi(&[0, 0])];
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(crate::linalg::primitive_int_vector(&k[0]), bi(&[0, 0, 1]));
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [2 4] over Z is (2,-1), not (4,-2)
        let m = vec![bi(&[2]), bi(&[4])];
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(&v[0] * 2 + &v[1] * 4, BigInt::zero());
        let g = v[0].gcd(&v[1]);
        assert!(g.is_one());
    }

    #[test]
    fn integer_solve_consistent() {
        // 2x + 4y = 6 has integer solutions; = 3 does not.
        let m = vec![bi(&[2]), bi(&[4])];
        let x = solve_integer(&m, &bi(&[6])).unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 4, BigInt::from(6));
        assert!(solve_integer(&m, &bi(&[3])).is_none());
    }

    #[test]
    fn integer_solve_multirow() {
        let m = vec![bi(&[1, 0, 3]), bi(&[0, 2, 1])];
        let t = bi(&[3, 4, 11]);
        let x = solve_integer(&m, &t).unwrap();
        for r in 0..3 {
            assert_eq!(&x[0] * &m[0][r] + &x[1] * &m[1][r], t[r]);
        }
    }

    #[test]
    fn lll_shortens_skewed_basis() {
        let basis = vec![bi(&[1, 0]), bi(&[1_000_001, 1])];
        let red = lll_reduce(&basis);
        // Reduced basis spans the same lattice and has small vectors.
        for v in &red {
            assert!(dot_int(v, v) <= BigInt::from(4));
        }
        // Same lattice: each original vector solves integrally over red.
        for orig in &basis {
            assert!(solve_integer(&red, orig).is_some());
        }
    }
}
