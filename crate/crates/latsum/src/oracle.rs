//! Brute-force reference: exhaustive lattice-point enumeration, sums, and
//! maxima.  Deliberately kept trivial; it is the arbiter for everything
//! the generating-function pipeline computes.

use num::BigInt;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::genfun::SparsePolynomial;
use crate::polyhedra::Polytope;

/// Default cap on the number of bounding-box points to scan.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Everything the brute-force maximization reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteReport {
    pub points: Vec<Vec<BigInt>>,
    pub values: Vec<Rational>,
    pub max: Rational,
    pub argmax: Vec<BigInt>,
}

/// All lattice points of the polytope in lexicographic order, by scanning
/// its integer bounding box.
pub fn enumerate_points(p: &Polytope, cap: u64) -> Result<Vec<Vec<BigInt>>> {
    let bbox = match p.bounding_box() {
        Ok(b) => b,
        Err(Error::EmptyPolytope) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    if bbox.is_empty() {
        return Ok(Vec::new());
    }
    if bbox.volume() > BigInt::from(cap) {
        return Err(Error::CapExceeded { cap });
    }
    let d = p.dim();
    let mut out = Vec::new();
    let mut x = bbox.lo.clone();
    loop {
        if p.contains_lattice_point(&x) {
            out.push(x.clone());
        }
        // Odometer with the last coordinate fastest: lexicographic order.
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < bbox.hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = bbox.lo[i].clone();
        }
    }
}

/// Exact `sum h(alpha)` over the lattice points of the polytope.
pub fn brute_sum(p: &Polytope, h: &SparsePolynomial, cap: u64) -> Result<Rational> {
    let mut acc = Rational::from_integer(BigInt::from(0));
    for point in enumerate_points(p, cap)? {
        acc += h.eval_int(&point);
    }
    Ok(acc)
}

/// Exact maximum of `f`, its argmax (lexicographically smallest on ties),
/// and the full value table.
pub fn brute_max(p: &Polytope, f: &SparsePolynomial, cap: u64) -> Result<BruteReport> {
    let points = enumerate_points(p, cap)?;
    if points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let values: Vec<Rational> = points.iter().map(|x| f.eval_int(x)).collect();
    let mut best = 0usize;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    Ok(BruteReport {
        max: values[best].clone(),
        argmax: points[best].clone(),
        points,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn interval_points() {
        let p = Polytope::interval(rat(0), rat(4));
        let pts = enumerate_points(&p, DEFAULT_CAP).unwrap();
        assert_eq!(pts, vec![bi(&[0]), bi(&[1]), bi(&[2]), bi(&[3]), bi(&[4])]);
    }

    #[test]
    fn triangle_has_six_points() {
        let p = Polytope::parse("2 3\n-1 0 0\n0 -1 0\n1 1 2").unwrap();
        assert_eq!(enumerate_points(&p, DEFAULT_CAP).unwrap().len(), 6);
    }

    #[test]
    fn thin_slab_is_empty() {
        let p = Polytope::interval(crate::arith::rat_frac(1, 3), crate::arith::rat_frac(2, 3));
        assert!(enumerate_points(&p, DEFAULT_CAP).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let p = Polytope::interval(rat(0), rat(1000));
        assert_eq!(
            enumerate_points(&p, 100),
            Err(Error::CapExceeded { cap: 100 })
        );
    }

    #[test]
    fn sums_and_maxima() {
        let p = Polytope::interval(rat(0), rat(4));
        let x2 = SparsePolynomial::monomial(1, rat(1), vec![2]);
        assert_eq!(brute_sum(&p, &x2, DEFAULT_CAP).unwrap(), rat(30));
        let report = brute_max(&p, &x2, DEFAULT_CAP).unwrap();
        assert_eq!(report.max, rat(16));
        assert_eq!(report.argmax, bi(&[4]));

        let sym = Polytope::interval(rat(-1), rat(1));
        let x = SparsePolynomial::monomial(1, rat(1), vec![1]);
        assert_eq!(brute_sum(&sym, &x, DEFAULT_CAP).unwrap(), rat(0));
    }

    #[test]
    fn argmax_prefers_lexicographically_smallest() {
        let p = Polytope::interval(rat(-2), rat(2));
        let x2 = SparsePolynomial::monomial(1, rat(1), vec![2]);
        let report = brute_max(&p, &x2, DEFAULT_CAP).unwrap();
        assert_eq!(report.argmax, bi(&[-2]));
    }

    #[test]
    fn empty_max_errors() {
        let p = Polytope::parse("1 2\n1 -1\n-1 0").unwrap();
        let f = SparsePolynomial::monomial(1, rat(1), vec![1]);
        assert_eq!(brute_max(&p, &f, DEFAULT_CAP), Err(Error::EmptyPolytope));
    }
}
