//! Bounds on the maximum of a non-negative polynomial over the lattice
//! points of a polytope, the FPTAS choice of the summation index, and
//! feasible-point recovery by iterated bisection.
//!
//! The k-th power sum `S_k = sum f^k(alpha)` sandwiches the maximum:
//! `(S_k / N)^{1/k} <= f* <= S_k^{1/k}`.  Rounding those roots outward
//! gives the integer bounds reported here, which assumes `f` takes integer
//! values on lattice points (rational coefficients are fine for sums, but
//! the bound contracts are stated against an integer optimum).

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::arith::{kth_root_bound, rat, Rational, RootMode};
use crate::error::{Error, Result};
use crate::evaluate::{evaluate_at_one, generating_function};
use crate::genfun::{apply_polynomial_operator, poly_power, SparsePolynomial};
use crate::polyhedra::Polytope;

/// Output of one bounds computation at summation index `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsRecord {
    pub k: u32,
    /// `N = |P intersect Z^d|`.
    pub count: BigInt,
    /// `S_k = sum f^k(alpha)` over the lattice points.
    pub power_sum: Rational,
    /// `ceil((S_k / N)^{1/k})`.
    pub lower: BigInt,
    /// `floor(S_k^{1/k})`.
    pub upper: BigInt,
}

/// Result of the approximation scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasResult {
    pub epsilon: Rational,
    pub k: u32,
    pub bounds: BoundsRecord,
    pub point: Option<Vec<BigInt>>,
    /// Exact `f(point)` when a point was recovered.
    pub value: Option<Rational>,
}

fn atanh_upper_bound(x: &Rational) -> Rational {
    // 2 atanh(x) = 2 sum x^{2j+1}/(2j+1); the tail after j = J is below
    // x^{2J+3} / ((2J+3)(1 - x^2)).  Callers keep x <= 1/3 so a dozen
    // terms give nine exact digits, plenty for a sound ceiling.
    const J: u32 = 12;
    debug_assert!(!x.is_negative() && *x < rat(1));
    let x2 = x * x;
    let mut power = x.clone();
    let mut acc = Rational::zero();
    for j in 0..=J {
        acc += &power / rat(i64::from(2 * j + 1));
        power *= &x2;
    }
    let tail = &power / (rat(i64::from(2 * J + 3)) * (rat(1) - x2));
    (acc + tail) * rat(2)
}

fn ln2_upper_bound() -> &'static Rational {
    use std::sync::OnceLock;
    static LN2: OnceLock<Rational> = OnceLock::new();
    LN2.get_or_init(|| atanh_upper_bound(&BigRational::new(BigInt::one(), BigInt::from(3))))
}

/// A tight rational upper bound on `ln n`, via `n = 2^e m` with
/// `m in [1, 2)` and the atanh series for both pieces.
fn ln_upper_bound(n: &BigInt) -> Rational {
    debug_assert!(n.is_positive());
    if n.is_one() {
        return Rational::zero();
    }
    let e = n.bits() - 1;
    let m = BigRational::new(n.clone(), BigInt::one() << e);
    let x = (&m - rat(1)) / (&m + rat(1));
    Rational::from_integer(BigInt::from(e)) * ln2_upper_bound() + atanh_upper_bound(&x)
}

/// The summation index `max(1, ceil((1 + 1/eps) ln N))`, which guarantees
/// `N^{1/k} <= 1 + eps` and hence `U_k - L_k <= eps f*`.  The logarithm is
/// bounded above by an exact rational, so overshooting can only tighten.
pub fn choose_k(epsilon: &Rational, n: &BigInt) -> u32 {
    assert!(epsilon.is_positive(), "epsilon must be positive");
    assert!(n.is_positive(), "need at least one lattice point");
    if n.is_one() {
        return 1;
    }
    let target = (rat(1) + rat(1) / epsilon) * ln_upper_bound(n);
    let k = target.ceil().to_integer();
    u32::try_from(&k).expect("summation index fits in u32").max(1)
}

/// Count and k-th power sum from one generating-function build.
fn count_and_power_sum(p: &Polytope, fk: &SparsePolynomial) -> Result<(BigInt, Rational)> {
    let g = generating_function(p)?;
    let n = evaluate_at_one(&g);
    assert!(
        n.is_integer() && !n.is_negative(),
        "count evaluated to {n}, expected a non-negative integer"
    );
    let n = n.to_integer();
    if n.is_zero() {
        return Ok((n, Rational::zero()));
    }
    let s = evaluate_at_one(&apply_polynomial_operator(&g, fk));
    Ok((n, s))
}

fn bounds_from_sums(k: u32, count: BigInt, power_sum: Rational) -> Result<BoundsRecord> {
    if power_sum.is_negative() {
        return Err(Error::NegativeObjective);
    }
    let mean = &power_sum / Rational::from_integer(count.clone());
    let lower = kth_root_bound(&mean, k, RootMode::Ceil);
    let upper = kth_root_bound(&power_sum, k, RootMode::Floor);
    Ok(BoundsRecord {
        k,
        count,
        power_sum,
        lower,
        upper,
    })
}

/// Integer bounds `L_k <= f* <= U_k` for the maximum of `f` over the
/// lattice points of `p`.
///
/// `f` must be non-negative on those points; this is a documented
/// precondition, not a checked one (checking is itself an optimization
/// problem).  A negative power sum still surfaces as an error.
pub fn compute_bounds(
    p: &Polytope,
    f: &SparsePolynomial,
    k: u32,
    degree_cap: u64,
) -> Result<BoundsRecord> {
    assert!(k >= 1);
    let fk = poly_power(f, k, degree_cap)?;
    let (n, s) = count_and_power_sum(p, &fk)?;
    if n.is_zero() {
        return Err(Error::EmptyPolytope);
    }
    bounds_from_sums(k, n, s)
}

/// The FPTAS: bounds at `k = choose_k(epsilon, N)` (or a caller override),
/// plus a feasible lattice point within `(1 - epsilon)` of the optimum
/// when `find_point` is set.
pub fn maximize(
    p: &Polytope,
    f: &SparsePolynomial,
    epsilon: &Rational,
    find_point: bool,
    degree_cap: u64,
    k_override: Option<u32>,
) -> Result<FptasResult> {
    assert!(epsilon.is_positive(), "epsilon must be positive");
    let g = generating_function(p)?;
    let n = evaluate_at_one(&g);
    assert!(n.is_integer() && !n.is_negative());
    let n = n.to_integer();
    if n.is_zero() {
        return Err(Error::EmptyPolytope);
    }
    let k = k_override.unwrap_or_else(|| choose_k(epsilon, &n));
    let fk = poly_power(f, k, degree_cap)?;
    let s = evaluate_at_one(&apply_polynomial_operator(&g, &fk));
    let bounds = bounds_from_sums(k, n, s)?;

    let (point, value) = if find_point {
        let x = bisect_with_power(p, &fk)?;
        let v = f.eval_int(&x);
        (Some(x), Some(v))
    } else {
        (None, None)
    };

    Ok(FptasResult {
        epsilon: epsilon.clone(),
        k,
        bounds,
        point,
        value,
    })
}

/// Recovers a lattice point with `f(x) >= (1 - epsilon) f*` by iterated
/// bisection of the bounding box.
///
/// Each step splits the widest box coordinate at its floor midpoint,
/// discards the empty half, and otherwise keeps the half with the larger
/// mean power sum `S_k / N` (ties to the lower half).  The mean of the
/// whole is between the means of the parts, so the kept half always
/// satisfies `max f^k >= S_k(P)/N(P)`; at a single point that gives
/// `f(x) >= f* N^{-1/k} >= f* / (1 + eps) >= (1 - eps) f*`, one shared `k`
/// for the entire recursion.
pub fn bisect_find_point(
    p: &Polytope,
    f: &SparsePolynomial,
    epsilon: &Rational,
    degree_cap: u64,
) -> Result<Vec<BigInt>> {
    assert!(epsilon.is_positive(), "epsilon must be positive");
    let g = generating_function(p)?;
    let n = evaluate_at_one(&g);
    assert!(n.is_integer() && !n.is_negative());
    let n = n.to_integer();
    if n.is_zero() {
        return Err(Error::EmptyPolytope);
    }
    let k = choose_k(epsilon, &n);
    let fk = poly_power(f, k, degree_cap)?;
    bisect_with_power(p, &fk)
}

fn bisect_with_power(p: &Polytope, fk: &SparsePolynomial) -> Result<Vec<BigInt>> {
    let mut current = p.clone();
    loop {
        let bbox = current.bounding_box()?;
        debug_assert!(!bbox.is_empty(), "bisection keeps nonempty halves");
        if bbox.lo == bbox.hi {
            return Ok(bbox.lo);
        }
        let widest = {
            let mut best = 0usize;
            let mut best_width = &bbox.hi[0] - &bbox.lo[0];
            for i in 1..bbox.lo.len() {
                let w = &bbox.hi[i] - &bbox.lo[i];
                if w > best_width {
                    best = i;
                    best_width = w;
                }
            }
            best
        };
        let midpoint = (&bbox.lo[widest] + &bbox.hi[widest]).div_floor(&BigInt::from(2));
        let (lower_half, upper_half) = current.bisect(widest + 1, &midpoint);
        let (n1, s1) = count_and_power_sum(&lower_half, fk)?;
        let (n2, s2) = count_and_power_sum(&upper_half, fk)?;
        current = if n2.is_zero() {
            lower_half
        } else if n1.is_zero() {
            upper_half
        } else if &s1 * Rational::from_integer(n2) >= &s2 * Rational::from_integer(n1) {
            lower_half
        } else {
            upper_half
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    const CAP: u64 = 4096;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn interval(lo: i64, hi: i64) -> Polytope {
        Polytope::interval(rat(lo), rat(hi))
    }

    fn x_squared() -> SparsePolynomial {
        SparsePolynomial::monomial(1, rat(1), vec![2])
    }

    #[test]
    fn ln_bound_is_tight_and_sound() {
        // ln 5 = 1.6094379...; the bound must sit just above it.
        let b = ln_upper_bound(&BigInt::from(5));
        assert!(b > BigRational::new(BigInt::from(16094379), BigInt::from(10_000_000)));
        assert!(b < BigRational::new(BigInt::from(16094390), BigInt::from(10_000_000)));
        assert!(ln_upper_bound(&BigInt::one()).is_zero());
        let b2 = ln_upper_bound(&BigInt::from(1_000_000_000_000u64));
        assert!(b2 > BigRational::new(BigInt::from(27631021), BigInt::from(1_000_000)));
        assert!(b2 < BigRational::new(BigInt::from(27631023), BigInt::from(1_000_000)));
    }

    #[test]
    fn choose_k_examples() {
        assert_eq!(choose_k(&rat(1), &BigInt::one()), 1);
        assert_eq!(choose_k(&crate::arith::rat_frac(1, 2), &BigInt::from(5)), 5);
        assert_eq!(choose_k(&rat(1), &BigInt::from(5)), 4);
    }

    #[test]
    fn choose_k_guarantees_root_bound() {
        for (num, den, n) in [(1i64, 2i64, 5u64), (1, 4, 100), (1, 1, 1000), (2, 3, 17)] {
            let eps = crate::arith::rat_frac(num, den);
            let k = choose_k(&eps, &BigInt::from(n));
            // N <= (1 + eps)^k exactly.
            let one_plus = rat(1) + &eps;
            let power = BigRational::new(one_plus.numer().pow(k), one_plus.denom().pow(k));
            assert!(rat(n as i64) <= power, "N^(1/k) <= 1+eps violated");
        }
    }

    #[test]
    fn bounds_for_interval_squares() {
        let b = compute_bounds(&interval(0, 4), &x_squared(), 2, 64).unwrap();
        assert_eq!(b.count, BigInt::from(5));
        assert_eq!(b.power_sum, rat(354));
        assert_eq!(b.lower, BigInt::from(9));
        assert_eq!(b.upper, BigInt::from(18));

        let b = compute_bounds(&interval(0, 4), &x_squared(), 1, 64).unwrap();
        assert_eq!(b.lower, BigInt::from(6));
        assert_eq!(b.upper, BigInt::from(30));

        let b = compute_bounds(&interval(0, 4), &x_squared(), 3, 64).unwrap();
        assert_eq!(b.power_sum, rat(4890));
        assert_eq!(b.lower, BigInt::from(10));
        assert_eq!(b.upper, BigInt::from(16));
    }

    #[test]
    fn bounds_on_empty_polytope_fail() {
        let empty = Polytope::parse("1 2\n1 -1\n-1 0").unwrap();
        assert_eq!(
            compute_bounds(&empty, &x_squared(), 2, 64),
            Err(Error::EmptyPolytope)
        );
    }

    #[test]
    fn degree_cap_propagates() {
        assert_eq!(
            compute_bounds(&interval(0, 4), &x_squared(), 40, 64),
            Err(Error::DegreeBudgetExceeded { degree: 80, cap: 64 })
        );
    }

    #[test]
    fn maximize_interval_example() {
        let r = maximize(
            &interval(0, 4),
            &x_squared(),
            &crate::arith::rat_frac(1, 2),
            false,
            256,
            None,
        )
        .unwrap();
        assert_eq!(r.k, 5);
        assert_eq!(r.bounds.power_sum, rat(1_108_650));
        assert_eq!(r.bounds.lower, BigInt::from(12));
        assert_eq!(r.bounds.upper, BigInt::from(16));
        // f* = 16 and the lower bound must reach (1 - eps) f* = 8.
        assert!(r.bounds.lower >= BigInt::from(8));
    }

    #[test]
    fn maximize_single_point() {
        let p = Polytope::parse("1 2\n1 3\n-1 -3").unwrap();
        let r = maximize(&p, &x_squared(), &rat(1), true, 64, None).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.bounds.lower, BigInt::from(9));
        assert_eq!(r.bounds.upper, BigInt::from(9));
        assert_eq!(r.point, Some(bi(&[3])));
        assert_eq!(r.value, Some(rat(9)));
    }

    #[test]
    fn maximize_zero_objective() {
        let zero = SparsePolynomial::zero(1);
        let r = maximize(&interval(0, 4), &zero, &rat(1), true, 64, None).unwrap();
        assert_eq!(r.bounds.lower, BigInt::zero());
        assert_eq!(r.bounds.upper, BigInt::zero());
        let x = r.point.unwrap();
        assert!(interval(0, 4).contains_lattice_point(&x));
        assert_eq!(r.value, Some(rat(0)));
    }

    #[test]
    fn bisect_examples() {
        let x = bisect_find_point(&interval(0, 4), &x_squared(), &crate::arith::rat_frac(1, 2), 256)
            .unwrap();
        assert_eq!(x, bi(&[4]));

        let p = Polytope::parse("1 2\n1 3\n-1 -3").unwrap();
        assert_eq!(
            bisect_find_point(&p, &x_squared(), &rat(1), 64).unwrap(),
            bi(&[3])
        );

        let x = bisect_find_point(
            &interval(-2, 2),
            &x_squared(),
            &crate::arith::rat_frac(1, 4),
            256,
        )
        .unwrap();
        assert!(x == bi(&[-2]) || x == bi(&[2]));
        let value = x_squared().eval_int(&x);
        assert!(value >= rat(3), "guarantee (1-eps) f* = 3");
        // Deterministic output.
        let again = bisect_find_point(
            &interval(-2, 2),
            &x_squared(),
            &crate::arith::rat_frac(1, 4),
            256,
        )
        .unwrap();
        assert_eq!(x, again);
    }

    #[test]
    fn bisect_on_empty_polytope_fails() {
        let empty = Polytope::parse("1 2\n1 -1\n-1 0").unwrap();
        assert_eq!(
            bisect_find_point(&empty, &x_squared(), &rat(1), 64),
            Err(Error::EmptyPolytope)
        );
    }

    #[test]
    fn sandwich_and_monotonicity() {
        let p = interval(0, 4);
        let f = x_squared();
        let brute = oracle::brute_max(&p, &f, CAP).unwrap();
        let fstar = brute.max;
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        for k in 1..=6 {
            let b = compute_bounds(&p, &f, k, 64).unwrap();
            assert!(Rational::from_integer(b.lower.clone()) <= fstar);
            assert!(Rational::from_integer(b.upper.clone()) >= fstar);
            lowers.push(b.lower);
            uppers.push(b.upper);
        }
        assert!(lowers.windows(2).all(|w| w[0] <= w[1]), "L_k nondecreasing");
        assert!(uppers.windows(2).all(|w| w[0] >= w[1]), "U_k nonincreasing");
    }

    #[test]
    fn bounds_reach_the_maximum_eventually() {
        for (p, f) in [
            (interval(0, 3), x_squared()),
            (interval(1, 4), SparsePolynomial::monomial(1, rat(1), vec![1])),
            (
                Polytope::axis_box(&[0, 0], &[1, 2]),
                SparsePolynomial::new(2, vec![(rat(1), vec![1, 0]), (rat(1), vec![0, 1])]),
            ),
        ] {
            let fstar = oracle::brute_max(&p, &f, CAP).unwrap().max;
            let mut attained = false;
            for k in 1..=40 {
                let b = compute_bounds(&p, &f, k, 1 << 20).unwrap();
                if Rational::from_integer(b.lower.clone()) == fstar
                    && Rational::from_integer(b.upper.clone()) == fstar
                {
                    attained = true;
                    break;
                }
            }
            assert!(attained, "bounds must reach f* in finitely many steps");
        }
    }

    #[test]
    fn fptas_guarantee_on_small_cases() {
        let cases = [
            (interval(0, 5), x_squared()),
            (interval(-3, 2), x_squared()),
            (
                Polytope::axis_box(&[0, 0], &[2, 2]),
                SparsePolynomial::new(2, vec![(rat(1), vec![2, 0]), (rat(2), vec![0, 1])]),
            ),
        ];
        for (p, f) in &cases {
            let fstar = oracle::brute_max(p, f, CAP).unwrap().max;
            for (num, den) in [(1i64, 1i64), (1, 2), (1, 4)] {
                let eps = crate::arith::rat_frac(num, den);
                let r = maximize(p, f, &eps, true, 1 << 20, None).unwrap();
                let x = r.point.clone().unwrap();
                assert!(p.contains_lattice_point(&x));
                let value = r.value.clone().unwrap();
                assert_eq!(value, f.eval_int(&x));
                assert!(
                    &value >= &((rat(1) - &eps) * &fstar),
                    "f(x) = {value} below (1-eps) f* with eps = {eps}, f* = {fstar}"
                );
            }
        }
    }
}
