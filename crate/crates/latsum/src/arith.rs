//! Exact scalar and truncated-series kernel.
//!
//! Everything downstream works over arbitrary-precision rationals.  This
//! module provides integer k-th root bounds (by exact bisection, never
//! floating point) and a one-variable truncated Laurent series used when
//! specializing generating functions at the all-ones point.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Rounding mode for [`kth_root_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMode {
    Floor,
    Ceil,
}

/// Integer bound on the k-th root of a non-negative rational.
///
/// `Floor` returns the largest integer `r` with `r^k <= q`; `Ceil` returns
/// the smallest integer `r` with `r^k >= q`.  All comparisons are exact
/// integer comparisons of `r^k * den(q)` against `num(q)`.
pub fn kth_root_bound(q: &Rational, k: u32, mode: RootMode) -> BigInt {
    assert!(k >= 1, "root index must be positive");
    assert!(!q.is_negative(), "radicand must be non-negative");

    let num = q.numer();
    let den = q.denom();
    let le_q = |r: &BigInt| r.pow(k) * den <= *num;

    // Bisection on [lo, hi) with lo^k <= q < hi^k.
    let mut lo = BigInt::zero();
    let mut hi = q.ceil().to_integer() + 1;
    while &lo + 1 < hi {
        let mid = (&lo + &hi) / 2;
        if le_q(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    match mode {
        RootMode::Floor => lo,
        RootMode::Ceil => {
            if &Rational::from_integer(lo.pow(k)) == q {
                lo
            } else {
                lo + 1
            }
        }
    }
}

/// Truncated Laurent series in one formal variable `t`.
///
/// Coefficients are stored densely from `lowest` upward.  `order` is the
/// truncation order: coefficients above it are unknown.  A series built
/// from an exact Laurent polynomial carries `order = None`, meaning every
/// unstored coefficient is genuinely zero.  Arithmetic propagates the
/// reliable order, so the caller decides how much precision to carry (the
/// total pole order of the term being specialized, in practice).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    lowest: i64,
    coeffs: Vec<Rational>,
    order: Option<i64>,
}

impl LaurentSeries {
    /// Builds a series from the coefficient of `t^lowest` upward.
    pub fn new(lowest: i64, coeffs: Vec<Rational>, order: Option<i64>) -> Self {
        let mut s = LaurentSeries {
            lowest,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    /// The zero series (exact).
    pub fn zero() -> Self {
        LaurentSeries {
            lowest: 0,
            coeffs: Vec::new(),
            order: None,
        }
    }

    /// An exact constant.
    pub fn constant(c: Rational) -> Self {
        LaurentSeries::new(0, vec![c], None)
    }

    /// The exact monomial `t^exponent`.
    pub fn monomial(exponent: i64) -> Self {
        LaurentSeries::new(exponent, vec![Rational::one()], None)
    }

    /// The truncated exponential `sum_{j=0}^{order} c^j/j! t^j`.
    pub fn exp_series(c: &Rational, order: u32) -> Self {
        let mut coeffs = Vec::with_capacity(order as usize + 1);
        let mut term = Rational::one();
        coeffs.push(term.clone());
        for j in 1..=order {
            term = term * c / rat(i64::from(j));
            coeffs.push(term.clone());
        }
        LaurentSeries {
            lowest: 0,
            coeffs,
            order: Some(i64::from(order)),
        }
    }

    fn normalize(&mut self) {
        if let Some(ord) = self.order {
            // Stored coefficients beyond the reliable order are meaningless.
            while self.lowest + self.coeffs.len() as i64 - 1 > ord {
                self.coeffs.pop();
            }
        }
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.lowest += 1;
            } else {
                break;
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.lowest = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first stored (nonzero) coefficient.
    pub fn lowest_exponent(&self) -> i64 {
        self.lowest
    }

    /// Truncation order; `None` for an exact Laurent polynomial.
    pub fn truncation_order(&self) -> Option<i64> {
        self.order
    }

    /// Coefficient of `t^exponent` (zero when unstored).
    pub fn coeff(&self, exponent: i64) -> Rational {
        if exponent < self.lowest {
            return Rational::zero();
        }
        let idx = (exponent - self.lowest) as usize;
        self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sum of two series; reliable through the smaller truncation order.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            let mut r = other.clone();
            r.order = min_order(self.order, other.order);
            r.normalize();
            return r;
        }
        if other.is_zero() {
            let mut r = self.clone();
            r.order = min_order(self.order, other.order);
            r.normalize();
            return r;
        }
        let lowest = self.lowest.min(other.lowest);
        let order = min_order(self.order, other.order);
        let top = {
            let a = self.lowest + self.coeffs.len() as i64 - 1;
            let b = other.lowest + other.coeffs.len() as i64 - 1;
            let t = a.max(b);
            match order {
                Some(o) => t.min(o),
                None => t,
            }
        };
        let mut coeffs = Vec::with_capacity((top - lowest + 1).max(0) as usize);
        for e in lowest..=top {
            coeffs.push(self.coeff(e) + other.coeff(e));
        }
        LaurentSeries::new(lowest, coeffs, order)
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            let mut z = LaurentSeries::zero();
            z.order = self.order;
            return z;
        }
        LaurentSeries {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// Cauchy product, truncated to the minimum common reliable order.
    ///
    /// The coefficient of `t^e` in the product is exact as long as every
    /// contributing coefficient of both factors is stored, which holds for
    /// `e <= min(order(a) + lowest(b), order(b) + lowest(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            let mut z = LaurentSeries::zero();
            z.order = match (self.order, other.order) {
                (None, None) => None,
                _ => min_order(
                    self.order.map(|o| o + other.lowest),
                    other.order.map(|o| o + self.lowest),
                ),
            };
            return z;
        }
        let lowest = self.lowest + other.lowest;
        let order = min_order(
            self.order.map(|o| o + other.lowest),
            other.order.map(|o| o + self.lowest),
        );
        let full_top = self.lowest
            + self.coeffs.len() as i64
            + other.lowest
            + other.coeffs.len() as i64
            - 2;
        let top = match order {
            Some(o) => full_top.min(o),
            None => full_top,
        };
        let len = (top - lowest + 1).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = i + j;
                if e >= len {
                    break;
                }
                coeffs[e] += a * b;
            }
        }
        LaurentSeries::new(lowest, coeffs, order)
    }

    /// Multiplicative inverse through the requested truncation order.
    ///
    /// The lowest exponent of the result is the negation of the input's.
    /// Fails with [`Error::ZeroSeries`] when all stored coefficients vanish.
    pub fn invert(&self, order: i64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        debug_assert!(order >= 0, "series must be carried through t^0");
        let m = self.lowest;
        let lead = self.coeffs[0].clone();
        let lead_inv = Rational::one() / lead;
        // Unit part p = t^{-m} * self: p_0 = coeffs[0] != 0.  Standard
        // recurrence h_n = -(1/p_0) * sum_{i=1..n} p_i h_{n-i}.
        let n_terms = (order + m + 1).max(0) as usize;
        let mut inv = Vec::with_capacity(n_terms);
        for n in 0..n_terms {
            if n == 0 {
                inv.push(lead_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for i in 1..=n {
                if let Some(p_i) = self.coeffs.get(i) {
                    if !p_i.is_zero() {
                        acc += p_i * &inv[n - i];
                    }
                }
            }
            inv.push(-(&lead_inv * acc));
        }
        // The recurrence coefficient h_n is exact when the unit part is
        // reliable through t^n, i.e. through t^{order} of the result when
        // self is stored through t^{order + 2m}.
        let result_order = match self.order {
            None => Some(order),
            Some(o) => Some(order.min(o - 2 * m)),
        };
        Ok(LaurentSeries::new(-m, inv, result_order))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = LaurentSeries::constant(Rational::one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lowest + i as i64;
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{e}")?,
            }
        }
        Ok(())
    }
}
