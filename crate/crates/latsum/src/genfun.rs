//! Short rational generating functions and the differential operators that
//! turn them into weighted generating functions.
//!
//! A term is `coefficient * N(z) / prod_j (1 - z^{b_j})^{m_j}` with a
//! Laurent-polynomial numerator `N`.  Denominator vectors are kept
//! sign-normalized (first nonzero entry positive) via the identity
//! `1/(1 - z^{-b}) = -z^b / (1 - z^b)`, so equal factors can be merged and
//! terms with identical denominators combined.  No common-denominator
//! merging across distinct denominators ever happens; evaluation at the
//! all-ones point never needs it.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::arith::{rat, Rational};
use crate::cones::SignedCone;
use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial in `z_1..z_d`.
pub type Exponent = Vec<i64>;

/// Polynomial in `d` variables as a sparse list of monomials, with rational
/// coefficients and non-negative exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    dim: usize,
    terms: Vec<(Rational, Vec<u32>)>,
}

impl SparsePolynomial {
    /// Builds a polynomial, combining like terms and dropping zeros.
    pub fn new(dim: usize, terms: Vec<(Rational, Vec<u32>)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), dim, "exponent vector has wrong dimension");
            let entry = map.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        SparsePolynomial { dim, terms }
    }

    pub fn zero(dim: usize) -> Self {
        SparsePolynomial { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        SparsePolynomial::new(dim, vec![(c, vec![0; dim])])
    }

    /// The monomial `c * x^e`.
    pub fn monomial(dim: usize, c: Rational, e: Vec<u32>) -> Self {
        SparsePolynomial::new(dim, vec![(c, e)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Monomials as `(coefficient, exponents)`, in lexicographic exponent
    /// order.
    pub fn terms(&self) -> &[(Rational, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().map(|&x| u64::from(x)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Parses the polynomial text format: one monomial per line,
    /// `c e_1 ... e_d`, `#` comments allowed.  Each monomial's total degree
    /// must stay within `degree_cap` (exponents count as unary input).
    pub fn parse(text: &str, dim: usize, degree_cap: u64) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "monomial line '{line}' must have {} entries",
                    dim + 1
                )));
            }
            let c: Rational = toks[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational '{}'", toks[0])))?;
            let mut e = Vec::with_capacity(dim);
            for t in &toks[1..] {
                let v: u32 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent '{t}'")))?;
                e.push(v);
            }
            let deg: u64 = e.iter().map(|&x| u64::from(x)).sum();
            if deg > degree_cap {
                return Err(Error::DegreeBudgetExceeded {
                    degree: deg,
                    cap: degree_cap,
                });
            }
            terms.push((c, e));
        }
        Ok(SparsePolynomial::new(dim, terms))
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim);
        let mut acc = Rational::zero();
        for (c, e) in &self.terms {
            let mut m = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    m *= xi;
                }
            }
            acc += m;
        }
        acc
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, x: &[num::BigInt]) -> Rational {
        let xr: Vec<Rational> = x
            .iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect();
        self.eval(&xr)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ca, ea) in &self.terms {
            for (cb, eb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = map.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c, e))
            .collect();
        SparsePolynomial {
            dim: self.dim,
            terms,
        }
    }
}

/// Exact k-th power of a sparse polynomial with like terms combined.
///
/// Fails when `k * deg(f)` would exceed the unary-degree cap.
pub fn poly_power(f: &SparsePolynomial, k: u32, degree_cap: u64) -> Result<SparsePolynomial> {
    assert!(k >= 1, "exponent must be positive");
    let degree = f.total_degree() * u64::from(k);
    if degree > degree_cap {
        return Err(Error::DegreeBudgetExceeded {
            degree,
            cap: degree_cap,
        });
    }
    let mut acc = SparsePolynomial::constant(f.dim, Rational::one());
    let mut base = f.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    Ok(acc)
}

/// One term of a rational generating function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfTerm {
    coefficient: Rational,
    numerator: Vec<(Exponent, Rational)>,
    denominator: Vec<(Exponent, u32)>,
}

impl GfTerm {
    /// Builds a term and normalizes it: denominator vectors get a positive
    /// leading entry (compensated through the numerator), equal vectors
    /// merge, numerator like terms combine.  Returns `None` for the zero
    /// term.
    pub fn new(
        coefficient: Rational,
        numerator: Vec<(Exponent, Rational)>,
        denominator: Vec<(Exponent, u32)>,
    ) -> Option<GfTerm> {
        if coefficient.is_zero() {
            return None;
        }
        let mut numerator = numerator;
        let mut sign_flips = 0u32;
        let mut shift: Option<Exponent> = None;
        let mut dens: BTreeMap<Exponent, u32> = BTreeMap::new();
        for (b, m) in denominator {
            assert!(m >= 1, "denominator multiplicity must be positive");
            assert!(b.iter().any(|&x| x != 0), "denominator vector must be nonzero");
            let flip = b.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
            let b = if flip {
                // 1/(1-z^{-b})^m = (-1)^m z^{m b} / (1-z^b)^m
                let pos: Exponent = b.iter().map(|&x| -x).collect();
                sign_flips += m;
                let sh = shift.get_or_insert_with(|| vec![0; pos.len()]);
                for (s, &p) in sh.iter_mut().zip(&pos) {
                    *s += i64::from(m) * p;
                }
                pos
            } else {
                b
            };
            *dens.entry(b).or_insert(0) += m;
        }
        if let Some(sh) = shift {
            for (e, _) in numerator.iter_mut() {
                for (x, s) in e.iter_mut().zip(&sh) {
                    *x += s;
                }
            }
        }
        let coefficient = if sign_flips % 2 == 1 {
            -coefficient
        } else {
            coefficient
        };
        let numerator = combine_monomials(numerator);
        if numerator.is_empty() {
            return None;
        }
        Some(GfTerm {
            coefficient,
            numerator,
            denominator: dens.into_iter().collect(),
        })
    }

    /// Trusted constructor for operator output whose parts are already
    /// normalized (numerator sorted, denominators sign-normalized).
    fn raw(
        coefficient: Rational,
        numerator: Vec<(Exponent, Rational)>,
        denominator: Vec<(Exponent, u32)>,
    ) -> GfTerm {
        debug_assert!(!numerator.is_empty());
        debug_assert!(numerator.windows(2).all(|w| w[0].0 < w[1].0));
        GfTerm {
            coefficient,
            numerator,
            denominator,
        }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    /// Numerator monomials `(exponent, coefficient)`, lex-sorted.
    pub fn numerator(&self) -> &[(Exponent, Rational)] {
        &self.numerator
    }

    /// Denominator factors `(b, multiplicity)` with distinct normalized `b`.
    pub fn denominator(&self) -> &[(Exponent, u32)] {
        &self.denominator
    }

    /// Total pole order: the sum of denominator multiplicities.
    pub fn pole_order(&self) -> u32 {
        self.denominator.iter().map(|(_, m)| m).sum()
    }

    fn scaled(&self, c: &Rational) -> GfTerm {
        GfTerm {
            coefficient: &self.coefficient * c,
            numerator: self.numerator.clone(),
            denominator: self.denominator.clone(),
        }
    }
}

fn combine_monomials(mut monos: Vec<(Exponent, Rational)>) -> Vec<(Exponent, Rational)> {
    monos.sort_by(|(a, _), (b, _)| a.cmp(b));
    let mut out: Vec<(Exponent, Rational)> = Vec::with_capacity(monos.len());
    for (e, c) in monos {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => out.push((e, c)),
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
    }
    out
}

/// A sum of [`GfTerm`]s sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingFunction {
    dim: usize,
    terms: Vec<GfTerm>,
}

impl GeneratingFunction {
    /// Assembles a generating function in canonical form: terms with
    /// identical denominator lists are combined (coefficients folded into
    /// numerators), ordered by denominator then numerator.
    pub fn new(dim: usize, terms: Vec<GfTerm>) -> Self {
        let mut by_denominator: BTreeMap<Vec<(Exponent, u32)>, Vec<(Exponent, Rational)>> =
            BTreeMap::new();
        for t in terms {
            let bucket = by_denominator.entry(t.denominator).or_default();
            if t.coefficient.is_one() {
                bucket.extend(t.numerator);
            } else {
                bucket.extend(
                    t.numerator
                        .into_iter()
                        .map(|(e, c)| (e, c * &t.coefficient)),
                );
            }
        }
        let terms = by_denominator
            .into_iter()
            .filter_map(|(denominator, monos)| {
                let numerator = combine_monomials(monos);
                (!numerator.is_empty()).then_some(GfTerm {
                    coefficient: Rational::one(),
                    numerator,
                    denominator,
                })
            })
            .collect();
        GeneratingFunction { dim, terms }
    }

    pub fn zero(dim: usize) -> Self {
        GeneratingFunction { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[GfTerm] {
        &self.terms
    }
}

/// Generating-function term of a signed unimodular cone with numerator
/// point `a`: `sign * z^a / prod_j (1 - z^{b_j})`.
pub fn term_from_cone(sc: &SignedCone, a: &[num::BigInt]) -> GfTerm {
    let cone = &sc.cone;
    let dim = cone.dim();
    debug_assert_eq!(a.len(), dim);
    debug_assert!(cone.det().abs().is_one(), "cone must be unimodular");
    let exponent: Exponent = a
        .iter()
        .map(|v| i64::try_from(v).expect("numerator exponent fits in i64"))
        .collect();
    let denominator: Vec<(Exponent, u32)> = cone
        .generators()
        .iter()
        .map(|b| {
            let e: Exponent = b
                .iter()
                .map(|v| i64::try_from(v).expect("generator entry fits in i64"))
                .collect();
            (e, 1)
        })
        .collect();
    GfTerm::new(
        rat(i64::from(sc.sign)),
        vec![(exponent, Rational::one())],
        denominator,
    )
    .expect("cone term is never zero")
}

/// Image of `g` under the Euler operator `z_i d/dz_i` (0-based `coord`).
///
/// The Laurent coefficient of `z^alpha` in the result is `alpha_i` times
/// the input's.  On a term `N / prod (1-z^{b_j})^{m_j}` this produces the
/// term with numerator `z_i dN/dz_i` plus, for every factor that involves
/// `z_i`, a term with the factor's multiplicity raised by one.
pub fn apply_euler_operator(g: &GeneratingFunction, coord: usize) -> GeneratingFunction {
    assert!(coord < g.dim, "coordinate out of range");
    let mut out: Vec<GfTerm> = Vec::new();
    for t in &g.terms {
        let derived: Vec<(Exponent, Rational)> = t
            .numerator
            .iter()
            .filter(|(e, _)| e[coord] != 0)
            .map(|(e, c)| (e.clone(), c * rat(e[coord])))
            .collect();
        if !derived.is_empty() {
            out.push(GfTerm::raw(
                t.coefficient.clone(),
                derived,
                t.denominator.clone(),
            ));
        }
        for (j, (b, m)) in t.denominator.iter().enumerate() {
            if b[coord] == 0 {
                continue;
            }
            let factor = rat(i64::from(*m) * b[coord]);
            let shifted: Vec<(Exponent, Rational)> = t
                .numerator
                .iter()
                .map(|(e, c)| {
                    let e2: Exponent = e.iter().zip(b).map(|(x, y)| x + y).collect();
                    (e2, c * &factor)
                })
                .collect();
            let mut den = t.denominator.clone();
            den[j].1 += 1;
            out.push(GfTerm::raw(t.coefficient.clone(), shifted, den));
        }
    }
    GeneratingFunction::new(g.dim, out)
}

/// Applies the operator `h(z_1 d/dz_1, ..., z_d d/dz_d)` to `g`, mapping
/// `sum z^alpha` to `sum h(alpha) z^alpha`.
///
/// Works monomial by monomial as repeated Euler operators.  Monomials are
/// visited in lexicographic order with partial applications checkpointed
/// per coordinate, so shared exponent prefixes are computed once.
pub fn apply_polynomial_operator(
    g: &GeneratingFunction,
    h: &SparsePolynomial,
) -> GeneratingFunction {
    assert_eq!(g.dim, h.dim, "dimension mismatch");
    let d = g.dim;
    let mut checkpoints: Vec<GeneratingFunction> = vec![g.clone(); d + 1];
    let mut counts: Vec<u32> = vec![0; d];
    let mut acc: Vec<GfTerm> = Vec::new();
    for (c, beta) in &h.terms {
        if let Some(j) = (0..d).find(|&i| beta[i] != counts[i]) {
            debug_assert!(beta[j] > counts[j], "monomials must ascend lexicographically");
            for level in j..d {
                let (mut gf, from) = if level == j {
                    (checkpoints[level + 1].clone(), counts[level])
                } else {
                    (checkpoints[level].clone(), 0)
                };
                for _ in from..beta[level] {
                    gf = apply_euler_operator(&gf, level);
                }
                checkpoints[level + 1] = gf;
                counts[level] = beta[level];
            }
        }
        acc.extend(checkpoints[d].terms.iter().map(|t| t.scaled(c)));
    }
    GeneratingFunction::new(d, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::cones::SimplicialCone;
    use num::BigInt;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn e(v: &[i64]) -> Exponent {
        v.to_vec()
    }

    #[test]
    fn poly_parse_and_eval() {
        let f = SparsePolynomial::parse("# squares\n1 2\n", 1, 64).unwrap();
        assert_eq!(f.eval(&[rat(3)]), rat(9));
        let g = SparsePolynomial::parse("1/2 1 0\n-2 0 3\n", 2, 64).unwrap();
        assert_eq!(g.eval(&[rat(4), rat(1)]), rat(0));
        assert_eq!(g.total_degree(), 3);
    }

    #[test]
    fn poly_parse_enforces_degree_cap() {
        let err = SparsePolynomial::parse("1 5 5", 2, 8).unwrap_err();
        assert_eq!(err, Error::DegreeBudgetExceeded { degree: 10, cap: 8 });
    }

    #[test]
    fn poly_parse_rejects_garbage() {
        assert!(SparsePolynomial::parse("1 2 3", 1, 64).is_err());
        assert!(SparsePolynomial::parse("x 1", 1, 64).is_err());
        assert!(SparsePolynomial::parse("1 -2", 1, 64).is_err());
    }

    #[test]
    fn poly_power_examples() {
        let x = SparsePolynomial::monomial(1, rat(1), vec![1]);
        let sq = poly_power(&x, 2, 64).unwrap();
        assert_eq!(sq.terms(), &[(rat(1), vec![2])]);

        let xy = SparsePolynomial::new(2, vec![(rat(1), vec![1, 0]), (rat(1), vec![0, 1])]);
        let sq = poly_power(&xy, 2, 64).unwrap();
        assert_eq!(
            sq.terms(),
            &[
                (rat(1), vec![0, 2]),
                (rat(2), vec![1, 1]),
                (rat(1), vec![2, 0]),
            ]
        );

        let x2 = SparsePolynomial::monomial(1, rat(1), vec![2]);
        let cube = poly_power(&x2, 3, 64).unwrap();
        assert_eq!(cube.terms(), &[(rat(1), vec![6])]);
    }

    #[test]
    fn poly_power_respects_cap() {
        let x2 = SparsePolynomial::monomial(1, rat(1), vec![2]);
        let err = poly_power(&x2, 40, 64).unwrap_err();
        assert_eq!(err, Error::DegreeBudgetExceeded { degree: 80, cap: 64 });
    }

    #[test]
    fn term_from_orthant_cone() {
        let cone = SimplicialCone::new(vec![rat(0), rat(0)], vec![bi(&[1, 0]), bi(&[0, 1])])
            .unwrap();
        let sc = SignedCone { sign: 1, cone };
        let t = term_from_cone(&sc, &bi(&[0, 0]));
        assert_eq!(t.coefficient(), &rat(1));
        assert_eq!(t.numerator(), &[(e(&[0, 0]), rat(1))]);
        assert_eq!(t.denominator(), &[(e(&[0, 1]), 1), (e(&[1, 0]), 1)]);
    }

    #[test]
    fn term_normalization_flips_negative_generators() {
        // Apex 4, generator -1: z^4/(1-z^-1) normalizes to -z^5/(1-z).
        let cone = SimplicialCone::new(vec![rat(4)], vec![bi(&[-1])]).unwrap();
        let sc = SignedCone { sign: 1, cone };
        let t = term_from_cone(&sc, &bi(&[4]));
        assert_eq!(t.coefficient(), &rat(-1));
        assert_eq!(t.numerator(), &[(e(&[5]), rat(1))]);
        assert_eq!(t.denominator(), &[(e(&[1]), 1)]);
    }

    #[test]
    fn term_from_1d_origin_cone() {
        let cone = SimplicialCone::new(vec![rat(0)], vec![bi(&[1])]).unwrap();
        let sc = SignedCone { sign: 1, cone };
        let t = term_from_cone(&sc, &bi(&[0]));
        assert_eq!(t.coefficient(), &rat(1));
        assert_eq!(t.numerator(), &[(e(&[0]), rat(1))]);
        assert_eq!(t.denominator(), &[(e(&[1]), 1)]);
    }

    #[test]
    fn euler_operator_on_geometric_series() {
        // z d/dz of 1/(1-z) is z/(1-z)^2.
        let t = GfTerm::new(rat(1), vec![(e(&[0]), rat(1))], vec![(e(&[1]), 1)]).unwrap();
        let g = GeneratingFunction::new(1, vec![t]);
        let dg = apply_euler_operator(&g, 0);
        assert_eq!(dg.terms().len(), 1);
        let t = &dg.terms()[0];
        assert_eq!(t.numerator(), &[(e(&[1]), rat(1))]);
        assert_eq!(t.denominator(), &[(e(&[1]), 2)]);
    }

    #[test]
    fn euler_operator_term_growth_is_bounded() {
        // Growth under one application is at most (1 + factor count).
        let t = GfTerm::new(
            rat(1),
            vec![(e(&[1, 2]), rat(1))],
            vec![(e(&[1, 0]), 1), (e(&[1, 1]), 1)],
        )
        .unwrap();
        let g = GeneratingFunction::new(2, vec![t]);
        let factors = g.terms()[0].denominator().len();
        let dg = apply_euler_operator(&g, 0);
        assert!(dg.terms().len() <= g.terms().len() * (1 + factors));
    }

    #[test]
    fn zero_polynomial_maps_to_zero_function() {
        let t = GfTerm::new(rat(1), vec![(e(&[0]), rat(1))], vec![(e(&[1]), 1)]).unwrap();
        let g = GeneratingFunction::new(1, vec![t]);
        let dg = apply_polynomial_operator(&g, &SparsePolynomial::zero(1));
        assert!(dg.terms().is_empty());
    }

    #[test]
    fn identical_denominators_merge() {
        let t1 = GfTerm::new(rat(2), vec![(e(&[1]), rat(1))], vec![(e(&[1]), 1)]).unwrap();
        let t2 = GfTerm::new(rat(1), vec![(e(&[1]), rat(3))], vec![(e(&[1]), 1)]).unwrap();
        let g = GeneratingFunction::new(1, vec![t1, t2]);
        assert_eq!(g.terms().len(), 1);
        assert_eq!(g.terms()[0].numerator(), &[(e(&[1]), rat(5))]);
    }

    #[test]
    fn numerators_cancel_to_zero_term() {
        let t1 = GfTerm::new(rat(1), vec![(e(&[1]), rat(1))], vec![(e(&[1]), 1)]).unwrap();
        let t2 = GfTerm::new(rat(-1), vec![(e(&[1]), rat(1))], vec![(e(&[1]), 1)]).unwrap();
        let g = GeneratingFunction::new(1, vec![t1, t2]);
        assert!(g.terms().is_empty());
    }

    #[test]
    fn term_new_merges_equal_denominator_vectors() {
        let t = GfTerm::new(
            rat(1),
            vec![(e(&[0, 0]), rat(1))],
            vec![(e(&[1, 2]), 1), (e(&[-1, -2]), 2)],
        )
        .unwrap();
        // (1-z^{-b})^2 contributes (+1)^2 and shift 2b onto the numerator.
        assert_eq!(t.denominator(), &[(e(&[1, 2]), 3)]);
        assert_eq!(t.numerator(), &[(e(&[2, 4]), rat(1))]);
        assert_eq!(t.coefficient(), &rat(1));
        assert_eq!(t.pole_order(), 3);
    }

    #[test]
    fn rational_coefficients_survive_power() {
        let f = SparsePolynomial::new(1, vec![(rat_frac(1, 2), vec![1]), (rat(1), vec![0])]);
        let f2 = poly_power(&f, 2, 64).unwrap();
        assert_eq!(f2.eval(&[rat(2)]), rat(4));
    }
}
