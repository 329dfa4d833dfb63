//! Specialization of generating functions at the all-ones point, and the
//! public count / weighted-sum entry points.
//!
//! Every term is specialized along one shared generic direction `lambda`
//! by substituting `z_i = e^{lambda_i t}`: the numerator becomes a sum of
//! exponentials, each denominator factor `(1 - z^b)^m` becomes
//! `(-ct)^m u(t)^m` with `c = lambda . b` and a unit power series `u`, and
//! the wanted value is the coefficient of `t^0` of the product.  Negative
//! Laurent orders cancel across terms of one generating function, so no
//! cancellation check is needed.

use std::collections::HashMap;

use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{rat, LaurentSeries, Rational};
use crate::cones::{
    decompose_unimodular, numerator_point, polar_of_unimodular, polarize, triangulate,
    SignedCone, SimplicialCone,
};
use crate::error::{Error, Result};
use crate::genfun::{
    apply_polynomial_operator, term_from_cone, GeneratingFunction, GfTerm, SparsePolynomial,
};
use crate::lattice::{integer_kernel, solve_integer};
use crate::linalg;
use crate::polyhedra::{Polytope, VertexCone};

/// Specialization direction: an integer vector with nonzero pairing
/// against every denominator vector of the generating function it serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    pub lambda: Vec<BigInt>,
}

fn moment_curve(dim: usize, t: i64) -> Vec<BigInt> {
    let mut lambda = Vec::with_capacity(dim);
    let mut p = BigInt::one();
    for _ in 0..dim {
        lambda.push(p.clone());
        p *= t;
    }
    lambda
}

fn is_generic(lambda: &[BigInt], g: &GeneratingFunction) -> bool {
    g.terms().iter().all(|term| {
        term.denominator().iter().all(|(b, _)| {
            let pairing: BigInt = b
                .iter()
                .zip(lambda)
                .map(|(&bi, li)| li * BigInt::from(bi))
                .sum();
            !pairing.is_zero()
        })
    })
}

/// First moment-curve direction `(1, t, t^2, ...)`, `t = 1, 2, ...`, that
/// pairs nonzero with every denominator vector.  Each nonzero vector vetoes
/// at most `d - 1` values of `t`, so the search is short and deterministic.
pub fn generic_direction(g: &GeneratingFunction) -> Direction {
    let mut t = 1i64;
    loop {
        let lambda = moment_curve(g.dim(), t);
        if is_generic(&lambda, g) {
            return Direction { lambda };
        }
        t += 1;
    }
}

/// Per-evaluation caches: the exponential series and inverted denominator
/// unit series recur constantly across the terms of one function.
#[derive(Default)]
struct EvalCache {
    exp: HashMap<BigInt, LaurentSeries>,
    den: HashMap<(BigInt, u32), LaurentSeries>,
}

/// `u(c) = (1 - e^{ct}) / (-ct)`, a unit power series.
fn denominator_unit(c: &BigInt, order: u32) -> LaurentSeries {
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    let mut term = Rational::one();
    coeffs.push(term.clone());
    for i in 1..=order {
        term = term * Rational::from_integer(c.clone()) / rat(i64::from(i) + 1);
        coeffs.push(term.clone());
    }
    LaurentSeries::new(0, coeffs, Some(i64::from(order)))
}

fn term_constant_at(
    term: &GfTerm,
    lambda: &[BigInt],
    order: u32,
    cache: &mut EvalCache,
) -> Result<Rational> {
    let pole = term.pole_order();
    debug_assert!(pole <= order);

    let mut numerator = LaurentSeries::zero();
    for (e, c) in term.numerator() {
        let v: BigInt = e
            .iter()
            .zip(lambda)
            .map(|(&ei, li)| li * BigInt::from(ei))
            .sum();
        let series = cache
            .exp
            .entry(v.clone())
            .or_insert_with(|| LaurentSeries::exp_series(&Rational::from_integer(v), order));
        numerator = numerator.add(&series.scale(c));
    }

    let mut product = numerator;
    let mut prefactor = BigInt::one();
    for (b, m) in term.denominator() {
        let c: BigInt = b
            .iter()
            .zip(lambda)
            .map(|(&bi, li)| li * BigInt::from(bi))
            .sum();
        if c.is_zero() {
            return Err(Error::NonGenericDirection);
        }
        prefactor *= (-&c).pow(*m);
        let series = cache.den.entry((c.clone(), *m)).or_insert_with(|| {
            denominator_unit(&c, order)
                .invert(i64::from(order))
                .expect("unit series is invertible")
                .pow(*m)
        });
        product = product.mul(series);
    }

    let at_pole = product.coeff(i64::from(pole));
    Ok(term.coefficient() * at_pole / Rational::from_integer(prefactor))
}

/// Exact coefficient of `t^0` after substituting `z_i = e^{lambda_i t}`
/// into one term, expanding at the term's own pole order.
pub fn term_constant(term: &GfTerm, direction: &Direction) -> Result<Rational> {
    term_constant_at(term, &direction.lambda, term.pole_order(), &mut EvalCache::default())
}

fn evaluate_with_lambda(g: &GeneratingFunction, lambda: &[BigInt]) -> Result<Rational> {
    let order = g.terms().iter().map(GfTerm::pole_order).max().unwrap_or(0);
    let constants: Vec<Result<Rational>> = g
        .terms()
        .par_iter()
        .map_init(EvalCache::default, |cache, term| {
            term_constant_at(term, lambda, order, cache)
        })
        .collect();
    let mut acc = Rational::zero();
    for c in constants {
        acc += c?;
    }
    Ok(acc)
}

/// Value of a generating function at the all-ones point, using one shared
/// generic direction for every term.
pub fn evaluate_at_one(g: &GeneratingFunction) -> Rational {
    if g.terms().is_empty() {
        return Rational::zero();
    }
    let direction = generic_direction(g);
    evaluate_with_lambda(g, &direction.lambda)
        .expect("the chosen direction is generic by construction")
}

/// Like [`evaluate_at_one`] but along the moment curve at a caller-chosen
/// parameter; fails when that direction is not generic.
pub fn evaluate_at_one_with_parameter(g: &GeneratingFunction, t: i64) -> Result<Rational> {
    if g.terms().is_empty() {
        return Ok(Rational::zero());
    }
    let lambda = moment_curve(g.dim(), t);
    if !is_generic(&lambda, g) {
        return Err(Error::NonGenericDirection);
    }
    evaluate_with_lambda(g, &lambda)
}

/// Generating-function terms of one unimodular piece of a full-dimensional
/// pointed cone: polarize, triangulate in dual space, decompose there, and
/// dualize each signed unimodular piece back.
fn full_dimensional_cone_terms(
    apex: &[Rational],
    rays: &[Vec<BigInt>],
) -> Result<Vec<GfTerm>> {
    let polar_rays = polarize(rays)?;
    let mut terms = Vec::new();
    for piece in triangulate(&polar_rays)? {
        let dual = SimplicialCone::new(apex.to_vec(), piece.generators().to_vec())?;
        for signed in decompose_unimodular(&dual) {
            let primal = polar_of_unimodular(&signed.cone);
            let a = numerator_point(&primal);
            let sc = SignedCone {
                sign: signed.sign,
                cone: primal,
            };
            terms.push(term_from_cone(&sc, &a));
        }
    }
    Ok(terms)
}

/// Terms of a vertex cone of any dimension.
///
/// Cones that are not full-dimensional are rewritten in coordinates of the
/// saturated lattice of their linear span: if the apex's affine span holds
/// no lattice points the contribution is zero, otherwise the
/// full-dimensional machinery runs in the smaller space and the resulting
/// exponents are mapped back through the lattice basis.
fn vertex_cone_terms(vc: &VertexCone) -> Result<Vec<GfTerm>> {
    let d = vc.apex.len();
    let ray_rows: Vec<Vec<Rational>> = vc
        .rays
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let rank = linalg::rank(&ray_rows);

    if rank == d {
        return full_dimensional_cone_terms(&vc.apex, &vc.rays);
    }

    if rank == 0 {
        // The cone is the single point `apex`.
        if vc.apex.iter().all(num::BigRational::is_integer) {
            let e: Vec<i64> = vc
                .apex
                .iter()
                .map(|v| i64::try_from(&v.to_integer()).expect("apex fits in i64"))
                .collect();
            return Ok(GfTerm::new(rat(1), vec![(e, Rational::one())], Vec::new())
                .into_iter()
                .collect());
        }
        return Ok(Vec::new());
    }

    // Annihilator rows of the span, integer and primitive.
    let ann: Vec<Vec<BigInt>> = linalg::null_space(&ray_rows, d)
        .iter()
        .map(|v| linalg::primitive_vector(v))
        .collect();
    debug_assert_eq!(ann.len(), d - rank);
    // integer_kernel consumes columns; build the matrix with ann as rows.
    let ann_cols: Vec<Vec<BigInt>> = (0..d)
        .map(|j| ann.iter().map(|row| row[j].clone()).collect())
        .collect();
    let basis = integer_kernel(&ann_cols);
    debug_assert_eq!(basis.len(), rank);

    // Integer point in apex + span, if any.
    let target: Vec<Rational> = ann
        .iter()
        .map(|row| {
            let r: Vec<Rational> = row
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect();
            linalg::dot(&r, &vc.apex)
        })
        .collect();
    if target.iter().any(|v| !v.is_integer()) {
        return Ok(Vec::new());
    }
    let target: Vec<BigInt> = target.iter().map(|v| v.to_integer()).collect();
    let Some(anchor) = solve_integer(&ann_cols, &target) else {
        return Ok(Vec::new());
    };

    // Shifted-cone coordinates: lattice points are anchor + basis * n with
    // n ranging over a cone with apex -u0.
    let offset: Vec<Rational> = anchor
        .iter()
        .zip(&vc.apex)
        .map(|(x, v)| Rational::from_integer(x.clone()) - v)
        .collect();
    let u0 = linalg::solve_columns(&basis, &offset).expect("offset lies in the span");
    let sub_apex: Vec<Rational> = u0.iter().map(|x| -x.clone()).collect();
    let sub_rays: Vec<Vec<BigInt>> = vc
        .rays
        .iter()
        .map(|r| {
            let coords = linalg::solve_columns(
                &basis,
                &r.iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect::<Vec<_>>(),
            )
            .expect("ray lies in the span");
            coords
                .into_iter()
                .map(|c| {
                    debug_assert!(c.is_integer(), "saturated basis spans the ray lattice");
                    c.to_integer()
                })
                .collect()
        })
        .collect();

    let sub_terms = full_dimensional_cone_terms(&sub_apex, &sub_rays)?;
    let lift_exponent = |e: &[i64]| -> Vec<i64> {
        (0..d)
            .map(|i| {
                let mut acc = anchor[i].clone();
                for (k, col) in basis.iter().enumerate() {
                    acc += &col[i] * BigInt::from(e[k]);
                }
                i64::try_from(&acc).expect("lifted exponent fits in i64")
            })
            .collect()
    };
    let lift_vector = |e: &[i64]| -> Vec<i64> {
        (0..d)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (k, col) in basis.iter().enumerate() {
                    acc += &col[i] * BigInt::from(e[k]);
                }
                i64::try_from(&acc).expect("lifted vector fits in i64")
            })
            .collect()
    };
    Ok(sub_terms
        .into_iter()
        .filter_map(|t| {
            let numerator: Vec<(Vec<i64>, Rational)> = t
                .numerator()
                .iter()
                .map(|(e, c)| (lift_exponent(e), c.clone()))
                .collect();
            let denominator: Vec<(Vec<i64>, u32)> = t
                .denominator()
                .iter()
                .map(|(b, m)| (lift_vector(b), *m))
                .collect();
            GfTerm::new(t.coefficient().clone(), numerator, denominator)
        })
        .collect())
}

/// Short rational generating function of the lattice points of a bounded
/// polytope, via vertices, tangent cones, and signed unimodular
/// decomposition in dual space.
pub fn generating_function(p: &Polytope) -> Result<GeneratingFunction> {
    let vertices = p.enumerate_vertices()?;
    let mut terms = Vec::new();
    for vertex in &vertices {
        let cone = p.tangent_cone(vertex);
        terms.extend(vertex_cone_terms(&cone)?);
    }
    Ok(GeneratingFunction::new(p.dim(), terms))
}

/// Number of lattice points of a bounded polytope, computed exactly from
/// the generating function, never by enumeration.
pub fn count(p: &Polytope) -> Result<BigInt> {
    let g = generating_function(p)?;
    let value = evaluate_at_one(&g);
    assert!(
        value.is_integer() && !value.is_negative(),
        "count evaluated to {value}, expected a non-negative integer"
    );
    Ok(value.to_integer())
}

/// Exact `sum h(alpha)` over the lattice points of a bounded polytope.
pub fn weighted_sum(p: &Polytope, h: &SparsePolynomial) -> Result<Rational> {
    let g = generating_function(p)?;
    Ok(evaluate_at_one(&apply_polynomial_operator(&g, h)))
}
