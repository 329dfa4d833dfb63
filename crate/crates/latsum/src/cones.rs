//! Signed decomposition of simplicial cones into unimodular cones, with
//! the polarization and triangulation steps that feed it.
//!
//! Decomposition runs in dual space: triangulating there lets shared faces
//! be ignored, and the index-reduction recursion can skip children that
//! drop dimension, because their primal counterparts contain lines and
//! contribute nothing to the generating function.

use num::{BigInt, One, Signed, Zero};

use crate::arith::{kth_root_bound, Rational, RootMode};
use crate::error::{Error, Result};
use crate::lattice::lll_reduce;
use crate::linalg;
use crate::polyhedra::extreme_rays_of_halfspace_cone;

/// Simplicial cone: rational apex plus d independent primitive integer
/// generators (columns), with the exact determinant cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    apex: Vec<Rational>,
    generators: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl SimplicialCone {
    /// Builds a cone from generator columns, which are scaled primitive.
    /// Fails when the generators are dependent.
    pub fn new(apex: Vec<Rational>, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = apex.len();
        if generators.len() != dim || generators.iter().any(|g| g.len() != dim) {
            return Err(Error::NotFullDimensional);
        }
        let generators: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| linalg::primitive_int_vector(g))
            .collect();
        let det = linalg::det_int(&generators);
        if det.is_zero() {
            return Err(Error::NotFullDimensional);
        }
        Ok(SimplicialCone {
            apex,
            generators,
            det,
        })
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn apex(&self) -> &[Rational] {
        &self.apex
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }
}

/// A simplicial cone with the sign it carries in a signed decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCone {
    pub sign: i8,
    pub cone: SimplicialCone,
}

/// Primitive generators of the polar cone `{y : y . r <= 0 for all rays}`.
///
/// Applying it twice recovers the original generator set.  Requires the
/// rays to span the whole space.
pub fn polarize(rays: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let dim = rays.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::NotFullDimensional);
    }
    let rows: Vec<Vec<Rational>> = rays.iter().map(|r| to_rational(r)).collect();
    if linalg::rank(&rows) != dim {
        return Err(Error::NotFullDimensional);
    }
    Ok(extreme_rays_of_halfspace_cone(&rows, dim))
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn cross(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Triangulates a full-dimensional pointed cone into simplicial cones with
/// apex zero, each using d of the input rays, covering the cone with
/// pairwise disjoint interiors.
///
/// In the plane this is the angular fan over all input rays; in higher
/// dimension it stars the lexicographically smallest ray over recursively
/// triangulated facets.
pub fn triangulate(rays: &[Vec<BigInt>]) -> Result<Vec<SimplicialCone>> {
    let dim = rays.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::NotFullDimensional);
    }
    let mut rays: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| linalg::primitive_int_vector(r))
        .collect();
    rays.sort();
    rays.dedup();
    let rank = linalg::rank(&rays.iter().map(|r| to_rational(r)).collect::<Vec<_>>());
    if rank != dim {
        return Err(Error::NotFullDimensional);
    }

    let zero_apex = vec![Rational::zero(); dim];
    if rays.len() == dim {
        return Ok(vec![SimplicialCone::new(zero_apex, rays)?]);
    }

    match dim {
        1 => Err(Error::NotPointed), // two distinct primitive 1-d rays form a line
        2 => {
            // Clockwise-most ray: strictly before every other one.
            let start = rays
                .iter()
                .position(|a| rays.iter().all(|r| r == a || cross(a, r).is_positive()))
                .ok_or(Error::NotPointed)?;
            let first = rays.remove(start);
            for r in &rays {
                if cross(&first, r).is_zero() {
                    return Err(Error::NotPointed);
                }
            }
            rays.sort_by(|a, b| {
                let c = cross(a, b);
                if c.is_positive() {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            rays.insert(0, first);
            let mut out = Vec::with_capacity(rays.len() - 1);
            for pair in rays.windows(2) {
                out.push(SimplicialCone::new(
                    zero_apex.clone(),
                    vec![pair[0].clone(), pair[1].clone()],
                )?);
            }
            Ok(out)
        }
        _ => {
            // Star the lex-smallest ray over the facets that do not
            // contain it; each facet is triangulated in its own hyperplane
            // coordinates and lifted back by ray identity.
            let normals = polarize(&rays)?;
            if linalg::rank(&normals.iter().map(|n| to_rational(n)).collect::<Vec<_>>()) != dim {
                return Err(Error::NotPointed);
            }
            let star = rays[0].clone();
            let mut out = Vec::new();
            for n in &normals {
                if linalg::dot_int(n, &star).is_zero() {
                    continue;
                }
                let on_facet: Vec<Vec<BigInt>> = rays
                    .iter()
                    .filter(|r| linalg::dot_int(n, r).is_zero())
                    .cloned()
                    .collect();
                // Basis of the facet hyperplane's lattice.
                let n_matrix: Vec<Vec<BigInt>> = n.iter().map(|x| vec![x.clone()]).collect();
                let basis = crate::lattice::integer_kernel(&n_matrix);
                debug_assert_eq!(basis.len(), dim - 1);
                let mut projected = Vec::with_capacity(on_facet.len());
                for r in &on_facet {
                    let coords = linalg::solve_columns(&basis, &to_rational(r))
                        .expect("facet ray lies in the hyperplane");
                    let ints: Vec<BigInt> = coords
                        .into_iter()
                        .map(|c| {
                            debug_assert!(c.is_integer());
                            c.to_integer()
                        })
                        .collect();
                    projected.push(ints);
                }
                for simplex in triangulate(&projected)? {
                    let mut gens = vec![star.clone()];
                    for g in simplex.generators() {
                        let idx = projected
                            .iter()
                            .position(|p| p == g)
                            .expect("triangulation uses input rays");
                        gens.push(on_facet[idx].clone());
                    }
                    out.push(SimplicialCone::new(zero_apex.clone(), gens)?);
                }
            }
            out.sort_by(|a, b| a.generators.cmp(&b.generators));
            Ok(out)
        }
    }
}

/// A nonzero integer vector `w = B alpha` with `max_i |alpha_i|` at most
/// `|det B|^{-1/d}`, found by LLL reduction of the lattice `B^{-1} Z^d`
/// followed by exhaustive enumeration inside the Minkowski box.  Requires
/// index at least 2.
pub fn find_decomposition_vector(cone: &SimplicialCone) -> (Vec<BigInt>, Vec<Rational>) {
    let d = cone.dim();
    let det = cone.det.abs();
    assert!(det >= BigInt::from(2), "cone is already unimodular");

    // det * B^{-1} Z^d is spanned by the adjugate's columns; a point p of
    // it with max|p_i|^d <= det^{d-1} exists by Minkowski and gives
    // alpha = p / det within the required bound.
    let adj = linalg::adjugate_int(&cone.generators);
    let reduced = lll_reduce(&adj);
    let red_adj = linalg::adjugate_int(&reduced);
    let red_det = linalg::det_int(&reduced).abs();
    let dd = u32::try_from(d).expect("small dimension");
    let minkowski = Rational::from_integer(det.pow(dd - 1));

    // Coefficient box from Cramer's rule: for any admissible p,
    // |c_k| <= ||row_k(adj(reduced))||_1 * det^{(d-1)/d} / det(reduced).
    let mut bounds = Vec::with_capacity(d);
    for k in 0..d {
        let rowsum: BigInt = red_adj.iter().map(|col| col[k].abs()).sum();
        let q = Rational::from_integer(rowsum.pow(dd) * det.pow(dd - 1))
            / Rational::from_integer(red_det.pow(dd));
        let b = kth_root_bound(&q, dd, RootMode::Floor);
        bounds.push(i64::try_from(&b).expect("enumeration bound fits in i64"));
    }

    let mut best: Option<(Rational, usize, Vec<BigInt>, Vec<Rational>)> = None;
    let mut counters: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    'outer: loop {
        let p: Vec<BigInt> = (0..d)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (k, c) in counters.iter().enumerate() {
                    if *c != 0 {
                        acc += BigInt::from(*c) * &reduced[k][i];
                    }
                }
                acc
            })
            .collect();
        if p.iter().any(|x| !x.is_zero()) {
            let sup_pow = p
                .iter()
                .map(|x| Rational::from_integer(x.abs().pow(dd)))
                .max()
                .expect("nonempty");
            if sup_pow <= minkowski {
                // w = B p / det, then scaled primitive; alpha = B^{-1} w.
                let mut w: Vec<BigInt> = (0..d)
                    .map(|i| {
                        let mut acc = BigInt::zero();
                        for (j, g) in cone.generators.iter().enumerate() {
                            acc += &g[i] * &p[j];
                        }
                        debug_assert!((&acc % &cone.det).is_zero());
                        acc / &cone.det
                    })
                    .collect();
                w = linalg::primitive_int_vector(&w);
                let rows: Vec<Vec<Rational>> = (0..d)
                    .map(|i| {
                        cone.generators
                            .iter()
                            .map(|g| Rational::from_integer(g[i].clone()))
                            .collect()
                    })
                    .collect();
                let alpha =
                    linalg::solve_square(&rows, &to_rational(&w)).expect("B is invertible");
                // Canonical orientation: fewer negative alpha entries,
                // ties by a positive leading alpha entry.
                let negs = alpha.iter().filter(|x| x.is_negative()).count();
                let pos = alpha.iter().filter(|x| x.is_positive()).count();
                let flip = negs > pos
                    || (negs == pos
                        && alpha
                            .iter()
                            .find(|x| !x.is_zero())
                            .is_some_and(Signed::is_negative));
                let (w, alpha) = if flip {
                    (
                        w.iter().map(|x| -x.clone()).collect::<Vec<_>>(),
                        alpha.iter().map(|x| -x.clone()).collect::<Vec<_>>(),
                    )
                } else {
                    (w, alpha)
                };
                let sup = alpha.iter().map(Signed::abs).max().expect("nonempty");
                let negs = alpha.iter().filter(|x| x.is_negative()).count();
                let key = (sup, negs, w.clone());
                let better = match &best {
                    None => true,
                    Some((bsup, bnegs, bw, _)) => {
                        (&key.0, key.1, &key.2) < (bsup, *bnegs, bw)
                    }
                };
                if better {
                    best = Some((key.0, key.1, w, alpha));
                }
            }
        }
        // Advance the odometer over the coefficient box.
        for k in 0..d {
            counters[k] += 1;
            if counters[k] <= bounds[k] {
                continue 'outer;
            }
            counters[k] = -bounds[k];
        }
        break;
    }

    let (_, _, w, alpha) = best.expect("Minkowski guarantees a vector in the box");
    (w, alpha)
}

/// Barvinok's signed recursion: rewrites a simplicial cone as a signed sum
/// of unimodular cones.  Child `i` replaces generator `i` by the
/// decomposition vector, inherits `sign * sign(alpha_i)`, and children with
/// `alpha_i = 0` are skipped.  Every child's index is strictly smaller, so
/// the recursion terminates.
pub fn decompose_unimodular(cone: &SimplicialCone) -> Vec<SignedCone> {
    fn recurse(sign: i8, cone: SimplicialCone, out: &mut Vec<SignedCone>) {
        if cone.is_unimodular() {
            out.push(SignedCone { sign, cone });
            return;
        }
        let parent_index = cone.det.abs();
        let (w, alpha) = find_decomposition_vector(&cone);
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut gens = cone.generators.clone();
            gens[i] = w.clone();
            let child = SimplicialCone::new(cone.apex.clone(), gens)
                .expect("child with nonzero alpha is full-dimensional");
            debug_assert!(child.det.abs() < parent_index, "index must shrink");
            let child_sign = sign * if a.is_negative() { -1 } else { 1 };
            recurse(child_sign, child, out);
        }
    }

    let mut out = Vec::new();
    recurse(1, cone.clone(), &mut out);
    out.sort_by(|a, b| {
        (a.sign, &a.cone.generators).cmp(&(b.sign, &b.cone.generators))
    });
    out
}

/// The unique lattice point in `apex + B [0,1)^d` for a unimodular cone:
/// `a = B ceil(B^{-1} apex)`.
pub fn numerator_point(cone: &SimplicialCone) -> Vec<BigInt> {
    debug_assert!(cone.is_unimodular());
    let d = cone.dim();
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            cone.generators
                .iter()
                .map(|g| Rational::from_integer(g[i].clone()))
                .collect()
        })
        .collect();
    let coords = linalg::solve_square(&rows, &cone.apex).expect("B is invertible");
    let lifted: Vec<BigInt> = coords.iter().map(|c| c.ceil().to_integer()).collect();
    (0..d)
        .map(|i| {
            let mut acc = BigInt::zero();
            for (j, g) in cone.generators.iter().enumerate() {
                acc += &g[i] * &lifted[j];
            }
            acc
        })
        .collect()
}

/// Polar of a unimodular cone, which is unimodular again: the generators
/// are the columns of `-(B^{-1})^T`.  The apex is carried through.
pub(crate) fn polar_of_unimodular(cone: &SimplicialCone) -> SimplicialCone {
    debug_assert!(cone.is_unimodular());
    let d = cone.dim();
    let adj = linalg::adjugate_int(&cone.generators);
    // B^{-1} = adj / det with det = +-1.
    let det = cone.det.clone();
    let inv: Vec<Vec<BigInt>> = adj
        .into_iter()
        .map(|col| col.into_iter().map(|x| x * &det).collect())
        .collect();
    let gens: Vec<Vec<BigInt>> = (0..d)
        .map(|j| (0..d).map(|i| -inv[i][j].clone()).collect())
        .collect();
    SimplicialCone::new(cone.apex.clone(), gens).expect("polar of unimodular is unimodular")
}
