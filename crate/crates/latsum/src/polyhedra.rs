//! Exact H-representation polytopes: validation, vertex enumeration,
//! tangent cones, bounding boxes, and hyperplane bisection.
//!
//! Vertex enumeration solves every d-row subset exactly and filters for
//! feasibility.  Dimension is fixed and small throughout, so this favors
//! correctness over asymptotics.

use num::{BigInt, One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg;

/// A single inequality `normal . x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
}

/// Rational polytope `{x : A x <= b}` over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<Constraint>,
}

/// Tangent cone at a vertex: the apex plus the primitive extreme rays of
/// the feasible directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCone {
    pub apex: Vec<Rational>,
    pub rays: Vec<Vec<BigInt>>,
}

/// Integer bounding box; empty when some coordinate has `lo > hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
}

impl BoundingBox {
    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    /// Number of integer points in the box.
    pub fn volume(&self) -> BigInt {
        if self.is_empty() {
            return BigInt::zero();
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| h - l + 1)
            .product()
    }
}

impl Polytope {
    /// Builds a polytope, validating that no constraint has a zero normal.
    pub fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        for (i, c) in rows.iter().enumerate() {
            if c.normal.len() != dim {
                return Err(Error::Parse(format!(
                    "constraint {} has {} coefficients, expected {}",
                    i + 1,
                    c.normal.len(),
                    dim
                )));
            }
            if c.normal.iter().all(Zero::is_zero) {
                return Err(Error::Parse(format!(
                    "constraint {} has an all-zero normal",
                    i + 1
                )));
            }
        }
        Ok(Polytope { dim, rows })
    }

    /// Convenience constructor for the interval `[lo, hi]` in one variable.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Polytope {
            dim: 1,
            rows: vec![
                Constraint {
                    normal: vec![-Rational::one()],
                    rhs: -lo,
                },
                Constraint {
                    normal: vec![Rational::one()],
                    rhs: hi,
                },
            ],
        }
    }

    /// Axis-aligned box `lo <= x <= hi` in any dimension.
    pub fn axis_box(lo: &[i64], hi: &[i64]) -> Self {
        let dim = lo.len();
        assert_eq!(dim, hi.len());
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut neg = vec![Rational::zero(); dim];
            neg[i] = -Rational::one();
            rows.push(Constraint {
                normal: neg,
                rhs: crate::arith::rat(-lo[i]),
            });
            let mut pos = vec![Rational::zero(); dim];
            pos[i] = Rational::one();
            rows.push(Constraint {
                normal: pos,
                rhs: crate::arith::rat(hi[i]),
            });
        }
        Polytope { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    /// Parses the polytope text format:
    ///
    /// ```text
    /// # comment lines start with '#'
    /// d m
    /// a_1 ... a_d b      (m such constraint lines, entries "p" or "p/q")
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let d: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("header must start with the dimension".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("header must give the constraint count".into()))?;
        if it.next().is_some() {
            return Err(Error::Parse("header has trailing tokens".into()));
        }
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("fewer constraint lines than announced".into()))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != d + 1 {
                return Err(Error::Parse(format!(
                    "constraint line '{line}' must have {} entries",
                    d + 1
                )));
            }
            let mut vals = Vec::with_capacity(d + 1);
            for t in toks {
                let v: Rational = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational '{t}'")))?;
                vals.push(v);
            }
            let rhs = vals.pop().expect("d + 1 entries");
            rows.push(Constraint { normal: vals, rhs });
        }
        if lines.next().is_some() {
            return Err(Error::Parse("more constraint lines than announced".into()));
        }
        Polytope::new(d, rows)
    }

    /// Renders in the same format `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim, self.rows.len());
        for c in &self.rows {
            for a in &c.normal {
                out.push_str(&a.to_string());
                out.push(' ');
            }
            out.push_str(&c.rhs.to_string());
            out.push('\n');
        }
        out
    }

    /// Exact membership test for an integer point.
    pub fn contains_lattice_point(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.dim);
        let xr: Vec<Rational> = x
            .iter()
            .map(|v| Rational::from_integer(v.clone()))
            .collect();
        self.contains(&xr)
    }

    /// Exact membership test for a rational point.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.rows
            .iter()
            .all(|c| linalg::dot(&c.normal, x) <= c.rhs)
    }

    /// Splits along `x_i <= m` / `x_i >= m + 1` (coordinates 1-based).
    ///
    /// The lattice points of the polytope partition exactly between the
    /// two halves.
    pub fn bisect(&self, coord: usize, m: &BigInt) -> (Polytope, Polytope) {
        assert!(coord >= 1 && coord <= self.dim, "coordinate out of range");
        let i = coord - 1;
        let mut lower = self.clone();
        let mut pos = vec![Rational::zero(); self.dim];
        pos[i] = Rational::one();
        lower.rows.push(Constraint {
            normal: pos,
            rhs: Rational::from_integer(m.clone()),
        });
        let mut upper = self.clone();
        let mut neg = vec![Rational::zero(); self.dim];
        neg[i] = -Rational::one();
        upper.rows.push(Constraint {
            normal: neg,
            rhs: Rational::from_integer(-(m + 1i32)),
        });
        (lower, upper)
    }

    /// Raw exhaustive vertex search: solve every d-subset, keep feasible
    /// solutions, record full active sets, deduplicate, sort lex.
    fn vertex_candidates(&self) -> Vec<(Vec<Rational>, Vec<usize>)> {
        let d = self.dim;
        let m = self.rows.len();
        let mut found: Vec<(Vec<Rational>, Vec<usize>)> = Vec::new();
        if m < d {
            return found;
        }
        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let a: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| self.rows[i].normal.clone())
                .collect();
            let b: Vec<Rational> = subset.iter().map(|&i| self.rows[i].rhs.clone()).collect();
            if let Some(x) = linalg::solve_square(&a, &b) {
                if self.contains(&x) && !found.iter().any(|(p, _)| *p == x) {
                    let active: Vec<usize> = self
                        .rows
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| linalg::dot(&c.normal, &x) == c.rhs)
                        .map(|(i, _)| i)
                        .collect();
                    found.push((x, active));
                }
            }
            // next d-combination of 0..m
            let mut i = d;
            loop {
                if i == 0 {
                    return sort_points(found);
                }
                i -= 1;
                if subset[i] != i + m - d {
                    subset[i] += 1;
                    for j in i + 1..d {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Whether the recession cone `{y : A y <= 0}` is nontrivial, detected
    /// by intersecting with the unit box and looking for a nonzero vertex.
    fn recession_nontrivial(&self) -> bool {
        let d = self.dim;
        let mut rows: Vec<Constraint> = self
            .rows
            .iter()
            .map(|c| Constraint {
                normal: c.normal.clone(),
                rhs: Rational::zero(),
            })
            .collect();
        for i in 0..d {
            let mut neg = vec![Rational::zero(); d];
            neg[i] = -Rational::one();
            rows.push(Constraint {
                normal: neg,
                rhs: Rational::one(),
            });
            let mut pos = vec![Rational::zero(); d];
            pos[i] = Rational::one();
            rows.push(Constraint {
                normal: pos,
                rhs: Rational::one(),
            });
        }
        let recession = Polytope { dim: d, rows };
        recession
            .vertex_candidates()
            .iter()
            .any(|(p, _)| p.iter().any(|v| !v.is_zero()))
    }

    /// Feasibility by Fourier-Motzkin elimination.  Only consulted when
    /// the polytope has no vertices but a nontrivial recession cone.
    fn feasible_fourier_motzkin(&self) -> bool {
        let mut rows: Vec<(Vec<Rational>, Rational)> = self
            .rows
            .iter()
            .map(|c| (c.normal.clone(), c.rhs.clone()))
            .collect();
        for var in 0..self.dim {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut rest = Vec::new();
            for (a, b) in rows {
                if a[var].is_zero() {
                    rest.push((a, b));
                } else if a[var].is_positive() {
                    pos.push((a, b));
                } else {
                    neg.push((a, b));
                }
            }
            for (ap, bp) in &pos {
                for (an, bn) in &neg {
                    // Scale so the eliminated coefficients cancel.
                    let sp = Rational::one() / ap[var].clone();
                    let sn = -(Rational::one() / an[var].clone());
                    let a: Vec<Rational> = ap
                        .iter()
                        .zip(an)
                        .map(|(x, y)| x * &sp + y * &sn)
                        .collect();
                    let b = bp * &sp + bn * &sn;
                    rest.push((a, b));
                }
            }
            rows = rest;
        }
        rows.iter().all(|(_, b)| !b.is_negative())
    }

    /// Enumerates the vertices of the polytope with their active-row index
    /// sets, in lexicographic order of the points.
    ///
    /// Returns `Err(Unbounded)` when the polytope is feasible with a
    /// nontrivial recession cone; an empty list means the polytope is
    /// empty (it has no vertices).
    pub fn enumerate_vertices(&self) -> Result<Vec<(Vec<Rational>, Vec<usize>)>> {
        let verts = self.vertex_candidates();
        if !verts.is_empty() {
            if self.recession_nontrivial() {
                return Err(Error::Unbounded);
            }
            return Ok(verts);
        }
        // No vertices: either empty, or it contains a line.
        if self.recession_nontrivial() && self.feasible_fourier_motzkin() {
            return Err(Error::Unbounded);
        }
        Ok(Vec::new())
    }

    /// Tangent cone at an enumerated vertex.
    ///
    /// Rays are the primitive extreme directions of `{y : a . y <= 0}`
    /// over the active rows `a`, found by solving every (d-1)-subset of
    /// the active rows and orienting the one-dimensional solution.
    pub fn tangent_cone(&self, vertex: &(Vec<Rational>, Vec<usize>)) -> VertexCone {
        let (point, active) = vertex;
        let normals: Vec<Vec<Rational>> = active
            .iter()
            .map(|&i| self.rows[i].normal.clone())
            .collect();
        VertexCone {
            apex: point.clone(),
            rays: extreme_rays_of_halfspace_cone(&normals, self.dim),
        }
    }

    /// Integer bounding box from the vertex hull: `lo = ceil(min)`,
    /// `hi = floor(max)` per coordinate.
    pub fn bounding_box(&self) -> Result<BoundingBox> {
        let verts = self.enumerate_vertices()?;
        if verts.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let d = self.dim;
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let min = verts
                .iter()
                .map(|(p, _)| &p[i])
                .min()
                .expect("nonempty vertex list");
            let max = verts
                .iter()
                .map(|(p, _)| &p[i])
                .max()
                .expect("nonempty vertex list");
            lo.push(min.ceil().to_integer());
            hi.push(max.floor().to_integer());
        }
        Ok(BoundingBox { lo, hi })
    }
}

/// Primitive extreme rays of the cone `{y : n . y <= 0 for n in normals}`.
///
/// Sound and complete for pointed cones: every ray with d-1 independent
/// tight constraints and full feasibility is extreme, and every extreme
/// ray arises this way.  Results are deduplicated and sorted lex.
pub(crate) fn extreme_rays_of_halfspace_cone(
    normals: &[Vec<Rational>],
    dim: usize,
) -> Vec<Vec<BigInt>> {
    let k = normals.len();
    let take = dim - 1;
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let feasible = |y: &[Rational]| normals.iter().all(|n| !linalg::dot(n, y).is_positive());

    let mut consider = |subset: &[usize]| {
        let sub: Vec<Vec<Rational>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let null = linalg::null_space(&sub, dim);
        if null.len() != 1 {
            return;
        }
        let candidate = &null[0];
        let neg: Vec<Rational> = candidate.iter().map(|v| -v.clone()).collect();
        let oriented = if feasible(candidate) {
            candidate.clone()
        } else if feasible(&neg) {
            neg
        } else {
            return;
        };
        let prim = linalg::primitive_vector(&oriented);
        if prim.iter().all(Zero::is_zero) {
            return;
        }
        if !rays.contains(&prim) {
            rays.push(prim);
        }
    };

    if take == 0 {
        consider(&[]);
    } else if k >= take {
        let mut subset: Vec<usize> = (0..take).collect();
        loop {
            consider(&subset);
            let mut i = take;
            let mut done = true;
            while i > 0 {
                i -= 1;
                if subset[i] != i + k - take {
                    subset[i] += 1;
                    for j in i + 1..take {
                        subset[j] = subset[j - 1] + 1;
                    }
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    rays.sort();
    rays
}

fn sort_points(
    mut pts: Vec<(Vec<Rational>, Vec<usize>)>,
) -> Vec<(Vec<Rational>, Vec<usize>)> {
    pts.sort_by(|(a, _), (b, _)| a.cmp(b));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    pub(crate) fn triangle() -> Polytope {
        // x >= 0, y >= 0, x + y <= 2
        Polytope::parse("2 3\n-1 0 0\n0 -1 0\n1 1 2").unwrap()
    }

    #[test]
    fn unit_square_vertices() {
        let p = Polytope::axis_box(&[0, 0], &[1, 1]);
        let verts = p.enumerate_vertices().unwrap();
        let points: Vec<Vec<Rational>> = verts.into_iter().map(|(p, _)| p).collect();
        assert_eq!(points, vec![pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 0]), pt(&[1, 1])]);
    }

    #[test]
    fn infeasible_has_no_vertices() {
        let p = Polytope::parse("1 2\n1 -1\n-1 0").unwrap(); // x <= -1, x >= 0
        assert!(p.enumerate_vertices().unwrap().is_empty());
    }

    #[test]
    fn triangle_vertices() {
        let verts = triangle().enumerate_vertices().unwrap();
        let points: Vec<Vec<Rational>> = verts.into_iter().map(|(p, _)| p).collect();
        assert_eq!(points, vec![pt(&[0, 0]), pt(&[0, 2]), pt(&[2, 0])]);
    }

    #[test]
    fn unbounded_is_detected() {
        let p = Polytope::parse("2 2\n-1 0 0\n0 -1 0").unwrap(); // first quadrant
        assert_eq!(p.enumerate_vertices(), Err(Error::Unbounded));
        // A strip without vertices is also unbounded.
        let strip = Polytope::parse("2 2\n0 1 1\n0 -1 0").unwrap(); // 0 <= y <= 1
        assert_eq!(strip.enumerate_vertices(), Err(Error::Unbounded));
    }

    #[test]
    fn infeasible_with_lineal_recession_is_empty() {
        // x + y <= -1 and x + y >= 1: infeasible, recession cone is a line.
        let p = Polytope::parse("2 2\n1 1 -1\n-1 -1 -1").unwrap();
        assert!(p.enumerate_vertices().unwrap().is_empty());
    }

    #[test]
    fn tangent_cone_examples() {
        let square = Polytope::axis_box(&[0, 0], &[1, 1]);
        let verts = square.enumerate_vertices().unwrap();
        let origin = verts.iter().find(|(p, _)| *p == pt(&[0, 0])).unwrap();
        let cone = square.tangent_cone(origin);
        assert_eq!(cone.rays, vec![bi(&[0, 1]), bi(&[1, 0])]);

        let tri = triangle();
        let verts = tri.enumerate_vertices().unwrap();
        let v20 = verts.iter().find(|(p, _)| *p == pt(&[2, 0])).unwrap();
        let cone = tri.tangent_cone(v20);
        assert_eq!(cone.rays, vec![bi(&[-1, 0]), bi(&[-1, 1])]);

        let iv = Polytope::interval(rat(0), rat(4));
        let verts = iv.enumerate_vertices().unwrap();
        let v4 = verts.iter().find(|(p, _)| *p == pt(&[4])).unwrap();
        assert_eq!(iv.tangent_cone(v4).rays, vec![bi(&[-1])]);
    }

    #[test]
    fn bounding_boxes() {
        let iv = Polytope::interval(rat(0), rat(4));
        let b = iv.bounding_box().unwrap();
        assert_eq!((b.lo, b.hi), (bi(&[0]), bi(&[4])));

        let b = triangle().bounding_box().unwrap();
        assert_eq!((b.lo, b.hi), (bi(&[0, 0]), bi(&[2, 2])));

        let thin = Polytope::interval(rat_frac(1, 3), rat_frac(2, 3));
        let b = thin.bounding_box().unwrap();
        assert!(b.is_empty());

        let empty = Polytope::parse("1 2\n1 -1\n-1 0").unwrap();
        assert_eq!(empty.bounding_box(), Err(Error::EmptyPolytope));
    }

    #[test]
    fn bisect_examples() {
        let iv = Polytope::interval(rat(0), rat(4));
        let (lo, hi) = iv.bisect(1, &BigInt::from(2));
        let blo = lo.bounding_box().unwrap();
        assert_eq!((blo.lo, blo.hi), (bi(&[0]), bi(&[2])));
        let bhi = hi.bounding_box().unwrap();
        assert_eq!((bhi.lo, bhi.hi), (bi(&[3]), bi(&[4])));

        let (_, beyond) = iv.bisect(1, &BigInt::from(10));
        assert!(beyond.enumerate_vertices().unwrap().is_empty());
    }

    #[test]
    fn membership() {
        let iv = Polytope::interval(rat(0), rat(4));
        assert!(iv.contains_lattice_point(&bi(&[3])));
        assert!(!iv.contains_lattice_point(&bi(&[5])));
        assert!(triangle().contains_lattice_point(&bi(&[1, 1])));
    }

    #[test]
    fn box_vertex_count_is_two_to_the_d() {
        for d in 1..=3usize {
            let lo = vec![0i64; d];
            let hi = vec![3i64; d];
            let p = Polytope::axis_box(&lo, &hi);
            assert_eq!(p.enumerate_vertices().unwrap().len(), 1 << d);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Polytope::parse("").is_err());
        assert!(Polytope::parse("2 1\n1 0").is_err()); // short row
        assert!(Polytope::parse("2 1\n0 0 5").is_err()); // zero normal
        assert!(Polytope::parse("1 1\n1/0 2").is_err()); // bad rational
        assert!(Polytope::parse("1 1\n1 2\n3 4").is_err()); // extra line
    }

    #[test]
    fn parse_allows_comments_and_roundtrip() {
        let text = "# interval\n1 2\n-1 0\n1 4\n";
        let p = Polytope::parse(text).unwrap();
        assert_eq!(p, Polytope::interval(rat(0), rat(4)));
        let p2 = Polytope::parse(&p.to_text()).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn random_vertices_are_feasible_with_full_rank_active_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7e57);
        let mut seen_nonempty = 0;
        for _ in 0..200 {
            let d = if rng.gen_bool(0.5) { 2 } else { 3 };
            let m = rng.gen_range(d + 1..=d + 4);
            let mut rows = Vec::new();
            for _ in 0..m {
                let normal: Vec<Rational> =
                    (0..d).map(|_| rat(rng.gen_range(-20..=20))).collect();
                if normal.iter().all(Zero::is_zero) {
                    continue;
                }
                rows.push(Constraint {
                    normal,
                    rhs: rat(rng.gen_range(-20..=20)),
                });
            }
            // Keep everything bounded by a box so Unbounded cannot occur.
            let mut p = Polytope::axis_box(&vec![-5; d], &vec![5; d]);
            p.rows.extend(rows);
            let verts = p.enumerate_vertices().unwrap();
            if !verts.is_empty() {
                seen_nonempty += 1;
            }
            let mut prev: Option<Vec<Rational>> = None;
            for (point, active) in &verts {
                assert!(p.contains(point));
                let normals: Vec<Vec<Rational>> = active
                    .iter()
                    .map(|&i| p.rows[i].normal.clone())
                    .collect();
                assert_eq!(linalg::rank(&normals), d, "active set must have rank d");
                for (i, c) in p.rows.iter().enumerate() {
                    let tight = linalg::dot(&c.normal, point) == c.rhs;
                    assert_eq!(tight, active.contains(&i));
                }
                if let Some(prev) = prev {
                    assert!(prev < *point, "lexicographic vertex order");
                }
                prev = Some(point.clone());
            }
        }
        assert!(seen_nonempty > 50, "generator should produce many nonempty cases");
    }
}
