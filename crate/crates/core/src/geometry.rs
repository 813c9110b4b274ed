//! Polyhedral conversion: vertex enumeration, dual cones, membership tests.
//!
//! All computations go through [`crate::dd`]; [`brute_force_vertices`] is an
//! independent enumerator kept for cross-checking.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::{self, IntVec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::vector::{sort_canonical, Vector};

/// `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub offset: Scalar,
}

impl Halfspace {
    pub fn le(normal: Vector, offset: Scalar) -> Self {
        Halfspace { normal, offset }
    }

    /// `normal · x >= offset`.
    pub fn ge(normal: Vector, offset: Scalar) -> Self {
        Halfspace {
            normal: -normal,
            offset: -offset,
        }
    }

    pub fn slack(&self, point: &Vector) -> Scalar {
        &self.offset - self.normal.dot(point)
    }
}

/// `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vector,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub offset: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Scalar) -> Self {
        Hyperplane { normal, offset }
    }

    pub fn contains(&self, point: &Vector) -> bool {
        self.normal.dot(point) == self.offset
    }
}

fn to_int_row(v: &Vector) -> IntVec {
    v.primitive_integers()
}

fn from_int_row(v: &[BigInt]) -> Vector {
    Vector::from_integers(v)
}

/// Homogenized row for `normal · x <= offset`: `offset * t - normal · x >= 0`.
fn homogenize(normal: &Vector, offset: &Scalar) -> Vector {
    let mut row: Vec<Scalar> = normal.iter().map(|x| -x).collect();
    row.push(offset.clone());
    Vector::new(row)
}

fn check_dims<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a Vector>) -> Result<()> {
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
    }
    Ok(())
}

/// Extreme points of `{x : inequalities, equalities}`, canonically sorted.
///
/// Returns an empty list for an infeasible system and [`Error::Unbounded`] when
/// the region contains a ray or a line.
pub fn enumerate_vertices(inequalities: &[Halfspace], equalities: &[Hyperplane]) -> Result<Vec<Vector>> {
    let dim = inequalities
        .first()
        .map(|h| h.normal.dim())
        .or_else(|| equalities.first().map(|h| h.normal.dim()))
        .ok_or_else(|| Error::Invalid("no constraints given".into()))?;
    check_dims(dim, inequalities.iter().map(|h| &h.normal))?;
    check_dims(dim, equalities.iter().map(|h| &h.normal))?;

    let mut ineq: Vec<IntVec> = inequalities
        .iter()
        .map(|h| to_int_row(&homogenize(&h.normal, &h.offset)))
        .collect();
    let mut t_nonneg = vec![BigInt::zero(); dim + 1];
    t_nonneg[dim] = BigInt::one();
    ineq.push(t_nonneg);
    let eq: Vec<IntVec> = equalities
        .iter()
        .map(|h| to_int_row(&homogenize(&h.normal, &h.offset)))
        .collect();

    let gens = dd::generators(dim + 1, &ineq, &eq);
    let (bounded, recession): (Vec<_>, Vec<_>) = gens.rays.iter().partition(|r| r[dim].is_positive());
    if bounded.is_empty() {
        return Ok(Vec::new());
    }
    if !recession.is_empty() || !gens.lineality.is_empty() {
        return Err(Error::Unbounded);
    }
    let mut vertices: Vec<Vector> = bounded
        .into_iter()
        .map(|r| {
            let t = Scalar::from_integer(r[dim].clone());
            r[..dim].iter().map(|x| Scalar::from_integer(x.clone()) / &t).collect()
        })
        .collect();
    sort_canonical(&mut vertices);
    Ok(vertices)
}

/// Vertex enumeration by solving every square subsystem of active
/// constraints. Exponential; intended as a test oracle.
pub fn brute_force_vertices(inequalities: &[Halfspace], equalities: &[Hyperplane]) -> Vec<Vector> {
    let Some(dim) = inequalities
        .first()
        .map(|h| h.normal.dim())
        .or_else(|| equalities.first().map(|h| h.normal.dim()))
    else {
        return Vec::new();
    };
    let eq_normals: Vec<Vector> = equalities.iter().map(|h| h.normal.clone()).collect();
    let eq_rank = linalg::rank_of(&eq_normals);
    let need = dim - eq_rank;
    let mut found = Vec::new();
    let mut subset: Vec<usize> = (0..need).collect();
    if need > inequalities.len() {
        return found;
    }
    loop {
        let mut rows: Vec<Vector> = eq_normals.clone();
        let mut rhs: Vec<Scalar> = equalities.iter().map(|h| h.offset.clone()).collect();
        for &i in &subset {
            rows.push(inequalities[i].normal.clone());
            rhs.push(inequalities[i].offset.clone());
        }
        let m = if rows.is_empty() {
            Matrix::zeros(0, dim)
        } else {
            Matrix::from_rows(&rows)
        };
        if m.rank() == dim {
            if let Some(x) = m.solve(&Vector::new(rhs)) {
                let feasible = inequalities.iter().all(|h| !h.slack(&x).is_negative())
                    && equalities.iter().all(|h| h.contains(&x));
                if feasible {
                    found.push(x);
                }
            }
        }
        if !next_combination(&mut subset, inequalities.len()) {
            break;
        }
    }
    sort_canonical(&mut found);
    found
}

/// Advances `subset` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Supporting description of a cone: `f · x >= 0` for each inequality and
/// `g · x = 0` for each equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFacets {
    pub inequalities: Vec<Vector>,
    pub equations: Vec<Vector>,
}

/// Convex cone with its generating rays and, once computed, its facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub dim: usize,
    pub rays: Vec<Vector>,
    pub facets: Option<ConeFacets>,
}

/// Result of [`cone_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Indices into the facet inequalities that the point saturates.
    Inside { saturated: Vec<usize> },
    /// `separator · point < 0` while `separator · ray >= 0` for every generator.
    Outside { separator: Vector },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }

    pub fn separator(&self) -> Option<&Vector> {
        match self {
            Membership::Outside { separator } => Some(separator),
            Membership::Inside { .. } => None,
        }
    }
}

/// Lineality basis and canonical rays of `{f : f · r >= 0 for all r}`.
fn dual_generators(dim: usize, rays: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let rows: Vec<IntVec> = rays.iter().map(to_int_row).collect();
    let gens = dd::generators(dim, &rows, &[]);
    let lineality = canonical_subspace_basis(gens.lineality.iter().map(|l| from_int_row(l)).collect());
    let mut dual: Vec<Vector> = gens
        .rays
        .iter()
        .map(|r| linalg::project_out(&from_int_row(r), &lineality).canonical_ray())
        .collect();
    sort_canonical(&mut dual);
    (lineality, dual)
}

/// Reduced row echelon basis with each row scaled to coprime integers.
fn canonical_subspace_basis(vectors: Vec<Vector>) -> Vec<Vector> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = Matrix::from_rows(&vectors);
    let pivots = m.rref();
    (0..pivots.len()).map(|i| m.row(i).canonical_line()).collect()
}

impl Cone {
    /// Builds a cone from generators; rays are canonicalized and deduplicated
    /// but not pruned to extreme rays (see [`Cone::extreme`]).
    pub fn from_rays(dim: usize, rays: Vec<Vector>) -> Result<Self> {
        check_dims(dim, &rays)?;
        let mut rays: Vec<Vector> = rays
            .into_iter()
            .filter(|r| !r.is_zero())
            .map(|r| r.canonical_ray())
            .collect();
        sort_canonical(&mut rays);
        Ok(Cone {
            dim,
            rays,
            facets: None,
        })
    }

    /// Nonnegative orthant in `dim` dimensions.
    pub fn orthant(dim: usize) -> Self {
        Cone {
            dim,
            rays: (0..dim).rev().map(|i| Vector::basis(dim, i)).collect(),
            facets: None,
        }
    }

    /// Computes the facet description if missing.
    pub fn with_facets(mut self) -> Self {
        if self.facets.is_none() {
            let (equations, inequalities) = dual_generators(self.dim, &self.rays);
            self.facets = Some(ConeFacets {
                inequalities,
                equations,
            });
        }
        self
    }

    pub fn facets(&self) -> ConeFacets {
        match &self.facets {
            Some(f) => f.clone(),
            None => {
                let (equations, inequalities) = dual_generators(self.dim, &self.rays);
                ConeFacets {
                    inequalities,
                    equations,
                }
            }
        }
    }

    /// Drops generators that are not extreme rays. Assumes a pointed cone.
    pub fn extreme(self) -> Self {
        let cone = self.with_facets();
        let facets = cone.facets.clone().expect("facets computed");
        let rays = extreme_rays_of(&cone.rays, &facets, cone.dim);
        Cone {
            dim: cone.dim,
            rays,
            facets: Some(facets),
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        linalg::rank_of(&self.rays) == self.dim
    }

    /// Rays of the cone that saturate the given functional.
    pub fn saturated_by(&self, functional: &Vector) -> Vec<usize> {
        (0..self.rays.len())
            .filter(|&i| self.rays[i].dot(functional).is_zero())
            .collect()
    }
}

fn extreme_rays_of(rays: &[Vector], facets: &ConeFacets, dim: usize) -> Vec<Vector> {
    let span = dim - facets.equations.len();
    rays.iter()
        .filter(|r| {
            let tight: Vec<Vector> = facets
                .inequalities
                .iter()
                .filter(|f| f.dot(r).is_zero())
                .cloned()
                .collect();
            span >= 1 && linalg::rank_of(&tight) == span - 1
        })
        .cloned()
        .collect()
}

/// Extreme rays of the dual cone `{f : f · r >= 0 for every ray r}`, scaled to
/// coprime integers and sorted. The returned cone carries the extreme rays of
/// the input as its facets.
pub fn dual_cone_rays(cone: &Cone) -> Result<Cone> {
    if cone.rays.is_empty() {
        return Err(Error::Invalid("cone has no rays".into()));
    }
    let (lineality, rays) = dual_generators(cone.dim, &cone.rays);
    if !lineality.is_empty() {
        return Err(Error::DualNotPointed { lineality });
    }
    let facets = ConeFacets {
        inequalities: rays.clone(),
        equations: Vec::new(),
    };
    let mut primal_extreme = extreme_rays_of(&cone.rays, &facets, cone.dim);
    sort_canonical(&mut primal_extreme);
    Ok(Cone {
        dim: cone.dim,
        rays,
        facets: Some(ConeFacets {
            inequalities: primal_extreme,
            equations: Vec::new(),
        }),
    })
}

/// Decides whether `point` lies in `cone`, with a certificate either way.
pub fn cone_membership(point: &Vector, cone: &Cone) -> Result<Membership> {
    if point.dim() != cone.dim {
        return Err(Error::DimensionMismatch {
            expected: cone.dim,
            got: point.dim(),
        });
    }
    let facets = cone.facets();
    for eq in &facets.equations {
        let v = eq.dot(point);
        if !v.is_zero() {
            let separator = if v.is_positive() { -eq.clone() } else { eq.clone() };
            return Ok(Membership::Outside { separator });
        }
    }
    let mut saturated = Vec::new();
    for (i, f) in facets.inequalities.iter().enumerate() {
        let v = f.dot(point);
        if v.is_negative() {
            return Ok(Membership::Outside { separator: f.clone() });
        }
        if v.is_zero() {
            saturated.push(i);
        }
    }
    Ok(Membership::Inside { saturated })
}

/// Checks a separating certificate exactly against a point and a generator list.
pub fn verify_separator(separator: &Vector, point: &Vector, rays: &[Vector]) -> bool {
    separator.dot(point).is_negative() && rays.iter().all(|r| !separator.dot(r).is_negative())
}

/// Bounded polyhedron with optional vertex and inequality descriptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Option<Vec<Vector>>,
    pub inequalities: Option<Vec<Halfspace>>,
    /// Affine hull; empty for full-dimensional polytopes.
    pub equations: Vec<Hyperplane>,
}

impl Polytope {
    pub fn from_vertices(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        check_dims(dim, &vertices)?;
        let mut vertices = vertices;
        sort_canonical(&mut vertices);
        Ok(Polytope {
            dim,
            vertices: Some(vertices),
            inequalities: None,
            equations: Vec::new(),
        })
    }

    pub fn from_inequalities(inequalities: Vec<Halfspace>, equations: Vec<Hyperplane>) -> Result<Self> {
        let dim = inequalities
            .first()
            .map(|h| h.normal.dim())
            .or_else(|| equations.first().map(|h| h.normal.dim()))
            .ok_or_else(|| Error::Invalid("no constraints given".into()))?;
        Ok(Polytope {
            dim,
            vertices: None,
            inequalities: Some(inequalities),
            equations,
        })
    }

    /// Fills in whichever description is missing.
    pub fn complete(mut self) -> Result<Self> {
        if self.vertices.is_none() {
            let ineq = self.inequalities.clone().unwrap_or_default();
            self.vertices = Some(enumerate_vertices(&ineq, &self.equations)?);
        }
        if self.inequalities.is_none() {
            let (ineq, eq) = facets_of_points(self.dim, self.vertices.as_deref().unwrap_or(&[]));
            self.inequalities = Some(ineq);
            self.equations = eq;
        }
        Ok(self)
    }
}

fn lift(points: &[Vector]) -> Vec<Vector> {
    points
        .iter()
        .map(|p| {
            let mut v = p.entries().to_vec();
            v.push(Scalar::one());
            Vector::new(v)
        })
        .collect()
}

/// Splits a homogeneous functional `(a, b)` with `a · x + b >= 0` into
/// `(-a) · x <= b`.
fn split_functional(f: &Vector) -> (Vector, Scalar) {
    let d = f.dim() - 1;
    let normal: Vector = f[..d].iter().map(|x| -x).collect();
    (normal, f[d].clone())
}

/// Facet inequalities and affine-hull equations of the convex hull of `points`.
pub fn facets_of_points(dim: usize, points: &[Vector]) -> (Vec<Halfspace>, Vec<Hyperplane>) {
    if points.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let (lineality, rays) = dual_generators(dim + 1, &lift(points));
    let ineq = rays
        .iter()
        .map(|f| {
            let (n, o) = split_functional(f);
            Halfspace::le(n, o)
        })
        .collect();
    let eq = lineality
        .iter()
        .map(|f| {
            let (n, o) = split_functional(f);
            Hyperplane::new(n, o)
        })
        .collect();
    (ineq, eq)
}

/// Extreme points of the convex hull of `points`, canonically sorted.
pub fn extreme_points(points: &[Vector]) -> Vec<Vector> {
    let mut pts = points.to_vec();
    sort_canonical(&mut pts);
    if pts.len() <= 1 {
        return pts;
    }
    let dim = pts[0].dim();
    let lifted = lift(&pts);
    let (lineality, rays) = dual_generators(dim + 1, &lifted);
    let facets = ConeFacets {
        inequalities: rays,
        equations: lineality,
    };
    let keep = extreme_rays_of(&lifted, &facets, dim + 1);
    pts.into_iter()
        .zip(lifted)
        .filter(|(_, l)| keep.contains(l))
        .map(|(p, _)| p)
        .collect()
}
