//! Finite projective spaces PG(r, q): canonical points, subspaces, hyperplanes,
//! pencils, and the independence / arc predicates built on them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::Combinations;
use crate::field::{FieldSpec, Repr};
use crate::linalg::{dot, rank_of, reduced_basis, FMatrix, FVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("expected projective dimension {expected}, got {got}")]
    BadDimension { expected: isize, got: isize },
    #[error("point has {got} coordinates, expected {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("coordinate {0} is not a field element")]
    BadCoordinate(Repr),
}

/// Canonical representative of a point: the first nonzero coordinate is 1.
///
/// Ordering is lexicographic on the coordinate reprs, which is the canonical
/// point order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint(Vec<Repr>);

impl ProjectivePoint {
    pub fn coords(&self) -> &[Repr] {
        &self.0
    }

    pub fn to_vector(&self, spec: &FieldSpec) -> FVector {
        FVector::new(spec, self.0.clone()).expect("canonical coordinates are field elements")
    }

    /// Checks that the coordinates are already canonical over `spec`.
    pub fn from_canonical(spec: &FieldSpec, coords: Vec<Repr>) -> Result<Self, ProjectiveError> {
        let p = normalize_coords(spec, &coords)?;
        if p.0 != coords {
            return Err(ProjectiveError::BadCoordinate(coords.iter().copied().find(|&c| c != 0).unwrap_or(0)));
        }
        Ok(p)
    }
}

/// Scales `coords` so the leading nonzero coordinate is 1.
pub fn normalize_coords(spec: &FieldSpec, coords: &[Repr]) -> Result<ProjectivePoint, ProjectiveError> {
    if let Some(&bad) = coords.iter().find(|&&c| !spec.contains(c)) {
        return Err(ProjectiveError::BadCoordinate(bad));
    }
    let lead = *coords.iter().find(|&&c| c != 0).ok_or(ProjectiveError::ZeroVector)?;
    let inv = spec.inv(lead).expect("nonzero");
    Ok(ProjectivePoint(coords.iter().map(|&c| spec.mul(c, inv)).collect()))
}

pub fn normalize(v: &FVector) -> Result<ProjectivePoint, ProjectiveError> {
    normalize_coords(v.spec(), v.coords())
}

/// All (q^{r+1}-1)/(q-1) points of PG(r, q) in canonical order.
pub fn enumerate_points(r: usize, spec: &FieldSpec) -> Vec<ProjectivePoint> {
    let q = spec.order() as usize;
    let len = r + 1;
    let mut out = Vec::new();
    // Leading 1 at position `lead`; zeros before it, free coordinates after.
    for lead in (0..len).rev() {
        let free = len - lead - 1;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut coords = vec![0; len];
            coords[lead] = 1;
            let mut rest = idx;
            for pos in (lead + 1..len).rev() {
                coords[pos] = (rest % q) as Repr;
                rest /= q;
            }
            out.push(ProjectivePoint(coords));
        }
    }
    out
}

pub fn point_count(r: usize, q: u32) -> usize {
    let q = q as usize;
    (q.pow(r as u32 + 1) - 1) / (q - 1)
}

fn check_coords(points: &[ProjectivePoint], len: usize) -> Result<(), ProjectiveError> {
    for p in points {
        if p.0.len() != len {
            return Err(ProjectiveError::CoordinateCount {
                expected: len,
                got: p.0.len(),
            });
        }
    }
    Ok(())
}

pub fn points_independent(spec: &FieldSpec, points: &[&ProjectivePoint]) -> bool {
    let slices: Vec<&[Repr]> = points.iter().map(|p| p.coords()).collect();
    rank_of(spec, &slices) == points.len()
}

/// First t-subset (by index) whose coordinate vectors are dependent.
pub fn first_dependent_subset(spec: &FieldSpec, points: &[ProjectivePoint], t: usize) -> Option<Vec<usize>> {
    Combinations::new(points.len(), t).find(|idx| {
        let sel: Vec<&ProjectivePoint> = idx.iter().map(|&i| &points[i]).collect();
        !points_independent(spec, &sel)
    })
}

/// True iff every t of the points are linearly independent.
pub fn is_t_independent_set(spec: &FieldSpec, points: &[ProjectivePoint], t: usize) -> Result<bool, ProjectiveError> {
    if points.len() < t {
        return Err(ProjectiveError::TooFewPoints {
            need: t,
            got: points.len(),
        });
    }
    Ok(first_dependent_subset(spec, points, t).is_none())
}

/// A k-arc of PG(r, q): every r+1 of its points are independent.
pub fn is_arc(spec: &FieldSpec, points: &[ProjectivePoint], r: usize) -> Result<bool, ProjectiveError> {
    if let Some(p) = points.first() {
        check_coords(points, p.0.len())?;
        if p.0.len() != r + 1 {
            return Err(ProjectiveError::CoordinateCount {
                expected: r + 1,
                got: p.0.len(),
            });
        }
    }
    is_t_independent_set(spec, points, r + 1)
}

/// A projective subspace given by a basis of its underlying vector space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    spec: FieldSpec,
    ambient_len: usize,
    basis: Vec<Vec<Repr>>,
}

impl Subspace {
    /// Span of the given vectors; the stored basis is the reduced echelon basis,
    /// so equal subspaces compare equal.
    pub fn span(spec: &FieldSpec, ambient_len: usize, vectors: &[Vec<Repr>]) -> Result<Self, ProjectiveError> {
        for v in vectors {
            if v.len() != ambient_len {
                return Err(ProjectiveError::CoordinateCount {
                    expected: ambient_len,
                    got: v.len(),
                });
            }
        }
        let basis = reduced_basis(spec, vectors, ambient_len);
        Ok(Subspace {
            spec: spec.clone(),
            ambient_len,
            basis,
        })
    }

    pub fn of_points(spec: &FieldSpec, points: &[ProjectivePoint]) -> Result<Self, ProjectiveError> {
        let len = points.first().map_or(0, |p| p.0.len());
        Self::span(spec, len, &points.iter().map(|p| p.0.clone()).collect::<Vec<_>>())
    }

    pub fn basis(&self) -> &[Vec<Repr>] {
        &self.basis
    }

    /// Projective dimension: one less than the vector dimension.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        let mut rows: Vec<&[Repr]> = self.basis.iter().map(|b| b.as_slice()).collect();
        let before = rows.len();
        rows.push(p.coords());
        rank_of(&self.spec, &rows) == before
    }

    /// Normal vectors spanning the annihilator of the subspace.
    pub fn annihilator(&self) -> Vec<FVector> {
        if self.basis.is_empty() {
            return FMatrix::identity(&self.spec, self.ambient_len)
                .entries()
                .chunks(self.ambient_len)
                .map(|c| FVector::new(&self.spec, c.to_vec()).unwrap())
                .collect();
        }
        let m = FMatrix::new(
            &self.spec,
            self.basis.len(),
            self.ambient_len,
            self.basis.iter().flatten().copied().collect(),
        )
        .expect("basis is well formed");
        m.kernel()
    }
}

/// A hyperplane given by its normal vector: {x : normal . x = 0}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane {
    normal: ProjectivePoint,
}

impl Hyperplane {
    pub fn from_normal(spec: &FieldSpec, normal: &[Repr]) -> Result<Self, ProjectiveError> {
        Ok(Hyperplane {
            normal: normalize_coords(spec, normal)?,
        })
    }

    pub fn normal(&self) -> &ProjectivePoint {
        &self.normal
    }

    pub fn contains(&self, spec: &FieldSpec, p: &ProjectivePoint) -> bool {
        dot(spec, self.normal.coords(), p.coords()) == 0
    }

    pub fn to_subspace(&self, spec: &FieldSpec) -> Subspace {
        let len = self.normal.0.len();
        let m = FMatrix::new(spec, 1, len, self.normal.0.clone()).expect("normal is well formed");
        let basis: Vec<Vec<Repr>> = m.kernel().into_iter().map(|v| v.into_coords()).collect();
        Subspace::span(spec, len, &basis).expect("kernel vectors have ambient length")
    }

    /// Hyperplane spanned by r independent points of PG(r, q).
    pub fn through(spec: &FieldSpec, points: &[ProjectivePoint]) -> Result<Self, ProjectiveError> {
        let sub = Subspace::of_points(spec, points)?;
        let len = points.first().map_or(0, |p| p.0.len());
        if sub.dim() != len as isize - 2 {
            return Err(ProjectiveError::BadDimension {
                expected: len as isize - 2,
                got: sub.dim(),
            });
        }
        let ann = sub.annihilator();
        Hyperplane::from_normal(spec, ann[0].coords())
    }
}

/// Line of PG(2, q) through two distinct points, by cross product.
pub fn join(spec: &FieldSpec, a: &ProjectivePoint, b: &ProjectivePoint) -> Result<Hyperplane, ProjectiveError> {
    let c = cross(spec, a.coords(), b.coords());
    Hyperplane::from_normal(spec, &c)
}

/// Intersection point of two distinct lines of PG(2, q).
pub fn meet(spec: &FieldSpec, l: &Hyperplane, m: &Hyperplane) -> Result<ProjectivePoint, ProjectiveError> {
    normalize_coords(spec, &cross(spec, l.normal.coords(), m.normal.coords()))
}

pub fn cross(spec: &FieldSpec, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let m = |x, y| spec.mul(x, y);
    vec![
        spec.sub(m(a[1], b[2]), m(a[2], b[1])),
        spec.sub(m(a[2], b[0]), m(a[0], b[2])),
        spec.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

/// Determinant test for three points of a plane.
#[inline]
pub fn collinear(spec: &FieldSpec, a: &[Repr], b: &[Repr], c: &[Repr]) -> bool {
    dot(spec, &cross(spec, a, b), c) == 0
}

/// The q+1 hyperplanes through a codimension-2 subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    center: Subspace,
    members: Vec<Hyperplane>,
}

impl Pencil {
    pub fn center(&self) -> &Subspace {
        &self.center
    }

    pub fn members(&self) -> &[Hyperplane] {
        &self.members
    }

    /// Index of the unique member containing `p`, or `None` when `p` lies in
    /// the center (and so in every member).
    pub fn member_of(&self, spec: &FieldSpec, p: &ProjectivePoint) -> Option<usize> {
        let hits: Vec<usize> = self
            .members
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains(spec, p))
            .map(|(i, _)| i)
            .collect();
        (hits.len() == 1).then(|| hits[0])
    }

    /// Rebuilds a pencil from stored parts, checking its invariants.
    pub fn from_parts(spec: &FieldSpec, center: Subspace, members: Vec<Hyperplane>) -> Result<Self, ProjectiveError> {
        let r = center.ambient_len as isize - 1;
        let expected = pencil_through(&center, r as usize, spec)?;
        let mut a = members.clone();
        a.sort();
        let mut b = expected.members.clone();
        b.sort();
        if a != b {
            return Err(ProjectiveError::BadDimension {
                expected: b.len() as isize,
                got: a.len() as isize,
            });
        }
        Ok(Pencil { center, members })
    }
}

/// All hyperplanes of PG(r, q) containing `center` (projective dimension r-2),
/// in canonical order of their normals.
pub fn pencil_through(center: &Subspace, r: usize, spec: &FieldSpec) -> Result<Pencil, ProjectiveError> {
    if center.ambient_len != r + 1 || center.dim() != r as isize - 2 {
        return Err(ProjectiveError::BadDimension {
            expected: r as isize - 2,
            got: center.dim(),
        });
    }
    let ann = center.annihilator();
    debug_assert_eq!(ann.len(), 2);
    let (u, v) = (&ann[0], &ann[1]);
    let mut members = vec![Hyperplane::from_normal(spec, u.coords())?];
    for lambda in 0..spec.order() {
        let w: Vec<Repr> = u
            .coords()
            .iter()
            .zip(v.coords())
            .map(|(&a, &b)| spec.add(spec.mul(lambda, a), b))
            .collect();
        members.push(Hyperplane::from_normal(spec, &w)?);
    }
    members.sort();
    members.dedup();
    Ok(Pencil {
        center: center.clone(),
        members,
    })
}

/// PG(r, q) with an index over its points.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    spec: FieldSpec,
    r: usize,
    points: Vec<ProjectivePoint>,
    index: HashMap<ProjectivePoint, usize>,
}

impl ProjectiveSpace {
    pub fn new(spec: &FieldSpec, r: usize) -> Self {
        let points = enumerate_points(r, spec);
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        ProjectiveSpace {
            spec: spec.clone(),
            r,
            points,
            index,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjectivePoint {
        &self.points[i]
    }

    pub fn index_of(&self, p: &ProjectivePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Every hyperplane, in canonical order of normals (same order as points).
    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> + '_ {
        self.points.iter().map(|p| Hyperplane { normal: p.clone() })
    }

    pub fn points_on<'a>(&'a self, h: &'a Hyperplane) -> impl Iterator<Item = usize> + 'a {
        (0..self.points.len()).filter(move |&i| h.contains(&self.spec, &self.points[i]))
    }
}
