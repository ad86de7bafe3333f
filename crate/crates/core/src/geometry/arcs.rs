//! Conics, pencil arcs and hierarchical arcs, each with an exhaustive
//! verifier that reports a witness on failure.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::combinatorics::Combinations;
use crate::field::{FieldSpec, Repr};
use crate::projective::{normalize_coords, pencil_through, points_independent, Hyperplane, Pencil, ProjectivePoint, Subspace};

/// {(1, t, t^2) : t ∈ GF(q)} ∪ {(0, 0, 1)}, a (q+1)-arc of PG(2, q).
pub fn conic(spec: &FieldSpec) -> Vec<ProjectivePoint> {
    let mut pts: Vec<ProjectivePoint> = (0..spec.order())
        .map(|t| normalize_coords(spec, &[1, t, spec.mul(t, t)]).unwrap())
        .collect();
    pts.push(normalize_coords(spec, &[0, 0, 1]).unwrap());
    pts.sort();
    pts
}

/// The conic, completed by its nucleus (0, 1, 0) when q is even.
pub fn conic_arc(spec: &FieldSpec) -> Vec<ProjectivePoint> {
    let mut pts = conic(spec);
    if spec.p() == 2 {
        pts.push(normalize_coords(spec, &[0, 1, 0]).unwrap());
        pts.sort();
    }
    pts
}

/// Every point of a line of PG(2, q), in canonical order.
pub fn line_points(spec: &FieldSpec, line: &Hyperplane) -> Vec<ProjectivePoint> {
    let sub = line.to_subspace(spec);
    let (u, v) = (&sub.basis()[0], &sub.basis()[1]);
    let mut pts = vec![normalize_coords(spec, u).unwrap()];
    for lambda in 0..spec.order() {
        let w: Vec<Repr> = u.iter().zip(v).map(|(&a, &b)| spec.add(spec.mul(lambda, a), b)).collect();
        pts.push(normalize_coords(spec, &w).unwrap());
    }
    pts.sort();
    pts.dedup();
    pts
}

/// A failed condition and the points that break it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: u8,
    pub witness: Vec<ProjectivePoint>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<&[Repr]> = self.witness.iter().map(|p| p.coords()).collect();
        write!(f, "condition ({}) fails: {} at {:?}", self.condition, self.detail, coords)
    }
}

fn violation(condition: u8, witness: Vec<ProjectivePoint>, detail: impl Into<String>) -> Violation {
    Violation { condition, witness, detail: detail.into() }
}

fn check_points(points: &[ProjectivePoint], r: usize) -> Result<(), Violation> {
    let mut seen = HashSet::new();
    for p in points {
        if p.coords().len() != r + 1 {
            return Err(violation(0, vec![p.clone()], format!("point is not in PG({r}, q)")));
        }
        if !seen.insert(p) {
            return Err(violation(0, vec![p.clone()], "point listed twice"));
        }
    }
    Ok(())
}

/// (r+1)-subsets of `points` that `skip` does not exclude must be independent.
fn independent_subsets(
    spec: &FieldSpec,
    points: &[ProjectivePoint],
    size: usize,
    skip: impl Fn(&[usize]) -> bool,
) -> Option<Vec<ProjectivePoint>> {
    Combinations::new(points.len(), size).find_map(|idx| {
        if skip(&idx) {
            return None;
        }
        let sel: Vec<&ProjectivePoint> = idx.iter().map(|&i| &points[i]).collect();
        (!points_independent(spec, &sel)).then(|| sel.into_iter().cloned().collect())
    })
}

/// Conditions (11)-(13) for `points` with respect to `pencil` in PG(r, q).
pub fn verify_parc(spec: &FieldSpec, points: &[ProjectivePoint], pencil: &Pencil, r: usize) -> Result<(), Violation> {
    check_points(points, r)?;
    let mut member = Vec::with_capacity(points.len());
    for p in points {
        match pencil.member_of(spec, p) {
            Some(i) => member.push(i),
            None => return Err(violation(12, vec![p.clone()], "point lies in the pencil center, so in two members")),
        }
    }
    for i in 0..pencil.members().len() {
        let on: Vec<ProjectivePoint> = points.iter().zip(&member).filter(|(_, &m)| m == i).map(|(p, _)| p.clone()).collect();
        if let Some(w) = independent_subsets(spec, &on, r, |_| false) {
            return Err(violation(11, w, format!("points on pencil member {i} are not an arc of the member")));
        }
    }
    let same_member = |idx: &[usize]| idx.iter().all(|&i| member[i] == member[idx[0]]);
    if let Some(w) = independent_subsets(spec, points, r + 1, same_member) {
        return Err(violation(13, w, "points spread over several members are dependent"));
    }
    Ok(())
}

/// Conditions (14)-(16) for K1 off `psi` and K2 on it in PG(r, q).
pub fn verify_harc(
    spec: &FieldSpec,
    k1: &[ProjectivePoint],
    k2: &[ProjectivePoint],
    psi: &Hyperplane,
    r: usize,
) -> Result<(), Violation> {
    let all: Vec<ProjectivePoint> = k1.iter().chain(k2).cloned().collect();
    check_points(&all, r)?;
    if let Some(p) = k1.iter().find(|p| psi.contains(spec, p)) {
        return Err(violation(14, vec![p.clone()], "K1 point lies on the hyperplane"));
    }
    if let Some(p) = k2.iter().find(|p| !psi.contains(spec, p)) {
        return Err(violation(15, vec![p.clone()], "K2 point lies off the hyperplane"));
    }
    if let Some(w) = independent_subsets(spec, k1, r + 1, |_| false) {
        return Err(violation(14, w, "K1 is not an arc"));
    }
    if let Some(w) = independent_subsets(spec, k2, r, |_| false) {
        return Err(violation(15, w, "K2 is not an arc of the hyperplane"));
    }
    let n1 = k1.len();
    if let Some(w) = independent_subsets(spec, &all, r + 1, |idx| idx.iter().all(|&i| i >= n1)) {
        return Err(violation(16, w, "points not all on the hyperplane are dependent"));
    }
    Ok(())
}

/// A point set satisfying (11)-(13) for its pencil, with the intersection
/// size on every pencil member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilArc {
    spec: FieldSpec,
    r: usize,
    points: Vec<ProjectivePoint>,
    pencil: Pencil,
    profile: Vec<usize>,
}

impl PencilArc {
    /// Verifies (11)-(13) before accepting the set.
    pub fn new(spec: &FieldSpec, r: usize, points: Vec<ProjectivePoint>, pencil: Pencil) -> Result<Self, GeometryError> {
        verify_parc(spec, &points, &pencil, r).map_err(GeometryError::Violation)?;
        let mut points = points;
        points.sort();
        let mut profile = vec![0; pencil.members().len()];
        for p in &points {
            profile[pencil.member_of(spec, p).unwrap()] += 1;
        }
        Ok(PencilArc { spec: spec.clone(), r, points, pencil, profile })
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

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    /// h_i for every pencil member, in pencil order.
    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// The nonzero h_i, in pencil order.
    pub fn nonzero_profile(&self) -> Vec<usize> {
        self.profile.iter().copied().filter(|&h| h > 0).collect()
    }

    /// (m, h) when the nonzero h_i are all equal to h.
    pub fn regular_type(&self) -> Option<(usize, usize)> {
        let nz = self.nonzero_profile();
        let h = *nz.first()?;
        nz.iter().all(|&x| x == h).then_some((nz.len(), h))
    }

    /// Points on each nonempty member, as (member index, points).
    pub fn groups(&self) -> Vec<(usize, Vec<ProjectivePoint>)> {
        (0..self.profile.len())
            .filter(|&i| self.profile[i] > 0)
            .map(|i| {
                let pts = self
                    .points
                    .iter()
                    .filter(|p| self.pencil.member_of(&self.spec, p) == Some(i))
                    .cloned()
                    .collect();
                (i, pts)
            })
            .collect()
    }
}

/// K1 off the hyperplane psi and K2 on it, satisfying (14)-(16).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchicalArc {
    spec: FieldSpec,
    r: usize,
    k1: Vec<ProjectivePoint>,
    k2: Vec<ProjectivePoint>,
    psi: Hyperplane,
}

impl HierarchicalArc {
    pub fn new(
        spec: &FieldSpec,
        r: usize,
        k1: Vec<ProjectivePoint>,
        k2: Vec<ProjectivePoint>,
        psi: Hyperplane,
    ) -> Result<Self, GeometryError> {
        verify_harc(spec, &k1, &k2, &psi, r).map_err(GeometryError::Violation)?;
        let (mut k1, mut k2) = (k1, k2);
        k1.sort();
        k2.sort();
        Ok(HierarchicalArc { spec: spec.clone(), r, k1, k2, psi })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn k1(&self) -> &[ProjectivePoint] {
        &self.k1
    }

    pub fn k2(&self) -> &[ProjectivePoint] {
        &self.k2
    }

    pub fn psi(&self) -> &Hyperplane {
        &self.psi
    }

    pub fn total(&self) -> usize {
        self.k1.len() + self.k2.len()
    }
}

#[derive(Serialize, Deserialize)]
struct PencilFile {
    center: Vec<Vec<Repr>>,
    members: Vec<Hyperplane>,
}

#[derive(Serialize, Deserialize)]
struct ParcFile {
    kind: String,
    field: FieldSpec,
    ambient_dim: usize,
    points: Vec<ProjectivePoint>,
    pencil: PencilFile,
    profile: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct HarcFile {
    kind: String,
    field: FieldSpec,
    ambient_dim: usize,
    k1_points: Vec<ProjectivePoint>,
    k2_points: Vec<ProjectivePoint>,
    psi: Hyperplane,
    profile: [usize; 2],
}

impl Serialize for PencilArc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParcFile {
            kind: "parc".into(),
            field: self.spec.clone(),
            ambient_dim: self.r,
            points: self.points.clone(),
            pencil: PencilFile { center: self.pencil.center().basis().to_vec(), members: self.pencil.members().to_vec() },
            profile: self.profile.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PencilArc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let f = ParcFile::deserialize(d)?;
        if f.kind != "parc" {
            return Err(D::Error::custom(format!("expected kind \"parc\", got {:?}", f.kind)));
        }
        let spec = f.field;
        let fix = |p: ProjectivePoint| ProjectivePoint::from_canonical(&spec, p.coords().to_vec()).map_err(D::Error::custom);
        let points = f.points.into_iter().map(fix).collect::<Result<Vec<_>, _>>()?;
        let center = Subspace::span(&spec, f.ambient_dim + 1, &f.pencil.center).map_err(D::Error::custom)?;
        let members = f
            .pencil
            .members
            .iter()
            .map(|h| Hyperplane::from_normal(&spec, h.normal().coords()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let pencil = Pencil::from_parts(&spec, center, members).map_err(D::Error::custom)?;
        let arc = PencilArc::new(&spec, f.ambient_dim, points, pencil).map_err(D::Error::custom)?;
        if arc.profile != f.profile {
            return Err(D::Error::custom(format!("stored profile {:?} does not match points {:?}", f.profile, arc.profile)));
        }
        Ok(arc)
    }
}

impl Serialize for HierarchicalArc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HarcFile {
            kind: "harc".into(),
            field: self.spec.clone(),
            ambient_dim: self.r,
            k1_points: self.k1.clone(),
            k2_points: self.k2.clone(),
            psi: self.psi.clone(),
            profile: [self.k1.len(), self.k2.len()],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HierarchicalArc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let f = HarcFile::deserialize(d)?;
        if f.kind != "harc" {
            return Err(D::Error::custom(format!("expected kind \"harc\", got {:?}", f.kind)));
        }
        let spec = f.field;
        let fix = |p: ProjectivePoint| ProjectivePoint::from_canonical(&spec, p.coords().to_vec()).map_err(D::Error::custom);
        let k1 = f.k1_points.into_iter().map(fix).collect::<Result<Vec<_>, _>>()?;
        let k2 = f.k2_points.into_iter().map(fix).collect::<Result<Vec<_>, _>>()?;
        let psi = Hyperplane::from_normal(&spec, f.psi.normal().coords()).map_err(D::Error::custom)?;
        let arc = HierarchicalArc::new(&spec, f.ambient_dim, k1, k2, psi).map_err(D::Error::custom)?;
        if [arc.k1.len(), arc.k2.len()] != f.profile {
            return Err(D::Error::custom("stored profile does not match the point sets"));
        }
        Ok(arc)
    }
}

/// Pencil of lines through a point of PG(2, q).
pub fn plane_pencil(spec: &FieldSpec, center: &ProjectivePoint) -> Pencil {
    let c = Subspace::of_points(spec, std::slice::from_ref(center)).expect("one point spans a point");
    pencil_through(&c, 2, spec).expect("a point has codimension 2 in a plane")
}
