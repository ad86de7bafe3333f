//! The subfield Baer subplane of PG(2, q^2) and the structures hung off it:
//! affine segments, the affine 3-space of segments on the pencil lines, the
//! parallel class S, and the derived planes Θ(S) and Θ*(S).
//!
//! Coordinates: GF(q) is the subfield of GF(q^2), ω is the first element
//! outside it, and every y splits uniquely as y1 + y2·ω. The infinite line is
//! z = 0, the pencil center is P = (0, 1, 0), and the pencil lines meeting
//! the subplane are x = c·z for c in GF(q). Segment (c, y2) is
//! {(c, y1 + y2·ω, 1) : y1 ∈ GF(q)}.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::arcs::plane_pencil;
use super::incidence::IncidenceStructure;
use super::GeometryError;
use crate::field::{prime_power, FieldSpec, Repr};
use crate::projective::{enumerate_points, normalize_coords, Hyperplane, Pencil, ProjectivePoint};

/// Largest q handled; every component is re-verified exhaustively.
pub const MAX_BAER_ORDER: u32 = 8;

#[derive(Debug, Clone)]
pub struct BaerStructure {
    q: usize,
    spec: FieldSpec,
    sub: Vec<Repr>,
    sub_index: Vec<Option<usize>>,
    omega: Repr,
    split: Vec<(usize, usize)>,
    subplane: Vec<ProjectivePoint>,
    l_inf: Hyperplane,
    center: ProjectivePoint,
    pencil_lines: Vec<Hyperplane>,
    segments: Vec<Vec<ProjectivePoint>>,
    g_segments: Vec<Vec<ProjectivePoint>>,
    affine_subplanes: Vec<Vec<ProjectivePoint>>,
    theta: IncidenceStructure,
    theta_star: IncidenceStructure,
}

/// Counts recorded while verifying a structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaerSummary {
    pub q: usize,
    pub field: FieldSpec,
    pub plane_points: usize,
    pub subplane_points: usize,
    pub subplane_lines: usize,
    pub tangent_lines: usize,
    pub affine_space_points: usize,
    pub affine_space_lines: usize,
    pub segments: usize,
    pub theta_points: usize,
    pub theta_lines: usize,
    pub theta_star_points: usize,
    pub theta_star_lines: usize,
    pub center: ProjectivePoint,
    pub infinite_line: Hyperplane,
}

fn bad(msg: impl Into<String>) -> GeometryError {
    GeometryError::StructureCheck(msg.into())
}

/// Builds the structure for PG(2, q^2) and verifies every incidence claim.
pub fn baer_structure(q: u32) -> Result<BaerStructure, GeometryError> {
    let (_, m) = prime_power(q).ok_or(GeometryError::UnsupportedOrder(q))?;
    if q > MAX_BAER_ORDER {
        return Err(GeometryError::UnsupportedOrder(q));
    }
    let spec = FieldSpec::of_order(q * q)?;
    let qs = q as usize;
    let mut sub = spec.subfield(m).expect("GF(q) is a subfield of GF(q^2)");
    sub.sort_unstable();
    let mut sub_index = vec![None; (q * q) as usize];
    for (i, &s) in sub.iter().enumerate() {
        sub_index[s as usize] = Some(i);
    }
    let omega = (0..q * q).find(|&e| sub_index[e as usize].is_none()).unwrap();
    let mut split = vec![(usize::MAX, usize::MAX); (q * q) as usize];
    for (i, &a) in sub.iter().enumerate() {
        for (j, &b) in sub.iter().enumerate() {
            split[spec.add(a, spec.mul(b, omega)) as usize] = (i, j);
        }
    }

    let mut subplane = vec![normalize_coords(&spec, &[0, 0, 1]).unwrap()];
    for &c in &sub {
        subplane.push(normalize_coords(&spec, &[0, 1, c]).unwrap());
        for &b in &sub {
            subplane.push(normalize_coords(&spec, &[1, b, c]).unwrap());
        }
    }
    subplane.sort();

    let l_inf = Hyperplane::from_normal(&spec, &[0, 0, 1])?;
    let center = normalize_coords(&spec, &[0, 1, 0])?;
    let pencil_lines: Vec<Hyperplane> = sub
        .iter()
        .map(|&c| Hyperplane::from_normal(&spec, &[1, 0, spec.neg(c)]))
        .collect::<Result<_, _>>()?;

    let affine = |x: Repr, y: Repr| normalize_coords(&spec, &[x, y, 1]).unwrap();
    let segment_of = |x: Repr, y: Repr| -> usize {
        let xi = sub_index[x as usize].expect("x in GF(q)");
        xi * qs + split[y as usize].1
    };
    let mut segments = Vec::with_capacity(qs * qs);
    for &x in &sub {
        for &y2 in &sub {
            segments.push(sub.iter().map(|&y1| affine(x, spec.add(y1, spec.mul(y2, omega)))).collect::<Vec<_>>());
        }
    }
    let affine_subplanes: Vec<Vec<ProjectivePoint>> =
        (0..qs).map(|j| (0..qs).flat_map(|xi| segments[xi * qs + j].iter().cloned()).collect()).collect();

    // Lines of Θ(S): the q columns of segments on one l_i, and the segments
    // met by each line y = m x + b of Π not through P. Each trace remembers
    // where its generating lines meet the infinite line.
    let mut traces: HashMap<Vec<usize>, HashSet<ProjectivePoint>> = HashMap::new();
    for mslope in 0..q * q {
        for b in 0..q * q {
            let mut t: Vec<usize> = sub.iter().map(|&x| segment_of(x, spec.add(spec.mul(mslope, x), b))).collect();
            t.sort_unstable();
            traces.entry(t).or_default().insert(normalize_coords(&spec, &[1, mslope, 0]).unwrap());
        }
    }
    let verticals: Vec<Vec<usize>> = (0..qs).map(|xi| (xi * qs..(xi + 1) * qs).collect()).collect();
    let mut lines: Vec<Vec<usize>> = traces.keys().cloned().collect();
    lines.extend(verticals.iter().cloned());
    let theta = IncidenceStructure::new(qs * qs, lines);

    // Θ*(S): each non-vertical parallel class of Θ(S) gets the segment G of
    // the infinite line where its generating lines land; the vertical class
    // gets P.
    let mut g_segments: Vec<Vec<ProjectivePoint>> = vec![Vec::new(); qs];
    let mut star_lines: Vec<Vec<usize>> = Vec::new();
    for class in theta.parallel_classes() {
        let members: Vec<&Vec<usize>> = class.iter().map(|&l| &theta.lines()[l]).collect();
        if members.iter().any(|l| verticals.contains(l)) {
            for l in members {
                let mut l = l.clone();
                l.push(qs * qs + qs);
                star_lines.push(l);
            }
            continue;
        }
        let mut g: Vec<ProjectivePoint> =
            members.iter().flat_map(|l| traces[*l].iter().cloned()).collect::<HashSet<_>>().into_iter().collect();
        g.sort();
        let s = split[g[0].coords()[1] as usize].1;
        if !g_segments[s].is_empty() {
            return Err(bad("two parallel classes land on the same infinite segment"));
        }
        g_segments[s] = g;
        for l in members {
            let mut l = l.clone();
            l.push(qs * qs + s);
            star_lines.push(l);
        }
    }
    star_lines.push((qs * qs..qs * qs + qs + 1).collect());
    let theta_star = IncidenceStructure::new(qs * qs + qs + 1, star_lines);

    let s = BaerStructure {
        q: qs,
        spec,
        sub,
        sub_index,
        omega,
        split,
        subplane,
        l_inf,
        center,
        pencil_lines,
        segments,
        g_segments,
        affine_subplanes,
        theta,
        theta_star,
    };
    s.verify()?;
    Ok(s)
}

impl BaerStructure {
    pub fn q(&self) -> usize {
        self.q
    }

    /// GF(q^2).
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Reprs of the subfield GF(q), increasing.
    pub fn subfield(&self) -> &[Repr] {
        &self.sub
    }

    pub fn omega(&self) -> Repr {
        self.omega
    }

    pub fn in_subfield(&self, e: Repr) -> bool {
        self.sub_index[e as usize].is_some()
    }

    /// (y1, y2) subfield indices with y = y1 + y2·ω.
    pub fn split(&self, y: Repr) -> (usize, usize) {
        self.split[y as usize]
    }

    pub fn subplane(&self) -> &[ProjectivePoint] {
        &self.subplane
    }

    pub fn in_subplane(&self, p: &ProjectivePoint) -> bool {
        p.coords().iter().all(|&c| self.in_subfield(c))
    }

    pub fn infinite_line(&self) -> &Hyperplane {
        &self.l_inf
    }

    pub fn center(&self) -> &ProjectivePoint {
        &self.center
    }

    /// l_1..l_q: the lines x = c·z, c ∈ GF(q).
    pub fn pencil_lines(&self) -> &[Hyperplane] {
        &self.pencil_lines
    }

    /// All q^2+1 lines of Π through P.
    pub fn pencil(&self) -> Pencil {
        plane_pencil(&self.spec, &self.center)
    }

    /// Segment (xi, y2i) sits at index xi·q + y2i.
    pub fn segments(&self) -> &[Vec<ProjectivePoint>] {
        &self.segments
    }

    /// G_s on the infinite line, s indexing the subfield.
    pub fn infinite_segments(&self) -> &[Vec<ProjectivePoint>] {
        &self.g_segments
    }

    /// A_j: the affine points (x, y1 + w_j·ω) with x, y1 ∈ GF(q).
    pub fn affine_subplanes(&self) -> &[Vec<ProjectivePoint>] {
        &self.affine_subplanes
    }

    pub fn theta(&self) -> &IncidenceStructure {
        &self.theta
    }

    /// Points 0..q^2 are segments, q^2 + s is G_s, q^2 + q is P.
    pub fn theta_star(&self) -> &IncidenceStructure {
        &self.theta_star
    }

    /// Segment indices on each pencil line l_i: the vertical parallel class U.
    pub fn vertical_class(&self) -> Vec<Vec<usize>> {
        (0..self.q).map(|xi| (xi * self.q..(xi + 1) * self.q).collect()).collect()
    }

    pub fn star_center_index(&self) -> usize {
        self.q * self.q + self.q
    }

    /// Points of Π making up a point of Θ*(S): a segment, a G_s, or P.
    pub fn star_point_set(&self, i: usize) -> Vec<ProjectivePoint> {
        let qq = self.q * self.q;
        if i < qq {
            self.segments[i].clone()
        } else if i < qq + self.q {
            self.g_segments[i - qq].clone()
        } else {
            vec![self.center.clone()]
        }
    }

    /// Coordinates in PG(2, q) (over the subfield) of a point of Θ*(S):
    /// segment (c, y2) ↦ (c, y2, 1), G_s ↦ (1, s, 0), P ↦ (0, 1, 0).
    pub fn star_coords(&self, i: usize) -> ProjectivePoint {
        let qq = self.q * self.q;
        let c = if i < qq {
            [self.sub[i / self.q], self.sub[i % self.q], 1]
        } else if i < qq + self.q {
            [1, self.sub[i - qq], 0]
        } else {
            [0, 1, 0]
        };
        normalize_coords(&self.spec, &c).unwrap()
    }

    /// Inverse of [`Self::star_coords`] for points with subfield coordinates.
    pub fn star_index(&self, p: &ProjectivePoint) -> Option<usize> {
        let c = p.coords();
        if !self.in_subplane(p) {
            return None;
        }
        let idx = |e: Repr| self.sub_index[e as usize].unwrap();
        let qq = self.q * self.q;
        Some(if c[2] != 0 {
            let x = self.spec.div(c[0], c[2]).unwrap();
            let y = self.spec.div(c[1], c[2]).unwrap();
            idx(x) * self.q + idx(y)
        } else if c[0] != 0 {
            qq + idx(self.spec.div(c[1], c[0]).unwrap())
        } else {
            qq + self.q
        })
    }

    /// (x, y) for a point (x, y, 1) of the affine part of Π.
    pub fn affine_xy(&self, p: &ProjectivePoint) -> Option<(Repr, Repr)> {
        let c = p.coords();
        (c[2] != 0).then(|| (self.spec.div(c[0], c[2]).unwrap(), self.spec.div(c[1], c[2]).unwrap()))
    }

    fn meets(&self, line: &Hyperplane, pts: &[ProjectivePoint]) -> usize {
        pts.iter().filter(|p| line.contains(&self.spec, p)).count()
    }

    fn verify(&self) -> Result<BaerSummary, GeometryError> {
        let q = self.q;
        let qq = q * q;
        let spec = &self.spec;
        if self.subplane.len() != qq + q + 1 {
            return Err(bad("subplane has the wrong number of points"));
        }

        // Π' meets every line of Π in 1 or q+1 points.
        let plane_lines = enumerate_points(2, spec);
        let (mut secant, mut tangent) = (0, 0);
        for n in &plane_lines {
            let l = Hyperplane::from_normal(spec, n.coords())?;
            match self.meets(&l, &self.subplane) {
                1 => tangent += 1,
                k if k == q + 1 => secant += 1,
                k => return Err(bad(format!("line {:?} meets the subplane in {k} points", n.coords()))),
            }
        }
        if secant != qq + q + 1 {
            return Err(bad("subplane does not have q^2+q+1 lines"));
        }
        for l in self.pencil_lines.iter().chain(std::iter::once(&self.l_inf)) {
            if self.meets(l, &self.subplane) != q + 1 || !l.contains(spec, &self.center) {
                return Err(bad("pencil line does not meet the subplane in a line through P"));
            }
        }

        // Each Θ_i = (l_i \ {P}, affine segments) is an affine plane of order q.
        // On l_i the affine points are indexed by y; the segments are the
        // GF(q)-affine lines {a + t·d : t ∈ GF(q)} of GF(q^2).
        let mut seg_lines = Vec::new();
        for d in 1..qq as Repr {
            for a in 0..qq as Repr {
                let mut l: Vec<usize> = self.sub.iter().map(|&t| spec.add(a, spec.mul(t, d)) as usize).collect();
                l.sort_unstable();
                seg_lines.push(l);
            }
        }
        let theta_i = IncidenceStructure::new(qq, seg_lines);
        if !theta_i.is_affine_plane(q) {
            return Err(bad("Θ_i is not an affine plane of order q"));
        }
        // Every A_j meets every l_i in a segment of Θ_i.
        for a in &self.affine_subplanes {
            for (xi, &x) in self.sub.iter().enumerate() {
                let mut ys: Vec<usize> = a
                    .iter()
                    .filter_map(|p| self.affine_xy(p))
                    .filter(|&(px, _)| px == x)
                    .map(|(_, y)| y as usize)
                    .collect();
                ys.sort_unstable();
                if theta_i.lines().binary_search(&ys).is_err() {
                    return Err(bad(format!("A_j meets l_{} outside a segment", xi + 1)));
                }
            }
        }

        // Λ on (xi, y): segments on each l_i plus transversals of lines not
        // through P form AG(3, q).
        let mut lambda_lines: Vec<Vec<usize>> = Vec::new();
        for xi in 0..q {
            for l in theta_i.lines() {
                lambda_lines.push(l.iter().map(|&y| xi * qq + y).collect());
            }
        }
        for mslope in 0..qq as Repr {
            for b in 0..qq as Repr {
                lambda_lines.push(
                    self.sub
                        .iter()
                        .enumerate()
                        .map(|(xi, &x)| xi * qq + spec.add(spec.mul(mslope, x), b) as usize)
                        .collect(),
                );
            }
        }
        let lambda = IncidenceStructure::new(q * qq, lambda_lines);
        if lambda.lines().len() != qq * (qq + q + 1) || lambda.lines().iter().any(|l| l.len() != q) || !lambda.is_linear_space() {
            return Err(bad("Λ does not have the parameters of AG(3, q)"));
        }

        // S partitions the points of Λ into Λ-lines, and the A_j are disjoint
        // affine Baer subplanes.
        let mut covered = HashSet::new();
        for (i, seg) in self.segments.iter().enumerate() {
            let xi = i / q;
            let mut ys: Vec<usize> = seg.iter().map(|p| xi * qq + self.affine_xy(p).unwrap().1 as usize).collect();
            ys.sort_unstable();
            if lambda.lines().binary_search(&ys).is_err() {
                return Err(bad("segment is not a line of Λ"));
            }
            covered.extend(seg.iter().cloned());
        }
        if covered.len() != q * qq {
            return Err(bad("segments of S do not partition Λ"));
        }
        let inf_part: Vec<ProjectivePoint> = self.subplane.iter().filter(|p| p.coords()[2] == 0).cloned().collect();
        for a in &self.affine_subplanes {
            let closure: Vec<ProjectivePoint> = a.iter().chain(&inf_part).cloned().collect();
            for n in &plane_lines {
                let l = Hyperplane::from_normal(spec, n.coords())?;
                let k = self.meets(&l, &closure);
                if k != 1 && k != q + 1 {
                    return Err(bad("A_j is not an affine Baer subplane"));
                }
            }
        }

        if !self.theta.is_affine_plane(q) {
            return Err(bad("Θ(S) is not an affine plane of order q"));
        }
        if !self.theta_star.is_projective_plane(q) {
            return Err(bad("Θ*(S) is not a projective plane of order q"));
        }
        let mut gs: Vec<&ProjectivePoint> = self.g_segments.iter().flatten().collect();
        gs.sort();
        gs.dedup();
        if gs.len() != qq || gs.iter().any(|p| !self.l_inf.contains(spec, p) || **p == self.center) {
            return Err(bad("G_1..G_q do not partition the infinite line minus P"));
        }
        // The coordinate map to PG(2, q) is a bijection carrying lines to lines.
        let images: Vec<ProjectivePoint> = (0..self.theta_star.n_points()).map(|i| self.star_coords(i)).collect();
        if images.iter().enumerate().any(|(i, p)| self.star_index(p) != Some(i)) {
            return Err(bad("Θ*(S) coordinates are not a bijection"));
        }
        for l in self.theta_star.lines() {
            let a = &images[l[0]];
            let b = &images[l[1]];
            let line = crate::projective::join(spec, a, b)?;
            if l.iter().any(|&i| !line.contains(spec, &images[i])) {
                return Err(bad("Θ*(S) line does not map to a line of PG(2, q)"));
            }
        }

        Ok(BaerSummary {
            q,
            field: spec.clone(),
            plane_points: plane_lines.len(),
            subplane_points: self.subplane.len(),
            subplane_lines: secant,
            tangent_lines: tangent,
            affine_space_points: lambda.n_points(),
            affine_space_lines: lambda.lines().len(),
            segments: self.segments.len(),
            theta_points: self.theta.n_points(),
            theta_lines: self.theta.lines().len(),
            theta_star_points: self.theta_star.n_points(),
            theta_star_lines: self.theta_star.lines().len(),
            center: self.center.clone(),
            infinite_line: self.l_inf.clone(),
        })
    }

    /// Re-runs every incidence check and returns the recorded counts.
    pub fn summary(&self) -> Result<BaerSummary, GeometryError> {
        self.verify()
    }
}
