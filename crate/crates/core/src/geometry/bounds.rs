//! Exhaustive searches confirming the size bounds in PG(2, q) for small q.
//!
//! In a plane both conditions reduce to counting: a set of non-center points
//! is a parc for the pencil through P = (0, 1, 0) iff every line missing P
//! meets it at most twice, and K is a harc for Ψ: z = 0 iff every line
//! other than Ψ meets it at most twice.

use serde::Serialize;

use super::arcs::{plane_pencil, HierarchicalArc, PencilArc};
use super::GeometryError;
use crate::field::{FieldSpec, Repr};
use crate::projective::{normalize_coords, Hyperplane, ProjectivePoint, ProjectiveSpace};

pub const MAX_BOUND_ORDER: u32 = 4;

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub kind: String,
    pub q: u32,
    pub field: FieldSpec,
    /// Largest admissible set found by the exhaustive search.
    pub max_found: usize,
    /// The bound being confirmed: 2q for parcs, q + 2 for harcs.
    pub bound: usize,
    pub witness: Vec<ProjectivePoint>,
    /// For harcs, how many witness points lie on Ψ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_on_psi: Option<usize>,
    pub nodes: u64,
}

impl BoundReport {
    pub fn confirmed(&self) -> bool {
        self.max_found == self.bound
    }
}

/// Branch and bound for the largest set of candidate points on which every
/// constrained line carries at most two points.
struct MaxSearch<'a> {
    candidates: Vec<usize>,
    lines_of: &'a [Vec<usize>],
    constrained: Vec<bool>,
    count: Vec<u8>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
}

impl MaxSearch<'_> {
    fn go(&mut self, i: usize) {
        self.nodes += 1;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if i == self.candidates.len() || self.chosen.len() + self.candidates.len() - i <= self.best.len() {
            return;
        }
        let p = self.candidates[i];
        if self.lines_of[p].iter().all(|&l| !self.constrained[l] || self.count[l] < 2) {
            for &l in &self.lines_of[p] {
                self.count[l] += 1;
            }
            self.chosen.push(p);
            self.go(i + 1);
            self.chosen.pop();
            for &l in &self.lines_of[p] {
                self.count[l] -= 1;
            }
        }
        self.go(i + 1);
    }
}

fn plane(q: u32) -> Result<(FieldSpec, ProjectiveSpace, Vec<Hyperplane>, Vec<Vec<usize>>), GeometryError> {
    if q > MAX_BOUND_ORDER {
        return Err(GeometryError::TooLarge(q));
    }
    let f = FieldSpec::of_order(q)?;
    let space = ProjectiveSpace::new(&f, 2);
    let lines: Vec<Hyperplane> = space.hyperplanes().collect();
    let mut lines_of = vec![Vec::new(); space.points().len()];
    for (li, l) in lines.iter().enumerate() {
        for p in space.points_on(l) {
            lines_of[p].push(li);
        }
    }
    Ok((f, space, lines, lines_of))
}

fn point(f: &FieldSpec, c: &[Repr]) -> ProjectivePoint {
    normalize_coords(f, c).unwrap()
}

/// Largest parc of PG(2, q) for the pencil through (0, 1, 0); the witness is
/// re-verified as a [`PencilArc`].
pub fn parc_bound_check(q: u32) -> Result<BoundReport, GeometryError> {
    let (f, space, lines, lines_of) = plane(q)?;
    let center = point(&f, &[0, 1, 0]);
    let ci = space.index_of(&center).unwrap();
    let mut s = MaxSearch {
        candidates: (0..space.points().len()).filter(|&i| i != ci).collect(),
        lines_of: &lines_of,
        constrained: lines.iter().map(|l| !l.contains(&f, &center)).collect(),
        count: vec![0; lines.len()],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    s.go(0);
    let witness: Vec<ProjectivePoint> = s.best.iter().map(|&i| space.point(i).clone()).collect();
    let arc = PencilArc::new(&f, 2, witness, plane_pencil(&f, &center))?;
    Ok(BoundReport {
        kind: "parc".into(),
        q,
        field: f,
        max_found: arc.points().len(),
        bound: 2 * q as usize,
        witness: arc.points().to_vec(),
        witness_on_psi: None,
        nodes: s.nodes,
    })
}

/// Largest harc of PG(2, q) with Ψ: z = 0; the witness is re-verified as a
/// [`HierarchicalArc`].
pub fn harc_bound_check(q: u32) -> Result<BoundReport, GeometryError> {
    let (f, space, lines, lines_of) = plane(q)?;
    let psi = Hyperplane::from_normal(&f, &[0, 0, 1])?;
    let mut s = MaxSearch {
        candidates: (0..space.points().len()).collect(),
        lines_of: &lines_of,
        constrained: lines.iter().map(|l| *l != psi).collect(),
        count: vec![0; lines.len()],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    s.go(0);
    let (k2, k1): (Vec<ProjectivePoint>, Vec<ProjectivePoint>) =
        s.best.iter().map(|&i| space.point(i).clone()).partition(|p| psi.contains(&f, p));
    let arc = HierarchicalArc::new(&f, 2, k1, k2, psi)?;
    let witness: Vec<ProjectivePoint> = arc.k1().iter().chain(arc.k2()).cloned().collect();
    Ok(BoundReport {
        kind: "harc".into(),
        q,
        field: f,
        max_found: arc.total(),
        bound: q as usize + 2,
        witness,
        witness_on_psi: Some(arc.k2().len()),
        nodes: s.nodes,
    })
}

/// Two lines of the pencil through (0, 1, 0), less the center: a 2q-parc.
pub fn two_line_parc(q: u32) -> Result<PencilArc, GeometryError> {
    let f = FieldSpec::of_order(q)?;
    let center = point(&f, &[0, 1, 0]);
    let pencil = plane_pencil(&f, &center);
    let points: Vec<ProjectivePoint> = pencil.members()[..2]
        .iter()
        .flat_map(|l| super::arcs::line_points(&f, l))
        .filter(|p| *p != center)
        .collect();
    PencilArc::new(&f, 2, points, pencil)
}
