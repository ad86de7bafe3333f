//! Parcs and harcs in PG(2, q^2) built from arcs of the derived planes.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::arcs::{line_points, HierarchicalArc, PencilArc};
use super::baer::{baer_structure, BaerStructure};
use super::GeometryError;
use crate::field::{prime_power, Repr};
use crate::projective::{normalize_coords, Hyperplane, ProjectivePoint};

/// DFS node budget for the odd-order arc searches in Θ(S).
pub const MAX_SEARCH_NODES: u64 = 50_000_000;

/// The parc families, numbered as in the construction theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum ParcVariant {
    /// q odd: (q+1)-arc of Θ(S) with two tangent and (q-1)/2 secant lines of U.
    TwoTangents,
    /// q odd: (q+1)-arc of Θ(S) with (q+1)/2 secant lines of U.
    Secants,
    /// q odd: q-arc of Θ(S) meeting every line of U once.
    Transversal,
    /// q even: (q+1)-arc of Θ*(S) with nucleus P.
    Nucleus,
    /// q even: (q+2)-arc of Θ*(S) off P.
    Hyperoval,
}

impl ParcVariant {
    pub fn number(self) -> u32 {
        match self {
            ParcVariant::TwoTangents => 26,
            ParcVariant::Secants => 27,
            ParcVariant::Transversal => 28,
            ParcVariant::Nucleus => 31,
            ParcVariant::Hyperoval => 32,
        }
    }

    pub fn needs_even(self) -> bool {
        matches!(self, ParcVariant::Nucleus | ParcVariant::Hyperoval)
    }

    /// Nonzero profile, sorted.
    pub fn expected_profile(self, q: usize) -> Vec<usize> {
        let mut p = match self {
            ParcVariant::TwoTangents => {
                let mut v = vec![q, q];
                v.extend(std::iter::repeat_n(2 * q, (q - 1) / 2));
                v
            }
            ParcVariant::Secants => vec![2 * q; q.div_ceil(2)],
            ParcVariant::Transversal => vec![q; q],
            ParcVariant::Nucleus => vec![q; q + 1],
            ParcVariant::Hyperoval => vec![2 * q; (q + 2) / 2],
        };
        p.sort_unstable();
        p
    }
}

impl TryFrom<u32> for ParcVariant {
    type Error = GeometryError;

    fn try_from(v: u32) -> Result<Self, GeometryError> {
        Ok(match v {
            26 => ParcVariant::TwoTangents,
            27 => ParcVariant::Secants,
            28 => ParcVariant::Transversal,
            31 => ParcVariant::Nucleus,
            32 => ParcVariant::Hyperoval,
            _ => return Err(GeometryError::UnknownVariant(v)),
        })
    }
}

impl From<ParcVariant> for u32 {
    fn from(v: ParcVariant) -> u32 {
        v.number()
    }
}

impl fmt::Display for ParcVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

/// Replaces each point of an arc of Θ*(S) by the q points of Π it stands
/// for. Indices follow [`BaerStructure::theta_star`]; indices below q^2 are
/// points of Θ(S). The result carries the pencil of all lines through P.
pub fn expand_arc_to_parc(b: &BaerStructure, arc: &[usize]) -> Result<PencilArc, GeometryError> {
    let star = b.theta_star();
    let mut sorted = arc.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != arc.len() {
        return Err(GeometryError::NotAnArc("repeated point".into()));
    }
    if let Some(&i) = sorted.iter().find(|&&i| i >= star.n_points()) {
        return Err(GeometryError::NotAnArc(format!("point {i} is not in Θ*(S)")));
    }
    if sorted.contains(&b.star_center_index()) {
        return Err(GeometryError::NotAnArc("P is not a segment".into()));
    }
    if let Some(t) = star.first_collinear_triple(&sorted) {
        return Err(GeometryError::NotAnArc(format!("points {t:?} are collinear")));
    }
    let points: Vec<ProjectivePoint> = sorted.iter().flat_map(|&i| b.star_point_set(i)).collect();
    PencilArc::new(b.spec(), 2, points, b.pencil())
}

/// Arc of Θ(S) meeting the vertical lines in `ones` columns once and
/// `twos` columns twice, found by depth-first search over columns.
fn search_theta_arc(b: &BaerStructure, ones: usize, twos: usize) -> Result<Vec<usize>, GeometryError> {
    struct Dfs<'a> {
        b: &'a BaerStructure,
        count: Vec<u8>,
        chosen: Vec<usize>,
        nodes: u64,
    }

    impl Dfs<'_> {
        fn fits(&self, p: usize) -> bool {
            self.b.theta().lines_through(p).iter().all(|&l| self.count[l] < 2)
        }

        fn toggle(&mut self, p: usize, add: bool) {
            for &l in self.b.theta().lines_through(p) {
                if add {
                    self.count[l] += 1;
                } else {
                    self.count[l] -= 1;
                }
            }
            if add {
                self.chosen.push(p);
            } else {
                self.chosen.pop();
            }
        }

        fn go(&mut self, col: usize, ones: usize, twos: usize) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > MAX_SEARCH_NODES {
                return None;
            }
            let q = self.b.q();
            if ones == 0 && twos == 0 {
                return Some(true);
            }
            if col == q || q - col < ones + twos {
                return Some(false);
            }
            let base = col * q;
            if twos > 0 {
                for a in 0..q {
                    if !self.fits(base + a) {
                        continue;
                    }
                    self.toggle(base + a, true);
                    for c in a + 1..q {
                        if self.fits(base + c) {
                            self.toggle(base + c, true);
                            if self.go(col + 1, ones, twos - 1)? {
                                return Some(true);
                            }
                            self.toggle(base + c, false);
                        }
                    }
                    self.toggle(base + a, false);
                }
            }
            if ones > 0 {
                for a in 0..q {
                    if self.fits(base + a) {
                        self.toggle(base + a, true);
                        if self.go(col + 1, ones - 1, twos)? {
                            return Some(true);
                        }
                        self.toggle(base + a, false);
                    }
                }
            }
            self.go(col + 1, ones, twos)
        }
    }

    let mut dfs = Dfs { b, count: vec![0; b.theta().lines().len()], chosen: Vec::new(), nodes: 0 };
    match dfs.go(0, ones, twos) {
        Some(true) => Ok(dfs.chosen),
        Some(false) => Err(GeometryError::SearchExhausted(format!(
            "no arc of Θ(S) with {ones} single and {twos} double columns for q = {}",
            b.q()
        ))),
        None => Err(GeometryError::SearchExhausted(format!("node budget {MAX_SEARCH_NODES} reached"))),
    }
}

/// Θ*(S) indices of a conic (`nucleus_center`) or of a hyperoval avoiding P.
/// In the coordinates of [`BaerStructure::star_coords`] the conic is
/// y^2 = xz, whose nucleus for even q is (0, 1, 0) = P; the map
/// (x, y, z) ↦ (x + y, y, z) moves the hyperoval conic ∪ {P} off P.
fn even_star_arc(b: &BaerStructure, nucleus_center: bool) -> Vec<usize> {
    let f = b.spec();
    let mut coords: Vec<[Repr; 3]> = b.subfield().iter().map(|&t| [1, t, f.mul(t, t)]).collect();
    coords.push([0, 0, 1]);
    if !nucleus_center {
        coords.push([0, 1, 0]);
        for c in &mut coords {
            c[0] = f.add(c[0], c[1]);
        }
    }
    coords
        .iter()
        .map(|c| b.star_index(&normalize_coords(f, c).unwrap()).expect("subfield coordinates"))
        .collect()
}

/// Builds the requested parc in PG(2, q^2) and checks its profile.
pub fn construct_parc(q: u32, variant: u32) -> Result<PencilArc, GeometryError> {
    let v = ParcVariant::try_from(variant)?;
    let (p, _) = prime_power(q).ok_or(GeometryError::UnsupportedOrder(q))?;
    if (p == 2) != v.needs_even() {
        return Err(GeometryError::ParityMismatch { q, variant });
    }
    let b = baer_structure(q)?;
    let qs = q as usize;
    let arc = match v {
        ParcVariant::TwoTangents => search_theta_arc(&b, 2, (qs - 1) / 2)?,
        ParcVariant::Secants => search_theta_arc(&b, 0, qs.div_ceil(2))?,
        ParcVariant::Transversal => search_theta_arc(&b, qs, 0)?,
        ParcVariant::Nucleus => even_star_arc(&b, true),
        ParcVariant::Hyperoval => even_star_arc(&b, false),
    };
    let parc = expand_arc_to_parc(&b, &arc)?;
    let mut profile = parc.nonzero_profile();
    profile.sort_unstable();
    if profile != v.expected_profile(qs) {
        return Err(GeometryError::StructureCheck(format!("variant {v} gave profile {profile:?}")));
    }
    Ok(parc)
}

/// K1 is a conic of the Baer subplane (with its nucleus for even q), Ψ the
/// first subplane line missing K1, and K2 the points of Ψ outside the
/// subplane.
pub fn construct_harc(q: u32) -> Result<HierarchicalArc, GeometryError> {
    let b = baer_structure(q)?;
    let f = b.spec();
    let mut k1: Vec<ProjectivePoint> =
        b.subfield().iter().map(|&t| normalize_coords(f, &[1, t, f.mul(t, t)]).unwrap()).collect();
    k1.push(normalize_coords(f, &[0, 0, 1])?);
    if f.p() == 2 {
        k1.push(normalize_coords(f, &[0, 1, 0])?);
    }
    // Normals with subfield coordinates are exactly the subplane's lines.
    let psi = b
        .subplane()
        .iter()
        .map(|n| Hyperplane::from_normal(f, n.coords()).unwrap())
        .find(|l| k1.iter().all(|p| !l.contains(f, p)))
        .ok_or(GeometryError::NoExternalLine)?;
    let k2: Vec<ProjectivePoint> = line_points(f, &psi).into_iter().filter(|p| !b.in_subplane(p)).collect();
    HierarchicalArc::new(f, 2, k1, k2, psi)
}
