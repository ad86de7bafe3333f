//! Ideal schemes read off parcs and harcs: the dealer is a point of the arc
//! and the participants are the remaining points, as columns of G.

use super::arcs::{HierarchicalArc, PencilArc};
use super::GeometryError;
use crate::access::{hierarchical_basis, parallel_basis};
use crate::field::Repr;
use crate::scheme::{GeneratorMatrix, Scheme};

fn finish(g: GeneratorMatrix, gamma: crate::access::AccessStructure) -> Result<Scheme, GeometryError> {
    let scheme = Scheme::new(g, gamma)?;
    if !scheme.is_verified() {
        let reasons: Vec<String> = scheme.report().failures().map(|c| format!("({}) at {}", c.condition, c.set)).collect();
        return Err(GeometryError::VerificationFailed(reasons.join(", ")));
    }
    Ok(scheme)
}

/// Parallel scheme of strength r + 1. K0 is the pencil group of least
/// nonzero size (lowest pencil index on ties); its first point is the dealer
/// and its other points are dropped. Every other group is a participant
/// group, labelled G{g}_{j}.
pub fn scheme_from_parc(parc: &PencilArc) -> Result<Scheme, GeometryError> {
    let groups = parc.groups();
    let (k0, _) = groups
        .iter()
        .enumerate()
        .min_by_key(|(i, (_, pts))| (pts.len(), *i))
        .ok_or_else(|| GeometryError::Degenerate("empty parc".into()))?;
    let dealer = groups[k0].1[0].coords().to_vec();
    let mut columns: Vec<Vec<Repr>> = Vec::new();
    let mut labels = Vec::new();
    let mut index_groups = Vec::new();
    for (g, (_, pts)) in groups.iter().enumerate().filter(|(i, _)| *i != k0).map(|(_, x)| x).enumerate() {
        let mut idx = Vec::new();
        for (j, p) in pts.iter().enumerate() {
            idx.push(columns.len());
            columns.push(p.coords().to_vec());
            labels.push(format!("G{}_{}", g + 1, j + 1));
        }
        index_groups.push(idx);
    }
    let t = parc.dim() + 1;
    let gamma = parallel_basis(&index_groups, t)?;
    finish(GeneratorMatrix::new(parc.spec(), dealer, columns, Some(labels))?, gamma)
}

/// Hierarchical scheme of strength r + 1: the first point of K1 is the
/// dealer, the rest of K1 is the upper group U and K2 the lower group L.
pub fn scheme_from_harc(harc: &HierarchicalArc) -> Result<Scheme, GeometryError> {
    let mut k1 = harc.k1().to_vec();
    k1.sort();
    if k1.len() < 2 {
        return Err(GeometryError::Degenerate("K1 needs a point besides the dealer".into()));
    }
    let dealer = k1[0].coords().to_vec();
    let mut columns: Vec<Vec<Repr>> = k1[1..].iter().map(|p| p.coords().to_vec()).collect();
    let mut labels: Vec<String> = (1..k1.len()).map(|i| format!("U{i}")).collect();
    let upper: Vec<usize> = (0..columns.len()).collect();
    let lower: Vec<usize> = (columns.len()..columns.len() + harc.k2().len()).collect();
    columns.extend(harc.k2().iter().map(|p| p.coords().to_vec()));
    labels.extend((1..=harc.k2().len()).map(|i| format!("L{i}")));
    let gamma = hierarchical_basis(&upper, &lower, harc.dim() + 1)?;
    finish(GeneratorMatrix::new(harc.spec(), dealer, columns, Some(labels))?, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::{AccessError, ParticipantSet};
    use crate::combinatorics::Combinations;
    use crate::geometry::construct::{construct_harc, construct_parc};
    use crate::geometry::bounds::two_line_parc;
    use crate::projective::normalize_coords;

    #[test]
    fn parallel_from_parcs() {
        let s = scheme_from_parc(&construct_parc(3, 28).unwrap()).unwrap();
        assert_eq!(s.generator().m(), 6);
        assert_eq!(s.spec().order(), 9);
        assert_eq!(s.generator().labels()[..3], ["G1_1", "G1_2", "G1_3"]);
        // Authorized iff the three participants span two groups.
        for c in Combinations::new(6, 3) {
            let set = ParticipantSet::from_indices(c.iter().copied()).unwrap();
            assert_eq!(s.gamma().is_authorized(set).unwrap(), c[0] / 3 != c[2] / 3);
        }

        let s = scheme_from_parc(&construct_parc(2, 31).unwrap()).unwrap();
        assert_eq!(s.generator().m(), 4);
        let s = scheme_from_parc(&two_line_parc(3).unwrap());
        assert!(matches!(s, Err(GeometryError::Access(AccessError::Degenerate(_)))));
        let s = scheme_from_parc(&construct_parc(2, 32).unwrap());
        assert!(matches!(s, Err(GeometryError::Access(AccessError::Degenerate(_)))));
    }

    #[test]
    fn dealer_from_smallest_group() {
        let parc = construct_parc(3, 26).unwrap();
        let s = scheme_from_parc(&parc).unwrap();
        assert_eq!(s.generator().m(), 12 - 3);
        let groups = parc.groups();
        let first_small = groups.iter().find(|(_, p)| p.len() == 3).unwrap();
        assert_eq!(s.generator().dealer(), first_small.1[0].coords());
    }

    #[test]
    fn hierarchical_from_harcs() {
        for (q, u, l) in [(2, 3, 2), (3, 3, 6)] {
            let h = construct_harc(q).unwrap();
            let s = scheme_from_harc(&h).unwrap();
            assert_eq!(s.generator().m(), u + l);
            assert_eq!(s.generator().labels()[0], "U1");
            assert_eq!(s.generator().labels()[u], "L1");
            let lower = ParticipantSet::from_indices(u..u + l).unwrap();
            assert!(!s.gamma().is_authorized(lower).unwrap());
        }
        let f = crate::field::FieldSpec::of_order(4).unwrap();
        let pt = |c: &[Repr]| normalize_coords(&f, c).unwrap();
        let psi = crate::projective::Hyperplane::from_normal(&f, &[0, 0, 1]).unwrap();
        let h = HierarchicalArc::new(&f, 2, vec![pt(&[0, 0, 1])], vec![pt(&[1, 0, 0]), pt(&[0, 1, 0])], psi).unwrap();
        assert!(matches!(scheme_from_harc(&h), Err(GeometryError::Degenerate(_))));
    }
}
