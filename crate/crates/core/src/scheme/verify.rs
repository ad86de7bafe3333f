//! The three verification routes: rank conditions on the generator matrix,
//! the uniqueness/balance definition on the array, and the orthogonal-array
//! characterization.

use serde::{Deserialize, Serialize};

use super::{GeneratorMatrix, SchemeError};
use crate::access::{AccessStructure, ParticipantSet, MAX_SCAN_PARTICIPANTS};
use crate::array::{ArrayError, RepresentativeArray};
use crate::field::{FieldSpec, Repr};
use crate::linalg::rank_of;

/// Row limit for the array-based verifiers.
pub const MAX_VERIFY_ROWS: usize = 1_000_000;

/// Participant limit for the exhaustive all-subsets mode.
pub const MAX_EXHAUSTIVE_PARTICIPANTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Vector,
    Definitional,
    Char,
}

/// One recorded condition on one participant set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub set: ParticipantSet,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub method: Method,
    pub checks: Vec<ConditionCheck>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(method: Method) -> Self {
        VerificationReport { method, checks: Vec::new(), notes: Vec::new(), pass: true }
    }

    fn record(&mut self, condition: &str, set: ParticipantSet, pass: bool, detail: String) {
        self.pass &= pass;
        self.checks.push(ConditionCheck { condition: condition.to_string(), set, pass, detail });
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Checks recorded for `condition`.
    pub fn for_condition<'a>(&'a self, condition: &'a str) -> impl Iterator<Item = &'a ConditionCheck> + 'a {
        self.checks.iter().filter(move |c| c.condition == condition)
    }
}

fn check_sizes(m: usize, gamma: &AccessStructure) -> Result<(), SchemeError> {
    if m != gamma.n() {
        return Err(SchemeError::SizeMismatch { generator: m, access: gamma.n() });
    }
    Ok(())
}

/// Rank conditions on G. For every basis set X, the |X|+1 vectors of
/// {d} ∪ X have rank |X| and every |X| of them are independent. For every
/// maximal unauthorized Y, rank({d} ∪ Y) = rank(Y) + 1 <= k.
pub fn verify_vector_scheme(g: &GeneratorMatrix, gamma: &AccessStructure) -> Result<VerificationReport, SchemeError> {
    verify_vector_columns(g.spec(), g.dealer(), g.participants(), gamma)
}

/// [`verify_vector_scheme`] on raw columns, which may be zero.
pub fn verify_vector_columns(
    spec: &FieldSpec,
    dealer: &[Repr],
    participants: &[Vec<Repr>],
    gamma: &AccessStructure,
) -> Result<VerificationReport, SchemeError> {
    check_sizes(participants.len(), gamma)?;
    let k = dealer.len();
    if participants.iter().any(|v| v.len() != k) {
        return Err(SchemeError::ColumnLength {
            index: 1 + participants.iter().position(|v| v.len() != k).unwrap(),
            expected: k,
            got: participants.iter().find(|v| v.len() != k).unwrap().len(),
        });
    }
    let g = Columns { dealer, participants };
    let mut report = VerificationReport::new(Method::Vector);

    for &x in gamma.basis() {
        let size = x.len();
        if size > k {
            report.record(
                "9",
                x,
                false,
                format!("basis set has {size} participants but vectors have length k = {k}, so they cannot be independent"),
            );
            continue;
        }
        let mut vs: Vec<&[Repr]> = vec![g.dealer()];
        vs.extend(x.iter().map(|i| g.participant(i)));
        let full = rank_of(spec, &vs);
        let bad_face = (0..vs.len()).find(|&skip| {
            let face: Vec<&[Repr]> = vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| *v).collect();
            rank_of(spec, &face) < size
        });
        let pass = full == size && bad_face.is_none();
        let detail = match (full == size, bad_face) {
            (_, Some(0)) => "the participant vectors alone are dependent".to_string(),
            (_, Some(j)) => format!("dropping participant {} leaves a dependent set", x.to_vec()[j - 1]),
            (false, None) => format!("rank of {{d}} ∪ X is {full}, so d is not in the span of X"),
            (true, None) => format!("rank {size}, every {size} of the {} vectors independent", size + 1),
        };
        report.record("9", x, pass, detail);
    }

    let maximal = gamma.maximal_unauthorized()?;
    for &y in &maximal {
        let vy: Vec<&[Repr]> = y.iter().map(|i| g.participant(i)).collect();
        let ry = rank_of(spec, &vy);
        let mut with_d = vy.clone();
        with_d.push(g.dealer());
        let rd = rank_of(spec, &with_d);
        let pass = rd == ry + 1 && rd <= k;
        report.record("10", y, pass, format!("rank(Y) = {ry}, rank({{d}} ∪ Y) = {rd}, k = {k}"));
    }
    report.notes.push(format!(
        "condition (10) checked on the {} maximal unauthorized sets only: d outside span(Y) implies d outside span(Y') for every Y' ⊆ Y",
        maximal.len()
    ));
    Ok(report)
}

struct Columns<'a> {
    dealer: &'a [Repr],
    participants: &'a [Vec<Repr>],
}

impl Columns<'_> {
    fn dealer(&self) -> &[Repr] {
        self.dealer
    }

    fn participant(&self, i: usize) -> &[Repr] {
        &self.participants[i]
    }
}

/// Recovers G from the row space of the array and runs the rank conditions
/// on it. An array that is not linear fails outright.
pub fn verify_vector_array(m: &RepresentativeArray, gamma: &AccessStructure) -> Result<VerificationReport, SchemeError> {
    check_sizes(m.n_participants(), gamma)?;
    let (dealer, participants) = match m.recover_columns() {
        Ok(c) => c,
        Err(ArrayError::NotLinear(why)) => {
            let mut report = VerificationReport::new(Method::Vector);
            report.record("linear", ParticipantSet::EMPTY, false, format!("no generator matrix has this array: {why}"));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let mut report = verify_vector_columns(m.spec(), &dealer, &participants, gamma)?;
    report.notes.insert(0, format!("generator with k = {} recovered from the row space of the array", dealer.len()));
    Ok(report)
}

fn check_array_limits(m: &RepresentativeArray, gamma: &AccessStructure) -> Result<(), SchemeError> {
    check_sizes(m.n_participants(), gamma)?;
    if m.n_rows() > MAX_VERIFY_ROWS {
        return Err(SchemeError::TooLarge(format!("{} rows exceeds {}", m.n_rows(), MAX_VERIFY_ROWS)));
    }
    if gamma.n() > MAX_SCAN_PARTICIPANTS {
        return Err(SchemeError::TooLarge(format!("{} participants exceeds {}", gamma.n(), MAX_SCAN_PARTICIPANTS)));
    }
    Ok(())
}

/// Authorized and unauthorized sets the array verifiers visit.
fn scan_sets(gamma: &AccessStructure, exhaustive: bool) -> Result<(Vec<ParticipantSet>, Vec<ParticipantSet>, Vec<String>), SchemeError> {
    let mut notes = Vec::new();
    if exhaustive {
        if gamma.n() > MAX_EXHAUSTIVE_PARTICIPANTS {
            return Err(SchemeError::TooLarge(format!(
                "exhaustive mode needs n <= {MAX_EXHAUSTIVE_PARTICIPANTS}, got {}",
                gamma.n()
            )));
        }
        notes.push("exhaustive: every subset of participants checked".into());
        return Ok((gamma.all_authorized()?, gamma.all_unauthorized()?, notes));
    }
    let mut unauth = gamma.maximal_unauthorized()?;
    if !unauth.contains(&ParticipantSet::EMPTY) {
        unauth.insert(0, ParticipantSet::EMPTY);
    }
    notes.push("authorized side checked on the basis only: supersets of a set that determines the key also determine it".into());
    notes.push("unauthorized side checked on maximal unauthorized sets and the empty set: a uniform key distribution on B is a sum of uniform ones over the refinements by B's shares, so it passes to subsets".into());
    Ok((gamma.basis().to_vec(), unauth, notes))
}

/// Uniqueness on authorized sets and balance on unauthorized ones, by row
/// scans of the array.
pub fn verify_definitional(
    m: &RepresentativeArray,
    gamma: &AccessStructure,
    exhaustive: bool,
) -> Result<VerificationReport, SchemeError> {
    check_array_limits(m, gamma)?;
    let mut report = VerificationReport::new(Method::Definitional);
    let (auth, unauth, notes) = scan_sets(gamma, exhaustive)?;
    report.notes = notes;
    for b in auth {
        let ok = m.check_k_uniqueness(b)?;
        let detail = if ok { "shares determine the key" } else { "two rows agree on B but differ on D" };
        report.record("5", b, ok, detail.into());
    }
    for b in unauth {
        let ok = m.check_k_balance(b)?;
        let detail = if ok { "every key equally likely given the shares" } else { "some share tuple biases the key" };
        report.record("6", b, ok, detail.into());
    }
    Ok(report)
}

/// Orthogonal-array characterization. On authorized B, M({D} ∪ B) is regular
/// of strength exactly |B|. On unauthorized B, adding D raises the
/// orthogonal rank by one and M({D} ∪ B) is regular.
pub fn verify_char(m: &RepresentativeArray, gamma: &AccessStructure, exhaustive: bool) -> Result<VerificationReport, SchemeError> {
    check_array_limits(m, gamma)?;
    let mut report = VerificationReport::new(Method::Char);
    let (_, unauth, _) = scan_sets(gamma, exhaustive)?;
    // (7) is a statement about basis sets only: a non-minimal authorized B
    // has strength below |B|.
    let auth = gamma.basis().to_vec();
    let mut notes: Vec<String> = vec![if exhaustive {
        "exhaustive: condition (7) on every basis set, condition (8) on every unauthorized set".into()
    } else {
        "condition (7) checked on basis sets; condition (8) on maximal unauthorized sets and the empty set".into()
    }];
    notes.push("M({D} ∪ B) has |B|+1 columns, so strength |B|+1 would mean the whole block is orthogonal; the 'not |B|+1' clause is never vacuous".into());
    report.notes = notes;
    let with_d = |b: ParticipantSet| -> Result<Vec<usize>, SchemeError> {
        let mut c = vec![0];
        c.extend(m.participant_columns(b)?);
        Ok(c)
    };
    for b in auth {
        let cols = with_d(b)?;
        let strength = m.strength(&cols)?;
        let regular = m.is_regular(&cols)?;
        let ok = strength == b.len() && regular;
        report.record("7", b, ok, format!("strength {strength} (need {}), regular: {regular}", b.len()));
    }
    for b in unauth {
        let cols = with_d(b)?;
        let phi_b = m.orthogonal_rank(&m.participant_columns(b)?)?;
        let phi_db = m.orthogonal_rank(&cols)?;
        let regular = m.is_regular(&cols)?;
        let ok = phi_db == phi_b + 1 && regular;
        report.record("8", b, ok, format!("phi(B) = {phi_b}, phi(D ∪ B) = {phi_db}, regular: {regular}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::generate_array;
    use crate::access::{hierarchical_basis, parallel_basis, threshold_basis};
    use crate::field::FieldSpec;
    use crate::scheme::threshold_generator;
    use proptest::prelude::*;

    fn shamir() -> GeneratorMatrix {
        threshold_generator(&FieldSpec::prime(5).unwrap(), 2, 3).unwrap()
    }

    fn set(v: &[usize]) -> ParticipantSet {
        ParticipantSet::from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn vector_examples() {
        let g = shamir();
        let r = verify_vector_scheme(&g, &threshold_basis(2, 3).unwrap()).unwrap();
        assert!(r.pass);
        assert_eq!(r.for_condition("9").count(), 3);
        assert_eq!(r.for_condition("10").count(), 3);

        let r = verify_vector_scheme(&g, &threshold_basis(3, 3).unwrap()).unwrap();
        assert!(!r.pass);
        let c9: Vec<_> = r.for_condition("9").collect();
        assert!(!c9[0].pass && c9[0].detail.contains("k = 2"));

        let f = FieldSpec::prime(5).unwrap();
        let bad = GeneratorMatrix::new(&f, vec![1, 1], vec![vec![1, 1], vec![1, 2], vec![1, 3]], None).unwrap();
        let r = verify_vector_scheme(&bad, &threshold_basis(2, 3).unwrap()).unwrap();
        assert!(!r.pass);
        assert!(r.failures().any(|c| c.condition == "10" && c.set == set(&[0])));

        assert_eq!(
            verify_vector_scheme(&g, &threshold_basis(2, 2).unwrap()),
            Err(SchemeError::SizeMismatch { generator: 3, access: 2 })
        );
    }

    #[test]
    fn definitional_examples() {
        let g = shamir();
        let m = generate_array(&g).unwrap();
        let gamma = threshold_basis(2, 3).unwrap();
        assert!(verify_definitional(&m, &gamma, false).unwrap().pass);
        assert!(verify_definitional(&m, &gamma, true).unwrap().pass);

        // Two participants holding the same share column cannot form a
        // 2-out-of-2 scheme: the pair learns nothing more than one of them.
        let f = FieldSpec::prime(5).unwrap();
        let dup = GeneratorMatrix::new(&f, vec![1, 0], vec![vec![1, 1], vec![1, 1]], None).unwrap();
        let r = verify_definitional(&generate_array(&dup).unwrap(), &threshold_basis(2, 2).unwrap(), false).unwrap();
        assert!(!r.pass);
        assert!(r.failures().any(|c| c.condition == "5"));

        // Duplicating the secret column into a participant column breaks balance.
        let leak = GeneratorMatrix::new(&f, vec![1, 0], vec![vec![1, 0], vec![1, 1]], None).unwrap();
        let r = verify_definitional(&generate_array(&leak).unwrap(), &threshold_basis(2, 2).unwrap(), false).unwrap();
        assert!(r.failures().any(|c| c.condition == "6" && c.set == set(&[0])));

        let full = threshold_generator(&f, 3, 3).unwrap();
        let r = verify_definitional(&generate_array(&full).unwrap(), &threshold_basis(3, 3).unwrap(), true).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn char_examples() {
        let g = shamir();
        let m = generate_array(&g).unwrap();
        let gamma = threshold_basis(2, 3).unwrap();
        let r = verify_char(&m, &gamma, false).unwrap();
        assert!(r.pass);
        for c in r.for_condition("7") {
            assert!(c.detail.starts_with("strength 2"));
        }
        let singleton = r.for_condition("8").find(|c| c.set == set(&[1])).unwrap();
        assert!(singleton.detail.contains("phi(B) = 1, phi(D ∪ B) = 2"));
        assert_eq!(m.orthogonal_rank(&[0, 2]).unwrap(), 2);
    }

    #[test]
    fn vector_from_array_matches_direct() {
        let g = shamir();
        let m = generate_array(&g).unwrap();
        let gamma = threshold_basis(2, 3).unwrap();
        let a = verify_vector_array(&m, &gamma).unwrap();
        let b = verify_vector_scheme(&g, &gamma).unwrap();
        assert_eq!(a.pass, b.pass);
        assert_eq!(a.checks.iter().map(|c| (c.set, c.pass)).collect::<Vec<_>>(), b.checks.iter().map(|c| (c.set, c.pass)).collect::<Vec<_>>());
    }

    fn structures(n: usize) -> Vec<AccessStructure> {
        let mut out = Vec::new();
        for t in 2..=n.min(3) {
            out.push(threshold_basis(t, n).unwrap());
            if let Ok(h) = hierarchical_basis(&[0], &(1..n).collect::<Vec<_>>(), t) {
                out.push(h);
            }
            if n >= 3 {
                if let Ok(p) = parallel_basis(&[vec![0, 1], (2..n).collect()], t) {
                    out.push(p);
                }
            }
        }
        out
    }

    fn small_scheme() -> impl Strategy<Value = (u32, Vec<Vec<Repr>>, usize)> {
        prop_oneof![Just(2u32), Just(3), Just(4)].prop_flat_map(|q| {
            (2usize..=3).prop_flat_map(move |k| {
                let col = proptest::collection::vec(0..q, k).prop_filter("nonzero", |c| c.iter().any(|&e| e != 0));
                (proptest::collection::vec(col, 3..=5), 0usize..8).prop_map(move |(cols, which)| (q, cols, which))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn three_routes_agree((q, cols, which) in small_scheme()) {
            let f = FieldSpec::of_order(q).unwrap();
            let g = GeneratorMatrix::new(&f, cols[0].clone(), cols[1..].to_vec(), None).unwrap();
            let list = structures(g.m());
            let gamma = &list[which % list.len()];
            let m = generate_array(&g).unwrap();
            let v = verify_vector_scheme(&g, gamma).unwrap().pass;
            let d = verify_definitional(&m, gamma, false).unwrap().pass;
            let c = verify_char(&m, gamma, false).unwrap().pass;
            let e = verify_definitional(&m, gamma, true).unwrap().pass;
            prop_assert_eq!(v, d);
            prop_assert_eq!(v, c);
            prop_assert_eq!(v, e);
        }

        #[test]
        fn scaling_keeps_verdict((q, cols, which) in small_scheme(), lambda in 1u32..4) {
            let f = FieldSpec::of_order(q).unwrap();
            let g = GeneratorMatrix::new(&f, cols[0].clone(), cols[1..].to_vec(), None).unwrap();
            let list = structures(g.m());
            let gamma = &list[which % list.len()];
            let scaled = g.scale_participant(0, lambda % q).unwrap_or(g.clone());
            prop_assert_eq!(
                verify_vector_scheme(&g, gamma).unwrap().pass,
                verify_vector_scheme(&scaled, gamma).unwrap().pass
            );
        }
    }
}
