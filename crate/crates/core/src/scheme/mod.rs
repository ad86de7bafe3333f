//! Linear ideal schemes: a generator matrix (d, v_1, ..., v_m) over GF(q)
//! together with the access structure it is meant to realize.

mod share;
mod verify;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::access::{AccessDescriptor, AccessError, AccessStructure};
use crate::array::ArrayError;
use crate::field::{FieldError, FieldSpec, Repr};
use crate::linalg::LinalgError;

pub use share::{deal, reconstruct, shares_from_vector, Reconstruction, Share};
pub use verify::{
    verify_char, verify_definitional, verify_vector_array, verify_vector_columns, verify_vector_scheme, ConditionCheck, Method,
    VerificationReport, MAX_VERIFY_ROWS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("column {0} of the generator matrix is zero")]
    ZeroColumn(usize),
    #[error("column {index} has length {got}, expected {expected}")]
    ColumnLength { index: usize, expected: usize, got: usize },
    #[error("generator has {generator} participants but the access structure has {access}")]
    SizeMismatch { generator: usize, access: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("entry {0} is not a field element")]
    BadEntry(Repr),
    #[error("scheme did not pass verification")]
    UnverifiedScheme,
    #[error("shares are inconsistent with every distribution rule")]
    InconsistentShares,
    #[error("participant {0} supplied more than one share")]
    DuplicateShare(usize),
    #[error("participant index {0} out of range")]
    BadParticipant(usize),
    #[error("claimed the set is {}authorized but it is {}authorized", if *claimed { "" } else { "un" }, if *claimed { "un" } else { "" })]
    ClaimMismatch { claimed: bool },
    #[error("{0}")]
    TooLarge(String),
    #[error("threshold parameters invalid: {0}")]
    BadThreshold(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// G = (d, v_1, ..., v_m), stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    spec: FieldSpec,
    k: usize,
    dealer: Vec<Repr>,
    participants: Vec<Vec<Repr>>,
    labels: Vec<String>,
}

impl GeneratorMatrix {
    pub fn new(
        spec: &FieldSpec,
        dealer: Vec<Repr>,
        participants: Vec<Vec<Repr>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, SchemeError> {
        let k = dealer.len();
        let labels = labels.unwrap_or_else(|| (1..=participants.len()).map(|i| format!("P{i}")).collect());
        if labels.len() != participants.len() {
            return Err(SchemeError::LabelCount { expected: participants.len(), got: labels.len() });
        }
        for (index, col) in std::iter::once(&dealer).chain(&participants).enumerate() {
            if col.len() != k {
                return Err(SchemeError::ColumnLength { index, expected: k, got: col.len() });
            }
            if let Some(&bad) = col.iter().find(|&&e| !spec.contains(e)) {
                return Err(SchemeError::BadEntry(bad));
            }
            if col.iter().all(|&e| e == 0) {
                return Err(SchemeError::ZeroColumn(index));
            }
        }
        Ok(GeneratorMatrix { spec: spec.clone(), k, dealer, participants, labels })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Number of rows.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of participants.
    pub fn m(&self) -> usize {
        self.participants.len()
    }

    pub fn dealer(&self) -> &[Repr] {
        &self.dealer
    }

    pub fn participant(&self, i: usize) -> &[Repr] {
        &self.participants[i]
    }

    pub fn participants(&self) -> &[Vec<Repr>] {
        &self.participants
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Columns in array order: dealer first.
    pub fn columns(&self) -> impl Iterator<Item = &[Repr]> {
        std::iter::once(self.dealer.as_slice()).chain(self.participants.iter().map(|v| v.as_slice()))
    }

    /// Multiplies participant column `i` by a nonzero scalar.
    pub fn scale_participant(&self, i: usize, lambda: Repr) -> Result<Self, SchemeError> {
        if lambda == 0 {
            return Err(SchemeError::ZeroColumn(i + 1));
        }
        let mut out = self.clone();
        for e in &mut out.participants[i] {
            *e = self.spec.mul(*e, lambda);
        }
        Ok(out)
    }
}

/// Generator of the (t, n) threshold scheme by polynomial evaluation:
/// d = (1, 0, ..., 0), participant i gets (1, a, ..., a^{t-1}) for the i-th
/// nonzero element a in repr order, and the last participant may take the
/// point at infinity (0, ..., 0, 1). Needs n <= q.
pub fn threshold_generator(spec: &FieldSpec, t: usize, n: usize) -> Result<GeneratorMatrix, SchemeError> {
    let q = spec.order() as usize;
    if t < 2 || t > n {
        return Err(SchemeError::BadThreshold(format!("need 2 <= t <= n, got t={t}, n={n}")));
    }
    if n > q {
        return Err(SchemeError::BadThreshold(format!("n={n} exceeds q={q}")));
    }
    let mut dealer = vec![0; t];
    dealer[0] = 1;
    let mut participants: Vec<Vec<Repr>> = (1..q as Repr)
        .take(n)
        .map(|a| (0..t as u64).map(|e| spec.pow(a, e)).collect())
        .collect();
    if participants.len() < n {
        let mut inf = vec![0; t];
        inf[t - 1] = 1;
        participants.push(inf);
    }
    GeneratorMatrix::new(spec, dealer, participants, None)
}

/// A generator matrix bound to an access structure, with the vector-space
/// verification report that was produced for the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    generator: GeneratorMatrix,
    gamma: AccessStructure,
    report: VerificationReport,
}

impl Scheme {
    pub fn new(generator: GeneratorMatrix, gamma: AccessStructure) -> Result<Self, SchemeError> {
        let report = verify_vector_scheme(&generator, &gamma)?;
        Ok(Scheme { generator, gamma, report })
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn gamma(&self) -> &AccessStructure {
        &self.gamma
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn is_verified(&self) -> bool {
        self.report.pass
    }

    pub fn spec(&self) -> &FieldSpec {
        self.generator.spec()
    }
}

/// log|K| / log|S|. Keys and shares are both single elements of GF(q) in
/// every scheme built here, so the rate is exactly one.
pub fn information_rate(_scheme: &Scheme) -> Ratio<u64> {
    Ratio::from_integer(1)
}

/// Serialized generator: columns over the field with labels.
#[derive(Serialize, Deserialize)]
pub(crate) struct GeneratorFile {
    pub field: FieldSpec,
    pub k: usize,
    pub dealer: Vec<Repr>,
    pub participants: Vec<Vec<Repr>>,
    pub labels: Vec<String>,
}

impl Serialize for GeneratorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GeneratorFile {
            field: self.spec.clone(),
            k: self.k,
            dealer: self.dealer.clone(),
            participants: self.participants.clone(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = GeneratorFile::deserialize(d)?;
        if f.k != f.dealer.len() {
            return Err(serde::de::Error::custom(format!("k = {} but dealer has {} entries", f.k, f.dealer.len())));
        }
        GeneratorMatrix::new(&f.field, f.dealer, f.participants, Some(f.labels)).map_err(serde::de::Error::custom)
    }
}

/// Scheme file: the generator columns, the access structure, and the report
/// from the last verification. Reading a file re-verifies it; a stored
/// report is informational only.
#[derive(Serialize, Deserialize)]
struct SchemeFile {
    #[serde(flatten)]
    generator: GeneratorMatrix,
    access: AccessDescriptor,
    #[serde(default, skip_deserializing)]
    verification: Option<VerificationReport>,
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SchemeFile {
            generator: self.generator.clone(),
            access: AccessDescriptor::Basis(self.gamma.clone()),
            verification: Some(self.report.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = SchemeFile::deserialize(d)?;
        let gamma = f.access.build().map_err(serde::de::Error::custom)?;
        Scheme::new(f.generator, gamma).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::threshold_basis;
    use crate::linalg::rank_of;

    #[test]
    fn generator_validation() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(GeneratorMatrix::new(&f, vec![0, 0], vec![vec![1, 1]], None), Err(SchemeError::ZeroColumn(0)));
        assert_eq!(GeneratorMatrix::new(&f, vec![1, 0], vec![vec![0, 0]], None), Err(SchemeError::ZeroColumn(1)));
        assert!(matches!(
            GeneratorMatrix::new(&f, vec![1, 0], vec![vec![1]], None),
            Err(SchemeError::ColumnLength { index: 1, .. })
        ));
        assert_eq!(GeneratorMatrix::new(&f, vec![1, 5], vec![], None), Err(SchemeError::BadEntry(5)));
    }

    #[test]
    fn threshold_generator_matches_polynomial_evaluation() {
        let f = FieldSpec::prime(5).unwrap();
        let g = threshold_generator(&f, 2, 3).unwrap();
        assert_eq!(g.dealer(), &[1, 0]);
        assert_eq!(g.participants(), &[vec![1, 1], vec![1, 2], vec![1, 3]]);
        let g = threshold_generator(&f, 3, 5).unwrap();
        assert_eq!(g.participant(4), &[0, 0, 1]);
        // Any t columns of (d, v_1..v_n) are independent.
        let cols: Vec<&[Repr]> = g.columns().collect();
        for idx in crate::combinatorics::Combinations::new(cols.len(), 3) {
            let vs: Vec<&[Repr]> = idx.iter().map(|&i| cols[i]).collect();
            assert_eq!(rank_of(&f, &vs), 3);
        }
        assert!(threshold_generator(&f, 2, 6).is_err());
        assert!(threshold_generator(&f, 1, 3).is_err());
    }

    #[test]
    fn rate_is_one() {
        for q in [2, 3, 4, 9] {
            let f = FieldSpec::of_order(q).unwrap();
            let s = Scheme::new(threshold_generator(&f, 2, 2).unwrap(), threshold_basis(2, 2).unwrap()).unwrap();
            let rho = information_rate(&s);
            assert_eq!(rho, Ratio::from_integer(1));
            assert!(rho <= Ratio::from_integer(1));
        }
    }

    #[test]
    fn generator_json_round_trip() {
        let f = FieldSpec::of_order(9).unwrap();
        let g = threshold_generator(&f, 3, 7).unwrap();
        let back: GeneratorMatrix = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn scheme_json_round_trip() {
        let f = FieldSpec::prime(5).unwrap();
        let s = Scheme::new(threshold_generator(&f, 2, 3).unwrap(), threshold_basis(2, 3).unwrap()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["field", "k", "dealer", "participants", "labels", "access", "verification"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: Scheme = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        // A model descriptor is accepted in place of a basis.
        let mut v = v;
        v["access"] = serde_json::json!({"model": "threshold", "t": 2, "n": 3});
        v["dealer"] = serde_json::json!([0, 0]);
        assert!(serde_json::from_value::<Scheme>(v).is_err());
    }
}
