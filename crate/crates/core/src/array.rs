//! Representative arrays and the orthogonality checks run on their column
//! subsets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::access::ParticipantSet;
use crate::combinatorics::Combinations;
use crate::field::{FieldSpec, Repr};
use crate::linalg::reduced_basis;
use crate::scheme::GeneratorMatrix;

/// Largest column subset handed to the exponential subset searches.
pub const MAX_SEARCH_COLUMNS: usize = 20;

/// Largest row count produced by `generate_array`.
pub const MAX_GENERATED_ROWS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("column index {0} out of range")]
    BadColumnIndex(usize),
    #[error("column {0} is identically zero")]
    ZeroColumn(usize),
    #[error("row {row} has {got} entries, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("array has no rows")]
    NoRows,
    #[error("array has no columns")]
    NoColumns,
    #[error("column {column} has length {got}, expected {expected}")]
    ColumnLength { column: usize, expected: usize, got: usize },
    #[error("entry {0} is not a field element")]
    BadEntry(Repr),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("{0} columns exceeds the subset search limit")]
    TooManyColumns(usize),
    #[error("array would have {0} rows")]
    TooLarge(u64),
    #[error("array is not linear: {0}")]
    NotLinear(String),
}

/// Distribution rules as rows; column 0 carries the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeArray {
    spec: FieldSpec,
    labels: Vec<String>,
    n_cols: usize,
    rows: Vec<Repr>,
}

/// Hashable projection of one row onto a column subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Radix(u128),
    Wide(Vec<Repr>),
}

impl RepresentativeArray {
    pub fn new(spec: &FieldSpec, labels: Vec<String>, rows: Vec<Vec<Repr>>) -> Result<Self, ArrayError> {
        let n_cols = labels.len();
        if n_cols == 0 {
            return Err(ArrayError::NoColumns);
        }
        if rows.is_empty() {
            return Err(ArrayError::NoRows);
        }
        let mut flat = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(ArrayError::RowLength { row: i, expected: n_cols, got: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&e| !spec.contains(e)) {
                return Err(ArrayError::BadEntry(bad));
            }
            flat.extend_from_slice(row);
        }
        Ok(RepresentativeArray { spec: spec.clone(), labels, n_cols, rows: flat })
    }

    /// Default labels: `D`, then `P1..Pm`.
    pub fn default_labels(m: usize) -> Vec<String> {
        std::iter::once("D".to_string()).chain((1..=m).map(|i| format!("P{i}"))).collect()
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of participant columns.
    pub fn n_participants(&self) -> usize {
        self.n_cols - 1
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len() / self.n_cols
    }

    pub fn row(&self, i: usize) -> &[Repr] {
        &self.rows[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Repr]> {
        self.rows.chunks(self.n_cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<Repr>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    fn check_cols(&self, cols: &[usize]) -> Result<Vec<usize>, ArrayError> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.n_cols) {
            return Err(ArrayError::BadColumnIndex(bad));
        }
        let mut c = cols.to_vec();
        c.sort_unstable();
        c.dedup();
        Ok(c)
    }

    /// Column indices of a participant subset (participant i sits in column i+1).
    pub fn participant_columns(&self, b: ParticipantSet) -> Result<Vec<usize>, ArrayError> {
        let cols: Vec<usize> = b.iter().map(|i| i + 1).collect();
        self.check_cols(&cols)
    }

    fn key(&self, row: &[Repr], cols: &[usize]) -> Key {
        let q = self.spec.order() as u128;
        let mut acc: u128 = 0;
        for &c in cols {
            match acc.checked_mul(q).and_then(|a| a.checked_add(row[c] as u128)) {
                Some(a) => acc = a,
                None => return Key::Wide(cols.iter().map(|&c| row[c]).collect()),
            }
        }
        Key::Radix(acc)
    }

    fn tuple_counts(&self, cols: &[usize]) -> HashMap<Key, usize> {
        let mut counts = HashMap::new();
        for row in self.rows() {
            *counts.entry(self.key(row, cols)).or_insert(0) += 1;
        }
        counts
    }

    fn orthogonal_sorted(&self, cols: &[usize]) -> bool {
        if cols.is_empty() {
            return true;
        }
        let n = self.n_rows() as u128;
        let q = self.spec.order() as u128;
        let Some(cells) = q.checked_pow(cols.len() as u32) else {
            return false;
        };
        if cells > n || !n.is_multiple_of(cells) {
            return false;
        }
        let lambda = (n / cells) as usize;
        let counts = self.tuple_counts(cols);
        counts.len() as u128 == cells && counts.values().all(|&c| c == lambda)
    }

    /// Every tuple over `cols` occurs exactly |F|/q^|cols| times.
    pub fn is_orthogonal(&self, cols: &[usize]) -> Result<bool, ArrayError> {
        let cols = self.check_cols(cols)?;
        Ok(self.orthogonal_sorted(&cols))
    }

    /// Largest t such that every t-subset of `cols` is orthogonal.
    pub fn strength(&self, cols: &[usize]) -> Result<usize, ArrayError> {
        let cols = self.check_cols(cols)?;
        if cols.len() > MAX_SEARCH_COLUMNS {
            return Err(ArrayError::TooManyColumns(cols.len()));
        }
        let mut t = 0;
        for size in 1..=cols.len() {
            let all = Combinations::new(cols.len(), size)
                .all(|idx| self.orthogonal_sorted(&idx.iter().map(|&i| cols[i]).collect::<Vec<_>>()));
            if !all {
                break;
            }
            t = size;
        }
        Ok(t)
    }

    /// All orthogonal subsets of maximum size, found level by level: a set
    /// is only tried once every subset one smaller has passed.
    pub fn maximum_orthogonal_subsets(&self, cols: &[usize]) -> Result<Vec<Vec<usize>>, ArrayError> {
        let cols = self.check_cols(cols)?;
        if cols.len() > MAX_SEARCH_COLUMNS {
            return Err(ArrayError::TooManyColumns(cols.len()));
        }
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        loop {
            let known: std::collections::HashSet<&Vec<usize>> = level.iter().collect();
            let mut next = Vec::new();
            for s in &level {
                let start = s.last().map_or(0, |&l| cols.iter().position(|&c| c == l).unwrap() + 1);
                for &c in &cols[start..] {
                    let mut cand = s.clone();
                    cand.push(c);
                    let faces_ok = (0..cand.len()).all(|skip| {
                        let face: Vec<usize> =
                            cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                        known.contains(&face)
                    });
                    if faces_ok && self.orthogonal_sorted(&cand) {
                        next.push(cand);
                    }
                }
            }
            if next.is_empty() {
                return Ok(level);
            }
            level = next;
        }
    }

    /// Maximum size of an orthogonal subset of `cols`.
    pub fn orthogonal_rank(&self, cols: &[usize]) -> Result<usize, ArrayError> {
        Ok(self.maximum_orthogonal_subsets(cols)?[0].len())
    }

    /// Rows that agree on any maximum orthogonal subset agree on all of `cols`.
    pub fn is_regular(&self, cols: &[usize]) -> Result<bool, ArrayError> {
        let cols = self.check_cols(cols)?;
        let maxima = self.maximum_orthogonal_subsets(&cols)?;
        if maxima[0].len() == cols.len() {
            return Ok(true);
        }
        for s in &maxima {
            let rest: Vec<usize> = cols.iter().copied().filter(|c| !s.contains(c)).collect();
            if !self.determines(s, &rest) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The projection on `from` is a function of the projection on `to`.
    fn determines(&self, from: &[usize], to: &[usize]) -> bool {
        let mut seen: HashMap<Key, Key> = HashMap::new();
        for row in self.rows() {
            let k = self.key(row, from);
            let v = self.key(row, to);
            match seen.get(&k) {
                Some(prev) if *prev != v => return false,
                Some(_) => {}
                None => {
                    seen.insert(k, v);
                }
            }
        }
        true
    }

    /// Shares of `b` determine the secret.
    pub fn check_k_uniqueness(&self, b: ParticipantSet) -> Result<bool, ArrayError> {
        let cols = self.participant_columns(b)?;
        Ok(self.determines(&cols, &[0]))
    }

    /// For every share tuple occurring on `b`, each secret occurs equally
    /// often among the matching rows.
    pub fn check_k_balance(&self, b: ParticipantSet) -> Result<bool, ArrayError> {
        let cols = self.participant_columns(b)?;
        let q = self.spec.order() as usize;
        let mut groups: HashMap<Key, HashMap<Repr, usize>> = HashMap::new();
        for row in self.rows() {
            *groups.entry(self.key(row, &cols)).or_default().entry(row[0]).or_insert(0) += 1;
        }
        Ok(groups.values().all(|dist| {
            let first = *dist.values().next().unwrap();
            dist.len() == q && dist.values().all(|&c| c == first)
        }))
    }

    /// Secret distribution among rows whose shares on `b` equal `shares`.
    pub fn conditional_secret_counts(&self, b: ParticipantSet, shares: &[Repr]) -> Result<HashMap<Repr, usize>, ArrayError> {
        let cols = self.participant_columns(b)?;
        let mut out = HashMap::new();
        for row in self.rows() {
            if cols.iter().zip(shares).all(|(&c, &s)| row[c] == s) {
                *out.entry(row[0]).or_insert(0) += 1;
            }
        }
        Ok(out)
    }

    pub fn zero_column(&self) -> Option<usize> {
        (0..self.n_cols).find(|&c| self.rows().all(|r| r[c] == 0))
    }

    /// Recovers a generator matrix whose array has the same rows, each with
    /// the same multiplicity. Fails unless the distinct rows form a subspace
    /// and every row repeats equally often.
    pub fn recover_generator(&self) -> Result<GeneratorMatrix, ArrayError> {
        if let Some(c) = self.zero_column() {
            return Err(ArrayError::ZeroColumn(c));
        }
        let (dealer, participants) = self.recover_columns()?;
        GeneratorMatrix::new(&self.spec, dealer, participants, Some(self.labels[1..].to_vec()))
            .map_err(|e| ArrayError::NotLinear(e.to_string()))
    }

    /// Columns (d, v_1, ..., v_m) of a generator for the row space, zero
    /// columns allowed.
    pub fn recover_columns(&self) -> Result<(Vec<Repr>, Vec<Vec<Repr>>), ArrayError> {
        let mut mult: HashMap<&[Repr], usize> = HashMap::new();
        for row in self.rows() {
            *mult.entry(row).or_insert(0) += 1;
        }
        let distinct: Vec<Vec<Repr>> = mult.keys().map(|r| r.to_vec()).collect();
        let basis = reduced_basis(&self.spec, &distinct, self.n_cols);
        let rho = basis.len();
        let span_size = (self.spec.order() as u128).checked_pow(rho as u32);
        if span_size != Some(distinct.len() as u128) {
            return Err(ArrayError::NotLinear(format!(
                "{} distinct rows but the row space has dimension {}",
                distinct.len(),
                rho
            )));
        }
        let first = *mult.values().next().unwrap();
        if mult.values().any(|&c| c != first) {
            return Err(ArrayError::NotLinear("rows repeat unevenly".into()));
        }
        let column = |c: usize| basis.iter().map(|r| r[c]).collect::<Vec<Repr>>();
        Ok((column(0), (1..self.n_cols).map(column).collect()))
    }
}

/// All rows xᵀG for x over GF(q)^k, x in lexicographic order with the first
/// coordinate most significant.
pub fn generate_array(g: &GeneratorMatrix) -> Result<RepresentativeArray, ArrayError> {
    let cols: Vec<&[Repr]> = g.columns().collect();
    if let Some(c) = cols.iter().position(|c| c.iter().all(|&e| e == 0)) {
        return Err(ArrayError::ZeroColumn(c));
    }
    let mut labels = vec!["D".to_string()];
    labels.extend(g.labels().iter().cloned());
    array_from_columns(g.spec(), labels, &cols)
}

/// [`generate_array`] on raw columns of equal length, zero columns allowed.
pub fn array_from_columns(spec: &FieldSpec, labels: Vec<String>, cols: &[&[Repr]]) -> Result<RepresentativeArray, ArrayError> {
    if cols.is_empty() {
        return Err(ArrayError::NoColumns);
    }
    if labels.len() != cols.len() {
        return Err(ArrayError::LabelCount { expected: cols.len(), got: labels.len() });
    }
    let k = cols[0].len();
    if let Some(column) = cols.iter().position(|c| c.len() != k) {
        return Err(ArrayError::ColumnLength { column, expected: k, got: cols[column].len() });
    }
    if let Some(&e) = cols.iter().flat_map(|c| c.iter()).find(|&&e| !spec.contains(e)) {
        return Err(ArrayError::BadEntry(e));
    }
    let q = spec.order() as u64;
    let n_rows = q
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_GENERATED_ROWS)
        .ok_or(ArrayError::TooLarge(q.saturating_pow(k as u32)))?;
    let n_cols = cols.len();
    let mut rows = Vec::with_capacity(n_rows as usize * n_cols);
    let mut x = vec![0 as Repr; k];
    for _ in 0..n_rows {
        for col in cols {
            let mut acc = 0;
            for (xi, gi) in x.iter().zip(col.iter()) {
                acc = spec.add(acc, spec.mul(*xi, *gi));
            }
            rows.push(acc);
        }
        for i in (0..k).rev() {
            x[i] += 1;
            if (x[i] as u64) < q {
                break;
            }
            x[i] = 0;
        }
    }
    Ok(RepresentativeArray { spec: spec.clone(), labels, n_cols, rows })
}

#[derive(Serialize, Deserialize)]
struct ArrayFile {
    spec: FieldSpec,
    labels: Vec<String>,
    rows: Vec<Vec<Repr>>,
}

impl Serialize for RepresentativeArray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ArrayFile { spec: self.spec.clone(), labels: self.labels.clone(), rows: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepresentativeArray {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = ArrayFile::deserialize(d)?;
        RepresentativeArray::new(&f.spec, f.labels, f.rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_of;
    use proptest::prelude::*;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn gen(spec: &FieldSpec, cols: &[&[Repr]]) -> GeneratorMatrix {
        GeneratorMatrix::new(spec, cols[0].to_vec(), cols[1..].iter().map(|c| c.to_vec()).collect(), None).unwrap()
    }

    fn shamir_23() -> RepresentativeArray {
        let f = gf(5);
        generate_array(&gen(&f, &[&[1, 0], &[1, 1], &[1, 2], &[1, 3]])).unwrap()
    }

    fn raw(spec: &FieldSpec, rows: &[&[Repr]]) -> RepresentativeArray {
        let n = rows[0].len();
        RepresentativeArray::new(spec, RepresentativeArray::default_labels(n - 1), rows.iter().map(|r| r.to_vec()).collect())
            .unwrap()
    }

    fn set(v: &[usize]) -> ParticipantSet {
        ParticipantSet::from_indices(v.iter().copied()).unwrap()
    }

    /// Orthogonality by the definition: every tuple counted against a full
    /// enumeration of S^t.
    fn oracle_orthogonal(m: &RepresentativeArray, cols: &[usize]) -> bool {
        let q = m.spec().order() as usize;
        let t = cols.len();
        let cells = q.pow(t as u32);
        if !m.n_rows().is_multiple_of(cells) {
            return false;
        }
        let lambda = m.n_rows() / cells;
        (0..cells).all(|code| {
            let tuple: Vec<Repr> = (0..t).map(|i| ((code / q.pow(i as u32)) % q) as Repr).collect();
            m.rows().filter(|r| cols.iter().zip(&tuple).all(|(&c, &v)| r[c] == v)).count() == lambda
        })
    }

    #[test]
    fn generate_examples() {
        let f2 = gf(2);
        let m = generate_array(&gen(&f2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let m = shamir_23();
        assert_eq!((m.n_rows(), m.n_cols()), (25, 4));
        // x = (a, b) gives row (a, a+b, a+2b, a+3b).
        for a in 0..5u32 {
            for b in 0..5u32 {
                let row = m.row((a * 5 + b) as usize);
                for i in 0..4u32 {
                    let expected = if i == 0 { a } else { (a + i * b) % 5 };
                    assert_eq!(row[i as usize], expected);
                }
            }
        }

        let f3 = gf(3);
        let g = GeneratorMatrix::new(&f3, vec![1], vec![], None).unwrap();
        assert_eq!(generate_array(&g).unwrap().to_rows(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn orthogonality_examples() {
        let f2 = gf(2);
        let m = raw(&f2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(m.is_orthogonal(&[0, 1]).unwrap());
        let z = raw(&f2, &[&[0, 0], &[0, 1], &[0, 0], &[0, 1]]);
        assert!(!z.is_orthogonal(&[0]).unwrap());
        let s = shamir_23();
        for pair in Combinations::new(4, 2) {
            assert!(s.is_orthogonal(&pair).unwrap());
            assert!(oracle_orthogonal(&s, &pair));
        }
        assert_eq!(s.is_orthogonal(&[4]), Err(ArrayError::BadColumnIndex(4)));
    }

    #[test]
    fn strength_examples() {
        let f2 = gf(2);
        let m = raw(&f2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(m.strength(&[0, 1]).unwrap(), 2);
        let s = shamir_23();
        assert_eq!(s.strength(&[0, 1, 2, 3]).unwrap(), 2);
        for triple in Combinations::new(4, 3) {
            assert!(!oracle_orthogonal(&s, &triple));
        }
        let c = raw(&f2, &[&[0, 1], &[1, 1], &[0, 1], &[1, 1]]);
        assert_eq!(c.strength(&[0, 1]).unwrap(), 0);
    }

    #[test]
    fn orthogonal_rank_examples() {
        let f2 = gf(2);
        let m = generate_array(&gen(&f2, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(m.orthogonal_rank(&[0, 1, 2]).unwrap(), 2);
        let brute = (1..8u32)
            .filter(|mask| oracle_orthogonal(&m, &(0..3).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()))
            .map(|mask| mask.count_ones())
            .max()
            .unwrap();
        assert_eq!(brute, 2);
        assert_eq!(m.maximum_orthogonal_subsets(&[0, 1, 2]).unwrap().len(), 3);
        let one = raw(&f2, &[&[0], &[1]]);
        assert_eq!(one.orthogonal_rank(&[0]).unwrap(), 1);
    }

    #[test]
    fn regularity_examples() {
        let s = shamir_23();
        assert!(s.is_regular(&[0, 1, 2, 3]).unwrap());
        // Doubling a linear array and flipping one entry in two copies keeps
        // the columns uniform but lets rows agreeing on {0,1} split on column 2.
        let f2 = gf(2);
        let lin = generate_array(&gen(&f2, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let mut rows = lin.to_rows();
        rows.extend(lin.to_rows());
        rows[4][2] ^= 1;
        rows[5][2] ^= 1;
        let m = RepresentativeArray::new(&f2, RepresentativeArray::default_labels(2), rows).unwrap();
        assert_eq!(m.orthogonal_rank(&[0, 1, 2]).unwrap(), 2);
        assert!(m.is_orthogonal(&[2]).unwrap());
        assert!(!m.is_regular(&[0, 1, 2]).unwrap());
        let one = raw(&f2, &[&[0], &[1]]);
        assert!(one.is_regular(&[0]).unwrap());
    }

    #[test]
    fn uniqueness_and_balance_examples() {
        let s = shamir_23();
        assert!(s.check_k_uniqueness(set(&[0, 1, 2])).unwrap());
        assert!(!s.check_k_uniqueness(ParticipantSet::EMPTY).unwrap());
        assert!(!s.check_k_uniqueness(set(&[1])).unwrap());
        assert!(s.check_k_uniqueness(set(&[0, 2])).unwrap());
        assert!(s.check_k_balance(ParticipantSet::EMPTY).unwrap());
        assert!(s.check_k_balance(set(&[0])).unwrap());
        assert!(!s.check_k_balance(set(&[0, 1])).unwrap());
        for share in 0..5 {
            let counts = s.conditional_secret_counts(set(&[2]), &[share]).unwrap();
            assert_eq!(counts.len(), 5);
            assert!(counts.values().all(|&c| c == 1));
        }
        assert_eq!(s.check_k_balance(set(&[3])), Err(ArrayError::BadColumnIndex(4)));
    }

    #[test]
    fn recover_generator_round_trip() {
        let s = shamir_23();
        let g = s.recover_generator().unwrap();
        assert_eq!(g.k(), 2);
        let again = generate_array(&g).unwrap();
        let mut a = s.to_rows();
        let mut b = again.to_rows();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        let f2 = gf(2);
        let nonlinear = raw(&f2, &[&[0, 1], &[1, 0]]);
        assert!(matches!(nonlinear.recover_generator(), Err(ArrayError::NotLinear(_))));
        let uneven = raw(&f2, &[&[0, 0], &[1, 1], &[1, 1]]);
        assert!(matches!(uneven.recover_generator(), Err(ArrayError::NotLinear(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = shamir_23();
        let json = serde_json::to_string(&s).unwrap();
        let back: RepresentativeArray = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<RepresentativeArray>(
            r#"{"spec":{"p":2,"n":1,"modulus":[1,1]},"labels":["D"],"rows":[[2]]}"#
        )
        .is_err());
    }

    fn small_generator() -> impl Strategy<Value = (u32, usize, Vec<Vec<Repr>>)> {
        prop_oneof![Just(2u32), Just(3), Just(4), Just(5)].prop_flat_map(|q| {
            let k = if q == 2 { 1usize..=4 } else { 1usize..=3 };
            k.prop_flat_map(move |k| {
                let col = proptest::collection::vec(0..q, k).prop_filter("nonzero", |c| c.iter().any(|&e| e != 0));
                proptest::collection::vec(col, 2..=5).prop_map(move |cols| (q, k, cols))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn orthogonal_iff_independent((q, _k, cols) in small_generator()) {
            let f = gf(q);
            let refs: Vec<&[Repr]> = cols.iter().map(|c| c.as_slice()).collect();
            let m = generate_array(&gen(&f, &refs)).unwrap();
            let n = cols.len();
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let vs: Vec<&[Repr]> = subset.iter().map(|&i| cols[i].as_slice()).collect();
                let independent = rank_of(&f, &vs) == vs.len();
                prop_assert_eq!(m.is_orthogonal(&subset).unwrap(), independent);
            }
            let all: Vec<usize> = (0..n).collect();
            prop_assert_eq!(m.orthogonal_rank(&all).unwrap(), rank_of(&f, &refs));
            prop_assert!(m.is_regular(&all).unwrap());
        }

        #[test]
        fn generated_rows_closed_under_addition((q, _k, cols) in small_generator()) {
            let f = gf(q);
            let refs: Vec<&[Repr]> = cols.iter().map(|c| c.as_slice()).collect();
            let m = generate_array(&gen(&f, &refs)).unwrap();
            let rows: std::collections::HashSet<Vec<Repr>> = m.rows().map(|r| r.to_vec()).collect();
            for a in &rows {
                for b in &rows {
                    let s: Vec<Repr> = a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect();
                    prop_assert!(rows.contains(&s));
                }
            }
        }

        #[test]
        fn strength_is_downward_closed((q, _k, cols) in small_generator()) {
            let f = gf(q);
            let refs: Vec<&[Repr]> = cols.iter().map(|c| c.as_slice()).collect();
            let m = generate_array(&gen(&f, &refs)).unwrap();
            let all: Vec<usize> = (0..cols.len()).collect();
            let t = m.strength(&all).unwrap();
            for size in 1..=t {
                for idx in Combinations::new(cols.len(), size) {
                    prop_assert!(m.is_orthogonal(&idx).unwrap());
                }
            }
        }

        #[test]
        fn balanced_secret_column_is_uniform((q, _k, cols) in small_generator()) {
            let f = gf(q);
            let refs: Vec<&[Repr]> = cols.iter().map(|c| c.as_slice()).collect();
            let m = generate_array(&gen(&f, &refs)).unwrap();
            prop_assert!(m.check_k_balance(ParticipantSet::EMPTY).unwrap());
            let counts = m.conditional_secret_counts(ParticipantSet::EMPTY, &[]).unwrap();
            prop_assert!(counts.values().all(|&c| c == m.n_rows() / q as usize));
        }
    }
}
