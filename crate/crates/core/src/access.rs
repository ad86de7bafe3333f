//! Monotone access structures given by their basis of minimal authorized
//! subsets, and generators for the threshold, parallel and hierarchical models.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::Combinations;

/// Largest participant count accepted by the subset-lattice scans.
pub const MAX_SCAN_PARTICIPANTS: usize = 20;

/// Largest participant count representable at all.
pub const MAX_PARTICIPANTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccessError {
    #[error("participant index {0} out of range")]
    BadIndex(usize),
    #[error("threshold {t} invalid for {n} participants (need 2 <= t <= n)")]
    BadThreshold { t: usize, n: usize },
    #[error("groups do not partition the participant set")]
    NotAPartition,
    #[error("degenerate access structure: {0}")]
    Degenerate(String),
    #[error("upper group is empty")]
    EmptyUpper,
    #[error("{0} participants exceeds the scan limit")]
    TooLarge(usize),
    #[error("basis is not an antichain: {0} contains {1}")]
    NotAntichain(ParticipantSet, ParticipantSet),
    #[error("basis member {0} is a singleton")]
    SingletonBasis(ParticipantSet),
    #[error("participant {0} belongs to no basis member")]
    UncoveredParticipant(usize),
}

/// A set of participant indices, as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParticipantSet(u64);

impl ParticipantSet {
    pub const EMPTY: ParticipantSet = ParticipantSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Result<Self, AccessError> {
        let mut m = 0u64;
        for i in it {
            if i >= MAX_PARTICIPANTS {
                return Err(AccessError::BadIndex(i));
            }
            m |= 1 << i;
        }
        Ok(ParticipantSet(m))
    }

    pub fn from_mask(mask: u64) -> Self {
        ParticipantSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: ParticipantSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ParticipantSet) -> ParticipantSet {
        ParticipantSet(self.0 | other.0)
    }

    pub fn intersects(self, other: ParticipantSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn with(self, i: usize) -> ParticipantSet {
        ParticipantSet(self.0 | 1 << i)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ParticipantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ParticipantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl Serialize for ParticipantSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParticipantSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        ParticipantSet::from_indices(v).map_err(serde::de::Error::custom)
    }
}

/// An access structure on participants `0..n`, stored by its basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessStructure {
    n: usize,
    basis: Vec<ParticipantSet>,
}

impl AccessStructure {
    /// Validates that `basis` is an antichain of non-singleton sets covering
    /// every participant.
    pub fn new(n: usize, basis: Vec<ParticipantSet>) -> Result<Self, AccessError> {
        if n > MAX_PARTICIPANTS {
            return Err(AccessError::TooLarge(n));
        }
        let all = full_set(n);
        let mut basis = basis;
        basis.sort();
        basis.dedup();
        if basis.is_empty() {
            return Err(AccessError::Degenerate("empty basis".into()));
        }
        for b in &basis {
            if let Some(i) = b.iter().find(|&i| i >= n) {
                return Err(AccessError::BadIndex(i));
            }
            if b.len() == 1 {
                return Err(AccessError::SingletonBasis(*b));
            }
            if b.is_empty() {
                return Err(AccessError::Degenerate("empty set in basis".into()));
            }
        }
        for a in &basis {
            for b in &basis {
                if a != b && a.is_subset(*b) {
                    return Err(AccessError::NotAntichain(*b, *a));
                }
            }
        }
        let covered = basis.iter().fold(ParticipantSet::EMPTY, |acc, b| acc.union(*b));
        if covered != all {
            let missing = (0..n).find(|&i| !covered.contains(i)).unwrap();
            return Err(AccessError::UncoveredParticipant(missing));
        }
        Ok(AccessStructure { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[ParticipantSet] {
        &self.basis
    }

    pub fn is_authorized(&self, s: ParticipantSet) -> Result<bool, AccessError> {
        if let Some(i) = s.iter().find(|&i| i >= self.n) {
            return Err(AccessError::BadIndex(i));
        }
        Ok(self.basis.iter().any(|b| b.is_subset(s)))
    }

    /// Authorization flag for every subset mask of `0..n`, by dynamic
    /// programming over the subset lattice.
    fn authorized_table(&self) -> Result<Vec<bool>, AccessError> {
        if self.n > MAX_SCAN_PARTICIPANTS {
            return Err(AccessError::TooLarge(self.n));
        }
        let size = 1usize << self.n;
        let mut auth = vec![false; size];
        for b in &self.basis {
            auth[b.mask() as usize] = true;
        }
        for mask in 0..size {
            if auth[mask] {
                continue;
            }
            let mut m = mask;
            while m != 0 {
                let bit = m & m.wrapping_neg();
                if auth[mask ^ bit] {
                    auth[mask] = true;
                    break;
                }
                m ^= bit;
            }
        }
        Ok(auth)
    }

    /// Inclusion-maximal unauthorized subsets, in increasing mask order.
    pub fn maximal_unauthorized(&self) -> Result<Vec<ParticipantSet>, AccessError> {
        let auth = self.authorized_table()?;
        let size = auth.len();
        let mut out = Vec::new();
        for mask in 0..size {
            if auth[mask] {
                continue;
            }
            let maximal = (0..self.n).all(|i| mask >> i & 1 == 1 || auth[mask | 1 << i]);
            if maximal {
                out.push(ParticipantSet(mask as u64));
            }
        }
        Ok(out)
    }

    /// Every unauthorized subset, including the empty set.
    pub fn all_unauthorized(&self) -> Result<Vec<ParticipantSet>, AccessError> {
        let auth = self.authorized_table()?;
        Ok((0..auth.len())
            .filter(|&m| !auth[m])
            .map(|m| ParticipantSet(m as u64))
            .collect())
    }

    /// Every authorized subset.
    pub fn all_authorized(&self) -> Result<Vec<ParticipantSet>, AccessError> {
        let auth = self.authorized_table()?;
        Ok((0..auth.len())
            .filter(|&m| auth[m])
            .map(|m| ParticipantSet(m as u64))
            .collect())
    }
}

impl<'de> Deserialize<'de> for AccessStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            basis: Vec<ParticipantSet>,
        }
        let raw = Raw::deserialize(d)?;
        AccessStructure::new(raw.n, raw.basis).map_err(serde::de::Error::custom)
    }
}

fn full_set(n: usize) -> ParticipantSet {
    if n >= 64 {
        ParticipantSet(u64::MAX)
    } else {
        ParticipantSet((1u64 << n) - 1)
    }
}

fn t_subsets(members: &[usize], t: usize) -> impl Iterator<Item = ParticipantSet> + '_ {
    Combinations::new(members.len(), t)
        .map(move |idx| ParticipantSet::from_indices(idx.into_iter().map(|i| members[i])).unwrap())
}

/// (t, n) threshold structure: all t-subsets.
pub fn threshold_basis(t: usize, n: usize) -> Result<AccessStructure, AccessError> {
    if t < 2 || t > n {
        return Err(AccessError::BadThreshold { t, n });
    }
    if n > MAX_PARTICIPANTS {
        return Err(AccessError::TooLarge(n));
    }
    let all: Vec<usize> = (0..n).collect();
    AccessStructure::new(n, t_subsets(&all, t).collect())
}

fn check_partition(groups: &[Vec<usize>]) -> Result<usize, AccessError> {
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if n > MAX_PARTICIPANTS {
        return Err(AccessError::TooLarge(n));
    }
    let mut seen = vec![false; n];
    for &i in groups.iter().flatten() {
        if i >= n || seen[i] {
            return Err(AccessError::NotAPartition);
        }
        seen[i] = true;
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(AccessError::NotAPartition);
    }
    Ok(n)
}

/// Parallel model of strength t: t-subsets not contained in a single group.
pub fn parallel_basis(groups: &[Vec<usize>], t: usize) -> Result<AccessStructure, AccessError> {
    let n = check_partition(groups)?;
    if t < 2 {
        return Err(AccessError::BadThreshold { t, n });
    }
    if groups.len() < 2 {
        return Err(AccessError::Degenerate("parallel model needs at least two groups".into()));
    }
    let group_sets: Vec<ParticipantSet> = groups
        .iter()
        .map(|g| ParticipantSet::from_indices(g.iter().copied()).unwrap())
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let basis: Vec<ParticipantSet> = t_subsets(&all, t)
        .filter(|s| !group_sets.iter().any(|g| s.is_subset(*g)))
        .collect();
    if basis.is_empty() {
        return Err(AccessError::Degenerate("no t-subset meets two groups".into()));
    }
    AccessStructure::new(n, basis)
}

/// Hierarchical model of strength t: t-subsets meeting the upper group.
pub fn hierarchical_basis(upper: &[usize], lower: &[usize], t: usize) -> Result<AccessStructure, AccessError> {
    if upper.is_empty() {
        return Err(AccessError::EmptyUpper);
    }
    let n = check_partition(&[upper.to_vec(), lower.to_vec()].into_iter().filter(|g| !g.is_empty()).collect::<Vec<_>>())?;
    if t < 2 || t > n {
        return Err(AccessError::BadThreshold { t, n });
    }
    let up = ParticipantSet::from_indices(upper.iter().copied())?;
    let all: Vec<usize> = (0..n).collect();
    let basis: Vec<ParticipantSet> = t_subsets(&all, t).filter(|s| s.intersects(up)).collect();
    AccessStructure::new(n, basis)
}

/// File form of an access structure: either a named model or an explicit
/// basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AccessDescriptor {
    Model(ModelDescriptor),
    Basis(AccessStructure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelDescriptor {
    Threshold { t: usize, n: usize },
    Parallel { groups: Vec<Vec<usize>>, t: usize },
    Hierarchical { upper: Vec<usize>, lower: Vec<usize>, t: usize },
}

impl AccessDescriptor {
    pub fn build(&self) -> Result<AccessStructure, AccessError> {
        match self {
            AccessDescriptor::Basis(a) => Ok(a.clone()),
            AccessDescriptor::Model(ModelDescriptor::Threshold { t, n }) => threshold_basis(*t, *n),
            AccessDescriptor::Model(ModelDescriptor::Parallel { groups, t }) => parallel_basis(groups, *t),
            AccessDescriptor::Model(ModelDescriptor::Hierarchical { upper, lower, t }) => {
                hierarchical_basis(upper, lower, *t)
            }
        }
    }
}
