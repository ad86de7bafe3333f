//! Dealing and reconstruction.

use std::collections::HashSet;

use rand::Rng;

use super::{Scheme, SchemeError};
use crate::access::ParticipantSet;
use crate::field::{FieldElement, Repr};
use crate::linalg::{dot, rank_of, FMatrix, FVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub index: usize,
    pub value: FieldElement,
}

/// Outcome of [`reconstruct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reconstruction {
    Secret(FieldElement),
    /// Distribution rules consistent with the shares, grouped by key:
    /// `(key, number of rules)` for every key of the field.
    Ambiguous { matching_rules: u128, per_key: Vec<(FieldElement, u128)> },
}

/// Shares x·v_i of every participant for the distribution vector x.
pub fn shares_from_vector(scheme: &Scheme, x: &[Repr]) -> Vec<Share> {
    let g = scheme.generator();
    let spec = g.spec();
    (0..g.m())
        .map(|i| Share { index: i, value: spec.element(dot(spec, x, g.participant(i))).unwrap() })
        .collect()
}

/// Draws x uniformly among vectors with x·d = secret and hands out x·v_i.
/// All randomness comes from `rng`.
pub fn deal<R: Rng + ?Sized>(scheme: &Scheme, secret: &FieldElement, rng: &mut R) -> Result<Vec<Share>, SchemeError> {
    if !scheme.is_verified() {
        return Err(SchemeError::UnverifiedScheme);
    }
    let spec = scheme.spec();
    if secret.spec() != spec {
        return Err(crate::field::FieldError::SpecMismatch.into());
    }
    let d = scheme.generator().dealer();
    let q = spec.order();
    let mut x: Vec<Repr> = (0..d.len()).map(|_| rng.gen_range(0..q)).collect();
    let pivot = d.iter().position(|&e| e != 0).expect("dealer column is nonzero");
    x[pivot] = 0;
    let rest = dot(spec, &x, d);
    x[pivot] = spec.div(spec.sub(secret.repr(), rest), d[pivot]).unwrap();
    Ok(shares_from_vector(scheme, &x))
}

/// Recovers the secret from `shares`. `claim_authorized` is the caller's
/// belief about the set; it must match the access structure.
///
/// Authorized sets yield the secret. Unauthorized sets yield the exact count
/// of consistent distribution rules for each key. Shares that no rule
/// produces give `InconsistentShares`; an exactly determined set with a
/// tampered share instead yields a wrong but consistent secret.
pub fn reconstruct(scheme: &Scheme, shares: &[Share], claim_authorized: bool) -> Result<Reconstruction, SchemeError> {
    let g = scheme.generator();
    let spec = g.spec();
    let mut seen = HashSet::new();
    for s in shares {
        if s.index >= g.m() {
            return Err(SchemeError::BadParticipant(s.index));
        }
        if !seen.insert(s.index) {
            return Err(SchemeError::DuplicateShare(s.index));
        }
        if s.value.spec() != spec {
            return Err(crate::field::FieldError::SpecMismatch.into());
        }
    }
    let set = ParticipantSet::from_indices(shares.iter().map(|s| s.index))?;
    let authorized = scheme.gamma().is_authorized(set)?;
    if authorized != claim_authorized {
        return Err(SchemeError::ClaimMismatch { claimed: claim_authorized });
    }

    let k = g.k();
    let q = spec.order() as u128;
    let rows: Vec<FVector> = shares.iter().map(|s| FVector::new(spec, g.participant(s.index).to_vec())).collect::<Result<_, _>>()?;
    let rhs = FVector::new(spec, shares.iter().map(|s| s.value.repr()).collect())?;
    let solution = if rows.is_empty() {
        Some(FVector::zeros(spec, k))
    } else {
        FMatrix::from_rows(spec, &rows)?.solve(&rhs)?.map(|s| s.particular)
    };
    let Some(x) = solution else {
        return Err(SchemeError::InconsistentShares);
    };

    let vs: Vec<&[Repr]> = shares.iter().map(|s| g.participant(s.index)).collect();
    let r = rank_of(spec, &vs);
    let mut with_d = vs.clone();
    with_d.push(g.dealer());
    let rd = rank_of(spec, &with_d);
    let value = dot(spec, x.coords(), g.dealer());
    if rd == r {
        return Ok(Reconstruction::Secret(spec.element(value)?));
    }
    // d is outside the span of the shares' vectors, so x·d is uniform over
    // the solution coset: each key is hit by q^(k - rank - 1) of the q^(k - rank) rules.
    let matching = q.pow((k - r) as u32);
    let each = q.pow((k - rd) as u32);
    Ok(Reconstruction::Ambiguous { matching_rules: matching, per_key: spec.elements().map(|e| (e, each)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::threshold_basis;
    use crate::array::generate_array;
    use crate::field::FieldSpec;
    use crate::scheme::threshold_generator;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shamir_scheme() -> Scheme {
        let f = FieldSpec::prime(5).unwrap();
        Scheme::new(threshold_generator(&f, 2, 3).unwrap(), threshold_basis(2, 3).unwrap()).unwrap()
    }

    fn values(shares: &[Share]) -> Vec<Repr> {
        shares.iter().map(|s| s.value.repr()).collect()
    }

    #[test]
    fn zero_vector_gives_zero_shares() {
        let s = shamir_scheme();
        assert_eq!(values(&shares_from_vector(&s, &[0, 0])), vec![0, 0, 0]);
    }

    #[test]
    fn deal_is_reproducible() {
        let s = shamir_scheme();
        let secret = s.spec().element(3).unwrap();
        let a = deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        // Share i is a + i·b with intercept a = 3.
        let v = values(&a);
        let slope = (v[0] + 5 - 3) % 5;
        assert_eq!(v, vec![(3 + slope) % 5, (3 + 2 * slope) % 5, (3 + 3 * slope) % 5]);
        let distinct: HashSet<Vec<Repr>> =
            (0..32).map(|seed| values(&deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn round_trip_every_secret_and_pair() {
        let s = shamir_scheme();
        for secret in s.spec().elements() {
            for seed in 0..10 {
                let shares = deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                for pair in [[0, 1], [0, 2], [1, 2]] {
                    let sub: Vec<Share> = pair.iter().map(|&i| shares[i].clone()).collect();
                    assert_eq!(reconstruct(&s, &sub, true).unwrap(), Reconstruction::Secret(secret.clone()));
                }
                assert_eq!(reconstruct(&s, &shares, true).unwrap(), Reconstruction::Secret(secret.clone()));
            }
        }
    }

    #[test]
    fn single_share_ambiguity_matches_enumeration() {
        let s = shamir_scheme();
        let m = generate_array(s.generator()).unwrap();
        for share in 0..5 {
            let sub = vec![Share { index: 1, value: s.spec().element(share).unwrap() }];
            let Reconstruction::Ambiguous { matching_rules, per_key } = reconstruct(&s, &sub, false).unwrap() else {
                panic!("one share must not determine the key");
            };
            let b = ParticipantSet::from_indices([1]).unwrap();
            let counts = m.conditional_secret_counts(b, &[share]).unwrap();
            assert_eq!(matching_rules, counts.values().sum::<usize>() as u128);
            assert_eq!(matching_rules, 5);
            assert_eq!(per_key.len(), 5);
            for (key, mult) in per_key {
                assert_eq!(mult, counts[&key.repr()] as u128);
            }
        }
        let Reconstruction::Ambiguous { matching_rules, .. } = reconstruct(&s, &[], false).unwrap() else { panic!() };
        assert_eq!(matching_rules, 25);
    }

    #[test]
    fn tampering() {
        let s = shamir_scheme();
        let secret = s.spec().element(2).unwrap();
        let mut shares = deal(&s, &secret, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let bumped = s.spec().add(shares[0].value.repr(), 1);
        shares[0].value = s.spec().element(bumped).unwrap();
        assert_eq!(reconstruct(&s, &shares, true), Err(SchemeError::InconsistentShares));
        let pair = shares[..2].to_vec();
        assert_ne!(reconstruct(&s, &pair, true).unwrap(), Reconstruction::Secret(secret));
    }

    #[test]
    fn input_errors() {
        let s = shamir_scheme();
        let e = |i, v| Share { index: i, value: s.spec().element(v).unwrap() };
        assert_eq!(reconstruct(&s, &[e(0, 1), e(0, 2)], true), Err(SchemeError::DuplicateShare(0)));
        assert_eq!(reconstruct(&s, &[e(0, 1)], true), Err(SchemeError::ClaimMismatch { claimed: true }));
        assert_eq!(reconstruct(&s, &[e(0, 1), e(1, 1)], false), Err(SchemeError::ClaimMismatch { claimed: false }));
        assert_eq!(reconstruct(&s, &[e(5, 1)], false), Err(SchemeError::BadParticipant(5)));

        let f = s.spec().clone();
        let bad = Scheme::new(threshold_generator(&f, 2, 3).unwrap(), threshold_basis(3, 3).unwrap()).unwrap();
        assert!(!bad.is_verified());
        assert_eq!(deal(&bad, &f.one(), &mut ChaCha8Rng::seed_from_u64(0)), Err(SchemeError::UnverifiedScheme));
    }
}
