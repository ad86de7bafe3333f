//! Exact arithmetic in GF(p) and GF(p^n).
//!
//! An element is stored as its canonical index `repr` in `[0, q)`: the base-p
//! digits of `repr` are the coefficients `c0, c1, ..` of the residue polynomial
//! modulo the defining modulus. Multiplication goes through log/exp tables
//! built once per field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Raw canonical element index.
pub type Repr = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field order {0} exceeds the supported maximum of 2^16")]
    UnsupportedOrder(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {0} out of range for field of order {1}")]
    OutOfRange(u32, u32),
}

struct Tables {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in [0, 2(q-1)).
    exp: Vec<Repr>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    neg: Vec<Repr>,
    /// Full addition table for small fields, row-major.
    add: Option<Vec<Repr>>,
}

/// A finite field GF(p^n) together with its defining modulus.
///
/// Cheap to clone; all clones share the same arithmetic tables.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.n == other.inner.n
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.p(), self.n(), self.modulus())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() == 1 {
            write!(f, "GF({})", self.p())
        } else {
            write!(f, "GF({}^{})", self.p(), self.n())
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over GF(p) as coefficient vectors, low to high.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn digits(mut r: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(r % p);
        r /= p;
    }
    trim(out)
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=n/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx as u32, p, d as u32);
            g.resize(d, 0);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree n: candidates
/// are scanned by the integer whose base-p digits are c0..c_{n-1}.
fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for idx in 0..count {
        let mut f = digits(idx as u32, p, n);
        f.resize(n as usize, 0);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldSpec {
    /// Builds GF(p^n). When `modulus` is omitted the lexicographically least
    /// monic irreducible of degree n is used.
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(FieldError::UnsupportedOrder(q));
        }
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(FieldError::BadModulus(format!(
                        "expected {} coefficients, got {}",
                        n + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus("coefficient not reduced mod p".into()));
                }
                if m[n as usize] != 1 {
                    return Err(FieldError::BadModulus("modulus must be monic".into()));
                }
                if !is_irreducible(&m, p) {
                    return Err(FieldError::ReducibleModulus(m, p));
                }
                m
            }
            None => default_modulus(p, n),
        };
        Ok(Self::from_verified(p, n, q, modulus))
    }

    /// Prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power q with the default modulus.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, n) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Self::new(p, n, None)
    }

    fn from_verified(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Self {
        let slow_mul = |a: u32, b: u32| -> u32 {
            let r = poly_mul_mod(&digits(a, p, n), &digits(b, p, n), &modulus, p);
            from_digits(&r, p)
        };
        let order = q - 1;
        let (exp, log) = if q == 2 {
            (vec![1, 1], vec![0, 0])
        } else {
            let mut found = None;
            'search: for g in 2..q {
                let mut table = Vec::with_capacity(order as usize);
                let mut x = 1u32;
                for i in 0..order {
                    if i > 0 && x == 1 {
                        continue 'search;
                    }
                    table.push(x);
                    x = slow_mul(x, g);
                }
                if x == 1 {
                    found = Some(table);
                    break;
                }
            }
            let powers = found.expect("multiplicative group of a finite field is cyclic");
            let mut log = vec![0u32; q as usize];
            for (i, &x) in powers.iter().enumerate() {
                log[x as usize] = i as u32;
            }
            let mut exp = powers.clone();
            exp.extend_from_slice(&powers);
            (exp, log)
        };
        let add_digits = |a: u32, b: u32| -> u32 {
            if p == 2 {
                return a ^ b;
            }
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..n {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place = place.wrapping_mul(p);
            }
            out
        };
        let neg = (0..q)
            .map(|a| {
                let mut d = digits(a, p, n);
                for c in d.iter_mut() {
                    *c = (p - *c) % p;
                }
                from_digits(&d, p)
            })
            .collect();
        let add = (q <= 256).then(|| {
            let mut t = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    t.push(add_digits(a, b));
                }
            }
            t
        });
        FieldSpec {
            inner: Arc::new(Tables {
                p,
                n,
                q,
                modulus,
                exp,
                log,
                neg,
                add,
            }),
        }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    /// Field order q = p^n.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn add(&self, a: Repr, b: Repr) -> Repr {
        let t = &*self.inner;
        if let Some(table) = &t.add {
            return table[(a * t.q + b) as usize];
        }
        if t.p == 2 {
            return a ^ b;
        }
        let p = t.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..t.n {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Repr) -> Repr {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Repr, b: Repr) -> Repr {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Repr, b: Repr) -> Repr {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.inner;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Repr) -> Option<Repr> {
        if a == 0 {
            return None;
        }
        let t = &*self.inner;
        let order = t.q - 1;
        Some(t.exp[((order - t.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Repr, b: Repr) -> Option<Repr> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Repr, e: u64) -> Repr {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.inner;
        let order = (t.q - 1) as u64;
        let l = (t.log[a as usize] as u64 * (e % order)) % order;
        t.exp[l as usize]
    }

    /// Every element, in increasing repr order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |r| FieldElement {
            spec: self.clone(),
            repr: r,
        })
    }

    pub fn element(&self, repr: Repr) -> Result<FieldElement, FieldError> {
        if repr >= self.order() {
            return Err(FieldError::OutOfRange(repr, self.order()));
        }
        Ok(FieldElement {
            spec: self.clone(),
            repr,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            repr: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            repr: 1,
        }
    }

    pub fn contains(&self, repr: Repr) -> bool {
        repr < self.order()
    }

    /// Elements of the subfield GF(p^m), in repr order. Requires m | n.
    pub fn subfield(&self, m: u32) -> Option<Vec<Repr>> {
        if m == 0 || !self.n().is_multiple_of(m) {
            return None;
        }
        let sub_q = (self.p() as u64).pow(m);
        Some(
            (0..self.order())
                .filter(|&a| self.pow(a, sub_q) == a)
                .collect(),
        )
    }
}

/// Splits q into (p, n) with q = p^n, p prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut n) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldSpecRepr {
            p: self.p(),
            n: self.n(),
            modulus: self.modulus().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FieldSpecRepr::deserialize(d)?;
        FieldSpec::new(r.p, r.n, Some(r.modulus)).map_err(serde::de::Error::custom)
    }
}

/// An element of a specific field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr)
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    fn same(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    fn with(&self, repr: Repr) -> Self {
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.spec.add(self.repr, other.repr)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.spec.sub(self.repr, other.repr)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.with(self.spec.mul(self.repr, other.repr)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        self.spec
            .div(self.repr, other.repr)
            .map(|r| self.with(r))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn neg(&self) -> Self {
        self.with(self.spec.neg(self.repr))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.spec
            .inv(self.repr)
            .map(|r| self.with(r))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.spec.pow(self.repr, e))
    }
}
