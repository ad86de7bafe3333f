//! Vectors and matrices over a [`FieldSpec`]: rank, independence, span
//! membership and linear solving by Gaussian elimination.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec, Repr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A vector in GF(q)^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector {
    spec: FieldSpec,
    coords: Vec<Repr>,
}

impl FVector {
    pub fn new(spec: &FieldSpec, coords: Vec<Repr>) -> Result<Self, LinalgError> {
        if let Some(&bad) = coords.iter().find(|&&c| !spec.contains(c)) {
            return Err(FieldError::OutOfRange(bad, spec.order()).into());
        }
        Ok(FVector {
            spec: spec.clone(),
            coords,
        })
    }

    pub fn zeros(spec: &FieldSpec, len: usize) -> Self {
        FVector {
            spec: spec.clone(),
            coords: vec![0; len],
        }
    }

    pub fn from_elements(elements: &[FieldElement]) -> Result<Self, LinalgError> {
        let spec = elements
            .first()
            .map(|e| e.spec().clone())
            .ok_or(LinalgError::DimensionMismatch { expected: 1, got: 0 })?;
        if elements.iter().any(|e| *e.spec() != spec) {
            return Err(LinalgError::SpecMismatch);
        }
        Ok(FVector {
            spec,
            coords: elements.iter().map(|e| e.repr()).collect(),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Repr] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Repr> {
        self.coords
    }

    pub fn get(&self, i: usize) -> FieldElement {
        self.spec.element(self.coords[i]).expect("coordinates are validated")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, lambda: Repr) -> FVector {
        FVector {
            spec: self.spec.clone(),
            coords: self.coords.iter().map(|&c| self.spec.mul(c, lambda)).collect(),
        }
    }

    pub fn dot(&self, other: &FVector) -> Result<Repr, LinalgError> {
        check_len(self.len(), other.len())?;
        Ok(dot(&self.spec, &self.coords, &other.coords))
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected == got {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, got })
    }
}

#[inline]
pub fn dot(spec: &FieldSpec, a: &[Repr], b: &[Repr]) -> Repr {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| spec.add(acc, spec.mul(x, y)))
}

/// Row-reduces `rows` (each of length `width`) in place to reduced row echelon
/// form with first-nonzero pivoting. Returns the pivot columns; the first
/// `pivots.len()` rows are the nonzero rows.
fn rref(spec: &FieldSpec, m: &mut [Vec<Repr>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == m.len() {
            break;
        }
        let Some(found) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, found);
        let inv = spec.inv(m[r][col]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = spec.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = spec.sub(*x, spec.mul(factor, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Reduced row echelon basis of the span of `rows`; canonical for the subspace.
pub fn reduced_basis(spec: &FieldSpec, rows: &[Vec<Repr>], width: usize) -> Vec<Vec<Repr>> {
    let mut m = rows.to_vec();
    let r = rref(spec, &mut m, width).len();
    m.truncate(r);
    m
}

/// Rank of a list of equal-length coordinate slices. The empty list has rank 0.
pub fn rank_of(spec: &FieldSpec, vectors: &[&[Repr]]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let width = first.len();
    let mut m: Vec<Vec<Repr>> = vectors.iter().map(|v| v.to_vec()).collect();
    rref(spec, &mut m, width).len()
}

fn same_spec_and_len(vs: &[&FVector]) -> Result<(), LinalgError> {
    if let Some(first) = vs.first() {
        for v in vs {
            if v.spec != first.spec {
                return Err(LinalgError::SpecMismatch);
            }
            check_len(first.len(), v.len())?;
        }
    }
    Ok(())
}

pub fn rank_of_vectors(vs: &[FVector]) -> Result<usize, LinalgError> {
    let refs: Vec<&FVector> = vs.iter().collect();
    same_spec_and_len(&refs)?;
    let Some(first) = vs.first() else {
        return Ok(0);
    };
    let slices: Vec<&[Repr]> = vs.iter().map(|v| v.coords()).collect();
    Ok(rank_of(&first.spec, &slices))
}

/// True iff the vectors are linearly independent.
pub fn is_independent(vs: &[FVector]) -> Result<bool, LinalgError> {
    Ok(rank_of_vectors(vs)? == vs.len())
}

/// True iff `v` lies in the span of `vs` (the span of nothing is {0}).
pub fn in_span(v: &FVector, vs: &[FVector]) -> Result<bool, LinalgError> {
    let mut refs: Vec<&FVector> = vs.iter().collect();
    refs.push(v);
    same_spec_and_len(&refs)?;
    let base: Vec<&[Repr]> = vs.iter().map(|x| x.coords()).collect();
    let mut with: Vec<&[Repr]> = base.clone();
    with.push(v.coords());
    Ok(rank_of(&v.spec, &base) == rank_of(&v.spec, &with))
}

/// Dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Repr>,
}

/// Outcome of [`FMatrix::solve_unique`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(FVector),
    NoSolution,
    Underdetermined,
}

/// A particular solution of `A x = b` together with a basis of the kernel of A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: FVector,
    pub kernel: Vec<FVector>,
}

impl FMatrix {
    pub fn new(spec: &FieldSpec, rows: usize, cols: usize, entries: Vec<Repr>) -> Result<Self, LinalgError> {
        check_len(rows * cols, entries.len())?;
        if let Some(&bad) = entries.iter().find(|&&c| !spec.contains(c)) {
            return Err(FieldError::OutOfRange(bad, spec.order()).into());
        }
        Ok(FMatrix {
            spec: spec.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> Self {
        FMatrix {
            spec: spec.clone(),
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(spec: &FieldSpec, rows: &[FVector]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.spec != *spec {
                return Err(LinalgError::SpecMismatch);
            }
            check_len(cols, r.len())?;
            entries.extend_from_slice(r.coords());
        }
        Ok(FMatrix {
            spec: spec.clone(),
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(spec: &FieldSpec, cols: &[FVector]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(spec, cols)?.transpose())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Repr] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Repr {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Repr] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> FVector {
        FVector {
            spec: self.spec.clone(),
            coords: (0..self.rows).map(|r| self.get(r, c)).collect(),
        }
    }

    pub fn transpose(&self) -> FMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c));
            }
        }
        FMatrix {
            spec: self.spec.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn row_vecs(&self) -> Vec<Vec<Repr>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.row_vecs();
        rref(&self.spec, &mut m, self.cols).len()
    }

    pub fn mul_vec(&self, x: &FVector) -> Result<FVector, LinalgError> {
        check_len(self.cols, x.len())?;
        Ok(FVector {
            spec: self.spec.clone(),
            coords: (0..self.rows)
                .map(|r| dot(&self.spec, self.row(r), x.coords()))
                .collect(),
        })
    }

    /// Basis of {x : A x = 0}.
    pub fn kernel(&self) -> Vec<FVector> {
        let mut m = self.row_vecs();
        let pivots = rref(&self.spec, &mut m, self.cols);
        let spec = &self.spec;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![0; self.cols];
            x[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = spec.neg(m[i][free]);
            }
            basis.push(FVector {
                spec: spec.clone(),
                coords: x,
            });
        }
        basis
    }

    /// Solves `A x = b`, returning one solution and the kernel of A, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &FVector) -> Result<Option<AffineSolution>, LinalgError> {
        check_len(self.rows, b.len())?;
        let spec = &self.spec;
        let mut aug: Vec<Vec<Repr>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b.coords[r]);
                row
            })
            .collect();
        let pivots = rref(spec, &mut aug, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[i][self.cols];
        }
        Ok(Some(AffineSolution {
            particular: FVector {
                spec: spec.clone(),
                coords: x,
            },
            kernel: self.kernel(),
        }))
    }

    pub fn solve_unique(&self, b: &FVector) -> Result<Solution, LinalgError> {
        Ok(match self.solve(b)? {
            None => Solution::NoSolution,
            Some(s) if s.kernel.is_empty() => Solution::Unique(s.particular),
            Some(_) => Solution::Underdetermined,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FMatrixRepr {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Repr>,
}

impl Serialize for FMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FMatrixRepr {
            spec: self.spec.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FMatrixRepr::deserialize(d)?;
        FMatrix::new(&r.spec, r.rows, r.cols, r.entries).map_err(serde::de::Error::custom)
    }
}
