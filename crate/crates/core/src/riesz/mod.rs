//! Riesz spaces: a common interface for `C(A)` and the atom-coordinate model
//! of finite-dimensional Archimedean Riesz spaces, plus the tensor product.

pub mod linalg;
pub mod tensor;

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::algebra::Sample;
use crate::error::{Error, Result};
use crate::place::{PlaceFunction, PlaceSpace};
use crate::scalar::{self, Scalar};

/// A vector lattice over the scalar field `S`.
pub trait RieszSpace<S: Scalar> {
    type Vector: Clone + PartialEq + fmt::Display;

    fn zero(&self) -> Self::Vector;
    fn add(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;
    fn scale(&self, c: &S, a: &Self::Vector) -> Self::Vector;
    fn meet(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;
    fn join(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;

    fn neg(&self, a: &Self::Vector) -> Self::Vector {
        self.scale(&-S::one(), a)
    }

    fn sub(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector {
        self.add(a, &self.neg(b))
    }

    fn abs(&self, a: &Self::Vector) -> Self::Vector {
        self.join(a, &self.neg(a))
    }

    fn is_positive(&self, a: &Self::Vector) -> bool {
        self.meet(a, &self.zero()) == self.zero()
    }
}

/// Riesz spaces that can draw seeded random vectors.
pub trait SampleSpace<S: Scalar>: RieszSpace<S> {
    fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Vector;

    fn random_positive<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Vector {
        let v = self.random_vector(rng);
        self.abs(&v)
    }

    /// Two positive vectors with `a ∧ b = 0`, built by splitting supports.
    fn random_disjoint_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Self::Vector, Self::Vector);
}

impl<A: crate::algebra::BooleanAlgebra, S: Scalar> RieszSpace<S> for PlaceSpace<A> {
    type Vector = PlaceFunction<A::Elem, S>;

    fn zero(&self) -> Self::Vector {
        PlaceSpace::zero(self)
    }

    fn add(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector {
        PlaceSpace::add(self, a, b)
    }

    fn scale(&self, c: &S, a: &Self::Vector) -> Self::Vector {
        PlaceSpace::scale(self, c, a)
    }

    fn meet(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector {
        PlaceSpace::meet(self, a, b)
    }

    fn join(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector {
        PlaceSpace::join(self, a, b)
    }

    fn is_positive(&self, a: &Self::Vector) -> bool {
        PlaceSpace::is_positive(self, a)
    }
}

impl<A: Sample, S: Scalar> SampleSpace<S> for PlaceSpace<A> {
    fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Vector {
        self.random(rng)
    }

    fn random_disjoint_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Self::Vector, Self::Vector) {
        let alg = self.algebra();
        let p = alg.random_elem(rng);
        let q = alg.complement(&p);
        let f: Self::Vector = self.random_within(&p, rng);
        let g: Self::Vector = self.random_within(&q, rng);
        (PlaceSpace::abs(self, &f), PlaceSpace::abs(self, &g))
    }
}

/// Coordinate index set: the atoms of one finite algebra, or pairs of atoms
/// of two (row-major, `(p, q) ↦ p·m + q`, 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomSpace {
    Atoms(usize),
    Pairs(usize, usize),
}

impl AtomSpace {
    pub fn dim(&self) -> usize {
        match *self {
            AtomSpace::Atoms(n) => n,
            AtomSpace::Pairs(n, m) => n * m,
        }
    }

    pub fn pair_index(&self, p: usize, q: usize) -> usize {
        match *self {
            AtomSpace::Pairs(_, m) => p * m + q,
            AtomSpace::Atoms(_) => panic!("pair index in a single-factor space"),
        }
    }

    pub fn vector<S: Scalar>(&self, values: Vec<S>) -> Result<AtomVector<S>> {
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: values.len() });
        }
        Ok(AtomVector { values })
    }

    pub fn indicator<S: Scalar>(&self, k: usize) -> AtomVector<S> {
        let mut values = vec![S::zero(); self.dim()];
        values[k] = S::one();
        AtomVector { values }
    }

    pub fn ones<S: Scalar>(&self) -> AtomVector<S> {
        AtomVector { values: vec![S::one(); self.dim()] }
    }
}

/// A vector in an atom-coordinate space; lattice operations are coordinatewise.
#[derive(Clone, PartialEq, Eq)]
pub struct AtomVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> AtomVector<S> {
    pub fn from_values(values: Vec<S>) -> Self {
        AtomVector { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, _)| k)
    }

    fn zip(&self, other: &Self, op: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim(), "atom vectors from different spaces");
        AtomVector { values: self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect() }
    }
}

impl<S: Scalar> fmt::Display for AtomVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl<S: Scalar> fmt::Debug for AtomVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for AtomVector<S> {
    fn serialize<Sr: Serializer>(&self, serializer: Sr) -> Result<Sr::Ok, Sr::Error> {
        serializer.collect_str(self)
    }
}

impl<S: Scalar> RieszSpace<S> for AtomSpace {
    type Vector = AtomVector<S>;

    fn zero(&self) -> AtomVector<S> {
        AtomVector { values: vec![S::zero(); self.dim()] }
    }

    fn add(&self, a: &AtomVector<S>, b: &AtomVector<S>) -> AtomVector<S> {
        a.zip(b, |x, y| x.clone() + y.clone())
    }

    fn scale(&self, c: &S, a: &AtomVector<S>) -> AtomVector<S> {
        AtomVector { values: a.values.iter().map(|v| c.clone() * v.clone()).collect() }
    }

    fn meet(&self, a: &AtomVector<S>, b: &AtomVector<S>) -> AtomVector<S> {
        a.zip(b, scalar::min_of)
    }

    fn join(&self, a: &AtomVector<S>, b: &AtomVector<S>) -> AtomVector<S> {
        a.zip(b, scalar::max_of)
    }

    fn is_positive(&self, a: &AtomVector<S>) -> bool {
        a.values.iter().all(|v| !v.is_negative())
    }
}

impl<S: Scalar> SampleSpace<S> for AtomSpace {
    fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> AtomVector<S> {
        let values = (0..self.dim())
            .map(|_| if rng.gen_bool(0.3) { S::zero() } else { scalar::random_nonzero(rng) })
            .collect();
        AtomVector { values }
    }

    fn random_disjoint_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (AtomVector<S>, AtomVector<S>) {
        let v: AtomVector<S> = self.random_positive(rng);
        let w: AtomVector<S> = self.random_positive(rng);
        let side: Vec<bool> = (0..self.dim()).map(|_| rng.gen_bool(0.5)).collect();
        let pick = |x: &AtomVector<S>, keep: bool| AtomVector {
            values: x.values.iter().zip(&side).map(|(v, &s)| if s == keep { v.clone() } else { S::zero() }).collect(),
        };
        (pick(&v, true), pick(&w, false))
    }
}

/// A linear map between atom-coordinate spaces, stored as a dense
/// `target × source` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearLatticeMap<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> LinearLatticeMap<S> {
    pub fn from_columns(rows: usize, columns: &[AtomVector<S>]) -> Result<Self> {
        let cols = columns.len();
        let mut entries = vec![S::zero(); rows * cols];
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.dim() });
            }
            for (i, v) in c.values().iter().enumerate() {
                entries[i * cols + j] = v.clone();
            }
        }
        Ok(LinearLatticeMap { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let cols: Vec<AtomVector<S>> = (0..n).map(|k| AtomSpace::Atoms(n).indicator(k)).collect();
        Self::from_columns(n, &cols).expect("square identity")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn row_vectors(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &AtomVector<S>) -> AtomVector<S> {
        assert_eq!(v.dim(), self.cols, "vector dimension does not match the map");
        let values = (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| acc + self.entry(i, j).clone() * v.values[j].clone())
            })
            .collect();
        AtomVector { values }
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.row_vectors())
    }

    /// Each source coordinate feeds at most one target coordinate, with a
    /// positive weight: the shape of every Riesz homomorphism between atom
    /// models.
    pub fn is_routed(&self) -> bool {
        (0..self.cols).all(|j| {
            let nonzero: Vec<&S> = (0..self.rows).map(|i| self.entry(i, j)).filter(|v| !v.is_zero()).collect();
            nonzero.len() <= 1 && nonzero.iter().all(|v| v.is_positive())
        })
    }
}

impl<S: Scalar> fmt::Debug for LinearLatticeMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vectors().iter().map(|r| AtomVector { values: r.clone() })).finish()
    }
}

impl<S: Scalar> Serialize for LinearLatticeMap<S> {
    fn serialize<Sr: Serializer>(&self, serializer: Sr) -> Result<Sr::Ok, Sr::Error> {
        let rows: Vec<Vec<String>> =
            self.row_vectors().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        rows.serialize(serializer)
    }
}
