//! Boolean algebras: the [`BooleanAlgebra`] trait, the two concrete backends
//! (finite powersets and the finite–cofinite algebra over ℕ), element
//! expressions and homomorphism checking.

mod backend;
mod elem;
pub mod expr;
pub mod hom;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use rand::Rng;

pub use backend::{atoms, Algebra, AlgebraKind};
pub use elem::{AtomSet, CofSet, Elem, MAX_ATOMS};

use crate::error::{Error, Result};

/// A Boolean algebra given by its operations on a canonical element type.
///
/// Elements are canonical: structural equality is equality in the algebra.
/// Operations assume their arguments belong to `self`; use
/// [`BooleanAlgebra::validate`] at trust boundaries.
pub trait BooleanAlgebra {
    type Elem: Clone + Eq + Ord + Hash + Debug + Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn complement(&self, x: &Self::Elem) -> Self::Elem;

    /// Checks that `x` is a well-formed element of this algebra.
    fn validate(&self, x: &Self::Elem) -> Result<()>;

    /// Human-readable name used in diagnostics.
    fn label(&self) -> String;

    /// Atoms in canonical order when the algebra is finite; `None` otherwise.
    fn finite_atoms(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn is_trivial(&self) -> bool {
        self.zero() == self.one()
    }

    /// `(x ∧ y′) ∨ (x′ ∧ y)`.
    fn disjoint_sum(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let left = self.meet(x, &self.complement(y));
        let right = self.meet(&self.complement(x), y);
        self.join(&left, &right)
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.meet(x, y) == *x
    }

    fn disjoint(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.is_zero(&self.meet(x, y))
    }

    /// `x −₁ y`: the complement of `x ∧ y` relative to `x`.
    fn rel_complement_1(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.meet(x, &self.complement(&self.meet(x, y)))
    }

    fn join_all<'a, I>(&self, xs: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        xs.into_iter().fold(self.zero(), |acc, x| self.join(&acc, x))
    }

    fn meet_all<'a, I>(&self, xs: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        xs.into_iter().fold(self.one(), |acc, x| self.meet(&acc, x))
    }

    /// Atoms of the finite subalgebra generated by `gens`: all nonzero signed
    /// meets, sorted by the element order. Empty in the trivial algebra.
    fn atomize(&self, gens: &[Self::Elem]) -> Vec<Self::Elem> {
        let one = self.one();
        let mut cells = if self.is_zero(&one) { Vec::new() } else { vec![one] };
        for g in gens {
            let gc = self.complement(g);
            let mut next = Vec::with_capacity(cells.len() * 2);
            for c in &cells {
                for part in [self.meet(c, g), self.meet(c, &gc)] {
                    if !self.is_zero(&part) {
                        next.push(part);
                    }
                }
            }
            cells = next;
        }
        cells.sort();
        cells
    }

    /// Every element, when the algebra is finite with at most `limit` elements.
    fn enumerate(&self, limit: usize) -> Option<Vec<Self::Elem>> {
        let atoms = self.finite_atoms()?;
        if atoms.len() >= usize::BITS as usize - 1 || (1usize << atoms.len()) > limit {
            return None;
        }
        let out = (0..1usize << atoms.len())
            .map(|mask| {
                let picked = atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1);
                self.join_all(picked.map(|(_, a)| a))
            })
            .collect();
        Some(out)
    }
}

/// Algebras that can draw seeded random elements for property trials.
pub trait Sample: BooleanAlgebra {
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Self::Elem> {
        if self.is_trivial() {
            return None;
        }
        loop {
            let x = self.random_elem(rng);
            if !self.is_zero(&x) {
                return Some(x);
            }
        }
    }
}

/// Order test with membership checks.
pub fn leq<A: BooleanAlgebra>(alg: &A, x: &A::Elem, y: &A::Elem) -> Result<bool> {
    alg.validate(x)?;
    alg.validate(y)?;
    Ok(alg.leq(x, y))
}

/// `x ∧ (x ∧ y)′` with membership checks.
pub fn rel_complement_1<A: BooleanAlgebra>(alg: &A, x: &A::Elem, y: &A::Elem) -> Result<A::Elem> {
    alg.validate(x)?;
    alg.validate(y)?;
    Ok(alg.rel_complement_1(x, y))
}

/// Join of a nonempty finite family.
pub fn sup_finite<A: BooleanAlgebra>(alg: &A, xs: &[A::Elem]) -> Result<A::Elem> {
    if xs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for x in xs {
        alg.validate(x)?;
    }
    let s = alg.join_all(xs);
    debug_assert!(xs.iter().all(|x| alg.leq(x, &s)));
    Ok(s)
}
