use rand::Rng;
use serde::{Deserialize, Serialize};

use super::elem::{AtomSet, CofSet, Elem, MAX_ATOMS};
use super::{BooleanAlgebra, Sample};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    Powerset { atom_count: usize },
    FiniteCofinite,
}

/// A backend Boolean algebra: a finite powerset, the finite–cofinite algebra
/// over ℕ, or (with `trivial` set) the one-element algebra in which `0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    name: String,
    kind: AlgebraKind,
    trivial: bool,
}

impl Algebra {
    pub fn new(name: impl Into<String>, kind: AlgebraKind, trivial: bool) -> Result<Self> {
        if let AlgebraKind::Powerset { atom_count } = kind {
            if atom_count > MAX_ATOMS {
                return Err(Error::CapExceeded(format!(
                    "powerset atom_count {atom_count} exceeds {MAX_ATOMS}"
                )));
            }
            if atom_count == 0 && !trivial {
                return Err(Error::Invalid("powerset atom_count must be at least 1".into()));
            }
        }
        Ok(Algebra { name: name.into(), kind, trivial })
    }

    pub fn powerset(atom_count: usize) -> Result<Self> {
        Self::new(format!("P({atom_count})"), AlgebraKind::Powerset { atom_count }, false)
    }

    pub fn finite_cofinite() -> Self {
        Algebra { name: "FC".into(), kind: AlgebraKind::FiniteCofinite, trivial: false }
    }

    pub fn trivial() -> Self {
        Algebra { name: "0".into(), kind: AlgebraKind::Powerset { atom_count: 0 }, trivial: true }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_trivial_flag(&self) -> bool {
        self.trivial
    }

    /// Atom count of a nontrivial powerset backend.
    pub fn atom_count(&self) -> Option<usize> {
        match self.kind {
            AlgebraKind::Powerset { atom_count } if !self.trivial => Some(atom_count),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.trivial || matches!(self.kind, AlgebraKind::Powerset { .. })
    }

    /// Finite algebras are complete; the finite–cofinite algebra is not.
    pub fn is_complete(&self) -> bool {
        self.is_finite()
    }

    fn trivial_elem() -> Elem {
        Elem::Atoms(AtomSet::empty(0))
    }

    /// The powerset element with the given 1-based atoms.
    pub fn set(&self, atoms: &[usize]) -> Result<Elem> {
        let n = self.atom_count().ok_or_else(|| self.mismatch_literal(atoms))?;
        AtomSet::from_atoms(n, atoms.iter().copied())
            .map(Elem::Atoms)
            .ok_or_else(|| self.mismatch_literal(atoms))
    }

    fn mismatch_literal(&self, atoms: &[usize]) -> Error {
        Error::AlgebraMismatch { algebra: self.name.clone(), elem: format!("{atoms:?}") }
    }

    /// Finite subset of ℕ. Panics outside the finite–cofinite backend.
    pub fn fin(&self, members: &[u64]) -> Elem {
        assert!(self.is_cofinite_backend(), "fin literal outside finite_cofinite backend");
        Elem::Cofinite(CofSet::fin(members.iter().copied()))
    }

    /// Cofinite subset of ℕ excluding `excluded`. Panics outside the finite–cofinite backend.
    pub fn cof(&self, excluded: &[u64]) -> Elem {
        assert!(self.is_cofinite_backend(), "cof literal outside finite_cofinite backend");
        Elem::Cofinite(CofSet::cof(excluded.iter().copied()))
    }

    pub fn is_cofinite_backend(&self) -> bool {
        !self.trivial && self.kind == AlgebraKind::FiniteCofinite
    }

    fn mismatch(&self, x: &Elem) -> Error {
        Error::AlgebraMismatch { algebra: self.name.clone(), elem: x.to_string() }
    }

    fn atoms_of<'a>(&self, x: &'a Elem) -> &'a AtomSet {
        x.as_atoms().unwrap_or_else(|| panic!("{x} is not an element of {}", self.name))
    }

    fn cof_of<'a>(&self, x: &'a Elem) -> &'a CofSet {
        x.as_cofinite().unwrap_or_else(|| panic!("{x} is not an element of {}", self.name))
    }
}

impl BooleanAlgebra for Algebra {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        if self.trivial {
            return Self::trivial_elem();
        }
        match self.kind {
            AlgebraKind::Powerset { atom_count } => Elem::Atoms(AtomSet::empty(atom_count)),
            AlgebraKind::FiniteCofinite => Elem::Cofinite(CofSet::fin([])),
        }
    }

    fn one(&self) -> Elem {
        if self.trivial {
            return Self::trivial_elem();
        }
        match self.kind {
            AlgebraKind::Powerset { atom_count } => Elem::Atoms(AtomSet::full(atom_count)),
            AlgebraKind::FiniteCofinite => Elem::Cofinite(CofSet::cof([])),
        }
    }

    fn meet(&self, x: &Elem, y: &Elem) -> Elem {
        if self.is_cofinite_backend() {
            Elem::Cofinite(self.cof_of(x).meet(self.cof_of(y)))
        } else {
            Elem::Atoms(self.atoms_of(x).meet(self.atoms_of(y)))
        }
    }

    fn join(&self, x: &Elem, y: &Elem) -> Elem {
        if self.is_cofinite_backend() {
            Elem::Cofinite(self.cof_of(x).join(self.cof_of(y)))
        } else {
            Elem::Atoms(self.atoms_of(x).join(self.atoms_of(y)))
        }
    }

    fn disjoint(&self, x: &Elem, y: &Elem) -> bool {
        if !self.is_cofinite_backend() {
            return self.atoms_of(x).meet(self.atoms_of(y)).is_empty();
        }
        let (a, b) = (self.cof_of(x), self.cof_of(y));
        match (a.is_cofinite(), b.is_cofinite()) {
            (true, true) => false,
            (false, _) => a.support().iter().all(|n| !b.contains(*n)),
            (true, false) => b.support().iter().all(|n| !a.contains(*n)),
        }
    }

    fn complement(&self, x: &Elem) -> Elem {
        if self.is_cofinite_backend() {
            Elem::Cofinite(self.cof_of(x).complement())
        } else {
            Elem::Atoms(self.atoms_of(x).complement())
        }
    }

    fn validate(&self, x: &Elem) -> Result<()> {
        let ok = if self.trivial {
            *x == Self::trivial_elem()
        } else {
            match (self.kind, x) {
                (AlgebraKind::Powerset { atom_count }, Elem::Atoms(s)) => s.len() == atom_count,
                (AlgebraKind::FiniteCofinite, Elem::Cofinite(_)) => true,
                _ => false,
            }
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(x))
        }
    }

    fn label(&self) -> String {
        self.name.clone()
    }

    fn finite_atoms(&self) -> Option<Vec<Elem>> {
        if self.trivial {
            return Some(Vec::new());
        }
        let n = self.atom_count()?;
        Some((1..=n).map(|a| Elem::Atoms(AtomSet::from_bits(n, 1 << (a - 1)))).collect())
    }

    fn is_trivial(&self) -> bool {
        self.trivial
    }
}

/// Largest natural number used when sampling finite–cofinite elements.
pub(crate) const SAMPLE_RANGE: u64 = 12;

impl Sample for Algebra {
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        if self.trivial {
            return Self::trivial_elem();
        }
        match self.kind {
            AlgebraKind::Powerset { atom_count } => {
                Elem::Atoms(AtomSet::from_bits(atom_count, rng.gen::<u32>()))
            }
            AlgebraKind::FiniteCofinite => {
                let size = rng.gen_range(0..=4);
                let support: Vec<u64> = (0..size).map(|_| rng.gen_range(0..SAMPLE_RANGE)).collect();
                if rng.gen_bool(0.5) {
                    Elem::Cofinite(CofSet::fin(support))
                } else {
                    Elem::Cofinite(CofSet::cof(support))
                }
            }
        }
    }
}

/// The atoms of a nontrivial powerset algebra in index order.
pub fn atoms(alg: &Algebra) -> Result<Vec<Elem>> {
    if alg.trivial {
        return Err(Error::Unsupported("the trivial algebra has no atoms".into()));
    }
    alg.finite_atoms().ok_or_else(|| {
        Error::Unsupported("atoms of the finite_cofinite backend are not enumerable".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_examples() {
        let p3 = Algebra::powerset(3).unwrap();
        let shown: Vec<String> = atoms(&p3).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(shown, ["{1}", "{2}", "{3}"]);
        assert_eq!(atoms(&Algebra::powerset(1).unwrap()).unwrap(), vec![p3_one(1)]);
        assert!(atoms(&Algebra::trivial()).is_err());
        assert!(atoms(&Algebra::finite_cofinite()).is_err());
    }

    fn p3_one(n: usize) -> Elem {
        Elem::Atoms(AtomSet::full(n))
    }

    #[test]
    fn trivial_algebra_has_zero_equal_one() {
        let t = Algebra::trivial();
        assert_eq!(t.zero(), t.one());
        assert!(t.is_trivial());
        let t2 = Algebra::new("T", AlgebraKind::FiniteCofinite, true).unwrap();
        assert_eq!(t2.zero(), t2.one());
        assert!(t2.validate(&t2.one()).is_ok());
    }

    #[test]
    fn descriptor_caps() {
        assert!(matches!(Algebra::powerset(20), Err(Error::CapExceeded(_))));
        assert!(Algebra::powerset(0).is_err());
        assert!(Algebra::powerset(16).is_ok());
    }

    #[test]
    fn validate_rejects_foreign_elements() {
        let p2 = Algebra::powerset(2).unwrap();
        let p3 = Algebra::powerset(3).unwrap();
        assert!(p2.validate(&p3.one()).is_err());
        assert!(p2.validate(&Algebra::finite_cofinite().one()).is_err());
    }
}
