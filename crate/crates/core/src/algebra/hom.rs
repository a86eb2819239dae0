//! Boolean homomorphisms: specifications and the axiom checker.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::{Algebra, BooleanAlgebra, Elem, Sample};
use crate::error::{Error, Result};

/// Largest powerset source checked exhaustively.
pub const EXHAUSTIVE_HOM_ATOMS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `h(x ∧ y) = h(x) ∧ h(y)`
    Meet,
    /// `h(x ⊕ y) = h(x) ⊕ h(y)`
    DisjointSum,
    /// `h(1) = 1`
    Unit,
    /// `h(x ∨ y) = h(x) ∨ h(y)`, a consequence of the other three.
    Join,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Meet => "meet",
            Axiom::DisjointSum => "disjoint sum",
            Axiom::Unit => "unit",
            Axiom::Join => "join",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCounterexample<S, T> {
    pub axiom: Axiom,
    pub x: S,
    pub y: S,
    /// Image of the combined element.
    pub lhs: T,
    /// Combination of the images.
    pub rhs: T,
}

impl<S: fmt::Display, T: fmt::Display> Serialize for HomCounterexample<S, T> {
    fn serialize<Sr: serde::Serializer>(&self, serializer: Sr) -> std::result::Result<Sr::Ok, Sr::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("HomCounterexample", 5)?;
        st.serialize_field("axiom", &self.axiom)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("lhs", &self.lhs.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomVerdict<S, T> {
    Pass { pairs_checked: usize },
    Fail(HomCounterexample<S, T>),
}

impl<S, T> HomVerdict<S, T> {
    pub fn passed(&self) -> bool {
        matches!(self, HomVerdict::Pass { .. })
    }
}

impl<S: fmt::Display, T: fmt::Display> fmt::Display for HomCounterexample<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom {} fails at x = {}, y = {}: {} != {}",
            self.axiom, self.x, self.y, self.lhs, self.rhs
        )
    }
}

/// Checks the homomorphism axioms of `map` on the given pairs.
///
/// The unit is checked first, then meets and disjoint sums on every pair; the
/// join law is checked last, once the defining axioms have passed.
pub fn check_map<S, T, F, I>(src: &S, tgt: &T, map: F, pairs: I) -> Result<HomVerdict<S::Elem, T::Elem>>
where
    S: BooleanAlgebra,
    T: BooleanAlgebra,
    F: Fn(&S::Elem) -> Result<T::Elem>,
    I: IntoIterator<Item = (S::Elem, S::Elem)>,
{
    let one_image = map(&src.one())?;
    if one_image != tgt.one() {
        return Ok(HomVerdict::Fail(HomCounterexample {
            axiom: Axiom::Unit,
            x: src.one(),
            y: src.one(),
            lhs: one_image,
            rhs: tgt.one(),
        }));
    }
    let pairs: Vec<_> = pairs.into_iter().collect();
    for axiom in [Axiom::Meet, Axiom::DisjointSum, Axiom::Join] {
        for (x, y) in &pairs {
            let (fx, fy) = (map(x)?, map(y)?);
            let (lhs, rhs) = match axiom {
                Axiom::Meet => (map(&src.meet(x, y))?, tgt.meet(&fx, &fy)),
                Axiom::DisjointSum => (map(&src.disjoint_sum(x, y))?, tgt.disjoint_sum(&fx, &fy)),
                Axiom::Join | Axiom::Unit => (map(&src.join(x, y))?, tgt.join(&fx, &fy)),
            };
            if lhs != rhs {
                return Ok(HomVerdict::Fail(HomCounterexample {
                    axiom,
                    x: x.clone(),
                    y: y.clone(),
                    lhs,
                    rhs,
                }));
            }
        }
    }
    Ok(HomVerdict::Pass { pairs_checked: pairs.len() })
}

/// A map between backend algebras, given by a finite table of images and, for
/// powerset-to-powerset maps, optionally by an atom map.
///
/// With an atom map `q ↦ atom_map[q]` (target atoms to source atoms, 1-based),
/// the image of `x` is `{q : atom_map(q) ∈ x}`. Otherwise elements listed in
/// the table map to their listed image and everything else in the subalgebra
/// generated by the table's domain maps through the signed-meet extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpec {
    source: Algebra,
    target: Algebra,
    generator_images: BTreeMap<Elem, Elem>,
    atom_map: Option<Vec<usize>>,
}

impl HomSpec {
    pub fn from_atom_map(source: Algebra, target: Algebra, atom_map: Vec<usize>) -> Result<Self> {
        let n = source
            .atom_count()
            .ok_or_else(|| Error::Unsupported("atom maps need a nontrivial powerset source".into()))?;
        let k = if target.is_trivial() {
            0
        } else {
            target
                .atom_count()
                .ok_or_else(|| Error::Unsupported("atom maps need a powerset target".into()))?
        };
        if atom_map.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: atom_map.len() });
        }
        if let Some(bad) = atom_map.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::Invalid(format!("atom map value {bad} outside 1..={n}")));
        }
        let mut spec = HomSpec { source, target, generator_images: BTreeMap::new(), atom_map: Some(atom_map) };
        let atoms = spec.source.finite_atoms().unwrap_or_default();
        for a in atoms {
            let img = spec.apply(&a)?;
            spec.generator_images.insert(a, img);
        }
        Ok(spec)
    }

    pub fn from_images(source: Algebra, target: Algebra, images: impl IntoIterator<Item = (Elem, Elem)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (x, y) in images {
            source.validate(&x)?;
            target.validate(&y)?;
            table.insert(x, y);
        }
        Ok(HomSpec { source, target, generator_images: table, atom_map: None })
    }

    /// The identity on a backend algebra, tabulated on its atoms when finite.
    pub fn identity(alg: &Algebra) -> Self {
        match alg.atom_count() {
            Some(n) => Self::from_atom_map(alg.clone(), alg.clone(), (1..=n).collect())
                .expect("identity atom map is valid"),
            None => Self::from_images(alg.clone(), alg.clone(), [(alg.one(), alg.one())])
                .expect("identity table is valid"),
        }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn atom_map(&self) -> Option<&[usize]> {
        self.atom_map.as_deref()
    }

    pub fn generator_images(&self) -> &BTreeMap<Elem, Elem> {
        &self.generator_images
    }

    /// Cells of the subalgebra generated by the table's domain.
    pub fn generated_cells(&self) -> Vec<Elem> {
        let gens: Vec<Elem> = self.generator_images.keys().cloned().collect();
        self.source.atomize(&gens)
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.source.validate(x)?;
        if let Some(map) = &self.atom_map {
            let set = x.as_atoms().expect("validated powerset element");
            let targets: Vec<usize> =
                map.iter().enumerate().filter(|(_, &p)| set.contains(p)).map(|(q, _)| q + 1).collect();
            if self.target.is_trivial() {
                return Ok(self.target.zero());
            }
            return self.target.set(&targets);
        }
        if let Some(img) = self.generator_images.get(x) {
            return Ok(img.clone());
        }
        let mut image = self.target.zero();
        let mut covered = self.source.zero();
        for cell in self.generated_cells() {
            if self.source.disjoint(&cell, x) {
                continue;
            }
            if !self.source.leq(&cell, x) {
                return Err(Error::Invalid(format!(
                    "{x} is outside the subalgebra generated by the image table"
                )));
            }
            let mut cell_image = self.target.one();
            for (g, gi) in &self.generator_images {
                let factor = if self.source.leq(&cell, g) { gi.clone() } else { self.target.complement(gi) };
                cell_image = self.target.meet(&cell_image, &factor);
            }
            image = self.target.join(&image, &cell_image);
            covered = self.source.join(&covered, &cell);
        }
        debug_assert_eq!(covered, *x);
        Ok(image)
    }

    /// Random element of the subalgebra on which `apply` is defined.
    pub fn random_source_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        if self.atom_map.is_some() {
            return self.source.random_elem(rng);
        }
        let cells = self.generated_cells();
        let picked = cells.iter().filter(|_| rng.gen_bool(0.5));
        self.source.join_all(picked)
    }
}

/// Checks a [`HomSpec`] against the homomorphism axioms, over all pairs of a
/// powerset source (`exhaustive`) or over `trials` sampled pairs.
pub fn check_homomorphism<R: Rng + ?Sized>(
    h: &HomSpec,
    exhaustive: bool,
    trials: usize,
    rng: &mut R,
) -> Result<HomVerdict<Elem, Elem>> {
    let pairs: Vec<(Elem, Elem)> = if exhaustive {
        let n = h.source.atom_count().unwrap_or(0);
        if n > EXHAUSTIVE_HOM_ATOMS || !h.source.is_finite() {
            return Err(Error::CapExceeded(format!(
                "exhaustive homomorphism checks need a powerset source with at most {EXHAUSTIVE_HOM_ATOMS} atoms"
            )));
        }
        let all = h.source.enumerate(1 << EXHAUSTIVE_HOM_ATOMS).expect("finite source");
        all.iter().flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone()))).collect()
    } else {
        (0..trials).map(|_| (h.random_source_elem(rng), h.random_source_elem(rng))).collect()
    };
    check_map(&h.source, &h.target, |x| h.apply(x), pairs)
}
