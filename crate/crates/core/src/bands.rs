//! Bands of the atom-coordinate Riesz spaces and the Boolean algebra `B(E)`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::algebra::hom::{check_map, HomVerdict};
use crate::algebra::{Algebra, AtomSet, BooleanAlgebra, Elem, Sample, MAX_ATOMS};
use crate::error::{Error, Result};
use crate::free_product::FreeProduct;
use crate::riesz::{AtomSpace, AtomVector, RieszSpace};
use crate::scalar::Scalar;

/// The band of vectors supported inside `members` (1-based atoms).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Band {
    members: AtomSet,
}

impl Band {
    pub fn new(members: AtomSet) -> Self {
        Band { members }
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> AtomSet {
        self.members
    }

    pub fn contains<S: Scalar>(&self, v: &AtomVector<S>) -> bool {
        v.dim() == self.dim() && v.support().all(|k| self.members.contains(k + 1))
    }

    pub fn to_elem(&self) -> Elem {
        Elem::Atoms(self.members)
    }

    pub fn from_elem(x: &Elem) -> Result<Self> {
        x.as_atoms()
            .map(|s| Band::new(*s))
            .ok_or_else(|| Error::Unsupported(format!("{x} is not a band of an atom space")))
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", Elem::Atoms(self.members))
    }
}

fn atom_set<S: Scalar>(v: &AtomVector<S>) -> Result<AtomSet> {
    if v.dim() > MAX_ATOMS {
        return Err(Error::CapExceeded(format!("dimension {} exceeds {MAX_ATOMS}", v.dim())));
    }
    Ok(AtomSet::from_atoms(v.dim(), v.support().map(|k| k + 1)).expect("in range"))
}

/// `[f]`: the band generated by `f`.
pub fn principal_band<S: Scalar>(f: &AtomVector<S>) -> Result<Band> {
    atom_set(f).map(Band::new)
}

/// Every band of the `n`-atom space.
pub fn all_bands(n: usize) -> Result<Vec<Band>> {
    if n > MAX_ATOMS {
        return Err(Error::CapExceeded(format!("dimension {n} exceeds {MAX_ATOMS}")));
    }
    Ok((0..1u32 << n).map(|bits| Band::new(AtomSet::from_bits(n, bits))).collect())
}

/// `[f]` found by brute force: the meet of every band that contains `f`.
pub fn smallest_band_by_enumeration<S: Scalar>(f: &AtomVector<S>) -> Result<Band> {
    let n = f.dim();
    let mut members = AtomSet::full(n);
    for b in all_bands(n)? {
        if b.contains(f) {
            members = members.meet(&b.members);
        }
    }
    Ok(Band::new(members))
}

/// Atoms of the order ideal generated by `f`: those `k` with `e_k ≤ c|f|` for
/// some scalar `c`.
pub fn ideal_members<S: Scalar>(f: &AtomVector<S>) -> Result<AtomSet> {
    let space = AtomSpace::Atoms(f.dim());
    let abs = RieszSpace::abs(&space, f);
    let mut picked = Vec::new();
    for k in 0..f.dim() {
        let v = &abs.values()[k];
        if v.is_zero() {
            continue;
        }
        let bound = space.scale(&(S::one() / v.clone()), &abs);
        let e: AtomVector<S> = space.indicator(k);
        if space.meet(&e, &bound) == e {
            picked.push(k + 1);
        }
    }
    if f.dim() > MAX_ATOMS {
        return Err(Error::CapExceeded(format!("dimension {} exceeds {MAX_ATOMS}", f.dim())));
    }
    Ok(AtomSet::from_atoms(f.dim(), picked).expect("in range"))
}

/// Whether every vector of `[f]` is disjoint from every vector of `[g]`,
/// decided on the atom indicators spanning each band.
pub fn bands_disjoint<S: Scalar>(f: &AtomVector<S>, g: &AtomVector<S>) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let space = AtomSpace::Atoms(f.dim());
    let (bf, bg) = (principal_band(f)?, principal_band(g)?);
    for p in bf.members.iter() {
        for q in bg.members.iter() {
            let (ep, eq): (AtomVector<S>, AtomVector<S>) = (space.indicator(p - 1), space.indicator(q - 1));
            if space.meet(&ep, &eq) != space.zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `B(E)` for the `n`-atom space: the powerset algebra on the atoms, with
/// [`Band::to_elem`] as the correspondence.
pub fn band_algebra(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::Invalid("a band algebra needs at least one atom".into()));
    }
    Ok(Algebra::powerset(n)?.with_name(format!("B(E{n})")))
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomPairing {
    pub rectangle: String,
    pub atom: usize,
}

/// Outcome of [`compare_band_products`].
#[derive(Clone, Debug, Serialize)]
pub struct BandProductVerdict {
    pub n: usize,
    pub m: usize,
    pub product_atoms: usize,
    pub tensor_band_atoms: usize,
    pub bijection: Vec<AtomPairing>,
    pub pairs_checked: usize,
    pub isomorphic: bool,
    pub failure: Option<String>,
    pub note: String,
}

/// Compares `B(E) ⊗ B(F)` with `B(E ⊗̄ F)` for atom spaces of dimensions `n`
/// and `m`, through the bijection `rect({p},{q}) ↦ (p-1)·m + q`.
///
/// The map is extended atomwise and checked to be a homomorphism on every
/// pair of elements when `n·m ≤ exhaustive_atoms`, otherwise on `trials`
/// sampled pairs.
pub fn compare_band_products<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    exhaustive_atoms: usize,
    trials: usize,
    rng: &mut R,
) -> Result<BandProductVerdict> {
    if n * m > MAX_ATOMS {
        return Err(Error::CapExceeded(format!("{n}·{m} atoms exceed {MAX_ATOMS}")));
    }
    let fp = FreeProduct::new(band_algebra(n)?, band_algebra(m)?);
    let target = band_algebra(n * m)?.with_name(format!("B(E{n}⊗F{m})"));
    let atoms = fp.finite_atoms().expect("finite factors");
    let mut bijection = Vec::new();
    let mut seen = AtomSet::empty(n * m);
    let mut failure = None;
    for p in 1..=n {
        for q in 1..=m {
            let r = fp.rect(&Elem::Atoms(AtomSet::from_atoms(n, [p]).unwrap()), &Elem::Atoms(AtomSet::from_atoms(m, [q]).unwrap()));
            let k = (p - 1) * m + q;
            if !atoms.contains(&r) || seen.contains(k) {
                failure.get_or_insert(format!("{r} is not a fresh atom"));
            }
            seen = seen.join(&AtomSet::from_atoms(n * m, [k]).unwrap());
            bijection.push(AtomPairing { rectangle: r.to_string(), atom: k });
        }
    }
    if atoms.len() != n * m || seen != AtomSet::full(n * m) {
        failure.get_or_insert(format!("{} product atoms against {} band atoms", atoms.len(), n * m));
    }
    let map = |x: &_| -> Result<Elem> {
        let below = atoms.iter().zip(1..).filter(|(a, _)| fp.meet(a, x) == **a).map(|(_, k)| k);
        target.set(&below.collect::<Vec<_>>())
    };
    let pairs: Vec<_> = match fp.enumerate(1 << exhaustive_atoms.min(20)) {
        Some(all) => all.iter().flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone()))).collect(),
        None => (0..trials).map(|_| (fp.random_elem(rng), fp.random_elem(rng))).collect(),
    };
    let pairs_checked = pairs.len();
    if let HomVerdict::Fail(c) = check_map(&fp, &target, map, pairs)? {
        failure.get_or_insert(c.to_string());
    }
    Ok(BandProductVerdict {
        n,
        m,
        product_atoms: atoms.len(),
        tensor_band_atoms: n * m,
        bijection,
        pairs_checked,
        isomorphic: failure.is_none(),
        failure,
        note: "isomorphic in finite dimension; the infinite-dimensional contrast is carried by the no_supremum certificates".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> AtomVector<Rational> {
        AtomVector::from_values(xs.iter().map(|&x| rational(x, 1)).collect())
    }

    #[test]
    fn principal_band_examples() {
        assert_eq!(principal_band(&v(&[2, 0, 3])).unwrap().to_elem().to_string(), "{1,3}");
        assert!(principal_band(&v(&[0, 0, 0])).unwrap().members().is_empty());
        assert_eq!(principal_band(&v(&[1, 1, 1])).unwrap().members(), AtomSet::full(3));
        assert_eq!(principal_band(&v(&[-2, 0, 3])).unwrap().to_string(), "[{1,3}]");
    }

    #[test]
    fn band_ideal_and_enumeration_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for _ in 0..20 {
                let f: AtomVector<Rational> = crate::riesz::SampleSpace::random_vector(&AtomSpace::Atoms(n), &mut rng);
                let band = principal_band(&f).unwrap();
                assert_eq!(smallest_band_by_enumeration(&f).unwrap(), band);
                assert_eq!(ideal_members(&f).unwrap(), band.members());
            }
        }
    }

    #[test]
    fn disjointness_examples() {
        assert!(bands_disjoint(&v(&[1, 0, 0]), &v(&[0, 0, 5])).unwrap());
        assert!(!bands_disjoint(&v(&[1, 1, 0]), &v(&[0, 1, 0])).unwrap());
        assert!(bands_disjoint(&v(&[1, 0]), &v(&[0, 0, 5])).is_err());
    }

    #[test]
    fn band_algebra_sizes() {
        assert_eq!(all_bands(3).unwrap().len(), 8);
        assert_eq!(all_bands(1).unwrap().len(), 2);
        assert_eq!(all_bands(10).unwrap().len(), 1024);
        assert_eq!(band_algebra(3).unwrap().atom_count(), Some(3));
        assert!(band_algebra(17).is_err());
    }

    #[test]
    fn band_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = compare_band_products(2, 3, 6, 50, &mut rng).unwrap();
        assert!(c.isomorphic, "{:?}", c.failure);
        assert_eq!(c.product_atoms, 6);
        assert_eq!(c.pairs_checked, 64 * 64);
        assert_eq!(c.bijection[4].atom, 5);
        assert_eq!(c.bijection[4].rectangle, "rect({2}, {2})");
        assert!(compare_band_products(1, 5, 6, 50, &mut rng).unwrap().isomorphic);
        let c = compare_band_products(4, 4, 6, 100, &mut rng).unwrap();
        assert!(c.isomorphic);
        assert_eq!(c.product_atoms, 16);
        assert!(compare_band_products(4, 5, 6, 10, &mut rng).is_err());
    }
}
