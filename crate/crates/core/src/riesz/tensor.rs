//! The Riesz space tensor product in the atom model, the bimorphism `ψ`
//! into `C(A ⊗ B)`, and the induced map `T` with its verifiers.

use rand::Rng;
use serde::Serialize;

use super::{linalg, AtomSpace, AtomVector, LinearLatticeMap, RieszSpace, SampleSpace};
use crate::algebra::{Algebra, BooleanAlgebra};
use crate::error::{Error, Result};
use crate::free_product::{BackendForm, BackendProduct, FreeProduct};
use crate::place::{PlaceFunction, PlaceSpace};
use crate::scalar::{self, Scalar};

type Pf<A, S> = PlaceFunction<<A as BooleanAlgebra>::Elem, S>;

/// Coordinates of `f` on the atoms of a finite algebra.
pub fn to_atom_model<A: BooleanAlgebra, S: Scalar>(space: &PlaceSpace<A>, f: &Pf<A, S>) -> Result<AtomVector<S>> {
    let atoms = space
        .algebra()
        .finite_atoms()
        .ok_or_else(|| Error::Unsupported(format!("{} has no enumerable atoms", space.algebra().label())))?;
    for x in f.supports() {
        space.algebra().validate(x)?;
    }
    Ok(AtomVector::from_values(atoms.iter().map(|a| space.value_on(f, a)).collect()))
}

/// Inverse of [`to_atom_model`].
pub fn from_atom_model<A: BooleanAlgebra, S: Scalar>(space: &PlaceSpace<A>, v: &AtomVector<S>) -> Result<Pf<A, S>> {
    let atoms = space
        .algebra()
        .finite_atoms()
        .ok_or_else(|| Error::Unsupported(format!("{} has no enumerable atoms", space.algebra().label())))?;
    if atoms.len() != v.dim() {
        return Err(Error::DimensionMismatch { expected: atoms.len(), found: v.dim() });
    }
    space.canonicalize(v.values().iter().cloned().zip(atoms).collect())
}

/// `e ⊗ f` in the atom-pair model: `(p, q) ↦ e(p)·f(q)`.
pub fn pure_tensor<S: Scalar>(e: &AtomVector<S>, f: &AtomVector<S>) -> AtomVector<S> {
    let values = e
        .values()
        .iter()
        .flat_map(|a| f.values().iter().map(move |b| a.clone() * b.clone()))
        .collect();
    AtomVector::from_values(values)
}

/// `ψ(Σλᵢχ(xᵢ), Σγⱼχ(uⱼ)) = Σᵢⱼ λᵢγⱼ χ̂(ε_A(xᵢ) ∧ ε_B(uⱼ))`.
pub fn psi<A: BooleanAlgebra, B: BooleanAlgebra, S: Scalar>(
    target: &PlaceSpace<FreeProduct<A, B>>,
    f: &Pf<A, S>,
    g: &Pf<B, S>,
) -> Pf<FreeProduct<A, B>, S> {
    let fp = target.algebra();
    let raw = f
        .terms()
        .iter()
        .flat_map(|(l, x)| g.terms().iter().map(move |(c, u)| (l.clone() * c.clone(), fp.rect(x, u))))
        .collect();
    target.canonicalize(raw).expect("rectangles of valid supports are valid")
}

/// A failed law in a bimorphism check, with rendered inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimorphismVerdict {
    pub passed: bool,
    pub trials: usize,
    pub failure: Option<LawFailure>,
}

/// Checks that `map: E × F → H` is a Riesz bimorphism on `trials` seeded
/// samples: additive in each slot, scalars interchange, positive on positive
/// pairs, and disjointness preserving in each slot against a positive partner.
pub fn verify_bimorphism<S, E, F, H, M, R>(e: &E, f: &F, h: &H, map: M, trials: usize, rng: &mut R) -> BimorphismVerdict
where
    S: Scalar,
    E: SampleSpace<S>,
    F: SampleSpace<S>,
    H: RieszSpace<S>,
    M: Fn(&E::Vector, &F::Vector) -> H::Vector,
    R: Rng + ?Sized,
{
    let fail = |law: &str, inputs: Vec<String>, lhs: &H::Vector, rhs: &H::Vector| BimorphismVerdict {
        passed: false,
        trials,
        failure: Some(LawFailure { law: law.into(), inputs, lhs: lhs.to_string(), rhs: rhs.to_string() }),
    };
    for _ in 0..trials {
        let (f1, f2, fx) = (e.random_vector(rng), e.random_vector(rng), f.random_vector(rng));
        let lhs = map(&e.add(&f1, &f2), &fx);
        let rhs = h.add(&map(&f1, &fx), &map(&f2, &fx));
        if lhs != rhs {
            return fail("additive in the first slot", vec![f1.to_string(), f2.to_string(), fx.to_string()], &lhs, &rhs);
        }

        let (g1, g2, ex) = (f.random_vector(rng), f.random_vector(rng), e.random_vector(rng));
        let lhs = map(&ex, &f.add(&g1, &g2));
        let rhs = h.add(&map(&ex, &g1), &map(&ex, &g2));
        if lhs != rhs {
            return fail("additive in the second slot", vec![ex.to_string(), g1.to_string(), g2.to_string()], &lhs, &rhs);
        }

        let c: S = scalar::random_nonzero(rng);
        let base = map(&ex, &fx);
        let scaled = h.scale(&c, &base);
        for (law, value) in [("scalar in the first slot", map(&e.scale(&c, &ex), &fx)), ("scalar in the second slot", map(&ex, &f.scale(&c, &fx)))] {
            if value != scaled {
                return fail(law, vec![c.to_string(), ex.to_string(), fx.to_string()], &value, &scaled);
            }
        }

        let (pe, pf) = (e.random_positive(rng), f.random_positive(rng));
        let value = map(&pe, &pf);
        if !h.is_positive(&value) {
            return fail("positive on positive pairs", vec![pe.to_string(), pf.to_string()], &value, &h.abs(&value));
        }

        let (d1, d2) = e.random_disjoint_pair(rng);
        let lhs = h.meet(&map(&d1, &pf), &map(&d2, &pf));
        if lhs != h.zero() {
            return fail("disjointness in the first slot", vec![d1.to_string(), d2.to_string(), pf.to_string()], &lhs, &h.zero());
        }
        let (d1, d2) = f.random_disjoint_pair(rng);
        let lhs = h.meet(&map(&pe, &d1), &map(&pe, &d2));
        if lhs != h.zero() {
            return fail("disjointness in the second slot", vec![pe.to_string(), d1.to_string(), d2.to_string()], &lhs, &h.zero());
        }
    }
    BimorphismVerdict { passed: true, trials, failure: None }
}

/// Checks that splitting a support of `f` (or `g`) into two disjoint pieces
/// leaves `ψ(f, g)` unchanged.
pub fn psi_representation_independent<A, B, S, R>(
    left: &PlaceSpace<A>,
    right: &PlaceSpace<B>,
    target: &PlaceSpace<FreeProduct<A, B>>,
    trials: usize,
    rng: &mut R,
) -> Result<BimorphismVerdict>
where
    A: crate::algebra::Sample,
    B: crate::algebra::Sample,
    S: Scalar,
    R: Rng + ?Sized,
{
    for _ in 0..trials {
        let f: Pf<A, S> = left.random(rng);
        let g: Pf<B, S> = right.random(rng);
        let expected = psi(target, &f, &g);
        // Feed the formula a non-canonical representation with a split support.
        let cut_a = left.algebra().random_elem(rng);
        let split_f: Vec<(S, A::Elem)> = f
            .terms()
            .iter()
            .flat_map(|(c, x)| {
                let a = left.algebra();
                [(c.clone(), a.meet(x, &cut_a)), (c.clone(), a.rel_complement_1(x, &cut_a))]
            })
            .filter(|(_, x)| !left.algebra().is_zero(x))
            .collect();
        let cut_b = right.algebra().random_elem(rng);
        let split_g: Vec<(S, B::Elem)> = g
            .terms()
            .iter()
            .flat_map(|(c, u)| {
                let b = right.algebra();
                [(c.clone(), b.meet(u, &cut_b)), (c.clone(), b.rel_complement_1(u, &cut_b))]
            })
            .filter(|(_, u)| !right.algebra().is_zero(u))
            .collect();
        let fp = target.algebra();
        let raw = split_f
            .iter()
            .flat_map(|(l, x)| split_g.iter().map(move |(c, u)| (l.clone() * c.clone(), fp.rect(x, u))))
            .collect();
        let got = target.canonicalize(raw)?;
        if got != expected {
            return Ok(BimorphismVerdict {
                passed: false,
                trials,
                failure: Some(LawFailure {
                    law: "representation independence".into(),
                    inputs: vec![f.to_string(), g.to_string(), cut_a.to_string(), cut_b.to_string()],
                    lhs: got.to_string(),
                    rhs: expected.to_string(),
                }),
            });
        }
    }
    Ok(BimorphismVerdict { passed: true, trials, failure: None })
}

/// One pure-tensor term `c · χ_A(left) ⊗ χ_B(right)` of an onto witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureTerm {
    pub coeff: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct OntoWitness<S: Scalar> {
    pub target: String,
    pub terms: Vec<PureTerm>,
    pub preimage: AtomVector<S>,
}

/// `T : C(A) ⊗̄ C(B) → C(A ⊗ B)` on the atom-pair model, for finite powerset
/// factors: the indicator of `(p, q)` goes to `χ̂(ε_A({p}) ∧ ε_B({q}))`.
#[derive(Clone, Debug)]
pub struct TensorMap {
    left: PlaceSpace<Algebra>,
    right: PlaceSpace<Algebra>,
    target: PlaceSpace<BackendProduct>,
    domain: AtomSpace,
    basis_images: Vec<BackendForm>,
}

pub fn build_t(a: &Algebra, b: &Algebra) -> Result<TensorMap> {
    let (Some(n), Some(m)) = (a.atom_count(), b.atom_count()) else {
        return Err(Error::Unsupported("the atom model needs nontrivial powerset factors".into()));
    };
    let fp = FreeProduct::new(a.clone(), b.clone());
    let la = a.finite_atoms().expect("powerset");
    let ra = b.finite_atoms().expect("powerset");
    let basis_images = la.iter().flat_map(|p| ra.iter().map(move |q| (p, q))).map(|(p, q)| fp.rect(p, q)).collect();
    Ok(TensorMap {
        left: PlaceSpace::new(a.clone()),
        right: PlaceSpace::new(b.clone()),
        target: PlaceSpace::new(fp),
        domain: AtomSpace::Pairs(n, m),
        basis_images,
    })
}

/// Outcome of [`TensorMap::verify`].
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct TensorIsoReport<S: Scalar> {
    pub domain_dim: usize,
    pub rank: usize,
    pub routed: bool,
    pub trials: usize,
    pub onto_witnesses: Vec<OntoWitness<S>>,
    pub failures: Vec<String>,
}

impl<S: Scalar> TensorIsoReport<S> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl TensorMap {
    pub fn domain(&self) -> AtomSpace {
        self.domain
    }

    pub fn target(&self) -> &PlaceSpace<BackendProduct> {
        &self.target
    }

    pub fn left(&self) -> &PlaceSpace<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &PlaceSpace<Algebra> {
        &self.right
    }

    pub fn basis_images(&self) -> &[BackendForm] {
        &self.basis_images
    }

    pub fn apply<S: Scalar>(&self, v: &AtomVector<S>) -> Result<Pf<BackendProduct, S>> {
        if v.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), found: v.dim() });
        }
        let raw = v.values().iter().cloned().zip(self.basis_images.iter().cloned()).collect();
        self.target.canonicalize(raw)
    }

    /// `T` in target atom coordinates.
    pub fn matrix<S: Scalar>(&self) -> LinearLatticeMap<S> {
        let cols: Vec<AtomVector<S>> = self
            .basis_images
            .iter()
            .map(|img| to_atom_model(&self.target, &self.target.chi::<S>(img).expect("valid image")).expect("finite target"))
            .collect();
        LinearLatticeMap::from_columns(self.domain.dim(), &cols).expect("square map")
    }

    /// `T ∘ ⊗` applied to a pair of place functions.
    pub fn apply_pure<S: Scalar>(&self, f: &Pf<Algebra, S>, g: &Pf<Algebra, S>) -> Result<Pf<BackendProduct, S>> {
        let e = to_atom_model(&self.left, f)?;
        let h = to_atom_model(&self.right, g)?;
        self.apply(&pure_tensor(&e, &h))
    }

    /// A preimage of `h` built from the disjoint-rectangle decomposition of
    /// each support: `χ̂(⋁ₖ ε_A(aₖ) ∧ ε_B(bₖ)) = Σₖ T(χ_A(aₖ) ⊗ χ_B(bₖ))`.
    pub fn onto_witness<S: Scalar>(&self, h: &Pf<BackendProduct, S>) -> Result<OntoWitness<S>> {
        let fp = self.target.algebra();
        let mut terms = Vec::new();
        let mut preimage: AtomVector<S> = self.domain.zero();
        for (c, support) in h.terms() {
            fp.validate(support)?;
            for r in fp.decompose_disjoint(support) {
                let e = to_atom_model(&self.left, &self.left.chi::<S>(&r.left)?)?;
                let f = to_atom_model(&self.right, &self.right.chi::<S>(&r.right)?)?;
                preimage = self.domain.add(&preimage, &self.domain.scale(c, &pure_tensor(&e, &f)));
                terms.push(PureTerm { coeff: c.to_string(), left: r.left.to_string(), right: r.right.to_string() });
            }
        }
        Ok(OntoWitness { target: h.to_string(), terms, preimage })
    }

    /// Checks linearity, `|T v| = T|v|`, `T(v ∨ w) = T v ∨ T w`, full rank,
    /// `T ∘ ⊗ = ψ`, and onto witnesses for the atoms, the unit and sampled
    /// elements of `C(A ⊗ B)`.
    pub fn verify<S: Scalar, R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> Result<TensorIsoReport<S>> {
        let mut failures = Vec::new();
        let d = self.domain;
        let t = &self.target;
        for _ in 0..trials {
            let v: AtomVector<S> = d.random_vector(rng);
            let w: AtomVector<S> = d.random_vector(rng);
            let c: S = scalar::random_nonzero(rng);
            let (tv, tw) = (self.apply(&v)?, self.apply(&w)?);
            if self.apply(&d.add(&d.scale(&c, &v), &w))? != t.add(&t.scale(&c, &tv), &tw) {
                failures.push(format!("linearity fails at v = {v}, w = {w}, c = {c}"));
            }
            if self.apply(&RieszSpace::abs(&d, &v))? != t.abs(&tv) {
                failures.push(format!("|T v| != T|v| at v = {v}"));
            }
            if self.apply(&d.join(&v, &w))? != t.join(&tv, &tw) {
                failures.push(format!("T(v ∨ w) != T v ∨ T w at v = {v}, w = {w}"));
            }
            let f: Pf<Algebra, S> = self.left.random(rng);
            let g: Pf<Algebra, S> = self.right.random(rng);
            if self.apply_pure(&f, &g)? != psi(t, &f, &g) {
                failures.push(format!("T(f ⊗ g) != ψ(f, g) at f = {f}, g = {g}"));
            }
            if failures.len() > 8 {
                break;
            }
        }
        let matrix: LinearLatticeMap<S> = self.matrix();
        let rank = matrix.rank();
        if rank != d.dim() {
            failures.push(format!("rank {rank} != {}", d.dim()));
        }
        let routed = matrix.is_routed();
        if !routed {
            failures.push("matrix is not a routed (lattice) shape".into());
        }
        let fp = t.algebra();
        let mut spanning: Vec<Pf<BackendProduct, S>> =
            fp.finite_atoms().expect("finite").iter().map(|a| t.chi(a).expect("valid")).collect();
        spanning.push(t.unit());
        for _ in 0..4 {
            spanning.push(t.random(rng));
        }
        let mut onto_witnesses = Vec::new();
        for h in &spanning {
            let w = self.onto_witness(h)?;
            if self.apply(&w.preimage)? != *h {
                failures.push(format!("onto witness for {h} does not map back"));
            }
            onto_witnesses.push(w);
        }
        Ok(TensorIsoReport { domain_dim: d.dim(), rank, routed, trials, onto_witnesses, failures })
    }
}

/// Outcome of [`verify_universal_property`].
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct UniversalVerdict<S: Scalar> {
    pub induced: LinearLatticeMap<S>,
    pub commutes: bool,
    pub riesz_homomorphism: bool,
    pub unique: bool,
    pub failure: Option<String>,
}

impl<S: Scalar> UniversalVerdict<S> {
    pub fn passed(&self) -> bool {
        self.commutes && self.riesz_homomorphism && self.unique
    }
}

/// Builds `T′` on the atom-pair model of `Atoms(n) ⊗̄ Atoms(m)` from a
/// bimorphism `psi_prime` into an atom space of dimension `target_dim`, and
/// checks `T′ ∘ ⊗ = psi_prime`, the lattice property of `T′`, and that the
/// linear map determined by `psi_prime` on a spanning set of random pure
/// tensors coincides with `T′`.
pub fn verify_universal_property<S, M, R>(
    n: usize,
    m: usize,
    target_dim: usize,
    psi_prime: M,
    trials: usize,
    rng: &mut R,
) -> Result<UniversalVerdict<S>>
where
    S: Scalar,
    M: Fn(&AtomVector<S>, &AtomVector<S>) -> AtomVector<S>,
    R: Rng + ?Sized,
{
    let (ea, eb, pairs, target) = (AtomSpace::Atoms(n), AtomSpace::Atoms(m), AtomSpace::Pairs(n, m), AtomSpace::Atoms(target_dim));
    let columns: Vec<AtomVector<S>> = (0..n)
        .flat_map(|p| (0..m).map(move |q| (p, q)))
        .map(|(p, q)| psi_prime(&ea.indicator(p), &eb.indicator(q)))
        .collect();
    let induced = LinearLatticeMap::from_columns(target_dim, &columns)?;
    let mut failure = None;

    let mut commutes = true;
    for _ in 0..trials {
        let u: AtomVector<S> = ea.random_vector(rng);
        let w: AtomVector<S> = eb.random_vector(rng);
        if induced.apply(&pure_tensor(&u, &w)) != psi_prime(&u, &w) {
            commutes = false;
            failure = Some(format!("T′(u ⊗ w) != ψ′(u, w) at u = {u}, w = {w}"));
            break;
        }
    }

    let mut riesz_homomorphism = true;
    for _ in 0..trials {
        let v: AtomVector<S> = pairs.random_vector(rng);
        let lhs = RieszSpace::abs(&target, &induced.apply(&v));
        let rhs = induced.apply(&RieszSpace::abs(&pairs, &v));
        if lhs != rhs {
            riesz_homomorphism = false;
            failure.get_or_insert_with(|| format!("|T′ v| != T′|v| at v = {v}"));
            break;
        }
    }

    // Any linear map agreeing with ψ′ on pure tensors is pinned down by a
    // spanning family of them; recover it by solving and compare with T′.
    let dim = pairs.dim();
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut images: Vec<Vec<S>> = Vec::new();
    let mut attempts = 0;
    while basis.len() < dim && attempts < 50 * dim.max(1) {
        attempts += 1;
        let u: AtomVector<S> = ea.random_vector(rng);
        let w: AtomVector<S> = eb.random_vector(rng);
        let t = pure_tensor(&u, &w);
        let mut trial = basis.clone();
        trial.push(t.values().to_vec());
        if linalg::rank(&trial) == trial.len() {
            basis = trial;
            images.push(psi_prime(&u, &w).values().to_vec());
        }
    }
    let unique = match linalg::solve(&basis, &images) {
        Some(transposed) if basis.len() == dim => {
            let recovered: Vec<AtomVector<S>> = transposed.into_iter().map(AtomVector::from_values).collect();
            let recovered = LinearLatticeMap::from_columns(target_dim, &recovered)?;
            recovered == induced
        }
        _ => false,
    };
    if !unique {
        failure.get_or_insert_with(|| "linear map recovered from pure tensors differs from T′".into());
    }
    Ok(UniversalVerdict { induced, commutes, riesz_homomorphism, unique, failure })
}

/// Negative control: `(f, g) ↦ ψ(f, g) + ψ(e_A, g)`, which is not additive in
/// the first slot.
pub fn broken_bimorphism<A: BooleanAlgebra, B: BooleanAlgebra, S: Scalar>(
    left: &PlaceSpace<A>,
    target: &PlaceSpace<FreeProduct<A, B>>,
    f: &Pf<A, S>,
    g: &Pf<B, S>,
) -> Pf<FreeProduct<A, B>, S> {
    target.add(&psi(target, f, g), &psi(target, &left.unit(), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: usize) -> Algebra {
        Algebra::powerset(n).unwrap()
    }

    fn q(v: &[i64]) -> AtomVector<Rational> {
        AtomVector::from_values(v.iter().map(|&x| rational(x, 1)).collect())
    }

    #[test]
    fn atom_model_examples() {
        let s = PlaceSpace::new(p(3));
        let f: Pf<Algebra, Rational> = s.scale(&rational(2, 1), &s.chi(&p(3).set(&[1, 2]).unwrap()).unwrap());
        assert_eq!(to_atom_model(&s, &f).unwrap(), q(&[2, 2, 0]));
        assert_eq!(to_atom_model(&s, &s.zero::<Rational>()).unwrap(), q(&[0, 0, 0]));
        assert_eq!(to_atom_model(&s, &s.unit::<Rational>()).unwrap(), q(&[1, 1, 1]));
        assert_eq!(from_atom_model(&s, &q(&[2, 2, 0])).unwrap(), f);
        assert!(to_atom_model(&PlaceSpace::new(Algebra::finite_cofinite()), &PlaceSpace::new(Algebra::finite_cofinite()).unit::<Rational>()).is_err());
    }

    #[test]
    fn pure_tensor_examples() {
        assert_eq!(pure_tensor(&q(&[1, 0]), &q(&[0, 1])), q(&[0, 1, 0, 0]));
        assert_eq!(pure_tensor(&q(&[1, 1]), &q(&[1, 1])), q(&[1, 1, 1, 1]));
        assert_eq!(pure_tensor(&q(&[2, 3]), &q(&[5, 7])), q(&[10, 14, 15, 21]));
    }

    #[test]
    fn psi_examples() {
        let (a, b) = (p(2), p(2));
        let (sa, sb) = (PlaceSpace::new(a.clone()), PlaceSpace::new(b.clone()));
        let target = PlaceSpace::new(FreeProduct::new(a.clone(), b.clone()));
        let x = a.set(&[1]).unwrap();
        let u = b.set(&[1]).unwrap();
        let got: Pf<BackendProduct, Rational> = psi(&target, &sa.chi(&x).unwrap(), &sb.chi(&u).unwrap());
        assert_eq!(got, target.chi(&target.algebra().rect(&x, &u)).unwrap());
        assert_eq!(psi(&target, &sa.unit::<Rational>(), &sb.unit()), target.unit());
        let f = sa.scale(&rational(2, 1), &sa.chi(&x).unwrap());
        let g = sb.scale(&rational(3, 1), &sb.chi(&u).unwrap());
        assert_eq!(psi(&target, &f, &g).to_string(), "6*chi(rect({1}, {1}))");
    }

    #[test]
    fn bimorphism_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (a, b) = (p(2), p(2));
        let (sa, sb) = (PlaceSpace::new(a.clone()), PlaceSpace::new(b.clone()));
        let target = PlaceSpace::new(FreeProduct::new(a, b));
        let v = verify_bimorphism::<Rational, _, _, _, _, _>(&sa, &sb, &target, |f, g| psi(&target, f, g), 100, &mut rng);
        assert!(v.passed, "{v:?}");
        let (e, f) = (AtomSpace::Atoms(2), AtomSpace::Atoms(3));
        let v = verify_bimorphism::<Rational, _, _, _, _, _>(&e, &f, &AtomSpace::Pairs(2, 3), pure_tensor, 100, &mut rng);
        assert!(v.passed);
        let v = verify_bimorphism::<Rational, _, _, _, _, _>(&sa, &sb, &target, |f, g| broken_bimorphism(&sa, &target, f, g), 100, &mut rng);
        assert!(!v.passed);
        assert!(v.failure.unwrap().law.contains("first slot"));
    }

    #[test]
    fn build_t_examples() {
        let (a, b) = (p(2), p(2));
        let t = build_t(&a, &b).unwrap();
        let img = t.apply(&t.domain().indicator::<Rational>(0)).unwrap();
        let r = t.target().algebra().rect(&a.set(&[1]).unwrap(), &b.set(&[1]).unwrap());
        assert_eq!(img, t.target().chi(&r).unwrap());
        assert_eq!(t.apply(&t.domain().ones::<Rational>()).unwrap(), t.target().unit());
        let v = pure_tensor(&q(&[1, 0]), &q(&[0, 1]));
        let r = t.target().algebra().rect(&a.set(&[1]).unwrap(), &b.set(&[2]).unwrap());
        assert_eq!(t.apply(&v).unwrap(), t.target().chi(&r).unwrap());
        assert!(build_t(&Algebra::finite_cofinite(), &b).is_err());
        assert!(build_t(&Algebra::trivial(), &b).is_err());
    }

    #[test]
    fn onto_witness_of_complement_rectangle() {
        let (a, b) = (p(2), p(2));
        let t = build_t(&a, &b).unwrap();
        let fp = t.target().algebra();
        let h: Pf<BackendProduct, Rational> =
            t.target().chi(&fp.complement(&fp.rect(&a.set(&[1]).unwrap(), &b.set(&[1]).unwrap()))).unwrap();
        let w = t.onto_witness(&h).unwrap();
        assert_eq!(w.terms.len(), 2);
        assert_eq!(t.apply(&w.preimage).unwrap(), h);
        let unit = t.onto_witness(&t.target().unit::<Rational>()).unwrap();
        assert_eq!(unit.preimage, q(&[1, 1, 1, 1]));
    }

    #[test]
    fn rank_of_three_by_four() {
        let t = build_t(&p(3), &p(4)).unwrap();
        assert_eq!(t.matrix::<Rational>().rank(), 12);
    }

    #[test]
    fn verify_small_tensor_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = build_t(&p(2), &p(3)).unwrap();
        let rep = t.verify::<Rational, _>(30, &mut rng).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.rank, 6);
    }

    #[test]
    fn universal_property_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = verify_universal_property::<Rational, _, _>(2, 2, 4, pure_tensor, 30, &mut rng).unwrap();
        assert!(v.passed());
        assert_eq!(v.induced, LinearLatticeMap::identity(4));

        let (a, b) = (p(2), p(2));
        let t = build_t(&a, &b).unwrap();
        let (sa, sb) = (t.left().clone(), t.right().clone());
        let target = t.target().clone();
        let via_psi = |u: &AtomVector<Rational>, w: &AtomVector<Rational>| {
            let f = from_atom_model(&sa, u).unwrap();
            let g = from_atom_model(&sb, w).unwrap();
            to_atom_model(&target, &psi(&target, &f, &g)).unwrap()
        };
        let v = verify_universal_property(2, 2, 4, via_psi, 30, &mut rng).unwrap();
        assert!(v.passed());
        assert_eq!(v.induced, t.matrix());

        let perm = [2usize, 0, 3, 1];
        let permuted = |u: &AtomVector<Rational>, w: &AtomVector<Rational>| {
            let x = pure_tensor(u, w);
            let mut out = vec![rational(0, 1); 4];
            for (k, &to) in perm.iter().enumerate() {
                out[to] = x.values()[k].clone();
            }
            AtomVector::from_values(out)
        };
        let v = verify_universal_property(2, 2, 4, permuted, 30, &mut rng).unwrap();
        assert!(v.passed());
        for (k, &to) in perm.iter().enumerate() {
            assert_eq!(*v.induced.entry(to, k), rational(1, 1));
        }
    }

    #[test]
    fn representation_independence_on_cofinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fc = Algebra::finite_cofinite();
        let (sa, sb) = (PlaceSpace::new(fc.clone()), PlaceSpace::new(fc.clone()));
        let target = PlaceSpace::new(FreeProduct::new(fc.clone(), fc));
        let v = psi_representation_independent::<_, _, Rational, _>(&sa, &sb, &target, 50, &mut rng).unwrap();
        assert!(v.passed, "{v:?}");
    }
}
