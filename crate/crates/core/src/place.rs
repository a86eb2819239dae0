//! Carathéodory spaces of place functions.
//!
//! A place function over a Boolean algebra `A` is a finite combination
//! `Σ λᵢ χ(xᵢ)` with pairwise disjoint nonzero supports `xᵢ`. Two such sums
//! are the same element of `C(A)` when their supports have the same join and
//! the coefficients agree wherever supports overlap; the canonical form picks
//! the coarsest representative (distinct coefficients, supports sorted), so
//! that relation becomes structural equality.

use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::algebra::expr::{self, Cursor, LiteralParser};
use crate::algebra::{sup_finite, BooleanAlgebra, Sample};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct PlaceFunction<E, S> {
    terms: Vec<(S, E)>,
}

impl<E, S> PlaceFunction<E, S> {
    /// `(coefficient, support)` pairs in canonical order.
    pub fn terms(&self) -> &[(S, E)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn supports(&self) -> impl Iterator<Item = &E> {
        self.terms.iter().map(|(_, x)| x)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &S> {
        self.terms.iter().map(|(c, _)| c)
    }
}

impl<E: fmt::Display, S: Scalar> fmt::Display for PlaceFunction<E, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, x)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, _) => write!(f, "{c}*chi({x})")?,
                (_, true) => write!(f, " - {}*chi({x})", c.abs())?,
                (_, false) => write!(f, " + {c}*chi({x})")?,
            }
        }
        Ok(())
    }
}

impl<E: fmt::Display, S: Scalar> fmt::Debug for PlaceFunction<E, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<E: fmt::Display, S: Scalar> Serialize for PlaceFunction<E, S> {
    fn serialize<Sr: Serializer>(&self, serializer: Sr) -> Result<Sr::Ok, Sr::Error> {
        serializer.collect_str(self)
    }
}

/// Outcome of a regularity check for `{χ(x) : x ∈ xs}` and `s = sup xs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub passed: bool,
    pub candidates_checked: usize,
    /// An upper bound strictly below `χ(s)`, when one was found.
    pub witness: Option<String>,
}

/// The space `C(A)` of place functions over `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSpace<A> {
    alg: A,
}

type Pf<A, S> = PlaceFunction<<A as BooleanAlgebra>::Elem, S>;

impl<A: BooleanAlgebra> PlaceSpace<A> {
    pub fn new(alg: A) -> Self {
        PlaceSpace { alg }
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    pub fn zero<S: Scalar>(&self) -> Pf<A, S> {
        PlaceFunction { terms: Vec::new() }
    }

    /// The strong unit `e = χ(1)`.
    pub fn unit<S: Scalar>(&self) -> Pf<A, S> {
        self.chi_unchecked(&self.alg.one())
    }

    fn chi_unchecked<S: Scalar>(&self, x: &A::Elem) -> Pf<A, S> {
        if self.alg.is_zero(x) {
            self.zero()
        } else {
            PlaceFunction { terms: vec![(S::one(), x.clone())] }
        }
    }

    /// `1·χ(x)`.
    pub fn chi<S: Scalar>(&self, x: &A::Elem) -> Result<Pf<A, S>> {
        self.alg.validate(x)?;
        Ok(self.chi_unchecked(x))
    }

    fn check<S>(&self, f: &Pf<A, S>) -> Result<()> {
        f.terms.iter().try_for_each(|(_, x)| self.alg.validate(x))
    }

    /// Canonical form of an arbitrary combination: refine to the atoms of the
    /// generated subalgebra, sum cellwise, drop zero cells, merge cells sharing
    /// a coefficient.
    pub fn canonicalize<S: Scalar>(&self, raw: Vec<(S, A::Elem)>) -> Result<Pf<A, S>> {
        raw.iter().try_for_each(|(_, x)| self.alg.validate(x))?;
        Ok(self.canonical(raw))
    }

    fn canonical<S: Scalar>(&self, raw: Vec<(S, A::Elem)>) -> Pf<A, S> {
        let raw: Vec<(S, A::Elem)> =
            raw.into_iter().filter(|(c, x)| !c.is_zero() && !self.alg.is_zero(x)).collect();
        let disjoint = raw.iter().enumerate().all(|(i, (_, x))| raw[i + 1..].iter().all(|(_, y)| self.alg.disjoint(x, y)));
        let cells: Vec<(S, A::Elem)> = if disjoint {
            raw
        } else {
            let gens: Vec<A::Elem> = raw.iter().map(|(_, x)| x.clone()).collect();
            self.alg
                .atomize(&gens)
                .into_iter()
                .map(|cell| {
                    let sum = raw
                        .iter()
                        .filter(|(_, x)| self.alg.leq(&cell, x))
                        .fold(S::zero(), |acc, (c, _)| acc + c.clone());
                    (sum, cell)
                })
                .collect()
        };
        let mut groups: Vec<(S, A::Elem)> = Vec::new();
        for (sum, cell) in cells {
            if sum.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|(c, _)| *c == sum) {
                Some(g) => g.1 = self.alg.join(&g.1, &cell),
                None => groups.push((sum, cell)),
            }
        }
        groups.sort_by(|a, b| a.1.cmp(&b.1));
        PlaceFunction { terms: groups }
    }

    /// Coefficient of `f` on `cell`, which must lie inside one support or
    /// outside all of them.
    pub fn value_on<S: Scalar>(&self, f: &Pf<A, S>, cell: &A::Elem) -> S {
        f.terms
            .iter()
            .find(|(_, x)| !self.alg.disjoint(x, cell))
            .map(|(c, _)| c.clone())
            .unwrap_or_else(S::zero)
    }

    /// Join of the supports.
    pub fn support<S: Scalar>(&self, f: &Pf<A, S>) -> A::Elem {
        self.alg.join_all(f.supports())
    }

    /// Addition by the three-sum formula: `(λᵢ+γⱼ)χ(xᵢ∧yⱼ)`, `λᵢχ(xᵢ −₁ ⋁yⱼ)`
    /// and `γⱼχ(yⱼ −₁ ⋁xᵢ)`, keeping only nonzero coefficients on nonzero parts.
    pub fn add_paper<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Result<Pf<A, S>> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.add_formula(f, g))
    }

    fn add_formula<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Pf<A, S> {
        let a = &self.alg;
        let join_f = self.support(f);
        let join_g = self.support(g);
        let mut raw = Vec::new();
        for (l, x) in &f.terms {
            for (c, y) in &g.terms {
                let coeff = l.clone() + c.clone();
                let part = a.meet(x, y);
                if !coeff.is_zero() && !a.is_zero(&part) {
                    raw.push((coeff, part));
                }
            }
        }
        for (l, x) in &f.terms {
            let part = a.rel_complement_1(x, &join_g);
            if !a.is_zero(&part) {
                raw.push((l.clone(), part));
            }
        }
        for (c, y) in &g.terms {
            let part = a.rel_complement_1(y, &join_f);
            if !a.is_zero(&part) {
                raw.push((c.clone(), part));
            }
        }
        self.canonical(raw)
    }

    /// Addition by joint refinement and cellwise sums.
    pub fn add_refine<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Result<Pf<A, S>> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.cellwise(f, g, |a, b| a.clone() + b.clone()))
    }

    fn cellwise<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>, op: impl Fn(&S, &S) -> S) -> Pf<A, S> {
        let gens: Vec<A::Elem> = f.supports().chain(g.supports()).cloned().collect();
        let raw = self
            .alg
            .atomize(&gens)
            .into_iter()
            .map(|cell| (op(&self.value_on(f, &cell), &self.value_on(g, &cell)), cell))
            .collect();
        self.canonical(raw)
    }

    pub fn add<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Pf<A, S> {
        self.add_formula(f, g)
    }

    pub fn scale<S: Scalar>(&self, c: &S, f: &Pf<A, S>) -> Pf<A, S> {
        if c.is_zero() {
            return self.zero();
        }
        PlaceFunction { terms: f.terms.iter().map(|(l, x)| (c.clone() * l.clone(), x.clone())).collect() }
    }

    pub fn neg<S: Scalar>(&self, f: &Pf<A, S>) -> Pf<A, S> {
        self.scale(&-S::one(), f)
    }

    pub fn sub<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Pf<A, S> {
        self.add(f, &self.neg(g))
    }

    /// Pointwise minimum, including the residual cell where both vanish.
    pub fn meet<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Pf<A, S> {
        self.cellwise(f, g, scalar::min_of)
    }

    /// Pointwise maximum.
    pub fn join<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Pf<A, S> {
        self.cellwise(f, g, scalar::max_of)
    }

    pub fn checked_meet<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Result<Pf<A, S>> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.meet(f, g))
    }

    pub fn checked_join<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> Result<Pf<A, S>> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.join(f, g))
    }

    pub fn pos_part<S: Scalar>(&self, f: &Pf<A, S>) -> Pf<A, S> {
        self.join(f, &self.zero())
    }

    /// `|f| = f ∨ 0 − (f ∧ 0)`.
    pub fn abs<S: Scalar>(&self, f: &Pf<A, S>) -> Pf<A, S> {
        self.sub(&self.pos_part(f), &self.meet(f, &self.zero()))
    }

    /// `f ≥ 0`.
    pub fn is_positive<S: Scalar>(&self, f: &Pf<A, S>) -> bool {
        f.coefficients().all(|c| c.is_positive())
    }

    pub fn leq<S: Scalar>(&self, f: &Pf<A, S>, g: &Pf<A, S>) -> bool {
        self.is_positive(&self.sub(g, f))
    }

    /// `f ∧ (e − f) = 0` for the unit `e`.
    pub fn is_component<S: Scalar>(&self, f: &Pf<A, S>) -> bool {
        let rest = self.sub(&self.unit(), f);
        self.meet(f, &rest).is_zero()
    }

    /// `f` as a combination of components `χ(xᵢ)` of the unit.
    pub fn component_decomposition<S: Scalar>(&self, f: &Pf<A, S>) -> Vec<(S, Pf<A, S>)> {
        f.terms.iter().map(|(c, x)| (c.clone(), self.chi_unchecked(x))).collect()
    }

    /// Checks that `χ(s)` is the least upper bound of `{χ(x) : x ∈ xs}` in
    /// `C(A)`, where `s` must be the supremum of `xs` in `A`.
    ///
    /// Candidates below `χ(s)` are `χ(s) − δχ(p)` for `δ ∈ {1, 1/2}` and `p`
    /// ranging over the atoms under `s` (finite algebras) or the cells of the
    /// subalgebra generated by `xs` and `s`. None of them may be an upper bound.
    pub fn check_regularity<S: Scalar>(&self, xs: &[A::Elem], s: &A::Elem) -> Result<RegularityVerdict> {
        let sup = sup_finite(&self.alg, xs)?;
        self.alg.validate(s)?;
        if sup != *s {
            return Err(Error::Invalid(format!("{s} is not the supremum of the family")));
        }
        let chis: Vec<Pf<A, S>> = xs.iter().map(|x| self.chi_unchecked(x)).collect();
        let top: Pf<A, S> = self.chi_unchecked(s);
        let is_upper = |h: &Pf<A, S>| chis.iter().all(|c| self.leq(c, h));
        if !is_upper(&top) {
            return Ok(RegularityVerdict { passed: false, candidates_checked: 0, witness: Some(top.to_string()) });
        }
        let pieces: Vec<A::Elem> = match self.alg.finite_atoms() {
            Some(atoms) => atoms.into_iter().filter(|p| self.alg.leq(p, s)).collect(),
            None => {
                let mut gens = xs.to_vec();
                gens.push(s.clone());
                self.alg.atomize(&gens).into_iter().filter(|p| self.alg.leq(p, s)).collect()
            }
        };
        let mut checked = 0;
        for p in &pieces {
            for delta in [S::one(), S::ratio(1, 2)] {
                let h = self.sub(&top, &self.scale(&delta, &self.chi_unchecked(p)));
                checked += 1;
                if is_upper(&h) {
                    return Ok(RegularityVerdict { passed: false, candidates_checked: checked, witness: Some(h.to_string()) });
                }
            }
        }
        Ok(RegularityVerdict { passed: true, candidates_checked: checked, witness: None })
    }
}

impl<A: Sample> PlaceSpace<A> {
    /// Up to four random terms with small rational coefficients.
    pub fn random<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> Pf<A, S> {
        let k = rng.gen_range(0..=4);
        let raw = (0..k).map(|_| (scalar::random_nonzero(rng), self.alg.random_elem(rng))).collect();
        self.canonical(raw)
    }

    /// Random `f` with every coefficient positive.
    pub fn random_positive<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> Pf<A, S> {
        let f: Pf<A, S> = self.random(rng);
        self.abs(&f)
    }

    /// Random `f` supported under `within`.
    pub fn random_within<S: Scalar, R: Rng + ?Sized>(&self, within: &A::Elem, rng: &mut R) -> Pf<A, S> {
        let f: Pf<A, S> = self.random(rng);
        let raw = f.terms.into_iter().map(|(c, x)| (c, self.alg.meet(&x, within))).collect();
        self.canonical(raw)
    }
}

/// Parses `c1*chi(X1) + c2*chi(X2) - ...` with coefficients `p` or `p/q`
/// (default 1) and `Xi` expressions in the algebra; `0` is the zero function.
pub fn parse_place_function<A: BooleanAlgebra, S: Scalar>(
    space: &PlaceSpace<A>,
    text: &str,
    lit: &mut LiteralParser<'_, A::Elem>,
) -> Result<Pf<A, S>> {
    let mut cur = Cursor::new(text);
    if cur.eat("0") && cur.at_end() {
        return Ok(space.zero());
    }
    let mut cur = Cursor::new(text);
    let mut raw = Vec::new();
    let mut first = true;
    loop {
        let mut negative = false;
        if !first || cur.peek() == Some('-') || cur.peek() == Some('+') {
            if cur.eat("-") {
                negative = true;
            } else if !cur.eat("+") {
                return Err(cur.error("expected `+` or `-`"));
            }
        }
        first = false;
        let mut coeff = S::one();
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = cur.number()? as i64;
            let den = if cur.eat("/") { cur.number()? as i64 } else { 1 };
            if den == 0 {
                return Err(cur.error("zero denominator"));
            }
            coeff = S::ratio(num, den);
            cur.expect("*")?;
        }
        if negative {
            coeff = -coeff;
        }
        cur.expect("chi(")?;
        let e = expr::parse_expr_at(&mut cur, lit)?;
        cur.expect(")")?;
        raw.push((coeff, expr::evaluate(space.algebra(), &e)?));
        if cur.at_end() {
            break;
        }
    }
    space.canonicalize(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::scalar::{rational, Rational};

    fn c3() -> PlaceSpace<Algebra> {
        PlaceSpace::new(Algebra::powerset(3).unwrap())
    }

    fn parse(space: &PlaceSpace<Algebra>, text: &str) -> Pf<Algebra, Rational> {
        let alg = space.algebra().clone();
        parse_place_function(space, text, &mut |c| expr::parse_elem_literal(&alg, c)).unwrap()
    }

    #[test]
    fn chi_examples() {
        let s = c3();
        let f: Pf<Algebra, Rational> = s.chi(&s.algebra().set(&[1, 2]).unwrap()).unwrap();
        assert_eq!(f.to_string(), "1*chi({1,2})");
        assert!(s.chi::<Rational>(&s.algebra().zero()).unwrap().is_zero());
        assert_eq!(s.chi::<Rational>(&s.algebra().one()).unwrap(), s.unit());
    }

    #[test]
    fn canonicalize_examples() {
        let s = c3();
        let a = s.algebra().clone();
        let set = |xs: &[usize]| a.set(xs).unwrap();
        let f = s.canonicalize(vec![(rational(1, 1), set(&[1])), (rational(1, 1), set(&[2]))]).unwrap();
        assert_eq!(f.to_string(), "1*chi({1,2})");
        let z = s.canonicalize(vec![(rational(2, 1), set(&[1])), (rational(-2, 1), set(&[1]))]).unwrap();
        assert!(z.is_zero());
        let g = s.canonicalize(vec![(rational(2, 1), set(&[1, 2])), (rational(3, 1), set(&[2, 3]))]).unwrap();
        assert_eq!(g.to_string(), "2*chi({1}) + 5*chi({2}) + 3*chi({3})");
    }

    #[test]
    fn addition_examples() {
        let s = c3();
        let f = parse(&s, "2*chi({1,2})");
        let g = parse(&s, "3*chi({2,3})");
        let want = "2*chi({1}) + 5*chi({2}) + 3*chi({3})";
        assert_eq!(s.add_paper(&f, &g).unwrap().to_string(), want);
        assert_eq!(s.add_refine(&f, &g).unwrap().to_string(), want);
        assert!(s.add_paper(&f, &s.scale(&rational(-1, 1), &f)).unwrap().is_zero());
        assert_eq!(s.add_refine(&s.zero(), &g).unwrap(), g);
    }

    #[test]
    fn cofinite_addition_reaches_unit() {
        let fc = Algebra::finite_cofinite();
        let s = PlaceSpace::new(fc.clone());
        let f: Pf<Algebra, Rational> = s.chi(&fc.cof(&[0])).unwrap();
        let g = s.chi(&fc.fin(&[0])).unwrap();
        assert_eq!(s.add_paper(&f, &g).unwrap(), s.unit());
        assert_eq!(s.add_refine(&f, &g).unwrap(), s.unit());
        assert_eq!(s.unit::<Rational>().to_string(), "1*chi(cof{})");
    }

    #[test]
    fn lattice_examples() {
        let s = c3();
        let f = parse(&s, "2*chi({1,2})");
        let g = parse(&s, "3*chi({2,3})");
        assert_eq!(s.meet(&f, &g).to_string(), "2*chi({2})");
        assert_eq!(s.join(&f, &g).to_string(), "2*chi({1}) + 3*chi({2,3})");
        let h = parse(&s, "-1*chi({1}) + 2*chi({3})");
        assert_eq!(s.abs(&h).to_string(), "1*chi({1}) + 2*chi({3})");
        assert_eq!(s.pos_part(&h).to_string(), "2*chi({3})");
    }

    #[test]
    fn scale_examples() {
        let s = c3();
        let f = parse(&s, "2*chi({1})");
        assert!(s.scale(&rational(0, 1), &f).is_zero());
        assert_eq!(s.scale(&rational(1, 1), &f), f);
        assert_eq!(s.scale(&rational(-1, 1), &f).to_string(), "-2*chi({1})");
    }

    #[test]
    fn component_examples() {
        let s = c3();
        assert!(s.is_component(&parse(&s, "chi({2})")));
        assert!(!s.is_component(&parse(&s, "2*chi({2})")));
        assert!(!s.is_component(&parse(&s, "-1*chi({2})")));
        assert!(s.is_component(&s.zero::<Rational>()));
    }

    #[test]
    fn regularity_examples() {
        let s = c3();
        let a = s.algebra().clone();
        let v = s.check_regularity::<Rational>(&[a.set(&[1]).unwrap(), a.set(&[2]).unwrap()], &a.set(&[1, 2]).unwrap()).unwrap();
        assert!(v.passed);
        assert_eq!(v.candidates_checked, 4);
        let x = a.set(&[3]).unwrap();
        assert!(s.check_regularity::<Rational>(&[x.clone()], &x).unwrap().passed);
        assert!(s.check_regularity::<Rational>(&[x.clone()], &a.one()).is_err());

        let fc = Algebra::finite_cofinite();
        let sf = PlaceSpace::new(fc.clone());
        let v = sf.check_regularity::<Rational>(&[fc.fin(&[0]), fc.fin(&[1])], &fc.fin(&[0, 1])).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn parse_signs_and_fractions() {
        let s = c3();
        let f = parse(&s, "-1/2*chi({1}) - chi({2,3})");
        assert_eq!(f.to_string(), "-1/2*chi({1}) - 1*chi({2,3})");
        assert_eq!(parse(&s, &f.to_string()), f);
        assert!(parse(&s, "0").is_zero());
    }

    #[test]
    fn mismatched_algebra_is_rejected() {
        let s = c3();
        let other = PlaceSpace::new(Algebra::powerset(2).unwrap());
        let f: Pf<Algebra, Rational> = other.unit();
        assert!(s.add_paper(&f, &s.unit()).is_err());
        assert!(s.add_refine(&s.unit(), &f).is_err());
        assert!(s.checked_meet(&s.unit(), &f).is_err());
    }

    #[test]
    fn works_over_f64() {
        let s = c3();
        let a = s.algebra().clone();
        let f: Pf<Algebra, f64> = s.canonicalize(vec![(0.5, a.set(&[1, 2]).unwrap()), (0.25, a.set(&[2]).unwrap())]).unwrap();
        assert_eq!(f.to_string(), "0.5*chi({1}) + 0.75*chi({2})");
        assert_eq!(s.add_paper(&f, &f).unwrap(), s.scale(&2.0, &f));
    }
}
