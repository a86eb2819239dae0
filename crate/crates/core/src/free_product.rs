//! The free product `A ⊗ B` of two Boolean algebras in rectangle normal form.
//!
//! Every element of the free product is a finite disjoint union of rectangles
//! `ε_A(a) ∧ ε_B(b)`. A [`RectForm`] stores a partition of `1_A` into left
//! cells, a partition of `1_B` into right cells, and the set of active cell
//! pairs. The canonical form is the coarsest such grid: no two rows and no two
//! columns of the activity matrix coincide. Coarsest grids are intrinsic to the
//! element, so structural equality is equality in the free product.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::ser::{Serialize, Serializer};

use crate::algebra::expr::{self, Cursor, Expr};
use crate::algebra::hom::{check_homomorphism, HomSpec, HomVerdict};
use crate::algebra::{Algebra, BooleanAlgebra, Elem, Sample};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RectForm<L, R> {
    left_cells: Vec<L>,
    right_cells: Vec<R>,
    /// Row-major activity matrix.
    active: Vec<bool>,
}

impl<L, R> RectForm<L, R> {
    pub fn left_cells(&self) -> &[L] {
        &self.left_cells
    }

    pub fn right_cells(&self) -> &[R] {
        &self.right_cells
    }

    pub fn is_active(&self, i: usize, j: usize) -> bool {
        self.active[i * self.right_cells.len() + j]
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let m = self.right_cells.len().max(1);
        self.active.chunks(m).map(|r| r.to_vec()).collect()
    }

    /// Active `(left, right)` cell index pairs in row-major order.
    pub fn active_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.right_cells.len();
        self.active.iter().enumerate().filter(|(_, &a)| a).map(move |(k, _)| (k / m, k % m))
    }
}

/// Renders as a union of cell rectangles, `0` when empty; reparses in the
/// free-product expression grammar.
impl<L: fmt::Display, R: fmt::Display> fmt::Display for RectForm<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j) in self.active_pairs() {
            if !first {
                f.write_str(" | ")?;
            }
            first = false;
            write!(f, "rect({}, {})", self.left_cells[i], self.right_cells[j])?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<L: fmt::Display, R: fmt::Display> fmt::Debug for RectForm<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<L: fmt::Display, R: fmt::Display> Serialize for RectForm<L, R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `ε_A(left) ∧ ε_B(right)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle<L, R> {
    pub left: L,
    pub right: R,
}

impl<L, R> Rectangle<L, R> {
    pub fn new(left: L, right: R) -> Self {
        Rectangle { left, right }
    }
}

impl<L: fmt::Display, R: fmt::Display> fmt::Display for Rectangle<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rect({}, {})", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProduct<A, B> {
    left: A,
    right: B,
}

/// The free product is the one-element algebra iff a factor is.
pub fn fp_is_trivial<A: BooleanAlgebra, B: BooleanAlgebra>(a: &A, b: &B) -> bool {
    a.is_trivial() || b.is_trivial()
}

type Form<A, B> = RectForm<<A as BooleanAlgebra>::Elem, <B as BooleanAlgebra>::Elem>;

impl<A: BooleanAlgebra, B: BooleanAlgebra> FreeProduct<A, B> {
    pub fn new(left: A, right: B) -> Self {
        FreeProduct { left, right }
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }

    fn trivial_form() -> Form<A, B> {
        RectForm { left_cells: Vec::new(), right_cells: Vec::new(), active: Vec::new() }
    }

    /// Merges identical rows, then identical columns, then sorts both axes.
    fn coarsen(&self, left_cells: Vec<A::Elem>, right_cells: Vec<B::Elem>, active: Vec<bool>) -> Form<A, B> {
        if self.is_trivial() {
            return Self::trivial_form();
        }
        let m = right_cells.len();
        let mut rows: BTreeMap<Vec<bool>, A::Elem> = BTreeMap::new();
        for (i, cell) in left_cells.into_iter().enumerate() {
            let pattern = active[i * m..(i + 1) * m].to_vec();
            match rows.get_mut(&pattern) {
                Some(acc) => *acc = self.left.join(acc, &cell),
                None => {
                    rows.insert(pattern, cell);
                }
            }
        }
        let rows: Vec<(A::Elem, Vec<bool>)> = rows.into_iter().map(|(p, c)| (c, p)).collect();
        let mut cols: BTreeMap<Vec<bool>, (B::Elem, usize)> = BTreeMap::new();
        for (j, cell) in right_cells.into_iter().enumerate() {
            let pattern: Vec<bool> = rows.iter().map(|(_, p)| p[j]).collect();
            match cols.get_mut(&pattern) {
                Some((acc, _)) => *acc = self.right.join(acc, &cell),
                None => {
                    cols.insert(pattern, (cell, j));
                }
            }
        }
        let mut rows = rows;
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let mut cols: Vec<(B::Elem, usize)> = cols.into_values().collect();
        cols.sort_by(|a, b| a.0.cmp(&b.0));
        let active = rows.iter().flat_map(|(_, p)| cols.iter().map(move |(_, j)| p[*j])).collect();
        RectForm {
            left_cells: rows.into_iter().map(|(c, _)| c).collect(),
            right_cells: cols.into_iter().map(|(c, _)| c).collect(),
            active,
        }
    }

    fn normalize_unchecked(&self, rects: &[Rectangle<A::Elem, B::Elem>]) -> Form<A, B> {
        if self.is_trivial() {
            return Self::trivial_form();
        }
        let lefts: Vec<A::Elem> = rects.iter().map(|r| r.left.clone()).collect();
        let rights: Vec<B::Elem> = rects.iter().map(|r| r.right.clone()).collect();
        let left_cells = self.left.atomize(&lefts);
        let right_cells = self.right.atomize(&rights);
        let mut active = Vec::with_capacity(left_cells.len() * right_cells.len());
        for lc in &left_cells {
            for rc in &right_cells {
                active.push(
                    rects.iter().any(|r| self.left.leq(lc, &r.left) && self.right.leq(rc, &r.right)),
                );
            }
        }
        self.coarsen(left_cells, right_cells, active)
    }

    /// Canonical form of the union of `rects`.
    pub fn normalize(&self, rects: &[Rectangle<A::Elem, B::Elem>]) -> Result<Form<A, B>> {
        for r in rects {
            self.left.validate(&r.left)?;
            self.right.validate(&r.right)?;
        }
        Ok(self.normalize_unchecked(rects))
    }

    /// The rectangle `ε_A(a) ∧ ε_B(b)`; arguments are assumed valid.
    pub fn rect(&self, a: &A::Elem, b: &B::Elem) -> Form<A, B> {
        self.normalize_unchecked(&[Rectangle::new(a.clone(), b.clone())])
    }

    /// The canonical map `ε_A`.
    pub fn embed_left(&self, a: &A::Elem) -> Result<Form<A, B>> {
        self.left.validate(a)?;
        Ok(self.rect(a, &self.right.one()))
    }

    /// The canonical map `ε_B`.
    pub fn embed_right(&self, b: &B::Elem) -> Result<Form<A, B>> {
        self.right.validate(b)?;
        Ok(self.rect(&self.left.one(), b))
    }

    /// Re-expresses `x` and `y` over their common refinement grid.
    fn refine(&self, x: &Form<A, B>, y: &Form<A, B>) -> (Vec<A::Elem>, Vec<B::Elem>, Vec<bool>, Vec<bool>) {
        let mut lgens = x.left_cells.clone();
        lgens.extend(y.left_cells.iter().cloned());
        let mut rgens = x.right_cells.clone();
        rgens.extend(y.right_cells.iter().cloned());
        let lc = self.left.atomize(&lgens);
        let rc = self.right.atomize(&rgens);
        let owner_l = |cells: &[A::Elem], c: &A::Elem| {
            cells.iter().position(|d| !self.left.disjoint(c, d)).expect("cells partition unity")
        };
        let owner_r = |cells: &[B::Elem], c: &B::Elem| {
            cells.iter().position(|d| !self.right.disjoint(c, d)).expect("cells partition unity")
        };
        let xl: Vec<usize> = lc.iter().map(|c| owner_l(&x.left_cells, c)).collect();
        let yl: Vec<usize> = lc.iter().map(|c| owner_l(&y.left_cells, c)).collect();
        let xr: Vec<usize> = rc.iter().map(|c| owner_r(&x.right_cells, c)).collect();
        let yr: Vec<usize> = rc.iter().map(|c| owner_r(&y.right_cells, c)).collect();
        let mut xm = Vec::with_capacity(lc.len() * rc.len());
        let mut ym = Vec::with_capacity(lc.len() * rc.len());
        for i in 0..lc.len() {
            for j in 0..rc.len() {
                xm.push(x.is_active(xl[i], xr[j]));
                ym.push(y.is_active(yl[i], yr[j]));
            }
        }
        (lc, rc, xm, ym)
    }

    fn combine(&self, x: &Form<A, B>, y: &Form<A, B>, op: impl Fn(bool, bool) -> bool) -> Form<A, B> {
        if self.is_trivial() {
            return Self::trivial_form();
        }
        let (lc, rc, xm, ym) = self.refine(x, y);
        let active = xm.iter().zip(&ym).map(|(&a, &b)| op(a, b)).collect();
        self.coarsen(lc, rc, active)
    }

    /// Pairwise disjoint nonzero rectangles whose join is `x`: one per row,
    /// with rows of identical pattern merged. Empty iff `x = 0`.
    pub fn decompose_disjoint(&self, x: &Form<A, B>) -> Vec<Rectangle<A::Elem, B::Elem>> {
        let m = x.right_cells.len();
        let mut out: Vec<(Vec<bool>, Rectangle<A::Elem, B::Elem>)> = Vec::new();
        for (i, lc) in x.left_cells.iter().enumerate() {
            let pattern = x.active[i * m..(i + 1) * m].to_vec();
            if !pattern.iter().any(|&a| a) {
                continue;
            }
            if let Some((_, r)) = out.iter_mut().find(|(p, _)| *p == pattern) {
                r.left = self.left.join(&r.left, lc);
                continue;
            }
            let right = self.right.join_all(
                x.right_cells.iter().zip(&pattern).filter(|(_, &a)| a).map(|(c, _)| c),
            );
            out.push((pattern, Rectangle::new(lc.clone(), right)));
        }
        out.into_iter().map(|(_, r)| r).collect()
    }

    /// The homomorphism induced by `phi_a` and `phi_b`: the join over active
    /// cells of `phi_a(left) ∧ phi_b(right)`.
    pub fn induced<D, FA, FB>(&self, target: &D, phi_a: FA, phi_b: FB, x: &Form<A, B>) -> Result<D::Elem>
    where
        D: BooleanAlgebra,
        FA: Fn(&A::Elem) -> Result<D::Elem>,
        FB: Fn(&B::Elem) -> Result<D::Elem>,
    {
        let mut acc = target.zero();
        for (i, j) in x.active_pairs() {
            let piece = target.meet(&phi_a(&x.left_cells[i])?, &phi_b(&x.right_cells[j])?);
            acc = target.join(&acc, &piece);
        }
        Ok(acc)
    }
}

impl<A: BooleanAlgebra, B: BooleanAlgebra> BooleanAlgebra for FreeProduct<A, B> {
    type Elem = Form<A, B>;

    fn zero(&self) -> Self::Elem {
        if self.is_trivial() {
            return Self::trivial_form();
        }
        RectForm { left_cells: vec![self.left.one()], right_cells: vec![self.right.one()], active: vec![false] }
    }

    fn one(&self) -> Self::Elem {
        if self.is_trivial() {
            return Self::trivial_form();
        }
        RectForm { left_cells: vec![self.left.one()], right_cells: vec![self.right.one()], active: vec![true] }
    }

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.combine(x, y, |a, b| a && b)
    }

    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.combine(x, y, |a, b| a || b)
    }

    fn disjoint_sum(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.combine(x, y, |a, b| a != b)
    }

    fn rel_complement_1(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.combine(x, y, |a, b| a && !b)
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        !x.active.contains(&true)
    }

    /// Pairwise comparison of active cells, without building the meet.
    fn disjoint(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x.active_pairs().all(|(i, j)| {
            y.active_pairs().all(|(k, l)| {
                self.left.disjoint(&x.left_cells[i], &y.left_cells[k])
                    || self.right.disjoint(&x.right_cells[j], &y.right_cells[l])
            })
        })
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.disjoint(x, &self.complement(y))
    }

    fn complement(&self, x: &Self::Elem) -> Self::Elem {
        RectForm {
            left_cells: x.left_cells.clone(),
            right_cells: x.right_cells.clone(),
            active: x.active.iter().map(|a| !a).collect(),
        }
    }

    fn validate(&self, x: &Self::Elem) -> Result<()> {
        let bad = |why: &str| Error::AlgebraMismatch { algebra: self.label(), elem: format!("{why}: {x}") };
        if self.is_trivial() {
            return if x.left_cells.is_empty() && x.right_cells.is_empty() && x.active.is_empty() {
                Ok(())
            } else {
                Err(bad("the free product is trivial"))
            };
        }
        for c in &x.left_cells {
            self.left.validate(c)?;
        }
        for c in &x.right_cells {
            self.right.validate(c)?;
        }
        if x.active.len() != x.left_cells.len() * x.right_cells.len() {
            return Err(bad("matrix shape"));
        }
        fn is_partition<T: BooleanAlgebra>(alg: &T, cells: &[T::Elem]) -> bool {
            !cells.is_empty()
                && cells.iter().all(|c| !alg.is_zero(c))
                && cells.iter().enumerate().all(|(i, c)| cells[i + 1..].iter().all(|d| alg.disjoint(c, d)))
                && alg.join_all(cells) == alg.one()
        }
        if !is_partition(&self.left, &x.left_cells) || !is_partition(&self.right, &x.right_cells) {
            return Err(bad("cells do not partition unity"));
        }
        let canon = self.coarsen(x.left_cells.clone(), x.right_cells.clone(), x.active.clone());
        if canon != *x {
            return Err(bad("not in canonical form"));
        }
        Ok(())
    }

    fn label(&self) -> String {
        format!("{}⊗{}", self.left.label(), self.right.label())
    }

    fn finite_atoms(&self) -> Option<Vec<Self::Elem>> {
        let la = self.left.finite_atoms()?;
        let ra = self.right.finite_atoms()?;
        Some(la.iter().flat_map(|a| ra.iter().map(move |b| (a, b))).map(|(a, b)| self.rect(a, b)).collect())
    }

    fn is_trivial(&self) -> bool {
        fp_is_trivial(&self.left, &self.right)
    }
}

impl<A: Sample, B: Sample> Sample for FreeProduct<A, B> {
    fn random_elem<Rg: Rng + ?Sized>(&self, rng: &mut Rg) -> Self::Elem {
        let k = rng.gen_range(0..=3);
        let rects: Vec<_> = (0..k)
            .map(|_| Rectangle::new(self.left.random_elem(rng), self.right.random_elem(rng)))
            .collect();
        let x = self.normalize_unchecked(&rects);
        if rng.gen_bool(0.25) {
            self.complement(&x)
        } else {
            x
        }
    }
}

/// Free product of two backend algebras.
pub type BackendProduct = FreeProduct<Algebra, Algebra>;
/// Canonical element of a [`BackendProduct`].
pub type BackendForm = RectForm<Elem, Elem>;

/// Literal parser for `rect(X, Y)` with `X`, `Y` backend element expressions.
pub fn parse_rect_literal(fp: &BackendProduct, cur: &mut Cursor<'_>) -> Result<Option<BackendForm>> {
    if !cur.eat("rect(") {
        return Ok(None);
    }
    let left = expr::parse_expr_at(cur, &mut |c| expr::parse_elem_literal(fp.left(), c))?;
    cur.expect(",")?;
    let right = expr::parse_expr_at(cur, &mut |c| expr::parse_elem_literal(fp.right(), c))?;
    cur.expect(")")?;
    let a = expr::evaluate(fp.left(), &left)?;
    let b = expr::evaluate(fp.right(), &right)?;
    Ok(Some(fp.rect(&a, &b)))
}

pub fn parse_fp_expr(fp: &BackendProduct, text: &str) -> Result<Expr<BackendForm>> {
    expr::parse_expr(text, &mut |cur| parse_rect_literal(fp, cur))
}

/// Parses and evaluates a free-product expression over `rect(..)` literals.
pub fn fp_eval_str(fp: &BackendProduct, text: &str) -> Result<BackendForm> {
    expr::evaluate(fp, &parse_fp_expr(fp, text)?)
}

/// Factor homomorphisms with at most this many source atoms are checked on all pairs.
const INDUCED_EXHAUSTIVE_ATOMS: usize = 6;

/// The homomorphism `A ⊗ B → D` induced by a pair of verified homomorphisms.
#[derive(Clone, Debug)]
pub struct InducedHom {
    phi_a: HomSpec,
    phi_b: HomSpec,
}

impl InducedHom {
    /// Verifies both maps (exhaustively for small powerset sources, otherwise
    /// on `trials` sampled pairs) and that they share a target.
    pub fn new<R: Rng + ?Sized>(
        fp: &BackendProduct,
        phi_a: HomSpec,
        phi_b: HomSpec,
        trials: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if phi_a.source() != fp.left() || phi_b.source() != fp.right() {
            return Err(Error::Invalid("homomorphism sources must be the free product factors".into()));
        }
        if phi_a.target() != phi_b.target() {
            return Err(Error::Invalid("homomorphisms must share a target".into()));
        }
        for h in [&phi_a, &phi_b] {
            let exhaustive = h.source().atom_count().is_some_and(|n| n <= INDUCED_EXHAUSTIVE_ATOMS);
            let verdict = check_homomorphism(h, exhaustive, trials, rng)?;
            if let HomVerdict::Fail(c) = verdict {
                return Err(Error::NotHomomorphism(c.to_string()));
            }
        }
        Ok(InducedHom { phi_a, phi_b })
    }

    pub fn target(&self) -> &Algebra {
        self.phi_a.target()
    }

    pub fn apply(&self, fp: &BackendProduct, x: &BackendForm) -> Result<Elem> {
        fp.validate(x)?;
        fp.induced(self.phi_a.target(), |a| self.phi_a.apply(a), |b| self.phi_b.apply(b), x)
    }
}
