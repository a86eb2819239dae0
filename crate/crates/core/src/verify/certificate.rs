//! Completeness certificates: exhaustive suprema for small finite algebras and
//! `no_supremum` chains for the two built-in witness families.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{Algebra, BooleanAlgebra, CofSet, Elem};
use crate::error::{Error, Result};
use crate::free_product::{BackendForm, BackendProduct};

/// Algebras with more than this many atoms are not enumerated subset by subset.
pub const MAX_EXHAUSTIVE_ATOMS: usize = 4;

/// One strict improvement `u′ < u` of an upper bound of a witness family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImprovementStep {
    pub u: String,
    pub defect: String,
    pub u_prime: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `{fin{2k}}` in the finite–cofinite algebra.
    EvenSingletons,
    /// `{rect(fin{n}, fin{n})}` in the free product of two finite–cofinite algebras.
    Diagonal,
}

impl Family {
    pub fn description(&self) -> &'static str {
        match self {
            Family::EvenSingletons => "singletons fin{2k} of even numbers in FC",
            Family::Diagonal => "diagonal points rect(fin{n}, fin{n}) in FC⊗FC",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    ExhaustiveComplete {
        algebra: String,
        elements: usize,
        subsets_checked: u64,
    },
    NoSupremum {
        family: Family,
        description: String,
        steps: Vec<ImprovementStep>,
    },
}

/// Result of one call to an upper-bound improver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Improvement<E> {
    Step { u: E, defect: String, u_prime: E },
    NotUpperBound { missed: String },
}

/// Verifies that every nonempty subset of a finite algebra with at most
/// [`MAX_EXHAUSTIVE_ATOMS`] atoms has a least upper bound, by comparing the
/// join of each subset against every element.
pub fn check_finite_completeness<A: BooleanAlgebra>(alg: &A) -> Result<Certificate> {
    let elems = match alg.finite_atoms() {
        Some(atoms) if atoms.len() <= MAX_EXHAUSTIVE_ATOMS => alg.enumerate(1 << (1 << MAX_EXHAUSTIVE_ATOMS)).expect("small"),
        Some(_) => {
            return Err(Error::CapExceeded(format!("exhaustive completeness needs at most {MAX_EXHAUSTIVE_ATOMS} atoms")))
        }
        None if alg.is_trivial() => vec![alg.zero()],
        None => return Err(Error::Unsupported(format!("{} is not finite", alg.label()))),
    };
    let k = elems.len();
    // below[i] has bit j set when elems[i] ≤ elems[j].
    let below: Vec<u64> = elems
        .iter()
        .map(|x| elems.iter().enumerate().filter(|(_, y)| alg.leq(x, y)).fold(0u64, |m, (j, _)| m | 1 << j))
        .collect();
    let join_table: Vec<Vec<usize>> = elems
        .iter()
        .map(|x| {
            elems
                .iter()
                .map(|y| {
                    let j = alg.join(x, y);
                    elems.iter().position(|z| *z == j).expect("closed under joins")
                })
                .collect()
        })
        .collect();
    let mut checked = 0u64;
    for mask in 1u64..1 << k {
        let members: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let uppers = members.iter().fold(u64::MAX >> (64 - k), |acc, &i| acc & below[i]);
        // A least element among the upper bounds must exist and equal the join.
        let least: Vec<usize> = (0..k)
            .filter(|&s| uppers >> s & 1 == 1 && below[s] & uppers == uppers)
            .collect();
        let join = members[1..].iter().fold(members[0], |acc, &i| join_table[acc][i]);
        if least.len() != 1 || least[0] != join {
            return Err(Error::Invalid(format!("subset {mask:#b} of {} has no supremum", alg.label())));
        }
        checked += 1;
    }
    Ok(Certificate::ExhaustiveComplete { algebra: alg.label(), elements: k, subsets_checked: checked })
}

fn smallest_missing(set: &BTreeSet<u64>, start: u64) -> u64 {
    (start..).step_by(2).find(|k| !set.contains(k)).expect("finite set")
}

/// One step against the even-singleton family in the finite–cofinite algebra.
pub fn improve_upper_bound_evens(alg: &Algebra, u: &Elem) -> Result<Improvement<Elem>> {
    if !alg.is_cofinite_backend() {
        return Err(Error::Unsupported("the even-singleton family lives in the finite–cofinite algebra".into()));
    }
    alg.validate(u)?;
    let c = u.as_cofinite().expect("validated");
    if !c.is_cofinite() {
        let missed = smallest_missing(c.support(), 0);
        return Ok(Improvement::NotUpperBound { missed: format!("fin{{{missed}}}") });
    }
    if let Some(e) = c.support().iter().find(|k| *k % 2 == 0) {
        return Ok(Improvement::NotUpperBound { missed: format!("fin{{{e}}}") });
    }
    let k = smallest_missing(c.support(), 1);
    let u_prime = alg.meet(u, &alg.complement(&alg.fin(&[k])));
    Ok(Improvement::Step { u: u.clone(), defect: k.to_string(), u_prime })
}

fn cof_cell(cells: &[Elem]) -> Option<(usize, &CofSet)> {
    cells
        .iter()
        .enumerate()
        .find_map(|(i, c)| c.as_cofinite().filter(|c| c.is_cofinite()).map(|c| (i, c)))
}

fn cell_of(cells: &[Elem], n: u64) -> usize {
    cells.iter().position(|c| c.as_cofinite().is_some_and(|c| c.contains(n))).expect("cells partition")
}

/// One step against the diagonal family in `FC ⊗ FC`.
pub fn improve_upper_bound_diagonal(fp: &BackendProduct, u: &BackendForm) -> Result<Improvement<BackendForm>> {
    if !fp.left().is_cofinite_backend() || !fp.right().is_cofinite_backend() {
        return Err(Error::Unsupported("the diagonal family lives in FC⊗FC".into()));
    }
    fp.validate(u)?;
    let (lc, rc) = (u.left_cells(), u.right_cells());
    let (Some((i, lcof)), Some((j, rcof))) = (cof_cell(lc), cof_cell(rc)) else {
        // Only the zero form has no cells; it misses (0,0).
        return Ok(Improvement::NotUpperBound { missed: "(0, 0)".into() });
    };
    let exceptional: BTreeSet<u64> = lcof.support().union(rcof.support()).copied().collect();
    let generic = (0..).find(|n| !exceptional.contains(n)).expect("finite");
    let mut missed: Vec<u64> = exceptional
        .iter()
        .copied()
        .filter(|&n| !u.is_active(cell_of(lc, n), cell_of(rc, n)))
        .collect();
    if !u.is_active(i, j) {
        missed.push(generic);
    }
    if let Some(n) = missed.into_iter().min() {
        return Ok(Improvement::NotUpperBound { missed: format!("({n}, {n})") });
    }
    let m = lcof.min_member().expect("cofinite");
    let m2 = (0..).find(|k| *k != m && rcof.contains(*k)).expect("cofinite");
    let hole = fp.rect(&fp.left().fin(&[m]), &fp.right().fin(&[m2]));
    let u_prime = fp.meet(u, &fp.complement(&hole));
    Ok(Improvement::Step { u: u.clone(), defect: format!("({m}, {m2})"), u_prime })
}

fn chain<E: std::fmt::Display>(
    start: E,
    steps: usize,
    mut improve: impl FnMut(&E) -> Result<Improvement<E>>,
) -> Result<std::result::Result<Vec<ImprovementStep>, String>> {
    let mut u = start;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        match improve(&u)? {
            Improvement::Step { u: old, defect, u_prime } => {
                out.push(ImprovementStep { u: old.to_string(), defect, u_prime: u_prime.to_string() });
                u = u_prime;
            }
            Improvement::NotUpperBound { missed } => return Ok(Err(format!("{u} is not an upper bound: misses {missed}"))),
        }
    }
    Ok(Ok(out))
}

/// A `no_supremum` certificate of `steps` improvements from `start`, or the
/// reason `start` is not an upper bound.
pub fn certify_evens(alg: &Algebra, start: &Elem, steps: usize) -> Result<std::result::Result<Certificate, String>> {
    Ok(chain(start.clone(), steps, |u| improve_upper_bound_evens(alg, u))?.map(|steps| Certificate::NoSupremum {
        family: Family::EvenSingletons,
        description: Family::EvenSingletons.description().into(),
        steps,
    }))
}

pub fn certify_diagonal(
    fp: &BackendProduct,
    start: &BackendForm,
    steps: usize,
) -> Result<std::result::Result<Certificate, String>> {
    Ok(chain(start.clone(), steps, |u| improve_upper_bound_diagonal(fp, u))?.map(|steps| Certificate::NoSupremum {
        family: Family::Diagonal,
        description: Family::Diagonal.description().into(),
        steps,
    }))
}
