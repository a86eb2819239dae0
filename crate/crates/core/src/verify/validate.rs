//! Re-checks `no_supremum` certificates from their serialized form.
//!
//! Elements are re-parsed and compared using the Boolean algebra layer only;
//! free-product elements are read as plain unions of rectangles and compared
//! pointwise on a grid that covers every membership pattern.

use std::collections::BTreeSet;

use super::certificate::{Certificate, Family, ImprovementStep};
use crate::algebra::expr::{parse_elem_literal, Cursor};
use crate::algebra::{Algebra, BooleanAlgebra, CofSet, Elem};
use crate::error::{Error, Result};

type Rects = Vec<(CofSet, CofSet)>;

fn cof(alg: &Algebra, cur: &mut Cursor<'_>) -> Result<CofSet> {
    match parse_elem_literal(alg, cur)? {
        Some(Elem::Cofinite(c)) => Ok(c),
        Some(Elem::Atoms(_)) => Err(cur.error("expected a finite–cofinite literal")),
        None if cur.eat("1") => Ok(CofSet::cof([])),
        None if cur.eat("0") => Ok(CofSet::fin([])),
        None => Err(cur.error("expected a finite–cofinite literal")),
    }
}

/// Reads `rect(A, B) | rect(C, D) | ...` or `0`.
fn parse_rects(text: &str) -> Result<Rects> {
    let alg = Algebra::finite_cofinite();
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    if cur.eat("0") {
        return if cur.at_end() { Ok(out) } else { Err(cur.error("trailing input")) };
    }
    loop {
        cur.expect("rect")?;
        cur.expect("(")?;
        let a = cof(&alg, &mut cur)?;
        cur.expect(",")?;
        let b = cof(&alg, &mut cur)?;
        cur.expect(")")?;
        out.push((a, b));
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect("|")?;
    }
}

fn contains(u: &Rects, i: u64, j: u64) -> bool {
    u.iter().any(|(a, b)| a.contains(i) && b.contains(j))
}

/// Every membership pattern of a point of ℕ² against the rectangles of `forms`
/// is realized on `0..=bound` in each coordinate.
fn grid_bound(forms: &[&Rects]) -> u64 {
    forms
        .iter()
        .flat_map(|u| u.iter())
        .flat_map(|(a, b)| a.support().iter().chain(b.support().iter()))
        .max()
        .map_or(0, |m| m + 1)
}

fn diagonal_upper_bound(u: &Rects) -> Option<u64> {
    (0..=grid_bound(&[u])).find(|&n| !contains(u, n, n))
}

fn check_diagonal_step(step: &ImprovementStep) -> Result<()> {
    let u = parse_rects(&step.u)?;
    let v = parse_rects(&step.u_prime)?;
    if let Some(n) = diagonal_upper_bound(&u) {
        return Err(Error::Invalid(format!("u misses ({n}, {n})")));
    }
    if let Some(n) = diagonal_upper_bound(&v) {
        return Err(Error::Invalid(format!("u′ misses ({n}, {n})")));
    }
    let bound = grid_bound(&[&u, &v]);
    let mut strict = false;
    for i in 0..=bound {
        for j in 0..=bound {
            match (contains(&u, i, j), contains(&v, i, j)) {
                (false, true) => return Err(Error::Invalid(format!("u′ contains ({i}, {j}) but u does not"))),
                (true, false) => strict = true,
                _ => {}
            }
        }
    }
    if !strict {
        return Err(Error::Invalid("u′ equals u".into()));
    }
    Ok(())
}

fn check_evens_step(step: &ImprovementStep) -> Result<()> {
    let alg = Algebra::finite_cofinite();
    let read = |text: &str| -> Result<Elem> {
        let mut cur = Cursor::new(text);
        let x = cof(&alg, &mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(Elem::Cofinite(x))
    };
    let (u, v) = (read(&step.u)?, read(&step.u_prime)?);
    for x in [&u, &v] {
        let c = x.as_cofinite().expect("parsed");
        let evens_excluded: BTreeSet<_> = c.support().iter().filter(|k| *k % 2 == 0).collect();
        if !c.is_cofinite() || !evens_excluded.is_empty() {
            return Err(Error::Invalid(format!("{x} does not dominate every even singleton")));
        }
    }
    if alg.meet(&u, &v) != v || u == v {
        return Err(Error::Invalid(format!("{v} is not strictly below {u}")));
    }
    Ok(())
}

/// Re-validates a certificate: for `no_supremum`, each step is a strict
/// decrease between two upper bounds and consecutive steps chain.
pub fn validate_certificate(cert: &Certificate) -> Result<()> {
    let Certificate::NoSupremum { family, steps, .. } = cert else {
        return Ok(());
    };
    if steps.is_empty() {
        return Err(Error::Invalid("certificate has no steps".into()));
    }
    for (k, step) in steps.iter().enumerate() {
        let checked = match family {
            Family::EvenSingletons => check_evens_step(step),
            Family::Diagonal => check_diagonal_step(step),
        };
        checked.map_err(|e| Error::Invalid(format!("step {k}: {e}")))?;
        if k > 0 && steps[k - 1].u_prime != step.u {
            return Err(Error::Invalid(format!("step {k} does not start where step {} ended", k - 1)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(u: &str, v: &str) -> ImprovementStep {
        ImprovementStep { u: u.into(), defect: String::new(), u_prime: v.into() }
    }

    fn cert(family: Family, steps: Vec<ImprovementStep>) -> Certificate {
        Certificate::NoSupremum { family, description: String::new(), steps }
    }

    #[test]
    fn evens_steps() {
        assert!(validate_certificate(&cert(Family::EvenSingletons, vec![step("cof{}", "cof{1}"), step("cof{1}", "cof{1,3}")])).is_ok());
        assert!(validate_certificate(&cert(Family::EvenSingletons, vec![step("cof{}", "cof{2}")])).is_err());
        assert!(validate_certificate(&cert(Family::EvenSingletons, vec![step("cof{1}", "cof{1}")])).is_err());
        assert!(validate_certificate(&cert(Family::EvenSingletons, vec![step("cof{}", "cof{1}"), step("cof{}", "cof{3}")])).is_err());
        assert!(validate_certificate(&cert(Family::EvenSingletons, vec![])).is_err());
    }

    #[test]
    fn diagonal_steps() {
        let one = "rect(cof{}, cof{})";
        let holed = "rect(fin{0}, fin{0}) | rect(cof{0}, cof{})";
        // holed misses nothing on the diagonal but drops (0, 1), ..., so it is strictly smaller.
        assert!(validate_certificate(&cert(Family::Diagonal, vec![step(one, holed)])).is_ok());
        assert!(validate_certificate(&cert(Family::Diagonal, vec![step(one, "rect(cof{0}, cof{0})")])).is_err());
        assert!(validate_certificate(&cert(Family::Diagonal, vec![step(holed, one)])).is_err());
        assert!(parse_rects("rect(fin{0}, {1})").is_err());
        assert_eq!(parse_rects("0").unwrap(), vec![]);
    }
}
