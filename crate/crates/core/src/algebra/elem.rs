use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// Maximum atom count of a powerset algebra.
pub const MAX_ATOMS: usize = 16;

/// A subset of the atoms `1..=len` of a finite powerset algebra.
///
/// Ordered by atom length, then lexicographically on the ascending atom
/// list, so disjoint nonzero sets compare by their smallest atom.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomSet {
    len: u8,
    bits: u32,
}

impl AtomSet {
    pub fn empty(len: usize) -> Self {
        assert!(len <= MAX_ATOMS, "atom count {len} exceeds {MAX_ATOMS}");
        AtomSet { len: len as u8, bits: 0 }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        s.bits = s.mask();
        s
    }

    pub fn from_bits(len: usize, bits: u32) -> Self {
        let mut s = Self::empty(len);
        s.bits = bits & s.mask();
        s
    }

    /// Builds a set from 1-based atom indices; `None` if an index is out of range.
    pub fn from_atoms(len: usize, atoms: impl IntoIterator<Item = usize>) -> Option<Self> {
        let mut s = Self::empty(len);
        for a in atoms {
            if a == 0 || a > len {
                return None;
            }
            s.bits |= 1 << (a - 1);
        }
        Some(s)
    }

    fn mask(&self) -> u32 {
        if self.len == 0 {
            0
        } else {
            u32::MAX >> (32 - self.len as u32)
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, atom: usize) -> bool {
        atom >= 1 && atom <= self.len() && self.bits & (1 << (atom - 1)) != 0
    }

    /// 1-based atom indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len()).filter(move |&a| self.contains(a))
    }

    pub fn meet(&self, other: &Self) -> Self {
        AtomSet { len: self.len, bits: self.bits & other.bits }
    }

    pub fn join(&self, other: &Self) -> Self {
        AtomSet { len: self.len, bits: self.bits | other.bits }
    }

    pub fn complement(&self) -> Self {
        AtomSet { len: self.len, bits: !self.bits & self.mask() }
    }
}

impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite or cofinite subset of the natural numbers.
///
/// `support` is the set itself when `cofinite` is false, and its complement
/// otherwise. The derived order puts finite sets before cofinite ones and then
/// compares supports lexicographically (smallest member first).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CofSet {
    cofinite: bool,
    support: BTreeSet<u64>,
}

impl CofSet {
    pub fn fin(members: impl IntoIterator<Item = u64>) -> Self {
        CofSet { cofinite: false, support: members.into_iter().collect() }
    }

    pub fn cof(excluded: impl IntoIterator<Item = u64>) -> Self {
        CofSet { cofinite: true, support: excluded.into_iter().collect() }
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    pub fn contains(&self, n: u64) -> bool {
        self.support.contains(&n) != self.cofinite
    }

    /// Smallest member; every nonzero set has one.
    pub fn min_member(&self) -> Option<u64> {
        if self.cofinite {
            (0..).find(|n| !self.support.contains(n))
        } else {
            self.support.iter().next().copied()
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        match (self.cofinite, other.cofinite) {
            (false, false) => Self::fin(self.support.intersection(&other.support).copied()),
            (false, true) => Self::fin(self.support.difference(&other.support).copied()),
            (true, false) => Self::fin(other.support.difference(&self.support).copied()),
            (true, true) => Self::cof(self.support.union(&other.support).copied()),
        }
    }

    pub fn complement(&self) -> Self {
        CofSet { cofinite: !self.cofinite, support: self.support.clone() }
    }

    pub fn join(&self, other: &Self) -> Self {
        self.complement().meet(&other.complement()).complement()
    }
}

/// An element of a backend Boolean algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atoms(AtomSet),
    Cofinite(CofSet),
}

impl Elem {
    pub fn as_atoms(&self) -> Option<&AtomSet> {
        match self {
            Elem::Atoms(s) => Some(s),
            Elem::Cofinite(_) => None,
        }
    }

    pub fn as_cofinite(&self) -> Option<&CofSet> {
        match self {
            Elem::Cofinite(s) => Some(s),
            Elem::Atoms(_) => None,
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, self.iter())
    }
}

impl fmt::Display for CofSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.cofinite { "cof" } else { "fin" })?;
        write_list(f, self.support.iter())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atoms(s) => s.fmt(f),
            Elem::Cofinite(s) => s.fmt(f),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for CofSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}


impl serde::Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
