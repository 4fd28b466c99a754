use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::Proposition;
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypersequentError {
    #[error("channel `{0}` occurs in more than one sequent")]
    NameClash(Name),
}

/// A sequent `x1:A1, ..., xn:An`; names are distinct by construction.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Sequent {
    entries: BTreeMap<Name, Proposition>,
}

impl Sequent {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces any previous entry for `name`.
    pub fn insert(&mut self, name: Name, prop: Proposition) -> Option<Proposition> {
        self.entries.insert(name, prop)
    }

    pub fn remove(&mut self, name: &Name) -> Option<Proposition> {
        self.entries.remove(name)
    }

    pub fn get(&self, name: &Name) -> Option<&Proposition> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Proposition)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.keys()
    }

    /// Disjoint union; on a shared name the error names the first clash.
    pub fn merge(mut self, other: Sequent) -> Result<Sequent, HypersequentError> {
        for (name, prop) in other.entries {
            if self.entries.contains_key(&name) {
                return Err(HypersequentError::NameClash(name));
            }
            self.entries.insert(name, prop);
        }
        Ok(self)
    }

    /// Map equality with propositions compared up to α.
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(other.entries.iter()).all(|((n1, a), (n2, b))| n1 == n2 && a.alpha_eq(b))
    }

    fn min_name(&self) -> Option<&Name> {
        self.entries.keys().next()
    }
}

impl FromIterator<(Name, Proposition)> for Sequent {
    fn from_iter<I: IntoIterator<Item = (Name, Proposition)>>(iter: I) -> Self {
        Sequent { entries: iter.into_iter().collect() }
    }
}

/// `true` iff every entry is a client type `?A`.
pub fn is_client_context(s: &Sequent) -> bool {
    s.entries.values().all(Proposition::is_why_not)
}

/// A multiset of sequents with pairwise disjoint names.
///
/// Empty sequents are dropped and the remaining ones are kept sorted by
/// their least name; since names are disjoint this order is canonical.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Hypersequent {
    sequents: Vec<Sequent>,
}

impl Hypersequent {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(s: Sequent) -> Self {
        let mut h = Hypersequent::empty();
        h.push_unchecked(s);
        h
    }

    /// Builds a hypersequent, checking name disjointness.
    pub fn from_sequents(sequents: impl IntoIterator<Item = Sequent>) -> Result<Self, HypersequentError> {
        let mut h = Hypersequent::empty();
        for s in sequents {
            h = hs_merge(h, Hypersequent::single(s))?;
        }
        Ok(h)
    }

    fn push_unchecked(&mut self, s: Sequent) {
        if s.is_empty() {
            return;
        }
        let key = s.min_name().cloned();
        let at = self.sequents.partition_point(|t| t.min_name().cloned() < key);
        self.sequents.insert(at, s);
    }

    pub fn sequents(&self) -> &[Sequent] {
        &self.sequents
    }

    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.sequents.iter().flat_map(|s| s.names().cloned()).collect()
    }

    /// Index of the sequent that types `name`.
    pub fn position(&self, name: &Name) -> Option<usize> {
        self.sequents.iter().position(|s| s.contains(name))
    }

    pub fn lookup(&self, name: &Name) -> Option<&Proposition> {
        self.sequents.iter().find_map(|s| s.get(name))
    }

    /// Removes and returns the sequent at `index`.
    pub fn take(&mut self, index: usize) -> Sequent {
        self.sequents.remove(index)
    }

    /// Adds a sequent; fails if it shares a name with an existing one.
    pub fn add(&mut self, s: Sequent) -> Result<(), HypersequentError> {
        if let Some(clash) = s.names().find(|n| self.position(n).is_some()) {
            return Err(HypersequentError::NameClash(clash.clone()));
        }
        self.push_unchecked(s);
        Ok(())
    }

    pub fn into_sequents(self) -> Vec<Sequent> {
        self.sequents
    }
}

/// Multiset union of two hypersequents with disjoint names (rule Mix).
pub fn hs_merge(g: Hypersequent, h: Hypersequent) -> Result<Hypersequent, HypersequentError> {
    let mut out = g;
    for s in h.sequents {
        out.add(s)?;
    }
    Ok(out)
}

/// Equality as multisets of sequents, with propositions up to α.
pub fn hs_equal(g: &Hypersequent, h: &Hypersequent) -> bool {
    g.sequents.len() == h.sequents.len() && g.sequents.iter().zip(h.sequents.iter()).all(|(a, b)| a.alpha_eq(b))
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, prop)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name} : {prop}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sequents.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, s) in self.sequents.iter().enumerate() {
            if i > 0 {
                f.write_str(" || ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
