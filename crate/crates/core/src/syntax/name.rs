use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A channel name (or, in the type namespace, a type variable).
///
/// Names are an identifier together with a count of trailing primes, so the
/// homomorphic copy `z` ↦ `z'` used when a server is duplicated is always
/// available and fresh names can be produced by adding primes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    base: Arc<str>,
    primes: u32,
}

/// Type variables live in their own namespace but share the representation.
pub type TypeVar = Name;

impl Name {
    /// Panics if `base` is empty.
    pub fn new(base: impl AsRef<str>) -> Self {
        Self::with_primes(base, 0)
    }

    pub fn with_primes(base: impl AsRef<str>, primes: u32) -> Self {
        let base = base.as_ref();
        assert!(!base.is_empty(), "name base must be non-empty");
        Name { base: Arc::from(base), primes }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn primes(&self) -> u32 {
        self.primes
    }

    /// The name with one more prime.
    pub fn primed(&self) -> Self {
        Name { base: self.base.clone(), primes: self.primes + 1 }
    }

    /// `self` if it does not occur in `avoid`, otherwise the variant with
    /// the fewest extra primes that does not.
    pub fn freshen(&self, avoid: &BTreeSet<Name>) -> Self {
        if avoid.contains(self) {
            self.fresh_prime(avoid)
        } else {
            self.clone()
        }
    }

    /// The variant with the fewest extra primes (at least one) outside `avoid`.
    pub fn fresh_prime(&self, avoid: &BTreeSet<Name>) -> Self {
        let mut candidate = self.primed();
        while avoid.contains(&candidate) {
            candidate = candidate.primed();
        }
        candidate
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        for _ in 0..self.primes {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Name {
    /// Accepts trailing `'` characters as primes.
    fn from(s: &str) -> Self {
        let trimmed = s.trim_end_matches('\'');
        Name::with_primes(trimmed, (s.len() - trimmed.len()) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_needs_base_and_primes() {
        assert_eq!(Name::from("z'"), Name::with_primes("z", 1));
        assert_ne!(Name::from("z'"), Name::from("z"));
        assert_eq!(Name::from("z").primed().to_string(), "z'");
    }

    #[test]
    fn fresh_prime_skips_taken_names() {
        let avoid: BTreeSet<Name> = ["x", "x'", "x''"].into_iter().map(Name::from).collect();
        assert_eq!(Name::from("x").fresh_prime(&avoid), Name::from("x'''"));
        assert_eq!(Name::from("y").freshen(&avoid), Name::from("y"));
        assert_eq!(Name::from("x'").freshen(&avoid), Name::from("x'''"));
    }

    #[test]
    #[should_panic]
    fn empty_base_rejected() {
        Name::new("");
    }
}
