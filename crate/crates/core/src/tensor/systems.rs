use std::fmt;

use crate::error::{Error, Result};

/// A labeled tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct System {
    pub label: String,
    pub dim: usize,
}

impl System {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        System {
            label: label.into(),
            dim,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.label, self.dim)
    }
}

/// Ordered list of systems. The composite basis index is row-major over
/// this order, leftmost label most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SystemList(Vec<System>);

impl SystemList {
    pub fn new(systems: Vec<System>) -> Result<Self> {
        for (i, s) in systems.iter().enumerate() {
            if systems[..i].iter().any(|t| t.label == s.label) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
        }
        Ok(SystemList(systems))
    }

    /// Builds a list from `(label, dim)` pairs.
    pub fn from_pairs<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(l, d)| System::new(l, d)).collect())
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Self {
        SystemList(vec![System::new(label, dim)])
    }

    pub fn empty() -> Self {
        SystemList(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, System> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[System] {
        &self.0
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|s| s.dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|s| s.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.0.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|s| s.label == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    pub fn get(&self, label: &str) -> Option<&System> {
        self.0.iter().find(|s| s.label == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        self.get(label)
            .map(|s| s.dim)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Concatenation; fails on duplicated labels.
    pub fn concat(&self, other: &SystemList) -> Result<SystemList> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        SystemList::new(v)
    }

    /// The systems whose labels are not in `labels`, in list order.
    pub fn without(&self, labels: &[&str]) -> SystemList {
        SystemList(
            self.0
                .iter()
                .filter(|s| !labels.contains(&s.label.as_str()))
                .cloned()
                .collect(),
        )
    }

    /// Same dims, new labels.
    pub fn relabeled<S: AsRef<str>>(&self, labels: &[S]) -> Result<SystemList> {
        if labels.len() != self.0.len() {
            return Err(Error::dims(format!(
                "relabel: {} labels for {} systems",
                labels.len(),
                self.0.len()
            )));
        }
        SystemList::new(
            self.0
                .iter()
                .zip(labels)
                .map(|(s, l)| System::new(l.as_ref(), s.dim))
                .collect(),
        )
    }

    /// True when both lists hold the same labels with the same dims,
    /// irrespective of order.
    pub fn same_set(&self, other: &SystemList) -> bool {
        self.len() == other.len()
            && self
                .0
                .iter()
                .all(|s| other.get(&s.label).is_some_and(|t| t.dim == s.dim))
    }
}

impl fmt::Display for SystemList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl<'a> IntoIterator for &'a SystemList {
    type Item = &'a System;
    type IntoIter = std::slice::Iter<'a, System>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_labels() {
        let err = SystemList::from_pairs([("A", 2), ("A", 3)]).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("A".into()));
    }

    #[test]
    fn total_dim_of_empty_list_is_one() {
        assert_eq!(SystemList::empty().total_dim(), 1);
    }

    #[test]
    fn zero_dim_is_legal() {
        let s = SystemList::from_pairs([("A", 0), ("B", 3)]).unwrap();
        assert_eq!(s.total_dim(), 0);
    }

    #[test]
    fn same_set_ignores_order() {
        let a = SystemList::from_pairs([("A", 2), ("B", 3)]).unwrap();
        let b = SystemList::from_pairs([("B", 3), ("A", 2)]).unwrap();
        let c = SystemList::from_pairs([("B", 2), ("A", 2)]).unwrap();
        assert!(a.same_set(&b));
        assert!(!a.same_set(&c));
    }
}
