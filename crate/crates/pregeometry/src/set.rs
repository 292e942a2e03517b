//! Ground sets and element sets.
//!
//! Elements of a ground set of size `n` are the indices `0..n`. An
//! [`ElementSet`] is a bitset over those indices; its canonical textual
//! form is ascending with no duplicates, e.g. `{0,2,5}`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::MatroidError;

/// A finite ground set; elements are the indices `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self, MatroidError> {
        if size == 0 {
            return Err(MatroidError::EmptyGround);
        }
        Ok(GroundSet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The set `{0, .., size-1}`.
    pub fn full_set(&self) -> ElementSet {
        ElementSet::from_iter(0..self.size)
    }

    /// Checks that every member of `a` is a valid index.
    pub fn check(&self, a: &ElementSet) -> Result<(), MatroidError> {
        match a.last() {
            Some(m) if m >= self.size => Err(MatroidError::OutOfRange {
                index: m,
                ground: self.size,
            }),
            _ => Ok(()),
        }
    }

    pub fn check_index(&self, index: usize) -> Result<(), MatroidError> {
        if index >= self.size {
            return Err(MatroidError::OutOfRange {
                index,
                ground: self.size,
            });
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }
}

/// A finite set of element indices, stored as a bitset.
///
/// Equality and hashing are on the normalized representation (no trailing
/// zero words). Ordering is lexicographic on the ascending element
/// sequence, so `{0,5} < {1,2}` and any proper prefix sorts first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty() -> Self {
        ElementSet::default()
    }

    pub fn singleton(index: usize) -> Self {
        let mut s = ElementSet::empty();
        s.insert(index);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }

    pub fn from_slice(indices: &[usize]) -> Self {
        Self::from_iter(indices.iter().copied())
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, index: usize) {
        let word = index / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1u64 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        let word = index / 64;
        if word < self.words.len() {
            self.words[word] &= !(1u64 << (index % 64));
            self.trim();
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        let word = index / 64;
        word < self.words.len() && self.words[word] & (1u64 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        for (i, w) in self.words.iter().enumerate().rev() {
            if *w != 0 {
                return Some(i * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = ElementSet { words };
        s.trim();
        s
    }

    pub fn intersect(&self, other: &ElementSet) -> ElementSet {
        let n = self.words.len().min(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words[i] & other.words[i];
        }
        let mut s = ElementSet { words };
        s.trim();
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut words = self.words.clone();
        for (i, w) in words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = ElementSet { words };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn with(&self, index: usize) -> ElementSet {
        let mut s = self.clone();
        s.insert(index);
        s
    }

    pub fn without(&self, index: usize) -> ElementSet {
        let mut s = self.clone();
        s.remove(index);
        s
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> ElementIter<'_> {
        ElementIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Lexicographically-least total order on `(len, elements)` tuples,
    /// used when witnesses are selected by "smallest set first".
    pub fn size_lex_cmp(&self, other: &ElementSet) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.cmp(other))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElementSet::from_iter(iter)
    }
}

pub struct ElementIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for ElementIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a = ElementSet::from_slice(&[0, 2, 5]);
        let b = ElementSet::from_slice(&[2, 3]);
        assert_eq!(a.union(&b), ElementSet::from_slice(&[0, 2, 3, 5]));
        assert_eq!(a.intersect(&b), ElementSet::singleton(2));
        assert_eq!(a.difference(&b), ElementSet::from_slice(&[0, 5]));
        assert!(ElementSet::empty().is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_string(), "{0,2,5}");
        assert_eq!(ElementSet::empty().to_string(), "{}");
    }

    #[test]
    fn normalization_across_words() {
        let mut a = ElementSet::singleton(130);
        a.remove(130);
        assert_eq!(a, ElementSet::empty());
        let b = ElementSet::from_slice(&[1, 70]);
        assert_eq!(b.difference(&ElementSet::singleton(70)), ElementSet::singleton(1));
        assert_eq!(b.last(), Some(70));
        assert_eq!(b.first(), Some(1));
    }

    #[test]
    fn sequence_lex_order() {
        let a = ElementSet::from_slice(&[0, 5]);
        let b = ElementSet::from_slice(&[1, 2]);
        assert!(a < b);
        let prefix = ElementSet::from_slice(&[0]);
        assert!(prefix < a);
        assert_eq!(
            ElementSet::singleton(3).size_lex_cmp(&ElementSet::from_slice(&[0, 1])),
            Ordering::Less
        );
    }

    #[test]
    fn ground_bounds() {
        let g = GroundSet::new(4).unwrap();
        assert!(g.check(&ElementSet::from_slice(&[0, 3])).is_ok());
        assert!(matches!(
            g.check(&ElementSet::singleton(4)),
            Err(MatroidError::OutOfRange { index: 4, ground: 4 })
        ));
        assert!(GroundSet::new(0).is_err());
    }
}
