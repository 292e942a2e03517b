//! Closure operators on finite ground sets.
//!
//! A [`ClosureTable`] is a total, deterministic map from subsets of the
//! ground set to subsets, realized either by an intersection-closed flat
//! list or by an algebraic rule (linear span, affine hull, trivial
//! closure, generated subgroup, or a localization / restriction /
//! quotient of another table). Nothing here is validated: whether a table
//! actually satisfies the pregeometry axioms is the verifier's job.

use std::sync::Arc;

use crate::error::MatroidError;
use crate::group::FiniteGroup;
use crate::set::{ElementSet, GroundSet};

/// Ground sizes up to this bound are verified by full subset enumeration.
pub const MAX_EXHAUSTIVE_GROUND: usize = 16;
/// Largest ground produced by the field constructors (q^d bound).
pub const MAX_FIELD_SIZE: u64 = 4096;

#[derive(Debug, Clone)]
pub struct ClosureTable {
    ground: GroundSet,
    rule: CloseRule,
}

#[derive(Debug, Clone)]
pub(crate) enum CloseRule {
    Explicit { flats: Vec<ElementSet> },
    Trivial { loops: ElementSet },
    Linear(FieldTable),
    Affine(FieldTable),
    Subgroup(FiniteGroup),
    Localized { inner: Arc<ClosureTable>, base: ElementSet },
    Restricted { inner: Arc<ClosureTable>, carrier: Vec<usize> },
    Quotient { inner: Arc<ClosureTable>, reps: Vec<usize>, class_of: Vec<Option<usize>> },
    /// Arbitrary subset-indexed table (ground ≤ 16); lets tests feed the
    /// verifier operators that break individual axioms.
    Raw { map: Vec<ElementSet> },
}

/// Which family a table belongs to, for reports and file serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableKind {
    Explicit,
    Trivial { loops: ElementSet },
    Linear { q: u64, d: u32 },
    Affine { q: u64, d: u32 },
    Subgroup,
    Derived,
}

impl ClosureTable {
    pub(crate) fn new(ground: GroundSet, rule: CloseRule) -> Self {
        ClosureTable { ground, rule }
    }

    /// Builds an explicit table from a list of flats. The list is closed
    /// under pairwise intersection and the full ground set is added, so
    /// any input yields a well-defined operator.
    pub fn explicit(ground: GroundSet, flats: Vec<ElementSet>) -> Result<Self, MatroidError> {
        for f in &flats {
            ground.check(f)?;
        }
        let mut closed: Vec<ElementSet> = flats;
        closed.push(ground.full_set());
        closed.sort();
        closed.dedup();
        loop {
            let mut added = Vec::new();
            for i in 0..closed.len() {
                for j in (i + 1)..closed.len() {
                    let meet = closed[i].intersect(&closed[j]);
                    if closed.binary_search(&meet).is_err() && !added.contains(&meet) {
                        added.push(meet);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            closed.extend(added);
            closed.sort();
            closed.dedup();
        }
        Ok(ClosureTable::new(ground, CloseRule::Explicit { flats: closed }))
    }

    pub fn trivial(ground: GroundSet, loops: ElementSet) -> Result<Self, MatroidError> {
        ground.check(&loops)?;
        Ok(ClosureTable::new(ground, CloseRule::Trivial { loops }))
    }

    pub(crate) fn linear(field: FieldTable) -> Self {
        let ground = GroundSet::new(field.size()).unwrap();
        ClosureTable::new(ground, CloseRule::Linear(field))
    }

    pub(crate) fn affine(field: FieldTable) -> Self {
        let ground = GroundSet::new(field.size()).unwrap();
        ClosureTable::new(ground, CloseRule::Affine(field))
    }

    pub fn subgroup(group: FiniteGroup) -> Self {
        let ground = GroundSet::new(group.order()).unwrap();
        ClosureTable::new(ground, CloseRule::Subgroup(group))
    }

    pub(crate) fn localized(inner: Arc<ClosureTable>, base: ElementSet) -> Self {
        let ground = inner.ground;
        ClosureTable::new(ground, CloseRule::Localized { inner, base })
    }

    pub(crate) fn restricted(inner: Arc<ClosureTable>, carrier: Vec<usize>) -> Self {
        let ground = GroundSet::new(carrier.len()).unwrap();
        ClosureTable::new(ground, CloseRule::Restricted { inner, carrier })
    }

    pub(crate) fn quotient(
        inner: Arc<ClosureTable>,
        reps: Vec<usize>,
        class_of: Vec<Option<usize>>,
    ) -> Self {
        let ground = GroundSet::new(reps.len()).unwrap();
        ClosureTable::new(ground, CloseRule::Quotient { inner, reps, class_of })
    }

    /// A table given by one output set per subset, indexed by bitmask.
    pub fn raw(ground: GroundSet, map: Vec<ElementSet>) -> Result<Self, MatroidError> {
        let n = ground.size();
        if n > MAX_EXHAUSTIVE_GROUND {
            return Err(MatroidError::Capacity {
                what: "raw subset-indexed table",
                bound: MAX_EXHAUSTIVE_GROUND,
                actual: n,
            });
        }
        if map.len() != 1 << n {
            return Err(MatroidError::Capacity {
                what: "raw table entry count",
                bound: 1 << n,
                actual: map.len(),
            });
        }
        for f in &map {
            ground.check(f)?;
        }
        Ok(ClosureTable::new(ground, CloseRule::Raw { map }))
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn kind(&self) -> TableKind {
        match &self.rule {
            CloseRule::Explicit { .. } => TableKind::Explicit,
            CloseRule::Trivial { loops } => TableKind::Trivial { loops: loops.clone() },
            CloseRule::Linear(f) => TableKind::Linear { q: f.q, d: f.d },
            CloseRule::Affine(f) => TableKind::Affine { q: f.q, d: f.d },
            CloseRule::Subgroup(_) => TableKind::Subgroup,
            _ => TableKind::Derived,
        }
    }

    /// Whether the table is an explicit flat list (these are capped at
    /// [`MAX_EXHAUSTIVE_GROUND`] for verification; rules are sampled).
    pub fn is_explicit(&self) -> bool {
        matches!(self.rule, CloseRule::Explicit { .. })
    }

    pub(crate) fn rule_tag(&self) -> u64 {
        match &self.rule {
            CloseRule::Explicit { .. } => 1,
            CloseRule::Trivial { .. } => 2,
            CloseRule::Linear(_) => 3,
            CloseRule::Affine(_) => 4,
            CloseRule::Subgroup(_) => 5,
            CloseRule::Localized { .. } => 6,
            CloseRule::Restricted { .. } => 7,
            CloseRule::Quotient { .. } => 8,
            CloseRule::Raw { .. } => 9,
        }
    }

    /// Range-checked closure.
    pub fn try_close(&self, a: &ElementSet) -> Result<ElementSet, MatroidError> {
        self.ground.check(a)?;
        Ok(self.close(a))
    }

    /// Closure of `a`; members must be in range.
    pub fn close(&self, a: &ElementSet) -> ElementSet {
        debug_assert!(self.ground.check(a).is_ok());
        match &self.rule {
            CloseRule::Explicit { flats } => {
                let mut acc = self.ground.full_set();
                for f in flats {
                    if a.is_subset(f) {
                        acc = acc.intersect(f);
                    }
                }
                acc
            }
            CloseRule::Trivial { loops } => a.union(loops),
            CloseRule::Linear(f) => f.span(a),
            CloseRule::Affine(f) => f.affine_hull(a),
            CloseRule::Subgroup(g) => g.generated_subgroup(a),
            CloseRule::Localized { inner, base } => inner.close(&a.union(base)),
            CloseRule::Restricted { inner, carrier } => {
                let expanded: ElementSet = a.iter().map(|i| carrier[i]).collect();
                let closed = inner.close(&expanded);
                carrier
                    .iter()
                    .enumerate()
                    .filter(|(_, &old)| closed.contains(old))
                    .map(|(new, _)| new)
                    .collect()
            }
            CloseRule::Quotient { inner, reps, class_of } => {
                let lifted: ElementSet = a.iter().map(|c| reps[c]).collect();
                let closed = inner.close(&lifted);
                closed.iter().filter_map(|x| class_of[x]).collect()
            }
            CloseRule::Raw { map } => {
                let mask = a.iter().fold(0usize, |acc, i| acc | (1 << i));
                map[mask].clone()
            }
        }
    }

    /// The explicit flat list, when this table is explicit.
    pub fn explicit_flats(&self) -> Option<&[ElementSet]> {
        match &self.rule {
            CloseRule::Explicit { flats } => Some(flats),
            _ => None,
        }
    }
}

/// Coordinate arithmetic for GF(q)^d with little-endian positional
/// indexing: the vector (c_0, .., c_{d-1}) has index Σ c_i·q^i.
#[derive(Debug, Clone)]
pub(crate) struct FieldTable {
    pub q: u64,
    pub d: u32,
}

impl FieldTable {
    pub fn new(q: u64, d: u32) -> Result<Self, MatroidError> {
        if !is_prime(q) {
            return Err(MatroidError::NotPrime(q));
        }
        if d == 0 {
            return Err(MatroidError::EmptyGround);
        }
        let size = q.checked_pow(d).filter(|&s| s <= MAX_FIELD_SIZE);
        if size.is_none() {
            return Err(MatroidError::FieldTooLarge {
                actual: (q as f64).powi(d as i32) as u64,
                bound: MAX_FIELD_SIZE,
            });
        }
        Ok(FieldTable { q, d })
    }

    pub fn size(&self) -> usize {
        self.q.pow(self.d) as usize
    }

    pub fn decode(&self, index: usize) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.d as usize);
        let mut rest = index as u64;
        for _ in 0..self.d {
            v.push(rest % self.q);
            rest /= self.q;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut idx = 0u64;
        for &c in v.iter().rev() {
            idx = idx * self.q + c;
        }
        idx as usize
    }

    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % self.q).collect();
        self.encode(&sum)
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.q - y) % self.q).collect()
    }

    /// Reduces `v` against a row-echelon basis; returns the residue.
    fn reduce(&self, mut v: Vec<u64>, basis: &[(usize, Vec<u64>)]) -> Vec<u64> {
        for (pivot, row) in basis {
            if v[*pivot] != 0 {
                let factor = v[*pivot] * modinv(row[*pivot], self.q) % self.q;
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + (self.q - factor % self.q) * y) % self.q;
                }
            }
        }
        v
    }

    fn basis_of<'a, I: Iterator<Item = Vec<u64>>>(&self, vectors: I) -> Vec<(usize, Vec<u64>)> {
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for v in vectors {
            let r = self.reduce(v, &basis);
            if let Some(pivot) = r.iter().position(|&c| c != 0) {
                basis.push((pivot, r));
            }
        }
        basis
    }

    /// Enumerates all q^k combinations of the basis, offset by `origin`.
    fn enumerate_span(&self, origin: &[u64], basis: &[(usize, Vec<u64>)]) -> ElementSet {
        let mut out = ElementSet::empty();
        let k = basis.len();
        let mut coeffs = vec![0u64; k];
        loop {
            let mut point = origin.to_vec();
            for (c, (_, row)) in coeffs.iter().zip(basis) {
                for (x, y) in point.iter_mut().zip(row) {
                    *x = (*x + c * y) % self.q;
                }
            }
            out.insert(self.encode(&point));
            let mut pos = 0;
            loop {
                if pos == k {
                    return out;
                }
                coeffs[pos] += 1;
                if coeffs[pos] < self.q {
                    break;
                }
                coeffs[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Linear span of the vectors indexed by `a` (always contains 0).
    pub fn span(&self, a: &ElementSet) -> ElementSet {
        let basis = self.basis_of(a.iter().map(|i| self.decode(i)));
        self.enumerate_span(&vec![0; self.d as usize], &basis)
    }

    /// Affine hull: empty for the empty set, else base point plus the
    /// span of the differences.
    pub fn affine_hull(&self, a: &ElementSet) -> ElementSet {
        let Some(p0) = a.first() else {
            return ElementSet::empty();
        };
        let origin = self.decode(p0);
        let basis = self.basis_of(a.iter().skip(1).map(|i| self.sub(&self.decode(i), &origin)));
        self.enumerate_span(&origin, &basis)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Modular inverse for prime modulus via Fermat.
fn modinv(a: u64, q: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % q;
    let mut exp = q - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    #[test]
    fn gf2_cubed_span() {
        let f = FieldTable::new(2, 3).unwrap();
        let t = ClosureTable::linear(f);
        assert_eq!(t.close(&set(&[1, 2])), set(&[0, 1, 2, 3]));
        assert_eq!(t.close(&ElementSet::empty()), set(&[0]));
        assert_eq!(t.close(&set(&[1, 2, 4])).len(), 8);
    }

    #[test]
    fn gf3_squared_lines() {
        let f = FieldTable::new(3, 2).unwrap();
        let lin = ClosureTable::linear(f.clone());
        assert_eq!(lin.close(&set(&[1])), set(&[0, 1, 2]));
        let aff = ClosureTable::affine(f);
        assert_eq!(aff.close(&set(&[0, 4])), set(&[0, 4, 8]));
        assert_eq!(aff.close(&ElementSet::empty()), ElementSet::empty());
        assert_eq!(aff.close(&set(&[7])), set(&[7]));
    }

    #[test]
    fn affine_two_points_over_gf2() {
        let f = FieldTable::new(2, 2).unwrap();
        let aff = ClosureTable::affine(f);
        assert_eq!(aff.close(&set(&[0, 3])), set(&[0, 3]));
    }

    #[test]
    fn explicit_least_containing_flat() {
        let g = GroundSet::new(3).unwrap();
        let flats = vec![
            ElementSet::empty(),
            set(&[0]),
            set(&[1]),
            set(&[2]),
            set(&[0, 1, 2]),
        ];
        let t = ClosureTable::explicit(g, flats).unwrap();
        assert_eq!(t.close(&set(&[0, 1])), set(&[0, 1, 2]));
        assert_eq!(t.close(&set(&[2])), set(&[2]));
    }

    #[test]
    fn explicit_closes_under_intersection() {
        let g = GroundSet::new(4).unwrap();
        // two overlapping flats whose meet {1} is not listed
        let t = ClosureTable::explicit(g, vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let flats = t.explicit_flats().unwrap();
        assert!(flats.contains(&set(&[1])));
        assert!(flats.contains(&set(&[0, 1, 2, 3])));
        assert_eq!(t.close(&set(&[1])), set(&[1]));
    }

    #[test]
    fn degenerate_everything_closed_to_full() {
        let g = GroundSet::new(2).unwrap();
        let t = ClosureTable::explicit(g, vec![set(&[0, 1])]).unwrap();
        assert_eq!(t.close(&ElementSet::empty()), set(&[0, 1]));
    }

    #[test]
    fn trivial_rule() {
        let g = GroundSet::new(4).unwrap();
        let t = ClosureTable::trivial(g, set(&[0])).unwrap();
        assert_eq!(t.close(&set(&[1])), set(&[0, 1]));
        let id = ClosureTable::trivial(g, ElementSet::empty()).unwrap();
        assert_eq!(id.close(&set(&[1, 3])), set(&[1, 3]));
    }

    #[test]
    fn subgroup_rule_on_z4() {
        let z4 = crate::catalog::cyclic_group(4);
        let t = ClosureTable::subgroup(z4);
        assert_eq!(t.close(&set(&[1])), set(&[0, 1, 2, 3]));
        assert_eq!(t.close(&set(&[2])), set(&[0, 2]));
        assert_eq!(t.close(&ElementSet::empty()), set(&[0]));
    }

    #[test]
    fn field_bounds() {
        assert!(FieldTable::new(4, 2).is_err());
        assert!(FieldTable::new(2, 13).is_err());
        assert!(FieldTable::new(13, 2).is_ok());
    }

    #[test]
    fn out_of_range_close() {
        let g = GroundSet::new(3).unwrap();
        let t = ClosureTable::trivial(g, ElementSet::empty()).unwrap();
        assert!(t.try_close(&set(&[5])).is_err());
    }
}
