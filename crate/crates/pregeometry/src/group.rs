//! Finite groups given by Cayley table, their subgroups and automorphisms.
//!
//! The identity is always element 0. Tables are validated on construction:
//! row 0 and column 0 must be identity rows, the operation must be
//! associative, and every element must have a two-sided inverse.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::GroupError;
use crate::set::ElementSet;

/// Largest group order for which automorphism and subgroup enumeration run.
pub const MAX_ENUMERATION_ORDER: usize = 64;
/// Abort automorphism search when the raw candidate space gets this large.
const MAX_AUT_CANDIDATES: u64 = 5_000_000;
/// Abort when more automorphisms than this are found.
const MAX_AUT_COUNT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a row-major Cayley table (`table[i*order + j] = i·j`).
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Malformed("order must be at least 1".into()));
        }
        if table.len() != order * order {
            return Err(GroupError::Malformed(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&e| e >= order) {
            return Err(GroupError::Malformed(format!(
                "table entry {bad} out of range for order {order}"
            )));
        }
        for j in 0..order {
            if table[j] != j || table[j * order] != j {
                return Err(GroupError::IdentityNotZero);
            }
        }
        for i in 0..order {
            for j in 0..order {
                for k in 0..order {
                    let left = table[table[i * order + j] * order + k];
                    let right = table[i * order + table[j * order + k]];
                    if left != right {
                        return Err(GroupError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; order];
        for i in 0..order {
            match (0..order).find(|&j| table[i * order + j] == 0 && table[j * order + i] == 0) {
                Some(j) => inv[i] = j,
                None => return Err(GroupError::NoInverse(i)),
            }
        }
        Ok(FiniteGroup { order, table, inv })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|i| (i..self.order).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Order of `x` as a group element.
    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &ElementSet) -> ElementSet {
        let mut sub = ElementSet::singleton(0);
        let mut frontier: Vec<usize> = vec![0];
        for g in gens.iter() {
            if !sub.contains(g) {
                sub.insert(g);
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            for y in sub.clone().iter() {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !sub.contains(z) {
                        sub.insert(z);
                        frontier.push(z);
                    }
                }
            }
        }
        sub
    }

    /// All subgroups, sorted by (size, lexicographic member order).
    pub fn subgroups(&self) -> Result<Vec<ElementSet>, GroupError> {
        if self.order > MAX_ENUMERATION_ORDER {
            return Err(GroupError::Capacity {
                what: "subgroup enumeration",
                bound: MAX_ENUMERATION_ORDER,
                actual: self.order,
            });
        }
        let trivial = ElementSet::singleton(0);
        let mut known: BTreeSet<ElementSet> = BTreeSet::new();
        known.insert(trivial.clone());
        let mut queue = vec![trivial];
        while let Some(h) = queue.pop() {
            for x in 0..self.order {
                if h.contains(x) {
                    continue;
                }
                let bigger = self.generated_subgroup(&h.with(x));
                if known.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
        }
        let mut out: Vec<ElementSet> = known.into_iter().collect();
        out.sort_by(|a, b| a.size_lex_cmp(b));
        Ok(out)
    }

    /// A generating set built greedily by smallest new element.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = ElementSet::singleton(0);
        while sub.len() < self.order {
            let g = (0..self.order).find(|&x| !sub.contains(x)).unwrap();
            gens.push(g);
            sub = self.generated_subgroup(&ElementSet::from_slice(&gens));
        }
        gens
    }

    /// The full automorphism group, sorted by image tuple.
    ///
    /// Enumeration maps a greedy generating set to all order-compatible
    /// image tuples and keeps the maps satisfying the homomorphism law.
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>, GroupError> {
        if self.order > MAX_ENUMERATION_ORDER {
            return Err(GroupError::Capacity {
                what: "automorphism enumeration",
                bound: MAX_ENUMERATION_ORDER,
                actual: self.order,
            });
        }
        let gens = self.greedy_generators();

        // Express every element as (parent, generator) with parent closer to 0.
        let mut expr: Vec<Option<(usize, usize)>> = vec![None; self.order];
        let mut build_order: Vec<usize> = vec![0];
        let mut seen = ElementSet::singleton(0);
        let mut head = 0;
        while head < build_order.len() {
            let y = build_order[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let z = self.mul(y, g);
                if !seen.contains(z) {
                    seen.insert(z);
                    expr[z] = Some((y, k));
                    build_order.push(z);
                }
            }
        }

        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let ord = self.element_order(g);
                (0..self.order)
                    .filter(|&x| self.element_order(x) == ord)
                    .collect()
            })
            .collect();
        let space: u64 = candidates
            .iter()
            .map(|c| c.len() as u64)
            .fold(1u64, |acc, n| acc.saturating_mul(n));
        if space > MAX_AUT_CANDIDATES {
            return Err(GroupError::Capacity {
                what: "automorphism search space",
                bound: MAX_AUT_CANDIDATES as usize,
                actual: space.min(usize::MAX as u64) as usize,
            });
        }

        let mut autos: Vec<Automorphism> = Vec::new();
        let mut idx = vec![0usize; gens.len()];
        'outer: loop {
            let images: Vec<usize> = idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_to_map(&gens, &images, &expr, &build_order) {
                if self.is_homomorphism(&map) {
                    autos.push(Automorphism { map });
                    if autos.len() > MAX_AUT_COUNT {
                        return Err(GroupError::Capacity {
                            what: "automorphism count",
                            bound: MAX_AUT_COUNT,
                            actual: autos.len(),
                        });
                    }
                }
            }
            // odometer step
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < candidates[pos].len() {
                    continue 'outer;
                }
                idx[pos] = 0;
            }
            break;
        }
        autos.sort_by(|a, b| a.map.cmp(&b.map));
        Ok(autos)
    }

    /// Builds the induced map if the generator images extend to a bijection.
    fn extend_to_map(
        &self,
        gens: &[usize],
        images: &[usize],
        expr: &[Option<(usize, usize)>],
        build_order: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        let mut hit = vec![false; self.order];
        map[0] = 0;
        hit[0] = true;
        for &z in &build_order[1..] {
            let (parent, k) = expr[z].unwrap();
            let _ = gens;
            let fz = self.mul(map[parent], images[k]);
            if hit[fz] {
                return None;
            }
            map[z] = fz;
            hit[fz] = true;
        }
        Some(map)
    }

    fn is_homomorphism(&self, map: &[usize]) -> bool {
        (0..self.order)
            .all(|i| (0..self.order).all(|j| map[self.mul(i, j)] == self.mul(map[i], map[j])))
    }
}

/// A group automorphism as an explicit image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    map: Vec<usize>,
}

impl Automorphism {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn apply_set(&self, s: &ElementSet) -> ElementSet {
        s.iter().map(|x| self.map[x]).collect()
    }

    pub fn fixes_pointwise(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.map[x] == x)
    }

    pub fn fixes_setwise(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| s.contains(self.map[x]))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}
