//! Validated pregeometries and the rank engine.
//!
//! A [`Matroid`] wraps a [`ClosureTable`] whose four axioms have been
//! checked (exhaustively on small grounds, by sampling on large
//! rule-backed ones). All operations are pure; the flat list is computed
//! once on demand and shared.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::axioms::{verify_axioms, AxiomReport};
use crate::closure::ClosureTable;
use crate::error::MatroidError;
use crate::set::{ElementSet, GroundSet};

/// Flat enumeration stops (with a capacity error) past this many flats.
pub const MAX_FLATS: usize = 100_000;

#[derive(Debug, Clone, Copy)]
struct CapacityHit {
    what: &'static str,
    bound: usize,
    actual: usize,
}

impl CapacityHit {
    fn to_error(self) -> MatroidError {
        MatroidError::Capacity {
            what: self.what,
            bound: self.bound,
            actual: self.actual,
        }
    }
}

#[derive(Debug)]
struct FlatsCache {
    /// All flats in lexicographic order.
    flats: Vec<ElementSet>,
    rank_of: HashMap<ElementSet, usize>,
}

/// A validated pregeometry: closure oracle, rank interface, cached flats.
#[derive(Debug, Clone)]
pub struct Matroid {
    table: Arc<ClosureTable>,
    rank_total: usize,
    flats: Arc<OnceLock<Result<Arc<FlatsCache>, CapacityHit>>>,
}

impl Matroid {
    /// Checks the axioms and wraps the table. Fails with the axiom report
    /// when the operator is not a pregeometry.
    pub fn validate(table: ClosureTable) -> Result<Self, MatroidError> {
        let report = verify_axioms(&table)?;
        Self::from_verified(table, report)
    }

    /// Validates and also hands back the axiom report for display.
    pub fn validate_with_report(
        table: ClosureTable,
    ) -> Result<(Self, AxiomReport), MatroidError> {
        let report = verify_axioms(&table)?;
        let matroid = Self::from_verified(table, report.clone())?;
        Ok((matroid, report))
    }

    fn from_verified(table: ClosureTable, report: AxiomReport) -> Result<Self, MatroidError> {
        if !report.all_pass() {
            return Err(MatroidError::NotAPregeometry(Box::new(report)));
        }
        let ground = table.ground();
        // greedy basis of the full ground gives the total rank
        let mut cl = table.close(&ElementSet::empty());
        let mut rank_total = 0;
        for x in ground.iter() {
            if !cl.contains(x) {
                rank_total += 1;
                cl = table.close(&cl.with(x));
            }
        }
        Ok(Matroid {
            table: Arc::new(table),
            rank_total,
            flats: Arc::new(OnceLock::new()),
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.table.ground()
    }

    pub fn table(&self) -> &ClosureTable {
        &self.table
    }

    /// Total rank (the paper's dimension; geometric dimension is one less).
    pub fn rank_total(&self) -> usize {
        self.rank_total
    }

    /// The least flat containing `a`.
    pub fn closure(&self, a: &ElementSet) -> Result<ElementSet, MatroidError> {
        self.table.try_close(a)
    }

    /// cl(∅): the loops.
    pub fn loops(&self) -> ElementSet {
        self.table.close(&ElementSet::empty())
    }

    /// dim(a): size of a maximal independent subset of `a`.
    pub fn rank(&self, a: &ElementSet) -> Result<usize, MatroidError> {
        self.rank_over(a, &ElementSet::empty())
    }

    /// dim(a/over): rank of `a` in the localization at `over`.
    pub fn rank_over(&self, a: &ElementSet, over: &ElementSet) -> Result<usize, MatroidError> {
        self.ground().check(a)?;
        self.ground().check(over)?;
        let mut cl = self.table.close(over);
        let mut count = 0;
        for x in a.iter() {
            if !cl.contains(x) {
                count += 1;
                cl = self.table.close(&cl.with(x));
            }
        }
        Ok(count)
    }

    /// The lexicographically least maximal independent subset of `a`.
    pub fn basis_within(&self, a: &ElementSet) -> Result<ElementSet, MatroidError> {
        self.ground().check(a)?;
        let mut basis = ElementSet::empty();
        let mut cl = self.table.close(&ElementSet::empty());
        for x in a.iter() {
            if !cl.contains(x) {
                basis.insert(x);
                cl = self.table.close(&cl.with(x));
            }
        }
        Ok(basis)
    }

    pub fn is_independent(&self, a: &ElementSet) -> Result<bool, MatroidError> {
        Ok(self.basis_within(a)? == *a)
    }

    /// Restriction cl^Y: a validated matroid on ground `{0..|Y|}` where
    /// index i stands for the i-th smallest member of `y`.
    pub fn restrict(&self, y: &ElementSet) -> Result<Matroid, MatroidError> {
        self.ground().check(y)?;
        if y.is_empty() {
            return Err(MatroidError::EmptyGround);
        }
        let carrier: Vec<usize> = y.iter().collect();
        let table = ClosureTable::restricted(Arc::clone(&self.table), carrier);
        Matroid::validate(table)
    }

    /// Localization cl_Y on the same ground set: A ↦ cl(A ∪ Y).
    pub fn localize(&self, y: &ElementSet) -> Result<Matroid, MatroidError> {
        self.ground().check(y)?;
        let table = ClosureTable::localized(Arc::clone(&self.table), y.clone());
        Matroid::validate(table)
    }

    fn flats_cache(&self) -> Result<Arc<FlatsCache>, MatroidError> {
        self.flats
            .get_or_init(|| self.enumerate_flats_uncached())
            .clone()
            .map_err(CapacityHit::to_error)
    }

    fn enumerate_flats_uncached(&self) -> Result<Arc<FlatsCache>, CapacityHit> {
        let n = self.ground().size();
        let loops = self.loops();
        let mut rank_of: HashMap<ElementSet, usize> = HashMap::new();
        rank_of.insert(loops.clone(), 0);
        let mut queue: Vec<ElementSet> = vec![loops];
        let mut head = 0;
        while head < queue.len() {
            let flat = queue[head].clone();
            let rank = rank_of[&flat];
            head += 1;
            for x in 0..n {
                if flat.contains(x) {
                    continue;
                }
                let bigger = self.table.close(&flat.with(x));
                if !rank_of.contains_key(&bigger) {
                    rank_of.insert(bigger.clone(), rank + 1);
                    queue.push(bigger);
                    if queue.len() > MAX_FLATS {
                        return Err(CapacityHit {
                            what: "flat enumeration",
                            bound: MAX_FLATS,
                            actual: queue.len(),
                        });
                    }
                }
            }
        }
        let mut flats = queue;
        flats.sort();
        Ok(Arc::new(FlatsCache { flats, rank_of }))
    }

    /// All flats (or those of the given rank), sorted lexicographically.
    pub fn enumerate_flats(
        &self,
        rank_filter: Option<usize>,
    ) -> Result<Vec<ElementSet>, MatroidError> {
        let cache = self.flats_cache()?;
        Ok(match rank_filter {
            None => cache.flats.clone(),
            Some(r) => cache
                .flats
                .iter()
                .filter(|f| cache.rank_of[*f] == r)
                .cloned()
                .collect(),
        })
    }

    /// Rank of a flat by lookup (the flat must come from this matroid).
    pub fn rank_of_flat(&self, flat: &ElementSet) -> Result<Option<usize>, MatroidError> {
        let cache = self.flats_cache()?;
        Ok(cache.rank_of.get(flat).copied())
    }

    pub fn is_flat(&self, a: &ElementSet) -> Result<bool, MatroidError> {
        self.ground().check(a)?;
        Ok(self.table.close(a) == *a)
    }

    /// Operator equality: exhaustive when both grounds fit the
    /// exhaustive bound, by flat-list comparison otherwise.
    pub fn same_closure_operator(&self, other: &Matroid) -> Result<bool, MatroidError> {
        if self.ground() != other.ground() {
            return Ok(false);
        }
        let n = self.ground().size();
        if n <= crate::closure::MAX_EXHAUSTIVE_GROUND {
            for mask in 0..(1usize << n) {
                let a: ElementSet = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                if self.table.close(&a) != other.table.close(&a) {
                    return Ok(false);
                }
            }
            Ok(true)
        } else {
            Ok(self.enumerate_flats(None)? == other.enumerate_flats(None)?)
        }
    }
}
