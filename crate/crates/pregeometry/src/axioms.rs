//! Verification of the four pregeometry axioms.
//!
//! Grounds of size at most [`MAX_EXHAUSTIVE_GROUND`] are checked by full
//! enumeration of all subsets; failing verdicts carry the
//! lexicographically least violating tuple under `(|A|, A, a, b)`
//! ordering. Larger rule-backed tables are checked on a deterministic
//! structured-plus-random subset sample and report a sampled verdict;
//! larger explicit tables are a capacity error.
//!
//! Finite character is degenerate on finite grounds (take the finite
//! subset to be the set itself), so it is reported as a pass with a note
//! rather than omitted.

use itertools::Itertools;

use crate::closure::{ClosureTable, MAX_EXHAUSTIVE_GROUND};
use crate::error::MatroidError;
use crate::set::ElementSet;

pub const FINITE_CHARACTER_NOTE: &str = "degenerate on finite grounds";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationMode {
    Exhaustive,
    Sampled { subsets: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// Witness that exchange fails: `a ∈ cl(base ∪ {b}) \ cl(base)` but
/// `b ∉ cl(base ∪ {a})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeWitness {
    pub base: ElementSet,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub mode: VerificationMode,
    /// Fails with a set `A ⊄ cl(A)`.
    pub reflexivity: Verdict<ElementSet>,
    /// Fails with a set `cl(cl(A)) ≠ cl(A)`.
    pub transitivity: Verdict<ElementSet>,
    /// Always passes on finite grounds; kept so the report shape matches
    /// the four-axiom definition.
    pub finite_character: Verdict<()>,
    pub exchange: Verdict<ExchangeWitness>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.reflexivity.passed()
            && self.transitivity.passed()
            && self.finite_character.passed()
            && self.exchange.passed()
    }
}

/// Checks the four axioms of a candidate closure operator.
pub fn verify_axioms(table: &ClosureTable) -> Result<AxiomReport, MatroidError> {
    let n = table.ground().size();
    if n <= MAX_EXHAUSTIVE_GROUND {
        Ok(verify_exhaustive(table, n))
    } else if table.is_explicit() {
        Err(MatroidError::Capacity {
            what: "exhaustive axiom verification of an explicit table",
            bound: MAX_EXHAUSTIVE_GROUND,
            actual: n,
        })
    } else {
        Ok(verify_sampled(table, n))
    }
}

fn mask_to_set(mask: usize) -> ElementSet {
    let mut s = ElementSet::empty();
    let mut m = mask;
    while m != 0 {
        s.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    s
}

fn set_to_mask(s: &ElementSet) -> usize {
    s.iter().fold(0usize, |acc, i| acc | (1 << i))
}

fn verify_exhaustive(table: &ClosureTable, n: usize) -> AxiomReport {
    let size = 1usize << n;
    let mut memo = vec![0u32; size];
    for (mask, slot) in memo.iter_mut().enumerate() {
        *slot = set_to_mask(&table.close(&mask_to_set(mask))) as u32;
    }

    // Masks in (|A|, A) order: combinations of each size in lex order.
    let ordered: Vec<usize> = (0..=n)
        .flat_map(|k| {
            (0..n)
                .combinations(k)
                .map(|combo| combo.into_iter().fold(0usize, |acc, i| acc | (1 << i)))
        })
        .collect();

    let reflexivity = ordered
        .iter()
        .find(|&&a| a as u32 & !memo[a] != 0)
        .map_or(Verdict::Pass, |&a| Verdict::Fail(mask_to_set(a)));

    let transitivity = ordered
        .iter()
        .find(|&&a| memo[memo[a] as usize] != memo[a])
        .map_or(Verdict::Pass, |&a| Verdict::Fail(mask_to_set(a)));

    let mut exchange = Verdict::Pass;
    'scan: for &base in &ordered {
        let cl_base = memo[base];
        for a in 0..n {
            if cl_base & (1 << a) != 0 {
                continue;
            }
            let cl_with_a = memo[base | (1 << a)];
            for b in 0..n {
                if memo[base | (1 << b)] & (1 << a) != 0 && cl_with_a & (1 << b) == 0 {
                    exchange = Verdict::Fail(ExchangeWitness {
                        base: mask_to_set(base),
                        a,
                        b,
                    });
                    break 'scan;
                }
            }
        }
    }

    AxiomReport {
        mode: VerificationMode::Exhaustive,
        reflexivity,
        transitivity,
        finite_character: Verdict::Pass,
        exchange,
    }
}

/// Deterministic generator for the sampled mode (stable across builds).
pub(crate) struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    fn subset(&mut self, ground: usize, max_size: usize) -> ElementSet {
        let size = self.below(max_size + 1);
        let mut s = ElementSet::empty();
        for _ in 0..size {
            s.insert(self.below(ground));
        }
        s
    }
}

fn verify_sampled(table: &ClosureTable, n: usize) -> AxiomReport {
    let mut rng = SplitMix64(0xC1_05_EE ^ (n as u64) << 8 ^ table.rule_tag());
    let (random_subsets, b_budget) = match n {
        0..=128 => (128, n.min(64)),
        129..=1024 => (64, 32),
        _ => (32, 16),
    };

    let mut samples: Vec<ElementSet> = vec![ElementSet::empty()];
    if n <= 256 {
        samples.extend((0..n).map(ElementSet::singleton));
    } else {
        samples.extend((0..64).map(|_| ElementSet::singleton(rng.below(n))));
    }
    if n <= 1024 {
        samples.push(table.ground().full_set());
    }
    for _ in 0..random_subsets {
        samples.push(rng.subset(n, n.min(32)));
    }
    samples.sort_by(|a, b| a.size_lex_cmp(b));
    samples.dedup();

    let closures: Vec<ElementSet> = samples.iter().map(|a| table.close(a)).collect();

    let mut reflexivity = Verdict::Pass;
    let mut transitivity = Verdict::Pass;
    for (a, cl) in samples.iter().zip(&closures) {
        if reflexivity.passed() && !a.is_subset(cl) {
            reflexivity = Verdict::Fail(a.clone());
        }
        if transitivity.passed() && table.close(cl) != *cl {
            transitivity = Verdict::Fail(a.clone());
        }
    }

    // Exchange over sampled bases with a sampled b-budget; closures of
    // base ∪ {x} are memoized per base. The least violation among the
    // sampled space is reported.
    let mut exchange_hits: Vec<ExchangeWitness> = Vec::new();
    for (base, cl_base) in samples.iter().zip(&closures) {
        if base.len() > 24 {
            continue;
        }
        let b_candidates: Vec<usize> = if n <= b_budget {
            (0..n).collect()
        } else {
            (0..b_budget).map(|_| rng.below(n)).collect()
        };
        let mut extended: std::collections::HashMap<usize, ElementSet> =
            std::collections::HashMap::new();
        for &b in &b_candidates {
            let cl_with_b = extended
                .entry(b)
                .or_insert_with(|| table.close(&base.with(b)))
                .clone();
            for a in cl_with_b.difference(cl_base).iter() {
                let cl_with_a = extended
                    .entry(a)
                    .or_insert_with(|| table.close(&base.with(a)));
                if !cl_with_a.contains(b) {
                    exchange_hits.push(ExchangeWitness {
                        base: base.clone(),
                        a,
                        b,
                    });
                }
            }
        }
    }
    let exchange = exchange_hits
        .into_iter()
        .min_by(|x, y| {
            x.base
                .size_lex_cmp(&y.base)
                .then(x.a.cmp(&y.a))
                .then(x.b.cmp(&y.b))
        })
        .map_or(Verdict::Pass, Verdict::Fail);

    AxiomReport {
        mode: VerificationMode::Sampled {
            subsets: samples.len(),
        },
        reflexivity,
        transitivity,
        finite_character: Verdict::Pass,
        exchange,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::closure::ClosureTable;
    use crate::set::GroundSet;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    #[test]
    fn identity_operator_passes() {
        let g = GroundSet::new(5).unwrap();
        let t = ClosureTable::trivial(g, ElementSet::empty()).unwrap();
        let report = verify_axioms(&t).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.mode, VerificationMode::Exhaustive);
    }

    #[test]
    fn linear_gf2_cubed_passes() {
        let t = catalog::linear_table(2, 3);
        let report = verify_axioms(&t).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn z4_subgroup_closure_fails_exchange_with_least_witness() {
        let t = ClosureTable::subgroup(catalog::cyclic_group(4));
        let report = verify_axioms(&t).unwrap();
        assert!(report.reflexivity.passed());
        assert!(report.transitivity.passed());
        let w = report.exchange.witness().expect("exchange must fail");
        assert_eq!(w.base, ElementSet::empty());
        assert_eq!(w.a, 2);
        assert_eq!(w.b, 1);
        // the witness re-checks as a genuine violation
        assert!(t.close(&set(&[1])).contains(2));
        assert!(!t.close(&ElementSet::empty()).contains(2));
        assert!(!t.close(&set(&[2])).contains(1));
    }

    #[test]
    fn q8_subgroup_closure_fails_exchange_at_minus_one_i() {
        let t = ClosureTable::subgroup(catalog::quaternion_group());
        let report = verify_axioms(&t).unwrap();
        let w = report.exchange.witness().expect("exchange must fail");
        // indices: 0=1, 1=-1, 2=i (catalog convention)
        assert_eq!(w.base, ElementSet::empty());
        assert_eq!(w.a, 1);
        assert_eq!(w.b, 2);
    }

    #[test]
    fn non_reflexive_operator_caught() {
        let g = GroundSet::new(2).unwrap();
        // maps every subset to ∅
        let t = ClosureTable::raw(g, vec![ElementSet::empty(); 4]).unwrap();
        let report = verify_axioms(&t).unwrap();
        // least violating A is {0} (∅ itself satisfies ∅ ⊆ cl(∅))
        assert_eq!(report.reflexivity.witness(), Some(&set(&[0])));
    }

    #[test]
    fn non_transitive_operator_caught() {
        let g = GroundSet::new(3).unwrap();
        // cl adds element 1 to any set containing 0, and element 2 to any
        // set containing 1, so cl({0}) = {0,1} but cl(cl({0})) = {0,1,2}.
        let map: Vec<ElementSet> = (0..8usize)
            .map(|mask| {
                let original = mask_to_set(mask);
                let mut s = original.clone();
                if original.contains(0) {
                    s.insert(1);
                }
                if original.contains(1) {
                    s.insert(2);
                }
                s
            })
            .collect();
        let t = ClosureTable::raw(g, map).unwrap();
        let report = verify_axioms(&t).unwrap();
        assert!(report.reflexivity.passed());
        assert_eq!(report.transitivity.witness(), Some(&set(&[0])));
    }

    #[test]
    fn explicit_too_large_is_capacity_error() {
        let g = GroundSet::new(17).unwrap();
        let t = ClosureTable::explicit(g, vec![]).unwrap();
        assert!(matches!(
            verify_axioms(&t),
            Err(MatroidError::Capacity { .. })
        ));
    }

    #[test]
    fn sampled_mode_on_large_linear_ground() {
        let t = catalog::linear_table(3, 4); // ground 81
        let report = verify_axioms(&t).unwrap();
        assert!(matches!(report.mode, VerificationMode::Sampled { .. }));
        assert!(report.all_pass());
    }

    #[test]
    fn exchange_witness_order_prefers_smaller_base() {
        // Uniform-style operator where pairs close to full ground on Z4
        // subgroup closure: base=∅ must be found before any singleton base.
        let t = ClosureTable::subgroup(catalog::cyclic_group(8));
        let report = verify_axioms(&t).unwrap();
        let w = report.exchange.witness().expect("Z8 subgroup closure fails exchange");
        assert_eq!(w.base, ElementSet::empty());
        // 2 ∈ ⟨1⟩ = Z8, 1 ∉ ⟨2⟩
        assert_eq!((w.a, w.b), (2, 1));
    }
}
