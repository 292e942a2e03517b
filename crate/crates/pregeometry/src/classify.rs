//! The canonical associated geometry and the taxonomy
//! trivial / modular / locally modular / projective.
//!
//! Geometrization deletes the loops cl(∅) and quotients the rest by
//! cl-equivalence (a ~ b iff cl(a) = cl(b)), re-indexing points by least
//! representative. The resulting operator fixes ∅ and every singleton.
//!
//! Taxonomy conventions on finite grounds:
//! - triviality is `cl(A) = cl(∅) ∪ ⋃_{a∈A} cl(a)` for every A (the
//!   empty-set case follows the loop-respecting reading, so trivial
//!   pregeometries with loops classify as trivial); on flats this
//!   reduces to the flat list being closed under pairwise union;
//! - modularity quantifies over all pairs of flats;
//! - local modularity restricts the equation to pairs with
//!   dim(A ∩ B) > 0, and is equivalently "every single-point
//!   localization is modular", which [`check_local_modularity_equivalence`]
//!   cross-checks as an engine self-test.

use std::collections::HashSet;
use std::sync::Arc;

use crate::closure::ClosureTable;
use crate::error::MatroidError;
use crate::matroid::Matroid;
use crate::set::{ElementSet, GroundSet};

/// Flat-pair scans refuse to run past this many flats.
pub const MAX_CLASSIFY_FLATS: usize = 5_000;

/// The canonical quotient geometry of a matroid.
#[derive(Debug, Clone)]
pub struct Geometry {
    base: Matroid,
    /// Quotient point -> least source representative, ascending.
    reps: Vec<usize>,
    /// Source element -> quotient point (None for loops).
    class_of: Vec<Option<usize>>,
    source: Matroid,
}

impl Geometry {
    pub fn base(&self) -> &Matroid {
        &self.base
    }

    pub fn point_count(&self) -> usize {
        self.reps.len()
    }

    /// Least source representative of a quotient point.
    pub fn representative(&self, point: usize) -> usize {
        self.reps[point]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Quotient point of a source element (None for loops).
    pub fn class_of(&self, source_elem: usize) -> Option<usize> {
        self.class_of.get(source_elem).copied().flatten()
    }

    pub fn class_map(&self) -> &[Option<usize>] {
        &self.class_of
    }

    /// The matroid this geometry was quotiented from.
    pub fn source(&self) -> &Matroid {
        &self.source
    }

    pub fn source_ground(&self) -> GroundSet {
        self.source.ground()
    }

    /// Source elements making up a quotient point's class.
    pub fn preimage(&self, point: usize) -> ElementSet {
        self.class_of
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(point))
            .map(|(x, _)| x)
            .collect()
    }
}

/// Result of geometrization; rank-0 matroids have no points left.
#[derive(Debug, Clone)]
pub enum Geometrized {
    Geometry(Geometry),
    /// Every element is a loop; flagged rather than silently empty.
    AllLoops { ground: GroundSet },
}

impl Geometrized {
    pub fn geometry(&self) -> Option<&Geometry> {
        match self {
            Geometrized::Geometry(g) => Some(g),
            Geometrized::AllLoops { .. } => None,
        }
    }

    pub fn expect_geometry(self) -> Geometry {
        match self {
            Geometrized::Geometry(g) => g,
            Geometrized::AllLoops { .. } => panic!("matroid has rank 0"),
        }
    }
}

/// Deletes loops, quotients by cl-equivalence and re-indexes points by
/// least representative. The quotient is validated like any matroid.
pub fn geometrize(m: &Matroid) -> Result<Geometrized, MatroidError> {
    let n = m.ground().size();
    let loops = m.loops();
    if loops.len() == n {
        return Ok(Geometrized::AllLoops { ground: m.ground() });
    }

    let mut reps: Vec<usize> = Vec::new();
    let mut class_closure: Vec<ElementSet> = Vec::new();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    for x in 0..n {
        if loops.contains(x) {
            continue;
        }
        let cl_x = m.closure(&ElementSet::singleton(x))?;
        match class_closure.iter().position(|c| *c == cl_x) {
            Some(idx) => class_of[x] = Some(idx),
            None => {
                class_of[x] = Some(reps.len());
                reps.push(x);
                class_closure.push(cl_x);
            }
        }
    }

    let table = ClosureTable::quotient(Arc::new(m.table().clone()), reps.clone(), class_of.clone());
    let base = Matroid::validate(table)?;
    debug_assert!(base.loops().is_empty());
    debug_assert!((0..base.ground().size())
        .all(|p| base.table().close(&ElementSet::singleton(p)) == ElementSet::singleton(p)));
    Ok(Geometrized::Geometry(Geometry {
        base,
        reps,
        class_of,
        source: m.clone(),
    }))
}

/// A flag plus, when it fails, the least flat pair violating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVerdict {
    pub holds: bool,
    pub witness: Option<FlatPair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPair {
    pub a: ElementSet,
    pub b: ElementSet,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub trivial: FlagVerdict,
    pub modular: FlagVerdict,
    pub locally_modular: FlagVerdict,
    pub is_geometry: bool,
}

impl ClassificationReport {
    /// Modular but not trivial; always computed, never stored.
    pub fn projective(&self) -> bool {
        self.modular.holds && !self.trivial.holds
    }
}

/// How triviality is quantified: over flat pairs (the default reduction)
/// or over every subset (cross-validation mode, grounds ≤ 16).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialityMode {
    FlatPairs,
    AllSubsets,
}

pub fn classify(m: &Matroid) -> Result<ClassificationReport, MatroidError> {
    classify_with(m, TrivialityMode::FlatPairs)
}

pub fn classify_with(
    m: &Matroid,
    triviality: TrivialityMode,
) -> Result<ClassificationReport, MatroidError> {
    let flats = m.enumerate_flats(None)?;
    if flats.len() > MAX_CLASSIFY_FLATS {
        return Err(MatroidError::Capacity {
            what: "flat-pair classification",
            bound: MAX_CLASSIFY_FLATS,
            actual: flats.len(),
        });
    }

    // witness enumeration order: smaller flats first, then lexicographic
    let mut ordered = flats.clone();
    ordered.sort_by(|a, b| a.size_lex_cmp(b));
    let flat_set: HashSet<&ElementSet> = flats.iter().collect();

    let trivial = match triviality {
        TrivialityMode::FlatPairs => {
            let mut verdict = FlagVerdict { holds: true, witness: None };
            'triv: for (i, f1) in ordered.iter().enumerate() {
                for f2 in &ordered[i..] {
                    if !flat_set.contains(&f1.union(f2)) {
                        verdict = FlagVerdict {
                            holds: false,
                            witness: Some(FlatPair { a: f1.clone(), b: f2.clone() }),
                        };
                        break 'triv;
                    }
                }
            }
            verdict
        }
        TrivialityMode::AllSubsets => classify_trivial_all_subsets(m)?,
    };

    let rank_of = |flat: &ElementSet| -> Result<usize, MatroidError> {
        Ok(m.rank_of_flat(flat)?.expect("flat from this matroid"))
    };

    let mut modular = FlagVerdict { holds: true, witness: None };
    let mut locally_modular = FlagVerdict { holds: true, witness: None };
    'pairs: for (i, f1) in ordered.iter().enumerate() {
        let r1 = rank_of(f1)?;
        for f2 in &ordered[i..] {
            let meet = f1.intersect(f2);
            let meet_rank = rank_of(&meet)?;
            let join_rank = rank_of(&m.closure(&f1.union(f2))?)?;
            if join_rank + meet_rank != r1 + rank_of(f2)? {
                let pair = FlatPair { a: f1.clone(), b: f2.clone() };
                if modular.holds {
                    modular = FlagVerdict { holds: false, witness: Some(pair.clone()) };
                }
                if meet_rank > 0 && locally_modular.holds {
                    locally_modular = FlagVerdict { holds: false, witness: Some(pair) };
                }
                if !modular.holds && !locally_modular.holds {
                    break 'pairs;
                }
            }
        }
    }

    let loops = m.loops();
    let is_geometry = loops.is_empty()
        && m.ground()
            .iter()
            .all(|p| m.table().close(&ElementSet::singleton(p)) == ElementSet::singleton(p));

    Ok(ClassificationReport {
        trivial,
        modular,
        locally_modular,
        is_geometry,
    })
}

fn classify_trivial_all_subsets(m: &Matroid) -> Result<FlagVerdict, MatroidError> {
    let n = m.ground().size();
    if n > crate::closure::MAX_EXHAUSTIVE_GROUND {
        return Err(MatroidError::Capacity {
            what: "all-subsets triviality check",
            bound: crate::closure::MAX_EXHAUSTIVE_GROUND,
            actual: n,
        });
    }
    let loops = m.loops();
    let singleton_cl: Vec<ElementSet> = (0..n)
        .map(|x| m.table().close(&ElementSet::singleton(x)))
        .collect();
    use itertools::Itertools;
    for k in 0..=n {
        for combo in (0..n).combinations(k) {
            let a = ElementSet::from_slice(&combo);
            let mut union = loops.clone();
            for x in a.iter() {
                union = union.union(&singleton_cl[x]);
            }
            if m.table().close(&a) != union {
                // report the set itself paired with its closure defect
                return Ok(FlagVerdict {
                    holds: false,
                    witness: Some(FlatPair {
                        a: a.clone(),
                        b: m.table().close(&a),
                    }),
                });
            }
        }
    }
    Ok(FlagVerdict { holds: true, witness: None })
}

/// Engine self-test for the equivalence "locally modular iff every
/// single-point localization is modular". Disagreement means a bug in
/// the engine, not a property of the matroid.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub restricted_equation: bool,
    pub localizations_modular: bool,
    pub witness: Option<EquivalenceWitness>,
}

#[derive(Debug, Clone)]
pub enum EquivalenceWitness {
    /// Local modularity holds but cl_a is not modular at this element.
    LocalizationNotModular { at: usize, pair: FlatPair },
    /// The restricted equation fails even though every localization is
    /// modular.
    RestrictedFailsButLocalsModular { pair: FlatPair },
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.restricted_equation == self.localizations_modular
    }
}

pub fn check_local_modularity_equivalence(
    m: &Matroid,
) -> Result<EquivalenceReport, MatroidError> {
    let report = classify(m)?;
    let restricted = report.locally_modular.clone();

    let loops = m.loops();
    let mut locals_modular = true;
    let mut first_bad: Option<(usize, FlatPair)> = None;
    for a in m.ground().iter() {
        if loops.contains(a) {
            continue;
        }
        let localized = m.localize(&ElementSet::singleton(a))?;
        let local_report = classify(&localized)?;
        if !local_report.modular.holds {
            locals_modular = false;
            if first_bad.is_none() {
                first_bad = Some((a, local_report.modular.witness.unwrap()));
            }
        }
    }

    let witness = if restricted.holds && !locals_modular {
        first_bad.map(|(at, pair)| EquivalenceWitness::LocalizationNotModular { at, pair })
    } else if !restricted.holds && locals_modular {
        restricted
            .witness
            .clone()
            .map(|pair| EquivalenceWitness::RestrictedFailsButLocalsModular { pair })
    } else {
        None
    };

    Ok(EquivalenceReport {
        restricted_equation: restricted.holds,
        localizations_modular: locals_modular,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    #[test]
    fn gf2_cubed_geometrizes_to_fano() {
        let m = catalog::linear_matroid_checked(2, 3);
        let g = geometrize(&m).unwrap().expect_geometry();
        assert_eq!(g.point_count(), 7);
        assert_eq!(g.representatives(), &[1, 2, 3, 4, 5, 6, 7]);
        let fano = catalog::fano_matroid();
        assert!(g.base().same_closure_operator(&fano).unwrap());
        let lines = g.base().enumerate_flats(Some(2)).unwrap();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| l.len() == 3));
    }

    #[test]
    fn gf3_squared_geometrizes_to_four_points() {
        let m = catalog::linear_matroid_checked(3, 2);
        let g = geometrize(&m).unwrap().expect_geometry();
        assert_eq!(g.point_count(), 4);
        assert_eq!(g.base().rank_total(), 2);
        // classes are {v, 2v}
        assert_eq!(g.preimage(0), set(&[1, 2]));
    }

    #[test]
    fn affine_plane_is_already_a_geometry() {
        let m = catalog::affine_matroid_checked(3, 2);
        let g = geometrize(&m).unwrap().expect_geometry();
        assert_eq!(g.point_count(), 9);
        assert!(g.base().same_closure_operator(&m).unwrap());
    }

    #[test]
    fn rank_zero_matroid_flagged() {
        let m = catalog::trivial_matroid(3, &[0, 1, 2]);
        assert!(matches!(
            geometrize(&m).unwrap(),
            Geometrized::AllLoops { .. }
        ));
    }

    #[test]
    fn geometrize_is_idempotent_on_catalog() {
        for entry in catalog::small_catalog() {
            if let Geometrized::Geometry(g) = geometrize(&entry.matroid).unwrap() {
                let again = geometrize(g.base()).unwrap().expect_geometry();
                assert_eq!(again.point_count(), g.point_count(), "{}", entry.name);
                assert!(
                    again.base().same_closure_operator(g.base()).unwrap(),
                    "{}",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn quotient_respects_rank() {
        let m = catalog::linear_matroid_checked(3, 2);
        let g = geometrize(&m).unwrap().expect_geometry();
        for mask in 0..(1usize << g.point_count()) {
            let points: ElementSet = (0..g.point_count()).filter(|i| mask & (1 << i) != 0).collect();
            let mut preimage = ElementSet::empty();
            for p in points.iter() {
                preimage = preimage.union(&g.preimage(p));
            }
            assert_eq!(
                g.base().rank(&points).unwrap(),
                m.rank(&preimage).unwrap()
            );
        }
    }

    #[test]
    fn linear_is_modular_projective() {
        let report = classify(&catalog::linear_matroid_checked(2, 3)).unwrap();
        assert!(report.modular.holds);
        assert!(!report.trivial.holds);
        assert!(report.projective());
        assert!(report.locally_modular.holds);
        assert!(!report.is_geometry);
    }

    #[test]
    fn affine_plane_is_locally_modular_with_parallel_witness() {
        let report = classify(&catalog::affine_matroid_checked(3, 2)).unwrap();
        assert!(!report.modular.holds);
        assert!(report.locally_modular.holds);
        assert!(!report.projective());
        assert!(report.is_geometry);
        let w = report.modular.witness.unwrap();
        assert_eq!(w.a, set(&[0, 1, 2]));
        assert_eq!(w.b, set(&[3, 4, 5]));
    }

    #[test]
    fn trivial_is_trivial_and_modular() {
        let report = classify(&catalog::trivial_matroid(4, &[])).unwrap();
        assert!(report.trivial.holds);
        assert!(report.modular.holds);
        assert!(!report.projective());
        let loopy = classify(&catalog::trivial_matroid(4, &[0])).unwrap();
        assert!(loopy.trivial.holds);
        assert!(!loopy.is_geometry);
    }

    #[test]
    fn fano_is_projective_geometry() {
        let report = classify(&catalog::fano_matroid()).unwrap();
        assert!(report.is_geometry);
        assert!(report.projective());
    }

    #[test]
    fn triviality_modes_agree_on_small_catalog() {
        for entry in catalog::small_catalog() {
            if entry.matroid.ground().size() > 12 {
                continue;
            }
            let flat_mode = classify_with(&entry.matroid, TrivialityMode::FlatPairs).unwrap();
            let subset_mode = classify_with(&entry.matroid, TrivialityMode::AllSubsets).unwrap();
            assert_eq!(
                flat_mode.trivial.holds, subset_mode.trivial.holds,
                "{}",
                entry.name
            );
        }
    }

    #[test]
    fn modular_implies_locally_modular_on_catalog() {
        for entry in catalog::full_catalog() {
            let report = classify(&entry.matroid).unwrap();
            if report.modular.holds {
                assert!(report.locally_modular.holds, "{}", entry.name);
            }
        }
    }

    #[test]
    fn triviality_stable_under_geometrization() {
        for entry in catalog::small_catalog() {
            let report = classify(&entry.matroid).unwrap();
            if let Geometrized::Geometry(g) = geometrize(&entry.matroid).unwrap() {
                let quotient_report = classify(g.base()).unwrap();
                assert_eq!(
                    report.trivial.holds, quotient_report.trivial.holds,
                    "{}",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn equivalence_on_named_examples() {
        for m in [
            catalog::affine_matroid_checked(3, 2),
            catalog::linear_matroid_checked(2, 3),
            catalog::affine_matroid_checked(2, 3),
        ] {
            let report = check_local_modularity_equivalence(&m).unwrap();
            assert!(report.agrees());
            assert!(report.restricted_equation);
            assert!(report.localizations_modular);
        }
    }
}
