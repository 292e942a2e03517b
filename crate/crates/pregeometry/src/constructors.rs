//! Builders for the standard pregeometry families and for deliberately
//! invalid operators used as negative controls.

use crate::closure::{ClosureTable, FieldTable};
use crate::error::MatroidError;
use crate::group::FiniteGroup;
use crate::set::{ElementSet, GroundSet};

/// A prime field power GF(q)^d. Ground elements are the q^d coordinate
/// vectors with little-endian positional indexing (index = Σ c_i·q^i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    q: u64,
    d: u32,
}

impl FieldSpec {
    /// Requires q prime and q^d ≤ 4096.
    pub fn new(q: u64, d: u32) -> Result<Self, MatroidError> {
        FieldTable::new(q, d)?;
        Ok(FieldSpec { q, d })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn ground_size(&self) -> usize {
        (self.q.pow(self.d)) as usize
    }

    fn table(&self) -> FieldTable {
        FieldTable::new(self.q, self.d).expect("validated on construction")
    }

    /// Vector addition on ground indices.
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table().add_index(a, b)
    }
}

/// Closure = linear span; cl(∅) = {0}.
pub fn linear_matroid(f: FieldSpec) -> ClosureTable {
    ClosureTable::linear(f.table())
}

/// Closure = affine hull; cl(∅) = ∅ and cl({p}) = {p}.
pub fn affine_matroid(f: FieldSpec) -> ClosureTable {
    ClosureTable::affine(f.table())
}

/// Closure = A ∪ loops; cl(∅) = loops.
pub fn trivial_pregeometry(
    ground_size: usize,
    loops: ElementSet,
) -> Result<ClosureTable, MatroidError> {
    let ground = GroundSet::new(ground_size)?;
    ClosureTable::trivial(ground, loops)
}

/// Closure = generated subgroup. A negative control: this violates
/// exchange on most groups.
pub fn subgroup_closure(group: FiniteGroup) -> ClosureTable {
    ClosureTable::subgroup(group)
}

/// An explicit operator from a flat list. The list is closed under
/// pairwise intersection and the full ground set is added; closure of a
/// set is its least containing flat. Whether the result is a pregeometry
/// is the verifier's business, not this constructor's.
pub fn explicit_from_flats(
    ground_size: usize,
    flats: Vec<ElementSet>,
) -> Result<ClosureTable, MatroidError> {
    let ground = GroundSet::new(ground_size)?;
    ClosureTable::explicit(ground, flats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::catalog;
    use crate::closure::is_prime;
    use crate::matroid::Matroid;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    #[test]
    fn field_spec_rejects_non_primes_and_overflow() {
        assert!(matches!(FieldSpec::new(6, 2), Err(MatroidError::NotPrime(6))));
        assert!(matches!(FieldSpec::new(1, 2), Err(MatroidError::NotPrime(1))));
        assert!(FieldSpec::new(2, 12).is_ok()); // 4096 exactly
        assert!(FieldSpec::new(2, 13).is_err());
    }

    #[test]
    fn linear_examples() {
        let t = linear_matroid(FieldSpec::new(2, 3).unwrap());
        assert_eq!(t.close(&set(&[1, 2])), set(&[0, 1, 2, 3]));
        let t32 = linear_matroid(FieldSpec::new(3, 2).unwrap());
        assert_eq!(t32.close(&set(&[1])), set(&[0, 1, 2]));
        let m = Matroid::validate(t).unwrap();
        assert_eq!(m.rank_total(), 3);
    }

    #[test]
    fn affine_examples() {
        let t = affine_matroid(FieldSpec::new(3, 2).unwrap());
        assert_eq!(t.close(&set(&[0, 4])), set(&[0, 4, 8]));
        assert_eq!(t.close(&ElementSet::empty()), ElementSet::empty());
        let t22 = affine_matroid(FieldSpec::new(2, 2).unwrap());
        assert_eq!(t22.close(&set(&[0, 3])), set(&[0, 3]));
    }

    #[test]
    fn trivial_examples() {
        let t = trivial_pregeometry(4, set(&[0])).unwrap();
        assert_eq!(t.close(&set(&[1])), set(&[0, 1]));
        let id = trivial_pregeometry(4, ElementSet::empty()).unwrap();
        for mask in 0..16usize {
            let a: ElementSet = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            assert_eq!(id.close(&a), a);
        }
        let m = Matroid::validate(trivial_pregeometry(6, set(&[0])).unwrap()).unwrap();
        let flats = m.enumerate_flats(None).unwrap();
        assert_eq!(flats.len(), 32);
        assert!(flats.iter().all(|f| f.contains(0)));
    }

    #[test]
    fn subgroup_closure_examples() {
        let t = subgroup_closure(catalog::cyclic_group(4));
        assert_eq!(t.close(&set(&[1])), set(&[0, 1, 2, 3]));
        let report = verify_axioms(&t).unwrap();
        let w = report.exchange.witness().unwrap();
        assert_eq!((w.base.clone(), w.a, w.b), (ElementSet::empty(), 2, 1));
    }

    #[test]
    fn explicit_from_flats_examples() {
        let t = explicit_from_flats(
            3,
            vec![ElementSet::empty(), set(&[0]), set(&[1]), set(&[2])],
        )
        .unwrap();
        assert_eq!(t.close(&set(&[0, 1])), set(&[0, 1, 2]));

        let fano = catalog::fano_matroid();
        assert_eq!(fano.rank_total(), 3);
        assert_eq!(fano.enumerate_flats(Some(2)).unwrap().len(), 7);

        let degenerate = explicit_from_flats(2, vec![set(&[0, 1])]).unwrap();
        assert_eq!(degenerate.close(&ElementSet::empty()), set(&[0, 1]));
        assert!(verify_axioms(&degenerate).unwrap().all_pass());
    }

    /// Span and affine hull are pregeometries for every q prime, q^d ≤ 256.
    #[test]
    fn all_small_field_constructors_pass_axioms() {
        let mut specs = Vec::new();
        for q in 2u64..=256 {
            if !is_prime(q) {
                continue;
            }
            let mut d = 1u32;
            while q.pow(d) <= 256 {
                specs.push(FieldSpec::new(q, d).unwrap());
                d += 1;
            }
        }
        assert!(specs.len() > 60);
        for f in specs {
            let lin = verify_axioms(&linear_matroid(f)).unwrap();
            assert!(lin.all_pass(), "linear GF({},{}) failed: {lin:?}", f.q(), f.d());
            let aff = verify_axioms(&affine_matroid(f)).unwrap();
            assert!(aff.all_pass(), "affine GF({},{}) failed: {aff:?}", f.q(), f.d());
        }
    }

    /// Localizing the affine matroid at p gives the linear matroid
    /// translated by p, as lattices of flats.
    #[test]
    fn affine_localization_recenters_linear() {
        for (q, d) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (2, 4), (3, 4)] {
            let f = FieldSpec::new(q, d).unwrap();
            let aff = Matroid::validate(affine_matroid(f)).unwrap();
            let lin = Matroid::validate(linear_matroid(f)).unwrap();
            let lin_flats = lin.enumerate_flats(None).unwrap();
            for p in [0usize, f.ground_size() - 1] {
                let loc = aff.localize(&ElementSet::singleton(p)).unwrap();
                let mut translated: Vec<ElementSet> = lin_flats
                    .iter()
                    .map(|flat| flat.iter().map(|v| f.add(v, p)).collect())
                    .collect();
                translated.sort();
                let loc_flats = loc.enumerate_flats(None).unwrap();
                assert_eq!(loc_flats, translated, "GF({q},{d}) at p={p}");
            }
        }
    }
}
