//! Finite groups paired with compatible pregeometries, and mechanical
//! desk-scale checks of the group-theoretic propositions: finite
//! homogeneity, invariance of fixed elements, generic products,
//! invariant subgroups, the three-line configuration, and the
//! cl-commutativity criterion.
//!
//! Finite homogeneity is the finitely checkable fragment of the
//! homogeneity definition: the infinite-dimension clause is dropped and
//! the transitivity-on-generics clause is bounded by `kmax`; downstream
//! verdicts carry that caveat. A tuple is generic over A iff its rank
//! over A equals its length; no randomness is involved.

use std::collections::HashMap;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::classify::geometrize;
use crate::error::GroupError;
use crate::group::{Automorphism, FiniteGroup};
use crate::matroid::Matroid;
use crate::plane::{ConcurrencyResult, Plane, PlaneMode};
use crate::set::ElementSet;

/// The harness never extends A by more than two elements.
pub const MAX_KMAX: usize = 3;
pub const DEFAULT_KMAX: usize = 2;

/// How compatibility was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatibilityVerdict {
    /// Every enumerated automorphism maps every flat to a flat.
    Exhaustive { automorphisms: usize },
    /// The matroid is the linear or affine matroid of GF(q)^d and the
    /// group is its additive group, whose automorphisms are the linear
    /// maps; those preserve spans and affine flats.
    Structural,
}

/// Result of a compatibility check.
#[derive(Debug, Clone)]
pub enum Compatibility {
    Compatible(CompatibilityVerdict),
    /// Least violating (automorphism, flat) pair.
    Incompatible { auto: Automorphism, flat: ElementSet },
}

/// Checks that every group automorphism preserves the closure's flats.
///
/// The table need not be a valid pregeometry; fixed points stand in for
/// flats (exact on grounds within the exhaustive bound).
pub fn check_compatibility(
    group: &FiniteGroup,
    table: &crate::closure::ClosureTable,
) -> Result<Compatibility, GroupError> {
    if group.order() != table.ground().size() {
        return Err(GroupError::GroundMismatch {
            group: group.order(),
            matroid: table.ground().size(),
        });
    }
    if additive_structure_matches(group, table) {
        return Ok(Compatibility::Compatible(CompatibilityVerdict::Structural));
    }

    let flats = fixed_points(table)?;
    let flat_set: std::collections::HashSet<&ElementSet> = flats.iter().collect();
    let autos = group.automorphisms()?;
    for auto in &autos {
        for flat in &flats {
            let image = auto.apply_set(flat);
            if !flat_set.contains(&image) {
                return Ok(Compatibility::Incompatible {
                    auto: auto.clone(),
                    flat: flat.clone(),
                });
            }
        }
    }
    Ok(Compatibility::Compatible(CompatibilityVerdict::Exhaustive {
        automorphisms: autos.len(),
    }))
}

/// Fast path: the group is coordinatewise addition for the table's field.
fn additive_structure_matches(group: &FiniteGroup, table: &crate::closure::ClosureTable) -> bool {
    use crate::closure::TableKind;
    let (q, d) = match table.kind() {
        TableKind::Linear { q, d } | TableKind::Affine { q, d } => (q, d),
        _ => return false,
    };
    let Ok(spec) = crate::constructors::FieldSpec::new(q, d) else {
        return false;
    };
    if spec.ground_size() != group.order() {
        return false;
    }
    let n = group.order();
    (0..n).all(|i| (0..n).all(|j| group.mul(i, j) == spec.add(i, j)))
}

/// Flats of an explicit table, or fixed points of `close` (exhaustive on
/// small grounds, breadth-first closure search above that).
fn fixed_points(table: &crate::closure::ClosureTable) -> Result<Vec<ElementSet>, GroupError> {
    if let Some(flats) = table.explicit_flats() {
        return Ok(flats.to_vec());
    }
    let n = table.ground().size();
    if n <= crate::closure::MAX_EXHAUSTIVE_GROUND {
        let mut flats = Vec::new();
        for mask in 0..(1usize << n) {
            let a: ElementSet = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if table.close(&a) == a {
                flats.push(a);
            }
        }
        flats.sort();
        return Ok(flats);
    }
    // closure-reachable flats; exact when the table is a pregeometry
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = vec![table.close(&ElementSet::empty())];
    seen.insert(queue[0].clone());
    while let Some(f) = queue.pop() {
        for x in 0..n {
            if f.contains(x) {
                continue;
            }
            let bigger = table.close(&f.with(x));
            if seen.insert(bigger.clone()) {
                if seen.len() > crate::matroid::MAX_FLATS {
                    return Err(GroupError::Matroid(crate::error::MatroidError::Capacity {
                        what: "flat enumeration",
                        bound: crate::matroid::MAX_FLATS,
                        actual: seen.len(),
                    }));
                }
                queue.push(bigger);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// A finite group with a compatible validated pregeometry on the same
/// ground set.
#[derive(Debug)]
pub struct GroupPregeometry {
    group: FiniteGroup,
    matroid: Matroid,
    compatibility: CompatibilityVerdict,
    autos: OnceLock<Result<Vec<Automorphism>, GroupError>>,
}

impl GroupPregeometry {
    /// Pairs a group with a matroid; fails unless compatibility holds.
    pub fn new(group: FiniteGroup, matroid: Matroid) -> Result<Self, GroupError> {
        match check_compatibility(&group, matroid.table())? {
            Compatibility::Compatible(verdict) => Ok(GroupPregeometry {
                group,
                matroid,
                compatibility: verdict,
                autos: OnceLock::new(),
            }),
            Compatibility::Incompatible { auto, flat } => Err(GroupError::Incompatible {
                auto: auto.as_slice().to_vec(),
                flat,
            }),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn compatibility(&self) -> &CompatibilityVerdict {
        &self.compatibility
    }

    fn autos(&self) -> Result<&[Automorphism], GroupError> {
        match self
            .autos
            .get_or_init(|| self.group.automorphisms())
        {
            Ok(v) => Ok(v),
            Err(e) => Err(clone_group_error(e)),
        }
    }

    fn order(&self) -> usize {
        self.group.order()
    }

    /// Subsets of the ground with |A| ≤ kmax in (size, lex) order.
    fn bases_up_to(&self, kmax: usize) -> impl Iterator<Item = ElementSet> + '_ {
        let n = self.order();
        (0..=kmax.min(n)).flat_map(move |k| {
            (0..n)
                .combinations(k)
                .map(|combo| ElementSet::from_slice(&combo))
        })
    }

    fn close_over(&self, a: &ElementSet) -> ElementSet {
        self.matroid.table().close(a)
    }
}

fn clone_group_error(e: &GroupError) -> GroupError {
    match e {
        GroupError::Capacity { what, bound, actual } => GroupError::Capacity {
            what,
            bound: *bound,
            actual: *actual,
        },
        other => GroupError::Malformed(other.to_string()),
    }
}

fn check_kmax(kmax: usize) -> Result<(), GroupError> {
    if kmax > MAX_KMAX {
        return Err(GroupError::KmaxTooLarge(kmax));
    }
    Ok(())
}

/// Outcome of a universally quantified check: pass, or the least witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropOutcome<W> {
    pub kmax: usize,
    pub witness: Option<W>,
}

impl<W> PropOutcome<W> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub base: ElementSet,
    pub b: usize,
    pub c: usize,
}

/// Finite homogeneity: for every A with |A| ≤ kmax and every b, c
/// outside cl(A) there is an automorphism fixing A pointwise with
/// f(b) = c. The infinite-dimension clause of the definition is not
/// checkable finitely and is not checked.
pub fn check_finite_homogeneity(
    gp: &GroupPregeometry,
    kmax: usize,
) -> Result<PropOutcome<HomogeneityWitness>, GroupError> {
    check_kmax(kmax)?;
    let autos = gp.autos()?;
    let n = gp.order();
    for base in gp.bases_up_to(kmax) {
        let cl = gp.close_over(&base);
        let stab: Vec<&Automorphism> = autos.iter().filter(|f| f.fixes_pointwise(&base)).collect();
        for b in 0..n {
            if cl.contains(b) {
                continue;
            }
            let orbit: ElementSet = stab.iter().map(|f| f.apply(b)).collect();
            for c in 0..n {
                if cl.contains(c) {
                    continue;
                }
                if !orbit.contains(c) {
                    return Ok(PropOutcome {
                        kmax,
                        witness: Some(HomogeneityWitness { base, b, c }),
                    });
                }
            }
        }
    }
    Ok(PropOutcome { kmax, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantElementWitness {
    pub base: ElementSet,
    pub element: usize,
}

/// Every element fixed by all automorphisms fixing A pointwise must lie
/// in cl(A).
pub fn check_invariant_elements(
    gp: &GroupPregeometry,
    kmax: usize,
) -> Result<PropOutcome<InvariantElementWitness>, GroupError> {
    check_kmax(kmax)?;
    let autos = gp.autos()?;
    let n = gp.order();
    for base in gp.bases_up_to(kmax) {
        let cl = gp.close_over(&base);
        let stab: Vec<&Automorphism> = autos.iter().filter(|f| f.fixes_pointwise(&base)).collect();
        for x in 0..n {
            if cl.contains(x) {
                continue;
            }
            if stab.iter().all(|f| f.apply(x) == x) {
                return Ok(PropOutcome {
                    kmax,
                    witness: Some(InvariantElementWitness { base, element: x }),
                });
            }
        }
    }
    Ok(PropOutcome { kmax, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericProductWitness {
    pub base: ElementSet,
    pub a: usize,
    pub b: usize,
}

/// If a is generic over A ∪ {b} then so is a·b: checks
/// a ∉ cl(A ∪ {b}) ⇒ a·b ∉ cl(A ∪ {b}) for all A, a, b.
pub fn check_generic_product(
    gp: &GroupPregeometry,
    kmax: usize,
) -> Result<PropOutcome<GenericProductWitness>, GroupError> {
    check_kmax(kmax)?;
    let n = gp.order();
    for base in gp.bases_up_to(kmax) {
        let cl_with: Vec<ElementSet> = (0..n).map(|b| gp.close_over(&base.with(b))).collect();
        for a in 0..n {
            for (b, cl) in cl_with.iter().enumerate() {
                if !cl.contains(a) && cl.contains(gp.group.mul(a, b)) {
                    return Ok(PropOutcome {
                        kmax,
                        witness: Some(GenericProductWitness { base, a, b }),
                    });
                }
            }
        }
    }
    Ok(PropOutcome { kmax, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSubgroupWitness {
    pub base: ElementSet,
    pub subgroup: ElementSet,
}

/// An A-invariant subgroup containing an element generic over A must be
/// the whole group.
pub fn check_invariant_subgroups(
    gp: &GroupPregeometry,
    kmax: usize,
) -> Result<PropOutcome<InvariantSubgroupWitness>, GroupError> {
    check_kmax(kmax)?;
    let autos = gp.autos()?;
    let subgroups = gp.group.subgroups()?;
    let n = gp.order();
    for base in gp.bases_up_to(kmax) {
        let cl = gp.close_over(&base);
        let stab: Vec<&Automorphism> = autos.iter().filter(|f| f.fixes_pointwise(&base)).collect();
        for sub in &subgroups {
            if sub.len() == n || sub.is_subset(&cl) {
                continue;
            }
            if stab.iter().all(|f| f.fixes_setwise(sub)) {
                return Ok(PropOutcome {
                    kmax,
                    witness: Some(InvariantSubgroupWitness {
                        base,
                        subgroup: sub.clone(),
                    }),
                });
            }
        }
    }
    Ok(PropOutcome { kmax, witness: None })
}

/// Hypothesis state of the cl-commutativity criterion over a fixed A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClcomHypothesis {
    /// Finite homogeneity failed, so the criterion's premise is not
    /// available; nothing was asserted.
    NotEvaluated,
    /// No generic pair over A exists (rank too small).
    NoGenericPair,
    /// No generic pair satisfies b·a ∈ cl_A(a·b).
    Unmet,
    /// The least generic pair with b·a ∈ cl_A(a·b); `commuting_pair`
    /// marks the sub-case b·a = a·b.
    Met { a: usize, b: usize, commuting_pair: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropVerdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone)]
pub struct ClcomReport {
    pub base: ElementSet,
    pub homogeneity_kmax: usize,
    pub homogeneity: PropOutcome<HomogeneityWitness>,
    pub hypothesis: ClcomHypothesis,
    /// Some(is_commutative) once the hypothesis is met.
    pub conclusion: Option<bool>,
    pub verdict: PropVerdict,
}

/// The criterion "if b·a ∈ cl(A, a·b) for a generic pair then G is
/// commutative", evaluated as an implication so vacuous truth stays
/// visible. Homogeneity is re-checked at kmax = |A| + 2 (the two extra
/// elements the proof adjoins), capped at [`MAX_KMAX`].
pub fn check_clcom_commutativity(
    gp: &GroupPregeometry,
    base: &ElementSet,
) -> Result<ClcomReport, GroupError> {
    gp.matroid().ground().check(base).map_err(GroupError::Matroid)?;
    let kmax = (base.len() + 2).min(MAX_KMAX);
    let homogeneity = check_finite_homogeneity(gp, kmax)?;
    if !homogeneity.passed() {
        return Ok(ClcomReport {
            base: base.clone(),
            homogeneity_kmax: kmax,
            homogeneity,
            hypothesis: ClcomHypothesis::NotEvaluated,
            conclusion: None,
            verdict: PropVerdict::Vacuous,
        });
    }

    let n = gp.order();
    let cl_base = gp.close_over(base);
    let mut hypothesis = ClcomHypothesis::NoGenericPair;
    'pairs: for a in 0..n {
        if cl_base.contains(a) {
            continue;
        }
        let cl_a = gp.close_over(&base.with(a));
        for b in 0..n {
            if cl_a.contains(b) {
                continue;
            }
            if matches!(hypothesis, ClcomHypothesis::NoGenericPair) {
                hypothesis = ClcomHypothesis::Unmet;
            }
            let ab = gp.group.mul(a, b);
            let ba = gp.group.mul(b, a);
            if gp.close_over(&base.with(ab)).contains(ba) {
                hypothesis = ClcomHypothesis::Met {
                    a,
                    b,
                    commuting_pair: ab == ba,
                };
                break 'pairs;
            }
        }
    }

    let (conclusion, verdict) = match hypothesis {
        ClcomHypothesis::Met { .. } => {
            let commutative = gp.group.is_commutative();
            (
                Some(commutative),
                if commutative { PropVerdict::Pass } else { PropVerdict::Fail },
            )
        }
        _ => (None, PropVerdict::Vacuous),
    };

    Ok(ClcomReport {
        base: base.clone(),
        homogeneity_kmax: kmax,
        homogeneity,
        hypothesis,
        conclusion,
        verdict,
    })
}

/// Full record of one (a,b,c) configuration: the three lines, their
/// concurrency, the two membership identities and the cl-com hypothesis
/// bit. Line point sets and concurrency points are labelled by least
/// ground representatives.
#[derive(Debug, Clone)]
pub struct ConfigurationWitness {
    pub base: ElementSet,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// (b,c), (ab,ac), (ba,ca) as ground-representative point sets.
    pub lines: [ElementSet; 3],
    pub result: ConcurrencyResult,
    /// c⁻¹b ∈ cl_A(b,c) ∩ cl_A(ab,ac)
    pub membership_first: bool,
    /// bc⁻¹ ∈ cl_A(b,c) ∩ cl_A(ba,ca)
    pub membership_second: bool,
    /// b·a ∈ cl_A(a·b)
    pub clcom_hypothesis: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfigurationSummary {
    /// Admissible triples: dim(a,b/A) = 2 and c ∉ cl_A(a,b).
    pub total: usize,
    /// Concurrent with both membership identities holding.
    pub concurrent: usize,
    /// Skipped: the configuration is not realizable for the triple
    /// (carrier rank ≠ 3, a product falls outside the carrier or into a
    /// loop, or two named points coincide).
    pub degenerate: usize,
    /// Non-concurrent, or a membership identity failed.
    pub failed: usize,
    /// Triples with a failed membership identity (subset of `failed`
    /// unless also non-concurrent).
    pub membership_failures: usize,
    /// Triples whose cl-com hypothesis bit b·a ∈ cl_A(a·b) held.
    pub clcom_hypothesis_count: usize,
}

#[derive(Debug)]
pub struct ConfigurationScan {
    pub summary: ConfigurationSummary,
    /// Failing witnesses, capped at [`MAX_KEPT_FAILURES`]; the summary
    /// counts are exact.
    pub failures: Vec<ConfigurationWitness>,
    /// The least admissible triple's full record.
    pub sample: Option<ConfigurationWitness>,
}

pub const MAX_KEPT_FAILURES: usize = 64;

/// Why a triple could not realize the proof configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    CarrierRankNot3 { rank: usize },
    ProductOutsideCarrier { element: usize },
    ProductIsLoop { element: usize },
    CoincidentEndpoints { p: usize, q: usize },
}

/// Per-triple outcome.
#[derive(Debug)]
pub enum TripleOutcome {
    NotAdmissible,
    Degenerate(Degeneracy),
    Checked(ConfigurationWitness),
}

struct PlaneCtx {
    plane: Plane,
    carrier_vec: Vec<usize>,
    /// ground element -> plane point index (None for elements outside
    /// the carrier or loops)
    point_of: Vec<Option<usize>>,
}

struct ConfigScanner<'a> {
    gp: &'a GroupPregeometry,
    base: ElementSet,
    localized: Matroid,
    loops: ElementSet,
    cl1: Vec<ElementSet>,
    pair_cl: HashMap<(usize, usize), ElementSet>,
    planes: HashMap<ElementSet, Result<PlaneCtx, Degeneracy>>,
}

impl<'a> ConfigScanner<'a> {
    fn new(gp: &'a GroupPregeometry, base: &ElementSet) -> Result<Self, GroupError> {
        gp.matroid().ground().check(base).map_err(GroupError::Matroid)?;
        let localized = gp.matroid.localize(base)?;
        let loops = localized.loops();
        if loops.len() == gp.order() {
            return Err(GroupError::NoNonLoopElement);
        }
        let n = gp.order();
        let cl1 = (0..n)
            .map(|x| localized.table().close(&ElementSet::singleton(x)))
            .collect();
        Ok(ConfigScanner {
            gp,
            base: base.clone(),
            localized,
            loops,
            cl1,
            pair_cl: HashMap::new(),
            planes: HashMap::new(),
        })
    }

    fn pair_closure(&mut self, x: usize, y: usize) -> ElementSet {
        let key = (x.min(y), x.max(y));
        if let Some(cl) = self.pair_cl.get(&key) {
            return cl.clone();
        }
        let cl = self
            .localized
            .table()
            .close(&ElementSet::from_slice(&[key.0, key.1]));
        self.pair_cl.insert(key, cl.clone());
        cl
    }

    /// Builds (or recalls) the projective plane of the localized operator
    /// on `carrier`; a cached `Err` marks a carrier that cannot host the
    /// configuration.
    fn ensure_plane(&mut self, carrier: &ElementSet) -> Result<(), GroupError> {
        if self.planes.contains_key(carrier) {
            return Ok(());
        }
        let restricted = self.localized.restrict(carrier)?;
        let entry = if restricted.rank_total() != 3 {
            Err(Degeneracy::CarrierRankNot3 {
                rank: restricted.rank_total(),
            })
        } else {
            let geometry = geometrize(&restricted)?.expect_geometry();
            let plane = Plane::from_geometry(&geometry, PlaneMode::Projective)?;
            let carrier_vec: Vec<usize> = carrier.iter().collect();
            let mut point_of = vec![None; self.gp.order()];
            for (ridx, &ground_elem) in carrier_vec.iter().enumerate() {
                point_of[ground_elem] = geometry.class_of(ridx);
            }
            Ok(PlaneCtx {
                plane,
                carrier_vec,
                point_of,
            })
        };
        self.planes.insert(carrier.clone(), entry);
        Ok(())
    }

    /// Evaluates one ordered triple.
    fn triple(&mut self, a: usize, b: usize, c: usize) -> Result<TripleOutcome, GroupError> {
        // admissibility: dim(a,b/A) = 2, c ∉ cl_A(a,b)
        if self.loops.contains(a) || self.cl1[a].contains(b) {
            return Ok(TripleOutcome::NotAdmissible);
        }
        let cl_ab_pair = self.pair_closure(a, b);
        if cl_ab_pair.contains(c) {
            return Ok(TripleOutcome::NotAdmissible);
        }

        let g = &self.gp.group;
        let ab = g.mul(a, b);
        let ac = g.mul(a, c);
        let ba = g.mul(b, a);
        let ca = g.mul(c, a);
        let c_inv_b = g.mul(g.inv(c), b);
        let b_c_inv = g.mul(b, g.inv(c));

        let carrier = self.localized.table().close(&cl_ab_pair.with(c));
        for x in [ab, ac, ba, ca] {
            if !carrier.contains(x) {
                return Ok(TripleOutcome::Degenerate(Degeneracy::ProductOutsideCarrier {
                    element: x,
                }));
            }
            if self.loops.contains(x) {
                return Ok(TripleOutcome::Degenerate(Degeneracy::ProductIsLoop {
                    element: x,
                }));
            }
        }

        let clcom_hypothesis = self.cl1[ab].contains(ba);
        let membership_first = {
            let l_bc = self.pair_closure(b, c);
            let l_ab_ac = self.pair_closure(ab, ac);
            l_bc.contains(c_inv_b) && l_ab_ac.contains(c_inv_b)
        };
        let membership_second = {
            let l_bc = self.pair_closure(b, c);
            let l_ba_ca = self.pair_closure(ba, ca);
            l_bc.contains(b_c_inv) && l_ba_ca.contains(b_c_inv)
        };

        self.ensure_plane(&carrier)?;
        let ctx = match &self.planes[&carrier] {
            Ok(ctx) => ctx,
            Err(d) => return Ok(TripleOutcome::Degenerate(d.clone())),
        };

        let endpoints = [(b, c), (ab, ac), (ba, ca)];
        let mut line_ids = [0usize; 3];
        for (slot, (p, q)) in line_ids.iter_mut().zip(endpoints) {
            let (pi, qi) = match (ctx.point_of[p], ctx.point_of[q]) {
                (Some(pi), Some(qi)) if pi != qi => (pi, qi),
                _ => {
                    return Ok(TripleOutcome::Degenerate(Degeneracy::CoincidentEndpoints {
                        p,
                        q,
                    }))
                }
            };
            *slot = ctx
                .plane
                .line_id_of_pair_idx(pi, qi)
                .expect("plane has a line through each point pair");
        }

        let to_ground = |idx: usize| ctx.carrier_vec[ctx.plane.label_of_idx(idx)];
        let distinct: Vec<usize> = {
            let mut v = line_ids.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let result = match distinct.len() {
            3 => {
                let raw = ctx.plane.concurrency_ids(line_ids[0], line_ids[1], line_ids[2])?;
                relabel_concurrency(raw, &ctx.carrier_vec)
            }
            2 => {
                let common = ctx
                    .plane
                    .meet_idx(distinct[0], distinct[1])
                    .expect("projective planes have all meets");
                ConcurrencyResult {
                    concurrent: true,
                    common_point: Some(to_ground(common)),
                    pairwise_meets: None,
                }
            }
            _ => {
                let least = ctx.plane.line_points_idx(line_ids[0]).first().unwrap();
                ConcurrencyResult {
                    concurrent: true,
                    common_point: Some(to_ground(least)),
                    pairwise_meets: None,
                }
            }
        };

        let lines = line_ids.map(|lid| {
            ctx.plane
                .line_points_idx(lid)
                .iter()
                .map(to_ground)
                .collect::<ElementSet>()
        });

        Ok(TripleOutcome::Checked(ConfigurationWitness {
            base: self.base.clone(),
            a,
            b,
            c,
            lines,
            result,
            membership_first,
            membership_second,
            clcom_hypothesis,
        }))
    }
}

fn relabel_concurrency(raw: ConcurrencyResult, carrier: &[usize]) -> ConcurrencyResult {
    // plane labels are restricted-ground indices; lift them to the
    // original ground through the carrier
    let lift = |label: usize| carrier[label];
    ConcurrencyResult {
        concurrent: raw.concurrent,
        common_point: raw.common_point.map(lift),
        pairwise_meets: raw.pairwise_meets.map(|(d1, d2, d3)| (lift(d1), lift(d2), lift(d3))),
    }
}

/// Evaluates a single configuration triple.
pub fn configuration_triple(
    gp: &GroupPregeometry,
    base: &ElementSet,
    a: usize,
    b: usize,
    c: usize,
) -> Result<TripleOutcome, GroupError> {
    for x in [a, b, c] {
        gp.matroid()
            .ground()
            .check_index(x)
            .map_err(GroupError::Matroid)?;
    }
    ConfigScanner::new(gp, base)?.triple(a, b, c)
}

/// Scans every admissible (a,b,c) and aggregates concurrency and
/// membership verdicts.
pub fn check_configuration(
    gp: &GroupPregeometry,
    base: &ElementSet,
) -> Result<ConfigurationScan, GroupError> {
    let mut scanner = ConfigScanner::new(gp, base)?;
    let n = gp.order();
    let mut summary = ConfigurationSummary::default();
    let mut failures = Vec::new();
    let mut sample = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                match scanner.triple(a, b, c)? {
                    TripleOutcome::NotAdmissible => {}
                    TripleOutcome::Degenerate(_) => {
                        summary.total += 1;
                        summary.degenerate += 1;
                    }
                    TripleOutcome::Checked(witness) => {
                        summary.total += 1;
                        let memberships_ok = witness.membership_first && witness.membership_second;
                        if !memberships_ok {
                            summary.membership_failures += 1;
                        }
                        if witness.clcom_hypothesis {
                            summary.clcom_hypothesis_count += 1;
                        }
                        if witness.result.concurrent && memberships_ok {
                            summary.concurrent += 1;
                        } else {
                            summary.failed += 1;
                            if failures.len() < MAX_KEPT_FAILURES {
                                failures.push(witness.clone());
                            }
                        }
                        if sample.is_none() {
                            sample = Some(witness);
                        }
                    }
                }
            }
        }
    }
    Ok(ConfigurationScan {
        summary,
        failures,
        sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    fn z4_trivial() -> GroupPregeometry {
        GroupPregeometry::new(catalog::cyclic_group(4), catalog::trivial_matroid(4, &[0])).unwrap()
    }

    fn s3_trivial() -> GroupPregeometry {
        GroupPregeometry::new(catalog::symmetric_group_3(), catalog::trivial_matroid(6, &[0]))
            .unwrap()
    }

    fn vector_gp(q: u64, d: u32) -> GroupPregeometry {
        GroupPregeometry::new(
            catalog::vector_group(q, d),
            catalog::linear_matroid_checked(q, d),
        )
        .unwrap()
    }

    #[test]
    fn compatibility_examples() {
        // (Z3)^2 with its linear matroid: structural fast path
        let gp = vector_gp(3, 2);
        assert_eq!(*gp.compatibility(), CompatibilityVerdict::Structural);

        // Z4 with a loop-at-identity trivial pregeometry: exhaustive
        let gp = z4_trivial();
        assert!(matches!(
            gp.compatibility(),
            CompatibilityVerdict::Exhaustive { automorphisms: 2 }
        ));

        // Z4 with flats {∅,{0},{0,1},{0,1,2,3}}: x↦3x breaks {0,1}
        let table = crate::constructors::explicit_from_flats(
            4,
            vec![ElementSet::empty(), set(&[0]), set(&[0, 1])],
        )
        .unwrap();
        match check_compatibility(&catalog::cyclic_group(4), &table).unwrap() {
            Compatibility::Incompatible { auto, flat } => {
                assert_eq!(auto.as_slice(), &[0, 3, 2, 1]);
                assert_eq!(flat, set(&[0, 1]));
            }
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn ground_mismatch_is_input_error() {
        let result = GroupPregeometry::new(
            catalog::cyclic_group(4),
            catalog::trivial_matroid(5, &[]),
        );
        assert!(matches!(result, Err(GroupError::GroundMismatch { .. })));
    }

    #[test]
    fn homogeneity_passes_on_vector_groups() {
        assert!(check_finite_homogeneity(&vector_gp(2, 3), 1).unwrap().passed());
        assert!(check_finite_homogeneity(&vector_gp(3, 2), 1).unwrap().passed());
        assert!(check_finite_homogeneity(&vector_gp(3, 2), 2).unwrap().passed());
    }

    #[test]
    fn homogeneity_fails_on_s3_trivial_with_stated_witness() {
        let outcome = check_finite_homogeneity(&s3_trivial(), 2).unwrap();
        let w = outcome.witness.expect("S3 automorphisms preserve cycle type");
        assert_eq!(w.base, ElementSet::empty());
        assert_eq!((w.b, w.c), (1, 4)); // (12) cannot go to (123)
    }

    #[test]
    fn homogeneity_fails_on_z4_trivial_with_stated_witness() {
        let outcome = check_finite_homogeneity(&z4_trivial(), 2).unwrap();
        let w = outcome.witness.unwrap();
        assert_eq!(w.base, ElementSet::empty());
        assert_eq!((w.b, w.c), (1, 2));
    }

    #[test]
    fn invariant_elements_on_vector_groups() {
        assert!(check_invariant_elements(&vector_gp(2, 3), 1).unwrap().passed());
        assert!(check_invariant_elements(&vector_gp(3, 2), 1).unwrap().passed());
    }

    #[test]
    fn generic_product_passes_on_vector_groups() {
        assert!(check_generic_product(&vector_gp(3, 2), 1).unwrap().passed());
        assert!(check_generic_product(&vector_gp(2, 3), 2).unwrap().passed());
    }

    #[test]
    fn generic_product_fails_on_z4_trivial() {
        let outcome = check_generic_product(&z4_trivial(), 0).unwrap();
        let w = outcome.witness.unwrap();
        assert_eq!(w.base, ElementSet::empty());
        // least (a, b): a=1, b=3, since 1·3 = 0 ∈ cl({3}) = {0,3}
        assert_eq!((w.a, w.b), (1, 3));
    }

    #[test]
    fn invariant_subgroups_pass_on_vector_groups() {
        assert!(check_invariant_subgroups(&vector_gp(2, 3), 1).unwrap().passed());
        assert!(check_invariant_subgroups(&vector_gp(3, 2), 1).unwrap().passed());
    }

    #[test]
    fn invariant_subgroups_fail_on_z4_trivial() {
        let outcome = check_invariant_subgroups(&z4_trivial(), 0).unwrap();
        let w = outcome.witness.unwrap();
        assert_eq!(w.base, ElementSet::empty());
        assert_eq!(w.subgroup, set(&[0, 2]));
    }

    #[test]
    fn clcom_on_commutative_instances() {
        for gp in [vector_gp(3, 2), vector_gp(2, 3)] {
            let report = check_clcom_commutativity(&gp, &ElementSet::empty()).unwrap();
            assert_eq!(report.verdict, PropVerdict::Pass);
            assert!(matches!(report.hypothesis, ClcomHypothesis::Met { .. }));
            assert_eq!(report.conclusion, Some(true));
            if let ClcomHypothesis::Met { commuting_pair, .. } = report.hypothesis {
                assert!(commuting_pair);
            }
        }
        // with a one-element base
        let gp = vector_gp(2, 3);
        let report = check_clcom_commutativity(&gp, &set(&[1])).unwrap();
        assert_eq!(report.verdict, PropVerdict::Pass);
        assert_eq!(report.homogeneity_kmax, 3);
    }

    #[test]
    fn clcom_vacuous_on_s3_trivial() {
        let report = check_clcom_commutativity(&s3_trivial(), &ElementSet::empty()).unwrap();
        assert_eq!(report.verdict, PropVerdict::Vacuous);
        assert_eq!(report.hypothesis, ClcomHypothesis::NotEvaluated);
        assert!(!report.homogeneity.passed());
    }

    #[test]
    fn configuration_triple_on_z3_cubed() {
        let gp = vector_gp(3, 3);
        // a=e1, b=e2, c=e3
        let (a, b, c) = (1, 3, 9);
        let outcome = configuration_triple(&gp, &ElementSet::empty(), a, b, c).unwrap();
        let w = match outcome {
            TripleOutcome::Checked(w) => w,
            other => panic!("expected a checked triple, got {other:?}"),
        };
        assert!(w.result.concurrent);
        assert!(w.membership_first);
        assert!(w.membership_second);
        assert!(w.clcom_hypothesis);
        // common point is the class of b - c = b + 2c
        let g = gp.group();
        let b_minus_c = g.mul(b, g.inv(c));
        let class: ElementSet = gp
            .matroid()
            .table()
            .close(&ElementSet::singleton(b_minus_c))
            .difference(&gp.matroid().loops());
        assert_eq!(w.result.common_point, Some(class.first().unwrap()));
        // the witness re-checks against the closure oracle
        let cl_bc = gp.matroid().table().close(&set(&[b, c]));
        let c_inv_b = g.mul(g.inv(c), b);
        assert!(cl_bc.contains(c_inv_b));
    }

    #[test]
    fn configuration_scan_z2_4() {
        let gp = vector_gp(2, 4);
        let scan = check_configuration(&gp, &ElementSet::empty()).unwrap();
        // a: 15 non-loops, b: 14 outside cl(a), c: 12 outside cl(a,b)
        assert_eq!(scan.summary.total, 15 * 14 * 12);
        assert_eq!(scan.summary.concurrent, scan.summary.total);
        assert_eq!(scan.summary.degenerate, 0);
        assert_eq!(scan.summary.failed, 0);
        assert_eq!(scan.summary.membership_failures, 0);
        // abelian group: the hypothesis bit holds everywhere
        assert_eq!(scan.summary.clcom_hypothesis_count, scan.summary.total);
        assert!(scan.failures.is_empty());
        assert!(scan.sample.is_some());
    }

    #[test]
    fn configuration_errors_on_rank_zero() {
        let gp = GroupPregeometry::new(
            catalog::cyclic_group(4),
            catalog::trivial_matroid(4, &[0, 1, 2, 3]),
        )
        .unwrap();
        assert!(matches!(
            check_configuration(&gp, &ElementSet::empty()),
            Err(GroupError::NoNonLoopElement)
        ));
    }

    #[test]
    fn configuration_propagates_not_projective() {
        // the affine plane over GF(2)^2 has parallel two-point lines, so
        // the first built plane fails the projectivity requirement
        let gp = GroupPregeometry::new(
            catalog::vector_group(2, 2),
            catalog::affine_matroid_checked(2, 2),
        )
        .unwrap();
        let result = check_configuration(&gp, &ElementSet::empty());
        assert!(matches!(
            result,
            Err(GroupError::Plane(crate::error::PlaneError::NotProjective { .. }))
        ));
    }

    #[test]
    fn configuration_on_s3_trivial_is_all_degenerate() {
        // products of generic pairs leave the four-element carrier (or hit
        // the identity loop), so no triple realizes the configuration
        let gp = s3_trivial();
        let scan = check_configuration(&gp, &ElementSet::empty()).unwrap();
        assert!(scan.summary.total > 0);
        assert_eq!(scan.summary.degenerate, scan.summary.total);
        assert_eq!(scan.summary.failed, 0);
        assert_eq!(scan.summary.concurrent, 0);
    }

    #[test]
    fn kmax_is_capped() {
        let gp = vector_gp(3, 2);
        assert!(matches!(
            check_finite_homogeneity(&gp, 4),
            Err(GroupError::KmaxTooLarge(4))
        ));
    }
}
