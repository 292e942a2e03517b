//! Rank-3 geometries as incidence planes.
//!
//! Points carry the labels inherited from geometrization (least source
//! representatives), so report output is stable. A plane built in
//! projective mode verifies up front that every two lines meet and fails
//! loudly otherwise; affine mode admits parallels and reports missing
//! meets per query.

use std::collections::HashMap;

use crate::classify::Geometry;
use crate::error::PlaneError;
use crate::set::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneMode {
    Projective,
    Affine,
}

impl PlaneMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlaneMode::Projective => "projective",
            PlaneMode::Affine => "affine",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Plane {
    mode: PlaneMode,
    /// point index -> label (ascending, so index order = label order)
    labels: Vec<usize>,
    label_to_idx: HashMap<usize, usize>,
    /// lines over point indices, lexicographically sorted
    lines: Vec<ElementSet>,
    /// point-pair -> line id
    line_of_pair: Vec<Vec<Option<usize>>>,
    /// line-pair -> meet point index (projective mode only pre-fills all)
    meets: Vec<Vec<Option<usize>>>,
    nondegenerate: bool,
}

/// Verdict of a three-line concurrency query. Points are labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrencyResult {
    pub concurrent: bool,
    pub common_point: Option<usize>,
    /// (d1, d2, d3) = the meets of (l1,l2), (l1,l3), (l2,l3) when not
    /// concurrent.
    pub pairwise_meets: Option<(usize, usize, usize)>,
}

/// A line-preserving point bijection, stored over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collineation {
    perm: Vec<usize>,
}

impl Collineation {
    pub fn identity(n: usize) -> Self {
        Collineation { perm: (0..n).collect() }
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn compose(&self, then: &Collineation) -> Collineation {
        Collineation {
            perm: self.perm.iter().map(|&i| then.perm[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Collineation {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        Collineation { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

impl Plane {
    /// Builds the incidence plane of a rank-3 geometry: points are the
    /// rank-1 flats, lines the rank-2 flats.
    pub fn from_geometry(g: &Geometry, mode: PlaneMode) -> Result<Plane, PlaneError> {
        let rank = g.base().rank_total();
        if rank != 3 {
            return Err(PlaneError::WrongRank { rank });
        }
        let n = g.point_count();
        let labels: Vec<usize> = g.representatives().to_vec();
        let label_to_idx: HashMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let lines = g.base().enumerate_flats(Some(2))?;

        let mut line_of_pair: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (lid, line) in lines.iter().enumerate() {
            let pts: Vec<usize> = line.iter().collect();
            for (i, &p) in pts.iter().enumerate() {
                for &q in &pts[i + 1..] {
                    line_of_pair[p][q] = Some(lid);
                    line_of_pair[q][p] = Some(lid);
                }
            }
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if line_of_pair[p][q].is_none() {
                    return Err(PlaneError::NoCommonLine {
                        p: labels[p],
                        q: labels[q],
                    });
                }
            }
        }

        let mut meets: Vec<Vec<Option<usize>>> = vec![vec![None; lines.len()]; lines.len()];
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                let common = lines[i].intersect(&lines[j]);
                let point = common.first();
                if mode == PlaneMode::Projective && point.is_none() {
                    return Err(PlaneError::NotProjective {
                        l1: relabel(&lines[i], &labels),
                        l2: relabel(&lines[j], &labels),
                    });
                }
                meets[i][j] = point;
                meets[j][i] = point;
            }
        }

        let three_per_line = lines.iter().all(|l| l.len() >= 3);
        let quad = has_quadrilateral(n, &line_of_pair, &lines);
        Ok(Plane {
            mode,
            labels,
            label_to_idx,
            lines,
            line_of_pair,
            meets,
            nondegenerate: three_per_line && quad,
        })
    }

    pub fn mode(&self) -> PlaneMode {
        self.mode
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// Points as stable labels, ascending.
    pub fn points(&self) -> &[usize] {
        &self.labels
    }

    /// Lines as label sets, lexicographically sorted.
    pub fn lines(&self) -> Vec<ElementSet> {
        self.lines.iter().map(|l| relabel(l, &self.labels)).collect()
    }

    /// Whether every line has three points and some four points are in
    /// general position. Reported, never gated on.
    pub fn nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    fn idx_of(&self, label: usize) -> Result<usize, PlaneError> {
        self.label_to_idx
            .get(&label)
            .copied()
            .ok_or(PlaneError::NoSuchPoint { point: label })
    }

    pub(crate) fn line_id_of_pair_idx(&self, p: usize, q: usize) -> Option<usize> {
        self.line_of_pair[p][q]
    }

    pub(crate) fn line_points_idx(&self, lid: usize) -> &ElementSet {
        &self.lines[lid]
    }

    pub(crate) fn meet_idx(&self, l1: usize, l2: usize) -> Option<usize> {
        self.meets[l1][l2]
    }

    pub(crate) fn label_of_idx(&self, idx: usize) -> usize {
        self.labels[idx]
    }

    fn resolve_line(&self, line: &ElementSet) -> Result<usize, PlaneError> {
        let as_idx: Option<ElementSet> = line
            .iter()
            .map(|l| self.label_to_idx.get(&l).copied())
            .collect::<Option<Vec<usize>>>()
            .map(ElementSet::from_iter);
        let as_idx = as_idx.ok_or_else(|| PlaneError::NoSuchLine { line: line.clone() })?;
        self.lines
            .binary_search(&as_idx)
            .map_err(|_| PlaneError::NoSuchLine { line: line.clone() })
    }

    /// The unique line through two distinct points (labels).
    pub fn line_through(&self, p: usize, q: usize) -> Result<ElementSet, PlaneError> {
        if p == q {
            return Err(PlaneError::SamePoint { point: p });
        }
        let (pi, qi) = (self.idx_of(p)?, self.idx_of(q)?);
        let lid = self.line_of_pair[pi][qi].ok_or(PlaneError::NoCommonLine { p, q })?;
        Ok(relabel(&self.lines[lid], &self.labels))
    }

    /// The common point (label) of two distinct lines (label sets).
    pub fn meet(&self, l1: &ElementSet, l2: &ElementSet) -> Result<usize, PlaneError> {
        let (a, b) = (self.resolve_line(l1)?, self.resolve_line(l2)?);
        if a == b {
            return Err(PlaneError::DuplicateLines { line: l1.clone() });
        }
        match self.meets[a][b] {
            Some(p) => Ok(self.labels[p]),
            None => Err(PlaneError::NoIntersection {
                l1: l1.clone(),
                l2: l2.clone(),
            }),
        }
    }

    /// Whether three pairwise distinct lines pass through one point.
    pub fn concurrency(
        &self,
        l1: &ElementSet,
        l2: &ElementSet,
        l3: &ElementSet,
    ) -> Result<ConcurrencyResult, PlaneError> {
        let ids = [
            self.resolve_line(l1)?,
            self.resolve_line(l2)?,
            self.resolve_line(l3)?,
        ];
        if ids[0] == ids[1] || ids[0] == ids[2] || ids[1] == ids[2] {
            let dup = if ids[0] == ids[1] { l1 } else { l3 };
            return Err(PlaneError::DuplicateLines { line: dup.clone() });
        }
        self.concurrency_ids(ids[0], ids[1], ids[2])
    }

    pub(crate) fn concurrency_ids(
        &self,
        a: usize,
        b: usize,
        c: usize,
    ) -> Result<ConcurrencyResult, PlaneError> {
        let meet_or = |x: usize, y: usize| {
            self.meets[x][y].ok_or_else(|| PlaneError::NoIntersection {
                l1: relabel(&self.lines[x], &self.labels),
                l2: relabel(&self.lines[y], &self.labels),
            })
        };
        let d1 = meet_or(a, b)?;
        let d2 = meet_or(a, c)?;
        let d3 = meet_or(b, c)?;
        if d1 == d2 && d2 == d3 {
            Ok(ConcurrencyResult {
                concurrent: true,
                common_point: Some(self.labels[d1]),
                pairwise_meets: None,
            })
        } else {
            Ok(ConcurrencyResult {
                concurrent: false,
                common_point: None,
                pairwise_meets: Some((self.labels[d1], self.labels[d2], self.labels[d3])),
            })
        }
    }

    /// Pushes a closure-preserving bijection of the source ground set
    /// through the quotient to a collineation of this plane.
    pub fn collineation_from(
        &self,
        g: &Geometry,
        ground_map: &[usize],
    ) -> Result<Collineation, PlaneError> {
        let n = g.source_ground().size();
        if ground_map.len() != n {
            return Err(PlaneError::NotABijection);
        }
        let mut hit = vec![false; n];
        for &y in ground_map {
            if y >= n || hit[y] {
                return Err(PlaneError::NotABijection);
            }
            hit[y] = true;
        }

        // closure preservation: the image of every flat is a flat
        let flats = g.source().enumerate_flats(None)?;
        let flat_set: std::collections::HashSet<&ElementSet> = flats.iter().collect();
        for flat in &flats {
            let image: ElementSet = flat.iter().map(|x| ground_map[x]).collect();
            if !flat_set.contains(&image) {
                return Err(PlaneError::NotAnAutomorphism { flat: flat.clone() });
            }
        }

        let mut perm = vec![0usize; self.labels.len()];
        for (idx, &label) in self.labels.iter().enumerate() {
            let image_class = g
                .class_of(ground_map[label])
                .expect("closure-preserving maps send non-loops to non-loops");
            perm[idx] = image_class;
        }

        for line in &self.lines {
            let image: ElementSet = line.iter().map(|p| perm[p]).collect();
            if self.lines.binary_search(&image).is_err() {
                return Err(PlaneError::NotAnAutomorphism {
                    flat: relabel(line, &self.labels),
                });
            }
        }
        Ok(Collineation { perm })
    }
}

fn relabel(idx_set: &ElementSet, labels: &[usize]) -> ElementSet {
    idx_set.iter().map(|i| labels[i]).collect()
}

/// Four points, no three collinear.
fn has_quadrilateral(n: usize, line_of_pair: &[Vec<Option<usize>>], lines: &[ElementSet]) -> bool {
    let collinear = |a: usize, b: usize, c: usize| -> bool {
        line_of_pair[a][b]
            .map(|lid| lines[lid].contains(c))
            .unwrap_or(false)
    };
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if collinear(a, b, c) {
                    continue;
                }
                for d in (c + 1)..n {
                    if !collinear(a, b, d) && !collinear(a, c, d) && !collinear(b, c, d) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::classify::geometrize;
    use crate::set::ElementSet;

    fn set(xs: &[usize]) -> ElementSet {
        ElementSet::from_slice(xs)
    }

    fn fano_plane() -> (Plane, Geometry) {
        let m = catalog::linear_matroid_checked(2, 3);
        let g = geometrize(&m).unwrap().expect_geometry();
        let p = Plane::from_geometry(&g, PlaneMode::Projective).unwrap();
        (p, g)
    }

    #[test]
    fn fano_shape() {
        let (p, _) = fano_plane();
        assert_eq!(p.point_count(), 7);
        assert_eq!(p.line_count(), 7);
        assert!(p.lines().iter().all(|l| l.len() == 3));
        assert!(p.nondegenerate());
        assert_eq!(p.points(), &[1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn affine_plane_of_order_three() {
        let m = catalog::affine_matroid_checked(3, 2);
        let g = geometrize(&m).unwrap().expect_geometry();
        assert!(matches!(
            Plane::from_geometry(&g, PlaneMode::Projective),
            Err(PlaneError::NotProjective { l1, l2 })
                if l1 == set(&[0, 1, 2]) && l2 == set(&[3, 4, 5])
        ));
        let p = Plane::from_geometry(&g, PlaneMode::Affine).unwrap();
        assert_eq!(p.point_count(), 9);
        assert_eq!(p.line_count(), 12);
    }

    #[test]
    fn wrong_rank_is_shape_error() {
        let m = catalog::linear_matroid_checked(2, 4);
        let g = geometrize(&m).unwrap().expect_geometry();
        assert!(matches!(
            Plane::from_geometry(&g, PlaneMode::Projective),
            Err(PlaneError::WrongRank { rank: 4 })
        ));
    }

    #[test]
    fn line_through_cases() {
        let (p, _) = fano_plane();
        assert_eq!(p.line_through(1, 2).unwrap(), set(&[1, 2, 3]));
        assert_eq!(p.line_through(1, 4).unwrap(), set(&[1, 4, 5]));
        assert_eq!(p.line_through(2, 4).unwrap(), set(&[2, 4, 6]));
        assert!(matches!(
            p.line_through(3, 3),
            Err(PlaneError::SamePoint { point: 3 })
        ));
    }

    #[test]
    fn meet_cases() {
        let (p, _) = fano_plane();
        assert_eq!(p.meet(&set(&[1, 2, 3]), &set(&[1, 4, 5])).unwrap(), 1);
        assert_eq!(p.meet(&set(&[1, 2, 3]), &set(&[3, 4, 7])).unwrap(), 3);

        let m = catalog::affine_matroid_checked(3, 2);
        let g = geometrize(&m).unwrap().expect_geometry();
        let affine = Plane::from_geometry(&g, PlaneMode::Affine).unwrap();
        assert!(matches!(
            affine.meet(&set(&[0, 1, 2]), &set(&[3, 4, 5])),
            Err(PlaneError::NoIntersection { .. })
        ));
    }

    #[test]
    fn projective_planes_meet_everywhere() {
        let (p, _) = fano_plane();
        let lines = p.lines();
        let mut pairs = 0;
        for (i, l1) in lines.iter().enumerate() {
            for l2 in &lines[i + 1..] {
                let point = p.meet(l1, l2).unwrap();
                assert!(l1.contains(point) && l2.contains(point));
                assert_eq!(l1.intersect(l2).len(), 1);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 21);
    }

    #[test]
    fn concurrency_cases() {
        let (p, _) = fano_plane();
        let r = p
            .concurrency(&set(&[1, 2, 3]), &set(&[1, 4, 5]), &set(&[1, 6, 7]))
            .unwrap();
        assert!(r.concurrent);
        assert_eq!(r.common_point, Some(1));

        let r = p
            .concurrency(&set(&[1, 2, 3]), &set(&[1, 4, 5]), &set(&[2, 4, 6]))
            .unwrap();
        assert!(!r.concurrent);
        assert_eq!(r.pairwise_meets, Some((1, 2, 4)));
        let (d1, d2, d3) = r.pairwise_meets.unwrap();
        assert!(d1 != d2 && d2 != d3 && d1 != d3);

        assert!(matches!(
            p.concurrency(&set(&[1, 2, 3]), &set(&[1, 2, 3]), &set(&[1, 4, 5])),
            Err(PlaneError::DuplicateLines { .. })
        ));
    }

    #[test]
    fn collineation_from_coordinate_swap() {
        let (p, g) = fano_plane();
        // swap the first two coordinates of GF(2)^3
        let swap: Vec<usize> = (0..8)
            .map(|x: usize| (x & 4) | ((x & 1) << 1) | ((x & 2) >> 1))
            .collect();
        let c = p.collineation_from(&g, &swap).unwrap();
        // labels: 1↔2, 5↔6 swapped; 3, 4, 7 fixed (label = idx+1)
        let labelled: Vec<usize> = (0..7).map(|i| p.label_of_idx(c.apply_idx(i))).collect();
        assert_eq!(labelled, vec![2, 1, 3, 4, 6, 5, 7]);

        let id = p.collineation_from(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn least_breaking_three_cycle_is_rejected() {
        // the standalone Fano matroid is its own geometry
        let m = catalog::fano_matroid();
        let g = geometrize(&m).unwrap().expect_geometry();
        let p = Plane::from_geometry(&g, PlaneMode::Projective).unwrap();
        // scan 3-cycles (i j k) in lex order for the least one that is
        // rejected; (0 1 2) maps line {0,3,4} to the non-line {1,3,4}
        let mut found = None;
        'scan: for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let mut map: Vec<usize> = (0..7).collect();
                    map[i] = j;
                    map[j] = k;
                    map[k] = i;
                    if let Err(PlaneError::NotAnAutomorphism { flat }) =
                        p.collineation_from(&g, &map)
                    {
                        found = Some(((i, j, k), flat));
                        break 'scan;
                    }
                }
            }
        }
        let ((i, j, k), flat) = found.expect("some 3-cycle breaks a line");
        assert_eq!((i, j, k), (0, 1, 2));
        assert_eq!(flat, set(&[0, 3, 4]));
    }

    #[test]
    fn induced_collineations_form_a_group_of_168() {
        let (p, g) = fano_plane();
        let maps = catalog::invertible_linear_ground_maps(2, 3);
        assert_eq!(maps.len(), 168);
        let collineations: Vec<Collineation> = maps
            .iter()
            .map(|m| p.collineation_from(&g, m).unwrap())
            .collect();
        let distinct: std::collections::HashSet<_> = collineations.iter().cloned().collect();
        assert_eq!(distinct.len(), 168);

        // sampled closure under composition and inverse
        for step in [1usize, 13, 59] {
            for (i, c) in collineations.iter().enumerate().step_by(17) {
                let other = &collineations[(i * step + 7) % 168];
                assert!(distinct.contains(&c.compose(other)));
                assert!(distinct.contains(&c.inverse()));
            }
        }
    }

    #[test]
    fn fixing_two_points_of_a_line_fixes_the_line() {
        let (p, g) = fano_plane();
        let maps = catalog::invertible_linear_ground_maps(2, 3);
        for ground_map in &maps {
            let c = p.collineation_from(&g, ground_map).unwrap();
            for lid in 0..p.line_count() {
                let line = p.line_points_idx(lid);
                let fixed = line.iter().filter(|&q| c.apply_idx(q) == q).count();
                if fixed >= 2 {
                    let image: ElementSet = line.iter().map(|q| c.apply_idx(q)).collect();
                    assert_eq!(&image, line);
                }
            }
        }
    }
}
