//! Named groups and matroids used throughout the test and verification
//! suites: prime-field matroids, trivial pregeometries, the Fano plane,
//! cyclic/symmetric/quaternion groups and elementary abelian groups.

use crate::closure::{ClosureTable, FieldTable};
use crate::constructors::{self, FieldSpec};
use crate::group::FiniteGroup;
use crate::matroid::Matroid;
use crate::set::ElementSet;

pub fn cyclic_group(n: usize) -> FiniteGroup {
    let table: Vec<usize> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i + j) % n))
        .collect();
    FiniteGroup::from_table(n, table).expect("cyclic table is a group")
}

/// S3 with the conventional index order e, (12), (13), (23), (123), (132);
/// the product i·j composes j first.
pub fn symmetric_group_3() -> FiniteGroup {
    // images of 1,2,3 under each permutation
    let perms: [[usize; 3]; 6] = [
        [1, 2, 3], // e
        [2, 1, 3], // (12)
        [3, 2, 1], // (13)
        [1, 3, 2], // (23)
        [2, 3, 1], // (123)
        [3, 1, 2], // (132)
    ];
    let compose = |s: &[usize; 3], t: &[usize; 3]| -> [usize; 3] {
        [s[t[0] - 1], s[t[1] - 1], s[t[2] - 1]]
    };
    let index_of = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
    let table: Vec<usize> = perms
        .iter()
        .flat_map(|s| perms.iter().map(move |t| index_of(&compose(s, t))))
        .collect();
    FiniteGroup::from_table(6, table).expect("S3 table is a group")
}

/// Q8 with indices 0..7 for 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion_group() -> FiniteGroup {
    // axis products: entry [a][b] = (axis, sign flip) for a·b over axes 1,i,j,k
    const AXIS: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let table: Vec<usize> = (0..8)
        .flat_map(|x: usize| {
            (0..8).map(move |y: usize| {
                let (ax, sx) = (x / 2, x % 2 == 1);
                let (ay, sy) = (y / 2, y % 2 == 1);
                let (az, flip) = AXIS[ax][ay];
                let sz = sx ^ sy ^ flip;
                2 * az + usize::from(sz)
            })
        })
        .collect();
    FiniteGroup::from_table(8, table).expect("Q8 table is a group")
}

/// The additive group of GF(q)^d with positional indexing (order q^d ≤ 256).
pub fn vector_group(q: u64, d: u32) -> FiniteGroup {
    let f = FieldTable::new(q, d).expect("valid field spec");
    let n = f.size();
    assert!(n <= 256, "vector group order {n} too large for a Cayley table");
    let table: Vec<usize> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| f.add_index(i, j))
        .collect();
    FiniteGroup::from_table(n, table).expect("vector addition is a group")
}

pub fn linear_table(q: u64, d: u32) -> ClosureTable {
    constructors::linear_matroid(FieldSpec::new(q, d).expect("valid field spec"))
}

pub fn affine_table(q: u64, d: u32) -> ClosureTable {
    constructors::affine_matroid(FieldSpec::new(q, d).expect("valid field spec"))
}

pub fn linear_matroid_checked(q: u64, d: u32) -> Matroid {
    Matroid::validate(linear_table(q, d)).expect("linear span is a pregeometry")
}

pub fn affine_matroid_checked(q: u64, d: u32) -> Matroid {
    Matroid::validate(affine_table(q, d)).expect("affine hull is a pregeometry")
}

pub fn trivial_matroid(ground_size: usize, loops: &[usize]) -> Matroid {
    let table = constructors::trivial_pregeometry(ground_size, ElementSet::from_slice(loops))
        .expect("loops in range");
    Matroid::validate(table).expect("trivial closure is a pregeometry")
}

/// The Fano plane as an explicit rank-3 matroid on 7 points (the
/// nonzero vectors of GF(2)^3, labelled 1..7 shifted down to 0..6).
pub fn fano_matroid() -> Matroid {
    let mut flats: Vec<ElementSet> = vec![ElementSet::empty()];
    flats.extend((0..7).map(ElementSet::singleton));
    for lines in FANO_LINES {
        flats.push(ElementSet::from_slice(&lines));
    }
    let table = constructors::explicit_from_flats(7, flats).expect("flats in range");
    Matroid::validate(table).expect("the Fano plane is a matroid")
}

/// Lines of the Fano plane on points 0..6 (xor triples of 1..7 shifted).
pub const FANO_LINES: [[usize; 3]; 7] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [1, 3, 5],
    [1, 4, 6],
    [2, 3, 6],
    [2, 4, 5],
];

/// All invertible linear maps of GF(q)^d as ground-set permutations,
/// sorted by image tuple. Feasible only for tiny q^(d·d).
pub fn invertible_linear_ground_maps(q: u64, d: u32) -> Vec<Vec<usize>> {
    let f = FieldTable::new(q, d).expect("valid field spec");
    let n = f.size();
    let cells = (d * d) as usize;
    assert!(
        (n as u64).checked_pow(d).map_or(false, |c| c <= 1 << 20),
        "matrix space q^{cells} too large to enumerate"
    );
    let mut maps = Vec::new();
    // columns = images of the d basis vectors, each any ground index
    let mut cols = vec![0usize; d as usize];
    'outer: loop {
        let mut map = Vec::with_capacity(n);
        let mut hit = vec![false; n];
        let mut bijective = true;
        for x in 0..n {
            let digits = f.decode(x);
            let mut image = vec![0u64; d as usize];
            for (c, &col) in digits.iter().zip(&cols) {
                let colv = f.decode(col);
                for (acc, v) in image.iter_mut().zip(&colv) {
                    *acc = (*acc + c * v) % q;
                }
            }
            let y = f.encode(&image);
            if hit[y] {
                bijective = false;
                break;
            }
            hit[y] = true;
            map.push(y);
        }
        if bijective {
            maps.push(map);
        }
        for pos in (0..cols.len()).rev() {
            cols[pos] += 1;
            if cols[pos] < n {
                continue 'outer;
            }
            cols[pos] = 0;
        }
        break;
    }
    maps.sort();
    maps
}

/// A named matroid catalog entry.
pub struct CatalogEntry {
    pub name: &'static str,
    pub matroid: Matroid,
}

fn entry(name: &'static str, matroid: Matroid) -> CatalogEntry {
    CatalogEntry { name, matroid }
}

/// Catalog matroids on grounds small enough for exhaustive work (≤ 16).
pub fn small_catalog() -> Vec<CatalogEntry> {
    vec![
        entry("linear-gf(2)^2", linear_matroid_checked(2, 2)),
        entry("linear-gf(2)^3", linear_matroid_checked(2, 3)),
        entry("linear-gf(2)^4", linear_matroid_checked(2, 4)),
        entry("linear-gf(3)^2", linear_matroid_checked(3, 2)),
        entry("affine-gf(2)^2", affine_matroid_checked(2, 2)),
        entry("affine-gf(2)^3", affine_matroid_checked(2, 3)),
        entry("affine-gf(2)^4", affine_matroid_checked(2, 4)),
        entry("affine-gf(3)^2", affine_matroid_checked(3, 2)),
        entry("trivial-1", trivial_matroid(1, &[])),
        entry("trivial-4", trivial_matroid(4, &[])),
        entry("trivial-4-loop0", trivial_matroid(4, &[0])),
        entry("trivial-6-loop0", trivial_matroid(6, &[0])),
        entry("trivial-8", trivial_matroid(8, &[])),
        entry("fano", fano_matroid()),
    ]
}

/// The full catalog: the small one plus larger fields up to ground 81.
pub fn full_catalog() -> Vec<CatalogEntry> {
    let mut list = small_catalog();
    list.push(entry("linear-gf(5)^2", linear_matroid_checked(5, 2)));
    list.push(entry("linear-gf(3)^3", linear_matroid_checked(3, 3)));
    list.push(entry("linear-gf(3)^4", linear_matroid_checked(3, 4)));
    list.push(entry("affine-gf(5)^2", affine_matroid_checked(5, 2)));
    list.push(entry("affine-gf(3)^3", affine_matroid_checked(3, 3)));
    list
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_composition_convention() {
        let s3 = symmetric_group_3();
        // (12)·(13) applies (13) first: 1→3→3, 3→1→2, 2→2→1, i.e. (132)
        assert_eq!(s3.mul(1, 2), 5);
        assert_eq!(s3.mul(2, 1), 4);
    }

    #[test]
    fn q8_relations() {
        let q8 = quaternion_group();
        // i·i = -1, i·j = k, j·i = -k
        assert_eq!(q8.mul(2, 2), 1);
        assert_eq!(q8.mul(2, 4), 6);
        assert_eq!(q8.mul(4, 2), 7);
        assert_eq!(q8.element_order(1), 2);
        assert_eq!(q8.element_order(2), 4);
    }

    #[test]
    fn vector_group_is_elementary_abelian() {
        let g = vector_group(3, 2);
        assert_eq!(g.order(), 9);
        assert!(g.is_commutative());
        for x in 1..9 {
            assert_eq!(g.element_order(x), 3);
        }
        // e1 + e2 = (1,1) = index 4
        assert_eq!(g.mul(1, 3), 4);
    }

    #[test]
    fn fano_lines_are_xor_triples() {
        for [a, b, c] in FANO_LINES {
            assert_eq!((a + 1) ^ (b + 1), c + 1);
        }
    }

    #[test]
    fn catalogs_build() {
        assert_eq!(small_catalog().len(), 14);
        assert_eq!(full_catalog().len(), 19);
    }
}
