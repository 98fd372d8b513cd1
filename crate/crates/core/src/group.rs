//! Finite groups given by Cayley tables or permutation generators.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Construction cap for permutation closures.
pub const CLOSURE_CAP: usize = 4096;
/// Exhaustive associativity checking is done up to this order.
pub const EXHAUSTIVE_ASSOC_CAP: usize = 512;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("generated closure exceeds cap of {0} elements")]
    ClosureTooLarge(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid group spec: {0}")]
    BadSpec(String),
}

/// A finite group on elements 0..N-1.
///
/// Immutable after construction; the element order is fixed by the input
/// (row order for tables, generation order for permutation generators).
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    order: usize,
    cayley: Vec<usize>, // row-major, cayley[x*order + y] = x*y
    identity: usize,
    inverse: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cayley[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn cayley_row_major(&self) -> &[usize] {
        &self.cayley
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    /// Builds and validates a group from an explicit Cayley table.
    pub fn from_cayley_table(name: &str, table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!(
                    "row {i} has length {} but the table has {n} rows",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::NotAGroup(format!(
                        "entry {v} in row {i} is out of range 0..{n}"
                    )));
                }
            }
        }
        let cayley: Vec<usize> = table.iter().flatten().cloned().collect();
        Self::from_flat(name, n, cayley)
    }

    fn from_flat(name: &str, n: usize, cayley: Vec<usize>) -> Result<Self, GroupError> {
        let mul = |x: usize, y: usize| cayley[x * n + y];

        // Latin square check
        for x in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for y in 0..n {
                let r = mul(x, y);
                let c = mul(y, x);
                if row_seen[r] {
                    return Err(GroupError::NotAGroup(format!(
                        "row {x} repeats element {r}"
                    )));
                }
                if col_seen[c] {
                    return Err(GroupError::NotAGroup(format!(
                        "column {x} repeats element {c}"
                    )));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }

        // associativity: exhaustive at desk scale, seeded random triples above
        if n <= EXHAUSTIVE_ASSOC_CAP {
            for x in 0..n {
                for y in 0..n {
                    let xy = mul(x, y);
                    for z in 0..n {
                        if mul(xy, z) != mul(x, mul(y, z)) {
                            return Err(GroupError::NotAGroup(format!(
                                "associativity fails at ({x}, {y}, {z})"
                            )));
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10 * n * n {
                let x = rng.random_range(0..n);
                let y = rng.random_range(0..n);
                let z = rng.random_range(0..n);
                if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                    return Err(GroupError::NotAGroup(format!(
                        "associativity fails at ({x}, {y}, {z})"
                    )));
                }
            }
        }

        // identity
        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|x| mul(e, x) == x && mul(x, e) == x) {
                identity = Some(e);
                break;
            }
        }
        let identity =
            identity.ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;

        // inverses
        let mut inverse = vec![0usize; n];
        for x in 0..n {
            match (0..n).find(|&y| mul(x, y) == identity && mul(y, x) == identity) {
                Some(y) => inverse[x] = y,
                None => {
                    return Err(GroupError::NotAGroup(format!("element {x} has no inverse")))
                }
            }
        }

        // conjugacy classes, ordered by smallest member
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|g| mul(mul(g, x), inverse[g]))
                .collect();
            members.sort_unstable();
            members.dedup();
            let idx = classes.len();
            for &m in &members {
                class_of[m] = idx;
            }
            classes.push(members);
        }

        Ok(FiniteGroup {
            name: name.to_string(),
            order: n,
            cayley,
            identity,
            inverse,
            classes,
            class_of,
        })
    }

    /// Builds the closure of a set of permutations under composition.
    /// An empty generator list yields the trivial group.
    pub fn from_permutation_generators(
        name: &str,
        gens: &[Vec<usize>],
    ) -> Result<Self, GroupError> {
        let degree = gens.first().map(|g| g.len()).unwrap_or(1);
        for (i, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::InvalidPermutation(format!(
                    "generator {i} acts on {} points, expected {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &p in g {
                if p >= degree || seen[p] {
                    return Err(GroupError::InvalidPermutation(format!(
                        "generator {i} is not a permutation of 0..{degree}"
                    )));
                }
                seen[p] = true;
            }
        }

        let id: Vec<usize> = (0..degree).collect();
        let mut elements: Vec<Vec<usize>> = vec![id];
        let mut index = std::collections::HashMap::new();
        index.insert(elements[0].clone(), 0usize);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in gens {
                // compose: (p ∘ g)(x) = p[g[x]]
                let p = &elements[i];
                let q: Vec<usize> = (0..degree).map(|x| p[g[x]]).collect();
                if !index.contains_key(&q) {
                    if elements.len() >= CLOSURE_CAP {
                        return Err(GroupError::ClosureTooLarge(CLOSURE_CAP));
                    }
                    index.insert(q.clone(), elements.len());
                    frontier.push(elements.len());
                    elements.push(q);
                }
            }
        }

        let n = elements.len();
        let mut cayley = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = &elements[x];
                let q = &elements[y];
                // x*y acts as "apply y, then x"
                let r: Vec<usize> = (0..degree).map(|t| p[q[t]]).collect();
                cayley[x * n + y] = index[&r];
            }
        }
        Self::from_flat(name, n, cayley)
    }
}

/// On-disk description of a group: either an explicit table or generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match (&self.cayley, &self.generators) {
            (Some(table), None) => FiniteGroup::from_cayley_table(&self.name, table),
            (None, Some(gens)) => FiniteGroup::from_permutation_generators(&self.name, gens),
            (Some(_), Some(_)) => Err(GroupError::BadSpec(
                "fields \"cayley\" and \"generators\" are mutually exclusive".into(),
            )),
            (None, None) => Err(GroupError::BadSpec(
                "one of \"cayley\" or \"generators\" is required".into(),
            )),
        }
    }

    pub fn from_json(data: &str) -> Result<Self, GroupError> {
        serde_json::from_str(data).map_err(|e| GroupError::BadSpec(e.to_string()))
    }
}

/// Catalog constructors for the groups the test suites lean on.
pub mod catalog {
    use super::{FiniteGroup, GroupSpec};

    pub fn trivial() -> GroupSpec {
        GroupSpec {
            name: "trivial".into(),
            cayley: Some(vec![vec![0]]),
            generators: None,
        }
    }

    pub fn cyclic(n: usize) -> GroupSpec {
        assert!(n >= 1);
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        GroupSpec {
            name: format!("Z{n}"),
            cayley: Some(table),
            generators: None,
        }
    }

    /// Dihedral group of order 2n, elements r^i and r^i s.
    pub fn dihedral(n: usize) -> GroupSpec {
        assert!(n >= 1);
        let order = 2 * n;
        // element 2i   = r^i
        // element 2i+1 = r^i s     with s r = r^{-1} s
        let idx = |i: usize, s: bool| 2 * i + usize::from(s);
        let mut table = vec![vec![0usize; order]; order];
        for i in 0..n {
            for si in [false, true] {
                for j in 0..n {
                    for sj in [false, true] {
                        let (k, sk) = if !si {
                            ((i + j) % n, sj)
                        } else {
                            // r^i s r^j s^sj = r^{i-j} s^{1+sj}
                            (((i + n) - j) % n, !sj)
                        };
                        table[idx(i, si)][idx(j, sj)] = idx(k, sk);
                    }
                }
            }
        }
        GroupSpec {
            name: format!("D{n}"),
            cayley: Some(table),
            generators: None,
        }
    }

    /// Quaternion group {±1, ±i, ±j, ±k}.
    pub fn q8() -> GroupSpec {
        // order: 1, -1, i, -i, j, -j, k, -k
        let units = [
            (1i32, 0usize), // 1
            (-1, 0),        // -1
            (1, 1),         // i
            (-1, 1),        // -i
            (1, 2),         // j
            (-1, 2),        // -j
            (1, 3),         // k
            (-1, 3),        // -k
        ];
        // quaternion basis multiplication table on {1,i,j,k} with signs
        let base = |a: usize, b: usize| -> (i32, usize) {
            match (a, b) {
                (0, x) => (1, x),
                (x, 0) => (1, x),
                (1, 1) | (2, 2) | (3, 3) => (-1, 0),
                (1, 2) => (1, 3),
                (2, 1) => (-1, 3),
                (2, 3) => (1, 1),
                (3, 2) => (-1, 1),
                (3, 1) => (1, 2),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let find = |s: i32, u: usize| units.iter().position(|&p| p == (s, u)).unwrap();
        let mut table = vec![vec![0usize; 8]; 8];
        for (x, &(sx, ux)) in units.iter().enumerate() {
            for (y, &(sy, uy)) in units.iter().enumerate() {
                let (s, u) = base(ux, uy);
                table[x][y] = find(sx * sy * s, u);
            }
        }
        GroupSpec {
            name: "Q8".into(),
            cayley: Some(table),
            generators: None,
        }
    }

    pub fn s3() -> GroupSpec {
        GroupSpec {
            name: "S3".into(),
            cayley: None,
            generators: Some(vec![vec![1, 0, 2], vec![1, 2, 0]]),
        }
    }

    pub fn s4() -> GroupSpec {
        GroupSpec {
            name: "S4".into(),
            cayley: None,
            generators: Some(vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]),
        }
    }

    pub fn a4() -> GroupSpec {
        GroupSpec {
            name: "A4".into(),
            cayley: None,
            generators: Some(vec![vec![1, 0, 3, 2], vec![1, 2, 0, 3]]),
        }
    }

    /// Direct product via block Cayley table.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> GroupSpec {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut table = vec![vec![0usize; n]; n];
        for xa in 0..na {
            for xb in 0..nb {
                for ya in 0..na {
                    for yb in 0..nb {
                        let x = xa * nb + xb;
                        let y = ya * nb + yb;
                        table[x][y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
                    }
                }
            }
        }
        GroupSpec {
            name: format!("{}x{}", a.name, b.name),
            cayley: Some(table),
            generators: None,
        }
    }

    pub fn by_name(name: &str) -> Option<GroupSpec> {
        match name {
            "trivial" => Some(trivial()),
            "Q8" | "q8" => Some(q8()),
            "S3" | "s3" => Some(s3()),
            "S4" | "s4" => Some(s4()),
            "A4" | "a4" => Some(a4()),
            _ => {
                if let Some(n) = name.strip_prefix('Z').or(name.strip_prefix('z')) {
                    n.parse().ok().map(cyclic)
                } else if let Some(n) = name.strip_prefix('D').or(name.strip_prefix('d')) {
                    n.parse().ok().map(dihedral)
                } else {
                    None
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::from_cayley_table("t", &[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes().len(), 1);
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::from_cayley_table("Z2", &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.classes().len(), 2);
    }

    #[test]
    fn non_associative_table_rejected() {
        // 6x6 Latin square (a quasigroup) that is not associative
        let table = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 0, 3, 4, 5, 2],
            vec![2, 5, 0, 1, 3, 4],
            vec![3, 4, 1, 5, 2, 0],
            vec![4, 2, 5, 0, 1, 3],
            vec![5, 3, 4, 2, 0, 1],
        ];
        match FiniteGroup::from_cayley_table("bad", &table) {
            Err(GroupError::NotAGroup(msg)) => {
                assert!(msg.contains("associativity") || msg.contains("identity"), "{msg}")
            }
            other => panic!("expected NotAGroup, got {other:?}"),
        }
    }

    #[test]
    fn s3_from_generators() {
        let g = catalog::s3().build().unwrap();
        assert_eq!(g.order(), 6);
        let mut sizes: Vec<usize> = g.classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::from_permutation_generators("t", &[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn q8_structure() {
        let g = catalog::q8().build().unwrap();
        assert_eq!(g.order(), 8);
        let mut sizes: Vec<usize> = g.classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn q8_from_regular_action_matches_catalog() {
        // regular action of the catalog table gives back an isomorphic group
        let g = catalog::q8().build().unwrap();
        let n = g.order();
        let gens: Vec<Vec<usize>> = [2usize, 4] // i and j
            .iter()
            .map(|&x| (0..n).map(|y| g.mul(x, y)).collect())
            .collect();
        let h = FiniteGroup::from_permutation_generators("Q8", &gens).unwrap();
        assert_eq!(h.order(), 8);
        assert_eq!(h.classes().len(), 5);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let g = catalog::cyclic(7).build().unwrap();
        assert_eq!(g.classes().len(), 7);
        assert!(g.classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn class_invariance_under_conjugation() {
        let g = catalog::s4().build().unwrap();
        for x in g.elements() {
            for y in g.elements() {
                let conj = g.mul(g.mul(x, y), g.inv(x));
                assert_eq!(g.class_of(conj), g.class_of(y));
            }
        }
        let total: usize = g.classes().iter().map(|c| c.len()).sum();
        assert_eq!(total, g.order());
        assert_eq!(g.classes()[g.class_of(g.identity())].len(), 1);
    }

    #[test]
    fn rebuild_from_own_table_is_identity() {
        let g = catalog::dihedral(4).build().unwrap();
        let n = g.order();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| g.mul(x, y)).collect())
            .collect();
        let h = FiniteGroup::from_cayley_table("D4", &table).unwrap();
        assert_eq!(h.cayley_row_major(), g.cayley_row_major());
        assert_eq!(h.classes(), g.classes());
    }

    #[test]
    fn spec_rejects_both_fields() {
        let spec = GroupSpec {
            name: "x".into(),
            cayley: Some(vec![vec![0]]),
            generators: Some(vec![]),
        };
        assert!(matches!(spec.build(), Err(GroupError::BadSpec(_))));
    }
}
