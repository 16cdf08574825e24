//! Weyl groups as signed permutations, their action on subsets of simple
//! roots, and the exhaustive orbit classification of `2^Delta / ~W`.
//!
//! This module is the ground-truth oracle of the crate: orbits and residual
//! Weyl-group orders are computed by brute force over the full group, never
//! from closed forms.

use crate::rootdata::{build_root_datum, FamilyKind, GroupFamily, RootDatum, RootVector};
use crate::{Error, Result};
use itertools::Itertools;
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::HashSet;

/// A signed permutation: `(w.v)_i = signs[i] * v[perm^{-1}(i)]`,
/// i.e. coordinate j moves to position `perm[j]` picking up `signs[perm[j]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> WeylElement {
        WeylElement {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> WeylElement {
        debug_assert_eq!(perm.len(), signs.len());
        debug_assert!(signs.iter().all(|s| *s == 1 || *s == -1));
        WeylElement { perm, signs }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn act(&self, v: &RootVector) -> RootVector {
        let mut out = vec![0i64; v.len()];
        for (j, &c) in v.0.iter().enumerate() {
            let i = self.perm[j];
            out[i] = self.signs[i] as i64 * c;
        }
        RootVector(out)
    }

    pub fn compose(&self, inner: &WeylElement) -> WeylElement {
        let n = self.rank();
        let mut perm = vec![0usize; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            let i = self.perm[inner.perm[j]];
            perm[j] = i;
            signs[i] = self.signs[i] * inner.signs[inner.perm[j]];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.rank();
        let mut perm = vec![0usize; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            signs[j] = self.signs[self.perm[j]];
        }
        WeylElement { perm, signs }
    }

    /// Compact key for hashing during subgroup generation (n <= 12).
    fn key(&self) -> u64 {
        let mut k = 0u64;
        for (j, &p) in self.perm.iter().enumerate() {
            k |= (p as u64) << (4 * j);
        }
        for (i, &s) in self.signs.iter().enumerate() {
            if s < 0 {
                k |= 1u64 << (48 + i);
            }
        }
        k
    }

    /// The reflection s_alpha as a signed permutation, read off by acting on
    /// the basis vectors of `Z^n`.
    pub fn reflection_of(datum: &RootDatum, alpha: &RootVector) -> Result<WeylElement> {
        let n = datum.ambient_rank();
        let mut perm = vec![0usize; n];
        let mut signs = vec![1i8; n];
        for k in 0..n {
            let mut e = vec![0i64; n];
            e[k] = 1;
            let img = datum.reflect(alpha, &RootVector(e))?;
            let nonzero: Vec<(usize, i64)> = img
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (i, *c))
                .collect();
            match nonzero.as_slice() {
                [(i, c)] if c.abs() == 1 => {
                    perm[k] = *i;
                    signs[*i] = *c as i8;
                }
                _ => {
                    return Err(Error::Inconsistency(format!(
                        "reflection in {alpha} is not a signed permutation"
                    )))
                }
            }
        }
        Ok(WeylElement { perm, signs })
    }
}

/// A subset of the simple roots, as a bitmask over node indices 1..=d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_nodes(nodes: &[usize]) -> Subset {
        let mut bits = 0u32;
        for &i in nodes {
            assert!(i >= 1, "node indices are 1-based");
            bits |= 1 << (i - 1);
        }
        Subset(bits)
    }

    pub fn full(d: usize) -> Subset {
        Subset(((1u64 << d) - 1) as u32)
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0 & (1 << (node - 1)) != 0
    }

    pub fn nodes(&self) -> Vec<usize> {
        (1..=32).filter(|i| self.contains(*i)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn complement(&self, d: usize) -> Subset {
        Subset(!self.0 & Subset::full(d).0)
    }

    /// Lexicographic order on the ascending node lists, e.g. {1,4} < {2,3}.
    pub fn lex_cmp(&self, other: &Subset) -> std::cmp::Ordering {
        self.nodes().cmp(&other.nodes())
    }
}

impl std::fmt::Display for Subset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.nodes().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

fn check_bound(family: GroupFamily, bound: usize) -> Result<()> {
    if family.n > bound {
        return Err(Error::EnumerationBound {
            rank: family.n,
            bound,
            required: family.weyl_order(),
        });
    }
    Ok(())
}

/// Streams every Weyl group element exactly once, in a deterministic order
/// (permutations lexicographically, sign patterns by ascending bitmask).
pub fn enumerate_weyl(
    family: GroupFamily,
    bound: usize,
) -> Result<impl Iterator<Item = WeylElement>> {
    check_bound(family, bound)?;
    let n = family.n;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let sign_masks: Vec<u32> = match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => vec![0],
        FamilyKind::Sp | FamilyKind::SoOdd => (0..1u32 << n).collect(),
        FamilyKind::SoEven => (0..1u32 << n).filter(|m| m.count_ones() % 2 == 0).collect(),
    };
    Ok(perms.into_iter().flat_map(move |perm| {
        let masks = sign_masks.clone();
        masks.into_iter().map(move |mask| {
            let signs = (0..perm.len())
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            WeylElement::new(perm.clone(), signs)
        })
    }))
}

/// Whether a signed permutation satisfies the family's sign constraint.
pub fn is_family_element(family: GroupFamily, w: &WeylElement) -> bool {
    let flips = w.signs.iter().filter(|s| **s < 0).count();
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => flips == 0,
        FamilyKind::Sp | FamilyKind::SoOdd => true,
        FamilyKind::SoEven => flips % 2 == 0,
    }
}

/// Image of `{w.alpha : alpha in I}`; `None` when some image is not simple.
pub fn act_on_subset(w: &WeylElement, i: Subset, datum: &RootDatum) -> Option<Subset> {
    let mut out = 0u32;
    for node in i.nodes() {
        let img = w.act(datum.simple_root(node));
        match datum.simple_node_of(&img) {
            Some(j) => out |= 1 << (j - 1),
            None => return None,
        }
    }
    Some(Subset(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: Subset,
    pub members: Vec<Subset>,
}

impl OrbitClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn root(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = i;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.root(i), self.root(j));
        if ri < rj {
            self.parent[rj] = ri;
        } else if rj < ri {
            self.parent[ri] = rj;
        }
    }
}

/// Orbit classes of `2^Delta` under the full Weyl action, by brute force.
///
/// Classes partition the power set; the representative is the
/// lexicographically smallest member and the output ordering follows it.
pub fn subset_orbits(family: GroupFamily, bound: usize) -> Result<Vec<OrbitClass>> {
    check_bound(family, bound)?;
    let datum = build_root_datum(family);
    let d = family.delta_size();
    let masks = 1usize << d;
    let mut uf = UnionFind::new(masks);

    for w in enumerate_weyl(family, bound)? {
        // Image of each simple node, or None if it leaves Delta.
        let table: Vec<Option<usize>> = (1..=d)
            .map(|node| datum.simple_node_of(&w.act(datum.simple_root(node))))
            .collect();
        'mask: for m in 0..masks {
            let mut img = 0usize;
            let mut rest = m;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                match table[b] {
                    Some(j) => img |= 1 << (j - 1),
                    None => continue 'mask,
                }
            }
            uf.union(m, img);
        }
    }

    let mut groups: Vec<Vec<Subset>> = vec![Vec::new(); masks];
    for m in 0..masks {
        let r = uf.root(m);
        groups[r].push(Subset(m as u32));
    }
    let mut classes: Vec<OrbitClass> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|mut members| {
            members.sort_by(|a, b| a.lex_cmp(b));
            OrbitClass {
                representative: members[0],
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.lex_cmp(&b.representative));
    Ok(classes)
}

/// Exact solve of `r = sum c_k alpha_k` over the simple roots; the
/// coefficients of a root are always integers.
fn delta_coordinates(datum: &RootDatum, r: &RootVector) -> Option<Vec<i64>> {
    let simple = datum.simple_roots();
    let d = simple.len();
    let n = datum.ambient_rank();
    // Columns: simple roots; augmented with r. Gaussian elimination over Q.
    let mut m: Vec<Vec<Rational64>> = (0..n)
        .map(|row| {
            (0..=d)
                .map(|col| {
                    if col < d {
                        Rational64::from_integer(simple[col].0[row])
                    } else {
                        Rational64::from_integer(r.0[row])
                    }
                })
                .collect()
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(d);
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..n).find(|&i| !m[i][col].is_zero()) else {
            return None; // simple roots are independent; should not happen
        };
        m.swap(row, p);
        let inv = m[row][col];
        for c in col..=d {
            m[row][c] /= inv;
        }
        for i in 0..n {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                for c in col..=d {
                    let sub = f * m[row][c];
                    m[i][c] -= sub;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Consistency: rows below the pivots must have zero RHS.
    for i in row..n {
        if !m[i][d].is_zero() {
            return None;
        }
    }
    let mut coeffs = Vec::with_capacity(d);
    for (col, &pr) in pivot_rows.iter().enumerate() {
        let c = m[pr][d];
        if !c.denom().eq(&1) {
            return None;
        }
        let _ = col;
        coeffs.push(*c.numer());
    }
    Some(coeffs)
}

/// Indices (into `datum.roots`) of the roots lying in the integer span of
/// the simple roots of `I`.
pub fn subsystem_root_indices(datum: &RootDatum, i: Subset) -> Vec<usize> {
    datum
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            delta_coordinates(datum, r)
                .map(|coeffs| {
                    coeffs
                        .iter()
                        .enumerate()
                        .all(|(k, c)| *c == 0 || i.contains(k + 1))
                })
                .unwrap_or(false)
        })
        .map(|(idx, _)| idx)
        .collect()
}

/// Order of the residual Weyl group of the stratum of `I`, computed
/// combinatorially as `|Stab_W(Phi_I)| / |<s_alpha : alpha in Phi_I>|`.
pub fn stabilizer_quotient_order(family: GroupFamily, i: Subset, bound: usize) -> Result<u128> {
    Ok(stabilizer_quotient_orders(family, &[i], bound)?[0])
}

/// Bulk variant of [`stabilizer_quotient_order`]: one enumeration pass of
/// the Weyl group serves every requested subset.
pub fn stabilizer_quotient_orders(
    family: GroupFamily,
    subsets: &[Subset],
    bound: usize,
) -> Result<Vec<u128>> {
    check_bound(family, bound)?;
    let datum = build_root_datum(family);
    let phis: Vec<Vec<usize>> = subsets
        .iter()
        .map(|&i| subsystem_root_indices(&datum, i))
        .collect();
    let phi_sets: Vec<Vec<bool>> = phis
        .iter()
        .map(|phi| {
            let mut set = vec![false; datum.roots.len()];
            for &idx in phi {
                set[idx] = true;
            }
            set
        })
        .collect();

    let mut stabs = vec![0u128; subsets.len()];
    for w in enumerate_weyl(family, bound)? {
        // root images under w, computed lazily and shared across subsets
        let mut images: Vec<Option<usize>> = vec![None; datum.roots.len()];
        let mut computed = vec![false; datum.roots.len()];
        for (k, phi) in phis.iter().enumerate() {
            let preserves = phi.iter().all(|&idx| {
                if !computed[idx] {
                    images[idx] = datum.root_index(&w.act(&datum.roots[idx]));
                    computed[idx] = true;
                }
                images[idx].map(|j| phi_sets[k][j]).unwrap_or(false)
            });
            if preserves {
                stabs[k] += 1;
            }
        }
    }

    subsets
        .iter()
        .zip(stabs)
        .map(|(&i, stab)| {
            let sub = reflection_subgroup_order_from_simple(&datum, i)?;
            if stab % sub != 0 {
                return Err(Error::Inconsistency(format!(
                    "stabilizer order {stab} not divisible by reflection subgroup order {sub}"
                )));
            }
            Ok(stab / sub)
        })
        .collect()
}

/// `<s_alpha : alpha in Phi_I>` generated from the simple roots of `I`
/// alone; `I` is a simple system for the parabolic subsystem `Phi_I`, so
/// every reflection in `Phi_I` is a product of these.
fn reflection_subgroup_order_from_simple(datum: &RootDatum, i: Subset) -> Result<u128> {
    let simple_indices: Vec<usize> = i
        .nodes()
        .iter()
        .map(|&node| {
            datum
                .root_index(datum.simple_root(node))
                .expect("simple root is a root")
        })
        .collect();
    reflection_subgroup_order(datum, &simple_indices)
}

/// Order of the subgroup generated by the reflections in the given roots,
/// by breadth-first closure over signed permutations.
pub fn reflection_subgroup_order(datum: &RootDatum, root_indices: &[usize]) -> Result<u128> {
    let n = datum.ambient_rank();
    let gens: Vec<WeylElement> = root_indices
        .iter()
        .map(|&idx| WeylElement::reflection_of(datum, &datum.roots[idx]))
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let id = WeylElement::identity(n);
    seen.insert(id.key());
    let mut frontier = vec![id];
    while let Some(w) = frontier.pop() {
        for g in &gens {
            let next = g.compose(&w);
            if seen.insert(next.key()) {
                frontier.push(next);
            }
        }
    }
    Ok(seen.len() as u128)
}
