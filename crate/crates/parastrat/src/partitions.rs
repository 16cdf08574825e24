//! Integer partitions and the bijections between partition/sector labels
//! and canonical subsets of simple roots.

use crate::rootdata::{FamilyKind, GroupFamily};
use crate::weyl::Subset;
use crate::{Error, Result};
use serde::Serialize;
use std::fmt;

/// A partition with parts sorted increasingly; the empty partition of 0 is
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Partition {
        assert!(parts.iter().all(|p| *p > 0), "parts must be positive");
        parts.sort_unstable();
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The partitioned integer m.
    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, |[k]|.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity k_j of the part j.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.parts.iter().filter(|p| **p == j).count()
    }

    /// The pairs (part size j, multiplicity k_j) with k_j > 0, ascending in j.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((j, k)) if *j == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Cumulative sums of the increasingly sorted parts.
    pub fn cumulative_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0usize, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (j, k)) in self.multiplicities().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *k == 1 {
                write!(f, "{j}")?;
            } else {
                write!(f, "{j}^{k}")?;
            }
        }
        write!(f, "]")
    }
}

/// All partitions of m, each exactly once, parts ascending, in lexicographic
/// order of the part lists.
pub fn enumerate_partitions(m: i64) -> Result<Vec<Partition>> {
    if m < 0 {
        return Err(Error::NegativeArgument(format!("partitions of {m}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, min_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        for p in min_part..=remaining {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(m as usize, 1, &mut current, &mut out);
    Ok(out)
}

/// Number of partitions of m.
pub fn partition_count(m: usize) -> usize {
    // Euler recurrence would be overkill at these sizes.
    enumerate_partitions(m as i64).unwrap().len()
}

/// Which of the paper-level decompositions of `2^Delta` a label lives in.
///
/// `Plain` covers the A-type labels and the marked-node-free sector of
/// Sp/SO_odd; `Tail` is the marked-node sector of Sp/SO_odd; `D1`/`D2`/`D3`
/// are the three SO_even sectors (n in I; n-1 in I only; neither).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Plain,
    Tail,
    D1,
    D2,
    D3,
}

impl Sector {
    pub fn token(self) -> &'static str {
        match self {
            Sector::Plain => "plain",
            Sector::Tail => "tail",
            Sector::D1 => "d1",
            Sector::D2 => "d2",
            Sector::D3 => "d3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumLabel {
    pub family: GroupFamily,
    pub sector: Sector,
    pub partition: Partition,
}

impl StratumLabel {
    pub fn new(family: GroupFamily, sector: Sector, partition: Partition) -> Result<StratumLabel> {
        let label = StratumLabel {
            family,
            sector,
            partition,
        };
        label.validate()?;
        Ok(label)
    }

    pub fn m(&self) -> usize {
        self.partition.sum()
    }

    fn validate(&self) -> Result<()> {
        let n = self.family.n;
        let m = self.m();
        let ok = match (self.family.kind, self.sector) {
            (FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl, Sector::Plain) => m == n,
            (FamilyKind::Sp | FamilyKind::SoOdd, Sector::Plain) => m == n,
            (FamilyKind::Sp | FamilyKind::SoOdd, Sector::Tail) => m < n,
            (FamilyKind::SoEven, Sector::D1) => m < n,
            // m = n-1 in sector (2) would collide with a (3)-sector subset,
            // so the admissible range stops at n-2, as for sector (3).
            (FamilyKind::SoEven, Sector::D2) => m + 1 < n,
            (FamilyKind::SoEven, Sector::D3) => m + 1 < n,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel(format!(
                "sector {} with m={m} is not admissible for {}",
                self.sector.token(),
                self.family
            )))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sector": self.sector.token(),
            "m": self.m(),
            "partition": self.partition.parts(),
        })
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sector {
            Sector::Plain => write!(f, "{}", self.partition),
            _ => write!(f, "{}:m={} {}", self.sector.token(), self.m(), self.partition),
        }
    }
}

/// The canonical subset of simple roots attached to a label: sort the parts
/// increasingly, take cumulative sums, and remove them from Delta, adding
/// the marked nodes the sector excludes from the complement.
pub fn subset_from_label(label: &StratumLabel) -> Result<Subset> {
    label.validate()?;
    let n = label.family.n;
    let d = label.family.delta_size();
    let mut removed: Vec<usize> = label.partition.cumulative_sums();
    match label.sector {
        Sector::Plain | Sector::Tail | Sector::D1 => {}
        Sector::D2 => removed.push(n),
        Sector::D3 => {
            removed.push(n - 1);
            removed.push(n);
        }
    }
    let mut bits = Subset::full(d).0;
    for c in removed {
        if c >= 1 && c <= d {
            bits &= !(1u32 << (c - 1));
        }
    }
    Ok(Subset(bits))
}

/// Inverse of [`subset_from_label`] on canonical representatives. On a
/// non-canonical subset the cumulative differences come out unsorted;
/// sorting them yields the label of the canonical representative of its
/// orbit class within the same sector.
pub fn label_from_subset(family: GroupFamily, i: Subset) -> StratumLabel {
    let n = family.n;
    let complement: Vec<usize> = i.complement(family.delta_size()).nodes();
    let (sector, cumsums): (Sector, Vec<usize>) = match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => {
            let mut cs = complement;
            cs.push(n);
            (Sector::Plain, cs)
        }
        FamilyKind::Sp | FamilyKind::SoOdd => {
            if i.contains(n) {
                (Sector::Tail, complement)
            } else {
                (Sector::Plain, complement)
            }
        }
        FamilyKind::SoEven => {
            if i.contains(n) {
                (Sector::D1, complement)
            } else if i.contains(n - 1) {
                (
                    Sector::D2,
                    complement.into_iter().filter(|&c| c != n).collect(),
                )
            } else {
                (
                    Sector::D3,
                    complement
                        .into_iter()
                        .filter(|&c| c != n && c != n - 1)
                        .collect(),
                )
            }
        }
    };
    let mut parts = Vec::with_capacity(cumsums.len());
    let mut prev = 0;
    for c in cumsums {
        parts.push(c - prev);
        prev = c;
    }
    let partition = Partition::new(parts);
    StratumLabel {
        family,
        sector,
        partition,
    }
}

/// Every admissible label of the family, in a fixed deterministic order:
/// sectors in declaration order, then m ascending, then partitions in
/// enumeration order.
pub fn enumerate_labels(family: GroupFamily) -> Vec<StratumLabel> {
    let n = family.n;
    let mut out = Vec::new();
    let mut push_all = |sector: Sector, m: usize| {
        for partition in enumerate_partitions(m as i64).unwrap() {
            out.push(StratumLabel {
                family,
                sector,
                partition,
            });
        }
    };
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => push_all(Sector::Plain, n),
        FamilyKind::Sp | FamilyKind::SoOdd => {
            push_all(Sector::Plain, n);
            for m in 0..n {
                push_all(Sector::Tail, m);
            }
        }
        FamilyKind::SoEven => {
            for m in 0..n {
                push_all(Sector::D1, m);
            }
            for m in 0..n - 1 {
                push_all(Sector::D2, m);
            }
            for m in 0..n - 1 {
                push_all(Sector::D3, m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(kind: FamilyKind, n: usize) -> GroupFamily {
        GroupFamily::new(kind, n).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(5).unwrap().len(), 7);
        assert!(enumerate_partitions(-1).is_err());
    }

    #[test]
    fn partition_order_is_deterministic_lex() {
        let parts: Vec<Vec<usize>> = enumerate_partitions(4)
            .unwrap()
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            parts,
            vec![
                vec![1, 1, 1, 1],
                vec![1, 1, 2],
                vec![1, 3],
                vec![2, 2],
                vec![4]
            ]
        );
    }

    #[test]
    fn multiplicities_and_display() {
        let p = Partition::new(vec![2, 1, 2]);
        assert_eq!(p.parts(), &[1, 2, 2]);
        assert_eq!(p.multiplicities(), vec![(1, 1), (2, 2)]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string(), "[1 2^2]");
        assert_eq!(Partition::empty().to_string(), "[]");
    }

    #[test]
    fn gl5_label_to_subset() {
        let label = StratumLabel::new(
            fam(FamilyKind::Gl, 5),
            Sector::Plain,
            Partition::new(vec![1, 2, 2]),
        )
        .unwrap();
        assert_eq!(
            subset_from_label(&label).unwrap(),
            Subset::from_nodes(&[2, 4])
        );
    }

    #[test]
    fn trivial_partition_gives_full_delta() {
        for n in 2..=6 {
            let label = StratumLabel::new(
                fam(FamilyKind::Gl, n),
                Sector::Plain,
                Partition::new(vec![n]),
            )
            .unwrap();
            assert_eq!(
                subset_from_label(&label).unwrap(),
                Subset::full(n - 1),
                "n={n}"
            );
        }
    }

    #[test]
    fn sp_tail_labels() {
        let sp2 = fam(FamilyKind::Sp, 2);
        let label = StratumLabel::new(sp2, Sector::Tail, Partition::new(vec![1])).unwrap();
        assert_eq!(subset_from_label(&label).unwrap(), Subset::from_nodes(&[2]));
        let m0 = StratumLabel::new(sp2, Sector::Tail, Partition::empty()).unwrap();
        assert_eq!(subset_from_label(&m0).unwrap(), Subset::full(2));
        assert_eq!(label_from_subset(sp2, Subset::full(2)), m0);
    }

    #[test]
    fn gl_label_from_noncanonical_subset() {
        let gl3 = fam(FamilyKind::Gl, 3);
        let label = label_from_subset(gl3, Subset::from_nodes(&[1]));
        assert_eq!(label.partition, Partition::new(vec![1, 2]));
        // and the canonical subset of that label is {2}
        assert_eq!(
            subset_from_label(&label).unwrap(),
            Subset::from_nodes(&[2])
        );
    }

    #[test]
    fn roundtrip_on_canonical_representatives() {
        for kind in [
            FamilyKind::Gl,
            FamilyKind::Sl,
            FamilyKind::Pgl,
            FamilyKind::Sp,
            FamilyKind::SoOdd,
            FamilyKind::SoEven,
        ] {
            for n in kind.min_rank()..=6 {
                let family = fam(kind, n);
                for label in enumerate_labels(family) {
                    let subset = subset_from_label(&label).unwrap();
                    assert_eq!(
                        label_from_subset(family, subset),
                        label,
                        "{kind} n={n} label {label}"
                    );
                }
            }
        }
    }

    #[test]
    fn labels_give_distinct_subsets() {
        for kind in [
            FamilyKind::Gl,
            FamilyKind::Sp,
            FamilyKind::SoOdd,
            FamilyKind::SoEven,
        ] {
            for n in kind.min_rank()..=6 {
                let family = fam(kind, n);
                let mut subsets: Vec<u32> = enumerate_labels(family)
                    .iter()
                    .map(|l| subset_from_label(l).unwrap().0)
                    .collect();
                let total = subsets.len();
                subsets.sort_unstable();
                subsets.dedup();
                assert_eq!(subsets.len(), total, "{kind} n={n}: subsets collide");
            }
        }
    }

    #[test]
    fn label_counts_match_orbit_counts() {
        // A: p(n). B/C: p(n) + sum_{m<n} p(m).
        for n in 1..=6 {
            assert_eq!(
                enumerate_labels(fam(FamilyKind::Gl, n)).len(),
                partition_count(n)
            );
        }
        for kind in [FamilyKind::Sp, FamilyKind::SoOdd] {
            for n in 1..=6 {
                let expect = partition_count(n) + (0..n).map(partition_count).sum::<usize>();
                assert_eq!(enumerate_labels(fam(kind, n)).len(), expect, "{kind} n={n}");
            }
            assert_eq!(enumerate_labels(fam(kind, 2)).len(), 4);
            assert_eq!(enumerate_labels(fam(kind, 3)).len(), 7);
        }
    }

    #[test]
    fn ordered_partition_count_matches_sector_size() {
        // Compositions of m < n, mapped through the tail construction,
        // enumerate the marked sector of 2^Delta exactly: 2^(n-1) subsets.
        fn compositions(m: usize) -> Vec<Vec<usize>> {
            if m == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=m {
                for rest in compositions(m - first) {
                    let mut c = vec![first];
                    c.extend(rest);
                    out.push(c);
                }
            }
            out
        }
        for n in 2..=6 {
            let family = fam(FamilyKind::Sp, n);
            let d = family.delta_size();
            let mut subsets = std::collections::BTreeSet::new();
            for m in 0..n {
                for comp in compositions(m) {
                    let mut bits = Subset::full(d).0;
                    let mut acc = 0;
                    for part in comp {
                        acc += part;
                        bits &= !(1u32 << (acc - 1));
                    }
                    let s = Subset(bits);
                    assert!(s.contains(n));
                    subsets.insert(s.0);
                }
            }
            assert_eq!(subsets.len(), 1 << (n - 1), "n={n}");
        }
    }

    #[test]
    fn invalid_labels_rejected() {
        assert!(StratumLabel::new(
            fam(FamilyKind::Gl, 3),
            Sector::Tail,
            Partition::new(vec![1])
        )
        .is_err());
        assert!(StratumLabel::new(
            fam(FamilyKind::Sp, 3),
            Sector::Tail,
            Partition::new(vec![3])
        )
        .is_err());
        assert!(StratumLabel::new(
            fam(FamilyKind::SoEven, 4),
            Sector::D2,
            Partition::new(vec![1, 1, 1])
        )
        .is_err());
        assert!(StratumLabel::new(
            fam(FamilyKind::SoEven, 4),
            Sector::D1,
            Partition::new(vec![1, 1, 1])
        )
        .is_ok());
    }

    #[test]
    fn so_even_labels_cover_all_sectors() {
        let family = fam(FamilyKind::SoEven, 4);
        let labels = enumerate_labels(family);
        // d1: p(0)+p(1)+p(2)+p(3) = 7, d2 and d3: p(0)+p(1)+p(2) = 4 each.
        assert_eq!(labels.len(), 15);
        let d1 = labels.iter().filter(|l| l.sector == Sector::D1).count();
        let d2 = labels.iter().filter(|l| l.sector == Sector::D2).count();
        let d3 = labels.iter().filter(|l| l.sector == Sector::D3).count();
        assert_eq!((d1, d2, d3), (7, 4, 4));
        assert!(labels.iter().all(|l| l.sector != Sector::Plain));
    }
}
