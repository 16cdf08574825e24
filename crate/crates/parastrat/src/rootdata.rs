//! Root data of the classical families in their standard `Z^n` coordinates.
//!
//! All six families live in a common ambient lattice `Z^n` with the dot
//! product as pairing. The SL/PGL lattice subtleties are carried as
//! [`LatticeDescriptor`] markers: root vectors are identical for GL, SL and
//! PGL, and every computation downstream uses root vectors only.

use crate::{Error, Result};
use serde::Serialize;
use std::fmt;

/// The six supported classical families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Gl,
    Sl,
    Pgl,
    Sp,
    SoOdd,
    SoEven,
}

impl FamilyKind {
    pub fn token(self) -> &'static str {
        match self {
            FamilyKind::Gl => "gl",
            FamilyKind::Sl => "sl",
            FamilyKind::Pgl => "pgl",
            FamilyKind::Sp => "sp",
            FamilyKind::SoOdd => "so-odd",
            FamilyKind::SoEven => "so-even",
        }
    }

    pub fn from_token(s: &str) -> Option<FamilyKind> {
        Some(match s {
            "gl" => FamilyKind::Gl,
            "sl" => FamilyKind::Sl,
            "pgl" => FamilyKind::Pgl,
            "sp" => FamilyKind::Sp,
            "so-odd" => FamilyKind::SoOdd,
            "so-even" => FamilyKind::SoEven,
            _ => return None,
        })
    }

    pub fn min_rank(self) -> usize {
        match self {
            FamilyKind::Gl | FamilyKind::Sp | FamilyKind::SoOdd => 1,
            FamilyKind::Sl | FamilyKind::Pgl | FamilyKind::SoEven => 2,
        }
    }

    /// `GL_n`, `SL_n`, `PGL_n`, `Sp_2n`, `SO_2n+1`, `SO_2n` for rank parameter n.
    pub fn group_name(self, n: usize) -> String {
        match self {
            FamilyKind::Gl => format!("GL_{n}"),
            FamilyKind::Sl => format!("SL_{n}"),
            FamilyKind::Pgl => format!("PGL_{n}"),
            FamilyKind::Sp => format!("Sp_{}", 2 * n),
            FamilyKind::SoOdd => format!("SO_{}", 2 * n + 1),
            FamilyKind::SoEven => format!("SO_{}", 2 * n),
        }
    }

    pub fn is_a_type(self) -> bool {
        matches!(self, FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A family together with its rank parameter n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

impl GroupFamily {
    pub fn new(kind: FamilyKind, n: usize) -> Result<GroupFamily> {
        if n < kind.min_rank() {
            return Err(Error::RankOutOfRange {
                family: kind.token(),
                given: n,
                min: kind.min_rank(),
            });
        }
        Ok(GroupFamily { kind, n })
    }

    /// Number of simple roots: n-1 for A-type, n otherwise.
    pub fn delta_size(&self) -> usize {
        if self.kind.is_a_type() {
            self.n - 1
        } else {
            self.n
        }
    }

    /// Order of the Weyl group: n! (A), 2^n n! (B/C), 2^(n-1) n! (D).
    pub fn weyl_order(&self) -> u128 {
        let fact: u128 = (1..=self.n as u128).product();
        match self.kind {
            FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => fact,
            FamilyKind::Sp | FamilyKind::SoOdd => (1u128 << self.n) * fact,
            FamilyKind::SoEven => (1u128 << (self.n - 1)) * fact,
        }
    }

    pub fn group_name(&self) -> String {
        self.kind.group_name(self.n)
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.n)
    }
}

/// An element of the ambient lattice `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn neg(&self) -> RootVector {
        RootVector(self.0.iter().map(|c| -c).collect())
    }

    /// Ambient coordinates (1-based) on which the vector is supported.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Standard dot product on `Z^n`.
pub fn pairing(x: &RootVector, y: &RootVector) -> Result<i64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.0.iter().zip(&y.0).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Full,
    SumZeroSublattice,
    QuotientByDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeDescriptor {
    pub ambient_rank: usize,
    pub kind: LatticeKind,
}

/// The root datum (X*, Phi, X_*, Phi^v) of one classical realization.
///
/// Roots are stored deduplicated in lexicographic order; `coroots[i]` is the
/// coroot matched with `roots[i]`. `simple` indexes into `roots` following
/// the standard node ordering (node n is the long/short/branch node).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub family: GroupFamily,
    pub char_lattice: LatticeDescriptor,
    pub cochar_lattice: LatticeDescriptor,
    pub roots: Vec<RootVector>,
    pub coroots: Vec<RootVector>,
    simple: Vec<usize>,
}

fn basis_vector(n: usize, i: usize, c: i64) -> RootVector {
    let mut v = vec![0i64; n];
    v[i] = c;
    RootVector(v)
}

fn two_coord_vector(n: usize, i: usize, ci: i64, j: usize, cj: i64) -> RootVector {
    let mut v = vec![0i64; n];
    v[i] = ci;
    v[j] = cj;
    RootVector(v)
}

pub fn build_root_datum(family: GroupFamily) -> RootDatum {
    let n = family.n;
    let mut pairs: Vec<(RootVector, RootVector)> = Vec::new();

    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let r = two_coord_vector(n, i, 1, j, -1);
                        pairs.push((r.clone(), r));
                    }
                }
            }
        }
        FamilyKind::Sp => {
            for i in 0..n {
                for eps in [1i64, -1] {
                    pairs.push((basis_vector(n, i, 2 * eps), basis_vector(n, i, eps)));
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for delta in [1i64, -1] {
                        for kappa in [1i64, -1] {
                            let r = two_coord_vector(n, i, delta, j, kappa);
                            pairs.push((r.clone(), r));
                        }
                    }
                }
            }
        }
        FamilyKind::SoOdd => {
            for i in 0..n {
                for eps in [1i64, -1] {
                    pairs.push((basis_vector(n, i, eps), basis_vector(n, i, 2 * eps)));
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for delta in [1i64, -1] {
                        for kappa in [1i64, -1] {
                            let r = two_coord_vector(n, i, delta, j, kappa);
                            pairs.push((r.clone(), r));
                        }
                    }
                }
            }
        }
        FamilyKind::SoEven => {
            for i in 0..n {
                for j in (i + 1)..n {
                    for delta in [1i64, -1] {
                        for kappa in [1i64, -1] {
                            let r = two_coord_vector(n, i, delta, j, kappa);
                            pairs.push((r.clone(), r));
                        }
                    }
                }
            }
        }
    }

    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup();
    let (roots, coroots): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();

    let mut simple_vectors: Vec<RootVector> = (0..n.saturating_sub(1))
        .map(|i| two_coord_vector(n, i, 1, i + 1, -1))
        .collect();
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => {}
        FamilyKind::Sp => simple_vectors.push(basis_vector(n, n - 1, 2)),
        FamilyKind::SoOdd => simple_vectors.push(basis_vector(n, n - 1, 1)),
        FamilyKind::SoEven => simple_vectors.push(two_coord_vector(n, n - 2, 1, n - 1, 1)),
    }
    let simple = simple_vectors
        .iter()
        .map(|v| roots.binary_search(v).expect("simple root is a root"))
        .collect();

    let (char_lattice, cochar_lattice) = lattices(family);
    RootDatum {
        family,
        char_lattice,
        cochar_lattice,
        roots,
        coroots,
        simple,
    }
}

fn lattices(family: GroupFamily) -> (LatticeDescriptor, LatticeDescriptor) {
    let full = LatticeDescriptor {
        ambient_rank: family.n,
        kind: LatticeKind::Full,
    };
    let sum_zero = LatticeDescriptor {
        ambient_rank: family.n,
        kind: LatticeKind::SumZeroSublattice,
    };
    let quotient = LatticeDescriptor {
        ambient_rank: family.n,
        kind: LatticeKind::QuotientByDiagonal,
    };
    match family.kind {
        FamilyKind::Sl => (quotient, sum_zero),
        FamilyKind::Pgl => (sum_zero, quotient),
        _ => (full, full),
    }
}

impl RootDatum {
    pub fn ambient_rank(&self) -> usize {
        self.family.n
    }

    pub fn root_index(&self, v: &RootVector) -> Option<usize> {
        self.roots.binary_search(v).ok()
    }

    /// Simple roots in the standard node order, 1-based node index i -> vector.
    pub fn simple_roots(&self) -> Vec<&RootVector> {
        self.simple.iter().map(|&i| &self.roots[i]).collect()
    }

    pub fn simple_root(&self, node: usize) -> &RootVector {
        &self.roots[self.simple[node - 1]]
    }

    /// Node index (1-based) of a vector if it is a simple root.
    pub fn simple_node_of(&self, v: &RootVector) -> Option<usize> {
        let idx = self.root_index(v)?;
        self.simple.iter().position(|&s| s == idx).map(|p| p + 1)
    }

    pub fn coroot_of(&self, alpha: &RootVector) -> Result<&RootVector> {
        let idx = self
            .root_index(alpha)
            .ok_or_else(|| Error::NotARoot(alpha.0.clone()))?;
        Ok(&self.coroots[idx])
    }

    /// Reflection s_alpha(x) = x - (x, alpha^v) alpha.
    pub fn reflect(&self, alpha: &RootVector, x: &RootVector) -> Result<RootVector> {
        let coroot = self.coroot_of(alpha)?;
        let c = pairing(x, coroot)?;
        Ok(RootVector(
            x.0.iter()
                .zip(&alpha.0)
                .map(|(xi, ai)| xi - c * ai)
                .collect(),
        ))
    }

    pub fn weyl_order(&self) -> u128 {
        self.family.weyl_order()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.kind.token(),
            "n": self.family.n,
            "roots": self.roots,
            "coroots": self.coroots,
            "simple_roots": self.simple_roots(),
            "weyl_order": self.weyl_order().to_string().parse::<serde_json::Number>().unwrap(),
        })
    }
}

/// Dual datum: roots and coroots swapped, lattices swapped, and the family
/// tag re-identified (Sp_n <-> SO_2n+1, SL <-> PGL, GL and SO_2n self-dual).
pub fn dual_root_datum(datum: &RootDatum) -> RootDatum {
    let dual_kind = match datum.family.kind {
        FamilyKind::Gl => FamilyKind::Gl,
        FamilyKind::Sl => FamilyKind::Pgl,
        FamilyKind::Pgl => FamilyKind::Sl,
        FamilyKind::Sp => FamilyKind::SoOdd,
        FamilyKind::SoOdd => FamilyKind::Sp,
        FamilyKind::SoEven => FamilyKind::SoEven,
    };
    let family = GroupFamily {
        kind: dual_kind,
        n: datum.family.n,
    };

    let mut pairs: Vec<(RootVector, RootVector)> = datum
        .coroots
        .iter()
        .cloned()
        .zip(datum.roots.iter().cloned())
        .collect();
    let old_simple_coroots: Vec<RootVector> = datum
        .simple
        .iter()
        .map(|&i| datum.coroots[i].clone())
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (roots, coroots): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let simple = old_simple_coroots
        .iter()
        .map(|v| roots.binary_search(v).expect("dual simple root"))
        .collect();

    RootDatum {
        family,
        char_lattice: datum.cochar_lattice,
        cochar_lattice: datum.char_lattice,
        roots,
        coroots,
        simple,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(kind: FamilyKind, n: usize) -> GroupFamily {
        GroupFamily::new(kind, n).unwrap()
    }

    fn rv(coords: &[i64]) -> RootVector {
        RootVector(coords.to_vec())
    }

    #[test]
    fn gl2_roots_and_simple() {
        let d = build_root_datum(fam(FamilyKind::Gl, 2));
        assert_eq!(d.roots, vec![rv(&[-1, 1]), rv(&[1, -1])]);
        assert_eq!(d.simple_roots(), vec![&rv(&[1, -1])]);
    }

    #[test]
    fn sp2_roots_and_simple() {
        let d = build_root_datum(fam(FamilyKind::Sp, 2));
        let expected: Vec<RootVector> = vec![
            rv(&[2, 0]),
            rv(&[-2, 0]),
            rv(&[0, 2]),
            rv(&[0, -2]),
            rv(&[1, 1]),
            rv(&[-1, -1]),
            rv(&[1, -1]),
            rv(&[-1, 1]),
        ];
        assert_eq!(d.roots.len(), 8);
        for r in &expected {
            assert!(d.root_index(r).is_some(), "missing root {r}");
        }
        assert_eq!(d.simple_roots(), vec![&rv(&[1, -1]), &rv(&[0, 2])]);
    }

    #[test]
    fn so_even2_roots() {
        let d = build_root_datum(fam(FamilyKind::SoEven, 2));
        assert_eq!(d.roots.len(), 4);
        for r in [rv(&[1, 1]), rv(&[1, -1]), rv(&[-1, 1]), rv(&[-1, -1])] {
            assert!(d.root_index(&r).is_some());
        }
        assert_eq!(d.simple_roots().len(), 2);
    }

    #[test]
    fn rank_bounds() {
        assert!(GroupFamily::new(FamilyKind::Gl, 1).is_ok());
        let err = GroupFamily::new(FamilyKind::Sl, 1).unwrap_err();
        match err {
            Error::RankOutOfRange { family, min, .. } => {
                assert_eq!(family, "sl");
                assert_eq!(min, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(GroupFamily::new(FamilyKind::SoEven, 1).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&rv(&[1, -1]), &rv(&[1, -1])).unwrap(), 2);
        assert_eq!(pairing(&rv(&[1, -1]), &rv(&[1, 1])).unwrap(), 0);
        // Sp n=2: long root (0,2) against the coroot (1,-1) of beta_{12,+-}.
        assert_eq!(pairing(&rv(&[0, 2]), &rv(&[1, -1])).unwrap(), -2);
        assert!(pairing(&rv(&[1]), &rv(&[1, 2])).is_err());
    }

    #[test]
    fn reflect_examples() {
        let gl3 = build_root_datum(fam(FamilyKind::Gl, 3));
        let alpha = rv(&[1, -1, 0]);
        assert_eq!(gl3.reflect(&alpha, &alpha).unwrap(), alpha.neg());
        assert_eq!(
            gl3.reflect(&alpha, &rv(&[0, 1, 0])).unwrap(),
            rv(&[1, 0, 0])
        );

        let sp2 = build_root_datum(fam(FamilyKind::Sp, 2));
        assert_eq!(
            sp2.reflect(&rv(&[0, 2]), &rv(&[1, 1])).unwrap(),
            rv(&[1, -1])
        );
        assert!(sp2.reflect(&rv(&[1, 0]), &rv(&[1, 1])).is_err());
    }

    #[test]
    fn matched_pairs_have_pairing_two_and_negation_matches() {
        for kind in [
            FamilyKind::Gl,
            FamilyKind::Sl,
            FamilyKind::Pgl,
            FamilyKind::Sp,
            FamilyKind::SoOdd,
            FamilyKind::SoEven,
        ] {
            for n in kind.min_rank()..=6 {
                let d = build_root_datum(fam(kind, n));
                for (r, c) in d.roots.iter().zip(&d.coroots) {
                    assert_eq!(pairing(r, c).unwrap(), 2, "{kind} n={n} root {r}");
                    let neg_idx = d.root_index(&r.neg()).expect("closed under negation");
                    assert_eq!(d.coroots[neg_idx], c.neg());
                }
            }
        }
    }

    #[test]
    fn root_sets_closed_under_simple_reflections() {
        for kind in [
            FamilyKind::Gl,
            FamilyKind::Sp,
            FamilyKind::SoOdd,
            FamilyKind::SoEven,
        ] {
            for n in kind.min_rank()..=6 {
                let d = build_root_datum(fam(kind, n));
                for s in d.simple_roots() {
                    let s = s.clone();
                    for r in &d.roots {
                        let img = d.reflect(&s, r).unwrap();
                        assert!(d.root_index(&img).is_some(), "{kind} n={n}: s_{s}({r})");
                    }
                }
            }
        }
    }

    #[test]
    fn a_type_roots_sum_zero_and_bc_lengths() {
        let gl = build_root_datum(fam(FamilyKind::Gl, 5));
        for r in &gl.roots {
            assert_eq!(r.0.iter().sum::<i64>(), 0);
        }
        let sp = build_root_datum(fam(FamilyKind::Sp, 4));
        let long: Vec<_> = sp
            .roots
            .iter()
            .filter(|r| pairing(r, r).unwrap() == 4)
            .collect();
        assert_eq!(long.len(), 8); // exactly {±2e_i}
        let so = build_root_datum(fam(FamilyKind::SoOdd, 4));
        let short: Vec<_> = so
            .roots
            .iter()
            .filter(|r| pairing(r, r).unwrap() == 1)
            .collect();
        assert_eq!(short.len(), 8); // exactly {±e_i}
    }

    #[test]
    fn dual_examples() {
        for n in 1..=5 {
            let sp = build_root_datum(fam(FamilyKind::Sp, n));
            let dual = dual_root_datum(&sp);
            let so = build_root_datum(fam(FamilyKind::SoOdd, n));
            assert_eq!(dual, so, "dual(Sp,{n}) = (SOodd,{n}) as matched sets");
        }
        for kind in [
            FamilyKind::Gl,
            FamilyKind::Sl,
            FamilyKind::Pgl,
            FamilyKind::Sp,
            FamilyKind::SoOdd,
            FamilyKind::SoEven,
        ] {
            for n in kind.min_rank()..=5 {
                let d = build_root_datum(fam(kind, n));
                assert_eq!(dual_root_datum(&dual_root_datum(&d)), d);
            }
        }
        let gl = build_root_datum(fam(FamilyKind::Gl, 4));
        let dual = dual_root_datum(&gl);
        assert_eq!(dual.family.kind, FamilyKind::Gl);
        assert_eq!(dual.roots, gl.roots);
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(fam(FamilyKind::Gl, 4).weyl_order(), 24);
        assert_eq!(fam(FamilyKind::Sp, 3).weyl_order(), 48);
        assert_eq!(fam(FamilyKind::SoEven, 3).weyl_order(), 24);
        assert_eq!(fam(FamilyKind::SoOdd, 1).weyl_order(), 2);
    }

    #[test]
    fn delta_sizes() {
        assert_eq!(fam(FamilyKind::Gl, 5).delta_size(), 4);
        assert_eq!(fam(FamilyKind::Sp, 5).delta_size(), 5);
        assert_eq!(fam(FamilyKind::Gl, 1).delta_size(), 0);
    }

    #[test]
    fn sl_pgl_lattices_swapped() {
        let sl = build_root_datum(fam(FamilyKind::Sl, 3));
        let pgl = build_root_datum(fam(FamilyKind::Pgl, 3));
        assert_eq!(sl.char_lattice.kind, LatticeKind::QuotientByDiagonal);
        assert_eq!(sl.cochar_lattice.kind, LatticeKind::SumZeroSublattice);
        assert_eq!(pgl.char_lattice.kind, LatticeKind::SumZeroSublattice);
        assert_eq!(pgl.cochar_lattice.kind, LatticeKind::QuotientByDiagonal);
        assert_eq!(sl.roots, pgl.roots);
    }

    #[test]
    fn datum_json_shape() {
        let d = build_root_datum(fam(FamilyKind::Gl, 2));
        let j = d.to_json();
        assert_eq!(j["family"], "gl");
        assert_eq!(j["n"], 2);
        assert_eq!(j["weyl_order"], 2);
        assert_eq!(j["simple_roots"][0], serde_json::json!([1, -1]));
    }
}
