//! Formal virtual-class and E-polynomial calculus: exact two-variable
//! Laurent polynomials, Adams operations, symmetric-product series,
//! Molien-type torus-quotient averages, and atom-expression trees for
//! unevaluated strata.

use crate::rootdata::FamilyKind;
use crate::weyl::WeylElement;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial in two variables u, v with integer coefficients.
/// Zero coefficients are never stored; equality is coefficient-wise.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EPolynomial {
    coeffs: BTreeMap<(i64, i64), i64>,
}

impl EPolynomial {
    pub fn zero() -> EPolynomial {
        EPolynomial::default()
    }

    pub fn one() -> EPolynomial {
        EPolynomial::monomial(0, 0, 1)
    }

    pub fn monomial(p: i64, q: i64, c: i64) -> EPolynomial {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert((p, q), c);
        }
        EPolynomial { coeffs }
    }

    /// The class of the affine line, uv.
    pub fn lefschetz() -> EPolynomial {
        EPolynomial::monomial(1, 1, 1)
    }

    /// (uv)^k.
    pub fn lefschetz_power(k: i64) -> EPolynomial {
        EPolynomial::monomial(k, k, 1)
    }

    /// uv - 1, the class of the punctured line.
    pub fn torus() -> EPolynomial {
        EPolynomial::from_triples(&[(1, 1, 1), (0, 0, -1)])
    }

    pub fn from_triples(triples: &[(i64, i64, i64)]) -> EPolynomial {
        let mut out = EPolynomial::zero();
        for &(p, q, c) in triples {
            out.add_term(p, q, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, p: i64, q: i64) -> i64 {
        self.coeffs.get(&(p, q)).copied().unwrap_or(0)
    }

    fn add_term(&mut self, p: i64, q: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry((p, q)).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&(p, q));
        }
    }

    /// Exponent substitution (p, q) -> (kp, kq).
    pub fn adams(&self, k: i64) -> Result<EPolynomial> {
        if k < 1 {
            return Err(Error::NegativeArgument(format!("adams power {k}")));
        }
        let mut out = EPolynomial::zero();
        for (&(p, q), &c) in &self.coeffs {
            out.add_term(k * p, k * q, c);
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> EPolynomial {
        let mut out = EPolynomial::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Triples [p, q, coeff] sorted lexicographically.
    pub fn to_triples(&self) -> Vec<[i64; 3]> {
        self.coeffs.iter().map(|(&(p, q), &c)| [p, q, c]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.to_triples())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<EPolynomial> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::AtomTable("epoly must be an array of triples".into()))?;
        let mut out = EPolynomial::zero();
        for t in arr {
            let t = t
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::AtomTable("epoly entry must be [p,q,c]".into()))?;
            let nums: Vec<i64> = t
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::AtomTable("epoly entries must be integers".into()))
                })
                .collect::<Result<_>>()?;
            out.add_term(nums[0], nums[1], nums[2]);
        }
        Ok(out)
    }
}

impl Add for &EPolynomial {
    type Output = EPolynomial;
    fn add(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = self.clone();
        for (&(p, q), &c) in &rhs.coeffs {
            out.add_term(p, q, c);
        }
        out
    }
}

impl Sub for &EPolynomial {
    type Output = EPolynomial;
    fn sub(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = self.clone();
        for (&(p, q), &c) in &rhs.coeffs {
            out.add_term(p, q, -c);
        }
        out
    }
}

impl Neg for &EPolynomial {
    type Output = EPolynomial;
    fn neg(self) -> EPolynomial {
        &EPolynomial::zero() - self
    }
}

impl Mul for &EPolynomial {
    type Output = EPolynomial;
    fn mul(self, rhs: &EPolynomial) -> EPolynomial {
        let mut out = EPolynomial::zero();
        for (&(p1, q1), &c1) in &self.coeffs {
            for (&(p2, q2), &c2) in &rhs.coeffs {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident, $method:ident);*) => {$(
        impl $trait for EPolynomial {
            type Output = EPolynomial;
            fn $method(self, rhs: EPolynomial) -> EPolynomial {
                (&self).$method(&rhs)
            }
        }
    )*}
}
owned_ops!(Add, add; Sub, sub; Mul, mul);

impl fmt::Display for EPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest total degree first, deterministic
        let mut terms: Vec<(&(i64, i64), &i64)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(&(p, q), _)| (-(p + q), -p, -q));
        for (idx, (&(p, q), &c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars = match (p, q) {
                (0, 0) => String::new(),
                (p, q) if p == q => {
                    if p == 1 {
                        "uv".to_string()
                    } else {
                        format!("(uv)^{p}")
                    }
                }
                (p, 0) => format!("u^{p}"),
                (0, q) => format!("v^{q}"),
                (p, q) => format!("u^{p}v^{q}"),
            };
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{mag}{vars}")?;
            }
        }
        Ok(())
    }
}

type RationalPoly = BTreeMap<(i64, i64), BigRational>;

fn rational_from(e: &EPolynomial) -> RationalPoly {
    e.coeffs
        .iter()
        .map(|(&k, &c)| (k, BigRational::from_integer(BigInt::from(c))))
        .collect()
}

fn rational_mul(a: &RationalPoly, b: &RationalPoly) -> RationalPoly {
    let mut out: RationalPoly = BTreeMap::new();
    for (&(p1, q1), c1) in a {
        for (&(p2, q2), c2) in b {
            let entry = out.entry((p1 + p2, q1 + q2)).or_insert_with(BigRational::zero);
            *entry += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn rational_add_scaled(acc: &mut RationalPoly, other: &RationalPoly, scale: &BigRational) {
    for (&k, c) in other {
        let entry = acc.entry(k).or_insert_with(BigRational::zero);
        *entry += c * scale;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn rational_into_integral(p: RationalPoly, context: &str) -> Result<EPolynomial> {
    let mut out = EPolynomial::zero();
    for ((pp, qq), c) in p {
        if !c.denom().is_one() {
            return Err(Error::Inconsistency(format!(
                "{context}: non-integral coefficient {c} at u^{pp}v^{qq}"
            )));
        }
        let numer = c.numer();
        let as_i64 = numer.to_i64().ok_or_else(|| {
            Error::Inconsistency(format!("{context}: coefficient {numer} overflows i64"))
        })?;
        out.add_term(pp, qq, as_i64);
    }
    Ok(out)
}

/// Coefficient of t^k in exp(sum_j adams(e, j) t^j / j): the E-polynomial of
/// the k-th symmetric product. Exact rational arithmetic, with a hard
/// integrality assertion at the boundary.
pub fn sym_epoly(e: &EPolynomial, k: i64) -> Result<EPolynomial> {
    if k < 0 {
        return Err(Error::NegativeArgument(format!("symmetric power {k}")));
    }
    let k = k as usize;
    if k == 0 {
        return Ok(EPolynomial::one());
    }
    // series in t, truncated beyond degree k; index = degree in t
    let mut log_series: Vec<RationalPoly> = vec![BTreeMap::new(); k + 1];
    for j in 1..=k {
        let psi = rational_from(&e.adams(j as i64)?);
        let inv_j = BigRational::new(BigInt::one(), BigInt::from(j));
        let mut scaled: RationalPoly = BTreeMap::new();
        rational_add_scaled(&mut scaled, &psi, &inv_j);
        log_series[j] = scaled;
    }
    // exp via powers of the truncated series
    let mut result: Vec<RationalPoly> = vec![BTreeMap::new(); k + 1];
    result[0].insert((0, 0), BigRational::one());
    let mut power: Vec<RationalPoly> = result.clone(); // log_series^i / i!
    for i in 1..=k {
        let mut next: Vec<RationalPoly> = vec![BTreeMap::new(); k + 1];
        for d1 in 0..=k {
            if power[d1].is_empty() {
                continue;
            }
            for d2 in 1..=(k - d1) {
                if log_series[d2].is_empty() {
                    continue;
                }
                let prod = rational_mul(&power[d1], &log_series[d2]);
                rational_add_scaled(&mut next[d1 + d2], &prod, &BigRational::one());
            }
        }
        let inv_i = BigRational::new(BigInt::one(), BigInt::from(i));
        for d in 0..=k {
            let mut scaled: RationalPoly = BTreeMap::new();
            rational_add_scaled(&mut scaled, &next[d], &inv_i);
            power[d] = scaled;
            let add = power[d].clone();
            rational_add_scaled(&mut result[d], &add, &BigRational::one());
        }
    }
    rational_into_integral(result[k].clone(), "sym_epoly")
}

/// Verifies that a list of signed permutations is closed under composition
/// by generating the subgroup spanned by a growing generating set inside it.
fn verify_group(group: &[WeylElement]) -> Result<()> {
    if group.is_empty() {
        return Err(Error::NotAGroup("empty element list".into()));
    }
    let n = group[0].rank();
    if group.iter().any(|w| w.rank() != n) {
        return Err(Error::NotAGroup("mixed ranks".into()));
    }
    let keys: HashSet<u64> = group.iter().map(element_key).collect();
    if keys.len() != group.len() {
        return Err(Error::NotAGroup("duplicate elements".into()));
    }
    let id = WeylElement::identity(n);
    if !keys.contains(&element_key(&id)) {
        return Err(Error::NotAGroup("identity missing".into()));
    }

    let mut gens: Vec<WeylElement> = Vec::new();
    let mut closed: HashSet<u64> = HashSet::new();
    closed.insert(element_key(&id));
    let mut members: Vec<WeylElement> = vec![id];
    loop {
        // grab any element not yet generated and add it as a generator
        match group.iter().find(|w| !closed.contains(&element_key(w))) {
            None => break,
            Some(w) => gens.push(w.clone()),
        }
        let mut frontier: Vec<WeylElement> = members.clone();
        while let Some(w) = frontier.pop() {
            for g in &gens {
                let next = g.compose(&w);
                let key = element_key(&next);
                if !keys.contains(&key) {
                    return Err(Error::NotAGroup(format!(
                        "product of elements escapes the list (perm {:?})",
                        next.perm
                    )));
                }
                if closed.insert(key) {
                    members.push(next.clone());
                    frontier.push(next);
                }
            }
        }
    }
    Ok(())
}

fn element_key(w: &WeylElement) -> u64 {
    let mut k = 0u64;
    for (j, &p) in w.perm.iter().enumerate() {
        k |= (p as u64) << (4 * j);
    }
    for (i, &s) in w.signs.iter().enumerate() {
        if s < 0 {
            k |= 1u64 << (48 + i);
        }
    }
    k
}

/// `(1/|G|) sum_w det(q Id - M_w)` as a polynomial in q = uv, where `M_w`
/// is the signed permutation matrix of w. This is the E-polynomial of the
/// quotient of the rank-n torus by the group.
pub fn molien_torus_quotient(rank: usize, group: &[WeylElement]) -> Result<EPolynomial> {
    verify_group(group)?;
    if group.iter().any(|w| w.rank() != rank) {
        return Err(Error::DimensionMismatch {
            left: rank,
            right: group[0].rank(),
        });
    }
    // det(q I - M_w) = prod over cycles (q^len - sign(cycle))
    let mut total = vec![BigInt::zero(); rank + 1];
    for w in group {
        let mut charpoly = vec![BigInt::zero(); rank + 1];
        charpoly[0] = BigInt::one();
        let mut deg = 0usize;
        let mut seen = vec![false; rank];
        for start in 0..rank {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut sign = 1i64;
            let mut c = start;
            loop {
                seen[c] = true;
                len += 1;
                sign *= w.signs[w.perm[c]] as i64;
                c = w.perm[c];
                if c == start {
                    break;
                }
            }
            // multiply charpoly by (q^len - sign)
            let mut next = vec![BigInt::zero(); rank + 1];
            for d in 0..=deg {
                if charpoly[d].is_zero() {
                    continue;
                }
                next[d + len] += &charpoly[d];
                next[d] -= &charpoly[d] * BigInt::from(sign);
            }
            charpoly = next;
            deg += len;
        }
        for d in 0..=rank {
            total[d] += &charpoly[d];
        }
    }
    let order = BigInt::from(group.len());
    let mut out = EPolynomial::zero();
    for (d, c) in total.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !(c % &order).is_zero() {
            return Err(Error::Inconsistency(format!(
                "molien average not integral: {c}/{order} at q^{d}"
            )));
        }
        let v = (c / &order).to_i64().ok_or_else(|| {
            Error::Inconsistency("molien coefficient overflows i64".to_string())
        })?;
        out.add_term(d as i64, d as i64, v);
    }
    Ok(out)
}

/// Sign pattern classes carried by quotient markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignKind {
    /// The full group `Z_2^l`.
    Full,
    /// The even-sign subgroup `H_l`.
    Even,
}

/// Symbolic atoms for virtual classes of strata.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Irreducible-locus class of a classical group of the given size,
    /// parameterized by an opaque gamma tag. `size` is the GL rank or the
    /// tail half-rank.
    Irr {
        family: FamilyKind,
        size: usize,
        decoration: AtomDecoration,
        gamma: String,
    },
    /// The Lefschetz class power (uv)^k.
    Lefschetz { power: i64 },
    /// Symmetric power Sym^k of the inner class.
    Sym { k: usize, inner: Box<Atom> },
    /// Quotient by coordinatewise inversion.
    InvQuot { inner: Box<Atom> },
    /// Quotient of `prod_b inner_b^(mult_b)` by `Sign_l x| prod S_(mult_b)`
    /// with `l = sum mult_b`.
    Wreath {
        sign: SignKind,
        blocks: Vec<(Atom, usize)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomDecoration {
    Plain,
    DetOne,
    ModScalar,
}

impl Atom {
    pub fn irr(family: FamilyKind, size: usize, gamma: &str) -> Atom {
        Atom::Irr {
            family,
            size,
            decoration: AtomDecoration::Plain,
            gamma: gamma.to_string(),
        }
    }

    /// Sym^k, normalizing Sym^1 to the inner atom.
    pub fn sym(k: usize, inner: Atom) -> Atom {
        if k == 1 {
            inner
        } else {
            Atom::Sym {
                k,
                inner: Box::new(inner),
            }
        }
    }

    pub fn wreath(sign: SignKind, mut blocks: Vec<(Atom, usize)>) -> Atom {
        blocks.sort();
        Atom::Wreath { sign, blocks }
    }

    pub fn units(&self) -> usize {
        match self {
            Atom::Wreath { blocks, .. } => blocks.iter().map(|(_, m)| m).sum(),
            _ => 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Irr {
                family,
                size,
                decoration,
                gamma,
            } => {
                let name = match family {
                    FamilyKind::Gl => format!("GL{size}"),
                    FamilyKind::Sl => format!("SL{size}"),
                    FamilyKind::Pgl => format!("PGL{size}"),
                    FamilyKind::Sp => format!("Sp{}", 2 * size),
                    FamilyKind::SoOdd => format!("SO{}", 2 * size + 1),
                    FamilyKind::SoEven => format!("SO{}", 2 * size),
                };
                let dec = match decoration {
                    AtomDecoration::Plain => "",
                    AtomDecoration::DetOne => ",det1",
                    AtomDecoration::ModScalar => ",/Gm",
                };
                write!(f, "X*_{name}({gamma}{dec})")
            }
            Atom::Lefschetz { power } => write!(f, "L^{power}"),
            Atom::Sym { k, inner } => write!(f, "Sym^{k}({inner})"),
            Atom::InvQuot { inner } => write!(f, "InvQuot({inner})"),
            Atom::Wreath { sign, blocks } => {
                let tag = match sign {
                    SignKind::Full => "Z2wr",
                    SignKind::Even => "Hwr",
                };
                write!(f, "{tag}[")?;
                for (i, (a, m)) in blocks.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    if *m == 1 {
                        write!(f, "{a}")?;
                    } else {
                        write!(f, "{a}^{m}")?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// A formal integer combination of atom monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VirtualClass {
    terms: BTreeMap<Vec<Atom>, i64>,
}

impl VirtualClass {
    pub fn zero() -> VirtualClass {
        VirtualClass::default()
    }

    pub fn monomial(mut factors: Vec<Atom>) -> VirtualClass {
        factors.sort();
        let mut terms = BTreeMap::new();
        terms.insert(factors, 1);
        VirtualClass { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Atom>, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn add_term(&mut self, factors: Vec<Atom>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let mut factors = factors;
        factors.sort();
        use std::collections::btree_map::Entry;
        match self.terms.entry(factors) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &VirtualClass) -> VirtualClass {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(m, c)| {
                serde_json::json!({
                    "coeff": c,
                    "factors": m.iter().map(atom_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!(terms)
    }
}

impl fmt::Display for VirtualClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c != 1 {
                write!(f, "{c}*")?;
            }
            if m.is_empty() {
                write!(f, "1")?;
            }
            for (j, a) in m.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

fn atom_json(a: &Atom) -> serde_json::Value {
    match a {
        Atom::Irr {
            family,
            size,
            decoration,
            gamma,
        } => serde_json::json!({
            "kind": "irr",
            "family": family.token(),
            "size": size,
            "decoration": match decoration {
                AtomDecoration::Plain => "none",
                AtomDecoration::DetOne => "det_one",
                AtomDecoration::ModScalar => "mod_scalar",
            },
            "gamma": gamma,
        }),
        Atom::Lefschetz { power } => serde_json::json!({"kind": "lefschetz", "power": power}),
        Atom::Sym { k, inner } => {
            serde_json::json!({"kind": "sym", "k": k, "inner": atom_json(inner)})
        }
        Atom::InvQuot { inner } => {
            serde_json::json!({"kind": "inv_quot", "inner": atom_json(inner)})
        }
        Atom::Wreath { sign, blocks } => serde_json::json!({
            "kind": "wreath",
            "sign": match sign { SignKind::Full => "full", SignKind::Even => "even" },
            "blocks": blocks.iter().map(|(a, m)| serde_json::json!({
                "atom": atom_json(a),
                "mult": m,
            })).collect::<Vec<_>>(),
        }),
    }
}

/// Key identifying an irreducible-locus atom in a table.
pub type AtomKey = (FamilyKind, usize, AtomDecoration, String);

fn key_of(a: &Atom) -> Option<AtomKey> {
    match a {
        Atom::Irr {
            family,
            size,
            decoration,
            gamma,
        } => Some((*family, *size, *decoration, gamma.clone())),
        _ => None,
    }
}

/// Numeric values for irreducible-locus atoms, plus optional values for
/// their inversion quotients.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    pub atoms: BTreeMap<AtomKey, EPolynomial>,
    pub inversion_quotients: BTreeMap<AtomKey, EPolynomial>,
}

impl AtomTable {
    pub fn insert_atom(&mut self, key: AtomKey, value: EPolynomial) {
        self.atoms.insert(key, value);
    }

    pub fn insert_inversion(&mut self, key: AtomKey, value: EPolynomial) {
        self.inversion_quotients.insert(key, value);
    }

    /// Parses `{ "atoms": [{"group","size","gamma","epoly"}...],
    /// "inversion_quotients": [...] }`.
    pub fn from_json(v: &serde_json::Value) -> Result<AtomTable> {
        let mut table = AtomTable::default();
        let parse_list = |field: &str| -> Result<Vec<(AtomKey, EPolynomial)>> {
            let mut out = Vec::new();
            if let Some(list) = v.get(field) {
                let list = list
                    .as_array()
                    .ok_or_else(|| Error::AtomTable(format!("{field} must be an array")))?;
                for entry in list {
                    let group = entry
                        .get("group")
                        .and_then(|g| g.as_str())
                        .ok_or_else(|| Error::AtomTable("missing group".into()))?;
                    let family = FamilyKind::from_token(group)
                        .ok_or_else(|| Error::AtomTable(format!("unknown group {group:?}")))?;
                    let size = entry
                        .get("size")
                        .and_then(|s| s.as_u64())
                        .ok_or_else(|| Error::AtomTable("missing size".into()))?
                        as usize;
                    let gamma = entry
                        .get("gamma")
                        .and_then(|g| g.as_str())
                        .ok_or_else(|| Error::AtomTable("missing gamma".into()))?;
                    let epoly = EPolynomial::from_json(
                        entry
                            .get("epoly")
                            .ok_or_else(|| Error::AtomTable("missing epoly".into()))?,
                    )?;
                    out.push((
                        (family, size, AtomDecoration::Plain, gamma.to_string()),
                        epoly,
                    ));
                }
            }
            Ok(out)
        };
        for (key, value) in parse_list("atoms")? {
            table.insert_atom(key, value);
        }
        for (key, value) in parse_list("inversion_quotients")? {
            table.insert_inversion(key, value);
        }
        Ok(table)
    }
}

/// Result of partially evaluating a virtual class against a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub value: EPolynomial,
    pub residual: VirtualClass,
}

enum AtomValue {
    Known(EPolynomial),
    Unknown,
}

fn eval_atom(a: &Atom, table: &AtomTable) -> AtomValue {
    match a {
        Atom::Irr { .. } => match table.atoms.get(&key_of(a).unwrap()) {
            Some(v) => AtomValue::Known(v.clone()),
            None => AtomValue::Unknown,
        },
        Atom::Lefschetz { power } => AtomValue::Known(EPolynomial::lefschetz_power(*power)),
        Atom::Sym { k, inner } => match eval_atom(inner, table) {
            AtomValue::Known(v) if v.is_zero() && *k >= 1 => AtomValue::Known(EPolynomial::zero()),
            AtomValue::Known(v) => match sym_epoly(&v, *k as i64) {
                Ok(s) => AtomValue::Known(s),
                Err(_) => AtomValue::Unknown,
            },
            AtomValue::Unknown => AtomValue::Unknown,
        },
        Atom::InvQuot { inner } => {
            if let Some(key) = key_of(inner) {
                if let Some(v) = table.inversion_quotients.get(&key) {
                    return AtomValue::Known(v.clone());
                }
            }
            // the quotient of the empty variety is empty
            match eval_atom(inner, table) {
                AtomValue::Known(v) if v.is_zero() => AtomValue::Known(EPolynomial::zero()),
                _ => AtomValue::Unknown,
            }
        }
        Atom::Wreath { sign, blocks } => {
            // a single empty factor kills the whole product
            for (b, m) in blocks {
                if *m >= 1 {
                    if let AtomValue::Known(v) = eval_atom(b, table) {
                        if v.is_zero() {
                            return AtomValue::Known(EPolynomial::zero());
                        }
                    }
                }
            }
            match sign {
                SignKind::Full => {
                    // factorizes per block: Sym^m of the inversion quotient
                    let mut product = EPolynomial::one();
                    for (b, m) in blocks {
                        let inv = Atom::InvQuot {
                            inner: Box::new(b.clone()),
                        };
                        match eval_atom(&inv, table) {
                            AtomValue::Known(v) => match sym_epoly(&v, *m as i64) {
                                Ok(s) => product = product * s,
                                Err(_) => return AtomValue::Unknown,
                            },
                            AtomValue::Unknown => return AtomValue::Unknown,
                        }
                    }
                    AtomValue::Known(product)
                }
                // no closed Sym-type form for the even-sign quotient
                SignKind::Even => AtomValue::Unknown,
            }
        }
    }
}

/// Resolves every atom the table can value; anything else is returned
/// untouched in `residual`, so that value + residual is faithful to the
/// input. Evaluation is all-or-nothing per monomial, except that a factor
/// known to be zero annihilates its monomial.
pub fn specialize(expr: &VirtualClass, table: &AtomTable) -> Specialization {
    let mut value = EPolynomial::zero();
    let mut residual = VirtualClass::zero();
    for (monomial, coeff) in expr.terms() {
        let mut product = EPolynomial::monomial(0, 0, coeff);
        let mut unknown = false;
        let mut zero = false;
        for atom in monomial {
            match eval_atom(atom, table) {
                AtomValue::Known(v) if v.is_zero() => {
                    zero = true;
                    break;
                }
                AtomValue::Known(v) => product = product * v,
                AtomValue::Unknown => unknown = true,
            }
        }
        if zero {
            continue;
        }
        if unknown {
            residual.add_term(monomial.clone(), coeff);
        } else {
            value = value + product;
        }
    }
    Specialization { value, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupFamily;
    use crate::weyl::enumerate_weyl;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uv() -> EPolynomial {
        EPolynomial::lefschetz()
    }

    fn torus() -> EPolynomial {
        EPolynomial::torus()
    }

    #[test]
    fn ring_examples() {
        let one = EPolynomial::one();
        assert_eq!(&torus() + &one, uv());
        let uv_plus_1 = &uv() + &one;
        assert_eq!(
            &torus() * &uv_plus_1,
            EPolynomial::from_triples(&[(2, 2, 1), (0, 0, -1)])
        );
        assert_eq!(
            torus().pow(2),
            EPolynomial::from_triples(&[(2, 2, 1), (1, 1, -2), (0, 0, 1)])
        );
    }

    #[test]
    fn adams_examples() {
        assert_eq!(
            torus().adams(2).unwrap(),
            EPolynomial::from_triples(&[(2, 2, 1), (0, 0, -1)])
        );
        let e = EPolynomial::from_triples(&[(1, 0, 3), (0, 2, -1), (1, 1, 2)]);
        assert_eq!(e.adams(1).unwrap(), e);
        assert_eq!(
            e.adams(2).unwrap().adams(3).unwrap(),
            e.adams(6).unwrap()
        );
        assert!(e.adams(0).is_err());
    }

    #[test]
    fn sym_examples() {
        assert_eq!(sym_epoly(&torus(), 0).unwrap(), EPolynomial::one());
        assert_eq!(
            sym_epoly(&torus(), 2).unwrap(),
            EPolynomial::from_triples(&[(2, 2, 1), (1, 1, -1)])
        );
        assert_eq!(
            sym_epoly(&torus(), 3).unwrap(),
            EPolynomial::from_triples(&[(3, 3, 1), (2, 2, -1)])
        );
        // Sym^k(C*) = q^k - q^(k-1) for all k
        for k in 1..=8i64 {
            assert_eq!(
                sym_epoly(&torus(), k).unwrap(),
                EPolynomial::from_triples(&[(k, k, 1), (k - 1, k - 1, -1)])
            );
        }
        assert_eq!(sym_epoly(&uv(), 2).unwrap(), EPolynomial::lefschetz_power(2));
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> EPolynomial {
        let mut e = EPolynomial::zero();
        for p in 0..=4i64 {
            for q in 0..=(4 - p) {
                let c: i64 = rng.gen_range(-3..=3);
                e = e + EPolynomial::monomial(p, q, c);
            }
        }
        e
    }

    #[test]
    fn sym_matches_newton_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..20 {
            let e = random_poly(&mut rng);
            let psi2 = e.adams(2).unwrap();
            let psi3 = e.adams(3).unwrap();
            // 2 Sym^2 = e^2 + psi_2
            let sym2 = sym_epoly(&e, 2).unwrap();
            let lhs2 = &sym2 + &sym2;
            assert_eq!(lhs2, &e.pow(2) + &psi2);
            // 6 Sym^3 = e^3 + 3 e psi_2 + 2 psi_3
            let sym3 = sym_epoly(&e, 3).unwrap();
            let mut lhs3 = EPolynomial::zero();
            for _ in 0..6 {
                lhs3 = lhs3 + sym3.clone();
            }
            let triple = &(&e * &psi2) + &(&(&e * &psi2) + &(&e * &psi2));
            let rhs3 = &(&e.pow(3) + &triple) + &(&psi3 + &psi3);
            assert_eq!(lhs3, rhs3);
        }
    }

    #[test]
    fn molien_examples() {
        // rank 2, trivial group
        let id2 = WeylElement::identity(2);
        assert_eq!(
            molien_torus_quotient(2, &[id2.clone()]).unwrap(),
            torus().pow(2)
        );
        // rank 1, {id, -id}: the inversion quotient of C* is the line
        let id1 = WeylElement::identity(1);
        let neg = WeylElement::new(vec![0], vec![-1]);
        assert_eq!(molien_torus_quotient(1, &[id1, neg]).unwrap(), uv());
        // rank 2, {id, swap} must equal Sym^2(C*)
        let swap = WeylElement::new(vec![1, 0], vec![1, 1]);
        assert_eq!(
            molien_torus_quotient(2, &[id2, swap]).unwrap(),
            sym_epoly(&torus(), 2).unwrap()
        );
    }

    #[test]
    fn molien_on_symmetric_groups_equals_sym_power() {
        for k in 1..=5usize {
            let family = GroupFamily::new(FamilyKind::Gl, k).unwrap();
            let group: Vec<WeylElement> = enumerate_weyl(family, 8).unwrap().collect();
            assert_eq!(
                molien_torus_quotient(k, &group).unwrap(),
                sym_epoly(&torus(), k as i64).unwrap(),
                "S_{k}"
            );
        }
    }

    #[test]
    fn molien_full_signed_group_is_affine_space() {
        for n in 1..=5usize {
            let family = GroupFamily::new(FamilyKind::Sp, n).unwrap();
            let group: Vec<WeylElement> = enumerate_weyl(family, 8).unwrap().collect();
            assert_eq!(
                molien_torus_quotient(n, &group).unwrap(),
                EPolynomial::lefschetz_power(n as i64),
                "signed group rank {n}"
            );
            // cross-check against the wreath route: Sym^n of the inversion quotient
            assert_eq!(
                sym_epoly(&uv(), n as i64).unwrap(),
                EPolynomial::lefschetz_power(n as i64)
            );
        }
    }

    #[test]
    fn molien_rejects_non_groups() {
        let swap = WeylElement::new(vec![1, 0], vec![1, 1]);
        assert!(molien_torus_quotient(2, &[swap.clone()]).is_err()); // no identity
        let id = WeylElement::identity(2);
        let flip_one = WeylElement::new(vec![0, 1], vec![-1, 1]);
        // {id, swap, flip_one}: swap*flip_one escapes
        assert!(molien_torus_quotient(2, &[id, swap, flip_one]).is_err());
    }

    fn z_table() -> AtomTable {
        let mut t = AtomTable::default();
        t.insert_atom(
            (FamilyKind::Gl, 1, AtomDecoration::Plain, "Z".into()),
            torus(),
        );
        t.insert_inversion(
            (FamilyKind::Gl, 1, AtomDecoration::Plain, "Z".into()),
            uv(),
        );
        t
    }

    #[test]
    fn specialize_examples() {
        let table = z_table();
        let gl1 = Atom::irr(FamilyKind::Gl, 1, "Z");

        let sym2 = VirtualClass::monomial(vec![Atom::sym(2, gl1.clone())]);
        let s = specialize(&sym2, &table);
        assert_eq!(s.value, sym_epoly(&torus(), 2).unwrap());
        assert!(s.residual.is_zero());

        let wreath = VirtualClass::monomial(vec![Atom::wreath(
            SignKind::Full,
            vec![(gl1.clone(), 2)],
        )]);
        let s = specialize(&wreath, &table);
        assert_eq!(s.value, EPolynomial::lefschetz_power(2));
        assert!(s.residual.is_zero());

        let unknown = VirtualClass::monomial(vec![Atom::irr(FamilyKind::Sp, 3, "F2")]);
        let s = specialize(&unknown, &table);
        assert!(s.value.is_zero());
        assert_eq!(s.residual, unknown);
    }

    #[test]
    fn specialize_zero_shortcuts() {
        let mut table = z_table();
        table.insert_atom(
            (FamilyKind::Gl, 2, AtomDecoration::Plain, "Z".into()),
            EPolynomial::zero(),
        );
        // a zero-valued block annihilates the wreath even without an
        // inversion-quotient entry
        let w = VirtualClass::monomial(vec![Atom::wreath(
            SignKind::Full,
            vec![(Atom::irr(FamilyKind::Gl, 2, "Z"), 3)],
        )]);
        let s = specialize(&w, &table);
        assert!(s.value.is_zero());
        assert!(s.residual.is_zero());
        // even-sign wreath with a zero block dies too
        let w = VirtualClass::monomial(vec![Atom::wreath(
            SignKind::Even,
            vec![
                (Atom::irr(FamilyKind::Gl, 1, "Z"), 1),
                (Atom::irr(FamilyKind::Gl, 2, "Z"), 1),
            ],
        )]);
        let s = specialize(&w, &table);
        assert!(s.value.is_zero() && s.residual.is_zero());
        // but an even-sign wreath of live blocks stays residual
        let w = VirtualClass::monomial(vec![Atom::wreath(
            SignKind::Even,
            vec![(Atom::irr(FamilyKind::Gl, 1, "Z"), 2)],
        )]);
        let s = specialize(&w, &table);
        assert!(s.value.is_zero());
        assert_eq!(s.residual, w);
    }

    #[test]
    fn specialize_is_linear() {
        let table = z_table();
        let gl1 = Atom::irr(FamilyKind::Gl, 1, "Z");
        let unknown = Atom::irr(FamilyKind::SoOdd, 2, "Z");
        let mut a = VirtualClass::monomial(vec![Atom::sym(2, gl1.clone())]);
        a.add_term(vec![unknown.clone()], 3);
        let b = VirtualClass::monomial(vec![gl1.clone()]);
        let sum = a.add(&b);
        let sa = specialize(&a, &table);
        let sb = specialize(&b, &table);
        let ssum = specialize(&sum, &table);
        assert_eq!(ssum.value, &sa.value + &sb.value);
        assert_eq!(ssum.residual, sa.residual.add(&sb.residual));
    }

    #[test]
    fn lefschetz_atom_evaluates() {
        let table = AtomTable::default();
        let l = VirtualClass::monomial(vec![Atom::Lefschetz { power: 3 }]);
        let s = specialize(&l, &table);
        assert_eq!(s.value, EPolynomial::lefschetz_power(3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(torus().to_string(), "uv - 1");
        assert_eq!(
            sym_epoly(&torus(), 3).unwrap().to_string(),
            "(uv)^3 - (uv)^2"
        );
        assert_eq!(EPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn atom_table_json_roundtrip() {
        let v = serde_json::json!({
            "atoms": [
                {"group": "gl", "size": 1, "gamma": "Z", "epoly": [[0,0,-1],[1,1,1]]},
            ],
            "inversion_quotients": [
                {"group": "gl", "size": 1, "gamma": "Z", "epoly": [[1,1,1]]},
            ],
        });
        let table = AtomTable::from_json(&v).unwrap();
        let key = (FamilyKind::Gl, 1, AtomDecoration::Plain, "Z".to_string());
        assert_eq!(table.atoms[&key], torus());
        assert_eq!(table.inversion_quotients[&key], uv());
        assert!(AtomTable::from_json(&serde_json::json!({"atoms": [{"group": "xx"}]})).is_err());
    }
}
