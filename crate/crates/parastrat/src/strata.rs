//! Assembly of the full stratification for a family: one term per Weyl
//! orbit class with label, Levi shape, residual Weyl descriptor and
//! symbolic atom; cross-validation of the brute-force pipeline against the
//! closed-form enumeration; pairing of Langlands-dual stratifications.
//!
//! The emitted stratification is always the brute-force one. The formula
//! enumeration exists for validation and for symbolic output at ranks
//! beyond the enumeration bound, in which case terms are marked unvalidated.

use crate::levi::{levi_shape, paper_levi_shape, Decoration, LeviShape, TailKind};
use crate::motive::{Atom, AtomDecoration, SignKind, VirtualClass};
use crate::partitions::{
    enumerate_labels, label_from_subset, subset_from_label, Sector, StratumLabel,
};
use crate::rootdata::{FamilyKind, GroupFamily};
use crate::weyl::{stabilizer_quotient_orders, subset_orbits, Subset};
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// The structured form of a residual Weyl group: a product of symmetric
/// groups with an optional sign-pattern part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylDescriptor {
    /// Multiplicities of equal blocks, ascending by block size.
    pub sym_part: Vec<usize>,
    pub sign_part: SignPart,
    pub order: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignPart {
    None,
    Full(usize),
    Even(usize),
}

impl WeylDescriptor {
    fn new(sym_part: Vec<usize>, sign_part: SignPart) -> WeylDescriptor {
        let sym: u128 = sym_part.iter().map(|&k| factorial(k)).product();
        let sign = match sign_part {
            SignPart::None => 1u128,
            SignPart::Full(l) => 1 << l,
            SignPart::Even(l) => {
                if l == 0 {
                    1
                } else {
                    1 << (l - 1)
                }
            }
        };
        WeylDescriptor {
            sym_part,
            sign_part,
            order: sym * sign,
        }
    }

    /// Descriptor implied by a sector/partition label: `S_[k]` with the
    /// family's sign pattern on `|[k]|` units.
    pub fn from_label(label: &StratumLabel) -> WeylDescriptor {
        let mults: Vec<usize> = label
            .partition
            .multiplicities()
            .iter()
            .map(|&(_, k)| k)
            .collect();
        let l = label.partition.len();
        let sign = sign_part_for(label.family.kind, l);
        WeylDescriptor::new(mults, sign)
    }

    /// Descriptor implied by a Levi shape: one symmetric factor per class
    /// of equal GL blocks, with the family's sign pattern on all blocks.
    pub fn from_shape(family: GroupFamily, shape: &LeviShape) -> WeylDescriptor {
        let mut mults: Vec<usize> = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for &b in &shape.gl_blocks {
            match run {
                Some((size, count)) if size == b => run = Some((size, count + 1)),
                Some((_, count)) => {
                    mults.push(count);
                    run = Some((b, 1));
                }
                None => run = Some((b, 1)),
            }
        }
        if let Some((_, count)) = run {
            mults.push(count);
        }
        let l = shape.gl_blocks.len();
        WeylDescriptor::new(mults, sign_part_for(family.kind, l))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sym_part": self.sym_part,
            "sign_part": match self.sign_part {
                SignPart::None => serde_json::json!("none"),
                SignPart::Full(l) => serde_json::json!({"full": l}),
                SignPart::Even(l) => serde_json::json!({"even": l}),
            },
            "order": json_u128(self.order),
        })
    }

    pub fn latex(&self) -> String {
        let sym: Vec<String> = self
            .sym_part
            .iter()
            .filter(|&&k| k >= 2)
            .map(|k| format!("S_{{{k}}}"))
            .collect();
        let sym_str = sym.join(" \\times ");
        let sign_str = match self.sign_part {
            SignPart::None | SignPart::Full(0) | SignPart::Even(0) => String::new(),
            SignPart::Full(l) => format!("\\mathbb{{Z}}_2^{{{l}}}"),
            SignPart::Even(l) => format!("H_{{{l}}}"),
        };
        match (sign_str.is_empty(), sym_str.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => sym_str,
            (false, true) => sign_str,
            (false, false) => format!("{sign_str} \\rtimes ({sym_str})"),
        }
    }
}

impl fmt::Display for WeylDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym: Vec<String> = self
            .sym_part
            .iter()
            .filter(|&&k| k >= 2)
            .map(|k| format!("S{k}"))
            .collect();
        let sym_str = sym.join("x");
        let sign_str = match self.sign_part {
            SignPart::None | SignPart::Full(0) | SignPart::Even(0) => String::new(),
            SignPart::Full(l) => format!("Z2^{l}"),
            SignPart::Even(l) => format!("H{l}"),
        };
        match (sign_str.is_empty(), sym_str.is_empty()) {
            (true, true) => write!(f, "1"),
            (true, false) => write!(f, "{sym_str}"),
            (false, true) => write!(f, "{sign_str}"),
            (false, false) => write!(f, "{sign_str}:{sym_str}"),
        }
    }
}

fn sign_part_for(kind: FamilyKind, l: usize) -> SignPart {
    match kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => SignPart::None,
        FamilyKind::Sp | FamilyKind::SoOdd => SignPart::Full(l),
        FamilyKind::SoEven => SignPart::Even(l),
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

fn json_u128(v: u128) -> serde_json::Value {
    if v <= u64::MAX as u128 {
        serde_json::json!(v as u64)
    } else {
        serde_json::json!(v.to_string())
    }
}

/// One stratum of the emitted (brute-force) stratification.
#[derive(Debug, Clone)]
pub struct StratumTerm {
    pub label: StratumLabel,
    pub representative: Subset,
    pub orbit_size: usize,
    pub levi: LeviShape,
    pub weyl: WeylDescriptor,
    pub weyl_order_bruteforce: u128,
    pub normalizer_splits: bool,
    pub atom: VirtualClass,
}

/// One term of the closed-form enumeration, used for validation only.
#[derive(Debug, Clone)]
pub struct FormulaTerm {
    pub label: StratumLabel,
    pub subset: Subset,
    pub levi: LeviShape,
    pub weyl: WeylDescriptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    LabelCountMismatch,
    LeviMismatch,
    WeylOrderMismatch,
    SectorCrossing,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub label: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Stratification {
    pub family: GroupFamily,
    pub terms: Vec<StratumTerm>,
    pub diagnostics: Vec<Diagnostic>,
    pub notes: Vec<String>,
    /// False when the terms come from the closed forms without brute-force
    /// validation (rank beyond the enumeration bound).
    pub validated: bool,
}

/// The symbolic atom of a stratum: the product of the Levi's irreducible
/// block classes, wrapped in the quotient marker of the residual Weyl
/// group. Sym for plain symmetric parts, full/even wreath markers for sign
/// parts, one opaque atom per tail.
pub fn stratum_atom(family: GroupFamily, shape: &LeviShape, gamma: &str) -> VirtualClass {
    let decoration = match shape.decoration {
        Decoration::None => AtomDecoration::Plain,
        Decoration::DetOne => AtomDecoration::DetOne,
        Decoration::ModScalar => AtomDecoration::ModScalar,
    };
    let block_atom = |size: usize| Atom::Irr {
        family: FamilyKind::Gl,
        size,
        decoration,
        gamma: gamma.to_string(),
    };
    let mut class_list: Vec<(usize, usize)> = Vec::new();
    for &b in &shape.gl_blocks {
        match class_list.last_mut() {
            Some((size, count)) if *size == b => *count += 1,
            _ => class_list.push((b, 1)),
        }
    }

    let mut factors: Vec<Atom> = Vec::new();
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => {
            for (size, count) in class_list {
                factors.push(Atom::sym(count, block_atom(size)));
            }
        }
        FamilyKind::Sp | FamilyKind::SoOdd => {
            for (size, count) in class_list {
                factors.push(Atom::wreath(
                    SignKind::Full,
                    vec![(block_atom(size), count)],
                ));
            }
        }
        FamilyKind::SoEven => {
            let blocks: Vec<(Atom, usize)> = class_list
                .into_iter()
                .map(|(size, count)| (block_atom(size), count))
                .collect();
            let units: usize = blocks.iter().map(|(_, m)| m).sum();
            match units {
                0 => {}
                // H_1 is trivial: a single unit has no sign part
                1 => factors.push(blocks.into_iter().next().unwrap().0),
                _ => factors.push(Atom::wreath(SignKind::Even, blocks)),
            }
        }
    }
    if let Some(tail) = shape.tail {
        let tail_family = match tail.kind {
            TailKind::Sp => FamilyKind::Sp,
            TailKind::SoOdd => FamilyKind::SoOdd,
            TailKind::SoEven => FamilyKind::SoEven,
        };
        factors.push(Atom::Irr {
            family: tail_family,
            size: tail.m,
            decoration,
            gamma: gamma.to_string(),
        });
    }
    VirtualClass::monomial(factors)
}

fn boundary_note(kind: FamilyKind) -> Option<String> {
    match kind {
        FamilyKind::Sp | FamilyKind::SoOdd | FamilyKind::SoEven => Some(
            "label enumeration includes the m=0 boundary labels beyond the displayed \
             closed-form ranges; they are required for the classes to exhaust 2^Delta"
                .to_string(),
        ),
        _ => None,
    }
}

/// The authoritative stratification: brute-force orbit classes with labels,
/// root-datum Levi shapes, residual Weyl orders, and symbolic atoms, plus a
/// diagnostics list recording every disagreement with the closed forms.
pub fn stratify(family: GroupFamily, bound: usize) -> Result<Stratification> {
    let classes = subset_orbits(family, bound)?;
    let reps: Vec<Subset> = classes.iter().map(|c| c.representative).collect();
    let brute_orders = stabilizer_quotient_orders(family, &reps, bound)?;
    let mut terms = Vec::with_capacity(classes.len());
    let mut crossings: Vec<Diagnostic> = Vec::new();

    for (class, &brute) in classes.iter().zip(&brute_orders) {
        let rep = class.representative;
        let label = label_from_subset(family, rep);
        let shape = levi_shape(family, rep);
        let weyl = WeylDescriptor::from_shape(family, &shape);
        let atom = stratum_atom(family, &shape, "Gamma");

        let sectors: Vec<Sector> = {
            let mut s: Vec<Sector> = class
                .members
                .iter()
                .map(|m| label_from_subset(family, *m).sector)
                .collect();
            s.sort();
            s.dedup();
            s
        };
        if sectors.len() > 1 {
            crossings.push(Diagnostic {
                kind: DiagnosticKind::SectorCrossing,
                label: label.to_string(),
                detail: format!(
                    "orbit class of {} spans sectors {}",
                    rep,
                    sectors
                        .iter()
                        .map(|s| s.token())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            });
        }

        terms.push(StratumTerm {
            label,
            representative: rep,
            orbit_size: class.size(),
            levi: shape,
            weyl,
            weyl_order_bruteforce: brute,
            normalizer_splits: true,
            atom,
        });
    }

    let mut strat = Stratification {
        family,
        terms,
        diagnostics: Vec::new(),
        notes: boundary_note(family.kind).into_iter().collect(),
        validated: true,
    };
    let formula = stratify_by_formula(family);
    let report = cross_validate(&strat, &formula);
    let mut diagnostics = report.to_diagnostics();
    diagnostics.extend(crossings);
    diagnostics.sort();
    diagnostics.dedup();
    strat.diagnostics = diagnostics;
    Ok(strat)
}

/// The closed-form enumeration: one term per sector/partition label, with
/// the paper-shape Levi and the label's Weyl descriptor.
pub fn stratify_by_formula(family: GroupFamily) -> Vec<FormulaTerm> {
    enumerate_labels(family)
        .into_iter()
        .map(|label| {
            let subset = subset_from_label(&label).expect("enumerated labels are valid");
            let levi = paper_levi_shape(&label);
            let weyl = WeylDescriptor::from_label(&label);
            FormulaTerm {
                label,
                subset,
                levi,
                weyl,
            }
        })
        .collect()
}

/// Stratification built from the closed forms alone, for ranks beyond the
/// enumeration bound. Orbit data is absent and terms are marked unvalidated.
pub fn stratify_formula_only(family: GroupFamily) -> Stratification {
    let terms = stratify_by_formula(family)
        .into_iter()
        .map(|t| StratumTerm {
            atom: stratum_atom(family, &t.levi, "Gamma"),
            label: t.label,
            representative: t.subset,
            orbit_size: 0,
            levi: t.levi,
            weyl: t.weyl,
            weyl_order_bruteforce: 0,
            normalizer_splits: true,
        })
        .collect();
    let mut notes: Vec<String> = boundary_note(family.kind).into_iter().collect();
    notes.push("formula-derived, unvalidated at this rank".to_string());
    Stratification {
        family,
        terms,
        diagnostics: Vec::new(),
        notes,
        validated: false,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LeviMismatch {
    pub label: String,
    pub bruteforce: String,
    pub formula: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylMismatch {
    pub label: String,
    pub bruteforce_order: u64,
    pub emitted_descriptor_order: u64,
    pub formula_descriptor_order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountMismatch {
    pub label: String,
    pub bruteforce_terms: usize,
    pub formula_terms: usize,
}

/// Machine-readable comparison of a brute-force stratification against a
/// closed-form enumeration, matched by label.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub family: String,
    pub n: usize,
    pub bruteforce_count: usize,
    pub formula_count: usize,
    pub count_mismatches: Vec<CountMismatch>,
    pub levi_mismatches: Vec<LeviMismatch>,
    pub weyl_mismatches: Vec<WeylMismatch>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.count_mismatches.is_empty()
            && self.levi_mismatches.is_empty()
            && self.weyl_mismatches.is_empty()
    }

    pub fn to_diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for c in &self.count_mismatches {
            out.push(Diagnostic {
                kind: DiagnosticKind::LabelCountMismatch,
                label: c.label.clone(),
                detail: format!(
                    "{} brute-force strata vs {} formula terms",
                    c.bruteforce_terms, c.formula_terms
                ),
            });
        }
        for m in &self.levi_mismatches {
            out.push(Diagnostic {
                kind: DiagnosticKind::LeviMismatch,
                label: m.label.clone(),
                detail: format!("root-datum {} vs closed-form {}", m.bruteforce, m.formula),
            });
        }
        for w in &self.weyl_mismatches {
            out.push(Diagnostic {
                kind: DiagnosticKind::WeylOrderMismatch,
                label: w.label.clone(),
                detail: format!(
                    "brute-force order {} vs emitted descriptor {} vs closed-form descriptor {}",
                    w.bruteforce_order, w.emitted_descriptor_order, w.formula_descriptor_order
                ),
            });
        }
        out.sort();
        out
    }
}

pub fn cross_validate(a: &Stratification, b: &[FormulaTerm]) -> ValidationReport {
    let mut brute_by_label: BTreeMap<String, Vec<&StratumTerm>> = BTreeMap::new();
    for t in &a.terms {
        brute_by_label.entry(t.label.to_string()).or_default().push(t);
    }
    let mut formula_by_label: BTreeMap<String, Vec<&FormulaTerm>> = BTreeMap::new();
    for t in b {
        formula_by_label
            .entry(t.label.to_string())
            .or_default()
            .push(t);
    }

    let mut count_mismatches = Vec::new();
    let mut levi_mismatches = Vec::new();
    let mut weyl_mismatches = Vec::new();

    let mut labels: Vec<String> = brute_by_label
        .keys()
        .chain(formula_by_label.keys())
        .cloned()
        .collect();
    labels.sort();
    labels.dedup();

    for label in labels {
        let brute = brute_by_label.get(&label).map(|v| v.as_slice()).unwrap_or(&[]);
        let formula = formula_by_label
            .get(&label)
            .map(|v| v.as_slice())
            .unwrap_or(&[]);
        if brute.len() != 1 || formula.len() != 1 {
            count_mismatches.push(CountMismatch {
                label,
                bruteforce_terms: brute.len(),
                formula_terms: formula.len(),
            });
            continue;
        }
        let (bt, ft) = (brute[0], formula[0]);
        if bt.levi.essentials() != ft.levi.essentials() {
            levi_mismatches.push(LeviMismatch {
                label: label.clone(),
                bruteforce: bt.levi.to_string(),
                formula: ft.levi.to_string(),
            });
        }
        if bt.weyl_order_bruteforce != ft.weyl.order
            || bt.weyl_order_bruteforce != bt.weyl.order
        {
            weyl_mismatches.push(WeylMismatch {
                label,
                bruteforce_order: bt.weyl_order_bruteforce as u64,
                emitted_descriptor_order: bt.weyl.order as u64,
                formula_descriptor_order: ft.weyl.order as u64,
            });
        }
    }

    ValidationReport {
        family: a.family.kind.token().to_string(),
        n: a.family.n,
        bruteforce_count: a.terms.len(),
        formula_count: b.len(),
        count_mismatches,
        levi_mismatches,
        weyl_mismatches,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub left: String,
    pub right: String,
    pub pairs: Vec<(String, String)>,
    pub mismatches: Vec<String>,
    pub unmatched_left: Vec<String>,
    pub unmatched_right: Vec<String>,
}

impl PairingReport {
    pub fn is_perfect(&self) -> bool {
        self.mismatches.is_empty()
            && self.unmatched_left.is_empty()
            && self.unmatched_right.is_empty()
    }
}

/// Label-preserving bijection between the stratifications of a Langlands
/// dual pair: GL parts and Weyl descriptors must agree literally, tails are
/// exchanged Sp_2m <-> SO_2m+1, decorations det_one <-> mod_scalar.
pub fn langlands_pairing(a: &Stratification, b: &Stratification) -> Result<PairingReport> {
    let pair_kinds = (a.family.kind, b.family.kind);
    let ok = matches!(
        pair_kinds,
        (FamilyKind::Sp, FamilyKind::SoOdd)
            | (FamilyKind::SoOdd, FamilyKind::Sp)
            | (FamilyKind::Sl, FamilyKind::Pgl)
            | (FamilyKind::Pgl, FamilyKind::Sl)
    ) && a.family.n == b.family.n;
    if !ok {
        return Err(crate::Error::UnsupportedPair(
            a.family.kind.token(),
            b.family.kind.token(),
        ));
    }

    let key_of = |t: &StratumTerm| {
        format!(
            "{}:{}",
            t.label.sector.token(),
            t.label.partition
        )
    };
    let mut right: BTreeMap<String, &StratumTerm> = BTreeMap::new();
    for t in &b.terms {
        right.insert(key_of(t), t);
    }

    let mut pairs = Vec::new();
    let mut mismatches = Vec::new();
    let mut unmatched_left = Vec::new();
    let mut matched_right: Vec<String> = Vec::new();

    for t in &a.terms {
        let key = key_of(t);
        match right.get(&key) {
            None => unmatched_left.push(t.label.to_string()),
            Some(u) => {
                matched_right.push(key.clone());
                let mut faults = Vec::new();
                if t.levi.gl_blocks != u.levi.gl_blocks {
                    faults.push("gl blocks differ");
                }
                if t.weyl != u.weyl {
                    faults.push("weyl descriptors differ");
                }
                match (t.levi.tail, u.levi.tail) {
                    (None, None) => {}
                    (Some(x), Some(y)) => {
                        let exchanged = x.m == y.m
                            && matches!(
                                (x.kind, y.kind),
                                (TailKind::Sp, TailKind::SoOdd)
                                    | (TailKind::SoOdd, TailKind::Sp)
                            );
                        if !exchanged {
                            faults.push("tails not exchanged");
                        }
                    }
                    _ => faults.push("tail present on one side only"),
                }
                let decorations_swapped = matches!(
                    (t.levi.decoration, u.levi.decoration),
                    (Decoration::DetOne, Decoration::ModScalar)
                        | (Decoration::ModScalar, Decoration::DetOne)
                        | (Decoration::None, Decoration::None)
                );
                if !decorations_swapped {
                    faults.push("decorations not swapped");
                }
                if faults.is_empty() {
                    pairs.push((t.label.to_string(), u.label.to_string()));
                } else {
                    mismatches.push(format!("{}: {}", t.label, faults.join("; ")));
                }
            }
        }
    }
    let unmatched_right = b
        .terms
        .iter()
        .filter(|t| !matched_right.contains(&key_of(t)))
        .map(|t| t.label.to_string())
        .collect();

    Ok(PairingReport {
        left: a.family.to_string(),
        right: b.family.to_string(),
        pairs,
        mismatches,
        unmatched_left,
        unmatched_right,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Text,
    Latex,
    Json,
}

impl Stratification {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.kind.token(),
            "n": self.family.n,
            "group": self.family.group_name(),
            "validated": self.validated,
            "strata": self.terms.iter().map(|t| serde_json::json!({
                "label": t.label.to_json(),
                "representative": t.representative.nodes(),
                "orbit_size": t.orbit_size,
                "levi": t.levi.to_json(),
                "weyl": {
                    "sym_part": t.weyl.sym_part,
                    "sign_part": match t.weyl.sign_part {
                        SignPart::None => serde_json::json!("none"),
                        SignPart::Full(l) => serde_json::json!({"full": l}),
                        SignPart::Even(l) => serde_json::json!({"even": l}),
                    },
                    "order": json_u128(t.weyl.order),
                    "order_bruteforce": json_u128(t.weyl_order_bruteforce),
                },
                "normalizer_splits": t.normalizer_splits,
                "atom": t.atom.to_json(),
            })).collect::<Vec<_>>(),
            "diagnostics": self.diagnostics,
            "notes": self.notes,
        })
    }

    fn latex_levi(shape: &LeviShape) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for &b in &shape.gl_blocks {
            match run {
                Some((size, count)) if size == b => run = Some((size, count + 1)),
                Some((size, count)) => {
                    parts.push(latex_gl(size, count));
                    run = Some((b, 1));
                }
                None => run = Some((b, 1)),
            }
        }
        if let Some((size, count)) = run {
            parts.push(latex_gl(size, count));
        }
        if let Some(t) = shape.tail {
            parts.push(match t.kind {
                TailKind::Sp => format!("\\operatorname{{Sp}}_{{{}}}", 2 * t.m),
                TailKind::SoOdd => format!("\\operatorname{{SO}}_{{{}}}", 2 * t.m + 1),
                TailKind::SoEven => format!("\\operatorname{{SO}}_{{{}}}", 2 * t.m),
            });
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        parts.join(" \\times ")
    }

    pub fn emit(&self, format: EmitFormat) -> String {
        match format {
            EmitFormat::Json => serde_json::to_string_pretty(&self.to_json()).unwrap() + "\n",
            EmitFormat::Text => {
                let mut out = String::new();
                out.push_str(&format!(
                    "stratification of {} (family {} n={}), |W| = {}\n",
                    self.family.group_name(),
                    self.family.kind,
                    self.family.n,
                    self.family.weyl_order(),
                ));
                out.push_str(&format!(
                    "{:<18} {:<12} {:>5}  {:<30} {:<14} {:>8}  {}\n",
                    "label", "rep", "orbit", "levi", "weyl", "|W_I|", "atom"
                ));
                for t in &self.terms {
                    out.push_str(&format!(
                        "{:<18} {:<12} {:>5}  {:<30} {:<14} {:>8}  {}\n",
                        t.label.to_string(),
                        t.representative.to_string(),
                        t.orbit_size,
                        t.levi.to_string(),
                        t.weyl.to_string(),
                        t.weyl_order_bruteforce,
                        t.atom,
                    ));
                }
                for d in &self.diagnostics {
                    out.push_str(&format!(
                        "diagnostic[{:?}] {}: {}\n",
                        d.kind, d.label, d.detail
                    ));
                }
                for n in &self.notes {
                    out.push_str(&format!("note: {n}\n"));
                }
                out
            }
            EmitFormat::Latex => {
                let mut terms: Vec<String> = Vec::new();
                for t in &self.terms {
                    terms.push(format!(
                        "\\left[\\mathcal{{X}}^{{\\ast}}_{{{}}}(\\Gamma) \\sslash {}\\right]",
                        Self::latex_levi(&t.levi),
                        t.weyl.latex(),
                    ));
                }
                format!(
                    "\\left[\\mathcal{{X}}_{{\\operatorname{{{}}}}}(\\Gamma)\\right] = {}\n",
                    latex_group_name(self.family),
                    terms.join(" + ")
                )
            }
        }
    }
}

fn latex_gl(size: usize, count: usize) -> String {
    if count == 1 {
        format!("\\operatorname{{GL}}_{{{size}}}")
    } else {
        format!("\\operatorname{{GL}}_{{{size}}}^{{{count}}}")
    }
}

fn latex_group_name(family: GroupFamily) -> String {
    let n = family.n;
    match family.kind {
        FamilyKind::Gl => format!("GL}}_{{{n}"),
        FamilyKind::Sl => format!("SL}}_{{{n}"),
        FamilyKind::Pgl => format!("PGL}}_{{{n}"),
        FamilyKind::Sp => format!("Sp}}_{{{}", 2 * n),
        FamilyKind::SoOdd => format!("SO}}_{{{}", 2 * n + 1),
        FamilyKind::SoEven => format!("SO}}_{{{}", 2 * n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Partition;

    fn fam(kind: FamilyKind, n: usize) -> GroupFamily {
        GroupFamily::new(kind, n).unwrap()
    }

    #[test]
    fn gl3_strata_labels() {
        let s = stratify(fam(FamilyKind::Gl, 3), 8).unwrap();
        let labels: Vec<String> = s.terms.iter().map(|t| t.label.to_string()).collect();
        assert_eq!(labels, vec!["[1^3]", "[1 2]", "[3]"]);
        assert!(s.diagnostics.is_empty());
        assert!(s.validated);
    }

    #[test]
    fn sp2_strata() {
        let s = stratify(fam(FamilyKind::Sp, 2), 8).unwrap();
        assert_eq!(s.terms.len(), 4);
        let summary: Vec<(String, String)> = s
            .terms
            .iter()
            .map(|t| (t.label.to_string(), t.levi.to_string()))
            .collect();
        // lex order of representatives: {}, {1}, {1,2}, {2}
        assert_eq!(
            summary,
            vec![
                ("[1^2]".to_string(), "GL_1^2".to_string()),
                ("[2]".to_string(), "GL_2".to_string()),
                ("tail:m=0 []".to_string(), "Sp_4".to_string()),
                ("tail:m=1 [1]".to_string(), "GL_1 x Sp_2".to_string()),
            ]
        );
        assert!(s.diagnostics.is_empty());
    }

    #[test]
    fn gl5_partition_stratum_weyl_order() {
        let s = stratify(fam(FamilyKind::Gl, 5), 8).unwrap();
        let term = s
            .terms
            .iter()
            .find(|t| t.label.partition == Partition::new(vec![1, 2, 2]))
            .unwrap();
        assert_eq!(term.weyl_order_bruteforce, 2);
        assert_eq!(term.weyl.order, 2);
        // lex-smallest orbit member; the canonical subset of the label is {2,4}
        assert_eq!(term.representative, Subset::from_nodes(&[1, 3]));
        assert_eq!(
            crate::partitions::subset_from_label(&term.label).unwrap(),
            Subset::from_nodes(&[2, 4])
        );
    }

    #[test]
    fn formula_term_counts() {
        assert_eq!(stratify_by_formula(fam(FamilyKind::Sp, 3)).len(), 7);
        assert_eq!(
            stratify_by_formula(fam(FamilyKind::SoOdd, 2)).len(),
            stratify_by_formula(fam(FamilyKind::Sp, 2)).len()
        );
        assert_eq!(stratify_by_formula(fam(FamilyKind::Gl, 4)).len(), 5);
    }

    #[test]
    fn brute_force_orders_match_closed_forms_for_bc() {
        for kind in [FamilyKind::Sp, FamilyKind::SoOdd] {
            for n in 1..=5 {
                let s = stratify(fam(kind, n), 8).unwrap();
                assert!(s.diagnostics.is_empty(), "{kind} n={n}: {:?}", s.diagnostics);
                for t in &s.terms {
                    let l = t.label.partition.len() as u32;
                    let mult_product: u128 = t
                        .label
                        .partition
                        .multiplicities()
                        .iter()
                        .map(|&(_, k)| factorial(k))
                        .product();
                    assert_eq!(
                        t.weyl_order_bruteforce,
                        (1u128 << l) * mult_product,
                        "{kind} n={n} {label}",
                        label = t.label
                    );
                }
            }
        }
    }

    #[test]
    fn a_type_cross_validation_clean() {
        for n in 1..=6 {
            let s = stratify(fam(FamilyKind::Gl, n), 8).unwrap();
            let f = stratify_by_formula(fam(FamilyKind::Gl, n));
            let report = cross_validate(&s, &f);
            assert!(report.is_clean(), "gl n={n}: {report:?}");
        }
    }

    #[test]
    fn so_even_diagnostics_nonempty() {
        let s = stratify(fam(FamilyKind::SoEven, 4), 8).unwrap();
        assert!(!s.diagnostics.is_empty());
        assert!(s
            .diagnostics
            .iter()
            .any(|d| d.kind == DiagnosticKind::SectorCrossing));
        // the emitted terms still carry brute-force data and cover 2^Delta
        let total: usize = s.terms.iter().map(|t| t.orbit_size).sum();
        assert_eq!(total, 16);
        assert!(s.terms.iter().all(|t| t.weyl_order_bruteforce > 0));
    }

    #[test]
    fn so_even_diagnostics_deterministic() {
        let a = stratify(fam(FamilyKind::SoEven, 4), 8).unwrap();
        let b = stratify(fam(FamilyKind::SoEven, 4), 8).unwrap();
        assert_eq!(a.diagnostics, b.diagnostics);
        assert_eq!(a.emit(EmitFormat::Json), b.emit(EmitFormat::Json));
    }

    #[test]
    fn langlands_pairing_sp_so() {
        for n in 1..=5 {
            let a = stratify(fam(FamilyKind::Sp, n), 8).unwrap();
            let b = stratify(fam(FamilyKind::SoOdd, n), 8).unwrap();
            let report = langlands_pairing(&a, &b).unwrap();
            assert!(report.is_perfect(), "n={n}: {report:?}");
            assert_eq!(report.pairs.len(), a.terms.len());
        }
        let a = stratify(fam(FamilyKind::Sp, 3), 8).unwrap();
        let b = stratify(fam(FamilyKind::SoOdd, 3), 8).unwrap();
        assert_eq!(langlands_pairing(&a, &b).unwrap().pairs.len(), 7);
    }

    #[test]
    fn langlands_pairing_sl_pgl() {
        for n in 2..=5 {
            let a = stratify(fam(FamilyKind::Sl, n), 8).unwrap();
            let b = stratify(fam(FamilyKind::Pgl, n), 8).unwrap();
            let report = langlands_pairing(&a, &b).unwrap();
            assert!(report.is_perfect(), "n={n}: {report:?}");
        }
    }

    #[test]
    fn langlands_rejects_bad_pairs() {
        let a = stratify(fam(FamilyKind::Gl, 2), 8).unwrap();
        let b = stratify(fam(FamilyKind::Sp, 2), 8).unwrap();
        assert!(langlands_pairing(&a, &b).is_err());
    }

    #[test]
    fn emit_formats() {
        let s = stratify(fam(FamilyKind::Gl, 2), 8).unwrap();
        let latex = s.emit(EmitFormat::Latex);
        assert_eq!(latex.matches("\\sslash").count(), 2);
        assert!(latex.contains("\\operatorname{GL}_{1}^{2}"));
        let text = stratify(fam(FamilyKind::Sp, 2), 8).unwrap().emit(EmitFormat::Text);
        let stratum_lines = text
            .lines()
            .filter(|l| l.starts_with("[") || l.starts_with("tail"))
            .count();
        assert_eq!(stratum_lines, 4);
        let json: serde_json::Value =
            serde_json::from_str(&s.emit(EmitFormat::Json)).unwrap();
        assert_eq!(json["strata"].as_array().unwrap().len(), 2);
        assert_eq!(json["strata"][0]["weyl"]["order_bruteforce"], 2);
    }

    #[test]
    fn formula_only_mode_is_marked() {
        let s = stratify_formula_only(fam(FamilyKind::Sp, 12));
        assert!(!s.validated);
        assert!(s.notes.iter().any(|n| n.contains("unvalidated")));
        assert!(s.terms.len() > 0);
    }

    #[test]
    fn descriptor_orders() {
        let d = WeylDescriptor::new(vec![2, 1], SignPart::Full(3));
        assert_eq!(d.order, 16);
        let d = WeylDescriptor::new(vec![3], SignPart::Even(3));
        assert_eq!(d.order, 24);
        let d = WeylDescriptor::new(vec![], SignPart::Even(0));
        assert_eq!(d.order, 1);
        assert_eq!(d.to_string(), "1");
    }
}
