//! Numeric specialization of a stratification for concrete coefficient
//! groups via atom tables, with the built-in table for the infinite cyclic
//! group and the independent torus-quotient reference computation.

use crate::motive::{
    molien_torus_quotient, specialize, Atom, AtomDecoration, AtomTable, EPolynomial, SignKind,
    VirtualClass,
};
use crate::rootdata::{FamilyKind, GroupFamily};
use crate::strata::{stratum_atom, Stratification};
use crate::weyl::{enumerate_weyl, WeylElement};
use crate::{Error, Result};
use itertools::Itertools;

/// Name of the built-in coefficient group: the infinite cyclic group.
pub const GAMMA_Z: &str = "Z";

/// Largest block size the built-in tables carry entries for.
const BUILTIN_MAX_SIZE: usize = 16;

/// The built-in atom table for the infinite cyclic group: a single matrix
/// always has an invariant eigenline (isotropic in the symplectic and
/// orthogonal cases), so every irreducible locus vanishes except the
/// rank-one torus, whose class is the punctured line.
pub fn builtin_table(gamma: &str) -> Result<AtomTable> {
    if gamma != GAMMA_Z {
        return Err(Error::UnknownGamma(gamma.to_string()));
    }
    let mut table = AtomTable::default();
    let zed = |s: &str| s.to_string();
    table.insert_atom(
        (FamilyKind::Gl, 1, AtomDecoration::Plain, zed(GAMMA_Z)),
        EPolynomial::torus(),
    );
    table.insert_inversion(
        (FamilyKind::Gl, 1, AtomDecoration::Plain, zed(GAMMA_Z)),
        EPolynomial::lefschetz(),
    );
    for size in 2..=BUILTIN_MAX_SIZE {
        table.insert_atom(
            (FamilyKind::Gl, size, AtomDecoration::Plain, zed(GAMMA_Z)),
            EPolynomial::zero(),
        );
    }
    for size in 1..=BUILTIN_MAX_SIZE {
        table.insert_atom(
            (FamilyKind::Sp, size, AtomDecoration::Plain, zed(GAMMA_Z)),
            EPolynomial::zero(),
        );
        table.insert_atom(
            (FamilyKind::SoOdd, size, AtomDecoration::Plain, zed(GAMMA_Z)),
            EPolynomial::zero(),
        );
        if size >= 2 {
            table.insert_atom(
                (FamilyKind::SoEven, size, AtomDecoration::Plain, zed(GAMMA_Z)),
                EPolynomial::zero(),
            );
        }
    }
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct StratumEvaluation {
    pub label: String,
    pub levi: String,
    pub value: EPolynomial,
    pub residual: VirtualClass,
    pub resolved_by_molien: bool,
}

#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub family: GroupFamily,
    pub gamma: String,
    pub value: EPolynomial,
    pub residual: VirtualClass,
    pub per_stratum: Vec<StratumEvaluation>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.kind.token(),
            "n": self.family.n,
            "gamma": self.gamma,
            "value": self.value.to_json(),
            "residual": self.residual.to_json(),
            "per_stratum": self.per_stratum.iter().map(|s| serde_json::json!({
                "label": s.label,
                "levi": s.levi,
                "value": s.value.to_json(),
                "residual": s.residual.to_json(),
                "resolved_by_molien": s.resolved_by_molien,
            })).collect::<Vec<_>>(),
        })
    }
}

/// If the monomial is a single sign-quotient marker whose blocks are all
/// rank-one tori under the table, build the explicit signed-permutation
/// group it prescribes and average with the Molien formula.
fn molien_resolve(
    monomial: &[Atom],
    coeff: i64,
    table: &AtomTable,
) -> Result<Option<EPolynomial>> {
    let [Atom::Wreath { sign, blocks }] = monomial else {
        return Ok(None);
    };
    // every block must evaluate to the standard torus
    for (atom, _) in blocks {
        let Atom::Irr {
            family,
            size,
            decoration,
            gamma,
        } = atom
        else {
            return Ok(None);
        };
        let key = (*family, *size, *decoration, gamma.clone());
        match table.atoms.get(&key) {
            Some(v) if *v == EPolynomial::torus() => {}
            _ => return Ok(None),
        }
    }
    let mults: Vec<usize> = blocks.iter().map(|(_, m)| *m).collect();
    let rank: usize = mults.iter().sum();
    let group = wreath_group(*sign, &mults);
    let value = molien_torus_quotient(rank, &group)?;
    Ok(Some(&EPolynomial::monomial(0, 0, coeff) * &value))
}

/// The finite signed-permutation group `Sign_l x| prod S_(m_c)` acting on
/// `l = sum m_c` coordinates grouped into consecutive classes.
pub fn wreath_group(sign: SignKind, class_sizes: &[usize]) -> Vec<WeylElement> {
    let rank: usize = class_sizes.iter().sum();
    // block-respecting permutations: product of symmetric groups on the
    // consecutive coordinate ranges
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    let mut offset = 0usize;
    for &m in class_sizes {
        let class_perms: Vec<Vec<usize>> = (offset..offset + m).permutations(m).collect();
        let mut next = Vec::with_capacity(perms.len() * class_perms.len());
        for prefix in &perms {
            for cp in &class_perms {
                let mut p = prefix.clone();
                p.extend(cp.iter().copied());
                next.push(p);
            }
        }
        perms = next;
        offset += m;
    }
    let sign_masks: Vec<u32> = match sign {
        SignKind::Full => (0..1u32 << rank).collect(),
        SignKind::Even => (0..1u32 << rank)
            .filter(|m| m.count_ones() % 2 == 0)
            .collect(),
    };
    let mut out = Vec::with_capacity(perms.len() * sign_masks.len());
    for p in &perms {
        for &mask in &sign_masks {
            let signs = (0..rank)
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            out.push(WeylElement::new(p.clone(), signs));
        }
    }
    out
}

/// Sums the specializations of every stratum atom. When `torus_molien` is
/// set (built-in table only), sign-part quotients of strata whose blocks
/// are all rank-one tori are resolved exactly through the Molien average.
pub fn evaluate_stratification(
    strat: &Stratification,
    table: &AtomTable,
    gamma: &str,
    torus_molien: bool,
) -> Result<EvaluationReport> {
    let mut total = EPolynomial::zero();
    let mut total_residual = VirtualClass::zero();
    let mut per_stratum = Vec::with_capacity(strat.terms.len());

    for term in &strat.terms {
        let atom = stratum_atom(strat.family, &term.levi, gamma);
        let spec = specialize(&atom, table);
        let mut value = spec.value;
        let mut residual = VirtualClass::zero();
        let mut resolved_by_molien = false;
        for (monomial, coeff) in spec.residual.terms() {
            let resolved = if torus_molien {
                molien_resolve(monomial, coeff, table)?
            } else {
                None
            };
            match resolved {
                Some(v) => {
                    value = value + v;
                    resolved_by_molien = true;
                }
                None => residual.add_term(monomial.clone(), coeff),
            }
        }
        total = &total + &value;
        total_residual = total_residual.add(&residual);
        per_stratum.push(StratumEvaluation {
            label: term.label.to_string(),
            levi: term.levi.to_string(),
            value,
            residual,
            resolved_by_molien,
        });
    }

    Ok(EvaluationReport {
        family: strat.family,
        gamma: gamma.to_string(),
        value: total,
        residual: total_residual,
        per_stratum,
    })
}

/// Independent reference for the infinite cyclic group: the character
/// variety is the maximal torus modulo the full Weyl group, evaluated as a
/// Molien average over the Weyl group acting by signed permutations.
///
/// For SL/PGL the torus lattice is not the full `Z^n`, so the reference is
/// reported for GL only.
pub fn tw_reference(family: GroupFamily, bound: usize) -> Result<EPolynomial> {
    match family.kind {
        FamilyKind::Sl | FamilyKind::Pgl => {
            return Err(Error::UnsupportedReference(family.kind.token()))
        }
        _ => {}
    }
    let group: Vec<WeylElement> = enumerate_weyl(family, bound)?.collect();
    molien_torus_quotient(family.n, &group)
}

/// Outcome of comparing an evaluation against the torus/Weyl reference.
#[derive(Debug, Clone)]
pub struct ComparisonVerdict {
    pub evaluated: EPolynomial,
    pub reference: EPolynomial,
    pub residual_empty: bool,
    pub equal: bool,
}

pub fn compare_with_reference(
    report: &EvaluationReport,
    bound: usize,
) -> Result<ComparisonVerdict> {
    let reference = tw_reference(report.family, bound)?;
    Ok(ComparisonVerdict {
        equal: report.value == reference && report.residual.is_zero(),
        evaluated: report.value.clone(),
        reference,
        residual_empty: report.residual.is_zero(),
    })
}
