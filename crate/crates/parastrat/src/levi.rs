//! Torus descriptions, canonical cocharacters, and Levi shapes for subsets
//! of simple roots.
//!
//! The root-datum component analysis ([`levi_shape`]) is the single source
//! of truth; the closed forms of [`paper_levi_shape`] exist to be checked
//! against it. The two disagree at known boundary labels of the even
//! orthogonal family, and those disagreements are reported by the strata
//! cross-validation instead of being patched here.

use crate::partitions::{Sector, StratumLabel};
use crate::rootdata::{build_root_datum, pairing, FamilyKind, GroupFamily, RootDatum};
use crate::weyl::Subset;
use serde::Serialize;
use std::fmt;

/// One group of torus coordinates forced together by the kernel equations:
/// `a_c = g^{sign(c)}` for a common parameter g, with g = 1 when `fixed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusGroup {
    pub coords: Vec<usize>,
    pub signs: Vec<i8>,
    pub fixed: bool,
}

/// The subtorus `T_I` of the diagonal maximal torus, as a repeated/inverted
/// coordinate pattern. Groups are ordered by their smallest coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusDescription {
    pub ambient_rank: usize,
    pub groups: Vec<TorusGroup>,
}

impl TorusDescription {
    /// Dimension of the (identity component of the) torus.
    pub fn dim(&self) -> usize {
        self.groups.iter().filter(|g| !g.fixed).count()
    }

    /// Rendering in the style `diag(a, b, b, c, c)`, with `1` for fixed
    /// coordinates and `a^-1` for inverted members.
    pub fn pattern(&self) -> String {
        let mut names = vec![String::new(); self.ambient_rank + 1];
        let mut letter = b'a';
        for g in &self.groups {
            let base = if g.fixed {
                "1".to_string()
            } else {
                let s = (letter as char).to_string();
                letter += 1;
                s
            };
            for (&c, &s) in g.coords.iter().zip(&g.signs) {
                names[c] = if g.fixed || s > 0 {
                    base.clone()
                } else {
                    format!("{base}^-1")
                };
            }
        }
        format!("diag({})", names[1..].join(", "))
    }
}

/// Solves the kernel equations of the simple roots of `I` over the diagonal
/// torus.
pub fn torus_description(family: GroupFamily, i: Subset) -> TorusDescription {
    let datum = build_root_datum(family);
    let n = family.n;
    // Relative sign between linked coordinates: +1 for a_x = a_y,
    // -1 for a_x = a_y^{-1}. Single-coordinate roots pin the coordinate.
    let mut links: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n + 1];
    let mut pinned = vec![false; n + 1];
    for node in i.nodes() {
        let alpha = datum.simple_root(node);
        let support = alpha.support();
        match support.as_slice() {
            [c] => pinned[*c] = true,
            [x, y] => {
                let rel = if alpha.0[x - 1] * alpha.0[y - 1] < 0 {
                    1
                } else {
                    -1
                };
                links[*x].push((*y, rel));
                links[*y].push((*x, rel));
            }
            _ => unreachable!("simple roots have support of size 1 or 2"),
        }
    }

    let mut group_of = vec![usize::MAX; n + 1];
    let mut groups: Vec<TorusGroup> = Vec::new();
    for start in 1..=n {
        if group_of[start] != usize::MAX {
            continue;
        }
        let gi = groups.len();
        let mut coords = Vec::new();
        let mut sign = vec![0i8; n + 1];
        let mut fixed = false;
        sign[start] = 1;
        let mut queue = vec![start];
        group_of[start] = gi;
        while let Some(c) = queue.pop() {
            coords.push(c);
            if pinned[c] {
                fixed = true;
            }
            for &(d, rel) in &links[c] {
                let want = sign[c] * rel;
                if group_of[d] == usize::MAX {
                    group_of[d] = gi;
                    sign[d] = want;
                    queue.push(d);
                } else if sign[d] != want {
                    // the equations force g^2 = 1; keep the identity component
                    fixed = true;
                }
            }
        }
        coords.sort_unstable();
        let signs = coords.iter().map(|&c| sign[c]).collect();
        groups.push(TorusGroup {
            coords,
            signs,
            fixed,
        });
    }
    groups.sort_by_key(|g| g.coords[0]);
    TorusDescription {
        ambient_rank: n,
        groups,
    }
}

/// Canonical integer cocharacter with pairing 0 against every root of `I`
/// and strictly positive against every other simple root: one weight per
/// torus group, strictly decreasing down the pattern, fixed groups at 0,
/// shifted to the sum-zero sublattice for SL.
pub fn cocharacter_of_subset(family: GroupFamily, i: Subset) -> Vec<i64> {
    let desc = torus_description(family, i);
    let n = family.n;
    let mut weights = vec![0i64; n + 1];
    let mut signs = vec![1i8; n + 1];
    let free = desc.dim() as i64;
    let mut next = free;
    for g in &desc.groups {
        let w = if g.fixed {
            0
        } else {
            let w = next;
            next -= 1;
            w
        };
        for (&c, &s) in g.coords.iter().zip(&g.signs) {
            weights[c] = w;
            signs[c] = s;
        }
    }
    let mut lambda: Vec<i64> = (1..=n).map(|c| signs[c] as i64 * weights[c]).collect();
    if family.kind == FamilyKind::Sl {
        let total: i64 = lambda.iter().sum();
        if total % n as i64 == 0 {
            let shift = total / n as i64;
            for v in &mut lambda {
                *v -= shift;
            }
        } else {
            for v in &mut lambda {
                *v = *v * n as i64 - total;
            }
            let g = lambda.iter().fold(0i64, |acc, v| gcd(acc, v.abs()));
            if g > 1 {
                for v in &mut lambda {
                    *v /= g;
                }
            }
        }
    }
    lambda
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ComponentType {
    A,
    B,
    C,
    D,
}

/// A connected full sub-diagram of the family's Dynkin graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    #[serde(rename = "type")]
    pub ctype: ComponentType,
    pub rank: usize,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    Sp,
    SoOdd,
    SoEven,
}

impl TailKind {
    pub fn group_name(self, m: usize) -> String {
        match self {
            TailKind::Sp => format!("Sp_{}", 2 * m),
            TailKind::SoOdd => format!("SO_{}", 2 * m + 1),
            TailKind::SoEven => format!("SO_{}", 2 * m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Tail {
    pub kind: TailKind,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoration {
    None,
    DetOne,
    ModScalar,
}

/// Central torus rank, simple components, and the classical-block form of a
/// Levi subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeviShape {
    pub central_rank: usize,
    pub components: Vec<Component>,
    /// GL block sizes, ascending, one entry of 1 per free coordinate.
    pub gl_blocks: Vec<usize>,
    pub tail: Option<Tail>,
    pub decoration: Decoration,
    /// True when an SO_2 tail was folded into the central torus.
    pub so2_normalized: bool,
}

impl LeviShape {
    /// The data compared by cross-validation: block structure without the
    /// node bookkeeping.
    pub fn essentials(&self) -> (usize, Vec<usize>, Option<Tail>, Decoration) {
        (
            self.central_rank,
            self.gl_blocks.clone(),
            self.tail,
            self.decoration,
        )
    }

    pub fn is_torus(&self) -> bool {
        self.gl_blocks.iter().all(|b| *b == 1) && self.tail.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "central_rank": self.central_rank,
            "components": self.components.iter().map(|c| serde_json::json!({
                "type": format!("{:?}", c.ctype),
                "rank": c.rank,
                "nodes": c.nodes,
            })).collect::<Vec<_>>(),
            "blocks": {
                "gl": self.gl_blocks,
                "tail": self.tail.map(|t| serde_json::json!({
                    "kind": match t.kind {
                        TailKind::Sp => "sp",
                        TailKind::SoOdd => "so-odd",
                        TailKind::SoEven => "so-even",
                    },
                    "m": t.m,
                })),
            },
            "decoration": match self.decoration {
                Decoration::None => "none",
                Decoration::DetOne => "det_one",
                Decoration::ModScalar => "mod_scalar",
            },
            "so2_normalized": self.so2_normalized,
        })
    }
}

impl fmt::Display for LeviShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for &b in &self.gl_blocks {
            match run {
                Some((size, count)) if size == b => run = Some((size, count + 1)),
                Some((size, count)) => {
                    parts.push(render_gl(size, count));
                    run = Some((b, 1));
                }
                None => run = Some((b, 1)),
            }
        }
        if let Some((size, count)) = run {
            parts.push(render_gl(size, count));
        }
        if let Some(t) = self.tail {
            parts.push(t.kind.group_name(t.m));
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        let base = parts.join(" x ");
        match self.decoration {
            Decoration::None => write!(f, "{base}"),
            Decoration::DetOne => write!(f, "({base})_det=1"),
            Decoration::ModScalar => write!(f, "({base})/Gm"),
        }
    }
}

fn render_gl(size: usize, count: usize) -> String {
    if count == 1 {
        format!("GL_{size}")
    } else {
        format!("GL_{size}^{count}")
    }
}

fn decoration_of(kind: FamilyKind) -> Decoration {
    match kind {
        FamilyKind::Sl => Decoration::DetOne,
        FamilyKind::Pgl => Decoration::ModScalar,
        _ => Decoration::None,
    }
}

/// Edges of the family's Dynkin graph among the nodes of `I`, read off the
/// root pairings rather than index arithmetic.
fn induced_adjacency(datum: &RootDatum, i: Subset) -> Vec<Vec<usize>> {
    let nodes = i.nodes();
    let d = datum.family.delta_size();
    let mut adj = vec![Vec::new(); d + 1];
    for (a, &x) in nodes.iter().enumerate() {
        for &y in nodes.iter().skip(a + 1) {
            let alpha = datum.simple_root(x);
            let beta = datum.simple_root(y);
            let c = pairing(alpha, datum.coroot_of(beta).unwrap()).unwrap();
            if c != 0 {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
    }
    adj
}

fn connected_components(i: Subset, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in i.nodes() {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(c) = queue.pop() {
            comp.push(c);
            for &nb in &adj[c] {
                if !seen[nb] {
                    seen[nb] = true;
                    queue.push(nb);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort_by(|a, b| a[0].cmp(&b[0]));
    out
}

fn component_coords(datum: &RootDatum, nodes: &[usize]) -> Vec<usize> {
    let mut coords: Vec<usize> = nodes
        .iter()
        .flat_map(|&node| datum.simple_root(node).support())
        .collect();
    coords.sort_unstable();
    coords.dedup();
    coords
}

fn classify_component(family: GroupFamily, nodes: &[usize]) -> ComponentType {
    let n = family.n;
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => ComponentType::A,
        FamilyKind::Sp => {
            if nodes.contains(&n) {
                ComponentType::C
            } else {
                ComponentType::A
            }
        }
        FamilyKind::SoOdd => {
            if nodes.contains(&n) {
                ComponentType::B
            } else {
                ComponentType::A
            }
        }
        FamilyKind::SoEven => {
            if nodes.contains(&n) && nodes.contains(&(n - 1)) {
                ComponentType::D
            } else {
                ComponentType::A
            }
        }
    }
}

/// The Levi shape of `I` computed from the root datum: connected components
/// of the induced Dynkin sub-diagram, typed by the marked-node pattern,
/// with classical blocks derived from the ambient coordinates they span.
pub fn levi_shape(family: GroupFamily, i: Subset) -> LeviShape {
    let datum = build_root_datum(family);
    let n = family.n;
    let adj = induced_adjacency(&datum, i);
    let comps_nodes = connected_components(i, &adj);

    let is_d_tail = family.kind == FamilyKind::SoEven && i.contains(n) && i.contains(n - 1);
    let mut components = Vec::new();
    let mut gl_blocks = Vec::new();
    let mut tail: Option<Tail> = None;
    let mut used_coords: Vec<usize> = Vec::new();
    let mut tail_coords: Vec<usize> = Vec::new();

    for nodes in comps_nodes {
        let ctype = classify_component(family, &nodes);
        let coords = component_coords(&datum, &nodes);
        let is_tail_comp = match family.kind {
            FamilyKind::Sp | FamilyKind::SoOdd => nodes.contains(&n),
            FamilyKind::SoEven => is_d_tail && (nodes.contains(&n) || nodes.contains(&(n - 1))),
            _ => false,
        };
        components.push(Component {
            ctype,
            rank: nodes.len(),
            nodes,
        });
        if is_tail_comp {
            tail_coords.extend(&coords);
        } else {
            gl_blocks.push(coords.len());
        }
        used_coords.extend(coords);
    }
    used_coords.sort_unstable();
    used_coords.dedup();
    tail_coords.sort_unstable();
    tail_coords.dedup();
    if !tail_coords.is_empty() {
        let kind = match family.kind {
            FamilyKind::Sp => TailKind::Sp,
            FamilyKind::SoOdd => TailKind::SoOdd,
            FamilyKind::SoEven => TailKind::SoEven,
            _ => unreachable!(),
        };
        tail = Some(Tail {
            kind,
            m: tail_coords.len(),
        });
    }

    let leftover = n - used_coords.len();
    gl_blocks.extend(std::iter::repeat(1).take(leftover));
    gl_blocks.sort_unstable();

    let component_rank_sum: usize = components.iter().map(|c| c.rank).sum();
    LeviShape {
        central_rank: n - component_rank_sum,
        components,
        gl_blocks,
        tail,
        decoration: decoration_of(family.kind),
        so2_normalized: false,
    }
}

/// The closed-form Levi shape attached to a sector/partition label.
pub fn paper_levi_shape(label: &StratumLabel) -> LeviShape {
    let family = label.family;
    let n = family.n;
    let m = label.m();
    let parts = label.partition.parts();

    let mut gl_blocks: Vec<usize> = parts.to_vec();
    let mut components = Vec::new();
    let mut acc = 0usize;
    for &p in parts {
        if p >= 2 {
            components.push(Component {
                ctype: ComponentType::A,
                rank: p - 1,
                nodes: ((acc + 1)..(acc + p)).collect(),
            });
        }
        acc += p;
    }

    let mut tail = None;
    let mut so2_normalized = false;
    match label.sector {
        Sector::Plain => {}
        Sector::Tail => {
            let t = n - m;
            let kind = if family.kind == FamilyKind::Sp {
                TailKind::Sp
            } else {
                TailKind::SoOdd
            };
            tail = Some(Tail { kind, m: t });
            components.push(Component {
                ctype: if kind == TailKind::Sp {
                    ComponentType::C
                } else {
                    ComponentType::B
                },
                rank: t,
                nodes: ((m + 1)..=n).collect(),
            });
        }
        Sector::D1 => {
            let t = n - m;
            if t == 1 {
                // an SO_2 factor is a rank-one torus
                so2_normalized = true;
                gl_blocks.push(1);
            } else if t == 2 {
                tail = Some(Tail {
                    kind: TailKind::SoEven,
                    m: 2,
                });
                components.push(Component {
                    ctype: ComponentType::A,
                    rank: 1,
                    nodes: vec![n - 1],
                });
                components.push(Component {
                    ctype: ComponentType::A,
                    rank: 1,
                    nodes: vec![n],
                });
            } else {
                tail = Some(Tail {
                    kind: TailKind::SoEven,
                    m: t,
                });
                components.push(Component {
                    ctype: ComponentType::D,
                    rank: t,
                    nodes: ((m + 1)..=n).collect(),
                });
            }
        }
        Sector::D2 => {
            let t = n - m;
            gl_blocks.push(t);
            components.push(Component {
                ctype: ComponentType::A,
                rank: t - 1,
                nodes: ((m + 1)..=(n - 1)).collect(),
            });
        }
        Sector::D3 => {
            let t = n - m;
            gl_blocks.push(t);
            let mut nodes: Vec<usize> = ((m + 1)..=(n - 2)).collect();
            nodes.push(n);
            components.push(Component {
                ctype: ComponentType::A,
                rank: t - 1,
                nodes,
            });
        }
    }

    gl_blocks.sort_unstable();
    let component_rank_sum: usize = components.iter().map(|c| c.rank).sum();
    LeviShape {
        central_rank: n - component_rank_sum,
        components,
        gl_blocks,
        tail,
        decoration: decoration_of(family.kind),
        so2_normalized,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DCompletion {
    /// The lagrangian spanned by the first n basis vectors.
    Standard,
    /// The other completion, replacing the last basis vector by its partner.
    Twisted,
}

/// The standard flag stabilized by the parabolic subgroup of `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagDescription {
    pub ambient_dim: usize,
    pub isotropic: bool,
    pub dims: Vec<usize>,
    pub orthogonal_dims: Vec<usize>,
    pub d_completion: Option<DCompletion>,
    pub removed_dim: Option<usize>,
}

pub fn flag_description(family: GroupFamily, i: Subset) -> FlagDescription {
    let n = family.n;
    let complement: Vec<usize> = i.complement(family.delta_size()).nodes();
    match family.kind {
        FamilyKind::Gl | FamilyKind::Sl | FamilyKind::Pgl => FlagDescription {
            ambient_dim: n,
            isotropic: false,
            dims: complement,
            orthogonal_dims: Vec::new(),
            d_completion: None,
            removed_dim: None,
        },
        FamilyKind::Sp | FamilyKind::SoOdd => {
            let ambient = if family.kind == FamilyKind::Sp {
                2 * n
            } else {
                2 * n + 1
            };
            let orthogonal_dims = complement
                .iter()
                .rev()
                .map(|&d| ambient - d)
                .filter(|&d| !complement.contains(&d))
                .collect();
            FlagDescription {
                ambient_dim: ambient,
                isotropic: true,
                dims: complement,
                orthogonal_dims,
                d_completion: None,
                removed_dim: None,
            }
        }
        FamilyKind::SoEven => {
            let ambient = 2 * n;
            let (dims, d_completion, removed_dim): (Vec<usize>, _, _) = if i.contains(n) {
                (complement, None, None)
            } else if i.contains(n - 1) {
                (complement, Some(DCompletion::Standard), None)
            } else {
                (
                    complement.into_iter().filter(|&d| d != n - 1).collect(),
                    Some(DCompletion::Twisted),
                    Some(n - 1),
                )
            };
            let orthogonal_dims = dims
                .iter()
                .rev()
                .map(|&d| ambient - d)
                .filter(|&d| !dims.contains(&d))
                .collect();
            FlagDescription {
                ambient_dim: ambient,
                isotropic: true,
                dims,
                orthogonal_dims,
                d_completion,
                removed_dim,
            }
        }
    }
}
