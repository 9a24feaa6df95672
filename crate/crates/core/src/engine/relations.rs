//! Known orderings between graph families.
//!
//! Families are first collapsed into groups that always give the same
//! bound; arrows between groups say the head is never worse than the tail.
//! Equalities that rest on transposing the alphabet only hold for the
//! quadratic template and are not applied to sum-of-squares templates.

use serde::{Deserialize, Serialize};

use crate::families::FamilySpec;
use crate::lmi::{LyapunovTemplate, TemplateKind};

/// Expected ordering between the bounds of two graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    /// The first bound never exceeds the second.
    FirstAtMost,
    /// The second bound never exceeds the first.
    SecondAtMost,
    Unrelated,
}

impl Relation {
    /// Whether `(x, y)` is consistent with the relation at relative tolerance `tol`.
    pub fn holds(self, x: f64, y: f64, tol: f64) -> bool {
        match self {
            Relation::Equal => (x - y).abs() <= tol * x.abs().max(y.abs()),
            Relation::FirstAtMost => x <= y * (1.0 + tol),
            Relation::SecondAtMost => y <= x * (1.0 + tol),
            Relation::Unrelated => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Common,
    Power(usize),
    DeBruijn(usize),
    DeBruijnDual(usize),
    G2,
    G2Bar,
    G2Dual,
    G2BarDual,
    Other,
}

fn group(f: Option<&FamilySpec>, quadratic: bool) -> Group {
    let Some(f) = f else { return Group::Other };
    match f {
        FamilySpec::Common | FamilySpec::G3 | FamilySpec::G3Bar | FamilySpec::G4 => Group::Common,
        FamilySpec::CommonPower(1) => Group::Common,
        FamilySpec::CommonPower(t) => Group::Power(*t),
        // G1 is the dual De Bruijn graph of order one.
        FamilySpec::G1 => Group::DeBruijnDual(1),
        FamilySpec::G1Dual => group(Some(&FamilySpec::DeBruijn(1)), quadratic),
        FamilySpec::DeBruijnDual(k) => Group::DeBruijnDual(*k),
        FamilySpec::DeBruijn(1) if quadratic => Group::DeBruijnDual(1),
        FamilySpec::DeBruijn(k) => Group::DeBruijn(*k),
        FamilySpec::G2 | FamilySpec::H3 => Group::G2,
        FamilySpec::G2Bar | FamilySpec::H3Bar => Group::G2Bar,
        FamilySpec::G2Dual | FamilySpec::H3Dual => Group::G2Dual,
        FamilySpec::G2BarDual | FamilySpec::H3BarDual => Group::G2BarDual,
        FamilySpec::H4 | FamilySpec::OneNodeWords(_) => Group::Other,
    }
}

/// Whether `head` is never worse than `tail`.
fn arrow(tail: Group, head: Group, quadratic: bool) -> bool {
    match (tail, head) {
        (Group::Common, h) => h != Group::Common,
        (Group::Power(t), Group::Power(s)) => s != t && s % t == 0,
        (Group::Power(t), Group::DeBruijnDual(k)) => (k + 1) % t == 0,
        (Group::Power(t), Group::DeBruijn(k)) => quadratic && (k + 1) % t == 0,
        _ => false,
    }
}

/// Expected relation between the bounds of two path-complete graphs of
/// the given families (`None` for unclassified graphs).
pub fn expected_relation(
    a: Option<&FamilySpec>,
    b: Option<&FamilySpec>,
    tpl: &LyapunovTemplate,
) -> Relation {
    let quadratic = tpl.kind == TemplateKind::Quadratic;
    let (ga, gb) = (group(a, quadratic), group(b, quadratic));
    if ga == gb && ga != Group::Other {
        Relation::Equal
    } else if arrow(ga, gb, quadratic) {
        Relation::SecondAtMost
    } else if arrow(gb, ga, quadratic) {
        Relation::FirstAtMost
    } else {
        Relation::Unrelated
    }
}
