//! Owned terms as renderable diagrams.
//!
//! Wires carry the payload word as text and the owner as colour key, so a
//! rendered wire shows its collection and is tinted with its owner's colour.
//! Regroupings become merge and fork junctions, and transfers become bars at
//! which the wire colour changes.

use crate::diagram::{Diagram, DiagramNode, Frag, NodeKind, WireLabel};
use crate::error::TypeError;

use super::{owned_typecheck, OwnedAtom, OwnedTerm, OwnedTheory, OwnedWord};

fn atom_label(atom: &OwnedAtom) -> WireLabel {
    WireLabel::coloured(atom.payload.to_string(), atom.owner.clone())
}

fn word_labels(word: &OwnedWord) -> Vec<WireLabel> {
    word.atoms().iter().map(atom_label).collect()
}

/// Converts an owned term to a diagram for layout and rendering.
pub fn owned_to_diagram(term: &OwnedTerm, theory: &OwnedTheory) -> Result<Diagram, TypeError> {
    owned_typecheck(term, theory)?;
    Ok(build(term, theory).into_diagram())
}

fn build(term: &OwnedTerm, theory: &OwnedTheory) -> Frag {
    match term {
        OwnedTerm::OId(w) => Frag::id(word_labels(w)),
        OwnedTerm::OSym(l, r) => Frag::sym(word_labels(l), word_labels(r)),
        OwnedTerm::OSeq(a, b) => build(a, theory).seq(build(b, theory)),
        OwnedTerm::OPar(l, r) => build(l, theory).par(build(r, theory)),
        other => {
            let (dom, cod) = owned_typecheck(other, theory).expect("typechecked term");
            let (label, kind) = match other {
                OwnedTerm::Lifted(..) => (other.to_string(), NodeKind::Box),
                OwnedTerm::PhiPair(a, _, _) => (format!("phi@{a}"), NodeKind::Merge),
                OwnedTerm::PhiUnit(a) => (format!("phiI@{a}"), NodeKind::Merge),
                OwnedTerm::PsiPair(a, _, _) => (format!("psi@{a}"), NodeKind::Fork),
                OwnedTerm::PsiUnit(a) => (format!("psiI@{a}"), NodeKind::Fork),
                OwnedTerm::Gamma(_, from, to) => (format!("{from}->{to}"), NodeKind::Transfer),
                _ => unreachable!("structural cases handled above"),
            };
            Frag::node(DiagramNode {
                label,
                kind,
                in_labels: word_labels(&dom),
                out_labels: word_labels(&cod),
            })
        }
    }
}
