//! The staged normal form for owned terms.
//!
//! Every owned morphism `t : P -> Q` factors as
//!
//! ```text
//! [transfer stage] ; [merge comb] ; [lifted residual] ; [split comb] ; [transfer stage]
//! ```
//!
//! where the first transfer stage retags every atom of `P` to a pivot owner,
//! the merge comb collapses the retagged word into a single collection, the
//! residual is one lifted base term (the canonical layered extraction of the
//! term's forgetful image), and the trailing comb and transfer stage mirror
//! the front ones toward `Q`. The factorization is justified by the adjoint
//! equivalence between the base and owned theories: the pivot's lift functor
//! is fully faithful with the forgetful functor as inverse on hom-sets, so a
//! morphism is determined by its endpoints and its forgetful image, and the
//! staged term above is the canonical representative with that data.
//!
//! Stages collapse when trivial: self-transfers vanish, combs on single atoms
//! vanish, an identity residual vanishes, and when everything else vanishes
//! the adjacent transfer stages fuse atom by atom (a transfer composed with a
//! transfer is one transfer; a self-transfer is an identity). Normalization
//! is idempotent — the output extracts and rebuilds to itself — and sound:
//! the output always compares equal to the input.

use crate::diagram::{extract_term, to_diagram};
use crate::error::TypeError;

use super::functor::{canonical_regroup, canonical_split, forget};
use super::{owned_typecheck, OwnedAtom, OwnedTerm, OwnedTheory, OwnedWord};

/// Rewrites a term into the staged normal form described at module level.
pub fn normalize_owned(term: &OwnedTerm, theory: &OwnedTheory) -> Result<OwnedTerm, TypeError> {
    let (dom, cod) = owned_typecheck(term, theory)?;
    let base = forget(term, theory)?;
    let residual = extract_term(&to_diagram(&base, theory.base())?);

    let pivot = dom
        .atoms()
        .first()
        .or_else(|| cod.atoms().first())
        .map(|a| a.owner.clone())
        .unwrap_or_else(|| theory.owners()[0].name.clone());

    let dom_retagged = retag(&dom, &pivot);
    let cod_retagged = retag(&cod, &pivot);

    if residual.is_id() && dom_retagged == cod_retagged {
        // No residual work and matching payload partitions: the combs cancel
        // and the two transfer stages fuse into one tensor of transfers.
        return Ok(transfer_tensor(&dom, &cod));
    }

    let mid = if residual.is_id() {
        OwnedTerm::OId(OwnedWord::single(OwnedAtom::new(
            dom.forget(),
            pivot.clone(),
        )))
    } else {
        OwnedTerm::Lifted(pivot.clone(), residual)
    };
    let stages = [
        transfer_tensor(&dom, &dom_retagged),
        canonical_regroup(&dom_retagged, &pivot, theory)?,
        mid,
        canonical_split(&cod_retagged, &pivot, theory)?,
        transfer_tensor(&cod_retagged, &cod),
    ];
    Ok(stages
        .into_iter()
        .fold(OwnedTerm::OId(dom), OwnedTerm::smart_oseq))
}

fn retag(word: &OwnedWord, owner: &str) -> OwnedWord {
    word.atoms()
        .iter()
        .map(|a| OwnedAtom::new(a.payload.clone(), owner))
        .collect()
}

/// Tensor of transfers sending `from` to `to` atom by atom; positions whose
/// owner does not change contribute identity wiring.
fn transfer_tensor(from: &OwnedWord, to: &OwnedWord) -> OwnedTerm {
    debug_assert_eq!(from.len(), to.len());
    let factors = from.atoms().iter().zip(to.atoms()).map(|(a, b)| {
        debug_assert_eq!(a.payload, b.payload);
        if a.owner == b.owner {
            OwnedTerm::OId(OwnedWord::single(a.clone()))
        } else {
            OwnedTerm::Gamma(a.payload.clone(), a.owner.clone(), b.owner.clone())
        }
    });
    factors.fold(OwnedTerm::OId(OwnedWord::unit()), OwnedTerm::smart_opar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owned::{build_ownership_theory, owned_equal, Owner};
    use crate::parse::{parse_owned_term, parse_theory};
    use crate::eq::EqResult;

    fn owned_bread() -> OwnedTheory {
        let base = parse_theory(
            "atoms bread dough water flour oven\n\
             gen mix : water * flour -> dough\n\
             gen knead : dough -> dough\n\
             gen bake : dough * oven -> bread * oven\n",
        )
        .unwrap();
        build_ownership_theory(
            base,
            vec![
                Owner::with_default_colour("Alice", 0),
                Owner::with_default_colour("Bob", 1),
                Owner::with_default_colour("Carol", 2),
            ],
        )
        .unwrap()
    }

    fn norm(src: &str, th: &OwnedTheory) -> OwnedTerm {
        normalize_owned(&parse_owned_term(src, th).unwrap(), th).unwrap()
    }

    #[test]
    fn transfers_fuse_transitively() {
        let th = owned_bread();
        let t = norm("gamma(dough, Alice->Bob) ; gamma(dough, Bob->Carol)", &th);
        assert_eq!(t.to_string(), "gamma(dough, Alice->Carol)");
    }

    #[test]
    fn split_then_merge_cancels() {
        let th = owned_bread();
        let t = norm("psi@Alice(dough, oven) ; phi@Alice(dough, oven)", &th);
        assert_eq!(t.to_string(), "id((dough*oven)@Alice)");
    }

    #[test]
    fn self_transfer_is_the_identity() {
        let th = owned_bread();
        let t = norm("gamma(dough, Alice->Alice)", &th);
        assert_eq!(t.to_string(), "id(dough@Alice)");
    }

    #[test]
    fn lifted_composites_normalize_to_one_residual() {
        let th = owned_bread();
        let a = norm("(mix ; knead)@Alice", &th);
        let b = norm("mix@Alice ; knead@Alice", &th);
        assert_eq!(a, b);
        assert!(matches!(a, OwnedTerm::Lifted(..)));
    }

    #[test]
    fn normalization_is_idempotent_and_sound() {
        let th = owned_bread();
        for src in [
            "gamma(dough, Alice->Bob) ; gamma(dough, Bob->Carol)",
            "psi@Alice(dough, oven) ; phi@Alice(dough, oven)",
            "mix@Alice ; knead@Alice ; gamma(dough, Alice->Bob)",
            "phi@Carol(dough, oven) ; bake@Carol ; psi@Carol(bread, oven)",
            "sym(dough@Alice, oven@Bob)",
            "phiI@Alice ; psiI@Alice",
            "id(I)",
        ] {
            let t = parse_owned_term(src, &th).unwrap();
            let n1 = normalize_owned(&t, &th).unwrap();
            let n2 = normalize_owned(&n1, &th).unwrap();
            assert_eq!(n1, n2, "normalization not idempotent on {src}");
            assert_eq!(
                owned_equal(&t, &n1, &th).unwrap(),
                EqResult::Equal,
                "normalization unsound on {src}"
            );
        }
    }

    #[test]
    fn scalar_round_trip_normalizes_to_the_unit_identity() {
        let th = owned_bread();
        let t = norm("phiI@Alice ; psiI@Alice", &th);
        assert_eq!(t.to_string(), "id(I)");
    }
}
