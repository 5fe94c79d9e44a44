//! The lift and forgetful functors, and canonical regrouping combs.

use crate::error::TypeError;
use crate::term::{typecheck, MorphismTerm};
use crate::theory::ObjectWord;

use super::{owned_typecheck, OwnedTerm, OwnedTheory, OwnedWord};

/// Lifts a base term to owner `owner`: the action of the strong symmetric
/// monoidal functor tagging everything with that owner.
pub fn lift(owner: &str, f: &MorphismTerm, theory: &OwnedTheory) -> Result<OwnedTerm, TypeError> {
    theory.expect_owner(owner)?;
    typecheck(f, theory.base())?;
    Ok(OwnedTerm::Lifted(owner.to_string(), f.clone()))
}

/// Strips ownership. Lifted terms map to their base terms (syntactically),
/// and the structural generators — regroupings and transfers — map to
/// identities on the underlying base words.
pub fn forget(term: &OwnedTerm, theory: &OwnedTheory) -> Result<MorphismTerm, TypeError> {
    owned_typecheck(term, theory)?;
    Ok(strip(term))
}

fn strip(term: &OwnedTerm) -> MorphismTerm {
    match term {
        OwnedTerm::Lifted(_, f) => f.clone(),
        OwnedTerm::PhiPair(_, x, y) | OwnedTerm::PsiPair(_, x, y) => {
            MorphismTerm::Id(x.tensor(y))
        }
        OwnedTerm::PhiUnit(_) | OwnedTerm::PsiUnit(_) => MorphismTerm::Id(ObjectWord::unit()),
        OwnedTerm::Gamma(x, _, _) => MorphismTerm::Id(x.clone()),
        OwnedTerm::OId(p) => MorphismTerm::Id(p.forget()),
        OwnedTerm::OSym(p, q) => {
            let (up, uq) = (p.forget(), q.forget());
            if up.is_empty() || uq.is_empty() {
                MorphismTerm::Id(up.tensor(&uq))
            } else {
                MorphismTerm::Sym(up, uq)
            }
        }
        OwnedTerm::OSeq(a, b) => MorphismTerm::smart_seq(strip(a), strip(b)),
        OwnedTerm::OPar(l, r) => MorphismTerm::smart_par(strip(l), strip(r)),
    }
}

/// The left-nested merge comb witnessing that a single-owner word is
/// isomorphic to one collection holding the concatenated payload.
///
/// The empty word maps through `phiI`, a single atom through the identity,
/// and a longer word through `phi` steps folding left to right. The mirrored
/// split comb [`canonical_split`] is its two-sided inverse.
pub fn canonical_regroup(
    word: &OwnedWord,
    owner: &str,
    theory: &OwnedTheory,
) -> Result<OwnedTerm, TypeError> {
    check_single_owner(word, owner, theory)?;
    match word.len() {
        0 => Ok(OwnedTerm::PhiUnit(owner.to_string())),
        1 => Ok(OwnedTerm::OId(word.clone())),
        _ => {
            let atoms = word.atoms();
            let mut acc = atoms[0].payload.clone();
            let mut layers = Vec::new();
            for i in 1..atoms.len() {
                let step = OwnedTerm::PhiPair(
                    owner.to_string(),
                    acc.clone(),
                    atoms[i].payload.clone(),
                );
                let rest = OwnedWord::new(atoms[i + 1..].to_vec());
                layers.push(OwnedTerm::smart_opar(step, OwnedTerm::OId(rest)));
                acc = acc.tensor(&atoms[i].payload);
            }
            Ok(OwnedTerm::oseq_all(layers).expect("at least one layer"))
        }
    }
}

/// The mirrored split comb: the inverse of [`canonical_regroup`], unfolding
/// one collection into the given single-owner word.
pub fn canonical_split(
    word: &OwnedWord,
    owner: &str,
    theory: &OwnedTheory,
) -> Result<OwnedTerm, TypeError> {
    check_single_owner(word, owner, theory)?;
    match word.len() {
        0 => Ok(OwnedTerm::PsiUnit(owner.to_string())),
        1 => Ok(OwnedTerm::OId(word.clone())),
        _ => {
            let atoms = word.atoms();
            let mut prefixes = vec![atoms[0].payload.clone()];
            for atom in &atoms[1..] {
                let next = prefixes.last().expect("nonempty").tensor(&atom.payload);
                prefixes.push(next);
            }
            let mut layers = Vec::new();
            for i in (1..atoms.len()).rev() {
                let step = OwnedTerm::PsiPair(
                    owner.to_string(),
                    prefixes[i - 1].clone(),
                    atoms[i].payload.clone(),
                );
                let rest = OwnedWord::new(atoms[i + 1..].to_vec());
                layers.push(OwnedTerm::smart_opar(step, OwnedTerm::OId(rest)));
            }
            Ok(OwnedTerm::oseq_all(layers).expect("at least one layer"))
        }
    }
}

fn check_single_owner(word: &OwnedWord, owner: &str, theory: &OwnedTheory) -> Result<(), TypeError> {
    theory.expect_owner(owner)?;
    for atom in word.atoms() {
        if atom.owner != owner {
            return Err(TypeError::MixedOwnership(
                word.to_string(),
                owner.to_string(),
            ));
        }
    }
    Ok(())
}
