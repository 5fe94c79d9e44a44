//! Owned resources: the free construction that tags a resource theory with
//! owners.
//!
//! Given a base theory and a set of owners, the owned theory has as objects
//! words of owned atoms `X@A` — a whole base word `X` held by owner `A` as a
//! single indivisible collection. The empty word is the unit and is distinct
//! from `I@A`, an atom with empty payload: the former is "nothing", the latter
//! is "an empty collection that Alice holds". Morphisms are generated by
//!
//! * `f@A` — owner `A` performs the base transformation `f` on one of their
//!   collections (a single atom in, a single atom out);
//! * `phi@A(X, Y) : X@A * Y@A -> (X*Y)@A` and its inverse
//!   `psi@A(X, Y)` — regrouping of collections with a common owner;
//! * `phiI@A : I -> I@A` and `psiI@A : I@A -> I` — creation and deletion of
//!   empty collections;
//! * `gamma(X, A->B) : X@A -> X@B` — change of ownership;
//!
//! plus identities, braidings, composition, and tensor. Regrouping commutes
//! with lifted transformations and with change of ownership, any two
//! regroupings of equal type are equal, ownership transfers compose
//! transitively, and a self-transfer is the identity. Those laws make every
//! lift `f |-> f@A` a strong symmetric monoidal functor and, more strongly, an
//! adjoint equivalence between the base theory and the owned theory; the
//! normalizer and the equality decision in [`normalize`] and [`equal`] are
//! built directly on that equivalence.

mod diagram;
mod equal;
mod functor;
mod normalize;

pub use diagram::owned_to_diagram;
pub use equal::{owned_equal, owned_equal_with_budget, DEFAULT_BASE_BUDGET};
pub use functor::{canonical_regroup, canonical_split, forget, lift};
pub use normalize::normalize_owned;

use std::collections::HashMap;
use std::fmt;

use crate::error::{TheoryError, TypeError};
use crate::term::{typecheck, MorphismTerm};
use crate::theory::{is_valid_ident, ObjectWord, Theory};

/// A potential resource owner. The colour is a display hint for diagrams and
/// carries no semantic content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Owner {
    pub name: String,
    pub colour: String,
}

/// Classic palette handed out to owners declared without an explicit colour.
pub const DEFAULT_PALETTE: &[&str] = &[
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
];

impl Owner {
    pub fn new(name: impl Into<String>, colour: impl Into<String>) -> Self {
        Owner {
            name: name.into(),
            colour: colour.into(),
        }
    }

    /// Owner with a palette colour chosen by declaration index.
    pub fn with_default_colour(name: impl Into<String>, index: usize) -> Self {
        Owner {
            name: name.into(),
            colour: DEFAULT_PALETTE[index % DEFAULT_PALETTE.len()].to_string(),
        }
    }
}

/// One owned collection: a base word held by a single owner.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OwnedAtom {
    pub payload: ObjectWord,
    pub owner: String,
}

impl OwnedAtom {
    pub fn new(payload: ObjectWord, owner: impl Into<String>) -> Self {
        OwnedAtom {
            payload,
            owner: owner.into(),
        }
    }
}

impl fmt::Display for OwnedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.payload.len() {
            0 => write!(f, "I@{}", self.owner),
            1 => write!(f, "{}@{}", self.payload, self.owner),
            _ => write!(f, "({})@{}", self.payload, self.owner),
        }
    }
}

/// An object of the owned theory: a word of owned atoms. The empty word is
/// the monoidal unit and is distinct from any single atom, including `I@A`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OwnedWord(Vec<OwnedAtom>);

impl OwnedWord {
    pub fn unit() -> Self {
        OwnedWord(Vec::new())
    }

    pub fn new(atoms: Vec<OwnedAtom>) -> Self {
        OwnedWord(atoms)
    }

    pub fn single(atom: OwnedAtom) -> Self {
        OwnedWord(vec![atom])
    }

    pub fn atoms(&self) -> &[OwnedAtom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tensor(&self, other: &OwnedWord) -> OwnedWord {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        OwnedWord(atoms)
    }

    /// The underlying base word: payload concatenation, owners forgotten.
    pub fn forget(&self) -> ObjectWord {
        self.0
            .iter()
            .fold(ObjectWord::unit(), |acc, a| acc.tensor(&a.payload))
    }
}

impl fmt::Display for OwnedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromIterator<OwnedAtom> for OwnedWord {
    fn from_iter<T: IntoIterator<Item = OwnedAtom>>(iter: T) -> Self {
        OwnedWord(iter.into_iter().collect())
    }
}

/// A morphism expression of the owned theory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OwnedTerm {
    /// `f@A`: one owner's action on a single collection.
    Lifted(String, MorphismTerm),
    /// `phi@A(X, Y) : X@A * Y@A -> (X*Y)@A`.
    PhiPair(String, ObjectWord, ObjectWord),
    /// `phiI@A : I -> I@A`.
    PhiUnit(String),
    /// `psi@A(X, Y) : (X*Y)@A -> X@A * Y@A`.
    PsiPair(String, ObjectWord, ObjectWord),
    /// `psiI@A : I@A -> I`.
    PsiUnit(String),
    /// `gamma(X, A->B) : X@A -> X@B`.
    Gamma(ObjectWord, String, String),
    OId(OwnedWord),
    OSym(OwnedWord, OwnedWord),
    OSeq(Box<OwnedTerm>, Box<OwnedTerm>),
    OPar(Box<OwnedTerm>, Box<OwnedTerm>),
}

impl OwnedTerm {
    pub fn oseq(first: OwnedTerm, second: OwnedTerm) -> Self {
        OwnedTerm::OSeq(Box::new(first), Box::new(second))
    }

    pub fn opar(left: OwnedTerm, right: OwnedTerm) -> Self {
        OwnedTerm::OPar(Box::new(left), Box::new(right))
    }

    pub fn oseq_all(terms: impl IntoIterator<Item = OwnedTerm>) -> Option<OwnedTerm> {
        terms.into_iter().reduce(OwnedTerm::oseq)
    }

    pub fn opar_all(terms: impl IntoIterator<Item = OwnedTerm>) -> OwnedTerm {
        terms
            .into_iter()
            .reduce(OwnedTerm::opar)
            .unwrap_or_else(|| OwnedTerm::OId(OwnedWord::unit()))
    }

    pub(crate) fn smart_oseq(first: OwnedTerm, second: OwnedTerm) -> OwnedTerm {
        match (first, second) {
            (OwnedTerm::OId(_), t) => t,
            (t, OwnedTerm::OId(_)) => t,
            (a, b) => OwnedTerm::oseq(a, b),
        }
    }

    pub(crate) fn smart_opar(left: OwnedTerm, right: OwnedTerm) -> OwnedTerm {
        match (left, right) {
            (OwnedTerm::OId(v), OwnedTerm::OId(w)) => OwnedTerm::OId(v.tensor(&w)),
            (OwnedTerm::OId(v), t) if v.is_empty() => t,
            (t, OwnedTerm::OId(v)) if v.is_empty() => t,
            (a, b) => OwnedTerm::opar(a, b),
        }
    }

    pub fn is_id(&self) -> bool {
        matches!(self, OwnedTerm::OId(_))
    }
}

impl fmt::Display for OwnedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn par_factor(t: &OwnedTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                OwnedTerm::OSeq(_, _) => write!(f, "({t})"),
                OwnedTerm::OPar(a, b) => {
                    par_factor(a, f)?;
                    f.write_str(" * ")?;
                    par_factor(b, f)
                }
                _ => atom(t, f),
            }
        }
        fn atom(t: &OwnedTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                OwnedTerm::Lifted(owner, base) => match base {
                    MorphismTerm::Gen(name) => write!(f, "{name}@{owner}"),
                    other => write!(f, "({other})@{owner}"),
                },
                OwnedTerm::PhiPair(a, x, y) => write!(f, "phi@{a}({x}, {y})"),
                OwnedTerm::PhiUnit(a) => write!(f, "phiI@{a}"),
                OwnedTerm::PsiPair(a, x, y) => write!(f, "psi@{a}({x}, {y})"),
                OwnedTerm::PsiUnit(a) => write!(f, "psiI@{a}"),
                OwnedTerm::Gamma(x, a, b) => write!(f, "gamma({x}, {a}->{b})"),
                OwnedTerm::OId(p) => write!(f, "id({p})"),
                OwnedTerm::OSym(p, q) => write!(f, "sym({p}, {q})"),
                _ => unreachable!("handled by caller"),
            }
        }
        match self {
            OwnedTerm::OSeq(a, b) => write!(f, "{a} ; {b}"),
            OwnedTerm::OPar(_, _) => par_factor(self, f),
            _ => atom(self, f),
        }
    }
}

/// A base theory together with its owners: the signature of the owned theory.
#[derive(Debug, Clone)]
pub struct OwnedTheory {
    base: Theory,
    owners: Vec<Owner>,
    owner_index: HashMap<String, usize>,
}

/// Builds the owned theory over `base` with the given owners.
///
/// The owner set must be nonempty; names must be distinct valid identifiers.
pub fn build_ownership_theory(base: Theory, owners: Vec<Owner>) -> Result<OwnedTheory, TheoryError> {
    if owners.is_empty() {
        return Err(TheoryError::NoOwners);
    }
    let mut owner_index = HashMap::new();
    for (i, o) in owners.iter().enumerate() {
        if !is_valid_ident(&o.name) {
            return Err(TheoryError::InvalidIdentifier(o.name.clone()));
        }
        if owner_index.insert(o.name.clone(), i).is_some() {
            return Err(TheoryError::DuplicateOwner(o.name.clone()));
        }
    }
    Ok(OwnedTheory {
        base,
        owners,
        owner_index,
    })
}

impl OwnedTheory {
    pub fn base(&self) -> &Theory {
        &self.base
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn owner(&self, name: &str) -> Option<&Owner> {
        self.owner_index.get(name).map(|&i| &self.owners[i])
    }

    pub fn expect_owner(&self, name: &str) -> Result<&Owner, TypeError> {
        self.owner(name)
            .ok_or_else(|| TypeError::UnknownOwner(name.to_string()))
    }

    fn check_payload(&self, word: &ObjectWord) -> Result<(), TypeError> {
        for atom in word.atoms() {
            if self.base.atom(atom.name()).is_none() {
                return Err(TypeError::UnknownAtom(atom.name().to_string()));
            }
        }
        Ok(())
    }

    fn check_owned_word(&self, word: &OwnedWord) -> Result<(), TypeError> {
        for atom in word.atoms() {
            self.expect_owner(&atom.owner)?;
            self.check_payload(&atom.payload)?;
        }
        Ok(())
    }
}

/// Computes the unique type of an owned term per the construction's
/// inference rules.
pub fn owned_typecheck(
    term: &OwnedTerm,
    theory: &OwnedTheory,
) -> Result<(OwnedWord, OwnedWord), TypeError> {
    match term {
        OwnedTerm::Lifted(owner, base) => {
            theory.expect_owner(owner)?;
            let (dom, cod) = typecheck(base, theory.base())?;
            Ok((
                OwnedWord::single(OwnedAtom::new(dom, owner.clone())),
                OwnedWord::single(OwnedAtom::new(cod, owner.clone())),
            ))
        }
        OwnedTerm::PhiPair(owner, x, y) => {
            theory.expect_owner(owner)?;
            theory.check_payload(x)?;
            theory.check_payload(y)?;
            Ok((
                OwnedWord::new(vec![
                    OwnedAtom::new(x.clone(), owner.clone()),
                    OwnedAtom::new(y.clone(), owner.clone()),
                ]),
                OwnedWord::single(OwnedAtom::new(x.tensor(y), owner.clone())),
            ))
        }
        OwnedTerm::PhiUnit(owner) => {
            theory.expect_owner(owner)?;
            Ok((
                OwnedWord::unit(),
                OwnedWord::single(OwnedAtom::new(ObjectWord::unit(), owner.clone())),
            ))
        }
        OwnedTerm::PsiPair(owner, x, y) => {
            theory.expect_owner(owner)?;
            theory.check_payload(x)?;
            theory.check_payload(y)?;
            Ok((
                OwnedWord::single(OwnedAtom::new(x.tensor(y), owner.clone())),
                OwnedWord::new(vec![
                    OwnedAtom::new(x.clone(), owner.clone()),
                    OwnedAtom::new(y.clone(), owner.clone()),
                ]),
            ))
        }
        OwnedTerm::PsiUnit(owner) => {
            theory.expect_owner(owner)?;
            Ok((
                OwnedWord::single(OwnedAtom::new(ObjectWord::unit(), owner.clone())),
                OwnedWord::unit(),
            ))
        }
        OwnedTerm::Gamma(payload, from, to) => {
            theory.expect_owner(from)?;
            theory.expect_owner(to)?;
            theory.check_payload(payload)?;
            Ok((
                OwnedWord::single(OwnedAtom::new(payload.clone(), from.clone())),
                OwnedWord::single(OwnedAtom::new(payload.clone(), to.clone())),
            ))
        }
        OwnedTerm::OId(word) => {
            theory.check_owned_word(word)?;
            Ok((word.clone(), word.clone()))
        }
        OwnedTerm::OSym(left, right) => {
            theory.check_owned_word(left)?;
            theory.check_owned_word(right)?;
            Ok((left.tensor(right), right.tensor(left)))
        }
        OwnedTerm::OSeq(a, b) => {
            let (ad, ac) = owned_typecheck(a, theory)?;
            let (bd, bc) = owned_typecheck(b, theory)?;
            if ac != bd {
                return Err(TypeError::SeqMismatch {
                    left_cod: ac.to_string(),
                    right_dom: bd.to_string(),
                });
            }
            Ok((ad, bc))
        }
        OwnedTerm::OPar(l, r) => {
            let (ld, lc) = owned_typecheck(l, theory)?;
            let (rd, rc) = owned_typecheck(r, theory)?;
            Ok((ld.tensor(&rd), lc.tensor(&rc)))
        }
    }
}

/// Checks that two owned terms are parallel and returns the common type.
pub fn expect_parallel_owned(
    t1: &OwnedTerm,
    t2: &OwnedTerm,
    theory: &OwnedTheory,
) -> Result<(OwnedWord, OwnedWord), TypeError> {
    let (d1, c1) = owned_typecheck(t1, theory)?;
    let (d2, c2) = owned_typecheck(t2, theory)?;
    if d1 != d2 || c1 != c2 {
        return Err(TypeError::NotParallel(
            d1.to_string(),
            c1.to_string(),
            d2.to_string(),
            c2.to_string(),
        ));
    }
    Ok((d1, c1))
}
