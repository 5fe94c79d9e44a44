//! Morphism terms and their typechecking.
//!
//! A [`MorphismTerm`] is the syntax tree of a morphism expression: generators,
//! identities, braidings, sequential composition in diagrammatic order (`f ; g`
//! first does `f`, then `g`), and tensor. Types are computed bottom-up and are
//! unique; a `Seq` node is well-typed exactly when the codomain of its first
//! factor equals the domain of its second.

use std::fmt;

use crate::error::TypeError;
use crate::theory::{ObjectWord, Theory};

/// A morphism expression over a theory's signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MorphismTerm {
    /// A named generator.
    Gen(String),
    /// The identity on a word.
    Id(ObjectWord),
    /// The braiding `sym(l, r) : l * r -> r * l`.
    Sym(ObjectWord, ObjectWord),
    /// Diagrammatic-order composition: first, then second.
    Seq(Box<MorphismTerm>, Box<MorphismTerm>),
    /// Tensor of two terms, left beside right.
    Par(Box<MorphismTerm>, Box<MorphismTerm>),
}

impl MorphismTerm {
    pub fn gen(name: impl Into<String>) -> Self {
        MorphismTerm::Gen(name.into())
    }

    pub fn id(word: ObjectWord) -> Self {
        MorphismTerm::Id(word)
    }

    pub fn sym(left: ObjectWord, right: ObjectWord) -> Self {
        MorphismTerm::Sym(left, right)
    }

    pub fn seq(first: MorphismTerm, second: MorphismTerm) -> Self {
        MorphismTerm::Seq(Box::new(first), Box::new(second))
    }

    pub fn par(left: MorphismTerm, right: MorphismTerm) -> Self {
        MorphismTerm::Par(Box::new(left), Box::new(right))
    }

    /// Left-fold of `seq` over a nonempty list.
    pub fn seq_all(terms: impl IntoIterator<Item = MorphismTerm>) -> Option<MorphismTerm> {
        terms.into_iter().reduce(MorphismTerm::seq)
    }

    /// Left-fold of `par` over a list; the empty tensor is `id(I)`.
    pub fn par_all(terms: impl IntoIterator<Item = MorphismTerm>) -> MorphismTerm {
        terms
            .into_iter()
            .reduce(MorphismTerm::par)
            .unwrap_or_else(|| MorphismTerm::Id(ObjectWord::unit()))
    }

    /// Composition that drops identity factors instead of stacking them.
    pub(crate) fn smart_seq(first: MorphismTerm, second: MorphismTerm) -> MorphismTerm {
        match (first, second) {
            (MorphismTerm::Id(_), t) => t,
            (t, MorphismTerm::Id(_)) => t,
            (a, b) => MorphismTerm::seq(a, b),
        }
    }

    /// Tensor that merges identity factors into a single identity.
    pub(crate) fn smart_par(left: MorphismTerm, right: MorphismTerm) -> MorphismTerm {
        match (left, right) {
            (MorphismTerm::Id(v), MorphismTerm::Id(w)) => MorphismTerm::Id(v.tensor(&w)),
            (MorphismTerm::Id(v), t) if v.is_empty() => t,
            (t, MorphismTerm::Id(v)) if v.is_empty() => t,
            (a, b) => MorphismTerm::par(a, b),
        }
    }

    /// Number of generator occurrences; `Id` and `Sym` contribute none.
    pub fn gen_count(&self) -> usize {
        match self {
            MorphismTerm::Gen(_) => 1,
            MorphismTerm::Id(_) | MorphismTerm::Sym(_, _) => 0,
            MorphismTerm::Seq(a, b) | MorphismTerm::Par(a, b) => a.gen_count() + b.gen_count(),
        }
    }

    /// True if the term is an identity node (not merely equal to one).
    pub fn is_id(&self) -> bool {
        matches!(self, MorphismTerm::Id(_))
    }
}

/// Computes the unique type of a term, or the first failure in
/// leftmost-innermost order.
pub fn typecheck(term: &MorphismTerm, theory: &Theory) -> Result<(ObjectWord, ObjectWord), TypeError> {
    match term {
        MorphismTerm::Gen(name) => {
            let g = theory.expect_generator(name)?;
            Ok((g.dom.clone(), g.cod.clone()))
        }
        MorphismTerm::Id(w) => Ok((w.clone(), w.clone())),
        MorphismTerm::Sym(l, r) => Ok((l.tensor(r), r.tensor(l))),
        MorphismTerm::Seq(a, b) => {
            let (ad, ac) = typecheck(a, theory)?;
            let (bd, bc) = typecheck(b, theory)?;
            if ac != bd {
                return Err(TypeError::SeqMismatch {
                    left_cod: ac.to_string(),
                    right_dom: bd.to_string(),
                });
            }
            Ok((ad, bc))
        }
        MorphismTerm::Par(l, r) => {
            let (ld, lc) = typecheck(l, theory)?;
            let (rd, rc) = typecheck(r, theory)?;
            Ok((ld.tensor(&rd), lc.tensor(&rc)))
        }
    }
}

/// Checks that two terms are parallel and returns their common type.
pub fn expect_parallel(
    t1: &MorphismTerm,
    t2: &MorphismTerm,
    theory: &Theory,
) -> Result<(ObjectWord, ObjectWord), TypeError> {
    let (d1, c1) = typecheck(t1, theory)?;
    let (d2, c2) = typecheck(t2, theory)?;
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

// Precedence-aware printing: `*` binds tighter than `;`, so a Seq under a Par
// needs parentheses while a Par under a Seq does not.
impl fmt::Display for MorphismTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn par_factor(t: &MorphismTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                MorphismTerm::Seq(_, _) => write!(f, "({t})"),
                MorphismTerm::Par(a, b) => {
                    par_factor(a, f)?;
                    f.write_str(" * ")?;
                    par_factor(b, f)
                }
                _ => atom(t, f),
            }
        }
        fn atom(t: &MorphismTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                MorphismTerm::Gen(name) => f.write_str(name),
                MorphismTerm::Id(w) => write!(f, "id({w})"),
                MorphismTerm::Sym(l, r) => write!(f, "sym({l}, {r})"),
                _ => unreachable!("handled by caller"),
            }
        }
        match self {
            MorphismTerm::Seq(a, b) => write!(f, "{a} ; {b}"),
            MorphismTerm::Par(_, _) => par_factor(self, f),
            _ => atom(self, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{Atom, GeneratorDecl};

    fn bread() -> Theory {
        let atoms = ["bread", "dough", "water", "flour", "oven"]
            .iter()
            .map(|n| Atom::new(*n).unwrap())
            .collect();
        let w = |names: &[&str]| -> ObjectWord {
            names.iter().map(|n| Atom::new(*n).unwrap()).collect()
        };
        Theory::new(
            atoms,
            vec![
                GeneratorDecl { name: "mix".into(), dom: w(&["water", "flour"]), cod: w(&["dough"]) },
                GeneratorDecl { name: "knead".into(), dom: w(&["dough"]), cod: w(&["dough"]) },
                GeneratorDecl {
                    name: "bake".into(),
                    dom: w(&["dough", "oven"]),
                    cod: w(&["bread", "oven"]),
                },
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn types_the_two_bake_composite() {
        // (bake * id(dough)) ; (id(bread) * (sym(oven, dough) ; bake))
        let theory = bread();
        let dough = theory.word(&["dough"]).unwrap();
        let bread_w = theory.word(&["bread"]).unwrap();
        let oven = theory.word(&["oven"]).unwrap();
        let t = MorphismTerm::seq(
            MorphismTerm::par(MorphismTerm::gen("bake"), MorphismTerm::id(dough.clone())),
            MorphismTerm::par(
                MorphismTerm::id(bread_w),
                MorphismTerm::seq(
                    MorphismTerm::sym(oven, dough),
                    MorphismTerm::gen("bake"),
                ),
            ),
        );
        let (dom, cod) = typecheck(&t, &theory).unwrap();
        assert_eq!(dom.to_string(), "dough*oven*dough");
        assert_eq!(cod.to_string(), "bread*bread*oven");
    }

    #[test]
    fn unit_identity_types_as_empty() {
        let (dom, cod) = typecheck(&MorphismTerm::id(ObjectWord::unit()), &bread()).unwrap();
        assert!(dom.is_empty() && cod.is_empty());
    }

    #[test]
    fn reports_mismatch_with_both_words() {
        let theory = bread();
        let t = MorphismTerm::seq(MorphismTerm::gen("mix"), MorphismTerm::gen("bake"));
        match typecheck(&t, &theory) {
            Err(TypeError::SeqMismatch { left_cod, right_dom }) => {
                assert_eq!(left_cod, "dough");
                assert_eq!(right_dom, "dough*oven");
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn unknown_generator_is_reported() {
        assert!(matches!(
            typecheck(&MorphismTerm::gen("toast"), &bread()),
            Err(TypeError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn sym_swaps_words() {
        let theory = bread();
        let l = theory.word(&["water", "flour"]).unwrap();
        let r = theory.word(&["oven"]).unwrap();
        let (dom, cod) = typecheck(&MorphismTerm::sym(l, r), &theory).unwrap();
        assert_eq!(dom.to_string(), "water*flour*oven");
        assert_eq!(cod.to_string(), "oven*water*flour");
    }

    #[test]
    fn display_round_trips_precedence() {
        let t = MorphismTerm::par(
            MorphismTerm::seq(MorphismTerm::gen("mix"), MorphismTerm::gen("knead")),
            MorphismTerm::gen("bake"),
        );
        assert_eq!(t.to_string(), "(mix ; knead) * bake");
    }
}
