//! The equality decision for owned terms.
//!
//! Two parallel owned terms are equal exactly when their forgetful images are
//! equal in the base theory. This is where the adjoint equivalence earns its
//! keep: the transfer and regrouping stages of the normal form are determined
//! by the endpoints alone (a transfer stage is a tensor of transfers fixed by
//! the two ownership vectors, and any two regroupings of equal type are
//! equal), so after checking that the terms are parallel, only the lifted
//! residuals can differ — and those compare through the base theory's own
//! equality. In a base theory without user equations the decision is
//! complete: structural diagram isomorphism settles it. With user equations
//! it delegates to the bounded search and may report `Unknown`.

use crate::diagram::{diagram_equal, to_diagram};
use crate::eq::{equal_modulo, EqResult};
use crate::error::TypeError;

use super::functor::forget;
use super::{expect_parallel_owned, OwnedTerm, OwnedTheory};

/// Default rewrite budget handed to the base-theory search when the base
/// theory carries user equations.
pub const DEFAULT_BASE_BUDGET: usize = 1024;

/// Decides equality of two parallel owned terms with the default budget.
pub fn owned_equal(
    t1: &OwnedTerm,
    t2: &OwnedTerm,
    theory: &OwnedTheory,
) -> Result<EqResult, TypeError> {
    owned_equal_with_budget(t1, t2, theory, DEFAULT_BASE_BUDGET)
}

/// Decides equality of two parallel owned terms, spending at most `budget`
/// rewrite expansions if base equations force a search.
pub fn owned_equal_with_budget(
    t1: &OwnedTerm,
    t2: &OwnedTerm,
    theory: &OwnedTheory,
    budget: usize,
) -> Result<EqResult, TypeError> {
    expect_parallel_owned(t1, t2, theory)?;
    let f1 = forget(t1, theory)?;
    let f2 = forget(t2, theory)?;
    if theory.base().equations().is_empty() {
        let d1 = to_diagram(&f1, theory.base())?;
        let d2 = to_diagram(&f2, theory.base())?;
        Ok(if diagram_equal(&d1, &d2) {
            EqResult::Equal
        } else {
            EqResult::NotEqual
        })
    } else {
        equal_modulo(&f1, &f2, theory.base(), budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owned::{build_ownership_theory, Owner};
    use crate::parse::{parse_owned_term, parse_theory};

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

    #[test]
    fn every_term_equals_itself() {
        let th = owned_bread();
        let t = parse_owned_term("mix@Alice ; gamma(dough, Alice->Bob) ; knead@Bob", &th).unwrap();
        assert_eq!(owned_equal(&t, &t, &th).unwrap(), EqResult::Equal);
    }

    #[test]
    fn lifted_knead_differs_from_lifted_identity() {
        let th = owned_bread();
        let a = parse_owned_term("knead@Alice", &th).unwrap();
        let b = parse_owned_term("(id(dough))@Alice", &th).unwrap();
        assert_eq!(owned_equal(&a, &b, &th).unwrap(), EqResult::NotEqual);
    }

    #[test]
    fn non_parallel_terms_are_an_error() {
        let th = owned_bread();
        let a = parse_owned_term("knead@Alice", &th).unwrap();
        let b = parse_owned_term("knead@Bob", &th).unwrap();
        assert!(matches!(
            owned_equal(&a, &b, &th),
            Err(TypeError::NotParallel(..))
        ));
    }

    #[test]
    fn transfer_dance_equals_direct_transfer() {
        let th = owned_bread();
        let a = parse_owned_term(
            "gamma(dough, Alice->Bob) ; gamma(dough, Bob->Carol)",
            &th,
        )
        .unwrap();
        let b = parse_owned_term("gamma(dough, Alice->Carol)", &th).unwrap();
        assert_eq!(owned_equal(&a, &b, &th).unwrap(), EqResult::Equal);
    }

    #[test]
    fn the_two_oven_lending_stories_agree() {
        // Carol hands her dough to Alice and Bob, who bake and return the
        // bread; versus Alice and Bob lending Carol their ovens.
        let th = owned_bread();
        let left = parse_owned_term(
            "gamma(dough, Carol->Alice) * gamma(dough, Carol->Bob) * id(oven@Alice * oven@Bob) ; \
             id(dough@Alice) * sym(dough@Bob, oven@Alice) * id(oven@Bob) ; \
             phi@Alice(dough, oven) * phi@Bob(dough, oven) ; \
             bake@Alice * bake@Bob ; \
             psi@Alice(bread, oven) * psi@Bob(bread, oven) ; \
             gamma(bread, Alice->Carol) * id(oven@Alice) * gamma(bread, Bob->Carol) * id(oven@Bob)",
            &th,
        )
        .unwrap();
        let right = parse_owned_term(
            "id(dough@Carol * dough@Carol) * gamma(oven, Alice->Carol) * gamma(oven, Bob->Carol) ; \
             id(dough@Carol) * sym(dough@Carol, oven@Carol) * id(oven@Carol) ; \
             phi@Carol(dough, oven) * phi@Carol(dough, oven) ; \
             bake@Carol * bake@Carol ; \
             psi@Carol(bread, oven) * psi@Carol(bread, oven) ; \
             id(bread@Carol) * gamma(oven, Carol->Alice) * id(bread@Carol) * gamma(oven, Carol->Bob)",
            &th,
        )
        .unwrap();
        assert_eq!(owned_equal(&left, &right, &th).unwrap(), EqResult::Equal);
    }

    #[test]
    fn unknown_can_surface_through_base_equations() {
        let base = parse_theory(
            "atoms dough\ngen knead : dough -> dough\neq knead ; knead = knead\n",
        )
        .unwrap();
        let th = build_ownership_theory(base, vec![Owner::with_default_colour("Alice", 0)])
            .unwrap();
        let a = parse_owned_term("knead@Alice", &th).unwrap();
        let b = parse_owned_term("(knead ; knead ; knead ; knead)@Alice", &th).unwrap();
        assert_eq!(
            owned_equal_with_budget(&a, &b, &th, 1).unwrap(),
            EqResult::Unknown
        );
        assert_eq!(
            owned_equal_with_budget(&a, &b, &th, 200).unwrap(),
            EqResult::Equal
        );
    }
}
