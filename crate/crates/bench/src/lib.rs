//! Shared fixtures for the criterion benchmarks.

use smc::{parse_term, parse_theory, Ledger, MorphismTerm, Owner, Theory};

pub const BREAD: &str = "\
atoms bread dough water flour oven
gen mix : water * flour -> dough
gen knead : dough -> dough
gen bake : dough * oven -> bread * oven
";

pub const BREAD_WITH_EQ: &str = "\
atoms bread dough water flour oven
gen mix : water * flour -> dough
gen knead : dough -> dough
gen bake : dough * oven -> bread * oven
eq knead ; knead = knead
";

pub fn bread() -> Theory {
    parse_theory(BREAD).expect("fixture theory parses")
}

/// The two six-box baking composites that differ only by when the second
/// batch is prepared.
pub fn baking_pair(theory: &Theory) -> (MorphismTerm, MorphismTerm) {
    let left = parse_term(
        "((mix ; knead) * (mix ; knead) * id(oven)) ; (id(dough) * sym(dough, oven)) ; \
         (bake * id(dough)) ; (id(bread) * sym(oven, dough)) ; (id(bread) * bake)",
        theory,
    )
    .expect("fixture term parses");
    let right = parse_term(
        "((mix ; knead) * id(water * flour * oven)) ; (id(dough) * sym(water * flour, oven)) ; \
         (bake * (mix ; knead)) ; (id(bread) * sym(oven, dough)) ; (id(bread) * bake)",
        theory,
    )
    .expect("fixture term parses");
    (left, right)
}

pub fn owners() -> Vec<Owner> {
    vec![
        Owner::with_default_colour("Alice", 0),
        Owner::with_default_colour("Bob", 1),
        Owner::with_default_colour("Carol", 2),
    ]
}

/// A ledger exercising every transaction shape, `rounds` times over.
pub fn busy_ledger(rounds: usize) -> Ledger {
    let mut ledger = Ledger::new(owners()).expect("fixture ledger");
    for _ in 0..rounds {
        ledger = ledger.mint("Carol", 7).expect("mint");
        ledger = ledger.mint("Alice", 5).expect("mint");
        let base = ledger.frontier().len() - 1;
        ledger = ledger.split(base, 2).expect("split");
        ledger = ledger.transfer(base + 1, "Bob").expect("transfer");
        ledger = ledger.transfer(base, "Carol").expect("transfer");
        ledger = ledger.merge(base - 1, base).expect("merge");
    }
    ledger
}
