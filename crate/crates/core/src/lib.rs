//! Resource theories as free symmetric strict monoidal categories, an
//! ownership layer over them, and a coin ledger built on the ownership layer.
//!
//! The library is organized in four pieces:
//!
//! * [`theory`], [`term`], [`diagram`], [`eq`] — signatures, morphism terms,
//!   string diagrams, and equality: structural equality is boundary-fixing
//!   diagram isomorphism, and equality modulo user equations is a bounded
//!   bidirectional rewrite search over diagrams.
//! * [`owned`] — owned resources: the free construction adding owners,
//!   regrouping, and change of ownership to a base theory, with a
//!   normal form and a complete equality decision for the pure ownership
//!   layer.
//! * [`ledger`] — the coin theory (one atom, one mint generator), ledgers as
//!   morphisms from the unit built by appending packaged transactions,
//!   balances, and line-delimited persistence.
//! * [`render`] — layered layout of diagrams and SVG / DOT export with owner
//!   colouring.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so values can be freely shared or sent between threads.

pub mod diagram;
pub mod enumerate;
pub mod eq;
pub mod error;
pub mod ledger;
pub mod owned;
pub mod parse;
pub mod render;
pub mod term;
pub mod theory;

pub use diagram::{diagram_equal, extract_term, to_diagram, Diagram, NodeKind, WireLabel};
pub use enumerate::{enumerate_morphisms, enumerate_morphisms_capped, DEFAULT_CLASS_CAP};
pub use eq::{equal_modulo, EqResult};
pub use error::{Error, LedgerError, ParseError, TheoryError, TypeError};
pub use ledger::{coin_theory, Coin, Ledger, Transaction, TxKind};
pub use owned::{
    build_ownership_theory, canonical_regroup, canonical_split, forget, lift, normalize_owned,
    owned_equal, owned_equal_with_budget, owned_to_diagram, owned_typecheck, Owner, OwnedAtom,
    OwnedTerm, OwnedTheory, OwnedWord,
};
pub use parse::{parse_owned_term, parse_term, parse_theory, parse_theory_file, parse_word};
pub use render::{layout, layout_with, render_dot, render_svg, Layout, LayoutOptions};
pub use term::{expect_parallel, typecheck, MorphismTerm};
pub use theory::{Atom, Equation, GeneratorDecl, ObjectWord, Theory};
