//! Shared fixtures and randomized well-typed term generators for the
//! integration and acceptance suites.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use smc::{
    build_ownership_theory, canonical_regroup, parse_owned_term, parse_term, parse_theory,
    MorphismTerm, ObjectWord, OwnedAtom, OwnedTerm, OwnedTheory, OwnedWord, Owner, Theory,
};

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
    parse_theory(BREAD).expect("bread theory parses")
}

pub fn owners3() -> Vec<Owner> {
    vec![
        Owner::with_default_colour("Alice", 0),
        Owner::with_default_colour("Bob", 1),
        Owner::with_default_colour("Carol", 2),
    ]
}

pub fn owned_bread() -> OwnedTheory {
    build_ownership_theory(bread(), owners3()).expect("owned bread theory builds")
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// The one-oven composite that bakes two pieces of dough in sequence.
pub const TWO_BAKE: &str =
    "(bake * id(dough)) ; (id(bread) * (sym(oven, dough) ; bake))";

/// Baking two loaves: prepare both batches, then bake them in sequence.
pub const BAKING_LEFT: &str =
    "((mix ; knead) * (mix ; knead) * id(oven)) ; (id(dough) * sym(dough, oven)) ; \
     (bake * id(dough)) ; (id(bread) * sym(oven, dough)) ; (id(bread) * bake)";

/// Baking two loaves: prepare and bake the first batch, then the second.
pub const BAKING_RIGHT: &str =
    "((mix ; knead) * id(water * flour * oven)) ; (id(dough) * sym(water * flour, oven)) ; \
     (bake * (mix ; knead)) ; (id(bread) * sym(oven, dough)) ; (id(bread) * bake)";

/// Carol hands her dough to Alice and Bob, who bake and return the bread.
pub const OVEN_LENDING_LEFT: &str =
    "gamma(dough, Carol->Alice) * gamma(dough, Carol->Bob) * id(oven@Alice * oven@Bob) ; \
     id(dough@Alice) * sym(dough@Bob, oven@Alice) * id(oven@Bob) ; \
     phi@Alice(dough, oven) * phi@Bob(dough, oven) ; \
     bake@Alice * bake@Bob ; \
     psi@Alice(bread, oven) * psi@Bob(bread, oven) ; \
     gamma(bread, Alice->Carol) * id(oven@Alice) * gamma(bread, Bob->Carol) * id(oven@Bob)";

/// Alice and Bob lend Carol their ovens; she bakes and returns them.
pub const OVEN_LENDING_RIGHT: &str =
    "id(dough@Carol * dough@Carol) * gamma(oven, Alice->Carol) * gamma(oven, Bob->Carol) ; \
     id(dough@Carol) * sym(dough@Carol, oven@Carol) * id(oven@Carol) ; \
     phi@Carol(dough, oven) * phi@Carol(dough, oven) ; \
     bake@Carol * bake@Carol ; \
     psi@Carol(bread, oven) * psi@Carol(bread, oven) ; \
     id(bread@Carol) * gamma(oven, Carol->Alice) * id(bread@Carol) * gamma(oven, Carol->Bob)";

pub fn term(src: &str, theory: &Theory) -> MorphismTerm {
    parse_term(src, theory).unwrap_or_else(|e| panic!("fixture term `{src}`: {e}"))
}

pub fn owned(src: &str, theory: &OwnedTheory) -> OwnedTerm {
    parse_owned_term(src, theory).unwrap_or_else(|e| panic!("fixture term `{src}`: {e}"))
}

// ---------------------------------------------------------------------------
// Random well-typed base terms
// ---------------------------------------------------------------------------

pub fn random_word(rng: &mut StdRng, theory: &Theory, max_len: usize) -> ObjectWord {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            theory
                .atoms()
                .choose(rng)
                .expect("theory has atoms")
                .clone()
        })
        .collect()
}

pub fn random_nonempty_word(rng: &mut StdRng, theory: &Theory, max_len: usize) -> ObjectWord {
    loop {
        let w = random_word(rng, theory, max_len.max(1));
        if !w.is_empty() {
            return w;
        }
    }
}

fn pad_layer(
    interface: &[smc::Atom],
    at: usize,
    consume: usize,
    factor: MorphismTerm,
) -> MorphismTerm {
    let pre = MorphismTerm::Id(interface[..at].iter().cloned().collect());
    let post = MorphismTerm::Id(interface[at + consume..].iter().cloned().collect());
    MorphismTerm::par(MorphismTerm::par(pre, factor), post)
}

/// A random well-typed term built layer by layer from `start`. Layers are a
/// generator applied at a random matching position, or an adjacent braiding.
pub fn random_base_term(
    rng: &mut StdRng,
    theory: &Theory,
    start: &ObjectWord,
    steps: usize,
) -> MorphismTerm {
    let mut acc = MorphismTerm::Id(start.clone());
    let mut interface: Vec<smc::Atom> = start.atoms().to_vec();
    for _ in 0..steps {
        // Collect all applicable generator placements.
        let mut moves: Vec<(usize, usize, MorphismTerm, Vec<smc::Atom>)> = Vec::new();
        for g in theory.generators() {
            let d = g.dom.atoms();
            if d.len() > interface.len() {
                continue;
            }
            for at in 0..=interface.len() - d.len() {
                if &interface[at..at + d.len()] == d {
                    moves.push((
                        at,
                        d.len(),
                        MorphismTerm::gen(&g.name),
                        g.cod.atoms().to_vec(),
                    ));
                }
            }
        }
        for at in 0..interface.len().saturating_sub(1) {
            moves.push((
                at,
                2,
                MorphismTerm::sym(
                    ObjectWord::single(interface[at].clone()),
                    ObjectWord::single(interface[at + 1].clone()),
                ),
                vec![interface[at + 1].clone(), interface[at].clone()],
            ));
        }
        let Some((at, consume, factor, produce)) = moves.choose(rng).cloned() else {
            break;
        };
        let layer = pad_layer(&interface, at, consume, factor);
        interface.splice(at..at + consume, produce);
        acc = MorphismTerm::seq(acc, layer);
    }
    acc
}

/// Randomly re-associates a term without changing the formal composite:
/// rotations of Seq and Par trees and unit-identity insertion.
pub fn reassociate(rng: &mut StdRng, term: &MorphismTerm) -> MorphismTerm {
    use MorphismTerm::*;
    let t = match term {
        Seq(a, b) => {
            let (a, b) = (reassociate(rng, a), reassociate(rng, b));
            match (a, b) {
                // (x ; y) ; b  ->  x ; (y ; b)
                (Seq(x, y), b) if rng.gen_bool(0.5) => {
                    MorphismTerm::seq(*x, MorphismTerm::seq(*y, b))
                }
                (a, b) => MorphismTerm::seq(a, b),
            }
        }
        Par(a, b) => {
            let (a, b) = (reassociate(rng, a), reassociate(rng, b));
            match (a, b) {
                (Par(x, y), b) if rng.gen_bool(0.5) => {
                    MorphismTerm::par(*x, MorphismTerm::par(*y, b))
                }
                (a, b) => MorphismTerm::par(a, b),
            }
        }
        other => other.clone(),
    };
    if rng.gen_bool(0.2) {
        MorphismTerm::par(t, MorphismTerm::Id(ObjectWord::unit()))
    } else if rng.gen_bool(0.2) {
        MorphismTerm::par(MorphismTerm::Id(ObjectWord::unit()), t)
    } else {
        t
    }
}

// ---------------------------------------------------------------------------
// Random well-typed owned terms
// ---------------------------------------------------------------------------

pub fn random_owner(rng: &mut StdRng, th: &OwnedTheory) -> String {
    th.owners().choose(rng).expect("owners nonempty").name.clone()
}

pub fn random_owned_word(rng: &mut StdRng, th: &OwnedTheory, max_atoms: usize) -> OwnedWord {
    let len = rng.gen_range(0..=max_atoms);
    (0..len)
        .map(|_| {
            OwnedAtom::new(
                random_word(rng, th.base(), 2),
                random_owner(rng, th),
            )
        })
        .collect()
}

fn pad_owned(interface: &[OwnedAtom], at: usize, consume: usize, factor: OwnedTerm) -> OwnedTerm {
    let pre = OwnedTerm::OId(OwnedWord::new(interface[..at].to_vec()));
    let post = OwnedTerm::OId(OwnedWord::new(interface[at + consume..].to_vec()));
    OwnedTerm::opar(OwnedTerm::opar(pre, factor), post)
}

/// A random well-typed owned term from `start`, drawing on the full grammar:
/// lifted base chains, regrouping, empty-collection management, transfers,
/// and braidings.
pub fn random_owned_term(
    rng: &mut StdRng,
    th: &OwnedTheory,
    start: &OwnedWord,
    steps: usize,
) -> OwnedTerm {
    let mut acc = OwnedTerm::OId(start.clone());
    let mut interface: Vec<OwnedAtom> = start.atoms().to_vec();
    for _ in 0..steps {
        let mut moves: Vec<(usize, usize, OwnedTerm, Vec<OwnedAtom>)> = Vec::new();
        for (i, atom) in interface.iter().enumerate() {
            // Lift a short base chain on this atom's payload.
            let chain = random_base_term(rng, th.base(), &atom.payload, 1);
            let cod = smc::typecheck(&chain, th.base()).expect("generated chain typechecks").1;
            moves.push((
                i,
                1,
                OwnedTerm::Lifted(atom.owner.clone(), chain),
                vec![OwnedAtom::new(cod, atom.owner.clone())],
            ));
            // Transfer to a random owner.
            let to = random_owner(rng, th);
            moves.push((
                i,
                1,
                OwnedTerm::Gamma(atom.payload.clone(), atom.owner.clone(), to.clone()),
                vec![OwnedAtom::new(atom.payload.clone(), to)],
            ));
            // Split the payload at a random point (possibly an empty side).
            let cut = rng.gen_range(0..=atom.payload.len());
            let (x, y): (ObjectWord, ObjectWord) = (
                atom.payload.atoms()[..cut].iter().cloned().collect(),
                atom.payload.atoms()[cut..].iter().cloned().collect(),
            );
            moves.push((
                i,
                1,
                OwnedTerm::PsiPair(atom.owner.clone(), x.clone(), y.clone()),
                vec![
                    OwnedAtom::new(x, atom.owner.clone()),
                    OwnedAtom::new(y, atom.owner.clone()),
                ],
            ));
            // Delete an empty collection.
            if atom.payload.is_empty() {
                moves.push((i, 1, OwnedTerm::PsiUnit(atom.owner.clone()), vec![]));
            }
        }
        for i in 0..interface.len().saturating_sub(1) {
            let (a, b) = (&interface[i], &interface[i + 1]);
            if a.owner == b.owner {
                moves.push((
                    i,
                    2,
                    OwnedTerm::PhiPair(a.owner.clone(), a.payload.clone(), b.payload.clone()),
                    vec![OwnedAtom::new(a.payload.tensor(&b.payload), a.owner.clone())],
                ));
            }
            moves.push((
                i,
                2,
                OwnedTerm::OSym(
                    OwnedWord::single(a.clone()),
                    OwnedWord::single(b.clone()),
                ),
                vec![b.clone(), a.clone()],
            ));
        }
        // Create an empty collection anywhere.
        let at = rng.gen_range(0..=interface.len());
        let owner = random_owner(rng, th);
        moves.push((
            at,
            0,
            OwnedTerm::PhiUnit(owner.clone()),
            vec![OwnedAtom::new(ObjectWord::unit(), owner)],
        ));

        let Some((at, consume, factor, produce)) = moves.choose(rng).cloned() else {
            break;
        };
        let layer = pad_owned(&interface, at, consume, factor);
        interface.splice(at..at + consume, produce);
        acc = OwnedTerm::oseq(acc, layer);
    }
    acc
}

/// A random owned endomorphism source `X@A -> Y@A` built from the full
/// grammar: a free walk from a single collection, closed back to a single
/// collection by retagging everything to `A` and merging.
pub fn random_single_owner_hom(
    rng: &mut StdRng,
    th: &OwnedTheory,
    steps: usize,
) -> (String, OwnedTerm) {
    let owner = random_owner(rng, th);
    let payload = random_word(rng, th.base(), 3);
    let start = OwnedWord::single(OwnedAtom::new(payload, owner.clone()));
    let walk = random_owned_term(rng, th, &start, steps);
    let (_, cod) = smc::owned_typecheck(&walk, th).expect("generated walk typechecks");
    // Retag every atom back to the chosen owner, then merge into one.
    let retag = cod
        .atoms()
        .iter()
        .map(|a| {
            if a.owner == owner {
                OwnedTerm::OId(OwnedWord::single(a.clone()))
            } else {
                OwnedTerm::Gamma(a.payload.clone(), a.owner.clone(), owner.clone())
            }
        })
        .fold(OwnedTerm::OId(OwnedWord::unit()), |l, r| {
            OwnedTerm::opar(l, r)
        });
    let retagged: OwnedWord = cod
        .atoms()
        .iter()
        .map(|a| OwnedAtom::new(a.payload.clone(), owner.clone()))
        .collect();
    let merge = canonical_regroup(&retagged, &owner, th).expect("single-owner regroup");
    let term = OwnedTerm::oseq(OwnedTerm::oseq(walk, retag), merge);
    (owner, term)
}

// ---------------------------------------------------------------------------
// The ownership axiom schemas, instantiated with random data
// ---------------------------------------------------------------------------

/// One ownership axiom: a name and an instantiator producing the two sides
/// (possibly several parallel pairs, for axioms stated as chains).
pub type AxiomInstances = Vec<(OwnedTerm, OwnedTerm)>;

fn random_generator(rng: &mut StdRng, th: &OwnedTheory) -> (MorphismTerm, ObjectWord, ObjectWord) {
    let g = th
        .base()
        .generators()
        .choose(rng)
        .expect("base theory has generators")
        .clone();
    (MorphismTerm::gen(&g.name), g.dom, g.cod)
}

fn two_owners(rng: &mut StdRng, th: &OwnedTheory) -> (String, String) {
    (random_owner(rng, th), random_owner(rng, th))
}

/// Instantiates every regrouping and transfer axiom of the ownership
/// construction with random owners, random objects up to length 4, and
/// random base generators. Each returned pair must satisfy `owned_equal`.
pub fn axiom_instances(
    name: &str,
    rng: &mut StdRng,
    th: &OwnedTheory,
) -> AxiomInstances {
    use OwnedTerm::*;
    let a = random_owner(rng, th);
    let x = random_word(rng, th.base(), 4);
    let y = random_word(rng, th.base(), 4);
    let z = random_word(rng, th.base(), 4);
    let single = |payload: &ObjectWord, owner: &str| {
        OwnedWord::single(OwnedAtom::new(payload.clone(), owner.to_string()))
    };
    match name {
        "G.1" => {
            let (f, fx, fx2) = random_generator(rng, th);
            let (g, gy, gy2) = random_generator(rng, th);
            let lhs = OwnedTerm::oseq(
                PhiPair(a.clone(), fx, gy),
                Lifted(a.clone(), MorphismTerm::par(f.clone(), g.clone())),
            );
            let rhs = OwnedTerm::oseq(
                OwnedTerm::opar(Lifted(a.clone(), f), Lifted(a.clone(), g)),
                PhiPair(a, fx2, gy2),
            );
            vec![(lhs, rhs)]
        }
        "G.2" => {
            let (f, fx, fx2) = random_generator(rng, th);
            let (g, gy, gy2) = random_generator(rng, th);
            let lhs = OwnedTerm::oseq(
                Lifted(a.clone(), MorphismTerm::par(f.clone(), g.clone())),
                PsiPair(a.clone(), fx2, gy2),
            );
            let rhs = OwnedTerm::oseq(
                PsiPair(a.clone(), fx, gy),
                OwnedTerm::opar(Lifted(a.clone(), f), Lifted(a, g)),
            );
            vec![(lhs, rhs)]
        }
        "G.3" => {
            let lhs = OwnedTerm::oseq(
                OwnedTerm::opar(
                    PhiPair(a.clone(), x.clone(), y.clone()),
                    OId(single(&z, &a)),
                ),
                PhiPair(a.clone(), x.tensor(&y), z.clone()),
            );
            let rhs = OwnedTerm::oseq(
                OwnedTerm::opar(
                    OId(single(&x, &a)),
                    PhiPair(a.clone(), y.clone(), z.clone()),
                ),
                PhiPair(a, x.clone(), y.tensor(&z)),
            );
            vec![(lhs, rhs)]
        }
        "G.4" => {
            let lhs = OwnedTerm::oseq(
                PsiPair(a.clone(), x.tensor(&y), z.clone()),
                OwnedTerm::opar(
                    PsiPair(a.clone(), x.clone(), y.clone()),
                    OId(single(&z, &a)),
                ),
            );
            let rhs = OwnedTerm::oseq(
                PsiPair(a.clone(), x.clone(), y.tensor(&z)),
                OwnedTerm::opar(
                    OId(single(&x, &a)),
                    PsiPair(a, y.clone(), z.clone()),
                ),
            );
            vec![(lhs, rhs)]
        }
        "G.5" => {
            let lhs = OwnedTerm::oseq(
                PsiPair(a.clone(), x.clone(), y.clone()),
                PhiPair(a.clone(), x.clone(), y.clone()),
            );
            let rhs = OId(single(&x.tensor(&y), &a));
            vec![(lhs, rhs)]
        }
        "G.6" => {
            let lhs = OwnedTerm::oseq(
                PhiPair(a.clone(), x.clone(), y.clone()),
                PsiPair(a.clone(), x.clone(), y.clone()),
            );
            let rhs = OwnedTerm::opar(OId(single(&x, &a)), OId(single(&y, &a)));
            vec![(lhs, rhs)]
        }
        "G.7" => {
            let id_x = OId(single(&x, &a));
            let left = OwnedTerm::oseq(
                OwnedTerm::opar(PhiUnit(a.clone()), OId(single(&x, &a))),
                PhiPair(a.clone(), ObjectWord::unit(), x.clone()),
            );
            let right = OwnedTerm::oseq(
                OwnedTerm::opar(OId(single(&x, &a)), PhiUnit(a.clone())),
                PhiPair(a, x.clone(), ObjectWord::unit()),
            );
            vec![(left, id_x.clone()), (right, id_x)]
        }
        "G.8" => {
            let id_x = OId(single(&x, &a));
            let left = OwnedTerm::oseq(
                PsiPair(a.clone(), ObjectWord::unit(), x.clone()),
                OwnedTerm::opar(PsiUnit(a.clone()), OId(single(&x, &a))),
            );
            let right = OwnedTerm::oseq(
                PsiPair(a.clone(), x.clone(), ObjectWord::unit()),
                OwnedTerm::opar(OId(single(&x, &a)), PsiUnit(a)),
            );
            vec![(left, id_x.clone()), (right, id_x)]
        }
        "G.9" => {
            let lhs = OwnedTerm::oseq(PhiUnit(a.clone()), PsiUnit(a));
            vec![(lhs, OId(OwnedWord::unit()))]
        }
        "G.10" => {
            let lhs = OwnedTerm::oseq(PsiUnit(a.clone()), PhiUnit(a.clone()));
            let unit_atom = OwnedWord::single(OwnedAtom::new(ObjectWord::unit(), a));
            vec![(lhs, OId(unit_atom))]
        }
        "G.11" => {
            let lhs = OwnedTerm::oseq(
                PhiPair(a.clone(), x.clone(), y.clone()),
                Lifted(a.clone(), MorphismTerm::sym(x.clone(), y.clone())),
            );
            let rhs = OwnedTerm::oseq(
                OSym(single(&x, &a), single(&y, &a)),
                PhiPair(a, y.clone(), x.clone()),
            );
            vec![(lhs, rhs)]
        }
        "O.1" => {
            let (f, fd, fc) = random_generator(rng, th);
            let (a, b) = two_owners(rng, th);
            let lhs = OwnedTerm::oseq(
                Lifted(a.clone(), f.clone()),
                Gamma(fc, a.clone(), b.clone()),
            );
            let rhs = OwnedTerm::oseq(Gamma(fd, a, b.clone()), Lifted(b, f));
            vec![(lhs, rhs)]
        }
        "O.2" => {
            let (a, b) = two_owners(rng, th);
            let lhs = OwnedTerm::oseq(
                PhiPair(a.clone(), x.clone(), y.clone()),
                Gamma(x.tensor(&y), a.clone(), b.clone()),
            );
            let rhs = OwnedTerm::oseq(
                OwnedTerm::opar(
                    Gamma(x.clone(), a.clone(), b.clone()),
                    Gamma(y.clone(), a, b.clone()),
                ),
                PhiPair(b, x.clone(), y.clone()),
            );
            vec![(lhs, rhs)]
        }
        "O.3" => {
            let (a, b) = two_owners(rng, th);
            let lhs = OwnedTerm::oseq(
                Gamma(x.tensor(&y), a.clone(), b.clone()),
                PsiPair(b.clone(), x.clone(), y.clone()),
            );
            let rhs = OwnedTerm::oseq(
                PsiPair(a.clone(), x.clone(), y.clone()),
                OwnedTerm::opar(
                    Gamma(x.clone(), a.clone(), b.clone()),
                    Gamma(y.clone(), a, b),
                ),
            );
            vec![(lhs, rhs)]
        }
        "O.4" => {
            let (a, b) = two_owners(rng, th);
            let lhs = OwnedTerm::oseq(
                PhiUnit(a.clone()),
                Gamma(ObjectWord::unit(), a, b.clone()),
            );
            vec![(lhs, PhiUnit(b))]
        }
        "O.5" => {
            let (a, b) = two_owners(rng, th);
            let lhs = OwnedTerm::oseq(
                Gamma(ObjectWord::unit(), a.clone(), b.clone()),
                PsiUnit(b),
            );
            vec![(lhs, PsiUnit(a))]
        }
        "O.6" => {
            let (a, b) = two_owners(rng, th);
            let c = random_owner(rng, th);
            let lhs = OwnedTerm::oseq(
                Gamma(x.clone(), a.clone(), b.clone()),
                Gamma(x.clone(), b, c.clone()),
            );
            vec![(lhs, Gamma(x.clone(), a, c))]
        }
        "O.7" => {
            let lhs = Gamma(x.clone(), a.clone(), a.clone());
            vec![(lhs, OId(single(&x, &a)))]
        }
        other => panic!("unknown axiom {other}"),
    }
}

/// Every axiom name, in the order they are stated.
pub const AXIOMS: &[&str] = &[
    "G.1", "G.2", "G.3", "G.4", "G.5", "G.6", "G.7", "G.8", "G.9", "G.10", "G.11", "O.1", "O.2",
    "O.3", "O.4", "O.5", "O.6", "O.7",
];
