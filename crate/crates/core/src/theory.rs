//! Resource theories: signatures for free symmetric strict monoidal categories.
//!
//! A [`Theory`] is a set of atomic objects, a set of typed generators, and an
//! optional list of equations between parallel terms. The category it presents
//! is the free symmetric strict monoidal category on the signature, quotiented
//! by the equations. Strictness is built into the representation: an object is
//! an [`ObjectWord`], a finite sequence of atoms, and the tensor of two objects
//! is concatenation. The empty word is the monoidal unit `I` — there is no
//! unit atom and no associator.

use std::collections::HashMap;
use std::fmt;

use crate::error::{TheoryError, TypeError};
use crate::term::{typecheck, MorphismTerm};

/// Reserved words that cannot be used as atom, generator, or owner names.
pub const RESERVED: &[&str] = &[
    "I", "id", "sym", "phi", "psi", "phiI", "psiI", "gamma", "atoms", "gen", "eq", "owner",
    "colour",
];

/// Returns true if `s` is a valid identifier: letters, digits, and
/// underscores, starting with a letter, and not a reserved word.
pub fn is_valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic());
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}

/// An atomic object of a resource theory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, TheoryError> {
        let name = name.into();
        if is_valid_ident(&name) {
            Ok(Atom(name))
        } else {
            Err(TheoryError::InvalidIdentifier(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An object of the free strict monoidal category: a finite word of atoms.
///
/// The empty word is the unit `I`. Tensor is concatenation, which is
/// associative on the nose.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectWord(Vec<Atom>);

impl ObjectWord {
    pub fn unit() -> Self {
        ObjectWord(Vec::new())
    }

    pub fn new(atoms: Vec<Atom>) -> Self {
        ObjectWord(atoms)
    }

    pub fn single(atom: Atom) -> Self {
        ObjectWord(vec![atom])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tensor product: concatenation.
    pub fn tensor(&self, other: &ObjectWord) -> ObjectWord {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        ObjectWord(atoms)
    }
}

impl fmt::Display for ObjectWord {
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

impl FromIterator<Atom> for ObjectWord {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        ObjectWord(iter.into_iter().collect())
    }
}

/// A typed generating morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub dom: ObjectWord,
    pub cod: ObjectWord,
}

/// A user-imposed equation between two parallel terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: MorphismTerm,
    pub rhs: MorphismTerm,
}

/// A resource theory: atoms, generators, and equations.
///
/// Construction validates every cross-reference, so a `Theory` value is
/// always internally consistent. All values are immutable after construction.
#[derive(Debug, Clone)]
pub struct Theory {
    atoms: Vec<Atom>,
    generators: Vec<GeneratorDecl>,
    equations: Vec<Equation>,
    generator_index: HashMap<String, usize>,
}

impl Theory {
    /// Builds and validates a theory. Equations are typechecked and must be
    /// parallel.
    pub fn new(
        atoms: Vec<Atom>,
        generators: Vec<GeneratorDecl>,
        equations: Vec<Equation>,
    ) -> Result<Self, TheoryError> {
        let mut seen_atoms = HashMap::new();
        for (i, atom) in atoms.iter().enumerate() {
            if seen_atoms.insert(atom.name().to_string(), i).is_some() {
                return Err(TheoryError::DuplicateAtom(atom.name().to_string()));
            }
        }
        let mut generator_index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if !is_valid_ident(&g.name) {
                return Err(TheoryError::InvalidIdentifier(g.name.clone()));
            }
            if generator_index.insert(g.name.clone(), i).is_some() {
                return Err(TheoryError::DuplicateGenerator(g.name.clone()));
            }
            for atom in g.dom.atoms().iter().chain(g.cod.atoms()) {
                if !seen_atoms.contains_key(atom.name()) {
                    return Err(TheoryError::UnknownAtom {
                        atom: atom.name().to_string(),
                        generator: g.name.clone(),
                    });
                }
            }
        }
        let theory = Theory {
            atoms,
            generators,
            equations: Vec::new(),
            generator_index,
        };
        let mut checked = Vec::with_capacity(equations.len());
        for eq in equations {
            let (ld, lc) = typecheck(&eq.lhs, &theory)?;
            let (rd, rc) = typecheck(&eq.rhs, &theory)?;
            if ld != rd || lc != rc {
                return Err(TheoryError::IllTypedEquation {
                    lhs_dom: ld.to_string(),
                    lhs_cod: lc.to_string(),
                    rhs_dom: rd.to_string(),
                    rhs_cod: rc.to_string(),
                });
            }
            checked.push(eq);
        }
        Ok(Theory {
            equations: checked,
            ..theory
        })
    }

    /// The empty theory: no atoms, no generators, no equations.
    pub fn empty() -> Self {
        Theory {
            atoms: Vec::new(),
            generators: Vec::new(),
            equations: Vec::new(),
            generator_index: HashMap::new(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.name() == name)
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorDecl> {
        self.generator_index.get(name).map(|&i| &self.generators[i])
    }

    /// Looks a generator up or reports it unknown.
    pub fn expect_generator(&self, name: &str) -> Result<&GeneratorDecl, TypeError> {
        self.generator(name)
            .ok_or_else(|| TypeError::UnknownGenerator(name.to_string()))
    }

    /// Parses a word out of atom names declared in this theory.
    pub fn word(&self, names: &[&str]) -> Result<ObjectWord, TypeError> {
        names
            .iter()
            .map(|n| {
                self.atom(n)
                    .cloned()
                    .ok_or_else(|| TypeError::UnknownAtom(n.to_string()))
            })
            .collect()
    }
}
