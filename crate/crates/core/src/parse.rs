//! Parsers for the theory-definition file format and for term syntax.
//!
//! Theory files hold one declaration per line:
//!
//! ```text
//! # the baking example
//! atoms bread dough water flour oven
//! gen mix : water * flour -> dough
//! gen bake : dough * oven -> bread * oven
//! eq knead ; knead = knead
//! owner Alice colour #e41a1c
//! ```
//!
//! Term syntax: generators by name, `id(W)`, `sym(W, V)`, `;` for
//! diagrammatic-order composition, `*` for tensor, `I` for the empty word,
//! and parentheses for grouping. `*` binds tighter than `;`. Owned terms add
//! `f@Alice`, `phi@Alice(X, Y)`, `psi@Alice(X, Y)`, `phiI@Alice`,
//! `psiI@Alice`, and `gamma(X, Alice->Bob)`; a composite base term is lifted
//! by parenthesizing it, as in `(mix ; knead)@Alice`.

use crate::error::{Error, ParseError};
use crate::owned::{
    owned_typecheck, Owner, OwnedAtom, OwnedTerm, OwnedTheory, OwnedWord,
};
use crate::term::{typecheck, MorphismTerm};
use crate::theory::{Atom, Equation, GeneratorDecl, ObjectWord, Theory};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colour(String),
    LParen,
    RParen,
    Star,
    Semi,
    Comma,
    At,
    Colon,
    Arrow,
    Equals,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Colour(s) => format!("colour `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Star => "`*`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

// A `#` normally starts a comment running to the end of the line. The one
// exception is a colour literal: `#` followed by exactly six hex digits and a
// non-identifier boundary, as in `owner Alice colour #e41a1c`.
fn lex_line(src: &str, line_no: usize, out: &mut Vec<Token>) -> Result<(), ParseError> {
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '#' => {
                let hex = &src[i + 1..];
                let six: String = hex.chars().take(6).collect();
                let boundary = hex
                    .chars()
                    .nth(6)
                    .map_or(true, |c| !c.is_ascii_alphanumeric() && c != '_');
                if six.len() == 6 && six.chars().all(|c| c.is_ascii_hexdigit()) && boundary {
                    out.push(Token {
                        tok: Tok::Colour(format!("#{}", six.to_ascii_lowercase())),
                        line: line_no,
                        col,
                    });
                    i += 7;
                } else {
                    break; // comment
                }
            }
            '(' | ')' | '*' | ';' | ',' | '@' | ':' | '=' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '*' => Tok::Star,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '@' => Tok::At,
                    ':' => Tok::Colon,
                    _ => Tok::Equals,
                };
                out.push(Token { tok, line: line_no, col });
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push(Token { tok: Tok::Arrow, line: line_no, col });
                    i += 2;
                } else {
                    return Err(ParseError::new(line_no, col, "expected `->`"));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    line: line_no,
                    col,
                });
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(())
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        lex_line(line, idx + 1, &mut out)?;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(toks: Vec<Token>, src: &str) -> Self {
        let end_line = src.lines().count().max(1);
        let end_col = src.lines().last().map_or(1, |l| l.len() + 1);
        Parser {
            toks,
            pos: 0,
            end: (end_line, end_col),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.col))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn eat(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.err(format!("expected {}", want.describe()))),
        }
    }

    fn eat_if(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(self.err(format!("expected {what}, found {}", t.describe()))),
            None => Err(self.err(format!("expected {what}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            let t = &self.toks[self.pos];
            Err(ParseError::new(
                t.line,
                t.col,
                format!("unexpected {} after the end of the term", t.tok.describe()),
            ))
        }
    }

    // word := 'I' | factor ('*' factor)*, where a factor is an atom name or a
    // redundant 'I'.
    fn word(&mut self) -> Result<ObjectWord, ParseError> {
        let mut atoms = Vec::new();
        loop {
            let name = self.ident("an atom name or `I`")?;
            if name != "I" {
                atoms.push(
                    Atom::new(&name)
                        .map_err(|_| self.err(format!("`{name}` is not a valid atom name")))?,
                );
            }
            if !self.eat_if(&Tok::Star) {
                break;
            }
        }
        Ok(ObjectWord::new(atoms))
    }

    fn term(&mut self) -> Result<MorphismTerm, ParseError> {
        let mut acc = self.par_term()?;
        while self.eat_if(&Tok::Semi) {
            let rhs = self.par_term()?;
            acc = MorphismTerm::seq(acc, rhs);
        }
        Ok(acc)
    }

    fn par_term(&mut self) -> Result<MorphismTerm, ParseError> {
        let mut acc = self.term_factor()?;
        while self.eat_if(&Tok::Star) {
            let rhs = self.term_factor()?;
            acc = MorphismTerm::par(acc, rhs);
        }
        Ok(acc)
    }

    fn term_factor(&mut self) -> Result<MorphismTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                self.eat(&Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "id" => {
                        self.eat(&Tok::LParen)?;
                        let w = self.word()?;
                        self.eat(&Tok::RParen)?;
                        Ok(MorphismTerm::Id(w))
                    }
                    "sym" => {
                        self.eat(&Tok::LParen)?;
                        let l = self.word()?;
                        self.eat(&Tok::Comma)?;
                        let r = self.word()?;
                        self.eat(&Tok::RParen)?;
                        Ok(MorphismTerm::Sym(l, r))
                    }
                    "I" => Ok(MorphismTerm::Id(ObjectWord::unit())),
                    _ => Ok(MorphismTerm::Gen(name)),
                }
            }
            Some(t) => Err(self.err(format!("expected a term, found {}", t.describe()))),
            None => Err(self.err("expected a term")),
        }
    }

    // owned_word := 'I' | owned_atom ('*' owned_atom)*
    // owned_atom := ('I' | atom | '(' word ')') '@' owner
    fn owned_word(&mut self) -> Result<OwnedWord, ParseError> {
        let mut atoms = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let payload = self.word()?;
                    self.eat(&Tok::RParen)?;
                    self.eat(&Tok::At)?;
                    let owner = self.ident("an owner name")?;
                    atoms.push(OwnedAtom::new(payload, owner));
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    if name == "I" && self.peek() != Some(&Tok::At) {
                        // bare `I`: the empty word, contributing no atoms
                    } else {
                        self.eat(&Tok::At)?;
                        let owner = self.ident("an owner name")?;
                        let payload = if name == "I" {
                            ObjectWord::unit()
                        } else {
                            ObjectWord::single(Atom::new(&name).map_err(|_| {
                                self.err(format!("`{name}` is not a valid atom name"))
                            })?)
                        };
                        atoms.push(OwnedAtom::new(payload, owner));
                    }
                }
                _ => return Err(self.err("expected an owned word")),
            }
            if !self.eat_if(&Tok::Star) {
                break;
            }
        }
        Ok(OwnedWord::new(atoms))
    }

    fn owned_term(&mut self) -> Result<OwnedTerm, ParseError> {
        let mut acc = self.owned_par_term()?;
        while self.eat_if(&Tok::Semi) {
            let rhs = self.owned_par_term()?;
            acc = OwnedTerm::oseq(acc, rhs);
        }
        Ok(acc)
    }

    fn owned_par_term(&mut self) -> Result<OwnedTerm, ParseError> {
        let mut acc = self.owned_factor()?;
        while self.eat_if(&Tok::Star) {
            let rhs = self.owned_factor()?;
            acc = OwnedTerm::opar(acc, rhs);
        }
        Ok(acc)
    }

    fn owned_factor(&mut self) -> Result<OwnedTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                // Either a grouped owned term or a parenthesized base term
                // lifted with `@owner`; try the lift first and backtrack.
                let start = self.pos;
                self.pos += 1;
                if let Ok(base) = self.term() {
                    if self.eat_if(&Tok::RParen) && self.eat_if(&Tok::At) {
                        let owner = self.ident("an owner name")?;
                        return Ok(OwnedTerm::Lifted(owner, base));
                    }
                }
                self.pos = start + 1;
                let inner = self.owned_term()?;
                self.eat(&Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "id" => {
                        self.eat(&Tok::LParen)?;
                        let w = self.owned_word()?;
                        self.eat(&Tok::RParen)?;
                        Ok(OwnedTerm::OId(w))
                    }
                    "sym" => {
                        self.eat(&Tok::LParen)?;
                        let l = self.owned_word()?;
                        self.eat(&Tok::Comma)?;
                        let r = self.owned_word()?;
                        self.eat(&Tok::RParen)?;
                        Ok(OwnedTerm::OSym(l, r))
                    }
                    "phi" | "psi" => {
                        self.eat(&Tok::At)?;
                        let owner = self.ident("an owner name")?;
                        self.eat(&Tok::LParen)?;
                        let x = self.word()?;
                        self.eat(&Tok::Comma)?;
                        let y = self.word()?;
                        self.eat(&Tok::RParen)?;
                        Ok(if name == "phi" {
                            OwnedTerm::PhiPair(owner, x, y)
                        } else {
                            OwnedTerm::PsiPair(owner, x, y)
                        })
                    }
                    "phiI" | "psiI" => {
                        self.eat(&Tok::At)?;
                        let owner = self.ident("an owner name")?;
                        Ok(if name == "phiI" {
                            OwnedTerm::PhiUnit(owner)
                        } else {
                            OwnedTerm::PsiUnit(owner)
                        })
                    }
                    "gamma" => {
                        self.eat(&Tok::LParen)?;
                        let payload = self.word()?;
                        self.eat(&Tok::Comma)?;
                        let from = self.ident("an owner name")?;
                        self.eat(&Tok::Arrow)?;
                        let to = self.ident("an owner name")?;
                        self.eat(&Tok::RParen)?;
                        Ok(OwnedTerm::Gamma(payload, from, to))
                    }
                    "I" => Ok(OwnedTerm::OId(OwnedWord::unit())),
                    _ => {
                        self.eat(&Tok::At).map_err(|_| {
                            self.err(format!(
                                "expected `@owner` after `{name}`: owned terms name an owner"
                            ))
                        })?;
                        let owner = self.ident("an owner name")?;
                        Ok(OwnedTerm::Lifted(owner, MorphismTerm::Gen(name)))
                    }
                }
            }
            Some(t) => Err(self.err(format!("expected an owned term, found {}", t.describe()))),
            None => Err(self.err("expected an owned term")),
        }
    }
}

/// Parses and validates a theory file, returning the theory and any owner
/// declarations it carries.
pub fn parse_theory_file(text: &str) -> Result<(Theory, Vec<Owner>), Error> {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut generators: Vec<GeneratorDecl> = Vec::new();
    let mut owners: Vec<Owner> = Vec::new();
    let mut eq_lines: Vec<(usize, Vec<Token>)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut toks = Vec::new();
        lex_line(line, line_no, &mut toks).map_err(Error::Parse)?;
        if toks.is_empty() {
            continue;
        }
        let head = match &toks[0].tok {
            Tok::Ident(s) => s.clone(),
            other => {
                return Err(ParseError::new(
                    line_no,
                    toks[0].col,
                    format!("expected a declaration keyword, found {}", other.describe()),
                )
                .into())
            }
        };
        let mut p = Parser::new(toks, line);
        p.pos = 1;
        match head.as_str() {
            "atoms" => {
                while !p.at_end() {
                    let name = p.ident("an atom name")?;
                    atoms.push(
                        Atom::new(&name)
                            .map_err(|_| p.err(format!("`{name}` is not a valid atom name")))?,
                    );
                }
            }
            "gen" => {
                let name = p.ident("a generator name")?;
                p.eat(&Tok::Colon)?;
                let dom = p.word()?;
                p.eat(&Tok::Arrow)?;
                let cod = p.word()?;
                p.expect_end()?;
                generators.push(GeneratorDecl { name, dom, cod });
            }
            "eq" => {
                // Equations reference generators, so they are parsed once the
                // signature is complete.
                eq_lines.push((line_no, p.toks.split_off(1)));
            }
            "owner" => {
                let name = p.ident("an owner name")?;
                let colour = if p.at_end() {
                    None
                } else {
                    let kw = p.ident("`colour`")?;
                    if kw != "colour" {
                        return Err(p.err(format!("expected `colour`, found `{kw}`")).into());
                    }
                    match p.peek().cloned() {
                        Some(Tok::Colour(c)) => {
                            p.pos += 1;
                            Some(c)
                        }
                        _ => return Err(p.err("expected a colour like `#e41a1c`").into()),
                    }
                };
                p.expect_end()?;
                let colour =
                    colour.unwrap_or_else(|| Owner::with_default_colour("", owners.len()).colour);
                owners.push(Owner::new(name, colour));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("unknown declaration `{other}` (expected atoms, gen, eq, or owner)"),
                )
                .into())
            }
        }
    }

    let theory = Theory::new(atoms, generators, Vec::new())?;
    let mut equations = Vec::new();
    for (line_no, toks) in eq_lines {
        let split = toks
            .iter()
            .position(|t| t.tok == Tok::Equals)
            .ok_or_else(|| ParseError::new(line_no, 1, "an equation needs `=`"))?;
        let (lhs_toks, rest) = toks.split_at(split);
        let mut lp = Parser::new(lhs_toks.to_vec(), "");
        lp.end = (line_no, rest[0].col);
        let lhs = lp.term()?;
        lp.expect_end()?;
        let mut rp = Parser::new(rest[1..].to_vec(), "");
        rp.end = (line_no, 1);
        let rhs = rp.term()?;
        rp.expect_end()?;
        equations.push(Equation { lhs, rhs });
    }
    let theory = Theory::new(
        theory.atoms().to_vec(),
        theory.generators().to_vec(),
        equations,
    )?;

    // Owner names must be valid and distinct even though they live outside
    // the base theory.
    let mut seen = std::collections::HashSet::new();
    for o in &owners {
        if !crate::theory::is_valid_ident(&o.name) {
            return Err(Error::Theory(crate::error::TheoryError::InvalidIdentifier(
                o.name.clone(),
            )));
        }
        if !seen.insert(o.name.clone()) {
            return Err(Error::Theory(crate::error::TheoryError::DuplicateOwner(
                o.name.clone(),
            )));
        }
    }
    Ok((theory, owners))
}

/// Parses a theory file, keeping only the base theory. Owner declarations
/// are validated and dropped; use [`parse_theory_file`] to keep them.
pub fn parse_theory(text: &str) -> Result<Theory, Error> {
    parse_theory_file(text).map(|(t, _)| t)
}

/// Parses a term and typechecks it against the theory.
pub fn parse_term(text: &str, theory: &Theory) -> Result<MorphismTerm, Error> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks, text);
    let term = p.term()?;
    p.expect_end()?;
    typecheck(&term, theory)?;
    Ok(term)
}

/// Parses an object word such as `water * flour` or `I`.
pub fn parse_word(text: &str) -> Result<ObjectWord, Error> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks, text);
    let w = p.word()?;
    p.expect_end()?;
    Ok(w)
}

/// Parses an owned term and typechecks it against the owned theory.
pub fn parse_owned_term(text: &str, theory: &OwnedTheory) -> Result<OwnedTerm, Error> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks, text);
    let term = p.owned_term()?;
    p.expect_end()?;
    owned_typecheck(&term, theory)?;
    Ok(term)
}
