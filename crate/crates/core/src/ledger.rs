//! A coin ledger over the owned coin theory.
//!
//! The coin theory has one atom and one generator `nu : I -> coin` that mints
//! a unit of value; the object `n` is the `n`-fold tensor of the atom, so
//! tensor is addition of values. A coin of value `n` held by `A` is the owned
//! atom `(coin*...*coin)@A`, and the ledger's frontier is the word of such
//! coins. A ledger denotes one morphism from the unit: each appended
//! transaction is a body morphism packaged against the current frontier by a
//! minimal prefix of adjacent crossings that brings the selected coins into a
//! contiguous block at the leftmost selected position, padded by identities
//! on the untouched coins. Regrouping splits and merges coins
//! value-preservingly, and transfers move them between owners.
//!
//! Ledger values are immutable: appending returns a new ledger. Persistence
//! is line-delimited: a header with the format version and owner
//! declarations, then one self-contained record per transaction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::bubble_swaps;
use crate::eq::EqResult;
use crate::error::LedgerError;
use crate::owned::{
    build_ownership_theory, owned_equal, owned_typecheck, Owner, OwnedAtom, OwnedTerm,
    OwnedTheory, OwnedWord,
};
use crate::parse::parse_owned_term;
use crate::term::MorphismTerm;
use crate::theory::{Atom, GeneratorDecl, ObjectWord, Theory};

/// Name of the coin atom in the coin theory.
pub const COIN_ATOM: &str = "coin";
/// Name of the minting generator.
pub const MINT_GEN: &str = "nu";
/// Persistence format version.
pub const FORMAT_VERSION: u32 = 1;

/// The coin theory: one atom, one generator `nu : I -> coin`, no equations.
pub fn coin_theory() -> Theory {
    let coin = Atom::new(COIN_ATOM).expect("valid atom name");
    Theory::new(
        vec![coin.clone()],
        vec![GeneratorDecl {
            name: MINT_GEN.into(),
            dom: ObjectWord::unit(),
            cod: ObjectWord::single(coin),
        }],
        vec![],
    )
    .expect("the coin theory is well-formed")
}

/// The object `n`: an `n`-fold word of coin atoms.
pub fn coin_word(n: u64) -> ObjectWord {
    let coin = Atom::new(COIN_ATOM).expect("valid atom name");
    (0..n).map(|_| coin.clone()).collect()
}

/// The morphism `nu_n : I -> n`, the `n`-fold tensor of `nu`; `nu_0` is the
/// unit identity.
pub fn nu_term(n: u64) -> MorphismTerm {
    match n {
        0 => MorphismTerm::Id(ObjectWord::unit()),
        _ => MorphismTerm::par_all((0..n).map(|_| MorphismTerm::gen(MINT_GEN))),
    }
}

/// One coin on the frontier: a value of at least 1 and its owner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coin {
    pub value: u64,
    pub owner: String,
}

impl Coin {
    pub fn new(value: u64, owner: impl Into<String>) -> Self {
        Coin {
            value,
            owner: owner.into(),
        }
    }

    pub fn to_atom(&self) -> OwnedAtom {
        OwnedAtom::new(coin_word(self.value), self.owner.clone())
    }
}

impl std::fmt::Display for Coin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.value, self.owner)
    }
}

/// Whether a transaction mints new value or only moves existing value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxKind {
    Mint,
    Normal,
}

/// A packaged transaction: which frontier positions feed the body, the body
/// itself, and the frontier it results in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub kind: TxKind,
    pub inputs: Vec<usize>,
    pub body: OwnedTerm,
    pub resulting_frontier: Vec<Coin>,
}

/// An append-only ledger: a validated transaction sequence plus its cached
/// frontier.
#[derive(Debug, Clone)]
pub struct Ledger {
    theory: OwnedTheory,
    transactions: Vec<Transaction>,
    frontier: Vec<Coin>,
}

impl Ledger {
    /// An empty ledger over the coin theory with the given owners.
    pub fn new(owners: Vec<Owner>) -> Result<Ledger, LedgerError> {
        let theory = build_ownership_theory(coin_theory(), owners)?;
        Ok(Ledger {
            theory,
            transactions: Vec::new(),
            frontier: Vec::new(),
        })
    }

    pub fn theory(&self) -> &OwnedTheory {
        &self.theory
    }

    pub fn owners(&self) -> &[Owner] {
        self.theory.owners()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn frontier(&self) -> &[Coin] {
        &self.frontier
    }

    /// The frontier as an owned word (the ledger morphism's codomain).
    pub fn frontier_word(&self) -> OwnedWord {
        self.frontier.iter().map(Coin::to_atom).collect()
    }

    /// A copy of this ledger that also knows about `owner`.
    pub fn with_owner(&self, owner: Owner) -> Result<Ledger, LedgerError> {
        let mut owners = self.theory.owners().to_vec();
        owners.push(owner);
        Ok(Ledger {
            theory: build_ownership_theory(coin_theory(), owners)?,
            transactions: self.transactions.clone(),
            frontier: self.frontier.clone(),
        })
    }

    // ------------------------------------------------------------------
    // Transaction bodies
    // ------------------------------------------------------------------

    /// Body minting a coin of value `n` for `owner`: `I -> n@owner`.
    pub fn mint_body(&self, owner: &str, n: u64) -> Result<OwnedTerm, LedgerError> {
        if n == 0 {
            return Err(LedgerError::MintZero);
        }
        self.theory.expect_owner(owner)?;
        Ok(OwnedTerm::oseq(
            OwnedTerm::PhiUnit(owner.to_string()),
            OwnedTerm::Lifted(owner.to_string(), nu_term(n)),
        ))
    }

    /// Body splitting the coin at `position` into values `k` and `n - k`.
    pub fn split_body(&self, position: usize, k: u64) -> Result<OwnedTerm, LedgerError> {
        let coin = self.coin_at(position)?;
        if coin.value < 2 || k == 0 || k >= coin.value {
            return Err(LedgerError::BadSplit {
                k,
                value: coin.value,
            });
        }
        Ok(OwnedTerm::PsiPair(
            coin.owner.clone(),
            coin_word(k),
            coin_word(coin.value - k),
        ))
    }

    /// Body merging the coins at two positions; both must share an owner.
    pub fn merge_body(&self, first: usize, second: usize) -> Result<OwnedTerm, LedgerError> {
        let a = self.coin_at(first)?;
        let b = self.coin_at(second)?;
        if a.owner != b.owner {
            return Err(LedgerError::MixedMerge(a.owner.clone(), b.owner.clone()));
        }
        Ok(OwnedTerm::PhiPair(
            a.owner.clone(),
            coin_word(a.value),
            coin_word(b.value),
        ))
    }

    /// Body transferring the coin at `position` to owner `to`.
    pub fn transfer_body(&self, position: usize, to: &str) -> Result<OwnedTerm, LedgerError> {
        self.theory.expect_owner(to)?;
        let coin = self.coin_at(position)?;
        Ok(OwnedTerm::Gamma(
            coin_word(coin.value),
            coin.owner.clone(),
            to.to_string(),
        ))
    }

    fn coin_at(&self, position: usize) -> Result<&Coin, LedgerError> {
        self.frontier
            .get(position)
            .ok_or(LedgerError::BadPosition(position, self.frontier.len()))
    }

    // ------------------------------------------------------------------
    // Packaging and appending
    // ------------------------------------------------------------------

    /// Packages a body against the current frontier. The body's domain must
    /// equal the selected coins in selection order; zero-input bodies append
    /// their outputs at the right end of the frontier.
    pub fn package(
        &self,
        inputs: &[usize],
        body: OwnedTerm,
        kind: TxKind,
    ) -> Result<Transaction, LedgerError> {
        let mut seen = vec![false; self.frontier.len()];
        for &i in inputs {
            if i >= self.frontier.len() {
                return Err(LedgerError::BadPosition(i, self.frontier.len()));
            }
            if seen[i] {
                return Err(LedgerError::OverlappingPositions(i));
            }
            seen[i] = true;
        }
        let (dom, cod) = owned_typecheck(&body, &self.theory)?;
        let selected: OwnedWord = inputs
            .iter()
            .map(|&i| self.frontier[i].to_atom())
            .collect();
        if dom != selected {
            return Err(LedgerError::DomainMismatch {
                expected: dom.to_string(),
                found: selected.to_string(),
            });
        }
        let produced = frontier_of_word(&cod)?;
        let resulting_frontier = splice_frontier(&self.frontier, inputs, &produced);
        Ok(Transaction {
            kind,
            inputs: inputs.to_vec(),
            body,
            resulting_frontier,
        })
    }

    /// The packaged morphism of `tx` against an arbitrary frontier: the
    /// crossing prefix followed by the identity-padded body.
    pub fn packaged_term(frontier: &[Coin], tx: &Transaction) -> OwnedTerm {
        let atoms: Vec<OwnedAtom> = frontier.iter().map(Coin::to_atom).collect();
        let block_at = tx.inputs.iter().copied().min().unwrap_or(frontier.len());

        // Destination slots: selected coins take block_at.. in selection
        // order; untouched coins fill the remaining slots in frontier order.
        let mut dest = vec![usize::MAX; atoms.len()];
        for (rank, &i) in tx.inputs.iter().enumerate() {
            dest[i] = block_at + rank;
        }
        let mut free = (0..atoms.len()).filter(|&s| {
            s < block_at || s >= block_at + tx.inputs.len()
        });
        for d in dest.iter_mut() {
            if *d == usize::MAX {
                *d = free.next().expect("slot for every untouched coin");
            }
        }

        let mut order = atoms.clone();
        let mut prefix_layers: Vec<OwnedTerm> = Vec::new();
        let mut dest_work = dest;
        for k in bubble_swaps(&mut dest_work) {
            let left = OwnedWord::new(order[..k].to_vec());
            let right = OwnedWord::new(order[k + 2..].to_vec());
            let swap = OwnedTerm::smart_opar(
                OwnedTerm::smart_opar(
                    OwnedTerm::OId(left),
                    OwnedTerm::OSym(
                        OwnedWord::single(order[k].clone()),
                        OwnedWord::single(order[k + 1].clone()),
                    ),
                ),
                OwnedTerm::OId(right),
            );
            order.swap(k, k + 1);
            prefix_layers.push(swap);
        }

        let before = OwnedWord::new(order[..block_at].to_vec());
        let after = OwnedWord::new(order[block_at + tx.inputs.len()..].to_vec());
        let padded = OwnedTerm::smart_opar(
            OwnedTerm::smart_opar(OwnedTerm::OId(before), tx.body.clone()),
            OwnedTerm::OId(after),
        );
        let prefix = prefix_layers
            .into_iter()
            .fold(OwnedTerm::OId(OwnedWord::new(atoms)), OwnedTerm::smart_oseq);
        OwnedTerm::smart_oseq(prefix, padded)
    }

    /// Appends a packaged transaction, returning the extended ledger. A
    /// transaction packaged against a different frontier is rejected as
    /// stale.
    pub fn append(&self, tx: Transaction) -> Result<Ledger, LedgerError> {
        let repackaged = self
            .package(&tx.inputs, tx.body.clone(), tx.kind)
            .map_err(|e| match e {
                LedgerError::DomainMismatch { expected, found }
                | LedgerError::StaleTransaction { expected, found } => {
                    LedgerError::StaleTransaction { expected, found }
                }
                LedgerError::BadPosition(i, n) => LedgerError::StaleTransaction {
                    expected: format!("a frontier with position {i}"),
                    found: format!("{n} coins"),
                },
                other => other,
            })?;
        if repackaged.resulting_frontier != tx.resulting_frontier {
            return Err(LedgerError::StaleTransaction {
                expected: frontier_to_string(&tx.resulting_frontier),
                found: frontier_to_string(&repackaged.resulting_frontier),
            });
        }
        // The packaged morphism must typecheck exactly from the frontier.
        let packaged = Self::packaged_term(&self.frontier, &tx);
        let (dom, cod) = owned_typecheck(&packaged, &self.theory)?;
        debug_assert_eq!(dom, self.frontier_word());
        let recomputed = frontier_of_word(&cod)?;
        let mut next = self.clone();
        next.frontier = recomputed;
        next.transactions.push(tx);
        Ok(next)
    }

    // Convenience flows used by the CLI: build, package, append.

    pub fn mint(&self, owner: &str, n: u64) -> Result<Ledger, LedgerError> {
        let body = self.mint_body(owner, n)?;
        self.append(self.package(&[], body, TxKind::Mint)?)
    }

    pub fn split(&self, position: usize, k: u64) -> Result<Ledger, LedgerError> {
        let body = self.split_body(position, k)?;
        self.append(self.package(&[position], body, TxKind::Normal)?)
    }

    pub fn merge(&self, first: usize, second: usize) -> Result<Ledger, LedgerError> {
        let body = self.merge_body(first, second)?;
        self.append(self.package(&[first, second], body, TxKind::Normal)?)
    }

    pub fn transfer(&self, position: usize, to: &str) -> Result<Ledger, LedgerError> {
        let body = self.transfer_body(position, to)?;
        self.append(self.package(&[position], body, TxKind::Normal)?)
    }

    // ------------------------------------------------------------------
    // Accounting and equivalence
    // ------------------------------------------------------------------

    /// Total coin value per owner at the frontier.
    pub fn balances(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for coin in &self.frontier {
            *out.entry(coin.owner.clone()).or_insert(0) += coin.value;
        }
        out
    }

    /// Total value minted over the ledger's history, counted as occurrences
    /// of the minting generator in transaction bodies.
    pub fn total_minted(&self) -> u64 {
        fn nu_count(term: &OwnedTerm) -> u64 {
            match term {
                OwnedTerm::Lifted(_, base) => base.gen_count() as u64,
                OwnedTerm::OSeq(a, b) | OwnedTerm::OPar(a, b) => nu_count(a) + nu_count(b),
                _ => 0,
            }
        }
        self.transactions.iter().map(|t| nu_count(&t.body)).sum()
    }

    /// The single morphism `I -> frontier` the ledger denotes.
    pub fn composite_term(&self) -> OwnedTerm {
        let mut acc = OwnedTerm::OId(OwnedWord::unit());
        let mut frontier: Vec<Coin> = Vec::new();
        for tx in &self.transactions {
            let packaged = Self::packaged_term(&frontier, tx);
            acc = OwnedTerm::smart_oseq(acc, packaged);
            frontier = tx.resulting_frontier.clone();
        }
        acc
    }

    /// Replays every transaction from scratch, checking types and frontiers.
    pub fn verify(&self) -> Result<(), LedgerError> {
        let mut replay = Ledger::new(self.owners().to_vec())?;
        for (i, tx) in self.transactions.iter().enumerate() {
            replay = replay.append(tx.clone()).map_err(|e| LedgerError::Corrupt {
                line: i + 2,
                message: e.to_string(),
            })?;
        }
        if replay.frontier != self.frontier {
            return Err(LedgerError::Corrupt {
                line: 0,
                message: "cached frontier does not match replay".into(),
            });
        }
        let composite = self.composite_term();
        let (dom, cod) = owned_typecheck(&composite, &self.theory)?;
        if !dom.is_empty() || cod != self.frontier_word() {
            return Err(LedgerError::Corrupt {
                line: 0,
                message: "composite morphism type does not match the frontier".into(),
            });
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Persistence
    // ------------------------------------------------------------------

    /// Serializes the ledger: a header line, then one record per transaction.
    pub fn save(&self) -> String {
        let header = Header {
            version: FORMAT_VERSION,
            owners: self
                .owners()
                .iter()
                .map(|o| OwnerRecord {
                    name: o.name.clone(),
                    colour: o.colour.clone(),
                })
                .collect(),
        };
        let mut out = String::new();
        writeln!(out, "{}", serde_json::to_string(&header).expect("serializable header"))
            .expect("writing to a string");
        for (seq, tx) in self.transactions.iter().enumerate() {
            let record = TxRecord {
                seq,
                kind: tx.kind,
                inputs: tx.inputs.clone(),
                body: tx.body.to_string(),
                resulting_frontier: tx.resulting_frontier.clone(),
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("serializable record"))
                .expect("writing to a string");
        }
        out
    }

    /// Parses and replays a saved ledger, validating every record.
    pub fn load(text: &str) -> Result<Ledger, LedgerError> {
        let mut lines = text.lines().enumerate();
        let (_, header_line) = lines.next().ok_or(LedgerError::Corrupt {
            line: 1,
            message: "missing header".into(),
        })?;
        let header: Header =
            serde_json::from_str(header_line).map_err(|e| LedgerError::Corrupt {
                line: 1,
                message: e.to_string(),
            })?;
        if header.version != FORMAT_VERSION {
            return Err(LedgerError::Corrupt {
                line: 1,
                message: format!("unsupported format version {}", header.version),
            });
        }
        let owners = header
            .owners
            .into_iter()
            .map(|o| Owner::new(o.name, o.colour))
            .collect();
        let mut ledger = Ledger::new(owners)?;
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let record: TxRecord =
                serde_json::from_str(line).map_err(|e| LedgerError::Corrupt {
                    line: line_no,
                    message: e.to_string(),
                })?;
            if record.seq != ledger.transactions.len() {
                return Err(LedgerError::Corrupt {
                    line: line_no,
                    message: format!(
                        "expected seq {}, found {}",
                        ledger.transactions.len(),
                        record.seq
                    ),
                });
            }
            let body = parse_owned_term(&record.body, &ledger.theory).map_err(|e| {
                LedgerError::Corrupt {
                    line: line_no,
                    message: e.to_string(),
                }
            })?;
            let tx = ledger
                .package(&record.inputs, body, record.kind)
                .map_err(|e| LedgerError::Corrupt {
                    line: line_no,
                    message: e.to_string(),
                })?;
            if tx.resulting_frontier != record.resulting_frontier {
                return Err(LedgerError::Corrupt {
                    line: line_no,
                    message: format!(
                        "frontier mismatch: replay gives {}, record says {}",
                        frontier_to_string(&tx.resulting_frontier),
                        frontier_to_string(&record.resulting_frontier),
                    ),
                });
            }
            ledger = ledger.append(tx).map_err(|e| LedgerError::Corrupt {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        Ok(ledger)
    }
}

/// Compares two ledgers as morphisms. Ledgers with different frontiers are
/// not parallel and compare NotEqual.
pub fn ledger_equivalent(l1: &Ledger, l2: &Ledger) -> Result<EqResult, LedgerError> {
    if l1.frontier != l2.frontier {
        return Ok(EqResult::NotEqual);
    }
    // Compare in a theory that knows the owners of both ledgers.
    let mut owners = l1.owners().to_vec();
    for o in l2.owners() {
        if !owners.iter().any(|x| x.name == o.name) {
            owners.push(o.clone());
        }
    }
    let theory =
        build_ownership_theory(coin_theory(), owners).map_err(|e| LedgerError::Corrupt {
            line: 0,
            message: e.to_string(),
        })?;
    Ok(owned_equal(&l1.composite_term(), &l2.composite_term(), &theory)?)
}

fn frontier_to_string(coins: &[Coin]) -> String {
    if coins.is_empty() {
        return "I".into();
    }
    coins
        .iter()
        .map(Coin::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads a frontier off an owned word over the coin theory. Every atom must
/// hold at least one coin: transactions may not leave empty collections
/// behind.
fn frontier_of_word(word: &OwnedWord) -> Result<Vec<Coin>, LedgerError> {
    word.atoms()
        .iter()
        .map(|a| {
            let value = a.payload.len() as u64;
            if value == 0 {
                Err(LedgerError::EmptyCoinOnFrontier)
            } else {
                Ok(Coin::new(value, a.owner.clone()))
            }
        })
        .collect()
}

/// New frontier after a transaction: untouched coins keep their relative
/// order, and the body's products sit at the leftmost selected position (or
/// at the right end for zero-input bodies).
fn splice_frontier(frontier: &[Coin], inputs: &[usize], produced: &[Coin]) -> Vec<Coin> {
    let block_at = inputs.iter().copied().min().unwrap_or(frontier.len());
    let selected: Vec<bool> = {
        let mut v = vec![false; frontier.len()];
        for &i in inputs {
            v[i] = true;
        }
        v
    };
    let untouched: Vec<&Coin> = frontier
        .iter()
        .enumerate()
        .filter(|(i, _)| !selected[*i])
        .map(|(_, c)| c)
        .collect();
    let mut out: Vec<Coin> = Vec::with_capacity(untouched.len() + produced.len());
    out.extend(untouched[..block_at].iter().map(|c| (*c).clone()));
    out.extend(produced.iter().cloned());
    out.extend(untouched[block_at..].iter().map(|c| (*c).clone()));
    out
}

#[derive(Serialize, Deserialize)]
struct Header {
    version: u32,
    owners: Vec<OwnerRecord>,
}

#[derive(Serialize, Deserialize)]
struct OwnerRecord {
    name: String,
    colour: String,
}

#[derive(Serialize, Deserialize)]
struct TxRecord {
    seq: usize,
    kind: TxKind,
    inputs: Vec<usize>,
    body: String,
    resulting_frontier: Vec<Coin>,
}
