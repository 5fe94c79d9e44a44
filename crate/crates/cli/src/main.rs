//! Command-line front end: theory checking, equality queries, rendering, and
//! the coin ledger.
//!
//! Exit codes: 0 success (or Equal), 1 domain negative (NotEqual, failed
//! verify), 2 usage or parse error, 3 equality unknown (budget exhausted).

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use smc::{
    build_ownership_theory, equal_modulo, layout_with, ledger::ledger_equivalent,
    owned_to_diagram, parse_owned_term, parse_term, parse_theory_file, render_dot, render_svg,
    to_diagram, Diagram, EqResult, LayoutOptions, Ledger, Owner, OwnedTheory,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

/// Resource theories, owned resources, and a coin ledger as string diagrams.
#[derive(Parser)]
#[command(name = "smc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a theory file, reporting its contents.
    Check(CheckArgs),
    /// Decide whether two terms are equal.
    Eq(EqArgs),
    /// Render a term as a string diagram.
    Render(RenderArgs),
    /// Operate the coin ledger.
    Ledger(LedgerArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Theory file to check.
    #[arg(long)]
    theory: PathBuf,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EqArgs {
    /// Theory file providing the signature.
    #[arg(long)]
    theory: PathBuf,
    /// Treat the terms as owned terms (requires owner declarations).
    #[arg(long)]
    owned: bool,
    /// Rewrite budget when the theory carries equations.
    #[arg(long, default_value_t = 1024)]
    budget: usize,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    term_a: String,
    term_b: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Dot,
}

#[derive(Args)]
struct RenderArgs {
    /// Theory file providing the signature.
    #[arg(long)]
    theory: PathBuf,
    /// Treat the term as an owned term.
    #[arg(long)]
    owned: bool,
    /// Output format.
    #[arg(long, value_enum, default_value = "svg")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Colour overrides file: one `Owner #rrggbb` pair per line.
    #[arg(long)]
    colours: Option<PathBuf>,
    /// Label regrouping junctions and transfer bars.
    #[arg(long)]
    show_structural_labels: bool,
    term: String,
}

#[derive(Args)]
struct LedgerArgs {
    /// Ledger file (default: $SMC_LEDGER or ./ledger.jsonl).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    #[command(subcommand)]
    command: LedgerCommand,
}

#[derive(Subcommand)]
enum LedgerCommand {
    /// Create an empty ledger file.
    Init {
        /// Comma-separated owner names (default: Alice,Bob,Carol).
        #[arg(long, value_delimiter = ',')]
        owners: Option<Vec<String>>,
    },
    /// Mint a coin of value N for OWNER.
    Mint { owner: String, n: u64 },
    /// Split the coin at POS into values K and (value - K).
    Split { pos: usize, k: u64 },
    /// Merge the coins at two positions (same owner).
    Merge { pos_a: usize, pos_b: usize },
    /// Transfer the coin at POS to OWNER.
    Transfer { pos: usize, owner: String },
    /// Show the frontier and balances.
    Show,
    /// Replay the whole ledger, checking every transaction.
    Verify,
    /// Render the ledger's history as a string diagram.
    Render {
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        show_structural_labels: bool,
    },
    /// Compare this ledger with another for equality of effect.
    Equivalent { other: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Eq(args) => cmd_eq(args),
        Command::Render(args) => cmd_render(args),
        Command::Ledger(args) => cmd_ledger(args),
    }
}

fn load_theory(path: &Path) -> Result<(smc::Theory, Vec<Owner>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading theory file {}", path.display()))?;
    parse_theory_file(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode> {
    let (theory, owners) = load_theory(&args.theory)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "atoms": theory.atoms().len(),
                "generators": theory.generators().len(),
                "equations": theory.equations().len(),
                "owners": owners.len(),
            })
        );
    } else {
        let mut line = format!(
            "{} atoms, {} generators",
            theory.atoms().len(),
            theory.generators().len()
        );
        if !theory.equations().is_empty() {
            line.push_str(&format!(", {} equations", theory.equations().len()));
        }
        if !owners.is_empty() {
            line.push_str(&format!(", {} owners", owners.len()));
        }
        println!("{line}");
    }
    Ok(ExitCode::SUCCESS)
}

fn owned_theory(theory: smc::Theory, owners: Vec<Owner>, path: &Path) -> Result<OwnedTheory> {
    if owners.is_empty() {
        return Err(anyhow!(
            "{}: --owned needs owner declarations in the theory file",
            path.display()
        ));
    }
    build_ownership_theory(theory, owners).map_err(|e| anyhow!("{e}"))
}

fn verdict_exit(verdict: EqResult, json: bool) -> ExitCode {
    if json {
        let word = match verdict {
            EqResult::Equal => "equal",
            EqResult::NotEqual => "not-equal",
            EqResult::Unknown => "unknown",
        };
        println!("{}", serde_json::json!({ "verdict": word }));
    } else {
        println!(
            "{}",
            match verdict {
                EqResult::Equal => "Equal",
                EqResult::NotEqual => "NotEqual",
                EqResult::Unknown => "Unknown",
            }
        );
    }
    match verdict {
        EqResult::Equal => ExitCode::SUCCESS,
        EqResult::NotEqual => ExitCode::from(EXIT_NEGATIVE),
        EqResult::Unknown => ExitCode::from(EXIT_UNKNOWN),
    }
}

fn cmd_eq(args: EqArgs) -> Result<ExitCode> {
    let (theory, owners) = load_theory(&args.theory)?;
    let verdict = if args.owned {
        let th = owned_theory(theory, owners, &args.theory)?;
        let a = parse_owned_term(&args.term_a, &th).map_err(|e| anyhow!("first term: {e}"))?;
        let b = parse_owned_term(&args.term_b, &th).map_err(|e| anyhow!("second term: {e}"))?;
        smc::owned_equal_with_budget(&a, &b, &th, args.budget).map_err(|e| anyhow!("{e}"))?
    } else {
        let a = parse_term(&args.term_a, &theory).map_err(|e| anyhow!("first term: {e}"))?;
        let b = parse_term(&args.term_b, &theory).map_err(|e| anyhow!("second term: {e}"))?;
        equal_modulo(&a, &b, &theory, args.budget).map_err(|e| anyhow!("{e}"))?
    };
    Ok(verdict_exit(verdict, args.json))
}

fn colour_map(owners: &[Owner], overrides: Option<&PathBuf>) -> Result<HashMap<String, String>> {
    let mut map: HashMap<String, String> = owners
        .iter()
        .map(|o| (o.name.clone(), o.colour.clone()))
        .collect();
    if let Some(path) = overrides {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading colours file {}", path.display()))?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(name), Some(colour)) = (parts.next(), parts.next()) else {
                return Err(anyhow!(
                    "{}:{}: expected `Owner #rrggbb`",
                    path.display(),
                    idx + 1
                ));
            };
            map.insert(name.to_string(), colour.to_string());
        }
    }
    Ok(map)
}

fn emit_rendered(
    diagram: &Diagram,
    colours: &HashMap<String, String>,
    format: Format,
    show_structural_labels: bool,
    output: Option<&PathBuf>,
) -> Result<()> {
    let l = layout_with(
        diagram,
        Some(colours),
        &LayoutOptions {
            show_structural_labels,
        },
    );
    let text = match format {
        Format::Svg => render_svg(&l),
        Format::Dot => render_dot(&l),
    };
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<ExitCode> {
    let (theory, owners) = load_theory(&args.theory)?;
    let colours = colour_map(&owners, args.colours.as_ref())?;
    let diagram = if args.owned {
        let th = owned_theory(theory, owners, &args.theory)?;
        let t = parse_owned_term(&args.term, &th).map_err(|e| anyhow!("{e}"))?;
        owned_to_diagram(&t, &th).map_err(|e| anyhow!("{e}"))?
    } else {
        let t = parse_term(&args.term, &theory).map_err(|e| anyhow!("{e}"))?;
        to_diagram(&t, &theory).map_err(|e| anyhow!("{e}"))?
    };
    emit_rendered(
        &diagram,
        &colours,
        args.format,
        args.show_structural_labels,
        args.output.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn ledger_path(args: &LedgerArgs) -> PathBuf {
    args.file
        .clone()
        .or_else(|| std::env::var_os("SMC_LEDGER").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ledger.jsonl"))
}

/// Advisory single-writer lock: a sibling `.lock` file created exclusively
/// and removed on drop.
struct LedgerLock {
    path: PathBuf,
}

impl LedgerLock {
    fn acquire(ledger_path: &Path) -> Result<LedgerLock> {
        let path = ledger_path.with_extension("lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LedgerLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(anyhow!(
                "ledger is locked by another process ({} exists)",
                path.display()
            )),
            Err(e) => Err(e).with_context(|| format!("creating lock {}", path.display())),
        }
    }
}

impl Drop for LedgerLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn load_ledger(path: &Path) -> Result<Ledger> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading ledger {}", path.display()))?;
    Ledger::load(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn store_ledger(path: &Path, ledger: &Ledger) -> Result<()> {
    fs::write(path, ledger.save()).with_context(|| format!("writing {}", path.display()))
}

/// Makes sure `name` is an owner of the ledger, registering it with the next
/// palette colour if not.
fn ensure_owner(ledger: Ledger, name: &str) -> Result<Ledger> {
    if ledger.theory().owner(name).is_some() {
        return Ok(ledger);
    }
    let owner = Owner::with_default_colour(name, ledger.owners().len());
    ledger.with_owner(owner).map_err(|e| anyhow!("{e}"))
}

fn show_ledger(ledger: &Ledger, json: bool) {
    if json {
        let frontier: Vec<_> = ledger
            .frontier()
            .iter()
            .map(|c| serde_json::json!({"value": c.value, "owner": c.owner}))
            .collect();
        let balances: serde_json::Map<String, serde_json::Value> = ledger
            .balances()
            .into_iter()
            .map(|(k, v)| (k, serde_json::json!(v)))
            .collect();
        println!(
            "{}",
            serde_json::json!({
                "transactions": ledger.transactions().len(),
                "frontier": frontier,
                "balances": balances,
                "total": ledger.balances().values().sum::<u64>(),
            })
        );
        return;
    }
    if ledger.frontier().is_empty() {
        println!("frontier: (empty)");
    } else {
        let coins: Vec<String> = ledger
            .frontier()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i}:{c}"))
            .collect();
        println!("frontier: {}", coins.join(" "));
    }
    for (owner, value) in ledger.balances() {
        println!("  {owner}: {value}");
    }
    println!(
        "{} transactions, total value {}",
        ledger.transactions().len(),
        ledger.balances().values().sum::<u64>()
    );
}

fn cmd_ledger(args: LedgerArgs) -> Result<ExitCode> {
    let path = ledger_path(&args);
    match &args.command {
        LedgerCommand::Init { owners } => {
            let _lock = LedgerLock::acquire(&path)?;
            let names: Vec<String> = owners
                .clone()
                .unwrap_or_else(|| vec!["Alice".into(), "Bob".into(), "Carol".into()]);
            let owners: Vec<Owner> = names
                .iter()
                .enumerate()
                .map(|(i, n)| Owner::with_default_colour(n, i))
                .collect();
            let ledger = Ledger::new(owners).map_err(|e| anyhow!("{e}"))?;
            store_ledger(&path, &ledger)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({"initialized": path.display().to_string()})
                );
            } else {
                println!("initialized {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Mint { owner, n } => {
            let _lock = LedgerLock::acquire(&path)?;
            let ledger = ensure_owner(load_ledger(&path)?, owner)?;
            let ledger = ledger.mint(owner, *n).map_err(|e| anyhow!("{e}"))?;
            store_ledger(&path, &ledger)?;
            show_ledger(&ledger, args.json);
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Split { pos, k } => {
            let _lock = LedgerLock::acquire(&path)?;
            let ledger = load_ledger(&path)?
                .split(*pos, *k)
                .map_err(|e| anyhow!("{e}"))?;
            store_ledger(&path, &ledger)?;
            show_ledger(&ledger, args.json);
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Merge { pos_a, pos_b } => {
            let _lock = LedgerLock::acquire(&path)?;
            let ledger = load_ledger(&path)?
                .merge(*pos_a, *pos_b)
                .map_err(|e| anyhow!("{e}"))?;
            store_ledger(&path, &ledger)?;
            show_ledger(&ledger, args.json);
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Transfer { pos, owner } => {
            let _lock = LedgerLock::acquire(&path)?;
            let ledger = ensure_owner(load_ledger(&path)?, owner)?;
            let ledger = ledger.transfer(*pos, owner).map_err(|e| anyhow!("{e}"))?;
            store_ledger(&path, &ledger)?;
            show_ledger(&ledger, args.json);
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Show => {
            let ledger = load_ledger(&path)?;
            show_ledger(&ledger, args.json);
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Verify => {
            // Verify diagnoses the file, so corruption is its negative
            // verdict, not a usage error.
            let outcome = fs::read_to_string(&path)
                .map_err(|e| anyhow!("reading ledger {}: {e}", path.display()))
                .and_then(|text| Ledger::load(&text).map_err(|e| anyhow!("{e}")))
                .and_then(|ledger| {
                    ledger.verify().map_err(|e| anyhow!("{e}"))?;
                    Ok(ledger)
                });
            match outcome {
                Ok(ledger) => {
                    if args.json {
                        println!("{}", serde_json::json!({"ok": true}));
                    } else {
                        println!(
                            "OK: {} transactions replay cleanly",
                            ledger.transactions().len()
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    if args.json {
                        println!(
                            "{}",
                            serde_json::json!({"ok": false, "error": e.to_string()})
                        );
                    } else {
                        println!("FAILED: {e}");
                    }
                    Ok(ExitCode::from(EXIT_NEGATIVE))
                }
            }
        }
        LedgerCommand::Render {
            format,
            output,
            show_structural_labels,
        } => {
            let ledger = load_ledger(&path)?;
            let colours = colour_map(ledger.owners(), None)?;
            let diagram = owned_to_diagram(&ledger.composite_term(), ledger.theory())
                .map_err(|e| anyhow!("{e}"))?;
            emit_rendered(
                &diagram,
                &colours,
                *format,
                *show_structural_labels,
                output.as_ref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        LedgerCommand::Equivalent { other } => {
            let a = load_ledger(&path)?;
            let b = load_ledger(other)?;
            let verdict = ledger_equivalent(&a, &b).map_err(|e| anyhow!("{e}"))?;
            Ok(verdict_exit(verdict, args.json))
        }
    }
}
