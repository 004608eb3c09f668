//! Command line wiring. One thin binary dispatches to the library; every
//! subcommand is a small wrapper that renders a library result.
//!
//! Exit codes separate verdicts from breakage: 0 means the computation ran
//! and the verdict was positive (passes, found, clean), 1 means it ran and
//! the verdict was negative, 2 means the input or invocation was bad.
//! Randomized subcommands require an explicit seed and print byte-identical
//! output for identical invocations.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bns::{self, Character, PairVerdict};
use crate::cancel;
use crate::hnn::{self, FixedWordStream};
use crate::npc::{self, Violation};
use crate::presentation::{
    expand_to_at, mapping_torus, t_rewrite, zigzag_relator, Presentation, RewriteResult,
};
use crate::samples;
use crate::squarify::{
    self, general_squarify_search, replay_schedule, template_squarify, RelatorSchedule,
    SquarifiedPresentation, DEFAULT_LEAF_BUDGET,
};
use crate::word::{format_word, parse_word, Alphabet, Endomorphism, Letter, Word};

const SCHEMA: &str = "cat0/v1";

const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "cat0",
    version,
    about = "Square presentations of free-group HNN extensions: squarify, check curvature, measure pieces, classify characters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PresInput {
    /// Presentation text, like "< a, t | t a t^-1 a^-2 >"
    #[arg(long)]
    pres: Option<String>,
    /// File holding a presentation in the same syntax
    #[arg(long)]
    file: Option<PathBuf>,
}

impl PresInput {
    fn resolve(&self) -> Result<(Presentation, String), String> {
        match (&self.pres, &self.file) {
            (Some(text), None) => Ok((
                Presentation::parse(text).map_err(|e| e.to_string())?,
                text.clone(),
            )),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                Ok((Presentation::parse(&text).map_err(|e| e.to_string())?, text.trim().to_string()))
            }
            _ => Err("give exactly one of --pres or --file".into()),
        }
    }
}

#[derive(Args)]
struct EndoInput {
    /// Endomorphism text, like "a -> a b, b -> b a"
    #[arg(long)]
    endo: Option<String>,
    /// Named sample endomorphism: sapir, quintic, doubling
    #[arg(long)]
    sample: Option<String>,
}

impl EndoInput {
    fn resolve(&self) -> Result<(Endomorphism, String), String> {
        match (&self.endo, &self.sample) {
            (Some(text), None) => Ok((
                Endomorphism::parse(text).map_err(|e| e.to_string())?,
                text.clone(),
            )),
            (None, Some(name)) => {
                let f = samples::endomorphism_by_name(name)
                    .ok_or_else(|| format!("unknown sample `{name}`"))?;
                let shown = f.display();
                Ok((f, shown))
            }
            _ => Err("give exactly one of --endo or --sample".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word over a comma-separated alphabet
    Reduce {
        /// Comma-separated generator names, like "a,t"
        #[arg(long)]
        alphabet: String,
        /// Word in the shared syntax, like "t a a^-1 t"
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Free rank and torsion of the abelianization
    Betti {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a two-generator one-relator presentation over conjugates of
    /// one generator, eliminating a zero-exponent generator
    Rewrite {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        json: bool,
    },
    /// Turn even-length relators into an all-length-4 presentation
    Squarify {
        #[command(flatten)]
        input: PresInput,
        /// Cap on complete schedules examined by the search
        #[arg(long, default_value_t = DEFAULT_LEAF_BUDGET)]
        budget: u64,
        /// Force a strategy instead of choosing by shape: template | search
        #[arg(long)]
        mode: Option<String>,
        /// Replay a schedule recorded by --emit-schedule
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Write the successful schedule as JSON
        #[arg(long)]
        emit_schedule: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Curvature check for an all-length-4 presentation
    NpcCheck {
        #[command(flatten)]
        input: PresInput,
        /// Write the link graph in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Piece statistics and small cancellation verdicts
    Pieces {
        #[command(flatten)]
        input: PresInput,
        #[arg(long)]
        json: bool,
    },
    /// Classify characters of a two-generator one-relator group
    Bns {
        #[command(flatten)]
        input: PresInput,
        /// Single character as "x,y" in generator order
        #[arg(long)]
        chi: Option<String>,
        /// Classify every valid primitive ray pair with coordinates in
        /// [-N, N]
        #[arg(long)]
        sweep: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Pairwise cancellation test for an endomorphism
    Immersion {
        #[command(flatten)]
        input: EndoInput,
        #[arg(long)]
        json: bool,
    },
    /// Bounded search for iterates landing on proper powers up to conjugacy
    PeriodicSearch {
        #[command(flatten)]
        input: EndoInput,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_iter: u32,
        #[arg(long)]
        json: bool,
    },
    /// Exponent scan over prefixes of the fixed word of an immersion
    PrefixScan {
        #[command(flatten)]
        input: EndoInput,
        /// How many letters of the fixed word to scan
        #[arg(long)]
        letters: usize,
        /// Generator whose exponent is tracked
        #[arg(long)]
        gen: String,
        /// Seed generator; defaults to the first generator
        #[arg(long)]
        seed_letter: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Random endomorphism experiment over mapping tori
    Generic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        /// Base seed; required so runs are reproducible
        #[arg(long)]
        seed: u64,
        /// Write one CSV row per trial
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Replay the built-in reference pipeline and verify every recorded
    /// value, naming the first failing stage
    Paper {
        /// Even zigzag index; 8 runs the full pipeline with all recorded
        /// constants, other values run the squarification pipeline only
        #[arg(long, default_value_t = 8)]
        l: usize,
        /// Override the expanded relator with the contents of a file
        #[arg(long)]
        relator: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

pub fn run<I>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version on stdout with success
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_PASS
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Reduce { alphabet, word, json } => cmd_reduce(&alphabet, &word, json, out),
        Command::Betti { input, json } => cmd_betti(&input, json, out),
        Command::Rewrite { input, json } => cmd_rewrite(&input, json, out),
        Command::Squarify { input, budget, mode, schedule, emit_schedule, json } => {
            cmd_squarify(&input, budget, mode.as_deref(), schedule, emit_schedule, json, out)
        }
        Command::NpcCheck { input, dot, json } => cmd_npc_check(&input, dot, json, out),
        Command::Pieces { input, json } => cmd_pieces(&input, json, out),
        Command::Bns { input, chi, sweep, json } => {
            cmd_bns(&input, chi.as_deref(), sweep, json, out)
        }
        Command::Immersion { input, json } => cmd_immersion(&input, json, out),
        Command::PeriodicSearch { input, max_len, max_iter, json } => {
            cmd_periodic_search(&input, max_len, max_iter, json, out)
        }
        Command::PrefixScan { input, letters, gen, seed_letter, json } => {
            cmd_prefix_scan(&input, letters, &gen, seed_letter.as_deref(), json, out)
        }
        Command::Generic { k, n, trials, seed, csv, json } => {
            cmd_generic(k, n, trials, seed, csv, json, out)
        }
        Command::Paper { l, relator, json } => cmd_paper(l, relator, json, out),
    }
}

fn envelope(config: serde_json::Value, result: serde_json::Value) -> String {
    let value = json!({
        "schema": SCHEMA,
        "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "config": config,
        "result": result,
    });
    serde_json::to_string_pretty(&value).expect("serializable")
}

fn emit(out: &mut dyn Write, text: String) -> Result<(), String> {
    writeln!(out, "{text}").map_err(|e| e.to_string())
}

fn letter_str(alphabet: &Alphabet, l: Letter) -> String {
    match l.sign {
        crate::word::Sign::Plus => alphabet.name(l.gen).to_string(),
        crate::word::Sign::Minus => format!("{}^-1", alphabet.name(l.gen)),
    }
}

fn pair_str(alphabet: &Alphabet, pair: [Letter; 2]) -> String {
    format!("{} {}", letter_str(alphabet, pair[0]), letter_str(alphabet, pair[1]))
}

fn cmd_reduce(alphabet: &str, word: &str, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    let names: Vec<&str> = alphabet.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let alpha = Alphabet::new(names).map_err(|e| e.to_string())?;
    let w = parse_word(&alpha, word).map_err(|e| e.to_string())?;
    let reduced = format_word(&alpha, &w);
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "reduce", "alphabet": alphabet, "word": word }),
                json!({ "reduced": reduced, "length": w.len() }),
            ),
        )?;
    } else {
        emit(out, reduced)?;
        emit(out, format!("length: {}", w.len()))?;
    }
    Ok(EXIT_PASS)
}

fn torsion_strings(report: &crate::presentation::AbelianizationReport) -> Vec<String> {
    report.torsion.iter().map(|d| d.to_string()).collect()
}

fn cmd_betti(input: &PresInput, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;
    let report = p.abelianization();
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "betti", "presentation": shown }),
                json!({ "betti": report.betti, "torsion": torsion_strings(&report) }),
            ),
        )?;
    } else {
        emit(out, format!("betti: {}", report.betti))?;
        emit(out, format!("torsion: [{}]", torsion_strings(&report).join(", ")))?;
    }
    Ok(EXIT_PASS)
}

fn rewrite_json(rw: &RewriteResult) -> serde_json::Value {
    let conj = rw.conjugate_alphabet();
    json!({
        "l": rw.l,
        "stable": rw.stable,
        "base": rw.base,
        "shift": rw.shift,
        "word": format_word(&conj, &rw.word),
        "length": rw.word.len(),
    })
}

fn cmd_rewrite(input: &PresInput, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;
    let rw = t_rewrite(&p).map_err(|e| e.to_string())?;
    if json {
        emit(
            out,
            envelope(json!({ "command": "rewrite", "presentation": shown }), rewrite_json(&rw)),
        )?;
    } else {
        let conj = rw.conjugate_alphabet();
        emit(out, format!("eliminated: {} (stable)", rw.stable))?;
        emit(out, format!("top index: {}", rw.l))?;
        emit(out, format!("word: {}", format_word(&conj, &rw.word)))?;
    }
    Ok(EXIT_PASS)
}

fn schedule_json(sq: &SquarifiedPresentation) -> serde_json::Value {
    serde_json::to_value(&sq.schedule).expect("serializable")
}

fn squarified_summary(sq: &SquarifiedPresentation) -> serde_json::Value {
    json!({
        "presentation": sq.presentation.format(),
        "generators": sq.presentation.alphabet().len(),
        "relators": sq.presentation.relator_count(),
        "schedule": schedule_json(sq),
        "substitutions": sq.substitutions.iter().map(|s| json!({
            "name": s.name,
            "relator": s.relator,
            "cut": s.cut,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_squarify(
    input: &PresInput,
    budget: u64,
    mode: Option<&str>,
    schedule: Option<PathBuf>,
    emit_schedule: Option<PathBuf>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;

    let result: Result<Option<(SquarifiedPresentation, String)>, String> = if let Some(path) =
        schedule
    {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let sched: Vec<RelatorSchedule> =
            serde_json::from_str(&text).map_err(|e| format!("bad schedule file: {e}"))?;
        let sq = replay_schedule(&p, &sched).map_err(|e| e.to_string())?;
        Ok(Some((sq, "replay".to_string())))
    } else {
        let strategy = match mode {
            None => "auto",
            Some(m @ ("template" | "search")) => m,
            Some(other) => return Err(format!("unknown mode `{other}`")),
        };
        let try_template = |p: &Presentation| -> Result<SquarifiedPresentation, String> {
            let rw = t_rewrite(p).map_err(|e| e.to_string())?;
            template_squarify(&rw).map_err(|e| e.to_string())
        };
        match strategy {
            "template" => Ok(Some((try_template(&p)?, "template".into()))),
            "search" => {
                let outcome = general_squarify_search(&p, budget).map_err(|e| e.to_string())?;
                Ok(outcome.found.map(|sq| (sq, "search".into())))
            }
            _ => {
                // auto: template when the shape allows, else search
                match t_rewrite(&p).ok().and_then(|rw| template_squarify(&rw).ok()) {
                    Some(sq) => Ok(Some((sq, "template".into()))),
                    None => {
                        let outcome =
                            general_squarify_search(&p, budget).map_err(|e| e.to_string())?;
                        Ok(outcome.found.map(|sq| (sq, "search".into())))
                    }
                }
            }
        }
    };

    match result? {
        Some((sq, strategy)) => {
            let verified = squarify::verify_substitutions(&sq).ok;
            let npc_pass = npc::npc_check(&sq.presentation).map_err(|e| e.to_string())?.pass;
            if let Some(path) = emit_schedule {
                std::fs::write(&path, serde_json::to_string_pretty(&sq.schedule).unwrap())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if json {
                let mut summary = squarified_summary(&sq);
                summary["strategy"] = json!(strategy);
                summary["verified"] = json!(verified);
                summary["npc_pass"] = json!(npc_pass);
                emit(
                    out,
                    envelope(
                        json!({ "command": "squarify", "presentation": shown, "budget": budget }),
                        summary,
                    ),
                )?;
            } else {
                emit(out, format!("strategy: {strategy}"))?;
                emit(out, sq.presentation.format())?;
                emit(
                    out,
                    format!(
                        "generators: {}  relators: {}",
                        sq.presentation.alphabet().len(),
                        sq.presentation.relator_count()
                    ),
                )?;
                for rs in &sq.schedule {
                    emit(out, format!("schedule relator {}: cuts {:?}", rs.relator, rs.cuts))?;
                }
                emit(out, format!("back-substitution: {}", if verified { "ok" } else { "MISMATCH" }))?;
                emit(out, format!("curvature: {}", if npc_pass { "pass" } else { "fail" }))?;
            }
            Ok(if npc_pass && verified { EXIT_PASS } else { EXIT_FAIL })
        }
        None => {
            if json {
                emit(
                    out,
                    envelope(
                        json!({ "command": "squarify", "presentation": shown, "budget": budget }),
                        json!({ "found": false }),
                    ),
                )?;
            } else {
                emit(out, "no squarification found within the budget".to_string())?;
            }
            Ok(EXIT_FAIL)
        }
    }
}

fn violation_str(alphabet: &Alphabet, v: &Violation) -> String {
    match v {
        Violation::RepeatedPair { pair, occurrences } => format!(
            "repeated pair `{}` ({} occurrences)",
            pair_str(alphabet, *pair),
            occurrences.len()
        ),
        Violation::TripleLoop { xy, yz, xz } => format!(
            "cancelling triple `{}` / `{}` / `{}`",
            pair_str(alphabet, *xy),
            pair_str(alphabet, *yz),
            pair_str(alphabet, *xz)
        ),
        Violation::ShortCycle { length } => format!("link cycle of length {length}"),
        Violation::CriteriaDisagreement { conditions_pass, girth_pass } => format!(
            "internal inconsistency: subword conditions say {conditions_pass}, girth says {girth_pass}"
        ),
    }
}

fn cmd_npc_check(
    input: &PresInput,
    dot: Option<PathBuf>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;
    let report = npc::npc_check(&p).map_err(|e| e.to_string())?;
    if let Some(path) = dot {
        let sq = npc::SquarePresentation::new(&p).map_err(|e| e.to_string())?;
        let text = npc::link_to_dot(&npc::build_link(&sq), &p);
        std::fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let girth_text = report.girth.map(|g| g.to_string()).unwrap_or_else(|| "unknown".into());
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "npc-check", "presentation": shown }),
                json!({
                    "pass": report.pass,
                    "girth": girth_text,
                    "violations": report.violations.iter().map(|v| violation_str(p.alphabet(), v)).collect::<Vec<_>>(),
                }),
            ),
        )?;
    } else {
        emit(out, format!("curvature: {}", if report.pass { "pass" } else { "fail" }))?;
        emit(out, format!("link girth: {girth_text}"))?;
        for v in &report.violations {
            emit(out, format!("  {}", violation_str(p.alphabet(), v)))?;
        }
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_pieces(input: &PresInput, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;
    let report = cancel::max_piece(&p);
    let oracle_max = cancel::piece_oracle(&p).ok().map(|r| r.max_piece);
    let c16 = report.satisfies_c_prime(1, 6);
    let c17 = report.satisfies_c_prime(1, 7);
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "pieces", "presentation": shown }),
                json!({
                    "max_piece": report.max_piece,
                    "oracle_max_piece": oracle_max,
                    "c_prime_1_6": c16,
                    "c_prime_1_7": c17,
                    "c_p": report.c_p,
                    "per_relator": report.per_relator.iter().map(|r| json!({
                        "length": r.length,
                        "max_piece": r.max_piece,
                        "min_cover": r.min_cover,
                    })).collect::<Vec<_>>(),
                }),
            ),
        )?;
    } else {
        emit(out, format!("max piece: {}", report.max_piece))?;
        if let Some(o) = oracle_max {
            emit(
                out,
                format!("oracle agreement: {}", if o == report.max_piece { "ok" } else { "MISMATCH" }),
            )?;
        }
        for (i, r) in report.per_relator.iter().enumerate() {
            emit(out, format!("relator {i}: piece {} / length {}", r.max_piece, r.length))?;
        }
        emit(out, format!("C'(1/6): {c16}"))?;
        emit(out, format!("C'(1/7): {c17}"))?;
    }
    Ok(if c16 { EXIT_PASS } else { EXIT_FAIL })
}

fn classification_json(c: &bns::BnsClassification) -> serde_json::Value {
    json!({
        "chi": c.chi.values,
        "verdict": c.verdict,
        "chi_in_sigma": c.chi_in_sigma,
        "neg_chi_in_sigma": c.neg_chi_in_sigma,
    })
}

fn classification_line(c: &bns::BnsClassification) -> String {
    format!(
        "({:>3},{:>3})  {:<18}  sigma: ({}, {})",
        c.chi.values[0],
        c.chi.values[1],
        c.verdict.to_string(),
        c.chi_in_sigma,
        c.neg_chi_in_sigma
    )
}

fn cmd_bns(
    input: &PresInput,
    chi: Option<&str>,
    sweep: Option<i64>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let (p, shown) = input.resolve()?;
    let classifications = match (chi, sweep) {
        (Some(text), None) => {
            let (x, y) = parse_character(text)?;
            let c = Character::new(x, y).map_err(|e| e.to_string())?;
            vec![bns::brown_classify(&p, c).map_err(|e| e.to_string())?]
        }
        (None, Some(n)) => bns::sweep(&p, n).map_err(|e| e.to_string())?,
        _ => return Err("give exactly one of --chi or --sweep".into()),
    };
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "bns", "presentation": shown, "chi": chi, "sweep": sweep }),
                json!({
                    "rays": classifications.iter().map(classification_json).collect::<Vec<_>>(),
                }),
            ),
        )?;
    } else {
        for c in &classifications {
            emit(out, classification_line(c))?;
        }
    }
    Ok(EXIT_PASS)
}

fn parse_character(text: &str) -> Result<(i64, i64), String> {
    let cleaned = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = cleaned.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected `x,y`, got `{text}`"));
    }
    let x = parts[0].parse().map_err(|_| format!("bad integer `{}`", parts[0]))?;
    let y = parts[1].parse().map_err(|_| format!("bad integer `{}`", parts[1]))?;
    Ok((x, y))
}

fn cmd_immersion(input: &EndoInput, json: bool, out: &mut dyn Write) -> Result<i32, String> {
    let (f, shown) = input.resolve()?;
    let report = hnn::is_immersion(&f);
    let failure = report
        .failure
        .map(|(x, y)| format!("{} {}", letter_str(f.domain(), x), letter_str(f.domain(), y)));
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "immersion", "endomorphism": shown }),
                json!({ "is_immersion": report.is_immersion, "failure": failure }),
            ),
        )?;
    } else {
        emit(out, format!("immersion: {}", report.is_immersion))?;
        if let Some(pair) = failure {
            emit(out, format!("cancelling pair: {pair}"))?;
        }
    }
    Ok(if report.is_immersion { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_periodic_search(
    input: &EndoInput,
    max_len: usize,
    max_iter: u32,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let (f, shown) = input.resolve()?;
    let witness = hnn::periodic_conjugacy_search(&f, max_len, max_iter).map_err(|e| e.to_string())?;
    if json {
        emit(
            out,
            envelope(
                json!({
                    "command": "periodic-search",
                    "endomorphism": shown,
                    "max_len": max_len,
                    "max_iter": max_iter,
                }),
                json!({
                    "witness": witness.as_ref().map(|w| json!({
                        "word": format_word(f.domain(), &w.word),
                        "i": w.i,
                        "j": w.j,
                    })),
                }),
            ),
        )?;
    } else {
        match &witness {
            Some(w) => emit(
                out,
                format!(
                    "witness: word {} with iterate {} conjugate to power {}",
                    format_word(f.domain(), &w.word),
                    w.i,
                    w.j
                ),
            )?,
            None => emit(
                out,
                format!("no witness up to length {max_len} and iterate {max_iter}"),
            )?,
        }
    }
    Ok(if witness.is_none() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_prefix_scan(
    input: &EndoInput,
    letters: usize,
    gen: &str,
    seed_letter: Option<&str>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let (f, shown) = input.resolve()?;
    let gen_idx = f
        .domain()
        .index_of(gen)
        .ok_or_else(|| format!("unknown generator `{gen}`"))?;
    let seed_idx = match seed_letter {
        Some(name) => f
            .domain()
            .index_of(name)
            .ok_or_else(|| format!("unknown generator `{name}`"))?,
        None => 0,
    };
    let mut stream =
        FixedWordStream::new(f.clone(), Letter::pos(seed_idx)).map_err(|e| e.to_string())?;
    let report = hnn::prefix_exponent_scan(&mut stream, letters, gen_idx).map_err(|e| e.to_string())?;
    let clean = report.zero_positions.is_empty();
    if json {
        emit(
            out,
            envelope(
                json!({
                    "command": "prefix-scan",
                    "endomorphism": shown,
                    "letters": letters,
                    "gen": gen,
                }),
                json!({
                    "min": report.min,
                    "max": report.max,
                    "final": report.final_sum,
                    "zero_positions": report.zero_positions.iter().take(32).collect::<Vec<_>>(),
                    "zero_count": report.zero_positions.len(),
                }),
            ),
        )?;
    } else {
        emit(out, format!("prefix exponent range: [{}, {}]", report.min, report.max))?;
        emit(out, format!("zero prefixes: {}", report.zero_positions.len()))?;
        if let Some(first) = report.zero_positions.first() {
            emit(out, format!("first zero at length {first}"))?;
        }
    }
    Ok(if clean { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_generic(
    k: usize,
    n: usize,
    trials: u64,
    seed: u64,
    csv: Option<PathBuf>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let result = hnn::genericity_experiment(k, n, trials, seed).map_err(|e| e.to_string())?;
    if let Some(path) = csv {
        let mut text = String::from("trial,seed,max_piece_base,max_piece_torus,cprime16,cprime17\n");
        for row in &result.rows {
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                row.trial, row.seed, row.max_piece_base, row.max_piece_torus, row.cprime16, row.cprime17
            );
        }
        std::fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if json {
        emit(
            out,
            envelope(
                json!({ "command": "generic", "k": k, "n": n, "trials": trials, "seed": seed }),
                json!({
                    "count_cprime16": result.count_cprime16,
                    "count_cprime17": result.count_cprime17,
                    "fraction16": result.fraction16(),
                    "fraction17": result.fraction17(),
                    "piece_gap_violations": result.piece_gap_violations,
                }),
            ),
        )?;
    } else {
        emit(out, format!("trials: {trials}"))?;
        emit(
            out,
            format!("C'(1/6): {} / {trials} ({:.3})", result.count_cprime16, result.fraction16()),
        )?;
        emit(
            out,
            format!("C'(1/7): {} / {trials} ({:.3})", result.count_cprime17, result.fraction17()),
        )?;
        emit(out, format!("piece gap above two: {}", result.piece_gap_violations))?;
    }
    Ok(EXIT_PASS)
}

struct StageLog {
    lines: Vec<(String, String)>,
}

impl StageLog {
    fn new() -> StageLog {
        StageLog { lines: Vec::new() }
    }

    fn pass(&mut self, stage: &str, detail: String, out: &mut dyn Write) -> Result<(), String> {
        writeln!(out, "stage {stage:<16} ok    {detail}").map_err(|e| e.to_string())?;
        self.lines.push((stage.to_string(), detail));
        Ok(())
    }
}

fn stage_fail(stage: &str, detail: String, out: &mut dyn Write) -> Result<i32, String> {
    writeln!(out, "stage {stage:<16} FAIL  {detail}").map_err(|e| e.to_string())?;
    Ok(EXIT_FAIL)
}

/// The reference pipeline. Every constant asserted here matches the
/// recorded values for the index-8 zigzag group and the two sample mapping
/// tori.
fn cmd_paper(
    l: usize,
    relator_file: Option<PathBuf>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let mut log = StageLog::new();

    // stage: family relator and expansion
    let indexed = zigzag_relator(l).map_err(|e| e.to_string())?;
    let expanded = match &relator_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let alpha = Alphabet::new(["a", "t"]).unwrap();
            parse_word(&alpha, &text).map_err(|e| e.to_string())?
        }
        None => expand_to_at(&indexed),
    };
    if l == 8 {
        let alpha = Alphabet::new(["a", "t"]).unwrap();
        let recorded = parse_word(&alpha, samples::ZIGZAG_L8_EXPANDED).unwrap();
        if expanded.len() != 116 || expanded != recorded {
            return stage_fail(
                "relator",
                format!("expected the recorded 116-letter relator, got length {}", expanded.len()),
                out,
            );
        }
        log.pass("relator", "116 letters, matches the recorded word".into(), out)?;
    } else {
        log.pass("relator", format!("expanded length {}", expanded.len()), out)?;
    }

    let group = Presentation::new(Alphabet::new(["a", "t"]).unwrap(), vec![expanded.clone()])
        .map_err(|e| e.to_string())?;

    // stage: pieces
    let pieces = cancel::max_piece(&group);
    if l == 8 {
        let oracle = cancel::piece_oracle(&group).map_err(|e| e.to_string())?;
        if pieces.max_piece != 17 || oracle.max_piece != 17 {
            return stage_fail(
                "pieces",
                format!("expected max piece 17, got {} (oracle {})", pieces.max_piece, oracle.max_piece),
                out,
            );
        }
        if !pieces.satisfies_c_prime(1, 6) {
            return stage_fail("pieces", "sixth condition failed".into(), out);
        }
        log.pass("pieces", "max piece 17 of 116, C'(1/6) holds, oracle agrees".into(), out)?;
    } else {
        log.pass(
            "pieces",
            format!(
                "max piece {} of {}, C'(1/6): {}",
                pieces.max_piece,
                expanded.len(),
                pieces.satisfies_c_prime(1, 6)
            ),
            out,
        )?;
    }

    // stage: abelianization
    let ab = group.abelianization();
    if ab.betti != 2 || !ab.torsion.is_empty() {
        return stage_fail(
            "abelianization",
            format!("expected rank 2 and no torsion, got rank {} torsion {:?}", ab.betti, ab.torsion),
            out,
        );
    }
    log.pass("abelianization", "rank 2, no torsion".into(), out)?;

    // stage: rewrite; listing the stable generator first selects it for
    // elimination, since both exponent sums vanish here
    let rewrite_group = Presentation::new(
        Alphabet::new(["t", "a"]).unwrap(),
        vec![expanded.map_gens(|g| 1 - g)],
    )
    .map_err(|e| e.to_string())?;
    let rw = t_rewrite(&rewrite_group).map_err(|e| e.to_string())?;
    if rw.l != l || rw.word != indexed || rw.stable != "t" {
        return stage_fail("rewrite", format!("expected the index-{l} family word back"), out);
    }
    log.pass("rewrite", format!("top index {}, word length {}", rw.l, rw.word.len()), out)?;

    // stage: squarify
    let sq = template_squarify(&rw).map_err(|e| e.to_string())?;
    let n = l + 2;
    let gens = sq.presentation.alphabet().len();
    let rels = sq.presentation.relator_count();
    if gens != l + n || rels != l + n - 1 {
        return stage_fail(
            "squarify",
            format!("expected {} generators and {} relators, got {gens} and {rels}", l + n, l + n - 1),
            out,
        );
    }
    if !squarify::verify_substitutions(&sq).ok {
        return stage_fail("squarify", "back-substitution mismatch".into(), out);
    }
    log.pass("squarify", format!("{gens} generators, {rels} length-4 relators"), out)?;

    // stage: curvature
    let npc_report = npc::npc_check(&sq.presentation).map_err(|e| e.to_string())?;
    if !npc_report.pass {
        return stage_fail("curvature", "square presentation is not non-positively curved".into(), out);
    }
    let girth_text = npc_report.girth.map(|g| g.to_string()).unwrap_or_default();
    log.pass("curvature", format!("conditions and girth agree, girth {girth_text}"), out)?;

    if l == 8 {
        // stage: walk and hull
        let w = bns::walk(&group).map_err(|e| e.to_string())?;
        if !w.closed() {
            return stage_fail("walk", "expected a closed walk".into(), out);
        }
        let h = bns::hull(&w);
        if !h.multiplicity.iter().all(|&m| m == 1) {
            return stage_fail("walk", "expected every hull vertex visited once".into(), out);
        }
        log.pass("walk", format!("closed, hull has {} vertices, each visited once", h.vertices.len()), out)?;

        // stage: fibering classification
        let rays = bns::sweep(&group, 5).map_err(|e| e.to_string())?;
        for c in &rays {
            let [x, y] = c.chi.values;
            let expected = if (x, y) == (1, 1) || (x, y) == (-1, 1) {
                Some(PairVerdict::StrictlyAscending)
            } else if (x, y) == (1, 0) || (x, y) == (0, 1) {
                None // reported, not asserted
            } else {
                Some(PairVerdict::Fibered)
            };
            if let Some(want) = expected {
                if c.verdict != want {
                    return stage_fail(
                        "fibering",
                        format!("ray ({x},{y}) classified {} instead of {want:?}", c.verdict),
                        out,
                    );
                }
            }
        }
        let exceptional: Vec<String> = rays
            .iter()
            .filter(|c| matches!(c.chi.values, [1, 0] | [0, 1]))
            .map(|c| format!("({},{}) {}", c.chi.values[0], c.chi.values[1], c.verdict))
            .collect();
        log.pass(
            "fibering",
            format!(
                "two ascending ray pairs, others fibered; axis rays: {}",
                exceptional.join(", ")
            ),
            out,
        )?;

        // stage: sapir torus
        let sapir = samples::sapir();
        if !hnn::is_immersion(&sapir).is_immersion {
            return stage_fail("sapir", "expected an immersion".into(), out);
        }
        let sapir_torus = mapping_torus(&sapir, "t").map_err(|e| e.to_string())?;
        let sapir_ab = sapir_torus.abelianization();
        if sapir_ab.betti != 1 || !sapir_ab.torsion.is_empty() {
            return stage_fail("sapir", "expected abelianization of rank 1 without torsion".into(), out);
        }
        match general_squarify_search(&sapir_torus, 10) {
            Err(squarify::SquarifyError::OddRelator { .. }) => {}
            other => {
                return stage_fail(
                    "sapir",
                    format!("expected a parity error from odd relators, got {other:?}"),
                    out,
                )
            }
        }
        if hnn::periodic_conjugacy_search(&sapir, 8, 3).map_err(|e| e.to_string())?.is_some() {
            return stage_fail("sapir", "unexpected periodic witness".into(), out);
        }
        log.pass("sapir", "immersion, odd relators rejected, no witness to length 8 depth 3".into(), out)?;

        // stage: quintic torus
        let phi = samples::quintic();
        if !hnn::is_immersion(&phi).is_immersion {
            return stage_fail("quintic", "expected an immersion".into(), out);
        }
        let phi_torus = mapping_torus(&phi, "t").map_err(|e| e.to_string())?;
        let phi_ab = phi_torus.abelianization();
        let torsion = torsion_strings(&phi_ab);
        if phi_ab.betti != 1 || torsion != ["2", "2"] {
            return stage_fail(
                "quintic",
                format!("expected rank 1 with torsion [2, 2], got rank {} torsion {torsion:?}", phi_ab.betti),
                out,
            );
        }
        let outcome = general_squarify_search(&phi_torus, DEFAULT_LEAF_BUDGET).map_err(|e| e.to_string())?;
        let Some(phi_sq) = outcome.found else {
            return stage_fail("quintic", "no curved-free squarification found".into(), out);
        };
        if !npc::npc_check(&phi_sq.presentation).map_err(|e| e.to_string())?.pass {
            return stage_fail("quintic", "squarification fails the curvature check".into(), out);
        }
        if hnn::periodic_conjugacy_search(&phi, 6, 2).map_err(|e| e.to_string())?.is_some() {
            return stage_fail("quintic", "unexpected periodic witness".into(), out);
        }
        log.pass(
            "quintic",
            format!(
                "immersion, squarified to {} generators and {} relators, no witness to length 6 depth 2",
                phi_sq.presentation.alphabet().len(),
                phi_sq.presentation.relator_count()
            ),
            out,
        )?;

        // stage: fixed word
        let mut stream = FixedWordStream::new(phi.clone(), Letter::pos(0)).map_err(|e| e.to_string())?;
        let alpha = phi.domain().clone();
        let first10 = stream.prefix(10).map_err(|e| e.to_string())?;
        let expected10 = parse_word(&alpha, "a b^-1 a a b a^-1 b^-1 b^-1 a b^-1").unwrap();
        if first10 != expected10 {
            return stage_fail("fixed-word", "first ten letters differ from the recorded word".into(), out);
        }
        for i in 0..=6u32 {
            let len = 5usize.pow(i);
            let prefix = stream.prefix(len).map_err(|e| e.to_string())?;
            let iterate = phi
                .power_iterate(i, &Word::letter(Letter::pos(0)))
                .map_err(|e| e.to_string())?;
            if prefix != iterate {
                return stage_fail("fixed-word", format!("prefix of length 5^{i} is not the iterate"), out);
            }
        }
        let scan = hnn::prefix_exponent_scan(&mut stream, 15_625, 0).map_err(|e| e.to_string())?;
        if !scan.zero_positions.is_empty() {
            return stage_fail(
                "fixed-word",
                format!("prefix of length {} has exponent sum zero", scan.zero_positions[0]),
                out,
            );
        }
        // quintuple identity: the exponent in the five-fold prefix is three
        // times the exponent in the prefix
        let big = stream.prefix(15_625).map_err(|e| e.to_string())?;
        let exp_at = |len: usize| -> i64 {
            big.letters()[..len]
                .iter()
                .filter(|x| x.gen == 0)
                .map(|x| x.sign.as_i64())
                .sum()
        };
        for q in 1..=3125usize {
            if exp_at(5 * q) != 3 * exp_at(q) {
                return stage_fail("fixed-word", format!("quintuple identity fails at {q}"), out);
            }
        }
        log.pass(
            "fixed-word",
            "recorded prefix, iterate prefixes, no zero exponent to 15625, quintuple identity".into(),
            out,
        )?;
    }

    if json {
        emit(
            out,
            envelope(
                json!({ "command": "paper", "l": l }),
                json!({
                    "stages": log.lines.iter().map(|(s, d)| json!({ "stage": s, "detail": d })).collect::<Vec<_>>(),
                    "pass": true,
                }),
            ),
        )?;
    } else {
        emit(out, format!("all {} stages passed", log.lines.len()))?;
    }
    Ok(EXIT_PASS)
}
