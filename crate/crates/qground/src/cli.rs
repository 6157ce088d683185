//! Command-line front end. Every subcommand writes its result to `out` and
//! a one-line banner with the effective configuration to `err`.
//!
//! Exit codes: 0 for success and valid or true verdicts, 1 for invalid or
//! false verdicts, 2 for usage and input errors.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axioms::{group0, group1, group2_instance, group3, shortcut_pack, AxiomSpec};
use crate::classes::classify_detailed;
use crate::codec::{decode, encode_formula, encode_proof, encode_term, from_g64, to_decimal, to_g64, Decoded, G64_MAGIC};
use crate::encoders::{build_dag_term, build_tree_term, greedy_plan, measure_dag, measure_tree, measure_zeta};
use crate::kernel::{certify_delta0, check_proof, check_proof_bytes, CertifyError, Proof, Verdict};
use crate::par::{self, Strategy};
use crate::probe::{
    exhaustive_proof_search, find_breaking_point, probe_conjecture, probe_tsv, SearchLimits,
};
use crate::semantics::{ModelSpec, Semantics, ThetaInterpretation, ThetaMode};
use crate::syntax::{c0, c1, parse_formula, parse_term, Formula, Term};
use crate::Nat;

#[derive(Parser, Debug)]
#[command(name = "qground", version, about = "Q-Grounding terms, Goedel codes, proofs and probes")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand; the banner echoes all of them.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for sampled walk interpretations (required by probe commands).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of sampled interpretations where sampling applies.
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    /// Treatment of walk images outside a finite domain.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Partial)]
    pub theta_mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl RunConfig {
    fn strategy(&self) -> Strategy {
        if self.sequential {
            Strategy::Sequential
        } else {
            Strategy::default()
        }
    }

    fn mode(&self) -> ThetaMode {
        match self.theta_mode {
            ModeArg::Partial => ThetaMode::PartialBlocks,
            ModeArg::Clipped => ThetaMode::TotalClipped,
        }
    }

    fn need_seed(&self, cmd: &str) -> anyhow::Result<u64> {
        self.seed.ok_or_else(|| anyhow!("{cmd} needs --seed"))
    }

    fn banner(&self, cmd: &str) -> String {
        format!(
            "qground {cmd}: seed={} samples={} theta-mode={:?} format={:?} strategy={:?} fragment=theta-free max-value=2 max-bound=2",
            self.seed.map_or("none".to_string(), |s| s.to_string()),
            self.samples,
            self.theta_mode,
            self.format,
            self.strategy(),
        )
        .to_lowercase()
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Partial,
    Clipped,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Tsv,
    G64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical term for a natural number.
    EncodeTerm {
        n: String,
        /// Emit the shared-node term instead of the tree term.
        #[arg(long)]
        dag: bool,
    },
    /// Byte codes of terms, formulas and proofs.
    Godel {
        #[command(subcommand)]
        op: GodelOp,
    },
    /// Delta0 / Sigma_n / Pi_n class of a formula.
    Classify { formula: String },
    /// Proof of a true theta-free Delta0 sentence.
    Certify {
        formula: String,
        /// Write the proof here (.g64) with a `.just` sidecar next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a proof file against an axiom spec.
    CheckProof {
        proof: PathBuf,
        /// Axiom spec file; group 0 and S* when absent.
        #[arg(long)]
        axioms: Option<PathBuf>,
        /// Justification sidecar; inferred from the bytes when absent.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Emit an axiom group.
    GenAxioms {
        #[arg(long)]
        group: String,
        /// Pi1 sentence for group 2.
        #[arg(long)]
        phi: Option<String>,
        /// Size of the shortcut pack for group R.
        #[arg(long, default_value_t = 8)]
        max_j: usize,
    },
    /// Least counterexample of a universal sentence.
    BreakingPoint {
        formula: String,
        #[arg(long, default_value_t = 1024)]
        bound: u64,
        /// Evaluate in the finite model [0, 2^bits) instead of the standard one.
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Canonical contradiction proofs against the length inequality.
    ProbeConjecture {
        #[arg(long = "K", value_delimiter = ',', required = true)]
        ks: Vec<u64>,
        /// Also search exhaustively for a proof of C0 = C1 from group 0 and S*.
        #[arg(long)]
        exhaustive_maxbytes: Option<usize>,
    },
    /// Sizes of the canonical numerals over a geometric grid.
    MeasureLengths {
        #[arg(long, default_value_t = 8)]
        from: u64,
        #[arg(long, default_value_t = 1 << 20)]
        to: u64,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum GodelOp {
    /// Text (term, formula, or proof steps one per line) to codes.
    Encode {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// .g64 or decimal codes to text.
    Decode {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Done {
    Ok,
    Negative,
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> anyhow::Result<Vec<u8>> {
    match path {
        Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

/// A formula given inline or as `@path`.
fn formula_arg(s: &str) -> anyhow::Result<Formula> {
    let text = match s.strip_prefix('@') {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {p}"))?,
        None => s.to_string(),
    };
    parse_formula(text.trim()).map_err(|e| anyhow!("{e}"))
}

fn content_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn plan_text(n: &Nat) -> String {
    let (top, subs) = greedy_plan(n);
    std::iter::once(format!("E{top}"))
        .chain(subs.iter().map(|k| format!("E{k}")))
        .collect::<Vec<_>>()
        .join(" - ")
}

fn encode_term_cmd(cfg: &RunConfig, n: &str, dag: bool, out: &mut dyn Write) -> anyhow::Result<Done> {
    let value = n
        .parse::<num_bigint::BigUint>()
        .map(Nat::from_big)
        .map_err(|_| anyhow!("not a natural number: {n}"))?;
    let term = if dag {
        Term::Dag(std::sync::Arc::new(build_dag_term(&value)))
    } else {
        let v = value.to_u64().ok_or_else(|| anyhow!("tree terms need n < 2^64"))?;
        build_tree_term(v)
    };
    match cfg.format {
        Format::Text => {
            if value.to_u64().is_some_and(|v| v > 2) {
                writeln!(out, "# {value} = {}", plan_text(&value))?;
            }
            writeln!(out, "{term}")?;
        }
        Format::Tsv => {
            let codes = encode_term(&term);
            writeln!(out, "n\tsymbols\tbytes")?;
            writeln!(out, "{value}\t{}\t{}", term.symbol_count(), codes.len())?;
        }
        Format::G64 => out.write_all(&to_g64(&encode_term(&term))?)?,
    }
    Ok(Done::Ok)
}

fn godel_cmd(cfg: &RunConfig, op: &GodelOp, stdin: &mut dyn Read, out: &mut dyn Write) -> anyhow::Result<Done> {
    match op {
        GodelOp::Encode { input } => {
            let raw = read_input(input.as_deref(), stdin)?;
            let text = String::from_utf8(raw).context("input is not UTF-8")?;
            let lines = content_lines(&text);
            let codes = match lines.as_slice() {
                [] => bail!("empty input"),
                [one] => match parse_formula(one) {
                    Ok(f) => encode_formula(&f),
                    Err(fe) => match parse_term(one) {
                        Ok(t) => encode_term(&t),
                        Err(_) => bail!("{fe}"),
                    },
                },
                many => {
                    let steps = many
                        .iter()
                        .map(|l| parse_formula(l).map_err(|e| anyhow!("{e}")))
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    encode_proof(&steps)
                }
            };
            match cfg.format {
                Format::G64 => out.write_all(&to_g64(&codes)?)?,
                Format::Text | Format::Tsv => writeln!(out, "{}", to_decimal(&codes))?,
            }
        }
        GodelOp::Decode { input } => {
            let raw = read_input(input.as_deref(), stdin)?;
            let codes = if raw.starts_with(G64_MAGIC) {
                from_g64(&raw)?
            } else {
                String::from_utf8(raw)
                    .context("input is neither .g64 nor decimal codes")?
                    .split_whitespace()
                    .map(|w| w.parse::<u8>().map_err(|_| anyhow!("bad code `{w}`")))
                    .collect::<anyhow::Result<Vec<_>>>()?
            };
            match decode(&codes).map_err(|e| anyhow!("{e}"))? {
                Decoded::Term(t) => writeln!(out, "{t}")?,
                Decoded::Formula(f) => writeln!(out, "{f}")?,
                Decoded::Proof(steps) => {
                    for s in steps {
                        writeln!(out, "{s}")?;
                    }
                }
            }
        }
    }
    Ok(Done::Ok)
}

fn write_proof(p: &Proof, path: &Path) -> anyhow::Result<()> {
    fs::write(path, to_g64(&p.to_bytes())?).with_context(|| format!("writing {}", path.display()))?;
    let side = path.with_extension("just");
    fs::write(&side, p.sidecar()).with_context(|| format!("writing {}", side.display()))?;
    Ok(())
}

fn certify_cmd(formula: &str, dest: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<Done> {
    let phi = formula_arg(formula)?;
    let p = match certify_delta0(&phi) {
        Ok(p) => p,
        Err(CertifyError::False) => {
            writeln!(out, "false\t{phi}")?;
            return Ok(Done::Negative);
        }
        Err(e) => bail!("{e}"),
    };
    match dest {
        Some(path) => {
            write_proof(&p, path)?;
            writeln!(out, "valid\t{}\t{} steps\t{} bytes", path.display(), p.len(), p.to_bytes().len())?;
        }
        None => {
            for (k, s) in p.steps.iter().enumerate() {
                writeln!(out, "{k}\t{}\t{}", s.justification, s.formula)?;
            }
        }
    }
    Ok(Done::Ok)
}

fn check_cmd(proof: &Path, axioms: Option<&Path>, sidecar: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<Done> {
    let spec = match axioms {
        Some(p) => AxiomSpec::parse(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => AxiomSpec::base(),
    };
    let alpha = spec.build();
    let raw = fs::read(proof).with_context(|| format!("reading {}", proof.display()))?;
    let bytes = if raw.starts_with(G64_MAGIC) { from_g64(&raw)? } else { raw };
    let verdict = match sidecar {
        Some(s) => {
            let text = fs::read_to_string(s).with_context(|| format!("reading {}", s.display()))?;
            check_proof(&Proof::from_parts(&bytes, &text)?, alpha.as_ref())
        }
        None => check_proof_bytes(&bytes, alpha.as_ref()).0,
    };
    Ok(match verdict {
        Verdict::Valid(thm) => {
            writeln!(out, "valid\t{thm}")?;
            Done::Ok
        }
        Verdict::Invalid { step, reason } => {
            writeln!(out, "invalid\tstep {step}\t{reason}")?;
            Done::Negative
        }
    })
}

fn gen_axioms_cmd(cfg: &RunConfig, group: &str, phi: Option<&str>, max_j: usize, out: &mut dyn Write) -> anyhow::Result<Done> {
    let named: Vec<(String, Formula)> = match group {
        "0" => group0().into_iter().map(|(n, f)| (n.to_string(), f)).collect(),
        "1" => group1().iter().map(|(n, f)| (n.to_string(), f.clone())).collect(),
        "2" => {
            let phi = formula_arg(phi.ok_or_else(|| anyhow!("group 2 needs --phi"))?)?;
            vec![("reflection".to_string(), group2_instance(&phi)?)]
        }
        "3" => vec![("diagonal".to_string(), group3())],
        "R" | "r" => {
            if max_j == 0 {
                bail!("--max-j must be at least 1");
            }
            shortcut_pack(max_j)
                .into_iter()
                .enumerate()
                .map(|(i, f)| (format!("shortcut{}", i + 1), f))
                .collect()
        }
        other => bail!("unknown group `{other}` (expected 0, 1, 2, 3 or R)"),
    };
    match cfg.format {
        Format::G64 => {
            let codes = encode_proof(named.iter().map(|(_, f)| f));
            out.write_all(&to_g64(&codes)?)?;
        }
        Format::Tsv => {
            for (n, f) in &named {
                writeln!(out, "{n}\t{f}")?;
            }
        }
        Format::Text => {
            for (n, f) in &named {
                writeln!(out, "# {n}\naxiom {f}")?;
            }
        }
    }
    Ok(Done::Ok)
}

fn breaking_point_cmd(cfg: &RunConfig, formula: &str, bound: u64, bits: Option<u32>, out: &mut dyn Write) -> anyhow::Result<Done> {
    let seed = cfg.need_seed("breaking-point")?;
    let phi = formula_arg(formula)?;
    let sigma = ThetaInterpretation::sample(seed, bits.map_or(64, u64::from).max(8));
    let sem = match bits {
        Some(b) => Semantics::finite(&sigma, ModelSpec { bits: b, mode: cfg.mode() }),
        None => Semantics::standard(&sigma),
    }
    .with_strategy(cfg.strategy());
    match find_breaking_point(&phi, bound, &sem)? {
        Some(bp) => {
            writeln!(out, "K\tboundChecked\ttrace")?;
            writeln!(out, "{}\t{}\t{}", bp.k, bp.bound_checked, bp.witness_false)?;
        }
        None => writeln!(out, "none\t{bound}")?,
    }
    Ok(Done::Ok)
}

fn probe_cmd(cfg: &RunConfig, ks: &[u64], exhaustive: Option<usize>, out: &mut dyn Write) -> anyhow::Result<Done> {
    let seed = cfg.need_seed("probe-conjecture")?;
    let rows = probe_conjecture(ks, cfg.strategy());
    write!(out, "# seed {seed}\n{}", probe_tsv(&rows))?;
    let mut all = rows.iter().all(|(_, r)| r.as_ref().is_ok_and(|r| r.holds()));
    if let Some(max) = exhaustive {
        let gamma = crate::kernel::AxiomSet::new("base", AxiomSpec::base().sentences());
        let target = Formula::eq(c0(), c1());
        match exhaustive_proof_search(&gamma, &target, max, SearchLimits::default()) {
            Ok((None, stats)) => writeln!(
                out,
                "# exhaustive: no proof of {target} within {max} bytes ({} expansions)",
                stats.expansions
            )?,
            Ok((Some(p), _)) => {
                all = false;
                writeln!(out, "# exhaustive: found a {}-byte proof of {target}", p.to_bytes().len())?;
            }
            Err(e) => {
                all = false;
                writeln!(out, "# exhaustive: {e}")?;
            }
        }
    }
    Ok(if all { Done::Ok } else { Done::Negative })
}

/// `points` values spread geometrically over `[from, to]`, deduplicated.
pub fn geometric_grid(from: u64, to: u64, points: usize) -> Vec<u64> {
    if points <= 1 || from >= to {
        return vec![from];
    }
    let (a, b) = ((from as f64).ln(), (to as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .collect();
    out.dedup();
    out
}

fn measure_cmd(cfg: &RunConfig, from: u64, to: u64, points: usize, out: &mut dyn Write) -> anyhow::Result<Done> {
    if from == 0 || to < from {
        bail!("need 0 < from <= to");
    }
    let grid = geometric_grid(from, to, points);
    let rows = par::map(cfg.strategy(), &grid, |&n| {
        let t = measure_tree(n);
        let d = measure_dag(n);
        let z = (n <= 512).then(|| measure_zeta(n).symbol_count);
        (n, t, d, z)
    });
    writeln!(out, "n\ttreeSymbols\ttreeBytes\tdagNodes\tdagBytes\tzetaSymbols")?;
    for (n, t, d, z) in rows {
        let z = z.map_or("-".to_string(), |z| z.to_string());
        writeln!(
            out,
            "{n}\t{}\t{}\t{}\t{}\t{z}",
            t.symbol_count, t.byte_count, d.node_count, d.byte_count
        )?;
    }
    Ok(Done::Ok)
}

fn classify_cmd(formula: &str, out: &mut dyn Write) -> anyhow::Result<Done> {
    let phi = formula_arg(formula)?;
    let v = classify_detailed(&phi);
    match v.stray_theta {
        Some(at) => writeln!(out, "{}\ttheta outside a power term: {at}", v.class)?,
        None => writeln!(out, "{}", v.class)?,
    }
    Ok(Done::Ok)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::EncodeTerm { .. } => "encode-term",
        Command::Godel { .. } => "godel",
        Command::Classify { .. } => "classify",
        Command::Certify { .. } => "certify",
        Command::CheckProof { .. } => "check-proof",
        Command::GenAxioms { .. } => "gen-axioms",
        Command::BreakingPoint { .. } => "breaking-point",
        Command::ProbeConjecture { .. } => "probe-conjecture",
        Command::MeasureLengths { .. } => "measure-lengths",
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> anyhow::Result<Done> {
    let cfg = &cli.config;
    match &cli.command {
        Command::EncodeTerm { n, dag } => encode_term_cmd(cfg, n, *dag, out),
        Command::Godel { op } => godel_cmd(cfg, op, stdin, out),
        Command::Classify { formula } => classify_cmd(formula, out),
        Command::Certify { formula, out: dest } => certify_cmd(formula, dest.as_deref(), out),
        Command::CheckProof { proof, axioms, sidecar } => check_cmd(proof, axioms.as_deref(), sidecar.as_deref(), out),
        Command::GenAxioms { group, phi, max_j } => gen_axioms_cmd(cfg, group, phi.as_deref(), *max_j, out),
        Command::BreakingPoint { formula, bound, bits } => breaking_point_cmd(cfg, formula, *bound, *bits, out),
        Command::ProbeConjecture { ks, exhaustive_maxbytes } => probe_cmd(cfg, ks, *exhaustive_maxbytes, out),
        Command::MeasureLengths { from, to, points } => measure_cmd(cfg, *from, *to, *points, out),
    }
}

/// Parse `argv` and run; returns the process exit code.
pub fn dispatch<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let _ = writeln!(err, "{}", cli.config.banner(command_name(&cli.command)));
    match execute(&cli, stdin, out) {
        Ok(Done::Ok) => 0,
        Ok(Done::Negative) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
