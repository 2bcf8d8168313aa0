use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mdl_bench::{instance, run, write_csv, Fragment};
use mdl_core::fragments::{
    check_flat, check_funcenum, check_topdown, classify, dispatch_check, Classification,
};
use mdl_core::kripke::{load_structure, save_structure, team_from_names};
use mdl_core::semantics::{
    self, oracle_check_bounded, verify_certificate, Certificate, DEFAULT_ORACLE_MAX_WORLDS,
};
use mdl_core::{parse, sat_oracle, CnfFormula, Construction, Formula, KripkeStructure, Team};

/// Model checking for modal dependence logic under team semantics.
///
/// Exit status: 0 when the formula holds (or the check succeeds), 1 when it
/// fails, 2 on usage, input or fragment errors.
#[derive(Parser)]
#[command(name = "mdl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a team of a structure satisfies a formula.
    Check(CheckArgs),
    /// Place a formula in the complexity tables.
    Classify(ClassifyArgs),
    /// Turn a DIMACS CNF into a model checking instance.
    Reduce(ReduceArgs),
    /// Replay a certificate written by `check`.
    Verify(VerifyArgs),
    /// Decide a DIMACS CNF by exhaustive search.
    Sat(SatArgs),
    /// Time the dispatcher on seeded random instances, printing CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct FormulaInput {
    /// Formula text.
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
}

impl FormulaInput {
    fn load(&self) -> Result<Formula> {
        let text = match (&self.formula, &self.formula_file) {
            (Some(inline), Some(path)) => {
                eprintln!(
                    "warning: both an inline formula and --formula-file {} given; using the inline one",
                    path.display()
                );
                inline.clone()
            }
            (Some(inline), None) => inline.clone(),
            (None, Some(path)) => read_text(path)?,
            (None, None) => bail!("no formula given; pass it inline or with --formula-file"),
        };
        parse(text.trim()).map_err(|e| anyhow::anyhow!("formula: {e}"))
    }
}

#[derive(Args)]
struct StructureInput {
    /// Structure JSON with worlds, relation, labels and an optional team.
    structure: PathBuf,
    /// Comma-separated world names overriding the team in the file; an
    /// empty string selects the empty team.
    #[arg(long, value_name = "WORLDS")]
    team: Option<String>,
}

impl StructureInput {
    fn load(&self) -> Result<(KripkeStructure, Team)> {
        let bytes = fs::read(&self.structure)
            .with_context(|| format!("cannot read {}", self.structure.display()))?;
        let (w, team) =
            load_structure(&bytes).with_context(|| format!("in {}", self.structure.display()))?;
        let team = match &self.team {
            Some(names) => {
                let names: Vec<&str> = names.split(',').filter(|n| !n.is_empty()).collect();
                team_from_names(&w, &names)?
            }
            None => team,
        };
        Ok((w, team))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Solver {
    /// Classify and run the fastest applicable algorithm.
    Auto,
    Backtrack,
    /// Brute force over all teams; refuses structures above MDL_ORACLE_MAX_WORLDS.
    Oracle,
    Topdown,
    Funcenum,
    Flat,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    structure: StructureInput,
    #[command(flatten)]
    formula: FormulaInput,
    #[arg(long, value_enum, default_value = "auto")]
    algorithm: Solver,
    /// Write the witness of a positive verdict here as JSON.
    #[arg(long, value_name = "PATH")]
    certificate: Option<PathBuf>,
    /// Arity bound `k` for classification and function enumeration.
    #[arg(long, value_name = "K")]
    arity_bound: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    formula: FormulaInput,
    #[arg(long, value_name = "K")]
    arity_bound: Option<usize>,
    /// Structure size, which can make the open split row trivially decidable.
    #[arg(long, value_name = "N")]
    worlds: Option<usize>,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF file.
    cnf: PathBuf,
    #[arg(long, value_parser = parse_construction)]
    construction: Construction,
    /// Receives structure.json and formula.mdl.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    structure: StructureInput,
    /// Certificate JSON.
    certificate: PathBuf,
    #[command(flatten)]
    formula: FormulaInput,
}

#[derive(Args)]
struct SatArgs {
    cnf: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Structure sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16])]
    sizes: Vec<usize>,
    #[arg(long, value_parser = parse_fragment, default_value = "full")]
    fragment: Fragment,
    #[arg(long, default_value_t = 8)]
    formula_size: usize,
    /// Instances per size; instance `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 5)]
    count: u64,
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    s.parse()
}

fn parse_fragment(s: &str) -> Result<Fragment, String> {
    s.parse()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn oracle_bound() -> Result<usize> {
    match std::env::var("MDL_ORACLE_MAX_WORLDS") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("MDL_ORACLE_MAX_WORLDS must be a number, got {v:?}")),
        Err(_) => Ok(DEFAULT_ORACLE_MAX_WORLDS),
    }
}

/// What a check run reports.
struct RunReport {
    holds: bool,
    algorithm: String,
    classification: Classification,
    micros: u128,
    nodes: Option<u128>,
    certificate: Option<PathBuf>,
}

impl RunReport {
    fn print(&self, out: &mut impl io::Write) -> io::Result<()> {
        let c = &self.classification;
        writeln!(
            out,
            "verdict: {}",
            if self.holds { "holds" } else { "fails" }
        )?;
        writeln!(out, "algorithm: {}", self.algorithm)?;
        writeln!(
            out,
            "classification: {} {} ({})",
            c.key,
            c.status,
            c.description()
        )?;
        match self.nodes {
            Some(n) => writeln!(out, "nodes: {n}")?,
            None => writeln!(out, "nodes: -")?,
        }
        writeln!(out, "time_us: {}", self.micros)?;
        if let Some(p) = &self.certificate {
            writeln!(out, "certificate: {}", p.display())?;
        }
        Ok(())
    }
}

fn verdict_code(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let (w, t) = args.structure.load()?;
    let phi = args.formula.load()?;
    let classification = classify(&phi, args.arity_bound, Some(w.num_worlds()));
    let start = Instant::now();
    let mut certificate: Option<Certificate> = None;
    let (holds, algorithm, nodes) = match args.algorithm {
        Solver::Auto => {
            let out = dispatch_check(&w, &t, &phi, args.arity_bound)?;
            certificate = out.certificate;
            (out.holds, out.used.to_string(), out.work)
        }
        Solver::Backtrack => {
            let out = semantics::check(&w, &t, &phi);
            certificate = out.certificate;
            (
                out.holds,
                "backtrack".into(),
                Some(out.nodes_explored as u128),
            )
        }
        Solver::Oracle => (
            oracle_check_bounded(&w, &t, &phi, oracle_bound()?)?,
            "oracle".into(),
            None,
        ),
        Solver::Topdown => (check_topdown(&w, &t, &phi)?, "topdown".into(), None),
        Solver::Flat => (check_flat(&w, &t, &phi)?, "flat-pointwise".into(), None),
        Solver::Funcenum => {
            let k = args
                .arity_bound
                .or(classification.profile.max_arity)
                .unwrap_or(0);
            let out = check_funcenum(&w, &t, &phi, k)?;
            (out.holds, "funcenum".into(), Some(out.tuples))
        }
    };
    let micros = start.elapsed().as_micros();

    let mut written = None;
    if let Some(path) = &args.certificate {
        if holds {
            let cert = match certificate {
                Some(c) => c,
                None => semantics::check(&w, &t, &phi)
                    .certificate
                    .context("the backtracking checker disagrees with the selected algorithm")?,
            };
            fs::write(path, cert.to_json(&w))
                .with_context(|| format!("cannot write {}", path.display()))?;
            written = Some(path.clone());
        } else {
            eprintln!("note: no certificate written, the formula fails");
        }
    }
    RunReport {
        holds,
        algorithm,
        classification,
        micros,
        nodes,
        certificate: written,
    }
    .print(&mut io::stdout().lock())?;
    Ok(verdict_code(holds))
}

fn cmd_classify(args: &ClassifyArgs) -> Result<ExitCode> {
    let phi = args.formula.load()?;
    let c = classify(&phi, args.arity_bound, args.worlds);
    println!("{c}");
    Ok(ExitCode::SUCCESS)
}

fn load_cnf(path: &Path) -> Result<CnfFormula> {
    CnfFormula::parse_dimacs(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

fn cmd_reduce(args: &ReduceArgs) -> Result<ExitCode> {
    let cnf = load_cnf(&args.cnf)?;
    let r = args.construction.reduce(&cnf)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let structure = args.out_dir.join("structure.json");
    let formula = args.out_dir.join("formula.mdl");
    fs::write(&structure, save_structure(&r.structure, &r.team))?;
    fs::write(&formula, format!("{}\n", r.formula))?;
    println!("{}", structure.display());
    println!("{}", formula.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (w, t) = args.structure.load()?;
    let phi = args.formula.load()?;
    let text = read_text(&args.certificate)?;
    let cert = Certificate::from_json(&text, &w)?;
    match verify_certificate(&w, &t, &phi, &cert) {
        Ok(true) => {
            println!("certificate valid");
            Ok(ExitCode::SUCCESS)
        }
        Ok(false) => {
            println!("certificate rejected");
            Ok(ExitCode::from(1))
        }
        // a certificate for a different formula is an input error
        Err(e) => Err(e.into()),
    }
}

fn cmd_sat(args: &SatArgs) -> Result<ExitCode> {
    let cnf = load_cnf(&args.cnf)?;
    match sat_oracle(&cnf)? {
        Some(a) => {
            let lits: Vec<String> = (1..=cnf.num_vars())
                .map(|j| {
                    if a.value(j) {
                        j.to_string()
                    } else {
                        format!("-{j}")
                    }
                })
                .collect();
            println!("SAT");
            println!("v {} 0", lits.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("UNSAT");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let mut reports = Vec::new();
    for &n in &args.sizes {
        if n == 0 {
            bail!("structure sizes must be positive");
        }
        for i in 0..args.count {
            let inst = instance(args.fragment, args.seed + i, n, args.formula_size);
            reports.push(run(args.fragment, &inst)?);
        }
    }
    write_csv(io::stdout().lock(), &reports)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sat(a) => cmd_sat(a),
        Command::Bench(a) => cmd_bench(a),
    };
    let _ = io::stdout().flush();
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
