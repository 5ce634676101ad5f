//! `teamtl`: team path checking, team model checking, reduction generators
//! and a differential self-test.
//!
//! Exit codes: 0 SAT, 1 UNSAT, 2 input error, 3 resource cap, 4 self-test
//! or cross-check failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use teamtl::format::{
    kripke_to_json, multiteam_to_string, parse_kripke_json, parse_multiteam, parse_team_json,
    team_to_json,
};
use teamtl::formula::AtomRegistry;
use teamtl::kripke::KripkeError;
use teamtl::oracle::{naive_oracle, pl_team_satisfiable};
use teamtl::qbf::{
    eval_qbf, normalize_qbf, reduce_plsim_to_tpc, reduce_to_tmc_ctl, reduce_to_tpc, PrenexQbf,
    QbfError,
};
use teamtl::selftest::{run_selftest, Mutant, SelftestConfig};
use teamtl::splitfree::{check_model_splitfree_capped, SplitfreeError, DEFAULT_MAX_STATES};
use teamtl::team_ctl::{CtlChecker, CtlConfig, CtlError};
use teamtl::team_ltl::{TeamChecker, TeamLtlConfig, TeamLtlError};
use teamtl::{parse_ctl, parse_ltl};

#[derive(Parser, Debug)]
#[command(
    name = "teamtl",
    version,
    about = "Synchronous team semantics for LTL and CTL"
)]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Limits {
    /// Largest team for cover enumeration (LTL) or team size (CTL).
    #[arg(long, global = true, env = "TEAMTL_MAX_TEAM")]
    max_team: Option<usize>,
    /// Largest number of splits tried for one splitjunction.
    #[arg(long, global = true, env = "TEAMTL_MAX_SUBSETS")]
    max_subsets: Option<u64>,
    /// Largest structure accepted by the CTL checker.
    #[arg(long, global = true, env = "TEAMTL_MAX_WORLDS")]
    max_worlds: Option<usize>,
    /// Seed for randomised commands.
    #[arg(long, global = true, env = "TEAMTL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FormulaArg {
    /// Formula text.
    #[arg(required_unless_present = "formula_file")]
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long, conflicts_with = "formula")]
    formula_file: Option<PathBuf>,
}

impl FormulaArg {
    fn text(&self) -> anyhow::Result<String> {
        match (&self.formula, &self.formula_file) {
            (Some(f), _) => Ok(f.clone()),
            (None, Some(p)) => read(p),
            (None, None) => bail!("no formula given"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does a team of lasso traces satisfy an LTL formula?
    CheckPath {
        /// Team file (JSON).
        team: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// Print the witness tree of a satisfied formula.
        #[arg(long)]
        explain: bool,
        /// Cross-check with the brute-force reference evaluator.
        #[arg(long)]
        oracle: bool,
    },
    /// Team model checking on a Kripke structure.
    CheckModel {
        /// Kripke structure file (JSON).
        kripke: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Multiteam for `ctl` mode: world names, repetition is multiplicity.
        #[arg(long)]
        team: Option<String>,
        /// Read until and release with the invariant starting at step one.
        #[arg(long)]
        until_from_one: bool,
        /// Also write the structure in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate reduction instances.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// QBF file for `qbf-*`, propositional formula for `plsim`.
        input: String,
        /// Directory for the generated files; printed to stdout otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Evaluate the generated instance and compare with brute force.
        #[arg(long)]
        check: bool,
    },
    /// Differential self-test of all checkers against reference evaluators.
    Selftest {
        /// Number of random instances.
        #[arg(long, default_value_t = 400)]
        count: u64,
        #[arg(long, hide = true)]
        inject_mutant: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    LtlSplitfree,
    LtlEnumerate,
    Ctl,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    QbfTpc,
    QbfCtl,
    Plsim,
}

enum Failure {
    Input(anyhow::Error),
    Resource(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<TeamLtlError> for Failure {
    fn from(e: TeamLtlError) -> Self {
        if e.is_resource_cap() {
            Failure::Resource(e.into())
        } else {
            Failure::Input(e.into())
        }
    }
}

impl From<CtlError> for Failure {
    fn from(e: CtlError) -> Self {
        if e.is_resource_cap() {
            Failure::Resource(e.into())
        } else {
            Failure::Input(e.into())
        }
    }
}

impl From<SplitfreeError> for Failure {
    fn from(e: SplitfreeError) -> Self {
        match e {
            SplitfreeError::ResourceCap(_) => Failure::Resource(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<QbfError> for Failure {
    fn from(e: QbfError) -> Self {
        match e {
            QbfError::TooLarge(_) => Failure::Resource(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<KripkeError> for Failure {
    fn from(e: KripkeError) -> Self {
        match e {
            KripkeError::TooManyTraces(_) => Failure::Resource(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

fn read(p: &Path) -> anyhow::Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn verdict(v: bool) -> u8 {
    println!("{}", if v { "SAT" } else { "UNSAT" });
    if v {
        0
    } else {
        1
    }
}

fn ltl_config(l: &Limits) -> TeamLtlConfig {
    let d = TeamLtlConfig::default();
    TeamLtlConfig {
        max_team: l.max_team.unwrap_or(d.max_team),
        max_subsets: l.max_subsets.unwrap_or(d.max_subsets),
        ..d
    }
}

fn ctl_config(l: &Limits, until_from_one: bool) -> CtlConfig {
    let d = CtlConfig::default();
    CtlConfig {
        max_team: l.max_team.unwrap_or(d.max_team),
        max_worlds: l.max_worlds.unwrap_or(d.max_worlds),
        until_from_one,
        ..d
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let reg = AtomRegistry::new();
    match cli.command {
        Command::CheckPath {
            team,
            formula,
            explain,
            oracle,
        } => {
            let team = parse_team_json(&read(&team)?).context("invalid team file")?;
            let f = parse_ltl(&formula.text()?).context("invalid formula")?;
            let mut checker = TeamChecker::new(&team, &reg, ltl_config(&cli.limits))?;
            let (v, witness) = if explain {
                checker.explain(&f)?
            } else {
                (checker.check(&f)?, None)
            };
            let code = verdict(v);
            if let Some(w) = witness {
                print!("{w}");
            }
            if oracle {
                match naive_oracle(&team, &f, &reg) {
                    Ok(o) => {
                        println!("oracle: {}", if o { "SAT" } else { "UNSAT" });
                        if o != v {
                            return Err(Failure::Check("checker and oracle disagree".into()));
                        }
                    }
                    Err(e) => println!("oracle: skipped ({e})"),
                }
            }
            Ok(code)
        }
        Command::CheckModel {
            kripke,
            formula,
            mode,
            team,
            until_from_one,
            dot,
        } => {
            let k = parse_kripke_json(&read(&kripke)?).context("invalid Kripke file")?;
            if let Some(path) = dot {
                fs::write(&path, k.to_dot())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let text = formula.text()?;
            match mode {
                Mode::LtlSplitfree => {
                    let f = parse_ltl(&text).context("invalid formula")?;
                    Ok(verdict(check_model_splitfree_capped(
                        &k,
                        &f,
                        DEFAULT_MAX_STATES,
                    )?))
                }
                Mode::LtlEnumerate => {
                    let f = parse_ltl(&text).context("invalid formula")?;
                    let traces = k.enumerate_traces_capped(1 << 16)?;
                    let mut checker = TeamChecker::new(&traces, &reg, ltl_config(&cli.limits))?;
                    Ok(verdict(checker.check(&f)?))
                }
                Mode::Ctl => {
                    let f = parse_ctl(&text).context("invalid formula")?;
                    let team = team.ok_or_else(|| anyhow!("--mode ctl needs --team"))?;
                    let t = parse_multiteam(&k, &team).context("invalid --team")?;
                    let mut checker =
                        CtlChecker::new(&k, &reg, ctl_config(&cli.limits, until_from_one));
                    Ok(verdict(checker.check(&t, &f)?))
                }
            }
        }
        Command::Gen {
            kind,
            input,
            out_dir,
            check,
        } => gen(kind, &input, out_dir.as_deref(), check, &cli.limits),
        Command::Selftest {
            count,
            inject_mutant,
        } => {
            let report = run_selftest(&SelftestConfig {
                seed: cli.limits.seed,
                count,
                mutant: inject_mutant.then_some(Mutant::SplitAsBoolOr),
            });
            println!("{report}");
            if report.ok() {
                Ok(0)
            } else {
                Err(Failure::Check(format!(
                    "reproduce with --seed {} --count {count}",
                    cli.limits.seed
                )))
            }
        }
    }
}

fn emit(out_dir: Option<&Path>, files: &[(&str, String)]) -> anyhow::Result<()> {
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                println!("wrote {}", path.display());
            }
        }
        None => {
            for (name, body) in files {
                println!("== {name}");
                print!("{body}");
            }
        }
    }
    Ok(())
}

fn reduction_result(got: bool, expected: bool, labels: (&str, &str)) -> Result<u8, Failure> {
    let label = if expected { labels.0 } else { labels.1 };
    if got == expected {
        println!("REDUCTION OK ({label})");
        Ok(0)
    } else {
        println!("REDUCTION MISMATCH (input {label}, reduction says {got})");
        Err(Failure::Check(
            "reduction disagrees with brute force".into(),
        ))
    }
}

fn gen(
    kind: GenKind,
    input: &str,
    out_dir: Option<&Path>,
    check: bool,
    limits: &Limits,
) -> Result<u8, Failure> {
    let reg = AtomRegistry::new();
    if kind == GenKind::Plsim {
        let psi = parse_ltl(input).context("invalid propositional formula")?;
        let (team, f) = reduce_plsim_to_tpc(&psi)?;
        emit(
            out_dir,
            &[
                ("team.json", team_to_json(&team)),
                ("formula.ltl", format!("{f}\n")),
            ],
        )?;
        if check {
            let expected = pl_team_satisfiable(&psi).map_err(|e| Failure::Resource(e.into()))?;
            let got = TeamChecker::new(&team, &reg, ltl_config(limits))?.check(&f)?;
            return reduction_result(got, expected, ("satisfiable", "unsatisfiable"));
        }
        return Ok(0);
    }

    let prenex = PrenexQbf::parse(&read(Path::new(input))?)?;
    let (q, report) = normalize_qbf(&prenex)?;
    if !report.padded_clauses.is_empty() {
        eprintln!(
            "note: padded clause(s) {:?} to three literals",
            report.padded_clauses
        );
    }
    if !report.dummies.is_empty() {
        eprintln!(
            "note: inserted dummy variable(s) {} for strict alternation",
            report.dummies.join(", ")
        );
    }
    let got = match kind {
        GenKind::QbfTpc => {
            let (team, f) = reduce_to_tpc(&q);
            emit(
                out_dir,
                &[
                    ("team.json", team_to_json(&team)),
                    ("formula.ltl", format!("{f}\n")),
                ],
            )?;
            if !check {
                return Ok(0);
            }
            let config = TeamLtlConfig {
                max_team: limits.max_team.unwrap_or(usize::MAX),
                ..ltl_config(limits)
            };
            TeamChecker::new(&team, &reg, config)?.check(&f)?
        }
        _ => {
            let (k, t, f) = reduce_to_tmc_ctl(&q)?;
            emit(
                out_dir,
                &[
                    ("kripke.json", kripke_to_json(&k)),
                    ("team.txt", multiteam_to_string(&k, &t) + "\n"),
                    ("formula.ctl", format!("{f}\n")),
                ],
            )?;
            if !check {
                return Ok(0);
            }
            let config = CtlConfig {
                max_team: limits.max_team.unwrap_or(usize::MAX),
                max_worlds: limits.max_worlds.unwrap_or(usize::MAX),
                ..CtlConfig::default()
            };
            CtlChecker::new(&k, &reg, config).check(&t, &f)?
        }
    };
    reduction_result(got, eval_qbf(&q)?, ("valid", "invalid"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
