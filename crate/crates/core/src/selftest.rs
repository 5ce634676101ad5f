//! Differential self-test: every checker against its reference evaluator on
//! a seeded instance stream, plus the pinned fixtures.

use std::fmt;

use crate::classical::{check_ctl_classical, check_ltl_classical};
use crate::format::{parse_kripke_json, parse_multiteam, parse_team_json};
use crate::formula::{AtomRegistry, Ctl, Ltl};
use crate::kripke::MultiTeam;
use crate::oracle::{
    ctl_oracle, naive_oracle, pl_team_satisfiable, successor_multisets_by_enumeration,
};
use crate::parser::{parse_ctl, parse_ltl};
use crate::qbf::{
    eval_qbf, normalize_qbf, reduce_plsim_to_tpc, reduce_to_tmc_ctl, reduce_to_tpc, PrenexQbf,
    QbfInstance,
};
use crate::random::{
    instance_rng, props, random_kripke, random_lasso_forest, random_multiteam, random_pl,
    random_qbf, random_team, FormulaGen,
};
use crate::splitfree::{check_model_splitfree, flatten};
use crate::team_ctl::{mc_ctl, CtlChecker, CtlConfig};
use crate::team_ltl::{check_team, check_team_with, TeamLtlConfig};
use crate::trace::TeamEncoding;

use rand::Rng;

pub const UNION_CLOSURE_TEAM: &str = include_str!("../../../fixtures/union_closure_team.json");
pub const FLATNESS_LEFT: &str = include_str!("../../../fixtures/flatness_left.json");
pub const FLATNESS_RIGHT: &str = include_str!("../../../fixtures/flatness_right.json");
pub const WORKED_QBF: &str = include_str!("../../../fixtures/worked_instance.qbf");

/// Deliberately broken evaluator used to check that the harness notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// Reads the splitjunction as Boolean disjunction.
    SplitAsBoolOr,
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    pub count: u64,
    pub mutant: Option<Mutant>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            count: 400,
            mutant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub seed: u64,
    pub index: u64,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (seed {}, instance {}): {}",
            self.check, self.seed, self.index, self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub instances: u64,
    /// Instances a reference evaluator declined (size or stability caps).
    pub skipped: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.mismatches {
            writeln!(f, "MISMATCH {m}")?;
        }
        let head = if self.ok() { "OK" } else { "FAIL" };
        write!(
            f,
            "{head}: {} instances, {} mismatches",
            self.instances,
            self.mismatches.len()
        )?;
        if self.skipped > 0 {
            write!(f, " ({} skipped by reference caps)", self.skipped)?;
        }
        Ok(())
    }
}

fn mutate(f: &Ltl) -> Ltl {
    match f {
        Ltl::Prop(_) | Ltl::NegProp(_) | Ltl::Atom(_) => f.clone(),
        Ltl::And(l, r) => mutate(l).and(mutate(r)),
        Ltl::Split(l, r) => mutate(l).bool_or(mutate(r)),
        Ltl::BoolOr(l, r) => mutate(l).bool_or(mutate(r)),
        Ltl::CNeg(c) => mutate(c).cneg(),
        Ltl::Next(c) => mutate(c).next(),
        Ltl::Until(l, r) => mutate(l).until(mutate(r)),
        Ltl::Release(l, r) => mutate(l).release(mutate(r)),
    }
}

enum Outcome {
    Agree,
    Skip,
    Differ(String),
}

fn compare(a: bool, b: bool, what: impl FnOnce() -> String) -> Outcome {
    if a == b {
        Outcome::Agree
    } else {
        Outcome::Differ(format!("{} (checker {a}, reference {b})", what()))
    }
}

const CHECKS: [&str; 8] = [
    "team-ltl-vs-oracle",
    "team-ltl-singleton",
    "splitfree-vs-enumeration",
    "team-ctl-vs-oracle",
    "team-ctl-singleton",
    "successor-matching",
    "qbf-reductions",
    "plsim-reduction",
];

fn run_one(kind: usize, seed: u64, index: u64, mutant: Option<Mutant>) -> Outcome {
    let rng = &mut instance_rng(seed, index);
    let reg = AtomRegistry::new();
    match kind {
        0 => {
            let f = FormulaGen::full(props(2), 6).ltl(rng);
            let team = random_team(rng, &props(2), 3, 2, 3);
            let Ok(expected) = naive_oracle(&team, &f, &reg) else {
                return Outcome::Skip;
            };
            let g = match mutant {
                Some(Mutant::SplitAsBoolOr) => mutate(&f),
                None => f.clone(),
            };
            match check_team(&team, &g) {
                Ok(v) => compare(v, expected, || format!("{f} on {}", show_team(&team))),
                Err(e) => Outcome::Differ(format!("{f}: {e}")),
            }
        }
        1 => {
            let f = FormulaGen::basic(props(2), 6).ltl(rng);
            let team = random_team(rng, &props(2), 1, 3, 3);
            let Some(t) = team.iter().next() else {
                return Outcome::Skip;
            };
            let expected = check_ltl_classical(t, &f).expect("classical formula");
            match check_team(&team, &f) {
                Ok(v) => compare(v, expected, || format!("{f} on {t}")),
                Err(e) => Outcome::Differ(format!("{f}: {e}")),
            }
        }
        2 => {
            let k = random_lasso_forest(rng, 8, &props(2));
            let mut gen = FormulaGen::full(props(2), 5).without_split();
            gen.atoms = false;
            let f = gen.ltl(rng);
            let flat = flatten(&k).expect("generated structure has an initial world");
            if flat.s + flat.p > 1 << k.len() {
                return Outcome::Differ(format!(
                    "s + p = {} exceeds 2^{}",
                    flat.s + flat.p,
                    k.len()
                ));
            }
            let traces = k.enumerate_traces().expect("generated lasso forest");
            let config = TeamLtlConfig {
                max_team: usize::MAX,
                ..TeamLtlConfig::default()
            };
            let expected = match check_team_with(&traces, &f, &reg, config) {
                Ok(v) => v,
                Err(_) => return Outcome::Skip,
            };
            match check_model_splitfree(&k, &f) {
                Ok(v) => compare(v, expected, || format!("{f} on {}", show_team(&traces))),
                Err(e) => Outcome::Differ(format!("{f}: {e}")),
            }
        }
        3 => {
            let n = rng.gen_range(1..=4);
            let k = random_kripke(rng, n, &props(2));
            let team = random_multiteam(rng, &k, 3);
            let f = FormulaGen::full(props(2), 5).ctl(rng);
            let Ok(expected) = ctl_oracle(&k, &team, &f, &reg) else {
                return Outcome::Skip;
            };
            match mc_ctl(&k, &team, &f) {
                Ok(v) => compare(v, expected, || format!("{f} on {:?}", team.worlds())),
                Err(e) => Outcome::Differ(format!("{f}: {e}")),
            }
        }
        4 => {
            let n = rng.gen_range(1..=6);
            let k = random_kripke(rng, n, &props(2));
            let w = rng.gen_range(0..n);
            let f = FormulaGen::basic(props(2), 6).ctl(rng);
            let expected = check_ctl_classical(&k, w, &f).expect("classical formula");
            match mc_ctl(&k, &MultiTeam::from_worlds(&[w]), &f) {
                Ok(v) => compare(v, expected, || format!("{f} at w{w}")),
                Err(e) => Outcome::Differ(format!("{f}: {e}")),
            }
        }
        5 => {
            let n = rng.gen_range(1..=5);
            let k = random_kripke(rng, n, &props(1));
            let team = random_multiteam(rng, &k, 4);
            let all = successor_multisets_by_enumeration(&k, &team);
            let candidate: Vec<usize> = (0..team.len()).map(|_| rng.gen_range(0..n)).collect();
            let candidate = MultiTeam::from_worlds(&candidate);
            let expected = all.contains(&candidate.multiset());
            let v = k.is_successor_team(&team, &candidate).expect("sizes agree");
            compare(v, expected, || {
                format!("{:?} -> {:?}", team.worlds(), candidate.worlds())
            })
        }
        6 => {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=2);
            let q = random_qbf(rng, n, m);
            qbf_round_trip(&q)
        }
        _ => {
            let vars = props(rng.gen_range(1..=2));
            let psi = random_pl(rng, &vars, 4);
            let Ok(expected) = pl_team_satisfiable(&psi) else {
                return Outcome::Skip;
            };
            let (team, f) = reduce_plsim_to_tpc(&psi).expect("small propositional formula");
            match check_team(&team, &f) {
                Ok(v) => compare(v, expected, || psi.to_string()),
                Err(e) => Outcome::Differ(format!("{psi}: {e}")),
            }
        }
    }
}

fn show_team(team: &TeamEncoding) -> String {
    let ts: Vec<String> = team.iter().map(ToString::to_string).collect();
    format!("{{{}}}", ts.join(", "))
}

/// Both reduction routes against brute-force evaluation.
fn qbf_round_trip(q: &QbfInstance) -> Outcome {
    let expected = eval_qbf(q).expect("small instance");
    let (team, f) = reduce_to_tpc(q);
    let tpc = match check_team(&team, &f) {
        Ok(v) => v,
        Err(e) => return Outcome::Differ(format!("path route: {e}")),
    };
    if tpc != expected {
        return Outcome::Differ(format!("path route on\n{q}gave {tpc}, expected {expected}"));
    }
    let ctl = match reduction_ctl_verdict(q) {
        Ok(v) => v,
        Err(e) => return Outcome::Differ(format!("model route: {e}")),
    };
    compare(ctl, expected, || format!("model route on\n{q}"))
}

/// Caps suitable for the structures built by the QBF reduction.
pub fn reduction_ctl_config() -> CtlConfig {
    CtlConfig {
        max_team: usize::MAX,
        max_worlds: usize::MAX,
        ..CtlConfig::default()
    }
}

pub fn reduction_ctl_verdict(q: &QbfInstance) -> Result<bool, String> {
    let (k, t, f) = reduce_to_tmc_ctl(q).map_err(|e| e.to_string())?;
    let reg = AtomRegistry::new();
    CtlChecker::new(&k, &reg, reduction_ctl_config())
        .check(&t, &f)
        .map_err(|e| e.to_string())
}

/// Verdicts pinned by the shipped fixtures: the number of verdicts checked
/// and one line per failure.
pub fn check_fixtures() -> (u64, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: Result<bool, String>, want: bool| {
        checked += 1;
        match got {
            Ok(v) if v == want => {}
            Ok(v) => failures.push(format!("{what}: got {v}, expected {want}")),
            Err(e) => failures.push(format!("{what}: {e}")),
        }
    };

    let team = parse_team_json(UNION_CLOSURE_TEAM).expect("fixture parses");
    let fp = parse_ltl("F p").expect("formula parses");
    expect(
        "union-closure team ⊨ F p",
        check_team(&team, &fp).map_err(|e| e.to_string()),
        false,
    );
    for t in team.iter() {
        let single: TeamEncoding = std::iter::once(t.clone()).collect();
        expect(
            &format!("{{{t}}} ⊨ F p"),
            check_team(&single, &fp).map_err(|e| e.to_string()),
            true,
        );
    }

    let ctl = |k: &str, team: &str, f: &str| -> Result<bool, String> {
        let k = parse_kripke_json(k).map_err(|e| e.to_string())?;
        let t = parse_multiteam(&k, team).map_err(|e| e.to_string())?;
        let f: Ctl = parse_ctl(f).map_err(|e| e.to_string())?;
        mc_ctl(&k, &t, &f).map_err(|e| e.to_string())
    };
    expect("⟦x1,y1⟧ ⊨ EF p", ctl(FLATNESS_LEFT, "x1,y1", "EF p"), false);
    expect("⟦x1⟧ ⊨ EF p", ctl(FLATNESS_LEFT, "x1", "EF p"), true);
    expect("⟦y1⟧ ⊨ EF p", ctl(FLATNESS_LEFT, "y1", "EF p"), true);
    expect("⟦w⟧ ⊨ AF p", ctl(FLATNESS_RIGHT, "w", "AF p"), true);
    expect("⟦w,w⟧ ⊨ AF p", ctl(FLATNESS_RIGHT, "w,w", "AF p"), false);

    let q = PrenexQbf::parse(WORKED_QBF)
        .and_then(|p| normalize_qbf(&p))
        .map(|(q, _)| q)
        .expect("fixture parses");
    expect("worked QBF", eval_qbf(&q).map_err(|e| e.to_string()), true);
    let (team, f) = reduce_to_tpc(&q);
    expect(
        "worked QBF, path route",
        check_team(&team, &f).map_err(|e| e.to_string()),
        true,
    );
    expect("worked QBF, model route", reduction_ctl_verdict(&q), true);
    (checked, failures)
}

/// Runs `count` random instances, cycling through the checks, then the
/// fixtures.
pub fn run_selftest(config: &SelftestConfig) -> SelftestReport {
    let mut report = SelftestReport::default();
    for index in 0..config.count {
        let kind = (index % CHECKS.len() as u64) as usize;
        report.instances += 1;
        match run_one(kind, config.seed, index, config.mutant) {
            Outcome::Agree => {}
            Outcome::Skip => report.skipped += 1,
            Outcome::Differ(detail) => report.mismatches.push(Mismatch {
                check: CHECKS[kind],
                seed: config.seed,
                index,
                detail,
            }),
        }
    }
    let (checked, failures) = check_fixtures();
    report.instances += checked;
    for detail in failures {
        report.mismatches.push(Mismatch {
            check: "fixture",
            seed: config.seed,
            index: 0,
            detail,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_hold() {
        let (checked, failures) = check_fixtures();
        assert!(failures.is_empty(), "{failures:?}");
        assert_eq!(checked, 11);
    }

    #[test]
    fn small_run_is_clean() {
        let report = run_selftest(&SelftestConfig {
            seed: 3,
            count: 160,
            mutant: None,
        });
        assert!(report.ok(), "{report}");
        assert!(report.to_string().starts_with("OK: "));
    }

    #[test]
    fn mutant_is_caught() {
        let report = run_selftest(&SelftestConfig {
            seed: 3,
            count: 400,
            mutant: Some(Mutant::SplitAsBoolOr),
        });
        assert!(!report.ok());
        assert!(report
            .mismatches
            .iter()
            .all(|m| m.check == "team-ltl-vs-oracle"));
    }

    #[test]
    fn seeds_reproduce() {
        let a = run_selftest(&SelftestConfig {
            seed: 9,
            count: 40,
            mutant: Some(Mutant::SplitAsBoolOr),
        });
        let b = run_selftest(&SelftestConfig {
            seed: 9,
            count: 40,
            mutant: Some(Mutant::SplitAsBoolOr),
        });
        assert_eq!(a.mismatches, b.mismatches);
    }
}
