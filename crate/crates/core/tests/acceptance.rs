//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary lines are always printed.
//! Agreement thresholds are exact (100%); runtime limits are checked where a
//! target exists.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use teamtl::classical::{check_ctl_classical, check_ltl_classical};
use teamtl::format::{parse_kripke_json, parse_multiteam, parse_team_json};
use teamtl::formula::{AtomRegistry, Ltl};
use teamtl::kripke::{KripkeStructure, MultiTeam};
use teamtl::oracle::{
    ctl_oracle, naive_oracle, pl_team_satisfiable, successor_multisets_by_enumeration,
};
use teamtl::qbf::{
    eval_qbf, normalize_qbf, reduce_plsim_to_tpc, reduce_to_tmc_ctl, reduce_to_tpc, Literal,
    PrenexQbf, QbfInstance,
};
use teamtl::random::{
    instance_rng, props, random_kripke, random_lasso_forest, random_pl, random_qbf, random_team,
    FormulaGen,
};
use teamtl::splitfree::{check_model_splitfree, flatten};
use teamtl::team_ctl::{mc_ctl, CtlChecker, CtlConfig};
use teamtl::team_ltl::{check_team, check_team_with, TeamLtlConfig};
use teamtl::trace::TeamEncoding;
use teamtl::{parse_ctl, parse_ltl};

const SEED: u64 = 20_241_016;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn subteams(team: &TeamEncoding) -> Vec<TeamEncoding> {
    let ts: Vec<_> = team.iter().cloned().collect();
    (0u32..1 << ts.len())
        .map(|mask| {
            ts.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect()
        })
        .collect()
}

/// Empty-team property, downward closure and singleton equivalence.
fn structural() -> Outcome {
    let gen = FormulaGen::no_cneg(props(2), 8);
    let classical_gen = FormulaGen::basic(props(2), 8);
    let (mut dc_checked, mut singles) = (0, 0);
    for i in 0..1000 {
        let rng = &mut instance_rng(SEED, i);
        let f = gen.ltl(rng);
        let team = random_team(rng, &props(2), 3, 3, 3);
        if !check_team(&TeamEncoding::new(), &f).map_err(|e| e.to_string())? {
            return Err(format!("empty team fails {f}"));
        }
        if f.classify().downward_closed_fragment
            && check_team(&team, &f).map_err(|e| e.to_string())?
        {
            dc_checked += 1;
            for sub in subteams(&team) {
                if !check_team(&sub, &f).map_err(|e| e.to_string())? {
                    return Err(format!("downward closure fails for {f}"));
                }
            }
        }
        let g = classical_gen.ltl(rng);
        for t in team.iter() {
            let single: TeamEncoding = std::iter::once(t.clone()).collect();
            let team_v = check_team(&single, &g).map_err(|e| e.to_string())?;
            if team_v != check_ltl_classical(t, &g).map_err(|e| e.to_string())? {
                return Err(format!("singleton mismatch for {g} on {t}"));
            }
            singles += 1;
        }
    }
    Ok(format!(
        "1000 formulas: empty team 100%, downward closure 100% ({dc_checked} satisfied teams), singleton 100% ({singles} traces)"
    ))
}

fn fixtures() -> Outcome {
    let mut lines = Vec::new();
    let mut expect = |what: &str, got: bool, want: bool| {
        if got != want {
            lines.push(format!("{what}: got {got}"));
        }
    };
    let team = parse_team_json(&fixture("union_closure_team.json")).map_err(|e| e.to_string())?;
    let fp = parse_ltl("F p").unwrap();
    expect("T ∪ T' ⊨ F p", check_team(&team, &fp).unwrap(), false);
    for t in team.iter() {
        let single: TeamEncoding = std::iter::once(t.clone()).collect();
        expect("singleton ⊨ F p", check_team(&single, &fp).unwrap(), true);
    }
    let left = parse_kripke_json(&fixture("flatness_left.json")).map_err(|e| e.to_string())?;
    let right = parse_kripke_json(&fixture("flatness_right.json")).map_err(|e| e.to_string())?;
    let ctl = |k: &KripkeStructure, t: &str, f: &str| {
        mc_ctl(k, &parse_multiteam(k, t).unwrap(), &parse_ctl(f).unwrap()).unwrap()
    };
    expect("⟦x1,y1⟧ ⊨ EF p", ctl(&left, "x1,y1", "EF p"), false);
    expect("⟦x1⟧ ⊨ EF p", ctl(&left, "x1", "EF p"), true);
    expect("⟦y1⟧ ⊨ EF p", ctl(&left, "y1", "EF p"), true);
    expect("⟦w⟧ ⊨ AF p", ctl(&right, "w", "AF p"), true);
    expect("⟦w,w⟧ ⊨ AF p", ctl(&right, "w,w", "AF p"), false);
    if lines.is_empty() {
        Ok("union closure and both flatness fixtures match exactly (8 verdicts)".into())
    } else {
        Err(lines.join("; "))
    }
}

fn oracle_equivalence() -> Outcome {
    let gen = FormulaGen::full(props(2), 8);
    let reg = AtomRegistry::new();
    let (mut compared, mut skipped) = (0, 0);
    let mut seen = BTreeSet::new();
    let mut i = 0;
    while compared < 2000 {
        let rng = &mut instance_rng(SEED + 3, i);
        i += 1;
        if i > 20_000 {
            return Err(format!("only {compared} instances within oracle caps"));
        }
        let f = gen.ltl(rng);
        let team = random_team(rng, &props(2), 3, 2, 3);
        let Ok(expected) = naive_oracle(&team, &f, &reg) else {
            skipped += 1;
            continue;
        };
        let got = check_team(&team, &f).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("{f}: checker {got}, oracle {expected}"));
        }
        compared += 1;
        let text = f.to_string();
        for (tag, needle) in [
            ("dep", "dep("),
            ("inc", "inc("),
            ("boolor", "\\|/"),
            ("cneg", "~"),
        ] {
            if text.contains(needle) {
                seen.insert(tag);
            }
        }
    }
    if seen.len() < 4 {
        return Err(format!("constructs not covered: only {seen:?}"));
    }
    Ok(format!(
        "{compared} instances agree (dep, inc, \\|/ and ~ all exercised; {skipped} outside oracle caps)"
    ))
}

fn ctl_reduction_config() -> CtlConfig {
    CtlConfig {
        max_team: usize::MAX,
        max_worlds: usize::MAX,
        ..CtlConfig::default()
    }
}

/// Clauses over x1..x3: every sign pattern on three distinct variables, and
/// every sign pattern on two distinct variables with the second repeated.
fn clause_pool() -> Vec<[Literal; 3]> {
    let lit = |var, positive| Literal { var, positive };
    let mut pool = Vec::new();
    for signs in 0..8 {
        pool.push([0, 1, 2].map(|v| lit(v, signs >> v & 1 == 1)));
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for signs in 0..4 {
            let (sa, sb) = (signs & 1 == 1, signs & 2 == 2);
            pool.push([lit(a, sa), lit(b, sb), lit(b, sb)]);
        }
    }
    pool
}

fn qbf_round_trips() -> Outcome {
    let reg = AtomRegistry::new();
    let pool = clause_pool();
    let mut instances: Vec<QbfInstance> = Vec::new();
    for i in 0..pool.len() {
        instances.push(QbfInstance::anonymous(3, vec![pool[i]]).unwrap());
        for j in i..pool.len() {
            instances.push(QbfInstance::anonymous(3, vec![pool[i], pool[j]]).unwrap());
        }
    }
    let (q, _) = normalize_qbf(&PrenexQbf::parse(&fixture("worked_instance.qbf")).unwrap())
        .map_err(|e| e.to_string())?;
    let worked = q.clone();
    instances.push(q);
    for i in 0..200 {
        let rng = &mut instance_rng(SEED + 4, i);
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=3);
        instances.push(random_qbf(rng, n, m));
    }
    let mut valid = 0;
    for q in &instances {
        let expected = eval_qbf(q).map_err(|e| e.to_string())?;
        let (team, f) = reduce_to_tpc(q);
        let tpc = check_team(&team, &f).map_err(|e| e.to_string())?;
        let (k, t, g) = reduce_to_tmc_ctl(q).map_err(|e| e.to_string())?;
        let ctl = CtlChecker::new(&k, &reg, ctl_reduction_config())
            .check(&t, &g)
            .map_err(|e| e.to_string())?;
        if tpc != expected || ctl != expected {
            return Err(format!(
                "{q}: brute force {expected}, path route {tpc}, model route {ctl}"
            ));
        }
        valid += usize::from(expected);
    }
    if !eval_qbf(&worked).unwrap() {
        return Err("worked instance evaluates invalid".into());
    }
    Ok(format!(
        "{} instances ({valid} valid; exhaustive n = 3, m ≤ 2 over a 20-clause pool plus 200 random n ≤ 4, m ≤ 3) agree on both routes; worked instance valid on both",
        instances.len()
    ))
}

fn splitfree_cross_validation() -> Outcome {
    let reg = AtomRegistry::new();
    let mut gen = FormulaGen::full(props(2), 6).without_split();
    gen.atoms = false;
    let config = TeamLtlConfig {
        max_team: usize::MAX,
        ..TeamLtlConfig::default()
    };
    let mut max_ratio: f64 = 0.0;
    for i in 0..500 {
        let rng = &mut instance_rng(SEED + 5, i);
        let k = random_lasso_forest(rng, 8, &props(2));
        let f = gen.ltl(rng);
        let flat = flatten(&k).map_err(|e| e.to_string())?;
        let bound = 1usize << k.len();
        if flat.s + flat.p > bound {
            return Err(format!("s + p = {} > 2^{}", flat.s + flat.p, k.len()));
        }
        max_ratio = max_ratio.max((flat.s + flat.p) as f64 / bound as f64);
        let traces = k.enumerate_traces().map_err(|e| e.to_string())?;
        let expected = check_team_with(&traces, &f, &reg, config).map_err(|e| e.to_string())?;
        let got = check_model_splitfree(&k, &f).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("{f}: flattened {got}, enumerated {expected}"));
        }
    }
    Ok(format!(
        "500 structures agree; s + p ≤ 2^|W| always (max ratio {max_ratio:.3})"
    ))
}

fn multisets(n_worlds: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for w in start..n_worlds {
                let mut m2: Vec<usize> = m.clone();
                m2.push(w);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn ctl_oracle_equivalence() -> Outcome {
    let reg = AtomRegistry::new();
    let gen = FormulaGen::full(props(2), 5);
    let mut compared = 0;
    for i in 0..60 {
        let rng = &mut instance_rng(SEED + 6, i);
        let n = rng.gen_range(1..=4);
        let k = random_kripke(rng, n, &props(2));
        let f = gen.ctl(rng);
        for m in multisets(n, 3) {
            let team = MultiTeam::from_worlds(&m);
            let expected = ctl_oracle(&k, &team, &f, &reg).map_err(|e| e.to_string())?;
            let got = mc_ctl(&k, &team, &f).map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!("{f} on {m:?}: checker {got}, oracle {expected}"));
            }
            compared += 1;
        }
    }
    let basic = FormulaGen::basic(props(2), 6);
    for i in 0..1000 {
        let rng = &mut instance_rng(SEED + 7, i);
        let n = rng.gen_range(1..=6);
        let k = random_kripke(rng, n, &props(2));
        let w = rng.gen_range(0..n);
        let f = basic.ctl(rng);
        let expected = check_ctl_classical(&k, w, &f).map_err(|e| e.to_string())?;
        let got = mc_ctl(&k, &MultiTeam::from_worlds(&[w]), &f).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!(
                "singleton {f} at w{w}: team {got}, classical {expected}"
            ));
        }
    }
    Ok(format!(
        "{compared} instances agree with the f-sequence evaluator (every multiteam |T| ≤ 3 per structure); 1000 singletons agree"
    ))
}

fn successor_matching() -> Outcome {
    let mut cases = 0;
    let mut positives = 0;
    let shape = KripkeStructure::builder()
        .world("a", &[])
        .world("b", &[])
        .world("c", &[])
        .world("x", &[])
        .world("y", &[])
        .edges(&[
            ("a", "x"),
            ("b", "x"),
            ("c", "x"),
            ("c", "y"),
            ("x", "x"),
            ("y", "y"),
        ])
        .build()
        .unwrap();
    let t1 = parse_multiteam(&shape, "a,b,c").unwrap();
    let t2 = parse_multiteam(&shape, "x,y,y").unwrap();
    if shape.is_successor_team(&t1, &t2).unwrap() {
        return Err("coverage counterexample accepted".into());
    }
    let mut structures = vec![shape];
    for i in 0..12 {
        let rng = &mut instance_rng(SEED + 8, i);
        let n = rng.gen_range(1..=5);
        structures.push(random_kripke(rng, n, &props(1)));
    }
    for k in &structures {
        for m in multisets(k.len(), 4) {
            let team = MultiTeam::from_worlds(&m);
            let all = successor_multisets_by_enumeration(k, &team);
            for cand in multisets(k.len(), 4)
                .into_iter()
                .filter(|c| c.len() == m.len())
            {
                let expected = all.contains(&cand);
                let got = k
                    .is_successor_team(&team, &MultiTeam::from_worlds(&cand))
                    .map_err(|e| e.to_string())?;
                if got != expected {
                    return Err(format!(
                        "{m:?} -> {cand:?}: matching {got}, enumeration {expected}"
                    ));
                }
                cases += 1;
                positives += usize::from(expected);
            }
        }
    }
    Ok(format!(
        "{cases} (team, candidate) pairs agree ({positives} successors), coverage counterexample rejected"
    ))
}

/// Every propositional team formula over `vars` with exactly `n` connectives.
fn pl_formulas(vars: &[String], n: usize) -> Vec<Ltl> {
    if n == 0 {
        return vars
            .iter()
            .flat_map(|v| [Ltl::prop(v.clone()), Ltl::neg(v.clone())])
            .collect();
    }
    let mut out: Vec<Ltl> = pl_formulas(vars, n - 1)
        .into_iter()
        .map(Ltl::cneg)
        .collect();
    for a in 0..n {
        let (ls, rs) = (pl_formulas(vars, a), pl_formulas(vars, n - 1 - a));
        for l in &ls {
            for r in &rs {
                out.push(l.clone().and(r.clone()));
                out.push(l.clone().split(r.clone()));
                out.push(l.clone().bool_or(r.clone()));
            }
        }
    }
    out
}

fn plsim_reduction() -> Outcome {
    let vars = props(3);
    let mut checked = 0;
    let mut sat = 0;
    let mut check = |psi: &Ltl| -> Result<(), String> {
        let expected = pl_team_satisfiable(psi).map_err(|e| e.to_string())?;
        let (team, f) = reduce_plsim_to_tpc(psi).map_err(|e| e.to_string())?;
        let got = check_team(&team, &f).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("{psi}: reduction {got}, brute force {expected}"));
        }
        checked += 1;
        sat += usize::from(expected);
        Ok(())
    };
    let mut exhaustive = 0;
    for n in 0..=2 {
        for psi in pl_formulas(&vars, n) {
            check(&psi)?;
            exhaustive += 1;
        }
    }
    for i in 0..1500 {
        let rng = &mut instance_rng(SEED + 9, i);
        let nvars = rng.gen_range(1..=3);
        let psi = random_pl(rng, &vars[..nvars], 5);
        check(&psi)?;
    }
    Ok(format!(
        "{checked} formulas agree ({exhaustive} exhaustive up to 2 connectives, 1500 random up to 5; {sat} satisfiable)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "structural properties",
            structural,
            Some(Duration::from_secs(60)),
        ),
        ("union closure and flatness fixtures", fixtures, None),
        (
            "team path checking vs naive oracle",
            oracle_equivalence,
            None,
        ),
        (
            "QBF reduction round trips",
            qbf_round_trips,
            Some(Duration::from_secs(600)),
        ),
        (
            "splitfree model checking vs trace enumeration",
            splitfree_cross_validation,
            None,
        ),
        (
            "team CTL vs f-sequence oracle",
            ctl_oracle_equivalence,
            None,
        ),
        (
            "successor teams: matching vs enumeration",
            successor_matching,
            None,
        ),
        ("PL(~) reduction vs brute force", plsim_reduction, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(summary) => println!("PASS [{}] {name}: {summary} ({elapsed:.1?})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {name}: {reason} ({elapsed:.1?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
