//! Team path checking: does a finite team of lasso traces satisfy a team LTL
//! formula?
//!
//! The team and all of its suffix teams live in one universe of canonical
//! suffix traces, so every reachable team is a bitset over that universe and
//! verdicts are memoised per `(subformula, team)`. Temporal operators look at
//! most `prfx(T) + lcm(T)` steps ahead, after which suffix teams repeat.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::classical::{check_ltl_classical, ClassicalError};
use crate::formula::{
    check_atom_arity, classify_of, eval_atom, AtomError, AtomRegistry, AtomStructure, Ltl,
};
use crate::trace::{lcm, LassoTrace, TeamEncoding};

/// How splitjunctions enumerate sub-teams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitStrategy {
    /// Disjoint splits where both disjuncts are downward closed, covers elsewhere.
    #[default]
    Auto,
    /// Only disjoint splits (sound for downward-closed formulas only).
    DisjointOnly,
    /// Every pair of sub-teams whose union is the team.
    Covers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeamLtlConfig {
    pub strategy: SplitStrategy,
    /// Largest team on which covers are enumerated.
    pub max_team: usize,
    /// Largest number of splits enumerated for one splitjunction.
    pub max_subsets: u64,
    /// Largest `prfx + lcm` horizon.
    pub max_horizon: usize,
}

impl Default for TeamLtlConfig {
    fn default() -> Self {
        TeamLtlConfig {
            strategy: SplitStrategy::Auto,
            max_team: 16,
            max_subsets: 50_000_000,
            max_horizon: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamLtlError {
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error("atom parameter `{param}` is not a classical LTL formula: {source}")]
    AtomParameter {
        param: String,
        source: ClassicalError,
    },
}

impl TeamLtlError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, TeamLtlError::ResourceCap(_))
    }
}

/// `T ⊨ φ` with built-in atoms only and default limits.
pub fn check_team(team: &TeamEncoding, f: &Ltl) -> Result<bool, TeamLtlError> {
    TeamChecker::new(team, &AtomRegistry::default(), TeamLtlConfig::default())?.check(f)
}

/// Satisfaction of a generalised atom on a team (parameters read classically).
pub fn eval_gen_atom(
    team: &TeamEncoding,
    app: &crate::formula::GenAtomApp<Ltl>,
    atoms: &AtomRegistry,
) -> Result<bool, TeamLtlError> {
    check_atom_arity(&app.kind, app.args.len(), atoms)?;
    let mut rows = Vec::with_capacity(team.len());
    for t in team {
        let mut row = Vec::with_capacity(app.args.len());
        for a in &app.args {
            row.push(
                check_ltl_classical(t, a).map_err(|source| TeamLtlError::AtomParameter {
                    param: a.to_string(),
                    source,
                })?,
            );
        }
        rows.push(row);
    }
    Ok(eval_atom(&app.kind, &AtomStructure::new(rows), atoms)?)
}

type Team = FixedBitSet;

/// Evaluation context for one team and any number of formulas.
pub struct TeamChecker<'a> {
    atoms: &'a AtomRegistry,
    config: TeamLtlConfig,
    traces: Vec<LassoTrace>,
    next: Vec<usize>,
    root: Team,
    memo: HashMap<(usize, Team), bool>,
    param_memo: HashMap<(usize, usize), bool>,
    dc_memo: HashMap<usize, bool>,
}

fn key(f: &Ltl) -> usize {
    f as *const Ltl as usize
}

impl<'a> TeamChecker<'a> {
    pub fn new(
        team: &TeamEncoding,
        atoms: &'a AtomRegistry,
        config: TeamLtlConfig,
    ) -> Result<Self, TeamLtlError> {
        let mut ids: HashMap<LassoTrace, usize> = HashMap::new();
        let mut traces = Vec::new();
        let mut next: Vec<usize> = Vec::new();
        let mut root = Vec::new();
        for t in team {
            let mut cur = t.canonicalize();
            let mut prev: Option<usize> = None;
            loop {
                let (id, fresh) = match ids.get(&cur) {
                    Some(&id) => (id, false),
                    None => {
                        let id = traces.len();
                        ids.insert(cur.clone(), id);
                        traces.push(cur.clone());
                        next.push(usize::MAX);
                        (id, true)
                    }
                };
                if let Some(p) = prev {
                    next[p] = id;
                } else {
                    root.push(id);
                }
                if !fresh {
                    break;
                }
                prev = Some(id);
                cur = cur.step().canonicalize();
            }
        }
        let mut root_set = FixedBitSet::with_capacity(traces.len());
        root_set.extend(root);
        Ok(TeamChecker {
            atoms,
            config,
            traces,
            next,
            root: root_set,
            memo: HashMap::new(),
            param_memo: HashMap::new(),
            dc_memo: HashMap::new(),
        })
    }

    /// Verdict for the team the checker was built from.
    pub fn check(&mut self, f: &Ltl) -> Result<bool, TeamLtlError> {
        self.prepare(f)?;
        // memo keys are node addresses, which are only stable per formula
        self.memo.clear();
        self.param_memo.clear();
        self.dc_memo.clear();
        let root = self.root.clone();
        self.eval(f, &root)
    }

    /// Verdict together with a witness tree when the team satisfies `f`.
    pub fn explain(&mut self, f: &Ltl) -> Result<(bool, Option<Witness>), TeamLtlError> {
        let verdict = self.check(f)?;
        if !verdict {
            return Ok((false, None));
        }
        let root = self.root.clone();
        Ok((true, Some(self.witness(f, &root)?)))
    }

    fn prepare(&self, f: &Ltl) -> Result<(), TeamLtlError> {
        match f {
            Ltl::Prop(_) | Ltl::NegProp(_) => Ok(()),
            Ltl::And(l, r)
            | Ltl::Split(l, r)
            | Ltl::BoolOr(l, r)
            | Ltl::Until(l, r)
            | Ltl::Release(l, r) => {
                self.prepare(l)?;
                self.prepare(r)
            }
            Ltl::CNeg(c) | Ltl::Next(c) => self.prepare(c),
            Ltl::Atom(app) => {
                check_atom_arity(&app.kind, app.args.len(), self.atoms)?;
                for a in &app.args {
                    if !a.is_classical() {
                        return Err(TeamLtlError::AtomParameter {
                            param: a.to_string(),
                            source: ClassicalError::Unsupported("a team connective"),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    fn shift(&self, team: &Team) -> Team {
        let mut out = FixedBitSet::with_capacity(self.traces.len());
        out.extend(team.ones().map(|i| self.next[i]));
        out
    }

    fn horizon(&self, team: &Team) -> Result<usize, TeamLtlError> {
        let mut pre = 0;
        let mut l = 1usize;
        for i in team.ones() {
            let t = &self.traces[i];
            pre = pre.max(t.prefix().len());
            l = lcm(l, t.lp().len());
            if l > self.config.max_horizon {
                break;
            }
        }
        let h = pre.saturating_add(l);
        if h > self.config.max_horizon {
            return Err(TeamLtlError::ResourceCap(format!(
                "temporal horizon prfx + lcm = {h} exceeds {}",
                self.config.max_horizon
            )));
        }
        Ok(h)
    }

    fn downward_closed(&mut self, f: &Ltl) -> bool {
        let atoms = self.atoms;
        *self
            .dc_memo
            .entry(key(f))
            .or_insert_with(|| classify_of(f, Some(atoms)).downward_closed_fragment)
    }

    fn singleton(&self, i: usize) -> Team {
        let mut s = FixedBitSet::with_capacity(self.traces.len());
        s.insert(i);
        s
    }

    fn eval(&mut self, f: &Ltl, team: &Team) -> Result<bool, TeamLtlError> {
        match f {
            Ltl::Prop(p) => return Ok(team.ones().all(|i| self.traces[i].at(0).contains(p))),
            Ltl::NegProp(p) => return Ok(team.ones().all(|i| !self.traces[i].at(0).contains(p))),
            _ => {}
        }
        let k = (key(f), team.clone());
        if let Some(&v) = self.memo.get(&k) {
            return Ok(v);
        }
        let v = self.eval_uncached(f, team)?;
        self.memo.insert(k, v);
        Ok(v)
    }

    fn eval_uncached(&mut self, f: &Ltl, team: &Team) -> Result<bool, TeamLtlError> {
        Ok(match f {
            Ltl::Prop(_) | Ltl::NegProp(_) => unreachable!("handled in eval"),
            Ltl::And(l, r) => self.eval(l, team)? && self.eval(r, team)?,
            Ltl::BoolOr(l, r) => self.eval(l, team)? || self.eval(r, team)?,
            Ltl::CNeg(c) => !self.eval(c, team)?,
            Ltl::Split(l, r) => self.find_split(l, r, team)?.is_some(),
            Ltl::Next(c) => {
                let s = self.shift(team);
                self.eval(c, &s)?
            }
            Ltl::Until(l, r) => self.until_witness(l, r, team)?.is_some(),
            Ltl::Release(l, r) => self.release_witness(l, r, team)?.is_some(),
            Ltl::Atom(app) => {
                let mut rows = Vec::new();
                for i in team.ones() {
                    let mut row = Vec::with_capacity(app.args.len());
                    for a in &app.args {
                        row.push(self.param(a, i)?);
                    }
                    rows.push(row);
                }
                eval_atom(&app.kind, &AtomStructure::new(rows), self.atoms)?
            }
        })
    }

    fn param(&mut self, a: &Ltl, i: usize) -> Result<bool, TeamLtlError> {
        if let Some(&v) = self.param_memo.get(&(key(a), i)) {
            return Ok(v);
        }
        let v = check_ltl_classical(&self.traces[i], a).map_err(|source| {
            TeamLtlError::AtomParameter {
                param: a.to_string(),
                source,
            }
        })?;
        self.param_memo.insert((key(a), i), v);
        Ok(v)
    }

    /// Smallest `k` with `T[k] ⊨ r` and `T[j] ⊨ l` for all `j < k`.
    fn until_witness(
        &mut self,
        l: &Ltl,
        r: &Ltl,
        team: &Team,
    ) -> Result<Option<usize>, TeamLtlError> {
        let h = self.horizon(team)?;
        let mut cur = team.clone();
        for k in 0..h {
            if self.eval(r, &cur)? {
                return Ok(Some(k));
            }
            if !self.eval(l, &cur)? {
                return Ok(None);
            }
            cur = self.shift(&cur);
        }
        Ok(None)
    }

    /// `Some(None)` when `r` holds forever, `Some(Some(k))` when `l` releases
    /// at `k`, `None` when the release fails.
    fn release_witness(
        &mut self,
        l: &Ltl,
        r: &Ltl,
        team: &Team,
    ) -> Result<Option<Option<usize>>, TeamLtlError> {
        let h = self.horizon(team)?;
        let mut cur = team.clone();
        for k in 0..h {
            if !self.eval(r, &cur)? {
                return Ok(None);
            }
            if self.eval(l, &cur)? {
                return Ok(Some(Some(k)));
            }
            cur = self.shift(&cur);
        }
        Ok(Some(None))
    }

    fn use_disjoint(&mut self, l: &Ltl, r: &Ltl) -> bool {
        match self.config.strategy {
            SplitStrategy::Covers => false,
            SplitStrategy::DisjointOnly => true,
            SplitStrategy::Auto => self.downward_closed(l) && self.downward_closed(r),
        }
    }

    fn find_split(
        &mut self,
        l: &Ltl,
        r: &Ltl,
        team: &Team,
    ) -> Result<Option<(Team, Team)>, TeamLtlError> {
        let members: Vec<usize> = team.ones().collect();
        let n = self.traces.len();
        if self.use_disjoint(l, r) {
            let prune = self.downward_closed(l) && self.downward_closed(r);
            let mut left = FixedBitSet::with_capacity(n);
            let mut right = FixedBitSet::with_capacity(n);
            let mut free = Vec::new();
            for &i in &members {
                if !prune {
                    free.push(i);
                    continue;
                }
                let s = self.singleton(i);
                match (self.eval(l, &s)?, self.eval(r, &s)?) {
                    (false, false) => return Ok(None),
                    (true, false) => left.insert(i),
                    (false, true) => right.insert(i),
                    (true, true) => free.push(i),
                }
            }
            if free.len() >= 64 || (1u64 << free.len()) > self.config.max_subsets {
                return Err(TeamLtlError::ResourceCap(format!(
                    "{} undetermined traces in a split exceed --max-subsets {}",
                    free.len(),
                    self.config.max_subsets
                )));
            }
            for mask in 0u64..(1u64 << free.len()) {
                let mut a = left.clone();
                let mut b = right.clone();
                for (j, &i) in free.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        b.insert(i);
                    } else {
                        a.insert(i);
                    }
                }
                if self.eval(l, &a)? && self.eval(r, &b)? {
                    return Ok(Some((a, b)));
                }
            }
            return Ok(None);
        }
        if members.len() > self.config.max_team {
            return Err(TeamLtlError::ResourceCap(format!(
                "cover enumeration over {} traces exceeds --max-team {}",
                members.len(),
                self.config.max_team
            )));
        }
        let total = 3u64.pow(members.len() as u32);
        if total > self.config.max_subsets {
            return Err(TeamLtlError::ResourceCap(format!(
                "{total} covers exceed --max-subsets {}",
                self.config.max_subsets
            )));
        }
        for mut code in 0..total {
            let mut a = FixedBitSet::with_capacity(n);
            let mut b = FixedBitSet::with_capacity(n);
            for &i in &members {
                match code % 3 {
                    0 => a.insert(i),
                    1 => b.insert(i),
                    _ => {
                        a.insert(i);
                        b.insert(i);
                    }
                }
                code /= 3;
            }
            if self.eval(l, &a)? && self.eval(r, &b)? {
                return Ok(Some((a, b)));
            }
        }
        Ok(None)
    }

    fn describe(&self, team: &Team) -> Vec<String> {
        team.ones().map(|i| self.traces[i].to_string()).collect()
    }

    fn witness(&mut self, f: &Ltl, team: &Team) -> Result<Witness, TeamLtlError> {
        let mut w = Witness {
            formula: f.to_string(),
            team: self.describe(team),
            note: String::new(),
            children: Vec::new(),
        };
        match f {
            Ltl::Prop(_) | Ltl::NegProp(_) => w.note = "holds at every trace".into(),
            Ltl::And(l, r) => {
                w.children.push(self.witness(l, team)?);
                w.children.push(self.witness(r, team)?);
            }
            Ltl::BoolOr(l, r) => {
                let side = if self.eval(l, team)? { l } else { r };
                w.note = "whole team satisfies one disjunct".into();
                w.children.push(self.witness(side, team)?);
            }
            Ltl::CNeg(_) => w.note = "operand fails on this team".into(),
            Ltl::Split(l, r) => {
                let (a, b) = self.find_split(l, r, team)?.expect("verdict was true");
                w.note = "split".into();
                w.children.push(self.witness(l, &a)?);
                w.children.push(self.witness(r, &b)?);
            }
            Ltl::Next(c) => {
                let s = self.shift(team);
                w.children.push(self.witness(c, &s)?);
            }
            Ltl::Until(l, r) => {
                let k = self.until_witness(l, r, team)?.expect("verdict was true");
                w.note = format!("right operand at step {k}, left operand before");
                let mut cur = team.clone();
                for _ in 0..k {
                    cur = self.shift(&cur);
                }
                w.children.push(self.witness(r, &cur)?);
            }
            Ltl::Release(l, r) => {
                match self.release_witness(l, r, team)?.expect("verdict was true") {
                    Some(k) => {
                        w.note = format!("left operand releases at step {k}");
                        let mut cur = team.clone();
                        for _ in 0..k {
                            cur = self.shift(&cur);
                        }
                        w.children.push(self.witness(l, &cur)?);
                    }
                    None => {
                        w.note = format!(
                            "right operand holds for all {} distinct steps",
                            self.horizon(team)?
                        )
                    }
                }
            }
            Ltl::Atom(_) => w.note = "atom holds on the induced structure".into(),
        }
        Ok(w)
    }
}

/// Why a team satisfies a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub formula: String,
    pub team: Vec<String>,
    pub note: String,
    pub children: Vec<Witness>,
}

impl Witness {
    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        write!(f, "{pad}{} on {{{}}}", self.formula, self.team.join(", "))?;
        if !self.note.is_empty() {
            write!(f, "  [{}]", self.note)?;
        }
        writeln!(f)?;
        for c in &self.children {
            c.write(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Builds a checker with an explicit atom registry and configuration.
pub fn check_team_with(
    team: &TeamEncoding,
    f: &Ltl,
    atoms: &AtomRegistry,
    config: TeamLtlConfig,
) -> Result<bool, TeamLtlError> {
    TeamChecker::new(team, atoms, config)?.check(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::GenAtomDef;
    use crate::parser::parse_ltl;
    use crate::trace::{letter, Letter};

    fn ltl(s: &str) -> Ltl {
        parse_ltl(s).unwrap()
    }

    fn team(ts: Vec<LassoTrace>) -> TeamEncoding {
        ts.into_iter().collect()
    }

    fn p_then_nothing() -> LassoTrace {
        LassoTrace::new(vec![letter(["p"])], vec![Letter::new()]).unwrap()
    }

    fn nothing_p_nothing() -> LassoTrace {
        LassoTrace::new(vec![Letter::new(), letter(["p"])], vec![Letter::new()]).unwrap()
    }

    #[test]
    fn union_closure_counterexample() {
        let t1 = team(vec![p_then_nothing()]);
        let t2 = team(vec![nothing_p_nothing()]);
        let both = team(vec![p_then_nothing(), nothing_p_nothing()]);
        assert!(check_team(&t1, &ltl("F p")).unwrap());
        assert!(check_team(&t2, &ltl("F p")).unwrap());
        assert!(!check_team(&both, &ltl("F p")).unwrap());
        assert!(check_team(&both, &ltl("F p | F p")).unwrap());
    }

    #[test]
    fn empty_team() {
        let e = TeamEncoding::new();
        for s in [
            "p",
            "BOT",
            "F p",
            "G !p",
            "p U q",
            "X X p",
            "p | q",
            "dep(p; q)",
        ] {
            assert!(check_team(&e, &ltl(s)).unwrap(), "{s}");
        }
        assert!(!check_team(&e, &ltl("~BOT")).unwrap());
    }

    #[test]
    fn atoms() {
        let t = LassoTrace::periodic(vec![letter(["p", "q"])]).unwrap();
        let u = LassoTrace::periodic(vec![letter(["p"])]).unwrap();
        let tu = team(vec![t.clone(), u.clone()]);
        assert!(!check_team(&tu, &ltl("dep(p; q)")).unwrap());
        assert!(check_team(&team(vec![t.clone()]), &ltl("dep(p, q; r)")).unwrap());
        assert!(check_team(&tu, &ltl("dep(p; q) | dep(p; q)")).unwrap());

        let a = LassoTrace::periodic(vec![letter(["p"])]).unwrap();
        let b = LassoTrace::periodic(vec![Letter::new()]).unwrap();
        let ab = team(vec![a, b]);
        assert!(!check_team(&ab, &ltl("inc(p; q)")).unwrap());
        assert!(check_team(&ab, &ltl("inc(p; p)")).unwrap());
        assert!(!eval_gen_atom(
            &ab,
            &crate::formula::GenAtomApp::inc(vec![Ltl::prop("p")], vec![Ltl::prop("q")]),
            &AtomRegistry::new()
        )
        .unwrap());
    }

    #[test]
    fn custom_atom_and_errors() {
        let mut reg = AtomRegistry::new();
        reg.register(GenAtomDef::new("some", 1, false, |s| {
            (0..s.len()).any(|e| s.holds(e, 0))
        }));
        let t = team(vec![p_then_nothing(), nothing_p_nothing()]);
        let f = ltl("some(p)");
        assert!(check_team_with(&t, &f, &reg, TeamLtlConfig::default()).unwrap());
        assert!(!check_team_with(&t, &ltl("some(X X p)"), &reg, TeamLtlConfig::default()).unwrap());
        assert!(matches!(
            check_team(&t, &f),
            Err(TeamLtlError::Atom(AtomError::Unknown(_)))
        ));
        assert!(matches!(
            check_team(&t, &ltl("dep(~p; q)")),
            Err(TeamLtlError::AtomParameter { .. })
        ));
    }

    #[test]
    fn resource_cap_is_an_error() {
        let ts: Vec<LassoTrace> = (0..5)
            .map(|i| LassoTrace::periodic(vec![letter([format!("a{i}")])]).unwrap())
            .collect();
        let t = team(ts);
        let cfg = TeamLtlConfig {
            max_team: 3,
            ..TeamLtlConfig::default()
        };
        let err = check_team_with(&t, &ltl("(~p) | q"), &AtomRegistry::new(), cfg).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn boolean_disjunction_vs_split() {
        let t = team(vec![
            LassoTrace::periodic(vec![letter(["p"])]).unwrap(),
            LassoTrace::periodic(vec![letter(["q"])]).unwrap(),
        ]);
        assert!(check_team(&t, &ltl("p | q")).unwrap());
        assert!(!check_team(&t, &ltl("p \\|/ q")).unwrap());
    }

    #[test]
    fn explain_reports_split() {
        let t = team(vec![p_then_nothing(), nothing_p_nothing()]);
        let reg = AtomRegistry::new();
        let mut c = TeamChecker::new(&t, &reg, TeamLtlConfig::default()).unwrap();
        let (v, w) = c.explain(&ltl("F p | F p")).unwrap();
        assert!(v);
        let w = w.unwrap();
        assert_eq!(w.children.len(), 2);
        assert!(w.to_string().contains("split"));
        let (v, w) = c.explain(&ltl("F p")).unwrap();
        assert!(!v && w.is_none());
    }
}
