//! Brute-force reference evaluators.
//!
//! These follow the semantic clauses literally, trade speed for
//! transparency and share no evaluation code with the production checkers.
//! They are only meant for small instances.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{AtomKind, AtomRegistry, AtomStructure, Ctl, GenAtomApp, Ltl};
use crate::kripke::{KripkeStructure, MultiTeam};
use crate::trace::{gcd, LassoTrace, TeamEncoding};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for the reference evaluator: {0}")]
    TooLarge(String),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("verdict changed between temporal bounds prfx+lcm and prfx+2lcm")]
    Unstable,
}

pub const ORACLE_MAX_TEAM: usize = 4;
pub const ORACLE_MAX_LENGTH: usize = 8;

/// Team LTL semantics evaluated directly on `(traces, time)` pairs, always
/// enumerating covers for splitjunctions. The verdict is computed with
/// temporal bounds `prfx + lcm` and `prfx + 2·lcm` and both must agree.
pub fn naive_oracle(
    team: &TeamEncoding,
    f: &Ltl,
    atoms: &AtomRegistry,
) -> Result<bool, OracleError> {
    if team.len() > ORACLE_MAX_TEAM {
        return Err(OracleError::TooLarge(format!("{} traces", team.len())));
    }
    if f.length() > ORACLE_MAX_LENGTH {
        return Err(OracleError::TooLarge(format!(
            "formula length {}",
            f.length()
        )));
    }
    naive_oracle_uncapped(team, f, atoms)
}

/// [`naive_oracle`] without the size caps.
pub fn naive_oracle_uncapped(
    team: &TeamEncoding,
    f: &Ltl,
    atoms: &AtomRegistry,
) -> Result<bool, OracleError> {
    let traces: Vec<LassoTrace> = team.iter().cloned().collect();
    let members: Vec<usize> = (0..traces.len()).collect();
    let short = Naive {
        traces: &traces,
        atoms,
        periods: 1,
    }
    .sat(f, &members, 0)?;
    let long = Naive {
        traces: &traces,
        atoms,
        periods: 2,
    }
    .sat(f, &members, 0)?;
    if short != long {
        return Err(OracleError::Unstable);
    }
    Ok(short)
}

struct Naive<'a> {
    traces: &'a [LassoTrace],
    atoms: &'a AtomRegistry,
    periods: usize,
}

impl Naive<'_> {
    fn pos(&self, m: usize, i: usize) -> &BTreeSet<String> {
        let t = &self.traces[m];
        let pre = t.prefix().len();
        if i < pre {
            &t.prefix()[i]
        } else {
            &t.lp()[(i - pre) % t.lp().len()]
        }
    }

    /// Whether members `a` and `b` have the same suffix from time `i`.
    fn same_from(&self, a: usize, b: usize, i: usize) -> bool {
        let (ta, tb) = (&self.traces[a], &self.traces[b]);
        let la = ta.lp().len();
        let lb = tb.lp().len();
        let span = ta.prefix().len().max(tb.prefix().len()) + la / gcd(la, lb) * lb;
        (i..i + span).all(|j| self.pos(a, j) == self.pos(b, j))
    }

    /// Drops members whose suffix from `i` repeats an earlier one, so that
    /// the team is a set of suffixes.
    fn dedup(&self, members: &[usize], i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &m in members {
            if !out.iter().any(|&o| self.same_from(o, m, i)) {
                out.push(m);
            }
        }
        out
    }

    fn bound(&self, members: &[usize], i: usize) -> usize {
        let mut pre = 0;
        let mut l = 1;
        for &m in members {
            let t = &self.traces[m];
            pre = pre.max(t.prefix().len().saturating_sub(i));
            l = l / gcd(l, t.lp().len()) * t.lp().len();
        }
        pre + self.periods * l
    }

    fn sat(&self, f: &Ltl, members: &[usize], i: usize) -> Result<bool, OracleError> {
        let members = self.dedup(members, i);
        Ok(match f {
            Ltl::Prop(p) => members.iter().all(|&m| self.pos(m, i).contains(p)),
            Ltl::NegProp(p) => members.iter().all(|&m| !self.pos(m, i).contains(p)),
            Ltl::And(l, r) => self.sat(l, &members, i)? && self.sat(r, &members, i)?,
            Ltl::BoolOr(l, r) => self.sat(l, &members, i)? || self.sat(r, &members, i)?,
            Ltl::CNeg(c) => !self.sat(c, &members, i)?,
            Ltl::Split(l, r) => {
                let n = members.len();
                let mut found = false;
                'covers: for code in 0..3usize.pow(n as u32) {
                    let mut left = Vec::new();
                    let mut right = Vec::new();
                    let mut c = code;
                    for &m in &members {
                        match c % 3 {
                            0 => left.push(m),
                            1 => right.push(m),
                            _ => {
                                left.push(m);
                                right.push(m);
                            }
                        }
                        c /= 3;
                    }
                    if self.sat(l, &left, i)? && self.sat(r, &right, i)? {
                        found = true;
                        break 'covers;
                    }
                }
                found
            }
            Ltl::Next(c) => self.sat(c, &members, i + 1)?,
            Ltl::Until(l, r) => {
                let b = self.bound(&members, i);
                let mut found = false;
                for k in 0..b {
                    if self.sat(r, &members, i + k)? {
                        let mut ok = true;
                        for j in 0..k {
                            if !self.sat(l, &members, i + j)? {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            found = true;
                            break;
                        }
                    }
                }
                found
            }
            Ltl::Release(l, r) => {
                let b = self.bound(&members, i);
                let mut all = true;
                for k in 0..b {
                    if self.sat(r, &members, i + k)? {
                        continue;
                    }
                    let mut released = false;
                    for j in 0..k {
                        if self.sat(l, &members, i + j)? {
                            released = true;
                            break;
                        }
                    }
                    if !released {
                        all = false;
                        break;
                    }
                }
                all
            }
            Ltl::Atom(app) => {
                let mut rows = Vec::new();
                for &m in &members {
                    let mut row = Vec::new();
                    for a in &app.args {
                        if !a.is_classical() {
                            return Err(OracleError::Unsupported(format!("atom parameter `{a}`")));
                        }
                        // classical truth on a single trace = truth on its singleton team
                        row.push(self.sat(a, &[m], i)?);
                    }
                    rows.push(row);
                }
                atom_by_definition(app, &AtomStructure::new(rows), self.atoms)?
            }
        })
    }
}

/// Built-in atoms straight from their pairwise definitions.
fn atom_by_definition<F>(
    app: &GenAtomApp<F>,
    s: &AtomStructure,
    atoms: &AtomRegistry,
) -> Result<bool, OracleError> {
    Ok(match &app.kind {
        AtomKind::Dep { determiners } => s.rows.iter().all(|a| {
            s.rows.iter().all(|b| {
                (0..*determiners).any(|j| a[j] != b[j])
                    || (*determiners..a.len()).all(|j| a[j] == b[j])
            })
        }),
        AtomKind::Inc { width } => s.rows.iter().all(|a| {
            s.rows
                .iter()
                .any(|b| (0..*width).all(|j| a[j] == b[width + j]))
        }),
        AtomKind::Custom(name) => {
            let def = atoms
                .get(name)
                .ok_or_else(|| OracleError::Unsupported(format!("unknown atom `{name}`")))?;
            if def.arity != app.args.len() {
                return Err(OracleError::Unsupported(format!("arity of `{name}`")));
            }
            (def.evaluator)(s)
        }
    })
}

/// Team CTL semantics on ordered tuples of worlds: successor choices are
/// enumerated position by position, and unbounded temporal operators are
/// unfolded to depth `|W|^|T|`.
pub fn ctl_oracle(
    k: &KripkeStructure,
    team: &MultiTeam,
    f: &Ctl,
    atoms: &AtomRegistry,
) -> Result<bool, OracleError> {
    if team.len() > 3 || k.len() > 5 {
        return Err(OracleError::TooLarge(format!(
            "{} worlds, team of {}",
            k.len(),
            team.len()
        )));
    }
    let tuple: Vec<usize> = team.worlds().to_vec();
    let depth = k.len().pow(tuple.len() as u32);
    let mut o = CtlNaive {
        k,
        atoms,
        depth,
        memo: HashMap::new(),
    };
    o.sat(f, &tuple)
}

struct CtlNaive<'a> {
    k: &'a KripkeStructure,
    atoms: &'a AtomRegistry,
    depth: usize,
    memo: HashMap<(usize, Vec<usize>, usize), bool>,
}

impl CtlNaive<'_> {
    /// Every tuple reachable by one synchronous step.
    fn steps(&self, tuple: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &w in tuple {
            let mut next = Vec::new();
            for prefix in &out {
                for &v in self.k.succ(w) {
                    let mut t = prefix.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    fn prop(&self, w: usize, f: &Ctl) -> Result<bool, OracleError> {
        Ok(match f {
            Ctl::Prop(p) => self.k.label(w).contains(p),
            Ctl::NegProp(p) => !self.k.label(w).contains(p),
            Ctl::And(l, r) => self.prop(w, l)? && self.prop(w, r)?,
            Ctl::Split(l, r) => self.prop(w, l)? || self.prop(w, r)?,
            other => {
                return Err(OracleError::Unsupported(format!(
                    "atom parameter `{other}`"
                )))
            }
        })
    }

    fn sat(&mut self, f: &Ctl, t: &[usize]) -> Result<bool, OracleError> {
        Ok(match f {
            Ctl::Prop(p) => t.iter().all(|&w| self.k.label(w).contains(p)),
            Ctl::NegProp(p) => t.iter().all(|&w| !self.k.label(w).contains(p)),
            Ctl::And(l, r) => self.sat(l, t)? && self.sat(r, t)?,
            Ctl::BoolOr(l, r) => self.sat(l, t)? || self.sat(r, t)?,
            Ctl::CNeg(c) => !self.sat(c, t)?,
            Ctl::Split(l, r) => {
                let n = t.len();
                let mut found = false;
                for mask in 0..(1usize << n) {
                    let left: Vec<usize> = (0..n)
                        .filter(|j| mask >> j & 1 == 0)
                        .map(|j| t[j])
                        .collect();
                    let right: Vec<usize> = (0..n)
                        .filter(|j| mask >> j & 1 == 1)
                        .map(|j| t[j])
                        .collect();
                    if self.sat(l, &left)? && self.sat(r, &right)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            Ctl::EX(c) => {
                let mut any = false;
                for s in self.steps(t) {
                    if self.sat(c, &s)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            Ctl::AX(c) => {
                let mut all = true;
                for s in self.steps(t) {
                    if !self.sat(c, &s)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Ctl::EU(l, r) => self.unfold(f, l, r, t, self.depth, Kind::EU)?,
            Ctl::AU(l, r) => self.unfold(f, l, r, t, self.depth, Kind::AU)?,
            Ctl::ER(l, r) => self.unfold(f, l, r, t, self.depth, Kind::ER)?,
            Ctl::AR(l, r) => self.unfold(f, l, r, t, self.depth, Kind::AR)?,
            Ctl::Atom(app) => {
                let mut rows = Vec::new();
                for &w in t {
                    let mut row = Vec::new();
                    for a in &app.args {
                        row.push(self.prop(w, a)?);
                    }
                    rows.push(row);
                }
                atom_by_definition(app, &AtomStructure::new(rows), self.atoms)?
            }
        })
    }

    /// `d`-step approximant of the until/release fixpoints.
    fn unfold(
        &mut self,
        node: &Ctl,
        l: &Ctl,
        r: &Ctl,
        t: &[usize],
        d: usize,
        kind: Kind,
    ) -> Result<bool, OracleError> {
        let key = (node as *const Ctl as usize, t.to_vec(), d);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = match kind {
            Kind::EU | Kind::AU => {
                if self.sat(r, t)? {
                    true
                } else if d == 0 || !self.sat(l, t)? {
                    false
                } else {
                    let steps = self.steps(t);
                    let mut acc = kind == Kind::AU;
                    for s in steps {
                        let v = self.unfold(node, l, r, &s, d - 1, kind)?;
                        if kind == Kind::EU && v {
                            acc = true;
                            break;
                        }
                        if kind == Kind::AU && !v {
                            acc = false;
                            break;
                        }
                    }
                    acc
                }
            }
            Kind::ER | Kind::AR => {
                if !self.sat(r, t)? {
                    false
                } else if d == 0 || self.sat(l, t)? {
                    true
                } else {
                    let steps = self.steps(t);
                    let mut acc = kind == Kind::AR;
                    for s in steps {
                        let v = self.unfold(node, l, r, &s, d - 1, kind)?;
                        if kind == Kind::ER && v {
                            acc = true;
                            break;
                        }
                        if kind == Kind::AR && !v {
                            acc = false;
                            break;
                        }
                    }
                    acc
                }
            }
        };
        self.memo.insert(key, v);
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    EU,
    AU,
    ER,
    AR,
}

/// Whether some non-empty set of assignments satisfies a propositional
/// team formula (`p`, `!p`, `&`, `|`, `\|/`, `~`).
pub fn pl_team_satisfiable(f: &Ltl) -> Result<bool, OracleError> {
    let vars: Vec<String> = f.props().into_iter().collect();
    if vars.len() > 4 {
        return Err(OracleError::TooLarge(format!("{} variables", vars.len())));
    }
    let assignments = 1usize << vars.len();
    let mut memo = HashMap::new();
    for team in 1u64..(1u64 << assignments) {
        if pl_sat(f, team, &vars, &mut memo)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `team` is a bitmask over assignments; assignment `a` sets `vars[j]` iff
/// bit `j` of `a` is one.
fn pl_sat(
    f: &Ltl,
    team: u64,
    vars: &[String],
    memo: &mut HashMap<(usize, u64), bool>,
) -> Result<bool, OracleError> {
    let key = (f as *const Ltl as usize, team);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let members = || (0..64).filter(move |a| team >> a & 1 == 1);
    let value = |p: &str, a: usize| {
        let j = vars
            .iter()
            .position(|v| v == p)
            .expect("variable collected");
        a >> j & 1 == 1
    };
    let v = match f {
        Ltl::Prop(p) => members().all(|a| value(p, a)),
        Ltl::NegProp(p) => members().all(|a| !value(p, a)),
        Ltl::And(l, r) => pl_sat(l, team, vars, memo)? && pl_sat(r, team, vars, memo)?,
        Ltl::BoolOr(l, r) => pl_sat(l, team, vars, memo)? || pl_sat(r, team, vars, memo)?,
        Ltl::CNeg(c) => !pl_sat(c, team, vars, memo)?,
        Ltl::Split(l, r) => {
            // covers: left ⊆ team, right ⊇ team \ left
            let mut found = false;
            let mut left = team;
            loop {
                let rest = team & !left;
                let mut extra = left;
                loop {
                    if pl_sat(l, left, vars, memo)? && pl_sat(r, rest | extra, vars, memo)? {
                        found = true;
                        break;
                    }
                    if extra == 0 {
                        break;
                    }
                    extra = (extra - 1) & left;
                }
                if found || left == 0 {
                    break;
                }
                left = (left - 1) & team;
            }
            found
        }
        other => {
            return Err(OracleError::Unsupported(format!(
                "`{other}` is not propositional"
            )))
        }
    };
    memo.insert(key, v);
    Ok(v)
}

/// Every successor multiset of `team`, by trying each combination of one
/// successor per member.
pub fn successor_multisets_by_enumeration(
    k: &KripkeStructure,
    team: &MultiTeam,
) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; team.len()];
    let worlds = team.worlds();
    loop {
        let mut next: Vec<usize> = worlds
            .iter()
            .zip(&choice)
            .map(|(&w, &c)| k.succ(w)[c])
            .collect();
        next.sort_unstable();
        out.insert(next);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < k.succ(worlds[i]).len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_ctl, parse_ltl};
    use crate::trace::{letter, Letter};

    fn ltl(s: &str) -> Ltl {
        parse_ltl(s).unwrap()
    }

    #[test]
    fn union_closure_counterexample() {
        let team: TeamEncoding = [
            LassoTrace::new(vec![letter(["p"])], vec![Letter::new()]).unwrap(),
            LassoTrace::new(vec![Letter::new(), letter(["p"])], vec![Letter::new()]).unwrap(),
        ]
        .into_iter()
        .collect();
        let reg = AtomRegistry::new();
        assert!(!naive_oracle(&team, &ltl("F p"), &reg).unwrap());
        assert!(naive_oracle(&team, &ltl("F p | F p"), &reg).unwrap());
        assert!(naive_oracle(&TeamEncoding::new(), &ltl("G p"), &reg).unwrap());
    }

    #[test]
    fn suffixes_merge_into_a_set() {
        // both traces become ∅^ω after one step, so inc sees a single element
        let team: TeamEncoding = [
            LassoTrace::new(vec![letter(["p"])], vec![Letter::new()]).unwrap(),
            LassoTrace::new(vec![letter(["q"])], vec![Letter::new()]).unwrap(),
        ]
        .into_iter()
        .collect();
        let reg = AtomRegistry::new();
        assert!(naive_oracle(&team, &ltl("X dep(p)"), &reg).unwrap());
        assert!(!naive_oracle(&team, &ltl("dep(p)"), &reg).unwrap());
    }

    #[test]
    fn caps() {
        let reg = AtomRegistry::new();
        let f = ltl("X X X X X X X X X p");
        assert!(matches!(
            naive_oracle(&TeamEncoding::new(), &f, &reg),
            Err(OracleError::TooLarge(_))
        ));
    }

    #[test]
    fn ctl_flatness_right() {
        let k = KripkeStructure::builder()
            .world("w", &[])
            .world("a2", &[])
            .world("a3", &["p"])
            .world("a4", &[])
            .world("b2", &["p"])
            .edges(&[
                ("w", "a2"),
                ("w", "b2"),
                ("a2", "a3"),
                ("a3", "a4"),
                ("a4", "a4"),
                ("b2", "a4"),
            ])
            .build()
            .unwrap();
        let reg = AtomRegistry::new();
        let af = parse_ctl("AF p").unwrap();
        assert!(ctl_oracle(&k, &MultiTeam::from_worlds(&[0]), &af, &reg).unwrap());
        assert!(!ctl_oracle(&k, &MultiTeam::from_worlds(&[0, 0]), &af, &reg).unwrap());
    }

    #[test]
    fn propositional() {
        assert!(pl_team_satisfiable(&ltl("p")).unwrap());
        assert!(!pl_team_satisfiable(&ltl("p & ~p")).unwrap());
        assert!(pl_team_satisfiable(&ltl("~p")).unwrap());
        assert!(!pl_team_satisfiable(&ltl("p & !p")).unwrap());
        assert!(pl_team_satisfiable(&ltl("~p & ~!p")).unwrap());
        assert!(pl_team_satisfiable(&ltl("(~p) | q")).unwrap());
    }
}
