//! Team CTL model checking over multisets of worlds.
//!
//! Teams are handled as sorted world vectors, which identifies teams that
//! differ only in their indices. Path quantifiers range over the graph of
//! successor multisets; until and release are fixpoints on the part of that
//! graph reachable from the team, whose size is bounded by `|W|^|T|`.

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::classical::{label_ctl, ClassicalError};
use crate::formula::{check_atom_arity, eval_atom, AtomError, AtomRegistry, AtomStructure, Ctl};
use crate::kripke::{KripkeError, KripkeStructure, MultiTeam};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtlConfig {
    pub max_team: usize,
    pub max_worlds: usize,
    /// Largest number of distinct multisets explored by one temporal operator.
    pub max_states: usize,
    /// Read until and release with the invariant starting at step one.
    pub until_from_one: bool,
}

impl Default for CtlConfig {
    fn default() -> Self {
        CtlConfig {
            max_team: 6,
            max_worlds: 12,
            max_states: 1 << 20,
            until_from_one: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtlError {
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error("atom parameter `{param}` must be a plain propositional formula: {source}")]
    AtomParameter {
        param: String,
        source: ClassicalError,
    },
}

impl CtlError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, CtlError::ResourceCap(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    E,
    A,
}

/// `K, T ⊨ φ` with built-in atoms and default caps.
pub fn mc_ctl(k: &KripkeStructure, team: &MultiTeam, f: &Ctl) -> Result<bool, CtlError> {
    CtlChecker::new(k, &AtomRegistry::default(), CtlConfig::default()).check(team, f)
}

/// Reachability along successor multisets: `E[inv U target]` or
/// `A[inv U target]` evaluated from `team`.
pub fn successor_graph_reach(
    k: &KripkeStructure,
    team: &MultiTeam,
    inv: &Ctl,
    target: &Ctl,
    mode: PathMode,
) -> Result<bool, CtlError> {
    let f = match mode {
        PathMode::E => inv.clone().eu(target.clone()),
        PathMode::A => inv.clone().au(target.clone()),
    };
    mc_ctl(k, team, &f)
}

pub struct CtlChecker<'a> {
    k: &'a KripkeStructure,
    atoms: &'a AtomRegistry,
    config: CtlConfig,
    memo: HashMap<(usize, Vec<usize>), bool>,
    succ_cache: HashMap<Vec<usize>, Rc<Vec<Vec<usize>>>>,
    params: HashMap<usize, FixedBitSet>,
}

fn key(f: &Ctl) -> usize {
    f as *const Ctl as usize
}

impl<'a> CtlChecker<'a> {
    pub fn new(k: &'a KripkeStructure, atoms: &'a AtomRegistry, config: CtlConfig) -> Self {
        CtlChecker {
            k,
            atoms,
            config,
            memo: HashMap::new(),
            succ_cache: HashMap::new(),
            params: HashMap::new(),
        }
    }

    pub fn check(&mut self, team: &MultiTeam, f: &Ctl) -> Result<bool, CtlError> {
        if let Some(&w) = team.worlds().iter().find(|&&w| w >= self.k.len()) {
            return Err(KripkeError::WorldOutOfRange(w).into());
        }
        if team.len() > self.config.max_team {
            return Err(CtlError::ResourceCap(format!(
                "team of {} exceeds --max-team {}",
                team.len(),
                self.config.max_team
            )));
        }
        if self.k.len() > self.config.max_worlds {
            return Err(CtlError::ResourceCap(format!(
                "{} worlds exceed --max-worlds {}",
                self.k.len(),
                self.config.max_worlds
            )));
        }
        self.prepare(f)?;
        // memo keys are node addresses, which are only stable per formula
        self.memo.clear();
        self.params.clear();
        self.eval(f, &team.multiset())
    }

    fn prepare(&mut self, f: &Ctl) -> Result<(), CtlError> {
        match f {
            Ctl::Prop(_) | Ctl::NegProp(_) => Ok(()),
            Ctl::And(l, r)
            | Ctl::Split(l, r)
            | Ctl::BoolOr(l, r)
            | Ctl::EU(l, r)
            | Ctl::AU(l, r)
            | Ctl::ER(l, r)
            | Ctl::AR(l, r) => {
                self.prepare(l)?;
                self.prepare(r)
            }
            Ctl::CNeg(c) | Ctl::EX(c) | Ctl::AX(c) => self.prepare(c),
            Ctl::Atom(app) => {
                check_atom_arity(&app.kind, app.args.len(), self.atoms)?;
                for a in &app.args {
                    if !a.is_temporal_free() {
                        return Err(CtlError::AtomParameter {
                            param: a.to_string(),
                            source: ClassicalError::Unsupported("a temporal operator"),
                        });
                    }
                    label_ctl(self.k, a).map_err(|source| CtlError::AtomParameter {
                        param: a.to_string(),
                        source,
                    })?;
                }
                Ok(())
            }
        }
    }

    fn successors(&mut self, team: &[usize]) -> Rc<Vec<Vec<usize>>> {
        if let Some(s) = self.succ_cache.get(team) {
            return Rc::clone(s);
        }
        let s = Rc::new(self.k.successor_multisets(team));
        self.succ_cache.insert(team.to_vec(), Rc::clone(&s));
        s
    }

    fn eval(&mut self, f: &Ctl, team: &[usize]) -> Result<bool, CtlError> {
        match f {
            Ctl::Prop(p) => return Ok(team.iter().all(|&w| self.k.has_label(w, p))),
            Ctl::NegProp(p) => return Ok(team.iter().all(|&w| !self.k.has_label(w, p))),
            _ => {}
        }
        let mk = (key(f), team.to_vec());
        if let Some(&v) = self.memo.get(&mk) {
            return Ok(v);
        }
        let v = match f {
            Ctl::Prop(_) | Ctl::NegProp(_) => unreachable!("handled above"),
            Ctl::And(l, r) => self.eval(l, team)? && self.eval(r, team)?,
            Ctl::BoolOr(l, r) => self.eval(l, team)? || self.eval(r, team)?,
            Ctl::CNeg(c) => !self.eval(c, team)?,
            Ctl::Split(l, r) => self.split(l, r, team)?,
            Ctl::EX(c) => {
                let succ = self.successors(team);
                let mut any = false;
                for s in succ.iter() {
                    if self.eval(c, s)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            Ctl::AX(c) => {
                let succ = self.successors(team);
                let mut all = true;
                for s in succ.iter() {
                    if !self.eval(c, s)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Ctl::EU(l, r) | Ctl::AU(l, r) | Ctl::ER(l, r) | Ctl::AR(l, r) => {
                self.temporal(f, l, r, team)?
            }
            Ctl::Atom(app) => {
                for a in &app.args {
                    if !self.params.contains_key(&key(a)) {
                        let sat =
                            label_ctl(self.k, a).map_err(|source| CtlError::AtomParameter {
                                param: a.to_string(),
                                source,
                            })?;
                        self.params.insert(key(a), sat);
                    }
                }
                let cols: Vec<&FixedBitSet> =
                    app.args.iter().map(|a| &self.params[&key(a)]).collect();
                let rows = team
                    .iter()
                    .map(|&w| cols.iter().map(|c| c.contains(w)).collect())
                    .collect();
                eval_atom(&app.kind, &AtomStructure::new(rows), self.atoms)?
            }
        };
        self.memo.insert(mk, v);
        Ok(v)
    }

    /// Disjoint splits `T1 ⊎ T2 = T`, enumerated as sub-multisets.
    fn split(&mut self, l: &Ctl, r: &Ctl, team: &[usize]) -> Result<bool, CtlError> {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &w in team {
            match groups.last_mut() {
                Some((v, m)) if *v == w => *m += 1,
                _ => groups.push((w, 1)),
            }
        }
        let mut take = vec![0usize; groups.len()];
        loop {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (&(w, m), &t) in groups.iter().zip(&take) {
                left.extend(std::iter::repeat_n(w, t));
                right.extend(std::iter::repeat_n(w, m - t));
            }
            if self.eval(l, &left)? && self.eval(r, &right)? {
                return Ok(true);
            }
            // next mixed-radix counter value
            let mut i = 0;
            loop {
                if i == groups.len() {
                    return Ok(false);
                }
                if take[i] < groups[i].1 {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
        }
    }

    fn temporal(&mut self, f: &Ctl, l: &Ctl, r: &Ctl, team: &[usize]) -> Result<bool, CtlError> {
        let from_one = self.config.until_from_one;
        if from_one {
            // T ⊨ ψ (resp. ¬ψ) decides k = 0; otherwise continue with the
            // ordinary operator from the successors.
            let here = self.eval(r, team)?;
            let (exists, until) = match f {
                Ctl::EU(..) => (true, true),
                Ctl::AU(..) => (false, true),
                Ctl::ER(..) => (true, false),
                _ => (false, false),
            };
            if until && here {
                return Ok(true);
            }
            if !until && !here {
                return Ok(false);
            }
            let succ = self.successors(team);
            let mut verdicts = Vec::with_capacity(succ.len());
            for s in succ.iter() {
                verdicts.push(self.fixpoint(f, l, r, s)?);
            }
            return Ok(if exists {
                verdicts.into_iter().any(|v| v)
            } else {
                verdicts.into_iter().all(|v| v)
            });
        }
        self.fixpoint(f, l, r, team)
    }

    /// Standard (invariant from step zero) until/release on the reachable
    /// successor-multiset graph of `team`.
    fn fixpoint(&mut self, f: &Ctl, l: &Ctl, r: &Ctl, team: &[usize]) -> Result<bool, CtlError> {
        let fk = (key(f) ^ 1, team.to_vec());
        if let Some(&v) = self.memo.get(&fk) {
            return Ok(v);
        }
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut nodes: Vec<Vec<usize>> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(team.to_vec(), 0);
        nodes.push(team.to_vec());
        queue.push_back(0);
        while let Some(n) = queue.pop_front() {
            let succ = self.successors(&nodes[n].clone());
            let mut out = Vec::with_capacity(succ.len());
            for s in succ.iter() {
                let id = match index.get(s) {
                    Some(&id) => id,
                    None => {
                        if nodes.len() >= self.config.max_states {
                            return Err(CtlError::ResourceCap(format!(
                                "more than {} reachable multisets",
                                self.config.max_states
                            )));
                        }
                        let id = nodes.len();
                        index.insert(s.clone(), id);
                        nodes.push(s.clone());
                        queue.push_back(id);
                        id
                    }
                };
                out.push(id);
            }
            edges.push(out);
        }
        let mut a = Vec::with_capacity(nodes.len());
        let mut b = Vec::with_capacity(nodes.len());
        for n in &nodes {
            a.push(self.eval(l, n)?);
            b.push(self.eval(r, n)?);
        }
        let (exists, least) = match f {
            Ctl::EU(..) => (true, true),
            Ctl::AU(..) => (false, true),
            Ctl::ER(..) => (true, false),
            Ctl::AR(..) => (false, false),
            _ => unreachable!("temporal node"),
        };
        let mut z = vec![!least; nodes.len()];
        loop {
            let mut changed = false;
            for n in 0..nodes.len() {
                let step = if exists {
                    edges[n].iter().any(|&m| z[m])
                } else {
                    edges[n].iter().all(|&m| z[m])
                };
                let v = if least {
                    b[n] || (a[n] && step)
                } else {
                    b[n] && (a[n] || step)
                };
                if v != z[n] {
                    z[n] = v;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (n, v) in nodes.into_iter().zip(z.iter()) {
            self.memo.insert((key(f) ^ 1, n), *v);
        }
        Ok(z[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ctl;

    fn ctl(s: &str) -> Ctl {
        parse_ctl(s).unwrap()
    }

    fn flatness_left() -> KripkeStructure {
        KripkeStructure::builder()
            .world("x1", &[])
            .world("x2", &[])
            .world("x3", &["p"])
            .world("x4", &[])
            .world("y1", &[])
            .world("y2", &["p"])
            .world("y3", &[])
            .world("y4", &[])
            .edges(&[
                ("x1", "x2"),
                ("x2", "x3"),
                ("x3", "x4"),
                ("x4", "x4"),
                ("y1", "y2"),
                ("y2", "y3"),
                ("y3", "y4"),
                ("y4", "y4"),
            ])
            .build()
            .unwrap()
    }

    fn flatness_right() -> KripkeStructure {
        KripkeStructure::builder()
            .world("w", &[])
            .world("a2", &[])
            .world("a3", &["p"])
            .world("a4", &[])
            .world("b2", &["p"])
            .world("b3", &[])
            .world("b4", &[])
            .edges(&[
                ("w", "a2"),
                ("w", "b2"),
                ("a2", "a3"),
                ("a3", "a4"),
                ("a4", "a4"),
                ("b2", "b3"),
                ("b3", "b4"),
                ("b4", "b4"),
            ])
            .build()
            .unwrap()
    }

    #[test]
    fn flatness_left_verdicts() {
        let k = flatness_left();
        let (x, y) = (k.world("x1").unwrap(), k.world("y1").unwrap());
        let ef = ctl("EF p");
        assert!(!mc_ctl(&k, &MultiTeam::from_worlds(&[x, y]), &ef).unwrap());
        assert!(mc_ctl(&k, &MultiTeam::from_worlds(&[x]), &ef).unwrap());
        assert!(mc_ctl(&k, &MultiTeam::from_worlds(&[y]), &ef).unwrap());
        assert!(mc_ctl(&k, &MultiTeam::from_worlds(&[x, y]), &ctl("EF p | EF p")).unwrap());
        assert!(!successor_graph_reach(
            &k,
            &MultiTeam::from_worlds(&[x, y]),
            &Ctl::top(),
            &Ctl::prop("p"),
            PathMode::E
        )
        .unwrap());
    }

    #[test]
    fn flatness_right_verdicts() {
        let k = flatness_right();
        let w = k.world("w").unwrap();
        let af = ctl("AF p");
        assert!(mc_ctl(&k, &MultiTeam::from_worlds(&[w]), &af).unwrap());
        assert!(!mc_ctl(&k, &MultiTeam::from_worlds(&[w, w]), &af).unwrap());
        assert!(!mc_ctl(&k, &MultiTeam::from_worlds(&[w, w, w]), &af).unwrap());
    }

    #[test]
    fn empty_team() {
        let k = flatness_right();
        for s in ["p", "BOT", "AF p", "EG !p", "AX BOT", "p | q", "dep(p; q)"] {
            assert!(
                mc_ctl(&k, &MultiTeam::from_worlds(&[]), &ctl(s)).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn chain_reach() {
        let k = KripkeStructure::builder()
            .world("a", &[])
            .world("b", &[])
            .world("c", &["q"])
            .edges(&[("a", "b"), ("b", "c"), ("c", "c")])
            .build()
            .unwrap();
        let t = MultiTeam::from_worlds(&[0]);
        let (top, q) = (Ctl::top(), Ctl::prop("q"));
        assert!(successor_graph_reach(&k, &t, &top, &q, PathMode::E).unwrap());
        assert!(successor_graph_reach(&k, &t, &top, &q, PathMode::A).unwrap());
        assert!(!successor_graph_reach(
            &k,
            &t,
            &Ctl::neg("q").and(Ctl::prop("q")),
            &q,
            PathMode::E
        )
        .unwrap());
    }

    #[test]
    fn until_from_one_differs_at_step_zero() {
        let k = KripkeStructure::builder()
            .world("a", &[])
            .world("b", &["q"])
            .edges(&[("a", "b"), ("b", "b")])
            .build()
            .unwrap();
        let f = ctl("E[p U q]");
        let t = MultiTeam::from_worlds(&[0]);
        assert!(!mc_ctl(&k, &t, &f).unwrap());
        let reg = AtomRegistry::new();
        let cfg = CtlConfig {
            until_from_one: true,
            ..CtlConfig::default()
        };
        assert!(CtlChecker::new(&k, &reg, cfg).check(&t, &f).unwrap());
    }

    #[test]
    fn caps_and_params() {
        let k = flatness_right();
        let big = MultiTeam::from_worlds(&[0; 7]);
        assert!(mc_ctl(&k, &big, &ctl("p")).unwrap_err().is_resource_cap());
        assert!(matches!(
            mc_ctl(
                &k,
                &MultiTeam::from_worlds(&[0]),
                &Ctl::Atom(crate::formula::GenAtomApp::dep(vec![], vec![ctl("EX p")]))
            ),
            Err(CtlError::AtomParameter { .. })
        ));
    }

    #[test]
    fn multiset_atoms() {
        let k = flatness_right();
        let (a3, b3) = (k.world("a3").unwrap(), k.world("b3").unwrap());
        let t = MultiTeam::from_worlds(&[a3, b3, a3]);
        assert!(!mc_ctl(&k, &t, &ctl("dep(p)")).unwrap());
        assert!(mc_ctl(&k, &t, &ctl("dep(p) | dep(p)")).unwrap());
        assert!(mc_ctl(&k, &t, &ctl("inc(p; p)")).unwrap());
        assert!(!mc_ctl(&k, &t, &ctl("inc(p; BOT)")).unwrap());
    }
}
