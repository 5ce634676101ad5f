//! Kripke structures, multiset teams of worlds and the synchronous
//! successor relation between them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_identifier, TAUT};
use crate::trace::{LassoTrace, Letter, TeamEncoding};

/// A structure as written in a file, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawKripke {
    pub worlds: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KripkeIssue {
    NoWorlds,
    BadWorldName(String),
    DuplicateWorld(String),
    DanglingEdge { from: String, to: String },
    NotLeftTotal(String),
    LabelOnUnknownWorld(String),
    BadProposition { world: String, prop: String },
    UnknownInitial(String),
}

impl fmt::Display for KripkeIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KripkeIssue::NoWorlds => write!(f, "structure has no worlds"),
            KripkeIssue::BadWorldName(w) => write!(f, "world name `{w}` is not an identifier"),
            KripkeIssue::DuplicateWorld(w) => write!(f, "world `{w}` declared twice"),
            KripkeIssue::DanglingEdge { from, to } => {
                write!(f, "edge {from} -> {to} mentions an undeclared world")
            }
            KripkeIssue::NotLeftTotal(w) => {
                write!(f, "world `{w}` has no successor (not left-total)")
            }
            KripkeIssue::LabelOnUnknownWorld(w) => {
                write!(f, "labels given for undeclared world `{w}`")
            }
            KripkeIssue::BadProposition { world, prop } => {
                write!(
                    f,
                    "world `{world}` carries invalid or reserved proposition `{prop}`"
                )
            }
            KripkeIssue::UnknownInitial(w) => write!(f, "initial world `{w}` is not declared"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("invalid Kripke structure: {}", join_issues(.0))]
    Invalid(Vec<KripkeIssue>),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldOutOfRange(usize),
    #[error("structure has no initial world")]
    NoInitial,
    #[error("world `{0}` lies on a cycle and branches; its trace set is not finitely enumerable")]
    LassoForestViolation(String),
    #[error("successor teams differ in size ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("more than {0} traces")]
    TooManyTraces(usize),
}

fn join_issues(issues: &[KripkeIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks a raw structure; returns every problem found.
pub fn validate(raw: &RawKripke) -> Vec<KripkeIssue> {
    let mut issues = Vec::new();
    if raw.worlds.is_empty() {
        issues.push(KripkeIssue::NoWorlds);
    }
    let mut declared = BTreeSet::new();
    for w in &raw.worlds {
        if !is_identifier(w) {
            issues.push(KripkeIssue::BadWorldName(w.clone()));
        }
        if !declared.insert(w.as_str()) {
            issues.push(KripkeIssue::DuplicateWorld(w.clone()));
        }
    }
    let mut has_succ = BTreeSet::new();
    for (a, b) in &raw.edges {
        if declared.contains(a.as_str()) && declared.contains(b.as_str()) {
            has_succ.insert(a.as_str());
        } else {
            issues.push(KripkeIssue::DanglingEdge {
                from: a.clone(),
                to: b.clone(),
            });
        }
    }
    for w in &raw.worlds {
        if !has_succ.contains(w.as_str()) {
            issues.push(KripkeIssue::NotLeftTotal(w.clone()));
        }
    }
    for (w, props) in &raw.labels {
        if !declared.contains(w.as_str()) {
            issues.push(KripkeIssue::LabelOnUnknownWorld(w.clone()));
        }
        for p in props {
            if !is_identifier(p) || p == TAUT {
                issues.push(KripkeIssue::BadProposition {
                    world: w.clone(),
                    prop: p.clone(),
                });
            }
        }
    }
    if let Some(i) = &raw.initial {
        if !declared.contains(i.as_str()) {
            issues.push(KripkeIssue::UnknownInitial(i.clone()));
        }
    }
    issues
}

/// A validated Kripke structure with worlds numbered `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    names: Vec<String>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    labels: Vec<Letter>,
    initial: Option<usize>,
}

impl KripkeStructure {
    pub fn from_raw(raw: &RawKripke) -> Result<Self, KripkeError> {
        let issues = validate(raw);
        if !issues.is_empty() {
            return Err(KripkeError::Invalid(issues));
        }
        let names = raw.worlds.clone();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut succ = vec![BTreeSet::new(); names.len()];
        for (a, b) in &raw.edges {
            succ[index[a]].insert(index[b]);
        }
        let mut labels = vec![Letter::new(); names.len()];
        for (w, props) in &raw.labels {
            labels[index[w]].extend(props.iter().cloned());
        }
        Ok(KripkeStructure {
            succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            initial: raw.initial.as_ref().map(|i| index[i]),
            names,
            index,
            labels,
        })
    }

    pub fn to_raw(&self) -> RawKripke {
        RawKripke {
            worlds: self.names.clone(),
            edges: self
                .succ
                .iter()
                .enumerate()
                .flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.is_empty())
                .map(|(w, l)| (self.names[w].clone(), l.iter().cloned().collect()))
                .collect(),
            initial: self.initial.map(|i| self.names[i].clone()),
        }
    }

    pub fn builder() -> KripkeBuilder {
        KripkeBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Result<usize, KripkeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    pub fn succ(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub fn label(&self, w: usize) -> &Letter {
        &self.labels[w]
    }

    pub fn has_label(&self, w: usize, p: &str) -> bool {
        self.labels[w].contains(p)
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.labels.iter().flat_map(|l| l.iter().cloned()).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    fn check_world(&self, w: usize) -> Result<(), KripkeError> {
        if w < self.len() {
            Ok(())
        } else {
            Err(KripkeError::WorldOutOfRange(w))
        }
    }

    /// Worlds reachable from `from` (inclusive).
    pub fn reachable(&self, from: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(w) = stack.pop() {
            for &v in &self.succ[w] {
                if !seen.put(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Whether `w` lies on a cycle.
    pub fn on_cycle(&self, w: usize) -> bool {
        self.succ[w].iter().any(|&v| self.reachable(v).contains(w))
    }

    /// `S_{i+1} = { w' | (w, w') ∈ R for some w ∈ S_i }`
    pub fn successor_sets_step(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for w in set.ones() {
            for &v in &self.succ[w] {
                out.insert(v);
            }
        }
        out
    }

    /// Whether `t2` arises from `t1` by one synchronous step of some
    /// team-compatible successor choice, decided as a perfect bipartite
    /// matching between the two multisets.
    pub fn is_successor_team(&self, t1: &MultiTeam, t2: &MultiTeam) -> Result<bool, KripkeError> {
        for &w in t1.worlds().iter().chain(t2.worlds().iter()) {
            self.check_world(w)?;
        }
        Ok(self.is_successor_multiset(&t1.multiset(), &t2.multiset()))
    }

    pub(crate) fn is_successor_multiset(&self, left: &[usize], right: &[usize]) -> bool {
        if left.len() != right.len() {
            return false;
        }
        let n = left.len();
        let mut match_of_right: Vec<Option<usize>> = vec![None; n];
        for l in 0..n {
            let mut visited = vec![false; n];
            if !self.augment(l, left, right, &mut visited, &mut match_of_right) {
                return false;
            }
        }
        true
    }

    fn augment(
        &self,
        l: usize,
        left: &[usize],
        right: &[usize],
        visited: &mut [bool],
        match_of_right: &mut [Option<usize>],
    ) -> bool {
        for r in 0..right.len() {
            if visited[r] || !self.succ[left[l]].contains(&right[r]) {
                continue;
            }
            visited[r] = true;
            let free = match match_of_right[r] {
                None => true,
                Some(other) => self.augment(other, left, right, visited, match_of_right),
            };
            if free {
                match_of_right[r] = Some(l);
                return true;
            }
        }
        false
    }

    /// All successor teams of `team`, up to multiset equality.
    pub fn successor_teams(&self, team: &MultiTeam) -> Result<Vec<MultiTeam>, KripkeError> {
        for &w in team.worlds() {
            self.check_world(w)?;
        }
        Ok(self
            .successor_multisets(&team.multiset())
            .into_iter()
            .map(|m| MultiTeam::from_worlds(&m))
            .collect())
    }

    /// Successor multisets of a sorted multiset; the result is sorted and
    /// duplicate free.
    pub(crate) fn successor_multisets(&self, team: &[usize]) -> Vec<Vec<usize>> {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &w in team {
            match groups.last_mut() {
                Some((v, m)) if *v == w => *m += 1,
                _ => groups.push((w, 1)),
            }
        }
        let mut partial: BTreeSet<Vec<usize>> = BTreeSet::new();
        partial.insert(Vec::new());
        for (w, m) in groups {
            let choices = multisets_with_repetition(&self.succ[w], m);
            let mut next = BTreeSet::new();
            for base in &partial {
                for c in &choices {
                    let mut merged = base.clone();
                    merged.extend_from_slice(c);
                    merged.sort_unstable();
                    next.insert(merged);
                }
            }
            partial = next;
        }
        partial.into_iter().collect()
    }

    /// The trace set of the structure from its initial world, provided every
    /// reachable world on a cycle has exactly one successor.
    pub fn enumerate_traces(&self) -> Result<TeamEncoding, KripkeError> {
        self.enumerate_traces_capped(usize::MAX)
    }

    pub fn enumerate_traces_capped(&self, max_traces: usize) -> Result<TeamEncoding, KripkeError> {
        let init = self.initial.ok_or(KripkeError::NoInitial)?;
        for w in self.reachable(init).ones() {
            if self.succ[w].len() > 1 && self.on_cycle(w) {
                return Err(KripkeError::LassoForestViolation(self.names[w].clone()));
            }
        }
        let mut out = TeamEncoding::new();
        let mut path = vec![init];
        self.collect_traces(&mut path, &mut out, max_traces)?;
        Ok(out)
    }

    fn collect_traces(
        &self,
        path: &mut Vec<usize>,
        out: &mut TeamEncoding,
        max_traces: usize,
    ) -> Result<(), KripkeError> {
        let last = *path.last().unwrap();
        for &v in &self.succ[last] {
            if let Some(j) = path.iter().position(|&u| u == v) {
                let word = |ws: &[usize]| ws.iter().map(|&w| self.labels[w].clone()).collect();
                let t = LassoTrace::new(word(&path[..j]), word(&path[j..]))
                    .expect("cycle is non-empty");
                out.insert(&t);
                if out.len() > max_traces {
                    return Err(KripkeError::TooManyTraces(max_traces));
                }
            } else {
                path.push(v);
                self.collect_traces(path, out, max_traces)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph kripke {\n");
        if let Some(i) = self.initial {
            let _ = writeln!(
                s,
                "  __init [shape=point];\n  __init -> \"{}\";",
                self.names[i]
            );
        }
        for (w, name) in self.names.iter().enumerate() {
            let label: Vec<&str> = self.labels[w].iter().map(String::as_str).collect();
            let _ = writeln!(
                s,
                "  \"{name}\" [label=\"{name}\\n{{{}}}\"];",
                label.join(",")
            );
        }
        for (a, bs) in self.succ.iter().enumerate() {
            for &b in bs {
                let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.names[a], self.names[b]);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// All sorted multisets of size `m` over `items`.
fn multisets_with_repetition(items: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn go(
        items: &[usize],
        start: usize,
        m: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Incremental construction of a [`KripkeStructure`].
#[derive(Debug, Clone, Default)]
pub struct KripkeBuilder {
    raw: RawKripke,
}

impl KripkeBuilder {
    pub fn world(mut self, name: &str, labels: &[&str]) -> Self {
        self.raw.worlds.push(name.to_string());
        if !labels.is_empty() {
            self.raw.labels.insert(
                name.to_string(),
                labels.iter().map(|s| s.to_string()).collect(),
            );
        }
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.raw.edges.push((from.to_string(), to.to_string()));
        self
    }

    pub fn edges(mut self, edges: &[(&str, &str)]) -> Self {
        for (a, b) in edges {
            self.raw.edges.push((a.to_string(), b.to_string()));
        }
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.raw.initial = Some(name.to_string());
        self
    }

    pub fn build(self) -> Result<KripkeStructure, KripkeError> {
        KripkeStructure::from_raw(&self.raw)
    }
}

/// A multiset of worlds given as `(index, world)` pairs with distinct indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTeam {
    entries: Vec<(usize, usize)>,
    worlds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("index {0} occurs twice in a multiteam")]
pub struct DuplicateIndex(pub usize);

impl MultiTeam {
    pub fn new(entries: Vec<(usize, usize)>) -> Result<Self, DuplicateIndex> {
        let mut seen = BTreeSet::new();
        for &(i, _) in &entries {
            if !seen.insert(i) {
                return Err(DuplicateIndex(i));
            }
        }
        let worlds = entries.iter().map(|&(_, w)| w).collect();
        Ok(MultiTeam { entries, worlds })
    }

    /// Indices `0..n` in the given order.
    pub fn from_worlds(worlds: &[usize]) -> Self {
        MultiTeam {
            entries: worlds.iter().copied().enumerate().collect(),
            worlds: worlds.to_vec(),
        }
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn worlds(&self) -> &[usize] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted worlds; equal for teams that agree up to re-indexing.
    pub fn multiset(&self) -> Vec<usize> {
        let mut m = self.worlds.clone();
        m.sort_unstable();
        m
    }

    /// Multiset equality (indices ignored).
    pub fn same_multiset(&self, other: &MultiTeam) -> bool {
        self.multiset() == other.multiset()
    }
}
