//! Ultimately periodic traces `prefix · loop^ω` and finite teams of them.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// The set of propositions true at one position.
pub type Letter = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("the loop of a lasso trace must be non-empty")]
    EmptyLoop,
}

/// A lasso-shaped encoding of the ω-word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoTrace {
    prefix: Vec<Letter>,
    lp: Vec<Letter>,
}

/// Builds a letter from proposition names.
pub fn letter<I, S>(props: I) -> Letter
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    props.into_iter().map(Into::into).collect()
}

impl LassoTrace {
    pub fn new(prefix: Vec<Letter>, lp: Vec<Letter>) -> Result<Self, TraceError> {
        if lp.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, lp })
    }

    /// Pure loop trace `(ε, lp)`.
    pub fn periodic(lp: Vec<Letter>) -> Result<Self, TraceError> {
        Self::new(Vec::new(), lp)
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn lp(&self) -> &[Letter] {
        &self.lp
    }

    /// Position `i` of the denoted ω-word.
    pub fn at(&self, i: usize) -> &Letter {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.lp[(i - self.prefix.len()) % self.lp.len()]
        }
    }

    /// One step: drop the head of the prefix, or rotate the loop when the
    /// prefix is empty.
    pub fn step(&self) -> LassoTrace {
        if self.prefix.is_empty() {
            let mut lp = self.lp.clone();
            lp.rotate_left(1);
            LassoTrace {
                prefix: Vec::new(),
                lp,
            }
        } else {
            LassoTrace {
                prefix: self.prefix[1..].to_vec(),
                lp: self.lp.clone(),
            }
        }
    }

    /// The encoding of `t[i, ∞)`.
    pub fn suffix(&self, i: usize) -> LassoTrace {
        if i <= self.prefix.len() {
            return LassoTrace {
                prefix: self.prefix[i..].to_vec(),
                lp: self.lp.clone(),
            };
        }
        let mut lp = self.lp.clone();
        let r = (i - self.prefix.len()) % lp.len();
        lp.rotate_left(r);
        LassoTrace {
            prefix: Vec::new(),
            lp,
        }
    }

    /// The unique shortest encoding of the same ω-word: primitive loop and
    /// fully folded prefix.
    pub fn canonicalize(&self) -> LassoTrace {
        let mut lp = self.lp.clone();
        let n = lp.len();
        if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| lp[i] == lp[i - d]))
        {
            lp.truncate(d);
        }
        let mut prefix = self.prefix.clone();
        while prefix.last().is_some_and(|l| l == lp.last().unwrap()) {
            prefix.pop();
            lp.rotate_right(1);
        }
        LassoTrace { prefix, lp }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// All propositions occurring somewhere on the trace.
    pub fn props(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(&self.lp)
            .flat_map(|l| l.iter().cloned())
            .collect()
    }
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |f: &mut fmt::Formatter<'_>, xs: &[Letter]| -> fmt::Result {
            for l in xs {
                write!(f, "{{")?;
                for (i, p) in l.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")?;
            }
            Ok(())
        };
        word(f, &self.prefix)?;
        write!(f, "(")?;
        word(f, &self.lp)?;
        write!(f, ")^w")
    }
}

/// A finite set of ultimately periodic traces, stored in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TeamEncoding {
    traces: BTreeSet<LassoTrace>,
}

impl TeamEncoding {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts the canonical form; returns false if the trace was present.
    pub fn insert(&mut self, t: &LassoTrace) -> bool {
        self.traces.insert(t.canonicalize())
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LassoTrace> {
        self.traces.iter()
    }

    pub fn contains(&self, t: &LassoTrace) -> bool {
        self.traces.contains(&t.canonicalize())
    }

    /// `T[i, ∞)`
    pub fn suffix(&self, i: usize) -> TeamEncoding {
        self.traces.iter().map(|t| t.suffix(i)).collect()
    }

    /// Longest prefix in the team (0 when empty).
    pub fn prfx(&self) -> usize {
        self.traces
            .iter()
            .map(|t| t.prefix.len())
            .max()
            .unwrap_or(0)
    }

    /// Least common multiple of the loop lengths (1 when empty).
    pub fn lcm_loop(&self) -> usize {
        self.traces.iter().fold(1, |acc, t| lcm(acc, t.lp.len()))
    }

    pub fn is_subset(&self, other: &TeamEncoding) -> bool {
        self.traces.is_subset(&other.traces)
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.traces.iter().flat_map(|t| t.props()).collect()
    }
}

impl FromIterator<LassoTrace> for TeamEncoding {
    fn from_iter<I: IntoIterator<Item = LassoTrace>>(iter: I) -> Self {
        TeamEncoding {
            traces: iter.into_iter().map(|t| t.canonicalize()).collect(),
        }
    }
}

impl<'a> IntoIterator for &'a TeamEncoding {
    type Item = &'a LassoTrace;
    type IntoIter = std::collections::btree_set::Iter<'a, LassoTrace>;

    fn into_iter(self) -> Self::IntoIter {
        self.traces.iter()
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(props: &[&str]) -> Letter {
        letter(props.iter().copied())
    }

    fn e() -> Letter {
        Letter::new()
    }

    #[test]
    fn at_examples() {
        let t = LassoTrace::new(vec![l(&["p"])], vec![e()]).unwrap();
        assert_eq!(t.at(0), &l(&["p"]));
        let t = LassoTrace::periodic(vec![l(&["p"]), e()]).unwrap();
        assert_eq!(t.at(3), &e());
        let t = LassoTrace::new(vec![e(), e()], vec![l(&["q"])]).unwrap();
        assert_eq!(t.at(5), &l(&["q"]));
    }

    #[test]
    fn suffix_examples() {
        let (a, b, c) = (l(&["a"]), l(&["b"]), l(&["c"]));
        let t = LassoTrace::periodic(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(
            t.suffix(1),
            LassoTrace::periodic(vec![b.clone(), c.clone(), a.clone()]).unwrap()
        );
        assert_eq!(t.step(), t.suffix(1));
        let t = LassoTrace::new(vec![a.clone(), b.clone()], vec![c.clone()]).unwrap();
        assert_eq!(t.suffix(2), LassoTrace::periodic(vec![c]).unwrap());
        assert_eq!(t.suffix(0), t);
    }

    #[test]
    fn empty_loop_rejected() {
        assert_eq!(
            LassoTrace::new(vec![e()], vec![]),
            Err(TraceError::EmptyLoop)
        );
    }

    #[test]
    fn canonical_examples() {
        let (a, b) = (l(&["a"]), l(&["b"]));
        let t = LassoTrace::periodic(vec![a.clone(), b.clone(), a.clone(), b.clone()]).unwrap();
        assert_eq!(
            t.canonicalize(),
            LassoTrace::periodic(vec![a.clone(), b.clone()]).unwrap()
        );
        let t = LassoTrace::new(vec![a.clone()], vec![b.clone(), a.clone()]).unwrap();
        assert_eq!(
            t.canonicalize(),
            LassoTrace::periodic(vec![a.clone(), b.clone()]).unwrap()
        );
        let x = LassoTrace::periodic(vec![a.clone()]).unwrap();
        let y = LassoTrace::new(vec![a.clone(), a.clone()], vec![a]).unwrap();
        assert_eq!(x.canonicalize(), y.canonicalize());
    }

    #[test]
    fn team_examples() {
        let p = l(&["p"]);
        let t1 = LassoTrace::periodic(vec![p.clone(), e()]).unwrap();
        let t2 = LassoTrace::periodic(vec![e(), p.clone()]).unwrap();
        let team: TeamEncoding = [t1, t2].into_iter().collect();
        assert_eq!(team.suffix(1), team);
        assert_eq!(TeamEncoding::new().suffix(4), TeamEncoding::new());
        let single: TeamEncoding = [LassoTrace::new(vec![p], vec![e()]).unwrap()]
            .into_iter()
            .collect();
        let expect: TeamEncoding = [LassoTrace::periodic(vec![e()]).unwrap()]
            .into_iter()
            .collect();
        assert_eq!(single.suffix(1), expect);
    }

    #[test]
    fn prfx_and_lcm() {
        let t1 = LassoTrace::new(vec![l(&["a"])], vec![e(), l(&["b"])]).unwrap();
        let t2 = LassoTrace::new(
            vec![l(&["a"]), e(), l(&["b"]), l(&["a"])],
            vec![e(), l(&["b"]), l(&["c"])],
        )
        .unwrap();
        let team: TeamEncoding = [t1, t2].into_iter().collect();
        assert_eq!((team.prfx(), team.lcm_loop()), (4, 6));
        let five: TeamEncoding =
            [
                LassoTrace::periodic((0..5).map(|i| l(&[["a", "b", "c", "d", "e"][i]])).collect())
                    .unwrap(),
            ]
            .into_iter()
            .collect();
        assert_eq!((five.prfx(), five.lcm_loop()), (0, 5));
        let empty = TeamEncoding::new();
        assert_eq!((empty.prfx(), empty.lcm_loop()), (0, 1));
    }
}
