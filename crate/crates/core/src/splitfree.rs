//! Team model checking for splitjunction-free LTL.
//!
//! The synchronous successor sets `S_0 = {w_I}`, `S_{i+1} = R[S_i]` of a
//! structure eventually repeat, and the team of all its traces satisfies a
//! splitjunction-free formula iff the flattened trace of those sets satisfies
//! the formula with every `!p` replaced by the companion proposition `p̄`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::classical::check_ltl_classical_ext;
use crate::formula::{bar, Ltl};
use crate::kripke::KripkeStructure;
use crate::trace::{LassoTrace, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitfreeError {
    #[error("formula contains a splitjunction; use an enumerable structure instead")]
    SplitjunctionPresent,
    #[error("formula contains a generalised atom, which the flattened trace cannot evaluate")]
    GenAtomPresent,
    #[error("structure has no initial world")]
    NoInitial,
    #[error("resource cap exceeded: more than {0} distinct successor sets")]
    ResourceCap(usize),
}

pub const DEFAULT_MAX_STATES: usize = 1 << 20;

/// The flattened trace of a structure together with its successor sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenedTrace {
    pub trace: LassoTrace,
    /// Index of the first repeated successor set.
    pub s: usize,
    /// Period of the successor-set sequence.
    pub p: usize,
    /// `S_0 .. S_{s+p-1}`.
    pub sets: Vec<FixedBitSet>,
}

/// Flattens over the propositions labeling `k`.
pub fn flatten(k: &KripkeStructure) -> Result<FlattenedTrace, SplitfreeError> {
    flatten_with(k, &BTreeSet::new(), DEFAULT_MAX_STATES)
}

/// Flattens over the propositions of `k` plus `extra`.
pub fn flatten_with(
    k: &KripkeStructure,
    extra: &BTreeSet<String>,
    max_states: usize,
) -> Result<FlattenedTrace, SplitfreeError> {
    let init = k.initial().ok_or(SplitfreeError::NoInitial)?;
    let mut props = k.props();
    props.extend(extra.iter().cloned());

    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut sets = Vec::new();
    let mut cur = FixedBitSet::with_capacity(k.len());
    cur.insert(init);
    let s = loop {
        if let Some(&i) = seen.get(&cur) {
            break i;
        }
        if sets.len() >= max_states {
            return Err(SplitfreeError::ResourceCap(max_states));
        }
        seen.insert(cur.clone(), sets.len());
        let next = k.successor_sets_step(&cur);
        sets.push(cur);
        cur = next;
    };
    let p = sets.len() - s;

    let letters: Vec<Letter> = sets
        .iter()
        .map(|set| {
            let mut l = Letter::new();
            for q in &props {
                let labeled = set.ones().filter(|&w| k.has_label(w, q)).count();
                if labeled == set.count_ones(..) {
                    l.insert(q.clone());
                }
                if labeled == 0 {
                    l.insert(bar(q));
                }
            }
            l
        })
        .collect();
    let trace = LassoTrace::new(letters[..s].to_vec(), letters[s..].to_vec())
        .expect("period is at least one");
    Ok(FlattenedTrace { trace, s, p, sets })
}

/// Replaces every `!p` by `p̄`; rejects splitjunctions (other than `TOP`)
/// and generalised atoms.
pub fn bar_rewrite(f: &Ltl) -> Result<Ltl, SplitfreeError> {
    let flags = f.classify();
    if flags.uses_split {
        return Err(SplitfreeError::SplitjunctionPresent);
    }
    if flags.uses_genatoms {
        return Err(SplitfreeError::GenAtomPresent);
    }
    Ok(rewrite(f))
}

fn rewrite(f: &Ltl) -> Ltl {
    match f {
        Ltl::Prop(p) => Ltl::Prop(p.clone()),
        Ltl::NegProp(p) => Ltl::Prop(bar(p)),
        Ltl::And(l, r) => rewrite(l).and(rewrite(r)),
        Ltl::Split(l, r) => rewrite(l).split(rewrite(r)),
        Ltl::BoolOr(l, r) => rewrite(l).bool_or(rewrite(r)),
        Ltl::CNeg(c) => rewrite(c).cneg(),
        Ltl::Next(c) => rewrite(c).next(),
        Ltl::Until(l, r) => rewrite(l).until(rewrite(r)),
        Ltl::Release(l, r) => rewrite(l).release(rewrite(r)),
        Ltl::Atom(_) => unreachable!("rejected by bar_rewrite"),
    }
}

/// `T(K) ⊨ φ` for splitjunction-free `φ`.
pub fn check_model_splitfree(k: &KripkeStructure, f: &Ltl) -> Result<bool, SplitfreeError> {
    check_model_splitfree_capped(k, f, DEFAULT_MAX_STATES)
}

pub fn check_model_splitfree_capped(
    k: &KripkeStructure,
    f: &Ltl,
    max_states: usize,
) -> Result<bool, SplitfreeError> {
    let g = bar_rewrite(f)?;
    let flat = flatten_with(k, &f.props(), max_states)?;
    Ok(check_ltl_classical_ext(&flat.trace, &g).expect("rewritten formula is classical"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ltl;
    use crate::trace::letter;

    fn diamond() -> KripkeStructure {
        KripkeStructure::builder()
            .world("r", &[])
            .world("a", &["p"])
            .world("b", &[])
            .edges(&[("r", "a"), ("r", "b"), ("a", "a"), ("b", "b")])
            .initial("r")
            .build()
            .unwrap()
    }

    #[test]
    fn diamond_flattening() {
        let flat = flatten(&diamond()).unwrap();
        assert_eq!((flat.s, flat.p), (1, 1));
        assert_eq!(flat.trace.at(0), &letter(["_bar_p"]));
        assert_eq!(flat.trace.at(1), &Letter::new());
        assert!(!check_model_splitfree(&diamond(), &parse_ltl("G !p").unwrap()).unwrap());
        assert!(!check_model_splitfree(&diamond(), &parse_ltl("F p").unwrap()).unwrap());
        assert!(check_model_splitfree(&diamond(), &parse_ltl("!p").unwrap()).unwrap());
    }

    #[test]
    fn deterministic_structure() {
        let k = KripkeStructure::builder()
            .world("w", &["p"])
            .edge("w", "w")
            .initial("w")
            .build()
            .unwrap();
        let flat = flatten(&k).unwrap();
        assert_eq!(
            flat.trace,
            LassoTrace::periodic(vec![letter(["p"])]).unwrap()
        );
        assert!(check_model_splitfree(&k, &parse_ltl("G p").unwrap()).unwrap());
        assert!(!check_model_splitfree(&k, &parse_ltl("F q").unwrap()).unwrap());
        assert!(check_model_splitfree(&k, &parse_ltl("G !q").unwrap()).unwrap());
    }

    #[test]
    fn synchronous_eventually() {
        // every branch reaches p at depth 2
        let k = KripkeStructure::builder()
            .world("r", &[])
            .world("a", &[])
            .world("b", &[])
            .world("c", &["p"])
            .world("d", &["p"])
            .world("z", &[])
            .edges(&[
                ("r", "a"),
                ("r", "b"),
                ("a", "c"),
                ("b", "d"),
                ("b", "c"),
                ("c", "z"),
                ("d", "z"),
                ("z", "z"),
            ])
            .initial("r")
            .build()
            .unwrap();
        let mut s = FixedBitSet::with_capacity(k.len());
        s.insert(k.world("r").unwrap());
        let s2 = k.successor_sets_step(&k.successor_sets_step(&s));
        assert!(s2.ones().all(|w| k.has_label(w, "p")));
        assert!(check_model_splitfree(&k, &parse_ltl("F p").unwrap()).unwrap());
        assert!(check_model_splitfree(&k, &parse_ltl("X X p & ~X p").unwrap()).unwrap());
    }

    #[test]
    fn rejections() {
        let k = diamond();
        assert_eq!(
            check_model_splitfree(&k, &parse_ltl("p | q").unwrap()),
            Err(SplitfreeError::SplitjunctionPresent)
        );
        assert_eq!(
            check_model_splitfree(&k, &parse_ltl("dep(p)").unwrap()),
            Err(SplitfreeError::GenAtomPresent)
        );
        let no_init = KripkeStructure::builder()
            .world("w", &[])
            .edge("w", "w")
            .build()
            .unwrap();
        assert_eq!(
            check_model_splitfree(&no_init, &Ltl::prop("p")),
            Err(SplitfreeError::NoInitial)
        );
    }
}
