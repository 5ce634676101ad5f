//! Classical semantics: LTL on a single lasso trace and CTL on pointed
//! Kripke structures, both by fixpoint labeling of the finitely many
//! distinct positions.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formula::{Ctl, Ltl};
use crate::kripke::{KripkeError, KripkeStructure, MultiTeam};
use crate::trace::LassoTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("{0} has no classical semantics here")]
    Unsupported(&'static str),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// Which non-classical nodes may be interpreted classically.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extensions {
    /// `~` as negation and `\|/` as disjunction.
    pub boolean: bool,
}

/// Truth values at the `|prefix| + |loop|` distinct positions of `t`.
pub(crate) fn label_ltl(
    t: &LassoTrace,
    f: &Ltl,
    ext: Extensions,
) -> Result<FixedBitSet, ClassicalError> {
    let pre = t.prefix().len();
    let n = pre + t.lp().len();
    let next = |i: usize| if i + 1 < n { i + 1 } else { pre };
    let full = || {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        s
    };
    Ok(match f {
        Ltl::Prop(p) => (0..n).filter(|&i| t.at(i).contains(p)).collect_with(n),
        Ltl::NegProp(p) => (0..n).filter(|&i| !t.at(i).contains(p)).collect_with(n),
        Ltl::And(l, r) => {
            let mut a = label_ltl(t, l, ext)?;
            a.intersect_with(&label_ltl(t, r, ext)?);
            a
        }
        Ltl::Split(l, r) => {
            let mut a = label_ltl(t, l, ext)?;
            a.union_with(&label_ltl(t, r, ext)?);
            a
        }
        Ltl::BoolOr(l, r) if ext.boolean => {
            let mut a = label_ltl(t, l, ext)?;
            a.union_with(&label_ltl(t, r, ext)?);
            a
        }
        Ltl::CNeg(c) if ext.boolean => {
            let mut a = label_ltl(t, c, ext)?;
            a.toggle_range(..);
            a
        }
        Ltl::Next(c) => {
            let a = label_ltl(t, c, ext)?;
            (0..n).filter(|&i| a.contains(next(i))).collect_with(n)
        }
        Ltl::Until(l, r) => {
            let (a, b) = (label_ltl(t, l, ext)?, label_ltl(t, r, ext)?);
            let mut z = FixedBitSet::with_capacity(n);
            loop {
                let nz = (0..n)
                    .filter(|&i| b.contains(i) || (a.contains(i) && z.contains(next(i))))
                    .collect_with(n);
                if nz == z {
                    break z;
                }
                z = nz;
            }
        }
        Ltl::Release(l, r) => {
            let (a, b) = (label_ltl(t, l, ext)?, label_ltl(t, r, ext)?);
            let mut z = full();
            loop {
                let nz = (0..n)
                    .filter(|&i| b.contains(i) && (a.contains(i) || z.contains(next(i))))
                    .collect_with(n);
                if nz == z {
                    break z;
                }
                z = nz;
            }
        }
        Ltl::BoolOr(..) => return Err(ClassicalError::Unsupported("Boolean disjunction")),
        Ltl::CNeg(_) => return Err(ClassicalError::Unsupported("contradictory negation")),
        Ltl::Atom(_) => return Err(ClassicalError::Unsupported("a generalised atom")),
    })
}

trait CollectWith {
    fn collect_with(self, n: usize) -> FixedBitSet;
}

impl<I: Iterator<Item = usize>> CollectWith for I {
    fn collect_with(self, n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(self);
        s
    }
}

/// `t ⊨ φ` for a formula of the plain LTL grammar (`|` read as `∨`).
pub fn check_ltl_classical(t: &LassoTrace, f: &Ltl) -> Result<bool, ClassicalError> {
    Ok(label_ltl(t, f, Extensions { boolean: false })?.contains(0))
}

/// Like [`check_ltl_classical`] but with `~` and `\|/` read classically.
pub fn check_ltl_classical_ext(t: &LassoTrace, f: &Ltl) -> Result<bool, ClassicalError> {
    Ok(label_ltl(t, f, Extensions { boolean: true })?.contains(0))
}

/// The set of worlds satisfying a plain CTL formula.
pub fn label_ctl(k: &KripkeStructure, f: &Ctl) -> Result<FixedBitSet, ClassicalError> {
    let n = k.len();
    let pre_e = |z: &FixedBitSet| -> FixedBitSet {
        (0..n)
            .filter(|&w| k.succ(w).iter().any(|&v| z.contains(v)))
            .collect_with(n)
    };
    let pre_a = |z: &FixedBitSet| -> FixedBitSet {
        (0..n)
            .filter(|&w| k.succ(w).iter().all(|&v| z.contains(v)))
            .collect_with(n)
    };
    let lfp = |a: &FixedBitSet, b: &FixedBitSet, pre: &dyn Fn(&FixedBitSet) -> FixedBitSet| {
        let mut z = FixedBitSet::with_capacity(n);
        loop {
            let mut nz = pre(&z);
            nz.intersect_with(a);
            nz.union_with(b);
            if nz == z {
                return z;
            }
            z = nz;
        }
    };
    let gfp = |a: &FixedBitSet, b: &FixedBitSet, pre: &dyn Fn(&FixedBitSet) -> FixedBitSet| {
        let mut z = FixedBitSet::with_capacity(n);
        z.insert_range(..);
        loop {
            let mut nz = pre(&z);
            nz.union_with(a);
            nz.intersect_with(b);
            if nz == z {
                return z;
            }
            z = nz;
        }
    };
    Ok(match f {
        Ctl::Prop(p) => (0..n).filter(|&w| k.has_label(w, p)).collect_with(n),
        Ctl::NegProp(p) => (0..n).filter(|&w| !k.has_label(w, p)).collect_with(n),
        Ctl::And(l, r) => {
            let mut a = label_ctl(k, l)?;
            a.intersect_with(&label_ctl(k, r)?);
            a
        }
        Ctl::Split(l, r) => {
            let mut a = label_ctl(k, l)?;
            a.union_with(&label_ctl(k, r)?);
            a
        }
        Ctl::EX(c) => pre_e(&label_ctl(k, c)?),
        Ctl::AX(c) => pre_a(&label_ctl(k, c)?),
        Ctl::EU(l, r) => lfp(&label_ctl(k, l)?, &label_ctl(k, r)?, &pre_e),
        Ctl::AU(l, r) => lfp(&label_ctl(k, l)?, &label_ctl(k, r)?, &pre_a),
        Ctl::ER(l, r) => gfp(&label_ctl(k, l)?, &label_ctl(k, r)?, &pre_e),
        Ctl::AR(l, r) => gfp(&label_ctl(k, l)?, &label_ctl(k, r)?, &pre_a),
        Ctl::BoolOr(..) => return Err(ClassicalError::Unsupported("Boolean disjunction")),
        Ctl::CNeg(_) => return Err(ClassicalError::Unsupported("contradictory negation")),
        Ctl::Atom(_) => return Err(ClassicalError::Unsupported("a generalised atom")),
    })
}

/// `K, w ⊨ φ` for a plain CTL formula.
pub fn check_ctl_classical(k: &KripkeStructure, w: usize, f: &Ctl) -> Result<bool, ClassicalError> {
    if w >= k.len() {
        return Err(KripkeError::WorldOutOfRange(w).into());
    }
    Ok(label_ctl(k, f)?.contains(w))
}

/// Classical lift to multiteams: every member satisfies `φ`.
pub fn check_ctl_classical_multiset(
    k: &KripkeStructure,
    team: &MultiTeam,
    f: &Ctl,
) -> Result<bool, ClassicalError> {
    if let Some(&w) = team.worlds().iter().find(|&&w| w >= k.len()) {
        return Err(KripkeError::WorldOutOfRange(w).into());
    }
    let sat = label_ctl(k, f)?;
    Ok(team.worlds().iter().all(|&w| sat.contains(w)))
}
