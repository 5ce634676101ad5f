//! Negation-normal-form syntax trees for team LTL and team CTL.
//!
//! Both logics share the same propositional core: literals, conjunction,
//! the team-splitting disjunction ([`Ltl::Split`]), the Boolean disjunction
//! ([`Ltl::BoolOr`]), contradictory negation ([`Ltl::CNeg`]) and generalised
//! atoms. Negation only ever sits on a proposition; `CNeg` is the one
//! exception and has meta-level semantics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Proposition used to spell out the constants `TOP` (`_taut | !_taut`) and
/// `BOT` (`_taut & !_taut`). It must never label a world or trace position.
pub const TAUT: &str = "_taut";

/// Name of the "unanimously false" companion proposition of `p`, used by the
/// flattened traces of splitjunction-free model checking and by the
/// assignment structures of the PL(~) reduction.
pub fn bar(p: &str) -> String {
    format!("_bar_{p}")
}

/// True for identifiers in the reserved `_` namespace.
pub fn is_reserved(name: &str) -> bool {
    name.starts_with('_')
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Built-in and user-defined generalised atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// `dep(p1..pn; q1..qm)`: the first `determiners` arguments functionally
    /// determine the rest. `dep(q)` is constancy.
    Dep { determiners: usize },
    /// `inc(p1..pn; q1..qn)`: every value tuple of the left half also occurs
    /// for the right half.
    Inc { width: usize },
    /// A user atom looked up by name in an [`AtomRegistry`].
    Custom(String),
}

/// Application of a generalised atom to formula parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenAtomApp<F> {
    pub kind: AtomKind,
    pub args: Vec<F>,
}

impl<F> GenAtomApp<F> {
    pub fn dep(determiners: Vec<F>, determined: Vec<F>) -> Self {
        let n = determiners.len();
        let mut args = determiners;
        args.extend(determined);
        GenAtomApp {
            kind: AtomKind::Dep { determiners: n },
            args,
        }
    }

    pub fn inc(left: Vec<F>, right: Vec<F>) -> Self {
        assert_eq!(
            left.len(),
            right.len(),
            "inclusion atom halves differ in width"
        );
        let width = left.len();
        let mut args = left;
        args.extend(right);
        GenAtomApp {
            kind: AtomKind::Inc { width },
            args,
        }
    }

    pub fn custom(name: impl Into<String>, args: Vec<F>) -> Self {
        GenAtomApp {
            kind: AtomKind::Custom(name.into()),
            args,
        }
    }
}

/// Team LTL in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    Prop(String),
    NegProp(String),
    And(Box<Ltl>, Box<Ltl>),
    /// Splitjunction: the team splits into two parts, one per disjunct.
    Split(Box<Ltl>, Box<Ltl>),
    /// Boolean disjunction: the whole team satisfies one of the disjuncts.
    BoolOr(Box<Ltl>, Box<Ltl>),
    /// Contradictory negation: the team does not satisfy the operand.
    CNeg(Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    Atom(GenAtomApp<Ltl>),
}

/// Team CTL in negation normal form; every temporal operator is quantified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ctl {
    Prop(String),
    NegProp(String),
    And(Box<Ctl>, Box<Ctl>),
    Split(Box<Ctl>, Box<Ctl>),
    BoolOr(Box<Ctl>, Box<Ctl>),
    CNeg(Box<Ctl>),
    EX(Box<Ctl>),
    AX(Box<Ctl>),
    EU(Box<Ctl>, Box<Ctl>),
    AU(Box<Ctl>, Box<Ctl>),
    ER(Box<Ctl>, Box<Ctl>),
    AR(Box<Ctl>, Box<Ctl>),
    /// Parameters are temporal-free.
    Atom(GenAtomApp<Ctl>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unknown shorthand `{0}`")]
    UnknownShorthand(String),
    #[error("shorthand `{name}` takes {expected} argument(s), got {got}")]
    ShorthandArity {
        name: String,
        expected: usize,
        got: usize,
    },
}

/// Syntactic features that drive the choice of evaluation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FragmentFlags {
    /// A splitjunction other than the `TOP` constant occurs.
    pub uses_split: bool,
    pub uses_cneg: bool,
    pub uses_boolor: bool,
    pub uses_genatoms: bool,
    /// No `~` and no generalised atom that may break downward closure.
    pub downward_closed_fragment: bool,
}

/// Uniform view of one node, shared by the LTL and CTL trees.
pub(crate) enum View<'a, F> {
    Literal,
    And(&'a F, &'a F),
    Split(&'a F, &'a F),
    BoolOr(&'a F, &'a F),
    CNeg(&'a F),
    Atom(&'a GenAtomApp<F>),
    /// Any temporal connective, with its operands.
    Temporal(Vec<&'a F>),
}

pub(crate) trait Syntax: Sized {
    fn view(&self) -> View<'_, Self>;
    fn is_top(&self) -> bool;
}

impl Syntax for Ltl {
    fn view(&self) -> View<'_, Self> {
        match self {
            Ltl::Prop(_) | Ltl::NegProp(_) => View::Literal,
            Ltl::And(l, r) => View::And(l, r),
            Ltl::Split(l, r) => View::Split(l, r),
            Ltl::BoolOr(l, r) => View::BoolOr(l, r),
            Ltl::CNeg(c) => View::CNeg(c),
            Ltl::Atom(a) => View::Atom(a),
            Ltl::Next(c) => View::Temporal(vec![c]),
            Ltl::Until(l, r) | Ltl::Release(l, r) => View::Temporal(vec![l, r]),
        }
    }

    fn is_top(&self) -> bool {
        Ltl::is_top(self)
    }
}

impl Syntax for Ctl {
    fn view(&self) -> View<'_, Self> {
        match self {
            Ctl::Prop(_) | Ctl::NegProp(_) => View::Literal,
            Ctl::And(l, r) => View::And(l, r),
            Ctl::Split(l, r) => View::Split(l, r),
            Ctl::BoolOr(l, r) => View::BoolOr(l, r),
            Ctl::CNeg(c) => View::CNeg(c),
            Ctl::Atom(a) => View::Atom(a),
            Ctl::EX(c) | Ctl::AX(c) => View::Temporal(vec![c]),
            Ctl::EU(l, r) | Ctl::AU(l, r) | Ctl::ER(l, r) | Ctl::AR(l, r) => {
                View::Temporal(vec![l, r])
            }
        }
    }

    fn is_top(&self) -> bool {
        Ctl::is_top(self)
    }
}

pub(crate) fn length_of<F: Syntax>(f: &F) -> usize {
    match f.view() {
        View::Literal => 0,
        View::And(l, r) | View::Split(l, r) | View::BoolOr(l, r) => 1 + length_of(l) + length_of(r),
        View::CNeg(c) => 1 + length_of(c),
        View::Atom(a) => 1 + a.args.iter().map(length_of).sum::<usize>(),
        View::Temporal(cs) => 1 + cs.into_iter().map(length_of).sum::<usize>(),
    }
}

/// Whether a generalised atom preserves downward closure.
pub(crate) fn atom_downward_closed(kind: &AtomKind, atoms: Option<&AtomRegistry>) -> bool {
    match kind {
        AtomKind::Dep { .. } => true,
        AtomKind::Inc { .. } => false,
        AtomKind::Custom(name) => atoms
            .and_then(|r| r.get(name))
            .is_some_and(|d| d.downward_closed),
    }
}

pub(crate) fn classify_of<F: Syntax>(f: &F, atoms: Option<&AtomRegistry>) -> FragmentFlags {
    fn walk<F: Syntax>(f: &F, atoms: Option<&AtomRegistry>, out: &mut FragmentFlags) {
        if f.is_top() {
            return;
        }
        match f.view() {
            View::Literal => {}
            View::And(l, r) => {
                walk(l, atoms, out);
                walk(r, atoms, out);
            }
            View::Split(l, r) => {
                out.uses_split = true;
                walk(l, atoms, out);
                walk(r, atoms, out);
            }
            View::BoolOr(l, r) => {
                out.uses_boolor = true;
                walk(l, atoms, out);
                walk(r, atoms, out);
            }
            View::CNeg(c) => {
                out.uses_cneg = true;
                out.downward_closed_fragment = false;
                walk(c, atoms, out);
            }
            View::Atom(a) => {
                out.uses_genatoms = true;
                if !atom_downward_closed(&a.kind, atoms) {
                    out.downward_closed_fragment = false;
                }
                for arg in &a.args {
                    walk(arg, atoms, out);
                }
            }
            View::Temporal(cs) => {
                for c in cs {
                    walk(c, atoms, out);
                }
            }
        }
    }
    let mut out = FragmentFlags {
        downward_closed_fragment: true,
        ..FragmentFlags::default()
    };
    walk(f, atoms, &mut out);
    out
}

/// Propositions occurring in a formula (including atom parameters).
pub(crate) fn props_of<F: Syntax + HasProp>(f: &F, out: &mut BTreeSet<String>) {
    if let Some(p) = f.prop_name() {
        out.insert(p.to_string());
        return;
    }
    match f.view() {
        View::Literal => {}
        View::And(l, r) | View::Split(l, r) | View::BoolOr(l, r) => {
            props_of(l, out);
            props_of(r, out);
        }
        View::CNeg(c) => props_of(c, out),
        View::Atom(a) => a.args.iter().for_each(|x| props_of(x, out)),
        View::Temporal(cs) => cs.into_iter().for_each(|x| props_of(x, out)),
    }
}

pub(crate) trait HasProp {
    fn prop_name(&self) -> Option<&str>;
}

impl HasProp for Ltl {
    fn prop_name(&self) -> Option<&str> {
        match self {
            Ltl::Prop(p) | Ltl::NegProp(p) => Some(p),
            _ => None,
        }
    }
}

impl HasProp for Ctl {
    fn prop_name(&self) -> Option<&str> {
        match self {
            Ctl::Prop(p) | Ctl::NegProp(p) => Some(p),
            _ => None,
        }
    }
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

impl Ltl {
    pub fn prop(p: impl Into<String>) -> Ltl {
        Ltl::Prop(p.into())
    }

    pub fn neg(p: impl Into<String>) -> Ltl {
        Ltl::NegProp(p.into())
    }

    /// `_taut | !_taut`
    pub fn top() -> Ltl {
        Ltl::Split(bx(Ltl::prop(TAUT)), bx(Ltl::neg(TAUT)))
    }

    /// `_taut & !_taut`
    pub fn bot() -> Ltl {
        Ltl::And(bx(Ltl::prop(TAUT)), bx(Ltl::neg(TAUT)))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Ltl::Split(l, r)
            if matches!(&**l, Ltl::Prop(p) if p == TAUT)
            && matches!(&**r, Ltl::NegProp(p) if p == TAUT))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Ltl::And(l, r)
            if matches!(&**l, Ltl::Prop(p) if p == TAUT)
            && matches!(&**r, Ltl::NegProp(p) if p == TAUT))
    }

    pub fn and(self, rhs: Ltl) -> Ltl {
        Ltl::And(bx(self), bx(rhs))
    }

    pub fn split(self, rhs: Ltl) -> Ltl {
        Ltl::Split(bx(self), bx(rhs))
    }

    pub fn bool_or(self, rhs: Ltl) -> Ltl {
        Ltl::BoolOr(bx(self), bx(rhs))
    }

    pub fn cneg(self) -> Ltl {
        Ltl::CNeg(bx(self))
    }

    pub fn next(self) -> Ltl {
        Ltl::Next(bx(self))
    }

    pub fn until(self, rhs: Ltl) -> Ltl {
        Ltl::Until(bx(self), bx(rhs))
    }

    pub fn release(self, rhs: Ltl) -> Ltl {
        Ltl::Release(bx(self), bx(rhs))
    }

    /// `F φ = TOP U φ`
    pub fn eventually(self) -> Ltl {
        Ltl::top().until(self)
    }

    /// `G φ = BOT R φ`
    pub fn always(self) -> Ltl {
        Ltl::bot().release(self)
    }

    /// Folds a non-empty list with the splitjunction, right-nested.
    pub fn split_all(items: impl IntoIterator<Item = Ltl>) -> Option<Ltl> {
        let mut items: Vec<Ltl> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(prev) = items.pop() {
            acc = prev.split(acc);
        }
        Some(acc)
    }

    /// Folds a non-empty list with conjunction, right-nested.
    pub fn and_all(items: impl IntoIterator<Item = Ltl>) -> Option<Ltl> {
        let mut items: Vec<Ltl> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(prev) = items.pop() {
            acc = prev.and(acc);
        }
        Some(acc)
    }

    /// Expands `TOP`, `BOT`, `F` and `G`.
    pub fn shorthand(name: &str, args: Vec<Ltl>) -> Result<Ltl, FormulaError> {
        let arity = match name {
            "TOP" | "BOT" => 0,
            "F" | "G" => 1,
            _ => return Err(FormulaError::UnknownShorthand(name.to_string())),
        };
        if args.len() != arity {
            return Err(FormulaError::ShorthandArity {
                name: name.to_string(),
                expected: arity,
                got: args.len(),
            });
        }
        let mut args = args.into_iter();
        Ok(match name {
            "TOP" => Ltl::top(),
            "BOT" => Ltl::bot(),
            "F" => args.next().unwrap().eventually(),
            _ => args.next().unwrap().always(),
        })
    }

    pub fn length(&self) -> usize {
        length_of(self)
    }

    /// Flags with custom atoms treated as not downward closed.
    pub fn classify(&self) -> FragmentFlags {
        classify_of(self, None)
    }

    pub fn classify_with(&self, atoms: &AtomRegistry) -> FragmentFlags {
        classify_of(self, Some(atoms))
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        props_of(self, &mut out);
        out
    }

    /// Pure classical grammar: literals, `&`, `|`, `X`, `U`, `R`.
    pub fn is_classical(&self) -> bool {
        match self {
            Ltl::Prop(_) | Ltl::NegProp(_) => true,
            Ltl::And(l, r) | Ltl::Split(l, r) | Ltl::Until(l, r) | Ltl::Release(l, r) => {
                l.is_classical() && r.is_classical()
            }
            Ltl::Next(c) => c.is_classical(),
            Ltl::BoolOr(..) | Ltl::CNeg(_) | Ltl::Atom(_) => false,
        }
    }

    /// Renders with `$`/`#` for the reduction markers; not reparseable.
    pub fn pretty(&self) -> String {
        crate::parser::prettify(&self.to_string())
    }
}

impl Ctl {
    pub fn prop(p: impl Into<String>) -> Ctl {
        Ctl::Prop(p.into())
    }

    pub fn neg(p: impl Into<String>) -> Ctl {
        Ctl::NegProp(p.into())
    }

    pub fn top() -> Ctl {
        Ctl::Split(bx(Ctl::prop(TAUT)), bx(Ctl::neg(TAUT)))
    }

    pub fn bot() -> Ctl {
        Ctl::And(bx(Ctl::prop(TAUT)), bx(Ctl::neg(TAUT)))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Ctl::Split(l, r)
            if matches!(&**l, Ctl::Prop(p) if p == TAUT)
            && matches!(&**r, Ctl::NegProp(p) if p == TAUT))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Ctl::And(l, r)
            if matches!(&**l, Ctl::Prop(p) if p == TAUT)
            && matches!(&**r, Ctl::NegProp(p) if p == TAUT))
    }

    pub fn and(self, rhs: Ctl) -> Ctl {
        Ctl::And(bx(self), bx(rhs))
    }

    pub fn split(self, rhs: Ctl) -> Ctl {
        Ctl::Split(bx(self), bx(rhs))
    }

    pub fn bool_or(self, rhs: Ctl) -> Ctl {
        Ctl::BoolOr(bx(self), bx(rhs))
    }

    pub fn cneg(self) -> Ctl {
        Ctl::CNeg(bx(self))
    }

    pub fn ex(self) -> Ctl {
        Ctl::EX(bx(self))
    }

    pub fn ax(self) -> Ctl {
        Ctl::AX(bx(self))
    }

    pub fn eu(self, rhs: Ctl) -> Ctl {
        Ctl::EU(bx(self), bx(rhs))
    }

    pub fn au(self, rhs: Ctl) -> Ctl {
        Ctl::AU(bx(self), bx(rhs))
    }

    pub fn er(self, rhs: Ctl) -> Ctl {
        Ctl::ER(bx(self), bx(rhs))
    }

    pub fn ar(self, rhs: Ctl) -> Ctl {
        Ctl::AR(bx(self), bx(rhs))
    }

    pub fn ef(self) -> Ctl {
        Ctl::top().eu(self)
    }

    pub fn af(self) -> Ctl {
        Ctl::top().au(self)
    }

    pub fn eg(self) -> Ctl {
        Ctl::bot().er(self)
    }

    pub fn ag(self) -> Ctl {
        Ctl::bot().ar(self)
    }

    pub fn and_all(items: impl IntoIterator<Item = Ctl>) -> Option<Ctl> {
        let mut items: Vec<Ctl> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(prev) = items.pop() {
            acc = prev.and(acc);
        }
        Some(acc)
    }

    /// Expands `TOP`, `BOT`, `EF`, `EG`, `AF` and `AG`.
    pub fn shorthand(name: &str, args: Vec<Ctl>) -> Result<Ctl, FormulaError> {
        let arity = match name {
            "TOP" | "BOT" => 0,
            "EF" | "EG" | "AF" | "AG" => 1,
            _ => return Err(FormulaError::UnknownShorthand(name.to_string())),
        };
        if args.len() != arity {
            return Err(FormulaError::ShorthandArity {
                name: name.to_string(),
                expected: arity,
                got: args.len(),
            });
        }
        let mut args = args.into_iter();
        Ok(match name {
            "TOP" => Ctl::top(),
            "BOT" => Ctl::bot(),
            "EF" => args.next().unwrap().ef(),
            "EG" => args.next().unwrap().eg(),
            "AF" => args.next().unwrap().af(),
            _ => args.next().unwrap().ag(),
        })
    }

    pub fn length(&self) -> usize {
        length_of(self)
    }

    pub fn classify(&self) -> FragmentFlags {
        classify_of(self, None)
    }

    pub fn classify_with(&self, atoms: &AtomRegistry) -> FragmentFlags {
        classify_of(self, Some(atoms))
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        props_of(self, &mut out);
        out
    }

    /// Plain CTL: literals, `&`, `|` and quantified temporal operators.
    pub fn is_classical(&self) -> bool {
        match self {
            Ctl::Prop(_) | Ctl::NegProp(_) => true,
            Ctl::And(l, r)
            | Ctl::Split(l, r)
            | Ctl::EU(l, r)
            | Ctl::AU(l, r)
            | Ctl::ER(l, r)
            | Ctl::AR(l, r) => l.is_classical() && r.is_classical(),
            Ctl::EX(c) | Ctl::AX(c) => c.is_classical(),
            Ctl::BoolOr(..) | Ctl::CNeg(_) | Ctl::Atom(_) => false,
        }
    }

    /// No temporal operator anywhere, atom parameters included.
    pub fn is_temporal_free(&self) -> bool {
        match self {
            Ctl::Prop(_) | Ctl::NegProp(_) => true,
            Ctl::And(l, r) | Ctl::Split(l, r) | Ctl::BoolOr(l, r) => {
                l.is_temporal_free() && r.is_temporal_free()
            }
            Ctl::CNeg(c) => c.is_temporal_free(),
            Ctl::Atom(a) => a.args.iter().all(Ctl::is_temporal_free),
            _ => false,
        }
    }

    pub fn pretty(&self) -> String {
        crate::parser::prettify(&self.to_string())
    }
}

/// The finite relational structure induced by a team on the parameters of a
/// generalised atom: one row per team member (repeated for multiset
/// members), one column per parameter.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AtomStructure {
    pub rows: Vec<Vec<bool>>,
}

impl AtomStructure {
    pub fn new(rows: Vec<Vec<bool>>) -> Self {
        AtomStructure { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether element `elem` is in predicate `A_pred`.
    pub fn holds(&self, elem: usize, pred: usize) -> bool {
        self.rows[elem][pred]
    }
}

/// `dep(x1..xn; y1..ym)` over the columns of `s`.
pub fn dep_holds(s: &AtomStructure, determiners: usize) -> bool {
    let mut seen: HashMap<&[bool], &[bool]> = HashMap::new();
    for row in &s.rows {
        let (key, val) = row.split_at(determiners);
        match seen.get(key) {
            Some(prev) if *prev != val => return false,
            Some(_) => {}
            None => {
                seen.insert(key, val);
            }
        }
    }
    true
}

/// `(x1..xn) ⊆ (y1..yn)` over the columns of `s`.
pub fn inc_holds(s: &AtomStructure, width: usize) -> bool {
    let right: BTreeSet<&[bool]> = s.rows.iter().map(|r| &r[width..2 * width]).collect();
    s.rows.iter().all(|r| right.contains(&r[..width]))
}

pub type AtomEvaluator = Arc<dyn Fn(&AtomStructure) -> bool + Send + Sync>;

/// A user generalised atom: a decision procedure over [`AtomStructure`]s.
#[derive(Clone)]
pub struct GenAtomDef {
    pub name: String,
    pub arity: usize,
    /// Declares that satisfaction is preserved under sub-teams; enables the
    /// cheaper disjoint-split enumeration.
    pub downward_closed: bool,
    pub evaluator: AtomEvaluator,
}

impl GenAtomDef {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        downward_closed: bool,
        evaluator: impl Fn(&AtomStructure) -> bool + Send + Sync + 'static,
    ) -> Self {
        GenAtomDef {
            name: name.into(),
            arity,
            downward_closed,
            evaluator: Arc::new(evaluator),
        }
    }
}

impl fmt::Debug for GenAtomDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenAtomDef")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("downward_closed", &self.downward_closed)
            .finish_non_exhaustive()
    }
}

/// Registered user atoms. `dep` and `inc` are built in and need no entry.
#[derive(Debug, Clone, Default)]
pub struct AtomRegistry {
    defs: HashMap<String, GenAtomDef>,
}

impl AtomRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, def: GenAtomDef) -> &mut Self {
        self.defs.insert(def.name.clone(), def);
        self
    }

    pub fn get(&self, name: &str) -> Option<&GenAtomDef> {
        self.defs.get(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("unknown generalised atom `{0}`")]
    Unknown(String),
    #[error("atom `{name}` expects {expected} parameter(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
}

/// Decides an atom application on an already-built structure.
pub fn eval_atom(
    kind: &AtomKind,
    structure: &AtomStructure,
    atoms: &AtomRegistry,
) -> Result<bool, AtomError> {
    match kind {
        AtomKind::Dep { determiners } => Ok(dep_holds(structure, *determiners)),
        AtomKind::Inc { width } => Ok(inc_holds(structure, *width)),
        AtomKind::Custom(name) => {
            let def = atoms
                .get(name)
                .ok_or_else(|| AtomError::Unknown(name.clone()))?;
            Ok((def.evaluator)(structure))
        }
    }
}

/// Checks the parameter count of an application against its atom.
pub fn check_atom_arity(
    kind: &AtomKind,
    args: usize,
    atoms: &AtomRegistry,
) -> Result<(), AtomError> {
    let (name, expected) = match kind {
        AtomKind::Dep { determiners } => {
            if args > *determiners {
                return Ok(());
            }
            ("dep".to_string(), determiners + 1)
        }
        AtomKind::Inc { width } => ("inc".to_string(), 2 * width),
        AtomKind::Custom(name) => {
            let def = atoms
                .get(name)
                .ok_or_else(|| AtomError::Unknown(name.clone()))?;
            (name.clone(), def.arity)
        }
    };
    if args == expected {
        Ok(())
    } else {
        Err(AtomError::Arity {
            name,
            expected,
            got: args,
        })
    }
}
