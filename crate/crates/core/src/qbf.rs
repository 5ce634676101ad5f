//! Quantified Boolean formulas and the hardness reductions built from them.
//!
//! All three reductions are used as end-to-end tests: evaluating the
//! produced instance must agree with brute-force evaluation of the input.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{bar, is_identifier, is_reserved, Ctl, Ltl, TAUT};
use crate::kripke::{KripkeError, KripkeStructure, MultiTeam};
use crate::trace::{LassoTrace, Letter, TeamEncoding};

pub const MAX_EVAL_VARS: usize = 20;
pub const MAX_PLSIM_VARS: usize = 10;

/// Dollar marker proposition, printed as `$`.
pub const DOLLAR: &str = "_d";
/// Hash marker proposition, printed as `#`.
pub const HASH: &str = "_h";

pub fn var_prop(i: usize) -> String {
    format!("_x{i}")
}

pub fn quant_prop(i: usize) -> String {
    format!("_q{i}")
}

pub fn clause_prop(j: usize) -> String {
    format!("_c{j}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("quantifier after the matrix on line {0}; input must be prenex")]
    NotPrenex(usize),
    #[error("variable `{0}` is quantified twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` is not quantified")]
    FreeVariable(String),
    #[error("clause {0} has {1} literals; at most three are supported")]
    ClauseTooWide(usize, usize),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("size cap exceeded: {0}")]
    TooLarge(String),
    #[error("formula must be propositional: no temporal operators or atoms")]
    NotPropositional,
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }

    fn flip(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// A prenex CNF formula as written, before normalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexQbf {
    pub prefix: Vec<(Quantifier, String)>,
    /// Literals as `(variable, positive)`.
    pub clauses: Vec<Vec<(String, bool)>>,
}

impl PrenexQbf {
    /// Parses the line format: `exists x1 [x2 ...]` / `forall ...` lines,
    /// then one clause per line with `-` marking negation. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<PrenexQbf, QbfError> {
        let mut prefix = Vec::new();
        let mut clauses = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let first = words.next().expect("line is not blank");
            let quant = match first {
                "exists" => Some(Quantifier::Exists),
                "forall" => Some(Quantifier::Forall),
                _ => None,
            };
            if let Some(q) = quant {
                if !clauses.is_empty() {
                    return Err(QbfError::NotPrenex(line_no));
                }
                let mut any = false;
                for v in words {
                    check_var(v, line_no)?;
                    prefix.push((q, v.to_string()));
                    any = true;
                }
                if !any {
                    return Err(QbfError::Syntax {
                        line: line_no,
                        message: format!("`{first}` needs at least one variable"),
                    });
                }
                continue;
            }
            let mut clause = Vec::new();
            for lit in line.split_whitespace() {
                let (v, pos) = match lit.strip_prefix('-') {
                    Some(v) => (v, false),
                    None => (lit, true),
                };
                check_var(v, line_no)?;
                clause.push((v.to_string(), pos));
            }
            clauses.push(clause);
        }
        Ok(PrenexQbf { prefix, clauses })
    }
}

fn check_var(v: &str, line: usize) -> Result<(), QbfError> {
    if !is_identifier(v) || is_reserved(v) {
        return Err(QbfError::Syntax {
            line,
            message: format!("`{v}` is not a valid variable name"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

/// Strictly alternating `∃x_1 ∀x_2 …` over a 3CNF matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfInstance {
    names: Vec<String>,
    clauses: Vec<[Literal; 3]>,
}

impl QbfInstance {
    pub fn new(names: Vec<String>, clauses: Vec<[Literal; 3]>) -> Result<Self, QbfError> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(QbfError::DuplicateVariable(n.clone()));
            }
        }
        for c in &clauses {
            for l in c {
                if l.var >= names.len() {
                    return Err(QbfError::FreeVariable(format!("#{}", l.var + 1)));
                }
            }
        }
        Ok(QbfInstance { names, clauses })
    }

    /// Variables named `x1..xn`.
    pub fn anonymous(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, QbfError> {
        QbfInstance::new((1..=n).map(|i| format!("x{i}")).collect(), clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Quantifier of the 0-based variable `i`.
    pub fn quantifier(&self, i: usize) -> Quantifier {
        if i.is_multiple_of(2) {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        }
    }
}

impl fmt::Display for QbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.names.iter().enumerate() {
            writeln!(f, "{} {n}", self.quantifier(i).keyword())?;
        }
        for c in &self.clauses {
            let lits: Vec<String> = c
                .iter()
                .map(|l| format!("{}{}", if l.positive { "" } else { "-" }, self.names[l.var]))
                .collect();
            writeln!(f, "{}", lits.join(" "))?;
        }
        Ok(())
    }
}

/// What normalisation changed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeReport {
    pub padded_clauses: Vec<usize>,
    pub dummies: Vec<String>,
}

impl NormalizeReport {
    pub fn is_empty(&self) -> bool {
        self.padded_clauses.is_empty() && self.dummies.is_empty()
    }
}

/// Pads clauses to width three by repeating their last literal and inserts
/// unused variables so that quantifiers alternate starting with `∃`.
pub fn normalize_qbf(q: &PrenexQbf) -> Result<(QbfInstance, NormalizeReport), QbfError> {
    let mut report = NormalizeReport::default();
    let mut used: BTreeSet<&str> = BTreeSet::new();
    for (_, v) in &q.prefix {
        if !used.insert(v) {
            return Err(QbfError::DuplicateVariable(v.clone()));
        }
    }
    let mut fresh_counter = 0;
    let mut fresh = |report: &mut NormalizeReport| loop {
        fresh_counter += 1;
        let name = format!("d{fresh_counter}");
        if !used.contains(name.as_str()) {
            report.dummies.push(name.clone());
            return name;
        }
    };

    let mut names = Vec::new();
    let mut expected = Quantifier::Exists;
    for (quant, v) in &q.prefix {
        if *quant != expected {
            names.push(fresh(&mut report));
            expected = expected.flip();
        }
        names.push(v.clone());
        expected = expected.flip();
    }

    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut clauses = Vec::new();
    for (j, c) in q.clauses.iter().enumerate() {
        if c.is_empty() {
            return Err(QbfError::EmptyClause(j + 1));
        }
        if c.len() > 3 {
            return Err(QbfError::ClauseTooWide(j + 1, c.len()));
        }
        if c.len() < 3 {
            report.padded_clauses.push(j + 1);
        }
        let mut lits = Vec::new();
        for (v, positive) in c {
            let var = *index
                .get(v.as_str())
                .ok_or_else(|| QbfError::FreeVariable(v.clone()))?;
            lits.push(Literal {
                var,
                positive: *positive,
            });
        }
        while lits.len() < 3 {
            lits.push(*lits.last().expect("clause is non-empty"));
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    Ok((QbfInstance::new(names, clauses)?, report))
}

/// Brute-force game evaluation.
pub fn eval_qbf(q: &QbfInstance) -> Result<bool, QbfError> {
    if q.num_vars() > MAX_EVAL_VARS {
        return Err(QbfError::TooLarge(format!(
            "{} variables exceed {MAX_EVAL_VARS}",
            q.num_vars()
        )));
    }
    Ok(eval_from(q, 0, 0))
}

fn eval_from(q: &QbfInstance, i: usize, assignment: u32) -> bool {
    if i == q.num_vars() {
        return q.clauses.iter().all(|c| {
            c.iter()
                .any(|l| (assignment >> l.var & 1 == 1) == l.positive)
        });
    }
    let lo = eval_from(q, i + 1, assignment);
    let hi = eval_from(q, i + 1, assignment | 1 << i);
    match q.quantifier(i) {
        Quantifier::Exists => lo || hi,
        Quantifier::Forall => lo && hi,
    }
}

fn pure_loop(letters: Vec<Vec<&str>>) -> LassoTrace {
    let lp: Vec<Letter> = letters
        .into_iter()
        .map(|l| l.into_iter().map(str::to_string).collect())
        .collect();
    LassoTrace::periodic(lp).expect("gadget loops are non-empty")
}

/// Team of traces and formula whose satisfaction mirrors the validity of `q`.
pub fn reduce_to_tpc(q: &QbfInstance) -> (TeamEncoding, Ltl) {
    let n = q.num_vars();
    let mut team = TeamEncoding::new();
    for i in 1..=n {
        let (x, qi) = (var_prop(i), quant_prop(i));
        if q.quantifier(i - 1) == Quantifier::Forall {
            team.insert(&pure_loop(vec![
                vec![],
                vec![&qi, DOLLAR],
                vec![DOLLAR],
                vec![],
                vec![DOLLAR],
                vec![&qi, DOLLAR, HASH],
            ]));
        }
        team.insert(&pure_loop(vec![
            vec![],
            vec![&x, &qi, DOLLAR],
            vec![DOLLAR, HASH],
        ]));
        team.insert(&pure_loop(vec![
            vec![],
            vec![DOLLAR],
            vec![&x, &qi, DOLLAR, HASH],
        ]));
    }
    for (j, clause) in q.clauses.iter().enumerate() {
        let c = clause_prop(j + 1);
        for (k, lit) in clause.iter().enumerate() {
            let x = var_prop(lit.var + 1);
            let mut letters = if lit.positive {
                vec![vec![], vec![x.as_str(), DOLLAR], vec![DOLLAR, HASH]]
            } else {
                vec![vec![], vec![DOLLAR], vec![x.as_str(), DOLLAR, HASH]]
            };
            for (pos, l) in letters.iter_mut().enumerate() {
                if pos != k {
                    l.push(&c);
                }
            }
            team.insert(&pure_loop(letters));
        }
    }

    let matrix = Ltl::split_all(
        (1..=n)
            .map(|i| Ltl::prop(var_prop(i)).eventually())
            .chain((1..=q.clauses.len()).map(|j| Ltl::prop(clause_prop(j)).eventually())),
    )
    .unwrap_or_else(Ltl::bot);
    let mut f = matrix;
    for i in (1..=n).rev() {
        f = match q.quantifier(i - 1) {
            Quantifier::Exists => Ltl::prop(quant_prop(i)).eventually().split(f),
            Quantifier::Forall => {
                let choose = Ltl::neg(quant_prop(i)).until(Ltl::prop(quant_prop(i)));
                let cont = Ltl::prop(HASH).and(f.next()).eventually();
                Ltl::prop(DOLLAR)
                    .split(choose)
                    .split(cont)
                    .until(Ltl::prop(HASH))
            }
        };
    }
    (team, f)
}

/// Variable-gadget world names.
fn xw(i: usize, j: usize) -> String {
    format!("x{i}_{j}")
}

fn xwa(i: usize, j: usize, a: usize) -> String {
    format!("x{i}_{j}_{a}")
}

/// Structure, team and formula whose satisfaction mirrors the validity of
/// `q`. Worlds unreachable from the team are left out.
pub fn reduce_to_tmc_ctl(q: &QbfInstance) -> Result<(KripkeStructure, MultiTeam, Ctl), QbfError> {
    let n = q.num_vars();
    let all: Vec<String> = (1..=n).map(var_prop).collect();
    let all_but = |i: usize| -> Vec<&str> {
        all.iter()
            .enumerate()
            .filter(|&(k, _)| k + 1 != i)
            .map(|(_, s)| s.as_str())
            .collect()
    };
    let all_refs: Vec<&str> = all.iter().map(String::as_str).collect();

    let mut b = KripkeStructure::builder();
    for i in 1..=n {
        for j in 1..=i {
            b = b.world(&xw(i, j), &[]);
            if j < i {
                b = b.edge(&xw(i, j), &xw(i, j + 1));
            }
        }
        for j in i + 1..=n + 4 {
            for a in 1..=2 {
                let labels: Vec<&str> = match (j, a) {
                    (j, 1) if j == n + 3 => all_refs.clone(),
                    (j, 2) if j == n + 4 => all_refs.clone(),
                    (j, 1) if j == n + 4 => all_but(i),
                    (j, 2) if j == n + 3 => all_but(i),
                    _ => vec![],
                };
                b = b.world(&xwa(i, j, a), &labels);
                if j == i + 1 {
                    b = b.edge(&xw(i, i), &xwa(i, j, a));
                } else {
                    b = b.edge(&xwa(i, j - 1, a), &xwa(i, j, a));
                }
            }
        }
        for a in 1..=2 {
            b = b.edge(&xwa(i, n + 4, a), &xwa(i, n + 4, a));
        }
    }

    for i in 1..=n + 1 {
        b = b.world(&format!("c_{i}"), &[]);
        if i > 1 {
            b = b.edge(&format!("c_{}", i - 1), &format!("c_{i}"));
        }
    }
    for (j, clause) in q.clauses.iter().enumerate() {
        let cj = format!("c{}", j + 1);
        b = b.world(&cj, &[]).edge(&format!("c_{}", n + 1), &cj);
        for (k, lit) in clause.iter().enumerate() {
            let v = lit.var + 1;
            let others = all_but(v);
            let mut first = others.clone();
            let mut second = others;
            if lit.positive {
                first.push(&all[v - 1]);
            } else {
                second.push(&all[v - 1]);
            }
            let (w1, w2) = (
                format!("c{}_{}_1", j + 1, k + 1),
                format!("c{}_{}_2", j + 1, k + 1),
            );
            b = b
                .world(&w1, &first)
                .world(&w2, &second)
                .edge(&cj, &w1)
                .edge(&w1, &w2)
                .edge(&w2, &w2);
        }
    }
    if q.clauses.is_empty() {
        let c = format!("c_{}", n + 1);
        b = b.edge(&c, &c);
    }
    let k = b.build()?;

    let mut worlds = Vec::new();
    for i in 1..=n {
        worlds.push(k.world(&xw(i, 1))?);
    }
    worlds.push(k.world("c_1")?);
    let team = MultiTeam::from_worlds(&worlds);

    let mut f = Ctl::and_all((1..=n).map(|i| Ctl::prop(var_prop(i)).ef()))
        .unwrap_or_else(Ctl::top)
        .ex()
        .ax();
    for i in (0..n).rev() {
        f = match q.quantifier(i) {
            Quantifier::Exists => f.ex(),
            Quantifier::Forall => f.ax(),
        };
    }
    Ok((k, team, f))
}

/// The branching chain whose traces are the assignments to `vars`: layer `i`
/// holds a world labeled `p_i` and one labeled `p̄_i`.
pub fn plsim_structure(vars: &[String]) -> Result<KripkeStructure, QbfError> {
    let mut b = KripkeStructure::builder().world("r", &[]).initial("r");
    let layer = |i: usize| [format!("a{i}"), format!("b{i}")];
    for (i, v) in vars.iter().enumerate() {
        let [a, bb] = layer(i + 1);
        b = b.world(&a, &[v.as_str()]).world(&bb, &[bar(v).as_str()]);
        let prev: Vec<String> = if i == 0 {
            vec!["r".into()]
        } else {
            layer(i).to_vec()
        };
        for p in &prev {
            b = b.edge(p, &a).edge(p, &bb);
        }
    }
    let last: Vec<String> = if vars.is_empty() {
        vec!["r".into()]
    } else {
        layer(vars.len()).to_vec()
    };
    for w in &last {
        b = b.edge(w, w);
    }
    Ok(b.build()?)
}

/// Team and formula satisfiable iff some non-empty team of assignments
/// satisfies the propositional formula `psi`.
pub fn reduce_plsim_to_tpc(psi: &Ltl) -> Result<(TeamEncoding, Ltl), QbfError> {
    let vars: Vec<String> = psi.props().into_iter().filter(|p| p != TAUT).collect();
    if vars.len() > MAX_PLSIM_VARS {
        return Err(QbfError::TooLarge(format!(
            "{} variables exceed {MAX_PLSIM_VARS}",
            vars.len()
        )));
    }
    if !is_propositional(psi) {
        return Err(QbfError::NotPropositional);
    }
    let k = plsim_structure(&vars)?;
    let team = k.enumerate_traces()?;
    let f = Ltl::top().split(Ltl::bot().cneg().and(star(psi)));
    Ok((team, f))
}

fn star(f: &Ltl) -> Ltl {
    if f.is_top() || f.is_bot() {
        return f.clone();
    }
    match f {
        Ltl::Prop(p) => Ltl::prop(p.clone()).eventually(),
        Ltl::NegProp(p) => Ltl::prop(bar(p)).eventually(),
        Ltl::And(l, r) => star(l).and(star(r)),
        Ltl::Split(l, r) => star(l).split(star(r)),
        Ltl::BoolOr(l, r) => star(l).bool_or(star(r)),
        Ltl::CNeg(c) => star(c).cneg(),
        Ltl::Next(_) | Ltl::Until(..) | Ltl::Release(..) | Ltl::Atom(_) => {
            unreachable!("checked propositional")
        }
    }
}

fn is_propositional(f: &Ltl) -> bool {
    match f {
        Ltl::Prop(_) | Ltl::NegProp(_) => true,
        Ltl::And(l, r) | Ltl::Split(l, r) | Ltl::BoolOr(l, r) => {
            is_propositional(l) && is_propositional(r)
        }
        Ltl::CNeg(c) => is_propositional(c),
        Ltl::Next(_) | Ltl::Until(..) | Ltl::Release(..) | Ltl::Atom(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AtomRegistry;
    use crate::kripke::KripkeStructure;
    use crate::oracle::pl_team_satisfiable;
    use crate::parser::parse_ltl;
    use crate::team_ctl::{CtlChecker, CtlConfig};
    use crate::team_ltl::check_team;

    const FIG: &str = "exists x1\nforall x2\nexists x3\nx1 -x2 -x3\n-x1 x2 x3\n-x1 -x2 -x3\n";

    fn lit(v: usize, positive: bool) -> Literal {
        Literal { var: v, positive }
    }

    fn ctl_verdict(q: &QbfInstance) -> bool {
        let (k, t, f) = reduce_to_tmc_ctl(q).unwrap();
        let reg = AtomRegistry::new();
        let cfg = CtlConfig {
            max_worlds: usize::MAX,
            max_team: usize::MAX,
            ..CtlConfig::default()
        };
        CtlChecker::new(&k, &reg, cfg).check(&t, &f).unwrap()
    }

    #[test]
    fn parse_and_normalize() {
        let (q, report) = normalize_qbf(&PrenexQbf::parse(FIG).unwrap()).unwrap();
        assert!(report.is_empty());
        assert_eq!(q.num_vars(), 3);
        assert_eq!(q.to_string(), FIG);
        assert!(eval_qbf(&q).unwrap());

        let (q, report) = normalize_qbf(&PrenexQbf::parse("exists x\nx").unwrap()).unwrap();
        assert_eq!(report.padded_clauses, vec![1]);
        assert_eq!(q.clauses()[0], [lit(0, true); 3]);
        assert!(eval_qbf(&q).unwrap());

        let (q, report) = normalize_qbf(&PrenexQbf::parse("forall x\nx x x").unwrap()).unwrap();
        assert_eq!(report.dummies, vec!["d1".to_string()]);
        assert_eq!(q.names(), ["d1", "x"]);
        assert!(!eval_qbf(&q).unwrap());

        let (q, _) = normalize_qbf(&PrenexQbf::parse("exists a b\n# c\na -b").unwrap()).unwrap();
        assert_eq!(q.num_vars(), 3);
        assert_eq!(q.quantifier(2), Quantifier::Exists);

        assert!(matches!(
            PrenexQbf::parse("exists x\nx\nforall y"),
            Err(QbfError::NotPrenex(3))
        ));
        let wide = PrenexQbf::parse("exists x\nx x x x").unwrap();
        assert!(matches!(
            normalize_qbf(&wide),
            Err(QbfError::ClauseTooWide(1, 4))
        ));
        let free = PrenexQbf::parse("exists x\ny").unwrap();
        assert!(matches!(
            normalize_qbf(&free),
            Err(QbfError::FreeVariable(_))
        ));
    }

    #[test]
    fn tpc_gadget_shape() {
        let (q, _) = normalize_qbf(&PrenexQbf::parse(FIG).unwrap()).unwrap();
        let (team, _) = reduce_to_tpc(&q);
        assert_eq!(team.len(), 2 + 3 + 2 + 9);
        for t in team.iter() {
            assert!(t.prefix().is_empty());
            assert!([3, 6].contains(&t.lp().len()));
        }
        for j in 1..=3 {
            let c = clause_prop(j);
            for s in 0..3 {
                let all = team
                    .iter()
                    .filter(|t| t.props().contains(&c))
                    .all(|t| t.at(s).contains(&c));
                assert!(!all, "clause {j} synchronised at {s}");
            }
        }
    }

    #[test]
    fn tpc_worked_instance() {
        let (q, _) = normalize_qbf(&PrenexQbf::parse(FIG).unwrap()).unwrap();
        let (team, f) = reduce_to_tpc(&q);
        assert!(check_team(&team, &f).unwrap());
    }

    #[test]
    fn ctl_worked_instance() {
        let (q, _) = normalize_qbf(&PrenexQbf::parse(FIG).unwrap()).unwrap();
        assert!(ctl_verdict(&q));
    }

    #[test]
    fn small_instances_both_routes() {
        let pool = [lit(0, true), lit(0, false), lit(1, true), lit(1, false)];
        let mut count = 0;
        for a in pool {
            for b in pool {
                for c in pool {
                    let q = QbfInstance::anonymous(2, vec![[a, b, c]]).unwrap();
                    let expected = eval_qbf(&q).unwrap();
                    let (team, f) = reduce_to_tpc(&q);
                    assert_eq!(check_team(&team, &f).unwrap(), expected, "{q}");
                    assert_eq!(ctl_verdict(&q), expected, "{q}");
                    count += 1;
                }
            }
        }
        assert_eq!(count, 64);
        let q = QbfInstance::anonymous(2, vec![[lit(1, true); 3], [lit(0, true); 3]]).unwrap();
        assert!(!eval_qbf(&q).unwrap());
        assert!(!ctl_verdict(&q));
    }

    #[test]
    fn plsim_structure_traces() {
        let k: KripkeStructure = plsim_structure(&["p".into(), "q".into()]).unwrap();
        assert_eq!(k.enumerate_traces().unwrap().len(), 4);
    }

    #[test]
    fn plsim_examples() {
        for (s, expected) in [
            ("p", true),
            ("p & ~p", false),
            ("~p", true),
            ("p & !p", false),
            ("p | !p", true),
        ] {
            let psi = parse_ltl(s).unwrap();
            let (team, f) = reduce_plsim_to_tpc(&psi).unwrap();
            assert_eq!(check_team(&team, &f).unwrap(), expected, "{s}");
            assert_eq!(pl_team_satisfiable(&psi).unwrap(), expected, "{s}");
        }
        assert!(reduce_plsim_to_tpc(&parse_ltl("X p").unwrap()).is_err());
    }
}
