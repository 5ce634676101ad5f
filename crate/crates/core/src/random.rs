//! Seeded generators for formulas, teams, structures and QBFs.
//!
//! All randomness goes through [`instance_rng`], so a `(seed, index)` pair
//! reproduces an instance exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Ctl, GenAtomApp, Ltl};
use crate::kripke::{KripkeStructure, MultiTeam};
use crate::qbf::{Literal, QbfInstance};
use crate::trace::{LassoTrace, Letter, TeamEncoding};

/// Independent stream number `index` under `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn props(n: usize) -> Vec<String> {
    ["p", "q", "r", "s", "t", "u"]
        .iter()
        .take(n)
        .map(|s| s.to_string())
        .collect()
}

/// Which connectives a formula generator may use.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub props: Vec<String>,
    /// Upper bound on the number of connectives.
    pub max_length: usize,
    pub temporal: bool,
    pub split: bool,
    pub boolor: bool,
    pub cneg: bool,
    pub atoms: bool,
}

impl FormulaGen {
    /// Literals, `&`, `|` and temporal operators.
    pub fn basic(props: Vec<String>, max_length: usize) -> Self {
        FormulaGen {
            props,
            max_length,
            temporal: true,
            split: true,
            boolor: false,
            cneg: false,
            atoms: false,
        }
    }

    /// Everything except `~`.
    pub fn no_cneg(props: Vec<String>, max_length: usize) -> Self {
        FormulaGen {
            boolor: true,
            atoms: true,
            ..FormulaGen::basic(props, max_length)
        }
    }

    pub fn full(props: Vec<String>, max_length: usize) -> Self {
        FormulaGen {
            cneg: true,
            ..FormulaGen::no_cneg(props, max_length)
        }
    }

    pub fn without_split(mut self) -> Self {
        self.split = false;
        self
    }
}

#[derive(Clone, Copy)]
enum Op {
    And,
    Split,
    BoolOr,
    CNeg,
    Next,
    Until,
    Release,
    Atom,
}

impl FormulaGen {
    fn ops(&self) -> Vec<Op> {
        let mut ops = vec![Op::And];
        if self.split {
            ops.push(Op::Split);
        }
        if self.boolor {
            ops.push(Op::BoolOr);
        }
        if self.cneg {
            ops.push(Op::CNeg);
        }
        if self.temporal {
            ops.extend([Op::Next, Op::Until, Op::Release, Op::Next, Op::Until]);
        }
        if self.atoms {
            ops.push(Op::Atom);
        }
        ops
    }

    fn prop<R: Rng + ?Sized>(&self, rng: &mut R) -> String {
        self.props
            .choose(rng)
            .expect("at least one proposition")
            .clone()
    }

    fn literal<T: Syntactic, R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let p = self.prop(rng);
        if rng.gen_bool(0.5) {
            T::lit(p, true)
        } else {
            T::lit(p, false)
        }
    }

    fn atom<T: Syntactic, R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let lit = |rng: &mut R| self.literal::<T, R>(rng);
        if rng.gen_bool(0.5) {
            let determiners = (0..rng.gen_range(0..=1)).map(|_| lit(rng)).collect();
            T::atom(GenAtomApp::dep(determiners, vec![lit(rng)]))
        } else {
            T::atom(GenAtomApp::inc(vec![lit(rng)], vec![lit(rng)]))
        }
    }

    fn build<T: Syntactic, R: Rng + ?Sized>(&self, rng: &mut R, budget: usize) -> T {
        if budget == 0 {
            return self.literal(rng);
        }
        let op = *self.ops().choose(rng).expect("And is always available");
        let split_budget = |rng: &mut R| {
            let l = rng.gen_range(0..budget);
            (l, budget - 1 - l)
        };
        match op {
            Op::CNeg => self.build::<T, R>(rng, budget - 1).unary(Op::CNeg, rng),
            Op::Next => self.build::<T, R>(rng, budget - 1).unary(Op::Next, rng),
            Op::Atom => self.atom(rng),
            _ => {
                let (a, b) = split_budget(rng);
                let l = self.build::<T, R>(rng, a);
                let r = self.build::<T, R>(rng, b);
                T::binary(op, l, r, rng)
            }
        }
    }

    /// A formula with at most `max_length` connectives.
    pub fn ltl<R: Rng + ?Sized>(&self, rng: &mut R) -> Ltl {
        let budget = rng.gen_range(0..=self.max_length);
        self.build(rng, budget)
    }

    /// A CTL formula with at most `max_length` connectives; path quantifiers
    /// are chosen uniformly.
    pub fn ctl<R: Rng + ?Sized>(&self, rng: &mut R) -> Ctl {
        let budget = rng.gen_range(0..=self.max_length);
        self.build(rng, budget)
    }
}

trait Syntactic: Sized {
    fn lit(p: String, positive: bool) -> Self;
    fn atom(app: GenAtomApp<Self>) -> Self;
    fn unary<R: Rng + ?Sized>(self, op: Op, rng: &mut R) -> Self;
    fn binary<R: Rng + ?Sized>(op: Op, l: Self, r: Self, rng: &mut R) -> Self;
}

impl Syntactic for Ltl {
    fn lit(p: String, positive: bool) -> Self {
        if positive {
            Ltl::Prop(p)
        } else {
            Ltl::NegProp(p)
        }
    }

    fn atom(app: GenAtomApp<Self>) -> Self {
        Ltl::Atom(app)
    }

    fn unary<R: Rng + ?Sized>(self, op: Op, _rng: &mut R) -> Self {
        match op {
            Op::CNeg => self.cneg(),
            _ => self.next(),
        }
    }

    fn binary<R: Rng + ?Sized>(op: Op, l: Self, r: Self, _rng: &mut R) -> Self {
        match op {
            Op::And => l.and(r),
            Op::Split => l.split(r),
            Op::BoolOr => l.bool_or(r),
            Op::Until => l.until(r),
            _ => l.release(r),
        }
    }
}

impl Syntactic for Ctl {
    fn lit(p: String, positive: bool) -> Self {
        if positive {
            Ctl::Prop(p)
        } else {
            Ctl::NegProp(p)
        }
    }

    fn atom(app: GenAtomApp<Self>) -> Self {
        Ctl::Atom(app)
    }

    fn unary<R: Rng + ?Sized>(self, op: Op, rng: &mut R) -> Self {
        match op {
            Op::CNeg => self.cneg(),
            _ if rng.gen_bool(0.5) => self.ex(),
            _ => self.ax(),
        }
    }

    fn binary<R: Rng + ?Sized>(op: Op, l: Self, r: Self, rng: &mut R) -> Self {
        let exists = rng.gen_bool(0.5);
        match op {
            Op::And => l.and(r),
            Op::Split => l.split(r),
            Op::BoolOr => l.bool_or(r),
            Op::Until if exists => l.eu(r),
            Op::Until => l.au(r),
            _ if exists => l.er(r),
            _ => l.ar(r),
        }
    }
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, props: &[String]) -> Letter {
    props
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

pub fn random_trace<R: Rng + ?Sized>(
    rng: &mut R,
    props: &[String],
    max_prefix: usize,
    max_loop: usize,
) -> LassoTrace {
    let prefix = (0..rng.gen_range(0..=max_prefix))
        .map(|_| random_letter(rng, props))
        .collect();
    let lp = (0..rng.gen_range(1..=max_loop.max(1)))
        .map(|_| random_letter(rng, props))
        .collect();
    LassoTrace::new(prefix, lp).expect("loop is non-empty")
}

/// Up to `max_traces` traces; duplicates collapse, so the team may be
/// smaller.
pub fn random_team<R: Rng + ?Sized>(
    rng: &mut R,
    props: &[String],
    max_traces: usize,
    max_prefix: usize,
    max_loop: usize,
) -> TeamEncoding {
    (0..rng.gen_range(0..=max_traces))
        .map(|_| random_trace(rng, props, max_prefix, max_loop))
        .collect()
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// A left-total structure on `n` worlds with initial world `w0`.
pub fn random_kripke<R: Rng + ?Sized>(rng: &mut R, n: usize, props: &[String]) -> KripkeStructure {
    let names = world_names(n);
    let mut b = KripkeStructure::builder();
    for w in &names {
        let l = random_letter(rng, props);
        let refs: Vec<&str> = l.iter().map(String::as_str).collect();
        b = b.world(w, &refs);
    }
    for a in &names {
        b = b.edge(a, names.choose(rng).expect("n > 0"));
        for c in &names {
            if rng.gen_bool(0.25) {
                b = b.edge(a, c);
            }
        }
    }
    b.initial(&names[0])
        .build()
        .expect("generated structure is valid")
}

/// A structure whose reachable cyclic worlds have exactly one successor, so
/// its trace set is a finite set of lassos. Uses between 1 and `max_worlds`
/// worlds.
pub fn random_lasso_forest<R: Rng + ?Sized>(
    rng: &mut R,
    max_worlds: usize,
    props: &[String],
) -> KripkeStructure {
    let n = rng.gen_range(1..=max_worlds.max(1));
    let cyclic = rng.gen_range(1..=n.clamp(1, 3));
    let tree = n - cyclic;
    let names = world_names(n);
    let mut b = KripkeStructure::builder();
    for w in &names {
        let l = random_letter(rng, props);
        let refs: Vec<&str> = l.iter().map(String::as_str).collect();
        b = b.world(w, &refs);
    }
    // worlds tree..n form one or more disjoint cycles
    let cycle_worlds: Vec<usize> = (tree..n).collect();
    let mut start = 0;
    while start < cycle_worlds.len() {
        let len = rng.gen_range(1..=cycle_worlds.len() - start);
        let cyc = &cycle_worlds[start..start + len];
        for (i, &w) in cyc.iter().enumerate() {
            b = b.edge(&names[w], &names[cyc[(i + 1) % len]]);
        }
        start += len;
    }
    // acyclic part: edges only to later tree worlds or into the cycles
    for a in 0..tree {
        let targets: Vec<usize> = (a + 1..n).collect();
        let first = *targets.choose(rng).expect("a cycle world lies ahead");
        b = b.edge(&names[a], &names[first]);
        for &t in &targets {
            if rng.gen_bool(0.3) {
                b = b.edge(&names[a], &names[t]);
            }
        }
    }
    b.initial(&names[0])
        .build()
        .expect("generated structure is valid")
}

pub fn random_multiteam<R: Rng + ?Sized>(
    rng: &mut R,
    k: &KripkeStructure,
    max_size: usize,
) -> MultiTeam {
    let worlds: Vec<usize> = (0..rng.gen_range(0..=max_size))
        .map(|_| rng.gen_range(0..k.len()))
        .collect();
    MultiTeam::from_worlds(&worlds)
}

pub fn random_qbf<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> QbfInstance {
    let clauses = (0..m)
        .map(|_| {
            [0; 3].map(|_| Literal {
                var: rng.gen_range(0..n),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    QbfInstance::anonymous(n, clauses).expect("literals are in range")
}

/// Propositional team formula (`p`, `!p`, `&`, `|`, `\|/`, `~`).
pub fn random_pl<R: Rng + ?Sized>(rng: &mut R, vars: &[String], max_length: usize) -> Ltl {
    let gen = FormulaGen {
        props: vars.to_vec(),
        max_length,
        temporal: false,
        split: true,
        boolor: true,
        cneg: true,
        atoms: false,
    };
    gen.ltl(rng)
}
