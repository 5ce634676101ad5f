//! Concrete syntax for team LTL and team CTL formulas.
//!
//! Precedence, loosest first: `~`, then `U`/`R` (right associative), `|`,
//! `\|/`, `&`, the prefix operators, and finally literals, atoms and
//! parenthesised formulas. `~` always extends as far right as possible.

use std::fmt;

use thiserror::Error;

use crate::formula::{AtomKind, Ctl, GenAtomApp, Ltl};

/// Byte range into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at bytes {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Tilde,
    Bang,
    Amp,
    Pipe,
    BoolOr,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::BoolOr => f.write_str("`\\|/`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((
                Tok::Ident(text[start..i].to_string()),
                SourceSpan::new(start, i),
            ));
            continue;
        }
        let (tok, len) = match c {
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'[' => (Tok::LBrack, 1),
            b']' => (Tok::RBrack, 1),
            b',' => (Tok::Comma, 1),
            b';' => (Tok::Semi, 1),
            b'~' => (Tok::Tilde, 1),
            b'!' => (Tok::Bang, 1),
            b'&' => (Tok::Amp, 1),
            b'|' => (Tok::Pipe, 1),
            b'\\' if text[i..].starts_with("\\|/") => (Tok::BoolOr, 3),
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError {
                    message: format!("unexpected character `{ch}`"),
                    span: SourceSpan::new(i, i + ch.len_utf8()),
                });
            }
        };
        out.push((tok, SourceSpan::new(i, i + len)));
        i += len;
    }
    out.push((Tok::End, SourceSpan::new(text.len(), text.len())));
    Ok(out)
}

/// Node constructors shared by the two logics.
trait Build: Sized {
    const CTL: bool;
    fn prop(p: String) -> Self;
    fn neg(p: String) -> Self;
    fn and(l: Self, r: Self) -> Self;
    fn split(l: Self, r: Self) -> Self;
    fn bool_or(l: Self, r: Self) -> Self;
    fn atom(a: GenAtomApp<Self>) -> Self;
    fn top() -> Self;
    fn bot() -> Self;
    fn temporal_free(&self) -> bool;
}

impl Build for Ltl {
    const CTL: bool = false;
    fn prop(p: String) -> Self {
        Ltl::Prop(p)
    }
    fn neg(p: String) -> Self {
        Ltl::NegProp(p)
    }
    fn and(l: Self, r: Self) -> Self {
        l.and(r)
    }
    fn split(l: Self, r: Self) -> Self {
        l.split(r)
    }
    fn bool_or(l: Self, r: Self) -> Self {
        l.bool_or(r)
    }
    fn atom(a: GenAtomApp<Self>) -> Self {
        Ltl::Atom(a)
    }
    fn top() -> Self {
        Ltl::top()
    }
    fn bot() -> Self {
        Ltl::bot()
    }
    fn temporal_free(&self) -> bool {
        true
    }
}

impl Build for Ctl {
    const CTL: bool = true;
    fn prop(p: String) -> Self {
        Ctl::Prop(p)
    }
    fn neg(p: String) -> Self {
        Ctl::NegProp(p)
    }
    fn and(l: Self, r: Self) -> Self {
        l.and(r)
    }
    fn split(l: Self, r: Self) -> Self {
        l.split(r)
    }
    fn bool_or(l: Self, r: Self) -> Self {
        l.bool_or(r)
    }
    fn atom(a: GenAtomApp<Self>) -> Self {
        Ctl::Atom(a)
    }
    fn top() -> Self {
        Ctl::top()
    }
    fn bot() -> Self {
        Ctl::bot()
    }
    fn temporal_free(&self) -> bool {
        self.is_temporal_free()
    }
}

const LTL_KEYWORDS: &[&str] = &["X", "F", "G", "U", "R", "TOP", "BOT", "dep", "inc"];
const CTL_KEYWORDS: &[&str] = &[
    "EX", "AX", "EF", "AF", "EG", "AG", "E", "A", "U", "R", "TOP", "BOT", "dep", "inc",
];

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    ctl: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn is_keyword(&self, word: &str) -> bool {
        let kws = if self.ctl { CTL_KEYWORDS } else { LTL_KEYWORDS };
        kws.contains(&word)
    }

    fn finish<T>(&mut self, f: T) -> Result<T, ParseError> {
        match self.peek() {
            Tok::End => Ok(f),
            Tok::Ident(s) if self.ctl && (s == "U" || s == "R") => self.err(format!(
                "`{s}` needs a path quantifier: write E[.. {s} ..] or A[.. {s} ..]"
            )),
            t => self.err(format!("unexpected {t}")),
        }
    }
}

/// LTL-specific levels.
impl Parser {
    fn ltl_formula(&mut self) -> Result<Ltl, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(self.ltl_formula()?.cneg());
        }
        self.ltl_until()
    }

    fn ltl_until(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.split_level(Self::ltl_prefix)?;
        if self.peek_ident("U") {
            self.bump();
            let rhs = self.ltl_until_rhs()?;
            return Ok(lhs.until(rhs));
        }
        if self.peek_ident("R") {
            self.bump();
            let rhs = self.ltl_until_rhs()?;
            return Ok(lhs.release(rhs));
        }
        Ok(lhs)
    }

    fn ltl_until_rhs(&mut self) -> Result<Ltl, ParseError> {
        if *self.peek() == Tok::Tilde {
            return self.ltl_formula();
        }
        self.ltl_until()
    }

    fn ltl_prefix(&mut self) -> Result<Ltl, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(self.ltl_formula()?.cneg())
            }
            Tok::Ident(s) if s == "X" || s == "F" || s == "G" => {
                self.bump();
                let c = self.ltl_prefix()?;
                Ok(match s.as_str() {
                    "X" => c.next(),
                    "F" => c.eventually(),
                    _ => c.always(),
                })
            }
            _ => self.primary(Self::ltl_formula),
        }
    }
}

/// CTL-specific levels.
impl Parser {
    fn ctl_formula(&mut self) -> Result<Ctl, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(self.ctl_formula()?.cneg());
        }
        self.split_level(Self::ctl_prefix)
    }

    fn ctl_prefix(&mut self) -> Result<Ctl, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(self.ctl_formula()?.cneg())
            }
            Tok::Ident(s) if ["EX", "AX", "EF", "AF", "EG", "AG"].contains(&s.as_str()) => {
                self.bump();
                let c = self.ctl_prefix()?;
                Ok(match s.as_str() {
                    "EX" => c.ex(),
                    "AX" => c.ax(),
                    "EF" => c.ef(),
                    "AF" => c.af(),
                    "EG" => c.eg(),
                    _ => c.ag(),
                })
            }
            Tok::Ident(s) if s == "E" || s == "A" => {
                self.bump();
                self.expect(Tok::LBrack)?;
                let lhs = self.ctl_formula()?;
                let until = if self.peek_ident("U") {
                    true
                } else if self.peek_ident("R") {
                    false
                } else {
                    return self.err(format!("expected `U` or `R`, found {}", self.peek()));
                };
                self.bump();
                let rhs = self.ctl_formula()?;
                self.expect(Tok::RBrack)?;
                Ok(match (s.as_str(), until) {
                    ("E", true) => lhs.eu(rhs),
                    ("E", false) => lhs.er(rhs),
                    ("A", true) => lhs.au(rhs),
                    _ => lhs.ar(rhs),
                })
            }
            Tok::Ident(s) if s == "X" || s == "F" || s == "G" => {
                self.err(format!("`{s}` needs a path quantifier (E or A)"))
            }
            _ => self.primary(Self::ctl_formula),
        }
    }
}

/// Levels shared by both logics.
impl Parser {
    fn split_level<F: Build>(
        &mut self,
        prefix: fn(&mut Self) -> Result<F, ParseError>,
    ) -> Result<F, ParseError> {
        let mut lhs = self.boolor_level(prefix)?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.boolor_level(prefix)?;
            lhs = F::split(lhs, rhs);
        }
        Ok(lhs)
    }

    fn boolor_level<F: Build>(
        &mut self,
        prefix: fn(&mut Self) -> Result<F, ParseError>,
    ) -> Result<F, ParseError> {
        let mut lhs = self.and_level(prefix)?;
        while *self.peek() == Tok::BoolOr {
            self.bump();
            let rhs = self.and_level(prefix)?;
            lhs = F::bool_or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_level<F: Build>(
        &mut self,
        prefix: fn(&mut Self) -> Result<F, ParseError>,
    ) -> Result<F, ParseError> {
        let mut lhs = prefix(self)?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = prefix(self)?;
            lhs = F::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn primary<F: Build>(
        &mut self,
        formula: fn(&mut Self) -> Result<F, ParseError>,
    ) -> Result<F, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::LParen => {
                let f = formula(self)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Bang => match self.peek().clone() {
                Tok::Ident(name) if !self.is_keyword(&name) && *self.peek_next() != Tok::LParen => {
                    self.bump();
                    Ok(F::neg(name))
                }
                _ => Err(ParseError {
                    message: "`!` may only be applied to a proposition (formulas are in negation normal form; use `~` for contradictory negation)".into(),
                    span: SourceSpan::new(span.start, self.span().end),
                }),
            },
            Tok::Ident(name) => match name.as_str() {
                "TOP" => Ok(F::top()),
                "BOT" => Ok(F::bot()),
                "dep" | "inc" => self.builtin_atom(&name, span, formula),
                _ if self.is_keyword(&name) => Err(ParseError {
                    message: format!("unexpected keyword `{name}`"),
                    span,
                }),
                _ if *self.peek() == Tok::LParen => {
                    self.bump();
                    let mut args = vec![formula(self)?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(formula(self)?);
                    }
                    self.expect(Tok::RParen)?;
                    self.atom_node(GenAtomApp::custom(name, args), span)
                }
                _ => Ok(F::prop(name)),
            },
            Tok::End => Err(ParseError {
                message: "unexpected end of input".into(),
                span,
            }),
            t => Err(ParseError {
                message: format!("unexpected {t}"),
                span,
            }),
        }
    }

    fn peek_next(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn builtin_atom<F: Build>(
        &mut self,
        name: &str,
        span: SourceSpan,
        formula: fn(&mut Self) -> Result<F, ParseError>,
    ) -> Result<F, ParseError> {
        self.expect(Tok::LParen)?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut seen_semi = false;
        loop {
            if *self.peek() == Tok::Semi && !seen_semi {
                seen_semi = true;
                self.bump();
                continue;
            }
            let f = formula(self)?;
            if seen_semi {
                right.push(f);
            } else {
                left.push(f);
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::Semi if !seen_semi => {}
                Tok::RParen => {
                    self.bump();
                    break;
                }
                t => return self.err(format!("expected `,`, `;` or `)`, found {t}")),
            }
        }
        let whole = SourceSpan::new(span.start, self.prev_end());
        let app = if name == "dep" {
            if !seen_semi {
                GenAtomApp::dep(Vec::new(), left)
            } else if right.is_empty() {
                return Err(ParseError {
                    message: "dependence atom needs at least one determined parameter".into(),
                    span: whole,
                });
            } else {
                GenAtomApp::dep(left, right)
            }
        } else {
            if !seen_semi || left.len() != right.len() || left.is_empty() {
                return Err(ParseError {
                    message: "inclusion atom needs two non-empty halves of equal width: inc(p1..pn; q1..qn)".into(),
                    span: whole,
                });
            }
            GenAtomApp::inc(left, right)
        };
        self.atom_node(app, whole)
    }

    fn atom_node<F: Build>(&self, app: GenAtomApp<F>, span: SourceSpan) -> Result<F, ParseError> {
        if F::CTL && !app.args.iter().all(F::temporal_free) {
            return Err(ParseError {
                message: "parameters of generalised atoms must be temporal-free in CTL".into(),
                span: SourceSpan::new(span.start, self.prev_end().max(span.end)),
            });
        }
        Ok(F::atom(app))
    }
}

/// Parses a team LTL formula.
pub fn parse_ltl(text: &str) -> Result<Ltl, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        ctl: false,
    };
    let f = p.ltl_formula()?;
    p.finish(f)
}

/// Parses a team CTL formula.
pub fn parse_ctl(text: &str) -> Result<Ctl, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        ctl: true,
    };
    let f = p.ctl_formula()?;
    p.finish(f)
}

// Rendering levels; a child whose level is below the slot's requirement is
// parenthesised.
const L_NEG: u8 = 0;
const L_UNTIL: u8 = 1;
const L_SPLIT: u8 = 2;
const L_BOOLOR: u8 = 3;
const L_AND: u8 = 4;
const L_PREFIX: u8 = 5;
const L_ATOM: u8 = 6;

fn write_atom<F>(out: &mut String, app: &GenAtomApp<F>, arg: &dyn Fn(&mut String, &F)) {
    let name = match &app.kind {
        AtomKind::Dep { .. } => "dep",
        AtomKind::Inc { .. } => "inc",
        AtomKind::Custom(n) => n.as_str(),
    };
    let split_at = match app.kind {
        AtomKind::Dep { determiners } if determiners > 0 => Some(determiners),
        AtomKind::Inc { width } => Some(width),
        _ => None,
    };
    out.push_str(name);
    out.push('(');
    for (i, a) in app.args.iter().enumerate() {
        if i > 0 {
            out.push_str(if Some(i) == split_at { "; " } else { ", " });
        }
        arg(out, a);
    }
    out.push(')');
}

struct Slot {
    min_level: u8,
    open_right: bool,
}

fn render_ltl(out: &mut String, f: &Ltl, slot: Slot) {
    let level = ltl_level(f);
    let bare = if matches!(f, Ltl::CNeg(_)) {
        slot.open_right
    } else {
        level >= slot.min_level
    };
    if !bare {
        out.push('(');
        render_ltl(
            out,
            f,
            Slot {
                min_level: 0,
                open_right: true,
            },
        );
        out.push(')');
        return;
    }
    let open = slot.open_right;
    let bin = |out: &mut String, l: &Ltl, op: &str, r: &Ltl, lmin: u8, rmin: u8| {
        render_ltl(
            out,
            l,
            Slot {
                min_level: lmin,
                open_right: false,
            },
        );
        out.push_str(op);
        render_ltl(
            out,
            r,
            Slot {
                min_level: rmin,
                open_right: open,
            },
        );
    };
    match f {
        Ltl::Prop(p) => out.push_str(p),
        Ltl::NegProp(p) => {
            out.push('!');
            out.push_str(p);
        }
        _ if f.is_top() => out.push_str("TOP"),
        _ if f.is_bot() => out.push_str("BOT"),
        Ltl::And(l, r) => bin(out, l, " & ", r, L_AND, L_AND + 1),
        Ltl::BoolOr(l, r) => bin(out, l, " \\|/ ", r, L_BOOLOR, L_BOOLOR + 1),
        Ltl::Split(l, r) => bin(out, l, " | ", r, L_SPLIT, L_SPLIT + 1),
        Ltl::Until(l, r) if l.is_top() => {
            out.push_str("F ");
            render_ltl(
                out,
                r,
                Slot {
                    min_level: L_PREFIX,
                    open_right: open,
                },
            );
        }
        Ltl::Release(l, r) if l.is_bot() => {
            out.push_str("G ");
            render_ltl(
                out,
                r,
                Slot {
                    min_level: L_PREFIX,
                    open_right: open,
                },
            );
        }
        Ltl::Until(l, r) => bin(out, l, " U ", r, L_UNTIL + 1, L_UNTIL),
        Ltl::Release(l, r) => bin(out, l, " R ", r, L_UNTIL + 1, L_UNTIL),
        Ltl::Next(c) => {
            out.push_str("X ");
            render_ltl(
                out,
                c,
                Slot {
                    min_level: L_PREFIX,
                    open_right: open,
                },
            );
        }
        Ltl::CNeg(c) => {
            out.push('~');
            render_ltl(
                out,
                c,
                Slot {
                    min_level: 0,
                    open_right: true,
                },
            );
        }
        Ltl::Atom(app) => write_atom(out, app, &|o, a| {
            render_ltl(
                o,
                a,
                Slot {
                    min_level: 0,
                    open_right: true,
                },
            )
        }),
    }
}

fn ltl_level(f: &Ltl) -> u8 {
    if f.is_top() || f.is_bot() {
        return L_ATOM;
    }
    match f {
        Ltl::Prop(_) | Ltl::NegProp(_) | Ltl::Atom(_) => L_ATOM,
        Ltl::CNeg(_) => L_NEG,
        Ltl::Until(l, _) if l.is_top() => L_PREFIX,
        Ltl::Release(l, _) if l.is_bot() => L_PREFIX,
        Ltl::Until(..) | Ltl::Release(..) => L_UNTIL,
        Ltl::Split(..) => L_SPLIT,
        Ltl::BoolOr(..) => L_BOOLOR,
        Ltl::And(..) => L_AND,
        Ltl::Next(_) => L_PREFIX,
    }
}

fn render_ctl(out: &mut String, f: &Ctl, slot: Slot) {
    let level = ctl_level(f);
    let bare = if matches!(f, Ctl::CNeg(_)) {
        slot.open_right
    } else {
        level >= slot.min_level
    };
    if !bare {
        out.push('(');
        render_ctl(
            out,
            f,
            Slot {
                min_level: 0,
                open_right: true,
            },
        );
        out.push(')');
        return;
    }
    let open = slot.open_right;
    let bin = |out: &mut String, l: &Ctl, op: &str, r: &Ctl, lmin: u8, rmin: u8| {
        render_ctl(
            out,
            l,
            Slot {
                min_level: lmin,
                open_right: false,
            },
        );
        out.push_str(op);
        render_ctl(
            out,
            r,
            Slot {
                min_level: rmin,
                open_right: open,
            },
        );
    };
    let prefix = |out: &mut String, op: &str, c: &Ctl| {
        out.push_str(op);
        out.push(' ');
        render_ctl(
            out,
            c,
            Slot {
                min_level: L_PREFIX,
                open_right: open,
            },
        );
    };
    let bracket = |out: &mut String, q: &str, l: &Ctl, op: &str, r: &Ctl| {
        out.push_str(q);
        out.push('[');
        render_ctl(
            out,
            l,
            Slot {
                min_level: 0,
                open_right: false,
            },
        );
        out.push_str(op);
        render_ctl(
            out,
            r,
            Slot {
                min_level: 0,
                open_right: true,
            },
        );
        out.push(']');
    };
    match f {
        Ctl::Prop(p) => out.push_str(p),
        Ctl::NegProp(p) => {
            out.push('!');
            out.push_str(p);
        }
        _ if f.is_top() => out.push_str("TOP"),
        _ if f.is_bot() => out.push_str("BOT"),
        Ctl::And(l, r) => bin(out, l, " & ", r, L_AND, L_AND + 1),
        Ctl::BoolOr(l, r) => bin(out, l, " \\|/ ", r, L_BOOLOR, L_BOOLOR + 1),
        Ctl::Split(l, r) => bin(out, l, " | ", r, L_SPLIT, L_SPLIT + 1),
        Ctl::EX(c) => prefix(out, "EX", c),
        Ctl::AX(c) => prefix(out, "AX", c),
        Ctl::EU(l, r) if l.is_top() => prefix(out, "EF", r),
        Ctl::AU(l, r) if l.is_top() => prefix(out, "AF", r),
        Ctl::ER(l, r) if l.is_bot() => prefix(out, "EG", r),
        Ctl::AR(l, r) if l.is_bot() => prefix(out, "AG", r),
        Ctl::EU(l, r) => bracket(out, "E", l, " U ", r),
        Ctl::AU(l, r) => bracket(out, "A", l, " U ", r),
        Ctl::ER(l, r) => bracket(out, "E", l, " R ", r),
        Ctl::AR(l, r) => bracket(out, "A", l, " R ", r),
        Ctl::CNeg(c) => {
            out.push('~');
            render_ctl(
                out,
                c,
                Slot {
                    min_level: 0,
                    open_right: true,
                },
            );
        }
        Ctl::Atom(app) => write_atom(out, app, &|o, a| {
            render_ctl(
                o,
                a,
                Slot {
                    min_level: 0,
                    open_right: true,
                },
            )
        }),
    }
}

fn ctl_level(f: &Ctl) -> u8 {
    if f.is_top() || f.is_bot() {
        return L_ATOM;
    }
    match f {
        Ctl::Prop(_) | Ctl::NegProp(_) | Ctl::Atom(_) => L_ATOM,
        Ctl::CNeg(_) => L_NEG,
        Ctl::Split(..) => L_SPLIT,
        Ctl::BoolOr(..) => L_BOOLOR,
        Ctl::And(..) => L_AND,
        Ctl::EX(_) | Ctl::AX(_) => L_PREFIX,
        Ctl::EU(l, _) | Ctl::AU(l, _) if l.is_top() => L_PREFIX,
        Ctl::ER(l, _) | Ctl::AR(l, _) if l.is_bot() => L_PREFIX,
        Ctl::EU(..) | Ctl::AU(..) | Ctl::ER(..) | Ctl::AR(..) => L_ATOM,
    }
}

pub fn render_ltl_text(f: &Ltl) -> String {
    let mut s = String::new();
    render_ltl(
        &mut s,
        f,
        Slot {
            min_level: 0,
            open_right: true,
        },
    );
    s
}

pub fn render_ctl_text(f: &Ctl) -> String {
    let mut s = String::new();
    render_ctl(
        &mut s,
        f,
        Slot {
            min_level: 0,
            open_right: true,
        },
    );
    s
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ltl_text(self))
    }
}

impl fmt::Display for Ctl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ctl_text(self))
    }
}

/// Replaces the marker identifiers `_d` and `_h` by `$` and `#`.
pub fn prettify(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        match word.as_str() {
            "_d" => out.push('$'),
            "_h" => out.push('#'),
            w => out.push_str(w),
        }
        word.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            word.push(c);
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Ltl {
        Ltl::prop(s)
    }

    #[test]
    fn eventually_is_top_until() {
        assert_eq!(parse_ltl("F p").unwrap(), Ltl::top().until(p("p")));
    }

    #[test]
    fn dep_arity_split() {
        let f = parse_ltl("dep(i1,i2; o1)").unwrap();
        assert_eq!(
            f,
            Ltl::Atom(GenAtomApp::dep(vec![p("i1"), p("i2")], vec![p("o1")]))
        );
        match f {
            Ltl::Atom(a) => assert_eq!(a.kind, AtomKind::Dep { determiners: 2 }),
            _ => unreachable!(),
        }
        assert_eq!(
            parse_ltl("dep(p)").unwrap(),
            Ltl::Atom(GenAtomApp::dep(vec![], vec![p("p")]))
        );
    }

    #[test]
    fn bang_on_compound_is_rejected() {
        let e = parse_ltl("!(p&q)").unwrap_err();
        assert!(e.message.contains("negation normal form"), "{e}");
        assert_eq!(e.span.start, 0);
        assert!(parse_ltl("!X p").is_err());
    }

    #[test]
    fn ctl_examples() {
        assert_eq!(parse_ctl("EF p").unwrap(), Ctl::top().eu(Ctl::prop("p")));
        assert_eq!(
            parse_ctl("A[p U q]").unwrap(),
            Ctl::prop("p").au(Ctl::prop("q"))
        );
        assert!(parse_ctl("X p").is_err());
        let e = parse_ctl("p U q").unwrap_err();
        assert!(e.message.contains("path quantifier"), "{e}");
        assert!(parse_ctl("dep(EX p; q)").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_ltl("p & q | r").unwrap(),
            p("p").and(p("q")).split(p("r"))
        );
        assert_eq!(
            parse_ltl("p | q \\|/ r").unwrap(),
            p("p").split(p("q").bool_or(p("r")))
        );
        assert_eq!(
            parse_ltl("p U q U r").unwrap(),
            p("p").until(p("q").until(p("r")))
        );
        assert_eq!(
            parse_ltl("p | q U r").unwrap(),
            p("p").split(p("q")).until(p("r"))
        );
        assert_eq!(parse_ltl("~p & q").unwrap(), p("p").and(p("q")).cneg());
        assert_eq!(
            parse_ltl("p & ~q & r").unwrap(),
            p("p").and(p("q").and(p("r")).cneg())
        );
        assert_eq!(parse_ltl("X p & q").unwrap(), p("p").next().and(p("q")));
    }

    #[test]
    fn comments_and_whitespace() {
        assert_eq!(parse_ltl("p # first\n &\tq").unwrap(), p("p").and(p("q")));
    }

    #[test]
    fn render_examples() {
        assert_eq!(p("p").until(p("q")).to_string(), "p U q");
        assert_eq!(p("p").split(p("q").cneg()).to_string(), "p | ~q");
        assert_eq!(
            Ltl::Atom(GenAtomApp::inc(vec![p("p")], vec![p("q")])).to_string(),
            "inc(p; q)"
        );
        assert_eq!(
            p("p").split(p("q").cneg()).and(p("r")).to_string(),
            "(p | ~q) & r"
        );
        assert_eq!(
            p("p").and(p("q").cneg()).and(p("r")).to_string(),
            "p & (~q) & r"
        );
    }

    #[test]
    fn errors_carry_spans_inside_input() {
        for text in [
            "p &",
            "(p",
            "p q",
            "dep(p;)",
            "inc(p; q, r)",
            "p $ q",
            "",
            "X",
            "!",
        ] {
            let e = parse_ltl(text).unwrap_err();
            assert!(
                e.span.start <= e.span.end && e.span.end <= text.len(),
                "{text}: {e:?}"
            );
        }
    }

    #[test]
    fn prettify_markers() {
        assert_eq!(prettify("(_d | _h2) U _h"), "($ | _h2) U #");
    }
}
