//! Concrete ASCII syntax for formulas, transition systems, lassos and valuations.
//!
//! ```text
//! formula  := or ( "->" formula )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "!" unary | "tt" | "ff" | ident | "(" formula ")"
//!           | "<" regex ">" bound? unary | "[" regex "]" bound? unary
//! bound    := "{" "<=" ident "}" | "{" "cp" "}"
//! regex    := seq ( "+" seq )*
//! seq      := palt ( ";" palt )*
//! palt     := pand ( "|" pand )*          operands must be propositional
//! pand     := pnot ( "&" pnot )*          operands must be propositional
//! pnot     := "!" pnot | starred
//! starred  := base "*"*
//! base     := "{" formula "}" "?" | "(" regex ")" | "tt" | "ff" | ident
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::formula::{Formula, PropFormula, Regex, Valuation};
use crate::system::System;
use crate::word::{fmt_letter, LassoWord, Letter};
use crate::Error;

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `{cp}` bounds, which normally only arise from rewriting.
    pub allow_cp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

const SYMS: [&str; 17] = [
    "->", "<=", "(", ")", "<", ">", "[", "]", "{", "}", "?", "*", ";", "+", "&", "|", "!",
];

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, Error> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let b = src.as_bytes();
        let mut i = 0;
        'outer: while i < b.len() {
            let c = b[i] as char;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < b.len() && {
                    let d = b[i] as char;
                    d.is_ascii_alphanumeric() || d == '_' || d == '\''
                } {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            for s in SYMS {
                if lx.src[i..].starts_with(s) {
                    lx.toks.push((Tok::Sym(s), i));
                    i += s.len();
                    continue 'outer;
                }
            }
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    opts: ParseOptions,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn is(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), Error> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        let start = self.pos();
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            if lhs.as_prop().is_none() {
                return Err(Error::Parse {
                    pos: start,
                    msg: "the antecedent of '->' must be propositional".into(),
                });
            }
            return Ok(Formula::or(lhs.negate(), rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, Error> {
        let mut f = self.and()?;
        while self.eat("|") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, Error> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, Error> {
        if self.eat("!") {
            return Ok(self.unary()?.negate());
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        for (open, close, diamond) in [("<", ">", true), ("[", "]", false)] {
            if self.eat(open) {
                let r = self.regex()?;
                self.expect(close)?;
                let bound = self.bound()?;
                let body = self.unary()?;
                return Ok(match (bound, diamond) {
                    (None, true) => Formula::diamond(r, body),
                    (None, false) => Formula::boxed(r, body),
                    (Some(Bound::Var(x)), true) => Formula::diamond_le(r, &x, body),
                    (Some(Bound::Var(y)), false) => Formula::box_le(r, &y, body),
                    (Some(Bound::Cp), true) => Formula::diamond_cp(r, body),
                    (Some(Bound::Cp), false) => Formula::box_cp(r, body),
                });
            }
        }
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.i += 1;
                Ok(match s.as_str() {
                    "tt" => Formula::True,
                    "ff" => Formula::False,
                    _ => Formula::Atom(s),
                })
            }
            _ => self.err("expected a formula"),
        }
    }

    fn bound(&mut self) -> Result<Option<Bound>, Error> {
        if !self.is("{") {
            return Ok(None);
        }
        let at = self.pos();
        self.i += 1;
        if self.eat("<=") {
            let x = self.ident()?;
            self.expect("}")?;
            return Ok(Some(Bound::Var(x)));
        }
        match self.peek() {
            Tok::Ident(s) if s == "cp" => {
                if !self.opts.allow_cp {
                    return Err(Error::Parse {
                        pos: at,
                        msg: "changepoint-bounded operators are not accepted in input".into(),
                    });
                }
                self.i += 1;
                self.expect("}")?;
                Ok(Some(Bound::Cp))
            }
            _ => self.err("expected '<=' or 'cp' in bound"),
        }
    }

    fn regex(&mut self) -> Result<Regex, Error> {
        let mut r = self.seq()?;
        while self.eat("+") {
            r = Regex::union(r, self.seq()?);
        }
        Ok(r)
    }

    fn seq(&mut self) -> Result<Regex, Error> {
        let mut r = self.palt()?;
        while self.eat(";") {
            r = Regex::concat(r, self.palt()?);
        }
        Ok(r)
    }

    fn as_prop(&self, r: Regex, at: usize) -> Result<PropFormula, Error> {
        match r {
            Regex::Prop(p) => Ok(p),
            _ => Err(Error::Parse {
                pos: at,
                msg: "'&', '|' and '!' in a regex need propositional operands".into(),
            }),
        }
    }

    fn palt(&mut self) -> Result<Regex, Error> {
        let at = self.pos();
        let mut r = self.pand()?;
        while self.is("|") {
            let lhs = self.as_prop(r, at)?;
            self.i += 1;
            let at2 = self.pos();
            let rhs = self.pand()?;
            r = Regex::Prop(PropFormula::or(lhs, self.as_prop(rhs, at2)?));
        }
        Ok(r)
    }

    fn pand(&mut self) -> Result<Regex, Error> {
        let at = self.pos();
        let mut r = self.pnot()?;
        while self.is("&") {
            let lhs = self.as_prop(r, at)?;
            self.i += 1;
            let at2 = self.pos();
            let rhs = self.pnot()?;
            r = Regex::Prop(PropFormula::and(lhs, self.as_prop(rhs, at2)?));
        }
        Ok(r)
    }

    fn pnot(&mut self) -> Result<Regex, Error> {
        if self.eat("!") {
            let at = self.pos();
            let r = self.pnot()?;
            return Ok(Regex::Prop(PropFormula::negated(self.as_prop(r, at)?)));
        }
        self.starred()
    }

    fn starred(&mut self) -> Result<Regex, Error> {
        let mut r = self.base()?;
        while self.eat("*") {
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn base(&mut self) -> Result<Regex, Error> {
        if self.eat("{") {
            let f = self.formula()?;
            self.expect("}")?;
            self.expect("?")?;
            return Ok(Regex::test(f));
        }
        if self.eat("(") {
            let r = self.regex()?;
            self.expect(")")?;
            return Ok(r);
        }
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.i += 1;
                Ok(Regex::Prop(match s.as_str() {
                    "tt" => PropFormula::True,
                    "ff" => PropFormula::False,
                    _ => PropFormula::Atom(s),
                }))
            }
            _ => self.err("expected a regular expression"),
        }
    }
}

enum Bound {
    Var(String),
    Cp,
}

/// Parses user input; changepoint bounds are rejected.
pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    parse_formula_with(text, ParseOptions::default())
}

pub fn parse_formula_with(text: &str, opts: ParseOptions) -> Result<Formula, Error> {
    let mut p = Parser { toks: Lexer::run(text)?, i: 0, opts };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

pub fn parse_regex(text: &str) -> Result<Regex, Error> {
    let mut p = Parser { toks: Lexer::run(text)?, i: 0, opts: ParseOptions { allow_cp: true } };
    let r = p.regex()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(r)
}

fn write_prop(p: &PropFormula, prec: u8, out: &mut String) {
    // prec: 0 = or, 1 = and, 2 = operand of '!', 3 = operand of '*'
    match p {
        PropFormula::True => out.push_str("tt"),
        PropFormula::False => out.push_str("ff"),
        PropFormula::Atom(a) => out.push_str(a),
        PropFormula::Not(a) => {
            let paren = prec > 2;
            if paren {
                out.push('(');
            }
            out.push('!');
            write_prop(a, 2, out);
            if paren {
                out.push(')');
            }
        }
        PropFormula::And(a, b) => {
            let paren = prec > 1;
            if paren {
                out.push('(');
            }
            write_prop(a, 1, out);
            out.push_str(" & ");
            write_prop(b, 2, out);
            if paren {
                out.push(')');
            }
        }
        PropFormula::Or(a, b) => {
            let paren = prec > 0;
            if paren {
                out.push('(');
            }
            write_prop(a, 0, out);
            out.push_str(" | ");
            write_prop(b, 1, out);
            if paren {
                out.push(')');
            }
        }
    }
}

fn write_regex(r: &Regex, prec: u8, out: &mut String) {
    // prec: 0 = union, 1 = concat, 2 = star operand
    match r {
        Regex::Prop(p) => {
            // '|' inside a regex would be read as a union separator of seqs,
            // so compound propositions under ';' or '*' get parentheses.
            let inner = match p {
                PropFormula::Or(..) => {
                    if prec > 0 {
                        3
                    } else {
                        0
                    }
                }
                PropFormula::And(..) | PropFormula::Not(..) => {
                    if prec > 1 {
                        3
                    } else {
                        1
                    }
                }
                _ => 2,
            };
            write_prop(p, inner, out);
        }
        Regex::Test(f) => {
            out.push('{');
            write_formula(f, 0, out);
            out.push_str("}?");
        }
        Regex::Union(a, b) => {
            let paren = prec > 0;
            if paren {
                out.push('(');
            }
            write_regex(a, 0, out);
            out.push_str(" + ");
            write_regex(b, 1, out);
            if paren {
                out.push(')');
            }
        }
        Regex::Concat(a, b) => {
            let paren = prec > 1;
            if paren {
                out.push('(');
            }
            write_regex(a, 1, out);
            out.push_str(" ; ");
            write_regex(b, 2, out);
            if paren {
                out.push(')');
            }
        }
        Regex::Star(a) => {
            write_regex(a, 2, out);
            out.push('*');
        }
    }
}

fn write_formula(f: &Formula, prec: u8, out: &mut String) {
    // prec: 0 = or, 1 = and, 2 = unary
    let modal = |open: &str, close: &str, r: &Regex, bound: Option<&str>, body: &Formula, out: &mut String| {
        out.push_str(open);
        out.push(' ');
        write_regex(r, 0, out);
        out.push(' ');
        out.push_str(close);
        if let Some(b) = bound {
            out.push_str(b);
        }
        out.push(' ');
        write_formula(body, 2, out);
    };
    match f {
        Formula::True => out.push_str("tt"),
        Formula::False => out.push_str("ff"),
        Formula::Atom(p) => out.push_str(p),
        Formula::NegAtom(p) => {
            out.push('!');
            out.push_str(p);
        }
        Formula::And(a, b) => {
            let paren = prec > 1;
            if paren {
                out.push('(');
            }
            write_formula(a, 1, out);
            out.push_str(" & ");
            write_formula(b, 2, out);
            if paren {
                out.push(')');
            }
        }
        Formula::Or(a, b) => {
            let paren = prec > 0;
            if paren {
                out.push('(');
            }
            write_formula(a, 0, out);
            out.push_str(" | ");
            write_formula(b, 1, out);
            if paren {
                out.push(')');
            }
        }
        Formula::Diamond(r, b) => modal("<", ">", r, None, b, out),
        Formula::Box(r, b) => modal("[", "]", r, None, b, out),
        Formula::DiamondLe(r, x, b) => modal("<", ">", r, Some(&format!("{{<= {x}}}")), b, out),
        Formula::BoxLe(r, y, b) => modal("[", "]", r, Some(&format!("{{<= {y}}}")), b, out),
        Formula::DiamondCp(r, b) => modal("<", ">", r, Some("{cp}"), b, out),
        Formula::BoxCp(r, b) => modal("[", "]", r, Some("{cp}"), b, out),
    }
}

/// Canonical text; parses back to an equal formula (with `allow_cp` when needed).
pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, 0, &mut s);
    s
}

pub fn print_regex(r: &Regex) -> String {
    let mut s = String::new();
    write_regex(r, 0, &mut s);
    s
}

pub fn print_prop(p: &PropFormula) -> String {
    let mut s = String::new();
    write_prop(p, 0, &mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_regex(self))
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_prop(self))
    }
}

fn line_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos: line, msg: msg.into() }
}

fn parse_set(text: &str, line: usize) -> Result<Letter, Error> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| line_err(line, format!("expected a set like {{p q}}, found '{t}'")))?;
    Ok(inner
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect())
}

/// Parses the line-oriented system format; `#` starts a comment.
///
/// ```text
/// props req resp
/// state s0 {req}
/// state s1 {resp}
/// init s0
/// edge s0 s1
/// edge s1 s0
/// ```
pub fn parse_system(text: &str) -> Result<System, Error> {
    let mut props: Option<BTreeSet<String>> = None;
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut names = Vec::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut init = None;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "props" => {
                props = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "state" => {
                let (name, label) = match rest.find('{') {
                    Some(i) => (rest[..i].trim(), parse_set(&rest[i..], line_no)?),
                    None => (rest, Letter::new()),
                };
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(line_err(line_no, "expected 'state <name> {props}'"));
                }
                if index.insert(name.to_string(), names.len()).is_some() {
                    return Err(line_err(line_no, format!("duplicate state {name}")));
                }
                names.push(name.to_string());
                labels.push(label);
            }
            "init" => {
                if init.is_some() {
                    return Err(line_err(line_no, "more than one init line"));
                }
                init = Some((rest.to_string(), line_no));
            }
            "edge" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(line_err(line_no, "expected 'edge <from> <to>'"));
                }
                edges.push((parts[0].to_string(), parts[1].to_string(), line_no));
            }
            _ => return Err(line_err(line_no, format!("unknown directive '{kw}'"))),
        }
    }
    let props = props.unwrap_or_else(|| labels.iter().flatten().cloned().collect());
    let (init_name, init_line) = init.ok_or_else(|| Error::Invalid("missing init".into()))?;
    let init = *index
        .get(&init_name)
        .ok_or_else(|| line_err(init_line, format!("unknown initial state {init_name}")))?;
    let mut succ = vec![Vec::new(); names.len()];
    for (a, b, line_no) in edges {
        let (Some(&s), Some(&t)) = (index.get(&a), index.get(&b)) else {
            return Err(line_err(line_no, format!("unknown state in edge {a} -> {b}")));
        };
        if !succ[s].contains(&t) {
            succ[s].push(t);
        }
    }
    let sys = System { props, names, labels, init, succ };
    sys.validate()?;
    Ok(sys)
}

pub fn print_system(sys: &System) -> String {
    let mut s = String::new();
    let props: Vec<&str> = sys.props.iter().map(String::as_str).collect();
    writeln!(s, "props {}", props.join(" ")).unwrap();
    for (i, n) in sys.names.iter().enumerate() {
        let l: Vec<&str> = sys.labels[i].iter().map(String::as_str).collect();
        writeln!(s, "state {n} {{{}}}", l.join(" ")).unwrap();
    }
    writeln!(s, "init {}", sys.names[sys.init]).unwrap();
    for (i, out) in sys.succ.iter().enumerate() {
        for &t in out {
            writeln!(s, "edge {} {}", sys.names[i], sys.names[t]).unwrap();
        }
    }
    s
}

/// Parses `{p}{p q}|{q}`: prefix letters, a bar, cycle letters.
pub fn parse_lasso(text: &str) -> Result<LassoWord, Error> {
    let (u, v) = text
        .split_once('|')
        .ok_or_else(|| Error::Parse { pos: 0, msg: "lasso needs '|' before the cycle".into() })?;
    let letters = |s: &str, offset: usize| -> Result<Vec<Letter>, Error> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let end = rest.find('}').ok_or_else(|| Error::Parse {
                pos: offset,
                msg: "unterminated letter".into(),
            })?;
            out.push(parse_set(&rest[..=end], offset)?);
            rest = rest[end + 1..].trim_start();
        }
        Ok(out)
    };
    let prefix = letters(u, 0)?;
    let cycle = letters(v, u.len() + 1)?;
    if cycle.is_empty() {
        return Err(Error::Parse { pos: text.len(), msg: "lasso cycle is empty".into() });
    }
    Ok(LassoWord::new(prefix, cycle))
}

pub fn print_letter(l: &Letter) -> String {
    struct D<'a>(&'a Letter);
    impl fmt::Display for D<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_letter(self.0, f)
        }
    }
    D(l).to_string()
}

/// Parses `x=3,y=0`. The empty string is the empty valuation.
pub fn parse_valuation(text: &str) -> Result<Valuation, Error> {
    let mut v = Valuation::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, n) = part.split_once('=').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("expected var=value, found '{part}'"),
        })?;
        let n: u64 = n.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("'{}' is not a natural number", n.trim()),
        })?;
        v.set(k.trim(), n);
    }
    Ok(v)
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}
