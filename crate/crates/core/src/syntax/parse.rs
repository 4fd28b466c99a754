//! Lexer and recursive-descent parsers for processes, propositions and
//! hypersequents.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Name, Process};
use crate::types::{Hypersequent, Proposition, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// Token descriptions that would have been accepted, sorted.
    pub expected: Vec<String>,
    /// The offending lexeme, or `end of input`.
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                f.write_str(if i + 1 == self.expected.len() { " or " } else { ", " })?;
            }
            f.write_str(e)?;
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Keyword(&'static str),
    Sym(&'static str),
    Eof,
}

const KEYWORDS: &[&str] = &[
    "new", "close", "wait", "case", "inl", "inr", "type", "as", "ex", "all", "link", "spawn", "dispose", "par", "bot",
    "top", "empty",
];

// Longest symbols first.
const SYMBOLS: &[&str] = &[
    "<->", "||", "|", "<", ">", "-", "(", ")", "{", "}", "[", "]", ".", ",", ";", ":", "*", "+", "&", "!", "?", "~",
    "0", "1",
];

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

impl Tok {
    fn lexeme(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Keyword(k) | Tok::Sym(k) => format!("`{k}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, line, column: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(ParseError {
                line,
                column: col,
                expected: vec!["a token".to_string()],
                found: format!("`{c}`"),
            });
        };
        // A digit glued to identifier characters is not a constant.
        if (*sym == "0" || *sym == "1") && chars.get(i + 1).is_some_and(|c| is_ident_char(*c)) {
            return Err(ParseError {
                line,
                column: col,
                expected: vec!["a token".to_string()],
                found: format!("`{c}{}`", chars[i + 1]),
            });
        }
        i += sym.len();
        col += sym.len();
        out.push(Token { tok: Tok::Sym(sym), line, column: start_col });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(text: &str) -> PResult<Self> {
        Ok(Parser { tokens: lex(text)?, pos: 0, expected: BTreeSet::new() })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub(crate) fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    pub(crate) fn error(&mut self) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            expected: std::mem::take(&mut self.expected).into_iter().collect(),
            found: t.tok.lexeme(),
        }
    }

    pub(crate) fn is_sym(&mut self, s: &'static str) -> bool {
        self.expected.insert(format!("`{s}`"));
        *self.peek() == Tok::Sym(s)
    }

    pub(crate) fn is_kw(&mut self, k: &'static str) -> bool {
        self.expected.insert(format!("`{k}`"));
        *self.peek() == Tok::Keyword(k)
    }

    pub(crate) fn eat_sym(&mut self, s: &'static str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.advance();
        }
        hit
    }

    pub(crate) fn eat_kw(&mut self, k: &'static str) -> bool {
        let hit = self.is_kw(k);
        if hit {
            self.advance();
        }
        hit
    }

    pub(crate) fn expect_sym(&mut self, s: &'static str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub(crate) fn expect_kw(&mut self, k: &'static str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub(crate) fn is_ident(&mut self) -> bool {
        self.expected.insert("a name".to_string());
        matches!(self.peek(), Tok::Ident(_))
    }

    pub(crate) fn name(&mut self) -> PResult<Name> {
        if self.is_ident() {
            let Tok::Ident(s) = self.advance() else { unreachable!() };
            Ok(Name::from(s.as_str()))
        } else {
            Err(self.error())
        }
    }

    pub(crate) fn end(&mut self) -> PResult<()> {
        self.expected.insert("end of input".to_string());
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    // ---- processes ----

    fn process(&mut self) -> PResult<Process> {
        let mut p = self.prefixed()?;
        while self.eat_sym("|") {
            let q = self.prefixed()?;
            p = Process::par(p, q);
        }
        Ok(p)
    }

    fn cont(&mut self) -> PResult<Box<Process>> {
        self.expect_sym(".")?;
        Ok(Box::new(self.prefixed()?))
    }

    fn prefixed(&mut self) -> PResult<Process> {
        if self.eat_sym("0") {
            return Ok(Process::Nil);
        }
        if self.eat_sym("(") {
            let p = self.process()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        if self.eat_kw("new") {
            self.expect_sym("(")?;
            let left = self.name()?;
            self.expect_sym(",")?;
            let right = self.name()?;
            self.expect_sym(")")?;
            self.expect_sym("{")?;
            let body = Box::new(self.process()?);
            self.expect_sym("}")?;
            return Ok(Process::Res { left, right, body });
        }
        if self.eat_kw("close") {
            return Ok(Process::Close { subject: self.name()? });
        }
        if self.eat_kw("wait") {
            let subject = self.name()?;
            return Ok(Process::Wait { subject, cont: self.cont()? });
        }
        if self.eat_kw("case") {
            let subject = self.name()?;
            self.expect_sym("{")?;
            self.expect_kw("inl")?;
            self.expect_sym(":")?;
            let left = Box::new(self.process()?);
            self.expect_sym(";")?;
            self.expect_kw("inr")?;
            self.expect_sym(":")?;
            let right = Box::new(self.process()?);
            self.expect_sym("}")?;
            return Ok(Process::Case { subject, left, right });
        }
        if self.eat_kw("link") {
            self.expect_sym("[")?;
            let ty = self.prop()?;
            self.expect_sym("]")?;
            let from = self.name()?;
            let to = self.name()?;
            return Ok(Process::Link { ty, from, to });
        }
        if self.eat_sym("!") {
            let subject = self.name()?;
            self.expect_sym("(")?;
            let object = self.name()?;
            self.expect_sym(")")?;
            return Ok(Process::Server { subject, object, body: self.cont()? });
        }
        if self.eat_sym("?") {
            let subject = self.name()?;
            self.expect_sym("[")?;
            let object = self.name()?;
            self.expect_sym("]")?;
            return Ok(Process::ClientUse { subject, object, cont: self.cont()? });
        }
        if self.eat_kw("spawn") {
            let subject = self.name()?;
            self.expect_sym("[")?;
            let copy = self.name()?;
            self.expect_sym("]")?;
            return Ok(Process::ClientSpawn { subject, copy, cont: self.cont()? });
        }
        if self.eat_kw("dispose") {
            self.expect_sym("[")?;
            let ty = self.prop()?;
            self.expect_sym("]")?;
            let subject = self.name()?;
            return Ok(Process::ClientDispose { subject, ty, cont: self.cont()? });
        }
        if self.is_ident() {
            let subject = self.name()?;
            if self.eat_sym("[") {
                return self.output(subject);
            }
            if self.eat_sym("(") {
                return self.input(subject);
            }
        }
        Err(self.error())
    }

    fn output(&mut self, subject: Name) -> PResult<Process> {
        if self.eat_kw("inl") {
            self.expect_sym(":")?;
            let right = self.prop()?;
            self.expect_sym("]")?;
            return Ok(Process::SelectLeft { subject, right, cont: self.cont()? });
        }
        if self.eat_kw("inr") {
            self.expect_sym(":")?;
            let left = self.prop()?;
            self.expect_sym("]")?;
            return Ok(Process::SelectRight { subject, left, cont: self.cont()? });
        }
        if self.eat_kw("type") {
            let witness = self.prop()?;
            self.expect_kw("as")?;
            self.expect_kw("ex")?;
            let var = self.name()?;
            self.expect_sym(".")?;
            let scheme = self.prop()?;
            self.expect_sym("]")?;
            return Ok(Process::SendType { subject, witness, var, scheme, cont: self.cont()? });
        }
        let object = self.name()?;
        self.expect_sym("]")?;
        Ok(Process::Send { subject, object, cont: self.cont()? })
    }

    fn input(&mut self, subject: Name) -> PResult<Process> {
        if self.eat_kw("type") {
            let var = self.name()?;
            self.expect_sym(")")?;
            return Ok(Process::RecvType { subject, var, cont: self.cont()? });
        }
        let object = self.name()?;
        self.expect_sym(")")?;
        Ok(Process::Recv { subject, object, cont: self.cont()? })
    }

    // ---- propositions ----

    pub(crate) fn prop(&mut self) -> PResult<Proposition> {
        if self.eat_kw("ex") {
            let (var, body) = self.binder()?;
            return Ok(Proposition::exists(var, body));
        }
        if self.eat_kw("all") {
            let (var, body) = self.binder()?;
            return Ok(Proposition::forall(var, body));
        }
        self.additive()
    }

    fn binder(&mut self) -> PResult<(Name, Proposition)> {
        let var = self.name()?;
        self.expect_sym(".")?;
        Ok((var, self.prop()?))
    }

    // Operands of binary connectives never start with a binder; the
    // printer parenthesises such operands.
    fn additive(&mut self) -> PResult<Proposition> {
        let left = self.multiplicative()?;
        if self.eat_sym("+") {
            return Ok(Proposition::plus(left, self.additive()?));
        }
        if self.eat_sym("&") {
            return Ok(Proposition::with(left, self.additive()?));
        }
        Ok(left)
    }

    fn multiplicative(&mut self) -> PResult<Proposition> {
        let left = self.unary()?;
        if self.eat_sym("*") {
            return Ok(Proposition::tensor(left, self.multiplicative()?));
        }
        if self.eat_kw("par") {
            return Ok(Proposition::par(left, self.multiplicative()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Proposition> {
        if self.eat_sym("!") {
            return Ok(Proposition::of_course(self.unary()?));
        }
        if self.eat_sym("?") {
            return Ok(Proposition::why_not(self.unary()?));
        }
        if self.eat_sym("~") {
            return Ok(Proposition::DualAtom(self.name()?));
        }
        if self.eat_sym("1") {
            return Ok(Proposition::One);
        }
        if self.eat_kw("bot") {
            return Ok(Proposition::Bot);
        }
        if self.eat_sym("0") {
            return Ok(Proposition::Zero);
        }
        if self.eat_kw("top") {
            return Ok(Proposition::Top);
        }
        if self.eat_sym("(") {
            let p = self.prop()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        if self.is_ident() {
            return Ok(Proposition::Atom(self.name()?));
        }
        Err(self.error())
    }

    // ---- hypersequents ----

    fn hypersequent(&mut self) -> PResult<Hypersequent> {
        if *self.peek() == Tok::Eof {
            return Ok(Hypersequent::empty());
        }
        if *self.peek() == Tok::Sym("(") && *self.peek_at(1) == Tok::Keyword("empty") {
            self.advance();
            self.advance();
            self.expect_sym(")")?;
            return Ok(Hypersequent::empty());
        }
        let mut seqs = Vec::new();
        loop {
            seqs.push(self.sequent()?);
            if !self.eat_sym("||") {
                break;
            }
        }
        let at = self.tokens[self.pos].clone();
        Hypersequent::from_sequents(seqs).map_err(|e| ParseError {
            line: at.line,
            column: at.column,
            expected: vec!["distinct names".to_string()],
            found: e.to_string(),
        })
    }

    fn sequent(&mut self) -> PResult<Sequent> {
        let mut s = Sequent::new();
        loop {
            let tok = self.tokens[self.pos].clone();
            let name = self.name()?;
            self.expect_sym(":")?;
            let prop = self.prop()?;
            if s.insert(name.clone(), prop).is_some() {
                return Err(ParseError {
                    line: tok.line,
                    column: tok.column,
                    expected: vec!["a name not already in the sequent".to_string()],
                    found: format!("`{name}`"),
                });
            }
            if !self.eat_sym(",") {
                return Ok(s);
            }
        }
    }
}

/// Parses one process; the whole input must be consumed.
pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(text)?;
    let out = p.process()?;
    p.end()?;
    Ok(out)
}

pub fn parse_proposition(text: &str) -> Result<Proposition, ParseError> {
    let mut p = Parser::new(text)?;
    let out = p.prop()?;
    p.end()?;
    Ok(out)
}

/// Accepts `x : A, y : B || z : C`; an empty input or `(empty)` is the
/// empty hypersequent.
pub fn parse_hypersequent(text: &str) -> Result<Hypersequent, ParseError> {
    let mut p = Parser::new(text)?;
    let out = p.hypersequent()?;
    p.end()?;
    Ok(out)
}

impl std::str::FromStr for Process {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_process(s)
    }
}

impl std::str::FromStr for Proposition {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_proposition(s)
    }
}

impl std::str::FromStr for Hypersequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hypersequent(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn close_and_restriction() {
        assert_eq!(p("close x"), Process::Close { subject: Name::from("x") });
        assert_eq!(
            p("new (x,y){ close x | wait y.0 }"),
            Process::res(
                "x",
                "y",
                Process::par(
                    Process::Close { subject: Name::from("x") },
                    Process::Wait { subject: Name::from("y"), cont: Box::new(Process::Nil) }
                )
            )
        );
    }

    #[test]
    fn unclosed_bracket_reports_position() {
        let e = parse_process("x[y.P").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert_eq!(e.expected, vec!["`]`".to_string()]);
        assert_eq!(e.found, "`.`");
    }

    #[test]
    fn prefix_binds_tighter_than_par() {
        let q = p("wait x.0 | close y");
        assert!(matches!(q, Process::Par(..)));
        let q = p("x[y].(close y | wait x.0)");
        assert!(matches!(q, Process::Send { .. }));
    }

    #[test]
    fn par_is_left_associative() {
        let q = p("0 | close a | close b");
        let Process::Par(l, _) = q else { panic!() };
        assert!(matches!(*l, Process::Par(..)));
    }

    #[test]
    fn primes_and_comments() {
        let q = p("-- a comment\nspawn x[x'].0");
        assert_eq!(
            q,
            Process::ClientSpawn {
                subject: Name::from("x"),
                copy: Name::with_primes("x", 1),
                cont: Box::new(Process::Nil)
            }
        );
    }

    #[test]
    fn annotated_prefixes() {
        p("x[inl: bot].close x");
        p("x[inr: 1 * 1].close x");
        p("x[type 1 as ex X.X par bot].close x");
        p("x(type X).wait x.0");
        p("link [~X] x y");
        p("dispose [1] u.0");
        p("case x {inl: close x; inr: close x}");
        p("!x(y).?u[v].close y");
    }

    #[test]
    fn type_precedence() {
        let a = parse_proposition("1 * bot + !X par ~Y & top").unwrap();
        assert_eq!(
            a,
            Proposition::plus(
                Proposition::tensor(Proposition::One, Proposition::Bot),
                Proposition::with(
                    Proposition::par(Proposition::of_course(Proposition::atom("X")), Proposition::dual_atom("Y")),
                    Proposition::Top
                )
            )
        );
        let b = parse_proposition("ex X.X * (all Y.Y)").unwrap();
        assert_eq!(
            b,
            Proposition::exists(
                "X",
                Proposition::tensor(Proposition::atom("X"), Proposition::forall("Y", Proposition::atom("Y")))
            )
        );
    }

    #[test]
    fn hypersequents() {
        let h = parse_hypersequent("x : 1, y : bot || z : ?1").unwrap();
        assert_eq!(h.len(), 2);
        assert!(parse_hypersequent("").unwrap().is_empty());
        assert!(parse_hypersequent("(empty)").unwrap().is_empty());
        assert!(parse_hypersequent("x:1 || x:bot").is_err());
        assert!(parse_hypersequent("x:1, x:bot").is_err());
    }

    #[test]
    fn junk_is_rejected() {
        assert!(parse_process("close").is_err());
        assert!(parse_process("close x y").is_err());
        assert!(parse_process("x#").is_err());
        assert!(parse_process("new (x,y){0").is_err());
    }
}
