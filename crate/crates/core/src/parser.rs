//! Textual syntax: programs, queries and strategy expressions.
//!
//! ```text
//! p(X) :- t(X,Y,Z), not p(Y), not p(Z).   % rule
//! p0(c2).                                 % fact
//! ?- p(a).                                % query
//! ```

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Atom, GroundProgram, Literal, Program, Rule, Term};
use crate::rewrite::Letter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: predicate `{pred}` used with arity {found}, expected {expected}")]
    Arity { line: usize, col: usize, pred: String, expected: usize, found: usize },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("strategy: {0}")]
    Strategy(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Query,
    Not,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Query => f.write_str("`?-`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, msg: String) -> ParseError {
        ParseError::Syntax { line, col, msg }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '%' {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' if self.chars.peek() == Some(&'-') => {
                    self.bump();
                    Tok::If
                }
                '?' if self.chars.peek() == Some(&'-') => {
                    self.bump();
                    Tok::Query
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut s = c.to_string();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if s == "not" {
                        Tok::Not
                    } else if c.is_ascii_uppercase() || c == '_' {
                        Tok::Var(s)
                    } else {
                        Tok::Ident(s)
                    }
                }
                other => return Err(self.err(line, col, format!("unexpected character `{other}`"))),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    arities: HashMap<String, usize>,
    fresh: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: Lexer::new(text).tokens()?, pos: 0, arities: HashMap::new(), fresh: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, msg: format!("expected {wanted}, found {}", self.peek()) }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Tok::Ident(s) => Ok(Term::Const(s)),
            Tok::Var(s) if s == "_" => {
                self.fresh += 1;
                Ok(Term::Var(format!("_{}", self.fresh)))
            }
            Tok::Var(s) => Ok(Term::Var(s)),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a constant or variable"))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (line, col) = self.here();
        let Tok::Ident(pred) = self.peek().clone() else {
            return Err(self.unexpected("a predicate name"));
        };
        self.next();
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("`,` or `)`"));
                    }
                }
            }
        }
        match self.arities.get(&pred) {
            Some(&expected) if expected != args.len() => {
                return Err(ParseError::Arity { line, col, pred, expected, found: args.len() });
            }
            Some(_) => {}
            None => {
                self.arities.insert(pred.clone(), args.len());
            }
        }
        Ok(Atom::new(pred, args))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if *self.peek() == Tok::Not {
            self.next();
            Ok(Literal::neg(self.atom()?))
        } else {
            Ok(Literal::pos(self.atom()?))
        }
    }

    fn clause(&mut self) -> Result<Rule, ParseError> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.next();
            loop {
                body.push(self.literal()?);
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        Ok(Rule::new(head, body))
    }
}

/// Parses a program. Arity must be consistent per predicate.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let mut rules = Vec::new();
    while *p.peek() != Tok::Eof {
        rules.push(p.clause()?);
    }
    Ok(Program::new(rules))
}

/// A query `?- goal.`; variables in the goal are free argument positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub goal: Atom,
}

impl Query {
    pub fn new(goal: Atom) -> Self {
        Query { goal }
    }

    /// Bound/free pattern such as `bf`.
    pub fn pattern(&self) -> String {
        self.goal.args.iter().map(|t| if t.is_var() { 'f' } else { 'b' }).collect()
    }

    /// Checks that the goal predicate exists in `program` with the same arity.
    pub fn validate(&self, program: &Program) -> Result<(), ParseError> {
        match program.arity_of(&self.goal.predicate) {
            None => Err(ParseError::UnknownPredicate(self.goal.predicate.clone())),
            Some(n) if n != self.goal.arity() => Err(ParseError::Arity {
                line: 1,
                col: 1,
                pred: self.goal.predicate.clone(),
                expected: n,
                found: self.goal.arity(),
            }),
            Some(_) => Ok(()),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?- {}.", self.goal)
    }
}

/// Parses `?- p(a).`; the `?-` prefix and final dot are optional.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    if *p.peek() == Tok::Query {
        p.next();
    }
    let goal = p.atom()?;
    if *p.peek() == Tok::Dot {
        p.next();
    }
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of query"));
    }
    Ok(Query { goal })
}

/// Parses a query and checks its predicate against `program`.
pub fn parse_query_for(text: &str, program: &Program) -> Result<Query, ParseError> {
    let q = parse_query(text)?;
    q.validate(program)?;
    Ok(q)
}

/// A regular strategy expression over transformation letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrategyExpr {
    Letter(Letter),
    Seq(Vec<StrategyExpr>),
    Star(Box<StrategyExpr>),
}

impl StrategyExpr {
    /// Sequence constructor: flattens nested sequences, unwraps singletons.
    pub fn seq(items: Vec<StrategyExpr>) -> StrategyExpr {
        let mut flat = Vec::new();
        for e in items {
            match e {
                StrategyExpr::Seq(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            StrategyExpr::Seq(flat)
        }
    }

    pub fn star(body: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Star(Box::new(body))
    }

    pub fn letters(s: &str) -> StrategyExpr {
        StrategyExpr::seq(s.chars().map(|c| StrategyExpr::Letter(Letter::from_char(c).expect("letter"))).collect())
    }

    pub fn contains(&self, l: Letter) -> bool {
        match self {
            StrategyExpr::Letter(x) => *x == l,
            StrategyExpr::Seq(v) => v.iter().any(|e| e.contains(l)),
            StrategyExpr::Star(b) => b.contains(l),
        }
    }
}

impl fmt::Display for StrategyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyExpr::Letter(l) => write!(f, "{l}"),
            StrategyExpr::Seq(v) => v.iter().try_for_each(|e| e.fmt(f)),
            StrategyExpr::Star(b) => write!(f, "({b})*"),
        }
    }
}

/// Parses a strategy such as `((PSNF)*L)*`. Whitespace is ignored.
pub fn parse_strategy(text: &str) -> Result<StrategyExpr, ParseError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let e = strategy_seq(&chars, &mut pos)?;
    match chars.get(pos) {
        None => Ok(e),
        Some(')') => Err(ParseError::Strategy("unbalanced `)`".into())),
        Some(c) => Err(ParseError::Strategy(format!("unexpected `{c}`"))),
    }
}

fn strategy_seq(chars: &[char], pos: &mut usize) -> Result<StrategyExpr, ParseError> {
    let mut items = Vec::new();
    while let Some(&c) = chars.get(*pos) {
        let item = match c {
            ')' => break,
            '(' => {
                *pos += 1;
                let inner = strategy_seq(chars, pos)?;
                if chars.get(*pos) != Some(&')') {
                    return Err(ParseError::Strategy("unbalanced `(`".into()));
                }
                *pos += 1;
                inner
            }
            '*' => return Err(ParseError::Strategy("`*` without an operand".into())),
            c => {
                let l = Letter::from_char(c).ok_or_else(|| ParseError::Strategy(format!("unknown letter `{c}`")))?;
                *pos += 1;
                StrategyExpr::Letter(l)
            }
        };
        if chars.get(*pos) == Some(&'*') {
            *pos += 1;
            items.push(StrategyExpr::star(item));
        } else {
            items.push(item);
        }
    }
    if items.is_empty() {
        return Err(ParseError::Strategy("empty expression".into()));
    }
    Ok(StrategyExpr::seq(items))
}

/// Deterministic text form of a ground program: rules sorted by head id,
/// then body ids.
pub fn serialize_program(p: &GroundProgram) -> String {
    p.to_string()
}
