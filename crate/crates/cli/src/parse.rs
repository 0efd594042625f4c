//! Recursive-descent parser for construction scripts.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use luttinger_core::abelian::AbelianInvariants;
use luttinger_core::fp::{FiniteTarget, Presentation};

use crate::script::{
    Arg, Expr, ExprKind, MatchItem, Pos, Predicate, Script, Statement, StatementKind,
};

/// Operations a script may call.
pub const OPERATIONS: &[&str] = &[
    "fiber_sum",
    "luttinger",
    "blow_up",
    "closed_pi1",
    "complement",
    "simplify",
    "abelianization",
    "order",
    "hom_count",
    "euler",
    "sigma",
    "trivial",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn error(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Pres(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(_) => write!(f, "string"),
            Tok::Pres(_) => write!(f, "presentation"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

const SYMBOLS: &[&str] = &[
    "==", "->", "=", "(", ")", "[", "]", ",", ".", "^", "*", "/", "+", "-",
];

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

struct Source<'a> {
    text: &'a str,
    line_starts: Vec<usize>,
}

impl<'a> Source<'a> {
    fn new(text: &'a str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Source { text, line_starts }
    }

    fn pos(&self, offset: usize) -> Pos {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let start = self.line_starts[line - 1];
        let column = self.text[start..offset.min(self.text.len())]
            .chars()
            .count()
            + 1;
        Pos { line, column }
    }
}

fn lex(src: &Source) -> Result<Vec<Token>, Diagnostic> {
    let text = src.text;
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
        } else if ident_start(c) {
            let mut end = i;
            while let Some(&(j, c)) = chars.peek() {
                if !ident_continue(c) {
                    break;
                }
                end = j + c.len_utf8();
                chars.next();
            }
            out.push(Token {
                tok: Tok::Ident(text[i..end].to_string()),
                start: i,
                end,
            });
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            let n = text[i..end]
                .parse()
                .map_err(|_| Diagnostic::error(src.pos(i), "integer out of range"))?;
            out.push(Token {
                tok: Tok::Int(n),
                start: i,
                end,
            });
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            let end = loop {
                match chars.next() {
                    None | Some((_, '\n')) => {
                        return Err(Diagnostic::error(src.pos(i), "unterminated string"))
                    }
                    Some((j, '"')) => break j + 1,
                    Some((j, '\\')) => match chars.next() {
                        Some((_, 'n')) => s.push('\n'),
                        Some((_, c @ ('"' | '\\'))) => s.push(c),
                        _ => return Err(Diagnostic::error(src.pos(j), "invalid escape")),
                    },
                    Some((_, c)) => s.push(c),
                }
            };
            out.push(Token {
                tok: Tok::Str(s),
                start: i,
                end,
            });
        } else if c == '<' {
            let close = text[i..]
                .find('>')
                .ok_or_else(|| Diagnostic::error(src.pos(i), "unterminated presentation"))?;
            let end = i + close + 1;
            while chars.peek().is_some_and(|&(j, _)| j < end) {
                chars.next();
            }
            out.push(Token {
                tok: Tok::Pres(text[i..end].to_string()),
                start: i,
                end,
            });
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            for _ in 0..sym.len() {
                chars.next();
            }
            out.push(Token {
                tok: Tok::Sym(sym),
                start: i,
                end: i + sym.len(),
            });
        } else {
            return Err(Diagnostic::error(
                src.pos(i),
                format!("unexpected character `{c}`"),
            ));
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    src: &'a Source<'a>,
    tokens: Vec<Token>,
    at: usize,
    bound: HashMap<String, Pos>,
    diagnostics: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.at + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.src.pos(self.tokens[self.at].start)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(Diagnostic::error(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek()),
        ))
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if *self.peek() == Tok::Sym(leak(sym)) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> PResult<()> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            self.unexpected(&format!("`{sym}`"))
        }
    }

    /// A `,` between list items, where `close` would also be accepted.
    fn separator(&mut self, close: &str) -> PResult<()> {
        if self.eat_sym(",") {
            Ok(())
        } else {
            self.unexpected(&format!("`,` or `{close}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_sym("-");
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.unexpected("integer"),
        }
    }

    fn bind(&mut self, name: &str, pos: Pos) {
        if let Some(prev) = self.bound.get(name) {
            self.diagnostics.push(Diagnostic::error(
                pos,
                format!("`{name}` is already bound at {prev}"),
            ));
        } else {
            self.bound.insert(name.to_string(), pos);
        }
    }

    fn resolve(&mut self, name: &str, pos: Pos) {
        if !self.bound.contains_key(name) {
            self.diagnostics
                .push(Diagnostic::error(pos, format!("unbound name `{name}`")));
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let pos = self.pos();
        let kw = self.ident("statement (`block`, `let`, `assert` or `print`)")?;
        let kind = match kw.as_str() {
            "block" => {
                let name_pos = self.pos();
                let name = self.ident("block name")?;
                self.expect_sym("=")?;
                self.keyword("builtin")?;
                self.expect_sym("(")?;
                let builtin = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        s
                    }
                    _ => return self.unexpected("quoted builtin name"),
                };
                self.expect_sym(")")?;
                self.bind(&name, name_pos);
                StatementKind::Block { name, builtin }
            }
            "let" => {
                let name_pos = self.pos();
                let name = self.ident("binding name")?;
                self.expect_sym("=")?;
                let value = self.expr()?;
                self.bind(&name, name_pos);
                StatementKind::Let { name, value }
            }
            "assert" => {
                let left = self.expr()?;
                if self.eat_sym("==") {
                    let right = self.expr()?;
                    StatementKind::Assert(Predicate::Equals(left, right))
                } else {
                    StatementKind::Assert(Predicate::Holds(left))
                }
            }
            "print" => StatementKind::Print(self.expr()?),
            other => {
                return Err(Diagnostic::error(
                    pos,
                    format!("unknown statement `{other}`"),
                ))
            }
        };
        Ok(Statement { kind, pos })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(_) | Tok::Sym("-") => ExprKind::Int(self.int()?),
            Tok::Str(s) => {
                self.bump();
                ExprKind::Str(s)
            }
            Tok::Pres(text) => {
                let start = self.tokens[self.at].start;
                self.bump();
                if let Err(e) = Presentation::parse(&text) {
                    return Err(Diagnostic::error(
                        self.src.pos(start + error_offset(&e)),
                        e.to_string(),
                    ));
                }
                ExprKind::Presentation(text)
            }
            Tok::Ident(name) if name == "Z" => ExprKind::Invariants(self.invariants()?),
            Tok::Ident(name) => {
                self.bump();
                if self.eat_sym("(") {
                    if !OPERATIONS.contains(&name.as_str()) {
                        return Err(Diagnostic::error(
                            pos,
                            format!(
                                "unknown operation `{name}`; available: {}",
                                OPERATIONS.join(", ")
                            ),
                        ));
                    }
                    let args = self.args(&name)?;
                    ExprKind::Call { name, args }
                } else if self.eat_sym(".") {
                    let label = self.ident("marked submanifold label")?;
                    self.resolve(&name, pos);
                    ExprKind::Label { block: name, label }
                } else {
                    self.resolve(&name, pos);
                    ExprKind::Name(name)
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let mut items = vec![self.expr()?];
                while self.eat_sym(",") {
                    items.push(self.expr()?);
                }
                self.expect_sym(")")?;
                ExprKind::Tuple(items)
            }
            Tok::Sym("[") => {
                self.bump();
                ExprKind::Match(self.match_items()?)
            }
            _ => return self.unexpected("expression"),
        };
        Ok(Expr { kind, pos })
    }

    fn invariants(&mut self) -> PResult<AbelianInvariants> {
        let start = self.tokens[self.at].start;
        let pos = self.pos();
        loop {
            self.keyword("Z")?;
            if self.eat_sym("^") || self.eat_sym("/") {
                self.int()?;
            }
            if !self.eat_sym("+") {
                break;
            }
        }
        let end = self.tokens[self.at - 1].end;
        AbelianInvariants::parse(&self.src.text[start..end])
            .map_err(|e| Diagnostic::error(pos, e.to_string()))
    }

    fn match_items(&mut self) -> PResult<Vec<MatchItem>> {
        let mut items = Vec::new();
        if self.eat_sym("]") {
            return Ok(items);
        }
        loop {
            let left = self.ident("basis curve name")?;
            self.expect_sym("->")?;
            let right = self.ident("basis curve name")?;
            let inverted = if self.eat_sym("^") {
                let pos = self.pos();
                if self.int()? != -1 {
                    return Err(Diagnostic::error(pos, "only `^-1` is allowed in a match"));
                }
                true
            } else {
                false
            };
            items.push(MatchItem {
                left,
                right,
                inverted,
            });
            if self.eat_sym("]") {
                return Ok(items);
            }
            self.separator("]")?;
        }
    }

    /// Source text of the tokens up to the next top-level `,` or `)`.
    fn raw_argument(&mut self, what: &str) -> PResult<(String, Vec<String>)> {
        let first = self.at;
        let mut depth = 0usize;
        let mut idents = Vec::new();
        loop {
            match self.peek() {
                Tok::Eof => return self.unexpected("`)`"),
                Tok::Sym("," | ")") if depth == 0 => break,
                Tok::Sym("(" | "[") => depth += 1,
                Tok::Sym(")" | "]") => depth -= 1,
                Tok::Ident(s) => idents.push(s.clone()),
                _ => {}
            }
            self.bump();
        }
        if self.at == first {
            return self.unexpected(what);
        }
        let start = self.tokens[first].start;
        let end = self.tokens[self.at - 1].end;
        Ok((self.src.text[start..end].trim().to_string(), idents))
    }

    fn args(&mut self, call: &str) -> PResult<Vec<Arg>> {
        let mut args = Vec::new();
        if self.eat_sym(")") {
            return Ok(args);
        }
        loop {
            let pos = self.pos();
            let index = args.len();
            let value = if call == "trivial" && index == 0 {
                let (text, mut idents) = self.raw_argument("word")?;
                idents.sort();
                idents.dedup();
                let free = Presentation::free(idents).expect("distinct names");
                if let Err(e) = free.parse_word(&text) {
                    return Err(Diagnostic::error(pos, format!("invalid word: {e}")));
                }
                Expr {
                    kind: ExprKind::Word(text),
                    pos,
                }
            } else if call == "hom_count" && index == 1 {
                let (text, _) = self.raw_argument("target group such as S3 or Z/4")?;
                let compact: String = text.split_whitespace().collect();
                if let Err(e) = compact.parse::<FiniteTarget>() {
                    return Err(Diagnostic::error(pos, e.to_string()));
                }
                Expr {
                    kind: ExprKind::Target(compact),
                    pos,
                }
            } else {
                let keyword = match (self.peek().clone(), self.peek_at(1)) {
                    (Tok::Ident(k), Tok::Sym("=")) => {
                        self.bump();
                        self.bump();
                        Some(k)
                    }
                    _ => None,
                };
                let value = self.expr()?;
                args.push(Arg { keyword, value });
                if self.eat_sym(")") {
                    return Ok(args);
                }
                self.separator(")")?;
                continue;
            };
            args.push(Arg {
                keyword: None,
                value,
            });
            if self.eat_sym(")") {
                return Ok(args);
            }
            self.separator(")")?;
        }
    }
}

fn error_offset(e: &luttinger_core::Error) -> usize {
    match e {
        luttinger_core::Error::Parse { offset, .. } => *offset,
        _ => 0,
    }
}

/// Symbols are compared as `&'static str`; this maps a borrowed symbol to
/// its entry in the symbol table.
fn leak(sym: &str) -> &'static str {
    SYMBOLS
        .iter()
        .find(|s| **s == sym)
        .copied()
        .expect("known symbol")
}

/// Parses a whole script. On failure no partial script is returned; every
/// diagnostic carries a position.
pub fn parse(text: &str) -> Result<Script, Vec<Diagnostic>> {
    let src = Source::new(text);
    let tokens = lex(&src).map_err(|d| vec![d])?;
    let mut p = Parser {
        src: &src,
        tokens,
        at: 0,
        bound: HashMap::new(),
        diagnostics: Vec::new(),
    };
    let mut statements = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.statement() {
            Ok(s) => statements.push(s),
            Err(d) => {
                p.diagnostics.push(d);
                return Err(p.diagnostics);
            }
        }
    }
    if p.diagnostics.is_empty() {
        Ok(Script { statements })
    } else {
        Err(p.diagnostics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> Diagnostic {
        parse(text).unwrap_err().remove(0)
    }

    #[test]
    fn block_statement() {
        let s = parse("block W = builtin(\"matsumoto_W\")").unwrap();
        assert_eq!(s.statements.len(), 1);
        assert_eq!(s.statements[0].binds(), Some("W"));
    }

    #[test]
    fn comments_and_layout() {
        let s =
            parse("# header\nblock W = builtin(\"matsumoto_W\") # trailing\n\n  print euler(W)\n")
                .unwrap();
        assert_eq!(s.statements.len(), 2);
        assert_eq!(s.statements[1].pos.line, 4);
        assert_eq!(s.statements[1].pos.column, 3);
    }

    #[test]
    fn fiber_sum_with_match() {
        let text = "block W = builtin(\"matsumoto_W\")\nblock B = builtin(\"block_B\")\n\
                    let R = fiber_sum(W.F, B.G, match=[a1->x1, b1->y1^-1, a2->x2, b2->y2])";
        let s = parse(text).unwrap();
        match &s.statements[2].kind {
            StatementKind::Let { value, .. } => match &value.kind {
                ExprKind::Call { name, args } => {
                    assert_eq!(name, "fiber_sum");
                    assert_eq!(args.len(), 3);
                    assert_eq!(args[2].keyword.as_deref(), Some("match"));
                    match &args[2].value.kind {
                        ExprKind::Match(items) => assert!(items[1].inverted),
                        other => panic!("{other:?}"),
                    }
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn special_arguments() {
        let text = "block B = builtin(\"block_B\")\n\
                    assert trivial([x1,t]*x1^2, B)\n\
                    assert hom_count(closed_pi1(B), Z/4) == 16\n\
                    assert abelianization(closed_pi1(B)) == Z^2 + Z/3\n\
                    assert simplify(<a | a>) == <|>";
        let s = parse(text).unwrap();
        let printed = s.to_string();
        assert!(printed.contains("trivial([x1,t]*x1^2, B)"));
        assert!(printed.contains("hom_count(closed_pi1(B), Z/4)"));
        assert!(printed.contains("== Z^2 + Z/3"));
    }

    #[test]
    fn unbound_name_is_positioned() {
        let d = err("let X = euler(Q)");
        assert_eq!((d.line, d.column), (1, 15));
        assert!(d.message.contains("unbound name `Q`"));
    }

    #[test]
    fn rebinding_is_rejected() {
        let d = err("block W = builtin(\"matsumoto_W\")\nblock W = builtin(\"block_B\")");
        assert_eq!(d.line, 2);
        assert!(d.message.contains("already bound at 1:7"));
    }

    #[test]
    fn syntax_errors() {
        let d = err("let = 3");
        assert_eq!((d.line, d.column), (1, 5));
        let d = err("block W = builtin(matsumoto_W)");
        assert!(d.message.contains("quoted builtin name"));
        let d = err("let X = frobnicate(1)");
        assert!(d.message.contains("unknown operation"));
        let d = err("print 1 $");
        assert!(d.message.contains("unexpected character"));
        let d = err("let G = <a | a^>");
        assert_eq!(d.line, 1);
        let d = err("let n = 3\nassert hom_count(<a|>, S9) == 1");
        assert_eq!(d.line, 2);
    }

    #[test]
    fn roundtrip() {
        let text = "block T = builtin(\"torus_T4\")\n\
                    let L = luttinger(T.T, dir=(1, -2), k=-3)\n\
                    print closed_pi1(L)\n\
                    assert order(<a | a^3>) == 3\n";
        let s = parse(text).unwrap();
        let printed = s.to_string();
        assert_eq!(parse(&printed).unwrap(), s);
        assert_eq!(printed, text);
    }
}
