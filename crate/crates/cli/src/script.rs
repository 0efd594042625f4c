//! Construction-script syntax tree and its canonical printer.

use std::fmt;

use luttinger_core::abelian::AbelianInvariants;

/// Source position (1-based). All positions compare equal, so two scripts
/// are equal when their statements are, wherever they came from.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchItem {
    pub left: String,
    pub right: String,
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arg {
    pub keyword: Option<String>,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Str(String),
    Name(String),
    /// `Block.Label`
    Label {
        block: String,
        label: String,
    },
    Call {
        name: String,
        args: Vec<Arg>,
    },
    /// `< ... >`, kept as written.
    Presentation(String),
    /// A word in group syntax, first argument of `trivial`.
    Word(String),
    /// `S3`, `Z/4`: second argument of `hom_count`.
    Target(String),
    /// `Z^2`, `Z + Z/2`
    Invariants(AbelianInvariants),
    Tuple(Vec<Expr>),
    Match(Vec<MatchItem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Equals(Expr, Expr),
    /// A boolean-valued expression such as `trivial(w, G)`.
    Holds(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementKind {
    Block { name: String, builtin: String },
    Let { name: String, value: Expr },
    Assert(Predicate),
    Print(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

impl Expr {
    /// Names of bindings this expression reads.
    pub fn references(&self, out: &mut Vec<String>) {
        match &self.kind {
            ExprKind::Name(n) => out.push(n.clone()),
            ExprKind::Label { block, .. } => out.push(block.clone()),
            ExprKind::Call { args, .. } => args.iter().for_each(|a| a.value.references(out)),
            ExprKind::Tuple(items) => items.iter().for_each(|e| e.references(out)),
            _ => {}
        }
    }
}

impl Statement {
    pub fn references(&self) -> Vec<String> {
        let mut out = Vec::new();
        match &self.kind {
            StatementKind::Block { .. } => {}
            StatementKind::Let { value, .. } => value.references(&mut out),
            StatementKind::Assert(Predicate::Equals(a, b)) => {
                a.references(&mut out);
                b.references(&mut out);
            }
            StatementKind::Assert(Predicate::Holds(e)) | StatementKind::Print(e) => {
                e.references(&mut out)
            }
        }
        out
    }

    pub fn binds(&self) -> Option<&str> {
        match &self.kind {
            StatementKind::Block { name, .. } | StatementKind::Let { name, .. } => Some(name),
            _ => None,
        }
    }
}

/// ASCII form of an abelian group, as accepted by the script syntax.
pub fn invariants_text(a: &AbelianInvariants) -> String {
    a.to_string().replace(" ⊕ ", " + ")
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Str(s) => write!(f, "{}", quote(s)),
            ExprKind::Name(n) => write!(f, "{n}"),
            ExprKind::Label { block, label } => write!(f, "{block}.{label}"),
            ExprKind::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if let Some(k) = &a.keyword {
                        write!(f, "{k}=")?;
                    }
                    write!(f, "{}", a.value)?;
                }
                write!(f, ")")
            }
            ExprKind::Presentation(p) | ExprKind::Word(p) | ExprKind::Target(p) => {
                write!(f, "{p}")
            }
            ExprKind::Invariants(a) => write!(f, "{}", invariants_text(a)),
            ExprKind::Tuple(items) => {
                write!(f, "(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            ExprKind::Match(items) => {
                write!(f, "[")?;
                for (i, m) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}->{}", m.left, m.right)?;
                    if m.inverted {
                        write!(f, "^-1")?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StatementKind::Block { name, builtin } => {
                write!(f, "block {name} = builtin({})", quote(builtin))
            }
            StatementKind::Let { name, value } => write!(f, "let {name} = {value}"),
            StatementKind::Assert(Predicate::Equals(a, b)) => write!(f, "assert {a} == {b}"),
            StatementKind::Assert(Predicate::Holds(e)) => write!(f, "assert {e}"),
            StatementKind::Print(e) => write!(f, "print {e}"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
