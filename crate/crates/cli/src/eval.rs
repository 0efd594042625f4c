//! Script evaluation and the run report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value as Json};

use luttinger_core::abelian::{abelianization, AbelianInvariants};
use luttinger_core::catalog::Catalog;
use luttinger_core::coset::{todd_coxeter, EnumerationResult, Outcome, DEFAULT_MAX_COSETS};
use luttinger_core::fp::{
    count_homomorphisms, tietze_simplify, word_trivial_under, Effort, FiniteTarget, HomCount,
    Presentation,
};
use luttinger_core::manifold::{
    blow_up, closed_pi1, fiber_sum, luttinger, GluingMatch, ManifoldBlock,
};

use crate::script::{
    invariants_text, Arg, Expr, ExprKind, MatchItem, Pos, Predicate, Script, Statement,
    StatementKind,
};

#[derive(Clone)]
pub struct RunOptions {
    pub max_cosets: usize,
    /// Simplification effort level, 1 = default budget.
    pub effort: usize,
    pub catalog: Catalog,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_cosets: DEFAULT_MAX_COSETS,
            effort: 1,
            catalog: Catalog::standard(),
        }
    }
}

impl RunOptions {
    fn effort(&self) -> Effort {
        Effort::level(self.effort)
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Str(String),
    Bool(bool),
    Block(ManifoldBlock),
    Group {
        presentation: Presentation,
        certificate: Option<String>,
    },
    Abelian(AbelianInvariants),
    Order(EnumerationResult),
    Homs {
        target: FiniteTarget,
        count: HomCount,
    },
    Tuple(Vec<Value>),
    Match(Vec<MatchItem>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::Bool(_) => "boolean",
            Value::Block(_) => "block",
            Value::Group { .. } => "group",
            Value::Abelian(_) => "abelian group",
            Value::Order(_) => "order",
            Value::Homs { .. } => "homomorphism count",
            Value::Tuple(_) => "tuple",
            Value::Match(_) => "match",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Str(s) => format!("{s:?}"),
            Value::Bool(true) => "true".into(),
            Value::Bool(false) => "false (not shown trivial)".into(),
            Value::Block(b) => {
                let labels: Vec<&str> = b.marked.iter().map(|m| m.label.as_str()).collect();
                let mut s = format!("block {}: e = {}, sigma = {}", b.name, b.euler, b.signature);
                if !labels.is_empty() {
                    write!(s, ", marked {}", labels.join(", ")).unwrap();
                }
                s
            }
            Value::Group { presentation, .. } => presentation.to_text(),
            Value::Abelian(a) => invariants_text(a),
            Value::Order(r) => match r.outcome {
                Outcome::Finite(n) => format!("finite, order {n}"),
                Outcome::Exceeded(cap) => format!("unknown, coset cap {cap} exceeded"),
            },
            Value::Homs { target, count } => format!("{count} homomorphisms to {target}"),
            Value::Tuple(items) => {
                let parts: Vec<String> = items.iter().map(Value::describe).collect();
                format!("({})", parts.join(", "))
            }
            Value::Match(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|m| {
                        format!(
                            "{}->{}{}",
                            m.left,
                            m.right,
                            if m.inverted { "^-1" } else { "" }
                        )
                    })
                    .collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Int(n) => json!({"type": "integer", "value": n}),
            Value::Str(s) => json!({"type": "string", "value": s}),
            Value::Bool(b) => json!({"type": "boolean", "value": b}),
            Value::Block(b) => json!({"type": "block", "value": b.to_json()}),
            Value::Group {
                presentation,
                certificate,
            } => json!({
                "type": "group",
                "presentation": presentation.to_text(),
                "certificate": certificate,
            }),
            Value::Abelian(a) => json!({"type": "abelian", "text": invariants_text(a), "value": a}),
            Value::Order(r) => json!({"type": "order", "value": r}),
            Value::Homs { target, count } => {
                json!({"type": "hom_count", "target": target.to_string(), "value": count})
            }
            Value::Tuple(items) => {
                json!({"type": "tuple", "value": items.iter().map(Value::to_json).collect::<Vec<_>>()})
            }
            Value::Match(_) => json!({"type": "match", "value": self.describe()}),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub pos: Pos,
    pub message: String,
}

fn fail<T>(pos: Pos, message: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError {
        pos,
        message: message.into(),
    })
}

fn core_err(pos: Pos) -> impl Fn(luttinger_core::Error) -> EvalError {
    move |e| EvalError {
        pos,
        message: e.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    /// A binding or print that evaluated.
    Ok,
    Pass,
    Fail,
    Error,
    Skipped,
}

impl EntryStatus {
    fn tag(self) -> &'static str {
        match self {
            EntryStatus::Ok => "ok",
            EntryStatus::Pass => "PASS",
            EntryStatus::Fail => "FAIL",
            EntryStatus::Error => "ERROR",
            EntryStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub line: usize,
    pub column: usize,
    pub kind: &'static str,
    pub statement: String,
    pub status: EntryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binding: Option<String>,
    /// Value bound, printed, or computed on the left of an assertion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub assertions: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script: Option<String>,
    /// Seconds since the Unix epoch; omitted for reproducible output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub options: Json,
    pub entries: Vec<Entry>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl RunReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            writeln!(
                out,
                "{:<7} {}:{}  {}",
                e.status.tag(),
                e.line,
                e.column,
                e.statement
            )
            .unwrap();
            if let Some(d) = &e.display {
                match &e.binding {
                    Some(b) => writeln!(out, "        {b} = {d}").unwrap(),
                    None => writeln!(out, "        computed: {d}").unwrap(),
                }
            }
            if let Some(x) = &e.expected {
                writeln!(out, "        expected: {x}").unwrap();
            }
            if let Some(m) = &e.message {
                writeln!(out, "        {m}").unwrap();
            }
            for n in &e.notes {
                writeln!(out, "        note: {n}").unwrap();
            }
        }
        let s = &self.summary;
        writeln!(
            out,
            "{}/{} assertions pass, {} failed, {} errors, {} skipped",
            s.passed, s.assertions, s.failed, s.errors, s.skipped
        )
        .unwrap();
        out
    }
}

/// Keyword-or-positional argument access for one call.
struct Args<'a> {
    call: &'a str,
    pos: Pos,
    args: &'a [Arg],
    used: Vec<bool>,
}

impl<'a> Args<'a> {
    fn new(call: &'a str, pos: Pos, args: &'a [Arg]) -> Self {
        Args {
            call,
            pos,
            args,
            used: vec![false; args.len()],
        }
    }

    fn get(&mut self, index: usize, name: &str) -> Option<&'a Expr> {
        let found = self
            .args
            .iter()
            .position(|a| a.keyword.as_deref() == Some(name))
            .or_else(|| {
                self.args
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.keyword.is_none())
                    .nth(index)
                    .map(|(i, _)| i)
            })?;
        self.used[found] = true;
        Some(&self.args[found].value)
    }

    fn need(&mut self, index: usize, name: &str) -> Result<&'a Expr, EvalError> {
        match self.get(index, name) {
            Some(e) => Ok(e),
            None => fail(
                self.pos,
                format!("{} is missing argument `{name}`", self.call),
            ),
        }
    }

    fn finish(&self) -> Result<(), EvalError> {
        match self.used.iter().position(|u| !u) {
            None => Ok(()),
            Some(i) => {
                let a = &self.args[i];
                let what = match &a.keyword {
                    Some(k) => format!("unknown argument `{k}`"),
                    None => "too many arguments".to_string(),
                };
                fail(a.value.pos, format!("{}: {what}", self.call))
            }
        }
    }
}

struct Evaluator<'o> {
    opts: &'o RunOptions,
    env: BTreeMap<String, Value>,
}

impl Evaluator<'_> {
    fn eval(&self, e: &Expr) -> Result<Value, EvalError> {
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Int(*n),
            ExprKind::Str(s) => Value::Str(s.clone()),
            ExprKind::Invariants(a) => Value::Abelian(a.clone()),
            ExprKind::Presentation(text) => Value::Group {
                presentation: Presentation::parse(text).map_err(core_err(e.pos))?,
                certificate: None,
            },
            ExprKind::Name(n) => match self.env.get(n) {
                Some(v) => v.clone(),
                None => return fail(e.pos, format!("unbound name `{n}`")),
            },
            ExprKind::Label { block, label } => {
                return fail(
                    e.pos,
                    format!(
                    "`{block}.{label}` can only be used as an argument of fiber_sum or luttinger"
                ),
                )
            }
            ExprKind::Word(_) | ExprKind::Target(_) => {
                return fail(e.pos, "word or target group outside its operation")
            }
            ExprKind::Tuple(items) => Value::Tuple(
                items
                    .iter()
                    .map(|i| self.eval(i))
                    .collect::<Result<_, _>>()?,
            ),
            ExprKind::Match(items) => Value::Match(items.clone()),
            ExprKind::Call { name, args } => self.call(name, args, e.pos)?,
        })
    }

    fn block(&self, e: &Expr) -> Result<ManifoldBlock, EvalError> {
        match self.eval(e)? {
            Value::Block(b) => Ok(b),
            other => fail(e.pos, format!("expected a block, found {}", other.kind())),
        }
    }

    fn int(&self, e: &Expr) -> Result<i64, EvalError> {
        match self.eval(e)? {
            Value::Int(n) => Ok(n),
            other => fail(
                e.pos,
                format!("expected an integer, found {}", other.kind()),
            ),
        }
    }

    /// Groups and blocks (through their closed fundamental group).
    fn group(&self, e: &Expr) -> Result<Presentation, EvalError> {
        match self.eval(e)? {
            Value::Group { presentation, .. } => Ok(presentation),
            Value::Block(b) => Ok(closed_pi1(&b)),
            other => fail(
                e.pos,
                format!("expected a group or block, found {}", other.kind()),
            ),
        }
    }

    /// `Block.Label`, checked against the block's markings.
    fn marked(&self, e: &Expr) -> Result<(ManifoldBlock, String), EvalError> {
        let ExprKind::Label { block, label } = &e.kind else {
            return fail(e.pos, "expected a marked submanifold such as `W.F`");
        };
        let b = match self.env.get(block) {
            Some(Value::Block(b)) => b.clone(),
            Some(other) => {
                return fail(
                    e.pos,
                    format!("`{block}` is a {}, not a block", other.kind()),
                )
            }
            None => return fail(e.pos, format!("unbound name `{block}`")),
        };
        if b.marked(label).is_err() {
            let available: Vec<&str> = b.marked.iter().map(|m| m.label.as_str()).collect();
            let available = if available.is_empty() {
                "it has none".to_string()
            } else {
                format!("available: {}", available.join(", "))
            };
            return fail(
                e.pos,
                format!("block `{block}` has no marked submanifold `{label}` ({available})"),
            );
        }
        Ok((b, label.clone()))
    }

    fn call(&self, name: &str, args: &[Arg], pos: Pos) -> Result<Value, EvalError> {
        let mut a = Args::new(name, pos, args);
        let value = match name {
            "fiber_sum" => {
                let (x, sx) = self.marked(a.need(0, "left")?)?;
                let (y, sy) = self.marked(a.need(1, "right")?)?;
                let genus = x.marked(&sx).map_err(core_err(pos))?.genus;
                let m = match a.get(2, "match") {
                    None => GluingMatch::identity(genus),
                    Some(e) => match self.eval(e)? {
                        Value::Match(items) => {
                            let pairs: Vec<(&str, &str, bool)> = items
                                .iter()
                                .map(|m| (m.left.as_str(), m.right.as_str(), m.inverted))
                                .collect();
                            GluingMatch::from_labels(
                                x.marked(&sx).map_err(core_err(e.pos))?,
                                y.marked(&sy).map_err(core_err(e.pos))?,
                                &pairs,
                            )
                            .map_err(core_err(e.pos))?
                        }
                        other => {
                            return fail(e.pos, format!("expected a match, found {}", other.kind()))
                        }
                    },
                };
                a.finish()?;
                Value::Block(fiber_sum(&x, &sx, &y, &sy, &m).map_err(core_err(pos))?)
            }
            "luttinger" => {
                let (b, torus) = self.marked(a.need(0, "torus")?)?;
                let dir_expr = a.need(1, "dir")?;
                let dir = match self.eval(dir_expr)? {
                    Value::Tuple(v) => match v.as_slice() {
                        [Value::Int(p), Value::Int(q)] => (*p, *q),
                        _ => {
                            return fail(
                                dir_expr.pos,
                                "direction must be a pair of integers (p, q)",
                            )
                        }
                    },
                    other => {
                        return fail(
                            dir_expr.pos,
                            format!("direction must be a pair (p, q), found {}", other.kind()),
                        )
                    }
                };
                let k = match a.get(2, "k") {
                    Some(e) => self.int(e)?,
                    None => 1,
                };
                a.finish()?;
                Value::Block(luttinger(&b, &torus, dir, k).map_err(core_err(pos))?)
            }
            "blow_up" => {
                let b = self.block(a.need(0, "block")?)?;
                let n = match a.get(1, "n") {
                    Some(e) => {
                        let n = self.int(e)?;
                        match u32::try_from(n) {
                            Ok(n) => n,
                            Err(_) => return fail(e.pos, "blow_up count must be non-negative"),
                        }
                    }
                    None => 1,
                };
                a.finish()?;
                Value::Block(blow_up(&b, n))
            }
            "closed_pi1" => {
                let b = self.block(a.need(0, "block")?)?;
                a.finish()?;
                Value::Group {
                    presentation: closed_pi1(&b),
                    certificate: None,
                }
            }
            "complement" => {
                let b = self.block(a.need(0, "block")?)?;
                a.finish()?;
                Value::Group {
                    presentation: b.complement,
                    certificate: None,
                }
            }
            "simplify" => {
                let g = self.group(a.need(0, "group")?)?;
                a.finish()?;
                let s = tietze_simplify(&g, self.opts.effort());
                let mut cert = s.certificate.summary();
                if s.budget_exhausted {
                    cert.push_str(" (effort budget exhausted)");
                }
                Value::Group {
                    presentation: s.presentation,
                    certificate: Some(cert),
                }
            }
            "abelianization" => {
                let g = self.group(a.need(0, "group")?)?;
                a.finish()?;
                Value::Abelian(abelianization(&g))
            }
            "order" => {
                let g = self.group(a.need(0, "group")?)?;
                a.finish()?;
                Value::Order(todd_coxeter(&g, self.opts.max_cosets))
            }
            "hom_count" => {
                let g = self.group(a.need(0, "group")?)?;
                let t = a.need(1, "target")?;
                a.finish()?;
                let ExprKind::Target(text) = &t.kind else {
                    return fail(t.pos, "expected a target group such as S3 or Z/4");
                };
                let target: FiniteTarget = text.parse().map_err(core_err(t.pos))?;
                let count = count_homomorphisms(&g, target).map_err(core_err(pos))?;
                Value::Homs { target, count }
            }
            "euler" | "sigma" => {
                let b = self.block(a.need(0, "block")?)?;
                a.finish()?;
                Value::Int(if name == "euler" {
                    b.euler
                } else {
                    b.signature
                })
            }
            "trivial" => {
                let w = a.need(0, "word")?;
                let g_expr = a.need(1, "group")?;
                a.finish()?;
                // For a block the word lives in the complement, where the
                // meridians are nontrivial generators of the relator set.
                let g = match self.eval(g_expr)? {
                    Value::Block(b) => b.complement,
                    Value::Group { presentation, .. } => presentation,
                    other => {
                        return fail(
                            g_expr.pos,
                            format!("expected a group or block, found {}", other.kind()),
                        )
                    }
                };
                let ExprKind::Word(text) = &w.kind else {
                    return fail(w.pos, "expected a word");
                };
                let word = g.parse_word(text).map_err(core_err(w.pos))?;
                let s = tietze_simplify(&g, self.opts.effort());
                Value::Bool(word_trivial_under(&s.certificate, &word).map_err(core_err(pos))?)
            }
            other => return fail(pos, format!("unknown operation `{other}`")),
        };
        Ok(value)
    }

    /// Evaluates `left == right`; returns (holds, computed, expected).
    fn compare(&self, l: &Expr, r: &Expr) -> Result<(bool, Value, Value), EvalError> {
        let lv = self.eval(l)?;
        let rv = self.eval(r)?;
        let holds = match equal(&lv, &rv).or_else(|| equal(&rv, &lv)) {
            Some(h) => h,
            None => {
                return fail(
                    l.pos,
                    format!("cannot compare {} with {}", lv.kind(), rv.kind()),
                )
            }
        };
        Ok((holds, lv, rv))
    }
}

fn equal(a: &Value, b: &Value) -> Option<bool> {
    Some(match (a, b) {
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Order(r), Value::Int(n)) => r.order().is_some_and(|o| o as i64 == *n),
        (Value::Homs { count, .. }, Value::Int(n)) => count.exact().is_some_and(|c| c as i64 == *n),
        (Value::Abelian(x), Value::Abelian(y)) => x == y,
        // `0` and `1` both name the trivial group.
        (Value::Abelian(x), Value::Int(0 | 1)) => x.is_trivial(),
        (
            Value::Group {
                presentation: x, ..
            },
            Value::Group {
                presentation: y, ..
            },
        ) => x.same_up_to_normalization(y),
        _ => return None,
    })
}

fn entry(s: &Statement, kind: &'static str, status: EntryStatus) -> Entry {
    Entry {
        line: s.pos.line,
        column: s.pos.column,
        kind,
        statement: s.to_string(),
        status,
        binding: s.binds().map(str::to_string),
        value: None,
        display: None,
        expected: None,
        message: None,
        notes: Vec::new(),
    }
}

fn error_message(e: &EvalError) -> String {
    format!("{}: {}", e.pos, e.message)
}

/// Evaluates every statement in order. Statements that depend on a binding
/// whose evaluation failed are skipped, not re-reported.
pub fn run(script: &Script, opts: &RunOptions) -> RunReport {
    let mut ev = Evaluator {
        opts,
        env: BTreeMap::new(),
    };
    let mut failed: BTreeSet<String> = BTreeSet::new();
    let mut entries = Vec::new();
    let mut summary = Summary::default();

    for s in &script.statements {
        let kind = match &s.kind {
            StatementKind::Block { .. } => "block",
            StatementKind::Let { .. } => "let",
            StatementKind::Assert(_) => "assert",
            StatementKind::Print(_) => "print",
        };
        if matches!(s.kind, StatementKind::Assert(_)) {
            summary.assertions += 1;
        }
        let refs = s.references();
        if let Some(dep) = refs.iter().find(|r| failed.contains(*r)) {
            let mut e = entry(s, kind, EntryStatus::Skipped);
            e.message = Some(format!("depends on `{dep}`, which failed"));
            if let Some(b) = s.binds() {
                failed.insert(b.to_string());
            }
            summary.skipped += 1;
            entries.push(e);
            continue;
        }

        let mut e = entry(s, kind, EntryStatus::Ok);
        let outcome: Result<(), EvalError> = (|| {
            match &s.kind {
                StatementKind::Block { name, builtin } => {
                    let b = opts.catalog.get(builtin).map_err(core_err(s.pos))?;
                    e.notes = b.notes.clone();
                    let v = Value::Block(b);
                    e.display = Some(v.describe());
                    e.value = Some(v.to_json());
                    ev.env.insert(name.clone(), v);
                }
                StatementKind::Let { name, value } => {
                    let mut v = ev.eval(value)?;
                    if let Value::Block(b) = &mut v {
                        b.name = name.clone();
                        let inherited: BTreeSet<&String> = refs
                            .iter()
                            .filter_map(|r| match ev.env.get(r) {
                                Some(Value::Block(x)) => Some(x.notes.iter()),
                                _ => None,
                            })
                            .flatten()
                            .collect();
                        e.notes = b
                            .notes
                            .iter()
                            .filter(|n| !inherited.contains(n))
                            .cloned()
                            .collect();
                    }
                    e.display = Some(v.describe());
                    e.value = Some(v.to_json());
                    ev.env.insert(name.clone(), v);
                }
                StatementKind::Print(x) => {
                    let v = ev.eval(x)?;
                    e.display = Some(v.describe());
                    e.value = Some(v.to_json());
                }
                StatementKind::Assert(Predicate::Equals(l, r)) => {
                    let (holds, lv, rv) = ev.compare(l, r)?;
                    e.display = Some(lv.describe());
                    e.value = Some(lv.to_json());
                    e.expected = Some(rv.describe());
                    if holds {
                        e.status = EntryStatus::Pass;
                    } else {
                        e.status = EntryStatus::Fail;
                        e.message = Some(format!(
                            "computed {}, expected {}",
                            lv.describe(),
                            rv.describe()
                        ));
                    }
                }
                StatementKind::Assert(Predicate::Holds(x)) => {
                    let v = ev.eval(x)?;
                    let Value::Bool(holds) = v else {
                        return fail(x.pos, format!("expected a boolean, found {}", v.kind()));
                    };
                    e.display = Some(v.describe());
                    e.value = Some(v.to_json());
                    e.status = if holds {
                        EntryStatus::Pass
                    } else {
                        EntryStatus::Fail
                    };
                    if !holds {
                        e.message = Some("not shown trivial (inconclusive)".into());
                    }
                }
            }
            Ok(())
        })();

        match outcome {
            Ok(()) => match e.status {
                EntryStatus::Pass => summary.passed += 1,
                EntryStatus::Fail => summary.failed += 1,
                _ => {}
            },
            Err(err) => {
                e.status = EntryStatus::Error;
                e.message = Some(error_message(&err));
                if let Some(b) = s.binds() {
                    failed.insert(b.to_string());
                }
                summary.errors += 1;
            }
        }
        entries.push(e);
    }

    let clean = summary.failed == 0 && summary.errors == 0 && summary.skipped == 0;
    RunReport {
        script: None,
        timestamp: None,
        options: json!({"max_cosets": opts.max_cosets, "effort": opts.effort}),
        entries,
        summary,
        exit_code: if clean { 0 } else { 1 },
    }
}
