//! Todd–Coxeter coset enumeration over the trivial subgroup (HLT strategy
//! with coincidence processing through union-find).

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::fp::Presentation;

pub const DEFAULT_MAX_COSETS: usize = 50_000;

const UNDEF: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Finite(usize),
    Exceeded(usize),
}

/// A closed coset table, live cosets renumbered `0..order` with the
/// subgroup coset at 0. Column `2g` is generator `g`, column `2g + 1` its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub columns: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Permutation of cosets induced by a column.
    pub fn action(&self, column: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[column]).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.rows.iter().enumerate().all(|(c, row)| {
            row.iter()
                .enumerate()
                .all(|(x, &d)| d < self.rows.len() && self.rows[d][x ^ 1] == c)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub outcome: Outcome,
    pub live_cosets_at_end: usize,
    /// Total number of cosets defined.
    pub work: usize,
    pub table: Option<CosetTable>,
}

impl EnumerationResult {
    pub fn order(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Finite(n) => Some(n),
            Outcome::Exceeded(_) => None,
        }
    }
}

impl fmt::Display for EnumerationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Finite(n) => write!(f, "finite, order {n} ({} cosets defined)", self.work),
            Outcome::Exceeded(cap) => write!(f, "exceeded cap of {cap} cosets"),
        }
    }
}

impl Serialize for EnumerationResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EnumerationResult", 3)?;
        match self.outcome {
            Outcome::Finite(n) => {
                s.serialize_field("outcome", "finite")?;
                s.serialize_field("order", &n)?;
                s.serialize_field("work", &self.work)?;
            }
            Outcome::Exceeded(cap) => {
                s.serialize_field("outcome", "exceeded")?;
                s.serialize_field("cap", &cap)?;
            }
        }
        s.end()
    }
}

struct CapExceeded;

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    cap: usize,
}

impl Enumerator {
    fn new(generators: usize, cap: usize) -> Self {
        let cols = 2 * generators;
        Enumerator {
            cols,
            table: vec![UNDEF; cols],
            parent: vec![0],
            cap,
        }
    }

    fn defined(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.cols + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), CapExceeded> {
        if self.defined() >= self.cap {
            return Err(CapExceeded);
        }
        let d = self.defined();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (keep, kill) = (a.min(b), a.max(b));
            self.parent[kill] = keep;
            queue.push(kill);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.get(mu, x) != UNDEF {
                    let t = self.get(mu, x);
                    self.merge(nu, t, &mut queue);
                } else if self.get(nu, x ^ 1) != UNDEF {
                    let t = self.get(nu, x ^ 1);
                    self.merge(mu, t, &mut queue);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
        if cfg!(debug_assertions) && self.defined() <= 2048 {
            debug_assert!(
                self.consistent(),
                "coset table inconsistent after coincidence"
            );
        }
    }

    /// Every defined entry of a live row points to a live coset whose
    /// inverse entry points back.
    fn consistent(&self) -> bool {
        (0..self.defined()).filter(|&c| self.is_live(c)).all(|c| {
            (0..self.cols).all(|x| {
                let d = self.get(c, x);
                d == UNDEF || (self.is_live(d) && self.get(d, x ^ 1) == c)
            })
        })
    }

    fn scan_and_fill(&mut self, c: usize, rel: &[usize]) -> Result<(), CapExceeded> {
        let len = rel.len();
        loop {
            let mut f = c;
            let mut i = 0;
            while i < len && self.get(f, rel[i]) != UNDEF {
                f = self.get(f, rel[i]);
                i += 1;
            }
            if i == len {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            let mut b = c;
            let mut j = len;
            while j > i && self.get(b, rel[j - 1] ^ 1) != UNDEF {
                b = self.get(b, rel[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, rel[i], b);
                self.set(b, rel[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, rel[i])?;
        }
    }

    fn run(&mut self, relators: &[Vec<usize>]) -> Result<(), CapExceeded> {
        let mut c = 0;
        while c < self.defined() {
            for rel in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan_and_fill(c, rel)?;
            }
            if self.is_live(c) {
                for x in 0..self.cols {
                    if self.get(c, x) == UNDEF {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn compact(&mut self) -> CosetTable {
        let live: Vec<usize> = (0..self.defined()).filter(|&c| self.is_live(c)).collect();
        let mut index = vec![UNDEF; self.defined()];
        for (k, &c) in live.iter().enumerate() {
            index[c] = k;
        }
        let rows = live
            .iter()
            .map(|&c| (0..self.cols).map(|x| index[self.get(c, x)]).collect())
            .collect();
        CosetTable {
            columns: self.cols,
            rows,
        }
    }
}

/// Enumerates cosets of the trivial subgroup. Deterministic in `(p, cap)`;
/// groups that are infinite (or just too large) end in
/// [`Outcome::Exceeded`].
pub fn todd_coxeter(p: &Presentation, cap: usize) -> EnumerationResult {
    let cap = cap.max(1);
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.letters()
                .iter()
                .map(|l| 2 * l.generator + usize::from(l.inverse))
                .collect()
        })
        .collect();
    let mut e = Enumerator::new(p.generator_count(), cap);
    match e.run(&relators) {
        Ok(()) => {
            let table = e.compact();
            let n = table.rows.len();
            EnumerationResult {
                outcome: Outcome::Finite(n),
                live_cosets_at_end: n,
                work: e.defined(),
                table: Some(table),
            }
        }
        Err(CapExceeded) => EnumerationResult {
            outcome: Outcome::Exceeded(cap),
            live_cosets_at_end: (0..e.defined()).filter(|&c| e.is_live(c)).count(),
            work: e.defined(),
            table: None,
        },
    }
}
