//! Exact homomorphism counts into small finite groups.

use std::fmt;

use serde::Serialize;

use super::presentation::Presentation;
use super::word::Word;
use crate::error::{Error, Result};

/// Targets supported by [`count_homomorphisms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiniteTarget {
    /// Symmetric group on `n` points, `n <= 5`.
    Symmetric(usize),
    /// Cyclic group of order `m`, `1 <= m <= 12`.
    Cyclic(usize),
}

impl fmt::Display for FiniteTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTarget::Symmetric(n) => write!(f, "S{n}"),
            FiniteTarget::Cyclic(m) => write!(f, "Z/{m}"),
        }
    }
}

impl std::str::FromStr for FiniteTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            offset: 0,
            message: format!("unknown target group `{s}` (expected S<n> or Z/<m>)"),
        };
        let t = if let Some(n) = s.strip_prefix('S') {
            FiniteTarget::Symmetric(n.parse().map_err(|_| bad())?)
        } else if let Some(m) = s.strip_prefix("Z/") {
            FiniteTarget::Cyclic(m.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        t.table().map(|_| t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomCount {
    Exact(u64),
    /// The search cap was reached before the count finished.
    TooLarge,
}

impl HomCount {
    pub fn exact(self) -> Option<u64> {
        match self {
            HomCount::Exact(n) => Some(n),
            HomCount::TooLarge => None,
        }
    }
}

impl fmt::Display for HomCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomCount::Exact(n) => write!(f, "{n}"),
            HomCount::TooLarge => write!(f, "too large"),
        }
    }
}

/// Multiplication table of a finite group; element 0 is the identity.
pub(crate) struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl GroupTable {
    fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let order = perms.len();
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for (i, a) in perms.iter().enumerate() {
            // (a*b)(x) = a(b(x)): right factor acts first.
            for (j, b) in perms.iter().enumerate() {
                let c: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                mul[i * order + j] = index(&c);
            }
            let mut ai = vec![0; n];
            for (x, &y) in a.iter().enumerate() {
                ai[y] = x;
            }
            inv[i] = index(&ai);
        }
        GroupTable { order, mul, inv }
    }

    fn cyclic(m: usize) -> Self {
        let mut mul = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                mul[i * m + j] = (i + j) % m;
            }
        }
        let inv = (0..m).map(|i| (m - i) % m).collect();
        GroupTable { order: m, mul, inv }
    }

    fn eval(&self, w: &Word, assignment: &[usize]) -> usize {
        w.letters().iter().fold(0, |acc, l| {
            let x = assignment[l.generator];
            let x = if l.inverse { self.inv[x] } else { x };
            self.mul[acc * self.order + x]
        })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl FiniteTarget {
    fn table(self) -> Result<GroupTable> {
        match self {
            FiniteTarget::Symmetric(n) if (1..=5).contains(&n) => Ok(GroupTable::symmetric(n)),
            FiniteTarget::Cyclic(m) if (1..=12).contains(&m) => Ok(GroupTable::cyclic(m)),
            other => Err(Error::Parse {
                offset: 0,
                message: format!("unsupported target group {other}"),
            }),
        }
    }

    pub fn order(self) -> usize {
        match self {
            FiniteTarget::Symmetric(n) => (1..=n).product(),
            FiniteTarget::Cyclic(m) => m,
        }
    }
}

/// Default number of candidate assignments examined before giving up.
pub const DEFAULT_SEARCH_CAP: u64 = 20_000_000;

pub fn count_homomorphisms(p: &Presentation, target: FiniteTarget) -> Result<HomCount> {
    count_homomorphisms_with_cap(p, target, DEFAULT_SEARCH_CAP)
}

/// Counts assignments of generators to target elements that satisfy every
/// relator, by backtracking. Generators are assigned greedily so that
/// relators can be checked as early as possible.
pub fn count_homomorphisms_with_cap(
    p: &Presentation,
    target: FiniteTarget,
    cap: u64,
) -> Result<HomCount> {
    let table = target.table()?;
    let n = p.generator_count();
    let relators: Vec<&Word> = p.relators().iter().filter(|r| !r.is_empty()).collect();

    let used: Vec<bool> = (0..n)
        .map(|g| relators.iter().any(|r| r.contains_generator(g)))
        .collect();
    let free_factor = (table.order as u64).pow(used.iter().filter(|u| !**u).count() as u32);

    // Greedy order: next generator completes the most relators.
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; n];
    let mut pending: Vec<usize> = (0..relators.len()).collect();
    let mut checks: Vec<Vec<usize>> = Vec::new();
    while order.len() < used.iter().filter(|u| **u).count() {
        let best = (0..n)
            .filter(|&g| used[g] && !placed[g])
            .max_by_key(|&g| {
                let done = pending
                    .iter()
                    .filter(|&&r| {
                        relators[r]
                            .letters()
                            .iter()
                            .all(|l| placed[l.generator] || l.generator == g)
                    })
                    .count();
                (done, std::cmp::Reverse(g))
            })
            .unwrap();
        placed[best] = true;
        order.push(best);
        let (now, later): (Vec<usize>, Vec<usize>) = pending
            .iter()
            .partition(|&&r| relators[r].letters().iter().all(|l| placed[l.generator]));
        checks.push(now);
        pending = later;
    }

    struct Search<'a> {
        table: &'a GroupTable,
        relators: &'a [&'a Word],
        order: &'a [usize],
        checks: &'a [Vec<usize>],
        assignment: Vec<usize>,
        work: u64,
        cap: u64,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize) -> Option<u64> {
            if depth == self.order.len() {
                return Some(1);
            }
            let g = self.order[depth];
            let mut total = 0;
            for x in 0..self.table.order {
                self.work += 1;
                if self.work > self.cap {
                    return None;
                }
                self.assignment[g] = x;
                let ok = self.checks[depth]
                    .iter()
                    .all(|&r| self.table.eval(self.relators[r], &self.assignment) == 0);
                if ok {
                    total += self.go(depth + 1)?;
                }
            }
            Some(total)
        }
    }

    let mut search = Search {
        table: &table,
        relators: &relators,
        order: &order,
        checks: &checks,
        assignment: vec![0; n],
        work: 0,
        cap,
    };
    Ok(match search.go(0) {
        Some(c) => HomCount::Exact(c * free_factor),
        None => HomCount::TooLarge,
    })
}
