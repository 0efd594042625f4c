//! Abelianization through the Smith normal form of the relation matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fp::Presentation;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MalformedWord(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[(n - 1, n - 1)]
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// non-negative divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form by elementary operations, pivoting on the
/// smallest-magnitude nonzero entry of the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&ij| !d[ij].is_zero())
                .min_by(|&a, &b| d[a].abs().cmp(&d[b].abs()));
            let Some((pi, pj)) = pivot else {
                return finish(d, u, v);
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let p = d[(k, k)].clone();
            let mut residue = false;
            for i in k + 1..rows {
                let q = d[(i, k)].div_rem(&p).0;
                if !q.is_zero() {
                    d.add_row(i, k, &-&q);
                    u.add_row(i, k, &-&q);
                }
                residue |= !d[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                let q = d[(k, j)].div_rem(&p).0;
                if !q.is_zero() {
                    d.add_col(j, k, &-&q);
                    v.add_col(j, k, &-&q);
                }
                residue |= !d[(k, j)].is_zero();
            }
            if residue {
                continue;
            }
            let offender =
                (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(d, u, v)
}

fn finish(mut d: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> SmithForm {
    for k in 0..d.rows.min(d.cols) {
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithForm { d, u, v }
}

/// `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with `d1 | d2 | ... | dk`, all `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Normal form of `⊕ Z/n_i`, where an order of 0 stands for `Z`.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &o) in orders.iter().enumerate() {
            m[(i, i)] = BigInt::from(o);
        }
        invariants_of_relation_matrix(&m)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_u64(&self) -> Vec<Option<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }

    /// Parses `0`, `Z^2`, `Z/6`, `Z ⊕ Z/2 ⊕ Z/4` (also `+` for `⊕`).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            offset: 0,
            message: format!("invalid abelian group `{text}`: {m}"),
        };
        let t = text.trim();
        if t == "0" || t == "1" {
            return Ok(AbelianInvariants::default());
        }
        let mut orders = Vec::new();
        for term in t.split(['⊕', '+']) {
            let term = term.trim();
            if term == "Z" {
                orders.push(0);
            } else if let Some(k) = term.strip_prefix("Z^") {
                let k: usize = k.trim().parse().map_err(|_| bad("bad rank"))?;
                orders.extend(std::iter::repeat_n(0, k));
            } else if let Some(n) = term.strip_prefix("Z/") {
                let n: i64 = n.trim().parse().map_err(|_| bad("bad order"))?;
                orders.push(n);
            } else {
                return Err(bad("expected Z, Z^k or Z/n"));
            }
        }
        Ok(AbelianInvariants::from_cyclic_orders(&orders))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        let mut s = serializer.serialize_struct("AbelianInvariants", 2)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        s.serialize_field("torsion", &torsion)?;
        s.end()
    }
}

fn invariants_of_relation_matrix(m: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form(m);
    let diag = snf.d.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianInvariants {
        free_rank: m.cols - nonzero,
        torsion: diag
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect(),
    }
}

/// Relator exponent-sum matrix: one row per relator, one column per
/// generator.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let rows = p.relators().len();
    let cols = p.generator_count();
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, r) in p.relators().iter().enumerate() {
        for l in r.letters() {
            m[(i, l.generator)] += l.sign();
        }
    }
    m
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    invariants_of_relation_matrix(&relation_matrix(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows(m))
            .d
            .diagonal()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(2, 2);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn small_examples() {
        assert_eq!(diag(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        check(&IntMatrix::from_rows(&[vec![0, 0, 5], vec![3, 0, 0]]));
    }

    #[test]
    fn negative_pivots_become_positive() {
        assert_eq!(diag(&[vec![-4]]), vec![4]);
        assert_eq!(diag(&[vec![0, -3], vec![-3, 0]]), vec![3, 3]);
    }

    #[test]
    fn empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), BigInt::one());
    }

    #[test]
    fn determinant_matches_expansion() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2 = -54
        assert_eq!(determinant(&m), BigInt::from(-54));
    }

    #[test]
    fn abelianization_examples() {
        let p = Presentation::parse("<a|a^2>").unwrap();
        let withz = crate::fp::direct_sum_with_z(&p, "s");
        assert_eq!(abelianization(&withz).to_string(), "Z ⊕ Z/2");
        let free = Presentation::parse("<a,b,c|>").unwrap();
        assert_eq!(abelianization(&free), AbelianInvariants::free(3));
    }

    #[test]
    fn text_forms() {
        assert_eq!(
            AbelianInvariants::parse("Z/2 ⊕ Z/3").unwrap().to_string(),
            "Z/6"
        );
        assert_eq!(
            AbelianInvariants::parse("Z^2").unwrap(),
            AbelianInvariants::free(2)
        );
        assert_eq!(
            AbelianInvariants::parse("Z + Z/2 + Z/4")
                .unwrap()
                .to_string(),
            "Z ⊕ Z/2 ⊕ Z/4"
        );
        assert_eq!(
            AbelianInvariants::parse("Z/1 + Z/0").unwrap().to_string(),
            "Z"
        );
        assert!(AbelianInvariants::parse("0").unwrap().is_trivial());
        assert!(AbelianInvariants::parse("Q").is_err());
        let json = serde_json::to_string(&AbelianInvariants::free(2)).unwrap();
        assert_eq!(json, r#"{"free_rank":2,"torsion":[]}"#);
        let json = serde_json::to_string(&AbelianInvariants::parse("Z/6").unwrap()).unwrap();
        assert_eq!(json, r#"{"free_rank":0,"torsion":[6]}"#);
    }
}
