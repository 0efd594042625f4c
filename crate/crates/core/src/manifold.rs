//! Construction calculus for 4-manifold blocks.
//!
//! A [`ManifoldBlock`] records the Euler characteristic, the signature, and
//! the fundamental group of the complement of all of its marked
//! submanifolds. Filling a marked piece back in kills its meridian, so the
//! closed manifold's group is the complement group modulo every meridian.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{
    free_product, quotient_by_normal_closure, tietze_simplify, word_trivial_under, Effort,
    Presentation, Word,
};

pub const SYMPLECTIC: &str = "symplectic";
pub const MINIMAL: &str = "minimal";

/// A surface in a block with a trivialized normal bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSubmanifold {
    pub label: String,
    pub genus: usize,
    /// Meridian loop as a word in the block's complement group.
    pub meridian: Word,
    /// Names of the standard symplectic basis curves, in order.
    pub basis_labels: Vec<String>,
    /// Push-offs of the basis curves into the complement.
    pub pushoff_basis: Vec<Word>,
    pub framing_note: String,
}

impl MarkedSubmanifold {
    pub fn new(
        label: &str,
        genus: usize,
        meridian: Word,
        basis_labels: &[&str],
        pushoff_basis: Vec<Word>,
        framing_note: &str,
    ) -> Self {
        MarkedSubmanifold {
            label: label.to_string(),
            genus,
            meridian,
            basis_labels: basis_labels.iter().map(|s| s.to_string()).collect(),
            pushoff_basis,
            framing_note: framing_note.to_string(),
        }
    }

    pub fn basis_position(&self, name: &str) -> Option<usize> {
        self.basis_labels.iter().position(|b| b == name)
    }

    fn transported(&self, f: impl Fn(&Word) -> Word) -> Self {
        MarkedSubmanifold {
            meridian: f(&self.meridian),
            pushoff_basis: self.pushoff_basis.iter().map(&f).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldBlock {
    pub name: String,
    pub euler: i64,
    pub signature: i64,
    /// Fundamental group of the complement of all marked submanifolds.
    pub complement: Presentation,
    pub marked: Vec<MarkedSubmanifold>,
    /// Informational only; nothing is computed from these.
    pub flags: BTreeSet<String>,
    /// Construction warnings and bookkeeping remarks.
    pub notes: Vec<String>,
}

impl ManifoldBlock {
    pub fn new(
        name: &str,
        euler: i64,
        signature: i64,
        complement: Presentation,
        marked: Vec<MarkedSubmanifold>,
        flags: &[&str],
    ) -> Result<Self> {
        let block = ManifoldBlock {
            name: name.to_string(),
            euler,
            signature,
            complement,
            marked,
            flags: flags.iter().map(|s| s.to_string()).collect(),
            notes: Vec::new(),
        };
        block.validate()?;
        Ok(block)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for m in &self.marked {
            if !seen.insert(m.label.as_str()) {
                return Err(Error::DuplicateLabel(m.label.clone()));
            }
            if m.pushoff_basis.len() != 2 * m.genus || m.basis_labels.len() != 2 * m.genus {
                return Err(Error::InvalidMarking(format!(
                    "`{}` has genus {} but {} push-offs and {} basis labels",
                    m.label,
                    m.genus,
                    m.pushoff_basis.len(),
                    m.basis_labels.len()
                )));
            }
            for w in std::iter::once(&m.meridian).chain(&m.pushoff_basis) {
                self.complement
                    .check_word(w)
                    .map_err(|e| Error::InvalidMarking(format!("`{}`: {e}", m.label)))?;
            }
        }
        Ok(())
    }

    pub fn marked(&self, label: &str) -> Result<&MarkedSubmanifold> {
        self.marked
            .iter()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::UnknownLabel {
                block: self.name.clone(),
                label: label.to_string(),
            })
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BlockDocument::from(self)).expect("block documents serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: BlockDocument =
            serde_json::from_value(v.clone()).map_err(|e| Error::Document(e.to_string()))?;
        doc.into_block()
    }
}

/// Whether `w` is shown trivial in `p` by simplification.
pub fn certified_trivial(p: &Presentation, w: &Word) -> bool {
    if w.is_identity() {
        return true;
    }
    let s = tietze_simplify(p, Effort::default());
    word_trivial_under(&s.certificate, w).unwrap_or(false)
}

/// Fundamental group of the closed manifold: every marked piece filled in.
pub fn closed_pi1(b: &ManifoldBlock) -> Presentation {
    let meridians: Vec<Word> = b.marked.iter().map(|m| m.meridian.clone()).collect();
    quotient_by_normal_closure(&b.complement, &meridians)
        .expect("block words are validated on construction")
}

/// One entry of a [`GluingMatch`]: basis curve `left` of the first surface
/// is identified with basis curve `right` of the second, or with its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchPair {
    pub left: usize,
    pub right: usize,
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingMatch {
    pub pairs: Vec<MatchPair>,
}

impl GluingMatch {
    /// Position `i` to position `i`.
    pub fn identity(genus: usize) -> Self {
        GluingMatch {
            pairs: (0..2 * genus)
                .map(|i| MatchPair {
                    left: i,
                    right: i,
                    inverted: false,
                })
                .collect(),
        }
    }

    /// Builds a match from basis labels, e.g. `("a1", "x1", false)`.
    pub fn from_labels(
        left: &MarkedSubmanifold,
        right: &MarkedSubmanifold,
        pairs: &[(&str, &str, bool)],
    ) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|&(l, r, inverted)| {
                let left_pos = left.basis_position(l).ok_or_else(|| {
                    Error::InvalidMatch(format!("`{l}` is not a basis curve of `{}`", left.label))
                })?;
                let right_pos = right.basis_position(r).ok_or_else(|| {
                    Error::InvalidMatch(format!("`{r}` is not a basis curve of `{}`", right.label))
                })?;
                Ok(MatchPair {
                    left: left_pos,
                    right: right_pos,
                    inverted,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GluingMatch { pairs })
    }

    fn validate(&self, genus: usize) -> Result<()> {
        let n = 2 * genus;
        if self.pairs.len() != n {
            return Err(Error::InvalidMatch(format!(
                "expected {n} pairs for genus {genus}, got {}",
                self.pairs.len()
            )));
        }
        let lefts: HashSet<usize> = self.pairs.iter().map(|p| p.left).collect();
        let rights: HashSet<usize> = self.pairs.iter().map(|p| p.right).collect();
        if lefts.len() != n || rights.len() != n || lefts.iter().chain(&rights).any(|&i| i >= n) {
            return Err(Error::InvalidMatch(
                "pairs must be a bijection on basis positions".into(),
            ));
        }
        Ok(())
    }
}

/// Symplectic sum of `x` and `y` along `sx` and `sy`.
pub fn fiber_sum(
    x: &ManifoldBlock,
    sx: &str,
    y: &ManifoldBlock,
    sy: &str,
    matching: &GluingMatch,
) -> Result<ManifoldBlock> {
    let fx = x.marked(sx)?;
    let fy = y.marked(sy)?;
    if fx.genus != fy.genus {
        return Err(Error::GenusMismatch {
            left: format!("{}.{}", x.name, sx),
            left_genus: fx.genus,
            right: format!("{}.{}", y.name, sy),
            right_genus: fy.genus,
        });
    }
    matching.validate(fx.genus)?;

    let (product, rename) = free_product(&x.complement, &y.complement);
    let mut glue = Vec::with_capacity(2 * fx.genus + 1);
    for pair in &matching.pairs {
        let right = rename.transport(&fy.pushoff_basis[pair.right]);
        let right = if pair.inverted {
            right.inverse()
        } else {
            right
        };
        glue.push(fx.pushoff_basis[pair.left].mul(&right.inverse()));
    }
    let my = rename.transport(&fy.meridian);
    glue.push(fx.meridian.mul(&my.inverse()));
    let complement = quotient_by_normal_closure(&product, &glue)?;

    let mut marked: Vec<MarkedSubmanifold> =
        x.marked.iter().filter(|m| m.label != sx).cloned().collect();
    let taken: HashSet<String> = marked.iter().map(|m| m.label.clone()).collect();
    for m in y.marked.iter().filter(|m| m.label != sy) {
        let mut moved = m.transported(|w| rename.transport(w));
        while taken.contains(&moved.label) {
            moved.label.push(crate::fp::presentation::PRIME);
        }
        marked.push(moved);
    }

    let mut notes: Vec<String> = x.notes.iter().chain(&y.notes).cloned().collect();
    for (old, new) in rename.renamed() {
        notes.push(format!(
            "generator `{old}` of {} renamed to `{new}`",
            y.name
        ));
    }
    if !certified_trivial(&x.complement, &fx.meridian)
        && !certified_trivial(&y.complement, &fy.meridian)
    {
        notes.push(format!(
            "warning: neither meridian of {}.{} nor {}.{} is shown trivial; the gluing twist is not modeled",
            x.name, sx, y.name, sy
        ));
    }

    let genus = fx.genus as i64;
    let mut flags = BTreeSet::new();
    if x.has_flag(SYMPLECTIC) && y.has_flag(SYMPLECTIC) {
        flags.insert(SYMPLECTIC.to_string());
    }
    let block = ManifoldBlock {
        name: format!("{}#{}", x.name, y.name),
        euler: x.euler + y.euler - 2 * (2 - 2 * genus),
        signature: x.signature + y.signature,
        complement,
        marked,
        flags,
        notes,
    };
    block.validate()?;
    Ok(block)
}

/// `1/k` Luttinger surgery on a marked torus along the curve
/// `p * basis[0] + q * basis[1]`.
///
/// The surgery curve is the single word `basis[0]^p * basis[1]^q`; the
/// torus's meridian becomes `gamma^k * meridian` and everything else is
/// unchanged.
pub fn luttinger(
    b: &ManifoldBlock,
    torus: &str,
    direction: (i64, i64),
    k: i64,
) -> Result<ManifoldBlock> {
    let t = b.marked(torus)?;
    if t.genus != 1 {
        return Err(Error::InvalidDirection(format!(
            "`{torus}` has genus {}, surgery needs a torus",
            t.genus
        )));
    }
    let (p, q) = direction;
    if (p, q) == (0, 0) {
        return Err(Error::InvalidDirection("direction (0,0)".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidDirection(format!(
            "direction ({p},{q}) is not primitive"
        )));
    }
    let gamma = t.pushoff_basis[0].pow(p).mul(&t.pushoff_basis[1].pow(q));
    let meridian = gamma.pow(k).mul(&t.meridian);

    let mut out = b.clone();
    out.name = format!("{}({}:{},{};{})", b.name, torus, p, q, k);
    out.notes.push(format!(
        "surgery on {torus}: gamma = {}, k = {k}, new meridian {}",
        b.complement.word_to_string(&gamma),
        b.complement.word_to_string(&meridian)
    ));
    if !certified_trivial(&b.complement, &t.meridian) {
        out.notes.push(format!(
            "warning: meridian of {torus} not shown trivial; push-off framing ambiguity is not resolved"
        ));
    }
    let slot = out.marked.iter_mut().find(|m| m.label == torus).unwrap();
    slot.meridian = meridian;
    Ok(out)
}

/// Generalized mapping torus: adds `t_name` and a relator
/// `t * i * t^-1 * f^-1` for every pair `(i, f)`.
pub fn hnn_mapping_torus(
    x: &Presentation,
    pairs: &[(Word, Word)],
    t_name: &str,
) -> Result<Presentation> {
    for (i, f) in pairs {
        x.check_word(i)?;
        x.check_word(f)?;
    }
    let mut gens: Vec<String> = x.generators().to_vec();
    let mut name = t_name.to_string();
    while gens.contains(&name) {
        name.push(crate::fp::presentation::PRIME);
    }
    let t = Word::generator(gens.len());
    gens.push(name);
    let mut relators = x.relators().to_vec();
    relators.extend(
        pairs
            .iter()
            .map(|(i, f)| t.mul(i).mul(&t.inverse()).mul(&f.inverse())),
    );
    Presentation::new(gens, relators)
}

/// Blowing up `n` points: Euler characteristic up by `n`, signature down
/// by `n`. Presentations and markings are untouched.
pub fn blow_up(b: &ManifoldBlock, n: u32) -> ManifoldBlock {
    let mut out = b.clone();
    if n > 0 {
        out.euler += i64::from(n);
        out.signature -= i64::from(n);
        out.name = format!("{}#{}CP2bar", b.name, n);
    }
    out
}

/// `(e, sigma)` of the manifold realizing a group with `g` generators and
/// `r` relations.
pub fn geography_formulas(g: i64, r: i64) -> (i64, i64) {
    (12 + 8 * (g + r), -8 - 4 * (g + r))
}

/// `(e, sigma)` of the manifold with fundamental group `Z^(2n-1)`.
pub fn free_abelian_formula(n: i64) -> Result<(i64, i64)> {
    if n < 1 {
        return Err(Error::InvalidDirection(format!(
            "free abelian formula needs n >= 1, got {n}"
        )));
    }
    Ok((11 - 5 * n + 2 * n * n, -3 - n))
}

#[derive(Serialize, Deserialize)]
struct MarkedDocument {
    label: String,
    genus: usize,
    meridian: String,
    basis_labels: Vec<String>,
    pushoff_basis: Vec<String>,
    framing_note: String,
}

#[derive(Serialize, Deserialize)]
struct BlockDocument {
    name: String,
    euler: i64,
    signature: i64,
    complement: String,
    marked: Vec<MarkedDocument>,
    flags: Vec<String>,
    #[serde(default)]
    notes: Vec<String>,
}

impl From<&ManifoldBlock> for BlockDocument {
    fn from(b: &ManifoldBlock) -> Self {
        let w = |w: &Word| b.complement.word_to_string(w);
        BlockDocument {
            name: b.name.clone(),
            euler: b.euler,
            signature: b.signature,
            complement: b.complement.to_text(),
            marked: b
                .marked
                .iter()
                .map(|m| MarkedDocument {
                    label: m.label.clone(),
                    genus: m.genus,
                    meridian: w(&m.meridian),
                    basis_labels: m.basis_labels.clone(),
                    pushoff_basis: m.pushoff_basis.iter().map(w).collect(),
                    framing_note: m.framing_note.clone(),
                })
                .collect(),
            flags: b.flags.iter().cloned().collect(),
            notes: b.notes.clone(),
        }
    }
}

impl BlockDocument {
    fn into_block(self) -> Result<ManifoldBlock> {
        let complement = Presentation::parse(&self.complement)?;
        let marked = self
            .marked
            .into_iter()
            .map(|m| {
                Ok(MarkedSubmanifold {
                    meridian: complement.parse_word(&m.meridian)?,
                    pushoff_basis: m
                        .pushoff_basis
                        .iter()
                        .map(|s| complement.parse_word(s))
                        .collect::<Result<_>>()?,
                    label: m.label,
                    genus: m.genus,
                    basis_labels: m.basis_labels,
                    framing_note: m.framing_note,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let block = ManifoldBlock {
            name: self.name,
            euler: self.euler,
            signature: self.signature,
            complement,
            marked,
            flags: self.flags.into_iter().collect(),
            notes: self.notes,
        };
        block.validate()?;
        Ok(block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::abelianization;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    fn torus_block() -> ManifoldBlock {
        let c = pres("<x,y,c,d | [x,y],[x,c],[x,d],[y,c],[y,d]>");
        let m = MarkedSubmanifold::new(
            "T",
            1,
            c.parse_word("[c,d]").unwrap(),
            &["x", "y"],
            vec![c.gen("x").unwrap(), c.gen("y").unwrap()],
            "product framing",
        );
        ManifoldBlock::new("T4", 0, 0, c, vec![m], &[SYMPLECTIC]).unwrap()
    }

    fn plain(name: &str, e: i64, s: i64) -> ManifoldBlock {
        ManifoldBlock::new(name, e, s, pres("<a,b|[a,b]>"), vec![], &[]).unwrap()
    }

    #[test]
    fn closed_pi1_without_markings_is_complement() {
        let b = plain("X", 0, 0);
        assert_eq!(closed_pi1(&b), b.complement);
    }

    #[test]
    fn closed_pi1_adds_meridians() {
        let b = torus_block();
        let closed = closed_pi1(&b);
        assert_eq!(closed.relators().len(), 6);
        assert_eq!(abelianization(&closed).free_rank, 4);
    }

    #[test]
    fn blow_up_bookkeeping() {
        let b = plain("T2xS2", 0, 0);
        assert_eq!(blow_up(&b, 0), b);
        let w = blow_up(&b, 4);
        assert_eq!((w.euler, w.signature), (4, -4));
        let t = blow_up(&torus_block(), 2);
        assert_eq!((t.euler, t.signature), (2, -2));
        assert_eq!(t.complement, torus_block().complement);
    }

    #[test]
    fn formulas() {
        assert_eq!(geography_formulas(0, 0), (12, -8));
        assert_eq!(geography_formulas(1, 1), (28, -16));
        assert_eq!(free_abelian_formula(2).unwrap(), (9, -5));
        assert!(free_abelian_formula(0).is_err());
    }

    #[test]
    fn luttinger_rejects_bad_input() {
        let b = torus_block();
        assert!(luttinger(&b, "T", (0, 0), 1).is_err());
        assert!(luttinger(&b, "T", (2, 2), 1).is_err());
        assert!(matches!(
            luttinger(&b, "Q", (0, 1), 1),
            Err(Error::UnknownLabel { .. })
        ));
    }

    #[test]
    fn luttinger_zero_is_no_surgery() {
        let b = torus_block();
        let z = luttinger(&b, "T", (1, 0), 0).unwrap();
        assert_eq!(z.marked, b.marked);
        assert_eq!(z.complement, b.complement);
        assert_eq!((z.euler, z.signature), (b.euler, b.signature));
    }

    #[test]
    fn luttinger_replaces_meridian() {
        let b = torus_block();
        let z = luttinger(&b, "T", (1, 1), 2).unwrap();
        let expected = b.complement.parse_word("(x*y)^2*[c,d]").unwrap();
        assert_eq!(z.marked("T").unwrap().meridian, expected);
    }

    #[test]
    fn fiber_sum_of_unmarked_rest_is_empty() {
        let a = torus_block();
        let b = torus_block();
        let s = fiber_sum(&a, "T", &b, "T", &GluingMatch::identity(1)).unwrap();
        assert!(s.marked.is_empty());
        assert_eq!(s.euler, 0);
        assert!(s.has_flag(SYMPLECTIC));
        assert!(s.notes.iter().any(|n| n.starts_with("warning")));
        assert!(s.notes.iter().any(|n| n.contains("renamed")));
    }

    #[test]
    fn fiber_sum_errors() {
        let a = torus_block();
        assert!(matches!(
            fiber_sum(&a, "T", &a, "H", &GluingMatch::identity(1)),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(matches!(
            fiber_sum(&a, "T", &a, "T", &GluingMatch::identity(2)),
            Err(Error::InvalidMatch(_))
        ));
        let mut g2 = torus_block();
        g2.marked[0].genus = 2;
        g2.marked[0].basis_labels = vec!["a".into(); 4];
        g2.marked[0].pushoff_basis = vec![Word::identity(); 4];
        assert!(matches!(
            fiber_sum(&a, "T", &g2, "T", &GluingMatch::identity(1)),
            Err(Error::GenusMismatch { .. })
        ));
    }

    #[test]
    fn non_bijective_match_rejected() {
        let a = torus_block();
        let m = GluingMatch {
            pairs: vec![
                MatchPair {
                    left: 0,
                    right: 0,
                    inverted: false,
                },
                MatchPair {
                    left: 0,
                    right: 1,
                    inverted: false,
                },
            ],
        };
        assert!(fiber_sum(&a, "T", &a, "T", &m).is_err());
    }

    #[test]
    fn hnn_identity_is_direct_sum() {
        let a = pres("<a|>");
        let m = hnn_mapping_torus(&a, &[(Word::generator(0), Word::generator(0))], "t").unwrap();
        assert!(m.same_up_to_normalization(&pres("<a,t|[t,a]>")));
        assert!(m.same_up_to_normalization(&crate::fp::direct_sum_with_z(&a, "t")));
    }

    #[test]
    fn block_json_roundtrip() {
        let b = luttinger(&torus_block(), "T", (1, 0), 3).unwrap();
        let v = b.to_json();
        assert_eq!(v["complement"], b.complement.to_text());
        assert_eq!(ManifoldBlock::from_json(&v).unwrap(), b);
    }

    #[test]
    fn invalid_markings_rejected() {
        let c = pres("<x|>");
        let bad = MarkedSubmanifold::new(
            "T",
            1,
            Word::identity(),
            &["x"],
            vec![Word::generator(0)],
            "",
        );
        assert!(ManifoldBlock::new("B", 0, 0, c.clone(), vec![bad], &[]).is_err());
        let m = MarkedSubmanifold::new("T", 0, Word::generator(3), &[], vec![], "");
        assert!(ManifoldBlock::new("B", 0, 0, c.clone(), vec![m.clone()], &[]).is_err());
        let ok = MarkedSubmanifold::new("T", 0, Word::generator(0), &[], vec![], "");
        assert!(matches!(
            ManifoldBlock::new("B", 0, 0, c, vec![ok.clone(), ok], &[]),
            Err(Error::DuplicateLabel(_))
        ));
    }
}
