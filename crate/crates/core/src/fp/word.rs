//! Words in a free group.
//!
//! A [`Word`] is a sequence of [`Letter`]s that is kept freely reduced at all
//! times. Words do not know which presentation they belong to; validity
//! against a generator list is checked by [`Presentation`](super::Presentation).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

// g < g^-1 < h < h^-1 for ids g < h.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.generator, self.inverse).cmp(&(other.generator, other.inverse))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: usize) -> Self {
        Word {
            letters: vec![Letter::pos(g)],
        }
    }

    /// Reduces an arbitrary letter sequence. Ids are not range checked here;
    /// see [`free_reduce`] for the checked variant.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    /// Builds `g1^e1 g2^e2 ...` from (generator, exponent) pairs.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        Word::from_letters(powers.iter().flat_map(|&(g, e)| {
            std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::from_letters(
            u.letters
                .iter()
                .chain(v.letters.iter())
                .copied()
                .chain(u.inverse().letters)
                .chain(v.inverse().letters),
        )
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.mul(self).mul(&c.inverse())
    }

    /// Largest generator id used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    pub fn occurrences(&self, g: usize) -> usize {
        self.letters.iter().filter(|l| l.generator == g).count()
    }

    pub fn contains_generator(&self, g: usize) -> bool {
        self.letters.iter().any(|l| l.generator == g)
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == g)
            .map(|l| l.sign())
            .sum()
    }

    /// Replaces every occurrence of each generator by its image.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(usize) -> Word,
    {
        let mut out = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            let img = image(l.generator);
            if l.inverse {
                out.extend(img.inverse().letters);
            } else {
                out.extend(img.letters);
            }
        }
        Word::from_letters(out)
    }

    /// Relabels generator ids; used when generators are removed or shifted.
    pub fn map_generators<F: Fn(usize) -> usize>(&self, f: F) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(f(l.generator), l.inverse))
                .collect(),
        }
    }

    /// Removes matching letter pairs from the two ends.
    pub fn cyclically_reduce(&self) -> Word {
        let n = self.letters.len();
        let mut lo = 0;
        let mut hi = n;
        while hi - lo >= 2 && self.letters[lo].cancels(self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: self.letters[lo..hi].to_vec(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) if self.letters.len() > 1 => !a.cancels(b),
            _ => true,
        }
    }

    /// Rotation starting at `k`. Only meaningful for cyclically reduced words.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::identity();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// All rotations of the word and of its inverse (cyclically reduced
    /// input assumed). Duplicates are not removed.
    pub fn cyclic_variants(&self) -> Vec<Word> {
        let inv = self.inverse();
        let n = self.len().max(1);
        (0..n)
            .map(|k| self.rotate(k))
            .chain((0..n).map(|k| inv.rotate(k)))
            .collect()
    }

    /// Canonical relator form: cyclic reduction followed by the
    /// lexicographically least rotation of the word or its inverse.
    pub fn relator_normal_form(&self) -> Word {
        let r = self.cyclically_reduce();
        if r.is_empty() {
            return r;
        }
        r.cyclic_variants().into_iter().min().unwrap_or(r)
    }

    /// True when both words define the same relator up to rotation and
    /// inversion.
    pub fn same_relator(&self, other: &Word) -> bool {
        self.relator_normal_form() == other.relator_normal_form()
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word {
            letters: self.letters[start..start + len].to_vec(),
        }
    }

    /// Splits the word as `u v u^-1 v^-1` with nonempty `u` and `v`, if that
    /// is literally how it is spelled.
    pub fn as_commutator(&self) -> Option<(Word, Word)> {
        let n = self.letters.len();
        if n < 4 || !n.is_multiple_of(2) {
            return None;
        }
        let half = n / 2;
        for lu in 1..half {
            let lv = half - lu;
            let u = self.subword(0, lu);
            let v = self.subword(lu, lv);
            let ui = u.inverse();
            let vi = v.inverse();
            if self.letters[half..half + lu] == ui.letters[..]
                && self.letters[half + lu..] == vi.letters[..]
            {
                return Some((u, v));
            }
        }
        None
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word { letters: vec![l] }
    }
}

impl fmt::Display for Word {
    /// Debug-style rendering with numeric generator ids; presentations
    /// render with names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("g{}^-1", l.generator)
                } else {
                    format!("g{}", l.generator)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Checked free reduction of a raw letter list over `generator_count`
/// generators.
pub fn free_reduce(letters: &[Letter], generator_count: usize) -> Result<Word> {
    if let Some(bad) = letters.iter().find(|l| l.generator >= generator_count) {
        return Err(Error::MalformedWord(format!(
            "generator id {} out of range (have {})",
            bad.generator, generator_count
        )));
    }
    Ok(Word::from_letters(letters.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::pos(0)
    }
    fn b() -> Letter {
        Letter::pos(1)
    }

    #[test]
    fn cancellation() {
        let w = free_reduce(&[a(), a().inv(), b()], 2).unwrap();
        assert_eq!(w, Word::generator(1));
        assert!(free_reduce(&[], 0).unwrap().is_identity());
    }

    #[test]
    fn nested_cancellation() {
        let w = Word::from_letters([a(), b(), b().inv(), a().inv(), b()]);
        assert_eq!(w, Word::generator(1));
    }

    #[test]
    fn unknown_generator_is_malformed() {
        assert!(matches!(
            free_reduce(&[Letter::pos(3)], 2),
            Err(Error::MalformedWord(_))
        ));
    }

    #[test]
    fn commutator_times_inverse_is_identity() {
        let t = Word::generator(0);
        let x = Word::generator(1);
        let c = Word::commutator(&t, &x);
        assert!(c.mul(&c.inverse()).is_identity());
    }

    #[test]
    fn commutator_convention() {
        let t = Word::generator(0);
        let x = Word::generator(1);
        assert!(Word::commutator(&x, &x).is_identity());
        assert!(Word::commutator(&Word::identity(), &x).is_identity());
        assert_eq!(
            Word::commutator(&t, &x).letters(),
            &[
                Letter::pos(0),
                Letter::pos(1),
                Letter::neg(0),
                Letter::neg(1)
            ]
        );
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_letters([b(), a(), a(), b().inv()]);
        assert_eq!(w.cyclically_reduce(), Word::from_powers(&[(0, 2)]));
    }

    #[test]
    fn normal_form_identifies_rotations_and_inverses() {
        let t = Word::generator(0);
        let x = Word::generator(1);
        let c = Word::commutator(&t, &x);
        let d = Word::commutator(&x, &t);
        assert!(c.same_relator(&d));
        assert!(c.same_relator(&c.rotate(3)));
        assert!(!c.same_relator(&Word::from_powers(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn commutator_detection() {
        let t = Word::generator(0);
        let x = Word::generator(1);
        let y = Word::generator(2);
        let inner = Word::commutator(&x, &y);
        let w = Word::commutator(&t, &inner);
        assert_eq!(w.as_commutator(), Some((t.clone(), inner)));
        assert_eq!(Word::from_powers(&[(0, 2)]).as_commutator(), None);
    }

    #[test]
    fn powers() {
        let w = Word::from_powers(&[(0, 1), (1, 1)]);
        assert_eq!(w.pow(0), Word::identity());
        assert_eq!(w.pow(-1), w.inverse());
        assert_eq!(w.pow(2).len(), 4);
    }
}
