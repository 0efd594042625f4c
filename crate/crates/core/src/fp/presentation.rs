//! Finitely presented groups and the constructions used to assemble them.

use std::collections::HashSet;
use std::fmt;

use super::syntax;
use super::word::Word;
use crate::error::{Error, Result};

/// Suffix appended to generator names that collide in products.
pub const PRIME: char = '′';

/// A generator label together with its dense index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSymbol<'a> {
    pub name: &'a str,
    pub id: usize,
}

/// `< generators | relators >`.
///
/// Relators are stored freely and cyclically reduced, in the spelling they
/// were given. Use [`Presentation::normalized`] for canonical comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new<S: Into<String>>(generators: Vec<S>, relators: Vec<Word>) -> Result<Self> {
        let generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(Error::GeneratorMismatch(format!(
                    "generator `{g}` declared twice"
                )));
            }
        }
        let p = Presentation {
            generators,
            relators: Vec::new(),
        };
        for r in &relators {
            p.check_word(r)?;
        }
        Ok(Presentation {
            relators: relators.iter().map(Word::cyclically_reduce).collect(),
            ..p
        })
    }

    /// Free group on the given names.
    pub fn free<S: Into<String>>(generators: Vec<S>) -> Result<Self> {
        Presentation::new(generators, Vec::new())
    }

    /// Parses `< x, y | [x,y], x^2 >`.
    pub fn parse(text: &str) -> Result<Self> {
        syntax::parse_presentation(text)
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        syntax::parse_word(text, &self.generators)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_symbols(&self) -> impl Iterator<Item = GeneratorSymbol<'_>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(id, name)| GeneratorSymbol { name, id })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// The word consisting of the named generator.
    pub fn gen(&self, name: &str) -> Result<Word> {
        self.index_of(name)
            .map(Word::generator)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.generators.len() => Err(Error::MalformedWord(format!(
                "generator id {g} out of range for a presentation with {} generators",
                self.generators.len()
            ))),
            _ => Ok(()),
        }
    }

    /// `[u, v]` with both words checked against this presentation.
    pub fn commutator(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check_word(u)
            .and_then(|_| self.check_word(v))
            .map_err(|e| Error::GeneratorMismatch(e.to_string()))?;
        Ok(Word::commutator(u, v))
    }

    /// Same generators, relators replaced (and cyclically reduced).
    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self> {
        Presentation::new(self.generators.clone(), relators)
    }

    /// Canonical form: every relator in normal form, trivial relators
    /// removed, sorted and deduplicated.
    pub fn normalized(&self) -> Presentation {
        let mut relators: Vec<Word> = self
            .relators
            .iter()
            .map(Word::relator_normal_form)
            .filter(|r| !r.is_empty())
            .collect();
        relators.sort();
        relators.dedup();
        Presentation {
            generators: self.generators.clone(),
            relators,
        }
    }

    /// Equality of generator lists and of relator sets up to rotation,
    /// inversion, order and repetition.
    pub fn same_up_to_normalization(&self, other: &Presentation) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        syntax::format_word(w, &self.generators)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Total relator length.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub(crate) fn from_parts_unchecked(generators: Vec<String>, relators: Vec<Word>) -> Self {
        Presentation {
            generators,
            relators,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| self.word_to_string(r))
            .collect();
        write!(f, "<")?;
        if !self.generators.is_empty() {
            write!(f, " {}", self.generators.join(", "))?;
        }
        write!(f, " |")?;
        if !rels.is_empty() {
            write!(f, " {}", rels.join(", "))?;
        }
        write!(f, " >")
    }
}

/// Generator renaming produced by [`free_product`]: the right factor's
/// generator `i` becomes `offset + i` under `names[i].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenameMap {
    pub offset: usize,
    pub names: Vec<(String, String)>,
}

impl RenameMap {
    /// Moves a word over the right factor into the product.
    pub fn transport(&self, w: &Word) -> Word {
        w.map_generators(|g| g + self.offset)
    }

    pub fn renamed(&self) -> impl Iterator<Item = &(String, String)> {
        self.names.iter().filter(|(old, new)| old != new)
    }
}

fn fresh_name(base: &str, taken: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push(PRIME);
    }
    name
}

/// Free product; colliding names on the right get primed.
pub fn free_product(p: &Presentation, q: &Presentation) -> (Presentation, RenameMap) {
    let mut taken: HashSet<String> = p.generators.iter().cloned().collect();
    let mut generators = p.generators.clone();
    let mut names = Vec::with_capacity(q.generators.len());
    for g in &q.generators {
        let new = fresh_name(g, &taken);
        taken.insert(new.clone());
        generators.push(new.clone());
        names.push((g.clone(), new));
    }
    let rename = RenameMap {
        offset: p.generators.len(),
        names,
    };
    let mut relators = p.relators.clone();
    relators.extend(q.relators.iter().map(|r| rename.transport(r)));
    (
        Presentation {
            generators,
            relators,
        },
        rename,
    )
}

/// Adds the given words as relators. Trivial words and words already
/// present (up to rotation and inversion) are dropped.
pub fn quotient_by_normal_closure(p: &Presentation, extra: &[Word]) -> Result<Presentation> {
    let mut seen: HashSet<Word> = p.relators.iter().map(Word::relator_normal_form).collect();
    let mut relators = p.relators.clone();
    for w in extra {
        p.check_word(w)?;
        let r = w.cyclically_reduce();
        if r.is_empty() {
            continue;
        }
        if seen.insert(r.relator_normal_form()) {
            relators.push(r);
        }
    }
    Ok(Presentation {
        generators: p.generators.clone(),
        relators,
    })
}

/// `p ⊕ Z`: one new central generator.
pub fn direct_sum_with_z(p: &Presentation, name: &str) -> Presentation {
    let taken: HashSet<String> = p.generators.iter().cloned().collect();
    let name = fresh_name(name, &taken);
    let s = p.generators.len();
    let mut generators = p.generators.clone();
    generators.push(name);
    let mut relators = p.relators.clone();
    relators.extend((0..s).map(|g| Word::commutator(&Word::generator(s), &Word::generator(g))));
    Presentation {
        generators,
        relators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    #[test]
    fn free_product_of_free_groups() {
        let (p, map) = free_product(&pres("<a|>"), &pres("<b|>"));
        assert_eq!(p, pres("<a,b|>"));
        assert_eq!(map.renamed().count(), 0);
    }

    #[test]
    fn free_product_collision() {
        let (p, map) = free_product(&pres("<a|a^2>"), &pres("<a|a^3>"));
        assert_eq!(p.generators(), &["a".to_string(), "a′".to_string()]);
        assert_eq!(p, pres("<a, a′ | a^2, a′^3>"));
        assert_eq!(
            map.renamed().next(),
            Some(&("a".to_string(), "a′".to_string()))
        );
        assert_eq!(map.transport(&Word::generator(0)), Word::generator(1));
    }

    #[test]
    fn quotient_appends_and_dedups() {
        let p = pres("<a,b|>");
        let a = p.gen("a").unwrap();
        let q = quotient_by_normal_closure(&p, &[a.clone(), a.inverse()]).unwrap();
        assert_eq!(q, pres("<a,b|a>"));
        assert_eq!(quotient_by_normal_closure(&p, &[]).unwrap(), p);
    }

    #[test]
    fn quotient_rejects_foreign_words() {
        let p = pres("<a|>");
        assert!(quotient_by_normal_closure(&p, &[Word::generator(4)]).is_err());
    }

    #[test]
    fn quotient_commuting_pair_by_s() {
        let p = pres("<t,s|[t,s]>");
        let s = p.gen("s").unwrap();
        assert_eq!(
            quotient_by_normal_closure(&p, &[s]).unwrap(),
            pres("<t,s|[t,s],s>")
        );
    }

    #[test]
    fn direct_sum_basic() {
        assert_eq!(direct_sum_with_z(&pres("<|>"), "s"), pres("<s|>"));
        let c = direct_sum_with_z(&pres("<x,y,t | [t,x], [y^-1,t]*x^-1>"), "s");
        assert_eq!(
            c,
            pres("<x,y,t,s | [t,x], [y^-1,t]*x^-1, [s,x], [s,y], [s,t]>")
        );
        let collide = direct_sum_with_z(&pres("<s|>"), "s");
        assert_eq!(collide.generators()[1], "s′");
    }

    #[test]
    fn commutator_checks_generators() {
        let p = pres("<x|>");
        assert!(p
            .commutator(&Word::generator(0), &Word::generator(2))
            .is_err());
        assert!(p
            .commutator(&Word::generator(0), &Word::generator(0))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn duplicate_generator_rejected() {
        assert!(Presentation::free(vec!["x", "x"]).is_err());
    }

    #[test]
    fn normalization() {
        let p = pres("<t,s | [t,s], [s,t], s*t*s^-1*t^-1, 1>");
        assert_eq!(p.normalized().relators().len(), 1);
        assert!(p.same_up_to_normalization(&pres("<t,s|[s,t]>")));
        assert!(!p.same_up_to_normalization(&pres("<s,t|[s,t]>")));
    }
}
