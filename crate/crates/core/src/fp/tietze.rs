//! Tietze simplification with replayable certificates.
//!
//! The simplifier works on a [`State`] (current generators, relators, and the
//! images of the original generators) and only changes it through
//! [`Step`]s. Every step is checked before it is applied, so replaying the
//! log of a certificate against its source re-validates the whole
//! derivation.

use std::collections::HashMap;

use serde::Serialize;

use super::presentation::Presentation;
use super::word::Word;
use crate::error::{Error, Result};

/// Budget for [`tietze_simplify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Effort {
    /// Maximum number of simplification passes.
    pub max_passes: usize,
    /// Generator eliminations that would push the total relator length past
    /// this bound are skipped.
    pub max_total_length: usize,
    /// Relators longer than this take no part in subword replacement.
    pub max_relator_len: usize,
    /// Longest subword replaced in one step.
    pub max_window: usize,
}

impl Default for Effort {
    fn default() -> Self {
        Effort {
            max_passes: 200,
            max_total_length: 4096,
            max_relator_len: 64,
            max_window: 16,
        }
    }
}

impl Effort {
    /// Scales the pass and length budgets by `level` (1 = default).
    pub fn level(level: usize) -> Self {
        let d = Effort::default();
        let level = level.max(1);
        Effort {
            max_passes: d.max_passes * level,
            max_total_length: d.max_total_length * level,
            ..d
        }
    }
}

/// One checked Tietze move. Indices refer to the state the step is
/// applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// Remove an empty relator.
    DropTrivial { relator: usize },
    /// Remove a relator equal to another one up to rotation and inversion.
    DropDuplicate { relator: usize, duplicate_of: usize },
    /// Replace relator `relator` (rotated to start at `rotation`) by
    /// `factor^-1 * relator`, where `factor` is a rotation of relator
    /// `using` or of its inverse.
    Rewrite {
        relator: usize,
        rotation: usize,
        using: usize,
        #[serde(skip)]
        factor: Word,
    },
    /// Solve relator `relator` for `generator` as `value`, substitute it
    /// everywhere, and drop both.
    Eliminate {
        generator: usize,
        relator: usize,
        #[serde(skip)]
        value: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    names: Vec<String>,
    relators: Vec<Word>,
    images: Vec<Word>,
}

impl State {
    fn start(p: &Presentation) -> Self {
        State {
            names: p.generators().to_vec(),
            relators: p.relators().iter().map(Word::cyclically_reduce).collect(),
            images: (0..p.generator_count()).map(Word::generator).collect(),
        }
    }

    fn presentation(&self) -> Presentation {
        Presentation::from_parts_unchecked(self.names.clone(), self.relators.clone())
    }

    fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    fn relator(&self, i: usize) -> Result<&Word> {
        self.relators
            .get(i)
            .ok_or_else(|| Error::Certificate(format!("relator index {i} out of range")))
    }

    fn apply(&mut self, step: &Step) -> Result<()> {
        match step {
            Step::DropTrivial { relator } => {
                if !self.relator(*relator)?.is_empty() {
                    return Err(Error::Certificate(format!(
                        "relator {relator} is not trivial"
                    )));
                }
                self.relators.remove(*relator);
            }
            Step::DropDuplicate {
                relator,
                duplicate_of,
            } => {
                if relator == duplicate_of
                    || !self
                        .relator(*relator)?
                        .same_relator(self.relator(*duplicate_of)?)
                {
                    return Err(Error::Certificate(format!(
                        "relator {relator} does not duplicate relator {duplicate_of}"
                    )));
                }
                self.relators.remove(*relator);
            }
            Step::Rewrite {
                relator,
                rotation,
                using,
                factor,
            } => {
                if relator == using {
                    return Err(Error::Certificate(format!(
                        "relator {relator} rewritten using itself"
                    )));
                }
                let q = self.relator(*using)?;
                if !q.cyclic_variants().contains(factor) {
                    return Err(Error::Certificate(format!(
                        "factor is not a cyclic variant of relator {using}"
                    )));
                }
                let r = self.relator(*relator)?.rotate(*rotation);
                let new = factor.inverse().mul(&r).cyclically_reduce();
                self.relators[*relator] = new;
            }
            Step::Eliminate {
                generator,
                relator,
                value,
            } => {
                let g = *generator;
                if g >= self.names.len() {
                    return Err(Error::Certificate(format!("generator {g} out of range")));
                }
                if value.contains_generator(g) {
                    return Err(Error::Certificate(format!(
                        "value for generator {g} mentions it"
                    )));
                }
                let subst = |w: &Word| {
                    w.substitute(|h| {
                        if h == g {
                            value.clone()
                        } else {
                            Word::generator(h)
                        }
                    })
                };
                if !subst(self.relator(*relator)?)
                    .cyclically_reduce()
                    .is_empty()
                {
                    return Err(Error::Certificate(format!(
                        "relator {relator} does not define generator {g}"
                    )));
                }
                let shift = |w: &Word| w.map_generators(|h| if h > g { h - 1 } else { h });
                self.relators.remove(*relator);
                self.relators = self
                    .relators
                    .iter()
                    .map(|r| shift(&subst(r).cyclically_reduce()))
                    .collect();
                self.images = self.images.iter().map(|w| shift(&subst(w))).collect();
                self.names.remove(g);
            }
        }
        Ok(())
    }
}

/// Source, target, and the images of the source generators as words in
/// the target generators, together with the derivation log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationCertificate {
    pub source: Presentation,
    pub target: Presentation,
    pub generator_images: Vec<Word>,
    pub log: Vec<Step>,
}

impl SimplificationCertificate {
    /// The trivial certificate `p -> p`.
    pub fn identity(p: &Presentation) -> Self {
        let st = State::start(p);
        SimplificationCertificate {
            source: p.clone(),
            target: st.presentation(),
            generator_images: st.images,
            log: Vec::new(),
        }
    }

    /// Re-runs the log against the source, checking every step, and
    /// confirms that it ends at the target with the recorded images.
    pub fn replay(&self) -> Result<()> {
        let mut st = State::start(&self.source);
        for (i, step) in self.log.iter().enumerate() {
            st.apply(step)
                .map_err(|e| Error::Certificate(format!("step {i}: {e}")))?;
        }
        if st.names != self.target.generators() || st.relators != self.target.relators() {
            return Err(Error::Certificate(
                "replay does not end at the target presentation".into(),
            ));
        }
        if st.images != self.generator_images {
            return Err(Error::Certificate(
                "replayed generator images differ from the recorded ones".into(),
            ));
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &SimplificationCertificate) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::Certificate(
                "certificates do not compose: target and source differ".into(),
            ));
        }
        let generator_images = self
            .generator_images
            .iter()
            .map(|w| w.substitute(|g| next.generator_images[g].clone()))
            .collect();
        let mut log = self.log.clone();
        log.extend(next.log.iter().cloned());
        Ok(SimplificationCertificate {
            source: self.source.clone(),
            target: next.target.clone(),
            generator_images,
            log,
        })
    }

    /// Image of a source word in the target generators.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        self.source
            .check_word(w)
            .map_err(|e| Error::GeneratorMismatch(e.to_string()))?;
        Ok(w.substitute(|g| self.generator_images[g].clone()))
    }

    pub fn image_of(&self, name: &str) -> Option<&Word> {
        self.source
            .index_of(name)
            .map(|g| &self.generator_images[g])
    }

    pub fn eliminated(&self) -> Vec<&str> {
        self.source
            .generators()
            .iter()
            .filter(|g| self.target.index_of(g).is_none())
            .map(String::as_str)
            .collect()
    }

    /// Compact human-readable summary of the generator images.
    pub fn summary(&self) -> String {
        let images: Vec<String> = self
            .source
            .generators()
            .iter()
            .zip(&self.generator_images)
            .map(|(g, w)| format!("{g}->{}", self.target.word_to_string(w)))
            .collect();
        format!("{} steps; {}", self.log.len(), images.join(", "))
    }
}

/// Result of [`tietze_simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    pub presentation: Presentation,
    pub certificate: SimplificationCertificate,
    /// Set when the pass budget ran out or an elimination was skipped for
    /// exceeding the length budget.
    pub budget_exhausted: bool,
}

struct Simplifier {
    state: State,
    log: Vec<Step>,
    effort: Effort,
    exhausted: bool,
}

impl Simplifier {
    fn push(&mut self, step: Step) {
        self.state
            .apply(&step)
            .expect("simplifier produced an invalid step");
        self.log.push(step);
    }

    fn drop_trivial(&mut self) -> bool {
        let mut changed = false;
        while let Some(i) = self.state.relators.iter().position(Word::is_empty) {
            self.push(Step::DropTrivial { relator: i });
            changed = true;
        }
        changed
    }

    fn drop_duplicates(&mut self) -> bool {
        let mut changed = false;
        'again: loop {
            let mut first: HashMap<Word, usize> = HashMap::new();
            for (i, r) in self.state.relators.iter().enumerate() {
                let nf = r.relator_normal_form();
                if let Some(&j) = first.get(&nf) {
                    self.push(Step::DropDuplicate {
                        relator: i,
                        duplicate_of: j,
                    });
                    changed = true;
                    continue 'again;
                }
                first.insert(nf, i);
            }
            return changed;
        }
    }

    /// Finds a subword of some relator that is more than half of a cyclic
    /// variant of another relator.
    fn find_rewrite(&self) -> Option<Step> {
        let rels = &self.state.relators;
        let limit = self.effort.max_relator_len;
        for (i, r) in rels.iter().enumerate() {
            let n = r.len();
            if n == 0 || n > limit {
                continue;
            }
            let rl = r.letters();
            for (j, q) in rels.iter().enumerate() {
                let m = q.len();
                if i == j || m == 0 || m > limit {
                    continue;
                }
                for factor in q.cyclic_variants() {
                    let fl = factor.letters();
                    let cap = m.min(n).min(self.effort.max_window);
                    if 2 * cap <= m {
                        continue;
                    }
                    for start in 0..n {
                        let mut common = 0;
                        while common < cap && rl[(start + common) % n] == fl[common] {
                            common += 1;
                        }
                        if 2 * common > m {
                            // Only the matched prefix of the factor is
                            // replaced; the rest of it appears inverted.
                            return Some(Step::Rewrite {
                                relator: i,
                                rotation: start,
                                using: j,
                                factor: factor.clone(),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    fn shorten(&mut self) -> bool {
        let mut changed = false;
        while let Some(step) = self.find_rewrite() {
            let before = self.state.total_length();
            self.push(step);
            debug_assert!(self.state.total_length() < before);
            changed = true;
            self.drop_trivial();
            self.drop_duplicates();
        }
        changed
    }

    fn eliminate_one(&mut self) -> bool {
        let st = &self.state;
        let total = st.total_length();
        for g in 0..st.names.len() {
            let mut best: Option<(usize, usize)> = None;
            for (i, r) in st.relators.iter().enumerate() {
                if r.occurrences(g) == 1 && best.is_none_or(|(_, len)| r.len() < len) {
                    best = Some((i, r.len()));
                }
            }
            let Some((i, len)) = best else { continue };
            let others: usize = st
                .relators
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, r)| r.occurrences(g))
                .sum();
            let growth = others * (len - 1);
            if total - len + growth > self.effort.max_total_length {
                self.exhausted = true;
                continue;
            }
            let r = &st.relators[i];
            let pos = r.letters().iter().position(|l| l.generator == g).unwrap();
            let rot = r.rotate(pos);
            // rot = g^e * rest, so g = rest^-1 (e = 1) or g = rest (e = -1).
            let rest = rot.subword(1, rot.len() - 1);
            let value = if rot.letters()[0].inverse {
                rest
            } else {
                rest.inverse()
            };
            self.push(Step::Eliminate {
                generator: g,
                relator: i,
                value,
            });
            return true;
        }
        false
    }

    fn run(&mut self) {
        for _ in 0..self.effort.max_passes {
            self.drop_trivial();
            self.drop_duplicates();
            self.shorten();
            if !self.eliminate_one() {
                return;
            }
        }
        // Budget spent; tidy up without eliminating further.
        self.drop_trivial();
        self.drop_duplicates();
        self.exhausted = true;
    }
}

/// Simplifies `p` to a fixpoint of: drop trivial relators, drop duplicate
/// relators, shorten relators by subword replacement, eliminate the lowest
/// generator that occurs exactly once in some relator.
pub fn tietze_simplify(p: &Presentation, effort: Effort) -> Simplification {
    let mut s = Simplifier {
        state: State::start(p),
        log: Vec::new(),
        effort,
        exhausted: false,
    };
    s.run();
    let target = s.state.presentation();
    Simplification {
        presentation: target.clone(),
        certificate: SimplificationCertificate {
            source: p.clone(),
            target,
            generator_images: s.state.images,
            log: s.log,
        },
        budget_exhausted: s.exhausted,
    }
}

/// True when `w` rewrites to the empty word under the certificate's
/// generator images. `false` means "not shown trivial", not "nontrivial".
pub fn word_trivial_under(cert: &SimplificationCertificate, w: &Word) -> Result<bool> {
    Ok(cert.rewrite(w)?.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    #[test]
    fn eliminates_trivial_generator() {
        let p = pres("<x,t | [t,x], x>");
        let s = tietze_simplify(&p, Effort::default());
        assert_eq!(s.presentation, pres("<t|>"));
        assert_eq!(s.certificate.image_of("x"), Some(&Word::identity()));
        assert_eq!(s.certificate.image_of("t"), Some(&Word::generator(0)));
        s.certificate.replay().unwrap();
        assert!(!s.budget_exhausted);
    }

    #[test]
    fn trivial_under_certificate() {
        let p = pres("<x,t | [t,x], x>");
        let cert = tietze_simplify(&p, Effort::default()).certificate;
        let w = p.parse_word("[x,t]").unwrap();
        assert!(word_trivial_under(&cert, &w).unwrap());
        assert!(word_trivial_under(&cert, &Word::generator(7)).is_err());
    }

    #[test]
    fn identity_certificate_does_not_prove_generator_trivial() {
        let p = pres("<t,s | [t,s]>");
        let cert = SimplificationCertificate::identity(&p);
        cert.replay().unwrap();
        assert!(!word_trivial_under(&cert, &Word::generator(0)).unwrap());
        let s = tietze_simplify(&p, Effort::default());
        assert_eq!(s.presentation, p);
    }

    #[test]
    fn rewrite_shortens_using_commutator() {
        // [y^-1,t] x^-1 with t, y commuting forces x = 1.
        let p = pres("<x,y,t | [y^-1,t]*x^-1, [t,y]>");
        let s = tietze_simplify(&p, Effort::default());
        assert_eq!(s.presentation.generator_count(), 2);
        assert!(s
            .presentation
            .same_up_to_normalization(&pres("<y,t|[t,y]>")));
        s.certificate.replay().unwrap();
    }

    #[test]
    fn tampered_log_fails_replay() {
        let p = pres("<x,t | [t,x], x>");
        let mut cert = tietze_simplify(&p, Effort::default()).certificate;
        if let Some(Step::Eliminate { value, .. }) = cert
            .log
            .iter_mut()
            .find(|s| matches!(s, Step::Eliminate { .. }))
        {
            *value = Word::generator(0);
        }
        assert!(cert.replay().is_err());
    }

    #[test]
    fn composition() {
        let p = pres("<a,b,c | a*b^-1, b*c^-1, c^3>");
        let s1 = tietze_simplify(
            &p,
            Effort {
                max_passes: 1,
                ..Effort::default()
            },
        );
        let s2 = tietze_simplify(&s1.presentation, Effort::default());
        let c = s1.certificate.compose(&s2.certificate).unwrap();
        c.replay().unwrap();
        assert_eq!(c.target.generator_count(), 1);
        assert!(
            s2.certificate.compose(&s1.certificate).is_err() || s1.presentation == s2.presentation
        );
    }

    #[test]
    fn budget_flag() {
        let p = pres("<a,b,c | a*b^-1, b*c^-1, c^3>");
        let s = tietze_simplify(
            &p,
            Effort {
                max_passes: 1,
                ..Effort::default()
            },
        );
        assert!(s.budget_exhausted);
        s.certificate.replay().unwrap();
    }
}
