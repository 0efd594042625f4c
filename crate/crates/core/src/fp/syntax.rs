//! Text syntax for words and presentations.
//!
//! ```text
//! presentation := "<" [ident ("," ident)*] "|" [word ("," word)*] ">"
//! word         := "1" | factor (["*"] factor)*
//! factor       := primary ["^" int]
//! primary      := ident | "1" | "[" word "," word "]" | "(" word ")"
//! ```

use super::presentation::{Presentation, PRIME};
use super::word::{Letter, Word};
use crate::error::{Error, Result};

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == PRIME
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            offset: self.pos,
            message,
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        let mut chars = self.rest().char_indices();
        match chars.next() {
            Some((_, c)) if is_ident_start(c) => {}
            _ => return Err(self.error("expected identifier".into())),
        }
        let mut end = self.src.len();
        for (i, c) in chars {
            if !is_ident_continue(c) {
                end = start + i;
                break;
            }
        }
        self.pos = end;
        Ok(self.src[start..end].to_string())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.rest().chars().next(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected integer".into()));
        }
        let v: i64 = self.src[digits_start..self.pos]
            .parse()
            .map_err(|_| self.error("integer out of range".into()))?;
        Ok(if neg { -v } else { v })
    }
}

struct WordParser<'a, 'n> {
    cur: Cursor<'a>,
    names: &'n [String],
}

impl WordParser<'_, '_> {
    fn starts_factor(&mut self) -> bool {
        matches!(self.cur.peek(), Some(c) if is_ident_start(c) || c == '[' || c == '(' || c == '1')
    }

    fn word(&mut self) -> Result<Word> {
        if !self.starts_factor() {
            return Err(self.cur.error("expected word".into()));
        }
        let mut w = self.factor()?;
        loop {
            // `*` is optional between factors.
            if !self.cur.eat('*') && !self.starts_factor() {
                return Ok(w);
            }
            let f = self.factor()?;
            w = w.mul(&f);
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.primary()?;
        if self.cur.eat('^') {
            let e = self.cur.int()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Word> {
        match self.cur.peek() {
            Some('[') => {
                self.cur.expect('[')?;
                let u = self.word()?;
                self.cur.expect(',')?;
                let v = self.word()?;
                self.cur.expect(']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some('(') => {
                self.cur.expect('(')?;
                let w = self.word()?;
                self.cur.expect(')')?;
                Ok(w)
            }
            Some('1') => {
                self.cur.pos += 1;
                Ok(Word::identity())
            }
            _ => {
                let at = self.cur.pos;
                let name = self.cur.ident()?;
                match self.names.iter().position(|n| *n == name) {
                    Some(g) => Ok(Word::from(Letter::pos(g))),
                    None => Err(Error::Parse {
                        offset: at,
                        message: format!("unknown generator `{name}`"),
                    }),
                }
            }
        }
    }
}

/// Parses a complete word over `names`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let mut p = WordParser {
        cur: Cursor::new(text),
        names,
    };
    let w = p.word()?;
    if p.cur.peek().is_some() {
        return Err(p.cur.error("unexpected trailing input".into()));
    }
    Ok(w)
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut cur = Cursor::new(text);
    cur.expect('<')?;
    let mut names = Vec::new();
    if cur.peek() != Some('|') {
        names.push(cur.ident()?);
        while cur.eat(',') {
            names.push(cur.ident()?);
        }
    }
    cur.expect('|')?;
    let mut relators = Vec::new();
    let mut wp = WordParser { cur, names: &names };
    if wp.cur.peek() != Some('>') {
        relators.push(wp.word()?);
        while wp.cur.eat(',') {
            relators.push(wp.word()?);
        }
    }
    wp.cur.expect('>')?;
    if wp.cur.peek().is_some() {
        return Err(wp.cur.error("unexpected trailing input".into()));
    }
    Presentation::new(names, relators)
}

fn format_run(name: &str, count: i64) -> String {
    if count == 1 {
        name.to_string()
    } else {
        format!("{name}^{count}")
    }
}

/// Renders a word with generator names. Literal commutator spellings are
/// shown with bracket sugar; runs of one letter collapse to powers.
pub fn format_word(w: &Word, names: &[String]) -> String {
    let letters = w.letters();
    if letters.is_empty() {
        return "1".into();
    }
    let name = |g: usize| names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let rest = letters.len() - i;
        let mut found = None;
        let mut len = rest - rest % 2;
        while len >= 4 {
            let chunk = Word::from_letters(letters[i..i + len].iter().copied());
            if chunk.len() == len {
                if let Some(uv) = chunk.as_commutator() {
                    found = Some((len, uv));
                    break;
                }
            }
            len -= 2;
        }
        if let Some((len, (u, v))) = found {
            parts.push(format!(
                "[{},{}]",
                format_word(&u, names),
                format_word(&v, names)
            ));
            i += len;
            continue;
        }
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        parts.push(format_run(&name(l.generator), l.sign() * run as i64));
        i += run;
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_example_syntax() {
        let p = parse_presentation("< x1, y1, t | [t,x1], [y1^-1,t]*x1^-1 >").unwrap();
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relators()[1].len(), 5);
        assert_eq!(p.to_string(), "< x1, y1, t | [t,x1], [y1^-1,t]*x1^-1 >");
    }

    #[test]
    fn juxtaposition_and_grouping() {
        let n = names(&["a", "b"]);
        let w1 = parse_word("a b a^-1", &n).unwrap();
        let w2 = parse_word("(a*b)*a^-1", &n).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(parse_word("(a b)^-2", &n).unwrap().len(), 4);
        assert!(parse_word("1", &n).unwrap().is_identity());
        assert!(parse_word("a a^-1", &n).unwrap().is_identity());
    }

    #[test]
    fn nested_commutator_roundtrip() {
        let n = names(&["x", "y", "t"]);
        let w = parse_word("[t,[x,y]]", &n).unwrap();
        assert_eq!(format_word(&w, &n), "[t,[x,y]]");
        let w = parse_word("[x,y][x^-1,t]y^2", &n).unwrap();
        assert_eq!(format_word(&w, &n), "[x,y]*[x^-1,t]*y^2");
    }

    #[test]
    fn errors_carry_offsets() {
        let n = names(&["a"]);
        match parse_word("a * q", &n) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_presentation("< a | a").is_err());
        assert!(parse_presentation("< a, a | >").is_err());
        assert!(parse_word("[a, ]", &n).is_err());
    }

    #[test]
    fn empty_presentation() {
        let p = parse_presentation("< | >").unwrap();
        assert_eq!(p.generator_count(), 0);
        assert_eq!(p.to_string(), "< | >");
        assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn primed_names() {
        let p = parse_presentation("< a, a′ | a′^3 >").unwrap();
        assert_eq!(p.generators()[1], "a′");
    }
}
