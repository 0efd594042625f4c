//! Built-in blocks.

use std::collections::BTreeMap;

use crate::abelian::{abelianization, AbelianInvariants};
use crate::error::{Error, Result};
use crate::fp::{Presentation, Word};
use crate::manifold::{closed_pi1, ManifoldBlock, MarkedSubmanifold, SYMPLECTIC};

fn pres(text: &str) -> Presentation {
    Presentation::parse(text).expect("built-in presentation parses")
}

fn word(p: &Presentation, text: &str) -> Word {
    p.parse_word(text).expect("built-in word parses")
}

/// Mapping torus of the twist along `x` on the punctured torus, times a circle.
pub fn pi1_c() -> Presentation {
    pres("<x, y, t, s | [t,x], [y^-1,t]*x^-1, [s,x], [s,y], [s,t]>")
}

/// Complement of the torus over the curve parallel to `y`.
pub fn pi1_c_minus_t1() -> Presentation {
    pres("<x, y, t, s | [y^-1,t]*x^-1, [t,[x,y]], [s,x], [s,y], [s,t]>")
}

/// Complement of the torus over the curve parallel to `x`.
pub fn pi1_c_minus_t2() -> Presentation {
    pres("<x, y, t, s | [t,x], [y^-1,t]*x^-1, [s,x], [s,t]>")
}

/// Complement of both tori in the genus-2 block.
pub fn pi1_b_minus_tori() -> Presentation {
    pres(
        "<x1, y1, x2, y2, t, s | [x1,y1]*[x2,y2], [y1^-1,t]*x1^-1, [t,[x1,y1]], \
         [x2^-1,t]*y2^-1, [t,y2], [s,x1], [s,y1], [s,t], [s,y2]>",
    )
}

/// The closed genus-2 block, as a direct presentation.
pub fn pi1_b() -> Presentation {
    pres(
        "<x1, y1, x2, y2, t, s | [x1,y1]*[x2,y2], [t,x1], [y1^-1,t]*x1^-1, \
         [x2^-1,t]*y2^-1, [t,y2], [s,x1], [s,y1], [s,x2], [s,y2], [s,t]>",
    )
}

fn genus2_fiber(complement: &Presentation) -> MarkedSubmanifold {
    MarkedSubmanifold::new(
        "F",
        2,
        Word::identity(),
        &["a1", "b1", "a2", "b2"],
        vec![
            word(complement, "a"),
            word(complement, "b"),
            word(complement, "a^-1"),
            word(complement, "b^-1"),
        ],
        "fiber framing; meridian lies on an exceptional sphere",
    )
}

fn matsumoto_w() -> ManifoldBlock {
    let c = pres("<a, b | [a,b]>");
    let f = genus2_fiber(&c);
    ManifoldBlock::new("W", 4, -4, c, vec![f], &[SYMPLECTIC]).unwrap()
}

fn w_prime() -> ManifoldBlock {
    let c = pres("<a, b | [a,b]>");
    let f = genus2_fiber(&c);
    ManifoldBlock::new("W_prime", 10, -6, c, vec![f], &[SYMPLECTIC]).unwrap()
}

fn t2_x_s2() -> ManifoldBlock {
    ManifoldBlock::new("T2xS2", 0, 0, pres("<a, b | [a,b]>"), vec![], &[SYMPLECTIC]).unwrap()
}

fn block_c() -> ManifoldBlock {
    ManifoldBlock::new("C", 0, 0, pi1_c(), vec![], &[SYMPLECTIC]).unwrap()
}

fn block_c_t1() -> ManifoldBlock {
    let c = pi1_c_minus_t1();
    let t1 = MarkedSubmanifold::new(
        "T1",
        1,
        word(&c, "[t,x]"),
        &["y", "s"],
        vec![word(&c, "y"), word(&c, "s")],
        "Lagrangian framing",
    );
    ManifoldBlock::new("C_T1", 0, 0, c, vec![t1], &[SYMPLECTIC]).unwrap()
}

fn block_c_t2() -> ManifoldBlock {
    let c = pi1_c_minus_t2();
    let t2 = MarkedSubmanifold::new(
        "T2",
        1,
        word(&c, "[s,y]"),
        &["x", "t"],
        vec![word(&c, "x"), word(&c, "t")],
        "Lagrangian framing",
    );
    ManifoldBlock::new("C_T2", 0, 0, c, vec![t2], &[SYMPLECTIC]).unwrap()
}

fn block_b() -> ManifoldBlock {
    let c = pi1_b_minus_tori();
    let t1 = MarkedSubmanifold::new(
        "T1",
        1,
        word(&c, "[x1,t]"),
        &["y1", "s"],
        vec![word(&c, "y1"), word(&c, "s")],
        "Lagrangian framing",
    );
    let t2 = MarkedSubmanifold::new(
        "T2",
        1,
        word(&c, "[x2,s]"),
        &["y2", "t"],
        vec![word(&c, "y2"), word(&c, "t")],
        "Lagrangian framing",
    );
    // The meridian of G is not derived; the boundary word stands in for it.
    // It is a relator here, so it only enters a sum through the glue relator.
    let g = MarkedSubmanifold::new(
        "G",
        2,
        word(&c, "[x1,y1]*[x2,y2]"),
        &["x1", "y1", "x2", "y2"],
        vec![
            word(&c, "x1"),
            word(&c, "y1"),
            word(&c, "x2"),
            word(&c, "y2"),
        ],
        "fiber framing; meridian is the boundary-word placeholder",
    );
    let mut b = ManifoldBlock::new("B", 0, 0, c, vec![t1, t2, g], &[SYMPLECTIC]).unwrap();
    b.notes
        .push("meridian of G is a placeholder (boundary word), not derived".into());
    b
}

fn torus_t4() -> ManifoldBlock {
    let c = pres("<x, y, c, d | [x,y], [x,c], [x,d], [y,c], [y,d]>");
    let t = MarkedSubmanifold::new(
        "T",
        1,
        word(&c, "[c,d]"),
        &["x", "y"],
        vec![word(&c, "x"), word(&c, "y")],
        "product framing",
    );
    ManifoldBlock::new("T4", 0, 0, c, vec![t], &[SYMPLECTIC]).unwrap()
}

/// A catalog entry: constructor plus the abelianization of its closed group.
#[derive(Clone, Copy)]
pub struct Entry {
    pub build: fn() -> ManifoldBlock,
    pub fingerprint: &'static str,
}

#[derive(Clone, Default)]
pub struct Catalog {
    entries: BTreeMap<&'static str, Entry>,
}

impl Catalog {
    pub fn standard() -> Self {
        let mut entries = BTreeMap::new();
        let mut add = |name, build, fingerprint| {
            entries.insert(name, Entry { build, fingerprint });
        };
        add("matsumoto_W", matsumoto_w as fn() -> ManifoldBlock, "Z^2");
        add("W_prime", w_prime, "Z^2");
        add("T2xS2", t2_x_s2, "Z^2");
        add("block_C", block_c, "Z^3");
        add("block_C_T1", block_c_t1, "Z^3");
        add("block_C_T2", block_c_t2, "Z^3");
        add("block_B", block_b, "Z^4");
        add("torus_T4", torus_t4, "Z^4");
        Catalog { entries }
    }

    pub fn empty() -> Self {
        Catalog::default()
    }

    pub fn without(mut self, name: &str) -> Self {
        self.entries.remove(name);
        self
    }

    pub fn with_entry(mut self, name: &'static str, entry: Entry) -> Self {
        self.entries.insert(name, entry);
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn get(&self, name: &str) -> Result<ManifoldBlock> {
        self.entries
            .get(name)
            .map(|e| (e.build)())
            .ok_or_else(|| Error::UnknownBuiltin {
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })
    }

    /// Checks an entry's closed group against its recorded fingerprint.
    pub fn check_fingerprint(&self, name: &str) -> Result<bool> {
        let entry = self.entry(name).ok_or_else(|| Error::UnknownBuiltin {
            name: name.to_string(),
            available: self.names().collect::<Vec<_>>().join(", "),
        })?;
        let expected = AbelianInvariants::parse(entry.fingerprint)?;
        Ok(abelianization(&closed_pi1(&(entry.build)())) == expected)
    }
}

/// Looks a name up in the standard catalog.
pub fn builtin(name: &str) -> Result<ManifoldBlock> {
    Catalog::standard().get(name)
}
