//! Standard constructions and the claim-by-claim verification report.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{abelianization, AbelianInvariants};
use crate::catalog::{self, Catalog};
use crate::coset::{todd_coxeter, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::fp::{
    count_homomorphisms, quotient_by_normal_closure, tietze_simplify, word_trivial_under, Effort,
    FiniteTarget, HomCount, Presentation, Simplification, Word,
};
use crate::manifold::{
    closed_pi1, fiber_sum, free_abelian_formula, geography_formulas, hnn_mapping_torus, luttinger,
    GluingMatch, ManifoldBlock,
};

/// Sum of the Matsumoto block and the genus-2 block along `F` and `G`.
pub fn build_r(cat: &Catalog) -> Result<ManifoldBlock> {
    build_r_from(cat, "matsumoto_W")
}

/// Same sum with a different genus-2 partner (e.g. `W_prime`).
pub fn build_r_from(cat: &Catalog, w_name: &str) -> Result<ManifoldBlock> {
    let w = cat.get(w_name)?;
    let b = cat.get("block_B")?;
    let m = GluingMatch::from_labels(
        w.marked("F")?,
        b.marked("G")?,
        &[
            ("a1", "x1", false),
            ("b1", "y1", false),
            ("a2", "x2", false),
            ("b2", "y2", false),
        ],
    )?;
    let mut r = fiber_sum(&w, "F", &b, "G", &m)?;
    r.name = if w_name == "matsumoto_W" {
        "R".into()
    } else {
        "R_prime".into()
    };
    Ok(r)
}

/// `1/1` surgery on `T1` along `s`.
pub fn build_p(cat: &Catalog) -> Result<ManifoldBlock> {
    let mut p = luttinger(&build_r(cat)?, "T1", (0, 1), 1)?;
    p.name = "P".into();
    Ok(p)
}

/// Surgery on `T1` along `s` with coefficient `k1`, then on `T2` along
/// `p * y2 + t` with coefficient `k2`.
pub fn build_q_on(r: &ManifoldBlock, k1: i64, p: i64, k2: i64) -> Result<ManifoldBlock> {
    let first = luttinger(r, "T1", (0, 1), k1)?;
    let mut q = luttinger(&first, "T2", (p, 1), k2)?;
    q.name = format!("Q({k1},s;{k2},{p}y2+t)");
    Ok(q)
}

pub fn build_q(cat: &Catalog, k1: i64, p: i64, k2: i64) -> Result<ManifoldBlock> {
    build_q_on(&build_r(cat)?, k1, p, k2)
}

/// `P` summed with the four-torus along `T2` and a coordinate torus, the
/// trivial generator `y2` matched to `x`.
pub fn build_p_t4(cat: &Catalog) -> Result<ManifoldBlock> {
    let p = build_p(cat)?;
    let t4 = cat.get("torus_T4")?;
    let m = GluingMatch::from_labels(
        p.marked("T2")?,
        t4.marked("T")?,
        &[("y2", "x", false), ("t", "y", false)],
    )?;
    fiber_sum(&p, "T2", &t4, "T", &m)
}

/// Two copies of `P` summed along `T2` with the basis curves interchanged.
pub fn build_p_swap(cat: &Catalog) -> Result<ManifoldBlock> {
    let p = build_p(cat)?;
    let m = GluingMatch::from_labels(
        p.marked("T2")?,
        p.marked("T2")?,
        &[("y2", "t", false), ("t", "y2", false)],
    )?;
    fiber_sum(&p, "T2", &p, "T2", &m)
}

/// `W_prime` summed with the genus-2 block, then the `(1, s; 1, p*y2 + t)`
/// surgeries.
pub fn build_w_prime_q(cat: &Catalog, p: i64) -> Result<ManifoldBlock> {
    build_q_on(&build_r_from(cat, "W_prime")?, 1, p, 1)
}

/// Whether source and target of a simplification agree on abelianization
/// and on homomorphism counts into S3 and S4. Counts that hit the search
/// cap on either side make the check fail.
pub fn simplification_sound(s: &Simplification) -> bool {
    let src = &s.certificate.source;
    let dst = &s.presentation;
    if abelianization(src) != abelianization(dst) {
        return false;
    }
    [FiniteTarget::Symmetric(3), FiniteTarget::Symmetric(4)]
        .into_iter()
        .all(
            |t| match (count_homomorphisms(src, t), count_homomorphisms(dst, t)) {
                (Ok(HomCount::Exact(a)), Ok(HomCount::Exact(b))) => a == b,
                _ => false,
            },
        )
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_cosets: usize,
    pub effort: Effort,
    /// Run the abelianization and hom-count comparison on each simplification.
    pub check_soundness: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_cosets: DEFAULT_MAX_COSETS,
            effort: Effort::default(),
            check_soundness: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail { reason: String },
    Blocked { missing: Vec<String> },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail { reason } => write!(f, "FAIL: {reason}"),
            Status::Blocked { missing } => {
                write!(f, "blocked: missing block {}", missing.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    /// What is being checked, in plain words.
    pub citation: &'static str,
    #[serde(flatten)]
    pub status: Status,
    pub computed: BTreeMap<String, Value>,
    pub certificate: Option<String>,
    pub annotations: Vec<String>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claims: Vec<ClaimResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(ClaimResult::passed)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            out.push_str(&format!("[{}] {} -- {}\n", c.id, c.status, c.citation));
            for (k, v) in &c.computed {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("    {k}: {v}\n"));
            }
            if let Some(cert) = &c.certificate {
                out.push_str(&format!("    certificate: {cert}\n"));
            }
            for a in &c.annotations {
                out.push_str(&format!("    note: {a}\n"));
            }
        }
        let passed = self.claims.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{passed}/{} claims pass\n", self.claims.len()));
        out
    }
}

/// Collects computed values and the first failure of a claim.
struct Check {
    computed: BTreeMap<String, Value>,
    failures: Vec<String>,
    certificate: Option<String>,
    annotations: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            computed: BTreeMap::new(),
            failures: Vec::new(),
            certificate: None,
            annotations: Vec::new(),
        }
    }

    fn record(&mut self, key: impl Into<String>, v: impl Serialize) {
        self.computed
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn expect_eq<T: PartialEq + fmt::Display>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.failures
                .push(format!("{what}: got {got}, expected {want}"));
        }
    }
}

struct ClaimDef {
    id: &'static str,
    citation: &'static str,
    needs: &'static [&'static str],
    run: fn(&Catalog, &VerifyOptions, &mut Check) -> Result<()>,
}

const R_BLOCKS: &[&str] = &["matsumoto_W", "block_B"];

fn claims() -> Vec<ClaimDef> {
    vec![
        ClaimDef {
            id: "r-group",
            citation: "the sum R has fundamental group Z t + Z s, e = 8, signature -4",
            needs: R_BLOCKS,
            run: claim_r_group,
        },
        ClaimDef {
            id: "r-meridians",
            citation: "both torus meridians are trivial in the complement of the tori in R",
            needs: R_BLOCKS,
            run: claim_r_meridians,
        },
        ClaimDef {
            id: "r-complement-iso",
            citation: "the complement of the tori in R has the same group as R",
            needs: R_BLOCKS,
            run: claim_r_complement,
        },
        ClaimDef {
            id: "p-group",
            citation: "surgery on T1 along s gives P with group Z t, e = 8, signature -4",
            needs: R_BLOCKS,
            run: claim_p_group,
        },
        ClaimDef {
            id: "p-torus",
            citation: "the meridian of the torus in P is trivial in its complement",
            needs: R_BLOCKS,
            run: claim_p_torus,
        },
        ClaimDef {
            id: "q-family",
            citation: "Q(k1,s;k2,p*y2+t) has group Z/k1 + Z/k2 for k1, k2 in 1..4, p in 0..2",
            needs: R_BLOCKS,
            run: claim_q_family,
        },
        ClaimDef {
            id: "q-simply-connected",
            citation: "Q(1,s;1,p*y2+t) is simply connected with e = 8, signature -4",
            needs: R_BLOCKS,
            run: claim_q_simply_connected,
        },
        ClaimDef {
            id: "surgery-composition",
            citation: "two sequential surgeries equal one quotient of the complement of R",
            needs: R_BLOCKS,
            run: claim_surgery_composition,
        },
        ClaimDef {
            id: "z3",
            citation: "P summed with the four-torus has group Z^3, e = 8, signature -4",
            needs: &["matsumoto_W", "block_B", "torus_T4"],
            run: claim_z3,
        },
        ClaimDef {
            id: "p-swap",
            citation: "two copies of P summed with basis curves interchanged are simply connected, e = 16, signature -8",
            needs: R_BLOCKS,
            run: claim_p_swap,
        },
        ClaimDef {
            id: "w-prime",
            citation: "replacing W by W' gives a simply connected family with e = 14, signature -6",
            needs: &["W_prime", "block_B"],
            run: claim_w_prime,
        },
        ClaimDef {
            id: "blow-up",
            citation: "T2 x S2 blown up at four points has the invariants of W",
            needs: &["T2xS2", "matsumoto_W"],
            run: claim_blow_up,
        },
        ClaimDef {
            id: "mapping-tori",
            citation: "the mapping torus presentations reproduce pi1(C), pi1(C - T1), pi1(C - T2)",
            needs: &["block_C", "block_C_T1", "block_C_T2"],
            run: claim_mapping_tori,
        },
        ClaimDef {
            id: "formulas",
            citation: "geography formulas e = 12+8(g+r), sign = -8-4(g+r) and e = 11-5n+2n^2, sign = -3-n",
            needs: &[],
            run: claim_formulas,
        },
        ClaimDef {
            id: "fingerprints",
            citation: "every catalog entry matches its recorded abelianization",
            needs: &[],
            run: claim_fingerprints,
        },
    ]
}

/// Runs every claim against `cat`. Claims whose blocks are absent are
/// reported as blocked; evaluation errors become failures.
pub fn verify_paper(cat: &Catalog, opts: &VerifyOptions) -> Report {
    let claims = claims()
        .into_iter()
        .map(|def| {
            let missing: Vec<String> = def
                .needs
                .iter()
                .filter(|n| cat.entry(n).is_none())
                .map(|n| n.to_string())
                .collect();
            let mut check = Check::new();
            let status = if !missing.is_empty() {
                Status::Blocked { missing }
            } else {
                match (def.run)(cat, opts, &mut check) {
                    Err(e) => Status::Fail {
                        reason: e.to_string(),
                    },
                    Ok(()) if check.failures.is_empty() => Status::Pass,
                    Ok(()) => Status::Fail {
                        reason: check.failures.join("; "),
                    },
                }
            };
            ClaimResult {
                id: def.id,
                citation: def.citation,
                status,
                computed: check.computed,
                certificate: check.certificate,
                annotations: check.annotations,
            }
        })
        .collect();
    Report { claims }
}

fn simplify_checked(
    p: &Presentation,
    opts: &VerifyOptions,
    c: &mut Check,
    key: &str,
) -> Simplification {
    let s = tietze_simplify(p, opts.effort);
    if let Err(e) = s.certificate.replay() {
        c.failures
            .push(format!("{key}: certificate replay failed: {e}"));
    }
    if s.budget_exhausted {
        c.annotations
            .push(format!("{key}: simplification budget exhausted"));
    }
    if opts.check_soundness && !simplification_sound(&s) {
        c.failures
            .push(format!("{key}: simplification changed an invariant"));
    }
    s
}

fn is_commutator_pair(p: &Presentation, a: &str, b: &str) -> bool {
    let Ok(expected) = Presentation::parse(&format!("<{a},{b} | [{a},{b}]>")) else {
        return false;
    };
    p.same_up_to_normalization(&expected)
}

fn claim_r_group(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    let s = simplify_checked(&closed_pi1(&r), opts, c, "closed");
    c.record("euler", r.euler);
    c.record("signature", r.signature);
    c.record("simplified", s.presentation.to_text());
    c.record(
        "abelianization",
        abelianization(&s.presentation).to_string(),
    );
    c.certificate = Some(s.certificate.summary());
    c.expect_eq("euler", r.euler, 8);
    c.expect_eq("signature", r.signature, -4);
    c.expect(
        is_commutator_pair(&s.presentation, "t", "s"),
        format!("simplified to {}, expected <t,s | [t,s]>", s.presentation),
    );
    c.expect_eq(
        "abelianization",
        abelianization(&s.presentation),
        AbelianInvariants::free(2),
    );
    c.annotations
        .push("minimality and the Lagrangian condition are not computed".into());
    Ok(())
}

fn claim_r_meridians(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    let s = simplify_checked(&r.complement, opts, c, "complement");
    c.certificate = Some(s.certificate.summary());
    for label in ["T1", "T2"] {
        let mu = &r.marked(label)?.meridian;
        let trivial = word_trivial_under(&s.certificate, mu)?;
        c.record(
            format!("{label} meridian {}", r.complement.word_to_string(mu)),
            if trivial {
                "trivial"
            } else {
                "not shown trivial"
            },
        );
        c.expect(trivial, format!("meridian of {label} not shown trivial"));
    }
    Ok(())
}

fn claim_r_complement(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    let s = simplify_checked(&r.complement, opts, c, "complement");
    c.record("complement", s.presentation.to_text());
    c.expect(
        is_commutator_pair(&s.presentation, "t", "s"),
        format!("complement simplified to {}", s.presentation),
    );
    // The torus bases map to (s, 1) and (1, t).
    let images: Vec<String> = ["T1", "T2"]
        .iter()
        .map(|l| -> Result<String> {
            let m = r.marked(l)?;
            let ws: Vec<String> = m
                .pushoff_basis
                .iter()
                .map(|w| {
                    s.certificate
                        .rewrite(w)
                        .map(|x| s.presentation.word_to_string(&x))
                })
                .collect::<Result<_>>()?;
            Ok(format!("{l}: ({})", ws.join(", ")))
        })
        .collect::<Result<_>>()?;
    c.record("torus images", &images);
    c.expect_eq(
        "torus images",
        images.join(" "),
        "T1: (1, s) T2: (1, t)".to_string(),
    );
    Ok(())
}

fn claim_p_group(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    let p = build_p(cat)?;
    let s = simplify_checked(&closed_pi1(&p), opts, c, "closed");
    c.record("euler", p.euler);
    c.record("signature", p.signature);
    c.record("simplified", s.presentation.to_text());
    c.certificate = Some(s.certificate.summary());
    c.expect_eq("euler", p.euler, 8);
    c.expect_eq("signature", p.signature, -4);
    c.expect(
        s.presentation
            .same_up_to_normalization(&Presentation::parse("<t | >")?),
        format!("simplified to {}, expected <t | >", s.presentation),
    );
    c.expect(
        (p.euler, p.signature) == (r.euler, r.signature),
        "surgery changed (e, signature)",
    );
    Ok(())
}

fn claim_p_torus(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let p = build_p(cat)?;
    // Complement of T2 alone: fill T1 back in.
    let t1 = p.marked("T1")?.meridian.clone();
    let comp = quotient_by_normal_closure(&p.complement, &[t1])?;
    let s = simplify_checked(&comp, opts, c, "complement of T");
    let t = p.marked("T2")?;
    let trivial = word_trivial_under(&s.certificate, &t.meridian)?;
    c.record("complement", s.presentation.to_text());
    c.record("meridian trivial", trivial);
    c.expect(trivial, "meridian of T not shown trivial");
    let images: Vec<String> = t
        .pushoff_basis
        .iter()
        .map(|w| {
            s.certificate
                .rewrite(w)
                .map(|x| s.presentation.word_to_string(&x))
        })
        .collect::<Result<_>>()?;
    c.record("basis images", &images);
    c.expect_eq("basis images", images.join(","), "1,t".to_string());
    Ok(())
}

fn order_of(p: &Presentation, opts: &VerifyOptions) -> Option<usize> {
    todd_coxeter(p, opts.max_cosets).order()
}

fn claim_q_family(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    for k1 in 1..=4i64 {
        for k2 in 1..=4i64 {
            for p in 0..=2i64 {
                let q = build_q_on(&r, k1, p, k2)?;
                let closed = closed_pi1(&q);
                let order = order_of(&closed, opts);
                let ab = abelianization(&closed);
                c.record(
                    format!("k1={k1} k2={k2} p={p}"),
                    json!({ "order": order, "abelianization": ab.to_string() }),
                );
                c.expect(
                    order == Some((k1 * k2) as usize),
                    format!("Q({k1},{p},{k2}) order {order:?}"),
                );
                c.expect(
                    ab == AbelianInvariants::from_cyclic_orders(&[k1, k2]),
                    format!("Q({k1},{p},{k2}) abelianization {ab}"),
                );
                c.expect(
                    (q.euler, q.signature) == (8, -4),
                    format!("Q({k1},{p},{k2}) invariants ({}, {})", q.euler, q.signature),
                );
            }
        }
    }
    c.annotations
        .push("minimality is recorded, not computed".into());
    Ok(())
}

fn claim_q_simply_connected(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    for p in -2..=2i64 {
        let q = build_q_on(&r, 1, p, 1)?;
        let closed = closed_pi1(&q);
        let order = order_of(&closed, opts);
        let s = simplify_checked(&closed, opts, c, &format!("p={p}"));
        c.record(
            format!("p={p}"),
            json!({ "order": order, "simplified": s.presentation.to_text() }),
        );
        c.expect_eq("euler", q.euler, 8);
        c.expect_eq("signature", q.signature, -4);
        c.expect(order == Some(1), format!("p={p}: order {order:?}"));
    }
    c.annotations
        .push("homeomorphism type and exoticness are stated facts, not computed".into());
    Ok(())
}

fn claim_surgery_composition(cat: &Catalog, _opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let r = build_r(cat)?;
    let t1 = r.marked("T1")?;
    let t2 = r.marked("T2")?;
    for (k1, p, k2) in [(1, 0, 1), (2, 1, 3), (3, 2, 2), (0, 0, 0)] {
        let q = build_q_on(&r, k1, p, k2)?;
        let gamma1 = t1.pushoff_basis[1].clone();
        let gamma2 = t2.pushoff_basis[0].pow(p).mul(&t2.pushoff_basis[1]);
        let direct = quotient_by_normal_closure(
            &r.complement,
            &[
                gamma1.pow(k1).mul(&t1.meridian),
                gamma2.pow(k2).mul(&t2.meridian),
            ],
        )?;
        let same = closed_pi1(&q).same_up_to_normalization(&direct);
        c.record(format!("k1={k1} p={p} k2={k2}"), same);
        c.expect(same, format!("({k1},{p},{k2}) differs"));
    }
    Ok(())
}

fn claim_z3(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let m = build_p_t4(cat)?;
    let s = simplify_checked(&closed_pi1(&m), opts, c, "closed");
    let ab = abelianization(&s.presentation);
    c.record("euler", m.euler);
    c.record("signature", m.signature);
    c.record("simplified", s.presentation.to_text());
    c.record("abelianization", ab.to_string());
    c.expect_eq("euler", m.euler, 8);
    c.expect_eq("signature", m.signature, -4);
    c.expect_eq("abelianization", ab, AbelianInvariants::free(3));
    let s3 = count_homomorphisms(&s.presentation, FiniteTarget::Symmetric(3))?;
    c.record("S3 homs", s3.to_string());
    let z3 = Presentation::parse("<u,v,w | [u,v],[u,w],[v,w]>")?;
    c.expect(
        s3 == count_homomorphisms(&z3, FiniteTarget::Symmetric(3))?,
        "S3 count differs from Z^3",
    );
    Ok(())
}

fn claim_p_swap(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let m = build_p_swap(cat)?;
    let closed = closed_pi1(&m);
    let order = order_of(&closed, opts);
    c.record("euler", m.euler);
    c.record("signature", m.signature);
    c.record("order", order);
    c.record("abelianization", abelianization(&closed).to_string());
    c.expect_eq("euler", m.euler, 16);
    c.expect_eq("signature", m.signature, -8);
    c.expect(
        abelianization(&closed).is_trivial(),
        "abelianization not trivial",
    );
    c.expect(order == Some(1), format!("order {order:?}"));
    Ok(())
}

fn claim_w_prime(cat: &Catalog, opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    for p in 0..=2 {
        let q = build_w_prime_q(cat, p)?;
        let order = order_of(&closed_pi1(&q), opts);
        c.record(
            format!("p={p}"),
            json!({"euler": q.euler, "signature": q.signature, "order": order}),
        );
        c.expect_eq("euler", q.euler, 14);
        c.expect_eq("signature", q.signature, -6);
        c.expect(order == Some(1), format!("p={p}: order {order:?}"));
    }
    Ok(())
}

fn claim_blow_up(cat: &Catalog, _opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let b = crate::manifold::blow_up(&cat.get("T2xS2")?, 4);
    let w = cat.get("matsumoto_W")?;
    c.record("euler", b.euler);
    c.record("signature", b.signature);
    c.expect_eq("euler", b.euler, w.euler);
    c.expect_eq("signature", b.signature, w.signature);
    Ok(())
}

fn claim_mapping_tori(cat: &Catalog, _opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    let computed = mapping_tori()?;
    for (name, p) in [
        ("block_C", &computed[0]),
        ("block_C_T1", &computed[1]),
        ("block_C_T2", &computed[2]),
    ] {
        let stored = cat.get(name)?.complement;
        let same = p.same_up_to_normalization(&stored);
        c.record(name, json!({ "computed": p.to_text(), "matches": same }));
        c.expect(same, format!("{name}: {p} differs from {stored}"));
    }
    Ok(())
}

/// `pi1(C)`, `pi1(C - T1)`, `pi1(C - T2)` built from mapping tori of the
/// twist along `x` on the punctured torus `<x, y | >`.
pub fn mapping_tori() -> Result<[Presentation; 3]> {
    let h = Presentation::parse("<x, y | >")?;
    let x = h.gen("x")?;
    let y = h.gen("y")?;
    let twist = [(x.clone(), x.clone()), (y.clone(), y.mul(&x))];
    let z = hnn_mapping_torus(&h, &twist, "t")?;
    let c = crate::fp::direct_sum_with_z(&z, "s");

    // The complement of the curve parallel to y is carried by y and the
    // boundary word, which the twist fixes.
    let boundary = Word::commutator(&x, &y);
    let z_minus_k = hnn_mapping_torus(
        &h,
        &[(y.clone(), y.mul(&x)), (boundary.clone(), boundary)],
        "t",
    )?;
    let c_t1 = crate::fp::direct_sum_with_z(&z_minus_k, "s");

    // s commutes only with loops that miss the torus over x: x and t.
    let t = z.gen("t")?;
    let xz = z.gen("x")?;
    let c_t2 = hnn_mapping_torus(&z, &[(xz.clone(), xz), (t.clone(), t)], "s")?;
    Ok([c, c_t1, c_t2])
}

fn claim_formulas(_cat: &Catalog, _opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    for (g, r) in [(0, 0), (1, 1), (2, 3)] {
        let v = geography_formulas(g, r);
        c.record(format!("g={g} r={r}"), v);
        c.expect_eq("geography e", v.0, 12 + 8 * (g + r));
        c.expect_eq("geography sign", v.1, -8 - 4 * (g + r));
    }
    for n in 1..=5 {
        let v = free_abelian_formula(n)?;
        c.record(format!("n={n}"), v);
        c.expect_eq("free abelian e", v.0, 11 - 5 * n + 2 * n * n);
        c.expect_eq("free abelian sign", v.1, -3 - n);
    }
    Ok(())
}

fn claim_fingerprints(cat: &Catalog, _opts: &VerifyOptions, c: &mut Check) -> Result<()> {
    for name in cat.names() {
        let ok = cat.check_fingerprint(name)?;
        c.record(name, ok);
        c.expect(ok, format!("{name} fingerprint"));
    }
    Ok(())
}

/// Presentations used by the shipped cross-checks, by name.
pub fn named_presentation(name: &str) -> Result<Presentation> {
    match name {
        "C" => Ok(catalog::pi1_c()),
        "C-T1" => Ok(catalog::pi1_c_minus_t1()),
        "C-T2" => Ok(catalog::pi1_c_minus_t2()),
        "B" => Ok(catalog::pi1_b()),
        "B-T" => Ok(catalog::pi1_b_minus_tori()),
        other => Err(Error::UnknownBuiltin {
            name: other.to_string(),
            available: "C, C-T1, C-T2, B, B-T".into(),
        }),
    }
}
