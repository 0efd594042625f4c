//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use luttinger_core::abelian::{
    abelianization, determinant, smith_normal_form, AbelianInvariants, IntMatrix,
};
use luttinger_core::catalog::{Catalog, Entry};
use luttinger_core::coset::{todd_coxeter, Outcome, DEFAULT_MAX_COSETS};
use luttinger_core::fp::{tietze_simplify, word_trivial_under, Effort, Presentation, Word};
use luttinger_core::manifold::{
    closed_pi1, free_abelian_formula, geography_formulas, luttinger, ManifoldBlock,
    MarkedSubmanifold,
};
use luttinger_core::verify::{
    build_p, build_p_t4, build_q_on, build_r, build_w_prime_q, mapping_tori, simplification_sound,
};

const R_PIPELINE_LIMIT: Duration = Duration::from_secs(1);
const Q_RUN_LIMIT: Duration = Duration::from_secs(2);
const Q_CAP: usize = 50_000;
const SNF_SAMPLES: usize = 1000;

fn report(n: u32, ok: bool, detail: impl AsRef<str>) {
    println!(
        "criterion {n}: {} {}",
        if ok { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    assert!(ok, "criterion {n} failed: {}", detail.as_ref());
}

fn is_t_s_commutator(p: &Presentation) -> bool {
    p.generators() == ["t", "s"]
        && p.relators().len() == 1
        && p.relators()[0].as_commutator().is_some()
        && p.same_up_to_normalization(&Presentation::parse("<t,s | [t,s]>").unwrap())
}

/// Criterion 1 on the R built from `cat`: (ok, detail).
fn r_group_check(cat: &Catalog) -> (bool, String) {
    let start = Instant::now();
    let r = build_r(cat).unwrap();
    let s = tietze_simplify(&closed_pi1(&r), Effort::default());
    let elapsed = start.elapsed();
    let ab = abelianization(&s.presentation);
    let ok = elapsed < R_PIPELINE_LIMIT
        && is_t_s_commutator(&s.presentation)
        && ab == AbelianInvariants::free(2);
    (
        ok,
        format!(
            "pi1(R) = {} ab {ab} in {elapsed:?} (limit {R_PIPELINE_LIMIT:?})",
            s.presentation
        ),
    )
}

#[test]
fn criterion_01_pi1_r() {
    let (ok, detail) = r_group_check(&Catalog::standard());
    report(1, ok, detail);
}

#[test]
fn criterion_02_meridians_trivial() {
    let r = build_r(&Catalog::standard()).unwrap();
    let s = tietze_simplify(&r.complement, Effort::default());
    let mu1 = r.complement.parse_word("[x1,t]").unwrap();
    let mu2 = r.complement.parse_word("[x2,s]").unwrap();
    assert_eq!(r.marked("T1").unwrap().meridian, mu1);
    assert_eq!(r.marked("T2").unwrap().meridian, mu2);
    let t1 = word_trivial_under(&s.certificate, &mu1).unwrap();
    let t2 = word_trivial_under(&s.certificate, &mu2).unwrap();
    let replay = s.certificate.replay().is_ok();
    report(
        2,
        t1 && t2 && replay,
        format!("mu1 trivial {t1}, mu2 trivial {t2}, certificate replays {replay}"),
    );
}

#[test]
fn criterion_03_pi1_p() {
    let p = build_p(&Catalog::standard()).unwrap();
    let s = tietze_simplify(&closed_pi1(&p), Effort::default());
    let expected = Presentation::parse("<t | >").unwrap();
    let ok = s.presentation == expected && (p.euler, p.signature) == (8, -4);
    report(
        3,
        ok,
        format!(
            "pi1(P) = {}, e = {}, sigma = {}",
            s.presentation, p.euler, p.signature
        ),
    );
}

#[test]
fn criterion_04_q_family() {
    let r = build_r(&Catalog::standard()).unwrap();
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for k1 in 1..=4i64 {
        for k2 in 1..=4i64 {
            for p in 0..=2i64 {
                let start = Instant::now();
                let q = build_q_on(&r, k1, p, k2).unwrap();
                let closed = closed_pi1(&q);
                let tc = todd_coxeter(&closed, Q_CAP);
                let elapsed = start.elapsed();
                slowest = slowest.max(elapsed);
                let ab = abelianization(&closed);
                let want_ab = AbelianInvariants::from_cyclic_orders(&[k1, k2]);
                if tc.outcome != Outcome::Finite((k1 * k2) as usize)
                    || ab != want_ab
                    || elapsed >= Q_RUN_LIMIT
                {
                    failures.push(format!(
                        "({k1},{p},{k2}): {:?}, ab {ab}, {elapsed:?}",
                        tc.outcome
                    ));
                }
                if k1 == 1 && k2 == 1 && tc.outcome != Outcome::Finite(1) {
                    failures.push(format!("(1,{p},1) not simply connected"));
                }
            }
        }
    }
    report(
        4,
        failures.is_empty(),
        format!(
            "48 cases, slowest {slowest:?} (limit {Q_RUN_LIMIT:?}, cap {Q_CAP}); failures: {failures:?}"
        ),
    );
}

#[test]
fn criterion_05_invariant_arithmetic() {
    let cat = Catalog::standard();
    let mut failures = Vec::new();
    let r = build_r(&cat).unwrap();
    if (r.euler, r.signature) != (8, -4) {
        failures.push(format!("R: ({}, {})", r.euler, r.signature));
    }
    for (torus, dir, k) in [("T1", (0, 1), 1), ("T2", (2, 1), 3), ("T1", (1, 0), -2)] {
        let l = luttinger(&r, torus, dir, k).unwrap();
        if (l.euler, l.signature) != (r.euler, r.signature) || l.complement != r.complement {
            failures.push(format!("surgery {torus} {dir:?} {k} changed invariants"));
        }
    }
    let z3 = build_p_t4(&cat).unwrap();
    let z3_ab = abelianization(&closed_pi1(&z3));
    if (z3.euler, z3.signature) != (8, -4) || z3_ab != AbelianInvariants::free(3) {
        failures.push(format!("P#T4: ({}, {}) {z3_ab}", z3.euler, z3.signature));
    }
    for p in 0..=2 {
        let w = build_w_prime_q(&cat, p).unwrap();
        let order = todd_coxeter(&closed_pi1(&w), DEFAULT_MAX_COSETS).order();
        if (w.euler, w.signature, order) != (14, -6, Some(1)) {
            failures.push(format!(
                "W' p={p}: ({}, {}) {order:?}",
                w.euler, w.signature
            ));
        }
    }
    for g in 0..=4 {
        for rel in 0..=4 {
            if geography_formulas(g, rel) != (12 + 8 * (g + rel), -8 - 4 * (g + rel)) {
                failures.push(format!("geography({g},{rel})"));
            }
        }
    }
    let table = [(8, -4), (9, -5), (14, -6), (23, -7), (36, -8)];
    for (n, want) in (1..=5).zip(table) {
        if free_abelian_formula(n).unwrap() != want {
            failures.push(format!("free_abelian({n})"));
        }
    }
    report(5, failures.is_empty(), format!("failures: {failures:?}"));
}

#[test]
fn criterion_06_mapping_tori() {
    let cat = Catalog::standard();
    let computed = mapping_tori().unwrap();
    let mut results = Vec::new();
    for (name, p) in ["block_C", "block_C_T1", "block_C_T2"]
        .iter()
        .zip(&computed)
    {
        let stored = cat.get(name).unwrap().complement;
        let same = p.normalized().relators() == stored.normalized().relators()
            && p.generators() == stored.generators();
        results.push((name.to_string(), same));
    }
    report(6, results.iter().all(|(_, s)| *s), format!("{results:?}"));
}

/// Determinantal divisors: d_k = gcd of all k x k minors.
fn determinantal_invariants(m: &[Vec<i64>]) -> Vec<BigInt> {
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combos(n - 1, k);
        for mut c in combos(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }
    fn gcd(a: BigInt, b: BigInt) -> BigInt {
        if b.is_zero() {
            a.abs()
        } else {
            let r = &a % &b;
            gcd(b, r)
        }
    }
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut divisors = vec![BigInt::one()];
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combos(rows, k) {
            for cs in combos(cols, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                g = gcd(g, determinant(&IntMatrix::from_rows(&sub)));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

#[test]
fn criterion_07_smith_normal_form() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut failures = Vec::new();
    for sample in 0..SNF_SAMPLES {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(&m);
        let f = smith_normal_form(&a);
        let exact = f.u.mul(&a).mul(&f.v) == f.d && f.d.is_diagonal();
        let unimodular = determinant(&f.u).abs().is_one() && determinant(&f.v).abs().is_one();
        let diag = f.d.diagonal();
        let nonzero: Vec<&BigInt> = diag.iter().filter(|x| !x.is_zero()).collect();
        let zeros_last = diag
            .iter()
            .skip_while(|x| !x.is_zero())
            .all(|x| x.is_zero());
        let chain = zeros_last
            && nonzero.iter().all(|x| x.is_positive())
            && nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero());
        let oracle = determinantal_invariants(&m);
        let agrees = nonzero.iter().map(|x| (*x).clone()).collect::<Vec<_>>() == oracle;
        if !(exact && unimodular && chain && agrees) {
            failures.push(format!(
                "sample {sample} {m:?}: exact {exact} unimodular {unimodular} chain {chain} oracle {agrees}"
            ));
        }
    }
    report(
        7,
        failures.is_empty(),
        format!(
            "{SNF_SAMPLES} matrices; failures: {:?}",
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    );
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // Apply `a` first, then `b`, matching left-to-right word evaluation.
    a.iter().map(|&x| b[x]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn eval(w: &Word, gens: &[Perm]) -> Perm {
    let n = gens[0].len();
    w.letters().iter().fold((0..n).collect(), |acc, l| {
        let g = if l.inverse {
            invert(&gens[l.generator])
        } else {
            gens[l.generator].clone()
        };
        compose(&acc, &g)
    })
}

/// Size of the permutation group generated by `gens`, by breadth-first closure.
fn closure_order(gens: &[Perm]) -> usize {
    let id: Perm = (0..gens[0].len()).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

fn cycle(n: usize, offset: usize, len: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    for i in 0..len {
        p[offset + i] = offset + (i + 1) % len;
    }
    p
}

fn reflection(n: usize) -> Perm {
    (0..n).map(|i| (n - i) % n).collect()
}

fn transposition(n: usize, a: usize, b: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    p.swap(a, b);
    p
}

fn tc_corpus() -> Vec<(String, Vec<Perm>)> {
    let mut corpus = Vec::new();
    for n in 1..=6 {
        corpus.push((format!("<a | a^{n}>"), vec![cycle(n, 0, n)]));
    }
    for n in 3..=8 {
        corpus.push((
            format!("<r, f | r^{n}, f^2, (r*f)^2>"),
            vec![cycle(n, 0, n), reflection(n)],
        ));
    }
    corpus.push((
        "<a, b | a^2, b^2, (a*b)^3>".into(),
        vec![transposition(3, 0, 1), transposition(3, 1, 2)],
    ));
    corpus.push((
        "<a, b, c | a^2, b^2, c^2, (a*b)^3, (b*c)^3, (a*c)^2>".into(),
        vec![
            transposition(4, 0, 1),
            transposition(4, 1, 2),
            transposition(4, 2, 3),
        ],
    ));
    corpus.push((
        "<a, b | a^2, b^4, (a*b)^3>".into(),
        vec![transposition(4, 0, 1), cycle(4, 0, 4)],
    ));
    for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 6), (4, 6)] {
        corpus.push((
            format!("<a, b | a^{m}, b^{n}, [a,b]>"),
            vec![cycle(m + n, 0, m), cycle(m + n, m, n)],
        ));
    }
    corpus
}

#[test]
fn criterion_08_todd_coxeter_oracle() {
    let corpus = tc_corpus();
    let mut failures = Vec::new();
    for (text, gens) in &corpus {
        let p = Presentation::parse(text).unwrap();
        let relators_hold = p
            .relators()
            .iter()
            .all(|r| eval(r, gens).iter().enumerate().all(|(i, &x)| i == x));
        let oracle = closure_order(gens);
        let tc = todd_coxeter(&p, DEFAULT_MAX_COSETS);
        if !relators_hold || oracle > 24 || tc.outcome != Outcome::Finite(oracle) {
            failures.push(format!("{text}: {:?} vs {oracle}", tc.outcome));
        }
    }
    report(
        8,
        corpus.len() >= 20 && failures.is_empty(),
        format!("{} presentations; failures: {failures:?}", corpus.len()),
    );
}

#[test]
fn criterion_09_simplification_soundness() {
    let cat = Catalog::standard();
    let r = build_r(&cat).unwrap();
    let p = build_p(&cat).unwrap();
    let mut inputs: Vec<(String, Presentation)> = vec![
        ("R closed".into(), closed_pi1(&r)),
        ("R complement".into(), r.complement.clone()),
        ("P closed".into(), closed_pi1(&p)),
        ("P#T4 closed".into(), closed_pi1(&build_p_t4(&cat).unwrap())),
        (
            "W' Q closed".into(),
            closed_pi1(&build_w_prime_q(&cat, 1).unwrap()),
        ),
    ];
    for (k1, pp, k2) in [(1, 0, 1), (2, 1, 3), (4, 2, 2), (3, 0, 3)] {
        inputs.push((
            format!("Q({k1},{pp},{k2})"),
            closed_pi1(&build_q_on(&r, k1, pp, k2).unwrap()),
        ));
    }
    for name in cat.names() {
        inputs.push((
            format!("{name} closed"),
            closed_pi1(&cat.get(name).unwrap()),
        ));
    }
    let mut failures = Vec::new();
    for (name, pres) in &inputs {
        let s = tietze_simplify(pres, Effort::default());
        if !simplification_sound(&s) || s.certificate.replay().is_err() {
            failures.push(name.clone());
        }
    }
    report(
        9,
        failures.is_empty(),
        format!("{} simplifications; unsound: {failures:?}", inputs.len()),
    );
}

fn mutated_w() -> ManifoldBlock {
    let c = Presentation::parse("<a, b | [a,b]>").unwrap();
    let images = ["a", "b", "a", "b^-1"]
        .iter()
        .map(|s| c.parse_word(s).unwrap())
        .collect();
    let f = MarkedSubmanifold::new(
        "F",
        2,
        Word::identity(),
        &["a1", "b1", "a2", "b2"],
        images,
        "",
    );
    ManifoldBlock::new("W", 4, -4, c, vec![f], &[]).unwrap()
}

#[test]
fn criterion_10_mutation_sensitivity() {
    let cat = Catalog::standard().with_entry(
        "matsumoto_W",
        Entry {
            build: mutated_w,
            fingerprint: "Z^2",
        },
    );
    let (still_passes, detail) = r_group_check(&cat);
    report(
        10,
        !still_passes,
        format!("with a2 -> a, criterion 1 check gives: {detail}"),
    );
}
