use luttinger_core::abelian::{abelianization, AbelianInvariants};
use luttinger_core::catalog::{builtin, Catalog, Entry};
use luttinger_core::fp::{tietze_simplify, Effort, Presentation, Word};
use luttinger_core::manifold::{
    closed_pi1, fiber_sum, luttinger, GluingMatch, ManifoldBlock, MarkedSubmanifold,
};
use luttinger_core::verify::{build_p, build_r, verify_paper, Status, VerifyOptions};

fn w_with_images(images: [&str; 4]) -> ManifoldBlock {
    let c = Presentation::parse("<a, b | [a,b]>").unwrap();
    let images = images.iter().map(|s| c.parse_word(s).unwrap()).collect();
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

fn swapped_w() -> ManifoldBlock {
    w_with_images(["a", "b", "b", "a"])
}

fn sign_mutated_w() -> ManifoldBlock {
    w_with_images(["a", "b", "a", "b"])
}

fn catalog_with_w(build: fn() -> ManifoldBlock) -> Catalog {
    Catalog::standard().with_entry(
        "matsumoto_W",
        Entry {
            build,
            fingerprint: "Z^2",
        },
    )
}

#[test]
fn fresh_catalog_passes_every_claim() {
    let report = verify_paper(&Catalog::standard(), &VerifyOptions::default());
    for c in &report.claims {
        assert!(c.passed(), "{}: {}", c.id, c.status);
    }
    assert!(report.to_text().ends_with("15/15 claims pass\n"));
}

#[test]
fn swapped_w_pushoffs_change_r() {
    let cat = catalog_with_w(swapped_w);
    let r = build_r(&cat).unwrap();
    let s = tietze_simplify(&closed_pi1(&r), Effort::default());
    assert_eq!(abelianization(&s.presentation), AbelianInvariants::free(3));
    let report = verify_paper(&cat, &VerifyOptions::default());
    assert!(matches!(
        report.claim("r-group").unwrap().status,
        Status::Fail { .. }
    ));
    assert!(!report.all_passed());
}

#[test]
fn sign_mutation_is_invisible() {
    // The sign of the second-handle images does not affect pi1(R).
    let r = build_r(&catalog_with_w(sign_mutated_w)).unwrap();
    let s = tietze_simplify(&closed_pi1(&r), Effort::default());
    assert!(s
        .presentation
        .same_up_to_normalization(&Presentation::parse("<t,s|[t,s]>").unwrap()));
}

#[test]
fn missing_block_blocks_dependent_claims_only() {
    let cat = Catalog::standard().without("torus_T4");
    let report = verify_paper(&cat, &VerifyOptions::default());
    assert_eq!(
        report.claim("z3").unwrap().status,
        Status::Blocked {
            missing: vec!["torus_T4".into()]
        }
    );
    assert!(report.claim("r-group").unwrap().passed());
}

#[test]
fn r_keeps_both_tori_and_notes() {
    let r = build_r(&Catalog::standard()).unwrap();
    let labels: Vec<&str> = r.marked.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels, ["T1", "T2"]);
    assert!(r.notes.iter().any(|n| n.contains("placeholder")));
    assert!(!r.notes.iter().any(|n| n.starts_with("warning")));
}

#[test]
fn p_records_gamma() {
    let p = build_p(&Catalog::standard()).unwrap();
    assert!(p.notes.iter().any(|n| n.contains("gamma = s")));
    assert_eq!(
        p.complement,
        build_r(&Catalog::standard()).unwrap().complement
    );
}

#[test]
fn zero_surgery_keeps_closed_group() {
    let r = build_r(&Catalog::standard()).unwrap();
    let z = luttinger(&r, "T2", (3, 1), 0).unwrap();
    assert_eq!(closed_pi1(&z), closed_pi1(&r));
}

#[test]
fn genus_mismatch_is_reported() {
    let w = builtin("matsumoto_W").unwrap();
    let t4 = builtin("torus_T4").unwrap();
    let err = fiber_sum(&w, "F", &t4, "T", &GluingMatch::identity(2)).unwrap_err();
    assert!(err.to_string().contains("genus"));
}

#[test]
fn r_block_json_roundtrip() {
    let r = build_r(&Catalog::standard()).unwrap();
    let v = r.to_json();
    assert_eq!(v["euler"], 8);
    assert_eq!(v["marked"][0]["meridian"], "[x1,t]");
    assert_eq!(ManifoldBlock::from_json(&v).unwrap(), r);
}
