mod common;

use common::{c, catalog, jimbo, kauffman, kauffman_variable, sos};
use proptest::prelude::*;
use ribbonlab::catalog::ClassicalType;
use ribbonlab::invariants::{
    braid_image, braid_representation, link_invariant, markov_move_suite, markov_trace, BraidWord, LinkEvaluator,
};
use ribbonlab::operator::identity;
use ribbonlab::ribbon::Sign;
use ribbonlab::verify::enhancement_constants;
use ribbonlab::{Error, C64};

const TOL: f64 = 1e-9;

fn word(text: &str, n: usize) -> BraidWord {
    BraidWord::parse(text, n).unwrap()
}

#[test]
fn one_strand_representation_is_empty() {
    let m = jimbo(ClassicalType::A, 1, c(2.0));
    assert!(braid_representation(&m.model, 1, TOL).unwrap().is_empty());
    let img = braid_image(&m.model, &word("", 1), TOL).unwrap();
    assert_eq!(img.dim(), 2);
}

#[test]
fn two_strand_generator_is_the_model_operator() {
    let m = jimbo(ClassicalType::A, 1, c(2.0));
    let rep = braid_representation(&m.model, 2, TOL).unwrap();
    let (d, _) = rep[0].0.max_diff(m.model.operator());
    assert_eq!(d, 0.0);
}

#[test]
fn braid_relations_on_three_strands() {
    for (name, m) in catalog() {
        let rep = braid_representation(&m.model, 3, TOL).unwrap();
        let (s1, s2) = (&rep[0].0, &rep[1].0);
        let lhs = &(s1 * s2) * s1;
        let rhs = &(s2 * s1) * s2;
        let (d, _) = lhs.max_diff(&rhs);
        assert!(d / lhs.max_abs() < 1e-9, "{name}: {d}");
    }
}

#[test]
fn quantum_dimension_of_a1() {
    let q = c(1.7);
    let m = jimbo(ClassicalType::A, 1, q);
    let mp = m.m(Sign::Plus).unwrap();
    let t = markov_trace(&identity(m.model.graph(), 1), &mp);
    assert!((t["*"] - (q + q.inv())).norm() < 1e-12);
}

#[test]
fn quantum_dimensions_of_sos() {
    let m = sos(2, 2);
    let mp = m.m(Sign::Plus).unwrap();
    let g = m.model.graph();
    let t = markov_trace(&identity(g, 1), &mp);
    let d = m.metadata.d_table.as_ref().unwrap();
    for (v, id) in g.vertices().iter().enumerate() {
        let want: C64 = g
            .out_edges(v)
            .iter()
            .map(|&e| C64::from(d[&g.vertices()[g.edge(e).dst]]) / C64::from(d[id]))
            .sum();
        assert!((t[id] - want).norm() < 1e-12, "{id}");
    }
}

#[test]
fn a1_enhancement_constants() {
    let q = c(2.0);
    let m = jimbo(ClassicalType::A, 1, q);
    let mp = m.m(Sign::Plus).unwrap();
    let (cp, cm) = enhancement_constants(&m.model, &mp, TOL).unwrap();
    assert!((cp - q.powi(-2)).norm() < 1e-12);
    assert!((cm - q.powi(2)).norm() < 1e-12);
    let id = identity(m.model.graph(), 1);
    assert!(matches!(enhancement_constants(&m.model, &id, TOL), Err(Error::NotEnhanced { .. })));
}

#[test]
fn trefoil_matches_the_kauffman_oracle() {
    for q in [c(1.3), c(0.7), C64::from_polar(1.0, 0.4)] {
        let m = jimbo(ClassicalType::A, 1, q);
        let mp = m.m(Sign::Plus).unwrap();
        let a = kauffman_variable(q);
        for (text, n, letters) in [
            ("1 1 1", 2, vec![1, 1, 1]),
            ("1 -2 1 -2", 3, vec![1, -2, 1, -2]),
            ("1 1 1 1 1", 2, vec![1, 1, 1, 1, 1]),
        ] {
            let r = link_invariant(&m.model, &mp, &word(text, n), TOL).unwrap();
            let want = kauffman(&letters, n, a);
            assert!((r.value().unwrap() - want).norm() < 1e-8, "q={q} {text}: {:?} vs {want}", r.value());
        }
    }
}

#[test]
fn presentations_of_the_same_link_agree() {
    let m = jimbo(ClassicalType::A, 1, c(1.3));
    let mp = m.m(Sign::Plus).unwrap();
    let mut ev = LinkEvaluator::new(&m.model, &mp, TOL).unwrap();
    let groups: [&[(&str, usize)]; 3] = [
        &[("", 1), ("1", 2), ("-1", 2), ("1 2", 3)],
        &[("1 1 1", 2), ("1 1 1 2", 3)],
        &[("1 -2 1 -2", 3), ("-2 1 -2 1", 3)],
    ];
    for group in groups {
        let vals: Vec<C64> = group
            .iter()
            .map(|(t, n)| ev.evaluate(&word(t, *n)).unwrap().value().unwrap())
            .collect();
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-9, "{group:?}: {vals:?}");
        }
    }
    let unknot = ev.evaluate(&word("", 1)).unwrap().value().unwrap();
    let trefoil = ev.evaluate(&word("1 1 1", 2)).unwrap().value().unwrap();
    assert!((unknot - c(1.0)).norm() < 1e-12);
    assert!((trefoil - unknot).norm() > 1e-3);
}

#[test]
fn mirror_trefoil_is_conjugate_on_the_unit_circle() {
    let q = C64::from_polar(1.0, 0.4);
    let m = jimbo(ClassicalType::A, 1, q);
    let mp = m.m(Sign::Plus).unwrap();
    let mut ev = LinkEvaluator::new(&m.model, &mp, TOL).unwrap();
    let t = ev.evaluate(&word("1 1 1", 2)).unwrap().value().unwrap();
    let mirror = ev.evaluate(&word("-1 -1 -1", 2)).unwrap().value().unwrap();
    assert!((t.conj() - mirror).norm() < 1e-9);
}

#[test]
fn stabilization_scales_by_the_enhancement_constant() {
    for (name, m) in catalog() {
        let mp = m.m(Sign::Plus).unwrap();
        let mut ev = LinkEvaluator::new(&m.model, &mp, TOL).unwrap();
        let (cp, cm) = ev.constants();
        let base = ev.evaluate(&word("1 -1 1", 2)).unwrap();
        for (pos, cst) in [(true, cp), (false, cm)] {
            let st = ev.evaluate(&word("1 -1 1", 2).stabilize(pos)).unwrap();
            for (v, f) in &base.framed {
                let want = C64::from(*f) * cst;
                let got = C64::from(st.framed[v]);
                assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "{name} {v}");
            }
        }
    }
}

#[test]
fn markov_suite_on_the_catalog() {
    for (name, m) in catalog() {
        let mp = m.m(Sign::Plus).unwrap();
        let r = markov_move_suite(&m.model, &mp, &word("1 1 1", 2), 10, 7, 1e-8).unwrap();
        assert!(r.pass, "{name}: {r:?}");
    }
    let m = jimbo(ClassicalType::A, 1, c(1.3));
    let mp = m.m(Sign::Plus).unwrap();
    let r = markov_move_suite(&m.model, &mp, &word("", 1), 5, 1, 1e-10).unwrap();
    assert!(r.pass);
}

#[test]
fn sos_vertices_report_their_spread() {
    let m = sos(2, 3);
    let mp = m.m(Sign::Plus).unwrap();
    let r = link_invariant(&m.model, &mp, &word("1 1 1", 2), TOL).unwrap();
    assert_eq!(r.framed.len(), 4);
    assert!(r.spread.is_finite());
}

fn arb_word(n: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((1..n, any::<bool>()), 0..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn markov_trace_is_conjugation_invariant(
        n in 2usize..=3,
        letters in arb_word(3),
        gamma in arb_word(3),
        which in 0usize..3,
    ) {
        let models = [jimbo(ClassicalType::A, 1, c(1.3)), sos(2, 2), jimbo(ClassicalType::A, 2, c(0.8))];
        let m = &models[which];
        let keep = |v: &[(usize, bool)]| v.iter().copied().filter(|l| l.0 < n).collect::<Vec<_>>();
        let beta = BraidWord::new(n, keep(&letters)).unwrap();
        let g = BraidWord::new(n, keep(&gamma)).unwrap();
        let mp = m.m(Sign::Plus).unwrap();
        let f = braid_image(&m.model, &beta, TOL).unwrap();
        let h = braid_image(&m.model, &beta.conjugate_by(&g), TOL).unwrap();
        let a = markov_trace(&f, &mp);
        let b = markov_trace(&h, &mp);
        for (k, x) in &a {
            prop_assert!((x - b[k]).norm() < 1e-9 * x.norm().max(1.0), "{} {} {}", k, x, b[k]);
        }
    }
}
