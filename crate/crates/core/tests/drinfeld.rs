mod common;

use std::sync::Arc;

use common::{c, catalog};
use ribbonlab::catalog::{jimbo_model, ClassicalParams, ClassicalType};
use ribbonlab::drinfeld::{centrality_check, drinfeld_pipeline, lyubashenko_forms};
use ribbonlab::ribbon::ribbon_solve;
use ribbonlab::verify::build_lyubashenko_double;
use ribbonlab::{Face, FaceModel, Graph, C64};

fn scalar_model(w: C64) -> FaceModel {
    let g = Arc::new(Graph::new(["v"], [("e".to_string(), "v".to_string(), "v".to_string())]).unwrap());
    FaceModel::new(g, [(Face { r: 0, p: 0, q: 0, s: 0 }, w)]).unwrap()
}

// R⁺(t, S(t)) = R⁺(t, t)⁻¹ for a group-like generator t.
#[test]
fn scalar_model_forms_and_operators() {
    let w = c(3.0);
    let m = scalar_model(w);
    let forms = lyubashenko_forms(&build_lyubashenko_double(&m, 1e-12).unwrap());
    assert!((forms.q_minus(0, 0, 0, 0) - w.inv()).norm() < 1e-15);
    assert!((forms.q_plus(0, 0, 0, 0) - w).norm() < 1e-15);
    let (_, ops) = drinfeld_pipeline(&m, 1e-12).unwrap();
    assert!((ops.u1.get(0, 0) - w.inv()).norm() < 1e-15);
    assert!((ops.u2inv.get(0, 0) - w.inv()).norm() < 1e-15);
    let pair = ribbon_solve(&ops, 1e-7, 1e-12).unwrap();
    for (sol, s) in [(&pair.plus, 1.0), (&pair.minus, -1.0)] {
        assert!((sol.m.get(0, 0) - c(s)).norm() < 1e-12);
        assert!((sol.v.get(0, 0) - c(s) * w.inv()).norm() < 1e-12);
    }
}

#[test]
fn u1_scales_inversely_with_the_braiding() {
    let q = c(1.2);
    let eta = C64::from_polar(1.1, 0.2);
    let base = jimbo_model(&ClassicalParams::new(ClassicalType::C, 2, q, c(1.0)).unwrap()).unwrap();
    let scaled = jimbo_model(&ClassicalParams::new(ClassicalType::C, 2, q, eta).unwrap()).unwrap();
    let (_, a) = drinfeld_pipeline(&base.model, 1e-9).unwrap();
    let (_, b) = drinfeld_pipeline(&scaled.model, 1e-9).unwrap();
    let (d, _) = b.u1.max_diff(&a.u1.scale(eta.inv()));
    assert!(d < 1e-12, "{d}");
    let (d, _) = b.mrib_target().max_diff(&a.mrib_target());
    assert!(d < 1e-12, "{d}");
}

#[test]
fn inverse_pairs_and_centrality() {
    for (name, m) in catalog() {
        let (_, ops) = drinfeld_pipeline(&m.model, 1e-9).unwrap();
        let id = ribbonlab::BlockOperator::identity(m.model.edge_space());
        for (a, b) in [(&ops.u1, &ops.u1inv), (&ops.u2, &ops.u2inv)] {
            let (d, _) = (a * b).max_diff(&id);
            assert!(d < 1e-9, "{name}: {d}");
        }
        let s2 = m.s2().unwrap();
        let r = centrality_check(&ops, &[s2], 1e-9);
        assert!(r.pass, "{name}: {r:?}");
    }
}
