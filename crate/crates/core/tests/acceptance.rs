//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{c, catalog, jimbo, kauffman, kauffman_variable, sos};
use ribbonlab::catalog::{ClassicalParams, ClassicalType};
use ribbonlab::drinfeld::drinfeld_pipeline;
use ribbonlab::invariants::{markov_move_suite, BraidWord, LinkEvaluator};
use ribbonlab::numerics::{bicommutant_dimension, commutant_dimension, generated_algebra_dimension, spectral};
use ribbonlab::ribbon::{evaluate_glf, mcrit_check, quotient_vanishing, ribbon_solve, GroupLikeVector, Sign};
use ribbonlab::verify::{
    build_lyubashenko_double, check_bmw, check_double_star_triangular, check_glf_commutant, check_hecke,
    check_star_triangular,
};
use ribbonlab::C64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ybe_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (name, m) in catalog() {
        let r = check_star_triangular(&m.model, 1e-9);
        worst = worst.max(r.residual);
        if !r.pass {
            failures.push(name);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs < 10.0,
        format!("max residual {worst:.2e} (< 1e-9), {secs:.2}s (< 10s), failures {failures:?}"),
    )
}

fn closability() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (name, m) in catalog() {
        match build_lyubashenko_double(&m.model, 1e-9) {
            Ok(dbl) => {
                let r = check_double_star_triangular(&dbl, 1e-9);
                worst = worst.max(r.residual);
                if !r.pass {
                    failures.push(name);
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("all closable, double braid residual {worst:.2e} (< 1e-9), failures {failures:?}"),
    )
}

fn bmw_and_hecke() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, kind, q) in [("C2", ClassicalType::C, 1.2), ("B2", ClassicalType::B, 1.44)] {
        let m = jimbo(kind, 2, c(q));
        let (lambda, qq) = m.metadata.bmw_params().unwrap();
        let r = check_bmw(&m.model, lambda, qq, 1e-9).unwrap();
        ok &= r.pass;
        let values = spectral(m.model.operator(), 1e-7).unwrap().values();
        let expected = [lambda.inv(), -qq, qq.inv()];
        let matched = values.len() == 3
            && expected
                .iter()
                .all(|e| values.iter().any(|v| (v - e).norm() < 1e-7));
        ok &= matched;
        notes.push(format!("{name} bmw {:.2e} clusters {}", r.residual, values.len()));
    }
    for rank in 1..=3 {
        let m = jimbo(ClassicalType::A, rank, c(1.3));
        let q = c(1.3);
        let r = check_hecke(&m.model, q.inv(), -q, 1e-9);
        ok &= r.pass;
        notes.push(format!("A{rank} hecke {:.2e}", r.residual));
    }
    outcome(ok, notes.join(", "))
}

fn drinfeld_anchor() -> Outcome {
    let mut ok = true;
    let mut worst_entry = 0.0f64;
    let mut worst_diag = 0.0f64;
    for (kind, qs) in [(ClassicalType::B, [1.44, 0.81]), (ClassicalType::C, [1.2, 0.7])] {
        for q in qs {
            for eta in [c(1.0), c(-1.0)] {
                let p = match kind {
                    ClassicalType::B => ClassicalParams::with_q_half(kind, 2, c(q).sqrt(), eta),
                    _ => ClassicalParams::new(kind, 2, c(q), eta),
                }
                .unwrap();
                let m = ribbonlab::catalog::jimbo_model(&p).unwrap();
                let (_, ops) = match drinfeld_pipeline(&m.model, 1e-9) {
                    Ok(x) => x,
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                let qc = p.q();
                let rel = (ops.u1.get(0, 0) - eta * qc).norm() / (eta * qc).norm();
                worst_entry = worst_entry.max(rel);
                let scale = eta * qc.powi(p.n() as i32 + p.nu());
                let mp = p.m_plus();
                for (i, &mi) in mp.iter().enumerate() {
                    for j in 0..p.n() {
                        let want = if i == j { scale * mi } else { c(0.0) };
                        worst_diag = worst_diag.max((ops.u1.get(i, j) - want).norm());
                    }
                }
            }
        }
    }
    ok &= worst_entry < 1e-10 && worst_diag < 1e-9;
    outcome(
        ok,
        format!("U1(1,1) vs eta q rel {worst_entry:.2e} (< 1e-10), U1 vs closed form {worst_diag:.2e} (< 1e-9)"),
    )
}

fn ribbon() -> Outcome {
    let mut ok = true;
    let mut worst_v = 0.0f64;
    let mut worst_m = 0.0f64;
    let mut failures = Vec::new();
    for (name, m) in catalog() {
        let pair = drinfeld_pipeline(&m.model, 1e-9).and_then(|(_, ops)| ribbon_solve(&ops, 1e-7, 1e-9));
        let Ok(pair) = pair else {
            failures.push(format!("{name}: solve failed"));
            ok = false;
            continue;
        };
        let s2 = m.s2().unwrap();
        for sol in pair.solutions() {
            worst_v = worst_v.max(sol.v_residual);
            worst_m = worst_m.max(sol.m_residual);
            let glf = check_glf_commutant(&m.model, &sol.m, 1e-9);
            let crit = mcrit_check(&sol.m, &s2, 1e-9);
            if !glf.pass || !crit.pass {
                failures.push(format!("{name}{}", sol.sign.symbol()));
            }
        }
    }
    ok &= failures.is_empty() && worst_v < 1e-8 && worst_m < 1e-8;
    outcome(
        ok,
        format!("V^2 {worst_v:.2e}, M^2 {worst_m:.2e} (< 1e-8), glf+mcrit failures {failures:?}"),
    )
}

fn quotient_counts() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases = [
        ("A1", jimbo(ClassicalType::A, 1, c(1.3)), 2),
        ("A2", jimbo(ClassicalType::A, 2, c(1.3)), 3),
        ("SOS(2,2)", sos(2, 2), 2),
        ("SOS(3,2)", sos(3, 2), 3),
    ];
    for (name, m, n) in cases {
        let g = m.model.graph();
        let det = m.metadata.det.as_ref().unwrap().to_vector(g).unwrap();
        let card = g.vertex_count() as f64;
        let is_sos = name.starts_with("SOS");
        for sign in [Sign::Plus, Sign::Minus] {
            let mm = m.m(sign).unwrap();
            let s = sign.factor().powi(n);
            let err = if is_sos {
                (evaluate_glf(&mm, &det.minus(&GroupLikeVector::unit(g))) - c(card * (s - 1.0))).norm()
            } else {
                (evaluate_glf(&mm, &det) - c(s)).norm()
            };
            ok &= err < 1e-9;
        }
        let (_, ops) = drinfeld_pipeline(&m.model, 1e-9).unwrap();
        let pair = ribbon_solve(&ops, 1e-7, 1e-9).unwrap();
        let ideal = m.metadata.ideal_vectors(&m.model).unwrap();
        let survivors = pair
            .solutions()
            .iter()
            .filter(|s| quotient_vanishing(&s.m, &ideal, 1e-9).pass)
            .count();
        let expected = if n % 2 == 0 { 2 } else { 1 };
        ok &= survivors == expected;
        notes.push(format!("{name}: {survivors} ribbon(s)"));
    }
    outcome(ok, notes.join(", "))
}

fn link_invariants() -> Outcome {
    let mut ok = true;
    let mut worst_oracle = 0.0f64;
    for q in [c(1.3), c(0.7), C64::from_polar(1.0, 0.4)] {
        let m = jimbo(ClassicalType::A, 1, q);
        let mp = m.m(Sign::Plus).unwrap();
        let mut ev = LinkEvaluator::new(&m.model, &mp, 1e-9).unwrap();
        let v = ev.evaluate(&BraidWord::parse("1 1 1", 2).unwrap()).unwrap().value().unwrap();
        worst_oracle = worst_oracle.max((v - kauffman(&[1, 1, 1], 2, kauffman_variable(q))).norm());
    }
    ok &= worst_oracle < 1e-8;

    let mut worst_drift = 0.0f64;
    for (seed, m) in [(1u64, jimbo(ClassicalType::A, 1, c(1.3))), (2, sos(2, 2)), (3, jimbo(ClassicalType::C, 2, c(1.2)))] {
        let mp = m.m(Sign::Plus).unwrap();
        for w in ["1 1 1", "1 -2 1 -2"] {
            let n = if w.contains('2') { 3 } else { 2 };
            let beta = BraidWord::parse(w, n).unwrap();
            let r = markov_move_suite(&m.model, &mp, &beta, 20, seed, 1e-8).unwrap();
            worst_drift = worst_drift.max(r.residual);
            ok &= r.pass;
        }
    }

    let m = jimbo(ClassicalType::A, 1, c(1.3));
    let mp = m.m(Sign::Plus).unwrap();
    let mut ev = LinkEvaluator::new(&m.model, &mp, 1e-9).unwrap();
    let unknot = ev.evaluate(&BraidWord::parse("", 1).unwrap()).unwrap().value().unwrap();
    let trefoil = ev.evaluate(&BraidWord::parse("1 1 1", 2).unwrap()).unwrap().value().unwrap();
    ok &= (unknot - c(1.0)).norm() < 1e-12 && (trefoil - unknot).norm() > 1e-6;
    outcome(
        ok,
        format!(
            "Kauffman oracle {worst_oracle:.2e} (< 1e-8), Markov drift {worst_drift:.2e} (< 1e-8), unknot {unknot:.6}, trefoil {trefoil:.6}"
        ),
    )
}

fn commutants() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases = [
        ("A1", jimbo(ClassicalType::A, 1, c(1.3)), 2),
        ("A2", jimbo(ClassicalType::A, 2, c(1.3)), 2),
        ("B2", jimbo(ClassicalType::B, 2, c(1.44)), 3),
        ("C2", jimbo(ClassicalType::C, 2, c(1.2)), 3),
        ("D2", jimbo(ClassicalType::D, 2, c(1.2)), 3),
    ];
    for (name, m, want) in cases {
        let w = m.model.operator();
        let start = Instant::now();
        let dim = bicommutant_dimension(w, 1e-9, 11);
        let secs = start.elapsed().as_secs_f64();
        let krylov = generated_algebra_dimension(w, 1e-9);
        let literal = commutant_dimension(w, 1e-9);
        ok &= dim == want && krylov == want && secs < 5.0;
        notes.push(format!("{name}: {dim} (algebra {krylov}, commutant {literal}) {secs:.2}s"));
    }
    outcome(ok, notes.join(", "))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("1 star-triangularity of the catalog", ybe_suite),
        ("2 closability and double braid relation", closability),
        ("3 BMW and Hecke relations, spectral clusters", bmw_and_hecke),
        ("4 Drinfeld operator anchor for B2 and C2", drinfeld_anchor),
        ("5 ribbon and modified ribbon operators", ribbon),
        ("6 det evaluations and ribbon counts", quotient_counts),
        ("7 link invariants and Markov moves", link_invariants),
        ("8 dimension of the braid-generated algebra", commutants),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!("{} [{name}] {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
