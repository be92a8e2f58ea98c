//! Lyubashenko forms on degree-1 generators and the Drinfeld operators on the
//! edge space.

use crate::error::{Error, Result};
use crate::model::{FaceModel, C64};
use crate::numerics::invert;
use crate::operator::{truncated_tensor, BlockOperator, EdgeOperator};
use crate::verify::{compare, CheckReport, LyubashenkoDouble};

/// `Q⁺` and `Q⁻` on pairs of edge matrix coefficients `e(p/q)`, `e(r/s)`.
#[derive(Debug, Clone)]
pub struct LyubashenkoForms {
    dbl: LyubashenkoDouble,
}

pub fn lyubashenko_forms(dbl: &LyubashenkoDouble) -> LyubashenkoForms {
    LyubashenkoForms { dbl: dbl.clone() }
}

impl LyubashenkoForms {
    pub fn double(&self) -> &LyubashenkoDouble {
        &self.dbl
    }

    /// `Q⁺(e(p/q), e(r/s)) = w_LD⁻¹[(q̃, r), (s, p̃)]`, edges given by original index.
    pub fn q_plus(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        let d = &self.dbl;
        d.inverse_entry((d.tilde[q], d.plain[r]), (d.plain[s], d.tilde[p]))
    }

    /// `Q⁻(e(p/q), e(r/s)) = w_LD[(s̃, p), (q, r̃)]`.
    pub fn q_minus(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        let d = &self.dbl;
        d.entry((d.tilde[s], d.plain[p]), (d.plain[q], d.tilde[r]))
    }
}

/// Edge-space images of `𝒰₁`, `𝒰₁⁻¹`, `𝒰₂`, `𝒰₂⁻¹`.
#[derive(Debug, Clone)]
pub struct DrinfeldOperators {
    pub u1: EdgeOperator,
    pub u1inv: EdgeOperator,
    pub u2: EdgeOperator,
    pub u2inv: EdgeOperator,
}

impl DrinfeldOperators {
    /// `π(𝒰₁𝒰₂⁻¹)`.
    pub fn ribbon_target(&self) -> EdgeOperator {
        &self.u1 * &self.u2inv
    }

    /// `π(𝒰₁𝒰₂)`.
    pub fn mrib_target(&self) -> EdgeOperator {
        &self.u1 * &self.u2
    }
}

pub fn drinfeld_operators(
    model: &FaceModel,
    forms: &LyubashenkoForms,
    tol: f64,
) -> Result<DrinfeldOperators> {
    let space = model.edge_space();
    let ne = model.graph().edge_count();
    let sum = |f: &dyn Fn(usize) -> C64| (0..ne).map(f).sum::<C64>();
    let u1 = BlockOperator::from_fn(space.clone(), |p, q| sum(&|t| forms.q_minus(t, q, p, t)));
    let u2inv = BlockOperator::from_fn(space.clone(), |p, q| sum(&|t| forms.q_minus(p, t, t, q)));
    let u1inv = BlockOperator::from_fn(space.clone(), |p, q| sum(&|t| forms.q_plus(t, q, p, t)));
    let u2 = BlockOperator::from_fn(space.clone(), |p, q| sum(&|t| forms.q_plus(p, t, t, q)));

    let id = BlockOperator::identity(space);
    for (name, a, b) in [("U1", &u1, &u1inv), ("U2inv", &u2inv, &u2)] {
        if invert(a, tol).is_err() {
            return Err(Error::NonInvertibleDrinfeld(format!("{name} is singular")));
        }
        let r = compare(name, &(a * b), &id, 1.0, tol.max(1e-9).sqrt());
        if !r.pass {
            return Err(Error::NonInvertibleDrinfeld(format!(
                "{name} times its formal inverse deviates from id by {:.3e}",
                r.residual
            )));
        }
    }
    Ok(DrinfeldOperators {
        u1,
        u1inv,
        u2,
        u2inv,
    })
}

/// Double plus forms plus operators in one call.
pub fn drinfeld_pipeline(model: &FaceModel, tol: f64) -> Result<(LyubashenkoDouble, DrinfeldOperators)> {
    let dbl = crate::verify::build_lyubashenko_double(model, tol)?;
    let forms = lyubashenko_forms(&dbl);
    let ops = drinfeld_operators(model, &forms, tol)?;
    Ok((dbl, ops))
}

/// `(U ⊗̄ U) w = w (U ⊗̄ U)` for `U ∈ {U1, U2inv}`, and `[U1, U2inv] = 0`.
pub fn uu_commutation_check(ops: &DrinfeldOperators, w: &BlockOperator, tol: f64) -> CheckReport {
    let mut parts = Vec::new();
    for (name, u) in [("U1", &ops.u1), ("U2inv", &ops.u2inv)] {
        let uu = truncated_tensor(u, u);
        parts.push(compare(
            &format!("({name} x {name}) w"),
            &(&uu * w),
            &(w * &uu),
            uu.max_abs() * w.max_abs(),
            tol,
        ));
    }
    parts.push(compare(
        "U1 U2inv = U2inv U1",
        &(&ops.u1 * &ops.u2inv),
        &(&ops.u2inv * &ops.u1),
        ops.u1.max_abs() * ops.u2inv.max_abs(),
        tol,
    ));
    CheckReport::merge("uu-commutation", &parts)
}

/// `[π(𝒰₁𝒰₂⁻¹), G] = 0` for each `G`.
pub fn centrality_check(ops: &DrinfeldOperators, gs: &[EdgeOperator], tol: f64) -> CheckReport {
    let a = ops.ribbon_target();
    let parts: Vec<CheckReport> = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            compare(
                &format!("[A, G{i}]"),
                &(&a * g),
                &(g * &a),
                a.max_abs() * g.max_abs(),
                tol,
            )
        })
        .collect();
    CheckReport::merge("centrality", &parts)
}
