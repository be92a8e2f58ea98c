//! Ribbon and modified ribbon operators on the edge space, the trace criterion,
//! and group-like functionals on matrix-coefficient vectors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::drinfeld::DrinfeldOperators;
use crate::error::{Error, Result};
use crate::model::{Graph, Path, C64};
use crate::numerics::{invert, operator_sqrt};
use crate::operator::{BlockOperator, EdgeOperator};
use crate::verify::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RibbonSolution {
    pub sign: Sign,
    pub v: EdgeOperator,
    pub m: EdgeOperator,
    /// `‖V² − π(𝒰₁𝒰₂⁻¹)‖`, scale-normalized.
    pub v_residual: f64,
    /// `‖M² − π(𝒰₁𝒰₂)‖`, scale-normalized.
    pub m_residual: f64,
}

#[derive(Debug, Clone)]
pub struct RibbonPair {
    pub plus: RibbonSolution,
    pub minus: RibbonSolution,
    /// Dimension of the commutant of the comodule `𝕂𝒢¹`. The degree-1 matrix
    /// coefficients span the dual of `End(𝕂𝒢¹)`, so this is 1.
    pub edge_commutant_dimension: usize,
    pub block_count: usize,
    /// `±V` is claimed to be the full list only when the commutant is no
    /// larger than the block count.
    pub exhaustive: bool,
}

impl RibbonPair {
    pub fn solutions(&self) -> [&RibbonSolution; 2] {
        [&self.plus, &self.minus]
    }

    pub fn get(&self, sign: Sign) -> &RibbonSolution {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

fn residual(lhs: &BlockOperator, rhs: &BlockOperator) -> f64 {
    let (d, _) = lhs.max_diff(rhs);
    let s = lhs.max_abs().max(rhs.max_abs());
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// `V = √(π(𝒰₁𝒰₂⁻¹))` on the principal branch, `M = π(𝒰₁)V⁻¹`, and the
/// negated pair.
pub fn ribbon_solve(ops: &DrinfeldOperators, radius: f64, tol: f64) -> Result<RibbonPair> {
    let a = ops.ribbon_target();
    let b = ops.mrib_target();
    let v = operator_sqrt(&a, radius)?;
    let vinv = invert(&v, tol)?;
    let m = &ops.u1 * &vinv;
    let make = |sign: Sign| {
        let f = C64::new(sign.factor(), 0.0);
        let v = v.scale(f);
        let m = m.scale(f);
        RibbonSolution {
            sign,
            v_residual: residual(&(&v * &v), &a),
            m_residual: residual(&(&m * &m), &b),
            v,
            m,
        }
    };
    let block_count = a.space().blocks().len();
    let edge_commutant_dimension = 1;
    Ok(RibbonPair {
        plus: make(Sign::Plus),
        minus: make(Sign::Minus),
        edge_commutant_dimension,
        block_count,
        exhaustive: edge_commutant_dimension <= block_count,
    })
}

/// All diagonal `X` with `X² = a` that commute with every matrix in
/// `constraints`. `a` must be diagonal; at most 16 edges.
pub fn diagonal_square_roots(
    a: &EdgeOperator,
    constraints: &[DMatrix<C64>],
    tol: f64,
) -> Result<Vec<EdgeOperator>> {
    let n = a.dim();
    if n > 16 {
        return Err(Error::BadParams(format!("{n} edges is too many for sign enumeration")));
    }
    let d = a.diag();
    let off = &a.to_dense() - DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone()));
    if off.iter().any(|z| z.norm() > tol * a.max_abs().max(1.0)) {
        return Err(Error::BadParams("target is not diagonal".into()));
    }
    let roots: Vec<C64> = d.iter().map(|z| z.sqrt()).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let x: Vec<C64> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { -roots[i] } else { roots[i] })
            .collect();
        let xd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(x.clone()));
        let ok = constraints.iter().all(|c| {
            let r = &xd * c - c * &xd;
            let s = xd.iter().map(|z| z.norm()).fold(0.0, f64::max) * c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            r.iter().all(|z| z.norm() <= tol * s.max(1.0))
        });
        if ok {
            out.push(BlockOperator::diagonal(a.space().clone(), &x)?);
        }
    }
    Ok(out)
}

/// Generators of the full matrix algebra on `n` points: a diagonal with
/// distinct entries and the cyclic shift.
pub fn full_algebra_generators(n: usize) -> Vec<DMatrix<C64>> {
    let diag = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(i as f64 + 1.0, 0.0) } else { C64::default() });
    let shift = DMatrix::from_fn(n, n, |i, j| {
        if (j + 1) % n == i {
            C64::new(1.0, 0.0)
        } else {
            C64::default()
        }
    });
    vec![diag, shift]
}

/// Trace criterion for a modified ribbon candidate `M`:
/// (i) `M E_pq M⁻¹ = (d_p/d_q) E_pq` for every matrix unit, with `d` the
/// diagonal of `s2diag`; (ii) `Tr M = Tr M⁻¹`; (iii) the trace is nonzero.
pub fn mcrit_check(m: &EdgeOperator, s2diag: &EdgeOperator, tol: f64) -> CheckReport {
    let minv = match invert(m, tol) {
        Ok(x) => x,
        Err(e) => return CheckReport::failed("mcrit", f64::INFINITY, format!("M not invertible: {e}")),
    };
    let md = m.to_dense();
    let mi = minv.to_dense();
    let d = s2diag.diag();
    let n = d.len();
    let space = m.space();
    let scale = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .map(|(p, q)| (d[p] / d[q]).norm())
        .fold(1.0, f64::max);
    let mut worst = 0.0f64;
    let mut at = None;
    for p in 0..n {
        for q in 0..n {
            let target = d[p] / d[q];
            for a in 0..n {
                let map = md[(a, p)];
                for b in 0..n {
                    let want = if a == p && b == q { target } else { C64::default() };
                    let dev = (map * mi[(q, b)] - want).norm() / scale;
                    if dev > worst {
                        worst = dev;
                        at = Some((p, q));
                    }
                }
            }
        }
    }
    let conj = if worst < tol {
        CheckReport::passed("conjugation", worst)
    } else {
        let (p, q) = at.unwrap();
        CheckReport::failed(
            "conjugation",
            worst,
            format!("E({}, {})", space.describe(p), space.describe(q)),
        )
    };
    let (t, ti) = (m.trace(), minv.trace());
    let tscale = t.norm().max(ti.norm());
    let tres = if tscale > 0.0 { (t - ti).norm() / tscale } else { 0.0 };
    let trace_eq = if tres < tol {
        CheckReport::passed("Tr M = Tr M^-1", tres)
    } else {
        CheckReport::failed("Tr M = Tr M^-1", tres, format!("Tr M = {t}, Tr M^-1 = {ti}"))
    };
    let nz_scale = m.max_abs().max(minv.max_abs()) * n as f64;
    let nonzero = if t.norm() > tol * nz_scale && ti.norm() > tol * nz_scale {
        CheckReport::passed("Tr M != 0", 0.0)
    } else {
        CheckReport::failed("Tr M != 0", 1.0, format!("Tr M = {t}"))
    };
    CheckReport::merge("mcrit", &[conj, trace_eq, nonzero])
}

/// Linear combination of matrix coefficients `e(p/q)`; terms may mix degrees.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupLikeVector {
    pub terms: Vec<(C64, Path, Path)>,
}

impl GroupLikeVector {
    pub fn new(terms: Vec<(C64, Path, Path)>) -> Self {
        Self { terms }
    }

    /// The unit `1 = Σ_{i,j} e(i/j)`.
    pub fn unit(g: &Graph) -> Self {
        let n = g.vertex_count();
        let terms = (0..n)
            .flat_map(|i| (0..n).map(move |j| (C64::new(1.0, 0.0), Path::vertex(i), Path::vertex(j))))
            .collect();
        Self { terms }
    }

    /// `self − other`.
    pub fn minus(&self, other: &GroupLikeVector) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, p, q)| (-c, p.clone(), q.clone())));
        Self { terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees occurring in the support, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.iter().map(|(_, p, _)| p.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

fn term_value(g: &EdgeOperator, p: &Path, q: &Path) -> C64 {
    if p.len() != q.len() {
        return C64::default();
    }
    if p.is_empty() {
        return if p.start == q.start {
            C64::new(1.0, 0.0)
        } else {
            C64::default()
        };
    }
    p.edges
        .iter()
        .zip(&q.edges)
        .map(|(&a, &b)| g.get(a, b))
        .product()
}

/// `Σ c · G^{p₁}_{q₁} ⋯ G^{pₘ}_{qₘ}`; degree-0 terms contribute `c δ_{ij}`.
pub fn evaluate_glf(g: &EdgeOperator, v: &GroupLikeVector) -> C64 {
    v.terms.iter().map(|(c, p, q)| c * term_value(g, p, q)).sum()
}

/// Evaluates `M` on each ideal generator; passes iff every value vanishes.
pub fn quotient_vanishing(
    m: &EdgeOperator,
    ideal: &[(String, GroupLikeVector)],
    tol: f64,
) -> CheckReport {
    let parts: Vec<CheckReport> = ideal
        .iter()
        .map(|(name, v)| {
            let value = evaluate_glf(m, v);
            let scale = v
                .terms
                .iter()
                .map(|(c, p, q)| (c * term_value(m, p, q)).norm())
                .sum::<f64>()
                .max(1.0);
            let r = value.norm() / scale;
            if r < tol {
                CheckReport::passed(name.clone(), r)
            } else {
                CheckReport::failed(name.clone(), r, format!("value {value}"))
            }
        })
        .collect();
    CheckReport::merge("quotient-vanishing", &parts)
}
