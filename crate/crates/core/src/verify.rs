//! Model-level checks: braid relation, Lyubashenko double, Hecke and BMW
//! relations, group-like commutation and enhancement constants.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::C64Json;
use crate::model::{FaceModel, Graph, Path, PathSpace, C64};
use crate::numerics::{invert, invert_matrix};
use crate::operator::{embed_local, partial_trace_last, truncated_tensor, BlockOperator};
use crate::sparse::{compare_products, SparseAction};

/// Outcome of one check. `residual` is scale-normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub residual: f64,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn passed(check: impl Into<String>, residual: f64) -> Self {
        Self {
            check: check.into(),
            pass: true,
            residual,
            witness: None,
        }
    }

    pub fn failed(check: impl Into<String>, residual: f64, witness: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: false,
            residual,
            witness: Some(witness.into()),
        }
    }

    /// Combines sub-reports: worst residual wins, first failure is the witness.
    pub fn merge(check: impl Into<String>, parts: &[CheckReport]) -> Self {
        let residual = parts.iter().map(|r| r.residual).fold(0.0, f64::max);
        match parts.iter().find(|r| !r.pass) {
            Some(bad) => Self::failed(
                check,
                residual,
                format!("{}: {}", bad.check, bad.witness.clone().unwrap_or_default()),
            ),
            None => Self::passed(check, residual),
        }
    }
}

/// Compares two operators. The residual is the largest entry difference
/// divided by `max(|lhs|, |rhs|, reference)`.
pub fn compare(
    name: &str,
    lhs: &BlockOperator,
    rhs: &BlockOperator,
    reference: f64,
    tol: f64,
) -> CheckReport {
    let (diff, at) = lhs.max_diff(rhs);
    let scale = lhs.max_abs().max(rhs.max_abs()).max(reference);
    let residual = if scale > 0.0 { diff / scale } else { diff };
    if residual < tol {
        CheckReport::passed(name, residual)
    } else {
        let space = lhs.space();
        let witness = at
            .map(|(i, j)| format!("({}, {})", space.describe(i), space.describe(j)))
            .unwrap_or_default();
        CheckReport::failed(name, residual, witness)
    }
}

/// `w₁w₂w₁ = w₂w₁w₂` on length-3 paths.
pub fn check_star_triangular(model: &FaceModel, tol: f64) -> CheckReport {
    let w = model.operator();
    let w1 = SparseAction::local(w, 3, 0);
    let w2 = SparseAction::local(w, 3, 1);
    compare_products("star-triangular", &[&w1, &w2, &w1], &[&w2, &w1, &w2], w.max_abs().powi(3), tol)
}

/// One mixed block of the double: inputs are `p̃·q` paths, outputs `r·s̃` paths.
#[derive(Debug, Clone)]
pub struct MixedBlock {
    pub src: usize,
    pub dst: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

/// A rectangular operator `K(G̃ ×̄ G) → K(G ×̄ G̃)`, indexed by doubled-graph paths.
#[derive(Debug, Clone)]
pub struct RectOperator {
    pub blocks: Vec<MixedBlock>,
}

impl RectOperator {
    pub fn get(&self, out: usize, inp: usize) -> C64 {
        for b in &self.blocks {
            if let (Some(i), Some(j)) = (
                b.outputs.iter().position(|&x| x == out),
                b.inputs.iter().position(|&x| x == inp),
            ) {
                return b.matrix[(i, j)];
            }
        }
        C64::default()
    }
}

/// The double on `G¹ ⊔ G̃¹`.
#[derive(Debug, Clone)]
pub struct LyubashenkoDouble {
    pub base: FaceModel,
    pub model: FaceModel,
    /// Doubled-graph index of each original edge.
    pub plain: Vec<usize>,
    /// Doubled-graph index of the reversed copy of each original edge.
    pub tilde: Vec<usize>,
    pub w_ld: RectOperator,
    pub w_ld_minus: RectOperator,
    pub inverse: BlockOperator,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Plain(usize),
    Tilde(usize),
}

fn tilde_id(id: &str) -> String {
    format!("{id}~")
}

/// Builds the double and checks that both rectangular blocks are invertible.
pub fn build_lyubashenko_double(model: &FaceModel, tol: f64) -> Result<LyubashenkoDouble> {
    let g = model.graph();
    let w = model.operator();
    let winv = invert(w, tol)?;
    let ne = g.edge_count();

    let mut edges: Vec<(String, String, String)> = Vec::with_capacity(2 * ne);
    for e in g.edges() {
        let (s, d) = (g.vertices()[e.src].clone(), g.vertices()[e.dst].clone());
        edges.push((e.id.clone(), s.clone(), d.clone()));
        edges.push((tilde_id(&e.id), d, s));
    }
    let dg = Arc::new(
        Graph::new(g.vertices().iter().cloned(), edges)
            .map_err(|e| Error::InvalidModel(format!("cannot double graph: {e}")))?,
    );
    let plain: Vec<usize> = g.edges().iter().map(|e| dg.edge_index(&e.id).unwrap()).collect();
    let tilde: Vec<usize> = g
        .edges()
        .iter()
        .map(|e| dg.edge_index(&tilde_id(&e.id)).unwrap())
        .collect();
    let mut kind = vec![Kind::Plain(0); dg.edge_count()];
    for k in 0..ne {
        kind[plain[k]] = Kind::Plain(k);
        kind[tilde[k]] = Kind::Tilde(k);
    }

    let d2 = PathSpace::new(dg.clone(), 2);
    let orig = |a: usize, b: usize| Path::from_edges(g, vec![a, b]);
    let entry = |op: &BlockOperator, out: (usize, usize), inp: (usize, usize)| -> C64 {
        match (orig(out.0, out.1), orig(inp.0, inp.1)) {
            (Some(o), Some(i)) => op.get_path(&o, &i),
            _ => C64::default(),
        }
    };

    let mut ld_blocks = Vec::new();
    let mut ldm_blocks = Vec::new();
    let mut ldm_inv: HashMap<(usize, usize), C64> = HashMap::new();
    for blk in d2.blocks() {
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for &i in &blk.members {
            let p = d2.path(i);
            match (kind[p.edges[0]], kind[p.edges[1]]) {
                (Kind::Tilde(_), Kind::Plain(_)) => inputs.push(i),
                (Kind::Plain(_), Kind::Tilde(_)) => outputs.push(i),
                _ => {}
            }
        }
        if inputs.is_empty() && outputs.is_empty() {
            continue;
        }
        let (vs, vd) = (dg.vertices()[blk.src].clone(), dg.vertices()[blk.dst].clone());
        if inputs.len() != outputs.len() {
            return Err(Error::NotClosable {
                which: "w_LD".into(),
                src: vs,
                dst: vd,
            });
        }
        let n = inputs.len();
        let mut ld = DMatrix::zeros(n, n);
        let mut ldm = DMatrix::zeros(n, n);
        for (jj, &i) in inputs.iter().enumerate() {
            let ip = d2.path(i);
            let (Kind::Tilde(p), Kind::Plain(q)) = (kind[ip.edges[0]], kind[ip.edges[1]]) else {
                unreachable!()
            };
            for (ii, &o) in outputs.iter().enumerate() {
                let op = d2.path(o);
                let (Kind::Plain(r), Kind::Tilde(s)) = (kind[op.edges[0]], kind[op.edges[1]]) else {
                    unreachable!()
                };
                ld[(ii, jj)] = entry(&winv, (p, r), (q, s));
                ldm[(ii, jj)] = entry(w, (p, r), (q, s));
            }
        }
        if invert_matrix(&ld, tol).is_err() {
            return Err(Error::NotClosable {
                which: "w_LD".into(),
                src: vs,
                dst: vd,
            });
        }
        let ldm_i = invert_matrix(&ldm, tol).map_err(|_| Error::NotClosable {
            which: "w_LD-".into(),
            src: vs.clone(),
            dst: vd.clone(),
        })?;
        for (a, &pq) in inputs.iter().enumerate() {
            for (b, &rs) in outputs.iter().enumerate() {
                ldm_inv.insert((pq, rs), ldm_i[(a, b)]);
            }
        }
        ld_blocks.push(MixedBlock {
            src: blk.src,
            dst: blk.dst,
            inputs: inputs.clone(),
            outputs: outputs.clone(),
            matrix: ld,
        });
        ldm_blocks.push(MixedBlock {
            src: blk.src,
            dst: blk.dst,
            inputs,
            outputs,
            matrix: ldm,
        });
    }
    let w_ld = RectOperator { blocks: ld_blocks };
    let w_ld_minus = RectOperator { blocks: ldm_blocks };

    let full = BlockOperator::from_fn(d2.clone(), |o, i| {
        let op = d2.path(o);
        let ip = d2.path(i);
        match (
            kind[op.edges[0]],
            kind[op.edges[1]],
            kind[ip.edges[0]],
            kind[ip.edges[1]],
        ) {
            (Kind::Plain(a), Kind::Plain(b), Kind::Plain(c), Kind::Plain(d)) => entry(w, (a, b), (c, d)),
            (Kind::Plain(_), Kind::Tilde(_), Kind::Tilde(_), Kind::Plain(_)) => w_ld.get(o, i),
            (Kind::Tilde(_), Kind::Plain(_), Kind::Plain(_), Kind::Tilde(_)) => {
                ldm_inv.get(&(o, i)).copied().unwrap_or_default()
            }
            (Kind::Tilde(r), Kind::Tilde(q), Kind::Tilde(p), Kind::Tilde(s)) => entry(w, (s, p), (q, r)),
            _ => C64::default(),
        }
    });
    let inverse = invert(&full, tol).map_err(|e| match e {
        Error::SingularBlock { src, dst, .. } => Error::NotClosable {
            which: "w_LD (full)".into(),
            src,
            dst,
        },
        other => other,
    })?;
    let doubled = FaceModel::from_operator(&full)?;
    Ok(LyubashenkoDouble {
        base: model.clone(),
        model: doubled,
        plain,
        tilde,
        w_ld,
        w_ld_minus,
        inverse,
    })
}

impl LyubashenkoDouble {
    pub fn graph(&self) -> &Arc<Graph> {
        self.model.graph()
    }

    /// Length-2 path of the doubled graph from two doubled edge indices.
    pub fn path2(&self, a: usize, b: usize) -> Option<Path> {
        Path::from_edges(self.graph(), vec![a, b])
    }

    /// Entry of the full double operator.
    pub fn entry(&self, out: (usize, usize), inp: (usize, usize)) -> C64 {
        match (self.path2(out.0, out.1), self.path2(inp.0, inp.1)) {
            (Some(o), Some(i)) => self.model.operator().get_path(&o, &i),
            _ => C64::default(),
        }
    }

    /// Entry of the inverse of the full double operator.
    pub fn inverse_entry(&self, out: (usize, usize), inp: (usize, usize)) -> C64 {
        match (self.path2(out.0, out.1), self.path2(inp.0, inp.1)) {
            (Some(o), Some(i)) => self.inverse.get_path(&o, &i),
            _ => C64::default(),
        }
    }
}

/// Braid relation for the doubled model.
pub fn check_double_star_triangular(dbl: &LyubashenkoDouble, tol: f64) -> CheckReport {
    let mut r = check_star_triangular(&dbl.model, tol);
    r.check = "double star-triangular".into();
    r
}

/// `(w - a)(w - b) = 0`.
pub fn check_hecke(model: &FaceModel, a: C64, b: C64, tol: f64) -> CheckReport {
    let w = model.operator();
    let lhs = &w.add_scalar(-a) * &w.add_scalar(-b);
    let zero = BlockOperator::zeros(w.space().clone());
    let s = w.max_abs().max(a.norm()).max(b.norm());
    compare("hecke", &lhs, &zero, s * s, tol)
}

/// The full BMW relation list with `g = w`, `e = (g - g⁻¹)/μ + 1`.
pub fn check_bmw(model: &FaceModel, lambda: C64, q: C64, tol: f64) -> Result<CheckReport> {
    let mu = q - q.inv();
    if mu.norm() < tol {
        return Err(Error::MuZero);
    }
    let w = model.operator();
    let winv = invert(w, tol)?;
    let one = C64::new(1.0, 0.0);
    let e_op = (w - &winv).scale(mu.inv()).add_scalar(one);
    let zeta = -(lambda - lambda.inv()) / mu + one;
    let g = [embed_local(w, 3, 0), embed_local(w, 3, 1)];
    let e = [embed_local(&e_op, 3, 0), embed_local(&e_op, 3, 1)];
    let id = BlockOperator::identity(g[0].space().clone());
    let zero = BlockOperator::zeros(id.space().clone());
    let s = [w.max_abs(), winv.max_abs(), e_op.max_abs(), lambda.norm(), lambda.inv().norm(), 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    let reference = s.powi(3);
    let m = |a: &BlockOperator, b: &BlockOperator| a * b;
    let m3 = |a: &BlockOperator, b: &BlockOperator, c: &BlockOperator| &(a * b) * c;
    let mut parts = Vec::new();
    let mut rel = |name: String, lhs: BlockOperator, rhs: BlockOperator| {
        parts.push(compare(&name, &lhs, &rhs, reference, tol));
    };
    for i in 0..2 {
        let gi = &g[i];
        let ei = &e[i];
        let cubic = m3(&gi.add_scalar(-lambda.inv()), &gi.add_scalar(q), &gi.add_scalar(-q.inv()));
        rel(format!("minimal polynomial g{}", i + 1), cubic, zero.clone());
        let g2_rhs = &(&gi.scale(-mu) + &ei.scale(lambda.inv() * mu)) + &id;
        rel(format!("g{0}^2", i + 1), m(gi, gi), g2_rhs);
        rel(format!("e{0}^2", i + 1), m(ei, ei), ei.scale(zeta));
        rel(format!("e{0}g{0}", i + 1), m(ei, gi), ei.scale(lambda.inv()));
        rel(format!("g{0}e{0}", i + 1), m(gi, ei), ei.scale(lambda.inv()));
    }
    rel("g1g2g1 = g2g1g2".into(), m3(&g[0], &g[1], &g[0]), m3(&g[1], &g[0], &g[1]));
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        let (gi, gj, ei, ej) = (&g[i], &g[j], &e[i], &e[j]);
        let tag = format!("(i,j)=({},{})", i + 1, j + 1);
        rel(format!("e_i g_j e_i {tag}"), m3(ei, gj, ei), ei.scale(lambda));
        rel(format!("e_i e_j e_i {tag}"), m3(ei, ej, ei), ei.clone());
        let rhs = &(&m(ei, gj) - &m(ei, ej).scale(mu)) + &ei.scale(mu);
        rel(format!("e_i e_j g_i {tag}"), m3(ei, ej, gi), rhs);
        let rhs = &(&m(gj, ei) - &m(ej, ei).scale(mu)) + &ei.scale(mu);
        rel(format!("g_i e_j e_i {tag}"), m3(gi, ej, ei), rhs);
        rel(format!("e_i g_j g_i {tag}"), m3(ei, gj, gi), m(ei, ej));
        rel(format!("g_i g_j e_i {tag}"), m3(gi, gj, ei), m(ej, ei));
        let lhs = &m3(gi, ej, gi) - &m3(gj, ei, gj);
        let lin = &(&(&m(ei, gj) + &m(gj, ei)) - &m(ej, gi)) - &m(gi, ej);
        let rhs = &lin.scale(mu) + &(ei - ej).scale(mu * mu);
        rel(format!("g_i e_j g_i - g_j e_i g_j {tag}"), lhs, rhs);
    }
    Ok(CheckReport::merge("bmw", &parts))
}

/// `(G ⊗̄ G) w = w (G ⊗̄ G)`.
pub fn check_glf_commutant(model: &FaceModel, g: &BlockOperator, tol: f64) -> CheckReport {
    let w = model.operator();
    let gg = truncated_tensor(g, g);
    let reference = w.max_abs() * gg.max_abs();
    compare("group-like commutation", &(&gg * w), &(w * &gg), reference, tol)
}

/// How a candidate trace weight relates to the braiding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Enhancement {
    /// Both partial traces are the same scalar on every block.
    Enhanced { c_plus: C64Json, c_minus: C64Json },
    /// Scalar on each block, but the scalars differ between blocks.
    BlockDependent { side: String, values: Vec<C64Json> },
    /// Some block is not a scalar matrix.
    NotScalar { side: String, residual: f64 },
}

fn trace_constant(ptr: &BlockOperator, side: &str, tol: f64) -> std::result::Result<C64, Enhancement> {
    let mut values: Vec<C64> = Vec::new();
    let mut worst = 0.0f64;
    for m in ptr.blocks() {
        let n = m.nrows();
        let c = m.trace() / n as f64;
        let dev = (m - DMatrix::<C64>::identity(n, n) * c)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst = worst.max(dev / c.norm().max(1.0));
        values.push(c);
    }
    if worst > tol {
        return Err(Enhancement::NotScalar {
            side: side.into(),
            residual: worst,
        });
    }
    let first = values[0];
    if values.iter().any(|v| (*v - first).norm() > tol * first.norm().max(1.0)) {
        return Err(Enhancement::BlockDependent {
            side: side.into(),
            values: values.into_iter().map(Into::into).collect(),
        });
    }
    Ok(first)
}

/// Classifies `M` as a trace weight: `ptr_last((1 ⊗̄ M) w^{±1}) = c_± id`.
pub fn classify_enhancement(model: &FaceModel, m: &BlockOperator, tol: f64) -> Result<Enhancement> {
    let w = model.operator();
    let winv = invert(w, tol)?;
    let g = model.graph();
    let one_m = truncated_tensor(&crate::operator::identity(g, 1), m);
    let plus = partial_trace_last(&(&one_m * w), &crate::operator::identity(g, 1));
    let minus = partial_trace_last(&(&one_m * &winv), &crate::operator::identity(g, 1));
    let cp = match trace_constant(&plus, "plus", tol) {
        Ok(c) => c,
        Err(e) => return Ok(e),
    };
    let cm = match trace_constant(&minus, "minus", tol) {
        Ok(c) => c,
        Err(e) => return Ok(e),
    };
    Ok(Enhancement::Enhanced {
        c_plus: cp.into(),
        c_minus: cm.into(),
    })
}

/// The two Markov constants `(c₊, c₋)`.
pub fn enhancement_constants(model: &FaceModel, m: &BlockOperator, tol: f64) -> Result<(C64, C64)> {
    match classify_enhancement(model, m, tol)? {
        Enhancement::Enhanced { c_plus, c_minus } => Ok((c_plus.into(), c_minus.into())),
        Enhancement::BlockDependent { side, values } => Err(Error::NotEnhanced {
            side,
            detail: format!(
                "scalar per block but unequal across blocks: {:?}",
                values.iter().map(|v| C64::from(*v)).collect::<Vec<_>>()
            ),
        }),
        Enhancement::NotScalar { side, residual } => Err(Error::NotEnhanced {
            side,
            detail: format!("partial trace deviates from a scalar by {residual:.3e}"),
        }),
    }
}
