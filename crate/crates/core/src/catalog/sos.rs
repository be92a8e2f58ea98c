//! SU(N)_L SOS face models on truncated Young lattices.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::{CatalogModel, Family, Metadata};
use crate::error::{Error, Result};
use crate::io::{to_json_vec, GlfJson};
use crate::model::{Face, FaceModel, Graph, Path, C64};
use crate::ribbon::GroupLikeVector;

/// `t = exp(iπ·t_num/(N+L))`; `ζ` is the `zeta_root`-th solution of
/// `ζᴺ = ε^{N−1} t` unless given explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SosParams {
    pub n: usize,
    pub level: usize,
    pub t_num: i64,
    pub eps: i32,
    pub zeta_root: usize,
    pub zeta: Option<C64>,
}

impl SosParams {
    pub fn new(n: usize, level: usize, t_num: i64, eps: i32, zeta_root: usize) -> Self {
        Self {
            n,
            level,
            t_num,
            eps,
            zeta_root,
            zeta: None,
        }
    }

    pub fn t(&self) -> C64 {
        C64::from_polar(1.0, PI * self.t_num as f64 / (self.n + self.level) as f64)
    }

    pub fn zeta(&self) -> C64 {
        if let Some(z) = self.zeta {
            return z;
        }
        let base = self.t() * (self.eps as f64).powi(self.n as i32 - 1);
        let principal = base.powf(1.0 / self.n as f64);
        principal * C64::from_polar(1.0, 2.0 * PI * self.zeta_root as f64 / self.n as f64)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.level < 2 {
            return Err(Error::BadParams("SOS needs N >= 2 and L >= 2".into()));
        }
        if self.n > 9 {
            return Err(Error::BadParams("SOS edge labels support N <= 9".into()));
        }
        if self.eps != 1 && self.eps != -1 {
            return Err(Error::BadParams(format!("eps must be 1 or -1, got {}", self.eps)));
        }
        let m = 2 * (self.n + self.level) as i64;
        if gcd(self.t_num.rem_euclid(m), m) != 1 {
            return Err(Error::BadParams(format!(
                "t = exp(i pi {}/{}) is not a primitive {m}-th root of unity",
                self.t_num,
                self.n + self.level
            )));
        }
        if self.zeta_root >= self.n && self.zeta.is_none() {
            return Err(Error::BadParams(format!("zeta root index must be below N = {}", self.n)));
        }
        if self.zeta().norm() < 1e-300 {
            return Err(Error::BadParams("zeta = 0".into()));
        }
        Ok(())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `[n] = (tⁿ − t⁻ⁿ)/(t − t⁻¹)`.
pub fn q_integer(t: C64, n: i64) -> C64 {
    (t.powi(n as i32) - t.powi(-n as i32)) / (t - t.inv())
}

pub(crate) fn det_compatible(n: usize, eps: i32, t: C64, zeta: C64) -> bool {
    let target = t * (eps as f64).powi(n as i32 - 1);
    (zeta.powi(n as i32) - target).norm() < 1e-9
}

type Partition = Vec<usize>;

fn vertex_set(n: usize, level: usize) -> Vec<Partition> {
    fn rec(prefix: &mut Partition, n: usize, max: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n - 1 {
            let mut p = prefix.clone();
            p.push(0);
            out.push(p);
            return;
        }
        for v in 0..=max {
            prefix.push(v);
            rec(prefix, n, v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, level, &mut out);
    out.sort();
    out
}

/// `λ + î`, normalized so that the last part is 0; `None` outside `𝒱_{NL}`.
fn add_box(lam: &[usize], i: usize, level: usize) -> Option<Partition> {
    let mut m = lam.to_vec();
    m[i] += 1;
    if m.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    if *m.last().unwrap() == 1 {
        for x in &mut m {
            *x -= 1;
        }
    }
    (m[0] <= level).then_some(m)
}

fn vertex_id(lam: &[usize], level: usize) -> String {
    let width = level.to_string().len();
    lam.iter()
        .map(|x| format!("{x:0width$}"))
        .collect::<Vec<_>>()
        .join(".")
}

/// `d(λ|i,j) = λᵢ − λⱼ + j − i`, 0-based indices.
fn d(lam: &[usize], i: usize, j: usize) -> i64 {
    lam[i] as i64 - lam[j] as i64 + j as i64 - i as i64
}

fn d_value(lam: &[usize], t: C64) -> C64 {
    let n = lam.len();
    let mut r = C64::new(1.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            r *= q_integer(t, d(lam, i, j)) / q_integer(t, (j - i) as i64);
        }
    }
    r
}

/// `Card{(k,l) | k < l, i_k < i_l}`.
fn inversion_count(labels: &[usize]) -> usize {
    let mut c = 0;
    for k in 0..labels.len() {
        for l in k + 1..labels.len() {
            if labels[k] < labels[l] {
                c += 1;
            }
        }
    }
    c
}

pub fn sos_model(p: &SosParams) -> Result<CatalogModel> {
    p.validate()?;
    let (n, level) = (p.n, p.level);
    let t = p.t();
    let zeta = p.zeta();
    let zinv = zeta.inv();
    let eps = p.eps as f64;

    let verts = vertex_set(n, level);
    let mut edges = Vec::new();
    let mut label: BTreeMap<String, (Partition, usize)> = BTreeMap::new();
    for lam in &verts {
        for i in 0..n {
            if let Some(mu) = add_box(lam, i, level) {
                let id = format!("{}+{}", vertex_id(lam, level), i + 1);
                edges.push((id.clone(), vertex_id(lam, level), vertex_id(&mu, level)));
                label.insert(id, (lam.clone(), i));
            }
        }
    }
    let graph = Arc::new(Graph::new(verts.iter().map(|v| vertex_id(v, level)), edges)?);
    let edge_of = |lam: &[usize], i: usize| graph.edge_index(&format!("{}+{}", vertex_id(lam, level), i + 1));
    let labels: Vec<(Partition, usize)> = graph.edges().iter().map(|e| label[&e.id].clone()).collect();

    let mut faces: Vec<(Face, C64)> = Vec::new();
    for a in 0..graph.edge_count() {
        let (lam, i) = &labels[a];
        for &b in graph.out_edges(graph.edge(a).dst) {
            let j = labels[b].1;
            if *i == j {
                faces.push((Face { r: a, p: a, q: b, s: b }, zinv * t));
                continue;
            }
            let dd = d(lam, *i, j);
            faces.push((Face { r: a, p: a, q: b, s: b }, -zinv * t.powi(-dd as i32) / q_integer(t, dd)));
            let dagger = add_box(lam, j, level).and_then(|mid| Some((edge_of(lam, j)?, edge_of(&mid, *i)?)));
            if let Some((r, q)) = dagger {
                let w = zinv * eps * q_integer(t, dd - 1) / q_integer(t, dd);
                if w != C64::default() {
                    faces.push((Face { r, p: a, q, s: b }, w));
                }
            }
        }
    }
    let model = FaceModel::new(graph.clone(), faces)?;

    let dv: Vec<C64> = verts.iter().map(|v| d_value(v, t)).collect();
    let d_of = |vertex: usize| dv[vertex];
    let m_plus: Vec<C64> = graph
        .edges()
        .iter()
        .map(|e| d_of(e.dst) / d_of(e.src))
        .collect();
    let m_minus: Vec<C64> = m_plus.iter().map(|x| -x).collect();
    let det = sos_det_vector(&graph, &labels, &dv, p.eps)?;
    let d_table = graph
        .vertices()
        .iter()
        .zip(&dv)
        .map(|(v, x)| (v.clone(), (*x).into()))
        .collect();

    let metadata = Metadata {
        family: Family::Sos {
            n,
            level,
            t_num: p.t_num,
            eps: p.eps,
            t: t.into(),
            zeta: zeta.into(),
        },
        lambda: None,
        hecke: Some([(zinv * t).into(), (-zinv * t.inv()).into()]),
        m_plus: to_json_vec(&m_plus),
        m_minus: to_json_vec(&m_minus),
        s2_diag: to_json_vec(&m_plus),
        quad_vector: None,
        quad: None,
        det: Some(GlfJson::from_vector(&graph, &det)?),
        det_compatible: Some(det_compatible(n, p.eps, t, zeta)),
        quad_compatible: None,
        d_table: Some(d_table),
    };
    Ok(CatalogModel { model, metadata })
}

/// `det = Σ_{λ,μ} D(μ)/D(λ) Σ_{p ∈ 𝒢ᴺ_λλ} (−ε)^{𝓛(p)+𝓛(q)} e(p/q)` with `q` the
/// first closed path at `μ` in canonical order.
fn sos_det_vector(
    graph: &Graph,
    labels: &[(Partition, usize)],
    dv: &[C64],
    eps: i32,
) -> Result<GroupLikeVector> {
    let n = labels.first().map(|l| l.0.len()).unwrap_or(0);
    let closed: Vec<Path> = graph
        .paths(n)
        .into_iter()
        .filter(|p| p.range(graph) == p.src())
        .collect();
    let sign = |p: &Path| {
        let lab: Vec<usize> = p.edges.iter().map(|&e| labels[e].1).collect();
        if (-eps).pow(inversion_count(&lab) as u32) == 1 {
            1.0
        } else {
            -1.0
        }
    };
    let mut terms = Vec::new();
    for mu in 0..graph.vertex_count() {
        let Some(q) = closed.iter().find(|p| p.src() == mu) else {
            return Err(Error::InvalidModel(format!(
                "no closed path of length {n} at {}",
                graph.vertices()[mu]
            )));
        };
        for p in &closed {
            let lam = p.src();
            terms.push((C64::new(sign(p) * sign(q), 0.0) * dv[mu] / dv[lam], p.clone(), q.clone()));
        }
    }
    Ok(GroupLikeVector::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_sets() {
        assert_eq!(vertex_set(2, 2), vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
        assert_eq!(vertex_set(3, 2).len(), 6);
    }

    #[test]
    fn q_integers_at_one_and_two() {
        let t = C64::from_polar(1.0, PI / 4.0);
        assert!((q_integer(t, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((q_integer(t, 2) - (t + t.inv())).norm() < 1e-15);
        assert!(q_integer(t, 0).norm() < 1e-15);
    }

    #[test]
    fn d_for_two_rows_is_a_q_integer() {
        let t = C64::from_polar(1.0, PI / 4.0);
        for l1 in 0..=2usize {
            assert!((d_value(&[l1, 0], t) - q_integer(t, l1 as i64 + 1)).norm() < 1e-14);
        }
    }

    #[test]
    fn inversion_count_follows_the_displayed_rule() {
        assert_eq!(inversion_count(&[0, 1, 2]), 3);
        assert_eq!(inversion_count(&[2, 1, 0]), 0);
    }

    #[test]
    fn rejects_non_primitive_t() {
        let err = sos_model(&SosParams::new(2, 2, 2, 1, 0)).unwrap_err();
        assert!(matches!(err, Error::BadParams(_)));
    }

    #[test]
    fn zeta_solves_its_equation() {
        for idx in 0..3 {
            let p = SosParams::new(3, 2, 1, -1, idx);
            assert!(det_compatible(3, -1, p.t(), p.zeta()));
        }
    }
}
