//! Jimbo R-matrices of types A, B, C, D as one-vertex face models.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{CatalogModel, Family, Metadata};
use crate::error::{Error, Result};
use crate::io::{to_json_vec, GlfJson};
use crate::model::{Face, FaceModel, Graph, Path, C64};
use crate::numerics::nullspace;
use crate::ribbon::GroupLikeVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalType {
    A,
    B,
    C,
    D,
}

impl std::str::FromStr for ClassicalType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "C" | "c" => Ok(Self::C),
            "D" | "d" => Ok(Self::D),
            other => Err(Error::BadParams(format!("unknown classical type {other:?}"))),
        }
    }
}

/// Type, rank, `q` and `η`. For type B the primary parameter is `q^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalParams {
    pub kind: ClassicalType,
    pub rank: usize,
    q_half: C64,
    pub eta: C64,
}

impl ClassicalParams {
    /// Types A, C, D from `q`.
    pub fn new(kind: ClassicalType, rank: usize, q: C64, eta: C64) -> Result<Self> {
        if kind == ClassicalType::B {
            return Err(Error::BadParams("type B takes q^(1/2); use with_q_half".into()));
        }
        Self::checked(kind, rank, q.sqrt(), eta)
    }

    /// Any type from `q^{1/2}`; `q` is its square.
    pub fn with_q_half(kind: ClassicalType, rank: usize, q_half: C64, eta: C64) -> Result<Self> {
        Self::checked(kind, rank, q_half, eta)
    }

    fn checked(kind: ClassicalType, rank: usize, q_half: C64, eta: C64) -> Result<Self> {
        let min_rank = if kind == ClassicalType::A { 1 } else { 2 };
        if rank < min_rank {
            return Err(Error::BadParams(format!("type {kind:?} needs rank at least {min_rank}")));
        }
        let q = q_half * q_half;
        if (q * q - 1.0).norm() < 1e-12 {
            return Err(Error::BadParams("q^2 = 1".into()));
        }
        if eta.norm() == 0.0 || !eta.is_finite() || !q_half.is_finite() {
            return Err(Error::BadParams("eta must be finite and nonzero".into()));
        }
        Ok(Self {
            kind,
            rank,
            q_half,
            eta,
        })
    }

    pub fn q(&self) -> C64 {
        self.q_half * self.q_half
    }

    pub fn q_half(&self) -> C64 {
        self.q_half
    }

    pub fn n(&self) -> usize {
        match self.kind {
            ClassicalType::A => self.rank + 1,
            ClassicalType::B => 2 * self.rank + 1,
            ClassicalType::C | ClassicalType::D => 2 * self.rank,
        }
    }

    pub fn nu(&self) -> i32 {
        match self.kind {
            ClassicalType::A => 0,
            ClassicalType::C => 1,
            ClassicalType::B | ClassicalType::D => -1,
        }
    }

    /// `σᵢ` for `1 ≤ i ≤ N`.
    pub fn sigma(&self, i: usize) -> i32 {
        let twice = 2 * i;
        let mid = self.n() + 1;
        match twice.cmp(&mid) {
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => -1,
        }
    }

    /// `εᵢ`.
    pub fn epsilon(&self, i: usize) -> i32 {
        if 2 * i <= self.n() + 1 {
            1
        } else {
            -self.nu()
        }
    }

    /// `i′ = N + 1 − i`.
    pub fn prime(&self, i: usize) -> usize {
        self.n() + 1 - i
    }

    /// `2ī = 2i − σᵢν`.
    pub fn bar2(&self, i: usize) -> i32 {
        2 * i as i32 - self.sigma(i) * self.nu()
    }

    /// `q^{k/2}`.
    pub fn q_pow_half(&self, k: i32) -> C64 {
        if k % 2 == 0 {
            self.q().powi(k / 2)
        } else {
            self.q_half.powi(k)
        }
    }

    /// `λ = −ν q^{−N−ν}`.
    pub fn lambda(&self) -> C64 {
        -(self.nu() as f64) * self.q().powi(-(self.n() as i32) - self.nu())
    }

    /// `q^{2i−N−1−σᵢν}` for each `i`.
    pub fn m_plus(&self) -> Vec<C64> {
        let n = self.n() as i32;
        (1..=self.n())
            .map(|i| self.q().powi(2 * i as i32 - n - 1 - self.sigma(i) * self.nu()))
            .collect()
    }

    /// `Σᵢ εᵢ q^{ī+1/2} uᵢ ⊗ u_{i′}`, as `(i, i′, coefficient)`.
    pub fn quad_terms(&self) -> Vec<(usize, usize, C64)> {
        (1..=self.n())
            .map(|i| (i, self.prime(i), self.epsilon(i) as f64 * self.q_pow_half(self.bar2(i) + 1)))
            .collect()
    }
}

/// `(det compatible, quad compatible)`: `ηᴺ = q` for A and `ηᴺ = 1`
/// otherwise; `η = ±1` for quad (types B, C, D only).
pub(crate) fn compatibility(kind: ClassicalType, n: usize, q: C64, eta: C64) -> (bool, Option<bool>) {
    let close = |a: C64, b: C64| (a - b).norm() < 1e-9 * b.norm().max(1.0);
    let one = C64::new(1.0, 0.0);
    let target = if kind == ClassicalType::A { q } else { one };
    let det = close(eta.powi(n as i32), target);
    let quad = (kind != ClassicalType::A).then(|| close(eta, one) || close(eta, -one));
    (det, quad)
}

fn edge_id(i: usize, n: usize) -> String {
    let width = n.to_string().len();
    format!("u{i:0width$}")
}

/// Entries of `Ř` as `(r, s, t, u, c)` meaning `c E_rs ⊗ E_tu`, 1-based.
fn r_matrix_terms(p: &ClassicalParams) -> Vec<(usize, usize, usize, usize, C64)> {
    let n = p.n();
    let q = p.q();
    let mu = q - q.inv();
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    if p.kind == ClassicalType::A {
        for r in 1..=n {
            out.push((r, r, r, r, q.inv()));
            for s in 1..=n {
                if r != s {
                    out.push((r, s, s, r, one));
                }
                if r > s {
                    out.push((r, r, s, s, -mu));
                }
            }
        }
        return out;
    }
    for r in 1..=n {
        if r != p.prime(r) {
            out.push((r, r, r, r, q.inv()));
            out.push((r, p.prime(r), p.prime(r), r, q));
        } else {
            out.push((r, r, r, r, one));
        }
    }
    for r in 1..=n {
        for s in 1..=n {
            if r != s && r != p.prime(s) {
                out.push((r, s, s, r, one));
            }
        }
    }
    for r in 1..=n {
        for s in 1..r {
            out.push((r, r, s, s, -mu));
            let c = mu * (p.epsilon(r) * p.epsilon(s)) as f64 * p.q_pow_half(p.bar2(r) - p.bar2(s));
            out.push((r, p.prime(s), p.prime(r), s, c));
        }
    }
    out
}

fn vertex_graph(n: usize) -> Result<Arc<Graph>> {
    let edges = (1..=n).map(|i| (edge_id(i, n), "*".to_string(), "*".to_string()));
    Ok(Arc::new(Graph::new(["*".to_string()], edges)?))
}

/// The `η`-scaled Jimbo braiding and its metadata.
pub fn jimbo_model(p: &ClassicalParams) -> Result<CatalogModel> {
    let n = p.n();
    let graph = vertex_graph(n)?;
    let e = |i: usize| graph.edge_index(&edge_id(i, n)).unwrap();
    let mut acc: std::collections::BTreeMap<Face, C64> = Default::default();
    for (r, s, t, u, c) in r_matrix_terms(p) {
        let face = Face {
            r: e(r),
            p: e(s),
            q: e(t),
            s: e(u),
        };
        *acc.entry(face).or_default() += c * p.eta;
    }
    let model = FaceModel::new(graph.clone(), acc.into_iter().filter(|(_, w)| *w != C64::default()))?;

    let m_plus = p.m_plus();
    let m_minus: Vec<C64> = m_plus.iter().map(|x| -x).collect();
    let (det_ok, quad_ok) = compatibility(p.kind, n, p.q(), p.eta);

    let (lambda, hecke, quad_vector, quad, det) = if p.kind == ClassicalType::A {
        let det = det_vector_a(p)?;
        let hecke = [(p.q().inv() * p.eta).into(), (-p.q() * p.eta).into()];
        (None, Some(hecke), None, None, Some(GlfJson::from_vector(&graph, &det)?))
    } else {
        let space2 = model.operator().space().clone();
        let mut v = vec![C64::default(); space2.dim()];
        let terms = p.quad_terms();
        for &(i, ip, c) in &terms {
            let path = Path::from_edges(&graph, vec![e(i), e(ip)]).unwrap();
            v[space2.index_of(&path).unwrap()] = c;
        }
        let c1 = terms[0].2;
        let glf = GroupLikeVector::new(
            terms
                .iter()
                .map(|&(i, ip, c)| {
                    (
                        c / c1,
                        Path::from_edges(&graph, vec![e(1), e(p.prime(1))]).unwrap(),
                        Path::from_edges(&graph, vec![e(i), e(ip)]).unwrap(),
                    )
                })
                .collect(),
        );
        (
            Some(p.lambda().into()),
            None,
            Some(to_json_vec(&v)),
            Some(GlfJson::from_vector(&graph, &glf)?),
            None,
        )
    };
    let metadata = Metadata {
        family: Family::Jimbo {
            kind: p.kind,
            rank: p.rank,
            n,
            nu: p.nu(),
            q: p.q().into(),
            q_half: p.q_half.into(),
            eta: p.eta.into(),
        },
        lambda,
        hecke,
        m_plus: to_json_vec(&m_plus),
        m_minus: to_json_vec(&m_minus),
        s2_diag: to_json_vec(&m_plus),
        quad_vector,
        quad,
        det,
        det_compatible: Some(det_ok),
        quad_compatible: quad_ok,
        d_table: None,
    };
    Ok(CatalogModel { model, metadata })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n);
            out.push(v);
        }
    }
    out.sort();
    out
}

/// `det` for type A: the coefficient vector `Σ_p κ_p e(p / (1,…,N))` with
/// `u_p = κ_p u₁⋯u_N` in the q-exterior algebra. Computed as the common left
/// eigenvector of the unscaled `Ř_i` for the eigenvalue `−q` on the span of
/// permutations of `(1,…,N)`.
pub fn det_vector_a(p: &ClassicalParams) -> Result<GroupLikeVector> {
    if p.kind != ClassicalType::A {
        return Err(Error::BadParams("det is built for type A only".into()));
    }
    let n = p.n();
    if n > 5 {
        return Err(Error::BadParams(format!("N = {n} exceeds the desk-scale bound 5")));
    }
    let q = p.q();
    let perms = permutations(n);
    let index: std::collections::HashMap<&[usize], usize> =
        perms.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let unscaled = ClassicalParams { eta: C64::new(1.0, 0.0), ..*p };
    let terms = r_matrix_terms(&unscaled);
    let size = perms.len();
    let mut stacked = DMatrix::<C64>::zeros(size * (n - 1).max(1), size);
    for slot in 0..n.saturating_sub(1) {
        let mut t = DMatrix::<C64>::zeros(size, size);
        for (col, x) in perms.iter().enumerate() {
            let (s, u) = (x[slot], x[slot + 1]);
            for &(r, ss, tt, uu, c) in &terms {
                if ss == s && uu == u {
                    let mut y = x.clone();
                    y[slot] = r;
                    y[slot + 1] = tt;
                    let row = *index.get(y.as_slice()).ok_or_else(|| {
                        Error::DimensionMismatch("braid image leaves the permutation span".into())
                    })?;
                    t[(row, col)] += c;
                }
            }
        }
        let block = t.transpose() + DMatrix::<C64>::identity(size, size) * q;
        stacked.view_mut((slot * size, 0), (size, size)).copy_from(&block);
    }
    let kernel = nullspace(&stacked, 1e-9);
    if kernel.len() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "antisymmetric eigenspace has dimension {} instead of 1",
            kernel.len()
        )));
    }
    let phi = &kernel[0];
    let seed: Vec<usize> = (1..=n).collect();
    let s = phi[index[seed.as_slice()]];
    if s.norm() < 1e-12 {
        return Err(Error::DimensionMismatch("determinant vector vanishes on u1...uN".into()));
    }
    let graph = vertex_graph(n)?;
    let e = |i: usize| graph.edge_index(&edge_id(i, n)).unwrap();
    let seed_path = Path::from_edges(&graph, seed.iter().map(|&i| e(i)).collect()).unwrap();
    let mut out = Vec::new();
    for (k, x) in perms.iter().enumerate() {
        let c = phi[k] / s;
        if c.norm() > 1e-14 {
            let path = Path::from_edges(&graph, x.iter().map(|&i| e(i)).collect()).unwrap();
            out.push((c, path, seed_path.clone()));
        }
    }
    Ok(GroupLikeVector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn derived_integers() {
        let p = ClassicalParams::new(ClassicalType::C, 2, c(1.2), c(1.0)).unwrap();
        assert_eq!((p.n(), p.nu()), (4, 1));
        let b = ClassicalParams::with_q_half(ClassicalType::B, 2, c(1.2), c(1.0)).unwrap();
        assert_eq!((b.n(), b.nu(), b.sigma(3)), (5, -1, 0));
        assert!((b.q() - c(1.44)).norm() < 1e-15);
        assert!(ClassicalParams::new(ClassicalType::D, 1, c(1.2), c(1.0)).is_err());
        assert!(ClassicalParams::new(ClassicalType::B, 2, c(1.2), c(1.0)).is_err());
        assert!(ClassicalParams::new(ClassicalType::A, 1, c(1.0), c(1.0)).is_err());
    }

    #[test]
    fn a1_entries() {
        let q = c(2.0);
        let p = ClassicalParams::new(ClassicalType::A, 1, q, c(1.0)).unwrap();
        let m = jimbo_model(&p).unwrap();
        let w = m.model.operator().to_dense();
        // basis (1,1), (1,2), (2,1), (2,2)
        assert!((w[(0, 0)] - q.inv()).norm() < 1e-15);
        assert!((w[(1, 2)] - c(1.0)).norm() < 1e-15);
        assert!((w[(2, 1)] - c(1.0)).norm() < 1e-15);
        assert!((w[(2, 2)] + (q - q.inv())).norm() < 1e-15);
        assert!(w[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn det_a1_coefficients() {
        let q = c(1.3);
        let p = ClassicalParams::new(ClassicalType::A, 1, q, c(1.0)).unwrap();
        let det = det_vector_a(&p).unwrap();
        assert_eq!(det.terms.len(), 2);
        let coeff = |first: usize| {
            det.terms
                .iter()
                .find(|(_, p, _)| p.edges[0] == first)
                .map(|t| t.0)
                .unwrap()
        };
        assert!((coeff(0) - c(1.0)).norm() < 1e-12);
        assert!((coeff(1) + q).norm() < 1e-12);
    }

    #[test]
    fn permutations_are_sorted_and_complete() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1, 2, 3]);
        assert_eq!(p[5], vec![3, 2, 1]);
    }
}
