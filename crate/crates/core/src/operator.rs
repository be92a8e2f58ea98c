//! Block-preserving operators on path spaces.
//!
//! An operator of degree `m` acts on the span of length-`m` paths and only
//! connects paths with the same source and the same range. It is stored as
//! one dense matrix per block. Entry `(p, q)` is the coefficient of `p` in the
//! image of `q`, so columns are inputs.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{Graph, Path, PathSpace, C64};

#[derive(Debug, Clone)]
pub struct BlockOperator {
    space: Arc<PathSpace>,
    blocks: Vec<DMatrix<C64>>,
}

/// A degree-1 operator.
pub type EdgeOperator = BlockOperator;

impl BlockOperator {
    pub fn zeros(space: Arc<PathSpace>) -> Self {
        let blocks = space
            .blocks()
            .iter()
            .map(|b| DMatrix::zeros(b.members.len(), b.members.len()))
            .collect();
        Self { space, blocks }
    }

    pub fn identity(space: Arc<PathSpace>) -> Self {
        let blocks = space
            .blocks()
            .iter()
            .map(|b| DMatrix::identity(b.members.len(), b.members.len()))
            .collect();
        Self { space, blocks }
    }

    /// Diagonal operator with the given entry per path.
    pub fn diagonal(space: Arc<PathSpace>, diag: &[C64]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal has {} entries for a space of dimension {}",
                diag.len(),
                space.dim()
            )));
        }
        let mut op = Self::zeros(space);
        for (i, d) in diag.iter().enumerate() {
            op.set(i, i, *d);
        }
        Ok(op)
    }

    /// Evaluates `f(row, col)` on every in-block index pair.
    pub fn from_fn(space: Arc<PathSpace>, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let blocks = space
            .blocks()
            .iter()
            .map(|b| {
                let n = b.members.len();
                DMatrix::from_fn(n, n, |i, j| f(b.members[i], b.members[j]))
            })
            .collect();
        Self { space, blocks }
    }

    /// Builds from a dense matrix, rejecting any nonzero entry outside the blocks.
    pub fn from_dense(space: Arc<PathSpace>, m: &DMatrix<C64>) -> Result<Self> {
        let n = space.dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a space of dimension {n}",
                m.nrows(),
                m.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)] != C64::default() && space.locate(i).0 != space.locate(j).0 {
                    return Err(Error::InvalidModel(format!(
                        "entry ({}, {}) connects different blocks",
                        space.describe(i),
                        space.describe(j)
                    )));
                }
            }
        }
        Ok(Self::from_fn(space, |i, j| m[(i, j)]))
    }

    pub fn from_blocks(space: Arc<PathSpace>, blocks: Vec<DMatrix<C64>>) -> Self {
        assert_eq!(blocks.len(), space.blocks().len());
        for (m, b) in blocks.iter().zip(space.blocks()) {
            assert_eq!(m.nrows(), b.members.len());
            assert_eq!(m.ncols(), b.members.len());
        }
        Self { space, blocks }
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        &self.space
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.space.graph()
    }

    pub fn degree(&self) -> usize {
        self.space.degree()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &DMatrix<C64> {
        &self.blocks[b]
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (bi, ki) = self.space.locate(i);
        let (bj, kj) = self.space.locate(j);
        if bi != bj {
            return C64::default();
        }
        self.blocks[bi][(ki, kj)]
    }

    /// Entry for two paths; zero when either is not a path of this space.
    pub fn get_path(&self, p: &Path, q: &Path) -> C64 {
        match (self.space.index_of(p), self.space.index_of(q)) {
            (Some(i), Some(j)) => self.get(i, j),
            _ => C64::default(),
        }
    }

    /// Sets an in-block entry.
    ///
    /// # Panics
    /// When `i` and `j` lie in different blocks.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let (bi, ki) = self.space.locate(i);
        let (bj, kj) = self.space.locate(j);
        assert_eq!(bi, bj, "entry outside the block structure");
        self.blocks[bi][(ki, kj)] = v;
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (blk, b) in self.space.blocks().iter().zip(&self.blocks) {
            for (i, &pi) in blk.members.iter().enumerate() {
                for (j, &pj) in blk.members.iter().enumerate() {
                    m[(pi, pj)] = b[(i, j)];
                }
            }
        }
        m
    }

    pub fn nonzero_entries(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::new();
        for (blk, m) in self.space.blocks().iter().zip(&self.blocks) {
            for (i, &pi) in blk.members.iter().enumerate() {
                for (j, &pj) in blk.members.iter().enumerate() {
                    let v = m[(i, j)];
                    if v != C64::default() {
                        out.push((pi, pj, v));
                    }
                }
            }
        }
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_blocks(|m| m * c)
    }

    pub fn map_blocks(&self, mut f: impl FnMut(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        Self {
            space: self.space.clone(),
            blocks: self.blocks.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_blocks(
        &self,
        other: &Self,
        mut f: impl FnMut(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>,
    ) -> Self {
        assert!(self.space == other.space, "operators live on different path spaces");
        Self {
            space: self.space.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add_scalar(&self, c: C64) -> Self {
        self.map_blocks(|m| {
            let n = m.nrows();
            m + DMatrix::<C64>::identity(n, n) * c
        })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.space.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference together with the offending index pair.
    pub fn max_diff(&self, other: &Self) -> (f64, Option<(usize, usize)>) {
        assert!(self.space == other.space, "operators live on different path spaces");
        let mut best = (0.0, None);
        for ((blk, a), b) in self.space.blocks().iter().zip(&self.blocks).zip(&other.blocks) {
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    let d = (a[(i, j)] - b[(i, j)]).norm();
                    if d > best.0 || (best.1.is_none() && d > 0.0) {
                        best = (d, Some((blk.members[i], blk.members[j])));
                    }
                }
            }
        }
        best
    }

    /// The common diagonal value, when the operator is a multiple of the identity.
    pub fn is_scalar(&self, tol: f64) -> Option<C64> {
        let d = self.diag();
        let c = *d.first()?;
        let scalar = Self::identity(self.space.clone()).scale(c);
        let (diff, _) = self.max_diff(&scalar);
        (diff <= tol * c.norm().max(1.0)).then_some(c)
    }
}

impl Mul for &BlockOperator {
    type Output = BlockOperator;
    fn mul(self, rhs: &BlockOperator) -> BlockOperator {
        self.zip_blocks(rhs, |a, b| a * b)
    }
}

impl Add for &BlockOperator {
    type Output = BlockOperator;
    fn add(self, rhs: &BlockOperator) -> BlockOperator {
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl Sub for &BlockOperator {
    type Output = BlockOperator;
    fn sub(self, rhs: &BlockOperator) -> BlockOperator {
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

/// `f ⊗̄ g`: entry `(p·r, q·s)` is `f(p, q) g(r, s)`.
pub fn truncated_tensor(f: &BlockOperator, g: &BlockOperator) -> BlockOperator {
    let graph = f.graph().clone();
    assert!(
        Arc::ptr_eq(&graph, g.graph()) || *graph == **g.graph(),
        "operators on different graphs"
    );
    let m = f.degree();
    let space = PathSpace::new(graph.clone(), m + g.degree());
    let splits: Vec<(Path, Path)> = space.paths().iter().map(|p| p.split(m, &graph)).collect();
    BlockOperator::from_fn(space, |i, j| {
        let (p, r) = &splits[i];
        let (q, s) = &splits[j];
        let a = f.get_path(p, q);
        if a == C64::default() {
            return a;
        }
        a * g.get_path(r, s)
    })
}

/// Identity on paths of length `m`.
pub fn identity(graph: &Arc<Graph>, m: usize) -> BlockOperator {
    BlockOperator::identity(PathSpace::new(graph.clone(), m))
}

/// `id^{⊗̄k} ⊗̄ w ⊗̄ id^{⊗̄(n-k-2)}` for a degree-2 `w`.
pub fn embed_local(w: &BlockOperator, n: usize, k: usize) -> BlockOperator {
    assert_eq!(w.degree(), 2);
    assert!(k + 2 <= n, "slot {k} out of range for {n} strands");
    let g = w.graph().clone();
    let left = truncated_tensor(&identity(&g, k), w);
    truncated_tensor(&left, &identity(&g, n - k - 2))
}

/// Contracts the last edge slot against `weight`:
/// result `(p, q)` is the sum of `f(p·e, q·e') weight(e', e)`.
pub fn partial_trace_last(f: &BlockOperator, weight: &BlockOperator) -> BlockOperator {
    assert!(f.degree() >= 1, "partial trace needs degree at least 1");
    assert_eq!(weight.degree(), 1);
    let g = f.graph().clone();
    let target = PathSpace::new(g.clone(), f.degree() - 1);
    BlockOperator::from_fn(target.clone(), |i, j| {
        let p = target.path(i);
        let q = target.path(j);
        let mut acc = C64::default();
        for &e in g.out_edges(p.range(&g)) {
            let pe = p.concat(&Path::from_edges(&g, vec![e]).unwrap(), &g).unwrap();
            for &e2 in g.out_edges(q.range(&g)) {
                let wv = weight.get(e2, e);
                if wv == C64::default() {
                    continue;
                }
                let qe = q.concat(&Path::from_edges(&g, vec![e2]).unwrap(), &g).unwrap();
                acc += f.get_path(&pe, &qe) * wv;
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Graph;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn two_loops() -> Arc<Graph> {
        Arc::new(
            Graph::new(
                ["v"],
                [
                    ("a".into(), "v".into(), "v".into()),
                    ("b".into(), "v".into(), "v".into()),
                ],
            )
            .unwrap(),
        )
    }

    fn bigon() -> Arc<Graph> {
        Arc::new(
            Graph::new(
                ["x", "y"],
                [
                    ("e1".into(), "x".into(), "y".into()),
                    ("e2".into(), "x".into(), "y".into()),
                    ("f".into(), "y".into(), "x".into()),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn vertex_model_tensor_is_kronecker() {
        let g = two_loops();
        let s1 = PathSpace::new(g.clone(), 1);
        let a = BlockOperator::from_dense(
            s1.clone(),
            &DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]),
        )
        .unwrap();
        let b = BlockOperator::from_dense(
            s1,
            &DMatrix::from_row_slice(2, 2, &[c(0.5), c(-1.0), c(2.0), c(0.0)]),
        )
        .unwrap();
        let t = truncated_tensor(&a, &b).to_dense();
        let k = a.to_dense().kronecker(&b.to_dense());
        assert!((t - k).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn identity_tensor_identity() {
        let g = bigon();
        let id1 = identity(&g, 1);
        let t = truncated_tensor(&id1, &id1);
        assert_eq!(t.max_diff(&identity(&g, 2)).0, 0.0);
    }

    #[test]
    fn from_dense_rejects_cross_block_entries() {
        let g = bigon();
        let s = PathSpace::new(g, 1);
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 2)] = c(1.0);
        assert!(BlockOperator::from_dense(s, &m).is_err());
    }

    #[test]
    fn partial_trace_of_identity_counts_out_edges() {
        let g = bigon();
        let id2 = identity(&g, 2);
        let r = partial_trace_last(&id2, &identity(&g, 1));
        let s1 = r.space().clone();
        for i in 0..s1.dim() {
            let v = s1.path(i).range(&g);
            assert_eq!(r.get(i, i), c(g.out_edges(v).len() as f64));
        }
    }

    #[test]
    fn partial_trace_with_diagonal_weight() {
        let g = bigon();
        let s1 = PathSpace::new(g.clone(), 1);
        let m = BlockOperator::diagonal(s1.clone(), &[c(2.0), c(3.0), c(5.0)]).unwrap();
        let r = partial_trace_last(&identity(&g, 2), &m);
        for i in 0..s1.dim() {
            let v = s1.path(i).range(&g);
            let want: C64 = g.out_edges(v).iter().map(|&e| m.get(e, e)).sum();
            assert_eq!(r.get(i, i), want);
        }
    }
}
