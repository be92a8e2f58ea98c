//! Column-sparse actions on path spaces, for products that would be too large
//! to materialize densely.

use std::collections::HashMap;
use std::sync::Arc;

use crate::model::{Path, PathSpace, C64};
use crate::operator::BlockOperator;
use crate::verify::CheckReport;

/// Sorted `(index, value)` pairs.
pub type SparseVec = Vec<(usize, C64)>;

#[derive(Debug, Clone)]
pub struct SparseAction {
    space: Arc<PathSpace>,
    cols: Vec<SparseVec>,
}

impl SparseAction {
    pub fn from_operator(f: &BlockOperator) -> Self {
        let space = f.space().clone();
        let mut cols = vec![Vec::new(); space.dim()];
        for (blk, m) in space.blocks().iter().zip(f.blocks()) {
            for (j, &col) in blk.members.iter().enumerate() {
                for (i, &row) in blk.members.iter().enumerate() {
                    let v = m[(i, j)];
                    if v != C64::default() {
                        cols[col].push((row, v));
                    }
                }
                cols[col].sort_by_key(|e| e.0);
            }
        }
        Self { space, cols }
    }

    /// `id^{⊗̄k} ⊗̄ w ⊗̄ id^{⊗̄(n−k−2)}` without forming the dense matrix.
    pub fn local(w: &BlockOperator, n: usize, k: usize) -> Self {
        assert_eq!(w.degree(), 2);
        assert!(k + 2 <= n, "slot {k} out of range for {n} strands");
        let g = w.graph().clone();
        let space = PathSpace::new(g.clone(), n);
        let wcols = Self::from_operator(w);
        let w_space = w.space();
        let cols = space
            .paths()
            .iter()
            .map(|p| {
                let pair = Path::from_edges(&g, p.edges[k..k + 2].to_vec()).unwrap();
                let j = w_space.index_of(&pair).unwrap();
                let mut out: SparseVec = wcols.cols[j]
                    .iter()
                    .map(|&(r, v)| {
                        let mut edges = p.edges.clone();
                        edges[k..k + 2].copy_from_slice(&w_space.path(r).edges);
                        let target = Path { start: p.start, edges };
                        (space.index_of(&target).unwrap(), v)
                    })
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        Self { space, cols }
    }

    pub fn space(&self) -> &Arc<PathSpace> {
        &self.space
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc: HashMap<usize, C64> = HashMap::new();
        for &(j, xv) in x {
            for &(i, v) in &self.cols[j] {
                *acc.entry(i).or_default() += v * xv;
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|(_, v)| *v != C64::default()).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// `f₁ f₂ ⋯ f_k e_j`, applied right to left.
    pub fn product_column(factors: &[&SparseAction], j: usize) -> SparseVec {
        let mut x = vec![(j, C64::new(1.0, 0.0))];
        for f in factors.iter().rev() {
            x = f.apply(&x);
        }
        x
    }

    pub fn max_abs(&self) -> f64 {
        self.cols
            .iter()
            .flatten()
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Compares two operator products column by column, with the residual
/// normalization of [`crate::verify::compare`].
pub fn compare_products(
    name: &str,
    lhs: &[&SparseAction],
    rhs: &[&SparseAction],
    reference: f64,
    tol: f64,
) -> CheckReport {
    let space = lhs[0].space().clone();
    let mut worst = 0.0f64;
    let mut at = None;
    let mut scale = reference;
    for j in 0..space.dim() {
        let a = SparseAction::product_column(lhs, j);
        let b = SparseAction::product_column(rhs, j);
        let mut merged: HashMap<usize, (C64, C64)> = HashMap::new();
        for (i, v) in a {
            merged.entry(i).or_default().0 = v;
        }
        for (i, v) in b {
            merged.entry(i).or_default().1 = v;
        }
        let mut keys: Vec<usize> = merged.keys().copied().collect();
        keys.sort_unstable();
        for i in keys {
            let (x, y) = merged[&i];
            scale = scale.max(x.norm()).max(y.norm());
            let d = (x - y).norm();
            if d > worst {
                worst = d;
                at = Some((i, j));
            }
        }
    }
    let residual = if scale > 0.0 { worst / scale } else { worst };
    if residual < tol {
        CheckReport::passed(name, residual)
    } else {
        let witness = at
            .map(|(i, j)| format!("({}, {})", space.describe(i), space.describe(j)))
            .unwrap_or_default();
        CheckReport::failed(name, residual, witness)
    }
}
