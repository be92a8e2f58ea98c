//! Dense complex linear algebra on block operators.
//!
//! Everything here works one (source, range) block at a time: inversion,
//! eigenvalue clustering with spectral projectors, square roots through the
//! truncated binomial series, and commutant dimensions by exact elimination.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::C64;
use crate::operator::BlockOperator;

fn block_label(f: &BlockOperator, b: usize) -> (String, String) {
    let blk = &f.space().blocks()[b];
    let g = f.graph();
    (g.vertices()[blk.src].clone(), g.vertices()[blk.dst].clone())
}

fn singular_values(m: &DMatrix<C64>) -> (f64, f64) {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (max, min)
}

/// Inverse of a square matrix, or the condition estimate when it is singular.
pub fn invert_matrix(m: &DMatrix<C64>, tol: f64) -> std::result::Result<DMatrix<C64>, f64> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let (max, min) = singular_values(m);
    if max == 0.0 || min <= tol * max {
        return Err(if min == 0.0 { f64::INFINITY } else { max / min });
    }
    m.clone().try_inverse().ok_or(f64::INFINITY)
}

/// Blockwise inverse.
pub fn invert(f: &BlockOperator, tol: f64) -> Result<BlockOperator> {
    let mut blocks = Vec::with_capacity(f.blocks().len());
    for (b, m) in f.blocks().iter().enumerate() {
        match invert_matrix(m, tol) {
            Ok(inv) => blocks.push(inv),
            Err(condition) => {
                let (src, dst) = block_label(f, b);
                return Err(Error::SingularBlock { src, dst, condition });
            }
        }
    }
    Ok(BlockOperator::from_blocks(f.space().clone(), blocks))
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = m.clone().schur();
    match schur.eigenvalues() {
        Some(v) => v.iter().cloned().collect(),
        None => {
            let (_, t) = schur.unpack();
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cluster {
    pub value: C64,
    pub multiplicity: usize,
    pub projector: BlockOperator,
}

/// Jordan data `f = Σ λ_i P_i + N`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub clusters: Vec<Cluster>,
    pub nilpotent: BlockOperator,
}

impl SpectralData {
    pub fn values(&self) -> Vec<C64> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    /// `Σ λ_i P_i`.
    pub fn semisimple(&self) -> BlockOperator {
        let mut s = BlockOperator::zeros(self.nilpotent.space().clone());
        for c in &self.clusters {
            s = &s + &c.projector.scale(c.value);
        }
        s
    }
}

fn cluster_values(values: &[C64], radius: f64) -> Result<Vec<(C64, Vec<usize>)>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out: Vec<(C64, Vec<usize>)> = groups
        .into_iter()
        .map(|(_, g)| {
            let mean = g.iter().map(|&i| values[i]).sum::<C64>() / g.len() as f64;
            (mean, g)
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let d = (out[i].0 - out[j].0).norm();
            if d < 10.0 * radius {
                return Err(Error::ClusterAmbiguity {
                    a: format!("{}", out[i].0),
                    b: format!("{}", out[j].0),
                    distance: d,
                });
            }
        }
    }
    Ok(out)
}

/// Spectral idempotent of cluster `target` inside one block, as a polynomial
/// in the block. `present` lists (cluster value, local multiplicity).
fn block_projector(m: &DMatrix<C64>, present: &[(usize, C64, usize)], target: usize) -> DMatrix<C64> {
    let n = m.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    let Some(&(_, lt, _)) = present.iter().find(|(c, _, _)| *c == target) else {
        return DMatrix::zeros(n, n);
    };
    if present.len() == 1 {
        return id;
    }
    let mut p = id.clone();
    for &(c, lj, mult) in present {
        if c == target {
            continue;
        }
        let factor = (m - &id * lj) / (lt - lj);
        for _ in 0..mult {
            p = &p * &factor;
        }
    }
    for _ in 0..64 {
        let p2 = &p * &p;
        let next = &p2 * C64::new(3.0, 0.0) - &p2 * &p * C64::new(2.0, 0.0);
        let delta = (&next - &p).iter().map(|z| z.norm()).fold(0.0, f64::max);
        p = next;
        if delta < 1e-15 {
            break;
        }
    }
    p
}

/// Eigenvalue clusters at `radius` with their spectral projectors.
pub fn spectral(f: &BlockOperator, radius: f64) -> Result<SpectralData> {
    let per_block: Vec<Vec<C64>> = f.blocks().iter().map(eigenvalues).collect();
    let flat: Vec<C64> = per_block.iter().flatten().cloned().collect();
    let groups = cluster_values(&flat, radius)?;
    let mut owner = vec![0usize; flat.len()];
    for (c, (_, members)) in groups.iter().enumerate() {
        for &i in members {
            owner[i] = c;
        }
    }
    let mut offset = 0;
    let mut present_per_block = Vec::with_capacity(per_block.len());
    for ev in &per_block {
        let mut present: Vec<(usize, C64, usize)> = Vec::new();
        for k in 0..ev.len() {
            let c = owner[offset + k];
            match present.iter_mut().find(|(cc, _, _)| *cc == c) {
                Some(entry) => entry.2 += 1,
                None => present.push((c, groups[c].0, 1)),
            }
        }
        offset += ev.len();
        present_per_block.push(present);
    }
    let clusters: Vec<Cluster> = groups
        .iter()
        .enumerate()
        .map(|(c, (value, members))| {
            let blocks = f
                .blocks()
                .iter()
                .zip(&present_per_block)
                .map(|(m, present)| block_projector(m, present, c))
                .collect();
            Cluster {
                value: *value,
                multiplicity: members.len(),
                projector: BlockOperator::from_blocks(f.space().clone(), blocks),
            }
        })
        .collect();
    let mut s = BlockOperator::zeros(f.space().clone());
    for c in &clusters {
        s = &s + &c.projector.scale(c.value);
    }
    let nilpotent = f - &s;
    Ok(SpectralData { clusters, nilpotent })
}

/// Coefficients of `h(X) = 1 + Σ_{n=0}^{bound} c_n X^{n+1}`, the truncated
/// binomial series of `(1 + X)^{1/2}`.
pub fn sqrt_series_coefficients(bound: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(bound + 1);
    let mut cur = 0.5;
    for n in 0..=bound {
        if n > 0 {
            cur *= -((2 * n - 1) as f64) / ((2 * n + 2) as f64);
        }
        c.push(cur);
    }
    c
}

/// Principal square root `Σ √λ_i P_i h(S⁻¹N)`; a polynomial in `f`.
pub fn operator_sqrt(f: &BlockOperator, radius: f64) -> Result<BlockOperator> {
    let sd = spectral(f, radius)?;
    for c in &sd.clusters {
        if c.value.norm() < radius {
            return Err(Error::ZeroEigenvalue(format!("{}", c.value)));
        }
    }
    let space = f.space().clone();
    let mut s_inv = BlockOperator::zeros(space.clone());
    let mut root = BlockOperator::zeros(space.clone());
    for c in &sd.clusters {
        s_inv = &s_inv + &c.projector.scale(c.value.inv());
        root = &root + &c.projector.scale(c.value.sqrt());
    }
    let x = &s_inv * &sd.nilpotent;
    let mut h = BlockOperator::identity(space.clone());
    let mut power = BlockOperator::identity(space.clone());
    for c in sqrt_series_coefficients(f.dim()) {
        power = &power * &x;
        if power.max_abs() == 0.0 {
            break;
        }
        h = &h + &power.scale(C64::new(c, 0.0));
    }
    Ok(&root * &h)
}

/// Reduced row echelon form with partial pivoting; returns the pivot columns.
fn row_reduce(a: &mut DMatrix<C64>, tol: f64) -> Vec<usize> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    row_reduce_at(a, tol * scale.max(f64::MIN_POSITIVE))
}

/// As [`row_reduce`], with an absolute pivot threshold.
fn row_reduce_at(a: &mut DMatrix<C64>, thresh: f64) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (mut best, mut best_abs) = (r, 0.0);
        for i in r..rows {
            let v = a[(i, c)].norm();
            if v > best_abs {
                best = i;
                best_abs = v;
            }
        }
        if best_abs <= thresh {
            for i in r..rows {
                a[(i, c)] = C64::default();
            }
            continue;
        }
        a.swap_rows(r, best);
        let inv = a[(r, c)].inv();
        for j in c..cols {
            a[(r, j)] *= inv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[(i, c)];
            if factor == C64::default() {
                continue;
            }
            for j in c..cols {
                let v = a[(r, j)];
                a[(i, j)] -= factor * v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Numerical rank at relative tolerance `tol`.
pub fn rank(m: &DMatrix<C64>, tol: f64) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a, tol).len()
}

/// Basis of the null space, one vector per free column.
pub fn nullspace(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    nullspace_at(m, tol * scale.max(f64::MIN_POSITIVE))
}

fn nullspace_at(m: &DMatrix<C64>, thresh: f64) -> Vec<DVector<C64>> {
    let cols = m.ncols();
    let mut a = m.clone();
    let pivots = row_reduce_at(&mut a, thresh);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = DVector::zeros(cols);
        v[free] = C64::new(1.0, 0.0);
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -a[(r, free)];
        }
        out.push(v);
    }
    out
}

/// Matrix of `X ↦ [X, f]` on column-major vectorized `X`.
fn commutator_map(f: &DMatrix<C64>) -> DMatrix<C64> {
    let n = f.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    f.transpose().kronecker(&id) - id.kronecker(f)
}

fn stacked_commutator_map(ops: &[&DMatrix<C64>]) -> DMatrix<C64> {
    let n = ops[0].nrows();
    let mut out = DMatrix::zeros(n * n * ops.len(), n * n);
    for (k, f) in ops.iter().enumerate() {
        out.view_mut((k * n * n, 0), (n * n, n * n))
            .copy_from(&commutator_map(f));
    }
    out
}

/// Dimension of `{X block-preserving : Xf = fX}`.
pub fn commutant_dimension(f: &BlockOperator, tol: f64) -> usize {
    commutant_dimension_of_set(&[f], tol)
}

/// Dimension of the block-preserving operators commuting with every operator in `ops`.
pub fn commutant_dimension_of_set(ops: &[&BlockOperator], tol: f64) -> usize {
    assert!(!ops.is_empty());
    (0..ops[0].blocks().len())
        .map(|b| {
            let mats: Vec<&DMatrix<C64>> = ops.iter().map(|o| o.block(b)).collect();
            let n = mats[0].nrows();
            n * n - rank(&stacked_commutator_map(&mats), tol)
        })
        .sum()
}

/// Basis of the block-preserving commutant of `f`.
pub fn commutant_basis(f: &BlockOperator, tol: f64) -> Vec<BlockOperator> {
    let space = f.space().clone();
    let nblocks = f.blocks().len();
    let mut out = Vec::new();
    for b in 0..nblocks {
        let m = f.block(b);
        let n = m.nrows();
        for v in nullspace(&commutator_map(m), tol) {
            let x = DMatrix::from_column_slice(n, n, v.as_slice());
            let blocks = (0..nblocks)
                .map(|k| {
                    if k == b {
                        x.clone()
                    } else {
                        let d = f.block(k).nrows();
                        DMatrix::zeros(d, d)
                    }
                })
                .collect();
            out.push(BlockOperator::from_blocks(space.clone(), blocks));
        }
    }
    out
}

/// Dimension of the commutant of the commutant of `f`, i.e. of the algebra
/// generated by `f` and the block idempotents. Uses a few seeded generic
/// elements of the commutant in place of a full basis.
pub fn bicommutant_dimension(f: &BlockOperator, tol: f64, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..f.blocks().len())
        .map(|b| {
            let m = f.block(b);
            let n = m.nrows();
            let basis: Vec<DMatrix<C64>> = nullspace(&commutator_map(m), tol)
                .into_iter()
                .map(|v| DMatrix::from_column_slice(n, n, v.as_slice()))
                .collect();
            let k = basis.len().min(3);
            let generic: Vec<DMatrix<C64>> = (0..k)
                .map(|_| {
                    let mut acc = DMatrix::zeros(n, n);
                    for x in &basis {
                        let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        acc += x * c;
                    }
                    acc
                })
                .collect();
            common_commutant_dimension(&generic, n, tol)
        })
        .sum()
}

/// Null space of the stacked commutator maps, intersected one operator at a
/// time on an orthonormal kernel basis.
fn common_commutant_dimension(ops: &[DMatrix<C64>], n: usize, tol: f64) -> usize {
    let Some((first, rest)) = ops.split_first() else {
        return n * n;
    };
    let mut kernel = orthonormal(nullspace(&commutator_map(first), tol));
    for f in rest {
        let Some(k) = &kernel else {
            return 0;
        };
        let map = commutator_map(f);
        let scale = map.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let coeffs = nullspace_at(&(map * k), tol * scale.max(f64::MIN_POSITIVE));
        kernel = orthonormal(coeffs).map(|c| k * c);
    }
    kernel.map_or(0, |k| k.ncols())
}

fn orthonormal(vecs: Vec<DVector<C64>>) -> Option<DMatrix<C64>> {
    if vecs.is_empty() {
        return None;
    }
    Some(DMatrix::from_columns(&vecs).qr().q())
}

/// Dimension of the span of `1, f, f², …`, summed over blocks. Powers are
/// orthonormalized as they are generated.
pub fn generated_algebra_dimension(f: &BlockOperator, tol: f64) -> usize {
    f.blocks()
        .iter()
        .map(|m| {
            let n = m.nrows();
            let mut basis: Vec<DVector<C64>> = Vec::new();
            let mut p = DMatrix::<C64>::identity(n, n);
            for _ in 0..=n {
                let mut v = DVector::from_column_slice(p.as_slice());
                for _ in 0..2 {
                    for b in &basis {
                        let c = b.dotc(&v);
                        v -= b * c;
                    }
                }
                let r = v.norm();
                if r <= tol * p.norm().max(f64::MIN_POSITIVE) {
                    break;
                }
                v /= C64::new(r, 0.0);
                p = DMatrix::from_column_slice(n, n, v.as_slice()) * m;
                basis.push(v);
            }
            basis.len()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Graph, PathSpace};
    use std::sync::Arc;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn loops(k: usize) -> Arc<PathSpace> {
        let edges: Vec<(String, String, String)> = (0..k)
            .map(|i| (format!("e{i}"), "v".to_string(), "v".to_string()))
            .collect();
        PathSpace::new(Arc::new(Graph::new(["v"], edges).unwrap()), 1)
    }

    fn dense(space: Arc<PathSpace>, rows: &[&[f64]]) -> BlockOperator {
        let n = rows.len();
        let m = DMatrix::from_fn(n, n, |i, j| c(rows[i][j]));
        BlockOperator::from_dense(space, &m).unwrap()
    }

    #[test]
    fn invert_diagonal() {
        let f = dense(loops(2), &[&[2.0, 0.0], &[0.0, 4.0]]);
        let inv = invert(&f, 1e-12).unwrap();
        assert_eq!(inv.diag(), vec![c(0.5), c(0.25)]);
    }

    #[test]
    fn invert_singular_reports_block() {
        let f = dense(loops(2), &[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(invert(&f, 1e-12), Err(Error::SingularBlock { .. })));
    }

    #[test]
    fn spectral_diagonal() {
        let f = dense(loops(3), &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let sd = spectral(&f, 1e-7).unwrap();
        assert_eq!(sd.clusters.len(), 2);
        assert_eq!(sd.clusters[0].multiplicity, 2);
        assert!((sd.clusters[0].value - c(1.0)).norm() < 1e-12);
        assert!(sd.clusters[0].projector.max_diff(&dense(loops(3), &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]])).0 < 1e-12);
        assert!(sd.nilpotent.max_abs() < 1e-12);
    }

    #[test]
    fn spectral_nilpotent_block() {
        let f = dense(loops(2), &[&[0.0, 1.0], &[0.0, 0.0]]);
        let sd = spectral(&f, 1e-7).unwrap();
        assert_eq!(sd.clusters.len(), 1);
        assert!(sd.clusters[0].projector.max_diff(&BlockOperator::identity(loops(2))).0 < 1e-12);
        assert!(sd.nilpotent.max_diff(&f).0 < 1e-12);
    }

    #[test]
    fn spectral_projectors_exact_on_jordan_blocks() {
        let f = dense(
            loops(3),
            &[&[2.0, 1.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]],
        );
        let sd = spectral(&f, 1e-7).unwrap();
        assert_eq!(sd.clusters.len(), 2);
        let p = &sd.clusters[0].projector;
        assert!((p * p).max_diff(p).0 < 1e-12);
        assert!(p.commutator(&sd.nilpotent).max_abs() < 1e-12);
        assert!((&sd.semisimple() + &sd.nilpotent).max_diff(&f).0 < 1e-12);
    }

    #[test]
    fn cluster_ambiguity_reported() {
        let f = dense(loops(2), &[&[1.0, 0.0], &[0.0, 1.0 + 5e-7]]);
        assert!(matches!(spectral(&f, 1e-7), Err(Error::ClusterAmbiguity { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let id = BlockOperator::identity(loops(2));
        assert!(operator_sqrt(&id, 1e-7).unwrap().max_diff(&id).0 < 1e-14);
        let f = dense(loops(2), &[&[4.0, 0.0], &[0.0, 9.0]]);
        assert!(operator_sqrt(&f, 1e-7).unwrap().max_diff(&dense(loops(2), &[&[2.0, 0.0], &[0.0, 3.0]])).0 < 1e-12);
        let j = dense(loops(2), &[&[1.0, 1.0], &[0.0, 1.0]]);
        let v = operator_sqrt(&j, 1e-7).unwrap();
        assert!(v.max_diff(&dense(loops(2), &[&[1.0, 0.5], &[0.0, 1.0]])).0 < 1e-12);
        assert!((&v * &v).max_diff(&j).0 < 1e-12);
    }

    #[test]
    fn sqrt_of_singular_fails() {
        let f = dense(loops(2), &[&[0.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(operator_sqrt(&f, 1e-7), Err(Error::ZeroEigenvalue(_))));
    }

    #[test]
    fn series_coefficients() {
        let c = sqrt_series_coefficients(3);
        let want = [0.5, -0.125, 0.0625, -0.0390625];
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn commutant_of_identity_and_diagonal() {
        let s = loops(3);
        assert_eq!(commutant_dimension(&BlockOperator::identity(s.clone()), 1e-10), 9);
        let f = dense(s, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
        assert_eq!(commutant_dimension(&f, 1e-10), 5);
        assert_eq!(bicommutant_dimension(&f, 1e-10, 7), 2);
        assert_eq!(generated_algebra_dimension(&f, 1e-10), 2);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = DMatrix::from_row_slice(2, 3, &[c(1.0), c(2.0), c(3.0), c(2.0), c(4.0), c(6.0)]);
        let ns = nullspace(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).iter().all(|z| z.norm() < 1e-12));
        }
    }
}
