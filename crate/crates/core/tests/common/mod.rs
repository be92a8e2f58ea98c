#![allow(dead_code)]

use ribbonlab::catalog::{jimbo_model, sos_model, CatalogModel, ClassicalParams, ClassicalType, SosParams};
use ribbonlab::C64;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn jimbo(kind: ClassicalType, rank: usize, q: C64) -> CatalogModel {
    let p = match kind {
        ClassicalType::B => ClassicalParams::with_q_half(kind, rank, q.sqrt(), c(1.0)),
        _ => ClassicalParams::new(kind, rank, q, c(1.0)),
    };
    jimbo_model(&p.unwrap()).unwrap()
}

pub fn sos(n: usize, level: usize) -> CatalogModel {
    sos_model(&SosParams::new(n, level, 1, 1, 0)).unwrap()
}

/// The catalog list used by the property suites.
pub fn catalog() -> Vec<(String, CatalogModel)> {
    let mut out = Vec::new();
    for rank in 1..=3 {
        out.push((format!("A{rank}"), jimbo(ClassicalType::A, rank, c(1.3))));
    }
    out.push(("B2".into(), jimbo(ClassicalType::B, 2, c(1.44))));
    out.push(("C2".into(), jimbo(ClassicalType::C, 2, c(1.2))));
    out.push(("D2".into(), jimbo(ClassicalType::D, 2, c(1.2))));
    for (n, l) in [(2, 2), (2, 3), (3, 2)] {
        out.push((format!("SOS({n},{l})"), sos(n, l)));
    }
    out
}

/// Brute-force Kauffman bracket of a braid closure, normalized so the unknot
/// is 1 and corrected by `(−A³)^{−writhe}`. A positive crossing resolves as
/// `A·(vertical) + A⁻¹·(horizontal)`; a negative one with the roles swapped.
pub fn kauffman(word: &[i32], strands: usize, a: C64) -> C64 {
    let crossings = word.len();
    let loop_value = -a * a - a.powi(-2);
    let node = |level: usize, j: usize| level * strands + j;
    let mut total = C64::default();
    for state in 0..(1usize << crossings) {
        let mut parent: Vec<usize> = (0..strands * (crossings + 1)).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            parent[ra] = rb;
        };
        let mut weight = C64::new(1.0, 0.0);
        for (k, &g) in word.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            for j in 0..strands {
                if j != i && j != i + 1 {
                    union(&mut parent, node(k, j), node(k + 1, j));
                }
            }
            let vertical = state >> k & 1 == 0;
            if vertical {
                union(&mut parent, node(k, i), node(k + 1, i));
                union(&mut parent, node(k, i + 1), node(k + 1, i + 1));
            } else {
                union(&mut parent, node(k, i), node(k, i + 1));
                union(&mut parent, node(k + 1, i), node(k + 1, i + 1));
            }
            weight *= match (g > 0, vertical) {
                (true, true) | (false, false) => a,
                _ => a.inv(),
            };
        }
        for j in 0..strands {
            union(&mut parent, node(crossings, j), node(0, j));
        }
        let mut roots: Vec<usize> = (0..parent.len()).map(|x| find(&mut parent, x)).collect();
        roots.sort_unstable();
        roots.dedup();
        total += weight * loop_value.powi(roots.len() as i32 - 1);
    }
    let writhe: i32 = word.iter().map(|g| g.signum()).sum();
    (-a.powi(3)).powi(-writhe) * total
}

/// Kauffman variable matching the A₁ model with `M₊ = diag(q⁻¹, q)`.
pub fn kauffman_variable(q: C64) -> C64 {
    C64::new(0.0, 1.0) * q.powf(-0.5)
}
