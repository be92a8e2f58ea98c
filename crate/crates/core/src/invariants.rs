//! Braid-group representations on path spaces, Markov traces and link
//! invariants of braid closures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::C64Json;
use crate::model::{FaceModel, PathSpace, C64};
use crate::numerics::invert;
use crate::operator::{embed_local, identity, partial_trace_last, BlockOperator, EdgeOperator};
use crate::sparse::{SparseAction, SparseVec};
use crate::verify::{enhancement_constants, CheckReport};

/// Dense braid images are refused above this many matrix entries.
pub const DENSE_ENTRY_LIMIT: usize = 1_000_000;
/// Sparse evaluation is refused above this many paths.
pub const SPARSE_PATH_LIMIT: usize = 1_000_000;

/// A word in `σᵢ^{±1}` on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, bool)>,
}

impl BraidWord {
    /// Letters are `(i, positive)` with `1 ≤ i < strands`.
    pub fn new(strands: usize, letters: Vec<(usize, bool)>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Parse("a braid needs at least one strand".into()));
        }
        if let Some(&(i, _)) = letters.iter().find(|(i, _)| *i == 0 || *i >= strands) {
            return Err(Error::Parse(format!("generator {i} out of range for {strands} strands")));
        }
        Ok(Self { strands, letters })
    }

    /// Whitespace-separated signed integers; `-2` is `σ₂⁻¹`.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))?;
                if v == 0 {
                    return Err(Error::Parse("braid letter 0".into()));
                }
                Ok((v.unsigned_abs() as usize, v > 0))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(e₊, e₋)`.
    pub fn exponent_sums(&self) -> (usize, usize) {
        let pos = self.letters.iter().filter(|l| l.1).count();
        (pos, self.letters.len() - pos)
    }

    pub fn writhe(&self) -> i64 {
        let (p, m) = self.exponent_sums();
        p as i64 - m as i64
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, s)| (i, !s)).collect(),
        }
    }

    /// `γ β γ⁻¹`.
    pub fn conjugate_by(&self, gamma: &BraidWord) -> Self {
        assert_eq!(gamma.strands, self.strands);
        let mut letters = gamma.letters.clone();
        letters.extend(&self.letters);
        letters.extend(gamma.inverse().letters);
        Self {
            strands: self.strands,
            letters,
        }
    }

    /// `β σₙ^{±1}` on one more strand.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        letters.push((self.strands, positive));
        Self {
            strands: self.strands + 1,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, s)| if s { i.to_string() } else { format!("-{i}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// `"<strands>: <letters>"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, word) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected \"<strands>: <letters>\"".into()))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad strand count {n:?}")))?;
        Self::parse(word, n)
    }
}

/// Dense images `(σᵢ, σᵢ⁻¹)` for `i = 1..n−1`.
pub fn braid_representation(model: &FaceModel, n: usize, tol: f64) -> Result<Vec<(BlockOperator, BlockOperator)>> {
    let w = model.operator();
    let winv = invert(w, tol)?;
    let space = PathSpace::new(model.graph().clone(), n);
    let entries = space.dim() * space.dim();
    if entries > DENSE_ENTRY_LIMIT {
        return Err(Error::PathSpaceTooLarge {
            degree: n,
            paths: space.dim(),
            limit: DENSE_ENTRY_LIMIT,
        });
    }
    Ok((0..n.saturating_sub(1))
        .map(|k| (embed_local(w, n, k), embed_local(&winv, n, k)))
        .collect())
}

/// Dense image of a braid word; the identity on `𝕂𝒢ⁿ` for the empty word.
pub fn braid_image(model: &FaceModel, word: &BraidWord, tol: f64) -> Result<BlockOperator> {
    let rep = braid_representation(model, word.strands(), tol)?;
    let mut out = identity(model.graph(), word.strands());
    for &(i, pos) in word.letters() {
        let g = if pos { &rep[i - 1].0 } else { &rep[i - 1].1 };
        out = &out * g;
    }
    Ok(out)
}

/// Iterated partial trace of `f` against `M`; one value per vertex.
pub fn markov_trace(f: &BlockOperator, m: &EdgeOperator) -> BTreeMap<String, C64> {
    let mut cur = f.clone();
    while cur.degree() > 0 {
        cur = partial_trace_last(&cur, m);
    }
    let g = f.graph();
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), cur.get(i, i)))
        .collect()
}

/// Sparse generator images, built once per strand count.
struct SparseRep {
    plus: Vec<SparseAction>,
    minus: Vec<SparseAction>,
}

impl SparseRep {
    fn new(model: &FaceModel, winv: &BlockOperator, n: usize) -> Self {
        let w = model.operator();
        Self {
            plus: (0..n.saturating_sub(1)).map(|k| SparseAction::local(w, n, k)).collect(),
            minus: (0..n.saturating_sub(1)).map(|k| SparseAction::local(winv, n, k)).collect(),
        }
    }
}

/// `Σ_{s(p)=λ} (M^{⊗̄n} ρ(β))(p, p)` per vertex, by sparse column evaluation.
fn framed_values(model: &FaceModel, m: &EdgeOperator, word: &BraidWord, rep: &SparseRep) -> Result<Vec<C64>> {
    let g = model.graph();
    let space = PathSpace::new(g.clone(), word.strands());
    if space.dim() > SPARSE_PATH_LIMIT {
        return Err(Error::PathSpaceTooLarge {
            degree: word.strands(),
            paths: space.dim(),
            limit: SPARSE_PATH_LIMIT,
        });
    }
    let mut out = vec![C64::default(); g.vertex_count()];
    for j in 0..space.dim() {
        let mut x: SparseVec = vec![(j, C64::new(1.0, 0.0))];
        for &(i, pos) in word.letters().iter().rev() {
            let a = if pos { &rep.plus[i - 1] } else { &rep.minus[i - 1] };
            x = a.apply(&x);
        }
        let p = space.path(j);
        let mut acc = C64::default();
        for (i, v) in x {
            let r = space.path(i);
            let weight: C64 = p.edges.iter().zip(&r.edges).map(|(&a, &b)| m.get(a, b)).product();
            acc += weight * v;
        }
        out[p.start] += acc;
    }
    Ok(out)
}

/// Framed, writhe-corrected and unknot-normalized values of a braid closure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantReport {
    pub strands: usize,
    pub word: String,
    pub e_plus: usize,
    pub e_minus: usize,
    pub writhe: i64,
    pub c_plus: C64Json,
    pub c_minus: C64Json,
    pub framed: BTreeMap<String, C64Json>,
    pub corrected: BTreeMap<String, C64Json>,
    pub unknot: BTreeMap<String, C64Json>,
    /// Omitted at vertices where the unknot value vanishes.
    pub normalized: BTreeMap<String, C64Json>,
    /// Largest difference between normalized values at two vertices.
    pub spread: f64,
    pub notices: Vec<String>,
}

impl InvariantReport {
    pub fn normalized_at(&self, vertex: &str) -> Option<C64> {
        self.normalized.get(vertex).map(|z| (*z).into())
    }

    /// The normalized value at the first vertex that has one.
    pub fn value(&self) -> Option<C64> {
        self.normalized.values().next().map(|z| (*z).into())
    }
}

/// Evaluates links for one `(model, M)` pair, caching the enhancement
/// constants and sparse generator images.
pub struct LinkEvaluator<'a> {
    model: &'a FaceModel,
    m: &'a EdgeOperator,
    winv: BlockOperator,
    c_plus: C64,
    c_minus: C64,
    unknot: Vec<C64>,
    reps: BTreeMap<usize, SparseRep>,
    tol: f64,
}

impl<'a> LinkEvaluator<'a> {
    pub fn new(model: &'a FaceModel, m: &'a EdgeOperator, tol: f64) -> Result<Self> {
        let (c_plus, c_minus) = enhancement_constants(model, m, tol)?;
        let winv = invert(model.operator(), tol)?;
        let g = model.graph();
        let unknot = (0..g.vertex_count())
            .map(|v| g.out_edges(v).iter().map(|&e| m.get(e, e)).sum())
            .collect();
        Ok(Self {
            model,
            m,
            winv,
            c_plus,
            c_minus,
            unknot,
            reps: BTreeMap::new(),
            tol,
        })
    }

    pub fn constants(&self) -> (C64, C64) {
        (self.c_plus, self.c_minus)
    }

    pub fn evaluate(&mut self, word: &BraidWord) -> Result<InvariantReport> {
        let n = word.strands();
        if !self.reps.contains_key(&n) {
            let rep = SparseRep::new(self.model, &self.winv, n);
            self.reps.insert(n, rep);
        }
        let framed = framed_values(self.model, self.m, word, &self.reps[&n])?;
        let (ep, em) = word.exponent_sums();
        let factor = self.c_plus.powi(-(ep as i32)) * self.c_minus.powi(-(em as i32));
        let g = self.model.graph();
        let scale = self.unknot.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let mut report = InvariantReport {
            strands: n,
            word: word.to_string(),
            e_plus: ep,
            e_minus: em,
            writhe: word.writhe(),
            c_plus: self.c_plus.into(),
            c_minus: self.c_minus.into(),
            framed: BTreeMap::new(),
            corrected: BTreeMap::new(),
            unknot: BTreeMap::new(),
            normalized: BTreeMap::new(),
            spread: 0.0,
            notices: Vec::new(),
        };
        let mut values = Vec::new();
        for (v, id) in g.vertices().iter().enumerate() {
            let corrected = framed[v] * factor;
            report.framed.insert(id.clone(), framed[v].into());
            report.corrected.insert(id.clone(), corrected.into());
            report.unknot.insert(id.clone(), self.unknot[v].into());
            if self.unknot[v].norm() <= self.tol * scale {
                report.notices.push(Error::ZeroUnknot(id.clone()).to_string());
                continue;
            }
            let nv = corrected / self.unknot[v];
            values.push(nv);
            report.normalized.insert(id.clone(), nv.into());
        }
        for a in &values {
            for b in &values {
                report.spread = report.spread.max((a - b).norm());
            }
        }
        Ok(report)
    }
}

pub fn link_invariant(model: &FaceModel, m: &EdgeOperator, word: &BraidWord, tol: f64) -> Result<InvariantReport> {
    LinkEvaluator::new(model, m, tol)?.evaluate(word)
}

/// Largest normalized difference between two reports over shared vertices.
pub fn drift(a: &InvariantReport, b: &InvariantReport) -> f64 {
    a.normalized
        .iter()
        .filter_map(|(k, x)| {
            let y = b.normalized.get(k)?;
            let (x, y): (C64, C64) = ((*x).into(), (*y).into());
            Some((x - y).norm() / x.norm().max(1.0))
        })
        .fold(0.0, f64::max)
}

/// Random conjugations and stabilizations, at most 4 strands and 8 letters.
/// Each trial applies one move to the current word and compares against the
/// original normalized values.
pub fn markov_move_suite(
    model: &FaceModel,
    m: &EdgeOperator,
    word: &BraidWord,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    const MAX_STRANDS: usize = 4;
    const MAX_LEN: usize = 8;
    let mut eval = LinkEvaluator::new(model, m, tol)?;
    let base = eval.evaluate(word)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = word.clone();
    let mut worst = 0.0f64;
    let mut witness = None;
    for _ in 0..trials {
        let n = current.strands();
        let can_conj = n >= 2 && current.len() + 2 <= MAX_LEN;
        let can_stab = n < MAX_STRANDS && current.len() < MAX_LEN;
        if !can_conj && !can_stab {
            current = word.clone();
        }
        let n = current.strands();
        let can_conj = n >= 2 && current.len() + 2 <= MAX_LEN;
        let can_stab = n < MAX_STRANDS && current.len() < MAX_LEN;
        let conj = match (can_conj, can_stab) {
            (true, true) => rng.random_bool(0.5),
            (c, _) => c,
        };
        if !conj && !can_stab {
            break;
        }
        current = if conj {
            let gamma = BraidWord::new(n, vec![(rng.random_range(1..n), rng.random_bool(0.5))])?;
            current.conjugate_by(&gamma)
        } else {
            current.stabilize(rng.random_bool(0.5))
        };
        let r = eval.evaluate(&current)?;
        let d = drift(&base, &r);
        if d > worst {
            worst = d;
            witness = Some(format!("{} strands: {}", current.strands(), current));
        }
    }
    Ok(if worst < tol {
        CheckReport::passed("markov moves", worst)
    } else {
        CheckReport::failed("markov moves", worst, witness.unwrap_or_default())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = BraidWord::parse("1 -2 1", 3).unwrap();
        assert_eq!(w.letters(), &[(1, true), (2, false), (1, true)]);
        assert_eq!(w.to_string(), "1 -2 1");
        assert_eq!(w.exponent_sums(), (2, 1));
        assert_eq!(w.writhe(), 1);
        assert!(BraidWord::parse("3", 3).is_err());
        assert!(BraidWord::parse("0", 3).is_err());
        assert!(BraidWord::parse("x", 3).is_err());
        let f: BraidWord = "2: 1 1 1".parse().unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn moves() {
        let w = BraidWord::parse("1 1", 2).unwrap();
        let g = BraidWord::parse("-1", 2).unwrap();
        assert_eq!(w.conjugate_by(&g).to_string(), "-1 1 1 1");
        let s = w.stabilize(false);
        assert_eq!((s.strands(), s.to_string()), (3, "1 1 -2".to_string()));
        assert_eq!(w.inverse().to_string(), "-1 -1");
    }
}
