//! JSON forms of models, complex scalars and group-like vectors.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::Metadata;
use crate::error::{Error, Result};
use crate::model::{Face, FaceModel, Graph, Path, C64};
use crate::operator::BlockOperator;
use crate::ribbon::GroupLikeVector;

/// `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct C64Json {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for C64Json {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<C64Json> for C64 {
    fn from(z: C64Json) -> Self {
        C64::new(z.re, z.im)
    }
}

pub fn to_json_vec(v: &[C64]) -> Vec<C64Json> {
    v.iter().copied().map(Into::into).collect()
}

pub fn from_json_vec(v: &[C64Json]) -> Vec<C64> {
    v.iter().copied().map(Into::into).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceJson {
    pub r: String,
    pub p: String,
    pub q: String,
    pub s: String,
    pub w: C64Json,
}

/// On-disk model: graph, face weights and optional catalog metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub faces: Vec<FaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_model(model: &FaceModel, metadata: Option<Metadata>) -> Self {
        let g = model.graph();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                id: e.id.clone(),
                src: g.vertices()[e.src].clone(),
                dst: g.vertices()[e.dst].clone(),
            })
            .collect();
        let eid = |i: usize| g.edge(i).id.clone();
        let faces = model
            .weights()
            .iter()
            .map(|(f, w)| FaceJson {
                r: eid(f.r),
                p: eid(f.p),
                q: eid(f.q),
                s: eid(f.s),
                w: (*w).into(),
            })
            .collect();
        Self {
            vertices: g.vertices().to_vec(),
            edges,
            faces,
            metadata,
        }
    }

    /// Builds the graph and model; rejects duplicate faces and non-faces.
    pub fn to_model(&self) -> Result<FaceModel> {
        let graph = Arc::new(Graph::new(
            self.vertices.iter().cloned(),
            self.edges
                .iter()
                .map(|e| (e.id.clone(), e.src.clone(), e.dst.clone())),
        )?);
        let lookup = |id: &str| {
            graph
                .edge_index(id)
                .ok_or_else(|| Error::InvalidModel(format!("face refers to unknown edge {id:?}")))
        };
        let mut seen = BTreeSet::new();
        let mut faces = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let face = Face {
                r: lookup(&f.r)?,
                p: lookup(&f.p)?,
                q: lookup(&f.q)?,
                s: lookup(&f.s)?,
            };
            if !seen.insert(face) {
                return Err(Error::InvalidModel(format!(
                    "duplicate face ({}, {}, {}, {})",
                    f.r, f.p, f.q, f.s
                )));
            }
            faces.push((face, f.w.into()));
        }
        FaceModel::new(graph, faces)
    }
}

/// One term `c · e(p/q)`. Degree-0 terms list a single vertex id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlfTermJson {
    pub coeff: C64Json,
    pub p: Vec<String>,
    pub q: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlfJson {
    pub degree: usize,
    pub terms: Vec<GlfTermJson>,
}

fn path_ids(g: &Graph, p: &Path) -> Vec<String> {
    if p.is_empty() {
        vec![g.vertices()[p.start].clone()]
    } else {
        p.edges.iter().map(|&e| g.edge(e).id.clone()).collect()
    }
}

fn ids_path(g: &Graph, ids: &[String], degree: usize) -> Result<Path> {
    if degree == 0 {
        let [v] = ids else {
            return Err(Error::Parse("degree-0 term needs exactly one vertex id".into()));
        };
        let i = g
            .vertex_index(v)
            .ok_or_else(|| Error::Parse(format!("unknown vertex {v:?}")))?;
        return Ok(Path::vertex(i));
    }
    if ids.len() != degree {
        return Err(Error::Parse(format!("term of length {} in a degree-{degree} vector", ids.len())));
    }
    let edges = ids
        .iter()
        .map(|id| g.edge_index(id).ok_or_else(|| Error::Parse(format!("unknown edge {id:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Path::from_edges(g, edges).ok_or_else(|| Error::Parse(format!("edges {ids:?} do not compose")))
}

impl GlfJson {
    /// Fails when the vector mixes degrees.
    pub fn from_vector(g: &Graph, v: &GroupLikeVector) -> Result<Self> {
        let degrees = v.degrees();
        if degrees.len() > 1 {
            return Err(Error::DimensionMismatch(format!("mixed degrees {degrees:?}")));
        }
        Ok(Self {
            degree: degrees.first().copied().unwrap_or(0),
            terms: v
                .terms
                .iter()
                .map(|(c, p, q)| GlfTermJson {
                    coeff: (*c).into(),
                    p: path_ids(g, p),
                    q: path_ids(g, q),
                })
                .collect(),
        })
    }

    pub fn to_vector(&self, g: &Graph) -> Result<GroupLikeVector> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    t.coeff.into(),
                    ids_path(g, &t.p, self.degree)?,
                    ids_path(g, &t.q, self.degree)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupLikeVector::new(terms))
    }
}

/// Row-major dense matrix of an operator, for reports.
pub fn operator_rows(f: &BlockOperator) -> Vec<Vec<C64Json>> {
    let d = f.to_dense();
    (0..d.nrows())
        .map(|i| (0..d.ncols()).map(|j| d[(i, j)].into()).collect())
        .collect()
}
