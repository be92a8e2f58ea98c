//! Oriented graphs, paths and face models.
//!
//! Vertices and edges are sorted by id when a graph is built; every matrix in
//! the crate is indexed in that order. Paths of a fixed length are enumerated
//! lexicographically by edge index, and a length-0 path is a bare vertex.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::BlockOperator;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out_edges: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, source id, range id)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vs: Vec<String> = vertices.into_iter().map(Into::into).collect();
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidModel(format!("duplicate vertex id {:?}", w[0])));
            }
        }
        if vs.is_empty() {
            return Err(Error::InvalidModel("graph has no vertices".into()));
        }
        let vertex_index: HashMap<String, usize> =
            vs.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();

        let mut raw: Vec<(String, String, String)> = edges.into_iter().collect();
        raw.sort();
        let mut es = Vec::with_capacity(raw.len());
        for (k, (id, src, dst)) in raw.into_iter().enumerate() {
            if k > 0 && es.last().map(|e: &Edge| e.id == id).unwrap_or(false) {
                return Err(Error::InvalidModel(format!("duplicate edge id {id:?}")));
            }
            let s = *vertex_index
                .get(&src)
                .ok_or_else(|| Error::InvalidModel(format!("edge {id:?}: unknown source {src:?}")))?;
            let d = *vertex_index
                .get(&dst)
                .ok_or_else(|| Error::InvalidModel(format!("edge {id:?}: unknown range {dst:?}")))?;
            es.push(Edge { id, src: s, dst: d });
        }
        let edge_index = es.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let mut out_edges = vec![Vec::new(); vs.len()];
        for (i, e) in es.iter().enumerate() {
            out_edges[e.src].push(i);
        }
        Ok(Self {
            vertices: vs,
            edges: es,
            vertex_index,
            edge_index,
            out_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Edges leaving vertex `v`, in edge order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// All paths of length `m` in canonical order.
    pub fn paths(&self, m: usize) -> Vec<Path> {
        if m == 0 {
            return (0..self.vertex_count()).map(Path::vertex).collect();
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(m);
        for e in 0..self.edge_count() {
            stack.push(e);
            self.extend_paths(m, &mut stack, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_paths(&self, m: usize, stack: &mut Vec<usize>, out: &mut Vec<Path>) {
        if stack.len() == m {
            out.push(Path {
                start: self.edges[stack[0]].src,
                edges: stack.clone(),
            });
            return;
        }
        let last = self.edges[*stack.last().unwrap()].dst;
        for &e in &self.out_edges[last] {
            stack.push(e);
            self.extend_paths(m, stack, out);
            stack.pop();
        }
    }

    pub fn describe_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertices[p.start].clone()
        } else {
            p.edges
                .iter()
                .map(|&e| self.edges[e].id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// A path given by its start vertex and a (possibly empty) edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Self {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Option<Self> {
        let first = *edges.first()?;
        for w in edges.windows(2) {
            if g.edge(w[0]).dst != g.edge(w[1]).src {
                return None;
            }
        }
        Some(Self {
            start: g.edge(first).src,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn src(&self) -> usize {
        self.start
    }

    pub fn range(&self, g: &Graph) -> usize {
        self.edges.last().map(|&e| g.edge(e).dst).unwrap_or(self.start)
    }

    /// `self · other`, when the range of `self` is the source of `other`.
    pub fn concat(&self, other: &Path, g: &Graph) -> Option<Path> {
        if self.range(g) != other.start {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path {
            start: self.start,
            edges,
        })
    }

    /// Splits into the first `m` edges and the rest.
    pub fn split(&self, m: usize, g: &Graph) -> (Path, Path) {
        let head = Path {
            start: self.start,
            edges: self.edges[..m].to_vec(),
        };
        let mid = head.range(g);
        let tail = Path {
            start: mid,
            edges: self.edges[m..].to_vec(),
        };
        (head, tail)
    }
}

/// Paths sharing a source and a range vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub src: usize,
    pub dst: usize,
    pub members: Vec<usize>,
}

/// The paths of one length, with their (source, range) block decomposition.
#[derive(Debug, Clone)]
pub struct PathSpace {
    graph: Arc<Graph>,
    degree: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    blocks: Vec<Block>,
    loc: Vec<(usize, usize)>,
}

impl PartialEq for PathSpace {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
    }
}

impl PathSpace {
    pub fn new(graph: Arc<Graph>, degree: usize) -> Arc<Self> {
        let paths = graph.paths(degree);
        let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut by_key: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            by_key.entry((p.src(), p.range(&graph))).or_default().push(i);
        }
        let mut loc = vec![(0, 0); paths.len()];
        let blocks: Vec<Block> = by_key
            .into_iter()
            .enumerate()
            .map(|(b, ((src, dst), members))| {
                for (k, &i) in members.iter().enumerate() {
                    loc[i] = (b, k);
                }
                Block { src, dst, members }
            })
            .collect();
        Arc::new(Self {
            graph,
            degree,
            paths,
            index,
            blocks,
            loc,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Block number and position inside the block of path `i`.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        self.loc[i]
    }

    pub fn describe(&self, i: usize) -> String {
        self.graph.describe_path(&self.paths[i])
    }
}

/// Edge indices of a face `w[r p/q s]`: `p` top, `s` right, `r` left, `q` bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub r: usize,
    pub p: usize,
    pub q: usize,
    pub s: usize,
}

impl Face {
    pub fn is_face(&self, g: &Graph) -> bool {
        let (r, p, q, s) = (g.edge(self.r), g.edge(self.p), g.edge(self.q), g.edge(self.s));
        p.src == r.src && p.dst == s.src && r.dst == q.src && q.dst == s.dst
    }
}

/// A graph with complex weights on faces; unlisted faces carry weight zero.
#[derive(Debug, Clone)]
pub struct FaceModel {
    graph: Arc<Graph>,
    weights: BTreeMap<Face, C64>,
    op: BlockOperator,
}

impl FaceModel {
    pub fn new(graph: Arc<Graph>, faces: impl IntoIterator<Item = (Face, C64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (f, w) in faces {
            if !f.is_face(&graph) {
                return Err(Error::InvalidModel(format!(
                    "({}, {}, {}, {}) is not a face",
                    graph.edge(f.r).id,
                    graph.edge(f.p).id,
                    graph.edge(f.q).id,
                    graph.edge(f.s).id
                )));
            }
            if weights.insert(f, w).is_some() {
                return Err(Error::InvalidModel(format!(
                    "duplicate face ({}, {}, {}, {})",
                    graph.edge(f.r).id,
                    graph.edge(f.p).id,
                    graph.edge(f.q).id,
                    graph.edge(f.s).id
                )));
            }
        }
        let space = PathSpace::new(graph.clone(), 2);
        let mut op = BlockOperator::zeros(space.clone());
        for (f, w) in &weights {
            let out = Path::from_edges(&graph, vec![f.r, f.q]).expect("face condition");
            let inp = Path::from_edges(&graph, vec![f.p, f.s]).expect("face condition");
            let i = space.index_of(&out).expect("path exists");
            let j = space.index_of(&inp).expect("path exists");
            op.set(i, j, *w);
        }
        Ok(Self { graph, weights, op })
    }

    /// Reads the faces back off a degree-2 operator, dropping exact zeros.
    pub fn from_operator(op: &BlockOperator) -> Result<Self> {
        if op.degree() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "face model needs a degree-2 operator, got degree {}",
                op.degree()
            )));
        }
        let space = op.space().clone();
        let g = space.graph().clone();
        let mut faces = Vec::new();
        for (i, j, v) in op.nonzero_entries() {
            let out = space.path(i);
            let inp = space.path(j);
            faces.push((
                Face {
                    r: out.edges[0],
                    q: out.edges[1],
                    p: inp.edges[0],
                    s: inp.edges[1],
                },
                v,
            ));
        }
        Self::new(g, faces)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn weights(&self) -> &BTreeMap<Face, C64> {
        &self.weights
    }

    pub fn weight(&self, f: &Face) -> C64 {
        self.weights.get(f).copied().unwrap_or_default()
    }

    /// The operator on length-2 paths: input `(p, s)` goes to `w[r p/q s] (r, q)`.
    pub fn operator(&self) -> &BlockOperator {
        &self.op
    }

    pub fn edge_space(&self) -> Arc<PathSpace> {
        PathSpace::new(self.graph.clone(), 1)
    }

    /// Same graph, every weight multiplied by `eta`.
    pub fn scaled(&self, eta: C64) -> Self {
        let faces: Vec<_> = self.weights.iter().map(|(f, w)| (*f, *w * eta)).collect();
        Self::new(self.graph.clone(), faces).expect("faces already validated")
    }
}
