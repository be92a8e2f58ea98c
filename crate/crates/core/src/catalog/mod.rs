//! Built-in model families with their closed-form metadata.

mod jimbo;
mod sos;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{from_json_vec, C64Json, GlfJson, ModelFile};
use crate::model::{FaceModel, C64};
use crate::operator::EdgeOperator;
use crate::ribbon::{GroupLikeVector, Sign};

pub use jimbo::{det_vector_a, jimbo_model, ClassicalParams, ClassicalType};
pub use sos::{q_integer, sos_model, SosParams};

/// Parameters that produced a catalog model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum Family {
    Jimbo {
        #[serde(rename = "type")]
        kind: ClassicalType,
        rank: usize,
        n: usize,
        nu: i32,
        q: C64Json,
        q_half: C64Json,
        eta: C64Json,
    },
    Sos {
        n: usize,
        level: usize,
        t_num: i64,
        eps: i32,
        t: C64Json,
        zeta: C64Json,
    },
}

/// Closed-form data attached to a catalog model. Edge diagonals follow the
/// canonical edge order; `quad_vector` follows the canonical order of
/// length-2 paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub family: Family,
    /// BMW parameter of the unscaled braiding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<C64Json>,
    /// The two roots of the quadratic relation, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hecke: Option<[C64Json; 2]>,
    pub m_plus: Vec<C64Json>,
    pub m_minus: Vec<C64Json>,
    pub s2_diag: Vec<C64Json>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_vector: Option<Vec<C64Json>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<GlfJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<GlfJson>,
    /// Whether `det − 1` generates a biideal compatible with the braiding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_compatible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_compatible: Option<bool>,
    /// `D(λ)` per vertex id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_table: Option<BTreeMap<String, C64Json>>,
}

/// A generated model with its metadata.
#[derive(Debug, Clone)]
pub struct CatalogModel {
    pub model: FaceModel,
    pub metadata: Metadata,
}

impl CatalogModel {
    pub fn to_file(&self) -> ModelFile {
        ModelFile::from_model(&self.model, Some(self.metadata.clone()))
    }

    /// `M₊` or `M₋` as an edge operator.
    pub fn m(&self, sign: Sign) -> Result<EdgeOperator> {
        self.metadata.m(&self.model, sign)
    }

    pub fn s2(&self) -> Result<EdgeOperator> {
        self.metadata.s2(&self.model)
    }

    /// Multiplies every weight by `eta` and updates the parameters that
    /// absorb the factor.
    pub fn scaled(&self, eta: C64) -> Self {
        let model = scale_model(&self.model, eta);
        let mut metadata = self.metadata.clone();
        metadata.hecke = metadata
            .hecke
            .map(|[a, b]| [(C64::from(a) * eta).into(), (C64::from(b) * eta).into()]);
        match &mut metadata.family {
            Family::Jimbo { kind, n, q, eta: e, .. } => {
                let new_eta = C64::from(*e) * eta;
                *e = new_eta.into();
                let (det_ok, quad_ok) = jimbo::compatibility(*kind, *n, (*q).into(), new_eta);
                metadata.det_compatible = Some(det_ok);
                metadata.quad_compatible = quad_ok;
            }
            Family::Sos { n, eps, t, zeta, .. } => {
                let new_zeta = C64::from(*zeta) / eta;
                *zeta = new_zeta.into();
                metadata.det_compatible = Some(sos::det_compatible(*n, *eps, (*t).into(), new_zeta));
            }
        }
        Self { model, metadata }
    }
}

impl Metadata {
    pub fn m(&self, model: &FaceModel, sign: Sign) -> Result<EdgeOperator> {
        let d = match sign {
            Sign::Plus => &self.m_plus,
            Sign::Minus => &self.m_minus,
        };
        EdgeOperator::diagonal(model.edge_space(), &from_json_vec(d))
    }

    pub fn s2(&self, model: &FaceModel) -> Result<EdgeOperator> {
        EdgeOperator::diagonal(model.edge_space(), &from_json_vec(&self.s2_diag))
    }

    /// Ideal generators available for quotient tests: `det − 1`, `quad − 1`.
    pub fn ideal_vectors(&self, model: &FaceModel) -> Result<Vec<(String, GroupLikeVector)>> {
        let g = model.graph();
        let one = GroupLikeVector::unit(g);
        let mut out = Vec::new();
        if let Some(det) = &self.det {
            out.push(("det - 1".to_string(), det.to_vector(g)?.minus(&one)));
        }
        if let Some(quad) = &self.quad {
            out.push(("quad - 1".to_string(), quad.to_vector(g)?.minus(&one)));
        }
        Ok(out)
    }

    /// `η`, or 1 for families without it.
    pub fn eta(&self) -> C64 {
        match &self.family {
            Family::Jimbo { eta, .. } => (*eta).into(),
            Family::Sos { .. } => C64::new(1.0, 0.0),
        }
    }

    /// `(λ, q)` for the BMW suite, when defined.
    pub fn bmw_params(&self) -> Option<(C64, C64)> {
        match (&self.family, self.lambda) {
            (Family::Jimbo { q, .. }, Some(l)) => Some((l.into(), (*q).into())),
            _ => None,
        }
    }
}

/// Every weight multiplied by `eta`.
pub fn scale_model(model: &FaceModel, eta: C64) -> FaceModel {
    model.scaled(eta)
}
