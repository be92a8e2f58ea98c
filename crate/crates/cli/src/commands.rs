use std::path::{Path, PathBuf};

use num_complex::Complex64;
use ribbonlab::catalog::{
    jimbo_model, scale_model, sos_model, ClassicalParams, ClassicalType, Metadata, SosParams,
};
use ribbonlab::drinfeld::{drinfeld_pipeline, uu_commutation_check, DrinfeldOperators};
use ribbonlab::invariants::{markov_move_suite, BraidWord, InvariantReport, LinkEvaluator};
use ribbonlab::io::{operator_rows, to_json_vec, C64Json, ModelFile};
use ribbonlab::ribbon::{mcrit_check, quotient_vanishing, ribbon_solve, Sign};
use ribbonlab::verify::{
    build_lyubashenko_double, check_bmw, check_double_star_triangular, check_glf_commutant, check_hecke,
    check_star_triangular, classify_enhancement, CheckReport, Enhancement,
};
use ribbonlab::{EdgeOperator, Error, FaceModel};
use serde::Serialize;

use crate::report::{emit, render, Envelope, RunConfig};
use crate::{Failure, Suite};

/// A parsed model file with its digest.
pub struct Input {
    pub file: ModelFile,
    pub model: FaceModel,
    pub sha256: String,
}

impl Input {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|e| Failure::Input(format!("{} is not UTF-8: {e}", path.display())))?;
        let file = ModelFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let model = file.to_model().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(Self {
            file,
            model,
            sha256: crate::report::sha256_hex(&bytes),
        })
    }

    fn metadata(&self) -> Option<&Metadata> {
        self.file.metadata.as_ref()
    }
}

fn finish<T: Serialize>(
    command: &str,
    cfg: &RunConfig,
    input: &Input,
    pass: bool,
    result: T,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let env = Envelope {
        command,
        config: cfg,
        model_sha256: &input.sha256,
        pass,
        result,
    };
    emit(&render(&env), out)?;
    Ok(pass)
}

pub enum CatalogRequest {
    Jimbo {
        kind: ClassicalType,
        rank: usize,
        q: Option<Complex64>,
        q_half: Option<Complex64>,
        eta: Complex64,
    },
    Sos {
        n: usize,
        level: usize,
        t_num: i64,
        eps: i32,
        zeta_root: usize,
    },
}

pub fn cmd_catalog(request: CatalogRequest, out: Option<&Path>) -> Result<bool, Failure> {
    let model = match request {
        CatalogRequest::Jimbo {
            kind,
            rank,
            q,
            q_half,
            eta,
        } => {
            let params = match (q, q_half) {
                (_, Some(h)) => ClassicalParams::with_q_half(kind, rank, h, eta),
                (Some(q), None) => ClassicalParams::new(kind, rank, q, eta),
                (None, None) => return Err(Failure::Input("one of --q or --q-half is required".into())),
            }
            .map_err(|e| Failure::Input(e.to_string()))?;
            jimbo_model(&params)
        }
        CatalogRequest::Sos {
            n,
            level,
            t_num,
            eps,
            zeta_root,
        } => sos_model(&SosParams::new(n, level, t_num, eps, zeta_root)),
    }
    .map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = model.to_file().to_json();
    text.push('\n');
    emit(&text, out)?;
    Ok(true)
}

#[derive(Serialize)]
struct EnhancementEntry {
    sign: Sign,
    outcome: Enhancement,
}

#[derive(Serialize)]
struct CheckResult {
    checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    enhancement: Vec<EnhancementEntry>,
}

pub struct CheckOptions {
    pub suites: Vec<Suite>,
    pub lambda_from_meta: bool,
    pub lambda: Option<Complex64>,
    pub q: Option<Complex64>,
    pub hecke: Option<(Complex64, Complex64)>,
}

fn missing(check: &str, what: &str) -> CheckReport {
    CheckReport::failed(check, f64::INFINITY, format!("{what} unavailable"))
}

fn error_report(check: &str, e: &Error) -> CheckReport {
    CheckReport::failed(check, f64::INFINITY, e.to_string())
}

pub fn cmd_check(input: &Input, opts: &CheckOptions, cfg: &RunConfig, out: Option<&Path>) -> Result<bool, Failure> {
    let tol = cfg.tolerance;
    let model = &input.model;
    let meta = input.metadata();
    let mut checks = Vec::new();
    let mut enhancement = Vec::new();
    for suite in &opts.suites {
        match suite {
            Suite::Ybe => checks.push(check_star_triangular(model, tol)),
            Suite::Closable => match build_lyubashenko_double(model, tol) {
                Ok(dbl) => {
                    checks.push(CheckReport::passed("closable", 0.0));
                    checks.push(check_double_star_triangular(&dbl, tol));
                }
                Err(e) => checks.push(error_report("closable", &e)),
            },
            Suite::Hecke => {
                let roots = opts
                    .hecke
                    .or_else(|| meta.and_then(|m| m.hecke).map(|[a, b]| (a.into(), b.into())));
                checks.push(match roots {
                    Some((a, b)) => check_hecke(model, a, b, tol),
                    None => missing("hecke", "quadratic roots (metadata or --hecke)"),
                });
            }
            Suite::Bmw => {
                let params = if opts.lambda_from_meta {
                    meta.and_then(|m| m.bmw_params().map(|p| (p, m.eta())))
                } else {
                    opts.lambda.zip(opts.q).map(|p| (p, Complex64::new(1.0, 0.0)))
                };
                checks.push(match params {
                    Some(((lambda, q), eta)) => {
                        let unscaled = scale_model(model, eta.inv());
                        check_bmw(&unscaled, lambda, q, tol).unwrap_or_else(|e| error_report("bmw", &e))
                    }
                    None => missing("bmw", "lambda and q (--lambda-from-meta or --lambda/--q)"),
                });
            }
            Suite::Glf => match meta {
                Some(m) => {
                    for (name, g) in [
                        ("M+", m.m(model, Sign::Plus)),
                        ("M-", m.m(model, Sign::Minus)),
                        ("S2", m.s2(model)),
                    ] {
                        let mut r = match g {
                            Ok(g) => check_glf_commutant(model, &g, tol),
                            Err(e) => error_report("group-like commutation", &e),
                        };
                        r.check = format!("{} ({name})", r.check);
                        checks.push(r);
                    }
                }
                None => checks.push(missing("group-like commutation", "metadata diagonals")),
            },
            Suite::Enhancement => match meta {
                Some(m) => {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let name = format!("enhancement (M{})", sign.symbol());
                        let outcome = m.m(model, sign).and_then(|g| classify_enhancement(model, &g, tol));
                        match outcome {
                            Ok(o) => {
                                checks.push(match &o {
                                    Enhancement::Enhanced { .. } => CheckReport::passed(name, 0.0),
                                    Enhancement::NotScalar { side, residual } => {
                                        CheckReport::failed(name, *residual, format!("{side} side not scalar"))
                                    }
                                    Enhancement::BlockDependent { side, .. } => {
                                        CheckReport::failed(name, f64::INFINITY, format!("{side} side block dependent"))
                                    }
                                });
                                enhancement.push(EnhancementEntry { sign, outcome: o });
                            }
                            Err(e) => checks.push(error_report(&name, &e)),
                        }
                    }
                }
                None => checks.push(missing("enhancement", "metadata diagonals")),
            },
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!(
            "{} {} (residual {:.3e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.residual
        );
    }
    finish("check", cfg, input, pass, CheckResult { checks, enhancement }, out)
}

fn pipeline(input: &Input, cfg: &RunConfig) -> Result<DrinfeldOperators, Failure> {
    drinfeld_pipeline(&input.model, cfg.tolerance)
        .map(|(_, ops)| ops)
        .map_err(|e| Failure::Check(e.to_string()))
}

fn edge_labels(model: &FaceModel) -> Vec<String> {
    model.graph().edges().iter().map(|e| e.id.clone()).collect()
}

type Rows = Vec<Vec<C64Json>>;

#[derive(Serialize)]
struct DrinfeldResult {
    edges: Vec<String>,
    u1: Rows,
    u1inv: Rows,
    u2: Rows,
    u2inv: Rows,
    ribbon_target: Rows,
    mrib_target: Rows,
    commutation: CheckReport,
}

pub fn cmd_drinfeld(input: &Input, cfg: &RunConfig, out: Option<&Path>) -> Result<bool, Failure> {
    let ops = pipeline(input, cfg)?;
    let commutation = uu_commutation_check(&ops, input.model.operator(), cfg.tolerance);
    let pass = commutation.pass;
    let result = DrinfeldResult {
        edges: edge_labels(&input.model),
        u1: operator_rows(&ops.u1),
        u1inv: operator_rows(&ops.u1inv),
        u2: operator_rows(&ops.u2),
        u2inv: operator_rows(&ops.u2inv),
        ribbon_target: operator_rows(&ops.ribbon_target()),
        mrib_target: operator_rows(&ops.mrib_target()),
        commutation,
    };
    finish("drinfeld", cfg, input, pass, result, out)
}

#[derive(Serialize)]
struct QuotientRow {
    ideal: String,
    value: C64Json,
    vanishes: bool,
}

#[derive(Serialize)]
struct SolutionReport {
    sign: Sign,
    v: Rows,
    m: Rows,
    v_residual: f64,
    m_residual: f64,
    glf: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    mcrit: Option<CheckReport>,
    quotients: Vec<QuotientRow>,
    survives_quotient: bool,
}

#[derive(Serialize)]
struct RibbonResult {
    edges: Vec<String>,
    u1: Rows,
    u2inv: Rows,
    solutions: Vec<SolutionReport>,
    block_count: usize,
    edge_commutant_dimension: usize,
    exhaustive: bool,
    surviving_signs: Vec<Sign>,
}

pub fn cmd_ribbon(input: &Input, cfg: &RunConfig, out: Option<&Path>) -> Result<bool, Failure> {
    let tol = cfg.tolerance;
    let model = &input.model;
    let ops = pipeline(input, cfg)?;
    let pair = ribbon_solve(&ops, cfg.cluster_radius, tol).map_err(|e| Failure::Check(e.to_string()))?;
    let meta = input.metadata();
    let s2 = meta.map(|m| m.s2(model)).transpose().map_err(|e| Failure::Check(e.to_string()))?;
    let ideal = meta
        .map(|m| m.ideal_vectors(model))
        .transpose()
        .map_err(|e| Failure::Check(e.to_string()))?
        .unwrap_or_default();
    let mut pass = true;
    let mut solutions = Vec::new();
    for sol in pair.solutions() {
        let glf = check_glf_commutant(model, &sol.m, tol);
        let mcrit = s2.as_ref().map(|s| mcrit_check(&sol.m, s, tol));
        let quotients: Vec<QuotientRow> = ideal
            .iter()
            .map(|(name, v)| {
                let one = [(name.clone(), v.clone())];
                QuotientRow {
                    ideal: name.clone(),
                    value: ribbonlab::ribbon::evaluate_glf(&sol.m, v).into(),
                    vanishes: quotient_vanishing(&sol.m, &one, tol).pass,
                }
            })
            .collect();
        pass &= sol.v_residual < tol && sol.m_residual < tol && glf.pass;
        pass &= mcrit.as_ref().is_none_or(|r| r.pass);
        solutions.push(SolutionReport {
            sign: sol.sign,
            v: operator_rows(&sol.v),
            m: operator_rows(&sol.m),
            v_residual: sol.v_residual,
            m_residual: sol.m_residual,
            glf,
            mcrit,
            survives_quotient: quotients.iter().all(|q| q.vanishes),
            quotients,
        });
    }
    let surviving_signs = solutions.iter().filter(|s| s.survives_quotient).map(|s| s.sign).collect();
    let result = RibbonResult {
        edges: edge_labels(model),
        u1: operator_rows(&ops.u1),
        u2inv: operator_rows(&ops.u2inv),
        solutions,
        block_count: pair.block_count,
        edge_commutant_dimension: pair.edge_commutant_dimension,
        exhaustive: pair.exhaustive,
        surviving_signs,
    };
    finish("ribbon", cfg, input, pass, result, out)
}

pub struct InvariantOptions {
    pub sign: Sign,
    pub braid: String,
    pub strands: usize,
    pub markov_suite: bool,
    pub trials: usize,
}

#[derive(Serialize)]
struct InvariantResult {
    mrib: Sign,
    mrib_source: &'static str,
    mrib_diagonal: Vec<C64Json>,
    invariant: InvariantReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    markov: Option<CheckReport>,
}

/// Catalog diagonal when the model carries one, the computed `±M` otherwise.
fn select_mrib(input: &Input, sign: Sign, cfg: &RunConfig) -> Result<(EdgeOperator, &'static str), Failure> {
    if let Some(m) = input.metadata() {
        return m
            .m(&input.model, sign)
            .map(|g| (g, "metadata"))
            .map_err(|e| Failure::Check(e.to_string()));
    }
    let ops = pipeline(input, cfg)?;
    let pair = ribbon_solve(&ops, cfg.cluster_radius, cfg.tolerance).map_err(|e| Failure::Check(e.to_string()))?;
    Ok((pair.get(sign).m.clone(), "computed"))
}

pub fn cmd_invariant(
    input: &Input,
    opts: &InvariantOptions,
    cfg: &RunConfig,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let word = BraidWord::parse(&opts.braid, opts.strands).map_err(|e| Failure::Input(e.to_string()))?;
    let (m, source) = select_mrib(input, opts.sign, cfg)?;
    let model = &input.model;
    let mut eval = LinkEvaluator::new(model, &m, cfg.tolerance).map_err(|e| Failure::Check(e.to_string()))?;
    let invariant = eval.evaluate(&word).map_err(|e| Failure::Check(e.to_string()))?;
    let markov = if opts.markov_suite {
        Some(
            markov_move_suite(model, &m, &word, opts.trials, cfg.seed, cfg.tolerance)
                .map_err(|e| Failure::Check(e.to_string()))?,
        )
    } else {
        None
    };
    let pass = markov.as_ref().is_none_or(|r| r.pass);
    if let Some(v) = invariant.value() {
        eprintln!("normalized value {v}");
    }
    let result = InvariantResult {
        mrib: opts.sign,
        mrib_source: source,
        mrib_diagonal: to_json_vec(&m.diag()),
        invariant,
        markov,
    };
    finish("invariant", cfg, input, pass, result, out)
}

pub fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
