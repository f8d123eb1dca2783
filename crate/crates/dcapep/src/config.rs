//! Instance configuration files: a small TOML schema selecting one of the
//! built-in DC families and its parameters.
//!
//! ```toml
//! family = "tightness"        # quadratic | tightness |
//!                             # nonsmooth-counterexample | pl-quadratic
//! # dimension = 1             # optional; checked against the family
//! # f_star = 0.0              # quadratic only: external lower bound
//! # start_point = [4.0]       # optional; families have natural defaults
//!
//! [params]
//! l1 = 8.0                    # tightness, pl-quadratic
//! n = 3                       # tightness
//! # q1 = [[2.0]]              # quadratic: Hessians and linear terms
//! # b1 = [0.0]
//! # q2 = [[0.0]]
//! # b2 = [1.0]
//! # mu1/l1/mu2/l2             # quadratic: optional explicit classes
//! # max_terms = 60            # nonsmooth-counterexample
//! # c = 0.5                   # pl-quadratic: curvature of f2
//! ```

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::instances::{
    make_nonsmooth_counterexample, make_pl_quadratic_instance, make_quadratic_instance,
    make_quadratic_instance_with, make_tightness_instance, DcInstance,
};
use crate::params::{FunctionClassParams, Smoothness};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub family: String,
    pub dimension: Option<usize>,
    pub f_star: Option<f64>,
    pub start_point: Option<Vec<f64>>,
    #[serde(default)]
    pub params: toml::Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticParams {
    q1: Vec<Vec<f64>>,
    b1: Option<Vec<f64>>,
    q2: Vec<Vec<f64>>,
    b2: Option<Vec<f64>>,
    mu1: Option<f64>,
    l1: Option<Smoothness>,
    mu2: Option<f64>,
    l2: Option<Smoothness>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TightnessParams {
    l1: f64,
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterexampleParams {
    max_terms: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlQuadraticParams {
    l1: f64,
    c: f64,
}

fn matrix(rows: &[Vec<f64>], name: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config(format!("{name} must be a square matrix")));
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    Ok(m)
}

fn parse_params<T: serde::de::DeserializeOwned>(table: &toml::Table) -> Result<T> {
    T::deserialize(table.clone())
        .map_err(|e| Error::Config(format!("invalid params table: {e}")))
}

impl InstanceConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid instance config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Builds the instance and its start point.
    pub fn build(&self) -> Result<(DcInstance, DVector<f64>)> {
        let (instance, default_start): (DcInstance, Option<DVector<f64>>) =
            match self.family.as_str() {
                "quadratic" => {
                    let p: QuadraticParams = parse_params(&self.params)?;
                    let q1 = matrix(&p.q1, "q1")?;
                    let q2 = matrix(&p.q2, "q2")?;
                    let n = q1.nrows();
                    let b1 = DVector::from_vec(p.b1.clone().unwrap_or_else(|| vec![0.0; n]));
                    let b2 = DVector::from_vec(p.b2.clone().unwrap_or_else(|| vec![0.0; n]));
                    let explicit = p.mu1.is_some()
                        || p.l1.is_some()
                        || p.mu2.is_some()
                        || p.l2.is_some()
                        || self.f_star.is_some();
                    let inst = if explicit {
                        let params1 = FunctionClassParams::new(
                            p.mu1.ok_or_else(|| missing("mu1"))?,
                            p.l1.ok_or_else(|| missing("l1"))?,
                        )?;
                        let params2 = FunctionClassParams::new(
                            p.mu2.ok_or_else(|| missing("mu2"))?,
                            p.l2.ok_or_else(|| missing("l2"))?,
                        )?;
                        let f_star = self.f_star.ok_or_else(|| missing("f_star"))?;
                        make_quadratic_instance_with(q1, b1, q2, b2, params1, params2, f_star)?
                    } else {
                        make_quadratic_instance(q1, b1, q2, b2)?
                    };
                    (inst, None)
                }
                "tightness" => {
                    let p: TightnessParams = parse_params(&self.params)?;
                    reject_f_star_override(self.f_star, 0.0)?;
                    let start = DVector::from_vec(vec![p.n as f64 + 1.0]);
                    (make_tightness_instance(p.l1, p.n)?, Some(start))
                }
                "nonsmooth-counterexample" => {
                    let p: CounterexampleParams = parse_params(&self.params)?;
                    reject_f_star_override(self.f_star, 0.0)?;
                    let inst = make_nonsmooth_counterexample(p.max_terms.unwrap_or(60))?;
                    (inst, Some(DVector::from_vec(vec![1.0])))
                }
                "pl-quadratic" => {
                    let p: PlQuadraticParams = parse_params(&self.params)?;
                    reject_f_star_override(self.f_star, 0.0)?;
                    let inst = make_pl_quadratic_instance(p.l1, p.c)?;
                    (inst, Some(DVector::from_vec(vec![1.0])))
                }
                other => {
                    return Err(Error::Config(format!(
                        "unknown family {other:?}; expected quadratic, tightness, \
                         nonsmooth-counterexample or pl-quadratic"
                    )))
                }
            };
        if let Some(d) = self.dimension {
            if d != instance.dimension() {
                return Err(Error::Config(format!(
                    "declared dimension {d} does not match the family's dimension {}",
                    instance.dimension()
                )));
            }
        }
        let start = match (&self.start_point, default_start) {
            (Some(v), _) => DVector::from_vec(v.clone()),
            (None, Some(s)) => s,
            (None, None) => {
                return Err(Error::Config(
                    "the quadratic family needs an explicit start_point".into(),
                ))
            }
        };
        if start.len() != instance.dimension() {
            return Err(Error::Config(format!(
                "start_point has dimension {}, instance expects {}",
                start.len(),
                instance.dimension()
            )));
        }
        Ok((instance, start))
    }
}

fn missing(field: &str) -> Error {
    Error::Config(format!(
        "explicit class parameters need {field} (give all of mu1, l1, mu2, l2, f_star)"
    ))
}

fn reject_f_star_override(given: Option<f64>, actual: f64) -> Result<()> {
    match given {
        None => Ok(()),
        Some(v) if v == actual => Ok(()),
        Some(v) => Err(Error::Config(format!(
            "this family has a fixed lower bound {actual}; cannot override with {v}"
        ))),
    }
}
