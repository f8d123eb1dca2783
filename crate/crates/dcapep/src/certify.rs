//! Machine verification of the dual certificates behind the worst-case
//! bounds: the named multipliers from each proof, their nonnegativity on
//! the documented parameter region, and the completion-of-squares identity
//! that turns the weighted constraint aggregation into the bound.
//!
//! Identities are checked by randomized evaluation: both sides are
//! quadratic polynomials in the lifted vectors and affine in the scalar
//! variables, so agreement with margin at generic sample points (dimension
//! 3, seeded generator) certifies the identity. Each certificate is
//! evaluated from its *stored* multiplier values, so a corrupted
//! certificate fails loudly.
//!
//! Where the originally stated aggregation is not an exact identity, the
//! certificate ships in two labeled variants: `Printed` (verbatim, kept
//! for the residual report) and `Repaired` (the minimal edit that zeroes
//! the residual). The repairs in this crate:
//!
//! * [`TheoremCase::GapCaseII`]: the final lower-bound row must carry its
//!   `-(1/(2 L2)) ||g1^{N+1} - g2^{N+1}||^2` term (the printed aggregation
//!   uses the plain row, leaving a residual of exactly
//!   `B * ||g1^{N+1} - g2^{N+1}||^2 / (2 L2)`).
//! * [`TheoremCase::DecreaseBoundB2`]: the second-component row sum must
//!   stop at k = N-1; the printed upper limit N duplicates the separately
//!   written final row (reading its out-of-range g1^{N+2} as g2^{N+1}).

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::{FunctionClassParams, Smoothness};
use crate::pep::{PepKind, PepSolution, PepSpec};

/// Which proof's certificate to instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremCase {
    /// Gradient-gap bound, case L1 - mu2 <= L2, branch L1 >= L2.
    GapCaseIL1GeL2,
    /// Gradient-gap bound, case L1 - mu2 <= L2, branch L1 < L2 (mu1 = 0).
    GapCaseIL1LtL2,
    /// Gradient-gap bound, case L1 - mu2 > L2 (mu2 = 0).
    GapCaseII,
    /// Model-decrease bound, first factor (instantiated at mu1 = 0,
    /// L2 = inf, where the factor is proved).
    DecreaseBoundB1,
    /// Model-decrease bound, second factor (instantiated at mu2 = 0,
    /// L1 = inf).
    DecreaseBoundB2,
    /// One-step contraction factor under gradient domination.
    PlContraction,
}

impl TheoremCase {
    pub const ALL: [TheoremCase; 6] = [
        TheoremCase::GapCaseIL1GeL2,
        TheoremCase::GapCaseIL1LtL2,
        TheoremCase::GapCaseII,
        TheoremCase::DecreaseBoundB1,
        TheoremCase::DecreaseBoundB2,
        TheoremCase::PlContraction,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            TheoremCase::GapCaseIL1GeL2 => "gap-case-i-l1-ge-l2",
            TheoremCase::GapCaseIL1LtL2 => "gap-case-i-l1-lt-l2",
            TheoremCase::GapCaseII => "gap-case-ii",
            TheoremCase::DecreaseBoundB1 => "decrease-b1",
            TheoremCase::DecreaseBoundB2 => "decrease-b2",
            TheoremCase::PlContraction => "pl-contraction",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        TheoremCase::ALL
            .iter()
            .copied()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown certificate case {s:?}")))
    }

    /// Whether the verbatim aggregation needs a repair to be an identity.
    pub fn has_known_defect(&self) -> bool {
        matches!(self, TheoremCase::GapCaseII | TheoremCase::DecreaseBoundB2)
    }
}

/// Aggregation recipe variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Exactly as stated in the source derivation.
    Printed,
    /// Minimal edit that makes the identity exact (see the module docs).
    Repaired,
}

/// Parameter point of a certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertParams {
    pub params1: FunctionClassParams,
    pub params2: FunctionClassParams,
    pub n: usize,
    pub eta: Option<f64>,
}

impl CertParams {
    pub fn new(params1: FunctionClassParams, params2: FunctionClassParams, n: usize) -> Self {
        Self {
            params1,
            params2,
            n,
            eta: None,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }
}

/// Named dual multipliers of one proof at one parameter point.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub case: TheoremCase,
    pub variant: Variant,
    pub params: CertParams,
    pub multipliers: BTreeMap<String, f64>,
}

/// Result of a randomized identity check.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// Max over samples of |LHS - RHS| / (1 + |LHS|).
    pub max_residual: f64,
    pub samples: usize,
    /// Sign violations of the certificate's own multipliers.
    pub sign_violations: Vec<String>,
    /// 0-based index of the worst sample.
    pub worst_sample: usize,
}

impl IdentityReport {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn passed(&self) -> bool {
        self.max_residual <= Self::TOLERANCE && self.sign_violations.is_empty()
    }
}

/// One nonnegativity failure on a grid.
#[derive(Debug, Clone)]
pub struct SignViolation {
    pub params: CertParams,
    pub multiplier: String,
    pub value: f64,
}

fn finite(l: Smoothness, what: &str) -> Result<f64> {
    l.finite_value().ok_or_else(|| {
        Error::CaseMismatch(format!("{what} must be finite for this certificate case"))
    })
}

/// Evaluates the printed multiplier formulas at `params`, after validating
/// the case condition.
pub fn multipliers_for(case: TheoremCase, params: &CertParams) -> Result<Certificate> {
    let p1 = params.params1;
    let p2 = params.params2;
    let (mu1, mu2) = (p1.mu, p2.mu);
    let n = params.n;
    if n == 0 {
        return Err(Error::CaseMismatch("N must be positive".into()));
    }
    let mut m = BTreeMap::new();
    match case {
        TheoremCase::GapCaseIL1GeL2 => {
            let nf = n as f64;
            let l1 = finite(p1.l, "L1")?;
            let l2 = finite(p2.l, "L2")?;
            if l1 < l2 {
                return Err(Error::CaseMismatch(format!(
                    "branch requires L1 >= L2, got L1 = {l1}, L2 = {l2}"
                )));
            }
            if l1 - mu2 > l2 {
                return Err(Error::CaseMismatch(format!(
                    "case requires L1 - mu2 <= L2, got {} > {l2}",
                    l1 - mu2
                )));
            }
            let denom = nf * (l1 + l2 + mu1 * (l1 / l2 - 3.0)) + l2 * (l1 - mu1) / (l1 - mu2);
            let b = 2.0 * (l1 * l2 - mu1 * l2) / denom;
            m.insert("lambda".into(), 2.0 * (l1 * l2 - mu1 * (2.0 * l2 - l1)) / denom);
            m.insert("eta_1".into(), (l2 - mu1) / denom);
            m.insert("eta_mid".into(), (l1 * mu1 / l2 + (l1 + l2 - 3.0 * mu1)) / denom);
            m.insert(
                "eta_last".into(),
                (l1 * mu1 / l2 + l1 - 2.0 * mu1 + l2 * (l1 - mu1) / (l1 - mu2)) / denom,
            );
            m.insert("B".into(), b);
            m.insert("alpha_1".into(), mu1 * b / (2.0 * (l1 - mu1)));
            m.insert("beta_1".into(), mu1 * b / (2.0 * l2 * (l1 - mu1)));
            m.insert(
                "alpha_2".into(),
                (-mu1 * l2 * l2 - 2.0 * mu1 * mu2 * l2 + mu1 * l1 * l2 + mu1 * mu2 * l1
                    + mu2 * l1 * l2)
                    * b
                    / (2.0 * (l1 - mu1) * (l2 - mu2)),
            );
            m.insert(
                "beta_2".into(),
                (l1 * l2 * mu2 - 2.0 * mu1 * mu2 * l2 + mu1 * mu2 * l1 - mu1 * l2 * l2
                    + mu1 * l1 * l2)
                    * b
                    / (2.0 * l2 * (l1 - mu1) * (l2 - mu2)),
            );
        }
        TheoremCase::GapCaseIL1LtL2 => {
            let nf = n as f64;
            let l1 = finite(p1.l, "L1")?;
            let l2 = finite(p2.l, "L2")?;
            if l1 >= l2 {
                return Err(Error::CaseMismatch(format!(
                    "branch requires L1 < L2, got L1 = {l1}, L2 = {l2}"
                )));
            }
            if mu1 != 0.0 {
                return Err(Error::CaseMismatch(
                    "this branch is proved at mu1 = 0 (the bound does not depend on mu1)".into(),
                ));
            }
            let denom = (l1 + l2 + mu2 * (l2 / l1 - 3.0)) * nf + l1 * (l2 - mu2) / (l1 - mu2);
            let b = 2.0 * (l1 * l2 - mu2 * l1) / denom;
            m.insert("lambda".into(), 2.0 * (l1 * l2 - mu2 * (2.0 * l1 - l2)) / denom);
            m.insert("eta_1".into(), (l2 * (l1 + mu2) / l1 - 2.0 * mu2) / denom);
            m.insert(
                "eta_mid".into(),
                (l2 * (l1 + mu2) / l1 + (l1 - 3.0 * mu2)) / denom,
            );
            m.insert(
                "eta_last".into(),
                (l1 * (l2 - mu2) / (l1 - mu2) + l1 - mu2) / denom,
            );
            m.insert("B".into(), b);
            m.insert(
                "alpha_1".into(),
                mu2 * b * (1.0 - l1 / l2) / (2.0 * l1 * (1.0 - mu2 / l2)),
            );
            m.insert(
                "beta_1".into(),
                mu2 * b * (1.0 - l1 / l2) / (2.0 * l1 * l1 * (1.0 - mu2 / l2)),
            );
            m.insert("alpha_2".into(), mu2 * l1 * b / (2.0 * (l2 - mu2)));
            m.insert("beta_2".into(), mu2 * b / (2.0 * (l2 - mu2)));
        }
        TheoremCase::GapCaseII => {
            let nf = n as f64;
            let l1 = finite(p1.l, "L1")?;
            let l2 = finite(p2.l, "L2")?;
            if mu2 != 0.0 {
                return Err(Error::CaseMismatch(
                    "this case is proved at mu2 = 0 (the bound does not depend on mu2)".into(),
                ));
            }
            if l1 - mu2 <= l2 {
                return Err(Error::CaseMismatch(format!(
                    "case requires L1 - mu2 > L2, got {} <= {l2}",
                    l1 - mu2
                )));
            }
            let b = 2.0 * (l1 * l2 - mu1 * l2)
                / ((l1 + l2 + mu1 * (l1 / l2 - 3.0)) * nf + l1 - mu1);
            let eta_1 = (l2 - mu1) * b / (2.0 * l2 * (l1 - mu1));
            let eta_last =
                (2.0 * l1 * l2 + mu1 * l1 - 3.0 * mu1 * l2) * b / (2.0 * l2 * l2 * (l1 - mu1));
            let eta_mid = if n > 1 {
                (1.0 - eta_1 - eta_last) / (nf - 1.0)
            } else {
                0.0
            };
            m.insert(
                "lambda".into(),
                (l1 * l2 + mu1 * l1 - 2.0 * mu1 * l2) * b / (l2 * (l1 - mu1)),
            );
            m.insert("eta_1".into(), eta_1);
            m.insert("eta_mid".into(), eta_mid);
            m.insert("eta_last".into(), eta_last);
            m.insert("B".into(), b);
            m.insert("alpha_1".into(), mu1 * b / (2.0 * (l1 - mu1)));
            m.insert("beta_1".into(), mu1 * b / (2.0 * l2 * (l1 - mu1)));
            m.insert(
                "alpha_2".into(),
                mu1 * b * (1.0 - l2 / l1) / (2.0 * (1.0 - mu1 / l1)),
            );
            m.insert(
                "beta_2".into(),
                mu1 * b * (1.0 - l2 / l1) / (2.0 * l2 * (1.0 - mu1 / l1)),
            );
        }
        TheoremCase::DecreaseBoundB1 => {
            let nf = n as f64;
            let l1 = finite(p1.l, "L1")?;
            if mu1 != 0.0 || p2.l.is_finite() {
                return Err(Error::CaseMismatch(
                    "this factor is proved at mu1 = 0, L2 = inf".into(),
                ));
            }
            let b1 = l1 / (nf * (l1 + mu2));
            m.insert("B_1".into(), b1);
            m.insert("w_obj".into(), 1.0 / nf);
            m.insert("w_back".into(), 1.0 / nf - b1);
        }
        TheoremCase::DecreaseBoundB2 => {
            let nf = n as f64;
            let l2 = finite(p2.l, "L2")?;
            if mu2 != 0.0 || p1.l.is_finite() {
                return Err(Error::CaseMismatch(
                    "this factor is proved at mu2 = 0, L1 = inf".into(),
                ));
            }
            if l2 <= mu1 {
                return Err(Error::CaseMismatch(format!(
                    "hypothesis L2 > mu1 violated: L2 = {l2}, mu1 = {mu1}"
                )));
            }
            let b2 = l2 / (nf * (l2 + mu1) - mu1);
            let (w_mid, alpha) = if n > 1 {
                let w = (1.0 - b2) / (nf - 1.0);
                (w, w - b2)
            } else {
                (0.0, 0.0)
            };
            m.insert("B_2".into(), b2);
            m.insert("w_mid".into(), w_mid);
            m.insert("alpha".into(), alpha);
        }
        TheoremCase::PlContraction => {
            let eta = params.eta.ok_or_else(|| {
                Error::CaseMismatch("the contraction certificate requires eta".into())
            })?;
            if eta <= 0.0 || eta.is_nan() {
                return Err(Error::CaseMismatch(format!("eta must be positive, got {eta}")));
            }
            if !p1.l.is_finite() && !p2.l.is_finite() {
                return Err(Error::CaseMismatch(
                    "L1 or L2 must be finite for the contraction factor".into(),
                ));
            }
            if let Smoothness::Finite(l1) = p1.l {
                if eta > l1 {
                    return Err(Error::CaseMismatch(format!(
                        "eta = {eta} exceeds L1 = {l1}"
                    )));
                }
            }
            let a = eta * p1.l.recip();
            let b = eta * p2.l.recip();
            m.insert("rho".into(), (1.0 - a) / (1.0 + b));
            m.insert("w_f1".into(), 1.0 / (1.0 + b));
            m.insert("w_f2".into(), 1.0 / (1.0 + b));
            m.insert("w_pl_1".into(), a / (1.0 + b));
            m.insert("w_pl_2".into(), b / (1.0 + b));
        }
    }
    Ok(Certificate {
        case,
        variant: Variant::Printed,
        params: *params,
        multipliers: m,
    })
}

impl Certificate {
    /// The repaired variant; `None` where the printed aggregation already
    /// verifies (the multipliers themselves are never altered).
    pub fn repaired(&self) -> Option<Certificate> {
        if self.case.has_known_defect() {
            let mut c = self.clone();
            c.variant = Variant::Repaired;
            Some(c)
        } else {
            None
        }
    }

    /// The bound certified at excess `delta` (squared gap for the
    /// gradient-gap cases, model decrease for the decrease cases, objective
    /// ratio for the contraction case).
    pub fn bound_value(&self, delta: f64) -> f64 {
        match self.case {
            TheoremCase::GapCaseIL1GeL2
            | TheoremCase::GapCaseIL1LtL2
            | TheoremCase::GapCaseII => self.multipliers["B"] * delta,
            TheoremCase::DecreaseBoundB1 => self.multipliers["B_1"] * delta,
            TheoremCase::DecreaseBoundB2 => self.multipliers["B_2"] * delta,
            TheoremCase::PlContraction => self.multipliers["rho"],
        }
    }

    /// Multipliers that must be nonnegative, as `(name, value)` with
    /// derived combinations included.
    fn sign_conditions(&self) -> Vec<(String, f64)> {
        let m = &self.multipliers;
        match self.case {
            TheoremCase::GapCaseIL1GeL2
            | TheoremCase::GapCaseIL1LtL2
            | TheoremCase::GapCaseII => {
                let mut v: Vec<(String, f64)> = ["lambda", "eta_1", "eta_mid", "eta_last", "beta_1", "alpha_2"]
                    .iter()
                    .map(|k| (k.to_string(), m[*k]))
                    .collect();
                v.push(("lambda - B".into(), m["lambda"] - m["B"]));
                v
            }
            TheoremCase::DecreaseBoundB1 => vec![
                ("B_1".into(), m["B_1"]),
                ("w_obj".into(), m["w_obj"]),
                ("w_back".into(), m["w_back"]),
            ],
            TheoremCase::DecreaseBoundB2 => vec![
                ("B_2".into(), m["B_2"]),
                ("w_mid".into(), m["w_mid"]),
                ("alpha".into(), m["alpha"]),
            ],
            TheoremCase::PlContraction => ["rho", "w_f1", "w_f2", "w_pl_1", "w_pl_2"]
                .iter()
                .map(|k| (k.to_string(), m[*k]))
                .collect(),
        }
    }

    /// Names of sign conditions violated (strictly below `-1e-12`).
    pub fn sign_violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .sign_conditions()
            .into_iter()
            .filter(|(_, v)| *v < -1e-12)
            .map(|(k, v)| format!("{k} = {v}"))
            .collect();
        // objective-row weights must sum to one in the gradient-gap cases
        if matches!(
            self.case,
            TheoremCase::GapCaseIL1GeL2 | TheoremCase::GapCaseIL1LtL2 | TheoremCase::GapCaseII
        ) {
            let nf = self.params.n as f64;
            let sum = self.multipliers["eta_1"]
                + (nf - 1.0) * self.multipliers["eta_mid"]
                + self.multipliers["eta_last"];
            if (sum - 1.0).abs() > 1e-9 {
                out.push(format!("objective weights sum to {sum}, expected 1"));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// randomized identity evaluation
// ---------------------------------------------------------------------------

type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// One random assignment of all lifted vectors and scalar variables.
struct Sample {
    x: Vec<Vec3>,
    g: Vec<Vec3>,
    h: Vec3,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f_star: f64,
    delta: f64,
    ell: f64,
}

impl Sample {
    fn random(n: usize, rng: &mut ChaCha8Rng) -> Sample {
        let v3 = |rng: &mut ChaCha8Rng| -> Vec3 {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        };
        let x = (0..n + 2).map(|_| v3(rng)).collect();
        let g = (0..n + 2).map(|_| v3(rng)).collect();
        let h = v3(rng);
        let f1 = (0..n + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f2 = (0..n + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Sample {
            x,
            g,
            h,
            f1,
            f2,
            f_star: rng.gen_range(-1.0..1.0),
            delta: rng.gen_range(-1.0..1.0),
            ell: rng.gen_range(-1.0..1.0),
        }
    }

    #[cfg(test)]
    fn zero(n: usize) -> Sample {
        Sample {
            x: vec![[0.0; 3]; n + 2],
            g: vec![[0.0; 3]; n + 2],
            h: [0.0; 3],
            f1: vec![0.0; n + 2],
            f2: vec![0.0; n + 2],
            f_star: 0.0,
            delta: 0.0,
            ell: 0.0,
        }
    }

    /// g2^k under the stationarity substitution; k = N+1 is the fresh one.
    fn g2(&self, k: usize, n: usize) -> Vec3 {
        if k <= n {
            self.g[k + 1]
        } else {
            self.h
        }
    }
}

/// Interpolation bracket `f_i - f_j - <g_j, x_i - x_j> - Q_{mu,L}(i,j)`,
/// nonnegative for in-class points.
fn interp_bracket(
    params: &FunctionClassParams,
    xi: &Vec3,
    xj: &Vec3,
    gi: &Vec3,
    gj: &Vec3,
    fi: f64,
    fj: f64,
) -> f64 {
    let (cg, cx, cgx) = crate::analysis::interp_quadratic_coefficients(params);
    let dg = sub(gi, gj);
    let dx = sub(xi, xj);
    let q = cg * dot(&dg, &dg) + cx * dot(&dx, &dx) + cgx * dot(&dg, &dx);
    fi - fj - dot(gj, &dx) - q
}

/// `-(1/beta)||beta u - alpha v||^2` expanded so that `beta = 0` (with
/// `alpha = 0`) degenerates to zero instead of dividing by zero.
fn neg_square_term(beta: f64, u: &Vec3, alpha: f64, v: &Vec3) -> f64 {
    let ratio = if beta == 0.0 { 0.0 } else { alpha * alpha / beta };
    -(beta * dot(u, u) - 2.0 * alpha * dot(u, v) + ratio * dot(v, v))
}

/// LHS - RHS of the certificate identity at one sample.
fn identity_residual(cert: &Certificate, s: &Sample) -> f64 {
    let n = cert.params.n;
    let m = &cert.multipliers;
    let p1 = cert.params.params1;
    let p2 = cert.params.params2;

    match cert.case {
        TheoremCase::GapCaseIL1GeL2 | TheoremCase::GapCaseIL1LtL2 | TheoremCase::GapCaseII => {
            let (lambda, b) = (m["lambda"], m["B"]);
            let (eta_1, eta_mid, eta_last) = (m["eta_1"], m["eta_mid"], m["eta_last"]);
            let (a1, b1, a2, b2) = (m["alpha_1"], m["beta_1"], m["alpha_2"], m["beta_2"]);
            let u = b * s.delta;
            let l1 = p1.l.finite_value().expect("validated");
            let l2 = p2.l.finite_value().expect("validated");

            let mut lhs = s.ell - u;
            let dgk = |k: usize| sub(&s.g[k], &s.g[k + 1]);
            lhs += eta_1 * (dot(&dgk(1), &dgk(1)) - s.ell);
            for k in 2..=n {
                lhs += eta_mid * (dot(&dgk(k), &dgk(k)) - s.ell);
            }
            let dg_last = sub(&s.g[n + 1], &s.h);
            lhs += eta_last * (dot(&dg_last, &dg_last) - s.ell);
            lhs += b * (s.f_star - s.f1[1] + s.f2[1] + s.delta);
            // final lower-bound row; the gap coefficient is the case's
            // descent modulus S = min(L1 - mu2, L2)
            match cert.case {
                TheoremCase::GapCaseII => {
                    let gap_term = match cert.variant {
                        Variant::Printed => 0.0,
                        Variant::Repaired => dot(&dg_last, &dg_last) / (2.0 * l2),
                    };
                    lhs += b * (s.f1[n + 1] - s.f2[n + 1] - gap_term - s.f_star);
                }
                _ => {
                    lhs += b
                        * (s.f1[n + 1]
                            - s.f2[n + 1]
                            - dot(&dg_last, &dg_last) / (2.0 * (l1 - p2.mu))
                            - s.f_star);
                }
            }
            // forward component-1 rows (k, k+1), and the reverse family in
            // the L1 < L2 branch
            for k in 1..=n {
                lhs += b * interp_bracket(
                    &p1, &s.x[k], &s.x[k + 1], &s.g[k], &s.g[k + 1], s.f1[k], s.f1[k + 1],
                );
            }
            if cert.case == TheoremCase::GapCaseIL1LtL2 {
                for k in 1..=n {
                    lhs += (lambda - b)
                        * interp_bracket(
                            &p1, &s.x[k + 1], &s.x[k], &s.g[k + 1], &s.g[k], s.f1[k + 1], s.f1[k],
                        );
                    // the forward rows carry weight lambda in this branch
                    lhs += (lambda - b)
                        * interp_bracket(
                            &p1, &s.x[k], &s.x[k + 1], &s.g[k], &s.g[k + 1], s.f1[k], s.f1[k + 1],
                        );
                }
            }
            // component-2 rows
            match cert.case {
                TheoremCase::GapCaseIL1LtL2 => {
                    for k in 1..n {
                        lhs += b * interp_bracket(
                            &p2,
                            &s.x[k + 1],
                            &s.x[k],
                            &s.g2(k + 1, n),
                            &s.g2(k, n),
                            s.f2[k + 1],
                            s.f2[k],
                        );
                    }
                    lhs += b * interp_bracket(
                        &p2,
                        &s.x[n + 1],
                        &s.x[n],
                        &s.h,
                        &s.g2(n, n),
                        s.f2[n + 1],
                        s.f2[n],
                    );
                }
                _ => {
                    for k in 1..n {
                        lhs += lambda
                            * interp_bracket(
                                &p2,
                                &s.x[k + 1],
                                &s.x[k],
                                &s.g2(k + 1, n),
                                &s.g2(k, n),
                                s.f2[k + 1],
                                s.f2[k],
                            );
                        lhs += (lambda - b)
                            * interp_bracket(
                                &p2,
                                &s.x[k],
                                &s.x[k + 1],
                                &s.g2(k, n),
                                &s.g2(k + 1, n),
                                s.f2[k],
                                s.f2[k + 1],
                            );
                    }
                    lhs += (lambda - b)
                        * interp_bracket(
                            &p2,
                            &s.x[n],
                            &s.x[n + 1],
                            &s.g2(n, n),
                            &s.h,
                            s.f2[n],
                            s.f2[n + 1],
                        );
                    lhs += lambda
                        * interp_bracket(
                            &p2,
                            &s.x[n + 1],
                            &s.x[n],
                            &s.h,
                            &s.g2(n, n),
                            s.f2[n + 1],
                            s.f2[n],
                        );
                }
            }

            let mut rhs = 0.0;
            for k in 1..=n {
                let dg = dgk(k);
                let dx = sub(&s.x[k], &s.x[k + 1]);
                rhs += neg_square_term(b1, &dg, a1, &dx);
                let dgn = sub(&s.g2(k, n), &s.g2(k + 1, n));
                rhs += neg_square_term(a2, &dx, b2, &dgn);
            }
            lhs - rhs
        }
        TheoremCase::DecreaseBoundB1 => {
            let b1 = m["B_1"];
            let w_obj = m["w_obj"];
            let w_back = m["w_back"];
            let l1 = p1.l.finite_value().expect("validated");
            let mut lhs = s.ell - b1 * s.delta;
            for k in 1..=n {
                let dx = sub(&s.x[k], &s.x[k + 1]);
                lhs += w_obj * (s.f1[k] - s.f1[k + 1] - dot(&s.g[k + 1], &dx) - s.ell);
            }
            lhs += b1 * (s.f1[n + 1] - s.f2[n + 1] - s.f_star);
            lhs += b1 * (s.f_star - s.f1[1] + s.f2[1] + s.delta);
            for k in 1..=n {
                let dxr = sub(&s.x[k + 1], &s.x[k]);
                let dg = sub(&s.g[k + 1], &s.g[k]);
                lhs += w_back
                    * (s.f1[k + 1] - s.f1[k] - dot(&s.g[k], &dxr)
                        - dot(&dg, &dg) / (2.0 * l1));
                lhs += b1
                    * (s.f2[k + 1] - s.f2[k] - dot(&s.g[k + 1], &dxr)
                        - 0.5 * p2.mu * dot(&dxr, &dxr));
            }
            let mut rhs = 0.0;
            for k in 1..=n {
                let dx = sub(&s.x[k], &s.x[k + 1]);
                let dg = sub(&s.g[k], &s.g[k + 1]);
                let v = [
                    dx[0] - dg[0] / l1,
                    dx[1] - dg[1] / l1,
                    dx[2] - dg[2] / l1,
                ];
                rhs -= 0.5 * b1 * p2.mu * dot(&v, &v);
            }
            lhs - rhs
        }
        TheoremCase::DecreaseBoundB2 => {
            let b2 = m["B_2"];
            let alpha = m["alpha"];
            let w_mid = m["w_mid"];
            let l2 = p2.l.finite_value().expect("validated");
            let mut lhs = s.ell - b2 * s.delta;
            {
                let dx = sub(&s.x[1], &s.x[2]);
                lhs += b2 * (s.f1[1] - s.f1[2] - dot(&s.g[2], &dx) - s.ell);
            }
            lhs += b2 * (s.f1[n + 1] - s.f2[n + 1] - s.f_star);
            lhs += b2 * (s.f_star - s.f1[1] + s.f2[1] + s.delta);
            for k in 2..=n {
                let dx = sub(&s.x[k], &s.x[k + 1]);
                lhs += w_mid * (s.f1[k] - s.f1[k + 1] - dot(&s.g[k + 1], &dx) - s.ell);
                let dxr = sub(&s.x[k + 1], &s.x[k]);
                lhs += alpha
                    * (s.f1[k + 1] - s.f1[k] - dot(&s.g[k], &dxr)
                        - 0.5 * p1.mu * dot(&dxr, &dxr));
            }
            let last = match cert.variant {
                Variant::Printed => n,
                Variant::Repaired => n.saturating_sub(1),
            };
            for k in 1..=last {
                let dxr = sub(&s.x[k + 1], &s.x[k]);
                let dg = sub(&s.g2(k + 1, n), &s.g[k + 1]);
                lhs += b2
                    * (s.f2[k + 1] - s.f2[k] - dot(&s.g[k + 1], &dxr)
                        - dot(&dg, &dg) / (2.0 * l2));
            }
            {
                let dxr = sub(&s.x[n + 1], &s.x[n]);
                let dg = sub(&s.h, &s.g[n + 1]);
                lhs += b2
                    * (s.f2[n + 1] - s.f2[n] - dot(&s.g[n + 1], &dxr)
                        - dot(&dg, &dg) / (2.0 * l2));
            }
            let mut rhs = {
                let dg = sub(&s.h, &s.g[n + 1]);
                -b2 / (2.0 * l2) * dot(&dg, &dg)
            };
            for k in 2..=n {
                let dg = sub(&s.g[k], &s.g[k + 1]);
                let dx = sub(&s.x[k], &s.x[k + 1]);
                let c = alpha * l2 / b2;
                let v = [dg[0] - c * dx[0], dg[1] - c * dx[1], dg[2] - c * dx[2]];
                rhs -= b2 / (2.0 * l2) * dot(&v, &v);
            }
            lhs - rhs
        }
        TheoremCase::PlContraction => {
            let eta = cert.params.eta.expect("validated");
            let rho = m["rho"];
            let (w_f1, w_f2) = (m["w_f1"], m["w_f2"]);
            let (w3, w4) = (m["w_pl_1"], m["w_pl_2"]);
            let rl1 = p1.l.recip();
            let rl2 = p2.l.recip();
            let dg12 = sub(&s.g[1], &s.g[2]);
            let dg2h = sub(&s.g[2], &s.h);
            let dx = sub(&s.x[1], &s.x[2]);
            let mut lhs = (s.f1[2] - s.f2[2] - s.f_star) - rho * (s.f1[1] - s.f2[1] - s.f_star);
            lhs += w_f1
                * (s.f1[1] - s.f1[2] - dot(&s.g[2], &dx) - 0.5 * rl1 * dot(&dg12, &dg12));
            let dxr = sub(&s.x[2], &s.x[1]);
            lhs += w_f2
                * (s.f2[2] - s.f2[1] - dot(&s.g[2], &dxr) - 0.5 * rl2 * dot(&dg2h, &dg2h));
            lhs += w3 * (dot(&dg12, &dg12) / (2.0 * eta) - s.f1[1] + s.f2[1] + s.f_star);
            lhs += w4 * (dot(&dg2h, &dg2h) / (2.0 * eta) - s.f1[2] + s.f2[2] + s.f_star);
            lhs
        }
    }
}

/// Checks the completion-of-squares identity at `samples` random
/// assignments in dimension 3.
pub fn verify_identity(cert: &Certificate, samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut worst = 0usize;
    for i in 0..samples {
        let s = Sample::random(cert.params.n, &mut rng);
        let r = identity_residual(cert, &s);
        let scaled = r.abs() / (1.0 + identity_scale(cert, &s));
        if scaled > max_residual {
            max_residual = scaled;
            worst = i;
        }
    }
    IdentityReport {
        max_residual,
        samples,
        sign_violations: cert.sign_violations(),
        worst_sample: worst,
    }
}

/// |LHS| used to normalize residuals.
fn identity_scale(cert: &Certificate, s: &Sample) -> f64 {
    // the aggregation value itself; cheap proxy: |ell| + |delta| + O(1)
    let _ = cert;
    s.ell.abs() + s.delta.abs()
}

/// Evaluates sign conditions over a parameter grid. Every grid point must
/// satisfy the case condition, otherwise the grid is rejected.
pub fn verify_signs(case: TheoremCase, grid: &[CertParams]) -> Result<Vec<SignViolation>> {
    let mut out = Vec::new();
    for params in grid {
        let cert = multipliers_for(case, params)?;
        for (name, value) in cert.sign_conditions() {
            if value < -1e-12 {
                out.push(SignViolation {
                    params: *params,
                    multiplier: name,
                    value,
                });
            }
        }
    }
    Ok(out)
}

/// Outcome of checking a certificate against a solved PEP.
#[derive(Debug, Clone)]
pub struct CertifiedCheck {
    pub holds: bool,
    pub certificate_bound: f64,
    pub pep_value: f64,
    /// `(row label, solver multiplier, certificate multiplier)` for the
    /// rows with a named counterpart; informational only.
    pub dual_comparison: Vec<(String, f64, f64)>,
}

/// True when the PEP optimum is dominated by the certified bound (within
/// 1e-6 relative); also reports solver duals next to the certificate's
/// multipliers for tight instances.
pub fn certified_bound_check(
    cert: &Certificate,
    spec: &PepSpec,
    solution: &PepSolution,
) -> Result<CertifiedCheck> {
    let kind_ok = matches!(
        (cert.case, spec.kind),
        (
            TheoremCase::GapCaseIL1GeL2 | TheoremCase::GapCaseIL1LtL2 | TheoremCase::GapCaseII,
            PepKind::GradientGap
        ) | (
            TheoremCase::DecreaseBoundB1 | TheoremCase::DecreaseBoundB2,
            PepKind::ModelDecrease
        ) | (TheoremCase::PlContraction, PepKind::PlOneStep)
    );
    if !kind_ok {
        return Err(Error::CaseMismatch(format!(
            "certificate case {} does not govern PEP kind {}",
            cert.case.tag(),
            spec.kind.tag()
        )));
    }
    if cert.params.params1 != spec.params1
        || cert.params.params2 != spec.params2
        || cert.params.n != spec.n
        || cert.params.eta != spec.eta
    {
        return Err(Error::CaseMismatch(
            "certificate and PEP parameters differ".into(),
        ));
    }
    let bound = cert.bound_value(spec.delta);
    let holds = solution.objective_value <= bound + 1e-6 * (1.0 + bound.abs());

    let mut dual_comparison = Vec::new();
    let problem = crate::pep::build(spec)?;
    let mut named: Vec<(String, f64)> = Vec::new();
    match cert.case {
        TheoremCase::GapCaseIL1GeL2 | TheoremCase::GapCaseIL1LtL2 | TheoremCase::GapCaseII => {
            named.push(("obj_gap_1".into(), cert.multipliers["eta_1"]));
            for k in 2..=cert.params.n {
                named.push((format!("obj_gap_{k}"), cert.multipliers["eta_mid"]));
            }
            named.push((
                format!("obj_gap_{}", cert.params.n + 1),
                cert.multipliers["eta_last"],
            ));
            named.push(("delta".into(), cert.multipliers["B"]));
        }
        TheoremCase::DecreaseBoundB1 => {
            for k in 1..=cert.params.n {
                named.push((format!("obj_decrease_{k}"), cert.multipliers["w_obj"]));
            }
            named.push(("delta".into(), cert.multipliers["B_1"]));
        }
        TheoremCase::DecreaseBoundB2 => {
            named.push(("obj_decrease_1".into(), cert.multipliers["B_2"]));
            for k in 2..=cert.params.n {
                named.push((format!("obj_decrease_{k}"), cert.multipliers["w_mid"]));
            }
            named.push(("delta".into(), cert.multipliers["B_2"]));
        }
        TheoremCase::PlContraction => {
            named.push(("interp_f1_1_2".into(), cert.multipliers["w_f1"]));
            named.push(("interp_f2_2_1".into(), cert.multipliers["w_f2"]));
            named.push(("pl_1".into(), cert.multipliers["w_pl_1"]));
            named.push(("pl_2".into(), cert.multipliers["w_pl_2"]));
        }
    }
    for (label, cert_mult) in named {
        if let Some(idx) = problem.rows.iter().position(|r| r.label == label) {
            dual_comparison.push((label, solution.dual_multipliers[idx], cert_mult));
        }
    }
    Ok(CertifiedCheck {
        holds,
        certificate_bound: bound,
        pep_value: solution.objective_value,
        dual_comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(mu: f64, l: f64) -> FunctionClassParams {
        FunctionClassParams::smooth(mu, l).unwrap()
    }

    fn ns(mu: f64) -> FunctionClassParams {
        FunctionClassParams::nonsmooth(mu).unwrap()
    }

    #[test]
    fn bar_identity_holds_as_printed() {
        for (mu1, l1, mu2, l2, n) in [
            (0.0, 1.0, 0.0, 1.0, 3),
            (0.5, 2.0, 0.9, 1.5, 3),
            (0.5, 2.0, 0.9, 1.5, 1),
            (0.2, 3.0, 2.0, 2.5, 4),
            (0.3, 2.0, 0.5, 2.0, 2),
        ] {
            let params = CertParams::new(sm(mu1, l1), sm(mu2, l2), n);
            let cert = multipliers_for(TheoremCase::GapCaseIL1GeL2, &params).unwrap();
            let rep = verify_identity(&cert, 200, 42);
            assert!(rep.passed(), "mu1={mu1} l1={l1}: residual {}", rep.max_residual);
        }
    }

    #[test]
    fn hat_identity_holds_as_printed() {
        for (mu2, l1, l2, n) in [(0.0, 1.0, 2.0, 3), (0.4, 1.0, 2.0, 3), (0.7, 1.0, 1.5, 1)] {
            let params = CertParams::new(sm(0.0, l1), sm(mu2, l2), n);
            let cert = multipliers_for(TheoremCase::GapCaseIL1LtL2, &params).unwrap();
            let rep = verify_identity(&cert, 200, 42);
            assert!(rep.passed(), "mu2={mu2}: residual {}", rep.max_residual);
        }
    }

    #[test]
    fn tilde_identity_fails_printed_passes_repaired() {
        for (mu1, l1, l2, n) in [(0.0, 3.0, 1.0, 3), (0.5, 3.0, 1.0, 3), (0.5, 3.0, 2.0, 1)] {
            let params = CertParams::new(sm(mu1, l1), sm(0.0, l2), n);
            let printed = multipliers_for(TheoremCase::GapCaseII, &params).unwrap();
            let rep = verify_identity(&printed, 200, 42);
            assert!(!rep.passed(), "printed variant should fail (mu1={mu1})");
            let repaired = printed.repaired().unwrap();
            let rep = verify_identity(&repaired, 200, 42);
            assert!(rep.passed(), "repaired residual {} (mu1={mu1})", rep.max_residual);
        }
    }

    #[test]
    fn decrease_b1_identity_holds_as_printed() {
        for (mu2, l1, n) in [(1.0, 1.0, 3), (0.5, 2.0, 1), (2.0, 3.0, 5)] {
            let params = CertParams::new(sm(0.0, l1), ns(mu2), n);
            let cert = multipliers_for(TheoremCase::DecreaseBoundB1, &params).unwrap();
            let rep = verify_identity(&cert, 200, 7);
            assert!(rep.passed(), "mu2={mu2}: residual {}", rep.max_residual);
            assert!(cert.repaired().is_none());
        }
    }

    #[test]
    fn decrease_b2_identity_fails_printed_passes_repaired() {
        for (mu1, l2, n) in [(0.0, 1.0, 2), (0.5, 1.0, 3), (0.3, 2.0, 1), (0.9, 1.0, 5)] {
            let params = CertParams::new(ns(mu1), sm(0.0, l2), n);
            let printed = multipliers_for(TheoremCase::DecreaseBoundB2, &params).unwrap();
            let rep_printed = verify_identity(&printed, 200, 11);
            assert!(!rep_printed.passed(), "printed should fail (mu1={mu1}, n={n})");
            let repaired = printed.repaired().unwrap();
            let rep = verify_identity(&repaired, 200, 11);
            assert!(rep.passed(), "repaired residual {} (mu1={mu1})", rep.max_residual);
        }
    }

    #[test]
    fn contraction_identity_holds() {
        for (l1, l2, eta) in [
            (Smoothness::Finite(2.0), Smoothness::Finite(3.0), 1.0),
            (Smoothness::Finite(2.0), Smoothness::Infinite, 1.0),
            (Smoothness::Infinite, Smoothness::Finite(1.0), 1.0),
            (Smoothness::Finite(1.0), Smoothness::Finite(1.0), 0.5),
        ] {
            let params = CertParams::new(
                FunctionClassParams::new(0.0, l1).unwrap(),
                FunctionClassParams::new(0.0, l2).unwrap(),
                1,
            )
            .with_eta(eta);
            let cert = multipliers_for(TheoremCase::PlContraction, &params).unwrap();
            let rep = verify_identity(&cert, 200, 3);
            assert!(rep.passed(), "l1={l1:?}: residual {}", rep.max_residual);
        }
    }

    #[test]
    fn proof_formula_spot_values() {
        // first decrease factor at L1 = 1, mu2 = 1, N = 2
        let params = CertParams::new(sm(0.0, 1.0), ns(1.0), 2);
        let cert = multipliers_for(TheoremCase::DecreaseBoundB1, &params).unwrap();
        assert!((cert.multipliers["B_1"] - 0.25).abs() < 1e-15);
        // second factor at L2 = 1, mu1 = 0, N = 2: B_2 = 1/2, alpha = 0
        let params = CertParams::new(ns(0.0), sm(0.0, 1.0), 2);
        let cert = multipliers_for(TheoremCase::DecreaseBoundB2, &params).unwrap();
        assert!((cert.multipliers["B_2"] - 0.5).abs() < 1e-15);
        assert!(cert.multipliers["alpha"].abs() < 1e-15);
        // contraction weights at L1 = 2, L2 = inf, eta = 1
        let params = CertParams::new(sm(0.0, 2.0), ns(0.0), 1).with_eta(1.0);
        let cert = multipliers_for(TheoremCase::PlContraction, &params).unwrap();
        assert_eq!(cert.multipliers["w_f1"], 1.0);
        assert_eq!(cert.multipliers["w_pl_1"], 0.5);
        assert_eq!(cert.multipliers["w_pl_2"], 0.0);
    }

    #[test]
    fn zero_assignment_gives_zero_residual() {
        let params = CertParams::new(sm(0.3, 2.0), sm(0.9, 1.5), 3);
        let cert = multipliers_for(TheoremCase::GapCaseIL1GeL2, &params).unwrap();
        let s = Sample::zero(3);
        assert_eq!(identity_residual(&cert, &s), 0.0);
    }

    #[test]
    fn corrupted_multiplier_is_detected() {
        let params = CertParams::new(sm(0.5, 2.0), sm(0.9, 1.5), 3);
        let mut cert = multipliers_for(TheoremCase::GapCaseIL1GeL2, &params).unwrap();
        let v = cert.multipliers["lambda"];
        cert.multipliers.insert("lambda".into(), -v);
        let rep = verify_identity(&cert, 50, 42);
        assert!(!rep.passed());
        assert!(rep.max_residual > 1e-3);
    }

    #[test]
    fn sign_grids_are_clean() {
        // second decrease factor over the documented region
        let mut grid = Vec::new();
        for l2 in [0.5, 1.0, 2.0, 8.0] {
            for frac in [0.0, 0.1, 0.9] {
                for n in 2..=10 {
                    grid.push(CertParams::new(ns(frac * l2), sm(0.0, l2), n));
                }
            }
        }
        let v = verify_signs(TheoremCase::DecreaseBoundB2, &grid).unwrap();
        assert!(v.is_empty(), "{v:?}");

        // gap case-i branch L1 >= L2 with mu1 < L2
        let mut grid = Vec::new();
        for l2 in [1.0, 2.0] {
            for (l1, mu2) in [(l2, 0.0), (l2 * 1.2, 0.3 * l2), (l2 * 1.4, 0.5 * l2)] {
                for mu1_frac in [0.0, 0.3, 0.8] {
                    for n in 1..=5 {
                        let mu1 = mu1_frac * f64::min(l2, l1) * 0.9;
                        if l1 - mu2 <= l2 {
                            grid.push(CertParams::new(sm(mu1, l1), sm(mu2, l2), n));
                        }
                    }
                }
            }
        }
        let v = verify_signs(TheoremCase::GapCaseIL1GeL2, &grid).unwrap();
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn out_of_case_grid_point_rejected() {
        let grid = [CertParams::new(sm(0.0, 1.0), sm(0.0, 2.0), 2)]; // L1 < L2
        assert!(verify_signs(TheoremCase::GapCaseIL1GeL2, &grid).is_err());
    }

    #[test]
    fn certificate_bound_matches_closed_form() {
        use crate::bounds;
        use crate::bounds::{BoundRequest, Theorem};
        let delta = 1.7;
        let params = CertParams::new(sm(0.5, 2.0), sm(0.9, 1.5), 3);
        let cert = multipliers_for(TheoremCase::GapCaseIL1GeL2, &params).unwrap();
        let req = BoundRequest::new(Theorem::Thm31i, sm(0.5, 2.0), sm(0.9, 1.5), 3, delta)
            .unwrap();
        let b = bounds::gradient_gap_bound(&req).unwrap().value;
        assert!((cert.bound_value(delta) - b * b).abs() < 1e-12 * (1.0 + b * b));

        let params = CertParams::new(sm(0.0, 2.0), ns(1.0), 4);
        let cert = multipliers_for(TheoremCase::DecreaseBoundB1, &params).unwrap();
        let md = bounds::model_decrease_bound(&sm(0.0, 2.0), &ns(1.0), 4, delta).unwrap();
        // B_1 governs when it is the smaller factor
        assert!(cert.bound_value(delta) >= md - 1e-12);
    }
}
