//! Dense primal-dual interior-point solver for small SDPs with one PSD
//! block, inequality/equality rows, and free scalar variables.
//!
//! The method is infeasible-start path following in the HKM scaling with a
//! Mehrotra predictor-corrector step. Inequality rows receive nonnegative
//! slacks that live in a diagonal (LP) cone next to the PSD block; free
//! variables are carried straight into the Schur/KKT system rather than
//! split into differences of nonnegatives. Everything is dense: the target
//! problems have a PSD block of order <= ~30 and at most a few hundred
//! rows, where Cholesky/LU on the Schur complement is the whole cost.
//!
//! Numerical safeguards: rows are normalized to unit Frobenius norm during
//! lowering (multipliers are unscaled on the way out), every KKT solve gets
//! two rounds of iterative refinement, and the best iterate seen (by worst
//! relative residual) is the one returned, so late-stage breakdown of the
//! Newton direction cannot spoil an already-converged answer.
//!
//! Determinism: fixed initialization, no randomized pivoting; identical
//! inputs produce the identical iterate sequence.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Sense of one constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    /// `<A, X> + a'u <= rhs` (gets a slack; its dual is nonnegative).
    Le,
    /// `<A, X> + a'u = rhs` (free dual).
    Eq,
}

/// One row: a symmetric coefficient matrix on the PSD block plus
/// coefficients on the free variables.
#[derive(Debug, Clone)]
pub struct SdpRow {
    pub a: DMatrix<f64>,
    pub free: Vec<f64>,
    pub sense: RowSense,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct SdpObjective {
    pub c_psd: DMatrix<f64>,
    pub c_free: Vec<f64>,
}

/// Maximization problem over (X psd, u free) subject to rows.
#[derive(Debug, Clone)]
pub struct SdpStandardForm {
    pub psd_dim: usize,
    pub num_free: usize,
    pub rows: Vec<SdpRow>,
    pub objective: SdpObjective,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub feas_tol: f64,
    pub gap_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            feas_tol: 1e-8,
            gap_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    NearOptimal,
    Infeasible,
    NumericalFailure,
}

/// Solver result in the caller's (maximization) convention.
#[derive(Debug, Clone)]
pub struct SdpResult {
    pub status: SolveStatus,
    /// Primal objective value of the maximization problem.
    pub objective: f64,
    pub x_psd: DMatrix<f64>,
    pub free: Vec<f64>,
    /// Per-row multipliers; nonnegative on `Le` rows, and
    /// `sum_i duals_i * rhs_i` equals the objective at optimality.
    pub duals: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub rel_gap: f64,
}

fn frob_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Largest alpha in (0, 1] with `M + alpha * dM` positive semidefinite,
/// shrunk by `tau`, computed through the eigenvalues of L^-1 dM L^-T.
fn max_step_psd(chol: &Cholesky<f64, Dyn>, dm: &DMatrix<f64>, tau: f64) -> f64 {
    let l = chol.l();
    let mut w = dm.clone();
    l.solve_lower_triangular_mut(&mut w);
    w.transpose_mut();
    l.solve_lower_triangular_mut(&mut w);
    symmetrize(&mut w);
    let eig = w.symmetric_eigenvalues();
    let lam_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if lam_min >= 0.0 {
        1.0
    } else {
        (tau * (-1.0 / lam_min)).min(1.0)
    }
}

fn max_step_vec(v: &DVector<f64>, dv: &DVector<f64>, tau: f64) -> f64 {
    let mut alpha = 1.0f64;
    for i in 0..v.len() {
        if dv[i] < 0.0 {
            alpha = alpha.min(tau * (-v[i] / dv[i]));
        }
    }
    alpha
}

struct Internal {
    n: usize,                  // PSD dim
    q: usize,                  // number of slacks (Le rows)
    p: usize,                  // number of free variables
    m: usize,                  // number of rows
    a: Vec<DMatrix<f64>>,      // PSD coefficients per row
    d: Vec<Vec<(usize, f64)>>, // slack coefficients per row (at most one)
    e: DMatrix<f64>,           // m x p free coefficients
    b: DVector<f64>,           // rhs
    c: DMatrix<f64>,           // PSD objective (minimization sign)
    cu: DVector<f64>,          // free objective (minimization sign)
    row_scale: Vec<f64>,       // stored row = original row / row_scale
    kept_rows: Vec<usize>,     // internal row -> original row index
    n_original_rows: usize,
    trivially_infeasible: bool,
}

/// Lowers the max problem to `min <C,X> + cu'u` with slacks for Le rows,
/// normalizing each row to roughly unit size. Rows with no coefficients at
/// all are removed here: a satisfiable one is dropped (its multiplier is
/// zero), an unsatisfiable one marks the problem infeasible outright.
fn lower(form: &SdpStandardForm) -> Result<Internal> {
    let n = form.psd_dim;
    let p = form.num_free;
    if form.rows.is_empty() {
        return Err(Error::InvalidSpec("no constraint rows".into()));
    }
    let mut trivially_infeasible = false;
    let mut kept_rows = Vec::new();
    let mut q = 0usize;
    let mut a = Vec::new();
    let mut d = Vec::new();
    let mut e_rows: Vec<Vec<f64>> = Vec::new();
    let mut b_vals = Vec::new();
    let mut row_scale = Vec::new();
    for (i, row) in form.rows.iter().enumerate() {
        if row.a.nrows() != n || row.a.ncols() != n {
            return Err(Error::InvalidSpec(format!(
                "row {i}: coefficient matrix is {}x{}, expected {n}x{n}",
                row.a.nrows(),
                row.a.ncols()
            )));
        }
        if row.free.len() != p {
            return Err(Error::InvalidSpec(format!(
                "row {i}: {} free coefficients, expected {p}",
                row.free.len()
            )));
        }
        let mut sym = row.a.clone();
        symmetrize(&mut sym);
        let norm_sq = sym.iter().map(|v| v * v).sum::<f64>()
            + row.free.iter().map(|v| v * v).sum::<f64>();
        if norm_sq == 0.0 {
            let ok = match row.sense {
                RowSense::Le => row.rhs >= 0.0,
                RowSense::Eq => row.rhs == 0.0,
            };
            if !ok {
                trivially_infeasible = true;
            }
            continue;
        }
        kept_rows.push(i);
        let scale = norm_sq.sqrt();
        row_scale.push(scale);
        sym /= scale;
        a.push(sym);
        let slots = match row.sense {
            RowSense::Le => {
                let slot = vec![(q, 1.0 / scale)];
                q += 1;
                slot
            }
            RowSense::Eq => Vec::new(),
        };
        d.push(slots);
        e_rows.push(row.free.iter().map(|v| v / scale).collect());
        b_vals.push(row.rhs / scale);
    }
    let m = kept_rows.len();
    if m == 0 && !trivially_infeasible {
        return Err(Error::InvalidSpec("all rows are empty".into()));
    }
    let mut e = DMatrix::zeros(m, p);
    for (i, er) in e_rows.iter().enumerate() {
        for j in 0..p {
            e[(i, j)] = er[j];
        }
    }
    let mut c = form.objective.c_psd.clone();
    symmetrize(&mut c);
    Ok(Internal {
        n,
        q,
        p,
        m,
        a,
        d,
        e,
        b: DVector::from_vec(b_vals),
        c: -c,
        cu: -DVector::from_vec(form.objective.c_free.clone()),
        row_scale,
        kept_rows,
        n_original_rows: form.rows.len(),
        trivially_infeasible,
    })
}

struct Dir {
    dx: DMatrix<f64>,
    dw: DVector<f64>,
    ds: DMatrix<f64>,
    dz: DVector<f64>,
    dy: DVector<f64>,
    du: DVector<f64>,
}

#[derive(Clone)]
struct Iterate {
    x: DMatrix<f64>,
    w: DVector<f64>,
    s: DMatrix<f64>,
    z: DVector<f64>,
    y: DVector<f64>,
    u: DVector<f64>,
}

struct Residuals {
    rp: DVector<f64>,
    rd: DMatrix<f64>,
    rz: DVector<f64>,
    rf: DVector<f64>,
    rel_p: f64,
    rel_d: f64,
    rel_gap: f64,
    mu: f64,
}

fn residuals(pr: &Internal, it: &Iterate, bnorm: f64, data_norm: f64) -> Residuals {
    let (m, p, q) = (pr.m, pr.p, pr.q);
    let mut rp = pr.b.clone();
    for i in 0..m {
        rp[i] -= frob_inner(&pr.a[i], &it.x);
        for &(slot, coef) in &pr.d[i] {
            rp[i] -= coef * it.w[slot];
        }
        for j in 0..p {
            rp[i] -= pr.e[(i, j)] * it.u[j];
        }
    }
    let mut rd = &pr.c - &it.s;
    for i in 0..m {
        rd -= &pr.a[i] * it.y[i];
    }
    let mut rz = DVector::<f64>::zeros(q);
    for slot in 0..q {
        rz[slot] = -it.z[slot];
    }
    for i in 0..m {
        for &(slot, coef) in &pr.d[i] {
            rz[slot] -= coef * it.y[i];
        }
    }
    let rf = &pr.cu - pr.e.transpose() * &it.y;

    let cone = (pr.n + q) as f64;
    let mu = (frob_inner(&it.x, &it.s) + it.w.dot(&it.z)) / cone;
    let pobj = frob_inner(&pr.c, &it.x) + pr.cu.dot(&it.u);
    let dobj = pr.b.dot(&it.y);
    let rz_max = if q > 0 { rz.amax() } else { 0.0 };
    let rf_max = if p > 0 { rf.amax() } else { 0.0 };
    Residuals {
        rel_p: rp.amax() / (1.0 + bnorm),
        rel_d: rd.amax().max(rz_max).max(rf_max) / (1.0 + data_norm),
        rel_gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
        mu,
        rp,
        rd,
        rz,
        rf,
    }
}

/// Factorization of the reduced Newton system over (dy, du): either a
/// Cholesky of the Schur matrix M plus a small dense Schur complement over
/// the free variables (preferred; valid when M is positive definite), or an
/// LU of the full augmented system as a fallback.
enum KktFactor {
    BlockChol {
        m_chol: Cholesky<f64, Dyn>,
        m_inv_e: DMatrix<f64>,
        free_chol: Option<Cholesky<f64, Dyn>>,
    },
    Augmented {
        lu: nalgebra::LU<f64, Dyn, Dyn>,
        kkt: DMatrix<f64>,
        m: usize,
        p: usize,
    },
}

impl KktFactor {
    fn build(mmat: DMatrix<f64>, e: &DMatrix<f64>) -> Option<KktFactor> {
        let m = mmat.nrows();
        let p = e.ncols();
        if let Some(m_chol) = mmat.clone().cholesky() {
            let mut m_inv_e = e.clone();
            for j in 0..p {
                let mut col = m_inv_e.column(j).into_owned();
                m_chol.solve_mut(&mut col);
                m_inv_e.set_column(j, &col);
            }
            let free_chol = if p > 0 {
                let schur = e.transpose() * &m_inv_e;
                match schur.cholesky() {
                    Some(c) => Some(c),
                    None => return Self::build_augmented(mmat, e, m, p),
                }
            } else {
                None
            };
            return Some(KktFactor::BlockChol { m_chol, m_inv_e, free_chol });
        }
        Self::build_augmented(mmat, e, m, p)
    }

    fn build_augmented(
        mmat: DMatrix<f64>,
        e: &DMatrix<f64>,
        m: usize,
        p: usize,
    ) -> Option<KktFactor> {
        let dim = m + p;
        let mut kkt = DMatrix::<f64>::zeros(dim, dim);
        kkt.view_mut((0, 0), (m, m)).copy_from(&mmat);
        kkt.view_mut((0, m), (m, p)).copy_from(e);
        kkt.view_mut((m, 0), (p, m)).copy_from(&e.transpose());
        let lu = kkt.clone().lu();
        Some(KktFactor::Augmented { lu, kkt, m, p })
    }

    /// Solves M dy + E du = h, E' dy = g.
    fn solve(&self, h: &DVector<f64>, g: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
        match self {
            KktFactor::BlockChol { m_chol, m_inv_e, free_chol } => {
                let t = m_chol.solve(h);
                let du = match free_chol {
                    Some(fc) => fc.solve(&(m_inv_e.transpose() * h - g)),
                    None => DVector::zeros(0),
                };
                let dy = if du.is_empty() { t } else { t - m_inv_e * &du };
                Some((dy, du))
            }
            KktFactor::Augmented { lu, kkt, m, p } => {
                let mut rhs = DVector::<f64>::zeros(m + p);
                rhs.rows_mut(0, *m).copy_from(h);
                rhs.rows_mut(*m, *p).copy_from(g);
                let mut sol = lu.solve(&rhs)?;
                // one round of refinement on the augmented system
                let resid = &rhs - kkt * &sol;
                if let Some(corr) = lu.solve(&resid) {
                    sol += corr;
                }
                Some((sol.rows(0, *m).into_owned(), sol.rows(*m, *p).into_owned()))
            }
        }
    }
}

/// Solves the SDP. See the module docs for the method.
pub fn solve_sdp(form: &SdpStandardForm, opts: &SolveOptions) -> Result<SdpResult> {
    let pr = lower(form)?;
    if pr.trivially_infeasible {
        return Ok(SdpResult {
            status: SolveStatus::Infeasible,
            objective: 0.0,
            x_psd: DMatrix::zeros(pr.n, pr.n),
            free: vec![0.0; pr.p],
            duals: vec![0.0; pr.n_original_rows],
            iterations: 0,
            primal_residual: f64::INFINITY,
            dual_residual: f64::INFINITY,
            rel_gap: f64::INFINITY,
        });
    }
    let (n, q, p, m) = (pr.n, pr.q, pr.p, pr.m);

    let bnorm = pr.b.amax().max(1.0);
    let data_norm = pr
        .a
        .iter()
        .map(|ai| ai.amax())
        .fold(pr.c.amax(), f64::max)
        .max(1.0);
    let xi_p = 10.0 * bnorm.max((n as f64).sqrt());
    let xi_d = 10.0 * data_norm.max((n as f64).sqrt());

    let mut it = Iterate {
        x: DMatrix::<f64>::identity(n, n) * xi_p,
        w: DVector::<f64>::from_element(q, xi_p),
        s: DMatrix::<f64>::identity(n, n) * xi_d,
        z: DVector::<f64>::from_element(q, xi_d),
        y: DVector::<f64>::zeros(m),
        u: DVector::<f64>::zeros(p),
    };

    let mut best = it.clone();
    let mut best_score = f64::INFINITY;
    let mut best_res = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut best_rel_p = f64::INFINITY;
    let mut stall = 0usize;
    let mut iterations = 0usize;
    let mut infeasible = false;
    let mut last_mu = xi_p * xi_d;

    for iter in 0..opts.max_iter {
        iterations = iter;
        let res = residuals(&pr, &it, bnorm, data_norm);

        // remember the best point seen
        let score = res.rel_p.max(res.rel_d).max(res.rel_gap);
        if score < best_score {
            best_score = score;
            best = it.clone();
            best_res = (res.rel_p, res.rel_d, res.rel_gap);
        }
        if res.rel_p < best_rel_p * 0.99 {
            best_rel_p = best_rel_p.min(res.rel_p);
            stall = 0;
        } else {
            best_rel_p = best_rel_p.min(res.rel_p);
            stall += 1;
        }

        if std::env::var("SDP_DEBUG").is_ok() {
            eprintln!(
                "iter {iter}: mu={:.3e} rp={:.3e} rd={:.3e} gap={:.3e}",
                res.mu, res.rel_p, res.rel_d, res.rel_gap
            );
        }
        if res.rel_p <= opts.feas_tol && res.rel_d <= opts.feas_tol && res.rel_gap <= opts.gap_tol
        {
            break;
        }
        // infeasibility: the primal residual never comes close to feasible
        // while complementarity either collapses or blows up along a dual
        // improving ray
        let mu0 = xi_p * xi_d;
        if stall >= 10 && best_rel_p > 1e-4 && (res.mu < 1e-6 * mu0 || res.mu > 1e6 * mu0) {
            infeasible = true;
            break;
        }
        if stall >= 30 {
            break;
        }
        last_mu = res.mu;

        let x_chol = match it.x.clone().cholesky() {
            Some(c) => c,
            None => break,
        };
        let s_chol = match it.s.clone().cholesky() {
            Some(c) => c,
            None => break,
        };
        let s_inv = s_chol.inverse();

        // HKM scaling operator W(M) = (X M S^-1 + S^-1 M X)/2
        let scale = |mmat: &DMatrix<f64>| -> DMatrix<f64> {
            let t = &it.x * mmat * &s_inv;
            let mut r = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    r[(i, j)] = 0.5 * (t[(i, j)] + t[(j, i)]);
                }
            }
            r
        };

        // Schur matrix over the rows
        let wa: Vec<DMatrix<f64>> = pr.a.iter().map(&scale).collect();
        let mut mmat = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let mut v = frob_inner(&pr.a[i], &wa[j]);
                for &(slot_i, ci) in &pr.d[i] {
                    for &(slot_j, cj) in &pr.d[j] {
                        if slot_i == slot_j {
                            v += ci * cj * it.w[slot_i] / it.z[slot_i];
                        }
                    }
                }
                mmat[(i, j)] = v;
                mmat[(j, i)] = v;
            }
        }
        let factor = match KktFactor::build(mmat, &pr.e) {
            Some(f) => f,
            None => break,
        };

        // one Newton solve for general right-hand sides, with full-system
        // iterative refinement against the true operators
        let newton = |rp_t: &DVector<f64>,
                      rd_t: &DMatrix<f64>,
                      rz_t: &DVector<f64>,
                      rf_t: &DVector<f64>,
                      rc_psd: &DMatrix<f64>,
                      rc_lp: &DVector<f64>|
         -> Option<(Dir, f64)> {
            let solve_once = |rp_t: &DVector<f64>,
                              rd_t: &DMatrix<f64>,
                              rz_t: &DVector<f64>,
                              rf_t: &DVector<f64>,
                              rc_psd: &DMatrix<f64>,
                              rc_lp: &DVector<f64>|
             -> Option<Dir> {
                let base = rc_psd - scale(rd_t);
                let mut h = DVector::<f64>::zeros(m);
                for i in 0..m {
                    let mut v = rp_t[i] - frob_inner(&pr.a[i], &base);
                    for &(slot, coef) in &pr.d[i] {
                        v -= coef
                            * (rc_lp[slot] / it.z[slot]
                                - (it.w[slot] / it.z[slot]) * rz_t[slot]);
                    }
                    h[i] = v;
                }
                let (dy, du) = factor.solve(&h, rf_t)?;
                let mut ds = rd_t.clone();
                for i in 0..m {
                    ds -= &pr.a[i] * dy[i];
                }
                let mut dx = rc_psd - scale(&ds);
                symmetrize(&mut dx);
                let mut dz = rz_t.clone();
                for i in 0..m {
                    for &(slot, coef) in &pr.d[i] {
                        dz[slot] -= coef * dy[i];
                    }
                }
                let mut dw = DVector::<f64>::zeros(q);
                for slot in 0..q {
                    dw[slot] = (rc_lp[slot] - it.w[slot] * dz[slot]) / it.z[slot];
                }
                Some(Dir { dx, dw, ds, dz, dy, du })
            };

            let mut dir = solve_once(rp_t, rd_t, rz_t, rf_t, rc_psd, rc_lp)?;
            let mut prev_err = f64::INFINITY;
            let mut final_err = 0.0;
            for _ in 0..8 {
                // true residuals of the primal, dual-free and LP rows
                let mut e1 = rp_t.clone();
                for i in 0..m {
                    e1[i] -= frob_inner(&pr.a[i], &dir.dx);
                    for &(slot, coef) in &pr.d[i] {
                        e1[i] -= coef * dir.dw[slot];
                    }
                    for j in 0..p {
                        e1[i] -= pr.e[(i, j)] * dir.du[j];
                    }
                }
                let e3 = rf_t - pr.e.transpose() * &dir.dy;
                let mut e5 = DVector::<f64>::zeros(q);
                for slot in 0..q {
                    e5[slot] = rc_lp[slot]
                        - it.z[slot] * dir.dw[slot]
                        - it.w[slot] * dir.dz[slot];
                }
                let err = e1.amax().max(if p > 0 { e3.amax() } else { 0.0 });
                final_err = err;
                if err < 1e-13 * (1.0 + bnorm) || err >= prev_err {
                    break;
                }
                prev_err = err;
                let zero_m = DMatrix::<f64>::zeros(n, n);
                let zero_q = DVector::<f64>::zeros(q);
                let corr = solve_once(&e1, &zero_m, &zero_q, &e3, &zero_m, &e5)?;
                dir.dx += corr.dx;
                dir.dw += corr.dw;
                dir.ds += corr.ds;
                dir.dz += corr.dz;
                dir.dy += corr.dy;
                dir.du += corr.du;
            }
            Some((dir, final_err))
        };

        // predictor
        let rc_aff = {
            let mut r = -it.x.clone();
            symmetrize(&mut r);
            r
        };
        let rc_lp_aff = DVector::from_iterator(q, (0..q).map(|i| -it.w[i] * it.z[i]));
        let (aff, aff_err) = match newton(&res.rp, &res.rd, &res.rz, &res.rf, &rc_aff, &rc_lp_aff)
        {
            Some(d) => d,
            None => break,
        };
        let ap_aff = max_step_psd(&x_chol, &aff.dx, 1.0).min(max_step_vec(&it.w, &aff.dw, 1.0));
        let ad_aff = max_step_psd(&s_chol, &aff.ds, 1.0).min(max_step_vec(&it.z, &aff.dz, 1.0));
        let a_aff = ap_aff.min(ad_aff);
        let cone = (n + q) as f64;
        let mu_aff = {
            let xa = &it.x + &aff.dx * a_aff;
            let sa = &it.s + &aff.ds * a_aff;
            let wa_ = &it.w + &aff.dw * a_aff;
            let za = &it.z + &aff.dz * a_aff;
            (frob_inner(&xa, &sa) + wa_.dot(&za)) / cone
        };
        let sigma = (mu_aff / res.mu).max(0.0).powi(3).min(1.0);
        let sigma_safe = sigma.clamp(0.1, 1.0);

        // corrector
        let rc_corr = {
            let t = &aff.dx * &aff.ds * &s_inv;
            let mut cross = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    cross[(i, j)] = 0.5 * (t[(i, j)] + t[(j, i)]);
                }
            }
            let mut r = &s_inv * (sigma * res.mu) - &it.x - cross;
            symmetrize(&mut r);
            r
        };
        let rc_lp_corr = DVector::from_iterator(
            q,
            (0..q).map(|i| sigma * res.mu - it.w[i] * it.z[i] - aff.dw[i] * aff.dz[i]),
        );
        // direction quality gate: a second-order corrector whose true
        // equation error rivals the residuals it should remove gets
        // replaced by a plain centering direction; if even that would
        // inject an order of magnitude more error than the current
        // residual scale, stepping is destructive and the run stops on the
        // best iterate seen
        let scale_now = (res.rel_p * (1.0 + bnorm)).max(res.mu);
        let err_budget = 0.5 * scale_now + 1e-13 * (1.0 + bnorm);
        let mut cand = newton(&res.rp, &res.rd, &res.rz, &res.rf, &rc_corr, &rc_lp_corr);
        if cand.as_ref().map_or(true, |(_, e)| *e > err_budget) {
            let rc_center = {
                let mut r = &s_inv * (sigma_safe * res.mu) - &it.x;
                symmetrize(&mut r);
                r
            };
            let rc_lp_center = DVector::from_iterator(
                q,
                (0..q).map(|i| sigma_safe * res.mu - it.w[i] * it.z[i]),
            );
            let center = newton(&res.rp, &res.rd, &res.rz, &res.rf, &rc_center, &rc_lp_center);
            cand = match (cand, center) {
                (Some((d1, e1)), Some((d2, e2))) => {
                    if e2 < e1 {
                        Some((d2, e2))
                    } else {
                        Some((d1, e1))
                    }
                }
                (a, b) => a.or(b),
            };
        }
        if std::env::var("SDP_DEBUG").is_ok() {
            if let Some((_, e)) = cand.as_ref() {
                eprintln!("    gate: dir_err={e:.3e} budget={err_budget:.3e} aff_err={aff_err:.3e}");
            }
        }
        let _ = aff_err;
        let dir = match cand {
            Some((d, e)) if e <= 10.0 * scale_now => d,
            _ => break,
        };

        let tau = if res.mu < 1e-5 { 0.99 } else { 0.95 };
        let ap = max_step_psd(&x_chol, &dir.dx, tau).min(max_step_vec(&it.w, &dir.dw, tau));
        let ad = max_step_psd(&s_chol, &dir.ds, tau).min(max_step_vec(&it.z, &dir.dz, tau));
        // a common step keeps the infeasibility residuals shrinking at
        // least as fast as the complementarity gap; separate steps let mu
        // run ahead of feasibility and wreck the late-stage conditioning
        let mut alpha = ap.min(ad);
        // never let complementarity undercut the primal residual scale by
        // more than 1e4: the Schur conditioning is governed by mu, and a
        // tiny mu with a large residual makes every later direction garbage
        let rp_scale = res.rel_p * (1.0 + bnorm);
        let floor = rp_scale / 1e4;
        if res.mu > floor && sigma < 1.0 {
            let cap = (1.0 - floor / res.mu) / (1.0 - sigma);
            if cap > 0.0 && cap < alpha {
                alpha = cap;
            }
        }

        it.x += &dir.dx * alpha;
        it.w += &dir.dw * alpha;
        it.s += &dir.ds * alpha;
        it.z += &dir.dz * alpha;
        it.y += &dir.dy * alpha;
        it.u += &dir.du * alpha;
        symmetrize(&mut it.x);
        symmetrize(&mut it.s);

        if alpha < 1e-10 {
            break;
        }
    }

    // classify and report the best iterate seen (including the last)
    let res = residuals(&pr, &it, bnorm, data_norm);
    let score = res.rel_p.max(res.rel_d).max(res.rel_gap);
    if score < best_score {
        best = it;
        best_res = (res.rel_p, res.rel_d, res.rel_gap);
    }
    let (rel_p, rel_d, rel_gap) = best_res;
    let mu0 = xi_p * xi_d;
    if !infeasible && rel_p > 1e-4 && (last_mu > 1e4 * mu0 || last_mu < 1e-8 * mu0) {
        infeasible = true;
    }
    let status = if infeasible {
        SolveStatus::Infeasible
    } else if rel_p <= opts.feas_tol && rel_d <= opts.feas_tol && rel_gap <= opts.gap_tol {
        SolveStatus::Optimal
    } else if rel_p <= 1e3 * opts.feas_tol
        && rel_d <= 1e3 * opts.feas_tol
        && rel_gap <= 1e3 * opts.gap_tol
    {
        SolveStatus::NearOptimal
    } else {
        SolveStatus::NumericalFailure
    };

    let objective = -(frob_inner(&pr.c, &best.x) + pr.cu.dot(&best.u));
    let mut duals = vec![0.0; pr.n_original_rows];
    for i in 0..m {
        duals[pr.kept_rows[i]] = -best.y[i] / pr.row_scale[i];
    }
    Ok(SdpResult {
        status,
        objective,
        x_psd: best.x,
        free: best.u.iter().copied().collect(),
        duals,
        iterations,
        primal_residual: rel_p,
        dual_residual: rel_d,
        rel_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        if i == j {
            m[(i, j)] = 1.0;
        } else {
            m[(i, j)] = 0.5;
            m[(j, i)] = 0.5;
        }
        m
    }

    #[test]
    fn maximize_trace_under_trace_budget() {
        // max tr(X) s.t. tr(X) <= 1, X psd (2x2) -> 1
        let form = SdpStandardForm {
            psd_dim: 2,
            num_free: 0,
            rows: vec![SdpRow {
                a: DMatrix::identity(2, 2),
                free: vec![],
                sense: RowSense::Le,
                rhs: 1.0,
            }],
            objective: SdpObjective {
                c_psd: DMatrix::identity(2, 2),
                c_free: vec![],
            },
        };
        let r = solve_sdp(&form, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 1.0).abs() < 1e-6, "got {}", r.objective);
        // dual reproduces the objective
        assert!((r.duals[0] * 1.0 - r.objective).abs() < 1e-6);
        assert!(r.duals[0] >= -1e-9);
    }

    #[test]
    fn largest_eigenvalue_via_free_variable() {
        // min t s.t. tI - A psd, A = diag(1, 3), encoded with X = tI - A
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0]));
        let mut rows = Vec::new();
        for i in 0..2 {
            for j in i..2 {
                rows.push(SdpRow {
                    a: e(2, i, j),
                    free: vec![if i == j { -1.0 } else { 0.0 }],
                    sense: RowSense::Eq,
                    rhs: -a[(i, j)],
                });
            }
        }
        let form = SdpStandardForm {
            psd_dim: 2,
            num_free: 1,
            rows,
            objective: SdpObjective {
                c_psd: DMatrix::zeros(2, 2),
                c_free: vec![-1.0],
            },
        };
        let r = solve_sdp(&form, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.free[0] - 3.0).abs() < 1e-6, "lambda_max = {}", r.free[0]);
    }

    #[test]
    fn detects_infeasible_system() {
        // x11 <= -1 with X psd is infeasible
        let form = SdpStandardForm {
            psd_dim: 1,
            num_free: 0,
            rows: vec![SdpRow {
                a: DMatrix::identity(1, 1),
                free: vec![],
                sense: RowSense::Le,
                rhs: -1.0,
            }],
            objective: SdpObjective {
                c_psd: DMatrix::identity(1, 1),
                c_free: vec![],
            },
        };
        let r = solve_sdp(&form, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
    }

    #[test]
    fn deterministic_iterates() {
        let form = SdpStandardForm {
            psd_dim: 3,
            num_free: 0,
            rows: vec![
                SdpRow {
                    a: DMatrix::identity(3, 3),
                    free: vec![],
                    sense: RowSense::Le,
                    rhs: 2.0,
                },
                SdpRow {
                    a: e(3, 0, 1),
                    free: vec![],
                    sense: RowSense::Eq,
                    rhs: 0.25,
                },
            ],
            objective: SdpObjective {
                c_psd: e(3, 0, 1),
                c_free: vec![],
            },
        };
        let r1 = solve_sdp(&form, &SolveOptions::default()).unwrap();
        let r2 = solve_sdp(&form, &SolveOptions::default()).unwrap();
        assert_eq!(r1.objective.to_bits(), r2.objective.to_bits());
        assert_eq!(r1.iterations, r2.iterations);
    }

    #[test]
    fn weak_duality_and_dual_multipliers() {
        let form = SdpStandardForm {
            psd_dim: 2,
            num_free: 0,
            rows: vec![
                SdpRow {
                    a: DMatrix::identity(2, 2),
                    free: vec![],
                    sense: RowSense::Le,
                    rhs: 1.0,
                },
                SdpRow {
                    a: DMatrix::identity(2, 2),
                    free: vec![],
                    sense: RowSense::Le,
                    rhs: 0.8,
                },
            ],
            objective: SdpObjective {
                c_psd: DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0])),
                c_free: vec![],
            },
        };
        let r = solve_sdp(&form, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 1.6).abs() < 1e-6);
        let dual_obj: f64 = r.duals[0] * 1.0 + r.duals[1] * 0.8;
        assert!((dual_obj - r.objective).abs() < 1e-6 * (1.0 + r.objective.abs()));
        assert!(r.duals.iter().all(|&d| d >= -1e-9));
    }
}
