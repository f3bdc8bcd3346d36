//! Homogeneous primal-dual interior-point method with Nesterov–Todd scaling.
//!
//! The program `min ⟨c,x⟩ s.t. Ax = b, x ∈ K` and its dual
//! `max bᵀy s.t. Aᵀy + s = c, s ∈ K*` are embedded in the self-dual system
//!
//! ```text
//! A x − b τ = 0,   Aᵀy + s − c τ = 0,   bᵀy − ⟨c,x⟩ − κ = 0,   (x,s,τ,κ) ∈ K×K*×R₊×R₊
//! ```
//!
//! which always has an interior starting point. An infeasible-start Mehrotra
//! predictor-corrector drives the residuals and the complementarity measure to
//! zero together; in the limit either `τ > 0` (an optimal pair `x/τ, y/τ`) or
//! `κ > 0` (a Farkas certificate of primal or dual infeasibility).
//!
//! Free variables carry no complementarity and are kept in the Newton system
//! through a saddle-point block `[[M, A_f], [A_fᵀ, 0]]`.

use nalgebra::{DMatrix, DVector};

use super::program::{BlockKind, ConeProgram, HermVar, PsdVar, ScalarVar};
use crate::operator::HermitianOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    /// The primal constraints admit no point in the cone.
    Infeasible,
    /// The primal objective is unbounded below (dual infeasible).
    Unbounded,
    NumericalTrouble,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::NumericalTrouble => "numerical trouble",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Relative duality gap `|p − d| / (1 + |p|)` required for `Optimal`.
    pub gap_tol: f64,
    /// Relative primal and dual residual required for `Optimal`.
    pub feas_tol: f64,
    /// Tolerance on normalized Farkas certificates.
    pub infeas_tol: f64,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
    /// Once the tolerances above hold, keep iterating toward this level and
    /// return the best point seen.
    pub polish_tol: f64,
    pub max_polish_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            polish_tol: 1e-12,
            max_polish_iter: 8,
            infeas_tol: 1e-8,
            step_fraction: 0.98,
        }
    }
}

/// Value of one variable block.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockValue {
    Matrix(DMatrix<f64>),
    Vector(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub status: Status,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|primal − dual| / (1 + |primal|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    primal_point: Vec<BlockValue>,
    dual_slack: Vec<BlockValue>,
    multipliers: Vec<f64>,
}

impl ConeSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub fn primal_point(&self) -> &[BlockValue] {
        &self.primal_point
    }

    pub fn dual_slack(&self) -> &[BlockValue] {
        &self.dual_slack
    }

    /// Equality multipliers `y`; for `Infeasible` this is the Farkas ray.
    pub fn multipliers(&self) -> &[f64] {
        &self.multipliers
    }

    pub fn psd(&self, var: PsdVar) -> &DMatrix<f64> {
        match &self.primal_point[var.block] {
            BlockValue::Matrix(m) => m,
            BlockValue::Vector(_) => unreachable!("PSD handle on scalar block"),
        }
    }

    pub fn hermitian(&self, var: HermVar) -> HermitianOperator {
        match &self.primal_point[var.block] {
            BlockValue::Matrix(m) => super::embed::unembed(m),
            BlockValue::Vector(_) => unreachable!("Hermitian handle on scalar block"),
        }
    }

    /// Dual slack of a Hermitian block, normalized so that its pairing with
    /// the primal variable is `tr[S X]`.
    pub fn dual_hermitian(&self, var: HermVar) -> HermitianOperator {
        match &self.dual_slack[var.block] {
            BlockValue::Matrix(m) => super::embed::unembed(m).scale(2.0),
            BlockValue::Vector(_) => unreachable!("Hermitian handle on scalar block"),
        }
    }

    pub fn scalars(&self, var: ScalarVar) -> &[f64] {
        match &self.primal_point[var.block] {
            BlockValue::Vector(v) => v,
            BlockValue::Matrix(_) => unreachable!("scalar handle on PSD block"),
        }
    }

    pub fn scalar(&self, var: ScalarVar, index: usize) -> f64 {
        self.scalars(var)[index]
    }
}

/// Where a program block lives in the solver's storage.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Psd(usize),
    Lp(usize, usize),
    Free(usize, usize),
}

struct PsdData {
    n: usize,
    c: DMatrix<f64>,
    rows: Vec<(usize, DMatrix<f64>)>,
}

struct Compiled {
    m: usize,
    slots: Vec<Slot>,
    psd: Vec<PsdData>,
    lp_c: DVector<f64>,
    lp_a: DMatrix<f64>,
    free_c: DVector<f64>,
    free_a: DMatrix<f64>,
    b: DVector<f64>,
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

impl Compiled {
    fn new(p: &ConeProgram) -> Self {
        let m = p.constraints.len();
        let mut slots = Vec::with_capacity(p.blocks.len());
        let (mut npsd, mut nlp, mut nfree) = (0, 0, 0);
        let mut psd = Vec::new();
        for b in &p.blocks {
            match *b {
                BlockKind::Psd(n) => {
                    slots.push(Slot::Psd(npsd));
                    psd.push(PsdData {
                        n,
                        c: DMatrix::zeros(n, n),
                        rows: Vec::new(),
                    });
                    npsd += 1;
                }
                BlockKind::Nonneg(k) => {
                    slots.push(Slot::Lp(nlp, k));
                    nlp += k;
                }
                BlockKind::Free(k) => {
                    slots.push(Slot::Free(nfree, k));
                    nfree += k;
                }
            }
        }
        let mut lp_c = DVector::zeros(nlp);
        let mut free_c = DVector::zeros(nfree);
        let mut lp_a = DMatrix::zeros(m, nlp);
        let mut free_a = DMatrix::zeros(m, nfree);

        for (blk, mat) in &p.objective.matrix_terms {
            if let Slot::Psd(k) = slots[*blk] {
                psd[k].c += symmetrize(mat);
            }
        }
        for &(blk, idx, coef) in &p.objective.scalar_terms {
            match slots[blk] {
                Slot::Lp(off, _) => lp_c[off + idx] += coef,
                Slot::Free(off, _) => free_c[off + idx] += coef,
                Slot::Psd(_) => unreachable!(),
            }
        }
        for (row, con) in p.constraints.iter().enumerate() {
            let mut per_block: Vec<Option<DMatrix<f64>>> = vec![None; npsd];
            for (blk, mat) in &con.expr.matrix_terms {
                if let Slot::Psd(k) = slots[*blk] {
                    let s = symmetrize(mat);
                    per_block[k] = Some(match per_block[k].take() {
                        Some(acc) => acc + s,
                        None => s,
                    });
                }
            }
            for (k, mat) in per_block.into_iter().enumerate() {
                if let Some(mat) = mat {
                    if mat.iter().any(|x| *x != 0.0) {
                        psd[k].rows.push((row, mat));
                    }
                }
            }
            for &(blk, idx, coef) in &con.expr.scalar_terms {
                match slots[blk] {
                    Slot::Lp(off, _) => lp_a[(row, off + idx)] += coef,
                    Slot::Free(off, _) => free_a[(row, off + idx)] += coef,
                    Slot::Psd(_) => unreachable!(),
                }
            }
        }
        let b = DVector::from_iterator(m, p.constraints.iter().map(|c| c.rhs));
        Self {
            m,
            slots,
            psd,
            lp_c,
            lp_a,
            free_c,
            free_a,
            b,
        }
    }

    fn degree(&self) -> f64 {
        (self.psd.iter().map(|d| d.n).sum::<usize>() + self.lp_c.len() + 1) as f64
    }

    /// `A x` for the cone and free parts.
    fn apply(&self, xs: &[DMatrix<f64>], xl: &DVector<f64>, xf: &DVector<f64>) -> DVector<f64> {
        let mut out = &self.lp_a * xl + &self.free_a * xf;
        for (d, x) in self.psd.iter().zip(xs) {
            for (row, a) in &d.rows {
                out[*row] += a.dot(x);
            }
        }
        out
    }

    /// `Aᵀ y` restricted to the PSD blocks.
    fn adjoint_psd(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        self.psd
            .iter()
            .map(|d| {
                let mut acc = DMatrix::zeros(d.n, d.n);
                for (row, a) in &d.rows {
                    if y[*row] != 0.0 {
                        acc += a * y[*row];
                    }
                }
                acc
            })
            .collect()
    }

    fn objective(&self, xs: &[DMatrix<f64>], xl: &DVector<f64>, xf: &DVector<f64>) -> f64 {
        self.psd.iter().zip(xs).map(|(d, x)| d.c.dot(x)).sum::<f64>()
            + self.lp_c.dot(xl)
            + self.free_c.dot(xf)
    }

    fn c_norm(&self) -> f64 {
        let psd: f64 = self.psd.iter().map(|d| d.c.norm_squared()).sum();
        (psd + self.lp_c.norm_squared() + self.free_c.norm_squared()).sqrt()
    }
}

#[derive(Clone)]
struct Point {
    xs: Vec<DMatrix<f64>>,
    ss: Vec<DMatrix<f64>>,
    xl: DVector<f64>,
    sl: DVector<f64>,
    xf: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Residuals {
    rp: DVector<f64>,
    rd_psd: Vec<DMatrix<f64>>,
    rd_lp: DVector<f64>,
    rd_free: DVector<f64>,
    rg: f64,
}

/// Nesterov–Todd scaling of one PSD block: `Rᵀ S R = R⁻¹ X R⁻ᵀ = diag(λ)`.
struct NtScaling {
    r: DMatrix<f64>,
    rinv: DMatrix<f64>,
    lambda: DVector<f64>,
    w: DMatrix<f64>,
}

fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<NtScaling> {
    let lx = x.clone().cholesky()?.l();
    let ls = s.clone().cholesky()?.l();
    let svd = (ls.transpose() * &lx).svd(true, true);
    let u = svd.u?;
    let vt = svd.v_t?;
    let lambda = svd.singular_values;
    if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return None;
    }
    let inv_sqrt = lambda.map(|l| 1.0 / l.sqrt());
    let mut r = &lx * vt.transpose();
    for (j, f) in inv_sqrt.iter().enumerate() {
        r.column_mut(j).scale_mut(*f);
    }
    let mut rinv = u.transpose() * ls.transpose();
    for (i, f) in inv_sqrt.iter().enumerate() {
        rinv.row_mut(i).scale_mut(*f);
    }
    let w = &r * r.transpose();
    Some(NtScaling { r, rinv, lambda, w })
}

fn jordan(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    (a * b + b * a) * 0.5
}

/// Largest `α ≤ 1/0` such that `diag(λ) + α·d ⪰ 0`; `f64::INFINITY` if unrestricted.
fn max_step_scaled(lambda: &DVector<f64>, d: &DMatrix<f64>) -> f64 {
    let n = lambda.len();
    let inv = lambda.map(|l| 1.0 / l.sqrt());
    let scaled = DMatrix::from_fn(n, n, |i, j| d[(i, j)] * inv[i] * inv[j]);
    let scaled = symmetrize(&scaled);
    let min = scaled
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        -1.0 / min
    } else {
        f64::INFINITY
    }
}

fn max_step_vec(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    x.iter()
        .zip(dx.iter())
        .filter(|(_, d)| **d < 0.0)
        .map(|(v, d)| -v / d)
        .fold(f64::INFINITY, f64::min)
}

fn max_step_scalar(x: f64, dx: f64) -> f64 {
    if dx < 0.0 {
        -x / dx
    } else {
        f64::INFINITY
    }
}

enum Factor {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            Factor::Chol(c) => Some(c.solve(rhs)),
            Factor::Lu(l) => l.solve(rhs),
        }
    }
}

struct Direction {
    xs: Vec<DMatrix<f64>>,
    ss: Vec<DMatrix<f64>>,
    xl: DVector<f64>,
    sl: DVector<f64>,
    xf: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

/// Per-iteration linear-algebra state shared by predictor and corrector.
struct NewtonSystem<'a> {
    cp: &'a Compiled,
    scalings: Vec<NtScaling>,
    /// `x/s` for the LP block (`H⁻¹`).
    lp_hinv: DVector<f64>,
    factor: Factor,
    /// Solution of `K [p_y; p_f] = [A H⁻¹ c + b; c_f]`.
    p_y: DVector<f64>,
    p_f: DVector<f64>,
    dx1_psd: Vec<DMatrix<f64>>,
    dx1_lp: DVector<f64>,
}

impl<'a> NewtonSystem<'a> {
    fn new(cp: &'a Compiled, pt: &Point) -> Option<Self> {
        let scalings = pt
            .xs
            .iter()
            .zip(&pt.ss)
            .map(|(x, s)| nt_scaling(x, s))
            .collect::<Option<Vec<_>>>()?;
        let lp_hinv = pt.xl.component_div(&pt.sl);
        let m = cp.m;
        let nf = cp.free_c.len();

        let mut schur = DMatrix::<f64>::zeros(m, m);
        for (d, sc) in cp.psd.iter().zip(&scalings) {
            let images: Vec<DMatrix<f64>> =
                d.rows.iter().map(|(_, a)| &sc.w * a * &sc.w).collect();
            for (j, (rj, _)) in d.rows.iter().enumerate() {
                for (ri, ai) in d.rows.iter().take(j + 1) {
                    let v = ai.dot(&images[j]);
                    schur[(*ri, *rj)] += v;
                    if ri != rj {
                        schur[(*rj, *ri)] += v;
                    }
                }
            }
        }
        if !cp.lp_c.is_empty() {
            let mut scaled = cp.lp_a.clone();
            for (j, h) in lp_hinv.iter().enumerate() {
                scaled.column_mut(j).scale_mut(*h);
            }
            schur += scaled * cp.lp_a.transpose();
        }

        let factor = if nf == 0 {
            match schur.clone().cholesky() {
                Some(c) => Factor::Chol(c),
                None => Factor::Lu(schur.lu()),
            }
        } else {
            let mut k = DMatrix::zeros(m + nf, m + nf);
            k.view_mut((0, 0), (m, m)).copy_from(&schur);
            k.view_mut((0, m), (m, nf)).copy_from(&cp.free_a);
            k.view_mut((m, 0), (nf, m)).copy_from(&cp.free_a.transpose());
            Factor::Lu(k.lu())
        };

        let mut sys = Self {
            cp,
            scalings,
            lp_hinv,
            factor,
            p_y: DVector::zeros(m),
            p_f: DVector::zeros(nf),
            dx1_psd: Vec::new(),
            dx1_lp: DVector::zeros(0),
        };
        // K p = [A H⁻¹ c + b; c_f]
        let hinv_c_psd: Vec<DMatrix<f64>> = cp.psd.iter().map(|d| d.c.clone()).collect();
        let hinv_c_psd = sys.apply_hinv_psd(&hinv_c_psd);
        let hinv_c_lp = sys.lp_hinv.component_mul(&cp.lp_c);
        let f1 = cp.apply(&hinv_c_psd, &hinv_c_lp, &DVector::zeros(nf)) + &cp.b;
        let (p_y, p_f) = sys.solve_kkt(&f1, &cp.free_c)?;
        // dx1 = H⁻¹(Aᵀp − c)
        let atp = cp.adjoint_psd(&p_y);
        let dx1_psd: Vec<DMatrix<f64>> = atp.iter().zip(&cp.psd).map(|(a, d)| a - &d.c).collect();
        sys.dx1_psd = sys.apply_hinv_psd(&dx1_psd);
        sys.dx1_lp = sys
            .lp_hinv
            .component_mul(&(cp.lp_a.transpose() * &p_y - &cp.lp_c));
        sys.p_y = p_y;
        sys.p_f = p_f;
        Some(sys)
    }

    fn apply_hinv_psd(&self, ys: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
        ys.iter()
            .zip(&self.scalings)
            .map(|(y, sc)| &sc.w * y * &sc.w)
            .collect()
    }

    fn solve_kkt(&self, g1: &DVector<f64>, g2: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
        let m = self.cp.m;
        let nf = g2.len();
        let mut rhs = DVector::zeros(m + nf);
        rhs.rows_mut(0, m).copy_from(g1);
        rhs.rows_mut(m, nf).copy_from(g2);
        let sol = self.factor.solve(&rhs)?;
        if sol.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some((sol.rows(0, m).into_owned(), sol.rows(m, nf).into_owned()))
    }

    /// Solves the linearized system for a given complementarity right-hand side.
    ///
    /// `rc_*` are the right-hand sides of `ds + H dx = rc`, `r_tau` that of
    /// `κ dτ + τ dκ = r_tau`, and `eta` the residual reduction factor.
    fn direction(
        &self,
        pt: &Point,
        res: &Residuals,
        eta: f64,
        rc_psd: &[DMatrix<f64>],
        rc_lp: &DVector<f64>,
        r_tau: f64,
    ) -> Option<Direction> {
        let cp = self.cp;
        let nf = cp.free_c.len();
        // t = rc − η r_d
        let t_psd: Vec<DMatrix<f64>> = rc_psd
            .iter()
            .zip(&res.rd_psd)
            .map(|(rc, rd)| rc - rd * eta)
            .collect();
        let t_lp = rc_lp - &res.rd_lp * eta;
        let hinv_t_psd = self.apply_hinv_psd(&t_psd);
        let hinv_t_lp = self.lp_hinv.component_mul(&t_lp);
        let g1 = &res.rp * eta - cp.apply(&hinv_t_psd, &hinv_t_lp, &DVector::zeros(nf));
        let g2 = &res.rd_free * eta;
        let (q_y, q_f) = self.solve_kkt(&g1, &g2)?;

        let atq = cp.adjoint_psd(&q_y);
        let dx0_psd: Vec<DMatrix<f64>> = hinv_t_psd
            .iter()
            .zip(self.apply_hinv_psd(&atq))
            .map(|(a, b)| a + b)
            .collect();
        let dx0_lp = &hinv_t_lp + self.lp_hinv.component_mul(&(cp.lp_a.transpose() * &q_y));

        let c_dx0 = cp.objective(&dx0_psd, &dx0_lp, &q_f);
        let c_dx1 = cp.objective(&self.dx1_psd, &self.dx1_lp, &self.p_f);
        let num = -eta * res.rg - r_tau / pt.tau + cp.b.dot(&q_y) - c_dx0;
        let den = -pt.kappa / pt.tau - cp.b.dot(&self.p_y) + c_dx1;
        if den == 0.0 || !den.is_finite() {
            return None;
        }
        let dtau = num / den;
        let dy = &q_y + &self.p_y * dtau;
        let dxf = &q_f + &self.p_f * dtau;
        let dxs: Vec<DMatrix<f64>> = dx0_psd
            .iter()
            .zip(&self.dx1_psd)
            .map(|(a, b)| a + b * dtau)
            .collect();
        let dxl = &dx0_lp + &self.dx1_lp * dtau;
        let aty = cp.adjoint_psd(&dy);
        let dss: Vec<DMatrix<f64>> = res
            .rd_psd
            .iter()
            .zip(&aty)
            .zip(&cp.psd)
            .map(|((rd, at), d)| rd * eta - at + &d.c * dtau)
            .collect();
        let dsl = &res.rd_lp * eta - cp.lp_a.transpose() * &dy + &cp.lp_c * dtau;
        let dkappa = (r_tau - pt.kappa * dtau) / pt.tau;
        Some(Direction {
            xs: dxs,
            ss: dss,
            xl: dxl,
            sl: dsl,
            xf: dxf,
            y: dy,
            tau: dtau,
            kappa: dkappa,
        })
    }

    fn max_step(&self, pt: &Point, dir: &Direction) -> f64 {
        let mut alpha = f64::INFINITY;
        for (k, sc) in self.scalings.iter().enumerate() {
            let dx = &sc.rinv * &dir.xs[k] * sc.rinv.transpose();
            let ds = sc.r.transpose() * &dir.ss[k] * &sc.r;
            alpha = alpha
                .min(max_step_scaled(&sc.lambda, &dx))
                .min(max_step_scaled(&sc.lambda, &ds));
        }
        alpha = alpha
            .min(max_step_vec(&pt.xl, &dir.xl))
            .min(max_step_vec(&pt.sl, &dir.sl))
            .min(max_step_scalar(pt.tau, dir.tau))
            .min(max_step_scalar(pt.kappa, dir.kappa));
        alpha
    }
}

fn residuals(cp: &Compiled, pt: &Point) -> Residuals {
    let ax = cp.apply(&pt.xs, &pt.xl, &pt.xf);
    let rp = &cp.b * pt.tau - ax;
    let aty = cp.adjoint_psd(&pt.y);
    let rd_psd = cp
        .psd
        .iter()
        .zip(&aty)
        .zip(&pt.ss)
        .map(|((d, at), s)| &d.c * pt.tau - at - s)
        .collect();
    let rd_lp = &cp.lp_c * pt.tau - cp.lp_a.transpose() * &pt.y - &pt.sl;
    let rd_free = &cp.free_c * pt.tau - cp.free_a.transpose() * &pt.y;
    let cx = cp.objective(&pt.xs, &pt.xl, &pt.xf);
    let rg = pt.kappa - cp.b.dot(&pt.y) + cx;
    Residuals {
        rp,
        rd_psd,
        rd_lp,
        rd_free,
        rg,
    }
}

fn rd_norm(res: &Residuals) -> f64 {
    let psd: f64 = res.rd_psd.iter().map(|m| m.norm_squared()).sum();
    (psd + res.rd_lp.norm_squared() + res.rd_free.norm_squared()).sqrt()
}

fn complementarity(pt: &Point) -> f64 {
    pt.xs.iter().zip(&pt.ss).map(|(x, s)| x.dot(s)).sum::<f64>() + pt.xl.dot(&pt.sl) + pt.tau * pt.kappa
}

fn step(pt: &Point, dir: &Direction, alpha: f64) -> Point {
    Point {
        xs: pt.xs.iter().zip(&dir.xs).map(|(x, d)| symmetrize(&(x + d * alpha))).collect(),
        ss: pt.ss.iter().zip(&dir.ss).map(|(s, d)| symmetrize(&(s + d * alpha))).collect(),
        xl: &pt.xl + &dir.xl * alpha,
        sl: &pt.sl + &dir.sl * alpha,
        xf: &pt.xf + &dir.xf * alpha,
        y: &pt.y + &dir.y * alpha,
        tau: pt.tau + dir.tau * alpha,
        kappa: pt.kappa + dir.kappa * alpha,
    }
}

#[derive(Clone)]
struct Assessment {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pres: f64,
    dres: f64,
}

fn assess(cp: &Compiled, pt: &Point, res: &Residuals, offset: f64) -> Assessment {
    let cx = cp.objective(&pt.xs, &pt.xl, &pt.xf);
    let by = cp.b.dot(&pt.y);
    let pobj = cx / pt.tau + offset;
    let dobj = by / pt.tau + offset;
    Assessment {
        pobj,
        dobj,
        gap: (pobj - dobj).abs() / (1.0 + pobj.abs()),
        pres: res.rp.norm() / pt.tau / (1.0 + cp.b.norm()),
        dres: rd_norm(res) / pt.tau / (1.0 + cp.c_norm()),
    }
}

fn finish(cp: &Compiled, pt: &Point, status: Status, a: &Assessment, iterations: usize) -> ConeSolution {
    let scale = if status == Status::Optimal || status == Status::NumericalTrouble {
        1.0 / pt.tau
    } else {
        1.0
    };
    let mut primal_point = Vec::with_capacity(cp.slots.len());
    let mut dual_slack = Vec::with_capacity(cp.slots.len());
    for slot in &cp.slots {
        match *slot {
            Slot::Psd(k) => {
                primal_point.push(BlockValue::Matrix(&pt.xs[k] * scale));
                dual_slack.push(BlockValue::Matrix(&pt.ss[k] * scale));
            }
            Slot::Lp(off, len) => {
                primal_point.push(BlockValue::Vector(pt.xl.rows(off, len).iter().map(|v| v * scale).collect()));
                dual_slack.push(BlockValue::Vector(pt.sl.rows(off, len).iter().map(|v| v * scale).collect()));
            }
            Slot::Free(off, len) => {
                primal_point.push(BlockValue::Vector(pt.xf.rows(off, len).iter().map(|v| v * scale).collect()));
                dual_slack.push(BlockValue::Vector(vec![0.0; len]));
            }
        }
    }
    ConeSolution {
        status,
        primal_value: a.pobj,
        dual_value: a.dobj,
        gap: a.gap,
        primal_residual: a.pres,
        dual_residual: a.dres,
        iterations,
        primal_point,
        dual_slack,
        multipliers: pt.y.iter().map(|v| v * scale).collect(),
    }
}

/// Solves with default options.
pub fn solve(p: &ConeProgram) -> ConeSolution {
    solve_with(p, &SolverOptions::default())
}

pub fn solve_with(p: &ConeProgram, opts: &SolverOptions) -> ConeSolution {
    let cp = Compiled::new(p);
    let nu = cp.degree();
    let mut pt = Point {
        xs: cp.psd.iter().map(|d| DMatrix::identity(d.n, d.n)).collect(),
        ss: cp.psd.iter().map(|d| DMatrix::identity(d.n, d.n)).collect(),
        xl: DVector::from_element(cp.lp_c.len(), 1.0),
        sl: DVector::from_element(cp.lp_c.len(), 1.0),
        xf: DVector::zeros(cp.free_c.len()),
        y: DVector::zeros(cp.m),
        tau: 1.0,
        kappa: 1.0,
    };
    // best point meeting the acceptance tolerances, with its worst residual
    let mut best: Option<(Point, Assessment, usize, f64)> = None;
    let mut polished = 0;
    macro_rules! bail {
        ($status:expr, $a:expr, $iter:expr) => {
            return match &best {
                Some((bp, ba, bi, _)) => finish(&cp, bp, Status::Optimal, ba, *bi),
                None => finish(&cp, &pt, $status, $a, $iter),
            }
        };
    }
    for iter in 0..opts.max_iter {
        let res = residuals(&cp, &pt);
        let a = assess(&cp, &pt, &res, p.offset);
        if a.pres <= opts.feas_tol && a.dres <= opts.feas_tol && a.gap <= opts.gap_tol {
            let worst = a.pres.max(a.dres).max(a.gap);
            if worst <= opts.polish_tol {
                return finish(&cp, &pt, Status::Optimal, &a, iter);
            }
            if best.as_ref().is_none_or(|b| worst < b.3) {
                best = Some((pt.clone(), a.clone(), iter, worst));
            }
            polished += 1;
            if polished > opts.max_polish_iter {
                bail!(Status::Optimal, &a, iter);
            }
        }
        // Farkas certificates, normalized by the size of the ray
        let by = cp.b.dot(&pt.y);
        if best.is_none() && by > 0.0 {
            let aty = cp.adjoint_psd(&pt.y);
            let psd: f64 = aty.iter().zip(&pt.ss).map(|(at, s)| (at + s).norm_squared()).sum();
            let lp = (cp.lp_a.transpose() * &pt.y + &pt.sl).norm_squared();
            let fr = (cp.free_a.transpose() * &pt.y).norm_squared();
            if (psd + lp + fr).sqrt() <= opts.infeas_tol * by {
                return finish(&cp, &pt, Status::Infeasible, &a, iter);
            }
        }
        let cx = cp.objective(&pt.xs, &pt.xl, &pt.xf);
        if best.is_none() && cx < 0.0 {
            let ax = cp.apply(&pt.xs, &pt.xl, &pt.xf);
            if ax.norm() <= opts.infeas_tol * (-cx) {
                return finish(&cp, &pt, Status::Unbounded, &a, iter);
            }
        }

        let Some(sys) = NewtonSystem::new(&cp, &pt) else {
            bail!(Status::NumericalTrouble, &a, iter);
        };
        let mu = complementarity(&pt) / nu;

        // predictor: complementarity target 0, full residual reduction
        let rc_psd: Vec<DMatrix<f64>> = pt.ss.iter().map(|s| -s).collect();
        let rc_lp = -&pt.sl;
        let Some(aff) = sys.direction(&pt, &res, 1.0, &rc_psd, &rc_lp, -pt.tau * pt.kappa) else {
            bail!(Status::NumericalTrouble, &a, iter);
        };
        let alpha_aff = sys.max_step(&pt, &aff).min(1.0);
        let trial = step(&pt, &aff, alpha_aff);
        let mu_aff = complementarity(&trial) / nu;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector with second-order term
        let mut rc_psd = Vec::with_capacity(sys.scalings.len());
        for (k, sc) in sys.scalings.iter().enumerate() {
            let n = sc.lambda.len();
            let dx = &sc.rinv * &aff.xs[k] * sc.rinv.transpose();
            let ds = sc.r.transpose() * &aff.ss[k] * &sc.r;
            let corr = jordan(&dx, &ds);
            let r = DMatrix::from_fn(n, n, |i, j| {
                let target = if i == j { sigma * mu - sc.lambda[i] * sc.lambda[i] } else { 0.0 };
                target - corr[(i, j)]
            });
            let u = DMatrix::from_fn(n, n, |i, j| 2.0 * r[(i, j)] / (sc.lambda[i] + sc.lambda[j]));
            rc_psd.push(sc.rinv.transpose() * u * &sc.rinv);
        }
        let rc_lp = DVector::from_fn(cp.lp_c.len(), |j, _| {
            let r = sigma * mu - pt.xl[j] * pt.sl[j] - aff.xl[j] * aff.sl[j];
            r / pt.xl[j]
        });
        let r_tau = sigma * mu - pt.tau * pt.kappa - aff.tau * aff.kappa;
        let Some(dir) = sys.direction(&pt, &res, 1.0 - sigma, &rc_psd, &rc_lp, r_tau) else {
            bail!(Status::NumericalTrouble, &a, iter);
        };
        let alpha = (opts.step_fraction * sys.max_step(&pt, &dir)).min(1.0);
        if !(alpha > 1e-12) {
            bail!(Status::NumericalTrouble, &a, iter);
        }
        pt = step(&pt, &dir, alpha);
        // keep the embedding from drifting to a huge scale
        let norm = pt.tau + pt.kappa;
        if norm > 1e8 || norm < 1e-8 {
            let f = 1.0 / norm;
            for x in pt.xs.iter_mut().chain(pt.ss.iter_mut()) {
                *x *= f;
            }
            pt.xl *= f;
            pt.sl *= f;
            pt.xf *= f;
            pt.y *= f;
            pt.tau *= f;
            pt.kappa *= f;
        }
    }
    let res = residuals(&cp, &pt);
    let a = assess(&cp, &pt, &res, p.offset);
    bail!(Status::NumericalTrouble, &a, opts.max_iter);
}
