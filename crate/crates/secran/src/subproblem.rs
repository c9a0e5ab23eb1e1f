//! Log-barrier Newton solver for the convex surrogate subproblems.
//!
//! Each subproblem maximizes a concave function of a tuple of Hermitian
//! matrix variables (the per-UE transmit covariances and the quantization
//! noise covariance) subject to concave inequality constraints and
//! positive-semidefiniteness of every variable. Every function involved is
//! a sum of `weight * log2 det(base + map(sum_v coeff_v X_v))` terms and
//! an affine part, which covers the rate surrogates, the fronthaul
//! surrogates and the power constraints built by the optimizer.
//!
//! Matrices are parameterized by their real coordinates (n diagonal
//! entries plus re/im of each upper off-diagonal entry, n^2 reals per
//! n x n Hermitian variable); point-to-point compression restricts the
//! quantization-noise variable to the coordinates inside the per-RU
//! diagonal blocks. The solver is a textbook barrier method: damped
//! Newton centering on
//! `-objective + (1/t) * (constraint barriers + log-det barriers)`
//! along an increasing schedule of `t`, stopping once the duality-gap
//! bound `nu / t` drops below tolerance.

use num_complex::Complex64;

use crate::cmatrix::ComplexMatrix;
use crate::hermitian::{AntennaBlocks, Cholesky, HermitianMatrix, LN_2};

// ---------------------------------------------------------------------------
// Hermitian coordinate basis
// ---------------------------------------------------------------------------

/// One real coordinate of an n x n Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
struct BasisElem {
    i: usize,
    j: usize,
    imag: bool,
}

impl BasisElem {
    /// The basis matrix as sparse entries: one entry for a diagonal
    /// coordinate, a conjugate pair otherwise.
    #[inline]
    fn terms(&self) -> ([(usize, usize, Complex64); 2], usize) {
        if self.i == self.j {
            ([(self.i, self.i, Complex64::ONE), (0, 0, Complex64::ZERO)], 1)
        } else if !self.imag {
            (
                [
                    (self.i, self.j, Complex64::ONE),
                    (self.j, self.i, Complex64::ONE),
                ],
                2,
            )
        } else {
            (
                [
                    (self.i, self.j, Complex64::I),
                    (self.j, self.i, -Complex64::I),
                ],
                2,
            )
        }
    }
}

/// Full coordinate basis of Hermitian matrices of a fixed dimension.
#[derive(Clone, Debug)]
struct HermBasis {
    dim: usize,
    elems: Vec<BasisElem>,
}

impl HermBasis {
    fn new(dim: usize) -> Self {
        let mut elems = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in i..dim {
                elems.push(BasisElem { i, j, imag: false });
                if j > i {
                    elems.push(BasisElem { i, j, imag: true });
                }
            }
        }
        debug_assert_eq!(elems.len(), dim * dim);
        Self { dim, elems }
    }

    /// Coordinate value of `m` along element `e`.
    #[inline]
    fn extract(m: &HermitianMatrix, e: BasisElem) -> f64 {
        let z = m.get(e.i, e.j);
        if e.imag {
            z.im
        } else {
            z.re
        }
    }

    /// Directional derivative `tr(P B_e)` for a Hermitian gradient matrix.
    #[inline]
    fn grad_coord(p: &HermitianMatrix, e: BasisElem) -> f64 {
        let z = p.get(e.i, e.j);
        if e.i == e.j {
            z.re
        } else if e.imag {
            2.0 * z.im
        } else {
            2.0 * z.re
        }
    }

    /// Dense bilinear form `K[u v] = Re tr(A B_u A B_v)` over the full
    /// basis; the negated Hessian of `ln det` at a point whose inverse is
    /// `A`.
    fn quadratic_form(&self, a: &HermitianMatrix) -> Vec<f64> {
        let nb = self.elems.len();
        let mut k = vec![0.0; nb * nb];
        for (u, eu) in self.elems.iter().enumerate() {
            let (tu, lu) = eu.terms();
            for (v, ev) in self.elems.iter().enumerate().skip(u) {
                let (tv, lv) = ev.terms();
                let mut acc = Complex64::ZERO;
                for (ra, ca, alpha) in tu.iter().take(lu) {
                    for (rb, cb, beta) in tv.iter().take(lv) {
                        // tr(A E_{ra,ca} A E_{rb,cb}) = A[cb,ra] * A[ca,rb]
                        acc += alpha * beta * a.get(*cb, *ra) * a.get(*ca, *rb);
                    }
                }
                k[u * nb + v] = acc.re;
                k[v * nb + u] = acc.re;
            }
        }
        k
    }
}

// ---------------------------------------------------------------------------
// Variable layout
// ---------------------------------------------------------------------------

/// Structural pattern of one matrix variable.
#[derive(Clone, Debug)]
pub enum VarPattern {
    /// All n^2 Hermitian coordinates are free.
    Full,
    /// Only coordinates inside the per-RU diagonal blocks are free;
    /// off-block entries are pinned at zero.
    BlockDiagonal(AntennaBlocks),
}

#[derive(Clone, Debug)]
struct VarSpec {
    /// Indices into the full basis enumeration.
    free: Vec<usize>,
}

/// Packing of a tuple of same-dimension Hermitian variables into a flat
/// real coordinate vector.
#[derive(Clone, Debug)]
pub struct VarLayout {
    basis: HermBasis,
    vars: Vec<VarSpec>,
    offsets: Vec<usize>,
    total: usize,
}

impl VarLayout {
    pub fn new(dim: usize, patterns: &[VarPattern]) -> Self {
        let basis = HermBasis::new(dim);
        let mut vars = Vec::with_capacity(patterns.len());
        for pat in patterns {
            let free: Vec<usize> = match pat {
                VarPattern::Full => (0..basis.elems.len()).collect(),
                VarPattern::BlockDiagonal(blocks) => {
                    assert_eq!(blocks.total(), dim);
                    basis
                        .elems
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| {
                            (0..blocks.num_blocks()).any(|b| {
                                let r = blocks.range(b);
                                r.contains(&e.i) && r.contains(&e.j)
                            })
                        })
                        .map(|(idx, _)| idx)
                        .collect()
                }
            };
            vars.push(VarSpec { free });
        }
        let mut offsets = Vec::with_capacity(vars.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for v in &vars {
            acc += v.free.len();
            offsets.push(acc);
        }
        Self {
            basis,
            vars,
            offsets,
            total: acc,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn total_coords(&self) -> usize {
        self.total
    }

    pub fn pack(&self, mats: &[HermitianMatrix]) -> Vec<f64> {
        assert_eq!(mats.len(), self.vars.len());
        let mut x = Vec::with_capacity(self.total);
        for (m, v) in mats.iter().zip(&self.vars) {
            assert_eq!(m.dim(), self.basis.dim);
            for &e in &v.free {
                x.push(HermBasis::extract(m, self.basis.elems[e]));
            }
        }
        x
    }

    pub fn unpack(&self, x: &[f64]) -> Vec<HermitianMatrix> {
        assert_eq!(x.len(), self.total);
        let mut out = Vec::with_capacity(self.vars.len());
        for (vi, v) in self.vars.iter().enumerate() {
            let mut m = HermitianMatrix::zeros(self.basis.dim);
            for (slot, &e) in v.free.iter().enumerate() {
                let elem = self.basis.elems[e];
                let val = x[self.offsets[vi] + slot];
                let cur = m.get(elem.i, elem.j);
                let next = if elem.i == elem.j {
                    Complex64::new(val, 0.0)
                } else if elem.imag {
                    Complex64::new(cur.re, val)
                } else {
                    Complex64::new(val, cur.im)
                };
                m.set(elem.i, elem.j, next);
            }
            out.push(m);
        }
        out
    }

    /// Adds `scale * (coordinate gradient of the Hermitian matrix p)` into
    /// the slice of variable `vi`.
    pub(crate) fn scatter_grad(&self, vi: usize, p: &HermitianMatrix, scale: f64, out: &mut [f64]) {
        let off = self.offsets[vi];
        for (slot, &e) in self.vars[vi].free.iter().enumerate() {
            out[off + slot] += scale * HermBasis::grad_coord(p, self.basis.elems[e]);
        }
    }

    /// Adds `scale * K` (full-basis quadratic form) into the Hessian block
    /// of variables `(v1, v2)`.
    fn scatter_hess(&self, v1: usize, v2: usize, k: &[f64], scale: f64, hess: &mut [f64]) {
        let nb = self.basis.elems.len();
        let (o1, o2) = (self.offsets[v1], self.offsets[v2]);
        for (s1, &e1) in self.vars[v1].free.iter().enumerate() {
            let row = (o1 + s1) * self.total;
            let krow = e1 * nb;
            for (s2, &e2) in self.vars[v2].free.iter().enumerate() {
                hess[row + o2 + s2] += scale * k[krow + e2];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Function terms
// ---------------------------------------------------------------------------

/// How the combined variable matrix enters a log-det term.
#[derive(Clone, Debug)]
pub enum CongruenceMap {
    /// `M = base + H Y H†` for a rectangular channel map `H`.
    Channel(ComplexMatrix),
    /// `M = base + Y[idx, idx]` (principal submatrix selection).
    Principal(Vec<usize>),
}

/// `weight * log2 det(base + map(sum_v coeff_v X_v))`.
#[derive(Clone, Debug)]
pub struct LogDetTerm {
    pub weight: f64,
    pub base: HermitianMatrix,
    pub map: CongruenceMap,
    pub coeffs: Vec<f64>,
}

impl LogDetTerm {
    fn inner_matrix(&self, mats: &[HermitianMatrix], dim: usize) -> HermitianMatrix {
        let mut y = HermitianMatrix::zeros(dim);
        for (c, m) in self.coeffs.iter().zip(mats) {
            if *c == 1.0 {
                y = y.add(m);
            } else if *c != 0.0 {
                y = y.add(&m.scale(*c));
            }
        }
        match &self.map {
            CongruenceMap::Channel(h) => h.congruence(&y).add(&self.base),
            CongruenceMap::Principal(idx) => {
                y.principal(idx).expect("valid selection").add(&self.base)
            }
        }
    }

    /// ln-det (nats, unweighted), or `None` outside the PD domain.
    fn ln_det(&self, mats: &[HermitianMatrix], dim: usize) -> Option<f64> {
        Cholesky::factor(&self.inner_matrix(mats, dim)).map(|c| c.ln_det())
    }

    /// ln-det plus the gradient matrix pulled back into the variable
    /// space: `A = map†(M^{-1})`, so that `d ln det = tr(A dY)`.
    fn ln_det_and_gradient(
        &self,
        mats: &[HermitianMatrix],
        dim: usize,
    ) -> Option<(f64, HermitianMatrix)> {
        let m = self.inner_matrix(mats, dim);
        let chol = Cholesky::factor(&m)?;
        let lndet = chol.ln_det();
        let minv = chol.inverse();
        let a = match &self.map {
            CongruenceMap::Channel(h) => h.adjoint().congruence(&minv),
            CongruenceMap::Principal(idx) => HermitianMatrix::embed(&minv, dim, idx),
        };
        Some((lndet, a))
    }
}

/// Affine-plus-log-dets scalar function of the variable tuple.
#[derive(Clone, Debug, Default)]
pub struct ScalarFn {
    pub constant: f64,
    /// Dense coordinate gradient of the affine part.
    pub linear: Vec<f64>,
    pub logdets: Vec<LogDetTerm>,
}

/// Per-evaluation data of a `ScalarFn`: value, own coordinate gradient and
/// the log-det curvature matrices (for the Hessian assembly).
struct FnEval {
    value: f64,
    grad: Vec<f64>,
    /// One `(weight_bits, coeffs, gradient-matrix)` triple per log-det
    /// term; the term's Hessian is `-(weight_bits) K(A)` scattered over
    /// the variable pairs.
    curvature: Vec<(f64, Vec<f64>, HermitianMatrix)>,
}

impl ScalarFn {
    pub fn value(&self, layout: &VarLayout, x: &[f64], mats: &[HermitianMatrix]) -> Option<f64> {
        let mut acc = self.constant;
        for (g, xi) in self.linear.iter().zip(x) {
            acc += g * xi;
        }
        for term in &self.logdets {
            acc += term.weight * term.ln_det(mats, layout.dim())? / LN_2;
        }
        Some(acc)
    }

    fn eval(&self, layout: &VarLayout, x: &[f64], mats: &[HermitianMatrix]) -> Option<FnEval> {
        let mut value = self.constant;
        let mut grad = vec![0.0; layout.total_coords()];
        for (u, g) in self.linear.iter().enumerate() {
            value += g * x[u];
            grad[u] += g;
        }
        let mut curvature = Vec::with_capacity(self.logdets.len());
        for term in &self.logdets {
            let (lndet, a) = term.ln_det_and_gradient(mats, layout.dim())?;
            let w_bits = term.weight / LN_2;
            value += term.weight * lndet / LN_2;
            for (vi, &c) in term.coeffs.iter().enumerate() {
                if c != 0.0 {
                    layout.scatter_grad(vi, &a, w_bits * c, &mut grad);
                }
            }
            curvature.push((w_bits, term.coeffs.clone(), a));
        }
        Some(FnEval {
            value,
            grad,
            curvature,
        })
    }
}

impl FnEval {
    /// Adds `scale * (Hessian of the function)` into `hess`.
    fn add_scaled_hessian(&self, layout: &VarLayout, scale: f64, hess: &mut [f64]) {
        for (w_bits, coeffs, a) in &self.curvature {
            let k = layout.basis.quadratic_form(a);
            let s = -w_bits * scale;
            for (v1, &c1) in coeffs.iter().enumerate() {
                if c1 == 0.0 {
                    continue;
                }
                for (v2, &c2) in coeffs.iter().enumerate() {
                    if c2 == 0.0 {
                        continue;
                    }
                    layout.scatter_hess(v1, v2, &k, s * c1 * c2, hess);
                }
            }
        }
    }
}

/// Maximize `objective` over PSD variables subject to every constraint
/// staying nonnegative.
#[derive(Clone, Debug)]
pub struct Problem {
    pub layout: VarLayout,
    pub objective: ScalarFn,
    pub constraints: Vec<ScalarFn>,
}

impl Problem {
    /// Exact objective value at packed point `x` (None outside the domain
    /// of the log-det terms).
    pub fn objective_at(&self, x: &[f64]) -> Option<f64> {
        let mats = self.layout.unpack(x);
        self.objective.value(&self.layout, x, &mats)
    }

    /// Smallest constraint slack at `x`.
    pub fn min_slack_at(&self, x: &[f64]) -> f64 {
        let mats = self.layout.unpack(x);
        self.constraints
            .iter()
            .map(|c| {
                c.value(&self.layout, x, &mats)
                    .unwrap_or(f64::NEG_INFINITY)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// True when `x` is strictly inside the barrier domain (all slacks
    /// positive, all variables positive definite).
    pub fn strictly_feasible(&self, x: &[f64]) -> bool {
        barrier_value(self, x, 1.0).is_some()
    }
}

// ---------------------------------------------------------------------------
// Barrier solver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BarrierOptions {
    pub t_init: f64,
    pub mu: f64,
    /// Target bound on the suboptimality `nu / t` (objective units, bits).
    pub gap_tol: f64,
    /// Newton-decrement target per centering stage (affine-invariant
    /// stationarity residual).
    pub decrement_tol: f64,
    pub max_newton_per_stage: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            t_init: 1.0,
            mu: 30.0,
            gap_tol: 1e-8,
            decrement_tol: 1e-6,
            max_newton_per_stage: 300,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BarrierSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub newton_iters: usize,
    /// Newton decrement of the final barrier function at the returned
    /// point (affine-invariant stationarity residual).
    pub stationarity: f64,
    /// Smallest constraint slack at the solution.
    pub min_slack: f64,
    /// Guaranteed bound on the distance to the subproblem optimum.
    pub gap_bound: f64,
    pub stalled: bool,
}

fn barrier_value(problem: &Problem, x: &[f64], t: f64) -> Option<f64> {
    let layout = &problem.layout;
    let mats = layout.unpack(x);
    let mut psi = -problem.objective.value(layout, x, &mats)?;
    let inv_t = 1.0 / t;
    for c in &problem.constraints {
        let s = c.value(layout, x, &mats)?;
        if !(s > 0.0) {
            return None;
        }
        psi -= inv_t * s.ln();
    }
    for m in &mats {
        let chol = Cholesky::factor(m)?;
        psi -= inv_t * chol.ln_det();
    }
    Some(psi)
}

struct BarrierEval {
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

fn barrier_eval(problem: &Problem, x: &[f64], t: f64) -> Option<BarrierEval> {
    let layout = &problem.layout;
    let n = layout.total_coords();
    let mats = layout.unpack(x);
    let inv_t = 1.0 / t;
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n * n];

    // -objective
    let obj = problem.objective.eval(layout, x, &mats)?;
    let mut psi = -obj.value;
    for u in 0..n {
        grad[u] -= obj.grad[u];
    }
    obj.add_scaled_hessian(layout, -1.0, &mut hess);

    // -(1/t) ln c_j
    for c in &problem.constraints {
        let ev = c.eval(layout, x, &mats)?;
        let s = ev.value;
        if !(s > 0.0) {
            return None;
        }
        psi -= inv_t * s.ln();
        let gscale = -inv_t / s;
        for u in 0..n {
            grad[u] += gscale * ev.grad[u];
        }
        let r1 = inv_t / (s * s);
        for u in 0..n {
            let gu = ev.grad[u];
            if gu == 0.0 {
                continue;
            }
            let row = u * n;
            for v in 0..n {
                hess[row + v] += r1 * gu * ev.grad[v];
            }
        }
        ev.add_scaled_hessian(layout, -inv_t / s, &mut hess);
    }

    // log-det barriers on the variables themselves
    for (vi, m) in mats.iter().enumerate() {
        let chol = Cholesky::factor(m)?;
        psi -= inv_t * chol.ln_det();
        let minv = chol.inverse();
        layout.scatter_grad(vi, &minv, -inv_t, &mut grad);
        let k = layout.basis.quadratic_form(&minv);
        layout.scatter_hess(vi, vi, &k, inv_t, &mut hess);
    }

    Some(BarrierEval {
        value: psi,
        grad,
        hess,
    })
}

/// Dense symmetric positive definite solve (in-place Cholesky); returns
/// false when factorization fails.
fn solve_spd(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let djj = d.sqrt();
        a[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / djj;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}

/// Barrier parameter of the full constraint set: one per inequality plus
/// the dimension of each PSD cone.
fn barrier_nu(problem: &Problem) -> f64 {
    (problem.constraints.len() + problem.layout.num_vars() * problem.layout.dim()) as f64
}

pub fn solve_barrier(problem: &Problem, x0: Vec<f64>, opts: &BarrierOptions) -> BarrierSolution {
    let n = problem.layout.total_coords();
    let nu = barrier_nu(problem);
    let mut x = x0;
    let mut t = opts.t_init;
    let mut total_newton = 0usize;
    let mut stalled = false;
    let mut stationarity = f64::INFINITY;

    loop {
        let final_stage = nu / t <= opts.gap_tol;
        let mut stage_iters = 0usize;
        loop {
            let Some(eval) = barrier_eval(problem, &x, t) else {
                stalled = true;
                break;
            };

            let mut h = eval.hess.clone();
            let mut d: Vec<f64> = eval.grad.iter().map(|g| -g).collect();
            let mut ridge = 0.0;
            let mut solved = solve_spd(&mut h, &mut d, n);
            while !solved && ridge < 1e-2 {
                ridge = if ridge == 0.0 { 1e-12 } else { ridge * 100.0 };
                let scale = (0..n)
                    .map(|i| eval.hess[i * n + i].abs())
                    .fold(1.0f64, f64::max);
                h.copy_from_slice(&eval.hess);
                for i in 0..n {
                    h[i * n + i] += ridge * scale;
                }
                d = eval.grad.iter().map(|g| -g).collect();
                solved = solve_spd(&mut h, &mut d, n);
            }
            if !solved {
                stalled = true;
                break;
            }

            let decrement_sq: f64 =
                -eval.grad.iter().zip(&d).map(|(g, di)| g * di).sum::<f64>();
            let lambda = decrement_sq.max(0.0).sqrt();
            stationarity = lambda;
            if lambda <= opts.decrement_tol {
                break;
            }

            let slope: f64 = eval.grad.iter().zip(&d).map(|(g, di)| g * di).sum();
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-14 {
                let cand: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
                if let Some(val) = barrier_value(problem, &cand, t) {
                    if val <= eval.value + 0.25 * alpha * slope {
                        x = cand;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            total_newton += 1;
            stage_iters += 1;
            if !accepted {
                // The line search hit the floating-point floor of the
                // barrier value; accept the point unless it is genuinely
                // far from the stage center.
                if lambda > 100.0 * opts.decrement_tol {
                    stalled = true;
                }
                break;
            }
            if stage_iters >= opts.max_newton_per_stage {
                stalled = true;
                break;
            }
        }
        if final_stage || stalled {
            break;
        }
        t *= opts.mu;
    }

    let objective = problem.objective_at(&x).unwrap_or(f64::NEG_INFINITY);
    let min_slack = problem.min_slack_at(&x);
    BarrierSolution {
        x,
        objective,
        newton_iters: total_newton,
        stationarity,
        min_slack,
        gap_bound: nu / t,
        stalled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn layout2(vars: usize) -> VarLayout {
        VarLayout::new(2, &vec![VarPattern::Full; vars])
    }

    #[test]
    fn pack_unpack_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let layout = layout2(2);
        let mats = vec![
            HermitianMatrix::random(2, &mut rng),
            HermitianMatrix::random(2, &mut rng),
        ];
        let x = layout.pack(&mats);
        assert_eq!(x.len(), 8);
        let back = layout.unpack(&x);
        assert_eq!(back, mats);
    }

    #[test]
    fn block_diagonal_pattern_masks_cross_entries() {
        let blocks = AntennaBlocks::new(vec![1, 2]).unwrap();
        let layout = VarLayout::new(3, &[VarPattern::BlockDiagonal(blocks)]);
        // 1 + 4 coordinates
        assert_eq!(layout.total_coords(), 5);
        let x = vec![1.0, 2.0, 0.5, -0.25, 3.0];
        let m = &layout.unpack(&x)[0];
        assert_eq!(m.get(0, 1), Complex64::ZERO);
        assert_eq!(m.get(0, 2), Complex64::ZERO);
        assert_eq!(m.get(1, 2), Complex64::new(0.5, -0.25));
        assert_eq!(m.get(0, 0).re, 1.0);
    }

    fn random_test_problem(rng: &mut ChaCha8Rng) -> Problem {
        let layout = layout2(2);
        let h = ComplexMatrix::from_fn(2, 2, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let mut linear = vec![0.0; layout.total_coords()];
        for g in linear.iter_mut() {
            *g = 0.2 * (rng.random::<f64>() - 0.5);
        }
        let objective = ScalarFn {
            constant: 0.3,
            linear,
            logdets: vec![LogDetTerm {
                weight: 1.0,
                base: HermitianMatrix::identity(2),
                map: CongruenceMap::Channel(h),
                coeffs: vec![1.0, 1.0],
            }],
        };
        // power-style linear constraint: 10 - tr(X_0) - tr(X_1) >= 0
        let mut cgrad = vec![0.0; layout.total_coords()];
        let trace_coords = layout.pack(&[HermitianMatrix::identity(2), HermitianMatrix::identity(2)]);
        for (u, v) in trace_coords.iter().enumerate() {
            cgrad[u] = -v;
        }
        // fronthaul-style constraint with a principal log-det of X_1
        let mut lin2 = vec![0.0; layout.total_coords()];
        for g in lin2.iter_mut() {
            *g = -0.1 * rng.random::<f64>();
        }
        let constraints = vec![
            ScalarFn {
                constant: 10.0,
                linear: cgrad,
                logdets: vec![],
            },
            ScalarFn {
                constant: 4.0,
                linear: lin2,
                logdets: vec![LogDetTerm {
                    weight: 1.0,
                    base: HermitianMatrix::zeros(1),
                    map: CongruenceMap::Principal(vec![0]),
                    coeffs: vec![0.0, 1.0],
                }],
            },
        ];
        Problem {
            layout,
            objective,
            constraints,
        }
    }

    #[test]
    fn barrier_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let problem = random_test_problem(&mut rng);
        let x0 = problem.layout.pack(&[
            HermitianMatrix::identity(2).scale(0.8),
            HermitianMatrix::identity(2).scale(0.6),
        ]);
        let t = 3.0;
        let eval = barrier_eval(&problem, &x0, t).unwrap();
        let n = problem.layout.total_coords();
        let eps = 1e-6;
        for u in 0..n {
            let mut xp = x0.clone();
            xp[u] += eps;
            let mut xm = x0.clone();
            xm[u] -= eps;
            let fp = barrier_value(&problem, &xp, t).unwrap();
            let fm = barrier_value(&problem, &xm, t).unwrap();
            let fd = (fp - fm) / (2.0 * eps);
            assert!(
                (fd - eval.grad[u]).abs() <= 1e-5 * (1.0 + fd.abs()),
                "grad[{u}]: fd {fd}, analytic {}",
                eval.grad[u]
            );
            let ep = barrier_eval(&problem, &xp, t).unwrap();
            let em = barrier_eval(&problem, &xm, t).unwrap();
            for v in 0..n {
                let fd2 = (ep.grad[v] - em.grad[v]) / (2.0 * eps);
                assert!(
                    (fd2 - eval.hess[u * n + v]).abs() <= 2e-4 * (1.0 + fd2.abs()),
                    "hess[{u},{v}]: fd {fd2}, analytic {}",
                    eval.hess[u * n + v]
                );
            }
        }
    }

    /// maximize log2 det X subject to tr X <= 1: optimum X = I/2,
    /// objective -2 bits.
    #[test]
    fn solves_analytic_logdet_problem() {
        let layout = VarLayout::new(2, &[VarPattern::Full]);
        let mut cgrad = vec![0.0; layout.total_coords()];
        let trace_coords = layout.pack(&[HermitianMatrix::identity(2)]);
        for (u, v) in trace_coords.iter().enumerate() {
            cgrad[u] = -v;
        }
        let problem = Problem {
            objective: ScalarFn {
                constant: 0.0,
                linear: vec![0.0; layout.total_coords()],
                logdets: vec![LogDetTerm {
                    weight: 1.0,
                    base: HermitianMatrix::zeros(2),
                    map: CongruenceMap::Channel(ComplexMatrix::identity(2)),
                    coeffs: vec![1.0],
                }],
            },
            constraints: vec![ScalarFn {
                constant: 1.0,
                linear: cgrad,
                logdets: vec![],
            }],
            layout,
        };
        let x0 = problem.layout.pack(&[HermitianMatrix::identity(2).scale(0.2)]);
        let sol = solve_barrier(&problem, x0, &BarrierOptions::default());
        assert!(!sol.stalled);
        assert!(
            (sol.objective - (-2.0)).abs() < 1e-5,
            "objective {}",
            sol.objective
        );
        let m = &problem.layout.unpack(&sol.x)[0];
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((m.get(i, j) - Complex64::new(expect, 0.0)).norm() < 1e-4);
            }
        }
        assert!(sol.min_slack >= 0.0);
        assert!(sol.gap_bound <= 1e-7);
        assert!(sol.stationarity <= 1e-5);
    }

    /// The solver must not regress below the objective at the start point
    /// by more than the gap bound.
    #[test]
    fn no_objective_regression() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let problem = random_test_problem(&mut rng);
            let x0 = problem.layout.pack(&[
                HermitianMatrix::identity(2).scale(0.5 + rng.random::<f64>()),
                HermitianMatrix::identity(2).scale(0.5 + rng.random::<f64>()),
            ]);
            let start_obj = problem.objective_at(&x0).unwrap();
            let sol = solve_barrier(&problem, x0, &BarrierOptions::default());
            assert!(!sol.stalled);
            assert!(sol.objective >= start_obj - 1e-8);
            assert!(sol.min_slack > 0.0);
        }
    }
}
