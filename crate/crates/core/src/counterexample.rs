//! Numerical reconstruction of the block-diagonal counterexample: a
//! non-Besselian basis `φ(t) = |t|^β e^{ikt}` of `L²(−π, π)`, eigenvalues
//! `μₙ = −4ⁿ`, observation blocks `C_N x = Σ_{n≤N} 2ⁿ αₙ φₙ`, and the
//! direct sum whose resolvent constants decay while the output energy of
//! the blocks grows without bound.
//!
//! Block mode `n = 1, …, N` lives on basis index `n − 1`. Basis indices are
//! ordered by frequency `0, −1, +1, −2, +2, …`.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::golden::{golden_max, sup_over_line, LineSup};
use crate::numerics::hermitian::dense_extremes;
use crate::numerics::quadrature::{integrate_split, QuadOptions};
use crate::numerics::{fit_line, loglog_slope};
use crate::weiss::{
    m_profile_from_sups, tau_profile_from_sups, validate_increasing, window_kernel, MProfile,
    TauProfile, OMEGA_REL_TOL,
};

/// Largest block for which output energies are evaluated.
pub const MAX_ENERGY_BLOCK: usize = 12;

/// Largest block accepted by the m-profile.
pub const MAX_PROFILE_BLOCK: usize = 30;

/// Above `2^EXACT_SUM_LOG2` terms the partial sum is evaluated as the full
/// series minus an Euler-Maclaurin tail.
pub const EXACT_SUM_LOG2: usize = 20;

/// Gram matrices with a larger condition number are rejected.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

fn quad_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-13,
        max_panels: 20_000,
    }
}

fn check_open(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must lie in ({lo}, {hi}), got {v}"
        )))
    }
}

/// Frequency carried by basis index `j`.
pub fn frequency(j: usize) -> i64 {
    let h = j.div_ceil(2) as i64;
    if j % 2 == 1 {
        -h
    } else {
        h
    }
}

/// Breaks at every half period of `cos(kt)` on `[start, π]`.
fn half_period_breaks(start: f64, k: f64) -> Vec<f64> {
    let mut breaks = vec![start];
    if k > 0.0 {
        let step = PI / k;
        let mut j = (start / step).floor() + 1.0;
        while j * step < PI * (1.0 - 1e-12) {
            breaks.push(j * step);
            j += 1.0;
        }
    }
    breaks.push(PI);
    breaks
}

/// `2∫₀^π t^{2β} cos(dt) dt`, the inner product of two basis functions
/// whose frequencies differ by `d`.
pub fn gram_entry(beta: f64, d: u64) -> Result<f64> {
    check_open("beta", beta, 0.0, 0.5)?;
    let k = d as f64;
    let breaks = half_period_breaks(0.0, k);
    let q = integrate_split(
        |t: f64| 2.0 * t.powf(2.0 * beta) * (k * t).cos(),
        &breaks,
        quad_options(),
    )?;
    Ok(q.value)
}

/// Truncated basis with its Gram matrix on `L²(−π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonBesselianBasis {
    pub beta: f64,
    pub size: usize,
    /// `gram_by_difference[d]` is the inner product at frequency gap `d`.
    pub gram_by_difference: Vec<f64>,
    #[serde(skip)]
    gram: DMatrix<f64>,
}

impl NonBesselianBasis {
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Gram matrix of the first `n` basis functions.
    pub fn leading_gram(&self, n: usize) -> DMatrix<f64> {
        self.gram.view((0, 0), (n, n)).into_owned()
    }
}

pub fn basis_gram(beta: f64, size: usize) -> Result<NonBesselianBasis> {
    check_open("beta", beta, 0.0, 0.5)?;
    if size == 0 {
        return Err(Error::invalid("basis size must be positive"));
    }
    let max_diff = (0..size)
        .map(|j| frequency(j).unsigned_abs())
        .max()
        .unwrap()
        * 2;
    let table = (0..=max_diff)
        .into_par_iter()
        .map(|d| gram_entry(beta, d))
        .collect::<Result<Vec<f64>>>()?;
    let gram = DMatrix::from_fn(size, size, |i, j| {
        table[(frequency(i) - frequency(j)).unsigned_abs() as usize]
    });
    Ok(NonBesselianBasis {
        beta,
        size,
        gram_by_difference: table,
        gram,
    })
}

/// `(1/π)∫₀^π t^{−2β} cos(kt) dt`, the Fourier coefficient of `|t|^{−2β}` at
/// frequency `k`.
pub fn fourier_coefficient(beta: f64, k: u64) -> Result<f64> {
    check_open("beta", beta, 0.0, 0.5)?;
    let kf = k as f64;
    let p = 1.0 - 2.0 * beta;
    let t0 = if k == 0 { PI } else { PI.min(1.0 / kf) };
    // u = t^p removes the singularity at the origin.
    let near = integrate_split(
        |u: f64| (kf * u.powf(1.0 / p)).cos() / p,
        &[0.0, t0.powf(p)],
        quad_options(),
    )?;
    let far = if t0 < PI {
        integrate_split(
            |t: f64| t.powf(-2.0 * beta) * (kf * t).cos(),
            &half_period_breaks(t0, kf),
            quad_options(),
        )?
        .value
    } else {
        0.0
    };
    Ok((near.value + far) / PI)
}

/// Coefficients at frequencies `1, …, n`.
pub fn target_coefficients(beta: f64, n: usize) -> Result<Vec<f64>> {
    check_open("beta", beta, 0.25, 0.5)?;
    (1..=n as u64)
        .into_par_iter()
        .map(|k| fourier_coefficient(beta, k))
        .collect()
}

/// Coefficients on basis indices `0, …, n − 1`.
pub fn basis_coefficients(beta: f64, n: usize) -> Result<Vec<f64>> {
    check_open("beta", beta, 0.25, 0.5)?;
    (0..n)
        .into_par_iter()
        .map(|j| fourier_coefficient(beta, frequency(j).unsigned_abs()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleBlock {
    pub n: usize,
    pub alphas: Vec<f64>,
    /// `‖x_N‖²` for `x_N = Σ αⱼ φⱼ`.
    pub x_norm_sq: f64,
    /// `Σ αⱼ²`.
    pub coeff_sum_sq: f64,
    /// `Σ αⱼ² / ‖x_N‖²`.
    pub c_n: f64,
    /// Largest `‖φⱼ*‖ ‖φⱼ‖` over the truncated coordinate functionals.
    pub kappa: f64,
    pub gram_condition: f64,
}

fn leading_block(
    basis: &NonBesselianBasis,
    alphas: &[f64],
    n: usize,
) -> Result<CounterexampleBlock> {
    let g = basis.leading_gram(n);
    let eig = SymmetricEigen::new(g.clone());
    let hi = eig.eigenvalues.max();
    let lo = eig.eigenvalues.min();
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= GRAM_CONDITION_LIMIT) {
        return Err(Error::numeric(
            format!("Gram matrix of block {n} is numerically singular"),
            condition,
        ));
    }
    let chol = Cholesky::new(g.clone())
        .ok_or_else(|| Error::numeric(format!("Cholesky failed on block {n}"), condition))?;
    let inv = chol.inverse();
    let kappa = (0..n)
        .map(|j| (inv[(j, j)] * g[(j, j)]).sqrt())
        .fold(0.0, f64::max);
    let a = &alphas[..n];
    let mut x_norm_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            x_norm_sq += a[i] * a[j] * g[(i, j)];
        }
    }
    let coeff_sum_sq: f64 = a.iter().map(|v| v * v).sum();
    Ok(CounterexampleBlock {
        n,
        alphas: a.to_vec(),
        x_norm_sq,
        coeff_sum_sq,
        c_n: coeff_sum_sq / x_norm_sq,
        kappa,
        gram_condition: condition,
    })
}

/// Blocks for each `N` in `ns`, computed against one shared basis.
pub fn blow_up_sequence(beta: f64, ns: &[usize]) -> Result<Vec<CounterexampleBlock>> {
    check_open("beta", beta, 0.25, 0.5)?;
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::invalid(
            "block sizes must be a nonempty list of positive integers",
        ));
    }
    let size = *ns.iter().max().unwrap();
    let basis = basis_gram(beta, size)?;
    let alphas = basis_coefficients(beta, size)?;
    ns.par_iter()
        .map(|&n| leading_block(&basis, &alphas, n))
        .collect()
}

/// `∫₀¹ ‖Σ_{n≤N} αₙ 2ⁿ e^{−4ⁿt} φₙ‖² dt` in closed form.
pub fn block_energy(n: usize, beta: f64, basis: &NonBesselianBasis) -> Result<f64> {
    if n == 0 || n > MAX_ENERGY_BLOCK {
        return Err(Error::invalid(format!(
            "block energy needs 1 <= N <= {MAX_ENERGY_BLOCK}, got {n}"
        )));
    }
    if n > basis.size {
        return Err(Error::invalid(format!(
            "basis has {} functions, block needs {n}",
            basis.size
        )));
    }
    if beta != basis.beta {
        return Err(Error::invalid("basis was built for a different beta"));
    }
    let alphas = basis_coefficients(beta, n)?;
    let g = basis.gram();
    let mut energy = 0.0;
    for m in 1..=n {
        for k in 1..=n {
            let rate = 4f64.powi(m as i32) + 4f64.powi(k as i32);
            let scale = 2f64.powi((m + k) as i32);
            energy +=
                alphas[m - 1] * alphas[k - 1] * scale * g[(m - 1, k - 1)] * (-(-rate).exp_m1())
                    / rate;
        }
    }
    Ok(energy.max(0.0))
}

/// `Σ_{n≥1} 1/(r + n²)`.
pub fn lattice_sum(r: f64) -> f64 {
    let y = PI * r.sqrt();
    if y < 0.05 {
        let p2 = PI * PI;
        p2 / 6.0 - p2 * p2 * r / 90.0 + p2 * p2 * p2 * r * r / 945.0
            - p2 * p2 * p2 * p2 * r * r * r / 9450.0
    } else {
        (y / y.tanh() - 1.0) / (2.0 * r)
    }
}

/// `2κ√r Σ_{n≥1} 1/(r + n²)`, the block-independent cap.
pub fn m_cap(kappa: f64, r: f64) -> f64 {
    2.0 * kappa * r.sqrt() * lattice_sum(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockMSample {
    pub r: f64,
    pub m: f64,
    pub arctan_bound: f64,
    pub cap: f64,
    /// Whether `m` was summed term by term.
    pub exact: bool,
}

/// `Σ_{n>K} 1/(r + n²)` by Euler-Maclaurin; accurate for large `K`.
fn lattice_tail(r: f64, k: f64) -> f64 {
    let sr = r.sqrt();
    let f = 1.0 / (r + k * k);
    let fp = -2.0 * k * f * f;
    (PI / 2.0 - (k / sr).atan()) / sr - 0.5 * f - fp / 12.0
}

fn block_m(n: usize, kappa: f64, r: f64) -> BlockMSample {
    let terms = 2f64.powi(n as i32);
    let arctan_bound = 2.0 * kappa * (terms / r.sqrt()).atan();
    let exact = n <= EXACT_SUM_LOG2;
    let sum = if exact {
        let count = 1usize << n;
        (1..=count).rev().map(|k| 1.0 / (r + (k * k) as f64)).sum()
    } else {
        (lattice_sum(r) - lattice_tail(r, terms)).max(0.0)
    };
    let m = 2.0 * kappa * r.sqrt() * sum;
    BlockMSample {
        r,
        m,
        arctan_bound,
        cap: m_cap(kappa, r),
        exact,
    }
}

/// `m_{N,r} = 2κ√r Σ_{n≤2^N} 1/(r + n²)` on the given grid.
pub fn block_m_profile(n: usize, kappa: f64, rs: &[f64]) -> Result<Vec<BlockMSample>> {
    if n == 0 || n > MAX_PROFILE_BLOCK {
        return Err(Error::invalid(format!(
            "block index must lie in 1..={MAX_PROFILE_BLOCK}, got {n}"
        )));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    validate_increasing("r", rs)?;
    Ok(rs.par_iter().map(|&r| block_m(n, kappa, r)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssembledSample {
    pub r: f64,
    pub m_r: f64,
    /// Block attaining the maximum.
    pub argmax_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssembledCounterexample {
    pub alpha_exp: f64,
    pub betas: Vec<f64>,
    pub blocks: Vec<CounterexampleBlock>,
    /// Common constant: the largest block estimate.
    pub kappa: f64,
    /// `β_N² c_N^{1−2α}` per block.
    pub energy_lower_bounds: Vec<f64>,
    pub samples: Vec<AssembledSample>,
    /// `M` at the largest sampled `r` over `M` at the smallest.
    pub decay_ratio: f64,
}

impl AssembledCounterexample {
    /// Block scalings `β_N c_N^{−α}`.
    pub fn weights(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .zip(&self.betas)
            .map(|(b, w)| w * b.c_n.powf(-self.alpha_exp))
            .collect()
    }
}

/// Equal weights summing to one.
pub fn uniform_betas(len: usize) -> Vec<f64> {
    vec![1.0 / len as f64; len]
}

/// Direct sum of the blocks with scalings `β_N c_N^{−α}` and
/// `M_r = max_N c_N^{−α} m_{N,r}` on the grid `rs`.
pub fn assemble(
    alpha_exp: f64,
    blocks: Vec<CounterexampleBlock>,
    betas: &[f64],
    rs: &[f64],
) -> Result<AssembledCounterexample> {
    check_open("alpha", alpha_exp, 0.0, 0.5)?;
    if blocks.is_empty() {
        return Err(Error::invalid("no blocks to assemble"));
    }
    if betas.len() != blocks.len() {
        return Err(Error::invalid(format!(
            "{} weights for {} blocks",
            betas.len(),
            blocks.len()
        )));
    }
    if !blocks.windows(2).all(|w| w[1].n > w[0].n) {
        return Err(Error::invalid(
            "blocks must be ordered by strictly increasing N",
        ));
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
        return Err(Error::invalid(format!(
            "weights must be nonnegative, got {b}"
        )));
    }
    let total: f64 = betas.iter().sum();
    if total > 1.0 + 1e-12 {
        return Err(Error::invalid(format!("weights sum to {total} > 1")));
    }
    let energy_lower_bounds: Vec<f64> = blocks
        .iter()
        .zip(betas)
        .map(|(b, w)| w * w * b.c_n.powf(1.0 - 2.0 * alpha_exp))
        .collect();
    if let Some(i) = energy_lower_bounds.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "weights do not make beta^2 c^(1-2 alpha) strictly increasing (blocks {} and {})",
            blocks[i].n,
            blocks[i + 1].n
        )));
    }
    validate_increasing("r", rs)?;
    let kappa = blocks.iter().map(|b| b.kappa).fold(0.0, f64::max);
    let samples: Vec<AssembledSample> = rs
        .par_iter()
        .map(|&r| {
            blocks
                .iter()
                .map(|b| (b.c_n.powf(-alpha_exp) * block_m(b.n, kappa, r).m, b.n))
                .fold(
                    AssembledSample {
                        r,
                        m_r: f64::NEG_INFINITY,
                        argmax_n: 0,
                    },
                    |acc, (m, n)| {
                        if m > acc.m_r {
                            AssembledSample {
                                r,
                                m_r: m,
                                argmax_n: n,
                            }
                        } else {
                            acc
                        }
                    },
                )
        })
        .collect();
    let decay_ratio = samples.last().unwrap().m_r / samples[0].m_r;
    Ok(AssembledCounterexample {
        alpha_exp,
        betas: betas.to_vec(),
        blocks,
        kappa,
        energy_lower_bounds,
        samples,
        decay_ratio,
    })
}

/// Output energy over `[0, 1]` of each unit-norm block state in the
/// assembled system, `β_N² c_N^{−2α} E_N / ‖x_N‖²`; `None` past
/// [`MAX_ENERGY_BLOCK`].
pub fn measured_block_energies(
    assembled: &AssembledCounterexample,
    basis: &NonBesselianBasis,
) -> Result<Vec<Option<f64>>> {
    let weights = assembled.weights();
    assembled
        .blocks
        .iter()
        .zip(weights)
        .map(|(b, w)| {
            if b.n > MAX_ENERGY_BLOCK {
                Ok(None)
            } else {
                Ok(Some(
                    w * w * block_energy(b.n, basis.beta, basis)? / b.x_norm_sq,
                ))
            }
        })
        .collect()
}

/// Exact resolvent and windowed-output norms of the assembled prefix,
/// measured in the basis norm on both state and output.
#[derive(Debug, Clone)]
pub struct PrefixObservation {
    dim: usize,
    /// Lower Cholesky factor of the output Gram matrix.
    out_factor: DMatrix<f64>,
    /// `Σ_N w_N² G_N⁻¹`, each inverse padded to `dim × dim`.
    inner: DMatrix<f64>,
}

impl PrefixObservation {
    pub fn new(assembled: &AssembledCounterexample, basis: &NonBesselianBasis) -> Result<Self> {
        let dim = assembled.blocks.last().unwrap().n;
        if dim > basis.size {
            return Err(Error::invalid(format!(
                "basis has {} functions, prefix needs {dim}",
                basis.size
            )));
        }
        let mut inner = DMatrix::<f64>::zeros(dim, dim);
        for (b, w) in assembled.blocks.iter().zip(assembled.weights()) {
            let chol = Cholesky::new(basis.leading_gram(b.n)).ok_or_else(|| {
                Error::numeric(
                    format!("Cholesky failed on block {}", b.n),
                    b.gram_condition,
                )
            })?;
            let inv = chol.inverse();
            for i in 0..b.n {
                for j in 0..b.n {
                    inner[(i, j)] += w * w * inv[(i, j)];
                }
            }
        }
        let out = Cholesky::new(basis.leading_gram(dim))
            .ok_or_else(|| Error::numeric("Cholesky failed on output Gram", f64::INFINITY))?;
        Ok(Self {
            dim,
            out_factor: out.l(),
            inner,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest eigenvalue of `Lᵀ D P D* L` with `D = diag(dₙ)`.
    fn norm_sq(&self, d: &[Complex64]) -> f64 {
        let f = DMatrix::from_fn(self.dim, self.dim, |i, j| {
            d[i].conj() * self.out_factor[(i, j)]
        });
        let p = self.inner.map(|v| Complex64::new(v, 0.0));
        let q = f.adjoint() * p * &f;
        let q = (&q + q.adjoint()) * Complex64::new(0.5, 0.0);
        dense_extremes(&q).largest.max(0.0)
    }

    /// `‖𝒞((r + iω)I − 𝒜)⁻¹‖²`.
    pub fn resolvent_norm_sq(&self, r: f64, omega: f64) -> f64 {
        let d: Vec<Complex64> = (1..=self.dim)
            .map(|n| {
                let mu = 4f64.powi(n as i32);
                Complex64::new(2f64.powi(n as i32), 0.0) / Complex64::new(r + mu, omega)
            })
            .collect();
        self.norm_sq(&d)
    }

    /// `τ⁻¹ ‖x ↦ ∫₀^τ e^{iωt} 𝒞𝒯(t)x dt‖²`.
    pub fn window_norm_sq(&self, tau: f64, omega: f64) -> f64 {
        let d: Vec<Complex64> = (1..=self.dim)
            .map(|n| {
                let mu = -4f64.powi(n as i32);
                window_kernel(Complex64::new(mu, 0.0), omega, tau) * 2f64.powi(n as i32)
            })
            .collect();
        self.norm_sq(&d) / tau
    }

    fn candidates(&self, extra: &[f64]) -> Vec<f64> {
        // Real spectrum: both norms are even in ω.
        let top = 4f64.powi(self.dim as i32);
        let mut c: Vec<f64> = (1..=self.dim).map(|n| 4f64.powi(n as i32)).collect();
        c.push(16.0 * top);
        c.extend_from_slice(extra);
        c
    }

    pub fn sup_resolvent_sq(&self, r: f64) -> LineSup {
        let mut c = self.candidates(&[]);
        c.push(r);
        sup_over_line(
            |w| self.resolvent_norm_sq(r, w),
            &c,
            |_, _| f64::INFINITY,
            OMEGA_REL_TOL,
        )
    }

    pub fn sup_window_sq(&self, tau: f64) -> LineSup {
        let periods: Vec<f64> = (1..=4).map(|j| 2.0 * PI * j as f64 / tau).collect();
        sup_over_line(
            |w| self.window_norm_sq(tau, w),
            &self.candidates(&periods),
            |_, _| f64::INFINITY,
            OMEGA_REL_TOL,
        )
    }

    pub fn m_profile(&self, rs: &[f64], threshold: f64) -> Result<MProfile> {
        validate_increasing("r", rs)?;
        let sups: Vec<LineSup> = rs.par_iter().map(|&r| self.sup_resolvent_sq(r)).collect();
        Ok(m_profile_from_sups(rs, &sups, threshold))
    }

    pub fn b2_profile(&self, taus: &[f64], threshold: f64) -> Result<TauProfile> {
        validate_increasing("tau", taus)?;
        let sups: Vec<LineSup> = taus.par_iter().map(|&t| self.sup_window_sq(t)).collect();
        Ok(tau_profile_from_sups(taus, &sups, threshold))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessSample {
    pub r: f64,
    pub bound: f64,
    pub argmax_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessProfile {
    pub beta: f64,
    pub alpha_exp: f64,
    /// `(4β − 1)α`.
    pub gamma: f64,
    /// Exponent of the fit `bound ≈ A (ln(r + 2) + shift)^{−γ}`.
    pub fitted_exponent: f64,
    pub shift: f64,
    /// Exponent of the plain fit of `ln bound` against `ln ln(r + 2)`.
    pub naive_exponent: f64,
    pub samples: Vec<SharpnessSample>,
}

/// `sup_N arctan(2^N/√r) / N^γ`; the scan stops once the arctan has
/// saturated, after which the quotient only decreases.
pub fn sharpness_bound(gamma: f64, r: f64) -> (f64, usize) {
    let sr = r.sqrt();
    let mut best = (f64::NEG_INFINITY, 0);
    for n in 1..=1023usize {
        let x = 2f64.powi(n as i32) / sr;
        let v = x.atan() / (n as f64).powf(gamma);
        if v > best.0 {
            best = (v, n);
        }
        if x > 1e9 {
            break;
        }
    }
    best
}

fn shifted_fit(ls: &[f64], lv: &[f64], shift: f64) -> (f64, f64) {
    let xs: Vec<f64> = ls.iter().map(|l| (l + shift).ln()).collect();
    let fit = fit_line(&xs, lv).expect("at least three distinct abscissae");
    (-fit.slope, fit.sse)
}

pub fn sharpness_profile(beta: f64, alpha_exp: f64, rs: &[f64]) -> Result<SharpnessProfile> {
    check_open("beta", beta, 0.25, 0.5)?;
    check_open("alpha", alpha_exp, 0.0, 0.5)?;
    validate_increasing("r", rs)?;
    if rs.len() < 4 {
        return Err(Error::invalid("sharpness fit needs at least four radii"));
    }
    let gamma = (4.0 * beta - 1.0) * alpha_exp;
    let samples: Vec<SharpnessSample> = rs
        .iter()
        .map(|&r| {
            let (bound, argmax_n) = sharpness_bound(gamma, r);
            SharpnessSample { r, bound, argmax_n }
        })
        .collect();
    let ls: Vec<f64> = rs.iter().map(|r| (r + 2.0).ln()).collect();
    let lv: Vec<f64> = samples.iter().map(|s| s.bound.ln()).collect();
    let naive_exponent = -loglog_slope(&ls, &samples.iter().map(|s| s.bound).collect::<Vec<_>>())
        .ok_or_else(|| Error::invalid("degenerate radius grid"))?;
    let lo = -ls[0] + 0.5;
    let (shift, _, _) = golden_max(&|b: f64| -shifted_fit(&ls, &lv, b).1, lo, 100.0, 1e-10);
    let (fitted_exponent, _) = shifted_fit(&ls, &lv, shift);
    Ok(SharpnessProfile {
        beta,
        alpha_exp,
        gamma,
        fitted_exponent,
        shift,
        naive_exponent,
        samples,
    })
}
