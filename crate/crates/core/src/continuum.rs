//! Continuum results for a single 1D junction: coherence factors, the
//! Andreev pole condition and its closed-form energy–phase relation, the
//! Sturm–Liouville Green's-function constructor, and scattering off a delta
//! barrier. These are independent of the lattice code and serve as its
//! oracle.
//!
//! Units are natural (`m = ħ = 1`) unless a [`ContinuumParams`] says
//! otherwise; every formula takes its constants explicitly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bdg::C64;
use crate::error::{Error, Result};

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Below this magnitude a pole denominator counts as zero.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumParams {
    pub m: f64,
    pub hbar: f64,
    pub mu: f64,
    pub delta0: f64,
    pub phi: f64,
}

impl Default for ContinuumParams {
    fn default() -> Self {
        ContinuumParams {
            m: 1.0,
            hbar: 1.0,
            mu: 100.0,
            delta0: 1.0,
            phi: 0.0,
        }
    }
}

impl ContinuumParams {
    /// `k_f = √(2mμ)/ħ`.
    pub fn k_f(&self) -> f64 {
        (2.0 * self.m * self.mu).sqrt() / self.hbar
    }

    /// Whether `μ ≫ Δ₀` holds by at least a factor of ten.
    pub fn andreev_regime(&self) -> bool {
        self.mu >= 10.0 * self.delta0
    }

    /// Exact squared wavenumbers `(k₊², k₋²)` at energy `e`, for diagnostics
    /// only (results use `k± ≅ k_f`). Returns the dimensionally consistent
    /// form `k_f²(1 ± √(E²−Δ₀²)/μ)` first and, second, the form with `k_f`
    /// to the first power, `k_f(1 ± √(E²−Δ₀²)/μ)`.
    pub fn wavenumbers_squared(&self, e: f64) -> ([C64; 2], [C64; 2]) {
        let root = C64::new(e * e - self.delta0 * self.delta0, 0.0).sqrt() / self.mu;
        let kf = self.k_f();
        let consistent = [(ONE + root) * kf * kf, (ONE - root) * kf * kf];
        let first_power = [(ONE + root) * kf, (ONE - root) * kf];
        (consistent, first_power)
    }
}

/// Which analytic continuation of `√(1 − (Δ/E)²)` to use for `|E| < Δ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Continuation {
    /// `+i√((Δ/E)² − 1)`.
    #[default]
    Upper,
    /// `−i√((Δ/E)² − 1)`.
    Lower,
}

/// Particle/hole amplitudes of a quasiparticle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherencePair {
    pub u0: C64,
    pub v0: C64,
}

impl CoherencePair {
    /// `u₀² − v₀²`, equal to `√(1 − (Δ/E)²)` on the chosen branch.
    pub fn difference(&self) -> C64 {
        self.u0 * self.u0 - self.v0 * self.v0
    }
}

fn gap_root(e: f64, delta: f64, branch: Continuation) -> Result<C64> {
    if e == 0.0 {
        return Err(Error::Singular("coherence factors are undefined at E = 0".into()));
    }
    let ratio_sq = (delta / e) * (delta / e);
    if ratio_sq <= 1.0 {
        Ok(C64::new((1.0 - ratio_sq).sqrt(), 0.0))
    } else {
        let im = (ratio_sq - 1.0).sqrt();
        Ok(match branch {
            Continuation::Upper => C64::new(0.0, im),
            Continuation::Lower => C64::new(0.0, -im),
        })
    }
}

/// `u₀ = √(½(1 + √(1 − (Δ/E)²)))`, `v₀ = √(½(1 − √(1 − (Δ/E)²)))` on the
/// upper continuation.
pub fn coherence_factors(e: f64, delta: f64) -> Result<CoherencePair> {
    coherence_factors_on(e, delta, Continuation::Upper)
}

pub fn coherence_factors_on(e: f64, delta: f64, branch: Continuation) -> Result<CoherencePair> {
    let s = gap_root(e, delta, branch)?;
    Ok(CoherencePair {
        u0: (0.5 * (ONE + s)).sqrt(),
        v0: (0.5 * (ONE - s)).sqrt(),
    })
}

/// `e^{iφ}v₀² − u₀²`; zero exactly on a bound state.
pub fn pole_residual(e: f64, phi: f64, delta: f64) -> Result<C64> {
    pole_residual_on(e, phi, delta, Continuation::Upper)
}

pub fn pole_residual_on(e: f64, phi: f64, delta: f64, branch: Continuation) -> Result<C64> {
    let cp = coherence_factors_on(e, delta, branch)?;
    Ok(C64::from_polar(1.0, phi) * cp.v0 * cp.v0 - cp.u0 * cp.u0)
}

/// Closed-form bound-state energies `±Δ√(1 − η² sin²(φ/2))`.
pub fn abs_energy(phi: f64, delta: f64, eta: f64) -> (f64, f64) {
    let s = (phi / 2.0).sin();
    let e = delta * (1.0 - eta * eta * s * s).max(0.0).sqrt();
    (e, -e)
}

/// Positive bound-state energy found by bisecting the pole residual on
/// `E ∈ (0, Δ)`.
///
/// On the upper continuation the pole exists only for `φ ∈ [0, π]`; for
/// `φ ∈ (π, 2π)` the lower continuation carries it. The residual rotated by
/// `e^{−iφ/2}` is purely imaginary, and its imaginary part is the real
/// function bisected here.
pub fn pole_root(phi: f64, delta: f64) -> Result<f64> {
    let phi = crate::lattice::normalize_phase(phi);
    let branch = if phi <= PI {
        Continuation::Upper
    } else {
        Continuation::Lower
    };
    let rot = C64::from_polar(1.0, -phi / 2.0);
    let h = |e: f64| -> Result<f64> { Ok((pole_residual_on(e, phi, delta, branch)? * rot).im) };

    // (Δ/E)² must stay finite at the lower end
    let mut lo = delta * 1e-9;
    let mut hi = delta;
    let (mut f_lo, f_hi) = (h(lo)?, h(hi)?);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        // φ = π: the pole sits at E → 0
        return Ok(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = h(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Green's-function coefficients at the junction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AndreevCoefficients {
    /// `A_pp = A_hh = (im/ħ²k_f)·e^{−iφ}/(u₀² − v₀²)`.
    pub a_pp_hh: C64,
    /// `A_hp / A_ph = (e^{iφ}u₀² − v₀²)/(e^{iφ}v₀² − u₀²)`.
    pub a_hp_over_a_ph: C64,
}

pub fn andreev_coefficients(e: f64, phi: f64, delta: f64, params: &ContinuumParams) -> Result<AndreevCoefficients> {
    let cp = coherence_factors(e, delta)?;
    let (u2, v2) = (cp.u0 * cp.u0, cp.v0 * cp.v0);
    let phase = C64::from_polar(1.0, phi);
    let diff = u2 - v2;
    if diff.norm() < POLE_TOLERANCE {
        return Err(Error::Pole(format!("u0^2 = v0^2 at E = {e}")));
    }
    let denom = phase * v2 - u2;
    if denom.norm() < POLE_TOLERANCE {
        return Err(Error::Pole(format!("bound state at E = {e}, phi = {phi}")));
    }
    let prefactor = I * params.m / (params.hbar * params.hbar * params.k_f());
    Ok(AndreevCoefficients {
        a_pp_hh: prefactor * phase.conj() / diff,
        a_hp_over_a_ph: (phase * u2 - v2) / denom,
    })
}

/// A boundary solution and its derivative at `x`.
pub type Solution<'a> = &'a dyn Fn(f64) -> (C64, C64);

/// Green's function of `(p ψ')' + q ψ` from the left- and right-boundary
/// solutions: `G(x, x') = ψ<(min) ψ>(max) / (p(x') W(x'))`.
pub fn sl_green(psi_left: Solution, psi_right: Solution, p: &dyn Fn(f64) -> f64, x: f64, xp: f64) -> Result<C64> {
    let (l, dl) = psi_left(xp);
    let (r, dr) = psi_right(xp);
    let wronskian = l * dr - dl * r;
    let norm = p(xp) * wronskian;
    if norm.norm() == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateSolutions(xp));
    }
    let (lo, hi) = if x <= xp { (x, xp) } else { (xp, x) };
    Ok(psi_left(lo).0 * psi_right(hi).0 / norm)
}

/// Free-particle amplitude `A = im/(kħ²)`.
pub fn free_amplitude(k: f64, m: f64, hbar: f64) -> C64 {
    I * m / (k * hbar * hbar)
}

/// Scattering off `V_c δ(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaScattering {
    /// `mV_c/(kħ²)`.
    pub eta_barrier: f64,
    pub b_over_a: C64,
    pub c_over_a: C64,
    /// Transmission coefficient of the Green's function.
    pub c: C64,
}

/// Reflection and transmission ratios from the closed forms, plus `C`.
pub fn delta_scattering(k: f64, v_c: f64, params: &ContinuumParams) -> DeltaScattering {
    let (m, hbar) = (params.m, params.hbar);
    let eta = m * v_c / (k * hbar * hbar);
    let denom = ONE + I * eta;
    DeltaScattering {
        eta_barrier: eta,
        b_over_a: -I * eta / denom,
        c_over_a: ONE / denom,
        c: ONE / (v_c - I * k * hbar * hbar / m),
    }
}

/// Solves the matching conditions `A − B = (1 + 2iη)C`, `C = A + B` for
/// unit incidence; returns `(B, C)`.
pub fn delta_matching(k: f64, v_c: f64, params: &ContinuumParams) -> (C64, C64) {
    let eta = params.m * v_c / (k * params.hbar * params.hbar);
    // unknowns (B, C): −B − (1+2iη)C = −1 ; B − C = −1
    let a11 = -ONE;
    let a12 = -(ONE + 2.0 * I * eta);
    let a21 = ONE;
    let a22 = -ONE;
    let (r1, r2) = (-ONE, -ONE);
    let det = a11 * a22 - a12 * a21;
    let b = (r1 * a22 - a12 * r2) / det;
    let c = (a11 * r2 - r1 * a21) / det;
    (b, c)
}

/// `C` from the jump condition at the barrier,
/// `−(ħ²/2m)(2ik)C + V_c C = 1`.
pub fn delta_jump_c(k: f64, v_c: f64, params: &ContinuumParams) -> C64 {
    let kinetic = -(params.hbar * params.hbar / (2.0 * params.m)) * (2.0 * I * k);
    ONE / (kinetic + v_c)
}
