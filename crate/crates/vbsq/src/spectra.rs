//! Closed-form entanglement entropies, exact isotropic block spectra,
//! perturbative spectra at q < 1, and the effective boundary models.
//!
//! In the double scaling limit the block spectrum is a thermal ensemble of
//! two free boundary spins S/2 in a field, which makes both the Rényi and
//! von Neumann entropies elementary functions of q and S. For finite blocks
//! the corrections are organized in powers of the transfer ratios
//! `lambda_j / lambda_0`: exactly summable at q = 1 (the multiplet
//! eigenvalues `p_JM`), and to first order in `lambda_1/lambda_0` for
//! general q (the `p_{mu nu}` approximation).
//!
//! Every closed form carries an exact q = 1 branch; the raw expressions are
//! 0/0 there.

use thiserror::Error;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::mps;
use crate::qalgebra::{ f_element, q_number };
use crate::rdm::{ self, BlockLength, BlockSpectrum, RdmError };

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("large-S entropies diverge at the isotropic point q = 1")]
    DivergesAtIsotropicPoint,

    #[error(transparent)]
    Rdm(#[from] RdmError),

    #[error(transparent)]
    Mps(#[from] mps::MpsError),
}

pub type SpectraResult<T> = Result<T, SpectraError>;

/// `ln(q^{-x} - q^{x})` for x > 0, q in (0,1), evaluated without overflow.
fn ln_gap(x: f64, q: f64) -> f64 {
    -x * q.ln() + (-q.powf(2.0 * x)).ln_1p()
}

/// `(q^{x} + q^{-x}) / (q^{x} - q^{-x})`, stable for large x.
fn coth_like(x: f64, q: f64) -> f64 {
    let y = q.powf(2.0 * x);
    (y + 1.0) / (y - 1.0)
}

/// `ln [n]` for n > 0 via the gap form.
fn ln_q_number(n: f64, q: f64) -> f64 {
    ln_gap(n / 2.0, q) - ln_gap(0.5, q)
}

/// Rényi entropy of an infinite block,
/// `S_R(alpha) = 2/(1-alpha) ln{ [S+1]_{q^alpha} / [S+1]^alpha }`;
/// `2 ln(S+1)` at the isotropic point.
pub fn renyi_dsl(spin: u32, alpha: f64, ctx: &DeformationContext) -> f64 {
    assert!(alpha > 0.0 && alpha != 1.0, "Rényi order must be positive and != 1");
    if ctx.is_isotropic() {
        return 2.0 * f64::from(spin + 1).ln();
    }
    let q = ctx.q();
    let s1 = f64::from(spin + 1);
    let ln_brace = ln_gap(alpha * s1 / 2.0, q) - ln_gap(alpha / 2.0, q)
        - alpha * ln_q_number(s1, q);
    2.0 / (1.0 - alpha) * ln_brace
}

/// Von Neumann entropy of an infinite block; `2 ln(S+1)` at q = 1.
pub fn vn_dsl(spin: u32, ctx: &DeformationContext) -> f64 {
    if ctx.is_isotropic() {
        return 2.0 * f64::from(spin + 1).ln();
    }
    let q = ctx.q();
    let s1 = f64::from(spin + 1);
    2.0 * ln_q_number(s1, q)
        + (coth_like(0.5, q) - s1 * coth_like(s1 / 2.0, q)) * q.ln()
}

/// Which entropy the large-S limit should produce.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyKind {
    Renyi(f64),
    VonNeumann,
}

/// S -> infinity limit of the block entropies at fixed q < 1; diverges at
/// the isotropic point.
pub fn entropy_large_s(kind: EntropyKind, ctx: &DeformationContext) -> SpectraResult<f64> {
    if ctx.is_isotropic() {
        return Err(SpectraError::DivergesAtIsotropicPoint);
    }
    let q = ctx.q();
    match kind {
        EntropyKind::Renyi(alpha) => {
            assert!(alpha > 0.0 && alpha != 1.0);
            // 2/(1-alpha) ln{ (q^{-1/2}-q^{1/2})^alpha / (q^{-alpha/2}-q^{alpha/2}) }
            Ok(2.0 / (1.0 - alpha) * (alpha * ln_gap(0.5, q) - ln_gap(alpha / 2.0, q)))
        }
        EntropyKind::VonNeumann => {
            Ok(-2.0 * ln_gap(0.5, q) + coth_like(0.5, q) * q.ln())
        }
    }
}

/// Exact isotropic block spectrum: (2J+1)-fold degenerate eigenvalues
///
/// ```text
/// p_JM = (S+1)^{-2} (1 + sum_{j=1..S} (2j+1) (lambda_j/lambda_0)^l
///                        F[j J S/2; S/2 S/2 S/2]) ,   q = 1.
/// ```
pub fn isotropic_eigs(spin: u32, l: usize) -> SpectraResult<BlockSpectrum> {
    let ctx = DeformationContext::isotropic();
    let values = isotropic_eigenvalues(spin, l)?;
    let mut pairs = Vec::new();
    for (j, p) in values.iter().enumerate() {
        let jj = j as i32;
        for m in -jj..=jj {
            pairs.push((*p, m));
        }
    }
    Ok(BlockSpectrum::from_values(pairs, &ctx)?)
}

/// The distinct isotropic eigenvalues `p_J`, indexed by J = 0 ..= S.
pub fn isotropic_eigenvalues(spin: u32, l: usize) -> SpectraResult<Vec<f64>> {
    assert!(l >= 1);
    let ctx = DeformationContext::isotropic();
    let spectrum = mps::transfer_spectrum(spin, &ctx)?;
    let s_half = HalfInt::new(spin as i32);
    let norm = f64::from((spin + 1) * (spin + 1));
    let mut out = Vec::with_capacity(spin as usize + 1);
    for big_j in 0..=spin {
        let mut acc = 1.0;
        for j in 1..=spin {
            let f = f_element(
                HalfInt::whole(j as i32),
                s_half,
                s_half,
                HalfInt::whole(big_j as i32),
                s_half,
                s_half,
                &ctx,
            );
            acc += f64::from(2 * j + 1) * spectrum.ratio(j).powi(l as i32) * f;
        }
        out.push(acc / norm);
    }
    Ok(out)
}

/// Boundary-coefficient `C(S/2,mu; 1,0 | S/2,mu)` in closed form.
pub fn boundary_coefficient(spin: u32, two_mu: HalfInt, ctx: &DeformationContext) -> f64 {
    let q = ctx.q();
    let s_half = HalfInt::new(spin as i32);
    let norm = (q_number(HalfInt::whole(spin as i32), ctx)
        * q_number(HalfInt::whole(spin as i32 + 2), ctx)).sqrt();
    let expo = 0.5 * (1.0 + f64::from(spin) / 2.0);
    let mu = two_mu.to_f64();
    q.powf(-mu / 2.0) / norm
        * (q.powf(expo) * q_number(s_half + two_mu, ctx)
            - q.powf(-expo) * q_number(s_half - two_mu, ctx))
}

/// First-order perturbative block spectrum for q < 1 and finite `l`:
///
/// ```text
/// p_{mu nu} = q^{-(mu+nu)} / [S+1]^2
///             (1 + [3] (lambda_1/lambda_0)^l c_mu c_nu) ,
/// ```
///
/// with `c_mu` the boundary coefficient above; symmetric under mu <-> nu.
pub fn perturbative_eigs(spin: u32, l: usize, ctx: &DeformationContext)
    -> SpectraResult<BlockSpectrum>
{
    assert!(l >= 1);
    let spectrum = mps::transfer_spectrum(spin, ctx)?;
    let ratio = spectrum.ratio(1).powi(l as i32);
    let three = q_number(3, ctx);
    let norm = q_number(HalfInt::whole(spin as i32 + 1), ctx).powi(2);
    let s_half = HalfInt::new(spin as i32);
    let q = ctx.q();
    let mut pairs = Vec::new();
    for mu in s_half.projections() {
        let cmu = boundary_coefficient(spin, mu, ctx);
        for nu in s_half.projections() {
            let cnu = boundary_coefficient(spin, nu, ctx);
            let p = q.powf(-(mu + nu).to_f64()) / norm
                * (1.0 + three * ratio * cmu * cnu);
            pairs.push((p, (mu - nu).doubled() / 2));
        }
    }
    Ok(BlockSpectrum::from_values(pairs, ctx)?)
}

/// Effective boundary model reproducing a block spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EffectiveModel {
    /// Two free boundary spins S/2 in a field along z; the double scaling
    /// limit. `beta_h = |ln q|` vanishes only at the isotropic point.
    ParamagnetDsl { beta_h: f64 },
    /// Two boundary spins S/2 with a Heisenberg coupling; isotropic finite
    /// blocks. `gamma = 12/(S(S+2)) (S/(S+2))^l`, `sign = (-1)^l`, and the
    /// effective temperature is `1/gamma`.
    HeisenbergFiniteIso {
        gamma: f64,
        sign: i32,
        t_eff: f64,
        /// Set when `3 (S/(S+2))^l >= 0.1`, where first order is unreliable.
        validity_warning: bool,
    },
}

pub fn effective_model_dsl(ctx: &DeformationContext) -> EffectiveModel {
    EffectiveModel::ParamagnetDsl { beta_h: ctx.q().ln().abs() }
}

pub fn effective_model_iso(spin: u32, l: usize) -> EffectiveModel {
    assert!(spin >= 1 && l >= 1);
    let s = f64::from(spin);
    let decay = (s / (s + 2.0)).powi(l as i32);
    let gamma = 12.0 / (s * (s + 2.0)) * decay;
    EffectiveModel::HeisenbergFiniteIso {
        gamma,
        sign: if l % 2 == 0 { 1 } else { -1 },
        t_eff: 1.0 / gamma,
        validity_warning: 3.0 * decay >= 0.1,
    }
}

/// Leading large-`l` Rényi entropy of an isotropic block:
/// `2 ln(S+1) - (3 alpha/2) (S/(S+2))^{2l}`.
///
/// The coefficient follows from expanding the exact multiplet eigenvalues to
/// second order in `lambda_1/lambda_0`: with `p_J = (1 + c_J delta)/(S+1)^2`
/// and `delta = (lambda_1/lambda_0)^l`, the 6j orthogonality sum gives
/// `sum_J (2J+1) c_J^2 = 3 (S+1)^2` for every S, hence a correction
/// `-(alpha/2) * 3 * delta^2` independent of S.
pub fn renyi_finite_correction(spin: u32, alpha: f64, l: usize) -> f64 {
    let s = f64::from(spin);
    2.0 * (s + 1.0).ln() - 1.5 * alpha * (s / (s + 2.0)).powi(2 * l as i32)
}

/// Rényi and von Neumann entropies at one (S, l) point: closed forms for an
/// infinite block, spectra otherwise.
pub fn entropies_at(spin: u32, block: BlockLength, alpha: f64, ctx: &DeformationContext)
    -> SpectraResult<(f64, f64)>
{
    match block {
        BlockLength::Infinite => Ok((renyi_dsl(spin, alpha, ctx), vn_dsl(spin, ctx))),
        BlockLength::Finite(l) => {
            let spec = if ctx.is_isotropic() {
                isotropic_eigs(spin, l)?
            } else {
                rdm::spectrum_of(&rdm::rdm_finite_block(spin, l, ctx)?, ctx)?
            };
            Ok((spec.renyi_entropy(alpha), spec.vn_entropy()))
        }
    }
}
