//! Matrix-product representation of the deformed spin-S VBS state and its
//! transfer matrix.
//!
//! The site matrix `g` is (S+1)x(S+1) over an auxiliary spin-S/2 space; each
//! entry is a state vector of the physical spin-S site,
//!
//! ```text
//! (g)_{ab} = sum_m C(S/2,a; S/2,-b | S,m) (-1)^b q^{-b/2} |S,m>,
//! ```
//!
//! so entry (a, b) has support only on m = a - b. For odd S the auxiliary
//! labels are half-integers and `(-1)^b` is a quarter phase; the matrices are
//! complex while every gauge-invariant output is real.
//!
//! The transfer matrix `G_{aa';bb'} = (ḡ)_{ab} (g)_{a'b'}` is diagonalized in
//! closed form: its eigenvalues are q-6j symbols,
//!
//! ```text
//! lambda_j = (-1)^{j+S} [2S+1] {S j S/2; S/2 S/2 S/2}_q ,   0 <= j <= S,
//! ```
//!
//! each (2j+1)-fold degenerate, and after the diagonal similarity
//! `D_{(a,a')} = (-1)^a q^{-a/2}` (acting on the first layer) the
//! eigenvectors are plain q-CG coefficients `(ê_jm)_{aa'} = C(S/2,-a; S/2,a'
//! | j,m)`, orthonormal under the Euclidean pairing. Powers of `G` are
//! reconstructed from the spectral decomposition; a residual check at
//! construction time guards the phase conventions.

use ndarray::{ Array1, Array2, Array3 };
use num_complex::Complex64 as C64;
use thiserror::Error;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::qalgebra::{ self, q_number, q6j };

#[derive(Debug, Error)]
pub enum MpsError {
    #[error(
        "analytic transfer eigensystem mismatch: residual {residual:.3e} at (j={j}, m={m}) \
         signals a phase-convention bug"
    )]
    AnalyticMismatch { j: u32, m: i32, residual: f64 },
}

pub type MpsResult<T> = Result<T, MpsError>;

/// Site matrix of the VBS_q(S) state over the auxiliary spin-S/2 space.
#[derive(Clone, Debug)]
pub struct GMatrix {
    spin: u32,
    // shape (S+1, S+1, 2S+1): auxiliary row, auxiliary column, physical m
    data: Array3<C64>,
}

impl GMatrix {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    /// Auxiliary dimension S + 1.
    pub fn aux_dim(&self) -> usize {
        self.spin as usize + 1
    }

    /// Physical dimension 2S + 1.
    pub fn phys_dim(&self) -> usize {
        2 * self.spin as usize + 1
    }

    /// Doubled auxiliary label 2a at index `ia` (a runs -S/2 ..= S/2).
    pub fn two_a(&self, ia: usize) -> HalfInt {
        HalfInt::new(2 * ia as i32 - self.spin as i32)
    }

    /// Physical magnetic number at index `im` (m runs -S ..= S).
    pub fn phys_m(&self, im: usize) -> HalfInt {
        HalfInt::whole(im as i32 - self.spin as i32)
    }

    /// Amplitude of `|S, m>` in entry (a, b).
    pub fn amp(&self, ia: usize, ib: usize, im: usize) -> C64 {
        self.data[(ia, ib, im)]
    }

    /// The (S+1)x(S+1) auxiliary matrix at fixed physical m.
    pub fn site_matrix(&self, im: usize) -> Array2<C64> {
        let d = self.aux_dim();
        let mut out = Array2::zeros((d, d));
        for ia in 0..d {
            for ib in 0..d {
                out[(ia, ib)] = self.data[(ia, ib, im)];
            }
        }
        out
    }
}

/// Build the site matrix of the VBS_q(S) state.
pub fn g_matrix(spin: u32, ctx: &DeformationContext) -> GMatrix {
    assert!(spin >= 1, "spin must be a positive integer");
    let s_half = HalfInt::new(spin as i32);
    let s_phys = HalfInt::whole(spin as i32);
    let table = qalgebra::qcg(s_half, s_half, ctx);
    let aux = spin as usize + 1;
    let phys = 2 * spin as usize + 1;
    let mut data = Array3::zeros((aux, aux, phys));
    let q = ctx.q();
    for ia in 0..aux {
        let a = HalfInt::new(2 * ia as i32 - spin as i32);
        for ib in 0..aux {
            let b = HalfInt::new(2 * ib as i32 - spin as i32);
            let m = a - b; // selection rule of the coupling
            let im = (m.doubled() / 2 + spin as i32) as usize;
            let cg = table.get(a, -b, s_phys, m);
            if cg != 0.0 {
                data[(ia, ib, im)] = b.phase() * q.powf(-b.to_f64() / 2.0) * cg;
            }
        }
    }
    GMatrix { spin, data }
}

/// Transfer matrix `G_{aa';bb'} = (ḡ)_{ab} (g)_{a'b'}`, a bilinear (not
/// sesquilinear) contraction over the physical index; real for every
/// integer S.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    spin: u32,
    pub matrix: Array2<C64>,
}

impl TransferMatrix {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    /// Grouped dimension (S+1)^2; row (a, a') maps to `ia * (S+1) + ia'`.
    pub fn dim(&self) -> usize {
        (self.spin as usize + 1).pow(2)
    }
}

pub fn transfer_matrix(spin: u32, ctx: &DeformationContext) -> TransferMatrix {
    let g = g_matrix(spin, ctx);
    let aux = g.aux_dim();
    let dim = aux * aux;
    let mut matrix = Array2::zeros((dim, dim));
    for ia in 0..aux {
        for iap in 0..aux {
            for ib in 0..aux {
                for ibp in 0..aux {
                    let mut acc = C64::new(0.0, 0.0);
                    for im in 0..g.phys_dim() {
                        acc += g.amp(ia, ib, im) * g.amp(iap, ibp, im);
                    }
                    matrix[(ia * aux + iap, ib * aux + ibp)] = acc;
                }
            }
        }
    }
    TransferMatrix { spin, matrix }
}

/// Closed-form eigensystem of the transfer matrix.
#[derive(Clone, Debug)]
pub struct TransferSpectrum {
    spin: u32,
    ctx: DeformationContext,
    lambdas: Vec<f64>,
    // hatted projectors P̂_j = sum_m ê_jm ê_jm^T, dim (S+1)^2
    hat_projectors: Vec<Array2<f64>>,
    // eigenvectors ê_jm, indexed [j][m_index]
    eigvecs: Vec<Vec<Array1<f64>>>,
    // diagonal similarity D_{(a,a')} = (-1)^a q^{-a/2}
    similarity: Vec<C64>,
}

impl TransferSpectrum {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    pub fn dim(&self) -> usize {
        (self.spin as usize + 1).pow(2)
    }

    /// Eigenvalue `lambda_j`, (2j+1)-fold degenerate.
    pub fn eigenvalue(&self, j: u32) -> f64 {
        self.lambdas[j as usize]
    }

    /// Ratio `lambda_j / lambda_0`.
    pub fn ratio(&self, j: u32) -> f64 {
        self.lambdas[j as usize] / self.lambdas[0]
    }

    /// Eigenvector ê_jm of the similarity-transformed transfer matrix, as a
    /// vector over the grouped auxiliary pair (a, a').
    pub fn eigenvector(&self, j: u32, m_index: usize) -> &Array1<f64> {
        &self.eigvecs[j as usize][m_index]
    }

    /// Diagonal of the similarity transformation.
    pub fn similarity(&self) -> &[C64] {
        &self.similarity
    }

    /// Spectral projector of `G` itself: `P_j = D^{-1} P̂_j D`.
    pub fn projector(&self, j: u32) -> Array2<C64> {
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for r in 0..dim {
            for c in 0..dim {
                out[(r, c)] = self.hat_projectors[j as usize][(r, c)]
                    * self.similarity[c] / self.similarity[r];
            }
        }
        out
    }

    /// `G^n / lambda_0^n = sum_j (lambda_j/lambda_0)^n P_j` in the natural
    /// grouping; `n = 0` reconstructs the identity.
    pub fn power_over_lambda0(&self, n: usize) -> Array2<C64> {
        let dim = self.dim();
        let mut out: Array2<C64> = Array2::zeros((dim, dim));
        for j in 0..=self.spin {
            let w = self.ratio(j).powi(n as i32);
            let pj = &self.hat_projectors[j as usize];
            for r in 0..dim {
                for c in 0..dim {
                    out[(r, c)] += w * pj[(r, c)] * self.similarity[c] / self.similarity[r];
                }
            }
        }
        out
    }

    /// `tr G^L / lambda_0^L = sum_j (2j+1) (lambda_j/lambda_0)^L`.
    pub fn trace_power_over_lambda0(&self, l: usize) -> f64 {
        (0..=self.spin)
            .map(|j| f64::from(2 * j + 1) * self.ratio(j).powi(l as i32))
            .sum()
    }
}

/// Analytic transfer eigensystem with a numerical residual check.
pub fn transfer_spectrum(spin: u32, ctx: &DeformationContext) -> MpsResult<TransferSpectrum> {
    assert!(spin >= 1, "spin must be a positive integer");
    let s_half = HalfInt::new(spin as i32);
    let aux = spin as usize + 1;
    let dim = aux * aux;
    let q = ctx.q();

    let two_s_plus_1 = q_number(HalfInt::whole(2 * spin as i32 + 1), ctx);
    let lambdas: Vec<f64> = (0..=spin)
        .map(|j| {
            let sixj = q6j(
                HalfInt::whole(spin as i32),
                HalfInt::whole(j as i32),
                s_half, s_half, s_half, s_half,
                ctx,
            );
            let sign = (HalfInt::whole(j as i32 + spin as i32)).phase().re;
            sign * two_s_plus_1 * sixj
        })
        .collect();

    // (ê_jm)_{aa'} = C(S/2,-a; S/2,a' | j,m)
    let table = qalgebra::qcg(s_half, s_half, ctx);
    let mut eigvecs = Vec::with_capacity(spin as usize + 1);
    let mut hat_projectors = Vec::with_capacity(spin as usize + 1);
    for j in 0..=spin {
        let jj = HalfInt::whole(j as i32);
        let mut per_m = Vec::with_capacity(2 * j as usize + 1);
        let mut proj: Array2<f64> = Array2::zeros((dim, dim));
        for m in jj.projections() {
            let mut v: Array1<f64> = Array1::zeros(dim);
            for ia in 0..aux {
                let a = HalfInt::new(2 * ia as i32 - spin as i32);
                for iap in 0..aux {
                    let ap = HalfInt::new(2 * iap as i32 - spin as i32);
                    v[ia * aux + iap] = table.get(-a, ap, jj, m);
                }
            }
            for r in 0..dim {
                for c in 0..dim {
                    proj[(r, c)] += v[r] * v[c];
                }
            }
            per_m.push(v);
        }
        eigvecs.push(per_m);
        hat_projectors.push(proj);
    }

    // D_{(a,a')} = (-1)^a q^{-a/2}, acting on the first layer only.
    let mut similarity = vec![C64::new(0.0, 0.0); dim];
    for ia in 0..aux {
        let a = HalfInt::new(2 * ia as i32 - spin as i32);
        let phi = a.phase() * q.powf(-a.to_f64() / 2.0);
        for iap in 0..aux {
            similarity[ia * aux + iap] = phi;
        }
    }

    let spectrum = TransferSpectrum {
        spin,
        ctx: *ctx,
        lambdas,
        hat_projectors,
        eigvecs,
        similarity,
    };

    // Residual check: (D G D^{-1}) ê_jm = lambda_j ê_jm.
    let g = transfer_matrix(spin, ctx);
    let mut ghat: Array2<C64> = Array2::zeros((dim, dim));
    for r in 0..dim {
        for c in 0..dim {
            ghat[(r, c)] = spectrum.similarity[r] * g.matrix[(r, c)] / spectrum.similarity[c];
        }
    }
    let scale = ghat.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1.0);
    for j in 0..=spin {
        for (mi, v) in spectrum.eigvecs[j as usize].iter().enumerate() {
            let mut worst = 0.0f64;
            for r in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..dim {
                    acc += ghat[(r, c)] * v[c];
                }
                worst = worst.max((acc - spectrum.lambdas[j as usize] * v[r]).norm());
            }
            if worst > 1e-10 * scale {
                return Err(MpsError::AnalyticMismatch {
                    j,
                    m: mi as i32 - j as i32,
                    residual: worst,
                });
            }
        }
    }
    let _ = spectrum.ctx; // context retained for symmetry with other builders
    Ok(spectrum)
}

/// Correlation length `xi = 1 / ln([S+2]/[S])`; finite-size corrections decay
/// on this scale, and `exp(-1/xi) = |lambda_1 / lambda_0|`.
pub fn correlation_length(spin: u32, ctx: &DeformationContext) -> f64 {
    let num = q_number(HalfInt::whole(spin as i32 + 2), ctx);
    let den = q_number(HalfInt::whole(spin as i32), ctx);
    1.0 / (num / den).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_imag;

    fn ctx(q: f64) -> DeformationContext {
        DeformationContext::new(q).unwrap()
    }

    #[test]
    fn g_entries_respect_selection_rule() {
        for q in [0.5, 1.0] {
            for spin in [1u32, 2, 3] {
                let g = g_matrix(spin, &ctx(q));
                for ia in 0..g.aux_dim() {
                    for ib in 0..g.aux_dim() {
                        for im in 0..g.phys_dim() {
                            let m_sel = (g.two_a(ia) - g.two_a(ib)).doubled() / 2
                                + spin as i32;
                            if im as i32 != m_sel {
                                assert_eq!(g.amp(ia, ib, im), C64::new(0.0, 0.0));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn aklt_g_matrix_structure() {
        // S=1, q=1: corners carry |1,±1>, diagonal ±|1,0>/sqrt(2), up to a
        // global phase (here i).
        let g = g_matrix(1, &ctx(1.0));
        let up = g.amp(1, 0, 2); // a=1/2, b=-1/2 -> m=+1
        let down = g.amp(0, 1, 0); // a=-1/2, b=1/2 -> m=-1
        let d0 = g.amp(1, 1, 1); // a=b=1/2 -> m=0
        let d1 = g.amp(0, 0, 1); // a=b=-1/2 -> m=0
        assert!((up.norm() - 1.0).abs() < 1e-13);
        assert!((down.norm() - 1.0).abs() < 1e-13);
        assert!((d0.norm() - 0.5f64.sqrt()).abs() < 1e-13);
        assert!((d1.norm() - 0.5f64.sqrt()).abs() < 1e-13);
        // off-diagonal corners come with opposite signs of the diagonal pair
        let ratio = d0 / d1;
        assert!((ratio.re + 1.0).abs() < 1e-13, "diagonal entries differ by sign");
        let corner_ratio = up / down;
        assert!((corner_ratio.re + 1.0).abs() < 1e-13);
    }

    #[test]
    fn g_matrix_deformed_top_entry() {
        // S=2, q=0.5: <2,2|(g)_{1,-1} = -q^{1/2}
        let q = 0.5;
        let g = g_matrix(2, &ctx(q));
        let amp = g.amp(2, 0, 4); // a=1, b=-1, m=2
        assert!((amp.re + q.sqrt()).abs() < 1e-13);
        assert!(amp.im.abs() < 1e-15);
    }

    #[test]
    fn transfer_matrix_is_real_and_nonzero() {
        for q in [0.3, 1.0] {
            for spin in [1u32, 2, 3] {
                let t = transfer_matrix(spin, &ctx(q));
                assert!(max_imag(&t.matrix) < 1e-12);
                let sum: f64 = t.matrix.iter().map(|z| z.norm()).sum();
                assert!(sum > 0.1);
                assert!(t.matrix.iter().all(|z| z.norm().is_finite()));
            }
        }
    }

    #[test]
    fn spectrum_residual_and_count() {
        for q in [0.4, 0.7, 1.0] {
            for spin in [1u32, 2, 3] {
                let s = transfer_spectrum(spin, &ctx(q)).unwrap();
                let n_pairs: usize = (0..=spin).map(|j| 2 * j as usize + 1).sum();
                assert_eq!(n_pairs, (spin as usize + 1).pow(2));
                // strict decrease of |lambda_j|
                for j in 1..=spin {
                    assert!(
                        s.eigenvalue(j).abs() < s.eigenvalue(j - 1).abs(),
                        "spin {spin} q {q}: |lambda| not strictly decreasing"
                    );
                }
            }
        }
    }

    #[test]
    fn isotropic_ratios_s1_s2() {
        let s1 = transfer_spectrum(1, &ctx(1.0)).unwrap();
        assert!((s1.ratio(1) + 1.0 / 3.0).abs() < 1e-13);
        let s2 = transfer_spectrum(2, &ctx(1.0)).unwrap();
        assert!((s2.ratio(1) + 0.5).abs() < 1e-13);
        assert!((s2.ratio(2) - 0.1).abs() < 1e-13);
    }

    #[test]
    fn spectral_decomposition_reconstructs_powers() {
        for q in [0.5, 1.0] {
            for spin in [1u32, 2] {
                let c = ctx(q);
                let s = transfer_spectrum(spin, &c).unwrap();
                let g = transfer_matrix(spin, &c);
                let lambda0 = s.eigenvalue(0);
                // identity at n = 0
                let id = s.power_over_lambda0(0);
                for r in 0..s.dim() {
                    for c2 in 0..s.dim() {
                        let expect = f64::from(r == c2);
                        assert!((id[(r, c2)] - expect).norm() < 1e-11);
                    }
                }
                let mut direct: Array2<C64> = Array2::eye(s.dim());
                for n in 1..=6usize {
                    direct = direct.dot(&g.matrix);
                    let spectral = s.power_over_lambda0(n);
                    let scale = lambda0.powi(n as i32);
                    for r in 0..s.dim() {
                        for c2 in 0..s.dim() {
                            assert!(
                                (direct[(r, c2)] / scale - spectral[(r, c2)]).norm() < 1e-10,
                                "spin {spin} q {q} n {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dominant_projector_closed_form() {
        // (P_0)_{(x,y),(u,v)} = delta_{xy} delta_{uv} q^{-u} / [S+1]
        for q in [0.4, 1.0] {
            for spin in [1u32, 2, 3] {
                let c = ctx(q);
                let s = transfer_spectrum(spin, &c).unwrap();
                let p0 = s.projector(0);
                let aux = spin as usize + 1;
                let norm = q_number(HalfInt::whole(spin as i32 + 1), &c);
                for x in 0..aux {
                    for y in 0..aux {
                        for u in 0..aux {
                            for v in 0..aux {
                                let expect = if x == y && u == v {
                                    let two_u = 2 * u as i32 - spin as i32;
                                    q.powf(-f64::from(two_u) / 2.0) / norm
                                } else {
                                    0.0
                                };
                                let got = p0[(x * aux + y, u * aux + v)];
                                assert!(
                                    (got - expect).norm() < 1e-12,
                                    "spin {spin} q {q} ({x}{y})({u}{v}): {got} vs {expect}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn correlation_length_matches_subdominant_ratio() {
        for q in [0.3, 0.75, 1.0] {
            for spin in 1u32..=5 {
                let c = ctx(q);
                let xi = correlation_length(spin, &c);
                let s = transfer_spectrum(spin, &c).unwrap();
                assert!(
                    ((-1.0 / xi).exp() - s.ratio(1).abs()).abs() < 1e-12,
                    "spin {spin} q {q}"
                );
            }
        }
        // isotropic S=2: xi = 1/ln 2
        let xi = correlation_length(2, &ctx(1.0));
        assert!((xi - 1.0 / 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn correlation_length_decreases_with_deformation() {
        let spin = 2;
        let mut prev = f64::INFINITY;
        for q in [1.0, 0.8, 0.6, 0.4, 0.2] {
            let xi = correlation_length(spin, &ctx(q));
            assert!(xi < prev, "xi must shrink as q decreases");
            prev = xi;
        }
    }

    #[test]
    fn two_site_overlap_vanishes_beyond_spin() {
        // Projecting g·g onto any multiplet with J > S gives zero: the
        // MPS-level ground-state property.
        for q in [0.3, 0.7, 1.0] {
            for spin in [1u32, 2, 3] {
                let c = ctx(q);
                let g = g_matrix(spin, &c);
                let aux = g.aux_dim();
                let phys = g.phys_dim();
                let s_phys = HalfInt::whole(spin as i32);
                let table = qalgebra::qcg(s_phys, s_phys, &c);
                for ia in 0..aux {
                    for ic in 0..aux {
                        // (g·g)_{ac} as a two-site state vector
                        let mut vec2 = vec![C64::new(0.0, 0.0); phys * phys];
                        for ib in 0..aux {
                            for im1 in 0..phys {
                                let a1 = g.amp(ia, ib, im1);
                                if a1 == C64::new(0.0, 0.0) {
                                    continue;
                                }
                                for im2 in 0..phys {
                                    let a2 = g.amp(ib, ic, im2);
                                    vec2[im1 * phys + im2] += a1 * a2;
                                }
                            }
                        }
                        for two_j in (spin as i32 + 1)..=(2 * spin as i32) {
                            let j = HalfInt::whole(two_j);
                            for m in j.projections() {
                                let mut overlap = C64::new(0.0, 0.0);
                                for im1 in 0..phys {
                                    let m1 = g.phys_m(im1);
                                    for im2 in 0..phys {
                                        let m2 = g.phys_m(im2);
                                        let cg = table.get(m1, m2, j, m);
                                        if cg != 0.0 {
                                            overlap += cg * vec2[im1 * phys + im2];
                                        }
                                    }
                                }
                                assert!(
                                    overlap.norm() < 1e-10,
                                    "spin {spin} q {q} J {two_j} overlap {}",
                                    overlap.norm()
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
