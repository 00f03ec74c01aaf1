//! Brute-force ground truth on small periodic chains.
//!
//! Nothing here knows about transfer-matrix analytics: the state vector is
//! built by contracting site matrices over the auxiliary space, the parent
//! Hamiltonian is applied as explicit two-site projectors, and block density
//! matrices come from a literal partial trace. Dense vectors only; clarity
//! over speed.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::linalg::{ self, LinalgError };
use crate::mps::{ self, MpsError };
use crate::qalgebra;
use crate::rdm::{ self, RdmError };

/// Guard on the full state dimension (2S+1)^L.
pub const MAX_STATE_DIM: u64 = 1_000_000;
/// Guard on the partial-trace dimension (2S+1)^l.
pub const MAX_PTRACE_DIM: u64 = 4096;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("SIZE_LIMIT: dimension {dim} exceeds {max}")]
    SizeLimit { dim: u64, max: u64 },

    #[error("block must satisfy 1 <= l < L, got l = {l}, L = {chain}")]
    InvalidBlock { l: usize, chain: usize },

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Mps(#[from] MpsError),

    #[error(transparent)]
    Rdm(#[from] RdmError),
}

pub type OracleResult<T> = Result<T, OracleError>;

/// Explicit state vector of the VBS_q(S) state on a periodic chain.
///
/// Site 0 is the slowest index: the amplitude of `|m_0 m_1 ... m_{L-1}>`
/// sits at `((m_0 + S) (2S+1) + (m_1 + S)) (2S+1) + ...`.
#[derive(Clone, Debug)]
pub struct StateVector {
    spin: u32,
    sites: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn phys_dim(&self) -> usize {
        2 * self.spin as usize + 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

fn checked_pow(base: u64, exp: usize, max: u64) -> OracleResult<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc > max {
            return Err(OracleError::SizeLimit { dim: acc, max });
        }
    }
    Ok(acc)
}

/// Contract the MPS trace into the full state vector.
pub fn build_vbs_state(spin: u32, sites: usize, ctx: &DeformationContext)
    -> OracleResult<StateVector>
{
    assert!(spin >= 1 && sites >= 2);
    let phys = 2 * spin as usize + 1;
    let dim = checked_pow(phys as u64, sites, MAX_STATE_DIM)? as usize;
    let g = mps::g_matrix(spin, ctx);
    let site_mats: Vec<Array2<C64>> = (0..phys).map(|im| g.site_matrix(im)).collect();
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];

    // depth-first over physical indices, carrying the partial auxiliary
    // product so each site multiplies one small matrix
    fn descend(
        site_mats: &[Array2<C64>],
        depth: usize,
        sites: usize,
        partial: &Array2<C64>,
        base: usize,
        amplitudes: &mut [C64],
    ) {
        let phys = site_mats.len();
        if depth == sites {
            let tr: C64 = (0..partial.nrows()).map(|k| partial[(k, k)]).sum();
            amplitudes[base] = tr;
            return;
        }
        for (im, m) in site_mats.iter().enumerate() {
            let next = partial.dot(m);
            // entire subtree vanishes once the partial product does
            if next.iter().all(|z| z.norm_sqr() == 0.0) {
                continue;
            }
            descend(site_mats, depth + 1, sites, &next, base * phys + im, amplitudes);
        }
    }

    let aux = g.aux_dim();
    let eye: Array2<C64> = Array2::eye(aux);
    descend(&site_mats, 0, sites, &eye, 0, &mut amplitudes);
    Ok(StateVector { spin, sites, amplitudes })
}

/// Orthogonal projectors onto the two-site multiplets s = S+1 ..= 2S that
/// the parent Hamiltonian sums over.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    spin: u32,
    projectors: Vec<(u32, Array2<C64>)>,
}

impl ProjectorSet {
    pub fn spin(&self) -> u32 {
        self.spin
    }

    /// Pairs `(s, P_s)`; each projector acts on the (2S+1)^2 two-site space
    /// with the left site as the slower index.
    pub fn projectors(&self) -> &[(u32, Array2<C64>)] {
        &self.projectors
    }
}

pub fn multiplet_projectors(spin: u32, ctx: &DeformationContext) -> ProjectorSet {
    let s_phys = HalfInt::whole(spin as i32);
    let table = qalgebra::qcg(s_phys, s_phys, ctx);
    let phys = 2 * spin as usize + 1;
    let dim = phys * phys;
    let mut projectors = Vec::new();
    for s in (spin + 1)..=(2 * spin) {
        let ss = HalfInt::whole(s as i32);
        let mut p: Array2<C64> = Array2::zeros((dim, dim));
        for m in ss.projections() {
            let mut v = vec![0.0f64; dim];
            for (k1, m1) in s_phys.projections().enumerate() {
                for (k2, m2) in s_phys.projections().enumerate() {
                    v[k1 * phys + k2] = table.get(m1, m2, ss, m);
                }
            }
            for r in 0..dim {
                if v[r] == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    p[(r, c)] += C64::new(v[r] * v[c], 0.0);
                }
            }
        }
        projectors.push((s, p));
    }
    ProjectorSet { spin, projectors }
}

/// Apply a two-site operator at (periodic) sites `(i, i+1)` and return the
/// squared norm of the image.
fn two_site_image_norm_sqr(
    state: &StateVector,
    op: &Array2<C64>,
    site: usize,
) -> f64 {
    let phys = state.phys_dim();
    let sites = state.sites;
    let left = site;
    let right = (site + 1) % sites;
    let stride = |k: usize| phys.pow((sites - 1 - k) as u32);
    let (sl, sr) = (stride(left), stride(right));
    let dim = state.amplitudes.len();
    let mut total = 0.0f64;
    let mut gathered = vec![C64::new(0.0, 0.0); phys * phys];
    // enumerate base indices with zeros at the two active sites
    let mut base = 0usize;
    loop {
        // skip flat indices whose digits at `left`/`right` are nonzero
        let dl = base / sl % phys;
        let dr = base / sr % phys;
        if dl == 0 && dr == 0 {
            for ml in 0..phys {
                for mr in 0..phys {
                    gathered[ml * phys + mr] = state.amplitudes[base + ml * sl + mr * sr];
                }
            }
            for r in 0..phys * phys {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..phys * phys {
                    let w = op[(r, c)];
                    if w != C64::new(0.0, 0.0) {
                        acc += w * gathered[c];
                    }
                }
                total += acc.norm_sqr();
            }
        }
        base += 1;
        if base >= dim {
            break;
        }
    }
    total
}

/// Max over sites and multiplets of `|P_s(i,i+1) psi| / |psi|`; the ground
/// state property drives every one of these to zero.
pub fn hamiltonian_annihilation_check(spin: u32, sites: usize, ctx: &DeformationContext)
    -> OracleResult<f64>
{
    let state = build_vbs_state(spin, sites, ctx)?;
    let projectors = multiplet_projectors(spin, ctx);
    let norm_sqr = state.norm_sqr();
    let mut worst = 0.0f64;
    for site in 0..sites {
        for (_s, p) in projectors.projectors() {
            let image = two_site_image_norm_sqr(&state, p, site);
            worst = worst.max((image / norm_sqr).sqrt());
        }
    }
    Ok(worst)
}

/// Literal partial trace over everything outside the first `l` sites,
/// normalized to unit trace. The result lives in the physical product basis
/// of the block.
pub fn partial_trace(state: &StateVector, l: usize) -> OracleResult<Array2<C64>> {
    if l == 0 || l >= state.sites {
        return Err(OracleError::InvalidBlock { l, chain: state.sites });
    }
    let phys = state.phys_dim() as u64;
    let rows = checked_pow(phys, l, MAX_PTRACE_DIM)? as usize;
    let cols = state.amplitudes.len() / rows;
    let norm_sqr = state.norm_sqr();
    let mut rho: Array2<C64> = Array2::zeros((rows, rows));
    for r in 0..rows {
        for rp in 0..rows {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..cols {
                acc += state.amplitudes[r * cols + c]
                    * state.amplitudes[rp * cols + c].conj();
            }
            rho[(r, rp)] = acc / norm_sqr;
        }
    }
    Ok(rho)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix; deterministic cyclic Jacobi.
pub fn hermitian_eigs(matrix: &Array2<C64>) -> OracleResult<linalg::HermitianEigen> {
    Ok(linalg::hermitian_eigs(matrix)?)
}

/// Sorted nonzero spectrum of the brute-force block density matrix,
/// descending. Uses whichever side of the bipartition is smaller; the
/// nonzero spectra coincide.
pub fn oracle_block_spectrum(spin: u32, l: usize, chain: usize, ctx: &DeformationContext)
    -> OracleResult<Vec<f64>>
{
    if l == 0 || l >= chain {
        return Err(OracleError::InvalidBlock { l, chain });
    }
    let state = build_vbs_state(spin, chain, ctx)?;
    let side = l.min(chain - l);
    let rho = partial_trace(&state, side)?;
    let eig = hermitian_eigs(&rho)?;
    let mut values: Vec<f64> = eig.values;
    values.reverse();
    Ok(values)
}

/// Compare the brute-force block spectrum against the transfer-matrix
/// density matrix of the same (`l`, `L`); returns the max absolute deviation
/// over the union of nonzero eigenvalues.
pub fn crosscheck_rdm(spin: u32, l: usize, chain: usize, ctx: &DeformationContext)
    -> OracleResult<f64>
{
    let brute = oracle_block_spectrum(spin, l, chain, ctx)?;
    let analytic_rdm = rdm::rdm_finite_chain(spin, l, chain, ctx)?;
    let analytic = rdm::raw_spectrum(&analytic_rdm)?;
    let tol = 1e-12;
    let n = brute.iter().filter(|&&p| p > tol).count()
        .max(analytic.iter().filter(|&&p| p > tol).count());
    let mut worst = 0.0f64;
    for k in 0..n {
        let b = brute.get(k).copied().unwrap_or(0.0);
        let a = analytic.get(k).copied().unwrap_or(0.0);
        worst = worst.max((b - a).abs());
    }
    Ok(worst)
}
