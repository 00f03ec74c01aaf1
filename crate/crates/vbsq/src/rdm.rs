//! Exact reduced density matrices of a block of `l` contiguous spins.
//!
//! The state restricted to a block is spanned by the (S+1)^2 boundary
//! vectors `A_ab` (one per auxiliary index pair), so every block spectrum
//! lives in that space regardless of `l`. The density matrix returned here
//! is the Hermitian representative
//!
//! ```text
//! rho = Gram^{1/2} · W · Gram^{1/2} / N ,
//! ```
//!
//! where `Gram` is the overlap matrix of the block boundary vectors
//! (a regrouped power of the transfer matrix), `W` the overlap matrix of the
//! environment, and `N` the norm of the chain; its nonzero spectrum equals
//! that of the physical partial trace by construction. For an infinite
//! environment `W` collapses to the dominant transfer projector, and in the
//! double scaling limit the matrix becomes diagonal with entries
//! `q^{-(a+b)} / [S+1]^2`.
//!
//! Everything is block-diagonal in the sector label `M = a - b` ranging over
//! `-S ..= S`; sector M has dimension `S + 1 - |M|`. The non-Hermitian
//! product form `sum_j (lambda_j/lambda_0)^l sum_m Q_jm ⊗ Q_jm` and its
//! per-sector expression in the (v_JM, v̄_JM) basis pair are also exposed;
//! they share the spectrum with the Hermitian representative (the tests pin
//! this via trace powers) and the v-basis form is diagonal exactly at q = 1.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::linalg::{ self, LinalgError };
use crate::mps::{ self, MpsError, TransferSpectrum };
use crate::qalgebra::{ self, f_element, q_number };

/// Block length: a positive number of sites or the double scaling limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockLength {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Error)]
pub enum RdmError {
    #[error("block length must satisfy 1 <= l < L, got l = {l}, L = {chain}")]
    InvalidBlock { l: usize, chain: usize },

    #[error("NEGATIVE_EIGENVALUE: p = {0:.3e} below -1e-10")]
    NegativeEigenvalue(f64),

    #[error("matrix is not block-diagonal in the sector label (off-block mass {0:.3e})")]
    NotBlockDiagonal(f64),

    #[error(transparent)]
    Mps(#[from] MpsError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type RdmResult<T> = Result<T, RdmError>;

// ---------------------------------------------------------------------------
// Q_jm building blocks
// ---------------------------------------------------------------------------

/// The (S+1)x(S+1) matrix `Q_jm` with entries
/// `(Q_jm)_{ac} = (-1)^{a+S/2} q^{-a/2} / sqrt([S+1]) * C(S/2,-a; S/2,c | j,m)`,
/// supported on the single diagonal `m = c - a`.
#[derive(Clone, Debug)]
pub struct QBlockMatrix {
    pub two_j: HalfInt,
    pub two_m: HalfInt,
    pub matrix: Array2<f64>,
}

pub fn q_block(spin: u32, two_j: HalfInt, two_m: HalfInt, ctx: &DeformationContext)
    -> QBlockMatrix
{
    assert!(two_j.doubled() >= 0 && two_j.doubled() <= 2 * spin as i32, "need 0 <= j <= S");
    assert!(two_m.doubled().abs() <= two_j.doubled(), "need |m| <= j");
    let s_half = HalfInt::new(spin as i32);
    let table = qalgebra::qcg(s_half, s_half, ctx);
    let aux = spin as usize + 1;
    let norm = q_number(HalfInt::whole(spin as i32 + 1), ctx).sqrt();
    let q = ctx.q();
    let mut matrix = Array2::zeros((aux, aux));
    for ia in 0..aux {
        let a = HalfInt::new(2 * ia as i32 - spin as i32);
        for ic in 0..aux {
            let c = HalfInt::new(2 * ic as i32 - spin as i32);
            if (c - a) != two_m {
                continue;
            }
            let cg = table.get(-a, c, two_j, two_m);
            if cg == 0.0 {
                continue;
            }
            let sign = (a + s_half).phase().re; // a + S/2 is integral
            matrix[(ia, ic)] = sign * q.powf(-a.to_f64() / 2.0) / norm * cg;
        }
    }
    QBlockMatrix { two_j, two_m, matrix }
}

// ---------------------------------------------------------------------------
// Reduced density matrix
// ---------------------------------------------------------------------------

/// Hermitian reduced density matrix on the (S+1)^2 boundary space, block
/// diagonal in the sector label M = a - b.
#[derive(Clone, Debug)]
pub struct ReducedDensityMatrix {
    spin: u32,
    q: f64,
    block: BlockLength,
    matrix: Array2<C64>,
}

impl ReducedDensityMatrix {
    /// Wrap an externally assembled boundary-space matrix. It must be
    /// Hermitian and block-diagonal in M = a - b for [`spectrum_of`] to
    /// accept it.
    pub fn from_matrix(spin: u32, q: f64, block: BlockLength, matrix: Array2<C64>) -> Self {
        assert_eq!(matrix.nrows(), (spin as usize + 1).pow(2));
        Self { spin, q, block, matrix }
    }

    pub fn spin(&self) -> u32 {
        self.spin
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn block_length(&self) -> BlockLength {
        self.block
    }

    /// Auxiliary dimension S + 1.
    pub fn aux_dim(&self) -> usize {
        self.spin as usize + 1
    }

    /// Full matrix over grouped pairs; row index is `ia * (S+1) + ib`.
    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows()).map(|k| self.matrix[(k, k)].re).sum()
    }

    /// Sector labels M = -S ..= S.
    pub fn sectors(&self) -> impl Iterator<Item = i32> {
        let s = self.spin as i32;
        -s..=s
    }

    /// Grouped-pair indices `(ia, ib)` belonging to sector M, ascending.
    pub fn sector_members(&self, m: i32) -> Vec<(usize, usize)> {
        sector_members(self.spin, m)
    }

    /// Dense block of sector M, of dimension S + 1 - |M|.
    pub fn sector_block(&self, m: i32) -> Array2<C64> {
        let aux = self.aux_dim();
        let members = self.sector_members(m);
        let n = members.len();
        let mut out = Array2::zeros((n, n));
        for (r, &(ia, ib)) in members.iter().enumerate() {
            for (c, &(ic, id)) in members.iter().enumerate() {
                out[(r, c)] = self.matrix[(ia * aux + ib, ic * aux + id)];
            }
        }
        out
    }

    /// Total weight of entries connecting different sectors; zero for every
    /// matrix built by this module.
    pub fn off_sector_mass(&self) -> f64 {
        let aux = self.aux_dim();
        let mut mass = 0.0f64;
        for ia in 0..aux {
            for ib in 0..aux {
                for ic in 0..aux {
                    for id in 0..aux {
                        if ia as i32 - ib as i32 != ic as i32 - id as i32 {
                            mass = mass.max(self.matrix[(ia * aux + ib, ic * aux + id)].norm());
                        }
                    }
                }
            }
        }
        mass
    }
}

fn sector_members(spin: u32, m: i32) -> Vec<(usize, usize)> {
    let aux = spin as usize + 1;
    let mut out = Vec::new();
    for ia in 0..aux {
        let ib = ia as i32 - m;
        if (0..aux as i32).contains(&ib) {
            out.push((ia, ib as usize));
        }
    }
    out
}

/// Double scaling limit: diagonal entries `q^{-(a+b)} / [S+1]^2`.
pub fn rdm_double_scaling(spin: u32, ctx: &DeformationContext) -> ReducedDensityMatrix {
    assert!(spin >= 1);
    let aux = spin as usize + 1;
    let dim = aux * aux;
    let norm = q_number(HalfInt::whole(spin as i32 + 1), ctx).powi(2);
    let q = ctx.q();
    let mut matrix = Array2::zeros((dim, dim));
    for ia in 0..aux {
        let a = 2 * ia as i32 - spin as i32;
        for ib in 0..aux {
            let b = 2 * ib as i32 - spin as i32;
            let w = q.powf(-f64::from(a + b) / 2.0) / norm;
            matrix[(ia * aux + ib, ia * aux + ib)] = C64::new(w, 0.0);
        }
    }
    ReducedDensityMatrix {
        spin,
        q: ctx.q(),
        block: BlockLength::Infinite,
        matrix,
    }
}

/// Gram matrix of the block boundary vectors over one sector:
/// `Gram_{(ab),(cd)} = [G^l / lambda_0^l]_{(a,c),(b,d)}`.
fn sector_gram(
    spectrum: &TransferSpectrum,
    power: &Array2<C64>,
    members: &[(usize, usize)],
) -> Array2<C64> {
    let aux = spectrum.spin() as usize + 1;
    let n = members.len();
    let mut out = Array2::zeros((n, n));
    for (r, &(ia, ib)) in members.iter().enumerate() {
        for (c, &(ic, id)) in members.iter().enumerate() {
            out[(r, c)] = power[(ia * aux + ic, ib * aux + id)];
        }
    }
    out
}

/// Environment overlap matrix over one sector:
/// `W_{(ab),(cd)} = [G^n / lambda_0^n]_{(d,b),(c,a)}`.
fn sector_env(
    spectrum: &TransferSpectrum,
    power: &Array2<C64>,
    members: &[(usize, usize)],
) -> Array2<C64> {
    let aux = spectrum.spin() as usize + 1;
    let n = members.len();
    let mut out = Array2::zeros((n, n));
    for (r, &(ia, ib)) in members.iter().enumerate() {
        for (c, &(ic, id)) in members.iter().enumerate() {
            out[(r, c)] = power[(id * aux + ib, ic * aux + ia)];
        }
    }
    out
}

fn assemble_sectorwise<F>(spin: u32, ctx: &DeformationContext, block: BlockLength, f: F)
    -> RdmResult<ReducedDensityMatrix>
where
    F: Fn(i32, &[(usize, usize)]) -> RdmResult<Array2<C64>>,
{
    let aux = spin as usize + 1;
    let dim = aux * aux;
    let mut matrix = Array2::zeros((dim, dim));
    for m in -(spin as i32)..=(spin as i32) {
        let members = sector_members(spin, m);
        let block_m = f(m, &members)?;
        for (r, &(ia, ib)) in members.iter().enumerate() {
            for (c, &(ic, id)) in members.iter().enumerate() {
                matrix[(ia * aux + ib, ic * aux + id)] = block_m[(r, c)];
            }
        }
    }
    Ok(ReducedDensityMatrix { spin, q: ctx.q(), block, matrix })
}

/// Reduced density matrix of a block of `l >= 1` spins inside an infinite
/// chain: the environment overlap collapses onto the dominant transfer
/// projector, giving `Gram^{1/2} P0 Gram^{1/2}` sector by sector.
pub fn rdm_finite_block(spin: u32, l: usize, ctx: &DeformationContext)
    -> RdmResult<ReducedDensityMatrix>
{
    assert!(spin >= 1);
    assert!(l >= 1, "block length must be >= 1");
    let spectrum = mps::transfer_spectrum(spin, ctx)?;
    let gram_full = spectrum.power_over_lambda0(l);
    let p0_full = spectrum.projector(0);
    assemble_sectorwise(spin, ctx, BlockLength::Finite(l), |_m, members| {
        let gram = sector_gram(&spectrum, &gram_full, members);
        let env = sector_env(&spectrum, &p0_full, members);
        let root = linalg::psd_sqrt(&gram, 1e-10)?;
        Ok(root.dot(&env).dot(&root))
    })
}

/// Exact reduced density matrix of `l` spins in a periodic chain of `L`
/// sites, from the full spectral decomposition of the transfer matrix in
/// both the block and environment factors.
pub fn rdm_finite_chain(spin: u32, l: usize, chain: usize, ctx: &DeformationContext)
    -> RdmResult<ReducedDensityMatrix>
{
    assert!(spin >= 1);
    if l == 0 || l >= chain {
        return Err(RdmError::InvalidBlock { l, chain });
    }
    let spectrum = mps::transfer_spectrum(spin, ctx)?;
    let gram_full = spectrum.power_over_lambda0(l);
    let env_full = spectrum.power_over_lambda0(chain - l);
    let norm = spectrum.trace_power_over_lambda0(chain);
    assemble_sectorwise(spin, ctx, BlockLength::Finite(l), |_m, members| {
        let gram = sector_gram(&spectrum, &gram_full, members);
        let env = sector_env(&spectrum, &env_full, members);
        let root = linalg::psd_sqrt(&gram, 1e-10)?;
        Ok(root.dot(&env).dot(&root) / C64::new(norm, 0.0))
    })
}

/// Route an optionally infinite block length.
pub fn rdm_for_block(spin: u32, block: BlockLength, ctx: &DeformationContext)
    -> RdmResult<ReducedDensityMatrix>
{
    match block {
        BlockLength::Infinite => Ok(rdm_double_scaling(spin, ctx)),
        BlockLength::Finite(l) => rdm_finite_block(spin, l, ctx),
    }
}

// ---------------------------------------------------------------------------
// Alternative forms from the analytic development (validation surfaces)
// ---------------------------------------------------------------------------

/// The tensor-product form `sum_j (lambda_j/lambda_0)^l sum_m Q_jm ⊗ Q_jm`.
///
/// Real but not symmetric for q < 1; it is similar to the Hermitian
/// representative and shares its spectrum.
pub fn rho_product_form(spin: u32, l: usize, ctx: &DeformationContext)
    -> RdmResult<Array2<f64>>
{
    let spectrum = mps::transfer_spectrum(spin, ctx)?;
    let aux = spin as usize + 1;
    let dim = aux * aux;
    let mut out = Array2::zeros((dim, dim));
    for j in 0..=spin {
        let jj = HalfInt::whole(j as i32);
        let w = spectrum.ratio(j).powi(l as i32);
        for m in jj.projections() {
            let qjm = q_block(spin, jj, m, ctx).matrix;
            for ia in 0..aux {
                for ic in 0..aux {
                    let left = qjm[(ia, ic)];
                    if left == 0.0 {
                        continue;
                    }
                    for ib in 0..aux {
                        for id in 0..aux {
                            out[(ia * aux + ib, ic * aux + id)] +=
                                w * left * qjm[(ib, id)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Matrix elements of the block density matrix in the non-orthonormal
/// (v_JM, v̄_JM) basis pair of one sector: rows and columns run over
/// J = |M| ..= S. Diagonal exactly at q = 1.
pub fn sector_matrix_vjm(spin: u32, l: usize, m: i32, ctx: &DeformationContext)
    -> RdmResult<Array2<f64>>
{
    assert!(m.unsigned_abs() <= spin);
    let spectrum = mps::transfer_spectrum(spin, ctx)?;
    let s_half = HalfInt::new(spin as i32);
    let table = qalgebra::qcg(s_half, s_half, ctx);
    let q = ctx.q();
    let mm = HalfInt::whole(m);
    let js: Vec<i32> = (m.abs()..=spin as i32).collect();
    let n = js.len();
    let norm2 = q_number(HalfInt::whole(spin as i32 + 1), ctx).powi(2);

    // beta_J = 1 + sum_{j>=1} [2j+1] (lambda_j/lambda_0)^l F_q[j J S/2; S/2 S/2 S/2]
    let beta: Vec<f64> = js.iter()
        .map(|&jcol| {
            let mut acc = 1.0;
            for j in 1..=spin {
                let f = f_element(
                    HalfInt::whole(j as i32),
                    s_half,
                    s_half,
                    HalfInt::whole(jcol),
                    s_half,
                    s_half,
                    ctx,
                );
                acc += q_number(HalfInt::whole(2 * j as i32 + 1), ctx)
                    * spectrum.ratio(j).powi(l as i32)
                    * f;
            }
            acc
        })
        .collect();

    // K_{J'J}(M) = sum_{a} q^{-(a+b)} C(S/2,a;S/2,-b|J',M) C(S/2,a;S/2,-b|J,M),
    // b = a - M
    let kmat = {
        let mut k = Array2::zeros((n, n));
        for (r, &jp) in js.iter().enumerate() {
            for (c, &jc) in js.iter().enumerate() {
                let mut acc = 0.0;
                for a in s_half.projections() {
                    let b = a - mm;
                    if b.doubled().abs() > s_half.doubled() {
                        continue;
                    }
                    let w = q.powf(-(a + b).to_f64());
                    acc += w
                        * table.get(a, -b, HalfInt::whole(jp), mm)
                        * table.get(a, -b, HalfInt::whole(jc), mm);
                }
                k[(r, c)] = acc;
            }
        }
        k
    };

    let mut out = Array2::zeros((n, n));
    for (r, &jp) in js.iter().enumerate() {
        for (c, &jc) in js.iter().enumerate() {
            let sign = HalfInt::whole(jp - jc).phase().re;
            let dims = (q_number(HalfInt::whole(2 * jp + 1), ctx)
                / q_number(HalfInt::whole(2 * jc + 1), ctx)).sqrt();
            out[(r, c)] = sign * dims * beta[c] * kmat[(r, c)] / norm2;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Spectrum extraction
// ---------------------------------------------------------------------------

/// One degeneracy group of the block spectrum.
#[derive(Clone, Debug)]
pub struct SpectrumGroup {
    /// Representative eigenvalue (mean over the group).
    pub p: f64,
    pub degeneracy: usize,
    /// Entanglement energy -ln p, absent for vanishing eigenvalues.
    pub epsilon: Option<f64>,
    /// Sector label M of every member, ascending (multiset).
    pub sectors: Vec<i32>,
}

impl SpectrumGroup {
    /// Sector labels joined for data files, e.g. `-1;0;1`.
    pub fn sector_label(&self) -> String {
        let labels: Vec<String> = self.sectors.iter().map(i32::to_string).collect();
        labels.join(";")
    }
}

/// Eigenvalues of a block density matrix, sorted descending and grouped
/// within `eps_degeneracy`; entanglement energies attach to every
/// nonvanishing eigenvalue.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    groups: Vec<SpectrumGroup>,
}

impl BlockSpectrum {
    /// Group raw `(p, sector)` pairs; used by the closed-form spectra too.
    ///
    /// Grouping uses a tolerance relative to the group anchor: degenerate
    /// multiplets coincide to machine precision at any scale, while distinct
    /// eigenvalues at strong deformation can sit many decades below the
    /// leading one and must not be conflated.
    pub fn from_values(mut values: Vec<(f64, i32)>, ctx: &DeformationContext)
        -> RdmResult<Self>
    {
        for &(p, _) in &values {
            if p < -1e-10 {
                return Err(RdmError::NegativeEigenvalue(p));
            }
        }
        // clamp fp noise and vanishing weights
        for v in values.iter_mut() {
            if v.0 < ctx.eps_zero() {
                v.0 = v.0.max(0.0);
            }
        }
        values.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let eps = ctx.eps_degeneracy();
        let mut groups: Vec<SpectrumGroup> = Vec::new();
        let mut i = 0;
        while i < values.len() {
            let anchor = values[i].0;
            let mut members = vec![values[i].1];
            let mut sum = values[i].0;
            let mut jdx = i + 1;
            while jdx < values.len() && (anchor - values[jdx].0) <= eps * anchor {
                members.push(values[jdx].1);
                sum += values[jdx].0;
                jdx += 1;
            }
            let degeneracy = jdx - i;
            let p = sum / degeneracy as f64;
            members.sort_unstable();
            groups.push(SpectrumGroup {
                p,
                degeneracy,
                epsilon: (p > ctx.eps_zero()).then(|| -p.ln()),
                sectors: members,
            });
            i = jdx;
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[SpectrumGroup] {
        &self.groups
    }

    /// Flattened eigenvalues, descending, degeneracies expanded.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.groups.iter()
            .flat_map(|g| std::iter::repeat(g.p).take(g.degeneracy))
            .collect()
    }

    /// Eigenvalues above `tol`, descending.
    pub fn nonzero_eigenvalues(&self, tol: f64) -> Vec<f64> {
        self.eigenvalues().into_iter().filter(|&p| p > tol).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.groups.iter().map(|g| g.degeneracy).sum()
    }

    pub fn trace(&self) -> f64 {
        self.groups.iter().map(|g| g.p * g.degeneracy as f64).sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.groups.iter()
            .filter(|g| g.p > tol)
            .map(|g| g.degeneracy)
            .sum()
    }

    /// Von Neumann entropy `-sum p ln p` over nonvanishing eigenvalues.
    pub fn vn_entropy(&self) -> f64 {
        self.groups.iter()
            .filter(|g| g.p > 0.0)
            .map(|g| -(g.degeneracy as f64) * g.p * g.p.ln())
            .sum()
    }

    /// Rényi entropy `ln(sum p^alpha) / (1 - alpha)`.
    pub fn renyi_entropy(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0 && alpha != 1.0);
        let s: f64 = self.groups.iter()
            .filter(|g| g.p > 0.0)
            .map(|g| g.degeneracy as f64 * g.p.powf(alpha))
            .sum();
        s.ln() / (1.0 - alpha)
    }
}

/// Raw eigenvalues of a reduced density matrix, descending, without any
/// degeneracy grouping; sector-wise Hermitian diagonalization.
pub fn raw_spectrum(rdm: &ReducedDensityMatrix) -> RdmResult<Vec<f64>> {
    let mut values = Vec::new();
    for m in rdm.sectors() {
        let block = rdm.sector_block(m);
        if block.is_empty() {
            continue;
        }
        values.extend(linalg::hermitian_eigs(&block)?.values);
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(values)
}

/// Diagonalize a reduced density matrix sector by sector.
pub fn spectrum_of(rdm: &ReducedDensityMatrix, ctx: &DeformationContext)
    -> RdmResult<BlockSpectrum>
{
    let off = rdm.off_sector_mass();
    if off > 1e-10 * linalg::max_abs(rdm.matrix()).max(1.0) {
        return Err(RdmError::NotBlockDiagonal(off));
    }
    let mut values = Vec::new();
    for m in rdm.sectors() {
        let block = rdm.sector_block(m);
        if block.is_empty() {
            continue;
        }
        let eig = linalg::hermitian_eigs(&block)?;
        for lam in eig.values {
            values.push((lam, m));
        }
    }
    BlockSpectrum::from_values(values, ctx)
}
