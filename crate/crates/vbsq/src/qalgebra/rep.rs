//! Spin-j matrix representations and the coproduct.

use ndarray::Array2;
use ndarray::linalg::kron;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use super::{ q_number, QAlgebraError };

/// Matrices of `J^z`, `J^±` for spin j, in the basis ordered by ascending
/// magnetic quantum number (row k holds m = -j + k).
///
/// Ladder amplitudes follow `J^± |j,m> = sqrt([j∓m][j±m+1]) |j,m±1>`, which
/// pins the commutators `[J^z, J^±] = ±J^±` and `[J^+, J^-] = [2J^z]`.
#[derive(Clone, Debug)]
pub struct SpinRep {
    two_j: HalfInt,
    ctx: DeformationContext,
    pub jz: Array2<f64>,
    pub jplus: Array2<f64>,
    pub jminus: Array2<f64>,
}

impl SpinRep {
    pub fn two_j(&self) -> HalfInt {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j.multiplicity()
    }

    pub fn context(&self) -> &DeformationContext {
        &self.ctx
    }

    /// Basis index of magnetic quantum number m.
    pub fn index_of(&self, m: HalfInt) -> usize {
        ((m.doubled() + self.two_j.doubled()) / 2) as usize
    }

    /// Diagonal matrix `q^{s * J^z}` for half-integer step `s` (typically ±1/2).
    pub fn q_power_jz(&self, s: f64) -> Array2<f64> {
        let d = self.dim();
        let mut out = Array2::zeros((d, d));
        for (k, m) in self.two_j.projections().enumerate() {
            out[(k, k)] = self.ctx.q().powf(s * m.to_f64());
        }
        out
    }
}

/// Build the spin-j representation for doubled spin `two_j >= 0`.
pub fn spin_rep(two_j: HalfInt, ctx: &DeformationContext) -> SpinRep {
    assert!(two_j.doubled() >= 0, "spin must be nonnegative");
    let d = two_j.multiplicity();
    let mut jz = Array2::zeros((d, d));
    let mut jplus = Array2::zeros((d, d));
    let j = two_j;
    for (k, m) in two_j.projections().enumerate() {
        jz[(k, k)] = m.to_f64();
        if k + 1 < d {
            // <j,m+1| J^+ |j,m> = sqrt([j-m][j+m+1])
            let amp = (q_number(j - m, ctx) * q_number(j + m + HalfInt::whole(1), ctx)).sqrt();
            jplus[(k + 1, k)] = amp;
        }
    }
    let jminus = jplus.t().to_owned();
    SpinRep { two_j, ctx: *ctx, jz, jplus, jminus }
}

/// Total-spin operators on the tensor product of two representations,
/// obtained from the coproduct:
///
/// ```text
/// J^±_tot = q^{-J1^z/2} ⊗ J2^± + J1^± ⊗ q^{J2^z/2}
/// J^z_tot = 1 ⊗ J2^z + J1^z ⊗ 1
/// ```
///
/// The product basis is ordered with the first factor slowest, both factors
/// by ascending m.
#[derive(Clone, Debug)]
pub struct CoproductRep {
    pub jz: Array2<f64>,
    pub jplus: Array2<f64>,
    pub jminus: Array2<f64>,
}

impl CoproductRep {
    pub fn dim(&self) -> usize {
        self.jz.nrows()
    }
}

pub fn coproduct_rep(rep1: &SpinRep, rep2: &SpinRep, ctx: &DeformationContext)
    -> Result<CoproductRep, QAlgebraError>
{
    if rep1.context() != ctx || rep2.context() != ctx {
        return Err(QAlgebraError::ContextMismatch);
    }
    let (d1, d2) = (rep1.dim(), rep2.dim());
    let id1 = Array2::eye(d1);
    let id2 = Array2::eye(d2);
    let jplus = kron(&rep1.q_power_jz(-0.5), &rep2.jplus)
        + kron(&rep1.jplus, &rep2.q_power_jz(0.5));
    let jminus = kron(&rep1.q_power_jz(-0.5), &rep2.jminus)
        + kron(&rep1.jminus, &rep2.q_power_jz(0.5));
    let jz = kron(&id1, &rep2.jz) + kron(&rep1.jz, &id2);
    Ok(CoproductRep { jz, jplus, jminus })
}
