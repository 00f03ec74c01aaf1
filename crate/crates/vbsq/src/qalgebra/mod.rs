//! SU_q(2) representation machinery.
//!
//! The deformed algebra is generated by `J^z`, `J^±` with
//! `[J^+, J^-] = [2 J^z]` and `[J^z, J^±] = ±J^±`, where the q-number
//! bracket is `[n] = (q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2})`. Everything
//! downstream — Clebsch-Gordan tables, 6j symbols, transfer spectra — is
//! built from the operations in this module.

mod qcg;
mod recoupling;
mod rep;

pub use qcg::{ qcg, QcgTable };
pub use recoupling::{ f_element, q6j };
pub use rep::{ coproduct_rep, spin_rep, CoproductRep, SpinRep };

use thiserror::Error;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;

#[derive(Debug, Error, PartialEq)]
pub enum QAlgebraError {
    #[error("q-factorial argument must be nonnegative, got {0}")]
    NegativeFactorial(i32),

    #[error("coproduct factors must share one deformation context")]
    ContextMismatch,
}

/// The q-number `[n] = (q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2})`.
///
/// At q = 1 an exact limit branch returns `n` itself; the raw quotient is
/// 0/0 there and evaluating it would trade an exact value for catastrophic
/// cancellation. Odd under negation: `[-n] = -[n]`.
pub fn q_number(n: impl Into<HalfInt>, ctx: &DeformationContext) -> f64 {
    let n = n.into().to_f64();
    let q = ctx.q();
    if ctx.is_isotropic() {
        n
    } else {
        (q.powf(n / 2.0) - q.powf(-n / 2.0)) / (q.sqrt() - 1.0 / q.sqrt())
    }
}

/// `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn q_factorial(n: i32, ctx: &DeformationContext) -> Result<f64, QAlgebraError> {
    if n < 0 {
        return Err(QAlgebraError::NegativeFactorial(n));
    }
    Ok((1..=n).map(|k| q_number(k, ctx)).product())
}
