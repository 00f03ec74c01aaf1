//! q-deformed 6j symbols and F-matrix elements.
//!
//! The 6j symbol is evaluated by direct contraction of three Clebsch-Gordan
//! tables against a fourth: with all couplings in hand,
//!
//! ```text
//! sum_{b,d,k} C(A,a;B,b|D,d) C(B,-b;C,c|K,k) C(D,d;K,k|J,M) (-1)^{-b} q^{b/2}
//!   = (-1)^{A+B+C+J} sqrt([2D+1][2K+1]) {D C B; J A K}_q  C(A,a;C,c|J,M),
//! ```
//!
//! and projecting both sides onto C(A,a;C,c|J,M) isolates the symbol. The
//! slot layout of `{D C B; J A K}` carries triads (A,B,D), (B,C,K), (D,K,J)
//! and (A,C,J); any violated triad gives zero. Half-integer sign exponents
//! are evaluated as exact complex phases and the imaginary part of the
//! result is checked to vanish.

use num_complex::Complex64 as C64;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use super::qcg::qcg;
use super::q_number;

/// q-deformed 6j symbol `{d c b; j a k}_q` in the contraction layout above.
pub fn q6j(
    two_d: HalfInt,
    two_c: HalfInt,
    two_b: HalfInt,
    two_j: HalfInt,
    two_a: HalfInt,
    two_k: HalfInt,
    ctx: &DeformationContext,
) -> f64 {
    let (d, c, b, j, a, k) = (two_d, two_c, two_b, two_j, two_a, two_k);
    if !(HalfInt::triangle(a, b, d)
        && HalfInt::triangle(b, c, k)
        && HalfInt::triangle(d, k, j)
        && HalfInt::triangle(a, c, j))
    {
        return 0.0;
    }
    let t_ab = qcg(a, b, ctx);
    let t_bc = qcg(b, c, ctx);
    let t_dk = qcg(d, k, ctx);
    let t_ac = qcg(a, c, ctx);
    let q = ctx.q();

    // Project at the highest magnetic level M = J of the total spin J.
    let mj = j;
    let mut proj = C64::new(0.0, 0.0);
    for ma in a.projections() {
        let mc = mj - ma;
        if mc.doubled().abs() > c.doubled() {
            continue;
        }
        let outer = t_ac.get(ma, mc, j, mj);
        if outer == 0.0 {
            continue;
        }
        let mut inner = C64::new(0.0, 0.0);
        for mb in b.projections() {
            let md = ma + mb;
            if md.doubled().abs() > d.doubled() {
                continue;
            }
            // second factor C(B,-b; C,c | K,k) forces k = c - b
            let mk = mc - mb;
            if mk.doubled().abs() > k.doubled() {
                continue;
            }
            let c1 = t_ab.get(ma, mb, d, md);
            if c1 == 0.0 {
                continue;
            }
            let c2 = t_bc.get(-mb, mc, k, mk);
            if c2 == 0.0 {
                continue;
            }
            let c3 = t_dk.get(md, mk, j, mj);
            if c3 == 0.0 {
                continue;
            }
            inner += (-mb).phase() * q.powf(mb.to_f64() / 2.0) * c1 * c2 * c3;
        }
        proj += outer * inner;
    }

    let dims = (q_number(d + d + HalfInt::whole(1), ctx)
        * q_number(k + k + HalfInt::whole(1), ctx)).sqrt();
    let phase = (a + b + c + j).phase();
    let value = proj / (phase * dims);
    debug_assert!(
        value.im.abs() < 1e-10 * value.norm().max(1.0),
        "6j imaginary residue {}",
        value.im
    );
    value.re
}

/// F-matrix element `F_q[D C B; J N K]`, with the argument order
/// `(D, B, J, C, N, K)` used by the transfer-matrix eigenvalue formula:
///
/// ```text
/// F_q = (-1)^{D+B+J+C} sqrt([2K+1][2N+1]) {D C B; J N K}_q .
/// ```
pub fn f_element(
    two_d: HalfInt,
    two_b: HalfInt,
    two_j: HalfInt,
    two_c: HalfInt,
    two_n: HalfInt,
    two_k: HalfInt,
    ctx: &DeformationContext,
) -> f64 {
    let sixj = q6j(two_d, two_c, two_b, two_j, two_n, two_k, ctx);
    if sixj == 0.0 {
        return 0.0;
    }
    let dims = (q_number(two_k + two_k + HalfInt::whole(1), ctx)
        * q_number(two_n + two_n + HalfInt::whole(1), ctx)).sqrt();
    let phase = (two_d + two_b + two_j + two_c).phase();
    debug_assert!(phase.im.abs() < 1e-14, "half-integer F-matrix phase");
    phase.re * dims * sixj
}
