//! Dense complex linear algebra for desk-scale matrices.
//!
//! Everything here favors determinism and transparency over speed: the
//! Hermitian eigensolver is a cyclic Jacobi iteration with a fixed sweep
//! order, so identical inputs produce identical eigenpairs bit for bit.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

pub type LinalgResult<T> = Result<T, LinalgError>;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<C64>,
}

pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_deviation(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest |imaginary part| over all entries.
pub fn max_imag(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

fn off_diagonal_norm(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[(p, q)].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

/// Diagonalize a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must be Hermitian within `1e-10 * max(1, |A|)`; it is
/// symmetrized before iterating. Returns eigenvalues in ascending order with
/// orthonormal eigenvectors as the columns of a unitary matrix.
pub fn hermitian_eigs(a: &Array2<C64>) -> LinalgResult<HermitianEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(LinalgError::NotSquare { rows: n, cols: a.ncols() });
    }
    let scale = max_abs(a).max(1.0);
    let dev = hermitian_deviation(a);
    if dev > 1e-10 * scale {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }

    // Work on the Hermitian average so rounding in the input cannot bias the
    // rotations.
    let mut m = a.clone();
    for p in 0..n {
        m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
        for q in (p + 1)..n {
            let avg = 0.5 * (m[(p, q)] + m[(q, p)].conj());
            m[(p, q)] = avg;
            m[(q, p)] = avg.conj();
        }
    }

    let mut vecs: Array2<C64> = Array2::eye(n);
    let target = 1e-14 * frobenius(&m).max(f64::MIN_POSITIVE);
    let max_sweeps = 100;
    let mut sweeps = 0;
    while off_diagonal_norm(&m) > target {
        if sweeps >= max_sweeps {
            return Err(LinalgError::NoConvergence {
                sweeps,
                off: off_diagonal_norm(&m),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let x = apq.norm();
                if x <= 1e-300 {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phi = apq / x;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // annihilation condition: x(c^2 - s^2) + (aqq - app) s c = 0,
                // i.e. t^2 - 2 tau t - 1 = 0; take the small-|t| root
                let tau = (aqq - app) / (2.0 * x);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns p, q of M and of the accumulated unitary rotate the
                // same way; rows follow by Hermiticity.
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[(k, p)];
                        let akq = m[(k, q)];
                        m[(k, p)] = c * akp + s * phi.conj() * akq;
                        m[(k, q)] = -s * phi * akp + c * akq;
                        m[(p, k)] = m[(k, p)].conj();
                        m[(q, k)] = m[(k, q)].conj();
                    }
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp + s * phi.conj() * vkq;
                    vecs[(k, q)] = -s * phi * vkp + c * vkq;
                }
                m[(p, p)] = C64::new(app + t * x, 0.0);
                m[(q, q)] = C64::new(aqq - t * x, 0.0);
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = vecs[(k, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues within `-clamp_tol..0` are treated as exact zeros; anything
/// more negative is reported via `NotHermitian`-style failure upstream, so
/// this function simply clamps.
pub fn psd_sqrt(a: &Array2<C64>, clamp_tol: f64) -> LinalgResult<Array2<C64>> {
    let eig = hermitian_eigs(a)?;
    let n = a.nrows();
    let mut out = Array2::zeros((n, n));
    for (idx, &lam) in eig.values.iter().enumerate() {
        let lam = if lam < 0.0 {
            debug_assert!(lam >= -clamp_tol, "eigenvalue {lam} below -{clamp_tol}");
            0.0
        } else {
            lam
        };
        let r = lam.sqrt();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += r * eig.vectors[(i, idx)] * eig.vectors[(j, idx)].conj();
            }
        }
    }
    Ok(out)
}
