//! q-deformed Clebsch-Gordan tables.
//!
//! A table for the coupling j1 ⊗ j2 is built multiplet by multiplet: the
//! highest-weight vector of each total spin J is the one-dimensional
//! complement of the already-constructed higher multiplets inside the
//! m1 + m2 = J weight space (equivalently, the kernel of the coproduct
//! J^+ there), and the rest of the multiplet follows by exact lowering
//! with `J^- |J,M> = sqrt([J+M][J-M+1]) |J,M-1>`.
//!
//! Phase convention: the coefficient on |j1, j1> ⊗ |j2, J-j1> is positive
//! for every J. All coefficients are real, and for real q the coproduct
//! representation is a *-representation in the standard product inner
//! product, so the table is an orthogonal matrix.

use std::collections::BTreeMap;
use std::io::{ self, Write };
use ndarray::Array1;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::cli::format_f64;
use super::{ coproduct_rep, q_number, spin_rep };

/// Clebsch-Gordan coefficients `<j1 m1; j2 m2 | J M>_q` for one (j1, j2),
/// keyed by doubled quantum numbers.
#[derive(Clone, Debug)]
pub struct QcgTable {
    two_j1: HalfInt,
    two_j2: HalfInt,
    coefficients: BTreeMap<(i32, i32, i32, i32), f64>,
}

impl QcgTable {
    pub fn two_j1(&self) -> HalfInt {
        self.two_j1
    }

    pub fn two_j2(&self) -> HalfInt {
        self.two_j2
    }

    /// `<j1 m1; j2 m2 | J M>_q`; zero for any combination outside the
    /// triangle relation or selection rule.
    pub fn get(&self, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
        self.coefficients
            .get(&(m1.doubled(), m2.doubled(), j.doubled(), m.doubled()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Total spins J of the decomposition, descending from j1 + j2.
    pub fn total_spins(&self) -> impl Iterator<Item = HalfInt> {
        let top = self.two_j1 + self.two_j2;
        let bottom = (self.two_j1 - self.two_j2).abs();
        (0..=(top.doubled() - bottom.doubled()) / 2)
            .map(move |k| HalfInt::new(top.doubled() - 2 * k))
    }

    /// Stored entries as `(two_m1, two_m2, two_J, two_M, value)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, i32, i32, f64)> + '_ {
        self.coefficients.iter().map(|(&(m1, m2, j, m), &v)| (m1, m2, j, m, v))
    }

    /// CSV dump with columns
    /// `two_j1,two_m1,two_j2,two_m2,two_J,two_M,value` (15 significant digits).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "two_j1,two_m1,two_j2,two_m2,two_J,two_M,value")?;
        for (m1, m2, j, m, v) in self.entries() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                self.two_j1.doubled(), m1, self.two_j2.doubled(), m2, j, m,
                format_f64(v)
            )?;
        }
        Ok(())
    }
}

/// Decompose j1 ⊗ j2 into total-spin multiplets and tabulate the coupling
/// coefficients.
pub fn qcg(two_j1: HalfInt, two_j2: HalfInt, ctx: &DeformationContext) -> QcgTable {
    assert!(two_j1.doubled() >= 0 && two_j2.doubled() >= 0);
    let rep1 = spin_rep(two_j1, ctx);
    let rep2 = spin_rep(two_j2, ctx);
    let cop = coproduct_rep(&rep1, &rep2, ctx).expect("matching contexts by construction");
    let d2 = rep2.dim();
    let dim = cop.dim();

    let product_index = |m1: HalfInt, m2: HalfInt| -> usize {
        rep1.index_of(m1) * d2 + rep2.index_of(m2)
    };
    // (m1, m2) pairs with m1 + m2 = M, ascending in m1.
    let weight_space = |two_m: i32| -> Vec<(HalfInt, HalfInt)> {
        two_j1.projections()
            .filter_map(|m1| {
                let m2 = HalfInt::new(two_m) - m1;
                (m2.doubled().abs() <= two_j2.doubled()).then_some((m1, m2))
            })
            .collect()
    };

    let mut coefficients = BTreeMap::new();
    // Highest-weight states |J', M = J'> of all multiplets built so far with
    // J' > J; each is a vector in the product basis.
    let mut multiplets: Vec<(HalfInt, Array1<f64>)> = Vec::new();

    let top = two_j1 + two_j2;
    let bottom = (two_j1 - two_j2).abs();
    let mut two_j = top.doubled();
    while two_j >= bottom.doubled() {
        let j = HalfInt::new(two_j);
        let mut v: Array1<f64> = Array1::zeros(dim);
        if two_j == top.doubled() {
            v[product_index(two_j1, two_j2)] = 1.0;
        } else {
            // Descend every previously built multiplet to the M = J level.
            let mut higher: Vec<Array1<f64>> = Vec::new();
            for (jp, hw) in &multiplets {
                let mut w = hw.clone();
                let mut two_m = jp.doubled();
                while two_m > two_j {
                    let m = HalfInt::new(two_m);
                    let norm = (q_number(*jp + m, ctx)
                        * q_number(*jp - m + HalfInt::whole(1), ctx)).sqrt();
                    w = cop.jminus.dot(&w) / norm;
                    two_m -= 2;
                }
                higher.push(w);
            }
            // The remaining direction of the weight space is the new
            // highest-weight vector; take the best-conditioned candidate.
            let mut best: Option<Array1<f64>> = None;
            let mut best_norm = 0.0;
            for (m1, m2) in weight_space(two_j) {
                let mut cand: Array1<f64> = Array1::zeros(dim);
                cand[product_index(m1, m2)] = 1.0;
                for _ in 0..2 {
                    for h in &higher {
                        let overlap = h.dot(&cand);
                        cand = cand - overlap * h;
                    }
                }
                let norm = cand.dot(&cand).sqrt();
                if norm > best_norm {
                    best_norm = norm;
                    best = Some(cand);
                }
            }
            v = best.expect("weight space larger than higher-multiplet count");
            v /= best_norm;
            let raised = cop.jplus.dot(&v);
            let res = raised.dot(&raised).sqrt();
            assert!(res < 1e-10, "highest-weight residual {res} at J = {j}");
        }
        // Fix the phase: coefficient on |j1, j1> ⊗ |j2, J - j1> positive.
        let anchor = v[product_index(two_j1, j - two_j1)];
        assert!(anchor.abs() > 1e-12, "vanishing anchor coefficient at J = {j}");
        if anchor < 0.0 {
            v.mapv_inplace(|x| -x);
        }
        multiplets.push((j, v.clone()));

        // Record the multiplet, lowering from M = J to M = -J.
        let mut two_m = two_j;
        loop {
            let m = HalfInt::new(two_m);
            for (m1, m2) in weight_space(two_m) {
                coefficients.insert(
                    (m1.doubled(), m2.doubled(), two_j, two_m),
                    v[product_index(m1, m2)],
                );
            }
            if two_m == -two_j {
                break;
            }
            let norm = (q_number(j + m, ctx) * q_number(j - m + HalfInt::whole(1), ctx)).sqrt();
            v = cop.jminus.dot(&v) / norm;
            let len = v.dot(&v).sqrt();
            v /= len;
            two_m -= 2;
        }
        two_j -= 2;
    }

    QcgTable { two_j1, two_j2, coefficients }
}
