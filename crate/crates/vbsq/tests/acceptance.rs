//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::HashMap;
use std::time::Instant;
use num_complex::Complex64 as C64;
use vbsq::halfint::HalfInt;
use vbsq::context::DeformationContext;
use vbsq::{ mps, oracle, qalgebra, rdm, spectra };
use vbsq::qalgebra::{ q_number, QcgTable };

fn ctx(q: f64) -> DeformationContext {
    DeformationContext::new(q).unwrap()
}

fn h(d: i32) -> HalfInt {
    HalfInt::new(d)
}

#[test]
fn criterion_01_ground_state_verification() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in [0.3, 0.7, 1.0] {
        let c = ctx(q);
        for spin in [1u32, 2, 3] {
            let chains: &[usize] = if spin == 1 { &[3, 4, 5, 6] } else { &[3, 4] };
            for &chain in chains {
                let res = oracle::hamiltonian_annihilation_check(spin, chain, &c).unwrap();
                assert!(res < 1e-10, "S={spin} q={q} L={chain}: residual {res}");
                worst = worst.max(res);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "runtime budget: {elapsed:?}");
    println!(
        "criterion 01 ground-state verification: PASS (max residual {worst:.2e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_02_oracle_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in [0.3, 0.7, 1.0] {
        let c = ctx(q);
        for (spin, l_max) in [(1u32, 8usize), (2, 6)] {
            for chain in 2..=l_max {
                for l in 1..chain {
                    let dev = oracle::crosscheck_rdm(spin, l, chain, &c).unwrap();
                    assert!(dev < 1e-10, "S={spin} q={q} L={chain} l={l}: {dev}");
                    worst = worst.max(dev);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "runtime budget: {elapsed:?}");
    println!(
        "criterion 02 oracle equivalence: PASS (max deviation {worst:.2e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_03_double_scaling_eigenvalues() {
    for q in [0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0] {
        let c = ctx(q);
        let rho = rdm::rdm_double_scaling(2, &c);
        let got = rdm::raw_spectrum(&rho).unwrap();
        let norm = (q + 1.0 + 1.0 / q).powi(2);
        let mut expect = [
            q * q, q, q, 1.0, 1.0, 1.0, 1.0 / q, 1.0 / q, 1.0 / (q * q),
        ];
        expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(got.len(), 9);
        for (g, e) in got.iter().zip(expect.iter()) {
            assert!((g - e / norm).abs() < 1e-12, "q={q}: {g} vs {}", e / norm);
        }
    }
    println!("criterion 03 double-scaling eigenvalues: PASS");
}

#[test]
fn criterion_04_closed_form_entropies() {
    for spin in [1u32, 2, 5, 10] {
        for k in 1..=9 {
            let q = 0.1 * f64::from(k);
            let c = ctx(q);
            let spec = rdm::spectrum_of(&rdm::rdm_double_scaling(spin, &c), &c).unwrap();
            for alpha in [0.5, 2.0, 3.0] {
                let closed = spectra::renyi_dsl(spin, alpha, &c);
                let direct = spec.renyi_entropy(alpha);
                assert!(
                    (closed - direct).abs() < 1e-10,
                    "renyi S={spin} q={q} alpha={alpha}: {closed} vs {direct}"
                );
            }
            let closed = spectra::vn_dsl(spin, &c);
            let direct = spec.vn_entropy();
            assert!((closed - direct).abs() < 1e-10, "vn S={spin} q={q}");
        }
        // exact saturation at the isotropic point
        let c = ctx(1.0);
        let cap = 2.0 * f64::from(spin + 1).ln();
        assert_eq!(spectra::vn_dsl(spin, &c), cap);
        for alpha in [0.5, 2.0, 3.0] {
            assert_eq!(spectra::renyi_dsl(spin, alpha, &c), cap);
        }
    }
    println!("criterion 04 closed-form entropies: PASS");
}

#[test]
fn criterion_05_isotropic_exact_spectra() {
    let c = ctx(1.0);
    for spin in [1u32, 2, 3] {
        let spectrum = mps::transfer_spectrum(spin, &c).unwrap();
        for l in 1..=8usize {
            let p = spectra::isotropic_eigenvalues(spin, l).unwrap();
            // independent route: 6j form of the same eigenvalues
            for (big_j, &pj) in p.iter().enumerate() {
                let mut alt = 1.0 / f64::from((spin + 1).pow(2));
                let sign_js = HalfInt::whole(big_j as i32 + spin as i32).phase().re;
                for j in 1..=spin {
                    let sixj = qalgebra::q6j(
                        h(2 * j as i32), h(2 * big_j as i32), h(spin as i32),
                        h(spin as i32), h(spin as i32), h(spin as i32),
                        &c,
                    );
                    let sj = HalfInt::whole(j as i32).phase().re;
                    alt += sign_js / f64::from(spin + 1)
                        * sj * f64::from(2 * j + 1)
                        * spectrum.ratio(j).powi(l as i32)
                        * sixj;
                }
                assert!((pj - alt).abs() < 1e-12, "S={spin} l={l} J={big_j}");
            }
            // matrix route
            let rho = rdm::rdm_finite_block(spin, l, &c).unwrap();
            let got = rdm::raw_spectrum(&rho).unwrap();
            let mut expect: Vec<f64> = Vec::new();
            for (j, &pj) in p.iter().enumerate() {
                expect.extend(std::iter::repeat(pj).take(2 * j + 1));
            }
            expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (g, e) in got.iter().zip(expect.iter()) {
                assert!((g - e).abs() < 1e-12, "S={spin} l={l}: {g} vs {e}");
            }
        }
        // l = 1: (2S+1) equal eigenvalues 1/(2S+1)
        let p1 = spectra::isotropic_eigenvalues(spin, 1).unwrap();
        for (j, &pj) in p1.iter().enumerate() {
            let expect = if j == spin as usize { 1.0 / f64::from(2 * spin + 1) } else { 0.0 };
            assert!((pj - expect).abs() < 1e-12);
        }
    }
    // S=2 formulas as a verbatim regression
    for l in 1..=8usize {
        let p = spectra::isotropic_eigenvalues(2, l).unwrap();
        let half = (-2.0f64).powi(-(l as i32));
        let tenth = 10.0f64.powi(-(l as i32));
        assert!((p[0] - (1.0 + 3.0 * half + 5.0 * tenth) / 9.0).abs() < 1e-12);
        assert!((p[1] - (1.0 + 1.5 * half - 2.5 * tenth) / 9.0).abs() < 1e-12);
        assert!((p[2] - (1.0 - 1.5 * half + 0.5 * tenth) / 9.0).abs() < 1e-12);
    }
    println!("criterion 05 isotropic exact spectra: PASS");
}

#[test]
fn criterion_06_perturbation_quality() {
    let spin = 2u32;
    for q in [0.5, 0.8] {
        let c = ctx(q);
        let mut prev = f64::INFINITY;
        for l in [3usize, 5, 7, 10] {
            let exact = rdm::raw_spectrum(&rdm::rdm_finite_block(spin, l, &c).unwrap())
                .unwrap();
            let approx = spectra::perturbative_eigs(spin, l, &c).unwrap().eigenvalues();
            assert_eq!(exact.len(), approx.len());
            let err = exact.iter().zip(approx.iter())
                .map(|(e, a)| ((e - a) / e).abs())
                .fold(0.0f64, f64::max);
            assert!(err < prev, "q={q} l={l}: error {err} did not decrease from {prev}");
            prev = err;
            // degeneracy pattern: three doubly degenerate lines, three single
            let spec = rdm::spectrum_of(&rdm::rdm_finite_block(spin, l, &c).unwrap(), &c)
                .unwrap();
            let degs: Vec<usize> = spec.groups().iter().map(|g| g.degeneracy).collect();
            assert!(degs.iter().all(|&d| d == 1 || d == 2), "q={q} l={l}: {degs:?}");
            assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 3, "q={q} l={l}");
            assert_eq!(degs.iter().sum::<usize>(), 9);
        }
        assert!(prev < 1e-3, "q={q}: error at l=10 is {prev}");
        // l = 1: four of the nine eigenvalues vanish (rank 5)
        let spec1 = rdm::raw_spectrum(&rdm::rdm_finite_block(spin, 1, &c).unwrap()).unwrap();
        let rank = spec1.iter().filter(|&&p| p > 1e-12).count();
        assert_eq!(rank, 5);
    }
    println!("criterion 06 perturbation quality: PASS");
}

#[test]
fn criterion_07_entropy_bound_and_monotonicity() {
    for spin in [1u32, 2, 5, 10] {
        let cap = 2.0 * f64::from(spin + 1).ln() + 1e-12;
        let mut prev = -1.0;
        for k in 1..=20 {
            let q = 0.05 * f64::from(k);
            let c = ctx(q);
            let v = spectra::vn_dsl(spin, &c);
            assert!(v <= cap, "bound S={spin} q={q}");
            assert!(v > prev, "monotonicity S={spin} q={q}");
            prev = v;
        }
    }
    // finite blocks obey the same bound
    for l in [1usize, 2, 4] {
        for q in [0.5, 1.0] {
            let c = ctx(q);
            for spin in [1u32, 2] {
                let spec = rdm::spectrum_of(&rdm::rdm_finite_block(spin, l, &c).unwrap(), &c)
                    .unwrap();
                assert!(spec.vn_entropy() <= 2.0 * f64::from(spin + 1).ln() + 1e-12);
            }
        }
    }
    println!("criterion 07 entropy bound and monotonicity: PASS");
}

#[test]
fn criterion_08_correlation_length() {
    for q in [0.3, 1.0] {
        let c = ctx(q);
        for spin in 1u32..=5 {
            let xi = mps::correlation_length(spin, &c);
            let spectrum = mps::transfer_spectrum(spin, &c).unwrap();
            let ratio = (spectrum.eigenvalue(1) / spectrum.eigenvalue(0)).abs();
            assert!(
                ((-1.0 / xi).exp() - ratio).abs() < 1e-12,
                "S={spin} q={q}"
            );
        }
    }
    let xi = mps::correlation_length(2, &ctx(1.0));
    assert!((xi - 1.0 / 2.0f64.ln()).abs() < 1e-12);
    println!("criterion 08 correlation length: PASS");
}

struct TableCache {
    ctx: DeformationContext,
    tables: HashMap<(i32, i32), QcgTable>,
}

impl TableCache {
    fn new(ctx: DeformationContext) -> Self {
        Self { ctx, tables: HashMap::new() }
    }

    fn get(&mut self, two_j1: i32, two_j2: i32) -> &QcgTable {
        let c = self.ctx;
        self.tables
            .entry((two_j1, two_j2))
            .or_insert_with(|| qalgebra::qcg(h(two_j1), h(two_j2), &c))
    }
}

#[test]
fn criterion_09_algebra_identity_suite() {
    let start = Instant::now();
    for q in [0.2, 0.5, 1.0] {
        let c = ctx(q);
        let mut cache = TableCache::new(c);

        // (A.1)-(A.2): column and row orthogonality, 2j <= 6
        for two_j1 in 0..=6 {
            for two_j2 in 0..=6 {
                let t = cache.get(two_j1, two_j2).clone();
                let mut col = 0.0f64;
                for m1 in h(two_j1).projections() {
                    for m2 in h(two_j2).projections() {
                        for m1p in h(two_j1).projections() {
                            for m2p in h(two_j2).projections() {
                                let mut s = 0.0;
                                for j in t.total_spins() {
                                    let m = m1 + m2;
                                    if m.doubled().abs() <= j.doubled() {
                                        s += t.get(m1, m2, j, m) * t.get(m1p, m2p, j, m);
                                    }
                                }
                                let expect = f64::from(m1 == m1p && m2 == m2p);
                                col = col.max((s - expect).abs());
                            }
                        }
                    }
                }
                assert!(col < 1e-10, "columns ({two_j1},{two_j2}) q={q}: {col}");
                let mut row = 0.0f64;
                for j in t.total_spins() {
                    for m in j.projections() {
                        for jp in t.total_spins() {
                            for mp in jp.projections() {
                                let mut s = 0.0;
                                for m1 in h(two_j1).projections() {
                                    let m2 = m - m1;
                                    if m2.doubled().abs() <= two_j2 {
                                        s += t.get(m1, m2, j, m) * t.get(m1, m2, jp, mp);
                                    }
                                }
                                let expect = f64::from(j == jp && m == mp);
                                row = row.max((s - expect).abs());
                            }
                        }
                    }
                }
                assert!(row < 1e-10, "rows ({two_j1},{two_j2}) q={q}: {row}");
            }
        }

        // (A.3)-(A.5): column transpositions, complex phases for
        // half-integer exponents, vanishing imaginary part
        for two_j1 in 0..=6 {
            for two_j2 in 0..=6 {
                let t = cache.get(two_j1, two_j2).clone();
                for j in t.total_spins() {
                    let dim_ratio1 = (q_number(h(2 * j.doubled() + 2), &c)
                        / q_number(h(2 * two_j1 + 2), &c)).sqrt();
                    let dim_ratio2 = (q_number(h(2 * j.doubled() + 2), &c)
                        / q_number(h(2 * two_j2 + 2), &c)).sqrt();
                    for m in j.projections() {
                        for m1 in h(two_j1).projections() {
                            let m2 = m - m1;
                            if m2.doubled().abs() > two_j2 {
                                continue;
                            }
                            let lhs = C64::new(t.get(m1, m2, j, m), 0.0);

                            // (A.3)
                            let t13 = cache.get(j.doubled(), two_j2).clone();
                            let phase = (h(two_j1) - j + m2).phase();
                            let rhs = phase
                                * c.q().powf(-m2.to_f64() / 2.0)
                                * dim_ratio1
                                * t13.get(m, -m2, h(two_j1), m1);
                            assert!((lhs - rhs).norm() < 1e-10, "(A.3) q={q}");
                            assert!(rhs.im.abs() < 1e-12, "(A.3) imaginary part");

                            // (A.4)
                            let t21 = cache.get(two_j2, two_j1).clone();
                            let rhs = t21.get(-m2, -m1, j, -m);
                            assert!((lhs.re - rhs).abs() < 1e-10, "(A.4) q={q}");

                            // (A.5)
                            let t15 = cache.get(two_j1, j.doubled()).clone();
                            let phase = (j - h(two_j2) - m1).phase();
                            let rhs = phase
                                * c.q().powf(m1.to_f64() / 2.0)
                                * dim_ratio2
                                * t15.get(-m1, m, h(two_j2), m2);
                            assert!((lhs - rhs).norm() < 1e-10, "(A.5) q={q}");
                        }
                    }
                }
            }
        }

        // (B.2)-(B.3): contraction identity over all small sextuples
        for two_a in 0..=3 {
            for two_b in 0..=3 {
                for two_c in 0..=3 {
                    for two_d in 0..=3 {
                        for two_k in 0..=3 {
                            for two_j in 0..=3 {
                                check_contraction_identity(
                                    &mut cache, &c,
                                    two_a, two_b, two_c, two_d, two_k, two_j,
                                );
                            }
                        }
                    }
                }
            }
        }

        // Eq. (44): classical 6j closed form at q = 1
        if c.is_isotropic() {
            let fact = |n: u32| -> f64 { (1..=n).map(f64::from).product() };
            for s in 1u32..=4 {
                for j in 0..=s {
                    let got = qalgebra::q6j(
                        h(2 * s as i32), h(2 * j as i32), h(s as i32),
                        h(s as i32), h(s as i32), h(s as i32),
                        &c,
                    );
                    let expect = fact(s) * fact(s) / (fact(s - j) * fact(s + j + 1));
                    assert!((got - expect).abs() < 1e-10, "S={s} j={j}");
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime budget: {elapsed:?}");
    println!("criterion 09 algebra identity suite: PASS ({elapsed:.2?})");
}

fn check_contraction_identity(
    cache: &mut TableCache,
    c: &DeformationContext,
    two_a: i32,
    two_b: i32,
    two_c: i32,
    two_d: i32,
    two_k: i32,
    two_j: i32,
) {
    let (a, b, cc, d, k, j) = (h(two_a), h(two_b), h(two_c), h(two_d), h(two_k), h(two_j));
    if !(HalfInt::triangle(a, b, d)
        && HalfInt::triangle(b, cc, k)
        && HalfInt::triangle(d, k, j)
        && HalfInt::triangle(a, cc, j))
    {
        return;
    }
    let t_ab = cache.get(two_a, two_b).clone();
    let t_bc = cache.get(two_b, two_c).clone();
    let t_dk = cache.get(two_d, two_k).clone();
    let t_ac = cache.get(two_a, two_c).clone();
    let sixj = qalgebra::q6j(d, cc, b, j, a, k, c);
    let dims = (q_number(h(2 * two_d + 2), c) * q_number(h(2 * two_k + 2), c)).sqrt();
    let scale_6j = (a + b + cc + j).phase() * dims * sixj;
    let f = qalgebra::f_element(d, b, j, cc, a, k, c);
    let dims_f = (q_number(h(2 * two_d + 2), c) / q_number(h(2 * two_a + 2), c)).sqrt();
    let scale_f = (a - d).phase() * dims_f * f;
    // both normalizations of the identity must match the raw contraction
    assert!((scale_6j - scale_f).norm() < 1e-10, "(B.4) bridge");
    for mj in j.projections() {
        for ma in a.projections() {
            let mc = mj - ma;
            if mc.doubled().abs() > two_c {
                continue;
            }
            let mut lhs = C64::new(0.0, 0.0);
            for mb in b.projections() {
                let md = ma + mb;
                let mk = mc - mb;
                if md.doubled().abs() > two_d || mk.doubled().abs() > two_k {
                    continue;
                }
                lhs += (-mb).phase()
                    * c.q().powf(mb.to_f64() / 2.0)
                    * t_ab.get(ma, mb, d, md)
                    * t_bc.get(-mb, mc, k, mk)
                    * t_dk.get(md, mk, j, mj);
            }
            let rhs = scale_6j * t_ac.get(ma, mc, j, mj);
            assert!(
                (lhs - rhs).norm() < 1e-10,
                "(B.2)/(B.3) at ({two_d},{two_c},{two_b};{two_j},{two_a},{two_k})"
            );
        }
    }
}

#[test]
fn criterion_10_large_s_limits() {
    for q in [0.3, 0.5, 0.7] {
        let c = ctx(q);
        let vn_inf = spectra::entropy_large_s(spectra::EntropyKind::VonNeumann, &c).unwrap();
        assert!(
            (spectra::vn_dsl(200, &c) - vn_inf).abs() < 1e-6,
            "vn q={q}"
        );
        for alpha in [0.5, 2.0, 3.0] {
            let r_inf = spectra::entropy_large_s(spectra::EntropyKind::Renyi(alpha), &c)
                .unwrap();
            assert!(
                (spectra::renyi_dsl(200, alpha, &c) - r_inf).abs() < 1e-6,
                "renyi q={q} alpha={alpha}"
            );
        }
    }
    println!("criterion 10 large-S limits: PASS");
}
