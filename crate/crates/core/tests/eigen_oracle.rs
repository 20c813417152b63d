//! The Householder + QL solver against a cyclic Jacobi oracle on the real
//! embedding `[[A, −B], [B, A]]` of `H = A + iB`, whose spectrum is that of
//! `H` with every value doubled.

use junctionlab::bdg::{BdgMatrix, C64};
use junctionlab::eigen::{eig_hermitian, eig_hermitian_window, eigvalsh, inner};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(n: usize, rng: &mut impl Rng) -> BdgMatrix {
    let mut h = BdgMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = C64::new(rng.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Cyclic Jacobi rotations on a real symmetric matrix; returns sorted
/// eigenvalues.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                #[allow(clippy::needless_range_loop)]
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    d.sort_by(f64::total_cmp);
    d
}

fn oracle(h: &BdgMatrix) -> Vec<f64> {
    let n = h.dim();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            m[i][j] = z.re;
            m[i + n][j + n] = z.re;
            m[i][j + n] = -z.im;
            m[i + n][j] = z.im;
        }
    }
    jacobi_eigenvalues(m).chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

#[test]
fn random_8x8_matches_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for _ in 0..10 {
        let h = random_hermitian(8, &mut rng);
        let sol = eig_hermitian(&h).unwrap();
        let expect = oracle(&h);
        for (a, b) in sol.values.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(sol.max_residual < 1e-10);
        assert!(sol.orthonormality_defect() < 1e-10);
    }
}

#[test]
fn values_only_path_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = random_hermitian(24, &mut rng);
    let full = eig_hermitian(&h).unwrap();
    let vals = eigvalsh(&h).unwrap();
    for (a, b) in full.values.iter().zip(&vals) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn window_solver_matches_full_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = random_hermitian(40, &mut rng);
    let full = eig_hermitian(&h).unwrap();
    let win = eig_hermitian_window(&h, -0.8, 0.8).unwrap();
    let inside: Vec<usize> = (0..full.len()).filter(|&k| full.values[k].abs() <= 0.8).collect();
    assert_eq!(win.selected.len(), inside.len());
    for (j, &k) in inside.iter().enumerate() {
        assert!((win.selected.values[j] - full.values[k]).abs() < 1e-10);
        // same vector up to a phase
        assert!((inner(win.selected.vector(j), full.vector(k)).norm() - 1.0).abs() < 1e-8);
    }
    for (a, b) in win.spectrum.iter().zip(&full.values) {
        assert!((a - b).abs() < 1e-10);
    }
}

/// `U H U†` for `U` = diagonal phases times a Householder reflector.
fn conjugate(h: &BdgMatrix, phases: &[f64], v: &[C64]) -> BdgMatrix {
    let n = h.dim();
    let norm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let mut u = BdgMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let refl = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) } - 2.0 * v[i] * v[j].conj() / norm2;
            u[(i, j)] = C64::from_polar(1.0, phases[i]) * refl;
        }
    }
    let mut out = BdgMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    s += u[(i, k)] * h[(k, l)] * u[(j, l)].conj();
                }
            }
            out[(i, j)] = s;
        }
    }
    for i in 0..n {
        for j in i..n {
            let avg = 0.5 * (out[(i, j)] + out[(j, i)].conj());
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(n, &mut rng);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = eigvalsh(&h).unwrap();
        let b = eigvalsh(&conjugate(&h, &phases, &v)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
