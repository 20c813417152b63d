//! Dense Hermitian eigendecomposition.
//!
//! The matrix is reduced to a real symmetric tridiagonal form by complex
//! Householder reflections followed by a diagonal phase scaling. The full
//! decomposition then runs implicit-shift QL on the tridiagonal matrix while
//! accumulating the rotations into the back-transformed basis. The windowed
//! variant computes every eigenvalue by QL but only the eigenvectors inside
//! an energy window, by inverse iteration on the tridiagonal matrix followed
//! by back-transformation; sweeps of large devices use it because only the
//! in-gap states are ever inspected.

use crate::bdg::{BdgMatrix, C64};
use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const MAX_QL_ITERATIONS: usize = 60;

/// Relative Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub values: Vec<f64>,
    vectors: Vec<Vec<C64>>,
    /// `max_k ‖H v_k − E_k v_k‖₂`.
    pub max_residual: f64,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[C64] {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// Keeps only the pairs at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> EigenSolution {
        EigenSolution {
            values: indices.iter().map(|&k| self.values[k]).collect(),
            vectors: indices.iter().map(|&k| self.vectors[k].clone()).collect(),
            max_residual: self.max_residual,
        }
    }

    /// Largest `|⟨v_j, v_k⟩ − δ_jk|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.vectors.len() {
            for k in j..self.vectors.len() {
                let dot = inner(&self.vectors[j], &self.vectors[k]);
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// All eigenvalues plus the eigenpairs inside an energy window.
#[derive(Clone, Debug)]
pub struct WindowSolution {
    pub spectrum: Vec<f64>,
    /// Index into `spectrum` of the first selected value.
    pub offset: usize,
    pub selected: EigenSolution,
}

/// `⟨a, b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_hermitian(h: &BdgMatrix) -> Result<()> {
    let scale = h.max_abs();
    let defect = h.hermiticity_defect();
    let tolerance = HERMITIAN_TOLERANCE * scale;
    if defect > tolerance {
        return Err(Error::NotHermitian { defect, tolerance });
    }
    Ok(())
}

/// Reduction `A = (Q·D) T (Q·D)†` with `T` real symmetric tridiagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    /// `offdiag[k] = T[k+1][k] ≥ 0`; length `n` with a trailing zero.
    offdiag: Vec<f64>,
    /// Unit-modulus diagonal of `D`.
    phases: Vec<C64>,
    /// Unit Householder vectors; reflector `k` acts on indices `k+1..n`.
    reflectors: Vec<Option<Vec<C64>>>,
}

impl Tridiagonal {
    fn new(h: &BdgMatrix) -> Self {
        let n = h.dim();
        // lower triangle, row-major, row i holds columns 0..=i
        let mut rows: Vec<Vec<C64>> = (0..n).map(|i| h.row(i)[..=i].to_vec()).collect();
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut sub = vec![ZERO; n.saturating_sub(1)];

        let mut p = vec![ZERO; n];
        for k in 0..n.saturating_sub(1) {
            let m = n - k - 1;
            let x: Vec<C64> = (k + 1..n).map(|i| rows[i][k]).collect();
            let s = norm(&x);
            if m == 1 || s == 0.0 {
                sub[k] = x[0];
                if k + 2 < n {
                    reflectors.push(None);
                }
                continue;
            }
            let x0 = x[0];
            let ph = if x0.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            let alpha = -ph * s;
            let mut v = x;
            v[0] -= alpha;
            let vn = norm(&v);
            for z in v.iter_mut() {
                *z /= vn;
            }
            sub[k] = alpha;

            // p = B v on the trailing block B = rows[k+1..][k+1..]
            let p = &mut p[..m];
            p.iter_mut().for_each(|z| *z = ZERO);
            for i in 0..m {
                let row = &rows[k + 1 + i][k + 1..];
                let vi = v[i];
                let mut acc = ZERO;
                for j in 0..i {
                    let a = row[j];
                    acc += a * v[j];
                    p[j] += a.conj() * vi;
                }
                p[i] += acc + row[i].re * vi;
            }
            let beta = inner(&v, p).re;
            // w = 2p − 2βv; B ← B − v w† − w v†
            let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| 2.0 * pi - 2.0 * beta * vi).collect();
            for i in 0..m {
                let row = &mut rows[k + 1 + i][k + 1..];
                let (vi, wi) = (v[i], w[i]);
                for j in 0..=i {
                    row[j] -= vi * w[j].conj() + wi * v[j].conj();
                }
                row[i].im = 0.0;
            }
            reflectors.push(Some(v));
        }

        let diag: Vec<f64> = (0..n).map(|i| rows[i][i].re).collect();
        let mut offdiag = vec![0.0; n];
        let mut phases = vec![C64::new(1.0, 0.0); n];
        for k in 0..n.saturating_sub(1) {
            let c = sub[k];
            let a = c.norm();
            offdiag[k] = a;
            phases[k + 1] = if a == 0.0 { phases[k] } else { phases[k] * (c / a) };
        }
        Tridiagonal {
            diag,
            offdiag,
            phases,
            reflectors,
        }
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn one_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
                self.diag[i].abs() + left + self.offdiag[i]
            })
            .fold(0.0, f64::max)
    }

    /// Maps a tridiagonal-basis vector back to the original basis.
    fn back_transform(&self, y: &[f64]) -> Vec<C64> {
        let mut z: Vec<C64> = y.iter().zip(&self.phases).map(|(a, p)| p * *a).collect();
        for (k, r) in self.reflectors.iter().enumerate().rev() {
            if let Some(v) = r {
                let tail = &mut z[k + 1..];
                let s = 2.0 * inner(v, tail);
                for (zi, vi) in tail.iter_mut().zip(v) {
                    *zi -= vi * s;
                }
            }
        }
        z
    }

    /// Columns of `Q·D`, each contiguous.
    fn basis_columns(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut z = vec![ZERO; n];
                z[j] = self.phases[j];
                // reflectors with k + 1 > j leave e_j untouched
                for k in (0..j.min(self.reflectors.len())).rev() {
                    if let Some(v) = &self.reflectors[k] {
                        let tail = &mut z[k + 1..];
                        let s = 2.0 * inner(v, tail);
                        if s != ZERO {
                            for (zi, vi) in tail.iter_mut().zip(v) {
                                *zi -= vi * s;
                            }
                        }
                    }
                }
                z
            })
            .collect()
    }
}

/// Implicit-shift QL on `(d, e)`; rotations are applied to `columns` when
/// given. Eigenvalues are left unsorted in `d`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut columns: Option<&mut [Vec<C64>]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: iter - 1,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(cols) = columns.as_deref_mut() {
                    let (lo, hi) = cols.split_at_mut(i + 1);
                    let (zi, zi1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = *a * s + f * c;
                        *a = *a * c - f * s;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn residual(h: &BdgMatrix, value: f64, v: &[C64]) -> f64 {
    let hv = h.mat_vec(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Modified Gram–Schmidt in index order inside clusters of (nearly) equal
/// eigenvalues, so the basis chosen for a degenerate subspace is fixed by
/// the input alone.
fn orthogonalize_clusters(values: &[f64], vectors: &mut [Vec<C64>], tol: f64) {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < tol {
            end += 1;
        }
        for k in start..end {
            let (done, rest) = vectors.split_at_mut(k);
            let vk = &mut rest[0];
            for prev in &done[start..k] {
                let c = inner(prev, vk);
                for (a, b) in vk.iter_mut().zip(prev) {
                    *a -= b * c;
                }
            }
            let nk = norm(vk);
            for a in vk.iter_mut() {
                *a /= nk;
            }
        }
        start = end;
    }
}

fn sort_pairs(values: Vec<f64>, vectors: Vec<Vec<C64>>) -> (Vec<f64>, Vec<Vec<C64>>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let vals = order.iter().map(|&k| values[k]).collect();
    let mut slots: Vec<Option<Vec<C64>>> = vectors.into_iter().map(Some).collect();
    let vecs = order.iter().map(|&k| slots[k].take().unwrap()).collect();
    (vals, vecs)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(h: &BdgMatrix) -> Result<EigenSolution> {
    check_hermitian(h)?;
    let n = h.dim();
    let tri = Tridiagonal::new(h);
    let mut columns = tri.basis_columns();
    let mut d = tri.diag.clone();
    let mut e = tri.offdiag.clone();
    ql_implicit(&mut d, &mut e, Some(&mut columns))?;
    let (values, mut vectors) = sort_pairs(d, columns);

    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    orthogonalize_clusters(&values, &mut vectors, 1e-12 * scale);
    let max_residual = vectors
        .iter()
        .zip(&values)
        .map(|(v, &e)| residual(h, e, v))
        .fold(0.0, f64::max);
    debug_assert_eq!(values.len(), n);
    Ok(EigenSolution {
        values,
        vectors,
        max_residual,
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &BdgMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let tri = Tridiagonal::new(h);
    let mut d = tri.diag.clone();
    let mut e = tri.offdiag.clone();
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Every eigenvalue, plus eigenvectors for eigenvalues in `[lo, hi]`.
pub fn eig_hermitian_window(h: &BdgMatrix, lo: f64, hi: f64) -> Result<WindowSolution> {
    check_hermitian(h)?;
    let tri = Tridiagonal::new(h);
    let mut d = tri.diag.clone();
    let mut e = tri.offdiag.clone();
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);

    let offset = d.partition_point(|&x| x < lo);
    let end = d.partition_point(|&x| x <= hi);
    let chosen = &d[offset..end];

    let tnorm = tri.one_norm().max(f64::MIN_POSITIVE);
    let ys = inverse_iteration(&tri, chosen, tnorm)?;
    let mut vectors: Vec<Vec<C64>> = ys.iter().map(|y| tri.back_transform(y)).collect();
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    orthogonalize_clusters(chosen, &mut vectors, 1e-12 * scale);
    let max_residual = vectors
        .iter()
        .zip(chosen)
        .map(|(v, &e)| residual(h, e, v))
        .fold(0.0, f64::max);

    Ok(WindowSolution {
        spectrum: d.clone(),
        offset,
        selected: EigenSolution {
            values: chosen.to_vec(),
            vectors,
            max_residual,
        },
    })
}

/// Inverse iteration on the tridiagonal matrix for sorted eigenvalues
/// `values`. Members of a cluster (spacing below `1e-3·‖T‖₁`) are
/// orthogonalized against earlier members after every solve.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn inverse_iteration(tri: &Tridiagonal, values: &[f64], tnorm: f64) -> Result<Vec<Vec<f64>>> {
    let n = tri.dim();
    let cluster_tol = 1e-3 * tnorm;
    let tiny = f64::EPSILON * tnorm;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut cluster_start = 0;
    let mut shift_prev = f64::NEG_INFINITY;

    for (idx, &lambda) in values.iter().enumerate() {
        if idx > 0 && lambda - values[idx - 1] > cluster_tol {
            cluster_start = idx;
        }
        // keep shifts of (numerically) equal eigenvalues distinct
        let mut shift = lambda;
        if idx > cluster_start && shift - shift_prev < 10.0 * tiny {
            shift = shift_prev + 10.0 * tiny;
        }
        shift_prev = shift;

        let lu = TridiagonalLu::factor(&tri.diag, &tri.offdiag, shift, tiny);
        let mut seed = 0x9e37_79b9_7f4a_7c15u64 ^ (idx as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        let mut x: Vec<f64> = (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                0.5 + (seed >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();

        let mut converged = false;
        for _ in 0..6 {
            lu.solve(&mut x);
            for prev in &out[cluster_start..idx] {
                let c: f64 = prev.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (a, b) in x.iter_mut().zip(prev) {
                    *a -= c * b;
                }
            }
            let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            if nx == 0.0 || !nx.is_finite() {
                break;
            }
            x.iter_mut().for_each(|a| *a /= nx);
            // residual of the normalized iterate against the true eigenvalue
            let r = tridiagonal_residual(&tri.diag, &tri.offdiag, lambda, &x);
            if r <= 1e2 * n as f64 * tiny {
                converged = true;
                break;
            }
        }
        if !converged {
            let r = tridiagonal_residual(&tri.diag, &tri.offdiag, lambda, &x);
            if !(r <= 1e-10 * tnorm) {
                return Err(Error::NoConvergence {
                    index: idx,
                    iterations: 6,
                });
            }
        }
        out.push(x);
    }
    Ok(out)
}

fn tridiagonal_residual(d: &[f64], e: &[f64], lambda: f64, x: &[f64]) -> f64 {
    let n = d.len();
    (0..n)
        .map(|i| {
            let mut y = (d[i] - lambda) * x[i];
            if i > 0 {
                y += e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y += e[i] * x[i + 1];
            }
            y * y
        })
        .sum::<f64>()
        .sqrt()
}

/// LU factorization with partial pivoting of `T − σI`.
struct TridiagonalLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(d: &[f64], e: &[f64], shift: f64, tiny: f64) -> Self {
        let n = d.len();
        let mut u0: Vec<f64> = d.iter().map(|x| x - shift).collect();
        let mut u1: Vec<f64> = e[..n.saturating_sub(1)].to_vec();
        let mut u2 = vec![0.0; n.saturating_sub(2)];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            let a = e[i];
            if u0[i].abs() >= a.abs() {
                if u0[i] == 0.0 {
                    u0[i] = tiny;
                }
                let m = a / u0[i];
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
            } else {
                let m = u0[i] / a;
                mult[i] = m;
                swapped[i] = true;
                let old_d = u0[i + 1];
                let old_u = u1[i];
                u0[i] = a;
                u1[i] = old_d;
                u0[i + 1] = old_u - m * old_d;
                if i + 1 < n - 1 {
                    let old_u_next = u1[i + 1];
                    u2[i] = old_u_next;
                    u1[i + 1] = -m * old_u_next;
                }
            }
        }
        if n > 0 && u0[n - 1] == 0.0 {
            u0[n - 1] = tiny;
        }
        TridiagonalLu {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * b[i + 2];
            }
            b[i] = s / self.u0[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_two_by_two() {
        let h = BdgMatrix::from_real_diagonal(&[1.0, -1.0]);
        let sol = eig_hermitian(&h).unwrap();
        assert_eq!(sol.values, vec![-1.0, 1.0]);
        assert!(sol.max_residual < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[0, i], [-i, 0]] has eigenvalues ±1
        let h = BdgMatrix::from_row_major(2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        let sol = eig_hermitian(&h).unwrap();
        assert!((sol.values[0] + 1.0).abs() < 1e-14);
        assert!((sol.values[1] - 1.0).abs() < 1e-14);
        assert!(sol.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = BdgMatrix::from_row_major(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(eig_hermitian(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn lu_solve_matches_dense() {
        let d = [2.0, -1.0, 0.5, 3.0, 1.0];
        let e = [1.5, 2.0, 0.1, 4.0, 0.0];
        let shift = 0.3;
        let lu = TridiagonalLu::factor(&d, &e, shift, 1e-300);
        let x_true = [1.0, -2.0, 0.5, 0.25, 3.0];
        let mut b = vec![0.0; 5];
        for i in 0..5 {
            b[i] = (d[i] - shift) * x_true[i];
            if i > 0 {
                b[i] += e[i - 1] * x_true[i - 1];
            }
            if i < 4 {
                b[i] += e[i] * x_true[i + 1];
            }
        }
        lu.solve(&mut b);
        for i in 0..5 {
            assert!((b[i] - x_true[i]).abs() < 1e-12, "{i}: {} vs {}", b[i], x_true[i]);
        }
    }

    #[test]
    fn window_matches_full_on_small_matrix() {
        let n = 12;
        let mut h = BdgMatrix::zeros(n);
        for i in 0..n {
            h[(i, i)] = c(i as f64 * 0.37 - 2.0, 0.0);
            if i + 1 < n {
                let z = c(0.3 + 0.05 * i as f64, 0.2 - 0.03 * i as f64);
                h[(i + 1, i)] = z;
                h[(i, i + 1)] = z.conj();
            }
            if i + 3 < n {
                let z = c(-0.1, 0.15);
                h[(i + 3, i)] = z;
                h[(i, i + 3)] = z.conj();
            }
        }
        let full = eig_hermitian(&h).unwrap();
        let win = eig_hermitian_window(&h, -0.5, 1.0).unwrap();
        for (a, b) in full.values.iter().zip(&win.spectrum) {
            assert!((a - b).abs() < 1e-12);
        }
        for (k, &v) in win.selected.values.iter().enumerate() {
            assert!((v - full.values[win.offset + k]).abs() < 1e-12);
            let overlap = inner(win.selected.vector(k), full.vector(win.offset + k)).norm();
            assert!((overlap - 1.0).abs() < 1e-10);
        }
        assert!(win.selected.max_residual < 1e-12);
    }
}
