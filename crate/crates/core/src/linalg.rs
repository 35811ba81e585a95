//! Dense eigenvalue and singular value kernels.
//!
//! * [`hermitian_eigen`]: cyclic Jacobi rotations on a Hermitian matrix.
//! * [`eigenvalues`]: Householder reduction to Hessenberg form followed by
//!   single-shift complex QR with Wilkinson shifts.
//! * [`real_svd`]: Householder QR followed by one-sided (Hestenes) Jacobi on
//!   the triangular factor. Small singular values come out with absolute
//!   error near machine precision, which is what rank decisions need.

use num_complex::Complex64;

use crate::algebra::{CMatrix, RealMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Off-diagonal Frobenius mass, relative to the full Frobenius norm, at
/// which Jacobi iteration stops.
pub const JACOBI_REL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `H = V diag(w) V^*` of a Hermitian matrix.
///
/// Only the upper triangle's Hermitian part is trusted: the input is
/// symmetrized as `(H + H^*)/2` first. Eigenvalues are sorted ascending and
/// the columns of `V` follow that order. When `want_vectors` is false the
/// returned matrix is empty (dimension 0).
pub fn hermitian_eigen(h: &CMatrix, want_vectors: bool) -> (Vec<f64>, CMatrix) {
    let n = h.dim();
    let mut a = CMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = if want_vectors { CMatrix::identity(n) } else { CMatrix::zeros(0) };

    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let target = (JACOBI_REL_TOL * JACOBI_REL_TOL) * total;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let gabs = g.norm();
                if gabs == 0.0 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                // Skip rotations that cannot change the diagonal in floating point.
                if gabs < f64::EPSILON * 1e-3 * (alpha.abs() + beta.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let theta = (beta - alpha) / (2.0 * gabs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // phase e^{-i phi} with g = |g| e^{i phi}
                let ph = g.conj() / gabs;

                // A <- A V with V = [[c, s], [-s ph, c ph]] on columns p, q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph * s;
                    a[(k, q)] = akp * s + akq * ph * c;
                }
                // A <- V^* A on rows p, q.
                let phc = ph.conj();
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phc * s;
                    a[(q, k)] = apk * s + aqk * phc * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(alpha - t * gabs, 0.0);
                a[(q, q)] = Complex64::new(beta + t * gabs, 0.0);

                if want_vectors {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * ph * s;
                        v[(k, q)] = vkp * s + vkq * ph * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let w = order.iter().map(|&i| a[(i, i)].re).collect();
    let vs = if want_vectors {
        CMatrix::from_fn(n, |r, c| v[(r, order[c])])
    } else {
        v
    };
    (w, vs)
}

/// Eigenvalues of a general complex square matrix, in no particular order.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let n = a.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut h = hessenberg(a);
    let mut eig = vec![ZERO; n];
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 60 * n;
    let mut total_iter = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the active unreduced window.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total_iter += 1;
        if total_iter > max_iter * n {
            // Give up on convergence; report the current diagonal.
            for k in 0..=hi {
                eig[k] = h[(k, k)];
            }
            break;
        }

        let shift = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        // Explicit shifted QR step on rows/columns lo..=hi.
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rotations.push((c, s));
        }
        for (off, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + off;
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    eig
}

/// Complex Givens pair `(c, s)` such that
/// `[[c̄, s̄], [-s, c]] (x, y)^T = (r, 0)^T`.
fn givens(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), ZERO)
    } else {
        (x / r, y / r)
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^*) H
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v^*)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| h[(i, k + 1 + t)] * vi).sum();
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= dot * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Singular values (descending) and right singular vectors of a real matrix.
#[derive(Clone, Debug)]
pub struct RealSvd {
    pub singular_values: Vec<f64>,
    /// `cols x cols`; column `j` is the right singular vector for
    /// `singular_values[j]`.
    pub right_vectors: RealMatrix,
}

impl RealSvd {
    /// Right singular vectors whose singular value is at most `threshold`:
    /// an orthonormal basis of the numerical null space.
    pub fn null_space(&self, threshold: f64) -> Vec<Vec<f64>> {
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= threshold)
            .map(|(j, _)| self.right_vectors.column(j))
            .collect()
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

/// Right singular system of `m` (all `cols` singular values, padding with
/// zeros when `rows < cols`).
pub fn real_svd(m: &RealMatrix) -> RealSvd {
    let cols = m.cols();
    // Work on an upper-triangular factor when the matrix is tall: it has the
    // same right singular system and the Jacobi sweeps become cheap.
    let mut work = if m.rows() > cols { householder_r(m) } else { m.clone() };
    let rows = work.rows();
    let mut v = RealMatrix::identity(cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    let x = work[(i, p)];
                    let y = work[(i, q)];
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= f64::EPSILON * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = work[(i, p)];
                    let y = work[(i, q)];
                    work[(i, p)] = c * x - s * y;
                    work[(i, q)] = s * x + c * y;
                }
                for i in 0..cols {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sv: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| work[(i, j)] * work[(i, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let singular_values = order.iter().map(|&j| sv[j]).collect();
    let mut right_vectors = RealMatrix::zeros(cols, cols);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..cols {
            right_vectors[(i, new)] = v[(i, old)];
        }
    }
    RealSvd {
        singular_values,
        right_vectors,
    }
}

/// The `cols x cols` triangular factor of a Householder QR of a tall matrix.
fn householder_r(m: &RealMatrix) -> RealMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    // Column-major working copy.
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    for k in 0..cols.min(rows) {
        let norm = a[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, x) in col[k..].iter_mut().zip(&v) {
                *c -= f * x;
            }
        }
    }
    let mut r = RealMatrix::zeros(cols, cols);
    for (j, col) in a.iter().enumerate() {
        for i in 0..=j.min(rows - 1) {
            r[(i, j)] = col[i];
        }
    }
    r
}

/// Largest eigenvalue of a Hermitian matrix.
///
/// Householder reduction to a tridiagonal matrix (complex off-diagonals,
/// whose moduli give a real symmetric tridiagonal with the same spectrum),
/// then Sturm-count bisection down to the last representable interval.
/// About a tenth of the cost of a Jacobi solve; used where only the top of
/// the spectrum matters.
pub fn hermitian_max_eigenvalue(h: &CMatrix) -> f64 {
    let n = h.dim();
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let (diag, off) = tridiagonalize(h);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1] } else { 0.0 } + if i + 1 < n { off[i] } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    // Invariant: the largest eigenvalue lies in [lo, hi].
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&diag, &off, mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Diagonal and off-diagonal moduli of a unitarily similar tridiagonal form.
fn tridiagonalize(h: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.dim();
    let mut a = CMatrix::from_fn(n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut off = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        // v = x - alpha e_1, normalized
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            off[k] = norm;
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // A <- H A H with H = 1 - 2 v v^* on the trailing block, via
        // w = A v, q = w - (v^* w) v, A <- A - 2 v q^* - 2 q v^*.
        let m = n - k - 1;
        let w: Vec<Complex64> = (0..m)
            .map(|i| (0..m).map(|j| a[(k + 1 + i, k + 1 + j)] * v[j]).sum())
            .collect();
        let kk: Complex64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
        let q: Vec<Complex64> = w.iter().zip(&v).map(|(wi, vi)| wi - kk * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= 2.0 * (v[i] * q[j].conj() + q[i] * v[j].conj());
            }
        }
        off[k] = norm;
        for i in k + 1..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1, n - 2)].norm();
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), off)
}

/// Number of eigenvalues of the symmetric tridiagonal `(diag, off)` below `x`
/// (Sturm sequence via the LDL^T pivots).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let e2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
        d = diag[i] - x - if i > 0 { e2 / d } else { 0.0 };
        if d == 0.0 {
            d = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Inverse by Gauss-Jordan elimination with partial pivoting; `None` when a
/// pivot underflows relative to the largest entry.
pub fn invert(m: &CMatrix) -> Option<CMatrix> {
    let n = m.dim();
    let scale = m.max_abs();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))?;
        if !(a[(pivot, col)].norm() > 1e-14 * scale) {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let (t, u) = (a[(col, j)], inv[(col, j)]);
                a[(col, j)] = a[(pivot, j)];
                inv[(col, j)] = inv[(pivot, j)];
                a[(pivot, j)] = t;
                inv[(pivot, j)] = u;
            }
        }
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[(r, col)];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn herm_residual(h: &CMatrix, w: &[f64], v: &CMatrix) -> f64 {
        let d: Vec<_> = w.iter().map(|&x| c(x, 0.0)).collect();
        let rebuilt = &(v * &CMatrix::from_diagonal(&d)) * &v.adjoint();
        (&rebuilt - h).max_abs()
    }

    #[test]
    fn jacobi_on_two_by_two() {
        let h = CMatrix::from_row_major(2, vec![c(1., 0.), c(2., 0.), c(2., 0.), c(1., 0.)]).unwrap();
        let (w, v) = hermitian_eigen(&h, true);
        assert!((w[0] + 1.0).abs() < 1e-14 && (w[1] - 3.0).abs() < 1e-14);
        assert!(herm_residual(&h, &w, &v) < 1e-14);
    }

    #[test]
    fn jacobi_complex_hermitian_reconstructs() {
        let n = 6;
        let a = CMatrix::from_fn(n, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let h = &a + &a.adjoint();
        let (w, v) = hermitian_eigen(&h, true);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        assert!(herm_residual(&h, &w, &v) < 1e-12);
        let vv = &v.adjoint() * &v;
        assert!((&vv - &CMatrix::identity(n)).max_abs() < 1e-13);
    }

    #[test]
    fn general_eigenvalues_of_triangular_and_rotation() {
        let nil = CMatrix::from_row_major(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let e = eigenvalues(&nil);
        assert!(e.iter().all(|z| z.norm() == 0.0));

        // Real rotation by 90 degrees has eigenvalues +-i.
        let rot = CMatrix::from_row_major(2, vec![c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let mut e = eigenvalues(&rot);
        e.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((e[0] - c(0., -1.)).norm() < 1e-14);
        assert!((e[1] - c(0., 1.)).norm() < 1e-14);
    }

    #[test]
    fn general_eigenvalues_match_trace_and_similarity() {
        // Diagonal with known spectrum, conjugated by a non-unitary similarity.
        let d = CMatrix::from_diagonal(&[c(1., 1.), c(-2., 0.5), c(0.3, -1.), c(4., 0.)]);
        let s = CMatrix::from_fn(4, |i, j| if i == j { c(1., 0.) } else { c(0.1 * (i + 2 * j) as f64, 0.05) });
        // s is strictly diagonally dominant, invert it by Gauss-Jordan.
        let s_inv = invert(&s).unwrap();
        let a = &(&s * &d) * &s_inv;
        let e = eigenvalues(&a);
        for target in d.as_slice().iter().step_by(5) {
            let best = e.iter().map(|z| (z - target).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-11, "missing eigenvalue {target}");
        }
    }

    #[test]
    fn svd_of_rank_deficient_tall_matrix() {
        // Columns: e0, 2 e1, e0 + 2 e1 (dependent), 0.
        let cols = vec![
            vec![1., 0., 0., 0., 0.],
            vec![0., 2., 0., 0., 0.],
            vec![1., 2., 0., 0., 0.],
            vec![0., 0., 0., 0., 0.],
        ];
        let m = RealMatrix::from_columns(5, &cols);
        let svd = real_svd(&m);
        assert_eq!(svd.singular_values.len(), 4);
        assert!(svd.smallest() < 1e-15);
        let null = svd.null_space(1e-8);
        assert_eq!(null.len(), 2);
        for v in &null {
            let mv = m.mul_vec(v);
            assert!(mv.iter().all(|x| x.abs() < 1e-14));
        }
    }

    #[test]
    fn svd_of_wide_matrix_pads_with_zeros() {
        let m = RealMatrix::from_row_major(1, 3, vec![3., 0., 4.]).unwrap();
        let svd = real_svd(&m);
        assert!((svd.largest() - 5.0).abs() < 1e-14);
        assert_eq!(svd.null_space(1e-8).len(), 2);
    }

    #[test]
    fn invert_needs_pivoting_and_detects_singular() {
        let c = |re: f64| Complex64::new(re, 0.0);
        // zero leading entry forces a row swap
        let m = CMatrix::from_row_major(2, vec![c(0.), c(2.), c(3.), c(1.)]).unwrap();
        let inv = invert(&m).unwrap();
        assert!((&(&m * &inv) - &CMatrix::identity(2)).max_abs() < 1e-15);
        let singular = CMatrix::from_row_major(2, vec![c(1.), c(2.), c(2.), c(4.)]).unwrap();
        assert!(invert(&singular).is_none());
    }

    #[test]
    fn max_eigenvalue_matches_jacobi() {
        let mut seed = 17u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in 1..=12 {
            let g = CMatrix::from_fn(n, |_, _| Complex64::new(next(), next()));
            let h = g.gram();
            let (w, _) = hermitian_eigen(&h, false);
            let top = *w.last().unwrap();
            assert!((hermitian_max_eigenvalue(&h) - top).abs() <= 1e-13 * (1.0 + top.abs()), "n = {n}");
            // negative definite: the top eigenvalue is negative
            let neg = h.scale(Complex64::new(-1.0, 0.0));
            let bottom = w[0];
            assert!((hermitian_max_eigenvalue(&neg) + bottom).abs() <= 1e-13 * (1.0 + top.abs()));
        }
        // repeated eigenvalues and an already diagonal input
        let d = CMatrix::from_diagonal(&[Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!((hermitian_max_eigenvalue(&d) - 2.0).abs() <= 4.0 * f64::EPSILON);
        assert!(hermitian_max_eigenvalue(&CMatrix::zeros(4)).abs() <= f64::MIN_POSITIVE);
    }
}
