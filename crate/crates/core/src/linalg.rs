//! Dense symmetric linear algebra at desk scale.
//!
//! The eigensolver is a cyclic Jacobi sweep with the small-angle rotation
//! formulas. It is deterministic, needs no external dependency, and is exact
//! to roughly 1e-14 times the matrix norm for the n <= ~40 matrices this
//! crate produces. Eigenvalues are returned in ascending order with matching
//! eigenvector columns.

/// Row-major dense symmetric matrix of side `n`, stored as `n * n` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        SymMatrix { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both (i, j) and (j, i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Principal submatrix on `idx` (row/column order follows `idx`).
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        let k = idx.len();
        let mut out = SymMatrix::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * k + b] = self.get(i, j);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Eigendecomposition of a symmetric matrix: `values` ascending,
/// `vectors.column(k)` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Row-major n x n; entry (i, k) is component i of eigenvector k.
    pub vectors: SymMatrix,
}

impl SymEigen {
    pub fn lambda_min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

const JACOBI_SWEEP_CAP: usize = 100;

/// Cyclic Jacobi with threshold sweeps. Input is read as symmetric (upper
/// triangle wins if the input drifted). Deterministic for a given input.
pub fn sym_eigen(a: &SymMatrix) -> SymEigen {
    let n = a.n;
    if n == 0 {
        return SymEigen {
            values: vec![],
            vectors: SymMatrix::zeros(0),
        };
    }
    let mut m = a.clone();
    // enforce exact symmetry so rotations stay consistent
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, v);
        }
    }
    let mut v = SymMatrix::identity(n);
    let scale = m.max_abs().max(1e-300);
    let tol = 1e-15 * scale;

    for sweep in 0..JACOBI_SWEEP_CAP {
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m.get(i, j).abs());
            }
        }
        if off <= tol {
            break;
        }
        // threshold: skip tiny rotations early so sweeps converge fast
        let thresh = if sweep < 3 { 0.2 * off } else { 0.0 };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq.abs() <= thresh || apq.abs() <= tol {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                // smaller root of t^2 + 2 theta t - 1 = 0, for stability
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                m.set(p, p, app - t * apq);
                m.set(q, q, aqq + t * apq);
                m.set(p, q, 0.0);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp - s * (akq + tau * akp));
                    m.set(k, q, akq + s * (akp - tau * akq));
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.data[k * n + p] = vkp - s * (vkq + tau * vkp);
                    v.data[k * n + q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).partial_cmp(&m.get(j, j)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m.get(i, i)).collect();
    let mut vectors = SymMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.data[row * n + new_col] = v.get(row, old_col);
        }
    }
    SymEigen { values, vectors }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn lambda_min(a: &SymMatrix) -> f64 {
    if a.n == 0 {
        return 0.0;
    }
    sym_eigen(a).lambda_min()
}

/// Moore-Penrose pseudo-inverse applied to a vector: `A^+ b`, with
/// eigenvalues below `cut` treated as zero.
pub fn pinv_apply(eig: &SymEigen, b: &[f64], cut: f64) -> Vec<f64> {
    let n = eig.values.len();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let lam = eig.values[k];
        if lam.abs() <= cut {
            continue;
        }
        let mut dot = 0.0;
        for i in 0..n {
            dot += eig.vectors.get(i, k) * b[i];
        }
        let coef = dot / lam;
        for i in 0..n {
            out[i] += coef * eig.vectors.get(i, k);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(a: &SymMatrix) {
        let eig = sym_eigen(a);
        let n = a.n;
        // A v_k = lambda_k v_k
        for k in 0..n {
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += a.get(i, j) * eig.vectors.get(j, k);
                }
                let want = eig.values[k] * eig.vectors.get(i, k);
                assert!(
                    (av - want).abs() < 1e-10 * a.max_abs().max(1.0),
                    "residual too large at ({i},{k})"
                );
            }
        }
        // ascending order
        for k in 1..n {
            assert!(eig.values[k - 1] <= eig.values[k] + 1e-12);
        }
    }

    #[test]
    fn diagonal_matrix_is_its_own_spectrum() {
        let mut a = SymMatrix::zeros(3);
        a.set(0, 0, 3.0);
        a.set(1, 1, -1.0);
        a.set(2, 2, 2.0);
        let eig = sym_eigen(&a);
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_known_values() {
        let mut a = SymMatrix::zeros(2);
        a.set(0, 0, 1.0);
        a.set(1, 1, 1.0);
        a.set(0, 1, 0.5);
        let eig = sym_eigen(&a);
        assert!((eig.values[0] - 0.5).abs() < 1e-14);
        assert!((eig.values[1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn path_matrix_spectrum() {
        // tridiagonal with unit diagonal and off-diagonal 1: eigenvalues
        // 1 + 2 cos(k pi / (n+1))
        let n = 5;
        let mut a = SymMatrix::identity(n);
        for i in 0..n - 1 {
            a.set(i, i + 1, 1.0);
        }
        let eig = sym_eigen(&a);
        for k in 0..n {
            let want = 1.0 + 2.0 * (std::f64::consts::PI * (n - k) as f64 / (n as f64 + 1.0)).cos();
            assert!((eig.values[k] - want).abs() < 1e-12);
        }
        check_decomposition(&a);
    }

    #[test]
    fn random_symmetric_decompositions_hold() {
        // simple deterministic pseudo-random fill
        let mut state = 0x2545f4914f6cdd1d_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [1, 2, 3, 6, 12, 20] {
            let mut a = SymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    a.set(i, j, next());
                }
            }
            check_decomposition(&a);
            let eig = sym_eigen(&a);
            let tr: f64 = a.trace();
            let sum: f64 = eig.values.iter().sum();
            assert!((tr - sum).abs() < 1e-10 * n as f64);
        }
    }

    #[test]
    fn pinv_apply_solves_on_range() {
        let mut a = SymMatrix::zeros(3);
        // rank-2: diag(2, 3, 0)
        a.set(0, 0, 2.0);
        a.set(1, 1, 3.0);
        let eig = sym_eigen(&a);
        let x = pinv_apply(&eig, &[4.0, 9.0, 7.0], 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
        assert!(x[2].abs() < 1e-12);
    }
}
