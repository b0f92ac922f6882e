//! Small dense symmetric linear algebra for `d ≤ 4`.

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        Self::from_vec(n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { n, data }
    }

    /// `ρ` off the diagonal, one on it.
    pub fn equicorrelation(n: usize, rho: T) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.data[i * n + j] = rho;
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀAx`.
    pub fn quad_form(&self, x: &[T]) -> T {
        dot(x, &self.mul_vec(x))
    }

    /// `xᵀAy`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        dot(x, &self.mul_vec(y))
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let data = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { n: m, data }
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Lower Cholesky factor `A = LLᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky<T> {
    l: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Fails with `BadParam` unless `a` is symmetric positive definite.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.dim();
        let scale = a.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if !a.is_symmetric(lit::<T>(1e-12) * scale.max(T::one())) {
            return Err(Error::BadParam("matrix is not symmetric".into()));
        }
        let mut l = Matrix {
            n,
            data: vec![T::zero(); n * n],
        };
        for j in 0..n {
            let mut diag = a.get(j, j);
            for k in 0..j {
                diag = diag - l.get(j, k) * l.get(j, k);
            }
            if !(diag > T::zero()) {
                return Err(Error::BadParam("matrix is not positive definite".into()));
            }
            let ljj = diag.sqrt();
            l.data[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s = s - l.get(i, k) * l.get(j, k);
                }
                l.data[i * n + j] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.n
    }

    pub fn lower(&self) -> &Matrix<T> {
        &self.l
    }

    /// Solves `Lz = b`.
    pub fn solve_lower(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let mut z = vec![T::zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for (k, &zk) in z.iter().enumerate().take(i) {
                s = s - self.l.get(i, k) * zk;
            }
            z[i] = s / self.l.get(i, i);
        }
        z
    }

    /// Solves `Ax = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let z = self.solve_lower(b);
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = z[i];
            for (k, &xk) in x.iter().enumerate().skip(i + 1) {
                s = s - self.l.get(k, i) * xk;
            }
            x[i] = s / self.l.get(i, i);
        }
        x
    }

    /// `xᵀA⁻¹x` through one triangular solve.
    pub fn inv_quad_form(&self, x: &[T]) -> T {
        let z = self.solve_lower(x);
        dot(&z, &z)
    }

    /// `Lz`, mapping standard draws to covariance `A`.
    pub fn l_mul(&self, z: &[T]) -> Vec<T> {
        let n = self.l.n;
        (0..n).map(|i| (0..=i).map(|k| self.l.get(i, k) * z[k]).sum()).collect()
    }

    pub fn ln_det(&self) -> T {
        let two: T = lit(2.0);
        (0..self.l.n).map(|i| two * self.l.get(i, i).ln()).sum()
    }

    pub fn det(&self) -> T {
        self.ln_det().exp()
    }

    pub fn inverse(&self) -> Matrix<T> {
        let n = self.l.n;
        let mut data = vec![T::zero(); n * n];
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
        Matrix { n, data }
    }
}
