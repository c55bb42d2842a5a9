//! Dense complex matrix kernels: products, inversion, and a cyclic
//! Jacobi eigensolver for Hermitian matrices (used for exact p = 2
//! operator norms via the largest singular value).

use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl Dense {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: &mut impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// `A^H x` without materializing the adjoint.
    pub fn adjoint_matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![C64::new(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (j, a) in row.iter().enumerate() {
                y[j] += a.conj() * xi;
            }
        }
        y
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows);
        let mut out = Dense::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    *out.at_mut(i, j) += aik * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Dense {
        Dense::from_fn(self.cols, self.rows, &mut |i, j| self.at(j, i).conj())
    }

    pub fn add(&self, other: &Dense) -> Dense {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Dense { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: C64) -> Dense {
        Dense { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.at(i, i)).fold(C64::new(0.0, 0.0), |a, b| a + b)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Dense> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch { context: "Dense::inverse" });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Dense::identity(n);
        for col in 0..n {
            let mut pivot = col;
            let mut best = a.at(col, col).norm();
            for r in col + 1..n {
                let v = a.at(r, col).norm();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best < 1e-300 {
                return Err(Error::Invalid { detail: "singular matrix".into() });
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let d = a.at(col, col);
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j) / d;
                *inv.at_mut(col, j) = inv.at(col, j) / d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col);
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = a.at(col, j) * f;
                    *a.at_mut(r, j) -= v;
                    let v = inv.at(col, j) * f;
                    *inv.at_mut(r, j) -= v;
                }
            }
        }
        Ok(inv)
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns `(eigenvalues, v)` with column k of `v` the eigenvector of
/// `eigenvalues[k]`. Converges to near machine precision, which the
/// exact p = 2 norm path relies on.
pub fn hermitian_eigen(a: &Dense) -> Result<(Vec<f64>, Dense)> {
    if a.rows != a.cols {
        return Err(Error::ShapeMismatch { context: "hermitian_eigen" });
    }
    let n = a.rows;
    let mut m = a.clone();
    // Symmetrize to wash out representation noise in the input.
    for i in 0..n {
        for j in 0..n {
            let v = (a.at(i, j) + a.at(j, i).conj()) * C64::new(0.5, 0.0);
            *m.at_mut(i, j) = v;
        }
    }
    let mut v = Dense::identity(n);
    let scale = m.frobenius().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m.at(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.at(p, q);
                let r = apq.norm();
                if r <= 1e-18 * scale {
                    continue;
                }
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                // Factor the plane rotation as (phase removal) * (real
                // Jacobi rotation): with a_pq = r e^{i phi}, the unitary
                //   J_pp = c, J_pq = -s, J_qp = s e^{-i phi}, J_qq = c e^{-i phi}
                // zeroes the (p, q) entry when tan(2 theta) = 2r / (app - aqq).
                let phase = apq / C64::new(r, 0.0);
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(-s, 0.0);
                let jqp = phase.conj() * s;
                let jqq = phase.conj() * c;
                // M <- J^H M J: columns first, then rows.
                for i in 0..n {
                    let mip = m.at(i, p);
                    let miq = m.at(i, q);
                    *m.at_mut(i, p) = mip * jpp + miq * jqp;
                    *m.at_mut(i, q) = mip * jpq + miq * jqq;
                }
                for j in 0..n {
                    let mpj = m.at(p, j);
                    let mqj = m.at(q, j);
                    *m.at_mut(p, j) = jpp.conj() * mpj + jqp.conj() * mqj;
                    *m.at_mut(q, j) = jpq.conj() * mpj + jqq.conj() * mqj;
                }
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    *v.at_mut(i, p) = vip * jpp + viq * jqp;
                    *v.at_mut(i, q) = vip * jpq + viq * jqq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m.at(i, i).re).collect();
    Ok((eig, v))
}

/// Largest singular value of `a` together with a maximizing unit vector
/// of `A^H A` (a right singular vector).
pub fn top_singular(a: &Dense) -> Result<(f64, Vec<C64>)> {
    let gram = a.adjoint().matmul(a);
    let (eig, v) = hermitian_eigen(&gram)?;
    let mut best = 0usize;
    for (i, &l) in eig.iter().enumerate() {
        if l > eig[best] {
            best = i;
        }
    }
    let sigma = eig[best].max(0.0).sqrt();
    let vec = (0..a.cols).map(|i| v.at(i, best)).collect();
    Ok((sigma, vec))
}
