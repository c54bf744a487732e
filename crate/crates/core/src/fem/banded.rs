use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square matrix stored by diagonals within half-bandwidth `bw`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        Self {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> Option<usize> {
        if i.abs_diff(j) > self.bw {
            return None;
        }
        Some(i * (2 * self.bw + 1) + (j + self.bw - i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` at (i, j); panics if the entry lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .index(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside bandwidth {}", self.bw));
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if let Some(k) = self.index(i, j) {
            self.data[k] = v;
        } else {
            assert_eq!(v, 0.0, "({i}, {j}) outside bandwidth {}", self.bw);
        }
    }

    fn band_cols(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.bw)..=(i + self.bw).min(self.n - 1)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// ‖K − Kᵀ‖_F
    pub fn asymmetry_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in self.band_cols(i) {
                let d = self.get(i, j) - self.get(j, i);
                sum += d * d;
            }
        }
        sum.sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.band_cols(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Rows and columns `keep` (ascending) of this matrix.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let mut out = Self::zeros(keep.len(), self.bw);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if j.abs_diff(i) <= self.bw && a.abs_diff(b) <= out.bw {
                    out.set(a, b, self.get(i, j));
                }
            }
        }
        out
    }

    pub(crate) fn zero_row_and_column(&mut self, d: usize) {
        for j in self.band_cols(d) {
            self.set(d, j, 0.0);
            self.set(j, d, 0.0);
        }
    }

    /// Banded Cholesky factorization K = L Lᵀ using the lower triangle.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let width = bw + 1;
        // l[i * width + (i - j)] = L(i, j)
        let mut l = vec![0.0; n * width];
        for j in 0..n {
            let k0 = j.saturating_sub(bw);
            let mut d = self.get(j, j);
            for k in k0..j {
                let v = l[j * width + (j - k)];
                d -= v * v;
            }
            let scale = self.get(j, j).abs().max(f64::MIN_POSITIVE);
            if !(d > 1e-13 * scale) || !d.is_finite() {
                return Err(Error::Singular(format!(
                    "non-positive pivot {d:e} at dof {j} (diagonal {:e})",
                    self.get(j, j)
                )));
            }
            let djj = d.sqrt();
            l[j * width] = djj;
            for i in (j + 1)..=(j + bw).min(n - 1) {
                let kk = i.saturating_sub(bw).max(k0);
                let mut s = self.get(i, j);
                for k in kk..j {
                    s -= l[i * width + (i - k)] * l[j * width + (j - k)];
                }
                l[i * width + (i - j)] = s / djj;
            }
        }
        Ok(BandCholesky { n, bw, l })
    }

    /// Smallest eigenvalue of a symmetric positive-definite band matrix by
    /// inverse iteration; fails with [`Error::Singular`] if the matrix is not
    /// positive definite.
    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        let chol = self.cholesky()?;
        let n = self.n;
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64)
            .collect();
        let mut lambda = f64::INFINITY;
        for _ in 0..1000 {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
            let rq = self.quadratic_form(&x);
            if (rq - lambda).abs() <= 1e-12 * rq.abs() {
                return Ok(rq);
            }
            lambda = rq;
            x = chol.solve(&x);
        }
        Ok(lambda)
    }
}

/// Lower-triangular band factor of a [`BandMatrix`].
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let width = bw + 1;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * width + (i - k)] * y[k];
            }
            y[i] = s / self.l[i * width];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..=(i + bw).min(n - 1) {
                s -= self.l[k * width + (k - i)] * y[k];
            }
            y[i] = s / self.l[i * width];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, bw: usize, seed: u64) -> BandMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = BandMatrix::zeros(n, bw);
        for i in 0..n {
            for j in i..=(i + bw).min(n - 1) {
                let v: f64 = rng.gen_range(-1.0..1.0);
                if i == j {
                    m.add(i, i, 2.0 * bw as f64 + 1.0 + v.abs());
                } else {
                    m.add(i, j, v);
                    m.add(j, i, v);
                }
            }
        }
        m
    }

    #[test]
    fn cholesky_solve_matches_dense() {
        let m = random_spd(60, 7, 3);
        let b: Vec<f64> = (0..60).map(|i| (i as f64).sin()).collect();
        let x = m.cholesky().unwrap().solve(&b);
        let dense = m.to_dense().cholesky().unwrap();
        let xd = dense.solve(&nalgebra::DVector::from_vec(b.clone()));
        for i in 0..60 {
            assert!((x[i] - xd[i]).abs() < 1e-12);
        }
        let r = m.mul_vec(&x);
        for i in 0..60 {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn smallest_eigenvalue_matches_dense() {
        let m = random_spd(40, 5, 9);
        let dense = m.to_dense().symmetric_eigenvalues();
        let min = dense.iter().cloned().fold(f64::INFINITY, f64::min);
        let got = m.smallest_eigenvalue().unwrap();
        assert!((got - min).abs() < 1e-9 * min.abs(), "{got} vs {min}");
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let mut m = BandMatrix::zeros(3, 1);
        m.add(0, 0, 1.0);
        m.add(1, 1, -1.0);
        m.add(2, 2, 1.0);
        assert!(matches!(m.cholesky(), Err(Error::Singular(_))));
    }

    #[test]
    fn submatrix_keeps_band_entries() {
        let m = random_spd(10, 2, 1);
        let keep = [1, 2, 3, 5, 6];
        let s = m.principal_submatrix(&keep);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                assert_eq!(s.get(a, b), m.get(i, j));
            }
        }
    }
}
