//! Complex banded matrices with partial-pivoting LU.

use crate::{Error, Result, C64};

/// Square matrix with `kl` sub- and `ku` superdiagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // Row-major, row i holds columns i−kl ..= i+ku.
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            data: vec![C64::new(0.0, 0.0); n * (kl + ku + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.ku {
            None
        } else {
            Some(i * (self.kl + self.ku + 1) + (j + self.kl - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map_or(C64::new(0.0, 0.0), |k| self.data[k])
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside band ({}, {})", self.kl, self.ku));
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        let k = self.slot(i, j).expect("entry outside band");
        self.data[k] += v;
    }

    /// Nonzero-capable columns of row `i`.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// LU factorization of `self − z·diag(mass)`.
    pub fn factor_shifted(&self, z: C64, mass: &[f64]) -> BandLu {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let w = 2 * kl + ku + 1;
        let mut lu = vec![C64::new(0.0, 0.0); n * w];
        for i in 0..n {
            for j in self.row_range(i) {
                lu[i * w + (j + kl - i)] = self.get(i, j);
            }
            lu[i * w + kl] -= z * mass[i];
        }
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu[idx(k, k)].norm();
            for i in k + 1..=last {
                let v = lu[idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    lu.swap(idx(k, j), idx(p, j));
                }
            }
            let d = lu[idx(k, k)];
            if d.norm() == 0.0 {
                continue;
            }
            for i in k + 1..=last {
                let l = lu[idx(i, k)] / d;
                lu[idx(i, k)] = l;
                if l.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..=jmax {
                    let u = lu[idx(k, j)];
                    lu[idx(i, j)] -= l * u;
                }
            }
        }
        BandLu { n, kl, ku, lu, piv }
    }
}

/// Result of [`BandMatrix::factor_shifted`].
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    lu: Vec<C64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn w(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        self.lu[i * self.w() + (j + self.kl - i)]
    }

    /// `(log|det|, arg det)`.
    pub fn log_det(&self) -> (f64, f64) {
        let mut log_abs = 0.0;
        let mut phase = 0.0;
        for k in 0..self.n {
            let d = self.at(k, k);
            log_abs += d.norm().ln();
            phase += d.arg();
            if self.piv[k] != k {
                phase += std::f64::consts::PI;
            }
        }
        (log_abs, phase.rem_euclid(std::f64::consts::TAU))
    }

    /// Ratio of largest to smallest pivot modulus, a cheap conditioning proxy.
    pub fn pivot_ratio(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for k in 0..self.n {
            let d = self.at(k, k).norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi / lo
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let ratio = self.pivot_ratio();
        if !(ratio < 1e14) {
            return Err(Error::SingularSystem(format!(
                "pivot ratio {ratio:.3e} (condition estimate)"
            )));
        }
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= self.at(i, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + kl + ku).min(n - 1) {
                s -= self.at(k, j) * x[j];
            }
            x[k] = s / self.at(k, k);
        }
        Ok(x)
    }
}
