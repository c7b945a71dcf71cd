use crate::{Error, Result, C64};

/// Uniform symmetric grid on `[−L, L]` with `n` cells per half-line.
///
/// The origin is a boundary of both half-lines; the one-sided limits at `±0`
/// are separate nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::param("grid L", format!("must be finite and > 0, got {l}")));
        }
        if n < 100 {
            return Err(Error::param("grid n", format!("must be at least 100, got {n}")));
        }
        Ok(Grid { l, n })
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Node positions of the scalar layout, ascending: `−(n−1)h, …, −h, −0, +0, h, …, (n−1)h`.
    pub fn scalar_positions(&self) -> Vec<f64> {
        let n = self.n;
        let h = self.h();
        (0..2 * n)
            .map(|i| {
                if i < n {
                    -((n - 1 - i) as f64) * h
                } else {
                    (i - n) as f64 * h
                }
            })
            .collect()
    }

    /// Index of the scalar node at `x = s·j·h`, `s = ±1`.
    pub fn scalar_index(&self, right: bool, j: usize) -> usize {
        if right {
            self.n + j
        } else {
            self.n - 1 - j
        }
    }

    /// Trapezoid weights of the scalar layout (the function vanishes at `±L`).
    pub fn scalar_weights(&self) -> Vec<f64> {
        let h = self.h();
        let mut w = vec![h; 2 * self.n];
        w[self.n - 1] = 0.5 * h;
        w[self.n] = 0.5 * h;
        w
    }
}

/// Complex samples on the scalar layout of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<C64>,
}

impl SampledFunction {
    /// Samples `f(x, right)`; the flag separates the two origin nodes.
    pub fn from_fn<F: Fn(f64, bool) -> C64>(grid: Grid, f: F) -> Self {
        let x = grid.scalar_positions();
        let n = grid.n();
        let values = x.iter().enumerate().map(|(i, &x)| f(x, i >= n)).collect();
        SampledFunction { grid, values }
    }

    pub fn positions(&self) -> Vec<f64> {
        self.grid.scalar_positions()
    }

    /// Trapezoid `∫ u v̄`.
    pub fn inner(&self, other: &[C64]) -> C64 {
        self.values
            .iter()
            .zip(other)
            .zip(self.grid.scalar_weights())
            .map(|((u, v), w)| u * v.conj() * w)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(&self.values).re.sqrt()
    }
}
