//! Finite-difference discretizations of the two model Hamiltonians.

use nalgebra::{DMatrix, SMatrix};

use super::banded::BandMatrix;
use super::grid::Grid;
use super::roots::bisect_sign_change;
use crate::spectrum::{DiscreteEigenvalue, SpectralFactor};
use crate::{Error, Result, C64};

/// Two linear conditions `N·b = 0` on a 4-vector of boundary values.
///
/// For the Schrödinger model `b = (f(+0), f(−0), f′(+0), f′(−0))`, for the
/// Dirac model `b = (f₁(+0), f₂(+0), f₁(−0), f₂(−0))`.
pub type BoundaryRows = SMatrix<C64, 2, 4>;

/// Rows `N` with `N·b = 0` exactly for `b ∈ span(b1, b2)`, orthonormal.
pub fn annihilator(b1: &nalgebra::Vector4<C64>, b2: &nalgebra::Vector4<C64>) -> Result<BoundaryRows> {
    let span = nalgebra::Matrix4x2::from_columns(&[*b1, *b2]);
    let sv = span.singular_values();
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::param("boundary space", "is not two-dimensional"));
    }
    let q = span.qr().q();
    let proj = nalgebra::Matrix4::<C64>::identity() - &q * q.adjoint();
    let svd = proj.svd(true, false);
    let u = svd.u.expect("requested");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    // Columns of the complement; N = conj-transpose makes N·b the inner product.
    let mut rows = BoundaryRows::zeros();
    for (r, &k) in order[..2].iter().enumerate() {
        for j in 0..4 {
            rows[(r, j)] = u[(j, k)].conj();
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Values at `−(n−1)h … −0, +0 … (n−1)h`.
    Scalar,
    /// Staggered spinor grid; `nodal` (0 or 1) is the component stored at
    /// integer nodes, the other one sits at half nodes.
    Spinor { nodal: usize },
}

/// A discretized operator `A` together with the mass diagonal `M` of the
/// pencil `A − zM`. Coupling rows carry `M = 0`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub grid: Grid,
    pub layout: Layout,
    pub matrix: BandMatrix,
    pub mass: Vec<f64>,
    /// Node positions; the two origin nodes both sit at 0.
    pub x: Vec<f64>,
    /// `sign(x)` with the origin nodes assigned to their half-line.
    pub side: Vec<f64>,
    /// Spinor component of each unknown (always 0 for the scalar layout).
    pub component: Vec<usize>,
    pub weight: Vec<f64>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// Index of the mirror node `x → −x`.
    pub fn mirror(&self, i: usize) -> usize {
        self.dim() - 1 - i
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(v)
    }

    /// Weighted ℓ² norm approximating the L² norm.
    pub fn grid_norm(&self, v: &[C64]) -> f64 {
        v.iter()
            .zip(&self.weight)
            .map(|(z, w)| w * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn rhs(&self, f: &[C64]) -> Vec<C64> {
        f.iter().zip(&self.mass).map(|(v, m)| v * *m).collect()
    }

    /// Solves `(A − z)x = f`; coupling rows get a zero right side.
    pub fn resolvent_solve(&self, z: C64, f: &[C64]) -> Result<Vec<C64>> {
        if f.len() != self.dim() {
            return Err(Error::param("f", format!("expected {} samples", self.dim())));
        }
        self.matrix.factor_shifted(z, &self.mass).solve(&self.rhs(f))
    }

    /// `‖(A − z)x − f‖/‖f‖` in the plain ℓ² norm.
    pub fn solve_residual(&self, z: C64, x: &[C64], f: &[C64]) -> f64 {
        let ax = self.apply(x);
        let b = self.rhs(f);
        let num: f64 = (0..self.dim())
            .map(|i| (ax[i] - z * self.mass[i] * x[i] - b[i]).norm_sqr())
            .sum();
        let den: f64 = b.iter().map(|v| v.norm_sqr()).sum();
        (num / den).sqrt()
    }

    /// `(log|det(A − zM)|, arg det(A − zM))`.
    pub fn log_det(&self, z: f64) -> (f64, f64) {
        self.matrix.factor_shifted(c(z), &self.mass).log_det()
    }

    /// Real eigenvalues between consecutive `scan` points, located as sign
    /// changes of `Re(e^{−iψ} det(A − zM))` and refined by bisection.
    ///
    /// A candidate is kept only if `|det|` at the refined point is at least
    /// `1e-3` times smaller than at both bracket ends; phase drift without a
    /// zero produces no such dip.
    pub fn real_eigenvalues(&self, scan: &[f64], xtol: f64) -> Vec<DiscreteEigenvalue> {
        let samples: Vec<(f64, f64)> = scan.iter().map(|&z| self.log_det(z)).collect();
        let Some(reference) = samples
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|s| s.1)
        else {
            return Vec::new();
        };
        let sign = |s: (f64, f64)| (s.1 - reference).cos();
        let mut out = Vec::new();
        for k in 1..scan.len() {
            let (sa, sb) = (sign(samples[k - 1]), sign(samples[k]));
            if sa.signum() == sb.signum() {
                continue;
            }
            let (a, b) = (scan[k - 1], scan[k]);
            let z = bisect_sign_change(|t| sign(self.log_det(t)), a, b, xtol);
            let (la, _) = self.log_det(z);
            let dip = la - samples[k - 1].0.min(samples[k].0);
            if dip < -(1e3f64).ln() {
                out.push(DiscreteEigenvalue {
                    z,
                    factor: SpectralFactor::Discretization,
                    residual: dip.exp(),
                });
            }
        }
        out
    }

    /// Unknowns kept after eliminating the coupling-row unknowns.
    pub fn kept_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.mass[i] != 0.0).collect()
    }

    /// Dense matrix of the standard eigenproblem obtained by eliminating the
    /// origin unknowns through the coupling rows. Meant for small grids.
    pub fn reduced_dense(&self) -> Result<DMatrix<C64>> {
        let kept = self.kept_indices();
        let cpl: Vec<usize> = (0..self.dim()).filter(|&i| self.mass[i] == 0.0).collect();
        let a = |i: usize, j: usize| self.matrix.get(i, j);
        let acc = DMatrix::from_fn(cpl.len(), cpl.len(), |i, j| a(cpl[i], cpl[j]));
        let acc_inv = acc
            .try_inverse()
            .ok_or_else(|| Error::SingularSystem("coupling block is singular".into()))?;
        let acd = DMatrix::from_fn(cpl.len(), kept.len(), |i, j| a(cpl[i], kept[j]));
        let adc = DMatrix::from_fn(kept.len(), cpl.len(), |i, j| a(kept[i], cpl[j]));
        let add = DMatrix::from_fn(kept.len(), kept.len(), |i, j| a(kept[i], kept[j]));
        Ok(add - adc * (acc_inv * acd))
    }

    /// Dense eigenvalues of [`Self::reduced_dense`].
    pub fn dense_eigenvalues(&self) -> Result<Vec<C64>> {
        let m = self.reduced_dense()?;
        let (_, t) = m
            .try_schur(f64::EPSILON, 0)
            .ok_or(Error::NotConverged {
                estimate: f64::NAN,
                error: f64::NAN,
            })?
            .unpack();
        Ok(t.diagonal().iter().copied().collect())
    }

    /// Parity on the kept unknowns: `P` for the scalar layout, `P⊗σ₃` for spinors.
    pub fn parity_dense(&self) -> DMatrix<C64> {
        let kept = self.kept_indices();
        let pos: std::collections::HashMap<usize, usize> =
            kept.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = DMatrix::zeros(kept.len(), kept.len());
        for (k, &i) in kept.iter().enumerate() {
            let s = if self.component[i] == 1 { -1.0 } else { 1.0 };
            m[(k, pos[&self.mirror(i)])] = c(s);
        }
        m
    }

    /// `sign(x)` on the kept unknowns.
    pub fn sign_dense(&self) -> DMatrix<C64> {
        let kept = self.kept_indices();
        DMatrix::from_fn(kept.len(), kept.len(), |i, j| {
            if i == j {
                c(self.side[kept[i]])
            } else {
                c(0.0)
            }
        })
    }
}

/// `−d²/dx²` on `[−L, 0) ∪ (0, L]` with Dirichlet conditions at `±L` and the
/// point condition `rows` at the origin. One-sided derivatives use the
/// second-order formulas `f′(+0) ≈ (−3f₀ + 4f₁ − f₂)/2h`,
/// `f′(−0) ≈ (3f₋₀ − 4f₋₁ + f₋₂)/2h`.
pub fn schrodinger_operator(rows: &BoundaryRows, grid: Grid) -> DiscreteOperator {
    let n = grid.n();
    let h = grid.h();
    let dim = 2 * n;
    let mut a = BandMatrix::zeros(dim, 3, 3);
    let mut mass = vec![1.0; dim];
    let ih2 = 1.0 / (h * h);
    for right in [false, true] {
        let idx = |j: usize| grid.scalar_index(right, j);
        for j in 1..n {
            let i = idx(j);
            a.set(i, i, c(2.0 * ih2));
            a.set(i, idx(j - 1), c(-ih2));
            if j + 1 < n {
                a.set(i, idx(j + 1), c(-ih2));
            }
        }
    }
    let (p, m) = (|j| grid.scalar_index(true, j), |j| grid.scalar_index(false, j));
    let i2h = 0.5 / h;
    for (r, row) in [m(0), p(0)].into_iter().enumerate() {
        mass[row] = 0.0;
        let nr = |k: usize| rows[(r, k)];
        a.add(row, p(0), nr(0) - nr(2) * (3.0 * i2h));
        a.add(row, p(1), nr(2) * (4.0 * i2h));
        a.add(row, p(2), -nr(2) * i2h);
        a.add(row, m(0), nr(1) + nr(3) * (3.0 * i2h));
        a.add(row, m(1), -nr(3) * (4.0 * i2h));
        a.add(row, m(2), nr(3) * i2h);
    }
    let x = grid.scalar_positions();
    let side = (0..dim).map(|i| if i < n { -1.0 } else { 1.0 }).collect();
    DiscreteOperator {
        grid,
        layout: Layout::Scalar,
        matrix: a,
        mass,
        x,
        side,
        component: vec![0; dim],
        weight: grid.scalar_weights(),
    }
}

/// Component stored at integer nodes: the one whose origin values make the
/// coupling block of `rows` best conditioned.
pub fn dirac_nodal_component(rows: &BoundaryRows) -> usize {
    // Orthonormalize the rows so the comparison is scale-free.
    let q = rows.transpose().qr().q();
    let block = |k: usize| {
        let m = nalgebra::Matrix2::new(q[(k, 0)], q[(k, 1)], q[(k + 2, 0)], q[(k + 2, 1)]);
        m.determinant().norm()
    };
    if block(1) > block(0) {
        1
    } else {
        0
    }
}

/// `−ic d/dx⊗σ₁ + (c²/2)⊗σ₃` on a staggered grid with the nodal component
/// vanishing at `±L`, and the point condition `rows` on
/// `(f₁(+0), f₂(+0), f₁(−0), f₂(−0))`. Half-node values are extrapolated to
/// the origin by `(3f_{1/2} − f_{3/2})/2`.
pub fn dirac_operator(rows: &BoundaryRows, speed: f64, grid: Grid) -> DiscreteOperator {
    let n = grid.n();
    let h = grid.h();
    let dim = 4 * n;
    let nodal = dirac_nodal_component(rows);
    let stag = 1 - nodal;
    let mc = |k: usize| if k == 0 { 0.5 * speed * speed } else { -0.5 * speed * speed };
    let d = C64::new(0.0, -speed / h);
    let na = |right: bool, j: usize| if right { 2 * n + 2 * j } else { 2 * n - 1 - 2 * j };
    let nb = |right: bool, j: usize| if right { 2 * n + 2 * j + 1 } else { 2 * n - 2 - 2 * j };
    let mut a = BandMatrix::zeros(dim, 4, 4);
    let mut mass = vec![1.0; dim];
    for right in [false, true] {
        // d/dx in the index direction j is ±d/dj.
        let s = if right { 1.0 } else { -1.0 };
        for j in 1..n {
            let i = na(right, j);
            a.set(i, i, c(mc(nodal)));
            a.add(i, nb(right, j), d * s);
            a.add(i, nb(right, j - 1), -d * s);
        }
        for j in 0..n {
            let i = nb(right, j);
            a.set(i, i, c(mc(stag)));
            if j + 1 < n {
                a.add(i, na(right, j + 1), d * s);
            }
            a.add(i, na(right, j), -d * s);
        }
    }
    // Columns of `rows`: component k at +0 is 0/1, at −0 is 2/3.
    let col = |k: usize, right: bool| if right { k } else { k + 2 };
    for (r, row) in [na(false, 0), na(true, 0)].into_iter().enumerate() {
        mass[row] = 0.0;
        for right in [false, true] {
            a.add(row, na(right, 0), rows[(r, col(nodal, right))]);
            let w = rows[(r, col(stag, right))];
            a.add(row, nb(right, 0), w * 1.5);
            a.add(row, nb(right, 1), w * -0.5);
        }
    }
    let mut x = vec![0.0; dim];
    let mut side = vec![0.0; dim];
    let mut component = vec![0; dim];
    let mut weight = vec![h; dim];
    for right in [false, true] {
        let s = if right { 1.0 } else { -1.0 };
        for j in 0..n {
            x[na(right, j)] = s * j as f64 * h;
            x[nb(right, j)] = s * (j as f64 + 0.5) * h;
            side[na(right, j)] = s;
            side[nb(right, j)] = s;
            component[na(right, j)] = nodal;
            component[nb(right, j)] = stag;
        }
        weight[na(right, 0)] = 0.5 * h;
    }
    DiscreteOperator {
        grid,
        layout: Layout::Spinor { nodal },
        matrix: a,
        mass,
        x,
        side,
        component,
        weight,
    }
}
