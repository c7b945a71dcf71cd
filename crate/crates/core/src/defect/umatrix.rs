use nalgebra::Matrix2;
use serde::Serialize;

use super::wrap_angle;
use crate::{Error, Result, C64};

pub type Mat2 = Matrix2<C64>;

/// A unitary `U = e^{iφ}[[q e^{iγ}, r e^{iξ}], [−r e^{−iξ}, q e^{−iγ}]]` labelling
/// one J-self-adjoint extension.
///
/// Stored with `r ≥ 0` and all angles in `[0, 2π)`; `q` carries a sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UMatrix {
    #[serde(skip)]
    entries: Mat2,
    q: f64,
    r: f64,
    phi: f64,
    gamma: f64,
    xi: f64,
}

fn entries_of(q: f64, r: f64, phi: f64, gamma: f64, xi: f64) -> Mat2 {
    let e = |a: f64| C64::from_polar(1.0, a);
    let g = e(phi);
    Mat2::new(
        g * e(gamma) * q,
        g * e(xi) * r,
        -g * e(-xi) * r,
        g * e(-gamma) * q,
    )
}

impl UMatrix {
    /// Builds `U` from its parameters. `q² + r²` may deviate from 1 by at most
    /// `1e-6`; the pair is renormalized.
    pub fn compose(q: f64, r: f64, phi: f64, gamma: f64, xi: f64) -> Result<Self> {
        for (name, v) in [("q", q), ("r", r), ("phi", phi), ("gamma", gamma), ("xi", xi)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        let n2 = q * q + r * r;
        if (n2 - 1.0).abs() > 1e-6 {
            return Err(Error::param(
                "q, r",
                format!("q² + r² = {n2} deviates from 1 by more than 1e-6"),
            ));
        }
        let n = n2.sqrt();
        let (q, mut r, mut xi) = (q / n, r / n, xi);
        if r < 0.0 {
            r = -r;
            xi += std::f64::consts::PI;
        }
        let (phi, gamma, xi) = (wrap_angle(phi), wrap_angle(gamma), wrap_angle(xi));
        Ok(UMatrix {
            entries: entries_of(q, r, phi, gamma, xi),
            q,
            r,
            phi,
            gamma,
            xi,
        })
    }

    /// Recovers the parameters of a unitary matrix with `q ≥ 0`, `φ ∈ [0, π)`.
    pub fn decompose(m: &Mat2) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("u", "entries must be finite"));
        }
        let deviation = (m.adjoint() * m - Mat2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        let mut phi = 0.5 * m.determinant().arg();
        if phi < 0.0 {
            phi += std::f64::consts::PI;
        }
        // e^{-iφ}U is in SU(2): [[a, b], [−b̄, ā]].
        let s = C64::from_polar(1.0, -phi);
        let a = 0.5 * (s * m[(0, 0)] + (s * m[(1, 1)]).conj());
        let b = 0.5 * (s * m[(0, 1)] - (s * m[(1, 0)]).conj());
        let arg = |z: C64| if z.norm() == 0.0 { 0.0 } else { z.arg() };
        Self::compose(a.norm(), b.norm(), phi, arg(a), arg(b))
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Largest entry of `U*U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.entries.adjoint() * self.entries - Mat2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn compose_examples() {
        let u = UMatrix::compose(0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let want = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!(max_diff(u.entries(), &want) < 1e-15);
        let u = UMatrix::compose(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(max_diff(u.entries(), &Mat2::identity()) < 1e-15);
    }

    #[test]
    fn compose_renormalizes_and_rejects() {
        let u = UMatrix::compose(0.6 + 1e-9, 0.8, 0.1, 0.2, 0.3).unwrap();
        assert!((u.q().powi(2) + u.r().powi(2) - 1.0).abs() < 1e-15);
        assert!(u.unitarity_defect() < 1e-12);
        assert!(UMatrix::compose(0.6, 0.81, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn negative_r_is_absorbed() {
        let a = UMatrix::compose(0.6, -0.8, 0.4, 0.5, 0.6).unwrap();
        assert!(a.r() > 0.0);
        let b = UMatrix::compose(0.6, 0.8, 0.4, 0.5, 0.6 + PI).unwrap();
        assert!(max_diff(a.entries(), b.entries()) < 1e-15);
    }

    #[test]
    fn decompose_examples() {
        let u = UMatrix::decompose(&Mat2::identity()).unwrap();
        assert!((u.q() - 1.0).abs() < 1e-15 && u.r() == 0.0);
        assert!(u.phi() == 0.0 && u.gamma() == 0.0);
        let m = Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        let u = UMatrix::decompose(&m).unwrap();
        assert!(u.q() == 0.0 && (u.r() - 1.0).abs() < 1e-15);
        assert!(u.phi() == 0.0 && u.xi() == 0.0);
    }

    #[test]
    fn decompose_rejects_non_unitary() {
        let m = Mat2::new(c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            UMatrix::decompose(&m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q: f64 = rng.random_range(-1.0..1.0);
            let r = (1.0 - q * q).sqrt();
            let ang = |rng: &mut ChaCha8Rng| rng.random_range(0.0..TAU);
            let u = UMatrix::compose(q, r, ang(&mut rng), ang(&mut rng), ang(&mut rng)).unwrap();
            let v = UMatrix::decompose(u.entries()).unwrap();
            assert!(max_diff(u.entries(), v.entries()) < 1e-12);
            assert!(v.q() >= 0.0 && v.phi() < PI);
        }
    }
}
