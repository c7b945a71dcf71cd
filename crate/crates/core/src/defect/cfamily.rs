use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::{standard_symmetries, DefectOperator, DefectVector, Mat4, OperatorTag};
use crate::{Error, Result, C64};

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

/// One member `(θ, ω)` of the `C_{θ,ω}` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CParams {
    theta: f64,
    omega: f64,
}

impl CParams {
    pub fn new(theta: f64, omega: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::param("theta", format!("must be finite and > 0, got {theta}")));
        }
        if !omega.is_finite() {
            return Err(Error::param("omega", "must be finite"));
        }
        Ok(CParams {
            theta,
            omega: wrap_angle(omega),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn chi(&self) -> f64 {
        self.theta.ln()
    }

    /// `cosh χ = (θ + 1/θ)/2`.
    pub fn alpha(&self) -> f64 {
        self.chi().cosh()
    }

    /// `sinh χ = (θ − 1/θ)/2`.
    pub fn beta(&self) -> f64 {
        self.chi().sinh()
    }

    /// The equivalent pair with `θ ≥ 1`; `(θ, ω)` and `(1/θ, ω+π)` give the same operator.
    pub fn canonical(&self) -> CParams {
        if self.theta >= 1.0 {
            *self
        } else {
            CParams {
                theta: 1.0 / self.theta,
                omega: wrap_angle(self.omega + PI),
            }
        }
    }

    /// `(1/θ, ω)`.
    pub fn inverse_theta(&self) -> CParams {
        CParams {
            theta: 1.0 / self.theta,
            omega: self.omega,
        }
    }
}

/// `R_ω e₊₊ = e^{iω}e₊₋`, `R_ω e₊₋ = e^{-iω}e₊₊`, `R_ω e₋₋ = e^{-iω}e₋₊`, `R_ω e₋₊ = e^{iω}e₋₋`.
pub fn r_omega(omega: f64) -> DefectOperator {
    let p = C64::from_polar(1.0, omega);
    let m = p.conj();
    let mut r = Mat4::zeros();
    r[(1, 0)] = p;
    r[(0, 1)] = m;
    r[(3, 2)] = p;
    r[(2, 3)] = m;
    DefectOperator::tagged(r, OperatorTag::ROmega)
}

fn scaled(op: &DefectOperator, s: f64) -> Mat4 {
    op.matrix * C64::new(s, 0.0)
}

/// `T = ((1−θ)/(1+θ)) R_ω`.
pub fn transition_operator(p: &CParams) -> DefectOperator {
    let s = (1.0 - p.theta) / (1.0 + p.theta);
    DefectOperator::tagged(scaled(&r_omega(p.omega), s), OperatorTag::Transition)
}

/// `C = (α I − β R_ω) J`.
pub fn c_operator(p: &CParams) -> DefectOperator {
    let j = standard_symmetries().j;
    let m = (Mat4::identity() * C64::new(p.alpha(), 0.0) - scaled(&r_omega(p.omega), p.beta()))
        * j.matrix;
    DefectOperator::tagged(m, OperatorTag::C)
}

/// `Q = −χ R_ω`, so that `C = e^Q J`.
pub fn c_generator(p: &CParams) -> DefectOperator {
    DefectOperator::tagged(scaled(&r_omega(p.omega), -p.chi()), OperatorTag::Generator)
}

/// `exp(s·Q) = cosh(sχ) I − sinh(sχ) R_ω`.
pub fn exp_generator(p: &CParams, s: f64) -> DefectOperator {
    let x = s * p.chi();
    DefectOperator::new(
        Mat4::identity() * C64::new(x.cosh(), 0.0) - scaled(&r_omega(p.omega), x.sinh()),
    )
}

/// Projectors onto `𝔏±` along each other, from the transition operator:
/// `P₊ = (I − T)⁻¹(P⁺ − T P⁻)` with `P± = (I ± J)/2`.
pub fn projectors(p: &CParams) -> (DefectOperator, DefectOperator) {
    let j = standard_symmetries().j.matrix;
    let id = Mat4::identity();
    let half = C64::new(0.5, 0.0);
    let jp = (id + j) * half;
    let jm = (id - j) * half;
    let s = (1.0 - p.theta) / (1.0 + p.theta);
    let t = transition_operator(p).matrix;
    // T = sR_ω with R_ω² = I, so (I − T)⁻¹ = (I + T)/(1 − s²).
    let inv = (id + t) * C64::new(1.0 / (1.0 - s * s), 0.0);
    let plus = inv * (jp - t * jm);
    let minus = id - plus;
    (
        DefectOperator::tagged(plus, OperatorTag::ProjectorPlus),
        DefectOperator::tagged(minus, OperatorTag::ProjectorMinus),
    )
}

/// The elements `g_{±i}^{±}(θ)` entering the resolvent formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectElements {
    pub g_i_plus: DefectVector,
    pub g_minus_i_plus: DefectVector,
    pub g_i_minus: DefectVector,
    pub g_minus_i_minus: DefectVector,
}

/// `g = (I + ((1−α)/β) R_ω) e` for `e = e₊₊, e₋₊, e₊₋, e₋₋`.
pub fn defect_elements(p: &CParams) -> DefectElements {
    // (1 − cosh χ)/sinh χ = −tanh(χ/2); this also covers θ = 1.
    let s = -(p.chi() / 2.0).tanh();
    let op = DefectOperator::new(Mat4::identity() + scaled(&r_omega(p.omega), s));
    DefectElements {
        g_i_plus: op.apply(&DefectVector::e_pp()),
        g_minus_i_plus: op.apply(&DefectVector::e_mp()),
        g_i_minus: op.apply(&DefectVector::e_pm()),
        g_minus_i_minus: op.apply(&DefectVector::e_mm()),
    }
}

/// `μ = arg(cos φ + i α_θ sin φ)` in `[0, 2π)`.
pub fn mu_angle(phi: f64, theta: f64) -> f64 {
    let alpha = 0.5 * (theta + 1.0 / theta);
    wrap_angle((alpha * phi.sin()).atan2(phi.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::{max_entry, model_norm};

    fn p(theta: f64, omega: f64) -> CParams {
        CParams::new(theta, omega).unwrap()
    }

    #[test]
    fn rejects_bad_theta() {
        assert!(CParams::new(0.0, 0.0).is_err());
        assert!(CParams::new(-1.0, 0.0).is_err());
        assert!(CParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn alpha_beta_identity() {
        for th in [0.05, 0.5, 1.0, 2.0, 20.0] {
            let c = p(th, 0.3);
            assert!((c.alpha().powi(2) - c.beta().powi(2) - 1.0).abs() < 1e-12);
            assert!((c.alpha() - 0.5 * (th + 1.0 / th)).abs() < 1e-12);
        }
    }

    #[test]
    fn r_omega_special_values() {
        let r = standard_symmetries().r;
        assert!(r_omega(0.0).max_diff(&r) < 1e-15);
        let neg = DefectOperator::new(-r.matrix);
        assert!(r_omega(PI).max_diff(&neg) < 1e-15);
        let w = 0.83;
        let shifted = DefectOperator::new(-r_omega(w).matrix);
        assert!(r_omega(w + PI).max_diff(&shifted) < 1e-15);
    }

    #[test]
    fn r_omega_is_anticommuting_involution() {
        let j = standard_symmetries().j;
        let r = r_omega(1.7);
        assert!(r.compose(&r).max_diff(&DefectOperator::identity()) < 1e-15);
        assert!(r.adjoint().max_diff(&r) < 1e-15);
        let anti = j.compose(&r).matrix + r.compose(&j).matrix;
        assert!(max_entry(&anti) < 1e-15);
    }

    #[test]
    fn transition_operator_examples() {
        assert!(max_entry(&transition_operator(&p(1.0, 0.4)).matrix) == 0.0);
        let half_r = DefectOperator::new(standard_symmetries().r.matrix * C64::new(-0.5, 0.0));
        assert!(transition_operator(&p(3.0, 0.0)).max_diff(&half_r) < 1e-15);
        let t = transition_operator(&p(7.0, 2.0));
        assert!((t.norm() - 6.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn c_at_theta_one_is_j() {
        let j = standard_symmetries().j;
        assert!(c_operator(&p(1.0, 2.2)).max_diff(&j) < 1e-15);
    }

    #[test]
    fn c_norms() {
        assert!((c_operator(&p(2.0, 0.0)).norm() - 2.0).abs() < 1e-12);
        assert!((c_operator(&p(0.5, 0.0)).norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn c_from_transition_operator() {
        let j = standard_symmetries().j.matrix;
        for (th, w) in [(2.0, 0.3), (0.2, 5.0), (11.0, 1.0)] {
            let c = p(th, w);
            let t = transition_operator(&c).matrix;
            let id = Mat4::identity();
            let via_t = (id + t) * (id - t).try_inverse().unwrap() * j;
            assert!(max_entry(&(via_t - c_operator(&c).matrix)) < 1e-12);
        }
    }

    #[test]
    fn generator_examples() {
        assert!(max_entry(&c_generator(&p(1.0, 1.0)).matrix) == 0.0);
        let neg_r = DefectOperator::new(-standard_symmetries().r.matrix);
        assert!(c_generator(&p(std::f64::consts::E, 0.0)).max_diff(&neg_r) < 1e-15);
        let c = p(3.0, 0.7);
        let j = standard_symmetries().j;
        let conj = exp_generator(&c, 0.5)
            .compose(&j)
            .compose(&exp_generator(&c, -0.5));
        assert!(conj.max_diff(&c_operator(&c)) < 1e-12);
        assert!(exp_generator(&c, 1.0).compose(&j).max_diff(&c_operator(&c)) < 1e-12);
    }

    #[test]
    fn projector_examples() {
        let j = standard_symmetries().j.matrix;
        let (pp, _) = projectors(&p(1.0, 0.0));
        let expect = (Mat4::identity() + j) * C64::new(0.5, 0.0);
        assert!(max_entry(&(pp.matrix - expect)) < 1e-15);

        let c = p(2.0, 0.0);
        let (pp, pm) = projectors(&c);
        assert!(max_entry(&(pp.matrix * pm.matrix)) < 1e-12);
        assert!(max_entry(&(pp.matrix * pp.matrix - pp.matrix)) < 1e-12);
        assert!((pp.matrix.trace().re - 2.0).abs() < 1e-12);
        assert!(max_entry(&(pp.matrix - pm.matrix - c_operator(&c).matrix)) < 1e-12);
    }

    #[test]
    fn defect_element_examples() {
        let g = defect_elements(&p(1.0, 0.9));
        assert_eq!(g.g_i_plus, DefectVector::e_pp());
        assert!((model_norm(&g.g_i_plus) - 0.5f64.sqrt()).abs() < 1e-15);
        let g = defect_elements(&p(2.0, 0.0));
        assert!((model_norm(&g.g_i_plus).powi(2) - 5.0 / 9.0).abs() < 1e-12);
        let c = p(4.0, 1.3);
        let (a, b) = (defect_elements(&c), defect_elements(&c.inverse_theta()));
        // θ → 1/θ flips the sign of the R_ω part only.
        let sum = a.g_i_minus.0 + b.g_i_minus.0;
        assert!((sum - DefectVector::e_pm().0 * C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_angle(0.0, 3.0), 0.0);
        assert!((mu_angle(PI / 2.0, 3.0) - PI / 2.0).abs() < 1e-15);
        assert!((mu_angle(PI / 4.0, 1.0) - PI / 4.0).abs() < 1e-15);
        assert!((0.0..TAU).contains(&mu_angle(-0.1, 2.0)));
    }

    #[test]
    fn canonical_form_is_same_operator() {
        let c = p(0.25, 5.9);
        let k = c.canonical();
        assert!(k.theta() >= 1.0);
        assert!(c_operator(&c).max_diff(&c_operator(&k)) < 1e-12);
    }
}
