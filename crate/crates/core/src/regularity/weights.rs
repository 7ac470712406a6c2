use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::forms::{s_q_member, ParamSolution};
use crate::error::{Error, Result};
use crate::mult_funcs::ElementFn;
use crate::quad_ring::QuadInt;

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(Error::PreconditionError(format!("0 < delta < 1/2, got {delta}")))
    }
}

/// Trapezoid on the circle in the turn variable `t` of `e(t)`: 1 for `|t| <= δ/2`,
/// 0 for `|t| >= δ`, linear in between.
pub fn trapezoid(delta: f64, turns: f64) -> f64 {
    let t = (turns - turns.round()).abs();
    if t <= delta / 2.0 {
        1.0
    } else if t >= delta {
        0.0
    } else {
        (delta - t) / (delta / 2.0)
    }
}

fn weight_unchecked(sol: &ParamSolution, delta: f64, m: QuadInt, n: QuadInt) -> f64 {
    if !s_q_member(sol, m, n) {
        return 0.0;
    }
    let f = &sol.field;
    let top = f.norm(sol.first_factor(m, n)) as f64;
    let bottom = f.norm(sol.second_factor(m, n)) as f64;
    trapezoid(delta, (top.ln() - bottom.ln()) / TAU)
}

/// `F_δ(N(ℓ(m+αn)(m+βn) / ℓ'mn)^i) · 1_{S_q}(m, n)`
pub fn weight_w_delta(sol: &ParamSolution, delta: f64, m: QuadInt, n: QuadInt) -> Result<f64> {
    check_delta(delta)?;
    Ok(weight_unchecked(sol, delta, m, n))
}

/// Mean of `term(m, n)` over nonzero `m, n` with `N(m), N(n) <= bound`.
fn pair_mean<T>(sol: &ParamSolution, bound: u64, term: impl Fn(QuadInt, QuadInt) -> T + Sync) -> (T, usize)
where
    T: Send + std::iter::Sum<T> + Copy,
{
    let ball = sol.field.enumerate_ball(bound);
    let rows: Vec<T> = ball.par_iter().map(|&m| ball.iter().map(|&n| term(m, n)).sum()).collect();
    (rows.into_iter().sum(), ball.len() * ball.len())
}

pub fn weight_average(sol: &ParamSolution, delta: f64, bound: u64) -> Result<f64> {
    check_delta(delta)?;
    let (total, count) = pair_mean(sol, bound, |m, n| weight_unchecked(sol, delta, m, n));
    Ok(if count == 0 { 0.0 } else { total / count as f64 })
}

/// Mean of `w_δ(m,n) f(ℓ(Qm+1+Qαn)(Qm+1+Qβn)) conj(f(ℓ'(Qm+1)Qn))`. Where one of the
/// two arguments vanishes the term is the bare weight.
pub fn a_delta_average(f: &ElementFn, sol: &ParamSolution, delta: f64, q: QuadInt, bound: u64) -> Result<Complex64> {
    check_delta(delta)?;
    if !f.is_unimodular() {
        return Err(Error::NotUnimodular(f.id()));
    }
    if q.is_zero() {
        return Err(Error::PreconditionError("Q != 0".into()));
    }
    let field = &sol.field;
    let term = |m: QuadInt, n: QuadInt| {
        let w = weight_unchecked(sol, delta, m, n);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let shifted = field.mul(q, m) + QuadInt::ONE;
        let qn = field.mul(q, n);
        let top = field.mul(sol.ell, field.mul(shifted + field.mul(sol.alpha, qn), shifted + field.mul(sol.beta, qn)));
        let bottom = field.mul(sol.ell_prime, field.mul(shifted, qn));
        if top.is_zero() || bottom.is_zero() {
            return Complex64::new(w, 0.0);
        }
        f.eval(field, top) * f.eval(field, bottom).conj() * w
    };
    let (total, count) = pair_mean(sol, bound, term);
    Ok(if count == 0 { Complex64::new(0.0, 0.0) } else { total / count as f64 })
}
