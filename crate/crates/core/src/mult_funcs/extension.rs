use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use super::{ElementFn, IdealFn};
use crate::error::{Error, Result};
use crate::ideal_arith::{ClassGroup, IdealHnf, PrimeIdeal};
use crate::quad_ring::QuadInt;

const UNIT_TOLERANCE: f64 = 1e-12;

/// A completely multiplicative ideal function agreeing with an element function
/// on principal ideals, fixed by its values `a_i` on the class group generators.
#[derive(Clone, Debug)]
pub struct Extension {
    class_group: Arc<ClassGroup>,
    base: ElementFn,
    roots: Vec<Complex64>,
    choice: Vec<u32>,
}

impl Extension {
    pub fn base(&self) -> &ElementFn {
        &self.base
    }

    /// Values on the class group generators.
    pub fn generator_values(&self) -> &[Complex64] {
        &self.roots
    }

    /// Root index chosen for each generator.
    pub fn choice(&self) -> &[u32] {
        &self.choice
    }

    /// `f(x) * f(N(I_b))^{-1} * prod a_i^{b_i}` where `I = (x) I_b / N(I_b)`.
    pub fn eval(&self, i: &IdealHnf) -> Complex64 {
        let f = self.class_group.field();
        let (b, x) = self.class_group.class_with_generator(i);
        let rep_norm = self.class_group.representative(&b).norm();
        let mut v = self.base.eval(f, x) / self.base.eval(f, QuadInt::int(rep_norm));
        for (a, &e) in self.roots.iter().zip(&b) {
            v *= a.powu(e);
        }
        v
    }

    pub fn at_prime(&self, q: &PrimeIdeal) -> Complex64 {
        self.eval(&q.hnf)
    }

    pub fn id(&self) -> String {
        let choice: Vec<String> = self.choice.iter().map(u32::to_string).collect();
        format!("extension({}; {})", self.base.id(), choice.join(","))
    }
}

/// The `d` roots of `t^{1/d}` on the unit circle, by principal argument ascending.
fn roots_of(t: Complex64, d: u32) -> Vec<Complex64> {
    let theta = t.arg();
    let mut args: Vec<f64> = (0..d)
        .map(|j| {
            let a = (theta + TAU * j as f64) / d as f64;
            if a > PI {
                a - TAU
            } else {
                a
            }
        })
        .collect();
    args.sort_by(f64::total_cmp);
    args.into_iter().map(|a| Complex64::from_polar(1.0, a)).collect()
}

/// All `h` extensions of `f` to ideals, in lexicographic order of root choices.
pub fn extensions_of(cg: &Arc<ClassGroup>, f: &ElementFn) -> Result<Vec<IdealFn>> {
    if !f.is_unimodular() {
        return Err(Error::NotUnimodular(f.id()));
    }
    let field = cg.field();
    for e in field.units() {
        let v = f.eval(field, e);
        if (v - Complex64::new(1.0, 0.0)).norm() > UNIT_TOLERANCE {
            return Err(Error::NoExtension { unit: e.to_string(), value: format!("{v}") });
        }
    }
    let root_lists: Vec<Vec<Complex64>> =
        cg.generators().iter().map(|g| roots_of(f.eval(field, g.generator), g.order)).collect();
    let mut out = Vec::with_capacity(cg.class_number());
    for choice in cg.exponent_vectors() {
        let roots = choice.iter().zip(&root_lists).map(|(&j, r)| r[j as usize]).collect();
        out.push(IdealFn::Extension(Arc::new(Extension {
            class_group: Arc::clone(cg),
            base: f.clone(),
            roots,
            choice: choice.to_vec(),
        })));
    }
    Ok(out)
}
