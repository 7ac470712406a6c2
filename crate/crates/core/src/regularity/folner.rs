use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal_arith::{
    factor_ideal, ideal_mul, ideal_pow, is_principal, prime_ideals_up_to, principal, ClassGroup, IdealHnf, PrimeIdeal,
    SplitType,
};
use crate::mult_funcs::ElementFn;
use crate::quad_ring::{QuadField, QuadInt};

/// The window `Φ_M`: principal products `∏ 𝔭^{a_𝔭}` over `N(𝔭) <= M` with `M < a_𝔭 <= 2M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FolnerSpec {
    pub m: u32,
    pub primes: Vec<PrimeIdeal>,
    /// Exponent tuples in lexicographic order, aligned with `primes`.
    pub exponents: Vec<Vec<u32>>,
    /// Canonical generator of each member.
    pub elements: Vec<QuadInt>,
}

impl FolnerSpec {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn exponent_tuples(r: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(r)];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                (m + 1..=2 * m).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Generator of `∏ 𝔭^{a_𝔭}` written as an integer content times a generator of
/// the primitive part; `None` if the product is not principal.
fn product_generator(field: &QuadField, primes: &[PrimeIdeal], exps: &[u32]) -> Option<QuadInt> {
    let mut content: i128 = 1;
    let mut prim = IdealHnf::ONE;
    let mut i = 0;
    while i < primes.len() {
        let q = &primes[i];
        let p = q.p as i128;
        match q.split {
            SplitType::Inert => content *= p.pow(exps[i]),
            SplitType::Ramified => {
                content *= p.pow(exps[i] / 2);
                prim = ideal_mul(field, &prim, &ideal_pow(field, &q.hnf, exps[i] % 2));
            }
            SplitType::Split => {
                let partner = primes[i + 1..].iter().position(|o| o.p == q.p).map(|j| i + 1 + j);
                match partner {
                    Some(j) if j == i + 1 => {
                        let low = exps[i].min(exps[j]);
                        content *= p.pow(low);
                        prim = ideal_mul(field, &prim, &ideal_pow(field, &q.hnf, exps[i] - low));
                        prim = ideal_mul(field, &prim, &ideal_pow(field, &primes[j].hnf, exps[j] - low));
                        i += 1;
                    }
                    _ => prim = ideal_mul(field, &prim, &ideal_pow(field, &q.hnf, exps[i])),
                }
            }
        }
        i += 1;
    }
    is_principal(field, &prim).map(|g| g.scale(content))
}

/// The least associate in `(x, y)` order; associates share a norm, so this is the
/// first one met in the ball enumeration.
fn least_associate(field: &QuadField, u: QuadInt) -> QuadInt {
    field.units().into_iter().map(|e| field.mul(e, u)).min().expect("units are nonempty")
}

pub fn folner_box(field: &QuadField, cg: &ClassGroup, m: u32) -> Result<FolnerSpec> {
    if m < 2 {
        return Err(Error::PreconditionError("M >= 2".into()));
    }
    let primes = prime_ideals_up_to(field, m as u64);
    let log_norm: f64 = primes.iter().map(|q| 2.0 * m as f64 * (q.norm() as f64).ln()).sum();
    if log_norm > 36.0 * std::f64::consts::LN_10 {
        return Err(Error::PreconditionError(format!("level M = {m} exceeds the integer range")));
    }
    let classes: Vec<Vec<u32>> = primes.iter().map(|q| cg.class_of(&q.hnf)).collect();
    let mut exponents = Vec::new();
    let mut elements = Vec::new();
    for exps in exponent_tuples(primes.len(), m) {
        let class = exps.iter().zip(&classes).fold(cg.zero(), |acc, (&a, b)| cg.add(&acc, &cg.scale(b, a)));
        if class != cg.zero() {
            continue;
        }
        let gen = product_generator(field, &primes, &exps).expect("trivial class is principal");
        elements.push(least_associate(field, gen));
        exponents.push(exps);
    }
    if elements.is_empty() {
        return Err(Error::EmptyFolner(m));
    }
    Ok(FolnerSpec { m, primes, exponents, elements })
}

/// Whether `(q)` is a member of `Φ_M`.
pub fn folner_contains(field: &QuadField, m: u32, q: QuadInt) -> bool {
    if q.is_zero() {
        return false;
    }
    let fac = factor_ideal(field, &principal(field, q));
    let primes = prime_ideals_up_to(field, m as u64);
    fac.factors.len() == primes.len() && fac.factors.iter().all(|(p, k)| p.norm() <= m as i128 && *k > m && *k <= 2 * m)
}

/// Exponents of `(x)` along `spec.primes`, or `None` if `x` has a prime factor outside them.
fn exponent_vector(field: &QuadField, spec: &FolnerSpec, x: QuadInt) -> Option<Vec<u32>> {
    let fac = factor_ideal(field, &principal(field, x));
    let mut v = vec![0; spec.primes.len()];
    for (p, k) in fac.factors {
        let idx = spec.primes.iter().position(|q| q.hnf == p.hnf)?;
        v[idx] = k;
    }
    Some(v)
}

/// `1 − |Φ_M ∩ x⁻¹Φ_M| / |Φ_M|`, computed on exponent tuples.
pub fn folner_defect(field: &QuadField, spec: &FolnerSpec, x: QuadInt) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let Some(shift) = exponent_vector(field, spec, x) else {
        return Ok(1.0);
    };
    let members: HashSet<&Vec<u32>> = spec.exponents.iter().collect();
    let kept = spec
        .exponents
        .iter()
        .filter(|e| {
            let moved: Vec<u32> = e.iter().zip(&shift).map(|(a, s)| a + s).collect();
            members.contains(&moved)
        })
        .count();
    Ok(1.0 - kept as f64 / spec.len() as f64)
}

pub fn folner_average(field: &QuadField, spec: &FolnerSpec, f: &ElementFn) -> Complex64 {
    let total: Complex64 = spec.elements.iter().map(|&u| f.eval(field, u)).sum();
    total / spec.len() as f64
}

/// Fraction of each window's generators satisfying `member`.
pub fn mult_density(specs: &[FolnerSpec], member: impl Fn(QuadInt) -> bool) -> Vec<(u32, f64)> {
    specs.iter().map(|s| (s.m, s.elements.iter().filter(|&&u| member(u)).count() as f64 / s.len() as f64)).collect()
}
