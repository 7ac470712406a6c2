use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::euler::{default_tau_grid, distance_scan};
use super::{aperiodicity_scan, CHUNK};
use crate::error::{Error, Result};
use crate::ideal_arith::{coprime, enumerate_ideals, prime_ideals_up_to, principal, ClassGroup, IdealHnf};
use crate::mult_funcs::{
    extensions_of, pretentious_distance, unit_group_mod, AdditiveFn, DirichletChar, ElementFn, IdealFn,
};
use crate::quad_ring::{QuadField, QuadInt};
use crate::regularity::folner_contains;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TkReport {
    /// `E_{N(u) <= N} |h((Qu + a)) - A_{Q,N}|^2`, zero included in the ball
    pub lhs: f64,
    pub a_qn: Complex64,
    pub b_nprime: f64,
    pub c_n: f64,
    pub n_prime: u64,
    /// `lhs / (2 B_{N'} + C_N)`
    pub ratio: f64,
    pub count: u64,
}

fn check_progression(field: &QuadField, q: QuadInt, a: QuadInt) -> Result<()> {
    if q.is_zero() {
        return Err(Error::PreconditionError("Q must be nonzero".into()));
    }
    let q_ideal = principal(field, q);
    if a.is_zero() || !coprime(&principal(field, a), &q_ideal) {
        return Err(Error::PreconditionError("(a) coprime to (Q)".into()));
    }
    if field.norm(a) > field.norm(q) {
        return Err(Error::PreconditionError("N(a) <= N(Q)".into()));
    }
    Ok(())
}

/// Variance of `h` along `Qu + a` against the prime sums `A_{Q,N}`, `B_{N'}`, `C_N`.
pub fn turan_kubilius_check(
    field: &QuadField,
    h: &AdditiveFn,
    q: QuadInt,
    a: QuadInt,
    m: u64,
    n: u64,
) -> Result<TkReport> {
    check_progression(field, q, a)?;
    if prime_ideals_up_to(field, m).iter().any(|p| !p.contains(q)) {
        return Err(Error::PreconditionError(format!("Q lies in every prime ideal of norm <= {m}")));
    }
    let n_prime = 2 * field.norm(q) as u64 * (n + 1);
    let primes = prime_ideals_up_to(field, n_prime);

    let mut a_qn = Complex64::new(0.0, 0.0);
    let mut b = 0.0;
    let mut c = 0.0;
    for p in primes.iter().rev() {
        let np = p.norm();
        let mut pk = np;
        let mut k = 1;
        while pk <= n_prime as i128 {
            let v = h.prime_power(p, k);
            if pk <= n as i128 && !p.contains(q) {
                a_qn += v / pk as f64 * (1.0 - 1.0 / np as f64);
            }
            if np > m as i128 {
                b += v.norm_sqr() / pk as f64;
                c += v.norm_sqr() / (pk as f64).sqrt();
            }
            pk *= np;
            k += 1;
        }
    }
    c /= (n as f64).sqrt();

    let mut ball = vec![QuadInt::ZERO];
    ball.extend(field.enumerate_ball(n));
    // Qu + a vanishes only when Q is a unit; that single point is skipped
    let partials: Vec<(f64, u64)> = ball
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk.iter().map(|&u| field.mul(q, u) + a).filter(|v| !v.is_zero()).fold((0.0, 0), |(s, k), v| {
                (s + (h.eval(field, &principal(field, v)) - a_qn).norm_sqr(), k + 1)
            })
        })
        .collect();
    let (total, count) = partials.iter().fold((0.0, 0), |(s, k), &(ps, pk)| (s + ps, k + pk));
    let lhs = total / count as f64;
    let denom = 2.0 * b + c;
    let ratio = if denom > 0.0 { lhs / denom } else { 0.0 };
    Ok(TkReport { lhs, a_qn, b_nprime: b, c_n: c, n_prime, ratio, count })
}

/// How the correction factor `exp(F)` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseModel {
    /// `F = sum (1 - Re f'(p)) / N(p)`
    #[default]
    Displayed,
    /// `F = sum (f'(p) - 1) / N(p)`
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    /// `E_{0 < N(u) <= N} |f(Qu + a) - chi(a) N(Qu)^{i tau} exp(F)|`
    pub empirical_sup: f64,
    /// `D(f', 1; M, cutoff) + M^{-1/2}`
    pub rhs_bound: f64,
    pub distance: f64,
    pub distance_cutoff: u64,
    pub f_sum: Complex64,
    pub count: u64,
}

/// Parameters of [`concentration_check`].
#[derive(Clone, Debug)]
pub struct ConcentrationInput<'a> {
    pub f: &'a ElementFn,
    pub chi: &'a DirichletChar,
    pub tau: f64,
    /// Extension of `f * conj(chi) * N^{-i tau}`.
    pub f_prime: &'a IdealFn,
    pub m: u32,
    pub n: u64,
    pub q: QuadInt,
    pub a: QuadInt,
    pub phase: PhaseModel,
    pub distance_cutoff: u64,
}

/// Compares `f(Qu + a)` with its predicted value `chi(a) N(Qu)^{i tau} exp(F)`.
pub fn concentration_check(field: &QuadField, input: &ConcentrationInput<'_>) -> Result<ConcentrationReport> {
    if !folner_contains(field, input.m, input.q) {
        return Err(Error::NotFolnerElement(input.q.to_string(), input.m));
    }
    check_progression(field, input.q, input.a)?;
    let m = input.m as i128;
    let mut f_sum = Complex64::new(0.0, 0.0);
    for p in prime_ideals_up_to(field, input.n).iter().rev() {
        if p.norm() <= m || p.contains(input.q) {
            continue;
        }
        let v = input.f_prime.prime_power(p, 1);
        f_sum += match input.phase {
            PhaseModel::Displayed => Complex64::new(1.0 - v.re, 0.0),
            PhaseModel::Complex => v - 1.0,
        } / p.norm() as f64;
    }
    let base = input.chi.eval(input.a) * f_sum.exp();
    let ball = field.enumerate_ball(input.n);
    let partials: Vec<f64> = ball
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&u| {
                    let qu = field.mul(input.q, u);
                    let twist = Complex64::from_polar(1.0, input.tau * (field.norm(qu) as f64).ln());
                    (input.f.eval(field, qu + input.a) - base * twist).norm()
                })
                .sum()
        })
        .collect();
    let empirical_sup = partials.iter().sum::<f64>() / ball.len() as f64;
    let distance = pretentious_distance(field, input.f_prime, &IdealFn::One, input.m as u64, input.distance_cutoff);
    Ok(ConcentrationReport {
        empirical_sup,
        rhs_bound: distance + (input.m as f64).powf(-0.5),
        distance,
        distance_cutoff: input.distance_cutoff,
        f_sum,
        count: ball.len() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Characters of every modulus with norm up to this bound are tried.
    pub char_bound: u64,
    pub tau_grid: Vec<f64>,
    /// Distances are `D(., 1; 2, cutoff)`.
    pub cutoff: u64,
    pub threshold: f64,
    /// Coefficient bound and norm bound of the attached aperiodicity scan.
    pub scan: Option<(i128, u64)>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { char_bound: 10, tau_grid: default_tau_grid(), cutoff: 10_000, threshold: 0.25, scan: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    EmpiricallyAperiodic {
        reason: String,
        min_distance: Option<f64>,
        scan_max_abs: Option<f64>,
    },
    PretentiousCandidate {
        /// `None` for the trivial character.
        modulus: Option<IdealHnf>,
        label: Vec<u32>,
        tau: f64,
        distance: f64,
        /// Root choice of the extension attaining the distance.
        extension: Vec<u32>,
    },
}

struct Best {
    distance: f64,
    modulus: Option<IdealHnf>,
    label: Vec<u32>,
    tau: f64,
    extension: Vec<u32>,
}

/// Searches for a modified character `chi` and `tau` with `f * conj(chi) * N^{-i tau}` close to 1.
pub fn classify(field: &QuadField, f: &ElementFn, opts: &ClassifyOptions) -> Verdict {
    let scan_value = || opts.scan.map(|(a, n)| aperiodicity_scan(field, f, a, n).max_abs);
    for e in field.units() {
        if (f.eval(field, e) - 1.0).norm() > 1e-12 {
            return Verdict::EmpiricallyAperiodic {
                reason: format!("f({e}) != 1"),
                min_distance: None,
                scan_max_abs: scan_value(),
            };
        }
    }
    let cg = Arc::new(ClassGroup::compute(field, None));
    let primes: Vec<_> = prime_ideals_up_to(field, opts.cutoff).into_iter().filter(|q| q.norm() > 2).collect();
    let taus = if opts.tau_grid.is_empty() { vec![0.0] } else { opts.tau_grid.clone() };

    let mut candidates: Vec<Option<DirichletChar>> = vec![None];
    for modulus in enumerate_ideals(field, opts.char_bound).iter().skip(1) {
        if let Ok(group) = unit_group_mod(field, modulus) {
            for chi in group.characters() {
                if !chi.is_trivial() {
                    candidates.push(Some(chi.modify().expect("fresh character")));
                }
            }
        }
    }

    let mut best: Option<Best> = None;
    for chi in &candidates {
        let h = match chi {
            None => f.clone(),
            Some(c) => f.clone().times(ElementFn::Character(c.clone()).conj()),
        };
        let Ok(exts) = extensions_of(&cg, &h) else { continue };
        for ext in exts {
            let data: Vec<(f64, f64, Complex64)> = primes
                .iter()
                .map(|q| {
                    let n = q.norm() as f64;
                    (n, n.ln(), ext.prime_power(q, 1))
                })
                .collect();
            let dists = distance_scan(&data, &taus);
            for (k, &d) in dists.iter().enumerate() {
                if best.as_ref().is_none_or(|b| d < b.distance) {
                    let IdealFn::Extension(e) = &ext else { unreachable!() };
                    best = Some(Best {
                        distance: d,
                        modulus: chi.as_ref().map(|c| *c.modulus()),
                        label: chi.as_ref().map_or_else(Vec::new, |c| c.label().to_vec()),
                        tau: taus[k],
                        extension: e.choice().to_vec(),
                    });
                }
            }
        }
    }
    match best {
        Some(b) if b.distance < opts.threshold => Verdict::PretentiousCandidate {
            modulus: b.modulus,
            label: b.label,
            tau: b.tau,
            distance: b.distance,
            extension: b.extension,
        },
        b => Verdict::EmpiricallyAperiodic {
            reason: "no character and twist within the threshold".into(),
            min_distance: b.map(|b| b.distance),
            scan_max_abs: scan_value(),
        },
    }
}
