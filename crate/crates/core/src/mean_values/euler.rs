use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ideal_values;
use crate::error::{Error, Result};
use crate::ideal_arith::{prime_ideals_up_to, walk_ideals, ClassGroup, PrimeIdeal};
use crate::mult_funcs::{pretentious_distance, IdealFn, Mode};
use crate::quad_ring::QuadField;

const SERIES_EPS: f64 = 1e-15;

/// `n^{-s}`; exact for real integer `s` where the power is representable.
fn norm_pow(n: i128, s: Complex64) -> Complex64 {
    let n = n as f64;
    Complex64::from_polar(n.powf(-s.re), -s.im * n.ln())
}

fn check_region(s: Complex64) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::RegionError(format!("{s}")));
    }
    Ok(())
}

/// `sum_{N(I) <= x} g(I)`
pub fn ideal_sum(field: &QuadField, g: &IdealFn, x: u64) -> Complex64 {
    ideal_values(field, g, x).iter().map(|e| e.1).sum()
}

/// `sum_{N(I) <= x} g(I) N(I)^{-s}`
pub fn dirichlet_series_partial(field: &QuadField, g: &IdealFn, s: Complex64, x: u64) -> Result<Complex64> {
    check_region(s)?;
    Ok(ideal_values(field, g, x).iter().map(|&(m, v)| v * norm_pow(m, s)).sum())
}

/// `1 + sum_{k >= 1} g(p^k) N(p)^{-ks}`, in closed form when `g` is geometric at `p`.
fn local_factor(g: &IdealFn, q: &PrimeIdeal, s: Complex64) -> Complex64 {
    let z = norm_pow(q.norm(), s);
    let one = Complex64::new(1.0, 0.0);
    if g.mode() == Mode::CompletelyMultiplicative {
        return one / (one - g.prime_power(q, 1) * z);
    }
    let mut terms = Vec::new();
    let mut zk = z;
    let mut k = 1;
    while zk.norm() >= SERIES_EPS {
        terms.push(g.prime_power(q, k));
        zk *= z;
        k += 1;
    }
    if terms.iter().all(|&t| t == terms[0]) {
        return one + terms[0] * z / (one - z);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zk = z;
    for t in &terms {
        sum += t * zk;
        zk *= z;
    }
    one + sum
}

/// `prod_{N(p) <= x} (1 + h_s(p))`
pub fn euler_product_partial(field: &QuadField, g: &IdealFn, s: Complex64, x: u64) -> Result<Complex64> {
    check_region(s)?;
    Ok(prime_ideals_up_to(field, x).iter().map(|q| local_factor(g, q, s)).product())
}

/// `(1 - 1/N)(1 + sum_k v^k N^{-k})` in exact arithmetic for a completely
/// multiplicative function with rational value `v` at a prime of norm `N`.
pub fn euler_factor_exact(norm: i128, v: Ratio<i128>) -> Ratio<i128> {
    let n = Ratio::from_integer(norm);
    let one = Ratio::from_integer(1);
    let ratio = v / n;
    assert!(ratio.numer().abs() < *ratio.denom(), "series must converge");
    (one - one / n) * (one / (one - ratio))
}

/// `#{I : N(I) <= x} / x`
pub fn residue_estimate(field: &QuadField, x: u64) -> f64 {
    let primes = prime_ideals_up_to(field, x);
    let mut count = 0u64;
    walk_ideals(&primes, x, (), &|_, _, _| (), &mut |_, _, _| count += 1);
    count as f64 / x as f64
}

/// `#{I : N(I) <= x, [I] = c} / x` for every class `c`, in mixed-radix order.
pub fn class_densities(cg: &ClassGroup, x: u64) -> Vec<f64> {
    let primes = prime_ideals_up_to(cg.field(), x);
    let classes: Vec<Vec<u32>> = primes.iter().map(|q| cg.class_of(&q.hnf)).collect();
    let mut counts = vec![0u64; cg.class_number()];
    walk_ideals(
        &primes,
        x,
        cg.zero(),
        &|s: &Vec<u32>, idx, k| cg.add(s, &cg.scale(&classes[idx], k)),
        &mut |_, s, _| counts[cg.index_of(s)] += 1,
    );
    counts.into_iter().map(|c| c as f64 / x as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalaszReport {
    pub function: String,
    pub tau: f64,
    pub x: u64,
    pub r1: f64,
    /// `prod_{N(p) <= x} (1 - 1/N(p))(1 + h_{1+i tau}(p))`
    pub euler_product: Complex64,
    /// `R1 x^{i tau} / (1 + i tau) * euler_product`
    pub prediction: Complex64,
    /// `sum_{N(I) <= x} g(I) / x`
    pub empirical: Complex64,
    pub relative_gap: f64,
    /// `D(g, N^{i tau}; 2, x)`
    pub distance: f64,
}

/// Main term of the mean value of `g` divided by `x`, with `R1` supplied
/// (typically [`residue_estimate`] at a larger reference point).
pub fn halasz_prediction(field: &QuadField, g: &IdealFn, tau: f64, x: u64, r1: f64) -> HalaszReport {
    let s = Complex64::new(1.0, tau);
    let euler_product: Complex64 =
        prime_ideals_up_to(field, x).iter().map(|q| (1.0 - 1.0 / q.norm() as f64) * local_factor(g, q, s)).product();
    let phase = Complex64::from_polar(1.0, tau * (x as f64).ln());
    let prediction = r1 * phase / s * euler_product;
    let empirical = ideal_sum(field, g, x) / x as f64;
    let relative_gap =
        if prediction.norm() > 0.0 { (prediction - empirical).norm() / prediction.norm() } else { empirical.norm() };
    HalaszReport {
        function: g.id(),
        tau,
        x,
        r1,
        euler_product,
        prediction,
        empirical,
        relative_gap,
        distance: pretentious_distance(field, g, &IdealFn::NormPower(tau), 2, x),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C27Verdict {
    NonzeroLimit,
    NoLimit,
    ZeroLimit,
    AperiodicZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C27Options {
    /// Distances are tail increments `D(g, N^{i tau}; sqrt(X), X)`.
    pub cutoff: u64,
    pub tau_grid: Vec<f64>,
    /// Tail increments below this count as finite distance.
    pub threshold: f64,
}

/// `k / 20` for `-80 <= k <= 80`.
pub fn default_tau_grid() -> Vec<f64> {
    (-80..=80).map(|k| k as f64 / 20.0).collect()
}

impl Default for C27Options {
    fn default() -> Self {
        C27Options { cutoff: 1_000_000, tau_grid: default_tau_grid(), threshold: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C27Outcome {
    pub verdict: C27Verdict,
    pub tau_star: f64,
    pub tail_distance: f64,
    pub dead_factor: bool,
    pub cutoff: u64,
}

/// `D(g, N^{i tau}; lo, hi)` for each `tau`, from precomputed prime data.
pub(crate) fn distance_scan(primes: &[(f64, f64, Complex64)], taus: &[f64]) -> Vec<f64> {
    taus.par_iter()
        .map(|&tau| {
            primes
                .iter()
                .rev()
                .map(|&(norm, ln, v)| (1.0 - (v * Complex64::from_polar(1.0, -tau * ln)).re) / norm)
                .sum()
        })
        .collect()
}

/// Four-way classification of the mean value of `g` by its distance to `N^{i tau}`.
pub fn c27_predict(field: &QuadField, g: &IdealFn, opts: &C27Options) -> C27Outcome {
    let lo = (opts.cutoff as f64).sqrt();
    let primes: Vec<(f64, f64, Complex64)> = prime_ideals_up_to(field, opts.cutoff)
        .iter()
        .filter(|q| q.norm() as f64 > lo)
        .map(|q| {
            let n = q.norm() as f64;
            (n, n.ln(), g.prime_power(q, 1))
        })
        .collect();
    let taus = if opts.tau_grid.is_empty() { vec![0.0] } else { opts.tau_grid.clone() };
    let dists = distance_scan(&primes, &taus);
    let mut best = 0;
    for (k, d) in dists.iter().enumerate() {
        // prefer tau = 0, then the smallest |tau|, among equal distances
        let better =
            *d < dists[best] - 1e-12 || ((*d - dists[best]).abs() <= 1e-12 && taus[k].abs() < taus[best].abs());
        if better {
            best = k;
        }
    }
    let (tau_star, tail) = (taus[best], dists[best]);
    let dead_factor = prime_ideals_up_to(field, 2).iter().any(|q| {
        (1..=20).all(|k| {
            let target = -Complex64::from_polar(1.0, k as f64 * tau_star * 2f64.ln());
            (g.prime_power(q, k) - target).norm() < 1e-9
        })
    });
    let verdict = if tail >= opts.threshold {
        C27Verdict::AperiodicZero
    } else if dead_factor {
        C27Verdict::ZeroLimit
    } else if tau_star == 0.0 {
        C27Verdict::NonzeroLimit
    } else {
        C27Verdict::NoLimit
    };
    C27Outcome { verdict, tau_star, tail_distance: tail, dead_factor, cutoff: opts.cutoff }
}
