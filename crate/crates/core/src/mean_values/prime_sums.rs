use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal_arith::prime_ideals_up_to;
use crate::quad_ring::QuadField;

/// Prime-ideal sums up to `N`, each with its ratio to the expected order of growth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeSums {
    pub n: u64,
    pub epsilon: f64,
    /// `#{p^k : N(p^k) <= N}`
    pub prime_powers: u64,
    /// `prime_powers / (N / ln N)`
    pub prime_powers_ratio: f64,
    /// `sum N(p^k)^{-1}` over the same range
    pub reciprocal_prime_powers: f64,
    /// `reciprocal_prime_powers / ln ln N`
    pub reciprocal_ratio: f64,
    /// `sum_{N^eps <= N(p) <= N} 1/N(p)`
    pub window: f64,
    /// `sum_{N^eps < N(p) <= cutoff} N(p)^{-(1 + 1/ln N)}`
    pub tail: f64,
    pub tail_cutoff: u64,
    /// `(1/ln N) sum_{N(p) < N^eps} ln N(p) / N(p)`
    pub log_weighted: f64,
    /// `#{p^k q^l : N <= N, p != q}`
    pub two_prime: u64,
    /// `two_prime / (N ln ln N / ln N)`
    pub two_prime_ratio: f64,
    /// `sum_{N(p) <= N} 1/N(p)`
    pub reciprocal_primes: f64,
}

/// Evaluates the prime sums; the tail sum is truncated at `tail_cutoff` (default `10 N`).
pub fn prime_sums_report(field: &QuadField, n: u64, epsilon: f64, tail_cutoff: Option<u64>) -> Result<PrimeSums> {
    if n < 16 {
        return Err(Error::PreconditionError("N >= 16".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::PreconditionError("0 < epsilon <= 1".into()));
    }
    let cutoff = tail_cutoff.unwrap_or(10 * n).max(n);
    let primes = prime_ideals_up_to(field, cutoff);
    let nf = n as f64;
    let ln_n = nf.ln();
    let lo = nf.powf(epsilon);
    let sigma = 1.0 + 1.0 / ln_n;

    // prime powers of norm <= N, as (prime index, norm)
    let mut powers: Vec<(usize, i128)> = Vec::new();
    for (idx, q) in primes.iter().enumerate() {
        let mut m = q.norm();
        if m > n as i128 {
            break;
        }
        while m <= n as i128 {
            powers.push((idx, m));
            m *= q.norm();
        }
    }
    powers.sort_by_key(|&(idx, m)| (m, idx));

    let reciprocal_prime_powers: f64 = powers.iter().rev().map(|&(_, m)| 1.0 / m as f64).sum();
    let mut window = 0.0;
    let mut tail = 0.0;
    let mut log_weighted = 0.0;
    let mut reciprocal_primes = 0.0;
    for q in primes.iter().rev() {
        let m = q.norm() as f64;
        if m > lo {
            tail += m.powf(-sigma);
        }
        if q.norm() > n as i128 {
            continue;
        }
        reciprocal_primes += 1.0 / m;
        if m >= lo {
            window += 1.0 / m;
        } else {
            log_weighted += m.ln() / m;
        }
    }

    let mut two_prime = 0u64;
    for (i, &(pi, mi)) in powers.iter().enumerate() {
        for &(pj, mj) in &powers[i + 1..] {
            if mi * mj > n as i128 {
                break;
            }
            if pi != pj {
                two_prime += 1;
            }
        }
    }

    let ln_ln = ln_n.ln();
    Ok(PrimeSums {
        n,
        epsilon,
        prime_powers: powers.len() as u64,
        prime_powers_ratio: powers.len() as f64 / (nf / ln_n),
        reciprocal_prime_powers,
        reciprocal_ratio: reciprocal_prime_powers / ln_ln,
        window,
        tail,
        tail_cutoff: cutoff,
        log_weighted: log_weighted / ln_n,
        two_prime,
        two_prime_ratio: two_prime as f64 / (nf * ln_ln / ln_n),
        reciprocal_primes,
    })
}
