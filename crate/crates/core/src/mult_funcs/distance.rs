use num_complex::Complex64;

use super::IdealFn;
use crate::ideal_arith::{prime_ideals_up_to, PrimeIdeal};
use crate::quad_ring::QuadField;

/// Values `g(p)` on a list of primes.
pub fn prime_values(g: &IdealFn, primes: &[PrimeIdeal]) -> Vec<Complex64> {
    primes.iter().map(|q| g.prime_power(q, 1)).collect()
}

/// `sum_{M1 < N(p) <= M2} (1 - Re f(p) conj(g(p))) / N(p)`, summed from the largest norm down.
pub fn pretentious_distance(field: &QuadField, f: &IdealFn, g: &IdealFn, m1: u64, m2: u64) -> f64 {
    prime_ideals_up_to(field, m2)
        .iter()
        .rev()
        .take_while(|q| q.norm() > m1 as i128)
        .map(|q| {
            let v = f.prime_power(q, 1) * g.prime_power(q, 1).conj();
            (1.0 - v.re) / q.norm() as f64
        })
        .sum()
}
