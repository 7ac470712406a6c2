use serde::{Deserialize, Serialize};

use super::{coprime, principal, IdealHnf};
use crate::error::{Error, Result};
use crate::quad_ring::{QuadField, QuadInt};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressionCount {
    pub count: u64,
    /// `gamma * N / N(I)`.
    pub predicted: f64,
    /// `sqrt(N / N(I))`; the error is expected to be a constant multiple of this.
    pub bound: f64,
    /// Measured element density `|B_N| / N`.
    pub gamma: f64,
}

/// `|B_N| / N` where `B_N` is the set of elements (zero included) of norm at most `N`.
pub fn element_density(f: &QuadField, n: u64) -> f64 {
    let mut count = 1u64;
    f.for_each_in_shell(n as i128, |_, _| count += 1);
    count as f64 / n as f64
}

/// Counts `u` with `N(u) <= N` and `Q*u + a` in `I`.
pub fn count_progression_in_ideal(
    f: &QuadField,
    q: QuadInt,
    a: QuadInt,
    i: &IdealHnf,
    n: u64,
) -> Result<ProgressionCount> {
    if q.is_zero() {
        return Err(Error::PreconditionError("Q must be nonzero".into()));
    }
    if !coprime(&principal(f, q), i) {
        return Err(Error::NotCoprime(format!("(Q) = ({q}) and I = {i}")));
    }
    if f.norm(a) > f.norm(q) {
        return Err(Error::PreconditionError("N(a) <= N(Q)".into()));
    }
    let mut count = u64::from(i.contains(a));
    let mut ball = 1u64;
    f.for_each_in_shell(n as i128, |u, _| {
        ball += 1;
        if i.contains(f.mul(q, u) + a) {
            count += 1;
        }
    });
    let gamma = ball as f64 / n as f64;
    let ratio = n as f64 / i.norm() as f64;
    Ok(ProgressionCount { count, predicted: gamma * ratio, bound: ratio.sqrt(), gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_in_prime_of_gaussian_integers() {
        let f = QuadField::new(1).unwrap();
        let i = principal(&f, QuadInt::new(1, 1));
        let r = count_progression_in_ideal(&f, QuadInt::int(3), QuadInt::ONE, &i, 10_000).unwrap();
        let c = (r.count as f64 - r.predicted).abs() / r.bound;
        assert!(c <= 10.0, "fitted constant {c}");
    }

    #[test]
    fn huge_ideal_catches_at_most_one_point() {
        let f = QuadField::new(2).unwrap();
        let i = principal(&f, QuadInt::new(1000, 7));
        let r = count_progression_in_ideal(&f, QuadInt::ONE, QuadInt::ONE, &i, 100).unwrap();
        assert!(r.count <= 1);
    }

    #[test]
    fn rejects_non_coprime_modulus() {
        let f = QuadField::new(1).unwrap();
        let i = principal(&f, QuadInt::new(1, 1));
        let r = count_progression_in_ideal(&f, QuadInt::int(2), QuadInt::ONE, &i, 100);
        assert!(matches!(r, Err(Error::NotCoprime(_))));
    }

    #[test]
    fn density_approaches_ellipse_area() {
        // area of {N(u) <= 1} is 2*pi/sqrt(|disc|)
        for d in [1, 3, 5] {
            let f = QuadField::new(d).unwrap();
            let analytic = 2.0 * std::f64::consts::PI / (f.disc().abs() as f64).sqrt();
            assert!((element_density(&f, 100_000) / analytic - 1.0).abs() < 0.01);
        }
    }
}
