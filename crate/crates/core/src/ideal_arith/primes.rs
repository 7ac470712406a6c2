//! Prime ideals, factorization and enumeration of ideals by norm.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ideal_from_generators, ideal_mul, ideal_pow, IdealHnf};
use crate::arith::{factor, is_prime, kronecker_prime, primes_up_to, sqrt_mod};
use crate::error::{Error, Result};
use crate::quad_ring::{QuadField, QuadInt, TauCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub split: SplitType,
    pub hnf: IdealHnf,
    /// 0 or 1; distinguishes the two primes above a split `p` (ordered by HNF `b`).
    pub tag: u8,
    /// `r` with `tau ≡ r` modulo the prime, for primes of degree one.
    root: Option<i128>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> i128 {
        match self.split {
            SplitType::Inert => (self.p as i128) * (self.p as i128),
            _ => self.p as i128,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self.split {
            SplitType::Inert => 2,
            _ => 1,
        }
    }

    /// Sort key `(p, tag)`.
    pub fn key(&self) -> (u64, u8) {
        (self.p, self.tag)
    }

    /// Whether `u` lies in this prime.
    pub fn contains(&self, u: QuadInt) -> bool {
        self.hnf.contains(u)
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.norm(), self.key()).cmp(&(other.norm(), other.key()))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.split {
            SplitType::Split => write!(f, "P{}_{}", self.p, self.tag),
            SplitType::Inert => write!(f, "P{}", self.p),
            SplitType::Ramified => write!(f, "P{}r", self.p),
        }
    }
}

/// Roots of the minimal polynomial of tau modulo `p`, ascending.
fn tau_roots_mod(f: &QuadField, p: u64) -> Vec<i128> {
    let pi = p as i128;
    let d = f.d() as i128;
    if p == 2 {
        let mut roots = Vec::new();
        for r in 0..2i128 {
            let val = match f.tau_case() {
                TauCase::Sqrt => r * r + d,
                TauCase::Half => r * r - r + (d + 1) / 4,
            };
            if val % 2 == 0 {
                roots.push(r);
            }
        }
        return roots;
    }
    let Some(s) = sqrt_mod(-d, p) else {
        return Vec::new();
    };
    let s = s as i128;
    let mut roots: Vec<i128> = match f.tau_case() {
        TauCase::Sqrt => vec![s, (-s).rem_euclid(pi)],
        TauCase::Half => {
            // tau = (1 + sqrt(-d))/2
            let inv2 = (pi + 1) / 2;
            vec![((1 + s) * inv2).rem_euclid(pi), ((1 - s) * inv2).rem_euclid(pi)]
        }
    };
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// All prime ideals above the rational prime `p`.
pub fn prime_ideals_above(f: &QuadField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pi = p as i128;
    let kind = kronecker_prime(f.disc() as i128, p);
    let make = |r: i128, split: SplitType| {
        let hnf = ideal_from_generators(f, &[QuadInt::int(pi), QuadInt::new(-r, 1)]).expect("nonzero generators");
        (hnf, split, Some(r))
    };
    let mut found: Vec<(IdealHnf, SplitType, Option<i128>)> = match kind {
        -1 => vec![(IdealHnf { a: pi, b: 0, c: pi }, SplitType::Inert, None)],
        0 => {
            let roots = tau_roots_mod(f, p);
            debug_assert_eq!(roots.len(), 1);
            vec![make(roots[0], SplitType::Ramified)]
        }
        _ => {
            let roots = tau_roots_mod(f, p);
            debug_assert_eq!(roots.len(), 2);
            roots.into_iter().map(|r| make(r, SplitType::Split)).collect()
        }
    };
    found.sort_by_key(|(h, _, _)| *h);
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(tag, (hnf, split, root))| PrimeIdeal { p, split, hnf, tag: tag as u8, root })
        .collect())
}

/// Prime ideals of norm at most `x`, sorted by `(norm, p, tag)`.
pub fn prime_ideals_up_to(f: &QuadField, x: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = primes_up_to(x)
        .into_iter()
        .flat_map(|p| prime_ideals_above(f, p).expect("sieved prime"))
        .filter(|q| q.norm() <= x as i128)
        .collect();
    out.sort();
    out
}

/// Prime-ideal factorization, ordered by `(p, tag)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFactorization {
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factors back together.
    pub fn product(&self, f: &QuadField) -> IdealHnf {
        self.factors.iter().fold(IdealHnf::ONE, |acc, (q, k)| ideal_mul(f, &acc, &ideal_pow(f, &q.hnf, *k)))
    }

    pub fn norm(&self) -> i128 {
        self.factors.iter().map(|(q, k)| q.norm().pow(*k)).product()
    }
}

impl fmt::Display for IdealFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(q, k)| if *k == 1 { q.to_string() } else { format!("{q}^{k}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn valuation(mut n: i128, p: i128) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Factors `I` using its content and the residue of `b + tau` in its primitive part.
pub fn factor_ideal(f: &QuadField, i: &IdealHnf) -> IdealFactorization {
    let content = i.content();
    let prim = i.primitive_part();
    let mut primes: Vec<u64> =
        factor(content as u128).into_iter().chain(factor(prim.norm() as u128)).map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut factors = Vec::new();
    for p in primes {
        let pi = p as i128;
        let vc = valuation(content, pi);
        let vn = valuation(prim.norm(), pi);
        let above = prime_ideals_above(f, p).expect("factor of an integer");
        match above[0].split {
            SplitType::Inert => {
                debug_assert_eq!(vn, 0);
                factors.push((above[0], vc));
            }
            SplitType::Ramified => {
                debug_assert!(vn <= 1);
                factors.push((above[0], 2 * vc + vn));
            }
            SplitType::Split => {
                for q in &above {
                    let r = q.root.expect("split primes have degree one");
                    let divides_prim = vn > 0 && (prim.b() + r).rem_euclid(pi) == 0;
                    let e = vc + if divides_prim { vn } else { 0 };
                    if e > 0 {
                        factors.push((*q, e));
                    }
                }
            }
        }
    }
    factors.retain(|(_, k)| *k > 0);
    factors.sort_by_key(|(q, _)| q.key());
    IdealFactorization { factors }
}

/// Depth-first walk over all ideals of norm at most `x` built from `primes`
/// (which must be sorted by norm). Each ideal is visited once with its norm,
/// its exponent pattern as `(prime index, exponent)` pairs and the state
/// obtained by folding `step` over that pattern starting from `init`.
pub fn walk_ideals<T: Clone>(
    primes: &[PrimeIdeal],
    x: u64,
    init: T,
    step: &impl Fn(&T, usize, u32) -> T,
    visit: &mut impl FnMut(i128, &T, &[(usize, u32)]),
) {
    #[allow(clippy::too_many_arguments)]
    fn rec<T: Clone>(
        primes: &[PrimeIdeal],
        x: i128,
        start: usize,
        norm: i128,
        state: &T,
        pattern: &mut Vec<(usize, u32)>,
        step: &impl Fn(&T, usize, u32) -> T,
        visit: &mut impl FnMut(i128, &T, &[(usize, u32)]),
    ) {
        visit(norm, state, pattern);
        for idx in start..primes.len() {
            let q = primes[idx].norm();
            if norm * q > x {
                break;
            }
            let mut n = norm;
            let mut k = 0;
            while n * q <= x {
                n *= q;
                k += 1;
                let next = step(state, idx, k);
                pattern.push((idx, k));
                rec(primes, x, idx + 1, n, &next, pattern, step, visit);
                pattern.pop();
            }
        }
    }
    let mut pattern = Vec::new();
    rec(primes, x as i128, 0, 1, &init, &mut pattern, step, visit);
}

/// All ideals of norm at most `x`, sorted by `(norm, a, b, c)`.
pub fn enumerate_ideals(f: &QuadField, x: u64) -> Vec<IdealHnf> {
    let primes = prime_ideals_up_to(f, x);
    let mut out = Vec::new();
    fn rec(f: &QuadField, primes: &[PrimeIdeal], x: i128, start: usize, cur: IdealHnf, out: &mut Vec<IdealHnf>) {
        out.push(cur);
        for idx in start..primes.len() {
            let q = primes[idx].norm();
            if cur.norm() * q > x {
                break;
            }
            let mut next = cur;
            while next.norm() * q <= x {
                next = ideal_mul(f, &next, &primes[idx].hnf);
                rec(f, primes, x, idx + 1, next, out);
            }
        }
    }
    rec(f, &primes, x as i128, 0, IdealHnf::ONE, &mut out);
    out.sort_by_key(|i| (i.norm(), *i));
    out
}
