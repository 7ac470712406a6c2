//! Exact arithmetic in the ring of integers of Q(sqrt(-d)).
//!
//! Elements are written `x + y*tau` where `tau = sqrt(-d)` when d = 1, 2 mod 4
//! and `tau = (1 + sqrt(-d))/2` when d = 3 mod 4. Coordinates are `i128`; the
//! workspace builds with overflow checks enabled, so arithmetic that leaves
//! the representable range panics instead of wrapping.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_squarefree, isqrt};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauCase {
    /// `tau^2 = -d`
    Sqrt,
    /// `tau^2 = tau - (d+1)/4`
    Half,
}

/// The ring Z[tau_d].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    d: i64,
    tau_case: TauCase,
    disc: i64,
    w: u32,
}

/// An element `x + y*tau` of Z[tau_d]; its meaning depends on the ambient field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadInt {
    pub x: i128,
    pub y: i128,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { x: 0, y: 0 };
    pub const ONE: QuadInt = QuadInt { x: 1, y: 0 };
    pub const TAU: QuadInt = QuadInt { x: 0, y: 1 };

    pub const fn new(x: i128, y: i128) -> Self {
        QuadInt { x, y }
    }

    pub const fn int(n: i128) -> Self {
        QuadInt { x: n, y: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, n: i128) -> Self {
        QuadInt::new(self.x * n, self.y * n)
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.x, -self.y)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 || !is_squarefree(d as u64) {
            return Err(Error::InvalidField(d));
        }
        let (tau_case, disc) = if d % 4 == 3 { (TauCase::Half, -d) } else { (TauCase::Sqrt, -4 * d) };
        let w = match d {
            1 => 4,
            3 => 6,
            _ => 2,
        };
        Ok(QuadField { d, tau_case, disc, w })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn tau_case(&self) -> TauCase {
        self.tau_case
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Number of units.
    pub fn w(&self) -> u32 {
        self.w
    }

    /// `(d+1)/4` in the half case; the constant term of the minimal polynomial of tau.
    fn k(&self) -> i128 {
        (self.d as i128 + 1) / 4
    }

    pub fn norm(&self, u: QuadInt) -> i128 {
        match self.tau_case {
            TauCase::Sqrt => u.x * u.x + self.d as i128 * u.y * u.y,
            TauCase::Half => u.x * u.x + u.x * u.y + self.k() * u.y * u.y,
        }
    }

    pub fn trace(&self, u: QuadInt) -> i128 {
        match self.tau_case {
            TauCase::Sqrt => 2 * u.x,
            TauCase::Half => 2 * u.x + u.y,
        }
    }

    pub fn mul(&self, u: QuadInt, v: QuadInt) -> QuadInt {
        let yy = u.y * v.y;
        match self.tau_case {
            TauCase::Sqrt => QuadInt::new(u.x * v.x - self.d as i128 * yy, u.x * v.y + u.y * v.x),
            TauCase::Half => QuadInt::new(u.x * v.x - self.k() * yy, u.x * v.y + u.y * v.x + yy),
        }
    }

    pub fn pow(&self, u: QuadInt, mut e: u32) -> QuadInt {
        let mut acc = QuadInt::ONE;
        let mut base = u;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn conj(&self, u: QuadInt) -> QuadInt {
        match self.tau_case {
            TauCase::Sqrt => QuadInt::new(u.x, -u.y),
            TauCase::Half => QuadInt::new(u.x + u.y, -u.y),
        }
    }

    /// The `w` with `v*w = u`.
    pub fn divide_exact(&self, u: QuadInt, v: QuadInt) -> Result<QuadInt> {
        if v.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(v);
        let num = self.mul(u, self.conj(v));
        if num.x % n != 0 || num.y % n != 0 {
            return Err(Error::NotDivisible(u.to_string(), v.to_string()));
        }
        Ok(QuadInt::new(num.x / n, num.y / n))
    }

    pub fn divides(&self, v: QuadInt, u: QuadInt) -> bool {
        !v.is_zero() && self.divide_exact(u, v).is_ok()
    }

    pub fn is_unit(&self, u: QuadInt) -> bool {
        self.norm(u) == 1
    }

    /// All elements of norm 1, ordered by `(x, y)`.
    pub fn units(&self) -> Vec<QuadInt> {
        self.elements_of_norm(1)
    }

    /// All elements of norm exactly `n`, ordered by `(x, y)`.
    pub fn elements_of_norm(&self, n: i128) -> Vec<QuadInt> {
        let mut out = Vec::new();
        if n <= 0 {
            return out;
        }
        self.for_each_in_shell(n, |u, m| {
            if m == n {
                out.push(u)
            }
        });
        out.sort();
        out
    }

    /// Calls `visit(u, norm(u))` for every nonzero `u` with `norm(u) <= n`,
    /// in coordinate order (y ascending, then x ascending).
    pub fn for_each_in_shell(&self, n: i128, mut visit: impl FnMut(QuadInt, i128)) {
        if n <= 0 {
            return;
        }
        let d = self.d as i128;
        match self.tau_case {
            TauCase::Sqrt => {
                let ymax = isqrt(n / d);
                for y in -ymax..=ymax {
                    let xmax = isqrt(n - d * y * y);
                    for x in -xmax..=xmax {
                        if x == 0 && y == 0 {
                            continue;
                        }
                        visit(QuadInt::new(x, y), x * x + d * y * y);
                    }
                }
            }
            TauCase::Half => {
                // 4 N(x + y tau) = (2x + y)^2 + d y^2
                let ymax = isqrt(4 * n / d);
                let k = self.k();
                for y in -ymax..=ymax {
                    let rem = 4 * n - d * y * y;
                    if rem < 0 {
                        continue;
                    }
                    let t = isqrt(rem);
                    let xlo = Integer::div_ceil(&(-t - y), &2);
                    let xhi = Integer::div_floor(&(t - y), &2);
                    for x in xlo..=xhi {
                        if x == 0 && y == 0 {
                            continue;
                        }
                        visit(QuadInt::new(x, y), x * x + x * y + k * y * y);
                    }
                }
            }
        }
    }

    /// Nonzero elements of norm at most `n`, ordered by `(norm, x, y)`.
    pub fn enumerate_ball(&self, n: u64) -> Vec<QuadInt> {
        self.ball_with_norms(n).into_iter().map(|(_, u)| u).collect()
    }

    /// Like [`enumerate_ball`](Self::enumerate_ball) but keeps each norm alongside.
    pub fn ball_with_norms(&self, n: u64) -> Vec<(i128, QuadInt)> {
        let mut out = Vec::new();
        self.for_each_in_shell(n as i128, |u, m| out.push((m, u)));
        out.sort_unstable();
        out
    }

    /// Complex embedding with `tau` in the upper half plane.
    pub fn embed(&self, u: QuadInt) -> Complex64 {
        let sd = (self.d as f64).sqrt();
        match self.tau_case {
            TauCase::Sqrt => Complex64::new(u.x as f64, u.y as f64 * sd),
            TauCase::Half => Complex64::new(u.x as f64 + 0.5 * u.y as f64, 0.5 * u.y as f64 * sd),
        }
    }

    /// The associate of `u` whose argument lies in `[0, 2*pi/w)`.
    pub fn canonical_associate(&self, u: QuadInt) -> QuadInt {
        if u.is_zero() {
            return u;
        }
        let good = |v: QuadInt| match self.w {
            2 => v.y > 0 || (v.y == 0 && v.x > 0),
            _ => v.x > 0 && v.y >= 0,
        };
        self.units()
            .into_iter()
            .map(|e| self.mul(e, u))
            .find(|&v| good(v))
            .expect("every nonzero element has exactly one associate in the fundamental sector")
    }

    /// Bilinear form attached to the norm, doubled so it stays integral: `Tr(u * conj v)`.
    pub fn trace_form(&self, u: QuadInt, v: QuadInt) -> i128 {
        self.trace(self.mul(u, self.conj(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parameters() {
        let f1 = QuadField::new(1).unwrap();
        assert_eq!((f1.tau_case(), f1.disc(), f1.w()), (TauCase::Sqrt, -4, 4));
        let f3 = QuadField::new(3).unwrap();
        assert_eq!((f3.tau_case(), f3.disc(), f3.w()), (TauCase::Half, -3, 6));
        assert_eq!(QuadField::new(4), Err(Error::InvalidField(4)));
        assert_eq!(QuadField::new(0), Err(Error::InvalidField(0)));
        assert_eq!(QuadField::new(-3), Err(Error::InvalidField(-3)));
        assert_eq!(QuadField::new(2).unwrap().disc(), -8);
        assert_eq!(QuadField::new(7).unwrap().disc(), -7);
    }

    #[test]
    fn norms() {
        let f1 = QuadField::new(1).unwrap();
        assert_eq!(f1.norm(QuadInt::new(1, 1)), 2);
        let f3 = QuadField::new(3).unwrap();
        assert_eq!(f3.norm(QuadInt::TAU), 1);
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.norm(QuadInt::new(1, 1)), 6);
    }

    #[test]
    fn multiplication_table() {
        let f1 = QuadField::new(1).unwrap();
        assert_eq!(f1.mul(QuadInt::TAU, QuadInt::TAU), QuadInt::new(-1, 0));
        let f3 = QuadField::new(3).unwrap();
        assert_eq!(f3.mul(QuadInt::TAU, QuadInt::TAU), QuadInt::new(-1, 1));
        assert_eq!(f1.divide_exact(QuadInt::int(2), QuadInt::new(1, 1)).unwrap(), QuadInt::new(1, -1));
        assert_eq!(f1.divide_exact(QuadInt::ONE, QuadInt::ZERO), Err(Error::DivisionByZero));
        assert!(matches!(f1.divide_exact(QuadInt::ONE, QuadInt::new(1, 1)), Err(Error::NotDivisible(..))));
    }

    #[test]
    fn half_case_square_of_tau_from_embedding() {
        // tau = (1 + sqrt(-3))/2, so tau^2 = (-2 + 2 sqrt(-3))/4 = tau - 1.
        let f3 = QuadField::new(3).unwrap();
        let t = f3.embed(QuadInt::TAU);
        let sq = f3.embed(f3.mul(QuadInt::TAU, QuadInt::TAU));
        assert!((t * t - sq).norm() < 1e-12);
    }

    #[test]
    fn unit_groups() {
        let brute = |f: &QuadField| {
            let mut v = Vec::new();
            for x in -2..=2 {
                for y in -2..=2 {
                    let u = QuadInt::new(x, y);
                    if f.norm(u) == 1 {
                        v.push(u);
                    }
                }
            }
            v.sort();
            v
        };
        for d in [1, 2, 3, 5, 7, 11, 163] {
            let f = QuadField::new(d).unwrap();
            let us = f.units();
            assert_eq!(us.len() as u32, f.w());
            assert_eq!(us, brute(&f));
            for &a in &us {
                for &b in &us {
                    assert!(us.contains(&f.mul(a, b)));
                }
            }
        }
        let f3 = QuadField::new(3).unwrap();
        let expected = {
            let t = QuadInt::TAU;
            let mut v = vec![QuadInt::ONE, -QuadInt::ONE, t, -t, t - QuadInt::ONE, QuadInt::ONE - t];
            v.sort();
            v
        };
        assert_eq!(f3.units(), expected);
    }

    #[test]
    fn small_balls() {
        let f1 = QuadField::new(1).unwrap();
        assert_eq!(f1.enumerate_ball(1).len(), 4);
        assert_eq!(f1.enumerate_ball(2).len(), 8);
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.enumerate_ball(1), vec![QuadInt::int(-1), QuadInt::int(1)]);
    }

    #[test]
    fn ball_matches_box_search() {
        for d in [1, 2, 3, 7, 11] {
            let f = QuadField::new(d).unwrap();
            let n = 60u64;
            let mut brute: Vec<(i128, QuadInt)> = Vec::new();
            for x in -20..=20 {
                for y in -20..=20 {
                    let u = QuadInt::new(x, y);
                    let m = f.norm(u);
                    if m >= 1 && m <= n as i128 {
                        brute.push((m, u));
                    }
                }
            }
            brute.sort();
            assert_eq!(f.ball_with_norms(n), brute, "d = {d}");
        }
    }

    #[test]
    fn canonical_associates() {
        let f1 = QuadField::new(1).unwrap();
        assert_eq!(f1.canonical_associate(QuadInt::int(-1)), QuadInt::ONE);
        assert_eq!(f1.canonical_associate(QuadInt::new(-1, 1)), QuadInt::new(1, 1));
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.canonical_associate(QuadInt::new(1, -1)), QuadInt::new(-1, 1));
        let f3 = QuadField::new(3).unwrap();
        for u in f3.units() {
            assert_eq!(f3.canonical_associate(u), QuadInt::ONE);
        }
    }
}
