//! Ideals of Z[tau_d] as rank-2 lattices in Hermite normal form.

mod class_group;
mod counting;
mod primes;

pub use class_group::{minkowski_bound, ClassGenerator, ClassGroup};
pub use counting::{count_progression_in_ideal, element_density, ProgressionCount};
pub use primes::{
    enumerate_ideals, factor_ideal, prime_ideals_above, prime_ideals_up_to, walk_ideals, IdealFactorization,
    PrimeIdeal, SplitType,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{div_round, ext_gcd, gcd};
use crate::error::{Error, Result};
use crate::quad_ring::{QuadField, QuadInt};

/// The ideal `a*Z + (b + c*tau)*Z` with `c | a`, `c | b` and `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdealHnf {
    a: i128,
    b: i128,
    c: i128,
}

impl fmt::Display for IdealHnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// HNF `(a, b, c)` of the Z-lattice spanned by `vecs`, or `None` if it has rank < 2.
fn lattice_hnf(vecs: impl IntoIterator<Item = (i128, i128)>) -> Option<(i128, i128, i128)> {
    let mut pivot: Option<(i128, i128)> = None;
    let mut g = 0i128;
    for (x, y) in vecs {
        if y == 0 {
            g = gcd(g, x);
        } else if let Some((px, py)) = pivot {
            let (e, s, t) = ext_gcd(py, y);
            let mut nx = s * px + t * x;
            g = gcd(g, (y / e) * px - (py / e) * x);
            if g != 0 {
                nx = nx.rem_euclid(g);
            }
            pivot = Some((nx, e));
        } else {
            pivot = Some((x, y));
        }
    }
    let (px, py) = pivot?;
    if g == 0 {
        return None;
    }
    let (px, py) = if py < 0 { (-px, -py) } else { (px, py) };
    Some((g, px.rem_euclid(g), py))
}

impl IdealHnf {
    pub const ONE: IdealHnf = IdealHnf { a: 1, b: 0, c: 1 };

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn c(&self) -> i128 {
        self.c
    }

    /// Builds an ideal from an HNF triple, checking the lattice conditions and closure.
    pub fn from_triple(f: &QuadField, a: i128, b: i128, c: i128) -> Option<IdealHnf> {
        if a <= 0 || c <= 0 || b < 0 || b >= a || a % c != 0 || b % c != 0 {
            return None;
        }
        let cand = IdealHnf { a, b, c };
        let closed = cand.contains(f.mul(QuadInt::TAU, QuadInt::int(a)))
            && cand.contains(f.mul(QuadInt::TAU, QuadInt::new(b, c)));
        closed.then_some(cand)
    }

    /// Z-basis `{a, b + c*tau}`.
    pub fn basis(&self) -> [QuadInt; 2] {
        [QuadInt::int(self.a), QuadInt::new(self.b, self.c)]
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn contains(&self, u: QuadInt) -> bool {
        if u.y % self.c != 0 {
            return false;
        }
        let t = u.y / self.c;
        (u.x - t * self.b) % self.a == 0
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IdealHnf) -> bool {
        self.basis().iter().all(|&u| other.contains(u))
    }

    /// Largest rational integer dividing the ideal; equals `c`.
    pub fn content(&self) -> i128 {
        self.c
    }

    /// The ideal divided by its content.
    pub fn primitive_part(&self) -> IdealHnf {
        IdealHnf { a: self.a / self.c, b: self.b / self.c, c: 1 }
    }

    /// `self / n` for a rational integer `n` dividing the ideal.
    pub fn div_int(&self, n: i128) -> Result<IdealHnf> {
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = n.abs();
        if self.c % n != 0 {
            return Err(Error::NotDivisible(self.to_string(), n.to_string()));
        }
        Ok(IdealHnf { a: self.a / n, b: self.b / n, c: self.c / n })
    }

    /// `n * self`.
    pub fn mul_int(&self, n: i128) -> IdealHnf {
        let n = n.abs();
        IdealHnf { a: self.a * n, b: self.b * n, c: self.c * n }
    }

    /// Index of the residue class of `u` among the `norm` residues modulo this ideal.
    pub fn residue_index(&self, u: QuadInt) -> usize {
        let yr = u.y.rem_euclid(self.c);
        let t = (u.y - yr) / self.c;
        let xr = (u.x - t * self.b).rem_euclid(self.a);
        (yr * self.a + xr) as usize
    }

    /// Representative `x + y*tau` with `0 <= x < a`, `0 <= y < c` for a residue index.
    pub fn residue_rep(&self, idx: usize) -> QuadInt {
        let idx = idx as i128;
        QuadInt::new(idx % self.a, idx / self.a)
    }
}

/// Smallest ideal containing all `gens`.
pub fn ideal_from_generators(f: &QuadField, gens: &[QuadInt]) -> Result<IdealHnf> {
    let mut vecs = Vec::with_capacity(2 * gens.len());
    for &g in gens {
        let t = f.mul(g, QuadInt::TAU);
        vecs.push((g.x, g.y));
        vecs.push((t.x, t.y));
    }
    lattice_hnf(vecs).map(|(a, b, c)| IdealHnf { a, b, c }).ok_or(Error::ZeroIdeal)
}

/// The principal ideal `(u)`; `u` must be nonzero.
pub fn principal(f: &QuadField, u: QuadInt) -> IdealHnf {
    ideal_from_generators(f, &[u]).expect("principal ideal of a nonzero element")
}

pub fn ideal_mul(f: &QuadField, i: &IdealHnf, j: &IdealHnf) -> IdealHnf {
    if i.is_one() {
        return *j;
    }
    if j.is_one() {
        return *i;
    }
    let bi = i.basis();
    let bj = j.basis();
    let prods = bi.iter().flat_map(|&u| bj.iter().map(move |&v| (u, v))).map(|(u, v)| f.mul(u, v)).map(|w| (w.x, w.y));
    let (a, b, c) = lattice_hnf(prods).expect("product of nonzero ideals is nonzero");
    IdealHnf { a, b, c }
}

pub fn ideal_pow(f: &QuadField, i: &IdealHnf, mut e: u32) -> IdealHnf {
    let mut acc = IdealHnf::ONE;
    let mut base = *i;
    while e > 0 {
        if e & 1 == 1 {
            acc = ideal_mul(f, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = ideal_mul(f, &base, &base);
        }
    }
    acc
}

/// `I + J`.
pub fn ideal_add(i: &IdealHnf, j: &IdealHnf) -> IdealHnf {
    let vecs = i.basis().into_iter().chain(j.basis()).map(|w| (w.x, w.y));
    let (a, b, c) = lattice_hnf(vecs).expect("sum of nonzero ideals is nonzero");
    IdealHnf { a, b, c }
}

pub fn coprime(i: &IdealHnf, j: &IdealHnf) -> bool {
    ideal_add(i, j).is_one()
}

/// Complex-conjugate ideal.
pub fn ideal_conj(f: &QuadField, i: &IdealHnf) -> IdealHnf {
    let gens: Vec<QuadInt> = i.basis().iter().map(|&u| f.conj(u)).collect();
    ideal_from_generators(f, &gens).expect("conjugate of a nonzero ideal")
}

/// `(u) * I`.
pub fn ideal_mul_element(f: &QuadField, i: &IdealHnf, u: QuadInt) -> IdealHnf {
    ideal_mul(f, i, &principal(f, u))
}

/// A shortest nonzero element of the lattice `I` (Lagrange reduction for the norm form).
pub fn shortest_element(f: &QuadField, i: &IdealHnf) -> QuadInt {
    let [mut v1, mut v2] = i.basis();
    loop {
        if f.norm(v1) > f.norm(v2) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let mu = div_round(f.trace_form(v1, v2), 2 * f.norm(v1));
        if mu == 0 {
            break;
        }
        v2 = v2 - v1.scale(mu);
    }
    v1
}

/// A generator of `I` if it is principal; the associate in the fundamental sector.
pub fn is_principal(f: &QuadField, i: &IdealHnf) -> Option<QuadInt> {
    let prim = i.primitive_part();
    let short = shortest_element(f, &prim);
    if f.norm(short) != prim.norm() {
        return None;
    }
    Some(f.canonical_associate(short.scale(i.content())))
}

/// A small-norm ideal in the same class: `conj(alpha) * I / N(I)` for a shortest `alpha` in `I`.
pub fn reduce_ideal(f: &QuadField, i: &IdealHnf) -> IdealHnf {
    let prim = i.primitive_part();
    let alpha = shortest_element(f, &prim);
    ideal_mul_element(f, &prim, f.conj(alpha)).div_int(prim.norm()).expect("conj(alpha) * I is divisible by N(I)")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn generators_to_hnf() {
        let f5 = field(5);
        let p2 = ideal_from_generators(&f5, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        assert_eq!((p2.a(), p2.b(), p2.c()), (2, 1, 1));
        assert_eq!(p2.norm(), 2);
        let f1 = field(1);
        let i = ideal_from_generators(&f1, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        assert_eq!(i, principal(&f1, QuadInt::new(1, 1)));
        assert_eq!(i.norm(), 2);
        assert_eq!(ideal_from_generators(&f1, &[QuadInt::ZERO]), Err(Error::ZeroIdeal));
    }

    #[test]
    fn principal_norm_matches_element_norm() {
        for d in [1, 2, 3, 5, 7, 23] {
            let f = field(d);
            for u in f.enumerate_ball(60) {
                assert_eq!(principal(&f, u).norm(), f.norm(u));
            }
        }
    }

    #[test]
    fn products() {
        let f5 = field(5);
        let p2 = ideal_from_generators(&f5, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        assert_eq!(ideal_mul(&f5, &p2, &p2), principal(&f5, QuadInt::int(2)));
        assert_eq!(ideal_mul(&f5, &IdealHnf::ONE, &p2), p2);
        let f1 = field(1);
        let a = principal(&f1, QuadInt::new(1, 1));
        let b = principal(&f1, QuadInt::new(1, -1));
        assert_eq!(ideal_mul(&f1, &a, &b), principal(&f1, QuadInt::int(2)));
    }

    #[test]
    fn residues_round_trip() {
        let f = field(7);
        let i = ideal_from_generators(&f, &[QuadInt::int(6), QuadInt::new(2, 2)]).unwrap();
        for idx in 0..i.norm() as usize {
            let r = i.residue_rep(idx);
            assert_eq!(i.residue_index(r), idx);
            let shifted = r + i.basis()[1].scale(3) - i.basis()[0].scale(5);
            assert_eq!(i.residue_index(shifted), idx);
        }
    }

    #[test]
    fn principality_agrees_with_generator_search() {
        for d in [1, 2, 5, 6, 23] {
            let f = field(d);
            for i in enumerate_ideals(&f, 60) {
                let brute = f.elements_of_norm(i.norm()).into_iter().find(|&u| principal(&f, u) == i);
                let fast = is_principal(&f, &i);
                assert_eq!(fast.is_some(), brute.is_some(), "d = {d}, I = {i}");
                if let Some(g) = fast {
                    assert_eq!(principal(&f, g), i);
                }
            }
        }
        let f5 = field(5);
        let p2 = ideal_from_generators(&f5, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        assert_eq!(is_principal(&f5, &p2), None);
        assert_eq!(is_principal(&field(1), &IdealHnf::ONE), Some(QuadInt::ONE));
    }

    #[test]
    fn reduction_preserves_class() {
        let f = field(23);
        for i in enumerate_ideals(&f, 80) {
            let r = reduce_ideal(&f, &i);
            let r_bar = ideal_conj(&f, &r);
            assert!(is_principal(&f, &ideal_mul(&f, &i, &r_bar)).is_some());
            assert!(r.norm() <= 4);
        }
    }

    #[test]
    fn triple_validation() {
        let f = field(1);
        assert!(IdealHnf::from_triple(&f, 2, 1, 1).is_some());
        assert!(IdealHnf::from_triple(&f, 2, 0, 1).is_none());
        assert!(IdealHnf::from_triple(&f, 3, 0, 3).is_some());
    }
}
