//! Multiplicative and additive functions on elements and ideals.

mod characters;
mod distance;
mod extension;
mod spec;

pub use characters::{dirichlet_characters, unit_group_mod, DirichletChar, UnitGroupMod};
pub use distance::{pretentious_distance, prime_values};
pub use extension::{extensions_of, Extension};
pub use spec::FnSpec;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ideal_arith::{factor_ideal, principal, IdealFactorization, IdealHnf, PrimeIdeal, SplitType};
use crate::quad_ring::{QuadField, QuadInt};

pub type ElementEval = Arc<dyn Fn(&QuadField, QuadInt) -> Complex64 + Send + Sync>;
pub type PrimePowerEval = Arc<dyn Fn(&PrimeIdeal, u32) -> Complex64 + Send + Sync>;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `exp(i * theta)`.
pub fn unit_phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// A completely multiplicative function on the nonzero elements; 0 at 0.
#[derive(Clone)]
pub enum ElementFn {
    One,
    /// `u -> N(u)^{i tau}`
    Archimedean(f64),
    /// `u -> (u/|u|)^{w k}`, trivial on units.
    Angular(i64),
    Character(DirichletChar),
    Product(Vec<ElementFn>),
    Conj(Box<ElementFn>),
    /// `u -> g((u))`
    FromIdeal(IdealFn),
    Custom {
        id: String,
        unimodular: bool,
        eval: ElementEval,
    },
}

impl fmt::Debug for ElementFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementFn({})", self.id())
    }
}

impl ElementFn {
    pub fn custom(
        id: impl Into<String>,
        unimodular: bool,
        eval: impl Fn(&QuadField, QuadInt) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        ElementFn::Custom { id: id.into(), unimodular, eval: Arc::new(eval) }
    }

    pub fn times(self, other: ElementFn) -> Self {
        match self {
            ElementFn::Product(mut v) => {
                v.push(other);
                ElementFn::Product(v)
            }
            s => ElementFn::Product(vec![s, other]),
        }
    }

    pub fn conj(self) -> Self {
        ElementFn::Conj(Box::new(self))
    }

    pub fn eval(&self, f: &QuadField, u: QuadInt) -> Complex64 {
        if u.is_zero() {
            return ZERO;
        }
        match self {
            ElementFn::One => ONE,
            ElementFn::Archimedean(tau) => unit_phase(tau * (f.norm(u) as f64).ln()),
            ElementFn::Angular(k) => {
                let theta = f.embed(u).arg();
                unit_phase(f.w() as f64 * *k as f64 * theta)
            }
            ElementFn::Character(chi) => chi.eval(u),
            ElementFn::Product(fs) => fs.iter().map(|g| g.eval(f, u)).product(),
            ElementFn::Conj(g) => g.eval(f, u).conj(),
            ElementFn::FromIdeal(g) => g.eval(f, &principal(f, u)),
            ElementFn::Custom { eval, .. } => eval(f, u),
        }
    }

    /// Whether every value at a nonzero element has modulus one.
    pub fn is_unimodular(&self) -> bool {
        match self {
            ElementFn::One | ElementFn::Archimedean(_) | ElementFn::Angular(_) => true,
            ElementFn::Character(chi) => chi.is_modified(),
            ElementFn::Product(fs) => fs.iter().all(ElementFn::is_unimodular),
            ElementFn::Conj(g) => g.is_unimodular(),
            ElementFn::FromIdeal(g) => g.is_unimodular(),
            ElementFn::Custom { unimodular, .. } => *unimodular,
        }
    }

    pub fn id(&self) -> String {
        match self {
            ElementFn::One => "one".into(),
            ElementFn::Archimedean(t) => format!("archimedean({t})"),
            ElementFn::Angular(k) => format!("angular({k})"),
            ElementFn::Character(chi) => chi.id(),
            ElementFn::Product(fs) => {
                let ids: Vec<String> = fs.iter().map(ElementFn::id).collect();
                format!("product({})", ids.join(","))
            }
            ElementFn::Conj(g) => format!("conj({})", g.id()),
            ElementFn::FromIdeal(g) => format!("lift({})", g.id()),
            ElementFn::Custom { id, .. } => id.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Multiplicative,
    CompletelyMultiplicative,
}

/// A multiplicative function on nonzero ideals, determined by its values on prime powers.
#[derive(Clone)]
pub enum IdealFn {
    One,
    /// `I -> N(I)^{i tau}`
    NormPower(f64),
    Extension(Arc<Extension>),
    PrimeRule {
        id: String,
        mode: Mode,
        unimodular: bool,
        values: PrimePowerEval,
    },
    Product(Vec<IdealFn>),
    Conj(Box<IdealFn>),
}

impl fmt::Debug for IdealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealFn({})", self.id())
    }
}

impl IdealFn {
    /// Completely multiplicative with the given prime values.
    pub fn completely_multiplicative(
        id: impl Into<String>,
        unimodular: bool,
        at_prime: impl Fn(&PrimeIdeal) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        IdealFn::PrimeRule {
            id: id.into(),
            mode: Mode::CompletelyMultiplicative,
            unimodular,
            values: Arc::new(move |q, _| at_prime(q)),
        }
    }

    /// Multiplicative with the given prime-power values.
    pub fn multiplicative(
        id: impl Into<String>,
        unimodular: bool,
        at_power: impl Fn(&PrimeIdeal, u32) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        IdealFn::PrimeRule { id: id.into(), mode: Mode::Multiplicative, unimodular, values: Arc::new(at_power) }
    }

    /// `-1` on every power of a prime of norm 2, `1` elsewhere.
    pub fn dead_factor() -> Self {
        IdealFn::multiplicative("dead_factor", true, |q, _| if q.norm() == 2 { -ONE } else { ONE })
    }

    /// Completely multiplicative, `-1` on split primes and `1` on the others.
    pub fn split_sign() -> Self {
        IdealFn::completely_multiplicative("split_sign", true, |q| if q.split == SplitType::Split { -ONE } else { ONE })
    }

    /// The indicator of the unit ideal.
    pub fn unit_indicator() -> Self {
        IdealFn::completely_multiplicative("unit_indicator", false, |_| ZERO)
    }

    pub fn times(self, other: IdealFn) -> Self {
        match self {
            IdealFn::Product(mut v) => {
                v.push(other);
                IdealFn::Product(v)
            }
            s => IdealFn::Product(vec![s, other]),
        }
    }

    pub fn conj(self) -> Self {
        IdealFn::Conj(Box::new(self))
    }

    pub fn mode(&self) -> Mode {
        let cm = match self {
            IdealFn::One | IdealFn::NormPower(_) | IdealFn::Extension(_) => true,
            IdealFn::PrimeRule { mode, .. } => *mode == Mode::CompletelyMultiplicative,
            IdealFn::Product(gs) => gs.iter().all(|g| g.mode() == Mode::CompletelyMultiplicative),
            IdealFn::Conj(g) => g.mode() == Mode::CompletelyMultiplicative,
        };
        if cm {
            Mode::CompletelyMultiplicative
        } else {
            Mode::Multiplicative
        }
    }

    pub fn is_unimodular(&self) -> bool {
        match self {
            IdealFn::One | IdealFn::NormPower(_) | IdealFn::Extension(_) => true,
            IdealFn::PrimeRule { unimodular, .. } => *unimodular,
            IdealFn::Product(gs) => gs.iter().all(IdealFn::is_unimodular),
            IdealFn::Conj(g) => g.is_unimodular(),
        }
    }

    /// Value at `q^k`, `k >= 1`.
    pub fn prime_power(&self, q: &PrimeIdeal, k: u32) -> Complex64 {
        match self {
            IdealFn::One => ONE,
            IdealFn::NormPower(tau) => unit_phase(tau * k as f64 * (q.norm() as f64).ln()),
            IdealFn::Extension(e) => e.at_prime(q).powu(k),
            IdealFn::PrimeRule { mode: Mode::CompletelyMultiplicative, values, .. } => values(q, 1).powu(k),
            IdealFn::PrimeRule { mode: Mode::Multiplicative, values, .. } => values(q, k),
            IdealFn::Product(gs) => gs.iter().map(|g| g.prime_power(q, k)).product(),
            IdealFn::Conj(g) => g.prime_power(q, k).conj(),
        }
    }

    pub fn eval_factored(&self, fac: &IdealFactorization) -> Complex64 {
        fac.factors.iter().map(|(q, k)| self.prime_power(q, *k)).product()
    }

    pub fn eval(&self, f: &QuadField, i: &IdealHnf) -> Complex64 {
        self.eval_factored(&factor_ideal(f, i))
    }

    pub fn id(&self) -> String {
        match self {
            IdealFn::One => "one".into(),
            IdealFn::NormPower(t) => format!("norm_power({t})"),
            IdealFn::Extension(e) => e.id(),
            IdealFn::PrimeRule { id, .. } => id.clone(),
            IdealFn::Product(gs) => {
                let ids: Vec<String> = gs.iter().map(IdealFn::id).collect();
                format!("product({})", ids.join(","))
            }
            IdealFn::Conj(g) => format!("conj({})", g.id()),
        }
    }
}

/// An additive function on ideals: `h(IJ) = h(I) + h(J)` for coprime `I`, `J`.
#[derive(Clone)]
pub struct AdditiveFn {
    id: String,
    values: PrimePowerEval,
}

impl fmt::Debug for AdditiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdditiveFn({})", self.id)
    }
}

impl AdditiveFn {
    pub fn new(
        id: impl Into<String>,
        at_power: impl Fn(&PrimeIdeal, u32) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        AdditiveFn { id: id.into(), values: Arc::new(at_power) }
    }

    /// Number of distinct prime factors.
    pub fn omega() -> Self {
        AdditiveFn::new("omega", |_, _| ONE)
    }

    /// Number of prime factors with multiplicity.
    pub fn big_omega() -> Self {
        AdditiveFn::new("big_omega", |_, k| Complex64::new(k as f64, 0.0))
    }

    pub fn zero() -> Self {
        AdditiveFn::new("zero", |_, _| ZERO)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn prime_power(&self, q: &PrimeIdeal, k: u32) -> Complex64 {
        (self.values)(q, k)
    }

    pub fn eval_factored(&self, fac: &IdealFactorization) -> Complex64 {
        fac.factors.iter().map(|(q, k)| self.prime_power(q, *k)).sum()
    }

    pub fn eval(&self, f: &QuadField, i: &IdealHnf) -> Complex64 {
        self.eval_factored(&factor_ideal(f, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_arith::{enumerate_ideals, ideal_mul, ideal_pow, prime_ideals_above};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn element_functions_are_completely_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [1, 2, 3, 7] {
            let f = QuadField::new(d).unwrap();
            let fns = [
                ElementFn::One,
                ElementFn::Archimedean(0.7),
                ElementFn::Angular(1),
                ElementFn::Angular(-2).times(ElementFn::Archimedean(1.3)).conj(),
            ];
            for g in &fns {
                for _ in 0..200 {
                    let u = QuadInt::new(rng.gen_range(-50..50), rng.gen_range(-50..50));
                    let v = QuadInt::new(rng.gen_range(-50..50), rng.gen_range(-50..50));
                    let lhs = g.eval(&f, f.mul(u, v));
                    let rhs = g.eval(&f, u) * g.eval(&f, v);
                    assert!((lhs - rhs).norm() < 1e-12, "{} on d = {d}", g.id());
                }
                for e in f.units() {
                    assert!((g.eval(&f, e) - ONE).norm() < 1e-12, "{} not trivial on units", g.id());
                }
            }
        }
    }

    #[test]
    fn additive_evaluation() {
        let f = QuadField::new(1).unwrap();
        let ten = principal(&f, QuadInt::int(10));
        assert_eq!(AdditiveFn::omega().eval(&f, &ten), Complex64::new(3.0, 0.0));
        assert_eq!(AdditiveFn::big_omega().eval(&f, &ten), Complex64::new(4.0, 0.0));
        assert_eq!(AdditiveFn::omega().eval(&f, &IdealHnf::ONE), ZERO);
        assert_eq!(IdealFn::split_sign().eval(&f, &IdealHnf::ONE), ONE);
    }

    #[test]
    fn completely_multiplicative_mode_powers() {
        let f = QuadField::new(1).unwrap();
        let q = prime_ideals_above(&f, 5).unwrap()[0];
        let g = IdealFn::completely_multiplicative("phase", true, |_| unit_phase(0.4));
        let sq = ideal_pow(&f, &q.hnf, 2);
        assert!((g.eval(&f, &sq) - g.eval(&f, &q.hnf).powu(2)).norm() < 1e-15);
        assert_eq!(g.mode(), Mode::CompletelyMultiplicative);
        assert_eq!(IdealFn::dead_factor().mode(), Mode::Multiplicative);
    }

    #[test]
    fn ideal_functions_multiplicative_on_coprime_pairs() {
        let f = QuadField::new(6).unwrap();
        let ideals = enumerate_ideals(&f, 40);
        let g = IdealFn::dead_factor().times(IdealFn::NormPower(0.3));
        for i in &ideals {
            for j in &ideals {
                if crate::ideal_arith::coprime(i, j) {
                    let lhs = g.eval(&f, &ideal_mul(&f, i, j));
                    assert!((lhs - g.eval(&f, i) * g.eval(&f, j)).norm() < 1e-12);
                }
            }
        }
    }
}
