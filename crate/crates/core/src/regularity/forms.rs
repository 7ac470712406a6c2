use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::quad_ring::{QuadField, QuadInt, TauCase};

/// `q(x,y,z) = a x² + b y² + c z² + e xy + f xz + g yz` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub e: i128,
    pub f: i128,
    pub g: i128,
}

impl QuadraticForm {
    pub fn new(a: i128, b: i128, c: i128, e: i128, f: i128, g: i128) -> Self {
        QuadraticForm { a, b, c, e, f, g }
    }

    pub fn diagonal(a: i128, b: i128, c: i128) -> Self {
        QuadraticForm::new(a, b, c, 0, 0, 0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.e == 0 && self.f == 0 && self.g == 0
    }

    pub fn eval(&self, field: &QuadField, x: QuadInt, y: QuadInt, z: QuadInt) -> QuadInt {
        let m = |u, v| field.mul(u, v);
        m(x, x).scale(self.a)
            + m(y, y).scale(self.b)
            + m(z, z).scale(self.c)
            + m(x, y).scale(self.e)
            + m(x, z).scale(self.f)
            + m(y, z).scale(self.g)
    }

    /// Relabels the variables so that `pair` becomes the first two and the remaining one the third.
    fn permuted(&self, pair: Pair) -> QuadraticForm {
        let &QuadraticForm { a, b, c, e, f, g } = self;
        match pair {
            Pair::XY => *self,
            Pair::XZ => QuadraticForm::new(a, c, b, f, e, g),
            Pair::YZ => QuadraticForm::new(b, c, a, g, e, f),
        }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{},{}]", self.a, self.b, self.c, self.e, self.f, self.g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminants {
    pub d1: i128,
    pub d2: i128,
    pub d3: i128,
    pub d4: i128,
}

impl Discriminants {
    /// `(Δ₃ − Δ₁ − Δ₂)² − 4 Δ₁ Δ₂`
    pub fn identity_lhs(&self) -> i128 {
        let cross = self.d3 - self.d1 - self.d2;
        cross * cross - 4 * self.d1 * self.d2
    }

    /// The left side equals `16 Δ₄` for every form.
    pub fn identity_holds(&self) -> bool {
        self.identity_lhs() == 16 * self.d4
    }
}

pub fn discriminants(q: &QuadraticForm) -> Discriminants {
    let &QuadraticForm { a, b, c, e, f, g } = q;
    Discriminants {
        d1: f * f - 4 * a * c,
        d2: g * g - 4 * b * c,
        d3: (f + g) * (f + g) - 4 * (a + b + e) * c,
        d4: c * (c * e * e + b * f * f + a * g * g - e * f * g - 4 * a * b * c),
    }
}

/// A square root of `n` in the ring, if one exists. The sign is fixed so that the
/// `τ`-coordinate is positive, or it is zero and the rational coordinate is positive.
pub fn sqrt_in_ring(field: &QuadField, n: i128) -> Option<QuadInt> {
    if n == 0 {
        return Some(QuadInt::ZERO);
    }
    let d = field.d() as i128;
    let root = if n > 0 {
        let r = crate::arith::isqrt(n);
        (r * r == n).then_some(QuadInt::new(r, 0))?
    } else {
        if (-n) % d != 0 {
            return None;
        }
        let r = crate::arith::isqrt(-n / d);
        if r * r * d != -n {
            return None;
        }
        match field.tau_case() {
            TauCase::Sqrt => QuadInt::new(0, r),
            // √−d = 2τ − 1
            TauCase::Half => QuadInt::new(-r, 2 * r),
        }
    };
    Some(if root.y < 0 || (root.y == 0 && root.x < 0) { -root } else { root })
}

fn require_sqrt(field: &QuadField, n: i128, label: &str) -> Result<QuadInt> {
    sqrt_in_ring(field, n).ok_or_else(|| Error::HypothesisFailed(format!("√({label}) = √{n}")))
}

/// `a x² + b y² + c z² = 0` solved by `x = k√(−bc³)(m−n)(m+n)`, `y = 2k√(−ac³)mn`,
/// `z = k√(abc²)(m²+n²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PythagoreanParam {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub root_x: QuadInt,
    pub root_y: QuadInt,
    pub root_z: QuadInt,
    pub field: QuadField,
}

impl PythagoreanParam {
    pub fn triple(&self, k: QuadInt, m: QuadInt, n: QuadInt) -> [QuadInt; 3] {
        let field = &self.field;
        let mul = |u, v| field.mul(u, v);
        let x = mul(mul(k, self.root_x), mul(m - n, m + n));
        let y = mul(mul(k, self.root_y), mul(m, n).scale(2));
        let z = mul(mul(k, self.root_z), mul(m, m) + mul(n, n));
        [x, y, z]
    }

    pub fn form(&self) -> QuadraticForm {
        QuadraticForm::diagonal(self.a, self.b, self.c)
    }

    /// The reduced shape in the pair `(x, y)`: `ℓ = √(−bc³)`, `α = 1`, `β = −1`, `ℓ' = 2√(−ac³)`.
    pub fn to_solution(&self) -> ParamSolution {
        ParamSolution {
            field: self.field,
            form: self.form(),
            pair: Pair::XY,
            ell: self.root_x,
            ell_prime: self.root_y.scale(2),
            alpha: QuadInt::ONE,
            beta: -QuadInt::ONE,
            third: [self.root_z, QuadInt::ZERO, self.root_z],
        }
    }
}

pub fn pythagorean_parametrization(field: &QuadField, a: i128, b: i128, c: i128) -> Result<PythagoreanParam> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::DegenerateForm("a, b, c must be nonzero".into()));
    }
    require_sqrt(field, -a * c, "-ac")?;
    require_sqrt(field, -b * c, "-bc")?;
    let c3 = c * c * c;
    Ok(PythagoreanParam {
        a,
        b,
        c,
        root_x: require_sqrt(field, -b * c3, "-bc^3")?,
        root_y: require_sqrt(field, -a * c3, "-ac^3")?,
        root_z: require_sqrt(field, a * b * c * c, "abc^2")?,
        field: *field,
    })
}

/// The designated pair of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    XY,
    XZ,
    YZ,
}

impl std::str::FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pair> {
        match s {
            "xy" => Ok(Pair::XY),
            "xz" => Ok(Pair::XZ),
            "yz" => Ok(Pair::YZ),
            other => Err(Error::PreconditionError(format!("pair must be xy, xz or yz, got {other}"))),
        }
    }
}

/// A solution family in reduced shape: the designated pair is
/// `(k ℓ(m+αn)(m+βn), k ℓ' m n)` and the remaining variable is
/// `k (t₀ m² + t₁ mn + t₂ n²)` with `third = [t₀, t₁, t₂]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSolution {
    pub field: QuadField,
    pub form: QuadraticForm,
    pub pair: Pair,
    pub ell: QuadInt,
    pub ell_prime: QuadInt,
    pub alpha: QuadInt,
    pub beta: QuadInt,
    pub third: [QuadInt; 3],
}

impl ParamSolution {
    /// `ℓ(m+αn)(m+βn)`
    pub fn first_factor(&self, m: QuadInt, n: QuadInt) -> QuadInt {
        let f = &self.field;
        let l1 = m + f.mul(self.alpha, n);
        let l2 = m + f.mul(self.beta, n);
        f.mul(self.ell, f.mul(l1, l2))
    }

    /// `ℓ' m n`
    pub fn second_factor(&self, m: QuadInt, n: QuadInt) -> QuadInt {
        self.field.mul(self.ell_prime, self.field.mul(m, n))
    }

    pub fn third_value(&self, m: QuadInt, n: QuadInt) -> QuadInt {
        let f = &self.field;
        f.mul(self.third[0], f.mul(m, m)) + f.mul(self.third[1], f.mul(m, n)) + f.mul(self.third[2], f.mul(n, n))
    }

    /// `(x, y, z)` in the original variable order.
    pub fn triple(&self, k: QuadInt, m: QuadInt, n: QuadInt) -> [QuadInt; 3] {
        let f = &self.field;
        let p = f.mul(k, self.first_factor(m, n));
        let s = f.mul(k, self.second_factor(m, n));
        let t = f.mul(k, self.third_value(m, n));
        match self.pair {
            Pair::XY => [p, s, t],
            Pair::XZ => [p, t, s],
            Pair::YZ => [t, p, s],
        }
    }
}

/// Element of the fraction field, `num / den` with `den > 0` and no common integer factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct KElem {
    num: QuadInt,
    den: i128,
}

impl KElem {
    fn new(num: QuadInt, den: i128) -> KElem {
        assert!(den != 0);
        let g = gcd(gcd(num.x, num.y), den).abs().max(1);
        let s = if den < 0 { -1 } else { 1 };
        KElem { num: QuadInt::new(s * num.x / g, s * num.y / g), den: s * den / g }
    }

    fn int(n: i128) -> KElem {
        KElem::from(QuadInt::int(n))
    }

    fn is_zero(self) -> bool {
        self.num.is_zero()
    }

    fn mul(self, f: &QuadField, o: KElem) -> KElem {
        KElem::new(f.mul(self.num, o.num), self.den * o.den)
    }

    fn div(self, f: &QuadField, o: KElem) -> Result<KElem> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = f.mul(f.mul(self.num, f.conj(o.num)), QuadInt::int(o.den));
        Ok(KElem::new(num, self.den * f.norm(o.num)))
    }

    fn scale(self, n: i128) -> KElem {
        KElem::new(self.num.scale(n), self.den)
    }
}

impl From<QuadInt> for KElem {
    fn from(u: QuadInt) -> KElem {
        KElem { num: u, den: 1 }
    }
}

impl Add for KElem {
    type Output = KElem;
    fn add(self, o: KElem) -> KElem {
        KElem::new(self.num.scale(o.den) + o.num.scale(self.den), self.den * o.den)
    }
}

impl Sub for KElem {
    type Output = KElem;
    fn sub(self, o: KElem) -> KElem {
        self + (-o)
    }
}

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { num: -self.num, den: self.den }
    }
}

impl Mul<i128> for KElem {
    type Output = KElem;
    fn mul(self, n: i128) -> KElem {
        self.scale(n)
    }
}

/// Coefficients `[m², mn, n²]` of a binary quadratic form over the fraction field.
type Binary = [KElem; 3];

fn binary_scale(f: &QuadField, p: Binary, s: KElem) -> Binary {
    [p[0].mul(f, s), p[1].mul(f, s), p[2].mul(f, s)]
}

fn binary_sub(p: Binary, q: Binary) -> Binary {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

fn integral(u: KElem) -> QuadInt {
    debug_assert_eq!(u.den, 1);
    u.num
}

/// Reduces `q = 0` to a solution family whose designated pair splits as
/// `ℓ(m+αn)(m+βn)` and `ℓ' m n` with `α, β, ℓ, ℓ'` integral.
///
/// Diagonal forms use the Pythagorean family. Otherwise the conic obtained from
/// `(x, y, z) ↦ (2cx, 2cy, z − fx − gy)` is parametrized directly; a pair containing `z`
/// is handled this way only when `f = g = 0`, and by relabelling the variables otherwise.
pub fn reduce_form(field: &QuadField, q: &QuadraticForm, pair: Pair) -> Result<ParamSolution> {
    if discriminants(q).d4 == 0 {
        return Err(Error::DegenerateForm("Δ₄ = 0".into()));
    }
    let direct = pair == Pair::XY || (q.f == 0 && q.g == 0);
    let (oriented, target) = if direct { (*q, pair) } else { (q.permuted(pair), Pair::XY) };
    if oriented.is_diagonal() {
        let p = q.permuted(pair);
        let param = pythagorean_parametrization(field, p.a, p.b, p.c)?;
        let sol = ParamSolution { form: *q, pair, ..param.to_solution() };
        return verified(field, sol);
    }
    let family = conic_family(field, &oriented, target)?;
    verified(field, family.into_solution(field, *q, pair))
}

/// Shape before denominators are cleared.
struct Family {
    ell: KElem,
    ell_prime: KElem,
    alpha: KElem,
    beta: KElem,
    third: Binary,
}

impl Family {
    fn into_solution(mut self, field: &QuadField, form: QuadraticForm, pair: Pair) -> ParamSolution {
        // n ↦ D n makes α, β integral
        let dn = self.alpha.den.lcm(&self.beta.den);
        self.alpha = self.alpha * dn;
        self.beta = self.beta * dn;
        self.ell_prime = self.ell_prime * dn;
        self.third[1] = self.third[1] * dn;
        self.third[2] = self.third[2] * (dn * dn);
        // the remaining denominators go by scaling the whole family
        let common = [self.ell, self.ell_prime, self.third[0], self.third[1], self.third[2]]
            .iter()
            .fold(1i128, |acc, u| acc.lcm(&u.den));
        ParamSolution {
            field: *field,
            form,
            pair,
            ell: integral(self.ell * common),
            ell_prime: integral(self.ell_prime * common),
            alpha: integral(self.alpha),
            beta: integral(self.beta),
            third: self.third.map(|t| integral(t * common)),
        }
    }
}

fn conic_family(f: &QuadField, p: &QuadraticForm, target: Pair) -> Result<Family> {
    if p.c == 0 {
        return Err(Error::DegenerateForm("the third variable has no square term".into()));
    }
    let disc = discriminants(p);
    if disc.d1 == 0 || disc.d2 == 0 || disc.d4 == 0 {
        return Err(Error::DegenerateForm("Δ₁, Δ₂ or Δ₄ vanishes for the chosen pair".into()));
    }
    let (big_a, big_b) = (disc.d1, disc.d2);
    let cross = disc.d3 - disc.d1 - disc.d2;
    let root_disc = KElem::from(require_sqrt(f, 16 * disc.d4, "16Δ₄")?);

    // z² = A x² + E xy + B y² = A (x − μ₁y)(x − μ₂y), solved by
    // x − μ₁y = m², x − μ₂y = A n², z = A m n
    let two_a = KElem::int(2 * big_a);
    let mu1 = (KElem::int(-cross) + root_disc).div(f, two_a)?;
    let mu2 = (KElem::int(-cross) - root_disc).div(f, two_a)?;
    let gap = mu2 - mu1;
    let two_c = KElem::int(2 * p.c);
    let zero = KElem::int(0);

    match target {
        Pair::XY => {
            // y = (m − √A n)(m + √A n)/(μ₂ − μ₁), x = μ₂/(μ₂ − μ₁) · (m − ρn)(m + ρn), ρ = μ₁A/√B;
            // m = (m' + n')/2, n = (n' − m')/(2√A) turns y into m'n'/(μ₂ − μ₁)
            let root_a = KElem::from(require_sqrt(f, big_a, "Δ₁")?);
            let root_b = KElem::from(require_sqrt(f, big_b, "Δ₂")?);
            let rho = mu1.mul(f, KElem::int(big_a)).div(f, root_b)?;
            let ratio = rho.div(f, root_a)?;
            let half = |u: KElem| KElem::new(u.num, 2 * u.den);
            let p1 = half(KElem::int(1) + ratio);
            let q1 = half(KElem::int(1) - ratio);
            if p1.is_zero() || q1.is_zero() {
                return Err(Error::DegenerateForm("coincident linear factors".into()));
            }
            let alpha = q1.div(f, p1)?;
            let beta = p1.div(f, q1)?;
            let ell_x = mu2.div(f, gap)?.mul(f, p1).mul(f, q1);
            let kappa_y = KElem::int(1).div(f, gap)?;
            let zc = KElem::int(big_a).div(f, root_a.scale(4))?;
            let x_bin = binary_scale(f, [KElem::int(1), alpha + beta, alpha.mul(f, beta)], ell_x);
            let y_bin = [zero, kappa_y, zero];
            let z_bin = [-zc, zero, zc];
            // X = 2c x, Y = 2c y, Z = z − f x − g y
            let third = binary_sub(
                binary_sub(z_bin, binary_scale(f, x_bin, KElem::int(p.f))),
                binary_scale(f, y_bin, KElem::int(p.g)),
            );
            Ok(Family { ell: ell_x.mul(f, two_c), ell_prime: kappa_y.mul(f, two_c), alpha, beta, third })
        }
        Pair::XZ => {
            // with f = g = 0 the third coordinate is z = A m n itself
            let root_b = KElem::from(require_sqrt(f, big_b, "Δ₂")?);
            let rho = mu1.mul(f, KElem::int(big_a)).div(f, root_b)?;
            let scale = two_c.div(f, gap)?;
            Ok(Family {
                ell: mu2.mul(f, scale),
                ell_prime: KElem::int(big_a),
                alpha: -rho,
                beta: rho,
                third: binary_scale(f, [KElem::int(1), zero, KElem::int(-big_a)], scale),
            })
        }
        Pair::YZ => {
            let root_a = KElem::from(require_sqrt(f, big_a, "Δ₁")?);
            let scale = two_c.div(f, gap)?;
            Ok(Family {
                ell: scale,
                ell_prime: KElem::int(big_a),
                alpha: -root_a,
                beta: root_a,
                third: binary_scale(f, [mu2, zero, -mu1.mul(f, KElem::int(big_a))], scale),
            })
        }
    }
}

fn verified(field: &QuadField, sol: ParamSolution) -> Result<ParamSolution> {
    if sol.alpha == sol.beta {
        return Err(Error::DegenerateForm("α = β".into()));
    }
    let probes = [(1, 0), (0, 1), (1, 1), (2, -1), (3, 5)];
    for (m, n) in probes {
        let [x, y, z] = sol.triple(QuadInt::ONE, QuadInt::int(m), QuadInt::int(n));
        if !sol.form.eval(field, x, y, z).is_zero() {
            return Err(Error::DegenerateForm(format!("parametrization check failed at ({m},{n})")));
        }
    }
    Ok(sol)
}

/// `mn(m+αn)(m+βn) ≠ 0` and `ℓ(m+αn)(m+βn) ≠ ℓ' m n`.
pub fn s_q_member(sol: &ParamSolution, m: QuadInt, n: QuadInt) -> bool {
    if m.is_zero() || n.is_zero() {
        return false;
    }
    let first = sol.first_factor(m, n);
    !first.is_zero() && first != sol.second_factor(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(x: i128, y: i128) -> QuadInt {
        QuadInt::new(x, y)
    }

    #[test]
    fn discriminant_examples() {
        let d = discriminants(&QuadraticForm::new(1, 1, 3, 1, 0, 0));
        assert_eq!((d.d1, d.d2, d.d3, d.d4), (-12, -12, -36, -27));
        assert_eq!(d.identity_lhs(), -432);
        assert!(d.identity_holds());
        let d = discriminants(&QuadraticForm::diagonal(1, 1, -1));
        assert_eq!((d.d1, d.d2, d.d3, d.d4), (4, 4, 8, -4));
        assert!(d.identity_holds());
        assert_eq!(discriminants(&QuadraticForm::diagonal(0, 0, 0)), Discriminants { d1: 0, d2: 0, d3: 0, d4: 0 });
    }

    #[test]
    fn square_roots() {
        let f3 = QuadField::new(3).unwrap();
        let r = sqrt_in_ring(&f3, -12).unwrap();
        assert_eq!(r, qi(-2, 4));
        assert_eq!(f3.mul(r, r), QuadInt::int(-12));
        assert_eq!(sqrt_in_ring(&f3, 4), Some(QuadInt::int(2)));
        assert_eq!(sqrt_in_ring(&QuadField::new(5).unwrap(), -1), None);
        let f1 = QuadField::new(1).unwrap();
        assert_eq!(sqrt_in_ring(&f1, -9), Some(qi(0, 3)));
        assert_eq!(sqrt_in_ring(&f1, 2), None);
        assert_eq!(sqrt_in_ring(&f3, 3), None);
    }

    #[test]
    fn classical_triple() {
        let f1 = QuadField::new(1).unwrap();
        let p = pythagorean_parametrization(&f1, 1, 1, -1).unwrap();
        assert_eq!(p.triple(QuadInt::ONE, QuadInt::int(2), QuadInt::ONE), [qi(3, 0), qi(4, 0), qi(5, 0)]);
        let sol = p.to_solution();
        assert_eq!((sol.alpha, sol.beta), (QuadInt::ONE, -QuadInt::ONE));
        assert_eq!(sol.ell_prime, sol.ell.scale(2));
        assert!(s_q_member(&sol, QuadInt::int(2), QuadInt::ONE));
        assert!(!s_q_member(&sol, QuadInt::ZERO, QuadInt::ONE));
        assert!(!s_q_member(&sol, QuadInt::ONE, QuadInt::ONE));
    }

    #[test]
    fn missing_root_is_named() {
        let f3 = QuadField::new(3).unwrap();
        match pythagorean_parametrization(&f3, 1, 3, -1) {
            Err(Error::HypothesisFailed(msg)) => assert!(msg.contains("-bc")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reduce_all_pairs() {
        let f3 = QuadField::new(3).unwrap();
        let q = QuadraticForm::new(1, 1, 3, 1, 0, 0);
        for pair in [Pair::XY, Pair::XZ, Pair::YZ] {
            let sol = reduce_form(&f3, &q, pair).unwrap();
            for (k, m, n) in [(qi(1, 1), qi(2, -1), qi(0, 3)), (qi(-3, 2), qi(5, 1), qi(1, -4))] {
                let [x, y, z] = sol.triple(k, m, n);
                assert!(q.eval(&f3, x, y, z).is_zero(), "{pair:?}");
            }
        }
        let f1 = QuadField::new(1).unwrap();
        let pyth = reduce_form(&f1, &QuadraticForm::diagonal(1, 1, -1), Pair::XY).unwrap();
        assert_eq!(
            pyth,
            ParamSolution {
                form: QuadraticForm::diagonal(1, 1, -1),
                ..pythagorean_parametrization(&f1, 1, 1, -1).unwrap().to_solution()
            }
        );
    }

    #[test]
    fn degenerate_forms() {
        let f1 = QuadField::new(1).unwrap();
        // x² + 2xy + y² + z²: e² = 4ab
        assert!(matches!(
            reduce_form(&f1, &QuadraticForm::new(1, 1, 1, 2, 0, 0), Pair::XY),
            Err(Error::DegenerateForm(_))
        ));
    }
}
