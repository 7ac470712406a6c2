use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    ideal_conj, ideal_mul, ideal_mul_element, ideal_pow, is_principal, prime_ideals_up_to, reduce_ideal, IdealHnf,
};
use crate::quad_ring::{QuadField, QuadInt};

/// A generator `I` of a cyclic factor of the class group, its order `d` and
/// the element `x` with `I^d = (x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGenerator {
    pub ideal: IdealHnf,
    pub order: u32,
    pub generator: QuadInt,
}

#[derive(Clone, Debug)]
struct ClassRep {
    exponents: Vec<u32>,
    ideal: IdealHnf,
    conj: IdealHnf,
}

/// The class group as a product of cyclic groups with explicit generators.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: QuadField,
    generators: Vec<ClassGenerator>,
    reps: Vec<ClassRep>,
}

/// `(2/pi) * sqrt(|disc|)`, rounded down.
pub fn minkowski_bound(f: &QuadField) -> u64 {
    let b = 2.0 / std::f64::consts::PI * (f.disc().unsigned_abs() as f64).sqrt();
    (b.floor() as u64).max(1)
}

fn same_class(f: &QuadField, i: &IdealHnf, j_conj: &IdealHnf) -> bool {
    is_principal(f, &ideal_mul(f, i, j_conj)).is_some()
}

impl ClassGroup {
    /// Computes the class group from prime ideals of norm at most `prime_bound`
    /// (default: the Minkowski bound).
    pub fn compute(f: &QuadField, prime_bound: Option<u64>) -> ClassGroup {
        let bound = prime_bound.unwrap_or_else(|| minkowski_bound(f));
        let primes = prime_ideals_up_to(f, bound);

        // Close {(1)} under multiplication by the small primes, one reduced
        // representative per class.
        let mut elems: Vec<IdealHnf> = vec![IdealHnf::ONE];
        let mut conjs: Vec<IdealHnf> = vec![IdealHnf::ONE];
        let find = |i: &IdealHnf, conjs: &[IdealHnf]| conjs.iter().position(|c| same_class(f, i, c));
        let mut next = 0;
        while next < elems.len() {
            for q in &primes {
                let prod = reduce_ideal(f, &ideal_mul(f, &elems[next], &q.hnf));
                if find(&prod, &conjs).is_none() {
                    conjs.push(ideal_conj(f, &prod));
                    elems.push(prod);
                }
            }
            next += 1;
        }
        let h = elems.len();
        let table: Vec<Vec<usize>> = (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| {
                        let prod = reduce_ideal(f, &ideal_mul(f, &elems[i], &elems[j]));
                        find(&prod, &conjs).expect("class group closed under products")
                    })
                    .collect()
            })
            .collect();
        let order = |g: usize| {
            let mut k = 1;
            let mut cur = g;
            while cur != 0 {
                cur = table[cur][g];
                k += 1;
            }
            k as u32
        };
        let gens = decompose(h, &table, &order);
        let generators: Vec<ClassGenerator> = gens
            .iter()
            .map(|&g| {
                let ord = order(g);
                let ideal = elems[g];
                let generator =
                    is_principal(f, &ideal_pow(f, &ideal, ord)).expect("ideal raised to its class order is principal");
                ClassGenerator { ideal, order: ord, generator }
            })
            .collect();

        let orders: Vec<u32> = generators.iter().map(|g| g.order).collect();
        let reps = mixed_radix(&orders)
            .into_iter()
            .map(|exponents| {
                let ideal = generators
                    .iter()
                    .zip(&exponents)
                    .fold(IdealHnf::ONE, |acc, (g, &e)| ideal_mul(f, &acc, &ideal_pow(f, &g.ideal, e)));
                ClassRep { exponents, conj: ideal_conj(f, &ideal), ideal }
            })
            .collect();
        ClassGroup { field: *f, generators, reps }
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn class_number(&self) -> usize {
        self.reps.len()
    }

    pub fn generators(&self) -> &[ClassGenerator] {
        &self.generators
    }

    pub fn orders(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.order).collect()
    }

    /// All exponent vectors, in mixed-radix order with the first generator most significant.
    pub fn exponent_vectors(&self) -> impl Iterator<Item = &[u32]> {
        self.reps.iter().map(|r| r.exponents.as_slice())
    }

    /// `prod I_i^{b_i}` for the exponent vector `b`.
    pub fn representative(&self, b: &[u32]) -> &IdealHnf {
        &self.reps[self.index_of(b)].ideal
    }

    pub fn index_of(&self, b: &[u32]) -> usize {
        b.iter().zip(&self.generators).fold(0usize, |acc, (&e, g)| acc * g.order as usize + e as usize)
    }

    /// Componentwise sum modulo the generator orders.
    pub fn add(&self, b1: &[u32], b2: &[u32]) -> Vec<u32> {
        b1.iter().zip(b2).zip(&self.generators).map(|((x, y), g)| (x + y) % g.order).collect()
    }

    pub fn scale(&self, b: &[u32], k: u32) -> Vec<u32> {
        b.iter().zip(&self.generators).map(|(&x, g)| ((x as u64 * k as u64) % g.order as u64) as u32).collect()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.generators.len()]
    }

    /// Exponent vector `b` with `I ~ prod I_i^{b_i}`.
    pub fn class_of(&self, i: &IdealHnf) -> Vec<u32> {
        self.class_with_generator(i).0
    }

    /// The class `b` of `I` together with a generator `x` of `I * conj(I_b)`,
    /// so that `I = (x) * I_b / N(I_b)`.
    pub fn class_with_generator(&self, i: &IdealHnf) -> (Vec<u32>, QuadInt) {
        for rep in &self.reps {
            if let Some(x) = is_principal(&self.field, &ideal_mul(&self.field, i, &rep.conj)) {
                return (rep.exponents.clone(), x);
            }
        }
        unreachable!("every ideal lies in some class")
    }

    /// Ideals of norm at most `x` in the class of `I`, realized as `(u) * I / N(I)`
    /// for `u` in `conj(I)` with `N(u) <= x * N(I)`.
    pub fn ideals_in_class(&self, i: &IdealHnf, x: u64) -> Vec<IdealHnf> {
        let f = &self.field;
        let n_i = i.norm();
        let i_bar = ideal_conj(f, i);
        let mut out = BTreeSet::new();
        f.for_each_in_shell(x as i128 * n_i, |u, _| {
            if i_bar.contains(u) {
                let j =
                    ideal_mul_element(f, i, u).div_int(n_i).expect("(u) I is divisible by N(I) when u lies in conj(I)");
                out.insert((j.norm(), j));
            }
        });
        out.into_iter().map(|(_, j)| j).collect()
    }
}

fn mixed_radix(orders: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Smallest tuple of elements (in index order) whose orders multiply to `h`
/// and which generate the whole group.
fn decompose(h: usize, table: &[Vec<usize>], order: &impl Fn(usize) -> u32) -> Vec<usize> {
    if h == 1 {
        return Vec::new();
    }
    let generated = |gens: &[usize]| {
        let mut set = vec![false; h];
        set[0] = true;
        let mut members = vec![0usize];
        for &g in gens {
            let mut frontier = members.clone();
            for _ in 1..order(g) {
                frontier = frontier.iter().map(|&m| table[m][g]).collect();
                for &m in &frontier {
                    if !set[m] {
                        set[m] = true;
                        members.push(m);
                    }
                }
            }
        }
        members.len()
    };
    fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            combos(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    for k in 1..=h {
        let mut all = Vec::new();
        combos(h, k, 1, &mut Vec::new(), &mut all);
        for gens in all {
            let prod: usize = gens.iter().map(|&g| order(g) as usize).product();
            if prod == h && generated(&gens) == h {
                return gens;
            }
        }
    }
    unreachable!("a finite abelian group is generated by all of its elements")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_arith::{enumerate_ideals, ideal_from_generators, principal};

    #[test]
    fn class_numbers() {
        for (d, h) in [(1, 1), (2, 1), (3, 1), (7, 1), (11, 1), (163, 1), (5, 2), (23, 3), (14, 4), (21, 4)] {
            let f = QuadField::new(d).unwrap();
            let cg = ClassGroup::compute(&f, None);
            assert_eq!(cg.class_number(), h, "d = {d}");
            assert_eq!(cg.orders().iter().product::<u32>() as usize, h);
        }
    }

    #[test]
    fn class_group_of_minus_five() {
        let f = QuadField::new(5).unwrap();
        let cg = ClassGroup::compute(&f, None);
        let p2 = ideal_from_generators(&f, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        let g = &cg.generators()[0];
        assert_eq!((g.ideal, g.order, g.generator), (p2, 2, QuadInt::int(2)));
    }

    #[test]
    fn generator_powers_are_principal() {
        let f = QuadField::new(23).unwrap();
        let cg = ClassGroup::compute(&f, None);
        let g = &cg.generators()[0];
        assert_eq!(g.order, 3);
        assert!(is_principal(&f, &g.ideal).is_none());
        assert!(is_principal(&f, &ideal_pow(&f, &g.ideal, 2)).is_none());
        assert_eq!(ideal_pow(&f, &g.ideal, 3), principal(&f, g.generator));
    }

    #[test]
    fn class_map_is_a_homomorphism() {
        for d in [5, 14, 23] {
            let f = QuadField::new(d).unwrap();
            let cg = ClassGroup::compute(&f, None);
            let ideals = enumerate_ideals(&f, 40);
            for i in &ideals {
                for j in &ideals {
                    let lhs = cg.class_of(&ideal_mul(&f, i, j));
                    assert_eq!(lhs, cg.add(&cg.class_of(i), &cg.class_of(j)));
                }
            }
            for u in f.enumerate_ball(50) {
                assert_eq!(cg.class_of(&principal(&f, u)), cg.zero());
            }
        }
    }

    #[test]
    fn ideals_in_class_match_filter() {
        for d in [1, 5, 23] {
            let f = QuadField::new(d).unwrap();
            let cg = ClassGroup::compute(&f, None);
            let all = enumerate_ideals(&f, 60);
            for i in all.iter().take(8) {
                let target = cg.class_of(i);
                let mut expected: Vec<IdealHnf> = all.iter().filter(|j| cg.class_of(j) == target).copied().collect();
                expected.sort_by_key(|j| (j.norm(), *j));
                assert_eq!(cg.ideals_in_class(i, 60), expected, "d = {d}, I = {i}");
            }
        }
        let f5 = QuadField::new(5).unwrap();
        let cg = ClassGroup::compute(&f5, None);
        let p2 = ideal_from_generators(&f5, &[QuadInt::int(2), QuadInt::new(1, 1)]).unwrap();
        let norms: Vec<i128> = cg.ideals_in_class(&p2, 3).iter().map(|j| j.norm()).collect();
        assert_eq!(norms, vec![2, 3, 3]);
        assert!(cg.ideals_in_class(&p2, 1).is_empty());
    }
}
