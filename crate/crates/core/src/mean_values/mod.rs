//! Mean values of multiplicative functions: ball and grid averages, Euler
//! products and Halász-type predictions, prime sums, and concentration.

mod concentration;
mod euler;
mod prime_sums;

pub use concentration::{
    classify, concentration_check, turan_kubilius_check, ClassifyOptions, ConcentrationInput, ConcentrationReport,
    PhaseModel, TkReport, Verdict,
};
pub use euler::{
    c27_predict, class_densities, dirichlet_series_partial, euler_factor_exact, euler_product_partial,
    halasz_prediction, ideal_sum, residue_estimate, C27Options, C27Outcome, C27Verdict, HalaszReport,
};
pub use prime_sums::{prime_sums_report, PrimeSums};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ideal_arith::prime_ideals_up_to;
use crate::ideal_arith::walk_ideals;
use crate::mult_funcs::{ElementFn, IdealFn};
use crate::quad_ring::{QuadField, QuadInt};

/// Elements per parallel work unit; fixed so that summation order never depends on the thread count.
pub(crate) const CHUNK: usize = 4096;

/// `{10^3, 3*10^3, 10^4, 3*10^4, 10^5}`
pub const DEFAULT_CHECKPOINTS: [u64; 5] = [1_000, 3_000, 10_000, 30_000, 100_000];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Elements,
    Ideals,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub count: u64,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageReport {
    pub function: String,
    pub domain: Domain,
    pub final_n: u64,
    pub checkpoints: Vec<Checkpoint>,
}

impl AverageReport {
    pub fn last(&self) -> Complex64 {
        self.checkpoints.last().map_or(Complex64::new(0.0, 0.0), |c| c.value)
    }
}

/// Sorted, deduplicated checkpoints not exceeding `n`, with `n` itself appended.
fn ladder(n: u64, checkpoints: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = checkpoints.iter().copied().filter(|&c| c >= 1 && c < n).collect();
    out.push(n);
    out.sort_unstable();
    out.dedup();
    out
}

/// Running averages of `(norm, value)` pairs sorted by norm.
fn running_averages(values: &[(i128, Complex64)], ladder: &[u64]) -> Vec<Checkpoint> {
    let mut out = Vec::with_capacity(ladder.len());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut idx = 0;
    for &n in ladder {
        while idx < values.len() && values[idx].0 <= n as i128 {
            sum += values[idx].1;
            idx += 1;
        }
        let value = if idx == 0 { Complex64::new(0.0, 0.0) } else { sum / idx as f64 };
        out.push(Checkpoint { n, count: idx as u64, value });
    }
    out
}

/// Averages of `g` over nonzero elements of norm at most each checkpoint.
pub fn ball_average_elements(field: &QuadField, g: &ElementFn, n: u64, checkpoints: &[u64]) -> AverageReport {
    let ball = field.ball_with_norms(n);
    let values: Vec<(i128, Complex64)> = ball.par_iter().map(|&(m, u)| (m, g.eval(field, u))).collect();
    AverageReport {
        function: g.id(),
        domain: Domain::Elements,
        final_n: n,
        checkpoints: running_averages(&values, &ladder(n, checkpoints)),
    }
}

/// `g(I)` for every nonzero ideal of norm at most `x`, sorted by norm.
pub(crate) fn ideal_values(field: &QuadField, g: &IdealFn, x: u64) -> Vec<(i128, Complex64)> {
    let primes = prime_ideals_up_to(field, x);
    let table: Vec<Vec<Complex64>> = primes
        .par_iter()
        .map(|q| {
            let mut vals = vec![Complex64::new(0.0, 0.0)];
            let mut m = q.norm();
            let mut k = 1;
            while m <= x as i128 {
                vals.push(g.prime_power(q, k));
                m *= q.norm();
                k += 1;
            }
            vals
        })
        .collect();
    let mut out = Vec::new();
    walk_ideals(
        &primes,
        x,
        Complex64::new(1.0, 0.0),
        &|s: &Complex64, idx, k| s * table[idx][k as usize],
        &mut |norm, s, _| out.push((norm, *s)),
    );
    out.sort_by_key(|e| e.0);
    out
}

/// Averages of `g` over nonzero ideals of norm at most each checkpoint.
pub fn ball_average_ideals(field: &QuadField, g: &IdealFn, x: u64, checkpoints: &[u64]) -> AverageReport {
    let values = ideal_values(field, g, x);
    AverageReport {
        function: g.id(),
        domain: Domain::Ideals,
        final_n: x,
        checkpoints: running_averages(&values, &ladder(x, checkpoints)),
    }
}

/// The grid `{(a1 m + b1) + (a2 n + b2) tau}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridAp {
    pub a1: i128,
    pub b1: i128,
    pub a2: i128,
    pub b2: i128,
}

impl GridAp {
    pub const FULL: GridAp = GridAp { a1: 1, b1: 0, a2: 1, b2: 0 };

    pub fn new(a1: i128, b1: i128, a2: i128, b2: i128) -> Option<GridAp> {
        (a1 >= 1 && a2 >= 1).then_some(GridAp { a1, b1, a2, b2 })
    }

    pub fn contains(&self, u: QuadInt) -> bool {
        (u.x - self.b1).rem_euclid(self.a1) == 0 && (u.y - self.b2).rem_euclid(self.a2) == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAverage {
    pub grid: GridAp,
    pub value: Complex64,
    pub count: u64,
    /// No element of the grid lies in the ball; `value` is then 0.
    pub empty: bool,
}

/// Average of `g` over nonzero grid elements of norm at most `n`.
pub fn grid_average(field: &QuadField, g: &ElementFn, grid: GridAp, n: u64) -> GridAverage {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0u64;
    for (_, u) in field.ball_with_norms(n) {
        if grid.contains(u) {
            sum += g.eval(field, u);
            count += 1;
        }
    }
    let value = if count == 0 { sum } else { sum / count as f64 };
    GridAverage { grid, value, count, empty: count == 0 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub max_abs: f64,
    pub argmax: GridAp,
    pub grids: Vec<GridAverage>,
}

/// All grids with `1 <= a_i <= A`, `0 <= b_i < a_i`, in `(a1, b1, a2, b2)` order.
pub fn grids_up_to(coeff_bound: i128) -> Vec<GridAp> {
    let mut out = Vec::new();
    for a1 in 1..=coeff_bound {
        for b1 in 0..a1 {
            for a2 in 1..=coeff_bound {
                for b2 in 0..a2 {
                    out.push(GridAp { a1, b1, a2, b2 });
                }
            }
        }
    }
    out
}

/// Largest `|grid_average|` over all grids with coefficients up to `A`; ties go to the first grid.
pub fn aperiodicity_scan(field: &QuadField, g: &ElementFn, coeff_bound: i128, n: u64) -> ScanReport {
    let grids = grids_up_to(coeff_bound.max(1));
    let ball = field.ball_with_norms(n);
    let partials: Vec<(Vec<Complex64>, Vec<u64>)> = ball
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut sums = vec![Complex64::new(0.0, 0.0); grids.len()];
            let mut counts = vec![0u64; grids.len()];
            for &(_, u) in chunk {
                let v = g.eval(field, u);
                for (k, grid) in grids.iter().enumerate() {
                    if grid.contains(u) {
                        sums[k] += v;
                        counts[k] += 1;
                    }
                }
            }
            (sums, counts)
        })
        .collect();
    let mut sums = vec![Complex64::new(0.0, 0.0); grids.len()];
    let mut counts = vec![0u64; grids.len()];
    for (s, c) in partials {
        for k in 0..grids.len() {
            sums[k] += s[k];
            counts[k] += c[k];
        }
    }
    let averages: Vec<GridAverage> = grids
        .iter()
        .zip(sums.iter().zip(&counts))
        .map(|(&grid, (&s, &c))| GridAverage {
            grid,
            value: if c == 0 { s } else { s / c as f64 },
            count: c,
            empty: c == 0,
        })
        .collect();
    let mut best = 0;
    for (k, a) in averages.iter().enumerate() {
        if a.value.norm() > averages[best].value.norm() {
            best = k;
        }
    }
    ScanReport { max_abs: averages[best].value.norm(), argmax: averages[best].grid, grids: averages }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_arith::principal;
    use crate::mult_funcs::dirichlet_characters;

    #[test]
    fn constant_function_averages_to_one() {
        let f = QuadField::new(7).unwrap();
        let r = ball_average_elements(&f, &ElementFn::One, 5000, &[100, 1000]);
        assert_eq!(r.checkpoints.iter().map(|c| c.n).collect::<Vec<_>>(), vec![100, 1000, 5000]);
        for c in &r.checkpoints {
            assert!((c.value - 1.0).norm() < 1e-12);
        }
        let r = ball_average_ideals(&f, &IdealFn::One, 5000, &DEFAULT_CHECKPOINTS);
        assert!((r.last() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn full_grid_matches_ball() {
        let f = QuadField::new(3).unwrap();
        let g = ElementFn::Angular(1).times(ElementFn::Archimedean(0.5));
        for n in [50, 700, 3000] {
            let ball = ball_average_elements(&f, &g, n, &[]).last();
            let grid = grid_average(&f, &g, GridAp::FULL, n);
            assert!((ball - grid.value).norm() < 1e-12);
        }
    }

    #[test]
    fn angular_average_cancels() {
        let f = QuadField::new(1).unwrap();
        let r = ball_average_elements(&f, &ElementFn::Angular(1), 100_000, &DEFAULT_CHECKPOINTS);
        assert!(r.last().norm() < 0.05);
        for grid in [GridAp::new(1, 0, 1, 0).unwrap(), GridAp::FULL] {
            assert!(grid_average(&f, &ElementFn::Angular(1), grid, 100_000).value.norm() < 0.05);
        }
    }

    #[test]
    fn unit_twist_annihilates_ball_averages() {
        let f = QuadField::new(1).unwrap();
        let twist = ElementFn::custom("unit_twist", true, |f, u| {
            let z = f.embed(u);
            z / z.norm()
        });
        let r = ball_average_elements(&f, &twist, 20_000, &DEFAULT_CHECKPOINTS);
        for c in &r.checkpoints {
            assert!(c.value.norm() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn residue_grid_isolates_character() {
        let f = QuadField::new(1).unwrap();
        let chi = dirichlet_characters(&f, &principal(&f, QuadInt::int(2))).unwrap()[1].modify().unwrap();
        let g = ElementFn::Character(chi);
        let odd_even = grid_average(&f, &g, GridAp::new(2, 1, 2, 0).unwrap(), 10_000);
        assert!((odd_even.value - 1.0).norm() < 1e-12);
        let empty = grid_average(&f, &g, GridAp::new(1000, 500, 1000, 500).unwrap(), 10);
        assert!(empty.empty && empty.value == Complex64::new(0.0, 0.0));
    }

    #[test]
    fn scan_of_constant_peaks_at_full_grid() {
        let f = QuadField::new(2).unwrap();
        let s = aperiodicity_scan(&f, &ElementFn::One, 3, 2000);
        assert_eq!(s.argmax, GridAp::FULL);
        assert!((s.max_abs - 1.0).abs() < 1e-12);
        assert_eq!(s.grids.len(), 36);
    }
}
