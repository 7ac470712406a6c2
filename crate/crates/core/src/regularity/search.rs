use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::forms::{Pair, ParamSolution};
use crate::error::{Error, Result};
use crate::ideal_arith::principal;
use crate::quad_ring::{QuadField, QuadInt};

/// A finite coloring of the nonzero elements, loadable from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coloring {
    Constant,
    /// Residue class modulo the ideal generated by `modulus`.
    Residue {
        modulus: [i64; 2],
    },
    /// Valuation at the prime element `prime`, reduced modulo `colors`.
    Valuation {
        prime: [i64; 2],
        colors: u32,
    },
    /// `N(u) mod modulus`
    NormMod {
        modulus: u64,
    },
    /// Seeded hash of the coordinates into `colors` classes.
    Hash {
        seed: u64,
        colors: u32,
    },
}

fn element(c: [i64; 2]) -> QuadInt {
    QuadInt::new(c[0] as i128, c[1] as i128)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Coloring {
    pub fn from_json(text: &str) -> Result<Coloring> {
        let c: Coloring = serde_json::from_str(text).map_err(|e| Error::PreconditionError(format!("coloring: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = match self {
            Coloring::Residue { modulus } => *modulus == [0, 0],
            Coloring::Valuation { prime, colors } => *prime == [0, 0] || *colors == 0,
            Coloring::NormMod { modulus } => *modulus == 0,
            Coloring::Hash { colors, .. } => *colors == 0,
            Coloring::Constant => false,
        };
        if bad {
            return Err(Error::PreconditionError(format!("invalid coloring {self:?}")));
        }
        Ok(())
    }

    pub fn color(&self, field: &QuadField, u: QuadInt) -> u64 {
        match self {
            Coloring::Constant => 0,
            Coloring::Residue { modulus } => principal(field, element(*modulus)).residue_index(u) as u64,
            Coloring::Valuation { prime, colors } => {
                let prime = element(*prime);
                if u.is_zero() || field.is_unit(prime) {
                    return 0;
                }
                let mut v = 0u64;
                let mut rest = u;
                while let Ok(q) = field.divide_exact(rest, prime) {
                    rest = q;
                    v += 1;
                }
                v % *colors as u64
            }
            Coloring::NormMod { modulus } => (field.norm(u) as u64) % modulus,
            Coloring::Hash { seed, colors } => {
                let h = splitmix64(seed ^ splitmix64(u.x as u64 ^ splitmix64(u.y as u64)));
                h % *colors as u64
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Found {
    pub k: QuadInt,
    pub m: QuadInt,
    pub n: QuadInt,
    pub triple: [QuadInt; 3],
    pub color: u64,
}

/// Parameter tuples `(k, m, n)` with coordinates in `[-h, h]` and at least one equal to `±h`,
/// in lexicographic coordinate order.
fn shell(h: i128, mut visit: impl FnMut([i128; 6]) -> bool) -> bool {
    let mut c = [-h; 6];
    loop {
        if c.iter().any(|v| v.abs() == h) && !visit(c) {
            return false;
        }
        let mut i = 5;
        loop {
            if c[i] < h {
                c[i] += 1;
                break;
            }
            c[i] = -h;
            if i == 0 {
                return true;
            }
            i -= 1;
        }
    }
}

/// Solutions from the family `sol` whose designated pair is monochromatic, with `x, y, z`
/// nonzero and pairwise distinct. Searches parameters by increasing coordinate size and
/// stops after `limit` distinct triples.
pub fn monochromatic_search(sol: &ParamSolution, coloring: &Coloring, bound: i128, limit: usize) -> Vec<Found> {
    let field = &sol.field;
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    if limit == 0 {
        return found;
    }
    for h in 1..=bound {
        let finished = !shell(h, |c| {
            let (k, m, n) = (QuadInt::new(c[0], c[1]), QuadInt::new(c[2], c[3]), QuadInt::new(c[4], c[5]));
            let t = sol.triple(k, m, n);
            let [x, y, z] = t;
            if x.is_zero() || y.is_zero() || z.is_zero() || x == y || y == z || x == z {
                return true;
            }
            let (p, s) = match sol.pair {
                Pair::XY => (x, y),
                Pair::XZ => (x, z),
                Pair::YZ => (y, z),
            };
            let color = coloring.color(field, p);
            if color != coloring.color(field, s) || !sol.form.eval(field, x, y, z).is_zero() {
                return true;
            }
            if seen.insert(t) {
                found.push(Found { k, m, n, triple: t, color });
            }
            found.len() < limit
        });
        if finished {
            break;
        }
    }
    found
}
