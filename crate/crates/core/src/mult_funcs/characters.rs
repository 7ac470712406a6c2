use std::collections::{BTreeSet, HashMap};
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::factor;
use crate::error::{Error, Result};
use crate::ideal_arith::{coprime, principal, IdealHnf};
use crate::quad_ring::{QuadField, QuadInt};

/// `(O/I)^x` with an explicit decomposition into cyclic factors.
#[derive(Clone, Debug)]
pub struct UnitGroupMod {
    field: QuadField,
    modulus: IdealHnf,
    elements: Vec<usize>,
    generators: Vec<(usize, u32)>,
    logs: Vec<Option<Vec<u32>>>,
}

/// Decomposes `(O/I)^x` into cyclic groups of prime-power order.
pub fn unit_group_mod(f: &QuadField, i: &IdealHnf) -> Result<UnitGroupMod> {
    if i.is_one() {
        return Err(Error::TrivialModulus);
    }
    let n = i.norm() as usize;
    let elements: Vec<usize> = (1..n).filter(|&r| coprime(&principal(f, i.residue_rep(r)), i)).collect();
    let one = i.residue_index(QuadInt::ONE);
    let mul = |a: usize, b: usize| i.residue_index(f.mul(i.residue_rep(a), i.residue_rep(b)));
    let pow = |a: usize, mut e: u64| {
        let (mut acc, mut base) = (one, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };

    let order = elements.len() as u64;
    let mut generators: Vec<(usize, u32)> = Vec::new();
    for (p, e) in factor(order as u128) {
        let pe = p.pow(e);
        let sylow: BTreeSet<usize> = elements.iter().map(|&g| pow(g, order / pe)).collect();
        // exponent vectors over the basis found so far
        let mut span: HashMap<usize, Vec<u32>> = HashMap::from([(one, Vec::new())]);
        let mut basis: Vec<(usize, u32)> = Vec::new();
        while span.len() < sylow.len() {
            // element of largest order modulo the current span
            let mut best: Option<(usize, u64, usize)> = None;
            for &h in &sylow {
                let (mut cur, mut q) = (h, 1u64);
                while !span.contains_key(&cur) {
                    cur = pow(cur, p);
                    q *= p;
                }
                if best.is_none_or(|(_, bq, _)| q > bq) {
                    best = Some((h, q, cur));
                }
            }
            let (h, q, hq) = best.expect("span is a proper subgroup");
            let mut adjusted = h;
            for (&m, &(g, ord)) in span[&hq].iter().zip(&basis) {
                debug_assert_eq!(m as u64 % q, 0);
                let back = (ord as u64 - (m as u64 / q) % ord as u64) % ord as u64;
                adjusted = mul(adjusted, pow(g, back));
            }
            let mut next = HashMap::with_capacity(span.len() * q as usize);
            for (x, v) in &span {
                let mut cur = *x;
                for j in 0..q as u32 {
                    let mut w = v.clone();
                    w.push(j);
                    next.insert(cur, w);
                    cur = mul(cur, adjusted);
                }
            }
            span = next;
            basis.push((adjusted, q as u32));
        }
        generators.extend(basis);
    }

    let mut logs: Vec<Option<Vec<u32>>> = vec![None; n];
    logs[one] = Some(Vec::new());
    let mut layer: Vec<usize> = vec![one];
    for &(g, ord) in &generators {
        let mut grown = Vec::with_capacity(layer.len() * ord as usize);
        for &x in &layer {
            let base = logs[x].clone().expect("logged");
            let mut cur = x;
            for j in 0..ord {
                let mut v = base.clone();
                v.push(j);
                logs[cur] = Some(v);
                grown.push(cur);
                cur = mul(cur, g);
            }
        }
        layer = grown;
    }
    debug_assert_eq!(layer.len(), elements.len());
    Ok(UnitGroupMod { field: *f, modulus: *i, elements, generators, logs })
}

impl UnitGroupMod {
    pub fn modulus(&self) -> &IdealHnf {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Residue representatives of the units, in residue-index order.
    pub fn elements(&self) -> Vec<QuadInt> {
        self.elements.iter().map(|&r| self.modulus.residue_rep(r)).collect()
    }

    /// Generators of the cyclic factors with their orders.
    pub fn generators(&self) -> Vec<(QuadInt, u32)> {
        self.generators.iter().map(|&(g, o)| (self.modulus.residue_rep(g), o)).collect()
    }

    pub fn orders(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.1).collect()
    }

    /// Discrete logarithm of `u` with respect to the generators, `None` for non-units.
    pub fn log(&self, u: QuadInt) -> Option<&[u32]> {
        self.logs[self.modulus.residue_index(u)].as_deref()
    }

    /// The character with exponent vector `label`: `g_j -> exp(2 pi i label_j / d_j)`.
    pub fn character(&self, label: &[u32]) -> DirichletChar {
        let orders = self.orders();
        assert_eq!(label.len(), orders.len(), "label length must match the decomposition");
        let lcm = orders.iter().fold(1u64, |acc, &o| acc.lcm(&(o as u64)));
        let values: Vec<Complex64> = self
            .logs
            .iter()
            .map(|log| match log {
                None => Complex64::new(0.0, 0.0),
                Some(e) => {
                    let num = e
                        .iter()
                        .zip(label)
                        .zip(&orders)
                        .map(|((&e, &k), &o)| e as u64 * k as u64 * (lcm / o as u64))
                        .sum::<u64>()
                        % lcm;
                    phase_of(num, lcm)
                }
            })
            .collect();
        DirichletChar { modulus: self.modulus, label: label.to_vec(), values: Arc::new(values), modified: false }
    }

    /// All characters, labels in lexicographic order (trivial first).
    pub fn characters(&self) -> Vec<DirichletChar> {
        let mut labels: Vec<Vec<u32>> = vec![Vec::new()];
        for o in self.orders() {
            labels = labels
                .into_iter()
                .flat_map(|l| {
                    (0..o).map(move |k| {
                        let mut v = l.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        labels.iter().map(|l| self.character(l)).collect()
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }
}

fn phase_of(num: u64, den: u64) -> Complex64 {
    // exact values at the quarter turns
    match (4 * num).checked_rem(den) {
        Some(0) => match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        },
        _ => Complex64::from_polar(1.0, TAU * num as f64 / den as f64),
    }
}

/// All Dirichlet characters modulo `I`.
pub fn dirichlet_characters(f: &QuadField, i: &IdealHnf) -> Result<Vec<DirichletChar>> {
    Ok(unit_group_mod(f, i)?.characters())
}

/// A character of `(O/I)^x` lifted to `O`; zero off the units unless modified, where it is one.
#[derive(Clone, Debug)]
pub struct DirichletChar {
    modulus: IdealHnf,
    label: Vec<u32>,
    values: Arc<Vec<Complex64>>,
    modified: bool,
}

impl DirichletChar {
    pub fn modulus(&self) -> &IdealHnf {
        &self.modulus
    }

    pub fn label(&self) -> &[u32] {
        &self.label
    }

    pub fn is_modified(&self) -> bool {
        self.modified
    }

    pub fn is_trivial(&self) -> bool {
        self.label.iter().all(|&k| k == 0)
    }

    pub fn eval(&self, u: QuadInt) -> Complex64 {
        let v = self.values[self.modulus.residue_index(u)];
        if self.modified && v.norm_sqr() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v
        }
    }

    /// Same values on unit residues, one elsewhere.
    pub fn modify(&self) -> Result<DirichletChar> {
        if self.modified {
            return Err(Error::AlreadyModified);
        }
        Ok(DirichletChar { modified: true, ..self.clone() })
    }

    pub fn id(&self) -> String {
        let label: Vec<String> = self.label.iter().map(u32::to_string).collect();
        format!("chi{}[mod {}; {}]", if self.modified { "'" } else { "" }, self.modulus, label.join(","))
    }
}
