use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{extensions_of, unit_group_mod, ElementFn, IdealFn};
use crate::error::{Error, Result};
use crate::ideal_arith::{principal, ClassGroup};
use crate::quad_ring::QuadInt;

/// A serializable description of a multiplicative function, tagged by `kind`.
///
/// Element kinds (`angular`, `character`) have no direct ideal form; wrap them
/// in `extension`. Ideal kinds used on elements act through `u -> g((u))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FnSpec {
    One,
    /// `N(u)^{i tau}` on elements, `N(I)^{i tau}` on ideals.
    Archimedean {
        tau: f64,
    },
    Angular {
        k: i64,
    },
    /// Character modulo the ideal generated by `modulus`, labelled as in the
    /// cyclic decomposition of the unit group.
    Character {
        modulus: [i64; 2],
        label: Vec<u32>,
        #[serde(default)]
        modified: bool,
    },
    DeadFactor,
    SplitSign,
    UnitIndicator,
    /// The extension with index `choice` (lexicographic root choices).
    Extension {
        of: Box<FnSpec>,
        #[serde(default)]
        choice: usize,
    },
    Product {
        factors: Vec<FnSpec>,
    },
    Conj {
        of: Box<FnSpec>,
    },
}

impl FnSpec {
    /// Parses a JSON description or a bare kind name such as `one`.
    pub fn parse(text: &str) -> Result<FnSpec> {
        let text = text.trim();
        let json = if text.starts_with('{') { text.to_string() } else { format!(r#"{{"kind":"{text}"}}"#) };
        serde_json::from_str(&json).map_err(|e| Error::PreconditionError(format!("function spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs serialize")
    }

    pub fn element(&self, cg: &Arc<ClassGroup>) -> Result<ElementFn> {
        let field = cg.field();
        Ok(match self {
            FnSpec::One => ElementFn::One,
            FnSpec::Archimedean { tau } => ElementFn::Archimedean(*tau),
            FnSpec::Angular { k } => ElementFn::Angular(*k),
            FnSpec::Character { modulus, label, modified } => {
                let gen = QuadInt::new(modulus[0] as i128, modulus[1] as i128);
                if gen.is_zero() {
                    return Err(Error::ZeroIdeal);
                }
                let group = unit_group_mod(field, &principal(field, gen))?;
                let orders = group.orders();
                if label.len() != orders.len() || label.iter().zip(&orders).any(|(k, o)| k >= o) {
                    return Err(Error::PreconditionError(format!(
                        "character label {label:?} must fit the cyclic orders {orders:?}"
                    )));
                }
                let chi = group.character(label);
                ElementFn::Character(if *modified { chi.modify()? } else { chi })
            }
            FnSpec::Product { factors } => {
                ElementFn::Product(factors.iter().map(|s| s.element(cg)).collect::<Result<_>>()?)
            }
            FnSpec::Conj { of } => of.element(cg)?.conj(),
            FnSpec::DeadFactor | FnSpec::SplitSign | FnSpec::UnitIndicator | FnSpec::Extension { .. } => {
                ElementFn::FromIdeal(self.ideal(cg)?)
            }
        })
    }

    pub fn ideal(&self, cg: &Arc<ClassGroup>) -> Result<IdealFn> {
        Ok(match self {
            FnSpec::One => IdealFn::One,
            FnSpec::Archimedean { tau } => IdealFn::NormPower(*tau),
            FnSpec::DeadFactor => IdealFn::dead_factor(),
            FnSpec::SplitSign => IdealFn::split_sign(),
            FnSpec::UnitIndicator => IdealFn::unit_indicator(),
            FnSpec::Extension { of, choice } => {
                let all = extensions_of(cg, &of.element(cg)?)?;
                let count = all.len();
                all.into_iter()
                    .nth(*choice)
                    .ok_or_else(|| Error::PreconditionError(format!("extension choice {choice} < h = {count}")))?
            }
            FnSpec::Product { factors } => {
                IdealFn::Product(factors.iter().map(|s| s.ideal(cg)).collect::<Result<_>>()?)
            }
            FnSpec::Conj { of } => of.ideal(cg)?.conj(),
            FnSpec::Angular { .. } | FnSpec::Character { .. } => {
                return Err(Error::PreconditionError(format!(
                    "{} is defined on elements; wrap it in an extension",
                    self.to_json()
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_arith::principal;
    use crate::quad_ring::QuadField;
    use num_complex::Complex64;

    fn group(d: i64) -> Arc<ClassGroup> {
        Arc::new(ClassGroup::compute(&QuadField::new(d).unwrap(), None))
    }

    #[test]
    fn bare_names_and_round_trip() {
        assert_eq!(FnSpec::parse("one").unwrap(), FnSpec::One);
        assert_eq!(FnSpec::parse(" split_sign ").unwrap(), FnSpec::SplitSign);
        assert!(FnSpec::parse("archimedean").is_err());
        let s = FnSpec::Product {
            factors: vec![
                FnSpec::Archimedean { tau: 0.5 },
                FnSpec::Conj { of: Box::new(FnSpec::Character { modulus: [3, 0], label: vec![1], modified: true }) },
            ],
        };
        assert_eq!(FnSpec::parse(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn builds_functions() {
        let cg = group(1);
        let f = cg.field();
        let chi = FnSpec::parse(r#"{"kind":"character","modulus":[3,0],"label":[2],"modified":true}"#).unwrap();
        let g = chi.element(&cg).unwrap();
        assert!(g.is_unimodular());
        assert_eq!(g.eval(f, QuadInt::int(3)), Complex64::new(1.0, 0.0));
        assert!(FnSpec::Character { modulus: [3, 0], label: vec![9], modified: false }.element(&cg).is_err());
        let ext = FnSpec::Extension { of: Box::new(FnSpec::Angular { k: 1 }), choice: 0 };
        let e = ext.ideal(&cg).unwrap();
        let u = QuadInt::new(2, 1);
        assert!((e.eval(f, &principal(f, u)) - ElementFn::Angular(1).eval(f, u)).norm() < 1e-12);
        assert!(FnSpec::Extension { of: Box::new(FnSpec::One), choice: 1 }.ideal(&cg).is_err());
        assert!(FnSpec::Angular { k: 1 }.ideal(&cg).is_err());
    }

    #[test]
    fn class_number_two_extensions() {
        let cg = group(5);
        for choice in 0..2 {
            let spec = FnSpec::Extension { of: Box::new(FnSpec::One), choice };
            assert!(spec.ideal(&cg).is_ok());
        }
    }
}
