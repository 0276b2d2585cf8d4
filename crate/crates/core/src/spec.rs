//! JSON spec files for algebras and modules.
//!
//! Scalars are strings (`"1/2"`), polynomials are ascending coefficient
//! arrays (`["1/2", "1"]` is `∂ + 1/2`). Unknown fields are rejected and
//! omitted products or actions are zero.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{build_standard_algebra, ConformalAlgebra, Generator, StandardKind};
use crate::arith::{DPoly, Scalar};
use crate::element::{Parity, PolyVec};
use crate::error::{Error, Result};
use crate::lie::LieSuperData;
use crate::module::{CarrierBasis, ConformalModule, ModuleCarrier};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenTerm {
    pub gen: String,
    pub poly: DPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub left: String,
    pub right: String,
    pub n: u32,
    pub value: Vec<GenTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub products: Vec<ProductSpec>,
}

/// A builtin algebra name such as `"virasoro"` or `"current(osp12)"`, or an
/// inline algebra spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Builtin(String),
    Inline(AlgebraSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "DPoly::is_zero")]
    pub torsion: DPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisTerm {
    pub basis: String,
    pub poly: DPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub gen: String,
    pub n: u32,
    pub basis: String,
    pub value: Vec<BasisTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: AlgebraRef,
    pub basis: Vec<BasisSpec>,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecFile {
    Algebra(ConformalAlgebra),
    Module(ConformalModule),
}

/// `kind` or `kind(g)` for the six standard algebras; `g` defaults to sl2.
pub fn builtin_algebra(name: &str) -> Result<ConformalAlgebra> {
    let (kind, g) = match name.split_once('(') {
        Some((k, rest)) => {
            let g = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Spec(format!("bad builtin algebra name {name:?}")))?;
            (k, Some(g))
        }
        None => (name, None),
    };
    let kind: StandardKind = kind.parse()?;
    let lie = match (kind.needs_lie_data(), g) {
        (true, g) => Some(LieSuperData::by_name(g.unwrap_or("sl2"))?),
        (false, None) => None,
        (false, Some(_)) => return Err(Error::Spec(format!("{kind} takes no Lie superalgebra"))),
    };
    build_standard_algebra(kind, lie.as_ref())
}

fn gen_terms(alg: &ConformalAlgebra, v: &PolyVec) -> Vec<GenTerm> {
    let names = alg.names();
    v.terms()
        .map(|(i, p)| GenTerm { gen: names[i].clone(), poly: p.clone() })
        .collect()
}

impl AlgebraSpec {
    pub fn from_algebra(alg: &ConformalAlgebra) -> Self {
        let names = alg.names();
        AlgebraSpec {
            name: alg.name.clone(),
            generators: alg
                .generators()
                .iter()
                .map(|g| GeneratorSpec { name: g.name.clone(), parity: g.parity, weight: g.weight.clone() })
                .collect(),
            products: alg
                .entries()
                .map(|(i, j, n, v)| ProductSpec {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    n,
                    value: gen_terms(alg, v),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<ConformalAlgebra> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(&g.name, g.parity, g.weight.clone()))
            .collect::<Vec<_>>();
        for (k, g) in gens.iter().enumerate() {
            if gens[..k].iter().any(|h| h.name == g.name) {
                return Err(Error::Spec(format!("duplicate generator {:?}", g.name)));
            }
        }
        let mut alg = ConformalAlgebra::new(&self.name, gens);
        for p in &self.products {
            let (i, j) = (alg.index_of(&p.left)?, alg.index_of(&p.right)?);
            if alg.product_ref(i, j, p.n).is_some() {
                return Err(Error::Spec(format!("product {}_({}){} given twice", p.left, p.n, p.right)));
            }
            let mut v = PolyVec::zero();
            for t in &p.value {
                v.add_term(alg.index_of(&t.gen)?, &t.poly);
            }
            alg.set_product(i, j, p.n, v)?;
        }
        Ok(alg)
    }
}

impl ModuleSpec {
    /// Builtin algebras are referenced by name, anything else is inlined.
    pub fn from_module(m: &ConformalModule) -> Self {
        let alg = m.algebra();
        let algebra = match builtin_algebra(&alg.name) {
            Ok(b) if b == *alg => AlgebraRef::Builtin(alg.name.clone()),
            _ => AlgebraRef::Inline(AlgebraSpec::from_algebra(alg)),
        };
        let bnames = m.names();
        let gnames = alg.names();
        ModuleSpec {
            name: Some(m.name.clone()),
            algebra,
            basis: m
                .carrier()
                .basis()
                .iter()
                .map(|b| BasisSpec { name: b.name.clone(), parity: b.parity, torsion: b.torsion.clone() })
                .collect(),
            actions: m
                .entries()
                .map(|(i, b, n, v)| ActionSpec {
                    gen: gnames[i].clone(),
                    n,
                    basis: bnames[b].clone(),
                    value: v.terms().map(|(k, p)| BasisTerm { basis: bnames[k].clone(), poly: p.clone() }).collect(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<ConformalModule> {
        let alg = match &self.algebra {
            AlgebraRef::Builtin(name) => builtin_algebra(name)?,
            AlgebraRef::Inline(spec) => spec.build()?,
        };
        let basis = self
            .basis
            .iter()
            .map(|b| CarrierBasis { name: b.name.clone(), parity: b.parity, torsion: b.torsion.clone() })
            .collect();
        let carrier = ModuleCarrier::new(basis)?;
        let name = self.name.clone().unwrap_or_else(|| "module".into());
        let mut m = ConformalModule::new(&name, alg, carrier);
        let mut seen = std::collections::BTreeSet::new();
        for a in &self.actions {
            let (i, b) = (m.algebra().index_of(&a.gen)?, m.basis_index(&a.basis)?);
            if !seen.insert((i, b, a.n)) {
                return Err(Error::Spec(format!("action {}_({}){} given twice", a.gen, a.n, a.basis)));
            }
            let mut v = PolyVec::zero();
            for t in &a.value {
                v.add_term(m.basis_index(&t.basis)?, &t.poly);
            }
            m.set_action(i, b, a.n, v)?;
        }
        Ok(m)
    }
}

pub fn algebra_to_json(alg: &ConformalAlgebra) -> Value {
    serde_json::to_value(AlgebraSpec::from_algebra(alg)).expect("serializable")
}

pub fn module_to_json(m: &ConformalModule) -> Value {
    serde_json::to_value(ModuleSpec::from_module(m)).expect("serializable")
}

/// Parses spec text; a document with `generators` is an algebra, one with
/// `basis` a module.
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Spec("spec must be a JSON object".into()))?;
    if obj.contains_key("generators") {
        let spec: AlgebraSpec = serde_json::from_value(value).map_err(|e| Error::Spec(e.to_string()))?;
        Ok(SpecFile::Algebra(spec.build()?))
    } else if obj.contains_key("basis") {
        let spec: ModuleSpec = serde_json::from_value(value).map_err(|e| Error::Spec(e.to_string()))?;
        Ok(SpecFile::Module(spec.build()?))
    } else {
        Err(Error::Spec("spec needs either \"generators\" or \"basis\"".into()))
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<SpecFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

/// An algebra by builtin name or from a spec file.
pub fn resolve_algebra(name_or_path: &str) -> Result<ConformalAlgebra> {
    match builtin_algebra(name_or_path) {
        Ok(a) => Ok(a),
        Err(e) if !Path::new(name_or_path).exists() => Err(e),
        Err(_) => match load_spec(name_or_path)? {
            SpecFile::Algebra(a) => Ok(a),
            SpecFile::Module(_) => Err(Error::Spec(format!("{name_or_path} is a module spec"))),
        },
    }
}

pub fn scalar_param(params: &[(String, Scalar)], key: &str) -> Option<Scalar> {
    params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_virasoro() {
        let a = builtin_algebra("virasoro").unwrap();
        assert_eq!(a.product(0, 0, 0), PolyVec::term(0, DPoly::d()));
        assert_eq!(a.product(0, 0, 1), PolyVec::term(0, DPoly::from_ints(&[2])));
        assert!(builtin_algebra("current(osp12)").is_ok());
        assert!(builtin_algebra("virasoro(sl2)").is_err());
        assert!(builtin_algebra("nope").is_err());
    }

    #[test]
    fn round_trip_builtins() {
        for kind in StandardKind::ALL {
            let a = builtin_algebra(kind.name()).unwrap();
            let text = serde_json::to_string_pretty(&algebra_to_json(&a)).unwrap();
            let SpecFile::Algebra(b) = parse_spec(&text).unwrap() else { panic!() };
            assert_eq!(a, b);
            assert_eq!(text, serde_json::to_string_pretty(&algebra_to_json(&b)).unwrap());
        }
    }

    #[test]
    fn current_file() {
        let text = r#"{
            "name": "sl2 currents",
            "generators": [{"name": "e", "parity": 0}, {"name": "h", "parity": 0}, {"name": "f", "parity": 0}],
            "products": [
                {"left": "e", "right": "f", "n": 0, "value": [{"gen": "h", "poly": ["1"]}]},
                {"left": "f", "right": "e", "n": 0, "value": [{"gen": "h", "poly": ["-1"]}]},
                {"left": "h", "right": "e", "n": 0, "value": [{"gen": "e", "poly": ["2"]}]},
                {"left": "e", "right": "h", "n": 0, "value": [{"gen": "e", "poly": ["-2"]}]},
                {"left": "h", "right": "f", "n": 0, "value": [{"gen": "f", "poly": ["-2"]}]},
                {"left": "f", "right": "h", "n": 0, "value": [{"gen": "f", "poly": ["2"]}]}
            ]
        }"#;
        let SpecFile::Algebra(a) = parse_spec(text).unwrap() else { panic!() };
        assert!(crate::algebra::check_conformal_axioms(&a).passed());
    }

    #[test]
    fn rejects_bad_specs() {
        let decimal = r#"{"name": "x", "generators": [{"name": "L", "parity": 0}],
            "products": [{"left": "L", "right": "L", "n": 0, "value": [{"gen": "L", "poly": ["0.5"]}]}]}"#;
        let e = parse_spec(decimal).unwrap_err().to_string();
        assert!(e.contains("non-rational literal"), "{e}");
        let extra = r#"{"name": "x", "generators": [{"name": "L", "parity": 0, "spin": 2}]}"#;
        assert!(parse_spec(extra).unwrap_err().to_string().contains("unknown field"));
        let unresolved = r#"{"name": "x", "generators": [{"name": "L", "parity": 0}],
            "products": [{"left": "L", "right": "M", "n": 0, "value": []}]}"#;
        assert!(matches!(parse_spec(unresolved), Err(Error::UnknownGenerator(_))));
        assert!(parse_spec("[]").is_err());
    }

    #[test]
    fn module_round_trip_and_torsion() {
        use crate::module::{build_module_family, check_module_axioms, FamilyParams, ModuleFamily};
        let m = build_module_family(
            ModuleFamily::NsMND,
            &FamilyParams::new().alpha(Scalar::frac(1, 2)).delta(Scalar::from_int(3)),
        )
        .unwrap();
        let text = serde_json::to_string(&module_to_json(&m)).unwrap();
        assert!(text.contains(r#""algebra":"neveu_schwarz""#));
        let SpecFile::Module(b) = parse_spec(&text).unwrap() else { panic!() };
        assert_eq!(m, b);

        let torsion = r#"{"algebra": "virasoro", "basis": [{"name": "v", "parity": 0, "torsion": ["-5", "1"]}],
            "actions": [{"gen": "L", "n": 1, "basis": "v", "value": [{"basis": "v", "poly": ["1"]}]}]}"#;
        let SpecFile::Module(t) = parse_spec(torsion).unwrap() else { panic!() };
        assert!(check_module_axioms(&t).find("torsion").is_some());
        let zero = r#"{"algebra": "virasoro", "basis": [{"name": "v", "parity": 0, "torsion": ["-5", "1"]}]}"#;
        let SpecFile::Module(z) = parse_spec(zero).unwrap() else { panic!() };
        assert!(check_module_axioms(&z).passed());
    }
}
