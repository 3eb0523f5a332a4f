//! Construction specs: the JSON-compatible documents from which rings,
//! morphisms, and derivations are built. A ring-spec document carries the
//! carrier description plus optional morphism and derivation lists, and
//! round-trips through serde.

use crate::derivation::SigmaDerivation;
use crate::error::BuildError;
use crate::morphism::{MorphismKind, RingMorphism};
use crate::ring::{
    self, RingInstance, DEFAULT_ORDER_CAP,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum RingSpec {
    /// Explicit Cayley tables.
    Tables {
        names: Vec<String>,
        add: Vec<Vec<u16>>,
        mul: Vec<Vec<u16>>,
    },
    Zmod { n: u32 },
    DirectProduct { factors: Vec<RingSpec> },
    /// Constant-diagonal upper triangular 2x2 matrices over Z/nZ.
    Triangular2 { n: u32 },
    /// Z2[x], structured-infinite.
    PolyMod2,
    /// [[a,t],[0,a]] with integer a, rational t, structured-infinite.
    IntRatTriangular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum MorphismSpec {
    Identity,
    Table { map: Vec<u16> },
    Swap,
    NegateOffdiag,
    HalveOffdiag,
    EvalAtZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum DerivationSpec {
    Zero,
    Table { map: Vec<u16> },
    /// `a -> c*a - s(a)*c`; `c` is an element in its textual form.
    Inner { c: String },
}

/// The on-disk ring document: carrier spec plus morphism/derivation lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingSpecDoc {
    #[serde(flatten)]
    pub ring: RingSpec,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub derivations: Vec<DerivationSpec>,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub order_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { order_cap: DEFAULT_ORDER_CAP }
    }
}

/// Builds a ring instance from its construction spec. Finite carriers are
/// capped at `opts.order_cap` elements.
pub fn build_ring(spec: &RingSpec, opts: &BuildOptions) -> Result<RingInstance, BuildError> {
    let inst = match spec {
        RingSpec::Tables { names, add, mul } => {
            let n = names.len();
            let flat = |rows: &Vec<Vec<u16>>, what: &str| -> Result<Vec<u16>, BuildError> {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(BuildError::UnsupportedSpec(format!(
                        "{what} table is not {n}x{n}"
                    )));
                }
                Ok(rows.iter().flatten().copied().collect())
            };
            ring::from_raw_tables(
                "tables",
                names.clone(),
                flat(add, "addition")?,
                flat(mul, "multiplication")?,
            )?
        }
        RingSpec::Zmod { n } => ring::zmod(*n)?,
        RingSpec::DirectProduct { factors } => {
            let built = factors
                .iter()
                .map(|f| build_ring(f, opts))
                .collect::<Result<Vec<_>, _>>()?;
            ring::direct_product(built)?
        }
        RingSpec::Triangular2 { n } => ring::triangular2(*n)?,
        RingSpec::PolyMod2 => ring::poly_mod2(),
        RingSpec::IntRatTriangular => ring::int_rat_triangular(),
    };
    if let Some(order) = inst.order() {
        if order > opts.order_cap {
            return Err(BuildError::OrderCapExceeded { order, cap: opts.order_cap });
        }
    }
    Ok(inst)
}

pub fn build_morphism(
    ring: &RingInstance,
    spec: &MorphismSpec,
) -> Result<RingMorphism, BuildError> {
    match spec {
        MorphismSpec::Identity => Ok(RingMorphism::identity(ring)),
        MorphismSpec::Table { map } => RingMorphism::from_table(ring, map.clone(), "table"),
        MorphismSpec::Swap => RingMorphism::from_program(ring, MorphismKind::Swap, "swap"),
        MorphismSpec::NegateOffdiag => {
            RingMorphism::from_program(ring, MorphismKind::NegateOffdiag, "negate-offdiag")
        }
        MorphismSpec::HalveOffdiag => {
            RingMorphism::from_program(ring, MorphismKind::HalveOffdiag, "halve-offdiag")
        }
        MorphismSpec::EvalAtZero => {
            RingMorphism::from_program(ring, MorphismKind::EvalAtZero, "eval-at-zero")
        }
    }
}

pub fn build_derivation(
    ring: &RingInstance,
    sigma: &RingMorphism,
    spec: &DerivationSpec,
) -> Result<SigmaDerivation, BuildError> {
    match spec {
        DerivationSpec::Zero => Ok(SigmaDerivation::zero(ring)),
        DerivationSpec::Table { map } => {
            SigmaDerivation::from_table(ring, sigma, map.clone(), "table")
        }
        DerivationSpec::Inner { c } => {
            let c = ring.parse_elem(c)?;
            SigmaDerivation::inner(ring, sigma, &c)
        }
    }
}

/// Builds the full document: the ring, every listed morphism, and every
/// listed derivation (validated against the first morphism, or the identity
/// when the list is empty).
pub struct BuiltDoc {
    pub ring: Arc<RingInstance>,
    pub morphisms: Vec<Arc<RingMorphism>>,
    pub derivations: Vec<Arc<SigmaDerivation>>,
}

pub fn build_doc(doc: &RingSpecDoc, opts: &BuildOptions) -> Result<BuiltDoc, BuildError> {
    let ring = Arc::new(build_ring(&doc.ring, opts)?);
    let mut morphisms = Vec::new();
    for m in &doc.morphisms {
        morphisms.push(Arc::new(build_morphism(&ring, m)?));
    }
    let sigma = morphisms
        .first()
        .cloned()
        .unwrap_or_else(|| Arc::new(RingMorphism::identity(&ring)));
    let mut derivations = Vec::new();
    for d in &doc.derivations {
        derivations.push(Arc::new(build_derivation(&ring, &sigma, d)?));
    }
    Ok(BuiltDoc { ring, morphisms, derivations })
}

pub fn parse_doc(text: &str) -> Result<RingSpecDoc, BuildError> {
    serde_json::from_str(text).map_err(|e| BuildError::BadDocument(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spec_documents_round_trip() {
        let docs = [
            r#"{"kind":"zmod","params":{"n":4}}"#,
            r#"{"kind":"triangular2","params":{"n":4},"morphisms":[{"kind":"negate_offdiag"}],"derivations":[{"kind":"zero"},{"kind":"inner","params":{"c":"[0,1]"}}]}"#,
            r#"{"kind":"poly_mod2","morphisms":[{"kind":"eval_at_zero"}]}"#,
            r#"{"kind":"direct_product","params":{"factors":[{"kind":"zmod","params":{"n":2}},{"kind":"zmod","params":{"n":2}}]},"morphisms":[{"kind":"swap"}]}"#,
        ];
        for text in docs {
            let doc = parse_doc(text).unwrap();
            let json = serde_json::to_string(&doc).unwrap();
            let doc2 = parse_doc(&json).unwrap();
            assert_eq!(doc, doc2);
            build_doc(&doc, &BuildOptions::default()).unwrap();
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let spec = RingSpec::Zmod { n: 17 };
        let err = build_ring(&spec, &BuildOptions::default());
        assert!(matches!(err, Err(BuildError::OrderCapExceeded { order: 17, cap: 16 })));
        assert!(build_ring(&spec, &BuildOptions { order_cap: 32 }).is_ok());
    }

    #[test]
    fn explicit_tables_build_the_two_element_field() {
        let doc = parse_doc(
            r#"{"kind":"tables","params":{"names":["0","1"],"add":[[0,1],[1,0]],"mul":[[0,0],[0,1]]}}"#,
        )
        .unwrap();
        let built = build_doc(&doc, &BuildOptions::default()).unwrap();
        assert_eq!(built.ring.order(), Some(2));
    }
}
