//! Verdicts, bounds metadata, and the property vocabulary.
//!
//! Every decision carries its own epistemics. `Holds` is reserved for
//! claims whose full quantifier range was enumerated; anything quantified
//! over polynomials of bounded degree can at best reach `HoldsUpToBound`,
//! and the attached [`Bounds`] says what was actually covered. A scan that
//! was sampled rather than exhausted records a [`SampleInfo`] so the
//! verdict can never be mistaken for a proof.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    HoldsUpToBound,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fails
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::HoldsUpToBound => "holds-up-to-bound",
        })
    }
}

/// Evidence that a scan covered only a seeded pseudorandom slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleInfo {
    /// Size of the full search space that was not exhausted.
    pub space: u128,
    /// Number of points actually visited.
    pub sampled: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Degree cap on quantified polynomials, if any were involved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dmax: Option<u32>,
    /// Degree cap used for hypothesis side conditions when it differs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyp_dmax: Option<u32>,
    /// Size of the search space the bounds describe.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<u128>,
    /// True when every point of that space was visited.
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleInfo>,
    /// Set when element scans over a structured infinite carrier used a
    /// finite sample pool instead of full enumeration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_sample: Option<u64>,
}

impl Bounds {
    pub fn exhaustive_elements() -> Bounds {
        Bounds { exhaustive: true, ..Bounds::default() }
    }

    pub fn sampled_elements(pool: u64) -> Bounds {
        Bounds { exhaustive: false, element_sample: Some(pool), ..Bounds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Ring elements, printed, in the role order of the defining law.
    Elements { elems: Vec<String> },
    /// Polynomials, printed, in the role order of the defining law.
    Polys { polys: Vec<String> },
    /// A polynomial pair together with the coefficient indices that break
    /// the coefficientwise conclusion.
    PolyCoeff { polys: Vec<String>, i: u32, j: u32 },
    /// A right annihilator that no idempotent generates.
    Annihilator { generators: Vec<String>, members: Vec<String> },
    /// A transfer breakdown: the generator set over which the lift fails
    /// and the stage that failed.
    Transfer { generators: Vec<String>, stage: String },
    /// An idempotent that breaks a commutation or purity law.
    Idempotent { e: String, partner: String, law: String },
    /// A nonzero nilpotent.
    Nilpotent { a: String, power: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub bounds: Bounds,
    /// Wall-clock cost. Excluded from serialized reports so that machine
    /// output stays byte-stable across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PropertyVerdict {
    pub fn new(property: impl Into<String>, status: Status, bounds: Bounds) -> PropertyVerdict {
        PropertyVerdict {
            property: property.into(),
            status,
            witness: None,
            bounds,
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_witness(mut self, w: Witness) -> PropertyVerdict {
        self.witness = Some(w);
        self
    }
}

/// Armendariz-style coefficientwise conditions, named by the polynomial
/// ring they quantify over and the conclusion they draw from `f g = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmVariant {
    /// Ordinary polynomials, conclusion `a_i b_j = 0`.
    Plain,
    /// Twisted polynomials, conclusion `a_i s^i(b_j) = 0`.
    SigmaSkew,
    /// Twisted polynomials, untwisted conclusion `a_i b_j = 0`.
    SigmaArm,
    /// Full skew polynomials, conclusion `a_i x^i * b_j x^j = 0`.
    SigmaDeltaSkew,
    /// Full skew polynomials, untwisted conclusion `a_i b_j = 0`.
    SigmaDeltaUntwisted,
    /// Full skew polynomials, conclusion `a_0 b_j = 0`.
    IsfahaniSkew,
}

pub const ARM_VARIANTS: [ArmVariant; 6] = [
    ArmVariant::Plain,
    ArmVariant::SigmaSkew,
    ArmVariant::SigmaArm,
    ArmVariant::SigmaDeltaSkew,
    ArmVariant::SigmaDeltaUntwisted,
    ArmVariant::IsfahaniSkew,
];

/// Which annihilator-lattice condition a Baer-style check asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnFamily {
    /// Right annihilators of arbitrary subsets.
    Baer,
    /// Right annihilators of right ideals.
    QuasiBaer,
    /// Right annihilators of principal right ideals.
    PrincipallyQuasiBaer,
}

pub const ANN_FAMILIES: [AnnFamily; 3] =
    [AnnFamily::Baer, AnnFamily::QuasiBaer, AnnFamily::PrincipallyQuasiBaer];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Reduced,
    Reversible,
    Symmetric,
    Abelian,
    SigmaRigid,
    RightSigmaReversible,
    LeftSigmaReversible,
    RightSigmaSymmetric,
    LeftSigmaSymmetric,
    ConditionCSigma,
    SigmaDeltaCompatible,
    Armendariz(ArmVariant),
    BaerKind(AnnFamily),
    PolyReversible,
    PolySymmetric,
    Transfer(AnnFamily),
}

impl Property {
    pub fn name(self) -> String {
        match self {
            Property::Reduced => "reduced".into(),
            Property::Reversible => "reversible".into(),
            Property::Symmetric => "symmetric".into(),
            Property::Abelian => "abelian".into(),
            Property::SigmaRigid => "sigma-rigid".into(),
            Property::RightSigmaReversible => "right-sigma-reversible".into(),
            Property::LeftSigmaReversible => "left-sigma-reversible".into(),
            Property::RightSigmaSymmetric => "right-sigma-symmetric".into(),
            Property::LeftSigmaSymmetric => "left-sigma-symmetric".into(),
            Property::ConditionCSigma => "condition-c-sigma".into(),
            Property::SigmaDeltaCompatible => "sigma-delta-compatible".into(),
            Property::Armendariz(v) => match v {
                ArmVariant::Plain => "armendariz".into(),
                ArmVariant::SigmaSkew => "sigma-skew-armendariz".into(),
                ArmVariant::SigmaArm => "sigma-armendariz".into(),
                ArmVariant::SigmaDeltaSkew => "sigma-delta-skew-armendariz".into(),
                ArmVariant::SigmaDeltaUntwisted => "sigma-delta-untwisted-armendariz".into(),
                ArmVariant::IsfahaniSkew => "isfahani-skew-armendariz".into(),
            },
            Property::BaerKind(f) => match f {
                AnnFamily::Baer => "baer".into(),
                AnnFamily::QuasiBaer => "quasi-baer".into(),
                AnnFamily::PrincipallyQuasiBaer => "pq-baer".into(),
            },
            Property::PolyReversible => "poly-reversible".into(),
            Property::PolySymmetric => "poly-symmetric".into(),
            Property::Transfer(f) => match f {
                AnnFamily::Baer => "baer-transfer".into(),
                AnnFamily::QuasiBaer => "quasi-baer-transfer".into(),
                AnnFamily::PrincipallyQuasiBaer => "pq-baer-transfer".into(),
            },
        }
    }

    pub fn all() -> Vec<Property> {
        let mut v = vec![
            Property::Reduced,
            Property::Reversible,
            Property::Symmetric,
            Property::Abelian,
            Property::SigmaRigid,
            Property::RightSigmaReversible,
            Property::LeftSigmaReversible,
            Property::RightSigmaSymmetric,
            Property::LeftSigmaSymmetric,
            Property::ConditionCSigma,
            Property::SigmaDeltaCompatible,
        ];
        v.extend(ARM_VARIANTS.map(Property::Armendariz));
        v.extend(ANN_FAMILIES.map(Property::BaerKind));
        v.push(Property::PolyReversible);
        v.push(Property::PolySymmetric);
        v.extend(ANN_FAMILIES.map(Property::Transfer));
        v
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Property, String> {
        Property::all()
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let known: Vec<String> = Property::all().iter().map(|p| p.name()).collect();
                format!("unknown property {s:?}; known: {}", known.join(", "))
            })
    }
}

/// What to do when a polynomial search space exceeds the work cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OnExcess {
    /// Degrade to a seeded sample of the space and say so in the bounds.
    Sample,
    /// Refuse with an error instead of returning a weaker verdict.
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Degree cap for quantified polynomials.
    pub dmax: u32,
    /// Largest pair-space the scanner will exhaust before degrading.
    pub work_cap: u64,
    /// Points drawn when a scan degrades to sampling.
    pub sample_size: u64,
    pub on_excess: OnExcess,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            dmax: 2,
            work_cap: 20_000_000,
            sample_size: 200_000,
            on_excess: OnExcess::Sample,
            seed: 1729,
        }
    }
}
