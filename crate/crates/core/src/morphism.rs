//! Ring endomorphisms.
//!
//! Every constructor validates additivity and multiplicativity before
//! handing back a `RingMorphism`. Finite carriers are validated over all
//! pairs and the map is materialized as an index table; structured carriers
//! are validated over the documented sample slice and keep a programmatic
//! form. Unitality is a recorded attribute, not a requirement, and the same
//! goes for injectivity (`None` when only sampled evidence exists).

use crate::elem::Elem;
use crate::error::BuildError;
use crate::ring::{Construction, RingInstance};
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismKind {
    Identity,
    /// Arbitrary finite map; the action lives in `RingMorphism::table`.
    Table,
    /// `(a, b) -> (b, a)` on a product of two equal-order factors.
    Swap,
    /// `[a, b] -> [a, -b]` on a constant-diagonal triangular carrier.
    NegateOffdiag,
    /// `[[a,t],[0,a]] -> [[a,t/2],[0,a]]` on the integer/rational carrier.
    HalveOffdiag,
    /// `f(x) -> f(0)` on binary polynomials.
    EvalAtZero,
    /// Right-then-left application of two validated maps.
    Composed(Box<MorphismKind>, Box<MorphismKind>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Validation {
    /// Both laws checked on every pair of the carrier.
    Exhaustive,
    /// Both laws checked on every pair of the documented sample slice.
    Sampled { pairs: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingMorphism {
    pub label: String,
    pub kind: MorphismKind,
    /// Index action, always present for finite carriers.
    pub table: Option<Vec<u16>>,
    pub unital: bool,
    /// `Some(false)` once two elements collide; `None` when the carrier is
    /// infinite and the sample showed no collision.
    pub injective: Option<bool>,
    pub validation: Validation,
}

impl MorphismKind {
    fn apply_structured(&self, ring: &RingInstance, e: &Elem) -> Elem {
        match (self, e) {
            (MorphismKind::Identity, _) => e.clone(),
            (MorphismKind::EvalAtZero, Elem::Bits(b)) => Elem::Bits(b & 1),
            (MorphismKind::HalveOffdiag, Elem::ZQ(z)) => Elem::ZQ(Box::new(z.halve_offdiag())),
            (MorphismKind::Composed(f, g), _) => {
                f.apply_structured(ring, &g.apply_structured(ring, e))
            }
            _ => panic!(
                "morphism kind {:?} has no programmatic action on ring {}",
                self, ring.label
            ),
        }
    }
}

impl RingMorphism {
    pub fn apply(&self, ring: &RingInstance, e: &Elem) -> Elem {
        match (&self.table, e) {
            (Some(tab), Elem::Idx(i)) => Elem::Idx(tab[*i as usize]),
            _ => self.kind.apply_structured(ring, e),
        }
    }

    pub fn is_identity(&self, ring: &RingInstance) -> bool {
        match &self.table {
            Some(tab) => tab.iter().enumerate().all(|(i, &v)| i as u16 == v),
            None => {
                self.kind == MorphismKind::Identity
                    || ring
                        .sample_elements()
                        .iter()
                        .all(|e| self.apply(ring, e) == *e)
            }
        }
    }

    pub fn identity(ring: &RingInstance) -> RingMorphism {
        let table = ring
            .table()
            .map(|t| (0..t.n as u16).collect::<Vec<u16>>());
        let validation = if ring.is_finite() {
            Validation::Exhaustive
        } else {
            let k = ring.sample_elements().len();
            Validation::Sampled { pairs: k * k }
        };
        RingMorphism {
            label: "identity".into(),
            kind: MorphismKind::Identity,
            table,
            unital: true,
            injective: if ring.is_finite() { Some(true) } else { None },
            validation,
        }
    }

    /// Validates and wraps an explicit index table over a finite carrier.
    pub fn from_table(
        ring: &RingInstance,
        table: Vec<u16>,
        label: &str,
    ) -> Result<RingMorphism, BuildError> {
        let t = ring.table().ok_or_else(|| BuildError::SpecMismatch {
            ring: ring.label.clone(),
            reason: "table morphisms need a finite carrier".into(),
        })?;
        if table.len() != t.n || table.iter().any(|&v| (v as usize) >= t.n) {
            return Err(BuildError::SpecMismatch {
                ring: ring.label.clone(),
                reason: "morphism table shape mismatch".into(),
            });
        }
        let mut m = RingMorphism {
            label: label.to_string(),
            kind: MorphismKind::Table,
            table: Some(table),
            unital: false,
            injective: None,
            validation: Validation::Exhaustive,
        };
        m.validate(ring)?;
        Ok(m)
    }

    /// Validates and wraps a named index program on a finite carrier, or a
    /// named exact program on a structured carrier.
    pub fn from_program(
        ring: &RingInstance,
        kind: MorphismKind,
        label: &str,
    ) -> Result<RingMorphism, BuildError> {
        let mismatch = |reason: &str| BuildError::SpecMismatch {
            ring: ring.label.clone(),
            reason: reason.to_string(),
        };
        let table = match (&kind, &ring.construction) {
            (MorphismKind::Identity, _) => {
                return Ok(RingMorphism::identity(ring));
            }
            (MorphismKind::Swap, Construction::Product { factor_orders }) => {
                if factor_orders.len() != 2 || factor_orders[0] != factor_orders[1] {
                    return Err(mismatch("swap needs exactly two factors of equal order"));
                }
                let k = factor_orders[0];
                let n = k * k;
                Some(
                    (0..n)
                        .map(|i| ((i % k) * k + i / k) as u16)
                        .collect::<Vec<u16>>(),
                )
            }
            (MorphismKind::Swap, _) => return Err(mismatch("swap needs a two-factor product")),
            (MorphismKind::NegateOffdiag, Construction::Triangular2 { n }) => {
                let k = *n;
                Some(
                    (0..k * k)
                        .map(|i| {
                            let (a, b) = (i / k, i % k);
                            (a * k + (k - b) % k) as u16
                        })
                        .collect::<Vec<u16>>(),
                )
            }
            (MorphismKind::NegateOffdiag, _) => {
                return Err(mismatch("off-diagonal negation needs a triangular2 carrier"))
            }
            (MorphismKind::HalveOffdiag, Construction::IntRatTri) => None,
            (MorphismKind::HalveOffdiag, _) => {
                return Err(mismatch(
                    "off-diagonal halving needs the integer/rational triangular carrier",
                ))
            }
            (MorphismKind::EvalAtZero, Construction::PolyZ2) => None,
            (MorphismKind::EvalAtZero, _) => {
                return Err(mismatch("evaluation at zero needs the binary polynomial carrier"))
            }
            (MorphismKind::Table, _) => {
                return Err(mismatch("table morphisms carry their table; use from_table"))
            }
            (MorphismKind::Composed(..), _) => {
                return Err(mismatch("compose validated morphisms via compose()"))
            }
        };
        let mut m = RingMorphism {
            label: label.to_string(),
            kind,
            table,
            unital: false,
            injective: None,
            validation: Validation::Exhaustive,
        };
        m.validate(ring)?;
        Ok(m)
    }

    /// `self` after `inner`: returns the validated composite.
    pub fn compose(&self, inner: &RingMorphism, ring: &RingInstance) -> Result<RingMorphism, BuildError> {
        let label = format!("({} . {})", self.label, inner.label);
        match (&self.table, &inner.table) {
            (Some(f), Some(g)) => {
                let table: Vec<u16> = g.iter().map(|&i| f[i as usize]).collect();
                RingMorphism::from_table(ring, table, &label)
            }
            _ => {
                let mut m = RingMorphism {
                    label,
                    kind: MorphismKind::Composed(
                        Box::new(self.kind.clone()),
                        Box::new(inner.kind.clone()),
                    ),
                    table: None,
                    unital: false,
                    injective: None,
                    validation: Validation::Exhaustive,
                };
                m.validate(ring)?;
                Ok(m)
            }
        }
    }

    /// Checks additivity and multiplicativity, then records unitality and
    /// injectivity evidence. Finite carriers get exhaustive validation.
    fn validate(&mut self, ring: &RingInstance) -> Result<(), BuildError> {
        let pool = ring.sample_elements();
        for a in &pool {
            for b in &pool {
                let lhs = self.apply(ring, &ring.add(a, b));
                let rhs = ring.add(&self.apply(ring, a), &self.apply(ring, b));
                if lhs != rhs {
                    return Err(BuildError::NotAdditive {
                        witness: format!("({}, {})", ring.repr(a), ring.repr(b)),
                    });
                }
                let lhs = self.apply(ring, &ring.mul(a, b));
                let rhs = ring.mul(&self.apply(ring, a), &self.apply(ring, b));
                if lhs != rhs {
                    return Err(BuildError::NotMultiplicative {
                        witness: format!("({}, {})", ring.repr(a), ring.repr(b)),
                    });
                }
            }
        }
        self.unital = self.apply(ring, &ring.one()) == ring.one();
        let mut seen = HashSet::new();
        let collision = pool.iter().any(|e| !seen.insert(self.apply(ring, e)));
        self.injective = if collision {
            Some(false)
        } else if ring.is_finite() {
            Some(true)
        } else {
            None
        };
        self.validation = if ring.is_finite() {
            Validation::Exhaustive
        } else {
            Validation::Sampled { pairs: pool.len() * pool.len() }
        };
        Ok(())
    }

    /// Applies the map `k` times.
    pub fn apply_power(&self, ring: &RingInstance, e: &Elem, k: u32) -> Elem {
        let mut acc = e.clone();
        for _ in 0..k {
            acc = self.apply(ring, &acc);
        }
        acc
    }
}
