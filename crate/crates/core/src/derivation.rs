//! Derivations twisted by a ring endomorphism.
//!
//! For an endomorphism `s`, a map `d` is an `s`-derivation when it is
//! additive and satisfies `d(ab) = s(a) d(b) + d(a) b`. Validation mirrors
//! the morphism module: exhaustive over finite carriers, sampled over the
//! structured ones. When `s` is unital the law forces `d(1) = 0`, which is
//! asserted explicitly at construction.

use crate::elem::Elem;
use crate::error::BuildError;
use crate::morphism::{RingMorphism, Validation};
use crate::ring::RingInstance;

#[derive(Clone, Debug, PartialEq)]
pub enum DerivationKind {
    Zero,
    /// Arbitrary finite map; the action lives in `SigmaDerivation::table`.
    Table,
    /// `a -> c*a - s(a)*c` for a fixed element `c`.
    Inner { c: Elem },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaDerivation {
    pub label: String,
    pub kind: DerivationKind,
    pub table: Option<Vec<u16>>,
    pub validation: Validation,
}

impl SigmaDerivation {
    pub fn apply(&self, ring: &RingInstance, sigma: &RingMorphism, e: &Elem) -> Elem {
        match (&self.table, e) {
            (Some(tab), Elem::Idx(i)) => Elem::Idx(tab[*i as usize]),
            _ => match &self.kind {
                DerivationKind::Zero => ring.zero(),
                DerivationKind::Inner { c } => {
                    ring.sub(&ring.mul(c, e), &ring.mul(&sigma.apply(ring, e), c))
                }
                DerivationKind::Table => panic!(
                    "table derivation without a table on ring {}",
                    ring.label
                ),
            },
        }
    }

    pub fn apply_power(
        &self,
        ring: &RingInstance,
        sigma: &RingMorphism,
        e: &Elem,
        k: u32,
    ) -> Elem {
        let mut acc = e.clone();
        for _ in 0..k {
            acc = self.apply(ring, sigma, &acc);
        }
        acc
    }

    pub fn is_zero(&self, ring: &RingInstance, sigma: &RingMorphism) -> bool {
        match &self.table {
            Some(tab) => {
                let z = match ring.zero() {
                    Elem::Idx(i) => i,
                    _ => unreachable!(),
                };
                tab.iter().all(|&v| v == z)
            }
            None => match &self.kind {
                DerivationKind::Zero => true,
                _ => ring
                    .sample_elements()
                    .iter()
                    .all(|e| ring.is_zero(&self.apply(ring, sigma, e))),
            },
        }
    }

    pub fn zero(ring: &RingInstance) -> SigmaDerivation {
        let table = ring.table().map(|t| vec![t.zero; t.n]);
        let validation = if ring.is_finite() {
            Validation::Exhaustive
        } else {
            let k = ring.sample_elements().len();
            Validation::Sampled { pairs: k * k }
        };
        SigmaDerivation {
            label: "zero".into(),
            kind: DerivationKind::Zero,
            table,
            validation,
        }
    }

    pub fn from_table(
        ring: &RingInstance,
        sigma: &RingMorphism,
        table: Vec<u16>,
        label: &str,
    ) -> Result<SigmaDerivation, BuildError> {
        let t = ring.table().ok_or_else(|| BuildError::SpecMismatch {
            ring: ring.label.clone(),
            reason: "table derivations need a finite carrier".into(),
        })?;
        if table.len() != t.n || table.iter().any(|&v| (v as usize) >= t.n) {
            return Err(BuildError::SpecMismatch {
                ring: ring.label.clone(),
                reason: "derivation table shape mismatch".into(),
            });
        }
        let mut d = SigmaDerivation {
            label: label.to_string(),
            kind: DerivationKind::Table,
            table: Some(table),
            validation: Validation::Exhaustive,
        };
        d.validate(ring, sigma)?;
        Ok(d)
    }

    /// The inner derivation `a -> c*a - s(a)*c`, which satisfies the twisted
    /// Leibniz law for every endomorphism `s`; validation is still run.
    pub fn inner(
        ring: &RingInstance,
        sigma: &RingMorphism,
        c: &Elem,
    ) -> Result<SigmaDerivation, BuildError> {
        let table = ring.table().map(|t| {
            (0..t.n as u16)
                .map(|i| {
                    let e = Elem::Idx(i);
                    let v = ring.sub(
                        &ring.mul(c, &e),
                        &ring.mul(&sigma.apply(ring, &e), c),
                    );
                    match v {
                        Elem::Idx(j) => j,
                        _ => unreachable!(),
                    }
                })
                .collect::<Vec<u16>>()
        });
        let mut d = SigmaDerivation {
            label: format!("inner({})", ring.repr(c)),
            kind: DerivationKind::Inner { c: c.clone() },
            table,
            validation: Validation::Exhaustive,
        };
        d.validate(ring, sigma)?;
        Ok(d)
    }

    fn validate(&mut self, ring: &RingInstance, sigma: &RingMorphism) -> Result<(), BuildError> {
        let pool = ring.sample_elements();
        for a in &pool {
            for b in &pool {
                let lhs = self.apply(ring, sigma, &ring.add(a, b));
                let rhs = ring.add(
                    &self.apply(ring, sigma, a),
                    &self.apply(ring, sigma, b),
                );
                if lhs != rhs {
                    return Err(BuildError::NotAdditive {
                        witness: format!("({}, {})", ring.repr(a), ring.repr(b)),
                    });
                }
                let lhs = self.apply(ring, sigma, &ring.mul(a, b));
                let rhs = ring.add(
                    &ring.mul(&sigma.apply(ring, a), &self.apply(ring, sigma, b)),
                    &ring.mul(&self.apply(ring, sigma, a), b),
                );
                if lhs != rhs {
                    return Err(BuildError::NotADerivation {
                        witness: format!("({}, {})", ring.repr(a), ring.repr(b)),
                    });
                }
            }
        }
        if sigma.unital && !ring.is_zero(&self.apply(ring, sigma, &ring.one())) {
            return Err(BuildError::NotADerivation {
                witness: "d(1) != 0 under a unital endomorphism".into(),
            });
        }
        self.validation = if ring.is_finite() {
            Validation::Exhaustive
        } else {
            Validation::Sampled { pairs: pool.len() * pool.len() }
        };
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::MorphismKind;
    use crate::ring::{triangular2, zmod};

    #[test]
    fn inner_derivation_on_the_triangular_ring_matches_hand_values() {
        let r = triangular2(4).unwrap();
        let s = RingMorphism::from_program(&r, MorphismKind::NegateOffdiag, "negate").unwrap();
        let c = r.parse_elem("[0,1]").unwrap();
        let d = SigmaDerivation::inner(&r, &s, &c).unwrap();
        // d([a,b]) = [0,1][a,b] - [a,-b][0,1] = [0,a] - [0,a] = 0 on the
        // diagonal part, and the off-diagonal contributions cancel to [0,0]
        // only when a = -a; spot-check two values by hand:
        // d([1,0]) = [0,1]*[1,0] - [1,0]*[0,1] = [0,1] - [0,1] = [0,0]
        let e = r.parse_elem("[1,0]").unwrap();
        assert_eq!(r.repr(&d.apply(&r, &s, &e)), "[0,0]");
        // d([2,0]) = [0,1]*[2,0] - [2,0]*[0,1] = [0,2] - [0,2] = [0,0]
        // d([3,1]) = [0,1]*[3,1] - [3,3]*[0,1] = [0,3] - [0,3] = [0,0]
        // d([0,1]) = [0,1]*[0,1] - [0,-1]*[0,1] = [0,0] - [0,0] = [0,0]
        let e = r.parse_elem("[0,1]").unwrap();
        assert_eq!(r.repr(&d.apply(&r, &s, &e)), "[0,0]");
        assert!(d.is_zero(&r, &s));
    }

    #[test]
    fn inner_derivation_with_twist_can_be_nonzero() {
        let r = triangular2(4).unwrap();
        let s = RingMorphism::from_program(&r, MorphismKind::NegateOffdiag, "negate").unwrap();
        // c = [1,1]: d([a,b]) = [1,1][a,b] - [a,-b][1,1] = [0, 2b].
        let c = r.parse_elem("[1,1]").unwrap();
        let d = SigmaDerivation::inner(&r, &s, &c).unwrap();
        let e = r.parse_elem("[0,1]").unwrap();
        assert_eq!(r.repr(&d.apply(&r, &s, &e)), "[0,2]");
        assert!(!d.is_zero(&r, &s));
    }

    #[test]
    fn non_derivations_are_rejected() {
        let r = zmod(4).unwrap();
        let s = RingMorphism::identity(&r);
        // a -> a is additive but fails Leibniz on (1,1): d(1) = 1 != 1*1 + 1*1.
        let err = SigmaDerivation::from_table(&r, &s, vec![0, 1, 2, 3], "id");
        assert!(matches!(err, Err(BuildError::NotADerivation { .. })));
    }

    #[test]
    fn unital_twist_forces_derivation_of_one_to_vanish() {
        let r = zmod(4).unwrap();
        let s = RingMorphism::identity(&r);
        let d = SigmaDerivation::zero(&r);
        assert!(r.is_zero(&d.apply(&r, &s, &r.one())));
        for c in r.elements().unwrap() {
            let d = SigmaDerivation::inner(&r, &s, &c).unwrap();
            assert!(r.is_zero(&d.apply(&r, &s, &r.one())));
        }
    }
}
