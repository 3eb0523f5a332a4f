//! Bounded Armendariz-variant searches.
//!
//! Each variant fixes which twisted coefficient products must vanish when
//! a product of skew polynomials is zero. The sigma-only variants live in
//! R[x;sigma]: the derivation is structurally forced to zero, not merely
//! ignored, so the product itself changes. The exhaustive scan runs on the
//! index kernel; witnesses are replayed through the element route.

use crate::elem::Elem;
use crate::error::DecideError;
use crate::morphism::RingMorphism;
use crate::ore::{word_map_apply, OreContext, SkewPolynomial};
use crate::verdict::{ArmVariant, CheckOptions, Property, PropertyVerdict, Status, Witness};
use std::sync::Arc;
use std::time::Instant;

use super::fastpoly::{decode_poly, FastCtx, ScanPlan};

/// The extension the variant quantifies over: full `R[x;sigma,delta]`,
/// `R[x;sigma]`, or plain `R[x]`.
pub(crate) fn variant_ctx(ctx: &Arc<OreContext>, v: ArmVariant) -> Arc<OreContext> {
    match v {
        ArmVariant::Plain => OreContext::with_var(
            ctx.ring.clone(),
            Arc::new(RingMorphism::identity(&ctx.ring)),
            Arc::new(crate::derivation::SigmaDerivation::zero(&ctx.ring)),
            &ctx.var,
        ),
        ArmVariant::SigmaSkew | ArmVariant::SigmaArm => OreContext::with_var(
            ctx.ring.clone(),
            ctx.sigma.clone(),
            Arc::new(crate::derivation::SigmaDerivation::zero(&ctx.ring)),
            &ctx.var,
        ),
        ArmVariant::SigmaDeltaSkew
        | ArmVariant::SigmaDeltaUntwisted
        | ArmVariant::IsfahaniSkew => ctx.clone(),
    }
}

/// Does the coefficient pair `(i, j)` of `(f, g)` violate the variant's
/// conclusion? Evaluated through public element operations only.
pub(crate) fn conclusion_violated_at(
    vctx: &Arc<OreContext>,
    v: ArmVariant,
    f: &SkewPolynomial,
    g: &SkewPolynomial,
    i: u32,
    j: u32,
) -> bool {
    let ring = &vctx.ring;
    let a = f.coeff(i as usize);
    let b = g.coeff(j as usize);
    match v {
        ArmVariant::Plain | ArmVariant::SigmaArm | ArmVariant::SigmaDeltaUntwisted => {
            !ring.is_zero(&ring.mul(&a, &b))
        }
        ArmVariant::SigmaSkew => {
            let sb = vctx.sigma.apply_power(ring, &b, i);
            !ring.is_zero(&ring.mul(&a, &sb))
        }
        ArmVariant::SigmaDeltaSkew => (0..=i).any(|l| {
            let w = word_map_apply(vctx, i, l, &b);
            !ring.is_zero(&ring.mul(&a, &w))
        }),
        ArmVariant::IsfahaniSkew => {
            i == 0 && !ring.is_zero(&ring.mul(&a, &b))
        }
    }
}

fn first_violation(
    fast: &FastCtx,
    v: ArmVariant,
    fc: &[u16],
    gc: &[u16],
) -> Option<(u32, u32)> {
    for (i, &a) in fc.iter().enumerate() {
        for (j, &b) in gc.iter().enumerate() {
            let bad = match v {
                ArmVariant::Plain | ArmVariant::SigmaArm | ArmVariant::SigmaDeltaUntwisted => {
                    fast.muli(a, b) != fast.zero
                }
                ArmVariant::SigmaSkew => fast.muli(a, fast.spow(i, b)) != fast.zero,
                ArmVariant::SigmaDeltaSkew => !fast.monomial_product_is_zero(a, i, b),
                ArmVariant::IsfahaniSkew => i == 0 && fast.muli(a, b) != fast.zero,
            };
            if bad {
                return Some((i as u32, j as u32));
            }
        }
    }
    None
}

pub(crate) fn poly_of(vctx: &Arc<OreContext>, coeffs: &[u16]) -> SkewPolynomial {
    SkewPolynomial::new(
        vctx.clone(),
        coeffs.iter().map(|&c| Elem::Idx(c)).collect(),
    )
}

/// Exhaustive (or seed-sampled, past the work cap) scan over pairs of
/// degree-bounded polynomials for the chosen variant.
pub fn armendariz_bounded(
    ctx: &Arc<OreContext>,
    variant: ArmVariant,
    opts: &CheckOptions,
) -> Result<PropertyVerdict, DecideError> {
    let t0 = Instant::now();
    let name = Property::Armendariz(variant).name();
    if opts.dmax < 1 {
        return Err(DecideError::NotApplicable {
            property: name,
            reason: "degree bound must be at least 1".into(),
        });
    }
    let vctx = variant_ctx(ctx, variant);
    let len = opts.dmax as usize + 1;
    let fast = FastCtx::build(&vctx.ring, &vctx.sigma, &vctx.delta, len)?;
    let n = fast.n as u64;
    let space = (n as u128).pow(2 * len as u32);
    let plan = ScanPlan::for_space(space, opts)?;

    let hit = plan.find_violation(|idx| {
        let mut buf = vec![0u16; 2 * len];
        decode_poly(idx, n, &mut buf);
        let (fc, gc) = buf.split_at(len);
        let mut prod = Vec::new();
        match variant {
            ArmVariant::Plain => fast.mul_plain(fc, gc, &mut prod),
            ArmVariant::SigmaSkew | ArmVariant::SigmaArm => fast.mul_sigma(fc, gc, &mut prod),
            ArmVariant::SigmaDeltaSkew
            | ArmVariant::SigmaDeltaUntwisted
            | ArmVariant::IsfahaniSkew => fast.mul_full(fc, gc, &mut prod),
        }
        if !fast.is_zero_poly(&prod) {
            return None;
        }
        first_violation(&fast, variant, fc, gc)
            .map(|(i, j)| (fc.to_vec(), gc.to_vec(), i, j))
    });

    let bounds = plan.bounds(opts.dmax);
    let v = match hit {
        Some((fc, gc, i, j)) => {
            let f = poly_of(&vctx, &fc);
            let g = poly_of(&vctx, &gc);
            PropertyVerdict::new(name, Status::Fails, bounds).with_witness(Witness::PolyCoeff {
                polys: vec![f.print(), g.print()],
                i,
                j,
            })
        }
        None => PropertyVerdict::new(name, Status::HoldsUpToBound, bounds),
    };
    let mut v = v;
    v.elapsed = t0.elapsed();
    Ok(v)
}

/// Slow element-route search over polynomials with coefficients drawn
/// from an explicit pool. Independent of the index kernel; used as a
/// cross-check oracle and to substantiate "searched, no counterexample"
/// notes on structured carriers.
pub fn pool_search(
    ctx: &Arc<OreContext>,
    variant: ArmVariant,
    dmax: u32,
    pool: &[Elem],
) -> Result<Option<(SkewPolynomial, SkewPolynomial, u32, u32)>, DecideError> {
    let vctx = variant_ctx(ctx, variant);
    let len = dmax as usize + 1;
    let q = pool.len() as u64;
    let space = (q as u128).pow(2 * len as u32);
    let mut digits = vec![0usize; 2 * len];
    for idx in 0..space {
        let mut k = idx;
        for d in digits.iter_mut() {
            *d = (k % q as u128) as usize;
            k /= q as u128;
        }
        let f = SkewPolynomial::new(
            vctx.clone(),
            digits[..len].iter().map(|&d| pool[d].clone()).collect(),
        );
        let g = SkewPolynomial::new(
            vctx.clone(),
            digits[len..].iter().map(|&d| pool[d].clone()).collect(),
        );
        if !f.mul_iterated(&g)?.is_zero() {
            continue;
        }
        for i in 0..len as u32 {
            for j in 0..len as u32 {
                if conclusion_violated_at(&vctx, variant, &f, &g, i, j) {
                    return Ok(Some((f, g, i, j)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::SigmaDerivation;
    use crate::morphism::MorphismKind;
    use crate::ring::{direct_product, triangular2, zmod};
    use crate::verdict::ARM_VARIANTS;

    fn ctx(
        ring: crate::ring::RingInstance,
        kind: Option<MorphismKind>,
    ) -> Arc<OreContext> {
        let ring = Arc::new(ring);
        let sigma = Arc::new(match kind {
            None => RingMorphism::identity(&ring),
            Some(k) => RingMorphism::from_program(&ring, k, "s").unwrap(),
        });
        let delta = Arc::new(SigmaDerivation::zero(&ring));
        OreContext::new(ring, sigma, delta)
    }

    #[test]
    fn fields_pass_every_variant_at_the_default_bound() {
        let c = ctx(zmod(3).unwrap(), None);
        for v in ARM_VARIANTS {
            let out = armendariz_bounded(&c, v, &CheckOptions::default()).unwrap();
            assert_eq!(out.status, Status::HoldsUpToBound, "variant {v:?}");
            assert!(out.bounds.exhaustive);
        }
    }

    #[test]
    fn the_triangular_order_sixteen_ring_fails_the_skew_variant_at_degree_one() {
        // (A + Bx)^2 = 0 with A=[2,0], B=[2,1] under the negating morphism,
        // yet B*sigma(A) = [0,2] != 0.
        let c = ctx(
            triangular2(4).unwrap(),
            Some(MorphismKind::NegateOffdiag),
        );
        let opts = CheckOptions { dmax: 1, ..CheckOptions::default() };
        let out = armendariz_bounded(&c, ArmVariant::SigmaSkew, &opts).unwrap();
        assert_eq!(out.status, Status::Fails);
        let w = out.witness.unwrap();
        assert!(super::super::replay(&c, Property::Armendariz(ArmVariant::SigmaSkew), &w, &opts)
            .unwrap());
        // The witness stored in the ex-1.4 fixture replays too.
        let stored = Witness::PolyCoeff {
            polys: vec!["{[2,0]} + {[2,1]} x".into(), "{[2,0]} + {[2,1]} x".into()],
            i: 1,
            j: 0,
        };
        assert!(
            super::super::replay(&c, Property::Armendariz(ArmVariant::SigmaSkew), &stored, &opts)
                .unwrap()
        );
    }

    #[test]
    fn the_scan_and_the_pool_oracle_agree_on_small_rings() {
        let bool2 = || direct_product(vec![zmod(2).unwrap(), zmod(2).unwrap()]).unwrap();
        let cases = vec![
            ctx(zmod(4).unwrap(), None),
            ctx(bool2(), Some(MorphismKind::Swap)),
            ctx(bool2(), None),
        ];
        let opts = CheckOptions { dmax: 1, ..CheckOptions::default() };
        for c in cases {
            let pool = c.ring.elements().unwrap();
            for v in ARM_VARIANTS {
                let fast = armendariz_bounded(&c, v, &opts).unwrap();
                let slow = pool_search(&c, v, 1, &pool).unwrap();
                assert_eq!(
                    fast.status == Status::Fails,
                    slow.is_some(),
                    "route disagreement on {} variant {v:?}",
                    c.ring.label
                );
            }
        }
    }

    #[test]
    fn upper_triangular_matrices_over_z2_are_not_armendariz() {
        // Classical counterexample: T2(Z2) is not Armendariz.
        let c = ctx(crate::ring::ut2_z2().unwrap(), None);
        let opts = CheckOptions { dmax: 1, ..CheckOptions::default() };
        let out = armendariz_bounded(&c, ArmVariant::Plain, &opts).unwrap();
        assert_eq!(out.status, Status::Fails);
        let w = out.witness.unwrap();
        assert!(
            super::super::replay(&c, Property::Armendariz(ArmVariant::Plain), &w, &opts).unwrap()
        );
    }

    #[test]
    fn degree_bound_zero_is_rejected() {
        let c = ctx(zmod(2).unwrap(), None);
        let opts = CheckOptions { dmax: 0, ..CheckOptions::default() };
        assert!(matches!(
            armendariz_bounded(&c, ArmVariant::Plain, &opts),
            Err(DecideError::NotApplicable { .. })
        ));
    }
}
