//! Degree-bounded conditions quantified over the Ore extension itself:
//! reversibility and symmetry of `R[x;sigma,delta]`, and the staged
//! annihilator-transfer checks behind the Baer-type structure results.
//!
//! Everything here is bounded search; a clean pass is `HoldsUpToBound`,
//! never `Holds`.

use crate::error::DecideError;
use crate::ore::{OreContext, SkewPolynomial};
use crate::ring::TableRing;
use crate::verdict::{
    AnnFamily, Bounds, CheckOptions, Property, PropertyVerdict, Status, Witness,
};
use rayon::iter::{IntoParallelIterator, ParallelIterator};
use std::sync::Arc;
use std::time::Instant;

use super::armendariz::poly_of;
use super::fastpoly::{decode_poly, FastCtx, ScanPlan};
use super::{elem_ann_mask, idempotent_ideals, principal_ann_mask};

/// Transfer failure stages, in check order.
pub const STAGE_FIND_E: &str = "annihilator-not-idempotent-generated";
pub const STAGE_IDEMPOTENT: &str = "idempotent-not-annihilating";
pub const STAGE_MEMBERSHIP: &str = "annihilator-escapes-idempotent";

fn guard_dmax(property: Property, opts: &CheckOptions) -> Result<(), DecideError> {
    if opts.dmax < 1 {
        return Err(DecideError::NotApplicable {
            property: property.name(),
            reason: "degree bound must be at least 1".into(),
        });
    }
    Ok(())
}

/// `fg = 0` implies `gf = 0`, over all pairs of degree at most `dmax`.
pub fn poly_reversible(
    ctx: &Arc<OreContext>,
    opts: &CheckOptions,
) -> Result<PropertyVerdict, DecideError> {
    let t0 = Instant::now();
    guard_dmax(Property::PolyReversible, opts)?;
    let len = opts.dmax as usize + 1;
    let fast = FastCtx::build(&ctx.ring, &ctx.sigma, &ctx.delta, len)?;
    let n = fast.n as u64;
    let plan = ScanPlan::for_space((n as u128).pow(2 * len as u32), opts)?;
    let hit = plan.find_violation(|idx| {
        let mut buf = vec![0u16; 2 * len];
        decode_poly(idx, n, &mut buf);
        let (fc, gc) = buf.split_at(len);
        let mut fg = Vec::new();
        fast.mul_full(fc, gc, &mut fg);
        if !fast.is_zero_poly(&fg) {
            return None;
        }
        let mut gf = Vec::new();
        fast.mul_full(gc, fc, &mut gf);
        if fast.is_zero_poly(&gf) {
            return None;
        }
        Some((fc.to_vec(), gc.to_vec()))
    });
    let bounds = plan.bounds(opts.dmax);
    let mut v = match hit {
        Some((fc, gc)) => PropertyVerdict::new(
            Property::PolyReversible.name(),
            Status::Fails,
            bounds,
        )
        .with_witness(Witness::Polys {
            polys: vec![poly_of(ctx, &fc).print(), poly_of(ctx, &gc).print()],
        }),
        None => PropertyVerdict::new(
            Property::PolyReversible.name(),
            Status::HoldsUpToBound,
            bounds,
        ),
    };
    v.elapsed = t0.elapsed();
    Ok(v)
}

/// `fgh = 0` implies `fhg = 0`, over all triples of degree at most `dmax`.
pub fn poly_symmetric(
    ctx: &Arc<OreContext>,
    opts: &CheckOptions,
) -> Result<PropertyVerdict, DecideError> {
    let t0 = Instant::now();
    guard_dmax(Property::PolySymmetric, opts)?;
    let len = opts.dmax as usize + 1;
    let fast = FastCtx::build(&ctx.ring, &ctx.sigma, &ctx.delta, 2 * len)?;
    let n = fast.n as u64;
    let plan = ScanPlan::for_space((n as u128).pow(3 * len as u32), opts)?;
    let hit = plan.find_violation(|idx| {
        let mut buf = vec![0u16; 3 * len];
        decode_poly(idx, n, &mut buf);
        let (fc, rest) = buf.split_at(len);
        let (gc, hc) = rest.split_at(len);
        let mut fg = Vec::new();
        let mut prod = Vec::new();
        fast.mul_full(fc, gc, &mut fg);
        fast.mul_full(&fg, hc, &mut prod);
        if !fast.is_zero_poly(&prod) {
            return None;
        }
        fast.mul_full(fc, hc, &mut fg);
        fast.mul_full(&fg, gc, &mut prod);
        if fast.is_zero_poly(&prod) {
            return None;
        }
        Some((fc.to_vec(), gc.to_vec(), hc.to_vec()))
    });
    let bounds = plan.bounds(opts.dmax);
    let mut v = match hit {
        Some((fc, gc, hc)) => PropertyVerdict::new(
            Property::PolySymmetric.name(),
            Status::Fails,
            bounds,
        )
        .with_witness(Witness::Polys {
            polys: vec![
                poly_of(ctx, &fc).print(),
                poly_of(ctx, &gc).print(),
                poly_of(ctx, &hc).print(),
            ],
        }),
        None => PropertyVerdict::new(
            Property::PolySymmetric.name(),
            Status::HoldsUpToBound,
            bounds,
        ),
    };
    v.elapsed = t0.elapsed();
    Ok(v)
}

// ---------------------------------------------------------------------
// Annihilator transfer.
//
// For generator sets A of at most two degree-bounded polynomials (one for
// the principal variant), the extension is Baer-like at the bound when:
//   find-e: r_R(A*) = eR for an idempotent e, where A* is the coefficient
//           set (subset variant) or the right ideal it generates (ideal
//           variants);
//   (a)     e annihilates A on the right: p*e = 0, with linear middle
//           factors p*s*e = 0 for the ideal variants;
//   (b)     every degree-bounded q annihilated by A has coefficients in eR.
// A failure of any stage is a transfer violation witnessed by A.

struct TransferScan<'a> {
    fast: &'a FastCtx,
    family: AnnFamily,
    len: usize,
    n: u64,
    /// Per element: `r({a})` for the subset variant, `r(aR)` otherwise.
    elem_ann: Vec<u64>,
    idem: Vec<(u16, u64)>,
    /// Coefficient pairs of all linear middle factors; empty for Baer.
    lin: Vec<(u16, u16)>,
    full: u64,
}

impl<'a> TransferScan<'a> {
    fn new(fast: &'a FastCtx, t: &TableRing, family: AnnFamily, len: usize) -> TransferScan<'a> {
        let n = t.n as u16;
        let elem_ann = (0..n)
            .map(|a| match family {
                AnnFamily::Baer => elem_ann_mask(t, a),
                _ => principal_ann_mask(t, a),
            })
            .collect();
        let lin = if family == AnnFamily::Baer {
            Vec::new()
        } else {
            (0..n).flat_map(|s0| (0..n).map(move |s1| (s0, s1))).collect()
        };
        TransferScan {
            fast,
            family,
            len,
            n: n as u64,
            elem_ann,
            idem: idempotent_ideals(t),
            lin,
            full: u64::MAX >> (64 - t.n),
        }
    }

    fn astar_mask(&self, sets: &[&[u16]]) -> u64 {
        let mut m = self.full;
        for p in sets {
            for &c in p.iter() {
                m &= self.elem_ann[c as usize];
            }
        }
        m
    }

    fn annihilates_e(&self, p: &[u16], e: u16) -> bool {
        let mut pe = Vec::new();
        if self.family == AnnFamily::Baer {
            self.fast.mul_full(p, &[e], &mut pe);
            return self.fast.is_zero_poly(&pe);
        }
        let mut ps = Vec::new();
        for &(s0, s1) in &self.lin {
            self.fast.mul_full(p, &[s0, s1], &mut ps);
            self.fast.mul_full(&ps, &[e], &mut pe);
            if !self.fast.is_zero_poly(&pe) {
                return false;
            }
        }
        true
    }

    fn q_in_ann(&self, sets: &[&[u16]], q: &[u16]) -> bool {
        let mut pq = Vec::new();
        for p in sets {
            self.fast.mul_full(p, q, &mut pq);
            if !self.fast.is_zero_poly(&pq) {
                return false;
            }
        }
        if self.family == AnnFamily::Baer {
            return true;
        }
        let mut ps = Vec::new();
        for p in sets {
            for &(s0, s1) in &self.lin {
                self.fast.mul_full(p, &[s0, s1], &mut ps);
                self.fast.mul_full(&ps, q, &mut pq);
                if !self.fast.is_zero_poly(&pq) {
                    return false;
                }
            }
        }
        true
    }

    fn coeffs_in(&self, q: &[u16], mask: u64) -> bool {
        q.iter().all(|&c| mask >> c & 1 == 1)
    }

    /// Stages find-e and (a); `Ok` carries the idempotent's right ideal.
    fn eval_set(&self, sets: &[&[u16]]) -> Result<u64, &'static str> {
        let mask = self.astar_mask(sets);
        let Some(&(e, er)) = self.idem.iter().find(|&&(_, ir)| ir == mask) else {
            return Err(STAGE_FIND_E);
        };
        for p in sets {
            if !self.annihilates_e(p, e) {
                return Err(STAGE_IDEMPOTENT);
            }
        }
        Ok(er)
    }

    fn eval_b(&self, sets: &[&[u16]], er: u64, q: &[u16]) -> bool {
        self.q_in_ann(sets, q) && !self.coeffs_in(q, er)
    }

    /// Scan all size-`k` generator sets against all degree-bounded `q`.
    /// Exhaustive when the joint space fits the cap, sampled otherwise.
    fn scan_k(
        &self,
        k: usize,
        opts: &CheckOptions,
    ) -> Result<(Option<(Vec<Vec<u16>>, &'static str)>, Bounds), DecideError> {
        let len = self.len;
        let set_space = (self.n as u128).pow((k * len) as u32);
        let q_space = (self.n as u128).pow(len as u32);
        let joint = set_space * q_space;
        if joint <= opts.work_cap as u128 {
            let hit = (0..set_space as u64).into_par_iter().find_map_first(|sidx| {
                let mut sbuf = vec![0u16; k * len];
                decode_poly(sidx, self.n, &mut sbuf);
                let sets: Vec<&[u16]> = sbuf.chunks(len).collect();
                let er = match self.eval_set(&sets) {
                    Err(stage) => {
                        return Some((sets.iter().map(|s| s.to_vec()).collect(), stage))
                    }
                    Ok(er) => er,
                };
                let mut qbuf = vec![0u16; len];
                for qidx in 0..q_space as u64 {
                    decode_poly(qidx, self.n, &mut qbuf);
                    if self.eval_b(&sets, er, &qbuf) {
                        return Some((
                            sets.iter().map(|s| s.to_vec()).collect(),
                            STAGE_MEMBERSHIP,
                        ));
                    }
                }
                None
            });
            let bounds = Bounds {
                dmax: Some(opts.dmax),
                space: Some(joint),
                exhaustive: true,
                ..Bounds::default()
            };
            Ok((hit, bounds))
        } else {
            let plan = ScanPlan::for_space(joint, opts)?;
            let hit = plan.find_violation(|idx| {
                let mut buf = vec![0u16; (k + 1) * len];
                decode_poly(idx, self.n, &mut buf);
                let (sdigits, q) = buf.split_at(k * len);
                let sets: Vec<&[u16]> = sdigits.chunks(len).collect();
                match self.eval_set(&sets) {
                    Err(stage) => Some((sets.iter().map(|s| s.to_vec()).collect(), stage)),
                    Ok(er) => {
                        if self.eval_b(&sets, er, q) {
                            Some((
                                sets.iter().map(|s| s.to_vec()).collect(),
                                STAGE_MEMBERSHIP,
                            ))
                        } else {
                            None
                        }
                    }
                }
            });
            Ok((hit, plan.bounds(opts.dmax)))
        }
    }
}

/// Staged annihilator-transfer check for the chosen family.
pub fn transfer(
    ctx: &Arc<OreContext>,
    family: AnnFamily,
    opts: &CheckOptions,
) -> Result<PropertyVerdict, DecideError> {
    let t0 = Instant::now();
    let property = Property::Transfer(family);
    guard_dmax(property, opts)?;
    let t = ctx
        .ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ctx.ring.label.clone() })?;
    let len = opts.dmax as usize + 1;
    // Middle factors p*s push the left factor one degree past the bound.
    let fast = FastCtx::build(&ctx.ring, &ctx.sigma, &ctx.delta, len + 1)?;
    let scan = TransferScan::new(&fast, t, family, len);
    let sizes: &[usize] = match family {
        AnnFamily::PrincipallyQuasiBaer => &[1],
        _ => &[1, 2],
    };
    let mut total = 0u128;
    let mut exhaustive = true;
    let mut sample = None;
    for &k in sizes {
        let (hit, b) = scan.scan_k(k, opts)?;
        total += b.space.unwrap_or(0);
        exhaustive &= b.exhaustive;
        if b.sample.is_some() {
            sample = b.sample;
        }
        if let Some((sets, stage)) = hit {
            let bounds = Bounds {
                dmax: Some(opts.dmax),
                space: Some(total),
                exhaustive,
                sample,
                ..Bounds::default()
            };
            let mut v = PropertyVerdict::new(property.name(), Status::Fails, bounds)
                .with_witness(Witness::Transfer {
                    generators: sets.iter().map(|s| poly_of(ctx, s).print()).collect(),
                    stage: stage.into(),
                });
            v.elapsed = t0.elapsed();
            return Ok(v);
        }
    }
    let bounds = Bounds {
        dmax: Some(opts.dmax),
        space: Some(total),
        exhaustive,
        sample,
        ..Bounds::default()
    };
    let mut v = PropertyVerdict::new(property.name(), Status::HoldsUpToBound, bounds);
    v.elapsed = t0.elapsed();
    Ok(v)
}

/// Re-establish a stored transfer violation: parse the generators, rerun
/// the stages, and confirm the failure happens at the recorded stage.
pub(crate) fn replay_transfer(
    ctx: &Arc<OreContext>,
    family: AnnFamily,
    generators: &[String],
    stage: &str,
    opts: &CheckOptions,
) -> Result<bool, DecideError> {
    let property = Property::Transfer(family);
    let bad = |reason: &str| DecideError::BadWitness {
        property: property.name(),
        reason: reason.into(),
    };
    let t = ctx
        .ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ctx.ring.label.clone() })?;
    if generators.is_empty() || generators.len() > 2 {
        return Err(bad("transfer sets carry one or two generators"));
    }
    if family == AnnFamily::PrincipallyQuasiBaer && generators.len() != 1 {
        return Err(bad("principal transfer sets carry exactly one generator"));
    }
    let len = opts.dmax as usize + 1;
    let mut coeffs: Vec<Vec<u16>> = Vec::new();
    for g in generators {
        let p = SkewPolynomial::parse(ctx, g)?;
        if p.degree().unwrap_or(0) > opts.dmax as usize {
            return Err(bad("generator degree exceeds the bound"));
        }
        let mut row: Vec<u16> = Vec::new();
        for i in 0..len {
            row.push(
                p.coeff(i)
                    .idx()
                    .ok_or_else(|| bad("generator coefficient is not a table element"))?,
            );
        }
        coeffs.push(row);
    }
    let fast = FastCtx::build(&ctx.ring, &ctx.sigma, &ctx.delta, len + 1)?;
    let scan = TransferScan::new(&fast, t, family, len);
    let sets: Vec<&[u16]> = coeffs.iter().map(|c| c.as_slice()).collect();
    match scan.eval_set(&sets) {
        Err(s) => Ok(s == stage),
        Ok(er) => {
            if stage != STAGE_MEMBERSHIP {
                return Ok(false);
            }
            let q_space = (scan.n as u128).pow(len as u32);
            if q_space > opts.work_cap as u128 {
                return Err(DecideError::BoundTooLarge {
                    space: q_space,
                    cap: opts.work_cap,
                });
            }
            let mut qbuf = vec![0u16; len];
            for qidx in 0..q_space as u64 {
                decode_poly(qidx, scan.n, &mut qbuf);
                if scan.eval_b(&sets, er, &qbuf) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
