//! Property deciders.
//!
//! Elementwise conditions (reversibility, symmetry, rigidity, compatibility
//! and friends) are decided exactly on finite carriers and over a fixed
//! sample pool on structured ones; only the exact scans may answer `Holds`.
//! Polynomial-quantified conditions live in [`armendariz`] and
//! [`polyprops`] and answer `HoldsUpToBound` at best. Annihilator-lattice
//! machinery for the Baer family is here, on dense `u64` subset masks.
//!
//! Every `Fails` verdict carries a witness that [`replay`] can re-evaluate
//! through public ring and polynomial operations alone.

pub mod armendariz;
pub mod fastpoly;
pub mod polyprops;

use crate::elem::Elem;
use crate::error::DecideError;
use crate::morphism::RingMorphism;
use crate::ore::{OreContext, SkewPolynomial};
use crate::ring::{RingInstance, TableRing};
use crate::verdict::{
    AnnFamily, Bounds, CheckOptions, Property, PropertyVerdict, Status, Witness,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

/// Hard cap on distinct annihilator sets tracked during lattice closure.
pub const LATTICE_CAP: usize = 65536;

struct Pool {
    elems: Vec<Elem>,
    exhaustive: bool,
}

fn pool_of(ring: &RingInstance) -> Pool {
    if ring.is_finite() {
        let elems = ring.elements().expect("finite carrier enumerates");
        Pool { elems, exhaustive: true }
    } else {
        Pool { elems: ring.sample_elements(), exhaustive: false }
    }
}

impl Pool {
    fn bounds(&self) -> Bounds {
        if self.exhaustive {
            Bounds::exhaustive_elements()
        } else {
            Bounds::sampled_elements(self.elems.len() as u64)
        }
    }

    fn pass(&self) -> Status {
        if self.exhaustive {
            Status::Holds
        } else {
            Status::HoldsUpToBound
        }
    }
}

fn finish(mut v: PropertyVerdict, t0: Instant) -> PropertyVerdict {
    v.elapsed = t0.elapsed();
    v
}

fn elem_verdict(
    ring: &RingInstance,
    property: Property,
    pool: &Pool,
    witness: Option<Vec<&Elem>>,
    t0: Instant,
) -> PropertyVerdict {
    let v = match witness {
        None => PropertyVerdict::new(property.name(), pool.pass(), pool.bounds()),
        Some(ws) => PropertyVerdict::new(property.name(), Status::Fails, pool.bounds())
            .with_witness(Witness::Elements {
                elems: ws.iter().map(|e| ring.repr(e)).collect(),
            }),
    };
    finish(v, t0)
}

/// Reduced: no nonzero nilpotents, equivalently `a^2 = 0` only for `a = 0`.
pub fn is_reduced(ring: &RingInstance) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        if ring.is_zero(&ring.mul(a, a)) && !ring.is_zero(a) {
            let v = PropertyVerdict::new(Property::Reduced.name(), Status::Fails, pool.bounds())
                .with_witness(Witness::Nilpotent { a: ring.repr(a), power: 2 });
            return finish(v, t0);
        }
    }
    finish(
        PropertyVerdict::new(Property::Reduced.name(), pool.pass(), pool.bounds()),
        t0,
    )
}

/// Reversible: `ab = 0` implies `ba = 0`.
pub fn is_reversible(ring: &RingInstance) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            if ring.is_zero(&ring.mul(a, b)) && !ring.is_zero(&ring.mul(b, a)) {
                return elem_verdict(ring, Property::Reversible, &pool, Some(vec![a, b]), t0);
            }
        }
    }
    elem_verdict(ring, Property::Reversible, &pool, None, t0)
}

/// Symmetric: `abc = 0` implies `acb = 0`.
pub fn is_symmetric(ring: &RingInstance) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            let ab = ring.mul(a, b);
            for c in &pool.elems {
                if ring.is_zero(&ring.mul(&ab, c))
                    && !ring.is_zero(&ring.mul(&ring.mul(a, c), b))
                {
                    return elem_verdict(
                        ring,
                        Property::Symmetric,
                        &pool,
                        Some(vec![a, b, c]),
                        t0,
                    );
                }
            }
        }
    }
    elem_verdict(ring, Property::Symmetric, &pool, None, t0)
}

/// Abelian: every idempotent is central.
pub fn is_abelian(ring: &RingInstance) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for idem in ring.idempotents() {
        for r in &pool.elems {
            let er = ring.mul(&idem.e, r);
            let re = ring.mul(r, &idem.e);
            if er != re {
                let v =
                    PropertyVerdict::new(Property::Abelian.name(), Status::Fails, pool.bounds())
                        .with_witness(Witness::Idempotent {
                            e: ring.repr(&idem.e),
                            partner: ring.repr(r),
                            law: "er != re".into(),
                        });
                return finish(v, t0);
            }
        }
    }
    finish(
        PropertyVerdict::new(Property::Abelian.name(), pool.pass(), pool.bounds()),
        t0,
    )
}

/// Sigma-rigid: `a sigma(a) = 0` implies `a = 0`.
pub fn is_sigma_rigid(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        if ring.is_zero(&ring.mul(a, &sigma.apply(ring, a))) && !ring.is_zero(a) {
            return elem_verdict(ring, Property::SigmaRigid, &pool, Some(vec![a]), t0);
        }
    }
    elem_verdict(ring, Property::SigmaRigid, &pool, None, t0)
}

/// Right sigma-reversible: `ab = 0` implies `b sigma(a) = 0`.
pub fn right_sigma_reversible(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        let sa = sigma.apply(ring, a);
        for b in &pool.elems {
            if ring.is_zero(&ring.mul(a, b)) && !ring.is_zero(&ring.mul(b, &sa)) {
                return elem_verdict(
                    ring,
                    Property::RightSigmaReversible,
                    &pool,
                    Some(vec![a, b]),
                    t0,
                );
            }
        }
    }
    elem_verdict(ring, Property::RightSigmaReversible, &pool, None, t0)
}

/// Left sigma-reversible: `ab = 0` implies `sigma(b) a = 0`.
pub fn left_sigma_reversible(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            if ring.is_zero(&ring.mul(a, b))
                && !ring.is_zero(&ring.mul(&sigma.apply(ring, b), a))
            {
                return elem_verdict(
                    ring,
                    Property::LeftSigmaReversible,
                    &pool,
                    Some(vec![a, b]),
                    t0,
                );
            }
        }
    }
    elem_verdict(ring, Property::LeftSigmaReversible, &pool, None, t0)
}

/// Right sigma-symmetric: `abc = 0` implies `ac sigma(b) = 0`.
pub fn right_sigma_symmetric(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            let ab = ring.mul(a, b);
            let sb = sigma.apply(ring, b);
            for c in &pool.elems {
                if ring.is_zero(&ring.mul(&ab, c))
                    && !ring.is_zero(&ring.mul(&ring.mul(a, c), &sb))
                {
                    return elem_verdict(
                        ring,
                        Property::RightSigmaSymmetric,
                        &pool,
                        Some(vec![a, b, c]),
                        t0,
                    );
                }
            }
        }
    }
    elem_verdict(ring, Property::RightSigmaSymmetric, &pool, None, t0)
}

/// Left sigma-symmetric: `abc = 0` implies `sigma(b) ac = 0`.
pub fn left_sigma_symmetric(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            let ab = ring.mul(a, b);
            let sb = sigma.apply(ring, b);
            for c in &pool.elems {
                if ring.is_zero(&ring.mul(&ab, c))
                    && !ring.is_zero(&ring.mul(&sb, &ring.mul(a, c)))
                {
                    return elem_verdict(
                        ring,
                        Property::LeftSigmaSymmetric,
                        &pool,
                        Some(vec![a, b, c]),
                        t0,
                    );
                }
            }
        }
    }
    elem_verdict(ring, Property::LeftSigmaSymmetric, &pool, None, t0)
}

/// Condition (C_sigma): `a sigma(b) = 0` implies `ab = 0`.
pub fn condition_c_sigma(ring: &RingInstance, sigma: &RingMorphism) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            if ring.is_zero(&ring.mul(a, &sigma.apply(ring, b)))
                && !ring.is_zero(&ring.mul(a, b))
            {
                return elem_verdict(
                    ring,
                    Property::ConditionCSigma,
                    &pool,
                    Some(vec![a, b]),
                    t0,
                );
            }
        }
    }
    elem_verdict(ring, Property::ConditionCSigma, &pool, None, t0)
}

/// (sigma, delta)-compatible: `a sigma(b) = 0 <=> ab = 0`, and
/// `ab = 0 => a delta(b) = 0`.
pub fn is_compatible(
    ring: &RingInstance,
    sigma: &RingMorphism,
    delta: &crate::derivation::SigmaDerivation,
) -> PropertyVerdict {
    let t0 = Instant::now();
    let pool = pool_of(ring);
    for a in &pool.elems {
        for b in &pool.elems {
            let ab_zero = ring.is_zero(&ring.mul(a, b));
            let asb_zero = ring.is_zero(&ring.mul(a, &sigma.apply(ring, b)));
            let adb_zero = ring.is_zero(&ring.mul(a, &delta.apply(ring, sigma, b)));
            if ab_zero != asb_zero || (ab_zero && !adb_zero) {
                return elem_verdict(
                    ring,
                    Property::SigmaDeltaCompatible,
                    &pool,
                    Some(vec![a, b]),
                    t0,
                );
            }
        }
    }
    elem_verdict(ring, Property::SigmaDeltaCompatible, &pool, None, t0)
}

// ---------------------------------------------------------------------
// Annihilator machinery. Subsets of a finite ring are u64 bit masks over
// element indices; the order cap keeps every carrier within 64 bits.

/// `r({a})` as a mask.
pub(crate) fn elem_ann_mask(t: &TableRing, a: u16) -> u64 {
    let mut m = 0u64;
    for b in 0..t.n as u16 {
        if t.muli(a, b) == t.zero {
            m |= 1 << b;
        }
    }
    m
}

/// `r(aR)` as a mask: everything killed by every element of the principal
/// right ideal generated by `a`.
pub(crate) fn principal_ann_mask(t: &TableRing, a: u16) -> u64 {
    let mut m = u64::MAX >> (64 - t.n);
    for r in 0..t.n as u16 {
        m &= elem_ann_mask(t, t.muli(a, r));
    }
    m
}

/// `eR` as a mask.
pub(crate) fn right_ideal_mask(t: &TableRing, e: u16) -> u64 {
    let mut m = 0u64;
    for r in 0..t.n as u16 {
        m |= 1 << t.muli(e, r);
    }
    m
}

pub(crate) fn mask_members(t: &TableRing, mask: u64) -> Vec<u16> {
    (0..t.n as u16).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Idempotent indices together with their right ideals, in index order.
pub(crate) fn idempotent_ideals(t: &TableRing) -> Vec<(u16, u64)> {
    (0..t.n as u16)
        .filter(|&e| t.muli(e, e) == e)
        .map(|e| (e, right_ideal_mask(t, e)))
        .collect()
}

/// One annihilator set: who generated it, what it contains, and which
/// idempotent generates it as a right ideal, if any does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnihilatorSet {
    pub generators: Vec<String>,
    pub members: Vec<String>,
    pub idempotent: Option<String>,
}

fn ann_set(t: &TableRing, ring: &RingInstance, gens: &[u16], mask: u64) -> AnnihilatorSet {
    let idem = idempotent_ideals(t)
        .into_iter()
        .find(|&(_, m)| m == mask)
        .map(|(e, _)| ring.repr(&Elem::Idx(e)));
    AnnihilatorSet {
        generators: gens.iter().map(|&g| ring.repr(&Elem::Idx(g))).collect(),
        members: mask_members(t, mask)
            .into_iter()
            .map(|i| ring.repr(&Elem::Idx(i)))
            .collect(),
        idempotent: idem,
    }
}

/// Exact right annihilator of an explicit element set.
pub fn right_annihilator(
    ring: &RingInstance,
    xs: &[Elem],
) -> Result<AnnihilatorSet, DecideError> {
    let t = ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
    let mut mask = u64::MAX >> (64 - t.n);
    let mut gens = Vec::new();
    for x in xs {
        let i = x.clone().idx().ok_or_else(|| DecideError::BadWitness {
            property: "right-annihilator".into(),
            reason: "element does not belong to a table ring".into(),
        })?;
        gens.push(i);
        mask &= elem_ann_mask(t, i);
    }
    Ok(ann_set(t, ring, &gens, mask))
}

pub(crate) struct AnnEntry {
    pub mask: u64,
    pub gens: Vec<u16>,
}

/// All annihilators in the chosen family, each tagged with a generator
/// set that reproduces it. Baer closes `r({a})` under intersection
/// (annihilators of arbitrary subsets), quasi-Baer closes `r(aR)`
/// (annihilators of right ideals are intersections of principal ones),
/// p.q.-Baer is just the principal list.
pub(crate) fn annihilator_closure(
    t: &TableRing,
    family: AnnFamily,
) -> Result<Vec<AnnEntry>, DecideError> {
    let base: Vec<AnnEntry> = (0..t.n as u16)
        .map(|a| AnnEntry {
            mask: match family {
                AnnFamily::Baer => elem_ann_mask(t, a),
                AnnFamily::QuasiBaer | AnnFamily::PrincipallyQuasiBaer => principal_ann_mask(t, a),
            },
            gens: vec![a],
        })
        .collect();
    let mut seen: HashMap<u64, ()> = HashMap::new();
    let mut out: Vec<AnnEntry> = Vec::new();
    for e in base.iter() {
        if seen.insert(e.mask, ()).is_none() {
            out.push(AnnEntry { mask: e.mask, gens: e.gens.clone() });
        }
    }
    if family == AnnFamily::PrincipallyQuasiBaer {
        return Ok(out);
    }
    // Breadth-first closure under intersection; generator lists grow by
    // one base generator per step, so the first discovery of a mask keeps
    // a minimal-length generator set.
    let mut cursor = 0;
    while cursor < out.len() {
        let (cur_mask, cur_gens) = (out[cursor].mask, out[cursor].gens.clone());
        cursor += 1;
        for b in base.iter() {
            let m = cur_mask & b.mask;
            if !seen.contains_key(&m) {
                seen.insert(m, ());
                let mut gens = cur_gens.clone();
                gens.push(b.gens[0]);
                out.push(AnnEntry { mask: m, gens });
                if out.len() > LATTICE_CAP {
                    return Err(DecideError::LatticeCapExceeded { cap: LATTICE_CAP });
                }
            }
        }
    }
    Ok(out)
}

/// Baer / quasi-Baer / p.q.-Baer, decided exactly: every annihilator in
/// the family must equal `eR` for some idempotent `e`.
pub fn baer_family(ring: &RingInstance, family: AnnFamily) -> Result<PropertyVerdict, DecideError> {
    let t0 = Instant::now();
    let t = ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
    let entries = annihilator_closure(t, family)?;
    let ideals = idempotent_ideals(t);
    let bounds = Bounds {
        space: Some(entries.len() as u128),
        exhaustive: true,
        ..Bounds::default()
    };
    let name = Property::BaerKind(family).name();
    for entry in &entries {
        if !ideals.iter().any(|&(_, m)| m == entry.mask) {
            let set = ann_set(t, ring, &entry.gens, entry.mask);
            let v = PropertyVerdict::new(name, Status::Fails, bounds).with_witness(
                Witness::Annihilator { generators: set.generators, members: set.members },
            );
            return Ok(finish(v, t0));
        }
    }
    Ok(finish(PropertyVerdict::new(name, Status::Holds, bounds), t0))
}

pub fn is_baer(ring: &RingInstance) -> Result<PropertyVerdict, DecideError> {
    baer_family(ring, AnnFamily::Baer)
}

pub fn is_quasi_baer(ring: &RingInstance) -> Result<PropertyVerdict, DecideError> {
    baer_family(ring, AnnFamily::QuasiBaer)
}

pub fn is_pq_baer(ring: &RingInstance) -> Result<PropertyVerdict, DecideError> {
    baer_family(ring, AnnFamily::PrincipallyQuasiBaer)
}

/// Everything the `annihilators` command prints: singleton and principal
/// annihilators, the full intersection closure, and the idempotents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnihilatorReport {
    pub ring: String,
    pub idempotents: Vec<IdempotentLine>,
    pub singletons: Vec<AnnihilatorSet>,
    pub principal: Vec<AnnihilatorSet>,
    pub closure: Vec<AnnihilatorSet>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdempotentLine {
    pub e: String,
    pub central: bool,
    pub right_ideal: Vec<String>,
}

pub fn annihilator_report(ring: &RingInstance) -> Result<AnnihilatorReport, DecideError> {
    let t = ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
    let idempotents = ring
        .idempotents()
        .into_iter()
        .map(|i| {
            let e = i.e.clone().idx().expect("table ring element");
            IdempotentLine {
                e: ring.repr(&i.e),
                central: i.central,
                right_ideal: mask_members(t, right_ideal_mask(t, e))
                    .into_iter()
                    .map(|m| ring.repr(&Elem::Idx(m)))
                    .collect(),
            }
        })
        .collect();
    let singletons = (0..t.n as u16)
        .map(|a| ann_set(t, ring, &[a], elem_ann_mask(t, a)))
        .collect();
    let principal = (0..t.n as u16)
        .map(|a| ann_set(t, ring, &[a], principal_ann_mask(t, a)))
        .collect();
    let closure = annihilator_closure(t, AnnFamily::Baer)?
        .into_iter()
        .map(|e| ann_set(t, ring, &e.gens, e.mask))
        .collect();
    Ok(AnnihilatorReport {
        ring: ring.label.clone(),
        idempotents,
        singletons,
        principal,
        closure,
    })
}

// ---------------------------------------------------------------------

/// Central dispatch: decide any named property on an Ore context.
pub fn decide(
    ctx: &Arc<OreContext>,
    property: Property,
    opts: &CheckOptions,
) -> Result<PropertyVerdict, DecideError> {
    match property {
        Property::Reduced => Ok(is_reduced(&ctx.ring)),
        Property::Reversible => Ok(is_reversible(&ctx.ring)),
        Property::Symmetric => Ok(is_symmetric(&ctx.ring)),
        Property::Abelian => Ok(is_abelian(&ctx.ring)),
        Property::SigmaRigid => Ok(is_sigma_rigid(&ctx.ring, &ctx.sigma)),
        Property::RightSigmaReversible => Ok(right_sigma_reversible(&ctx.ring, &ctx.sigma)),
        Property::LeftSigmaReversible => Ok(left_sigma_reversible(&ctx.ring, &ctx.sigma)),
        Property::RightSigmaSymmetric => Ok(right_sigma_symmetric(&ctx.ring, &ctx.sigma)),
        Property::LeftSigmaSymmetric => Ok(left_sigma_symmetric(&ctx.ring, &ctx.sigma)),
        Property::ConditionCSigma => Ok(condition_c_sigma(&ctx.ring, &ctx.sigma)),
        Property::SigmaDeltaCompatible => {
            Ok(is_compatible(&ctx.ring, &ctx.sigma, &ctx.delta))
        }
        Property::Armendariz(v) => armendariz::armendariz_bounded(ctx, v, opts),
        Property::BaerKind(f) => baer_family(&ctx.ring, f),
        Property::PolyReversible => polyprops::poly_reversible(ctx, opts),
        Property::PolySymmetric => polyprops::poly_symmetric(ctx, opts),
        Property::Transfer(f) => polyprops::transfer(ctx, f, opts),
    }
}

// ---------------------------------------------------------------------
// Witness replay: re-establish a violation through public operations.

fn bad(property: Property, reason: &str) -> DecideError {
    DecideError::BadWitness { property: property.name(), reason: reason.into() }
}

fn parse_elems(
    ring: &RingInstance,
    property: Property,
    reprs: &[String],
    want: usize,
) -> Result<Vec<Elem>, DecideError> {
    if reprs.len() != want {
        return Err(bad(property, "wrong number of elements"));
    }
    reprs
        .iter()
        .map(|s| ring.parse_elem(s).map_err(DecideError::from))
        .collect()
}

/// True when the witness demonstrates a genuine violation of the property
/// on this context. Errors on malformed witnesses; `Ok(false)` means the
/// witness parsed but shows no violation.
pub fn replay(
    ctx: &Arc<OreContext>,
    property: Property,
    witness: &Witness,
    opts: &CheckOptions,
) -> Result<bool, DecideError> {
    let ring = &ctx.ring;
    let zero = |e: &Elem| ring.is_zero(e);
    match (property, witness) {
        (Property::Reduced, Witness::Nilpotent { a, power }) => {
            let a = ring.parse_elem(a)?;
            if *power < 1 {
                return Err(bad(property, "nilpotency power must be positive"));
            }
            let mut p = a.clone();
            for _ in 1..*power {
                p = ring.mul(&p, &a);
            }
            Ok(!zero(&a) && zero(&p))
        }
        (Property::Reversible, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 2)?;
            Ok(zero(&ring.mul(&e[0], &e[1])) && !zero(&ring.mul(&e[1], &e[0])))
        }
        (Property::Symmetric, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 3)?;
            let abc = ring.mul(&ring.mul(&e[0], &e[1]), &e[2]);
            let acb = ring.mul(&ring.mul(&e[0], &e[2]), &e[1]);
            Ok(zero(&abc) && !zero(&acb))
        }
        (Property::Abelian, Witness::Idempotent { e, partner, .. }) => {
            let e = ring.parse_elem(e)?;
            let r = ring.parse_elem(partner)?;
            Ok(ring.mul(&e, &e) == e && ring.mul(&e, &r) != ring.mul(&r, &e))
        }
        (Property::SigmaRigid, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 1)?;
            let sa = ctx.sigma.apply(ring, &e[0]);
            Ok(zero(&ring.mul(&e[0], &sa)) && !zero(&e[0]))
        }
        (Property::RightSigmaReversible, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 2)?;
            let sa = ctx.sigma.apply(ring, &e[0]);
            Ok(zero(&ring.mul(&e[0], &e[1])) && !zero(&ring.mul(&e[1], &sa)))
        }
        (Property::LeftSigmaReversible, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 2)?;
            let sb = ctx.sigma.apply(ring, &e[1]);
            Ok(zero(&ring.mul(&e[0], &e[1])) && !zero(&ring.mul(&sb, &e[0])))
        }
        (Property::RightSigmaSymmetric, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 3)?;
            let abc = ring.mul(&ring.mul(&e[0], &e[1]), &e[2]);
            let acsb = ring.mul(&ring.mul(&e[0], &e[2]), &ctx.sigma.apply(ring, &e[1]));
            Ok(zero(&abc) && !zero(&acsb))
        }
        (Property::LeftSigmaSymmetric, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 3)?;
            let abc = ring.mul(&ring.mul(&e[0], &e[1]), &e[2]);
            let sbac = ring.mul(&ctx.sigma.apply(ring, &e[1]), &ring.mul(&e[0], &e[2]));
            Ok(zero(&abc) && !zero(&sbac))
        }
        (Property::ConditionCSigma, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 2)?;
            let asb = ring.mul(&e[0], &ctx.sigma.apply(ring, &e[1]));
            Ok(zero(&asb) && !zero(&ring.mul(&e[0], &e[1])))
        }
        (Property::SigmaDeltaCompatible, Witness::Elements { elems }) => {
            let e = parse_elems(ring, property, elems, 2)?;
            let ab = zero(&ring.mul(&e[0], &e[1]));
            let asb = zero(&ring.mul(&e[0], &ctx.sigma.apply(ring, &e[1])));
            let adb = zero(&ring.mul(&e[0], &ctx.delta.apply(ring, &ctx.sigma, &e[1])));
            Ok(ab != asb || (ab && !adb))
        }
        (Property::Armendariz(v), Witness::PolyCoeff { polys, i, j }) => {
            if polys.len() != 2 {
                return Err(bad(property, "expected a polynomial pair"));
            }
            let vctx = armendariz::variant_ctx(ctx, v);
            let f = SkewPolynomial::parse(&vctx, &polys[0])?;
            let g = SkewPolynomial::parse(&vctx, &polys[1])?;
            if !f.mul_iterated(&g)?.is_zero() {
                return Ok(false);
            }
            Ok(armendariz::conclusion_violated_at(&vctx, v, &f, &g, *i, *j))
        }
        (Property::PolyReversible, Witness::Polys { polys }) => {
            if polys.len() != 2 {
                return Err(bad(property, "expected a polynomial pair"));
            }
            let f = SkewPolynomial::parse(ctx, &polys[0])?;
            let g = SkewPolynomial::parse(ctx, &polys[1])?;
            Ok(f.mul_iterated(&g)?.is_zero() && !g.mul_iterated(&f)?.is_zero())
        }
        (Property::PolySymmetric, Witness::Polys { polys }) => {
            if polys.len() != 3 {
                return Err(bad(property, "expected a polynomial triple"));
            }
            let f = SkewPolynomial::parse(ctx, &polys[0])?;
            let g = SkewPolynomial::parse(ctx, &polys[1])?;
            let h = SkewPolynomial::parse(ctx, &polys[2])?;
            let fgh = f.mul_iterated(&g)?.mul_iterated(&h)?;
            let fhg = f.mul_iterated(&h)?.mul_iterated(&g)?;
            Ok(fgh.is_zero() && !fhg.is_zero())
        }
        (Property::BaerKind(family), Witness::Annihilator { generators, members }) => {
            let t = ring
                .table()
                .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
            let mut mask = u64::MAX >> (64 - t.n);
            for g in generators {
                let gi = ring
                    .parse_elem(g)?
                    .idx()
                    .ok_or_else(|| bad(property, "generator is not a table element"))?;
                mask &= match family {
                    AnnFamily::Baer => elem_ann_mask(t, gi),
                    AnnFamily::QuasiBaer | AnnFamily::PrincipallyQuasiBaer => {
                        principal_ann_mask(t, gi)
                    }
                };
            }
            if family == AnnFamily::PrincipallyQuasiBaer && generators.len() != 1 {
                return Err(bad(property, "principal annihilators take one generator"));
            }
            let stored: Result<Vec<u16>, DecideError> = members
                .iter()
                .map(|m| {
                    ring.parse_elem(m)?
                        .idx()
                        .ok_or_else(|| bad(property, "member is not a table element"))
                })
                .collect();
            let mut stored_mask = 0u64;
            for i in stored? {
                stored_mask |= 1 << i;
            }
            if stored_mask != mask {
                return Ok(false);
            }
            Ok(!idempotent_ideals(t).iter().any(|&(_, m)| m == mask))
        }
        (Property::Transfer(family), Witness::Transfer { generators, stage }) => {
            polyprops::replay_transfer(ctx, family, generators, stage, opts)
        }
        _ => Err(bad(property, "witness kind does not fit the property")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::MorphismKind;
    use crate::ring::{direct_product, triangular2, zmod};
    use crate::spec::{build_derivation, DerivationSpec};

    fn bool2() -> RingInstance {
        direct_product(vec![zmod(2).unwrap(), zmod(2).unwrap()]).unwrap()
    }

    fn ctx_of(
        ring: RingInstance,
        sigma: Option<MorphismKind>,
    ) -> Arc<OreContext> {
        let ring = Arc::new(ring);
        let sigma = Arc::new(match sigma {
            None => RingMorphism::identity(&ring),
            Some(k) => RingMorphism::from_program(&ring, k, "s").unwrap(),
        });
        let delta = Arc::new(crate::derivation::SigmaDerivation::zero(&ring));
        OreContext::new(ring, sigma, delta)
    }

    #[test]
    fn swap_on_the_boolean_square_breaks_rigidity_and_c_sigma_but_not_symmetry() {
        let ctx = ctx_of(bool2(), Some(MorphismKind::Swap));
        let sym = is_symmetric(&ctx.ring);
        assert_eq!(sym.status, Status::Holds);
        let rig = is_sigma_rigid(&ctx.ring, &ctx.sigma);
        assert_eq!(rig.status, Status::Fails);
        let c = condition_c_sigma(&ctx.ring, &ctx.sigma);
        assert_eq!(c.status, Status::Fails);
        let rrev = right_sigma_reversible(&ctx.ring, &ctx.sigma);
        assert_eq!(rrev.status, Status::Fails);
        for v in [&rig, &c, &rrev] {
            assert!(replay(&ctx, v.property.parse().unwrap(), v.witness.as_ref().unwrap(), &CheckOptions::default()).unwrap());
        }
    }

    #[test]
    fn the_recorded_pair_for_broken_sigma_reversibility_replays() {
        // a=(1,0), b=(0,1): ab=0 and b*sigma(a)=b.
        let ctx = ctx_of(bool2(), Some(MorphismKind::Swap));
        let w = Witness::Elements { elems: vec!["(1,0)".into(), "(0,1)".into()] };
        assert!(replay(&ctx, Property::RightSigmaReversible, &w, &CheckOptions::default()).unwrap());
        let w = Witness::Elements { elems: vec!["(1,0)".into(), "(1,0)".into()] };
        assert!(replay(&ctx, Property::ConditionCSigma, &w, &CheckOptions::default()).unwrap());
    }

    #[test]
    fn zmod4_fails_baer_with_the_two_torsion_annihilator() {
        let ring = zmod(4).unwrap();
        let v = is_baer(&ring).unwrap();
        assert_eq!(v.status, Status::Fails);
        match v.witness.as_ref().unwrap() {
            Witness::Annihilator { generators, members } => {
                assert_eq!(generators, &vec!["2".to_string()]);
                assert_eq!(members, &vec!["0".to_string(), "2".to_string()]);
            }
            w => panic!("unexpected witness {w:?}"),
        }
        // The same sets break the quasi- and principally-quasi variants.
        assert_eq!(is_quasi_baer(&ring).unwrap().status, Status::Fails);
        assert_eq!(is_pq_baer(&ring).unwrap().status, Status::Fails);
    }

    #[test]
    fn the_boolean_square_is_baer_and_fields_have_trivial_annihilators() {
        assert_eq!(is_baer(&bool2()).unwrap().status, Status::Holds);
        let f = zmod(3).unwrap();
        assert_eq!(is_baer(&f).unwrap().status, Status::Holds);
        let report = annihilator_report(&f).unwrap();
        let masks: Vec<usize> = report.closure.iter().map(|s| s.members.len()).collect();
        // A field's only annihilators are R and {0}.
        assert_eq!(report.closure.len(), 2);
        assert!(masks.contains(&3) && masks.contains(&1));
    }

    #[test]
    fn triangular_rings_break_abelian_with_a_matrix_unit_pair() {
        // Upper triangular 2x2 over Z2, built from explicit tables elsewhere;
        // here the order-16 triangular ring stays abelian (idempotents 0, 1).
        let tri = triangular2(4).unwrap();
        assert_eq!(is_abelian(&tri).status, Status::Holds);
    }

    #[test]
    fn annihilator_union_law_matches_intersection() {
        let ring = zmod(4).unwrap();
        let t = ring.table().unwrap();
        for a in 0..4u16 {
            for b in 0..4u16 {
                let ab = set_mask(t, &[a, b]);
                assert_eq!(ab, elem_ann_mask(t, a) & elem_ann_mask(t, b));
            }
        }
        fn set_mask(t: &TableRing, xs: &[u16]) -> u64 {
            let mut m = u64::MAX >> (64 - t.n);
            for &x in xs {
                m &= elem_ann_mask(t, x);
            }
            m
        }
    }

    #[test]
    fn compatibility_on_the_negated_triangular_ring_detects_the_inner_derivation() {
        let ring = Arc::new(triangular2(4).unwrap());
        let sigma = Arc::new(
            RingMorphism::from_program(&ring, MorphismKind::NegateOffdiag, "negate").unwrap(),
        );
        let delta = Arc::new(
            build_derivation(&ring, &sigma, &DerivationSpec::Inner { c: "[1,1]".into() }).unwrap(),
        );
        let v = is_compatible(&ring, &sigma, &delta);
        // delta([0,1]) = [0,2] != 0 while [2,0]*[0,1] = 0 and [2,0]*[0,2] = 0;
        // the violating pair has a*b = 0 with a*delta(b) != 0.
        if v.status == Status::Fails {
            let ctx = OreContext::new(ring.clone(), sigma.clone(), delta.clone());
            assert!(replay(
                &ctx,
                Property::SigmaDeltaCompatible,
                v.witness.as_ref().unwrap(),
                &CheckOptions::default()
            )
            .unwrap());
        }
    }
}
