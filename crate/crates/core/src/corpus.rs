//! The built-in corpus: catalogue rings, endomorphism search, derivation
//! enumeration, the deterministic instance stream, and the stored example
//! fixtures with their expected verdicts.

use crate::derivation::SigmaDerivation;
use crate::error::{BuildError, DecideError};
use crate::morphism::{MorphismKind, RingMorphism};
use crate::ore::OreContext;
use crate::ring::{self, RingInstance, TableRing};
use crate::spec::{self, BuildOptions, RingSpecDoc};
use crate::verdict::{Property, Status, Witness};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

/// The small rings every harness run ranges over. Chosen so that each
/// decidable property holds on some entries and fails on others.
pub fn catalogue() -> Vec<RingInstance> {
    let mut bool2 = ring::direct_product(vec![
        ring::zmod(2).expect("static catalogue entry"),
        ring::zmod(2).expect("static catalogue entry"),
    ])
    .expect("static catalogue entry");
    bool2.label = "bool2".into();
    vec![
        ring::zmod(2).expect("static catalogue entry"),
        ring::zmod(3).expect("static catalogue entry"),
        ring::zmod(4).expect("static catalogue entry"),
        bool2,
        ring::ut2_z2().expect("static catalogue entry"),
        ring::triangular2(4).expect("static catalogue entry"),
    ]
}

/// A greedy additive generating set: walk the carrier in index order and
/// keep every element outside the span of what was kept so far.
fn additive_generators(t: &TableRing) -> Vec<u16> {
    let mut in_span = vec![false; t.n];
    in_span[t.zero as usize] = true;
    let mut span: Vec<u16> = vec![t.zero];
    let mut gens = Vec::new();
    for i in 0..t.n as u16 {
        if in_span[i as usize] {
            continue;
        }
        gens.push(i);
        in_span[i as usize] = true;
        span.push(i);
        let mut queue = vec![i];
        while let Some(a) = queue.pop() {
            for idx in 0..span.len() {
                let s = t.addi(a, span[idx]);
                if !in_span[s as usize] {
                    in_span[s as usize] = true;
                    span.push(s);
                    queue.push(s);
                }
            }
        }
    }
    gens
}

/// Propagate generator images through the additive group. Returns the full
/// table, or `None` on an additive-order clash (the early pruning); full
/// law validation happens later.
fn extend_additively(t: &TableRing, gens: &[u16], images: &[u16]) -> Option<Vec<u16>> {
    let mut phi: Vec<Option<u16>> = vec![None; t.n];
    phi[t.zero as usize] = Some(t.zero);
    let mut queue: Vec<u16> = vec![t.zero];
    while let Some(a) = queue.pop() {
        let pa = phi[a as usize].expect("queued elements carry images");
        for (&g, &m) in gens.iter().zip(images) {
            let b = t.addi(a, g);
            let v = t.addi(pa, m);
            match phi[b as usize] {
                None => {
                    phi[b as usize] = Some(v);
                    queue.push(b);
                }
                Some(w) if w != v => return None,
                _ => {}
            }
        }
    }
    phi.into_iter().collect()
}

fn nice_label(ring: &RingInstance, m: &RingMorphism, counter: usize) -> String {
    if m.is_identity(ring) {
        return "id".into();
    }
    for (kind, label) in [
        (MorphismKind::Swap, "swap"),
        (MorphismKind::NegateOffdiag, "negate-offdiag"),
    ] {
        if let Ok(known) = RingMorphism::from_program(ring, kind, label) {
            if known.table == m.table {
                return label.into();
            }
        }
    }
    format!("endo-{counter}")
}

/// All unital ring endomorphisms of a finite carrier, found by brute
/// force over generator images with additive pruning, then full exhaustive
/// law validation. Deterministic: results are ordered by action table.
pub fn enumerate_endomorphisms(
    ring: &RingInstance,
) -> Result<Vec<RingMorphism>, DecideError> {
    let t = ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
    let gens = additive_generators(t);
    let n = t.n as u64;
    let mut tables: Vec<Vec<u16>> = Vec::new();
    for cand in 0..n.pow(gens.len() as u32) {
        let mut k = cand;
        let images: Vec<u16> = gens
            .iter()
            .map(|_| {
                let v = (k % n) as u16;
                k /= n;
                v
            })
            .collect();
        if let Some(tab) = extend_additively(t, &gens, &images) {
            if tab[t.one as usize] == t.one {
                tables.push(tab);
            }
        }
    }
    tables.sort();
    tables.dedup();
    let mut out = Vec::new();
    for tab in tables {
        // Exhaustive homomorphism validation filters the pruning survivors.
        if let Ok(mut m) = RingMorphism::from_table(ring, tab, "endo") {
            m.label = nice_label(ring, &m, out.len());
            out.push(m);
        }
    }
    Ok(out)
}

/// The zero derivation plus every distinct inner derivation
/// `a -> ca - sigma(a)c`, deduplicated by action table.
pub fn enumerate_derivations(
    ring: &RingInstance,
    sigma: &RingMorphism,
) -> Result<Vec<SigmaDerivation>, DecideError> {
    let _ = ring
        .table()
        .ok_or_else(|| DecideError::NotEnumerable { ring: ring.label.clone() })?;
    let zero = SigmaDerivation::zero(ring);
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    seen.insert(zero.table.clone().expect("finite derivations are tabulated"));
    let mut out = vec![zero];
    for c in ring.elements()? {
        if let Ok(d) = SigmaDerivation::inner(ring, sigma, &c) {
            let tab = d.table.clone().expect("finite derivations are tabulated");
            if seen.insert(tab) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// One corpus point: a validated Ore context plus its stream position.
#[derive(Clone)]
pub struct Instance {
    pub index: usize,
    pub ctx: Arc<OreContext>,
}

impl Instance {
    pub fn label(&self) -> String {
        format!(
            "{} / {} / {}",
            self.ctx.ring.label, self.ctx.sigma.label, self.ctx.delta.label
        )
    }
}

/// Generation policy: exhaustive catalogue x endomorphisms x derivations.
/// The sequence is fully deterministic; the seed is carried along for the
/// downstream sampled scans, not for generation.
pub struct InstanceStream {
    pub seed: u64,
}

impl Default for InstanceStream {
    fn default() -> InstanceStream {
        InstanceStream { seed: 1729 }
    }
}

impl InstanceStream {
    pub fn instances(&self) -> Result<Vec<Instance>, DecideError> {
        generate_instances()
    }
}

pub fn generate_instances() -> Result<Vec<Instance>, DecideError> {
    let mut out: Vec<Instance> = Vec::new();
    for r in catalogue() {
        let ring = Arc::new(r);
        for sigma in enumerate_endomorphisms(&ring)? {
            let sigma = Arc::new(sigma);
            for delta in enumerate_derivations(&ring, &sigma)? {
                out.push(Instance {
                    index: out.len(),
                    ctx: OreContext::new(ring.clone(), sigma.clone(), Arc::new(delta)),
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Fixtures.

/// One expected verdict: the property, the status the deciders must
/// report, the degree bound to run at (when it matters), and the stored
/// witness that must replay as a genuine violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEntry {
    pub property: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

fn default_var() -> String {
    "x".into()
}

/// The on-disk fixture format: a ring-spec document (carrier, morphisms,
/// derivations) extended with a name, the extension variable, expected
/// verdicts, and free-form notes for externally asserted claims.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub name: String,
    #[serde(flatten)]
    pub spec: RingSpecDoc,
    #[serde(default = "default_var")]
    pub var: String,
    pub expected: Vec<ExpectedEntry>,
    #[serde(default)]
    pub notes: Vec<String>,
}

pub struct Fixture {
    pub name: String,
    pub ctx: Arc<OreContext>,
    pub expected: Vec<ExpectedEntry>,
    pub notes: Vec<String>,
}

pub const FIXTURE_NAMES: [&str; 5] = ["ex-1.4", "ex-1.5", "ex-1.6", "ex-2.2", "ex-3.2"];

fn fixture_source(name: &str) -> Option<&'static str> {
    match name {
        "ex-1.4" => Some(include_str!("../fixtures/ex-1.4.json")),
        "ex-1.5" => Some(include_str!("../fixtures/ex-1.5.json")),
        "ex-1.6" => Some(include_str!("../fixtures/ex-1.6.json")),
        "ex-2.2" => Some(include_str!("../fixtures/ex-2.2.json")),
        "ex-3.2" => Some(include_str!("../fixtures/ex-3.2.json")),
        _ => None,
    }
}

pub fn fixture_from_doc(doc: FixtureDoc) -> Result<Fixture, BuildError> {
    for e in &doc.expected {
        e.property
            .parse::<Property>()
            .map_err(BuildError::BadDocument)?;
    }
    let built = spec::build_doc(&doc.spec, &BuildOptions::default())?;
    let sigma = built
        .morphisms
        .first()
        .cloned()
        .unwrap_or_else(|| Arc::new(RingMorphism::identity(&built.ring)));
    let delta = built
        .derivations
        .first()
        .cloned()
        .unwrap_or_else(|| Arc::new(SigmaDerivation::zero(&built.ring)));
    let ctx = OreContext::with_var(built.ring, sigma, delta, &doc.var);
    Ok(Fixture { name: doc.name, ctx, expected: doc.expected, notes: doc.notes })
}

pub fn fixture_from_text(text: &str) -> Result<Fixture, BuildError> {
    let doc: FixtureDoc =
        serde_json::from_str(text).map_err(|e| BuildError::BadDocument(e.to_string()))?;
    fixture_from_doc(doc)
}

pub fn load_fixture(name: &str) -> Result<Fixture, BuildError> {
    let src =
        fixture_source(name).ok_or_else(|| BuildError::UnknownFixture(name.to_string()))?;
    fixture_from_text(src)
}

pub fn all_fixtures() -> Result<Vec<Fixture>, BuildError> {
    FIXTURE_NAMES.iter().map(|n| load_fixture(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endomorphism_counts_match_hand_enumeration() {
        // zmod(n): a unital additive map on a cyclic group is fixed by the
        // image of 1. bool2: identity, swap, and the two fold-throughs.
        // The two order-16 carriers were counted by hand from their
        // generator constraints.
        let expected = [
            ("zmod2", 1),
            ("zmod3", 1),
            ("zmod4", 1),
            ("bool2", 4),
            ("ut2-z2", 8),
            ("tri2-z4", 8),
        ];
        for (label, want) in expected {
            let ring = catalogue()
                .into_iter()
                .find(|r| r.label == label)
                .unwrap();
            let endos = enumerate_endomorphisms(&ring).unwrap();
            assert_eq!(endos.len(), want, "{label}");
            assert!(endos.iter().any(|m| m.is_identity(&ring)), "{label}");
            assert!(endos.iter().all(|m| m.unital), "{label}");
        }
    }

    #[test]
    fn generator_search_agrees_with_the_dumb_full_enumeration() {
        // Independent oracle: filter all n^n maps by the raw laws.
        for ring in catalogue().into_iter().filter(|r| r.order() == Some(4)) {
            let t = ring.table().unwrap();
            let n = t.n as u64;
            let mut slow: Vec<Vec<u16>> = Vec::new();
            for cand in 0..n.pow(n as u32) {
                let mut k = cand;
                let tab: Vec<u16> = (0..n)
                    .map(|_| {
                        let v = (k % n) as u16;
                        k /= n;
                        v
                    })
                    .collect();
                if tab[t.one as usize] != t.one {
                    continue;
                }
                let additive = (0..t.n as u16).all(|a| {
                    (0..t.n as u16).all(|b| {
                        tab[t.addi(a, b) as usize] == t.addi(tab[a as usize], tab[b as usize])
                    })
                });
                let multiplicative = (0..t.n as u16).all(|a| {
                    (0..t.n as u16).all(|b| {
                        tab[t.muli(a, b) as usize] == t.muli(tab[a as usize], tab[b as usize])
                    })
                });
                if additive && multiplicative {
                    slow.push(tab);
                }
            }
            slow.sort();
            let fast: Vec<Vec<u16>> = enumerate_endomorphisms(&ring)
                .unwrap()
                .into_iter()
                .map(|m| m.table.unwrap())
                .collect();
            assert_eq!(fast, slow, "{}", ring.label);
        }
    }

    #[test]
    fn swap_on_the_boolean_square_carries_four_distinct_derivations() {
        let ring = catalogue().into_iter().find(|r| r.label == "bool2").unwrap();
        let endos = enumerate_endomorphisms(&ring).unwrap();
        let swap = endos.iter().find(|m| m.label == "swap").unwrap();
        let id = endos.iter().find(|m| m.label == "id").unwrap();
        // Inner derivations against the identity vanish on a commutative
        // carrier; against swap, the three nonzero elements give three
        // distinct maps.
        assert_eq!(enumerate_derivations(&ring, id).unwrap().len(), 1);
        assert_eq!(enumerate_derivations(&ring, swap).unwrap().len(), 4);
    }

    #[test]
    fn the_instance_stream_is_deterministic_and_counts_its_slices() {
        let a = generate_instances().unwrap();
        let b = InstanceStream::default().instances().unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.index, y.index);
            assert_eq!(x.label(), y.label());
        }
        let slice = |label: &str| a.iter().filter(|i| i.ctx.ring.label == label).count();
        assert_eq!(slice("zmod2"), 1);
        assert_eq!(slice("zmod3"), 1);
        assert_eq!(slice("zmod4"), 1);
        assert_eq!(slice("bool2"), 9);
        assert_eq!(slice("ut2-z2"), 34);
        assert_eq!(slice("tri2-z4"), 27);
        assert_eq!(a.len(), 73);
    }

    #[test]
    fn fixtures_load_and_unknown_names_are_refused() {
        for name in FIXTURE_NAMES {
            let f = load_fixture(name).unwrap();
            assert_eq!(f.name, name);
            assert!(!f.expected.is_empty(), "{name}");
        }
        assert!(matches!(
            load_fixture("ex-9.9"),
            Err(BuildError::UnknownFixture(_))
        ));
        assert_eq!(all_fixtures().unwrap().len(), FIXTURE_NAMES.len());
    }

    #[test]
    fn fixture_documents_round_trip_through_serde() {
        for name in FIXTURE_NAMES {
            let text = fixture_source(name).unwrap();
            let doc: FixtureDoc = serde_json::from_str(text).unwrap();
            let json = serde_json::to_string(&doc).unwrap();
            let doc2: FixtureDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(doc, doc2);
        }
    }

    #[test]
    fn stored_fixture_witnesses_replay_as_genuine_violations() {
        use crate::deciders::replay;
        use crate::verdict::CheckOptions;
        for f in all_fixtures().unwrap() {
            for e in &f.expected {
                let Some(w) = &e.witness else { continue };
                let property: Property = e.property.parse().unwrap();
                let opts = CheckOptions {
                    dmax: e.dmax.unwrap_or(CheckOptions::default().dmax),
                    ..CheckOptions::default()
                };
                assert!(
                    replay(&f.ctx, property, w, &opts).unwrap(),
                    "{}: stored witness for {} does not replay",
                    f.name,
                    e.property
                );
            }
        }
    }

    #[test]
    fn the_twisted_triangular_ring_is_in_the_stream_with_its_morphism() {
        let instances = generate_instances().unwrap();
        assert!(instances.iter().any(|i| {
            i.ctx.ring.label == "tri2-z4"
                && i.ctx.sigma.label == "negate-offdiag"
                && i.ctx.delta.label == "zero"
        }));
    }
}
