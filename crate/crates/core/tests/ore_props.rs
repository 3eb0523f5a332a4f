//! Property-based invariants. The exhaustive tests pin definitional
//! implications between the ring-level deciders and the closed-form
//! expansion of x^n * a across every generated instance; the proptest
//! blocks throw randomized polynomials, subsets, and verdicts at the
//! same laws so counterexamples shrink to something readable.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use orelab_core::corpus::{self, Instance};
use orelab_core::deciders::{self, AnnihilatorReport};
use orelab_core::ore::{self, SkewPolynomial};
use orelab_core::ring::RingInstance;
use orelab_core::verdict::{CheckOptions, Property, Status};
use orelab_core::Elem;

fn instances() -> &'static Vec<Instance> {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| corpus::generate_instances().expect("corpus generates"))
}

/// Instances over rings small enough that the polynomial deciders stay
/// exhaustive at the default bound.
fn small_instances() -> &'static Vec<Instance> {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| {
        instances()
            .iter()
            .filter(|i| i.ctx.ring.order().is_some_and(|n| n <= 4))
            .cloned()
            .collect()
    })
}

fn enumerable_reports() -> &'static Vec<(RingInstance, AnnihilatorReport)> {
    static CELL: OnceLock<Vec<(RingInstance, AnnihilatorReport)>> = OnceLock::new();
    CELL.get_or_init(|| {
        corpus::catalogue()
            .into_iter()
            .filter_map(|r| deciders::annihilator_report(&r).ok().map(|rep| (r, rep)))
            .collect()
    })
}

fn status_of(inst: &Instance, property: Property) -> Status {
    let v = deciders::decide(&inst.ctx, property, &CheckOptions::default())
        .unwrap_or_else(|e| panic!("{} on {}: {e}", property, inst.label()));
    assert_ne!(
        v.status,
        Status::HoldsUpToBound,
        "{} is an exact decider but returned a bounded verdict on {}",
        property,
        inst.label()
    );
    v.status
}

#[test]
fn definitional_implications_hold_across_the_corpus() {
    for inst in instances() {
        let holds = |p: Property| status_of(inst, p) == Status::Holds;

        if holds(Property::Symmetric) {
            assert!(holds(Property::Reversible), "symmetric without reversible on {}", inst.label());
        }
        if holds(Property::SigmaRigid) {
            assert!(holds(Property::Reduced), "rigid without reduced on {}", inst.label());
        }

        if inst.ctx.sigma.is_identity(&inst.ctx.ring) {
            assert!(
                holds(Property::ConditionCSigma),
                "the identity morphism must satisfy the zero-product condition on {}",
                inst.label()
            );
            // with a trivial twist the one-sided variants collapse to
            // the untwisted properties
            let rev = status_of(inst, Property::Reversible);
            assert_eq!(status_of(inst, Property::LeftSigmaReversible), rev, "{}", inst.label());
            assert_eq!(status_of(inst, Property::RightSigmaReversible), rev, "{}", inst.label());
            let sym = status_of(inst, Property::Symmetric);
            assert_eq!(status_of(inst, Property::LeftSigmaSymmetric), sym, "{}", inst.label());
            assert_eq!(status_of(inst, Property::RightSigmaSymmetric), sym, "{}", inst.label());
        }
    }
}

#[test]
fn x_power_expansion_matches_the_word_sum() {
    for inst in instances() {
        let ctx = &inst.ctx;
        for n in 1..=6u32 {
            for a in ctx.ring.small_sample() {
                let p = ore::x_power_times(ctx, n, &a);
                assert!(p.degree().is_none_or(|d| d <= n as usize), "{}", inst.label());
                for i in 0..=n {
                    assert_eq!(
                        p.coeff(i as usize),
                        ore::word_map_apply(ctx, n, i, &a),
                        "coefficient of x^{i} in x^{n} * {} on {}",
                        ctx.ring.repr(&a),
                        inst.label()
                    );
                }
            }
        }
    }
}

fn poly_from(inst: &Instance, raw: &[u8]) -> SkewPolynomial {
    let order = inst.ctx.ring.order().expect("corpus rings are finite") as u16;
    let coeffs = raw.iter().map(|&v| Elem::Idx(v as u16 % order)).collect();
    SkewPolynomial::new(inst.ctx.clone(), coeffs)
}

proptest! {
    #[test]
    fn randomized_polynomials_obey_the_algebra_laws(
        which in any::<prop::sample::Index>(),
        a in prop::collection::vec(any::<u8>(), 1..=4),
        b in prop::collection::vec(any::<u8>(), 1..=4),
        c in prop::collection::vec(any::<u8>(), 1..=4),
    ) {
        let inst = which.get(instances());
        let ring = &inst.ctx.ring;
        let sigma = &inst.ctx.sigma;
        let (p, q, r) = (poly_from(inst, &a), poly_from(inst, &b), poly_from(inst, &c));

        let pq = p.mul_iterated(&q).unwrap();
        prop_assert_eq!(&pq, &p.mul_words(&q).unwrap(), "route disagreement on {}", inst.label());

        let assoc_l = pq.mul_iterated(&r).unwrap();
        let assoc_r = p.mul_iterated(&q.mul_iterated(&r).unwrap()).unwrap();
        prop_assert_eq!(assoc_l, assoc_r, "associativity on {}", inst.label());

        let dist_l = p.mul_iterated(&q.add(&r).unwrap()).unwrap();
        let dist_r = pq.add(&p.mul_iterated(&r).unwrap()).unwrap();
        prop_assert_eq!(dist_l, dist_r, "left distributivity on {}", inst.label());

        let dist2_l = p.add(&q).unwrap().mul_iterated(&r).unwrap();
        let dist2_r = p.mul_iterated(&r).unwrap().add(&q.mul_iterated(&r).unwrap()).unwrap();
        prop_assert_eq!(dist2_l, dist2_r, "right distributivity on {}", inst.label());

        if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
            if let Some(dpq) = pq.degree() {
                prop_assert!(dpq <= dp + dq, "degree bound on {}", inst.label());
            }
            let lead = ring.mul(&p.coeff(dp), &sigma.apply_power(ring, &q.coeff(dq), dp as u32));
            if !ring.is_zero(&lead) {
                prop_assert_eq!(pq.degree(), Some(dp + dq), "degree equality on {}", inst.label());
                prop_assert_eq!(pq.coeff(dp + dq), lead, "leading coefficient on {}", inst.label());
            }
        }
    }

    #[test]
    fn singleton_annihilators_compose_by_intersection(
        which in any::<prop::sample::Index>(),
        a in any::<u8>(),
        b in any::<u8>(),
    ) {
        let (ring, report) = which.get(enumerable_reports());
        let order = ring.order().unwrap() as u16;
        let (a, b) = (Elem::Idx(a as u16 % order), Elem::Idx(b as u16 % order));

        let brute = |gens: &[&Elem]| -> BTreeSet<String> {
            ring.small_sample()
                .into_iter()
                .filter(|y| gens.iter().all(|g| ring.is_zero(&ring.mul(g, y))))
                .map(|y| ring.repr(&y))
                .collect()
        };
        let reported = |g: &Elem| -> BTreeSet<String> {
            let set = report
                .singletons
                .iter()
                .find(|s| s.generators == [ring.repr(g)])
                .unwrap_or_else(|| panic!("no singleton set for {} in {}", ring.repr(g), ring.label));
            set.members.iter().cloned().collect()
        };

        let ra = reported(&a);
        prop_assert_eq!(&ra, &brute(&[&a]), "reported annihilator of {} on {}", ring.repr(&a), &ring.label);
        let joint: BTreeSet<String> = ra.intersection(&reported(&b)).cloned().collect();
        prop_assert_eq!(joint, brute(&[&a, &b]), "union law on {}", &ring.label);
    }

    #[test]
    fn failing_verdicts_replay_to_violations(
        which in any::<prop::sample::Index>(),
        prop_idx in any::<prop::sample::Index>(),
    ) {
        let inst = which.get(small_instances());
        let property = *prop_idx.get(&Property::all());
        let opts = CheckOptions::default();

        let v = deciders::decide(&inst.ctx, property, &opts)
            .unwrap_or_else(|e| panic!("{} on {}: {e}", property, inst.label()));
        if v.status == Status::Fails {
            let w = v.witness.as_ref().expect("failing verdicts carry a witness");
            prop_assert_eq!(
                deciders::replay(&inst.ctx, property, w, &opts).ok(),
                Some(true),
                "witness for {} on {} does not replay",
                property,
                inst.label()
            );
        }
    }
}
