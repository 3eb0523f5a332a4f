//! Replay of the recorded examples and a counterexample sweep of every
//! verified statement over the generated instance corpus.
//!
//! Each statement is compiled to a per-instance check. An instance
//! *qualifies* when it satisfies the statement's hypotheses at the
//! configured bound; qualifying instances are then scanned for violations
//! of the conclusion. Three outcomes are tracked per check and their sum
//! must equal the corpus size: `qualifying + non_qualifying + errored`.
//!
//! Bounded hypotheses earn limited trust. When a conclusion violation
//! turns up, every hypothesis that was only verified up to the bound is
//! re-verified at twice the bound before the violation is believed: a
//! hypothesis that collapses there reclassifies the instance as
//! non-qualifying, and an implication antecedent that collapses drops
//! just that violation. Exact hypotheses need no escalation.
//!
//! A check with an empty qualifying set proves nothing. It is reported
//! as "no qualifying instance" and fails the run-level gate, never
//! counted as a pass.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::corpus::{self, Fixture, Instance};
use crate::deciders::{
    self,
    fastpoly::{decode_poly, FastCtx, ScanPlan},
};
use crate::error::DecideError;
use crate::verdict::{
    ArmVariant, CheckOptions, Property, PropertyVerdict, Status, Witness,
    ANN_FAMILIES,
};

/// Version tag stamped into every machine-readable report.
pub const REPORT_SCHEMA: &str = "orelab-report/1";

/// Check ids in presentation order.
pub const THEOREM_IDS: [&str; 11] = [
    "lem-1.2", "lem-1.3", "prop-2.1", "lem-2.4", "thm-2.5", "thm-2.6",
    "lem-3.1", "thm-3.3", "thm-3.4", "lem-4.1", "thm-4.2",
];

fn statement_of(id: &str) -> &'static str {
    match id {
        "lem-1.2" => {
            "sigma-delta-skew-armendariz (bounded) with condition-c-sigma: \
             ab = 0 forces sigma^n(a) b = 0 and delta^n(a) b = 0 for n <= 3"
        }
        "lem-1.3" => {
            "sigma-delta-skew-armendariz (bounded), condition-c-sigma, and \
             reversible: ab = 0 forces a w(b) = 0 for every sigma/delta word \
             w of length j <= 3"
        }
        "prop-2.1" => {
            "sigma-delta-skew-armendariz with condition-c-sigma, or \
             isfahani-skew-armendariz with poly-symmetric, implies \
             sigma-delta-untwisted-armendariz"
        }
        "lem-2.4" => {
            "sigma-delta-skew-armendariz (bounded) with condition-c-sigma: \
             fgh = 0 forces a_i b_j c_k = 0 coefficientwise for degree <= 1 \
             triples"
        }
        "thm-2.5" => {
            "under sigma-delta-skew-armendariz with condition-c-sigma, \
             reversible and symmetric each transfer to the skew polynomial \
             extension and back"
        }
        "thm-2.6" => {
            "sigma-armendariz holds exactly when sigma-skew-armendariz and \
             condition-c-sigma both hold"
        }
        "lem-3.1" => {
            "under condition-c-sigma, reversible coincides with \
             sigma-reversible and symmetric with sigma-symmetric"
        }
        "thm-3.3" => {
            "under sigma-delta-skew-armendariz with condition-c-sigma: \
             reversible, sigma-reversible, right-sigma-reversible, and \
             poly-reversible are equivalent"
        }
        "thm-3.4" => {
            "under sigma-delta-skew-armendariz with condition-c-sigma: \
             symmetric, sigma-symmetric, right-sigma-symmetric, and \
             poly-symmetric are equivalent"
        }
        "lem-4.1" => {
            "right-sigma-reversible with unital sigma: every idempotent is \
             fixed by sigma, killed by delta, and central"
        }
        "thm-4.2" => {
            "right-sigma-reversible with condition-c-sigma and unital sigma: \
             baer, quasi-baer, and pq-baer each transfer to the skew \
             polynomial extension"
        }
        other => panic!("unknown check id {other:?}"),
    }
}

// ---------------------------------------------------------------------
// Report types.

/// One expectation from a recorded fixture, compared against a fresh run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryOutcome {
    pub property: String,
    pub expected: Status,
    /// Status the decider produced, or "not-enumerable" / "error: ..".
    pub observed: String,
    /// Whether the stored witness replayed as a genuine violation.
    /// Absent when the entry stores no witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_replayed: Option<bool>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub pass: bool,
    pub entries: Vec<EntryOutcome>,
}

/// A conclusion that failed on a qualifying instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub instance: String,
    /// The implication that broke, written `antecedent => consequent`.
    pub direction: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Bound at which the hypotheses were last re-verified before this
    /// violation was accepted.
    pub hyp_dmax: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremOutcome {
    pub id: String,
    pub statement: String,
    /// Degree bound the conclusions were scanned at.
    pub dmax: u32,
    pub qualifying: usize,
    pub non_qualifying: usize,
    pub errored: usize,
    /// Qualifying instances whose derivation is zero (the twisted
    /// polynomial ring slice).
    pub delta_zero_qualifying: usize,
    /// Qualifying instances whose endomorphism is the identity (the
    /// differential polynomial ring slice).
    pub sigma_identity_qualifying: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
    /// Wall-clock cost, excluded from machine output for byte stability.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TheoremOutcome {
    /// No violations and no errored instance. Vacuity is judged at the
    /// report level, which also demands a nonempty qualifying set.
    pub fn clean(&self) -> bool {
        self.violations.is_empty() && self.errored == 0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub dmax: u32,
    pub seed: u64,
    pub total_instances: usize,
    pub fixtures: Vec<FixtureOutcome>,
    pub theorems: Vec<TheoremOutcome>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    /// Every fixture entry matched, every check was clean with at least
    /// one qualifying instance, and every check accounted for the whole
    /// corpus.
    pub fn passed(&self) -> bool {
        let fixtures = self.fixtures.iter().all(|f| f.pass);
        let theorems = self.theorems.iter().all(|t| {
            t.clean()
                && t.qualifying > 0
                && t.qualifying + t.non_qualifying + t.errored == self.total_instances
        });
        fixtures && theorems
    }

    pub fn to_machine_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} | dmax {} | seed {} | {} instances",
            self.schema, self.dmax, self.seed, self.total_instances
        );
        for f in &self.fixtures {
            let _ = writeln!(s, "fixture {}: {}", f.name, if f.pass { "pass" } else { "FAIL" });
            for e in &f.entries {
                let _ = write!(s, "  {}: expected {}, observed {}", e.property, e.expected, e.observed);
                match e.witness_replayed {
                    Some(true) => s.push_str(", witness replayed"),
                    Some(false) => s.push_str(", witness DID NOT replay"),
                    None => {}
                }
                if let Some(d) = &e.detail {
                    let _ = write!(s, " ({d})");
                }
                s.push('\n');
            }
        }
        for t in &self.theorems {
            let verdict = if t.qualifying == 0 {
                "no qualifying instance".to_string()
            } else if t.clean() {
                "pass".to_string()
            } else {
                format!("FAIL ({} violations, {} errors)", t.violations.len(), t.errored)
            };
            let _ = writeln!(s, "check {}: {}", t.id, verdict);
            let _ = writeln!(s, "  {}", t.statement);
            let _ = writeln!(
                s,
                "  qualifying {} (delta zero {}, sigma identity {}), non-qualifying {}, \
                 errored {}, dmax {}, {:.2?}",
                t.qualifying,
                t.delta_zero_qualifying,
                t.sigma_identity_qualifying,
                t.non_qualifying,
                t.errored,
                t.dmax,
                t.elapsed
            );
            for v in &t.violations {
                let _ = write!(s, "  violation [{}] {}: {}", v.instance, v.direction, v.detail);
                if let Some(w) = &v.witness {
                    let _ = write!(s, " witness {}", serde_json::to_string(w).expect("witness serializes"));
                }
                let _ = writeln!(s, " (hypotheses re-verified at dmax {})", v.hyp_dmax);
            }
            for e in &t.errors {
                let _ = writeln!(s, "  error: {e}");
            }
        }
        let _ = writeln!(
            s,
            "result: {} in {:.2?}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed
        );
        s
    }
}

// ---------------------------------------------------------------------
// Fixture replay.

/// Re-decide every recorded expectation and replay every stored witness.
///
/// An entry passes when the decider reproduces the recorded status and
/// the stored witness, if any, demonstrates a genuine violation through
/// public operations. On structured-infinite carriers where the bounded
/// decider cannot enumerate, an entry expecting `fails` may still pass
/// purely on witness replay; anything else is a failure.
pub fn check_fixture(fixture: &Fixture, opts: &CheckOptions) -> FixtureOutcome {
    let mut entries = Vec::new();
    for entry in &fixture.expected {
        let property: Property = match entry.property.parse() {
            Ok(p) => p,
            Err(reason) => {
                entries.push(EntryOutcome {
                    property: entry.property.clone(),
                    expected: entry.status,
                    observed: format!("error: {reason}"),
                    witness_replayed: None,
                    pass: false,
                    detail: Some("unknown property name".into()),
                });
                continue;
            }
        };
        let run = CheckOptions { dmax: entry.dmax.unwrap_or(opts.dmax), ..*opts };
        let replayed = entry.witness.as_ref().map(|w| {
            deciders::replay(&fixture.ctx, property, w, &run).unwrap_or(false)
        });
        let witness_ok = replayed.unwrap_or(true);
        let outcome = match deciders::decide(&fixture.ctx, property, &run) {
            Ok(v) => {
                let status_ok = v.status == entry.status;
                let detail = if !status_ok {
                    Some(format!("decider says {}", v.status))
                } else if !witness_ok {
                    Some("stored witness did not replay".into())
                } else {
                    None
                };
                EntryOutcome {
                    property: entry.property.clone(),
                    expected: entry.status,
                    observed: v.status.to_string(),
                    witness_replayed: replayed,
                    pass: status_ok && witness_ok,
                    detail,
                }
            }
            Err(DecideError::NotEnumerable { .. }) => {
                let pass = entry.status == Status::Fails && replayed == Some(true);
                let detail = if pass {
                    Some("witness-mode: violation re-established by replay".into())
                } else {
                    Some("carrier not enumerable and no replayable witness".into())
                };
                EntryOutcome {
                    property: entry.property.clone(),
                    expected: entry.status,
                    observed: "not-enumerable".into(),
                    witness_replayed: replayed,
                    pass,
                    detail,
                }
            }
            Err(err) => EntryOutcome {
                property: entry.property.clone(),
                expected: entry.status,
                observed: format!("error: {err}"),
                witness_replayed: replayed,
                pass: false,
                detail: None,
            },
        };
        entries.push(outcome);
    }
    FixtureOutcome {
        name: fixture.name.clone(),
        pass: entries.iter().all(|e| e.pass),
        entries,
    }
}

// ---------------------------------------------------------------------
// The harness proper.

const ARM_SD_SKEW: Property = Property::Armendariz(ArmVariant::SigmaDeltaSkew);
const ARM_UNTWISTED: Property = Property::Armendariz(ArmVariant::SigmaDeltaUntwisted);
const ARM_ISFAHANI: Property = Property::Armendariz(ArmVariant::IsfahaniSkew);
const ARM_SIGMA: Property = Property::Armendariz(ArmVariant::SigmaArm);
const ARM_SIGMA_SKEW: Property = Property::Armendariz(ArmVariant::SigmaSkew);

/// Hypothesis profiles shared by the checks. Re-running one at a higher
/// bound only re-scans its bounded members; exact members are cheap.
#[derive(Clone, Copy)]
enum Hyp {
    None,
    /// Bounded sigma-delta-skew-armendariz and exact condition-c-sigma.
    SkewArmCsigma,
    /// `SkewArmCsigma` plus exact reversibility.
    SkewArmCsigmaRev,
    Csigma,
    /// Exact right-sigma-reversibility with a unital endomorphism.
    RightRevUnital,
    /// `RightRevUnital` plus exact condition-c-sigma.
    RightRevCsigmaUnital,
}

enum InstanceOutcome {
    Qualifying(Vec<Violation>),
    NonQualifying,
}

/// A conjunction of decided properties standing for one statement in an
/// equivalence matrix.
struct Stmt {
    name: &'static str,
    comps: Vec<(Property, PropertyVerdict)>,
}

impl Stmt {
    fn passes(&self) -> bool {
        self.comps.iter().all(|(_, v)| passes(v))
    }

    fn failing(&self) -> Option<&(Property, PropertyVerdict)> {
        self.comps.iter().find(|(_, v)| v.status == Status::Fails)
    }

    /// Members believed only up to the bound; these are re-verified at a
    /// doubled bound before a violation built on them is accepted.
    fn bounded(&self) -> Vec<Property> {
        self.comps
            .iter()
            .filter(|(_, v)| v.status == Status::HoldsUpToBound)
            .map(|(p, _)| *p)
            .collect()
    }
}

/// A violation candidate awaiting hypothesis escalation.
struct Candidate {
    direction: String,
    detail: String,
    witness: Option<Witness>,
    antecedents: Vec<Property>,
}

/// Every ordered implication `p => q` broken by the verdicts: `p` passes
/// while some component of `q` outright fails.
fn matrix_candidates(stmts: &[Stmt]) -> Vec<Candidate> {
    let mut out = Vec::new();
    for p in stmts {
        if !p.passes() {
            continue;
        }
        for q in stmts {
            if std::ptr::eq(p, q) {
                continue;
            }
            if let Some((qp, qv)) = q.failing() {
                out.push(Candidate {
                    direction: format!("{} => {}", p.name, q.name),
                    detail: format!("{} fails", qp.name()),
                    witness: qv.witness.clone(),
                    antecedents: p.bounded(),
                });
            }
        }
    }
    out
}

fn passes(v: &PropertyVerdict) -> bool {
    matches!(v.status, Status::Holds | Status::HoldsUpToBound)
}

fn holds(v: &PropertyVerdict) -> bool {
    v.status == Status::Holds
}

pub struct Harness {
    pub opts: CheckOptions,
    instances: Vec<Instance>,
    cache: HashMap<(usize, Property, u32), PropertyVerdict>,
}

impl Harness {
    pub fn new(opts: CheckOptions) -> Result<Harness, DecideError> {
        Ok(Harness::with_instances(opts, corpus::generate_instances()?))
    }

    pub fn with_instances(opts: CheckOptions, instances: Vec<Instance>) -> Harness {
        Harness { opts, instances, cache: HashMap::new() }
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// Decide `property` on `inst` at degree bound `dmax`, memoized.
    fn verdict(
        &mut self,
        inst: &Instance,
        property: Property,
        dmax: u32,
    ) -> Result<PropertyVerdict, DecideError> {
        let key = (inst.index, property, dmax);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let run = CheckOptions { dmax, ..self.opts };
        let v = deciders::decide(&inst.ctx, property, &run)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    fn hyp_holds(&mut self, inst: &Instance, hyp: Hyp, dmax: u32) -> Result<bool, DecideError> {
        match hyp {
            Hyp::None => Ok(true),
            Hyp::Csigma => {
                Ok(holds(&self.verdict(inst, Property::ConditionCSigma, dmax)?))
            }
            Hyp::SkewArmCsigma => {
                Ok(passes(&self.verdict(inst, ARM_SD_SKEW, dmax)?)
                    && holds(&self.verdict(inst, Property::ConditionCSigma, dmax)?))
            }
            Hyp::SkewArmCsigmaRev => {
                Ok(self.hyp_holds(inst, Hyp::SkewArmCsigma, dmax)?
                    && holds(&self.verdict(inst, Property::Reversible, dmax)?))
            }
            Hyp::RightRevUnital => {
                Ok(inst.ctx.sigma.unital
                    && holds(&self.verdict(inst, Property::RightSigmaReversible, dmax)?))
            }
            Hyp::RightRevCsigmaUnital => {
                Ok(self.hyp_holds(inst, Hyp::RightRevUnital, dmax)?
                    && holds(&self.verdict(inst, Property::ConditionCSigma, dmax)?))
            }
        }
    }

    /// Apply the escalation policy to a batch of violation candidates.
    ///
    /// No candidates means the instance qualified cleanly. Otherwise the
    /// check-level hypotheses are re-verified at twice the bound; if they
    /// collapse the instance never qualified. Surviving candidates keep
    /// only those whose bounded antecedents also re-verify.
    fn resolve(
        &mut self,
        inst: &Instance,
        hyp: Hyp,
        cands: Vec<Candidate>,
    ) -> Result<InstanceOutcome, DecideError> {
        if cands.is_empty() {
            return Ok(InstanceOutcome::Qualifying(Vec::new()));
        }
        let d2 = self.opts.dmax.saturating_mul(2);
        if !self.hyp_holds(inst, hyp, d2)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let mut out = Vec::new();
        'cand: for c in cands {
            for &p in &c.antecedents {
                if !passes(&self.verdict(inst, p, d2)?) {
                    continue 'cand;
                }
            }
            out.push(Violation {
                instance: inst.label(),
                direction: c.direction,
                detail: c.detail,
                witness: c.witness,
                hyp_dmax: d2,
            });
        }
        Ok(InstanceOutcome::Qualifying(out))
    }

    fn stmt(
        &mut self,
        inst: &Instance,
        name: &'static str,
        props: &[Property],
        dmax: u32,
    ) -> Result<Stmt, DecideError> {
        let mut comps = Vec::new();
        for &p in props {
            comps.push((p, self.verdict(inst, p, dmax)?));
        }
        Ok(Stmt { name, comps })
    }

    // -----------------------------------------------------------------
    // Per-instance checks.

    /// ab = 0 forces sigma^n(a) b = 0 and delta^n(a) b = 0, n <= 3.
    fn inst_power_annihilation(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        if !self.hyp_holds(inst, Hyp::SkewArmCsigma, self.opts.dmax)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let ctx = &inst.ctx;
        let ring = &ctx.ring;
        let elems = ring.elements()?;
        let mut cands = Vec::new();
        'scan: for a in &elems {
            for b in &elems {
                if !ring.is_zero(&ring.mul(a, b)) {
                    continue;
                }
                for n in 1..=3u32 {
                    let sa = ctx.sigma.apply_power(ring, a, n);
                    let da = ctx.delta.apply_power(ring, &ctx.sigma, a, n);
                    for (map, t) in [("sigma", &sa), ("delta", &da)] {
                        if !ring.is_zero(&ring.mul(t, b)) {
                            cands.push(Candidate {
                                direction: format!("ab = 0 => {map}^{n}(a) b = 0"),
                                detail: format!("a = {}, b = {}", ring.repr(a), ring.repr(b)),
                                witness: Some(Witness::Elements {
                                    elems: vec![ring.repr(a), ring.repr(b)],
                                }),
                                antecedents: Vec::new(),
                            });
                            break 'scan;
                        }
                    }
                }
            }
        }
        self.resolve(inst, Hyp::SkewArmCsigma, cands)
    }

    /// ab = 0 forces a w(b) = 0 for every sigma/delta word w, length <= 3.
    fn inst_word_annihilation(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        if !self.hyp_holds(inst, Hyp::SkewArmCsigmaRev, self.opts.dmax)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let ctx = &inst.ctx;
        let ring = &ctx.ring;
        let elems = ring.elements()?;
        let mut cands = Vec::new();
        'scan: for a in &elems {
            for b in &elems {
                if !ring.is_zero(&ring.mul(a, b)) {
                    continue;
                }
                for j in 1..=3u32 {
                    for i in 0..=j {
                        let w = crate::ore::word_map_apply(ctx, j, i, b);
                        if !ring.is_zero(&ring.mul(a, &w)) {
                            cands.push(Candidate {
                                direction: format!("ab = 0 => a f_{i}^{j}(b) = 0"),
                                detail: format!("a = {}, b = {}", ring.repr(a), ring.repr(b)),
                                witness: Some(Witness::Elements {
                                    elems: vec![ring.repr(a), ring.repr(b)],
                                }),
                                antecedents: Vec::new(),
                            });
                            break 'scan;
                        }
                    }
                }
            }
        }
        self.resolve(inst, Hyp::SkewArmCsigmaRev, cands)
    }

    /// Either hypothesis route implies the untwisted conclusion.
    fn inst_untwisted_routes(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        let route_skew = self.hyp_holds(inst, Hyp::SkewArmCsigma, d)?;
        let route_isfahani = passes(&self.verdict(inst, ARM_ISFAHANI, d)?)
            && passes(&self.verdict(inst, Property::PolySymmetric, d)?);
        if !route_skew && !route_isfahani {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let concl = self.verdict(inst, ARM_UNTWISTED, d)?;
        if concl.status != Status::Fails {
            return Ok(InstanceOutcome::Qualifying(Vec::new()));
        }
        // The conclusion broke: at least one route must survive the
        // doubled bound for the violation to stand.
        let d2 = d.saturating_mul(2);
        let mut live = route_skew && self.hyp_holds(inst, Hyp::SkewArmCsigma, d2)?;
        if !live && route_isfahani {
            live = passes(&self.verdict(inst, ARM_ISFAHANI, d2)?)
                && passes(&self.verdict(inst, Property::PolySymmetric, d2)?);
        }
        if !live {
            return Ok(InstanceOutcome::NonQualifying);
        }
        Ok(InstanceOutcome::Qualifying(vec![Violation {
            instance: inst.label(),
            direction: "hypothesis routes => sigma-delta-untwisted-armendariz".into(),
            detail: format!("{} fails", concl.property),
            witness: concl.witness,
            hyp_dmax: d2,
        }]))
    }

    /// fgh = 0 forces a_i b_j c_k = 0 for degree <= 1 triples.
    fn inst_triple_products(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        if !self.hyp_holds(inst, Hyp::SkewArmCsigma, self.opts.dmax)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let ctx = &inst.ctx;
        // Degree 1 keeps the joint space at n^6, exhaustive for every
        // carrier in the corpus.
        let len = 2usize;
        let fast = FastCtx::build(&ctx.ring, &ctx.sigma, &ctx.delta, 2 * len)?;
        let n = fast.n as u64;
        let space = (n as u128).pow(3 * len as u32);
        let plan = ScanPlan::for_space(space, &self.opts)?;
        let hit = plan.find_violation(|idx| {
            let mut buf = vec![0u16; 3 * len];
            decode_poly(idx, n, &mut buf);
            let (fc, rest) = buf.split_at(len);
            let (gc, hc) = rest.split_at(len);
            let mut fg = Vec::new();
            fast.mul_full(fc, gc, &mut fg);
            let mut fgh = Vec::new();
            fast.mul_full(&fg, hc, &mut fgh);
            if !fast.is_zero_poly(&fgh) {
                return None;
            }
            for (i, &a) in fc.iter().enumerate() {
                for (j, &b) in gc.iter().enumerate() {
                    for (k, &c) in hc.iter().enumerate() {
                        if fast.muli(fast.muli(a, b), c) != fast.zero {
                            return Some((fc.to_vec(), gc.to_vec(), hc.to_vec(), i, j, k));
                        }
                    }
                }
            }
            None
        });
        let cands = match hit {
            None => Vec::new(),
            Some((fc, gc, hc, i, j, k)) => {
                let print = |c: &[u16]| {
                    crate::ore::SkewPolynomial::new(
                        ctx.clone(),
                        c.iter().map(|&x| crate::Elem::Idx(x)).collect(),
                    )
                    .print()
                };
                vec![Candidate {
                    direction: "fgh = 0 => a_i b_j c_k = 0".into(),
                    detail: format!("coefficient triple (i, j, k) = ({i}, {j}, {k})"),
                    witness: Some(Witness::Polys {
                        polys: vec![print(&fc), print(&gc), print(&hc)],
                    }),
                    antecedents: Vec::new(),
                }]
            }
        };
        self.resolve(inst, Hyp::SkewArmCsigma, cands)
    }

    /// Reversible and symmetric transfer to the extension and back.
    fn inst_extension_laws(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::SkewArmCsigma, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let rev = [
            self.stmt(inst, "reversible", &[Property::Reversible], d)?,
            self.stmt(inst, "poly-reversible", &[Property::PolyReversible], d)?,
        ];
        let sym = [
            self.stmt(inst, "symmetric", &[Property::Symmetric], d)?,
            self.stmt(inst, "poly-symmetric", &[Property::PolySymmetric], d)?,
        ];
        let mut cands = matrix_candidates(&rev);
        cands.extend(matrix_candidates(&sym));
        self.resolve(inst, Hyp::SkewArmCsigma, cands)
    }

    /// The twisted Armendariz condition splits into its skew half plus
    /// the annihilator condition. No ring hypotheses.
    fn inst_sigma_arm_split(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        let stmts = [
            self.stmt(inst, "sigma-armendariz", &[ARM_SIGMA], d)?,
            self.stmt(
                inst,
                "sigma-skew-armendariz with condition-c-sigma",
                &[ARM_SIGMA_SKEW, Property::ConditionCSigma],
                d,
            )?,
        ];
        self.resolve(inst, Hyp::None, matrix_candidates(&stmts))
    }

    /// Under the annihilator condition the twisted one-sided laws
    /// coincide with their untwisted forms.
    fn inst_twisted_law_collapse(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::Csigma, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let rev = [
            self.stmt(inst, "reversible", &[Property::Reversible], d)?,
            self.stmt(
                inst,
                "sigma-reversible",
                &[Property::LeftSigmaReversible, Property::RightSigmaReversible],
                d,
            )?,
        ];
        let sym = [
            self.stmt(inst, "symmetric", &[Property::Symmetric], d)?,
            self.stmt(
                inst,
                "sigma-symmetric",
                &[Property::LeftSigmaSymmetric, Property::RightSigmaSymmetric],
                d,
            )?,
        ];
        let mut cands = matrix_candidates(&rev);
        cands.extend(matrix_candidates(&sym));
        self.resolve(inst, Hyp::Csigma, cands)
    }

    fn inst_reversible_matrix(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::SkewArmCsigma, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let stmts = [
            self.stmt(inst, "reversible", &[Property::Reversible], d)?,
            self.stmt(
                inst,
                "sigma-reversible",
                &[Property::LeftSigmaReversible, Property::RightSigmaReversible],
                d,
            )?,
            self.stmt(inst, "right-sigma-reversible", &[Property::RightSigmaReversible], d)?,
            self.stmt(inst, "poly-reversible", &[Property::PolyReversible], d)?,
        ];
        self.resolve(inst, Hyp::SkewArmCsigma, matrix_candidates(&stmts))
    }

    fn inst_symmetric_matrix(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::SkewArmCsigma, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let stmts = [
            self.stmt(inst, "symmetric", &[Property::Symmetric], d)?,
            self.stmt(
                inst,
                "sigma-symmetric",
                &[Property::LeftSigmaSymmetric, Property::RightSigmaSymmetric],
                d,
            )?,
            self.stmt(inst, "right-sigma-symmetric", &[Property::RightSigmaSymmetric], d)?,
            self.stmt(inst, "poly-symmetric", &[Property::PolySymmetric], d)?,
        ];
        self.resolve(inst, Hyp::SkewArmCsigma, matrix_candidates(&stmts))
    }

    /// Idempotents are fixed by sigma, killed by delta, and central.
    fn inst_idempotent_rigidity(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::RightRevUnital, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let ctx = &inst.ctx;
        let ring = &ctx.ring;
        let mut violations = Vec::new();
        for idem in ring.idempotents() {
            let e = &idem.e;
            let se = ctx.sigma.apply(ring, e);
            if se != *e {
                violations.push(Violation {
                    instance: inst.label(),
                    direction: "e^2 = e => sigma(e) = e".into(),
                    detail: format!("e = {}", ring.repr(e)),
                    witness: Some(Witness::Idempotent {
                        e: ring.repr(e),
                        partner: ring.repr(&se),
                        law: "sigma(e) = e".into(),
                    }),
                    hyp_dmax: d,
                });
            }
            let de = ctx.delta.apply(ring, &ctx.sigma, e);
            if !ring.is_zero(&de) {
                violations.push(Violation {
                    instance: inst.label(),
                    direction: "e^2 = e => delta(e) = 0".into(),
                    detail: format!("e = {}", ring.repr(e)),
                    witness: Some(Witness::Idempotent {
                        e: ring.repr(e),
                        partner: ring.repr(&de),
                        law: "delta(e) = 0".into(),
                    }),
                    hyp_dmax: d,
                });
            }
        }
        let abelian = self.verdict(inst, Property::Abelian, d)?;
        if abelian.status == Status::Fails {
            violations.push(Violation {
                instance: inst.label(),
                direction: "hypotheses => abelian".into(),
                detail: "a non-central idempotent exists".into(),
                witness: abelian.witness,
                hyp_dmax: d,
            });
        }
        // Everything here is exact, so no escalation round is needed.
        Ok(InstanceOutcome::Qualifying(violations))
    }

    /// Baer-style conditions transfer to the extension.
    fn inst_annihilator_transfer(&mut self, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        let d = self.opts.dmax;
        if !self.hyp_holds(inst, Hyp::RightRevCsigmaUnital, d)? {
            return Ok(InstanceOutcome::NonQualifying);
        }
        let mut any_premise = false;
        let mut violations = Vec::new();
        for family in ANN_FAMILIES {
            let base = self.verdict(inst, Property::BaerKind(family), d)?;
            if base.status != Status::Holds {
                continue;
            }
            any_premise = true;
            let transfer = self.verdict(inst, Property::Transfer(family), d)?;
            if transfer.status == Status::Fails {
                violations.push(Violation {
                    instance: inst.label(),
                    direction: format!("{} => {}", base.property, transfer.property),
                    detail: format!("{} fails on the extension side", transfer.property),
                    witness: transfer.witness,
                    hyp_dmax: d,
                });
            }
        }
        if !any_premise {
            return Ok(InstanceOutcome::NonQualifying);
        }
        Ok(InstanceOutcome::Qualifying(violations))
    }

    fn check_instance(&mut self, id: &str, inst: &Instance) -> Result<InstanceOutcome, DecideError> {
        match id {
            "lem-1.2" => self.inst_power_annihilation(inst),
            "lem-1.3" => self.inst_word_annihilation(inst),
            "prop-2.1" => self.inst_untwisted_routes(inst),
            "lem-2.4" => self.inst_triple_products(inst),
            "thm-2.5" => self.inst_extension_laws(inst),
            "thm-2.6" => self.inst_sigma_arm_split(inst),
            "lem-3.1" => self.inst_twisted_law_collapse(inst),
            "thm-3.3" => self.inst_reversible_matrix(inst),
            "thm-3.4" => self.inst_symmetric_matrix(inst),
            "lem-4.1" => self.inst_idempotent_rigidity(inst),
            "thm-4.2" => self.inst_annihilator_transfer(inst),
            other => Err(DecideError::NotApplicable {
                property: other.into(),
                reason: "unknown check id".into(),
            }),
        }
    }

    /// Run one check over every instance.
    pub fn run_theorem(&mut self, id: &str) -> TheoremOutcome {
        let t0 = Instant::now();
        let mut out = TheoremOutcome {
            id: id.into(),
            statement: statement_of(id).into(),
            dmax: self.opts.dmax,
            qualifying: 0,
            non_qualifying: 0,
            errored: 0,
            delta_zero_qualifying: 0,
            sigma_identity_qualifying: 0,
            violations: Vec::new(),
            errors: Vec::new(),
            elapsed: Duration::ZERO,
        };
        let instances = self.instances.clone();
        for inst in &instances {
            match self.check_instance(id, inst) {
                Ok(InstanceOutcome::Qualifying(vs)) => {
                    out.qualifying += 1;
                    let ring = &inst.ctx.ring;
                    if inst.ctx.delta.is_zero(ring, &inst.ctx.sigma) {
                        out.delta_zero_qualifying += 1;
                    }
                    if inst.ctx.sigma.is_identity(ring) {
                        out.sigma_identity_qualifying += 1;
                    }
                    out.violations.extend(vs);
                }
                Ok(InstanceOutcome::NonQualifying) => out.non_qualifying += 1,
                Err(err) => {
                    out.errored += 1;
                    out.errors.push(format!("{}: {err}", inst.label()));
                }
            }
        }
        debug_assert_eq!(
            out.qualifying + out.non_qualifying + out.errored,
            instances.len()
        );
        out.elapsed = t0.elapsed();
        out
    }

    pub fn run_all(&mut self) -> Vec<TheoremOutcome> {
        THEOREM_IDS.iter().map(|id| self.run_theorem(id)).collect()
    }
}

/// Assemble a full report from prepared fixtures and a harness.
pub fn run_report(harness: &mut Harness, fixtures: &[Fixture]) -> RunReport {
    let t0 = Instant::now();
    let fixture_outcomes = fixtures.iter().map(|f| check_fixture(f, &harness.opts)).collect();
    let theorems = harness.run_all();
    RunReport {
        schema: REPORT_SCHEMA.into(),
        dmax: harness.opts.dmax,
        seed: harness.opts.seed,
        total_instances: harness.instances().len(),
        fixtures: fixture_outcomes,
        theorems,
        elapsed: t0.elapsed(),
    }
}

/// Replay every recorded fixture and sweep every check over the full
/// generated corpus.
pub fn verify_paper(opts: &CheckOptions) -> Result<RunReport, DecideError> {
    let fixtures = corpus::all_fixtures()?;
    let mut harness = Harness::new(*opts)?;
    Ok(run_report(&mut harness, &fixtures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_fixture;
    use crate::deciders::armendariz;

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    fn ring_subset(prefixes: &[&str]) -> Vec<Instance> {
        corpus::generate_instances()
            .unwrap()
            .into_iter()
            .filter(|i| prefixes.iter().any(|p| i.ctx.ring.label == *p))
            .collect()
    }

    #[test]
    fn recorded_fixtures_verify_cleanly() {
        for fixture in corpus::all_fixtures().unwrap() {
            let out = check_fixture(&fixture, &opts());
            assert!(out.pass, "{}: {:?}", out.name, out.entries);
        }
    }

    #[test]
    fn a_corrupted_expectation_is_caught() {
        let mut status_flip = load_fixture("ex-3.2").unwrap();
        assert_eq!(status_flip.expected[0].status, Status::Holds);
        status_flip.expected[0].status = Status::Fails;
        let out = check_fixture(&status_flip, &opts());
        assert!(!out.pass);
        assert!(!out.entries[0].pass);

        let mut witness_swap = load_fixture("ex-3.2").unwrap();
        assert_eq!(witness_swap.expected[1].property, "right-sigma-reversible");
        witness_swap.expected[1].witness =
            Some(Witness::Elements { elems: vec!["(0,0)".into(), "(0,0)".into()] });
        let out = check_fixture(&witness_swap, &opts());
        assert!(!out.pass);
        assert_eq!(out.entries[1].witness_replayed, Some(false));
    }

    #[test]
    fn the_small_commutative_slice_passes_every_check() {
        let subset = ring_subset(&["zmod2", "zmod4", "bool2"]);
        let total = subset.len();
        assert_eq!(total, 11);
        let mut harness = Harness::with_instances(opts(), subset);
        for outcome in harness.run_all() {
            assert!(outcome.clean(), "{}: {:?}", outcome.id, outcome.violations);
            assert!(outcome.qualifying >= 1, "{} is vacuous here", outcome.id);
            assert_eq!(
                outcome.qualifying + outcome.non_qualifying + outcome.errored,
                total,
                "{} lost instances",
                outcome.id
            );
            assert!(outcome.delta_zero_qualifying <= outcome.qualifying);
            assert!(outcome.sigma_identity_qualifying <= outcome.qualifying);
        }
    }

    #[test]
    fn vacuous_checks_are_reported_not_passed() {
        // bool2 under the swap never satisfies right-sigma-reversibility,
        // so the transfer check has nothing to say about it.
        let subset: Vec<Instance> = corpus::generate_instances()
            .unwrap()
            .into_iter()
            .filter(|i| i.ctx.ring.label == "bool2" && i.ctx.sigma.label == "swap")
            .collect();
        assert!(!subset.is_empty());
        let total = subset.len();
        let mut harness = Harness::with_instances(opts(), subset);
        let outcome = harness.run_theorem("thm-4.2");
        assert_eq!(outcome.qualifying, 0);
        assert!(outcome.clean());
        let report = RunReport {
            schema: REPORT_SCHEMA.into(),
            dmax: opts().dmax,
            seed: opts().seed,
            total_instances: total,
            fixtures: Vec::new(),
            theorems: vec![outcome],
            elapsed: Duration::ZERO,
        };
        assert!(!report.passed());
        assert!(report.render_text().contains("no qualifying instance"));
    }

    #[test]
    fn machine_reports_are_byte_stable_and_round_trip() {
        let fixtures = corpus::all_fixtures().unwrap();
        let build = || {
            let mut harness =
                Harness::with_instances(opts(), ring_subset(&["zmod2", "zmod3"]));
            run_report(&mut harness, &fixtures)
        };
        let a = build().to_machine_json();
        let b = build().to_machine_json();
        assert_eq!(a, b);
        let parsed: RunReport = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed.schema, REPORT_SCHEMA);
        assert_eq!(parsed.theorems.len(), THEOREM_IDS.len());
        assert!(parsed.passed());
    }

    #[test]
    fn bounded_search_supports_the_recorded_notes() {
        // Both infinite-carrier fixtures record externally asserted
        // sigma-skew Armendariz claims; the pool search must at least
        // fail to refute them at the recorded bound.
        for name in ["ex-1.5", "ex-1.6"] {
            let fixture = load_fixture(name).unwrap();
            let pool = fixture.ctx.ring.small_sample();
            let hit =
                armendariz::pool_search(&fixture.ctx, ArmVariant::SigmaSkew, 1, &pool).unwrap();
            assert!(hit.is_none(), "{name}: unexpected counterexample");
        }
    }
}
