//! Command line front end for the laboratory: decide single properties,
//! replay the recorded examples, sweep the theorem checks over the
//! generated corpus, and inspect annihilator structure.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use orelab_core::corpus;
use orelab_core::deciders::{self, AnnihilatorReport, AnnihilatorSet};
use orelab_core::derivation::SigmaDerivation;
use orelab_core::harness::{self, RunReport, REPORT_SCHEMA};
use orelab_core::morphism::RingMorphism;
use orelab_core::ore::OreContext;
use orelab_core::spec::{build_doc, BuildOptions, RingSpecDoc};
use orelab_core::verdict::{Bounds, CheckOptions, Property, PropertyVerdict, Status};

#[derive(Parser)]
#[command(
    name = "orelab",
    version,
    about = "Laboratory for skew polynomial rings R[x; sigma, delta] over small coefficient rings",
    after_help = "Targets are resolved in order: stored fixture name (ex-1.4, ex-1.5, ex-1.6, \
                  ex-2.2, ex-3.2), catalogue ring label (zmod2, zmod3, zmod4, bool2, ut2-z2, \
                  tri2-z4), then a path to a ring-spec JSON document. Catalogue and document \
                  targets get the identity endomorphism and zero derivation unless the \
                  document lists its own.\n\nMachine output is versioned JSON: \
                  orelab-verdict/1, orelab-report/1, orelab-annihilators/1, \
                  orelab-idempotents/1, orelab-search/1."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: RunFlags,
}

#[derive(Args)]
struct RunFlags {
    /// Degree bound for polynomial-quantified scans
    #[arg(long, global = true)]
    dmax: Option<u32>,
    /// Largest space scanned exhaustively; larger spaces are sampled
    #[arg(long, global = true)]
    work_cap: Option<u64>,
    /// Seed for sampled scans
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatusArg {
    Holds,
    Fails,
    HoldsUpToBound,
}

impl StatusArg {
    fn status(self) -> Status {
        match self {
            StatusArg::Holds => Status::Holds,
            StatusArg::Fails => Status::Fails,
            StatusArg::HoldsUpToBound => Status::HoldsUpToBound,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide one property on a target ring or fixture
    ///
    /// Usage: `check <TARGET> <PROPERTY>`, or `check <PROPERTY> --fixture <NAME>`.
    /// Exit code 0 for holds/holds-up-to-bound, 1 for fails, 2 for errors.
    Check {
        /// `<target> <property>`, or just `<property>` with --fixture
        #[arg(value_names = ["TARGET", "PROPERTY"], num_args = 1..=2)]
        words: Vec<String>,
        /// Use a stored fixture as the target
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Replay every recorded example and sweep all theorem checks over
    /// the generated corpus; exit 0 only when everything matches
    VerifyPaper {
        /// Replay just this stored fixture and skip the corpus sweep
        #[arg(long)]
        fixture: Option<String>,
    },
    /// List singleton/principal annihilators, their intersection
    /// closure, idempotents, and which sets are idempotent-generated
    Annihilators {
        target: Option<String>,
        /// Use a stored fixture as the target
        #[arg(long)]
        fixture: Option<String>,
    },
    /// List idempotents with centrality and their right ideals
    Idempotents {
        target: Option<String>,
        /// Use a stored fixture as the target
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Scan the generated corpus for instances where a property has the
    /// given status
    Search {
        property: String,
        /// Status to search for
        #[arg(long, value_enum, default_value_t = StatusArg::Fails)]
        status: StatusArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = options(&cli.flags);
    let format = cli.flags.format;
    let run = match cli.command {
        Command::Check { words, fixture } => cmd_check(words, fixture, &opts, format),
        Command::VerifyPaper { fixture } => cmd_verify_paper(fixture, &opts, format),
        Command::Annihilators { target, fixture } => {
            cmd_annihilators(target, fixture, format, false)
        }
        Command::Idempotents { target, fixture } => {
            cmd_annihilators(target, fixture, format, true)
        }
        Command::Search { property, status } => cmd_search(property, status, &opts, format),
    };
    match run {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn options(flags: &RunFlags) -> CheckOptions {
    let mut o = CheckOptions::default();
    if let Some(d) = flags.dmax {
        o.dmax = d;
    }
    if let Some(w) = flags.work_cap {
        o.work_cap = w;
    }
    if let Some(s) = flags.seed {
        o.seed = s;
    }
    o
}

/// Resolve a target to a labeled Ore context: fixture name first, then
/// catalogue ring label, then a ring-spec document path.
fn resolve(target: &str) -> Result<(String, Arc<OreContext>)> {
    if corpus::FIXTURE_NAMES.contains(&target) {
        let fixture = corpus::load_fixture(target)?;
        return Ok((format!("fixture {}", fixture.name), fixture.ctx));
    }
    if let Some(ring) = corpus::catalogue().into_iter().find(|r| r.label == target) {
        let label = format!("{} / id / zero", ring.label);
        return Ok((label, plain_context(ring)));
    }
    if !Path::new(target).exists() {
        bail!(
            "{target:?} is not a fixture name, catalogue ring, or readable path \
             (fixtures: {}; catalogue: {})",
            corpus::FIXTURE_NAMES.join(", "),
            corpus::catalogue().iter().map(|r| r.label.clone()).collect::<Vec<_>>().join(", ")
        );
    }
    let text = fs::read_to_string(target).with_context(|| format!("reading {target}"))?;
    let doc: RingSpecDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing ring-spec document {target}"))?;
    let built = build_doc(&doc, &BuildOptions::default())?;
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
    let label = format!("{} / {} / {}", built.ring.label, sigma.label, delta.label);
    Ok((label, OreContext::new(built.ring, sigma, delta)))
}

fn plain_context(ring: orelab_core::RingInstance) -> Arc<OreContext> {
    let ring = Arc::new(ring);
    let sigma = Arc::new(RingMorphism::identity(&ring));
    let delta = Arc::new(SigmaDerivation::zero(&ring));
    OreContext::new(ring, sigma, delta)
}

fn pick_target(
    positional: Option<String>,
    fixture: Option<String>,
) -> Result<(String, Arc<OreContext>)> {
    match (positional, fixture) {
        (Some(_), Some(_)) => bail!("give either a target or --fixture, not both"),
        (None, None) => bail!("a target (or --fixture <name>) is required"),
        (Some(t), None) => resolve(&t),
        (None, Some(f)) => {
            let fx = corpus::load_fixture(&f)?;
            Ok((format!("fixture {}", fx.name), fx.ctx))
        }
    }
}

fn render_bounds(b: &Bounds) -> String {
    let mut parts = Vec::new();
    if let Some(d) = b.dmax {
        parts.push(format!("dmax {d}"));
    }
    if let Some(h) = b.hyp_dmax {
        parts.push(format!("hyp dmax {h}"));
    }
    if let Some(s) = b.space {
        parts.push(format!("space {s}"));
    }
    if b.exhaustive {
        parts.push("exhaustive".into());
    } else if let Some(si) = b.sample {
        parts.push(format!("sampled {} of {} (seed {})", si.sampled, si.space, si.seed));
    }
    if let Some(p) = b.element_sample {
        parts.push(format!("element pool {p}"));
    }
    parts.join(", ")
}

fn render_verdict(label: &str, v: &PropertyVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} on {label}: {}", v.property, v.status);
    let bounds = render_bounds(&v.bounds);
    if !bounds.is_empty() {
        let _ = writeln!(s, "  bounds: {bounds}");
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "  witness: {}", serde_json::to_string(w).expect("witness serializes"));
    }
    let _ = writeln!(s, "  elapsed: {:.2?}", v.elapsed);
    s
}

fn cmd_check(
    words: Vec<String>,
    fixture: Option<String>,
    opts: &CheckOptions,
    format: Format,
) -> Result<ExitCode> {
    let (target, property_name) = match (fixture, words.len()) {
        (Some(f), 1) => (Some(f), words[0].clone()),
        (None, 2) => (None, words[1].clone()),
        (Some(_), _) => bail!("with --fixture, give exactly one positional: the property"),
        (None, _) => bail!("usage: check <target> <property>, or check <property> --fixture <name>"),
    };
    let (label, ctx) = match &target {
        Some(f) => pick_target(None, Some(f.clone()))?,
        None => resolve(&words[0])?,
    };
    let property: Property =
        property_name.parse().map_err(|e: String| anyhow::anyhow!(e))?;
    let verdict = deciders::decide(&ctx, property, opts)?;
    match format {
        Format::Text => print!("{}", render_verdict(&label, &verdict)),
        Format::Machine => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": "orelab-verdict/1",
                "target": label,
                "verdict": verdict,
            }))?
        ),
    }
    Ok(match verdict.status {
        Status::Holds | Status::HoldsUpToBound => ExitCode::SUCCESS,
        Status::Fails => ExitCode::from(1),
    })
}

fn cmd_verify_paper(
    fixture: Option<String>,
    opts: &CheckOptions,
    format: Format,
) -> Result<ExitCode> {
    let report = match fixture {
        // Single-fixture mode replays one recorded example and skips the
        // corpus sweep entirely.
        Some(name) => {
            let t0 = std::time::Instant::now();
            let fx = corpus::load_fixture(&name)?;
            let outcome = harness::check_fixture(&fx, opts);
            RunReport {
                schema: REPORT_SCHEMA.into(),
                dmax: opts.dmax,
                seed: opts.seed,
                total_instances: 0,
                fixtures: vec![outcome],
                theorems: Vec::new(),
                elapsed: t0.elapsed(),
            }
        }
        None => harness::verify_paper(opts)?,
    };
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Machine => println!("{}", report.to_machine_json()),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn render_set(s: &AnnihilatorSet) -> String {
    let gens = s.generators.join(", ");
    let members = s.members.join(", ");
    match &s.idempotent {
        Some(e) => format!("r({{{gens}}}) = {{{members}}} = eR with e = {e}"),
        None => format!("r({{{gens}}}) = {{{members}}}  [not idempotent-generated]"),
    }
}

fn render_annihilators(r: &AnnihilatorReport, idempotents_only: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ring {}", r.ring);
    let _ = writeln!(s, "idempotents ({}):", r.idempotents.len());
    for i in &r.idempotents {
        let _ = writeln!(
            s,
            "  e = {} ({}), eR = {{{}}}",
            i.e,
            if i.central { "central" } else { "NOT central" },
            i.right_ideal.join(", ")
        );
    }
    if idempotents_only {
        return s;
    }
    let _ = writeln!(s, "singleton annihilators:");
    for set in &r.singletons {
        let _ = writeln!(s, "  {}", render_set(set));
    }
    let _ = writeln!(s, "principal right ideal annihilators:");
    for set in &r.principal {
        let _ = writeln!(s, "  {}", render_set(set));
    }
    let _ = writeln!(s, "intersection closure ({} sets):", r.closure.len());
    for set in &r.closure {
        let _ = writeln!(s, "  {}", render_set(set));
    }
    s
}

fn cmd_annihilators(
    target: Option<String>,
    fixture: Option<String>,
    format: Format,
    idempotents_only: bool,
) -> Result<ExitCode> {
    let (label, ctx) = pick_target(target, fixture)?;
    let report = deciders::annihilator_report(&ctx.ring)
        .with_context(|| format!("annihilator report for {label}"))?;
    match format {
        Format::Text => print!("{}", render_annihilators(&report, idempotents_only)),
        Format::Machine => {
            let payload = if idempotents_only {
                json!({
                    "schema": "orelab-idempotents/1",
                    "ring": report.ring,
                    "idempotents": report.idempotents,
                })
            } else {
                json!({
                    "schema": "orelab-annihilators/1",
                    "report": report,
                })
            };
            println!("{}", serde_json::to_string_pretty(&payload)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(
    property_name: String,
    status: StatusArg,
    opts: &CheckOptions,
    format: Format,
) -> Result<ExitCode> {
    let property: Property =
        property_name.parse().map_err(|e: String| anyhow::anyhow!(e))?;
    let wanted = status.status();
    let instances = corpus::generate_instances()?;
    let total = instances.len();
    let mut matches = Vec::new();
    let mut errors = Vec::new();
    for inst in &instances {
        match deciders::decide(&inst.ctx, property, opts) {
            Ok(v) if v.status == wanted => matches.push((inst.label(), v)),
            Ok(_) => {}
            Err(err) => errors.push(format!("{}: {err}", inst.label())),
        }
    }
    match format {
        Format::Text => {
            println!(
                "search {} = {} over {total} instances (dmax {}):",
                property.name(),
                wanted,
                opts.dmax
            );
            for (label, v) in &matches {
                match &v.witness {
                    Some(w) => println!(
                        "  {label}  witness {}",
                        serde_json::to_string(w).expect("witness serializes")
                    ),
                    None => println!("  {label}"),
                }
            }
            for e in &errors {
                println!("  error: {e}");
            }
            println!("{} matches, {} errors", matches.len(), errors.len());
        }
        Format::Machine => {
            let rows: Vec<_> = matches
                .iter()
                .map(|(label, v)| {
                    json!({ "instance": label, "witness": v.witness, "bounds": v.bounds })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": "orelab-search/1",
                    "property": property.name(),
                    "status": wanted,
                    "dmax": opts.dmax,
                    "seed": opts.seed,
                    "total_instances": total,
                    "matches": rows,
                    "errors": errors,
                }))?
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
