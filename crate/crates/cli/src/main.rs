//! Command-line front end for the workbench library.
//!
//! Every subcommand emits a JSON report with a top-level
//! `schema_version` (graph exports use the dedicated graph schema), so
//! runs can be golden-file tested. Exit codes: 0 success, 1 malformed
//! input or failed precondition, 2 undetermined or ambiguous result.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use workbench_core::budget::Budget;
use workbench_core::fixtures;
use workbench_core::garside::{CoxeterSystem, NormalForm, DEFAULT_W_CAP};
use workbench_core::graph::{
    build_nonreversible_graph, build_reversible_graph_case1, build_reversible_graph_case2,
    builtin_dihedral, builtin_torus, export_dot, export_json, graph_k_theory, graph_properties,
    GraphProperties, ModelGraph,
};
use workbench_core::kpipeline::{
    artin_rep_coefficients, b4_coefficients, boundary_quotient_k, k_of_crossed_product,
    CoeffAction, KReport, PipelineCase, PipelineHint,
};
use workbench_core::presentation::{check_presentation, Presentation};
use workbench_core::reversing::{
    check_cube_condition, check_left_reversible, check_r_homogeneity, divides,
    find_garside_like_w, lcm, parse_signed, reverse, verify_condition_2_3prime, ComplementTable,
    ConditionReport, CubeOutcome, Divides, HomogeneityWeights, ReversibilityReport,
    ReversibilityVerdict, ReversingOutcome, StepRule,
};
use workbench_core::rewrite::{words_equal, EqualityStatus, EqualityVerdict};
use workbench_core::words::parse_word;
use workbench_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Computations with right LCM one-relator monoids and finite-type Artin-Tits monoids"
)]
struct Cli {
    /// Replace both budget limits (default also via WORKBENCH_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Seed for randomized self-checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Pretty-print JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect presentations
    Presentation {
        #[command(subcommand)]
        cmd: PresentationCmd,
    },
    /// Word-problem queries
    Word {
        #[command(subcommand)]
        cmd: WordCmd,
    },
    /// Right-reverse a signed word
    Reverse(ReverseArgs),
    /// Least common right multiple of two positive words
    Lcm(PairArgs),
    /// Decide whether the second word lies in the first word's right ideal
    Divides(PairArgs),
    /// Strong cube condition over all generator triples
    Cube(PresArgs),
    /// Search for a homogeneity weight certificate
    Homog(PresArgs),
    /// Bounded left-reversibility check
    Reversible(ReversibleArgs),
    /// Search for a Garside-like element
    GarsideW(GarsideWArgs),
    /// Build a boundary graph model and export it
    GraphModel(GraphModelArgs),
    /// K-theory of a boundary graph model
    GraphK(GraphKArgs),
    /// Artin-Tits monoids of finite type
    Artin {
        #[command(subcommand)]
        cmd: ArtinCmd,
    },
    /// Integer K-theory pipelines
    Ktheory {
        #[command(subcommand)]
        cmd: KtheoryCmd,
    },
}

#[derive(Subcommand)]
enum PresentationCmd {
    /// Parse and validate a presentation
    Check(PresArgs),
}

#[derive(Subcommand)]
enum WordCmd {
    /// Decide equality of two positive words
    Equal(PairArgs),
}

#[derive(Args)]
struct PresArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
}

#[derive(Args)]
struct PairArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
    /// First word (caret syntax allowed, e.g. a^2b)
    x: String,
    /// Second word
    y: String,
}

#[derive(Args)]
struct ReverseArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
    /// Signed word, e.g. "a^-1 b"
    #[arg(long)]
    word: String,
    /// Record one line per reversing step in the report
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct ReversibleArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
    /// Maximum size of the candidate closure set
    #[arg(long, default_value_t = 64)]
    closure_bound: usize,
}

#[derive(Args)]
struct GarsideWArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
    /// Length bound for the search (default: longest relation side)
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Stratified model for non-reversible presentations
    Nonreversible,
    /// Reversible model with the relator as Garside-like element
    Case1,
    /// Reversible model with a longer Garside-like element (needs --w)
    Case2,
    /// Hand-rolled dihedral vertex family (needs --m)
    Dihedral,
    /// Hand-rolled torus-knot vertex family (needs --p, --q)
    Torus,
}

#[derive(Args)]
struct GraphSelect {
    /// Model family
    #[arg(long, value_enum)]
    family: Family,
    /// Presentation file or fixture name (generic families)
    #[arg(long)]
    presentation: Option<String>,
    /// Dihedral parameter m >= 3
    #[arg(long)]
    m: Option<u32>,
    /// Torus parameter p >= 2
    #[arg(long)]
    p: Option<u32>,
    /// Torus parameter q >= 2
    #[arg(long)]
    q: Option<u32>,
    /// Garside-like element for the case-2 model
    #[arg(long)]
    w: Option<String>,
    /// Trim vertices that cannot lie on a bi-infinite path
    #[arg(long)]
    pruned: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct GraphModelArgs {
    #[command(flatten)]
    select: GraphSelect,
    /// Output format
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    out: GraphFormat,
}

#[derive(Args)]
struct GraphKArgs {
    #[command(flatten)]
    select: GraphSelect,
}

#[derive(Subcommand)]
enum ArtinCmd {
    /// Greedy normal form of a positive word
    Nf(ArtinNfArgs),
    /// Witness search between generator subsets
    Equiv(ArtinEquivArgs),
    /// Count admissible normal-form sequences of a given length
    CountNf(ArtinCountArgs),
    /// The Garside element, optionally of a standard parabolic
    Delta(ArtinDeltaArgs),
}

#[derive(Args)]
struct CoxeterArgs {
    /// Classified type label (A3, B2, I2(7), ...)
    #[arg(long = "type", value_name = "LABEL")]
    label: Option<String>,
    /// File with an explicit Coxeter matrix (rows of integers)
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Enumeration cap on the group order
    #[arg(long, default_value_t = DEFAULT_W_CAP)]
    cap: usize,
}

#[derive(Args)]
struct ArtinNfArgs {
    #[command(flatten)]
    system: CoxeterArgs,
    /// Positive word as whitespace-separated generator names
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct ArtinEquivArgs {
    #[command(flatten)]
    system: CoxeterArgs,
    /// Source subset, e.g. "{s2}"
    #[arg(long)]
    from: String,
    /// Target subset, e.g. "{s1,s2}"
    #[arg(long)]
    to: String,
    /// Ambient generator subset (default: all generators)
    #[arg(long)]
    ambient: Option<String>,
}

#[derive(Args)]
struct ArtinCountArgs {
    #[command(flatten)]
    system: CoxeterArgs,
    /// Sequence length
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct ArtinDeltaArgs {
    #[command(flatten)]
    system: CoxeterArgs,
    /// Parabolic subset, e.g. "{s1,s3}" (default: the full set)
    #[arg(long)]
    subset: Option<String>,
}

#[derive(Subcommand)]
enum KtheoryCmd {
    /// Crossed-product pipeline for a built-in family case
    Pipeline(PipelineArgs),
    /// K-theory of the two-sided boundary quotient
    Boundary(BoundaryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseFamily {
    Dihedral,
    Torus,
}

#[derive(Args)]
struct PipelineArgs {
    /// Case family
    #[arg(long, value_enum)]
    case: CaseFamily,
    /// Dihedral parameter m >= 3
    #[arg(long)]
    m: Option<u32>,
    /// Torus parameter p >= 2
    #[arg(long)]
    p: Option<u32>,
    /// Torus parameter q >= 2
    #[arg(long)]
    q: Option<u32>,
    /// "trivial", a coefficient fixture name, or a JSON file
    #[arg(long, default_value = "trivial")]
    coeff: String,
    /// Resolution hint (repeatable); known: unit-summand
    #[arg(long)]
    hint: Vec<String>,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Presentation file or fixture name
    #[arg(long)]
    presentation: String,
    /// Treat the generating set as countably infinite
    #[arg(long)]
    infinite: bool,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let budget = match cli.budget {
        Some(n) => Budget::uniform(n),
        None => Budget::from_env(),
    };
    let pretty = cli.pretty;
    match cli.command {
        Command::Presentation { cmd } => match cmd {
            PresentationCmd::Check(args) => cmd_presentation_check(&args, pretty),
        },
        Command::Word { cmd } => match cmd {
            WordCmd::Equal(args) => cmd_word_equal(&args, &budget, pretty),
        },
        Command::Reverse(args) => cmd_reverse(&args, &budget, pretty),
        Command::Lcm(args) => cmd_lcm(&args, &budget, pretty),
        Command::Divides(args) => cmd_divides(&args, &budget, pretty),
        Command::Cube(args) => cmd_cube(&args, &budget, pretty),
        Command::Homog(args) => cmd_homog(&args, pretty),
        Command::Reversible(args) => cmd_reversible(&args, &budget, pretty),
        Command::GarsideW(args) => cmd_garside_w(&args, &budget, pretty),
        Command::GraphModel(args) => cmd_graph_model(&args, &budget),
        Command::GraphK(args) => cmd_graph_k(&args, &budget, pretty),
        Command::Artin { cmd } => match cmd {
            ArtinCmd::Nf(args) => cmd_artin_nf(&args, pretty),
            ArtinCmd::Equiv(args) => cmd_artin_equiv(&args, pretty),
            ArtinCmd::CountNf(args) => cmd_artin_count(&args, pretty),
            ArtinCmd::Delta(args) => cmd_artin_delta(&args, pretty),
        },
        Command::Ktheory { cmd } => match cmd {
            KtheoryCmd::Pipeline(args) => cmd_pipeline(&args, &budget, cli.seed, pretty),
            KtheoryCmd::Boundary(args) => cmd_boundary(&args, pretty),
        },
    }
}

// input resolution

/// A named built-in object: a presentation or a coefficient action.
enum FixtureValue {
    Presentation(Presentation),
    Coefficients(CoeffAction),
}

/// Looks up the built-in registry. Presentation names follow
/// `fixtures::by_name`, with `remstillLCM` (default parameters (2,1))
/// and bare `ex-u-bj` (parameters (1,2)) as aliases; `b4-coeff` and
/// `artin-rep-coeff` name coefficient actions.
fn load_fixture(name: &str) -> Result<FixtureValue> {
    let name = name.trim();
    Ok(match name {
        "b4-coeff" => FixtureValue::Coefficients(b4_coefficients()),
        "artin-rep-coeff" => FixtureValue::Coefficients(artin_rep_coefficients()),
        "remstillLCM" => FixtureValue::Presentation(fixtures::remstill_lcm(2, 1)?),
        "ex-u-bj" => FixtureValue::Presentation(fixtures::ex_u_bj(1, 2)?),
        other => {
            let renamed = match other.strip_prefix("remstillLCM") {
                Some(rest) => format!("remstill-lcm{rest}"),
                None => other.to_string(),
            };
            FixtureValue::Presentation(fixtures::by_name(&renamed)?)
        }
    })
}

/// Reads a presentation from a file path, or from the fixture registry
/// when no such file exists.
fn resolve_presentation(source: &str) -> Result<Presentation> {
    if Path::new(source).is_file() {
        let text = fs::read_to_string(source)
            .with_context(|| format!("reading presentation file {source}"))?;
        return Ok(Presentation::parse(&text)?);
    }
    match load_fixture(source)? {
        FixtureValue::Presentation(p) => Ok(p),
        FixtureValue::Coefficients(_) => {
            bail!("fixture {source:?} is a coefficient action, not a presentation")
        }
    }
}

fn resolve_coefficients(source: &str) -> Result<CoeffAction> {
    if source == "trivial" {
        return Ok(CoeffAction::trivial());
    }
    if Path::new(source).is_file() {
        let text = fs::read_to_string(source)
            .with_context(|| format!("reading coefficient file {source}"))?;
        return Ok(CoeffAction::from_json(&text)?);
    }
    match load_fixture(source)? {
        FixtureValue::Coefficients(c) => Ok(c),
        FixtureValue::Presentation(_) => {
            bail!("fixture {source:?} is a presentation, not a coefficient action")
        }
    }
}

fn emit<T: Serialize>(value: &T, pretty: bool, out: Option<&Path>) -> Result<()> {
    let mut text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    text.push('\n');
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

// subcommand handlers

#[derive(Serialize)]
struct PresentationCheckReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    relations: Vec<String>,
    complemented: bool,
    #[serde(flatten)]
    structure: workbench_core::presentation::PresentationReport,
}

fn cmd_presentation_check(args: &PresArgs, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let report = PresentationCheckReport {
        schema_version: 1,
        command: "presentation check",
        source: args.presentation.clone(),
        relations: p
            .relations()
            .iter()
            .map(|(u, v)| format!("{} = {}", u.render(), v.render()))
            .collect(),
        complemented: ComplementTable::build(&p).is_ok(),
        structure: check_presentation(&p),
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct EqualReport {
    schema_version: u32,
    command: &'static str,
    x: String,
    y: String,
    #[serde(flatten)]
    verdict: EqualityVerdict,
}

fn cmd_word_equal(args: &PairArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let x = parse_word(&args.x)?;
    let y = parse_word(&args.y)?;
    let verdict = words_equal(&x, &y, &p, budget);
    let undecided = verdict.status == EqualityStatus::Unknown;
    let report = EqualReport {
        schema_version: 1,
        command: "word equal",
        x: x.render(),
        y: y.render(),
        verdict,
    };
    emit(&report, pretty, None)?;
    Ok(if undecided { 2 } else { 0 })
}

#[derive(Serialize)]
struct ReverseReport {
    schema_version: u32,
    command: &'static str,
    input: String,
    outcome: String,
    terminal: String,
    positive_part: Option<String>,
    negative_part: Option<String>,
    steps_used: u64,
    trace: Option<Vec<String>>,
}

fn cmd_reverse(args: &ReverseArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let word = parse_signed(&args.word)?;
    let trace = reverse(&word, &p, budget)?;
    let (outcome, positive, negative) = match &trace.outcome {
        ReversingOutcome::Terminated { left, right } => (
            "terminated".to_string(),
            Some(left.render()),
            Some(right.render()),
        ),
        ReversingOutcome::Stuck { sigma, tau, .. } => (
            format!("stuck: {} and {} have no common multiple", *sigma as char, *tau as char),
            None,
            None,
        ),
        ReversingOutcome::BudgetExhausted => ("budget-exhausted".to_string(), None, None),
    };
    let lines = args.trace.then(|| {
        trace
            .steps
            .iter()
            .map(|s| match &s.rule {
                StepRule::Cancel => format!(
                    "pos {}: {}^-1 {} → 1",
                    s.position, s.sigma as char, s.tau as char
                ),
                StepRule::Complement { s: cs, t } => format!(
                    "pos {}: {}^-1 {} → {} {}^-1",
                    s.position,
                    s.sigma as char,
                    s.tau as char,
                    cs.render(),
                    t.render()
                ),
            })
            .collect()
    });
    let code = match trace.outcome {
        ReversingOutcome::BudgetExhausted => 2,
        _ => 0,
    };
    let report = ReverseReport {
        schema_version: 1,
        command: "reverse",
        input: trace.start.render(),
        outcome,
        terminal: trace.terminal.render(),
        positive_part: positive,
        negative_part: negative,
        steps_used: trace.steps_used,
        trace: lines,
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

#[derive(Serialize)]
struct LcmReport {
    schema_version: u32,
    command: &'static str,
    x: String,
    y: String,
    status: &'static str,
    join: Option<String>,
    complement_x: Option<String>,
    complement_y: Option<String>,
    reason: Option<String>,
}

fn cmd_lcm(args: &PairArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let x = parse_word(&args.x)?;
    let y = parse_word(&args.y)?;
    let mut report = LcmReport {
        schema_version: 1,
        command: "lcm",
        x: x.render(),
        y: y.render(),
        status: "none",
        join: None,
        complement_x: None,
        complement_y: None,
        reason: None,
    };
    let code = match lcm(&x, &y, &p, budget) {
        Ok(Some(l)) => {
            report.status = "join";
            report.join = Some(l.join.render());
            report.complement_x = Some(l.comp_x.render());
            report.complement_y = Some(l.comp_y.render());
            0
        }
        Ok(None) => {
            report.reason = Some("reversing got stuck: no common right multiple".into());
            0
        }
        Err(CoreError::Budget(msg)) => {
            report.status = "undetermined";
            report.reason = Some(msg);
            2
        }
        Err(e) => return Err(e.into()),
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

#[derive(Serialize)]
struct DividesReport {
    schema_version: u32,
    command: &'static str,
    divisor: String,
    word: String,
    verdict: &'static str,
    complement: Option<String>,
}

fn cmd_divides(args: &PairArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let x = parse_word(&args.x)?;
    let z = parse_word(&args.y)?;
    let (verdict, complement, code) = match divides(&x, &z, &p, budget)? {
        Divides::Yes(c) => ("yes", Some(c.render()), 0),
        Divides::No => ("no", None, 0),
        Divides::Unknown => ("unknown", None, 2),
    };
    let report = DividesReport {
        schema_version: 1,
        command: "divides",
        divisor: x.render(),
        word: z.render(),
        verdict,
        complement,
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

#[derive(Serialize)]
struct CubeReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    #[serde(flatten)]
    outcome: CubeOutcome,
}

fn cmd_cube(args: &PresArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let outcome = check_cube_condition(&p, budget)?;
    let code = match outcome {
        CubeOutcome::Undetermined { .. } => 2,
        _ => 0,
    };
    let report = CubeReport {
        schema_version: 1,
        command: "cube",
        source: args.presentation.clone(),
        outcome,
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

#[derive(Serialize)]
struct HomogReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    certified: bool,
    certificate: Option<HomogeneityWeights>,
}

fn cmd_homog(args: &PresArgs, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let certificate = check_r_homogeneity(&p)?;
    let report = HomogReport {
        schema_version: 1,
        command: "homog",
        source: args.presentation.clone(),
        certified: certificate.is_some(),
        certificate,
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct ReversibleReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    #[serde(flatten)]
    report: ReversibilityReport,
}

fn cmd_reversible(args: &ReversibleArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let inner = check_left_reversible(&p, args.closure_bound, budget)?;
    let code = match inner.verdict {
        ReversibilityVerdict::Unknown => 2,
        _ => 0,
    };
    let report = ReversibleReport {
        schema_version: 1,
        command: "reversible",
        source: args.presentation.clone(),
        report: inner,
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

#[derive(Serialize)]
struct GarsideWReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    bound: usize,
    w: Option<String>,
    coverage: Option<ConditionReport>,
}

fn cmd_garside_w(args: &GarsideWArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let bound = args.bound.unwrap_or_else(|| {
        p.relations()
            .iter()
            .map(|(u, v)| u.len().max(v.len()))
            .max()
            .unwrap_or(1)
    });
    let w = find_garside_like_w(&p, bound, budget)?;
    let coverage = match &w {
        Some(w) => Some(verify_condition_2_3prime(&p, w, budget)?),
        None => None,
    };
    let code = if w.is_some() { 0 } else { 2 };
    let report = GarsideWReport {
        schema_version: 1,
        command: "garside-w",
        source: args.presentation.clone(),
        bound,
        w: w.map(|w| w.render()),
        coverage,
    };
    emit(&report, pretty, None)?;
    Ok(code)
}

fn build_graph(select: &GraphSelect, budget: &Budget) -> Result<ModelGraph> {
    let need_presentation = || -> Result<Presentation> {
        let source = select
            .presentation
            .as_deref()
            .context("this family needs --presentation")?;
        resolve_presentation(source)
    };
    Ok(match select.family {
        Family::Nonreversible => build_nonreversible_graph(&need_presentation()?, select.pruned)?,
        Family::Case1 => build_reversible_graph_case1(&need_presentation()?, select.pruned, budget)?,
        Family::Case2 => {
            let w = parse_word(select.w.as_deref().context("the case-2 model needs --w")?)?;
            build_reversible_graph_case2(&need_presentation()?, &w, select.pruned, budget)?
        }
        Family::Dihedral => builtin_dihedral(select.m.context("the dihedral family needs --m")?)?,
        Family::Torus => builtin_torus(
            select.p.context("the torus family needs --p")?,
            select.q.context("the torus family needs --q")?,
        )?,
    })
}

fn cmd_graph_model(args: &GraphModelArgs, budget: &Budget) -> Result<u8> {
    let g = build_graph(&args.select, budget)?;
    match args.out {
        GraphFormat::Json => println!("{}", export_json(&g)),
        GraphFormat::Dot => print!("{}", export_dot(&g)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct GraphKReport {
    schema_version: u32,
    command: &'static str,
    vertices: usize,
    edges: usize,
    properties: GraphProperties,
    k0: String,
    k1: String,
}

fn cmd_graph_k(args: &GraphKArgs, budget: &Budget, pretty: bool) -> Result<u8> {
    let g = build_graph(&args.select, budget)?;
    let (k0, k1) = graph_k_theory(&g)?;
    let report = GraphKReport {
        schema_version: 1,
        command: "graph-k",
        vertices: g.vertices().len(),
        edges: g.edges().len(),
        properties: graph_properties(&g),
        k0: k0.render(),
        k1: k1.render(),
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

// Artin-Tits subcommands

fn coxeter_system(args: &CoxeterArgs) -> Result<CoxeterSystem> {
    match (&args.label, &args.matrix) {
        (Some(label), None) => Ok(CoxeterSystem::from_label(label, args.cap)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading Coxeter matrix {}", path.display()))?;
            let mut rows = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let row: Vec<u32> = line
                    .split_whitespace()
                    .map(|t| t.parse().with_context(|| format!("bad matrix entry {t:?}")))
                    .collect::<Result<_>>()?;
                rows.push(row);
            }
            let names = (1..=rows.len()).map(|i| format!("s{i}")).collect();
            Ok(CoxeterSystem::from_matrix(names, rows, args.cap)?)
        }
        _ => bail!("give exactly one of --type or --matrix"),
    }
}

/// Parses "{s1,s2}" into generator indices.
fn parse_subset(sys: &CoxeterSystem, text: &str) -> Result<Vec<usize>> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .with_context(|| format!("subset {text:?} must be written like {{s1,s2}}"))?;
    let mut out = Vec::new();
    for tok in inner.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let idx = sys
            .generator_names()
            .iter()
            .position(|n| n == tok)
            .with_context(|| format!("unknown generator {tok:?}"))?;
        if !out.contains(&idx) {
            out.push(idx);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn render_subset(sys: &CoxeterSystem, indices: &[usize]) -> String {
    let names: Vec<&str> = indices
        .iter()
        .map(|&i| sys.generator_names()[i].as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Serialize)]
struct ArtinNfReport {
    schema_version: u32,
    command: &'static str,
    system: String,
    order: usize,
    word: String,
    normal_form: String,
    depth: usize,
}

fn cmd_artin_nf(args: &ArtinNfArgs, pretty: bool) -> Result<u8> {
    let sys = coxeter_system(&args.system)?;
    let word = sys.parse_word(&args.word)?;
    let nf = sys.normal_form(&word)?;
    let report = ArtinNfReport {
        schema_version: 1,
        command: "artin nf",
        system: sys.certificate().to_string(),
        order: sys.order(),
        word: sys.render_word(&word),
        normal_form: sys.render_normal_form(&nf),
        depth: nf.depth(),
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct ArtinEquivReport {
    schema_version: u32,
    command: &'static str,
    system: String,
    ambient: String,
    from: String,
    to: String,
    found: bool,
    witness: Option<String>,
}

fn cmd_artin_equiv(args: &ArtinEquivArgs, pretty: bool) -> Result<u8> {
    let sys = coxeter_system(&args.system)?;
    let ambient = match &args.ambient {
        Some(text) => parse_subset(&sys, text)?,
        None => (0..sys.rank()).collect(),
    };
    let from = parse_subset(&sys, &args.from)?;
    let to = parse_subset(&sys, &args.to)?;
    let witness: Option<NormalForm> = sys.equiv_search(&ambient, &from, &to)?;
    let report = ArtinEquivReport {
        schema_version: 1,
        command: "artin equiv",
        system: sys.certificate().to_string(),
        ambient: render_subset(&sys, &ambient),
        from: render_subset(&sys, &from),
        to: render_subset(&sys, &to),
        found: witness.is_some(),
        witness: witness.map(|nf| sys.render_normal_form(&nf)),
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct ArtinCountReport {
    schema_version: u32,
    command: &'static str,
    system: String,
    n: u64,
    count: String,
    per_length: Vec<String>,
}

fn cmd_artin_count(args: &ArtinCountArgs, pretty: bool) -> Result<u8> {
    let sys = coxeter_system(&args.system)?;
    let mut per_length = Vec::new();
    for k in 1..=args.n {
        per_length.push(sys.infinite_nf_count(k)?.to_string());
    }
    let count = per_length
        .last()
        .cloned()
        .context("sequence length must be at least 1")?;
    let report = ArtinCountReport {
        schema_version: 1,
        command: "artin count-nf",
        system: sys.certificate().to_string(),
        n: args.n,
        count,
        per_length,
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

#[derive(Serialize)]
struct ArtinDeltaReport {
    schema_version: u32,
    command: &'static str,
    system: String,
    subset: String,
    element: String,
    length: usize,
    left_set: Vec<String>,
    right_set: Vec<String>,
}

fn cmd_artin_delta(args: &ArtinDeltaArgs, pretty: bool) -> Result<u8> {
    let sys = coxeter_system(&args.system)?;
    let subset = match &args.subset {
        Some(text) => parse_subset(&sys, text)?,
        None => (0..sys.rank()).collect(),
    };
    let delta = sys.delta_t(&subset)?;
    let names = |indices: Vec<usize>| -> Vec<String> {
        indices
            .iter()
            .map(|&i| sys.generator_names()[i].clone())
            .collect()
    };
    let report = ArtinDeltaReport {
        schema_version: 1,
        command: "artin delta",
        system: sys.certificate().to_string(),
        subset: render_subset(&sys, &subset),
        element: sys.render_word(delta.letters()),
        length: delta.len(),
        left_set: names(sys.left_set_reduced(&delta)),
        right_set: names(sys.right_set_reduced(&delta)),
    };
    emit(&report, pretty, None)?;
    Ok(0)
}

// K-theory subcommands

#[derive(Serialize)]
struct PipelineCliReport {
    schema_version: u32,
    command: &'static str,
    determined: bool,
    report: KReport,
}

fn cmd_pipeline(args: &PipelineArgs, budget: &Budget, seed: u64, pretty: bool) -> Result<u8> {
    let case = match args.case {
        CaseFamily::Dihedral => {
            PipelineCase::dihedral(args.m.context("the dihedral case needs --m")?)?
        }
        CaseFamily::Torus => PipelineCase::torus(
            args.p.context("the torus case needs --p")?,
            args.q.context("the torus case needs --q")?,
        )?,
    };
    let act = resolve_coefficients(&args.coeff)?;
    let mut hints = Vec::new();
    for h in &args.hint {
        match h.as_str() {
            "unit-summand" => hints.push(PipelineHint::UnitClassFreeSummand),
            other => bail!("unknown hint {other:?}; known hints: unit-summand"),
        }
    }
    let run = k_of_crossed_product(&case, &act, &hints, budget, seed)?;
    let determined = run.fully_determined();
    let report = PipelineCliReport {
        schema_version: 1,
        command: "ktheory pipeline",
        determined,
        report: run.report()?,
    };
    emit(&report, pretty, args.out.as_deref())?;
    Ok(if determined { 0 } else { 2 })
}

#[derive(Serialize)]
struct BoundaryReport {
    schema_version: u32,
    command: &'static str,
    source: String,
    generators: Option<usize>,
    infinite_alphabet: bool,
    k0: String,
    unit_image: i64,
    k1: String,
}

fn cmd_boundary(args: &BoundaryArgs, pretty: bool) -> Result<u8> {
    let p = resolve_presentation(&args.presentation)?;
    let k = boundary_quotient_k(&p, args.infinite)?;
    let report = BoundaryReport {
        schema_version: 1,
        command: "ktheory boundary",
        source: args.presentation.clone(),
        generators: (!args.infinite).then(|| p.alphabet().len()),
        infinite_alphabet: args.infinite,
        k0: k.k0.render(),
        unit_image: k.unit_image,
        k1: k.k1.render(),
    };
    emit(&report, pretty, args.out.as_deref())?;
    Ok(0)
}
