//! Subcommands and exit-code mapping.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 the
//! requested parameters are unattainable. Failures print a single line
//! `error kind=<kind>: <reason>` on stderr.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use folner_core::action_space::{banach_density, ActionWindow};
use folner_core::exact_tiling::{build_ladder, tile_exactly, verify_tiling, TileConfig};
use folner_core::group_model::{GroupModel, Rational, Shape};
use folner_core::matching::{
    certify_expansivity, match_saturating, maximum_matching_by_phases, BipartiteRelation, MatchingError,
};
use folner_core::quasitiling::{
    bdense, default_windows, group_ladder_length, group_quasitile, ladder_length, verify_atlas, verify_group_quasitiling,
    BdenseOptions, QuasitileError,
};
use folner_core::report::{Check, Policy};

use crate::config::RunConfig;
use crate::io::{parse_edge_list, ArtifactKind, MatchingFile, TilingFile, SCHEMA_VERSION};
use crate::presets::KSpec;
use crate::render::{render_svg, RenderSpec};

#[derive(Debug, Parser)]
#[command(name = "folner", version, about = "Quasitilings and exact tilings of finite group actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasitile a torus window (atlas JSON) or a finite subset of the group.
    Quasitile(QuasitileArgs),
    /// Partition a torus window into translates of (K, delta)-invariant shapes.
    Tile(TileArgs),
    /// Match the left side of a bipartite edge list, phase by phase.
    Match(MatchArgs),
    /// Re-verify a tiling or atlas JSON file.
    Check(CheckArgs),
    /// Draw a two-dimensional tiling or atlas as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// z1, z2, z3, heis or lamplighter.
    #[arg(long)]
    pub model: Option<GroupModel>,
    /// Carrier side.
    #[arg(long)]
    pub n: Option<usize>,
    /// Preset name or a JSON list of coordinates.
    #[arg(long)]
    pub k: Option<String>,
    /// Working epsilon, as p/q.
    #[arg(long)]
    pub eps: Option<Rational>,
    /// strict or verified.
    #[arg(long)]
    pub policy: Option<Policy>,
    /// Largest Følner index tried for the ladder.
    #[arg(long)]
    pub folner_cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LadderKind {
    /// Følner boxes spread between the smallest and largest admissible index.
    Auto,
    /// Følner sets of index 2, 4, 8, ...
    Dyadic,
}

#[derive(Debug, Args)]
pub struct QuasitileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "auto")]
    pub ladder: LadderKind,
    /// Ladder length; the smallest n with (1-eps)^n < eps by default.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Quasitile E = F_extent inside the group instead of the torus window.
    #[arg(long)]
    pub extent: Option<usize>,
    /// Disjointness and coverage parameter for --extent.
    #[arg(long)]
    pub beta: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct TileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Invariance threshold for the tiles, as p/q.
    #[arg(long)]
    pub delta: Option<Rational>,
    #[arg(long)]
    pub u_cap: Option<usize>,
    /// Also render the result to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Edge list: one `left right` pair of 0-based indices per line.
    pub edges: PathBuf,
    #[arg(long)]
    pub left: Option<usize>,
    #[arg(long)]
    pub right: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Invariance threshold for tilings; the file's delta by default.
    #[arg(long)]
    pub delta: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub file: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Cell size in pixels.
    #[arg(long, default_value_t = 4)]
    pub cell: u32,
    #[arg(long, default_value_t = 0)]
    pub palette_seed: u64,
    /// Comma-separated subset of tiles, leftover, slots, matching.
    #[arg(long, default_value = "tiles,leftover")]
    pub layers: String,
}

#[derive(Debug)]
pub enum CliError {
    Verification(String),
    Invalid(String),
    Infeasible(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Verification(_) => "verification-failed",
            CliError::Invalid(_) => "invalid-input",
            CliError::Infeasible(_) => "infeasible",
        }
    }

    /// The stderr line, newlines flattened.
    pub fn line(&self) -> String {
        let (CliError::Verification(r) | CliError::Invalid(r) | CliError::Infeasible(r)) = self;
        format!("error kind={}: {}", self.kind(), r.replace('\n', " "))
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Invalid(format!("{e:#}"))
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Quasitile(a) => quasitile(a),
        Command::Tile(a) => tile(a),
        Command::Match(a) => match_cmd(a),
        Command::Check(a) => check(a),
        Command::Render(a) => render(a),
    }
}

/// Flag values merged over the config file.
struct Resolved {
    config: RunConfig,
    model: GroupModel,
    policy: Policy,
    eps: Option<Rational>,
    folner_cap: usize,
    seed: u64,
    out: Option<PathBuf>,
}

impl Resolved {
    fn new(p: &ParamArgs) -> CliResult<Self> {
        let config = match &p.config {
            Some(path) => RunConfig::load(&path.to_string_lossy())?,
            None => RunConfig::default(),
        };
        let model = p.model.or(config.model).ok_or_else(|| invalid("missing --model"))?;
        Ok(Resolved {
            model,
            policy: p.policy.or(config.policy).unwrap_or_default(),
            eps: p.eps.clone().or_else(|| config.eps.clone()),
            folner_cap: p.folner_cap.or(config.search.folner_cap).unwrap_or(256),
            seed: p.seed.or(config.seed).unwrap_or(0),
            out: p.out.clone().or_else(|| config.output.json.clone().map(PathBuf::from)),
            config,
        })
    }

    fn window(&self, p: &ParamArgs) -> CliResult<ActionWindow> {
        let n = p.n.or(self.config.n).ok_or_else(|| invalid("missing --n"))?;
        ActionWindow::new(self.model, n).map_err(invalid)
    }

    fn k(&self, p: &ParamArgs) -> CliResult<Shape> {
        let spec = match &p.k {
            Some(s) => KSpec::parse_flag(s)?,
            None => self.config.k.clone().ok_or_else(|| invalid("missing --k"))?,
        };
        Ok(spec.resolve(&self.model)?)
    }
}

/// Writes an artifact to `out`, or to stdout. Returns whether the human
/// report should go to stdout (it goes to stderr when stdout carries JSON).
fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<bool> {
    match out {
        Some(path) => {
            fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(true)
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(invalid)?;
            Ok(false)
        }
    }
}

fn say(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn print_checks(to_stdout: bool, checks: &[Check]) {
    for c in checks {
        let tag = if c.holds { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            say(to_stdout, &format!("{tag} {}", c.name));
        } else {
            say(to_stdout, &format!("{tag} {} ({})", c.name, c.detail));
        }
    }
}

fn verdict(checks: &[Check]) -> CliResult<()> {
    match checks.iter().find(|c| !c.holds) {
        None => Ok(()),
        Some(c) => Err(CliError::Verification(format!("{}: {}", c.name, c.detail))),
    }
}

fn quasitile_error(e: QuasitileError) -> CliError {
    match e {
        QuasitileError::Action(_)
        | QuasitileError::Group(_)
        | QuasitileError::InvalidEpsilon(_)
        | QuasitileError::InvalidBeta(_)
        | QuasitileError::EmptyShape(_)
        | QuasitileError::EmptyLadder => invalid(e),
        _ => CliError::Infeasible(e.to_string()),
    }
}

fn quasitile(a: QuasitileArgs) -> CliResult<()> {
    let r = Resolved::new(&a.params)?;
    if let Some(extent) = a.extent {
        return group_mode(&r, &a, extent);
    }
    let window = r.window(&a.params)?;
    let k = r.k(&a.params)?;
    let eps = r.eps.clone().unwrap_or_else(|| Rational::new(1, 4));
    let n = match a.levels {
        Some(n) => n,
        None => ladder_length(&eps).map_err(quasitile_error)?,
    };
    let ladder = match a.ladder {
        LadderKind::Auto => {
            build_ladder(&window, &k, &eps, &eps, n, r.folner_cap)
                .map_err(|e| CliError::Infeasible(e.to_string()))?
                .1
        }
        LadderKind::Dyadic => dyadic_ladder(&r.model, n, |f| window.check_shape("F", f).is_ok())?,
    };
    let options = BdenseOptions {
        policy: r.policy,
        windows: None,
    };
    let atlas = bdense(&window, &k, &eps, &ladder, &options).map_err(quasitile_error)?;
    let checks = verify_atlas(&window, &atlas).map_err(quasitile_error)?;
    let report = json!({
        "policy": r.policy,
        "covered": atlas.covered.len(),
        "leftover": atlas.leftover.len(),
        "lower_density": atlas.lower_density,
        "stages": atlas.stages,
        "hypotheses": atlas.hypotheses,
        "checks": checks,
    });
    let file = TilingFile::from_atlas(&window, &k, &atlas, report);
    let to_stdout = emit(&r.out, &file.to_json()?)?;
    say(
        to_stdout,
        &format!(
            "atlas: {} tiles on {} levels, covered {} of {}, lower density {}",
            atlas.entries.len(),
            ladder.len(),
            atlas.covered.len(),
            window.size(),
            atlas.lower_density
        ),
    );
    print_checks(to_stdout, &checks);
    verdict(&checks)
}

/// `F_2, F_4, ..., F_{2^n}`, all of which must pass `fits`.
fn dyadic_ladder(model: &GroupModel, n: usize, fits: impl Fn(&Shape) -> bool) -> CliResult<Vec<Shape>> {
    let mut ladder = Vec::with_capacity(n);
    for i in 1..=n {
        let index = 1usize.checked_shl(i as u32).filter(|&x| x <= 1 << 20);
        let f = index.and_then(|x| model.folner_set(x).ok()).filter(|f| fits(f));
        match f {
            Some(f) => ladder.push(f),
            None => {
                return Err(CliError::Infeasible(format!(
                    "dyadic ladder: F_{} does not fit; only {} levels available, {n} requested",
                    1u128 << i,
                    i - 1
                )))
            }
        }
    }
    Ok(ladder)
}

#[derive(Serialize)]
struct GroupQuasitileFile<'a> {
    version: u32,
    kind: &'static str,
    model: GroupModel,
    extent: usize,
    #[serde(flatten)]
    result: &'a folner_core::quasitiling::GroupQuasitiling,
    checks: &'a [Check],
}

fn group_mode(r: &Resolved, a: &QuasitileArgs, extent: usize) -> CliResult<()> {
    let beta = a
        .beta
        .clone()
        .or_else(|| r.config.beta.clone())
        .unwrap_or_else(|| Rational::new(1, 4));
    let e = r.model.folner_set(extent).map_err(invalid)?;
    let n = match a.levels {
        Some(n) => n,
        None => group_ladder_length(&beta).map_err(quasitile_error)?,
    };
    let ladder = dyadic_ladder(&r.model, n, |f| f.len() <= e.len())?;
    let q = group_quasitile(&r.model, &e, &ladder, &beta, r.policy).map_err(quasitile_error)?;
    let checks = verify_group_quasitiling(&r.model, &e, &q);
    let file = GroupQuasitileFile {
        version: SCHEMA_VERSION,
        kind: "group-quasitiling",
        model: r.model,
        extent,
        result: &q,
        checks: &checks,
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(invalid)?;
    text.push('\n');
    let to_stdout = emit(&r.out, &text)?;
    say(
        to_stdout,
        &format!(
            "group quasitiling: {} tiles, covered {} of {}",
            q.tiles.len(),
            q.covered,
            q.target
        ),
    );
    print_checks(to_stdout, &checks);
    verdict(&checks)
}

fn tile(a: TileArgs) -> CliResult<()> {
    let r = Resolved::new(&a.params)?;
    let window = r.window(&a.params)?;
    let k = r.k(&a.params)?;
    let delta = a
        .delta
        .clone()
        .or_else(|| r.config.delta.clone())
        .ok_or_else(|| invalid("missing --delta"))?;
    let config = TileConfig {
        policy: r.policy,
        eps: r.eps.clone(),
        folner_cap: r.folner_cap,
        u_cap: a.u_cap.or(r.config.search.u_cap).unwrap_or(64),
        seed: r.seed,
        ..TileConfig::default()
    };
    let run = tile_exactly(&window, &k, &delta, &config).map_err(|e| {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            invalid(e)
        }
    })?;
    let file = TilingFile::from_run(&window, &k, &delta, &run)?;
    let to_stdout = emit(&r.out, &file.to_json()?)?;
    let rep = &run.report;
    say(
        to_stdout,
        &format!(
            "tiling: eps {}, {} ladder levels, {} atlas tiles, leftover {}, {} tiles in {} classes",
            rep.eps,
            rep.ladder.len(),
            rep.atlas_tiles,
            rep.leftover,
            rep.tiles,
            rep.classes
        ),
    );
    if let Some(t) = &rep.matching {
        for p in &t.phases {
            say(to_stdout, &format!("phase {}: {} of {} unmatched", p.phase, p.unmatched, p.left));
        }
    }
    print_checks(to_stdout, &rep.checks);
    let svg_path = a
        .svg
        .clone()
        .or_else(|| r.config.output.svg.clone().map(PathBuf::from));
    if let Some(path) = svg_path {
        let svg = render_svg(&file, &RenderSpec::default())?;
        fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    verdict(&rep.checks)
}

fn match_cmd(a: MatchArgs) -> CliResult<()> {
    let text = fs::read_to_string(&a.edges).with_context(|| format!("reading {}", a.edges.display()))?;
    let (l, rr, edges) = parse_edge_list(&text)?;
    let left = a.left.unwrap_or(l);
    let right = a.right.unwrap_or(rr);
    let rel = BipartiteRelation::from_edges(left, right, &edges).map_err(invalid)?;
    let cert = certify_expansivity(&rel, a.seed).ok();
    let (state, transcript) = match cert.as_ref().filter(|c| c.is_expansive()) {
        Some(c) => match match_saturating(&rel, c) {
            Ok(res) => res,
            Err(e @ MatchingError::PhaseBound { .. }) => return Err(CliError::Verification(e.to_string())),
            Err(e) => return Err(CliError::Infeasible(e.to_string())),
        },
        None => maximum_matching_by_phases(&rel, None),
    };
    let file = MatchingFile {
        version: SCHEMA_VERSION,
        left,
        right,
        pairs: state.pairs(),
        saturated: transcript.saturated,
        report: serde_json::to_value(&transcript).map_err(invalid)?,
    };
    let to_stdout = emit(&a.out, &file.to_json()?)?;
    match &transcript.certificate {
        Some(c) => say(to_stdout, &format!("expansive: c = {} (a = {}, b = {})", c.c, c.a, c.b)),
        None => say(to_stdout, "no expansivity certificate; running to a maximum matching"),
    }
    for p in &transcript.phases {
        let bound = p
            .bound
            .as_ref()
            .map_or(String::new(), |b| format!(", bound {} ({})", b, if p.within_bound { "ok" } else { "violated" }));
        say(
            to_stdout,
            &format!("phase {}: {} of {} unmatched{}", p.phase, p.unmatched, p.left, bound),
        );
    }
    say(
        to_stdout,
        &format!("matched {} of {}, saturated: {}", transcript.matched, left, transcript.saturated),
    );
    if !state.is_compatible(&rel) {
        return Err(CliError::Verification("matching uses a pair outside the relation".into()));
    }
    Ok(())
}

fn check(a: CheckArgs) -> CliResult<()> {
    let text = fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let file = TilingFile::from_json(&text)?;
    let window = file.window()?;
    let tiling = file.tiling(&window)?;
    let checks = match file.kind {
        ArtifactKind::Tiling => {
            let delta = a
                .delta
                .clone()
                .or_else(|| file.delta.clone())
                .ok_or_else(|| invalid("tiling has no delta; pass --delta"))?;
            verify_tiling(&window, &tiling, &file.k, &delta)
        }
        ArtifactKind::Atlas => check_atlas(&window, &file, &tiling)?,
    };
    print_checks(true, &checks);
    verdict(&checks)
}

/// Atlas clauses re-derived from the file alone: tile sizes against their
/// ladder level, disjointness, the stored leftover and the covered density.
fn check_atlas(
    window: &ActionWindow,
    file: &TilingFile,
    tiling: &folner_core::exact_tiling::Tiling,
) -> CliResult<Vec<Check>> {
    let eps = file.eps.clone().ok_or_else(|| invalid("atlas has no eps"))?;
    let ladder = file.ladder.clone().ok_or_else(|| invalid("atlas has no ladder"))?;
    if ladder.is_empty() {
        return Err(invalid("atlas ladder is empty"));
    }
    let keep = Rational::one() - eps.clone();
    let mut checks = Vec::new();

    let mut small = None;
    for c in &file.centers {
        let level = c.level.ok_or_else(|| invalid("atlas center without level"))?;
        let f = ladder
            .get(level.wrapping_sub(1))
            .ok_or_else(|| invalid(format!("level {level} outside the ladder")))?;
        let shape = &tiling.shapes[c.shape - 1];
        if !shape.is_subset(f) || !keep.below_count(shape.len(), f.len()) {
            small.get_or_insert(c.at.clone());
        }
    }
    checks.push(Check::new(
        "|F_c| > (1-eps)|F_i|",
        small.is_none(),
        small.map_or(String::new(), |c| format!("center {c:?}")),
    ));

    let mut covered = window.empty_set();
    let mut clash = None;
    for (shape, centers) in tiling.shapes.iter().zip(&tiling.centers) {
        for &x in centers {
            for g in shape {
                let p = window.act(g, x);
                if covered.contains(p) {
                    clash.get_or_insert(p);
                }
                covered.insert(p);
            }
        }
    }
    checks.push(Check::new(
        "tiles pairwise disjoint",
        clash.is_none(),
        clash.map_or(String::new(), |p| format!("point {:?}", window.coords(p))),
    ));
    if let Some(leftover) = &file.leftover {
        let leftover = leftover.decode()?;
        checks.push(Check::new(
            "leftover is the uncovered set",
            leftover == covered.complement(),
            "",
        ));
    }
    let windows = default_windows(window, &ladder[ladder.len() - 1]);
    let density = banach_density(window, &covered, &windows).map_err(invalid)?.lower;
    checks.push(Check::new("covered density > 1-eps", density > keep, format!("{density}")));
    Ok(checks)
}

fn render(a: RenderArgs) -> CliResult<()> {
    let text = fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let file = TilingFile::from_json(&text)?;
    let mut spec = RenderSpec {
        cell: a.cell,
        palette_seed: a.palette_seed,
        tiles: false,
        leftover: false,
        slots: false,
        matching: false,
    };
    for layer in a.layers.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match layer {
            "tiles" => spec.tiles = true,
            "leftover" => spec.leftover = true,
            "slots" => spec.slots = true,
            "matching" => spec.matching = true,
            other => return Err(invalid(format!("unknown layer {other:?}"))),
        }
    }
    let svg = render_svg(&file, &spec)?;
    emit(&a.out, &svg)?;
    Ok(())
}
