use serde::{Deserialize, Serialize};

use super::assemble::{assemble_shapes, verify_tiling, Tiling};
use super::params::{build_ladder, choose_epsilon, LadderRung};
use super::slots::{build_relation, carve_slots, choose_u, difference_set};
use super::ExactTilingError;
use crate::action_space::{ActionWindow, PointSet};
use crate::group_model::{Rational, Shape};
use crate::matching::{certify_expansivity, match_saturating, ExpansivityCertificate, MatchingTranscript};
use crate::quasitiling::{bdense, ladder_length, BdenseOptions, StageRecord};
use crate::report::{all_hold, first_failure, Check, Policy};

/// Working ε values tried in order when no override is given.
pub const EPSILON_CANDIDATES: [(i64, i64); 9] =
    [(1, 5), (1, 6), (1, 8), (1, 10), (1, 12), (1, 16), (1, 20), (1, 24), (1, 32)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TileConfig {
    pub policy: Policy,
    /// Forces a single working ε.
    pub eps: Option<Rational>,
    /// Largest Følner index tried for the ladder.
    pub folner_cap: usize,
    /// Largest symmetric Følner index tried for `U`.
    pub u_cap: usize,
    /// Seed for the expansivity spot checks.
    pub seed: u64,
    /// `W′ = W W⁻¹` is only materialized when `|W|²` is at most this.
    pub w_prime_limit: usize,
}

impl Default for TileConfig {
    fn default() -> Self {
        TileConfig {
            policy: Policy::Verified,
            eps: None,
            folner_cap: 256,
            u_cap: 64,
            seed: 0,
            w_prime_limit: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub eps: Rational,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TilingReport {
    pub policy: Policy,
    pub eps_theory: Rational,
    pub eps: Rational,
    pub n: usize,
    pub slack_delta: Rational,
    pub ladder: Vec<LadderRung>,
    pub stages: Vec<StageRecord>,
    pub atlas_tiles: usize,
    pub leftover: usize,
    pub slots: usize,
    pub u_index: Option<usize>,
    pub u_size: Option<usize>,
    pub certificate: Option<ExpansivityCertificate>,
    pub matching: Option<MatchingTranscript>,
    pub hypotheses: Vec<Check>,
    pub checks: Vec<Check>,
    pub classes: usize,
    pub tiles: usize,
    pub attempts: Vec<Attempt>,
}

impl TilingReport {
    pub fn verified(&self) -> bool {
        all_hold(&self.checks)
    }
}

/// Everything one pipeline run produces.
#[derive(Clone, Debug)]
pub struct TilingRun {
    pub tiling: Tiling,
    pub report: TilingReport,
    pub leftover: PointSet,
    pub slots: PointSet,
    /// Matched `(y, z)` pairs, leftover point to slot point.
    pub arrows: Vec<(usize, usize)>,
}

/// Partitions the window into translates of finitely many `(K, δ)`-invariant
/// shapes.
///
/// Under [`Policy::Strict`] only the theoretical ε is tried and every
/// hypothesis must hold. Under [`Policy::Verified`] the working ε values are
/// tried in turn and the first run whose output passes [`verify_tiling`] is
/// returned.
pub fn tile_exactly(
    window: &ActionWindow,
    k: &Shape,
    delta: &Rational,
    config: &TileConfig,
) -> Result<TilingRun, ExactTilingError> {
    if k.is_empty() {
        return Err(ExactTilingError::InvalidK("empty".into()));
    }
    window
        .check_shape("K", k)
        .map_err(|e| ExactTilingError::InvalidK(e.to_string()))?;
    let eps_theory = choose_epsilon(k, delta)?;
    let candidates: Vec<Rational> = match (&config.eps, config.policy) {
        (Some(e), _) => vec![e.clone()],
        (None, Policy::Strict) => vec![eps_theory.clone()],
        (None, Policy::Verified) => EPSILON_CANDIDATES.iter().map(|&(p, q)| Rational::new(p, q)).collect(),
    };
    let mut attempts = Vec::new();
    for eps in candidates {
        log::info!("trying eps = {eps}");
        match attempt(window, k, delta, &eps, &eps_theory, config) {
            Ok(mut run) => {
                if run.report.verified() {
                    attempts.push(Attempt {
                        eps,
                        outcome: "verified".into(),
                    });
                    run.report.attempts = attempts;
                    return Ok(run);
                }
                let why = first_failure(&run.report.checks).map_or(String::new(), |c| format!("{}: {}", c.name, c.detail));
                log::info!("eps = {eps}: verification failed: {why}");
                attempts.push(Attempt {
                    eps,
                    outcome: format!("verification failed: {why}"),
                });
            }
            Err(e) if config.policy == Policy::Strict => return Err(e),
            Err(e) => {
                log::info!("eps = {eps}: {e}");
                attempts.push(Attempt {
                    eps,
                    outcome: e.to_string(),
                });
            }
        }
    }
    Err(ExactTilingError::Infeasible(
        attempts.into_iter().map(|a| format!("eps {}: {}", a.eps, a.outcome)).collect(),
    ))
}

fn attempt(
    window: &ActionWindow,
    k: &Shape,
    delta: &Rational,
    eps: &Rational,
    eps_theory: &Rational,
    config: &TileConfig,
) -> Result<TilingRun, ExactTilingError> {
    let strict = config.policy == Policy::Strict;
    let n = ladder_length(eps).map_err(stage("ladder"))?;
    let tau = if eps < delta { eps.clone() } else { delta.clone() };
    let (rungs, ladder) = build_ladder(window, k, eps, &tau, n, config.folner_cap).map_err(stage("ladder"))?;
    log::info!(
        "ladder indices {:?}",
        rungs.iter().map(|r| r.index).collect::<Vec<_>>()
    );

    let mut hypotheses = vec![Check::new(
        "((|K|+1)6eps + eps)/(1-6eps) < delta",
        eps <= eps_theory,
        format!("eps = {eps}, theoretical {eps_theory}"),
    )];
    let options = BdenseOptions {
        policy: config.policy,
        windows: None,
    };
    let atlas = bdense(window, k, eps, &ladder, &options).map_err(stage("quasitile"))?;
    hypotheses.extend(atlas.hypotheses.iter().cloned());
    if strict {
        if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
            return Err(ExactTilingError::Hypothesis {
                name: h.name.clone(),
                detail: h.detail.clone(),
            });
        }
    }
    log::info!(
        "atlas: {} tiles, leftover {}",
        atlas.entries.len(),
        atlas.leftover.len()
    );

    let slots = carve_slots(window, &atlas, eps).map_err(stage("slots"))?;
    let mut report = TilingReport {
        policy: config.policy,
        eps_theory: eps_theory.clone(),
        eps: eps.clone(),
        n,
        slack_delta: atlas.delta.clone(),
        ladder: rungs,
        stages: atlas.stages.clone(),
        atlas_tiles: atlas.entries.len(),
        leftover: atlas.leftover.len(),
        slots: slots.set.len(),
        u_index: None,
        u_size: None,
        certificate: None,
        matching: None,
        hypotheses,
        checks: Vec::new(),
        classes: 0,
        tiles: 0,
        attempts: Vec::new(),
    };
    let mut arrows = Vec::new();

    let (tiling, bound) = if atlas.leftover.is_empty() {
        assemble_shapes(window, &atlas, &slots, None, None, eps).map_err(stage("assemble"))?
    } else {
        let w = ladder.iter().skip(1).fold(ladder[0].clone(), |acc, f| acc.union(f));
        let w_prime = difference_set(window, &w, config.w_prime_limit);
        let u = choose_u(window, w_prime.as_ref(), eps, &atlas.leftover, &slots.set, config.u_cap)
            .map_err(stage("choose U"))?;
        report.hypotheses.extend(u.checks.iter().cloned());
        if w_prime.is_none() {
            report
                .hypotheses
                .push(Check::new("U (W', (1/2-eps)/|W'|)-invariant", false, "not evaluated: |W|^2 over the limit"));
        }
        if strict {
            if let Some(h) = report.hypotheses.iter().find(|h| !h.holds) {
                return Err(ExactTilingError::Hypothesis {
                    name: h.name.clone(),
                    detail: h.detail.clone(),
                });
            }
        }
        report.u_index = Some(u.index);
        report.u_size = Some(u.shape.len());
        let rel = build_relation(window, &atlas.leftover, &slots.set, &u.shape, eps).map_err(stage("relation"))?;
        let cert = certify_expansivity(&rel.relation, config.seed).map_err(stage("certify"))?;
        let (rho, transcript) = match_saturating(&rel.relation, &cert).map_err(stage("match"))?;
        arrows = rho
            .pairs()
            .into_iter()
            .map(|(x, j)| (rel.left[x], rel.right[j]))
            .collect();
        report.certificate = Some(cert);
        report.matching = Some(transcript);
        assemble_shapes(window, &atlas, &slots, Some((&rel, &rho)), Some(&u.shape), eps).map_err(stage("assemble"))?
    };
    report.checks.push(bound);
    report.checks.extend(verify_tiling(window, &tiling, k, delta));
    report.classes = tiling.class_count();
    report.tiles = tiling.tile_count();
    Ok(TilingRun {
        tiling,
        report,
        leftover: atlas.leftover,
        slots: slots.set,
        arrows,
    })
}

fn stage<E: Into<ExactTilingError>>(name: &'static str) -> impl Fn(E) -> ExactTilingError {
    move |e| ExactTilingError::Stage {
        stage: name,
        source: Box::new(e.into()),
    }
}
