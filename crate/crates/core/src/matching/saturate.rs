use serde::Serialize;

use super::eliminate::PathSearch;
use super::{
    eliminate_short_augmenting, BipartiteRelation, ExpansivityCertificate, MatchingError, MatchingState,
};
use crate::group_model::Rational;

/// State after phase `n`, i.e. after removing augmenting paths shorter than `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseRecord {
    pub phase: usize,
    pub unmatched: usize,
    pub left: usize,
    /// `c^{-n}` when an expansivity certificate is in force.
    pub bound: Option<Rational>,
    pub within_bound: bool,
    pub sweeps: usize,
    pub flips: usize,
    pub changed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingTranscript {
    pub certificate: Option<ExpansivityCertificate>,
    pub phases: Vec<PhaseRecord>,
    pub matched: usize,
    pub left: usize,
    pub saturated: bool,
}

/// Runs phases `n = 1, 2, ...` with `f_n = eliminate_short_augmenting(f_{n-1}, n)`
/// until every left point is matched, asserting `|L ∖ dom f_n| <= c^{-n}|L|`
/// after each phase.
pub fn match_saturating(
    r: &BipartiteRelation,
    cert: &ExpansivityCertificate,
) -> Result<(MatchingState, MatchingTranscript), MatchingError> {
    if !cert.is_expansive() {
        return Err(MatchingError::NotExpansive(cert.c.clone()));
    }
    let (g, transcript) = run_phases(r, Some(cert))?;
    if !transcript.saturated {
        return Err(hall_violation(r, &g));
    }
    Ok((g, transcript))
}

/// The same phase iteration without an expansivity assumption; stops at a
/// maximum matching.
pub fn maximum_matching_by_phases(
    r: &BipartiteRelation,
    cert: Option<&ExpansivityCertificate>,
) -> (MatchingState, MatchingTranscript) {
    let cert = cert.filter(|c| c.is_expansive());
    run_phases(r, cert).unwrap_or_else(|_| run_phases(r, None).expect("no bound to violate"))
}

fn run_phases(
    r: &BipartiteRelation,
    cert: Option<&ExpansivityCertificate>,
) -> Result<(MatchingState, MatchingTranscript), MatchingError> {
    let left = r.left_len();
    let mut g = MatchingState::empty(r);
    let mut phases = Vec::new();
    let mut search = PathSearch::new(r);
    let mut n = 0;
    while g.unmatched_left() > 0 {
        n += 1;
        let (next, rep) = eliminate_short_augmenting(r, &g, n);
        g = next;
        g.phase = n;
        let bound = cert.map(|c| c.phase_bound(n));
        let unmatched = g.unmatched_left();
        let within_bound = bound.as_ref().map_or(true, |b| !b.below_count(unmatched, left));
        phases.push(PhaseRecord {
            phase: n,
            unmatched,
            left,
            bound: bound.clone(),
            within_bound,
            sweeps: rep.sweeps,
            flips: rep.flips,
            changed: rep.changed,
        });
        if !within_bound {
            return Err(MatchingError::PhaseBound {
                phase: n,
                unmatched,
                left,
            });
        }
        if unmatched > 0 && rep.flips == 0 {
            let any = g
                .free_left()
                .collect::<Vec<_>>()
                .into_iter()
                .any(|x| search.shortest(r, &g, x, None).is_some());
            if !any {
                break;
            }
        }
    }
    let transcript = MatchingTranscript {
        certificate: cert.cloned(),
        matched: g.len(),
        left,
        saturated: g.unmatched_left() == 0,
        phases,
    };
    Ok((g, transcript))
}

/// A left set `S` with `|R_S| < |S|`, found by alternating reachability
/// from a free left vertex of a maximum matching.
fn hall_violation(r: &BipartiteRelation, g: &MatchingState) -> MatchingError {
    let x0 = g.free_left().next().unwrap_or(0);
    let (left, right) = PathSearch::new(r).reachable(r, g, x0);
    MatchingError::HallViolation { left, right }
}
