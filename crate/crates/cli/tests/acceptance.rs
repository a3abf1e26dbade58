//! Acceptance harness: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Each criterion re-derives its verdict with test-side
//! arithmetic rather than trusting the library's own checks.

mod support;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use folner_core::action_space::{ActionWindow, PointSet};
use folner_core::graph_color::{greedy_coloring_canonical, LocalGraph};
use folner_core::group_model::{propagate_invariance, GroupModel, Rational, Shape};
use folner_core::matching::{
    certify_expansivity, eliminate_short_augmenting, match_saturating, oracle_max_matching, BipartiteRelation,
    MatchingState,
};
use folner_core::quasitiling::{
    bdense, group_quasitile, ladder_length, pack_bound_check, starinv_check, BdenseOptions, TileAtlas,
};
use folner_core::report::Policy;

use support::{folner, TilingDoc};

type Verdict = Result<String, String>;

const TILE_RUNS: [(&str, &str, &str, &str); 4] = [
    ("z2", "128", "cross1", "1/5"),
    ("z2", "128", "cross1", "1/8"),
    ("heis", "12", "center1", "1/5"),
    ("heis", "12", "center1", "1/8"),
];

struct Ctx {
    dir: tempfile::TempDir,
    bdense_runs: Option<Vec<BdenseRun>>,
}

fn main() {
    let mut ctx = Ctx {
        dir: tempfile::tempdir().expect("temp dir"),
        bdense_runs: None,
    };
    let criteria: [(&str, fn(&mut Ctx) -> Verdict); 9] = [
        ("exact tilings of z2 and heis windows", c1_tilings),
        ("group quasitiling of [0,4096)", c2_group_quasitile),
        ("phase bound on expansive relations", c3_phase_bound),
        ("matching oracle equivalence", c4_oracle),
        ("short augmenting path elimination", c5_elimination),
        ("bdense clauses on random ladders", c6_bdense),
        ("invariance checkers", c7_checkers),
        ("greedy coloring of regular graphs", c8_coloring),
        ("deterministic artifacts", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut ctx)))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

// ---------------------------------------------------------------- criterion 1

fn artifact(dir: &Path, run: usize, model: &str, delta: &str, ext: &str) -> PathBuf {
    dir.join(format!("run{run}-{model}-{}.{ext}", delta.replace('/', "_")))
}

/// Runs `tile` and returns the elapsed time.
fn tile(dir: &Path, run: usize, (model, n, k, delta): (&str, &str, &str, &str)) -> Result<Duration, String> {
    let out = artifact(dir, run, model, delta, "json");
    let start = Instant::now();
    let o = folner(&[
        "tile",
        "--model",
        model,
        "--n",
        n,
        "--k",
        k,
        "--delta",
        delta,
        "--out",
        out.to_str().unwrap(),
    ]);
    let took = start.elapsed();
    ensure(o.status.success(), || {
        format!("tile {model} {delta} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr))
    })?;
    if model == "z2" {
        let svg = artifact(dir, run, model, delta, "svg");
        let r = folner(&["render", out.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
        ensure(r.status.success(), || format!("render failed: {}", String::from_utf8_lossy(&r.stderr)))?;
    }
    Ok(took)
}

fn c1_tilings(ctx: &mut Ctx) -> Verdict {
    let mut parts = Vec::new();
    for spec in TILE_RUNS {
        let (model, n, _, delta) = spec;
        let took = tile(ctx.dir.path(), 1, spec)?;
        ensure(took < Duration::from_secs(120), || format!("{model} {delta} took {took:?}"))?;
        let path = artifact(ctx.dir.path(), 1, model, delta, "json");
        let c = folner(&["check", path.to_str().unwrap()]);
        ensure(c.status.success(), || {
            format!("check rejected {model} {delta}: {}", String::from_utf8_lossy(&c.stdout))
        })?;
        let doc = TilingDoc::load(&path);
        let points = doc.exact_cover().map_err(|e| format!("{model} {delta}: {e}"))?;
        let loose = doc.loose_shapes();
        ensure(loose.is_empty(), || format!("{model} {delta}: shapes {loose:?} not invariant"))?;
        parts.push(format!(
            "{model} N={n} delta={delta}: {points} points once, {} shapes, {:.1}s",
            doc.shapes.len(),
            took.as_secs_f64()
        ));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 2

fn c2_group_quasitile(_: &mut Ctx) -> Verdict {
    let z = GroupModel::Lattice { dim: 1 };
    const E: i64 = 4096;
    let e = Shape::from_coords((0..E).map(|i| [i]));
    let ladder: Vec<Shape> = (1..=11).map(|i| Shape::from_coords((0..1i64 << i).map(|v| [v]))).collect();
    let q = group_quasitile(&z, &e, &ladder, &Rational::new(1, 4), Policy::Verified).map_err(|e| e.to_string())?;
    let mut union = vec![false; E as usize];
    let mut cores = vec![false; E as usize];
    for (i, t) in q.tiles.iter().enumerate() {
        let len = 1i64 << t.level;
        let c = t.center.coords()[0];
        ensure(c >= 0 && c + len <= E, || format!("tile {i} at {c} leaves E"))?;
        ensure(4 * t.core.len() as i64 >= 3 * len, || format!("tile {i}: core {} of {len}", t.core.len()))?;
        for p in &t.core {
            let v = p.coords()[0];
            ensure((0..len).contains(&v), || format!("tile {i}: core point {v} outside T"))?;
            let at = (v + c) as usize;
            ensure(!cores[at], || format!("cores overlap at {at}"))?;
            cores[at] = true;
        }
        for v in c..c + len {
            union[v as usize] = true;
        }
    }
    let covered = union.iter().filter(|&&b| b).count();
    ensure(covered >= 3072, || format!("coverage {covered} < 3072"))?;
    ensure(covered == q.covered, || format!("reported coverage {} vs {covered}", q.covered))?;
    Ok(format!("{} tiles, coverage {covered} >= 3072, cores disjoint", q.tiles.len()))
}

// ---------------------------------------------------------- criteria 3 and 4

/// A relation with minimum left degree `a` and right capacity `a / 2`, so the
/// degree certificate gives `c >= 2`.
fn expansive_instance(rng: &mut ChaCha8Rng) -> (BipartiteRelation, Vec<BTreeSet<usize>>) {
    let left = rng.gen_range(100..=2000);
    let dmin = rng.gen_range(4..=8);
    let dmax = dmin + rng.gen_range(0..=2);
    let cap = dmin / 2;
    let degrees: Vec<usize> = (0..left).map(|_| rng.gen_range(dmin..=dmax)).collect();
    let total: usize = degrees.iter().sum();
    let right = total.div_ceil(cap) + dmax + rng.gen_range(0..=left / 4);
    let mut room = vec![cap; right];
    let mut open: Vec<usize> = (0..right).collect();
    let mut adj = vec![BTreeSet::new(); left];
    for (x, &d) in degrees.iter().enumerate() {
        while adj[x].len() < d {
            let i = rng.gen_range(0..open.len());
            let y = open[i];
            if adj[x].insert(y) {
                room[y] -= 1;
                if room[y] == 0 {
                    open.swap_remove(i);
                }
            }
        }
    }
    let lists = adj.iter().map(|s| s.iter().map(|&y| y as u32).collect()).collect();
    (BipartiteRelation::from_adjacency(right, lists).unwrap(), adj)
}

/// A valid matching by direct inspection: edges of the relation, injective.
fn valid_matching(g: &MatchingState, adj: &[BTreeSet<usize>]) -> Result<usize, String> {
    let mut used = BTreeSet::new();
    for (x, y) in g.pairs() {
        ensure(adj[x].contains(&y), || format!("pair ({x}, {y}) is not an edge"))?;
        ensure(used.insert(y), || format!("right point {y} matched twice"))?;
    }
    Ok(used.len())
}

fn c3_phase_bound(_: &mut Ctx) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_phases = 0;
    let mut left_total = 0;
    for inst in 0..100 {
        let (r, adj) = expansive_instance(&mut rng);
        let left = r.left_len();
        left_total += left;
        let cert = certify_expansivity(&r, inst).map_err(|e| e.to_string())?;
        ensure(cert.c >= 2, || format!("instance {inst}: certified c = {}", cert.c))?;
        let min_deg = adj.iter().map(|s| s.len()).min().unwrap();
        let mut right_deg = vec![0; r.right_len()];
        adj.iter().flatten().for_each(|&y| right_deg[y] += 1);
        let max_deg = *right_deg.iter().max().unwrap();
        ensure(min_deg >= 2 * max_deg, || format!("instance {inst}: degrees {min_deg} vs {max_deg}"))?;

        let mut g = MatchingState::empty(&r);
        let mut n = 0;
        let mut trace = Vec::new();
        while valid_matching(&g, &adj)? < left {
            n += 1;
            ensure(n <= 64, || format!("instance {inst}: no saturation after 64 phases"))?;
            g = eliminate_short_augmenting(&r, &g, n).0;
            let unmatched = left - valid_matching(&g, &adj)?;
            ensure((unmatched as u128) << n <= left as u128, || {
                format!("instance {inst} phase {n}: {unmatched} of {left} unmatched")
            })?;
            trace.push(unmatched);
        }
        let (_, transcript) = match_saturating(&r, &cert).map_err(|e| format!("instance {inst}: {e}"))?;
        let reported: Vec<usize> = transcript.phases.iter().map(|p| p.unmatched).collect();
        ensure(reported == trace, || format!("instance {inst}: transcript {reported:?} vs {trace:?}"))?;
        max_phases = max_phases.max(n);
    }
    Ok(format!(
        "100 instances, {left_total} left points, unmatched <= 2^-n |L| after every phase, at most {max_phases} phases"
    ))
}

/// Maximum matching size by dynamic programming over sets of used columns.
fn brute_matching(rows: &[u32], cols: usize) -> usize {
    let mut reach = vec![false; 1 << cols];
    reach[0] = true;
    for &m in rows {
        let prev = reach.clone();
        for (s, _) in prev.iter().enumerate().filter(|(_, &r)| r) {
            let mut free = m & !(s as u32);
            while free != 0 {
                let bit = free & free.wrapping_neg();
                reach[s | bit as usize] = true;
                free ^= bit;
            }
        }
    }
    (0..1usize << cols).filter(|&s| reach[s]).map(|s| s.count_ones() as usize).max().unwrap()
}

/// Every `rows × cols` 0/1 matrix whose rows and columns are both
/// lexicographically non-increasing (column 0 and row 0 most significant).
/// Each bit pattern is a row over the columns, column `j` at bit `cols-1-j`.
fn doubly_sorted(rows: usize, cols: usize, f: &mut impl FnMut(&[u32])) {
    fn go(rows: usize, cols: usize, acc: &mut Vec<u32>, ties: u32, f: &mut impl FnMut(&[u32])) {
        if acc.len() == rows {
            f(acc);
            return;
        }
        let top = acc.last().copied().unwrap_or((1u32 << cols) - 1);
        for m in (0..=top).rev() {
            let bit = |j: usize| (m >> (cols - 1 - j)) & 1;
            let mut next = ties;
            let mut ok = true;
            for j in 0..cols.saturating_sub(1) {
                if ties >> j & 1 == 1 {
                    match bit(j).cmp(&bit(j + 1)) {
                        std::cmp::Ordering::Less => {
                            ok = false;
                            break;
                        }
                        std::cmp::Ordering::Greater => next &= !(1 << j),
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if ok {
                acc.push(m);
                go(rows, cols, acc, next, f);
                acc.pop();
            }
        }
    }
    go(rows, cols, &mut Vec::with_capacity(rows), u32::MAX, f);
}

fn transpose(rows: &[u32], cols: usize) -> Vec<u32> {
    (0..cols)
        .map(|j| {
            rows.iter()
                .enumerate()
                .fold(0, |acc, (i, &m)| acc | (((m >> j) & 1) << i))
        })
        .collect()
}

fn relation_of(rows: &[u32], cols: usize) -> BipartiteRelation {
    let adj = rows
        .iter()
        .map(|&m| (0..cols as u32).filter(|&j| m >> j & 1 == 1).collect())
        .collect();
    BipartiteRelation::from_adjacency(cols, adj).unwrap()
}

/// Canonical form under row and column permutations, by brute force.
fn canonical(rows: &[u32], cols: usize) -> Vec<u32> {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, k - 1);
                out.push(q);
            }
        }
        out
    }
    perms(cols)
        .iter()
        .map(|p| {
            let mut r: Vec<u32> = rows
                .iter()
                .map(|&m| (0..cols).fold(0, |acc, j| acc | (((m >> j) & 1) << p[j])))
                .collect();
            r.sort_unstable();
            r
        })
        .min()
        .unwrap()
}

/// The doubly sorted matrices meet every permutation class, checked against
/// brute-force canonical forms on small sizes.
fn enumeration_is_complete() -> Result<(), String> {
    for rows in 1..=4 {
        for cols in rows..=5 {
            if rows * cols > 16 {
                continue;
            }
            let mut all = BTreeSet::new();
            for code in 0u64..1 << (rows * cols) {
                let m: Vec<u32> = (0..rows).map(|i| ((code >> (i * cols)) & ((1 << cols) - 1)) as u32).collect();
                all.insert(canonical(&m, cols));
            }
            let mut hit = BTreeSet::new();
            doubly_sorted(rows, cols, &mut |m| {
                hit.insert(canonical(m, cols));
            });
            ensure(hit == all, || format!("{rows}x{cols}: {} of {} classes", hit.len(), all.len()))?;
        }
    }
    Ok(())
}

fn c4_oracle(_: &mut Ctx) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for inst in 0..100 {
        let (r, _) = expansive_instance(&mut rng);
        let cert = certify_expansivity(&r, inst).map_err(|e| e.to_string())?;
        let (g, _) = match_saturating(&r, &cert).map_err(|e| format!("instance {inst}: {e}"))?;
        let oracle = oracle_max_matching(&r);
        ensure(g.len() == oracle, || format!("instance {inst}: phases {} vs oracle {oracle}", g.len()))?;
    }
    enumeration_is_complete()?;
    let mut graphs = 0u64;
    let mut mismatch = None;
    for total in 1..=12usize {
        for rows in 1..=total / 2 {
            let cols = total - rows;
            doubly_sorted(rows, cols, &mut |m| {
                graphs += 1;
                let want = brute_matching(m, cols);
                let t = transpose(m, cols);
                let got = (oracle_max_matching(&relation_of(m, cols)), oracle_max_matching(&relation_of(&t, rows)));
                if got != (want, want) && mismatch.is_none() {
                    mismatch = Some(format!("{rows}x{cols} {m:?}: oracle {got:?}, exhaustive {want}"));
                }
            });
        }
    }
    if let Some(m) = mismatch {
        return Err(m);
    }
    Ok(format!(
        "100 phase matchings equal the oracle; oracle equals exhaustive search on {graphs} class representatives \
         (both orientations) of every bipartite graph with at most 12 vertices"
    ))
}

// ---------------------------------------------------------------- criterion 5

/// An augmenting path whose length (matched edges on it) is below `limit`,
/// by exhaustive search over simple alternating paths.
fn short_path_exists(adj: &[Vec<usize>], mate_l: &[Option<usize>], mate_r: &[Option<usize>], limit: usize) -> bool {
    fn walk(
        x: usize,
        depth: usize,
        limit: usize,
        adj: &[Vec<usize>],
        mate_l: &[Option<usize>],
        mate_r: &[Option<usize>],
        seen: &mut Vec<bool>,
    ) -> bool {
        for &y in &adj[x] {
            if mate_l[x] == Some(y) {
                continue;
            }
            match mate_r[y] {
                None => return true,
                Some(x2) => {
                    if depth + 1 < limit && !seen[x2] {
                        seen[x2] = true;
                        let found = walk(x2, depth + 1, limit, adj, mate_l, mate_r, seen);
                        seen[x2] = false;
                        if found {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
    let mut seen = vec![false; adj.len()];
    (0..adj.len()).any(|x| {
        if mate_l[x].is_some() || limit == 0 {
            return false;
        }
        seen[x] = true;
        let found = walk(x, 0, limit, adj, mate_l, mate_r, &mut seen);
        seen[x] = false;
        found
    })
}

fn c5_elimination(_: &mut Ctx) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut changed_total = 0;
    let mut phases = [0usize; 7];
    for inst in 0..50 {
        let left = rng.gen_range(20..=80);
        let right = rng.gen_range(left / 2..=left + 20);
        let adj: Vec<Vec<usize>> = (0..left)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                let s: BTreeSet<usize> = (0..d).map(|_| rng.gen_range(0..right)).collect();
                s.into_iter().collect()
            })
            .collect();
        let lists = adj.iter().map(|v| v.iter().map(|&y| y as u32).collect()).collect();
        let r = BipartiteRelation::from_adjacency(right, lists).unwrap();
        // a random greedy starting matching
        let mut edges: Vec<(usize, usize)> = adj.iter().enumerate().flat_map(|(x, v)| v.iter().map(move |&y| (x, y))).collect();
        edges.shuffle(&mut rng);
        let keep = rng.gen_range(0..=edges.len() / 2);
        let (mut lused, mut rused) = (BTreeSet::new(), BTreeSet::new());
        let start: Vec<(usize, usize)> = edges[..keep]
            .iter()
            .filter(|&&(x, y)| lused.insert(x) && rused.insert(y))
            .copied()
            .collect();
        let g = MatchingState::from_pairs(&r, &start).map_err(|e| e.to_string())?;
        let n = rng.gen_range(1..=6);
        let (g2, rep) = eliminate_short_augmenting(&r, &g, n);
        phases[n] += 1;

        let sets: Vec<BTreeSet<usize>> = adj.iter().map(|v| v.iter().copied().collect()).collect();
        valid_matching(&g2, &sets).map_err(|e| format!("instance {inst}: {e}"))?;
        let before: Vec<Option<usize>> = (0..left).map(|x| g.get(x)).collect();
        let after: Vec<Option<usize>> = (0..left).map(|x| g2.get(x)).collect();
        let unmatched_before = before.iter().filter(|m| m.is_none()).count();
        ensure(before.iter().zip(&after).all(|(b, a)| b.is_none() || a.is_some()), || {
            format!("instance {inst}: a matched point became unmatched")
        })?;
        let changed = before.iter().zip(&after).filter(|(b, a)| b != a).count();
        ensure(changed <= n * unmatched_before, || {
            format!("instance {inst}: {changed} changed > {n} * {unmatched_before}")
        })?;
        ensure(rep.changed == changed && rep.unmatched_before == unmatched_before, || {
            format!("instance {inst}: report {rep:?} vs changed {changed}")
        })?;
        let mut mate_r = vec![None; right];
        for (x, m) in after.iter().enumerate() {
            if let Some(y) = m {
                mate_r[*y] = Some(x);
            }
        }
        ensure(!short_path_exists(&adj, &after, &mate_r, n), || {
            format!("instance {inst}: augmenting path of length < {n} survives")
        })?;
        changed_total += changed;
    }
    Ok(format!(
        "50 instances (n = 1..6: {:?}), {changed_total} changed points in total, no short path left",
        &phases[1..]
    ))
}

// ---------------------------------------------------------- criteria 6 and 7

const SIDE: usize = 64;

/// Occupancy of the 64×64 torus, indexed `x * 64 + y`.
#[derive(Clone, PartialEq, Eq)]
struct Grid(Vec<bool>);

impl Grid {
    fn empty() -> Grid {
        Grid(vec![false; SIDE * SIDE])
    }

    fn at(x: i64, y: i64) -> usize {
        x.rem_euclid(SIDE as i64) as usize * SIDE + y.rem_euclid(SIDE as i64) as usize
    }

    fn from_set(s: &PointSet) -> Grid {
        let mut g = Grid::empty();
        s.iter().for_each(|p| g.0[p] = true);
        g
    }

    /// `counts[p] = |self ∩ ([x, x+a) × [y, y+b))|` with `p = x * 64 + y`.
    fn rect_counts(&self, a: usize, b: usize) -> Vec<u32> {
        let w = 2 * SIDE + 1;
        let mut pre = vec![0u32; w * w];
        for i in 0..2 * SIDE {
            for j in 0..2 * SIDE {
                let v = self.0[(i % SIDE) * SIDE + j % SIDE] as u32;
                pre[(i + 1) * w + j + 1] = v + pre[i * w + j + 1] + pre[(i + 1) * w + j] - pre[i * w + j];
            }
        }
        let mut out = vec![0u32; SIDE * SIDE];
        for x in 0..SIDE {
            for y in 0..SIDE {
                out[x * SIDE + y] = pre[(x + a) * w + y + b] + pre[x * w + y] - pre[x * w + y + b] - pre[(x + a) * w + y];
            }
        }
        out
    }

    /// Lower density along rectangle windows: best window of the worst count.
    fn lower_density(&self, windows: &[(usize, usize)]) -> Rational {
        windows
            .iter()
            .map(|&(a, b)| Rational::ratio(*self.rect_counts(a, b).iter().min().unwrap() as usize, a * b))
            .max_by(|p, q| p.partial_cmp(q).unwrap())
            .unwrap()
    }

    fn shifted_union(&self, offsets: &[(i64, i64)]) -> Grid {
        let mut g = Grid::empty();
        for x in 0..SIDE as i64 {
            for y in 0..SIDE as i64 {
                if self.0[Grid::at(x, y)] {
                    for &(dx, dy) in offsets {
                        g.0[Grid::at(x + dx, y + dy)] = true;
                    }
                }
            }
        }
        g
    }
}

fn rect(a: i64, b: i64) -> Shape {
    Shape::from_coords((0..a).flat_map(|i| (0..b).map(move |j| [i, j])))
}

/// Nested rectangles `F_1 ⊂ .. ⊂ F_n`, consecutive areas in ratio 1.3 to 2,
/// the top one between 17 and 32 on a side.
fn nested_ladder(rng: &mut ChaCha8Rng, n: usize) -> Vec<(i64, i64)> {
    'retry: loop {
        let mut s = vec![(rng.gen_range(17..=32i64), rng.gen_range(17..=32i64))];
        while s.len() < n {
            let (a, b) = *s.last().unwrap();
            let next = (0..200).find_map(|_| {
                let (na, nb) = (rng.gen_range(1..=a), rng.gen_range(1..=b));
                let r = (a * b) as f64 / (na * nb) as f64;
                (1.3..=2.0).contains(&r).then_some((na, nb))
            });
            match next {
                Some(x) => s.push(x),
                None => continue 'retry,
            }
        }
        s.reverse();
        return s;
    }
}

struct BdenseRun {
    eps: Rational,
    sides: Vec<(i64, i64)>,
    atlas: TileAtlas,
}

fn cross() -> Vec<(i64, i64)> {
    vec![(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
}

fn bdense_runs(ctx: &mut Ctx) -> Result<&[BdenseRun], String> {
    if ctx.bdense_runs.is_none() {
        let z2 = GroupModel::Lattice { dim: 2 };
        let w = ActionWindow::torus(2, SIDE).unwrap();
        let mut runs = Vec::new();
        for (p, q) in [(1, 4), (1, 8)] {
            let eps = Rational::new(p, q);
            let n = ladder_length(&eps).map_err(|e| e.to_string())?;
            for seed in 0..25 {
                let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
                let sides = nested_ladder(&mut rng, n);
                let ladder: Vec<Shape> = sides.iter().map(|&(a, b)| rect(a, b)).collect();
                let atlas =
                    bdense(&w, &z2.generators(), &eps, &ladder, &BdenseOptions::default()).map_err(|e| e.to_string())?;
                runs.push(BdenseRun { eps: eps.clone(), sides, atlas });
            }
        }
        ctx.bdense_runs = Some(runs);
    }
    Ok(ctx.bdense_runs.as_deref().unwrap())
}

/// Union of the tiles at levels `>= level`, with a disjointness check.
fn tiles_from(run: &BdenseRun, level: usize) -> Result<Grid, String> {
    let mut g = Grid::empty();
    for e in run.atlas.entries.iter().filter(|e| e.level >= level) {
        let (cx, cy) = ((e.center / SIDE) as i64, (e.center % SIDE) as i64);
        for p in &e.shape {
            let c = p.coords();
            let at = Grid::at(cx + c[0], cy + c[1]);
            ensure(!g.0[at], || format!("tiles overlap at {at}"))?;
            g.0[at] = true;
        }
    }
    Ok(g)
}

/// `(1+δ)^{-1}(1 − (1 − ε(1+δ))^{n+1−i})`, recomputed here.
fn stage_bound(eps: &Rational, delta: &Rational, n: usize, i: usize) -> Rational {
    let one = Rational::one();
    let inv = (&one + delta).recip();
    let base = &one - &(eps * &(&one + delta));
    &inv * &(&one - &base.pow((n + 1 - i) as u32))
}

fn check_bdense_run(run: &BdenseRun) -> Result<(), String> {
    let (atlas, n) = (&run.atlas, run.sides.len());
    let keep = Rational::one() - run.eps.clone();
    for (i, e) in atlas.entries.iter().enumerate() {
        let (a, b) = run.sides[e.level - 1];
        for p in &e.shape {
            let c = p.coords();
            ensure((0..a).contains(&c[0]) && (0..b).contains(&c[1]), || format!("entry {i} leaves F_{}", e.level))?;
        }
        ensure(Rational::ratio(e.shape.len(), (a * b) as usize) > keep, || {
            format!("entry {i}: |F_c| = {} of {}", e.shape.len(), a * b)
        })?;
    }
    let (ta, tb) = run.sides[n - 1];
    let windows = [(ta as usize, tb as usize), (SIDE - 1, SIDE - 1)];
    let all = tiles_from(run, 1)?;
    ensure(all == Grid::from_set(&atlas.covered), || "covered set differs from the tiles".into())?;
    let density = all.lower_density(&windows);
    ensure(density > keep, || format!("covered density {density}"))?;
    for i in (1..=n).rev() {
        let d = tiles_from(run, i)?.lower_density(&windows);
        let bound = stage_bound(&run.eps, &atlas.delta, n, i);
        ensure(d >= bound, || format!("stage {i}: {d} < {bound}"))?;
        let rec = atlas.stages.iter().find(|s| s.level == i).ok_or(format!("no record for stage {i}"))?;
        ensure(rec.lower_density == d, || format!("stage {i}: reported {} vs {d}", rec.lower_density))?;
    }
    Ok(())
}

fn c6_bdense(ctx: &mut Ctx) -> Verdict {
    let runs = bdense_runs(ctx)?;
    let mut tiles = 0;
    for (i, run) in runs.iter().enumerate() {
        check_bdense_run(run).map_err(|e| format!("run {i} (eps {}, ladder {:?}): {e}", run.eps, run.sides))?;
        tiles += run.atlas.entries.len();
    }
    Ok(format!("{} runs (25 at eps 1/4, 25 at eps 1/8), {tiles} tiles, all four clauses hold", runs.len()))
}

/// First point where `|(KA △ A) ∩ Fx| < δ|A ∩ Fx|` fails, for the centered
/// box `F = [-31, 31]²` and `K` the unit cross.
fn star_witness(a: &Grid, delta: (i64, i64)) -> Option<usize> {
    let ka = a.shifted_union(&cross());
    let edge = Grid(ka.0.iter().zip(&a.0).map(|(&k, &s)| k != s).collect());
    let (bc, ac) = (edge.rect_counts(63, 63), a.rect_counts(63, 63));
    (0..SIDE * SIDE).find(|&p| {
        let at = Grid::at((p / SIDE) as i64 - 31, (p % SIDE) as i64 - 31);
        let (e, s) = (bc[at] as i64, ac[at] as i64);
        !(e == 0 && s == 0) && e * delta.1 >= delta.0 * s
    })
}

/// Independent evaluation of the packing bound with `U = [-15, 0]²`; `None`
/// when a precondition fails. Star invariance is only defined for nonempty
/// `A`.
fn pack_oracle(a: &Grid, b: &Grid, (ta, tb): (i64, i64), eps: (i64, i64), delta: (i64, i64)) -> Option<(Rational, Rational)> {
    let (ep, eq) = eps;
    let (dp, dq) = delta;
    if ep * (dq + dp) >= eq * dq || !a.0.contains(&true) || a.0.iter().zip(&b.0).any(|(&x, &y)| x && !y) {
        return None;
    }
    let t = (ta * tb) as i64;
    if b.rect_counts(ta as usize, tb as usize).iter().any(|&c| c as i64 * eq < ep * t) {
        return None;
    }
    let offsets: Vec<(i64, i64)> = (0..ta).flat_map(|i| (0..tb).map(move |j| (-i, -j))).collect();
    let tia = a.shifted_union(&offsets);
    let edge = Grid(tia.0.iter().zip(&a.0).map(|(&k, &s)| k != s).collect());
    let (ec, ac) = (edge.rect_counts(16, 16), a.rect_counts(16, 16));
    for p in 0..SIDE * SIDE {
        let at = Grid::at((p / SIDE) as i64 - 15, (p % SIDE) as i64 - 15);
        let (e, s) = (ec[at] as i64, ac[at] as i64);
        if !(e == 0 && s == 0) && e * dq >= dp * s {
            return None;
        }
    }
    let window = [((ta + 15) as usize, (tb + 15) as usize)];
    let (da, db) = (a.lower_density(&window), b.lower_density(&window));
    let grow = Rational::new(ep * (dq + dp), eq * dq);
    let rhs = &(&(Rational::one() - grow) * &da) + &Rational::new(ep, eq);
    Some((db, rhs))
}

fn c7_checkers(ctx: &mut Ctx) -> Verdict {
    let w = ActionWindow::torus(2, SIDE).unwrap();
    let z2 = GroupModel::Lattice { dim: 2 };
    let k = z2.generators();
    let f = z2.symmetric_folner_set(31).unwrap();
    let runs = bdense_runs(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut report = Vec::new();

    // star invariance, on the covered sets and on thinned copies of them
    let (mut star_hold, mut star_neg) = (0, 0);
    for (i, run) in runs.iter().enumerate() {
        let delta = [(1, 2), (1, 4), (1, 8)][i % 3];
        let mut cases = vec![(run.atlas.clone(), false)];
        let mut thin = run.atlas.clone();
        thin.covered = PointSet::from_indices(thin.covered.universe(), thin.covered.iter().filter(|p| (p / SIDE + p) % 2 == 0));
        cases.push((thin, true));
        for (atlas, negative) in cases {
            let want = star_witness(&Grid::from_set(&atlas.covered), delta);
            let d = Rational::new(delta.0, delta.1);
            let (_, got) = starinv_check(&w, &atlas, &k, &d, &run.eps, &f).map_err(|e| e.to_string())?;
            ensure(got.holds == want.is_none() && got.witness == want, || {
                format!("starinv run {i}: library {got:?}, reference {want:?}")
            })?;
            if negative {
                ensure(!got.holds, || format!("starinv run {i}: thinned set passed"))?;
                star_neg += 1;
            } else if got.holds {
                star_hold += 1;
            }
        }
    }
    report.push(format!("starinv agrees on {} sets ({star_hold} of 50 covered sets hold, {star_neg} negatives flagged)", 2 * runs.len()));

    // packing bound, stage by stage, plus two broken variants per run
    let (mut pack_ok, mut pack_neg) = (0, 0);
    let u = Shape::from_coords((-15..=0i64).flat_map(|i| (-15..=0i64).map(move |j| [i, j])));
    for (i, run) in runs.iter().enumerate() {
        let n = run.sides.len();
        let level = rng.gen_range(1..n);
        let a = tiles_from(run, level + 1)?;
        let b = tiles_from(run, level)?;
        let sides = run.sides[level - 1];
        let eps = (1, if run.eps == Rational::new(1, 4) { 4 } else { 8 });
        let delta = (1, 1);
        // B empty, and A and B swapped
        let mut cases = vec![(a.clone(), b.clone(), false), (b.clone(), Grid::empty(), true)];
        if a != b {
            cases.push((b.clone(), a.clone(), true));
        }
        for (sa, sb, negative) in cases {
            let to_set = |g: &Grid| PointSet::from_indices(SIDE * SIDE, (0..SIDE * SIDE).filter(|&p| g.0[p]));
            let got = pack_bound_check(
                &w,
                &to_set(&sa),
                &to_set(&sb),
                &rect(sides.0, sides.1),
                &run.eps,
                &Rational::new(delta.0, delta.1),
                &u,
            );
            let want = pack_oracle(&sa, &sb, sides, eps, delta);
            match (&got, &want) {
                (Err(_), None) => {}
                (Ok(pb), Some((lhs, rhs))) => {
                    ensure(pb.lhs == *lhs && pb.rhs == *rhs && pb.holds == (lhs >= rhs), || {
                        format!("pack run {i}: library {pb:?}, reference {lhs} >= {rhs}")
                    })?;
                    ensure(pb.holds, || format!("pack run {i}: bound fails with preconditions met"))?;
                    if !negative {
                        pack_ok += 1;
                    }
                }
                _ => return Err(format!("pack run {i} level {level}: library {got:?}, reference {want:?}")),
            }
            if negative {
                ensure(want.is_none(), || format!("pack run {i}: constructed negative meets the preconditions"))?;
                pack_neg += 1;
            }
        }
    }
    report.push(format!("pack bound agrees on 50 stages ({pack_ok} meet the preconditions and hold), {pack_neg} negatives rejected"));

    // invariance propagation to large subsets
    let mut claims = 0;
    for (i, run) in runs.iter().enumerate() {
        let sizable: Vec<_> = run.atlas.entries.iter().filter(|e| e.shape.len() >= 16).collect();
        let e = sizable[rng.gen_range(0..sizable.len())];
        let (a, b) = run.sides[e.level - 1];
        let big: Vec<Vec<i64>> = rect(a, b).iter().map(|p| p.coords().to_vec()).collect();
        let mut sub: Vec<Vec<i64>> = e.shape.iter().map(|p| p.coords().to_vec()).collect();
        if sub.len() == big.len() {
            sub.shuffle(&mut rng);
            sub.truncate(big.len() - rng.gen_range(1..=big.len() / 8));
        }
        let loss = Rational::ratio(big.len() - sub.len(), big.len());
        let claim = propagation_claim(&big, &sub, &loss, false)?;
        let (bound, defect) = claim.ok_or(format!("propagation run {i}: hypotheses fail on a tile"))?;
        ensure(Rational::ratio(defect, sub.len()) < bound, || {
            format!("propagation run {i}: defect {defect}/{} not below {bound}", sub.len())
        })?;
        claims += 1;
    }
    // negatives: a checkerboard half of a box claimed as a 90% subset
    let mut prop_neg = 0;
    for side in [8, 12, 16, 20, 24] {
        let big: Vec<Vec<i64>> = rect(side, side).iter().map(|p| p.coords().to_vec()).collect();
        let half: Vec<Vec<i64>> = big.iter().filter(|p| (p[0] + p[1]) % 2 == 0).cloned().collect();
        let eps = Rational::new(1, 10);
        ensure(propagation_claim(&big, &half, &eps, false)?.is_none(), || format!("checkerboard {side} was claimed"))?;
        let forced = propagation_claim(&big, &half, &eps, true)?.unwrap();
        ensure(Rational::ratio(forced.1, half.len()) >= forced.0, || {
            format!("checkerboard {side} satisfies the bound anyway")
        })?;
        prop_neg += 1;
    }
    ensure(propagate_invariance(&k, &Rational::new(1, 5), &Rational::one()).is_err(), || "eps = 1 accepted".into())?;
    report.push(format!(
        "propagation sound on {claims} tile subsets, {prop_neg} checkerboard negatives and eps = 1 rejected"
    ));
    Ok(report.join("; "))
}

/// The propagation bound for `sub ⊆ big` at `ε`, with `δ` just above the
/// exact defect of `big`, together with the true defect of `sub`. `None` when
/// `|sub| >= (1 − ε)|big|` fails, unless `force` is set.
fn propagation_claim(
    big: &[Vec<i64>],
    sub: &[Vec<i64>],
    eps: &Rational,
    force: bool,
) -> Result<Option<(Rational, usize)>, String> {
    let m = support::Model::Lattice(2);
    let k: Vec<Vec<i64>> = cross().iter().map(|&(x, y)| vec![x, y]).collect();
    let set: BTreeSet<&Vec<i64>> = big.iter().collect();
    ensure(sub.iter().all(|p| set.contains(p)), || "subset leaves the shape".into())?;
    if !force && Rational::ratio(sub.len(), big.len()) < Rational::one() - eps.clone() {
        return Ok(None);
    }
    let delta = Rational::ratio(m.defect(&k, big) + 1, big.len());
    let bound = propagate_invariance(&Shape::from_coords(k.iter()), &delta, eps).map_err(|e| e.to_string())?;
    let by_hand = &(&(&Rational::from_integer(k.len() as i64 + 1) * eps) + &delta) / &(Rational::one() - eps.clone());
    ensure(bound == by_hand, || format!("propagation bound {bound} vs {by_hand}"))?;
    Ok(Some((bound, m.defect(&k, sub))))
}

// ---------------------------------------------------------------- criterion 8

/// Simple `d`-regular graph on `n` (even) vertices: a union of `d` random
/// perfect matchings, with clashing pairs repaired by random swaps.
fn regular_graph(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<(usize, usize)> {
    let mut adj = vec![BTreeSet::new(); n];
    for _ in 0..d {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = perm.chunks(2).map(|c| (c[0], c[1])).collect();
        loop {
            let bad: Vec<usize> = (0..pairs.len()).filter(|&i| adj[pairs[i].0].contains(&pairs[i].1)).collect();
            if bad.is_empty() {
                break;
            }
            for i in bad {
                let j = rng.gen_range(0..pairs.len());
                let ((a, b), (c, e)) = (pairs[i], pairs[j]);
                if i != j && !adj[a].contains(&c) && !adj[b].contains(&e) {
                    pairs[i] = (a, c);
                    pairs[j] = (b, e);
                }
            }
        }
        for (a, b) in pairs {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj.iter()
        .enumerate()
        .flat_map(|(a, s)| s.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
        .collect()
}

fn c8_coloring(_: &mut Ctx) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = (0, 0);
    for inst in 0..100 {
        let d = 1 + inst % 8;
        let edges = regular_graph(&mut rng, 1000, d);
        let mut deg = vec![0; 1000];
        edges.iter().for_each(|&(a, b)| {
            deg[a] += 1;
            deg[b] += 1;
        });
        ensure(deg.iter().all(|&x| x == d), || format!("instance {inst} is not {d}-regular"))?;
        let g = LocalGraph::from_edges(1000, &edges).map_err(|e| e.to_string())?;
        let c = greedy_coloring_canonical(&g);
        let used: BTreeSet<_> = c.colors.iter().collect();
        ensure(used.len() <= d + 1 && c.colors.iter().all(|&x| (x as usize) <= d), || {
            format!("instance {inst}: {} colors for degree {d}", used.len())
        })?;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| c.colors[a] == c.colors[b]) {
            return Err(format!("instance {inst}: edge ({a}, {b}) is monochromatic"));
        }
        if used.len() > worst.0 {
            worst = (used.len(), d);
        }
    }
    Ok(format!(
        "100 graphs on 1000 vertices, d = 1..8, all proper, at most d+1 colors (most used: {} at d = {})",
        worst.0, worst.1
    ))
}

// ---------------------------------------------------------------- criterion 9

fn c9_determinism(ctx: &mut Ctx) -> Verdict {
    let dir = ctx.dir.path();
    let mut compared = 0;
    for spec in TILE_RUNS {
        let (model, _, _, delta) = spec;
        if !artifact(dir, 1, model, delta, "json").exists() {
            tile(dir, 1, spec)?;
        }
        tile(dir, 2, spec)?;
        let exts: &[&str] = if model == "z2" { &["json", "svg"] } else { &["json"] };
        for ext in exts {
            let one = std::fs::read(artifact(dir, 1, model, delta, ext)).map_err(|e| e.to_string())?;
            let two = std::fs::read(artifact(dir, 2, model, delta, ext)).map_err(|e| e.to_string())?;
            ensure(one == two, || format!("{model} {delta} {ext} differs between runs"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} artifacts byte-identical across two runs"))
}
