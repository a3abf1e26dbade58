use serde::{Deserialize, Serialize};

use super::{ActionError, PointSet};
use crate::group_model::{GroupModel, GroupPoint, Shape};

/// Largest lamplighter carrier side; the carrier has `N * 2^N` points.
pub const MAX_LAMPLIGHTER_SIDE: usize = 20;

/// The finite set a model acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Carrier {
    /// `(Z/N)^dim` with translations.
    Torus { dim: usize, side: usize },
    /// Left cosets of `{(aN, bN, cN^2)}` in `H3(Z)`, represented by
    /// `0 <= x, y < N`, `0 <= z < N^2`.
    Heisenberg { side: usize },
    /// The quotient `Z2 wr (Z/N)`: a lamp mask on `N` sites and a cursor.
    Lamplighter { side: usize },
}

/// Precomputed data for acting by one fixed group element.
#[derive(Clone, Copy, Debug)]
pub enum Translator {
    Torus { offsets: [usize; 3] },
    Heisenberg { a: i64, b: i64, c: i64 },
    Lamplighter { mask: u64, shift: usize },
}

/// A finite carrier with an action of a group model, free on all elements
/// whose coordinates lie strictly inside the freeness radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionWindow {
    model: GroupModel,
    carrier: Carrier,
}

impl ActionWindow {
    /// The natural window for `model` with side `side`.
    pub fn new(model: GroupModel, side: usize) -> Result<Self, ActionError> {
        if side < 2 {
            return Err(ActionError::InvalidCarrier(format!("side {side} too small")));
        }
        let carrier = match model {
            GroupModel::Lattice { dim } => {
                if !(1..=3).contains(&dim) {
                    return Err(ActionError::InvalidCarrier(format!("dimension {dim}")));
                }
                Carrier::Torus { dim, side }
            }
            GroupModel::Heisenberg => {
                if side > 1 << 12 {
                    return Err(ActionError::InvalidCarrier(format!("side {side} too large")));
                }
                Carrier::Heisenberg { side }
            }
            GroupModel::Lamplighter => {
                if side > MAX_LAMPLIGHTER_SIDE {
                    return Err(ActionError::InvalidCarrier(format!("side {side} too large")));
                }
                Carrier::Lamplighter { side }
            }
        };
        let w = ActionWindow { model, carrier };
        if w.size() > 1 << 28 {
            return Err(ActionError::InvalidCarrier(format!("{} points", w.size())));
        }
        Ok(w)
    }

    pub fn torus(dim: usize, side: usize) -> Result<Self, ActionError> {
        ActionWindow::new(GroupModel::Lattice { dim }, side)
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn side(&self) -> usize {
        match self.carrier {
            Carrier::Torus { side, .. }
            | Carrier::Heisenberg { side }
            | Carrier::Lamplighter { side } => side,
        }
    }

    pub fn size(&self) -> usize {
        match self.carrier {
            Carrier::Torus { dim, side } => side.pow(dim as u32),
            Carrier::Heisenberg { side } => side.pow(4),
            Carrier::Lamplighter { side } => side << side,
        }
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.size())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.size())
    }

    /// Coordinates of a carrier point.
    pub fn coords(&self, x: usize) -> Vec<i64> {
        match self.carrier {
            Carrier::Torus { dim, side } => {
                let mut c = vec![0i64; dim];
                let mut r = x;
                for i in (0..dim).rev() {
                    c[i] = (r % side) as i64;
                    r /= side;
                }
                c
            }
            Carrier::Heisenberg { side } => {
                let m = side * side;
                vec![(x / (side * m)) as i64, (x / m % side) as i64, (x % m) as i64]
            }
            Carrier::Lamplighter { side } => {
                let cursor = x >> side;
                let mask = x & ((1 << side) - 1);
                let mut c = vec![cursor as i64];
                c.extend((0..side).filter(|i| mask >> i & 1 == 1).map(|i| i as i64));
                c
            }
        }
    }

    /// Inverse of [`ActionWindow::coords`]; coordinates must be reduced.
    pub fn index(&self, coords: &[i64]) -> Result<usize, ActionError> {
        let bad = || ActionError::InvalidCarrierPoint(coords.to_vec());
        let within = |c: i64, m: usize| c >= 0 && (c as usize) < m;
        match self.carrier {
            Carrier::Torus { dim, side } => {
                if coords.len() != dim || !coords.iter().all(|&c| within(c, side)) {
                    return Err(bad());
                }
                Ok(coords.iter().fold(0, |acc, &c| acc * side + c as usize))
            }
            Carrier::Heisenberg { side } => {
                let m = side * side;
                if coords.len() != 3
                    || !within(coords[0], side)
                    || !within(coords[1], side)
                    || !within(coords[2], m)
                {
                    return Err(bad());
                }
                Ok((coords[0] as usize * side + coords[1] as usize) * m + coords[2] as usize)
            }
            Carrier::Lamplighter { side } => {
                if coords.is_empty()
                    || !coords.iter().all(|&c| within(c, side))
                    || !coords[1..].windows(2).all(|w| w[0] < w[1])
                {
                    return Err(bad());
                }
                let mask = coords[1..].iter().fold(0usize, |m, &l| m | 1 << l);
                Ok((coords[0] as usize) << side | mask)
            }
        }
    }

    /// Whether every coordinate of `g` lies strictly inside the radius on
    /// which the action is free.
    pub fn within_radius(&self, g: &GroupPoint) -> bool {
        let c = g.coords();
        match self.carrier {
            Carrier::Torus { side, .. } => c.iter().all(|&v| 2 * v.unsigned_abs() < side as u64),
            Carrier::Heisenberg { side } => {
                2 * c[0].unsigned_abs() < side as u64
                    && 2 * c[1].unsigned_abs() < side as u64
                    && 2 * c[2].unsigned_abs() < (side * side) as u64
            }
            Carrier::Lamplighter { side } => c.iter().all(|&v| 2 * v.unsigned_abs() < side as u64),
        }
    }

    /// Rejects shapes reaching outside the freeness radius.
    pub fn check_shape(&self, name: &str, shape: &Shape) -> Result<(), ActionError> {
        for g in shape {
            self.model.validate(g).map_err(|_| ActionError::InvalidElement(g.coords().to_vec()))?;
            if !self.within_radius(g) {
                return Err(ActionError::OutsideRadius {
                    shape: name.to_string(),
                    point: g.coords().to_vec(),
                    side: self.side(),
                });
            }
        }
        Ok(())
    }

    pub fn translator(&self, g: &GroupPoint) -> Translator {
        let c = g.coords();
        match self.carrier {
            Carrier::Torus { dim, side } => {
                let mut offsets = [0usize; 3];
                for i in 0..dim {
                    offsets[i] = c[i].rem_euclid(side as i64) as usize;
                }
                Translator::Torus { offsets }
            }
            Carrier::Heisenberg { .. } => Translator::Heisenberg { a: c[0], b: c[1], c: c[2] },
            Carrier::Lamplighter { side } => {
                let mask = c[1..]
                    .iter()
                    .fold(0u64, |m, &l| m ^ 1 << l.rem_euclid(side as i64));
                Translator::Lamplighter {
                    mask,
                    shift: c[0].rem_euclid(side as i64) as usize,
                }
            }
        }
    }

    pub fn translators(&self, shape: &Shape) -> Vec<Translator> {
        shape.iter().map(|g| self.translator(g)).collect()
    }

    /// `g · x` for a prepared translator.
    #[inline]
    pub fn apply(&self, t: &Translator, x: usize) -> usize {
        match (self.carrier, t) {
            (Carrier::Torus { dim, side }, Translator::Torus { offsets }) => {
                let mut r = x;
                let mut out = 0;
                let mut scale = 1;
                for off in offsets[..dim].iter().rev() {
                    let v = r % side + off;
                    r /= side;
                    out += if v >= side { v - side } else { v } * scale;
                    scale *= side;
                }
                out
            }
            (Carrier::Heisenberg { side }, &Translator::Heisenberg { a, b, c }) => {
                let n = side as i64;
                let m = n * n;
                let xi = x as i64;
                let (x0, y0, z0) = (xi / (n * m), xi / m % n, xi % m);
                // (a,b,c)(x0,y0,z0) then reduce to the coset representative
                let (px, py, pz) = (a + x0, b + y0, c + z0 + a * y0);
                let rx = px.rem_euclid(n);
                let qy = py.div_euclid(n);
                let ry = py - qy * n;
                let rz = (pz - rx * qy * n).rem_euclid(m);
                ((rx * n + ry) * m + rz) as usize
            }
            (Carrier::Lamplighter { side }, &Translator::Lamplighter { mask, shift }) => {
                let full = (1u64 << side) - 1;
                let m = (x & full as usize) as u64;
                let cursor = x >> side;
                let rotated = if shift == 0 {
                    m
                } else {
                    ((m << shift) | (m >> (side - shift))) & full
                };
                let c = (cursor + shift) % side;
                (c << side) | (rotated ^ mask) as usize
            }
            _ => unreachable!("translator built for another carrier"),
        }
    }

    /// Calls `f(t · x)` for every translator in order. Decodes `x` once.
    #[inline]
    pub fn for_each_image(&self, ts: &[Translator], x: usize, mut f: impl FnMut(usize)) {
        match self.carrier {
            Carrier::Torus { dim, side } => {
                let mut xc = [0usize; 3];
                let mut r = x;
                for i in (0..dim).rev() {
                    xc[i] = r % side;
                    r /= side;
                }
                for t in ts {
                    let Translator::Torus { offsets } = t else {
                        unreachable!("translator built for another carrier")
                    };
                    let mut out = 0;
                    for i in 0..dim {
                        let v = xc[i] + offsets[i];
                        out = out * side + if v >= side { v - side } else { v };
                    }
                    f(out);
                }
            }
            _ => {
                for t in ts {
                    f(self.apply(t, x));
                }
            }
        }
    }

    /// `g · x`.
    pub fn act(&self, g: &GroupPoint, x: usize) -> usize {
        self.apply(&self.translator(g), x)
    }

    /// `F x`.
    pub fn translate_set(&self, f: &Shape, x: usize) -> PointSet {
        let mut out = self.empty_set();
        self.for_each_image(&self.translators(f), x, |p| out.insert(p));
        out
    }

    /// `F A`.
    pub fn translate_points(&self, f: &Shape, a: &PointSet) -> PointSet {
        let ts = self.translators(f);
        let mut out = self.empty_set();
        for x in a.iter() {
            self.for_each_image(&ts, x, |p| out.insert(p));
        }
        out
    }

    /// `counts[x] = |A ∩ F x|` for every carrier point `x`.
    pub fn window_counts(&self, a: &PointSet, f: &Shape) -> Vec<u32> {
        if let Carrier::Torus { dim, side } = self.carrier {
            if let Some(bounds) = box_bounds(f, dim, side) {
                return torus_box_counts(a, &bounds, dim, side);
            }
        }
        let inv: Vec<Translator> = f
            .iter()
            .map(|g| self.translator(&self.model.invert(g)))
            .collect();
        let mut counts = vec![0u32; self.size()];
        for y in a.iter() {
            self.for_each_image(&inv, y, |p| counts[p] += 1);
        }
        counts
    }

    /// `|F x| = |F|`.
    pub fn is_injective_at(&self, f: &Shape, x: usize) -> bool {
        self.translate_set(f, x).len() == f.len()
    }
}

/// Per-axis `[lo, hi]` when `f` is exactly a box no wider than the torus.
fn box_bounds(f: &Shape, dim: usize, side: usize) -> Option<Vec<(i64, i64)>> {
    let first = f.points().first()?;
    let mut bounds: Vec<(i64, i64)> = first.coords().iter().map(|&c| (c, c)).collect();
    for p in f {
        for (b, &c) in bounds.iter_mut().zip(p.coords()) {
            b.0 = b.0.min(c);
            b.1 = b.1.max(c);
        }
    }
    let mut volume = 1usize;
    for &(lo, hi) in &bounds {
        let len = (hi - lo + 1) as usize;
        if len > side {
            return None;
        }
        volume *= len;
    }
    (bounds.len() == dim && volume == f.len()).then_some(bounds)
}

/// Box window counts by one cyclic sliding sum per axis.
fn torus_box_counts(a: &PointSet, bounds: &[(i64, i64)], dim: usize, side: usize) -> Vec<u32> {
    let size = a.universe();
    let mut cur = vec![0u32; size];
    for x in a.iter() {
        cur[x] = 1;
    }
    let mut next = vec![0u32; size];
    let n = side as i64;
    for (axis, &(lo, hi)) in bounds.iter().enumerate() {
        let stride = side.pow((dim - 1 - axis) as u32);
        let at = |j: i64| j.rem_euclid(n) as usize * stride;
        for block in 0..size / (side * stride) {
            for inner in 0..stride {
                let base = block * side * stride + inner;
                let mut sum: u32 = (lo..=hi).map(|o| cur[base + at(o)]).sum();
                for j in 0..n {
                    next[base + j as usize * stride] = sum;
                    sum += cur[base + at(j + hi + 1)];
                    sum -= cur[base + at(j + lo)];
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}
