//! Reference arithmetic for the integration tests. Nothing here calls into
//! the library: group products, coset reduction and counts are recomputed
//! from the definitions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub type Pt = Vec<i64>;

pub fn folner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_folner"))
        .args(args)
        .output()
        .expect("spawn folner")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Lattice(usize),
    Heis,
}

impl Model {
    pub fn parse(name: &str) -> Model {
        match name {
            "z" | "z1" => Model::Lattice(1),
            "z2" => Model::Lattice(2),
            "z3" => Model::Lattice(3),
            "heis" => Model::Heis,
            other => panic!("no reference model for {other}"),
        }
    }

    pub fn mul(&self, g: &[i64], h: &[i64]) -> Pt {
        match self {
            Model::Lattice(_) => g.iter().zip(h).map(|(a, b)| a + b).collect(),
            Model::Heis => vec![g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]],
        }
    }

    /// Representative of the coset `g Λ` with `Λ = (N Z)^d`, or for the
    /// Heisenberg group the subgroup generated by `(N,0,0)`, `(0,N,0)` and
    /// `(0,0,N²)`, normalized to `0 <= x, y < N`, `0 <= z < N²`.
    pub fn reduce(&self, n: i64, g: &[i64]) -> Pt {
        match self {
            Model::Lattice(_) => g.iter().map(|v| v.rem_euclid(n)).collect(),
            Model::Heis => {
                // g (0, bN, 0) = (x, y + bN, z + x b N); pick b = -floor(y / N)
                let b = -g[1].div_euclid(n);
                vec![g[0].rem_euclid(n), g[1] + b * n, (g[2] + g[0] * b * n).rem_euclid(n * n)]
            }
        }
    }

    pub fn carrier_size(&self, n: usize) -> usize {
        match self {
            Model::Lattice(d) => n.pow(*d as u32),
            Model::Heis => n.pow(4),
        }
    }

    /// `|K F △ F|` computed in the group itself.
    pub fn defect(&self, k: &[Pt], f: &[Pt]) -> usize {
        let f: BTreeSet<Pt> = f.iter().cloned().collect();
        let kf: BTreeSet<Pt> = k.iter().flat_map(|a| f.iter().map(|b| self.mul(a, b))).collect();
        kf.symmetric_difference(&f).count()
    }
}

/// `"p/q"` or `"p"` as a pair with positive denominator.
pub fn ratio(s: &str) -> (i64, i64) {
    match s.split_once('/') {
        Some((p, q)) => (p.trim().parse().unwrap(), q.trim().parse().unwrap()),
        None => (s.trim().parse().unwrap(), 1),
    }
}

fn points(v: &Value) -> Vec<Pt> {
    v.as_array()
        .expect("point list")
        .iter()
        .map(|p| p.as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect())
        .collect()
}

/// The parts of a tiling artifact the reference checks need.
pub struct TilingDoc {
    pub model: Model,
    pub n: usize,
    pub k: Vec<Pt>,
    pub delta: (i64, i64),
    pub shapes: BTreeMap<u64, Vec<Pt>>,
    pub centers: Vec<(u64, Pt)>,
}

impl TilingDoc {
    pub fn load(path: &Path) -> TilingDoc {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        TilingDoc::from_value(&v)
    }

    pub fn from_value(v: &Value) -> TilingDoc {
        let shapes = v["shapes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| (s["id"].as_u64().unwrap(), points(&s["elements"])))
            .collect();
        let centers = v["centers"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let at = c["at"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
                (c["shape"].as_u64().unwrap(), at)
            })
            .collect();
        TilingDoc {
            model: Model::parse(v["model"].as_str().unwrap()),
            n: v["N"].as_u64().unwrap() as usize,
            k: points(&v["K"]),
            delta: ratio(v["delta"].as_str().unwrap()),
            shapes,
            centers,
        }
    }

    /// Carrier point → number of tiles covering it.
    pub fn multiplicity(&self) -> HashMap<Pt, usize> {
        let mut seen = HashMap::new();
        for (id, c) in &self.centers {
            for g in &self.shapes[id] {
                let p = self.model.reduce(self.n as i64, &self.model.mul(g, c));
                *seen.entry(p).or_insert(0) += 1;
            }
        }
        seen
    }

    /// `Ok(points)` when every carrier point is covered exactly once.
    pub fn exact_cover(&self) -> Result<usize, String> {
        let seen = self.multiplicity();
        if let Some((p, m)) = seen.iter().find(|(_, &m)| m != 1) {
            return Err(format!("point {p:?} covered {m} times"));
        }
        let size = self.model.carrier_size(self.n);
        if seen.len() != size {
            return Err(format!("{} of {size} points covered", seen.len()));
        }
        Ok(size)
    }

    /// Shape ids whose defect is not below `δ|F|`.
    pub fn loose_shapes(&self) -> Vec<u64> {
        let (p, q) = self.delta;
        self.shapes
            .iter()
            .filter(|(_, f)| {
                let d = self.model.defect(&self.k, f) as i64;
                d * q >= p * f.len() as i64
            })
            .map(|(&id, _)| id)
            .collect()
    }
}
