//! Benchmark harness: run solvers over generated suites and emit one CSV
//! row per (instance, solver).

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::calibration::node_law_k;
use crate::error::{Error, Result};
use crate::exact::{solve_pack, solve_pierce, SolveConfig};
use crate::instance::{gen_instance, GenSpec, Layout, ShapeFamily};
use crate::ptas::{ptas_pack, ptas_pierce, PtasConfig};

pub const CSV_HEADER: [&str; 14] = [
    "label", "n", "d", "family", "solver", "value", "nodes", "depth", "wall_ms", "config",
    "law_exponent", "law_k", "law_ok", "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverKind {
    Pack,
    Pierce,
    PtasPack,
    PtasPierce,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Pack => "pack",
            SolverKind::Pierce => "pierce",
            SolverKind::PtasPack => "ptas-pack",
            SolverKind::PtasPierce => "ptas-pierce",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SolverKind::Pack,
            SolverKind::Pierce,
            SolverKind::PtasPack,
            SolverKind::PtasPierce,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown solver '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSuite {
    pub name: String,
    pub instances: Vec<GenSpec>,
    pub solvers: Vec<SolverKind>,
    pub solve: SolveConfig,
    pub ptas: PtasConfig,
}

impl BenchSuite {
    pub fn empty(name: &str) -> Self {
        BenchSuite {
            name: name.to_string(),
            instances: Vec::new(),
            solvers: vec![SolverKind::Pack, SolverKind::Pierce],
            solve: SolveConfig::default(),
            ptas: PtasConfig::default(),
        }
    }

    /// Planar disk grids with k = 2..=5, four objects per cell.
    pub fn grid() -> Self {
        let mut suite = BenchSuite::empty("grid");
        suite.solve.base_threshold = 2;
        suite.instances = (2..=5)
            .map(|k| grid_spec(k, 4, 1))
            .collect();
        suite
    }

    /// Planar disk grids with p in {4, 9, 16, 25} and up to 200 objects;
    /// a low base threshold keeps the recursion in play.
    pub fn node_law() -> Self {
        let mut suite = BenchSuite::empty("node-law");
        suite.solve.base_threshold = 2;
        for k in 2..=5 {
            for per_cell in [1, 2, 4, 8] {
                for seed in 1..=3 {
                    suite.instances.push(grid_spec(k, per_cell, seed));
                }
            }
        }
        suite
    }

    /// Random disks, planar boxes and boxes in space, every solver.
    pub fn random() -> Self {
        let mut suite = BenchSuite::empty("random");
        suite.solvers = vec![
            SolverKind::Pack,
            SolverKind::Pierce,
            SolverKind::PtasPack,
            SolverKind::PtasPierce,
        ];
        suite.ptas = PtasConfig::with_epsilon(0.5);
        for (family, dim) in [(ShapeFamily::Balls, 2), (ShapeFamily::Boxes, 2), (ShapeFamily::Boxes, 3)] {
            for n in [20, 40, 60] {
                suite.instances.push(GenSpec {
                    family,
                    dim,
                    layout: Layout::Random { n, density: 0.8 },
                    seed: n as u64,
                });
            }
        }
        suite
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "grid" => Ok(BenchSuite::grid()),
            "node-law" => Ok(BenchSuite::node_law()),
            "random" => Ok(BenchSuite::random()),
            "empty" => Ok(BenchSuite::empty("empty")),
            _ => Err(Error::InvalidConfig(format!(
                "unknown suite '{name}' (grid, node-law, random, empty)"
            ))),
        }
    }

    /// Short hash of the solver settings, so rows from different settings
    /// are never confused.
    pub fn config_digest(&self) -> String {
        let text = format!("{:?}|{:?}", self.solve, self.ptas);
        hex::encode(&Sha256::digest(text.as_bytes())[..8])
    }
}

fn grid_spec(k: usize, per_cell: usize, seed: u64) -> GenSpec {
    GenSpec {
        family: ShapeFamily::Balls,
        dim: 2,
        layout: Layout::Grid {
            k,
            per_cell,
            spacing: 6.0,
        },
        seed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    pub n: usize,
    pub d: usize,
    pub family: String,
    pub solver: SolverKind,
    pub value: usize,
    pub nodes: u64,
    pub depth: usize,
    pub wall_ms: f64,
    pub config: String,
    /// `ln(nodes) / (p^((d-1)/d) ln n)` with p the value found.
    pub law_exponent: Option<f64>,
    /// The frozen constant the exponent is compared with, exact solvers only.
    pub law_k: Option<f64>,
    pub status: String,
}

impl BenchRecord {
    pub fn law_ok(&self) -> Option<bool> {
        Some(self.law_exponent? <= self.law_k?)
    }

    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        vec![
            self.label.clone(),
            self.n.to_string(),
            self.d.to_string(),
            self.family.clone(),
            self.solver.to_string(),
            self.value.to_string(),
            self.nodes.to_string(),
            self.depth.to_string(),
            format!("{:.3}", self.wall_ms),
            self.config.clone(),
            opt(self.law_exponent),
            opt(self.law_k),
            self.law_ok().map_or(String::new(), |b| b.to_string()),
            self.status.clone(),
        ]
    }
}

/// Exponent of the node-count law; `None` when it is not defined.
pub fn law_exponent(nodes: u64, n: usize, d: usize, p: usize) -> Option<f64> {
    if n < 2 || p == 0 || nodes == 0 {
        return None;
    }
    let pw = (p as f64).powf((d as f64 - 1.0) / d as f64);
    Some((nodes as f64).ln() / (pw * (n as f64).ln()))
}

pub fn run_bench(suite: &BenchSuite) -> Result<Vec<BenchRecord>> {
    suite.solve.validate()?;
    suite.ptas.validate()?;
    let digest = suite.config_digest();
    let jobs: Vec<(&GenSpec, SolverKind)> = suite
        .instances
        .iter()
        .flat_map(|spec| suite.solvers.iter().map(move |&s| (spec, s)))
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(spec, solver)| run_one(spec, solver, suite, &digest))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (&a.label, a.solver).cmp(&(&b.label, b.solver)));
    Ok(rows)
}

fn run_one(spec: &GenSpec, solver: SolverKind, suite: &BenchSuite, digest: &str) -> Result<BenchRecord> {
    let inst = gen_instance(spec)?;
    let mut row = BenchRecord {
        label: spec.label(),
        n: inst.len(),
        d: inst.dim,
        family: spec.family.name().to_string(),
        solver,
        value: 0,
        nodes: 0,
        depth: 0,
        wall_ms: 0.0,
        config: digest.to_string(),
        law_exponent: None,
        law_k: None,
        status: "ok".to_string(),
    };
    let outcome = match solver {
        SolverKind::Pack => solve_pack(&inst, &suite.solve)
            .map(|s| (s.value, s.nodes, s.depth, s.wall_time, s.optimal)),
        SolverKind::Pierce => solve_pierce(&inst, &suite.solve)
            .map(|s| (s.value, s.nodes, s.depth, s.wall_time, s.optimal)),
        SolverKind::PtasPack => ptas_pack(&inst, &suite.ptas).map(|s| {
            let s = s.solution;
            (s.value, s.nodes, s.depth, s.wall_time, true)
        }),
        SolverKind::PtasPierce => ptas_pierce(&inst, &suite.ptas).map(|s| {
            let s = s.solution;
            (s.value, s.nodes, s.depth, s.wall_time, true)
        }),
    };
    match outcome {
        Ok((value, nodes, depth, wall, complete)) => {
            row.value = value;
            row.nodes = nodes;
            row.depth = depth;
            row.wall_ms = wall.as_secs_f64() * 1e3;
            if !complete {
                row.status = "aborted".to_string();
            }
            if matches!(solver, SolverKind::Pack | SolverKind::Pierce) {
                row.law_exponent = law_exponent(nodes, row.n, row.d, value);
                row.law_k = node_law_k(solver);
            }
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    Ok(row)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.fields()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
