//! Approximation schemes: separate while the measure is large, throw away
//! (packing) or greedily pierce (piercing) the boundary, and solve the small
//! leaves exactly.

use std::sync::atomic::AtomicU64;

use crate::clock::Stopwatch;
use crate::collection::Collection;
use crate::error::{Error, Result};
use crate::exact::{Found, PackSolution, PackSolver, PierceSolution, PierceSolver, SolveConfig};
use crate::geometry::Point;
use crate::instance::Instance;
use crate::measure::greedy_pierce_in;
use crate::piercing::CandidateSet;
use crate::search::Halt;
use crate::separator::separate_in;

#[derive(Debug, Clone, PartialEq)]
pub struct PtasConfig {
    pub epsilon: f64,
    /// Leaves are solved exactly once the estimate is at most
    /// `ceil((c_stop / epsilon)^d)`.
    pub c_stop: f64,
    /// Configuration of the exact solver used at the leaves; its own epsilon
    /// also drives the separator.
    pub solve: SolveConfig,
}

impl Default for PtasConfig {
    fn default() -> Self {
        PtasConfig {
            epsilon: 0.25,
            c_stop: 3.0,
            solve: SolveConfig::default(),
        }
    }
}

impl PtasConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        PtasConfig {
            epsilon,
            ..PtasConfig::default()
        }
    }

    pub fn stop_threshold(&self, dim: usize) -> usize {
        let t = (self.c_stop / self.epsilon).powi(dim as i32).ceil();
        (t.min(usize::MAX as f64) as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ptas epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.c_stop.is_finite() && self.c_stop > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "c_stop must be positive, got {}",
                self.c_stop
            )));
        }
        self.solve.validate()
    }
}

/// What one separation level gave up.
#[derive(Debug, Clone, PartialEq)]
pub struct Discard {
    pub level: usize,
    /// Objects in the subproblem that was separated.
    pub subset_len: usize,
    /// Greedy packing estimate of that subproblem.
    pub estimate: usize,
    /// Ids of boundary objects, ascending.
    pub boundary_ids: Vec<usize>,
    /// Greedy packing estimate of the boundary.
    pub boundary_estimate: usize,
    /// Points spent on the boundary; zero for packing.
    pub points_spent: usize,
}

impl Discard {
    pub fn loss_fraction(&self) -> f64 {
        if self.estimate == 0 {
            0.0
        } else {
            self.boundary_estimate as f64 / self.estimate as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtasPack {
    pub solution: PackSolution,
    pub discards: Vec<Discard>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtasPierce {
    pub solution: PierceSolution,
    pub discards: Vec<Discard>,
}

struct Level<T> {
    found: Found<T>,
    discards: Vec<Discard>,
    exact: bool,
}

pub fn ptas_pack(inst: &Instance, cfg: &PtasConfig) -> Result<PtasPack> {
    cfg.validate()?;
    let start = Stopwatch::start();
    let coll = Collection::new(&inst.objects)?;
    let counter = AtomicU64::new(0);
    let run = PackRun {
        exact: PackSolver {
            coll: &coll,
            cfg: &cfg.solve,
            sep: cfg.solve.separator(),
            counter: &counter,
        },
        threshold: cfg.stop_threshold(inst.dim),
    };
    let level = run.solve((0..coll.len()).collect(), 0);
    let mut witness = coll.ids(&level.found.items);
    witness.sort_unstable();
    Ok(PtasPack {
        solution: PackSolution {
            value: witness.len(),
            witness,
            nodes: level.found.nodes,
            depth: level.found.depth,
            fallbacks: level.found.fallbacks,
            optimal: level.exact && level.discards.is_empty(),
            wall_time: start.elapsed(),
        },
        discards: level.discards,
    })
}

pub fn ptas_pierce(inst: &Instance, cfg: &PtasConfig) -> Result<PtasPierce> {
    cfg.validate()?;
    let start = Stopwatch::start();
    let coll = Collection::new(&inst.objects)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    CandidateSet::build(&coll, &all)?;
    let counter = AtomicU64::new(0);
    let run = PierceRun {
        exact: PierceSolver {
            coll: &coll,
            cfg: &cfg.solve,
            sep: cfg.solve.separator(),
            counter: &counter,
        },
        threshold: cfg.stop_threshold(inst.dim),
    };
    let level = run.solve(all, 0);
    Ok(PtasPierce {
        solution: PierceSolution {
            value: level.found.items.len(),
            witness: level.found.items,
            nodes: level.found.nodes,
            depth: level.found.depth,
            fallbacks: level.found.fallbacks,
            optimal: level.exact && level.discards.is_empty(),
            wall_time: start.elapsed(),
        },
        discards: level.discards,
    })
}

fn join<A: Send, B: Send>(
    parallel: bool,
    a: impl FnOnce() -> A + Send,
    b: impl FnOnce() -> B + Send,
) -> (A, B) {
    if parallel {
        rayon::join(a, b)
    } else {
        (a(), b())
    }
}

fn merge<T>(own: Vec<T>, a: Level<T>, b: Level<T>, discard: Discard) -> Level<T> {
    let mut items = own;
    items.extend(a.found.items);
    items.extend(b.found.items);
    let mut discards = vec![discard];
    discards.extend(a.discards);
    discards.extend(b.discards);
    Level {
        found: Found {
            items,
            nodes: 1 + a.found.nodes + b.found.nodes,
            depth: 1 + a.found.depth.max(b.found.depth),
            fallbacks: a.found.fallbacks + b.found.fallbacks,
        },
        discards,
        exact: a.exact && b.exact,
    }
}

struct PackRun<'s, 'a> {
    exact: PackSolver<'s, 'a>,
    threshold: usize,
}

impl PackRun<'_, '_> {
    fn solve(&self, subset: Vec<usize>, level: usize) -> Level<usize> {
        let coll = self.exact.coll;
        let estimate = coll.greedy_pack(&subset).len();
        let split = if estimate > self.threshold && subset.len() >= 2 {
            separate_in(coll, &subset, &self.exact.sep)
                .ok()
                .filter(|s| !s.degenerate && s.inside.len() < subset.len() && s.outside.len() < subset.len())
        } else {
            None
        };
        let Some(split) = split else {
            return self.leaf(subset);
        };
        let discard = Discard {
            level,
            subset_len: subset.len(),
            estimate,
            boundary_ids: sorted(coll.ids(&split.boundary)),
            boundary_estimate: split.mu_boundary.len(),
            points_spent: 0,
        };
        let (a, b) = join(
            self.exact.cfg.parallel_branches,
            || self.solve(split.inside.clone(), level + 1),
            || self.solve(split.outside.clone(), level + 1),
        );
        merge(Vec::new(), a, b, discard)
    }

    fn leaf(&self, subset: Vec<usize>) -> Level<usize> {
        match self.exact.solve(subset.clone()) {
            Ok(found) => Level {
                found,
                discards: Vec::new(),
                exact: true,
            },
            Err(Halt::Aborted) | Err(Halt::Overflow) => Level {
                found: Found {
                    items: self.exact.coll.greedy_pack(&subset),
                    nodes: 0,
                    depth: 1,
                    fallbacks: 0,
                },
                discards: Vec::new(),
                exact: false,
            },
        }
    }
}

struct PierceRun<'s, 'a> {
    exact: PierceSolver<'s, 'a>,
    threshold: usize,
}

impl PierceRun<'_, '_> {
    fn solve(&self, subset: Vec<usize>, level: usize) -> Level<Point> {
        let coll = self.exact.coll;
        let estimate = coll.greedy_pack(&subset).len();
        let split = if estimate > self.threshold && subset.len() >= 2 {
            separate_in(coll, &subset, &self.exact.sep)
                .ok()
                .filter(|s| !s.degenerate && s.inside.len() < subset.len() && s.outside.len() < subset.len())
        } else {
            None
        };
        let Some(split) = split else {
            return self.leaf(subset);
        };
        let points = greedy_pierce_in(coll, &split.boundary).expect("family checked at the root");
        let unpierced = |side: &[usize]| -> Vec<usize> {
            side.iter()
                .copied()
                .filter(|&p| !points.iter().any(|pt| coll.object(p).contains_point(pt)))
                .collect()
        };
        let (inside, outside) = (unpierced(&split.inside), unpierced(&split.outside));
        let discard = Discard {
            level,
            subset_len: subset.len(),
            estimate,
            boundary_ids: sorted(coll.ids(&split.boundary)),
            boundary_estimate: split.mu_boundary.len(),
            points_spent: points.len(),
        };
        let (a, b) = join(
            self.exact.cfg.parallel_branches,
            || self.solve(inside, level + 1),
            || self.solve(outside, level + 1),
        );
        merge(points, a, b, discard)
    }

    fn leaf(&self, subset: Vec<usize>) -> Level<Point> {
        match self.exact.solve(subset.clone()) {
            Ok(found) => Level {
                found,
                discards: Vec::new(),
                exact: true,
            },
            Err(Halt::Aborted) | Err(Halt::Overflow) => Level {
                found: Found {
                    items: greedy_pierce_in(self.exact.coll, &subset).expect("family checked at the root"),
                    nodes: 0,
                    depth: 1,
                    fallbacks: 0,
                },
                discards: Vec::new(),
                exact: false,
            },
        }
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
