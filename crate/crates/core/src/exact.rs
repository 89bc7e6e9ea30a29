//! Exact packing and piercing numbers by recursive separation.
//!
//! A subproblem whose greedy estimate is at most `base_threshold` is solved
//! by bounded search. Otherwise a separator box splits it into inside,
//! outside and boundary objects; inside and outside objects never meet, so
//!
//! * `Pack = max over independent I in boundary of
//!   |I| + Pack(inside - N[I]) + Pack(outside - N[I])`, and
//! * `Pierce = min over point sets P piercing the boundary of
//!   |P| + Pierce(inside - hit(P)) + Pierce(outside - hit(P))`,
//!
//! where `N[I]` is the closed neighborhood of `I` and `hit(P)` the objects
//! containing a point of `P`. When the separator is unbalanced the step falls
//! back to branching on a pivot object.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use fixedbitset::FixedBitSet;

use crate::clock::Stopwatch;
use crate::collection::Collection;
use crate::error::{Error, Result};
use crate::geometry::{FatObject, Point};
use crate::instance::Instance;
use crate::measure::greedy_pierce_with;
use crate::piercing::CandidateSet;
use crate::search::{CoverSearch, Halt, Meter, PackSearch};
use crate::separator::{separate_in, SeparatorConfig, Split};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Subproblems whose estimate is at most this are solved by direct search.
    pub base_threshold: usize,
    /// Separator slack, in (0, 1/2].
    pub epsilon: f64,
    /// A separator leaving more than this fraction of the measure on one side
    /// triggers the pivot fallback.
    pub balance_cap: f64,
    /// Search nodes allowed before the solver gives up.
    pub node_cap: u64,
    pub parallel_branches: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            base_threshold: 12,
            epsilon: 0.25,
            balance_cap: 0.8,
            node_cap: 100_000_000,
            parallel_branches: false,
        }
    }
}

impl SolveConfig {
    pub fn separator(&self) -> SeparatorConfig {
        SeparatorConfig {
            epsilon: self.epsilon,
            balance_cap: self.balance_cap,
            ..SeparatorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_cap == 0 {
            return Err(Error::InvalidConfig("node_cap must be >= 1".into()));
        }
        self.separator().validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackSolution {
    pub value: usize,
    /// Ids of a pairwise-disjoint family, ascending.
    pub witness: Vec<usize>,
    pub nodes: u64,
    pub depth: usize,
    /// Steps that fell back to pivot branching.
    pub fallbacks: u64,
    /// False when the node cap was hit; the witness is then only a lower bound.
    pub optimal: bool,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PierceSolution {
    pub value: usize,
    pub witness: Vec<Point>,
    pub nodes: u64,
    pub depth: usize,
    pub fallbacks: u64,
    /// False when the node cap was hit; the witness is then only an upper bound.
    pub optimal: bool,
    pub wall_time: Duration,
}

/// Search statistics accumulated bottom-up so they do not depend on the
/// order branches complete in.
#[derive(Debug, Clone)]
pub(crate) struct Found<T> {
    pub items: Vec<T>,
    pub nodes: u64,
    pub depth: usize,
    pub fallbacks: u64,
}

impl<T> Default for Found<T> {
    fn default() -> Self {
        Found {
            items: Vec::new(),
            nodes: 0,
            depth: 0,
            fallbacks: 0,
        }
    }
}

impl<T> Found<T> {
    fn leaf(items: Vec<T>, nodes: u64) -> Self {
        Found {
            items,
            nodes,
            depth: 1,
            fallbacks: 0,
        }
    }
}

pub fn solve_pack(inst: &Instance, cfg: &SolveConfig) -> Result<PackSolution> {
    cfg.validate()?;
    let start = Stopwatch::start();
    let coll = Collection::new(&inst.objects)?;
    let counter = AtomicU64::new(0);
    let solver = PackSolver {
        coll: &coll,
        cfg,
        sep: cfg.separator(),
        counter: &counter,
    };
    let all: Vec<usize> = (0..coll.len()).collect();
    Ok(match solver.solve(all.clone()) {
        Ok(found) => {
            let mut witness = coll.ids(&found.items);
            witness.sort_unstable();
            PackSolution {
                value: witness.len(),
                witness,
                nodes: found.nodes,
                depth: found.depth,
                fallbacks: found.fallbacks,
                optimal: true,
                wall_time: start.elapsed(),
            }
        }
        Err(_) => {
            let mut witness = coll.ids(&coll.greedy_pack(&all));
            witness.sort_unstable();
            PackSolution {
                value: witness.len(),
                witness,
                nodes: counter.load(Ordering::Relaxed),
                depth: 0,
                fallbacks: 0,
                optimal: false,
                wall_time: start.elapsed(),
            }
        }
    })
}

pub fn solve_pierce(inst: &Instance, cfg: &SolveConfig) -> Result<PierceSolution> {
    cfg.validate()?;
    let start = Stopwatch::start();
    let coll = Collection::new(&inst.objects)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    // surfaces unsupported families before any search starts
    let root_cands = CandidateSet::build(&coll, &all)?;
    let counter = AtomicU64::new(0);
    let solver = PierceSolver {
        coll: &coll,
        cfg,
        sep: cfg.separator(),
        counter: &counter,
    };
    Ok(match solver.solve(all.clone()) {
        Ok(found) => PierceSolution {
            value: found.items.len(),
            witness: found.items,
            nodes: found.nodes,
            depth: found.depth,
            fallbacks: found.fallbacks,
            optimal: true,
            wall_time: start.elapsed(),
        },
        Err(Halt::Aborted) | Err(Halt::Overflow) => {
            let points: Vec<Point> = greedy_pierce_with(&coll, &root_cands, coll.to_set(&all))
                .into_iter()
                .map(|c| root_cands.points[c].clone())
                .collect();
            PierceSolution {
                value: points.len(),
                witness: points,
                nodes: counter.load(Ordering::Relaxed),
                depth: 0,
                fallbacks: 0,
                optimal: false,
                wall_time: start.elapsed(),
            }
        }
    })
}

/// Every independent subset of `boundary` with at most `cap` members, each
/// exactly once, starting with the empty set. Yields ids.
pub fn enumerate_boundary_independent_sets(
    boundary: &[FatObject],
    cap: usize,
) -> Result<impl Iterator<Item = Vec<usize>> + '_> {
    let coll = Collection::new(boundary)?;
    let order: Vec<usize> = (0..boundary.len()).collect();
    let sets: Vec<Vec<usize>> = IndependentSets::new(&coll, order, cap).collect();
    Ok(sets.into_iter().map(move |s| s.iter().map(|&p| boundary[p].id).collect()))
}

/// Depth-first enumeration that only extends a set by later, non-adjacent
/// members of `order`.
pub(crate) struct IndependentSets<'c, 'a> {
    coll: &'c Collection<'a>,
    order: Vec<usize>,
    cap: usize,
    chosen: Vec<usize>,
    next: usize,
    started: bool,
}

impl<'c, 'a> IndependentSets<'c, 'a> {
    pub fn new(coll: &'c Collection<'a>, order: Vec<usize>, cap: usize) -> Self {
        IndependentSets {
            coll,
            order,
            cap,
            chosen: Vec::new(),
            next: 0,
            started: false,
        }
    }

    fn compatible(&self, i: usize) -> bool {
        let p = self.order[i];
        self.chosen
            .iter()
            .all(|&j| !self.coll.adjacent(self.order[j], p))
    }
}

impl Iterator for IndependentSets<'_, '_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(Vec::new());
        }
        loop {
            if self.chosen.len() < self.cap {
                if let Some(i) = (self.next..self.order.len()).find(|&i| self.compatible(i)) {
                    self.chosen.push(i);
                    self.next = i + 1;
                    return Some(self.chosen.iter().map(|&j| self.order[j]).collect());
                }
            }
            let j = self.chosen.pop()?;
            self.next = j + 1;
        }
    }
}

/// Closed neighborhood of `ids` in the instance: every object meeting one of
/// them, the objects themselves included. Ascending ids.
pub fn neighborhood(inst: &Instance, ids: &[usize]) -> Result<Vec<usize>> {
    let coll = Collection::new(&inst.objects)?;
    let set = coll.closed_neighborhood(ids);
    Ok(coll.ids(&set.ones().collect::<Vec<_>>()))
}

/// One branch of a pivot step: `gain` is added to the value of the
/// remaining subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotBranch {
    pub gain: usize,
    /// Pierce point spent by this branch, if any.
    pub point: Option<Point>,
    pub remaining: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotStep {
    pub pivot: usize,
    pub branches: Vec<PivotBranch>,
}

/// Packing fallback: with `o` of maximum degree,
/// `Pack = max(Pack(C - o), 1 + Pack(C - N[o]))`.
pub fn branch_on_pivot_pack(inst: &Instance) -> Result<PivotStep> {
    let coll = Collection::new(&inst.objects)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let pivot = pack_pivot(&coll, &all).ok_or_else(|| Error::InvalidConfig("empty instance".into()))?;
    let (without, with) = pack_pivot_children(&coll, &all, pivot);
    Ok(PivotStep {
        pivot: coll.object(pivot).id,
        branches: vec![
            PivotBranch {
                gain: 1,
                point: None,
                remaining: coll.ids(&with),
            },
            PivotBranch {
                gain: 0,
                point: None,
                remaining: coll.ids(&without),
            },
        ],
    })
}

/// Piercing fallback: the smallest object `o` must hold some point, so
/// branch over the candidate points inside it.
pub fn branch_on_pivot_pierce(inst: &Instance) -> Result<PivotStep> {
    let coll = Collection::new(&inst.objects)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let cands = CandidateSet::build(&coll, &all)?;
    let live = coll.to_set(&all);
    let pivot = coll
        .smallest_in(&live)
        .ok_or_else(|| Error::InvalidConfig("empty instance".into()))?;
    let branches = cands
        .branches(pivot, &live)
        .into_iter()
        .map(|c| {
            let mut rest = live.clone();
            rest.difference_with(&cands.coverage[c]);
            PivotBranch {
                gain: 1,
                point: Some(cands.points[c].clone()),
                remaining: coll.ids(&rest.ones().collect::<Vec<_>>()),
            }
        })
        .collect();
    Ok(PivotStep {
        pivot: coll.object(pivot).id,
        branches,
    })
}

fn pack_pivot(coll: &Collection<'_>, subset: &[usize]) -> Option<usize> {
    let set = coll.to_set(subset);
    subset
        .iter()
        .copied()
        .max_by(|&a, &b| {
            coll.degree_in(a, &set)
                .cmp(&coll.degree_in(b, &set))
                .then(coll.rank(b).cmp(&coll.rank(a)))
        })
}

fn pack_pivot_children(
    coll: &Collection<'_>,
    subset: &[usize],
    pivot: usize,
) -> (Vec<usize>, Vec<usize>) {
    let without: Vec<usize> = subset.iter().copied().filter(|&p| p != pivot).collect();
    let blocked = coll.closed_neighborhood(&[pivot]);
    let with: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&p| !blocked.contains(p))
        .collect();
    (without, with)
}

fn minus(subset: &[usize], removed: &FixedBitSet) -> Vec<usize> {
    subset
        .iter()
        .copied()
        .filter(|&p| !removed.contains(p))
        .collect()
}

fn split_is_usable(split: &Split, n: usize, cap: f64) -> bool {
    !split.degenerate && split.is_balanced(cap) && split.boundary.len() < n
        && split.inside.len() < n
        && split.outside.len() < n
}

pub(crate) struct PackSolver<'s, 'a> {
    pub coll: &'s Collection<'a>,
    pub cfg: &'s SolveConfig,
    pub sep: SeparatorConfig,
    pub counter: &'s AtomicU64,
}

impl PackSolver<'_, '_> {
    fn tick(&self) -> std::result::Result<(), Halt> {
        if self.counter.fetch_add(1, Ordering::Relaxed) + 1 > self.cfg.node_cap {
            Err(Halt::Aborted)
        } else {
            Ok(())
        }
    }

    pub fn solve(&self, subset: Vec<usize>) -> std::result::Result<Found<usize>, Halt> {
        self.tick()?;
        if subset.is_empty() {
            return Ok(Found::leaf(Vec::new(), 1));
        }
        let greedy = self.coll.greedy_pack(&subset);
        if greedy.len() <= self.cfg.base_threshold {
            let mut search = PackSearch::new(
                self.coll,
                Meter::new(Some((self.counter, self.cfg.node_cap))),
            );
            match search.solve(&self.coll.to_set(&subset), self.cfg.base_threshold) {
                Ok(items) => return Ok(Found::leaf(items, 1 + search.meter.nodes)),
                Err(Halt::Aborted) => return Err(Halt::Aborted),
                Err(Halt::Overflow) => {}
            }
        }
        let split = if subset.len() >= 2 {
            separate_in(self.coll, &subset, &self.sep).ok()
        } else {
            None
        };
        match split {
            Some(split) if split_is_usable(&split, subset.len(), self.cfg.balance_cap) => {
                self.separator_step(&split)
            }
            _ => self.pivot_step(&subset),
        }
    }

    fn separator_step(&self, split: &Split) -> std::result::Result<Found<usize>, Halt> {
        let mut order = split.boundary.clone();
        self.coll.sort_by_rank(&mut order);
        let children = IndependentSets::new(self.coll, order, usize::MAX).map(|set| {
            let blocked = self.coll.closed_neighborhood(&set);
            let inside = minus(&split.inside, &blocked);
            let outside = minus(&split.outside, &blocked);
            let bound = set.len() + self.upper(&inside) + self.upper(&outside);
            (bound, (set, inside, outside))
        });
        best_of(children, Goal::Max, |(set, inside, outside)| {
            let (a, b) = if self.cfg.parallel_branches {
                rayon::join(|| self.solve(inside), || self.solve(outside))
            } else {
                (self.solve(inside), self.solve(outside))
            };
            Ok(glue(set, a?, b?))
        })
    }

    fn pivot_step(&self, subset: &[usize]) -> std::result::Result<Found<usize>, Halt> {
        let pivot = pack_pivot(self.coll, subset).expect("non-empty subset");
        let (without, with) = pack_pivot_children(self.coll, subset, pivot);
        let children = [
            (1 + self.upper(&with), (vec![pivot], with)),
            (self.upper(&without), (Vec::new(), without)),
        ];
        let mut out = best_of(children.into_iter(), Goal::Max, |(own, rest)| {
            let f = self.solve(rest)?;
            Ok(glue(own, f, Found::default()))
        })?;
        out.fallbacks += 1;
        Ok(out)
    }

    fn upper(&self, subset: &[usize]) -> usize {
        self.coll.clique_cover_bound(&self.coll.to_set(subset))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Max,
    Min,
}

/// Evaluates children in order and keeps the first optimum. A child is
/// skipped when its optimistic `bound` cannot strictly improve on the best
/// found so far. Evaluation is sequential so the skipped set, and with it
/// the node count, is deterministic.
fn best_of<T, C>(
    children: impl Iterator<Item = (usize, C)>,
    goal: Goal,
    mut eval: impl FnMut(C) -> std::result::Result<Found<T>, Halt>,
) -> std::result::Result<Found<T>, Halt> {
    let mut nodes = 1;
    let mut depth = 0;
    let mut fallbacks = 0;
    let mut best: Option<Found<T>> = None;
    for (bound, child) in children {
        if let Some(b) = &best {
            let hopeless = match goal {
                Goal::Max => bound <= b.items.len(),
                Goal::Min => bound >= b.items.len(),
            };
            if hopeless {
                continue;
            }
        }
        let f = eval(child)?;
        nodes += f.nodes;
        depth = depth.max(f.depth);
        fallbacks += f.fallbacks;
        let better = best.as_ref().is_none_or(|b| match goal {
            Goal::Max => f.items.len() > b.items.len(),
            Goal::Min => f.items.len() < b.items.len(),
        });
        if better {
            best = Some(f);
        }
    }
    let mut best = best.expect("the first child is never skipped");
    best.nodes = nodes;
    best.depth = depth + 1;
    best.fallbacks = fallbacks;
    Ok(best)
}

fn glue<T>(own: Vec<T>, a: Found<T>, b: Found<T>) -> Found<T> {
    let mut items = own;
    items.extend(a.items);
    items.extend(b.items);
    Found {
        items,
        nodes: a.nodes + b.nodes,
        depth: a.depth.max(b.depth),
        fallbacks: a.fallbacks + b.fallbacks,
    }
}

pub(crate) struct PierceSolver<'s, 'a> {
    pub coll: &'s Collection<'a>,
    pub cfg: &'s SolveConfig,
    pub sep: SeparatorConfig,
    pub counter: &'s AtomicU64,
}

impl PierceSolver<'_, '_> {
    fn tick(&self) -> std::result::Result<(), Halt> {
        if self.counter.fetch_add(1, Ordering::Relaxed) + 1 > self.cfg.node_cap {
            Err(Halt::Aborted)
        } else {
            Ok(())
        }
    }

    pub fn solve(&self, subset: Vec<usize>) -> std::result::Result<Found<Point>, Halt> {
        self.tick()?;
        if subset.is_empty() {
            return Ok(Found::leaf(Vec::new(), 1));
        }
        // candidates of the whole subproblem: a boundary point may also pierce
        // inside or outside objects
        let cands = CandidateSet::build(self.coll, &subset).expect("family checked at the root");
        let live = self.coll.to_set(&subset);
        let greedy = greedy_pierce_with(self.coll, &cands, live.clone()).len();
        if greedy <= self.cfg.base_threshold {
            let mut search = CoverSearch::new(
                self.coll,
                &cands,
                Meter::new(Some((self.counter, self.cfg.node_cap))),
            );
            let chosen = search.solve(&live, greedy)?;
            let points = chosen.into_iter().map(|c| cands.points[c].clone()).collect();
            return Ok(Found::leaf(points, 1 + search.meter.nodes));
        }
        let split = if subset.len() >= 2 {
            separate_in(self.coll, &subset, &self.sep).ok()
        } else {
            None
        };
        match split {
            Some(split) if split_is_usable(&split, subset.len(), self.cfg.balance_cap) => {
                self.separator_step(&split, &cands, &live)
            }
            _ => self.pivot_step(&cands, &live, &subset),
        }
    }

    fn separator_step(
        &self,
        split: &Split,
        cands: &CandidateSet,
        live: &FixedBitSet,
    ) -> std::result::Result<Found<Point>, Halt> {
        let covers = BoundaryCovers::new(self.coll, cands, live, &split.boundary).collect_all();
        let children = covers.into_iter().map(|cover| {
            let mut hit = self.coll.empty_set();
            for &c in &cover {
                hit.union_with(&cands.coverage[c]);
            }
            let inside = minus(&split.inside, &hit);
            let outside = minus(&split.outside, &hit);
            let bound = cover.len() + self.lower(&inside) + self.lower(&outside);
            (bound, (cover, inside, outside))
        });
        best_of(children, Goal::Min, |(cover, inside, outside)| {
            let (a, b) = if self.cfg.parallel_branches {
                rayon::join(|| self.solve(inside), || self.solve(outside))
            } else {
                (self.solve(inside), self.solve(outside))
            };
            let own = cover.iter().map(|&c| cands.points[c].clone()).collect();
            Ok(glue(own, a?, b?))
        })
    }

    fn pivot_step(
        &self,
        cands: &CandidateSet,
        live: &FixedBitSet,
        subset: &[usize],
    ) -> std::result::Result<Found<Point>, Halt> {
        let pivot = self.coll.smallest_in(live).expect("non-empty subset");
        let children = cands.branches(pivot, live).into_iter().map(|c| {
            let rest = minus(subset, &cands.coverage[c]);
            (1 + self.lower(&rest), (c, rest))
        });
        let mut out = best_of(children, Goal::Min, |(c, rest)| {
            let f = self.solve(rest)?;
            Ok(glue(vec![cands.points[c].clone()], f, Found::default()))
        })?;
        out.fallbacks += 1;
        Ok(out)
    }

    /// Pairwise-disjoint objects need distinct points.
    fn lower(&self, subset: &[usize]) -> usize {
        self.coll.greedy_pack(subset).len()
    }
}

/// Sets of candidate points piercing every boundary object. Branches on the
/// smallest unpierced boundary object; a sibling's point is forbidden in
/// later siblings so each set appears once.
struct BoundaryCovers<'c, 'a> {
    coll: &'c Collection<'a>,
    cands: &'c CandidateSet,
    live: &'c FixedBitSet,
    out: Vec<Vec<usize>>,
}

impl<'c, 'a> BoundaryCovers<'c, 'a> {
    fn new(
        coll: &'c Collection<'a>,
        cands: &'c CandidateSet,
        live: &'c FixedBitSet,
        boundary: &[usize],
    ) -> Self {
        let mut this = BoundaryCovers {
            coll,
            cands,
            live,
            out: Vec::new(),
        };
        let open = coll.to_set(boundary);
        let mut forbidden = vec![false; cands.points.len()];
        this.extend(open, &mut forbidden, &mut Vec::new());
        this
    }

    fn collect_all(self) -> Vec<Vec<usize>> {
        self.out
    }

    fn extend(&mut self, open: FixedBitSet, forbidden: &mut Vec<bool>, chosen: &mut Vec<usize>) {
        let Some(o) = self.coll.smallest_in(&open) else {
            self.out.push(chosen.clone());
            return;
        };
        let allowed: Vec<usize> = self.cands.by_object[o]
            .iter()
            .copied()
            .filter(|&c| !forbidden[c])
            .collect();
        // drop points whose reach is contained in an allowed sibling's
        let reach: Vec<FixedBitSet> = allowed
            .iter()
            .map(|&c| {
                let mut s = self.cands.coverage[c].clone();
                s.intersect_with(self.live);
                s
            })
            .collect();
        let keep: Vec<usize> = (0..allowed.len())
            .filter(|&i| {
                !(0..allowed.len()).any(|j| {
                    j != i && reach[i].is_subset(&reach[j]) && (reach[i] != reach[j] || j < i)
                })
            })
            .map(|i| allowed[i])
            .collect();
        let mut newly = Vec::new();
        for c in keep {
            let mut rest = open.clone();
            rest.difference_with(&self.cands.coverage[c]);
            chosen.push(c);
            self.extend(rest, forbidden, chosen);
            chosen.pop();
            forbidden[c] = true;
            newly.push(c);
        }
        for c in newly {
            forbidden[c] = false;
        }
    }
}
