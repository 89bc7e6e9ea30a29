//! Packing and piercing measures: cheap greedy estimates, and exact values
//! when the optimum is small.
//!
//! Greedy packing visits objects smallest first (ties by id) and keeps each
//! one disjoint from everything kept so far. The result is a maximal
//! independent set, hence a lower bound on the packing number. Greedy
//! piercing repeatedly takes the smallest unpierced object and spends
//! candidate points inside it until it is pierced, giving a feasible upper
//! bound on the piercing number.

use fixedbitset::FixedBitSet;

use crate::collection::Collection;
use crate::error::Result;
use crate::geometry::{FatObject, Point};
use crate::piercing::CandidateSet;
use crate::search::{CoverSearch, Halt, Meter, PackSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    /// Feasible packing, so a lower bound on the optimum.
    ApproxLower,
    /// Feasible piercing, so an upper bound on the optimum.
    ApproxUpper,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Objects(Vec<usize>),
    Points(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureEstimate {
    pub value: usize,
    pub kind: EstimateKind,
    pub witness: Witness,
}

/// Result of an exact evaluation with a cap on the optimum.
#[derive(Debug, Clone, PartialEq)]
pub enum SmallOutcome {
    Exact(MeasureEstimate),
    /// The optimum is larger than the cap.
    Overflow,
}

impl SmallOutcome {
    pub fn value(&self) -> Option<usize> {
        match self {
            SmallOutcome::Exact(m) => Some(m.value),
            SmallOutcome::Overflow => None,
        }
    }
}

pub fn greedy_pack(objs: &[FatObject]) -> Result<MeasureEstimate> {
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let chosen = coll.greedy_pack(&all);
    Ok(MeasureEstimate {
        value: chosen.len(),
        kind: EstimateKind::ApproxLower,
        witness: Witness::Objects(coll.ids(&chosen)),
    })
}

pub fn greedy_pierce(objs: &[FatObject]) -> Result<MeasureEstimate> {
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let points = greedy_pierce_in(&coll, &all)?;
    Ok(MeasureEstimate {
        value: points.len(),
        kind: EstimateKind::ApproxUpper,
        witness: Witness::Points(points),
    })
}

pub(crate) fn greedy_pierce_in(coll: &Collection<'_>, subset: &[usize]) -> Result<Vec<Point>> {
    if subset.is_empty() {
        return Ok(Vec::new());
    }
    let cands = CandidateSet::build(coll, subset)?;
    Ok(greedy_pierce_with(coll, &cands, coll.to_set(subset))
        .into_iter()
        .map(|c| cands.points[c].clone())
        .collect())
}

/// Greedy piercing of `live` drawing from a prepared candidate set; returns
/// candidate indices.
pub(crate) fn greedy_pierce_with(
    coll: &Collection<'_>,
    cands: &CandidateSet,
    mut live: FixedBitSet,
) -> Vec<usize> {
    let mut chosen = Vec::new();
    while let Some(o) = coll.smallest_in(&live) {
        let best = cands.by_object[o]
            .iter()
            .copied()
            .max_by(|&a, &b| {
                cands.coverage[a]
                    .intersection_count(&live)
                    .cmp(&cands.coverage[b].intersection_count(&live))
                    .then(b.cmp(&a))
            })
            .expect("every object has a candidate inside it");
        live.difference_with(&cands.coverage[best]);
        chosen.push(best);
    }
    chosen
}

/// Exact packing number when it is at most `cap`.
pub fn exact_small_pack(objs: &[FatObject], cap: usize) -> Result<SmallOutcome> {
    let coll = Collection::new(objs)?;
    let all = coll.to_set(&(0..coll.len()).collect::<Vec<_>>());
    let mut search = PackSearch::new(&coll, Meter::new(None));
    Ok(match search.solve(&all, cap) {
        Ok(chosen) => SmallOutcome::Exact(MeasureEstimate {
            value: chosen.len(),
            kind: EstimateKind::Exact,
            witness: Witness::Objects(sorted(coll.ids(&chosen))),
        }),
        Err(_) => SmallOutcome::Overflow,
    })
}

/// Exact piercing number when it is at most `cap`.
pub fn exact_small_pierce(objs: &[FatObject], cap: usize) -> Result<SmallOutcome> {
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let cands = CandidateSet::build(&coll, &all)?;
    let mut search = CoverSearch::new(&coll, &cands, Meter::new(None));
    Ok(match search.solve(&coll.to_set(&all), cap) {
        Ok(chosen) => SmallOutcome::Exact(MeasureEstimate {
            value: chosen.len(),
            kind: EstimateKind::Exact,
            witness: Witness::Points(chosen.into_iter().map(|c| cands.points[c].clone()).collect()),
        }),
        Err(Halt::Overflow) | Err(Halt::Aborted) => SmallOutcome::Overflow,
    })
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
