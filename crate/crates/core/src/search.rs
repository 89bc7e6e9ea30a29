//! Bounded branch-and-bound searches behind the exact small-measure
//! evaluations: maximum independent set (packing) and minimum cover over
//! candidate points (piercing). Both branch on the smallest live object and
//! split into connected components first.

use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;

use crate::collection::Collection;
use crate::piercing::CandidateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Halt {
    /// The optimum exceeds the budget.
    Overflow,
    /// The shared node allowance ran out.
    Aborted,
}

/// Node accounting: a local, deterministic count plus an optional shared
/// allowance that turns runaway searches into [`Halt::Aborted`].
pub(crate) struct Meter<'g> {
    pub nodes: u64,
    shared: Option<(&'g AtomicU64, u64)>,
}

impl<'g> Meter<'g> {
    pub fn new(shared: Option<(&'g AtomicU64, u64)>) -> Self {
        Meter { nodes: 0, shared }
    }

    pub fn tick(&mut self) -> Result<(), Halt> {
        self.nodes += 1;
        if let Some((counter, limit)) = self.shared {
            if counter.fetch_add(1, Ordering::Relaxed) + 1 > limit {
                return Err(Halt::Aborted);
            }
        }
        Ok(())
    }
}

pub(crate) struct PackSearch<'c, 'a, 'g> {
    coll: &'c Collection<'a>,
    pub meter: Meter<'g>,
}

impl<'c, 'a, 'g> PackSearch<'c, 'a, 'g> {
    pub fn new(coll: &'c Collection<'a>, meter: Meter<'g>) -> Self {
        PackSearch { coll, meter }
    }

    /// Maximum independent set of `live`, or `Overflow` if it has more than
    /// `budget` members.
    pub fn solve(&mut self, live: &FixedBitSet, budget: usize) -> Result<Vec<usize>, Halt> {
        let comps = self.coll.components(live);
        if comps.len() > budget {
            return Err(Halt::Overflow);
        }
        let mut total = Vec::new();
        let count = comps.len();
        for (i, comp) in comps.into_iter().enumerate() {
            let left = budget - total.len() - (count - i - 1);
            total.extend(self.component(comp, left)?);
        }
        Ok(total)
    }

    fn component(&mut self, live: FixedBitSet, budget: usize) -> Result<Vec<usize>, Halt> {
        self.meter.tick()?;
        if budget == 0 {
            return Err(Halt::Overflow);
        }
        if live.count_ones(..) == 1 {
            return Ok(live.ones().collect());
        }
        let upper = self.coll.clique_cover_bound(&live);
        let pivot = self.coll.smallest_in(&live).expect("component is non-empty");
        // every maximal independent set meets the closed neighborhood of the pivot
        let mut branch: Vec<usize> = self.coll.neighbors(pivot).intersection(&live).collect();
        branch.push(pivot);
        self.coll.sort_by_rank(&mut branch);
        let mut best: Vec<usize> = Vec::new();
        for v in branch {
            let mut rest = live.clone();
            rest.difference_with(self.coll.neighbors(v));
            rest.remove(v);
            if !best.is_empty() && self.coll.clique_cover_bound(&rest) < best.len() {
                continue;
            }
            let sub = self.solve(&rest, budget - 1)?;
            if sub.len() + 1 > best.len() {
                best = Vec::with_capacity(sub.len() + 1);
                best.push(v);
                best.extend(sub);
            }
            if best.len() >= upper {
                break;
            }
        }
        Ok(best)
    }
}

pub(crate) struct CoverSearch<'c, 'a, 'g> {
    coll: &'c Collection<'a>,
    cands: &'c CandidateSet,
    pub meter: Meter<'g>,
}

impl<'c, 'a, 'g> CoverSearch<'c, 'a, 'g> {
    pub fn new(coll: &'c Collection<'a>, cands: &'c CandidateSet, meter: Meter<'g>) -> Self {
        CoverSearch { coll, cands, meter }
    }

    /// Minimum set of candidate indices piercing all of `live`, or `Overflow`
    /// if more than `budget` are needed.
    pub fn solve(&mut self, live: &FixedBitSet, budget: usize) -> Result<Vec<usize>, Halt> {
        let comps = self.coll.components(live);
        if comps.len() > budget {
            return Err(Halt::Overflow);
        }
        let mut total = Vec::new();
        let count = comps.len();
        for (i, comp) in comps.into_iter().enumerate() {
            let left = budget - total.len() - (count - i - 1);
            total.extend(self.component(comp, left)?);
        }
        Ok(total)
    }

    fn component(&mut self, live: FixedBitSet, budget: usize) -> Result<Vec<usize>, Halt> {
        self.meter.tick()?;
        if budget == 0 {
            return Err(Halt::Overflow);
        }
        let pivot = self.coll.smallest_in(&live).expect("component is non-empty");
        let branch = self.cands.branches(pivot, &live);
        debug_assert!(!branch.is_empty(), "candidate set misses object {pivot}");
        let mut best: Option<Vec<usize>> = None;
        for c in branch {
            let limit = match &best {
                None => budget - 1,
                Some(b) if b.len() >= 2 => b.len() - 2,
                Some(_) => break,
            };
            let mut rest = live.clone();
            rest.difference_with(&self.cands.coverage[c]);
            // pairwise disjoint objects need distinct points
            let rest_members: Vec<usize> = rest.ones().collect();
            if self.coll.greedy_pack(&rest_members).len() > limit {
                continue;
            }
            match self.solve(&rest, limit) {
                Ok(sub) => {
                    let mut found = Vec::with_capacity(sub.len() + 1);
                    found.push(c);
                    found.extend(sub);
                    best = Some(found);
                }
                Err(Halt::Overflow) => continue,
                Err(Halt::Aborted) => return Err(Halt::Aborted),
            }
        }
        best.ok_or(Halt::Overflow)
    }
}
