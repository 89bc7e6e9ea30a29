//! Precomputed intersection graph over a list of objects.
//!
//! Everything above geometry works on positions into one [`Collection`]
//! rather than on object slices, so pairwise predicates are evaluated once.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::geometry::{intersects_unchecked, FatObject};

pub struct Collection<'a> {
    objects: &'a [FatObject],
    /// Open neighborhoods: `adjacency[p]` never contains `p`.
    adjacency: Vec<FixedBitSet>,
    sizes: Vec<f64>,
    /// Position of each object in the (size, id) order.
    rank: Vec<usize>,
}

impl<'a> Collection<'a> {
    pub fn new(objects: &'a [FatObject]) -> Result<Self> {
        let n = objects.len();
        if let Some(first) = objects.first() {
            let d = first.dim();
            if let Some(bad) = objects.iter().find(|o| o.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: bad.dim(),
                });
            }
        }
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if intersects_unchecked(&objects[i], &objects[j]) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        let sizes: Vec<f64> = objects.iter().map(FatObject::size).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            sizes[a]
                .total_cmp(&sizes[b])
                .then(objects[a].id.cmp(&objects[b].id))
        });
        let mut rank = vec![0; n];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        Ok(Collection {
            objects,
            adjacency,
            sizes,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &'a [FatObject] {
        self.objects
    }

    pub fn object(&self, pos: usize) -> &'a FatObject {
        &self.objects[pos]
    }

    pub fn dim(&self) -> Option<usize> {
        self.objects.first().map(FatObject::dim)
    }

    pub fn size(&self, pos: usize) -> f64 {
        self.sizes[pos]
    }

    pub fn rank(&self, pos: usize) -> usize {
        self.rank[pos]
    }

    pub fn neighbors(&self, pos: usize) -> &FixedBitSet {
        &self.adjacency[pos]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn degree_in(&self, pos: usize, within: &FixedBitSet) -> usize {
        self.adjacency[pos].intersection_count(within)
    }

    pub fn ids(&self, positions: &[usize]) -> Vec<usize> {
        positions.iter().map(|&p| self.objects[p].id).collect()
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn to_set(&self, positions: &[usize]) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend(positions.iter().copied());
        s
    }

    /// Closed neighborhood of `positions`.
    pub fn closed_neighborhood(&self, positions: &[usize]) -> FixedBitSet {
        let mut s = self.to_set(positions);
        for &p in positions {
            s.union_with(&self.adjacency[p]);
        }
        s
    }

    /// Sorts positions by (size, id).
    pub fn sort_by_rank(&self, positions: &mut [usize]) {
        positions.sort_by_key(|&p| self.rank[p]);
    }

    /// Member of `set` that comes first in the (size, id) order.
    pub fn smallest_in(&self, set: &FixedBitSet) -> Option<usize> {
        set.ones().min_by_key(|&p| self.rank[p])
    }

    /// Smallest-first greedy maximal independent set of `subset`.
    pub fn greedy_pack(&self, subset: &[usize]) -> Vec<usize> {
        let mut sorted = subset.to_vec();
        self.sort_by_rank(&mut sorted);
        let mut blocked = self.empty_set();
        let mut chosen = Vec::new();
        for p in sorted {
            if !blocked.contains(p) {
                chosen.push(p);
                blocked.insert(p);
                blocked.union_with(&self.adjacency[p]);
            }
        }
        chosen
    }

    /// Greedy clique cover of `set`; its size bounds the packing number from above.
    pub fn clique_cover_bound(&self, set: &FixedBitSet) -> usize {
        let mut members: Vec<usize> = set.ones().collect();
        self.sort_by_rank(&mut members);
        let mut cliques: Vec<FixedBitSet> = Vec::new();
        for p in members {
            match cliques.iter_mut().find(|c| c.is_subset(&self.adjacency[p])) {
                Some(c) => c.insert(p),
                None => {
                    let mut c = self.empty_set();
                    c.insert(p);
                    cliques.push(c);
                }
            }
        }
        cliques.len()
    }

    /// Connected components of the intersection graph induced on `set`,
    /// each listed in increasing position order, ordered by first member.
    pub fn components(&self, set: &FixedBitSet) -> Vec<FixedBitSet> {
        let mut seen = self.empty_set();
        let mut out = Vec::new();
        for start in set.ones() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = self.empty_set();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(p) = stack.pop() {
                comp.insert(p);
                for q in self.adjacency[p].intersection(set) {
                    if !seen.contains(q) {
                        seen.insert(q);
                        stack.push(q);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}
