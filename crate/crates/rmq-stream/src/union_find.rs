//! Disjoint-set forest with union by rank and full path compression.
//!
//! Each set root carries a stack level. `union` lets the caller pick the
//! surviving level explicitly, regardless of which root wins by rank,
//! because the engines merge position sets downward into the stack slot
//! that survives a pop.

/// Absent-slot marker in the parent array.
const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("element {0} already present")]
    DuplicateElement(usize),
    #[error("element {0} not present")]
    MissingElement(usize),
}

/// Union-find over caller-assigned integer element ids, with a stack
/// level stored at each root.
#[derive(Debug, Default, Clone)]
pub struct PositionForest {
    parent: Vec<usize>,
    rank: Vec<u8>,
    level: Vec<usize>, // meaningful at roots only
    count: usize,
}

impl PositionForest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of elements ever inserted.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Inserts `element` as a singleton set at `level`.
    pub fn make_set(&mut self, element: usize, level: usize) -> Result<usize, ForestError> {
        if element < self.parent.len() && self.parent[element] != ABSENT {
            return Err(ForestError::DuplicateElement(element));
        }
        if element >= self.parent.len() {
            self.parent.resize(element + 1, ABSENT);
            self.rank.resize(element + 1, 0);
            self.level.resize(element + 1, 0);
        }
        self.parent[element] = element;
        self.rank[element] = 0;
        self.level[element] = level;
        self.count += 1;
        Ok(element)
    }

    fn root(&mut self, element: usize) -> Result<usize, ForestError> {
        if element >= self.parent.len() || self.parent[element] == ABSENT {
            return Err(ForestError::MissingElement(element));
        }
        let mut r = element;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        // Full path compression.
        let mut x = element;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        Ok(r)
    }

    /// Returns the stack level stored at the element's root.
    pub fn find(&mut self, element: usize) -> Result<usize, ForestError> {
        let r = self.root(element)?;
        Ok(self.level[r])
    }

    /// Merges the sets of `a` and `b`; the merged root reports
    /// `surviving_level`. A self-union just resets the level.
    pub fn union(
        &mut self,
        a: usize,
        b: usize,
        surviving_level: usize,
    ) -> Result<usize, ForestError> {
        let ra = self.root(a)?;
        let rb = self.root(b)?;
        if ra == rb {
            self.level[ra] = surviving_level;
            return Ok(ra);
        }
        let winner = match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Greater => {
                self.parent[rb] = ra;
                ra
            }
            std::cmp::Ordering::Less => {
                self.parent[ra] = rb;
                rb
            }
            std::cmp::Ordering::Equal => {
                self.parent[ra] = rb;
                self.rank[rb] += 1;
                rb
            }
        };
        self.level[winner] = surviving_level;
        Ok(winner)
    }

    /// Rank of the element's root; bounds tree depth.
    #[cfg(test)]
    pub(crate) fn root_rank(&mut self, element: usize) -> Result<u8, ForestError> {
        let r = self.root(element)?;
        Ok(self.rank[r])
    }
}
