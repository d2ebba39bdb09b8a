//! The realtime engine: each stack slot stores the minimum position of
//! the set it represents, so Find becomes a predecessor search over the
//! stored minimums and Value truncates the stack with a binary (or
//! exponential) search. No union-find structure is needed; popped sets
//! merge implicitly when the top index moves down.
//!
//! Also hosts the approximate-query window: an O(log n) list of retained
//! positions maintained by a lazy triple sweep, answering queries at a
//! nearby retained start position without consulting the active index.

use crate::active_index::ActiveIndex;
use crate::command::{Command, Position};
use crate::compact::DEFAULT_INITIAL_CAPACITY;
use crate::engine::{EngineError, RmqEngine};

/// How `Value` locates the truncation point in the sorted stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchStrategy {
    /// Binary search over the whole stack.
    #[default]
    Binary,
    /// Exponential search from the top; cheap when few slots go.
    Exponential,
}

#[derive(Debug, Clone, Copy)]
struct MinSlot {
    value: i64,
    /// Smallest position ever merged into this slot, closed or not;
    /// `u64::MAX` while the slot has never held a position.
    min_pos: Position,
}

#[derive(Debug, Clone)]
pub struct RealtimeEngine {
    stack: Vec<MinSlot>,
    /// Membership-only: the currently active positions.
    index: ActiveIndex<()>,
    initial_capacity: usize,
    c: usize,
    j: Position,
    v_last: i64,
    search: SearchStrategy,
    peak_active: usize,
    peak_capacity: usize,
    transfers: usize,
}

impl RealtimeEngine {
    pub fn new() -> Self {
        Self::with_config(DEFAULT_INITIAL_CAPACITY, SearchStrategy::Binary)
    }

    pub fn with_config(initial_capacity: usize, search: SearchStrategy) -> Self {
        let initial_capacity = initial_capacity.max(1);
        RealtimeEngine {
            stack: vec![
                MinSlot { value: i64::MIN, min_pos: 0 },
                MinSlot { value: i64::MAX, min_pos: Position::MAX },
            ],
            index: ActiveIndex::with_capacity(initial_capacity),
            initial_capacity,
            c: 0,
            j: 0,
            v_last: 0,
            search,
            peak_active: 0,
            peak_capacity: initial_capacity,
            transfers: 0,
        }
    }

    pub fn position(&self) -> Position {
        self.j
    }

    pub fn stack_values(&self) -> Vec<i64> {
        self.stack.iter().map(|s| s.value).collect()
    }

    /// The stored set minimums, bottom-to-top, excluding the sentinel
    /// and any virgin top slot.
    pub fn min_positions(&self) -> Vec<Position> {
        self.stack
            .iter()
            .skip(1)
            .filter(|s| s.min_pos != Position::MAX)
            .map(|s| s.min_pos)
            .collect()
    }

    pub fn transfers(&self) -> usize {
        self.transfers
    }

    /// Answers RMQ(i, j) by predecessor search over the stored
    /// minimums, without checking whether `i` is active. Returns `None`
    /// when no slot's minimum is <= `i` (i.e. `i` precedes every
    /// retained position).
    pub fn query_position(&self, i: Position) -> Option<i64> {
        let slot = self.predecessor(i)?;
        Some(self.stack[slot].value)
    }

    /// Largest slot index whose `min_pos` is <= `i`, ignoring slot 0.
    fn predecessor(&self, i: Position) -> Option<usize> {
        let (mut lo, mut hi) = (1usize, self.stack.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.stack[mid].min_pos <= i {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo > 1 {
            Some(lo - 1)
        } else {
            None
        }
    }

    /// Lowest slot index whose value is >= `v`, or `None` when the top
    /// is at most `v` (nothing to truncate).
    fn truncation_point(&self, v: i64) -> Option<usize> {
        let top = self.stack.len() - 1;
        if self.stack[top].value <= v {
            return None;
        }
        let (mut lo, mut hi) = match self.search {
            SearchStrategy::Binary => (1usize, self.stack.len()),
            SearchStrategy::Exponential => {
                // Widen from the top until a slot below v appears, then
                // binary search inside that window.
                let mut step = 1usize;
                let mut hi = self.stack.len();
                let mut lo;
                loop {
                    lo = hi.saturating_sub(step).max(1);
                    if lo == 1 || self.stack[lo - 1].value < v {
                        break;
                    }
                    hi = lo;
                    step *= 2;
                }
                (lo, hi)
            }
        };
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.stack[mid].value < v {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    /// Rebuilds at capacity twice the active count, dropping slots with
    /// no active position and resetting each kept slot's minimum to its
    /// smallest active position.
    pub fn transfer(&mut self) -> usize {
        let mut live: Vec<Position> = self.index.iter_live().map(|(p, _)| p).collect();
        live.sort_unstable();

        let new_capacity = if self.c == 0 { self.initial_capacity } else { 2 * self.c };
        let mut index = ActiveIndex::with_capacity(new_capacity);
        let mut stack = vec![MinSlot { value: i64::MIN, min_pos: 0 }];

        if live.is_empty() {
            let top = *self.stack.last().unwrap();
            stack.push(MinSlot { value: top.value, min_pos: Position::MAX });
        } else {
            // Positions are sorted, and so are the slots they map to.
            let mut current: Option<(usize, MinSlot)> = None;
            for pos in live {
                let slot = self.predecessor(pos).expect("active position has a slot");
                match &mut current {
                    Some((s, _)) if *s == slot => {}
                    _ => {
                        if let Some((_, done)) = current.take() {
                            stack.push(done);
                        }
                        current = Some((
                            slot,
                            MinSlot { value: self.stack[slot].value, min_pos: pos },
                        ));
                    }
                }
                index.insert(pos, ());
            }
            if let Some((_, done)) = current {
                stack.push(done);
            }
        }

        self.stack = stack;
        self.index = index;
        self.transfers += 1;
        self.peak_capacity = self.peak_capacity.max(new_capacity);
        new_capacity
    }
}

impl Default for RealtimeEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl RmqEngine for RealtimeEngine {
    fn apply(&mut self, cmd: Command) -> Result<Option<i64>, EngineError> {
        match cmd {
            Command::Value(v) => {
                if let Some(t) = self.truncation_point(v) {
                    // Slots t..top merge into one; the surviving minimum
                    // is the lowest merged slot's. That slot can be
                    // virgin (a value never marked, min_pos = MAX) with
                    // marked slots above it, in which case the next slot
                    // up holds the smallest position.
                    let mut min_pos = self.stack[t].min_pos;
                    if min_pos == Position::MAX && t + 1 < self.stack.len() {
                        min_pos = self.stack[t + 1].min_pos;
                    }
                    self.stack.truncate(t + 1);
                    self.stack[t] = MinSlot { value: v, min_pos };
                }
                self.j += 1;
                self.v_last = v;
                Ok(None)
            }
            Command::Mark => {
                if self.j == 0 {
                    return Err(EngineError::NoValueYet);
                }
                if self.index.contains(self.j) {
                    return Ok(None);
                }
                if self.index.is_full() {
                    self.transfer();
                }
                let top = self.stack.last_mut().unwrap();
                if top.value < self.v_last {
                    let j = self.j;
                    self.stack.push(MinSlot { value: self.v_last, min_pos: j });
                } else {
                    // top.value == v_last; a virgin top adopts j as its
                    // minimum, an occupied one keeps its smaller minimum.
                    top.min_pos = top.min_pos.min(self.j);
                }
                self.index.insert(self.j, ());
                self.c += 1;
                self.peak_active = self.peak_active.max(self.c);
                Ok(None)
            }
            Command::Query(i) => {
                if !self.index.contains(i) {
                    return Err(EngineError::InactivePosition(i));
                }
                Ok(Some(
                    self.query_position(i)
                        .expect("active position has a predecessor slot"),
                ))
            }
            Command::Close(i) => {
                self.index
                    .remove(i)
                    .ok_or(EngineError::InactivePosition(i))?;
                self.c -= 1;
                Ok(None)
            }
        }
    }

    fn name(&self) -> &'static str {
        "realtime"
    }

    fn peak_capacity(&self) -> usize {
        self.peak_capacity
    }

    fn peak_active(&self) -> usize {
        self.peak_active
    }
}

/// The O(log n) list of retained positions for approximate queries.
///
/// Every new position is appended; each step lazily re-checks two
/// consecutive triples of retained positions (cursor sweeping from
/// smaller to larger values, wrapping past the end; the extremes are
/// never candidates). The middle of a triple `i1 < i2 < i3` is kept only
/// while `j - i1 > 2 (j - i3)`.
#[derive(Debug, Clone)]
pub struct ApproxWindow {
    positions: Vec<Position>,
    /// Index of the next triple's middle element.
    cursor: usize,
    j: Position,
}

impl ApproxWindow {
    /// Window after the first position.
    pub fn new() -> Self {
        ApproxWindow { positions: vec![1], cursor: 1, j: 1 }
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Appends the next position and runs two triple checks. Returns
    /// the discarded positions (at most two), oldest first.
    pub fn advance(&mut self, j: Position) -> Vec<Position> {
        debug_assert_eq!(j, self.j + 1, "positions advance one at a time");
        self.j = j;
        self.positions.push(j);
        let mut discarded = Vec::new();
        for _ in 0..2 {
            if self.positions.len() < 3 {
                break;
            }
            // The wrap is applied eagerly against the current length:
            // the last checkable middle moves as the list grows and
            // shrinks within a step.
            let last_middle = self.positions.len() - 2;
            if self.cursor > last_middle {
                self.cursor = 1;
            }
            let i1 = self.positions[self.cursor - 1];
            let i3 = self.positions[self.cursor + 1];
            if j - i1 > 2 * (j - i3) {
                self.cursor += 1;
            } else {
                discarded.push(self.positions.remove(self.cursor));
            }
            if self.positions.len() >= 3 && self.cursor > self.positions.len() - 2 {
                self.cursor = 1;
            }
        }
        discarded
    }

    /// Largest retained position <= `i`; position 1 is always retained.
    pub fn predecessor(&self, i: Position) -> Option<Position> {
        match self.positions.partition_point(|&p| p <= i) {
            0 => None,
            n => Some(self.positions[n - 1]),
        }
    }
}

impl Default for ApproxWindow {
    fn default() -> Self {
        Self::new()
    }
}

/// Answers an approximate query: picks the largest retained position
/// `i' <= i` and answers RMQ(i', j) directly over the stack, bypassing
/// the active index. The wider interval can only lower the minimum.
pub fn query_approx(
    window: &ApproxWindow,
    engine: &RealtimeEngine,
    i: Position,
) -> Option<(i64, Position)> {
    let used = window.predecessor(i)?;
    let answer = engine.query_position(used)?;
    Some((answer, used))
}
