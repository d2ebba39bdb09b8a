//! The compact engine: stack + union-find + a tombstoned index over the
//! active positions, with capacity-doubling transfers. Space stays
//! proportional to the peak number of simultaneously active positions.

use std::collections::BTreeMap;

use crate::active_index::ActiveIndex;
use crate::command::{Command, Position};
use crate::engine::{EngineError, RmqEngine};
use crate::set_stack::{SetSlot, SetStack};

pub const DEFAULT_INITIAL_CAPACITY: usize = 16;

/// Read-only counters, see [`CompactEngine::stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactStats {
    /// Active (marked, not closed) positions.
    pub active: usize,
    /// Current capacity: max live-or-tombstoned entries before transfer.
    pub capacity: usize,
    /// Current position (count of values).
    pub position: Position,
    pub stack_depth: usize,
    pub live_entries: usize,
    pub tombstones: usize,
}

#[derive(Debug, Clone)]
pub struct CompactEngine {
    stack: SetStack,
    /// Active positions mapped to their union-find elements.
    index: ActiveIndex<usize>,
    initial_capacity: usize,
    c: usize,
    j: Position,
    v_last: i64,
    peak_active: usize,
    peak_capacity: usize,
    transfers: usize,
}

impl CompactEngine {
    pub fn new() -> Self {
        Self::with_initial_capacity(DEFAULT_INITIAL_CAPACITY)
    }

    pub fn with_initial_capacity(initial_capacity: usize) -> Self {
        let initial_capacity = initial_capacity.max(1);
        CompactEngine {
            stack: SetStack::new(),
            index: ActiveIndex::with_capacity(initial_capacity),
            initial_capacity,
            c: 0,
            j: 0,
            v_last: 0,
            peak_active: 0,
            peak_capacity: initial_capacity,
            transfers: 0,
        }
    }

    pub fn stats(&self) -> CompactStats {
        CompactStats {
            active: self.c,
            capacity: self.index.capacity(),
            position: self.j,
            stack_depth: self.stack.depth(),
            live_entries: self.index.live(),
            tombstones: self.index.dead(),
        }
    }

    /// Number of transfers performed so far.
    pub fn transfers(&self) -> usize {
        self.transfers
    }

    pub fn stack_values(&self) -> Vec<i64> {
        self.stack.values()
    }

    /// Rebuilds the structure at capacity twice the active count,
    /// keeping only active positions; stack slots whose set became empty
    /// are dropped. Query answers for active positions are unchanged.
    /// Returns the new capacity.
    pub fn transfer(&mut self) -> usize {
        // Group active positions by their current stack slot.
        let mut groups: BTreeMap<usize, Vec<Position>> = BTreeMap::new();
        let entries: Vec<(Position, usize)> =
            self.index.iter_live().map(|(p, &e)| (p, e)).collect();
        for (pos, elem) in entries {
            let level = self.stack.forest.find(elem).expect("active element exists");
            groups.entry(level).or_default().push(pos);
        }

        let new_capacity = if self.c == 0 { self.initial_capacity } else { 2 * self.c };
        let mut stack = SetStack::new();
        stack.slots.truncate(1); // keep the bottom sentinel
        let mut index = ActiveIndex::with_capacity(new_capacity);

        if groups.is_empty() {
            // Degenerate rebuild: keep the old top value so later marks
            // and values behave as before. Before the first value this
            // is the initial top sentinel.
            stack.slots.push(SetSlot { value: self.stack.top_value(), rep: None });
        } else {
            for (old_level, mut positions) in groups {
                positions.sort_unstable();
                let value = self.stack.value_at(old_level);
                let level = stack.slots.len();
                let mut rep = None;
                for pos in positions {
                    let elem = stack.forest.len();
                    stack.forest.make_set(elem, level).expect("fresh element");
                    match rep {
                        Some(r) => {
                            stack.forest.union(r, elem, level).expect("reps are present");
                        }
                        None => rep = Some(elem),
                    }
                    index.insert(pos, elem);
                }
                stack.slots.push(SetSlot { value, rep });
            }
        }

        self.stack = stack;
        self.index = index;
        self.transfers += 1;
        self.peak_capacity = self.peak_capacity.max(new_capacity);
        new_capacity
    }
}

impl Default for CompactEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl RmqEngine for CompactEngine {
    fn apply(&mut self, cmd: Command) -> Result<Option<i64>, EngineError> {
        match cmd {
            Command::Value(v) => {
                self.stack.process_value(v);
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
                let elem = self.stack.process_mark(self.v_last);
                self.index.insert(self.j, elem);
                self.c += 1;
                self.peak_active = self.peak_active.max(self.c);
                Ok(None)
            }
            Command::Query(i) => {
                let &elem = self.index.get(i).ok_or(EngineError::InactivePosition(i))?;
                let level = self.stack.forest.find(elem).expect("active element exists");
                Ok(Some(self.stack.value_at(level)))
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
        "compact"
    }

    fn peak_capacity(&self) -> usize {
        self.peak_capacity
    }

    fn peak_active(&self) -> usize {
        self.peak_active
    }
}
