//! The vanilla engine: monotonic stack plus union-find over every
//! marked position. No filtering, no compaction; closed positions are
//! kept forever, so memory grows with the total number of marks.

use std::collections::{HashMap, HashSet};

use crate::command::{Command, Position};
use crate::engine::{EngineError, RmqEngine};
use crate::set_stack::SetStack;

/// Read-only view of the stack and the partition of open positions by
/// stack slot. `values` includes the sentinels; `sets[k]` lists the open
/// positions whose query answer is `values[k]`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub values: Vec<i64>,
    pub sets: Vec<Vec<Position>>,
}

#[derive(Debug, Clone)]
pub struct VanillaEngine {
    stack: SetStack,
    /// Every position ever marked, mapped to its union-find element.
    mark_index: HashMap<Position, usize>,
    /// Positions closed so far; tracked only for snapshots and the
    /// active counter, queries on them still answer.
    closed: HashSet<Position>,
    j: Position,
    v_last: i64,
    active: usize,
    peak_active: usize,
}

impl VanillaEngine {
    pub fn new() -> Self {
        VanillaEngine {
            stack: SetStack::new(),
            mark_index: HashMap::new(),
            closed: HashSet::new(),
            j: 0,
            v_last: 0,
            active: 0,
            peak_active: 0,
        }
    }

    /// Current position (count of values seen).
    pub fn position(&self) -> Position {
        self.j
    }

    /// Stack values bottom-to-top, sentinels included.
    pub fn stack_values(&self) -> Vec<i64> {
        self.stack.values()
    }

    /// Stack plus the partition of open positions by slot.
    pub fn snapshot(&mut self) -> Snapshot {
        let values = self.stack.values();
        let mut sets = vec![Vec::new(); values.len()];
        for (&pos, &elem) in &self.mark_index {
            if self.closed.contains(&pos) {
                continue;
            }
            let level = self.stack.forest.find(elem).expect("marked element exists");
            sets[level].push(pos);
        }
        for set in &mut sets {
            set.sort_unstable();
        }
        Snapshot { values, sets }
    }

    #[cfg(test)]
    pub(crate) fn stack_is_sorted(&self) -> bool {
        self.stack.is_sorted()
    }
}

impl Default for VanillaEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl RmqEngine for VanillaEngine {
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
                if self.mark_index.contains_key(&self.j) {
                    // Repeated mark at the same position: idempotent.
                    return Ok(None);
                }
                let elem = self.stack.process_mark(self.v_last);
                self.mark_index.insert(self.j, elem);
                self.active += 1;
                self.peak_active = self.peak_active.max(self.active);
                Ok(None)
            }
            Command::Query(i) => {
                if self.j == 0 {
                    return Err(EngineError::NoValueYet);
                }
                let &elem = self
                    .mark_index
                    .get(&i)
                    .ok_or(EngineError::UnknownPosition(i))?;
                let level = self.stack.forest.find(elem).expect("marked element exists");
                Ok(Some(self.stack.value_at(level)))
            }
            Command::Close(i) => {
                // The structure ignores closes; only the bookkeeping for
                // snapshots and the active counter changes.
                if self.mark_index.contains_key(&i) && self.closed.insert(i) {
                    self.active -= 1;
                }
                Ok(None)
            }
        }
    }

    fn name(&self) -> &'static str {
        "vanilla"
    }

    fn peak_capacity(&self) -> usize {
        self.mark_index.len()
    }

    fn peak_active(&self) -> usize {
        self.peak_active
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::command::{parse_stream, EXAMPLE};

    fn run(text: &str) -> (VanillaEngine, Vec<i64>) {
        let mut engine = VanillaEngine::new();
        let mut answers = Vec::new();
        for cmd in parse_stream(text).unwrap() {
            if let Some(a) = engine.apply(cmd).unwrap() {
                answers.push(a);
            }
        }
        (engine, answers)
    }

    #[test]
    fn worked_example_answers_27() {
        let (_, answers) = run(EXAMPLE);
        assert_eq!(answers, vec![27]);
    }

    #[test]
    fn skipped_mark_keeps_value_out_of_stack() {
        // Same sequence but no mark after value 23.
        let (mut engine, answers) =
            run("V 22 M V 23 V 26 M V 28 M V 32 M V 27 M V 35 M Q 4 C 3");
        assert_eq!(answers, vec![27]);
        let snap = engine.snapshot();
        assert!(!snap.values.contains(&23));
    }

    #[test]
    fn single_element_query() {
        let (_, answers) = run("V 5 M Q 1");
        assert_eq!(answers, vec![5]);
    }

    #[test]
    fn decreasing_values_collapse_the_stack() {
        let (_, answers) = run("V 9 M V 7 M V 3 M Q 1");
        assert_eq!(answers, vec![3]);
    }

    #[test]
    fn snapshot_matches_increasing_prefix() {
        let (mut engine, _) = run("V 22 M V 23 M V 26 M V 28 M V 32 M");
        let snap = engine.snapshot();
        assert_eq!(snap.values, vec![i64::MIN, 22, 23, 26, 28, 32]);
        assert_eq!(
            snap.sets,
            vec![vec![], vec![1], vec![2], vec![3], vec![4], vec![5]]
        );
    }

    #[test]
    fn snapshot_after_full_example() {
        let (mut engine, _) = run(EXAMPLE);
        assert!(engine.stack_is_sorted());
        let snap = engine.snapshot();
        assert_eq!(snap.values, vec![i64::MIN, 22, 23, 26, 27, 35]);
        assert_eq!(
            snap.sets,
            vec![vec![], vec![1], vec![2], vec![], vec![4, 5, 6], vec![7]]
        );
    }

    #[test]
    fn snapshot_of_skipped_mark_variant() {
        let (mut engine, _) = run("V 22 M V 23 V 26 M V 28 M V 32 M");
        let snap = engine.snapshot();
        assert_eq!(snap.values, vec![i64::MIN, 22, 26, 28, 32]);
        assert_eq!(snap.sets, vec![vec![], vec![1], vec![3], vec![4], vec![5]]);
    }

    #[test]
    fn fresh_engine_snapshot_is_sentinels_only() {
        let mut engine = VanillaEngine::new();
        let snap = engine.snapshot();
        assert_eq!(snap.values, vec![i64::MIN, i64::MAX]);
        assert_eq!(snap.sets, vec![Vec::<Position>::new(), Vec::new()]);
    }

    #[test]
    fn closed_positions_still_answer() {
        let (mut engine, _) = run("V 4 M V 9 M C 1");
        assert_eq!(engine.apply(Command::Query(1)).unwrap(), Some(4));
    }

    #[test]
    fn errors_on_bad_states() {
        let mut engine = VanillaEngine::new();
        assert_eq!(engine.apply(Command::Mark), Err(EngineError::NoValueYet));
        assert_eq!(engine.apply(Command::Query(1)), Err(EngineError::NoValueYet));
        engine.apply(Command::Value(1)).unwrap();
        assert_eq!(
            engine.apply(Command::Query(1)),
            Err(EngineError::UnknownPosition(1))
        );
    }

    #[test]
    fn duplicate_mark_is_a_no_op() {
        let mut engine = VanillaEngine::new();
        for cmd in parse_stream("V 3 M M").unwrap() {
            engine.apply(cmd).unwrap();
        }
        assert_eq!(engine.peak_active(), 1);
        assert_eq!(engine.apply(Command::Query(1)).unwrap(), Some(3));
    }

    #[test]
    fn equal_values_share_a_slot() {
        let (mut engine, answers) = run("V 3 M V 3 M Q 1 Q 2");
        assert_eq!(answers, vec![3, 3]);
        let snap = engine.snapshot();
        assert_eq!(snap.values, vec![i64::MIN, 3]);
        assert_eq!(snap.sets, vec![vec![], vec![1, 2]]);
    }
}
