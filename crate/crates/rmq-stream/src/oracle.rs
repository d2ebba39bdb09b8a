//! Brute-force reference engine: stores the whole value sequence and
//! answers queries by linear scan. Ground truth for differential tests;
//! never benchmarked.

use std::collections::HashSet;

use crate::command::{Command, Position};
use crate::engine::{EngineError, RmqEngine};

#[derive(Debug, Clone, Default)]
pub struct OracleEngine {
    values: Vec<i64>,
    open: HashSet<Position>,
    peak_active: usize,
}

impl OracleEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// The stored sequence so far.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Minimum of the stored values between positions `i` and `j`
    /// inclusive, regardless of mark state.
    pub fn range_min(&self, i: Position, j: Position) -> Option<i64> {
        if i == 0 || j as usize > self.values.len() || i > j {
            return None;
        }
        self.values[i as usize - 1..j as usize].iter().copied().min()
    }
}

impl RmqEngine for OracleEngine {
    fn apply(&mut self, cmd: Command) -> Result<Option<i64>, EngineError> {
        match cmd {
            Command::Value(v) => {
                self.values.push(v);
                Ok(None)
            }
            Command::Mark => {
                if self.values.is_empty() {
                    return Err(EngineError::NoValueYet);
                }
                self.open.insert(self.values.len() as Position);
                self.peak_active = self.peak_active.max(self.open.len());
                Ok(None)
            }
            Command::Query(i) => {
                if !self.open.contains(&i) {
                    return Err(EngineError::InactivePosition(i));
                }
                let j = self.values.len() as Position;
                Ok(Some(self.range_min(i, j).expect("open position is in range")))
            }
            Command::Close(i) => {
                if !self.open.remove(&i) {
                    return Err(EngineError::InactivePosition(i));
                }
                Ok(None)
            }
        }
    }

    fn name(&self) -> &'static str {
        "oracle"
    }

    fn peak_capacity(&self) -> usize {
        self.values.len()
    }

    fn peak_active(&self) -> usize {
        self.peak_active
    }
}
