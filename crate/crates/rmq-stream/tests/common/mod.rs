//! Shared helpers for the integration suites: a seeded adversarial
//! stream generator and small engine-driving utilities.
//!
//! Each suite uses a different subset of these helpers.
#![allow(dead_code)]

use rmq_stream::workload::SplitMix64;
use rmq_stream::{Command, Position, RmqEngine};

/// The worked example from the crate documentation; its single query
/// answers 27.
pub const EXAMPLE: &str = "V 22 M V 23 M V 26 M V 28 M V 32 M V 27 M V 35 M Q 4 C 3";

/// Knobs for [`random_stream`]. Percentages are per value position.
#[derive(Debug, Clone, Copy)]
pub struct StreamParams {
    /// Number of values in the stream.
    pub n: u64,
    /// Values are drawn from `[0, value_range)`; keep this small to
    /// force ties and deep pops.
    pub value_range: u64,
    pub mark_pct: u64,
    pub query_pct: u64,
    pub close_pct: u64,
}

impl Default for StreamParams {
    fn default() -> Self {
        StreamParams {
            n: 200,
            value_range: 16,
            mark_pct: 60,
            query_pct: 50,
            close_pct: 30,
        }
    }
}

/// Generates a valid command stream: marks follow their value, queries
/// and closes only target currently open positions.
pub fn random_stream(seed: u64, params: StreamParams) -> Vec<Command> {
    let mut rng = SplitMix64::new(seed);
    let mut commands = Vec::new();
    let mut open: Vec<Position> = Vec::new();
    for p in 1..=params.n {
        commands.push(Command::Value(rng.below(params.value_range.max(1)) as i64));
        if rng.below(100) < params.mark_pct {
            commands.push(Command::Mark);
            open.push(p);
        }
        if !open.is_empty() && rng.below(100) < params.query_pct {
            let i = open[rng.below(open.len() as u64) as usize];
            commands.push(Command::Query(i));
        }
        if !open.is_empty() && rng.below(100) < params.close_pct {
            let victim = open.swap_remove(rng.below(open.len() as u64) as usize);
            commands.push(Command::Close(victim));
        }
    }
    commands
}

/// Applies every command, returning the query answers in order; panics
/// on any engine error (the generated streams are valid).
pub fn collect_answers(engine: &mut dyn RmqEngine, commands: &[Command]) -> Vec<i64> {
    commands
        .iter()
        .filter_map(|&cmd| engine.apply(cmd).expect("valid stream"))
        .collect()
}
