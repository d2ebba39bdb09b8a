//! Deterministic workload generator.
//!
//! A workload consists of `n` uniform values with `q` uniformly chosen
//! marked positions; every mark at position `p` forces `Q p` and `C p`
//! immediately after the value at position `p + l - 1`, where the fixed
//! query length is `l = round(ell * n / q)`. The expected number of
//! simultaneously open positions is then `l * q / n = ell`.
//!
//! Randomness comes from splitmix64 so identical seeds produce identical
//! streams on every platform.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::command::{parse_stream, Command, ParseError, Position};

/// splitmix64: `next` advances the state by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and mixes with the constants 0xBF58476D1CE4E5B9
/// and 0x94D049BB133111EB.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)` by rejection, so no modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }
}

pub const DEFAULT_VALUE_BOUND: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadSpec {
    /// Number of values.
    pub n: u64,
    /// Number of queries (= marks = closes).
    pub q: u64,
    /// Target expected number of simultaneously open positions.
    pub ell: u64,
    pub seed: u64,
    /// Exclusive upper bound for generated values.
    pub value_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkloadError {
    #[error("query length l = round(ell * n / q) = {l} must lie in 1..={n}")]
    BadQueryLength { l: u64, n: u64 },
    #[error("q = {q} exceeds n * l = {max}")]
    TooManyQueries { q: u64, max: u64 },
    #[error("value bound must be positive and below i64::MAX")]
    BadValueBound,
}

impl WorkloadSpec {
    pub fn new(n: u64, q: u64, ell: u64, seed: u64) -> Self {
        WorkloadSpec { n, q, ell, seed, value_bound: DEFAULT_VALUE_BOUND }
    }

    /// The fixed query interval length `l = round(ell * n / q)`.
    pub fn query_length(&self) -> u64 {
        if self.q == 0 {
            return 0;
        }
        let num = self.ell as u128 * self.n as u128;
        ((num + self.q as u128 / 2) / self.q as u128) as u64
    }

    /// Expected number of simultaneously open positions, `l * q / n`.
    pub fn expected_open(&self) -> f64 {
        if self.q == 0 || self.n == 0 {
            return 0.0;
        }
        self.query_length() as f64 * self.q as f64 / self.n as f64
    }

    pub fn validate(&self) -> Result<(), WorkloadError> {
        if self.value_bound == 0 || self.value_bound > i64::MAX as u64 {
            return Err(WorkloadError::BadValueBound);
        }
        if self.q == 0 {
            return Ok(());
        }
        let l = self.query_length();
        if l == 0 || l > self.n {
            return Err(WorkloadError::BadQueryLength { l, n: self.n });
        }
        if self.q > self.n.saturating_mul(l) {
            return Err(WorkloadError::TooManyQueries { q: self.q, max: self.n * l });
        }
        Ok(())
    }

    /// Generates the command stream. Deterministic in the seed.
    ///
    /// Mark positions are drawn uniformly from `[1, n - l + 1]` so the
    /// forced query window fits. A draw that collides with an existing
    /// mark is redrawn a bounded number of times and then skipped, which
    /// keeps the stream valid; collisions are rare as long as `q` is
    /// well below `n - l + 1`.
    pub fn generate(&self) -> Result<Vec<Command>, WorkloadError> {
        self.validate()?;
        let l = self.query_length();
        let mut rng = SplitMix64::new(self.seed);

        let values: Vec<i64> = (0..self.n)
            .map(|_| rng.below(self.value_bound) as i64)
            .collect();

        let mut chosen: HashSet<Position> = HashSet::new();
        // p -> positions whose query and close fire right after value p.
        let mut due: BTreeMap<Position, Vec<Position>> = BTreeMap::new();
        if self.q > 0 {
            let range = self.n - l + 1;
            for _ in 0..self.q {
                let mut attempts = 0;
                loop {
                    let p = 1 + rng.below(range);
                    if chosen.insert(p) {
                        due.entry(p + l - 1).or_default().push(p);
                        break;
                    }
                    attempts += 1;
                    if attempts >= 32 {
                        break; // skip this mark event
                    }
                }
            }
        }

        let mut commands = Vec::with_capacity(values.len() + 3 * chosen.len());
        for (idx, &v) in values.iter().enumerate() {
            let p = idx as Position + 1;
            commands.push(Command::Value(v));
            if chosen.contains(&p) {
                commands.push(Command::Mark);
            }
            if let Some(starts) = due.get(&p) {
                let mut starts = starts.clone();
                starts.sort_unstable();
                for &s in &starts {
                    commands.push(Command::Query(s));
                }
                for &s in &starts {
                    commands.push(Command::Close(s));
                }
            }
        }
        Ok(commands)
    }
}

/// Writes a stream file in the token grammar, one command per line;
/// gzip-compressed when the path ends in `.gz`.
pub fn write_stream(path: &Path, commands: &[Command]) -> io::Result<()> {
    let file = File::create(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        let mut enc = flate2::write::GzEncoder::new(file, flate2::Compression::fast());
        write_commands(&mut enc, commands)?;
        enc.finish()?;
    } else {
        let mut w = io::BufWriter::new(file);
        write_commands(&mut w, commands)?;
        w.flush()?;
    }
    Ok(())
}

pub fn write_commands<W: Write>(w: &mut W, commands: &[Command]) -> io::Result<()> {
    for cmd in commands {
        writeln!(w, "{cmd}")?;
    }
    Ok(())
}

/// Reads a stream file, transparently decompressing `.gz` paths.
pub fn read_stream(path: &Path) -> io::Result<Result<Vec<Command>, ParseError>> {
    let mut text = String::new();
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        flate2::read::GzDecoder::new(file).read_to_string(&mut text)?;
    } else {
        io::BufReader::new(file).read_to_string(&mut text)?;
    }
    Ok(parse_stream(&text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::command::validate;

    fn command_counts(cmds: &[Command]) -> (usize, usize, usize, usize) {
        let count = |f: fn(&Command) -> bool| cmds.iter().filter(|c| f(c)).count();
        (
            count(|c| matches!(c, Command::Value(_))),
            count(|c| matches!(c, Command::Mark)),
            count(|c| matches!(c, Command::Query(_))),
            count(|c| matches!(c, Command::Close(_))),
        )
    }

    #[test]
    fn counts_and_window_lengths_match() {
        let spec = WorkloadSpec::new(8, 2, 1, 42);
        let l = spec.query_length();
        assert_eq!(l, 4);
        let cmds = spec.generate().unwrap();
        assert_eq!(command_counts(&cmds), (8, 2, 2, 2));
        // Each query interval has length exactly l.
        let mut j = 0u64;
        for cmd in &cmds {
            match cmd {
                Command::Value(_) => j += 1,
                Command::Query(i) => assert_eq!(j - i + 1, l),
                _ => {}
            }
        }
    }

    #[test]
    fn colliding_draws_are_skipped_not_duplicated() {
        // l = n leaves a single drawable position, so the second mark
        // event cannot be placed and is dropped.
        let spec = WorkloadSpec::new(8, 2, 2, 42);
        assert_eq!(spec.query_length(), 8);
        let cmds = spec.generate().unwrap();
        assert_eq!(command_counts(&cmds), (8, 1, 1, 1));
        assert!(validate(&cmds).ok());
    }

    #[test]
    fn same_seed_same_stream() {
        let spec = WorkloadSpec::new(500, 40, 4, 7);
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        let other = WorkloadSpec::new(500, 40, 4, 8);
        assert_ne!(spec.generate().unwrap(), other.generate().unwrap());
    }

    #[test]
    fn generated_streams_are_valid() {
        for seed in 0..20 {
            let spec = WorkloadSpec::new(1000, 100, 8, seed);
            let cmds = spec.generate().unwrap();
            assert!(validate(&cmds).ok(), "seed {seed}");
        }
    }

    #[test]
    fn expected_open_examples() {
        let spec = WorkloadSpec::new(1 << 28, 1 << 26, 1 << 16, 0);
        assert_eq!(spec.query_length(), 1 << 18);
        assert_eq!(spec.expected_open(), (1 << 16) as f64);
        assert_eq!(WorkloadSpec::new(100, 0, 5, 0).expected_open(), 0.0);
        // l = n means every window spans everything: expectation is q.
        let spec = WorkloadSpec::new(16, 4, 4, 0);
        assert_eq!(spec.query_length(), 16);
        assert_eq!(spec.expected_open(), 4.0);
        // ell too large for the stream is rejected.
        assert!(WorkloadSpec::new(16, 4, 64, 0).validate().is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(WorkloadSpec::new(10, 100, 0, 0).validate().is_err()); // l = 0
        let mut spec = WorkloadSpec::new(10, 2, 2, 0);
        spec.value_bound = 0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn running_mean_of_open_positions_tracks_ell() {
        let spec = WorkloadSpec::new(1 << 16, 1 << 10, 1 << 5, 99);
        let cmds = spec.generate().unwrap();
        let mut open = 0i64;
        let mut total = 0i64;
        let mut steps = 0i64;
        for cmd in &cmds {
            match cmd {
                Command::Mark => open += 1,
                Command::Close(_) => open -= 1,
                Command::Value(_) => {
                    total += open;
                    steps += 1;
                }
                _ => {}
            }
        }
        let mean = total as f64 / steps as f64;
        let ell = spec.expected_open();
        assert!((mean - ell).abs() / ell < 0.2, "mean {mean} vs ell {ell}");
    }

    #[test]
    fn stream_files_round_trip() {
        let dir = std::env::temp_dir();
        let cmds = WorkloadSpec::new(64, 8, 2, 3).generate().unwrap();
        for name in ["wl_test_stream.cmds", "wl_test_stream.cmds.gz"] {
            let path = dir.join(name);
            write_stream(&path, &cmds).unwrap();
            let back = read_stream(&path).unwrap().unwrap();
            assert_eq!(back, cmds);
            std::fs::remove_file(&path).ok();
        }
    }
}
