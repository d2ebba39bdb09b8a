//! The command alphabet, its text form, and a well-formedness validator.
//!
//! Grammar (whitespace separated tokens, no line structure):
//!
//! ```text
//! stream := token*
//! token  := "V" int64 | "M" | "Q" uint | "C" uint
//! ```

use std::collections::HashMap;
use std::fmt;

/// 1-based sequence position; position `p` is the `p`-th `Value` command.
pub type Position = u64;

/// A single streamed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    /// `V v`: the next entry of the underlying sequence.
    Value(i64),
    /// `M`: mark the current position as a future query start.
    Mark,
    /// `Q i`: minimum value between position `i` and the current position.
    Query(Position),
    /// `C i`: no further queries will start at position `i`.
    Close(Position),
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Value(v) => write!(f, "V {v}"),
            Command::Mark => write!(f, "M"),
            Command::Query(i) => write!(f, "Q {i}"),
            Command::Close(i) => write!(f, "C {i}"),
        }
    }
}

/// Why a token stream failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed token at byte {offset}: {reason}")]
pub struct ParseError {
    /// Byte offset of the offending token (or end of input).
    pub offset: usize,
    pub reason: String,
}

/// Kinds of well-formedness violations a command sequence can exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `M` before the first `V`: no position exists yet.
    MarkBeforeAnyValue,
    /// `M` at a position that is already marked.
    DuplicateMark,
    /// `Q i` where `i` was never marked.
    QueryUnmarked,
    /// `Q i` where `i` was closed.
    QueryClosed,
    /// `C i` where `i` was never marked.
    CloseUnmarked,
    /// `C i` where `i` was already closed.
    CloseClosed,
    /// Token-level defect (only produced when validating raw text).
    MalformedToken,
}

/// Result of [`validate`]: `ok` iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub violations: Vec<(usize, ViolationKind)>,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Parses a whitespace-separated token stream into commands.
///
/// `V` consumes one following signed integer, `Q`/`C` one following
/// position (>= 1), `M` consumes nothing. `i64::MIN` and `i64::MAX` are
/// reserved as sentinels and rejected as `V` arguments.
pub fn parse_stream(text: &str) -> Result<Vec<Command>, ParseError> {
    let mut commands = Vec::new();
    let mut tokens = Tokens::new(text);
    while let Some((offset, token)) = tokens.next() {
        let cmd = match token {
            "V" => {
                let (arg_off, arg) = expect_arg(&mut tokens, text.len(), "V")?;
                let v: i64 = parse_int(arg, arg_off)?;
                if v == i64::MIN || v == i64::MAX {
                    return Err(ParseError {
                        offset: arg_off,
                        reason: format!("value {v} is reserved as a sentinel"),
                    });
                }
                Command::Value(v)
            }
            "M" => Command::Mark,
            "Q" | "C" => {
                let (arg_off, arg) = expect_arg(&mut tokens, text.len(), token)?;
                let i: u64 = parse_int(arg, arg_off)?;
                if i == 0 {
                    return Err(ParseError {
                        offset: arg_off,
                        reason: "positions are 1-based".into(),
                    });
                }
                if token == "Q" {
                    Command::Query(i)
                } else {
                    Command::Close(i)
                }
            }
            other => {
                return Err(ParseError {
                    offset,
                    reason: format!("unknown tag {other:?}"),
                })
            }
        };
        commands.push(cmd);
    }
    Ok(commands)
}

/// Serializes commands into the token grammar; round-trips through
/// [`parse_stream`].
pub fn serialize(commands: &[Command]) -> String {
    let mut out = String::new();
    for cmd in commands {
        if !out.is_empty() {
            out.push(' ');
        }
        use fmt::Write;
        write!(out, "{cmd}").unwrap();
    }
    out
}

/// Flags every violation of the well-formedness rules: `M` requires a
/// prior `V` and an unmarked current position; `Q i`/`C i` require `i`
/// marked and not closed; `C i` at most once per marked `i`.
///
/// Violations are data, not failures: the report lists each offending
/// command ordinal (0-based) with its kind.
pub fn validate(commands: &[Command]) -> ValidityReport {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Open,
        Closed,
    }
    let mut report = ValidityReport::default();
    let mut state: HashMap<Position, State> = HashMap::new();
    let mut j: Position = 0;
    for (ordinal, cmd) in commands.iter().enumerate() {
        match *cmd {
            Command::Value(_) => j += 1,
            Command::Mark => {
                if j == 0 {
                    report.violations.push((ordinal, ViolationKind::MarkBeforeAnyValue));
                } else if state.contains_key(&j) {
                    report.violations.push((ordinal, ViolationKind::DuplicateMark));
                } else {
                    state.insert(j, State::Open);
                }
            }
            Command::Query(i) => match state.get(&i) {
                Some(State::Open) => {}
                Some(State::Closed) => {
                    report.violations.push((ordinal, ViolationKind::QueryClosed))
                }
                None => report.violations.push((ordinal, ViolationKind::QueryUnmarked)),
            },
            Command::Close(i) => match state.get(&i) {
                Some(State::Open) => {
                    state.insert(i, State::Closed);
                }
                Some(State::Closed) => {
                    report.violations.push((ordinal, ViolationKind::CloseClosed))
                }
                None => report.violations.push((ordinal, ViolationKind::CloseUnmarked)),
            },
        }
    }
    report
}

struct Tokens<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens { text, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < bytes.len() && !bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Some((start, &self.text[start..self.pos]))
    }
}

fn expect_arg<'a>(
    tokens: &mut Tokens<'a>,
    end: usize,
    tag: &str,
) -> Result<(usize, &'a str), ParseError> {
    tokens.next().ok_or_else(|| ParseError {
        offset: end,
        reason: format!("{tag} is missing its argument"),
    })
}

fn parse_int<T: std::str::FromStr>(token: &str, offset: usize) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError {
        offset,
        reason: format!("expected an integer, got {token:?}"),
    })
}

/// The worked example used throughout the crate's tests.
#[cfg(test)]
pub(crate) const EXAMPLE: &str = "V 22 M V 23 M V 26 M V 28 M V 32 M V 27 M V 35 M Q 4 C 3";
