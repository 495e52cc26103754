//! Command trace interchange format: one command per line,
//! `cycle kind bank row [hex payload]`. Payload hex is fixed-width with
//! bit 0 (DQ bit 0) as the least significant bit.

use std::fmt::Write as _;

use thiserror::Error;

use crate::command::{Command, CommandKind};
use crate::payload::Payload;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: expected `cycle kind bank row [hex payload]`, got {got:?}")]
    Malformed { line: usize, got: String },
    #[error("line {line}: unknown command kind {kind:?}")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: bad integer field {field:?}")]
    BadInt { line: usize, field: String },
    #[error("line {line}: bad hex payload for width {width}")]
    BadPayload { line: usize, width: u32 },
    #[error("line {line}: WR requires a payload")]
    MissingPayload { line: usize },
}

pub fn parse_trace(text: &str, row_width_bits: u32) -> Result<Vec<Command>, TraceError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = stripped.split_whitespace().collect();
        if fields.len() < 4 || fields.len() > 5 {
            return Err(TraceError::Malformed { line, got: raw.to_string() });
        }
        let cycle = parse_int(fields[0], line)?;
        let kind = CommandKind::parse(fields[1])
            .ok_or_else(|| TraceError::UnknownKind { line, kind: fields[1].to_string() })?;
        let bank = parse_int(fields[2], line)? as u32;
        let row = parse_int(fields[3], line)? as u32;
        let payload = if fields.len() == 5 {
            Some(
                Payload::from_hex(row_width_bits, fields[4])
                    .ok_or(TraceError::BadPayload { line, width: row_width_bits })?,
            )
        } else {
            None
        };
        if kind == CommandKind::Wr && payload.is_none() {
            return Err(TraceError::MissingPayload { line });
        }
        out.push(Command { issue_cycle: cycle, kind, bank, row, burst: 0, payload });
    }
    Ok(out)
}

fn parse_int(s: &str, line: usize) -> Result<u64, TraceError> {
    s.parse::<u64>().map_err(|_| TraceError::BadInt { line, field: s.to_string() })
}

pub fn format_trace(commands: &[Command]) -> String {
    let mut s = String::new();
    for cmd in commands {
        let _ = write!(s, "{} {} {} {}", cmd.issue_cycle, cmd.kind.mnemonic(), cmd.bank, cmd.row);
        if let Some(p) = &cmd.payload {
            let _ = write!(s, " {}", p.to_hex());
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_trace("10 ACT 0 5\nbogus line\n", 64).unwrap_err();
        assert_eq!(err, TraceError::Malformed { line: 2, got: "bogus line".into() });
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let cmds = parse_trace("# header\n\n10 ACT 0 5 # open row 5\n", 64).unwrap();
        assert_eq!(cmds.len(), 1);
        assert_eq!(cmds[0].kind, CommandKind::Act);
        assert_eq!(cmds[0].row, 5);
    }

    #[test]
    fn wr_needs_payload() {
        assert_eq!(parse_trace("10 WR 0 5\n", 64).unwrap_err(), TraceError::MissingPayload {
            line: 1
        });
    }
}
