//! Line-oriented round-log format: `round_id,x,y,z,blocked,b`.
//!
//! `x` is written as two characters, `y` in scientific notation with 17
//! significant digits (exact round trip), `blocked` as `0`/`1`, and `b` as
//! `0`, `1` or `-` for no detection.

use std::io::{BufRead, Write};

use super::{Input, Outcome, RoundRecord};
use crate::bloch::Bit;
use crate::error::{Error, Result};

pub const LOG_HEADER: &str = "round_id,x,y,z,blocked,b";

pub fn write_log<W: Write>(records: &[RoundRecord], out: W) -> Result<()> {
    write_log_iter(records.iter().copied(), out)
}

/// Streaming variant of [`write_log`].
pub fn write_log_iter<I: IntoIterator<Item = RoundRecord>, W: Write>(records: I, mut out: W) -> Result<()> {
    writeln!(out, "{LOG_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{:.16e},{},{},{}",
            r.round_id,
            r.x,
            r.y,
            r.z.index(),
            u8::from(r.blocked),
            r.b.symbol()
        )?;
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_record(line_no: usize, line: &str) -> Result<RoundRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 6 {
        return Err(parse_err(line_no, format!("expected 6 fields, found {}", fields.len())));
    }
    let round_id = fields[0]
        .parse::<u64>()
        .map_err(|e| parse_err(line_no, format!("round_id: {e}")))?;
    let x: Input = fields[1].parse().map_err(|_| parse_err(line_no, format!("bad x {:?}", fields[1])))?;
    let y: f64 = fields[2]
        .parse()
        .map_err(|e| parse_err(line_no, format!("y: {e}")))?;
    if !(0.0..=1.0).contains(&y) {
        return Err(parse_err(line_no, format!("y out of [0,1]: {y}")));
    }
    let z = match fields[3] {
        "0" => Bit::Zero,
        "1" => Bit::One,
        other => return Err(parse_err(line_no, format!("bad z {other:?}"))),
    };
    let blocked = match fields[4] {
        "0" => false,
        "1" => true,
        other => return Err(parse_err(line_no, format!("bad blocked flag {other:?}"))),
    };
    let b = match fields[5] {
        "0" => Outcome::Zero,
        "1" => Outcome::One,
        "-" => Outcome::Empty,
        other => return Err(parse_err(line_no, format!("bad outcome {other:?}"))),
    };
    if blocked && b != Outcome::Empty {
        return Err(parse_err(line_no, "blocked round carries an outcome"));
    }
    Ok(RoundRecord {
        round_id,
        x,
        y,
        z,
        blocked,
        b,
    })
}

/// Parse a log. Line numbers in errors are 1-based and count the header.
pub fn read_log<R: BufRead>(input: R) -> Result<Vec<RoundRecord>> {
    let mut lines = input.lines();
    match lines.next() {
        None => return Err(parse_err(1, "missing header line")),
        Some(h) => {
            let h = h?;
            if h.trim_end() != LOG_HEADER {
                return Err(parse_err(1, format!("expected header {LOG_HEADER:?}, found {h:?}")));
            }
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let r = parse_record(line_no, line)?;
        if r.round_id != records.len() as u64 {
            return Err(parse_err(
                line_no,
                format!("round_id {} out of sequence (expected {})", r.round_id, records.len()),
            ));
        }
        records.push(r);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_protocol, DeviceStrategy, ProtocolConfig};
    use proptest::prelude::*;

    #[test]
    fn round_trip() {
        let cfg = ProtocolConfig::new(0.5, 0.3, 2_000, 17).unwrap();
        let log = run_protocol(&cfg, &DeviceStrategy::HonestQrac).unwrap();
        let mut buf = Vec::new();
        write_log(&log.records, &mut buf).unwrap();
        let back = read_log(buf.as_slice()).unwrap();
        assert_eq!(back, log.records);
    }

    #[test]
    fn format_of_a_line() {
        let r = RoundRecord {
            round_id: 0,
            x: "10".parse().unwrap(),
            y: 0.5,
            z: Bit::One,
            blocked: true,
            b: Outcome::Empty,
        };
        let mut buf = Vec::new();
        write_log(&[r], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "round_id,x,y,z,blocked,b\n0,10,5.0000000000000000e-1,1,1,-\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "round_id,x,y,z,blocked,b\n0,00,0.5,0,0,1\n1,00,0.5,0,0\n";
        match read_log(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_log("".as_bytes()).is_err());
        assert!(read_log("nope\n".as_bytes()).is_err());
        let blocked_with_outcome = "round_id,x,y,z,blocked,b\n0,00,0.1,0,1,1\n";
        assert!(read_log(blocked_with_outcome.as_bytes()).is_err());
        let gap = "round_id,x,y,z,blocked,b\n0,00,0.1,0,1,-\n2,00,0.1,0,1,-\n";
        assert!(read_log(gap.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn y_round_trips_exactly(y in 0.0f64..=1.0) {
            let r = RoundRecord { round_id: 0, x: "01".parse().unwrap(), y, z: Bit::Zero, blocked: false, b: Outcome::One };
            let mut buf = Vec::new();
            write_log(&[r], &mut buf).unwrap();
            let back = read_log(buf.as_slice()).unwrap();
            prop_assert_eq!(back[0].y.to_bits(), y.to_bits());
        }
    }
}
