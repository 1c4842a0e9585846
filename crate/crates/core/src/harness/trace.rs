//! Text trace format.
//!
//! ```text
//! # comment
//! n=2000 backend=amortized seed=7 [perm=<hex>]
//! F <v>
//! W <i> <v>
//! R <i> [<expected>]
//! ```
//!
//! `#` starts a comment anywhere on a line. Integers are decimal except
//! `perm`, which is the hex encoding of the permutation seed bytes.

use std::fmt;
use std::str::FromStr;

use super::{BackendKind, HarnessError, Op};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceHeader {
    pub n: usize,
    pub backend: BackendKind,
    pub seed: u64,
    pub perm: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTrace {
    pub header: TraceHeader,
    pub ops: Vec<Op>,
    /// Source line of each op, 1-based. Empty for traces built in memory.
    pub lines: Vec<usize>,
}

impl OpTrace {
    pub fn new(header: TraceHeader, ops: Vec<Op>) -> Self {
        OpTrace {
            header,
            ops,
            lines: Vec::new(),
        }
    }

    /// Source line of op `k`, or its 1-based position if unknown.
    pub fn line_of(&self, k: usize) -> usize {
        self.lines.get(k).copied().unwrap_or(k + 1)
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut header = None;
        let mut ops = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| HarnessError::Parse { line, msg };
            let Some(h) = &header else {
                header = Some(parse_header(body).map_err(err)?);
                continue;
            };
            let op = parse_op(body).map_err(err)?;
            let n = h.n;
            let index_ok = |i: usize| i >= 1 && i <= n;
            match op {
                Op::Write(i, _) | Op::Read(i, _) if !index_ok(i) => {
                    return Err(err(format!("index {i} outside [1, {n}]")));
                }
                _ => {}
            }
            ops.push(op);
            lines.push(line);
        }
        let header = header.ok_or(HarnessError::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        Ok(OpTrace { header, ops, lines })
    }
}

fn parse_header(body: &str) -> Result<TraceHeader, String> {
    let (mut n, mut backend, mut seed, mut perm) = (None, None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{field}`"))?;
        match key {
            "n" => n = Some(parse_int::<usize>(value)?),
            "backend" => {
                backend = Some(BackendKind::from_str(value).map_err(|e| e.to_string())?)
            }
            "seed" => seed = Some(parse_int::<u64>(value)?),
            "perm" => perm = Some(hex::decode(value).map_err(|e| format!("bad perm hex: {e}"))?),
            _ => return Err(format!("unknown header field `{key}`")),
        }
    }
    let n = n.ok_or("header is missing n=")?;
    if n == 0 {
        return Err("n must be positive".into());
    }
    Ok(TraceHeader {
        n,
        backend: backend.ok_or("header is missing backend=")?,
        seed: seed.ok_or("header is missing seed=")?,
        perm,
    })
}

fn parse_int<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("bad integer `{s}`"))
}

fn parse_op(body: &str) -> Result<Op, String> {
    let parts: Vec<&str> = body.split_whitespace().collect();
    match parts.as_slice() {
        ["F", v] => Ok(Op::Fill(parse_int(v)?)),
        ["W", i, v] => Ok(Op::Write(parse_int(i)?, parse_int(v)?)),
        ["R", i] => Ok(Op::Read(parse_int(i)?, None)),
        ["R", i, e] => Ok(Op::Read(parse_int(i)?, Some(parse_int(e)?))),
        _ => Err(format!("unrecognized operation `{body}`")),
    }
}

impl fmt::Display for OpTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = &self.header;
        write!(f, "n={} backend={} seed={}", h.n, h.backend, h.seed)?;
        if let Some(p) = &h.perm {
            write!(f, " perm={}", hex::encode(p))?;
        }
        writeln!(f)?;
        for op in &self.ops {
            match op {
                Op::Fill(v) => writeln!(f, "F {v}")?,
                Op::Write(i, v) => writeln!(f, "W {i} {v}")?,
                Op::Read(i, None) => writeln!(f, "R {i}")?,
                Op::Read(i, Some(e)) => writeln!(f, "R {i} {e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_ops() {
        let t = OpTrace::parse(
            "# a trace\n\nn=400 backend=amortized seed=3  # header\nF 7\nW 5 9\nR 5 9\nR 6\n",
        )
        .unwrap();
        assert_eq!(t.header.n, 400);
        assert_eq!(t.header.backend, BackendKind::Amortized);
        assert_eq!(
            t.ops,
            vec![Op::Fill(7), Op::Write(5, 9), Op::Read(5, Some(9)), Op::Read(6, None)]
        );
        assert_eq!(t.lines, vec![4, 5, 6, 7]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = OpTrace::parse("n=10 backend=oracle seed=1\nW 1 2\nX 3\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err}");
        let err = OpTrace::parse("n=10 backend=oracle seed=1\n\nR 11\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err}");
        let err = OpTrace::parse("n=10 backend=nope seed=1\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 1, .. }), "{err}");
        assert!(OpTrace::parse("# nothing\n").is_err());
    }

    fn op(n: usize) -> impl Strategy<Value = Op> {
        prop_oneof![
            any::<u64>().prop_map(Op::Fill),
            (1..=n, any::<u64>()).prop_map(|(i, v)| Op::Write(i, v)),
            (1..=n, proptest::option::of(any::<u64>())).prop_map(|(i, e)| Op::Read(i, e)),
        ]
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(
            ops in proptest::collection::vec(op(50), 0..40),
            seed in any::<u64>(),
            perm in proptest::option::of(proptest::collection::vec(any::<u8>(), 0..16)),
        ) {
            let t = OpTrace::new(
                TraceHeader { n: 50, backend: BackendKind::Randomized, seed, perm },
                ops,
            );
            let back = OpTrace::parse(&t.to_string()).unwrap();
            prop_assert_eq!(back.header, t.header);
            prop_assert_eq!(back.ops, t.ops);
        }
    }
}
