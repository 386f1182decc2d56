//! Text container for NK instances.
//!
//! ```text
//! nk-instance
//! format_version 1
//! n <n>
//! k <k>
//! seed <seed>
//! prng chacha20-u64
//! neighbors
//! <i> <j_1> ... <j_k>          one line per variable, i = 0..n-1
//! tables
//! <i> <t_0> ... <t_{2^(k+1)-1}>  one line per variable
//! end
//! ```
//!
//! Payoffs are written in Rust's shortest round-trip decimal form, so a
//! save/load cycle is bit-exact. The trailing `end` line makes truncation
//! detectable.

use std::io::{BufRead, Write};
use std::path::Path;

use thiserror::Error;

use super::NkInstance;
use crate::rng::INSTANCE_PRNG_NAME;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "nk-instance";

#[derive(Debug, Error)]
pub enum InstanceFormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: field `{field}`: {message}")]
    Parse {
        line: usize,
        field: &'static str,
        message: String,
    },
}

pub fn write_instance<W: Write>(instance: &NkInstance, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "format_version {FORMAT_VERSION}")?;
    writeln!(out, "n {}", instance.n())?;
    writeln!(out, "k {}", instance.k())?;
    writeln!(out, "seed {}", instance.seed())?;
    writeln!(out, "prng {INSTANCE_PRNG_NAME}")?;
    writeln!(out, "neighbors")?;
    for (i, nb) in instance.neighbors().iter().enumerate() {
        write!(out, "{i}")?;
        for j in nb {
            write!(out, " {j}")?;
        }
        writeln!(out)?;
    }
    writeln!(out, "tables")?;
    for (i, t) in instance.tables().iter().enumerate() {
        write!(out, "{i}")?;
        for v in t {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    writeln!(out, "end")?;
    Ok(())
}

pub fn save_instance(instance: &NkInstance, path: &Path) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_instance(instance, &mut w)?;
    w.flush()
}

pub fn load_instance(path: &Path) -> Result<NkInstance, InstanceFormatError> {
    let file = std::fs::File::open(path)?;
    read_instance(std::io::BufReader::new(file))
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next(&mut self, field: &'static str) -> Result<String, InstanceFormatError> {
        self.line += 1;
        match self.inner.next() {
            Some(Ok(l)) => Ok(l),
            Some(Err(e)) => Err(e.into()),
            None => Err(self.err(field, "unexpected end of stream")),
        }
    }

    fn err(&self, field: &'static str, message: impl Into<String>) -> InstanceFormatError {
        InstanceFormatError::Parse {
            line: self.line,
            field,
            message: message.into(),
        }
    }

    fn keyword(&mut self, field: &'static str) -> Result<(), InstanceFormatError> {
        let l = self.next(field)?;
        if l.trim() != field {
            return Err(self.err(field, format!("expected `{field}`, found {l:?}")));
        }
        Ok(())
    }

    fn header<T: std::str::FromStr>(
        &mut self,
        field: &'static str,
    ) -> Result<T, InstanceFormatError> {
        let l = self.next(field)?;
        let rest = l
            .strip_prefix(field)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| self.err(field, format!("expected `{field} <value>`, found {l:?}")))?;
        rest.trim()
            .parse()
            .map_err(|_| self.err(field, format!("cannot parse {rest:?}")))
    }

    /// Reads `<i> <v_1> ... <v_count>` and checks the leading index.
    fn row<T: std::str::FromStr>(
        &mut self,
        field: &'static str,
        index: usize,
        count: usize,
    ) -> Result<Vec<T>, InstanceFormatError> {
        let l = self.next(field)?;
        let mut parts = l.split_ascii_whitespace();
        let lead: Option<usize> = parts.next().and_then(|p| p.parse().ok());
        if lead != Some(index) {
            return Err(self.err(field, format!("expected row {index}, found {l:?}")));
        }
        let values = parts
            .map(|p| {
                p.parse::<T>()
                    .map_err(|_| self.err(field, format!("cannot parse {p:?}")))
            })
            .collect::<Result<Vec<T>, _>>()?;
        if values.len() != count {
            return Err(self.err(
                field,
                format!("row {index} has {} entries, expected {count}", values.len()),
            ));
        }
        Ok(values)
    }
}

pub fn read_instance<R: BufRead>(reader: R) -> Result<NkInstance, InstanceFormatError> {
    let mut lines = Lines {
        inner: reader.lines(),
        line: 0,
    };
    lines.keyword(MAGIC)?;
    let version: u32 = lines.header("format_version")?;
    if version != FORMAT_VERSION {
        return Err(lines.err("format_version", format!("unsupported version {version}")));
    }
    let n: usize = lines.header("n")?;
    let k: usize = lines.header("k")?;
    if n == 0 || k >= n || k >= 30 {
        return Err(lines.err("k", format!("k = {k} is invalid for n = {n}")));
    }
    let seed: u64 = lines.header("seed")?;
    let prng: String = lines.header("prng")?;
    if prng != INSTANCE_PRNG_NAME {
        return Err(lines.err("prng", format!("unknown generator {prng:?}")));
    }
    lines.keyword("neighbors")?;
    let neighbors = (0..n)
        .map(|i| lines.row::<usize>("neighbors", i, k))
        .collect::<Result<Vec<_>, _>>()?;
    lines.keyword("tables")?;
    let table_len = 1usize << (k + 1);
    let tables = (0..n)
        .map(|i| lines.row::<f64>("tables", i, table_len))
        .collect::<Result<Vec<_>, _>>()?;
    lines.keyword("end")?;
    NkInstance::from_parts(n, k, seed, neighbors, tables)
        .map_err(|e| lines.err("instance", e.to_string()))
}
