//! File formats.
//!
//! **Family file.** A header line `n k`, then `n` blocks; block `v` lists the
//! colors `f_v(a, b)` for all host edges `a < b` in lexicographic order. Tokens
//! are whitespace separated, lines starting with `#` are comments. The writer
//! puts one block per line.
//!
//! **Pattern file.** A line with the vertex count `v`, then one `a b` edge per
//! line, then optionally `isolated r` to append `r` isolated vertices.
//!
//! **Certificate file.** JSON lines, one [`CertificateRecord`] per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Anchor, AnchoredViolation, ColoringFamily, PatternGraph, ViolationCertificate};

pub fn write_family<W: Write>(family: &ColoringFamily, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let n = family.n();
    writeln!(out, "{} {}", n, family.k())?;
    let mut line = String::new();
    for owner in 0..n {
        line.clear();
        for a in 0..n {
            for b in a + 1..n {
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&family.color(owner, a, b).to_string());
            }
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_family<R: Read>(input: R) -> Result<ColoringFamily> {
    let reader = BufReader::new(input);
    let mut header: Option<(usize, u32)> = None;
    let mut colors: Vec<u32> = Vec::new();
    let mut expected = 0usize;
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        if header.is_none() {
            let parse = |tok: Option<&str>, what: &str| -> Result<u64> {
                tok.ok_or_else(|| Error::Parse { line: line_no, message: format!("missing {what}") })?
                    .parse::<u64>()
                    .map_err(|e| Error::Parse { line: line_no, message: format!("{what}: {e}") })
            };
            let n = parse(tokens.next(), "n")? as usize;
            let k = parse(tokens.next(), "k")?;
            if k == 0 || k > u32::MAX as u64 {
                return Err(Error::Parse { line: line_no, message: format!("k={k} out of range") });
            }
            if tokens.next().is_some() {
                return Err(Error::Parse { line: line_no, message: "header must be `n k`".into() });
            }
            expected = n * crate::model::host_edge_count(n);
            colors.reserve(expected);
            header = Some((n, k as u32));
            continue;
        }
        let (_, k) = header.unwrap();
        for tok in tokens {
            let c: u64 = tok.parse().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad color `{tok}`: {e}"),
            })?;
            if c == 0 || c > k as u64 {
                return Err(Error::ColorOutOfRange { color: c, k });
            }
            if colors.len() == expected {
                return Err(Error::SizeMismatch(format!(
                    "more than {expected} colors (line {line_no})"
                )));
            }
            colors.push(c as u32);
        }
    }
    let (n, k) = header.ok_or(Error::Parse { line: last_line, message: "missing header".into() })?;
    if colors.len() != expected {
        return Err(Error::SizeMismatch(format!(
            "expected {expected} colors for n={n}, found {}",
            colors.len()
        )));
    }
    ColoringFamily::from_dense(n, k, colors)
}

pub fn save_family(family: &ColoringFamily, path: impl AsRef<Path>) -> Result<()> {
    write_family(family, File::create(path)?)
}

pub fn load_family(path: impl AsRef<Path>) -> Result<ColoringFamily> {
    read_family(File::open(path)?)
}

pub fn write_pattern<W: Write>(pattern: &PatternGraph, mut out: W) -> Result<()> {
    if let Some(name) = pattern.name() {
        writeln!(out, "# {name}")?;
    }
    writeln!(out, "{}", pattern.num_vertices())?;
    for &(a, b) in pattern.edges() {
        writeln!(out, "{a} {b}")?;
    }
    Ok(())
}

pub fn read_pattern<R: Read>(input: R) -> Result<PatternGraph> {
    let reader = BufReader::new(input);
    let mut vertices: Option<usize> = None;
    let mut edges = Vec::new();
    let mut isolated = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |m: String| Error::Parse { line: line_no, message: m };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if vertices.is_none() {
            if tokens.len() != 1 {
                return Err(err("first line must be the vertex count".into()));
            }
            vertices = Some(tokens[0].parse().map_err(|e| err(format!("vertex count: {e}")))?);
            continue;
        }
        match tokens.as_slice() {
            ["isolated", r] => {
                isolated += r.parse::<usize>().map_err(|e| err(format!("isolated count: {e}")))?
            }
            [a, b] => {
                let a = a.parse().map_err(|e| err(format!("endpoint: {e}")))?;
                let b = b.parse().map_err(|e| err(format!("endpoint: {e}")))?;
                if isolated > 0 {
                    return Err(err("edges after the `isolated` trailer".into()));
                }
                edges.push((a, b));
            }
            _ => return Err(err(format!("unexpected line `{trimmed}`"))),
        }
    }
    let v = vertices.ok_or(Error::MalformedPattern("empty pattern file".into()))?;
    PatternGraph::new(v + isolated, edges)
}

pub fn load_pattern(path: impl AsRef<Path>) -> Result<PatternGraph> {
    read_pattern(File::open(path)?)
}

/// One line of a certificate file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub pattern: String,
    pub certificate: ViolationCertificate,
    #[serde(default)]
    pub anchor: Option<Anchor>,
    #[serde(default)]
    pub slack: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<serde_json::Value>,
}

impl CertificateRecord {
    pub fn from_violation(av: &AnchoredViolation, diagnostics: Option<serde_json::Value>) -> Self {
        CertificateRecord {
            pattern: av.certificate.pattern.label(),
            certificate: av.certificate.clone(),
            anchor: av.anchor,
            slack: av.slack.clone(),
            diagnostics,
        }
    }

    pub fn from_certificate(cert: &ViolationCertificate) -> Self {
        CertificateRecord {
            pattern: cert.pattern.label(),
            certificate: cert.clone(),
            anchor: None,
            slack: Vec::new(),
            diagnostics: None,
        }
    }

    pub fn to_violation(&self) -> AnchoredViolation {
        AnchoredViolation {
            certificate: self.certificate.clone(),
            anchor: self.anchor,
            slack: self.slack.clone(),
        }
    }
}

pub fn write_certificates<W: Write>(records: &[CertificateRecord], out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_certificates<R: Read>(input: R) -> Result<Vec<CertificateRecord>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Embedding};

    #[test]
    fn family_round_trip() {
        let f = ColoringFamily::uniform(6, 4, 11).unwrap();
        let mut buf = Vec::new();
        write_family(&f, &mut buf).unwrap();
        let g = read_family(buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn color_zero_is_a_range_error() {
        let text = "3 2\n0 1 1\n1 1 1\n1 1 1\n";
        assert!(matches!(read_family(text.as_bytes()), Err(Error::ColorOutOfRange { color: 0, k: 2 })));
    }

    #[test]
    fn monochromatic_file() {
        let text = "# comment\n3 2\n1 1 1\n1 1 1\n1 1 1\n";
        let f = read_family(text.as_bytes()).unwrap();
        assert_eq!(f, ColoringFamily::monochromatic(3, 2).unwrap());
    }

    #[test]
    fn distinct_diagnostics() {
        assert!(matches!(read_family("3 2\n1 1 1\n1 1\n".as_bytes()), Err(Error::SizeMismatch(_))));
        assert!(matches!(
            read_family("3 2\n1 1 1 1 1 1 1 1 1 1\n".as_bytes()),
            Err(Error::SizeMismatch(_))
        ));
        assert!(matches!(read_family("3 2\n1 x 1\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_family("3\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_family("".as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn pattern_file_with_isolated_trailer() {
        let text = "4\n0 1\n1 2\n2 3\nisolated 2\n";
        let p = read_pattern(text.as_bytes()).unwrap();
        assert_eq!(p.num_vertices(), 6);
        assert_eq!(p.isolated_count(), 2);
        assert!(p.is_isomorphic(&PatternGraph::named("P3+2K1").unwrap()));

        let c4 = PatternGraph::named("C4").unwrap();
        let mut buf = Vec::new();
        write_pattern(&c4, &mut buf).unwrap();
        let back = read_pattern(buf.as_slice()).unwrap();
        assert_eq!(back.edges(), c4.edges());
    }

    #[test]
    fn certificate_lines_round_trip() {
        let p2 = PatternGraph::named("P2").unwrap();
        let cert = ViolationCertificate {
            pattern: p2.clone(),
            embedding: Embedding::new(&p2, vec![0, 1, 2], 3).unwrap(),
            collisions: vec![(Edge(0, 1), Edge(1, 2)); 3],
        };
        let rec = CertificateRecord::from_certificate(&cert);
        let mut buf = Vec::new();
        write_certificates(&[rec.clone(), rec.clone()], &mut buf).unwrap();
        let back = read_certificates(buf.as_slice()).unwrap();
        assert_eq!(back, vec![rec.clone(), rec]);
    }
}
