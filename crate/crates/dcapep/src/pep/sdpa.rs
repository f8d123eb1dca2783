//! Sparse SDPA export/import of built PEPs.
//!
//! The numeric payload is a standard SDPA sparse (".dat-s") problem with two
//! blocks: block 1 is the Gram (PSD) block; block 2 is one diagonal block
//! holding the inequality slacks followed by the scalar variables split as
//! v = v+ - v- (the usual free-variable encoding for this format). Reading
//! the file as a plain SDPA problem therefore gives an SDP equivalent to the
//! PEP. The structural metadata needed to reassemble the `PepProblem`
//! losslessly (spec, names, row labels and senses, build notes) rides in
//! `*PEPMETA` comment lines, which standard SDPA readers skip.
//!
//! Floats are printed in Rust's shortest round-trip form, so
//! `import(export(p)) == p` exactly and exports are byte-deterministic.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{PepKind, PepProblem, PepRow, PepSpec};
use crate::error::{Error, Result};
use crate::params::{FunctionClassParams, Smoothness};
use crate::sdpsolve::RowSense;

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

/// Serializes a problem to SDPA sparse text.
pub fn export_sdpa(problem: &PepProblem) -> String {
    let mut out = String::new();
    let spec = &problem.spec;
    out.push_str("*PEPMETA v1\n");
    let mut spec_line = format!(
        "*PEPMETA spec kind={} n={} delta={} mu1={} l1={} mu2={} l2={}",
        spec.kind.tag(),
        spec.n,
        fmt_f(spec.delta),
        fmt_f(spec.params1.mu),
        spec.params1.l,
        fmt_f(spec.params2.mu),
        spec.params2.l,
    );
    if let Some(eta) = spec.eta {
        let _ = write!(spec_line, " eta={}", fmt_f(eta));
    }
    out.push_str(&spec_line);
    out.push('\n');
    let _ = writeln!(out, "*PEPMETA vectors {}", problem.vector_names.join(","));
    let _ = writeln!(out, "*PEPMETA scalars {}", problem.scalar_names.join(","));
    for row in &problem.rows {
        let s = match row.sense {
            RowSense::Le => "le",
            RowSense::Eq => "eq",
        };
        let _ = writeln!(out, "*PEPMETA row {};{};{}", row.label, s, fmt_f(row.rhs));
    }
    for note in &problem.build_notes {
        let _ = writeln!(out, "*PEPMETA note {note}");
    }

    let d = problem.gram_dim;
    let p = problem.scalar_names.len();
    let n_ineq = problem.n_inequalities();
    let q = n_ineq + 2 * p;
    let m = problem.rows.len();
    let _ = writeln!(out, "{m} 2 {d} -{q}");
    let rhs_line: Vec<String> = problem.rows.iter().map(|r| fmt_f(r.rhs)).collect();
    out.push_str(&rhs_line.join(" "));
    out.push('\n');

    // objective F0 (maximized): scalar coefficients on the split pairs
    for (j, &c) in problem.objective.iter().enumerate() {
        if c != 0.0 {
            let pos = n_ineq + 2 * j + 1;
            let _ = writeln!(out, "0 2 {pos} {pos} {}", fmt_f(c));
            let _ = writeln!(out, "0 2 {} {} {}", pos + 1, pos + 1, fmt_f(-c));
        }
    }
    // constraint matrices F_k
    let mut slack = 0usize;
    for (k, row) in problem.rows.iter().enumerate() {
        let matno = k + 1;
        for i in 0..d {
            for j in i..d {
                let v = row.gram[(i, j)];
                if v != 0.0 {
                    let _ = writeln!(out, "{matno} 1 {} {} {}", i + 1, j + 1, fmt_f(v));
                }
            }
        }
        if row.sense == RowSense::Le {
            slack += 1;
            let _ = writeln!(out, "{matno} 2 {slack} {slack} 1");
        }
        for (j, &c) in row.scalars.iter().enumerate() {
            if c != 0.0 {
                let pos = n_ineq + 2 * j + 1;
                let _ = writeln!(out, "{matno} 2 {pos} {pos} {}", fmt_f(c));
                let _ = writeln!(out, "{matno} 2 {} {} {}", pos + 1, pos + 1, fmt_f(-c));
            }
        }
    }
    out
}

fn parse_f(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad float {s:?}")))
}

fn parse_spec_line(line: &str) -> Result<PepSpec> {
    let mut kind = None;
    let mut n = None;
    let mut delta = None;
    let mut mu1 = None;
    let mut l1 = None;
    let mut mu2 = None;
    let mut l2 = None;
    let mut eta = None;
    for tok in line.split_whitespace() {
        let Some((key, val)) = tok.split_once('=') else {
            continue;
        };
        match key {
            "kind" => kind = Some(PepKind::from_tag(val)?),
            "n" => {
                n = Some(val.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("bad n {val:?}"))
                })?)
            }
            "delta" => delta = Some(parse_f(val)?),
            "mu1" => mu1 = Some(parse_f(val)?),
            "l1" => l1 = Some(val.parse::<Smoothness>()?),
            "mu2" => mu2 = Some(parse_f(val)?),
            "l2" => l2 = Some(val.parse::<Smoothness>()?),
            "eta" => eta = Some(parse_f(val)?),
            _ => {}
        }
    }
    let missing = || Error::Parse("incomplete PEPMETA spec line".into());
    let spec = PepSpec {
        kind: kind.ok_or_else(missing)?,
        params1: FunctionClassParams::new(mu1.ok_or_else(missing)?, l1.ok_or_else(missing)?)?,
        params2: FunctionClassParams::new(mu2.ok_or_else(missing)?, l2.ok_or_else(missing)?)?,
        n: n.ok_or_else(missing)?,
        delta: delta.ok_or_else(missing)?,
        eta,
    };
    Ok(spec)
}

/// Reassembles a problem from text produced by [`export_sdpa`].
pub fn import_sdpa(text: &str) -> Result<PepProblem> {
    let mut spec = None;
    let mut vector_names: Vec<String> = Vec::new();
    let mut scalar_names: Vec<String> = Vec::new();
    let mut row_meta: Vec<(String, RowSense, f64)> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut header: Option<(usize, usize, usize)> = None; // m, d, q
    let mut entries: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix("*PEPMETA") {
            let meta = meta.trim();
            if let Some(rest) = meta.strip_prefix("spec ") {
                spec = Some(parse_spec_line(rest)?);
            } else if let Some(rest) = meta.strip_prefix("vectors ") {
                vector_names = rest.split(',').map(str::to_string).collect();
            } else if let Some(rest) = meta.strip_prefix("scalars ") {
                scalar_names = rest.split(',').map(str::to_string).collect();
            } else if let Some(rest) = meta.strip_prefix("row ") {
                let parts: Vec<&str> = rest.splitn(3, ';').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("bad row meta {rest:?}")));
                }
                let sense = match parts[1] {
                    "le" => RowSense::Le,
                    "eq" => RowSense::Eq,
                    other => return Err(Error::Parse(format!("bad sense {other:?}"))),
                };
                row_meta.push((parts[0].to_string(), sense, parse_f(parts[2])?));
            } else if let Some(rest) = meta.strip_prefix("note ") {
                notes.push(rest.to_string());
            }
            continue;
        }
        if line.starts_with('*') || line.starts_with('"') {
            continue; // ordinary SDPA comment
        }
        if header.is_none() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 4 {
                return Err(Error::Parse(format!("bad SDPA header {line:?}")));
            }
            let m: usize = toks[0]
                .parse()
                .map_err(|_| Error::Parse("bad mDIM".into()))?;
            let nblock: usize = toks[1]
                .parse()
                .map_err(|_| Error::Parse("bad nBLOCK".into()))?;
            if nblock != 2 {
                return Err(Error::Parse(format!(
                    "expected 2 blocks (Gram + diagonal), found {nblock}"
                )));
            }
            let d: usize = toks[2]
                .parse()
                .map_err(|_| Error::Parse("bad block 1 size".into()))?;
            let q: i64 = toks[3]
                .parse()
                .map_err(|_| Error::Parse("bad block 2 size".into()))?;
            header = Some((m, d, q.unsigned_abs() as usize));
            continue;
        }
        if rhs.is_empty() {
            for tok in line.split_whitespace() {
                rhs.push(parse_f(tok)?);
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::Parse(format!("bad entry line {line:?}")));
        }
        entries.push((
            toks[0].parse().map_err(|_| Error::Parse("bad matno".into()))?,
            toks[1].parse().map_err(|_| Error::Parse("bad blkno".into()))?,
            toks[2].parse().map_err(|_| Error::Parse("bad i".into()))?,
            toks[3].parse().map_err(|_| Error::Parse("bad j".into()))?,
            parse_f(toks[4])?,
        ));
    }

    let spec = spec.ok_or_else(|| {
        Error::Parse("missing PEPMETA spec line (file not produced by export_sdpa?)".into())
    })?;
    let (m, d, _q) = header.ok_or_else(|| Error::Parse("missing SDPA header".into()))?;
    if row_meta.len() != m {
        return Err(Error::Parse(format!(
            "row metadata count {} does not match mDIM {m}",
            row_meta.len()
        )));
    }
    if rhs.len() != m {
        return Err(Error::Parse(format!(
            "rhs count {} does not match mDIM {m}",
            rhs.len()
        )));
    }
    let p = scalar_names.len();
    let n_ineq = row_meta.iter().filter(|(_, s, _)| *s == RowSense::Le).count();

    let mut rows: Vec<PepRow> = row_meta
        .iter()
        .zip(&rhs)
        .map(|((label, sense, meta_rhs), &line_rhs)| {
            if (meta_rhs - line_rhs).abs() > 0.0 {
                return Err(Error::Parse(format!(
                    "rhs mismatch on row {label}: meta {meta_rhs} vs c-line {line_rhs}"
                )));
            }
            Ok(PepRow {
                label: label.clone(),
                gram: DMatrix::zeros(d, d),
                scalars: vec![0.0; p],
                sense: *sense,
                rhs: *meta_rhs,
            })
        })
        .collect::<Result<_>>()?;
    let mut objective = vec![0.0; p];

    let scalar_slot = |pos: usize| -> Option<(usize, bool)> {
        // diagonal slots are 1-based: slacks first, then (v+, v-) pairs
        if pos <= n_ineq {
            return None;
        }
        let off = pos - n_ineq - 1;
        Some((off / 2, off.is_multiple_of(2)))
    };

    for (matno, blkno, i, j, v) in entries {
        if matno > m {
            return Err(Error::Parse(format!("matno {matno} out of range")));
        }
        match blkno {
            1 => {
                if matno == 0 {
                    // objective has no Gram part in these problems
                    if v != 0.0 {
                        return Err(Error::Parse(
                            "unexpected Gram entry in the objective".into(),
                        ));
                    }
                } else {
                    let r = &mut rows[matno - 1];
                    r.gram[(i - 1, j - 1)] = v;
                    r.gram[(j - 1, i - 1)] = v;
                }
            }
            2 => {
                let Some((idx, positive)) = scalar_slot(i) else {
                    continue; // slack entry, re-derived from the sense
                };
                if i != j {
                    return Err(Error::Parse("off-diagonal entry in diagonal block".into()));
                }
                if !positive {
                    continue; // v- mirrors v+
                }
                if idx >= p {
                    return Err(Error::Parse(format!("scalar slot {i} out of range")));
                }
                if matno == 0 {
                    objective[idx] = v;
                } else {
                    rows[matno - 1].scalars[idx] = v;
                }
            }
            other => return Err(Error::Parse(format!("unexpected block {other}"))),
        }
    }

    Ok(PepProblem {
        spec,
        gram_dim: d,
        vector_names,
        scalar_names,
        rows,
        objective,
        build_notes: notes,
    })
}
