//! CSV ingestion and serialization.
//!
//! Readers: edge lists (`source,target,weight`), square adjacency matrices
//! (first row column labels, first column row labels, optional element-wise
//! aggregation across files), group partitions (`node,group`), and profiles
//! written by [`write_profile`]. Writers emit deterministic bytes: stable
//! row order, numbers at 12 significant digits, `\n` line endings.

use crate::brokerage::{role_denominator, BrokerageProfile, ProfileEntry, Role};
use crate::graph::{EdgeRecord, GroupPartition, WeightedDigraph};
use crate::stats::{ComparisonReport, Correlation, EcdfCurve};
use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Malformed {
        path: String,
        line: u64,
        message: String,
    },
    #[error("{path}: missing or wrong header: expected \"{expected}\"")]
    MissingHeader { path: String, expected: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: display(path),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> IoError + '_ {
    move |e| match e.position() {
        Some(pos) => IoError::Malformed {
            path: display(path),
            line: pos.line(),
            message: e.to_string(),
        },
        None => match e.into_kind() {
            csv::ErrorKind::Io(source) => IoError::Io {
                path: display(path),
                source,
            },
            other => IoError::Invalid {
                path: display(path),
                message: format!("{other:?}"),
            },
        },
    }
}

/// Shape of an edge-list CSV.
#[derive(Debug, Clone)]
pub struct EdgeListFormat {
    pub delimiter: u8,
    /// Expect (and validate) a `source,target,weight` header row.
    pub has_header: bool,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat {
            delimiter: b',',
            has_header: true,
        }
    }
}

const EDGE_HEADER: [&str; 3] = ["source", "target", "weight"];
const PARTITION_HEADER: [&str; 2] = ["node", "group"];
const PROFILE_HEADER: [&str; 12] = [
    "node",
    "group",
    "coordinator_count",
    "gatekeeper_count",
    "representative_count",
    "itinerant_count",
    "liaison_count",
    "coordinator_norm",
    "gatekeeper_norm",
    "representative_norm",
    "itinerant_norm",
    "liaison_norm",
];

fn reader(path: &Path, delimiter: u8) -> Result<csv::Reader<std::fs::File>, IoError> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .from_path(path)
        .map_err(csv_err(path))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, csv::Position::line)
}

fn check_header(
    record: &csv::StringRecord,
    expected: &[&str],
    path: &Path,
) -> Result<(), IoError> {
    let matches =
        record.len() == expected.len() && record.iter().zip(expected).all(|(a, &b)| a.trim() == b);
    if matches {
        Ok(())
    } else {
        Err(IoError::MissingHeader {
            path: display(path),
            expected: expected.join(","),
        })
    }
}

fn malformed(path: &Path, line: u64, message: impl Into<String>) -> IoError {
    IoError::Malformed {
        path: display(path),
        line,
        message: message.into(),
    }
}

/// Reads an edge list, preserving file order. Weights must parse as strictly
/// positive finite numbers; structural validation beyond that happens in
/// [`crate::graph::build_graph`].
pub fn read_edge_list(
    path: impl AsRef<Path>,
    format: &EdgeListFormat,
) -> Result<Vec<EdgeRecord>, IoError> {
    let path = path.as_ref();
    let mut rdr = reader(path, format.delimiter)?;
    let mut records = Vec::new();
    let mut saw_header = !format.has_header;
    for result in rdr.records() {
        let record = result.map_err(csv_err(path))?;
        if !saw_header {
            check_header(&record, &EDGE_HEADER, path)?;
            saw_header = true;
            continue;
        }
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(malformed(
                path,
                line,
                format!("expected 3 fields (source,target,weight), got {}", record.len()),
            ));
        }
        let (source, target, raw) = (&record[0], &record[1], record[2].trim());
        if source.is_empty() || target.is_empty() {
            return Err(malformed(path, line, "empty node label"));
        }
        let weight: f64 = raw
            .parse()
            .map_err(|_| malformed(path, line, format!("weight is not a number: {raw:?}")))?;
        if !weight.is_finite() || weight <= 0.0 {
            return Err(malformed(
                path,
                line,
                format!("weight must be a positive finite number, got {raw}"),
            ));
        }
        records.push(EdgeRecord::new(source, target, weight));
    }
    if !saw_header {
        return Err(IoError::MissingHeader {
            path: display(path),
            expected: EDGE_HEADER.join(","),
        });
    }
    Ok(records)
}

/// One or more square adjacency matrices with shared labels.
#[derive(Debug, Clone)]
pub struct MatrixInput {
    pub paths: Vec<PathBuf>,
    /// Sum matrices element-wise (sector aggregation). Required when more
    /// than one path is given.
    pub aggregate: bool,
    pub drop_self_loops: bool,
}

struct LabeledMatrix {
    labels: Vec<String>,
    cells: Vec<Vec<f64>>,
}

fn read_matrix(path: &Path) -> Result<LabeledMatrix, IoError> {
    let mut rdr = reader(path, b',')?;
    let mut rows = rdr.records();
    let header = match rows.next() {
        Some(r) => r.map_err(csv_err(path))?,
        None => {
            return Err(IoError::Invalid {
                path: display(path),
                message: "empty matrix file".into(),
            })
        }
    };
    // The corner cell above the row-label column may be present or absent.
    let mut data: Vec<csv::StringRecord> = Vec::new();
    for r in rows {
        data.push(r.map_err(csv_err(path))?);
    }
    if data.is_empty() {
        return Err(IoError::Invalid {
            path: display(path),
            message: "matrix has no data rows".into(),
        });
    }
    let row_width = data[0].len();
    let labels: Vec<String> = if header.len() == row_width {
        header.iter().skip(1).map(str::to_string).collect()
    } else if header.len() + 1 == row_width {
        header.iter().map(str::to_string).collect()
    } else {
        return Err(malformed(
            path,
            record_line(&data[0]),
            format!(
                "row has {} fields but header has {} column labels",
                row_width,
                header.len()
            ),
        ));
    };
    let n = labels.len();
    if data.len() != n {
        return Err(IoError::Invalid {
            path: display(path),
            message: format!("matrix is not square: {n} columns but {} rows", data.len()),
        });
    }
    if labels.iter().collect::<HashSet<_>>().len() != n {
        return Err(IoError::Invalid {
            path: display(path),
            message: "duplicate labels in header".into(),
        });
    }

    let mut cells = Vec::with_capacity(n);
    for (i, record) in data.iter().enumerate() {
        let line = record_line(record);
        if record.len() != n + 1 {
            return Err(malformed(
                path,
                line,
                format!("expected {} fields, got {}", n + 1, record.len()),
            ));
        }
        let row_label = &record[0];
        if row_label != labels[i] {
            return Err(malformed(
                path,
                line,
                format!(
                    "row label {row_label:?} does not match column label {:?} at position {}",
                    labels[i], i
                ),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let raw = record[j + 1].trim();
            let value: f64 = raw.parse().map_err(|_| {
                malformed(path, line, format!("entry is not a number: {raw:?}"))
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(malformed(
                    path,
                    line,
                    format!("entry must be finite and non-negative, got {raw}"),
                ));
            }
            row.push(value);
        }
        cells.push(row);
    }
    Ok(LabeledMatrix { labels, cells })
}

/// Reads adjacency matrices into edge records: entry `(r, s) > 0` becomes an
/// edge `r -> s` with that weight. Multiple files are summed element-wise
/// when `aggregate` is set.
pub fn read_adjacency_matrices(input: &MatrixInput) -> Result<Vec<EdgeRecord>, IoError> {
    let first_path = match input.paths.first() {
        Some(p) => p,
        None => {
            return Err(IoError::Invalid {
                path: "<matrix input>".into(),
                message: "no matrix files given".into(),
            })
        }
    };
    if input.paths.len() > 1 && !input.aggregate {
        return Err(IoError::Invalid {
            path: display(first_path),
            message: "multiple matrices given without aggregate".into(),
        });
    }

    let mut acc = read_matrix(first_path)?;
    for path in &input.paths[1..] {
        let next = read_matrix(path)?;
        if next.labels != acc.labels {
            return Err(IoError::Invalid {
                path: display(path),
                message: format!(
                    "labels do not match {} (dimension {} vs {})",
                    display(first_path),
                    next.labels.len(),
                    acc.labels.len()
                ),
            });
        }
        for (acc_row, next_row) in acc.cells.iter_mut().zip(&next.cells) {
            for (a, b) in acc_row.iter_mut().zip(next_row) {
                *a += b;
            }
        }
    }

    let n = acc.labels.len();
    let mut records = Vec::new();
    for r in 0..n {
        for s in 0..n {
            let w = acc.cells[r][s];
            if w <= 0.0 {
                continue;
            }
            if r == s {
                if input.drop_self_loops {
                    continue;
                }
                return Err(IoError::Invalid {
                    path: display(first_path),
                    message: format!(
                        "diagonal entry {w} at label {:?}; pass drop_self_loops to discard self-loops",
                        acc.labels[r]
                    ),
                });
            }
            records.push(EdgeRecord::new(
                acc.labels[r].clone(),
                acc.labels[s].clone(),
                w,
            ));
        }
    }
    Ok(records)
}

/// Reads a `node,group` partition file. Duplicate nodes and empty fields are
/// rejected with their line number.
pub fn read_partition(path: impl AsRef<Path>) -> Result<GroupPartition, IoError> {
    let path = path.as_ref();
    let mut rdr = reader(path, b',')?;
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut saw_header = false;
    for result in rdr.records() {
        let record = result.map_err(csv_err(path))?;
        if !saw_header {
            check_header(&record, &PARTITION_HEADER, path)?;
            saw_header = true;
            continue;
        }
        let line = record_line(&record);
        if record.len() != 2 {
            return Err(malformed(
                path,
                line,
                format!("expected 2 fields (node,group), got {}", record.len()),
            ));
        }
        let (node, group) = (&record[0], &record[1]);
        if node.is_empty() {
            return Err(malformed(path, line, "empty node field"));
        }
        if group.is_empty() {
            return Err(malformed(path, line, "empty group field"));
        }
        if !seen.insert(node.to_string()) {
            return Err(malformed(path, line, format!("duplicate node {node:?}")));
        }
        pairs.push((node.to_string(), group.to_string()));
    }
    if !saw_header {
        return Err(IoError::MissingHeader {
            path: display(path),
            expected: PARTITION_HEADER.join(","),
        });
    }
    GroupPartition::from_pairs(pairs).map_err(|e| IoError::Invalid {
        path: display(path),
        message: e.to_string(),
    })
}

/// Writes a profile as CSV, one row per node in label order, normalized
/// scores at 12 significant digits.
pub fn write_profile(profile: &BrokerageProfile, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path).map_err(csv_err(path))?;
    wtr.write_record(PROFILE_HEADER).map_err(csv_err(path))?;
    for e in &profile.entries {
        let mut row: Vec<String> = vec![e.node.clone(), e.group.clone()];
        row.extend(e.counts.iter().map(u64::to_string));
        row.extend(e.normalized.iter().map(|&v| format_g12(v)));
        wtr.write_record(&row).map_err(csv_err(path))?;
    }
    wtr.flush().map_err(io_err(path))
}

/// Reads a profile written by [`write_profile`]. Role denominators are not
/// serialized; they are recomputed from the group column (they depend only
/// on group sizes).
pub fn read_profile(path: impl AsRef<Path>) -> Result<BrokerageProfile, IoError> {
    let path = path.as_ref();
    let mut rdr = reader(path, b',')?;
    let mut saw_header = false;
    let mut rows: Vec<(String, String, [u64; 5], [f64; 5])> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for result in rdr.records() {
        let record = result.map_err(csv_err(path))?;
        if !saw_header {
            check_header(&record, &PROFILE_HEADER, path)?;
            saw_header = true;
            continue;
        }
        let line = record_line(&record);
        if record.len() != PROFILE_HEADER.len() {
            return Err(malformed(
                path,
                line,
                format!(
                    "expected {} fields, got {}",
                    PROFILE_HEADER.len(),
                    record.len()
                ),
            ));
        }
        let node = record[0].to_string();
        let group = record[1].to_string();
        if node.is_empty() || group.is_empty() {
            return Err(malformed(path, line, "empty node or group field"));
        }
        if !seen.insert(node.clone()) {
            return Err(malformed(path, line, format!("duplicate node {node:?}")));
        }
        let mut counts = [0u64; 5];
        for (i, slot) in counts.iter_mut().enumerate() {
            let raw = record[2 + i].trim();
            *slot = raw.parse().map_err(|_| {
                malformed(path, line, format!("count is not an integer: {raw:?}"))
            })?;
        }
        let mut normalized = [0.0f64; 5];
        for (i, slot) in normalized.iter_mut().enumerate() {
            let raw = record[7 + i].trim();
            let v: f64 = raw.parse().map_err(|_| {
                malformed(path, line, format!("score is not a number: {raw:?}"))
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(malformed(
                    path,
                    line,
                    format!("normalized score out of [0,1]: {raw}"),
                ));
            }
            *slot = v;
        }
        rows.push((node, group, counts, normalized));
    }
    if !saw_header {
        return Err(IoError::MissingHeader {
            path: display(path),
            expected: PROFILE_HEADER.join(","),
        });
    }
    if rows.is_empty() {
        return Err(IoError::Invalid {
            path: display(path),
            message: "profile has no data rows".into(),
        });
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));

    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    for (_, group, _, _) in &rows {
        *sizes.entry(group.clone()).or_insert(0) += 1;
    }
    let entries = rows
        .into_iter()
        .map(|(node, group, counts, normalized)| {
            let mut denominators = [0u64; 5];
            for role in Role::ALL {
                denominators[role as usize] =
                    role_denominator(role, &group, &sizes).expect("group is present in sizes");
            }
            ProfileEntry {
                node,
                group,
                counts,
                denominators,
                normalized,
            }
        })
        .collect();
    Ok(BrokerageProfile { entries })
}

fn correlation_fields(c: &Option<Correlation>, n: usize) -> [String; 3] {
    match c {
        Some(c) => [format_g12(c.coefficient), format_g12(c.p_value), c.n.to_string()],
        None => ["NA".into(), "NA".into(), n.to_string()],
    }
}

/// Writes a comparison report: a correlation section
/// (`role,kind,coefficient,p_value,n`, undefined values as `NA`) followed by
/// a `topdiff` section (`role,rank,node,score_a,score_b,abs_diff`).
pub fn write_report(report: &ComparisonReport, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut wtr = csv::WriterBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(csv_err(path))?;
    wtr.write_record(["role", "kind", "coefficient", "p_value", "n"])
        .map_err(csv_err(path))?;
    for rc in &report.roles {
        for (kind, c) in [("pearson", &rc.pearson), ("spearman", &rc.spearman)] {
            let [coeff, p, n] = correlation_fields(c, report.node_count);
            wtr.write_record([rc.role.as_str(), kind, &coeff, &p, &n])
                .map_err(csv_err(path))?;
        }
    }
    wtr.write_record(["topdiff"]).map_err(csv_err(path))?;
    wtr.write_record(["role", "rank", "node", "score_a", "score_b", "abs_diff"])
        .map_err(csv_err(path))?;
    for rc in &report.roles {
        for (rank, d) in rc.top_diff.iter().enumerate() {
            wtr.write_record([
                rc.role.as_str(),
                &(rank + 1).to_string(),
                &d.node,
                &format_g12(d.score_a),
                &format_g12(d.score_b),
                &format_g12(d.abs_diff),
            ])
            .map_err(csv_err(path))?;
        }
    }
    wtr.flush().map_err(io_err(path))
}

/// An ECDF tagged with the role and method (input label) it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfSeries {
    pub role: Role,
    pub method: String,
    pub curve: EcdfCurve,
}

/// Writes ECDF step points as `role,method,value,cum_fraction` rows, in the
/// order given.
pub fn write_ecdf(series: &[EcdfSeries], path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path).map_err(csv_err(path))?;
    wtr.write_record(["role", "method", "value", "cum_fraction"])
        .map_err(csv_err(path))?;
    for s in series {
        for p in &s.curve.points {
            wtr.write_record([
                s.role.as_str(),
                &s.method,
                &format_g12(p.value),
                &format_g12(p.fraction),
            ])
            .map_err(csv_err(path))?;
        }
    }
    wtr.flush().map_err(io_err(path))
}

/// Writes a graph as an edge list readable by [`read_edge_list`], edges in
/// label order.
pub fn write_edge_list(g: &WeightedDigraph, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut wtr = csv::Writer::from_path(path).map_err(csv_err(path))?;
    wtr.write_record(EDGE_HEADER).map_err(csv_err(path))?;
    for (q, s, w) in g.edges() {
        wtr.write_record([g.label(q), g.label(s), &format_g12(w)])
            .map_err(csv_err(path))?;
    }
    wtr.flush().map_err(io_err(path))
}

/// Formats with 12 significant digits, printf `%.12g` style: fixed notation
/// for exponents in [-4, 12), scientific otherwise, trailing zeros trimmed.
pub fn format_g12(x: f64) -> String {
    format_sig(x, 12)
}

fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (_, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("numeric exponent");
    if (-4..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (mantissa, _) = sci.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brokerage::{count_roles, normalize, BrokerageMode};
    use crate::graph::{attach_partition, build_graph};
    use crate::stats::{compare_profiles, ecdf};
    use std::fs;
    use tempfile::tempdir;

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(-0.0), "0");
        assert_eq!(format_g12(0.55), "0.55");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(-2.5), "-2.5");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(123456.789), "123456.789");
        assert_eq!(format_g12(0.0001), "0.0001");
        assert_eq!(format_g12(1e-5), "1e-5");
        assert_eq!(format_g12(3.25e-13), "3.25e-13");
        assert_eq!(format_g12(1e15), "1e15");
        assert_eq!(format_g12(0.9999999999999), "1"); // rounds up at 12 digits
    }

    #[test]
    fn g12_reparse_is_idempotent() {
        for &x in &[0.55, 1.0 / 3.0, 2.0 / 7.0, 1e-7, 123.456_789_012_345, 0.41] {
            let once = format_g12(x);
            let back: f64 = once.parse().unwrap();
            assert_eq!(format_g12(back), once, "x = {x}");
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        fs::write(&path, "source,target,weight\nA,B,2.5\n").unwrap();
        let records = read_edge_list(&path, &EdgeListFormat::default()).unwrap();
        assert_eq!(records, vec![EdgeRecord::new("A", "B", 2.5)]);

        let g = build_graph(records, false).unwrap();
        let out = dir.path().join("out.csv");
        write_edge_list(&g, &out).unwrap();
        let again = read_edge_list(&out, &EdgeListFormat::default()).unwrap();
        assert_eq!(again, vec![EdgeRecord::new("A", "B", 2.5)]);
    }

    #[test]
    fn edge_list_header_only_is_empty() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        fs::write(&path, "source,target,weight\n").unwrap();
        assert!(read_edge_list(&path, &EdgeListFormat::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        fs::write(&path, "source,target,weight\nA,B,abc\n").unwrap();
        match read_edge_list(&path, &EdgeListFormat::default()).unwrap_err() {
            IoError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }

        fs::write(&path, "source,target,weight\nA,B,1.0\nA,C,-3\n").unwrap();
        match read_edge_list(&path, &EdgeListFormat::default()).unwrap_err() {
            IoError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error: {other}"),
        }

        fs::write(&path, "src,dst,w\nA,B,1.0\n").unwrap();
        assert!(matches!(
            read_edge_list(&path, &EdgeListFormat::default()).unwrap_err(),
            IoError::MissingHeader { .. }
        ));
    }

    #[test]
    fn edge_list_custom_delimiter_no_header() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("edges.tsv");
        fs::write(&path, "A\tB\t1.5\nB\tC\t2\n").unwrap();
        let fmt = EdgeListFormat {
            delimiter: b'\t',
            has_header: false,
        };
        assert_eq!(read_edge_list(&path, &fmt).unwrap().len(), 2);
    }

    #[test]
    fn matrix_single_file() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, ",A,B\nA,0,3\nB,1,0\n").unwrap();
        let records = read_adjacency_matrices(&MatrixInput {
            paths: vec![path],
            aggregate: false,
            drop_self_loops: false,
        })
        .unwrap();
        assert_eq!(
            records,
            vec![EdgeRecord::new("A", "B", 3.0), EdgeRecord::new("B", "A", 1.0)]
        );
    }

    #[test]
    fn matrix_aggregation_sums_element_wise() {
        let dir = tempdir().unwrap();
        let p1 = dir.path().join("m1.csv");
        let p2 = dir.path().join("m2.csv");
        fs::write(&p1, ",A,B\nA,0,1\nB,0,0\n").unwrap();
        fs::write(&p2, ",A,B\nA,0,2\nB,0,0\n").unwrap();
        let records = read_adjacency_matrices(&MatrixInput {
            paths: vec![p1.clone(), p2.clone()],
            aggregate: true,
            drop_self_loops: false,
        })
        .unwrap();
        assert_eq!(records, vec![EdgeRecord::new("A", "B", 3.0)]);

        // multiple files without aggregate is refused
        assert!(read_adjacency_matrices(&MatrixInput {
            paths: vec![p1, p2],
            aggregate: false,
            drop_self_loops: false,
        })
        .is_err());
    }

    #[test]
    fn matrix_diagonal_handling() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, ",A,B\nA,5,2\nB,1,0\n").unwrap();
        let records = read_adjacency_matrices(&MatrixInput {
            paths: vec![path.clone()],
            aggregate: false,
            drop_self_loops: true,
        })
        .unwrap();
        assert_eq!(
            records,
            vec![EdgeRecord::new("A", "B", 2.0), EdgeRecord::new("B", "A", 1.0)]
        );
        assert!(matches!(
            read_adjacency_matrices(&MatrixInput {
                paths: vec![path],
                aggregate: false,
                drop_self_loops: false,
            })
            .unwrap_err(),
            IoError::Invalid { .. }
        ));
    }

    #[test]
    fn matrix_rejects_label_mismatch_and_negative_entries() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, ",A,B\nB,0,1\nA,0,0\n").unwrap();
        assert!(read_adjacency_matrices(&MatrixInput {
            paths: vec![path.clone()],
            aggregate: false,
            drop_self_loops: false,
        })
        .is_err());

        fs::write(&path, ",A,B\nA,0,-1\nB,0,0\n").unwrap();
        assert!(read_adjacency_matrices(&MatrixInput {
            paths: vec![path.clone()],
            aggregate: false,
            drop_self_loops: false,
        })
        .is_err());

        let other = dir.path().join("other.csv");
        fs::write(&path, ",A,B\nA,0,1\nB,0,0\n").unwrap();
        fs::write(&other, ",A,C\nA,0,1\nC,0,0\n").unwrap();
        assert!(read_adjacency_matrices(&MatrixInput {
            paths: vec![path, other],
            aggregate: true,
            drop_self_loops: false,
        })
        .is_err());
    }

    #[test]
    fn partition_reading() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("groups.csv");
        fs::write(&path, "node,group\nA,G1\nB,G2\n").unwrap();
        let p = read_partition(&path).unwrap();
        assert_eq!(p.group_of("A"), Some("G1"));
        assert_eq!(p.group_of("B"), Some("G2"));

        fs::write(&path, "node,group\nA,G1\nA,G2\n").unwrap();
        match read_partition(&path).unwrap_err() {
            IoError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error: {other}"),
        }

        fs::write(&path, "node,group\nA,\n").unwrap();
        assert!(matches!(
            read_partition(&path).unwrap_err(),
            IoError::Malformed { line: 2, .. }
        ));
    }

    fn toy_profile() -> BrokerageProfile {
        let g = build_graph(
            [
                EdgeRecord::new("a", "b", 4.0),
                EdgeRecord::new("b", "c", 4.0),
                EdgeRecord::new("c", "a", 2.0),
                EdgeRecord::new("a", "c", 9.0),
            ],
            false,
        )
        .unwrap();
        let p =
            GroupPartition::from_pairs([("a", "G1"), ("b", "G1"), ("c", "G2")]).unwrap();
        let pg = attach_partition(g, &p).unwrap();
        normalize(&count_roles(&pg, BrokerageMode::Weighted), &pg).unwrap()
    }

    #[test]
    fn profile_round_trip_and_determinism() {
        let dir = tempdir().unwrap();
        let profile = toy_profile();
        let p1 = dir.path().join("profile1.csv");
        let p2 = dir.path().join("profile2.csv");
        write_profile(&profile, &p1).unwrap();
        write_profile(&profile, &p2).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());

        let back = read_profile(&p1).unwrap();
        assert_eq!(back, profile);

        // single zero row
        let zero = BrokerageProfile {
            entries: vec![ProfileEntry {
                node: "only".into(),
                group: "G".into(),
                counts: [0; 5],
                denominators: [0; 5],
                normalized: [0.0; 5],
            }],
        };
        let pz = dir.path().join("zero.csv");
        write_profile(&zero, &pz).unwrap();
        let content = fs::read_to_string(&pz).unwrap();
        assert_eq!(content.lines().count(), 2);
        assert_eq!(content.lines().nth(1).unwrap(), "only,G,0,0,0,0,0,0,0,0,0,0");
        assert_eq!(read_profile(&pz).unwrap(), zero);
    }

    #[test]
    fn report_writing_and_na_rendering() {
        let dir = tempdir().unwrap();
        let profile = toy_profile();
        let report = compare_profiles(&profile, &profile, 5).unwrap();
        let path = dir.path().join("report.csv");
        write_report(&report, &path).unwrap();
        let content = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = content.lines().collect();
        assert_eq!(lines[0], "role,kind,coefficient,p_value,n");
        // five roles x two kinds, then the topdiff section
        assert_eq!(lines[11], "topdiff");
        assert_eq!(lines[12], "role,rank,node,score_a,score_b,abs_diff");
        // toy profile has roles with all-zero scores on both sides -> NA
        assert!(content.contains(",NA,NA,"));
        // and at least one defined self-correlation of exactly 1
        assert!(lines[1..11].iter().any(|l| l.contains(",1,")));
    }

    #[test]
    fn ecdf_writing() {
        let dir = tempdir().unwrap();
        let curve = ecdf(&[1.0, 2.0, 2.0, 3.0]).unwrap();
        let path = dir.path().join("ecdf.csv");
        write_ecdf(
            &[EcdfSeries {
                role: Role::Coordinator,
                method: "wngf".into(),
                curve,
            }],
            &path,
        )
        .unwrap();
        let content = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = content.lines().collect();
        assert_eq!(lines[0], "role,method,value,cum_fraction");
        assert_eq!(lines[1], "coordinator,wngf,1,0.25");
        assert_eq!(lines[3], "coordinator,wngf,3,1");
        assert_eq!(lines.len(), 4);
    }
}
