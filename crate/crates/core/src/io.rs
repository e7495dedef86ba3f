//! Dataset file formats.
//!
//! Point CSV: header `id,group,x1,...,xD`, one point per row, UTF-8 with `.`
//! as the decimal separator. Matrix format: line 1 holds `n`, line 2 the `n`
//! comma-separated group labels (1-based), followed by `n` rows of `n`
//! comma-separated distances.

use crate::dataset::{Dataset, Metric, Point};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_group(tok: &str, line: usize) -> Result<usize> {
    let label: usize = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad group label `{tok}`")))?;
    if label == 0 {
        return Err(parse_err(line, "group labels are 1-based"));
    }
    Ok(label - 1)
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad real `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

/// Parse the point-CSV format. The group count is the largest label seen.
pub fn parse_points_csv(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "id" || cols[1] != "group" {
        return Err(parse_err(1, "expected header `id,group,x1,...,xD`"));
    }
    let dims = cols.len() - 2;

    let mut points = Vec::new();
    let mut max_label = 0usize;
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = raw.split(',').collect();
        if toks.len() != dims + 2 {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", dims + 2, toks.len()),
            ));
        }
        let group = parse_group(toks[1], line)?;
        max_label = max_label.max(group + 1);
        let coords = toks[2..]
            .iter()
            .map(|t| parse_real(t, line))
            .collect::<Result<Vec<f64>>>()?;
        points.push(Point {
            id: toks[0].trim().to_string(),
            group,
            coords: Some(coords),
        });
    }
    if points.is_empty() {
        return Err(parse_err(2, "no points"));
    }
    Dataset::euclidean(points, max_label)
}

/// Parse the explicit-matrix format. Point ids are `p1..pn`.
pub fn parse_matrix(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| parse_err(1, format!("bad point count `{}`", first.trim())))?;
    if n == 0 {
        return Err(parse_err(1, "point count must be >= 1"));
    }

    let (gline_idx, gline) = lines.next().ok_or_else(|| parse_err(2, "missing group-label line"))?;
    let labels: Vec<&str> = gline.split(',').collect();
    if labels.len() != n {
        return Err(parse_err(
            gline_idx + 1,
            format!("expected {n} group labels, found {}", labels.len()),
        ));
    }
    let mut max_label = 0usize;
    let mut points = Vec::with_capacity(n);
    for (i, tok) in labels.iter().enumerate() {
        let group = parse_group(tok, gline_idx + 1)?;
        max_label = max_label.max(group + 1);
        points.push(Point {
            id: format!("p{}", i + 1),
            group,
            coords: None,
        });
    }

    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        let (row_idx, row) = lines
            .next()
            .ok_or_else(|| parse_err(gline_idx + 2 + i, format!("missing matrix row {}", i + 1)))?;
        let toks: Vec<&str> = row.split(',').collect();
        if toks.len() != n {
            return Err(parse_err(
                row_idx + 1,
                format!("expected {n} entries in matrix row {}, found {}", i + 1, toks.len()),
            ));
        }
        for (j, tok) in toks.iter().enumerate() {
            matrix[i * n + j] = parse_real(tok, row_idx + 1)?;
        }
    }
    let ds = Dataset::from_matrix(points, matrix, max_label)?;
    // Metric axioms are enforced at load time (the triangle check is
    // skipped with a warning above n = 2000).
    let (violations, _) = crate::dataset::metric_violations(&ds);
    if let Some(v) = violations.first() {
        return Err(Error::InvalidDataset(v.to_string()));
    }
    Ok(ds)
}

/// Serialize a coordinate dataset back to point CSV. Floats print in
/// shortest round-trip form, so output is byte-stable for equal inputs.
pub fn write_points_csv(ds: &Dataset) -> Result<String> {
    let dims = ds.dim().ok_or(Error::ModeMismatch {
        op: "write_points_csv",
        detail: "dataset is matrix-backed".into(),
    })?;
    let mut out = String::from("id,group");
    for d in 1..=dims {
        out.push_str(&format!(",x{d}"));
    }
    out.push('\n');
    for p in ds.points() {
        out.push_str(&format!("{},{}", p.id, p.group + 1));
        for v in p.coords.as_ref().unwrap() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Serialize an explicit-matrix dataset.
pub fn write_matrix(ds: &Dataset) -> Result<String> {
    let n = ds.n();
    match ds.metric() {
        Metric::Matrix(_) => {}
        Metric::Euclidean => {
            return Err(Error::ModeMismatch {
                op: "write_matrix",
                detail: "dataset is coordinate-backed".into(),
            })
        }
    }
    let mut out = format!("{n}\n");
    let labels: Vec<String> = ds.points().iter().map(|p| (p.group + 1).to_string()).collect();
    out.push_str(&labels.join(","));
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| ds.distance(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
