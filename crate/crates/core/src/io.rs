//! CSV readers and writers for step functions (`t,v1,..,vd`), time series
//! (`idx,x1,..,xd`) and point measures (`t,m1,..,md`).
//!
//! Floats are written in Rust's shortest round-trip form, so a write/read
//! cycle reproduces every binary64 value exactly.

use std::io::{Read, Write};

use crate::cadlag::StepFunction;
use crate::error::{invalid, Result};
use crate::extremal::PointMeasure;
use crate::models::TimeSeries;

fn header(first: &str, prefix: &str, d: usize) -> Vec<String> {
    std::iter::once(first.to_string()).chain((1..=d).map(|k| format!("{prefix}{k}"))).collect()
}

/// Parses the rows of a CSV whose header is `first,{prefix}1..{prefix}d`.
fn read_rows<R: Read>(input: R, first: &str, prefix: &str) -> Result<(usize, Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let head = rdr.headers()?.clone();
    let d = head.len().saturating_sub(1);
    if d == 0 || head.iter().collect::<Vec<_>>() != header(first, prefix, d) {
        return Err(invalid(format!(
            "expected header `{first},{prefix}1,..,{prefix}d`, got `{}`",
            head.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut keys, mut values) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| invalid(format!("row {}: `{s}` is not a number", line + 1)))
        };
        keys.push(parse(&rec[0])?);
        for field in rec.iter().skip(1) {
            values.push(parse(field)?);
        }
    }
    Ok((d, keys, values))
}

fn write_rows<W: Write>(out: W, head: Vec<String>, keys: impl Iterator<Item = String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&head)?;
    for (k, row) in keys.zip(rows) {
        w.write_record(std::iter::once(k).chain(row.iter().map(f64::to_string)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_step_function<W: Write>(f: &StepFunction, out: W) -> Result<()> {
    write_rows(
        out,
        header("t", "v", f.dim()),
        f.breakpoints().iter().map(f64::to_string),
        f.plateaus().map(<[f64]>::to_vec),
    )
}

pub fn read_step_function<R: Read>(input: R) -> Result<StepFunction> {
    let (d, bps, vals) = read_rows(input, "t", "v")?;
    StepFunction::from_flat(d, bps, vals)
}

/// Rows are numbered from 1.
pub fn write_time_series<W: Write>(ts: &TimeSeries, out: W) -> Result<()> {
    write_rows(
        out,
        header("idx", "x", ts.dim()),
        (1..=ts.len()).map(|i| i.to_string()),
        ts.rows().map(<[f64]>::to_vec),
    )
}

pub fn read_time_series<R: Read>(input: R) -> Result<TimeSeries> {
    let (d, idx, vals) = read_rows(input, "idx", "x")?;
    if idx.iter().enumerate().any(|(i, &k)| k != (i + 1) as f64) {
        return Err(invalid("idx column must count 1, 2, 3, .."));
    }
    TimeSeries::from_flat(d, vals)
}

pub fn write_point_measure<W: Write>(pm: &PointMeasure, out: W) -> Result<()> {
    write_rows(
        out,
        header("t", "m", pm.dim()),
        pm.points().map(|(t, _)| t.to_string()),
        pm.points().map(|(_, m)| m.to_vec()),
    )
}

pub fn read_point_measure<R: Read>(input: R) -> Result<PointMeasure> {
    let (d, times, marks) = read_rows(input, "t", "m")?;
    let mut pm = PointMeasure::empty(d);
    for (i, &t) in times.iter().enumerate() {
        pm.push(t, &marks[i * d..(i + 1) * d])?;
    }
    Ok(pm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_function_round_trip() {
        let f = StepFunction::new(2, vec![0.0, 0.1, 1.0 / 3.0], vec![vec![0.0, 1.0], vec![0.1 + 0.2, 1.0], vec![1e-300, 7.0]]).unwrap();
        let mut buf = Vec::new();
        write_step_function(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,v1,v2\n0,0,1\n"));
        assert_eq!(read_step_function(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn time_series_round_trip() {
        let ts = TimeSeries::from_rows(2, &[vec![1.5, -2.0], vec![std::f64::consts::PI, 0.0]]).unwrap();
        let mut buf = Vec::new();
        write_time_series(&ts, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("idx,x1,x2\n1,1.5,-2\n"));
        assert_eq!(read_time_series(buf.as_slice()).unwrap(), ts);
    }

    #[test]
    fn point_measure_round_trip() {
        let pm = PointMeasure::from_points(1, &[(0.25, vec![3.0]), (0.75, vec![0.1])]).unwrap();
        let mut buf = Vec::new();
        write_point_measure(&pm, &mut buf).unwrap();
        assert_eq!(read_point_measure(buf.as_slice()).unwrap(), pm);
    }

    #[test]
    fn bad_headers_and_cells() {
        assert!(read_step_function("x,v1\n0,1\n".as_bytes()).is_err());
        assert!(read_step_function("t,v1\n0,abc\n".as_bytes()).is_err());
        assert!(read_time_series("idx,x1\n2,1\n".as_bytes()).is_err());
        assert!(read_step_function("t,v1\n0,1\n0.5,-1\n".as_bytes()).is_err());
    }
}
