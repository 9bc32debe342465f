//! CSV emission. Numbers are written as `{:.7e}` (eight significant digits)
//! so that a fixed report always produces the same bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{run_traces, SweepConfig, SweepError, SweepReport};
use crate::methods::{IterationTrace, TraceStatus};
use crate::numerics::Complex;

fn num(x: f64) -> String {
    // adding 0.0 turns -0.0 into 0.0
    format!("{:.7e}", x + 0.0)
}

fn header(dim: usize) -> String {
    let mut h = String::from("idx,alpha");
    for k in 1..=dim {
        h.push_str(&format!(",re_{k},im_{k}"));
    }
    h.push_str(",step_norm,grad_norm,p_n,delta_d,delta_t,iters");
    h
}

pub fn write_csv<W: Write>(report: &SweepReport, mut w: W) -> io::Result<()> {
    writeln!(w, "{}", header(report.dim()))?;
    for (i, r) in report.records.iter().enumerate() {
        let mut line = format!("{},{}", i + 1, num(r.alpha.value()));
        for z in r.point.iter() {
            line.push_str(&format!(",{},{}", num(z.re), num(z.im)));
        }
        let p = r.p_n.map(num).unwrap_or_default();
        line.push_str(&format!(
            ",{},{},{p},{},{},{}",
            num(r.step_norm),
            num(r.grad_norm),
            r.delta_d,
            r.delta_t,
            r.iterations
        ));
        writeln!(w, "{line}")?;
    }
    w.flush()
}

pub fn emit_csv(report: &SweepReport, path: &Path) -> Result<(), SweepError> {
    let wrap = |source| SweepError::Output { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(wrap)?;
    write_csv(report, BufWriter::new(file)).map_err(wrap)
}

/// One parsed data row of a sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub idx: usize,
    pub alpha: f64,
    pub point: Vec<Complex>,
    pub step_norm: f64,
    pub grad_norm: f64,
    pub p_n: Option<f64>,
    pub delta_d: i32,
    pub delta_t: i32,
    pub iters: usize,
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>, SweepError> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or(SweepError::Csv { line: 1, reason: "empty file".into() })?;
    let cols: Vec<&str> = head.split(',').collect();
    if cols.len() < 10 || !(cols.len() - 8).is_multiple_of(2) {
        return Err(SweepError::Csv { line: 1, reason: format!("unexpected header {head:?}") });
    }
    let dim = (cols.len() - 8) / 2;
    if head != header(dim) {
        return Err(SweepError::Csv { line: 1, reason: format!("unexpected header {head:?}") });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |reason: String| SweepError::Csv { line: line_no, reason };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != cols.len() {
            return Err(err(format!("expected {} fields, found {}", cols.len(), f.len())));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| err(format!("{s:?}: {e}")));
        let int = |s: &str| s.parse::<i64>().map_err(|e| err(format!("{s:?}: {e}")));
        let point = (0..dim)
            .map(|k| Ok(Complex::new(real(f[2 + 2 * k])?, real(f[3 + 2 * k])?)))
            .collect::<Result<Vec<_>, SweepError>>()?;
        let tail = 2 + 2 * dim;
        rows.push(CsvRow {
            idx: int(f[0])? as usize,
            alpha: real(f[1])?,
            point,
            step_norm: real(f[tail])?,
            grad_norm: real(f[tail + 1])?,
            p_n: if f[tail + 2].is_empty() { None } else { Some(real(f[tail + 2])?) },
            delta_d: int(f[tail + 3])? as i32,
            delta_t: int(f[tail + 4])? as i32,
            iters: int(f[tail + 5])? as usize,
        });
    }
    Ok(rows)
}

/// Writes one block per trace: a `#` annotation line, a header, one row per
/// iterate, then a blank line.
pub fn write_trajectories<W: Write>(traces: &[IterationTrace], mut w: W) -> io::Result<()> {
    for t in traces {
        let dim = t.iterates[0].dim();
        write!(w, "# alpha={} status={} iterations={}", num(t.alpha.value()), t.status, t.iterations())?;
        if matches!(t.status, TraceStatus::Singular | TraceStatus::Domain | TraceStatus::Diverged) {
            write!(w, " truncated_after={}", t.iterations())?;
        }
        writeln!(w)?;
        let mut head = String::from("i");
        for k in 1..=dim {
            head.push_str(&format!(",re_{k},im_{k}"));
        }
        writeln!(w, "{head}")?;
        for (i, x) in t.iterates.iter().enumerate() {
            let mut row = i.to_string();
            for z in x.iter() {
                row.push_str(&format!(",{},{}", num(z.re), num(z.im)));
            }
            writeln!(w, "{row}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn emit_trajectories(cfg: &SweepConfig, path: &Path) -> Result<(), SweepError> {
    let traces = run_traces(cfg)?;
    let wrap = |source| SweepError::Output { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(wrap)?;
    write_trajectories(&traces, BufWriter::new(file)).map_err(wrap)
}
