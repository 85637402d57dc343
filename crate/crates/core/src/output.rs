//! CSV artifacts.
//!
//! | file        | header                                      |
//! |-------------|---------------------------------------------|
//! | time series | `step,polarization`                         |
//! | snapshots   | `step,actor,dim0[,dim1,...]`                |
//! | sweep       | `axis1,axis2,iteration,seed,final_polarization` |
//! | aggregate   | `axis1,axis2,mean,sd,q1,median,q3`          |
//! | fit         | `axis,a,k,x0,rmse,converged`                |
//!
//! `axis2` is left empty for one-axis sweeps. Floats use Rust's shortest
//! round-trip formatting, so identical results give identical bytes.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::engine::{SeriesPoint, Snapshot};
use crate::error::{Error, Result};
use crate::fit::LogisticFit;
use crate::sweep::SweepResult;

pub fn write_time_series<W: Write>(out: W, series: &[SeriesPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "polarization"])?;
    for p in series {
        w.write_record([p.step.to_string(), p.polarization.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<time series>", e))
}

pub fn write_snapshots<W: Write>(out: W, snapshots: &[Snapshot]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dims = snapshots.first().map_or(1, |s| s.population.dims());
    let mut header = vec!["step".to_string(), "actor".to_string()];
    header.extend((0..dims).map(|d| format!("dim{d}")));
    w.write_record(&header)?;
    for snap in snapshots {
        for (actor, pos) in snap.population.positions().enumerate() {
            let mut row = vec![snap.step.to_string(), actor.to_string()];
            row.extend(pos.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::io("<snapshots>", e))
}

fn axis_fields(values: &[f64]) -> [String; 2] {
    [
        values.first().map(f64::to_string).unwrap_or_default(),
        values.get(1).map(f64::to_string).unwrap_or_default(),
    ]
}

pub fn write_sweep<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis1", "axis2", "iteration", "seed", "final_polarization"])?;
    for cell in &result.cells {
        let [a1, a2] = axis_fields(&cell.values);
        for (i, (seed, v)) in result.seed_list.iter().zip(&cell.finals).enumerate() {
            w.write_record([a1.clone(), a2.clone(), i.to_string(), seed.to_string(), v.to_string()])?;
        }
    }
    w.flush().map_err(|e| Error::io("<sweep>", e))
}

pub fn write_aggregate<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis1", "axis2", "mean", "sd", "q1", "median", "q3"])?;
    for cell in &result.cells {
        let [a1, a2] = axis_fields(&cell.values);
        let s = &cell.stats;
        w.write_record([
            a1,
            a2,
            s.mean.to_string(),
            s.sd.to_string(),
            s.q1.to_string(),
            s.median.to_string(),
            s.q3.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<aggregate>", e))
}

pub fn write_fits<W: Write>(out: W, fits: &[(String, LogisticFit)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis", "a", "k", "x0", "rmse", "converged"])?;
    for (axis, f) in fits {
        w.write_record([
            axis.clone(),
            f.a.to_string(),
            f.k.to_string(),
            f.x0.to_string(),
            f.rmse.to_string(),
            f.converged.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<fit>", e))
}

/// Writes through `emit` into `path`, creating parent directories.
pub fn write_file<F>(path: &Path, emit: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = io::BufWriter::new(file);
    emit(&mut buf).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    buf.flush().map_err(|e| Error::io(path, e))
}

/// Points to fit from a sweep or aggregate CSV: the mean polarization per
/// value of `axis` (`axis1` or `axis2`). The other axis column must be empty.
pub fn read_fit_points(path: &Path, axis: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let headers = r.headers()?.clone();
    let parse_err = |message: String| Error::Parse {
        path: path.to_owned(),
        message,
    };
    let col = |name: &str| headers.iter().position(|h| h == name);
    let other = match axis {
        "axis1" => "axis2",
        "axis2" => "axis1",
        _ => return Err(Error::config("axis", format!("`{axis}` is neither axis1 nor axis2"))),
    };
    let axis_col = col(axis).ok_or_else(|| parse_err(format!("missing column `{axis}`")))?;
    let other_col = col(other);
    let value_col = col("final_polarization")
        .or_else(|| col("mean"))
        .ok_or_else(|| parse_err("need a `final_polarization` or `mean` column".into()))?;

    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if other_col.is_some_and(|c| !rec[c].is_empty()) {
            return Err(Error::config(
                "axis",
                format!("row {}: `{other}` is set; fitting needs a one-axis sweep", line + 2),
            ));
        }
        let num = |c: usize| {
            rec[c]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("row {}: `{}`: {e}", line + 2, &rec[c])))
        };
        let (x, y) = (num(axis_col)?, num(value_col)?);
        match groups.iter_mut().find(|g| g.0 == x) {
            Some(g) => {
                g.1 += y;
                g.2 += 1;
            }
            None => groups.push((x, y, 1)),
        }
    }
    if groups.is_empty() {
        return Err(parse_err("no data rows".into()));
    }
    Ok(groups.into_iter().map(|(x, s, n)| (x, s / n as f64)).unzip())
}

pub fn save_time_series(path: &Path, series: &[SeriesPoint]) -> Result<()> {
    write_file(path, |w| write_time_series(w, series))
}

pub fn save_snapshots(path: &Path, snapshots: &[Snapshot]) -> Result<()> {
    write_file(path, |w| write_snapshots(w, snapshots))
}

pub fn save_sweep(path: &Path, result: &SweepResult) -> Result<()> {
    write_file(path, |w| write_sweep(w, result))
}

pub fn save_aggregate(path: &Path, result: &SweepResult) -> Result<()> {
    write_file(path, |w| write_aggregate(w, result))
}

pub fn save_fits(path: &Path, fits: &[(String, LogisticFit)]) -> Result<()> {
    write_file(path, |w| write_fits(w, fits))
}
