use std::io::{BufRead, Write};

use super::BeamSolution;
use crate::error::{Error, Result};

/// Nodal fields as CSV with header `x,u0,w0,theta0`.
pub fn write_solution_csv<W: Write>(out: &mut W, sol: &BeamSolution) -> Result<()> {
    writeln!(out, "x,u0,w0,theta0")?;
    for i in 0..sol.x.len() {
        writeln!(
            out,
            "{},{},{},{}",
            sol.x[i], sol.u0[i], sol.w0[i], sol.theta0[i]
        )?;
    }
    Ok(())
}

/// Gauss-point resultants as CSV with header `x_g,alpha,N,M`.
pub fn write_resultants_csv<W: Write>(out: &mut W, sol: &BeamSolution) -> Result<()> {
    writeln!(out, "x_g,alpha,N,M")?;
    for r in &sol.resultants {
        writeln!(out, "{},{},{},{}", r.x, r.alpha, r.n, r.m)?;
    }
    Ok(())
}

/// Columns of a headed numeric CSV, keyed by header name.
pub fn read_solution_csv<R: BufRead>(input: R) -> Result<Vec<(String, Vec<f64>)>> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty CSV".into()))??;
    let mut cols: Vec<(String, Vec<f64>)> = header
        .split(',')
        .map(|h| (h.trim().to_string(), Vec::new()))
        .collect();
    for (ln, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Input(format!(
                "CSV line {}: expected {} fields, got {}",
                ln + 2,
                cols.len(),
                fields.len()
            )));
        }
        for (col, f) in cols.iter_mut().zip(fields) {
            let v = f
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Input(format!("CSV line {}: {e} in {f:?}", ln + 2)))?;
            col.1.push(v);
        }
    }
    Ok(cols)
}
