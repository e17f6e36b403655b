use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::eigenvalue;
use super::params::ModelParams;
use super::roots::{eigen_residual, GeneralSpectrum};
use crate::error::Result;

/// One line of a spectrum export: `j, re_k2, im_k2, residual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub j: usize,
    pub re_k2: f64,
    pub im_k2: f64,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unresolved: bool,
}

/// `j = 0..=j_max` from the closed form; `j = 0` is the `α²` branch.
pub fn closed_form_rows(params: &ModelParams, j_max: usize) -> Vec<SpectrumRow> {
    (0..=j_max)
        .map(|j| {
            let k = if j == 0 { params.alpha.abs() } else { params.wavenumber(j) };
            SpectrumRow {
                j,
                re_k2: eigenvalue(j, params),
                im_k2: 0.0,
                residual: eigen_residual(Complex64::new(k, 0.0), params),
                unresolved: false,
            }
        })
        .collect()
}

/// Root-finder output, numbered by eigenvalue order.
pub fn root_rows(spectrum: &GeneralSpectrum) -> Vec<SpectrumRow> {
    spectrum
        .all()
        .iter()
        .enumerate()
        .map(|(j, r)| SpectrumRow { j, re_k2: r.k2.re, im_k2: r.k2.im, residual: r.residual, unresolved: !r.resolved })
        .collect()
}

/// Comma-separated, `.` decimal point, header line first. A trailing
/// `flag` column is added only if some row is unresolved.
pub fn write_csv<W: Write>(rows: &[SpectrumRow], mut out: W) -> Result<()> {
    let flagged = rows.iter().any(|r| r.unresolved);
    write!(out, "j,re_k2,im_k2,residual")?;
    if flagged {
        write!(out, ",flag")?;
    }
    writeln!(out)?;
    for r in rows {
        write!(out, "{},{:e},{:e},{:e}", r.j, r.re_k2, r.im_k2, r.residual)?;
        if flagged {
            write!(out, ",{}", if r.unresolved { "unresolved" } else { "ok" })?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SpectrumRow], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, rows)?;
    Ok(())
}
