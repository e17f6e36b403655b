use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use ptmetric::metric::{theta_apply_closed, theta_apply_series, DEFAULT_SERIES_CUTOFF};
use ptmetric::spectrum::{
    check_nondegenerate, closed_form_rows, general_eigenvalues, root_rows, write_csv, write_json, GeneralSpectrum,
    RootKind, SpectrumRow,
};
use ptmetric::verify::{run_all, Suite, SuiteOptions, VerificationReport};
use ptmetric::{GridFunction, MetricConfig, ModelParams};

use crate::args::{Format, Method, RunConfig, SweepParam, SweepRange};
use crate::{CliError, CliResult};

const DEFAULT_JMAX: usize = 20;
const SWEEP_JMAX: usize = 10;
const CONJUGATE_TOLERANCE: f64 = 1e-9;

fn sink(run: &RunConfig) -> CliResult<Box<dyn Write>> {
    Ok(match &run.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path)
                .map_err(|e| CliError::Other(anyhow::anyhow!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn params(run: &RunConfig, alpha: f64, beta: f64) -> CliResult<ModelParams> {
    Ok(ModelParams::new(alpha, beta, run.d_or_default())?)
}

/// Closed form for `beta = 0`, root finder otherwise. The `bool` is `false`
/// when a complex root lacks its conjugate partner.
fn eigen_rows(
    run: &RunConfig,
    p: &ModelParams,
    default_jmax: usize,
) -> CliResult<(Vec<SpectrumRow>, Vec<String>, bool)> {
    if p.beta == 0.0 {
        let j_max = match (run.jmax, run.kmax) {
            (Some(j), _) => j,
            (None, Some(k)) => (k.max(0.0) * p.d / PI).floor() as usize,
            (None, None) => default_jmax,
        };
        return Ok((closed_form_rows(p, j_max), Vec::new(), true));
    }
    let k_max = match (run.kmax, run.jmax) {
        (Some(k), _) => k,
        (None, Some(j)) => (j as f64 + 0.5) * PI / p.d,
        (None, None) => (default_jmax as f64 + 0.5) * PI / p.d,
    };
    let spectrum = general_eigenvalues(p, k_max, true)?;
    let warnings = root_warnings(&spectrum);
    let paired = conjugates_paired(&spectrum);
    Ok((root_rows(&spectrum), warnings, paired))
}

fn root_warnings(s: &GeneralSpectrum) -> Vec<String> {
    let mut out: Vec<String> =
        s.unresolved.iter().map(|r| format!("unresolved root near k = {} (|F| = {:.3e})", r.k, r.residual)).collect();
    if s.audit.missing > 0 {
        out.push(format!(
            "alpha = {}, beta = {}: {} of {} roots inside |k| < {:.4} not found",
            s.params.alpha, s.params.beta, s.audit.missing, s.audit.expected, s.audit.radius
        ));
    }
    out
}

fn conjugates_paired(s: &GeneralSpectrum) -> bool {
    let complex: Vec<_> = s.roots.iter().filter(|r| r.kind == RootKind::Complex).map(|r| r.k2).collect();
    complex.iter().all(|z| complex.iter().any(|w| (w - z.conj()).norm() <= CONJUGATE_TOLERANCE * (1.0 + z.norm())))
}

pub fn spectrum(run: &RunConfig) -> CliResult<()> {
    let p = params(run, run.alpha.unwrap_or(0.0), run.beta)?;
    let flag = check_nondegenerate(&p);
    if p.beta == 0.0 && flag.degenerate {
        eprintln!(
            "warning: alpha*d/pi = {} is degenerate: alpha^2 coincides with a Neumann eigenvalue",
            flag.m.unwrap_or(0)
        );
    }
    let (rows, warnings, paired) = eigen_rows(run, &p, DEFAULT_JMAX)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if !paired {
        eprintln!("warning: complex eigenvalues without a conjugate partner within {CONJUGATE_TOLERANCE:e}");
    }
    let mut out = sink(run)?;
    match run.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(&rows, &mut out)?,
        Format::Json => {
            write_json(&rows, &mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn metric_apply(run: &RunConfig, input: &Path, method: Method) -> CliResult<()> {
    if run.format == Some(Format::Csv) {
        return Err(CliError::Usage("metric apply reads and writes GridFunction JSON only".into()));
    }
    if run.beta != 0.0 {
        return Err(CliError::Usage("the metric is defined for beta = 0 only".into()));
    }
    let file = File::open(input).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", input.display())))?;
    let psi = GridFunction::read_json(io::BufReader::new(file), run.quadrature)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let (d, n) = (psi.grid().d(), psi.grid().n());
    if let Some(flag_d) = run.d {
        if (flag_d - d).abs() > 1e-12 * d {
            return Err(CliError::Usage(format!("--d {flag_d} does not match d = {d} in {}", input.display())));
        }
    }
    if let Some(flag_n) = run.n {
        if flag_n != n {
            return Err(CliError::Usage(format!("--n {flag_n} does not match n = {n} in {}", input.display())));
        }
    }
    let cfg = MetricConfig::with_cutoff(run.alpha.unwrap_or(0.0), d, run.jmax.unwrap_or(DEFAULT_SERIES_CUTOFF))?;
    let result = match method {
        Method::Closed => {
            let flag = cfg.degeneracy();
            if flag.degenerate {
                eprintln!("warning: alpha*d/pi = {} is degenerate: the metric has a kernel", flag.m.unwrap_or(0));
            }
            theta_apply_closed(&psi, &cfg)?
        }
        Method::Series => {
            let series = theta_apply_series(&psi, &cfg)?;
            eprintln!("series cutoff {}: tail norm {:.3e}", cfg.series_cutoff, series.tail);
            series.value
        }
    };
    let mut out = sink(run)?;
    result.write_json(&mut out)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn suite_options(run: &RunConfig, suite: Suite) -> CliResult<SuiteOptions> {
    let d = run.d_or_default();
    let mut o = match run.alpha {
        Some(alpha) => SuiteOptions::single(alpha, run.beta, d),
        None => {
            let mut o = SuiteOptions { d, ..SuiteOptions::default() };
            if run.beta != 0.0 {
                o.betas = vec![0.0, run.beta];
            }
            o
        }
    };
    o.n = run.n_or_default();
    o.quadrature = run.quadrature;
    o.suite = suite;
    if let Some(seed) = run.seed {
        o.seed = seed;
    }
    if let Some(j) = run.jmax {
        o.j_max = j;
    }
    if let Some(k) = run.kmax {
        o.k_max = k;
    }
    if let Some(tol) = run.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
        o.tolerances.quadrature = tol;
    }
    Ok(o)
}

fn write_report_csv(report: &VerificationReport, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "name,suite,status,residual,tolerance")?;
    for c in &report.checks {
        let residual = c.headline().map_or_else(String::new, |v| format!("{v:e}"));
        writeln!(out, "{},{},{},{},{:e}", c.name, c.suite, c.status.label().to_lowercase(), residual, c.tolerance)?;
    }
    Ok(())
}

/// JSON report to `--out` (or stdout with `--format json`), text table otherwise.
pub fn verify(run: &RunConfig, suite: Suite) -> CliResult<()> {
    let report = run_all(&suite_options(run, suite)?)?;
    match (run.format, &run.out) {
        (Some(Format::Csv), _) => {
            let mut out = sink(run)?;
            write_report_csv(&report, &mut out)?;
            out.flush()?;
        }
        (Some(Format::Json), None) => {
            let mut out = sink(run)?;
            report.write_json(&mut out)?;
            writeln!(out)?;
            out.flush()?;
        }
        (_, Some(_)) => {
            let mut out = sink(run)?;
            report.write_json(&mut out)?;
            writeln!(out)?;
            out.flush()?;
            print!("{}", report.to_text_table());
        }
        (None, None) => print!("{}", report.to_text_table()),
    }
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::ChecksFailed(format!("{} check(s) failed: {}", names.len(), names.join(", "))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub j: usize,
    pub re_k2: f64,
    pub im_k2: f64,
    pub residual: f64,
}

fn write_sweep_csv(rows: &[SweepRow], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "param,j,re_k2,im_k2,residual")?;
    for r in rows {
        writeln!(out, "{:e},{},{:e},{:e},{:e}", r.param, r.j, r.re_k2, r.im_k2, r.residual)?;
    }
    Ok(())
}

/// One gnuplot data block per `j` (select with `index j`).
fn write_plot_data(rows: &[SweepRow], label: &str, mut out: impl Write) -> io::Result<()> {
    let j_max = rows.iter().map(|r| r.j).max().unwrap_or(0);
    writeln!(out, "# {label} j re_k2 im_k2 residual")?;
    for j in 0..=j_max {
        if j > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# j = {j}")?;
        for r in rows.iter().filter(|r| r.j == j) {
            writeln!(out, "{:e} {} {:e} {:e} {:e}", r.param, r.j, r.re_k2, r.im_k2, r.residual)?;
        }
    }
    Ok(())
}

pub fn sweep(run: &RunConfig, param: SweepParam, range: &SweepRange, plot_data: bool) -> CliResult<()> {
    let points = range.points();
    let alpha = run.alpha.unwrap_or(0.0);
    let per_point: Vec<(f64, Vec<SpectrumRow>, Vec<String>, bool)> = points
        .par_iter()
        .map(|&v| {
            let p = match param {
                SweepParam::Alpha => params(run, v, run.beta)?,
                SweepParam::Beta => params(run, alpha, v)?,
            };
            let (rows, warnings, paired) = eigen_rows(run, &p, SWEEP_JMAX)?;
            Ok((v, rows, warnings, paired))
        })
        .collect::<CliResult<_>>()?;

    let mut rows = Vec::new();
    let mut unpaired = Vec::new();
    for (v, point_rows, warnings, paired) in per_point {
        for w in warnings {
            eprintln!("warning: {w}");
        }
        if !paired {
            unpaired.push(v);
        }
        rows.extend(point_rows.into_iter().map(|r| SweepRow {
            param: v,
            j: r.j,
            re_k2: r.re_k2,
            im_k2: r.im_k2,
            residual: r.residual,
        }));
    }

    let label = match param {
        SweepParam::Alpha => "alpha",
        SweepParam::Beta => "beta",
    };
    let mut out = sink(run)?;
    match (plot_data, run.format.unwrap_or(Format::Csv)) {
        (true, _) => write_plot_data(&rows, label, &mut out)?,
        (false, Format::Csv) => write_sweep_csv(&rows, &mut out)?,
        (false, Format::Json) => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    if unpaired.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!(
            "complex eigenvalues without a conjugate partner within {CONJUGATE_TOLERANCE:e} at {label} = {unpaired:?}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(param: f64, j: usize) -> SweepRow {
        SweepRow { param, j, re_k2: j as f64, im_k2: 0.0, residual: 0.0 }
    }

    #[test]
    fn plot_data_blocks_by_index() {
        let rows = [row(0.0, 0), row(0.0, 1), row(0.5, 0), row(0.5, 1)];
        let mut buf = Vec::new();
        write_plot_data(&rows, "alpha", &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let blocks: Vec<&str> = text.split("\n\n\n").collect();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[1].lines().filter(|l| !l.starts_with('#')).count(), 2);
        assert!(!text.contains(','));
    }

    #[test]
    fn sweep_csv_header() {
        let mut buf = Vec::new();
        write_sweep_csv(&[row(0.25, 3)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("param,j,re_k2,im_k2,residual"));
        assert_eq!(text.lines().nth(1), Some("2.5e-1,3,3e0,0e0,0e0"));
    }
}
