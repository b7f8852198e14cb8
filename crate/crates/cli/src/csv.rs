//! CSV emission and parsing for sweep results.
//!
//! Format: header `delta_p,chi_re,chi_im,n_g`, one row per grid point in
//! ascending detuning, LF line endings. Numbers are written with `{:e}` so
//! they round-trip exactly through `f64::from_str`. The `n_g` field is empty
//! at the sweep endpoints; rows where the solver failed keep the detuning and
//! leave every other field empty.

use dark_resonance::spectra::{SusceptibilitySample, SweepResult};

use crate::{CliError, ExitKind};

pub const HEADER: &str = "delta_p,chi_re,chi_im,n_g";

pub fn render(result: &SweepResult) -> String {
    let mut out = String::with_capacity(result.samples.len() * 64);
    out.push_str(HEADER);
    out.push('\n');
    for (sample, &delta_p) in result.samples.iter().zip(result.spec.grid().iter()) {
        match sample {
            Ok(s) => {
                out.push_str(&format!("{:e},{:e},{:e},", s.delta_p, s.chi_re, s.chi_im));
                if let Some(ng) = s.n_g {
                    out.push_str(&format!("{ng:e}"));
                }
            }
            Err(_) => out.push_str(&format!("{delta_p:e},,,")),
        }
        out.push('\n');
    }
    out
}

/// Parses a CSV produced by `render`, skipping rows with empty χ fields.
pub fn parse(text: &str) -> Result<Vec<SusceptibilitySample>, CliError> {
    let bad = |line: usize, why: String| CliError {
        kind: ExitKind::Usage,
        message: format!("CSV line {line}: {why}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == HEADER => {}
        Some((_, first)) => {
            return Err(bad(1, format!("expected header `{HEADER}`, found `{first}`")))
        }
        None => return Err(bad(1, "empty file".into())),
    }
    let mut samples = Vec::new();
    for (ix, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(ix + 1, format!("expected 4 fields, found {}", fields.len())));
        }
        let num = |field: &str| -> Result<f64, CliError> {
            field
                .parse::<f64>()
                .map_err(|e| bad(ix + 1, format!("bad number `{field}`: {e}")))
        };
        if fields[1].is_empty() && fields[2].is_empty() {
            continue; // failed solver point
        }
        samples.push(SusceptibilitySample {
            delta_p: num(fields[0])?,
            chi_re: num(fields[1])?,
            chi_im: num(fields[2])?,
            n_g: if fields[3].is_empty() {
                None
            } else {
                Some(num(fields[3])?)
            },
        });
    }
    Ok(samples)
}
