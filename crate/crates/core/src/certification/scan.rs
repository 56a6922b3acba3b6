//! Certified entropy as a function of a uniform constraint level `α`.

use std::io::Write;

use super::{certify_min_entropy, CertifyOptions, ConstraintSet, IndicatorMode};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub alpha: f64,
    /// `None` when the constraints are infeasible at this `α`.
    pub bits: Option<f64>,
}

/// Certify at every grid value. Infeasible points are kept (with no value);
/// any other error is propagated.
pub fn indicator_scan(mode: IndicatorMode, alpha_grid: &[f64], delta: f64, opts: &CertifyOptions) -> Result<Vec<ScanPoint>> {
    if let Some(a) = alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return domain(format!("α grid value {a} outside [0,1]"));
    }
    alpha_grid
        .iter()
        .map(|&alpha| {
            let c = ConstraintSet::uniform(mode, alpha, delta);
            match certify_min_entropy(&c, opts) {
                Ok(r) => Ok(ScanPoint {
                    alpha,
                    bits: Some(r.certified_bits_per_event),
                }),
                Err(Error::Infeasible(_)) => Ok(ScanPoint { alpha, bits: None }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Regular grid `start, start + step, …` up to and including `end`.
pub fn alpha_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || end < start {
        return domain(format!("bad grid [{start}, {end}] step {step}"));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// Where the curve leaves zero: midpoint between the last grid point at
/// zero (within `tol`) and the next point, provided every later feasible
/// point is positive.
pub fn zero_crossing(curve: &[ScanPoint], tol: f64) -> Option<f64> {
    let feasible: Vec<(f64, f64)> = curve.iter().filter_map(|p| p.bits.map(|b| (p.alpha, b))).collect();
    let last_zero = feasible.iter().rposition(|&(_, b)| b <= tol)?;
    let next = feasible.get(last_zero + 1)?;
    Some(0.5 * (feasible[last_zero].0 + next.0))
}

/// `alpha,bits` CSV; infeasible points are written as `nan`.
pub fn write_curve_csv<W: Write>(mut w: W, curve: &[ScanPoint]) -> Result<()> {
    writeln!(w, "alpha,bits")?;
    for p in curve {
        match p.bits {
            Some(b) => writeln!(w, "{},{}", p.alpha, b)?,
            None => writeln!(w, "{},nan", p.alpha)?,
        }
    }
    Ok(())
}

/// `beta,eta,threshold` CSV.
pub fn write_threshold_csv<W: Write>(mut w: W, rows: &[(f64, f64, f64)]) -> Result<()> {
    writeln!(w, "beta,eta,threshold")?;
    for (b, e, t) in rows {
        writeln!(w, "{b},{e},{t}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(alpha: f64, bits: Option<f64>) -> ScanPoint {
        ScanPoint { alpha, bits }
    }

    #[test]
    fn crossing_midpoint() {
        let c = vec![pt(0.1, Some(0.0)), pt(0.2, Some(0.0)), pt(0.3, Some(0.05)), pt(0.4, Some(0.1)), pt(0.9, None)];
        assert_eq!(zero_crossing(&c, 1e-6), Some(0.25));
        assert_eq!(zero_crossing(&c[..2], 1e-6), None);
        assert_eq!(zero_crossing(&c[2..4], 1e-6), None);
    }

    #[test]
    fn grid_endpoints() {
        let g = alpha_grid(0.4, 0.6, 0.005).unwrap();
        assert_eq!(g.len(), 41);
        assert!((g[40] - 0.6).abs() < 1e-12);
        assert!(alpha_grid(0.5, 0.4, 0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        write_curve_csv(&mut out, &[pt(0.5, Some(0.0)), pt(0.9, None)]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "alpha,bits\n0.5,0\n0.9,nan\n");
        let mut out = Vec::new();
        write_threshold_csv(&mut out, &[(0.99, 0.06, 0.5)]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "beta,eta,threshold\n0.99,0.06,0.5\n");
    }

    #[test]
    fn out_of_range_grid() {
        assert!(indicator_scan(IndicatorMode::Vector, &[1.2], 1e-4, &CertifyOptions::default()).is_err());
    }
}
