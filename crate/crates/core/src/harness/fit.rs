//! Least-squares slope fits over the early-time growth window.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `t ≥ t_min` and `value_lo ≤ value`, up to the first value above
/// `value_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub value_lo: f64,
    pub value_hi: f64,
    pub t_min: f64,
}

impl FitWindow {
    /// `value ∈ [8, L/2]`, `t ≥ 2`.
    pub fn default_for(l: usize) -> Self {
        FitWindow {
            value_lo: 8.0,
            value_hi: l as f64 / 2.0,
            t_min: 2.0,
        }
    }
}

impl fmt::Display for FitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.value_lo, self.value_hi)
    }
}

/// `lo,hi` value bounds; `t ≥ 2` is kept.
impl FromStr for FitWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let parse = |x: &str| {
            x.parse::<f64>()
                .map_err(|e| Error::Parse(format!("fit window bound `{x}`: {e}")))
        };
        match parts[..] {
            [lo, hi] => {
                let (value_lo, value_hi) = (parse(lo)?, parse(hi)?);
                if !(value_lo <= value_hi) {
                    return Err(Error::Parse(format!("empty fit window `{s}`")));
                }
                Ok(FitWindow {
                    value_lo,
                    value_hi,
                    t_min: 2.0,
                })
            }
            _ => Err(Error::Parse(format!("fit window `{s}` is not `lo,hi`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// First and last `t` used.
    pub window: (f64, f64),
    pub n_points: usize,
    /// Half the slope: the growth of a length counts both ends.
    pub velocity: f64,
    pub residual_rms: f64,
}

/// Ordinary least squares on the points of `series` selected by `window`.
///
/// # Errors
/// [`Error::InsufficientPoints`] with fewer than three points in the window.
pub fn fit_early_slope(series: &[(f64, f64)], window: &FitWindow) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window.t_min)
        .skip_while(|&(_, v)| v < window.value_lo)
        .take_while(|&(_, v)| v <= window.value_hi)
        .filter(|&(_, v)| v >= window.value_lo)
        .collect();
    fit_line(&pts)
}

/// Ordinary least squares through all of `pts`.
pub fn fit_line(pts: &[(f64, f64)]) -> Result<FitResult> {
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let stv: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - mv)).sum();
    if stt == 0.0 {
        return Err(Error::Domain("all fit points share one t".into()));
    }
    let slope = stv / stt;
    let intercept = mv - slope * mt;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(FitResult {
        slope,
        intercept,
        window: (pts[0].0, pts[pts.len() - 1].0),
        n_points: pts.len(),
        velocity: slope / 2.0,
        residual_rms: (rss / n).sqrt(),
    })
}
