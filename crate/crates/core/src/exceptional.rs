//! Arithmetic behind the three exceptions: a hyperelliptic curve of degree
//! `r + 2` and genus 2 lies on a rational normal scroll whose normal
//! direction carries too many sections for the general curve to interpolate.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExceptionalError {
    #[error("the scroll needs d > g + 1, got d = {d}, g = {g}")]
    NoScroll { d: i64, g: i64 },
    #[error("the obstruction is only defined for r >= 3, got r = {0}")]
    DimensionTooSmall(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    pub d: i64,
    pub g: i64,
    pub r: i64,
    pub deg_scroll: i64,
    pub chi_n: i64,
    pub chi_ncs: i64,
    /// `(χ(N_C) + r - 2) / (r - 1)`, the most a rank-one quotient may carry.
    pub threshold: Ratio<i64>,
    pub obstructed: bool,
}

impl fmt::Display for ExceptionalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}): deg S = {}, chi(N_C) = {}, chi(N_C/S) = {}, threshold = {}, obstructed = {}",
            self.d, self.g, self.r, self.deg_scroll, self.chi_n, self.chi_ncs, self.threshold, self.obstructed
        )
    }
}

/// Degree of the scroll swept by the hyperelliptic secant lines.
pub fn scroll_degree(d: i64, g: i64) -> Result<i64, ExceptionalError> {
    if d <= g + 1 {
        return Err(ExceptionalError::NoScroll { d, g });
    }
    Ok(d - g - 1)
}

/// Compares `χ(N_{C/S})` against the interpolation bound for `(r + 2, 2, r)`.
pub fn obstruction_report(r: i64) -> Result<ExceptionalReport, ExceptionalError> {
    if r < 3 {
        return Err(ExceptionalError::DimensionTooSmall(r));
    }
    let (d, g) = (r + 2, 2);
    let chi_n = crate::tuple::chi_normal(d, g, r);
    debug_assert_eq!(chi_n, r * r + 2 * r + 5);
    // C ~ aF + bH on the scroll with F·F = 0, F·H = 1, H·H = r - 1.
    let (a, b) = (4 - r, 2);
    let self_intersection = 2 * a * b + b * b * (r - 1);
    let chi_ncs = self_intersection + 1 - g;
    let threshold = Ratio::new(chi_n + r - 2, r - 1);
    Ok(ExceptionalReport {
        d,
        g,
        r,
        deg_scroll: scroll_degree(d, g)?,
        chi_n,
        chi_ncs,
        threshold,
        obstructed: Ratio::from_integer(chi_ncs) > threshold,
    })
}
