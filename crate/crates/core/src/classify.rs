//! Closed-form deciders: the ranges where goodness is settled by a theorem
//! rather than by search.

use std::collections::HashMap;

use thiserror::Error;

use crate::config::Config;
use crate::tuple::{enumerate_marked_counts, regime_holds, validate, Tuple, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Good,
    NotGood,
    /// No closed form settles the tuple; the search has to.
    OutsideClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Excellence {
    Yes,
    No,
    Unproven,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("tuple is not admissible: {0:?}")]
    Inadmissible(Vec<Violation>),
    #[error("({d}, {g}, {r}) is outside the nonspecial range d >= g + r")]
    BelowNonspecialRange { d: i64, g: i64, r: i64 },
}

/// The three triples whose general curve fails interpolation.
pub const EXCEPTIONAL_TRIPLES: [(i64, i64, i64); 3] = [(5, 2, 3), (6, 2, 4), (7, 2, 5)];

pub fn is_exceptional_triple(d: i64, g: i64, r: i64) -> bool {
    EXCEPTIONAL_TRIPLES.contains(&(d, g, r))
}

fn nonspecial(d: i64, g: i64, r: i64) -> Result<(), ClassifyError> {
    if d < g + r {
        Err(ClassifyError::BelowNonspecialRange { d, g, r })
    } else {
        Ok(())
    }
}

/// `δ(n)`, defined when `Σ (i + j) n ≤ 3`.
pub fn delta(t: &Tuple) -> Option<i64> {
    match (t.n.sum_i(), t.n.sum_j()) {
        (0, 0) => Some(2),
        (1, 0) => Some(3),
        (1, 1) => Some(5),
        (2, 0) => Some(4),
        (2, 1) => Some(5),
        (3, 0) => Some(4),
        _ => None,
    }
}

/// The families left open in dimension 3.
pub fn p3_family(t: &Tuple) -> Option<u8> {
    if t.r != 3 || t.g == 0 {
        return None;
    }
    let (i, j, k) = (t.n.sum_i(), t.n.sum_j(), t.n.sum_k());
    let dg = 2 * t.d + 2 * t.g;
    if j == 0 && k == 0 && i == dg - 14 {
        Some(1)
    } else if k == 1 && i == dg - 9 {
        Some(2)
    } else {
        None
    }
}

/// The families left open from dimension 12 on. `lengthened` raises the
/// threshold on `K` for the second family from `r / 2` to `(r + 3) / 2`.
pub fn high_family(t: &Tuple, lengthened: bool) -> Option<u8> {
    if t.r < 12 {
        return None;
    }
    let (d, g, r) = (t.d, t.g, t.r);
    let (i, j, k) = (t.n.sum_i(), t.n.sum_j(), t.n.sum_k());
    if i == 1 && j == 1 && k == r - 2 && d + g == 2 * r - 2 {
        return Some(1);
    }
    let delta = delta(t)?;
    let threshold = if lengthened { r + 3 } else { r };
    let residue = (d + g + r).rem_euclid(5);
    let residue_hit = residue == (delta + 2) % 5 || residue == (delta + 4) % 5;
    if k == 4 * r - 2 * d - 2 * g - delta && 2 * k > threshold && residue_hit {
        Some(2)
    } else {
        None
    }
}

/// Lowest `d + g` in each dimension from which every tuple is known good.
fn excellent_from(r: i64) -> Option<i64> {
    match r {
        4 => Some(11),
        5 => Some(14),
        6 => Some(13),
        7 => Some(14),
        8..=11 => Some(0),
        _ => None,
    }
}

pub fn classify(t: &Tuple, config: &Config) -> Result<Classification, ClassifyError> {
    let violations = validate(t);
    if !violations.is_empty() {
        return Err(ClassifyError::Inadmissible(violations));
    }
    nonspecial(t.d, t.g, t.r)?;
    use Classification::*;
    if !regime_holds(t) {
        return Ok(NotGood);
    }
    if t.r == 2 || t.g == 0 {
        return Ok(Good);
    }
    // Bare tuples are settled outright, even where an open family's
    // numerics happen to allow n = 0.
    if t.n.is_zero() {
        return Ok(if is_exceptional_triple(t.d, t.g, t.r) {
            NotGood
        } else {
            Good
        });
    }
    if t.r == 3 {
        return Ok(if p3_family(t).is_some() {
            OutsideClosedForm
        } else {
            Good
        });
    }
    if t.r >= 12 {
        return Ok(if high_family(t, config.lengthened_high).is_some() {
            OutsideClosedForm
        } else {
            Good
        });
    }
    if excellent_from(t.r).is_some_and(|lo| t.d + t.g >= lo) {
        return Ok(Good);
    }
    Ok(OutsideClosedForm)
}

/// Whether `(d, g, r)` is good for every admissible regime-satisfying `n`.
pub fn is_excellent(d: i64, g: i64, r: i64, config: &Config) -> Result<Excellence, ClassifyError> {
    nonspecial(d, g, r)?;
    if r < 2 || g < 0 {
        return Err(ClassifyError::Inadmissible(validate(&Tuple::bare(d, g, r))));
    }
    Ok(excellence(d, g, r, config, &mut HashMap::new()))
}

fn excellence(
    d: i64,
    g: i64,
    r: i64,
    config: &Config,
    seen: &mut HashMap<(i64, i64, i64), Excellence>,
) -> Excellence {
    if let Some(&e) = seen.get(&(d, g, r)) {
        return e;
    }
    let e = excellence_uncached(d, g, r, config, seen);
    seen.insert((d, g, r), e);
    e
}

fn excellence_uncached(
    d: i64,
    g: i64,
    r: i64,
    config: &Config,
    seen: &mut HashMap<(i64, i64, i64), Excellence>,
) -> Excellence {
    if is_exceptional_triple(d, g, r) {
        return Excellence::No;
    }
    if r == 2 || g == 0 {
        return Excellence::Yes;
    }
    if excellent_from(r).is_some_and(|lo| d + g >= lo) || (r >= 12 && d + g >= 2 * r - 1) {
        return Excellence::Yes;
    }
    // Induction on r from three smaller triples.
    if r >= 4 && d + g >= 2 * r - 1 {
        let smaller = [(d - 1, g - 1, r), (d - 1, g, r - 1), (d - 2, g - 1, r - 1)];
        if smaller
            .iter()
            .all(|&(d, g, r)| excellence(d, g, r, config, seen) == Excellence::Yes)
        {
            return Excellence::Yes;
        }
    }
    let every_n_good = enumerate_marked_counts(d, g, r)
        .expect("r >= 3 here")
        .all(|n| classify(&Tuple::new(d, g, r, n), config) == Ok(Classification::Good));
    if every_n_good {
        Excellence::Yes
    } else {
        Excellence::Unproven
    }
}

/// How many general points a general curve of this kind passes through.
pub fn max_general_points(d: i64, g: i64, r: i64) -> Result<i64, ClassifyError> {
    nonspecial(d, g, r)?;
    if r < 2 || g < 0 {
        return Err(ClassifyError::Inadmissible(validate(&Tuple::bare(d, g, r))));
    }
    if (d, g, r) == (5, 2, 3) || (d, g, r) == (7, 2, 5) {
        return Ok(9);
    }
    Ok(((r + 1) * d - (r - 3) * (g - 1)).div_euclid(r - 1))
}
