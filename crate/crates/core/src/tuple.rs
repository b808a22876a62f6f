//! Numerical shadow of a marked curve: the tuple `(d, g, r; n)` and the
//! Euler-characteristic bookkeeping that every reduction is phrased in.
//!
//! A tuple records the degree `d`, genus `g` and ambient dimension `r` of a
//! curve together with [`MarkedCounts`], the number of marked points of each
//! of the nine admissible types `(i, j; k)`. The bundle attached to the tuple
//! is never represented; only the integers derived from it are.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest magnitude accepted for `d`, `g`, `r` and any single point count.
///
/// Every formula in the crate is at most quadratic in these quantities, so
/// with this cap all intermediate values fit comfortably in `i64`.
pub const MAX_PARAMETER: i64 = 1_000_000;

/// One of the nine admissible marked-point types `(i, j; k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawMarkedType", into = "RawMarkedType")]
pub struct MarkedType {
    i: u8,
    j: u8,
    k: u8,
}

#[derive(Serialize, Deserialize)]
struct RawMarkedType {
    i: u8,
    j: u8,
    k: u8,
}

impl TryFrom<RawMarkedType> for MarkedType {
    type Error = TupleError;

    fn try_from(raw: RawMarkedType) -> Result<Self, Self::Error> {
        MarkedType::new(raw.i, raw.j, raw.k)
    }
}

impl From<MarkedType> for RawMarkedType {
    fn from(t: MarkedType) -> Self {
        RawMarkedType {
            i: t.i,
            j: t.j,
            k: t.k,
        }
    }
}

impl MarkedType {
    /// The admissible types in canonical slot order.
    pub const ALL: [MarkedType; 9] = [
        MarkedType { i: 1, j: 1, k: 1 },
        MarkedType { i: 2, j: 0, k: 1 },
        MarkedType { i: 1, j: 0, k: 2 },
        MarkedType { i: 1, j: 1, k: 0 },
        MarkedType { i: 1, j: 0, k: 1 },
        MarkedType { i: 2, j: 0, k: 0 },
        MarkedType { i: 0, j: 0, k: 2 },
        MarkedType { i: 1, j: 0, k: 0 },
        MarkedType { i: 0, j: 0, k: 1 },
    ];

    pub const P111: MarkedType = Self::ALL[0];
    pub const P201: MarkedType = Self::ALL[1];
    pub const P102: MarkedType = Self::ALL[2];
    pub const P110: MarkedType = Self::ALL[3];
    pub const P101: MarkedType = Self::ALL[4];
    pub const P200: MarkedType = Self::ALL[5];
    pub const P002: MarkedType = Self::ALL[6];
    pub const P100: MarkedType = Self::ALL[7];
    pub const P001: MarkedType = Self::ALL[8];

    /// Looks up `(i, j; k)`; fails unless it is one of the nine admissible types.
    pub fn new(i: u8, j: u8, k: u8) -> Result<Self, TupleError> {
        Self::lookup(i, j, k).ok_or(TupleError::UnknownType { i, j, k })
    }

    /// Like [`MarkedType::new`], but `(0, 0; 0)` and other non-types map to `None`.
    pub fn lookup(i: u8, j: u8, k: u8) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.i == i && t.j == j && t.k == k)
    }

    pub fn i(self) -> i64 {
        i64::from(self.i)
    }

    pub fn j(self) -> i64 {
        i64::from(self.j)
    }

    pub fn k(self) -> i64 {
        i64::from(self.k)
    }

    /// Position of this type in the canonical order.
    pub fn slot(self) -> usize {
        Self::ALL
            .iter()
            .position(|t| *t == self)
            .expect("MarkedType values are always admissible")
    }

    /// Weight `(r - 2)i + (r - 3)j - k` of this type in the regime inequality.
    pub fn regime_weight(self, r: i64) -> i64 {
        (r - 2) * self.i() + (r - 3) * self.j() - self.k()
    }

    /// Per-point correction `r - 1 - i - 2j - k` to the Euler characteristic.
    pub fn chi_weight(self, r: i64) -> i64 {
        r - 1 - self.i() - 2 * self.j() - self.k()
    }
}

impl fmt::Display for MarkedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.i, self.j, self.k)
    }
}

/// Human-readable canonical slot order, echoed by usage messages.
pub fn canonical_order() -> String {
    MarkedType::ALL
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Dense vector of marked-point multiplicities, one slot per [`MarkedType`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct MarkedCounts([u32; 9]);

impl MarkedCounts {
    pub const ZERO: MarkedCounts = MarkedCounts([0; 9]);

    pub fn from_slots(slots: [u32; 9]) -> Self {
        MarkedCounts(slots)
    }

    /// A vector with `count` points of one type and nothing else.
    pub fn single(t: MarkedType, count: u32) -> Self {
        let mut n = Self::ZERO;
        n.0[t.slot()] = count;
        n
    }

    pub fn slots(&self) -> [u32; 9] {
        self.0
    }

    pub fn get(&self, t: MarkedType) -> u32 {
        self.0[t.slot()]
    }

    pub fn set(&mut self, t: MarkedType, count: u32) {
        self.0[t.slot()] = count;
    }

    pub fn with_added(mut self, t: MarkedType, extra: u32) -> Self {
        self.0[t.slot()] += extra;
        self
    }

    /// Removes one point of type `t`, if there is one.
    pub fn with_removed(mut self, t: MarkedType) -> Option<Self> {
        let slot = &mut self.0[t.slot()];
        *slot = slot.checked_sub(1)?;
        Some(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Iterates `(type, count)` over all nine slots in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (MarkedType, i64)> + '_ {
        MarkedType::ALL
            .iter()
            .zip(self.0.iter())
            .map(|(t, &c)| (*t, i64::from(c)))
    }

    /// `Σ w(i, j; k) · n_{ij}^k`.
    pub fn weighted(&self, w: impl Fn(MarkedType) -> i64) -> i64 {
        self.iter().map(|(t, c)| w(t) * c).sum()
    }

    /// Total number of marked points `Σ n`.
    pub fn total(&self) -> i64 {
        self.weighted(|_| 1)
    }

    /// `I = Σ i · n`.
    pub fn sum_i(&self) -> i64 {
        self.weighted(MarkedType::i)
    }

    /// `J = Σ j · n`.
    pub fn sum_j(&self) -> i64 {
        self.weighted(MarkedType::j)
    }

    /// `K = Σ k · n`.
    pub fn sum_k(&self) -> i64 {
        self.weighted(MarkedType::k)
    }

    /// Pushes every point through `f`; points mapped to `None` (the
    /// `(0, 0; 0)` artifacts) are dropped and counted in the second component.
    pub fn remap(&self, f: impl Fn(MarkedType) -> Option<MarkedType>) -> (MarkedCounts, u32) {
        let mut out = Self::ZERO;
        let mut dropped = 0;
        for (t, &c) in MarkedType::ALL.iter().zip(self.0.iter()) {
            match f(*t) {
                Some(target) => out.0[target.slot()] += c,
                None => dropped += c,
            }
        }
        (out, dropped)
    }

    /// Every `(i, j; k)` becomes `(i, j; 0)`; `(0, 0; k)` points are dropped.
    pub fn collapse_k(&self) -> (MarkedCounts, u32) {
        self.remap(|t| MarkedType::lookup(t.i, t.j, 0))
    }

    /// Every `(i, j; k)` becomes `(j, 0; k)`, i.e. `n'_{i0}^k = Σ_ℓ n_{ℓi}^k`.
    pub fn transpose(&self) -> (MarkedCounts, u32) {
        self.remap(|t| MarkedType::lookup(t.j, 0, t.k))
    }

    /// Every `(i, j; k)` becomes `(j, 0; 0)`, i.e. `n'_{i0}^0 = Σ_{ℓ,m} n_{ℓi}^m`.
    pub fn transpose_collapse(&self) -> (MarkedCounts, u32) {
        self.remap(|t| MarkedType::lookup(t.j, 0, 0))
    }
}

impl fmt::Display for MarkedCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl std::str::FromStr for MarkedCounts {
    type Err = TupleError;

    /// Parses nine comma-separated nonnegative integers in canonical order,
    /// optionally wrapped in brackets as `Display` prints them.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .unwrap_or(body);
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 9 {
            return Err(TupleError::MalformedCounts(s.to_string()));
        }
        let mut slots = [0u32; 9];
        for (slot, part) in slots.iter_mut().zip(parts) {
            *slot = part
                .parse()
                .map_err(|_| TupleError::MalformedCounts(s.to_string()))?;
        }
        Ok(MarkedCounts(slots))
    }
}

/// The unit of decision: degree, genus, ambient dimension and marked counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tuple {
    pub d: i64,
    pub g: i64,
    pub r: i64,
    pub n: MarkedCounts,
}

impl Tuple {
    pub fn new(d: i64, g: i64, r: i64, n: MarkedCounts) -> Self {
        Tuple { d, g, r, n }
    }

    /// The tuple with no marked points.
    pub fn bare(d: i64, g: i64, r: i64) -> Self {
        Tuple::new(d, g, r, MarkedCounts::ZERO)
    }

    /// `d ≥ g + r`: the range in which a general curve is nonspecial.
    pub fn is_nonspecial_range(&self) -> bool {
        self.d >= self.g + self.r
    }

    /// Lexicographic termination measure `(d, Σn)`.
    pub fn measure(&self) -> (i64, i64) {
        (self.d, self.n.total())
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n.is_zero() {
            write!(f, "({}, {}, {}; 0)", self.d, self.g, self.r)
        } else {
            write!(f, "({}, {}, {}; {})", self.d, self.g, self.r, self.n)
        }
    }
}

/// A violated admissibility constraint.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("ambient dimension r = {r} is below 2")]
    DimensionTooSmall { r: i64 },
    #[error("genus g = {g} is negative")]
    NegativeGenus { g: i64 },
    #[error("parameter {name} = {value} exceeds the supported magnitude")]
    OutOfRange { name: &'static str, value: i64 },
    #[error("K = Σ k·n = {k_sum} is not below r - 1 = {bound}")]
    KBound { k_sum: i64, bound: i64 },
    #[error("r = 2 requires J = Σ j·n = 0, got {j_sum}")]
    PlaneWithJ { j_sum: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("({i},{j};{k}) is not an admissible marked-point type")]
    UnknownType { i: u8, j: u8, k: u8 },
    #[error("expected nine comma-separated nonnegative integers in the order {order}, got {0:?}", order = canonical_order())]
    MalformedCounts(String),
    #[error("tuple {0} is outside the nonspecial range d >= g + r")]
    BelowNonspecialRange(Tuple),
    #[error("marked-count enumeration needs r >= 3, got r = {0}")]
    EnumerationDimension(i64),
}

/// Every violated admissibility constraint of `t`; empty iff admissible.
pub fn validate(t: &Tuple) -> Vec<Violation> {
    let mut out = Vec::new();
    for (name, value) in [("d", t.d), ("g", t.g), ("r", t.r)] {
        if value.abs() > MAX_PARAMETER {
            out.push(Violation::OutOfRange { name, value });
        }
    }
    if let Some(&c) = t.n.0.iter().find(|&&c| i64::from(c) > MAX_PARAMETER) {
        out.push(Violation::OutOfRange {
            name: "n",
            value: i64::from(c),
        });
    }
    if !out.is_empty() {
        return out;
    }
    if t.r < 2 {
        out.push(Violation::DimensionTooSmall { r: t.r });
    }
    if t.g < 0 {
        out.push(Violation::NegativeGenus { g: t.g });
    }
    let k_sum = t.n.sum_k();
    if k_sum >= t.r - 1 {
        out.push(Violation::KBound {
            k_sum,
            bound: t.r - 1,
        });
    }
    if t.r == 2 && t.n.sum_j() != 0 {
        out.push(Violation::PlaneWithJ { j_sum: t.n.sum_j() });
    }
    out
}

pub fn is_admissible(t: &Tuple) -> bool {
    validate(t).is_empty()
}

/// `χ(N_C) = (r + 1)d - (r - 3)(g - 1)` for a nonspecial curve.
pub fn chi_normal(d: i64, g: i64, r: i64) -> i64 {
    (r + 1) * d - (r - 3) * (g - 1)
}

/// Euler characteristic of the modified normal bundle.
pub fn chi_modified(t: &Tuple) -> i64 {
    (t.r + 1) * t.d - (t.r - 3) * t.g - 2 - t.n.weighted(|m| m.chi_weight(t.r))
}

/// Euler characteristic of the line subbundle pointing towards `p`.
pub fn chi_top(t: &Tuple) -> Result<i64, TupleError> {
    if !t.is_nonspecial_range() {
        return Err(TupleError::BelowNonspecialRange(*t));
    }
    let chi = t.d - t.g + 2 + t.n.weighted(|m| m.i() + m.j() - 1);
    assert!(chi >= 0, "sub-line-bundle towards p has negative χ at {t}");
    Ok(chi)
}

/// Left side `Σ ((r - 2)i + (r - 3)j - k) n` of the regime inequality.
pub fn regime_lhs(t: &Tuple) -> i64 {
    t.n.weighted(|m| m.regime_weight(t.r))
}

/// Right side `2d + 2g - r - 2` of the regime inequality.
pub fn regime_rhs(t: &Tuple) -> i64 {
    2 * t.d + 2 * t.g - t.r - 2
}

/// The necessary condition for the modified normal bundle to interpolate.
pub fn regime_holds(t: &Tuple) -> bool {
    regime_lhs(t) <= regime_rhs(t)
}

/// `χ - Σ deg · corank`: the Euler characteristic after elementary
/// modifications along divisors of the given degrees and quotient ranks.
pub fn chi_split_modification(chi: i64, mods: &[(u64, u64)]) -> i64 {
    let removed: i128 = mods
        .iter()
        .map(|&(deg, corank)| i128::from(deg) * i128::from(corank))
        .sum();
    i64::try_from(i128::from(chi) - removed).expect("Euler characteristic overflows i64")
}

/// All admissible `n` with `K ≤ r - 2` for which `(d, g, r; n)` satisfies
/// the regime inequality, in lexicographic slot order.
pub fn enumerate_marked_counts(
    d: i64,
    g: i64,
    r: i64,
) -> Result<impl Iterator<Item = MarkedCounts>, TupleError> {
    if r <= 2 {
        return Err(TupleError::EnumerationDimension(r));
    }
    let rhs = 2 * d + 2 * g - r - 2;
    let k_max = r - 2;
    let mut out = Vec::new();
    if rhs >= -k_max {
        let mut walk = Walk {
            r,
            rhs,
            k_max,
            caps: enumeration_caps(d, g, r),
            current: [0; 9],
            out: &mut out,
        };
        walk.descend(0, 0, 0);
    }
    Ok(out.into_iter())
}

/// Per-slot upper bounds used by the enumeration: `(rhs + K_max) / w` for
/// types of positive regime weight `w`, `K_max / k` otherwise.
pub fn enumeration_caps(d: i64, g: i64, r: i64) -> [u32; 9] {
    let rhs = 2 * d + 2 * g - r - 2;
    let k_max = r - 2;
    let mut caps = [0u32; 9];
    for (cap, t) in caps.iter_mut().zip(MarkedType::ALL) {
        let w = t.regime_weight(r);
        let bound = if w > 0 {
            (rhs + k_max).max(0) / w
        } else {
            k_max / t.k()
        };
        *cap = u32::try_from(bound.max(0)).unwrap_or(u32::MAX);
    }
    caps
}

struct Walk<'a> {
    r: i64,
    rhs: i64,
    k_max: i64,
    caps: [u32; 9],
    current: [u32; 9],
    out: &'a mut Vec<MarkedCounts>,
}

impl Walk<'_> {
    fn descend(&mut self, slot: usize, k_sum: i64, lhs: i64) {
        // Every remaining point lowers the left side by at most its k.
        if k_sum > self.k_max || lhs - (self.k_max - k_sum) > self.rhs {
            return;
        }
        if slot == 9 {
            if lhs <= self.rhs {
                self.out.push(MarkedCounts(self.current));
            }
            return;
        }
        let t = MarkedType::ALL[slot];
        for c in 0..=self.caps[slot] {
            let c64 = i64::from(c);
            let k_next = k_sum + t.k() * c64;
            if k_next > self.k_max {
                break;
            }
            self.current[slot] = c;
            self.descend(slot + 1, k_next, lhs + t.regime_weight(self.r) * c64);
        }
        self.current[slot] = 0;
    }
}
