//! Exhaustive sweeps over ranges of tuples, with a byte-stable CSV report.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{Engine, NotGoodReason, SearchError, Status};
use crate::tuple::{enumerate_marked_counts, Tuple};

/// Inclusive integer interval with optional ends, written `a..b`, `a..`,
/// `..b` or a single value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Span {
    pub fn exact(v: i64) -> Self {
        Span {
            lo: Some(v),
            hi: Some(v),
        }
    }

    pub fn between(lo: i64, hi: i64) -> Self {
        Span {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn up_to(hi: i64) -> Self {
        Span {
            lo: None,
            hi: Some(hi),
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }
}

impl FromStr for Span {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::BadSpan(s.to_string());
        let parse = |part: &str| -> Result<Option<i64>, SweepError> {
            let part = part.trim();
            if part.is_empty() {
                Ok(None)
            } else {
                part.parse().map(Some).map_err(|_| bad())
            }
        };
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Span {
                lo: parse(lo)?,
                hi: parse(hi.strip_prefix('=').unwrap_or(hi))?,
            }),
            None => {
                let v = parse(s)?.ok_or_else(bad)?;
                Ok(Span::exact(v))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NMode {
    ZeroOnly,
    #[default]
    Enumerate,
}

impl FromStr for NMode {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero-only" => Ok(NMode::ZeroOnly),
            "enumerate" => Ok(NMode::Enumerate),
            other => Err(SweepError::BadNMode(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeSpec {
    pub r: Span,
    pub d: Span,
    pub g: Span,
    pub d_plus_g: Span,
    pub n_mode: NMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("cannot parse range {0:?}; expected a..b, a.., ..b or a single integer")]
    BadSpan(String),
    #[error("unknown n-mode {0:?}; expected zero-only or enumerate")]
    BadNMode(String),
    #[error("r must be bounded on both sides and at least 2")]
    UnboundedDimension,
    #[error("the range needs an upper bound on d or on d+g")]
    Unbounded,
    #[error("enumerating marked points at r = 2 is infinite; use zero-only")]
    PlaneEnumeration,
    #[error("thread pool: {0}")]
    Pool(String),
}

impl RangeSpec {
    /// Every `(d, g, r)` in range with `d ≥ g + r`, in ascending order.
    pub fn triples(&self) -> Result<Vec<(i64, i64, i64)>, SweepError> {
        let (Some(r_lo), Some(r_hi)) = (self.r.lo, self.r.hi) else {
            return Err(SweepError::UnboundedDimension);
        };
        if r_lo < 2 {
            return Err(SweepError::UnboundedDimension);
        }
        if self.d.hi.is_none() && self.d_plus_g.hi.is_none() {
            return Err(SweepError::Unbounded);
        }
        if r_lo == 2 && self.n_mode == NMode::Enumerate {
            return Err(SweepError::PlaneEnumeration);
        }
        let mut out = Vec::new();
        for r in r_lo..=r_hi {
            // d ≥ g + r bounds g through whichever upper bound is present.
            let g_cap = [
                self.d.hi.map(|d| d - r),
                self.d_plus_g.hi.map(|s| (s - r).div_euclid(2)),
            ]
            .into_iter()
            .flatten()
            .min()
            .expect("some bound exists");
            let d_cap = [self.d.hi, self.d_plus_g.hi]
                .into_iter()
                .flatten()
                .min()
                .expect("bounded");
            for g in self.g.lo.unwrap_or(0).max(0)..=g_cap.min(self.g.hi.unwrap_or(i64::MAX)) {
                for d in (g + r).max(self.d.lo.unwrap_or(i64::MIN))..=d_cap {
                    if self.d.contains(d) && self.d_plus_g.contains(d + g) {
                        out.push((d, g, r));
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Every tuple the sweep decides.
    pub fn tuples(&self) -> Result<Vec<Tuple>, SweepError> {
        let mut out = Vec::new();
        for (d, g, r) in self.triples()? {
            match self.n_mode {
                NMode::ZeroOnly => out.push(Tuple::bare(d, g, r)),
                NMode::Enumerate => out.extend(
                    enumerate_marked_counts(d, g, r)
                        .expect("r >= 3 checked above")
                        .map(|n| Tuple::new(d, g, r, n)),
                ),
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowVerdict {
    Good,
    NotGoodRegime,
    NotGoodException,
    Unknown,
    Aborted,
}

impl RowVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RowVerdict::Good => "good",
            RowVerdict::NotGoodRegime => "notgood-regime",
            RowVerdict::NotGoodException => "notgood-exception",
            RowVerdict::Unknown => "unknown",
            RowVerdict::Aborted => "aborted",
        }
    }

    pub fn is_not_good(self) -> bool {
        matches!(
            self,
            RowVerdict::NotGoodRegime | RowVerdict::NotGoodException
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub tuple: Tuple,
    pub verdict: RowVerdict,
    /// Certificate depth for good rows.
    pub depth: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Sorted by tuple.
    pub rows: Vec<Row>,
}

impl Report {
    pub fn count(&self, verdict: RowVerdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn good(&self) -> usize {
        self.count(RowVerdict::Good)
    }

    pub fn not_good(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict.is_not_good()).count()
    }

    pub fn unknown(&self) -> usize {
        self.count(RowVerdict::Unknown)
    }

    pub fn aborted(&self) -> usize {
        self.count(RowVerdict::Aborted)
    }

    /// Every row that is not good, in order.
    pub fn non_good(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.verdict != RowVerdict::Good)
    }

    /// One-line `good=… notgood=… unknown=…` summary; aborted rows are
    /// appended only when there are any.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "good={} notgood={} unknown={}",
            self.good(),
            self.not_good(),
            self.unknown()
        );
        if self.aborted() > 0 {
            s.push_str(&format!(" aborted={}", self.aborted()));
        }
        s
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["d".to_string(), "g".into(), "r".into()];
        header.extend((0..9).map(|i| format!("n{i}")));
        header.extend(["verdict".into(), "rule_path_depth".into()]);
        w.write_record(&header)?;
        for row in &self.rows {
            let t = row.tuple;
            let mut rec = vec![t.d.to_string(), t.g.to_string(), t.r.to_string()];
            rec.extend(t.n.slots().iter().map(u32::to_string));
            rec.push(row.verdict.as_str().to_string());
            rec.push(row.depth.map(|d| d.to_string()).unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tuple, self.verdict.as_str())
    }
}

/// Thread stack size for sweep workers; searches recurse once per rule.
const WORKER_STACK: usize = 64 << 20;

/// Decides every tuple of `spec` on `engine`, using `engine.config().jobs`
/// worker threads that share its memo.
pub fn sweep(engine: &Engine, spec: &RangeSpec) -> Result<Report, SweepError> {
    let tuples = spec.tuples()?;
    sweep_tuples(engine, tuples)
}

/// Decides an explicit list of tuples; duplicates are kept.
pub fn sweep_tuples(engine: &Engine, tuples: Vec<Tuple>) -> Result<Report, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(engine.config().jobs)
        .stack_size(WORKER_STACK)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let mut rows: Vec<Row> =
        pool.install(|| tuples.into_par_iter().map(|t| row_for(engine, t)).collect());
    rows.sort_by_key(|row| row.tuple);
    Ok(Report { rows })
}

fn row_for(engine: &Engine, tuple: Tuple) -> Row {
    let (verdict, depth) = match engine.status(&tuple) {
        Ok(Status::Good { depth }) => (RowVerdict::Good, Some(depth)),
        Ok(Status::NotGood(NotGoodReason::RegimeViolation)) => (RowVerdict::NotGoodRegime, None),
        Ok(Status::NotGood(NotGoodReason::KnownException)) => (RowVerdict::NotGoodException, None),
        Ok(Status::Unknown) => (RowVerdict::Unknown, None),
        Err(SearchError::BudgetExhausted { .. }) => (RowVerdict::Aborted, None),
        Err(e) => unreachable!("sweep tuples are admissible and nonspecial: {e}"),
    };
    Row {
        tuple,
        verdict,
        depth,
    }
}
