//! Memoized proof search over the reduction calculus.

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;
use thiserror::Error;

use crate::certificate::{check_certificate, Certificate};
use crate::classify::{classify, Classification};
use crate::config::{Config, SearchMode};
use crate::rules::{base_case, inductive_applications, replay, RuleId};
use crate::tuple::{regime_holds, validate, MarkedType, Tuple, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotGoodReason {
    RegimeViolation,
    KnownException,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Good(Arc<Certificate>),
    NotGood(NotGoodReason),
    Unknown,
}

/// A verdict without its certificate, as tabulated by sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Good { depth: u32 },
    NotGood(NotGoodReason),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("tuple is not admissible: {0:?}")]
    Inadmissible(Vec<Violation>),
    #[error("tuple {0} is outside the nonspecial range d >= g + r")]
    BelowNonspecialRange(Tuple),
    #[error("node budget of {budget} rule applications exhausted while deciding {tuple}")]
    BudgetExhausted { tuple: Tuple, budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MemoEntry {
    Proven {
        rule: RuleId,
        choice: Option<MarkedType>,
        depth: u32,
    },
    Failed,
}

struct Exhausted;

/// Proof search with a memo shared between queries and threads.
///
/// Entries are only ever inserted, never changed, so concurrent queries
/// agree. Aborted searches leave no `Failed` entries behind.
pub struct Engine {
    config: Config,
    memo: DashMap<Tuple, MemoEntry>,
}

impl Engine {
    pub fn new(config: Config) -> Self {
        Engine {
            config,
            memo: DashMap::new(),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Number of memoized tuples.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Decides `t`, returning a checked certificate when it is good.
    pub fn decide(&self, t: &Tuple) -> Result<Verdict, SearchError> {
        Ok(match self.status(t)? {
            Status::Good { .. } => {
                let cert = self
                    .certificate(t)
                    .expect("proven tuples have certificates");
                if let Err(failure) = check_certificate(&cert) {
                    panic!("search produced a certificate that does not replay:\n{failure}");
                }
                Verdict::Good(cert)
            }
            Status::NotGood(reason) => Verdict::NotGood(reason),
            Status::Unknown => Verdict::Unknown,
        })
    }

    /// Like [`Engine::decide`] but skips building the certificate.
    pub fn status(&self, t: &Tuple) -> Result<Status, SearchError> {
        let violations = validate(t);
        if !violations.is_empty() {
            return Err(SearchError::Inadmissible(violations));
        }
        if !t.is_nonspecial_range() {
            return Err(SearchError::BelowNonspecialRange(*t));
        }
        if !regime_holds(t) {
            return Ok(Status::NotGood(NotGoodReason::RegimeViolation));
        }
        let mut used = 0u64;
        let proven =
            self.search(t, &mut used)
                .map_err(|Exhausted| SearchError::BudgetExhausted {
                    tuple: *t,
                    budget: self.config.node_budget,
                })?;
        let closed = classify(t, &self.config).expect("admissible and nonspecial");
        if let Some(depth) = proven {
            assert_ne!(
                closed,
                Classification::NotGood,
                "search certified {t}, which is known not to be good"
            );
            return Ok(Status::Good { depth });
        }
        Ok(if closed == Classification::NotGood {
            Status::NotGood(NotGoodReason::KnownException)
        } else {
            Status::Unknown
        })
    }

    /// Returns the certificate depth if `t` is proven.
    fn search(&self, t: &Tuple, used: &mut u64) -> Result<Option<u32>, Exhausted> {
        if let Some(entry) = self.memo.get(t).map(|e| *e) {
            return Ok(match entry {
                MemoEntry::Proven { depth, .. } => Some(depth),
                MemoEntry::Failed => None,
            });
        }
        if let Some(app) = base_case(t, self.config.rational_base) {
            self.remember(
                t,
                MemoEntry::Proven {
                    rule: app.rule,
                    choice: None,
                    depth: 0,
                },
            );
            return Ok(Some(0));
        }
        'apps: for app in inductive_applications(t) {
            *used += 1;
            if *used > self.config.node_budget {
                return Err(Exhausted);
            }
            let mut depth = 0;
            for child in &app.children {
                match self.search(child, used)? {
                    Some(d) => depth = depth.max(d + 1),
                    None if self.config.mode == SearchMode::Greedy => break 'apps,
                    None => continue 'apps,
                }
            }
            self.remember(
                t,
                MemoEntry::Proven {
                    rule: app.rule,
                    choice: app.choice,
                    depth,
                },
            );
            return Ok(Some(depth));
        }
        self.remember(t, MemoEntry::Failed);
        Ok(None)
    }

    fn remember(&self, t: &Tuple, entry: MemoEntry) {
        // Another worker may have finished the same tuple first; either
        // answer is correct, so keep whichever landed.
        self.memo.entry(*t).or_insert(entry);
    }

    /// Rebuilds the certificate of a proven tuple from the memo, sharing
    /// repeated subtrees.
    pub fn certificate(&self, t: &Tuple) -> Option<Arc<Certificate>> {
        let mut built = HashMap::new();
        self.build(t, &mut built)
    }

    fn build(
        &self,
        t: &Tuple,
        built: &mut HashMap<Tuple, Arc<Certificate>>,
    ) -> Option<Arc<Certificate>> {
        if let Some(cert) = built.get(t) {
            return Some(cert.clone());
        }
        let MemoEntry::Proven { rule, choice, .. } = self.memo.get(t).map(|e| *e)? else {
            return None;
        };
        let app = replay(t, rule, choice).expect("memoized applications replay");
        let children = app
            .children
            .iter()
            .map(|c| {
                self.build(c, built)
                    .expect("children of proven tuples are proven")
            })
            .collect();
        let cert = Arc::new(Certificate {
            tuple: *t,
            rule,
            choice,
            side_conditions: app.side_conditions,
            children,
        });
        built.insert(*t, cert.clone());
        Some(cert)
    }
}
