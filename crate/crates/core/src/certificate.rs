//! Proof certificates and their independent checker.
//!
//! A certificate is a tree of rule applications ending in base cases. The
//! checker replays every node from its tuple, rule and choice alone, so it
//! trusts nothing the search recorded.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::rules::{replay, RuleId, SideCondition};
use crate::tuple::{validate, MarkedType, Tuple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tuple: Tuple,
    pub rule: RuleId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<MarkedType>,
    pub side_conditions: Vec<SideCondition>,
    pub children: Vec<Arc<Certificate>>,
}

impl Certificate {
    /// Number of nodes counted as a tree, so shared subtrees count repeatedly.
    pub fn node_count(&self) -> u64 {
        1 + self.children.iter().map(|c| c.node_count()).sum::<u64>()
    }

    /// Length of the longest root-to-leaf path, counted in edges.
    pub fn depth(&self) -> u32 {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Whether any node uses `rule`.
    pub fn uses(&self, rule: RuleId) -> bool {
        self.rule == rule || self.children.iter().any(|c| c.uses(rule))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Inadmissible,
    /// A recorded side condition is false as written.
    UnsatisfiedCondition,
    /// The rule does not apply to the node's tuple.
    NotApplicable,
    /// The recorded side conditions differ from the replayed ones.
    ConditionMismatch,
    ChildCount {
        expected: usize,
        found: usize,
    },
    ChildTuple {
        index: usize,
        expected: Tuple,
        found: Tuple,
    },
    MeasureNotDecreasing {
        index: usize,
    },
}

/// The first node, in preorder, that fails to replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    /// Child indices leading from the root to the failing node.
    pub path: Vec<usize>,
    pub tuple: Tuple,
    pub rule: RuleId,
    pub kind: FailureKind,
    /// Side conditions as evaluated by the replay, when it got that far.
    pub evaluated: Vec<SideCondition>,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "node at path {:?}: {} by {}: {:?}",
            self.path, self.tuple, self.rule, self.kind
        )?;
        for cond in &self.evaluated {
            writeln!(f, "  {cond}")?;
        }
        Ok(())
    }
}

/// Replays `cert` node by node; `Ok` iff every node verifies.
///
/// The failure is returned by value: it is produced at most once per check.
#[allow(clippy::result_large_err)]
pub fn check_certificate(cert: &Certificate) -> Result<(), CheckFailure> {
    let mut verified = HashSet::new();
    let mut path = Vec::new();
    check_node(cert, &mut path, &mut verified)
}

#[allow(clippy::result_large_err)]
fn check_node(
    cert: &Certificate,
    path: &mut Vec<usize>,
    verified: &mut HashSet<*const Certificate>,
) -> Result<(), CheckFailure> {
    if verified.contains(&(cert as *const Certificate)) {
        return Ok(());
    }
    let fail = |kind, evaluated: Vec<SideCondition>, path: &Vec<usize>| CheckFailure {
        path: path.clone(),
        tuple: cert.tuple,
        rule: cert.rule,
        kind,
        evaluated,
    };
    if !validate(&cert.tuple).is_empty() {
        return Err(fail(FailureKind::Inadmissible, vec![], path));
    }
    if cert.side_conditions.iter().any(|c| !c.satisfied()) {
        return Err(fail(
            FailureKind::UnsatisfiedCondition,
            cert.side_conditions.clone(),
            path,
        ));
    }
    let app = replay(&cert.tuple, cert.rule, cert.choice)
        .map_err(|e| fail(FailureKind::NotApplicable, e.evaluated, path))?;
    if app.side_conditions != cert.side_conditions {
        return Err(fail(
            FailureKind::ConditionMismatch,
            app.side_conditions,
            path,
        ));
    }
    if app.children.len() != cert.children.len() {
        let kind = FailureKind::ChildCount {
            expected: app.children.len(),
            found: cert.children.len(),
        };
        return Err(fail(kind, app.side_conditions, path));
    }
    for (index, (expected, child)) in app.children.iter().zip(&cert.children).enumerate() {
        if *expected != child.tuple {
            let kind = FailureKind::ChildTuple {
                index,
                expected: *expected,
                found: child.tuple,
            };
            return Err(fail(kind, app.side_conditions, path));
        }
        if child.tuple.measure() >= cert.tuple.measure() {
            let kind = FailureKind::MeasureNotDecreasing { index };
            return Err(fail(kind, app.side_conditions, path));
        }
    }
    for (index, child) in cert.children.iter().enumerate() {
        path.push(index);
        check_node(child, path, verified)?;
        path.pop();
    }
    verified.insert(cert as *const Certificate);
    Ok(())
}
