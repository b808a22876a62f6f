//! Shared corpus and independent oracles for the integration tests.
//!
//! Everything here is recomputed from the index formulas on explicit
//! `(i, j, k)` triples and deliberately avoids the library's own remaps, so
//! agreement with the library is meaningful.
#![allow(dead_code)]
// Inequalities are kept in the shape of the formulas they transcribe.
#![allow(clippy::int_plus_one)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nbi_core::certificate::Certificate;
use nbi_core::rules::{inductive_applications, Relation, RuleId};
use nbi_core::tuple::{is_admissible, MarkedCounts, MarkedType, Tuple};
use nbi_core::Engine;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const CORPUS_SEED: u64 = 0x6e62_6921;

pub type Points = BTreeMap<(i64, i64, i64), i64>;

pub fn points(n: &MarkedCounts) -> Points {
    let mut out = Points::new();
    for (m, c) in n.iter() {
        if c > 0 {
            out.insert((m.i(), m.j(), m.k()), c);
        }
    }
    out
}

/// Packs explicit points back into counts; `(0, 0; 0)` entries are dropped.
pub fn pack(p: &Points) -> MarkedCounts {
    let mut n = MarkedCounts::ZERO;
    for (&(i, j, k), &c) in p {
        if (i, j, k) == (0, 0, 0) || c == 0 {
            continue;
        }
        let m = MarkedType::new(i as u8, j as u8, k as u8).expect("oracle produced a known type");
        n = n.with_added(m, c as u32);
    }
    n
}

fn sums(p: &Points) -> (i64, i64, i64) {
    p.iter().fold((0, 0, 0), |(a, b, c), (&(i, j, k), &n)| {
        (a + i * n, b + j * n, c + k * n)
    })
}

pub fn regime(t: &Tuple) -> bool {
    let lhs: i64 = points(&t.n)
        .iter()
        .map(|(&(i, j, k), &n)| ((t.r - 2) * i + (t.r - 3) * j - k) * n)
        .sum();
    lhs <= 2 * t.d + 2 * t.g - t.r - 2
}

fn add(p: &Points, key: (i64, i64, i64), by: i64) -> Points {
    let mut q = p.clone();
    *q.entry(key).or_insert(0) += by;
    q
}

/// `n'_{ij}^0 = Σ_ℓ n_{ij}^ℓ` for `(i, j) ≠ (0, 0)`.
fn collapse(p: &Points) -> Points {
    let mut q = Points::new();
    for (&(i, j, _), &c) in p {
        if (i, j) != (0, 0) {
            *q.entry((i, j, 0)).or_insert(0) += c;
        }
    }
    q
}

/// `n'_{i0}^k = Σ_ℓ n_{ℓi}^k`.
fn transpose(p: &Points) -> Points {
    let mut q = Points::new();
    for (&(_, j, k), &c) in p {
        *q.entry((j, 0, k)).or_insert(0) += c;
    }
    q
}

/// `n'_{i0}^0 = Σ_{ℓ,m} n_{ℓi}^m` for `i ≠ 0`.
fn transpose_collapse(p: &Points) -> Points {
    let mut q = Points::new();
    for (&(_, j, _), &c) in p {
        if j != 0 {
            *q.entry((j, 0, 0)).or_insert(0) += c;
        }
    }
    q
}

/// A rule family as the oracle sees it: hypotheses other than the
/// closed-form child condition, the closed form itself, and the children.
#[derive(Clone, Debug)]
pub struct OracleRule {
    pub family: &'static str,
    pub choice: Option<(i64, i64, i64)>,
    pub closed_form: bool,
    pub children: Vec<Tuple>,
}

pub fn family_of(rule: RuleId) -> &'static str {
    match rule {
        RuleId::TwoSecantA | RuleId::TwoSecantB => "two-secant",
        RuleId::TwoSecantBackA | RuleId::TwoSecantBackB => "two-secant-back",
        RuleId::StickA | RuleId::StickB => "stick",
        RuleId::TwoSticksA | RuleId::TwoSticksB | RuleId::TwoSticksC => "two-sticks",
        RuleId::LowerD => "lower-d",
        RuleId::Izz => "izz",
        RuleId::Ijz => "ijz",
        RuleId::Zzk => "zzk",
        RuleId::Special5 => "special5",
        _ => "base",
    }
}

/// Every rule family whose hypotheses, apart from the closed form, hold.
pub fn oracle_rules(t: &Tuple) -> Vec<OracleRule> {
    let mut out = Vec::new();
    if !is_admissible(t) || !regime(t) || t.d < t.g + t.r {
        return out;
    }
    let (d, g, r) = (t.d, t.g, t.r);
    let p = points(&t.n);
    let (si, sj, sk) = sums(&p);
    let lhs: i64 = p
        .iter()
        .map(|(&(i, j, k), &n)| ((r - 2) * i + (r - 3) * j - k) * n)
        .sum();
    let no_k: i64 = p
        .iter()
        .map(|(&(i, j, _), &n)| ((r - 2) * i + (r - 3) * j) * n)
        .sum();
    let chi_corr: i64 = p
        .iter()
        .map(|(&(i, j, k), &n)| (r - 1 - i - 2 * j - k) * n)
        .sum();
    let chi_ok = chi_corr <= (r + 1) * d - (2 * r - 4) * g - 2;
    let dg = 2 * d + 2 * g;
    let tup = |d, g, r, q: &Points| Tuple::new(d, g, r, pack(q));
    let mut push = |family, choice, closed_form, children| {
        out.push(OracleRule {
            family,
            choice,
            closed_form,
            children,
        })
    };

    if r == 5 && g >= 2 && p.is_empty() {
        let q = Points::from([((1, 0, 1), 2)]);
        push("special5", None, dg >= 19, vec![tup(d - 2, g - 2, 5, &q)]);
    }
    if r == 3 && p.get(&(1, 1, 0)).copied().unwrap_or(0) > 0 {
        push(
            "ijz",
            Some((1, 1, 0)),
            true,
            vec![tup(d, g, r, &add(&p, (1, 1, 0), -1))],
        );
    }
    let stick_n = if sk < r - 2 {
        transpose(&p)
    } else {
        transpose_collapse(&p)
    };
    for l in [2, 1] {
        if r >= 3 && chi_ok && p.get(&(l, 0, 0)).copied().unwrap_or(0) > 0 {
            let children = vec![
                tup(d, g, r, &add(&p, (l, 0, 0), -1)),
                tup(d - 1, g, r - 1, &stick_n),
            ];
            push("izz", Some((l, 0, 0)), true, children);
        }
    }
    for l in [2, 1] {
        if chi_ok && p.get(&(0, 0, l)).copied().unwrap_or(0) > 0 {
            let children = vec![
                tup(d, g, r, &add(&p, (0, 0, l), -1)),
                tup(d, g, r, &collapse(&p)),
            ];
            push("zzk", Some((0, 0, l)), no_k <= dg - r - 2, children);
        }
    }
    if r >= 3 && g > 0 {
        let (q, closed) = if sk < r - 2 {
            (add(&p, (1, 1, 1), 1), lhs <= dg - 3 * r)
        } else {
            (add(&collapse(&p), (1, 1, 0), 1), no_k <= dg - 3 * r - 1)
        };
        push("two-secant", None, closed, vec![tup(d - 1, g - 1, r, &q)]);
    }
    if r > 3 && g > 0 && sk >= r - 3 {
        let extra = if sk == r - 3 { (1, 0, 1) } else { (1, 0, 2) };
        let q = add(&collapse(&p), extra, 1);
        push(
            "two-secant-back",
            None,
            lhs <= dg - 3 * r,
            vec![tup(d - 1, g - 1, r, &q)],
        );
    }
    if r > 3 && g > 0 && dg - 4 * r + 3 <= lhs && lhs <= dg - 2 * r - 1 {
        let q = if sk < r - 3 {
            add(&transpose(&p), (2, 0, 1), 1)
        } else if sk == r - 3 {
            add(&transpose_collapse(&p), (2, 0, 0), 1)
        } else {
            add(&transpose_collapse(&p), (2, 0, 1), 1)
        };
        let reduced: i64 = p.iter().map(|(&(_, j, k), &n)| ((r - 3) * j - k) * n).sum();
        let bound = if sk < r - 3 {
            dg - 3 * r
        } else {
            dg - 4 * r + 2
        };
        push(
            "two-sticks",
            None,
            reduced <= bound,
            vec![tup(d - 2, g - 1, r - 1, &q)],
        );
    }
    if r >= 3 && dg - 3 * r + 2 <= lhs && lhs <= dg - r - 2 {
        push("stick", None, true, vec![tup(d - 1, g, r - 1, &stick_n)]);
    }
    if r >= 3 && d > g + r && (r != 3 || sj == 0) && chi_ok {
        let lowered = if sk < r - 2 { p.clone() } else { collapse(&p) };
        let mut closed = lhs <= dg - r - 4;
        if sk == r - 2 {
            closed &= (r - 3) * si + (r - 4) * sj <= dg - r - 3;
        }
        let children = vec![tup(d - 1, g, r, &p), tup(d - 1, g, r - 1, &lowered)];
        push("lower-d", None, closed, children);
    }
    out
}

/// Seeded corpus of admissible tuples. Most lie in the nonspecial range
/// and about half are pushed up against the top of the regime inequality,
/// where Stick and TwoSticks live.
pub fn corpus(size: usize, seed: u64) -> Vec<Tuple> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let r = rng.gen_range(2..=12);
        let g = rng.gen_range(0..=8);
        let d = if rng.gen_bool(0.9) {
            g + r + rng.gen_range(0..=14)
        } else {
            rng.gen_range(0..=g + r)
        };
        let mut n = MarkedCounts::ZERO;
        for m in MarkedType::ALL {
            if rng.gen_bool(0.3) {
                n = n.with_added(m, rng.gen_range(1..=3));
            }
        }
        let mut t = Tuple::new(d, g, r, n);
        if rng.gen_bool(0.5) {
            // Fill with k = 0 points until the regime inequality is nearly tight.
            let target = 2 * d + 2 * g - r - 2 - rng.gen_range(0..=2 * r);
            let fill = [MarkedType::P100, MarkedType::P200, MarkedType::P110];
            for _ in 0..200 {
                if nbi_core::tuple::regime_lhs(&t) >= target {
                    break;
                }
                let m = fill[rng.gen_range(0..fill.len())];
                t.n = t.n.with_added(m, 1);
            }
        }
        // Shed k points until K < r - 1, and j points at r = 2.
        while t.n.sum_k() >= t.r - 1 {
            let m = *MarkedType::ALL
                .iter()
                .find(|m| m.k() > 0 && t.n.get(**m) > 0)
                .expect("K > 0 means some k point exists");
            t.n = t.n.with_removed(m).expect("present");
        }
        if t.r == 2 {
            for m in MarkedType::ALL.iter().filter(|m| m.j() > 0) {
                t.n.set(*m, 0);
            }
        }
        if is_admissible(&t) {
            out.push(t);
        }
    }
    out
}

/// Interpolation of `⊕ O(aᵢ)` checked at every degree.
pub fn brute_interpolates(degrees: &[i64]) -> bool {
    if degrees.iter().any(|&a| a < -1) {
        return false;
    }
    let m = degrees.len() as i64;
    let h0: i64 = degrees.iter().map(|&a| a + 1).sum();
    let top = degrees.iter().copied().max().unwrap_or(0) + 2;
    (1..=top).all(|e| {
        let left: i64 = degrees.iter().map(|&a| (a + 1 - e).max(0)).sum();
        left == (h0 - m * e).max(0)
    })
}

/// Every multiset of `m` degrees drawn from `lo..=hi`, in nonincreasing order.
pub fn multisets(m: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(m: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for a in (lo..=top).rev() {
            cur.push(a);
            go(m, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, lo, hi, &mut Vec::new(), &mut out);
    out
}

pub const ALL_RULES: [RuleId; 20] = [
    RuleId::TwoSecantA,
    RuleId::TwoSecantB,
    RuleId::TwoSecantBackA,
    RuleId::TwoSecantBackB,
    RuleId::StickA,
    RuleId::StickB,
    RuleId::TwoSticksA,
    RuleId::TwoSticksB,
    RuleId::TwoSticksC,
    RuleId::LowerD,
    RuleId::Izz,
    RuleId::Ijz,
    RuleId::Zzk,
    RuleId::Special5,
    RuleId::NegTwist,
    RuleId::BaseP2,
    RuleId::BaseP3Mid,
    RuleId::BaseLastCase,
    RuleId::Base835,
    RuleId::BaseRational,
];

const RELATIONS: [Relation; 6] = [
    Relation::Le,
    Relation::Lt,
    Relation::Eq,
    Relation::Ge,
    Relation::Gt,
    Relation::Ne,
];

/// Single-field edits of the node at the root of `cert`.
type TupleEdit = fn(&mut Tuple);

fn node_mutants(cert: &Certificate) -> Vec<(String, Certificate)> {
    let mut out = Vec::new();
    let mut emit = |label: String, f: &dyn Fn(&mut Certificate)| {
        let mut c = cert.clone();
        f(&mut c);
        out.push((label, c));
    };
    for idx in 0..cert.side_conditions.len() {
        for delta in [-1, 1] {
            emit(format!("cond{idx}.lhs{delta:+}"), &|c| {
                c.side_conditions[idx].lhs += delta
            });
            emit(format!("cond{idx}.rhs{delta:+}"), &|c| {
                c.side_conditions[idx].rhs += delta
            });
        }
        for rel in RELATIONS {
            if rel != cert.side_conditions[idx].rel {
                emit(format!("cond{idx}.rel={}", rel.symbol()), &|c| {
                    c.side_conditions[idx].rel = rel
                });
            }
        }
        emit(format!("cond{idx}.desc"), &|c| {
            c.side_conditions[idx].desc = format!("{} ", c.side_conditions[idx].desc).into()
        });
        emit(format!("cond{idx}.removed"), &|c| {
            c.side_conditions.remove(idx);
        });
    }
    if let Some(first) = cert.side_conditions.first().cloned() {
        emit("cond.duplicated".into(), &|c| {
            c.side_conditions.push(first.clone())
        });
    }
    for rule in ALL_RULES {
        if rule != cert.rule {
            emit(format!("rule={rule}"), &|c| c.rule = rule);
        }
    }
    for m in MarkedType::ALL.iter().copied().map(Some).chain([None]) {
        if m != cert.choice {
            emit(format!("choice={m:?}"), &|c| c.choice = m);
        }
    }
    for idx in 0..cert.children.len() {
        let edits: [(&str, TupleEdit); 6] = [
            ("d+1", |t| t.d += 1),
            ("d-1", |t| t.d -= 1),
            ("g+1", |t| t.g += 1),
            ("g-1", |t| t.g -= 1),
            ("r+1", |t| t.r += 1),
            ("r-1", |t| t.r -= 1),
        ];
        for (label, edit) in edits {
            emit(format!("child{idx}.{label}"), &|c| {
                edit(&mut Arc::make_mut(&mut c.children[idx]).tuple)
            });
        }
        for m in MarkedType::ALL {
            emit(format!("child{idx}.n[{m}]+1"), &|c| {
                let t = &mut Arc::make_mut(&mut c.children[idx]).tuple;
                t.n = t.n.with_added(m, 1);
            });
            if cert.children[idx].tuple.n.get(m) > 0 {
                emit(format!("child{idx}.n[{m}]-1"), &|c| {
                    let t = &mut Arc::make_mut(&mut c.children[idx]).tuple;
                    t.n = t.n.with_removed(m).expect("present");
                });
            }
        }
        emit(format!("child{idx}.removed"), &|c| {
            c.children.remove(idx);
        });
        emit(format!("child{idx}.duplicated"), &|c| {
            let dup = c.children[idx].clone();
            c.children.push(dup);
        });
    }
    out
}

/// Single-field edits of `cert` at its root and at each direct child,
/// labelled with their location. The root tuple is never edited: a
/// certificate for a different tuple may well be valid.
pub fn mutants(cert: &Certificate) -> Vec<(String, Certificate)> {
    let mut out: Vec<_> = node_mutants(cert)
        .into_iter()
        .map(|(l, c)| (format!("root {l}"), c))
        .collect();
    for idx in 0..cert.children.len() {
        for (label, child) in node_mutants(&cert.children[idx]) {
            let mut c = cert.clone();
            c.children[idx] = Arc::new(child);
            out.push((format!("child {idx} {label}"), c));
        }
    }
    out
}

/// Certified subtrees grouped by root rule: up to `per_rule` distinct small
/// certificates for each rule that occurs while deciding `tuples`.
pub fn certificates_by_rule(
    engine: &Engine,
    tuples: &[Tuple],
    per_rule: usize,
    max_nodes: u64,
) -> HashMap<RuleId, Vec<Arc<Certificate>>> {
    let mut out: HashMap<RuleId, Vec<Arc<Certificate>>> = HashMap::new();
    let mut seen = std::collections::HashSet::new();
    fn walk(
        c: &Arc<Certificate>,
        per_rule: usize,
        max_nodes: u64,
        seen: &mut std::collections::HashSet<Tuple>,
        out: &mut HashMap<RuleId, Vec<Arc<Certificate>>>,
    ) {
        if !seen.insert(c.tuple) {
            return;
        }
        let bucket = out.entry(c.rule).or_default();
        if bucket.len() < per_rule && c.node_count() <= max_nodes {
            bucket.push(c.clone());
        }
        for child in &c.children {
            walk(child, per_rule, max_nodes, seen, out);
        }
    }
    for t in tuples {
        if let Ok(nbi_core::Verdict::Good(cert)) = engine.decide(t) {
            walk(&cert, per_rule, max_nodes, &mut seen, &mut out);
        }
    }
    out
}

/// Family, consumed type and children: how the oracle and library are compared.
pub type KeyedRule = (&'static str, Option<(i64, i64, i64)>, Vec<Tuple>);

/// Library applications keyed the way the oracle keys its rules.
pub fn library_rules(t: &Tuple) -> Vec<KeyedRule> {
    inductive_applications(t)
        .into_iter()
        .map(|app| {
            let choice = app.choice.map(|m| (m.i(), m.j(), m.k()));
            (family_of(app.rule), choice, app.children)
        })
        .collect()
}

/// Tops up `out` with certificates rooted at applications the search would
/// not pick for itself, for any rule bucket still short of `per_rule`.
pub fn add_forced_roots(
    engine: &Engine,
    tuples: &[Tuple],
    per_rule: usize,
    out: &mut HashMap<RuleId, Vec<Arc<Certificate>>>,
) {
    for t in tuples {
        for app in inductive_applications(t) {
            if out.get(&app.rule).is_some_and(|b| b.len() >= per_rule) {
                continue;
            }
            let children: Option<Vec<_>> = app
                .children
                .iter()
                .map(|c| match engine.decide(c) {
                    Ok(nbi_core::Verdict::Good(cert)) => Some(cert),
                    _ => None,
                })
                .collect();
            let Some(children) = children else { continue };
            let cert = Certificate {
                tuple: *t,
                rule: app.rule,
                choice: app.choice,
                side_conditions: app.side_conditions,
                children,
            };
            out.entry(app.rule).or_default().push(Arc::new(cert));
        }
    }
}
