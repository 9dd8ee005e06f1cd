//! Exact counts of execution records seen as annotated partial Dyck paths.
//!
//! A record of size `t` has `t` up-steps (Color). Each up-step may be
//! followed by one descent of length `s_j` annotated with a class
//! `k ≤ C_j`; the level never drops below zero. `b_t` counts records that
//! end at level 0, `r_t` those ending at a level at most `n`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bounds::{characteristic_system, BoundsError, QPolynomial, Term};
use crate::engine::{EventId, Record};

#[derive(Debug, Error, PartialEq)]
pub enum RecordsError {
    #[error("enumeration refuses t = {t} (limit {limit})")]
    TooLarge { t: usize, limit: usize },
    #[error("term with {cost} classes has size {size}")]
    BadTerm { cost: u64, size: usize },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Largest size accepted by [`enumerate_records`].
pub const ENUMERATION_LIMIT: usize = 14;

/// A bad-event type with an integer class count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntTerm {
    pub cost: u64,
    pub size: usize,
}

impl IntTerm {
    pub fn new(cost: u64, size: usize) -> Self {
        IntTerm { cost, size }
    }
}

/// Integer terms from real costs, taking ⌊C⌋. Types keep their positions,
/// so a type whose ceiling is below 1 stays with zero classes.
pub fn floor_terms(terms: &[(f64, usize)]) -> Vec<IntTerm> {
    terms.iter().map(|&(c, s)| IntTerm::new(c.max(0.0).floor() as u64, s)).collect()
}

fn validate(terms: &[IntTerm]) -> Result<(), RecordsError> {
    match terms.iter().find(|t| t.size == 0) {
        Some(t) => Err(RecordsError::BadTerm { cost: t.cost, size: t.size }),
        None => Ok(()),
    }
}

pub fn period(terms: &[IntTerm]) -> usize {
    terms.iter().filter(|t| t.cost > 0).fold(0, |g, t| g.gcd(&t.size))
}

/// Coefficients of B(y)^e for e = 0..=max_power up to y^{t_max}, where
/// B = 1 + Σ C_j y^{s_j} B^{s_j}.
fn series(terms: &[IntTerm], t_max: usize, max_power: usize) -> Vec<Vec<BigUint>> {
    let max_s = terms.iter().map(|t| t.size).max().unwrap_or(0);
    let top = max_power.max(max_s).max(1);
    let mut pow = vec![vec![BigUint::zero(); t_max + 1]; top + 1];
    pow[0][0] = BigUint::one();
    for t in 0..=t_max {
        let mut bt = if t == 0 { BigUint::one() } else { BigUint::zero() };
        for term in terms {
            if term.size <= t {
                bt += &pow[term.size][t - term.size] * term.cost;
            }
        }
        pow[1][t] = bt;
        for e in 2..=top {
            let mut c = BigUint::zero();
            for i in 0..=t {
                if !pow[1][i].is_zero() && !pow[e - 1][t - i].is_zero() {
                    c += &pow[1][i] * &pow[e - 1][t - i];
                }
            }
            pow[e][t] = c;
        }
    }
    pow
}

/// b_0..=b_{t_max}.
pub fn count_b(terms: &[IntTerm], t_max: usize) -> Result<Vec<BigUint>, RecordsError> {
    validate(terms)?;
    Ok(series(terms, t_max, 1).swap_remove(1))
}

/// r_0..=r_{t_max} for level cap `n`: the coefficients of Σ_{ℓ≤n} y^ℓ B^{ℓ+1}.
pub fn count_r(terms: &[IntTerm], n: usize, t_max: usize) -> Result<Vec<BigUint>, RecordsError> {
    validate(terms)?;
    let pow = series(terms, t_max, n + 1);
    Ok((0..=t_max).map(|t| (0..=n.min(t)).fold(BigUint::zero(), |acc, l| acc + &pow[l + 1][t - l])).collect())
}

/// Walks every record of size `t` whose final level is at most `n`,
/// calling `visit` with the lines and the final level.
fn walk(terms: &[IntTerm], n: usize, t: usize, visit: &mut dyn FnMut(&[Option<EventId>], usize)) {
    fn go(
        terms: &[IntTerm],
        n: usize,
        t: usize,
        level: usize,
        steps: &mut Vec<Option<EventId>>,
        visit: &mut dyn FnMut(&[Option<EventId>], usize),
    ) {
        if steps.len() == t {
            if level <= n {
                visit(steps, level);
            }
            return;
        }
        let up = level + 1;
        steps.push(None);
        go(terms, n, t, up, steps, visit);
        steps.pop();
        for (j, term) in terms.iter().enumerate() {
            if term.size > up {
                continue;
            }
            for k in 1..=term.cost as usize {
                steps.push(Some(EventId { j: j + 1, k }));
                go(terms, n, t, up - term.size, steps, visit);
                steps.pop();
            }
        }
    }
    go(terms, n, t, 0, &mut Vec::with_capacity(t), visit);
}

/// Every record of size `t` ending at level at most `n`. Intermediate levels
/// are not capped, matching the generating function behind [`count_r`].
pub fn enumerate_records(terms: &[IntTerm], n: usize, t: usize) -> Result<Vec<Record>, RecordsError> {
    validate(terms)?;
    if t > ENUMERATION_LIMIT {
        return Err(RecordsError::TooLarge { t, limit: ENUMERATION_LIMIT });
    }
    let mut out = Vec::new();
    walk(terms, n, t, &mut |steps, _| {
        let mut rec = Record::new();
        for step in steps {
            rec.push_color();
            if let Some(ev) = step {
                rec.push_uncolor(*ev).expect("follows a color line");
            }
        }
        out.push(rec);
    });
    Ok(out)
}

/// (b_t, r_t) by exhaustive enumeration.
pub fn brute_counts(terms: &[IntTerm], n: usize, t: usize) -> Result<(u64, u64), RecordsError> {
    validate(terms)?;
    if t > ENUMERATION_LIMIT {
        return Err(RecordsError::TooLarge { t, limit: ENUMERATION_LIMIT });
    }
    let (mut b, mut r) = (0u64, 0u64);
    walk(terms, n, t, &mut |_, level| {
        r += 1;
        if level == 0 {
            b += 1;
        }
    });
    Ok((b, r))
}

/// Whether `record` is a legal annotated path for `terms`: every class is
/// in range, the level stays non-negative and ends at most `n`.
pub fn is_legal(record: &Record, terms: &[IntTerm], n: usize) -> bool {
    let mut level = 0usize;
    for step in record.steps() {
        level += 1;
        if let Some(ev) = step {
            let Some(term) = ev.j.checked_sub(1).and_then(|j| terms.get(j)) else {
                return false;
            };
            if ev.k == 0 || ev.k as u64 > term.cost || term.size > level {
                return false;
            }
            level -= term.size;
        }
    }
    level <= n
}

/// r_t when every size is 1: Σ_{ℓ≤min(n,t)} binom(t, ℓ) C^{t−ℓ} with C = Σ C_j.
pub fn unit_size_r(terms: &[IntTerm], n: usize, t: usize) -> BigUint {
    let c: u64 = terms.iter().map(|t| t.cost).sum();
    let mut binom = BigUint::one();
    let mut total = BigUint::zero();
    for l in 0..=n.min(t) {
        if l > 0 {
            binom = binom * (t - l + 1) / l;
        }
        total += &binom * BigUint::from(c).pow((t - l) as u32);
    }
    total
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// One row of [`growth_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub t: usize,
    pub b: BigUint,
    /// ln((s + 1)(Q(X)/X)^t).
    pub ln_bound: f64,
    /// b_t^{1/t} / (Q(X)/X); `None` when b_t = 0 or t = 0.
    pub normalized: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub x: f64,
    pub s: f64,
    pub ratio: f64,
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Checks b_t ≤ (s + 1)(Q(X)/X)^t for t ≤ t_max, with (X, s) from the
/// characteristic system. Requires some size of at least 2.
pub fn growth_check(terms: &[IntTerm], t_max: usize) -> Result<GrowthReport, RecordsError> {
    validate(terms)?;
    let q = QPolynomial::new(
        terms.iter().filter(|t| t.cost > 0).map(|t| Term::new(t.cost as f64, t.size as u32)).collect(),
    )?;
    let cs = characteristic_system(&q)?;
    let ratio = q.ratio(cs.x);
    let b = count_b(terms, t_max)?;
    let rows = b
        .into_iter()
        .enumerate()
        .map(|(t, bt)| {
            let ln_bound = (cs.s + 1.0).ln() + t as f64 * ratio.ln();
            let lb = ln_big(&bt);
            let normalized = (t > 0 && !bt.is_zero()).then(|| (lb / t as f64).exp() / ratio);
            GrowthRow { t, b: bt, ln_bound, normalized, holds: lb <= ln_bound + 1e-9 * ln_bound.abs().max(1.0) }
        })
        .collect();
    Ok(GrowthReport { x: cs.x, s: cs.s, ratio, rows })
}

/// Offset used by [`offset_check`]: the least `c ≥ n·max s_j` with
/// `d | t + c`.
pub fn offset_for(terms: &[IntTerm], n: usize, t: usize) -> usize {
    let d = period(terms).max(1);
    let base = n * terms.iter().map(|t| t.size).max().unwrap_or(1);
    let mut c = base;
    while !(t + c).is_multiple_of(d) {
        c += 1;
    }
    c
}

/// For each t ≤ t_max, whether r_t ≤ b_{t+c} with c from [`offset_for`].
/// Only meaningful when some size is at least 2.
pub fn offset_check(terms: &[IntTerm], n: usize, t_max: usize) -> Result<Vec<(usize, bool)>, RecordsError> {
    validate(terms)?;
    let c_max = (0..=t_max).map(|t| offset_for(terms, n, t)).max().unwrap_or(0);
    let b = count_b(terms, t_max + c_max)?;
    let r = count_r(terms, n, t_max)?;
    Ok((0..=t_max).map(|t| (t, r[t] <= b[t + offset_for(terms, n, t)])).collect())
}
