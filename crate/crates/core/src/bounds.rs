//! Bound calculator: Q(x) = 1 + Σ C_j x^{s_j}, minimization of Q(x)/x,
//! per-problem presets, the α optimizer for the special-pair acyclic bound
//! and the characteristic system behind the record-count asymptotics.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("x = {x} lies outside (0, {radius})")]
    Domain { x: f64, radius: f64 },
    #[error("{param} = {value} is below the required {threshold}")]
    OutOfRange { param: &'static str, value: f64, threshold: f64 },
    #[error("polynomial has no terms")]
    NoTerms,
    #[error("term with cost {cost} and size {size} is invalid")]
    BadTerm { cost: f64, size: u32 },
    #[error("every term has size 1; the characteristic system does not apply")]
    NotApplicable,
}

/// One summand `C x^s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub cost: f64,
    pub size: u32,
}

impl Term {
    pub fn new(cost: f64, size: u32) -> Self {
        Term { cost, size }
    }
}

/// Closed-form upper surrogates of infinite term families, valid below a
/// radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    AcyclicGamma { delta: f64, gamma: f64 },
    AcyclicV2 { delta: f64 },
    NonrepVertex { delta: f64 },
    NonrepEdge { delta: f64 },
    FacialVertex { delta: f64 },
    FacialEdge,
}

impl ClosedForm {
    pub fn radius(&self) -> f64 {
        match *self {
            ClosedForm::AcyclicGamma { delta, .. } | ClosedForm::AcyclicV2 { delta } => 1.0 / delta,
            ClosedForm::NonrepVertex { delta } | ClosedForm::NonrepEdge { delta } => 1.0 / (delta * delta),
            ClosedForm::FacialVertex { .. } | ClosedForm::FacialEdge => 1.0,
        }
    }

    fn q_unchecked(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::AcyclicGamma { delta: d, gamma } => {
                1.0 + d * x + gamma * d * d * x * x / (2.0 - 2.0 * d * d * x * x)
            }
            ClosedForm::AcyclicV2 { delta: d } => {
                1.0 + d * x
                    + 0.5 * d.powf(4.0 / 3.0) * x
                    + 0.25 * d.powf(8.0 / 3.0) * x * x
                    + d.powf(14.0 / 3.0) * x.powi(4) / (1.0 - d * d * x * x)
            }
            ClosedForm::NonrepVertex { delta: d } => 1.0 + d * x / (d * d * x - 1.0).powi(2),
            ClosedForm::NonrepEdge { delta: d } => 1.0 + 2.0 * d * x / (d * d * x - 1.0).powi(2),
            ClosedForm::FacialVertex { delta: d } => 1.0 + d * x + 2.0 * d * x * x * (2.0 - x) / (x - 1.0).powi(2),
            ClosedForm::FacialEdge => 1.0 / (1.0 - x) + 2.0 * x / (1.0 - x).powi(2),
        }
    }

    /// Q(x), refusing `x` outside `(0, radius)`.
    pub fn q(&self, x: f64) -> Result<f64, BoundsError> {
        let radius = self.radius();
        if !(x > 0.0 && x < radius && x <= 1.0) {
            return Err(BoundsError::Domain { x, radius });
        }
        Ok(self.q_unchecked(x))
    }

    pub fn ratio(&self, x: f64) -> Result<f64, BoundsError> {
        Ok(self.q(x)? / x)
    }
}

/// Q(x) as a finite list of terms, optionally with a closed-form surrogate
/// used by [`eval_at`].
#[derive(Clone, Debug, PartialEq)]
pub struct QPolynomial {
    terms: Vec<Term>,
    closed_form: Option<ClosedForm>,
}

impl QPolynomial {
    pub fn new(terms: Vec<Term>) -> Result<Self, BoundsError> {
        if terms.is_empty() {
            return Err(BoundsError::NoTerms);
        }
        for t in &terms {
            if !(t.cost > 0.0 && t.cost.is_finite()) || t.size == 0 {
                return Err(BoundsError::BadTerm { cost: t.cost, size: t.size });
            }
        }
        Ok(QPolynomial { terms, closed_form: None })
    }

    pub fn from_pairs(pairs: &[(f64, u32)]) -> Result<Self, BoundsError> {
        QPolynomial::new(pairs.iter().map(|&(c, s)| Term::new(c, s)).collect())
    }

    pub fn with_closed_form(mut self, cf: ClosedForm) -> Self {
        self.closed_form = Some(cf);
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    pub fn q(&self, x: f64) -> f64 {
        1.0 + self.terms.iter().map(|t| t.cost * x.powi(t.size as i32)).sum::<f64>()
    }

    /// P(x) = −1 + Σ (s_j − 1) C_j x^{s_j}, which equals x Q'(x) − Q(x).
    pub fn p(&self, x: f64) -> f64 {
        -1.0 + self.terms.iter().map(|t| (t.size as f64 - 1.0) * t.cost * x.powi(t.size as i32)).sum::<f64>()
    }

    pub fn ratio(&self, x: f64) -> f64 {
        self.q(x) / x
    }

    /// gcd of the term sizes.
    pub fn period(&self) -> u32 {
        self.terms.iter().fold(0u32, |g, t| g.gcd(&t.size))
    }

    fn all_unit(&self) -> bool {
        self.terms.iter().all(|t| t.size == 1)
    }

    /// Positive root of P, not clamped to (0, 1]. `None` when every size is 1.
    pub fn root(&self) -> Option<f64> {
        if self.all_unit() {
            return None;
        }
        let mut hi = 1.0;
        while self.p(hi) < 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if self.p(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// ⌈r⌉ with a small allowance for float noise on exact integers.
pub fn ceil_kappa(ratio: f64) -> u64 {
    (ratio - 1e-9 * ratio.abs().max(1.0)).ceil().max(1.0) as u64
}

/// Minimizer of Q(x)/x on (0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioResult {
    pub x: f64,
    pub ratio: f64,
    pub kappa: u64,
    /// |P(X)|.
    pub residual: f64,
    /// The root of P lies above 1 and X was clamped.
    pub boundary: bool,
    /// Q/x at X ± 1e−6 is not smaller than at X.
    pub certified: bool,
}

impl fmt::Display for RatioResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X={:.6e} ratio={:.6} kappa={} residual={:.2e}", self.x, self.ratio, self.kappa, self.residual)
    }
}

fn certify(f: &dyn Fn(f64) -> f64, x: f64, upper: f64) -> bool {
    let eps = 1e-6 * x.max(1e-300);
    let here = f(x);
    let slack = 1e-12 * here.abs();
    let left = x - eps <= 0.0 || f(x - eps) >= here - slack;
    let right = x + eps >= upper || f(x + eps) >= here - slack;
    left && right
}

/// Minimizes Q(x)/x over (0, 1] using the finite terms.
pub fn optimize_ratio(q: &QPolynomial) -> RatioResult {
    if q.all_unit() {
        let ratio = q.q(1.0);
        return RatioResult {
            x: 1.0,
            ratio,
            kappa: ceil_kappa(ratio),
            residual: 0.0,
            boundary: false,
            certified: true,
        };
    }
    let root = q.root().expect("some size exceeds 1");
    let (x, boundary) = if root > 1.0 { (1.0, true) } else { (root, false) };
    let ratio = q.ratio(x);
    RatioResult {
        x,
        ratio,
        kappa: ceil_kappa(ratio),
        residual: q.p(x).abs(),
        boundary,
        certified: certify(&|t| q.ratio(t), x, 1.0 + 1e-9),
    }
}

/// Q(x)/x: through the closed form when one is attached (refusing `x`
/// outside its radius), otherwise the finite sum.
pub fn eval_at(q: &QPolynomial, x: f64) -> Result<f64, BoundsError> {
    match q.closed_form {
        Some(cf) => cf.ratio(x),
        None if x > 0.0 && x <= 1.0 => Ok(q.ratio(x)),
        None => Err(BoundsError::Domain { x, radius: 1.0 }),
    }
}

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
pub fn golden_section(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes a closed-form ratio over (0, min(1, radius)), searching in
/// log x since minimizers can be tiny.
pub fn optimize_closed_form(cf: ClosedForm) -> RatioResult {
    let upper = cf.radius().min(1.0);
    let top = if cf.radius() <= 1.0 { upper * (1.0 - 1e-12) } else { 1.0 };
    let f = |lx: f64| cf.q_unchecked(lx.exp()) / lx.exp();
    let lx = golden_section(&f, (upper * 1e-9).ln(), top.ln(), 1e-13);
    let x = lx.exp();
    let ratio = cf.q_unchecked(x) / x;
    let h = 1e-6 * x;
    let dq = (cf.q_unchecked(x + h) - cf.q_unchecked(x - h)) / (2.0 * h);
    RatioResult {
        x,
        ratio,
        kappa: ceil_kappa(ratio),
        residual: (x * dq - cf.q_unchecked(x)).abs(),
        boundary: false,
        certified: certify(&|t| cf.q_unchecked(t) / t, x, top),
    }
}

fn pinned(q: &QPolynomial, x: f64) -> Result<RatioResult, BoundsError> {
    let ratio = eval_at(q, x)?;
    let residual = match q.closed_form {
        Some(cf) => {
            let h = 1e-7 * x;
            let dq = (cf.q_unchecked(x + h) - cf.q_unchecked(x - h)) / (2.0 * h);
            (x * dq - cf.q_unchecked(x)).abs()
        }
        None => q.p(x).abs(),
    };
    Ok(RatioResult { x, ratio, kappa: ceil_kappa(ratio), residual, boundary: false, certified: false })
}

/// A forbidden bipartite pattern, described by its sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Path on the given number of vertices.
    Path(usize),
    /// Any other connected bipartite graph.
    Graph { vertices: usize, edges: usize },
}

impl Pattern {
    pub fn vertices(&self) -> usize {
        match *self {
            Pattern::Path(n) => n,
            Pattern::Graph { vertices, .. } => vertices,
        }
    }

    pub fn edges(&self) -> usize {
        match *self {
            Pattern::Path(n) => n.saturating_sub(1),
            Pattern::Graph { edges, .. } => edges,
        }
    }
}

/// A problem for which a color bound is computed.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    AcyclicGamma { delta: u64, gamma: u64 },
    AcyclicV1 { delta: u64, alpha: f64 },
    AcyclicV2 { delta: u64 },
    NonrepVertex { delta: u64 },
    NonrepEdge { delta: u64 },
    FacialVertex { delta: u64 },
    FacialEdge,
    RAcyclic { delta: u64, r: u64 },
    PairForbidden { delta: u64, m: u64, patterns: Vec<Pattern> },
    StarColoring { delta: u64 },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::AcyclicGamma { .. } => "acyclic-gamma",
            Problem::AcyclicV1 { .. } => "acyclic-v1",
            Problem::AcyclicV2 { .. } => "acyclic-v2",
            Problem::NonrepVertex { .. } => "nonrep-vertex",
            Problem::NonrepEdge { .. } => "nonrep-edge",
            Problem::FacialVertex { .. } => "facial-vertex",
            Problem::FacialEdge => "facial-edge",
            Problem::RAcyclic { .. } => "r-acyclic",
            Problem::PairForbidden { .. } => "pair-forbidden",
            Problem::StarColoring { .. } => "star",
        }
    }
}

/// Result of a preset: the pinned-X evaluation, the optimized one, the
/// chosen integer and reference constants.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetReport {
    pub problem: &'static str,
    pub pinned: Option<RatioResult>,
    pub optimized: RatioResult,
    /// Closed-form bound stated alongside the pinned X.
    pub stated: Option<f64>,
    pub kappa: u64,
    /// Extra colors held back outside the engine.
    pub reserve: u64,
    pub references: Vec<(&'static str, f64)>,
}

impl PresetReport {
    pub fn kappa_total(&self) -> u64 {
        self.kappa + self.reserve
    }
}

fn need(param: &'static str, value: f64, threshold: f64) -> Result<(), BoundsError> {
    if value < threshold {
        return Err(BoundsError::OutOfRange { param, value, threshold });
    }
    Ok(())
}

/// Finite terms of a problem's Q, with sums truncated at `⌊n/2⌋`. For the
/// pair-forbidden builder `n` bounds the special-set sizes instead.
pub fn preset_terms(problem: &Problem, n: usize) -> Result<Vec<Term>, BoundsError> {
    let h = (n / 2) as u32;
    let t = |c: f64, s: u32| Term::new(c, s);
    let terms = match problem {
        Problem::AcyclicGamma { delta, gamma } => {
            let d = *delta as f64;
            let mut v = vec![t(d, 1)];
            v.extend((2..=h).map(|k| t(0.5 * *gamma as f64 * d.powi(2 * k as i32 - 2), 2 * k - 2)));
            v
        }
        Problem::AcyclicV1 { delta, alpha } => {
            let d = *delta as f64;
            vec![
                t(d, 1),
                t(alpha * d.powf(4.0 / 3.0), 1),
                t(d.powf(8.0 / 3.0) / (8.0 * alpha), 2),
                t(0.5 * d * (d - 1.0).powi(4), 4),
            ]
        }
        Problem::AcyclicV2 { delta } => {
            let d = *delta as f64;
            let mut v = vec![t(d, 1), t(0.5 * d.powf(4.0 / 3.0), 1), t(0.25 * d.powf(8.0 / 3.0), 2)];
            v.extend((3..=h).map(|k| t(d.powf(2.0 * k as f64 - 4.0 / 3.0), 2 * k - 2)));
            v
        }
        Problem::NonrepVertex { delta } => {
            let d = *delta as f64;
            (1..=h).map(|j| t(j as f64 * d.powi(2 * j as i32 - 1), j)).collect()
        }
        Problem::NonrepEdge { delta } => {
            let d = *delta as f64;
            (1..=h).map(|j| t(2.0 * j as f64 * d.powi(2 * j as i32 - 1), j)).collect()
        }
        Problem::FacialVertex { delta } => {
            let d = *delta as f64;
            let mut v = vec![t(d, 1)];
            v.extend((2..=h).map(|j| t(2.0 * j as f64 * d, j)));
            v
        }
        Problem::FacialEdge => (1..=h).map(|j| t(1.0 + 2.0 * j as f64, j)).collect(),
        Problem::RAcyclic { delta, r } => r_acyclic_terms(*delta, *r),
        Problem::PairForbidden { delta, m, patterns } => pair_forbidden_terms(*delta, *m, patterns, n, false),
        Problem::StarColoring { delta } => star_terms(*delta),
    };
    if terms.is_empty() {
        return Err(BoundsError::NoTerms);
    }
    Ok(terms)
}

fn r_acyclic_terms(delta: u64, r: u64) -> Vec<Term> {
    let d = delta as f64;
    let l = (r / 2) as i32;
    let c2 = 0.5 * ((r + 2) as f64).powi(6) * d.powi(r as i32 + 1);
    let mut v = vec![Term::new(d.powi(l), 1), Term::new(c2, 3)];
    if r % 2 == 1 {
        let e = (r as f64 + 1.0) / 3.0;
        v.push(Term::new(d.powf(e), 1));
        v.push(Term::new(l as f64 * d.powf(2.0 * e), 2));
    }
    v
}

fn star_terms(delta: u64) -> Vec<Term> {
    let d = delta as f64;
    vec![Term::new(d, 1), Term::new(2.0 * d * (d - 1.0).powi(2), 2)]
}

/// Terms of the pair-restricted coloring bound for patterns whose edge
/// counts are all at least `m`: proper coloring, monochromatic special
/// `j`-sets for `2 ≤ j < n`, one event for all patterns on more than `m`
/// vertices, and one event per pattern on at most `m` vertices. With
/// `tight` and the single pattern P4 the dedicated star-coloring terms are
/// returned instead.
pub fn pair_forbidden_terms(delta: u64, m: u64, patterns: &[Pattern], n: usize, tight: bool) -> Vec<Term> {
    if tight && patterns == [Pattern::Path(4)] {
        return star_terms(delta);
    }
    let d = delta as f64;
    let mf = m as f64;
    let g = mf / (mf - 1.0);
    let mut v = vec![Term::new(d, 1)];
    let mut fact = 1.0;
    for j in 2..n.max(2) {
        fact *= (j - 1) as f64;
        v.push(Term::new(d.powf(g * (j as f64 - 1.0)) / fact, j as u32 - 1));
    }
    if patterns.iter().any(|p| p.vertices() as u64 > m) {
        v.push(Term::new((mf + 1.0) * 4f64.powf(mf + 1.0) * d.powf(mf), m as u32 - 1));
    }
    for p in patterns.iter().filter(|p| p.vertices() as u64 <= m) {
        let (ni, mi) = (p.vertices() as f64, p.edges() as f64);
        v.push(Term::new(ni * d.powf(g * (ni - 2.0) - (mi - mf) / (mf - 1.0)), p.vertices() as u32 - 2));
    }
    v
}

/// Default truncation for the special-set sums when no host size is given.
pub const DEFAULT_SET_CAP: usize = 40;

/// Right-hand side of the v1 bound at X = 2√(2α)/Δ^{4/3}, as a closed
/// expression in α and Δ.
pub fn acyclic_v1_closed(alpha: f64, delta: f64) -> f64 {
    let a32 = alpha.powf(1.5) * 2f64.sqrt();
    (1.0 / (2.0 * alpha).sqrt() + alpha) * delta.powf(4.0 / 3.0) + (8.0 * a32 + 1.0) * delta - 32.0 * a32
        + 8.0 * a32 / delta * (6.0 - 4.0 / delta + 1.0 / (delta * delta))
}

/// α ∈ (0, 1] minimizing [`acyclic_v1_closed`], to 1e−6.
pub fn optimal_alpha(delta: u64) -> Result<f64, BoundsError> {
    need("delta", delta as f64, 24.0)?;
    let d = delta as f64;
    Ok(golden_section(&|a| acyclic_v1_closed(a, d), 1e-6, 1.0, 1e-7))
}

/// Round to three decimals.
pub fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// The Δ grid of the published α table.
pub const ALPHA_TABLE_DELTAS: [u64; 9] = [27, 28, 29, 30, 100, 1_000, 10_000, 100_000, 1_000_000];

/// The two sides of the v1 inequality at α = ½:
/// `3/2Δ^{4/3} + 5Δ − 16 + 24/Δ − 16/Δ² + 4/Δ³` and `3/2Δ^{4/3} + 5Δ − 15`.
pub fn v1_half_chain(delta: f64) -> (f64, f64) {
    let base = 1.5 * delta.powf(4.0 / 3.0) + 5.0 * delta;
    (base - 16.0 + 24.0 / delta - 16.0 / (delta * delta) + 4.0 / delta.powi(3), base - 15.0)
}

/// The two expressions bounding the acyclic chromatic number in terms of Δ.
pub fn acyclic_displayed_bounds(delta: f64) -> (f64, f64) {
    let d43 = delta.powf(4.0 / 3.0);
    (1.5 * d43 + 5.0 * delta - 14.0, 1.5 * d43 + delta + 8.0 * d43 / (delta.powf(2.0 / 3.0) - 4.0) + 1.0)
}

fn acyclic_references(d: f64) -> Vec<(&'static str, f64)> {
    vec![
        ("kostochka-stocker", 1.0 + ((d + 1.0) * (d + 1.0) / 4.0).floor()),
        ("alon-mcdiarmid-reed", (50.0 * d.powf(4.0 / 3.0)).ceil()),
        ("ndreca", (6.59 * d.powf(4.0 / 3.0) + 3.3 * d).ceil()),
        ("sereni-volec", 2.835 * d.powf(4.0 / 3.0) + d),
    ]
}

/// Computes the bound for `problem`. With `exact_n` the optimized value uses
/// the finite sums for an `n`-vertex host; otherwise infinite families use
/// their closed-form surrogate.
pub fn kappa_preset(problem: &Problem, exact_n: Option<usize>) -> Result<PresetReport, BoundsError> {
    let finite = |n: usize| -> Result<QPolynomial, BoundsError> { QPolynomial::new(preset_terms(problem, n)?) };
    let optimized_with = |cf: ClosedForm| -> Result<RatioResult, BoundsError> {
        match exact_n {
            Some(n) => Ok(optimize_ratio(&finite(n)?)),
            None => Ok(optimize_closed_form(cf)),
        }
    };
    let report = |pinned: Option<RatioResult>, optimized, stated: Option<f64>, kappa, refs| PresetReport {
        problem: problem.name(),
        pinned,
        optimized,
        stated,
        kappa,
        reserve: 0,
        references: refs,
    };
    match problem {
        Problem::AcyclicGamma { delta, gamma } => {
            need("delta", *delta as f64, 2.0)?;
            need("gamma", *gamma as f64, 1.0)?;
            let (d, g) = (*delta as f64, *gamma as f64);
            let cf = ClosedForm::AcyclicGamma { delta: d, gamma: g };
            let q = QPolynomial::new(preset_terms(problem, 2)?)?.with_closed_form(cf);
            let p = pinned(&q, (2.0 / (g + 2.0)).sqrt() / d)?;
            let stated = d * (1.0 + (2.0 * g + 4.0).sqrt());
            Ok(report(Some(p), optimized_with(cf)?, Some(stated), ceil_kappa(stated), acyclic_references(d)))
        }
        Problem::AcyclicV1 { delta, alpha } => {
            need("delta", *delta as f64, 24.0)?;
            if !(*alpha > 0.0 && *alpha <= 1.0) {
                return Err(BoundsError::OutOfRange { param: "alpha", value: *alpha, threshold: 0.0 });
            }
            let d = *delta as f64;
            let q = finite(0)?;
            let p = pinned(&q, 2.0 * (2.0 * alpha).sqrt() / d.powf(4.0 / 3.0))?;
            let stated = (*alpha == 0.5).then(|| v1_half_chain(d).1);
            let kappa = stated.map_or(p.kappa, ceil_kappa);
            Ok(report(Some(p), optimize_ratio(&q), stated, kappa, acyclic_references(d)))
        }
        Problem::AcyclicV2 { delta } => {
            need("delta", *delta as f64, 9.0)?;
            let d = *delta as f64;
            let cf = ClosedForm::AcyclicV2 { delta: d };
            let q = QPolynomial::new(preset_terms(problem, 4)?)?.with_closed_form(cf);
            let p = pinned(&q, 2.0 / d.powf(4.0 / 3.0))?;
            let d43 = d.powf(4.0 / 3.0);
            let stated = 1.5 * d43 + d + 8.0 * d43 / (d.powf(2.0 / 3.0) - 4.0);
            Ok(report(Some(p), optimized_with(cf)?, Some(stated), ceil_kappa(stated), acyclic_references(d)))
        }
        Problem::NonrepVertex { delta } => {
            need("delta", *delta as f64, 3.0)?;
            let d = *delta as f64;
            let cf = ClosedForm::NonrepVertex { delta: d };
            let q = QPolynomial::new(preset_terms(problem, 2)?)?.with_closed_form(cf);
            let p = pinned(&q, 1.0 / (d * d) - (2.0 / d.powi(7)).cbrt())?;
            let d53 = d.powf(5.0 / 3.0);
            let stated =
                d * d + 3.0 / 2f64.powf(2.0 / 3.0) * d53 + 2f64.powf(2.0 / 3.0) * d53 / (d.cbrt() - 2f64.cbrt());
            let refs = vec![("leading-order", d * d + 3.0 / 2f64.powf(2.0 / 3.0) * d53)];
            Ok(report(Some(p), optimized_with(cf)?, Some(stated), ceil_kappa(stated), refs))
        }
        Problem::NonrepEdge { delta } => {
            need("delta", *delta as f64, 3.0)?;
            let d = *delta as f64;
            let cf = ClosedForm::NonrepEdge { delta: d };
            let q = QPolynomial::new(preset_terms(problem, 2)?)?.with_closed_form(cf);
            let x = 1.0 / (d * d) - (4.0 / d.powi(7)).cbrt();
            let p = if x > 0.0 { Some(pinned(&q, x)?) } else { None };
            let optimized = optimized_with(cf)?;
            let kappa = p.map_or(optimized.kappa, |p| p.kappa);
            let refs = vec![("leading-order", d * d + 2f64.powf(4.0 / 3.0) * d.powf(5.0 / 3.0))];
            Ok(report(p, optimized, None, kappa, refs))
        }
        Problem::FacialVertex { delta } => {
            need("delta", *delta as f64, 2.0)?;
            let d = *delta as f64;
            let cf = ClosedForm::FacialVertex { delta: d };
            let q = QPolynomial::new(preset_terms(problem, 2)?)?.with_closed_form(cf);
            let p = pinned(&q, 1.0 / (2.0 * d.sqrt()))?;
            let stated = d + 4.0 * d.sqrt() + 3.0;
            Ok(report(Some(p), optimized_with(cf)?, Some(stated), ceil_kappa(stated), Vec::new()))
        }
        Problem::FacialEdge => {
            let cf = ClosedForm::FacialEdge;
            let q = QPolynomial::new(preset_terms(problem, 2)?)?.with_closed_form(cf);
            let p = pinned(&q, (17f64.sqrt() - 3.0) / 4.0)?;
            let mut r = report(Some(p), optimized_with(cf)?, Some(9.0), p.kappa, Vec::new());
            r.reserve = 1;
            Ok(r)
        }
        Problem::RAcyclic { delta, r } => {
            need("delta", *delta as f64, 3.0)?;
            need("r", *r as f64, 4.0)?;
            let d = *delta as f64;
            let rf = *r as f64;
            let l = (r / 2) as i32;
            let q = finite(0)?;
            let e = (rf + 1.0) / 3.0;
            let (x, stated) = if r % 2 == 0 {
                let c2 = 0.5 * (rf + 2.0).powi(6) * d.powi(*r as i32 + 1);
                ((0.5 / c2).cbrt(), d.powi(l) + 1.5 * (rf + 2.0).powi(2) * d.powf(e))
            } else {
                (d.powf(-e), d.powi(l) + d.powf(e) * (2.0 + l as f64 + 0.5 * (rf + 2.0).powi(6)))
            };
            let p = pinned(&q, x)?;
            let gp = 2f64.powf((rf + 2.0) / 3.0) * rf * (rf + 2.0) * d.powi(l);
            Ok(report(Some(p), optimize_ratio(&q), Some(stated), ceil_kappa(stated), vec![("greenhill-pikhurko", gp)]))
        }
        Problem::PairForbidden { delta, m, patterns } => {
            need("delta", *delta as f64, 2.0)?;
            need("m", *m as f64, 2.0)?;
            if patterns.is_empty() || patterns.iter().any(|p| (p.edges() as u64) < *m || p.vertices() < 3) {
                return Err(BoundsError::OutOfRange { param: "pattern edges", value: 0.0, threshold: *m as f64 });
            }
            let (d, mf) = (*delta as f64, *m as f64);
            let g = mf / (mf - 1.0);
            let n = exact_n.unwrap_or(DEFAULT_SET_CAP);
            let q = QPolynomial::new(pair_forbidden_terms(*delta, *m, patterns, n, false))?;
            let p = pinned(&q, 1.0 / (4.0 * d.powf(g)))?;
            let k_small = patterns.iter().filter(|p| p.vertices() as u64 <= *m).count() as f64;
            let k_edges = patterns.iter().filter(|p| p.edges() as u64 == *m).count() as f64;
            let stated = (k_small + 71.0) * (mf + 1.0) * d.powf(g);
            let as13 = if k_small > 0.0 { 64.0 * (mf + 1.0).powi(3) * k_small } else { 128.0 * (mf + 1.0).powi(3) };
            let refs = vec![
                ("edge-count-form", (k_edges + 1.0) * (mf + 1.0) * d.powf(g)),
                ("aravind-subramanian", as13 * d.powf(g)),
            ];
            Ok(report(Some(p), optimize_ratio(&q), Some(stated), p.kappa, refs))
        }
        Problem::StarColoring { delta } => {
            need("delta", *delta as f64, 2.0)?;
            let d = *delta as f64;
            let q = finite(0)?;
            let p = pinned(&q, 1.0 / ((2.0 * d).sqrt() * (d - 1.0)))?;
            let stated = 2.0 * 2f64.sqrt() * d.powf(1.5) + d - (8.0 * d).sqrt() + 1.0;
            Ok(report(Some(p), optimize_ratio(&q), Some(stated), ceil_kappa(stated), Vec::new()))
        }
    }
}

/// Solution of the characteristic system behind the record-count growth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicSystem {
    pub d: u32,
    pub x: f64,
    /// s = Σ C_j X^{s_j}.
    pub s: f64,
    /// r = (X / Q(X))^d.
    pub r: f64,
    /// |Σ s_j C_j X^{s_j} − (s + 1)|.
    pub residual: f64,
}

pub fn characteristic_system(q: &QPolynomial) -> Result<CharacteristicSystem, BoundsError> {
    let x = q.root().ok_or(BoundsError::NotApplicable)?;
    let s: f64 = q.terms().iter().map(|t| t.cost * x.powi(t.size as i32)).sum();
    let weighted: f64 = q.terms().iter().map(|t| t.size as f64 * t.cost * x.powi(t.size as i32)).sum();
    let d = q.period();
    Ok(CharacteristicSystem { d, x, s, r: (x / q.q(x)).powi(d as i32), residual: (weighted - (s + 1.0)).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn catalan_root_is_one() {
        let q = QPolynomial::from_pairs(&[(1.0, 2)]).unwrap();
        let r = optimize_ratio(&q);
        assert!(close(r.x, 1.0, 1e-12));
        assert!(close(r.ratio, 2.0, 1e-12));
        assert!(!r.boundary);
    }

    #[test]
    fn greedy_terms_give_delta_plus_one() {
        let q = QPolynomial::from_pairs(&[(7.0, 1)]).unwrap();
        let r = optimize_ratio(&q);
        assert_eq!((r.x, r.ratio, r.kappa), (1.0, 8.0, 8));
    }

    #[test]
    fn boundary_is_flagged() {
        let q = QPolynomial::from_pairs(&[(0.25, 2)]).unwrap();
        let r = optimize_ratio(&q);
        assert!(r.boundary);
        assert_eq!(r.x, 1.0);
        assert!(close(r.ratio, 1.25, 1e-12));
    }

    #[test]
    fn rejects_bad_terms() {
        assert_eq!(QPolynomial::new(vec![]), Err(BoundsError::NoTerms));
        assert!(QPolynomial::from_pairs(&[(0.0, 1)]).is_err());
        assert!(QPolynomial::from_pairs(&[(1.0, 0)]).is_err());
    }

    #[test]
    fn root_minimizes_on_a_grid() {
        let q = QPolynomial::from_pairs(&[(3.0, 1), (40.0, 2), (900.0, 4)]).unwrap();
        let r = optimize_ratio(&q);
        assert!(r.residual < 1e-12);
        assert!(r.certified);
        for i in 1..=1000 {
            let x = i as f64 / 1000.0;
            assert!(q.ratio(x) >= r.ratio - 1e-12);
        }
    }

    #[test]
    fn closed_form_refuses_outside_radius() {
        let q = QPolynomial::from_pairs(&[(10.0, 1)])
            .unwrap()
            .with_closed_form(ClosedForm::AcyclicGamma { delta: 10.0, gamma: 1.0 });
        assert!(matches!(eval_at(&q, 0.2), Err(BoundsError::Domain { .. })));
        assert!(eval_at(&q, 0.05).is_ok());
    }

    #[test]
    fn facial_vertex_pinned_value() {
        let r = kappa_preset(&Problem::FacialVertex { delta: 4 }, None).unwrap();
        let p = r.pinned.unwrap();
        assert_eq!(p.x, 0.25);
        // 1 + 1 + 8·(1/16)·(7/4)/(9/16) = 2 + 14/9, divided by 1/4
        assert!(close(p.ratio, 4.0 * (2.0 + 14.0 / 9.0), 1e-12));
        assert!(p.ratio < 15.0);
        assert_eq!(r.kappa, 15);
    }

    #[test]
    fn facial_edge_needs_nine_plus_one() {
        let r = kappa_preset(&Problem::FacialEdge, None).unwrap();
        assert!(r.pinned.unwrap().ratio < 9.0);
        assert_eq!((r.kappa, r.kappa_total()), (9, 10));
    }

    #[test]
    fn acyclic_gamma_at_delta_10() {
        let r = kappa_preset(&Problem::AcyclicGamma { delta: 10, gamma: 1 }, None).unwrap();
        assert!(r.pinned.unwrap().ratio <= 10.0 * (1.0 + 6f64.sqrt()) + 1e-9);
        assert_eq!(r.kappa, 35);
        assert!(r.optimized.ratio <= r.pinned.unwrap().ratio);
    }

    #[test]
    fn nonrep_vertex_at_delta_3() {
        let r = kappa_preset(&Problem::NonrepVertex { delta: 3 }, None).unwrap();
        assert!(close(r.stated.unwrap(), 75.1218, 1e-4));
        assert_eq!(r.kappa, 76);
        assert!(close(r.pinned.unwrap().ratio, r.stated.unwrap(), 1e-12));
    }

    #[test]
    fn range_errors_quote_thresholds() {
        assert_eq!(
            kappa_preset(&Problem::AcyclicV1 { delta: 20, alpha: 0.5 }, None),
            Err(BoundsError::OutOfRange { param: "delta", value: 20.0, threshold: 24.0 })
        );
        assert!(kappa_preset(&Problem::AcyclicV2 { delta: 8 }, None).is_err());
        assert!(kappa_preset(&Problem::NonrepVertex { delta: 2 }, None).is_err());
        assert!(kappa_preset(&Problem::FacialVertex { delta: 1 }, None).is_err());
    }

    #[test]
    fn star_coloring_preset() {
        let r = kappa_preset(&Problem::StarColoring { delta: 10 }, None).unwrap();
        let stated = 2.0 * 2f64.sqrt() * 10f64.powf(1.5) + 10.0 - 80f64.sqrt() + 1.0;
        assert!(r.pinned.unwrap().ratio <= stated);
        assert_eq!(r.kappa, 92);
    }

    #[test]
    fn pair_builder_with_p4_matches_star_terms() {
        let t = pair_forbidden_terms(10, 3, &[Pattern::Path(4)], 10, true);
        assert_eq!(t, vec![Term::new(10.0, 1), Term::new(2.0 * 10.0 * 81.0, 2)]);
    }

    #[test]
    fn r_acyclic_pinned_equals_stated() {
        for r in 4..9 {
            let rep = kappa_preset(&Problem::RAcyclic { delta: 5, r }, None).unwrap();
            assert!(close(rep.pinned.unwrap().ratio, rep.stated.unwrap(), 1e-9), "r = {r}");
            assert!(rep.optimized.ratio <= rep.pinned.unwrap().ratio + 1e-9);
        }
    }

    #[test]
    fn characteristic_system_catalan() {
        let q = QPolynomial::from_pairs(&[(1.0, 2)]).unwrap();
        let cs = characteristic_system(&q).unwrap();
        assert_eq!(cs.d, 2);
        assert!(close(cs.x, 1.0, 1e-12));
        assert!(close(cs.s, 1.0, 1e-12));
        assert!(close(cs.r, 0.25, 1e-12));
        assert!(cs.residual < 1e-9);
        let greedy = QPolynomial::from_pairs(&[(3.0, 1)]).unwrap();
        assert_eq!(characteristic_system(&greedy), Err(BoundsError::NotApplicable));
    }

    #[test]
    fn v1_closed_form_matches_terms() {
        for &(d, a) in &[(27u64, 0.225), (27, 0.5), (50, 0.3)] {
            let q = QPolynomial::new(preset_terms(&Problem::AcyclicV1 { delta: d, alpha: a }, 0).unwrap()).unwrap();
            let x = 2.0 * (2.0 * a).sqrt() / (d as f64).powf(4.0 / 3.0);
            assert!(close(q.ratio(x), acyclic_v1_closed(a, d as f64), 1e-12));
        }
    }

    #[test]
    fn chain_threshold_is_24() {
        let (l, r) = v1_half_chain(24.0);
        assert!(l < r);
        let (l, r) = v1_half_chain(23.0);
        assert!(l > r);
    }
}
