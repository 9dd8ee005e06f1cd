//! The generic randomized coloring loop, its execution record, and the
//! backward decoder that recovers the input vector from (final coloring,
//! record).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Colors are positive integers; `0` is never a color.
pub type Color = u32;

/// Set of currently colored elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredSet {
    bits: Vec<bool>,
    len: usize,
}

impl ColoredSet {
    pub fn new(n: usize) -> Self {
        ColoredSet { bits: vec![false; n], len: 0 }
    }

    pub fn from_elements(n: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ColoredSet::new(n);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn insert(&mut self, v: usize) {
        if !self.bits[v] {
            self.bits[v] = true;
            self.len += 1;
        }
    }

    pub fn remove(&mut self, v: usize) {
        if self.bits[v] {
            self.bits[v] = false;
            self.len -= 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the ground set.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

/// Partial coloring φ. Alongside each color it remembers the index that was
/// drawn for it, when known, so list-mode decoding can tell duplicate list
/// entries apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
    drawn: Vec<Option<u32>>,
}

impl PartialColoring {
    pub fn new(n: usize) -> Self {
        PartialColoring { colors: vec![None; n], drawn: vec![None; n] }
    }

    pub fn from_colors(colors: Vec<Option<Color>>) -> Self {
        let n = colors.len();
        PartialColoring { colors, drawn: vec![None; n] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors[v]
    }

    /// Sets a color whose drawn index is unknown.
    pub fn set(&mut self, v: usize, c: Color) {
        self.colors[v] = Some(c);
        self.drawn[v] = None;
    }

    fn set_drawn(&mut self, v: usize, c: Color, index: u32) {
        self.colors[v] = Some(c);
        self.drawn[v] = Some(index);
    }

    pub fn clear(&mut self, v: usize) {
        self.colors[v] = None;
        self.drawn[v] = None;
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn colored_set(&self) -> ColoredSet {
        ColoredSet::from_elements(self.len(), (0..self.len()).filter(|&v| self.colors[v].is_some()))
    }
}

/// A bad event annotation: type `j` and class `k`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId {
    pub j: usize,
    pub k: usize,
}

/// Per-type metadata: the class-count ceiling C_j and the uncolor size s_j.
#[derive(Clone, Debug, PartialEq)]
pub struct EventTypeMeta {
    pub name: String,
    pub cost: f64,
    pub uncolor_size: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("contract: {0}")]
    Contract(String),
    #[error("invariant: {0}")]
    Invariant(String),
    #[error("cannot reconstruct bad event: {0}")]
    Reconstruct(String),
}

/// A pluggable family of bad events over elements `0..element_count()`.
pub trait BadEventFamily {
    fn name(&self) -> &str;

    fn element_count(&self) -> usize;

    fn metas(&self) -> &[EventTypeMeta];

    /// Next element to color, or `None` once the target colored set is reached.
    fn next_uncolored(&self, colored: &ColoredSet) -> Option<usize>;

    /// First bad event anchored at the just-colored element `v`.
    fn detect(&self, coloring: &PartialColoring, v: usize) -> Result<Option<EventId>, FamilyError>;

    /// Elements to uncolor for `event`; `colored` includes `v`.
    fn uncolor_set(&self, v: usize, colored: &ColoredSet, event: EventId) -> Result<Vec<usize>, FamilyError>;

    /// The coloring just before uncoloring, recovered from the coloring
    /// after it. `colored` is the colored set before uncoloring.
    fn reconstruct(
        &self,
        v: usize,
        colored: &ColoredSet,
        event: EventId,
        after: &PartialColoring,
    ) -> Result<PartialColoring, FamilyError>;

    /// Structural invariant checked after every step.
    fn check_invariant(&self, _colored: &ColoredSet) -> Result<(), FamilyError> {
        Ok(())
    }
}

/// One record entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecordLine {
    Color,
    Uncolor(EventId),
}

#[derive(Debug, Error, PartialEq)]
#[error("record line {line}: {msg}")]
pub struct RecordError {
    pub line: usize,
    pub msg: String,
}

/// The append-only execution log.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Record {
    lines: Vec<RecordLine>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn lines(&self) -> &[RecordLine] {
        &self.lines
    }

    pub fn push_color(&mut self) {
        self.lines.push(RecordLine::Color);
    }

    /// Appends an uncolor line; it must follow a `Color`.
    pub fn push_uncolor(&mut self, ev: EventId) -> Result<(), RecordError> {
        match self.lines.last() {
            Some(RecordLine::Color) => {
                self.lines.push(RecordLine::Uncolor(ev));
                Ok(())
            }
            _ => Err(RecordError { line: self.lines.len() + 1, msg: "Uncolor must follow Color".into() }),
        }
    }

    /// One entry per step: `None` for a plain color step, else the event.
    pub fn steps(&self) -> Vec<Option<EventId>> {
        let mut out = Vec::new();
        for line in &self.lines {
            match line {
                RecordLine::Color => out.push(None),
                RecordLine::Uncolor(ev) => {
                    if let Some(last) = out.last_mut() {
                        *last = Some(*ev);
                    }
                }
            }
        }
        out
    }

    pub fn step_count(&self) -> usize {
        self.lines.iter().filter(|l| matches!(l, RecordLine::Color)).count()
    }

    /// Running level after each line, i.e. the colored-set size.
    pub fn levels(&self, metas: &[EventTypeMeta]) -> Result<Vec<i64>, RecordError> {
        let mut level = 0i64;
        let mut out = Vec::with_capacity(self.lines.len());
        for (i, line) in self.lines.iter().enumerate() {
            match line {
                RecordLine::Color => level += 1,
                RecordLine::Uncolor(ev) => {
                    let meta =
                        ev.j.checked_sub(1)
                            .and_then(|j| metas.get(j))
                            .ok_or(RecordError { line: i + 1, msg: format!("unknown event type {}", ev.j) })?;
                    level -= meta.uncolor_size as i64;
                }
            }
            out.push(level);
        }
        Ok(out)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            match line {
                RecordLine::Color => writeln!(f, "Color")?,
                RecordLine::Uncolor(ev) => writeln!(f, "Uncolor, Bad Event {}, {}", ev.j, ev.k)?,
            }
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = RecordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rec = Record::new();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim_end_matches('\r');
            if text.is_empty() {
                continue;
            }
            if text == "Color" {
                rec.push_color();
                continue;
            }
            let rest = text
                .strip_prefix("Uncolor, Bad Event ")
                .ok_or(RecordError { line, msg: format!("unrecognized line {text:?}") })?;
            let (j, k) = rest.split_once(", ").ok_or(RecordError { line, msg: format!("malformed event {rest:?}") })?;
            let parse = |x: &str| -> Result<usize, RecordError> {
                match x.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(RecordError { line, msg: format!("bad index {x:?}") }),
                }
            };
            let ev = EventId { j: parse(j)?, k: parse(k)? };
            rec.push_uncolor(ev).map_err(|e| RecordError { line, msg: e.msg })?;
        }
        Ok(rec)
    }
}

/// Key-value header written in front of a record file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub family: String,
    pub kappa: u32,
    pub budget: usize,
    pub seed: Option<u64>,
    pub graph_hash: u64,
}

impl Manifest {
    /// Header, a `---` separator, then the record lines.
    pub fn write_with(&self, record: &Record) -> String {
        let seed = self.seed.map_or("explicit".to_string(), |s| s.to_string());
        format!(
            "family: {}\nkappa: {}\nbudget: {}\nseed: {}\ngraph: {:016x}\n---\n{}",
            self.family, self.kappa, self.budget, seed, self.graph_hash, record
        )
    }

    pub fn parse_with(text: &str) -> Result<(Manifest, Record), RecordError> {
        let mut family = None;
        let mut kappa = None;
        let mut budget = None;
        let mut seed = None;
        let mut hash = None;
        let mut body_start = None;
        let mut offset = 0;
        for (i, line) in text.lines().enumerate() {
            offset += line.len() + 1;
            if line.trim() == "---" {
                body_start = Some((i + 1, offset.min(text.len())));
                break;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or(RecordError { line: i + 1, msg: format!("expected key: value, found {line:?}") })?;
            let value = value.trim();
            let bad = |what: &str| RecordError { line: i + 1, msg: format!("bad {what} {value:?}") };
            match key.trim() {
                "family" => family = Some(value.to_string()),
                "kappa" => kappa = Some(value.parse().map_err(|_| bad("kappa"))?),
                "budget" => budget = Some(value.parse().map_err(|_| bad("budget"))?),
                "seed" => {
                    seed = Some(if value == "explicit" { None } else { Some(value.parse().map_err(|_| bad("seed"))?) })
                }
                "graph" => hash = Some(u64::from_str_radix(value, 16).map_err(|_| bad("graph hash"))?),
                other => return Err(RecordError { line: i + 1, msg: format!("unknown key {other:?}") }),
            }
        }
        let (first_line, start) = body_start.ok_or(RecordError { line: 1, msg: "missing --- separator".into() })?;
        let missing = |k: &str| RecordError { line: first_line, msg: format!("manifest lacks {k}") };
        let manifest = Manifest {
            family: family.ok_or_else(|| missing("family"))?,
            kappa: kappa.ok_or_else(|| missing("kappa"))?,
            budget: budget.ok_or_else(|| missing("budget"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            graph_hash: hash.ok_or_else(|| missing("graph"))?,
        };
        let record: Record =
            text[start..].parse().map_err(|e: RecordError| RecordError { line: e.line + first_line, msg: e.msg })?;
        Ok((manifest, record))
    }
}

/// Where the input vector V comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorSource {
    Explicit(Vec<u32>),
    Seeded { seed: u64, budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineInput {
    pub kappa: u32,
    pub source: ColorSource,
    /// After every uncolor step, check that reconstruction gives back the
    /// coloring that was just uncolored.
    pub self_check: bool,
}

impl EngineInput {
    pub fn explicit(kappa: u32, v: Vec<u32>) -> Self {
        EngineInput { kappa, source: ColorSource::Explicit(v), self_check: false }
    }

    pub fn seeded(kappa: u32, seed: u64, budget: usize) -> Self {
        EngineInput { kappa, source: ColorSource::Seeded { seed, budget }, self_check: false }
    }

    pub fn checked(mut self) -> Self {
        self.self_check = true;
        self
    }

    /// The full input vector of length t.
    pub fn vector(&self) -> Vec<u32> {
        match &self.source {
            ColorSource::Explicit(v) => v.clone(),
            ColorSource::Seeded { seed, budget } => color_stream(*seed, self.kappa, *budget),
        }
    }
}

/// The deterministic PRNG stream: ChaCha8 seeded from `seed`, each value
/// uniform in `1..=kappa`.
pub fn color_stream(seed: u64, kappa: u32, len: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(1..=kappa.max(1))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Completed,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub coloring: PartialColoring,
    pub record: Record,
    pub status: Status,
    /// The prefix of V actually consumed.
    pub consumed: Vec<u32>,
}

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("input: {0}")]
    Input(String),
    #[error("family {family}, event type {j}, class {k}: {msg}")]
    Contract { family: String, j: usize, k: usize, msg: String },
    #[error("family {family}: {source}")]
    Family { family: String, source: FamilyError },
    #[error("decode: {0}")]
    Decode(String),
}

fn family_err(fam: &dyn BadEventFamily) -> impl Fn(FamilyError) -> EngineError + '_ {
    move |source| EngineError::Family { family: fam.name().to_string(), source }
}

fn check_lists(fam: &dyn BadEventFamily, kappa: u32, lists: &[Vec<Color>]) -> Result<(), EngineError> {
    if lists.len() != fam.element_count() {
        return Err(EngineError::Input(format!("{} lists given for {} elements", lists.len(), fam.element_count())));
    }
    for (v, l) in lists.iter().enumerate() {
        if l.len() < kappa as usize {
            return Err(EngineError::Input(format!("list of element {} has {} < {kappa} colors", v + 1, l.len())));
        }
    }
    Ok(())
}

/// Runs the coloring loop with colors drawn directly from V.
pub fn run(fam: &dyn BadEventFamily, input: &EngineInput) -> Result<RunOutcome, EngineError> {
    run_inner(fam, input, None)
}

/// Runs the coloring loop with V read as indices into per-element lists.
pub fn run_list(
    fam: &dyn BadEventFamily,
    lists: &[Vec<Color>],
    input: &EngineInput,
) -> Result<RunOutcome, EngineError> {
    check_lists(fam, input.kappa, lists)?;
    run_inner(fam, input, Some(lists))
}

fn run_inner(
    fam: &dyn BadEventFamily,
    input: &EngineInput,
    lists: Option<&[Vec<Color>]>,
) -> Result<RunOutcome, EngineError> {
    if input.kappa == 0 {
        return Err(EngineError::Input("kappa must be at least 1".into()));
    }
    let v_in = input.vector();
    if let Some(bad) = v_in.iter().position(|&c| c == 0 || c > input.kappa) {
        return Err(EngineError::Input(format!("V[{}] = {} outside 1..={}", bad + 1, v_in[bad], input.kappa)));
    }
    let n = fam.element_count();
    let metas = fam.metas();
    let ferr = family_err(fam);
    let mut phi = PartialColoring::new(n);
    let mut colored = ColoredSet::new(n);
    let mut record = Record::new();
    let mut used = 0;
    for &drawn in &v_in {
        let Some(v) = fam.next_uncolored(&colored) else {
            break;
        };
        let color = match lists {
            Some(l) => l[v][drawn as usize - 1],
            None => drawn,
        };
        phi.set_drawn(v, color, drawn);
        colored.insert(v);
        record.push_color();
        used += 1;
        if let Some(ev) = fam.detect(&phi, v).map_err(&ferr)? {
            let contract =
                |msg: String| EngineError::Contract { family: fam.name().to_string(), j: ev.j, k: ev.k, msg };
            let meta =
                ev.j.checked_sub(1)
                    .and_then(|j| metas.get(j))
                    .ok_or_else(|| contract(format!("type out of range 1..={}", metas.len())))?;
            if ev.k == 0 || ev.k as f64 > meta.cost + 1e-9 {
                return Err(contract(format!("class outside 1..={}", meta.cost)));
            }
            let set = fam.uncolor_set(v, &colored, ev).map_err(&ferr)?;
            if set.len() != meta.uncolor_size {
                return Err(contract(format!(
                    "uncolor set has {} elements, expected {}",
                    set.len(),
                    meta.uncolor_size
                )));
            }
            if !set.contains(&v) {
                return Err(contract("uncolor set misses the anchor".into()));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() || set.iter().any(|&u| !colored.contains(u)) {
                return Err(contract("uncolor set is not a subset of the colored set".into()));
            }
            let before = if input.self_check { Some((phi.clone(), colored.clone())) } else { None };
            for &u in &set {
                phi.clear(u);
                colored.remove(u);
            }
            record.push_uncolor(ev).expect("uncolor follows color");
            if let Some((before, x)) = before {
                let rebuilt = fam.reconstruct(v, &x, ev, &phi).map_err(&ferr)?;
                if rebuilt.colors() != before.colors() {
                    return Err(contract("reconstruction differs from the uncolored coloring".into()));
                }
            }
        }
        fam.check_invariant(&colored).map_err(&ferr)?;
    }
    let status = if fam.next_uncolored(&colored).is_none() { Status::Completed } else { Status::BudgetExhausted };
    Ok(RunOutcome { coloring: phi, record, status, consumed: v_in[..used].to_vec() })
}

/// One replayed step: the element colored and the colored set after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayStep {
    pub element: usize,
    pub colored_after: ColoredSet,
}

/// Recovers the colored element and colored set of every step from the
/// record alone.
pub fn replay_colored_sets(fam: &dyn BadEventFamily, record: &Record) -> Result<Vec<ReplayStep>, EngineError> {
    let n = fam.element_count();
    let mut colored = ColoredSet::new(n);
    let mut out = Vec::new();
    for (i, step) in record.steps().into_iter().enumerate() {
        let v = fam
            .next_uncolored(&colored)
            .ok_or_else(|| EngineError::Decode(format!("step {}: nothing left to color", i + 1)))?;
        colored.insert(v);
        if let Some(ev) = step {
            if ev.j == 0 || ev.j > fam.metas().len() {
                return Err(EngineError::Decode(format!("step {}: unknown event type {}", i + 1, ev.j)));
            }
            let set =
                fam.uncolor_set(v, &colored, ev).map_err(|e| EngineError::Decode(format!("step {}: {e}", i + 1)))?;
            for u in set {
                colored.remove(u);
            }
        }
        out.push(ReplayStep { element: v, colored_after: colored.clone() });
    }
    Ok(out)
}

fn index_of(lists: Option<&[Vec<Color>]>, v: usize, c: Color, drawn: Option<u32>) -> Result<u32, EngineError> {
    if let Some(d) = drawn {
        return Ok(d);
    }
    match lists {
        None => Ok(c),
        Some(l) => l[v]
            .iter()
            .position(|&x| x == c)
            .map(|p| p as u32 + 1)
            .ok_or_else(|| EngineError::Decode(format!("color {c} not in the list of element {}", v + 1))),
    }
}

/// Recovers V from the final coloring and the record.
pub fn decode(
    fam: &dyn BadEventFamily,
    final_coloring: &PartialColoring,
    record: &Record,
    lists: Option<&[Vec<Color>]>,
) -> Result<Vec<u32>, EngineError> {
    let steps = record.steps();
    let replay = replay_colored_sets(fam, record)?;
    let n = fam.element_count();
    if final_coloring.len() != n {
        return Err(EngineError::Decode("final coloring has the wrong size".into()));
    }
    if let Some(last) = replay.last() {
        if last.colored_after != final_coloring.colored_set() {
            return Err(EngineError::Decode("final coloring does not match the record".into()));
        }
    }
    let mut phi = final_coloring.clone();
    let mut out = vec![0; steps.len()];
    for i in (0..steps.len()).rev() {
        let v = replay[i].element;
        match steps[i] {
            None => {
                let c = phi.get(v).ok_or_else(|| EngineError::Decode(format!("step {}: element uncolored", i + 1)))?;
                out[i] = index_of(lists, v, c, phi.drawn[v])?;
                phi.clear(v);
            }
            Some(ev) => {
                let mut x = if i == 0 { ColoredSet::new(n) } else { replay[i - 1].colored_after.clone() };
                x.insert(v);
                let before = fam
                    .reconstruct(v, &x, ev, &phi)
                    .map_err(|e| EngineError::Decode(format!("step {}: {e}", i + 1)))?;
                let c = before.get(v).ok_or_else(|| {
                    EngineError::Decode(format!("step {}: reconstruction left anchor uncolored", i + 1))
                })?;
                out[i] = index_of(lists, v, c, before.drawn[v])?;
                phi = before;
                phi.clear(v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Proper coloring of a path 0-1-...-(n-1): one event type, monochromatic
    /// edge to the left neighbor.
    struct PathProper {
        n: usize,
        metas: Vec<EventTypeMeta>,
    }

    impl PathProper {
        fn new(n: usize) -> Self {
            PathProper { n, metas: vec![EventTypeMeta { name: "edge".into(), cost: 1.0, uncolor_size: 1 }] }
        }
    }

    impl BadEventFamily for PathProper {
        fn name(&self) -> &str {
            "path-proper"
        }
        fn element_count(&self) -> usize {
            self.n
        }
        fn metas(&self) -> &[EventTypeMeta] {
            &self.metas
        }
        fn next_uncolored(&self, colored: &ColoredSet) -> Option<usize> {
            (0..self.n).find(|&v| !colored.contains(v))
        }
        fn detect(&self, phi: &PartialColoring, v: usize) -> Result<Option<EventId>, FamilyError> {
            Ok((v > 0 && phi.get(v - 1).is_some() && phi.get(v - 1) == phi.get(v)).then_some(EventId { j: 1, k: 1 }))
        }
        fn uncolor_set(&self, v: usize, _: &ColoredSet, _: EventId) -> Result<Vec<usize>, FamilyError> {
            Ok(vec![v])
        }
        fn reconstruct(
            &self,
            v: usize,
            _: &ColoredSet,
            _: EventId,
            after: &PartialColoring,
        ) -> Result<PartialColoring, FamilyError> {
            let mut b = after.clone();
            let c = after.get(v - 1).ok_or(FamilyError::Reconstruct("left neighbor uncolored".into()))?;
            b.set(v, c);
            Ok(b)
        }
    }

    #[test]
    fn record_text_round_trips() {
        let text = "Color\nColor\nUncolor, Bad Event 1, 2\nColor\n";
        let r: Record = text.parse().unwrap();
        assert_eq!(r.to_string(), text);
        assert_eq!(r.steps(), vec![None, Some(EventId { j: 1, k: 2 }), None]);
    }

    #[test]
    fn record_rejects_leading_uncolor() {
        let e = "Uncolor, Bad Event 1, 1\n".parse::<Record>().unwrap_err();
        assert_eq!(e.line, 1);
        assert!("Color\nUncolor, Bad Event 0, 1\n".parse::<Record>().is_err());
        assert!("Colour\n".parse::<Record>().is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let m = Manifest { family: "x".into(), kappa: 3, budget: 10, seed: Some(7), graph_hash: 0xabc };
        let r: Record = "Color\nColor\nUncolor, Bad Event 1, 1\n".parse().unwrap();
        let (m2, r2) = Manifest::parse_with(&m.write_with(&r)).unwrap();
        assert_eq!(m2, m);
        assert_eq!(r2, r);
    }

    #[test]
    fn path_run_and_decode() {
        let fam = PathProper::new(3);
        let input = EngineInput::explicit(2, vec![1, 1, 2, 2, 1]).checked();
        let out = run(&fam, &input).unwrap();
        assert_eq!(out.status, Status::Completed);
        assert_eq!(out.coloring.colors(), &[Some(1), Some(2), Some(1)]);
        assert_eq!(
            out.record.to_string(),
            "Color\nColor\nUncolor, Bad Event 1, 1\nColor\nColor\nUncolor, Bad Event 1, 1\nColor\n"
        );
        assert_eq!(decode(&fam, &out.coloring, &out.record, None).unwrap(), out.consumed);
    }

    #[test]
    fn zero_budget_is_exhausted_and_decodes_to_empty() {
        let fam = PathProper::new(2);
        let out = run(&fam, &EngineInput::explicit(2, vec![])).unwrap();
        assert_eq!(out.status, Status::BudgetExhausted);
        assert!(out.record.lines().is_empty());
        assert!(decode(&fam, &out.coloring, &out.record, None).unwrap().is_empty());
        assert!(replay_colored_sets(&fam, &out.record).unwrap().is_empty());
    }

    #[test]
    fn rejects_out_of_range_input() {
        let fam = PathProper::new(2);
        assert!(matches!(run(&fam, &EngineInput::explicit(2, vec![3])), Err(EngineError::Input(_))));
        assert!(matches!(run(&fam, &EngineInput::explicit(0, vec![])), Err(EngineError::Input(_))));
    }

    #[test]
    fn seeded_stream_is_deterministic_and_in_range() {
        let a = color_stream(5, 4, 100);
        assert_eq!(a, color_stream(5, 4, 100));
        assert!(a.iter().all(|&c| (1..=4).contains(&c)));
        assert_ne!(a, color_stream(6, 4, 100));
    }

    #[test]
    fn list_mode_with_duplicate_entries_decodes_drawn_index() {
        let fam = PathProper::new(1);
        let lists = vec![vec![1, 1]];
        let out = run_list(&fam, &lists, &EngineInput::explicit(2, vec![2])).unwrap();
        assert_eq!(out.coloring.get(0), Some(1));
        assert_eq!(decode(&fam, &out.coloring, &out.record, Some(&lists)).unwrap(), vec![2]);
    }

    #[test]
    fn short_list_is_an_input_error() {
        let fam = PathProper::new(2);
        let lists = vec![vec![1, 2], vec![1]];
        assert!(matches!(run_list(&fam, &lists, &EngineInput::explicit(2, vec![1])), Err(EngineError::Input(_))));
    }

    #[test]
    fn levels_track_colored_count() {
        let fam = PathProper::new(3);
        let out = run(&fam, &EngineInput::explicit(2, vec![1, 1, 2, 2, 1])).unwrap();
        assert_eq!(out.record.levels(fam.metas()).unwrap(), vec![1, 2, 1, 2, 3, 2, 3]);
    }
}
