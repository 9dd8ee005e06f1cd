//! Plain-text formats read and written by the command line.

use entropy_coloring::bounds::Pattern;
use entropy_coloring::engine::Color;
use entropy_coloring::Graph;

use crate::CliError;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, CliError> {
    tok.parse().map_err(|_| CliError::Input(format!("line {line}: bad {what} {tok:?}")))
}

/// Whitespace-separated positive integers.
pub fn parse_vector(text: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        for tok in l.split_whitespace() {
            out.push(parse_num(tok, line, "color index")?);
        }
    }
    Ok(out)
}

/// Lines `x: c1 c2 ...`, one per element, 1-based.
pub fn parse_lists(text: &str, elements: usize) -> Result<Vec<Vec<Color>>, CliError> {
    let mut lists = vec![None; elements];
    for (line, l) in content_lines(text) {
        let (head, rest) =
            l.split_once(':').ok_or_else(|| CliError::Input(format!("line {line}: expected `element: colors`")))?;
        let x: usize = parse_num(head.trim(), line, "element")?;
        if x == 0 || x > elements {
            return Err(CliError::Input(format!("line {line}: element {x} out of range")));
        }
        let colors = rest.split_whitespace().map(|t| parse_num(t, line, "color")).collect::<Result<Vec<_>, _>>()?;
        lists[x - 1] = Some(colors);
    }
    lists
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| CliError::Input(format!("no list for element {}", i + 1))))
        .collect()
}

/// `v color` per line for vertex colorings.
pub fn write_vertex_coloring(colors: &[Option<Color>]) -> String {
    colors.iter().enumerate().filter_map(|(v, c)| c.map(|c| format!("{} {c}\n", v + 1))).collect()
}

/// `u v color` per line for edge colorings.
pub fn write_edge_coloring(g: &Graph, colors: &[Option<Color>]) -> String {
    g.edges().iter().zip(colors).filter_map(|(&(u, v), c)| c.map(|c| format!("{} {} {c}\n", u + 1, v + 1))).collect()
}

pub fn parse_vertex_coloring(text: &str, n: usize) -> Result<Vec<Option<Color>>, CliError> {
    let mut out = vec![None; n];
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(CliError::Input(format!("line {line}: expected `vertex color`")));
        }
        let v: usize = parse_num(toks[0], line, "vertex")?;
        if v == 0 || v > n {
            return Err(CliError::Input(format!("line {line}: vertex {v} out of range")));
        }
        out[v - 1] = Some(parse_num(toks[1], line, "color")?);
    }
    Ok(out)
}

pub fn parse_edge_coloring(text: &str, g: &Graph) -> Result<Vec<Option<Color>>, CliError> {
    let mut out = vec![None; g.m()];
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(CliError::Input(format!("line {line}: expected `u v color`")));
        }
        let u: usize = parse_num(toks[0], line, "vertex")?;
        let v: usize = parse_num(toks[1], line, "vertex")?;
        let e = (u >= 1 && v >= 1)
            .then(|| g.edge_index(u - 1, v - 1))
            .flatten()
            .ok_or_else(|| CliError::Input(format!("line {line}: no edge {u} {v}")))?;
        out[e] = Some(parse_num(toks[2], line, "color")?);
    }
    Ok(out)
}

/// Forbidden patterns: `path K` or `graph V E`, one per line.
pub fn parse_patterns(text: &str) -> Result<Vec<Pattern>, CliError> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let p = match toks.as_slice() {
            ["path", k] => Pattern::Path(parse_num(k, line, "path size")?),
            ["graph", v, e] => Pattern::Graph {
                vertices: parse_num(v, line, "vertex count")?,
                edges: parse_num(e, line, "edge count")?,
            },
            _ => return Err(CliError::Input(format!("line {line}: expected `path K` or `graph V E`"))),
        };
        out.push(p);
    }
    if out.is_empty() {
        return Err(CliError::Input("pattern file is empty".into()));
    }
    Ok(out)
}

/// Terms `C:s,C:s,...` with positive integer class counts.
pub fn parse_terms(spec: &str) -> Result<Vec<(u64, usize)>, CliError> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let (c, s) =
            item.trim().split_once(':').ok_or_else(|| CliError::Input(format!("term {item:?}: expected C:s")))?;
        let c: u64 = parse_num(c.trim(), 1, "class count")?;
        let s: usize = parse_num(s.trim(), 1, "size")?;
        if c == 0 || s == 0 {
            return Err(CliError::Input(format!("term {item:?}: C and s must be positive")));
        }
        out.push((c, s));
    }
    Ok(out)
}
