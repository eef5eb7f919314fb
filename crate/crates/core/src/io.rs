//! Text formats: SteinLib/PACE `.stp` instances, newline-delimited edge,
//! vertex and item sets, vertex weight files, knapsack instances and the
//! experiment CSV.
//!
//! Vertex and item ids are 1-based on disk and 0-based in memory.

use std::fmt::Write as _;
use std::path::Path;

use crate::experiment::ExperimentRecord;
use crate::graph::Graph;
use crate::knapsack::KnapsackInstance;
use crate::{Error, ItemSet, Result};

/// A Steiner tree instance: a graph and a non-empty terminal set.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerInstance {
    pub graph: Graph,
    pub terminals: ItemSet,
    pub name: String,
}

impl SteinerInstance {
    pub fn new(graph: Graph, terminals: ItemSet, name: impl Into<String>) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::InvalidParameter("terminal set is empty".into()));
        }
        if let Some(&t) = terminals.iter().find(|&&t| t >= graph.vertex_count()) {
            return Err(Error::ItemOutOfRange {
                id: t,
                len: graph.vertex_count(),
            });
        }
        Ok(SteinerInstance {
            graph,
            terminals,
            name: name.into(),
        })
    }

    pub fn terminal_list(&self) -> Vec<usize> {
        self.terminals.iter().copied().collect()
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads an `.stp` file; the instance name falls back to the file stem when
/// the file carries no `Name` entry.
pub fn load_stp(path: &Path) -> Result<SteinerInstance> {
    let mut inst = parse_stp(&read_file(path)?)?;
    if inst.name.is_empty() {
        inst.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(inst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    None,
    Graph,
    Terminals,
    Comment,
    Skipped,
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected a count after `{what}`")))
}

fn parse_vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let id: usize = tok
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, "expected a vertex id"))?;
    if id == 0 || id > n {
        return Err(Error::parse(line, format!("vertex {id} out of range 1..={n}")));
    }
    Ok(id - 1)
}

/// Parses a SteinLib `.stp` instance.
///
/// Keywords are case-insensitive. `Comment` is read for a `Name` entry;
/// every other unknown section is skipped up to its `END`.
pub fn parse_stp(text: &str) -> Result<SteinerInstance> {
    let parsed = parse_sections(text, true)?;
    SteinerInstance::new(parsed.graph, parsed.terminals, parsed.name)
        .map_err(|e| Error::parse(parsed.last_line, e.to_string()))
}

/// Parses only the graph of an `.stp` file; the Terminals section may be
/// absent. Used for vertex-weighted problems.
pub fn parse_stp_graph(text: &str) -> Result<Graph> {
    Ok(parse_sections(text, false)?.graph)
}

struct ParsedStp {
    graph: Graph,
    terminals: ItemSet,
    name: String,
    last_line: usize,
}

fn parse_sections(text: &str, require_terminals: bool) -> Result<ParsedStp> {
    let mut section = Section::None;
    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terminals: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut terminals = ItemSet::new();
    let mut terminal_lines = 0usize;
    let mut saw_graph = false;
    let mut saw_terminals = false;
    let mut name = String::new();
    let mut graph_end_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut toks = raw.split_whitespace();
        let Some(first) = toks.next() else { continue };
        let key = first.to_ascii_lowercase();

        if key == "end" {
            if section == Section::Graph {
                let m = declared_edges.unwrap_or(0);
                if edges.len() != m {
                    return Err(Error::parse(
                        line,
                        format!("declared {m} edges but found {}", edges.len()),
                    ));
                }
                graph_end_line = line;
            }
            if section == Section::Terminals {
                if let Some(k) = declared_terminals {
                    if terminal_lines != k {
                        return Err(Error::parse(
                            line,
                            format!("declared {k} terminals but found {terminal_lines}"),
                        ));
                    }
                }
            }
            section = Section::None;
            continue;
        }

        match section {
            Section::None => match key.as_str() {
                "section" => {
                    let which = toks.next().map(str::to_ascii_lowercase).unwrap_or_default();
                    section = match which.as_str() {
                        "graph" => {
                            saw_graph = true;
                            Section::Graph
                        }
                        "terminals" => {
                            saw_terminals = true;
                            Section::Terminals
                        }
                        "comment" => Section::Comment,
                        _ => Section::Skipped,
                    };
                }
                "eof" => break,
                _ if line == 1 && first.eq_ignore_ascii_case("33D32945") => {}
                _ => return Err(Error::parse(line, format!("unexpected `{first}` outside a section"))),
            },
            Section::Skipped => {}
            Section::Comment => {
                if key == "name" {
                    let rest = raw.trim_start()[first.len()..].trim();
                    name = rest.trim_matches('"').to_string();
                }
            }
            Section::Graph => match key.as_str() {
                "nodes" => nodes = Some(parse_count(toks.next(), line, "Nodes")?),
                "edges" => declared_edges = Some(parse_count(toks.next(), line, "Edges")?),
                "e" => {
                    let n = nodes.ok_or_else(|| Error::parse(line, "edge before `Nodes`"))?;
                    let u = parse_vertex(toks.next(), n, line)?;
                    let v = parse_vertex(toks.next(), n, line)?;
                    let w: f64 = toks
                        .next()
                        .and_then(|t| t.parse().ok())
                        .filter(|w: &f64| w.is_finite() && *w >= 0.0)
                        .ok_or_else(|| Error::parse(line, "expected a non-negative edge weight"))?;
                    if u == v {
                        return Err(Error::parse(line, "self-loop"));
                    }
                    if edges.len() == declared_edges.unwrap_or(usize::MAX) {
                        return Err(Error::parse(line, "more `E` lines than declared by `Edges`"));
                    }
                    edges.push((u, v, w));
                }
                _ => return Err(Error::parse(line, format!("unexpected `{first}` in Graph section"))),
            },
            Section::Terminals => match key.as_str() {
                "terminals" => declared_terminals = Some(parse_count(toks.next(), line, "Terminals")?),
                "t" => {
                    let n = nodes.ok_or_else(|| Error::parse(line, "terminal before the Graph section"))?;
                    terminals.insert(parse_vertex(toks.next(), n, line)?);
                    terminal_lines += 1;
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        format!("unexpected `{first}` in Terminals section"),
                    ))
                }
            },
        }
    }

    if section != Section::None {
        return Err(Error::parse(last_line, "unterminated section (missing END)"));
    }
    if !saw_graph {
        return Err(Error::parse(last_line, "missing Graph section"));
    }
    if require_terminals && !saw_terminals {
        return Err(Error::parse(last_line, "missing Terminals section"));
    }
    let n = nodes.ok_or_else(|| Error::parse(graph_end_line, "Graph section without `Nodes`"))?;
    let graph = Graph::new(n, edges)?;
    Ok(ParsedStp {
        graph,
        terminals,
        name,
        last_line,
    })
}

/// Writes an instance in `.stp` format. Weights use the shortest decimal
/// representation that parses back to the same `f64`.
pub fn write_stp(inst: &SteinerInstance) -> String {
    let g = &inst.graph;
    let mut out = String::from("33D32945 STP File, STP Format Version 1.0\n\n");
    out.push_str("SECTION Comment\n");
    if !inst.name.is_empty() {
        let _ = writeln!(out, "Name \"{}\"", inst.name);
    }
    out.push_str("END\n\nSECTION Graph\n");
    let _ = writeln!(out, "Nodes {}", g.vertex_count());
    let _ = writeln!(out, "Edges {}", g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "E {} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    out.push_str("END\n\nSECTION Terminals\n");
    let _ = writeln!(out, "Terminals {}", inst.terminals.len());
    for t in &inst.terminals {
        let _ = writeln!(out, "T {}", t + 1);
    }
    out.push_str("END\n\nEOF\n");
    out
}

/// One `u v` line (1-based endpoints) per edge, in edge-id order.
pub fn write_edge_set(g: &Graph, edges: &ItemSet) -> String {
    let mut out = String::new();
    for &e in edges {
        let edge = g.edge(e);
        let _ = writeln!(out, "{} {}", edge.u + 1, edge.v + 1);
    }
    out
}

/// Maps every `u v` line to the lightest edge joining `u` and `v` (ties
/// broken by edge id). Blank lines and `#` comments are ignored.
pub fn parse_edge_set(g: &Graph, text: &str) -> Result<ItemSet> {
    let n = g.vertex_count();
    let mut set = ItemSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let u = parse_vertex(toks.next(), n, line)?;
        let v = parse_vertex(toks.next(), n, line)?;
        if toks.next().is_some() {
            return Err(Error::parse(line, "expected exactly two vertex ids"));
        }
        let best = g
            .edges_between(u, v)
            .min_by(|&a, &b| g.edge(a).weight.total_cmp(&g.edge(b).weight).then(a.cmp(&b)))
            .ok_or(Error::MissingEdge { u: u + 1, v: v + 1 })?;
        set.insert(best);
    }
    Ok(set)
}

/// One 1-based id per line.
pub fn write_id_set(items: &ItemSet) -> String {
    items.iter().map(|i| format!("{}\n", i + 1)).collect()
}

/// Parses one 1-based id per line into a 0-based set over `0..len`.
pub fn parse_id_set(text: &str, len: usize) -> Result<ItemSet> {
    let mut set = ItemSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        set.insert(parse_vertex(Some(content), len, idx + 1)?);
    }
    Ok(set)
}

/// Newline-delimited non-negative reals, one per vertex.
pub fn parse_weights(text: &str, expected: usize) -> Result<Vec<f64>> {
    let mut weights = Vec::with_capacity(expected);
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let w: f64 = content
            .parse()
            .ok()
            .filter(|w: &f64| w.is_finite() && *w >= 0.0)
            .ok_or_else(|| Error::parse(idx + 1, format!("invalid weight `{content}`")))?;
        weights.push(w);
    }
    if weights.len() != expected {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected,
        });
    }
    Ok(weights)
}

/// Knapsack file: a header line `n c`, then `n` lines `w_i s_i`.
pub fn parse_knapsack(text: &str) -> Result<KnapsackInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty knapsack file"))?;
    let mut htoks = header.split_whitespace();
    let n = parse_count(htoks.next(), hline, "item count")?;
    let capacity: f64 = htoks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(hline, "expected a capacity"))?;
    let mut worths = Vec::with_capacity(n);
    let mut sizes = Vec::with_capacity(n);
    for (line, content) in lines {
        let mut toks = content.split_whitespace();
        let mut num = || -> Result<f64> {
            toks.next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(line, "expected `worth size`"))
        };
        worths.push(num()?);
        sizes.push(num()?);
    }
    if worths.len() != n {
        return Err(Error::parse(
            hline,
            format!("declared {n} items but found {}", worths.len()),
        ));
    }
    KnapsackInstance::new(sizes, worths, capacity)
}

pub fn write_knapsack(inst: &KnapsackInstance) -> String {
    let mut out = format!("{} {}\n", inst.len(), inst.capacity());
    for (w, s) in inst.worths().iter().zip(inst.sizes()) {
        let _ = writeln!(out, "{w} {s}");
    }
    out
}

/// Formats a real with six significant digits, `%g` style: trailing zeros
/// are trimmed and exponents are used outside `[1e-5, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Renders experiment records as CSV with a header row.
pub fn write_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ExperimentRecord::HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 5\nEND\nSECTION Terminals\nTerminals 2\nT 1\nT 2\nEND\nEOF\n";

    #[test]
    fn parses_minimal_instance() {
        let inst = parse_stp(TINY).unwrap();
        assert_eq!(inst.graph.vertex_count(), 2);
        assert_eq!(inst.graph.edge_count(), 1);
        assert_eq!(inst.graph.edge(0).weight, 5.0);
        assert_eq!(inst.terminals, ItemSet::from([0, 1]));
    }

    #[test]
    fn comment_section_is_skipped() {
        let with_comment = format!("SECTION Comment\nRemark \"x\"\nEND\n{TINY}");
        assert_eq!(parse_stp(&with_comment).unwrap(), parse_stp(TINY).unwrap());
        let unknown = format!("33D32945 STP File\nSECTION Coordinates\nDD 1 0 0\nEND\n{TINY}");
        assert_eq!(parse_stp(&unknown).unwrap(), parse_stp(TINY).unwrap());
    }

    #[test]
    fn case_insensitive_and_decimals() {
        let text = "section graph\nnodes 2\nedges 1\ne 1 2 2.5\nend\nSection TERMINALS\nterminals 1\nt 2\nend\neof\n";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst.graph.edge(0).weight, 2.5);
        assert_eq!(inst.terminals, ItemSet::from([1]));
    }

    #[test]
    fn reads_name_from_comment() {
        let text = format!("SECTION Comment\nName \"b01\"\nEND\n{TINY}");
        assert_eq!(parse_stp(&text).unwrap().name, "b01");
    }

    #[test]
    fn vertex_out_of_range_names_line() {
        let text = TINY.replace("E 1 2 5", "E 1 3 5");
        match parse_stp(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let missing_terms = "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 5\nEND\nEOF\n";
        assert!(matches!(parse_stp(missing_terms), Err(Error::Parse { .. })));
        let missing_graph = "SECTION Terminals\nTerminals 0\nEND\nEOF\n";
        assert!(matches!(parse_stp(missing_graph), Err(Error::Parse { .. })));
        let short = TINY.replace("Edges 1", "Edges 2");
        match parse_stp(&short) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        let long = TINY.replace("E 1 2 5\n", "E 1 2 5\nE 2 1 3\n");
        assert!(matches!(parse_stp(&long), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn stp_round_trip() {
        let g = Graph::new(4, [(0, 1, 3.0), (1, 2, 0.1), (2, 3, 1e-7), (0, 1, 2.0)]).unwrap();
        let inst = SteinerInstance::new(g, [0, 3].into(), "rt").unwrap();
        assert_eq!(parse_stp(&write_stp(&inst)).unwrap(), inst);
    }

    #[test]
    fn edge_set_round_trip_and_errors() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let set: ItemSet = [0].into();
        let text = write_edge_set(&g, &set);
        assert_eq!(text, "1 2\n");
        assert_eq!(parse_edge_set(&g, &text).unwrap(), set);
        assert_eq!(write_edge_set(&g, &ItemSet::new()), "");
        assert!(parse_edge_set(&g, "").unwrap().is_empty());
        assert!(matches!(
            parse_edge_set(&g, "1 3\n"),
            Err(Error::MissingEdge { u: 1, v: 3 })
        ));
    }

    #[test]
    fn edge_set_prefers_lightest_parallel_edge() {
        let g = Graph::new(2, [(0, 1, 4.0), (1, 0, 2.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(parse_edge_set(&g, "2 1\n").unwrap(), ItemSet::from([1]));
    }

    #[test]
    fn id_sets_and_weights() {
        let set: ItemSet = [0, 4].into();
        assert_eq!(parse_id_set(&write_id_set(&set), 5).unwrap(), set);
        assert!(parse_id_set("6\n", 5).is_err());
        assert_eq!(parse_weights("1\n2.5\n\n", 2).unwrap(), vec![1.0, 2.5]);
        assert!(parse_weights("1\n", 2).is_err());
        assert!(parse_weights("-1\n", 1).is_err());
    }

    #[test]
    fn knapsack_file_round_trip() {
        let inst = parse_knapsack("3 6\n6 4\n5 3\n5 3\n").unwrap();
        assert_eq!(inst.capacity(), 6.0);
        assert_eq!(inst.worths(), &[6.0, 5.0, 5.0]);
        assert_eq!(inst.sizes(), &[4.0, 3.0, 3.0]);
        assert_eq!(parse_knapsack(&write_knapsack(&inst)).unwrap(), inst);
        assert!(parse_knapsack("2 6\n1 1\n").is_err());
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(6.6000000000000005), "6.6");
        assert_eq!(format_sig6(7.0 / 6.0), "1.16667");
        assert_eq!(format_sig6(123456789.0), "1.23457e+08");
        assert_eq!(format_sig6(0.000012345678), "1.23457e-05");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(f64::INFINITY), "inf");
        assert_eq!(format_sig6(0.0), "0");
    }
}
