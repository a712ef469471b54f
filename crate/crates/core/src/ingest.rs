//! Whitespace-delimited edge lists and label files.
//!
//! Format: UTF-8 text, one record per line, tokens separated by
//! whitespace. Blank lines and lines whose first non-blank character is `#`
//! are skipped. An edge line has two node tokens followed by optional
//! ignored fields; a label line is `id label`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Community, Graph};

/// How node tokens map to dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdDialect {
    /// Arbitrary tokens, indexed in order of first appearance.
    #[default]
    String,
    /// Unsigned integer tokens, indexed in increasing numeric order.
    Integer,
}

/// External id ↔ dense index bijection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    pub fn from_ids(ids: Vec<String>) -> Self {
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        IdMap { ids, index }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub id_map: IdMap,
    pub labels: Option<Vec<Community>>,
}

/// What to do with label-file ids that are not graph nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownIds {
    #[default]
    Reject,
    /// Skip them; useful when isolated nodes never appear in the edge list.
    Ignore,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Yields `(line_number, tokens)` for every non-blank, non-comment line.
fn records<'a, R: BufRead + 'a>(
    reader: R,
    path: &'a Path,
) -> impl Iterator<Item = Result<(usize, Vec<String>)>> + 'a {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(k, line)| match line {
            Err(source) => Some(Err(Error::Io {
                path: path.to_path_buf(),
                source,
            })),
            Ok(line) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((
                        k + 1,
                        trimmed.split_whitespace().map(str::to_owned).collect(),
                    )))
                }
            }
        })
}

pub fn read_edge_list(path: &Path, dialect: IdDialect) -> Result<LabeledGraph> {
    parse_edge_list(open(path)?, path, dialect)
}

/// Parses an edge list from any reader; `path` is used in error messages.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    path: &Path,
    dialect: IdDialect,
) -> Result<LabeledGraph> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut raw: Vec<(String, String)> = Vec::new();
    for rec in records(reader, path) {
        let (line, tokens) = rec?;
        if tokens.len() < 2 {
            return Err(parse_err(
                line,
                format!("expected two node ids, found {}", tokens.len()),
            ));
        }
        if dialect == IdDialect::Integer {
            for t in &tokens[..2] {
                t.parse::<u64>()
                    .map_err(|_| parse_err(line, format!("`{t}` is not an unsigned integer id")))?;
            }
        }
        let mut it = tokens.into_iter();
        let u = it.next().unwrap();
        let v = it.next().unwrap();
        raw.push((u, v));
    }

    let ids: Vec<String> = match dialect {
        IdDialect::String => {
            let mut seen = HashMap::new();
            let mut ids = Vec::new();
            for (u, v) in &raw {
                for t in [u, v] {
                    if !seen.contains_key(t) {
                        seen.insert(t.clone(), ids.len());
                        ids.push(t.clone());
                    }
                }
            }
            ids
        }
        IdDialect::Integer => {
            let mut nums: Vec<u64> = raw
                .iter()
                .flat_map(|(u, v)| [u.parse().unwrap(), v.parse().unwrap()])
                .collect();
            nums.sort_unstable();
            nums.dedup();
            nums.into_iter().map(|x| x.to_string()).collect()
        }
    };
    let id_map = IdMap::from_ids(ids);
    if id_map.is_empty() {
        return Err(Error::NoNodes);
    }
    let lookup = |t: &str| match dialect {
        IdDialect::String => id_map.get(t).unwrap(),
        // Canonical spelling, so `007` and `7` are the same node.
        IdDialect::Integer => id_map.get(&t.parse::<u64>().unwrap().to_string()).unwrap(),
    };
    let edges: Vec<(usize, usize)> = raw.iter().map(|(u, v)| (lookup(u), lookup(v))).collect();
    let graph = Graph::from_edges(id_map.len(), &edges)?;
    Ok(LabeledGraph {
        graph,
        id_map,
        labels: None,
    })
}

pub fn read_labels(path: &Path, id_map: &IdMap, unknown: UnknownIds) -> Result<Vec<Community>> {
    parse_labels(open(path)?, path, id_map, unknown)
}

/// Label values map to communities one and two in order of first
/// appearance. Every node of `id_map` must be labelled.
pub fn parse_labels<R: BufRead>(
    reader: R,
    path: &Path,
    id_map: &IdMap,
    unknown: UnknownIds,
) -> Result<Vec<Community>> {
    let mut values: Vec<String> = Vec::new();
    let mut labels: Vec<Option<Community>> = vec![None; id_map.len()];
    for rec in records(reader, path) {
        let (line, tokens) = rec?;
        if tokens.len() < 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                msg: format!("expected `id label`, found {} field(s)", tokens.len()),
            });
        }
        let Some(node) = id_map.get(&tokens[0]) else {
            match unknown {
                UnknownIds::Reject => return Err(Error::UnknownId(tokens[0].clone())),
                UnknownIds::Ignore => continue,
            }
        };
        let value = &tokens[1];
        let community = match values.iter().position(|v| v == value) {
            Some(0) => Community::One,
            Some(_) => Community::Two,
            None if values.len() < 2 => {
                values.push(value.clone());
                if values.len() == 1 {
                    Community::One
                } else {
                    Community::Two
                }
            }
            None => return Err(Error::TooManyLabels(value.clone())),
        };
        labels[node] = Some(community);
    }
    if values.len() != 2 {
        return Err(Error::TooFewLabels(values.len()));
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::MissingLabel(id_map.id(i).to_owned())))
        .collect()
}

/// Optional clean-up passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Preprocess {
    /// Remove degree-0 nodes.
    pub drop_isolated: bool,
    /// Keep only the largest connected component (ties: the one containing
    /// the smallest index).
    pub largest_component: bool,
}

pub fn preprocess(g: &LabeledGraph, opts: Preprocess) -> Result<LabeledGraph> {
    let n = g.graph.node_count();
    let mut keep = vec![true; n];
    if opts.drop_isolated {
        for (i, k) in keep.iter_mut().enumerate() {
            *k = g.graph.degree(i) > 0;
        }
    }
    if opts.largest_component {
        let comp = components(&g.graph);
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for &c in &comp {
            *sizes.entry(c).or_default() += 1;
        }
        // Component ids are their smallest member, so min id breaks ties.
        let best = sizes
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&c, _)| c)
            .unwrap();
        for (k, &c) in keep.iter_mut().zip(&comp) {
            *k = *k && c == best;
        }
    }
    if keep.iter().all(|&k| k) {
        return Ok(g.clone());
    }
    induced(g, &keep)
}

/// Component id of every node: the smallest node index in its component.
fn components(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if comp[v] == usize::MAX {
                    comp[v] = s;
                    stack.push(v);
                }
            }
        }
    }
    comp
}

fn induced(g: &LabeledGraph, keep: &[bool]) -> Result<LabeledGraph> {
    let mut new_index = vec![usize::MAX; keep.len()];
    let mut ids = Vec::new();
    for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
        new_index[i] = ids.len();
        ids.push(g.id_map.id(i).to_owned());
    }
    if ids.is_empty() {
        return Err(Error::NoNodes);
    }
    let edges: Vec<(usize, usize)> = g
        .graph
        .edges()
        .filter(|&(u, v)| keep[u] && keep[v])
        .map(|(u, v)| (new_index[u], new_index[v]))
        .collect();
    let graph = Graph::from_edges(ids.len(), &edges)?;
    let labels = g.labels.as_ref().map(|l| {
        l.iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&c, _)| c)
            .collect()
    });
    Ok(LabeledGraph {
        graph,
        id_map: IdMap::from_ids(ids),
        labels,
    })
}

/// Writes `min max` index pairs in sorted order, one per line.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn write_edge_list_file(g: &Graph, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: PathBuf::from(path),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = std::io::BufWriter::new(file);
    write_edge_list(g, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Community::{One, Two};

    fn parse(text: &str, dialect: IdDialect) -> Result<LabeledGraph> {
        parse_edge_list(text.as_bytes(), Path::new("mem"), dialect)
    }

    #[test]
    fn string_ids_in_first_appearance_order() {
        let lg = parse("a b\nb c\n", IdDialect::String).unwrap();
        assert_eq!(lg.id_map.ids(), &["a", "b", "c"]);
        assert_eq!(lg.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn duplicates_and_loops_collapse() {
        let lg = parse("1 2\n2 1\n1 1\n", IdDialect::String).unwrap();
        assert_eq!(lg.graph.edge_count(), 1);
        assert_eq!(lg.graph.node_count(), 2);
    }

    #[test]
    fn comments_blanks_and_extra_fields() {
        let lg = parse(
            "# header\n\n  x y 0.5 extra\n   # indented comment\ny z\n",
            IdDialect::String,
        )
        .unwrap();
        assert_eq!(lg.graph.edge_count(), 2);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse("a b\n# c\nlonely\n", IdDialect::String).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("1 2\n3 x\n", IdDialect::Integer).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            parse("# nothing\n", IdDialect::String),
            Err(Error::NoNodes)
        ));
    }

    #[test]
    fn integer_ids_sort_numerically() {
        let lg = parse("10 2\n2 007\n", IdDialect::Integer).unwrap();
        assert_eq!(lg.id_map.ids(), &["2", "7", "10"]);
        assert!(lg.graph.has_edge(0, 2) && lg.graph.has_edge(0, 1));
    }

    #[test]
    fn labels_by_first_appearance() {
        let map = IdMap::from_ids(vec!["a".into(), "b".into(), "c".into()]);
        let l = parse_labels(
            "a 0\nb 1\nc 0\n".as_bytes(),
            Path::new("m"),
            &map,
            UnknownIds::Reject,
        )
        .unwrap();
        assert_eq!(l, vec![One, Two, One]);

        let l = parse_labels(
            "c liberal\na conservative\nb liberal\n".as_bytes(),
            Path::new("m"),
            &map,
            UnknownIds::Reject,
        )
        .unwrap();
        assert_eq!(l, vec![Two, One, One]);
    }

    #[test]
    fn label_errors() {
        let map = IdMap::from_ids(vec!["a".into(), "b".into(), "c".into()]);
        let p = Path::new("m");
        match parse_labels("a 0\nb 1\n".as_bytes(), p, &map, UnknownIds::Reject) {
            Err(Error::MissingLabel(id)) => assert_eq!(id, "c"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_labels("a 0\nb 1\nc 2\n".as_bytes(), p, &map, UnknownIds::Reject),
            Err(Error::TooManyLabels(_))
        ));
        assert!(matches!(
            parse_labels(
                "a 0\nb 1\nc 0\nzz 1\n".as_bytes(),
                p,
                &map,
                UnknownIds::Reject
            ),
            Err(Error::UnknownId(_))
        ));
        assert!(parse_labels(
            "a 0\nb 1\nc 0\nzz 1\n".as_bytes(),
            p,
            &map,
            UnknownIds::Ignore
        )
        .is_ok());
        assert!(matches!(
            parse_labels("a 0\nb 0\nc 0\n".as_bytes(), p, &map, UnknownIds::Reject),
            Err(Error::TooFewLabels(1))
        ));
    }

    #[test]
    fn drop_isolated_compacts_everything() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 3)]).unwrap();
        let lg = LabeledGraph {
            graph: g,
            id_map: IdMap::from_ids(vec!["a".into(), "b".into(), "iso".into(), "d".into()]),
            labels: Some(vec![One, One, Two, Two]),
        };
        let opts = Preprocess {
            drop_isolated: true,
            ..Preprocess::default()
        };
        let p = preprocess(&lg, opts).unwrap();
        assert_eq!(p.graph.node_count(), 3);
        assert_eq!(p.id_map.ids(), &["a", "b", "d"]);
        assert_eq!(p.labels, Some(vec![One, One, Two]));
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        // Idempotent.
        assert_eq!(preprocess(&p, opts).unwrap(), p);
    }

    #[test]
    fn largest_component() {
        let g = Graph::from_edges(7, &[(0, 1), (2, 3), (3, 4), (4, 2), (5, 6)]).unwrap();
        let lg = LabeledGraph {
            graph: g,
            id_map: IdMap::from_ids((0..7).map(|i| i.to_string()).collect()),
            labels: None,
        };
        let p = preprocess(
            &lg,
            Preprocess {
                drop_isolated: true,
                largest_component: true,
            },
        )
        .unwrap();
        assert_eq!(p.id_map.ids(), &["2", "3", "4"]);
        assert_eq!(p.graph.edge_count(), 3);
    }

    #[test]
    fn canonical_writer() {
        let g = Graph::from_edges(4, &[(3, 1), (0, 2), (2, 0), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n0 2\n1 3\n");
    }
}
