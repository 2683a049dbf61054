//! Directed graph model, shift matrices, reachability and file formats.
//!
//! Vertices are `0..n`. An edge `(i, j)` goes from `i` to `j` and becomes the
//! entry `A[i][j]` of the adjacency matrix (rows are sources).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: duplicate edge ({i}, {j})")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("header announced {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("line {line}: edge weight must be nonzero")]
    ZeroWeight { line: usize },
    #[error("vertex {index} out of range for n = {n}")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("edge ({0}, {1}) already present")]
    EdgePresent(usize, usize),
    #[error("self-loop at vertex {0} is not allowed in a Laplacian")]
    SelfLoop(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Which degree goes on the diagonal of `L = D - A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegreeConvention {
    InDegree,
    OutDegree,
}

/// Edges added to and removed from a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDelta {
    pub added: Vec<(usize, usize)>,
    pub removed: Vec<(usize, usize)>,
}

impl EdgeDelta {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }

    /// Distinct source rows touched by the delta.
    pub fn touched_rows(&self) -> BTreeSet<usize> {
        self.added.iter().chain(&self.removed).map(|&(i, _)| i).collect()
    }
}

/// A directed graph with optional nonzero edge weights.
///
/// Values are immutable; "modifying" operations return a new graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    weights: Option<BTreeMap<(usize, usize), f64>>,
}

impl Digraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: BTreeSet::new(), weights: None }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            check_vertex(i, n)?;
            check_vertex(j, n)?;
            if !set.insert((i, j)) {
                return Err(GraphError::EdgePresent(i, j));
            }
        }
        Ok(Self { n, edges: set, weights: None })
    }

    pub fn from_weighted_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        let mut weights = BTreeMap::new();
        for (i, j, w) in edges {
            check_vertex(i, n)?;
            check_vertex(j, n)?;
            if w == 0.0 || !w.is_finite() {
                return Err(GraphError::ZeroWeight { line: 0 });
            }
            if !set.insert((i, j)) {
                return Err(GraphError::EdgePresent(i, j));
            }
            weights.insert((i, j), w);
        }
        Ok(Self { n, edges: set, weights: Some(weights) })
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Product of two directed paths: a `rows x cols` grid whose vertex
    /// `r * cols + c` points right and up.
    pub fn directed_grid(rows: usize, cols: usize) -> Self {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::from_edges(rows * cols, e).expect("valid grid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of `(i, j)`: `None` if absent, `1.0` for unweighted edges.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        if !self.has_edge(i, j) {
            return None;
        }
        Some(self.weights.as_ref().and_then(|w| w.get(&(i, j)).copied()).unwrap_or(1.0))
    }

    pub fn self_loops(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(|(i, j)| i == j).map(|&(i, _)| i)
    }

    pub fn has_self_loops(&self) -> bool {
        self.self_loops().next().is_some()
    }

    /// `true` if every ordered pair (loops included) is an edge.
    pub fn is_complete_with_loops(&self) -> bool {
        self.edges.len() == self.n * self.n
    }

    /// Copy of the graph with edge `(i, j)` added at weight 1.
    pub fn with_edge(&self, i: usize, j: usize) -> Result<Self, GraphError> {
        self.with_weighted_edge(i, j, 1.0)
    }

    pub fn with_weighted_edge(&self, i: usize, j: usize, w: f64) -> Result<Self, GraphError> {
        check_vertex(i, self.n)?;
        check_vertex(j, self.n)?;
        if w == 0.0 {
            return Err(GraphError::ZeroWeight { line: 0 });
        }
        if self.has_edge(i, j) {
            return Err(GraphError::EdgePresent(i, j));
        }
        let mut out = self.clone();
        out.edges.insert((i, j));
        match out.weights.as_mut() {
            Some(ws) => {
                ws.insert((i, j), w);
            }
            None if w != 1.0 => {
                let mut ws: BTreeMap<_, _> = self.edges.iter().map(|&e| (e, 1.0)).collect();
                ws.insert((i, j), w);
                out.weights = Some(ws);
            }
            None => {}
        }
        Ok(out)
    }

    /// Copy of the graph without edge `(i, j)`.
    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.edges.remove(&(i, j));
        if let Some(ws) = out.weights.as_mut() {
            ws.remove(&(i, j));
        }
        out
    }

    /// Edges added and removed going from `self` to `other`.
    pub fn delta_to(&self, other: &Digraph) -> EdgeDelta {
        EdgeDelta {
            added: other.edges.difference(&self.edges).copied().collect(),
            removed: self.edges.difference(&other.edges).copied().collect(),
        }
    }

    /// Weighted adjacency matrix, row index = source.
    pub fn adjacency_matrix<T: Real>(&self) -> Matrix<T> {
        let mut a = Matrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = T::lit(self.weight(i, j).unwrap_or(1.0));
        }
        a
    }

    /// Directed Laplacian `L = D - A`.
    pub fn laplacian_matrix<T: Real>(&self, conv: DegreeConvention) -> Result<Matrix<T>, GraphError> {
        if let Some(v) = self.self_loops().next() {
            return Err(GraphError::SelfLoop(v));
        }
        let mut l = Matrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            let w = T::lit(self.weight(i, j).unwrap_or(1.0));
            l[(i, j)] -= w;
            match conv {
                DegreeConvention::InDegree => l[(j, j)] += w,
                DegreeConvention::OutDegree => l[(i, i)] += w,
            }
        }
        Ok(l)
    }

    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
        }
        adj
    }

    /// Whether a directed path (possibly empty) leads from `from` to `to`.
    pub fn has_path(&self, from: usize, to: usize) -> Result<bool, GraphError> {
        check_vertex(from, self.n)?;
        check_vertex(to, self.n)?;
        if from == to {
            return Ok(true);
        }
        let adj = self.out_lists();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if w == to {
                    return Ok(true);
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(false)
    }

    /// `r[a][b]` is whether a (possibly empty) directed path leads from `a`
    /// to `b`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let adj = self.out_lists();
        (0..self.n)
            .map(|a| {
                let mut seen = vec![false; self.n];
                let mut stack = vec![a];
                seen[a] = true;
                while let Some(v) = stack.pop() {
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// Components under direction-blind reachability, each sorted, ordered by
    /// smallest vertex.
    pub fn weakly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weakly_connected_components().len() <= 1
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, j) in &self.edges {
            d[j] += 1;
        }
        d
    }
}

fn check_vertex(v: usize, n: usize) -> Result<(), GraphError> {
    if v >= n {
        Err(GraphError::VertexOutOfRange { index: v, n })
    } else {
        Ok(())
    }
}

fn strip_comment(line: &str, marker: char) -> &str {
    match line.find(marker) {
        Some(pos) => &line[..pos],
        None => line,
    }
    .trim()
}

fn parse_index(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse::<usize>().map_err(|_| GraphError::Malformed {
        line,
        reason: format!("expected a non-negative integer, got {tok:?}"),
    })
}

fn parse_weight(tok: &str, line: usize) -> Result<f64, GraphError> {
    let w: f64 = tok.parse().map_err(|_| GraphError::Malformed {
        line,
        reason: format!("expected a weight, got {tok:?}"),
    })?;
    if !w.is_finite() {
        return Err(GraphError::Malformed { line, reason: "non-finite weight".into() });
    }
    if w == 0.0 {
        return Err(GraphError::ZeroWeight { line });
    }
    Ok(w)
}

/// Parses the edge-list format: a header `n m` followed by `m` lines `i j`
/// or `i j w`. `#` starts a comment; blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Digraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l, '#')))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(GraphError::Malformed {
        line: 0,
        reason: "missing \"n m\" header".into(),
    })?;
    let htoks: Vec<&str> = header.split_whitespace().collect();
    if htoks.len() != 2 {
        return Err(GraphError::Malformed { line: hline, reason: "header must be \"n m\"".into() });
    }
    let n = parse_index(htoks[0], hline)?;
    let m = parse_index(htoks[1], hline)?;

    let mut edges = BTreeSet::new();
    let mut weights = BTreeMap::new();
    let mut weighted: Option<bool> = None;
    let mut found = 0usize;
    for (line, body) in lines {
        let toks: Vec<&str> = body.split_whitespace().collect();
        let this_weighted = match toks.len() {
            2 => false,
            3 => true,
            _ => {
                return Err(GraphError::Malformed {
                    line,
                    reason: "edge line must be \"i j\" or \"i j w\"".into(),
                })
            }
        };
        match weighted {
            None => weighted = Some(this_weighted),
            Some(w) if w != this_weighted => {
                return Err(GraphError::Malformed {
                    line,
                    reason: "weight column must be present on every edge line or on none".into(),
                })
            }
            _ => {}
        }
        let i = parse_index(toks[0], line)?;
        let j = parse_index(toks[1], line)?;
        for v in [i, j] {
            if v >= n {
                return Err(GraphError::IndexOutOfRange { line, index: v, n });
            }
        }
        let w = if this_weighted { Some(parse_weight(toks[2], line)?) } else { None };
        if !edges.insert((i, j)) {
            return Err(GraphError::DuplicateEdge { line, i, j });
        }
        if let Some(w) = w {
            weights.insert((i, j), w);
        }
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCountMismatch { expected: m, found });
    }
    Ok(Digraph {
        n,
        edges,
        weights: if weighted == Some(true) { Some(weights) } else { None },
    })
}

pub fn read_edge_list(mut r: impl Read) -> Result<Digraph, GraphError> {
    let mut s = String::new();
    r.read_to_string(&mut s).map_err(|e| GraphError::Io(e.to_string()))?;
    parse_edge_list(&s)
}

/// Serializes to the edge-list format, edges in lexicographic order.
pub fn write_edge_list(g: &Digraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n, g.edges.len()).unwrap();
    for (i, j) in g.edges() {
        match &g.weights {
            Some(ws) => writeln!(out, "{} {} {:?}", i, j, ws[&(i, j)]).unwrap(),
            None => writeln!(out, "{i} {j}").unwrap(),
        }
    }
    out
}

/// Reads a Matrix Market coordinate file (`general` symmetry, `pattern`,
/// `real` or `integer` field). Indices are 1-based in the file. Explicitly
/// stored zeros are dropped; a real/integer file whose values are all 1 gives
/// an unweighted graph.
pub fn parse_matrix_market(text: &str) -> Result<Digraph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let (_, banner) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        reason: "empty file".into(),
    })?;
    let b: Vec<String> = banner.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if b.len() != 5 || b[0] != "%%matrixmarket" || b[1] != "matrix" || b[2] != "coordinate" {
        return Err(GraphError::Malformed {
            line: 1,
            reason: "expected \"%%MatrixMarket matrix coordinate <field> general\"".into(),
        });
    }
    let has_values = match b[3].as_str() {
        "pattern" => false,
        "real" | "integer" => true,
        other => {
            return Err(GraphError::Malformed { line: 1, reason: format!("unsupported field {other}") })
        }
    };
    if b[4] != "general" {
        return Err(GraphError::Malformed {
            line: 1,
            reason: format!("unsupported symmetry {}", b[4]),
        });
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sline, size) = body.next().ok_or(GraphError::Malformed {
        line: 2,
        reason: "missing size line".into(),
    })?;
    let st: Vec<&str> = size.split_whitespace().collect();
    if st.len() != 3 {
        return Err(GraphError::Malformed { line: sline, reason: "size line must be \"rows cols nnz\"".into() });
    }
    let rows = parse_index(st[0], sline)?;
    let cols = parse_index(st[1], sline)?;
    let nnz = parse_index(st[2], sline)?;
    if rows != cols {
        return Err(GraphError::Malformed { line: sline, reason: "matrix must be square".into() });
    }
    let n = rows;
    let mut entries = Vec::with_capacity(nnz);
    let mut seen = BTreeSet::new();
    let mut found = 0;
    for (line, l) in body {
        let t: Vec<&str> = l.split_whitespace().collect();
        let want = if has_values { 3 } else { 2 };
        if t.len() != want {
            return Err(GraphError::Malformed { line, reason: format!("expected {want} columns") });
        }
        let i = parse_index(t[0], line)?;
        let j = parse_index(t[1], line)?;
        for v in [i, j] {
            if v == 0 || v > n {
                return Err(GraphError::IndexOutOfRange { line, index: v, n });
            }
        }
        found += 1;
        if !seen.insert((i - 1, j - 1)) {
            return Err(GraphError::DuplicateEdge { line, i: i - 1, j: j - 1 });
        }
        let w = if has_values {
            let w: f64 = t[2].parse().map_err(|_| GraphError::Malformed {
                line,
                reason: format!("bad value {:?}", t[2]),
            })?;
            if !w.is_finite() {
                return Err(GraphError::Malformed { line, reason: "non-finite value".into() });
            }
            w
        } else {
            1.0
        };
        if w != 0.0 {
            entries.push((i - 1, j - 1, w));
        }
    }
    if found != nnz {
        return Err(GraphError::EdgeCountMismatch { expected: nnz, found });
    }
    if entries.iter().all(|e| e.2 == 1.0) {
        Digraph::from_edges(n, entries.into_iter().map(|(i, j, _)| (i, j)))
    } else {
        Digraph::from_weighted_edges(n, entries)
    }
}

pub fn write_matrix_market(g: &Digraph) -> String {
    let mut out = String::new();
    let field = if g.is_weighted() { "real" } else { "pattern" };
    writeln!(out, "%%MatrixMarket matrix coordinate {field} general").unwrap();
    writeln!(out, "{} {} {}", g.n, g.n, g.edge_count()).unwrap();
    for (i, j) in g.edges() {
        if g.is_weighted() {
            writeln!(out, "{} {} {:?}", i + 1, j + 1, g.weight(i, j).unwrap()).unwrap();
        } else {
            writeln!(out, "{} {}", i + 1, j + 1).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_and_cycle() {
        let p = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p, Digraph::path(3));
        let c = parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(c, Digraph::cycle(4));
        let crlf = parse_edge_list("# comment\r\n3 2 # trailing\r\n0 1\r\n\r\n1 2\r\n").unwrap();
        assert_eq!(crlf, Digraph::path(3));
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert!(matches!(
            parse_edge_list("2 1\n0 1\n0 1"),
            Err(GraphError::DuplicateEdge { line: 3, i: 0, j: 1 })
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 2"),
            Err(GraphError::IndexOutOfRange { index: 2, n: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 3\n0 1\n1 2"),
            Err(GraphError::EdgeCountMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(parse_edge_list("2 1\n0 1 0.0"), Err(GraphError::ZeroWeight { line: 2 })));
        assert!(matches!(parse_edge_list("2 1\n0 x"), Err(GraphError::Malformed { .. })));
        assert!(matches!(
            parse_edge_list("3 2\n0 1 2.0\n1 2"),
            Err(GraphError::Malformed { line: 3, .. })
        ));
        assert!(matches!(parse_edge_list(""), Err(GraphError::Malformed { .. })));
    }

    #[test]
    fn weights_only_when_present() {
        let g = parse_edge_list("2 1\n0 1 2.5").unwrap();
        assert!(g.is_weighted());
        assert_eq!(g.weight(0, 1), Some(2.5));
        let a: Matrix<f64> = g.adjacency_matrix();
        assert_eq!(a[(0, 1)], 2.5);
        assert!(!Digraph::path(2).is_weighted());
    }

    #[test]
    fn adjacency_examples() {
        let a: Matrix<f64> = Digraph::path(2).adjacency_matrix();
        assert_eq!(a, Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]));
        let c: Matrix<f64> = Digraph::cycle(4).adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(c[(i, j)], if j == (i + 1) % 4 { 1.0 } else { 0.0 });
            }
        }
        let z: Matrix<f64> = Digraph::empty(3).adjacency_matrix();
        assert_eq!(z, Matrix::zeros(3, 3));
    }

    #[test]
    fn laplacian_examples() {
        let p = Digraph::path(2);
        let lin: Matrix<f64> = p.laplacian_matrix(DegreeConvention::InDegree).unwrap();
        assert_eq!(lin, Matrix::from_rows(&[vec![0.0, -1.0], vec![0.0, 1.0]]));
        let lout: Matrix<f64> = p.laplacian_matrix(DegreeConvention::OutDegree).unwrap();
        assert_eq!(lout, Matrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 0.0]]));
        let looped = Digraph::from_edges(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(
            looped.laplacian_matrix::<f64>(DegreeConvention::InDegree),
            Err(GraphError::SelfLoop(0))
        );
    }

    #[test]
    fn added_edge_changes_two_laplacian_entries() {
        let g = Digraph::directed_grid(3, 3);
        let h = g.with_edge(8, 0).unwrap();
        for conv in [DegreeConvention::InDegree, DegreeConvention::OutDegree] {
            let d = h
                .laplacian_matrix::<f64>(conv)
                .unwrap()
                .sub(&g.laplacian_matrix(conv).unwrap());
            let nz: Vec<_> = (0..9)
                .flat_map(|i| (0..9).map(move |j| (i, j)))
                .filter(|&(i, j)| d[(i, j)] != 0.0)
                .collect();
            match conv {
                DegreeConvention::InDegree => assert_eq!(nz, vec![(0, 0), (8, 0)]),
                DegreeConvention::OutDegree => assert_eq!(nz, vec![(8, 0), (8, 8)]),
            }
        }
    }

    #[test]
    fn reachability() {
        let p = Digraph::path(3);
        assert!(p.has_path(0, 2).unwrap());
        assert!(!p.has_path(2, 0).unwrap());
        let c = Digraph::cycle(4);
        for a in 0..4 {
            for b in 0..4 {
                assert!(c.has_path(a, b).unwrap());
            }
        }
        assert!(!Digraph::empty(2).has_path(0, 1).unwrap());
        assert!(p.has_path(0, 3).is_err());
        let g = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 1), (3, 0)]).unwrap();
        let r = g.reachability();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(r[a][b], g.has_path(a, b).unwrap(), "{a} {b}");
            }
        }
    }

    #[test]
    fn components() {
        assert_eq!(Digraph::path(3).weakly_connected_components(), vec![vec![0, 1, 2]]);
        let g = Digraph::from_edges(3, [(1, 0)]).unwrap();
        assert_eq!(g.weakly_connected_components(), vec![vec![0, 1], vec![2]]);
        assert_eq!(Digraph::empty(3).weakly_connected_components().len(), 3);
    }

    #[test]
    fn matrix_market_roundtrip() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n% c\n3 3 2\n1 2\n2 3\n";
        let g = parse_matrix_market(text).unwrap();
        assert_eq!(g, Digraph::path(3));
        assert_eq!(parse_matrix_market(&write_matrix_market(&g)).unwrap(), g);
        let w = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 0.5\n";
        assert_eq!(parse_matrix_market(w).unwrap().weight(0, 1), Some(0.5));
        let sym = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 0.5\n";
        assert!(parse_matrix_market(sym).is_err());
    }

    #[test]
    fn delta() {
        let p = Digraph::path(4);
        let c = Digraph::cycle(4);
        let d = p.delta_to(&c);
        assert_eq!(d.added, vec![(3, 0)]);
        assert!(d.removed.is_empty());
        assert_eq!(d.touched_rows().into_iter().collect::<Vec<_>>(), vec![3]);
    }
}
