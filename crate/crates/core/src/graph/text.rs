//! Line-oriented graph text format.
//!
//! ```text
//! 3
//! A B C
//! A B ->
//! B C --
//! ```
//!
//! Line 1 is the node count, line 2 the whitespace-separated node names, and
//! each further line one edge `parent child ->` or `a b --` (undirected).

use std::fmt::Write as _;

use super::{Dag, GraphError, Pdag};

/// Serialisation to the graph text format.
pub trait GraphText {
    fn to_text(&self) -> String;
}

fn header(names: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", names.len());
    let _ = writeln!(s, "{}", names.join(" "));
    s
}

impl GraphText for Pdag {
    fn to_text(&self) -> String {
        let mut s = header(self.names());
        for &(a, b) in self.directed_edges() {
            let _ = writeln!(s, "{} {} ->", self.names()[a], self.names()[b]);
        }
        for &(a, b) in self.undirected_edges() {
            let _ = writeln!(s, "{} {} --", self.names()[a], self.names()[b]);
        }
        s
    }
}

impl GraphText for Dag {
    fn to_text(&self) -> String {
        Pdag::from_dag(self).to_text()
    }
}

/// Parses the graph text format into a [`Pdag`].
pub fn parse_graph_text(text: &str) -> Result<Pdag, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, message: String| GraphError::Parse { line, message };

    let (ln, count) = lines
        .next()
        .ok_or_else(|| err(1, "missing node count".into()))?;
    let n: usize = count
        .parse()
        .map_err(|_| err(ln, format!("invalid node count '{count}'")))?;
    let names: Vec<String> = if n == 0 {
        Vec::new()
    } else {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| err(ln + 1, "missing node names".into()))?;
        let names: Vec<String> = row.split_whitespace().map(str::to_string).collect();
        if names.len() != n {
            return Err(err(
                ln,
                format!("expected {n} node names, found {}", names.len()),
            ));
        }
        names
    };
    let lookup = |name: &str, line: usize| {
        names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| err(line, format!("unknown node '{name}'")))
    };
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for (ln, row) in lines {
        let parts: Vec<&str> = row.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(
                ln,
                format!("expected 'a b ->' or 'a b --', found '{row}'"),
            ));
        }
        let a = lookup(parts[0], ln)?;
        let b = lookup(parts[1], ln)?;
        match parts[2] {
            "->" => directed.push((a, b)),
            "--" => undirected.push((a, b)),
            other => return Err(err(ln, format!("unknown edge mark '{other}'"))),
        }
    }
    Pdag::new(names, directed, undirected)
}
