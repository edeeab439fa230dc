//! Report trees and their two text renderings.
//!
//! Machine format: one `path = value` line per leaf, where `path` joins map
//! keys and list/row indices with `.`. Map keys are emitted in sorted order,
//! list and row indices in increasing order, and table cells are addressed as
//! `path.ROW.COLUMN`. Table format: indented `key: value` lines with tables
//! drawn as aligned columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Value(String),
    List(Vec<Node>),
    Map(Report),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

impl From<String> for Node {
    fn from(s: String) -> Self {
        Node::Value(s)
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Self {
        Node::Value(s.to_string())
    }
}

impl From<Report> for Node {
    fn from(r: Report) -> Self {
        Node::Map(r)
    }
}

macro_rules! display_node {
    ($($t:ty),*) => {
        $(impl From<$t> for Node {
            fn from(v: $t) -> Self {
                Node::Value(v.to_string())
            }
        })*
    };
}

display_node!(i64, u32, usize, bool);

impl Node {
    pub fn table(columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        Node::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    pub fn list<T: Into<Node>>(items: impl IntoIterator<Item = T>) -> Self {
        Node::List(items.into_iter().map(Into::into).collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: BTreeMap<String, Node>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<Node>) -> &mut Self {
        self.entries.insert(key.to_string(), value.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Node>) -> Self {
        self.set(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.entries.get(key)
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            machine(&mut out, k, v);
        }
        out
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        table_map(&mut out, self, 0);
        out
    }
}

fn machine(out: &mut String, path: &str, node: &Node) {
    match node {
        Node::Value(v) => {
            let _ = writeln!(out, "{path} = {v}");
        }
        Node::List(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{path} = []");
            }
            for (i, item) in items.iter().enumerate() {
                machine(out, &format!("{path}.{i}"), item);
            }
        }
        Node::Map(r) => {
            if r.entries.is_empty() {
                let _ = writeln!(out, "{path} = {{}}");
            }
            for (k, v) in &r.entries {
                machine(out, &format!("{path}.{k}"), v);
            }
        }
        Node::Table { columns, rows } => {
            if rows.is_empty() {
                let _ = writeln!(out, "{path} = []");
            }
            for (i, row) in rows.iter().enumerate() {
                let mut cells: Vec<(&String, &String)> = columns.iter().zip(row).collect();
                cells.sort();
                for (c, v) in cells {
                    let _ = writeln!(out, "{path}.{i}.{c} = {v}");
                }
            }
        }
    }
}

fn table_map(out: &mut String, r: &Report, indent: usize) {
    for (k, v) in &r.entries {
        table_entry(out, k, v, indent);
    }
}

fn table_entry(out: &mut String, key: &str, node: &Node, indent: usize) {
    let pad = " ".repeat(indent);
    match node {
        Node::Value(v) if v.contains('\n') => {
            let _ = writeln!(out, "{pad}{key}:");
            for line in v.lines() {
                let _ = writeln!(out, "{pad}  {line}");
            }
        }
        Node::Value(v) => {
            let _ = writeln!(out, "{pad}{key}: {v}");
        }
        Node::List(items)
            if items
                .iter()
                .all(|i| matches!(i, Node::Value(v) if !v.contains('\n'))) =>
        {
            let values: Vec<&str> = items
                .iter()
                .map(|i| match i {
                    Node::Value(v) => v.as_str(),
                    _ => unreachable!(),
                })
                .collect();
            let _ = writeln!(out, "{pad}{key}: [{}]", values.join(", "));
        }
        Node::List(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, item) in items.iter().enumerate() {
                table_entry(out, &format!("[{i}]"), item, indent + 2);
            }
        }
        Node::Map(r) => {
            let _ = writeln!(out, "{pad}{key}:");
            table_map(out, r, indent + 2);
        }
        Node::Table { columns, rows } => {
            let _ = writeln!(out, "{pad}{key}:");
            if rows.is_empty() {
                let _ = writeln!(out, "{pad}  (empty)");
                return;
            }
            let widths: Vec<usize> = columns
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    rows.iter()
                        .map(|r| r[j].len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                let parts: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                format!("{pad}  {}", parts.join("  ").trim_end())
            };
            let _ = writeln!(
                out,
                "{}",
                line(columns.iter().map(String::as_str).collect())
            );
            for r in rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
    }
}
