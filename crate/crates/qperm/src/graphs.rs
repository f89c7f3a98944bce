//! Small undirected labeled graphs: component decomposition and DOT export
//! for the orbit, orbital, and profile reports. Output order is fixed by
//! node index and sorted edges so identical runs produce identical files.

use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl LabeledGraph {
    pub fn new(labels: Vec<String>) -> Self {
        LabeledGraph {
            labels,
            edges: BTreeSet::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Adds an undirected edge; self-loops and duplicates are dropped.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.labels.len() && b < self.labels.len(), "edge endpoint out of range");
        if a != b {
            self.edges.insert((a.min(b), a.max(b)));
        }
    }

    /// Connected components as sorted node lists, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..n {
            let r = find(&mut parent, x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.num_nodes() <= 1 || self.components().len() == 1
    }

    /// DOT rendering with one node line per vertex and sorted edge lines.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph {} {{\n", sanitize_dot_id(name)));
        for (idx, label) in self.labels.iter().enumerate() {
            out.push_str(&format!("  n{idx} [label=\"{}\"];\n", escape_dot(label)));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  n{a} -- n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn sanitize_dot_id(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if cleaned.is_empty() || cleaned.chars().next().unwrap().is_ascii_digit() {
        format!("g_{cleaned}")
    } else {
        cleaned
    }
}

fn escape_dot(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}
