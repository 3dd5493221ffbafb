//! The annotated search graph: states as nodes, compilable tactic
//! applications as edges, with proof-path marking, shape statistics, and
//! DOT / JSON export.
//!
//! States reached by different tactics collapse into one node (keyed by the
//! canonical state serialization), so the structure is a DAG and can carry
//! more edges than nodes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::kernel::{ProofScript, ProofState, Tactic};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofNode {
    pub id: NodeId,
    pub state: ProofState,
    pub on_proof_path: bool,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub tactic: Tactic,
    #[serde(rename = "nll")]
    pub neg_log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTree {
    nodes: Vec<ProofNode>,
    edges: Vec<ProofEdge>,
    by_key: BTreeMap<String, NodeId>,
    root: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("parent state is not in the tree")]
    UnknownParent,
    #[error("malformed tree file: {0}")]
    Malformed(String),
    #[error("unsupported tree schema version `{0}`")]
    Version(String),
}

impl ProofTree {
    pub fn new(root_state: ProofState) -> Self {
        let key = root_state.canonical_key();
        let mut by_key = BTreeMap::new();
        by_key.insert(key, 0);
        ProofTree {
            nodes: alloc::vec![ProofNode {
                id: 0,
                state: root_state,
                on_proof_path: false,
                depth: 0,
            }],
            edges: Vec::new(),
            by_key,
            root: 0,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[ProofNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ProofEdge] {
        &self.edges
    }

    pub fn state(&self, id: NodeId) -> &ProofState {
        &self.nodes[id].state
    }

    pub fn node_by_key(&self, key: &str) -> Option<NodeId> {
        self.by_key.get(key).copied()
    }

    /// Records one compilable tactic application. The child is deduplicated
    /// by canonical state key; a new parallel edge is appended only when
    /// `(parent, tactic)` was not seen before, so recording the identical
    /// quadruple twice is a no-op. Returns the child's node id.
    pub fn record_edge(
        &mut self,
        parent_state: &ProofState,
        tactic: &Tactic,
        neg_log_likelihood: f64,
        child_state: &ProofState,
    ) -> Result<NodeId, TreeError> {
        let parent = self
            .node_by_key(&parent_state.canonical_key())
            .ok_or(TreeError::UnknownParent)?;
        let child_key = child_state.canonical_key();
        let parent_depth = self.nodes[parent].depth;
        let child = match self.by_key.get(&child_key) {
            Some(&id) => {
                if parent_depth + 1 < self.nodes[id].depth {
                    self.nodes[id].depth = parent_depth + 1;
                }
                id
            }
            None => {
                let id = self.nodes.len();
                self.nodes.push(ProofNode {
                    id,
                    state: child_state.clone(),
                    on_proof_path: false,
                    depth: parent_depth + 1,
                });
                self.by_key.insert(child_key, id);
                id
            }
        };
        let duplicate = self
            .edges
            .iter()
            .any(|e| e.parent == parent && e.tactic == *tactic);
        if !duplicate {
            self.edges.push(ProofEdge {
                parent,
                child,
                tactic: tactic.clone(),
                neg_log_likelihood,
            });
        }
        Ok(child)
    }

    /// Flags every node along a recorded proof.
    pub fn mark_proof_path(&mut self, path: &[NodeId]) {
        for &id in path {
            if let Some(node) = self.nodes.get_mut(id) {
                node.on_proof_path = true;
            }
        }
    }

    pub fn to_json(&self, stats: Option<&TreeStats>, labels: &BTreeMap<String, String>) -> String {
        let file = TreeFile {
            version: TREE_SCHEMA_VERSION.to_string(),
            root: self.root,
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            stats: stats.cloned(),
            labels: labels.clone(),
        };
        serde_json::to_string(&file).expect("tree serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<(ProofTree, Option<TreeStats>, BTreeMap<String, String>), TreeError> {
        let file: TreeFile =
            serde_json::from_str(text).map_err(|e| TreeError::Malformed(e.to_string()))?;
        if file.version != TREE_SCHEMA_VERSION {
            return Err(TreeError::Version(file.version));
        }
        let mut by_key = BTreeMap::new();
        for node in &file.nodes {
            if node.id >= file.nodes.len() {
                return Err(TreeError::Malformed(format!("node id {} out of range", node.id)));
            }
            by_key.insert(node.state.canonical_key(), node.id);
        }
        for edge in &file.edges {
            if edge.parent >= file.nodes.len() || edge.child >= file.nodes.len() {
                return Err(TreeError::Malformed("edge endpoint out of range".to_string()));
            }
        }
        let tree = ProofTree {
            nodes: file.nodes,
            edges: file.edges,
            by_key,
            root: file.root,
        };
        Ok((tree, file.stats, file.labels))
    }

    /// GraphViz rendering. Edges are labelled `tactic\n$NLL$`; the proof
    /// path (edges whose endpoints are both flagged) is drawn bold.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph proof_tree {\n  rankdir=TB;\n");
        for node in &self.nodes {
            let label = if node.state.is_qed() {
                "QED".to_string()
            } else {
                let goals = node.state.obligations.len();
                let first = escape_dot(&node.state.obligations[0].goal);
                if goals > 1 {
                    format!("{first}\\n(+{} more)", goals - 1)
                } else {
                    first
                }
            };
            let style = if node.on_proof_path {
                ", penwidth=2, style=bold"
            } else {
                ""
            };
            out.push_str(&format!("  n{} [label=\"{}\"{}];\n", node.id, label, style));
        }
        for edge in &self.edges {
            let bold = self.nodes[edge.parent].on_proof_path && self.nodes[edge.child].on_proof_path;
            let style = if bold { ", style=bold, penwidth=2" } else { "" };
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\\n${:.3}$\"{}];\n",
                edge.parent,
                edge.child,
                escape_dot(edge.tactic.text()),
                edge.neg_log_likelihood,
                style
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

pub const TREE_SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreeFile {
    version: String,
    root: NodeId,
    nodes: Vec<ProofNode>,
    edges: Vec<ProofEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stats: Option<TreeStats>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
}

/// Shape statistics of one search tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub edges: usize,
    /// edges / max(1, number of nodes with at least one outgoing edge).
    pub mean_out_degree: f64,
    pub proofs_found: usize,
    pub wall_time_s: f64,
    /// Steps of the shortest recorded proof; absent when none was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof_length: Option<usize>,
}

/// Computes the per-tree statistics from the recorded graph and the proofs
/// the search reported.
pub fn compute_stats(tree: &ProofTree, proofs: &[ProofScript], wall_time_s: f64) -> TreeStats {
    let expanded: BTreeSet<NodeId> = tree.edges.iter().map(|e| e.parent).collect();
    let denominator = expanded.len().max(1);
    TreeStats {
        nodes: tree.node_count(),
        edges: tree.edge_count(),
        mean_out_degree: tree.edge_count() as f64 / denominator as f64,
        proofs_found: proofs.len(),
        wall_time_s,
        proof_length: proofs.iter().map(ProofScript::len).min(),
    }
}

/// One aggregated row of tree statistics: arithmetic means over the trees
/// sharing a group key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub group: BTreeMap<String, String>,
    pub trees: usize,
    pub nodes: f64,
    pub edges: f64,
    pub mean_out_degree: f64,
    pub proofs_found: f64,
    pub wall_time_s: f64,
    /// Mean over the trees that found a proof; absent when none did.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof_length: Option<f64>,
}

/// Groups `(labels, stats)` pairs by the given label keys and averages each
/// group. Trees missing a grouping label fall into the `"-"` bucket for that
/// key. Rows are ordered by group value.
pub fn aggregate_stats(
    items: &[(BTreeMap<String, String>, TreeStats)],
    group_keys: &[String],
) -> Vec<StatsRow> {
    let mut groups: BTreeMap<Vec<String>, Vec<&TreeStats>> = BTreeMap::new();
    for (labels, stats) in items {
        let key: Vec<String> = group_keys
            .iter()
            .map(|k| labels.get(k).cloned().unwrap_or_else(|| "-".to_string()))
            .collect();
        groups.entry(key).or_default().push(stats);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            let n = members.len() as f64;
            let mean = |f: &dyn Fn(&TreeStats) -> f64| -> f64 {
                members.iter().map(|s| f(s)).sum::<f64>() / n
            };
            let lengths: Vec<usize> = members.iter().filter_map(|s| s.proof_length).collect();
            StatsRow {
                group: group_keys.iter().cloned().zip(key).collect(),
                trees: members.len(),
                nodes: mean(&|s| s.nodes as f64),
                edges: mean(&|s| s.edges as f64),
                mean_out_degree: mean(&|s| s.mean_out_degree),
                proofs_found: mean(&|s| s.proofs_found as f64),
                wall_time_s: mean(&|s| s.wall_time_s),
                proof_length: if lengths.is_empty() {
                    None
                } else {
                    Some(lengths.iter().sum::<usize>() as f64 / lengths.len() as f64)
                },
            }
        })
        .collect()
}

/// CSV rendering of aggregated rows: group columns first, then the means.
pub fn stats_rows_to_csv(rows: &[StatsRow], group_keys: &[String]) -> String {
    let mut out = String::new();
    for key in group_keys {
        out.push_str(&csv_field(key));
        out.push(',');
    }
    out.push_str("trees,nodes,edges,mean_out_degree,proofs_found,wall_time_s,proof_length\n");
    for row in rows {
        for key in group_keys {
            out.push_str(&csv_field(row.group.get(key).map(String::as_str).unwrap_or("-")));
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.trees,
            row.nodes,
            row.edges,
            row.mean_out_degree,
            row.proofs_found,
            row.wall_time_s,
            row.proof_length.map(|l| l.to_string()).unwrap_or_default()
        ));
    }
    out
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}
