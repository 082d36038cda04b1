use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::{AtlasError, Strip};
use crate::lifting::{branch_fan, LiftOptions, PlanePath, Termination};
use crate::models::AnalyticTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum NodeRef {
    Leaf(usize),
    Node(usize),
}

/// Fusion of two level-set components of `|f|` at a zero `v` of `f'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeNode {
    pub v: Complex64,
    pub r: f64,
    pub children: [NodeRef; 2],
    /// Leaves reached by the two descents from `v`.
    pub descent_leaves: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    pub leaves: Vec<Complex64>,
    pub nodes: Vec<MergeNode>,
    pub root: Option<NodeRef>,
    /// Some descent failed or two descents met an already merged component.
    pub partial: bool,
    pub failures: Vec<String>,
}

impl MergeTree {
    pub fn internal_count(&self) -> usize {
        self.nodes.len()
    }

    /// Every internal node has a larger `r` than its internal children.
    pub fn radii_increase(&self) -> bool {
        self.nodes.iter().all(|n| {
            n.children.iter().all(|c| match c {
                NodeRef::Node(i) => self.nodes[*i].r < n.r,
                NodeRef::Leaf(_) => true,
            })
        })
    }

    /// `(leaf with smaller Re, v)` for each node, as used by the ordering check.
    pub fn ordering_pairs(&self) -> Vec<(Complex64, Complex64)> {
        self.nodes
            .iter()
            .map(|n| {
                let [a, b] = n.descent_leaves.map(|i| self.leaves[i]);
                (if a.re <= b.re { a } else { b }, n.v)
            })
            .collect()
    }
}

/// Builds the merge tree of a strip: zeros of `f'` in order of `|f(v)|`
/// (ties by `t`), each joining the two components reached by the steepest
/// descents of `|f|` from `v`, which are the lifts of the segment from
/// `f(v)` to 0 leaving `v`.
pub fn merge_tree(target: &dyn AnalyticTarget, strip: &Strip, opts: &LiftOptions) -> Result<MergeTree, AtlasError> {
    let leaves: Vec<Complex64> = strip.zeros.iter().map(|z| z.s).collect();
    let mut crit: Vec<(Complex64, f64)> = Vec::new();
    for d in &strip.derivative_zeros {
        crit.push((d.s, target.eval(d.s)?.norm()));
    }
    crit.sort_by(|a, b| if (a.1 - b.1).abs() <= 1e-10 { a.0.im.total_cmp(&b.0.im) } else { a.1.total_cmp(&b.1) });

    let mut uf = UnionFind::<usize>::new(leaves.len());
    // current top node of each union-find representative
    let mut top: Vec<NodeRef> = (0..leaves.len()).map(NodeRef::Leaf).collect();
    let mut nodes = Vec::new();
    let mut failures = Vec::new();
    for (v, r) in crit {
        let fv = target.eval(v)?;
        let path = PlanePath::segment(fv, Complex64::new(0.0, 0.0));
        let arcs = match branch_fan(target, v, &path, 0.0, opts) {
            Ok(a) => a,
            Err(e) => {
                failures.push(format!("descent from {v}: {e}"));
                continue;
            }
        };
        let mut hit = Vec::new();
        for arc in &arcs {
            let end = arc.last();
            let leaf = leaves
                .iter()
                .enumerate()
                .filter(|(_, z)| (**z - end).norm() < 1e-6 * (1.0 + z.norm()))
                .map(|(i, _)| i)
                .next();
            match (arc.termination, leaf) {
                (Termination::Completed, Some(i)) => hit.push(i),
                (t, _) => failures.push(format!("descent from {v} ended at {end} ({t:?}) away from the strip zeros")),
            }
        }
        if hit.len() != 2 {
            continue;
        }
        let (ra, rb) = (uf.find(hit[0]), uf.find(hit[1]));
        if ra == rb {
            failures.push(format!("descents from {v} reach one component"));
            continue;
        }
        let node = MergeNode { v, r, children: [top[ra], top[rb]], descent_leaves: [hit[0], hit[1]] };
        nodes.push(node);
        uf.union(ra, rb);
        let rep = uf.find(ra);
        top[rep] = NodeRef::Node(nodes.len() - 1);
    }
    let root = match leaves.len() {
        0 => None,
        _ if nodes.len() + 1 == leaves.len() => Some(top[uf.find(0)]),
        _ => None,
    };
    let partial = !failures.is_empty() || root.is_none() && !leaves.is_empty();
    Ok(MergeTree { leaves, nodes, root, partial, failures })
}
