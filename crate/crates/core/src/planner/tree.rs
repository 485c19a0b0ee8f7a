//! Search tree storage and the RRT* neighborhood operations.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dual_quaternion::{DualQuaternion, Pose};
use crate::error::TreeError;
use crate::pose_space::{se3_distance, MetricWeights};

/// Minimum cost decrease for a rewire to count as an improvement.
pub const REWIRE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub id: usize,
    pub pose: DualQuaternion,
    /// Decoded copy of `pose`, kept for metric evaluation.
    pub decoded: Pose,
    pub parent: Option<usize>,
    pub cost_from_root: f64,
    /// Metric length of the edge from the parent (0 for the root).
    pub edge_cost: f64,
    pub children: Vec<usize>,
}

/// A root-to-node chain extracted from the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub node_ids: Vec<usize>,
    pub poses: Vec<DualQuaternion>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    weights: MetricWeights,
}

fn decode(q: &DualQuaternion) -> Pose {
    Pose::new(q.real, q.translation())
}

impl Tree {
    pub fn new(root: DualQuaternion, weights: MetricWeights) -> Self {
        let node = TreeNode {
            id: 0,
            pose: root,
            decoded: decode(&root),
            parent: None,
            cost_from_root: 0.0,
            edge_cost: 0.0,
            children: Vec::new(),
        };
        Self {
            nodes: vec![node],
            weights,
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weights(&self) -> &MetricWeights {
        &self.weights
    }

    pub fn node(&self, id: usize) -> Result<&TreeNode, TreeError> {
        self.nodes.get(id).ok_or(TreeError::UnknownNode(id))
    }

    pub fn cost(&self, id: usize) -> f64 {
        self.nodes[id].cost_from_root
    }

    /// Metric distance from node `id` to a decoded pose.
    pub fn distance_to(&self, id: usize, pose: &Pose) -> f64 {
        se3_distance(&self.nodes[id].decoded, pose, &self.weights)
    }

    pub fn distance_between(&self, a: usize, b: usize) -> f64 {
        se3_distance(&self.nodes[a].decoded, &self.nodes[b].decoded, &self.weights)
    }

    pub fn nearest(&self, q: &DualQuaternion) -> Result<usize, TreeError> {
        nearest(&self.nodes, q, &self.weights)
    }

    pub fn near_set(&self, q: &DualQuaternion, radius: f64) -> Vec<usize> {
        near_set(&self.nodes, q, radius, &self.weights)
    }

    /// Appends `pose` as a child of `parent` and returns its id.
    pub fn add(&mut self, pose: DualQuaternion, parent: usize) -> usize {
        let id = self.nodes.len();
        let decoded = decode(&pose);
        let edge_cost = se3_distance(&self.nodes[parent].decoded, &decoded, &self.weights);
        let cost_from_root = self.nodes[parent].cost_from_root + edge_cost;
        self.nodes.push(TreeNode {
            id,
            pose,
            decoded,
            parent: Some(parent),
            cost_from_root,
            edge_cost,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    /// True when `ancestor` lies on the parent chain of `node` (or equals it).
    pub fn is_ancestor(&self, ancestor: usize, node: usize) -> bool {
        let mut cur = Some(node);
        let mut steps = 0;
        while let Some(id) = cur {
            if id == ancestor {
                return true;
            }
            steps += 1;
            if steps > self.nodes.len() {
                return false;
            }
            cur = self.nodes[id].parent;
        }
        false
    }

    /// Moves `child` under `new_parent` and refreshes the costs of its subtree.
    pub fn reparent(&mut self, child: usize, new_parent: usize) {
        if let Some(old) = self.nodes[child].parent {
            self.nodes[old].children.retain(|&c| c != child);
        }
        let edge_cost = self.distance_between(new_parent, child);
        self.nodes[child].parent = Some(new_parent);
        self.nodes[child].edge_cost = edge_cost;
        self.nodes[new_parent].children.push(child);
        self.refresh_subtree_costs(child);
    }

    fn refresh_subtree_costs(&mut self, top: usize) {
        let mut stack = vec![top];
        while let Some(id) = stack.pop() {
            let parent_cost = self.nodes[id]
                .parent
                .map_or(0.0, |p| self.nodes[p].cost_from_root);
            self.nodes[id].cost_from_root = parent_cost + self.nodes[id].edge_cost;
            stack.extend_from_slice(&self.nodes[id].children);
        }
    }

    /// Re-parents each neighbor through `new_id` when that lowers its cost by
    /// more than [`REWIRE_EPSILON`] and `edge_clear(new, neighbor)` holds.
    /// Returns the number of re-parented nodes.
    pub fn rewire<F>(&mut self, new_id: usize, neighbors: &[usize], mut edge_clear: F) -> usize
    where
        F: FnMut(&DualQuaternion, &DualQuaternion) -> bool,
    {
        let mut count = 0;
        for &j in neighbors {
            if j == new_id || self.nodes[new_id].parent == Some(j) {
                continue;
            }
            let through_new = self.nodes[new_id].cost_from_root + self.distance_between(new_id, j);
            if !(through_new < self.nodes[j].cost_from_root - REWIRE_EPSILON) {
                continue;
            }
            if self.is_ancestor(j, new_id) {
                continue;
            }
            if !edge_clear(&self.nodes[new_id].pose, &self.nodes[j].pose) {
                continue;
            }
            self.reparent(j, new_id);
            count += 1;
        }
        count
    }

    pub fn extract_path(&self, goal_id: usize) -> Result<Branch, TreeError> {
        extract_path(&self.nodes, goal_id)
    }

    /// Checks single root, acyclicity, parent/child agreement and the cost
    /// recursion (within `tol`, using freshly computed distances).
    pub fn check_consistency(&self, tol: f64) -> Result<(), String> {
        use alloc::format;
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(format!("node at slot {i} has id {}", node.id));
            }
            match node.parent {
                None if i != 0 => return Err(format!("node {i} has no parent")),
                None => {
                    if node.cost_from_root != 0.0 {
                        return Err(format!("root cost {} is not zero", node.cost_from_root));
                    }
                }
                Some(p) => {
                    if i == 0 {
                        return Err("root has a parent".into());
                    }
                    if p >= n {
                        return Err(format!("node {i} has out-of-range parent {p}"));
                    }
                    if !self.nodes[p].children.contains(&i) {
                        return Err(format!("node {i} missing from children of {p}"));
                    }
                    let expect = self.nodes[p].cost_from_root
                        + se3_distance(&self.nodes[p].decoded, &node.decoded, &self.weights);
                    if (node.cost_from_root - expect).abs() > tol {
                        return Err(format!(
                            "cost recursion broken at node {i}: {} vs {expect}",
                            node.cost_from_root
                        ));
                    }
                }
            }
            for &c in &node.children {
                if self.nodes.get(c).and_then(|c| c.parent) != Some(i) {
                    return Err(format!("child {c} of {i} does not point back"));
                }
            }
            if !self.is_ancestor(0, i) {
                return Err(format!("node {i} does not reach the root"));
            }
        }
        Ok(())
    }
}

/// Index of the node closest to `q`; ties go to the lowest index.
pub fn nearest(nodes: &[TreeNode], q: &DualQuaternion, w: &MetricWeights) -> Result<usize, TreeError> {
    let target = decode(q);
    let mut best: Option<(usize, f64)> = None;
    for node in nodes {
        let d = se3_distance(&node.decoded, &target, w);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((node.id, d));
        }
    }
    best.map(|(id, _)| id).ok_or(TreeError::EmptyTree)
}

/// Indices of all nodes within `radius` of `q`, ascending.
pub fn near_set(nodes: &[TreeNode], q: &DualQuaternion, radius: f64, w: &MetricWeights) -> Vec<usize> {
    let target = decode(q);
    nodes
        .iter()
        .filter(|n| se3_distance(&n.decoded, &target, w) <= radius)
        .map(|n| n.id)
        .collect()
}

/// Root-to-`goal_id` pose chain.
pub fn extract_path(nodes: &[TreeNode], goal_id: usize) -> Result<Branch, TreeError> {
    let goal = nodes.get(goal_id).ok_or(TreeError::UnknownNode(goal_id))?;
    let mut ids = vec![goal_id];
    let mut cur = goal.parent;
    while let Some(id) = cur {
        if ids.len() > nodes.len() {
            return Err(TreeError::BrokenParentChain(goal_id));
        }
        let node = nodes.get(id).ok_or(TreeError::BrokenParentChain(goal_id))?;
        ids.push(id);
        cur = node.parent;
    }
    if *ids.last().unwrap() != 0 {
        return Err(TreeError::BrokenParentChain(goal_id));
    }
    ids.reverse();
    Ok(Branch {
        poses: ids.iter().map(|&i| nodes[i].pose).collect(),
        node_ids: ids,
        cost: goal.cost_from_root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vec3;

    fn t(x: f64) -> DualQuaternion {
        DualQuaternion::from_translation(Vec3::new(x, 0.0, 0.0))
    }

    fn w() -> MetricWeights {
        MetricWeights::default()
    }

    #[test]
    fn nearest_examples() {
        let tree = Tree::new(t(0.0), w());
        assert_eq!(tree.nearest(&t(7.0)).unwrap(), 0);
        let mut tree = tree;
        tree.add(t(1.0), 0);
        tree.add(t(2.0), 1);
        assert_eq!(tree.nearest(&t(1.0)).unwrap(), 1);
        assert_eq!(nearest(&[], &t(0.0), &w()), Err(TreeError::EmptyTree));
    }

    #[test]
    fn nearest_ties_go_to_lowest_index() {
        let mut tree = Tree::new(t(0.0), w());
        tree.add(t(2.0), 0);
        assert_eq!(tree.nearest(&t(1.0)).unwrap(), 0);
    }

    #[test]
    fn near_set_examples() {
        let mut tree = Tree::new(t(0.0), w());
        tree.add(t(1.0), 0);
        tree.add(t(3.0), 1);
        assert!(tree.near_set(&t(0.5), 0.0).is_empty());
        assert_eq!(tree.near_set(&t(0.5), 100.0), vec![0, 1, 2]);
        assert_eq!(tree.near_set(&t(0.5), 0.5), vec![0, 1]);
    }

    #[test]
    fn rewire_shortcuts_collinear_chain() {
        // 0 --> 1 (detour at x=1, y=2) --> 2 at x=2; new node at x=1 gives a
        // straight shortcut to node 2.
        let detour = DualQuaternion::from_translation(Vec3::new(1.0, 2.0, 0.0));
        let mut tree = Tree::new(t(0.0), w());
        let a = tree.add(detour, 0);
        let b = tree.add(t(2.0), a);
        let before = tree.cost(b);
        assert!((before - 2.0 * libm::sqrt(5.0)).abs() < 1e-12);
        let n = tree.add(t(1.0), 0);
        let count = tree.rewire(n, &[0, a, b], |_, _| true);
        assert_eq!(count, 1);
        assert_eq!(tree.node(b).unwrap().parent, Some(n));
        assert!((tree.cost(b) - 2.0).abs() < 1e-12);
        assert!(tree.cost(b) < before);
        tree.check_consistency(1e-9).unwrap();
    }

    #[test]
    fn rewire_updates_descendants() {
        let mut tree = Tree::new(t(0.0), w());
        let a = tree.add(DualQuaternion::from_translation(Vec3::new(1.0, 3.0, 0.0)), 0);
        let b = tree.add(t(2.0), a);
        let c = tree.add(t(5.0), b);
        let n = tree.add(t(1.0), 0);
        tree.rewire(n, &[b], |_, _| true);
        assert!((tree.cost(c) - 5.0).abs() < 1e-12);
        tree.check_consistency(1e-9).unwrap();
    }

    #[test]
    fn rewire_without_improvement_leaves_tree_alone() {
        let mut tree = Tree::new(t(0.0), w());
        let a = tree.add(t(1.0), 0);
        let b = tree.add(t(2.0), a);
        let n = tree.add(t(-1.0), 0);
        let before: Vec<_> = tree.nodes().iter().map(|n| (n.parent, n.cost_from_root)).collect();
        assert_eq!(tree.rewire(n, &[0, a, b], |_, _| true), 0);
        let after: Vec<_> = tree.nodes().iter().map(|n| (n.parent, n.cost_from_root)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn rewire_respects_blocked_edges() {
        let mut tree = Tree::new(t(0.0), w());
        let a = tree.add(DualQuaternion::from_translation(Vec3::new(1.0, 2.0, 0.0)), 0);
        let b = tree.add(t(2.0), a);
        let n = tree.add(t(1.0), 0);
        assert_eq!(tree.rewire(n, &[b], |_, _| false), 0);
        assert_eq!(tree.node(b).unwrap().parent, Some(a));
    }

    #[test]
    fn extract_path_examples() {
        let mut tree = Tree::new(t(0.0), w());
        let root = tree.extract_path(0).unwrap();
        assert_eq!(root.poses.len(), 1);
        assert_eq!(root.cost, 0.0);
        let a = tree.add(t(1.0), 0);
        let b = tree.add(t(3.0), a);
        let chain = tree.extract_path(b).unwrap();
        assert_eq!(chain.node_ids, vec![0, a, b]);
        assert_eq!(chain.poses, vec![t(0.0), t(1.0), t(3.0)]);
        assert!((chain.cost - 3.0).abs() < 1e-15);
        assert_eq!(tree.extract_path(9), Err(TreeError::UnknownNode(9)));
    }

    #[test]
    fn extract_path_detects_broken_chain() {
        let mut tree = Tree::new(t(0.0), w());
        tree.add(t(1.0), 0);
        let mut nodes = tree.nodes().to_vec();
        nodes[1].parent = Some(1);
        assert_eq!(extract_path(&nodes, 1), Err(TreeError::BrokenParentChain(1)));
        nodes[1].parent = Some(7);
        assert_eq!(extract_path(&nodes, 1), Err(TreeError::BrokenParentChain(1)));
    }
}
