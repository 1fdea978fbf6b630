use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{ceil_log2, FrequencyTable, LearningError, SlabId, SlabStructure};

pub type NodeId = u32;

/// Node of a partial search tree over leaf-slab indices `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum TreeNode {
    /// Compares against leaf slab `leaf`: left subtree covers `lo..leaf`,
    /// right subtree `leaf+1..=hi`. A child is absent iff its range is empty.
    Split {
        lo: u32,
        hi: u32,
        leaf: u32,
        left: Option<NodeId>,
        right: Option<NodeId>,
    },
    /// End of the stored tree. A single leaf slab when `lo == hi`; otherwise
    /// the search continues by plain binary search over `lo..=hi`.
    Leaf { lo: u32, hi: u32 },
}

impl TreeNode {
    pub fn range(&self) -> (SlabId, SlabId) {
        match *self {
            TreeNode::Split { lo, hi, .. } | TreeNode::Leaf { lo, hi } => {
                (lo as usize, hi as usize)
            }
        }
    }
}

/// Position of a search inside a [`SearchTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cursor {
    Node(NodeId),
    /// Binary search below a stored leaf.
    Fallback {
        lo: u32,
        hi: u32,
    },
    Located(u32),
}

/// Answers "which side of leaf slab `j`" questions for one query.
pub trait SlabQuery {
    /// `Less` if the query lies left of leaf slab `j`, `Greater` if right,
    /// `Equal` if inside.
    fn side(&mut self, j: SlabId) -> Ordering;
    /// Whether the query lies right of leaf slab `j`.
    fn right_of(&mut self, j: SlabId) -> bool;
}

/// Query by x-coordinate, counting coordinate comparisons.
pub struct XQuery<'a> {
    pub slabs: &'a SlabStructure,
    pub x: f64,
    pub comparisons: u64,
}

impl<'a> XQuery<'a> {
    pub fn new(slabs: &'a SlabStructure, x: f64) -> Self {
        XQuery {
            slabs,
            x,
            comparisons: 0,
        }
    }
}

impl SlabQuery for XQuery<'_> {
    #[inline]
    fn side(&mut self, j: SlabId) -> Ordering {
        self.comparisons += 1;
        if self.x < self.slabs.left_of(j) {
            return Ordering::Less;
        }
        if self.right_of(j) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    #[inline]
    fn right_of(&mut self, j: SlabId) -> bool {
        self.comparisons += 1;
        self.x >= self.slabs.right_of(j)
    }
}

/// Query for a known leaf slab.
pub struct LeafQuery(pub SlabId);

impl SlabQuery for LeafQuery {
    fn side(&mut self, j: SlabId) -> Ordering {
        self.0.cmp(&j)
    }

    fn right_of(&mut self, j: SlabId) -> bool {
        self.0 > j
    }
}

/// Search tree `T_i` for one input index; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTree {
    point: usize,
    nodes: Vec<TreeNode>,
}

impl SearchTree {
    /// Assembles a tree from explicit nodes, checking that every split's
    /// children partition its range minus the split leaf.
    pub fn from_nodes(point: usize, nodes: Vec<TreeNode>) -> Result<Self, LearningError> {
        let tree = SearchTree { point, nodes };
        tree.validate()?;
        Ok(tree)
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Stored (partial-tree) node count.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn root_range(&self) -> (SlabId, SlabId) {
        self.nodes[0].range()
    }

    fn validate(&self) -> Result<(), LearningError> {
        let bad = |why: String| Err(LearningError::InvalidTree(why));
        if self.nodes.is_empty() {
            return bad("tree has no nodes".into());
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![(0 as NodeId, self.nodes[0].range())];
        while let Some((id, (lo, hi))) = stack.pop() {
            let Some(node) = self.nodes.get(id as usize) else {
                return bad(format!("child id {id} out of range"));
            };
            if std::mem::replace(&mut seen[id as usize], true) {
                return bad(format!("node {id} reachable twice"));
            }
            if node.range() != (lo, hi) || lo > hi {
                return bad(format!(
                    "node {id} covers {:?}, expected {lo}..={hi}",
                    node.range()
                ));
            }
            if let TreeNode::Split {
                leaf, left, right, ..
            } = *node
            {
                let leaf = leaf as usize;
                if !(lo..=hi).contains(&leaf) {
                    return bad(format!("node {id} splits outside its range"));
                }
                match (left, leaf > lo) {
                    (Some(c), true) => stack.push((c, (lo, leaf - 1))),
                    (None, false) => {}
                    _ => return bad(format!("node {id} has a wrong left child")),
                }
                match (right, leaf < hi) {
                    (Some(c), true) => stack.push((c, (leaf + 1, hi))),
                    (None, false) => {}
                    _ => return bad(format!("node {id} has a wrong right child")),
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("unreachable nodes".into());
        }
        Ok(())
    }

    pub fn start(&self) -> Cursor {
        self.enter(0)
    }

    fn enter(&self, id: NodeId) -> Cursor {
        match self.nodes[id as usize] {
            TreeNode::Split { .. } => Cursor::Node(id),
            TreeNode::Leaf { lo, hi } if lo == hi => Cursor::Located(lo),
            TreeNode::Leaf { lo, hi } => Cursor::Fallback { lo, hi },
        }
    }

    /// Leaf-slab range the cursor has narrowed the query to.
    #[inline]
    pub fn range(&self, cursor: Cursor) -> (SlabId, SlabId) {
        match cursor {
            Cursor::Node(id) => self.nodes[id as usize].range(),
            Cursor::Fallback { lo, hi } => (lo as usize, hi as usize),
            Cursor::Located(j) => (j as usize, j as usize),
        }
    }

    /// Advances the search by one node. Located cursors do not move.
    #[inline]
    pub fn step<Q: SlabQuery>(&self, cursor: Cursor, query: &mut Q) -> Cursor {
        match cursor {
            Cursor::Located(_) => cursor,
            Cursor::Node(id) => {
                let TreeNode::Split {
                    leaf, left, right, ..
                } = self.nodes[id as usize]
                else {
                    unreachable!("cursor nodes are splits")
                };
                match query.side(leaf as usize) {
                    Ordering::Equal => Cursor::Located(leaf),
                    Ordering::Less => {
                        self.enter(left.expect("query left of the split leaf inside the node"))
                    }
                    Ordering::Greater => {
                        self.enter(right.expect("query right of the split leaf inside the node"))
                    }
                }
            }
            Cursor::Fallback { lo, hi } => {
                let mid = lo + (hi - lo) / 2;
                let (lo, hi) = if query.right_of(mid as usize) {
                    (mid + 1, hi)
                } else {
                    (lo, mid)
                };
                if lo == hi {
                    Cursor::Located(lo)
                } else {
                    Cursor::Fallback { lo, hi }
                }
            }
        }
    }

    /// Runs a full search, returning the leaf slab and the number of steps.
    pub fn locate<Q: SlabQuery>(&self, query: &mut Q) -> (SlabId, usize) {
        let mut cursor = self.start();
        let mut steps = 0;
        loop {
            if let Cursor::Located(j) = cursor {
                return (j as usize, steps);
            }
            cursor = self.step(cursor, query);
            steps += 1;
        }
    }

    /// Depth of the stored partial tree in edges.
    pub fn partial_depth(&self) -> usize {
        self.walk().map(|(_, depth)| depth).max().unwrap_or(0)
    }

    /// Longest search in steps, counting the implicit binary search below
    /// stored leaves.
    pub fn max_search_depth(&self) -> usize {
        self.walk()
            .map(|(node, depth)| match *node {
                TreeNode::Split { .. } => depth + 1,
                TreeNode::Leaf { lo, hi } => depth + ceil_log2((hi - lo + 1) as usize),
            })
            .max()
            .unwrap_or(0)
    }

    fn walk(&self) -> impl Iterator<Item = (&TreeNode, usize)> + '_ {
        let mut stack = vec![(0 as NodeId, 0usize)];
        std::iter::from_fn(move || {
            let (id, depth) = stack.pop()?;
            let node = &self.nodes[id as usize];
            if let TreeNode::Split { left, right, .. } = *node {
                stack.extend(left.into_iter().chain(right).map(|c| (c, depth + 1)));
            }
            Some((node, depth))
        })
    }
}

/// Builds `T_i` from the training counts of point `i`.
///
/// A slab whose count is below `leaf_threshold` becomes a stored leaf.
/// Otherwise the split leaf is the weighted median: the smallest leaf slab
/// whose prefix count reaches half of the slab's count. Both sides then hold
/// at most half of it.
pub fn build_search_tree(i: usize, freq: &FrequencyTable, leaf_threshold: u32) -> SearchTree {
    let mut nodes = Vec::new();
    let top = freq.num_slabs().saturating_sub(1);
    build_node(&mut nodes, i, freq, leaf_threshold.max(1), 0, top);
    SearchTree { point: i, nodes }
}

fn build_node(
    nodes: &mut Vec<TreeNode>,
    i: usize,
    freq: &FrequencyTable,
    threshold: u32,
    lo: SlabId,
    hi: SlabId,
) -> NodeId {
    let id = nodes.len() as NodeId;
    let count = freq.range_count(i, lo, hi);
    if lo == hi || count < threshold {
        nodes.push(TreeNode::Leaf {
            lo: lo as u32,
            hi: hi as u32,
        });
        return id;
    }
    let leaf = freq.prefix_reaching(i, lo, count.div_ceil(2));
    nodes.push(TreeNode::Leaf { lo: 0, hi: 0 });
    let left = (leaf > lo).then(|| build_node(nodes, i, freq, threshold, lo, leaf - 1));
    let right = (leaf < hi).then(|| build_node(nodes, i, freq, threshold, leaf + 1, hi));
    nodes[id as usize] = TreeNode::Split {
        lo: lo as u32,
        hi: hi as u32,
        leaf: leaf as u32,
        left,
        right,
    };
    id
}

/// True iff every split child of every split node carries at most `mu`
/// times its parent's count.
pub fn check_mu_reducing(tree: &SearchTree, freq: &FrequencyTable, mu: f64) -> bool {
    let count = |node: &TreeNode| {
        let (lo, hi) = node.range();
        freq.range_count(tree.point, lo, hi) as f64
    };
    tree.nodes.iter().all(|node| {
        let TreeNode::Split { left, right, .. } = *node else {
            return true;
        };
        let parent = count(node);
        left.into_iter().chain(right).all(|c| {
            let child = &tree.nodes[c as usize];
            !matches!(child, TreeNode::Split { .. }) || count(child) <= mu * parent
        })
    })
}
